//! Classical multiplicity algorithms used to cross-check everything else:
//! Freudenthal's recursion and Gelfand–Tsetlin pattern counting.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rootsys::{cartan_matrix, Weight};

type Table = HashMap<Vec<i64>, BigUint>;

/// Freudenthal's formula over the weight lattice, one table per `λ`.
///
/// The form is `Q(x, y) = xᵀ G y` on ω-coordinates with `G = (l+1) C⁻¹`,
/// i.e. `(l+1)` times the invariant form normalized by `(α, α) = 2`. Since
/// `(x, α_{[i,j]}) = x_i + … + x_j` without scaling, the recursion reads
///
/// ```text
/// m(μ) = 2 (l+1) Σ_{α>0} Σ_{k≥1} m(μ + kα) (μ + kα, α) / (Q(λ+ρ) - Q(μ+ρ))
/// ```
#[derive(Debug, Default)]
pub struct Freudenthal {
    tables: Mutex<HashMap<Weight, Arc<Table>>>,
}

impl Freudenthal {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide instance.
    pub fn global() -> &'static Freudenthal {
        static GLOBAL: OnceLock<Freudenthal> = OnceLock::new();
        GLOBAL.get_or_init(Freudenthal::new)
    }

    fn table(&self, lambda: &Weight) -> Result<Arc<Table>> {
        lambda.ensure_dominant()?;
        if let Some(t) = self.lock().get(lambda) {
            return Ok(t.clone());
        }
        let t = Arc::new(build_table(lambda)?);
        self.lock()
            .entry(lambda.clone())
            .or_insert_with(|| t.clone());
        Ok(t)
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, HashMap<Weight, Arc<Table>>> {
        self.tables.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn mult(&self, lambda: &Weight, mu: &Weight) -> Result<BigUint> {
        mu.ensure_rank(lambda.rank())?;
        Ok(self
            .table(lambda)?
            .get(mu.coords())
            .cloned()
            .unwrap_or_default())
    }

    pub fn character(&self, lambda: &Weight) -> Result<BTreeMap<Weight, BigUint>> {
        Ok(self
            .table(lambda)?
            .iter()
            .map(|(k, v)| (Weight::new(k.clone()).expect("nonempty"), v.clone()))
            .collect())
    }

    /// Seeds the table for `λ` with known values (from a persisted cache).
    /// Tables are only accepted whole, and are replaced if already present.
    pub fn insert_table(&self, lambda: Weight, entries: BTreeMap<Weight, BigUint>) {
        let t: Table = entries
            .into_iter()
            .map(|(k, v)| (k.coords().to_vec(), v))
            .collect();
        self.lock().insert(lambda, Arc::new(t));
    }

    /// All cached tables as `(λ, μ, m)` triples, sorted.
    pub fn export(&self) -> Vec<(Weight, Weight, BigUint)> {
        let mut out: Vec<(Weight, Weight, BigUint)> = self
            .lock()
            .iter()
            .flat_map(|(lam, t)| {
                t.iter().map(move |(mu, m)| {
                    (
                        lam.clone(),
                        Weight::new(mu.clone()).expect("nonempty"),
                        m.clone(),
                    )
                })
            })
            .collect();
        out.sort();
        out
    }
}

fn build_table(lambda: &Weight) -> Result<Table> {
    let l = lambda.coords().len();
    let rank = lambda.rank();
    let cartan = &cartan_matrix(rank);
    let scale = (l + 1) as i64;
    let gram: Vec<Vec<i64>> = (1..=l)
        .map(|i| {
            (1..=l)
                .map(|j| (i.min(j) * (l + 1 - i.max(j))) as i64)
                .collect()
        })
        .collect();
    let q = |x: &[i64]| -> i64 {
        (0..l)
            .map(|i| (0..l).map(|j| x[i] * gram[i][j] * x[j]).sum::<i64>())
            .sum()
    };
    let shifted = |x: &[i64]| -> Vec<i64> { x.iter().map(|c| c + 1).collect() };
    let top = q(&shifted(lambda.coords()));

    // positive roots as (ω-coordinates, height, interval)
    let roots: Vec<(Vec<i64>, usize, usize, usize)> = (1..=l)
        .flat_map(|j| (1..=j).rev().map(move |i| (i, j)))
        .map(|(i, j)| {
            let v = (0..l)
                .map(|r| (i..=j).map(|m| cartan[r][m - 1]).sum())
                .collect();
            (v, j - i + 1, i, j)
        })
        .collect();

    let mut table: Table = HashMap::new();
    table.insert(lambda.coords().to_vec(), BigUint::from(1u32));
    let mut level: Vec<Vec<i64>> = vec![lambda.coords().to_vec()];
    let mut depth = 0usize;
    while !level.is_empty() {
        depth += 1;
        let mut candidates: Vec<Vec<i64>> = level
            .iter()
            .flat_map(|nu| {
                (0..l).map(move |s| (0..l).map(|r| nu[r] - cartan[r][s]).collect::<Vec<i64>>())
            })
            .collect();
        candidates.sort();
        candidates.dedup();
        let mut next = Vec::new();
        for mu in candidates {
            let denom = top - q(&shifted(&mu));
            if denom <= 0 {
                continue;
            }
            let mut num = BigInt::zero();
            for (alpha, height, i, j) in &roots {
                let mut k = 1usize;
                while k * height <= depth {
                    let up: Vec<i64> = mu
                        .iter()
                        .zip(alpha)
                        .map(|(m, a)| m + (k as i64) * a)
                        .collect();
                    if let Some(mult) = table.get(&up) {
                        let pairing: i64 = up[i - 1..*j].iter().sum();
                        num += BigInt::from(mult.clone()) * pairing;
                    }
                    k += 1;
                }
            }
            num *= 2 * scale;
            let (m, rem) = num.div_rem(&BigInt::from(denom));
            assert!(rem.is_zero(), "inexact Freudenthal step at {mu:?}");
            match m.sign() {
                Sign::Plus => {
                    table.insert(mu.clone(), m.to_biguint().expect("positive"));
                    next.push(mu);
                }
                Sign::NoSign => {}
                Sign::Minus => panic!("negative Freudenthal multiplicity at {mu:?}"),
            }
        }
        level = next;
    }
    Ok(table)
}

pub fn freudenthal_mult(lambda: &Weight, mu: &Weight) -> Result<BigUint> {
    Freudenthal::global().mult(lambda, mu)
}

pub fn freudenthal_character(lambda: &Weight) -> Result<BTreeMap<Weight, BigUint>> {
    Freudenthal::global().character(lambda)
}

/// Triangular interlacing array; `rows[0]` is the top row of length `l + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GtPattern {
    rows: Vec<Vec<i64>>,
}

impl GtPattern {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n - r {
                return Err(Error::LengthMismatch {
                    expected: n - r,
                    got: row.len(),
                });
            }
        }
        for (r, row) in rows.iter().enumerate() {
            if let Some(lower) = rows.get(r + 1) {
                let ok = (0..lower.len()).all(|i| row[i] >= lower[i] && lower[i] >= row[i + 1]);
                if !ok {
                    return Err(Error::Parse(format!(
                        "rows {r} and {} do not interlace",
                        r + 1
                    )));
                }
            }
        }
        Ok(GtPattern { rows })
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Weight in ω-coordinates: `μ_i = w_i - w_{i+1}` where `w_r` is the
    /// difference of the sums of the rows of length `r` and `r - 1`.
    pub fn weight(&self) -> Weight {
        let sums = row_sums_bottom_up(&self.rows);
        weight_from_row_sums(&sums)
    }
}

fn row_sums_bottom_up(rows: &[Vec<i64>]) -> Vec<i64> {
    rows.iter().rev().map(|r| r.iter().sum()).collect()
}

fn weight_from_row_sums(sums: &[i64]) -> Weight {
    let eps: Vec<i64> = (0..sums.len())
        .map(|r| sums[r] - if r == 0 { 0 } else { sums[r - 1] })
        .collect();
    Weight::new(eps.windows(2).map(|p| p[0] - p[1]).collect()).expect("rank >= 1")
}

/// Top row `(λ_1 + … + λ_l, λ_2 + … + λ_l, …, λ_l, 0)`.
pub fn top_row(lambda: &Weight) -> Vec<i64> {
    let c = lambda.coords();
    let mut row: Vec<i64> = (0..c.len()).map(|i| c[i..].iter().sum()).collect();
    row.push(0);
    row
}

/// Row sums `s_1, …, s_{l+1}` (row of length `r` sums to `s_r`) forced on a
/// pattern of weight `μ` under top row `top`, or `None` if `μ` is not in the
/// right coset.
pub fn row_sums_for_weight(top: &[i64], mu: &Weight) -> Option<Vec<i64>> {
    let l = mu.coords().len();
    if top.len() != l + 1 {
        return None;
    }
    let total: i64 = top.iter().sum();
    let moment: i64 = mu
        .coords()
        .iter()
        .enumerate()
        .map(|(m, &x)| (m as i64 + 1) * x)
        .sum();
    let (last, rem) = (total - moment).div_rem(&(l as i64 + 1));
    if rem != 0 {
        return None;
    }
    // ε-coordinates w_r = last + Σ_{m ≥ r} μ_m
    let mut eps = vec![last; l + 1];
    for r in (0..l).rev() {
        eps[r] = eps[r + 1] + mu.coords()[r];
    }
    let mut acc = 0;
    Some(
        eps.into_iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect(),
    )
}

/// Number of patterns under `top` whose rows (bottom-up) sum to `sums`
/// (or any sums when `None`), tallied by callback.
fn walk_patterns(top: &[i64], sums: Option<&[i64]>, visit: &mut dyn FnMut(&[Vec<i64>])) {
    fn fill_row(
        upper: &[i64],
        target: Option<i64>,
        row: &mut Vec<i64>,
        acc: i64,
        rows: &mut Vec<Vec<i64>>,
        sums: Option<&[i64]>,
        visit: &mut dyn FnMut(&[Vec<i64>]),
    ) {
        let n = upper.len() - 1;
        let i = row.len();
        if i == n {
            if target.is_none_or(|t| t == acc) {
                rows.push(row.clone());
                descend(rows, sums, visit);
                rows.pop();
            }
            return;
        }
        // remaining entries i..n lie in [upper[k+1], upper[k]]
        let (lo_rest, hi_rest): (i64, i64) = (i + 1..n)
            .map(|k| (upper[k + 1], upper[k]))
            .fold((0, 0), |(a, b), (x, y)| (a + x, b + y));
        for v in upper[i + 1]..=upper[i] {
            if let Some(t) = target {
                let s = acc + v;
                if s + lo_rest > t || s + hi_rest < t {
                    continue;
                }
            }
            row.push(v);
            fill_row(upper, target, row, acc + v, rows, sums, visit);
            row.pop();
        }
    }

    fn descend(rows: &mut Vec<Vec<i64>>, sums: Option<&[i64]>, visit: &mut dyn FnMut(&[Vec<i64>])) {
        let upper = rows.last().expect("top row present").clone();
        if upper.len() == 1 {
            visit(rows);
            return;
        }
        let target = sums.map(|s| s[upper.len() - 2]);
        fill_row(&upper, target, &mut Vec::new(), 0, rows, sums, visit);
    }

    let mut rows = vec![top.to_vec()];
    descend(&mut rows, sums, visit);
}

/// All Gelfand–Tsetlin patterns with top row from `λ`.
pub fn gt_patterns(lambda: &Weight) -> Result<Vec<GtPattern>> {
    lambda.ensure_dominant()?;
    let mut out = Vec::new();
    walk_patterns(&top_row(lambda), None, &mut |rows| {
        out.push(GtPattern {
            rows: rows.to_vec(),
        })
    });
    Ok(out)
}

/// `m_λ(μ)` as the number of patterns of weight `μ`.
pub fn gt_count(lambda: &Weight, mu: &Weight) -> Result<BigUint> {
    lambda.ensure_dominant()?;
    mu.ensure_rank(lambda.rank())?;
    let top = top_row(lambda);
    let Some(sums) = row_sums_for_weight(&top, mu) else {
        return Ok(BigUint::zero());
    };
    let mut n: u64 = 0;
    walk_patterns(&top, Some(&sums), &mut |_| n += 1);
    Ok(BigUint::from(n))
}

/// Full character by tallying every pattern.
pub fn gt_character(lambda: &Weight) -> Result<BTreeMap<Weight, BigUint>> {
    lambda.ensure_dominant()?;
    let mut tally: BTreeMap<Weight, u64> = BTreeMap::new();
    walk_patterns(&top_row(lambda), None, &mut |rows| {
        let sums = row_sums_bottom_up(rows);
        *tally.entry(weight_from_row_sums(&sums)).or_default() += 1;
    });
    Ok(tally
        .into_iter()
        .map(|(k, v)| (k, BigUint::from(v)))
        .collect())
}
