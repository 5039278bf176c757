//! Root data for the type-A series: Cartan matrix, the fixed ordering of
//! positive roots, conversions between fundamental-weight and simple-root
//! coordinates, and the Weyl dimension formula.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Rank `l` of the algebra `A_l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank(usize);

impl Rank {
    pub fn new(l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::ZeroRank);
        }
        Ok(Rank(l))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Number of positive roots, `l(l+1)/2`.
    #[inline]
    pub fn num_positive_roots(self) -> usize {
        self.0 * (self.0 + 1) / 2
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A weight in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroRank);
        }
        Ok(Weight(coords))
    }

    pub fn zero(rank: Rank) -> Self {
        Weight(vec![0; rank.get()])
    }

    pub fn rank(&self) -> Rank {
        Rank(self.0.len())
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn ensure_dominant(&self) -> Result<()> {
        if self.is_dominant() {
            Ok(())
        } else {
            Err(Error::NotDominant(self.0.clone()))
        }
    }

    pub(crate) fn ensure_rank(&self, rank: Rank) -> Result<()> {
        if self.0.len() != rank.get() {
            return Err(Error::LengthMismatch {
                expected: rank.get(),
                got: self.0.len(),
            });
        }
        Ok(())
    }

    pub fn checked_sub(&self, other: &Weight) -> Result<Vec<i64>> {
        if self.0.len() != other.0.len() {
            return Err(Error::LengthMismatch {
                expected: self.0.len(),
                got: other.0.len(),
            });
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                a.checked_sub(*b)
                    .ok_or(Error::Overflow("weight difference"))
            })
            .collect()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// Coefficients of `Σ a_i α_i`, all nonnegative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlphaVector(Vec<u32>);

impl AlphaVector {
    pub fn new(coeffs: Vec<u32>) -> Self {
        AlphaVector(coeffs)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for AlphaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// Positive root `α_i + α_{i+1} + … + α_j`, with `1 ≤ i ≤ j ≤ l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootInterval {
    i: usize,
    j: usize,
}

impl RootInterval {
    pub fn new(i: usize, j: usize, rank: Rank) -> Result<Self> {
        if i == 0 || i > j || j > rank.get() {
            return Err(Error::InvalidRoot {
                i,
                j,
                rank: rank.get(),
            });
        }
        Ok(RootInterval { i, j })
    }

    pub fn simple(i: usize, rank: Rank) -> Result<Self> {
        Self::new(i, i, rank)
    }

    #[inline]
    pub fn start(self) -> usize {
        self.i
    }

    #[inline]
    pub fn end(self) -> usize {
        self.j
    }

    #[inline]
    pub fn height(self) -> usize {
        self.j - self.i + 1
    }

    pub fn is_simple(self) -> bool {
        self.i == self.j
    }

    /// Position of this root in the fixed order (0-based). Roots are grouped
    /// by right endpoint; inside group `j` the left endpoint decreases.
    #[inline]
    pub fn position(self) -> usize {
        self.j * (self.j - 1) / 2 + (self.j - self.i)
    }

    /// The interval `self ∪ other` when `other` starts right after `self` ends.
    pub fn concat(self, other: RootInterval) -> Option<RootInterval> {
        (self.j + 1 == other.i).then_some(RootInterval {
            i: self.i,
            j: other.j,
        })
    }
}

impl fmt::Display for RootInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.i == self.j {
            write!(f, "f{}", self.i)
        } else {
            write!(f, "f{}~{}", self.i, self.j)
        }
    }
}

/// Per-rank root data, built once and shared.
#[derive(Debug)]
pub struct RootSystem {
    rank: Rank,
    roots: Vec<RootInterval>,
    cartan: Vec<Vec<i64>>,
}

impl RootSystem {
    /// Shared instance for `rank`.
    pub fn of(rank: Rank) -> Arc<RootSystem> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<RootSystem>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry(rank.get())
            .or_insert_with(|| Arc::new(RootSystem::build(rank)))
            .clone()
    }

    fn build(rank: Rank) -> RootSystem {
        let l = rank.get();
        let mut roots = Vec::with_capacity(rank.num_positive_roots());
        for j in 1..=l {
            for i in (1..=j).rev() {
                roots.push(RootInterval { i, j });
            }
        }
        let cartan = (0..l)
            .map(|r| {
                (0..l)
                    .map(|c| match r.abs_diff(c) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        RootSystem {
            rank,
            roots,
            cartan,
        }
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn positive_roots(&self) -> &[RootInterval] {
        &self.roots
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }
}

pub fn cartan_matrix(rank: Rank) -> Vec<Vec<i64>> {
    RootSystem::of(rank).cartan.clone()
}

/// Positive roots in the order `α_1; α_2, α_{12}; α_3, α_{23}, α_{13}; …`.
pub fn positive_roots_ordered(rank: Rank) -> Vec<RootInterval> {
    RootSystem::of(rank).roots.clone()
}

/// Solves `C a = d` for `a` over the rationals. Returns `None` unless every
/// `a_i` is a nonnegative integer.
pub fn weight_to_alpha(rank: Rank, d: &[i64]) -> Result<Option<AlphaVector>> {
    let l = rank.get();
    if d.len() != l {
        return Err(Error::LengthMismatch {
            expected: l,
            got: d.len(),
        });
    }
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));

    // Thomas algorithm on the tridiagonal system (sub/super diagonal -1, diagonal 2).
    let mut diag: Vec<BigRational> = Vec::with_capacity(l);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(l);
    for r in 0..l {
        let (mut dr, mut br) = (q(2), q(d[r]));
        if r > 0 {
            // eliminate the -1 below the previous pivot
            let factor = q(-1) / &diag[r - 1];
            dr -= &factor * q(-1);
            br -= &factor * &rhs[r - 1];
        }
        diag.push(dr);
        rhs.push(br);
    }
    let mut sol = vec![BigRational::zero(); l];
    for r in (0..l).rev() {
        let mut acc = rhs[r].clone();
        if r + 1 < l {
            acc += &sol[r + 1];
        }
        sol[r] = acc / &diag[r];
    }

    let mut out = Vec::with_capacity(l);
    for a in sol {
        if !a.is_integer() || a.is_negative() {
            return Ok(None);
        }
        match a.to_integer().to_u32() {
            Some(v) => out.push(v),
            None => return Err(Error::Overflow("alpha coordinate")),
        }
    }
    Ok(Some(AlphaVector(out)))
}

/// `C a` in fundamental-weight coordinates.
pub fn alpha_to_weight(rank: Rank, a: &AlphaVector) -> Result<Vec<i64>> {
    let l = rank.get();
    if a.0.len() != l {
        return Err(Error::LengthMismatch {
            expected: l,
            got: a.0.len(),
        });
    }
    let coeff = |m: usize| i64::from(a.0[m]);
    (0..l)
        .map(|r| {
            let mut v = 2 * coeff(r);
            if r > 0 {
                v = v.checked_sub(coeff(r - 1)).ok_or(Error::Overflow("C a"))?;
            }
            if r + 1 < l {
                v = v.checked_sub(coeff(r + 1)).ok_or(Error::Overflow("C a"))?;
            }
            Ok(v)
        })
        .collect()
}

/// Drops the last coordinate: the weight as seen by `A_{l-1}`.
pub fn restrict_weight(lambda: &Weight) -> Result<Weight> {
    if lambda.0.len() < 2 {
        return Err(Error::NoSubalgebra);
    }
    Ok(Weight(lambda.0[..lambda.0.len() - 1].to_vec()))
}

/// The simple reflection `s_i` (1-based) acting on ω-coordinates.
pub fn reflect(mu: &Weight, i: usize) -> Result<Weight> {
    let l = mu.0.len();
    if i == 0 || i > l {
        return Err(Error::InvalidRoot { i, j: i, rank: l });
    }
    let t = mu.0[i - 1];
    let mut out = mu.0.clone();
    let r = i - 1;
    out[r] = out[r]
        .checked_sub(2 * t)
        .ok_or(Error::Overflow("reflection"))?;
    if r > 0 {
        out[r - 1] = out[r - 1]
            .checked_add(t)
            .ok_or(Error::Overflow("reflection"))?;
    }
    if r + 1 < l {
        out[r + 1] = out[r + 1]
            .checked_add(t)
            .ok_or(Error::Overflow("reflection"))?;
    }
    Ok(Weight(out))
}

/// Dimension of `V(λ)` by the Weyl dimension formula, as a product over the
/// positive roots `[i, j]` of `(Σ_{m=i}^{j} (λ_m + 1)) / (j - i + 1)`.
pub fn weyl_dim(lambda: &Weight) -> Result<BigUint> {
    lambda.ensure_dominant()?;
    let c = &lambda.0;
    let l = c.len();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..l {
        let mut s: u64 = 0;
        for i in (0..=j).rev() {
            s = s
                .checked_add(c[i] as u64 + 1)
                .ok_or(Error::Overflow("weyl dimension"))?;
            num *= s;
            den *= (j - i + 1) as u64;
        }
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    Ok(q)
}

pub(crate) fn write_tuple<T: fmt::Display>(f: &mut fmt::Formatter<'_>, xs: &[T]) -> fmt::Result {
    write!(f, "(")?;
    for (n, x) in xs.iter().enumerate() {
        if n > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}
