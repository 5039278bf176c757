//! Exhaustive property sweeps over small highest weights.

use std::collections::HashSet;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::branch::check_dim_sum;
use crate::error::Result;
use crate::monomial::{pi_elements_bounded, MonomialIndex};
use crate::mult::{DimMethod, Method, MultEngine};
use crate::oracle::gt_character;
use crate::pbw::Straightener;
use crate::rootsys::{reflect, weyl_dim, Rank, Weight};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub name: &'static str,
    pub checked: usize,
    /// First failing case in sweep order and what went wrong.
    pub counterexample: Option<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Dominant weights of rank `1..=max_rank` with coordinates at most
/// `max_coord`, ordered by rank and then lexicographically.
pub fn dominant_weights(max_rank: usize, max_coord: u32) -> Vec<Weight> {
    let mut out = Vec::new();
    for l in 1..=max_rank {
        let mut coords = vec![0i64; l];
        loop {
            out.push(Weight::new(coords.clone()).expect("rank is positive"));
            let Some(pos) = coords.iter().rposition(|&c| c < i64::from(max_coord)) else {
                break;
            };
            coords[pos] += 1;
            coords[pos + 1..].iter_mut().for_each(|c| *c = 0);
        }
    }
    out
}

type Check = fn(&MultEngine, &Weight) -> Result<Option<String>>;

fn check_dim(engine: &MultEngine, lambda: &Weight) -> Result<Option<String>> {
    let e = engine.dim(lambda, DimMethod::Enum)?;
    let w = weyl_dim(lambda)?;
    Ok((e != w).then(|| format!("enumerated {e}, Weyl {w}")))
}

fn check_branch(_: &MultEngine, lambda: &Weight) -> Result<Option<String>> {
    if lambda.coords().len() < 2 {
        return Ok(None);
    }
    Ok((!check_dim_sum(lambda)?).then(|| "component dimensions do not add up".to_string()))
}

fn check_methods(engine: &MultEngine, lambda: &Weight) -> Result<Option<String>> {
    let count = engine.character(lambda, Method::Count)?;
    for m in [Method::Recursive, Method::Freudenthal] {
        let other = engine.character(lambda, m)?;
        if let Some((mu, _)) = count.iter().find(|(mu, v)| other.get(mu) != **v) {
            return Ok(Some(format!("{m} disagrees with count at {mu}")));
        }
        if other.len() != count.len() {
            return Ok(Some(format!("{m} has a different support")));
        }
    }
    let gt = gt_character(lambda)?;
    if gt.len() != count.len() || gt.iter().any(|(mu, v)| &count.get(mu) != v) {
        return Ok(Some("pattern count disagrees with count".to_string()));
    }
    Ok(None)
}

fn check_weyl(engine: &MultEngine, lambda: &Weight) -> Result<Option<String>> {
    let ch = engine.character(lambda, Method::Count)?;
    for (mu, m) in ch.iter() {
        for i in 1..=lambda.coords().len() {
            let r = reflect(mu, i)?;
            if &ch.get(&r) != m {
                return Ok(Some(format!("m({mu}) != m(s{i} {mu})")));
            }
        }
    }
    Ok(None)
}

const PROPERTIES: [(&str, Check); 4] = [
    ("basis size equals Weyl dimension", check_dim),
    ("branching dimensions add up", check_branch),
    ("multiplicity methods agree", check_methods),
    ("characters are Weyl invariant", check_weyl),
];

/// Runs every property on every weight from [`dominant_weights`].
pub fn verify_all(
    engine: &MultEngine,
    max_rank: usize,
    max_coord: u32,
) -> Result<Vec<PropertyReport>> {
    let weights = dominant_weights(max_rank, max_coord);
    PROPERTIES
        .iter()
        .map(|&(name, check)| {
            let outcomes: Vec<Option<String>> = weights
                .par_iter()
                .map(|lam| check(engine, lam))
                .collect::<Result<_>>()?;
            let counterexample = weights
                .iter()
                .zip(outcomes)
                .find_map(|(lam, o)| o.map(|msg| format!("lambda = {lam}: {msg}")));
            Ok(PropertyReport {
                name,
                checked: weights.len(),
                counterexample,
            })
        })
        .chain([
            leading_terms(max_rank, max_coord),
            bijection(max_rank, max_coord),
        ])
        .collect()
}

fn monomial_sweep(max_rank: usize, max_coord: u32) -> Vec<MonomialIndex> {
    (1..=max_rank)
        .flat_map(|l| pi_elements_bounded(Rank::new(l).expect("rank is positive"), max_coord))
        .collect()
}

fn leading_terms(max_rank: usize, max_coord: u32) -> Result<PropertyReport> {
    let ks = monomial_sweep(max_rank, max_coord);
    let outcomes: Vec<Option<String>> = ks
        .par_iter()
        .map(|k| {
            let ok = Straightener::new(k.rank()).verify_leading_term::<BigInt>(k)?;
            Ok((!ok).then(|| format!("K = {k}: wrong leading term")))
        })
        .collect::<Result<_>>()?;
    let mut counterexample = outcomes.into_iter().flatten().next();
    if counterexample.is_none() {
        let mut seen = HashSet::new();
        for k in &ks {
            if !seen.insert(k.i_of_k()?) {
                counterexample = Some(format!("K = {k}: exponent vector repeats"));
                break;
            }
        }
    }
    Ok(PropertyReport {
        name: "theta^K has leading term f^I(K)",
        checked: ks.len(),
        counterexample,
    })
}

fn bijection(max_rank: usize, max_coord: u32) -> Result<PropertyReport> {
    let ks = monomial_sweep(max_rank, max_coord);
    let mut counterexample = None;
    for k in &ks {
        let i = k.i_of_k()?;
        let back = MonomialIndex::k_of_i(&i)?;
        if &back != k || back.i_of_k()? != i {
            counterexample = Some(format!("K = {k}: roundtrip gives {back}"));
            break;
        }
    }
    Ok(PropertyReport {
        name: "K and I(K) determine each other",
        checked: ks.len(),
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_grid() {
        let ws = dominant_weights(2, 1);
        let got: Vec<Vec<i64>> = ws.iter().map(|w| w.coords().to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![0],
                vec![1],
                vec![0, 0],
                vec![0, 1],
                vec![1, 0],
                vec![1, 1]
            ]
        );
        assert_eq!(dominant_weights(3, 2).len(), 3 + 9 + 27);
    }

    #[test]
    fn small_sweep_passes() {
        let reports = verify_all(&MultEngine::new(), 3, 1).unwrap();
        assert_eq!(reports.len(), 6);
        assert!(reports.iter().all(|r| r.passed()), "{reports:?}");
    }
}
