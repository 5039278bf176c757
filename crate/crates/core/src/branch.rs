//! Restriction of `V(λ)` from `A_l` to `A_{l-1}`: one irreducible component
//! per `P ∈ Π′_λ`, with highest weight `(λ - Pα)` restricted.

use num_bigint::BigUint;

use crate::basis::{enumerate_pi_prime, PiPrimeElement};
use crate::error::{Error, Result};
use crate::rootsys::{weyl_dim, Weight};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchComponent {
    /// 1-based position in the `≺` order of `Π′_λ`.
    pub index: usize,
    pub p: PiPrimeElement,
    pub highest_weight: Weight,
    pub dim: BigUint,
}

/// `(λ - Σ p_i α_i)` restricted to the first `l - 1` coordinates.
pub fn component_weight(lambda: &Weight, p: &PiPrimeElement) -> Result<Weight> {
    let l = lambda.coords().len();
    if l < 2 {
        return Err(Error::NoSubalgebra);
    }
    let pc = p.coords();
    if pc.len() != l {
        return Err(Error::LengthMismatch {
            expected: l,
            got: pc.len(),
        });
    }
    let at = |m: usize| -> i64 {
        // 1-based with p_0 = 0
        if m == 0 {
            0
        } else {
            i64::from(pc[m - 1])
        }
    };
    let coords = (1..l)
        .map(|j| {
            lambda.coords()[j - 1]
                .checked_sub(2 * at(j))
                .and_then(|v| v.checked_add(at(j - 1) + at(j + 1)))
                .ok_or(Error::Overflow("component weight"))
        })
        .collect::<Result<Vec<_>>>()?;
    Weight::new(coords)
}

pub fn branch(lambda: &Weight) -> Result<Vec<BranchComponent>> {
    lambda.ensure_dominant()?;
    if lambda.coords().len() < 2 {
        return Err(Error::NoSubalgebra);
    }
    enumerate_pi_prime(lambda)?
        .into_iter()
        .enumerate()
        .map(|(n, p)| {
            let highest_weight = component_weight(lambda, &p)?;
            debug_assert!(highest_weight.is_dominant());
            let dim = weyl_dim(&highest_weight)?;
            Ok(BranchComponent {
                index: n + 1,
                p,
                highest_weight,
                dim,
            })
        })
        .collect()
}

/// Whether the component dimensions add up to `dim V(λ)`.
pub fn check_dim_sum(lambda: &Weight) -> Result<bool> {
    let total: BigUint = branch(lambda)?.iter().map(|c| &c.dim).sum();
    Ok(total == weyl_dim(lambda)?)
}
