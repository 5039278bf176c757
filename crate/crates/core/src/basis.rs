//! The λ-dependent index sets: bounds `λ_i^j`, the basis index set `Π_λ`
//! and the branching index set `Π′_λ`.
//!
//! Blocks are visited in the order their factors act on the highest-weight
//! vector: superscript `j = 1` (the rightmost block of `θ^K`) first, and
//! inside a block subscripts ascend. The bound for `k_i^j` is the
//! `h_i`-eigenvalue of the partial vector just before `f_i^{(k_i^j)}` acts:
//!
//! ```text
//! λ_i^j = λ_i + Σ_{q≤j} k_{i-1}^q + Σ_{q<j} k_{i+1}^q - 2 Σ_{q<j} k_i^q
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::monomial::MonomialIndex;
use crate::rootsys::{write_tuple, AlphaVector, Rank, Weight};

pub const DEFAULT_BASIS_CAP: usize = 10_000_000;

/// A dominant weight together with a partially fixed monomial index.
#[derive(Debug, Clone)]
pub struct BoundContext {
    lambda: Weight,
    partial: MonomialIndex,
    fixed: Vec<bool>,
}

impl BoundContext {
    pub fn new(lambda: Weight) -> Result<Self> {
        lambda.ensure_dominant()?;
        let rank = lambda.rank();
        Ok(BoundContext {
            partial: MonomialIndex::zero(rank),
            fixed: vec![false; rank.num_positive_roots()],
            lambda,
        })
    }

    pub fn fix(&mut self, i: usize, j: usize, value: u32) -> Result<()> {
        let rank = self.lambda.rank();
        let pos = MonomialIndex::position(rank, i, j).ok_or(Error::InvalidRoot {
            i,
            j,
            rank: rank.get(),
        })?;
        self.partial.set(i, j, value);
        self.fixed[pos] = true;
        Ok(())
    }

    fn read(&self, i: usize, j: usize) -> Result<i64> {
        match MonomialIndex::position(self.lambda.rank(), i, j) {
            None => Ok(0),
            Some(pos) if self.fixed[pos] => Ok(i64::from(self.partial.get(i, j))),
            Some(_) => Err(Error::UnsetEntry { i, j }),
        }
    }

    /// `λ_i^j`; every entry the formula reads must already be fixed.
    pub fn bound(&self, i: usize, j: usize) -> Result<i64> {
        let rank = self.lambda.rank();
        if MonomialIndex::position(rank, i, j).is_none() {
            return Err(Error::InvalidRoot {
                i,
                j,
                rank: rank.get(),
            });
        }
        let mut v = self.lambda.coords()[i - 1];
        for q in 1..=j {
            if i > 1 {
                v += self.read(i - 1, q)?;
            }
        }
        for q in 1..j {
            v += self.read(i + 1, q)?;
            v -= 2 * self.read(i, q)?;
        }
        Ok(v)
    }
}

/// A last-block index `P = (0, …, 0, p_l, …, p_1)`; stores `(p_1, …, p_l)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiPrimeElement {
    p: Vec<u32>,
}

impl PiPrimeElement {
    pub fn new(p: Vec<u32>) -> Self {
        PiPrimeElement { p }
    }

    /// `(p_1, …, p_l)`.
    pub fn coords(&self) -> &[u32] {
        &self.p
    }

    /// `(p_l, …, p_1)`, the order used when writing `P` as a tuple.
    pub fn descending_tuple(&self) -> Vec<u32> {
        self.p.iter().rev().copied().collect()
    }

    pub fn to_monomial(&self) -> MonomialIndex {
        let rank = Rank::new(self.p.len()).expect("nonempty");
        let mut k = MonomialIndex::zero(rank);
        for (n, &v) in self.p.iter().enumerate() {
            k.set(n + 1, 1, v);
        }
        k
    }

    pub fn is_admissible(&self, lambda: &Weight) -> bool {
        let mut prev = 0i64;
        self.p.len() == lambda.coords().len()
            && self.p.iter().zip(lambda.coords()).all(|(&p, &lam)| {
                let p = i64::from(p);
                let ok = p >= prev && p - prev <= lam;
                prev = p;
                ok
            })
    }
}

impl fmt::Display for PiPrimeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.descending_tuple())
    }
}

/// Depth-first stream over `Π_λ`, optionally restricted to a fixed content.
#[derive(Debug, Clone)]
pub struct BasisIter {
    rank: Rank,
    lambda: Vec<i64>,
    filter: Option<Vec<i64>>,
    // (subscript, superscript) in visiting order
    cells: Vec<(usize, usize)>,
    vals: Vec<u32>,
    hi: Vec<u32>,
    // running Σ_q k_i^q, indices 0 and l+1 stay 0
    sums: Vec<i64>,
    depth: usize,
    started: bool,
    done: bool,
}

impl BasisIter {
    pub fn new(lambda: &Weight, filter: Option<&AlphaVector>) -> Result<Self> {
        lambda.ensure_dominant()?;
        let rank = lambda.rank();
        let l = rank.get();
        if let Some(a) = filter {
            if a.rank() != l {
                return Err(Error::LengthMismatch {
                    expected: l,
                    got: a.rank(),
                });
            }
        }
        let cells: Vec<(usize, usize)> = (1..=l)
            .flat_map(|j| (1..=l - j + 1).map(move |i| (i, j)))
            .collect();
        let n = cells.len();
        Ok(BasisIter {
            rank,
            lambda: lambda.coords().to_vec(),
            filter: filter.map(|a| a.coeffs().iter().map(|&x| i64::from(x)).collect()),
            cells,
            vals: vec![0; n],
            hi: vec![0; n],
            sums: vec![0; l + 2],
            depth: 0,
            started: false,
            done: false,
        })
    }

    fn current(&self) -> MonomialIndex {
        let mut k = MonomialIndex::zero(self.rank);
        for (&(i, j), &v) in self.cells.iter().zip(&self.vals) {
            k.set(i, j, v);
        }
        k
    }

    // subscripts above l-j+1 receive no entries from block j on
    fn settled_ok(&self, first_open: usize) -> bool {
        match &self.filter {
            None => true,
            Some(a) => (first_open..=self.rank.get()).all(|m| self.sums[m] == a[m - 1]),
        }
    }

    /// Undo finished cells and bump the deepest one that still has room.
    fn advance(&mut self) -> bool {
        while self.depth > 0 {
            let d = self.depth - 1;
            let i = self.cells[d].0;
            if self.vals[d] < self.hi[d] {
                self.vals[d] += 1;
                self.sums[i] += 1;
                return true;
            }
            self.sums[i] -= i64::from(self.vals[d]);
            self.depth -= 1;
        }
        false
    }
}

impl Iterator for BasisIter {
    type Item = MonomialIndex;

    fn next(&mut self) -> Option<MonomialIndex> {
        if self.done {
            return None;
        }
        let n = self.cells.len();
        let mut need_advance = self.started;
        self.started = true;
        loop {
            if need_advance {
                if !self.advance() {
                    self.done = true;
                    return None;
                }
                need_advance = false;
            }
            if self.depth == n {
                if self.settled_ok(1) {
                    return Some(self.current());
                }
                need_advance = true;
                continue;
            }
            let d = self.depth;
            let (i, j) = self.cells[d];
            if i == 1 && j > 1 && !self.settled_ok(self.rank.get() - j + 2) {
                need_advance = true;
                continue;
            }
            let lo = if i > 1 { self.vals[d - 1] } else { 0 };
            let mut hi =
                self.lambda[i - 1] + self.sums[i - 1] + self.sums[i + 1] - 2 * self.sums[i];
            if let Some(a) = &self.filter {
                hi = hi.min(a[i - 1] - self.sums[i]);
            }
            if i64::from(lo) > hi {
                need_advance = true;
                continue;
            }
            self.vals[d] = lo;
            self.hi[d] = u32::try_from(hi).unwrap_or(u32::MAX);
            self.sums[i] += i64::from(lo);
            self.depth += 1;
        }
    }
}

/// Streams `Π_λ` (or its elements of content `filter`) in depth-first order.
pub fn enumerate_basis(lambda: &Weight, filter: Option<&AlphaVector>) -> Result<BasisIter> {
    BasisIter::new(lambda, filter)
}

/// Number of elements `enumerate_basis` would emit, failing past `cap`.
pub fn count_basis(lambda: &Weight, filter: Option<&AlphaVector>, cap: usize) -> Result<u64> {
    let mut n: u64 = 0;
    for _ in BasisIter::new(lambda, filter)? {
        n += 1;
        if n > cap as u64 {
            return Err(Error::ResourceCap {
                what: "basis enumeration",
                cap,
            });
        }
    }
    Ok(n)
}

/// `Π′_λ` in ascending `≺` order.
pub fn enumerate_pi_prime(lambda: &Weight) -> Result<Vec<PiPrimeElement>> {
    lambda.ensure_dominant()?;
    let lam: Vec<u32> = lambda
        .coords()
        .iter()
        .map(|&c| u32::try_from(c).map_err(|_| Error::Overflow("weight coordinate")))
        .collect::<Result<_>>()?;
    // `≺` on (0, …, 0, p_l, …, p_1) is lexicographic on (p_1, …, p_l), which
    // is the order this recursion produces
    fn rec(lam: &[u32], prefix: &mut Vec<u32>, out: &mut Vec<PiPrimeElement>) {
        if prefix.len() == lam.len() {
            out.push(PiPrimeElement::new(prefix.clone()));
            return;
        }
        let prev = prefix.last().copied().unwrap_or(0);
        for v in prev..=prev + lam[prefix.len()] {
            prefix.push(v);
            rec(lam, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&lam, &mut Vec::with_capacity(lam.len()), &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{cartan_matrix, weyl_dim};
    use num_bigint::BigUint;

    fn w(c: &[i64]) -> Weight {
        Weight::new(c.to_vec()).unwrap()
    }

    fn dominant_up_to(l: usize, max: i64) -> Vec<Weight> {
        let base = (max + 1) as usize;
        (0..base.pow(l as u32))
            .map(|code| {
                w(&(0..l)
                    .map(|t| ((code / base.pow(t as u32)) % base) as i64)
                    .collect::<Vec<_>>())
            })
            .collect()
    }

    #[test]
    fn bound_examples() {
        let mut ctx = BoundContext::new(w(&[2, 3])).unwrap();
        assert_eq!(ctx.bound(1, 1).unwrap(), 2);
        assert_eq!(ctx.bound(2, 1), Err(Error::UnsetEntry { i: 1, j: 1 }));
        ctx.fix(1, 1, 1).unwrap();
        assert_eq!(ctx.bound(2, 1).unwrap(), 4);
        assert_eq!(ctx.bound(1, 2), Err(Error::UnsetEntry { i: 2, j: 1 }));
        ctx.fix(2, 1, 1).unwrap();
        assert_eq!(ctx.bound(1, 2).unwrap(), 1);

        let mut ctx = BoundContext::new(w(&[5, 6, 7, 8])).unwrap();
        ctx.fix(3, 1, 2).unwrap();
        ctx.fix(2, 1, 0).unwrap();
        ctx.fix(1, 1, 0).unwrap();
        assert_eq!(ctx.bound(4, 1).unwrap(), 8 + 2);
        assert!(BoundContext::new(w(&[1, -1])).is_err());
    }

    #[test]
    fn enumeration_examples() {
        for m in 0..5 {
            assert_eq!(
                enumerate_basis(&w(&[m]), None).unwrap().count(),
                m as usize + 1
            );
        }
        assert_eq!(enumerate_basis(&w(&[2, 3]), None).unwrap().count(), 42);
        let a = AlphaVector::new(vec![2, 2]);
        assert_eq!(enumerate_basis(&w(&[2, 3]), Some(&a)).unwrap().count(), 3);
        assert!(enumerate_basis(&w(&[-1, 0]), None).is_err());
    }

    #[test]
    fn pi_prime_examples() {
        let got: Vec<Vec<u32>> = enumerate_pi_prime(&w(&[2, 3]))
            .unwrap()
            .iter()
            .map(PiPrimeElement::descending_tuple)
            .collect();
        let expected: Vec<Vec<u32>> = [
            (0, 0),
            (1, 0),
            (2, 0),
            (3, 0),
            (1, 1),
            (2, 1),
            (3, 1),
            (4, 1),
            (2, 2),
            (3, 2),
            (4, 2),
            (5, 2),
        ]
        .iter()
        .map(|&(a, b)| vec![a, b])
        .collect();
        assert_eq!(got, expected);

        let got = enumerate_pi_prime(&w(&[1, 1, 1, 1])).unwrap();
        assert_eq!(got.len(), 16);
        assert_eq!(got.last().unwrap().descending_tuple(), vec![4, 3, 2, 1]);
        let ks: Vec<MonomialIndex> = got.iter().map(PiPrimeElement::to_monomial).collect();
        assert!(ks.windows(2).all(|p| p[0] < p[1]));

        let got = enumerate_pi_prime(&w(&[3])).unwrap();
        let flat: Vec<u32> = got.iter().map(|p| p.coords()[0]).collect();
        assert_eq!(flat, vec![0, 1, 2, 3]);
    }

    #[test]
    fn cardinality_matches_weyl_dim() {
        for l in 1..=4 {
            let max = if l == 4 { 1 } else { 3 };
            for lam in dominant_up_to(l, max) {
                let n = enumerate_basis(&lam, None).unwrap().count();
                assert_eq!(BigUint::from(n), weyl_dim(&lam).unwrap(), "{lam}");
            }
        }
    }

    #[test]
    fn bounds_match_weight_bookkeeping() {
        // λ_i^j against λ_i - ⟨Σ applied k α, α_i^∨⟩ computed via the Cartan matrix
        for lam in dominant_up_to(3, 2) {
            let cartan = cartan_matrix(lam.rank());
            for k in enumerate_basis(&lam, None).unwrap() {
                let l = 3;
                let mut applied = vec![0i64; l];
                let mut ctx = BoundContext::new(lam.clone()).unwrap();
                for j in 1..=l {
                    for i in 1..=l - j + 1 {
                        let scratch: i64 = lam.coords()[i - 1]
                            - (0..l).map(|m| cartan[i - 1][m] * applied[m]).sum::<i64>();
                        let b = ctx.bound(i, j).unwrap();
                        assert_eq!(b, scratch);
                        assert!(i64::from(k.get(i, j)) <= b);
                        ctx.fix(i, j, k.get(i, j)).unwrap();
                        applied[i - 1] += i64::from(k.get(i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn filter_selects_content_subset() {
        for lam in dominant_up_to(3, 2) {
            let all: Vec<MonomialIndex> = enumerate_basis(&lam, None).unwrap().collect();
            let mut contents: Vec<AlphaVector> = all.iter().map(|k| k.content().unwrap()).collect();
            contents.sort();
            contents.dedup();
            for a in contents {
                let filtered: Vec<MonomialIndex> =
                    enumerate_basis(&lam, Some(&a)).unwrap().collect();
                let expected: Vec<MonomialIndex> = all
                    .iter()
                    .filter(|k| k.content().unwrap() == a)
                    .cloned()
                    .collect();
                assert_eq!(filtered, expected);
            }
            // a content outside the support yields nothing
            let far = AlphaVector::new(vec![50, 0, 0]);
            assert_eq!(enumerate_basis(&lam, Some(&far)).unwrap().count(), 0);
        }
    }

    #[test]
    fn last_block_respects_lambda() {
        for lam in dominant_up_to(3, 2) {
            for k in enumerate_basis(&lam, None).unwrap() {
                assert!(k.is_in_pi());
                for i in 1..=3 {
                    let diff = i64::from(k.get(i, 1)) - i64::from(k.get(i - 1, 1));
                    assert!(diff <= lam.coords()[i - 1]);
                }
            }
        }
    }

    #[test]
    fn pi_prime_lies_in_basis_set() {
        for lam in dominant_up_to(3, 2) {
            let all: std::collections::HashSet<MonomialIndex> =
                enumerate_basis(&lam, None).unwrap().collect();
            for p in enumerate_pi_prime(&lam).unwrap() {
                assert!(p.is_admissible(&lam));
                assert!(all.contains(&p.to_monomial()), "{lam} {p}");
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            count_basis(&w(&[2, 3]), None, 10),
            Err(Error::ResourceCap { .. })
        ));
        assert_eq!(count_basis(&w(&[2, 3]), None, 42).unwrap(), 42);
    }
}
