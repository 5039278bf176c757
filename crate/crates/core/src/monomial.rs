//! Exponent tuples: the PBW index `I`, the triangular monomial index `K`,
//! the right-to-left order `≺` shared by both, and the maps between them.
//!
//! Both tuples use the same triangular layout. Block `b` (1-based) holds `b`
//! entries starting at flat offset `b(b-1)/2`. For a PBW exponent vector the
//! entry at in-block offset `b - i` belongs to the root `[i, b]`; for a
//! monomial index it is `k_i^j` with superscript `j = l - b + 1`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::rootsys::{write_tuple, AlphaVector, Rank};

/// Compares equal-length tuples by `≺`: the rightmost differing coordinate
/// decides.
pub fn precedes_cmp(a: &[u32], b: &[u32]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// `≺` with a length check.
pub fn compare(a: &[u32], b: &[u32]) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(precedes_cmp(a, b))
}

#[inline]
fn block_offset(b: usize) -> usize {
    b * (b - 1) / 2
}

fn expect_len(rank: Rank, len: usize) -> Result<()> {
    if len != rank.num_positive_roots() {
        return Err(Error::LengthMismatch {
            expected: rank.num_positive_roots(),
            got: len,
        });
    }
    Ok(())
}

/// Exponents of `f^I`, one per positive root in the fixed root order.
/// Ordered by `≺`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(rank: Rank, entries: Vec<u32>) -> Result<Self> {
        expect_len(rank, entries.len())?;
        Ok(ExponentVector(entries))
    }

    pub(crate) fn from_raw(entries: Vec<u32>) -> Self {
        ExponentVector(entries)
    }

    pub fn zero(rank: Rank) -> Self {
        ExponentVector(vec![0; rank.num_positive_roots()])
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> Rank {
        rank_from_len(self.0.len())
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| precedes_cmp(&self.0, &other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

fn rank_from_len(len: usize) -> Rank {
    // len = l(l+1)/2
    let mut l = 1;
    while l * (l + 1) / 2 < len {
        l += 1;
    }
    Rank::new(l).expect("nonempty tuple")
}

/// Triangular index `K = (k_1^l; k_2^{l-1}, k_1^{l-1}; …; k_l^1, …, k_1^1)` of
/// the monomial `θ^K`, stored flat in that order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialIndex {
    rank: Rank,
    entries: Vec<u32>,
}

impl MonomialIndex {
    pub fn new(rank: Rank, entries: Vec<u32>) -> Result<Self> {
        expect_len(rank, entries.len())?;
        Ok(MonomialIndex { rank, entries })
    }

    /// Builds `K` from its blocks, first block (a single entry) first.
    pub fn from_blocks(rank: Rank, blocks: &[Vec<u32>]) -> Result<Self> {
        if blocks.len() != rank.get() {
            return Err(Error::LengthMismatch {
                expected: rank.get(),
                got: blocks.len(),
            });
        }
        let mut entries = Vec::with_capacity(rank.num_positive_roots());
        for (n, block) in blocks.iter().enumerate() {
            if block.len() != n + 1 {
                return Err(Error::LengthMismatch {
                    expected: n + 1,
                    got: block.len(),
                });
            }
            entries.extend_from_slice(block);
        }
        Ok(MonomialIndex { rank, entries })
    }

    pub fn zero(rank: Rank) -> Self {
        MonomialIndex {
            rank,
            entries: vec![0; rank.num_positive_roots()],
        }
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Block `b` (1-based), stored as `(k_b^j, …, k_1^j)`.
    pub fn block(&self, b: usize) -> &[u32] {
        &self.entries[block_offset(b)..block_offset(b) + b]
    }

    /// Flat position of `k_i^j`, or `None` outside `1 ≤ j ≤ l`, `1 ≤ i ≤ l-j+1`.
    pub fn position(rank: Rank, i: usize, j: usize) -> Option<usize> {
        let l = rank.get();
        if j == 0 || j > l || i == 0 || i > l - j + 1 {
            return None;
        }
        let b = l - j + 1;
        Some(block_offset(b) + (b - i))
    }

    /// `k_i^j`; subscript 0 (and any cell outside the triangle) reads as 0.
    pub fn get(&self, i: usize, j: usize) -> u32 {
        Self::position(self.rank, i, j).map_or(0, |p| self.entries[p])
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: u32) {
        let p = Self::position(self.rank, i, j).expect("cell inside the triangle");
        self.entries[p] = v;
    }

    /// Membership in `Π`: every block weakly decreasing in storage order.
    pub fn is_in_pi(&self) -> bool {
        (1..=self.rank.get()).all(|b| self.block(b).windows(2).all(|w| w[0] >= w[1]))
    }

    fn ensure_in_pi(&self) -> Result<()> {
        if self.is_in_pi() {
            Ok(())
        } else {
            Err(Error::NotInPi(self.to_string()))
        }
    }

    /// Exponent of the leading PBW term of `θ^K`. Block `(k_b, …, k_1)` maps
    /// to `(k_b - k_{b-1}, …, k_2 - k_1, k_1)`.
    pub fn i_of_k(&self) -> Result<ExponentVector> {
        self.ensure_in_pi()?;
        let mut out = Vec::with_capacity(self.entries.len());
        for b in 1..=self.rank.get() {
            let block = self.block(b);
            for t in 0..b {
                let next = block.get(t + 1).copied().unwrap_or(0);
                out.push(block[t] - next);
            }
        }
        Ok(ExponentVector(out))
    }

    /// Inverse of [`MonomialIndex::i_of_k`]: suffix sums within each group.
    pub fn k_of_i(exps: &ExponentVector) -> Result<Self> {
        let rank = exps.rank();
        expect_len(rank, exps.0.len())?;
        let mut entries = vec![0u32; exps.0.len()];
        for b in 1..=rank.get() {
            let off = block_offset(b);
            let mut acc: u32 = 0;
            for t in (0..b).rev() {
                acc = acc
                    .checked_add(exps.0[off + t])
                    .ok_or(Error::Overflow("prefix sum"))?;
                entries[off + t] = acc;
            }
        }
        Ok(MonomialIndex { rank, entries })
    }

    /// Total exponent of each `f_i` across `θ^K`: `c_i = Σ_j k_i^j`.
    pub fn content(&self) -> Result<AlphaVector> {
        let l = self.rank.get();
        let mut c = vec![0u32; l];
        for b in 1..=l {
            for (t, &k) in self.block(b).iter().enumerate() {
                let i = b - t;
                c[i - 1] = c[i - 1].checked_add(k).ok_or(Error::Overflow("content"))?;
            }
        }
        Ok(AlphaVector::new(c))
    }

    /// Splits `K = K₂ + K₁` with `K₁` supported on the last block only.
    pub fn split(&self) -> (MonomialIndex, MonomialIndex) {
        let cut = block_offset(self.rank.get());
        let mut k2 = self.clone();
        let mut k1 = MonomialIndex::zero(self.rank);
        k1.entries[cut..].copy_from_slice(&self.entries[cut..]);
        k2.entries[cut..].iter_mut().for_each(|e| *e = 0);
        (k2, k1)
    }

    pub fn checked_add(&self, other: &MonomialIndex) -> Result<MonomialIndex> {
        if self.rank != other.rank {
            return Err(Error::LengthMismatch {
                expected: self.entries.len(),
                got: other.entries.len(),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("index sum")))
            .collect::<Result<_>>()?;
        Ok(MonomialIndex {
            rank: self.rank,
            entries,
        })
    }

    /// The factors of `θ^K` left to right as `(simple root index, divided power)`,
    /// zero powers included.
    pub fn factors(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        (1..=self.rank.get()).flat_map(move |b| {
            self.block(b)
                .iter()
                .enumerate()
                .map(move |(t, &k)| (b - t, k))
        })
    }

    /// `θ^K` as text, e.g. `f1^(1) f2^(2) f1^(1)`. Display only.
    pub fn render_theta(&self) -> String {
        let parts: Vec<String> = self
            .factors()
            .filter(|&(_, k)| k > 0)
            .map(|(i, k)| format!("f{i}^({k})"))
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }
}

impl Ord for MonomialIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then_with(|| precedes_cmp(&self.entries, &other.entries))
    }
}

impl PartialOrd for MonomialIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MonomialIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for b in 1..=self.rank.get() {
            if b > 1 {
                write!(f, "; ")?;
            }
            for (t, k) in self.block(b).iter().enumerate() {
                if t > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{k}")?;
            }
        }
        write!(f, ")")
    }
}

/// All `K ∈ Π` at `rank` with every entry `≤ max`.
pub fn pi_elements_bounded(rank: Rank, max: u32) -> Vec<MonomialIndex> {
    fn blocks_of(len: usize, max: u32) -> Vec<Vec<u32>> {
        // weakly decreasing sequences of length `len` in [0, max]
        if len == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 0..=max {
            for mut tail in blocks_of(len - 1, first) {
                tail.insert(0, first);
                out.push(tail);
            }
        }
        out
    }
    let mut acc = vec![Vec::<u32>::new()];
    for b in 1..=rank.get() {
        let choices = blocks_of(b, max);
        let mut next = Vec::with_capacity(acc.len() * choices.len());
        for prefix in &acc {
            for c in &choices {
                let mut v = prefix.clone();
                v.extend_from_slice(c);
                next.push(v);
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|entries| MonomialIndex { rank, entries })
        .collect()
}
