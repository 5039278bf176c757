//! Divided-power straightening in the negative nilpotent part.
//!
//! Root vectors `f_{[i,j]}` satisfy `f_B f_A = f_A f_B + f_C` whenever
//! `A = [i, j]`, `B = [j+1, k]` and `C = [i, k]`; every other pair commutes,
//! and `f_C` commutes with both `f_A` and `f_B`. Lifting to divided powers
//! gives, for an ordered pair `(x, y)` with `f_x f_y = f_y f_x + s f_C`:
//!
//! ```text
//! f_x^{(a)} f_y^{(b)} = Σ_{m=0}^{min(a,b)} s^m f_C^{(m)} f_y^{(b-m)} f_x^{(a-m)}
//! ```
//!
//! with `s = +1` when `x` is the later interval and `s = -1` otherwise.
//! Adjacent equal roots merge: `f^{(a)} f^{(b)} = C(a+b, a) f^{(a+b)}`.
//!
//! Termination: let `H = Σ power · height²` over the factors of a word and
//! `N = Σ power_s · power_t` over out-of-order pairs `s < t`. `H` never
//! decreases and is bounded by the square of the total height; a bracket term
//! with `m > 0` raises it by `2 m · height(A) · height(B)`. Swaps and the
//! `m = 0` term keep `H` and lower `N`; merges keep `H` and do not raise `N`
//! while shortening the word. So `(H, -N, -len)` increases lexicographically
//! and is bounded, and every reduction path is finite.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Neg;

use indexmap::IndexMap;
use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, One, Zero};

use crate::error::{Error, Result};
use crate::monomial::{ExponentVector, MonomialIndex};
use crate::rootsys::{Rank, RootInterval, RootSystem};

/// Scalar ring for PBW coefficients. Fixed-width integers report overflow
/// instead of wrapping.
pub trait Coefficient:
    Clone
    + fmt::Debug
    + fmt::Display
    + Eq
    + Zero
    + One
    + Neg<Output = Self>
    + CheckedAdd
    + CheckedMul
    + FromPrimitive
    + Send
    + Sync
{
}

impl<T> Coefficient for T where
    T: Clone
        + fmt::Debug
        + fmt::Display
        + Eq
        + Zero
        + One
        + Neg<Output = Self>
        + CheckedAdd
        + CheckedMul
        + FromPrimitive
        + Send
        + Sync
{
}

pub const DEFAULT_TERM_CAP: usize = 1_000_000;

/// One divided power `f_root^{(power)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub root: RootInterval,
    pub power: u32,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^({})", self.root, self.power)
    }
}

/// An ordered product of divided powers of root vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FactorWord {
    rank: Rank,
    factors: Vec<Factor>,
}

impl FactorWord {
    pub fn new(rank: Rank, factors: Vec<Factor>) -> Result<Self> {
        for fac in &factors {
            if fac.power == 0 {
                return Err(Error::Parse(format!("zero power on {}", fac.root)));
            }
            if fac.root.end() > rank.get() {
                return Err(Error::InvalidRoot {
                    i: fac.root.start(),
                    j: fac.root.end(),
                    rank: rank.get(),
                });
            }
        }
        Ok(FactorWord { rank, factors })
    }

    pub fn empty(rank: Rank) -> Self {
        FactorWord {
            rank,
            factors: Vec::new(),
        }
    }

    /// Parses `f2^2,f1^1,f1~3^2`; a missing `^p` means power 1.
    pub fn parse(rank: Rank, s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("factor word {s:?}"));
        let mut factors = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let body = item.strip_prefix('f').ok_or_else(bad)?;
            let (root, power) = match body.split_once('^') {
                Some((r, p)) => {
                    let p = p.trim_start_matches('(').trim_end_matches(')');
                    (r, p.parse::<u32>().map_err(|_| bad())?)
                }
                None => (body, 1),
            };
            let (i, j) = match root.split_once('~') {
                Some((a, b)) => (
                    a.parse::<usize>().map_err(|_| bad())?,
                    b.parse::<usize>().map_err(|_| bad())?,
                ),
                None => {
                    let i = root.parse::<usize>().map_err(|_| bad())?;
                    (i, i)
                }
            };
            let root = RootInterval::new(i, j, rank)?;
            if power > 0 {
                factors.push(Factor { root, power });
            }
        }
        Ok(FactorWord { rank, factors })
    }

    /// The ordered monomial `f^I`.
    pub fn from_exponents(exps: &ExponentVector) -> Self {
        let rank = exps.rank();
        let rs = RootSystem::of(rank);
        let factors = rs
            .positive_roots()
            .iter()
            .zip(exps.entries())
            .filter(|(_, &p)| p > 0)
            .map(|(&root, &power)| Factor { root, power })
            .collect();
        FactorWord { rank, factors }
    }

    /// The word of `θ^K`, zero powers dropped.
    pub fn theta(k: &MonomialIndex) -> Self {
        let rank = k.rank();
        let factors = k
            .factors()
            .filter(|&(_, p)| p > 0)
            .map(|(i, power)| Factor {
                root: RootInterval::simple(i, rank).expect("simple root in range"),
                power,
            })
            .collect();
        FactorWord { rank, factors }
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn concat(&self, other: &FactorWord) -> Result<FactorWord> {
        if self.rank != other.rank {
            return Err(Error::LengthMismatch {
                expected: self.rank.get(),
                got: other.rank.get(),
            });
        }
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Ok(FactorWord {
            rank: self.rank,
            factors,
        })
    }
}

impl fmt::Display for FactorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (n, fac) in self.factors.iter().enumerate() {
            if n > 0 {
                write!(f, " ")?;
            }
            write!(f, "{fac}")?;
        }
        Ok(())
    }
}

/// `Σ a_I f^I` with nonzero coefficients, keyed in `≺` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PbwPolynomial<C> {
    rank: Rank,
    terms: BTreeMap<ExponentVector, C>,
}

impl<C: Coefficient> PbwPolynomial<C> {
    pub fn zero(rank: Rank) -> Self {
        PbwPolynomial {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending `≺` order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &ExponentVector) -> Option<&C> {
        self.terms.get(exps)
    }

    pub fn add_term(&mut self, exps: ExponentVector, coeff: C) -> Result<()> {
        if exps.entries().len() != self.rank.num_positive_roots() {
            return Err(Error::LengthMismatch {
                expected: self.rank.num_positive_roots(),
                got: exps.entries().len(),
            });
        }
        accumulate(&mut self.terms, exps, coeff)
    }

    /// The `≺`-greatest term.
    pub fn leading(&self) -> Result<(&ExponentVector, &C)> {
        self.terms.iter().next_back().ok_or(Error::ZeroPolynomial)
    }
}

fn accumulate<K: Ord, C: Coefficient>(map: &mut BTreeMap<K, C>, key: K, coeff: C) -> Result<()> {
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(v) => {
            if !coeff.is_zero() {
                v.insert(coeff);
            }
        }
        Entry::Occupied(mut o) => {
            let sum = o
                .get()
                .checked_add(&coeff)
                .ok_or(Error::Overflow("coefficient"))?;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
    Ok(())
}

/// Which reducible adjacent pair gets rewritten first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

#[derive(Debug, Clone, Copy)]
enum Bracket {
    Commute,
    /// `f_x f_y = f_y f_x + sign · f_combined`
    Concat {
        combined: u16,
        sign: i8,
    },
}

// internal word: (standard root position, power)
type Word = Vec<(u16, u32)>;

/// Rewrites factor words into normal form for a chosen total order on the
/// positive roots (the fixed PBW order unless overridden).
#[derive(Debug, Clone)]
pub struct Straightener {
    rank: Rank,
    roots: Vec<RootInterval>,
    // key[pos] = rank of root `pos` in the target order
    key: Vec<usize>,
    brackets: Vec<Bracket>,
    strategy: Strategy,
    term_cap: usize,
}

impl Straightener {
    pub fn new(rank: Rank) -> Self {
        let roots = RootSystem::of(rank).positive_roots().to_vec();
        let n = roots.len();
        let mut brackets = Vec::with_capacity(n * n);
        for &x in &roots {
            for &y in &roots {
                let b = if let Some(c) = y.concat(x) {
                    // x is the later interval
                    Bracket::Concat {
                        combined: c.position() as u16,
                        sign: 1,
                    }
                } else if let Some(c) = x.concat(y) {
                    Bracket::Concat {
                        combined: c.position() as u16,
                        sign: -1,
                    }
                } else {
                    Bracket::Commute
                };
                brackets.push(b);
            }
        }
        Straightener {
            rank,
            key: (0..n).collect(),
            roots,
            brackets,
            strategy: Strategy::default(),
            term_cap: DEFAULT_TERM_CAP,
        }
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_term_cap(mut self, cap: usize) -> Self {
        self.term_cap = cap;
        self
    }

    /// Target order for [`Straightener::normal_form`]; must list every
    /// positive root exactly once.
    pub fn with_order(mut self, order: &[RootInterval]) -> Result<Self> {
        let n = self.roots.len();
        if order.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: order.len(),
            });
        }
        let mut key = vec![usize::MAX; n];
        for (rank_in_order, r) in order.iter().enumerate() {
            if r.end() > self.rank.get() || key[r.position()] != usize::MAX {
                return Err(Error::InvalidRoot {
                    i: r.start(),
                    j: r.end(),
                    rank: self.rank.get(),
                });
            }
            key[r.position()] = rank_in_order;
        }
        self.key = key;
        Ok(self)
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    fn bracket(&self, x: u16, y: u16) -> Bracket {
        self.brackets[x as usize * self.roots.len() + y as usize]
    }

    fn reducible_at(&self, w: &Word, key: &[usize]) -> Option<usize> {
        let hit = |t: &usize| key[w[*t].0 as usize] >= key[w[*t + 1].0 as usize];
        let n = w.len().saturating_sub(1);
        match self.strategy {
            Strategy::Leftmost => (0..n).find(hit),
            Strategy::Rightmost => (0..n).rev().find(hit),
        }
    }

    fn reduce<C: Coefficient>(
        &self,
        word: &FactorWord,
        key: &[usize],
    ) -> Result<BTreeMap<Word, C>> {
        if word.rank != self.rank {
            return Err(Error::LengthMismatch {
                expected: self.rank.get(),
                got: word.rank.get(),
            });
        }
        let start: Word = word
            .factors
            .iter()
            .filter(|f| f.power > 0)
            .map(|f| (f.root.position() as u16, f.power))
            .collect();
        let mut pending: IndexMap<Word, C> = IndexMap::new();
        pending.insert(start, C::one());
        let mut done: BTreeMap<Word, C> = BTreeMap::new();

        while let Some((w, coeff)) = pending.pop() {
            let Some(t) = self.reducible_at(&w, key) else {
                accumulate(&mut done, w, coeff)?;
                continue;
            };
            let (x, a) = w[t];
            let (y, b) = w[t + 1];
            let (head, tail) = (&w[..t], &w[t + 2..]);
            let mut push = |mid: &[(u16, u32)], c: C| -> Result<()> {
                let mut nw = Vec::with_capacity(head.len() + mid.len() + tail.len());
                nw.extend_from_slice(head);
                nw.extend(mid.iter().copied().filter(|&(_, p)| p > 0));
                nw.extend_from_slice(tail);
                push_pending(&mut pending, nw, c)
            };
            if x == y {
                let binom = binomial::<C>(a + b, a)?;
                let c = coeff
                    .checked_mul(&binom)
                    .ok_or(Error::Overflow("coefficient"))?;
                push(&[(x, a + b)], c)?;
            } else {
                match self.bracket(x, y) {
                    Bracket::Commute => push(&[(y, b), (x, a)], coeff)?,
                    Bracket::Concat { combined, sign } => {
                        let mut c = coeff;
                        for m in 0..=a.min(b) {
                            push(&[(combined, m), (y, b - m), (x, a - m)], c.clone())?;
                            if sign < 0 {
                                c = -c;
                            }
                        }
                    }
                }
            }
            if pending.len() + done.len() > self.term_cap {
                return Err(Error::ResourceCap {
                    what: "PBW term count",
                    cap: self.term_cap,
                });
            }
        }
        Ok(done)
    }

    /// Normal form of `word` in this straightener's root order.
    pub fn normal_form<C: Coefficient>(&self, word: &FactorWord) -> Result<Vec<(FactorWord, C)>> {
        let done = self.reduce::<C>(word, &self.key)?;
        Ok(done
            .into_iter()
            .map(|(w, c)| {
                let factors = w
                    .into_iter()
                    .map(|(pos, power)| Factor {
                        root: self.roots[pos as usize],
                        power,
                    })
                    .collect();
                (
                    FactorWord {
                        rank: self.rank,
                        factors,
                    },
                    c,
                )
            })
            .collect())
    }

    /// Expansion of `word` in the PBW basis `f^I`.
    pub fn straighten<C: Coefficient>(&self, word: &FactorWord) -> Result<PbwPolynomial<C>> {
        let standard: Vec<usize> = (0..self.roots.len()).collect();
        let done = self.reduce::<C>(word, &standard)?;
        let mut poly = PbwPolynomial::zero(self.rank);
        for (w, c) in done {
            let mut exps = vec![0u32; self.roots.len()];
            for (pos, power) in w {
                exps[pos as usize] = power;
            }
            accumulate(&mut poly.terms, ExponentVector::from_raw(exps), c)?;
        }
        Ok(poly)
    }

    /// `θ^K` expanded in the PBW basis. Requires `K ∈ Π`.
    pub fn theta_expand<C: Coefficient>(&self, k: &MonomialIndex) -> Result<PbwPolynomial<C>> {
        if !k.is_in_pi() {
            return Err(Error::NotInPi(k.to_string()));
        }
        self.straighten(&FactorWord::theta(k))
    }

    /// Whether `θ^K` has leading term `f^{I(K)}` with coefficient 1.
    pub fn verify_leading_term<C: Coefficient>(&self, k: &MonomialIndex) -> Result<bool> {
        let poly = self.theta_expand::<C>(k)?;
        let expected = k.i_of_k()?;
        let (lead, coeff) = poly.leading()?;
        Ok(*lead == expected && coeff.is_one())
    }
}

fn push_pending<C: Coefficient>(pending: &mut IndexMap<Word, C>, w: Word, c: C) -> Result<()> {
    match pending.get_mut(&w) {
        Some(slot) => {
            let sum = slot.checked_add(&c).ok_or(Error::Overflow("coefficient"))?;
            if sum.is_zero() {
                pending.swap_remove(&w);
            } else {
                *slot = sum;
            }
        }
        None => {
            if !c.is_zero() {
                pending.insert(w, c);
            }
        }
    }
    Ok(())
}

fn binomial<C: Coefficient>(n: u32, k: u32) -> Result<C> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 1..=u128::from(k) {
        acc = acc
            .checked_mul(u128::from(n - k) + t)
            .ok_or(Error::Overflow("binomial"))?
            / t;
    }
    C::from_u128(acc).ok_or(Error::Overflow("binomial"))
}

/// Straightens `word` in the standard order with default settings.
pub fn straighten<C: Coefficient>(word: &FactorWord) -> Result<PbwPolynomial<C>> {
    Straightener::new(word.rank()).straighten(word)
}

pub fn theta_expand<C: Coefficient>(k: &MonomialIndex) -> Result<PbwPolynomial<C>> {
    Straightener::new(k.rank()).theta_expand(k)
}

pub fn verify_leading_term<C: Coefficient>(k: &MonomialIndex) -> Result<bool> {
    Straightener::new(k.rank()).verify_leading_term::<C>(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rank(l: usize) -> Rank {
        Rank::new(l).unwrap()
    }

    fn terms(p: &PbwPolynomial<i64>) -> Vec<(Vec<u32>, i64)> {
        p.terms().map(|(e, c)| (e.entries().to_vec(), *c)).collect()
    }

    fn word(l: usize, s: &str) -> FactorWord {
        FactorWord::parse(rank(l), s).unwrap()
    }

    #[test]
    fn straighten_examples() {
        let p = straighten::<i64>(&word(2, "f2^1,f1^1")).unwrap();
        assert_eq!(terms(&p), vec![(vec![1, 1, 0], 1), (vec![0, 0, 1], 1)]);
        let p = straighten::<i64>(&word(2, "f2^2,f1^1")).unwrap();
        assert_eq!(terms(&p), vec![(vec![1, 2, 0], 1), (vec![0, 1, 1], 1)]);
        let p = straighten::<i64>(&word(2, "f1^2")).unwrap();
        assert_eq!(terms(&p), vec![(vec![2, 0, 0], 1)]);
    }

    #[test]
    fn merge_uses_binomials() {
        let p = straighten::<i64>(&word(1, "f1^2,f1^3")).unwrap();
        assert_eq!(terms(&p), vec![(vec![5], 10)]);
    }

    #[test]
    fn reversed_bracket_sign() {
        // f_{12} f_3 is ordered; f_3 f_{12} = f_{12} f_3 + f_{13}
        let p = straighten::<i64>(&word(3, "f3,f1~2")).unwrap();
        assert_eq!(
            terms(&p),
            vec![(vec![0, 0, 1, 1, 0, 0], 1), (vec![0, 0, 0, 0, 0, 1], 1)]
        );
        // in the reversed order f_1 f_2 becomes f_2 f_1 - f_{12}
        let rs = positive_roots_reversed(2);
        let st = Straightener::new(rank(2)).with_order(&rs).unwrap();
        let nf = st.normal_form::<i64>(&word(2, "f1,f2")).unwrap();
        let rendered: Vec<(String, i64)> = nf.iter().map(|(w, c)| (w.to_string(), *c)).collect();
        assert!(rendered.contains(&("f2^(1) f1^(1)".to_string(), 1)));
        assert!(rendered.contains(&("f1~2^(1)".to_string(), -1)));
        assert_eq!(rendered.len(), 2);
    }

    fn positive_roots_reversed(l: usize) -> Vec<RootInterval> {
        let mut r = RootSystem::of(rank(l)).positive_roots().to_vec();
        r.reverse();
        r
    }

    #[test]
    fn theta_examples() {
        let k = |e: &[u32]| MonomialIndex::new(rank(2), e.to_vec()).unwrap();
        let p = theta_expand::<i64>(&k(&[0, 1, 1])).unwrap();
        assert_eq!(terms(&p), vec![(vec![1, 1, 0], 1), (vec![0, 0, 1], 1)]);
        let p = theta_expand::<i64>(&k(&[0, 2, 1])).unwrap();
        assert_eq!(terms(&p), vec![(vec![1, 2, 0], 1), (vec![0, 1, 1], 1)]);
        let p = theta_expand::<i64>(&k(&[0, 0, 0])).unwrap();
        assert_eq!(terms(&p), vec![(vec![0, 0, 0], 1)]);
        assert!(matches!(
            theta_expand::<i64>(&k(&[0, 1, 2])),
            Err(Error::NotInPi(_))
        ));
    }

    #[test]
    fn leading_examples() {
        let mut p = PbwPolynomial::<i64>::zero(rank(2));
        p.add_term(ExponentVector::new(rank(2), vec![1, 1, 0]).unwrap(), 1)
            .unwrap();
        p.add_term(ExponentVector::new(rank(2), vec![0, 0, 1]).unwrap(), 1)
            .unwrap();
        assert_eq!(p.leading().unwrap().0.entries(), &[0, 0, 1]);

        let mut q = PbwPolynomial::<i64>::zero(rank(2));
        q.add_term(ExponentVector::zero(rank(2)), 5).unwrap();
        assert_eq!(q.leading().unwrap(), (&ExponentVector::zero(rank(2)), &5));

        let k = MonomialIndex::new(rank(2), vec![1, 2, 1]).unwrap();
        let t = theta_expand::<BigInt>(&k).unwrap();
        let (lead, c) = t.leading().unwrap();
        assert_eq!(lead.entries(), &[1, 1, 1]);
        assert!(c.is_one());

        assert_eq!(
            PbwPolynomial::<i64>::zero(rank(2)).leading(),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn leading_term_examples() {
        let k = |e: &[u32]| MonomialIndex::new(rank(2), e.to_vec()).unwrap();
        assert!(verify_leading_term::<i64>(&k(&[0, 1, 1])).unwrap());
        assert!(verify_leading_term::<i64>(&k(&[2, 0, 0])).unwrap());
    }

    #[test]
    fn narrow_coefficients_report_overflow() {
        let w = word(1, "f1^40,f1^40");
        assert!(straighten::<i64>(&w).is_err());
        assert!(straighten::<BigInt>(&w).is_ok());
    }

    #[test]
    fn term_cap_is_enforced() {
        let w = word(3, "f3^3,f2^3,f1^3,f3^3,f2^3,f1^3");
        let st = Straightener::new(rank(3)).with_term_cap(5);
        assert!(matches!(
            st.straighten::<i64>(&w),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn parse_errors() {
        assert!(FactorWord::parse(rank(2), "g1").is_err());
        assert!(FactorWord::parse(rank(2), "f3").is_err());
        assert!(FactorWord::parse(rank(2), "f2~1").is_err());
        assert_eq!(word(3, "f1~3^(2)").to_string(), "f1~3^(2)");
    }
}
