//! Weight multiplicities `m_λ(μ)`.
//!
//! The recursive method peels off the last simple root: writing
//! `λ - μ = Σ a_i α_i`, only components `P ∈ Π′_λ` of the branching with
//! `p_l = a_l` and `p_i ≤ a_i` can contain `μ`, and each contributes the
//! multiplicity of `μ` restricted in its rank `l - 1` module.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::basis::{
    count_basis, enumerate_basis, enumerate_pi_prime, PiPrimeElement, DEFAULT_BASIS_CAP,
};
use crate::branch::component_weight;
use crate::error::{Error, Result};
use crate::oracle::Freudenthal;
use crate::rootsys::{
    alpha_to_weight, restrict_weight, weight_to_alpha, weyl_dim, AlphaVector, Weight,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Recursive,
    Count,
    Freudenthal,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Recursive, Method::Count, Method::Freudenthal];

    pub fn name(self) -> &'static str {
        match self {
            Method::Recursive => "recursive",
            Method::Count => "count",
            Method::Freudenthal => "freudenthal",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recursive" => Ok(Method::Recursive),
            "count" => Ok(Method::Count),
            "freudenthal" => Ok(Method::Freudenthal),
            other => Err(Error::Parse(format!("method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DimMethod {
    Enum,
    Weyl,
}

/// Weight multiplicities of one module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    lambda: Weight,
    table: BTreeMap<Weight, BigUint>,
}

impl Character {
    pub fn new(lambda: Weight, table: BTreeMap<Weight, BigUint>) -> Self {
        let table = table.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        Character { lambda, table }
    }

    pub fn highest_weight(&self) -> &Weight {
        &self.lambda
    }

    pub fn get(&self, mu: &Weight) -> BigUint {
        self.table.get(mu).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Weight, &BigUint)> {
        self.table.iter()
    }

    /// Number of distinct weights.
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Sum of all multiplicities.
    pub fn mass(&self) -> BigUint {
        self.table.values().sum()
    }
}

/// Memo key for the recursion; the rank is the length of the coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MemoKey {
    pub lambda: Weight,
    pub mu: Weight,
}

/// One summand selected by the recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursionTerm {
    /// 1-based position of `P` in `Π′_λ`.
    pub index: usize,
    pub p: PiPrimeElement,
    pub component: Weight,
    pub restricted_mu: Weight,
    pub value: BigUint,
}

/// Multiplicity evaluator with a shared memo for the recursion.
#[derive(Debug)]
pub struct MultEngine {
    memo: Mutex<HashMap<MemoKey, BigUint>>,
    basis_cap: usize,
    freudenthal: Freudenthal,
}

impl Default for MultEngine {
    fn default() -> Self {
        MultEngine {
            memo: Mutex::new(HashMap::new()),
            basis_cap: DEFAULT_BASIS_CAP,
            freudenthal: Freudenthal::new(),
        }
    }
}

impl MultEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_basis_cap(mut self, cap: usize) -> Self {
        self.basis_cap = cap;
        self
    }

    pub fn global() -> &'static MultEngine {
        static GLOBAL: OnceLock<MultEngine> = OnceLock::new();
        GLOBAL.get_or_init(MultEngine::new)
    }

    pub fn freudenthal(&self) -> &Freudenthal {
        &self.freudenthal
    }

    fn memo(&self) -> std::sync::MutexGuard<'_, HashMap<MemoKey, BigUint>> {
        self.memo.lock().unwrap_or_else(|e| e.into_inner())
    }

    /// Memo contents, sorted.
    pub fn export_memo(&self) -> Vec<(MemoKey, BigUint)> {
        let mut out: Vec<_> = self
            .memo()
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        out.sort();
        out
    }

    pub fn seed_memo(&self, entries: impl IntoIterator<Item = (MemoKey, BigUint)>) {
        self.memo().extend(entries);
    }

    fn alpha_of(lambda: &Weight, mu: &Weight) -> Result<Option<AlphaVector>> {
        lambda.ensure_dominant()?;
        mu.ensure_rank(lambda.rank())?;
        let d = lambda.checked_sub(mu)?;
        weight_to_alpha(lambda.rank(), &d)
    }

    /// `m_λ(μ)` by the branching recursion.
    pub fn mult_recursive(&self, lambda: &Weight, mu: &Weight) -> Result<BigUint> {
        let key = MemoKey {
            lambda: lambda.clone(),
            mu: mu.clone(),
        };
        if let Some(v) = self.memo().get(&key) {
            return Ok(v.clone());
        }
        let value = match Self::alpha_of(lambda, mu)? {
            None => BigUint::zero(),
            Some(a) if lambda.coords().len() == 1 => {
                if i64::from(a.coeffs()[0]) <= lambda.coords()[0] {
                    BigUint::one()
                } else {
                    BigUint::zero()
                }
            }
            Some(a) => self
                .recursion_terms_with(lambda, mu, &a)?
                .into_iter()
                .map(|t| t.value)
                .sum(),
        };
        self.memo().insert(key, value.clone());
        Ok(value)
    }

    /// The summands the recursion uses for `m_λ(μ)`, in `≺` order of `P`.
    /// Empty when `μ` is not in `λ - Q₊`.
    pub fn recursion_terms(&self, lambda: &Weight, mu: &Weight) -> Result<Vec<RecursionTerm>> {
        if lambda.coords().len() < 2 {
            return Err(Error::NoSubalgebra);
        }
        match Self::alpha_of(lambda, mu)? {
            None => Ok(Vec::new()),
            Some(a) => self.recursion_terms_with(lambda, mu, &a),
        }
    }

    fn recursion_terms_with(
        &self,
        lambda: &Weight,
        mu: &Weight,
        a: &AlphaVector,
    ) -> Result<Vec<RecursionTerm>> {
        let l = lambda.coords().len();
        let a = a.coeffs();
        let restricted_mu = restrict_weight(mu)?;
        let mut terms = Vec::new();
        for (n, p) in enumerate_pi_prime(lambda)?.into_iter().enumerate() {
            let pc = p.coords();
            let selected = pc[l - 1] == a[l - 1] && (0..l - 1).all(|i| pc[i] <= a[i]);
            if !selected {
                continue;
            }
            let component = component_weight(lambda, &p)?;
            let value = self.mult_recursive(&component, &restricted_mu)?;
            terms.push(RecursionTerm {
                index: n + 1,
                p,
                component,
                restricted_mu: restricted_mu.clone(),
                value,
            });
        }
        Ok(terms)
    }

    /// `m_λ(μ)` as the number of basis elements `θ^K v` of weight `μ`.
    pub fn mult_count(&self, lambda: &Weight, mu: &Weight) -> Result<BigUint> {
        match Self::alpha_of(lambda, mu)? {
            None => Ok(BigUint::zero()),
            Some(a) => Ok(BigUint::from(count_basis(
                lambda,
                Some(&a),
                self.basis_cap,
            )?)),
        }
    }

    pub fn mult_freudenthal(&self, lambda: &Weight, mu: &Weight) -> Result<BigUint> {
        self.freudenthal.mult(lambda, mu)
    }

    pub fn mult(&self, lambda: &Weight, mu: &Weight, method: Method) -> Result<BigUint> {
        match method {
            Method::Recursive => self.mult_recursive(lambda, mu),
            Method::Count => self.mult_count(lambda, mu),
            Method::Freudenthal => self.mult_freudenthal(lambda, mu),
        }
    }

    fn count_character(&self, lambda: &Weight) -> Result<BTreeMap<Weight, BigUint>> {
        let rank = lambda.rank();
        let mut tally: BTreeMap<AlphaVector, u64> = BTreeMap::new();
        let mut seen = 0usize;
        for k in enumerate_basis(lambda, None)? {
            seen += 1;
            if seen > self.basis_cap {
                return Err(Error::ResourceCap {
                    what: "basis enumeration",
                    cap: self.basis_cap,
                });
            }
            *tally.entry(k.content()?).or_default() += 1;
        }
        tally
            .into_iter()
            .map(|(a, n)| {
                let shift = alpha_to_weight(rank, &a)?;
                let mu = Weight::new(lambda.checked_sub(&Weight::new(shift)?)?)?;
                Ok((mu, BigUint::from(n)))
            })
            .collect()
    }

    pub fn character(&self, lambda: &Weight, method: Method) -> Result<Character> {
        lambda.ensure_dominant()?;
        let table = match method {
            Method::Count => self.count_character(lambda)?,
            Method::Freudenthal => self.freudenthal.character(lambda)?,
            Method::Recursive => {
                let support = self.count_character(lambda)?;
                support
                    .into_keys()
                    .map(|mu| {
                        let m = self.mult_recursive(lambda, &mu)?;
                        Ok((mu, m))
                    })
                    .collect::<Result<_>>()?
            }
        };
        Ok(Character::new(lambda.clone(), table))
    }

    pub fn dim(&self, lambda: &Weight, method: DimMethod) -> Result<BigUint> {
        match method {
            DimMethod::Weyl => weyl_dim(lambda),
            DimMethod::Enum => Ok(BigUint::from(count_basis(lambda, None, self.basis_cap)?)),
        }
    }
}

pub fn mult_recursive(lambda: &Weight, mu: &Weight) -> Result<BigUint> {
    MultEngine::global().mult_recursive(lambda, mu)
}

pub fn mult_count(lambda: &Weight, mu: &Weight) -> Result<BigUint> {
    MultEngine::global().mult_count(lambda, mu)
}

pub fn character(lambda: &Weight, method: Method) -> Result<Character> {
    MultEngine::global().character(lambda, method)
}

pub fn dim(lambda: &Weight, method: DimMethod) -> Result<BigUint> {
    MultEngine::global().dim(lambda, method)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::reflect;

    fn w(c: &[i64]) -> Weight {
        Weight::new(c.to_vec()).unwrap()
    }

    fn big(n: u32) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn recursive_examples() {
        let e = MultEngine::new();
        assert_eq!(e.mult_recursive(&w(&[2, 3]), &w(&[0, 1])).unwrap(), big(3));
        let terms = e.recursion_terms(&w(&[2, 3]), &w(&[0, 1])).unwrap();
        let picked: Vec<Vec<u32>> = terms.iter().map(|t| t.p.descending_tuple()).collect();
        assert_eq!(picked, vec![vec![2, 0], vec![2, 1], vec![2, 2]]);
        let comps: Vec<i64> = terms.iter().map(|t| t.component.coords()[0]).collect();
        assert_eq!(comps, vec![4, 2, 0]);

        assert_eq!(
            e.mult_recursive(&w(&[1, 1, 1, 1]), &w(&[0, 1, 1, 0]))
                .unwrap(),
            big(8)
        );
        assert_eq!(e.mult_recursive(&w(&[2, 3]), &w(&[2, 3])).unwrap(), big(1));
        assert_eq!(e.mult_recursive(&w(&[2, 3]), &w(&[1, 0])).unwrap(), big(0));
        assert!(e.mult_recursive(&w(&[-1, 3]), &w(&[0, 0])).is_err());
    }

    #[test]
    fn count_examples() {
        let e = MultEngine::new();
        assert_eq!(e.mult_count(&w(&[2, 3]), &w(&[0, 1])).unwrap(), big(3));
        assert_eq!(
            e.mult_count(&w(&[1, 1, 1, 1]), &w(&[0, 1, 1, 0])).unwrap(),
            big(8)
        );
        assert_eq!(e.mult_count(&w(&[2, 3]), &w(&[1, 1])).unwrap(), big(0));
    }

    #[test]
    fn character_examples() {
        let e = MultEngine::new();
        let ch = e.character(&w(&[2]), Method::Count).unwrap();
        let got: Vec<(Vec<i64>, BigUint)> = ch
            .iter()
            .map(|(k, v)| (k.coords().to_vec(), v.clone()))
            .collect();
        assert_eq!(
            got,
            vec![(vec![-2], big(1)), (vec![0], big(1)), (vec![2], big(1))]
        );

        let ch = e.character(&w(&[1, 1]), Method::Count).unwrap();
        assert_eq!(ch.len(), 7);
        assert_eq!(ch.get(&w(&[0, 0])), big(2));
        assert_eq!(ch.mass(), big(8));

        for m in Method::ALL {
            assert_eq!(e.character(&w(&[2, 3]), m).unwrap().mass(), big(42));
        }
    }

    #[test]
    fn dim_examples() {
        let e = MultEngine::new();
        for (lam, d) in [
            (w(&[2, 3]), 42u32),
            (w(&[1, 1, 1, 1]), 1024),
            (w(&[0, 0, 0]), 1),
        ] {
            assert_eq!(e.dim(&lam, DimMethod::Enum).unwrap(), big(d));
            assert_eq!(e.dim(&lam, DimMethod::Weyl).unwrap(), big(d));
        }
        let small = MultEngine::new().with_basis_cap(10);
        assert!(matches!(
            small.dim(&w(&[2, 3]), DimMethod::Enum),
            Err(Error::ResourceCap { .. })
        ));
    }

    #[test]
    fn methods_agree_and_are_weyl_invariant() {
        let e = MultEngine::new();
        for l in 1..=3usize {
            for code in 0..3usize.pow(l as u32) {
                let lam = w(&(0..l)
                    .map(|t| ((code / 3usize.pow(t as u32)) % 3) as i64)
                    .collect::<Vec<_>>());
                let rec = e.character(&lam, Method::Recursive).unwrap();
                let cnt = e.character(&lam, Method::Count).unwrap();
                let fr = e.character(&lam, Method::Freudenthal).unwrap();
                assert_eq!(rec, cnt, "{lam}");
                assert_eq!(cnt, fr, "{lam}");
                assert_eq!(cnt.get(&lam), big(1));
                for (mu, m) in cnt.iter() {
                    for i in 1..=l {
                        assert_eq!(&cnt.get(&reflect(mu, i).unwrap()), m);
                    }
                }
            }
        }
    }

    #[test]
    fn recursion_descends_in_rank() {
        let e = MultEngine::new();
        let lam = w(&[1, 2, 1]);
        e.mult_recursive(&lam, &w(&[0, 0, 0])).unwrap();
        let keys = e.export_memo();
        let top: Vec<_> = keys
            .iter()
            .filter(|(k, _)| k.lambda.coords().len() == 3)
            .collect();
        assert_eq!(top.len(), 1);
        assert!(keys.iter().all(|(k, _)| k.lambda.coords().len() <= 3));
    }

    #[test]
    fn method_names_roundtrip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("kostant".parse::<Method>().is_err());
    }
}
