use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::matrix::{factorize, gcd_all, ExactMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

/// A formal product `∏ p^{e_p}` with `e_p ∈ ℕ ∪ {∞}`. The empty product is 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SupernaturalNumber {
    exponents: BTreeMap<BigInt, Exponent>,
}

impl SupernaturalNumber {
    pub fn one() -> Self {
        Self::default()
    }

    /// `n^∞`: every prime of `n` with infinite exponent.
    pub fn infinite_power(n: &BigInt) -> Self {
        let exponents = factorize(n)
            .into_iter()
            .map(|(p, _)| (p, Exponent::Infinite))
            .collect();
        Self { exponents }
    }

    /// The product with the finite integer `n`.
    pub fn times(mut self, n: &BigInt) -> Self {
        for (p, e) in factorize(n) {
            let entry = self.exponents.entry(p).or_insert(Exponent::Finite(0));
            if let Exponent::Finite(f) = entry {
                *f += e;
            }
        }
        self
    }

    pub fn exponent(&self, p: &BigInt) -> Option<Exponent> {
        self.exponents.get(p).copied()
    }

    pub fn exponents(&self) -> &BTreeMap<BigInt, Exponent> {
        &self.exponents
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return f.write_str("1");
        }
        for (i, (p, e)) in self.exponents.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            match e {
                Exponent::Infinite => write!(f, "{p}^∞")?,
                Exponent::Finite(1) => write!(f, "{p}")?,
                Exponent::Finite(k) => write!(f, "{p}^{k}")?,
            }
        }
        Ok(())
    }
}

/// JSON form: `{"2": 1, "3": "inf"}`.
impl Serialize for SupernaturalNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.exponents.len()))?;
        for (p, e) in &self.exponents {
            match e {
                Exponent::Finite(k) => map.serialize_entry(&p.to_string(), k)?,
                Exponent::Infinite => map.serialize_entry(&p.to_string(), "inf")?,
            }
        }
        map.end()
    }
}

/// Writes a rank-1 matrix as `c·rᵀ` with `r` of content 1, so the
/// factorization is unique. `None` unless the rank is exactly 1 and the
/// entries are non-negative.
pub fn rank_one_factors(m: &ExactMatrix) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    if !m.is_nonnegative() || m.rank() != 1 {
        return None;
    }
    let i0 = (0..m.rows()).find(|&i| m.row(i).iter().any(|x| !x.is_zero()))?;
    let content = gcd_all(m.row(i0));
    let r: Vec<BigInt> = m.row(i0).iter().map(|x| x / &content).collect();
    let j0 = r.iter().position(|x| !x.is_zero())?;
    let c: Vec<BigInt> = (0..m.rows()).map(|i| m.get(i, j0) / &r[j0]).collect();
    for (i, ci) in c.iter().enumerate() {
        for (j, rj) in r.iter().enumerate() {
            if ci * rj != *m.get(i, j) {
                return None;
            }
        }
    }
    Some((c, r))
}

/// The supernatural number of the stationary diagram of `m`, when the
/// diagram is a single tower up to telescoping: `m` is 1×1 or of rank 1.
///
/// For `m = c·rᵀ` the level-`k` labels are `(Σc)·s^{k−1}·r` with
/// `s = r·c`, so every prime of `s` occurs to infinite order and the
/// remaining primes of `Σc` to their finite multiplicity.
pub fn supernatural(m: &ExactMatrix) -> Option<SupernaturalNumber> {
    if !m.is_square() || m.validate_substitution_matrix().is_err() {
        return None;
    }
    if m.rows() == 1 {
        return Some(SupernaturalNumber::infinite_power(m.get(0, 0)));
    }
    let (c, r) = rank_one_factors(m)?;
    let s: BigInt = r.iter().zip(&c).map(|(a, b)| a * b).sum();
    let total: BigInt = c.iter().sum();
    let mut finite = total;
    for (p, _) in factorize(&s) {
        while finite.is_multiple_of(&p) && !finite.is_one() {
            finite /= &p;
        }
    }
    Some(SupernaturalNumber::infinite_power(&s).times(&finite))
}
