//! The Fibonacci matrix `F = [[1,1],[1,0]]`, its P/Q factorizations and
//! ordered equivalence between substitutions whose matrices are powers of
//! `F`.
//!
//! `P = [[1,0],[1,1]]` and `Q = [[1,1],[0,1]]` generate the non-negative
//! determinant-one integer matrices freely, `J` is the swap and
//! `F = QJ = JP`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::ordered::{accept, filtered_link, ordered_battery, LinkFilter, OrderedBudget, OrderedVerdict};
use crate::words::{Alphabet, Substitution, Word};
use crate::Verdict;

pub fn fib_matrix() -> ExactMatrix {
    crate::mat![[1, 1], [1, 0]]
}

pub fn p_matrix() -> ExactMatrix {
    crate::mat![[1, 0], [1, 1]]
}

pub fn q_matrix() -> ExactMatrix {
    crate::mat![[1, 1], [0, 1]]
}

pub fn j_matrix() -> ExactMatrix {
    crate::mat![[0, 1], [1, 0]]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Prime {
    P,
    Q,
}

/// A product of `P`s and `Q`s, optionally with `J` on either side.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PQWord {
    pub letters: Vec<Prime>,
    pub left_j: bool,
    pub right_j: bool,
}

impl PQWord {
    pub fn evaluate(&self) -> ExactMatrix {
        let mut m = if self.left_j { j_matrix() } else { ExactMatrix::identity(2) };
        for l in &self.letters {
            let factor = match l {
                Prime::P => p_matrix(),
                Prime::Q => q_matrix(),
            };
            m = &m * &factor;
        }
        if self.right_j {
            m = &m * &j_matrix();
        }
        m
    }
}

impl fmt::Display for PQWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.left_j {
            f.write_str("J")?;
        }
        for l in &self.letters {
            f.write_str(match l {
                Prime::P => "P",
                Prime::Q => "Q",
            })?;
        }
        if self.right_j {
            f.write_str("J")?;
        }
        Ok(())
    }
}

impl FromStr for PQWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        // a lone "J" is the canonical right form
        let (right_j, rest) = match s.strip_suffix('J') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (left_j, body) = match rest.strip_prefix('J') {
            Some(body) => (true, body),
            None => (false, rest),
        };
        let letters = body
            .chars()
            .map(|c| match c {
                'P' => Ok(Prime::P),
                'Q' => Ok(Prime::Q),
                other => Err(Error::parse(1, format!("unexpected {other:?} in P/Q word"))),
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            letters,
            left_j,
            right_j,
        })
    }
}

impl Serialize for PQWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PQWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

fn require_2x2(m: &ExactMatrix) -> Result<()> {
    if m.rows() == 2 && m.cols() == 2 {
        Ok(())
    } else {
        Err(Error::domain(format!("expected a 2×2 matrix, got {}×{}", m.rows(), m.cols())))
    }
}

/// Euclidean peel of a determinant-one matrix.
fn peel(m: &ExactMatrix) -> Option<Vec<Prime>> {
    let mut e: [BigInt; 4] = [0, 1, 2, 3].map(|i| m.entries()[i].clone());
    if e.iter().any(Signed::is_negative) {
        return None;
    }
    let mut letters = Vec::new();
    loop {
        let [a, b, c, d] = &e;
        if a.is_one() && b.is_zero() && c.is_zero() && d.is_one() {
            return Some(letters);
        }
        if a >= c && b >= d {
            letters.push(Prime::Q);
            e = [a - c, b - d, c.clone(), d.clone()];
        } else if c >= a && d >= b {
            letters.push(Prime::P);
            e = [a.clone(), b.clone(), c - a, d - b];
        } else {
            return None;
        }
        if e.iter().any(Signed::is_negative) {
            return None;
        }
    }
}

/// The P/Q word of a non-negative 2×2 matrix of determinant ±1. For
/// determinant −1 the canonical form puts `J` on the right. Since
/// `J·W = (JWJ)·J` with `JWJ` again a P/Q word, the left form is only a
/// fallback and never needed for non-negative input.
pub fn pq_factorize(m: &ExactMatrix) -> Result<Option<PQWord>> {
    require_2x2(m)?;
    if !m.is_nonnegative() {
        return Ok(None);
    }
    let det = m.determinant()?;
    if det.is_one() {
        return Ok(peel(m).map(|letters| PQWord {
            letters,
            ..PQWord::default()
        }));
    }
    if det != BigInt::from(-1) {
        return Ok(None);
    }
    if let Some(letters) = peel(&(m * &j_matrix())) {
        return Ok(Some(PQWord {
            letters,
            left_j: false,
            right_j: true,
        }));
    }
    Ok(peel(&(&j_matrix() * m)).map(|letters| PQWord {
        letters,
        left_j: true,
        right_j: false,
    }))
}

/// How a factorization `A·B = F^m` splits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind")]
pub enum FibFactorClass {
    /// `A = F^k`, `B = F^l`.
    PlainSplit { k: u32, l: u32 },
    /// `A = F^k·J`, `B = J·F^l`.
    TwistedSplit { k: u32, l: u32 },
}

impl FibFactorClass {
    pub fn m(self) -> u32 {
        match self {
            FibFactorClass::PlainSplit { k, l } | FibFactorClass::TwistedSplit { k, l } => k + l,
        }
    }

    /// The pair `(A, B)` of this class.
    pub fn factors(self) -> Result<(ExactMatrix, ExactMatrix)> {
        let f = fib_matrix();
        Ok(match self {
            FibFactorClass::PlainSplit { k, l } => (f.pow(k)?, f.pow(l)?),
            FibFactorClass::TwistedSplit { k, l } => (&f.pow(k)? * &j_matrix(), &j_matrix() * &f.pow(l)?),
        })
    }
}

impl fmt::Display for FibFactorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FibFactorClass::PlainSplit { k, l } => write!(f, "plain F^{k} · F^{l}"),
            FibFactorClass::TwistedSplit { k, l } => write!(f, "twisted F^{k}J · JF^{l}"),
        }
    }
}

/// `Some(m)` when `x = F^m`. Entries of `F^m` grow strictly from `m = 2`
/// on, so the loop stops once they pass the largest entry of `x`.
pub fn fib_exponent(x: &ExactMatrix) -> Result<Option<u32>> {
    require_2x2(x)?;
    let f = fib_matrix();
    let bound = x.max_entry();
    let mut power = ExactMatrix::identity(2);
    for m in 0u32.. {
        if &power == x {
            return Ok(Some(m));
        }
        if m >= 1 && power.max_entry() > bound {
            return Ok(None);
        }
        power = &power * &f;
    }
    unreachable!("the loop returns once entries pass the bound")
}

pub fn classify_fib_factors(a: &ExactMatrix, b: &ExactMatrix) -> Result<Option<FibFactorClass>> {
    require_2x2(a)?;
    require_2x2(b)?;
    let Some(m) = fib_exponent(&(a * b))?.filter(|&m| m >= 1) else {
        return Ok(None);
    };
    let f = fib_matrix();
    let j = j_matrix();
    for k in 0..=m {
        let fk = f.pow(k)?;
        let l = m - k;
        if a == &fk && b == &f.pow(l)? {
            return Ok(Some(FibFactorClass::PlainSplit { k, l }));
        }
        if a == &(&fk * &j) && b == &(&j * &f.pow(l)?) {
            return Ok(Some(FibFactorClass::TwistedSplit { k, l }));
        }
    }
    Ok(None)
}

/// Every ordered substitution on `{a, b}` whose matrix is `F^l`, indexed
/// lazily: entry `i` takes image `i mod n_a` of `a` and image `i / n_a`
/// of `b`, where each letter's images are in lexicographic order.
#[derive(Debug)]
pub struct OrderedFibFamily {
    l: u32,
    images: [Vec<Word>; 2],
}

impl OrderedFibFamily {
    pub fn exponent(&self) -> u32 {
        self.l
    }

    pub fn len(&self) -> usize {
        self.images[0].len() * self.images[1].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> Option<Substitution> {
        if i >= self.len() {
            return None;
        }
        let n = self.images[0].len();
        let images = vec![self.images[0][i % n].clone(), self.images[1][i / n].clone()];
        Some(Substitution::square(Alphabet::standard(2), images).expect("images are over {a, b}"))
    }

    pub fn iter(&self) -> impl Iterator<Item = Substitution> + '_ {
        (0..self.len()).filter_map(|i| self.get(i))
    }
}

/// Words with `a` copies of letter 0 and `b` of letter 1, in lexicographic
/// order.
fn arrangements(a: usize, b: usize) -> Vec<Word> {
    if a == 0 || b == 0 {
        return vec![[vec![0; a], vec![1; b]].concat()];
    }
    let mut out: Vec<Word> = arrangements(a - 1, b).into_iter().map(|w| [vec![0], w].concat()).collect();
    out.extend(arrangements(a, b - 1).into_iter().map(|w| [vec![1], w].concat()));
    out
}

pub const MAX_FIB_FAMILY: u32 = 6;

pub fn enumerate_ordered_fib(l: u32) -> Result<Arc<OrderedFibFamily>> {
    if l > MAX_FIB_FAMILY {
        return Err(Error::domain(format!("l = {l} exceeds {MAX_FIB_FAMILY}")));
    }
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<OrderedFibFamily>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&l) {
        return Ok(hit.clone());
    }
    let f = fib_matrix().pow(l)?;
    let count = |i, j| -> usize { f.get(i, j).try_into().expect("F^6 entries are small") };
    let family = Arc::new(OrderedFibFamily {
        l,
        images: [
            arrangements(count(0, 0), count(0, 1)),
            arrangements(count(1, 0), count(1, 1)),
        ],
    });
    cache.lock().expect("cache lock").insert(l, family.clone());
    Ok(family)
}

fn fib_power_of(s: &Substitution) -> Result<Option<u32>> {
    if s.domain().len() != 2 || s.codomain().len() != 2 {
        return Ok(None);
    }
    fib_exponent(&s.abelianize())
}

/// Ordered equivalence for substitutions with matrices `F^m` and `F^n`.
///
/// Every map in an interleaving chain has a Fibonacci power as matrix, and
/// the first one's exponent is a positive multiple of `n`, so the search
/// only tries such maps. The first map ranges over members of
/// [`enumerate_ordered_fib`] whose images occur in the powers of `s1`.
pub fn fib_ordered_equivalence(
    s1: &Substitution,
    s2: &Substitution,
    budget: &OrderedBudget,
) -> Result<OrderedVerdict> {
    let not_fib = |s: &Substitution| Error::domain(format!("matrix of {s} is not a power of F"));
    fib_power_of(s1)?.filter(|&m| m >= 1).ok_or_else(|| not_fib(s1))?;
    let n = fib_power_of(s2)?.filter(|&n| n >= 1).ok_or_else(|| not_fib(s2))?;
    if let Some(v) = ordered_battery(s1, s2, &budget.cancel)? {
        return Ok(v);
    }
    let f = fib_matrix();
    let first_rows: Vec<ExactMatrix> = (0..=budget.max_power)
        .map(|k| f.pow(k * n))
        .collect::<Result<_>>()?;
    let first = |k: u32, b: usize, w: &[usize]| {
        let ones = w.iter().filter(|&&l| l == 1).count();
        let row = &first_rows[k as usize];
        BigInt::from(w.len() - ones) == *row.get(b, 0) && BigInt::from(ones) == *row.get(b, 1)
    };
    let second = |t: &Substitution| matches!(fib_exponent(&t.abelianize()), Ok(Some(_)));
    let filter = LinkFilter {
        min_k: 1,
        first: &first,
        second: &second,
    };
    let Some(link) = filtered_link(s1, s2, budget, &filter)? else {
        return Ok(Verdict::Unknown);
    };
    let cert = crate::bratteli::Certificate::direct(link);
    let all_fib = cert.maps().all(|t| matches!(fib_power_of(t), Ok(Some(_))));
    debug_assert!(all_fib, "chain maps have Fibonacci matrices");
    if all_fib && accept(&cert, s1, s2, budget) {
        Ok(Verdict::Equivalent { certificate: cert })
    } else {
        Ok(Verdict::Unknown)
    }
}
