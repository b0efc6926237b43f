//! Arbitrary-precision integer matrices and the exact spectral procedures
//! built on them.
//!
//! Entries are `BigInt`, so signed values are available for intermediate
//! work (cofactors, polynomial evaluation), while the substitution-facing
//! validators insist on non-negativity.

mod factor;
mod poly;
mod spectral;

pub use factor::factor_monic;
pub use poly::{IntPolynomial, SturmChain};
pub(crate) use spectral::compare_fields;
pub use spectral::{
    characteristic_polynomial, field_compatible, pf_eigenvector, pf_report, pf_report_with,
    purely_aperiodic, EigenSide, EigenvectorApprox, FieldCompatibility, PfReport,
};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Builds an [`ExactMatrix`] from nested integer literals.
///
/// ```
/// let f = subkit::mat![[1, 1], [1, 0]];
/// assert_eq!(f.rows(), 2);
/// ```
#[macro_export]
macro_rules! mat {
    ($([$($x:expr),* $(,)?]),+ $(,)?) => {
        $crate::matrix::ExactMatrix::from_rows(&[$(vec![$(($x) as i64),*]),+])
            .expect("mat! rows must be non-empty and of equal length")
    };
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::domain("matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::domain(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::domain("ragged rows"));
        }
        let data = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        Self::new(r, c, data)
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::domain("ragged rows"));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Permutation matrix `P` with `P[perm[j]][j] = 1`, so that
    /// `(Pᵀ N P)[i][j] = N[perm[i]][perm[j]]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (j, &pj) in perm.iter().enumerate() {
            m.data[pj * n + j] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::domain(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut data = vec![BigInt::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// `self^k` by repeated squaring; `k = 0` gives the identity.
    pub fn pow(&self, k: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::domain("matrix power needs a square matrix"));
        }
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .sum()
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::domain("determinant needs a square matrix"));
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigInt>> = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Rank by fraction-free Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.to_rows();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for i in rank + 1..rows {
                for j in c + 1..cols {
                    let v = &a[i][j] * &a[rank][c] - &a[i][c] * &a[rank][j];
                    a[i][j] = v / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[rank][c].clone();
            rank += 1;
        }
        rank
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|x| x.is_positive())
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<BigInt> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j)).sum())
            .collect()
    }

    pub fn max_entry(&self) -> BigInt {
        self.data.iter().max().cloned().unwrap_or_default()
    }

    pub fn min_entry(&self) -> BigInt {
        self.data.iter().min().cloned().unwrap_or_default()
    }

    /// Non-negative with no zero row and no zero column.
    pub fn validate_transition(&self) -> Result<()> {
        if !self.is_nonnegative() {
            return Err(Error::validation(format!("negative entry in {self}")));
        }
        if let Some(i) = self.row_sums().iter().position(Zero::is_zero) {
            return Err(Error::validation(format!("row {i} of {self} is zero")));
        }
        if let Some(j) = self.col_sums().iter().position(Zero::is_zero) {
            return Err(Error::validation(format!("column {j} of {self} is zero")));
        }
        Ok(())
    }

    /// A square transition matrix: what a substitution abelianizes to.
    pub fn validate_substitution_matrix(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::validation(format!(
                "substitution matrix must be square, got {}x{}",
                self.rows, self.cols
            )));
        }
        self.validate_transition()
    }

    /// Least `k` with `self^k` entrywise positive, searched up to the
    /// Wielandt bound `n² − 2n + 2`; `None` if the matrix is not primitive.
    pub fn primitivity_exponent(&self) -> Option<u32> {
        if !self.is_square() || !self.is_nonnegative() {
            return None;
        }
        let n = self.rows;
        let pattern: Vec<bool> = self.data.iter().map(|x| !x.is_zero()).collect();
        let bound = n * n + 2 - 2 * n;
        let mut power = pattern.clone();
        for k in 1..=bound {
            if power.iter().all(|&b| b) {
                return Some(k as u32);
            }
            let mut next = vec![false; n * n];
            for i in 0..n {
                for l in 0..n {
                    if power[i * n + l] {
                        for j in 0..n {
                            if pattern[l * n + j] {
                                next[i * n + j] = true;
                            }
                        }
                    }
                }
            }
            power = next;
        }
        None
    }

    pub fn is_primitive(&self) -> (bool, Option<u32>) {
        let k = self.primitivity_exponent();
        (k.is_some(), k)
    }

    /// Rank of `Mⁿ` for an `n × n` matrix: the rank of the part of `M`
    /// that survives every power.
    pub fn non_nilpotent_rank(&self) -> Result<usize> {
        Ok(self.pow(self.rows as u32)?.rank())
    }

    pub fn is_invertible(&self) -> Result<bool> {
        Ok(!self.determinant()?.is_zero())
    }

    /// The adjugate, so that `self · adj = det · I`.
    pub fn adjugate(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::domain("adjugate needs a square matrix"));
        }
        let n = self.rows;
        if n == 1 {
            return Ok(Self::identity(1));
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<BigInt> = (0..n)
                    .filter(|&r| r != j)
                    .flat_map(|r| (0..n).filter(move |&c| c != i).map(move |c| (r, c)))
                    .map(|(r, c)| self.get(r, c).clone())
                    .collect();
                let d = Self::new(n - 1, n - 1, minor)?.determinant()?;
                out.set(i, j, if (i + j) % 2 == 0 { d } else { -d });
            }
        }
        Ok(out)
    }

    /// The integer matrix `X` with `self · X = rhs`, if `self` is invertible
    /// and the solution is integral.
    pub fn left_divide(&self, rhs: &Self) -> Result<Option<Self>> {
        let det = self.determinant()?;
        if det.is_zero() {
            return Ok(None);
        }
        Ok(self.adjugate()?.multiply(rhs)?.divide_exact(&det))
    }

    /// The integer matrix `X` with `X · self = lhs`, if it exists.
    pub fn right_divide(&self, lhs: &Self) -> Result<Option<Self>> {
        let det = self.determinant()?;
        if det.is_zero() {
            return Ok(None);
        }
        Ok(lhs.multiply(&self.adjugate()?)?.divide_exact(&det))
    }

    fn divide_exact(&self, d: &BigInt) -> Option<Self> {
        let mut data = Vec::with_capacity(self.data.len());
        for x in &self.data {
            let (q, r) = x.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            data.push(q);
        }
        Some(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Parses the `.mat` text format: one row per line, whitespace-separated
    /// decimal integers, `#` comments and blank lines ignored.
    pub fn parse_mat(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<BigInt>()
                        .map_err(|_| Error::parse(idx + 1, format!("not an integer: {tok:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(first) = rows.first().map(Vec::len) {
                if first != row.len() {
                    return Err(Error::parse(
                        idx + 1,
                        format!("expected {first} entries, found {}", row.len()),
                    ));
                }
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::parse(0, "empty matrix"));
        }
        Self::from_big_rows(rows).map_err(|e| Error::parse(0, e.to_string()))
    }

    pub fn to_mat_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl std::ops::Mul<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;

    /// Panics on a shape mismatch; use [`ExactMatrix::multiply`] for a
    /// checked product.
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.multiply(rhs).expect("matrix shapes must agree")
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// JSON entries are plain numbers when they fit in an `i64` and decimal
/// strings otherwise.
pub(crate) struct BigEntry<'a>(pub &'a BigInt);

impl Serialize for BigEntry<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EntryRepr {
    Int(i64),
    Text(String),
}

impl EntryRepr {
    fn into_big<E: de::Error>(self) -> std::result::Result<BigInt, E> {
        match self {
            EntryRepr::Int(v) => Ok(BigInt::from(v)),
            EntryRepr::Text(t) => t
                .parse()
                .map_err(|_| E::custom(format!("invalid integer {t:?}"))),
        }
    }
}

pub(crate) fn serialize_big_vec<S: Serializer>(
    v: &[BigInt],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&BigEntry(x))?;
    }
    seq.end()
}

pub(crate) fn deserialize_big_vec<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Vec<BigInt>, D::Error> {
    Vec::<EntryRepr>::deserialize(d)?
        .into_iter()
        .map(EntryRepr::into_big)
        .collect()
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<BigEntry<'_>> = self.row(i).iter().map(BigEntry).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<EntryRepr>>::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(EntryRepr::into_big).collect())
            .collect::<std::result::Result<Vec<Vec<BigInt>>, D::Error>>()?;
        ExactMatrix::from_big_rows(rows).map_err(de::Error::custom)
    }
}

/// Distinct prime factors with multiplicity, by trial division.
pub(crate) fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n <= BigInt::one() {
        return out;
    }
    let mut p = BigInt::from(2u32);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Positive divisors of `|n|`, ascending. `n` must be non-zero.
pub(crate) fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut divs = vec![BigInt::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut q = d.clone();
            for _ in 0..=e {
                next.push(q.clone());
                q *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

pub(crate) fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x))
}
