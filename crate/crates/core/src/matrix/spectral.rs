//! Exact Perron–Frobenius procedures.
//!
//! All decisions are made with integer polynomials and Sturm sequences over
//! exact rationals; floating point never enters a verdict.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::factor::factor_monic;
use super::poly::{IntPolynomial, SturmChain};
use super::{divisors, factorize, BigEntry, ExactMatrix};
use crate::cancel::CancelToken;
use crate::error::{Error, Result};

/// Monic characteristic polynomial `det(xI − M)` by Faddeev–LeVerrier.
/// Every division is exact over the integers.
pub fn characteristic_polynomial(m: &ExactMatrix) -> Result<IntPolynomial> {
    if !m.is_square() {
        return Err(Error::domain("characteristic polynomial needs a square matrix"));
    }
    let n = m.rows();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut mk = ExactMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m * &mk;
        for i in 0..n {
            let v = next.get(i, i) + &c[n - k + 1];
            next.set(i, i, v);
        }
        mk = next;
        let tr = (m * &mk).trace();
        c[n - k] = -tr / BigInt::from(k);
    }
    Ok(IntPolynomial::new(c))
}

fn serialize_ratio<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn serialize_interval<S: Serializer>(
    r: &(BigRational, BigRational),
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    [r.0.to_string(), r.1.to_string()].serialize(s)
}

fn serialize_opt_big<S: Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => BigEntry(x).serialize(s),
        None => s.serialize_none(),
    }
}

fn serialize_ratios<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PfReport {
    pub is_primitive: bool,
    pub primitivity_exponent: Option<u32>,
    pub characteristic_polynomial: IntPolynomial,
    pub pf_is_rational: bool,
    #[serde(serialize_with = "serialize_opt_big")]
    pub pf_integer_value: Option<BigInt>,
    /// `lo < λ_PF ≤ hi`, isolating λ_PF among the roots of the minimal
    /// polynomial; a rational λ_PF is the point interval `[λ, λ]`.
    #[serde(serialize_with = "serialize_interval")]
    pub pf_isolation_interval: (BigRational, BigRational),
    pub minimal_polynomial_degree: usize,
    pub pf_minimal_polynomial: IntPolynomial,
}

impl PfReport {
    pub fn approx_value(&self) -> f64 {
        let (lo, hi) = &self.pf_isolation_interval;
        ((lo + hi) / BigRational::from(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    /// Shrinks the isolation interval by bisection until its width is at
    /// most `width`. Rational eigenvalues collapse to a point.
    pub fn refined_interval(
        &self,
        width: &BigRational,
        cancel: &CancelToken,
    ) -> Result<(BigRational, BigRational)> {
        if let Some(v) = &self.pf_integer_value {
            let v = BigRational::from(v.clone());
            return Ok((v.clone(), v));
        }
        let sturm = SturmChain::new(&self.pf_minimal_polynomial);
        let (mut lo, mut hi) = self.pf_isolation_interval.clone();
        let two = BigRational::from(BigInt::from(2));
        while &hi - &lo > *width {
            cancel.check()?;
            let mid = (&lo + &hi) / &two;
            if sturm.count_roots(&mid, &hi) > 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok((lo, hi))
    }
}

pub fn pf_report(m: &ExactMatrix) -> Result<PfReport> {
    pf_report_with(m, &CancelToken::new())
}

/// Decides rationality of λ_PF and isolates it. Requires a primitive matrix.
pub fn pf_report_with(m: &ExactMatrix, cancel: &CancelToken) -> Result<PfReport> {
    if !m.is_square() {
        return Err(Error::domain("PF report needs a square matrix"));
    }
    if !m.is_nonnegative() {
        return Err(Error::precondition("PF report needs a non-negative matrix"));
    }
    let exponent = m
        .primitivity_exponent()
        .ok_or_else(|| Error::precondition(format!("{m} is not primitive")))?;
    let charpoly = characteristic_polynomial(m)?;
    let sums = m.row_sums();
    let rmin = sums.iter().min().cloned().expect("nonempty");
    let rmax = sums.iter().max().cloned().expect("nonempty");
    let sturm = SturmChain::new(&charpoly);
    cancel.check()?;

    let integer_root = if rmin == rmax {
        Some(rmin.clone())
    } else {
        let lowest = charpoly
            .coefficients()
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .expect("monic polynomial is non-zero");
        divisors(&lowest)
            .into_iter()
            .filter(|r| *r >= rmin && *r <= rmax)
            .rev()
            .find(|r| {
                charpoly.eval(r).is_zero()
                    && sturm.count_roots_above(&BigRational::from(r.clone())) == 0
            })
    };

    if let Some(r) = integer_root {
        let rr = BigRational::from(r.clone());
        let minimal = IntPolynomial::linear_root(&r);
        return Ok(PfReport {
            is_primitive: true,
            primitivity_exponent: Some(exponent),
            characteristic_polynomial: charpoly,
            pf_is_rational: true,
            pf_integer_value: Some(r),
            pf_isolation_interval: (rr.clone(), rr),
            minimal_polynomial_degree: 1,
            pf_minimal_polynomial: minimal,
        });
    }

    // λ_PF lies strictly between the extreme row sums and is the largest
    // real root; bisect until (lo, hi] holds no other root.
    let mut lo = BigRational::from(rmin);
    let mut hi = BigRational::from(rmax + BigInt::one());
    let two = BigRational::from(BigInt::from(2));
    while sturm.count_roots(&lo, &hi) > 1 {
        cancel.check()?;
        let mid = (&lo + &hi) / &two;
        if sturm.count_roots(&mid, &hi) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let monic_sf = sturm.polynomial().clone();
    let minimal = factor_monic(&monic_sf, cancel)?
        .into_iter()
        .find(|g| SturmChain::new(g).count_roots(&lo, &hi) == 1)
        .ok_or_else(|| Error::domain("no irreducible factor isolates λ_PF"))?;
    Ok(PfReport {
        is_primitive: true,
        primitivity_exponent: Some(exponent),
        characteristic_polynomial: charpoly,
        pf_is_rational: false,
        pf_integer_value: None,
        pf_isolation_interval: (lo, hi),
        minimal_polynomial_degree: minimal.degree(),
        pf_minimal_polynomial: minimal,
    })
}

/// Primitive with irrational λ_PF.
pub fn purely_aperiodic(m: &ExactMatrix) -> Result<bool> {
    Ok(!pf_report(m)?.pf_is_rational)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldCompatibility {
    Compatible,
    Incompatible,
    Indeterminate,
}

fn square_free_integer(n: &BigInt) -> BigInt {
    let mut out = if n.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    for (p, e) in factorize(n) {
        if e % 2 == 1 {
            out *= p;
        }
    }
    out
}

/// Compares `ℚ[λ_M]` and `ℚ[λ_N]`; decided for degrees 1 and 2.
pub fn field_compatible(m: &ExactMatrix, n: &ExactMatrix) -> Result<FieldCompatibility> {
    let a = pf_report(m)?;
    let b = pf_report(n)?;
    Ok(compare_fields(&a, &b))
}

pub(crate) fn compare_fields(a: &PfReport, b: &PfReport) -> FieldCompatibility {
    use FieldCompatibility::*;
    match (a.minimal_polynomial_degree, b.minimal_polynomial_degree) {
        (1, 1) => Compatible,
        (da, db) if da != db => Incompatible,
        (2, 2) => {
            let da = a.pf_minimal_polynomial.quadratic_discriminant().expect("quadratic");
            let db = b.pf_minimal_polynomial.quadratic_discriminant().expect("quadratic");
            if square_free_integer(&da) == square_free_integer(&db) {
                Compatible
            } else {
                Incompatible
            }
        }
        _ => Indeterminate,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EigenSide {
    /// Normalised so the smallest entry is 1: tile lengths, `M·ℓ = λℓ`.
    Left,
    /// Normalised to sum 1: letter frequencies, `Mᵀ·v = λv`.
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenvectorApprox {
    pub side: EigenSide,
    #[serde(serialize_with = "serialize_ratios")]
    pub entries: Vec<BigRational>,
    #[serde(serialize_with = "serialize_ratio")]
    pub error_bound: BigRational,
}

impl EigenvectorApprox {
    pub fn to_f64(&self) -> Vec<f64> {
        self.entries
            .iter()
            .map(|e| e.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

/// First column of `adj(tI − A)` as integer polynomials in `t`. At a simple
/// eigenvalue it spans the eigenvector of `A`; for primitive `A` and
/// `t = λ_PF` every entry is positive.
fn adjugate_column(a: &ExactMatrix) -> Vec<IntPolynomial> {
    let n = a.rows();
    if n == 1 {
        return vec![IntPolynomial::constant(BigInt::one())];
    }
    (0..n)
        .map(|i| {
            let points: Vec<(BigInt, BigInt)> = (0..n as i64)
                .map(|t| {
                    let t = BigInt::from(t);
                    let mut rows = Vec::with_capacity(n - 1);
                    for r in 1..n {
                        let mut row = Vec::with_capacity(n - 1);
                        for c in (0..n).filter(|&c| c != i) {
                            let mut v = -a.get(r, c);
                            if r == c {
                                v += &t;
                            }
                            row.push(v);
                        }
                        rows.push(row);
                    }
                    let minor = ExactMatrix::from_big_rows(rows)
                        .expect("square minor")
                        .determinant()
                        .expect("square");
                    let v = if i % 2 == 0 { minor } else { -minor };
                    (t, v)
                })
                .collect();
            IntPolynomial::interpolate(&points).expect("cofactors are integer polynomials")
        })
        .collect()
}

/// Encloses `p(t)` for `t ∈ [lo, hi]`, `lo ≥ 0`.
fn interval_eval(
    p: &IntPolynomial,
    lo: &BigRational,
    hi: &BigRational,
) -> (BigRational, BigRational) {
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for c in p.coefficients().iter().rev() {
        let c = BigRational::from(c.clone());
        let prods = [&a * lo, &a * hi, &b * lo, &b * hi];
        let min = prods.iter().min().cloned().expect("four products");
        let max = prods.iter().max().cloned().expect("four products");
        a = min + &c;
        b = max + &c;
    }
    (a, b)
}

pub fn pf_eigenvector(
    m: &ExactMatrix,
    side: EigenSide,
    tolerance: &BigRational,
) -> Result<EigenvectorApprox> {
    pf_eigenvector_with(m, side, tolerance, &CancelToken::new())
}

/// PF eigenvector with a certified entrywise error bound below
/// `tolerance`. The eigenvector is the first adjugate column of
/// `λI − A`, evaluated in exact interval arithmetic over a shrinking
/// isolating interval of λ.
pub fn pf_eigenvector_with(
    m: &ExactMatrix,
    side: EigenSide,
    tolerance: &BigRational,
    cancel: &CancelToken,
) -> Result<EigenvectorApprox> {
    if !tolerance.is_positive() {
        return Err(Error::domain("tolerance must be positive"));
    }
    let report = pf_report_with(m, cancel)?;
    let a = match side {
        EigenSide::Right => m.transpose(),
        EigenSide::Left => m.clone(),
    };
    let column = adjugate_column(&a);
    let (mut lo, mut hi) = report.refined_interval(&BigRational::one(), cancel)?;
    let two = BigRational::from(BigInt::from(2));
    loop {
        cancel.check()?;
        let boxes: Vec<(BigRational, BigRational)> =
            column.iter().map(|q| interval_eval(q, &lo, &hi)).collect();
        if boxes.iter().all(|(a, _)| a.is_positive()) {
            let mids: Vec<BigRational> = boxes.iter().map(|(a, b)| (a + b) / &two).collect();
            let (entries, bounds): (Vec<BigRational>, Vec<(BigRational, BigRational)>) = match side {
                EigenSide::Right => {
                    let total: BigRational = mids.iter().cloned().sum();
                    let sum_lo: BigRational = boxes.iter().map(|b| b.0.clone()).sum();
                    let sum_hi: BigRational = boxes.iter().map(|b| b.1.clone()).sum();
                    let entries = mids.iter().map(|x| x / &total).collect();
                    let bounds = boxes
                        .iter()
                        .map(|(a, b)| {
                            let lower = a / (a + (&sum_hi - b));
                            let upper = b / (b + (&sum_lo - a));
                            (lower, upper)
                        })
                        .collect();
                    (entries, bounds)
                }
                EigenSide::Left => {
                    let min_mid = mids.iter().min().cloned().expect("nonempty");
                    let min_lo = boxes.iter().map(|b| b.0.clone()).min().expect("nonempty");
                    let min_hi = boxes.iter().map(|b| b.1.clone()).min().expect("nonempty");
                    let entries = mids.iter().map(|x| x / &min_mid).collect();
                    let bounds = boxes
                        .iter()
                        .map(|(a, b)| (a / &min_hi, b / &min_lo))
                        .collect();
                    (entries, bounds)
                }
            };
            let error = entries
                .iter()
                .zip(&bounds)
                .map(|(v, (l, u))| std::cmp::max(v - l, u - v))
                .max()
                .expect("nonempty");
            if error < *tolerance || lo == hi {
                return Ok(EigenvectorApprox {
                    side,
                    entries,
                    error_bound: error,
                });
            }
        }
        if lo == hi {
            return Err(Error::domain("adjugate column vanished at λ_PF"));
        }
        let width = (&hi - &lo) / &two;
        (lo, hi) = report.refined_interval(&width, cancel)?;
    }
}
