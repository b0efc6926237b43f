//! Factorization of monic integer polynomials into irreducibles.
//!
//! Linear factors come from the rational root theorem. Higher-degree
//! factors use Kronecker's method: a monic factor `g` of degree `d` is
//! determined by `d` values, and each `g(xᵢ)` divides `f(xᵢ)`. Points are
//! chosen among small values of `f` where `f(xᵢ)` has few divisors. The method is exponential but the
//! polynomials met here (characteristic polynomials of small matrices) are
//! tiny; a work cap turns pathological inputs into an error.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::IntPolynomial;
use super::divisors;
use crate::cancel::CancelToken;
use crate::error::{Error, Result};

const MAX_CANDIDATES: u64 = 20_000_000;

/// Irreducible monic factors of a monic polynomial, with multiplicity,
/// ascending by degree.
pub fn factor_monic(f: &IntPolynomial, cancel: &CancelToken) -> Result<Vec<IntPolynomial>> {
    if !f.is_monic() {
        return Err(Error::domain(format!("{f} is not monic")));
    }
    let mut rest = f.clone();
    let mut out = Vec::new();
    let x = IntPolynomial::from_i64(&[0, 1]);
    while rest.degree() > 0 && rest.coefficient(0).is_zero() {
        out.push(x.clone());
        rest = rest.div_exact(&x).expect("x divides");
    }
    if rest.degree() > 0 {
        for d in divisors(&rest.coefficient(0)) {
            for r in [d.clone(), -d] {
                let lin = IntPolynomial::linear_root(&r);
                while rest.degree() > 0 && rest.eval(&r).is_zero() {
                    out.push(lin.clone());
                    rest = rest.div_exact(&lin).expect("root gives a factor");
                }
            }
        }
    }
    let mut budget = MAX_CANDIDATES;
    let mut d = 2;
    while rest.degree() >= 2 * d {
        match find_factor(&rest, d, &mut budget, cancel)? {
            Some(g) => {
                rest = rest.div_exact(&g).expect("verified factor");
                out.push(g);
            }
            None => d += 1,
        }
    }
    if rest.degree() > 0 {
        out.push(rest);
    }
    out.sort_by_key(IntPolynomial::degree);
    Ok(out)
}

fn find_factor(
    f: &IntPolynomial,
    d: usize,
    budget: &mut u64,
    cancel: &CancelToken,
) -> Result<Option<IntPolynomial>> {
    cancel.check()?;
    // f has no integer roots here, so f(x) ≠ 0 at every integer.
    let mut values: Vec<(BigInt, BigInt)> = (-64i64..=64)
        .map(|x| {
            let x = BigInt::from(x);
            let v = f.eval(&x);
            (x, v)
        })
        .collect();
    values.sort_by(|(xa, va), (xb, vb)| va.abs().cmp(&vb.abs()).then(xa.abs().cmp(&xb.abs())));
    values.truncate(3 * d + 2);
    let mut points: Vec<(BigInt, Vec<BigInt>)> =
        values.into_iter().map(|(x, v)| (x, divisors(&v))).collect();
    points.sort_by_key(|(x, divs)| (divs.len(), x.abs()));
    points.truncate(d);

    let radices: Vec<usize> = points.iter().map(|(_, divs)| 2 * divs.len()).collect();
    let mut digits = vec![0usize; d];
    loop {
        if *budget == 0 {
            return Err(Error::WorkLimit(format!(
                "factor search for degree-{d} factors of {f}"
            )));
        }
        *budget -= 1;
        if budget.is_multiple_of(1024) {
            cancel.check()?;
        }
        let values: Vec<BigInt> = digits
            .iter()
            .zip(&points)
            .map(|(&k, (_, divs))| {
                let v = &divs[k / 2];
                if k % 2 == 0 {
                    v.clone()
                } else {
                    -v
                }
            })
            .collect();
        if let Some(g) = interpolate_monic(&points, &values, d) {
            if g.degree() == d && f.div_exact(&g).is_some() {
                return Ok(Some(g));
            }
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == d {
                return Ok(None);
            }
            digits[i] += 1;
            if digits[i] < radices[i] {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// The monic degree-`d` polynomial through `(xᵢ, valuesᵢ)`, if its
/// coefficients are integral.
fn interpolate_monic(
    points: &[(BigInt, Vec<BigInt>)],
    values: &[BigInt],
    d: usize,
) -> Option<IntPolynomial> {
    // g − x^d has degree < d.
    let shifted: Vec<(BigInt, BigInt)> = points
        .iter()
        .zip(values)
        .map(|((x, _), v)| (x.clone(), v - num_traits::pow(x.clone(), d)))
        .collect();
    let h = IntPolynomial::interpolate(&shifted)?;
    let mut monic = vec![BigInt::zero(); d + 1];
    monic[d] = BigInt::one();
    Some(h.add(&IntPolynomial::new(monic)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn product(fs: &[IntPolynomial]) -> IntPolynomial {
        fs.iter().fold(p(&[1]), |acc, f| acc.mul(f))
    }

    #[test]
    fn linear_and_zero_roots() {
        let f = p(&[0, -6, 1]);
        let fs = factor_monic(&f, &CancelToken::new()).unwrap();
        assert_eq!(fs, vec![p(&[0, 1]), p(&[-6, 1])]);
    }

    #[test]
    fn golden_is_irreducible() {
        let f = p(&[-1, -1, 1]);
        assert_eq!(factor_monic(&f, &CancelToken::new()).unwrap(), vec![f]);
    }

    #[test]
    fn quadratic_times_quadratic() {
        let a = p(&[-1, -1, 1]);
        let b = p(&[2, 0, 1]);
        let fs = factor_monic(&a.mul(&b), &CancelToken::new()).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.contains(&a) && fs.contains(&b));
    }

    #[test]
    fn mixed_product_reconstructs() {
        let parts = [p(&[-1, -1, 1]), p(&[1, 1]), p(&[-3, 0, 0, 1]), p(&[-1, -1, 1])];
        let f = product(&parts);
        let fs = factor_monic(&f, &CancelToken::new()).unwrap();
        assert_eq!(product(&fs), f);
        assert_eq!(fs.len(), 4);
    }

    #[test]
    fn cancellation() {
        let t = CancelToken::new();
        t.cancel();
        let f = p(&[-1, -1, 1]).mul(&p(&[2, 0, 1])).mul(&p(&[5, 1, 0, 1]));
        assert_eq!(factor_monic(&f, &t), Err(Error::Cancelled));
    }
}
