use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{deserialize_big_vec, serialize_big_vec};

/// Dense integer polynomial, coefficients in ascending degree. The zero
/// polynomial has no coefficients; otherwise the leading one is non-zero.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPolynomial {
    #[serde(
        serialize_with = "serialize_big_vec",
        deserialize_with = "deserialize_big_vec"
    )]
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self {
            coefficients: Vec::new(),
        }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x − r`.
    pub fn linear_root(r: &BigInt) -> Self {
        Self::new(vec![-r, BigInt::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn coefficient(&self, i: usize) -> BigInt {
        self.coefficients.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> BigInt {
        self.coefficients.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coefficients
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from(c.clone()))
    }

    /// Sign of the value at `x`, computed on the cleared-denominator form
    /// `Σ cᵢ pⁱ q^{n−i}` with `x = p/q`, `q > 0`.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        let (p, q) = (x.numer(), x.denom());
        let n = self.degree();
        let mut total = BigInt::zero();
        let mut p_pow = BigInt::one();
        let mut q_pows = vec![BigInt::one(); n + 1];
        for i in 1..=n {
            q_pows[i] = &q_pows[i - 1] * q;
        }
        for (i, c) in self.coefficients.iter().enumerate() {
            total += c * &p_pow * &q_pows[n - i];
            p_pow *= p;
        }
        total.cmp(&BigInt::zero())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self {
            coefficients: self.coefficients.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coefficients.len().max(other.coefficients.len());
        Self::new((0..n).map(|i| self.coefficient(i) + other.coefficient(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coefficients.iter().map(|c| c * k).collect())
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        super::gcd_all(&self.coefficients)
    }

    /// Divides out the content, keeping the sign of the leading coefficient.
    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        Self {
            coefficients: self.coefficients.iter().map(|x| x / &c).collect(),
        }
    }

    /// Pseudo-remainder of `self` by `b`, normalised to be a positive
    /// multiple of the true remainder so that signs survive.
    fn positive_pseudo_rem(&self, b: &Self) -> Self {
        let mut r = self.clone();
        let lb = b.leading();
        let db = b.degree();
        let mut steps = 0usize;
        while !r.is_zero() && r.degree() >= db {
            let shift = r.degree() - db;
            let lr = r.leading();
            let mut next: Vec<BigInt> = r.coefficients.iter().map(|c| c * &lb).collect();
            for (j, c) in b.coefficients.iter().enumerate() {
                next[j + shift] -= c * &lr;
            }
            r = Self::new(next);
            steps += 1;
        }
        if lb.is_negative() && steps % 2 == 1 {
            r = r.neg();
        }
        r
    }

    /// Exact quotient when `divisor` divides `self` over the integers.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.degree() < divisor.degree() {
            return None;
        }
        let mut r = self.coefficients.clone();
        let db = divisor.degree();
        let lb = divisor.leading();
        let mut q = vec![BigInt::zero(); self.degree() - db + 1];
        for shift in (0..q.len()).rev() {
            let top = &r[shift + db];
            if top.is_zero() {
                continue;
            }
            let (quot, rem) = top.div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (j, c) in divisor.coefficients.iter().enumerate() {
                r[j + shift] -= c * &quot;
            }
            q[shift] = quot;
        }
        r.iter().all(Zero::is_zero).then(|| Self::new(q))
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.positive_pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        if a.leading().is_negative() {
            a = a.neg();
        }
        a
    }

    /// Product of the distinct irreducible factors, primitive with positive
    /// leading coefficient.
    pub fn square_free_part(&self) -> Self {
        if self.degree() == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        let mut q = self
            .primitive_part()
            .div_exact(&g)
            .expect("gcd divides its argument")
            .primitive_part();
        if q.leading().is_negative() {
            q = q.neg();
        }
        q
    }

    /// The polynomial of degree `< points.len()` through the given points,
    /// if its coefficients are integral.
    pub fn interpolate(points: &[(BigInt, BigInt)]) -> Option<Self> {
        let n = points.len();
        let xs: Vec<BigRational> = points.iter().map(|(x, _)| BigRational::from(x.clone())).collect();
        let mut dd: Vec<BigRational> = points.iter().map(|(_, y)| BigRational::from(y.clone())).collect();
        for level in 1..n {
            for i in (level..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
            }
        }
        let mut coeffs = vec![BigRational::zero(); n.max(1)];
        for i in (0..n).rev() {
            let mut next = vec![BigRational::zero(); n];
            for j in 0..n {
                if j + 1 < n {
                    next[j + 1] += &coeffs[j];
                }
                next[j] -= &coeffs[j] * &xs[i];
            }
            next[0] += &dd[i];
            coeffs = next;
        }
        let mut ints = Vec::with_capacity(n);
        for c in coeffs {
            if !c.is_integer() {
                return None;
            }
            ints.push(c.to_integer());
        }
        Some(Self::new(ints))
    }

    /// Discriminant of a quadratic `c + bx + ax²`.
    pub fn quadratic_discriminant(&self) -> Option<BigInt> {
        (self.degree() == 2).then(|| {
            let (c, b, a) = (&self.coefficients[0], &self.coefficients[1], &self.coefficients[2]);
            b * b - BigInt::from(4) * a * c
        })
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !abs.is_one() || i == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sturm sequence of the square-free part of a polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<IntPolynomial>,
}

impl SturmChain {
    pub fn new(p: &IntPolynomial) -> Self {
        let p0 = p.square_free_part();
        let mut chain = vec![p0.clone()];
        if p0.degree() == 0 {
            return Self { chain };
        }
        let mut prev = p0;
        let mut cur = prev.derivative().primitive_part();
        while !cur.is_zero() {
            let next = prev.positive_pseudo_rem(&cur).neg().primitive_part();
            chain.push(cur.clone());
            prev = cur;
            cur = next;
        }
        Self { chain }
    }

    pub fn polynomial(&self) -> &IntPolynomial {
        &self.chain[0]
    }

    fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
        let mut count = 0;
        let mut last = Ordering::Equal;
        for s in signs {
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_at_pos_infinity(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| p.leading().cmp(&BigInt::zero())))
    }

    pub fn variations_at_neg_infinity(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| {
            let s = p.leading().cmp(&BigInt::zero());
            if p.degree() % 2 == 1 {
                s.reverse()
            } else {
                s
            }
        }))
    }

    /// Distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations_at(lo).saturating_sub(self.variations_at(hi))
    }

    /// Distinct real roots strictly greater than `x`.
    pub fn count_roots_above(&self, x: &BigRational) -> usize {
        self.variations_at(x)
            .saturating_sub(self.variations_at_pos_infinity())
    }

    pub fn count_real_roots(&self) -> usize {
        self.variations_at_neg_infinity()
            .saturating_sub(self.variations_at_pos_infinity())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn display() {
        assert_eq!(IntPolynomial::from_i64(&[-1, -1, 1]).to_string(), "x^2 - x - 1");
        assert_eq!(IntPolynomial::from_i64(&[-6, 1]).to_string(), "x - 6");
        assert_eq!(IntPolynomial::from_i64(&[0, -6, 1]).to_string(), "x^2 - 6x");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn arithmetic() {
        let a = IntPolynomial::from_i64(&[-1, 1]);
        let b = IntPolynomial::from_i64(&[1, 1]);
        let ab = a.mul(&b);
        assert_eq!(ab, IntPolynomial::from_i64(&[-1, 0, 1]));
        assert_eq!(ab.div_exact(&a), Some(b.clone()));
        assert_eq!(ab.div_exact(&IntPolynomial::from_i64(&[2, 1])), None);
        assert_eq!(ab.derivative(), IntPolynomial::from_i64(&[0, 2]));
    }

    #[test]
    fn square_free() {
        // (x − 1)² (x + 2)
        let p = IntPolynomial::from_i64(&[2, -3, 0, 1]);
        assert_eq!(p.square_free_part(), IntPolynomial::from_i64(&[-2, 1, 1]));
        let x2 = IntPolynomial::from_i64(&[0, 0, 1]);
        assert_eq!(x2.square_free_part(), IntPolynomial::from_i64(&[0, 1]));
    }

    #[test]
    fn sturm_counts() {
        let golden = IntPolynomial::from_i64(&[-1, -1, 1]);
        let s = SturmChain::new(&golden);
        assert_eq!(s.count_real_roots(), 2);
        assert_eq!(s.count_roots(&q(1, 1), &q(2, 1)), 1);
        assert_eq!(s.count_roots(&q(-1, 1), &q(0, 1)), 1);
        assert_eq!(s.count_roots_above(&q(16, 10)), 1);
        assert_eq!(s.count_roots_above(&q(17, 10)), 0);

        // (x − 1)(x − 2)(x − 3) counted on (1, 3]
        let cubic = IntPolynomial::from_i64(&[-6, 11, -6, 1]);
        let s = SturmChain::new(&cubic);
        assert_eq!(s.count_roots(&q(1, 1), &q(3, 1)), 2);
        assert_eq!(s.count_real_roots(), 3);

        // x² + 1 has no real roots.
        assert_eq!(SturmChain::new(&IntPolynomial::from_i64(&[1, 0, 1])).count_real_roots(), 0);
    }

    #[test]
    fn sign_evaluation_matches_rational_evaluation() {
        let p = IntPolynomial::from_i64(&[3, -7, 0, 2, -1]);
        for n in -20..20 {
            let x = q(n, 7);
            let exact = p.eval_rational(&x);
            assert_eq!(p.sign_at(&x), exact.cmp(&BigRational::zero()));
        }
    }

    #[test]
    fn interpolation() {
        let p = IntPolynomial::from_i64(&[3, -2, 0, 5]);
        let pts: Vec<(BigInt, BigInt)> = (0..4)
            .map(|x| (BigInt::from(x), p.eval(&BigInt::from(x))))
            .collect();
        assert_eq!(IntPolynomial::interpolate(&pts), Some(p));
        let half = [(BigInt::from(0), BigInt::from(0)), (BigInt::from(2), BigInt::from(1))];
        assert_eq!(IntPolynomial::interpolate(&half), None);
    }

    #[test]
    fn json() {
        let p = IntPolynomial::from_i64(&[-1, -1, 1]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"coefficients":[-1,-1,1]}"#);
        assert_eq!(serde_json::from_str::<IntPolynomial>(&s).unwrap(), p);
    }
}
