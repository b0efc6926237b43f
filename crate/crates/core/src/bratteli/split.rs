use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::certificate::{Certificate, ChainLink};
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;

/// A matrix together with a certificate linking the input generator to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Construction {
    pub matrix: ExactMatrix,
    pub certificate: Certificate<ExactMatrix>,
}

/// State splitting: from `m = n·s` with `n` having unit column sums, the
/// stationary diagrams of `n·s` and `s·n` are telescope equivalent. The
/// certificate is the chain `n, s, n, s, …`.
pub fn state_split(m: &ExactMatrix, n: &ExactMatrix, s: &ExactMatrix) -> Result<Construction> {
    if !m.is_square() {
        return Err(Error::validation("state splitting needs a square matrix"));
    }
    if !n.is_nonnegative() || !s.is_nonnegative() {
        return Err(Error::validation("factors must be non-negative"));
    }
    if n.col_sums().iter().any(|c| !c.is_one()) {
        return Err(Error::validation("every column of the left factor must sum to one"));
    }
    if n.row_sums().iter().any(Zero::is_zero) {
        return Err(Error::validation("the left factor has a zero row"));
    }
    if s.validate_transition().is_err() {
        return Err(Error::validation("the right factor has a zero row or column"));
    }
    let product = n
        .multiply(s)
        .map_err(|e| Error::validation(e.to_string()))?;
    if &product != m {
        return Err(Error::validation(format!("{n} · {s} = {product}, not {m}")));
    }
    let split = s.multiply(n)?;
    Ok(Construction {
        matrix: split,
        certificate: Certificate::direct(ChainLink {
            chain: vec![n.clone(), s.clone()],
            odd_powers: vec![1],
            even_powers: vec![1],
        }),
    })
}

/// An equivalent primitive matrix on `target` letters.
///
/// Takes the least power `M^j` whose entries are all at least `target`,
/// splits its first letter into `target − size + 1` letters and returns
/// `D = S·N` where `M^j = N·S`.
pub fn enlarge(m: &ExactMatrix, target: usize) -> Result<Construction> {
    if !m.is_square() {
        return Err(Error::domain("enlarge needs a square matrix"));
    }
    let size = m.rows();
    if target <= size {
        return Err(Error::domain(format!(
            "target {target} must exceed the current size {size}"
        )));
    }
    if !m.is_nonnegative() || !m.is_primitive().0 {
        return Err(Error::precondition(format!("{m} is not primitive")));
    }
    let extra = target - size;
    let bound = BigInt::from(target);
    let mut j = 1u32;
    let mut power = m.clone();
    while power.min_entry() < bound {
        power = power.multiply(m)?;
        j += 1;
    }

    let mut n = ExactMatrix::zeros(size, target);
    for col in 0..=extra {
        n.set(0, col, BigInt::one());
    }
    for row in 1..size {
        n.set(row, extra + row, BigInt::one());
    }
    let mut s = ExactMatrix::zeros(target, size);
    for col in 0..size {
        s.set(0, col, power.get(0, col) - extra);
        for row in 1..=extra {
            s.set(row, col, BigInt::one());
        }
        for row in 1..size {
            s.set(extra + row, col, power.get(row, col).clone());
        }
    }
    debug_assert_eq!(n.multiply(&s)?, power);
    Ok(Construction {
        matrix: s.multiply(&n)?,
        certificate: Certificate::direct(ChainLink {
            chain: vec![n, s],
            odd_powers: vec![j],
            even_powers: vec![1],
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat;

    #[test]
    fn worked_state_split() {
        let f5 = mat![[1, 1], [1, 0]].pow(5).unwrap();
        let n = mat![[1, 1, 0], [0, 0, 1]];
        let s = mat![[7, 4], [1, 1], [5, 3]];
        let out = state_split(&f5, &n, &s).unwrap();
        assert_eq!(out.matrix, mat![[7, 7, 4], [1, 1, 1], [5, 5, 3]]);
        assert!(out.matrix.is_primitive().0);
        assert!(out.certificate.verify(&f5, &out.matrix).unwrap());
    }

    #[test]
    fn state_split_rejects_bad_factors() {
        let m = mat![[3, 3], [3, 3]];
        let c = mat![[3], [3]];
        let r = mat![[1, 1]];
        assert!(matches!(state_split(&m, &c, &r), Err(Error::Validation(_))));
        let f = mat![[1, 1], [1, 0]];
        let id = ExactMatrix::identity(2);
        assert!(matches!(state_split(&f, &id, &id), Err(Error::Validation(_))));
        let one = mat![[1]];
        assert!(matches!(state_split(&one, &mat![[1, 1]], &mat![[1], [0]]), Err(Error::Validation(_))));
        let out = state_split(&id, &id, &id).unwrap();
        assert_eq!(out.matrix, id);
    }

    #[test]
    fn enlarge_fibonacci() {
        let f = mat![[1, 1], [1, 0]];
        let three = enlarge(&f, 3).unwrap();
        assert_eq!(three.matrix, mat![[7, 7, 4], [1, 1, 1], [5, 5, 3]]);
        assert_eq!(three.certificate.link.odd_powers, vec![5]);
        assert!(three.certificate.verify(&f, &three.matrix).unwrap());

        let four = enlarge(&f, 4).unwrap();
        assert_eq!(four.matrix.rows(), 4);
        assert_eq!(four.certificate.link.odd_powers, vec![6]);
        assert!(four.matrix.is_primitive().0);
        assert!(four.certificate.verify(&f, &four.matrix).unwrap());
    }

    #[test]
    fn enlarge_scalar() {
        let two = mat![[2]];
        let out = enlarge(&two, 2).unwrap();
        assert_eq!(out.matrix, mat![[1, 1], [1, 1]]);
        assert!(out.certificate.verify(&two, &out.matrix).unwrap());
    }

    #[test]
    fn enlarge_errors() {
        let f = mat![[1, 1], [1, 0]];
        assert!(matches!(enlarge(&f, 2), Err(Error::Domain(_))));
        let id = ExactMatrix::identity(2);
        assert!(matches!(enlarge(&id, 3), Err(Error::Precondition(_))));
    }
}
