mod common;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;
use subkit::matrix::{pf_eigenvector, pf_report, purely_aperiodic, EigenSide, SturmChain};
use subkit::{CancelToken, ExactMatrix};

fn to_f64(m: &ExactMatrix) -> Vec<Vec<f64>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|v| v.to_f64().unwrap()).collect())
        .collect()
}

/// Spectral radius of a primitive matrix by power iteration.
fn float_radius(m: &ExactMatrix) -> f64 {
    let a = to_f64(m);
    let n = a.len();
    let mut v = vec![1.0; n];
    let mut lambda = 0.0;
    for _ in 0..20_000 {
        let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a[i][j] * v[j]).sum()).collect();
        let norm: f64 = w.iter().sum();
        let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
        let moved: f64 = next.iter().zip(&v).map(|(x, y)| (x - y).abs()).sum();
        v = next;
        lambda = norm / v.iter().sum::<f64>().max(f64::MIN_POSITIVE);
        if moved < 1e-15 {
            break;
        }
    }
    lambda
}

fn ratio(x: &BigRational) -> f64 {
    x.to_f64().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pf_report_is_consistent(m in primitive_matrix(4, 6)) {
        let rep = pf_report(&m).unwrap();
        let (lo, hi) = &rep.pf_isolation_interval;
        if let Some(v) = &rep.pf_integer_value {
            prop_assert!(rep.characteristic_polynomial.eval(v).is_zero());
            prop_assert_eq!(lo, hi);
        } else {
            let sturm = SturmChain::new(&rep.pf_minimal_polynomial);
            prop_assert_eq!(sturm.count_roots(lo, hi), 1);
        }
        let sums = m.row_sums();
        let rmin = BigRational::from(sums.iter().min().unwrap().clone());
        let rmax = BigRational::from(sums.iter().max().unwrap().clone() + 1);
        prop_assert!(&rmin <= lo && hi <= &rmax, "{:?} outside [{}, {}]", rep.pf_isolation_interval, rmin, rmax);
    }

    #[test]
    fn non_nilpotent_rank_is_conjugation_invariant(
        (m, perm) in (1..=4usize).prop_flat_map(|n| (
            proptest::collection::vec(proptest::collection::vec(0i64..=3, n), n),
            permutation(n),
        ))
    ) {
        let m = ExactMatrix::from_rows(&m).unwrap();
        let p = ExactMatrix::permutation(&perm);
        let conj = &(&p.transpose() * &m) * &p;
        prop_assert_eq!(m.non_nilpotent_rank().unwrap(), conj.non_nilpotent_rank().unwrap());
    }

    #[test]
    fn purely_aperiodic_agrees_with_floats(m in primitive_matrix(3, 9)) {
        let exact = purely_aperiodic(&m).unwrap();
        let lambda = float_radius(&m);
        let near_integer = (lambda - lambda.round()).abs() < 1e-6;
        prop_assert_eq!(exact, !near_integer, "λ ≈ {}", lambda);
    }

    #[test]
    fn eigenvector_is_fixed(m in primitive_matrix(3, 5)) {
        let tol = BigRational::new(BigInt::from(1), BigInt::from(1_000_000_000));
        let v = pf_eigenvector(&m, EigenSide::Right, &tol).unwrap();
        let rep = pf_report(&m).unwrap();
        let width = BigRational::new(BigInt::from(1), BigInt::from(10).pow(15));
        let (lo, hi) = rep.refined_interval(&width, &CancelToken::new()).unwrap();
        let lambda = (ratio(&lo) + ratio(&hi)) / 2.0;
        let vf: Vec<f64> = v.entries.iter().map(ratio).collect();
        let a = to_f64(&m);
        let bound = ratio(&v.error_bound);
        let spread: f64 = a.iter().flatten().sum::<f64>() / lambda;
        for (i, vi) in vf.iter().enumerate() {
            let image: f64 = (0..vf.len()).map(|j| a[j][i] * vf[j]).sum::<f64>() / lambda;
            prop_assert!((image - vi).abs() <= bound * (1.0 + spread) + 1e-9, "entry {}: {} vs {}", i, image, vi);
        }
    }
}

#[test]
fn fibonacci_powers() {
    let f = matrix(&[&[1, 1], &[1, 0]]);
    for n in 1..=20u32 {
        let p = f.pow(n).unwrap();
        let n = n as usize;
        let want = [fib(n + 1), fib(n), fib(n), fib(n - 1)];
        let got: Vec<u64> = p.entries().iter().map(|v| v.to_u64().unwrap()).collect();
        assert_eq!(got, want, "F^{n}");
    }
}
