mod common;

use common::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use subkit::bratteli::{analyze_equivalence, state_split, BratteliDiagram, Budget};
use subkit::{ExactMatrix, Preset};

fn valid_transition(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
    proptest::collection::vec(proptest::collection::vec(0i64..=2, cols), rows)
        .prop_map(|r| ExactMatrix::from_rows(&r).unwrap())
        .prop_filter("every vertex has an edge", |t| t.validate_transition().is_ok())
}

fn random_diagram() -> impl Strategy<Value = BratteliDiagram> {
    proptest::collection::vec(1..=3usize, 2..=6)
        .prop_flat_map(|sizes| {
            let ts: Vec<_> = sizes.windows(2).map(|w| valid_transition(w[0], w[1])).collect();
            (Just(sizes[0]), ts)
        })
        .prop_map(|(base, ts)| BratteliDiagram::from_transitions(ts, base).unwrap())
}

fn substitution_matrix(max_size: usize) -> impl Strategy<Value = ExactMatrix> {
    (1..=max_size).prop_flat_map(valid_square)
}

fn valid_square(n: usize) -> impl Strategy<Value = ExactMatrix> {
    valid_transition(n, n)
}

fn label_rule_holds(d: &BratteliDiagram) -> bool {
    let labels = d.labels();
    labels[0].iter().all(|l| *l == BigInt::from(1))
        && d.transitions().iter().enumerate().all(|(n, t)| {
            (0..t.cols()).all(|j| {
                let sum: BigInt = (0..t.rows()).map(|i| t.get(i, j) * &labels[n][i]).sum();
                sum == labels[n + 1][j]
            })
        })
}

/// `(N, S)` with `N` a 0/1 matrix of unit column sums and no zero row.
fn split_factors() -> impl Strategy<Value = (ExactMatrix, ExactMatrix)> {
    (1..=3usize)
        .prop_flat_map(|r| (Just(r), r..=4usize))
        .prop_flat_map(|(r, c)| {
            (
                Just(r),
                Just(c),
                permutation(c),
                proptest::collection::vec(0..r, c),
                proptest::collection::vec(proptest::collection::vec(0i64..=3, r), c),
            )
        })
        .prop_map(|(r, c, order, extra, s)| {
            // the first r columns (after shuffling) hit every row once
            let mut owner = extra;
            for (i, &col) in order.iter().take(r).enumerate() {
                owner[col] = i;
            }
            let n: Vec<Vec<i64>> = (0..r)
                .map(|i| (0..c).map(|j| i64::from(owner[j] == i)).collect())
                .collect();
            (ExactMatrix::from_rows(&n).unwrap(), ExactMatrix::from_rows(&s).unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn telescoping_keeps_the_label_rule(d in random_diagram(), seed in any::<u64>()) {
        let depth = d.depth();
        let mut cuts = vec![0];
        let mut s = seed;
        for level in 1..depth {
            if s & 1 == 1 {
                cuts.push(level);
            }
            s >>= 1;
        }
        cuts.push(depth);
        let t = d.telescope(&cuts).unwrap();
        prop_assert!(label_rule_holds(&d));
        prop_assert!(label_rule_holds(&t));
        for (i, &c) in cuts.iter().enumerate() {
            prop_assert_eq!(&t.labels()[i], &d.labels()[c]);
        }
    }

    #[test]
    fn stride_telescope_is_a_power(m in substitution_matrix(4), k in 1usize..=5) {
        let d = BratteliDiagram::stationary(&m, 2 * k).unwrap();
        let t = d.telescope_stride(k).unwrap();
        let direct = BratteliDiagram::stationary(&m.pow(k as u32).unwrap(), 2).unwrap();
        prop_assert_eq!(t, direct);
    }

    #[test]
    fn conjugates_are_equivalent(
        (m, perm) in (1..=4usize).prop_flat_map(|n| (valid_square(n), permutation(n)))
    ) {
        let p = ExactMatrix::permutation(&perm);
        let conj = &(&p.transpose() * &m) * &p;
        let v = analyze_equivalence(&m, &conj, &Budget::preset(Preset::Small)).unwrap();
        let cert = v.certificate();
        prop_assert!(cert.is_some(), "{:?}", v);
        prop_assert!(check_unordered(cert.unwrap(), &m, &conj));
    }

    #[test]
    fn analyzer_is_sound(m in substitution_matrix(3), n in substitution_matrix(3)) {
        let budget = Budget::preset(Preset::Small);
        for (a, b) in [(&m, &n), (&m, &m.pow(2).unwrap()), (&n, &m)] {
            if let Some(cert) = analyze_equivalence(a, b, &budget).unwrap().certificate() {
                prop_assert!(check_unordered(cert, a, b), "{} vs {}: {:?}", a, b, cert);
            }
        }
    }

    #[test]
    fn state_splitting_preserves_primitivity((n, s) in split_factors()) {
        let m = &n * &s;
        prop_assume!(m.is_primitive().0 && s.validate_transition().is_ok());
        let split = state_split(&m, &n, &s).unwrap();
        prop_assert!(split.matrix.is_primitive().0);
        prop_assert!(check_unordered(&split.certificate, &m, &split.matrix));
        let v = analyze_equivalence(&m, &split.matrix, &Budget::preset(Preset::Small)).unwrap();
        prop_assert!(v.invariant().is_none(), "{:?}", v);
    }
}

#[test]
fn invertible_pair_shares_every_invariant() {
    let m = matrix(&[
        &[1, 1, 0, 0, 0],
        &[0, 1, 1, 0, 0],
        &[0, 0, 1, 1, 0],
        &[0, 0, 0, 1, 1],
        &[1, 0, 0, 0, 1],
    ]);
    let n = matrix(&[
        &[0, 1, 1, 0, 0],
        &[0, 0, 1, 1, 0],
        &[1, 0, 0, 0, 1],
        &[1, 1, 0, 0, 0],
        &[0, 0, 0, 1, 1],
    ]);
    let v = analyze_equivalence(&m, &n, &Budget::preset(Preset::Small)).unwrap();
    assert!(v.invariant().is_none(), "{v:?}");
    if let Some(cert) = v.certificate() {
        assert!(check_unordered(cert, &m, &n));
    }
}
