#![allow(clippy::needless_range_loop)]

mod oracle;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use flowcert::components::{canonical_partition, irreducible_components, reachable_by_powers, Reachability};
use flowcert::det::{det_int, det_poly};
use flowcert::generate::{GenConfig, Generator, SeedKind};
use flowcert::shift::{compose_se, eliminate_zero_diagonal_blocks, verify_se};
use flowcert::smith::smith_normal_form;
use flowcert::IntMatrix;

fn matrix(rows: usize, cols: usize, lo: i64, hi: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(lo..=hi, rows * cols).prop_map(move |v| {
        let rows: Vec<Vec<BigInt>> = v.chunks(cols).map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
        IntMatrix::from_rows(rows).unwrap()
    })
}

fn square(max: usize, lo: i64, hi: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max).prop_flat_map(move |n| matrix(n, n, lo, hi))
}

fn triple(max: usize) -> impl Strategy<Value = (IntMatrix, IntMatrix, IntMatrix)> {
    (1..=max, 1..=max, 1..=max, 1..=max)
        .prop_flat_map(|(a, b, c, d)| (matrix(a, b, -5, 5), matrix(b, c, -5, 5), matrix(c, d, -5, 5)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn product_is_associative((a, b, c) in triple(4)) {
        let left = a.mat_mul(&b).unwrap().mat_mul(&c).unwrap();
        let right = a.mat_mul(&b.mat_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn product_matches_dense((a, b, _) in triple(4)) {
        let p = a.mat_mul(&b).unwrap();
        prop_assert_eq!(oracle::dense(&p), oracle::mul(&oracle::dense(&a), &oracle::dense(&b)));
    }

    #[test]
    fn determinant_is_multiplicative(n in 1usize..=4, seed in any::<u64>()) {
        let mut g = Generator::new(seed);
        let a = g.int_matrix(n, n, -6, 6);
        let b = g.int_matrix(n, n, -6, 6);
        let ab = det_int(&a.mat_mul(&b).unwrap()).unwrap();
        prop_assert_eq!(ab.clone(), det_int(&a).unwrap() * det_int(&b).unwrap());
        prop_assert_eq!(det_int(&a).unwrap(), oracle::det(&oracle::dense(&a)));
    }

    #[test]
    fn smith_form_is_correct(m in (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| matrix(r, c, -9, 9))) {
        let snf = smith_normal_form(&m);
        let product = snf.left.mat_mul(&m.canonical()).unwrap().mat_mul(&snf.right).unwrap();
        prop_assert_eq!(product, snf.diagonal_matrix());
        prop_assert!(det_int(&snf.left).unwrap().abs().is_one());
        prop_assert!(det_int(&snf.right).unwrap().abs().is_one());
        let nonzero: Vec<BigInt> = snf.diagonal.iter().filter(|d| !d.is_zero()).cloned().collect();
        for w in nonzero.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(nonzero.iter().all(|d| d > &BigInt::zero()));
        prop_assert_eq!(nonzero, oracle::invariant_factors(&oracle::dense(&m)));
    }

    #[test]
    fn evaluation_commutes_with_determinant(a in square(4, 0, 3), x in -4i64..=4) {
        let p = det_poly(&a.identity_minus_t().unwrap()).unwrap();
        let at_x = a.identity_minus_t().unwrap().eval(&BigInt::from(x));
        prop_assert_eq!(p.eval(&BigInt::from(x)), det_int(&at_x).unwrap());
    }

    #[test]
    fn evaluation_is_a_ring_map(a in square(3, 0, 3), b in square(3, 0, 3), x in -3i64..=3) {
        prop_assume!(a.nrows() == b.nrows());
        let x = BigInt::from(x);
        let pa = a.identity_minus_t().unwrap();
        let pb = b.identity_minus_t().unwrap();
        let prod = pa.mat_mul(&pb).unwrap().eval(&x);
        prop_assert_eq!(prod, pa.eval(&x).mat_mul(&pb.eval(&x)).unwrap());
    }

    #[test]
    fn components_match_powers(a in square(6, 0, 1)) {
        let reach = Reachability::new(&a).unwrap();
        let powers = reachable_by_powers(&a).unwrap();
        let dense = oracle::reach_by_powers(&oracle::dense(&a));
        prop_assert_eq!(&powers, &dense);
        let n = a.nrows();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(reach.path(i, j), dense[i][j]);
            }
        }
        let report = irreducible_components(&a).unwrap();
        let labels = oracle::sorted_labels(&a);
        for (i, l) in labels.iter().enumerate() {
            let cyclic = dense[i][i];
            prop_assert_eq!(report.component_of(l).is_some(), cyclic);
            prop_assert_eq!(report.trivial_indices.contains(l), !cyclic);
        }
        for c in &report.components {
            for x in &c.members {
                for y in &c.members {
                    let (i, j) = (labels.iter().position(|l| l == x).unwrap(), labels.iter().position(|l| l == y).unwrap());
                    prop_assert!(dense[i][j]);
                }
            }
        }
    }

    #[test]
    fn canonical_partition_is_valid(seed in any::<u64>(), comps in 1usize..=3) {
        let a = Generator::new(seed).structured_matrix(comps, 0);
        let part = canonical_partition(&a).unwrap();
        prop_assert!(part.validate().unwrap().valid);
    }

    #[test]
    fn generated_witnesses_verify(seed in any::<u64>()) {
        let se = Generator::new(seed).random_se(SeedKind::Any);
        prop_assert!(verify_se(&se).unwrap().pass);
        prop_assert!(verify_se(&se.inverse()).unwrap().pass);
    }

    #[test]
    fn composition_verifies(seed in any::<u64>()) {
        let mut g = Generator::new(seed);
        let first = g.random_se(SeedKind::Any);
        let second = g.extend_chain(flowcert::shift::ShiftEquivalence::identity(&first.b).unwrap(), 2);
        let both = compose_se(&first, &second).unwrap();
        prop_assert_eq!(both.lag, first.lag + second.lag);
        prop_assert!(verify_se(&both).unwrap().pass);
    }

    #[test]
    fn elimination_chain_verifies(seed in any::<u64>(), trivial in 1usize..=3) {
        let cfg = GenConfig { max_side: 6, ..GenConfig::default() };
        let a = Generator::with_config(seed, cfg).structured_matrix(1, trivial);
        let (reduced, chain) = eliminate_zero_diagonal_blocks(&a).unwrap();
        prop_assert!(chain.verify().unwrap());
        prop_assert!(irreducible_components(&reduced).unwrap().trivial_indices.is_empty());
        if let Some(se) = chain.compose().unwrap() {
            prop_assert!(verify_se(&se).unwrap().pass);
            prop_assert_eq!(se.a, a.canonical());
        }
    }
}
