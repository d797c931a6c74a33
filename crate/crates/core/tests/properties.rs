use dodgson_core::condensation::{dodgson_det, ZeroPolicy};
use dodgson_core::identity::{desnanot_jacobi_check, make_singular_interior, singular_interior_check, DependentInteriorSpec};
use dodgson_core::io::{parse_matrix, render_matrix};
use dodgson_core::matrix::random_matrix;
use dodgson_core::{RingDomain, Scalar};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn domain() -> impl Strategy<Value = RingDomain> {
    prop_oneof![
        Just(RingDomain::Integers),
        Just(RingDomain::Rationals),
        prop::sample::select(vec![2u64, 3, 5, 7, 101, 65_537, 18_446_744_073_709_551_557])
            .prop_map(|p| RingDomain::prime_field(p).unwrap()),
    ]
}

fn scalar_in(d: RingDomain) -> impl Strategy<Value = Scalar> {
    (any::<i64>(), 1i64..1_000_000).prop_map(move |(n, den)| match d {
        RingDomain::Rationals => Scalar::rational(n, den).unwrap(),
        _ => Scalar::from_i64(d, n),
    })
}

fn triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
    domain().prop_flat_map(|d| (scalar_in(d), scalar_in(d), scalar_in(d)))
}

proptest! {
    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        let d = a.domain();
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.add(&Scalar::zero(d)).unwrap(), a.clone());
        prop_assert_eq!(a.mul(&Scalar::one(d)).unwrap(), a.clone());
        prop_assert!(a.add(&a.neg()).unwrap().is_zero());
    }

    #[test]
    fn division_inverts_multiplication((a, b, _c) in triple()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(a.mul(&b).unwrap().div_exact(&b).unwrap(), a);
    }

    #[test]
    fn rational_normalisation(p in any::<i64>(), q in 1i64..1_000_000, k in any::<i32>()) {
        prop_assume!(k != 0);
        let kp = BigInt::from(p) * k;
        let kq = BigInt::from(q) * k;
        prop_assert_eq!(Scalar::rational(p, q).unwrap(), Scalar::rational(kp, kq).unwrap());
    }

    #[test]
    fn scalar_text_round_trip((a, _b, _c) in triple()) {
        prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
    }

    #[test]
    fn matrix_text_round_trip(d in domain(), n in 0usize..6, seed in any::<u64>()) {
        let a = random_matrix(d, n, 50, seed);
        prop_assert_eq!(parse_matrix(&render_matrix(&a)).unwrap(), a);
    }

    #[test]
    fn minor_composition(seed in any::<u64>(), picks in prop::collection::vec((1usize..=7, 1usize..=7), 1..4)) {
        let a = random_matrix(RingDomain::Integers, 7, 9, seed);
        let first_rows: Vec<usize> = picks.iter().map(|p| p.0).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let first_cols: Vec<usize> = picks.iter().map(|p| p.1).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let once = a.delete(&first_rows, &first_cols).unwrap();
        // Delete one more original row/column, re-indexed into the smaller matrix.
        let extra_row = (1..=7).find(|r| !first_rows.contains(r)).unwrap();
        let extra_col = (1..=7).find(|c| !first_cols.contains(c)).unwrap();
        let shifted_row = extra_row - first_rows.iter().filter(|&&r| r < extra_row).count();
        let shifted_col = extra_col - first_cols.iter().filter(|&&c| c < extra_col).count();
        let twice = once.delete(&[shifted_row], &[shifted_col]).unwrap();
        let mut all_rows = first_rows.clone();
        all_rows.push(extra_row);
        let mut all_cols = first_cols.clone();
        all_cols.push(extra_col);
        prop_assert_eq!(twice, a.delete(&all_rows, &all_cols).unwrap());
    }

    #[test]
    fn oracles_agree(d in domain(), n in 1usize..=8, seed in any::<u64>()) {
        let a = random_matrix(d, n, 9, seed);
        prop_assert_eq!(a.det_cofactor().unwrap(), a.det_bareiss().unwrap());
    }

    #[test]
    fn determinant_row_operations(d in domain(), n in 2usize..=7, seed in any::<u64>(), i in 1usize..=7, j in 1usize..=7) {
        prop_assume!(i <= n && j <= n && i != j);
        let a = random_matrix(d, n, 9, seed);
        let det = a.det_bareiss().unwrap();
        prop_assert_eq!(a.with_rows_swapped(i, j).unwrap().det_bareiss().unwrap(), det.neg());
        let c = Scalar::from_i64(d, -3);
        prop_assert_eq!(a.with_row_scaled(i, &c).unwrap().det_bareiss().unwrap(), det.mul(&c).unwrap());
        let dup = dodgson_core::Matrix::from_fn(d, n, n, |r, col| a.get(if r == j { i } else { r }, col).clone());
        prop_assert!(dup.det_bareiss().unwrap().is_zero());
    }

    #[test]
    fn a_k_and_b_l_vanish(d in domain(), n in 4usize..=8, seed in any::<u64>()) {
        let a = random_matrix(d, n, 9, seed);
        for k in 3..n {
            prop_assert!(a.build_a_k(k).unwrap().det_bareiss().unwrap().is_zero());
        }
        for l in 1..n {
            prop_assert!(a.build_b_l(l).unwrap().det_bareiss().unwrap().is_zero());
        }
    }

    #[test]
    fn desnanot_jacobi_holds(d in domain(), n in 3usize..=7, seed in any::<u64>(), k in 1usize..=7, l in 1usize..=7) {
        prop_assume!(k < l && l <= n);
        let a = random_matrix(d, n, 9, seed);
        prop_assert!(desnanot_jacobi_check(&a, k, l).unwrap().passed);
    }

    #[test]
    fn singular_interior_generator(d in domain(), n in 3usize..=7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = DependentInteriorSpec::random(&mut rng, n, d, 9);
        let a = make_singular_interior(n, &spec, d, 9, seed).unwrap();
        prop_assert!(a.delete(&[n - 1, n], &[n - 1, n]).unwrap().det_bareiss().unwrap().is_zero());
        prop_assert!(singular_interior_check(&a).unwrap().passed);
    }

    #[test]
    fn condensation_matches_bareiss(d in domain(), n in 1usize..=12, seed in any::<u64>(), bound in 1u32..20) {
        let a = random_matrix(d, n, bound, seed);
        let (det, trace) = dodgson_det(&a, ZeroPolicy::BareissFallback).unwrap();
        prop_assert_eq!(&det, &a.det_bareiss().unwrap());
        prop_assert_eq!(trace.levels.len(), n);
        prop_assert_eq!(&trace.final_det, &det);
    }
}
