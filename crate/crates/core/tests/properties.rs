//! Property tests for the algebraic invariants.

use std::collections::BTreeMap;

use aap_core::exact::{parse_rational, BigRational};
use aap_core::operators::{apply_m, build_m_general, Params};
use aap_core::spectrum::verify_spectrum;
use aap_core::steady::{check_eigen_equation, steady_state, steady_state_specialized};
use aap_core::transform::{fwht_apply, hdelta_apply};
use aap_core::{BitState, DeltaMap, ExactScalar};
use proptest::prelude::*;

fn state(max_len: usize) -> impl Strategy<Value = BitState> {
    (1..=max_len).prop_flat_map(|len| (0..(1u32 << len)).prop_map(move |v| BitState::new(len, v).unwrap()))
}

fn pair(max_len: usize) -> impl Strategy<Value = (BitState, BitState)> {
    (1..=max_len).prop_flat_map(|len| {
        let n = 1u32 << len;
        (0..n, 0..n).prop_map(move |(a, b)| (BitState::new(len, a).unwrap(), BitState::new(len, b).unwrap()))
    })
}

fn positive_rational() -> impl Strategy<Value = BigRational> {
    (1i64..60, 1i64..12).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

fn general_params(max_len: usize) -> impl Strategy<Value = Params<BigRational>> {
    (1..=max_len).prop_flat_map(|len| {
        let n = 1usize << len;
        (
            proptest::collection::vec(proptest::option::weighted(0.6, positive_rational()), n),
            proptest::collection::vec(positive_rational(), len),
        )
            .prop_map(move |(alpha, beta)| {
                let alpha: BTreeMap<_, _> = alpha
                    .into_iter()
                    .enumerate()
                    .filter_map(|(i, a)| a.map(|a| (BitState::new(len, i as u32).unwrap(), a)))
                    .collect();
                Params::new(len, alpha, beta).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_is_a_bijection(b in state(10)) {
        let m = DeltaMap::for_len(b.len());
        prop_assert_eq!(m.apply_inverse(m.apply(b)), b);
        prop_assert_eq!(b.delta(), m.apply(b));
    }

    #[test]
    fn delta_pairing_is_symmetric((b, c) in pair(10)) {
        prop_assert_eq!(b.dot(c.delta()).unwrap(), c.dot(b.delta()).unwrap());
    }

    #[test]
    fn psi_is_an_involution(b in state(10), j in 1usize..=10) {
        prop_assume!(j <= b.len());
        prop_assert_eq!(b.psi(j).unwrap().psi(j).unwrap(), b);
    }

    #[test]
    fn double_transform_scales(len in 1usize..=6, seed in proptest::collection::vec(-20i64..20, 64)) {
        let v: Vec<BigRational> = seed[..1 << len].iter().map(|&x| BigRational::from_integer(x.into())).collect();
        let twice = fwht_apply(&fwht_apply(&v).unwrap()).unwrap();
        let n = BigRational::from_integer((1i64 << len).into());
        prop_assert!(twice.iter().zip(&v).all(|(t, x)| *t == x * &n));
        // the rearranged transform is also an involution up to scale
        let twice = hdelta_apply(&hdelta_apply(&v).unwrap()).unwrap();
        prop_assert!(twice.iter().zip(&v).all(|(t, x)| *t == x * &n));
    }

    #[test]
    fn rational_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let r = BigRational::new(p.into(), q.into());
        prop_assert_eq!(parse_rational(&r.to_string()).unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generator_columns_sum_to_the_total_rate(p in general_params(4)) {
        let m = build_m_general(&p).unwrap();
        let total = p.alpha_sum();
        for c in 0..m.cols() {
            let s = (0..m.rows()).fold(BigRational::zero(), |acc, r| acc + m.get(r, c));
            prop_assert_eq!(&s, &total);
        }
    }

    #[test]
    fn conjugate_is_triangular_with_closed_form_diagonal(p in general_params(4)) {
        let c = verify_spectrum(&p, false).unwrap();
        prop_assert!(c.passed(), "{:?}", c);
    }

    #[test]
    fn steady_state_is_an_eigenvector(p in general_params(5)) {
        let x = steady_state(&p).unwrap();
        prop_assert!(check_eigen_equation(&p, &x).unwrap());
        let sum: BigRational = x.iter().sum();
        prop_assert_eq!(sum, BigRational::one());
        // matrix-free and dense application agree
        let dense = build_m_general(&p).unwrap().mul_vec(&x);
        prop_assert_eq!(dense, apply_m(&p, &x).unwrap());
    }

    #[test]
    fn specialized_steady_state_is_a_distribution(len in 1usize..=6, a in positive_rational(), b in positive_rational()) {
        let x = steady_state_specialized(len, &a, &b).unwrap();
        prop_assert!(x.iter().all(|v| *v >= BigRational::zero()));
        prop_assert_eq!(x.iter().sum::<BigRational>(), BigRational::one());
    }
}
