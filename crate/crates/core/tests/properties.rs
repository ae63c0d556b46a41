//! Randomized invariants checked with exact rational arithmetic, plus a
//! negative control for the grid intertwiner.

use num_traits::Zero;
use proptest::prelude::*;

use hsp_core::aut_group::{aut_act_wh, aut_inverse, aut_product, aut_to_matrix, AutElement};
use hsp_core::hilbert_rep::{
    phase_residual, rho_sigma, rho_sigma_inverse, xi_apply, GridSpec, GridWavefunction, RepConfig,
};
use hsp_core::mackey::{induce_rep, induce_rep_closed, Polarization};
use hsp_core::scalar::{Rational, Scalar};
use hsp_core::symplectic::{sp_check, sp_compose_factors, sp_factorize, sp_random, sp_random_rational};
use hsp_core::wh_group::{wh_inverse, wh_product, wh_to_matrix, WHElement};

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(p, q)| Rational::from_ratio(p, q))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

fn wh(n: usize) -> impl Strategy<Value = WHElement<Rational>> {
    (prop::collection::vec(rational(), n), prop::collection::vec(rational(), n), rational())
        .prop_map(|(p, q, iota)| WHElement::new(p, q, iota).unwrap())
}

fn aut(n: usize) -> impl Strategy<Value = AutElement<Rational>> {
    (nonzero_rational(), any::<u64>(), prop::collection::vec(rational(), 2 * n), rational()).prop_map(
        move |(delta, seed, z, iota)| AutElement::new(delta, sp_random_rational(n, seed, 4), z, iota).unwrap(),
    )
}

fn dims() -> impl Strategy<Value = usize> {
    1usize..=3
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wh_group_axioms((a, b, c) in dims().prop_flat_map(|n| (wh(n), wh(n), wh(n)))) {
        let ab_c = wh_product(&wh_product(&a, &b).unwrap(), &c).unwrap();
        let a_bc = wh_product(&a, &wh_product(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert!(wh_product(&a, &wh_inverse(&a)).unwrap().is_identity());
        let e = WHElement::identity(a.n());
        prop_assert_eq!(wh_product(&e, &a).unwrap(), a.clone());
    }

    #[test]
    fn wh_matrix_is_a_homomorphism((a, b) in dims().prop_flat_map(|n| (wh(n), wh(n)))) {
        let lhs = wh_to_matrix(&wh_product(&a, &b).unwrap());
        prop_assert_eq!(lhs, wh_to_matrix(&a).mul(&wh_to_matrix(&b)));
    }

    #[test]
    fn aut_matrix_is_a_homomorphism((a, b) in dims().prop_flat_map(|n| (aut(n), aut(n)))) {
        let lhs = aut_to_matrix(&aut_product(&a, &b).unwrap());
        prop_assert_eq!(lhs, aut_to_matrix(&a).mul(&aut_to_matrix(&b)));
        let id = aut_product(&a, &aut_inverse(&a)).unwrap();
        prop_assert_eq!(id, AutElement::identity(a.n()));
    }

    #[test]
    fn aut_acts_by_automorphisms((g, h1, h2) in dims().prop_flat_map(|n| (aut(n), wh(n), wh(n)))) {
        let lhs = aut_act_wh(&g, &wh_product(&h1, &h2).unwrap()).unwrap();
        let rhs = wh_product(&aut_act_wh(&g, &h1).unwrap(), &aut_act_wh(&g, &h2).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn aut_action_composes((g1, g2, h) in dims().prop_flat_map(|n| (aut(n), aut(n), wh(n)))) {
        let lhs = aut_act_wh(&aut_product(&g1, &g2).unwrap(), &h).unwrap();
        let rhs = aut_act_wh(&g1, &aut_act_wh(&g2, &h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn translations_are_normal((g, h) in dims().prop_flat_map(|n| (aut(n), wh(n)))) {
        let conj = aut_product(&aut_product(&g, &AutElement::from_wh(&h)).unwrap(), &aut_inverse(&g)).unwrap();
        prop_assert_eq!(conj, AutElement::from_wh(&aut_act_wh(&g, &h).unwrap()));
    }

    #[test]
    fn descriptors_compose_like_the_group(
        (a, b) in dims().prop_flat_map(|n| (wh(n), wh(n))),
        lambda in nonzero_rational(),
    ) {
        let lhs = induce_rep_closed(&wh_product(&a, &b).unwrap(), &lambda).unwrap();
        let rhs = induce_rep_closed(&a, &lambda).unwrap().compose(&induce_rep_closed(&b, &lambda).unwrap()).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(induce_rep(&a, &lambda, Polarization::Position).unwrap(), induce_rep_closed(&a, &lambda).unwrap());
    }

    #[test]
    fn symplectic_factorization_reconstructs(n in dims(), seed in any::<u64>(), steps in 1usize..8) {
        let s = sp_random_rational(n, seed, steps);
        prop_assert!(sp_check(s.matrix(), 0.0).unwrap().is_symplectic);
        let f = sp_factorize(&s).unwrap();
        prop_assert_eq!(sp_compose_factors(&f.factors).unwrap(), s);
    }
}

#[test]
fn mismatched_symplectic_fails_to_intertwine() {
    let cfg = RepConfig::default();
    let spec = GridSpec::self_dual(1, 256, cfg.lambda).unwrap();
    let psi = GridWavefunction::gaussian_packet(spec, 1.0, &[0.3], &[0.2]);
    let g = WHElement::from_z(&[0.7, -0.4], 0.25).unwrap();
    let s = sp_random(1, 11, 3);
    let wrong = sp_random(1, 12, 3);
    let conj = |t| {
        let a = rho_sigma_inverse(t, &psi, &cfg).unwrap();
        let a = xi_apply(&g, &a, &cfg).unwrap();
        rho_sigma(t, &a, &cfg).unwrap()
    };
    let moved = WHElement::from_z(&s.apply(&g.z()), 0.25).unwrap();
    let expected = xi_apply(&moved, &psi, &cfg).unwrap();
    let good = phase_residual(&conj(&s), &expected).unwrap();
    let bad = phase_residual(&conj(&wrong), &expected).unwrap();
    assert!(good < 1e-8, "matching Σ: {good:e}");
    assert!(bad > 1e-3, "mismatched Σ: {bad:e}");
}
