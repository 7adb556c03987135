use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use dbar_core::adjoint::{coercivity_check, commutator_direct, commutator_formula, formal_adjoint_k};
use dbar_core::hermite::{eval_field, OperatorParams};
use dbar_core::quadrature::{analyze, QuadratureRule};
use dbar_core::random::{random_field, random_real_weight, trial_rng};
use dbar_core::solver::{apply_operator, norm_bound, solve_min_norm};
use dbar_core::{gaussian_pairing, BiPoly, GaussianRational};

fn poly(max_exp: u32, max_terms: usize) -> impl Strategy<Value = BiPoly> {
    prop::collection::vec((0..=max_exp, 0..=max_exp, -4i64..=4, -4i64..=4, 1i64..=3), 0..=max_terms).prop_map(|terms| {
        let mut p = BiPoly::zero();
        for (a, b, re, im, den) in terms {
            let c = GaussianRational::new(BigRational::new(re.into(), den.into()), BigRational::from_integer(im.into()));
            p.add_term(a, b, &c);
        }
        p
    })
}

fn gaussian_int() -> impl Strategy<Value = GaussianRational> {
    (-5i64..=5, -5i64..=5).prop_map(|(re, im)| GaussianRational::from_ints(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wirtinger_derivatives_commute(p in poly(5, 8)) {
        prop_assert_eq!(p.d().dbar(), p.dbar().d());
    }

    #[test]
    fn conjugation_swaps_derivatives(p in poly(5, 8)) {
        prop_assert_eq!(p.d().conj(), p.conj().dbar());
        prop_assert_eq!(p.conj().conj(), p);
    }

    #[test]
    fn leibniz_rule(p in poly(4, 6), q in poly(4, 6)) {
        prop_assert_eq!((&p * &q).dbar(), &(&p.dbar() * &q) + &(&p * &q.dbar()));
        prop_assert_eq!((&p * &q).d(), &(&p.d() * &q) + &(&p * &q.d()));
    }

    #[test]
    fn pairing_is_hermitian_and_positive(p in poly(4, 6), q in poly(4, 6)) {
        prop_assert_eq!(gaussian_pairing(&p, &q), gaussian_pairing(&q, &p).conj());
        let n = gaussian_pairing(&p, &p);
        prop_assert!(n.is_real());
        prop_assert!(n.re >= BigRational::from_integer(0.into()));
        prop_assert_eq!(n.re == BigRational::from_integer(0.into()), p.is_zero());
    }

    #[test]
    fn literal_round_trip(p in poly(6, 8)) {
        let text = p.to_string();
        let back: BiPoly = text.parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn evaluation_is_a_ring_map(p in poly(4, 6), q in poly(4, 6), x in -1.5f64..1.5, y in -1.5f64..1.5) {
        let z = Complex64::new(x, y);
        let lhs = (&p * &q).eval(z);
        let rhs = p.eval(z) * q.eval(z);
        prop_assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
        prop_assert!((p.conj().eval(z) - p.eval(z).conj()).norm() <= 1e-12 * (1.0 + p.eval(z).norm()));
    }

    #[test]
    fn formal_adjoint_is_an_adjoint(f in poly(3, 5), g in poly(3, 5), k in 1u32..=3) {
        let fock = BiPoly::abs_sqr();
        let lhs = gaussian_pairing(&f.dbar_pow(k), &g);
        let rhs = gaussian_pairing(&f, &formal_adjoint_k(&g, &fock, k).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn coercivity_holds_exactly(psi in poly(4, 6), k in 1u32..=3, a in gaussian_int()) {
        let r = coercivity_check(&psi, k, &a).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// Commutator expansion with random real polynomial weights of degree ≤ 4.
    #[test]
    fn commutator_expansion_random_weights(seed in any::<u64>(), psi in poly(3, 5), k in 1u32..=3) {
        let phi = random_real_weight(&mut trial_rng(seed, 0), 4);
        let direct = commutator_direct(&psi, &phi, k).unwrap();
        let formula = commutator_formula(&psi, &phi, k).unwrap();
        prop_assert_eq!(direct, formula);
    }

    #[test]
    fn solver_is_a_bounded_right_inverse(seed in any::<u64>(), k in 1u32..=4, re in -20.0f64..20.0, im in -20.0f64..20.0, n_eq in 0usize..40) {
        let f = random_field(&mut trial_rng(seed, 1), 3, n_eq);
        let params = OperatorParams::new(k, Complex64::new(re, im)).unwrap();
        let (u, rep) = solve_min_norm(&f, &params, n_eq).unwrap();
        let hu = apply_operator(&u, &params);
        let mut err: f64 = 0.0;
        for m in 0..=3 {
            for n in 0..=n_eq {
                err = err.max((hu.get(m, n) - f.get(m, n)).norm());
            }
        }
        prop_assert!(err <= 1e-9 * rep.norm_f.max(1.0));
        prop_assert!(rep.ratio <= norm_bound(k) + 1e-10);
    }

    #[test]
    fn analysis_inverts_synthesis(seed in any::<u64>(), m_max in 0usize..6, n_max in 0usize..10) {
        let f = random_field(&mut trial_rng(seed, 2), m_max, n_max);
        let rule = QuadratureRule::default_for(m_max, n_max, 0).unwrap();
        let back = analyze(|z| eval_field(&f, z), &rule, m_max, n_max).unwrap();
        prop_assert!(back.sub(&f).max_abs() <= 1e-10);
    }
}
