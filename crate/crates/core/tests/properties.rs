use kummer_core::{
    connection_constants, eval_0f1, eval_0f1_exact, eval_1f1, eval_1f1_exact, indicial_roots, ode_residual,
    pochhammer, ratio, reduce_kummer, solve_frobenius, IdentityId, OdeSpec, Offset, Rational, Scalar,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, q)| ratio(p, q))
}

/// Rational `a` with `2a` not an integer, so no offset is resonant.
fn generic_a() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("2a must not be an integer", |a| {
        !(ratio(2, 1) * a).is_integer()
    })
}

fn positive_b() -> impl Strategy<Value = Rational> {
    (1i64..=120, 1i64..=12).prop_map(|(p, q)| ratio(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pochhammer_recurrence_is_exact(x in small_rational(), n in 0u32..30) {
        let next = pochhammer(&x, n + 1);
        prop_assert_eq!(next, pochhammer(&x, n) * (x.clone() + Rational::from_i64(n as i64)));
    }

    #[test]
    fn indicial_roots_solve_the_indicial_equation(
        beta in small_rational(), gamma in small_rational(), delta in small_rational()
    ) {
        let ode = OdeSpec::new(beta.clone(), gamma, delta);
        let r = indicial_roots(&ode);
        for l in [&r.root_zero, &r.root_other] {
            let v = l.clone() * (l.clone() + beta.clone() - Rational::one());
            prop_assert!(v.is_zero());
        }
        let diff = (r.root_other.clone() - r.root_zero.clone()).is_integer();
        prop_assert_eq!(r.integer_gap.is_some(), diff);
    }

    #[test]
    fn back_substitution_is_exact(a in generic_a(), k in 0usize..3, upper in any::<bool>()) {
        let offset = Offset::ALL[k];
        let ode = reduce_kummer(&a, offset);
        let roots = indicial_roots(&ode);
        let lambda = if upper { roots.upper().clone() } else { roots.lower().clone() };
        let sol = solve_frobenius(&ode, &lambda, 24, &Rational::one()).unwrap();
        prop_assert!(!sol.log_case);
        prop_assert!(ode_residual(&ode, &sol).iter().all(|r| r.is_zero()));
    }

    #[test]
    fn coefficients_are_linear_in_c0(a in generic_a(), k in 0usize..3, scale in small_rational()) {
        prop_assume!(!scale.is_zero());
        let ode = reduce_kummer(&a, Offset::ALL[k]);
        let unit = solve_frobenius(&ode, &Rational::zero(), 20, &Rational::one()).unwrap();
        let scaled = solve_frobenius(&ode, &Rational::zero(), 20, &scale).unwrap();
        for (u, s) in unit.coeffs.iter().zip(&scaled.coeffs) {
            prop_assert_eq!(u.clone() * scale.clone(), s.clone());
        }
    }

    #[test]
    fn even_equation_kills_odd_coefficients(a in generic_a()) {
        let ode = reduce_kummer(&a, Offset::Zero);
        let sol = solve_frobenius(&ode, &Rational::zero(), 30, &Rational::one()).unwrap();
        prop_assert!(sol.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero()));
    }

    #[test]
    fn truncation_is_honest(b in 0.05f64..20.0, x in -10.0f64..30.0, e in 6i32..14) {
        let tol = 10f64.powi(-e);
        let r = eval_0f1(b, x, tol).unwrap();
        prop_assert!(r.terms_used >= 1);
        prop_assert!(r.last_term_magnitude <= tol * r.value.abs());
        let r = eval_1f1(b / 2.0, b, x, tol).unwrap();
        prop_assert!(r.last_term_magnitude <= tol * r.value.abs());
    }

    #[test]
    fn exact_and_float_agree(a in small_rational(), b in positive_b(), xp in -250i64..=250, xq in 1i64..=10) {
        let x = ratio(xp, xq);
        prop_assume!(x.to_f64().abs() <= 25.0);
        let tol = 1e-13;
        let ex = eval_0f1_exact(&b, &x, tol).unwrap().value.to_f64();
        let fl = eval_0f1(b.to_f64(), x.to_f64(), tol).unwrap().value;
        prop_assert!((ex - fl).abs() <= 1e-12 * ex.abs(), "0F1 b={} x={}: {} vs {}", b, x, ex, fl);
        let ex = eval_1f1_exact(&a, &b, &x, tol).unwrap().value.to_f64();
        let fl = eval_1f1(a.to_f64(), b.to_f64(), x.to_f64(), tol).unwrap().value;
        prop_assert!((ex - fl).abs() <= 1e-12 * ex.abs().max(f64::MIN_POSITIVE), "1F1 a={} b={} x={}: {} vs {}", a, b, x, ex, fl);
    }

    #[test]
    fn connection_constants_do_not_depend_on_order(a in generic_a(), k in 0usize..3, n in 4usize..24) {
        let id = IdentityId::ALL[k];
        prop_assume!(id.check(&a).is_ok());
        let c = connection_constants(id, &a, n).unwrap();
        prop_assert_eq!(c.a, Rational::one());
        prop_assert!(c.b.is_zero());
    }
}

#[test]
fn cosh_sinh_family_on_a_grid() {
    let tol = 1e-12;
    for i in -40..=40 {
        let z = i as f64 * 0.15;
        let c = eval_0f1(0.5, z * z / 4.0, tol).unwrap().value;
        assert!((c - z.cosh()).abs() <= tol * z.cosh(), "z={z}");
        let s = eval_0f1(1.5, z * z / 4.0, tol).unwrap().value;
        assert!((z * s - z.sinh()).abs() <= tol * z.cosh(), "z={z}");
    }
}
