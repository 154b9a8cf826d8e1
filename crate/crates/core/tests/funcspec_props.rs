use nnpres::{FunctionSpec, Named};
use num_complex::Complex64;
use proptest::prelude::*;

fn named() -> impl Strategy<Value = Named> {
    prop_oneof![Just(Named::Exp), Just(Named::Sinh), Just(Named::Cosh), Just(Named::Sin), Just(Named::Cos)]
}

fn poly() -> impl Strategy<Value = FunctionSpec> {
    prop::collection::vec(-2.0..2.0f64, 1..8).prop_map(FunctionSpec::polynomial)
}

fn function() -> impl Strategy<Value = FunctionSpec> {
    prop_oneof![
        poly(),
        named().prop_map(FunctionSpec::from),
        (-2.0..2.0f64, poly(), -2.0..2.0f64, named())
            .prop_map(|(w1, p, w2, n)| FunctionSpec::sum([(w1, p), (w2, n.into())]).unwrap()),
    ]
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn zeroth_derivative_is_the_value(f in function(), x in -5.0..5.0f64) {
        prop_assert_eq!(f.derivatives(x, 0)[0], f.eval_real(x));
        prop_assert_eq!(f.eval(Complex64::new(x, 0.0)).im, 0.0);
    }

    #[test]
    fn derivative_matches_central_difference(f in function(), x in 0.0..5.0f64) {
        let h = 1e-5;
        let d = f.derivatives(x, 1)[1];
        let fd = (f.eval_real(x + h) - f.eval_real(x - h)) / (2.0 * h);
        prop_assert!((d - fd).abs() <= 1e-6 * (1.0 + d.abs()), "{} vs {}", d, fd);
    }

    #[test]
    fn parity_parts(f in function(), x in -5.0..5.0f64) {
        let p = f.parity_decompose();
        let (e, o) = (p.f_even.eval_real(x), p.f_odd.eval_real(x));
        prop_assert!(rel_close(e, p.f_even.eval_real(-x), 1e-12));
        prop_assert!(rel_close(o, -p.f_odd.eval_real(-x), 1e-12));
        prop_assert!(rel_close(e + o, f.eval_real(x), 1e-12));
    }

    #[test]
    fn polynomial_parity_factors(f in poly(), x in -3.0..3.0f64) {
        let p = f.parity_decompose();
        let (g, h) = (p.g.unwrap(), p.h.unwrap());
        prop_assert!(p.exact);
        prop_assert!(rel_close(g.eval_real(x * x), p.f_even.eval_real(x), 1e-12));
        prop_assert!(rel_close(x * h.eval_real(x * x), p.f_odd.eval_real(x), 1e-12));
    }

    #[test]
    fn taylor_coefficients_are_scaled_derivatives(f in function()) {
        let a = f.taylor_coefficients(6);
        let d = f.derivatives(0.0, 6);
        let mut fact = 1.0;
        for j in 0..=6 {
            if j > 0 {
                fact *= j as f64;
            }
            prop_assert!(rel_close(a[j], d[j] / fact, 1e-12));
        }
    }

    #[test]
    fn json_round_trip(f in function()) {
        let back: FunctionSpec = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }
}
