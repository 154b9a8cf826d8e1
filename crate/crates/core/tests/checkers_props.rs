mod common;

use common::*;
use nnpres::checkers::{
    check_f2, check_newnc, check_sym_parity, falsify, newnc_values, pair_conditions, DEFAULT_BUDGET, DEFAULT_TOL,
};
use nnpres::matfun::apply_taylor;
use nnpres::structmat::embed_pad_zero;
use nnpres::{FunctionSpec, MatrixClass, SamplerConfig, Verdict};
use proptest::prelude::*;

fn class() -> impl Strategy<Value = MatrixClass> {
    prop_oneof![
        Just(MatrixClass::General),
        Just(MatrixClass::Triangular),
        Just(MatrixClass::Circulant),
        Just(MatrixClass::Symmetric),
    ]
}

fn poly() -> impl Strategy<Value = FunctionSpec> {
    prop::collection::vec(-1.0..1.0f64, 1..=7).prop_map(FunctionSpec::polynomial)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn witnesses_are_sound_and_survive_padding(f in poly(), class in class(), n in 1usize..=3, seed in any::<u64>()) {
        let report = falsify(&f, class, n, 2000, seed).unwrap();
        prop_assert_eq!(report.verdict == Verdict::Fail, report.witness.is_some());
        if let Some(w) = report.witness {
            let a = w.matrix.unwrap();
            let [i, j] = w.entry.unwrap();
            prop_assert!(a.is_nonnegative());
            let fa = apply_taylor(&f, &a).unwrap();
            prop_assert!(fa.get(i, j) < -DEFAULT_TOL * (1.0 + fa.max_norm()));
            prop_assert_eq!(fa.get(i, j), w.value);
            // the same entry stays negative one order up
            let fb = apply_taylor(&f, &embed_pad_zero(&a)).unwrap();
            prop_assert!(fb.get(i, j) < -DEFAULT_TOL * (1.0 + fb.max_norm()));
        }
    }

    #[test]
    fn alternating_nodes_reduce_to_pair_conditions(y in 0.01..3.0f64, t in 0.0..1.0f64) {
        let x = t * y;
        prop_assume!(x > 0.0 && x < y);
        for f in [FunctionSpec::exp(), quartic(), sextic()] {
            let v = newnc_values(&f, &[y + x, x - y]).unwrap();
            let p = pair_conditions(&f, x, y);
            let scale = 1.0 + f.eval_real(x + y).abs().max(f.eval_real(x - y).abs()) * (1.0 + x + y);
            prop_assert!((2.0 * y * v.full - p.sum_difference).abs() <= 1e-10 * scale);
            for d in &v.dropped {
                prop_assert!((2.0 * y * d - p.weighted).abs() <= 1e-10 * scale);
            }
        }
    }
}

#[test]
fn pair_check_agrees_with_symmetric_search() {
    let mut rng = rng(2024);
    let cfg = SamplerConfig::default();
    let mut disagreements = Vec::new();
    for t in 0..50 {
        let f = random_poly(&mut rng, 6, -1.0, 1.0);
        let pair = check_f2(&f, &cfg).unwrap();
        assert!(pair.notes.is_empty(), "{f}: {:?}", pair.notes);
        let search = falsify(&f, MatrixClass::Symmetric, 2, DEFAULT_BUDGET, t).unwrap();
        if pair.passed() != search.passed() {
            disagreements.push(format!("{f}: pair {:?}, search {:?}", pair.verdict, search.verdict));
        }
    }
    assert!(disagreements.is_empty(), "{disagreements:#?}");
}

#[test]
fn odd_families_fail_and_are_falsified() {
    let cfg = SamplerConfig::default();
    for beta in [0.26, 0.3, 0.4] {
        let f = odd_family(beta);
        assert!(!check_sym_parity(&f, 2, &cfg).unwrap().passed(), "beta = {beta}");
        let found = falsify(&f, MatrixClass::Symmetric, 2, DEFAULT_BUDGET, 0).unwrap();
        let w = found.witness.unwrap_or_else(|| panic!("no witness for beta = {beta}"));
        assert!(w.value < 0.0);
    }
}

#[test]
fn sextic_passes_pair_conditions_and_newnc() {
    let cfg = SamplerConfig::default();
    let f = sextic();
    assert_eq!(check_f2(&f, &cfg).unwrap().verdict, Verdict::PassSampled);
    assert!(check_newnc(&f, 2, &cfg).unwrap().passed());
    assert!(!check_newnc(&odd_family(SEXTIC_BETA), 2, &cfg).unwrap().passed());
}

#[test]
fn sextic_parameters_meet_the_search_criteria() {
    let f = sextic();
    let p = f.as_polynomial().unwrap();
    let dp = p.derivative();
    let pts = 100_000;
    for i in 0..pts {
        let x = -50.0 + 100.0 * i as f64 / (pts - 1) as f64;
        assert!(p.eval_real(x) >= 0.0, "f({x}) < 0");
        if x >= 0.0 {
            assert!(dp.eval_real(x) >= 0.0, "f'({x}) < 0");
        }
    }
    assert!(p.leading() > 0.0 && p.degree() % 2 == 0);
}

#[test]
fn reports_are_reproducible() {
    let f = FunctionSpec::polynomial([0.2, -1.0, 0.0, 1.0]);
    for class in [MatrixClass::General, MatrixClass::Symmetric, MatrixClass::Circulant, MatrixClass::Triangular] {
        let a = falsify(&f, class, 3, 3000, 9).unwrap();
        let b = falsify(&f, class, 3, 3000, 9).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
