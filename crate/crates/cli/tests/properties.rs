use mewheel_cli::run;
use mewheel_core::dynamics::{delta_v_aggregation, delta_v_rotation};
use mewheel_core::material::Particle;
use mewheel_core::vacuum::vacuum_momentum_closed_form;
use mewheel_core::{CutoffConvention, VacuumModel};
use proptest::prelude::*;

fn call(args: &[String]) -> (i32, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("mewheel".to_string()).chain(args.iter().cloned());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn value(args: &[String]) -> f64 {
    let mut all = args.to_vec();
    all.extend(["--format".into(), "json".into()]);
    let (code, out) = call(&all);
    assert_eq!(code, 0);
    serde_json::from_str::<serde_json::Value>(&out).unwrap()["value"]
        .as_f64()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cli_adds_no_arithmetic(chi in -1e-2..1e-2f64, a in 1e-10..1e-7f64, rho in 100.0..2e4f64, n in 1u64..100_000, pre in 1e-4..1.0f64) {
        let model = VacuumModel::new(pre, CutoffConvention::default()).unwrap();
        let s = |x: f64| x.to_string();
        let base = vec!["--chi".to_string(), s(chi), "--a".into(), s(a), "--A".into(), s(pre)];

        let mut rot = vec!["delta-v-rot".to_string()];
        rot.extend(base.clone());
        rot.extend(["--rho".into(), s(rho)]);
        let lib = delta_v_rotation(&Particle::simple(chi, a, rho).unwrap(), &model).unwrap().value;
        prop_assert_eq!(value(&rot), lib);

        let mut agg = rot.clone();
        agg[0] = "delta-v-agg".into();
        agg.extend(["--N".into(), n.to_string()]);
        prop_assert_eq!(value(&agg), delta_v_aggregation(a, rho, chi, n, &model).unwrap().value);

        let mut vac = vec!["vacuum-momentum".to_string()];
        vac.extend(base);
        prop_assert_eq!(value(&vac), vacuum_momentum_closed_form(chi, a, &model).unwrap().value);
    }

    #[test]
    fn identical_argv_identical_output(chi in 1e-5..1e-2f64, a in 5e-10..5e-9f64, fmt in prop::sample::select(vec!["text", "json", "csv"])) {
        let args: Vec<String> = ["sweep", "--chi", &format!("{chi},{}", chi * 2.0), "--a", &format!("{a},{}", a * 3.0), "--format", fmt]
            .iter().map(|s| s.to_string()).collect();
        let first = call(&args);
        prop_assert_eq!(first.0, 0);
        prop_assert_eq!(&first, &call(&args));
    }
}
