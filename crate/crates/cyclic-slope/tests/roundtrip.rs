use std::path::{Path, PathBuf};

use cyclic_slope::commands::{bounds_output, resolve_output, BoundsOutput, InvariantsOutput, ResolveOutput, SharpOutput};
use cyclic_slope::io::{parse_json, read_germ, read_model, ModelFile};
use cyclic_slope::suite::{run, SuiteConfig, SuiteReport};
use cyclic_slope_core::bounds::{lower_bound_certificate, upper_bound_certificate, SurfaceClassData};
use cyclic_slope_core::examples::{product_example, ProductExampleParams};
use cyclic_slope_core::invariants::{invariant_report, GlobalModel};
use cyclic_slope_core::rational::q;
use cyclic_slope_core::{FibrationParams, Rational};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn roundtrip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(v: &T) {
    let text = serde_json::to_string(v).unwrap();
    let back: T = parse_json(&text, Path::new("<memory>")).unwrap();
    assert_eq!(&back, v);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
}

#[test]
fn rationals_are_strings() {
    assert_eq!(serde_json::to_string(&q(-273, 31)).unwrap(), "\"-273/31\"");
    let big: Rational = "123456789012345678901234567890/7".parse().unwrap();
    roundtrip(&big);
    assert!(serde_json::from_str::<Rational>("\"1/0\"").is_err());
}

#[test]
fn model_files_roundtrip() {
    for f in ["triple_point_model.json", "empty_model.json", "n4_model.json"] {
        let file = read_model(&data(f)).unwrap();
        roundtrip(&file);
        let model = file.to_model().unwrap();
        roundtrip(&model);
        let normalized = ModelFile::from_model(&model);
        assert_eq!(normalized.to_model().unwrap(), model);
    }
}

#[test]
fn model_from_m_only() {
    let text = r#"{"n":2,"g":2,"M":"2","germs":[{"label":"p","nodes":[
        {"id":1,"parent":null,"mult":3},{"id":2,"parent":1,"mult":2},
        {"id":3,"parent":1,"mult":2},{"id":4,"parent":1,"mult":2}]}]}"#;
    let file: ModelFile = parse_json(text, Path::new("<memory>")).unwrap();
    assert_eq!(file.to_model().unwrap().generic_alpha0, 14);
    let bad = r#"{"n":2,"g":2,"M":"1/3"}"#;
    let file: ModelFile = parse_json(bad, Path::new("<memory>")).unwrap();
    assert!(file.to_model().is_err());
}

#[test]
fn unknown_fields_rejected() {
    let err = parse_json::<ModelFile>(r#"{"n":2,"g":2,"gen":1}"#, Path::new("x.json")).unwrap_err();
    assert!(err.to_string().contains("gen"), "{err}");
}

#[test]
fn reports_roundtrip() {
    let model = read_model(&data("n4_model.json")).unwrap().to_model().unwrap();
    let rep = invariant_report(&model).unwrap();
    roundtrip(&rep);
    let upper = upper_bound_certificate(&model).unwrap();
    roundtrip(&upper);
    let p = model.params;
    roundtrip(&InvariantsOutput {
        g: p.g,
        n: p.n,
        r: p.r,
        m: model.m.clone(),
        generic_alpha0: model.generic_alpha0,
        report: rep,
        upper: Some(upper),
    });

    let out: ResolveOutput = resolve_output(read_germ(&data("triple_point_germ.json")).unwrap()).unwrap();
    roundtrip(&out);
    let out: ResolveOutput = resolve_output(read_germ(&data("fiber_in_branch_germ.json")).unwrap()).unwrap();
    roundtrip(&out);

    for (g, h, n) in [(9, 0, 4), (21, 0, 4), (5, 1, 2), (3, 0, 4)] {
        let b: BoundsOutput = bounds_output(g, h, n).unwrap();
        roundtrip(&b);
    }

    let params = ProductExampleParams { n: 3, h: 2, big_n: 1, big_m: 2 };
    let example = product_example(params).unwrap();
    let certificate = lower_bound_certificate(&SurfaceClassData::product(3, 2, 1, 2), &[3], 0).unwrap();
    roundtrip(&SharpOutput { params, example, certificate });

    let smooth = GlobalModel::smooth(FibrationParams::ruled(15, 4).unwrap(), 2).unwrap();
    roundtrip(&invariant_report(&smooth).unwrap());
}

#[test]
fn suite_report_roundtrip() {
    let report: SuiteReport = run(&SuiteConfig { orders: vec![2], r: Some(6), max_nodes: 2, max_contact: 2 });
    assert!(report.passed, "{report:?}");
    roundtrip(&report);
}
