use std::fs;

use convrep::enlargements::{Biggest, Enlargement, EpsSubdifferential};
use convrep::io::{
    load_graph, read_grid_csv, write_convergence_log, write_graph_csv, write_grid_csv, write_members_csv,
    write_surface_csv,
};
use convrep::iteration::IterationRecord;
use convrep::representations::fitzpatrick;
use convrep::{sample_graph, BuiltinFunction, Config, Error, ExtReal, FunctionSpec, GridAxis, GridFn, OperatorSpec};
use proptest::prelude::*;

fn value() -> impl Strategy<Value = ExtReal> {
    prop_oneof![
        1 => Just(ExtReal::PosInf),
        1 => Just(ExtReal::Finite(-0.0)),
        6 => any::<f64>().prop_filter("finite", |v| v.is_finite()).prop_map(ExtReal::Finite),
    ]
}

proptest! {
    #[test]
    fn grid_csv_round_trip_is_exact(
        lo in -1e3..0.0f64, width in 1e-3..1e3f64, n in 2usize..7, m in 2usize..5,
        seed in prop::collection::vec(value(), 36),
    ) {
        let axes = vec![GridAxis::new(lo, lo + width, n).unwrap(), GridAxis::new(-1.0, 3.0, m).unwrap()];
        let values: Vec<ExtReal> = (0..n * m).map(|i| seed[i % seed.len()]).collect();
        let f = GridFn::new(axes, values).unwrap();
        let mut buf = Vec::new();
        write_grid_csv(&mut buf, &f).unwrap();
        let g = read_grid_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(f.axes(), g.axes());
        for i in 0..f.len() {
            prop_assert_eq!(f.at(i).to_f64().to_bits(), g.at(i).to_f64().to_bits());
        }
    }
}

#[test]
fn grid_csv_layout() {
    let f = GridFn::new(
        vec![GridAxis::new(0.0, 1.0, 3).unwrap()],
        vec![ExtReal::Finite(1.5), ExtReal::PosInf, ExtReal::ZERO],
    )
    .unwrap();
    let mut buf = Vec::new();
    write_grid_csv(&mut buf, &f).unwrap();
    assert_eq!(
        String::from_utf8(buf).unwrap(),
        "# axis 0: 0,1,3\n0,1.5\n0.5,inf\n1,0\n"
    );
}

#[test]
fn malformed_grid_csv() {
    let cases = [
        "0,1\n",
        "# axis 0: 0,1,3\n0,1\n0.5,x\n1,0\n",
        "# axis 0: 0,1,3\n0,1\n0.25,1\n1,0\n",
        "# axis 0: 0,1,1\n",
        "# axis 1: 0,1,3\n",
    ];
    for c in cases {
        assert!(read_grid_csv(c.as_bytes()).is_err(), "{c:?}");
    }
    assert!(matches!(
        read_grid_csv("# axis 0: 0,1,3\n0,1\n".as_bytes()),
        Err(Error::ShapeMismatch { .. })
    ));
}

#[test]
fn graph_csv_round_trip() {
    let ax = [GridAxis::new(-1.0, 1.0, 9).unwrap()];
    let g = sample_graph(&OperatorSpec::Subdifferential(BuiltinFunction::Abs), &ax, &ax).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("g.csv");
    let mut buf = Vec::new();
    write_graph_csv(&mut buf, &g).unwrap();
    fs::write(&p, buf).unwrap();
    assert_eq!(load_graph(&p).unwrap(), g);
    fs::write(&p, "0,1\n1,0\n").unwrap();
    assert!(matches!(load_graph(&p), Err(Error::NotMonotone { .. })));
    assert!(matches!(
        load_graph(&dir.path().join("none.csv")),
        Err(Error::MissingFile(_))
    ));
}

#[test]
fn convergence_log_lines() {
    let recs = [
        IterationRecord {
            n: 1,
            sup_gap: 0.5,
            dom_size: 10,
        },
        IterationRecord {
            n: 2,
            sup_gap: 0.25,
            dom_size: 10,
        },
    ];
    let mut buf = Vec::new();
    write_convergence_log(&mut buf, &recs).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines,
        [
            r#"{"n":1,"sup_gap":0.5,"dom_size":10}"#,
            r#"{"n":2,"sup_gap":0.25,"dom_size":10}"#
        ]
    );
}

#[test]
fn surface_of_identity_fitzpatrick() {
    let ax = [GridAxis::new(-2.0, 2.0, 41).unwrap()];
    let g = sample_graph(&OperatorSpec::identity(1), &ax, &ax).unwrap();
    let f = fitzpatrick(&g, &ax, &ax).unwrap();
    let mut buf = Vec::new();
    write_surface_csv(&mut buf, &f).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# inf rows omitted: 0"));
    assert_eq!(lines.next(), Some("x,xstar,value"));
    let mut rows = 0;
    for l in lines {
        let v: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((v[2] - 0.25 * (v[0] + v[1]).powi(2)).abs() <= 1e-2);
        rows += 1;
    }
    assert_eq!(rows, 41 * 41);
}

#[test]
fn member_scatter_rows() {
    let ax = vec![GridAxis::new(-2.0, 2.0, 41).unwrap()];
    let q = EpsSubdifferential::new(BuiltinFunction::Quadratic { a: 1.0 }, ax.clone(), 1e-6).unwrap();
    let set = q.members(0.0, &[0.5]).unwrap();
    let mut buf = Vec::new();
    write_members_csv(&mut buf, &set).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text, "# kind epsdiff, epsilon 0, x 0.5\nxstar,slack\n0.5,0\n");

    // The sampled graph's biggest enlargement at eps = 0 also admits the two neighbours.
    let g = sample_graph(&OperatorSpec::identity(1), &ax, &ax).unwrap();
    let be = Biggest::new(g, ax.clone(), 1e-6).unwrap();
    assert_eq!(be.members(0.0, &[0.5]).unwrap().len(), 3);

    // The conjugate of a linear function lives at one point, here off the dual box.
    let ed = EpsSubdifferential::new(BuiltinFunction::Linear { a: 3.0 }, ax, 1e-6).unwrap();
    let empty = ed.members(0.5, &[0.0]).unwrap();
    let mut buf = Vec::new();
    write_members_csv(&mut buf, &empty).unwrap();
    assert_eq!(
        String::from_utf8(buf).unwrap(),
        "# kind epsdiff, epsilon 0.5, x 0\nxstar,slack\n"
    );
}

#[test]
fn minimal_config_defaults() {
    let c = Config::from_json_str(
        r#"{"space":{"dim":1,"grid":{"min":-4,"max":4,"points":201}},"function":{"kind":"quadratic","a":1}}"#,
        ".".as_ref(),
    )
    .unwrap();
    assert_eq!(c.dual, vec![GridAxis::new(-8.0, 8.0, 201).unwrap()]);
    assert_eq!(c.bidual, c.primal);
    assert_eq!(
        c.function,
        Some(FunctionSpec::Builtin(BuiltinFunction::Quadratic { a: 1.0 }))
    );
    assert_eq!(
        c.operator,
        OperatorSpec::Subdifferential(BuiltinFunction::Quadratic { a: 1.0 })
    );
    assert_eq!(c.tolerances, convrep::Tolerances::default());
    assert_eq!(c.iteration.epsilon, 1e-3);
}

#[test]
fn config_errors() {
    let bad = [
        r#"{"space":{"dim":1,"grid":{"min":-4,"max":4,"points":1}},"function":{"kind":"abs"}}"#,
        r#"{"space":{"dim":3,"grid":{"min":-4,"max":4,"points":5}},"function":{"kind":"abs"}}"#,
        r#"{"space":{"dim":1,"grid":{"min":-4,"max":4,"points":5}},"function":{"kind":"abs"},"extra":1}"#,
        r#"{"space":{"dim":1,"grid":{"min":-4,"max":4,"points":5,"step":1}},"function":{"kind":"abs"}}"#,
        r#"{"space":{"dim":1,"grid":{"min":-4,"max":4,"points":5}}}"#,
        r#"{"space":{"dim":2,"grid":[{"min":-4,"max":4,"points":5}]},"function":{"kind":"abs"}}"#,
        r#"{"space":{"dim":1,"grid":{"min":-4,"max":4,"points":5}},"operator":{"kind":"linear","matrix":[[-1]]}}"#,
        r#"{"space":{"dim":1,"grid":{"min":-4,"max":4,"points":5}},"function":{"kind":"abs"},"iteration":{"epsilon":0}}"#,
        r#"{"space":{"dim":1,"grid":{"min":-4,"max":4,"points":5}"#,
    ];
    for b in bad {
        assert!(Config::from_json_str(b, ".".as_ref()).is_err(), "{b}");
    }
    let missing = Config::from_json_str(
        r#"{"space":{"dim":1,"grid":{"min":-4,"max":4,"points":5}},"operator":{"kind":"graph","path":"no/such.csv"}}"#,
        ".".as_ref(),
    );
    assert!(matches!(missing, Err(Error::MissingFile(_))));
    assert!(matches!(
        Config::from_path("no/such/config.json".as_ref()),
        Err(Error::MissingFile(_))
    ));
}

#[test]
fn config_with_files() {
    let dir = tempfile::tempdir().unwrap();
    let ax = [GridAxis::new(-1.0, 1.0, 5).unwrap()];
    let f = BuiltinFunction::Abs.sample(&ax).unwrap();
    let mut buf = Vec::new();
    write_grid_csv(&mut buf, &f).unwrap();
    fs::write(dir.path().join("f.csv"), buf).unwrap();
    fs::write(dir.path().join("g.csv"), "-1,-1\n0,0\n1,1\n").unwrap();
    let p = dir.path().join("c.json");
    fs::write(
        &p,
        r#"{"space":{"dim":1,"grid":{"min":-1,"max":1,"points":5}},
            "function":{"kind":"tabulated","path":"f.csv"},
            "operator":{"kind":"graph","path":"g.csv"},
            "tolerances":{"tol_member":1e-8}}"#,
    )
    .unwrap();
    let c = Config::from_path(&p).unwrap();
    assert_eq!(c.sampled_function().unwrap(), f);
    assert_eq!(c.graph().unwrap().len(), 3);
    assert_eq!(c.tolerances.tol_member, 1e-8);
    assert_eq!(c.tolerances.tol_disc, 1e-2);

    fs::write(&p, r#"{"space":{"dim":1,"grid":{"min":-2,"max":2,"points":5}},"function":{"kind":"tabulated","path":"f.csv"},"operator":{"kind":"identity"}}"#).unwrap();
    assert!(matches!(Config::from_path(&p), Err(Error::Config(_))));
}
