use convrep::representations::{fenchel_young, fenchel_young_grid, fitzpatrick, h_family_check, mix, sigma};
use convrep::{sample_graph, BuiltinFunction, GridAxis, OperatorGraph, OperatorSpec, TransformOptions};

fn box1(n: usize) -> Vec<GridAxis> {
    vec![GridAxis::new(-2.0, 2.0, n).unwrap()]
}

fn identity_graph(ax: &[GridAxis]) -> OperatorGraph {
    sample_graph(&OperatorSpec::identity(1), ax, ax).unwrap()
}

#[test]
fn fitzpatrick_of_identity() {
    let ax = box1(81);
    let f = fitzpatrick(&identity_graph(&ax), &ax, &ax).unwrap();
    let cell = ax[0].spacing();
    for i in 0..f.len() {
        let (x, xs) = f.point(i);
        let exact = 0.25 * (x[0] + xs[0]).powi(2);
        let v = f.at(i).finite().unwrap();
        // The graph is sampled at nodes, so the max can fall half a cell short.
        assert!(
            v <= exact + 1e-12 && v >= exact - 0.25 * cell * cell - 1e-12,
            "{x:?} {xs:?}"
        );
    }
}

#[test]
fn fitzpatrick_is_below_fenchel_young() {
    let ax = box1(81);
    for f in [BuiltinFunction::Quadratic { a: 1.5 }, BuiltinFunction::Abs] {
        let g = sample_graph(&OperatorSpec::Subdifferential(f), &ax, &ax).unwrap();
        let fz = fitzpatrick(&g, &ax, &ax).unwrap();
        let fy = fenchel_young(&f, &ax, &ax).unwrap();
        for i in 0..fz.len() {
            assert!(fz.at(i) <= fy.at(i) + 1e-12, "{}: node {i}", f.name());
        }
    }
}

#[test]
fn family_membership() {
    let ax = box1(81);
    let opts = TransformOptions::default();
    let f = BuiltinFunction::Quadratic { a: 1.0 };
    let g = sample_graph(&OperatorSpec::Subdifferential(f), &ax, &ax).unwrap();
    let fy = fenchel_young(&f, &ax, &ax).unwrap();
    let fz = fitzpatrick(&g, &ax, &ax).unwrap();
    let s = sigma(&g, &ax, &ax, &opts).unwrap().func;
    for (name, h) in [
        ("fy", fy.clone()),
        ("fitz", fz.clone()),
        ("sigma", s),
        ("mix", mix(&fy, &fz, 0.3).unwrap()),
    ] {
        let r = h_family_check(&h, &g, 1e-2).unwrap();
        assert!(r.pass, "{name}: {r:?}");
    }
}

#[test]
fn representation_of_another_operator_fails_the_graph_test() {
    // f^FY of |x| is not equal to <x, x*> on the identity graph.
    let ax = box1(41);
    let g = identity_graph(&ax);
    let h = fenchel_young(&BuiltinFunction::Abs, &ax, &ax).unwrap();
    let r = h_family_check(&h, &g, 1e-2).unwrap();
    assert!(!r.pass_graph);
}

#[test]
fn grid_fenchel_young_matches_closed_form() {
    let ax = box1(81);
    let dual = box1(81);
    let f = BuiltinFunction::Quadratic { a: 1.0 };
    let a = fenchel_young(&f, &ax, &dual).unwrap();
    let b = fenchel_young_grid(&f.sample(&ax).unwrap(), &dual, &TransformOptions::default()).unwrap();
    for i in 0..a.len() {
        assert!((a.at(i).finite().unwrap() - b.at(i).finite().unwrap()).abs() <= 1e-12);
    }
}

#[test]
fn mix_is_pointwise() {
    let ax = box1(21);
    let f = BuiltinFunction::Quadratic { a: 1.0 };
    let fy = fenchel_young(&f, &ax, &ax).unwrap();
    let fz = fitzpatrick(&identity_graph(&ax), &ax, &ax).unwrap();
    let m = mix(&fy, &fz, 0.25).unwrap();
    for i in 0..m.len() {
        let want = 0.25 * fy.at(i).finite().unwrap() + 0.75 * fz.at(i).finite().unwrap();
        assert!((m.at(i).finite().unwrap() - want).abs() <= 1e-12);
    }
    assert!(mix(&fy, &fz, 1.5).is_err());
}

#[test]
fn dimension_errors() {
    let ax = box1(11);
    let ax2 = vec![ax[0], ax[0]];
    let g = identity_graph(&ax);
    assert!(fitzpatrick(&g, &ax2, &ax2).is_err());
}
