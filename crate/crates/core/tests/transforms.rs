use convrep::transforms::{biconjugate, conjugate_fast, conjugate_with, default_dual, inf_convolution, sum};
use convrep::{BuiltinFunction, ConjugateMethod, ExtReal, GridAxis, GridFn};
use proptest::prelude::*;

fn axis(a: f64, b: f64, n: usize) -> GridAxis {
    GridAxis::new(a, b, n).unwrap()
}

fn values(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, n)
}

fn tabulate(ax: &GridAxis, v: &[f64]) -> GridFn {
    GridFn::new(vec![*ax], v.iter().map(|&x| ExtReal::Finite(x)).collect()).unwrap()
}

proptest! {
    #[test]
    fn conjugation_reverses_order(f in values(41), bump in prop::collection::vec(0.0..3.0f64, 41)) {
        let ax = axis(-2.0, 2.0, 41);
        let dual = [axis(-5.0, 5.0, 61)];
        let g: Vec<f64> = f.iter().zip(&bump).map(|(a, b)| a + b).collect();
        let cf = conjugate_fast(&tabulate(&ax, &f), &dual).unwrap().values;
        let cg = conjugate_fast(&tabulate(&ax, &g), &dual).unwrap().values;
        for j in 0..cf.len() {
            prop_assert!(cg.at(j) <= cf.at(j));
        }
    }

    #[test]
    fn fenchel_young_inequality(f in values(41)) {
        let ax = axis(-2.0, 2.0, 41);
        let dual = [axis(-5.0, 5.0, 61)];
        let c = conjugate_fast(&tabulate(&ax, &f), &dual).unwrap().values;
        for (i, x) in ax.nodes().into_iter().enumerate() {
            for (j, p) in dual[0].nodes().into_iter().enumerate() {
                let lhs = f[i] + c.at(j).finite().unwrap();
                prop_assert!(lhs >= x * p - 1e-12 * (1.0 + lhs.abs()));
            }
        }
    }

    #[test]
    fn biconjugate_is_below(f in values(41)) {
        let ax = axis(-2.0, 2.0, 41);
        let ff = biconjugate(&tabulate(&ax, &f), &[axis(-8.0, 8.0, 81)]).unwrap();
        for (i, v) in f.iter().enumerate() {
            prop_assert!(ff.at(i) <= v + 1e-12 * (1.0 + v.abs()));
        }
    }

    #[test]
    fn methods_agree_in_two_dimensions(f in prop::collection::vec(prop_oneof![Just(f64::INFINITY), -5.0..5.0f64], 11 * 9)) {
        let axes = vec![axis(-1.0, 1.0, 11), axis(0.0, 2.0, 9)];
        let mut vals: Vec<ExtReal> = f.iter().map(|&v| ExtReal::new(v).unwrap()).collect();
        vals[17] = ExtReal::ZERO;
        let g = GridFn::new(axes, vals).unwrap();
        let dual = default_dual(g.axes()).unwrap();
        let a = conjugate_with(&g, &dual, ConjugateMethod::Fast).unwrap();
        let b = conjugate_with(&g, &dual, ConjugateMethod::Brute).unwrap();
        for j in 0..a.values.len() {
            prop_assert_eq!(a.values.at(j).to_f64().to_bits(), b.values.at(j).to_f64().to_bits());
        }
        prop_assert_eq!(a.boundary_flags, b.boundary_flags);
    }
}

#[test]
fn nonconvex_biconjugate_is_the_hull() {
    // Double well min((x-1)^2, (x+1)^2): the hull is 0 on [-1, 1].
    let ax = axis(-3.0, 3.0, 121);
    let f = GridFn::from_fn(vec![ax], |c| {
        let x = c[0];
        ExtReal::Finite(((x - 1.0) * (x - 1.0)).min((x + 1.0) * (x + 1.0)))
    })
    .unwrap();
    let ff = biconjugate(&f, &[axis(-10.0, 10.0, 801)]).unwrap();
    for (i, x) in ax.nodes().into_iter().enumerate() {
        let hull = if x.abs() <= 1.0 { 0.0 } else { (x.abs() - 1.0).powi(2) };
        let v = ff.at(i).finite().unwrap();
        assert!((v - hull).abs() <= 2e-3, "x={x}: {v} vs {hull}");
    }
}

#[test]
fn conjugate_of_sum_is_below_inf_convolution() {
    // f = x^2/2, g = indicator[-1, 1]: both sides are the Huber function.
    let ax = axis(-4.0, 4.0, 161);
    let huber = |p: f64| if p.abs() <= 1.0 { 0.5 * p * p } else { p.abs() - 0.5 };
    let f = BuiltinFunction::Quadratic { a: 1.0 };
    let g = BuiltinFunction::Indicator { l: -1.0, u: 1.0 };
    let lhs = conjugate_fast(
        &sum(&f.sample(&[ax]).unwrap(), &g.sample(&[ax]).unwrap()).unwrap(),
        &[ax],
    )
    .unwrap()
    .values;
    let rhs = inf_convolution(&f.sample_conjugate(&[ax]).unwrap(), &g.sample_conjugate(&[ax]).unwrap()).unwrap();
    let cell = ax.spacing();
    for (j, p) in ax.nodes().into_iter().enumerate() {
        let l = lhs.at(j).finite().unwrap();
        assert!(l <= rhs.at(j).finite().unwrap() + 1e-12, "p={p}");
        assert!((l - huber(p)).abs() <= cell * cell, "p={p}");
        if p.abs() <= 2.0 {
            assert!((rhs.at(j).finite().unwrap() - huber(p)).abs() <= 1e-12, "p={p}");
        }
    }
}

#[test]
fn inf_convolution_with_indicator_of_zero_is_identity() {
    let ax = axis(-2.0, 2.0, 41);
    let f = BuiltinFunction::Abs.sample(&[ax]).unwrap();
    let z = BuiltinFunction::Indicator { l: 0.0, u: 0.0 }.sample(&[ax]).unwrap();
    assert_eq!(inf_convolution(&f, &z).unwrap(), f);
}

#[test]
fn mismatched_grids_are_rejected() {
    let f = BuiltinFunction::Abs.sample(&[axis(-1.0, 1.0, 11)]).unwrap();
    let g = BuiltinFunction::Abs.sample(&[axis(-1.0, 1.0, 13)]).unwrap();
    assert!(sum(&f, &g).is_err());
    assert!(inf_convolution(&f, &g).is_err());
}
