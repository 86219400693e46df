//! One-dimensional discrete Legendre–Fenchel transform on a line.
//!
//! Both routines compute `out[j] = max_i fl(x[i] * p[j] - f[i])` over the finite
//! `f[i]`, or `-inf` when every `f[i]` is `+inf`. The fast route walks the lower
//! convex hull of `(x[i], f[i])` once for increasing slopes; near-ties are
//! resolved by rescanning the original samples so its output equals the
//! brute-force maximum of the same rounded products.

/// `x` and `p` must be sorted increasingly.
pub(crate) fn conjugate_line_fast(x: &[f64], f: &[f64], p: &[f64], out: &mut [f64]) {
    debug_assert_eq!(x.len(), f.len());
    debug_assert_eq!(p.len(), out.len());

    let mut hull: Vec<usize> = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        if f[i] == f64::INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // Pop b only when it lies strictly above the chord a-i; collinear points stay.
            let cross = (x[b] - x[a]) * (f[i] - f[a]) - (f[b] - f[a]) * (x[i] - x[a]);
            if cross < 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    if hull.is_empty() {
        out.fill(f64::NEG_INFINITY);
        return;
    }

    let value = |i: usize, pj: f64| x[i] * pj - f[i];
    let h = hull.len();
    let mut k = 0;
    for (j, &pj) in p.iter().enumerate() {
        while k + 1 < h && value(hull[k + 1], pj) > value(hull[k], pj) {
            k += 1;
        }
        let mut best = value(hull[k], pj);
        let tol = 1e-9 * (1.0 + best.abs());
        let mut hi = k;
        while hi + 1 < h {
            let v = value(hull[hi + 1], pj);
            if v < best - tol {
                break;
            }
            hi += 1;
            best = best.max(v);
        }
        let mut lo = k;
        while lo > 0 && value(hull[lo - 1], pj) >= best - tol {
            lo -= 1;
        }
        if lo == hi {
            out[j] = value(hull[k], pj);
            continue;
        }
        // Near-tie plateau: take the exact maximum over every sample it spans.
        let mut m = f64::NEG_INFINITY;
        for (i, fi) in f.iter().enumerate().take(hull[hi] + 1).skip(hull[lo]) {
            if *fi != f64::INFINITY {
                let v = value(i, pj);
                // Strict comparison keeps the lowest index among equal values (and signed zeros).
                if v > m {
                    m = v;
                }
            }
        }
        out[j] = m;
        k = lo;
    }
}

pub(crate) fn conjugate_line_brute(x: &[f64], f: &[f64], p: &[f64], out: &mut [f64]) {
    for (o, &pj) in out.iter_mut().zip(p) {
        let mut m = f64::NEG_INFINITY;
        for (xi, fi) in x.iter().zip(f) {
            if *fi != f64::INFINITY {
                let v = xi * pj - fi;
                if v > m {
                    m = v;
                }
            }
        }
        *o = m;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lin(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + i as f64 * ((b - a) / (n - 1) as f64)).collect()
    }

    fn both(x: &[f64], f: &[f64], p: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut a = vec![0.0; p.len()];
        let mut b = vec![0.0; p.len()];
        conjugate_line_fast(x, f, p, &mut a);
        conjugate_line_brute(x, f, p, &mut b);
        (a, b)
    }

    #[test]
    fn signed_zero_tie_keeps_lowest_index() {
        let x = lin(-2.0, 2.0, 5);
        let f = [f64::INFINITY, 0.0, 0.0, 0.0, f64::INFINITY];
        let (a, b) = both(&x, &f, &[0.0]);
        assert_eq!(a[0].to_bits(), b[0].to_bits());
        assert!(a[0].is_sign_negative());
    }

    #[test]
    fn collinear_and_constant_lines() {
        let x = lin(-1.0, 1.0, 21);
        let p = lin(-3.0, 3.0, 61);
        for f in [
            vec![0.0; 21],
            x.iter().map(|v| 2.0 * v).collect::<Vec<_>>(),
            x.iter().map(|v| v.abs()).collect::<Vec<_>>(),
        ] {
            let (a, b) = both(&x, &f, &p);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn all_infinite_gives_negative_infinity() {
        let x = lin(0.0, 1.0, 5);
        let (a, b) = both(&x, &[f64::INFINITY; 5], &[0.0, 1.0]);
        assert!(a.iter().chain(&b).all(|v| *v == f64::NEG_INFINITY));
    }

    #[test]
    fn single_point() {
        let x = lin(0.0, 1.0, 5);
        let mut f = vec![f64::INFINITY; 5];
        f[2] = 0.25;
        let (a, b) = both(&x, &f, &[-1.0, 0.0, 2.0]);
        assert_eq!(a, vec![-0.75, -0.25, 0.75]);
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn fast_matches_brute_bitwise(
            vals in proptest::collection::vec(prop_oneof![1 => Just(f64::INFINITY), 6 => -50.0f64..50.0], 2..80),
            pmin in -20.0f64..0.0, pspan in 0.1f64..40.0, np in 2usize..90,
        ) {
            let x = lin(-3.0, 5.0, vals.len());
            let p = lin(pmin, pmin + pspan, np);
            let (a, b) = both(&x, &vals, &p);
            prop_assert_eq!(
                a.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                b.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
            );
        }
    }
}
