//! Adaptive 7/15-point Gauss–Kronrod quadrature for vector-valued integrands.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Gauss weights for the odd Kronrod nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_INTERVALS: usize = 4000;

#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: Vec<f64>,
    /// Sum over subintervals of the largest component error estimate.
    pub error: f64,
    pub evaluations: usize,
}

fn gk15(f: &mut impl FnMut(f64) -> Vec<f64>, a: f64, b: f64, n: usize) -> (Vec<f64>, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = vec![0.0; n];
    let mut g = vec![0.0; n];
    let mut add = |x: f64, wk: f64, wg: f64, k: &mut [f64], g: &mut [f64]| {
        let v = f(x);
        for i in 0..n {
            k[i] += wk * v[i];
            g[i] += wg * v[i];
        }
    };
    add(c, WGK[7], WG[3], &mut k, &mut g);
    for j in 0..7 {
        let wg = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
        add(c - h * XGK[j], WGK[j], wg, &mut k, &mut g);
        add(c + h * XGK[j], WGK[j], wg, &mut k, &mut g);
    }
    let mut err: f64 = 0.0;
    for i in 0..n {
        k[i] *= h;
        err = err.max((k[i] - g[i] * h).abs());
    }
    (k, err)
}

/// Integrate `f` over `[a, b]` to absolute accuracy `tol` (max-norm over
/// components), bisecting the interval with the largest error estimate.
pub fn integrate(mut f: impl FnMut(f64) -> Vec<f64>, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    let n = f(0.5 * (a + b)).len();
    let mut evaluations = 1;
    let (v, e) = gk15(&mut f, a, b, n);
    evaluations += 15;
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let total: f64 = pieces.iter().map(|p| p.3).sum();
        if total <= tol {
            break;
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureNotConverged { a, b, error: total });
        }
        let (i, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (pa, pb, _, _) = pieces.swap_remove(i);
        let m = 0.5 * (pa + pb);
        let (v1, e1) = gk15(&mut f, pa, m, n);
        let (v2, e2) = gk15(&mut f, m, pb, n);
        evaluations += 30;
        pieces.push((pa, m, v1, e1));
        pieces.push((m, pb, v2, e2));
    }
    // sum in interval order so the result does not depend on refinement history
    pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut value = vec![0.0; n];
    let mut error = 0.0;
    for (_, _, v, e) in &pieces {
        for i in 0..n {
            value[i] += v[i];
        }
        error += e;
    }
    Ok(QuadResult { value, error, evaluations })
}
