#![allow(dead_code)]

use cstip::termalg::{c64, d_x1, d_x2, laplacian, FieldSeries, Harmonic, Side, Trig};
use num_complex::Complex64;

/// One generated monomial: exponent, coefficient, harmonic kind and frequency.
#[derive(Clone, Copy, Debug)]
pub struct Mono {
    pub lam: (f64, f64),
    pub c: (f64, f64),
    pub sin: bool,
    pub freq: (f64, f64),
}

pub fn series(monos: &[Mono]) -> FieldSeries {
    monos.iter().fold(FieldSeries::zero(Side::Upper), |acc, m| {
        let kind = if m.sin { Trig::Sin } else { Trig::Cos };
        let h = Harmonic::new(kind, c64(m.freq.0, m.freq.1));
        acc.add(&FieldSeries::monomial(Side::Upper, c64(m.lam.0, m.lam.1), c64(m.c.0, m.c.1), h))
    })
}

fn at(f: &FieldSeries, x: f64, y: f64) -> Complex64 {
    f.evaluate(x.hypot(y), y.atan2(x)).unwrap()
}

/// `|∂₁∂₂f − ∂₂∂₁f| / (1 + |∂₁∂₂f|)`.
pub fn mixed_partial_gap(f: &FieldSeries, r: f64, theta: f64) -> f64 {
    let a = d_x2(&d_x1(f)).evaluate(r, theta).unwrap();
    let b = d_x1(&d_x2(f)).evaluate(r, theta).unwrap();
    (a - b).norm() / (1.0 + a.norm())
}

/// `|Δf − (∂₁∂₁f + ∂₂∂₂f)| / (1 + |Δf|)`.
pub fn laplacian_gap(f: &FieldSeries, r: f64, theta: f64) -> f64 {
    let lap = laplacian(f).evaluate(r, theta).unwrap();
    let sum = d_x1(&d_x1(f)).add(&d_x2(&d_x2(f))).evaluate(r, theta).unwrap();
    (lap - sum).norm() / (1.0 + lap.norm())
}

/// Central-difference errors of `∂₁f` and `∂₂f` at steps `h` and `h/2`.
pub fn fd_errors(f: &FieldSeries, r: f64, theta: f64, h: f64) -> [(f64, f64); 2] {
    let (x, y) = (r * theta.cos(), r * theta.sin());
    let d1 = d_x1(f).evaluate(r, theta).unwrap();
    let d2 = d_x2(f).evaluate(r, theta).unwrap();
    let err = |h: f64| {
        let e1 = (at(f, x + h, y) - at(f, x - h, y)) / (2.0 * h) - d1;
        let e2 = (at(f, x, y + h) - at(f, x, y - h)) / (2.0 * h) - d2;
        (e1.norm(), e2.norm())
    };
    [err(h), err(h / 2.0)]
}

/// Halving `h` cuts the error by about four, unless it is already at
/// round-off level.
pub fn second_order(e_h: f64, e_h2: f64, floor: f64) -> bool {
    e_h < floor || (e_h2 < floor && e_h < 16.0 * floor) || (e_h / e_h2 > 3.0 && e_h / e_h2 < 5.0)
}
