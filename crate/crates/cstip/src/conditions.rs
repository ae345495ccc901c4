//! Boundary, transmission and field-equation residuals of a two-sided field.
//!
//! An expansion truncated before `r^t` determines a quantity involving `d`
//! derivatives only for exponents below `t − d`; each check is restricted to
//! that resolved range.

use serde::Serialize;
use std::f64::consts::PI;

use crate::material::{BimaterialConfig, ProblemKind};
use crate::termalg::{
    d_x2, laplacian, stress, FieldSeries, RadialSeries, StressSeries,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub name: &'static str,
    /// Exponents below this bound are checked.
    pub resolved_below: f64,
    /// Largest residual coefficient in the resolved range.
    pub residual: f64,
    /// Largest coefficient of the quantities being balanced.
    pub scale: f64,
}

impl ConditionCheck {
    pub fn relative(&self) -> f64 {
        if self.residual == 0.0 {
            0.0
        } else if self.scale > 0.0 {
            self.residual / self.scale
        } else {
            self.residual
        }
    }
}

pub fn worst_relative(checks: &[ConditionCheck]) -> f64 {
    checks.iter().map(ConditionCheck::relative).fold(0.0, f64::max)
}

struct SideFields {
    w: FieldSeries,
    w2: FieldSeries,
    s: StressSeries,
}

impl SideFields {
    fn new(w: &FieldSeries, m: &crate::material::CoupleStressMaterial) -> Self {
        Self { w: w.clone(), w2: d_x2(w), s: stress(w, m) }
    }
}

fn check(name: &'static str, bound: f64, parts: &[(&FieldSeries, f64, f64)]) -> ConditionCheck {
    let mut total = RadialSeries::default();
    let mut scale: f64 = 0.0;
    for &(f, theta, sign) in parts {
        total = total.add(&f.restrict(theta).scale(sign));
        scale = scale.max(f.truncate_below(bound).max_abs());
    }
    ConditionCheck { name, resolved_below: bound, residual: total.max_abs_below(bound), scale }
}

/// Crack-face and interface conditions for `cfg.problem`.
pub fn boundary_checks(
    cfg: &BimaterialConfig,
    upper: &FieldSeries,
    lower: &FieldSeries,
    truncation: f64,
) -> Vec<ConditionCheck> {
    let u = SideFields::new(upper, &cfg.plus);
    let l = SideFields::new(lower, &cfg.minus);
    let t = truncation;
    let mut out = vec![
        check("p3+(pi)", t - 3.0, &[(&u.s.p3, PI, 1.0)]),
        check("q1+(pi)", t - 2.0, &[(&u.s.q1, PI, 1.0)]),
    ];
    match cfg.problem {
        ProblemKind::CsCs => {
            out.push(check("p3-(-pi)", t - 3.0, &[(&l.s.p3, -PI, 1.0)]));
            out.push(check("q1-(-pi)", t - 2.0, &[(&l.s.q1, -PI, 1.0)]));
        }
        _ => out.push(check("sigma23-(-pi)", t - 1.0, &[(&l.s.sigma23, -PI, 1.0)])),
    }
    out.push(check("[[w]](0)", t, &[(&u.w, 0.0, 1.0), (&l.w, 0.0, -1.0)]));
    out.push(check("[[p3]](0)", t - 3.0, &[(&u.s.p3, 0.0, 1.0), (&l.s.p3, 0.0, -1.0)]));
    match cfg.problem {
        ProblemKind::CsCs => {
            out.push(check("[[w2]](0)", t - 1.0, &[(&u.w2, 0.0, 1.0), (&l.w2, 0.0, -1.0)]));
            out.push(check("[[q1]](0)", t - 2.0, &[(&u.s.q1, 0.0, 1.0), (&l.s.q1, 0.0, -1.0)]));
        }
        ProblemKind::CsClassicalCouple => {
            out.push(check("q1+(0)", t - 2.0, &[(&u.s.q1, 0.0, 1.0)]));
        }
        ProblemKind::CsClassicalRotation => {
            out.push(check("[[phi1]](0)", t - 1.0, &[(&u.w2, 0.0, 0.5), (&l.w2, 0.0, -0.5)]));
        }
    }
    out
}

fn pde_check(name: &'static str, w: &FieldSeries, l: f64, truncation: f64) -> ConditionCheck {
    let lap = laplacian(w);
    if l == 0.0 {
        let bound = truncation - 2.0;
        let r = lap.truncate_below(bound).max_abs();
        let scale = laplacian(&w.truncate_below(truncation)).max_abs();
        // an empty resolved range still carries roundoff from the higher orders
        return ConditionCheck { name, resolved_below: bound, residual: r, scale };
    }
    let bound = truncation - 4.0;
    let bilap = laplacian(&lap).scale_re(0.5 * l * l);
    let res = lap.sub(&bilap).truncate_below(bound).max_abs();
    let wt = w.truncate_below(truncation);
    let lt = laplacian(&wt);
    let scale = lt.max_abs().max(laplacian(&lt).scale_re(0.5 * l * l).max_abs());
    ConditionCheck { name, resolved_below: bound, residual: res, scale }
}

/// Field-equation residuals on both sides.
pub fn pde_checks(
    cfg: &BimaterialConfig,
    upper: &FieldSeries,
    lower: &FieldSeries,
    truncation: f64,
) -> Vec<ConditionCheck> {
    vec![
        pde_check("pde+", upper, cfg.plus.l, truncation),
        pde_check("pde-", lower, cfg.minus.l, truncation),
    ]
}
