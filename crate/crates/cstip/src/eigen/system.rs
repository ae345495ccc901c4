//! Condition matrices for the exponent λ.
//!
//! CS_CS unknowns: `(B₁⁺..B₄⁺, B₁⁻..B₄⁻)` multiplying
//! `r^λ{sin λθ, cos λθ, sin(λ−2)θ, cos(λ−2)θ}` on each side.
//!
//! CS/classical unknowns: `(B⁽¹⁾₁..B⁽¹⁾₄, B⁽²⁾₁..B⁽²⁾₄, A⁽¹⁾₁, A⁽¹⁾₂, A⁽²⁾₁, A⁽²⁾₂)`
//! for the two-term fields
//! `w⁺ = r^λ F₁ + r^{λ+2} F₂`, `w⁻ = r^λ H₁ + r^{λ+2} H₂`, where `F₂` carries
//! the particular part `B⁽¹⁾₃,₄ /(4λl²)` on the `(λ−2)` harmonics.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::material::{BimaterialConfig, CoupleStressMaterial, ProblemKind};
use crate::termalg::{d_x2, re, stress, FieldSeries, FieldTerm, Angular, Harmonic, Side, Trig};

pub const SPECIAL_LAMBDAS: [f64; 3] = [0.0, 1.0, 2.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    W,
    W2,
    P3,
    Q1,
}

struct Row {
    upper: Option<(Op, f64, f64)>,
    lower: Option<(Op, f64, f64)>,
    offset: f64,
}

fn face(side: Side, op: Op, theta: f64, offset: f64) -> Row {
    let spec = Some((op, theta, 1.0));
    match side {
        Side::Upper => Row { upper: spec, lower: None, offset },
        Side::Lower => Row { upper: None, lower: spec, offset },
    }
}

fn jump(op: Op, weight: f64, offset: f64) -> Row {
    Row { upper: Some((op, 0.0, weight)), lower: Some((op, 0.0, -weight)), offset }
}

fn rows(kind: ProblemKind) -> Vec<Row> {
    use Side::*;
    match kind {
        ProblemKind::CsCs => vec![
            face(Upper, Op::P3, PI, -3.0),
            face(Upper, Op::Q1, PI, -2.0),
            face(Lower, Op::P3, -PI, -3.0),
            face(Lower, Op::Q1, -PI, -2.0),
            jump(Op::W, 1.0, 0.0),
            jump(Op::W2, 1.0, -1.0),
            jump(Op::P3, 1.0, -3.0),
            jump(Op::Q1, 1.0, -2.0),
        ],
        _ => {
            let mut r = vec![
                face(Upper, Op::P3, PI, -3.0),
                face(Upper, Op::P3, PI, -1.0),
                face(Upper, Op::Q1, PI, -2.0),
                face(Upper, Op::Q1, PI, 0.0),
                // p₃ on the classical side is σ₂₃
                face(Lower, Op::P3, -PI, -1.0),
                face(Lower, Op::P3, -PI, 1.0),
                jump(Op::W, 1.0, 0.0),
                jump(Op::W, 1.0, 2.0),
                jump(Op::P3, 1.0, -3.0),
                jump(Op::P3, 1.0, -1.0),
            ];
            if kind == ProblemKind::CsClassicalCouple {
                r.push(face(Upper, Op::Q1, 0.0, -2.0));
                r.push(face(Upper, Op::Q1, 0.0, 0.0));
            } else {
                r.push(jump(Op::W2, 0.5, -1.0));
                r.push(jump(Op::W2, 0.5, 1.0));
            }
            r
        }
    }
}

/// One unknown's contribution to the upper and lower displacement.
#[derive(Clone, Debug)]
pub(crate) struct Column {
    pub upper: FieldSeries,
    pub lower: FieldSeries,
}

fn mono(side: Side, exp: Complex64, kind: Trig, freq: Complex64) -> FieldSeries {
    FieldSeries::monomial(side, exp, re(1.0), Harmonic::new(kind, freq))
}

pub(crate) fn columns(cfg: &BimaterialConfig, lam: Complex64) -> Vec<Column> {
    use Trig::*;
    let zu = FieldSeries::zero(Side::Upper);
    let zl = FieldSeries::zero(Side::Lower);
    let up = |s: FieldSeries| Column { upper: s, lower: zl.clone() };
    let lo = |s: FieldSeries| Column { upper: zu.clone(), lower: s };
    let basis = [(Sin, lam), (Cos, lam), (Sin, lam - 2.0), (Cos, lam - 2.0)];
    match cfg.problem {
        ProblemKind::CsCs => basis
            .iter()
            .map(|&(k, f)| up(mono(Side::Upper, lam, k, f)))
            .chain(basis.iter().map(|&(k, f)| lo(mono(Side::Lower, lam, k, f))))
            .collect(),
        _ => {
            let l2 = cfg.plus.l * cfg.plus.l;
            let part = re(1.0) / (lam * 4.0 * l2);
            let lam2 = lam + 2.0;
            let mut out: Vec<Column> = Vec::with_capacity(12);
            for (i, &(k, f)) in basis.iter().enumerate() {
                let mut s = mono(Side::Upper, lam, k, f);
                if i >= 2 {
                    s = s.add(&FieldSeries::from_terms(
                        Side::Upper,
                        [FieldTerm::new(lam2, Angular::single(part, Harmonic::new(k, f)))],
                    ));
                }
                out.push(up(s));
            }
            for &(k, f) in &[(Sin, lam2), (Cos, lam2), (Sin, lam), (Cos, lam)] {
                out.push(up(mono(Side::Upper, lam2, k, f)));
            }
            out.push(lo(mono(Side::Lower, lam, Sin, lam)));
            out.push(lo(mono(Side::Lower, lam, Cos, lam)));
            out.push(lo(mono(Side::Lower, lam2, Sin, lam2)));
            out.push(lo(mono(Side::Lower, lam2, Cos, lam2)));
            out
        }
    }
}

struct Applied {
    w: FieldSeries,
    w2: FieldSeries,
    p3: FieldSeries,
    q1: FieldSeries,
}

impl Applied {
    fn new(w: &FieldSeries, m: &CoupleStressMaterial) -> Self {
        if w.is_zero() {
            let z = w.clone();
            return Self { w: z.clone(), w2: z.clone(), p3: z.clone(), q1: z };
        }
        let s = stress(w, m);
        Self { w: w.clone(), w2: d_x2(w), p3: s.p3, q1: s.q1 }
    }

    fn get(&self, op: Op) -> &FieldSeries {
        match op {
            Op::W => &self.w,
            Op::W2 => &self.w2,
            Op::P3 => &self.p3,
            Op::Q1 => &self.q1,
        }
    }
}

fn check_lambda(cfg: &BimaterialConfig, lam: Complex64) -> Result<()> {
    for s in SPECIAL_LAMBDAS {
        if (lam - s).norm() < 1e-9 {
            return Err(Error::SpecialLambda { lambda: lam.re });
        }
    }
    for m in [&cfg.plus, &cfg.minus] {
        if !m.is_classical() && 1.0 + m.eta < 1e-12 {
            return Err(Error::EtaDegenerate);
        }
    }
    Ok(())
}

/// Condition matrix without row scaling.
pub fn assemble_raw(cfg: &BimaterialConfig, lam: Complex64) -> Result<DMatrix<Complex64>> {
    check_lambda(cfg, lam)?;
    let cols = columns(cfg, lam);
    let rows = rows(cfg.problem);
    let mut m = DMatrix::<Complex64>::zeros(rows.len(), cols.len());
    for (j, col) in cols.iter().enumerate() {
        let au = Applied::new(&col.upper, &cfg.plus);
        let al = Applied::new(&col.lower, &cfg.minus);
        for (i, row) in rows.iter().enumerate() {
            let e = lam + row.offset;
            let mut v = Complex64::new(0.0, 0.0);
            if let Some((op, th, wgt)) = row.upper {
                v += au.get(op).restrict(th).coefficient_at(e) * wgt;
            }
            if let Some((op, th, wgt)) = row.lower {
                v += al.get(op).restrict(th).coefficient_at(e) * wgt;
            }
            m[(i, j)] = v;
        }
    }
    Ok(m)
}

/// Max-magnitude entry of each row (1 for an all-zero row).
pub fn row_scales(m: &DMatrix<Complex64>) -> Vec<f64> {
    m.row_iter()
        .map(|r| {
            let s = r.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if s > 0.0 { s } else { 1.0 }
        })
        .collect()
}

pub fn scale_rows(m: &mut DMatrix<Complex64>, scales: &[f64]) {
    for (i, s) in scales.iter().enumerate() {
        m.row_mut(i).scale_mut(1.0 / s);
    }
}

/// Condition matrix with every row divided by its largest entry.
pub fn assemble_system(cfg: &BimaterialConfig, lam: Complex64) -> Result<DMatrix<Complex64>> {
    let mut m = assemble_raw(cfg, lam)?;
    let s = row_scales(&m);
    scale_rows(&mut m, &s);
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetValue {
    pub det: Complex64,
    /// Hadamard bound `Π ‖row‖₂` of the row-normalized matrix.
    pub scale: f64,
}

impl DetValue {
    pub fn relative(&self) -> Complex64 {
        self.det / self.scale
    }
}

pub fn determinant(cfg: &BimaterialConfig, lam: Complex64) -> Result<DetValue> {
    let m = assemble_system(cfg, lam)?;
    let scale = m.row_iter().map(|r| r.norm()).product();
    Ok(DetValue { det: m.determinant(), scale })
}

/// Central-difference `d det/dλ` of the row-normalized determinant, with the
/// row scaling frozen at `lam`.
pub fn determinant_derivative(cfg: &BimaterialConfig, lam: Complex64, h: f64) -> Result<Complex64> {
    let s = row_scales(&assemble_raw(cfg, lam)?);
    let f = |z: Complex64| -> Result<Complex64> {
        let mut m = assemble_raw(cfg, z)?;
        scale_rows(&mut m, &s);
        Ok(m.determinant())
    };
    Ok((f(lam + h)? - f(lam - h)?) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::validate_config;
    use crate::termalg::c64;

    #[test]
    fn special_lambdas_rejected() {
        let c = BimaterialConfig::homogeneous_unit();
        for s in SPECIAL_LAMBDAS {
            assert!(matches!(assemble_system(&c, re(s)), Err(Error::SpecialLambda { .. })));
        }
    }

    #[test]
    fn homogeneous_double_root() {
        let c = BimaterialConfig::homogeneous_unit();
        let d = determinant(&c, re(1.5)).unwrap();
        assert!(d.relative().norm() < 1e-10);
        assert!(determinant_derivative(&c, re(1.5), 1e-6).unwrap().norm() / d.scale < 1e-8);
        assert!(determinant(&c, re(1.51)).unwrap().relative().norm() > 1e-6);
    }

    #[test]
    fn oscillatory_root_is_a_zero() {
        let m = |g, l, e| crate::material::CoupleStressMaterial::new(g, 0.0, l, e).unwrap();
        let c = validate_config(m(2.0, 1.0, 0.0), m(1.0, 1.0, 0.0), ProblemKind::CsCs).unwrap();
        let g = super::super::gamma_of(37.0 / 35.0);
        assert!(determinant(&c, c64(1.5, g)).unwrap().relative().norm() < 1e-12);
        assert!(determinant(&c, c64(1.5, 0.0)).unwrap().relative().norm() > 1e-6);
    }

    #[test]
    fn cs_classical_matrix_shape() {
        let u = crate::material::CoupleStressMaterial::unit(0.5);
        let cl = crate::material::CoupleStressMaterial::classical(1.0, 0.0).unwrap();
        let c = validate_config(u, cl, ProblemKind::CsClassicalCouple).unwrap();
        let m = assemble_system(&c, re(0.77)).unwrap();
        assert_eq!(m.shape(), (12, 12));
        assert!(determinant(&c, re(0.5)).unwrap().relative().norm() < 1e-10);
    }
}
