use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::kappa::{classify, kappa_general, Case, Classification, KappaParts};
use super::roots::{find_roots, Root};
use super::system::{assemble_system, columns};
use crate::error::{Error, Result};
use crate::material::{BimaterialConfig, ProblemKind};
use crate::termalg::{re, Angular, FieldSeries, Side};

pub const NULL_TOL: f64 = 1e-9;

/// Numerical null space: right singular vectors with `σ < 1e−9 σ_max`, each
/// scaled to unit max-norm with its first nonzero entry real and positive.
pub fn nullspace(m: &DMatrix<Complex64>) -> Result<Vec<DVector<Complex64>>> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut out = Vec::new();
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s < NULL_TOL * smax || smax == 0.0 {
            let v: DVector<Complex64> = v_t.row(k).transpose().map(|z| z.conj());
            out.push(normalize(v));
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyNullspace { sigma_ratio: smin / smax });
    }
    Ok(out)
}

fn normalize(v: DVector<Complex64>) -> DVector<Complex64> {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let first = v.iter().find(|z| z.norm() > 1e-12 * max).copied().unwrap_or(re(1.0));
    let phase = first.conj() / first.norm();
    v.map(|z| z * phase / max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeShape {
    #[serde(skip)]
    pub problem: ProblemKind,
    pub lambda_re: f64,
    pub lambda_im: f64,
    /// Order of the determinant zero.
    pub multiplicity: usize,
    /// Dimension of the null space at this λ.
    pub geometric_multiplicity: usize,
    #[serde(serialize_with = "ser_coeffs")]
    pub upper_coeffs: Vec<Complex64>,
    #[serde(serialize_with = "ser_coeffs")]
    pub lower_coeffs: Vec<Complex64>,
    pub normalization: &'static str,
}

fn ser_coeffs<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

impl ModeShape {
    pub fn lambda(&self) -> Complex64 {
        Complex64::new(self.lambda_re, self.lambda_im)
    }

    pub fn coefficients(&self) -> DVector<Complex64> {
        DVector::from_iterator(
            self.upper_coeffs.len() + self.lower_coeffs.len(),
            self.upper_coeffs.iter().chain(self.lower_coeffs.iter()).copied(),
        )
    }

    /// Upper and lower displacement of the mode.
    pub fn series(&self, cfg: &BimaterialConfig) -> (FieldSeries, FieldSeries) {
        let mut up = FieldSeries::zero(Side::Upper);
        let mut lo = FieldSeries::zero(Side::Lower);
        for (col, c) in columns(cfg, self.lambda()).iter().zip(self.coefficients().iter()) {
            up = up.add(&col.upper.scale(*c));
            lo = lo.add(&col.lower.scale(*c));
        }
        (up, lo)
    }

    /// First omitted exponent: one-term fields for CS_CS, two-term otherwise.
    pub fn truncation(&self) -> f64 {
        match self.problem {
            ProblemKind::CsCs => self.lambda_re + 2.0,
            _ => self.lambda_re + 4.0,
        }
    }
}

/// Null-space modes at a located root.
pub fn modes_at(cfg: &BimaterialConfig, root: &Root) -> Result<Vec<ModeShape>> {
    let m = assemble_system(cfg, root.lambda())?;
    let basis = nullspace(&m)?;
    let nu = match cfg.problem {
        ProblemKind::CsCs => 4,
        _ => 8,
    };
    let g = basis.len();
    Ok(basis
        .into_iter()
        .map(|v| ModeShape {
            problem: cfg.problem,
            lambda_re: root.re,
            lambda_im: root.im,
            multiplicity: root.multiplicity,
            geometric_multiplicity: g,
            upper_coeffs: v.rows(0, nu).iter().copied().collect(),
            lower_coeffs: v.rows(nu, v.len() - nu).iter().copied().collect(),
            normalization: "unit max-norm, first nonzero entry real positive",
        })
        .collect())
}

/// Modes at the excluded exponents 0, 1, 2 of the CS_CS problem.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialMode {
    pub lambda: u32,
    pub upper: FieldSeries,
    pub lower: FieldSeries,
}

pub fn special_mode(cfg: &BimaterialConfig, lambda: u32) -> Result<Vec<SpecialMode>> {
    cfg.require(ProblemKind::CsCs)?;
    let both = |lam: u32, up: Angular, lo: Angular| SpecialMode {
        lambda: lam,
        upper: FieldSeries::term(Side::Upper, lam as f64, up),
        lower: FieldSeries::term(Side::Lower, lam as f64, lo),
    };
    match lambda {
        0 => Ok(vec![both(0, Angular::constant(1.0), Angular::constant(1.0))]),
        1 => Ok(vec![
            both(1, Angular::sin(1.0, 1.0), Angular::sin(1.0, 1.0)),
            both(1, Angular::cos(1.0, 1.0), Angular::cos(1.0, 1.0)),
        ]),
        2 => {
            // cos²θ + η sin²θ = (1+η)/2 + (1−η)/2 cos 2θ
            let shape = |eta: f64| Angular::constant(0.5 * (1.0 + eta)).add(&Angular::cos(0.5 * (1.0 - eta), 2.0));
            Ok(vec![
                both(2, shape(cfg.plus.eta), shape(cfg.minus.eta)),
                both(2, Angular::sin(1.0, 2.0), Angular::sin(1.0, 2.0)),
            ])
        }
        other => Err(Error::Config(format!("special exponents are 0, 1, 2; got {other}"))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularitySpectrum {
    pub problem: &'static str,
    /// κ, C and D (CS_CS only).
    pub kappa: Option<KappaParts>,
    pub classification: Option<Classification>,
    pub window: (f64, f64),
    pub roots: Vec<Root>,
    pub modes: Vec<ModeShape>,
}

impl SingularitySpectrum {
    pub fn case(&self) -> Option<Case> {
        self.classification.map(|c| c.case)
    }
}

pub fn default_window(kind: ProblemKind) -> (f64, f64) {
    match kind {
        ProblemKind::CsCs => (1.0, 3.5),
        _ => (0.0, 3.0),
    }
}

pub fn spectrum(cfg: &BimaterialConfig, window: (f64, f64)) -> Result<SingularitySpectrum> {
    let (kappa, classification) = if cfg.problem == ProblemKind::CsCs {
        let k = kappa_general(cfg)?;
        (Some(k), Some(classify(k.kappa)?))
    } else {
        (None, None)
    };
    let roots = find_roots(cfg, window)?;
    let mut modes = Vec::new();
    for r in &roots {
        modes.extend(modes_at(cfg, r)?);
    }
    Ok(SingularitySpectrum { problem: cfg.problem.name(), kappa, classification, window, roots, modes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::{boundary_checks, pde_checks, worst_relative};
    use crate::material::{validate_config, CoupleStressMaterial};

    #[test]
    fn nullspace_examples() {
        let id = DMatrix::<Complex64>::identity(8, 8);
        assert!(matches!(nullspace(&id), Err(Error::EmptyNullspace { .. })));
        let mut d = DMatrix::<Complex64>::identity(8, 8);
        d[(7, 7)] = re(0.0);
        let n = nullspace(&d).unwrap();
        assert_eq!(n.len(), 1);
        let mut e8 = DVector::<Complex64>::zeros(8);
        e8[7] = re(1.0);
        assert!((&n[0] - e8).norm() < 1e-14);
    }

    #[test]
    fn homogeneous_modes_satisfy_conditions() {
        let c = BimaterialConfig::homogeneous_unit();
        let roots = find_roots(&c, (1.2, 2.2)).unwrap();
        let modes = modes_at(&c, &roots[0]).unwrap();
        assert_eq!(modes.len(), 2);
        for m in &modes {
            let a = assemble_system(&c, m.lambda()).unwrap();
            assert!((a * m.coefficients()).norm() < 1e-10);
            let (u, l) = m.series(&c);
            let t = m.truncation();
            assert!(worst_relative(&boundary_checks(&c, &u, &l, t)) < 1e-9);
            assert!(worst_relative(&pde_checks(&c, &u, &l, t)) < 1e-9);
        }
    }

    #[test]
    fn special_modes() {
        let c = BimaterialConfig::homogeneous_unit();
        let m0 = special_mode(&c, 0).unwrap();
        assert_eq!(m0.len(), 1);
        assert_eq!(m0[0].upper, FieldSeries::constant(Side::Upper, 1.0));
        assert_eq!(special_mode(&c, 1).unwrap().len(), 2);
        let m2 = special_mode(&c, 2).unwrap();
        assert_eq!(m2[0].upper, FieldSeries::term(Side::Upper, 2.0, Angular::constant(1.0)));
        let m = |e| CoupleStressMaterial::new(1.0, 0.0, 1.0, e).unwrap();
        let c = validate_config(m(0.2), m(-0.4), ProblemKind::CsCs).unwrap();
        let m2 = special_mode(&c, 2).unwrap();
        for th in [0.3f64, 2.0] {
            let v = m2[0].lower.evaluate(1.0, th).unwrap().re;
            assert!((v - (th.cos().powi(2) - 0.4 * th.sin().powi(2))).abs() < 1e-15);
        }
    }
}
