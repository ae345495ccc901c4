use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::material::{BimaterialConfig, ProblemKind};

/// Half-width of the band around κ = 1 classified as a double root.
pub const DOUBLE_ROOT_BAND: f64 = 1e-9;
/// Beyond the band but closer than this, the classification carries a warning.
pub const NEAR_DOUBLE_BAND: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KappaParts {
    pub kappa: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "D")]
    pub d: f64,
}

pub fn kappa_general(cfg: &BimaterialConfig) -> Result<KappaParts> {
    cfg.require(ProblemKind::CsCs)?;
    let (ep, em) = (cfg.plus.eta, cfg.minus.eta);
    let (a, b) = (cfg.a(), cfg.b());
    let kp = (3.0 - ep) * (1.0 + ep);
    let km = (3.0 - em) * (1.0 + em);
    let sp = 5.0 - 2.0 * ep + ep * ep;
    let sm = 5.0 - 2.0 * em + em * em;
    let c = a * a * sm * kp * kp + b * b * sp * km * km + 2.0 * a * b * (3.0 + ep + em - ep * em) * kp * km;
    let d = kp * km * (a * a * kp + b * b * km + 2.0 * a * b * (5.0 - ep - em + ep * em));
    Ok(KappaParts { kappa: c / d, c, d })
}

pub fn c_of_eta(eta: f64) -> f64 {
    (5.0 - 2.0 * eta + eta * eta) / ((3.0 - eta) * (1.0 + eta))
}

/// κ for equal `η` on both sides, in terms of `a = G₊l₊²`, `b = G₋l₋²`.
pub fn kappa_reduced(a: f64, b: f64, eta: f64) -> f64 {
    let c = c_of_eta(eta);
    let s = a * a + b * b;
    (s * c + 2.0 * a * b) / (s + 2.0 * a * b * c)
}

pub fn characteristic_value(lambda: Complex64, kappa: f64) -> Complex64 {
    let s = (lambda * PI).sin();
    s * s * ((lambda * 2.0 * PI).cos() + kappa)
}

pub fn gamma_of(kappa: f64) -> f64 {
    if kappa <= 1.0 {
        0.0
    } else {
        (kappa + (kappa * kappa - 1.0).sqrt()).ln() / (2.0 * PI)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Case {
    #[serde(rename = "REAL_SIMPLE")]
    RealSimple,
    #[serde(rename = "REAL_DOUBLE")]
    RealDouble,
    #[serde(rename = "COMPLEX_OSCILLATORY")]
    ComplexOscillatory,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub case: Case,
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub gamma: f64,
    /// κ lies just outside the double-root band.
    pub near_double: bool,
}

impl Classification {
    pub fn lambda(&self) -> Complex64 {
        Complex64::new(self.lambda_re, self.lambda_im)
    }
}

pub fn classify(kappa: f64) -> Result<Classification> {
    if !(kappa > 0.0) {
        return Err(Error::KappaNonPositive { kappa });
    }
    let dev = (kappa - 1.0).abs();
    let near_double = (DOUBLE_ROOT_BAND..NEAR_DOUBLE_BAND).contains(&dev);
    Ok(if dev < DOUBLE_ROOT_BAND {
        Classification { case: Case::RealDouble, lambda_re: 1.5, lambda_im: 0.0, gamma: 0.0, near_double }
    } else if kappa < 1.0 {
        // cos 2πλ = −κ with 2πλ in (3π, 7π/2)
        let lam = 2.0 - (-kappa).acos() / (2.0 * PI);
        Classification { case: Case::RealSimple, lambda_re: lam, lambda_im: 0.0, gamma: 0.0, near_double }
    } else {
        let g = gamma_of(kappa);
        Classification { case: Case::ComplexOscillatory, lambda_re: 1.5, lambda_im: g, gamma: g, near_double }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// `λ = ±arccos((η+1)/(η−3))/(2π) + k`.
pub fn rotation_lambda(eta: f64, k: u32, branch: Branch) -> f64 {
    let a = ((eta + 1.0) / (eta - 3.0)).clamp(-1.0, 1.0).acos() / (2.0 * PI);
    match branch {
        Branch::Plus => k as f64 + a,
        Branch::Minus => k as f64 - a,
    }
}

/// `(1+η)² sin²(πλ)[1+η−(η−3)cos 2πλ]²`.
pub fn rotation_characteristic(lambda: Complex64, eta: f64) -> Complex64 {
    let s = (lambda * PI).sin();
    let br = (lambda * 2.0 * PI).cos() * (-(eta - 3.0)) + (1.0 + eta);
    s * s * br * br * (1.0 + eta).powi(2)
}

/// `(1+η) cos²(πλ) sin⁴(πλ)`.
pub fn couple_characteristic(lambda: Complex64, eta: f64) -> Complex64 {
    let s = (lambda * PI).sin();
    let c = (lambda * PI).cos();
    c * c * s * s * s * s * (1.0 + eta)
}

/// Real roots of the rotation characteristic function in `(lo, hi)` apart
/// from integers.
pub fn rotation_roots_in(eta: f64, lo: f64, hi: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for k in 0..=(hi.ceil() as u32 + 1) {
        for b in [Branch::Minus, Branch::Plus] {
            let x = rotation_lambda(eta, k, b);
            if x > lo && x < hi && (x - x.round()).abs() > 1e-12 && !out.iter().any(|y: &f64| (y - x).abs() < 1e-12) {
                out.push(x);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}
