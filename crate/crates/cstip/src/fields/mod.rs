//! Named near-tip expansions, the crack-edge condition and derived
//! quantities.

mod builders;

pub use builders::{
    build_couple_transmission, build_cs_cs_eta1, build_rotation_generic, build_rotation_transmission,
};

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::material::{BimaterialConfig, CoupleStressMaterial, ProblemKind};
use crate::termalg::{kinematics, stress, FieldSeries, RadialSeries, Side, StressSeries};

/// Which closed form an expansion follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    #[serde(rename = "CS_CS_ETA1")]
    CsCsEta1,
    #[serde(rename = "COUPLE")]
    Couple,
    #[serde(rename = "ROTATION_ETA1")]
    RotationEta1,
    #[serde(rename = "ROTATION_ETA_1_3")]
    RotationEtaThird,
    /// Numerical modes; no closed form to compare against.
    #[serde(rename = "ROTATION_GENERIC")]
    RotationGeneric,
}

impl Family {
    /// First exponent not carried by the expansion.
    pub fn truncation(self) -> f64 {
        match self {
            Family::CsCsEta1 => 2.5,
            Family::Couple => 3.0,
            Family::RotationEta1 => 4.5,
            Family::RotationEtaThird => 3.0,
            Family::RotationGeneric => 3.0,
        }
    }

    pub fn for_config(cfg: &BimaterialConfig) -> Result<Family> {
        Ok(match cfg.problem {
            ProblemKind::CsCs => {
                let (ep, em) = (cfg.plus.eta, cfg.minus.eta);
                if (ep - 1.0).abs() > 1e-12 || (em - 1.0).abs() > 1e-12 {
                    return Err(Error::EtaNotOne { eta_plus: ep, eta_minus: em });
                }
                Family::CsCsEta1
            }
            ProblemKind::CsClassicalCouple => Family::Couple,
            ProblemKind::CsClassicalRotation => {
                let eta = cfg.plus.eta;
                if (eta - 1.0).abs() < 1e-12 {
                    Family::RotationEta1
                } else if (eta - 1.0 / 3.0).abs() < 1e-12 {
                    Family::RotationEtaThird
                } else {
                    Family::RotationGeneric
                }
            }
        })
    }

    /// Amplitude slots the family reads: `(alpha, beta)` masks.
    pub(crate) fn used(self) -> ([bool; 6], [bool; 7]) {
        let no = false;
        match self {
            Family::CsCsEta1 => ([no; 6], [true; 7]),
            Family::Couple => ([true; 6], [no, true, true, no, no, no, no]),
            Family::RotationEta1 => ([true, true, true, true, true, no], [no, true, true, no, no, no, no]),
            Family::RotationEtaThird => ([true, true, true, true, true, no], [no; 7]),
            Family::RotationGeneric => ([true; 6], [no; 7]),
        }
    }
}

/// Free amplitudes, indexed by subscript: `alpha[k] = α_k`, `beta[k] = β_k`
/// (`beta[0]` is only used by the CS_CS family).
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct ExpansionAmplitudes {
    #[serde(default)]
    pub alpha: [f64; 6],
    #[serde(default)]
    pub beta: [f64; 7],
    /// Tangential line load `Q` on the crack edge.
    #[serde(default, rename = "Q")]
    pub line_load: f64,
}

impl ExpansionAmplitudes {
    /// Unit weight on the lowest singular amplitude of the family.
    pub fn default_for(family: Family) -> Self {
        let mut a = Self::default();
        match family {
            Family::CsCsEta1 => a.beta[3] = 1.0,
            Family::Couple => a.alpha[1] = 1.0,
            Family::RotationEta1 => a.beta[1] = 1.0,
            Family::RotationEtaThird => a.alpha[3] = 1.0,
            Family::RotationGeneric => a.alpha[1] = 1.0,
        }
        a
    }

    pub fn beta(k: usize, v: f64) -> Self {
        let mut a = Self::default();
        a.beta[k] = v;
        a
    }

    pub fn alpha(k: usize, v: f64) -> Self {
        let mut a = Self::default();
        a.alpha[k] = v;
        a
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            alpha: self.alpha.map(|x| s * x),
            beta: self.beta.map(|x| s * x),
            line_load: s * self.line_load,
        }
    }

    fn check_family(&self, family: Family) -> Result<()> {
        let (ua, ub) = family.used();
        for (k, (&v, &u)) in self.alpha.iter().zip(ua.iter()).enumerate() {
            if v != 0.0 && !u {
                return Err(Error::UnusedAmplitude { name: format!("alpha{k}") });
            }
        }
        for (k, (&v, &u)) in self.beta.iter().zip(ub.iter()).enumerate() {
            if v != 0.0 && !u {
                return Err(Error::UnusedAmplitude { name: format!("beta{k}") });
            }
        }
        Ok(())
    }
}

/// A two-sided near-tip solution. Terms with `Re λ ≥ truncation` are not
/// part of the expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct Expansion {
    pub config: BimaterialConfig,
    pub amplitudes: ExpansionAmplitudes,
    pub upper: FieldSeries,
    pub lower: FieldSeries,
    pub truncation: f64,
    pub family: Family,
}

/// Build the expansion matching the configuration.
pub fn build(cfg: &BimaterialConfig, amps: &ExpansionAmplitudes) -> Result<Expansion> {
    match Family::for_config(cfg)? {
        Family::CsCsEta1 => build_cs_cs_eta1(cfg, amps),
        Family::Couple => build_couple_transmission(cfg, amps),
        Family::RotationEta1 | Family::RotationEtaThird => build_rotation_transmission(cfg, amps),
        Family::RotationGeneric => build_rotation_generic(cfg, amps),
    }
}

impl Expansion {
    pub fn side(&self, side: Side) -> (&FieldSeries, &CoupleStressMaterial) {
        match side {
            Side::Upper => (&self.upper, &self.config.plus),
            Side::Lower => (&self.lower, &self.config.minus),
        }
    }

    pub fn stress(&self, side: Side) -> StressSeries {
        let (w, m) = self.side(side);
        stress(w, m)
    }

    fn rebuild(&self, amps: ExpansionAmplitudes) -> Result<Expansion> {
        match self.family {
            Family::CsCsEta1 => build_cs_cs_eta1(&self.config, &amps),
            Family::Couple => build_couple_transmission(&self.config, &amps),
            Family::RotationEta1 | Family::RotationEtaThird => build_rotation_transmission(&self.config, &amps),
            Family::RotationGeneric => build_rotation_generic(&self.config, &amps),
        }
    }

    /// The expansion cut to `Re λ ≤ order`.
    pub fn up_to(&self, order: f64) -> Result<Expansion> {
        if order >= self.truncation {
            return Err(Error::OrderBeyondTruncation { order, truncation: self.truncation });
        }
        let cut = order + 1e-9;
        Ok(Expansion {
            upper: self.upper.truncate_below(cut),
            lower: self.lower.truncate_below(cut),
            ..self.clone()
        })
    }
}

/// `μ₂₂⁺(θ = π) − μ₂₂⁻(θ = −π)` as a series in `r`.
pub fn mu22_edge_jump(e: &Expansion) -> RadialSeries {
    let up = e.stress(Side::Upper).mu22.restrict(PI);
    let lo = e.stress(Side::Lower).mu22.restrict(-PI);
    up.sub(&lo)
}

/// Impose the crack-edge condition `μ₂₂⁺ − μ₂₂⁻ = 2Q` at the tip: the
/// `r^{−1/2}` part of the jump must vanish and its `r⁰` part fixes the
/// remaining free amplitude. `q` is stored as `amplitudes.line_load`.
pub fn enforce_edge_condition(e: &Expansion, q: f64) -> Result<Expansion> {
    let mut amps = e.amplitudes.clone();
    amps.line_load = q;
    match e.family {
        Family::CsCsEta1 => {
            // jump = 4β₄l₊²l₋²/√r + 4β₆(b − a)
            amps.beta[4] = 0.0;
            let (a, b) = (e.config.a(), e.config.b());
            if (b - a).abs() <= 1e-12 * a.max(b) {
                if q != 0.0 {
                    return Err(Error::UnbalancedEdge { q });
                }
            } else {
                amps.beta[6] = q / (2.0 * (b - a));
            }
        }
        Family::Couple => {
            // μ₂₂⁺(π) = −2β₂G₊l²(1+η) at r⁰; the lower side carries no couple stress
            let m = &e.config.plus;
            amps.beta[2] = -q / (m.bending_stiffness() * (1.0 + m.eta));
        }
        Family::RotationEta1 | Family::RotationEtaThird | Family::RotationGeneric => {
            if q != 0.0 {
                return Err(Error::UnbalancedEdge { q });
            }
        }
    }
    e.rebuild(amps)
}

fn real_at(f: &FieldSeries, r: f64, theta: f64) -> Result<f64> {
    f.evaluate(r, theta).map(|z| z.re)
}

/// `w⁺(r, π) − w⁻(r, −π)`.
pub fn crack_opening(e: &Expansion, r: f64) -> Result<f64> {
    Ok(real_at(&e.upper, r, PI)? - real_at(&e.lower, r, -PI)?)
}

/// `φ₁⁺(r, 0) − φ₁⁻(r, 0)` as a series in `r`.
pub fn rotation_jump_series(e: &Expansion) -> RadialSeries {
    kinematics(&e.upper).phi1.restrict(0.0).sub(&kinematics(&e.lower).phi1.restrict(0.0))
}

/// `φ₁⁺(r, 0) − φ₁⁻(r, 0)`.
pub fn rotation_jump(e: &Expansion, r: f64) -> Result<f64> {
    Ok(real_at(&kinematics(&e.upper).phi1, r, 0.0)? - real_at(&kinematics(&e.lower).phi1, r, 0.0)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SignReport {
    /// Sign of the `r^{3/2}` coefficient of the crack opening.
    pub opening_sign: i8,
    /// Sign of the `r^{−3/2}` coefficient of `τ₂₃(θ = 0)`.
    pub tau23_sign: i8,
    /// `None` when there is no leading singular term.
    pub opposite: Option<bool>,
}

/// Leading-order signs of the crack opening and of `τ₂₃` ahead of the tip.
pub fn sign_check_near_tip(e: &Expansion) -> Result<SignReport> {
    if e.family != Family::CsCsEta1 {
        return Err(Error::ProblemKindMismatch("sign check needs the CS_CS eta = 1 expansion".into()));
    }
    let opening = e.upper.restrict(PI).sub(&e.lower.restrict(-PI));
    let c_open = opening.coefficient_at(1.5f64.into()).re;
    let c_tau = e.stress(Side::Upper).tau23.restrict(0.0).coefficient_at((-1.5f64).into()).re;
    let sgn = |x: f64| if x.abs() < 1e-300 { 0 } else if x > 0.0 { 1 } else { -1 };
    let (so, st) = (sgn(c_open), sgn(c_tau));
    let opposite = if e.amplitudes.beta[3] == 0.0 { None } else { Some(so * st < 0) };
    Ok(SignReport { opening_sign: so, tau23_sign: st, opposite })
}
