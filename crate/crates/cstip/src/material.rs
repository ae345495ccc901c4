//! Material records and the two-material configuration.
//!
//! `nu` is carried for completeness only: antiplane shear is isochoric, so no
//! formula in this crate reads it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMaterial")]
pub struct CoupleStressMaterial {
    #[serde(rename = "G")]
    pub g: f64,
    pub nu: f64,
    pub l: f64,
    pub eta: f64,
}

#[derive(Deserialize)]
struct RawMaterial {
    #[serde(rename = "G")]
    g: f64,
    #[serde(default)]
    nu: f64,
    l: f64,
    #[serde(default = "default_eta")]
    eta: f64,
}

fn default_eta() -> f64 {
    1.0
}

impl TryFrom<RawMaterial> for CoupleStressMaterial {
    type Error = Error;
    fn try_from(r: RawMaterial) -> Result<Self> {
        CoupleStressMaterial::new(r.g, r.nu, r.l, r.eta)
    }
}

impl CoupleStressMaterial {
    pub fn new(g: f64, nu: f64, l: f64, eta: f64) -> Result<Self> {
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::NonPositiveModulus { g });
        }
        if !(eta > -1.0 && eta <= 1.0) {
            return Err(Error::EtaOutOfRange { eta });
        }
        if !(nu > -1.0 && nu < 0.5) {
            return Err(Error::PoissonOutOfRange { nu });
        }
        if !(l >= 0.0) || !l.is_finite() {
            return Err(Error::InvalidLength { l });
        }
        Ok(Self { g, nu, l, eta })
    }

    /// Unit couple-stress material with the given `eta`.
    pub fn unit(eta: f64) -> Self {
        Self::new(1.0, 0.0, 1.0, eta).expect("unit material")
    }

    pub fn classical(g: f64, nu: f64) -> Result<Self> {
        Self::new(g, nu, 0.0, 0.0)
    }

    pub fn is_classical(&self) -> bool {
        self.l == 0.0
    }

    /// `G l²`, written `a` for the upper and `b` for the lower material.
    pub fn bending_stiffness(&self) -> f64 {
        self.g * self.l * self.l
    }
}

/// Bending and torsion lengths `(l_b, l_t) = (l/√2, l√(1+η))`.
pub fn characteristic_lengths(m: &CoupleStressMaterial) -> (f64, f64) {
    (m.l / 2f64.sqrt(), m.l * (1.0 + m.eta).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemKind {
    #[serde(rename = "CS_CS")]
    CsCs,
    #[serde(rename = "CS_CLASSICAL_COUPLE")]
    CsClassicalCouple,
    #[serde(rename = "CS_CLASSICAL_ROTATION")]
    CsClassicalRotation,
}

impl ProblemKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::CsCs => "CS_CS",
            ProblemKind::CsClassicalCouple => "CS_CLASSICAL_COUPLE",
            ProblemKind::CsClassicalRotation => "CS_CLASSICAL_ROTATION",
        }
    }

    pub fn is_cs_classical(&self) -> bool {
        !matches!(self, ProblemKind::CsCs)
    }
}

impl std::fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Upper (`plus`, x₂ > 0) and lower (`minus`) materials bonded along x₁ > 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig")]
pub struct BimaterialConfig {
    pub plus: CoupleStressMaterial,
    pub minus: CoupleStressMaterial,
    pub problem: ProblemKind,
}

#[derive(Deserialize)]
struct RawConfig {
    plus: CoupleStressMaterial,
    minus: CoupleStressMaterial,
    problem: ProblemKind,
}

impl TryFrom<RawConfig> for BimaterialConfig {
    type Error = Error;
    fn try_from(r: RawConfig) -> Result<Self> {
        validate_config(r.plus, r.minus, r.problem)
    }
}

pub fn validate_config(
    plus: CoupleStressMaterial,
    minus: CoupleStressMaterial,
    problem: ProblemKind,
) -> Result<BimaterialConfig> {
    for m in [&plus, &minus] {
        CoupleStressMaterial::new(m.g, m.nu, m.l, m.eta)?;
    }
    match problem {
        ProblemKind::CsCs => {
            if plus.is_classical() || minus.is_classical() {
                return Err(Error::ProblemKindMismatch(
                    "CS_CS needs l > 0 on both sides".into(),
                ));
            }
        }
        _ => {
            if plus.is_classical() {
                return Err(Error::ProblemKindMismatch(format!(
                    "{problem} needs l > 0 on the upper side"
                )));
            }
            if !minus.is_classical() {
                return Err(Error::ProblemKindMismatch(format!(
                    "{problem} needs l = 0 on the lower side, got {}",
                    minus.l
                )));
            }
        }
    }
    Ok(BimaterialConfig { plus, minus, problem })
}

impl BimaterialConfig {
    pub fn a(&self) -> f64 {
        self.plus.bending_stiffness()
    }

    pub fn b(&self) -> f64 {
        self.minus.bending_stiffness()
    }

    pub fn homogeneous_unit() -> Self {
        let m = CoupleStressMaterial::unit(1.0);
        validate_config(m, m, ProblemKind::CsCs).unwrap()
    }

    pub fn require(&self, kind: ProblemKind) -> Result<()> {
        if self.problem != kind {
            return Err(Error::ProblemKindMismatch(format!(
                "expected {kind}, found {}",
                self.problem
            )));
        }
        Ok(())
    }
}
