//! Closed-form near-tip expansions for the three problem families.

use num_complex::Complex64;

use super::{Expansion, ExpansionAmplitudes, Family};
use crate::eigen::{find_roots, modes_at};
use crate::error::{Error, Result};
use crate::material::{BimaterialConfig, ProblemKind};
use crate::termalg::{re, Angular, FieldSeries, Side, Trig};

const ETA_MATCH: f64 = 1e-12;

/// `Σ c·trig(f θ)` from `(c, kind, f)` triples.
fn ang(parts: &[(f64, Trig, f64)]) -> Angular {
    parts.iter().fold(Angular::zero(), |acc, &(c, k, f)| match k {
        Trig::Sin => acc.add(&Angular::sin(c, f)),
        Trig::Cos => acc.add(&Angular::cos(c, f)),
    })
}

/// Series from `(exponent, amplitude, angular shape)` triples.
fn series(side: Side, terms: &[(f64, f64, Angular)]) -> FieldSeries {
    terms.iter().fold(FieldSeries::zero(side), |acc, (e, a, s)| {
        if *a == 0.0 {
            acc
        } else {
            acc.add(&FieldSeries::term(side, *e, s.scale(re(*a))))
        }
    })
}

use Trig::{Cos as C, Sin as S};

pub fn build_cs_cs_eta1(cfg: &BimaterialConfig, amps: &ExpansionAmplitudes) -> Result<Expansion> {
    cfg.require(ProblemKind::CsCs)?;
    let (ep, em) = (cfg.plus.eta, cfg.minus.eta);
    if (ep - 1.0).abs() > ETA_MATCH || (em - 1.0).abs() > ETA_MATCH {
        return Err(Error::EtaNotOne { eta_plus: ep, eta_minus: em });
    }
    amps.check_family(Family::CsCsEta1)?;
    let b = &amps.beta;
    let side = |s: Side, g: f64, l_other: f64| {
        let k = l_other * l_other / g;
        series(
            s,
            &[
                (0.0, b[0], Angular::constant(1.0)),
                (1.0, b[1], Angular::sin(1.0, 1.0)),
                (1.0, b[2], Angular::cos(1.0, 1.0)),
                (1.5, k * b[3], ang(&[(3.0, S, 0.5), (-1.0, S, 1.5)])),
                (1.5, k * b[4], ang(&[(1.0, C, 0.5), (-1.0, C, 1.5)])),
                (2.0, b[5], Angular::constant(1.0)),
                (2.0, b[6], Angular::sin(1.0, 2.0)),
            ],
        )
    };
    Ok(Expansion {
        config: *cfg,
        amplitudes: amps.clone(),
        upper: side(Side::Upper, cfg.plus.g, cfg.minus.l),
        lower: side(Side::Lower, cfg.minus.g, cfg.plus.l),
        truncation: Family::CsCsEta1.truncation(),
        family: Family::CsCsEta1,
    })
}

pub fn build_couple_transmission(cfg: &BimaterialConfig, amps: &ExpansionAmplitudes) -> Result<Expansion> {
    cfg.require(ProblemKind::CsClassicalCouple)?;
    amps.check_family(Family::Couple)?;
    let (a, b) = (&amps.alpha, &amps.beta);
    let eta = cfg.plus.eta;
    let (gp, gm, l) = (cfg.plus.g, cfg.minus.g, cfg.plus.l);
    let lower = series(
        Side::Lower,
        &[
            (0.0, a[0], Angular::constant(1.0)),
            (0.5, a[1], Angular::sin(1.0, 0.5)),
            (1.0, a[2], Angular::cos(1.0, 1.0)),
            (1.5, a[3], Angular::sin(1.0, 1.5)),
            (2.0, a[4], Angular::cos(1.0, 2.0)),
            (2.5, a[5], Angular::sin(1.0, 2.5)),
        ],
    );
    let k = -2.0 * gm / (3.0 * gp * l * l * (3.0 - eta));
    let upper = series(
        Side::Upper,
        &[
            (0.0, a[0], Angular::constant(1.0)),
            (1.0, a[2], Angular::cos(1.0, 1.0)),
            (1.0, b[1], Angular::sin(1.0, 1.0)),
            (2.0, a[4], ang(&[(0.5 * (1.0 + eta), C, 0.0), (0.5 * (1.0 - eta), C, 2.0)])),
            (2.0, b[2], Angular::sin(1.0, 2.0)),
            (2.5, k * a[1], ang(&[((3.0 - 5.0 * eta) / (5.0 * (1.0 + eta)), S, 2.5), (1.0, S, 0.5)])),
        ],
    );
    Ok(Expansion {
        config: *cfg,
        amplitudes: amps.clone(),
        upper,
        lower,
        truncation: Family::Couple.truncation(),
        family: Family::Couple,
    })
}

/// Closed forms exist for `η₊ = 1` and `η₊ = 1/3` only.
pub fn build_rotation_transmission(cfg: &BimaterialConfig, amps: &ExpansionAmplitudes) -> Result<Expansion> {
    cfg.require(ProblemKind::CsClassicalRotation)?;
    let eta = cfg.plus.eta;
    if (eta - 1.0).abs() < ETA_MATCH {
        rotation_eta1(cfg, amps)
    } else if (eta - 1.0 / 3.0).abs() < ETA_MATCH {
        rotation_eta_third(cfg, amps)
    } else {
        Err(Error::UnsupportedEtaClosedForm { eta })
    }
}

fn rotation_eta1(cfg: &BimaterialConfig, amps: &ExpansionAmplitudes) -> Result<Expansion> {
    amps.check_family(Family::RotationEta1)?;
    let (a, b) = (&amps.alpha, &amps.beta);
    let l2 = cfg.plus.l * cfg.plus.l;
    let lower = series(
        Side::Lower,
        &[
            (0.0, a[0], Angular::constant(1.0)),
            (1.0, a[1], Angular::cos(1.0, 1.0)),
            (2.0, a[2], Angular::cos(1.0, 2.0)),
            (3.0, a[3], Angular::cos(1.0, 3.0)),
            (4.0, a[4], Angular::cos(1.0, 4.0)),
        ],
    );
    let upper = series(
        Side::Upper,
        &[
            (0.0, a[0], Angular::constant(1.0)),
            (1.0, a[1], Angular::cos(1.0, 1.0)),
            (2.0, a[2], Angular::constant(1.0)),
            (2.5, b[1], ang(&[(1.0, C, 2.5), (-1.0, C, 0.5)])),
            (3.0, a[3], ang(&[(1.5, C, 1.0), (-0.5, C, 3.0)])),
            (3.5, b[2], ang(&[(1.0, C, 3.5), (-1.0, C, 1.5)])),
            (4.0, a[2] / l2, ang(&[(1.0 / 24.0, C, 4.0), (-1.0 / 6.0, C, 2.0), (1.0 / 8.0, C, 0.0)])),
            (4.0, a[4], ang(&[(-1.0, C, 4.0), (2.0, C, 2.0)])),
        ],
    );
    Ok(Expansion {
        config: *cfg,
        amplitudes: amps.clone(),
        upper,
        lower,
        truncation: Family::RotationEta1.truncation(),
        family: Family::RotationEta1,
    })
}

fn rotation_eta_third(cfg: &BimaterialConfig, amps: &ExpansionAmplitudes) -> Result<Expansion> {
    amps.check_family(Family::RotationEtaThird)?;
    let a = &amps.alpha;
    let s3 = 3f64.sqrt();
    let lower = series(
        Side::Lower,
        &[
            (0.0, a[0], Angular::constant(1.0)),
            (1.0, a[1], Angular::cos(1.0, 1.0)),
            (2.0, a[2], Angular::cos(1.0, 2.0)),
            (7.0 / 3.0, a[3], ang(&[(1.0, S, 7.0 / 3.0), (-1.0 / s3, C, 7.0 / 3.0)])),
            // sign of the cosine part fixed by [[w]] = 0 and σ₂₃⁻(−π) = 0
            (8.0 / 3.0, a[4], ang(&[(1.0, S, 8.0 / 3.0), (1.0 / s3, C, 8.0 / 3.0)])),
        ],
    );
    let upper = series(
        Side::Upper,
        &[
            (0.0, a[0], Angular::constant(1.0)),
            (1.0, a[1], Angular::cos(1.0, 1.0)),
            (2.0, a[2], ang(&[(2.0 / 3.0, C, 0.0), (1.0 / 3.0, C, 2.0)])),
            (
                7.0 / 3.0,
                a[3],
                ang(&[
                    (10.0 / 9.0, S, 7.0 / 3.0),
                    (-10.0 / (3.0 * s3), C, 7.0 / 3.0),
                    (-7.0 / 9.0, S, 1.0 / 3.0),
                    (7.0 / (3.0 * s3), C, 1.0 / 3.0),
                ]),
            ),
            (
                8.0 / 3.0,
                a[4],
                ang(&[
                    (11.0 / 9.0, S, 8.0 / 3.0),
                    (11.0 / (3.0 * s3), C, 8.0 / 3.0),
                    (-8.0 / 9.0, S, 2.0 / 3.0),
                    (-8.0 / (3.0 * s3), C, 2.0 / 3.0),
                ]),
            ),
        ],
    );
    Ok(Expansion {
        config: *cfg,
        amplitudes: amps.clone(),
        upper,
        lower,
        truncation: Family::RotationEtaThird.truncation(),
        family: Family::RotationEtaThird,
    })
}

/// Rotation expansion for any `η₊` from the numerical null spaces on
/// `0 < Re λ < 3`: `α₀` is the rigid shift, `α₁, α₂, …` weight the modes in
/// increasing `λ`.
pub fn build_rotation_generic(cfg: &BimaterialConfig, amps: &ExpansionAmplitudes) -> Result<Expansion> {
    cfg.require(ProblemKind::CsClassicalRotation)?;
    amps.check_family(Family::RotationGeneric)?;
    let mut modes = Vec::new();
    for root in find_roots(cfg, (0.0, Family::RotationGeneric.truncation()))? {
        modes.extend(modes_at(cfg, &root)?);
    }
    let mut upper = FieldSeries::constant(Side::Upper, amps.alpha[0]);
    let mut lower = FieldSeries::constant(Side::Lower, amps.alpha[0]);
    for (k, m) in modes.iter().enumerate() {
        let amp = amps.alpha.get(k + 1).copied().unwrap_or(0.0);
        if amp == 0.0 {
            continue;
        }
        let (u, l) = m.series(cfg);
        let half = Complex64::new(0.5 * amp, 0.0);
        upper = upper.add(&u.real_combination(half));
        lower = lower.add(&l.real_combination(half));
    }
    Ok(Expansion {
        config: *cfg,
        amplitudes: amps.clone(),
        upper,
        lower,
        truncation: Family::RotationGeneric.truncation(),
        family: Family::RotationGeneric,
    })
}
