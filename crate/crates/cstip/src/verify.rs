//! Cross-module verification suites.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::conditions::{boundary_checks, pde_checks, worst_relative};
use crate::eigen::{default_window, determinant, gamma_of, kappa_general, rotation_roots_in};
use crate::error::Result;
use crate::fields::{build, Expansion, ExpansionAmplitudes, Family};
use crate::jintegral::{self, PATH_TOL};
use crate::material::{validate_config, BimaterialConfig, CoupleStressMaterial, ProblemKind};
use crate::reference::{self, COEFF_TOL};

pub const DEFAULT_TOL: f64 = 1e-9;
/// `|det| / scale` required at midpoints between characteristic roots.
pub const MIDPOINT_FLOOR: f64 = 1e-6;
/// Relative agreement of numeric and closed-form `J*`.
pub const J_CLOSED_TOL: f64 = 1e-6;
/// Absolute bound on `J*` where the closed form is zero.
pub const J_ZERO_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub tol: f64,
    pub strict: bool,
    /// Added to κ when forming the characteristic roots; a nonzero value must
    /// make the determinant suite fail.
    pub kappa_perturbation: f64,
    pub radii: Option<Vec<f64>>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, strict: false, kappa_perturbation: 0.0, radii: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub problem: &'static str,
    pub pass: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

/// Zeros of the closed-form characteristic function in `(lo, hi)` apart
/// from integers; complex zeros are given with positive imaginary part.
pub fn characteristic_roots(cfg: &BimaterialConfig, window: (f64, f64), kappa_shift: f64) -> Result<Vec<Complex64>> {
    let (lo, hi) = window;
    let inside = |x: f64| x > lo && x < hi && (x - x.round()).abs() > 1e-9;
    let mut out = Vec::new();
    match cfg.problem {
        ProblemKind::CsCs => {
            let kappa = kappa_general(cfg)?.kappa + kappa_shift;
            let kmax = hi.ceil() as i64 + 1;
            if kappa > 1.0 {
                let g = gamma_of(kappa);
                for k in 0..=kmax {
                    let x = k as f64 + 0.5;
                    if inside(x) {
                        out.push(Complex64::new(x, g));
                    }
                }
            } else {
                let a = (-kappa).clamp(-1.0, 1.0).acos() / (2.0 * PI);
                for k in 0..=kmax {
                    for x in [k as f64 - a, k as f64 + a] {
                        if inside(x) && !out.iter().any(|z: &Complex64| (z.re - x).abs() < 1e-12) {
                            out.push(Complex64::new(x, 0.0));
                        }
                    }
                }
            }
        }
        ProblemKind::CsClassicalCouple => {
            for k in 0..=(hi.ceil() as i64) {
                let x = k as f64 + 0.5;
                if inside(x) {
                    out.push(Complex64::new(x, 0.0));
                }
            }
        }
        ProblemKind::CsClassicalRotation => {
            out.extend(rotation_roots_in(cfg.plus.eta, lo, hi).into_iter().map(|x| Complex64::new(x, 0.0)));
        }
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re));
    Ok(out)
}

/// `(worst |det|/scale at the characteristic roots, smallest |det|/scale at
/// real midpoints between consecutive roots and integers)`.
pub fn determinant_vs_characteristic(cfg: &BimaterialConfig, window: (f64, f64), kappa_shift: f64) -> Result<(f64, f64)> {
    let roots = characteristic_roots(cfg, window, kappa_shift)?;
    let mut at_roots: f64 = 0.0;
    for z in &roots {
        at_roots = at_roots.max(determinant(cfg, *z)?.relative().norm());
    }
    let mut marks: Vec<f64> = roots.iter().map(|z| z.re).collect();
    let (lo, hi) = window;
    marks.extend((lo.ceil() as i64..=hi.floor() as i64).map(|k| k as f64).filter(|x| *x > lo && *x < hi));
    marks.sort_by(f64::total_cmp);
    marks.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let mut at_mid = f64::INFINITY;
    for w in marks.windows(2) {
        let m = 0.5 * (w[0] + w[1]);
        at_mid = at_mid.min(determinant(cfg, Complex64::new(m, 0.0))?.relative().norm());
    }
    Ok((at_roots, at_mid))
}

fn suite(suite: &'static str, cfg: &BimaterialConfig, residual: f64, tolerance: f64, detail: String) -> SuiteResult {
    SuiteResult { suite, problem: cfg.problem.name(), pass: residual <= tolerance, residual, tolerance, detail }
}

fn failed(suite: &'static str, cfg: &BimaterialConfig, tolerance: f64, err: impl std::fmt::Display) -> SuiteResult {
    SuiteResult { suite, problem: cfg.problem.name(), pass: false, residual: f64::INFINITY, tolerance, detail: err.to_string() }
}

/// Configurations checked when none is given.
pub fn default_configs() -> Vec<BimaterialConfig> {
    let cl = CoupleStressMaterial::classical(1.0, 0.0).expect("valid");
    vec![
        BimaterialConfig::homogeneous_unit(),
        validate_config(CoupleStressMaterial::unit(1.0 / 3.0), cl, ProblemKind::CsClassicalCouple).expect("valid"),
        validate_config(CoupleStressMaterial::unit(1.0), cl, ProblemKind::CsClassicalRotation).expect("valid"),
    ]
}

/// Determinant, residual and J-integral suites for one configuration.
pub fn config_suites(cfg: &BimaterialConfig, amps: &ExpansionAmplitudes, opts: &VerifyOptions) -> Result<Vec<SuiteResult>> {
    let mut out = Vec::new();
    let window = default_window(cfg.problem);
    out.push(match determinant_vs_characteristic(cfg, window, opts.kappa_perturbation) {
        Ok((r, m)) => {
            let mut s = suite("determinant-vs-characteristic", cfg, r, opts.tol, format!("min |det|/scale at midpoints {m:e}"));
            s.pass &= m > MIDPOINT_FLOOR;
            s
        }
        Err(e) => failed("determinant-vs-characteristic", cfg, opts.tol, e),
    });

    let e = build(cfg, amps)?;
    out.push(residual_suite(&e, opts.tol));

    let radii = opts.radii.clone().unwrap_or_else(|| jintegral::DEFAULT_RADII.iter().map(|r| r * cfg.plus.l).collect());
    match jintegral::evaluate(&e, &radii) {
        Ok(j) => {
            let scale = j.j_star_numeric.abs().max(1e-12);
            let mut s = suite(
                "J path independence",
                cfg,
                j.spread / scale,
                PATH_TOL,
                format!("J* = {} over radii {:?}; interface residual {:e}", j.j_star_numeric, radii, j.interface_residual),
            );
            s.pass &= j.interface_residual.abs() <= opts.tol * j.j_star_numeric.abs().max(1.0);
            out.push(s);
            let (res, tol) = if j.j_star_closed == 0.0 {
                (j.j_star_numeric.abs(), J_ZERO_TOL)
            } else {
                (j.relative_error(), J_CLOSED_TOL)
            };
            out.push(suite("closed-form J*", cfg, res, tol, format!("numeric {} closed {}", j.j_star_numeric, j.j_star_closed)));
        }
        Err(err) => {
            out.push(failed("J path independence", cfg, PATH_TOL, &err));
            out.push(failed("closed-form J*", cfg, J_CLOSED_TOL, &err));
        }
    }
    Ok(out)
}

pub fn residual_suite(e: &Expansion, tol: f64) -> SuiteResult {
    let mut checks = boundary_checks(&e.config, &e.upper, &e.lower, e.truncation);
    checks.extend(pde_checks(&e.config, &e.upper, &e.lower, e.truncation));
    let worst = checks.iter().max_by(|a, b| a.relative().total_cmp(&b.relative()));
    let detail = worst.map(|c| format!("worst {} below r^{}", c.name, c.resolved_below)).unwrap_or_default();
    suite("traction/transmission residuals", &e.config, worst_relative(&checks), tol, detail)
}

/// Regeneration of every printed block; independent of the configuration.
pub fn regeneration_suite(strict: bool) -> Result<SuiteResult> {
    let rep = reference::regenerate(strict)?;
    let unexplained = rep.mismatches.iter().filter(|m| !strict || m.erratum.is_none()).count();
    let worst = rep
        .mismatches
        .iter()
        .filter(|m| !strict || m.erratum.is_none())
        .map(|m| (m.printed - m.regenerated).abs())
        .fold(0.0, f64::max);
    let detail = format!(
        "{} coefficients in {} blocks; {} mismatches ({} unexplained); errata confirmed: {}",
        rep.coefficients_checked,
        rep.blocks_checked,
        rep.mismatches.len(),
        unexplained,
        rep.errata.iter().filter(|e| e.confirmed).map(|e| e.id).collect::<Vec<_>>().join(",")
    );
    Ok(SuiteResult {
        suite: "printed-asymptotics regeneration",
        problem: "ALL",
        pass: rep.pass,
        residual: worst,
        tolerance: COEFF_TOL,
        detail,
    })
}

/// Residuals of every closed-form family at the reference configurations.
pub fn reference_residual_suites(tol: f64) -> Result<Vec<SuiteResult>> {
    let mut out = Vec::new();
    for cfg in reference::reference_configs() {
        let fam = Family::for_config(&cfg)?;
        let mut amps = ExpansionAmplitudes::default();
        let (ua, ub) = fam.used();
        // every slot at once, with distinct weights
        for (k, u) in ua.iter().enumerate() {
            if *u {
                amps.alpha[k] = 1.0 + 0.1 * k as f64;
            }
        }
        for (k, u) in ub.iter().enumerate() {
            if *u {
                amps.beta[k] = 0.5 - 0.2 * k as f64;
            }
        }
        out.push(residual_suite(&build(&cfg, &amps)?, tol));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub tolerance: f64,
    pub strict_paper: bool,
    pub kappa_perturbation: f64,
    pub suites: Vec<SuiteResult>,
    pub pass: bool,
}

/// All suites for the given configurations.
pub fn run(configs: &[(BimaterialConfig, ExpansionAmplitudes)], opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut suites = vec![regeneration_suite(opts.strict)?];
    suites.extend(reference_residual_suites(opts.tol)?);
    for (cfg, amps) in configs {
        suites.extend(config_suites(cfg, amps, opts)?);
    }
    let pass = suites.iter().all(|s| s.pass);
    Ok(VerifyReport { tolerance: opts.tol, strict_paper: opts.strict, kappa_perturbation: opts.kappa_perturbation, suites, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults() -> Vec<(BimaterialConfig, ExpansionAmplitudes)> {
        default_configs()
            .into_iter()
            .map(|c| {
                let f = Family::for_config(&c).unwrap();
                (c, ExpansionAmplitudes::default_for(f))
            })
            .collect()
    }

    #[test]
    fn default_suites_pass() {
        for strict in [false, true] {
            let r = run(&defaults(), &VerifyOptions { strict, ..Default::default() }).unwrap();
            assert!(r.pass, "{:#?}", r.suites.iter().filter(|s| !s.pass).collect::<Vec<_>>());
            for name in ["J path independence", "closed-form J*", "determinant-vs-characteristic"] {
                assert_eq!(r.suites.iter().filter(|s| s.suite == name).count(), 3);
            }
        }
    }

    #[test]
    fn kappa_perturbation_breaks_determinant_suite() {
        let opts = VerifyOptions { kappa_perturbation: 1e-3, ..Default::default() };
        let c = BimaterialConfig::homogeneous_unit();
        let s = config_suites(&c, &ExpansionAmplitudes::default_for(Family::CsCsEta1), &opts).unwrap();
        let det = s.iter().find(|s| s.suite == "determinant-vs-characteristic").unwrap();
        assert!(!det.pass && det.residual > 1e-7, "{det:?}");
    }

    #[test]
    fn characteristic_roots_by_kind() {
        let c = BimaterialConfig::homogeneous_unit();
        let r = characteristic_roots(&c, (1.0, 3.5), 0.0).unwrap();
        assert_eq!(r, vec![Complex64::new(1.5, 0.0), Complex64::new(2.5, 0.0)]);
        let r = characteristic_roots(&c, (1.0, 3.5), 1.0).unwrap();
        assert!((r[0].im - (2.0 + 3f64.sqrt()).ln() / (2.0 * PI)).abs() < 1e-14);
        let cp = default_configs()[1];
        let r = characteristic_roots(&cp, (0.0, 3.0), 0.0).unwrap();
        assert_eq!(r.iter().map(|z| z.re).collect::<Vec<_>>(), vec![0.5, 1.5, 2.5]);
    }
}
