use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use super::config::{RunConfig, Sweep, SweepParameter};
use crate::eigen::{classify, default_window, kappa_general, spectrum, Case, ModeShape, Root};
use crate::error::{Error, Result};
use crate::fields::{build, enforce_edge_condition, Expansion, Family};
use crate::jintegral::{self, JResult, DEFAULT_RADII, PATH_TOL};
use crate::material::{validate_config, BimaterialConfig, ProblemKind};
use crate::termalg::Side;
use crate::verify::{self, VerifyOptions, VerifyReport};

pub const FIELDS_HEADER: &str = "r,theta,side,w,sigma13,sigma23,mu11,mu12,mu21,mu22,tau13,tau23";
pub const SWEEP_HEADER: &str = "a_over_b,parameter,value,kappa,case,gamma";

pub fn case_name(c: Case) -> &'static str {
    match c {
        Case::RealSimple => "REAL_SIMPLE",
        Case::RealDouble => "REAL_DOUBLE",
        Case::ComplexOscillatory => "COMPLEX_OSCILLATORY",
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub problem: &'static str,
    pub kappa: Option<f64>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    #[serde(rename = "D")]
    pub d: Option<f64>,
    pub case: Option<&'static str>,
    pub gamma: Option<f64>,
    /// Dominant exponent `(Re λ, Im λ)` from the κ classification.
    pub lambda: Option<(f64, f64)>,
    /// κ is within the warning band around the double root.
    pub near_double: Option<bool>,
    pub window: (f64, f64),
    pub roots: Vec<Root>,
    pub modes: Vec<ModeShape>,
}

pub fn cmd_analyze(run: &RunConfig) -> Result<AnalyzeReport> {
    let cfg = &run.config;
    let sp = spectrum(cfg, run.window.unwrap_or_else(|| default_window(cfg.problem)))?;
    Ok(AnalyzeReport {
        problem: sp.problem,
        kappa: sp.kappa.map(|k| k.kappa),
        c: sp.kappa.map(|k| k.c),
        d: sp.kappa.map(|k| k.d),
        case: sp.classification.map(|c| case_name(c.case)),
        gamma: sp.classification.map(|c| c.gamma),
        lambda: sp.classification.map(|c| (c.lambda_re, c.lambda_im)),
        near_double: sp.classification.map(|c| c.near_double),
        window: sp.window,
        roots: sp.roots,
        modes: sp.modes,
    })
}

/// The expansion a run describes: amplitudes, optional edge condition and
/// optional order cut.
pub fn expansion(run: &RunConfig) -> Result<Expansion> {
    let mut e = build(&run.config, &run.amplitudes)?;
    if run.edge_condition {
        e = enforce_edge_condition(&e, run.amplitudes.line_load)?;
    }
    if let Some(order) = run.order {
        e = e.up_to(order)?;
    }
    Ok(e)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Grid CSV: upper side on `θ ∈ [0, π]`, then lower side on `θ ∈ [−π, 0]`,
/// each θ-major then `r`.
pub fn cmd_fields(run: &RunConfig) -> Result<String> {
    let e = expansion(run)?;
    let g = run.grid;
    let rs = linspace(g.r_min, g.r_max, g.n_r);
    let mut out = String::from(FIELDS_HEADER);
    out.push('\n');
    for side in [Side::Upper, Side::Lower] {
        let thetas = match (side, g.n_theta) {
            (_, 1) => vec![0.0],
            (Side::Upper, n) => linspace(0.0, PI, n),
            (Side::Lower, n) => linspace(-PI, 0.0, n),
        };
        let (w, _) = e.side(side);
        let s = e.stress(side);
        for &t in &thetas {
            for &r in &rs {
                let v = |f: &crate::termalg::FieldSeries| f.evaluate(r, t).map(|z| z.re);
                let cols = [
                    v(w)?,
                    v(&s.sigma13)?,
                    v(&s.sigma23)?,
                    v(&s.mu11)?,
                    v(&s.mu12)?,
                    v(&s.mu21)?,
                    v(&s.mu22)?,
                    v(&s.tau13)?,
                    v(&s.tau23)?,
                ];
                out.push_str(&format!("{r},{t},{}", side.name()));
                for c in cols {
                    out.push_str(&format!(",{c}"));
                }
                out.push('\n');
            }
        }
    }
    Ok(out)
}

pub fn cmd_jint(run: &RunConfig) -> Result<JResult> {
    let e = expansion(run)?;
    let radii = run.radii.clone().unwrap_or_else(|| DEFAULT_RADII.iter().map(|r| r * run.config.plus.l).collect());
    jintegral::evaluate(&e, &radii)
}

fn apply(base: &BimaterialConfig, p: SweepParameter, v: f64, ratio: Option<f64>) -> Result<BimaterialConfig> {
    let (mut plus, mut minus) = (base.plus, base.minus);
    match p {
        SweepParameter::GPlus => plus.g = v,
        SweepParameter::GMinus => minus.g = v,
        SweepParameter::LPlus => plus.l = v,
        SweepParameter::LMinus => minus.l = v,
        SweepParameter::EtaPlus => plus.eta = v,
        SweepParameter::EtaMinus => minus.eta = v,
        SweepParameter::Eta => {
            plus.eta = v;
            minus.eta = v;
        }
    }
    if let Some(rho) = ratio {
        plus.g = rho * minus.bending_stiffness() / (plus.l * plus.l);
    }
    validate_config(plus, minus, base.problem)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub a_over_b: f64,
    pub parameter: SweepParameter,
    pub value: f64,
    pub kappa: f64,
    pub case: Case,
    pub gamma: f64,
}

/// Every sweep point, validated before any is evaluated, evaluated in
/// parallel and returned in input order (ratio-major, then value).
pub fn sweep_rows(base: &BimaterialConfig, sweep: &Sweep) -> Result<Vec<SweepRow>> {
    base.require(ProblemKind::CsCs)?;
    let ratios: Vec<Option<f64>> = if sweep.ab_ratios.is_empty() { vec![None] } else { sweep.ab_ratios.iter().map(|r| Some(*r)).collect() };
    if !sweep.ab_ratios.is_empty() && sweep.parameter == SweepParameter::GPlus {
        return Err(Error::Config("ab_ratios fixes G+; sweep another parameter".into()));
    }
    if let Some(r) = sweep.ab_ratios.iter().find(|r| !(**r > 0.0)) {
        return Err(Error::Config(format!("a/b ratios must be positive, got {r}")));
    }
    let mut points = Vec::new();
    for rho in &ratios {
        for v in sweep.values() {
            points.push((apply(base, sweep.parameter, v, *rho)?, v));
        }
    }
    points
        .par_iter()
        .map(|(cfg, v)| {
            let k = kappa_general(cfg)?.kappa;
            let c = classify(k)?;
            Ok(SweepRow { a_over_b: cfg.a() / cfg.b(), parameter: sweep.parameter, value: *v, kappa: k, case: c.case, gamma: c.gamma })
        })
        .collect()
}

pub fn cmd_sweep(run: &RunConfig) -> Result<String> {
    let sweep = run.sweep.as_ref().ok_or_else(|| Error::Config("sweep block missing".into()))?;
    let rows = sweep_rows(&run.config, sweep)?;
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{},{},{},{}\n", r.a_over_b, r.parameter.name(), r.value, r.kappa, case_name(r.case), r.gamma));
    }
    Ok(out)
}

pub fn cmd_verify(run: &RunConfig, tol: f64, strict: bool) -> Result<VerifyReport> {
    let opts = VerifyOptions { tol, strict, kappa_perturbation: run.kappa_perturbation, radii: run.radii.clone() };
    let configs = if run.is_default {
        verify::default_configs()
            .into_iter()
            .map(|c| {
                let a = Family::for_config(&c).map(crate::fields::ExpansionAmplitudes::default_for).unwrap_or_default();
                (c, a)
            })
            .collect()
    } else {
        vec![(run.config, expansion(run)?.amplitudes)]
    };
    verify::run(&configs, &opts)
}

/// `true` when a `jint` result is path independent.
pub fn jint_ok(j: &JResult) -> bool {
    j.path_independent(PATH_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::Grid;

    #[test]
    fn fields_grid_contract() {
        let mut run = RunConfig::default_run();
        run.grid = Grid { r_min: 1.0, r_max: 2.0, n_r: 2, n_theta: 2 };
        let csv = cmd_fields(&run).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], FIELDS_HEADER);
        assert_eq!(lines.len(), 9);
        // θ = 0, r = 1 on the upper side
        let first: Vec<f64> = lines[1].split(',').filter_map(|x| x.parse().ok()).collect();
        assert_eq!((first[0], first[1]), (1.0, 0.0));
        assert!((first.last().unwrap() + 1.5).abs() < 1e-12);
        assert!(lines[2].starts_with("2,0,upper"));
        assert!(lines[3].starts_with(&format!("1,{PI},upper")));
        assert!(lines[5].starts_with(&format!("1,-{PI},lower")));
    }

    #[test]
    fn order_beyond_truncation_is_an_error() {
        let mut run = RunConfig::default_run();
        run.order = Some(2.5);
        assert!(matches!(cmd_fields(&run), Err(Error::OrderBeyondTruncation { .. })));
        run.order = Some(1.5);
        assert!(cmd_fields(&run).is_ok());
    }

    #[test]
    fn sweep_refuses_eta_minus_one() {
        let mut run = RunConfig::default_run();
        run.sweep = Some(Sweep { parameter: SweepParameter::Eta, from: 1.0, to: -1.0, steps: 5, ab_ratios: vec![3.0] });
        assert!(matches!(cmd_sweep(&run), Err(Error::EtaOutOfRange { .. })));
    }

    #[test]
    fn sweep_is_ordered_and_deterministic() {
        let mut run = RunConfig::default_run();
        run.sweep = Some(Sweep { parameter: SweepParameter::Eta, from: 1.0, to: -0.9, steps: 20, ab_ratios: vec![1.0, 3.0] });
        let a = cmd_sweep(&run).unwrap();
        assert_eq!(a, cmd_sweep(&run).unwrap());
        let lines: Vec<&str> = a.lines().collect();
        assert_eq!(lines.len(), 41);
        assert!(lines[1].starts_with("1,eta,1,1,REAL_DOUBLE"));
        assert!(lines[21].starts_with("3,eta,1,"));
    }

    #[test]
    fn analyze_homogeneous() {
        let r = cmd_analyze(&RunConfig::default_run()).unwrap();
        assert_eq!(r.case, Some("REAL_DOUBLE"));
        assert!((r.roots[0].re - 1.5).abs() < 1e-8);
    }
}
