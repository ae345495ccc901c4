//! Conservation J-integral around the tip, crack-face corrections and the
//! path-independent parameter `J*`.
//!
//! The integrand `W n₁ − (t·n) w,₁ − (μᵀn)·φ,₁` is quadratic in `w`, so for
//! `w = Σ Tᵢ` it splits into pair contributions `B(Tᵢ, Tⱼ)`. On an arc of
//! radius `R` the strain part of a pair scales as `R^{λᵢ+λⱼ−1}` and the
//! curvature part as `R^{λᵢ+λⱼ−3}`. `J*(R)` keeps the pairs with exponent
//! `≤ 0` and adds the crack-face antiderivative of the pairs with negative
//! exponent; the positive-exponent pairs vanish at the tip and carry the
//! truncation error of the expansion.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fields::{Expansion, Family};
use crate::material::CoupleStressMaterial;
use crate::quad::integrate;
use crate::termalg::{d_x1, d_x2, laplacian, Derivatives, FieldSeries, FieldTerm, Side};

/// Quadrature accuracy relative to the size of the integrals.
pub const QUAD_REL_TOL: f64 = 1e-12;
/// Default radii, in units of `l₊`.
pub const DEFAULT_RADII: [f64; 3] = [0.01, 0.1, 0.5];
/// Agreement of `J*(R)` across radii, relative.
pub const PATH_TOL: f64 = 1e-6;

const EXP_EPS: f64 = 1e-9;

/// `[w₁, w₂, w₁₁, w₁₂, w₂₂, ∂₁Δw, ∂₂Δw]` at a point.
type State = [Complex64; 7];

struct TermDerivs {
    exponent: Complex64,
    series: [FieldSeries; 7],
}

impl TermDerivs {
    fn new(t: &FieldSeries, exponent: Complex64) -> Self {
        let d = Derivatives::of(t);
        let lap = laplacian(t);
        Self { exponent, series: [d.w1, d.w2, d.w11, d.w12, d.w22, d_x1(&lap), d_x2(&lap)] }
    }

    fn at(&self, r: f64, theta: f64) -> State {
        self.series.each_ref().map(|s| s.eval_unchecked(r, theta))
    }
}

fn state_of(w: &FieldSeries, r: f64, theta: f64) -> State {
    TermDerivs::new(w, Complex64::new(0.0, 0.0)).at(r, theta)
}

/// `(strain part, curvature part)` of `W(a, b)`, symmetric bilinear.
fn energy_pair(m: &CoupleStressMaterial, a: &State, b: &State) -> (Complex64, Complex64) {
    let g = m.g;
    let k = m.bending_stiffness();
    let wg = 0.5 * g * (a[0] * b[0] + a[1] * b[1]);
    let chi = |s: &State| [0.5 * s[3], 0.5 * s[4], -0.5 * s[2], -0.5 * s[3]]; // χ11 χ12 χ21 χ22
    let (ca, cb) = (chi(a), chi(b));
    let dot = ca[0] * cb[0] + ca[1] * cb[1] + ca[2] * cb[2] + ca[3] * cb[3];
    let transp = ca[0] * cb[0] + ca[3] * cb[3] + ca[1] * cb[2] + ca[2] * cb[1];
    (wg, k * (dot + m.eta * transp))
}

/// `−(t·n) b,₁ − (μᵀn)·φ(b),₁` with tractions from `a`.
fn traction_pair(m: &CoupleStressMaterial, n: (f64, f64), a: &State, b: &State) -> (Complex64, Complex64) {
    let (n1, n2) = n;
    let g = m.g;
    let k = m.bending_stiffness();
    let tg = -(g * a[0] * n1 + g * a[1] * n2) * b[0];
    let tau = -(-0.5 * k * a[5] * n1 - 0.5 * k * a[6] * n2) * b[0];
    let m11 = k * (1.0 + m.eta) * a[3];
    let m22 = -m11;
    let m12 = k * (m.eta * a[4] - a[2]);
    let m21 = k * (a[4] - m.eta * a[2]);
    let (phi11, phi21) = (0.5 * b[3], -0.5 * b[2]);
    let couple = -((m11 * n1 + m21 * n2) * phi11 + (m12 * n1 + m22 * n2) * phi21);
    (tg, tau + couple)
}

fn flux_pair(m: &CoupleStressMaterial, n: (f64, f64), a: &State, b: &State) -> (Complex64, Complex64) {
    let (wg, wl) = energy_pair(m, a, b);
    let (ab_g, ab_l) = traction_pair(m, n, a, b);
    let (ba_g, ba_l) = traction_pair(m, n, b, a);
    (wg * n.0 + 0.5 * (ab_g + ba_g), wl * n.0 + 0.5 * (ab_l + ba_l))
}

/// Strain-energy density `W = G ε·ε + G l² (χ·χ + η χ·χᵀ)`.
pub fn energy_density(w: &FieldSeries, m: &CoupleStressMaterial, r: f64, theta: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::RadiusNonPositive { r });
    }
    let s = state_of(w, r, theta);
    let (a, b) = energy_pair(m, &s, &s);
    Ok((a + b).re)
}

/// The J-integrand `W n₁ − (t·n) w,₁ − (μᵀn)·φ,₁` at a point.
pub fn j_integrand(w: &FieldSeries, m: &CoupleStressMaterial, r: f64, theta: f64, n: (f64, f64)) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::RadiusNonPositive { r });
    }
    let s = state_of(w, r, theta);
    let (a, b) = flux_pair(m, n, &s, &s);
    Ok((a + b).re)
}

/// One side of the expansion split into single-exponent terms.
struct SideTerms {
    material: CoupleStressMaterial,
    terms: Vec<TermDerivs>,
    /// `(i, j, multiplicity)` with `i ≤ j`.
    pairs: Vec<(usize, usize, f64)>,
}

impl SideTerms {
    fn new(w: &FieldSeries, material: CoupleStressMaterial) -> Self {
        let terms: Vec<TermDerivs> = w
            .terms()
            .iter()
            .map(|t| {
                let single = FieldSeries::from_terms(w.side, [FieldTerm::new(t.radial_exponent, t.angular.clone())]);
                TermDerivs::new(&single, t.radial_exponent)
            })
            .collect();
        let mut pairs = Vec::new();
        for i in 0..terms.len() {
            for j in i..terms.len() {
                pairs.push((i, j, if i == j { 1.0 } else { 2.0 }));
            }
        }
        Self { material, terms, pairs }
    }

    /// Exponents of `R` for the strain and curvature parts of a pair on an arc.
    fn pair_exponents(&self, k: usize) -> (Complex64, Complex64) {
        let (i, j, _) = self.pairs[k];
        let s = self.terms[i].exponent + self.terms[j].exponent;
        (s - 1.0, s - 3.0)
    }

    /// Pair fluxes, flattened as `[re g, im g, re l, im l]` per pair.
    fn fluxes(&self, r: f64, theta: f64, n: (f64, f64)) -> Vec<f64> {
        let states: Vec<State> = self.terms.iter().map(|t| t.at(r, theta)).collect();
        let mut out = Vec::with_capacity(4 * self.pairs.len());
        for &(i, j, mult) in &self.pairs {
            let (g, l) = flux_pair(&self.material, n, &states[i], &states[j]);
            out.extend([mult * g.re, mult * g.im, mult * l.re, mult * l.im]);
        }
        out
    }

    /// Pair contributions as `(exponent, value)`, strain and curvature parts
    /// listed separately.
    fn classes(&self, v: &[f64]) -> Vec<(Complex64, Complex64)> {
        let mut out = Vec::with_capacity(2 * self.pairs.len());
        for k in 0..self.pairs.len() {
            let (pg, pl) = self.pair_exponents(k);
            out.push((pg, Complex64::new(v[4 * k], v[4 * k + 1])));
            out.push((pl, Complex64::new(v[4 * k + 2], v[4 * k + 3])));
        }
        out
    }
}

fn sides(e: &Expansion) -> [(Side, SideTerms); 2] {
    [
        (Side::Upper, SideTerms::new(&e.upper, e.config.plus)),
        (Side::Lower, SideTerms::new(&e.lower, e.config.minus)),
    ]
}

fn theta_range(side: Side) -> (f64, f64) {
    match side {
        Side::Upper => (0.0, PI),
        Side::Lower => (-PI, 0.0),
    }
}

/// Outward normal of the crack face bounding each half-plane.
fn face(side: Side) -> (f64, (f64, f64)) {
    match side {
        Side::Upper => (PI, (0.0, -1.0)),
        Side::Lower => (-PI, (0.0, 1.0)),
    }
}

fn integrate_scaled(f: impl Fn(f64) -> Vec<f64>, a: f64, b: f64) -> Result<(Vec<f64>, f64)> {
    let coarse = integrate(&f, a, b, f64::INFINITY)?;
    let scale = coarse.value.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    let fine = integrate(&f, a, b, QUAD_REL_TOL * scale)?;
    Ok((fine.value, fine.error))
}

/// Arc contributions at radius `R`, both sides, as `(exponent, value)`.
fn arc_classes(sides: &[(Side, SideTerms); 2], radius: f64) -> Result<(Vec<(Complex64, Complex64)>, f64)> {
    let mut out = Vec::new();
    let mut err = 0.0;
    for (side, st) in sides {
        if st.pairs.is_empty() {
            continue;
        }
        let (a, b) = theta_range(*side);
        let (v, e) = integrate_scaled(
            |t| {
                let mut f = st.fluxes(radius, t, (t.cos(), t.sin()));
                f.iter_mut().for_each(|x| *x *= radius);
                f
            },
            a,
            b,
        )?;
        err += e;
        out.extend(st.classes(&v));
    }
    Ok((out, err))
}

/// Crack-face integrand at `r` on both faces, as `(exponent, value)` with the
/// arc exponent convention (`value ∝ r^{exponent − 1}`).
fn face_classes(sides: &[(Side, SideTerms); 2], r: f64) -> Vec<(Complex64, Complex64)> {
    let mut out = Vec::new();
    for (side, st) in sides {
        let (theta, n) = face(*side);
        out.extend(st.classes(&st.fluxes(r, theta, n)));
    }
    out
}

fn sum_re(classes: &[(Complex64, Complex64)], keep: impl Fn(Complex64) -> bool) -> f64 {
    classes.iter().filter(|(p, _)| keep(*p)).map(|(_, v)| v.re).sum()
}

/// `J(R)`: the full arc integral around the tip at radius `R`.
pub fn j_arc(e: &Expansion, radius: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::RadiusNonPositive { r: radius });
    }
    let (c, _) = arc_classes(&sides(e), radius)?;
    Ok(sum_re(&c, |_| true))
}

/// Crack-face correction `F(R)`: the antiderivative, in `R`, of the
/// crack-face integrand restricted to its singular part, so that `J(R) + F(R)`
/// is independent of `R` up to terms vanishing at the tip.
pub fn crack_face_numeric(e: &Expansion, radius: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::RadiusNonPositive { r: radius });
    }
    Ok(face_correction(&face_classes(&sides(e), radius), radius))
}

fn face_correction(classes: &[(Complex64, Complex64)], radius: f64) -> f64 {
    classes
        .iter()
        .filter(|(p, _)| p.re < -EXP_EPS)
        .map(|(p, v)| (v * radius / p).re)
        .sum()
}

/// Leading crack-face correction for the CS_CS η = 1 expansion,
/// `2 β₂ β₄ l₊² l₋² / √R`.
pub fn crack_face_correction(e: &Expansion, radius: f64) -> Result<f64> {
    if e.family != Family::CsCsEta1 {
        return Err(Error::ProblemKindMismatch("closed-form crack-face correction needs CS_CS eta = 1".into()));
    }
    if !(radius > 0.0) {
        return Err(Error::RadiusNonPositive { r: radius });
    }
    let b = &e.amplitudes.beta;
    let ll = (e.config.plus.l * e.config.minus.l).powi(2);
    Ok(2.0 * b[2] * b[4] * ll / radius.sqrt())
}

/// `P = Σ± (l±² l∓⁴ / 2G±)(9π β₃² + π β₄² ± 12 β₃ β₄)`.
pub fn p_closed(e: &Expansion) -> Result<f64> {
    if e.family != Family::CsCsEta1 {
        return Err(Error::ProblemKindMismatch("P is defined for CS_CS eta = 1".into()));
    }
    let (b3, b4) = (e.amplitudes.beta[3], e.amplitudes.beta[4]);
    let (p, m) = (&e.config.plus, &e.config.minus);
    let term = |la: f64, lb: f64, g: f64, s: f64| la * la * lb.powi(4) / (2.0 * g) * (9.0 * PI * b3 * b3 + PI * b4 * b4 + s * 12.0 * b3 * b4);
    Ok(term(p.l, m.l, p.g, 1.0) + term(m.l, p.l, m.g, -1.0))
}

/// Closed-form `J*` for the family.
pub fn j_star_closed(e: &Expansion) -> Result<f64> {
    match e.family {
        Family::CsCsEta1 => p_closed(e),
        Family::Couple => Ok(PI * e.config.minus.g * e.amplitudes.alpha[1].powi(2) / 8.0),
        Family::RotationEta1 | Family::RotationEtaThird | Family::RotationGeneric => Ok(0.0),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadiusRecord {
    pub radius: f64,
    /// Full arc integral.
    pub j: f64,
    /// Crack-face correction.
    pub f: f64,
    /// `J(R) + F(R)` with the pairs vanishing at the tip dropped.
    pub j_star: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JResult {
    pub family: Family,
    #[serde(rename = "J1")]
    pub j1: f64,
    #[serde(rename = "J2")]
    pub j2: f64,
    #[serde(rename = "F_R1")]
    pub f_r1: f64,
    #[serde(rename = "F_R2")]
    pub f_r2: f64,
    #[serde(rename = "J_star_numeric")]
    pub j_star_numeric: f64,
    #[serde(rename = "J_star_closed")]
    pub j_star_closed: f64,
    /// Only defined for CS_CS η = 1.
    #[serde(rename = "P")]
    pub p: Option<f64>,
    /// Summed quadrature error estimate.
    pub error: f64,
    pub radii: Vec<RadiusRecord>,
    /// Largest difference of `J*(R)` between radii.
    pub spread: f64,
    /// Interface-ray imbalance over `[R_min, R_max]`.
    pub interface_residual: f64,
}

impl JResult {
    pub fn relative_error(&self) -> f64 {
        (self.j_star_numeric - self.j_star_closed).abs() / self.j_star_closed.abs().max(1e-300)
    }

    pub fn path_independent(&self, tol: f64) -> bool {
        self.spread <= tol * self.j_star_numeric.abs().max(1e-12)
    }
}

/// Evaluate `J*` at each radius without judging the result.
pub fn evaluate(e: &Expansion, radii: &[f64]) -> Result<JResult> {
    if radii.len() < 2 {
        return Err(Error::Config("at least two radii are needed".into()));
    }
    if let Some(&r) = radii.iter().find(|r| !(**r > 0.0)) {
        return Err(Error::RadiusNonPositive { r });
    }
    let sd = sides(e);
    let mut records = Vec::with_capacity(radii.len());
    let mut error = 0.0;
    for &r in radii {
        let (arc, err) = arc_classes(&sd, r)?;
        error += err;
        let f = face_correction(&face_classes(&sd, r), r);
        let kept = sum_re(&arc, |p| p.re <= EXP_EPS);
        records.push(RadiusRecord { radius: r, j: sum_re(&arc, |_| true), f, j_star: kept + f });
    }
    let vals: Vec<f64> = records.iter().map(|x| x.j_star).collect();
    let spread = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let (rmin, rmax) = (radii.iter().cloned().fold(f64::INFINITY, f64::min), radii.iter().cloned().fold(0.0, f64::max));
    Ok(JResult {
        family: e.family,
        j1: records[0].j,
        j2: records[1].j,
        f_r1: records[0].f,
        f_r2: records[1].f,
        j_star_numeric: vals.iter().sum::<f64>() / vals.len() as f64,
        j_star_closed: j_star_closed(e)?,
        p: p_closed(e).ok(),
        error,
        radii: records,
        spread,
        interface_residual: interface_residual(e, rmin, rmax)?,
    })
}

/// `J*` over the default radii (scaled by `l₊`), failing if it is not path
/// independent to [`PATH_TOL`].
pub fn j_star(e: &Expansion) -> Result<JResult> {
    let l = e.config.plus.l;
    let radii: Vec<f64> = DEFAULT_RADII.iter().map(|r| r * l).collect();
    let res = evaluate(e, &radii)?;
    if !res.path_independent(PATH_TOL) {
        return Err(Error::PathIndependenceViolated { spread: res.spread, tol: PATH_TOL });
    }
    Ok(res)
}

/// Integral over `r ∈ [r₁, r₂]` on `θ = 0` of the upper-side minus the
/// lower-side integrand (both with `n = e₂`), restricted to pairs with
/// non-positive exponent. The interface segments of a closed contour
/// cancel when this vanishes.
pub fn interface_residual(e: &Expansion, r1: f64, r2: f64) -> Result<f64> {
    let sd = sides(e);
    let f = |r: f64| {
        let mut acc = 0.0;
        for (side, st) in &sd {
            let sign = if *side == Side::Upper { 1.0 } else { -1.0 };
            acc += sign * sum_re(&st.classes(&st.fluxes(r, 0.0, (0.0, 1.0))), |p| p.re <= EXP_EPS);
        }
        vec![acc]
    };
    let (v, _) = integrate_scaled(f, r1, r2)?;
    Ok(v[0])
}

/// Full closed-circuit integral around the annulus `r₁ < r < r₂`, both
/// half-planes: outer arc, inner arc, crack faces and interface rays.
/// Vanishes when the expansion is an exact solution in the annulus.
pub fn closed_loop(e: &Expansion, r1: f64, r2: f64) -> Result<f64> {
    let sd = sides(e);
    let full = |st: &SideTerms, r: f64, t: f64, n: (f64, f64)| -> f64 {
        let v = st.fluxes(r, t, n);
        v.chunks(4).map(|c| c[0] + c[2]).sum()
    };
    let mut total = 0.0;
    for (side, st) in &sd {
        let (a, b) = theta_range(*side);
        for (r, sign) in [(r2, 1.0), (r1, -1.0)] {
            let (v, _) = integrate_scaled(|t| vec![r * full(st, r, t, (t.cos(), t.sin()))], a, b)?;
            total += sign * v[0];
        }
        let (tf, nf) = face(*side);
        let ni = (-nf.0, -nf.1);
        let (v, _) = integrate_scaled(|r| vec![full(st, r, tf, nf) + full(st, r, 0.0, ni)], r1, r2)?;
        total += v[0];
    }
    Ok(total)
}
