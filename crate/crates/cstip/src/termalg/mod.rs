//! Polar term algebra: finite sums of `c · r^λ · sin/cos(μθ)` with complex
//! `c`, `λ` and `μ`, closed under Cartesian differentiation.

mod json;
mod ops;

pub use json::{HarmonicJson, TermJson};
pub use ops::{
    d_x1, d_x2, kinematics, laplacian, pde_residual, reduced_tractions, stress, Derivatives,
    KinematicSeries, KinematicState, StressSeries, StressState,
};

use num_complex::Complex64;
use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Harmonics whose coefficient falls below this fraction of the largest one
/// in the same term are dropped.
pub const CANON_TOL: f64 = 1e-13;

/// Frequencies or exponents closer than this are the same.
pub const MERGE_EPS: f64 = 1e-11;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Trig {
    Sin,
    Cos,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Harmonic {
    pub kind: Trig,
    pub freq: Complex64,
}

impl Harmonic {
    pub fn sin(freq: f64) -> Self {
        Self { kind: Trig::Sin, freq: re(freq) }
    }

    pub fn cos(freq: f64) -> Self {
        Self { kind: Trig::Cos, freq: re(freq) }
    }

    pub fn new(kind: Trig, freq: Complex64) -> Self {
        Self { kind, freq }
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        let x = self.freq * theta;
        match self.kind {
            Trig::Sin => x.sin(),
            Trig::Cos => x.cos(),
        }
    }
}

fn is_negative(f: Complex64) -> bool {
    f.re < -MERGE_EPS || (f.re.abs() <= MERGE_EPS && f.im < -MERGE_EPS)
}

fn cmp_complex(a: Complex64, b: Complex64) -> Ordering {
    if (a.re - b.re).abs() > MERGE_EPS {
        a.re.total_cmp(&b.re)
    } else {
        a.im.total_cmp(&b.im)
    }
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= MERGE_EPS
}

/// Finite trigonometric sum `Σ c_k · trig_k(μ_k θ)` kept in canonical form:
/// non-negative frequencies, no `sin 0`, sorted by (frequency, kind), merged.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Angular {
    parts: Vec<(Complex64, Harmonic)>,
}

impl Angular {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::from_parts([(re(c), Harmonic::cos(0.0))])
    }

    pub fn sin(c: f64, freq: f64) -> Self {
        Self::from_parts([(re(c), Harmonic::sin(freq))])
    }

    pub fn cos(c: f64, freq: f64) -> Self {
        Self::from_parts([(re(c), Harmonic::cos(freq))])
    }

    pub fn single(c: Complex64, h: Harmonic) -> Self {
        Self::from_parts([(c, h)])
    }

    pub fn from_parts(parts: impl IntoIterator<Item = (Complex64, Harmonic)>) -> Self {
        let mut out: Vec<(Complex64, Harmonic)> = Vec::new();
        for (mut c, mut h) in parts {
            if is_negative(h.freq) {
                h.freq = -h.freq;
                if h.kind == Trig::Sin {
                    c = -c;
                }
            }
            if h.freq.norm() <= MERGE_EPS {
                if h.kind == Trig::Sin {
                    continue;
                }
                h.freq = Complex64::new(0.0, 0.0);
            }
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            match out.iter_mut().find(|(_, g)| g.kind == h.kind && close(g.freq, h.freq)) {
                Some(slot) => slot.0 += c,
                None => out.push((c, h)),
            }
        }
        let max = out.iter().map(|(c, _)| c.norm()).fold(0.0, f64::max);
        out.retain(|(c, _)| c.norm() > CANON_TOL * max && c.norm() > 0.0);
        out.sort_by(|a, b| cmp_complex(a.1.freq, b.1.freq).then(a.1.kind.cmp(&b.1.kind)));
        Self { parts: out }
    }

    pub fn parts(&self) -> &[(Complex64, Harmonic)] {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.parts.iter().map(|(c, _)| c.norm()).fold(0.0, f64::max)
    }

    pub fn coefficient(&self, kind: Trig, freq: f64) -> Complex64 {
        let h = Angular::single(re(1.0), Harmonic::new(kind, re(freq)));
        let Some(&(sign, hc)) = h.parts.first() else {
            return Complex64::new(0.0, 0.0);
        };
        self.parts
            .iter()
            .find(|(_, g)| g.kind == hc.kind && close(g.freq, hc.freq))
            .map(|(c, _)| c * sign)
            .unwrap_or_default()
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.parts.iter().map(|(c, h)| c * h.eval(theta)).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_parts(self.parts.iter().map(|&(c, h)| (c * s, h)))
    }

    pub fn add(&self, other: &Angular) -> Self {
        Self::from_parts(self.parts.iter().chain(other.parts.iter()).copied())
    }

    pub fn sub(&self, other: &Angular) -> Self {
        self.add(&other.scale(re(-1.0)))
    }

    pub fn conj(&self) -> Self {
        Self::from_parts(
            self.parts
                .iter()
                .map(|&(c, h)| (c.conj(), Harmonic::new(h.kind, h.freq.conj()))),
        )
    }

    /// Product via the product-to-sum identities.
    pub fn mul(&self, other: &Angular) -> Self {
        let mut out = Vec::with_capacity(2 * self.parts.len() * other.parts.len());
        for &(c1, h1) in &self.parts {
            for &(c2, h2) in &other.parts {
                let c = c1 * c2 * 0.5;
                let (a, b) = (h1.freq, h2.freq);
                use Trig::*;
                match (h1.kind, h2.kind) {
                    (Sin, Sin) => {
                        out.push((c, Harmonic::new(Cos, a - b)));
                        out.push((-c, Harmonic::new(Cos, a + b)));
                    }
                    (Cos, Cos) => {
                        out.push((c, Harmonic::new(Cos, a - b)));
                        out.push((c, Harmonic::new(Cos, a + b)));
                    }
                    (Sin, Cos) => {
                        out.push((c, Harmonic::new(Sin, a + b)));
                        out.push((c, Harmonic::new(Sin, a - b)));
                    }
                    (Cos, Sin) => {
                        out.push((c, Harmonic::new(Sin, a + b)));
                        out.push((-c, Harmonic::new(Sin, a - b)));
                    }
                }
            }
        }
        Self::from_parts(out)
    }

    /// Largest coefficient difference against `other`, harmonic by harmonic.
    pub fn max_diff(&self, other: &Angular) -> f64 {
        let d: Vec<_> = self
            .parts
            .iter()
            .copied()
            .chain(other.parts.iter().map(|&(c, h)| (-c, h)))
            .collect();
        let mut merged: Vec<(Complex64, Harmonic)> = Vec::new();
        for (c, h) in d {
            match merged.iter_mut().find(|(_, g)| g.kind == h.kind && close(g.freq, h.freq)) {
                Some(slot) => slot.0 += c,
                None => merged.push((c, h)),
            }
        }
        merged.iter().map(|(c, _)| c.norm()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    pub fn name(&self) -> &'static str {
        match self {
            Side::Upper => "upper",
            Side::Lower => "lower",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldTerm {
    pub radial_exponent: Complex64,
    pub angular: Angular,
}

impl FieldTerm {
    pub fn new(radial_exponent: Complex64, angular: Angular) -> Self {
        Self { radial_exponent, angular }
    }

    pub fn harmonics(&self) -> &[(Complex64, Harmonic)] {
        self.angular.parts()
    }
}

/// One side's field `Σ r^λ_k A_k(θ)`, one term per distinct exponent, sorted
/// by the real part of the exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSeries {
    pub side: Side,
    terms: Vec<FieldTerm>,
}

impl FieldSeries {
    pub fn zero(side: Side) -> Self {
        Self { side, terms: Vec::new() }
    }

    pub fn from_terms(side: Side, terms: impl IntoIterator<Item = FieldTerm>) -> Self {
        let mut out: Vec<FieldTerm> = Vec::new();
        for t in terms {
            match out.iter_mut().find(|u| close(u.radial_exponent, t.radial_exponent)) {
                Some(u) => u.angular = u.angular.add(&t.angular),
                None => out.push(t),
            }
        }
        out.retain(|t| !t.angular.is_zero());
        out.sort_by(|a, b| cmp_complex(a.radial_exponent, b.radial_exponent));
        Self { side, terms: out }
    }

    pub fn term(side: Side, exponent: f64, angular: Angular) -> Self {
        Self::from_terms(side, [FieldTerm::new(re(exponent), angular)])
    }

    pub fn monomial(side: Side, exponent: Complex64, c: Complex64, h: Harmonic) -> Self {
        Self::from_terms(side, [FieldTerm::new(exponent, Angular::single(c, h))])
    }

    pub fn constant(side: Side, c: f64) -> Self {
        Self::term(side, 0.0, Angular::constant(c))
    }

    pub fn terms(&self) -> &[FieldTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    pub fn add(&self, other: &FieldSeries) -> Self {
        Self::from_terms(self.side, self.terms.iter().chain(other.terms.iter()).cloned())
    }

    pub fn sub(&self, other: &FieldSeries) -> Self {
        self.add(&other.scale(re(-1.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(
            self.side,
            self.terms
                .iter()
                .map(|t| FieldTerm::new(t.radial_exponent, t.angular.scale(s))),
        )
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(re(s))
    }

    /// Multiply by an angular factor without changing exponents.
    pub fn mul_angular(&self, a: &Angular) -> Self {
        Self::from_terms(
            self.side,
            self.terms
                .iter()
                .map(|t| FieldTerm::new(t.radial_exponent, t.angular.mul(a))),
        )
    }

    pub fn conj(&self) -> Self {
        Self::from_terms(
            self.side,
            self.terms
                .iter()
                .map(|t| FieldTerm::new(t.radial_exponent.conj(), t.angular.conj())),
        )
    }

    /// `a·f + conj(a)·conj(f)`: the real field carried by a complex mode.
    pub fn real_combination(&self, a: Complex64) -> Self {
        self.scale(a).add(&self.scale(a).conj())
    }

    pub fn evaluate(&self, r: f64, theta: f64) -> Result<Complex64> {
        if !(r > 0.0) {
            return Err(Error::RadiusNonPositive { r });
        }
        Ok(self.eval_unchecked(r, theta))
    }

    pub(crate) fn eval_unchecked(&self, r: f64, theta: f64) -> Complex64 {
        let lnr = r.ln();
        self.terms
            .iter()
            .map(|t| (t.radial_exponent * lnr).exp() * t.angular.eval(theta))
            .sum()
    }

    /// Terms with `Re λ < bound`.
    pub fn truncate_below(&self, bound: f64) -> Self {
        Self::from_terms(
            self.side,
            self.terms
                .iter()
                .filter(|t| t.radial_exponent.re < bound - MERGE_EPS)
                .cloned(),
        )
    }

    pub fn angular_at(&self, exponent: Complex64) -> Angular {
        self.terms
            .iter()
            .find(|t| close(t.radial_exponent, exponent))
            .map(|t| t.angular.clone())
            .unwrap_or_default()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|t| t.angular.max_abs()).fold(0.0, f64::max)
    }

    /// Restriction to the ray `θ = theta`.
    pub fn restrict(&self, theta: f64) -> RadialSeries {
        RadialSeries::from_pairs(
            self.terms
                .iter()
                .map(|t| (t.radial_exponent, t.angular.eval(theta))),
        )
    }

    /// Largest coefficient difference over terms with `Re λ < bound`.
    pub fn max_diff_below(&self, other: &FieldSeries, bound: f64) -> f64 {
        let a = self.truncate_below(bound);
        let b = other.truncate_below(bound);
        let mut worst: f64 = 0.0;
        for t in a.terms.iter() {
            worst = worst.max(t.angular.max_diff(&b.angular_at(t.radial_exponent)));
        }
        for t in b.terms.iter() {
            worst = worst.max(t.angular.max_diff(&a.angular_at(t.radial_exponent)));
        }
        worst
    }
}

/// `Σ c_k r^λ_k` on a single ray.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct RadialSeries {
    terms: Vec<(Complex64, Complex64)>,
}

impl RadialSeries {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Complex64, Complex64)>) -> Self {
        let mut out: Vec<(Complex64, Complex64)> = Vec::new();
        for (e, c) in pairs {
            match out.iter_mut().find(|(f, _)| close(*f, e)) {
                Some(slot) => slot.1 += c,
                None => out.push((e, c)),
            }
        }
        out.sort_by(|a, b| cmp_complex(a.0, b.0));
        Self { terms: out }
    }

    pub fn terms(&self) -> &[(Complex64, Complex64)] {
        &self.terms
    }

    pub fn coefficient_at(&self, exponent: Complex64) -> Complex64 {
        self.terms
            .iter()
            .find(|(e, _)| close(*e, exponent))
            .map(|(_, c)| *c)
            .unwrap_or_default()
    }

    pub fn add(&self, other: &RadialSeries) -> Self {
        Self::from_pairs(self.terms.iter().chain(other.terms.iter()).copied())
    }

    pub fn sub(&self, other: &RadialSeries) -> Self {
        Self::from_pairs(
            self.terms
                .iter()
                .copied()
                .chain(other.terms.iter().map(|&(e, c)| (e, -c))),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_pairs(self.terms.iter().map(|&(e, c)| (e, c * s)))
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        let lnr = r.ln();
        self.terms.iter().map(|(e, c)| c * (e * lnr).exp()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient among exponents with `Re λ < bound`.
    pub fn max_abs_below(&self, bound: f64) -> f64 {
        self.terms
            .iter()
            .filter(|(e, _)| e.re < bound - MERGE_EPS)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }

    /// First term whose coefficient exceeds `tol` times the largest one.
    pub fn leading(&self, tol: f64) -> Option<(Complex64, Complex64)> {
        let max = self.max_abs();
        self.terms.iter().copied().find(|(_, c)| c.norm() > tol * max && c.norm() > 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn canonical_signs() {
        let a = Angular::from_parts([(re(2.0), Harmonic::sin(-1.5)), (re(1.0), Harmonic::cos(-0.5))]);
        assert_eq!(a.parts()[0], (re(1.0), Harmonic::cos(0.5)));
        assert_eq!(a.parts()[1], (re(-2.0), Harmonic::sin(1.5)));
        assert!(Angular::sin(3.0, 0.0).is_zero());
        let b = Angular::from_parts([(re(1.0), Harmonic::cos(2.0)), (re(-1.0), Harmonic::cos(2.0))]);
        assert!(b.is_zero());
    }

    #[test]
    fn complex_frequencies_canonicalize() {
        let f = c64(0.0, -0.3);
        let a = Angular::single(re(1.0), Harmonic::new(Trig::Sin, f));
        assert_eq!(a.parts()[0].0, re(-1.0));
        assert_eq!(a.parts()[0].1.freq, c64(0.0, 0.3));
        let th = 0.7;
        assert!((a.eval(th) - (f * th).sin()).norm() < 1e-15);
    }

    #[test]
    fn product_to_sum() {
        let s = Angular::sin(1.0, 0.5);
        let sq = s.mul(&s);
        for th in [-2.9, -0.3, 0.8, 2.5] {
            let v = (th / 2.0f64).sin().powi(2);
            assert!((sq.eval(th).re - v).abs() < 1e-15);
        }
        let a = Angular::from_parts([(re(3.0), Harmonic::sin(0.5)), (re(-1.0), Harmonic::cos(1.5))]);
        let b = Angular::from_parts([(re(2.0), Harmonic::cos(2.0)), (re(0.5), Harmonic::sin(1.0))]);
        for th in [-3.0, -1.0, 0.2, 1.9] {
            assert!((a.mul(&b).eval(th) - a.eval(th) * b.eval(th)).norm() < 1e-14);
        }
    }

    #[test]
    fn evaluate_examples() {
        let one = FieldSeries::constant(Side::Upper, 1.0);
        assert_eq!(one.evaluate(5.0, 1.0).unwrap(), re(1.0));
        let f = FieldSeries::term(Side::Upper, 1.5, Angular::sin(1.0, 1.5));
        assert!((f.evaluate(4.0, PI).unwrap() - re(-8.0)).norm() < 1e-12);
        let g = 0.37;
        let osc = FieldSeries::monomial(Side::Upper, c64(0.0, g), re(1.0), Harmonic::cos(0.0));
        let r = (2.0 * PI / g).exp();
        assert!((osc.evaluate(r, 0.0).unwrap() - re(1.0)).norm() < 1e-12);
        assert_eq!(one.evaluate(0.0, 0.0), Err(Error::RadiusNonPositive { r: 0.0 }));
    }

    #[test]
    fn series_merge_and_sort() {
        let s = FieldSeries::from_terms(
            Side::Lower,
            [
                FieldTerm::new(re(2.0), Angular::cos(1.0, 2.0)),
                FieldTerm::new(re(0.5), Angular::sin(1.0, 0.5)),
                FieldTerm::new(re(2.0), Angular::cos(-1.0, 2.0)),
            ],
        );
        assert_eq!(s.terms().len(), 1);
        assert_eq!(s.terms()[0].radial_exponent, re(0.5));
    }

    #[test]
    fn conjugate_real_combination_is_real() {
        let f = FieldSeries::monomial(Side::Upper, c64(1.5, 0.2), c64(0.3, -1.1), Harmonic::new(Trig::Sin, c64(1.5, 0.2)));
        let real = f.real_combination(c64(0.7, 0.4));
        for (r, th) in [(0.3, 1.0), (2.0, -2.0)] {
            assert!(real.evaluate(r, th).unwrap().im.abs() < 1e-13);
        }
    }

    #[test]
    fn radial_restriction() {
        let f = FieldSeries::term(Side::Upper, 1.5, Angular::from_parts([(re(3.0), Harmonic::sin(0.5)), (re(-1.0), Harmonic::sin(1.5))]));
        let rs = f.restrict(PI);
        assert!((rs.coefficient_at(re(1.5)) - re(4.0)).norm() < 1e-14);
        assert!((rs.eval(0.25) - re(0.5)).norm() < 1e-14);
    }
}
