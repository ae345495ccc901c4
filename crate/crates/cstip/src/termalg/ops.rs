use num_complex::Complex64;

use super::{re, Angular, FieldSeries, FieldTerm, Harmonic, RadialSeries, Trig};
use crate::error::Result;
use crate::material::CoupleStressMaterial;

fn map_terms(f: &FieldSeries, rule: impl Fn(Complex64, Complex64, Harmonic, &mut Vec<(Complex64, Harmonic)>), shift: f64) -> FieldSeries {
    FieldSeries::from_terms(
        f.side,
        f.terms().iter().map(|t| {
            let lam = t.radial_exponent;
            let mut parts = Vec::with_capacity(2 * t.angular.parts().len());
            for &(c, h) in t.angular.parts() {
                rule(lam, c, h, &mut parts);
            }
            FieldTerm::new(lam - shift, Angular::from_parts(parts))
        }),
    )
}

/// `∂/∂x₁`, using `∂₁ = cosθ ∂_r − (sinθ/r) ∂_θ` on each term.
pub fn d_x1(f: &FieldSeries) -> FieldSeries {
    map_terms(
        f,
        |lam, c, h, out| {
            let mu = h.freq;
            let c = c * 0.5;
            match h.kind {
                Trig::Sin => {
                    out.push((c * (lam - mu), Harmonic::new(Trig::Sin, mu + 1.0)));
                    out.push((c * (lam + mu), Harmonic::new(Trig::Sin, mu - 1.0)));
                }
                Trig::Cos => {
                    out.push((c * (lam + mu), Harmonic::new(Trig::Cos, mu - 1.0)));
                    out.push((c * (lam - mu), Harmonic::new(Trig::Cos, mu + 1.0)));
                }
            }
        },
        1.0,
    )
}

/// `∂/∂x₂`, using `∂₂ = sinθ ∂_r + (cosθ/r) ∂_θ` on each term.
pub fn d_x2(f: &FieldSeries) -> FieldSeries {
    map_terms(
        f,
        |lam, c, h, out| {
            let mu = h.freq;
            let c = c * 0.5;
            match h.kind {
                Trig::Sin => {
                    out.push((c * (lam + mu), Harmonic::new(Trig::Cos, mu - 1.0)));
                    out.push((-c * (lam - mu), Harmonic::new(Trig::Cos, mu + 1.0)));
                }
                Trig::Cos => {
                    out.push((c * (lam - mu), Harmonic::new(Trig::Sin, mu + 1.0)));
                    out.push((-c * (lam + mu), Harmonic::new(Trig::Sin, mu - 1.0)));
                }
            }
        },
        1.0,
    )
}

pub fn laplacian(f: &FieldSeries) -> FieldSeries {
    map_terms(f, |lam, c, h, out| out.push((c * (lam * lam - h.freq * h.freq), h)), 2.0)
}

/// First and second Cartesian derivatives of a displacement series.
#[derive(Clone, Debug)]
pub struct Derivatives {
    pub w1: FieldSeries,
    pub w2: FieldSeries,
    pub w11: FieldSeries,
    pub w12: FieldSeries,
    pub w22: FieldSeries,
}

impl Derivatives {
    pub fn of(w: &FieldSeries) -> Self {
        let w1 = d_x1(w);
        let w2 = d_x2(w);
        let w11 = d_x1(&w1);
        let w12 = d_x2(&w1);
        let w22 = d_x2(&w2);
        Self { w1, w2, w11, w12, w22 }
    }
}

#[derive(Clone, Debug)]
pub struct KinematicSeries {
    pub phi1: FieldSeries,
    pub phi2: FieldSeries,
    pub eps13: FieldSeries,
    pub eps23: FieldSeries,
    pub chi11: FieldSeries,
    pub chi12: FieldSeries,
    pub chi21: FieldSeries,
    pub chi22: FieldSeries,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KinematicState {
    pub phi1: f64,
    pub phi2: f64,
    pub eps13: f64,
    pub eps23: f64,
    pub chi11: f64,
    pub chi12: f64,
    pub chi21: f64,
    pub chi22: f64,
}

pub fn kinematics(w: &FieldSeries) -> KinematicSeries {
    let d = Derivatives::of(w);
    let half = re(0.5);
    let eps13 = d.w1.scale(half);
    let eps23 = d.w2.scale(half);
    let chi11 = d.w12.scale(half);
    KinematicSeries {
        phi1: eps23.clone(),
        phi2: eps13.scale(re(-1.0)),
        eps13,
        eps23,
        chi22: chi11.scale(re(-1.0)),
        chi11,
        chi12: d.w22.scale(half),
        chi21: d.w11.scale(re(-0.5)),
    }
}

impl KinematicSeries {
    /// Real part of every component at `(r, θ)`.
    pub fn at(&self, r: f64, theta: f64) -> Result<KinematicState> {
        let v = |s: &FieldSeries| s.evaluate(r, theta).map(|z| z.re);
        Ok(KinematicState {
            phi1: v(&self.phi1)?,
            phi2: v(&self.phi2)?,
            eps13: v(&self.eps13)?,
            eps23: v(&self.eps23)?,
            chi11: v(&self.chi11)?,
            chi12: v(&self.chi12)?,
            chi21: v(&self.chi21)?,
            chi22: v(&self.chi22)?,
        })
    }
}

/// Stress series. `p3` and `q1` are the reduced tractions on a surface with
/// normal `+e₂`, valid on any ray `θ = const` through the tip.
#[derive(Clone, Debug)]
pub struct StressSeries {
    pub sigma13: FieldSeries,
    pub sigma23: FieldSeries,
    pub mu11: FieldSeries,
    pub mu12: FieldSeries,
    pub mu21: FieldSeries,
    pub mu22: FieldSeries,
    pub tau13: FieldSeries,
    pub tau23: FieldSeries,
    pub p3: FieldSeries,
    pub q1: FieldSeries,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StressState {
    pub sigma13: f64,
    pub sigma23: f64,
    pub mu11: f64,
    pub mu12: f64,
    pub mu21: f64,
    pub mu22: f64,
    pub tau13: f64,
    pub tau23: f64,
    pub p3: f64,
    pub q1: f64,
}

pub fn stress(w: &FieldSeries, m: &CoupleStressMaterial) -> StressSeries {
    let d = Derivatives::of(w);
    stress_from(&d, m)
}

pub(crate) fn stress_from(d: &Derivatives, m: &CoupleStressMaterial) -> StressSeries {
    let g = m.g;
    let gl2 = m.g * m.l * m.l;
    let eta = m.eta;
    let mu11 = d.w12.scale_re(gl2 * (1.0 + eta));
    let q1 = d.w22.sub(&d.w11.scale_re(eta)).scale_re(gl2);
    let inner = d.w11.scale_re(2.0 + eta).add(&d.w22);
    let p3 = d.w2.scale_re(g).sub(&d_x2(&inner).scale_re(0.5 * gl2));
    StressSeries {
        sigma13: d.w1.scale_re(g),
        sigma23: d.w2.scale_re(g),
        mu22: mu11.scale_re(-1.0),
        mu11,
        mu12: d.w22.scale_re(eta).sub(&d.w11).scale_re(gl2),
        mu21: q1.clone(),
        tau13: laplacian(&d.w1).scale_re(-0.5 * gl2),
        tau23: laplacian(&d.w2).scale_re(-0.5 * gl2),
        p3,
        q1,
    }
}

impl StressSeries {
    pub fn at(&self, r: f64, theta: f64) -> Result<StressState> {
        let v = |s: &FieldSeries| s.evaluate(r, theta).map(|z| z.re);
        Ok(StressState {
            sigma13: v(&self.sigma13)?,
            sigma23: v(&self.sigma23)?,
            mu11: v(&self.mu11)?,
            mu12: v(&self.mu12)?,
            mu21: v(&self.mu21)?,
            mu22: v(&self.mu22)?,
            tau13: v(&self.tau13)?,
            tau23: v(&self.tau23)?,
            p3: v(&self.p3)?,
            q1: v(&self.q1)?,
        })
    }
}

/// `(p₃, q₁)` restricted to the ray `θ = theta`.
pub fn reduced_tractions(
    w: &FieldSeries,
    m: &CoupleStressMaterial,
    theta: f64,
) -> (RadialSeries, RadialSeries) {
    let s = stress(w, m);
    (s.p3.restrict(theta), s.q1.restrict(theta))
}

/// `Δw − (l²/2)Δ²w`; plain `Δw` when `l = 0`.
pub fn pde_residual(w: &FieldSeries, m: &CoupleStressMaterial) -> FieldSeries {
    let lap = laplacian(w);
    if m.is_classical() {
        return lap;
    }
    lap.sub(&laplacian(&lap).scale_re(0.5 * m.l * m.l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::termalg::{Angular, Side};
    use std::f64::consts::PI;

    fn u() -> Side {
        Side::Upper
    }

    #[test]
    fn derivative_examples() {
        let x1 = FieldSeries::term(u(), 1.0, Angular::cos(1.0, 1.0));
        let d = d_x1(&x1);
        assert_eq!(d.terms().len(), 1);
        assert!((d.evaluate(3.0, 0.4).unwrap() - re(1.0)).norm() < 1e-15);
        assert!(d_x2(&x1).is_zero());
        let q = FieldSeries::term(u(), 2.0, Angular::cos(1.0, 2.0));
        let dq = d_x1(&q);
        assert_eq!(dq, FieldSeries::term(u(), 1.0, Angular::cos(2.0, 1.0)));
    }

    #[test]
    fn laplacian_examples() {
        assert!(laplacian(&FieldSeries::term(u(), 0.5, Angular::sin(1.0, 0.5))).is_zero());
        assert!(laplacian(&FieldSeries::term(u(), 2.0, Angular::cos(1.0, 2.0))).is_zero());
        let w = FieldSeries::term(u(), 1.5, Angular::sin(3.0, 0.5).add(&Angular::sin(-1.0, 1.5)));
        assert_eq!(laplacian(&w), FieldSeries::term(u(), -0.5, Angular::sin(6.0, 0.5)));
    }

    #[test]
    fn kinematics_examples() {
        let x2 = FieldSeries::term(u(), 1.0, Angular::sin(1.0, 1.0));
        let k = kinematics(&x2).at(0.7, 1.1).unwrap();
        assert!((k.phi1 - 0.5).abs() < 1e-15 && (k.eps23 - 0.5).abs() < 1e-15);
        assert_eq!((k.chi11, k.chi12, k.chi21, k.chi22), (0.0, 0.0, 0.0, 0.0));

        let xy = FieldSeries::term(u(), 2.0, Angular::sin(1.0, 2.0));
        let k = kinematics(&xy).at(0.3, -2.0).unwrap();
        assert!((k.chi11 - 1.0).abs() < 1e-14 && k.chi12.abs() < 1e-14 && k.chi21.abs() < 1e-14);

        let c = kinematics(&FieldSeries::constant(u(), 4.0));
        assert!(c.phi1.is_zero() && c.chi21.is_zero() && c.eps13.is_zero());
    }

    #[test]
    fn stress_examples() {
        let m = CoupleStressMaterial::new(2.5, 0.0, 0.7, 0.3).unwrap();
        let x2 = FieldSeries::term(u(), 1.0, Angular::sin(1.0, 1.0));
        let s = stress(&x2, &m);
        assert!((s.sigma23.evaluate(1.3, 0.2).unwrap() - re(2.5)).norm() < 1e-14);
        assert!(s.mu11.is_zero() && s.mu12.is_zero() && s.tau13.is_zero() && s.tau23.is_zero());
        let (p3, q1) = reduced_tractions(&x2, &m, PI);
        assert!((p3.eval(0.4) - re(2.5)).norm() < 1e-14 && q1.max_abs() == 0.0);

        let unit = CoupleStressMaterial::unit(1.0);
        let w = FieldSeries::term(u(), 1.5, Angular::sin(3.0, 0.5).add(&Angular::sin(-1.0, 1.5)));
        let s = stress(&w, &unit);
        let t = s.tau23.restrict(0.0);
        assert!((t.coefficient_at(re(-1.5)) - re(-1.5)).norm() < 1e-14);

        let harm = FieldSeries::term(u(), 2.0, Angular::cos(1.0, 2.0));
        let s = stress(&harm, &m);
        assert!(s.tau13.is_zero() && s.tau23.is_zero());
        assert!(pde_residual(&harm, &m).is_zero());
    }

    #[test]
    fn pde_residual_classical() {
        let cl = CoupleStressMaterial::classical(1.0, 0.0).unwrap();
        assert!(pde_residual(&FieldSeries::term(u(), 0.5, Angular::sin(1.0, 0.5)), &cl).is_zero());
    }

    #[test]
    fn antiplane_identities_structural() {
        let w = FieldSeries::term(u(), 2.5, Angular::sin(0.3, 2.5).add(&Angular::cos(1.2, 0.5)));
        let k = kinematics(&w);
        assert_eq!(k.phi1, k.eps23);
        assert_eq!(k.phi2, k.eps13.scale_re(-1.0));
        assert_eq!(k.chi22, k.chi11.scale_re(-1.0));
    }
}
