//! Zeros of the condition determinant in a real window.
//!
//! The real axis is scanned for sign changes and for dips of |det|. Each
//! candidate is resolved with contour moments
//! `t_k = (1/2πi)∮ (λ−c)^k det'/det dλ`: `t₀` counts the zeros inside the
//! circle and `t₁/t₀` locates their mean. The determinant is entire in λ
//! (row scaling is frozen at the centre), so the trapezoid rule on the circle
//! converges geometrically, and the moments stay accurate for zeros of high
//! order where |det| itself is at roundoff level.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use super::kappa::{classify, kappa_general, Case};
use super::system::{assemble_raw, determinant, determinant_derivative, row_scales, scale_rows, SPECIAL_LAMBDAS};
use crate::error::{Error, Result};
use crate::material::{BimaterialConfig, ProblemKind};

pub const SCAN_STEP: f64 = 0.01;
pub const ROOT_RESIDUAL_TOL: f64 = 1e-9;
const CONTOUR_RADIUS: f64 = 0.02;
const CONTOUR_POINTS: usize = 64;
const DEDUP: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Root {
    pub re: f64,
    pub im: f64,
    /// Order of the zero of the determinant.
    pub multiplicity: usize,
    /// `|det| / scale` at the root.
    pub residual: f64,
    /// `|d det/dλ| / scale` at the root.
    pub derivative: f64,
}

impl Root {
    pub fn lambda(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

struct Frozen<'a> {
    cfg: &'a BimaterialConfig,
    scales: Vec<f64>,
}

impl<'a> Frozen<'a> {
    fn at(cfg: &'a BimaterialConfig, center: Complex64) -> Result<Self> {
        Ok(Self { cfg, scales: row_scales(&assemble_raw(cfg, center)?) })
    }

    fn det(&self, z: Complex64) -> Result<Complex64> {
        let mut m = assemble_raw(self.cfg, z)?;
        scale_rows(&mut m, &self.scales);
        Ok(m.determinant())
    }
}

/// Moments `(t₀, t₁, t₂)` relative to `center`.
fn contour_moments(f: &Frozen, center: Complex64, rho: f64) -> Result<[Complex64; 3]> {
    let n = CONTOUR_POINTS;
    let w: Vec<Complex64> = (0..n).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)).collect();
    let mut vals = Vec::with_capacity(n);
    for wj in &w {
        vals.push(f.det(center + wj * rho)?);
    }
    // Taylor coefficients a_k ρ^k by DFT, then ρ e^{iφ} f'(z) = Σ k a_k e^{ikφ}
    let mut a = vec![Complex64::new(0.0, 0.0); n];
    for (k, ak) in a.iter_mut().enumerate() {
        let mut s = Complex64::new(0.0, 0.0);
        for (j, v) in vals.iter().enumerate() {
            s += v * w[(n - (k * j) % n) % n];
        }
        *ak = s / n as f64;
    }
    let mut t = [Complex64::new(0.0, 0.0); 3];
    for j in 0..n {
        let mut g = Complex64::new(0.0, 0.0);
        for (k, ak) in a.iter().enumerate().skip(1) {
            g += ak * (k as f64) * w[(k * j) % n];
        }
        let q = g / vals[j];
        let z = w[j] * rho;
        t[0] += q;
        t[1] += q * z;
        t[2] += q * z * z;
    }
    for x in t.iter_mut() {
        *x /= n as f64;
    }
    Ok(t)
}

/// Zeros inside the circle as `(location, order)`.
fn resolve(cfg: &BimaterialConfig, center: Complex64, rho0: f64) -> Result<Vec<(Complex64, usize)>> {
    let mut rho = rho0;
    for _ in 0..4 {
        let f = Frozen::at(cfg, center)?;
        let t = contour_moments(&f, center, rho)?;
        let m = t[0].re.round();
        if (t[0] - m).norm() > 0.05 || m < 0.0 {
            rho *= 0.6;
            continue;
        }
        let m = m as usize;
        if m == 0 {
            return Ok(vec![]);
        }
        let mean = t[1] / m as f64;
        let var = t[2] / m as f64 - mean * mean;
        if m == 1 {
            return Ok(vec![(polish(&f, center + mean)?, 1)]);
        }
        if var.norm().sqrt() < 1e-5 {
            return Ok(vec![(center + mean, m)]);
        }
        if m == 2 {
            let d = var.sqrt();
            return Ok(vec![
                (polish(&f, center + mean - d)?, 1),
                (polish(&f, center + mean + d)?, 1),
            ]);
        }
        rho *= 0.6;
    }
    Err(Error::RootRefinementFailed { re: center.re, im: center.im, residual: f64::NAN })
}

/// Secant iteration from a good start.
fn polish(f: &Frozen, z0: Complex64) -> Result<Complex64> {
    let (mut a, mut b) = (z0, z0 + 1e-7);
    let (mut fa, mut fb) = (f.det(a)?, f.det(b)?);
    for _ in 0..60 {
        if fb == fa {
            break;
        }
        let c = b - fb * (b - a) / (fb - fa);
        a = b;
        fa = fb;
        b = c;
        fb = f.det(b)?;
        if (b - a).norm() < 1e-15 * (1.0 + b.norm()) || fb.norm() == 0.0 {
            break;
        }
    }
    Ok(if (b - z0).norm() < 1e-3 { b } else { z0 })
}

fn refine_bracket(cfg: &BimaterialConfig, mut lo: f64, mut hi: f64) -> Result<f64> {
    let g = |x: f64| determinant(cfg, Complex64::new(x, 0.0)).map(|d| d.relative().re);
    let (mut glo, mut ghi) = (g(lo)?, g(hi)?);
    let mut side = 0i32;
    for _ in 0..200 {
        if hi - lo < 1e-15 {
            break;
        }
        // Illinois regula falsi
        let x = (lo * ghi - hi * glo) / (ghi - glo);
        let x = if x > lo && x < hi { x } else { 0.5 * (lo + hi) };
        let gx = g(x)?;
        if gx == 0.0 {
            return Ok(x);
        }
        if (gx > 0.0) == (ghi > 0.0) {
            hi = x;
            ghi = gx;
            if side == 1 {
                glo *= 0.5;
            }
            side = 1;
        } else {
            lo = x;
            glo = gx;
            if side == -1 {
                ghi *= 0.5;
            }
            side = -1;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn special_distance(x: Complex64) -> f64 {
    SPECIAL_LAMBDAS.iter().map(|s| (x - s).norm()).fold(f64::INFINITY, f64::min)
}

/// All zeros of the condition determinant with `Re λ` strictly inside
/// `window`, sorted by real then imaginary part.
pub fn find_roots(cfg: &BimaterialConfig, window: (f64, f64)) -> Result<Vec<Root>> {
    let (lo, hi) = window;
    if !(lo >= 0.0 && hi <= 4.0 + 1e-12 && lo < hi) {
        return Err(Error::InvalidWindow { lo, hi });
    }
    let step = SCAN_STEP.min((hi - lo) / 20.0);
    let n = ((hi - lo) / step).floor() as usize;
    let mut grid: Vec<Option<f64>> = Vec::with_capacity(n + 1);
    for i in 1..=n {
        let x = lo + i as f64 * step;
        if x >= hi - 1e-12 || special_distance(Complex64::new(x, 0.0)) < 0.4 * step {
            grid.push(None);
            continue;
        }
        grid.push(Some(determinant(cfg, Complex64::new(x, 0.0))?.relative().re));
    }
    let xs: Vec<f64> = (1..=n).map(|i| lo + i as f64 * step).collect();

    let mut found: Vec<(Complex64, usize)> = Vec::new();
    let radius_at = |c: f64| CONTOUR_RADIUS.min(0.45 * special_distance(Complex64::new(c, 0.0)));
    for i in 0..grid.len() {
        let Some(g) = grid[i] else { continue };
        if g == 0.0 {
            found.extend(resolve(cfg, Complex64::new(xs[i], 0.0), radius_at(xs[i]))?);
            continue;
        }
        if let Some(Some(gn)) = grid.get(i + 1) {
            if g * gn < 0.0 {
                let x = refine_bracket(cfg, xs[i], xs[i + 1])?;
                found.extend(resolve(cfg, Complex64::new(x, 0.0), radius_at(x))?);
            }
        }
        if i > 0 {
            if let (Some(gp), Some(Some(gn))) = (grid[i - 1], grid.get(i + 1)) {
                if g.abs() <= gp.abs() && g.abs() <= gn.abs() && g * gp > 0.0 && g * gn > 0.0 {
                    found.extend(resolve(cfg, Complex64::new(xs[i], 0.0), radius_at(xs[i]))?);
                }
            }
        }
    }

    if cfg.problem == ProblemKind::CsCs {
        let cl = classify(kappa_general(cfg)?.kappa)?;
        if cl.case == Case::ComplexOscillatory && cl.gamma >= 0.5 * CONTOUR_RADIUS {
            let rho = CONTOUR_RADIUS.min(0.9 * cl.gamma);
            let mut k = lo.floor();
            while k <= hi {
                let c = k + 0.5;
                if c > lo && c < hi {
                    for s in [1.0, -1.0] {
                        found.extend(resolve(cfg, Complex64::new(c, s * cl.gamma), rho)?);
                    }
                }
                k += 1.0;
            }
        }
    }

    let mut roots: Vec<Root> = Vec::new();
    for (mut z, m) in found {
        // det is real on the real axis, so conjugate-symmetric zeros this close to it are real
        if z.im.abs() < 1e-8 {
            z.im = 0.0;
        }
        if !(z.re > lo && z.re < hi) || special_distance(z) < 1e-6 {
            continue;
        }
        if let Some(r) = roots.iter_mut().find(|r| (r.lambda() - z).norm() < DEDUP) {
            r.multiplicity = r.multiplicity.max(m);
            continue;
        }
        let d = determinant(cfg, z)?;
        let residual = d.relative().norm();
        if residual > ROOT_RESIDUAL_TOL {
            return Err(Error::RootRefinementFailed { re: z.re, im: z.im, residual });
        }
        let derivative = determinant_derivative(cfg, z, 1e-6)?.norm() / d.scale;
        roots.push(Root { re: z.re, im: z.im, multiplicity: m, residual, derivative });
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::{validate_config, CoupleStressMaterial};

    #[test]
    fn homogeneous_window() {
        let c = BimaterialConfig::homogeneous_unit();
        let r = find_roots(&c, (1.2, 2.2)).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].re - 1.5).abs() < 1e-9 && r[0].im == 0.0);
        assert_eq!(r[0].multiplicity, 2);
    }

    #[test]
    fn oscillatory_pair() {
        let m = |g| CoupleStressMaterial::new(g, 0.0, 1.0, 0.0).unwrap();
        let c = validate_config(m(2.0), m(1.0), ProblemKind::CsCs).unwrap();
        let g = super::super::gamma_of(37.0 / 35.0);
        let r = find_roots(&c, (1.2, 1.8)).unwrap();
        assert_eq!(r.len(), 2, "{r:?}");
        assert!((r[0].lambda() - Complex64::new(1.5, -g)).norm() < 1e-10);
        assert!((r[1].lambda() - Complex64::new(1.5, g)).norm() < 1e-10);
    }

    #[test]
    fn window_validation() {
        let c = BimaterialConfig::homogeneous_unit();
        assert!(find_roots(&c, (1.0, 4.5)).is_err());
        assert!(find_roots(&c, (2.0, 1.0)).is_err());
    }
}
