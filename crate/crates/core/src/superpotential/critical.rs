//! Numerical critical points of a superpotential at fixed real `T`, `A`, `B`.
//!
//! Newton is run on the truncated series from a grid of starts. A converged
//! point is kept only if doubling the cutoff moves neither the value nor the
//! gradient by more than `tol`; otherwise the point is polished at the larger
//! cutoff and tested again, up to `160·ν_B`.

use crate::novikov::{qi, NovikovSeries, ValuationMap, Q};

use super::{build, SuperpotentialError, SurfaceSpec};

/// A Laurent polynomial in `x`, `y` with real coefficients.
#[derive(Clone, Debug)]
pub struct NumericPotential {
    terms: Vec<(f64, i64, i64)>,
}

fn powi(v: f64, e: i64) -> f64 {
    v.powi(e as i32)
}

impl NumericPotential {
    /// Specializes `T^{aA+bB}` to `t^{a·area_a + b·area_b}`.
    pub fn from_series(s: &NovikovSeries, t: f64, area_a: f64, area_b: f64) -> NumericPotential {
        let f = |v: Q| *v.numer() as f64 / *v.denom() as f64;
        let terms = s
            .iter()
            .map(|(m, c)| {
                let e = f(m.t.coeff_a) * area_a + f(m.t.coeff_b) * area_b;
                (c.to_f64() * t.powf(e), m.xe, m.ye)
            })
            .collect();
        NumericPotential { terms }
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.terms.iter().map(|&(c, i, j)| c * powi(x, i) * powi(y, j)).sum()
    }

    pub fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        let mut g = [0.0; 2];
        for &(c, i, j) in &self.terms {
            g[0] += c * i as f64 * powi(x, i - 1) * powi(y, j);
            g[1] += c * j as f64 * powi(x, i) * powi(y, j - 1);
        }
        g
    }

    pub fn hessian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        let mut h = [[0.0; 2]; 2];
        for &(c, i, j) in &self.terms {
            let (fi, fj) = (i as f64, j as f64);
            h[0][0] += c * fi * (fi - 1.0) * powi(x, i - 2) * powi(y, j);
            h[0][1] += c * fi * fj * powi(x, i - 1) * powi(y, j - 1);
            h[1][1] += c * fj * (fj - 1.0) * powi(x, i) * powi(y, j - 2);
        }
        h[1][0] = h[0][1];
        h
    }
}

fn norm(g: [f64; 2]) -> f64 {
    g[0].abs().max(g[1].abs())
}

/// Damped Newton on the gradient. Returns the last iterate, or `None` if
/// the iteration leaves the domain or meets a singular Hessian.
fn newton(w: &NumericPotential, start: (f64, f64)) -> Option<(f64, f64)> {
    let (mut x, mut y) = start;
    let mut g = w.gradient(x, y);
    let mut gn = norm(g);
    for _ in 0..200 {
        if !gn.is_finite() || x == 0.0 || y == 0.0 {
            return None;
        }
        if gn == 0.0 {
            break;
        }
        let h = w.hessian(x, y);
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dx = -(h[1][1] * g[0] - h[0][1] * g[1]) / det;
        let dy = -(h[0][0] * g[1] - h[1][0] * g[0]) / det;
        let mut lam = 1.0;
        let (nx, ny, ng) = loop {
            let (nx, ny) = (x + lam * dx, y + lam * dy);
            let ng = w.gradient(nx, ny);
            if norm(ng) < gn || lam < 1e-6 {
                break (nx, ny, ng);
            }
            lam *= 0.5;
        };
        let step = (lam * dx).abs().max((lam * dy).abs());
        x = nx;
        y = ny;
        g = ng;
        gn = norm(g);
        if step <= 1e-15 * (1.0 + x.abs().max(y.abs())) {
            break;
        }
    }
    (gn.is_finite() && x.is_finite() && y.is_finite()).then_some((x, y))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint {
    pub x: f64,
    pub y: f64,
    pub value: f64,
    pub residual: f64,
    /// Cutoff of the truncation the point was accepted at.
    pub cutoff: Q,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalReport {
    /// Distinct critical values, ascending.
    pub values: Vec<f64>,
    pub points: Vec<CriticalPoint>,
    /// Converged starts thrown away because the series tail was too large.
    pub rejected: usize,
    /// Set when fewer than four distinct values were found.
    pub flagged: bool,
}

struct Ladder {
    spec: SurfaceSpec,
    nu: ValuationMap,
    t: f64,
    a: f64,
    b: f64,
    levels: Vec<(Q, NumericPotential)>,
}

impl Ladder {
    fn level(&mut self, i: usize) -> Result<&NumericPotential, SuperpotentialError> {
        while self.levels.len() <= i {
            let c = self.nu.default_cutoff() * qi(1 << self.levels.len());
            let s = build(self.spec, self.nu, c)?;
            let w = NumericPotential::from_series(&s, self.t, self.a, self.b);
            self.levels.push((c, w));
        }
        Ok(&self.levels[i].1)
    }
}

/// Critical points of the superpotential specialized at `T = t` with areas
/// `A = area_a`, `B = area_b` (which also fix the truncation order).
pub fn critical_values_numeric(
    spec: SurfaceSpec,
    t: f64,
    area_a: Q,
    area_b: Q,
    tol: f64,
) -> Result<CriticalReport, SuperpotentialError> {
    if !(t > 0.0 && t < 1.0) {
        return Err(SuperpotentialError::InvalidParameter(format!("T = {t} must lie in (0, 1)")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(SuperpotentialError::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let nu = ValuationMap::new(area_a, area_b)?;
    let f = |v: Q| *v.numer() as f64 / *v.denom() as f64;
    let mut ladder = Ladder { spec, nu, t, a: f(area_a), b: f(area_b), levels: Vec::new() };
    // Cutoffs 20, 40, 80, 160 times ν_B.
    const TOP: usize = 3;

    let mut starts = Vec::new();
    let mags: Vec<f64> = (0..=6).map(|k| t.powf(0.25 * k as f64 * ladder.b)).collect();
    for &mx in &mags {
        for &my in &mags {
            for (sx, sy) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                starts.push((sx * mx, sy * my));
            }
        }
    }

    let mut converged = 0;
    let mut rejected = 0;
    let mut points: Vec<CriticalPoint> = Vec::new();
    'start: for s in starts {
        let w0 = ladder.level(0)?;
        let Some(mut p) = newton(w0, s) else { continue };
        if norm(w0.gradient(p.0, p.1)) > tol {
            continue;
        }
        converged += 1;
        for i in 0..TOP {
            ladder.level(i + 1)?;
            let (lo, hi) = (&ladder.levels[i].1, &ladder.levels[i + 1].1);
            let dv = (lo.value(p.0, p.1) - hi.value(p.0, p.1)).abs();
            let (gl, gh) = (lo.gradient(p.0, p.1), hi.gradient(p.0, p.1));
            let dg = norm([gl[0] - gh[0], gl[1] - gh[1]]);
            if dv < tol && dg < tol {
                let cp = CriticalPoint {
                    x: p.0,
                    y: p.1,
                    value: lo.value(p.0, p.1),
                    residual: norm(gl),
                    cutoff: ladder.levels[i].0,
                };
                let near = (10.0 * tol).max(1e-9);
                if !points.iter().any(|q| (q.x - cp.x).abs().max((q.y - cp.y).abs()) < near) {
                    points.push(cp);
                }
                continue 'start;
            }
            match newton(hi, p) {
                Some(np) if norm(hi.gradient(np.0, np.1)) <= tol => p = np,
                _ => break,
            }
        }
        rejected += 1;
    }
    if converged == 0 {
        return Err(SuperpotentialError::NoConvergence);
    }
    points.sort_by(|a, b| a.value.total_cmp(&b.value));
    let mut values: Vec<f64> = Vec::new();
    for p in &points {
        if values.last().is_none_or(|v| (p.value - v).abs() >= 10.0 * tol) {
            values.push(p.value);
        }
    }
    let flagged = values.len() < 4;
    Ok(CriticalReport { values, points, rejected, flagged })
}
