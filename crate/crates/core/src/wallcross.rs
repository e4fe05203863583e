//! Wall-crossing automorphisms `x ↦ x·f^{e_x}`, `y ↦ y·f^{e_y}` with
//! `f = 1 + Σ c_k q^k` a power series in a single monomial, and an
//! order-by-order solver that recovers `f` from the superpotentials on the
//! two sides of a wall.

use num_traits::{One, Zero};

use crate::novikov::{qi, Monomial, NovikovError, NovikovSeries, Rat, ValuationMap, Q};
use crate::superpotential::{build, SurfaceSpec};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WallCrossError {
    #[error("no wall function of this shape relates the two series (order {order})")]
    Inconsistent { order: usize },
    #[error("coefficient of order {order} is not determined")]
    Underdetermined { order: usize },
    #[error("wall monomial {0} must have positive valuation")]
    InvalidWallMonomial(Monomial),
    #[error(transparent)]
    Series(#[from] NovikovError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallTransform {
    pub wall_monomial: Monomial,
    /// `c_1, c_2, …` of `f = 1 + Σ c_k q^k`.
    pub fn_coeffs: Vec<Rat>,
    pub exp_x: i64,
    pub exp_y: i64,
}

impl WallTransform {
    pub fn new(wall_monomial: Monomial, fn_coeffs: Vec<Rat>, exp_x: i64, exp_y: i64) -> Result<WallTransform, WallCrossError> {
        if wall_monomial.t.coeff_a < qi(0)
            || wall_monomial.t.coeff_b < qi(0)
            || wall_monomial.t.is_zero()
        {
            return Err(WallCrossError::InvalidWallMonomial(wall_monomial));
        }
        Ok(WallTransform { wall_monomial, fn_coeffs, exp_x, exp_y })
    }

    pub fn function(&self, nu: ValuationMap, cutoff: Q) -> NovikovSeries {
        crate::novikov::one_plus(&self.wall_monomial, &self.fn_coeffs, nu, cutoff)
    }

    /// Whether `q` is fixed by the transform, which makes negating the
    /// exponents an inverse.
    pub fn fixes_wall_monomial(&self) -> bool {
        self.wall_monomial.xe * self.exp_x + self.wall_monomial.ye * self.exp_y == 0
    }

    /// The transform `x ↦ x·f^{-e_x}`, `y ↦ y·f^{-e_y}`, inverse to `self`
    /// when [`fixes_wall_monomial`](Self::fixes_wall_monomial) holds.
    pub fn inverse(&self) -> Option<WallTransform> {
        self.fixes_wall_monomial().then(|| WallTransform {
            exp_x: -self.exp_x,
            exp_y: -self.exp_y,
            ..self.clone()
        })
    }

    pub fn apply(&self, s: &NovikovSeries) -> Result<NovikovSeries, WallCrossError> {
        apply(self, s)
    }
}

pub(crate) fn apply_series(f: &NovikovSeries, exp_x: i64, exp_y: i64, s: &NovikovSeries) -> Result<NovikovSeries, NovikovError> {
    let (nu, c) = (s.nu(), s.cutoff());
    let img_x = if exp_x == 0 { NovikovSeries::x(nu, c) } else { &NovikovSeries::x(nu, c) * &f.pow(exp_x)? };
    let img_y = if exp_y == 0 { NovikovSeries::y(nu, c) } else { &NovikovSeries::y(nu, c) * &f.pow(exp_y)? };
    s.substitute(&img_x, &img_y)
}

/// `s(x·f^{e_x}, y·f^{e_y})`.
pub fn apply(t: &WallTransform, s: &NovikovSeries) -> Result<NovikovSeries, WallCrossError> {
    let f = t.function(s.nu(), s.cutoff());
    Ok(apply_series(&f, t.exp_x, t.exp_y, s)?)
}

/// Finds `c_1, …, c_n` with `apply(f, w_dst) = w_src`.
///
/// At order `k` the unknown `c_k` first shows up at valuation `v_k`, the
/// smallest `val(t) + k·val(q)` over terms `t = x^a y^b` of `w_dst` with
/// `a·e_x + b·e_y ≠ 0`. Below `v_k` the residual must already vanish; on
/// `[v_k, v_k + val(q))` it is linear in `c_k`.
pub fn solve_wall_function(
    w_src: &NovikovSeries,
    w_dst: &NovikovSeries,
    wall_monomial: &Monomial,
    exp_x: i64,
    exp_y: i64,
    max_order: usize,
) -> Result<Vec<Rat>, WallCrossError> {
    let nu = w_dst.nu();
    let qv = nu.of(&wall_monomial.t);
    if qv <= qi(0) {
        return Err(WallCrossError::InvalidWallMonomial(*wall_monomial));
    }
    let cutoff = w_src.cutoff().min(w_dst.cutoff());
    let affected: Vec<(Q, Monomial, Rat)> = w_dst
        .iter_val()
        .filter_map(|(v, m, c)| {
            let w = m.xe * exp_x + m.ye * exp_y;
            (w != 0).then(|| (v, *m, c * &Rat::from_integer(w)))
        })
        .collect();
    let Some(v0) = affected.iter().map(|a| a.0).min() else {
        return Err(WallCrossError::Underdetermined { order: 1 });
    };

    let mut coeffs: Vec<Rat> = Vec::with_capacity(max_order);
    for k in 1..=max_order {
        let vk = v0 + qv * qi(k as i64);
        if vk >= cutoff {
            return Err(WallCrossError::Underdetermined { order: k });
        }
        let f = crate::novikov::one_plus(wall_monomial, &coeffs, nu, cutoff);
        let residual = apply_series(&f, exp_x, exp_y, w_dst)? - w_src;
        let hi = (vk + qv).min(residual.cutoff());
        if residual.iter_val().any(|(v, _, _)| v < vk) {
            return Err(WallCrossError::Inconsistent { order: k });
        }
        let qk = wall_monomial.pow(k as i64);
        let lin = NovikovSeries::from_terms(
            affected.iter().map(|(_, m, c)| (*m * qk, c.clone())),
            nu,
            hi,
        );
        let window: Vec<Monomial> = residual
            .iter_val()
            .chain(lin.iter_val())
            .filter(|(v, _, _)| *v < hi)
            .map(|(_, m, _)| *m)
            .collect();
        let mut ck: Option<Rat> = None;
        let mut solvable = true;
        for m in &window {
            let (d, l) = (residual.coeff(m), lin.coeff(m));
            if l.is_zero() {
                if !d.is_zero() {
                    return Err(WallCrossError::Inconsistent { order: k });
                }
                continue;
            }
            let c = -(&d / &l);
            match &ck {
                None => ck = Some(c),
                Some(prev) if *prev != c => solvable = false,
                _ => {}
            }
        }
        if !solvable {
            return Err(WallCrossError::Inconsistent { order: k });
        }
        match ck {
            Some(c) => coeffs.push(c),
            None => return Err(WallCrossError::Underdetermined { order: k }),
        }
    }
    Ok(coeffs)
}

/// The F₃ wall monomial `T^A/y`.
pub fn f3_wall_monomial() -> Monomial {
    Monomial::ab(qi(1), qi(0), 0, -1)
}

fn gluing_order(nu: ValuationMap, cutoff: Q) -> usize {
    let qa = nu.nu_a();
    let mut n = 0;
    while qa * qi(n as i64 + 1) < cutoff {
        n += 1;
    }
    n
}

/// Solves for the F₃ wall function and checks it against the glued chart:
/// `u·v = x′/x = 1 + T^A w` with `(x, y) = (v⁻¹, w⁻¹)`, `x′ = u`, and
/// `W_right(x′, y) = W_left(x, y)` after the substitution.
pub fn verify_gluing(nu: ValuationMap, cutoff: Q) -> bool {
    let Ok(left) = build(SurfaceSpec::f3_left(), nu, cutoff) else { return false };
    let Ok(right) = build(SurfaceSpec::f3_right(), nu, cutoff) else { return false };
    match solve_wall_function(&right, &left, &f3_wall_monomial(), 1, 0, gluing_order(nu, cutoff)) {
        Ok(c) => verify_gluing_with(&c, nu, cutoff),
        Err(_) => false,
    }
}

/// [`verify_gluing`] with the coefficients of `h` supplied by the caller.
pub fn verify_gluing_with(coeffs: &[Rat], nu: ValuationMap, cutoff: Q) -> bool {
    let check = || -> Result<bool, WallCrossError> {
        let left = build(SurfaceSpec::f3_left(), nu, cutoff).map_err(|_| WallCrossError::Underdetermined { order: 0 })?;
        let right = build(SurfaceSpec::f3_right(), nu, cutoff).map_err(|_| WallCrossError::Underdetermined { order: 0 })?;
        let t = WallTransform::new(f3_wall_monomial(), coeffs.to_vec(), 1, 0)?;
        let h = t.function(nu, cutoff);
        // u = x′ = x·h and v = x⁻¹.
        let u = &NovikovSeries::x(nu, cutoff) * &h;
        let v = NovikovSeries::monomial(Rat::one(), Monomial::x().inverse(), nu, cutoff);
        let w = NovikovSeries::monomial(Rat::one(), Monomial::y().inverse(), nu, cutoff);
        let t_a = NovikovSeries::monomial(Rat::one(), Monomial::ab(qi(1), qi(0), 0, 0), nu, cutoff);
        let expected = NovikovSeries::one(nu, cutoff) + &t_a * &w;
        let uv = &u * &v;
        if !uv.eq_up_to_cutoff(&expected, cutoff) {
            return Ok(false);
        }
        let moved = t.apply(&left)?;
        Ok(moved.eq_up_to_cutoff(&right, moved.cutoff().min(right.cutoff())))
    };
    check().unwrap_or(false)
}
