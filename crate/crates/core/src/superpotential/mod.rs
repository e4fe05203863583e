//! Superpotentials of F₀, F₂, F₃ and F₄ as truncated series.
//!
//! Infinite families are emitted term by term until the valuation reaches
//! the cutoff. Closed rational forms are expanded through
//! [`NovikovSeries::invert_unit`] so that they can be compared with the
//! series forms.

mod critical;

use std::fmt;
use std::str::FromStr;

use num_traits::One;

use crate::novikov::{q, qi, series, Monomial, NovikovError, NovikovSeries, Rat, ValuationMap, Q};

pub use critical::{critical_values_numeric, CriticalPoint, CriticalReport, NumericPotential};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SuperpotentialError {
    #[error("chamber {chamber} is not defined for {surface}")]
    IllegalChamber { surface: Surface, chamber: Chamber },
    #[error("no closed rational form is known for {0}")]
    NoClosedForm(SurfaceSpec),
    #[error("Newton iteration did not converge from any start point")]
    NoConvergence,
    #[error("exponent matrix has determinant {0}, not ±1")]
    NonUnimodular(i64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Series(#[from] NovikovError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Surface {
    F0,
    F2,
    F3,
    F4,
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Surface::F0 => "F0",
            Surface::F2 => "F2",
            Surface::F3 => "F3",
            Surface::F4 => "F4",
        })
    }
}

impl FromStr for Surface {
    type Err = String;
    fn from_str(s: &str) -> Result<Surface, String> {
        match s.to_ascii_lowercase().as_str() {
            "f0" => Ok(Surface::F0),
            "f2" => Ok(Surface::F2),
            "f3" => Ok(Surface::F3),
            "f4" => Ok(Surface::F4),
            _ => Err(format!("unknown surface `{s}` (expected f0, f2, f3 or f4)")),
        }
    }
}

/// Which chart of the mirror a superpotential is written in.
///
/// For F₄, `Default` is the chart of the infinite-series theorem,
/// `F4Series` the chart of the series with closed rational form,
/// `F4Alt` the chart obtained after two nodal trades, and `Chamber(k)` the
/// closed chamber formulas of the scattering diagram (`|k| ≤ 2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chamber {
    Default,
    F3Left,
    F3Right,
    F4Series,
    F4Alt,
    Chamber(i64),
    PlusInfinity,
    MinusInfinity,
}

impl fmt::Display for Chamber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chamber::Default => f.write_str("default"),
            Chamber::F3Left => f.write_str("left"),
            Chamber::F3Right => f.write_str("right"),
            Chamber::F4Series => f.write_str("series"),
            Chamber::F4Alt => f.write_str("alt"),
            Chamber::Chamber(k) => write!(f, "chamber_{k}"),
            Chamber::PlusInfinity => f.write_str("plus_infinity"),
            Chamber::MinusInfinity => f.write_str("minus_infinity"),
        }
    }
}

impl FromStr for Chamber {
    type Err = String;
    fn from_str(s: &str) -> Result<Chamber, String> {
        let l = s.to_ascii_lowercase();
        Ok(match l.as_str() {
            "default" => Chamber::Default,
            "left" | "f3_left" => Chamber::F3Left,
            "right" | "f3_right" => Chamber::F3Right,
            "series" | "f4_series" => Chamber::F4Series,
            "alt" | "f4_alt" => Chamber::F4Alt,
            "plus_infinity" | "plus" | "+inf" => Chamber::PlusInfinity,
            "minus_infinity" | "minus" | "-inf" => Chamber::MinusInfinity,
            _ => {
                let k = l
                    .strip_prefix("chamber_")
                    .or_else(|| l.strip_prefix("chamber"))
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| format!("unknown chamber `{s}`"))?;
                Chamber::Chamber(k)
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceSpec {
    pub surface: Surface,
    pub chamber: Chamber,
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.surface, self.chamber)
    }
}

impl SurfaceSpec {
    pub fn new(surface: Surface, chamber: Chamber) -> Result<SurfaceSpec, SuperpotentialError> {
        use self::Chamber as C;
        let ok = match surface {
            Surface::F0 | Surface::F2 => chamber == C::Default,
            Surface::F3 => matches!(chamber, C::F3Left | C::F3Right),
            Surface::F4 => match chamber {
                C::Default | C::F4Series | C::F4Alt | C::PlusInfinity | C::MinusInfinity => true,
                C::Chamber(k) => (-2..=2).contains(&k),
                _ => false,
            },
        };
        if ok {
            Ok(SurfaceSpec { surface, chamber })
        } else {
            Err(SuperpotentialError::IllegalChamber { surface, chamber })
        }
    }

    pub fn f0() -> SurfaceSpec {
        SurfaceSpec { surface: Surface::F0, chamber: Chamber::Default }
    }

    pub fn f2() -> SurfaceSpec {
        SurfaceSpec { surface: Surface::F2, chamber: Chamber::Default }
    }

    pub fn f3_left() -> SurfaceSpec {
        SurfaceSpec { surface: Surface::F3, chamber: Chamber::F3Left }
    }

    pub fn f3_right() -> SurfaceSpec {
        SurfaceSpec { surface: Surface::F3, chamber: Chamber::F3Right }
    }

    pub fn f4(chamber: Chamber) -> Result<SurfaceSpec, SuperpotentialError> {
        SurfaceSpec::new(Surface::F4, chamber)
    }

    pub fn f4_series() -> SurfaceSpec {
        SurfaceSpec { surface: Surface::F4, chamber: Chamber::F4Series }
    }

    pub fn f4_alt() -> SurfaceSpec {
        SurfaceSpec { surface: Surface::F4, chamber: Chamber::F4Alt }
    }
}

/// `T^(a·A + b·B) x^xe y^ye` with `a`, `b` given as `(numerator, denominator)`.
pub(crate) fn mono(a: (i64, i64), b: (i64, i64), xe: i64, ye: i64) -> Monomial {
    Monomial::ab(q(a.0, a.1), q(b.0, b.1), xe, ye)
}

/// The wall monomial `T^A/y²` shared by all the F₄ families.
pub fn q_f4() -> Monomial {
    mono((1, 1), (0, 1), 0, -2)
}

/// `lead · Σ_k coeff(k) q^k` for all `k` whose term falls below the cutoff.
fn family(lead: Monomial, qm: Monomial, coeff: impl Fn(i64) -> i64, nu: ValuationMap, cutoff: Q) -> NovikovSeries {
    assert!(nu.of(&qm.t) > qi(0));
    let mut terms = Vec::new();
    let mut k = 0;
    loop {
        let m = lead * qm.pow(k);
        if nu.of(&m.t) >= cutoff {
            break;
        }
        terms.push((m, Rat::from_integer(coeff(k))));
        k += 1;
    }
    NovikovSeries::from_terms(terms, nu, cutoff)
}

fn binom3(k: i64) -> i64 {
    (k + 1) * (k + 2) * (k + 3) / 6
}

fn poly(nu: ValuationMap, cutoff: Q, terms: &[(i64, Monomial)]) -> NovikovSeries {
    series(nu, cutoff, terms.iter().copied())
}

/// The exact truncated series of the requested superpotential.
pub fn build(spec: SurfaceSpec, nu: ValuationMap, cutoff: Q) -> Result<NovikovSeries, SuperpotentialError> {
    if cutoff <= qi(0) {
        return Err(SuperpotentialError::InvalidParameter(format!("cutoff {cutoff} must be positive")));
    }
    let spec = SurfaceSpec::new(spec.surface, spec.chamber)?;
    let y = Monomial::y();
    let tb_y = mono((0, 1), (1, 1), 0, -1);
    let ta_y = mono((1, 1), (0, 1), 0, -1);
    let w = match (spec.surface, spec.chamber) {
        (Surface::F0, _) | (Surface::F4, Chamber::Chamber(0)) => poly(
            nu,
            cutoff,
            &[(1, y), (1, tb_y), (1, mono((1, 2), (0, 1), 1, 0)), (1, mono((1, 2), (0, 1), -1, 0))],
        ),
        (Surface::F2, _) | (Surface::F4, Chamber::Chamber(1)) => poly(
            nu,
            cutoff,
            &[(1, y), (1, tb_y), (1, ta_y), (1, mono((1, 2), (0, 1), 1, 0)), (1, mono((1, 2), (1, 1), -1, -2))],
        ),
        (Surface::F4, Chamber::Chamber(-1)) => poly(
            nu,
            cutoff,
            &[(1, y), (1, tb_y), (1, ta_y), (1, mono((1, 2), (0, 1), -1, 0)), (1, mono((1, 2), (1, 1), 1, -2))],
        ),
        (Surface::F3, Chamber::F3Right) => poly(
            nu,
            cutoff,
            &[
                (1, Monomial::x()),
                (1, y),
                (1, mono((1, 1), (2, 1), -1, -3)),
                (1, tb_y),
                (2, mono((1, 1), (1, 1), 0, -2)),
                (1, mono((1, 1), (0, 1), 1, -1)),
            ],
        ),
        (Surface::F3, _) => poly(
            nu,
            cutoff,
            &[
                (1, Monomial::x()),
                (1, y),
                (1, mono((1, 1), (2, 1), -1, -3)),
                (1, tb_y),
                (2, mono((1, 1), (1, 1), 0, -2)),
                (1, mono((2, 1), (2, 1), -1, -4)),
            ],
        ),
        (Surface::F4, Chamber::Default) => {
            let qm = q_f4();
            poly(nu, cutoff, &[(1, y), (1, ta_y)])
                + family(tb_y, qm, |k| 2 * k + 1, nu, cutoff)
                + family(Monomial::x(), qm, |k| k + 1, nu, cutoff)
                + family(mono((1, 1), (2, 1), -1, -4), qm, |k| k + 1, nu, cutoff)
        }
        (Surface::F4, Chamber::F4Series) => {
            let qm = q_f4();
            poly(nu, cutoff, &[(1, y), (1, ta_y)])
                + family(tb_y, qm, |k| 2 * k + 1, nu, cutoff)
                + family(mono((1, 2), (1, 1), -1, -2), qm, |k| k + 1, nu, cutoff)
                + family(mono((1, 2), (1, 1), 1, -2), qm, |k| k + 1, nu, cutoff)
        }
        (Surface::F4, Chamber::F4Alt) | (Surface::F4, Chamber::Chamber(2)) => {
            nodal_trade_form(nu, cutoff, 1)?
        }
        (Surface::F4, Chamber::Chamber(_)) => nodal_trade_form(nu, cutoff, -1)?,
        (Surface::F4, Chamber::PlusInfinity) => {
            let qm = q_f4();
            poly(nu, cutoff, &[(1, y), (1, ta_y), (1, mono((1, 2), (1, 1), -1, -2))])
                + family(tb_y, qm, |k| 2 * k + 1, nu, cutoff)
                + family(mono((1, 2), (1, 1), 1, -2), qm, binom3, nu, cutoff)
        }
        (Surface::F4, Chamber::MinusInfinity) => {
            let w = build(SurfaceSpec::f4_series(), nu, cutoff)?;
            let one_minus_q = poly(nu, cutoff, &[(1, Monomial::one()), (-1, q_f4())]);
            let img_x = &NovikovSeries::x(nu, cutoff) * &one_minus_q.pow(2)?;
            w.substitute(&img_x, &NovikovSeries::y(nu, cutoff))?
        }
        (Surface::F4, _) => unreachable!("rejected by SurfaceSpec::new"),
    };
    Ok(w)
}

/// `y + (1+T^{A−B})(T^B/y + T^{A/2+B}x^s/y²) + T^{A/2+B}x^{-s}/y²·(1+T^{A/2}x^s/y)³`.
fn nodal_trade_form(nu: ValuationMap, cutoff: Q, s: i64) -> Result<NovikovSeries, SuperpotentialError> {
    let one = Monomial::one();
    let p1 = poly(nu, cutoff, &[(1, one), (1, mono((1, 1), (-1, 1), 0, 0))]);
    let p2 = poly(nu, cutoff, &[(1, mono((0, 1), (1, 1), 0, -1)), (1, mono((1, 2), (1, 1), s, -2))]);
    let lead = poly(nu, cutoff, &[(1, mono((1, 2), (1, 1), -s, -2))]);
    let cube = poly(nu, cutoff, &[(1, one), (1, mono((1, 2), (0, 1), s, -1))]).pow(3)?;
    Ok(NovikovSeries::y(nu, cutoff) + &p1 * &p2 + &lead * &cube)
}

/// `(y² − T^A)^{-2}` expanded as a series.
fn inv_sq_denominator(nu: ValuationMap, cutoff: Q) -> Result<NovikovSeries, NovikovError> {
    let d = poly(nu, cutoff, &[(1, Monomial::ab(qi(0), qi(0), 0, 2)), (-1, mono((1, 1), (0, 1), 0, 0))]);
    d.pow(2)?.invert_unit()
}

/// The closed rational form of a superpotential, expanded.
pub fn closed_form(spec: SurfaceSpec, nu: ValuationMap, cutoff: Q) -> Result<NovikovSeries, SuperpotentialError> {
    let head = poly(nu, cutoff, &[(1, Monomial::y()), (1, mono((1, 1), (0, 1), 0, -1))]);
    let den = inv_sq_denominator(nu, cutoff)?;
    // T^B·y·(y² + T^A)/(y² − T^A)²
    let tb_part = &(&poly(nu, cutoff, &[(1, mono((0, 1), (1, 1), 0, 1))])
        * &poly(nu, cutoff, &[(1, Monomial::ab(qi(0), qi(0), 0, 2)), (1, mono((1, 1), (0, 1), 0, 0))]))
        * &den;
    match spec.chamber {
        Chamber::F4Series if spec.surface == Surface::F4 => {
            let x_part = poly(nu, cutoff, &[(1, mono((1, 2), (1, 1), 1, 2)), (1, mono((1, 2), (1, 1), -1, 2))]);
            Ok(head + tb_part + &x_part * &den)
        }
        Chamber::PlusInfinity if spec.surface == Surface::F4 => {
            let one_minus_q = poly(nu, cutoff, &[(1, Monomial::one()), (-1, q_f4())]);
            let tail = &poly(nu, cutoff, &[(1, mono((1, 2), (1, 1), 1, -2))]) * &one_minus_q.pow(-4)?;
            Ok(head + tb_part + poly(nu, cutoff, &[(1, mono((1, 2), (1, 1), -1, -2))]) + tail)
        }
        _ => Err(SuperpotentialError::NoClosedForm(spec)),
    }
}

/// Whether the series form agrees with the expanded closed form below the
/// smaller of the two cutoffs.
pub fn closed_form_equal(spec: SurfaceSpec, nu: ValuationMap, cutoff: Q) -> Result<bool, SuperpotentialError> {
    let closed = closed_form(spec, nu, cutoff)?;
    let built = build(spec, nu, cutoff)?;
    Ok(built.eq_up_to_cutoff(&closed, closed.cutoff().min(built.cutoff())))
}

/// The three generating-function identities used by the F₄ formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumIdentity {
    /// `Σ (2k+1) q^k = (1+q)/(1−q)²`
    Odd,
    /// `Σ (k+1) q^k = (1−q)^{-2}`
    Linear,
    /// `Σ C(k+3,3) q^k = (1−q)^{-4}`
    Tetrahedral,
}

/// Checks one identity with `q = T^A/y²` below `cutoff`.
pub fn sum_identity_holds(id: SumIdentity, nu: ValuationMap, cutoff: Q) -> Result<bool, NovikovError> {
    let qm = q_f4();
    let one_minus_q = poly(nu, cutoff, &[(1, Monomial::one()), (-1, qm)]);
    let (lhs, rhs) = match id {
        SumIdentity::Odd => (
            family(Monomial::one(), qm, |k| 2 * k + 1, nu, cutoff),
            &poly(nu, cutoff, &[(1, Monomial::one()), (1, qm)]) * &one_minus_q.pow(-2)?,
        ),
        SumIdentity::Linear => (family(Monomial::one(), qm, |k| k + 1, nu, cutoff), one_minus_q.pow(-2)?),
        SumIdentity::Tetrahedral => (family(Monomial::one(), qm, binom3, nu, cutoff), one_minus_q.pow(-4)?),
    };
    Ok(lhs.eq_up_to_cutoff(&rhs, cutoff))
}

/// Substitutes `x ↦ a_x`, `y ↦ a_y` for monomials with a unimodular
/// exponent matrix.
pub fn monomial_change(w: &NovikovSeries, a_x: &Monomial, a_y: &Monomial) -> Result<NovikovSeries, SuperpotentialError> {
    let det = a_x.xe * a_y.ye - a_x.ye * a_y.xe;
    if det.abs() != 1 {
        return Err(SuperpotentialError::NonUnimodular(det));
    }
    let nu = w.nu();
    let c = w.cutoff();
    let ix = NovikovSeries::monomial(Rat::one(), *a_x, nu, c.max(nu.of(&a_x.t) + qi(1)));
    let iy = NovikovSeries::monomial(Rat::one(), *a_y, nu, c.max(nu.of(&a_y.t) + qi(1)));
    Ok(w.substitute(&ix, &iy)?)
}

/// The inverse of the monomial map `x ↦ a_x`, `y ↦ a_y`.
pub fn inverse_monomial_map(a_x: &Monomial, a_y: &Monomial) -> Result<(Monomial, Monomial), SuperpotentialError> {
    let det = a_x.xe * a_y.ye - a_x.ye * a_y.xe;
    if det.abs() != 1 {
        return Err(SuperpotentialError::NonUnimodular(det));
    }
    // Rows of the inverse exponent matrix.
    let r1 = (a_y.ye * det, -a_x.ye * det);
    let r2 = (-a_y.xe * det, a_x.xe * det);
    let inv = |r: (i64, i64), xe: i64, ye: i64| {
        let t = a_x.t * r.0 + a_y.t * r.1;
        Monomial::new(-t, xe, ye)
    };
    // x = a_x^{r1.0} a_y^{r1.1} · T^{...}, read off in the new variables.
    Ok((inv(r1, r1.0, r1.1), inv(r2, r2.0, r2.1)))
}

/// The coordinate change `(x, y) ↦ (T^{-A/2-B} x y², y)` between the two
/// F₄ charts of the non-wall perturbation.
pub fn f4_chart_change() -> (Monomial, Monomial) {
    (mono((-1, 2), (-1, 1), 1, 2), Monomial::y())
}
