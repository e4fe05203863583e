//! The cross-check suite behind `verify-all`.
//!
//! Each check has a stated cutoff in units of `ν_A` or `ν_B`; a caller may
//! raise it with a floor. Checks run on separate threads and are reported
//! in a fixed order.

use std::time::{Duration, Instant};

use num_traits::One;

use crate::hirzebruch::{self, systems, table, BasisTag, DiscClass};
use crate::novikov::{qi, Monomial, NovikovSeries, Rat, ValuationMap, Q};
use crate::scattering::{self, Diagram, Orientation, Sign};
use crate::superpotential::{self as sp, build, Chamber, SurfaceSpec};
use crate::wallcross::{self, WallTransform};

#[derive(Clone, Debug)]
pub struct Check {
    pub id: &'static str,
    pub formula: &'static str,
    pub cutoff: Option<Q>,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ints(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&c| Rat::from_integer(c)).collect()
}

fn one_minus_q(nu: ValuationMap, cutoff: Q) -> NovikovSeries {
    NovikovSeries::from_terms([(Monomial::one(), Rat::one()), (sp::q_f4(), -Rat::one())], nu, cutoff)
}

pub fn f3_wall_function(nu: ValuationMap, cutoff: Q) -> Outcome {
    let left = build(SurfaceSpec::f3_left(), nu, cutoff).map_err(err)?;
    let right = build(SurfaceSpec::f3_right(), nu, cutoff).map_err(err)?;
    let got = wallcross::solve_wall_function(&right, &left, &wallcross::f3_wall_monomial(), 1, 0, 6).map_err(err)?;
    ensure(got == ints(&[1, 0, 0, 0, 0, 0]), || format!("got {got:?}"))?;
    Ok("h = 1 + T^A/y".into())
}

pub fn f3_gluing(nu: ValuationMap, cutoff: Q) -> Outcome {
    ensure(wallcross::verify_gluing(nu, cutoff), || "mismatch".into())?;
    Ok("glued".into())
}

pub fn f4_series_closed_form(nu: ValuationMap, cutoff: Q) -> Outcome {
    ensure(sp::closed_form_equal(SurfaceSpec::f4_series(), nu, cutoff).map_err(err)?, || "closed form differs".into())?;
    let w = build(SurfaceSpec::f4_series(), nu, cutoff).map_err(err)?;
    let mut checked = 0;
    for k in 0..=8i64 {
        let odd = Monomial::ab(qi(k), qi(1), 0, -2 * k - 1);
        if nu.of(&odd.t) < cutoff {
            ensure(w.coeff(&odd) == Rat::from_integer(2 * k + 1), || format!("coefficient of {odd}"))?;
            checked += 1;
        }
        for xe in [1, -1] {
            let t = crate::novikov::q(1, 2) + qi(k);
            let m = Monomial::ab(t, qi(1), xe, -2 * k - 2);
            if nu.of(&m.t) < cutoff {
                ensure(w.coeff(&m) == Rat::from_integer(k + 1), || format!("coefficient of {m}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} coefficients"))
}

pub fn nodal_trade(nu: ValuationMap, cutoff: Q) -> Outcome {
    let f2 = build(SurfaceSpec::f2(), nu, cutoff).map_err(err)?;
    let alt = build(SurfaceSpec::f4_alt(), nu, cutoff).map_err(err)?;
    let t = WallTransform::new("T^{A/2}x/y".parse().map_err(err)?, ints(&[1]), -1, -1).map_err(err)?;
    let got = t.apply(&f2).map_err(err)?;
    ensure(got == alt, || format!("got {got}"))?;
    Ok(format!("{} terms", alt.len()))
}

/// Completion plus the expected wall list.
pub fn scattering_completion(nu: ValuationMap, cutoff: Q) -> Outcome {
    let d = scattering::complete(&Diagram::initial(nu, cutoff), cutoff).map_err(err)?;
    for o in [Orientation::Clockwise, Orientation::Counterclockwise] {
        let (x, y) = scattering::path_ordered_product(&d, o).map_err(err)?;
        ensure(x == NovikovSeries::x(nu, cutoff) && y == NovikovSeries::y(nu, cutoff), || "loop is not the identity".into())?;
    }
    let mut expected = 0;
    let mut k = 1;
    while nu.of(&Monomial::ab(crate::novikov::q(2 * k - 1, 2), qi(0), 0, 0).t) < cutoff {
        let j = 2 * k - 1;
        for s in [1, -1] {
            let found = d.walls.iter().find(|w| w.direction == (s, -j)).ok_or_else(|| format!("no wall along ({s}, {})", -j))?;
            let m = Monomial::ab(crate::novikov::q(j, 2), qi(0), s, -j);
            ensure(found.transform.wall_monomial == m && found.transform.fn_coeffs == ints(&[1]), || {
                format!("wall along ({s}, {}) carries {}", -j, found.transform.wall_monomial)
            })?;
            let exps = (found.transform.exp_x, found.transform.exp_y);
            ensure(exps == (j, s), || format!("wall along ({s}, {}) has exponents {exps:?}", -j))?;
            expected += 1;
        }
        k += 1;
    }
    let vertical = d.walls.iter().find(|w| w.direction == (0, -1)).ok_or("no vertical wall")?;
    let f = vertical.function(nu, cutoff);
    let want = one_minus_q(nu, cutoff).pow(-4).map_err(err)?;
    ensure(f == want && vertical.transform.exp_x == 1 && vertical.transform.exp_y == 0, || "vertical wall differs".into())?;
    ensure(d.walls.len() == expected + 1, || format!("{} walls, expected {}", d.walls.len(), expected + 1))?;
    Ok(format!("{} walls", d.walls.len()))
}

pub fn chamber_superpotentials(nu: ValuationMap, cutoff: Q) -> Outcome {
    let d = Diagram::initial(nu, cutoff);
    for k in -2..=2 {
        let w = scattering::chamber_superpotential(&d, k, cutoff).map_err(err)?;
        let want = build(SurfaceSpec::f4(Chamber::Chamber(k)).map_err(err)?, nu, cutoff).map_err(err)?;
        ensure(w == want, || format!("chamber {k}: {w}"))?;
    }
    Ok("k = -2..2".into())
}

pub fn limits(nu: ValuationMap, cutoff: Q) -> Outcome {
    let d = scattering::complete(&Diagram::initial(nu, cutoff), cutoff).map_err(err)?;
    let plus = scattering::limit_superpotential(&d, Sign::Plus, cutoff).map_err(err)?;
    let minus = scattering::limit_superpotential(&d, Sign::Minus, cutoff).map_err(err)?;
    for (s, w) in [(Sign::Plus, &plus), (Sign::Minus, &minus)] {
        let want = scattering::limit_closed_form(nu, s, cutoff).map_err(err)?;
        ensure(*w == want, || format!("{s:?} limit differs"))?;
    }
    let x4 = &NovikovSeries::x(nu, cutoff) * &one_minus_q(nu, cutoff).pow(4).map_err(err)?;
    let moved = plus.substitute(&x4, &NovikovSeries::y(nu, cutoff)).map_err(err)?;
    ensure(moved == minus, || "limits are not related by x(1 - T^A/y^2)^4".into())?;
    Ok(format!("{} and {} terms", plus.len(), minus.len()))
}

fn family(bases: &[[i64; 4]], step: [i64; 4], basis: BasisTag, from: i64, bound: i64) -> Vec<DiscClass> {
    let mut out = Vec::new();
    for b in bases {
        for m in from..=bound {
            let v = [0, 1, 2, 3].map(|i| b[i] + m * step[i]);
            if v.iter().all(|x| x.abs() <= bound) && v != [0; 4] {
                out.push(DiscClass::new(basis, v));
            }
        }
    }
    out.sort();
    out
}

/// The expected families at `bound`, checked again for stability at `2·bound`.
pub fn enumeration(bound: i64) -> Outcome {
    let mut six: Vec<DiscClass> = [[1, 0, 0, 0], [0, 1, 0, 0], [0, -1, 0, 1], [-1, 3, 1, 0], [0, 2, 1, 0], [1, 1, 1, 0]]
        .into_iter()
        .map(|v| DiscClass::new(BasisTag::F3, v))
        .collect();
    six.sort();
    let cases = [
        (systems::f3_index2_right(), six),
        (systems::f3_index0_on_wall(), family(&[[0; 4]], [0, 1, 1, 0], BasisTag::F3, 1, bound)),
        (systems::f4_index0(), family(&[[0; 4]], [0, 2, 1, 0], BasisTag::F4, 1, bound)),
        (
            systems::f4_index2(),
            family(&[[0, 1, 0, 0], [0, -1, 0, 1], [1, -2, 0, 2], [-1, -2, 1, 0]], [0, -2, 1, 0], BasisTag::F0Chart, 0, bound),
        ),
    ];
    for (sys, want) in cases {
        let small = hirzebruch::enumerate_classes(&sys, bound);
        ensure(small.classes == want, || format!("{}: {} classes", sys.name, small.classes.len()))?;
        let big = hirzebruch::enumerate_classes(&sys, 2 * bound);
        ensure(hirzebruch::restrict(&big.classes, bound) == small.classes, || format!("{} is unstable", sys.name))?;
    }
    Ok(format!("bound {bound}, stable at {}", 2 * bound))
}

pub fn intersection_table() -> Outcome {
    let rows = [
        ([1, 0, 0, 0], [-2, 1, 0, 0, 0], -2),
        ([0, 1, 0, 0], [0, 0, 0, 0, 1], 2),
        ([0, 0, 1, 0], [0, 1, 0, 1, 2], 4),
        ([0, 0, 0, 1], [1, 0, 1, 0, 1], 4),
    ];
    for (coords, entries, mu) in rows {
        let c = DiscClass::new(BasisTag::F0Chart, coords);
        let got: Vec<i64> = table::all().iter().map(|s| hirzebruch::intersect(&c, s)).collect::<Result<_, _>>().map_err(err)?;
        ensure(got == entries, || format!("{c}: {got:?}"))?;
        let (p1, p2) = hirzebruch::maslov_pairings(&c).map_err(err)?;
        ensure(hirzebruch::maslov(&c) == mu && p1 == mu && p2 == mu, || format!("{c}: Maslov {p1}, {p2}"))?;
    }
    Ok("20 entries, 4 indices".into())
}

pub fn obstruction() -> Outcome {
    let f3 = hirzebruch::obstruction_degree(1, 1).map_err(err)?;
    let f4 = hirzebruch::obstruction_degree(2, 2).map_err(err)?;
    let by_transition = hirzebruch::obstruction_degree_by_transition().map_err(err)?;
    ensure(f3 == [1] && f4 == [1, 1] && by_transition == 1, || format!("{f3:?}, {f4:?}, {by_transition}"))?;
    ensure(hirzebruch::h_dim(-2, 1) == 1, || "h1(O(-2)) != 1".into())?;
    Ok("degree 1, bidegree (1,1)".into())
}

pub fn riemann_hurwitz() -> Outcome {
    for m in 1..=10 {
        ensure(!hirzebruch::rh_feasible(2 * m, 2 * m), || format!("degree {} feasible", 2 * m))?;
    }
    for m in 0..=10 {
        ensure(hirzebruch::rh_feasible(2 * m + 1, 2 * m), || format!("degree {} infeasible", 2 * m + 1))?;
    }
    Ok("m = 0..10".into())
}

/// `±2T^{A/2} ± 2T^{B/2}` from both the F₄ series and F₀.
pub fn critical_values(t: f64, a: i64, b: i64, tol: f64) -> Outcome {
    let mut want: Vec<f64> = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
        .iter()
        .map(|(s, u)| 2.0 * s * t.powf(a as f64 / 2.0) + 2.0 * u * t.powf(b as f64 / 2.0))
        .collect();
    want.sort_by(f64::total_cmp);
    let mut found = Vec::new();
    for spec in [SurfaceSpec::f4_series(), SurfaceSpec::f0()] {
        let r = sp::critical_values_numeric(spec, t, qi(a), qi(b), tol).map_err(err)?;
        let close = r.values.len() == 4 && r.values.iter().zip(&want).all(|(x, y)| (x - y).abs() < tol);
        ensure(close, || format!("{:?} gives {:?}", spec.surface, r.values))?;
        found.push(r.values);
    }
    ensure(found[0].iter().zip(&found[1]).all(|(x, y)| (x - y).abs() < tol), || "value sets differ".into())?;
    Ok(format!("{:?}", found[1]))
}

/// Deterministic spot checks of the series kernel.
pub fn kernel_laws(nu: ValuationMap, cutoff: Q) -> Outcome {
    for id in [sp::SumIdentity::Odd, sp::SumIdentity::Linear, sp::SumIdentity::Tetrahedral] {
        ensure(sp::sum_identity_holds(id, nu, cutoff).map_err(err)?, || format!("{id:?}"))?;
    }
    let w = build(SurfaceSpec::f4_alt(), nu, cutoff).map_err(err)?;
    let u = NovikovSeries::one(nu, cutoff) + w.mul_monomial(&Rat::one(), &"T^{2A}".parse().map_err(err)?);
    let inv = u.invert_unit().map_err(err)?;
    let prod = &u * &inv;
    ensure(prod.eq_up_to_cutoff(&NovikovSeries::one(nu, cutoff), prod.cutoff()), || "u·u⁻¹ != 1".into())?;
    let p = u.pow(3).map_err(err)?;
    ensure(p == &(&u * &u) * &u, || "u³ != u·u·u".into())?;
    Ok("sums, inverse, power".into())
}

type Job = (&'static str, &'static str, Option<Q>, Box<dyn FnOnce() -> Outcome + Send>);

/// Runs every check at `max(stated, floor)`.
pub fn run_all(nu: ValuationMap, floor: Q) -> Vec<Check> {
    let c = |mult: i64, unit: Q| (unit * qi(mult)).max(floor);
    let (na, nb) = (nu.nu_a(), nu.nu_b());
    let tol = 1e-8;
    let jobs: Vec<Job> = vec![
        ("wall-function-f3", "h(T^A/y) = 1 + T^A/y", Some(c(20, nb)), Box::new({ let k = c(20, nb); move || f3_wall_function(nu, k) })),
        ("gluing-f3", "u·v = 1 + T^A w", Some(c(10, nb)), Box::new({ let k = c(10, nb); move || f3_gluing(nu, k) })),
        ("series-f4", "W_F4 closed form; coefficients 2k+1, k+1", Some(c(20, nb)), Box::new({ let k = c(20, nb); move || f4_series_closed_form(nu, k) })),
        ("nodal-trade", "(x, y) ↦ (x, y)(1 + T^{A/2}x/y)^{-1}: W_F2 → W_alt", Some(c(16, nb)), Box::new({ let k = c(16, nb); move || nodal_trade(nu, k) })),
        ("scattering", "loop = id; rays (1+T^{(2k-1)A/2}xy^{1-2k}); x ↦ x(1-T^A/y²)⁴", Some(c(10, na)), Box::new({ let k = c(10, na); move || scattering_completion(nu, k) })),
        ("chambers", "W_k for k = -2..2", Some(c(12, na)), Box::new({ let k = c(12, na); move || chamber_superpotentials(nu, k) })),
        ("limits", "W_{±∞} = W(x(1-T^A/y²)^{∓2}, y)", Some(c(8, na)), Box::new({ let k = c(8, na); move || limits(nu, k) })),
        ("enumeration", "index 0 and index 2 disc classes", None, Box::new(|| enumeration(8))),
        ("intersection-table", "D·β and μ = 2c₁·β", None, Box::new(intersection_table)),
        ("obstruction", "deg Ob = 1; bideg Ob = (1,1); h¹(O(-2)) = 1", None, Box::new(obstruction)),
        ("riemann-hurwitz", "r ≤ d - 1", None, Box::new(riemann_hurwitz)),
        ("critical-values-a", "±2T^{A/2} ± 2T^{B/2} at T = 0.25, A = 2, B = 1", None, Box::new(move || critical_values(0.25, 2, 1, tol))),
        ("critical-values-b", "±2T^{A/2} ± 2T^{B/2} at T = 0.1, A = 3, B = 1", None, Box::new(move || critical_values(0.1, 3, 1, tol))),
        ("kernel", "Σ(2k+1)q^k, Σ(k+1)q^k, ΣC(k+3,3)q^k; u·u⁻¹ = 1", Some(c(20, nb)), Box::new({ let k = c(20, nb); move || kernel_laws(nu, k) })),
    ];
    std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .into_iter()
            .map(|(id, formula, cutoff, job)| {
                s.spawn(move || {
                    let start = Instant::now();
                    let out = job();
                    let elapsed = start.elapsed();
                    let (passed, detail) = match out {
                        Ok(d) => (true, d),
                        Err(d) => (false, d),
                    };
                    Check { id, formula, cutoff, passed, detail, elapsed }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("check panicked")).collect()
    })
}
