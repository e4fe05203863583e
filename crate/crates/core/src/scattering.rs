//! Rank-two scattering diagrams.
//!
//! A wall carries a function `f` of a single monomial `q = T^t x^a y^b` with
//! `(a, b)` a positive multiple of its direction `d`. Crossing the half-line
//! along `d` clockwise sends `x ↦ x·f^{n_x}`, `y ↦ y·f^{n_y}` with
//! `n = (−d_y, d_x)`; counterclockwise crossings use `−n`. A full line is
//! two halves along `±d` and is crossed twice per loop.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::novikov::{q, qi, AreaExponent, Monomial, NovikovError, NovikovSeries, Rat, ValuationMap, Q};
use crate::superpotential::{build, SurfaceSpec};
use crate::wallcross::{apply_series, WallCrossError, WallTransform};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScatteringError {
    #[error("no wall of the diagram's grading cancels the loop at valuation {0}")]
    NonTerminating(Q),
    #[error("chamber {0} lies beyond the walls computed at this cutoff")]
    CutoffTooLow(i64),
    #[error("chamber superpotentials did not stabilize within {0} walls")]
    NoStabilization(usize),
    #[error(transparent)]
    Series(#[from] NovikovError),
    #[error(transparent)]
    Wall(#[from] WallCrossError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Clockwise,
    Counterclockwise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `f = (1 + a·q)^e`, recovered from the first two coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binomial {
    pub coeff: Rat,
    pub exponent: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Wall {
    /// Primitive; for a line, the half whose crossing uses `transform` as is.
    pub direction: (i64, i64),
    pub is_full_line: bool,
    /// `exp_x, exp_y` are the clockwise exponents `(−d_y, d_x)`.
    pub transform: WallTransform,
    pub factor: Option<Binomial>,
    /// For walls on the axis of the `x ↦ 1/x` symmetry: the number of
    /// coinciding walls and the binomial exponent carried by each.
    pub coinciding: Option<(u32, Rat)>,
    /// Set on a line whose downward half is also the first member of a
    /// family of scattered rays.
    pub collision: bool,
}

fn rot_ccw(d: (i64, i64)) -> (i64, i64) {
    (-d.1, d.0)
}

fn prim(v: (i64, i64)) -> (i64, i64) {
    let g = v.0.gcd(&v.1);
    (v.0 / g, v.1 / g)
}

/// Clockwise angle from `(1, 1)`, in `[0, 2π)`.
fn cw_angle(d: (i64, i64)) -> f64 {
    let a = (d.1 as f64).atan2(d.0 as f64);
    let r = std::f64::consts::FRAC_PI_4 - a;
    r.rem_euclid(std::f64::consts::TAU)
}

impl Wall {
    pub fn new(direction: (i64, i64), is_full_line: bool, wall_monomial: Monomial, fn_coeffs: Vec<Rat>) -> Result<Wall, ScatteringError> {
        let n = rot_ccw(direction);
        let transform = WallTransform::new(wall_monomial, fn_coeffs, n.0, n.1)?;
        let mut w = Wall { direction, is_full_line, transform, factor: None, coinciding: None, collision: false };
        w.factor = w.detect_binomial();
        if w.direction.0 == 0 {
            if let Some(b) = &w.factor {
                w.coinciding = Some((2, &b.exponent / &Rat::from_integer(2)));
            }
        }
        Ok(w)
    }

    pub fn function(&self, nu: ValuationMap, cutoff: Q) -> NovikovSeries {
        self.transform.function(nu, cutoff)
    }

    /// T-exponent per primitive step along the direction.
    pub fn grading(&self) -> AreaExponent {
        let m = &self.transform.wall_monomial;
        let j = if self.direction.0 != 0 { m.xe / self.direction.0 } else { m.ye / self.direction.1 };
        m.t.scale(q(1, j))
    }

    fn detect_binomial(&self) -> Option<Binomial> {
        let c = &self.transform.fn_coeffs;
        let c1 = c.first().filter(|c1| !c1.is_zero())?;
        let zero = Rat::zero();
        let c2 = c.get(1).unwrap_or(&zero);
        let sq = c1 * c1;
        let den = &sq - &(c2 + c2);
        if den.is_zero() {
            return None;
        }
        let e = &sq / &den;
        let a = c1 / &e;
        // Generalized binomial coefficients of (1 + a q)^e.
        let mut term = Rat::one();
        for (k, ck) in c.iter().enumerate() {
            let k = Rat::from_integer(k as i64);
            term = &(&term * &(&e - &k)) * &(&a / &(&k + &Rat::one()));
            if term != *ck {
                return None;
            }
        }
        Some(Binomial { coeff: a, exponent: e })
    }

    pub fn to_json(&self, nu: ValuationMap, cutoff: Q) -> Value {
        let mut v = json!({
            "dir": [self.direction.0, self.direction.1],
            "line": self.is_full_line,
            "fn": serde_json::to_value(self.function(nu, cutoff)).expect("series serializes"),
            "monomial": self.transform.wall_monomial.to_string(),
            "exp": [self.transform.exp_x, self.transform.exp_y],
            "collision": self.collision,
        });
        if let Some(b) = &self.factor {
            v["factor"] = json!({"a": b.coeff.to_string(), "e": b.exponent.to_string()});
        }
        if let Some((n, e)) = &self.coinciding {
            v["coinciding"] = json!({"count": n, "e": e.to_string()});
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagram {
    pub nu: ValuationMap,
    pub cutoff: Q,
    pub walls: Vec<Wall>,
}

struct Half {
    dir: (i64, i64),
    f: NovikovSeries,
    exps: (i64, i64),
}

impl Diagram {
    pub fn empty(nu: ValuationMap, cutoff: Q) -> Diagram {
        Diagram { nu, cutoff, walls: Vec::new() }
    }

    /// The two initial lines: slope 1 with `1 + T^{A/2}/(xy)` and slope −1
    /// with `1 + T^{A/2}x/y`.
    pub fn initial(nu: ValuationMap, cutoff: Q) -> Diagram {
        let l1 = Wall::new((-1, -1), true, Monomial::ab(q(1, 2), qi(0), -1, -1), vec![Rat::one()]).expect("valid wall");
        let l2 = Wall::new((1, -1), true, Monomial::ab(q(1, 2), qi(0), 1, -1), vec![Rat::one()]).expect("valid wall");
        let mut d = Diagram { nu, cutoff, walls: vec![l1, l2] };
        d.canonicalize();
        d
    }

    fn canonicalize(&mut self) {
        let nu = self.nu;
        self.walls.sort_by(|a, b| {
            cw_angle(a.direction)
                .total_cmp(&cw_angle(b.direction))
                .then_with(|| nu.of(&a.grading()).cmp(&nu.of(&b.grading())))
        });
    }

    /// Every half-line with its function, in clockwise order from `(1, 1)`.
    fn halves(&self) -> Vec<Half> {
        let mut out = Vec::new();
        for w in &self.walls {
            let f = w.function(self.nu, self.cutoff);
            let n = (w.transform.exp_x, w.transform.exp_y);
            out.push(Half { dir: w.direction, f: f.clone(), exps: n });
            if w.is_full_line {
                out.push(Half { dir: (-w.direction.0, -w.direction.1), f, exps: (-n.0, -n.1) });
            }
        }
        out.sort_by(|a, b| cw_angle(a.dir).total_cmp(&cw_angle(b.dir)));
        out
    }

    pub fn rays(&self) -> impl Iterator<Item = &Wall> {
        self.walls.iter().filter(|w| !w.is_full_line)
    }
}

/// `(X, Y) ↦ (X·F^{e_x}, Y·F^{e_y})` with `F = f(X, Y)`.
fn cross(x: &NovikovSeries, y: &NovikovSeries, f: &NovikovSeries, e: (i64, i64)) -> Result<(NovikovSeries, NovikovSeries), NovikovError> {
    let fxy = f.substitute(x, y)?;
    let nx = if e.0 == 0 { x.clone() } else { x * &fxy.pow(e.0)? };
    let ny = if e.1 == 0 { y.clone() } else { y * &fxy.pow(e.1)? };
    Ok((nx, ny))
}

fn product_of(halves: &[Half], orientation: Orientation, nu: ValuationMap, cutoff: Q) -> Result<(NovikovSeries, NovikovSeries), NovikovError> {
    let mut x = NovikovSeries::x(nu, cutoff);
    let mut y = NovikovSeries::y(nu, cutoff);
    let seq: Box<dyn Iterator<Item = &Half>> = match orientation {
        Orientation::Clockwise => Box::new(halves.iter()),
        Orientation::Counterclockwise => Box::new(halves.iter().rev()),
    };
    for h in seq {
        let e = match orientation {
            Orientation::Clockwise => h.exps,
            Orientation::Counterclockwise => (-h.exps.0, -h.exps.1),
        };
        (x, y) = cross(&x, &y, &h.f, e)?;
    }
    Ok((x, y))
}

/// Images of `x`, `y` after one loop around the origin.
pub fn path_ordered_product(d: &Diagram, orientation: Orientation) -> Result<(NovikovSeries, NovikovSeries), ScatteringError> {
    Ok(product_of(&d.halves(), orientation, d.nu, d.cutoff)?)
}

/// `X/x − 1` and `Y/y − 1`.
fn loop_error(x: &NovikovSeries, y: &NovikovSeries) -> (NovikovSeries, NovikovSeries) {
    let one = Rat::one();
    let ex = x.mul_monomial(&one, &Monomial::x().inverse()) - NovikovSeries::one(x.nu(), x.cutoff());
    let ey = y.mul_monomial(&one, &Monomial::y().inverse()) - NovikovSeries::one(y.nu(), y.cutoff());
    (ex, ey)
}

/// Lowest valuation at which the loop fails to be the identity.
pub fn first_failure(d: &Diagram) -> Result<Option<Q>, ScatteringError> {
    let (x, y) = path_ordered_product(d, Orientation::Clockwise)?;
    let (ex, ey) = loop_error(&x, &y);
    Ok(match (ex.valuation(), ey.valuation()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    })
}

/// Inserts rays order by order until the loop is the identity below `cutoff`.
///
/// The leading error term `c_x·m` in `X/x` and `c_y·m` in `Y/y` must be a
/// multiple of `n = rot(d)` with `d` the primitive direction of `m`; a ray
/// along `d` with function `1 − (c/n)·m` cancels it. Rays sharing direction
/// and grading are merged into one wall at the end.
pub fn complete(initial: &Diagram, cutoff: Q) -> Result<Diagram, ScatteringError> {
    let nu = initial.nu;
    let base = Diagram { nu, cutoff, walls: initial.walls.clone() };
    let mut halves = base.halves();
    let mut added: Vec<((i64, i64), Monomial, Rat)> = Vec::new();
    let max_rounds = 10_000;
    for _ in 0..max_rounds {
        halves.sort_by(|a, b| cw_angle(a.dir).total_cmp(&cw_angle(b.dir)));
        let (x, y) = product_of(&halves, Orientation::Clockwise, nu, cutoff)?;
        let (ex, ey) = loop_error(&x, &y);
        let v = match (ex.valuation(), ey.valuation()) {
            (None, None) => return Ok(assemble(base, added)),
            (Some(a), Some(b)) => a.min(b),
            (a, b) => a.or(b).expect("one side is nonzero"),
        };
        let mut monos: Vec<Monomial> = ex
            .iter_val()
            .chain(ey.iter_val())
            .filter(|(w, _, _)| *w == v)
            .map(|(_, m, _)| *m)
            .collect();
        monos.sort();
        monos.dedup();
        for m in monos {
            if (m.xe, m.ye) == (0, 0) || nu.of(&m.t) <= qi(0) {
                return Err(ScatteringError::NonTerminating(v));
            }
            let (a, b) = (ex.coeff(&m), ey.coeff(&m));
            let dir = prim((m.xe, m.ye));
            let n = rot_ccw(dir);
            let c = if n.0 != 0 { -(&a / &Rat::from_integer(n.0)) } else { -(&b / &Rat::from_integer(n.1)) };
            let fits = |coef: &Rat, ni: i64| *coef == -(&c * &Rat::from_integer(ni));
            if !fits(&a, n.0) || !fits(&b, n.1) {
                return Err(ScatteringError::NonTerminating(v));
            }
            let f = NovikovSeries::from_terms([(Monomial::one(), Rat::one()), (m, c.clone())], nu, cutoff);
            halves.push(Half { dir, f, exps: n });
            added.push((dir, m, c));
        }
    }
    Err(ScatteringError::NonTerminating(cutoff))
}

/// Merges the inserted factors per direction and grading.
fn assemble(base: Diagram, added: Vec<((i64, i64), Monomial, Rat)>) -> Diagram {
    let (nu, cutoff) = (base.nu, base.cutoff);
    // key: direction and grading per primitive step
    let mut groups: BTreeMap<((i64, i64), AreaExponent), NovikovSeries> = BTreeMap::new();
    for (dir, m, c) in added {
        let j = if dir.0 != 0 { m.xe / dir.0 } else { m.ye / dir.1 };
        let g = m.t.scale(q(1, j));
        let factor = NovikovSeries::from_terms([(Monomial::one(), Rat::one()), (m, c)], nu, cutoff);
        let e = groups.entry((dir, g)).or_insert_with(|| NovikovSeries::one(nu, cutoff));
        *e = &*e * &factor;
    }
    let mut walls = base.walls;
    for ((dir, g), f) in groups {
        let mut steps: Vec<(i64, Rat)> = Vec::new();
        for (m, c) in f.iter() {
            if m.is_one() {
                continue;
            }
            let j = if dir.0 != 0 { m.xe / dir.0 } else { m.ye / dir.1 };
            steps.push((j, c.clone()));
        }
        let j0 = steps.iter().fold(0, |acc, (j, _)| acc.gcd(j));
        let qm = Monomial::new(g * j0, dir.0 * j0, dir.1 * j0);
        let top = steps.iter().map(|(j, _)| j / j0).max().unwrap_or(0) as usize;
        let mut coeffs = vec![Rat::zero(); top];
        for (j, c) in steps {
            coeffs[(j / j0) as usize - 1] = c;
        }
        walls.push(Wall::new(dir, false, qm, coeffs).expect("scattered wall monomials have positive valuation"));
    }
    // The k = 1 member of the family along (s, −(2k − 1)) would lie on the
    // downward half of a line.
    let ray_dirs: Vec<(i64, i64)> = walls.iter().filter(|w| !w.is_full_line).map(|w| w.direction).collect();
    for w in walls.iter_mut().filter(|w| w.is_full_line) {
        let down = if w.direction.1 < 0 { w.direction } else { (-w.direction.0, -w.direction.1) };
        w.collision = down.1 == -1 && ray_dirs.contains(&(down.0, -3));
    }
    let mut d = Diagram { nu, cutoff, walls };
    d.canonicalize();
    d
}

/// Direction groups on one side of the vertical axis, in crossing order.
fn side_groups(d: &Diagram, orientation: Orientation) -> Vec<Vec<Half>> {
    let halves = d.halves();
    let vertical = cw_angle((0, -1));
    let mut groups: Vec<Vec<Half>> = Vec::new();
    let keep: Box<dyn Fn(f64) -> bool> = match orientation {
        Orientation::Clockwise => Box::new(move |a| a < vertical),
        Orientation::Counterclockwise => Box::new(move |a| a > vertical),
    };
    let mut ordered: Vec<Half> = halves.into_iter().filter(|h| keep(cw_angle(h.dir))).collect();
    if orientation == Orientation::Counterclockwise {
        ordered.reverse();
    }
    for h in ordered {
        match groups.last_mut() {
            Some(g) if g[0].dir == h.dir => g.push(h),
            _ => groups.push(vec![h]),
        }
    }
    groups
}

fn orientation_of(k: i64) -> Orientation {
    if k >= 0 {
        Orientation::Clockwise
    } else {
        Orientation::Counterclockwise
    }
}

/// `(x_k, y_k)` as series in the chamber-0 coordinates.
pub fn chamber_transform(d: &Diagram, k: i64) -> Result<(NovikovSeries, NovikovSeries), ScatteringError> {
    let o = orientation_of(k);
    let groups = side_groups(d, o);
    let steps = k.unsigned_abs() as usize;
    if steps > groups.len() {
        return Err(ScatteringError::CutoffTooLow(k));
    }
    let mut x = NovikovSeries::x(d.nu, d.cutoff);
    let mut y = NovikovSeries::y(d.nu, d.cutoff);
    for g in &groups[..steps] {
        for h in g {
            let e = if o == Orientation::Clockwise { h.exps } else { (-h.exps.0, -h.exps.1) };
            (x, y) = cross(&x, &y, &h.f, e)?;
        }
    }
    Ok((x, y))
}

/// Rewrites `w` from one side of a group of walls to the other. The wall
/// functions are invariant under their own crossings, so the inverse change
/// of coordinates is a substitution with the opposite exponents.
fn push_through(w: &NovikovSeries, g: &[Half], o: Orientation) -> Result<NovikovSeries, ScatteringError> {
    let mut w = w.clone();
    for h in g {
        let e = if o == Orientation::Clockwise { (-h.exps.0, -h.exps.1) } else { h.exps };
        w = apply_series(&h.f.truncate(w.cutoff()), e.0, e.1, &w)?;
    }
    Ok(w)
}

/// The chamber-0 superpotential of F₀ rewritten in chamber-`k` coordinates.
pub fn chamber_superpotential(d: &Diagram, k: i64, cutoff: Q) -> Result<NovikovSeries, ScatteringError> {
    let o = orientation_of(k);
    let groups = side_groups(d, o);
    let steps = k.unsigned_abs() as usize;
    if steps > groups.len() || cutoff > d.cutoff {
        return Err(ScatteringError::CutoffTooLow(k));
    }
    let mut w = build(SurfaceSpec::f0(), d.nu, cutoff).expect("F0 is always buildable");
    for g in &groups[..steps] {
        w = push_through(&w, g, o)?;
    }
    Ok(w)
}

/// `W_{±∞}`: the chamber superpotential after every wall on one side of
/// the vertical wall has been crossed.
pub fn limit_superpotential(d: &Diagram, sign: Sign, cutoff: Q) -> Result<NovikovSeries, ScatteringError> {
    let o = if sign == Sign::Plus { Orientation::Clockwise } else { Orientation::Counterclockwise };
    if cutoff > d.cutoff {
        return Err(ScatteringError::CutoffTooLow(if sign == Sign::Plus { i64::MAX } else { i64::MIN }));
    }
    let groups = side_groups(d, o);
    // Ray k has valuation (2k−1)·ν_A/2, so 2C/ν_A + 2 walls always suffice.
    let bound = (cutoff * qi(2) / d.nu.nu_a()).to_integer() as usize + 2;
    if groups.len() > bound {
        return Err(ScatteringError::NoStabilization(bound));
    }
    let mut w = build(SurfaceSpec::f0(), d.nu, cutoff).expect("F0 is always buildable");
    for g in &groups {
        w = push_through(&w, g, o)?;
    }
    Ok(w)
}

/// `W(x·(1 − T^A/y²)^{∓2}, y)` with `W` the F₄ series superpotential.
pub fn limit_closed_form(nu: ValuationMap, sign: Sign, cutoff: Q) -> Result<NovikovSeries, ScatteringError> {
    let w = build(SurfaceSpec::f4_series(), nu, cutoff).expect("F4 series is always buildable");
    let qm = crate::superpotential::q_f4();
    let base = NovikovSeries::from_terms([(Monomial::one(), Rat::one()), (qm, -Rat::one())], nu, cutoff);
    let e = if sign == Sign::Plus { -2 } else { 2 };
    let img_x = &NovikovSeries::x(nu, cutoff) * &base.pow(e)?;
    Ok(w.substitute(&img_x, &NovikovSeries::y(nu, cutoff))?)
}

pub fn diagram_json(d: &Diagram) -> Value {
    json!({
        "cutoff": d.cutoff.to_string(),
        "nu": {"A": d.nu.nu_a().to_string(), "B": d.nu.nu_b().to_string()},
        "walls": d.walls.iter().map(|w| w.to_json(d.nu, d.cutoff)).collect::<Vec<_>>(),
    })
}

/// Draws every wall as a segment or ray from the origin, labelled with its
/// slope and wall monomial.
pub fn diagram_svg(d: &Diagram) -> String {
    const SIZE: f64 = 480.0;
    const C: f64 = SIZE / 2.0;
    const R: f64 = 200.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(s, r##"<g stroke="#bbbbbb" stroke-width="1"><line x1="0" y1="{C}" x2="{SIZE}" y2="{C}"/><line x1="{C}" y1="0" x2="{C}" y2="{SIZE}"/></g>"##);
    for w in &d.walls {
        let (dx, dy) = (w.direction.0 as f64, w.direction.1 as f64);
        let len = (dx * dx + dy * dy).sqrt();
        let (ux, uy) = (dx / len * R, -dy / len * R);
        let (x0, y0) = if w.is_full_line { (C - ux, C - uy) } else { (C, C) };
        let (x1, y1) = (C + ux, C + uy);
        let color = if w.is_full_line { "#1f4e9c" } else { "#b03a2e" };
        let _ = writeln!(
            s,
            r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="{color}" stroke-width="1.5"/>"#
        );
        let slope = if w.direction.0 == 0 { "∞".to_string() } else { format!("{}", w.direction.1 / w.direction.0) };
        let label = format!("slope {slope}: {}", w.transform.wall_monomial);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="monospace" font-size="9" fill="{color}">{}</text>"#,
            x1 + 4.0,
            y1,
            escape(&label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
