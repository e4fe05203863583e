//! Disc classes on Hirzebruch surfaces: intersection numbers, Maslov
//! indices, enumeration of classes cut out by positivity of intersection,
//! and the small cohomology computations behind the obstruction bundles.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::novikov::{qi, Monomial, NovikovSeries, Rat, ValuationMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HirzebruchError {
    #[error("basis mismatch: {0:?} against {1:?}")]
    BasisMismatch(BasisTag, BasisTag),
    #[error("no conversion from {0:?} to {1:?}")]
    NoConversion(BasisTag, BasisTag),
    #[error("sections vanishing at {marked} points of O({n}) form a space of dimension {h0}, not a line")]
    NotALineFamily { n: i64, marked: i64, h0: i64 },
}

/// `F3` and `F4` use `(β₁, β₂, σ, φ)`; `F0Chart` uses `(α₀, β₀, A, B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisTag {
    F3,
    F4,
    F0Chart,
}

impl BasisTag {
    fn names(self) -> [&'static str; 4] {
        match self {
            BasisTag::F3 | BasisTag::F4 => ["β1", "β2", "σ", "φ"],
            BasisTag::F0Chart => ["α0", "β0", "A", "B"],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiscClass {
    pub basis: BasisTag,
    pub coords: [i64; 4],
}

impl DiscClass {
    pub fn new(basis: BasisTag, coords: [i64; 4]) -> DiscClass {
        DiscClass { basis, coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords == [0; 4]
    }

    pub fn convert(&self, target: BasisTag) -> Result<DiscClass, HirzebruchError> {
        let m = conversion(self.basis, target)?;
        Ok(DiscClass { basis: target, coords: apply(&m, &self.coords) })
    }
}

impl fmt::Display for DiscClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, name) in self.coords.iter().zip(self.basis.names()) {
            if *c == 0 {
                continue;
            }
            match (*c, first) {
                (1, true) => write!(f, "{name}")?,
                (1, false) => write!(f, "+{name}")?,
                (-1, _) => write!(f, "-{name}")?,
                (c, true) => write!(f, "{c}{name}")?,
                (c, false) if c > 0 => write!(f, "+{c}{name}")?,
                (c, false) => write!(f, "{c}{name}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereFunctional {
    pub name: String,
    pub basis: BasisTag,
    pub form: [i64; 4],
}

impl SphereFunctional {
    pub fn new(name: &str, basis: BasisTag, form: [i64; 4]) -> SphereFunctional {
        SphereFunctional { name: name.to_string(), basis, form }
    }

    /// The same functional expressed on another basis.
    pub fn convert(&self, target: BasisTag) -> Result<SphereFunctional, HirzebruchError> {
        // c·s is preserved, so the covector transforms by the inverse transpose.
        let back = conversion(target, self.basis)?;
        let mut form = [0; 4];
        for (j, f) in form.iter_mut().enumerate() {
            *f = (0..4).map(|i| self.form[i] * back[i][j]).sum();
        }
        Ok(SphereFunctional { name: self.name.clone(), basis: target, form })
    }
}

type Mat = [[i64; 4]; 4];

const IDENTITY: Mat = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

// Columns: images of β₁ = α₀−2β₀+2B, β₂ = B−β₀, σ = A−2B, φ = B.
const F4_TO_F0: Mat = [[1, 0, 0, 0], [-2, -1, 0, 0], [0, 0, 1, 0], [2, 1, -2, 1]];
// Columns: α₀ = β₁−2β₂, β₀ = φ−β₂, A = σ+2φ, B = φ.
const F0_TO_F4: Mat = [[1, 0, 0, 0], [-2, -1, 0, 0], [0, 0, 1, 0], [0, 1, 2, 1]];

fn conversion(from: BasisTag, to: BasisTag) -> Result<Mat, HirzebruchError> {
    match (from, to) {
        (a, b) if a == b => Ok(IDENTITY),
        (BasisTag::F4, BasisTag::F0Chart) => Ok(F4_TO_F0),
        (BasisTag::F0Chart, BasisTag::F4) => Ok(F0_TO_F4),
        (a, b) => Err(HirzebruchError::NoConversion(a, b)),
    }
}

fn apply(m: &Mat, v: &[i64; 4]) -> [i64; 4] {
    let mut out = [0; 4];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (0..4).map(|j| m[i][j] * v[j]).sum();
    }
    out
}

fn dot(a: &[i64; 4], b: &[i64; 4]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn intersect(c: &DiscClass, s: &SphereFunctional) -> Result<i64, HirzebruchError> {
    if c.basis != s.basis {
        return Err(HirzebruchError::BasisMismatch(c.basis, s.basis));
    }
    Ok(dot(&c.coords, &s.form))
}

/// The toric divisors of the deformed F₄ in the `(α₀, β₀, A, B)` chart.
pub mod table {
    use super::{BasisTag, SphereFunctional};

    pub fn a0() -> SphereFunctional {
        SphereFunctional::new("A0", BasisTag::F0Chart, [-2, 0, 0, 1])
    }
    pub fn b0() -> SphereFunctional {
        SphereFunctional::new("B0", BasisTag::F0Chart, [1, 0, 1, 0])
    }
    pub fn a_inf() -> SphereFunctional {
        SphereFunctional::new("Ainf", BasisTag::F0Chart, [0, 0, 0, 1])
    }
    pub fn b_inf() -> SphereFunctional {
        SphereFunctional::new("Binf", BasisTag::F0Chart, [0, 0, 1, 0])
    }
    pub fn d_eps() -> SphereFunctional {
        SphereFunctional::new("Deps", BasisTag::F0Chart, [0, 1, 2, 1])
    }

    /// In the column order `A₀, B₀, A∞, B∞, D_ε`.
    pub fn all() -> [SphereFunctional; 5] {
        [a0(), b0(), a_inf(), b_inf(), d_eps()]
    }
}

/// Half the Maslov index as a covector on `basis`.
pub fn half_maslov_form(basis: BasisTag) -> [i64; 4] {
    match basis {
        BasisTag::F3 => [1, 1, -1, 2],
        BasisTag::F4 => [1, 1, -2, 2],
        BasisTag::F0Chart => {
            let f: Vec<[i64; 4]> = table::all().iter().map(|s| s.form).collect();
            let (a0, b0, ai, bi, d) = (f[0], f[1], f[2], f[3], f[4]);
            let mut out = [0; 4];
            for i in 0..4 {
                out[i] = d[i] - b0[i] + ai[i] + bi[i];
            }
            debug_assert!((0..4).all(|i| 2 * out[i] == 2 * d[i] + a0[i] + ai[i]));
            out
        }
    }
}

/// The two anticanonical pairings `2c·(D_ε−B₀+A∞+B∞)` and `2c·D_ε + c·A₀ + c·A∞`.
pub fn maslov_pairings(c: &DiscClass) -> Result<(i64, i64), HirzebruchError> {
    let c = c.convert(BasisTag::F0Chart)?;
    let v = |s: SphereFunctional| dot(&c.coords, &s.form);
    let first = 2 * (v(table::d_eps()) - v(table::b0()) + v(table::a_inf()) + v(table::b_inf()));
    let second = 2 * v(table::d_eps()) + v(table::a0()) + v(table::a_inf());
    Ok((first, second))
}

pub fn maslov(c: &DiscClass) -> i64 {
    2 * dot(&c.coords, &half_maslov_form(c.basis))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strictness {
    NonNegative,
    Positive,
}

/// Exclusion of classes that would have to contain `k` copies of an
/// exceptional sphere `S`.
///
/// A class `c` survives if for some `k` with `0 ≤ k ≤ c·bound` the
/// remainder `c − k·S` meets `S` non-negatively (`k = 0`) or positively
/// (`k ≥ 1`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopiesRule {
    pub sphere: SphereFunctional,
    pub self_intersection: i64,
    pub bound: SphereFunctional,
}

impl CopiesRule {
    pub fn admits(&self, c: &DiscClass) -> bool {
        let s = dot(&c.coords, &self.sphere.form);
        let kmax = dot(&c.coords, &self.bound.form);
        (0..=kmax).any(|k| {
            let r = s - k * self.self_intersection;
            if k == 0 {
                r >= 0
            } else {
                r > 0
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSystem {
    pub name: String,
    pub basis: BasisTag,
    pub inequalities: Vec<(SphereFunctional, Strictness)>,
    /// `functional · c = target`, the Maslov condition.
    pub equality: (SphereFunctional, i64),
    pub copies: Option<CopiesRule>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub basis: BasisTag,
    pub classes: Vec<DiscClass>,
    /// Solutions of the raw inequalities removed by the copies rule.
    pub excluded: Vec<DiscClass>,
}

impl Enumeration {
    pub fn flagged(&self) -> bool {
        !self.excluded.is_empty()
    }
}

/// Nonzero integer vectors in `[−bound, bound]⁴` satisfying every
/// inequality and the equality, in lexicographic order.
pub fn enumerate_classes(sys: &ConstraintSystem, bound: i64) -> Enumeration {
    let mut classes = Vec::new();
    let mut excluded = Vec::new();
    let r = -bound..=bound;
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    let v = [a, b, c, d];
                    if v == [0; 4] || dot(&v, &sys.equality.0.form) != sys.equality.1 {
                        continue;
                    }
                    let ok = sys.inequalities.iter().all(|(f, s)| {
                        let x = dot(&v, &f.form);
                        match s {
                            Strictness::NonNegative => x >= 0,
                            Strictness::Positive => x > 0,
                        }
                    });
                    if !ok {
                        continue;
                    }
                    let cls = DiscClass::new(sys.basis, v);
                    match &sys.copies {
                        Some(rule) if !rule.admits(&cls) => excluded.push(cls),
                        _ => classes.push(cls),
                    }
                }
            }
        }
    }
    Enumeration { basis: sys.basis, classes, excluded }
}

/// Classes of `e` whose coordinates all lie in `[−bound, bound]`.
pub fn restrict(e: &[DiscClass], bound: i64) -> Vec<DiscClass> {
    e.iter().filter(|c| c.coords.iter().all(|x| x.abs() <= bound)).copied().collect()
}

/// The inequality systems used to locate walls and index-2 classes.
pub mod systems {
    use super::*;

    fn f(name: &str, basis: BasisTag, form: [i64; 4]) -> (SphereFunctional, Strictness) {
        (SphereFunctional::new(name, basis, form), Strictness::NonNegative)
    }

    fn maslov_eq(basis: BasisTag, half: i64) -> (SphereFunctional, i64) {
        (SphereFunctional::new("mu/2", basis, half_maslov_form(basis)), half)
    }

    fn f3_copies() -> CopiesRule {
        CopiesRule {
            sphere: SphereFunctional::new("S", BasisTag::F3, [0, 1, -3, 1]),
            self_intersection: -3,
            bound: SphereFunctional::new("Finf", BasisTag::F3, [0, 0, 1, 0]),
        }
    }

    fn f3_common() -> Vec<(SphereFunctional, Strictness)> {
        let b = BasisTag::F3;
        vec![f("F0", b, [1, 0, 1, 0]), f("Finf", b, [0, 0, 1, 0]), f("S+", b, [0, 0, 0, 1])]
    }

    /// Index-0 classes for tori right of the wall.
    pub fn f3_index0_right() -> ConstraintSystem {
        let b = BasisTag::F3;
        let mut ineq = f3_common();
        ineq.push(e_right());
        ConstraintSystem {
            name: "F3 index 0, right of wall".into(),
            basis: b,
            inequalities: ineq,
            equality: maslov_eq(b, 0),
            copies: Some(f3_copies()),
        }
    }

    /// `E = S ∪ F_z` seen from a torus right of `F_z`.
    fn e_right() -> (SphereFunctional, Strictness) {
        f("E", BasisTag::F3, [1, 1, -2, 1])
    }

    /// Index-0 classes for tori on the wall, using `E_{0,0}` and `E_{∞,∞}`.
    pub fn f3_index0_on_wall() -> ConstraintSystem {
        let b = BasisTag::F3;
        let mut ineq = f3_common();
        ineq.push(f("E00", b, [2, 1, -1, 1]));
        ineq.push(f("Einfinf", b, [0, 1, -1, 1]));
        ConstraintSystem {
            name: "F3 index 0, on wall".into(),
            basis: b,
            inequalities: ineq,
            equality: maslov_eq(b, 0),
            copies: None,
        }
    }

    pub fn f3_index2_right() -> ConstraintSystem {
        let b = BasisTag::F3;
        let mut ineq = f3_common();
        ineq.push(e_right());
        ConstraintSystem {
            name: "F3 index 2, right of wall".into(),
            basis: b,
            inequalities: ineq,
            equality: maslov_eq(b, 1),
            copies: Some(f3_copies()),
        }
    }

    pub fn f4_index0() -> ConstraintSystem {
        let b = BasisTag::F4;
        ConstraintSystem {
            name: "F4 index 0".into(),
            basis: b,
            inequalities: vec![
                f("F0", b, [1, 0, 1, 0]),
                f("Finf", b, [0, 0, 1, 0]),
                f("S+", b, [0, 0, 0, 1]),
                f("E0", b, [0, 1, -2, 1]),
                f("Einf", b, [2, 1, -2, 1]),
            ],
            equality: maslov_eq(b, 0),
            copies: None,
        }
    }

    /// Index-2 classes on the deformed F₄, written in the `(α₀, β₀, A, B)` chart.
    pub fn f4_index2() -> ConstraintSystem {
        let b = BasisTag::F0Chart;
        ConstraintSystem {
            name: "F4 index 2".into(),
            basis: b,
            inequalities: table::all().into_iter().map(|s| (s, Strictness::NonNegative)).collect(),
            equality: maslov_eq(b, 1),
            copies: None,
        }
    }

    /// The system for `surface ∈ {3, 4}`, Maslov index `0` or `2`, and side.
    /// Only tori right of the F₃ wall have a recorded system; F₄ has no wall
    /// and ignores the side.
    pub fn lookup(surface: u8, index: u8, side: Side) -> Option<ConstraintSystem> {
        match (surface, index, side) {
            (3, 0, Side::On) => Some(f3_index0_on_wall()),
            (3, 0, Side::Right) => Some(f3_index0_right()),
            (3, 2, Side::Right) => Some(f3_index2_right()),
            (4, 0, _) => Some(f4_index0()),
            (4, 2, _) => Some(f4_index2()),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    On,
}

/// Whether a degree-`d` branched cover of a disc by a disc can have total
/// ramification `r`: Riemann–Hurwitz forces `r = d − 1`.
pub fn rh_feasible(degree: i64, forced_ramification: i64) -> bool {
    forced_ramification < degree
}

/// `dim Hⁱ(P¹, O(degree))`.
pub fn h_dim(degree: i64, i: u8) -> i64 {
    match i {
        0 => (degree + 1).max(0),
        1 => (-degree - 1).max(0),
        _ => 0,
    }
}

type Poly = BTreeMap<Vec<u32>, i64>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn check_line(n: i64, marked: i64) -> Result<(), HirzebruchError> {
    let h0 = h_dim(n - marked, 0);
    if h0 != 1 {
        return Err(HirzebruchError::NotALineFamily { n, marked, h0 });
    }
    Ok(())
}

/// Degree of the obstruction bundle over `(P¹)^marked`.
///
/// The fiber over `(z₁, …)` is dual to the line of sections of `O(n)`
/// vanishing at the `zᵢ`, spanned by `Π(tᵢz′ − sᵢw′)` with `zᵢ = [sᵢ:tᵢ]`.
/// Its coefficients are multihomogeneous of multidegree `d`, so the line is
/// the pullback of `O(−1)` along a map of multidegree `d` and `Ob = O(d)`.
pub fn obstruction_degree(n: i64, marked: i64) -> Result<Vec<i64>, HirzebruchError> {
    check_line(n, marked)?;
    let k = marked as usize;
    // Variables: s_1, t_1, …, s_k, t_k, z′, w′.
    let nv = 2 * k + 2;
    let var = |i: usize| {
        let mut e = vec![0u32; nv];
        e[i] = 1;
        e
    };
    let mut p: Poly = Poly::from([(vec![0u32; nv], 1)]);
    for i in 0..k {
        let mut factor = Poly::new();
        let mut tz = var(2 * i + 1);
        tz[2 * k] = 1;
        let mut sw = var(2 * i);
        sw[2 * k + 1] = 1;
        factor.insert(tz, 1);
        factor.insert(sw, -1);
        p = poly_mul(&p, &factor);
    }
    let mut degree: Option<Vec<i64>> = None;
    for e in p.keys() {
        let d: Vec<i64> = (0..k).map(|i| (e[2 * i] + e[2 * i + 1]) as i64).collect();
        match &degree {
            None => degree = Some(d),
            Some(prev) => assert_eq!(*prev, d, "coefficients are multihomogeneous"),
        }
    }
    let d = degree.unwrap_or_default();
    // Ob∨ is the pulled-back tautological line, of degree −d.
    let dual: Vec<i64> = d.iter().map(|x| -x).collect();
    Ok(dual.iter().map(|x| -x).collect())
}

/// The one-point case computed from the transition function between the
/// frames of the line over `z ≠ ∞` and `z ≠ 0`.
///
/// Over `z ≠ ∞` the section `z′ − z` has coordinates `e₀ = (−z, 1)`; over
/// `z ≠ 0` the rescaled section has `e∞ = (−1, 1/z)`. Then `e₀ = g·e∞` with
/// `g = z^k`, and a line with this transition has degree `−k`.
pub fn obstruction_degree_by_transition() -> Result<i64, HirzebruchError> {
    check_line(1, 1)?;
    let nu = ValuationMap::default();
    let c = qi(4);
    let z = NovikovSeries::x(nu, c);
    let one = NovikovSeries::one(nu, c);
    let e0 = [-&z, one.clone()];
    let e_inf = [-&one, NovikovSeries::monomial(Rat::one(), Monomial::x().inverse(), nu, c)];
    let mut k: Option<i64> = None;
    for (a, b) in e0.iter().zip(&e_inf) {
        let g = a * &b.invert_unit().expect("frame components are monomials");
        let (m, coeff) = g.leading().expect("nonzero transition");
        assert!(g.len() == 1 && coeff.is_one() && m.ye == 0 && m.t.is_zero());
        match k {
            None => k = Some(m.xe),
            Some(prev) => assert_eq!(prev, m.xe, "transition is a single scalar"),
        }
    }
    let dual = -k.expect("two components");
    Ok(-dual)
}

#[cfg(test)]
mod tests {
    use super::systems::*;
    use super::*;

    fn f3(c: [i64; 4]) -> DiscClass {
        DiscClass::new(BasisTag::F3, c)
    }

    #[test]
    fn table_entries() {
        let rows = [
            ([1, 0, 0, 0], [-2, 1, 0, 0, 0], -2),
            ([0, 1, 0, 0], [0, 0, 0, 0, 1], 2),
            ([0, 0, 1, 0], [0, 1, 0, 1, 2], 4),
            ([0, 0, 0, 1], [1, 0, 1, 0, 1], 4),
        ];
        for (coords, expect, mu) in rows {
            let c = DiscClass::new(BasisTag::F0Chart, coords);
            let got: Vec<i64> = table::all().iter().map(|s| intersect(&c, s).unwrap()).collect();
            assert_eq!(got, expect);
            assert_eq!(maslov(&c), mu);
            assert_eq!(maslov_pairings(&c).unwrap(), (mu, mu));
        }
    }

    #[test]
    fn basis_mismatch() {
        assert_eq!(
            intersect(&f3([1, 0, 0, 0]), &table::a0()),
            Err(HirzebruchError::BasisMismatch(BasisTag::F3, BasisTag::F0Chart))
        );
        assert_eq!(intersect(&DiscClass::new(BasisTag::F0Chart, [0; 4]), &table::d_eps()), Ok(0));
    }

    #[test]
    fn conversion_round_trip_and_invariance() {
        for v in [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [3, -2, 5, 7]] {
            let c = DiscClass::new(BasisTag::F4, v);
            let d = c.convert(BasisTag::F0Chart).unwrap();
            assert_eq!(d.convert(BasisTag::F4).unwrap(), c);
            assert_eq!(maslov(&c), maslov(&d));
            for s in table::all() {
                let s4 = s.convert(BasisTag::F4).unwrap();
                assert_eq!(intersect(&c, &s4).unwrap(), intersect(&d, &s).unwrap());
            }
        }
        // β₀ = B − β₂ and σ = A − 2B.
        let beta0 = DiscClass::new(BasisTag::F0Chart, [0, 1, 0, 0]).convert(BasisTag::F4).unwrap();
        assert_eq!(beta0.coords, [0, -1, 0, 1]);
        let sigma = DiscClass::new(BasisTag::F4, [0, 0, 1, 0]).convert(BasisTag::F0Chart).unwrap();
        assert_eq!(sigma.coords, [0, 0, 1, -2]);
        assert!(f3([1, 0, 0, 0]).convert(BasisTag::F0Chart).is_err());
    }

    #[test]
    fn f3_on_wall_index0() {
        let e = enumerate_classes(&f3_index0_on_wall(), 6);
        let expect: Vec<_> = (1..=6).map(|m| f3([0, m, m, 0])).collect();
        assert_eq!(e.classes, expect);
    }

    #[test]
    fn f3_off_wall_index0_is_empty_after_copies() {
        let e = enumerate_classes(&f3_index0_right(), 6);
        assert!(e.classes.is_empty());
        let raw: Vec<_> = (1..=6).map(|m| f3([m, -m, 0, 0])).collect();
        assert_eq!(e.excluded, raw);
    }

    #[test]
    fn f3_index2_right_six_classes() {
        let e = enumerate_classes(&f3_index2_right(), 6);
        let mut expect = vec![
            f3([1, 0, 0, 0]),
            f3([0, 1, 0, 0]),
            f3([0, -1, 0, 1]),
            f3([-1, 3, 1, 0]),
            f3([0, 2, 1, 0]),
            f3([1, 1, 1, 0]),
        ];
        expect.sort();
        assert_eq!(e.classes, expect);
        assert!(e.flagged());
    }

    #[test]
    fn f4_index0_family() {
        let e = enumerate_classes(&f4_index0(), 8);
        let expect: Vec<_> = (1..=4).map(|m| DiscClass::new(BasisTag::F4, [0, 2 * m, m, 0])).collect();
        assert_eq!(e.classes, expect);
    }

    #[test]
    fn infeasible_system() {
        let sys = ConstraintSystem {
            name: "empty".into(),
            basis: BasisTag::F3,
            inequalities: vec![],
            equality: (SphereFunctional::new("zero", BasisTag::F3, [0; 4]), 1),
            copies: None,
        };
        assert!(enumerate_classes(&sys, 5).classes.is_empty());
    }

    #[test]
    fn riemann_hurwitz() {
        assert!(!rh_feasible(2, 2));
        assert!(rh_feasible(5, 4));
        assert!(rh_feasible(1, 0));
    }

    #[test]
    fn line_bundle_cohomology() {
        assert_eq!(h_dim(-2, 1), 1);
        assert_eq!(h_dim(0, 1), 0);
        assert_eq!(h_dim(3, 0), 4);
        assert_eq!(h_dim(-3, 0), 0);
    }

    #[test]
    fn obstruction_degrees() {
        assert_eq!(obstruction_degree(1, 1).unwrap(), vec![1]);
        assert_eq!(obstruction_degree(2, 2).unwrap(), vec![1, 1]);
        assert_eq!(obstruction_degree_by_transition().unwrap(), 1);
        assert_eq!(
            obstruction_degree(1, 0),
            Err(HirzebruchError::NotALineFamily { n: 1, marked: 0, h0: 2 })
        );
    }

    #[test]
    fn display() {
        assert_eq!(f3([-1, 3, 1, 0]).to_string(), "-β1+3β2+σ");
        assert_eq!(f3([0; 4]).to_string(), "0");
    }

    fn f4_index2_expected(bound: i64) -> Vec<DiscClass> {
        let bases = [[0, 1, 0, 0], [0, -1, 0, 1], [1, -2, 0, 2], [-1, -2, 1, 0]];
        let step = [0, -2, 1, 0];
        let mut out = Vec::new();
        for b in bases {
            for m in 0..=bound {
                let v = [b[0] + m * step[0], b[1] + m * step[1], b[2] + m * step[2], b[3] + m * step[3]];
                if v.iter().all(|x| x.abs() <= bound) {
                    out.push(DiscClass::new(BasisTag::F0Chart, v));
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn f4_index2_families() {
        for bound in [8, 16] {
            assert_eq!(enumerate_classes(&f4_index2(), bound).classes, f4_index2_expected(bound));
        }
    }

    #[test]
    fn pattern_stability() {
        let all = [
            f3_index0_on_wall(),
            f3_index0_right(),
            f3_index2_right(),
            f4_index0(),
            f4_index2(),
        ];
        for sys in all {
            let small = enumerate_classes(&sys, 5);
            let big = enumerate_classes(&sys, 10);
            assert_eq!(restrict(&big.classes, 5), small.classes, "{}", sys.name);
        }
    }
}
