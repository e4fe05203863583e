//! Truncated Laurent series in `x, y` over the Novikov field.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::exponent::{AreaExponent, Monomial, ValuationMap, Q};
use super::{NovikovError, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Term {
    val: Q,
    mono: Monomial,
    coeff: Rat,
}

/// A finite sum `Σ c·T^t x^a y^b` known modulo terms of valuation `>= cutoff`.
///
/// Terms are kept sorted by `(valuation, monomial)` with no zero coefficients,
/// so two series with the same terms print and serialize identically.
#[derive(Clone, Debug)]
pub struct NovikovSeries {
    nu: ValuationMap,
    cutoff: Q,
    terms: Vec<Term>,
}

fn key_cmp(a: &Term, b: &Term) -> std::cmp::Ordering {
    a.val.cmp(&b.val).then_with(|| a.mono.cmp(&b.mono))
}

impl NovikovSeries {
    pub fn zero(nu: ValuationMap, cutoff: Q) -> NovikovSeries {
        NovikovSeries { nu, cutoff, terms: Vec::new() }
    }

    pub fn one(nu: ValuationMap, cutoff: Q) -> NovikovSeries {
        NovikovSeries::monomial(Rat::one(), Monomial::one(), nu, cutoff)
    }

    pub fn constant(c: Rat, nu: ValuationMap, cutoff: Q) -> NovikovSeries {
        NovikovSeries::monomial(c, Monomial::one(), nu, cutoff)
    }

    pub fn x(nu: ValuationMap, cutoff: Q) -> NovikovSeries {
        NovikovSeries::monomial(Rat::one(), Monomial::x(), nu, cutoff)
    }

    pub fn y(nu: ValuationMap, cutoff: Q) -> NovikovSeries {
        NovikovSeries::monomial(Rat::one(), Monomial::y(), nu, cutoff)
    }

    pub fn monomial(c: Rat, m: Monomial, nu: ValuationMap, cutoff: Q) -> NovikovSeries {
        NovikovSeries::from_terms([(m, c)], nu, cutoff)
    }

    /// Sums repeated monomials, drops zeros and anything at or past `cutoff`.
    pub fn from_terms<I>(terms: I, nu: ValuationMap, cutoff: Q) -> NovikovSeries
    where
        I: IntoIterator<Item = (Monomial, Rat)>,
    {
        let mut acc: HashMap<Monomial, (Q, Rat)> = HashMap::new();
        for (m, c) in terms {
            let v = nu.of(&m.t);
            if v >= cutoff || c.is_zero() {
                continue;
            }
            acc.entry(m).and_modify(|e| e.1 += &c).or_insert((v, c));
        }
        NovikovSeries::from_acc(acc, nu, cutoff)
    }

    fn from_acc(acc: HashMap<Monomial, (Q, Rat)>, nu: ValuationMap, cutoff: Q) -> NovikovSeries {
        let mut terms: Vec<Term> = acc
            .into_iter()
            .filter(|(_, (v, c))| !c.is_zero() && *v < cutoff)
            .map(|(mono, (val, coeff))| Term { val, mono, coeff })
            .collect();
        terms.sort_unstable_by(key_cmp);
        NovikovSeries { nu, cutoff, terms }
    }

    pub fn nu(&self) -> ValuationMap {
        self.nu
    }

    pub fn cutoff(&self) -> Q {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].mono.is_one() && self.terms[0].coeff.is_one()
    }

    /// Terms in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rat)> + '_ {
        self.terms.iter().map(|t| (&t.mono, &t.coeff))
    }

    /// Terms with their valuations, in canonical order.
    pub fn iter_val(&self) -> impl Iterator<Item = (Q, &Monomial, &Rat)> + '_ {
        self.terms.iter().map(|t| (t.val, &t.mono, &t.coeff))
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        let v = self.nu.of(&m.t);
        self.terms
            .binary_search_by(|t| t.val.cmp(&v).then_with(|| t.mono.cmp(m)))
            .map(|i| self.terms[i].coeff.clone())
            .unwrap_or_else(|_| Rat::zero())
    }

    /// Smallest valuation among the stored terms.
    pub fn valuation(&self) -> Option<Q> {
        self.terms.first().map(|t| t.val)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.first().map(|t| (&t.mono, &t.coeff))
    }

    pub fn truncate(&self, c: Q) -> NovikovSeries {
        let c = c.min(self.cutoff);
        let end = self.terms.partition_point(|t| t.val < c);
        NovikovSeries { nu: self.nu, cutoff: c, terms: self.terms[..end].to_vec() }
    }

    pub fn scale(&self, c: &Rat) -> NovikovSeries {
        if c.is_zero() {
            return NovikovSeries::zero(self.nu, self.cutoff);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term { val: t.val, mono: t.mono, coeff: &t.coeff * c })
            .collect();
        NovikovSeries { nu: self.nu, cutoff: self.cutoff, terms }
    }

    /// Multiplies by the exact monomial `c·m`; the cutoff shifts by `val(m)`.
    pub fn mul_monomial(&self, c: &Rat, m: &Monomial) -> NovikovSeries {
        let w = self.nu.of(&m.t);
        if c.is_zero() {
            return NovikovSeries::zero(self.nu, self.cutoff + w);
        }
        // Multiplying by a monomial preserves the relative order of terms.
        let terms = self
            .terms
            .iter()
            .map(|t| Term { val: t.val + w, mono: t.mono * *m, coeff: &t.coeff * c })
            .collect();
        NovikovSeries { nu: self.nu, cutoff: self.cutoff + w, terms }
    }

    fn check_nu(&self, o: &NovikovSeries) {
        assert_eq!(self.nu, o.nu, "series over different valuation maps");
    }

    fn merge(&self, o: &NovikovSeries, sub: bool) -> NovikovSeries {
        self.check_nu(o);
        let cutoff = self.cutoff.min(o.cutoff);
        let a = &self.terms[..self.terms.partition_point(|t| t.val < cutoff)];
        let b = &o.terms[..o.terms.partition_point(|t| t.val < cutoff)];
        let flip = |t: &Term| Term {
            val: t.val,
            mono: t.mono,
            coeff: if sub { -&t.coeff } else { t.coeff.clone() },
        };
        let mut terms = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match key_cmp(&a[i], &b[j]) {
                std::cmp::Ordering::Less => {
                    terms.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    terms.push(flip(&b[j]));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if sub { &a[i].coeff - &b[j].coeff } else { &a[i].coeff + &b[j].coeff };
                    if !c.is_zero() {
                        terms.push(Term { val: a[i].val, mono: a[i].mono, coeff: c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend(a[i..].iter().cloned());
        terms.extend(b[j..].iter().map(flip));
        NovikovSeries { nu: self.nu, cutoff, terms }
    }

    /// Product whose terms are computed below `cut` only; the caller vouches
    /// that every term below `cut` is determined by the inputs.
    pub(crate) fn mul_to(&self, o: &NovikovSeries, cut: Q) -> NovikovSeries {
        self.check_nu(o);
        let Some(vb) = o.valuation() else {
            return NovikovSeries::zero(self.nu, cut);
        };
        let mut acc: HashMap<Monomial, (Q, Rat)> = HashMap::with_capacity(self.terms.len().max(o.terms.len()) * 2);
        for s in &self.terms {
            if s.val + vb >= cut {
                break;
            }
            for t in &o.terms {
                let v = s.val + t.val;
                if v >= cut {
                    break;
                }
                let c = &s.coeff * &t.coeff;
                acc.entry(s.mono * t.mono).and_modify(|e| e.1 += &c).or_insert((v, c));
            }
        }
        NovikovSeries::from_acc(acc, self.nu, cut)
    }

    /// The cutoff to which `self·o` is determined by the known terms.
    fn product_cutoff(&self, o: &NovikovSeries) -> Q {
        let mut c = self.cutoff.min(o.cutoff);
        if let (Some(va), Some(vb)) = (self.valuation(), o.valuation()) {
            c = c.min(self.cutoff + vb).min(o.cutoff + va);
        }
        c
    }

    /// Inverse of `c·m·(1+h)` by the geometric series in `h`.
    ///
    /// With `v = val(m) > 0` the result is only determined up to `cutoff − 2v`,
    /// and that is the cutoff it carries.
    pub fn invert_unit(&self) -> Result<NovikovSeries, NovikovError> {
        let Some(lead) = self.terms.first() else {
            return Err(NovikovError::NotAUnit("zero series".into()));
        };
        if self.terms.get(1).is_some_and(|t| t.val == lead.val) {
            return Err(NovikovError::NonNilpotentRemainder);
        }
        let v = lead.val;
        let final_cut = self.cutoff.min(self.cutoff - v - v);
        let geo_cut = final_cut + v;
        let inv_c = lead.coeff.recip();
        let inv_m = lead.mono.inverse();
        let u = self.mul_monomial(&inv_c, &inv_m);
        let h = NovikovSeries { nu: self.nu, cutoff: geo_cut, terms: u.terms[1..].to_vec() }.truncate(geo_cut);
        let g = geometric(&h, geo_cut);
        Ok(g.mul_monomial(&inv_c, &inv_m).truncate(final_cut))
    }

    pub fn pow(&self, n: i64) -> Result<NovikovSeries, NovikovError> {
        if n < 0 {
            return self.pow(-n)?.invert_unit();
        }
        let mut result = NovikovSeries::one(self.nu, self.cutoff);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// Truncates every comparison to `c`.
    pub fn eq_up_to_cutoff(&self, o: &NovikovSeries, c: Q) -> bool {
        let a = self.terms.iter().take_while(|t| t.val < c);
        let b = o.terms.iter().take_while(|t| t.val < c);
        a.eq(b)
    }

    /// Differences `self − o` below `c`, for diagnostics.
    pub fn diff_below(&self, o: &NovikovSeries, c: Q) -> NovikovSeries {
        (self - o).truncate(c)
    }

    /// `Σ c·T^t x^a y^b ↦ Σ c·T^t·img_x^a·img_y^b`.
    ///
    /// Each image must have a single lowest-valuation term `ℓ`, so it factors
    /// as `ℓ·(1+h)` with `h` of positive valuation. This covers both wall
    /// crossings (`x·f^k` with `f = 1 + …`) and monomial changes of variables.
    /// When a lead monomial has negative valuation the result cutoff drops by
    /// the largest valuation loss over the terms present.
    pub fn substitute(&self, img_x: &NovikovSeries, img_y: &NovikovSeries) -> Result<NovikovSeries, NovikovError> {
        self.check_nu(img_x);
        self.check_nu(img_y);
        let sx = split_unit(img_x, "x")?;
        let sy = split_unit(img_y, "y")?;
        let prec_u = sx.unit.cutoff.min(sy.unit.cutoff);

        let mut groups: BTreeMap<(i64, i64), Vec<&Term>> = BTreeMap::new();
        for t in &self.terms {
            groups.entry((t.mono.xe, t.mono.ye)).or_default().push(t);
        }
        let mut out_cut = self.cutoff.min(img_x.cutoff).min(img_y.cutoff);
        let mut plans = Vec::with_capacity(groups.len());
        for (&(a, b), ts) in &groups {
            let lead = sx.lead.pow(a) * sy.lead.pow(b);
            let shift = self.nu.of(&lead.t);
            let vmin = ts[0].val + shift;
            out_cut = out_cut.min(self.cutoff + shift).min(vmin + prec_u);
            plans.push((a, b, lead, shift, vmin, ts));
        }

        let mut need_x: HashMap<i64, Q> = HashMap::new();
        let mut need_y: HashMap<i64, Q> = HashMap::new();
        for &(a, b, _, _, vmin, _) in &plans {
            if vmin < out_cut {
                let p = out_cut - vmin;
                need_x.entry(a).and_modify(|q| *q = (*q).max(p)).or_insert(p);
                need_y.entry(b).and_modify(|q| *q = (*q).max(p)).or_insert(p);
            }
        }
        let xp = unit_powers(&sx.unit, &need_x)?;
        let yp = unit_powers(&sy.unit, &need_y)?;

        let mut out = NovikovSeries::zero(self.nu, out_cut);
        for (a, b, lead, shift, vmin, ts) in plans {
            if vmin >= out_cut {
                continue;
            }
            let p = out_cut - vmin;
            let unit = xp[&a].truncate(p).mul_to(&yp[&b].truncate(p), p);
            let lc = rat_pow(&sx.coeff, a) * rat_pow(&sy.coeff, b);
            let poly = NovikovSeries {
                nu: self.nu,
                cutoff: out_cut,
                terms: ts
                    .iter()
                    .filter(|t| t.val + shift < out_cut)
                    .map(|t| Term {
                        val: t.val + shift,
                        mono: Monomial::new(t.mono.t + lead.t, lead.xe, lead.ye),
                        coeff: &t.coeff * &lc,
                    })
                    .collect(),
            };
            let mut poly = poly;
            poly.terms.sort_unstable_by(key_cmp);
            out = &out + &poly.mul_to(&unit, out_cut);
        }
        Ok(out)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Rat) -> Rat) -> NovikovSeries {
        let terms = self
            .terms
            .iter()
            .filter_map(|t| {
                let c = f(&t.coeff);
                (!c.is_zero()).then_some(Term { val: t.val, mono: t.mono, coeff: c })
            })
            .collect();
        NovikovSeries { nu: self.nu, cutoff: self.cutoff, terms }
    }

    /// Exact structural identity: same valuation map, cutoff and terms.
    pub fn identical(&self, o: &NovikovSeries) -> bool {
        self.nu == o.nu && self.cutoff == o.cutoff && self.terms == o.terms
    }
}

struct Split {
    lead: Monomial,
    coeff: Rat,
    unit: NovikovSeries,
}

fn split_unit(img: &NovikovSeries, name: &str) -> Result<Split, NovikovError> {
    let Some(lead) = img.terms.first() else {
        return Err(NovikovError::UnsupportedSubstitution(format!("image of {name} is zero")));
    };
    if img.terms.get(1).is_some_and(|t| t.val == lead.val) {
        return Err(NovikovError::UnsupportedSubstitution(format!(
            "image of {name} has several lowest-valuation terms"
        )));
    }
    let coeff = lead.coeff.clone();
    let unit = img.mul_monomial(&coeff.recip(), &lead.mono.inverse());
    Ok(Split { lead: lead.mono, coeff, unit })
}

fn rat_pow(c: &Rat, n: i64) -> Rat {
    let mut r = Rat::one();
    let base = if n < 0 { c.recip() } else { c.clone() };
    for _ in 0..n.unsigned_abs() {
        r = &r * &base;
    }
    r
}

/// Powers `u^k` of a unit `u = 1 + h`, each to the requested precision.
fn unit_powers(u: &NovikovSeries, need: &HashMap<i64, Q>) -> Result<HashMap<i64, NovikovSeries>, NovikovError> {
    let mut out = HashMap::new();
    let top = need.values().copied().max();
    let Some(top) = top else { return Ok(out) };
    let u = u.truncate(top);
    let inv = if need.keys().any(|k| *k < 0) { Some(u.invert_unit()?) } else { None };
    for (&k, &p) in need {
        let base = if k < 0 { inv.as_ref().unwrap() } else { &u };
        out.insert(k, pow_to(base, k.unsigned_abs(), p));
    }
    Ok(out)
}

fn pow_to(s: &NovikovSeries, n: u64, p: Q) -> NovikovSeries {
    let mut result = NovikovSeries::one(s.nu, p);
    let mut base = s.truncate(p);
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul_to(&base, p);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul_to(&base, p);
        }
    }
    result
}

/// `Σ (−h)^k` below `cut`; `h` must have strictly positive valuation.
fn geometric(h: &NovikovSeries, cut: Q) -> NovikovSeries {
    let one = NovikovSeries::one(h.nu, cut);
    if h.is_zero() {
        return one;
    }
    let neg = -h;
    let mut sum = one.clone();
    let mut p = one;
    loop {
        p = p.mul_to(&neg, cut);
        if p.is_zero() {
            break;
        }
        sum = &sum + &p;
    }
    sum
}

impl PartialEq for NovikovSeries {
    /// Equal when the valuation maps agree and the terms agree below the
    /// smaller of the two cutoffs.
    fn eq(&self, o: &NovikovSeries) -> bool {
        self.nu == o.nu && self.eq_up_to_cutoff(o, self.cutoff.min(o.cutoff))
    }
}

impl<'a> Add<&'a NovikovSeries> for &'a NovikovSeries {
    type Output = NovikovSeries;
    fn add(self, o: &'a NovikovSeries) -> NovikovSeries {
        self.merge(o, false)
    }
}

impl<'a> Sub<&'a NovikovSeries> for &'a NovikovSeries {
    type Output = NovikovSeries;
    fn sub(self, o: &'a NovikovSeries) -> NovikovSeries {
        self.merge(o, true)
    }
}

impl<'a> Mul<&'a NovikovSeries> for &'a NovikovSeries {
    type Output = NovikovSeries;
    /// Panics if the valuation maps differ.
    fn mul(self, o: &'a NovikovSeries) -> NovikovSeries {
        let c = self.product_cutoff(o);
        self.mul_to(o, c)
    }
}

impl Neg for &NovikovSeries {
    type Output = NovikovSeries;
    fn neg(self) -> NovikovSeries {
        self.scale(&-Rat::one())
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<NovikovSeries> for NovikovSeries {
            type Output = NovikovSeries;
            fn $m(self, o: NovikovSeries) -> NovikovSeries {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a NovikovSeries> for NovikovSeries {
            type Output = NovikovSeries;
            fn $m(self, o: &'a NovikovSeries) -> NovikovSeries {
                (&self).$m(o)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for NovikovSeries {
    type Output = NovikovSeries;
    fn neg(self) -> NovikovSeries {
        -&self
    }
}

impl fmt::Display for NovikovSeries {
    /// Human-readable form such as `y + T^{B}y^-1 + 2T^{A+B}y^-2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            let a = t.coeff.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let m = t.mono.to_string();
            if a.is_one() {
                f.write_str(&m)?;
            } else if t.mono.is_one() {
                write!(f, "{a}")?;
            } else if a.is_integer() {
                write!(f, "{a}{m}")?;
            } else {
                write!(f, "({a}){m}")?;
            }
        }
        Ok(())
    }
}

/// `a + b`, truncated to the smaller cutoff.
pub fn add(a: &NovikovSeries, b: &NovikovSeries) -> NovikovSeries {
    a + b
}

/// `a·b`, truncated to the cutoff both factors determine.
pub fn mul(a: &NovikovSeries, b: &NovikovSeries) -> NovikovSeries {
    a * b
}

pub fn invert_unit(s: &NovikovSeries) -> Result<NovikovSeries, NovikovError> {
    s.invert_unit()
}

pub fn pow(s: &NovikovSeries, n: i64) -> Result<NovikovSeries, NovikovError> {
    s.pow(n)
}

pub fn substitute(s: &NovikovSeries, img_x: &NovikovSeries, img_y: &NovikovSeries) -> Result<NovikovSeries, NovikovError> {
    s.substitute(img_x, img_y)
}

pub fn eq_up_to_cutoff(a: &NovikovSeries, b: &NovikovSeries, c: Q) -> bool {
    a.eq_up_to_cutoff(b, c)
}

/// Convenience constructor for a series from `(coeff, monomial)` pairs.
pub fn series<I>(nu: ValuationMap, cutoff: Q, terms: I) -> NovikovSeries
where
    I: IntoIterator<Item = (i64, Monomial)>,
{
    NovikovSeries::from_terms(terms.into_iter().map(|(c, m)| (m, Rat::from_integer(c))), nu, cutoff)
}

/// `T^t` as a monomial.
pub fn t_pow(t: AreaExponent) -> Monomial {
    Monomial::new(t, 0, 0)
}

/// `1 + Σ c_k q^k` for the given coefficients.
pub fn one_plus(q: &Monomial, coeffs: &[Rat], nu: ValuationMap, cutoff: Q) -> NovikovSeries {
    let mut terms = vec![(Monomial::one(), Rat::one())];
    for (k, c) in coeffs.iter().enumerate() {
        terms.push((q.pow(k as i64 + 1), c.clone()));
    }
    NovikovSeries::from_terms(terms, nu, cutoff)
}
