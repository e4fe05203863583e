//! Area exponents, valuations and monomials.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::NovikovError;

/// Small exact rational used for exponents, valuations and cutoffs.
pub type Q = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

/// A formal combination `coeff_a·A + coeff_b·B` of the two area symbols.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AreaExponent {
    pub coeff_a: Q,
    pub coeff_b: Q,
}

impl AreaExponent {
    pub const ZERO: AreaExponent = AreaExponent {
        coeff_a: Ratio::new_raw(0, 1),
        coeff_b: Ratio::new_raw(0, 1),
    };

    pub fn new(coeff_a: Q, coeff_b: Q) -> AreaExponent {
        AreaExponent { coeff_a, coeff_b }
    }

    pub fn a() -> AreaExponent {
        AreaExponent::new(qi(1), qi(0))
    }

    pub fn b() -> AreaExponent {
        AreaExponent::new(qi(0), qi(1))
    }

    pub fn is_zero(&self) -> bool {
        self.coeff_a.is_zero() && self.coeff_b.is_zero()
    }

    pub fn scale(&self, k: Q) -> AreaExponent {
        AreaExponent::new(self.coeff_a * k, self.coeff_b * k)
    }
}

impl Add for AreaExponent {
    type Output = AreaExponent;
    fn add(self, o: AreaExponent) -> AreaExponent {
        AreaExponent::new(self.coeff_a + o.coeff_a, self.coeff_b + o.coeff_b)
    }
}

impl Sub for AreaExponent {
    type Output = AreaExponent;
    fn sub(self, o: AreaExponent) -> AreaExponent {
        AreaExponent::new(self.coeff_a - o.coeff_a, self.coeff_b - o.coeff_b)
    }
}

impl Neg for AreaExponent {
    type Output = AreaExponent;
    fn neg(self) -> AreaExponent {
        AreaExponent::new(-self.coeff_a, -self.coeff_b)
    }
}

impl Mul<i64> for AreaExponent {
    type Output = AreaExponent;
    fn mul(self, k: i64) -> AreaExponent {
        self.scale(qi(k))
    }
}

fn fmt_q_times(f: &mut fmt::Formatter<'_>, c: Q, sym: &str, first: bool) -> fmt::Result {
    if c.is_zero() {
        return Ok(());
    }
    if c.is_negative() {
        f.write_str("-")?;
    } else if !first {
        f.write_str("+")?;
    }
    let a = c.abs();
    if *a.numer() != 1 {
        write!(f, "{}", a.numer())?;
    }
    f.write_str(sym)?;
    if *a.denom() != 1 {
        write!(f, "/{}", a.denom())?;
    }
    Ok(())
}

impl fmt::Display for AreaExponent {
    /// Formats as e.g. `A/2+B`, `-A/2-B`, `2A`; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        fmt_q_times(f, self.coeff_a, "A", true)?;
        fmt_q_times(f, self.coeff_b, "B", self.coeff_a.is_zero())
    }
}

/// Numeric weights for the area symbols; `val(T^t) = t_A·nu_A + t_B·nu_B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ValuationMap {
    nu_a: Q,
    nu_b: Q,
}

impl ValuationMap {
    pub fn new(nu_a: Q, nu_b: Q) -> Result<ValuationMap, NovikovError> {
        if nu_a <= Q::zero() || nu_b <= Q::zero() || nu_a <= nu_b {
            return Err(NovikovError::InvalidValuation { nu_a, nu_b });
        }
        Ok(ValuationMap { nu_a, nu_b })
    }

    pub fn nu_a(&self) -> Q {
        self.nu_a
    }

    pub fn nu_b(&self) -> Q {
        self.nu_b
    }

    pub fn of(&self, t: &AreaExponent) -> Q {
        t.coeff_a * self.nu_a + t.coeff_b * self.nu_b
    }

    /// The default cutoff `20·nu_B`.
    pub fn default_cutoff(&self) -> Q {
        self.nu_b * 20
    }
}

impl Default for ValuationMap {
    fn default() -> ValuationMap {
        ValuationMap { nu_a: qi(2), nu_b: qi(1) }
    }
}

/// `T^t x^xe y^ye`.
///
/// The derived order is the lexicographic tie-break `(coeff_a, coeff_b, xe, ye)`;
/// series sort by valuation first and use this order among equal valuations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub t: AreaExponent,
    pub xe: i64,
    pub ye: i64,
}

impl Monomial {
    pub fn new(t: AreaExponent, xe: i64, ye: i64) -> Monomial {
        Monomial { t, xe, ye }
    }

    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn x() -> Monomial {
        Monomial::new(AreaExponent::ZERO, 1, 0)
    }

    pub fn y() -> Monomial {
        Monomial::new(AreaExponent::ZERO, 0, 1)
    }

    /// `T^(a·A + b·B) x^xe y^ye`.
    pub fn ab(a: Q, b: Q, xe: i64, ye: i64) -> Monomial {
        Monomial::new(AreaExponent::new(a, b), xe, ye)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial::new(-self.t, -self.xe, -self.ye)
    }

    pub fn pow(&self, k: i64) -> Monomial {
        Monomial::new(self.t * k, self.xe * k, self.ye * k)
    }

    pub fn is_one(&self) -> bool {
        self.t.is_zero() && self.xe == 0 && self.ye == 0
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, o: Monomial) -> Monomial {
        Monomial::new(self.t + o.t, self.xe + o.xe, self.ye + o.ye)
    }
}

/// `val(m) = m.t.coeff_a·nu_A + m.t.coeff_b·nu_B`.
pub fn val(m: &Monomial, nu: &ValuationMap) -> Q {
    nu.of(&m.t)
}

fn fmt_var(f: &mut fmt::Formatter<'_>, v: &str, e: i64) -> fmt::Result {
    match e {
        0 => Ok(()),
        1 => f.write_str(v),
        _ => write!(f, "{v}^{e}"),
    }
}

impl fmt::Display for Monomial {
    /// Formats as e.g. `T^{A/2+B}x^-1y^-2`; the unit monomial prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        if !self.t.is_zero() {
            write!(f, "T^{{{}}}", self.t)?;
        }
        fmt_var(f, "x", self.xe)?;
        fmt_var(f, "y", self.ye)
    }
}

/// A parsed monomial with a rational coefficient, e.g. `2T^{A+B}/y^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledMonomial {
    pub coeff: super::Rat,
    pub mono: Monomial,
}

struct Cursor<'a> {
    s: &'a [u8],
    i: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.i < self.s.len() && (self.s[self.i] == b' ' || self.s[self.i] == b'*') {
            self.i += 1;
        }
    }
    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.i).copied()
    }
    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }
    fn int(&mut self) -> Option<i64> {
        self.skip_ws();
        let start = self.i;
        if self.i < self.s.len() && (self.s[self.i] == b'-' || self.s[self.i] == b'+') {
            self.i += 1;
        }
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[start..self.i]).ok()?.parse().ok()
    }
    fn digits(&mut self) -> Option<i64> {
        self.skip_ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.i]).ok()?.parse().ok()
    }
}

/// Parses `A/2+B`, `-A/2-B`, `3A/2`, `1/2A`, `0`.
fn parse_area(c: &mut Cursor<'_>) -> Option<AreaExponent> {
    let mut t = AreaExponent::ZERO;
    let mut first = true;
    loop {
        let sign = match c.peek() {
            Some(b'+') => {
                c.i += 1;
                1
            }
            Some(b'-') => {
                c.i += 1;
                -1
            }
            _ if first => 1,
            _ => break,
        };
        first = false;
        let mut k = qi(sign);
        if let Some(n) = c.digits() {
            k *= qi(n);
            if c.peek() == Some(b'/') && c.s.get(c.i + 1).is_some_and(|b| b.is_ascii_digit()) {
                c.i += 1;
                k /= qi(c.digits()?);
            }
        }
        match c.peek() {
            Some(b'A') => {
                c.i += 1;
                if c.eat(b'/') {
                    k /= qi(c.digits()?);
                }
                t.coeff_a += k;
            }
            Some(b'B') => {
                c.i += 1;
                if c.eat(b'/') {
                    k /= qi(c.digits()?);
                }
                t.coeff_b += k;
            }
            _ if k.is_zero() => {}
            _ => return None,
        }
    }
    Some(t)
}

fn parse_power(c: &mut Cursor<'_>) -> Option<i64> {
    if !c.eat(b'^') {
        return Some(1);
    }
    if c.eat(b'{') {
        let e = c.int()?;
        return c.eat(b'}').then_some(e);
    }
    if c.eat(b'(') {
        let e = c.int()?;
        return c.eat(b')').then_some(e);
    }
    c.int()
}

fn parse_factor(c: &mut Cursor<'_>, coeff: &mut super::Rat, m: &mut Monomial, sign: i64) -> Option<()> {
    match c.peek()? {
        b'T' => {
            c.i += 1;
            if !c.eat(b'^') {
                return None;
            }
            let t = if c.eat(b'{') {
                let t = parse_area(c)?;
                c.eat(b'}').then_some(t)?
            } else if c.eat(b'(') {
                let t = parse_area(c)?;
                c.eat(b')').then_some(t)?
            } else {
                match c.peek()? {
                    b'A' => {
                        c.i += 1;
                        AreaExponent::a()
                    }
                    b'B' => {
                        c.i += 1;
                        AreaExponent::b()
                    }
                    _ => return None,
                }
            };
            m.t = m.t + t * sign;
        }
        b'x' => {
            c.i += 1;
            m.xe += sign * parse_power(c)?;
        }
        b'y' => {
            c.i += 1;
            m.ye += sign * parse_power(c)?;
        }
        b'(' => {
            c.i += 1;
            let inner = parse_product(c)?;
            if !c.eat(b')') {
                return None;
            }
            let e = parse_power(c)? * sign;
            if e < 0 {
                if inner.coeff.is_zero() {
                    return None;
                }
                for _ in 0..-e {
                    *coeff = &*coeff / &inner.coeff;
                }
            } else {
                for _ in 0..e {
                    *coeff = &*coeff * &inner.coeff;
                }
            }
            *m = *m * inner.mono.pow(e);
        }
        d if d.is_ascii_digit() => {
            let n = super::Rat::from_integer(c.digits()?);
            if sign > 0 {
                *coeff = &*coeff * &n;
            } else {
                *coeff = &*coeff / &n;
            }
        }
        _ => return None,
    }
    Some(())
}

fn parse_product(c: &mut Cursor<'_>) -> Option<ScaledMonomial> {
    let mut coeff = super::Rat::one();
    let mut m = Monomial::one();
    if c.eat(b'-') {
        coeff = -coeff;
    }
    if c.peek() == Some(b'1') && !c.s.get(c.i + 1).is_some_and(|b| b.is_ascii_digit()) {
        c.i += 1;
    } else {
        parse_factor(c, &mut coeff, &mut m, 1)?;
    }
    loop {
        match c.peek() {
            None | Some(b')') => break,
            Some(b'/') => {
                c.i += 1;
                parse_factor(c, &mut coeff, &mut m, -1)?;
            }
            Some(_) => parse_factor(c, &mut coeff, &mut m, 1)?,
        }
    }
    Some(ScaledMonomial { coeff, mono: m })
}

impl FromStr for ScaledMonomial {
    type Err = NovikovError;
    /// Accepts forms such as `T^A/y`, `T^{A/2}x/y`, `2T^{A+B}/y^2`,
    /// `T^{-A/2-B}x y^2`, `T^{A/2}x^-1y^-1` and `1/(xy)`.
    fn from_str(s: &str) -> Result<ScaledMonomial, NovikovError> {
        let mut c = Cursor { s: s.trim().as_bytes(), i: 0 };
        let r = parse_product(&mut c);
        match r {
            Some(m) if c.peek().is_none() => Ok(m),
            _ => Err(NovikovError::Parse(s.to_string())),
        }
    }
}

impl FromStr for Monomial {
    type Err = NovikovError;
    fn from_str(s: &str) -> Result<Monomial, NovikovError> {
        let sm: ScaledMonomial = s.parse()?;
        if sm.coeff.is_one() {
            Ok(sm.mono)
        } else {
            Err(NovikovError::Parse(s.to_string()))
        }
    }
}
