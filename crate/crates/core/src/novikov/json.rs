//! Wire format for series: every rational is a `"p/q"` string.
//!
//! ```json
//! {"cutoff":"20","nu":{"A":"2","B":"1"},"terms":[{"c":"3","tA":"1/2","tB":"1","x":1,"y":-2}]}
//! ```

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::exponent::{AreaExponent, Monomial, ValuationMap, Q};
use super::{NovikovError, NovikovSeries, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NuJson {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: String,
    #[serde(rename = "tA")]
    pub t_a: String,
    #[serde(rename = "tB")]
    pub t_b: String,
    pub x: i64,
    pub y: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub cutoff: String,
    pub nu: NuJson,
    pub terms: Vec<TermJson>,
}

fn q_str(v: Q) -> String {
    if *v.denom() == 1 {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

fn parse_q(s: &str) -> Result<Q, NovikovError> {
    let bad = || NovikovError::Json(format!("bad rational `{s}`"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: i64 = n.trim().parse().map_err(|_| bad())?;
    let d: i64 = d.trim().parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

impl From<&NovikovSeries> for SeriesJson {
    fn from(s: &NovikovSeries) -> SeriesJson {
        let nu = s.nu();
        SeriesJson {
            cutoff: q_str(s.cutoff()),
            nu: NuJson { a: q_str(nu.nu_a()), b: q_str(nu.nu_b()) },
            terms: s
                .iter()
                .map(|(m, c)| TermJson {
                    c: c.to_string(),
                    t_a: q_str(m.t.coeff_a),
                    t_b: q_str(m.t.coeff_b),
                    x: m.xe,
                    y: m.ye,
                })
                .collect(),
        }
    }
}

impl TryFrom<&SeriesJson> for NovikovSeries {
    type Error = NovikovError;
    fn try_from(j: &SeriesJson) -> Result<NovikovSeries, NovikovError> {
        let nu = ValuationMap::new(parse_q(&j.nu.a)?, parse_q(&j.nu.b)?)?;
        let cutoff = parse_q(&j.cutoff)?;
        let mut seen = std::collections::HashSet::new();
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            let c: Rat = t.c.parse().map_err(|e: super::ParseRatError| NovikovError::Json(e.to_string()))?;
            let m = Monomial::new(AreaExponent::new(parse_q(&t.t_a)?, parse_q(&t.t_b)?), t.x, t.y);
            if num_traits::Zero::is_zero(&c) {
                return Err(NovikovError::Json(format!("zero coefficient at {m}")));
            }
            if nu.of(&m.t) >= cutoff {
                return Err(NovikovError::Json(format!("term {m} lies at or beyond the cutoff")));
            }
            if !seen.insert(m) {
                return Err(NovikovError::Json(format!("repeated monomial {m}")));
            }
            terms.push((m, c));
        }
        Ok(NovikovSeries::from_terms(terms, nu, cutoff))
    }
}

impl Serialize for NovikovSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeriesJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for NovikovSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<NovikovSeries, D::Error> {
        let j = SeriesJson::deserialize(d)?;
        NovikovSeries::try_from(&j).map_err(serde::de::Error::custom)
    }
}

impl NovikovSeries {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("series serialization is infallible")
    }

    pub fn from_json(s: &str) -> Result<NovikovSeries, NovikovError> {
        let j: SeriesJson = serde_json::from_str(s).map_err(|e| NovikovError::Json(e.to_string()))?;
        NovikovSeries::try_from(&j)
    }
}
