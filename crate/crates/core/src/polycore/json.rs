//! Wire format for polynomials:
//!
//! ```json
//! {"n": 3, "char": 0, "terms": [{"c": "-1", "m": {"x_2_1": 1, "x_2_3": 1}}]}
//! ```
//!
//! Terms are listed leading term first (descending degrevlex), and each
//! monomial's variables appear in [`VarId`] order. Coefficients are decimal
//! strings; over `F_p` they are the canonical residue in `[0, p)`.

use serde::de::Error as _;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::monomial::Monomial;
use super::poly::Poly;
use super::scalar::Ring;
use super::var::VarId;
use crate::error::Result;

struct MonomialJson<'a>(&'a Monomial);

impl Serialize for MonomialJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.iter().count()))?;
        for (v, e) in self.0.iter() {
            map.serialize_entry(&v.to_string(), &e)?;
        }
        map.end()
    }
}

struct TermJson<'a>(&'a Monomial, String);

impl Serialize for TermJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Term", 2)?;
        st.serialize_field("c", &self.1)?;
        st.serialize_field("m", &MonomialJson(self.0))?;
        st.end()
    }
}

struct TermsJson<'a>(&'a Poly);

impl Serialize for TermsJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.terms().rev().map(|(m, c)| TermJson(m, c.to_string())))
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let ring = self.ring();
        let mut st = s.serialize_struct("Poly", 3)?;
        st.serialize_field("n", &ring.n)?;
        st.serialize_field("char", &ring.characteristic)?;
        st.serialize_field("terms", &TermsJson(self))?;
        st.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    c: String,
    m: serde_json::Map<String, serde_json::Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoly {
    n: u8,
    #[serde(rename = "char")]
    characteristic: u32,
    terms: Vec<RawTerm>,
}

impl RawPoly {
    fn into_poly(self) -> Result<Poly> {
        let ring = Ring::new(self.n, self.characteristic)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            let mut pairs = Vec::with_capacity(t.m.len());
            for (name, e) in t.m {
                let v: VarId = name.parse()?;
                let e = e
                    .as_u64()
                    .and_then(|e| u32::try_from(e).ok())
                    .filter(|&e| e > 0)
                    .ok_or_else(|| crate::Error::Parse(format!("bad exponent for {name}")))?;
                pairs.push((v, e));
            }
            terms.push((Monomial::from_pairs(pairs)?, ring.parse_scalar(&t.c)?));
        }
        Poly::from_terms(ring, terms)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        RawPoly::deserialize(d)?.into_poly().map_err(D::Error::custom)
    }
}

impl Poly {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("poly serializes")
    }

    pub fn from_json(s: &str) -> Result<Poly> {
        Ok(serde_json::from_str(s)?)
    }
}
