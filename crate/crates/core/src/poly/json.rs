use serde::{Deserialize, Serialize};

use super::SparsePoly;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::rational::Rational;

/// Canonical JSON form: terms sorted lexicographically by exponent, reduced
/// fractions with positive denominators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub degree: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

impl From<&SparsePoly> for PolyJson {
    fn from(p: &SparsePoly) -> Self {
        PolyJson {
            nvars: p.nvars(),
            degree: p.degree(),
            terms: p
                .terms()
                .map(|(e, c)| TermJson {
                    exp: e.entries().to_vec(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for SparsePoly {
    type Error = Error;

    fn try_from(j: PolyJson) -> Result<SparsePoly> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in j.terms {
            let num = t
                .num
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator {:?}", t.num)))?;
            let den: num_bigint::BigInt = t
                .den
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator {:?}", t.den)))?;
            if den <= num_bigint::BigInt::from(0) {
                return Err(Error::Parse(format!("denominator must be positive, got {den}")));
            }
            terms.push((Exponent::new(t.exp), Rational::new(num, den)));
        }
        SparsePoly::from_terms(j.nvars, j.degree, terms)
    }
}

impl SparsePoly {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PolyJson::from(self)).expect("serializable")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&PolyJson::from(self)).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<SparsePoly> {
        let j: PolyJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        SparsePoly::try_from(j)
    }
}
