//! JSON ensemble description shared by the CLI and the Python bindings.
//!
//! ```json
//! {
//!   "cn_types": [
//!     {"kind": "spc", "s": 3},
//!     {"kind": "hamming", "s": 7},
//!     {"kind": "explicit", "parity": ["1010101", "0110011", "0001111"]}
//!   ],
//!   "rho": ["1/5", "2/5", 0.4],
//!   "vn": {"q": 2, "lambda": {"2": "1/10", "3": "9/10"}}
//! }
//! ```
//!
//! Fractions are written as `"num/den"` strings or decimals (strings or JSON
//! numbers); decimals are read exactly, so `0.05` is `1/20`. `vn` may carry
//! `q` (VN-regular ensemble), `lambda` (unstructured ensemble), or both.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ensemble::{CheckNodeType, CnMixture, Ensemble1Spec, Ensemble2Spec, Rational};
use crate::error::{GldpcError, Result};
use crate::gf2::BitMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CnKind {
    Spc,
    Hamming,
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CnTypeSpec {
    pub kind: CnKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VnSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "ser_lambda",
        deserialize_with = "de_lambda"
    )]
    pub lambda: Option<BTreeMap<usize, Rational>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub cn_types: Vec<CnTypeSpec>,
    #[serde(serialize_with = "ser_rationals", deserialize_with = "de_rationals")]
    pub rho: Vec<Rational>,
    pub vn: VnSpec,
}

impl SpecFile {
    /// Parses and validates a spec document. Syntax errors carry line and
    /// column; semantic errors name the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SpecFile = serde_json::from_str(text).map_err(|e| GldpcError::SpecFile(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec files always serialize")
    }

    fn validate(&self) -> Result<()> {
        if self.vn.q.is_none() && self.vn.lambda.is_none() {
            return Err(GldpcError::SpecFile("vn: needs 'q', 'lambda', or both".into()));
        }
        if self.rho.len() != self.cn_types.len() {
            return Err(GldpcError::SpecFile(format!(
                "rho: {} entries for {} cn_types",
                self.rho.len(),
                self.cn_types.len()
            )));
        }
        self.ensemble1()?;
        self.ensemble2()?;
        Ok(())
    }

    pub fn check_node_types(&self) -> Result<Vec<CheckNodeType>> {
        self.cn_types
            .iter()
            .enumerate()
            .map(|(i, t)| {
                build_type(t).map_err(|e| GldpcError::SpecFile(format!("cn_types[{i}]: {e}")))
            })
            .collect()
    }

    pub fn mixture(&self) -> Result<CnMixture> {
        CnMixture::new(self.check_node_types()?, self.rho.clone())
            .map_err(|e| GldpcError::SpecFile(format!("rho: {e}")))
    }

    /// The VN-regular view, if the file has a `q`.
    pub fn ensemble1(&self) -> Result<Option<Ensemble1Spec>> {
        let Some(q) = self.vn.q else { return Ok(None) };
        Ensemble1Spec::new(self.mixture()?, q)
            .map(Some)
            .map_err(|e| GldpcError::SpecFile(format!("vn.q: {e}")))
    }

    /// The unstructured view, if the file has a `lambda`.
    pub fn ensemble2(&self) -> Result<Option<Ensemble2Spec>> {
        let Some(lambda) = &self.vn.lambda else { return Ok(None) };
        Ensemble2Spec::new(self.mixture()?, lambda.clone())
            .map(Some)
            .map_err(|e| GldpcError::SpecFile(format!("vn.lambda: {e}")))
    }
}

fn build_type(t: &CnTypeSpec) -> Result<CheckNodeType> {
    let need_s = || {
        t.s.ok_or_else(|| GldpcError::SpecFile(format!("kind {:?} needs a length 's'", t.kind)))
    };
    match t.kind {
        CnKind::Spc => CheckNodeType::spc(need_s()?),
        CnKind::Hamming => CheckNodeType::hamming(need_s()?),
        CnKind::Explicit => {
            let rows = t
                .parity
                .as_ref()
                .ok_or_else(|| GldpcError::SpecFile("kind explicit needs 'parity' rows".into()))?;
            let h = BitMatrix::from_bitstrings(rows)?;
            if let Some(s) = t.s {
                if s != h.cols() {
                    return Err(GldpcError::SpecFile(format!(
                        "s = {s} but parity rows have length {}",
                        h.cols()
                    )));
                }
            }
            CheckNodeType::from_parity(h)
        }
    }
}

/// Parses `"num/den"`, an integer, or a decimal (with optional exponent) exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || GldpcError::InvalidArgument(format!("'{text}' is not a fraction or decimal"));
    if let Some((n, d)) = t.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(GldpcError::InvalidArgument(format!("'{text}' has a zero denominator")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: i64 = digits.parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let pow = 10i64.checked_pow(scale.unsigned_abs()).ok_or_else(bad)?;
    let mut denom = 1i64;
    if scale >= 0 {
        numer = numer.checked_mul(pow).ok_or_else(bad)?;
    } else {
        denom = pow;
    }
    if neg {
        numer = -numer;
    }
    Ok(Rational::new(numer, denom))
}

fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Text(String),
    Number(serde_json::Number),
}

impl RationalRepr {
    fn parse(&self) -> Result<Rational> {
        match self {
            RationalRepr::Text(s) => parse_rational(s),
            RationalRepr::Number(n) => parse_rational(&n.to_string()),
        }
    }
}

fn ser_rationals<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rational_string))
}

fn de_rationals<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
    let raw = Vec::<RationalRepr>::deserialize(d)?;
    raw.iter()
        .enumerate()
        .map(|(i, r)| r.parse().map_err(|e| serde::de::Error::custom(format!("rho[{i}]: {e}"))))
        .collect()
}

fn ser_lambda<S: Serializer>(
    v: &Option<BTreeMap<usize, Rational>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let map = v.as_ref().expect("skipped when None");
    s.collect_map(map.iter().map(|(d, r)| (d.to_string(), rational_string(r))))
}

fn de_lambda<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Option<BTreeMap<usize, Rational>>, D::Error> {
    let raw = BTreeMap::<usize, RationalRepr>::deserialize(d)?;
    raw.into_iter()
        .map(|(deg, r)| {
            r.parse()
                .map(|v| (deg, v))
                .map_err(|e| serde::de::Error::custom(format!("lambda[{deg}]: {e}")))
        })
        .collect::<std::result::Result<_, _>>()
        .map(Some)
}
