//! JSON shapes for CLI output. Big integers are decimal strings throughout.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use intersective_core::abelian::{GroupError, GroupSpec};
use intersective_core::constructions::{Thm17Instance, Thm17Report};
use intersective_core::cyclotomic::{support_and_gaps, PolyError};
use intersective_core::engine::{BoundEntry, BoundReport, Method, Query};
use intersective_core::oracle::ExactD;
use intersective_core::spectral::SpectralBound;
use intersective_core::IntPolynomial;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("bad field {field}: {value:?}")]
    Field { field: &'static str, value: String },
}

fn big(field: &'static str, s: &str) -> Result<BigUint, FormatError> {
    s.parse().map_err(|_| FormatError::Field {
        field,
        value: s.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub n: u64,
    /// `"cyclotomic"` or `"inverse"`.
    pub kind: String,
    pub degree: usize,
    /// `[exponent, coefficient]` pairs over the support.
    pub coeffs: Vec<(usize, String)>,
    pub nonzero_count: usize,
    pub max_gap: usize,
}

impl PolynomialJson {
    pub fn new(n: u64, kind: &str, h: &IntPolynomial) -> Result<Self, FormatError> {
        let (_, max_gap) = support_and_gaps(h)?;
        Ok(Self {
            n,
            kind: kind.into(),
            degree: h.degree().unwrap_or(0),
            coeffs: h.terms().map(|(k, c)| (k, c.to_string())).collect(),
            nonzero_count: h.nonzero_count(),
            max_gap,
        })
    }

    pub fn polynomial(&self) -> Result<IntPolynomial, FormatError> {
        let terms = self
            .coeffs
            .iter()
            .map(|(k, c)| {
                c.parse::<BigInt>()
                    .map(|c| (*k, c))
                    .map_err(|_| FormatError::Field {
                        field: "coeffs",
                        value: c.clone(),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPolynomial::from_terms(terms))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleJson {
    /// `D_G(J, N)`, or a lower bound when `exact` is false.
    pub alpha: String,
    pub exact: bool,
    pub alpha_reduced: u64,
    pub index: String,
    /// Points of `G^N`, one element literal per coordinate.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificate: Vec<Vec<String>>,
}

impl OracleJson {
    pub fn new(d: &ExactD, with_certificate: bool) -> Self {
        Self {
            alpha: d.value.to_string(),
            exact: d.exact,
            alpha_reduced: d.alpha_reduced,
            index: d.index.to_string(),
            certificate: if with_certificate {
                d.certificate
                    .iter()
                    .map(|p| p.iter().map(|x| x.to_string()).collect())
                    .collect()
            } else {
                Vec::new()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryJson {
    pub group: String,
    #[serde(rename = "J")]
    pub j: Vec<String>,
    #[serde(rename = "N")]
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub value: String,
    pub method: String,
    pub params: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsJson {
    pub query: QueryJson,
    pub upper: Vec<EntryJson>,
    pub lower: Vec<EntryJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_upper: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_lower: Option<String>,
    pub consistent: bool,
}

fn entry_json(e: &BoundEntry) -> EntryJson {
    EntryJson {
        value: e.value.to_string(),
        method: e.method.to_string(),
        params: e.params.clone(),
    }
}

fn entry_from(e: &EntryJson) -> Result<BoundEntry, FormatError> {
    Ok(BoundEntry {
        value: big("value", &e.value)?,
        method: e.method.parse::<Method>().map_err(|_| FormatError::Field {
            field: "method",
            value: e.method.clone(),
        })?,
        params: e.params.clone(),
    })
}

impl BoundsJson {
    pub fn new(r: &BoundReport) -> Self {
        Self {
            query: QueryJson {
                group: r.query.group.to_string(),
                j: r.query.j.iter().map(|x| x.to_string()).collect(),
                n: r.query.n,
            },
            upper: r.upper.iter().map(entry_json).collect(),
            lower: r.lower.iter().map(entry_json).collect(),
            exact: r.exact.as_ref().map(|e| e.to_string()),
            notes: r.notes.clone(),
            best_upper: r.best_upper().map(|e| e.value.to_string()),
            best_lower: r.best_lower().map(|e| e.value.to_string()),
            consistent: r.is_consistent(),
        }
    }

    pub fn report(&self) -> Result<BoundReport, FormatError> {
        let group: GroupSpec = self.query.group.parse()?;
        let j = self
            .query
            .j
            .iter()
            .map(|s| group.parse_element(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BoundReport {
            query: Query {
                group,
                j,
                n: self.query.n,
            },
            upper: self.upper.iter().map(entry_from).collect::<Result<_, _>>()?,
            lower: self.lower.iter().map(entry_from).collect::<Result<_, _>>()?,
            exact: self.exact.as_deref().map(|e| big("exact", e)).transpose()?,
            notes: self.notes.clone(),
        })
    }
}

pub fn emit_report(r: &BoundReport) -> Result<String, FormatError> {
    Ok(serde_json::to_string_pretty(&BoundsJson::new(r))?)
}

pub fn parse_report(s: &str) -> Result<BoundReport, FormatError> {
    serde_json::from_str::<BoundsJson>(s)?.report()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralJson {
    pub query: QueryJson,
    pub a: String,
    pub n: u64,
    pub h: String,
    pub value: String,
    pub index: String,
    pub closed_form: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambiguous: Option<String>,
}

impl SpectralJson {
    pub fn new(query: QueryJson, a: String, h: &IntPolynomial, b: &SpectralBound) -> Self {
        Self {
            query,
            a,
            n: b.n,
            h: h.to_string(),
            value: b.value.to_string(),
            index: b.index.to_string(),
            closed_form: b.closed_form,
            count: b.tuples.as_ref().map(|t| t.count.to_string()),
            boundary: b.tuples.as_ref().map(|t| t.boundary.to_string()),
            ambiguous: b.tuples.as_ref().map(|t| t.ambiguous.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub ratio: f64,
}

pub fn ratios_csv(rows: &[RatioRow]) -> String {
    let mut out = String::from("N,ratio\n");
    for r in rows {
        out.push_str(&format!("{},{}\n", r.n, r.ratio));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BulletJson {
    pub bullet: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifiedJson {
    pub passed: bool,
    pub structure: String,
    pub bullets: Vec<BulletJson>,
    pub degenerate_eps: bool,
    pub eps_below_three_over_s1: bool,
    pub four_n_eps_condition: bool,
}

impl VerifiedJson {
    pub fn new(r: &Thm17Report) -> Self {
        Self {
            passed: r.passed(),
            structure: match &r.structure {
                Ok(()) => "ok".into(),
                Err(e) => e.clone(),
            },
            bullets: r
                .bullets
                .iter()
                .map(|b| BulletJson {
                    bullet: b.bullet.to_string(),
                    passed: b.passed,
                    detail: b.detail.clone(),
                })
                .collect(),
            degenerate_eps: r.degenerate_eps,
            eps_below_three_over_s1: r.eps_below_three_over_s1,
            four_n_eps_condition: r.four_n_eps_condition,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm17Json {
    #[serde(rename = "M")]
    pub m: String,
    pub eps: String,
    pub primes: Vec<String>,
    pub r: String,
    pub q: String,
    pub s: String,
    pub n: String,
    pub d: String,
    pub j_size: String,
    pub h: String,
    pub phi_r_support: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verified: Option<VerifiedJson>,
}

impl Thm17Json {
    pub fn new(inst: &Thm17Instance, report: Option<&Thm17Report>) -> Self {
        let strs = |v: &[u64]| v.iter().map(|x| x.to_string()).collect();
        Self {
            m: inst.m.to_string(),
            eps: format!("{}/{}", inst.eps.0, inst.eps.1),
            primes: strs(&inst.primes),
            r: inst.r.to_string(),
            q: inst.q.to_string(),
            s: inst.s.to_string(),
            n: inst.n.to_string(),
            d: inst.d.to_string(),
            j_size: inst.j_size.to_string(),
            h: inst.h_description(),
            phi_r_support: strs(&inst.phi_r_support),
            verified: report.map(VerifiedJson::new),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use intersective_core::cyclotomic::cyclotomic;

    #[test]
    fn polynomial_round_trip() {
        let h = cyclotomic(105).unwrap();
        let j = PolynomialJson::new(105, "cyclotomic", &h).unwrap();
        assert_eq!(j.nonzero_count, 33);
        assert!(j.coeffs.iter().any(|(k, c)| *k == 7 && c == "-2"));
        let s = serde_json::to_string(&j).unwrap();
        let back: PolynomialJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.polynomial().unwrap(), h);
    }

    #[test]
    fn ratio_csv_header() {
        let rows = vec![RatioRow { n: 1, ratio: 0.5 }];
        assert_eq!(ratios_csv(&rows), "N,ratio\n1,0.5\n");
    }
}
