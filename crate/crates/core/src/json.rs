//! JSON documents exchanged by the command line.
//!
//! Keys are emitted in sorted order and big integers as plain decimal
//! numbers, so identical inputs give byte-identical output.

use num_bigint::BigUint;
use serde_json::{json, Map, Number, Value};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::homotopy::{Classification, PairSpec, VertexPair};
use crate::mmf::{JoinDecomposition, MmfSet};
use crate::ranks::{GrowthReport, RankSeries};

pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("complex: {e}")))
}

/// Reads `{"pairs": [...]}`; a single entry is broadcast when resolved.
pub fn parse_pairs(text: &str) -> Result<PairSpec> {
    let spec: PairSpec =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("pairs: {e}")))?;
    if spec.pairs.is_empty() {
        return Err(Error::Parse("pairs: empty list".into()));
    }
    Ok(spec)
}

pub fn broadcast_disk_sphere(n: u32) -> PairSpec {
    PairSpec::new(vec![VertexPair::DiskSphere(n)])
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("in-memory values serialize")
}

pub fn big(n: &BigUint) -> Value {
    Value::Number(
        n.to_string()
            .parse::<Number>()
            .expect("decimal digits form a JSON number"),
    )
}

pub fn complex_json(k: &SimplicialComplex) -> Value {
    to_value(k)
}

/// `{"mmf": [[...], ...], "mutually_disjoint": bool}`
pub fn mmf_json(set: &MmfSet) -> Value {
    json!({ "mmf": set.faces, "mutually_disjoint": set.disjoint })
}

pub fn classification_json(c: &Classification) -> Value {
    to_value(c)
}

pub fn join_json(d: &JoinDecomposition) -> Value {
    to_value(d)
}

/// `{"ranks": {"q": r}, "exact_finite": bool, "cumulative": [...], "growth": ..., "max_degree": N}`
pub fn ranks_json(r: &RankSeries, growth: &GrowthReport) -> Value {
    let ranks: Map<String, Value> = r
        .ranks
        .iter()
        .map(|(q, n)| (q.to_string(), big(n)))
        .collect();
    json!({
        "ranks": ranks,
        "exact_finite": r.exact_finite,
        "cumulative": growth.cumulative.iter().map(big).collect::<Vec<_>>(),
        "growth": growth.verdict,
        "max_degree": r.max_degree,
    })
}

/// Compact single-line rendering with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("JSON values render");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::face::Face;
    use crate::mmf::mmf;

    #[test]
    fn mmf_document_matches_golden() {
        let k = SimplicialComplex::boundary_of_simplex(Face::full(3), 3).unwrap();
        assert_eq!(
            render(&mmf_json(&mmf(&k))),
            "{\"mmf\":[[1,2,3]],\"mutually_disjoint\":true}\n"
        );
        let k = SimplicialComplex::simplex(3).unwrap();
        assert_eq!(
            render(&mmf_json(&mmf(&k))),
            "{\"mmf\":[],\"mutually_disjoint\":true}\n"
        );
    }

    #[test]
    fn big_numbers_stay_exact() {
        let n: BigUint = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(
            serde_json::to_string(&big(&n)).unwrap(),
            "123456789012345678901234567890"
        );
    }

    #[test]
    fn parse_errors_are_parse_kind() {
        assert_eq!(
            parse_complex("{").unwrap_err().kind(),
            crate::ErrorKind::Parse
        );
        assert_eq!(
            parse_pairs(r#"{"pairs": []}"#).unwrap_err().kind(),
            crate::ErrorKind::Parse
        );
    }
}
