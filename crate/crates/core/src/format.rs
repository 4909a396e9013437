//! The JSON map document:
//!
//! ```json
//! {"breakpoints": [["0", "0"], ["1/2", "1"], ["1", "0"]], "v": "1/2"}
//! ```
//!
//! Rationals are strings `"p/q"` or `"p"`. `"v"` is only meaningful for
//! unimodal maps and `"metadata"` only for exported conjugacy fits.

use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::conjugacy::ConjugacyFit;
use crate::error::{Error, Result};
use crate::plmap::{PlMap, Point};
use crate::rational::{self, Rational};
use crate::unimodal::UnimodalMap;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    breakpoints: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<Value>,
}

pub(crate) fn ser_opt_rational<S: Serializer>(
    r: &Option<Rational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&rational::format(r)),
        None => s.serialize_none(),
    }
}

fn read_doc(text: &str) -> Result<(Vec<Point>, Option<Rational>)> {
    let doc: MapDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let points = doc
        .breakpoints
        .iter()
        .enumerate()
        .map(|(i, (x, y))| {
            let field = |j: usize, s: &str| {
                rational::parse(s).map_err(|e| Error::Parse(format!("breakpoints[{i}][{j}]: {e}")))
            };
            Ok((field(0, x)?, field(1, y)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let v = doc
        .v
        .as_deref()
        .map(|s| rational::parse(s).map_err(|e| Error::Parse(format!("v: {e}"))))
        .transpose()?;
    Ok((points, v))
}

/// Parse a map document. Non-canonical breakpoint lists are rejected.
pub fn parse_map(text: &str) -> Result<PlMap> {
    let (points, _) = read_doc(text)?;
    PlMap::from_canonical(points)
}

/// Parse a unimodal map document; the turning point is inferred when `"v"`
/// is absent.
pub fn parse_unimodal(text: &str) -> Result<UnimodalMap> {
    let (points, v) = read_doc(text)?;
    UnimodalMap::new(PlMap::from_canonical(points)?, v)
}

fn doc_for(map: &PlMap) -> MapDoc {
    MapDoc {
        breakpoints: map
            .points()
            .iter()
            .map(|(x, y)| (rational::format(x), rational::format(y)))
            .collect(),
        v: None,
        metadata: None,
    }
}

/// Pretty JSON with one breakpoint per line.
fn to_text(doc: &MapDoc) -> String {
    fn json<T: Serialize + ?Sized>(v: &T) -> String {
        serde_json::to_string(v).expect("map documents always serialize")
    }
    let rows: Vec<String> = doc
        .breakpoints
        .iter()
        .map(|p| format!("    {}", json(p)))
        .collect();
    let mut out = format!("{{\n  \"breakpoints\": [\n{}\n  ]", rows.join(",\n"));
    if let Some(v) = &doc.v {
        out.push_str(&format!(",\n  \"v\": {}", json(v)));
    }
    if let Some(m) = &doc.metadata {
        out.push_str(&format!(",\n  \"metadata\": {}", json(m)));
    }
    out.push_str("\n}\n");
    out
}

pub fn write_map(map: &PlMap) -> String {
    to_text(&doc_for(map))
}

pub fn write_unimodal(g: &UnimodalMap) -> String {
    let mut doc = doc_for(g.map());
    doc.v = Some(rational::format(g.turning_point()));
    to_text(&doc)
}

/// The fitted interpolant plus `{depth, stabilized, alpha, omega, max_omega_spread}`.
pub fn write_fit(fit: &ConjugacyFit, max_omega_spread: Option<f64>) -> String {
    let mut doc = doc_for(&fit.interpolant);
    doc.metadata = Some(serde_json::json!({
        "depth": fit.depth,
        "stabilized": fit.stabilized,
        "alpha": fit.alpha,
        "omega": fit.omega,
        "max_omega_spread": max_omega_spread,
    }));
    to_text(&doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::unimodal::{tent, xi};

    #[test]
    fn reads_the_documented_example() {
        let m = parse_map(r#"{"breakpoints": [["0","0"],["1/2","1"],["1","0"]]}"#).unwrap();
        assert_eq!(&m, tent().map());
        let g = parse_unimodal(r#"{"breakpoints": [["0","0"],["1/3","1"],["1","0"]]}"#).unwrap();
        assert_eq!(g.turning_point(), &rat(1, 3));
    }

    #[test]
    fn diagnostics_name_the_field() {
        let e = parse_map(r#"{"breakpoints": [["0","0"],["1/2","x"],["1","0"]]}"#).unwrap_err();
        assert!(e.to_string().contains("breakpoints[1][1]"), "{e}");
        let e = parse_map(r#"{"breakpoints": [["0","0"],["1/2","1/2"],["1","1"]]}"#).unwrap_err();
        assert!(e.to_string().contains("breakpoints[1]"), "{e}");
        let e = parse_map("{\"breakpoints\": [\n[\"0\",\"0\"],\n[\"1\" \"1\"]]}").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
        let e = parse_map(r#"{"points": []}"#).unwrap_err();
        assert!(matches!(e, Error::Parse(_)));
        let e = parse_unimodal(r#"{"breakpoints": [["0","0"],["1/2","1"],["1","0"]], "v": "1/3"}"#)
            .unwrap_err();
        assert!(matches!(e, Error::NotUnimodal(_)));
    }

    #[test]
    fn writes_lowest_terms() {
        let text = write_map(&xi(3).unwrap());
        assert!(text.contains("\"1/3\"") && text.contains("\"2/3\""));
        assert_eq!(parse_map(&text).unwrap(), xi(3).unwrap());
        let text = write_unimodal(&tent());
        assert!(text.contains("\"v\": \"1/2\""));
        assert_eq!(parse_unimodal(&text).unwrap(), tent());
    }
}
