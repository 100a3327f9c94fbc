//! JSON documents naming spaces and maps.
//!
//! ```json
//! {
//!   "spaces": {
//!     "V": { "dim": 2, "diffeology": { "generated": [["abs(x)", "0"]] } },
//!     "R": { "dim": 1, "diffeology": "fine" },
//!     "VR": { "dim": 3, "diffeology": { "sum": ["V", "R"] } }
//!   },
//!   "maps": { "f": { "from": "V", "to": "R", "matrix": [["0", "1/2"]] } }
//! }
//! ```
//!
//! Besides `"fine"`, `"coarse"` and `"generated"`, a space may be built from
//! other named spaces with `"sum"`, `"tensor"` or
//! `"pushforward": {"of": name, "iso": matrix}`; `dim` must then match the
//! constructed dimension. Rationals are strings (`"p/q"` or integers).

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hom::LinearMap;
use crate::linalg::Matrix;
use crate::parse::{parse_expr, validate_degree};
use crate::space::{DiffSpace, Plot};
use crate::tensor::tensor_product;
use crate::{parse_rational, Rational};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFile {
    #[serde(default)]
    pub spaces: BTreeMap<String, RawSpace>,
    #[serde(default)]
    pub maps: BTreeMap<String, RawMap>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpace {
    pub dim: usize,
    pub diffeology: RawDiffeology,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawDiffeology {
    Named(String),
    Built(RawBuilt),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RawBuilt {
    Generated(Vec<Vec<String>>),
    Sum([String; 2]),
    Tensor([String; 2]),
    Pushforward { of: String, iso: Vec<Vec<String>> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMap {
    pub from: String,
    pub to: String,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default)]
pub struct SpaceFile {
    spaces: BTreeMap<String, DiffSpace>,
    maps: BTreeMap<String, LinearMap>,
}

/// Parses a matrix of rational strings; `cols` is used when there are no
/// rows.
pub fn parse_matrix(rows: &[Vec<String>], cols: usize) -> Result<Matrix> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<Rational>>>())
        .collect::<Result<Vec<_>>>()?;
    let cols = parsed.first().map_or(cols, Vec::len);
    Matrix::from_rows(cols, &parsed)
}

impl SpaceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawFile = serde_json::from_str(text)?;
        SpaceFile::from_raw(&raw)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::SpaceFile(format!("cannot read {}: {e}", path.display())))?;
        SpaceFile::from_json(&text)
    }

    pub fn from_raw(raw: &RawFile) -> Result<Self> {
        let mut out = SpaceFile::default();
        let mut visiting = BTreeSet::new();
        for name in raw.spaces.keys() {
            out.resolve(raw, name, &mut visiting)?;
        }
        for (name, m) in &raw.maps {
            let from = out.space(&m.from)?.clone();
            let to = out.space(&m.to)?.clone();
            let matrix =
                parse_matrix(&m.matrix, from.dim()).map_err(|e| Error::SpaceFile(format!("map {name}: {e}")))?;
            let map = LinearMap::new(from, to, matrix).map_err(|e| Error::SpaceFile(format!("map {name}: {e}")))?;
            out.maps.insert(name.clone(), map);
        }
        Ok(out)
    }

    fn resolve(&mut self, raw: &RawFile, name: &str, visiting: &mut BTreeSet<String>) -> Result<DiffSpace> {
        if let Some(s) = self.spaces.get(name) {
            return Ok(s.clone());
        }
        let entry = raw.spaces.get(name).ok_or_else(|| Error::UnknownName { kind: "space", name: name.to_string() })?;
        if !visiting.insert(name.to_string()) {
            return Err(Error::SpaceFile(format!("space {name} is defined in terms of itself")));
        }
        let ctx = |e: Error| Error::SpaceFile(format!("space {name}: {e}"));
        let n = entry.dim;
        let space = match &entry.diffeology {
            RawDiffeology::Named(kind) => match kind.as_str() {
                "fine" => DiffSpace::fine(n).map_err(ctx)?,
                "coarse" => DiffSpace::coarse(n).map_err(ctx)?,
                other => return Err(ctx(Error::Unsupported(format!("diffeology {other:?}")))),
            },
            RawDiffeology::Built(RawBuilt::Generated(gens)) => {
                let plots = gens
                    .iter()
                    .enumerate()
                    .map(|(g, coords)| {
                        if coords.len() != n {
                            return Err(Error::SpaceFile(format!(
                                "space {name}, generator {g}: {} coordinates for dimension {n}",
                                coords.len()
                            )));
                        }
                        let comps = coords
                            .iter()
                            .enumerate()
                            .map(|(c, text)| {
                                let e = parse_expr(text).and_then(|e| validate_degree(&e).map(|_| e));
                                e.map_err(|e| {
                                    Error::SpaceFile(format!("space {name}, generator {g}, coordinate {c}: {e}"))
                                })
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok(Plot::new(comps))
                    })
                    .collect::<Result<Vec<_>>>()?;
                DiffSpace::generated(n, plots).map_err(ctx)?
            }
            RawDiffeology::Built(RawBuilt::Sum([a, b])) => {
                let (a, b) = (self.resolve(raw, a, visiting)?, self.resolve(raw, b, visiting)?);
                a.direct_sum(&b).map_err(ctx)?
            }
            RawDiffeology::Built(RawBuilt::Tensor([a, b])) => {
                let (a, b) = (self.resolve(raw, a, visiting)?, self.resolve(raw, b, visiting)?);
                tensor_product(&a, &b).map_err(ctx)?
            }
            RawDiffeology::Built(RawBuilt::Pushforward { of, iso }) => {
                let base = self.resolve(raw, of, visiting)?;
                let iso = parse_matrix(iso, base.dim()).map_err(ctx)?;
                base.pushforward(&iso).map_err(ctx)?
            }
        };
        if space.dim() != n {
            return Err(ctx(Error::DimensionMismatch { expected: n, found: space.dim() }));
        }
        visiting.remove(name);
        self.spaces.insert(name.to_string(), space.clone());
        Ok(space)
    }

    pub fn space(&self, name: &str) -> Result<&DiffSpace> {
        self.spaces.get(name).ok_or_else(|| Error::UnknownName { kind: "space", name: name.to_string() })
    }

    pub fn map(&self, name: &str) -> Result<&LinearMap> {
        self.maps.get(name).ok_or_else(|| Error::UnknownName { kind: "map", name: name.to_string() })
    }

    pub fn spaces(&self) -> impl Iterator<Item = (&str, &DiffSpace)> {
        self.spaces.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn maps(&self) -> impl Iterator<Item = (&str, &LinearMap)> {
        self.maps.iter().map(|(k, v)| (k.as_str(), v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOC: &str = r#"{
        "spaces": {
            "V": { "dim": 2, "diffeology": { "generated": [["abs(x)", "0"]] } },
            "R": { "dim": 1, "diffeology": "fine" },
            "C": { "dim": 2, "diffeology": "coarse" },
            "VR": { "dim": 3, "diffeology": { "sum": ["V", "R"] } },
            "VV": { "dim": 4, "diffeology": { "tensor": ["V", "V"] } },
            "H": { "dim": 2, "diffeology": { "pushforward": { "of": "V", "iso": [["0", "1"], ["1", "0"]] } } }
        },
        "maps": { "f": { "from": "V", "to": "R", "matrix": [["0", "1/2"]] } }
    }"#;

    #[test]
    fn loads_all_kinds() {
        let f = SpaceFile::from_json(DOC).unwrap();
        assert_eq!(f.space("V").unwrap().singular_span().unwrap().dim(), 1);
        assert!(f.space("C").unwrap().is_coarse());
        assert_eq!(f.space("VR").unwrap().dim(), 3);
        assert_eq!(f.space("VV").unwrap().singular_span().unwrap().dim(), 3);
        assert_eq!(f.space("H").unwrap().dim(), 2);
        assert_eq!(f.map("f").unwrap().matrix()[(0, 1)], crate::ratio(1, 2));
        assert!(matches!(f.space("W"), Err(Error::UnknownName { .. })));
    }

    #[test]
    fn rejects_bad_input() {
        let bad = [
            r#"{"spaces": {"V": {"dim": 2, "diffeology": "fuzzy"}}}"#,
            r#"{"spaces": {"V": {"dim": 2, "diffeology": {"generated": [["abs(x)"]]}}}}"#,
            r#"{"spaces": {"V": {"dim": 1, "diffeology": {"generated": [["x^65"]]}}}}"#,
            r#"{"spaces": {"V": {"dim": 1, "diffeology": {"generated": [["1.5*x"]]}}}}"#,
            r#"{"spaces": {"V": {"dim": 1, "diffeology": "fine"}}, "maps": {"f": {"from": "V", "to": "V", "matrix": [["0.5"]]}}}"#,
            r#"{"spaces": {"V": {"dim": 1, "diffeology": "fine"}}, "maps": {"f": {"from": "V", "to": "W", "matrix": [["1"]]}}}"#,
            r#"{"spaces": {"V": {"dim": 1, "diffeology": "fine"}}, "maps": {"f": {"from": "V", "to": "V", "matrix": [["1", "2"]]}}}"#,
            r#"{"spaces": {"A": {"dim": 2, "diffeology": {"sum": ["A", "A"]}}}}"#,
            r#"{"spaces": {"V": {"dim": 0, "diffeology": "fine"}}}"#,
        ];
        for doc in bad {
            assert!(SpaceFile::from_json(doc).is_err(), "{doc}");
        }
    }
}
