//! JSON system files: a map, named regions, a coefficient field and search
//! bounds.
//!
//! ```json
//! {
//!   "dimension": 1,
//!   "bounds": [[-2, 2]],
//!   "map": {"type": "affine", "matrix": [["2"]], "offset": [0]},
//!   "regions": {"N": {"box": [[-2, 2]]}, "L": [[[-2, -1]], [[1, 2]]]},
//!   "field": "Q"
//! }
//! ```
//!
//! A region is a list of cube literals, `{"box": [[lo, hi], ...]}` for all
//! top cubes of a box, or `{"union": [region, ...]}`. Named pairs and
//! triples may be declared under `pairs` and `triples`; otherwise the
//! regions `N`, `L` and `N0`, `N1`, `N2` are used.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::BigRational;
use serde::Deserialize;
use serde_json::Value;

use crate::cubical::{Cube, CubicalSet};
use crate::dynamics::MultivaluedMap;
use crate::error::{Error, Result};
use crate::linalg::Field;

pub const DEFAULT_N_MAX: usize = 64;
pub const DEFAULT_R_MAX: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub n_max: usize,
    pub r_max: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { n_max: DEFAULT_N_MAX, r_max: DEFAULT_R_MAX }
    }
}

#[derive(Clone, Debug)]
pub struct System {
    pub dimension: usize,
    pub map: MultivaluedMap,
    pub regions: BTreeMap<String, CubicalSet>,
    pub field: Field,
    pub options: Options,
    pairs: BTreeMap<String, (String, String)>,
    triples: BTreeMap<String, (String, String, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    dimension: usize,
    #[serde(default)]
    bounds: Option<Vec<[i64; 2]>>,
    map: Value,
    #[serde(default)]
    regions: BTreeMap<String, Value>,
    #[serde(default)]
    field: Option<Value>,
    #[serde(default)]
    options: Option<RawOptions>,
    #[serde(default)]
    pairs: BTreeMap<String, (String, String)>,
    #[serde(default)]
    triples: BTreeMap<String, (String, String, String)>,
    #[serde(default)]
    #[allow(dead_code)]
    description: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    n_max: Option<usize>,
    r_max: Option<usize>,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Prefixes a semantic error with the line where `"key"` first appears.
fn at_key(text: &str, key: &str) -> impl Fn(Error) -> Error {
    let needle = format!("\"{key}\"");
    let line = text.lines().position(|l| l.contains(&needle)).map(|i| i + 1);
    move |e| match (e, line) {
        (Error::Parse(m), Some(n)) => Error::Parse(format!("line {n}: {m}")),
        (e, _) => e,
    }
}

fn rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(|| parse_err(format!("{n} is not an integer; write fractions as \"p/q\""))),
        Value::String(s) => {
            BigRational::from_str(s.trim()).map_err(|_| parse_err(format!("bad rational '{s}'")))
        }
        other => Err(parse_err(format!("expected a rational, got {other}"))),
    }
}

fn cube(v: &Value, dimension: usize) -> Result<Cube> {
    let c: Cube = serde_json::from_value(v.clone()).map_err(|e| parse_err(format!("cube {v}: {e}")))?;
    if c.ambient() != dimension {
        return Err(parse_err(format!("cube {v} has the wrong dimension")));
    }
    Ok(c)
}

fn region(v: &Value, dimension: usize) -> Result<CubicalSet> {
    match v {
        Value::Array(items) => {
            let cubes = items.iter().map(|c| cube(c, dimension)).collect::<Result<Vec<_>>>()?;
            CubicalSet::from_cubes(dimension, cubes)
        }
        Value::Object(o) if o.len() == 1 && o.contains_key("box") => {
            let b: Vec<[i64; 2]> = serde_json::from_value(o["box"].clone())
                .map_err(|e| parse_err(format!("box: {e}")))?;
            if b.len() != dimension || b.iter().any(|[lo, hi]| lo > hi) {
                return Err(parse_err("box must give lo <= hi on every axis"));
            }
            let lo: Vec<i64> = b.iter().map(|x| x[0]).collect();
            let hi: Vec<i64> = b.iter().map(|x| x[1]).collect();
            Ok(CubicalSet::box_tops(&lo, &hi))
        }
        Value::Object(o) if o.len() == 1 && o.contains_key("union") => {
            let parts = o["union"].as_array().ok_or_else(|| parse_err("union expects a list"))?;
            let mut acc = CubicalSet::empty(dimension);
            for p in parts {
                acc = acc.union(&region(p, dimension)?);
            }
            Ok(acc)
        }
        other => Err(parse_err(format!("cannot read region {other}"))),
    }
}

fn field(v: &Option<Value>) -> Result<Field> {
    match v {
        None => Ok(Field::Rational),
        Some(Value::String(s)) => Field::parse(s).map_err(|e| parse_err(e.to_string())),
        Some(Value::Object(o)) if o.len() == 1 && o.contains_key("Zp") => {
            let p = o["Zp"].as_u64().ok_or_else(|| parse_err("Zp expects a prime"))?;
            Field::prime(p).map_err(|e| parse_err(e.to_string()))
        }
        Some(other) => Err(parse_err(format!("cannot read field {other}"))),
    }
}

fn map(v: &Value, dimension: usize, bounds: &Option<Vec<[i64; 2]>>) -> Result<MultivaluedMap> {
    let kind = v.get("type").and_then(Value::as_str).ok_or_else(|| parse_err("map.type missing"))?;
    match kind {
        "affine" => {
            let rows = v.get("matrix").and_then(Value::as_array).ok_or_else(|| parse_err("map.matrix missing"))?;
            let matrix = rows
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(|| parse_err("matrix rows must be lists"))?
                        .iter()
                        .map(rational)
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let offset = match v.get("offset") {
                None => vec![BigRational::from_integer(0.into()); dimension],
                Some(o) => o
                    .as_array()
                    .ok_or_else(|| parse_err("map.offset must be a list"))?
                    .iter()
                    .map(rational)
                    .collect::<Result<Vec<_>>>()?,
            };
            let b = bounds.as_ref().ok_or_else(|| parse_err("affine maps need bounds"))?;
            if b.len() != dimension {
                return Err(parse_err("bounds must list every axis"));
            }
            let lo: Vec<i64> = b.iter().map(|x| x[0]).collect();
            let hi: Vec<i64> = b.iter().map(|x| x[1]).collect();
            MultivaluedMap::affine(matrix, offset, (&lo, &hi)).map_err(|e| parse_err(e.to_string()))
        }
        "table" => {
            let entries = v.get("entries").and_then(Value::as_array).ok_or_else(|| parse_err("map.entries missing"))?;
            let mut out = Vec::with_capacity(entries.len());
            for e in entries {
                let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| parse_err("entry must be [cube, [cubes]]"))?;
                let src = cube(&pair[0], dimension)?;
                let img = pair[1]
                    .as_array()
                    .ok_or_else(|| parse_err("entry image must be a list"))?
                    .iter()
                    .map(|c| cube(c, dimension))
                    .collect::<Result<Vec<_>>>()?;
                out.push((src, img));
            }
            MultivaluedMap::table(dimension, out)
        }
        other => Err(parse_err(format!("unknown map type '{other}'"))),
    }
}

impl System {
    pub fn from_json(text: &str) -> Result<System> {
        let raw: Raw = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
        if raw.dimension == 0 {
            return Err(parse_err("dimension must be positive"));
        }
        let map = map(&raw.map, raw.dimension, &raw.bounds).map_err(at_key(text, "map"))?;
        let mut regions = BTreeMap::new();
        for (name, v) in &raw.regions {
            regions.insert(name.clone(), region(v, raw.dimension).map_err(at_key(text, name))?);
        }
        let options = match raw.options {
            None => Options::default(),
            Some(o) => Options {
                n_max: o.n_max.unwrap_or(DEFAULT_N_MAX),
                r_max: o.r_max.unwrap_or(DEFAULT_R_MAX),
            },
        };
        let sys = System {
            dimension: raw.dimension,
            map,
            regions,
            field: field(&raw.field).map_err(at_key(text, "field"))?,
            options,
            pairs: raw.pairs,
            triples: raw.triples,
        };
        for (a, b) in sys.pairs.values() {
            sys.region(a)?;
            sys.region(b)?;
        }
        for (a, b, c) in sys.triples.values() {
            sys.region(a)?;
            sys.region(b)?;
            sys.region(c)?;
        }
        Ok(sys)
    }

    pub fn from_path(path: &std::path::Path) -> Result<System> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
        System::from_json(&text)
    }

    pub fn region(&self, name: &str) -> Result<&CubicalSet> {
        self.regions.get(name).ok_or_else(|| parse_err(format!("no region named '{name}'")))
    }

    /// `(N, L)` by pair name, or the regions `N` and `L`.
    pub fn pair(&self, name: Option<&str>) -> Result<(CubicalSet, CubicalSet)> {
        let (n, l) = match name {
            Some(p) => self.pairs.get(p).cloned().ok_or_else(|| parse_err(format!("no pair named '{p}'")))?,
            None => ("N".to_string(), "L".to_string()),
        };
        let nset = self.region(&n)?.clone();
        let lset = match self.regions.get(&l) {
            Some(s) => s.clone(),
            None if name.is_none() => CubicalSet::empty(self.dimension),
            None => return Err(parse_err(format!("no region named '{l}'"))),
        };
        Ok((nset, lset))
    }

    /// `(N0, N1, N2)` by triple name, or the regions `N0`, `N1`, `N2`.
    pub fn triple(&self, name: Option<&str>) -> Result<(CubicalSet, CubicalSet, CubicalSet)> {
        let (a, b, c) = match name {
            Some(t) => self.triples.get(t).cloned().ok_or_else(|| parse_err(format!("no triple named '{t}'")))?,
            None => ("N0".into(), "N1".into(), "N2".into()),
        };
        let n2 = match self.regions.get(&c) {
            Some(s) => s.clone(),
            None => CubicalSet::empty(self.dimension),
        };
        Ok((self.region(&a)?.clone(), self.region(&b)?.clone(), n2))
    }

    pub fn pair_names(&self) -> Vec<String> {
        self.pairs.keys().cloned().collect()
    }

    pub fn triple_names(&self) -> Vec<String> {
        self.triples.keys().cloned().collect()
    }

    pub fn has_triple(&self, name: Option<&str>) -> bool {
        match name {
            Some(t) => self.triples.contains_key(t),
            None => self.regions.contains_key("N0") && self.regions.contains_key("N1"),
        }
    }
}
