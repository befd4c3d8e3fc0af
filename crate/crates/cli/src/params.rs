//! Parameter files, complex scalars, partitions and rationals as they
//! appear on the command line.

use crate::error::CliError;
use ellip_core::valuation::Q;
use ellip_core::{Partition, C64};
use serde::Deserialize;
use serde_json::{json, Value};
use std::path::Path;

/// A complex scalar as written in a parameter file: a number, a pair
/// `[re, im]`, or a string such as `"0.4-0.25i"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CxInput {
    Real(f64),
    Pair([f64; 2]),
    Text(String),
}

impl CxInput {
    pub fn value(&self) -> Result<C64, CliError> {
        match self {
            CxInput::Real(x) => Ok(C64::new(*x, 0.0)),
            CxInput::Pair([re, im]) => Ok(C64::new(*re, *im)),
            CxInput::Text(s) => parse_complex(s),
        }
    }
}

/// Parses `re`, `im i`, `re+im i` or `re-im i` (also with `j`).
pub fn parse_complex(s: &str) -> Result<C64, CliError> {
    let bad = || CliError::Parse(format!("malformed complex number {s:?}"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|x| C64::new(x, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let coeff = |x: &str| -> Result<f64, CliError> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => Ok(C64::new(body[..k].parse::<f64>().map_err(|_| bad())?, coeff(&body[k..])?)),
        None => Ok(C64::new(0.0, coeff(body)?)),
    }
}

/// `[2,1]`, `2,1`, `[]` or an empty string.
pub fn parse_partition(s: &str) -> Result<Partition, CliError> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']').trim();
    let parts = if inner.is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| CliError::Parse(format!("malformed partition {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?
    };
    Partition::new(parts).map_err(|e| CliError::Parse(format!("{s:?}: {e}")))
}

/// `a/b` or an integer.
pub fn parse_rational(s: &str) -> Result<Q, CliError> {
    let bad = || CliError::Parse(format!("malformed rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => s.parse::<i64>().map(Q::from_integer).map_err(|_| bad()),
    }
}

/// A comma-separated list of rationals of the given length.
pub fn parse_rationals(s: &str, len: usize) -> Result<Vec<Q>, CliError> {
    let xs = s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    if xs.len() != len {
        return Err(CliError::Parse(format!("expected {len} rationals, got {} in {s:?}", xs.len())));
    }
    Ok(xs)
}

pub fn q_str(x: Q) -> String {
    if *x.denom() == 1 {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn cx_json(x: C64) -> Value {
    json!([x.re, x.im])
}

/// Contents of a `--params` file. Every field is optional; missing values
/// fall back to a fixed generic parameter point.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamFile {
    pub n: Option<usize>,
    pub lambda: Option<Vec<usize>>,
    pub mu: Option<Vec<usize>>,
    pub kappa: Option<Vec<usize>>,
    pub q: Option<CxInput>,
    pub t: Option<CxInput>,
    pub p: Option<CxInput>,
    pub a: Option<CxInput>,
    pub b: Option<CxInput>,
    pub z: Option<Vec<CxInput>>,
    pub v: Option<Vec<CxInput>>,
    /// t₀..t₃ of the biorthogonal functions.
    pub t0123: Option<Vec<CxInput>>,
    pub u0: Option<CxInput>,
    #[serde(rename = "A")]
    pub big_a: Option<CxInput>,
    #[serde(rename = "B")]
    pub big_b: Option<CxInput>,
}

impl ParamFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(ParamFile::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }
}

const DEFAULT_Z: [(f64, f64); 4] = [(0.7, 0.1), (0.4, -0.5), (-0.6, 0.3), (0.55, 0.45)];
const DEFAULT_T: [(f64, f64); 4] = [(0.6, 0.2), (0.5, -0.3), (-0.4, 0.5), (0.7, 0.1)];
const DEFAULT_V: [(f64, f64); 4] = [(0.65, -0.2), (-0.35, 0.55), (0.5, 0.5), (0.8, -0.1)];

/// Fully resolved numeric inputs.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub file: ParamFile,
}

fn one(x: &Option<CxInput>, default: (f64, f64)) -> Result<C64, CliError> {
    x.as_ref().map_or(Ok(C64::new(default.0, default.1)), CxInput::value)
}

fn list(xs: &Option<Vec<CxInput>>, default: &[(f64, f64)], len: Option<usize>, name: &str) -> Result<Vec<C64>, CliError> {
    let out: Vec<C64> = match xs {
        Some(v) => v.iter().map(CxInput::value).collect::<Result<_, _>>()?,
        None => {
            let k = len.unwrap_or(default.len());
            if k > default.len() {
                return Err(CliError::Parse(format!("{name} has no default for {k} entries; give it in --params")));
            }
            default[..k].iter().map(|&(re, im)| C64::new(re, im)).collect()
        }
    };
    if let Some(k) = len {
        if out.len() != k {
            return Err(CliError::Parse(format!("{name} needs {k} entries, got {}", out.len())));
        }
    }
    Ok(out)
}

impl Resolved {
    pub fn q(&self) -> Result<C64, CliError> {
        one(&self.file.q, (0.35, 0.25))
    }
    pub fn t(&self) -> Result<C64, CliError> {
        one(&self.file.t, (0.45, -0.2))
    }
    pub fn p(&self) -> Result<C64, CliError> {
        one(&self.file.p, (0.03, 0.0))
    }
    pub fn a(&self) -> Result<C64, CliError> {
        one(&self.file.a, (0.6, 0.3))
    }
    pub fn b(&self) -> Result<C64, CliError> {
        one(&self.file.b, (0.5, -0.4))
    }
    pub fn u0(&self) -> Result<C64, CliError> {
        one(&self.file.u0, (0.8, -0.2))
    }
    pub fn big_a(&self) -> Result<C64, CliError> {
        one(&self.file.big_a, (0.4, 0.1))
    }
    pub fn big_b(&self) -> Result<C64, CliError> {
        one(&self.file.big_b, (0.3, -0.2))
    }
    pub fn z(&self, n: usize) -> Result<Vec<C64>, CliError> {
        list(&self.file.z, &DEFAULT_Z, Some(n), "z")
    }
    pub fn v(&self) -> Result<[C64; 4], CliError> {
        let v = list(&self.file.v, &DEFAULT_V, Some(4), "v")?;
        Ok([v[0], v[1], v[2], v[3]])
    }
    pub fn t0123(&self) -> Result<[C64; 4], CliError> {
        let v = list(&self.file.t0123, &DEFAULT_T, Some(4), "t0123")?;
        Ok([v[0], v[1], v[2], v[3]])
    }
    /// n from the flag, else the file, else the length of z, else `fallback`.
    pub fn n(&self, flag: Option<usize>, fallback: usize) -> usize {
        flag.or(self.file.n).or(self.file.z.as_ref().map(Vec::len)).unwrap_or(fallback)
    }
    /// A partition from the flag, else the named file field, else empty.
    pub fn partition(&self, flag: &Option<String>, field: &Option<Vec<usize>>) -> Result<Partition, CliError> {
        match (flag, field) {
            (Some(s), _) => parse_partition(s),
            (None, Some(parts)) => Partition::new(parts.clone()).map_err(|e| CliError::Parse(e.to_string())),
            (None, None) => Ok(Partition::empty()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("0.4+0.3i").unwrap(), C64::new(0.4, 0.3));
        assert_eq!(parse_complex("-0.4-0.3i").unwrap(), C64::new(-0.4, -0.3));
        assert_eq!(parse_complex("1e-3-2.5e-2i").unwrap(), C64::new(1e-3, -2.5e-2));
        assert_eq!(parse_complex("2i").unwrap(), C64::new(0.0, 2.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("0.5").unwrap(), C64::new(0.5, 0.0));
        assert_eq!(parse_complex(" 1 + 2 j ").unwrap(), C64::new(1.0, 2.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("1+2").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn partitions_and_rationals() {
        assert_eq!(parse_partition("[]").unwrap(), Partition::empty());
        assert_eq!(parse_partition("[2, 1]").unwrap(), Partition::from_slice(&[2, 1]));
        assert_eq!(parse_partition("3,1").unwrap(), Partition::from_slice(&[3, 1]));
        assert!(parse_partition("[1,2]").is_err());
        assert!(parse_partition("[a]").is_err());
        assert_eq!(parse_rational("3/8").unwrap(), Q::new(3, 8));
        assert_eq!(parse_rational("-2").unwrap(), Q::from_integer(-2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x/2").is_err());
        assert_eq!(parse_rationals("0,1/2,1/4", 3).unwrap().len(), 3);
        assert!(parse_rationals("0,1/2", 3).is_err());
    }

    #[test]
    fn file_values_in_every_form() {
        let f: ParamFile = serde_json::from_str(r#"{"q": [0.3, 0.1], "t": "0.5-0.2i", "p": 0.04, "z": [1, "2i"]}"#).unwrap();
        let r = Resolved { file: f };
        assert_eq!(r.q().unwrap(), C64::new(0.3, 0.1));
        assert_eq!(r.t().unwrap(), C64::new(0.5, -0.2));
        assert_eq!(r.p().unwrap(), C64::new(0.04, 0.0));
        assert_eq!(r.n(None, 3), 2);
        assert!(r.z(3).is_err());
        assert!(serde_json::from_str::<ParamFile>(r#"{"bogus": 1}"#).is_err());
    }
}
