//! Versioned JSON form of polynomials:
//! `{"v":1,"dim":d,"kind":"zonal"|"s2","coeffs":[[degree, value…]…]}`.
//!
//! Zonal rows are `[k, a_k]`; S² rows are `[n, c_0, …, c_2n]`.

use serde::Deserialize;
use serde_json::{json, Number, Value};

use super::{Polynomial, S2Polynomial, ZonalPolynomial};
use crate::error::{Error, Result};
use crate::specfun::DimensionParams;

pub const POLYNOMIAL_SCHEMA_VERSION: u32 = 1;
/// Largest degree accepted from serialized input.
pub const MAX_SERIALIZED_DEGREE: u32 = 1 << 16;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPolynomial {
    v: u32,
    dim: u32,
    kind: String,
    coeffs: Vec<Vec<Number>>,
}

fn number(x: f64) -> Value {
    Value::Number(Number::from_f64(x).expect("coefficients are finite"))
}

pub fn polynomial_to_json(f: &Polynomial) -> Value {
    let (kind, rows): (&str, Vec<Value>) = match f {
        Polynomial::Zonal(g) => ("zonal", g.coeffs().iter().map(|(&k, &a)| json!([k, number(a)])).collect()),
        Polynomial::S2(g) => (
            "s2",
            g.blocks()
                .iter()
                .map(|(&n, block)| {
                    let mut row = vec![Value::from(n)];
                    row.extend(block.iter().map(|&c| number(c)));
                    Value::Array(row)
                })
                .collect(),
        ),
    };
    json!({ "v": POLYNOMIAL_SCHEMA_VERSION, "dim": f.d(), "kind": kind, "coeffs": rows })
}

fn degree_of(cell: &Number, row: usize) -> Result<u32> {
    let k = cell.as_u64().ok_or_else(|| Error::Parse(format!("row {row}: degree must be a nonnegative integer")))?;
    if k > MAX_SERIALIZED_DEGREE as u64 {
        return Err(Error::Parse(format!("row {row}: degree {k} exceeds {MAX_SERIALIZED_DEGREE}")));
    }
    Ok(k as u32)
}

fn value_of(cell: &Number, row: usize) -> Result<f64> {
    cell.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Parse(format!("row {row}: coefficient is not a finite number")))
}

pub fn polynomial_from_json(text: &str) -> Result<Polynomial> {
    let raw: RawPolynomial = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.v != POLYNOMIAL_SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema version {}", raw.v)));
    }
    let dim = DimensionParams::new(raw.dim)?;
    let mut seen = std::collections::BTreeSet::new();
    let mut check_unique = |k: u32, row: usize| {
        if seen.insert(k) {
            Ok(())
        } else {
            Err(Error::Parse(format!("row {row}: degree {k} repeated")))
        }
    };
    match raw.kind.as_str() {
        "zonal" => {
            let mut terms = Vec::with_capacity(raw.coeffs.len());
            for (i, row) in raw.coeffs.iter().enumerate() {
                let [k, a] = row.as_slice() else {
                    return Err(Error::Parse(format!("row {i}: zonal rows are [degree, value]")));
                };
                let k = degree_of(k, i)?;
                check_unique(k, i)?;
                terms.push((k, value_of(a, i)?));
            }
            Ok(Polynomial::Zonal(ZonalPolynomial::new(dim, terms)?))
        }
        "s2" => {
            if raw.dim != 2 {
                return Err(Error::Parse(format!("kind s2 requires dim 2, got {}", raw.dim)));
            }
            let mut blocks = Vec::with_capacity(raw.coeffs.len());
            for (i, row) in raw.coeffs.iter().enumerate() {
                let Some((k, rest)) = row.split_first() else {
                    return Err(Error::Parse(format!("row {i}: empty row")));
                };
                let n = degree_of(k, i)?;
                check_unique(n, i)?;
                if rest.len() != 2 * n as usize + 1 {
                    return Err(Error::Parse(format!("row {i}: degree {n} needs {} values", 2 * n + 1)));
                }
                blocks.push((n, rest.iter().map(|c| value_of(c, i)).collect::<Result<Vec<_>>>()?));
            }
            Ok(Polynomial::S2(S2Polynomial::new(blocks)?))
        }
        other => Err(Error::Parse(format!("unknown kind {other:?}"))),
    }
}
