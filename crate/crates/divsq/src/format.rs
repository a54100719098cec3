//! JSON file formats for restricted vector spaces, complexes and results.
//!
//! Matrices are lists of rows of 0/1 entries. Keys of degree-indexed maps are
//! decimal strings; omitted dimensions are 0 and omitted matrices are zero.

use std::collections::BTreeMap;
use std::fmt;

use divsq_core::delta::MonomialBasisCounts;
use divsq_core::rchain::RVSComplex;
use divsq_core::unstable::{EInfinityDims, GeneratorRecord, PiUResult};
use divsq_core::{BigradedDims, F2Matrix, RestrictedVS};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormatError {
    /// The text is not JSON of the expected shape; carries serde's line and column.
    Syntax(String),
    /// The JSON is well formed but describes an invalid object.
    Invalid(String),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Syntax(m) => write!(f, "parse error: {m}"),
            FormatError::Invalid(m) => write!(f, "invalid input: {m}"),
        }
    }
}

impl std::error::Error for FormatError {}

type Bits = Vec<Vec<u8>>;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RestrictedJson {
    pub max_internal_degree: usize,
    #[serde(default)]
    pub dims: BTreeMap<String, usize>,
    #[serde(default)]
    pub phi: BTreeMap<String, Bits>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub levels: Vec<RestrictedJson>,
    #[serde(default)]
    pub differentials: Vec<BTreeMap<String, Bits>>,
}

fn degree_key(key: &str, max: usize, what: &str) -> Result<usize, FormatError> {
    let d: usize = key
        .trim()
        .parse()
        .map_err(|_| FormatError::Invalid(format!("{what}: key {key:?} is not a degree")))?;
    if d > max {
        return Err(FormatError::Invalid(format!(
            "{what}: degree {d} exceeds max_internal_degree {max}"
        )));
    }
    Ok(d)
}

fn matrix(bits: &Bits, rows: usize, cols: usize, what: &str) -> Result<F2Matrix, FormatError> {
    if bits.len() != rows {
        return Err(FormatError::Invalid(format!("{what}: expected {rows} rows, found {}", bits.len())));
    }
    for (r, row) in bits.iter().enumerate() {
        if row.len() != cols {
            return Err(FormatError::Invalid(format!(
                "{what}: row {r} has length {}, expected {cols}",
                row.len()
            )));
        }
        if let Some(b) = row.iter().find(|&&b| b > 1) {
            return Err(FormatError::Invalid(format!("{what}: entry {b} in row {r} is not a bit")));
        }
    }
    F2Matrix::from_bits(cols, bits).map_err(|e| FormatError::Invalid(format!("{what}: {e}")))
}

impl RestrictedJson {
    pub fn to_restricted(&self) -> Result<RestrictedVS, FormatError> {
        let n = self.max_internal_degree;
        let mut dims = vec![0; n + 1];
        for (k, &d) in &self.dims {
            dims[degree_key(k, n, "dims")?] = d;
        }
        let mut phi: Vec<F2Matrix> = (0..=n / 2).map(|i| F2Matrix::zeros(dims[2 * i], dims[i])).collect();
        phi[0] = F2Matrix::identity(dims[0]);
        for (k, bits) in &self.phi {
            let i = degree_key(k, n, "phi")?;
            if 2 * i > n {
                return Err(FormatError::Invalid(format!(
                    "phi in degree {i}: target degree {} lies outside the window",
                    2 * i
                )));
            }
            phi[i] = matrix(bits, dims[2 * i], dims[i], &format!("phi in degree {i}"))?;
        }
        RestrictedVS::new(n, dims, phi).map_err(|e| FormatError::Invalid(e.to_string()))
    }

    pub fn from_restricted(v: &RestrictedVS) -> Self {
        let dims = v
            .dims()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(i, &d)| (i.to_string(), d))
            .collect();
        let phi = v
            .phis()
            .iter()
            .enumerate()
            .filter(|(i, m)| *i > 0 && !m.is_zero())
            .map(|(i, m)| (i.to_string(), m.to_bits()))
            .collect();
        RestrictedJson {
            max_internal_degree: v.max_degree(),
            dims,
            phi,
        }
    }
}

impl ComplexJson {
    pub fn to_complex(&self) -> Result<RVSComplex, FormatError> {
        if self.levels.is_empty() {
            return Err(FormatError::Invalid("a complex needs at least one level".into()));
        }
        let levels = self
            .levels
            .iter()
            .enumerate()
            .map(|(n, l)| {
                l.to_restricted()
                    .map_err(|e| FormatError::Invalid(format!("level {n}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let max = levels[0].max_degree();
        if let Some((n, _)) = levels.iter().enumerate().find(|(_, l)| l.max_degree() != max) {
            return Err(FormatError::Invalid(format!(
                "level {n} has a different max_internal_degree from level 0"
            )));
        }
        if self.differentials.len() > levels.len() - 1 {
            return Err(FormatError::Invalid(format!(
                "{} differentials for {} levels",
                self.differentials.len(),
                levels.len()
            )));
        }
        let mut differentials = Vec::with_capacity(levels.len() - 1);
        for n in 1..levels.len() {
            let mut comps: Vec<F2Matrix> = (0..=max)
                .map(|i| F2Matrix::zeros(levels[n - 1].dim(i), levels[n].dim(i)))
                .collect();
            if let Some(map) = self.differentials.get(n - 1) {
                for (k, bits) in map {
                    let i = degree_key(k, max, &format!("differential d{n}"))?;
                    comps[i] = matrix(
                        bits,
                        levels[n - 1].dim(i),
                        levels[n].dim(i),
                        &format!("differential d{n} in degree {i}"),
                    )?;
                }
            }
            differentials.push(comps);
        }
        RVSComplex::new(levels, differentials).map_err(|e| FormatError::Invalid(e.to_string()))
    }

    pub fn from_complex(c: &RVSComplex) -> Self {
        ComplexJson {
            levels: c.levels().iter().map(RestrictedJson::from_restricted).collect(),
            differentials: c
                .differentials()
                .iter()
                .map(|d| {
                    d.iter()
                        .enumerate()
                        .filter(|(_, m)| !m.is_zero())
                        .map(|(i, m)| (i.to_string(), m.to_bits()))
                        .collect()
                })
                .collect(),
        }
    }
}

fn syntax(e: serde_json::Error) -> FormatError {
    FormatError::Syntax(e.to_string())
}

pub fn parse_restricted(text: &str) -> Result<RestrictedVS, FormatError> {
    serde_json::from_str::<RestrictedJson>(text).map_err(syntax)?.to_restricted()
}

pub fn parse_complex(text: &str) -> Result<RVSComplex, FormatError> {
    serde_json::from_str::<ComplexJson>(text).map_err(syntax)?.to_complex()
}

pub fn restricted_to_json(v: &RestrictedVS) -> String {
    serde_json::to_string_pretty(&RestrictedJson::from_restricted(v)).expect("serializable")
}

pub fn complex_to_json(c: &RVSComplex) -> String {
    serde_json::to_string_pretty(&ComplexJson::from_complex(c)).expect("serializable")
}

/// `{"(t,q)": c}` over the nonzero entries.
pub fn bigraded_value(dims: &BigradedDims) -> Value {
    let map: BTreeMap<String, u64> = dims.iter().map(|((t, q), c)| (format!("({t},{q})"), c)).collect();
    json!(map)
}

/// `{"(n,q,w)": c}` over the nonzero entries.
pub fn counts_value(counts: &MonomialBasisCounts) -> Value {
    let map: BTreeMap<String, u64> = counts
        .iter()
        .map(|((t, q, w), c)| (format!("({t},{q},{w})"), c))
        .collect();
    json!(map)
}

fn generator_value(g: &GeneratorRecord) -> Value {
    match g {
        GeneratorRecord::DegreeZero { summand } => json!({
            "factor": "degree_zero",
            "summand": summand.to_string(),
        }),
        GeneratorRecord::Delta {
            factor,
            ops,
            base,
            index,
            homotopy,
            internal,
            polynomial,
        } => json!({
            "factor": format!("{factor:?}").to_lowercase(),
            "ops": ops.entries(),
            "base": [base.0, base.1],
            "index": index,
            "homotopy": homotopy,
            "internal": internal,
            "polynomial": polynomial,
        }),
    }
}

pub fn pi_u_value(r: &PiUResult) -> Value {
    json!({
        "dims": bigraded_value(&r.dims),
        "generators": r.generators.iter().map(generator_value).collect::<Vec<_>>(),
    })
}

/// `{"(s,t,q)": c}` with `s` the filtration.
pub fn e_infinity_value(e: &EInfinityDims) -> Value {
    let map: BTreeMap<String, u64> = e.iter().map(|((s, t, q), c)| (format!("({s},{t},{q})"), c)).collect();
    json!({ "dims": map, "marginal": bigraded_value(&e.marginal()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use divsq_core::restricted::{decompose, Summand};

    #[test]
    fn restricted_round_trip() {
        let text = r#"{"max_internal_degree": 4, "dims": {"1": 1, "2": 1, "4": 1}, "phi": {"1": [[1]], "2": [[1]]}}"#;
        let v = parse_restricted(text).unwrap();
        assert_eq!(decompose(&v).unwrap().summands(), &[Summand::Free { n: 1 }]);
        assert_eq!(parse_restricted(&restricted_to_json(&v)).unwrap(), v);
    }

    #[test]
    fn omitted_entries_default_to_zero() {
        let v = parse_restricted(r#"{"max_internal_degree": 3}"#).unwrap();
        assert_eq!(v.total_dim(), 0);
        let v = parse_restricted(r#"{"max_internal_degree": 4, "dims": {"2": 2}}"#).unwrap();
        assert_eq!(v.dims(), &[0, 0, 2, 0, 0]);
    }

    #[test]
    fn shape_errors_name_the_degree() {
        let err = parse_restricted(r#"{"max_internal_degree": 4, "dims": {"1": 1, "2": 2}, "phi": {"1": [[1]]}}"#)
            .unwrap_err();
        assert!(err.to_string().contains("degree 1"), "{err}");
        let err = parse_restricted(r#"{"max_internal_degree": 2, "dims": {"1": 1,}}"#).unwrap_err();
        assert!(matches!(err, FormatError::Syntax(ref m) if m.contains("line 1")), "{err}");
        let err = parse_restricted(r#"{"max_internal_degree": 2, "dims": {"5": 1}}"#).unwrap_err();
        assert!(err.to_string().contains("degree 5"));
    }

    #[test]
    fn complex_round_trip() {
        let c = RVSComplex::shifted_torsion_cell(1, 1, 2, 8);
        let text = complex_to_json(&c);
        assert_eq!(parse_complex(&text).unwrap(), c);
    }

    #[test]
    fn bad_differential_is_rejected() {
        let text = r#"{"levels": [{"max_internal_degree": 2, "dims": {"1": 1}},
                                   {"max_internal_degree": 2, "dims": {"1": 1}},
                                   {"max_internal_degree": 2, "dims": {"1": 1}}],
                       "differentials": [{"1": [[1]]}, {"1": [[1]]}]}"#;
        assert!(matches!(parse_complex(text), Err(FormatError::Invalid(_))));
    }
}
