//! JSON documents for algebras.
//!
//! ```json
//! { "dim": 3, "basis": ["e1","e2","e3"],
//!   "product": [ { "i": 1, "j": 2, "out": { "3": "1" } } ],
//!   "twist": [["1","0","0"],["0","1","0"],["0","0","1"]],
//!   "require_multiplicative": true,
//!   "comment": ["optional provenance notes"] }
//! ```
//!
//! Indices are 1-based, only `i < j` is given, rationals are `"p/q"` or
//! integer strings. Column `j` of `twist` is the image of `e_j`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, AlgebraSpec, Element};
use crate::scalar::{format_rational, parse_rational};
use crate::Rational;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub comment: Vec<String>,
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub product: Vec<ProductDoc>,
    pub twist: Vec<Vec<String>>,
    #[serde(default)]
    pub require_multiplicative: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductDoc {
    pub i: usize,
    pub j: usize,
    pub out: BTreeMap<String, String>,
}

fn schema(msg: impl Into<String>) -> AlgebraError {
    AlgebraError::Schema(msg.into())
}

fn rational(text: &str) -> Result<Rational, AlgebraError> {
    parse_rational(text).map_err(|e| schema(e.to_string()))
}

impl AlgebraDoc {
    pub fn into_spec(self) -> Result<AlgebraSpec<Rational>, AlgebraError> {
        let n = self.dim;
        if n == 0 {
            return Err(schema("dim must be positive"));
        }
        if self.basis.len() != n {
            return Err(schema(format!("basis has {} names but dim is {n}", self.basis.len())));
        }
        let mut products = Vec::with_capacity(self.product.len());
        for entry in &self.product {
            if entry.i == 0 || entry.j == 0 || entry.i > n || entry.j > n {
                return Err(schema(format!("product index ({}, {}) out of range 1..={n}", entry.i, entry.j)));
            }
            let mut out = Element::zero(n);
            for (k, v) in &entry.out {
                let k: usize = k.parse().map_err(|_| schema(format!("output index {k:?} is not an integer")))?;
                if k == 0 || k > n {
                    return Err(schema(format!("output index {k} out of range 1..={n}")));
                }
                out.0[k - 1] = rational(v)?;
            }
            products.push((entry.i - 1, entry.j - 1, out));
        }
        let twist = self
            .twist
            .iter()
            .map(|row| row.iter().map(|c| rational(c)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let mut spec = AlgebraSpec::new(self.basis, &products, twist)?;
        spec.require_multiplicative = self.require_multiplicative;
        spec.comment = self.comment;
        if spec.require_multiplicative {
            spec.check_multiplicative()?;
        }
        Ok(spec)
    }
}

/// Parses and validates an algebra document. With `require_multiplicative`
/// set, the twist must be an endomorphism of the product.
pub fn load_algebra(text: &str) -> Result<AlgebraSpec<Rational>, AlgebraError> {
    let doc: AlgebraDoc = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    doc.into_spec()
}

pub fn to_json(spec: &AlgebraSpec<Rational>) -> AlgebraDoc {
    let product = spec
        .products()
        .into_iter()
        .map(|(i, j, e)| ProductDoc {
            i: i + 1,
            j: j + 1,
            out: e
                .0
                .iter()
                .enumerate()
                .filter(|(_, c)| *c != &Rational::from_integer(0.into()))
                .map(|(k, c)| ((k + 1).to_string(), format_rational(c)))
                .collect(),
        })
        .collect();
    AlgebraDoc {
        comment: spec.comment.clone(),
        dim: spec.dim(),
        basis: spec.basis_names().to_vec(),
        product,
        twist: spec.twist_matrix().iter().map(|row| row.iter().map(format_rational).collect()).collect(),
        require_multiplicative: spec.require_multiplicative,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CROSS: &str = r#"{"dim":3,"basis":["e1","e2","e3"],
        "product":[{"i":1,"j":2,"out":{"3":"1"}},{"i":1,"j":3,"out":{"2":"-1"}},{"i":2,"j":3,"out":{"1":"1"}}],
        "twist":[["1","0","0"],["0","1","0"],["0","0","1"]],"require_multiplicative":true}"#;

    #[test]
    fn loads_and_reemits() {
        let spec = load_algebra(CROSS).unwrap();
        assert_eq!(spec.dim(), 3);
        let doc = to_json(&spec);
        let again = doc.into_spec().unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn schema_violations() {
        for bad in [
            r#"{"dim":2,"basis":["a"],"twist":[["1","0"],["0","1"]]}"#,
            r#"{"dim":2,"basis":["a","b"],"twist":[["1","0"]]}"#,
            r#"{"dim":2,"basis":["a","b"],"product":[{"i":2,"j":1,"out":{}}],"twist":[["1","0"],["0","1"]]}"#,
            r#"{"dim":2,"basis":["a","b"],"product":[{"i":1,"j":3,"out":{}}],"twist":[["1","0"],["0","1"]]}"#,
            r#"{"dim":2,"basis":["a","b"],"product":[{"i":1,"j":2,"out":{"3":"1"}}],"twist":[["1","0"],["0","1"]]}"#,
            r#"{"dim":2,"basis":["a","b"],"product":[{"i":1,"j":2,"out":{"1":"1/0"}}],"twist":[["1","0"],["0","1"]]}"#,
            r#"{"dim":2,"basis":["a","b"],"twist":[["1","0"],["0","1"]],"extra":1}"#,
            r#"{"dim":0,"basis":[],"twist":[]}"#,
            "not json",
        ] {
            assert!(matches!(load_algebra(bad), Err(AlgebraError::Schema(_))), "{bad}");
        }
    }

    #[test]
    fn multiplicativity_checked_on_load() {
        // α(e1) = e2 and α(e2) = e1 would need α(e3) = -e3, not e3.
        let broken = CROSS.replace(
            r#"[["1","0","0"],["0","1","0"],["0","0","1"]]"#,
            r#"[["0","1","0"],["1","0","0"],["0","0","1"]]"#,
        );
        assert_eq!(load_algebra(&broken), Err(AlgebraError::NotMultiplicative { i: 1, j: 2 }));
        let lenient = broken.replace(r#""require_multiplicative":true"#, r#""require_multiplicative":false"#);
        assert!(load_algebra(&lenient).is_ok());
    }
}
