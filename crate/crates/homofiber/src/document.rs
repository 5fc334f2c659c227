//! JSON space documents.
//!
//! Complex matrices are arrays of rows of `[re, im]` pairs. Module indices in
//! `pair` are 1-based.
//!
//! ```json
//! {
//!   "name": "hopf1",
//!   "ambient_n": 2,
//!   "g_basis": [[[[0, 1], [0, 0]], [[0, 0], [0, 0]]], ...],
//!   "h_basis": [...],
//!   "k_basis": [...],
//!   "weights": [1.0, 1.0],
//!   "pair": [1, 2],
//!   "W": [[[0, 1], [0, 0]], [[0, 0], [0, 0]]],
//!   "k": 1.0,
//!   "model": { "vector": [[0, 0], [1, 0]] }
//! }
//! ```
//!
//! Exactly one of `k_basis` (a subalgebra chain) and `module_bases` (explicit
//! modules) is present.

use std::path::Path;

use homofiber_core::catalog::{CatalogEntry, SpaceData, Structure};
use homofiber_core::{AlgebraElement, BaseModel, Complex64, Matrix, ModulePair, Tolerances};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type MatrixDoc = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelDoc {
    Vector(Vec<[f64; 2]>),
    Orbit(MatrixDoc),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub name: String,
    pub ambient_n: usize,
    pub g_basis: Vec<MatrixDoc>,
    pub h_basis: Vec<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_basis: Option<Vec<MatrixDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module_bases: Option<Vec<Vec<MatrixDoc>>>,
    pub weights: Vec<f64>,
    #[serde(default)]
    pub pair: Option<Vec<usize>>,
    #[serde(rename = "W")]
    pub w: MatrixDoc,
    pub k: f64,
    #[serde(default)]
    pub model: Option<ModelDoc>,
}

fn matrix_doc(m: &Matrix) -> MatrixDoc {
    let n = m.n();
    (0..n)
        .map(|i| (0..n).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
        .collect()
}

fn element_doc(x: &AlgebraElement) -> MatrixDoc {
    matrix_doc(x.matrix())
}

fn elements_doc(xs: &[AlgebraElement]) -> Vec<MatrixDoc> {
    xs.iter().map(element_doc).collect()
}

fn complex_entries(rows: &[[f64; 2]]) -> Vec<Complex64> {
    rows.iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect()
}

fn parse_matrix(doc: &MatrixDoc, n: usize, what: &str) -> Result<Matrix> {
    if doc.len() != n || doc.iter().any(|row| row.len() != n) {
        return Err(Error::Parse(format!("{what}: expected a {n}x{n} matrix")));
    }
    let entries: Vec<Complex64> = doc.iter().flat_map(|row| complex_entries(row)).collect();
    Ok(Matrix::from_row_major(n, entries)?)
}

fn parse_element(doc: &MatrixDoc, n: usize, what: &str) -> Result<AlgebraElement> {
    Ok(AlgebraElement::new(parse_matrix(doc, n, what)?)?)
}

fn parse_elements(docs: &[MatrixDoc], n: usize, what: &str) -> Result<Vec<AlgebraElement>> {
    docs.iter()
        .enumerate()
        .map(|(i, d)| parse_element(d, n, &format!("{what}[{i}]")))
        .collect()
}

impl SpaceDocument {
    pub fn from_data(data: &SpaceData) -> Self {
        let (k_basis, module_bases) = match &data.structure {
            Structure::Chain { k_basis } => (Some(elements_doc(k_basis)), None),
            Structure::Modules(mods) => {
                (None, Some(mods.iter().map(|m| elements_doc(m)).collect()))
            }
        };
        let pair = data.pair.map(|p| {
            let mut v = vec![p.a + 1];
            v.extend(p.b.map(|b| b + 1));
            v
        });
        let model = data.model.as_ref().map(|m| match m {
            BaseModel::Vector(v) => ModelDoc::Vector(v.iter().map(|z| [z.re, z.im]).collect()),
            BaseModel::Orbit(xi) => ModelDoc::Orbit(element_doc(xi)),
        });
        Self {
            name: data.name.clone(),
            ambient_n: data.n,
            g_basis: elements_doc(&data.g_basis),
            h_basis: elements_doc(&data.h_basis),
            k_basis,
            module_bases,
            weights: data.weights.clone(),
            pair,
            w: element_doc(&data.w),
            k: data.charge,
            model,
        }
    }

    pub fn from_entry(entry: &CatalogEntry) -> Self {
        Self::from_data(entry.data())
    }

    /// Shape checks and conversion; hypotheses are left to the validators.
    pub fn to_data(&self) -> Result<SpaceData> {
        let n = self.ambient_n;
        if n == 0 {
            return Err(Error::Parse("ambient_n must be positive".into()));
        }
        let structure = match (&self.k_basis, &self.module_bases) {
            (Some(k), None) => Structure::Chain {
                k_basis: parse_elements(k, n, "k_basis")?,
            },
            (None, Some(mods)) => Structure::Modules(
                mods.iter()
                    .enumerate()
                    .map(|(i, m)| parse_elements(m, n, &format!("module_bases[{i}]")))
                    .collect::<Result<_>>()?,
            ),
            _ => {
                return Err(Error::Parse(
                    "exactly one of k_basis and module_bases is required".into(),
                ))
            }
        };
        let pair = match self.pair.as_deref() {
            None => None,
            Some([a]) if *a >= 1 => Some(ModulePair::single(a - 1)),
            Some([a, b]) if *a >= 1 && *b >= 1 => Some(ModulePair::new(a - 1, b - 1)),
            Some(_) => return Err(Error::Parse("pair must be [a] or [a, b], 1-based".into())),
        };
        let model = match &self.model {
            None => None,
            Some(ModelDoc::Vector(v)) => {
                if v.len() != n {
                    return Err(Error::Parse(format!("model vector must have {n} entries")));
                }
                Some(BaseModel::Vector(complex_entries(v)))
            }
            Some(ModelDoc::Orbit(m)) => Some(BaseModel::Orbit(parse_element(m, n, "model")?)),
        };
        Ok(SpaceData {
            name: self.name.clone(),
            n,
            g_basis: parse_elements(&self.g_basis, n, "g_basis")?,
            h_basis: parse_elements(&self.h_basis, n, "h_basis")?,
            structure,
            weights: self.weights.clone(),
            pair,
            w: parse_element(&self.w, n, "W")?,
            charge: self.k,
            model,
        })
    }

    pub fn to_entry(&self, tol: Tolerances) -> Result<CatalogEntry> {
        Ok(CatalogEntry::from_data(self.to_data()?, tol)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }
}

/// Reads and builds a custom space from a document on disk.
pub fn load_custom(path: &Path, tol: Tolerances) -> Result<CatalogEntry> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    SpaceDocument::from_json(&text)?.to_entry(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use homofiber_core::catalog;

    #[test]
    fn round_trip_every_catalog_entry() {
        for name in catalog::NAMES {
            let entry = catalog::by_name(name).unwrap();
            let doc = SpaceDocument::from_entry(&entry);
            let back = SpaceDocument::from_json(&doc.to_json()).unwrap();
            assert_eq!(back, doc);
            let rebuilt = back.to_entry(entry.tolerances()).unwrap();
            assert_eq!(rebuilt.data(), entry.data());
        }
    }

    #[test]
    fn explicit_modules_round_trip() {
        let data = catalog::su3_root_modules();
        let doc = SpaceDocument::from_data(&data);
        assert!(doc.k_basis.is_none());
        assert_eq!(doc.to_data().unwrap(), data);
    }

    #[test]
    fn shape_errors_are_parse_errors() {
        let mut doc = SpaceDocument::from_entry(&catalog::hopf(1).unwrap());
        doc.w.pop();
        assert!(matches!(doc.to_data(), Err(Error::Parse(_))));
        let mut doc = SpaceDocument::from_entry(&catalog::hopf(1).unwrap());
        doc.pair = Some(vec![0, 1]);
        assert!(matches!(doc.to_data(), Err(Error::Parse(_))));
        assert!(matches!(
            SpaceDocument::from_json("{"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn non_skew_matrix_is_a_domain_error() {
        let mut doc = SpaceDocument::from_entry(&catalog::hopf(1).unwrap());
        doc.h_basis[0][0][0] = [1.0, 0.0];
        let err = doc.to_data().unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }
}
