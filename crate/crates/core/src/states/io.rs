//! JSON files for states and witnesses.
//!
//! ```json
//! {"dims": [dA, dB], "matrix": [[[re, im], ...], ...]}
//! ```
//!
//! `matrix` is row-major with dA·dB rows of dA·dB `[re, im]` pairs. Witness
//! files carry `"kind": "witness"` and are only checked for Hermiticity.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Dims, C64};
use crate::witnesses::Witness;

const WITNESS_KIND: &str = "witness";
const STATE_KIND: &str = "state";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub dims: [usize; 2],
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl OperatorFile {
    pub fn from_matrix(kind: Option<&str>, dims: Dims, mat: &ComplexMatrix) -> Self {
        let matrix = (0..mat.rows())
            .map(|i| (0..mat.cols()).map(|j| [mat[(i, j)].re, mat[(i, j)].im]).collect())
            .collect();
        OperatorFile { kind: kind.map(str::to_owned), dims: [dims.a, dims.b], matrix }
    }

    pub fn dims(&self) -> Dims {
        Dims::new(self.dims[0], self.dims[1])
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let dims = self.dims();
        dims.check_positive()?;
        let n = dims.total();
        if self.matrix.len() != n {
            return Err(Error::Dimension(format!(
                "`matrix` has {} rows, dims {dims} need {n}",
                self.matrix.len()
            )));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "row {i} of `matrix` has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
        }
        ComplexMatrix::new(n, n, data)
    }

    fn expect_kind(&self, wanted: &str) -> Result<()> {
        match self.kind.as_deref() {
            None => Ok(()),
            Some(k) if k == wanted => Ok(()),
            Some(k) => Err(Error::Parse(format!("expected a {wanted} file, found kind `{k}`"))),
        }
    }
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string(&OperatorFile::from_matrix(None, rho.dims(), rho.matrix()))
        .expect("operator files always serialize")
}

pub fn state_from_json(text: &str) -> Result<DensityMatrix> {
    let file: OperatorFile = serde_json::from_str(text)?;
    file.expect_kind(STATE_KIND)?;
    DensityMatrix::new(file.dims(), file.to_matrix()?)
}

pub fn witness_to_json(w: &Witness) -> String {
    serde_json::to_string(&OperatorFile::from_matrix(Some(WITNESS_KIND), w.dims(), w.matrix()))
        .expect("operator files always serialize")
}

pub fn witness_from_json(text: &str) -> Result<Witness> {
    let file: OperatorFile = serde_json::from_str(text)?;
    file.expect_kind(WITNESS_KIND)?;
    Witness::new(file.dims(), file.to_matrix()?)
}

pub fn save_state(rho: &DensityMatrix, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, state_to_json(rho))?;
    Ok(())
}

pub fn load_state(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    state_from_json(&fs::read_to_string(path)?)
}

pub fn save_witness(w: &Witness, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, witness_to_json(w))?;
    Ok(())
}

pub fn load_witness(path: impl AsRef<Path>) -> Result<Witness> {
    witness_from_json(&fs::read_to_string(path)?)
}
