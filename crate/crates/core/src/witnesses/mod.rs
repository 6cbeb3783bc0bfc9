//! Entanglement witnesses and the Frobenius-distance bound they certify.
//!
//! For a witness W on a D-dimensional space write W = a·I + b·W₁ with W₁
//! traceless and ‖W₁‖_F = 1. Pairing ρ − ω (ω the closest separable state)
//! with W₁ gives
//!
//! ```text
//! D_sep(ρ) ≥ |Tr W₁(ρ − ω)| = |Tr W(ρ − ω)| / b ≥ −Tr(Wρ) / b
//! ```
//!
//! because Tr(Wω) ≥ 0. Any denominator B ≥ b keeps the inequality valid.

mod mub;
mod spin;

pub use mub::{
    is_prime, mub_bound, mub_family, mub_witness, standard_mub_witness, MubFamily, RotationSet,
};
pub use spin::{collective_means, spin_bound, spin_constant, spin_witness, total_variance};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, Dims, TOL};
use crate::states::DensityMatrix;

/// A Hermitian observable on H_A ⊗ H_B. Whether it is nonnegative on
/// separable states is the constructor's responsibility, not checked here.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    dims: Dims,
    mat: ComplexMatrix,
}

impl Witness {
    pub fn new(dims: Dims, mat: ComplexMatrix) -> Result<Self> {
        dims.check_positive()?;
        if !mat.is_square() || mat.rows() != dims.total() {
            return Err(Error::Dimension(format!(
                "{}×{} witness does not act on {dims}",
                mat.rows(),
                mat.cols()
            )));
        }
        let herm = mat.hermitian_deviation();
        if herm > TOL.hermitian {
            return Err(Error::Invariant { invariant: "hermitian", deviation: herm });
        }
        if linalg::frobenius_norm(&mat) == 0.0 {
            return Err(Error::Domain("witness must be nonzero".into()));
        }
        Ok(Witness { dims, mat })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Tr(Wρ)
    pub fn value(&self, rho: &DensityMatrix) -> Result<f64> {
        if rho.dims() != self.dims {
            return Err(Error::Dimension(format!(
                "witness on {} applied to a state on {}",
                self.dims,
                rho.dims()
            )));
        }
        rho.expectation(&self.mat)
    }
}

/// W = a·I + b·W₁ with Tr W₁ = 0, ‖W₁‖_F = 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WitnessNormalization {
    pub a: f64,
    pub b: f64,
}

impl WitnessNormalization {
    /// W₁ = (W − a·I)/b
    pub fn direction(&self, w: &Witness) -> ComplexMatrix {
        let n = w.dims.total();
        (w.matrix() - &ComplexMatrix::identity(n).scale_real(self.a)).scale_real(1.0 / self.b)
    }
}

pub fn normalize_witness(w: &Witness) -> Result<WitnessNormalization> {
    let dim = w.dims.total() as f64;
    let trace = w.mat.trace().re;
    let a = trace / dim;
    let norm_sq = linalg::frobenius_norm(&w.mat).powi(2);
    let b_sq = norm_sq - trace * trace / dim;
    // Relative test: cancellation leaves ~ε·‖W‖² behind for multiples of I.
    if b_sq <= 1e-12 * norm_sq {
        return Err(Error::Domain(
            "witness is proportional to the identity and has no traceless direction".into(),
        ));
    }
    Ok(WitnessNormalization { a, b: b_sq.sqrt() })
}

/// A certified lower bound on D_sep(ρ) from one witness evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub witness_value: f64,
    pub b_used: f64,
    pub dsep_lower: f64,
    pub certified: bool,
}

impl BoundCertificate {
    pub fn from_value(witness_value: f64, b_used: f64) -> Self {
        BoundCertificate {
            witness_value,
            b_used,
            dsep_lower: (-witness_value / b_used).max(0.0),
            certified: witness_value < 0.0,
        }
    }
}

/// Relative slack when comparing a supplied denominator against the computed b.
const OVERRIDE_SLACK: f64 = 1e-9;

pub fn generic_bound(
    w: &Witness,
    rho: &DensityMatrix,
    b_override: Option<f64>,
) -> Result<BoundCertificate> {
    let value = w.value(rho)?;
    let norm = normalize_witness(w)?;
    let b_used = match b_override {
        None => norm.b,
        Some(b) if !(b.is_finite() && b > 0.0) => {
            return Err(Error::Domain(format!("denominator must be positive, got {b}")));
        }
        Some(b) if b < norm.b * (1.0 - OVERRIDE_SLACK) => {
            return Err(Error::Domain(format!(
                "denominator {b} is below the witness radius {}; the bound would be unsound",
                norm.b
            )));
        }
        Some(b) => b,
    };
    Ok(BoundCertificate::from_value(value, b_used))
}
