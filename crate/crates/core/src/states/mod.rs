//! Bipartite states, Schmidt decomposition, state files and exact fixtures.

mod fixtures;
mod io;

pub use fixtures::{fixture, Fixture, FixtureValue};
pub use io::{
    load_state, load_witness, save_state, save_witness, state_from_json, state_to_json,
    witness_from_json, witness_to_json, OperatorFile,
};

use crate::error::{Error, Result};
use crate::linalg::{
    self, complete_unitary, hermitian_eig, kron, ComplexMatrix, Dims, Subsystem, C64, TOL,
};

/// A mixed state ρ on H_A ⊗ H_B. Hermitian, unit trace and PSD (within tolerance).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Dims,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(dims: Dims, mat: ComplexMatrix) -> Result<Self> {
        dims.check_positive()?;
        if !mat.is_square() || mat.rows() != dims.total() {
            return Err(Error::Dimension(format!(
                "{}×{} matrix cannot be a state on {dims}",
                mat.rows(),
                mat.cols()
            )));
        }
        let herm = mat.hermitian_deviation();
        if herm > TOL.hermitian {
            return Err(Error::Invariant { invariant: "hermitian", deviation: herm });
        }
        let tr = mat.trace();
        let trace_dev = (tr - linalg::ONE).norm();
        if trace_dev > TOL.trace {
            return Err(Error::Invariant { invariant: "trace", deviation: trace_dev });
        }
        let min_eig = hermitian_eig(&mat)?.min();
        if min_eig < -TOL.state_psd {
            return Err(Error::Invariant {
                invariant: "positive semidefinite",
                deviation: -min_eig,
            });
        }
        Ok(DensityMatrix { dims, mat })
    }

    /// A state of a single system, stored as d⊗1.
    pub fn single(mat: ComplexMatrix) -> Result<Self> {
        let d = mat.rows();
        Self::new(Dims::new(d, 1), mat)
    }

    pub fn maximally_mixed(dims: Dims) -> Self {
        let n = dims.total();
        Self::new(dims, ComplexMatrix::identity(n).scale_real(1.0 / n as f64))
            .expect("I/D is a state")
    }

    pub fn from_pure(psi: &PureState) -> Self {
        DensityMatrix { dims: psi.dims, mat: psi.projector() }
    }

    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        Self::new(Dims::new(a.dims.total(), b.dims.total()), kron(&a.mat, &b.mat))
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// Re Tr(Oρ) for a Hermitian observable O.
    pub fn expectation(&self, observable: &ComplexMatrix) -> Result<f64> {
        Ok(linalg::trace_of_product(observable, &self.mat)?.re)
    }

    pub fn purity(&self) -> f64 {
        linalg::frobenius_norm(&self.mat).powi(2)
    }

    pub fn reduced(&self, keep: Subsystem) -> Result<DensityMatrix> {
        let m = linalg::partial_trace(&self.mat, self.dims, keep)?;
        let d = m.rows();
        Self::new(Dims::new(d, 1), m)
    }

    pub fn partial_transpose(&self, on: Subsystem) -> ComplexMatrix {
        linalg::partial_transpose(&self.mat, self.dims, on).expect("dims validated on construction")
    }

    /// ‖ρ − σ‖_F
    pub fn distance(&self, other: &DensityMatrix) -> Result<f64> {
        Ok(linalg::frobenius_norm(&self.mat.try_sub(&other.mat)?))
    }
}

/// A unit vector in H_A ⊗ H_B, index `i·dB + j` ↔ |i⟩_A|j⟩_B.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    dims: Dims,
    vec: Vec<C64>,
}

impl PureState {
    pub fn new(dims: Dims, vec: Vec<C64>) -> Result<Self> {
        dims.check_positive()?;
        if vec.len() != dims.total() {
            return Err(Error::Dimension(format!(
                "vector of length {} cannot be a state on {dims}",
                vec.len()
            )));
        }
        if vec.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("state amplitudes must be finite".into()));
        }
        let dev = (linalg::vector_norm(&vec) - 1.0).abs();
        if dev > TOL.unit_norm {
            return Err(Error::Invariant { invariant: "unit norm", deviation: dev });
        }
        Ok(PureState { dims, vec })
    }

    /// Normalizes `vec` first; fails only on the zero vector or a length mismatch.
    pub fn normalized(dims: Dims, mut vec: Vec<C64>) -> Result<Self> {
        if linalg::normalize(&mut vec) == 0.0 {
            return Err(Error::Domain("cannot normalize the zero vector".into()));
        }
        Self::new(dims, vec)
    }

    pub fn product(a: &[C64], b: &[C64]) -> Result<Self> {
        Self::normalized(Dims::new(a.len(), b.len()), linalg::kron_vec(a, b))
    }

    /// Σᵢ √λᵢ |ii⟩ for the given Schmidt coefficients.
    pub fn schmidt_diagonal(lambda: &SchmidtVector) -> Self {
        let d = lambda.len();
        let mut vec = vec![linalg::ZERO; d * d];
        for (i, l) in lambda.as_slice().iter().enumerate() {
            vec[i * d + i] = C64::new(l.sqrt(), 0.0);
        }
        Self::normalized(Dims::square(d), vec).expect("nonzero Schmidt vector")
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.vec
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.vec)
    }

    /// dA×dB matrix C with ψ = Σ C_ij |i⟩|j⟩.
    pub fn coefficient_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::new(self.dims.a, self.dims.b, self.vec.clone()).expect("length checked")
    }

    /// (U_A ⊗ U_B)|ψ⟩
    pub fn apply_local(&self, ua: &ComplexMatrix, ub: &ComplexMatrix) -> Result<PureState> {
        let v = kron(ua, ub).matvec(&self.vec)?;
        Self::normalized(self.dims, v)
    }
}

/// Schmidt coefficients λᵢ (squared singular values), descending, summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtVector(Vec<f64>);

impl SchmidtVector {
    pub fn new(mut coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("Schmidt vector must be nonempty".into()));
        }
        if let Some(&neg) = coeffs.iter().find(|&&x| x.is_nan() || x < 0.0) {
            return Err(Error::Invariant { invariant: "nonnegative coefficients", deviation: -neg });
        }
        let sum: f64 = coeffs.iter().sum();
        if (sum - 1.0).abs() > TOL.trace {
            return Err(Error::Invariant { invariant: "coefficients sum to one", deviation: (sum - 1.0).abs() });
        }
        coeffs.sort_by(|a, b| b.total_cmp(a));
        Ok(SchmidtVector(coeffs))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// λ₀, the largest coefficient.
    pub fn largest(&self) -> f64 {
        self.0[0]
    }

    /// Σλᵢ² = Tr ρ_A²
    pub fn purity(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.0.iter().filter(|&&x| x > tol).count()
    }
}

#[derive(Clone, Debug)]
pub struct Schmidt {
    pub coeffs: SchmidtVector,
    /// Unitary on H_A; column i is |aᵢ⟩.
    pub basis_a: ComplexMatrix,
    /// Unitary on H_B; column i is |bᵢ⟩.
    pub basis_b: ComplexMatrix,
}

impl Schmidt {
    /// Σᵢ √λᵢ |aᵢ⟩|bᵢ⟩
    pub fn reconstruct(&self) -> Vec<C64> {
        let mut out = vec![linalg::ZERO; self.basis_a.rows() * self.basis_b.rows()];
        for (i, l) in self.coeffs.as_slice().iter().enumerate() {
            let term = linalg::kron_vec(&self.basis_a.column(i), &self.basis_b.column(i));
            for (o, t) in out.iter_mut().zip(term) {
                *o += t * l.sqrt();
            }
        }
        out
    }
}

pub fn schmidt(psi: &PureState) -> Result<Schmidt> {
    // C = U Σ V†  ⇒  ψ = Σ sᵢ |uᵢ⟩ ⊗ |conj(vᵢ)⟩
    let dec = linalg::svd(&psi.coefficient_matrix())?;
    let squares: Vec<f64> = dec.singular_values.iter().map(|s| s * s).collect();
    let total: f64 = squares.iter().sum();
    let coeffs = SchmidtVector::new(squares.iter().map(|x| x / total).collect())?;
    Ok(Schmidt {
        coeffs,
        basis_a: complete_unitary(&dec.u),
        basis_b: complete_unitary(&dec.v.conj()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{unitarity_deviation, ONE, ZERO};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn assert_coeffs(psi: &PureState, expected: &[f64]) {
        let s = schmidt(psi).unwrap();
        assert_eq!(s.coeffs.len(), expected.len());
        for (a, b) in s.coeffs.as_slice().iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{:?} vs {expected:?}", s.coeffs);
        }
        let rec = s.reconstruct();
        let overlap = linalg::inner(&rec, psi.amplitudes()).norm();
        assert!((overlap - 1.0).abs() < 1e-9);
        assert!(unitarity_deviation(&s.basis_a) < 1e-10);
        assert!(unitarity_deviation(&s.basis_b) < 1e-10);
    }

    #[test]
    fn schmidt_examples() {
        let product = PureState::product(&[ONE, ZERO], &[ZERO, ONE]).unwrap();
        assert_coeffs(&product, &[1.0, 0.0]);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::new(Dims::square(2), vec![c(s), ZERO, ZERO, c(s)]).unwrap();
        assert_coeffs(&bell, &[0.5, 0.5]);

        let skew = PureState::new(Dims::square(2), vec![c(0.8), ZERO, ZERO, c(0.6)]).unwrap();
        assert_coeffs(&skew, &[0.64, 0.36]);
    }

    #[test]
    fn schmidt_on_rectangular_split() {
        // (|00⟩ + |12⟩)/√2 in 2⊗3.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = vec![ZERO; 6];
        v[0] = c(s);
        v[5] = c(s);
        let psi = PureState::new(Dims::new(2, 3), v).unwrap();
        let out = schmidt(&psi).unwrap();
        assert_eq!(out.basis_b.cols(), 3);
        assert_coeffs(&psi, &[0.5, 0.5]);
    }

    #[test]
    fn density_matrix_rejects_each_invariant() {
        let dims = Dims::square(2);
        let low_trace = ComplexMatrix::identity(4).scale_real(0.9 / 4.0);
        assert!(matches!(
            DensityMatrix::new(dims, low_trace),
            Err(Error::Invariant { invariant: "trace", deviation }) if (deviation - 0.1).abs() < 1e-12
        ));
        let mut m = ComplexMatrix::identity(4).scale_real(0.25);
        m.data_mut()[1] = c(0.1);
        assert!(matches!(DensityMatrix::new(dims, m), Err(Error::Invariant { invariant: "hermitian", .. })));
        let neg = ComplexMatrix::diag_real(&[1.5, -0.5, 0.0, 0.0]);
        assert!(matches!(
            DensityMatrix::new(dims, neg),
            Err(Error::Invariant { invariant: "positive semidefinite", .. })
        ));
        assert!(matches!(
            DensityMatrix::new(Dims::square(3), ComplexMatrix::identity(4)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn pure_state_requires_unit_norm() {
        assert!(matches!(
            PureState::new(Dims::square(2), vec![ONE, ONE, ZERO, ZERO]),
            Err(Error::Invariant { invariant: "unit norm", .. })
        ));
        assert!(PureState::normalized(Dims::square(2), vec![ONE, ONE, ZERO, ZERO]).is_ok());
        assert!(PureState::normalized(Dims::square(2), vec![ZERO; 4]).is_err());
    }

    #[test]
    fn schmidt_vector_validation() {
        assert!(SchmidtVector::new(vec![0.5, 0.6]).is_err());
        assert!(SchmidtVector::new(vec![1.2, -0.2]).is_err());
        let v = SchmidtVector::new(vec![0.25, 0.75]).unwrap();
        assert_eq!(v.as_slice(), &[0.75, 0.25]);
        assert_eq!(v.largest(), 0.75);
    }

    #[test]
    fn reduced_state_of_bell_is_maximally_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::new(Dims::square(2), vec![c(s), ZERO, ZERO, c(s)]).unwrap();
        let rho = DensityMatrix::from_pure(&bell);
        let ra = rho.reduced(Subsystem::A).unwrap();
        assert!(ra.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-15);
    }
}
