//! Spin-squeezing witness for two qudits.
//!
//! Separable states satisfy Σ_k (ΔG_k)² ≥ 4(d−1) for the collective
//! generators G_k = g_k⊗I + I⊗g_k. Linearizing at the means m_k = ⟨G_k⟩_ρ of
//! the state under test gives the operator
//!
//! ```text
//! W₂ = Σ_k (G_k − m_k I)² − 4(d−1) I
//! ```
//!
//! whose value on ρ is Σ_k (ΔG_k)² − 4(d−1). On any σ,
//! Tr(W₂σ) ≥ Σ_k Var_σ(G_k) − 4(d−1), so W₂ is nonnegative on separable states.

use super::{generic_bound, BoundCertificate, Witness};
use crate::error::{Error, Result};
use crate::generators::{collective, GeneratorSet};
use crate::linalg::{self, ComplexMatrix, Dims};
use crate::states::DensityMatrix;

/// 144d² − 224d + 112, an upper bound on b² for every W₂ on d⊗d.
pub fn spin_constant(d: usize) -> f64 {
    let d = d as f64;
    144.0 * d * d - 224.0 * d + 112.0
}

fn check_dims(rho: &DensityMatrix, gens: &GeneratorSet) -> Result<usize> {
    let dims = rho.dims();
    match dims.local() {
        Some(d) if d == gens.d() => Ok(d),
        Some(d) => Err(Error::Dimension(format!(
            "state is {d}⊗{d} but generators act on C^{}",
            gens.d()
        ))),
        None => Err(Error::Dimension(format!(
            "spin-squeezing witness needs equal local dimensions, got {dims}"
        ))),
    }
}

/// m_k = Tr(G_k ρ)
pub fn collective_means(rho: &DensityMatrix, gens: &GeneratorSet) -> Result<Vec<f64>> {
    check_dims(rho, gens)?;
    collective(gens)
        .operators()
        .iter()
        .map(|g| rho.expectation(g))
        .collect()
}

pub fn spin_witness(rho: &DensityMatrix, gens: &GeneratorSet) -> Result<Witness> {
    let d = check_dims(rho, gens)?;
    let n = d * d;
    let id = ComplexMatrix::identity(n);
    let mut w = id.scale_real(-4.0 * (d as f64 - 1.0));
    for g in collective(gens).operators() {
        let mean = rho.expectation(g)?;
        let shifted = g - &id.scale_real(mean);
        w = &w + &(&shifted * &shifted);
    }
    Witness::new(Dims::square(d), w.hermitian_part())
}

pub fn spin_bound(rho: &DensityMatrix, gens: &GeneratorSet) -> Result<BoundCertificate> {
    let w = spin_witness(rho, gens)?;
    generic_bound(&w, rho, Some(spin_constant(gens.d()).sqrt()))
}

/// Σ_k (ΔG_k)² computed directly from ⟨G_k²⟩ − ⟨G_k⟩².
pub fn total_variance(rho: &DensityMatrix, gens: &GeneratorSet) -> Result<f64> {
    check_dims(rho, gens)?;
    let mut total = 0.0;
    for g in collective(gens).operators() {
        let mean = rho.expectation(g)?;
        let second = linalg::trace_of_product(&(g * g), rho.matrix())?.re;
        total += second - mean * mean;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gellmann;
    use crate::states::fixture;
    use crate::witnesses::normalize_witness;

    #[test]
    fn constant_values() {
        assert_eq!(spin_constant(2), 240.0);
        assert_eq!(spin_constant(3), 736.0);
    }

    #[test]
    fn singlet_is_detected() {
        let g = gellmann(2).unwrap();
        let singlet = fixture("singlet").unwrap().into_state().unwrap();
        assert!(collective_means(&singlet, &g).unwrap().iter().all(|m| m.abs() < 1e-15));
        let cert = spin_bound(&singlet, &g).unwrap();
        assert!((cert.witness_value + 4.0).abs() < 1e-12);
        assert!((cert.dsep_lower - 4.0 / 240f64.sqrt()).abs() < 1e-12);
        assert!(cert.certified);
    }

    #[test]
    fn maximally_mixed_is_not() {
        let g = gellmann(2).unwrap();
        let rho = DensityMatrix::maximally_mixed(Dims::square(2));
        let cert = spin_bound(&rho, &g).unwrap();
        assert!((cert.witness_value - 2.0).abs() < 1e-12);
        assert_eq!(cert.dsep_lower, 0.0);
    }

    #[test]
    fn product_state_saturates() {
        // Pure product states have Σ Var = 4(d−1) exactly.
        let g = gellmann(2).unwrap();
        let mut m = ComplexMatrix::zeros(4, 4);
        m.data_mut()[0] = linalg::ONE;
        let rho = DensityMatrix::new(Dims::square(2), m).unwrap();
        let value = spin_witness(&rho, &g).unwrap().value(&rho).unwrap();
        assert!(value.abs() < 1e-12);
        assert!((total_variance(&rho, &g).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn witness_value_is_variance_excess() {
        let g = gellmann(3).unwrap();
        let rho = fixture("paper_ppt_state").unwrap().into_state().unwrap();
        let w = spin_witness(&rho, &g).unwrap();
        let direct = total_variance(&rho, &g).unwrap() - 8.0;
        assert!((w.value(&rho).unwrap() - direct).abs() < 1e-12);
        assert!(normalize_witness(&w).unwrap().b.powi(2) <= spin_constant(3));
    }

    #[test]
    fn rejects_mismatched_dimensions() {
        let g = gellmann(3).unwrap();
        let singlet = fixture("singlet").unwrap().into_state().unwrap();
        assert!(matches!(spin_witness(&singlet, &g), Err(Error::Dimension(_))));
        let rect = DensityMatrix::maximally_mixed(Dims::new(2, 3));
        assert!(spin_bound(&rect, &gellmann(2).unwrap()).is_err());
    }
}
