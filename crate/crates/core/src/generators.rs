//! Generalized Gell-Mann matrices, two-qudit collective operators and the
//! trace identities they satisfy.
//!
//! Ordering of the d²−1 generators is fixed: the d(d−1)/2 symmetric ones for
//! pairs (j, k), j < k, in lexicographic order; then the antisymmetric ones
//! for the same pairs; then the d−1 diagonal ones of growing support.
//! Every generator is traceless with Tr(g_k g_l) = 2δ_kl.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, kron, ComplexMatrix, C64, I, ONE, ZERO};
use crate::states::DensityMatrix;

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    d: usize,
    gens: Vec<ComplexMatrix>,
}

impl GeneratorSet {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// ⟨g_k⟩ = Tr(g_k ρ) for every generator.
    pub fn expectations(&self, rho: &ComplexMatrix) -> Result<Vec<f64>> {
        self.gens.iter().map(|g| Ok(linalg::trace_of_product(g, rho)?.re)).collect()
    }
}

pub fn gellmann(d: usize) -> Result<GeneratorSet> {
    if d < 2 {
        return Err(Error::Domain(format!("SU(d) generators need d ≥ 2, got {d}")));
    }
    let pairs: Vec<(usize, usize)> =
        (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
    let mut gens = Vec::with_capacity(d * d - 1);

    for &(j, k) in &pairs {
        gens.push(ComplexMatrix::from_fn(d, d, |r, c| {
            if (r, c) == (j, k) || (r, c) == (k, j) {
                ONE
            } else {
                ZERO
            }
        }));
    }
    for &(j, k) in &pairs {
        gens.push(ComplexMatrix::from_fn(d, d, |r, c| {
            if (r, c) == (j, k) {
                -I
            } else if (r, c) == (k, j) {
                I
            } else {
                ZERO
            }
        }));
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let diag: Vec<f64> = (0..d)
            .map(|i| match i.cmp(&l) {
                std::cmp::Ordering::Less => norm,
                std::cmp::Ordering::Equal => -(l as f64) * norm,
                std::cmp::Ordering::Greater => 0.0,
            })
            .collect();
        gens.push(ComplexMatrix::diag_real(&diag));
    }
    Ok(GeneratorSet { d, gens })
}

/// G_k = g_k ⊗ I + I ⊗ g_k on two qudits.
#[derive(Clone, Debug)]
pub struct CollectiveSet {
    d: usize,
    ops: Vec<ComplexMatrix>,
}

impl CollectiveSet {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.ops
    }
}

pub fn collective(gens: &GeneratorSet) -> CollectiveSet {
    let id = ComplexMatrix::identity(gens.d);
    let ops = gens
        .gens
        .iter()
        .map(|g| &kron(g, &id) + &kron(&id, g))
        .collect();
    CollectiveSet { d: gens.d, ops }
}

/// The flip operator F|i⟩|j⟩ = |j⟩|i⟩ on Cᵈ ⊗ Cᵈ.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let (i, j) = (r / d, r % d);
        if c == j * d + i {
            ONE
        } else {
            ZERO
        }
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

/// Residuals of the four single-qudit generator identities.
#[derive(Clone, Debug, Serialize)]
pub struct Lemma1Report {
    /// max_{k,l} |Tr(g_k g_l) − 2δ_kl|
    pub orthonormality: f64,
    /// ‖Σ g_k² − 2(d²−1)/d · I‖_F
    pub casimir: f64,
    /// Σ⟨g_k⟩² against 2(Tr ρ² − 1/d).
    pub bloch_length: IdentityCheck,
    /// ‖Σ g_k ⊗ g_k − 2(F − I/d)‖_F
    pub swap_expansion: f64,
}

impl Lemma1Report {
    pub fn max_residual(&self) -> f64 {
        self.orthonormality
            .max(self.casimir)
            .max(self.bloch_length.residual)
            .max(self.swap_expansion)
    }
}

pub fn verify_lemma1(gens: &GeneratorSet, rho: &DensityMatrix) -> Result<Lemma1Report> {
    let d = gens.d;
    let m = rho.matrix();
    if m.rows() != d {
        return Err(Error::Dimension(format!(
            "generators act on C^{d} but the state is {}×{}",
            m.rows(),
            m.cols()
        )));
    }
    let df = d as f64;

    let mut orthonormality = 0.0_f64;
    for (k, gk) in gens.gens.iter().enumerate() {
        for (l, gl) in gens.gens.iter().enumerate() {
            let target = if k == l { 2.0 } else { 0.0 };
            let v = linalg::trace_of_product(gk, gl)?;
            orthonormality = orthonormality.max((v - C64::new(target, 0.0)).norm());
        }
    }

    let casimir_sum = gens
        .gens
        .iter()
        .fold(ComplexMatrix::zeros(d, d), |acc, g| &acc + &(g * g));
    let casimir_target = ComplexMatrix::identity(d).scale_real(2.0 * (df * df - 1.0) / df);
    let casimir = linalg::frobenius_norm(&(&casimir_sum - &casimir_target));

    let lhs: f64 = gens.expectations(m)?.iter().map(|x| x * x).sum();
    let rhs = 2.0 * (rho.purity() - 1.0 / df);
    let bloch_length = IdentityCheck { lhs, rhs, residual: (lhs - rhs).abs() };

    let kron_sum = gens
        .gens
        .iter()
        .fold(ComplexMatrix::zeros(d * d, d * d), |acc, g| &acc + &kron(g, g));
    let swap_target = (&swap_operator(d) - &ComplexMatrix::identity(d * d).scale_real(1.0 / df))
        .scale_real(2.0);
    let swap_expansion = linalg::frobenius_norm(&(&kron_sum - &swap_target));

    Ok(Lemma1Report { orthonormality, casimir, bloch_length, swap_expansion })
}
