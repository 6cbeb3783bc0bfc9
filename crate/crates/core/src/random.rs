//! Seeded random states and unitaries for the oracle and the test suites.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, ComplexMatrix, Dims, C64};
use crate::states::{DensityMatrix, PureState};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed unit vector in Cⁿ.
pub fn unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let mut v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
        if linalg::normalize(&mut v) > 1e-8 {
            return v;
        }
    }
}

/// n×n matrix with i.i.d. complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for q in &cols {
                let overlap = linalg::inner(q, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= overlap * y;
                }
            }
        }
        if linalg::normalize(&mut v) > 1e-8 {
            cols.push(v);
        }
    }
    ComplexMatrix::from_columns(&cols).expect("square")
}

/// Random Hermitian matrix (GUE-like, unnormalized).
pub fn hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ginibre(n, n, rng).hermitian_part()
}

pub fn pure_state<R: Rng + ?Sized>(dims: Dims, rng: &mut R) -> PureState {
    PureState::new(dims, unit_vector(dims.total(), rng)).expect("normalized vector")
}

pub fn product_pure_state<R: Rng + ?Sized>(dims: Dims, rng: &mut R) -> PureState {
    let a = unit_vector(dims.a, rng);
    let b = unit_vector(dims.b, rng);
    PureState::new(dims, linalg::kron_vec(&a, &b)).expect("normalized vector")
}

/// Full-rank mixed state G·G†/Tr(G·G†) with G Ginibre (Hilbert–Schmidt measure).
pub fn density_matrix<R: Rng + ?Sized>(dims: Dims, rng: &mut R) -> DensityMatrix {
    let n = dims.total();
    mixed_with_rank(dims, n, rng)
}

/// Random state of the given rank (induced measure).
pub fn mixed_with_rank<R: Rng + ?Sized>(dims: Dims, rank: usize, rng: &mut R) -> DensityMatrix {
    let n = dims.total();
    let g = ginibre(n, rank.max(1), rng);
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    DensityMatrix::new(dims, gg.scale_real(1.0 / tr).hermitian_part()).expect("valid state")
}

/// Convex mixture of `terms` random product pure states.
pub fn separable_mixture<R: Rng + ?Sized>(dims: Dims, terms: usize, rng: &mut R) -> DensityMatrix {
    let weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let n = dims.total();
    let mut acc = ComplexMatrix::zeros(n, n);
    for w in weights {
        let p = product_pure_state(dims, rng).projector();
        acc = &acc + &p.scale_real(w / total);
    }
    DensityMatrix::new(dims, acc.hermitian_part()).expect("valid state")
}
