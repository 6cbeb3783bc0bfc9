//! Independent numerical checks: the PPT test and an explicit upper bound on
//! D_sep(ρ) = min_σ ‖ρ − σ‖_F over separable σ.
//!
//! The upper bound minimizes ‖ρ − Σᵢ pᵢ |aᵢbᵢ⟩⟨aᵢbᵢ|‖_F² by alternating two
//! exact block updates. With the product vectors fixed, the weights solve a
//! convex QP on the simplex. With everything but one local vector fixed, the
//! objective is affine in |a⟩⟨a| plus a constant:
//!
//! ```text
//! ‖R₋ᵢ + pᵢ|ab⟩⟨ab|‖² = ‖R₋ᵢ‖² + 2pᵢ⟨ab|R₋ᵢ|ab⟩ + pᵢ²,   R₋ᵢ = σ₋ᵢ − ρ
//! ```
//!
//! so the best `a` is the lowest eigenvector of (I⊗⟨b|) R₋ᵢ (I⊗|b⟩), and
//! likewise for `b`. Members with zero weight are moved the same way, which
//! points them at the most negative product direction of the residual.
//!
//! Every σ produced is separable by construction, so the reported distance is
//! an upper bound on D_sep whether or not the iteration converged.

mod qp;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, Dims, Subsystem, C64, ZERO};
use crate::random;
use crate::states::{DensityMatrix, OperatorFile};

/// Partial-transpose eigenvalues at or above −PPT_TOL count as nonnegative.
pub const PPT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PptReport {
    pub is_ppt: bool,
    pub min_eigenvalue: f64,
}

pub fn ppt_check(rho: &DensityMatrix) -> Result<PptReport> {
    let pt = rho.partial_transpose(Subsystem::B);
    let min_eigenvalue = linalg::eigenvalues(&pt)?[0];
    Ok(PptReport { is_ppt: min_eigenvalue >= -PPT_TOL, min_eigenvalue })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    /// Number of product terms; `None` means (dA·dB)².
    pub ensemble_size: Option<usize>,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Stop once an iteration lowers ‖ρ − σ‖² by less than this fraction.
    pub convergence_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            ensemble_size: None,
            restarts: 20,
            max_iters: 2000,
            seed: 0,
            convergence_tol: 1e-7,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ensemble_size == Some(0) {
            return Err(Error::Domain("ensemble_size must be positive".into()));
        }
        if self.restarts == 0 {
            return Err(Error::Domain("restarts must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::Domain("max_iters must be positive".into()));
        }
        if !(self.convergence_tol.is_finite() && self.convergence_tol > 0.0) {
            return Err(Error::Domain(format!(
                "convergence_tol must be positive, got {}",
                self.convergence_tol
            )));
        }
        Ok(())
    }

    fn ensemble_size_for(&self, dims: Dims) -> usize {
        self.ensemble_size.unwrap_or(dims.total() * dims.total())
    }
}

fn complex_pairs<S: Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| [z.re, z.im]))
}

/// One term pᵢ |aᵢ⟩⟨aᵢ| ⊗ |bᵢ⟩⟨bᵢ| of the separable decomposition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleMember {
    pub weight: f64,
    #[serde(serialize_with = "complex_pairs")]
    pub a: Vec<C64>,
    #[serde(serialize_with = "complex_pairs")]
    pub b: Vec<C64>,
}

impl EnsembleMember {
    fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&linalg::kron_vec(&self.a, &self.b))
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    /// ‖ρ − sigma‖_F: an upper bound on D_sep(ρ), not an estimate of it.
    pub dsep_upper: f64,
    pub sigma: DensityMatrix,
    /// Members with positive weight; their weighted sum is `sigma`.
    pub ensemble: Vec<EnsembleMember>,
    pub iterations_used: usize,
    pub converged: bool,
}

impl OracleResult {
    /// Σᵢ pᵢ |aᵢbᵢ⟩⟨aᵢbᵢ| from the retained ensemble.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.sigma.dims().total();
        self.ensemble.iter().fold(ComplexMatrix::zeros(n, n), |acc, m| {
            &acc + &m.projector().scale_real(m.weight)
        })
    }
}

impl Serialize for OracleResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            dsep_upper: f64,
            sigma: OperatorFile,
            ensemble: &'a [EnsembleMember],
            iterations_used: usize,
            converged: bool,
        }
        View {
            dsep_upper: self.dsep_upper,
            sigma: OperatorFile::from_matrix(Some("state"), self.sigma.dims(), self.sigma.matrix()),
            ensemble: &self.ensemble,
            iterations_used: self.iterations_used,
            converged: self.converged,
        }
        .serialize(s)
    }
}

/// Objective values below this are treated as an exact hit (ρ separable).
const EXACT_HIT: f64 = 1e-24;
/// Members whose product states overlap by at least 1 − MERGE_GAP are merged.
const MERGE_GAP: f64 = 1e-1;
const MERGE_EVERY: usize = 25;
const MERGE_POLISH: usize = 10;

pub fn dsep_upper(rho: &DensityMatrix, cfg: &OracleConfig) -> Result<OracleResult> {
    cfg.validate()?;
    let size = cfg.ensemble_size_for(rho.dims());
    let runs: Vec<Result<Run>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(restart as u64);
            Run::start(rho, size, &mut rng).optimize(rho, cfg)
        })
        .collect();

    // Lowest objective wins; ties go to the earliest restart.
    let mut best: Option<Run> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.objective < b.objective) {
            best = Some(run);
        }
    }
    best.expect("at least one restart").into_result(rho)
}

/// State of one restart. The residual R = σ − ρ is kept in sync with the
/// members so single-vector updates cost O(D²).
struct Run {
    dims: Dims,
    weights: Vec<f64>,
    a: Vec<Vec<C64>>,
    b: Vec<Vec<C64>>,
    residual: Vec<C64>,
    objective: f64,
    iterations: usize,
    converged: bool,
}

impl Run {
    fn start<R: Rng + ?Sized>(rho: &DensityMatrix, size: usize, rng: &mut R) -> Self {
        let dims = rho.dims();
        let a = (0..size).map(|_| random::unit_vector(dims.a, rng)).collect();
        let b = (0..size).map(|_| random::unit_vector(dims.b, rng)).collect();
        let mut run = Run {
            dims,
            weights: vec![1.0 / size as f64; size],
            a,
            b,
            residual: Vec::new(),
            objective: f64::INFINITY,
            iterations: 0,
            converged: false,
        };
        run.rebuild_residual(rho);
        run
    }

    fn product(&self, i: usize) -> Vec<C64> {
        linalg::kron_vec(&self.a[i], &self.b[i])
    }

    fn rebuild_residual(&mut self, rho: &DensityMatrix) {
        let n = self.dims.total();
        self.residual = rho.matrix().as_slice().iter().map(|z| -z).collect();
        for i in 0..self.weights.len() {
            if self.weights[i] > 0.0 {
                let v = self.product(i);
                add_rank_one(&mut self.residual, n, &v, self.weights[i]);
            }
        }
        self.objective = self.residual.iter().map(|z| z.norm_sqr()).sum();
    }

    fn optimize(mut self, rho: &DensityMatrix, cfg: &OracleConfig) -> Result<Self> {
        let purity = rho.purity();
        for iter in 1..=cfg.max_iters {
            let before = self.objective;
            self.weight_step(rho, purity);
            self.vector_sweep()?;
            self.objective = self.residual.iter().map(|z| z.norm_sqr()).sum();
            self.iterations = iter;
            if self.objective < EXACT_HIT {
                self.converged = true;
                break;
            }
            let stalled = before - self.objective <= cfg.convergence_tol * before;
            if (stalled || iter % MERGE_EVERY == 0) && self.try_merge(rho, purity)? {
                continue;
            }
            if stalled {
                self.converged = true;
                break;
            }
        }
        // Drift from rank-one updates is removed before reporting.
        self.rebuild_residual(rho);
        Ok(self)
    }

    /// Collapses clusters of nearly parallel members onto their heaviest
    /// member, then re-optimizes. Near-duplicates otherwise absorb each
    /// other's errors and the alternating steps crawl. Kept only if the
    /// objective drops.
    fn try_merge(&mut self, rho: &DensityMatrix, purity: f64) -> Result<bool> {
        let m = self.weights.len();
        let mut merged = self.weights.clone();
        let mut any = false;
        let mut order: Vec<usize> = (0..m).filter(|&i| merged[i] > 0.0).collect();
        order.sort_by(|&x, &y| merged[y].total_cmp(&merged[x]));
        for (pos, &i) in order.iter().enumerate() {
            if merged[i] == 0.0 {
                continue;
            }
            for &j in &order[pos + 1..] {
                if merged[j] == 0.0 {
                    continue;
                }
                let overlap = linalg::inner(&self.a[i], &self.a[j]).norm_sqr()
                    * linalg::inner(&self.b[i], &self.b[j]).norm_sqr();
                if overlap >= 1.0 - MERGE_GAP {
                    merged[i] += merged[j];
                    merged[j] = 0.0;
                    any = true;
                }
            }
        }
        if !any {
            return Ok(false);
        }

        let snapshot = (self.weights.clone(), self.a.clone(), self.b.clone(), self.objective);
        self.weights = merged;
        self.rebuild_residual(rho);
        for _ in 0..MERGE_POLISH {
            self.vector_sweep()?;
            self.weight_step(rho, purity);
        }
        self.vector_sweep()?;
        self.objective = self.residual.iter().map(|z| z.norm_sqr()).sum();
        if self.objective < snapshot.3 {
            return Ok(true);
        }
        (self.weights, self.a, self.b) = (snapshot.0, snapshot.1, snapshot.2);
        self.rebuild_residual(rho);
        Ok(false)
    }

    fn weight_step(&mut self, rho: &DensityMatrix, purity: f64) {
        let m = self.weights.len();
        let mut h = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let g = linalg::inner(&self.a[i], &self.a[j]).norm_sqr()
                    * linalg::inner(&self.b[i], &self.b[j]).norm_sqr();
                h[(i, j)] = 2.0 * g;
                h[(j, i)] = 2.0 * g;
            }
        }
        let n = self.dims.total();
        let rho_data = rho.matrix().as_slice();
        let g: Vec<f64> = (0..m)
            .map(|i| 2.0 * quadratic_form(rho_data, n, &self.product(i)))
            .collect();

        let current = purity + qp::objective(&h, &g, &self.weights);
        let (p, _) = qp::simplex_qp(&h, &g, &self.weights);
        let proposed = purity + qp::objective(&h, &g, &p);
        if proposed <= current && p.iter().all(|x| x.is_finite()) {
            self.weights = p;
            self.rebuild_residual(rho);
        }
    }

    fn vector_sweep(&mut self) -> Result<()> {
        let n = self.dims.total();
        let Dims { a: da, b: db } = self.dims;
        for i in 0..self.weights.len() {
            let w = self.weights[i];
            let old = self.product(i);
            add_rank_one(&mut self.residual, n, &old, -w);

            let ma = ComplexMatrix::from_fn(da, da, |k, l| {
                let mut acc = ZERO;
                for j in 0..db {
                    for q in 0..db {
                        acc += self.b[i][j].conj() * self.residual[(k * db + j) * n + l * db + q] * self.b[i][q];
                    }
                }
                acc
            });
            self.a[i] = lowest_eigenvector(&ma)?;

            let mb = ComplexMatrix::from_fn(db, db, |j, q| {
                let mut acc = ZERO;
                for k in 0..da {
                    for l in 0..da {
                        acc += self.a[i][k].conj() * self.residual[(k * db + j) * n + l * db + q] * self.a[i][l];
                    }
                }
                acc
            });
            self.b[i] = lowest_eigenvector(&mb)?;

            let new = self.product(i);
            add_rank_one(&mut self.residual, n, &new, w);
        }
        Ok(())
    }

    fn into_result(self, rho: &DensityMatrix) -> Result<OracleResult> {
        let ensemble: Vec<EnsembleMember> = (0..self.weights.len())
            .filter(|&i| self.weights[i] > 0.0)
            .map(|i| EnsembleMember {
                weight: self.weights[i],
                a: self.a[i].clone(),
                b: self.b[i].clone(),
            })
            .collect();
        let n = self.dims.total();
        let sum = ensemble.iter().fold(ComplexMatrix::zeros(n, n), |acc, m| {
            &acc + &m.projector().scale_real(m.weight)
        });
        let sigma = DensityMatrix::new(self.dims, sum.hermitian_part())?;
        let dsep_upper = rho.distance(&sigma)?;
        Ok(OracleResult {
            dsep_upper,
            sigma,
            ensemble,
            iterations_used: self.iterations,
            converged: self.converged,
        })
    }
}

/// R += s·|v⟩⟨v| on a row-major n×n buffer.
fn add_rank_one(r: &mut [C64], n: usize, v: &[C64], s: f64) {
    for i in 0..n {
        let vi = v[i] * s;
        for j in 0..n {
            r[i * n + j] += vi * v[j].conj();
        }
    }
}

/// Re ⟨v|M|v⟩ on a row-major n×n buffer.
fn quadratic_form(m: &[C64], n: usize, v: &[C64]) -> f64 {
    let mut acc = ZERO;
    for i in 0..n {
        let row: C64 = (0..n).map(|j| m[i * n + j] * v[j]).sum();
        acc += v[i].conj() * row;
    }
    acc.re
}

fn lowest_eigenvector(m: &ComplexMatrix) -> Result<Vec<C64>> {
    let eig = linalg::hermitian_eig(&m.hermitian_part())?;
    let mut v = eig.vectors.column(0);
    linalg::normalize(&mut v);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use crate::states::{fixture, PureState};

    fn quick(restarts: usize, seed: u64) -> OracleConfig {
        OracleConfig { restarts, seed, ..OracleConfig::default() }
    }

    #[test]
    fn ppt_examples() {
        let zero = DensityMatrix::from_pure(&PureState::product(&[ONE, ZERO], &[ONE, ZERO]).unwrap());
        let r = ppt_check(&zero).unwrap();
        assert!(r.is_ppt);
        assert!(r.min_eigenvalue.abs() < 1e-12);

        let bell = fixture("bell(2)").unwrap().into_state().unwrap();
        let r = ppt_check(&bell).unwrap();
        assert!(!r.is_ppt);
        assert!((r.min_eigenvalue + 0.5).abs() < 1e-12);

        let ppt = fixture("paper_ppt_state").unwrap().into_state().unwrap();
        let r = ppt_check(&ppt).unwrap();
        assert!(r.is_ppt && r.min_eigenvalue >= -1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(OracleConfig::default().validate().is_ok());
        assert!(OracleConfig { restarts: 0, ..OracleConfig::default() }.validate().is_err());
        assert!(OracleConfig { ensemble_size: Some(0), ..OracleConfig::default() }.validate().is_err());
        assert!(OracleConfig { convergence_tol: 0.0, ..OracleConfig::default() }.validate().is_err());
    }

    #[test]
    fn product_state_is_reached() {
        let rho = DensityMatrix::from_pure(&PureState::product(&[ONE, ZERO], &[ONE, ZERO]).unwrap());
        let res = dsep_upper(&rho, &quick(2, 1)).unwrap();
        assert!(res.dsep_upper <= 1e-6, "{}", res.dsep_upper);
    }

    #[test]
    fn bell_states_meet_the_isotropic_distance() {
        // The separable isotropic state at fidelity 1/d sits at √((d−1)/(d+1)).
        for d in [2usize, 3] {
            let rho = fixture(&format!("bell({d})")).unwrap().into_state().unwrap();
            let res = dsep_upper(&rho, &quick(4, 7)).unwrap();
            let exact = ((d as f64 - 1.0) / (d as f64 + 1.0)).sqrt();
            assert!((res.dsep_upper - exact).abs() < 1e-3, "d={d}: {}", res.dsep_upper);
            assert!(res.dsep_upper >= exact - 1e-9);
        }
    }

    #[test]
    fn ensemble_reconstructs_sigma() {
        let rho = fixture("paper_ppt_state").unwrap().into_state().unwrap();
        let res = dsep_upper(&rho, &quick(2, 3)).unwrap();
        assert!(res.reconstruct().max_abs_diff(&res.sigma.matrix().hermitian_part()) < 1e-12);
        for m in &res.ensemble {
            assert!(m.weight > 0.0);
            assert!((linalg::vector_norm(&m.a) - 1.0).abs() < 1e-12);
            assert!((linalg::vector_norm(&m.b) - 1.0).abs() < 1e-12);
        }
        assert!((rho.distance(&res.sigma).unwrap() - res.dsep_upper).abs() < 1e-12);
        assert!(res.dsep_upper >= 2f64.sqrt() / 30.0 - 1e-9);
    }

    #[test]
    fn deterministic_and_monotone_in_restarts() {
        let rho = fixture("bell(2)").unwrap().into_state().unwrap();
        let a = dsep_upper(&rho, &quick(3, 11)).unwrap();
        let b = dsep_upper(&rho, &quick(3, 11)).unwrap();
        assert_eq!(a.dsep_upper.to_bits(), b.dsep_upper.to_bits());
        assert_eq!(a.ensemble, b.ensemble);

        let mut last = f64::INFINITY;
        for k in 1..=4 {
            let r = dsep_upper(&rho, &OracleConfig { max_iters: 5, ..quick(k, 11) }).unwrap();
            assert!(r.dsep_upper <= last);
            last = r.dsep_upper;
        }
    }

    #[test]
    fn json_includes_the_ensemble() {
        let rho = fixture("bell(2)").unwrap().into_state().unwrap();
        let res = dsep_upper(&rho, &quick(1, 0)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&res).unwrap();
        assert_eq!(v["ensemble"].as_array().unwrap().len(), res.ensemble.len());
        assert_eq!(v["sigma"]["dims"], serde_json::json!([2, 2]));
        assert!(v["ensemble"][0]["a"][0].as_array().unwrap().len() == 2);
    }
}
