//! Witnesses built from mutually unbiased bases:
//!
//! ```text
//! W_L = (d−1+L)/d · I⊗I − Σ_α Σ_{k,l} O⁽ᵅ⁾_kl · conj(P⁽ᵅ⁾_l) ⊗ P⁽ᵅ⁾_k
//! ```
//!
//! with P⁽ᵅ⁾_k the projectors of basis α and O⁽ᵅ⁾ real orthogonal matrices
//! fixing n = (1,…,1)/√d. For any such choice Tr W_L = d(d−1) and
//! Tr W_L² = (d−1)(d+L−1), so the traceless radius is b = √(L(d−1)).

use std::f64::consts::PI;

use super::{generic_bound, BoundCertificate, Witness};
use crate::error::{Error, Result};
use crate::linalg::{self, kron, ComplexMatrix, Dims, C64};
use crate::states::DensityMatrix;

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

/// L orthonormal bases of Cᵈ, pairwise unbiased: |⟨ψ⁽ᵅ⁾_k|ψ⁽ᵝ⁾_l⟩| = 1/√d.
#[derive(Clone, Debug)]
pub struct MubFamily {
    d: usize,
    /// Column k of each matrix is |ψ_k⟩.
    bases: Vec<ComplexMatrix>,
}

impl MubFamily {
    pub fn new(d: usize, bases: Vec<ComplexMatrix>) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::Domain("a MUB family needs at least one basis".into()));
        }
        for b in &bases {
            if b.rows() != d || b.cols() != d {
                return Err(Error::Dimension(format!("basis is {}×{}, expected {d}×{d}", b.rows(), b.cols())));
            }
            let dev = linalg::unitarity_deviation(b);
            if dev > 1e-10 {
                return Err(Error::Invariant { invariant: "orthonormal basis", deviation: dev });
            }
        }
        let target = 1.0 / (d as f64).sqrt();
        for (x, bx) in bases.iter().enumerate() {
            for by in &bases[x + 1..] {
                let overlaps = &bx.adjoint() * by;
                let dev = overlaps.as_slice().iter().map(|z| (z.norm() - target).abs()).fold(0.0, f64::max);
                if dev > 1e-9 {
                    return Err(Error::Invariant { invariant: "mutually unbiased", deviation: dev });
                }
            }
        }
        Ok(MubFamily { d, bases })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn bases(&self) -> &[ComplexMatrix] {
        &self.bases
    }

    pub fn vector(&self, alpha: usize, k: usize) -> Vec<C64> {
        self.bases[alpha].column(k)
    }
}

/// The computational basis followed by the d quadratic-phase Fourier bases
/// (1/√d) Σ_j ω^{a j² + k j} |j⟩, a = 0…d−1. For d = 2 the quadratic phase is
/// i^{a j²}, which yields the σx and σy eigenbases.
pub fn mub_family(d: usize, count: usize) -> Result<MubFamily> {
    if !is_prime(d) {
        return Err(Error::Domain(format!("d must be prime for the MUB construction, got {d}")));
    }
    if !(2..=d + 1).contains(&count) {
        return Err(Error::Domain(format!("number of bases must lie in [2, {}], got {count}", d + 1)));
    }
    let norm = 1.0 / (d as f64).sqrt();
    let mut bases = vec![ComplexMatrix::identity(d)];
    for a in 0..count - 1 {
        bases.push(ComplexMatrix::from_fn(d, d, |j, k| {
            let phase = if d == 2 {
                // i^{a j²} (−1)^{k j}
                PI / 2.0 * (a * j * j) as f64 + PI * (k * j) as f64
            } else {
                2.0 * PI * ((a * j * j + k * j) % d) as f64 / d as f64
            };
            C64::from_polar(norm, phase)
        }));
    }
    MubFamily::new(d, bases)
}

/// Real orthogonal d×d matrices O with O·n = n, one per basis.
#[derive(Clone, Debug)]
pub struct RotationSet {
    d: usize,
    mats: Vec<Vec<f64>>,
}

impl RotationSet {
    /// `mats` are row-major d×d.
    pub fn new(d: usize, mats: Vec<Vec<f64>>) -> Result<Self> {
        let axis = 1.0 / (d as f64).sqrt();
        for m in &mats {
            if m.len() != d * d {
                return Err(Error::Dimension(format!("rotation has {} entries, expected {}", m.len(), d * d)));
            }
            let mut orth = 0.0_f64;
            for i in 0..d {
                for j in 0..d {
                    let dot: f64 = (0..d).map(|k| m[k * d + i] * m[k * d + j]).sum();
                    orth = orth.max((dot - if i == j { 1.0 } else { 0.0 }).abs());
                }
            }
            if orth > 1e-10 {
                return Err(Error::Invariant { invariant: "orthogonal rotation", deviation: orth });
            }
            let fix = (0..d)
                .map(|i| ((0..d).map(|j| m[i * d + j] * axis).sum::<f64>() - axis).abs())
                .fold(0.0, f64::max);
            if fix > 1e-10 {
                return Err(Error::Invariant { invariant: "rotation fixes (1,…,1)/√d", deviation: fix });
            }
        }
        Ok(RotationSet { d, mats })
    }

    pub fn identity(d: usize, count: usize) -> Self {
        let id: Vec<f64> = (0..d * d).map(|k| if k % (d + 1) == 0 { 1.0 } else { 0.0 }).collect();
        RotationSet { d, mats: vec![id; count] }
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn get(&self, alpha: usize, k: usize, l: usize) -> f64 {
        self.mats[alpha][k * self.d + l]
    }
}

pub fn mub_witness(mubs: &MubFamily, rotations: &RotationSet) -> Result<Witness> {
    let d = mubs.d;
    if rotations.d != d || rotations.len() != mubs.len() {
        return Err(Error::Dimension(format!(
            "{} rotations of size {} for {} bases of size {d}",
            rotations.len(),
            rotations.d,
            mubs.len()
        )));
    }
    let big = d * d;
    let count = mubs.len();
    let shift = (d - 1 + count) as f64 / d as f64;
    let mut w = ComplexMatrix::identity(big).scale_real(shift);
    for (alpha, basis) in mubs.bases.iter().enumerate() {
        let projectors: Vec<ComplexMatrix> =
            (0..d).map(|k| ComplexMatrix::projector(&basis.column(k))).collect();
        for k in 0..d {
            for l in 0..d {
                let o = rotations.get(alpha, k, l);
                if o == 0.0 {
                    continue;
                }
                let term = kron(&projectors[l].conj(), &projectors[k]);
                for (x, t) in w.data_mut().iter_mut().zip(term.as_slice()) {
                    *x -= t * o;
                }
            }
        }
    }
    Witness::new(Dims::square(d), w.hermitian_part())
}

/// Identity-rotation witness from the first `count` bases of [`mub_family`].
pub fn standard_mub_witness(d: usize, count: usize) -> Result<Witness> {
    mub_witness(&mub_family(d, count)?, &RotationSet::identity(d, count))
}

/// The bound with the closed-form radius √(L(d−1)).
pub fn mub_bound(w: &Witness, count: usize, rho: &DensityMatrix) -> Result<BoundCertificate> {
    let d = w.dims().local().ok_or_else(|| {
        Error::Dimension(format!("MUB witnesses act on d⊗d, got {}", w.dims()))
    })?;
    if count == 0 {
        return Err(Error::Domain("number of bases must be positive".into()));
    }
    let b = ((count * (d - 1)) as f64).sqrt();
    generic_bound(w, rho, Some(b))
}
