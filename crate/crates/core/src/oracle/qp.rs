//! Convex quadratic minimization over the probability simplex:
//!
//! ```text
//! min ½ pᵀHp − gᵀp   s.t.  p ≥ 0, Σ p = 1
//! ```
//!
//! by a primal active-set method warm-started from a feasible point.

use nalgebra::{DMatrix, DVector};

/// Diagonal shift on the free block. Gram matrices of nearly coincident
/// product projectors are singular.
const RIDGE: f64 = 1e-14;
const MULTIPLIER_TOL: f64 = 1e-12;

pub(crate) fn objective(h: &DMatrix<f64>, g: &[f64], p: &[f64]) -> f64 {
    let n = p.len();
    let mut quad = 0.0;
    for i in 0..n {
        if p[i] == 0.0 {
            continue;
        }
        let row: f64 = (0..n).map(|j| h[(i, j)] * p[j]).sum();
        quad += p[i] * row;
    }
    0.5 * quad - g.iter().zip(p).map(|(a, b)| a * b).sum::<f64>()
}

/// Minimizes over the face {p_i = 0 for i ∉ free, Σ p = 1}, returning the
/// face minimizer and ν with ∇f = −ν·1 on the free set. Returns `None`
/// if the KKT system is singular.
fn solve_face(h: &DMatrix<f64>, g: &[f64], free: &[usize]) -> Option<(Vec<f64>, f64)> {
    let k = free.len();
    let mut kkt = DMatrix::<f64>::zeros(k + 1, k + 1);
    let mut rhs = DVector::<f64>::zeros(k + 1);
    for (r, &i) in free.iter().enumerate() {
        for (c, &j) in free.iter().enumerate() {
            kkt[(r, c)] = h[(i, j)];
        }
        kkt[(r, r)] += RIDGE;
        kkt[(r, k)] = 1.0;
        kkt[(k, r)] = 1.0;
        rhs[r] = g[i];
    }
    rhs[k] = 1.0;
    let sol = kkt.lu().solve(&rhs)?;
    if sol.iter().any(|x| !x.is_finite()) {
        return None;
    }
    Some((sol.rows(0, k).iter().copied().collect(), sol[k]))
}

/// Returns the minimizer and whether the KKT conditions were met within the
/// iteration budget. `p0` must be feasible.
pub(crate) fn simplex_qp(h: &DMatrix<f64>, g: &[f64], p0: &[f64]) -> (Vec<f64>, bool) {
    let n = g.len();
    let mut p = p0.to_vec();
    let mut active: Vec<bool> = p.iter().map(|&x| x <= 0.0).collect();
    if active.iter().all(|&a| a) {
        p.iter_mut().for_each(|x| *x = 1.0 / n as f64);
        active.iter_mut().for_each(|a| *a = false);
    }
    for x in p.iter_mut().filter(|x| **x < 0.0) {
        *x = 0.0;
    }

    for _ in 0..(10 * n + 50) {
        let free: Vec<usize> = (0..n).filter(|&i| !active[i]).collect();
        let Some((target, lambda)) = solve_face(h, g, &free) else {
            return (p, false);
        };

        // Longest step from p toward the face minimizer that stays feasible.
        let mut alpha = 1.0;
        let mut blocking = None;
        for (r, &i) in free.iter().enumerate() {
            if target[r] < p[i] {
                let step = p[i] / (p[i] - target[r]);
                if step < alpha {
                    alpha = step;
                    blocking = Some(i);
                }
            }
        }
        for (r, &i) in free.iter().enumerate() {
            p[i] += alpha * (target[r] - p[i]);
        }

        if let Some(i) = blocking {
            p[i] = 0.0;
            active[i] = true;
            continue;
        }

        // At the face minimizer: release the most negative multiplier, if any.
        let grad = h * DVector::from_column_slice(&p);
        let mut worst = (-MULTIPLIER_TOL, None);
        for i in (0..n).filter(|&i| active[i]) {
            let mu = grad[i] - g[i] + lambda;
            if mu < worst.0 {
                worst = (mu, Some(i));
            }
        }
        match worst.1 {
            Some(i) => active[i] = false,
            None => {
                let total: f64 = p.iter().sum();
                p.iter_mut().for_each(|x| *x /= total);
                return (p, true);
            }
        }
    }
    (p, false)
}
