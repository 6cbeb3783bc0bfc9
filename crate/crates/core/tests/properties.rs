use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sepbound::linalg::{self, kron, ComplexMatrix, Dims, Subsystem, C64};
use sepbound::measures::{self, bounds_from_dsep};
use sepbound::oracle::ppt_check;
use sepbound::random;
use sepbound::states::{schmidt, DensityMatrix, PureState};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dims() -> impl Strategy<Value = Dims> {
    (1usize..=4, 1usize..=4).prop_map(|(a, b)| Dims::new(a, b))
}

/// Reduced operator on A, Σ_j ρ[(i,j),(k,j)], with plain nested loops.
fn reference_reduce_to_a(rho: &ComplexMatrix, dims: Dims) -> ComplexMatrix {
    let mut buf = vec![C64::new(0.0, 0.0); dims.a * dims.a];
    for i in 0..dims.a {
        for k in 0..dims.a {
            for j in 0..dims.b {
                buf[i * dims.a + k] += rho[(i * dims.b + j, k * dims.b + j)];
            }
        }
    }
    ComplexMatrix::new(dims.a, dims.a, buf).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_trace_and_partial_trace(seed in any::<u64>(), d in dims()) {
        let mut r = rng(seed);
        let a = random::density_matrix(Dims::new(d.a, 1), &mut r);
        let b = random::density_matrix(Dims::new(d.b, 1), &mut r);
        let ab = kron(a.matrix(), b.matrix());
        prop_assert!((ab.trace().re - 1.0).abs() < 1e-12);
        let back = linalg::partial_trace(&ab, d, Subsystem::A).unwrap();
        prop_assert!(back.max_abs_diff(a.matrix()) < 1e-12);
        let back = linalg::partial_trace(&ab, d, Subsystem::B).unwrap();
        prop_assert!(back.max_abs_diff(b.matrix()) < 1e-12);
    }

    #[test]
    fn partial_trace_matches_index_loops(seed in any::<u64>(), d in dims()) {
        let rho = random::density_matrix(d, &mut rng(seed));
        let fast = linalg::partial_trace(rho.matrix(), d, Subsystem::A).unwrap();
        prop_assert!(fast.max_abs_diff(&reference_reduce_to_a(rho.matrix(), d)) < 1e-14);
    }

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), d in dims()) {
        let rho = random::density_matrix(d, &mut rng(seed));
        for side in [Subsystem::A, Subsystem::B] {
            let once = linalg::partial_transpose(rho.matrix(), d, side).unwrap();
            let twice = linalg::partial_transpose(&once, d, side).unwrap();
            prop_assert_eq!(&twice, rho.matrix());
            prop_assert!((once.trace() - rho.matrix().trace()).norm() < 1e-14);
        }
        let both = linalg::partial_transpose(
            &linalg::partial_transpose(rho.matrix(), d, Subsystem::A).unwrap(), d, Subsystem::B,
        ).unwrap();
        prop_assert!(both.max_abs_diff(&rho.matrix().transpose()) < 1e-15);
    }

    #[test]
    fn eigen_and_svd_reconstruct(seed in any::<u64>(), n in 1usize..=9) {
        let mut r = rng(seed);
        let h = random::hermitian(n, &mut r);
        let eig = linalg::hermitian_eig(&h).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&h) < 1e-10);
        prop_assert!(linalg::unitarity_deviation(&eig.vectors) < 1e-10);
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));

        let m = random::ginibre(n, n + 1, &mut r);
        let s = linalg::svd(&m).unwrap();
        prop_assert!(s.reconstruct().max_abs_diff(&m) < 1e-10);
        prop_assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn cauchy_schwarz(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let a = random::ginibre(n, n, &mut r);
        let b = random::ginibre(n, n, &mut r);
        let ip = linalg::frobenius_inner(&a, &b).unwrap().norm();
        prop_assert!(ip <= linalg::frobenius_norm(&a) * linalg::frobenius_norm(&b) * (1.0 + 1e-12));
    }

    #[test]
    fn schmidt_decomposition(seed in any::<u64>(), d in dims()) {
        let psi = random::pure_state(d, &mut rng(seed));
        let s = schmidt(&psi).unwrap();
        let total: f64 = s.coeffs.as_slice().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(s.coeffs.as_slice().windows(2).all(|w| w[0] >= w[1]));
        let back = s.reconstruct();
        let diff: f64 = back.iter().zip(psi.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-10);
        // Σλ² is the purity of either marginal.
        let rho = DensityMatrix::from_pure(&psi);
        let red = rho.reduced(Subsystem::A).unwrap();
        prop_assert!((red.purity() - s.coeffs.purity()).abs() < 1e-12);
    }

    #[test]
    fn pure_measure_chain(seed in any::<u64>(), d in 2usize..=4) {
        let psi = random::pure_state(Dims::square(d), &mut rng(seed));
        let lambda = schmidt(&psi).unwrap().coeffs;
        let ds = measures::dsep_pure(&lambda);
        prop_assert!((measures::concurrence_pure(&lambda) - std::f64::consts::SQRT_2 * ds).abs() < 1e-12);
        prop_assert!(measures::eof_pure(&lambda) >= -(1.0 - ds * ds).log2() - 1e-12);
        prop_assert!(measures::geometric_pure(&lambda) >= 1.0 - (1.0 - ds * ds).sqrt() - 1e-12);
        // Rényi-2 entropy never exceeds the von Neumann entropy.
        prop_assert!(-lambda.purity().log2() <= measures::eof_pure(&lambda) + 1e-12);

        let b = bounds_from_dsep(ds).unwrap();
        prop_assert!(b.concurrence_lower <= measures::concurrence_pure(&lambda) + 1e-12);
        prop_assert!(b.eof_lower <= measures::eof_pure(&lambda) + 1e-12);
        prop_assert!(b.geometric_lower_sound <= measures::geometric_pure(&lambda) + 1e-12);
    }

    #[test]
    fn closest_separable_pure_is_separable_at_the_stated_distance(seed in any::<u64>(), d in dims()) {
        let psi = random::pure_state(d, &mut rng(seed));
        let sigma = measures::closest_separable_pure(&psi).unwrap();
        prop_assert!(ppt_check(&sigma).unwrap().is_ppt);
        let lambda = schmidt(&psi).unwrap().coeffs;
        let dist = DensityMatrix::from_pure(&psi).distance(&sigma).unwrap();
        prop_assert!((dist - measures::dsep_pure(&lambda)).abs() < 1e-9);
    }

    #[test]
    fn twirl_properties(seed in any::<u64>(), d in 2usize..=4) {
        let mut r = rng(seed);
        let rho = random::density_matrix(Dims::square(d), &mut r);
        let sigma = random::density_matrix(Dims::square(d), &mut r);
        let t = measures::diagonal_twirl(&rho).unwrap();
        prop_assert_eq!(&measures::diagonal_twirl(&t).unwrap(), &t);
        prop_assert!((t.matrix().trace().re - 1.0).abs() < 1e-12);
        let ts = measures::diagonal_twirl(&sigma).unwrap();
        prop_assert!(t.distance(&ts).unwrap() <= rho.distance(&sigma).unwrap() + 1e-9);
    }

    #[test]
    fn twirl_fixes_schmidt_diagonal_states(seed in any::<u64>(), d in 2usize..=4) {
        let psi = random::pure_state(Dims::square(d), &mut rng(seed));
        let lambda = schmidt(&psi).unwrap().coeffs;
        let diag = DensityMatrix::from_pure(&PureState::schmidt_diagonal(&lambda));
        let t = measures::diagonal_twirl(&diag).unwrap();
        prop_assert!(t.matrix().max_abs_diff(diag.matrix()) < 1e-12);
    }
}
