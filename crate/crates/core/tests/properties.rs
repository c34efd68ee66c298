use proptest::prelude::*;

use sdi_core::catalog::{clock_shift_channels, ghz_basis_measurement, noisy_ghz};
use sdi_core::linalg::{
    eigh, kron, max_abs_diff, partial_trace, tensor, CMat, DensityMatrix,
};
use sdi_core::random::{ginibre, haar_unitary, random_density, rng_from_seed};
use sdi_core::sampling::random_channel_families;
use sdi_core::scenario::{score, Channel, ChannelFamily, GameParams, Povm, Strategy};

fn hermitian(seed: u64, dim: usize) -> CMat {
    let g = ginibre(dim, dim, &mut rng_from_seed(seed));
    (&g + g.adjoint()).scale(0.5)
}

fn random_strategy(seed: u64, n: usize, d: usize) -> Strategy {
    let params = GameParams::new(n, d).unwrap();
    let mut rng = rng_from_seed(seed);
    let dim = params.num_outcomes();
    let state = random_density(dim, 1 + (seed as usize % dim), &mut rng);
    let channels = random_channel_families(params, &mut rng).unwrap();
    let elements = sdi_core::random::random_povm(dim, dim, &mut rng);
    Strategy::new(params, state, channels, Povm::new(elements).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), dim in 1usize..7) {
        let h = hermitian(seed, dim);
        let eig = eigh(&h);
        prop_assert!(max_abs_diff(&eig.reconstruct(), &h) < 1e-10);
        for w in eig.values.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn tensor_is_associative(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let a = ginibre(2, 2, &mut rng);
        let b = ginibre(3, 3, &mut rng);
        let c = ginibre(2, 2, &mut rng);
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(max_abs_diff(&left, &right) < 1e-12);
        prop_assert!(max_abs_diff(&left, &tensor(&[a, b, c]).unwrap()) < 1e-12);
    }

    #[test]
    fn partial_traces_compose(seed in any::<u64>()) {
        let rho = random_density(12, 3, &mut rng_from_seed(seed));
        let dims = [2, 3, 2];
        let direct = partial_trace(rho.matrix(), &dims, &[0]).unwrap();
        let staged = partial_trace(rho.matrix(), &dims, &[0, 1]).unwrap();
        let staged = partial_trace(&staged, &[2, 3], &[0]).unwrap();
        prop_assert!(max_abs_diff(&direct, &staged) < 1e-12);
        prop_assert!((direct.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn score_lies_in_unit_interval(seed in any::<u64>()) {
        let s = score(&random_strategy(seed, 2, 2)).unwrap().score;
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&s));
    }

    #[test]
    fn score_is_affine_in_the_state(seed in any::<u64>(), p in 0.0f64..=1.0) {
        let s = random_strategy(seed, 2, 2);
        let other = random_density(4, 2, &mut rng_from_seed(seed ^ 0xABCD));
        let mixed = DensityMatrix::mix(s.state(), &other, p).unwrap();
        let a = score(&s).unwrap().score;
        let b = score(&s.with_state(other).unwrap()).unwrap().score;
        let m = score(&s.with_state(mixed).unwrap()).unwrap().score;
        prop_assert!((m - (p * a + (1.0 - p) * b)).abs() < 1e-12);
    }

    #[test]
    fn local_output_rotation_is_a_gauge(seed in any::<u64>()) {
        // U_k after every channel of party k, undone inside the measurement
        let s = random_strategy(seed, 2, 2);
        let mut rng = rng_from_seed(seed.wrapping_add(1));
        let us: Vec<CMat> = (0..2).map(|_| haar_unitary(2, &mut rng)).collect();
        let channels: Vec<ChannelFamily> = s
            .channels()
            .iter()
            .zip(&us)
            .map(|(fam, u)| {
                let maps = fam
                    .maps()
                    .iter()
                    .map(|ch| Channel::new(ch.kraus().iter().map(|k| u * k).collect()).unwrap())
                    .collect();
                ChannelFamily::new(fam.party(), 2, maps).unwrap()
            })
            .collect();
        let big = tensor(&us).unwrap();
        let povm = Povm::new(
            s.povm().elements().iter().map(|e| &big * e * big.adjoint()).collect(),
        )
        .unwrap();
        let rotated = Strategy::new(s.params(), s.state().clone(), channels, povm).unwrap();
        let a = score(&s).unwrap().score;
        let b = score(&rotated).unwrap().score;
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn random_channels_preserve_trace(seed in any::<u64>()) {
        let params = GameParams::new(2, 3).unwrap();
        for fam in random_channel_families(params, &mut rng_from_seed(seed)).unwrap() {
            prop_assert!(fam.max_trace_preservation_error() < 1e-10);
            let rho = random_density(3, 2, &mut rng_from_seed(seed));
            for ch in fam.maps() {
                prop_assert!((ch.apply(rho.matrix()).trace().re - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn noisy_ghz_score_is_linear_in_visibility(v in 0.0f64..=1.0) {
        let params = GameParams::new(2, 3).unwrap();
        let s = Strategy::new(
            params,
            noisy_ghz(2, 3, v).unwrap(),
            clock_shift_channels(2, 3).unwrap(),
            ghz_basis_measurement(2, 3).unwrap(),
        )
        .unwrap();
        prop_assert!((score(&s).unwrap().score - (v + (1.0 - v) / 9.0)).abs() < 1e-12);
    }
}
