use sdi_core::catalog::{ghz_state, noisy_ghz};
use sdi_core::certify::{
    extractable_ghz_fraction, ghz_fraction, ghz_overlap, FractionConfig,
};
use sdi_core::linalg::{tensor, CMat, DensityMatrix};
use sdi_core::optimize::{conjecture_probe, seesaw, SeesawConfig};
use sdi_core::random::{haar_unitary, random_density, substream};
use sdi_core::scenario::GameParams;

fn config(restarts: usize, seed: u64) -> FractionConfig {
    FractionConfig {
        restarts,
        seed,
        ..Default::default()
    }
}

#[test]
fn ghz_fraction_is_local_unitary_invariant() {
    let params = GameParams::new(3, 2).unwrap();
    for i in 0..4 {
        let mut rng = substream(41, i);
        let rho = random_density(8, 2, &mut rng);
        let us: Vec<CMat> = (0..3).map(|_| haar_unitary(2, &mut rng)).collect();
        let u = tensor(&us).unwrap();
        let rotated = DensityMatrix::new(sdi_core::linalg::hermitian_part(&(&u * rho.matrix() * u.adjoint()))).unwrap();
        let a = ghz_fraction(&rho, params, &config(12, i)).unwrap().value;
        let b = ghz_fraction(&rotated, params, &config(12, i + 100)).unwrap().value;
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
    }
}

#[test]
fn reported_maps_reach_the_reported_fraction() {
    let params = GameParams::new(2, 3).unwrap();
    let rho = random_density(9, 3, &mut substream(43, 0));
    let gf = ghz_fraction(&rho, params, &config(6, 1)).unwrap();
    assert!((ghz_overlap(&rho, params, &gf.maps).unwrap() - gf.value).abs() < 1e-12);
    let egf = extractable_ghz_fraction(&rho, params, &config(6, 1)).unwrap();
    for m in &egf.maps {
        assert!(m.trace_preservation_error() < 1e-9);
    }
    assert!((ghz_overlap(&rho, params, &egf.maps).unwrap() - egf.value).abs() < 1e-12);
}

#[test]
fn extractable_fraction_dominates_unitary_fraction() {
    let params = GameParams::new(2, 2).unwrap();
    for i in 0..10 {
        let rho = random_density(4, 1 + (i as usize % 4), &mut substream(47, i));
        let gf = ghz_fraction(&rho, params, &config(5, i)).unwrap().value;
        let egf = extractable_ghz_fraction(&rho, params, &config(5, i)).unwrap().value;
        assert!(egf >= gf - 1e-8);
        // resetting every party to |0⟩ already gives overlap 1/d
        assert!(egf >= 0.5 - 1e-8);
    }
}

#[test]
fn channels_beat_unitaries_on_white_noise() {
    let params = GameParams::new(2, 2).unwrap();
    let rho = DensityMatrix::maximally_mixed(4).unwrap();
    let gf = ghz_fraction(&rho, params, &config(4, 0)).unwrap().value;
    let egf = extractable_ghz_fraction(&rho, params, &config(4, 0)).unwrap().value;
    assert!((gf - 0.25).abs() < 1e-12);
    assert!((egf - 0.5).abs() < 1e-8);
}

#[test]
fn probe_on_ghz_and_white_noise() {
    let params = GameParams::new(2, 2).unwrap();
    let cfg = SeesawConfig {
        restarts: 4,
        seed: 3,
        ..Default::default()
    };
    let ghz = DensityMatrix::from_ket(&ghz_state(2, 2).unwrap()).unwrap();
    let r = conjecture_probe(&ghz, params, &cfg).unwrap();
    assert!((r.seesaw_best - 1.0).abs() < 1e-6 && (r.egf_estimate - 1.0).abs() < 1e-6);
    // general channels prepare a product state, so both reach 1/d
    let mixed = DensityMatrix::maximally_mixed(4).unwrap();
    let r = conjecture_probe(&mixed, params, &cfg).unwrap();
    assert!(r.gap.abs() < 1e-6);
    assert!((r.egf_estimate - 0.5).abs() < 1e-6);
    let noisy = noisy_ghz(2, 2, 0.5).unwrap();
    let r = conjecture_probe(&noisy, params, &cfg).unwrap();
    assert!((r.egf_estimate - 0.625).abs() < 1e-6 && r.gap.abs() < 1e-3);
}

#[test]
fn seesaw_is_deterministic_across_thread_counts() {
    let params = GameParams::new(2, 2).unwrap();
    let rho = random_density(4, 2, &mut substream(53, 0));
    let cfg = SeesawConfig {
        restarts: 3,
        seed: 9,
        ..Default::default()
    };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| seesaw(&rho, params, &cfg, None).unwrap())
    };
    let a = run(1);
    let b = run(3);
    assert_eq!(a.best_score.to_bits(), b.best_score.to_bits());
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.best_strategy, b.best_strategy);
}
