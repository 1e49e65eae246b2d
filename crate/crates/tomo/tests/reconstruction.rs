//! End-to-end tomography oracles: exact-probability reconstruction must be
//! numerically perfect, and finite-shot reconstruction must land within the
//! binomial error scale.

use qcflate_core::linalg::eigh;
use qcflate_core::{C64, Mat};
use qcflate_sim::{sample_shots, DensityMatrix, StateVector};
use qcflate_tomo::{
    exact_setting_probabilities, expectation_values, expectation_values_exact, fidelity_report,
    linear_inversion, tomography_settings, SettingCounts,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

fn random_pure_state(rng: &mut ChaCha20Rng) -> StateVector {
    let amps: Vec<C64> = (0..4)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    StateVector::normalized(amps).unwrap()
}

fn random_density(rng: &mut ChaCha20Rng) -> DensityMatrix {
    let k = rng.gen_range(1..=4);
    let mut weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.01..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let mut rho = Mat::zeros(4, 4);
    for w in weights {
        let psi = random_pure_state(rng);
        let a = psi.amplitudes();
        rho = Mat::from_fn(4, 4, |r, c| {
            rho[(r, c)] + a[r] * a[c].conj() * C64::new(w, 0.0)
        });
    }
    DensityMatrix::from_matrix(rho).unwrap()
}

fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    let diff = Mat::from_fn(4, 4, |r, c| a.matrix()[(r, c)] - b.matrix()[(r, c)]);
    let (vals, _) = eigh(&diff);
    vals.iter().map(|v| v.abs()).sum::<f64>() / 2.0
}

#[test]
fn exact_probabilities_reconstruct_any_state() {
    let mut rng = ChaCha20Rng::seed_from_u64(31);
    for _ in 0..50 {
        let rho = random_density(&mut rng);
        let probs = exact_setting_probabilities(&rho).unwrap();
        let e = expectation_values_exact(&probs).unwrap();
        let back = linear_inversion(&e).unwrap();
        let d = trace_distance(&rho, &back);
        assert!(d < 1e-10, "trace distance {d}");
    }
}

#[test]
fn sampled_tomography_tracks_fidelity_within_binomial_error() {
    let mut rng = ChaCha20Rng::seed_from_u64(97);
    let shots = 8192u64;
    let mut total_err = 0.0;
    let n = 50;
    for trial in 0..n {
        let target = random_pure_state(&mut rng);
        let probs = exact_setting_probabilities(&target.to_density()).unwrap();
        let mut counts = SettingCounts::new();
        for (idx, setting) in tomography_settings().iter().enumerate() {
            let label = setting.label();
            let result = sample_shots(
                &probs[&label],
                None,
                shots,
                1000 * trial as u64 + idx as u64,
            )
            .unwrap();
            counts.insert(label, result.counts);
        }
        let e = expectation_values(&counts).unwrap();
        let rho = linear_inversion(&e).unwrap();
        let f = fidelity_report(&rho, &target).unwrap();
        total_err += (f - 1.0).abs();
    }
    let mean_err = total_err / n as f64;
    eprintln!("mean |F_est - F_true| over {n} sampled reconstructions: {mean_err:.5}");
    assert!(mean_err <= 0.02, "mean fidelity error {mean_err}");
}

#[test]
fn fidelity_report_matches_known_values() {
    // projector onto its own target
    let target = StateVector::basis_state(2, 0);
    let rho = target.to_density();
    let f = fidelity_report(&rho, &target).unwrap();
    assert!((f - 1.0).abs() < 1e-12);

    // maximally mixed against anything pure
    let mixed = DensityMatrix::maximally_mixed(2);
    let f = fidelity_report(&mixed, &target).unwrap();
    assert!((f - 0.25).abs() < 1e-12);
}
