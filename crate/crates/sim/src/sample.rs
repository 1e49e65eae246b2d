//! Shot sampling with per-qubit readout error.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::SimError;

/// 2x2 readout confusion matrix, `C[read][true]`; columns sum to 1.
pub type Confusion = [[f64; 2]; 2];

/// Slack allowed on the probability-vector sum, and on small negative
/// entries (which are clamped to zero).
pub const PROB_TOL: f64 = 1e-9;

/// Measured counts from one sampling run.
///
/// Bitstring keys are written most-significant-qubit first, so qubit 0 is
/// the rightmost character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotResult {
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
    pub seed: u64,
}

impl ShotResult {
    /// Sum of two runs' counts (shots add; the seed kept is the left one).
    pub fn merged(&self, other: &ShotResult) -> ShotResult {
        let mut counts = self.counts.clone();
        for (k, v) in &other.counts {
            *counts.entry(k.clone()).or_insert(0) += v;
        }
        ShotResult {
            counts,
            shots: self.shots + other.shots,
            seed: self.seed,
        }
    }

    /// Observed frequency of one bitstring.
    pub fn frequency(&self, bitstring: &str) -> f64 {
        *self.counts.get(bitstring).unwrap_or(&0) as f64 / self.shots as f64
    }
}

/// Render an outcome index as a bitstring over `n` qubits, qubit 0 rightmost.
pub fn bitstring(index: usize, num_qubits: usize) -> String {
    (0..num_qubits)
        .rev()
        .map(|q| if index >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Sample `shots` outcomes from a `2^m` probability vector, then flip each
/// read-out bit independently through its confusion matrix.
///
/// `readout` is one confusion matrix per measured qubit (length `m`), or
/// `None` for ideal readout.  Fully deterministic for a fixed seed.
pub fn sample_shots(
    probabilities: &[f64],
    readout: Option<&[Confusion]>,
    shots: u64,
    seed: u64,
) -> Result<ShotResult, SimError> {
    let dim = probabilities.len();
    if !dim.is_power_of_two() || dim == 0 {
        return Err(SimError::InvalidState(format!(
            "probability vector length {dim} not a power of two"
        )));
    }
    let num_qubits = dim.trailing_zeros() as usize;
    if let Some(r) = readout {
        if r.len() != num_qubits {
            return Err(SimError::DimensionMismatch(format!(
                "{} confusion matrices for {num_qubits} qubits",
                r.len()
            )));
        }
        for (q, c) in r.iter().enumerate() {
            for col in 0..2 {
                let s = c[0][col] + c[1][col];
                if (s - 1.0).abs() > PROB_TOL
                    || c[0][col] < 0.0
                    || c[1][col] < 0.0
                {
                    return Err(SimError::InvalidState(format!(
                        "confusion matrix for qubit {q} has non-stochastic column {col}"
                    )));
                }
            }
        }
    }
    let mut cumulative = Vec::with_capacity(dim);
    let mut total = 0.0;
    for (i, &p) in probabilities.iter().enumerate() {
        if p < -PROB_TOL {
            return Err(SimError::InvalidState(format!(
                "probability {p} at outcome {i} is negative beyond tolerance"
            )));
        }
        total += p.max(0.0);
        cumulative.push(total);
    }
    if (total - 1.0).abs() > PROB_TOL {
        return Err(SimError::InvalidState(format!(
            "probabilities sum to {total}, not 1"
        )));
    }

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for _ in 0..shots {
        let u: f64 = rng.gen::<f64>() * total;
        let mut outcome = cumulative.partition_point(|&c| c <= u);
        if outcome >= dim {
            outcome = dim - 1;
        }
        if let Some(r) = readout {
            let mut read = 0usize;
            for (q, c) in r.iter().enumerate() {
                let truth = outcome >> q & 1;
                let p_read_one = c[1][truth];
                let bit = if rng.gen::<f64>() < p_read_one { 1 } else { 0 };
                read |= bit << q;
            }
            outcome = read;
        }
        *counts.entry(bitstring(outcome, num_qubits)).or_insert(0) += 1;
    }
    Ok(ShotResult {
        counts,
        shots,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_distribution_all_on_one_outcome() {
        let r = sample_shots(&[0.0, 0.0, 1.0, 0.0], None, 1000, 7).unwrap();
        assert_eq!(r.counts.len(), 1);
        assert_eq!(r.counts["10"], 1000);
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        let p = [0.25, 0.25, 0.25, 0.25];
        let a = sample_shots(&p, None, 4096, 42).unwrap();
        let b = sample_shots(&p, None, 4096, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_shots(&p, None, 4096, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn uniform_two_outcome_within_five_sigma() {
        let shots = 1_000_000u64;
        let r = sample_shots(&[0.5, 0.5], None, shots, 11).unwrap();
        let sigma = (shots as f64 * 0.25).sqrt(); // 500
        let zero = r.counts["0"] as f64;
        assert!((zero - 500_000.0).abs() < 5.0 * sigma, "count {zero}");
    }

    #[test]
    fn readout_error_flips_expected_fraction() {
        // True state always "0"; p(read 1 | true 0) = 0.1.
        let confusion: Confusion = [[0.9, 0.0], [0.1, 1.0]];
        let shots = 100_000u64;
        let r = sample_shots(&[1.0, 0.0], Some(&[confusion]), shots, 3).unwrap();
        let ones = *r.counts.get("1").unwrap_or(&0) as f64;
        let expect = 0.1 * shots as f64;
        let sigma = (shots as f64 * 0.1 * 0.9).sqrt();
        assert!((ones - expect).abs() < 5.0 * sigma, "ones {ones}");
    }

    #[test]
    fn rejects_bad_probabilities() {
        assert!(sample_shots(&[0.5, 0.6], None, 10, 0).is_err());
        assert!(sample_shots(&[-0.1, 1.1], None, 10, 0).is_err());
        assert!(sample_shots(&[0.5, 0.25, 0.25], None, 10, 0).is_err());
        // Tiny negative within tolerance is clamped.
        assert!(sample_shots(&[1.0 + 1e-12, -1e-12], None, 10, 0).is_ok());
    }

    #[test]
    fn bitstring_orders_qubit_zero_rightmost() {
        assert_eq!(bitstring(0b110, 3), "110");
        assert_eq!(bitstring(1, 3), "001");
    }

    #[test]
    fn merged_counts_add() {
        let a = sample_shots(&[0.5, 0.5], None, 100, 1).unwrap();
        let b = sample_shots(&[0.5, 0.5], None, 50, 2).unwrap();
        let m = a.merged(&b);
        assert_eq!(m.shots, 150);
        assert_eq!(
            m.counts.values().sum::<u64>(),
            150,
            "merged counts must sum to merged shots"
        );
    }

    #[test]
    fn seed_split_halves_match_single_run_statistically() {
        // Chi-square homogeneity between two half-runs on a known
        // distribution; critical value for df = 3 at p = 1e-6 is 30.66.
        let p = [0.4, 0.3, 0.2, 0.1];
        let a = sample_shots(&p, None, 8192, 100).unwrap();
        let b = sample_shots(&p, None, 8192, 101).unwrap();
        let mut chi2 = 0.0;
        for key in ["00", "01", "10", "11"] {
            let oa = *a.counts.get(key).unwrap_or(&0) as f64;
            let ob = *b.counts.get(key).unwrap_or(&0) as f64;
            let pooled = (oa + ob) / 2.0;
            if pooled > 0.0 {
                chi2 += (oa - pooled).powi(2) / pooled + (ob - pooled).powi(2) / pooled;
            }
        }
        const CHI2_CRIT_DF3_P1E6: f64 = 30.66;
        assert!(chi2 < CHI2_CRIT_DF3_P1E6, "chi2 {chi2}");
    }
}
