//! Pauli-expectation estimation, linear inversion, and the physicality
//! projection.
//!
//! Counts come in as a map from setting label ("XZ", ...) to a map from
//! two-bit strings to shot counts, matching the JSON interchange format.
//! Bitstrings put qubit 0 rightmost, the same order as the setting labels.

use crate::error::{Result, TomoError};
use crate::settings::{tomography_settings, PauliBasis, TomographySetting};
use qcflate_core::linalg::eigh;
use qcflate_core::{C64, Mat};
use qcflate_sim::{DensityMatrix, StateVector};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Counts per setting label, as exchanged on disk.
pub type SettingCounts = BTreeMap<String, BTreeMap<String, u64>>;

/// Exact outcome probabilities per setting label, each `[p00, p01, p10,
/// p11]` with the bit order `(b1 << 1) | b0`.
pub type SettingProbs = BTreeMap<String, Vec<f64>>;

/// The 15 estimated values `<P (x) Q>`, keyed "PQ" with P acting on qubit 1;
/// "II" is implicit (always 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliExpectations {
    values: BTreeMap<String, f64>,
}

const PAULI_LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];

impl PauliExpectations {
    /// Build from a complete 15-entry map; rejects out-of-range values.
    pub fn new(values: BTreeMap<String, f64>) -> Result<Self> {
        for p in PAULI_LETTERS {
            for q in PAULI_LETTERS {
                if p == 'I' && q == 'I' {
                    continue;
                }
                let key: String = [p, q].iter().collect();
                let v = *values
                    .get(&key)
                    .ok_or_else(|| TomoError::MissingSetting(key.clone()))?;
                if !(-1.0 - 1e-9..=1.0 + 1e-9).contains(&v) {
                    return Err(TomoError::OutOfRange { key, value: v });
                }
            }
        }
        Ok(PauliExpectations { values })
    }

    /// Value for a two-letter key like "XZ"; "II" returns 1.
    pub fn get(&self, key: &str) -> f64 {
        if key == "II" {
            return 1.0;
        }
        self.values[key]
    }

    pub fn values(&self) -> &BTreeMap<String, f64> {
        &self.values
    }
}

fn probs_from_counts(label: &str, counts: &BTreeMap<String, u64>) -> Result<Vec<f64>> {
    let mut p = vec![0.0f64; 4];
    let mut total = 0u64;
    for (bits, &n) in counts {
        let chars: Vec<char> = bits.chars().collect();
        if chars.len() != 2 || chars.iter().any(|c| *c != '0' && *c != '1') {
            return Err(TomoError::Dimension(format!(
                "setting '{label}': bitstring '{bits}' is not two bits"
            )));
        }
        let b1 = (chars[0] == '1') as usize;
        let b0 = (chars[1] == '1') as usize;
        p[(b1 << 1) | b0] += n as f64;
        total += n;
    }
    if total == 0 {
        return Err(TomoError::ZeroShots(label.to_string()));
    }
    for v in &mut p {
        *v /= total as f64;
    }
    Ok(p)
}

fn setting_probs(counts: &SettingCounts) -> Result<SettingProbs> {
    let mut out = SettingProbs::new();
    for setting in tomography_settings() {
        let label = setting.label();
        let c = counts
            .get(&label)
            .ok_or_else(|| TomoError::MissingSetting(label.clone()))?;
        out.insert(label.clone(), probs_from_counts(&label, c)?);
    }
    Ok(out)
}

/// Parity sum over a 4-entry outcome distribution: `mask` selects which bits
/// enter the sign (bit 1 = qubit 1, bit 0 = qubit 0).
fn parity_expectation(p: &[f64], mask: usize) -> f64 {
    let mut e = 0.0;
    for (idx, &prob) in p.iter().enumerate() {
        let ones = (idx & mask).count_ones();
        e += if ones % 2 == 0 { prob } else { -prob };
    }
    e
}

/// Estimate all 15 Pauli expectations from exact per-setting outcome
/// probabilities.
///
/// Weight-two operators read their matching setting directly; weight-one
/// operators average the three settings whose basis agrees on the acting
/// qubit.
pub fn expectation_values_exact(probs: &SettingProbs) -> Result<PauliExpectations> {
    for setting in tomography_settings() {
        let label = setting.label();
        let p = probs
            .get(&label)
            .ok_or_else(|| TomoError::MissingSetting(label.clone()))?;
        if p.len() != 4 {
            return Err(TomoError::Dimension(format!(
                "setting '{label}': expected 4 probabilities, got {}",
                p.len()
            )));
        }
    }
    let mut values = BTreeMap::new();
    for a in PauliBasis::ALL {
        for b in PauliBasis::ALL {
            let setting = TomographySetting { q1: a, q0: b };
            let p = &probs[&setting.label()];
            let key: String = [a.letter(), b.letter()].iter().collect();
            values.insert(key, parity_expectation(p, 0b11));
        }
    }
    for a in PauliBasis::ALL {
        let mut on_q1 = 0.0;
        let mut on_q0 = 0.0;
        for other in PauliBasis::ALL {
            let s1 = TomographySetting { q1: a, q0: other };
            on_q1 += parity_expectation(&probs[&s1.label()], 0b10);
            let s0 = TomographySetting { q1: other, q0: a };
            on_q0 += parity_expectation(&probs[&s0.label()], 0b01);
        }
        values.insert(format!("{}I", a.letter()), on_q1 / 3.0);
        values.insert(format!("I{}", a.letter()), on_q0 / 3.0);
    }
    PauliExpectations::new(values)
}

/// Estimate all 15 Pauli expectations from measured counts.
pub fn expectation_values(counts: &SettingCounts) -> Result<PauliExpectations> {
    expectation_values_exact(&setting_probs(counts)?)
}

fn pauli_matrix(letter: char) -> Mat {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let rows = match letter {
        'I' => [[l, o], [o, l]],
        'X' => [[o, l], [l, o]],
        'Y' => [[o, -i], [i, o]],
        'Z' => [[l, o], [o, -l]],
        _ => unreachable!("pauli letter"),
    };
    Mat::from_fn(2, 2, |r, c| rows[r][c])
}

/// Reconstruct `rho = (1/4) sum <P(x)Q> P(x)Q`; Hermitian and trace-one by
/// construction, but possibly not positive.
pub fn linear_inversion(e: &PauliExpectations) -> Result<DensityMatrix> {
    let mut rho = Mat::zeros(4, 4);
    for p in PAULI_LETTERS {
        for q in PAULI_LETTERS {
            let key: String = [p, q].iter().collect();
            let weight = C64::new(e.get(&key) / 4.0, 0.0);
            let term = pauli_matrix(p).kron(&pauli_matrix(q)).scale(weight);
            rho = Mat::from_fn(4, 4, |r, c| rho[(r, c)] + term[(r, c)]);
        }
    }
    Ok(DensityMatrix::from_matrix(rho)?)
}

/// Clip negative eigenvalues and spread the excess over the remaining
/// positive ones, repeating until the spectrum is nonnegative; eigenvectors
/// are untouched.  Physical inputs pass through unchanged, and the result
/// has unit trace and is idempotent under re-projection.
pub fn project_to_physical(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let (mut vals, vecs) = eigh(rho.matrix());
    for _ in 0..vals.len() + 1 {
        let deficit: f64 = vals.iter().filter(|v| **v < 0.0).sum();
        if deficit == 0.0 {
            break;
        }
        let mut npos = 0usize;
        for v in &mut vals {
            if *v < 0.0 {
                *v = 0.0;
            } else if *v > 0.0 {
                npos += 1;
            }
        }
        if npos == 0 {
            return Err(TomoError::Dimension(
                "projection impossible: no positive eigenvalues".into(),
            ));
        }
        let share = -deficit / npos as f64;
        for v in &mut vals {
            if *v > 0.0 {
                *v -= share;
            }
        }
    }
    let total: f64 = vals.iter().sum();
    if total <= 0.0 {
        return Err(TomoError::Dimension(
            "projection impossible: nonpositive trace".into(),
        ));
    }
    let dim = rho.matrix().rows();
    let scaled = Mat::from_fn(dim, dim, |r, c| {
        vecs[(r, c)] * C64::new(vals[c] / total, 0.0)
    });
    Ok(DensityMatrix::from_matrix(scaled.mul(&vecs.adjoint()))?)
}

/// Fidelity of a (possibly unphysical) reconstruction against a pure
/// target: project, then take `<target| rho |target>`.
pub fn fidelity_report(rho: &DensityMatrix, target: &StateVector) -> Result<f64> {
    if rho.num_qubits() != 2 || target.num_qubits() != 2 {
        return Err(TomoError::Dimension(format!(
            "fidelity_report needs 2-qubit operands, got {} and {}",
            rho.num_qubits(),
            target.num_qubits()
        )));
    }
    let physical = project_to_physical(rho)?;
    let amps = target.amplitudes();
    let mut f = C64::new(0.0, 0.0);
    for r in 0..4 {
        for c in 0..4 {
            f += amps[r].conj() * physical.matrix()[(r, c)] * amps[c];
        }
    }
    Ok(f.re.clamp(0.0, 1.0))
}

/// Serialize counts in the on-disk JSON shape.
pub fn counts_to_json(counts: &SettingCounts) -> String {
    serde_json::to_string_pretty(counts).expect("counts serialize")
}

/// Parse counts from the on-disk JSON shape.
pub fn counts_from_json(text: &str) -> Result<SettingCounts> {
    serde_json::from_str(text).map_err(|e| TomoError::Dimension(format!("counts JSON: {e}")))
}

/// Exact per-setting outcome probabilities of a two-qubit state: rotate into
/// each measurement basis and read the diagonal.
pub fn exact_setting_probabilities(rho: &DensityMatrix) -> Result<SettingProbs> {
    if rho.num_qubits() != 2 {
        return Err(TomoError::Dimension(format!(
            "need a 2-qubit state, got {} qubits",
            rho.num_qubits()
        )));
    }
    let h = qcflate_core::gates::u3_matrix::<f64>(std::f64::consts::FRAC_PI_2, 0.0, std::f64::consts::PI);
    let sdg = qcflate_core::gates::rz_matrix::<f64>(-std::f64::consts::FRAC_PI_2);
    let basis_rotation = |b: PauliBasis| -> Mat {
        match b {
            PauliBasis::X => h.clone(),
            PauliBasis::Y => h.mul(&sdg),
            PauliBasis::Z => pauli_matrix('I'),
        }
    };
    let mut out = SettingProbs::new();
    for setting in tomography_settings() {
        let u = basis_rotation(setting.q1).kron(&basis_rotation(setting.q0));
        let rotated = u.mul(rho.matrix()).mul(&u.adjoint());
        out.insert(
            setting.label(),
            (0..4).map(|k| rotated[(k, k)].re.max(0.0)).collect(),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn uniform_counts(per_outcome: u64) -> SettingCounts {
        let mut counts = SettingCounts::new();
        for s in tomography_settings() {
            let mut m = BTreeMap::new();
            for bits in ["00", "01", "10", "11"] {
                m.insert(bits.to_string(), per_outcome);
            }
            counts.insert(s.label(), m);
        }
        counts
    }

    #[test]
    fn maximally_mixed_counts_give_zero_expectations() {
        let e = expectation_values(&uniform_counts(100)).unwrap();
        for (k, v) in e.values() {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-12);
            assert_eq!(k.len(), 2);
        }
        assert_eq!(e.values().len(), 15);
    }

    #[test]
    fn zero_zero_counts_reconstruct_exactly() {
        let mut counts = SettingCounts::new();
        for s in tomography_settings() {
            // |00> in basis AB: qubit k reads + with probability depending
            // on the basis; Z gives deterministic 0, X/Y give 50/50
            let mut m = BTreeMap::new();
            let shots = 1600u64;
            let p0 = |b: PauliBasis| -> f64 {
                match b {
                    PauliBasis::Z => 1.0,
                    _ => 0.5,
                }
            };
            for (bits, b1, b0) in [("00", 0, 0), ("01", 0, 1), ("10", 1, 0), ("11", 1, 1)] {
                let p = (if b1 == 0 { p0(s.q1) } else { 1.0 - p0(s.q1) })
                    * (if b0 == 0 { p0(s.q0) } else { 1.0 - p0(s.q0) });
                let n = (p * shots as f64).round() as u64;
                if n > 0 {
                    m.insert(bits.to_string(), n);
                }
            }
            counts.insert(s.label(), m);
        }
        let e = expectation_values(&counts).unwrap();
        assert_abs_diff_eq!(e.get("ZI"), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.get("IZ"), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.get("ZZ"), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.get("XX"), 0.0, epsilon = 1e-12);

        let rho = linear_inversion(&e).unwrap();
        assert_abs_diff_eq!(rho.matrix()[(0, 0)].re, 1.0, epsilon = 1e-10);
        for k in 1..4 {
            assert_abs_diff_eq!(rho.matrix()[(k, k)].re, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn missing_and_empty_settings_are_rejected() {
        let mut counts = uniform_counts(10);
        counts.remove("YZ");
        assert!(matches!(
            expectation_values(&counts),
            Err(TomoError::MissingSetting(_))
        ));
        let mut counts = uniform_counts(10);
        counts.insert("XX".into(), BTreeMap::new());
        assert!(matches!(
            expectation_values(&counts),
            Err(TomoError::ZeroShots(_))
        ));
    }

    #[test]
    fn clipping_follows_the_redistribution_rule() {
        let mut m = Mat::zeros(4, 4);
        for (k, v) in [1.1, -0.1, 0.0, 0.0].into_iter().enumerate() {
            m[(k, k)] = C64::new(v, 0.0);
        }
        let rho = DensityMatrix::from_matrix(m).unwrap();
        let p = project_to_physical(&rho).unwrap();
        let mut diag: Vec<f64> = (0..4).map(|k| p.matrix()[(k, k)].re).collect();
        diag.sort_by(|a, b| b.total_cmp(a));
        assert_abs_diff_eq!(diag[0], 1.0, epsilon = 1e-12);
        for d in &diag[1..] {
            assert_abs_diff_eq!(*d, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn projection_is_idempotent_and_keeps_physical_states() {
        let rho = DensityMatrix::maximally_mixed(2);
        let once = project_to_physical(&rho).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                assert_abs_diff_eq!(
                    once.matrix()[(r, c)].re,
                    rho.matrix()[(r, c)].re,
                    epsilon = 1e-12
                );
            }
        }
        let mut e = BTreeMap::new();
        for p in PAULI_LETTERS {
            for q in PAULI_LETTERS {
                if p == 'I' && q == 'I' {
                    continue;
                }
                // a deliberately unphysical expectation set
                e.insert([p, q].iter().collect::<String>(), 0.6);
            }
        }
        let bad = linear_inversion(&PauliExpectations::new(e).unwrap()).unwrap();
        let fixed = project_to_physical(&bad).unwrap();
        let again = project_to_physical(&fixed).unwrap();
        assert!(fixed.eigenvalues().iter().all(|&v| v >= -1e-12));
        assert_abs_diff_eq!(fixed.trace().re, 1.0, epsilon = 1e-12);
        for r in 0..4 {
            for c in 0..4 {
                let d = fixed.matrix()[(r, c)] - again.matrix()[(r, c)];
                assert!(d.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn counts_json_round_trips() {
        let counts = uniform_counts(7);
        let text = counts_to_json(&counts);
        let back = counts_from_json(&text).unwrap();
        assert_eq!(counts, back);
        assert!(counts_from_json("{\"XX\": 3}").is_err());
    }
}
