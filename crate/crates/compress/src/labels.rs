//! The six benchmark input states: the eigenvectors of X, Y, and Z.

use crate::error::{CompressError, Result};
use qcflate_core::GateKind;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

/// Label of a single-qubit input state |psi> prepared on all three wires.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputStateLabel {
    Zero,
    One,
    Plus,
    Minus,
    YPlus,
    YMinus,
}

impl InputStateLabel {
    pub const ALL: [InputStateLabel; 6] = [
        InputStateLabel::Zero,
        InputStateLabel::One,
        InputStateLabel::Plus,
        InputStateLabel::Minus,
        InputStateLabel::YPlus,
        InputStateLabel::YMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InputStateLabel::Zero => "zero",
            InputStateLabel::One => "one",
            InputStateLabel::Plus => "plus",
            InputStateLabel::Minus => "minus",
            InputStateLabel::YPlus => "y_plus",
            InputStateLabel::YMinus => "y_minus",
        }
    }

    pub fn parse(name: &str) -> Result<InputStateLabel> {
        Self::ALL
            .into_iter()
            .find(|l| l.name() == name)
            .ok_or_else(|| CompressError::UnknownLabel(name.to_string()))
    }

    /// Bloch angles (theta, phi) of the labeled state.
    pub fn bloch_angles(self) -> (f64, f64) {
        match self {
            InputStateLabel::Zero => (0.0, 0.0),
            InputStateLabel::One => (PI, 0.0),
            InputStateLabel::Plus => (FRAC_PI_2, 0.0),
            InputStateLabel::Minus => (FRAC_PI_2, PI),
            InputStateLabel::YPlus => (FRAC_PI_2, FRAC_PI_2),
            InputStateLabel::YMinus => (FRAC_PI_2, -FRAC_PI_2),
        }
    }

    /// The preparation gate: a U3 whose first column is the labeled state.
    ///
    /// The third Euler angle only fixes the image of |1>, so it is chosen
    /// to give familiar gates where possible (X for |1>, H for |+>).
    pub fn prep_unitary(self) -> GateKind {
        match self {
            InputStateLabel::Zero => GateKind::U3(0.0, 0.0, 0.0),
            InputStateLabel::One => GateKind::U3(PI, 0.0, PI),
            InputStateLabel::Plus => GateKind::U3(FRAC_PI_2, 0.0, PI),
            InputStateLabel::Minus => GateKind::U3(FRAC_PI_2, PI, PI),
            InputStateLabel::YPlus => GateKind::U3(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2),
            InputStateLabel::YMinus => GateKind::U3(FRAC_PI_2, -FRAC_PI_2, -FRAC_PI_2),
        }
    }
}

impl fmt::Display for InputStateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Preparation gate for an arbitrary Bloch-sphere point (theta, phi).
pub fn bloch_prep_unitary(theta: f64, phi: f64) -> GateKind {
    GateKind::U3(theta, phi, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;
    use qcflate_core::gates::u3_matrix;
    use qcflate_core::Mat;

    fn first_column(kind: &GateKind) -> [Complex<f64>; 2] {
        let m: Mat = match *kind {
            GateKind::U3(t, p, l) => u3_matrix(t, p, l),
            _ => panic!("prep gates are U3"),
        };
        [m[(0, 0)], m[(1, 0)]]
    }

    fn target_state(theta: f64, phi: f64) -> [Complex<f64>; 2] {
        [
            Complex::new((theta / 2.0).cos(), 0.0),
            Complex::from_polar((theta / 2.0).sin(), phi),
        ]
    }

    #[test]
    fn six_labels_round_trip_names() {
        assert_eq!(InputStateLabel::ALL.len(), 6);
        for l in InputStateLabel::ALL {
            assert_eq!(InputStateLabel::parse(l.name()).unwrap(), l);
        }
        assert!(InputStateLabel::parse("sideways").is_err());
    }

    #[test]
    fn prep_first_columns_match_labels() {
        for l in InputStateLabel::ALL {
            let (theta, phi) = l.bloch_angles();
            let got = first_column(&l.prep_unitary());
            let want = target_state(theta, phi);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).norm() < 1e-12, "{l}: {got:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn bloch_prep_reaches_arbitrary_points() {
        for (theta, phi) in [(0.3, 1.2), (2.0, -2.5), (1.5707, 0.0)] {
            let got = first_column(&bloch_prep_unitary(theta, phi));
            let want = target_state(theta, phi);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn labels_serialize_snake_case() {
        let text = serde_json::to_string(&InputStateLabel::YMinus).unwrap();
        assert_eq!(text, "\"y_minus\"");
        let back: InputStateLabel = serde_json::from_str(&text).unwrap();
        assert_eq!(back, InputStateLabel::YMinus);
    }
}
