use std::fmt::Write;

use super::{Parity, Syndrome};
use crate::qstate::OperatorMatrix;
use crate::scalar::Real;

/// Data-qubit flips `[t, m, b]` undoing a stabilizer round, refocusing
/// pulse included.
fn correction_mask(s: Syndrome) -> [bool; 3] {
    match (s.p_t, s.p_b) {
        (Parity::Even, Parity::Even) => [false, true, false],
        (Parity::Even, Parity::Odd) => [false, true, true],
        (Parity::Odd, Parity::Even) => [true, true, false],
        (Parity::Odd, Parity::Odd) => [false, false, false],
    }
}

/// Flips that turn a measurement-prepared branch into the logical state.
fn encoding_mask(s: Syndrome) -> [bool; 3] {
    match (s.p_t, s.p_b) {
        (Parity::Even, Parity::Even) => [true, false, true],
        (Parity::Even, Parity::Odd) => [true, false, false],
        (Parity::Odd, Parity::Even) => [false, false, true],
        (Parity::Odd, Parity::Odd) => [false, false, false],
    }
}

/// Three-qubit Pauli correction `Ĉ` for a declared syndrome.
pub fn correction_for<T: Real>(s: Syndrome) -> OperatorMatrix<T> {
    OperatorMatrix::x_mask(&correction_mask(s))
}

/// Correction for encoding by measurement.
pub fn encoding_correction_for<T: Real>(s: Syndrome) -> OperatorMatrix<T> {
    OperatorMatrix::x_mask(&encoding_mask(s))
}

fn pauli_label(mask: [bool; 3]) -> String {
    let names = ["X_t", "X_m", "X_b"];
    let parts: Vec<&str> = names
        .iter()
        .zip(mask)
        .filter_map(|(n, f)| f.then_some(*n))
        .collect();
    if parts.is_empty() {
        "I".into()
    } else {
        parts.join(" ")
    }
}

/// Tab-separated syndrome table with one row per syndrome, shown here
/// with the tabs widened.
///
/// ```text
/// syndrome  P_t  P_b  correction  encoding_correction
/// ee        0    0    X_m         X_t X_b
/// ```
pub fn syndrome_table() -> String {
    let mut out = String::from("syndrome\tP_t\tP_b\tcorrection\tencoding_correction\n");
    for s in Syndrome::ALL {
        writeln!(
            out,
            "{s}\t{}\t{}\t{}\t{}",
            s.p_t.bit(),
            s.p_b.bit(),
            pauli_label(correction_mask(s)),
            pauli_label(encoding_mask(s))
        )
        .unwrap();
    }
    out
}
