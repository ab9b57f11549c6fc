//! The three-qubit bit-flip repetition code.
//!
//! Logical states use the inverted convention `α|111⟩ + β|000⟩` unless a
//! [`ConventionFlag`] says otherwise. Data qubits are register positions
//! 0..3 (`D_t`, `D_m`, `D_b`) and the ancillas are 3 and 4.

mod circuits;
mod pipeline;
mod tables;

pub use circuits::{
    decoder, decoder_unitary, encode_by_gates, encode_input, encode_input_state, idle_round,
    stabilizer_round, stabilizer_round_with, Decoder, StabilizerSet, ROUND_MOMENT_NS,
};
pub use pipeline::{
    data_branches, encode_by_measurement, measure_parities, mix_outputs, run_flips, run_flips_on,
    run_pipeline, run_pipeline_on, superposition_input, Pipeline, PipelineOutput,
};
pub use tables::{correction_for, encoding_correction_for, syndrome_table};

use std::fmt;

use crate::circuit::Outcomes;
use crate::error::{Error, Result};
use crate::qstate::PureState;
use crate::scalar::{Real, C};

pub const D_T: usize = 0;
pub const D_M: usize = 1;
pub const D_B: usize = 2;
pub const A_T: usize = 3;
pub const A_B: usize = 4;
pub const DATA_QUBITS: usize = 3;
pub const REGISTER_QUBITS: usize = 5;

/// Measurement label of the top (`Z_t Z_m`) parity.
pub const LABEL_TOP: &str = "P_t";
/// Measurement label of the bottom (`Z_m Z_b`) parity.
pub const LABEL_BOTTOM: &str = "P_b";

/// The six cardinal single-qubit states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cardinal {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    MinusI,
}

impl Cardinal {
    pub const ALL: [Cardinal; 6] = [
        Cardinal::Zero,
        Cardinal::One,
        Cardinal::Plus,
        Cardinal::Minus,
        Cardinal::PlusI,
        Cardinal::MinusI,
    ];

    /// `(α, β)` with the state `α|0⟩ + β|1⟩`.
    pub fn amplitudes<T: Real>(self) -> (C<T>, C<T>) {
        let s = T::FRAC_1_SQRT_2();
        let (o, z) = (T::one(), T::zero());
        match self {
            Cardinal::Zero => (C::new(o, z), C::new(z, z)),
            Cardinal::One => (C::new(z, z), C::new(o, z)),
            Cardinal::Plus => (C::new(s, z), C::new(s, z)),
            Cardinal::Minus => (C::new(s, z), C::new(-s, z)),
            Cardinal::PlusI => (C::new(s, z), C::new(z, s)),
            Cardinal::MinusI => (C::new(s, z), C::new(z, -s)),
        }
    }

    pub fn state<T: Real>(self) -> PureState<T> {
        let (a, b) = self.amplitudes();
        PureState::qubit(a, b).expect("cardinal states are normalized")
    }

    pub fn name(self) -> &'static str {
        match self {
            Cardinal::Zero => "0",
            Cardinal::One => "1",
            Cardinal::Plus => "+",
            Cardinal::Minus => "-",
            Cardinal::PlusI => "+i",
            Cardinal::MinusI => "-i",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Declared ancilla bit: 0 is even.
    pub fn bit(self) -> u8 {
        self as u8
    }

    pub fn from_bit(b: u8) -> Self {
        if b & 1 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn of(a: bool, b: bool) -> Self {
        if a == b {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn letter(self) -> char {
        match self {
            Parity::Even => 'e',
            Parity::Odd => 'o',
        }
    }
}

/// Declared parity pair `P_t P_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome {
    pub p_t: Parity,
    pub p_b: Parity,
}

impl Syndrome {
    /// `ee`, `eo`, `oe`, `oo`.
    pub const ALL: [Syndrome; 4] = [
        Syndrome::new(Parity::Even, Parity::Even),
        Syndrome::new(Parity::Even, Parity::Odd),
        Syndrome::new(Parity::Odd, Parity::Even),
        Syndrome::new(Parity::Odd, Parity::Odd),
    ];

    pub const fn new(p_t: Parity, p_b: Parity) -> Self {
        Self { p_t, p_b }
    }

    /// Position in [`Syndrome::ALL`].
    pub fn index(self) -> usize {
        2 * self.p_t.bit() as usize + self.p_b.bit() as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i & 3]
    }

    pub fn from_bits(t: u8, b: u8) -> Self {
        Self::new(Parity::from_bit(t), Parity::from_bit(b))
    }

    /// Parities of a computational data input `|ijk⟩` (`index = 4i + 2j + k`).
    pub fn of_data(index: usize) -> Self {
        let (i, j, k) = (index & 4 != 0, index & 2 != 0, index & 1 != 0);
        Self::new(Parity::of(i, j), Parity::of(j, k))
    }

    /// Reads both parity labels; `None` if either is missing.
    pub fn from_outcomes(o: &Outcomes) -> Option<Self> {
        Some(Self::from_bits(o.get(LABEL_TOP)?, o.get(LABEL_BOTTOM)?))
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.to_string() == s)
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.p_t.letter(), self.p_b.letter())
    }
}

/// Which logical-basis convention to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConventionFlag {
    /// `true`: `|0⟩ → |111⟩`, `|1⟩ → |000⟩`. `false`: the textbook map.
    pub logical_inverted: bool,
}

impl ConventionFlag {
    pub const INVERTED: Self = Self {
        logical_inverted: true,
    };
    pub const TEXTBOOK: Self = Self {
        logical_inverted: false,
    };
}

impl Default for ConventionFlag {
    fn default() -> Self {
        Self::INVERTED
    }
}

/// `α|111⟩ + β|000⟩` for the cardinal `α|0⟩ + β|1⟩`.
pub fn logical_state<T: Real>(c: Cardinal) -> PureState<T> {
    logical_state_with(c, ConventionFlag::default())
}

pub fn logical_state_with<T: Real>(c: Cardinal, convention: ConventionFlag) -> PureState<T> {
    encode_state(&c.state(), convention).expect("one-qubit state")
}

/// Logical encoding of an arbitrary single-qubit state.
pub fn encode_state<T: Real>(
    psi: &PureState<T>,
    convention: ConventionFlag,
) -> Result<PureState<T>> {
    if psi.n_qubits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: psi.amplitudes().len(),
        });
    }
    let (a, b) = (psi.amplitudes()[0], psi.amplitudes()[1]);
    let mut amps = vec![C::new(T::zero(), T::zero()); 8];
    if convention.logical_inverted {
        amps[7] = a;
        amps[0] = b;
    } else {
        amps[0] = a;
        amps[7] = b;
    }
    PureState::new(amps)
}

/// `(|000⟩ + e^{−iφ}|111⟩)/√2`, the state left in the `oo` branch after the
/// parity measurement of a maximal superposition with phase `φ` on `D_m`.
pub fn ghz<T: Real>(phi: T) -> PureState<T> {
    let s = T::FRAC_1_SQRT_2();
    let mut amps = vec![C::new(T::zero(), T::zero()); 8];
    amps[0] = C::new(s, T::zero());
    amps[7] = C::from_polar(s, -phi);
    PureState::new(amps).expect("normalized")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logical_state_examples() {
        let zero: PureState<f64> = logical_state(Cardinal::Zero);
        assert_eq!(zero.amplitudes()[7], C::new(1.0, 0.0));
        let one: PureState<f64> = logical_state(Cardinal::One);
        assert_eq!(one.amplitudes()[0], C::new(1.0, 0.0));
        let plus: PureState<f64> = logical_state(Cardinal::Plus);
        let f = plus.density().fidelity_to_pure(&ghz(0.0)).unwrap();
        assert!((f - 1.0).abs() < 1e-15);
        let tb: PureState<f64> = logical_state_with(Cardinal::Zero, ConventionFlag::TEXTBOOK);
        assert_eq!(tb.amplitudes()[0], C::new(1.0, 0.0));
    }

    #[test]
    fn syndrome_of_data_follows_parity_pattern() {
        let expected = ["ee", "eo", "oo", "oe", "oe", "oo", "eo", "ee"];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(Syndrome::of_data(i).to_string(), *e, "input {i:03b}");
        }
        for (i, s) in Syndrome::ALL.iter().enumerate() {
            assert_eq!(s.index(), i);
            assert_eq!(Syndrome::parse(&s.to_string()), Some(*s));
        }
    }

    #[test]
    fn cardinal_names_round_trip() {
        for c in Cardinal::ALL {
            assert_eq!(Cardinal::from_name(c.name()), Some(c));
            let psi = c.state::<f64>();
            let n: f64 = psi.amplitudes().iter().map(|a| a.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-15);
        }
    }
}
