//! Dense complex linear algebra for small registers: pure states, density
//! matrices, operators, Kraus channels, embedding and reductions.
//!
//! Basis ordering is most-significant-bit first: in an `n`-qubit register,
//! qubit 0 selects the highest index bit, so `|i j k⟩` has index
//! `4i + 2j + k`.

mod channel;
mod matrix;
mod operator;
mod state;

pub use channel::KrausChannel;
pub use matrix::CMatrix;
pub use operator::{embed, OperatorMatrix};
pub use state::{DensityMatrix, PureState};
