use super::{
    Cardinal, ConventionFlag, A_B, A_T, DATA_QUBITS, D_B, D_M, D_T, LABEL_BOTTOM, LABEL_TOP,
    REGISTER_QUBITS,
};
use crate::circuit::{
    Basis, Circuit, Gate, GateKind, MeasureMarker, Moment, MomentOp, ISWAP_NS, SINGLE_QUBIT_NS,
};
use crate::error::Result;
use crate::qstate::{embed, DensityMatrix, OperatorMatrix, PureState};
use crate::scalar::Real;

/// Durations of the five moments of a stabilizer round, in ns.
///
/// The second moment is one bus transfer plus a sudden phase gate; the
/// third and fourth each hold a full transfer–phase–transfer interaction.
pub const ROUND_MOMENT_NS: [f64; 5] = [
    SINGLE_QUBIT_NS,
    ISWAP_NS + 19.0,
    2.0 * ISWAP_NS + 28.0,
    2.0 * ISWAP_NS + 28.0,
    SINGLE_QUBIT_NS,
];

/// Which parity checks a round performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilizerSet {
    Both,
    /// `Z_t Z_m` only.
    Top,
    /// `Z_m Z_b` only.
    Bottom,
}

impl StabilizerSet {
    fn top(self) -> bool {
        matches!(self, StabilizerSet::Both | StabilizerSet::Top)
    }

    fn bottom(self) -> bool {
        matches!(self, StabilizerSet::Both | StabilizerSet::Bottom)
    }
}

/// `|0⟩_t ψ |0⟩_b`, the input of [`encode_by_gates`].
pub fn encode_input<T: Real>(c: Cardinal) -> PureState<T> {
    encode_input_state(&c.state())
}

pub fn encode_input_state<T: Real>(psi: &PureState<T>) -> PureState<T> {
    let zero = PureState::basis(1, 0).expect("one qubit");
    zero.tensor(psi).tensor(&zero)
}

/// Unitary encoder taking `|0⟩_t ψ |0⟩_b` to the logical state.
///
/// Two CNOTs fanning `D_m` out to `D_t` and `D_b`, each built from a CZ
/// between `RY(∓π/2)` on the target, then (inverted convention) `X` on all
/// three data qubits.
pub fn encode_by_gates<T: Real>(convention: ConventionFlag) -> Circuit<T> {
    let half = T::FRAC_PI_2();
    let ry = |angle: T, q: usize| Gate::new(GateKind::Ry(angle), &[q]).expect("valid gate");
    let cz = |a: usize, b: usize| Gate::new(GateKind::Cz, &[a, b]).expect("valid gate");
    let mut moments = vec![
        Moment::gates(vec![ry(-half, D_T), ry(-half, D_B)]),
        Moment::gates(vec![cz(D_M, D_T)]),
        Moment::gates(vec![cz(D_M, D_B)]),
        Moment::gates(vec![ry(half, D_T), ry(half, D_B)]),
    ];
    if convention.logical_inverted {
        let x = |q: usize| Gate::new(GateKind::X, &[q]).expect("valid gate");
        moments.push(Moment::gates(vec![x(D_T), x(D_M), x(D_B)]));
    }
    let moments = moments
        .into_iter()
        .collect::<Result<Vec<_>>>()
        .expect("disjoint moments");
    Circuit::from_moments(DATA_QUBITS, moments).expect("valid encoder")
}

/// Both parity checks in parallel on the five-qubit register.
pub fn stabilizer_round<T: Real>() -> Circuit<T> {
    stabilizer_round_with(StabilizerSet::Both)
}

/// Parity round with ancilla-data CZ interactions standing in for the bus
/// sandwiches.
///
/// 1. `RY(π/2)` on the active ancillas.
/// 2. `CZ(A_t, D_m)`.
/// 3. `CZ(A_t, D_t)` and `CZ(A_b, D_m)`.
/// 4. Refocusing `X` on `D_m` alongside `CZ(A_b, D_b)`.
/// 5. `±`-basis readout of the active ancillas as `P_t` and `P_b`.
///
/// Inactive ancillas stay in `|0⟩`, so their CZs act trivially, and they are
/// not read out.
pub fn stabilizer_round_with<T: Real>(set: StabilizerSet) -> Circuit<T> {
    let [d1, d2, d3, d4, d5] = ROUND_MOMENT_NS;
    let cz =
        |a: usize, b: usize, t: f64| Gate::timed(GateKind::Cz, &[a, b], t).expect("valid gate");
    let mut prep = Vec::new();
    let mut readout: Vec<MomentOp<T>> = Vec::new();
    for (active, ancilla, label) in [
        (set.top(), A_T, LABEL_TOP),
        (set.bottom(), A_B, LABEL_BOTTOM),
    ] {
        if active {
            prep.push(Gate::new(GateKind::Ry(T::FRAC_PI_2()), &[ancilla]).expect("valid gate"));
            readout.push(
                MeasureMarker::new(ancilla, Basis::X, label)
                    .with_duration(d5)
                    .into(),
            );
        }
    }
    let refocus = Gate::new(GateKind::X, &[D_M]).expect("valid gate");
    let moments = vec![
        Moment::gates(prep).map(|m| m.padded(d1)),
        Moment::gates(vec![cz(A_T, D_M, d2)]),
        Moment::gates(vec![cz(A_T, D_T, d3), cz(A_B, D_M, d3)]),
        Moment::gates(vec![refocus, cz(A_B, D_B, d4)]),
        Moment::new(readout).map(|m| m.padded(d5)),
    ]
    .into_iter()
    .collect::<Result<Vec<_>>>()
    .expect("disjoint moments");
    Circuit::from_moments(REGISTER_QUBITS, moments).expect("valid round")
}

/// Idling of equal duration: the same five moment lengths with only the
/// refocusing `X` on `D_m`, on an `n_qubits` register (at least three).
pub fn idle_round<T: Real>(n_qubits: usize) -> Result<Circuit<T>> {
    let moments = ROUND_MOMENT_NS
        .iter()
        .enumerate()
        .map(|(i, &ns)| {
            if i == 3 {
                Ok(Moment::gates(vec![Gate::new(GateKind::X, &[D_M])?])?.padded(ns))
            } else {
                Ok(Moment::idle(ns))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Circuit::from_moments(n_qubits, moments)
}

/// Ideal decoder: gate sequence plus the qubit kept afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct Decoder<T> {
    pub circuit: Circuit<T>,
    unitary: OperatorMatrix<T>,
    /// Register positions kept after the circuit; the rest are traced out.
    pub keep: Vec<usize>,
}

impl<T: Real> Decoder<T> {
    pub fn unitary(&self) -> &OperatorMatrix<T> {
        &self.unitary
    }

    /// Reduced `D_m` state after decoding a three-qubit data state.
    pub fn decode(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        rho.apply_unitary(&self.unitary, &[D_T, D_M, D_B])?
            .partial_trace(&self.keep)
    }
}

/// `CNOT(m→t)`, `CNOT(m→b)`, `TOFFOLI(t,b→m)`, then `X_m` under the
/// inverted convention; keeps `D_m`. Majority vote on the logical bit, so a
/// single flipped data qubit does not change the output.
pub fn decoder<T: Real>(convention: ConventionFlag) -> Decoder<T> {
    let g = |kind: GateKind<T>, q: &[usize]| Gate::new(kind, q).expect("valid gate");
    let mut gates = vec![
        g(GateKind::Cnot, &[D_M, D_T]),
        g(GateKind::Cnot, &[D_M, D_B]),
        g(GateKind::Toffoli, &[D_T, D_B, D_M]),
    ];
    if convention.logical_inverted {
        gates.push(g(GateKind::X, &[D_M]));
    }
    let mut unitary = OperatorMatrix::identity(DATA_QUBITS);
    for gate in &gates {
        let full = embed(&gate.matrix(), gate.targets(), DATA_QUBITS).expect("in range");
        unitary = full.compose(&unitary).expect("same arity");
    }
    let moments = gates
        .into_iter()
        .map(|gate| Moment::gates(vec![gate]))
        .collect::<Result<Vec<_>>>()
        .expect("single-gate moments");
    Decoder {
        circuit: Circuit::from_moments(DATA_QUBITS, moments).expect("valid decoder"),
        unitary,
        keep: vec![D_M],
    }
}

/// Three-qubit unitary of the default-convention decoder.
pub fn decoder_unitary<T: Real>() -> OperatorMatrix<T> {
    decoder::<T>(ConventionFlag::default()).unitary
}
