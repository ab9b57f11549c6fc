#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use qedsim::qstate::{CMatrix, DensityMatrix, OperatorMatrix, PureState};

pub type M = CMatrix<f64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn m2(a: [[Complex64; 2]; 2]) -> M {
    CMatrix::from_vec(2, vec![a[0][0], a[0][1], a[1][0], a[1][1]]).unwrap()
}

pub fn id2() -> M {
    CMatrix::identity(2)
}

pub fn x2() -> M {
    m2([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])
}

pub fn y2() -> M {
    m2([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]])
}

pub fn z2() -> M {
    m2([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]])
}

pub fn ry2(theta: f64) -> M {
    let (s, co) = (theta / 2.0).sin_cos();
    m2([[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]])
}

/// `ops[0] ⊗ ops[1] ⊗ ...`, first factor on the most significant bit.
pub fn kron_all(ops: &[M]) -> M {
    ops[1..].iter().fold(ops[0].clone(), |acc, o| acc.kron(o))
}

/// `op` on qubit `q` of `n`, identity elsewhere.
pub fn on(op: &M, q: usize, n: usize) -> M {
    let ops: Vec<M> = (0..n)
        .map(|i| if i == q { op.clone() } else { id2() })
        .collect();
    kron_all(&ops)
}

/// Diagonal CZ between `a` and `b` on `n` qubits, from bit arithmetic.
pub fn cz_full(a: usize, b: usize, n: usize) -> M {
    let dim = 1 << n;
    let diag: Vec<Complex64> = (0..dim)
        .map(|i| {
            let (ba, bb) = ((i >> (n - 1 - a)) & 1, (i >> (n - 1 - b)) & 1);
            c(if ba == 1 && bb == 1 { -1.0 } else { 1.0 }, 0.0)
        })
        .collect();
    CMatrix::diagonal(&diag)
}

pub fn ket(amps: Vec<Complex64>) -> PureState<f64> {
    PureState::new(amps).unwrap()
}

pub fn density_of(v: &[Complex64]) -> M {
    CMatrix::outer(v)
}

/// `⟨v| m |v⟩`, real part.
pub fn sandwich(m: &M, v: &[Complex64]) -> f64 {
    let mv = m.mul_vec(v);
    v.iter()
        .zip(&mv)
        .map(|(a, b)| a.conj() * b)
        .sum::<Complex64>()
        .re
}

pub fn conj_by(u: &M, rho: &M) -> M {
    u.matmul(rho).matmul(&u.adjoint())
}

pub fn op(m: M) -> OperatorMatrix<f64> {
    let arity = m.dim().trailing_zeros() as usize;
    OperatorMatrix::new(arity, m).unwrap()
}

pub fn unitary(m: M) -> OperatorMatrix<f64> {
    let arity = m.dim().trailing_zeros() as usize;
    OperatorMatrix::unitary(arity, m).unwrap()
}

pub fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_filter("nonzero", |v| {
            v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3
        })
        .prop_map(|v| v.into_iter().map(|(a, b)| c(a, b)).collect())
}

pub fn pure_state(n: usize) -> impl Strategy<Value = PureState<f64>> {
    complex_vec(1 << n).prop_map(|v| {
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        ket(v.into_iter().map(|a| a / norm).collect())
    })
}

/// `A A† / Tr(A A†)` for a random complex `A`.
pub fn density(n: usize) -> impl Strategy<Value = DensityMatrix<f64>> {
    let d = 1 << n;
    complex_vec(d * d).prop_map(move |v| {
        let a = CMatrix::from_vec(d, v).unwrap();
        let aa = a.matmul(&a.adjoint());
        let tr = aa.trace().re;
        DensityMatrix::new(aa.scale_real(1.0 / tr)).unwrap()
    })
}

/// `exp(−i H)` for a random Hermitian `H` on `n` qubits, by eigen-free
/// Cayley transform `(I − iH)(I + iH)^{-1}`.
pub fn random_unitary(n: usize) -> impl Strategy<Value = OperatorMatrix<f64>> {
    let d = 1 << n;
    complex_vec(d * d).prop_map(move |v| {
        let a = CMatrix::from_vec(d, v).unwrap();
        let h = (&a + &a.adjoint()).scale_real(0.5);
        let i_h = h.scale(c(0.0, 1.0));
        let id = CMatrix::identity(d);
        let u = (&id - &i_h).matmul(&invert(&(&id + &i_h)));
        unitary(u)
    })
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn invert(m: &M) -> M {
    let d = m.dim();
    let mut a: Vec<Vec<Complex64>> = (0..d)
        .map(|r| (0..d).map(|k| m.get(r, k)).collect())
        .collect();
    let mut inv: Vec<Vec<Complex64>> = (0..d)
        .map(|r| {
            (0..d)
                .map(|k| c(if r == k { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    for col in 0..d {
        let piv = (col..d)
            .max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()))
            .unwrap();
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for k in 0..d {
            a[col][k] /= p;
            inv[col][k] /= p;
        }
        for r in 0..d {
            if r != col {
                let f = a[r][col];
                for k in 0..d {
                    let (ak, ik) = (a[col][k], inv[col][k]);
                    a[r][k] -= f * ak;
                    inv[r][k] -= f * ik;
                }
            }
        }
    }
    CMatrix::from_vec(d, inv.into_iter().flatten().collect()).unwrap()
}
