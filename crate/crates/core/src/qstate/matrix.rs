use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C::one();
        }
        m
    }

    pub fn from_vec(dim: usize, data: Vec<C<T>>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from real-valued rows. Panics on ragged input, so
    /// only meant for literal tables.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "ragged matrix literal");
            data.extend(row.iter().map(|&x| C::new(T::lit(x), T::zero())));
        }
        Self { dim, data }
    }

    pub fn diagonal(diag: &[C<T>]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = d;
        }
        m
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[C<T>]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m.data[r * dim + c] = v[r] * v[c].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C<T> {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C<T>) {
        self.data[r * self.dim + c] = v;
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        m
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.is_zero() {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[r * n..(r + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`; `self` occupies the more
    /// significant index bits.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let n = a * b;
        let mut out = Self::zeros(n);
        for r1 in 0..a {
            for c1 in 0..a {
                let x = self.data[r1 * a + c1];
                if x.is_zero() {
                    continue;
                }
                for r2 in 0..b {
                    for c2 in 0..b {
                        out.data[(r1 * b + r2) * n + c1 * b + c2] = x * other.data[r2 * b + c2];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn scale(&self, k: C<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * k).collect(),
        }
    }

    pub fn scale_real(&self, k: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * k).collect(),
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Self, k: T) {
        assert_eq!(self.dim, other.dim);
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += b * k;
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn hermiticity_deviation(&self) -> T {
        let n = self.dim;
        let mut dev = T::zero();
        for r in 0..n {
            for c in r..n {
                dev = dev.max((self.data[r * n + c] - self.data[c * n + r].conj()).norm());
            }
        }
        dev
    }

    /// `max |U†U − I|`.
    pub fn unitarity_deviation(&self) -> T {
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&Self::identity(self.dim))
    }

    pub fn mul_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        let n = self.dim;
        (0..n)
            .map(|r| {
                self.data[r * n..(r + 1) * n]
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Positive semidefiniteness of a Hermitian matrix, up to `tol`.
    ///
    /// Runs a Cholesky factorization of `self + tol·I`; it succeeds exactly
    /// when the smallest eigenvalue exceeds `-tol`.
    pub fn is_positive_semidefinite(&self, tol: T) -> bool {
        let n = self.dim;
        let mut a = self.clone();
        for i in 0..n {
            a.data[i * n + i] += C::new(tol, T::zero());
        }
        let mut l = Self::zeros(n);
        for j in 0..n {
            let mut d = a.get(j, j).re;
            for k in 0..j {
                d -= l.get(j, k).norm_sqr();
            }
            if !(d > T::zero()) {
                return false;
            }
            let ljj = d.sqrt();
            l.set(j, j, C::new(ljj, T::zero()));
            for i in (j + 1)..n {
                let mut s = a.get(i, j);
                for k in 0..j {
                    s -= l.get(i, k) * l.get(j, k).conj();
                }
                l.set(i, j, s / ljj);
            }
        }
        true
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: Self) -> CMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Real> Add for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn add(self, rhs: Self) -> CMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn sub(self, rhs: Self) -> CMatrix<T> {
        assert_eq!(self.dim, rhs.dim);
        CMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Index bookkeeping for acting on a subset of qubits of an `n`-qubit
/// register with most-significant-bit-first ordering.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    /// Full-register indices whose target bits are all zero.
    pub bases: Vec<usize>,
    /// Offset contributed by each sub-index of the targeted subsystem; the
    /// first target is the most significant sub-index bit.
    pub offsets: Vec<usize>,
}

pub(crate) fn check_targets(targets: &[usize], n_qubits: usize) -> Result<()> {
    for (i, &q) in targets.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
        }
        if targets[..i].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}

pub(crate) fn qubit_bit(q: usize, n_qubits: usize) -> usize {
    1 << (n_qubits - 1 - q)
}

impl Layout {
    pub fn new(targets: &[usize], n_qubits: usize) -> Self {
        let k = targets.len();
        let offsets = (0..1usize << k)
            .map(|s| {
                targets
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| (s >> (k - 1 - i)) & 1 == 1)
                    .map(|(_, &q)| qubit_bit(q, n_qubits))
                    .sum()
            })
            .collect();
        let mask: usize = targets.iter().map(|&q| qubit_bit(q, n_qubits)).sum();
        let bases = (0..1usize << n_qubits).filter(|i| i & mask == 0).collect();
        Self { bases, offsets }
    }
}

/// `op · m` with `op` acting on the subsystem described by `layout`.
pub(crate) fn apply_left<T: Real>(m: &CMatrix<T>, op: &CMatrix<T>, layout: &Layout) -> CMatrix<T> {
    let d = m.dim();
    let k = layout.offsets.len();
    let mut out = CMatrix::zeros(d);
    let mut buf = vec![C::zero(); k];
    for &base in &layout.bases {
        for col in 0..d {
            for (s, &off) in layout.offsets.iter().enumerate() {
                buf[s] = m.get(base + off, col);
            }
            for (s, &off) in layout.offsets.iter().enumerate() {
                let mut acc = C::zero();
                for (sp, &v) in buf.iter().enumerate() {
                    acc += op.get(s, sp) * v;
                }
                out.set(base + off, col, acc);
            }
        }
    }
    out
}

/// `m · op†` with `op` acting on the subsystem described by `layout`.
pub(crate) fn apply_right_adjoint<T: Real>(
    m: &CMatrix<T>,
    op: &CMatrix<T>,
    layout: &Layout,
) -> CMatrix<T> {
    let d = m.dim();
    let k = layout.offsets.len();
    let mut out = CMatrix::zeros(d);
    let mut buf = vec![C::zero(); k];
    for row in 0..d {
        for &base in &layout.bases {
            for (s, &off) in layout.offsets.iter().enumerate() {
                buf[s] = m.get(row, base + off);
            }
            for (s, &off) in layout.offsets.iter().enumerate() {
                let mut acc = C::zero();
                for (sp, &v) in buf.iter().enumerate() {
                    acc += v * op.get(s, sp).conj();
                }
                out.set(row, base + off, acc);
            }
        }
    }
    out
}

/// `op · m · op†` on a subsystem.
pub(crate) fn conjugate_local<T: Real>(
    m: &CMatrix<T>,
    op: &CMatrix<T>,
    layout: &Layout,
) -> CMatrix<T> {
    apply_right_adjoint(&apply_left(m, op, layout), op, layout)
}
