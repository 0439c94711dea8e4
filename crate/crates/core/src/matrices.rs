//! The cyclotomic Vandermonde matrix `V_n`, its Gram matrix `G_n = V_n* V_n`
//! and the structural facts about `G_n` (block structure over the radical,
//! sign similarity with `G_{2n}`, the spectrum of `G_p`).

use std::f64::consts::TAU;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Num, One, ToPrimitive, Zero};

use crate::arith::Modulus;
use crate::error::{Error, Result};
use crate::exact::{det_exact, BigIntMatrix};
use crate::ramanujan::{ramanujan_row, RamanujanRow};

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            entries: vec![Complex64::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut out = Self::zeros(size, size);
        for i in 0..size {
            out[(i, i)] = Complex64::one();
        }
        out
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let entries = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        ComplexMatrix { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..rhs.cols {
                    out.entries[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&x, &y| a[(x, k)].norm().total_cmp(&a[(y, k)].norm()))
                .unwrap();
            if a[(pivot, k)].norm() == 0.0 {
                return Err(Error::Singular);
            }
            a.swap_rows(k, pivot);
            inv.swap_rows(k, pivot);
            let scale = a[(k, k)].inv();
            for j in 0..n {
                a[(k, j)] *= scale;
                inv[(k, j)] *= scale;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let factor = a[(i, k)];
                if factor == Complex64::zero() {
                    continue;
                }
                for j in 0..n {
                    let (akj, ikj) = (a[(k, j)], inv[(k, j)]);
                    a[(i, j)] -= factor * akj;
                    inv[(i, j)] -= factor * ikj;
                }
            }
        }
        Ok(inv)
    }

    /// `ln |det A|` from a partially pivoted LU factorization.
    pub fn ln_abs_det(&self) -> Result<f64> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut acc = 0.0;
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&x, &y| a[(x, k)].norm().total_cmp(&a[(y, k)].norm()))
                .unwrap();
            let p = a[(pivot, k)];
            if p.norm() == 0.0 {
                return Err(Error::Singular);
            }
            a.swap_rows(k, pivot);
            acc += p.norm().ln();
            for i in k + 1..n {
                let factor = a[(i, k)] / p;
                for j in k..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= factor * akj;
                }
            }
        }
        Ok(acc)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.cols + j]
    }
}

/// `exp(2πi k / n)` with `k` already reduced modulo `n`.
fn root_of_unity(k: u64, n: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (k % n) as f64 / n as f64)
}

/// `V_n`: row `i` holds the powers `1, ζ_i, ..., ζ_i^{m-1}` of the `i`-th
/// primitive root, roots ordered by ascending residue.
pub fn build_vandermonde(n: &Modulus) -> ComplexMatrix {
    let residues = n.coprime_residues();
    let m = residues.len();
    let nn = n.get();
    ComplexMatrix::from_fn(m, m, |i, j| {
        root_of_unity(((residues[i] as u128 * j as u128) % nn as u128) as u64, nn)
    })
}

pub fn frobenius_norm(a: &ComplexMatrix) -> f64 {
    a.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `G_n`, stored as its first row; entry `(i, j)` is `c_n(|i - j|)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    pub n: Modulus,
    pub m: usize,
    pub first_row: RamanujanRow,
}

impl GramMatrix {
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.first_row.values[i.abs_diff(j)]
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    pub fn to_bigint_matrix(&self) -> BigIntMatrix {
        BigIntMatrix::from_fn(self.m, |i, j| BigInt::from(self.entry(i, j)))
    }

    pub fn first_row_bigint(&self) -> Vec<BigInt> {
        self.first_row.values.iter().map(|&v| BigInt::from(v)).collect()
    }

    pub fn trace(&self) -> i64 {
        self.first_row.values[0] * self.m as i64
    }
}

pub fn build_gram(n: &Modulus) -> GramMatrix {
    let first_row = ramanujan_row(n);
    GramMatrix {
        n: n.clone(),
        m: first_row.len(),
        first_row,
    }
}

/// Compares the float product `V_n* V_n` with the integer `G_n`, entrywise
/// within `1e-6 * n`.
pub fn gram_numeric_check(n: &Modulus) -> bool {
    let v = build_vandermonde(n);
    let product = v.conj_transpose().matmul(&v);
    let gram = build_gram(n);
    let tol = 1e-6 * n.get() as f64;
    (0..gram.m).all(|i| {
        (0..gram.m).all(|j| (product[(i, j)] - Complex64::from(gram.entry(i, j) as f64)).norm() < tol)
    })
}

/// Kronecker product of two dense integer matrices.
pub fn kronecker(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (ar, br) = (a.len(), b.len());
    let ac = a.first().map_or(0, Vec::len);
    let bc = b.first().map_or(0, Vec::len);
    (0..ar * br)
        .map(|i| (0..ac * bc).map(|j| a[i / br][j / bc] * b[i % br][j % bc]).collect())
        .collect()
}

fn identity_i64(size: usize) -> Vec<Vec<i64>> {
    (0..size)
        .map(|i| (0..size).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// `G_n = h (G_{rad(n)} ⊗ Id_h)` with `h = n / rad(n)`, rows and columns
/// indexed from 0.
pub fn kronecker_check(n: &Modulus) -> bool {
    let rad = n.radical_modulus();
    let h = n.cofactor() as usize;
    let gram = build_gram(n);
    let reduced = build_gram(&rad);
    if reduced.m * h != gram.m {
        return false;
    }
    let blocks = kronecker(&reduced.to_dense(), &identity_i64(h));
    let scale = h as i64;
    (0..gram.m).all(|i| (0..gram.m).all(|j| gram.entry(i, j) == scale * blocks[i][j]))
}

/// `J^{-1} G_n J = G_{2n}` for odd `n`, `J = diag(1, -1, 1, ...)`.
pub fn j_similarity_check(n: &Modulus) -> Result<bool> {
    if !n.is_odd() {
        return Err(Error::EvenModulus(n.get()));
    }
    let gram = build_gram(n);
    let doubled = build_gram(&Modulus::new(2 * n.get())?);
    if doubled.m != gram.m {
        return Ok(false);
    }
    let sign = |i: usize| if i % 2 == 0 { 1 } else { -1 };
    // J^{-1} = J
    Ok((0..gram.m).all(|i| {
        (0..gram.m).all(|j| sign(i) * gram.entry(i, j) * sign(j) == doubled.entry(i, j))
    }))
}

/// Determinant of the `k x k` matrix with `a` on the diagonal and `b`
/// elsewhere: `(a - b)^{k-1} (a + (k-1) b)`. `k = 0` gives the empty
/// determinant 1.
pub fn structured_det<T: Num + Clone>(a: T, b: T, k: usize) -> T {
    if k == 0 {
        return T::one();
    }
    let diff = a.clone() - b.clone();
    let mut acc = T::one();
    for _ in 1..k {
        acc = acc * diff.clone();
    }
    let mut tail = a;
    for _ in 1..k {
        tail = tail + b.clone();
    }
    acc * tail
}

/// Distinct eigenvalues (ascending) with multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub pairs: Vec<(f64, usize)>,
}

impl Spectrum {
    pub fn dimension(&self) -> usize {
        self.pairs.iter().map(|&(_, k)| k).sum()
    }

    /// `Σ μ_i / σ_i`, i.e. `Tr(G^{-1})`.
    pub fn inverse_sum(&self) -> f64 {
        self.pairs.iter().map(|&(s, k)| k as f64 / s).sum()
    }

    /// Same multiplicities and eigenvalues within `rel * λ_max`.
    pub fn approx_eq(&self, other: &Spectrum, rel: f64) -> bool {
        let scale = self
            .pairs
            .last()
            .map_or(0.0, |p| p.0)
            .max(other.pairs.last().map_or(0.0, |p| p.0));
        self.pairs.len() == other.pairs.len()
            && self
                .pairs
                .iter()
                .zip(&other.pairs)
                .all(|(a, b)| a.1 == b.1 && (a.0 - b.0).abs() <= rel * scale)
    }
}

const CLUSTER_TOLERANCE: f64 = 1e-6;
const MIN_EIGENVALUE: f64 = 1e-9;

/// Eigenvalues of `G` from a symmetric eigensolver, clustered: adjacent
/// sorted values closer than `1e-6 * λ_max` share a cluster, reported as
/// `(mean, count)`.
pub fn spectrum_numeric(gram: &GramMatrix) -> Result<Spectrum> {
    let dense = DMatrix::from_fn(gram.m, gram.m, |i, j| gram.entry(i, j) as f64);
    let mut values: Vec<f64> = SymmetricEigen::new(dense).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    if let Some(&low) = values.first() {
        if low <= MIN_EIGENVALUE {
            return Err(Error::NotPositiveDefinite(low));
        }
    }
    let tol = CLUSTER_TOLERANCE * values.last().copied().unwrap_or(0.0);
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for v in values {
        match clusters.last_mut() {
            Some(c) if v - c.last().unwrap() < tol => c.push(v),
            _ => clusters.push(vec![v]),
        }
    }
    let pairs = clusters
        .into_iter()
        .map(|c| (c.iter().sum::<f64>() / c.len() as f64, c.len()))
        .collect();
    Ok(Spectrum { pairs })
}

/// `Σ_{ℓ=1}^{n} (ζ_k conj(ζ_h))^ℓ = n δ_{kh}` within `1e-6 * n`.
pub fn orthogonality_check(n: &Modulus) -> bool {
    let residues = n.coprime_residues();
    let nn = n.get();
    let tol = 1e-6 * nn as f64;
    residues.iter().enumerate().all(|(k, &ak)| {
        residues.iter().enumerate().all(|(h, &ah)| {
            // ζ_k conj(ζ_h) = exp(2πi (a_k - a_h) / n)
            let d = (ak + nn - ah) % nn;
            let sum: Complex64 = (1..=nn)
                .map(|l| root_of_unity(((d as u128 * l as u128) % nn as u128) as u64, nn))
                .sum();
            let expected = if k == h { nn as f64 } else { 0.0 };
            (sum - expected).norm() < tol
        })
    })
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top: BigInt = x >> shift;
    let mantissa = top.to_f64().unwrap();
    mantissa.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `|det V_n|^2 = det G_n` to relative `1e-6`, compared through logarithms
/// because `det G_n` overflows `f64` quickly.
pub fn vandermonde_det_check(n: &Modulus) -> Result<bool> {
    let ln_v = build_vandermonde(n).ln_abs_det()?;
    let det_g = det_exact(&build_gram(n).to_bigint_matrix())?;
    if det_g <= BigInt::zero() {
        return Ok(false);
    }
    let diff = 2.0 * ln_v - ln_bigint(&det_g);
    Ok(diff.exp_m1().abs() <= 1e-6)
}

/// For prime `p`: `(G_p - p Id)(G_p - Id) = 0` and `Tr(G_p) = (p - 1)^2`,
/// which pins the spectrum to `p` (multiplicity `p - 2`) and `1`.
pub fn prime_spectrum_check(p: &Modulus) -> Result<bool> {
    if !p.is_prime() {
        return Err(Error::NotPrime(p.get()));
    }
    let gram = build_gram(p).to_bigint_matrix();
    let size = gram.size();
    let pp = BigInt::from(p.get());
    let shifted = |c: &BigInt| {
        BigIntMatrix::from_fn(size, |i, j| {
            let d = if i == j { c.clone() } else { BigInt::zero() };
            gram.get(i, j) - d
        })
    };
    let product = shifted(&pp).mul(&shifted(&BigInt::one()));
    let trace_ok = gram.trace() == BigInt::from((p.get() - 1).pow(2));
    Ok(trace_ok && product.entries().iter().all(Zero::is_zero))
}
