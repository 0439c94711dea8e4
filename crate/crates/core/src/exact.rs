//! Exact linear algebra over the integers: determinants, `Tr(G_n^{-1})`, and
//! the integer matrix `n G_n^{-1}` built two independent ways.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{cyclotomic_poly, Modulus};
use crate::error::{Error, Result};
use crate::matrices::build_gram;

/// Square matrix of big integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BigIntMatrix {
    size: usize,
    entries: Vec<BigInt>,
}

impl BigIntMatrix {
    pub fn new(size: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), size * size, "entry count must be size^2");
        BigIntMatrix { size, entries }
    }

    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> BigInt) -> Self {
        let entries = (0..size * size).map(|k| f(k / size, k % size)).collect();
        BigIntMatrix { size, entries }
    }

    pub fn identity(size: usize) -> Self {
        Self::from_fn(size, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.size + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.size.max(1))
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows().map(<[BigInt]>::to_vec).collect()
    }

    pub fn trace(&self) -> BigInt {
        (0..self.size).map(|i| self.get(i, i)).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        BigIntMatrix {
            size: self.size,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn mul(&self, rhs: &BigIntMatrix) -> Self {
        assert_eq!(self.size, rhs.size, "dimension mismatch");
        let n = self.size;
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        BigIntMatrix::new(n, out)
    }
}

impl fmt::Display for BigIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

fn exact_div(num: &BigInt, den: &BigInt, context: &'static str) -> Result<BigInt> {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::InexactDivision { context })
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det_exact(matrix: &BigIntMatrix) -> Result<BigInt> {
    let n = matrix.size();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = matrix.to_rows();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = exact_div(&num, &prev, "Bareiss determinant")?;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

/// Determinant and adjugate by fraction-free Gauss-Jordan elimination of
/// `[A | Id]`. Ends with `[d Id | d A^{-1}]` where `d = ±det A`.
pub fn adjugate_bareiss(matrix: &BigIntMatrix) -> Result<(BigInt, BigIntMatrix)> {
    let n = matrix.size();
    let width = 2 * n;
    let mut a: Vec<Vec<BigInt>> = matrix
        .rows()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.to_vec();
            r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let r = (k + 1..n).find(|&r| !a[r][k].is_zero()).ok_or(Error::Singular)?;
            a.swap(k, r);
            negate = !negate;
        }
        let (before, rest) = a.split_at_mut(k);
        let (pivot_row, after) = rest.split_first_mut().unwrap();
        for row in before.iter_mut().chain(after.iter_mut()) {
            let factor = std::mem::take(&mut row[k]);
            for j in k + 1..width {
                let num = &pivot_row[k] * &row[j] - &factor * &pivot_row[j];
                row[j] = exact_div(&num, &prev, "Bareiss adjugate")?;
            }
        }
        prev = pivot_row[k].clone();
    }
    let det = if negate { -prev } else { prev };
    let adj = BigIntMatrix::from_fn(n, |i, j| {
        let v = a[i][n + j].clone();
        if negate {
            -v
        } else {
            v
        }
    });
    Ok((det, adj))
}

/// First column of the adjugate of the symmetric Toeplitz matrix with the
/// given first row, and its determinant.
///
/// Fraction-free order recursion over leading blocks: with `D_k` the k-th
/// leading principal minor and `u_k` the first adjugate column of that block,
///
/// ```text
/// η       = Σ_i t_{k-i} u_k[i]
/// D_{k+1} = (D_k² - η²) / D_{k-1}
/// u_{k+1} = (D_k [u_k; 0] - η [0; reverse(u_k)]) / D_{k-1}
/// ```
///
/// All divisions are exact. Needs every leading minor to be nonzero, which
/// holds for positive definite input.
pub fn toeplitz_cofactor_column(first_row: &[BigInt]) -> Result<(BigInt, Vec<BigInt>)> {
    let m = first_row.len();
    if m == 0 {
        return Ok((BigInt::one(), Vec::new()));
    }
    let mut d_prev = BigInt::one();
    let mut d = first_row[0].clone();
    let mut u = vec![BigInt::one()];
    for k in 1..m {
        if d.is_zero() {
            return Err(Error::Singular);
        }
        let eta: BigInt = u.iter().enumerate().map(|(i, ui)| &first_row[k - i] * ui).sum();
        let mut next = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let head = if i < k { &d * &u[i] } else { BigInt::zero() };
            let tail = if i > 0 { &eta * &u[k - i] } else { BigInt::zero() };
            next.push(exact_div(&(head - tail), &d_prev, "Toeplitz cofactor column")?);
        }
        let d_next = exact_div(&(&d * &d - &eta * &eta), &d_prev, "Toeplitz determinant")?;
        d_prev = std::mem::replace(&mut d, d_next);
        u = next;
    }
    Ok((d, u))
}

/// Determinant and full adjugate of a symmetric Toeplitz matrix from its
/// first adjugate column, using the Gohberg-Semencul representation
/// `adj = (A Aᵀ - B Bᵀ) / u_0` with `A`, `B` lower-triangular Toeplitz with
/// first columns `u` and `(0, u_{m-1}, ..., u_1)`.
pub fn toeplitz_adjugate(first_row: &[BigInt]) -> Result<(BigInt, BigIntMatrix)> {
    let m = first_row.len();
    let (det, u) = toeplitz_cofactor_column(first_row)?;
    if m == 0 {
        return Ok((det, BigIntMatrix::identity(0)));
    }
    let b = |s: usize| if s == 0 { BigInt::zero() } else { u[m - s].clone() };
    // raw(i, j) = raw(i-1, j-1) + u_i u_j - b_i b_j
    let mut raw = vec![BigInt::zero(); m * m];
    for i in 0..m {
        for j in i..m {
            let mut v = &u[i] * &u[j] - b(i) * b(j);
            if i > 0 {
                v += &raw[(i - 1) * m + j - 1];
            }
            raw[i * m + j] = v;
        }
    }
    let u0 = u[0].clone();
    let mut entries = vec![BigInt::zero(); m * m];
    for i in 0..m {
        for j in i..m {
            let v = exact_div(&raw[i * m + j], &u0, "Gohberg-Semencul adjugate")?;
            entries[j * m + i] = v.clone();
            entries[i * m + j] = v;
        }
    }
    Ok((det, BigIntMatrix::new(m, entries)))
}

/// `Tr(G_n^{-1})` exactly. Uses `Tr(T^{-1}) = Σ_k (m - 2k) u_k² / (u_0 det T)`
/// for symmetric Toeplitz `T` with first adjugate column `u`.
pub fn inverse_trace_exact(n: &Modulus) -> Result<BigRational> {
    let gram = build_gram(n);
    let (det, u) = toeplitz_cofactor_column(&gram.first_row_bigint())?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let m = gram.m as i64;
    let num: BigInt = u
        .iter()
        .enumerate()
        .map(|(k, uk)| BigInt::from(m - 2 * k as i64) * uk * uk)
        .sum();
    Ok(BigRational::new(num, &u[0] * det))
}

/// `n G_n^{-1}` from the exact adjugate of `G_n`, checked entrywise for
/// integrality. A non-integral entry is reported, never rounded.
pub fn scaled_inverse(n: &Modulus) -> Result<BigIntMatrix> {
    let gram = build_gram(n);
    let (det, adj) = toeplitz_adjugate(&gram.first_row_bigint())?;
    scale_adjugate(n.get(), &det, &adj)
}

/// `n adj / det`, failing with `NonIntegral` on the first fractional entry.
fn scale_adjugate(n: u64, det: &BigInt, adj: &BigIntMatrix) -> Result<BigIntMatrix> {
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let nn = BigInt::from(n);
    let size = adj.size();
    let mut entries = Vec::with_capacity(size * size);
    for (k, a) in adj.entries().iter().enumerate() {
        let scaled = &nn * a;
        let (q, r) = scaled.div_rem(det);
        if !r.is_zero() {
            return Err(Error::NonIntegral {
                n,
                row: k / size + 1,
                col: k % size + 1,
                value: BigRational::new(scaled, det.clone()).to_string(),
            });
        }
        entries.push(q);
    }
    Ok(BigIntMatrix::new(size, entries))
}

/// `S[i][ℓ]`: the coefficient of `x^{i-1}` in `x^ℓ mod Φ_n`, for
/// `1 <= i <= m` and `0 <= ℓ <= n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct STable {
    pub n: Modulus,
    pub m: usize,
    values: Vec<Vec<BigInt>>,
}

impl STable {
    /// `S[i][ℓ]` with the 1-based row index `i`.
    pub fn get(&self, i: usize, l: usize) -> &BigInt {
        &self.values[i - 1][l]
    }

    /// Row `i` (1-based), `ℓ = 0..=n`.
    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.values[i - 1]
    }
}

/// Iterated reduction: multiply the residue of `x^ℓ` by `x` and cancel the
/// degree-`m` term with the monic `Φ_n`.
pub fn build_s_table(n: &Modulus) -> Result<STable> {
    let phi = cyclotomic_poly(n)?;
    let m = phi.degree();
    let coeffs = phi.coefficients();
    let len = n.get() as usize + 1;
    let mut values = vec![Vec::with_capacity(len); m];
    let mut residue = vec![BigInt::zero(); m];
    residue[0] = BigInt::one();
    for _ in 0..len {
        for (row, r) in values.iter_mut().zip(&residue) {
            row.push(r.clone());
        }
        let lead = residue.pop().unwrap();
        residue.insert(0, BigInt::zero());
        if !lead.is_zero() {
            for (r, c) in residue.iter_mut().zip(coeffs) {
                *r -= &lead * c;
            }
        }
    }
    Ok(STable {
        n: n.clone(),
        m,
        values,
    })
}

/// Entry `(i, j)` is `Σ_{ℓ=1}^{n} S[i][ℓ] S[j][ℓ]`; integer arithmetic only.
pub fn scaled_inverse_via_recurrence(n: &Modulus) -> Result<BigIntMatrix> {
    let table = build_s_table(n)?;
    let m = table.m;
    let mut entries = vec![BigInt::zero(); m * m];
    for i in 0..m {
        for j in i..m {
            let v: BigInt = table.values[i][1..]
                .iter()
                .zip(&table.values[j][1..])
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .map(|(a, b)| a * b)
                .sum();
            entries[j * m + i] = v.clone();
            entries[i * m + j] = v;
        }
    }
    Ok(BigIntMatrix::new(m, entries))
}

/// `Tr(n G_n^{-1})` for `n = from..=to`.
pub fn trace_sequence(from: u64, to: u64) -> Result<Vec<BigInt>> {
    if from == 0 || from > to {
        return Err(Error::EmptyRange { from, to });
    }
    (from..=to)
        .map(|n| Ok(scaled_inverse(&Modulus::new(n)?)?.trace()))
        .collect()
}

/// `det G_n = h^m det(G_{rad n})^h` with `h = n / rad(n)`, `m = φ(n)`.
pub fn radical_det_check(n: &Modulus) -> Result<bool> {
    let h = n.cofactor();
    let m = n.phi();
    let full = det_exact(&build_gram(n).to_bigint_matrix())?;
    let reduced = det_exact(&build_gram(&n.radical_modulus()).to_bigint_matrix())?;
    let expected = num_traits::pow(BigInt::from(h), m as usize) * num_traits::pow(reduced, h as usize);
    Ok(full == expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::structured_det;
    use proptest::prelude::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn mat(rows: &[&[i64]]) -> BigIntMatrix {
        BigIntMatrix::from_fn(rows.len(), |i, j| BigInt::from(rows[i][j]))
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    fn cofactor_det(rows: &[Vec<BigInt>]) -> BigInt {
        let k = rows.len();
        if k == 0 {
            return BigInt::one();
        }
        (0..k)
            .map(|c| {
                let minor: Vec<Vec<BigInt>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = &rows[0][c] * cofactor_det(&minor);
                if c % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    #[test]
    fn det_examples() {
        assert_eq!(det_exact(&BigIntMatrix::identity(3)).unwrap(), BigInt::one());
        assert_eq!(det_exact(&build_gram(&m(3)).to_bigint_matrix()).unwrap(), BigInt::from(3));
        let g7 = build_gram(&m(7)).to_bigint_matrix();
        assert_eq!(det_exact(&g7).unwrap(), BigInt::from(7).pow(5));
        assert_eq!(cofactor_det(&g7.to_rows()), BigInt::from(7).pow(5));
        assert_eq!(det_exact(&mat(&[&[0, 1], &[1, 0]])).unwrap(), BigInt::from(-1));
        assert_eq!(det_exact(&mat(&[&[1, 2], &[2, 4]])).unwrap(), BigInt::zero());
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactor_expansion(size in 1usize..=6, seed in prop::collection::vec(-9i64..=9, 36)) {
            let a = BigIntMatrix::from_fn(size, |i, j| BigInt::from(seed[i * 6 + j]));
            prop_assert_eq!(det_exact(&a).unwrap(), cofactor_det(&a.to_rows()));
        }

        #[test]
        fn bareiss_adjugate_inverts(size in 1usize..=6, seed in prop::collection::vec(-9i64..=9, 36)) {
            let a = BigIntMatrix::from_fn(size, |i, j| BigInt::from(seed[i * 6 + j]));
            let det = cofactor_det(&a.to_rows());
            match adjugate_bareiss(&a) {
                Ok((d, adj)) => {
                    prop_assert_eq!(&d, &det);
                    prop_assert_eq!(a.mul(&adj), BigIntMatrix::identity(size).scale(&det));
                }
                Err(e) => {
                    prop_assert_eq!(e, Error::Singular);
                    prop_assert!(det.is_zero());
                }
            }
        }

        #[test]
        fn toeplitz_route_matches_bareiss(size in 1usize..=7, diag in 20i64..40, rest in prop::collection::vec(-3i64..=3, 7)) {
            // diagonally dominant, so positive definite
            let mut row: Vec<BigInt> = rest[..size].iter().map(|&v| BigInt::from(v)).collect();
            row[0] = BigInt::from(diag);
            let t = BigIntMatrix::from_fn(size, |i, j| row[i.abs_diff(j)].clone());
            let (d1, adj1) = adjugate_bareiss(&t).unwrap();
            let (d2, adj2) = toeplitz_adjugate(&row).unwrap();
            prop_assert_eq!(d1, d2);
            prop_assert_eq!(adj1, adj2);
        }
    }

    #[test]
    fn structured_det_via_bareiss() {
        let a = BigIntMatrix::from_fn(4, |i, j| BigInt::from(if i == j { 5 } else { -1 }));
        assert_eq!(det_exact(&a).unwrap(), structured_det(BigInt::from(5), BigInt::from(-1), 4));
    }

    #[test]
    fn inverse_trace_examples() {
        assert_eq!(inverse_trace_exact(&m(1)).unwrap(), rat(1, 1));
        assert_eq!(inverse_trace_exact(&m(3)).unwrap(), rat(4, 3));
        assert_eq!(inverse_trace_exact(&m(4)).unwrap(), rat(1, 1));
    }

    #[test]
    fn scaled_inverse_examples() {
        assert_eq!(scaled_inverse(&m(1)).unwrap(), mat(&[&[1]]));
        assert_eq!(scaled_inverse(&m(3)).unwrap(), mat(&[&[2, 1], &[1, 2]]));
        assert_eq!(scaled_inverse(&m(4)).unwrap(), mat(&[&[2, 0], &[0, 2]]));
    }

    #[test]
    fn s_table_examples() {
        let t4 = build_s_table(&m(4)).unwrap();
        let expect: Vec<BigInt> = [1, 0, -1, 0, 1].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(t4.row(1), expect.as_slice());
        let t3 = build_s_table(&m(3)).unwrap();
        let expect: Vec<BigInt> = [0, 1, -1, 0].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(t3.row(2), expect.as_slice());
        for n in 1..=60 {
            let t = build_s_table(&m(n)).unwrap();
            for i in 1..=t.m {
                for l in 0..t.m {
                    assert_eq!(*t.get(i, l), BigInt::from(i64::from(l + 1 == i)));
                }
                assert_eq!(t.get(i, n as usize), t.get(i, 0));
            }
        }
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(scaled_inverse_via_recurrence(&m(1)).unwrap(), mat(&[&[1]]));
        assert_eq!(scaled_inverse_via_recurrence(&m(3)).unwrap(), mat(&[&[2, 1], &[1, 2]]));
        assert_eq!(scaled_inverse_via_recurrence(&m(4)).unwrap(), mat(&[&[2, 0], &[0, 2]]));
    }

    #[test]
    fn toeplitz_and_bareiss_agree_on_gram() {
        for n in 1..=60 {
            let g = build_gram(&m(n));
            let bareiss = adjugate_bareiss(&g.to_bigint_matrix()).unwrap();
            let toeplitz = toeplitz_adjugate(&g.first_row_bigint()).unwrap();
            assert_eq!(bareiss, toeplitz, "n = {n}");
        }
    }

    #[test]
    fn trace_sequence_examples() {
        let seq = trace_sequence(1, 3).unwrap();
        assert_eq!(seq, vec![BigInt::from(1), BigInt::from(2), BigInt::from(4)]);
        assert_eq!(trace_sequence(1, 1).unwrap(), vec![BigInt::one()]);
        assert_eq!(trace_sequence(5, 2), Err(Error::EmptyRange { from: 5, to: 2 }));
        for p in (2..=30).filter(|&p| m(p).is_prime()) {
            let t = scaled_inverse(&m(p)).unwrap().trace();
            assert_eq!(t, BigInt::from(2 * (p - 1)));
        }
    }

    #[test]
    fn trace_consistency() {
        for n in 1..=100u64 {
            let md = m(n);
            let t = BigRational::from_integer(scaled_inverse(&md).unwrap().trace());
            let expected = inverse_trace_exact(&md).unwrap() * BigRational::from_integer(BigInt::from(n));
            assert_eq!(t, expected, "n = {n}");
        }
    }

    #[test]
    fn radical_det() {
        for n in [4, 8, 12, 18, 50, 72] {
            assert!(radical_det_check(&m(n)).unwrap());
        }
    }

    #[test]
    fn non_integral_entry_aborts() {
        // 7 * [[2, 1], [1, 2]] / 3 is not integral
        let adj = mat(&[&[2, 1], &[1, 2]]);
        let err = scale_adjugate(7, &BigInt::from(3), &adj).unwrap_err();
        assert_eq!(err, Error::NonIntegral { n: 7, row: 1, col: 1, value: "14/3".into() });
        assert_eq!(scale_adjugate(3, &BigInt::from(3), &adj).unwrap(), adj);
        assert_eq!(scale_adjugate(3, &BigInt::zero(), &adj), Err(Error::Singular));
    }
}
