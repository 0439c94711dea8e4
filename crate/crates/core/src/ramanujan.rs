//! Ramanujan sums `c_n(t)`, the sum of the `t`-th powers of the primitive
//! `n`-th roots of unity.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_integer::Integer;

use crate::arith::Modulus;
use crate::error::{Error, Result};

const ORACLE_TOLERANCE: f64 = 1e-6;

/// First row of the Gram matrix: `c_n(0), ..., c_n(m - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamanujanRow {
    pub n: Modulus,
    pub values: Vec<i64>,
}

impl RamanujanRow {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn reduce(n: u64, t: i64) -> u64 {
    t.rem_euclid(n as i64) as u64
}

/// `c_n(t) = μ(n/g) φ(n) / φ(n/g)` with `g = gcd(n, t mod n)` and
/// `gcd(n, 0) = n`.
pub fn ramanujan_sum(n: &Modulus, t: i64) -> i64 {
    let g = reduce(n.get(), t).gcd(&n.get());
    let q = n
        .factorization()
        .iter()
        .filter(|&&(p, e)| g % p.pow(e) != 0)
        .map(|&(p, e)| {
            // exponent of p in n / g
            let mut k = 0;
            let mut rest = g;
            while rest % p == 0 {
                rest /= p;
                k += 1;
            }
            (p, e - k)
        })
        .collect::<Vec<_>>();
    if q.iter().any(|&(_, e)| e > 1) {
        return 0;
    }
    // n/g is squarefree here, so φ(n/g) = ∏ (p - 1)
    let phi_q: u64 = q.iter().map(|&(p, _)| p - 1).product();
    let sign = if q.len() % 2 == 0 { 1 } else { -1 };
    sign * (n.phi() / phi_q) as i64
}

/// Direct summation `Σ ζ_i^t` in floating point; the oracle for
/// [`ramanujan_sum`].
pub fn ramanujan_sum_direct(n: &Modulus, t: i64) -> Result<i64> {
    let nn = n.get();
    let t_red = reduce(nn, t);
    let sum: Complex64 = n
        .coprime_residues()
        .into_iter()
        .map(|a| {
            let k = ((a as u128 * t_red as u128) % nn as u128) as f64;
            Complex64::from_polar(1.0, TAU * k / nn as f64)
        })
        .sum();
    let rounded = sum.re.round();
    let residue = sum.im.abs().max((sum.re - rounded).abs());
    if residue >= ORACLE_TOLERANCE {
        return Err(Error::OracleTolerance {
            n: nn,
            t,
            residue,
        });
    }
    Ok(rounded as i64)
}

pub fn ramanujan_row(n: &Modulus) -> RamanujanRow {
    let values = (0..n.phi() as i64).map(|t| ramanujan_sum(n, t)).collect();
    RamanujanRow {
        n: n.clone(),
        values,
    }
}
