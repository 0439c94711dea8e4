//! Elementary arithmetic functions of the modulus and exact cyclotomic
//! polynomials.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A positive integer together with its prime factorization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Modulus {
    n: u64,
    factorization: Vec<(u64, u32)>,
}

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        let factorization = factorize(n)?;
        Ok(Modulus { n, factorization })
    }

    pub fn get(&self) -> u64 {
        self.n
    }

    /// Prime factorization as ascending `(prime, exponent)` pairs.
    pub fn factorization(&self) -> &[(u64, u32)] {
        &self.factorization
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factorization.iter().map(|&(p, _)| p)
    }

    /// `m = φ(n)`, the size of every matrix attached to `n`.
    pub fn phi(&self) -> u64 {
        euler_phi(self)
    }

    pub fn moebius(&self) -> i64 {
        moebius(self)
    }

    pub fn radical(&self) -> u64 {
        radical(self)
    }

    /// `rad(n)` as a modulus; its factorization is read off ours.
    pub fn radical_modulus(&self) -> Modulus {
        Modulus {
            n: self.radical(),
            factorization: self.factorization.iter().map(|&(p, _)| (p, 1)).collect(),
        }
    }

    /// `h = n / rad(n)`.
    pub fn cofactor(&self) -> u64 {
        self.n / self.radical()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factorization.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_prime(&self) -> bool {
        matches!(self.factorization.as_slice(), [(_, 1)])
    }

    /// `Some((p, k))` when `n = p^k` with `k >= 1`.
    pub fn prime_power(&self) -> Option<(u64, u32)> {
        match self.factorization.as_slice() {
            [pe] => Some(*pe),
            _ => None,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.n % 2 == 1
    }

    pub fn coprime_residues(&self) -> Vec<u64> {
        coprime_residues(self)
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factorization {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)
    }
}

/// Prime factorization by trial division; empty for `n = 1`.
pub fn factorize(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::ZeroModulus(n));
    }
    let mut rest = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        out.push((rest, 1));
    }
    Ok(out)
}

pub fn euler_phi(n: &Modulus) -> u64 {
    n.factorization
        .iter()
        .map(|&(p, e)| p.pow(e - 1) * (p - 1))
        .product()
}

pub fn moebius(n: &Modulus) -> i64 {
    if !n.is_squarefree() {
        0
    } else if n.factorization.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn radical(n: &Modulus) -> u64 {
    n.primes().product()
}

/// The residues `a` in `[1, n]` with `gcd(a, n) = 1`, ascending. These fix
/// the order of the primitive roots `exp(2πi a / n)` everywhere in the crate.
pub fn coprime_residues(n: &Modulus) -> Vec<u64> {
    (1..=n.get()).filter(|a| a.gcd(&n.get()) == 1).collect()
}

/// Dense integer polynomial, coefficients in ascending degree, without
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        IntPolynomial { coefficients }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = -BigInt::one();
        c[n] = BigInt::one();
        Self::new(c)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coefficients.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    /// Quotient and remainder by a monic divisor; stays in `Z[x]`.
    pub fn div_rem_monic(&self, divisor: &IntPolynomial) -> (IntPolynomial, IntPolynomial) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let d = divisor.degree();
        if self.is_zero() || self.degree() < d {
            return (IntPolynomial::new(Vec::new()), self.clone());
        }
        let mut rem = self.coefficients.clone();
        let mut quot = vec![BigInt::zero(); self.degree() - d + 1];
        for k in (0..quot.len()).rev() {
            let lead = std::mem::take(&mut rem[k + d]);
            if lead.is_zero() {
                continue;
            }
            for (i, c) in divisor.coefficients[..d].iter().enumerate() {
                rem[k + i] -= &lead * c;
            }
            quot[k] = lead;
        }
        rem.truncate(d);
        (IntPolynomial::new(quot), IntPolynomial::new(rem))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = c.abs();
            match (k, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{abs}x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{abs}x^{k}")?,
            }
        }
        Ok(())
    }
}

type PolyCache = RwLock<HashMap<u64, Arc<IntPolynomial>>>;

fn cyclotomic_cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `Φ_n`, obtained as `(x^n - 1) / ∏_{d | n, d < n} Φ_d` by exact division in
/// `Z[x]`. Results are memoized process-wide.
pub fn cyclotomic_poly(n: &Modulus) -> Result<Arc<IntPolynomial>> {
    if let Some(p) = cyclotomic_cache().read().unwrap().get(&n.get()) {
        return Ok(Arc::clone(p));
    }
    let mut acc = IntPolynomial::x_pow_minus_one(n.get() as usize);
    for d in n.divisors() {
        if d == n.get() {
            continue;
        }
        let phi_d = cyclotomic_poly(&Modulus::new(d)?)?;
        let (q, r) = acc.div_rem_monic(&phi_d);
        if !r.is_zero() {
            return Err(Error::InexactDivision {
                context: "cyclotomic polynomial",
            });
        }
        acc = q;
    }
    let acc = Arc::new(acc);
    cyclotomic_cache()
        .write()
        .unwrap()
        .entry(n.get())
        .or_insert_with(|| Arc::clone(&acc));
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(1).unwrap(), vec![]);
        assert_eq!(factorize(12).unwrap(), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(97).unwrap(), vec![(97, 1)]);
        assert_eq!(factorize(0), Err(Error::ZeroModulus(0)));
        assert!(Modulus::new(0).is_err());
    }

    #[test]
    fn phi_moebius_radical() {
        assert_eq!(euler_phi(&m(1)), 1);
        assert_eq!(euler_phi(&m(12)), 4);
        assert_eq!(euler_phi(&m(200)), 80);
        assert_eq!(moebius(&m(1)), 1);
        assert_eq!(moebius(&m(4)), 0);
        assert_eq!(moebius(&m(30)), -1);
        assert_eq!(radical(&m(1)), 1);
        assert_eq!(radical(&m(12)), 6);
        assert_eq!(radical(&m(1008)), 42);
        assert_eq!(m(1008).cofactor(), 24);
    }

    #[test]
    fn residues() {
        assert_eq!(coprime_residues(&m(1)), vec![1]);
        assert_eq!(coprime_residues(&m(8)), vec![1, 3, 5, 7]);
        assert_eq!(coprime_residues(&m(9)), vec![1, 2, 4, 5, 7, 8]);
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(*cyclotomic_poly(&m(1)).unwrap(), IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(*cyclotomic_poly(&m(4)).unwrap(), IntPolynomial::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(&m(6)).unwrap().to_string(), "x^2 - x + 1");
    }

    #[test]
    fn phi_105_has_coefficient_minus_two() {
        let two = BigInt::from(-2);
        for n in 1..105 {
            let p = cyclotomic_poly(&m(n)).unwrap();
            assert!(p.coefficients().iter().all(|c| c.abs() <= BigInt::one()), "n = {n}");
        }
        let p = cyclotomic_poly(&m(105)).unwrap();
        assert_eq!(p.degree(), 48);
        assert!(p.coefficients().contains(&two));
    }

    #[test]
    fn divisor_sum_of_phi() {
        for n in 1..=500 {
            let md = m(n);
            let s: u64 = md.divisors().iter().map(|&d| euler_phi(&m(d))).sum();
            assert_eq!(s, n);
        }
    }

    #[test]
    fn product_of_cyclotomics_over_divisors() {
        for n in 1..=500u64 {
            let md = m(n);
            let p = cyclotomic_poly(&md).unwrap();
            assert!(p.is_monic());
            assert_eq!(p.degree() as u64, md.phi());
            let prod = md
                .divisors()
                .iter()
                .fold(IntPolynomial::from_i64(&[1]), |acc, &d| {
                    acc.mul(&cyclotomic_poly(&m(d)).unwrap())
                });
            assert_eq!(prod, IntPolynomial::x_pow_minus_one(n as usize), "n = {n}");
        }
    }

    #[test]
    fn moebius_multiplicative() {
        for a in 1..=100u64 {
            for b in 1..=100u64 {
                if a.gcd(&b) == 1 {
                    assert_eq!(moebius(&m(a * b)), moebius(&m(a)) * moebius(&m(b)));
                }
            }
        }
    }

    #[test]
    fn division_by_monic() {
        let num = IntPolynomial::from_i64(&[-1, 0, 0, 1]);
        let (q, r) = num.div_rem_monic(&IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(q, IntPolynomial::from_i64(&[1, 1, 1]));
        assert!(r.is_zero());
        let (_, r) = IntPolynomial::from_i64(&[1, 0, 1]).div_rem_monic(&IntPolynomial::from_i64(&[1, 1]));
        assert_eq!(r, IntPolynomial::from_i64(&[2]));
    }
}
