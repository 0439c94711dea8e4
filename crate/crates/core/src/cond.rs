//! Frobenius condition number of `V_n`, four ways:
//!
//! * `float`: `‖V_n‖ ‖V_n^{-1}‖` with a numeric inverse,
//! * `exact`: `Cond² = m² Tr(G_n^{-1})` as a rational,
//! * `reduced`: `(n / rad n) Cond(V_{rad n})`, exact on the radical,
//! * `closed form`: `φ(n) sqrt(2 (1 - 1/p))` for `n = p^k` and `n = 2^k p^l`.
//!
//! Exact values are carried squared so every identity is a rational equality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::arith::Modulus;
use crate::error::{Error, Result};
use crate::exact::inverse_trace_exact;
use crate::matrices::{build_vandermonde, frobenius_norm};

/// Relative tolerance for float routes against the exact value.
pub const FLOAT_AGREEMENT: f64 = 1e-8;

pub fn cond_float(n: &Modulus) -> Result<f64> {
    let v = build_vandermonde(n);
    let inv = v.inverse()?;
    Ok(frobenius_norm(&v) * frobenius_norm(&inv))
}

fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `Cond(V_n)² = m² Tr(G_n^{-1})`.
pub fn cond_exact_sq(n: &Modulus) -> Result<BigRational> {
    let m = int(n.phi());
    Ok(&m * &m * inverse_trace_exact(n)?)
}

fn sqrt_rational(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN).sqrt()
}

/// `(n / rad n)² Cond(V_{rad n})²`, exactly.
pub fn cond_reduced_sq(n: &Modulus) -> Result<BigRational> {
    let h = int(n.cofactor());
    Ok(&h * &h * cond_exact_sq(&n.radical_modulus())?)
}

/// `(n / rad n) Cond(V_{rad n})`.
pub fn cond_reduced(n: &Modulus) -> Result<f64> {
    let base = sqrt_rational(&cond_exact_sq(&n.radical_modulus())?);
    Ok(n.cofactor() as f64 * base)
}

/// The prime `p` for which the closed form applies: `n = p^k` (any prime),
/// or `n = 2^k p^l` with `p` odd. `n = 1` has no such prime.
pub fn closed_form_prime(n: &Modulus) -> Option<u64> {
    match n.factorization() {
        [(p, _)] => Some(*p),
        [(2, _), (p, _)] => Some(*p),
        _ => None,
    }
}

/// `Cond(V_n)² = 2 φ(n)² (1 - 1/p)` where it applies; `1` for `n = 1`.
pub fn cond_closed_form_sq(n: &Modulus) -> Option<BigRational> {
    if n.get() == 1 {
        return Some(BigRational::one());
    }
    let p = closed_form_prime(n)?;
    let phi = int(n.phi());
    Some(int(2) * &phi * &phi * (BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(p))))
}

pub fn cond_closed_form(n: &Modulus) -> Option<f64> {
    if n.get() == 1 {
        return Some(1.0);
    }
    let p = closed_form_prime(n)? as f64;
    Some(n.phi() as f64 * (2.0 * (1.0 - 1.0 / p)).sqrt())
}

/// `Cond(V_p) = (p - 1) sqrt(2 (1 - 1/p))`.
pub fn cond_prime_closed_form(p: &Modulus) -> Result<f64> {
    if !p.is_prime() {
        return Err(Error::NotPrime(p.get()));
    }
    let pf = p.get() as f64;
    Ok((pf - 1.0) * (2.0 * (1.0 - 1.0 / pf)).sqrt())
}

/// Earlier upper bound `2 (p - 1) φ(n)`, stated for `n = p^k`.
pub fn prior_bound(n: &Modulus) -> Option<f64> {
    let (p, _) = n.prime_power()?;
    Some(2.0 * (p - 1) as f64 * n.phi() as f64)
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs()
}

/// Pairwise agreement of the routes. Exact-vs-exact comparisons are
/// equalities of rationals; float-vs-exact use [`FLOAT_AGREEMENT`].
#[derive(Debug, Clone, PartialEq)]
pub struct Agreement {
    pub float_vs_exact: bool,
    pub reduced_vs_exact: bool,
    pub reduced_float_vs_exact: bool,
    pub closed_form_vs_exact: Option<bool>,
    pub closed_form_float_vs_exact: Option<bool>,
    pub below_prior_bound: Option<bool>,
}

impl Agreement {
    pub fn all(&self) -> bool {
        self.float_vs_exact
            && self.reduced_vs_exact
            && self.reduced_float_vs_exact
            && self.closed_form_vs_exact.unwrap_or(true)
            && self.closed_form_float_vs_exact.unwrap_or(true)
            && self.below_prior_bound.unwrap_or(true)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub n: Modulus,
    pub m: u64,
    pub cond_sq_exact: BigRational,
    pub cond_exact: f64,
    pub cond_float: f64,
    pub cond_closed_form: Option<f64>,
    pub cond_reduced_float: f64,
    pub prior_bound: Option<f64>,
    pub agreement: Agreement,
}

pub fn cond_report(n: &Modulus) -> Result<ConditionReport> {
    let exact_sq = cond_exact_sq(n)?;
    let exact = sqrt_rational(&exact_sq);
    let float = cond_float(n)?;
    let reduced_sq = cond_reduced_sq(n)?;
    let reduced = cond_reduced(n)?;
    let closed_sq = cond_closed_form_sq(n);
    let closed = cond_closed_form(n);
    let bound = prior_bound(n);
    let agreement = Agreement {
        float_vs_exact: rel_close(float, exact, FLOAT_AGREEMENT),
        reduced_vs_exact: reduced_sq == exact_sq,
        reduced_float_vs_exact: rel_close(reduced, exact, FLOAT_AGREEMENT),
        closed_form_vs_exact: closed_sq.map(|c| c == exact_sq),
        closed_form_float_vs_exact: closed.map(|c| rel_close(c, exact, FLOAT_AGREEMENT)),
        below_prior_bound: bound.map(|b| exact < b),
    };
    Ok(ConditionReport {
        n: n.clone(),
        m: n.phi(),
        cond_sq_exact: exact_sq,
        cond_exact: exact,
        cond_float: float,
        cond_closed_form: closed,
        cond_reduced_float: reduced,
        prior_bound: bound,
        agreement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    fn near(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-6
    }

    #[test]
    fn float_examples() {
        assert!(near(cond_float(&m(1)).unwrap(), 1.0));
        assert!(near(cond_float(&m(4)).unwrap(), 2.0));
        assert!(near(cond_float(&m(3)).unwrap(), 2.309401));
    }

    #[test]
    fn exact_examples() {
        assert_eq!(cond_exact_sq(&m(1)).unwrap(), rat(1, 1));
        assert_eq!(cond_exact_sq(&m(3)).unwrap(), rat(16, 3));
        assert_eq!(cond_exact_sq(&m(12)).unwrap(), rat(64, 3));
    }

    #[test]
    fn reduced_examples() {
        let c15 = cond_exact_sq(&m(15)).unwrap().to_f64().unwrap().sqrt();
        assert_eq!(cond_reduced(&m(15)).unwrap(), c15);
        assert!(near(cond_reduced(&m(4)).unwrap(), 2.0));
        assert!(near(cond_reduced(&m(12)).unwrap(), 4.618802));
    }

    #[test]
    fn closed_form_examples() {
        assert!(near(cond_closed_form(&m(9)).unwrap(), 6.928203));
        assert_eq!(cond_closed_form(&m(15)), None);
        assert!(near(cond_closed_form(&m(12)).unwrap(), 4.618802));
        assert_eq!(cond_closed_form(&m(1)), Some(1.0));
        assert_eq!(cond_closed_form(&m(16)), Some(8.0));
        assert_eq!(cond_closed_form_sq(&m(12)), Some(rat(64, 3)));
    }

    #[test]
    fn prime_closed_form() {
        assert!(near(cond_prime_closed_form(&m(2)).unwrap(), 1.0));
        assert!(near(cond_prime_closed_form(&m(3)).unwrap(), 4.0 / 3f64.sqrt()));
        assert!(near(cond_prime_closed_form(&m(5)).unwrap(), 5.059644));
        assert!(near(cond_float(&m(5)).unwrap(), 5.059644));
        assert_eq!(cond_prime_closed_form(&m(6)), Err(Error::NotPrime(6)));
    }

    #[test]
    fn report_examples() {
        let r4 = cond_report(&m(4)).unwrap();
        for v in [r4.cond_exact, r4.cond_float, r4.cond_reduced_float, r4.cond_closed_form.unwrap()] {
            assert!(near(v, 2.0));
        }
        assert!(r4.agreement.all());

        let r25 = cond_report(&m(25)).unwrap();
        assert!(near(r25.cond_closed_form.unwrap(), 20.0 * 1.6f64.sqrt()));
        assert_eq!(r25.prior_bound, Some(160.0));
        assert!(r25.cond_closed_form.unwrap() < 160.0);
        assert!(r25.agreement.all());

        let r105 = cond_report(&m(105)).unwrap();
        assert_eq!(r105.cond_closed_form, None);
        assert!(r105.agreement.float_vs_exact);
        assert!(r105.agreement.all());
    }

    #[test]
    fn radical_reduction_exact() {
        for n in 1..=200 {
            let md = m(n);
            assert_eq!(cond_exact_sq(&md).unwrap(), cond_reduced_sq(&md).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn doubling_odd_modulus_keeps_condition() {
        for n in (1..=199).step_by(2) {
            assert_eq!(cond_exact_sq(&m(n)).unwrap(), cond_exact_sq(&m(2 * n)).unwrap());
        }
    }

    #[test]
    fn closed_form_matches_exact() {
        for n in 1..=200 {
            let md = m(n);
            if let Some(c) = cond_closed_form_sq(&md) {
                assert_eq!(cond_exact_sq(&md).unwrap(), c, "n = {n}");
            }
        }
    }
}
