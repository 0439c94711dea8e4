//! Exhaustive per-`n` checks of every identity the crate relies on, grouped
//! into named suites.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::arith::Modulus;
use crate::cond::{
    cond_closed_form, cond_closed_form_sq, cond_exact_sq, cond_float, cond_reduced_sq, prior_bound, FLOAT_AGREEMENT,
};
use crate::error::{Error, Result};
use crate::exact::{
    build_s_table, inverse_trace_exact, radical_det_check, scaled_inverse, scaled_inverse_via_recurrence, BigIntMatrix,
};
use crate::matrices::{
    build_gram, gram_numeric_check, j_similarity_check, kronecker_check, orthogonality_check, prime_spectrum_check,
    spectrum_numeric, vandermonde_det_check,
};
use crate::ramanujan::{ramanujan_sum, ramanujan_sum_direct};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Ramanujan,
    Gram,
    Kronecker,
    Similarity,
    Theorem1,
    Theorem2,
    Theorem3,
    Orthogonality,
    Spectrum,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Ramanujan,
        Suite::Gram,
        Suite::Kronecker,
        Suite::Similarity,
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Theorem3,
        Suite::Orthogonality,
        Suite::Spectrum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ramanujan => "ramanujan",
            Suite::Gram => "gram",
            Suite::Kronecker => "kronecker",
            Suite::Similarity => "similarity",
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Theorem3 => "theorem3",
            Suite::Orthogonality => "orthogonality",
            Suite::Spectrum => "spectrum",
        }
    }

    /// Runs the suite at one modulus.
    pub fn check(self, n: &Modulus) -> Outcome {
        let result = match self {
            Suite::Ramanujan => check_ramanujan(n),
            Suite::Gram => check_gram(n),
            Suite::Kronecker => check_kronecker(n),
            Suite::Similarity => check_similarity(n),
            Suite::Theorem1 => check_theorem1(n),
            Suite::Theorem2 => check_theorem2(n),
            Suite::Theorem3 => check_theorem3(n),
            Suite::Orthogonality => Ok(expect(orthogonality_check(n), "orthogonality sums off")),
            Suite::Spectrum => check_spectrum(n),
        };
        result.unwrap_or_else(|e| Outcome::Fail(e.to_string()))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

/// Parses `all` or a comma-separated list of suite names.
pub fn parse_suites(spec: &str) -> std::result::Result<Vec<Suite>, String> {
    if spec.trim() == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    let mut out: Vec<Suite> = spec.split(',').map(|s| s.trim().parse()).collect::<std::result::Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// The suite does not apply to this modulus.
    Skip,
    Fail(String),
}

fn expect(ok: bool, why: &str) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(why.to_string())
    }
}

fn first_failure(checks: impl IntoIterator<Item = (bool, String)>) -> Outcome {
    checks
        .into_iter()
        .find(|(ok, _)| !ok)
        .map_or(Outcome::Pass, |(_, why)| Outcome::Fail(why))
}

fn check_ramanujan(n: &Modulus) -> Result<Outcome> {
    let nn = n.get() as i64;
    let phi = n.phi();
    let h = n.cofactor() as i64;
    for t in 0..nn {
        let c = ramanujan_sum(n, t);
        if c != ramanujan_sum_direct(n, t)? {
            return Ok(Outcome::Fail(format!("closed form differs from direct sum at t = {t}")));
        }
        if t % h != 0 && c != 0 {
            return Ok(Outcome::Fail(format!("c_n({t}) nonzero although h = {h} does not divide t")));
        }
    }
    for t in -2 * nn..=2 * nn {
        let c = ramanujan_sum(n, t);
        if c != ramanujan_sum(n, t + nn) || c != ramanujan_sum(n, -t) || c.unsigned_abs() > phi {
            return Ok(Outcome::Fail(format!("periodicity/evenness/bound fails at t = {t}")));
        }
    }
    for a in n.divisors() {
        let b = n.get() / a;
        if a.gcd(&b) != 1 {
            continue;
        }
        let (ma, mb) = (Modulus::new(a)?, Modulus::new(b)?);
        for t in 0..nn {
            if ramanujan_sum(n, t) != ramanujan_sum(&ma, t) * ramanujan_sum(&mb, t) {
                return Ok(Outcome::Fail(format!("not multiplicative for {a} * {b} at t = {t}")));
            }
        }
    }
    Ok(Outcome::Pass)
}

fn check_gram(n: &Modulus) -> Result<Outcome> {
    let g = build_gram(n);
    let symmetric = (0..g.m).all(|i| (0..i).all(|j| g.entry(i, j) == g.entry(j, i)));
    Ok(first_failure([
        (symmetric, "G_n not symmetric".into()),
        (g.first_row.values[0] as u64 == n.phi(), "c_n(0) != φ(n)".into()),
        (gram_numeric_check(n), "V_n* V_n differs from G_n".into()),
        (vandermonde_det_check(n)?, "|det V_n|² differs from det G_n".into()),
    ]))
}

fn check_kronecker(n: &Modulus) -> Result<Outcome> {
    let det_ok = n.is_squarefree() || radical_det_check(n)?;
    Ok(first_failure([
        (kronecker_check(n), "G_n != h (G_rad ⊗ Id_h)".into()),
        (det_ok, "det G_n != h^m det(G_rad)^h".into()),
    ]))
}

fn check_similarity(n: &Modulus) -> Result<Outcome> {
    if !n.is_odd() {
        return Ok(Outcome::Skip);
    }
    let doubled = Modulus::new(2 * n.get())?;
    let spectra_equal = spectrum_numeric(&build_gram(n))?.approx_eq(&spectrum_numeric(&build_gram(&doubled))?, 1e-6);
    Ok(first_failure([
        (j_similarity_check(n)?, "G_2n != J G_n J".into()),
        (spectra_equal, "spectra of G_n and G_2n differ".into()),
        (cond_exact_sq(n)? == cond_exact_sq(&doubled)?, "Cond(V_n) != Cond(V_2n)".into()),
    ]))
}

fn check_theorem1(n: &Modulus) -> Result<Outcome> {
    Ok(expect(
        cond_exact_sq(n)? == cond_reduced_sq(n)?,
        "Cond(V_n)² != (n/rad n)² Cond(V_rad)²",
    ))
}

fn check_theorem2(n: &Modulus) -> Result<Outcome> {
    let Some(closed_sq) = cond_closed_form_sq(n) else {
        return Ok(Outcome::Skip);
    };
    let exact_sq = cond_exact_sq(n)?;
    let exact = exact_sq.to_f64().unwrap_or(f64::NAN).sqrt();
    let closed = cond_closed_form(n).unwrap_or(f64::NAN);
    let bound_ok = prior_bound(n).is_none_or(|b| exact < b);
    Ok(first_failure([
        (closed_sq == exact_sq, format!("closed form {closed_sq} != exact {exact_sq}")),
        ((closed - exact).abs() <= FLOAT_AGREEMENT * exact, "float closed form off".into()),
        (bound_ok, "not below the prior bound 2(p-1)φ(n)".into()),
    ]))
}

fn check_theorem3(n: &Modulus) -> Result<Outcome> {
    let scaled = match scaled_inverse(n) {
        Ok(s) => s,
        Err(e @ Error::NonIntegral { .. }) => return Ok(Outcome::Fail(e.to_string())),
        Err(e) => return Err(e),
    };
    let via_s = scaled_inverse_via_recurrence(n)?;
    let gram = build_gram(n).to_bigint_matrix();
    let nn = BigInt::from(n.get());
    let identity_ok = gram.mul(&scaled) == BigIntMatrix::identity(gram.size()).scale(&nn);
    let trace_ok = BigRational::from_integer(scaled.trace())
        == inverse_trace_exact(n)? * BigRational::from_integer(nn.clone());
    let table = build_s_table(n)?;
    let boundary_ok = (1..=table.m).all(|i| table.get(i, n.get() as usize) == table.get(i, 0));
    Ok(first_failure([
        (scaled == via_s, "n G_n^-1 differs from the S-table construction".into()),
        (scaled.is_symmetric(), "n G_n^-1 not symmetric".into()),
        (identity_ok, "G_n (n G_n^-1) != n Id".into()),
        (trace_ok, "Tr(n G_n^-1) != n Tr(G_n^-1)".into()),
        (boundary_ok, "S[i][n] != S[i][0]".into()),
    ]))
}

fn check_spectrum(n: &Modulus) -> Result<Outcome> {
    let spectrum = spectrum_numeric(&build_gram(n))?;
    let m = n.phi() as f64;
    let exact = cond_exact_sq(n)?.to_f64().unwrap_or(f64::NAN).sqrt();
    let from_eigen = m * spectrum.inverse_sum().sqrt();
    let float = cond_float(n)?;
    let prime_ok = !n.is_prime() || prime_spectrum_check(n)?;
    Ok(first_failure([
        (spectrum.dimension() as u64 == n.phi(), "multiplicities do not sum to m".into()),
        ((from_eigen - exact).abs() <= 1e-6 * exact, format!("eigenvalue form {from_eigen} vs exact {exact}")),
        ((float - exact).abs() <= FLOAT_AGREEMENT * exact, format!("float {float} vs exact {exact}")),
        (prime_ok, "(G_p - p Id)(G_p - Id) != 0 or Tr(G_p) != (p-1)²".into()),
    ]))
}

/// Aggregated outcome of one suite over a range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub first_counterexample: Option<(u64, String)>,
}

impl SuiteSummary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Runs `suites` over `from..=to` on `jobs` worker threads. Results are
/// independent of `jobs`.
pub fn verify_range(from: u64, to: u64, suites: &[Suite], jobs: usize) -> Result<Vec<SuiteSummary>> {
    if from == 0 || from > to {
        return Err(Error::EmptyRange { from, to });
    }
    let outcomes: Vec<Vec<Outcome>> = map_range(from, to, jobs, |n| {
        let md = Modulus::new(n).expect("n >= 1");
        suites.iter().map(|s| s.check(&md)).collect()
    });
    Ok(suites
        .iter()
        .enumerate()
        .map(|(k, &suite)| {
            let mut summary = SuiteSummary {
                suite,
                passed: 0,
                failed: 0,
                skipped: 0,
                first_counterexample: None,
            };
            for (n, row) in (from..=to).zip(&outcomes) {
                match &row[k] {
                    Outcome::Pass => summary.passed += 1,
                    Outcome::Skip => summary.skipped += 1,
                    Outcome::Fail(why) => {
                        summary.failed += 1;
                        summary.first_counterexample.get_or_insert((n, why.clone()));
                    }
                }
            }
            summary
        })
        .collect())
}

/// Maps `f` over `from..=to` on a pool of `jobs` threads, preserving order.
pub fn map_range<T, F>(from: u64, to: u64, jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    if jobs <= 1 {
        return (from..=to).map(f).collect();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool")
        .install(|| (from..=to).into_par_iter().map(f).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(parse_suites("all").unwrap().len(), 9);
        assert_eq!(parse_suites("theorem3, gram,gram").unwrap(), vec![Suite::Gram, Suite::Theorem3]);
        assert!(parse_suites("theorem4").is_err());
    }

    #[test]
    fn small_range_passes() {
        let summaries = verify_range(1, 30, &Suite::ALL, 1).unwrap();
        for s in &summaries {
            assert!(s.ok(), "{}: {:?}", s.suite, s.first_counterexample);
            assert_eq!(s.passed + s.skipped, 30);
        }
        let sim = summaries.iter().find(|s| s.suite == Suite::Similarity).unwrap();
        assert_eq!(sim.skipped, 15);
    }

    #[test]
    fn parallel_matches_serial() {
        let a = verify_range(1, 20, &[Suite::Theorem3, Suite::Spectrum], 1).unwrap();
        let b = verify_range(1, 20, &[Suite::Theorem3, Suite::Spectrum], 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_range_rejected() {
        assert!(verify_range(5, 4, &Suite::ALL, 1).is_err());
        assert!(verify_range(0, 4, &Suite::ALL, 1).is_err());
    }
}
