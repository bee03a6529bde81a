//! Monogenic number fields K = ℚ[x]/(f): prime decomposition by factoring f
//! mod p, prime ideals streamed by norm, ideal counting and the residue c_K of
//! the Dedekind zeta function.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use log::warn;
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::finitefield::{is_irreducible, is_prime_u64, FpPoly, NORM_LIMIT};

/// Signature, class number, regulator, roots of unity and discriminant.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct FieldInvariants {
    pub r1: u32,
    pub r2: u32,
    pub h: u64,
    pub reg: f64,
    pub w: u32,
    pub disc: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumberFieldSpec {
    name: String,
    min_poly: Vec<i64>,
    monogenic_asserted: bool,
    invariants: Option<FieldInvariants>,
    /// False when irreducibility over ℚ could not be certified and is taken
    /// on trust (degree > 3 with no irreducible reduction found).
    irreducibility_proven: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldConfig {
    name: String,
    min_poly: Vec<i64>,
    monogenic: bool,
    #[serde(default)]
    invariants: Option<FieldInvariants>,
}

impl NumberFieldSpec {
    pub fn new(
        name: impl Into<String>,
        min_poly: Vec<i64>,
        monogenic_asserted: bool,
        invariants: Option<FieldInvariants>,
    ) -> Result<Self> {
        let name = name.into();
        if min_poly.len() < 2 || *min_poly.last().unwrap() != 1 {
            return Err(Error::InvalidArgument(format!(
                "minimal polynomial of {name} must be monic of degree >= 1, got {min_poly:?}"
            )));
        }
        let d = min_poly.len() - 1;
        if d > 1 && has_integer_root(&min_poly) {
            return Err(Error::InvalidArgument(format!(
                "minimal polynomial of {name} has a rational root"
            )));
        }
        let irreducibility_proven = d <= 3 || has_irreducible_reduction(&min_poly);
        if !irreducibility_proven {
            warn!("{name}: irreducibility of {min_poly:?} over Q is assumed, not verified");
        }
        if let Some(inv) = &invariants {
            if inv.r1 as usize + 2 * inv.r2 as usize != d {
                return Err(Error::InvalidArgument(format!(
                    "{name}: r1 + 2 r2 = {} but degree is {d}",
                    inv.r1 + 2 * inv.r2
                )));
            }
            if inv.h < 1 || inv.w < 2 || inv.disc == 0 || !(inv.reg > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "{name}: invariants need h >= 1, w >= 2, reg > 0, disc != 0"
                )));
            }
        }
        Ok(Self {
            name,
            min_poly,
            monogenic_asserted,
            invariants,
            irreducibility_proven,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: FieldConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::new(cfg.name, cfg.min_poly, cfg.monogenic, cfg.invariants)
    }

    /// ℚ(i), with invariants.
    pub fn gaussian() -> Self {
        Self::new(
            "Q(i)",
            vec![1, 0, 1],
            true,
            Some(FieldInvariants { r1: 0, r2: 1, h: 1, reg: 1.0, w: 4, disc: -4 }),
        )
        .expect("valid field")
    }

    /// ℚ(ζ₇), defined by the 7th cyclotomic polynomial.
    pub fn cyclotomic7() -> Self {
        Self::new("Q(zeta_7)", vec![1; 7], true, None).expect("valid field")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn min_poly(&self) -> &[i64] {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn monogenic_asserted(&self) -> bool {
        self.monogenic_asserted
    }

    pub fn invariants(&self) -> Option<&FieldInvariants> {
        self.invariants.as_ref()
    }

    pub fn irreducibility_proven(&self) -> bool {
        self.irreducibility_proven
    }
}

fn eval_i128(poly: &[i64], x: i128) -> Option<i128> {
    poly.iter()
        .rev()
        .try_fold(0i128, |acc, &c| acc.checked_mul(x)?.checked_add(c as i128))
}

/// Any rational root of a monic integer polynomial is an integer dividing the
/// constant term.
fn has_integer_root(poly: &[i64]) -> bool {
    let c0 = poly[0].unsigned_abs();
    if c0 == 0 {
        return true;
    }
    let mut d = 1u64;
    while d * d <= c0 {
        if c0.is_multiple_of(d) {
            for cand in [d, c0 / d] {
                for x in [cand as i128, -(cand as i128)] {
                    if eval_i128(poly, x) == Some(0) {
                        return true;
                    }
                }
            }
        }
        d += 1;
    }
    false
}

/// A monic integer polynomial irreducible modulo some prime is irreducible
/// over ℚ.
fn has_irreducible_reduction(poly: &[i64]) -> bool {
    (2..500u64)
        .filter(|&p| is_prime_u64(p))
        .any(|p| is_irreducible(&FpPoly::from_integers(p, poly)).unwrap_or(false))
}

/// A prime ideal of O_K, identified by the rational prime below it and its
/// slot among the primes above that rational prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub p: u64,
    pub res_degree: u32,
    pub ram_index: u32,
    pub slot: u32,
    pub norm: u64,
}

impl PrimeIdeal {
    pub fn is_ramified_in_k(&self) -> bool {
        self.ram_index > 1
    }
}

impl Ord for PrimeIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.norm, self.p, self.slot).cmp(&(other.norm, other.p, other.slot))
    }
}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "P(p={}, f={}, e={}, slot={}, N={})",
            self.p, self.res_degree, self.ram_index, self.slot, self.norm
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    pub p: u64,
    pub primes: Vec<PrimeIdeal>,
    pub ramified_in_k: bool,
    pub index_divisor: bool,
}

/// Dedekind's criterion: does p divide [O_K : ℤ[θ]]?
pub fn is_index_divisor(spec: &NumberFieldSpec, p: u64) -> bool {
    let f = spec.min_poly();
    let fbar = FpPoly::from_integers(p, f);
    if fbar.is_squarefree() {
        return false;
    }
    let t = fbar.radical();
    let h = fbar.div_rem(&t).0;
    // F = (f - t~ h~) / p with t~, h~ the lifts with coefficients in [0, p).
    let lift_prod = {
        let (tc, hc) = (t.coeffs(), h.coeffs());
        let mut out = vec![0i128; tc.len() + hc.len() - 1];
        for (i, &a) in tc.iter().enumerate() {
            for (j, &b) in hc.iter().enumerate() {
                out[i + j] += a as i128 * b as i128;
            }
        }
        out
    };
    let n = f.len().max(lift_prod.len());
    let big_f: Vec<u64> = (0..n)
        .map(|i| {
            let diff = *f.get(i).unwrap_or(&0) as i128 - lift_prod.get(i).copied().unwrap_or(0);
            debug_assert_eq!(diff.rem_euclid(p as i128), 0);
            (diff / p as i128).rem_euclid(p as i128) as u64
        })
        .collect();
    let big_f = FpPoly::new(p, big_f);
    let u = big_f.gcd(&t).gcd(&h);
    u.degree().unwrap_or(0) >= 1
}

/// Splits p O_K by factoring the minimal polynomial mod p.
pub fn decompose_prime(spec: &NumberFieldSpec, p: u64) -> Result<DecompositionReport> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if !spec.monogenic_asserted() {
        return Err(Error::InvalidArgument(format!(
            "{} is not asserted monogenic; decomposition by factoring is unsupported",
            spec.name()
        )));
    }
    if is_index_divisor(spec, p) {
        return Ok(DecompositionReport {
            p,
            primes: Vec::new(),
            ramified_in_k: false,
            index_divisor: true,
        });
    }
    let mut factors = FpPoly::from_integers(p, spec.min_poly()).factor_degrees();
    factors.sort_unstable();
    let primes = factors
        .into_iter()
        .enumerate()
        .map(|(slot, (f, e))| {
            let norm = (p as u128).saturating_pow(f).min(u64::MAX as u128) as u64;
            PrimeIdeal {
                p,
                res_degree: f,
                ram_index: e,
                slot: slot as u32,
                norm,
            }
        })
        .collect::<Vec<_>>();
    let ramified_in_k = primes.iter().any(|q| q.ram_index > 1);
    Ok(DecompositionReport {
        p,
        primes,
        ramified_in_k,
        index_divisor: false,
    })
}

/// All rational primes ≤ n.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub(crate) fn check_bound(x_max: u64) -> Result<()> {
    if x_max >= NORM_LIMIT {
        return Err(Error::Overflow(format!("norm bound {x_max} >= 2^62")));
    }
    Ok(())
}

/// Every prime ideal of norm ≤ `x_max`, sorted by (norm, p, slot).
///
/// Fails with [`Error::IndexDivisor`] if some p ≤ x_max divides the index,
/// since factoring the minimal polynomial would mis-decompose it.
pub fn prime_ideal_stream(spec: &NumberFieldSpec, x_max: u64) -> Result<Vec<PrimeIdeal>> {
    check_bound(x_max)?;
    let rational = primes_up_to(x_max);
    let per_prime: Vec<Vec<PrimeIdeal>> = rational
        .par_iter()
        .map(|&p| {
            let report = decompose_prime(spec, p)?;
            if report.index_divisor {
                return Err(Error::IndexDivisor(p));
            }
            Ok(report
                .primes
                .into_iter()
                .filter(|q| q.norm <= x_max)
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut all: Vec<PrimeIdeal> = per_prime.into_iter().flatten().collect();
    all.sort_unstable();
    Ok(all)
}

/// Number of ideals of norm ≤ x built from prime ideals with norms
/// `norms[start..]` (ascending). Includes the unit ideal.
pub(crate) fn count_products(norms: &[u64], start: usize, x: u64) -> u64 {
    let mut total = 1;
    for (i, &n) in norms.iter().enumerate().skip(start) {
        if n > x {
            break;
        }
        let mut rest = x / n;
        while rest >= 1 {
            total += count_products(norms, i + 1, rest);
            rest /= n;
        }
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealCount {
    pub x_max: u64,
    /// All ideals of norm ≤ x_max, including O_K.
    pub count: u64,
    pub ratio: f64,
}

/// Exact count of integral ideals with norm ≤ `x_max`.
pub fn count_ideals(spec: &NumberFieldSpec, x_max: u64) -> Result<IdealCount> {
    if x_max == 0 {
        return Err(Error::InvalidArgument("x_max must be >= 1".into()));
    }
    let primes = prime_ideal_stream(spec, x_max)?;
    let norms: Vec<u64> = primes.iter().map(|q| q.norm).collect();
    Ok(count_ideals_with(&norms, x_max))
}

pub(crate) fn count_ideals_with(norms: &[u64], x_max: u64) -> IdealCount {
    let count = count_products(norms, 0, x_max);
    IdealCount {
        x_max,
        count,
        ratio: count as f64 / x_max as f64,
    }
}

/// c_K = 2^{r1} (2π)^{r2} Reg h / (w √|D|).
pub fn residue_from_invariants(spec: &NumberFieldSpec) -> Result<f64> {
    let inv = spec.invariants().ok_or_else(|| {
        Error::Unavailable(format!("no invariants recorded for {}", spec.name()))
    })?;
    Ok(2f64.powi(inv.r1 as i32) * (2.0 * PI).powi(inv.r2 as i32) * inv.reg * inv.h as f64
        / (inv.w as f64 * (inv.disc.unsigned_abs() as f64).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResidueSource {
    Invariants,
    IdealCount { x_max: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residue {
    pub value: f64,
    pub source: ResidueSource,
}

/// c_K from the invariants when known, otherwise the ideal-count ratio at
/// `fallback_x`.
pub fn residue(spec: &NumberFieldSpec, fallback_x: u64) -> Result<Residue> {
    match residue_from_invariants(spec) {
        Ok(value) => Ok(Residue {
            value,
            source: ResidueSource::Invariants,
        }),
        Err(Error::Unavailable(_)) => {
            let c = count_ideals(spec, fallback_x.max(1))?;
            Ok(Residue {
                value: c.ratio,
                source: ResidueSource::IdealCount { x_max: fallback_x },
            })
        }
        Err(e) => Err(e),
    }
}
