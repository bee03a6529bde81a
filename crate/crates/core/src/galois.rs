//! Frobenius classes of prime ideals of K in a Galois extension L/K, read off
//! from the cycle type (factor-degree pattern) of the defining polynomial of L
//! over each residue field.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Deserialize;

use crate::analytic::li;
use crate::error::{Error, Result};
use crate::finitefield::{pattern_over_extension, FactorPattern};
use crate::numberfield::{prime_ideal_stream, NumberFieldSpec, PrimeIdeal};

/// Exact nonnegative rational, always stored in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let g = gcd(num as u128, den as u128).max(1) as u64;
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn checked_add(self, other: Ratio) -> Option<Ratio> {
        let den = (self.den as u128).checked_mul(other.den as u128)?;
        let num = (self.num as u128 * other.den as u128)
            .checked_add(other.num as u128 * self.den as u128)?;
        let g = gcd(num, den).max(1);
        Some(Ratio {
            num: u64::try_from(num / g).ok()?,
            den: u64::try_from(den / g).ok()?,
        })
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// One conjugacy class C of G, keyed by its cycle type.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassEntry {
    pub label: String,
    pub pattern: FactorPattern,
    /// |C| / |G|.
    pub weight: Ratio,
}

/// L = K[x]/(g) together with the conjugacy classes of Gal(L/K).
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeExtension {
    g: Vec<i64>,
    group_order: u64,
    classes: Vec<ClassEntry>,
    exclude_ramified_in_k: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassConfig {
    label: String,
    pattern: Vec<u32>,
    weight: (u64, u64),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtensionConfig {
    g: Vec<i64>,
    group_order: u64,
    classes: Vec<ClassConfig>,
    #[serde(default)]
    exclude_ramified_in_k: bool,
}

impl RelativeExtension {
    pub fn new(g: Vec<i64>, group_order: u64, classes: Vec<ClassEntry>) -> Result<Self> {
        if g.len() < 2 || *g.last().unwrap() != 1 {
            return Err(Error::InvalidArgument(format!(
                "defining polynomial {g:?} must be monic of degree >= 1"
            )));
        }
        if group_order == 0 {
            return Err(Error::InvalidArgument("group order must be positive".into()));
        }
        if classes.is_empty() {
            return Err(Error::InvalidArgument("class table is empty".into()));
        }
        let deg = (g.len() - 1) as u32;
        let mut seen = BTreeSet::new();
        let mut labels = BTreeSet::new();
        let mut total = Ratio { num: 0, den: 1 };
        for c in &classes {
            if c.pattern.total_degree() != deg || !c.pattern.is_squarefree() {
                return Err(Error::InvalidArgument(format!(
                    "class {}: pattern {} does not describe a squarefree degree-{deg} polynomial",
                    c.label, c.pattern
                )));
            }
            if c.weight.num == 0 || c.weight.num > c.weight.den {
                return Err(Error::InvalidArgument(format!(
                    "class {}: weight {} outside (0, 1]",
                    c.label, c.weight
                )));
            }
            if !seen.insert(c.pattern.degrees()) {
                return Err(Error::InvalidArgument(format!(
                    "ambiguous class table: cycle type {} appears twice",
                    c.pattern
                )));
            }
            if !labels.insert(c.label.clone()) {
                return Err(Error::InvalidArgument(format!("duplicate label {}", c.label)));
            }
            total = total
                .checked_add(c.weight)
                .ok_or_else(|| Error::Overflow("class weight denominators".into()))?;
        }
        if total != (Ratio { num: 1, den: 1 }) {
            return Err(Error::InvalidArgument(format!(
                "class weights sum to {total}, not 1"
            )));
        }
        Ok(Self {
            g,
            group_order,
            classes,
            exclude_ramified_in_k: false,
        })
    }

    /// When set, ideals whose smallest prime is ramified in K/ℚ are left out
    /// of every S(L/K; C) (tallied with the ramified-minimum ideals instead).
    pub fn with_exclude_ramified_in_k(mut self, exclude: bool) -> Self {
        self.exclude_ramified_in_k = exclude;
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExtensionConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let classes = cfg
            .classes
            .into_iter()
            .map(|c| {
                Ok(ClassEntry {
                    label: c.label,
                    pattern: FactorPattern::from_degrees(&c.pattern),
                    weight: Ratio::new(c.weight.0, c.weight.1)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(cfg.g, cfg.group_order, classes)?
            .with_exclude_ramified_in_k(cfg.exclude_ramified_in_k))
    }

    /// K(√2)/K: g = x² − 2 with classes "id" and "nonid".
    pub fn sqrt2() -> Self {
        Self::new(
            vec![-2, 0, 1],
            2,
            vec![
                ClassEntry {
                    label: "id".into(),
                    pattern: FactorPattern::from_degrees(&[1, 1]),
                    weight: Ratio { num: 1, den: 2 },
                },
                ClassEntry {
                    label: "nonid".into(),
                    pattern: FactorPattern::from_degrees(&[2]),
                    weight: Ratio { num: 1, den: 2 },
                },
            ],
        )
        .expect("valid table")
    }

    /// Splitting field of x³ + x + 1, Galois group S₃.
    pub fn s3_cubic() -> Self {
        let entry = |label: &str, degrees: &[u32], num, den| ClassEntry {
            label: label.into(),
            pattern: FactorPattern::from_degrees(degrees),
            weight: Ratio { num, den },
        };
        Self::new(
            vec![1, 1, 0, 1],
            6,
            vec![
                entry("[(1)]", &[1, 1, 1], 1, 6),
                entry("[(12)]", &[1, 2], 1, 2),
                entry("[(123)]", &[3], 1, 3),
            ],
        )
        .expect("valid table")
    }

    pub fn g(&self) -> &[i64] {
        &self.g
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn classes(&self) -> &[ClassEntry] {
        &self.classes
    }

    pub fn exclude_ramified_in_k(&self) -> bool {
        self.exclude_ramified_in_k
    }

    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }

    fn lookup(&self, pattern: &FactorPattern) -> Option<usize> {
        self.classes.iter().position(|c| &c.pattern == pattern)
    }
}

/// Outcome of classifying one prime of K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArtinResult {
    /// Index into [`RelativeExtension::classes`].
    Class(usize),
    RamifiedInL,
    Unclassifiable(FactorPattern),
}

/// Artin class of an unramified prime, via the cycle type of g over O_K/𝔭.
pub fn artin_class(ext: &RelativeExtension, prime: &PrimeIdeal) -> Result<ArtinResult> {
    let pattern = pattern_over_extension(&ext.g, prime.p, prime.res_degree)?;
    if !pattern.is_squarefree() {
        return Ok(ArtinResult::RamifiedInL);
    }
    Ok(match ext.lookup(&pattern) {
        Some(i) => ArtinResult::Class(i),
        None => ArtinResult::Unclassifiable(pattern),
    })
}

/// Classifies a whole prime list. Primes above the same p with the same
/// residue degree share a residue field, so each (p, f) is factored once.
pub fn classify_all(ext: &RelativeExtension, primes: &[PrimeIdeal]) -> Result<Vec<ArtinResult>> {
    let keys: BTreeSet<(u64, u32)> = primes.iter().map(|q| (q.p, q.res_degree)).collect();
    let keys: Vec<(u64, u32)> = keys.into_iter().collect();
    let results: Vec<ArtinResult> = keys
        .par_iter()
        .map(|&(p, f)| {
            artin_class(
                ext,
                &PrimeIdeal {
                    p,
                    res_degree: f,
                    ram_index: 1,
                    slot: 0,
                    norm: 0,
                },
            )
        })
        .collect::<Result<_>>()?;
    let table: HashMap<(u64, u32), ArtinResult> = keys.into_iter().zip(results).collect();
    Ok(primes
        .iter()
        .map(|q| table[&(q.p, q.res_degree)].clone())
        .collect())
}

pub(crate) fn unclassifiable_error(prime: &PrimeIdeal, pattern: &FactorPattern) -> Error {
    Error::Unclassifiable {
        p: prime.p,
        norm: prime.norm,
        pattern: pattern.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassCensus {
    pub label: String,
    pub weight: f64,
    pub count: u64,
    /// π_C / π(K; X).
    pub ratio: f64,
    /// |π_C − (|C|/|G|)·Li(X)|, Li taken from 2.
    pub li_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Census {
    pub x_max: u64,
    /// π(K; X).
    pub total: u64,
    pub ramified_in_l: u64,
    pub classes: Vec<ClassCensus>,
}

/// Counts prime ideals of norm ≤ x_max per Artin class.
pub fn prime_census(
    spec: &NumberFieldSpec,
    ext: &RelativeExtension,
    x_max: u64,
) -> Result<Census> {
    let primes = prime_ideal_stream(spec, x_max)?;
    let classes = classify_all(ext, &primes)?;
    census_from(ext, x_max, &primes, &classes)
}

pub(crate) fn census_from(
    ext: &RelativeExtension,
    x_max: u64,
    primes: &[PrimeIdeal],
    classes: &[ArtinResult],
) -> Result<Census> {
    let mut counts = vec![0u64; ext.classes.len()];
    let mut ramified_in_l = 0;
    for (prime, class) in primes.iter().zip(classes) {
        if prime.norm > x_max {
            continue;
        }
        match class {
            ArtinResult::Class(i) => counts[*i] += 1,
            ArtinResult::RamifiedInL => ramified_in_l += 1,
            ArtinResult::Unclassifiable(pattern) => {
                return Err(unclassifiable_error(prime, pattern))
            }
        }
    }
    let total = primes.iter().filter(|q| q.norm <= x_max).count() as u64;
    let li_x = if x_max >= 2 { li(x_max as f64)? } else { 0.0 };
    let classes = ext
        .classes
        .iter()
        .zip(counts)
        .map(|(entry, count)| {
            let weight = entry.weight.to_f64();
            ClassCensus {
                label: entry.label.clone(),
                weight,
                count,
                ratio: if total > 0 { count as f64 / total as f64 } else { 0.0 },
                li_deviation: (count as f64 - weight * li_x).abs(),
            }
        })
        .collect();
    Ok(Census {
        x_max,
        total,
        ramified_in_l,
        classes,
    })
}
