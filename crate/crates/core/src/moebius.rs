//! Möbius-weighted sums over ideals of K.
//!
//! Squarefree ideals (and, for the Q-sums, all ideals) are enumerated by a
//! depth-first product over the norm-sorted prime list with strictly
//! increasing prime index. Work is partitioned into fixed blocks of leading
//! (smallest) primes; each block fills per-checkpoint buckets of compensated
//! sums, and the blocks are merged in block order. The partitioning depends
//! only on the prime list, so results are bit-identical for any thread count.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::galois::{classify_all, unclassifiable_error, ArtinResult, RelativeExtension};
use crate::numberfield::{check_bound, prime_ideal_stream, NumberFieldSpec, PrimeIdeal, Residue};
use crate::summation::CompensatedSum;

/// Leading primes per work partition.
const PARTITION: usize = 64;

/// Whether an ideal of norm exactly X counts towards the sum at X.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Inclusive,
    Exclusive,
}

/// Strictly ascending norm bounds X₁ < … < X_m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoints {
    values: Vec<u64>,
    boundary: Boundary,
}

impl Checkpoints {
    pub fn new(values: Vec<u64>, boundary: Boundary) -> Result<Self> {
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "checkpoints must be strictly ascending: {values:?}"
            )));
        }
        if let Some(&last) = values.last() {
            check_bound(last)?;
        }
        Ok(Self { values, boundary })
    }

    pub fn inclusive(values: Vec<u64>) -> Result<Self> {
        Self::new(values, Boundary::Inclusive)
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest norm that contributes to any checkpoint (0 if none).
    fn limit(&self) -> u64 {
        match (self.values.last(), self.boundary) {
            (None, _) => 0,
            (Some(&x), Boundary::Inclusive) => x,
            (Some(&x), Boundary::Exclusive) => x.saturating_sub(1),
        }
    }

    /// Index of the first checkpoint that counts norm `n`.
    #[inline]
    fn bucket(&self, n: u64) -> usize {
        match self.boundary {
            Boundary::Inclusive => self.values.partition_point(|&x| x < n),
            Boundary::Exclusive => self.values.partition_point(|&x| x <= n),
        }
    }
}

/// A squarefree ideal 𝔭₁⋯𝔭_k of O_K with its factors sorted by
/// (norm, p, slot).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeIdeal {
    factors: Vec<PrimeIdeal>,
    norm: u64,
    mu: i8,
    min_norm: u64,
    max_norm: u64,
    salient: bool,
}

impl SquarefreeIdeal {
    /// Fails if a prime occurs twice (μ would vanish) or the norm overflows.
    pub fn new(mut factors: Vec<PrimeIdeal>) -> Result<Self> {
        factors.sort_unstable();
        if factors.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(
                "ideal is not squarefree: a prime factor is repeated".into(),
            ));
        }
        let norm = factors
            .iter()
            .try_fold(1u64, |acc, q| acc.checked_mul(q.norm))
            .filter(|&n| check_bound(n).is_ok())
            .ok_or_else(|| Error::Overflow("ideal norm exceeds 2^62".into()))?;
        let min_norm = factors.first().map_or(1, |q| q.norm);
        let max_norm = factors.last().map_or(1, |q| q.norm);
        let salient = factors.len() == 1 || (factors.len() > 1 && factors[1].norm != min_norm);
        Ok(Self {
            mu: if factors.len().is_multiple_of(2) { 1 } else { -1 },
            norm,
            min_norm,
            max_norm,
            salient,
            factors,
        })
    }

    pub fn factors(&self) -> &[PrimeIdeal] {
        &self.factors
    }

    pub fn norm(&self) -> u64 {
        self.norm
    }

    pub fn mu(&self) -> i8 {
        self.mu
    }

    pub fn min_norm(&self) -> u64 {
        self.min_norm
    }

    /// M(I).
    pub fn max_norm(&self) -> u64 {
        self.max_norm
    }

    /// Exactly one prime factor attains the minimal norm.
    pub fn is_salient(&self) -> bool {
        self.salient
    }

    /// 𝔭_min(I) for salient ideals.
    pub fn min_prime(&self) -> Option<&PrimeIdeal> {
        self.salient.then(|| &self.factors[0])
    }
}

impl fmt::Display for SquarefreeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|q| q.to_string()).collect();
        write!(f, "{} [N={}]", parts.join("·"), self.norm)
    }
}

/// Visits every squarefree ideal with 2 ≤ N(I) ≤ x_max, in depth-first order
/// over the norm-sorted prime list. `primes` must be sorted and cover every
/// norm up to `x_max`.
pub fn enumerate_squarefree(
    primes: &[PrimeIdeal],
    x_max: u64,
    mut visitor: impl FnMut(&SquarefreeIdeal),
) -> Result<()> {
    check_bound(x_max)?;
    fn walk(
        primes: &[PrimeIdeal],
        start: usize,
        norm: u64,
        x_max: u64,
        path: &mut Vec<PrimeIdeal>,
        visitor: &mut dyn FnMut(&SquarefreeIdeal),
    ) {
        for (j, q) in primes.iter().enumerate().skip(start) {
            let n = match norm.checked_mul(q.norm) {
                Some(n) if n <= x_max => n,
                _ => break,
            };
            path.push(*q);
            let ideal = SquarefreeIdeal::new(path.clone()).expect("distinct primes, bounded norm");
            visitor(&ideal);
            walk(primes, j + 1, n, x_max, path, visitor);
            path.pop();
        }
    }
    walk(primes, 0, 1, x_max, &mut Vec::new(), &mut visitor);
    Ok(())
}

/// The condition on 𝔭_min(I) selecting the ideals summed over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinPrimePredicate {
    ArtinClassIs(String),
    SplitsCompletely,
    LiesOver(u64),
}

impl MinPrimePredicate {
    pub fn holds(&self, ext: &RelativeExtension, artin: &ArtinResult, prime: &PrimeIdeal) -> bool {
        match self {
            MinPrimePredicate::ArtinClassIs(label) => {
                matches!(artin, ArtinResult::Class(i) if ext.classes()[*i].label == *label)
            }
            MinPrimePredicate::SplitsCompletely => match artin {
                ArtinResult::Class(i) => ext.classes()[*i].pattern.splits_completely(),
                ArtinResult::RamifiedInL => false,
                ArtinResult::Unclassifiable(p) => p.splits_completely(),
            },
            MinPrimePredicate::LiesOver(p) => prime.p == *p,
        }
    }
}

impl fmt::Display for MinPrimePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinPrimePredicate::ArtinClassIs(l) => write!(f, "class={l}"),
            MinPrimePredicate::SplitsCompletely => write!(f, "splits-completely"),
            MinPrimePredicate::LiesOver(p) => write!(f, "lies-over={p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualityOutcome {
    /// Σ_{J | I} μ(J) f(J).
    pub lhs: i64,
    /// −Q(I) restricted to maximal-norm primes satisfying the predicate.
    pub rhs: i64,
    pub equal: bool,
}

/// Checks Σ_{J | I} μ(J) f(J) = −Q_C(I) by exhausting the divisors of a
/// squarefree I, where f is the indicator of salient ideals whose minimal
/// prime satisfies `pred` (f(O_K) = 0).
pub fn duality_check(
    ext: &RelativeExtension,
    factors: &[PrimeIdeal],
    pred: &MinPrimePredicate,
) -> Result<DualityOutcome> {
    let ideal = SquarefreeIdeal::new(factors.to_vec())?;
    let artin = ideal
        .factors
        .iter()
        .map(|q| crate::galois::artin_class(ext, q))
        .collect::<Result<Vec<_>>>()?;
    let holds: Vec<bool> = ideal
        .factors
        .iter()
        .zip(&artin)
        .map(|(q, a)| pred.holds(ext, a, q))
        .collect();
    duality_from_flags(&ideal, &holds)
}

pub(crate) fn duality_from_flags(ideal: &SquarefreeIdeal, holds: &[bool]) -> Result<DualityOutcome> {
    let k = ideal.factors.len();
    if k > 24 {
        return Err(Error::InvalidArgument(format!(
            "{k} prime factors is too many for divisor exhaustion"
        )));
    }
    let norms: Vec<u64> = ideal.factors.iter().map(|q| q.norm).collect();
    let mut lhs = 0i64;
    for mask in 1u32..(1 << k) {
        // Factors are norm-sorted, so the lowest set bit is a minimal prime.
        let first = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let salient = rest == 0 || norms[rest.trailing_zeros() as usize] != norms[first];
        if salient && holds[first] {
            lhs += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }
    let rhs = -(norms
        .iter()
        .zip(holds)
        .filter(|(&n, &h)| h && n == ideal.max_norm)
        .count() as i64);
    Ok(DualityOutcome {
        lhs,
        rhs,
        equal: lhs == rhs,
    })
}

/// How a prime behaves as the minimal prime of a salient ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MinRole {
    Class(usize),
    /// Ramified in L/K, or ramified in K/ℚ under the exclusion convention.
    Excluded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesKind {
    /// S_C(X) = −Σ_{I ∈ S(L/K;C)} μ(I)/N(I).
    SC,
    /// −Σ μ(I)/N(I) over salient ideals whose minimal prime is excluded.
    RamifiedMin,
    /// Σ |μ(I)|/N(I) over salient ideals with a classified minimal prime.
    SalientAbs,
    Mertens,
    MertensOverNorm,
    MertensLogOverNorm,
    Theta,
    Psi,
    SumQC,
    SumQ,
    SumQCOverNorm,
    CountSquarefree,
    CountSalientClassified,
    CountSalientRamifiedMin,
    CountNonSalient,
}

impl SeriesKind {
    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::SC => "S_C",
            SeriesKind::RamifiedMin => "ramified_min",
            SeriesKind::SalientAbs => "salient_abs",
            SeriesKind::Mertens => "mertens",
            SeriesKind::MertensOverNorm => "mertens_over_n",
            SeriesKind::MertensLogOverNorm => "mertens_log_over_n",
            SeriesKind::Theta => "theta",
            SeriesKind::Psi => "psi",
            SeriesKind::SumQC => "sum_Q_C",
            SeriesKind::SumQ => "sum_Q",
            SeriesKind::SumQCOverNorm => "sum_Q_C_over_n",
            SeriesKind::CountSquarefree => "count_squarefree",
            SeriesKind::CountSalientClassified => "count_salient_classified",
            SeriesKind::CountSalientRamifiedMin => "count_salient_ramified_min",
            SeriesKind::CountNonSalient => "count_nonsalient",
        }
    }
}

/// One series evaluated at every checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub kind: SeriesKind,
    /// Class label, or empty for class-independent rows.
    pub label: String,
    pub values: Vec<f64>,
    pub reference: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SumSeries {
    pub checkpoints: Vec<u64>,
    pub rows: Vec<SeriesRow>,
}

impl SumSeries {
    pub fn row(&self, kind: SeriesKind, label: &str) -> Option<&SeriesRow> {
        self.rows.iter().find(|r| r.kind == kind && r.label == label)
    }

    /// Value of a row at checkpoint `i`; panics if the row is absent.
    pub fn value(&self, kind: SeriesKind, label: &str, i: usize) -> f64 {
        self.row(kind, label)
            .unwrap_or_else(|| panic!("no row {} {label}", kind.name()))
            .values[i]
    }
}

fn cumulative(buckets: &[CompensatedSum]) -> Vec<f64> {
    let mut acc = CompensatedSum::new();
    buckets
        .iter()
        .map(|b| {
            acc.merge(b);
            acc.value()
        })
        .collect()
}

fn cumulative_int(buckets: &[i64]) -> Vec<f64> {
    let mut acc = 0i64;
    buckets
        .iter()
        .map(|b| {
            acc += b;
            acc as f64
        })
        .collect()
}

fn merge_into(dst: &mut [CompensatedSum], src: &[CompensatedSum]) {
    for (d, s) in dst.iter_mut().zip(src) {
        d.merge(s);
    }
}

fn add_into(dst: &mut [i64], src: &[i64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d += s;
    }
}

/// Per-bucket accumulators of the squarefree pass.
#[derive(Debug, Clone)]
struct SquarefreeAcc {
    sc: Vec<Vec<CompensatedSum>>,
    ramified_min: Vec<CompensatedSum>,
    salient_abs: Vec<CompensatedSum>,
    mertens: Vec<i64>,
    mertens_n: Vec<CompensatedSum>,
    mertens_log: Vec<CompensatedSum>,
    count_sqf: Vec<i64>,
    count_classified: Vec<i64>,
    count_ramified: Vec<i64>,
    count_nonsalient: Vec<i64>,
}

impl SquarefreeAcc {
    fn new(classes: usize, buckets: usize) -> Self {
        let z = vec![CompensatedSum::new(); buckets];
        let zi = vec![0i64; buckets];
        Self {
            sc: vec![z.clone(); classes],
            ramified_min: z.clone(),
            salient_abs: z.clone(),
            mertens: zi.clone(),
            mertens_n: z.clone(),
            mertens_log: z,
            count_sqf: zi.clone(),
            count_classified: zi.clone(),
            count_ramified: zi.clone(),
            count_nonsalient: zi,
        }
    }

    fn merge(&mut self, o: &SquarefreeAcc) {
        for (d, s) in self.sc.iter_mut().zip(&o.sc) {
            merge_into(d, s);
        }
        merge_into(&mut self.ramified_min, &o.ramified_min);
        merge_into(&mut self.salient_abs, &o.salient_abs);
        add_into(&mut self.mertens, &o.mertens);
        merge_into(&mut self.mertens_n, &o.mertens_n);
        merge_into(&mut self.mertens_log, &o.mertens_log);
        add_into(&mut self.count_sqf, &o.count_sqf);
        add_into(&mut self.count_classified, &o.count_classified);
        add_into(&mut self.count_ramified, &o.count_ramified);
        add_into(&mut self.count_nonsalient, &o.count_nonsalient);
    }
}

/// Per-bucket accumulators of the all-ideal pass.
#[derive(Debug, Clone)]
struct AllIdealAcc {
    qc: Vec<Vec<i64>>,
    q: Vec<i64>,
    qc_over_n: Vec<Vec<CompensatedSum>>,
}

impl AllIdealAcc {
    fn new(classes: usize, buckets: usize) -> Self {
        Self {
            qc: vec![vec![0; buckets]; classes],
            q: vec![0; buckets],
            qc_over_n: vec![vec![CompensatedSum::new(); buckets]; classes],
        }
    }

    fn merge(&mut self, o: &AllIdealAcc) {
        for (d, s) in self.qc.iter_mut().zip(&o.qc) {
            add_into(d, s);
        }
        add_into(&mut self.q, &o.q);
        for (d, s) in self.qc_over_n.iter_mut().zip(&o.qc_over_n) {
            merge_into(d, s);
        }
    }
}

/// Prime ideals of K up to a norm bound, with their Frobenius classes, ready
/// for any of the partial-sum series.
#[derive(Debug, Clone)]
pub struct IdealSums {
    primes: Vec<PrimeIdeal>,
    norms: Vec<u64>,
    ext: Option<RelativeExtension>,
    artin: Vec<ArtinResult>,
    roles: Vec<MinRole>,
    x_max: u64,
}

impl IdealSums {
    /// Fails on any unclassifiable prime of norm ≤ x_max: every such prime is
    /// the minimal prime of the salient ideal it generates.
    pub fn new(spec: &NumberFieldSpec, ext: Option<&RelativeExtension>, x_max: u64) -> Result<Self> {
        let primes = prime_ideal_stream(spec, x_max)?;
        Self::from_primes(primes, ext, x_max)
    }

    pub fn from_primes(
        primes: Vec<PrimeIdeal>,
        ext: Option<&RelativeExtension>,
        x_max: u64,
    ) -> Result<Self> {
        check_bound(x_max)?;
        let primes: Vec<PrimeIdeal> = primes.into_iter().filter(|q| q.norm <= x_max).collect();
        let (artin, roles) = match ext {
            Some(ext) => {
                let artin = classify_all(ext, &primes)?;
                let roles = primes
                    .iter()
                    .zip(&artin)
                    .map(|(q, a)| match a {
                        ArtinResult::Class(_) if ext.exclude_ramified_in_k() && q.is_ramified_in_k() => {
                            Ok(MinRole::Excluded)
                        }
                        ArtinResult::Class(i) => Ok(MinRole::Class(*i)),
                        ArtinResult::RamifiedInL => Ok(MinRole::Excluded),
                        ArtinResult::Unclassifiable(pattern) => Err(unclassifiable_error(q, pattern)),
                    })
                    .collect::<Result<Vec<_>>>()?;
                (artin, roles)
            }
            None => (Vec::new(), Vec::new()),
        };
        Ok(Self {
            norms: primes.iter().map(|q| q.norm).collect(),
            primes,
            ext: ext.cloned(),
            artin,
            roles,
            x_max,
        })
    }

    pub fn primes(&self) -> &[PrimeIdeal] {
        &self.primes
    }

    /// Artin results aligned with [`Self::primes`] (empty without an extension).
    pub fn artin(&self) -> &[ArtinResult] {
        &self.artin
    }

    pub fn extension(&self) -> Option<&RelativeExtension> {
        self.ext.as_ref()
    }

    pub fn x_max(&self) -> u64 {
        self.x_max
    }

    fn check_range(&self, cps: &Checkpoints) -> Result<()> {
        if cps.limit() > self.x_max {
            return Err(Error::InvalidArgument(format!(
                "checkpoint {} beyond the prepared bound {}",
                cps.limit(),
                self.x_max
            )));
        }
        Ok(())
    }

    fn class_count(&self) -> usize {
        self.ext.as_ref().map_or(0, |e| e.classes().len())
    }

    fn partitions(&self, limit: u64) -> usize {
        let leading = self.norms.partition_point(|&n| n <= limit);
        leading.div_ceil(PARTITION)
    }

    fn squarefree_pass(&self, cps: &Checkpoints) -> SquarefreeAcc {
        let limit = cps.limit();
        let buckets = cps.len();
        let classes = self.class_count();
        let parts: Vec<SquarefreeAcc> = (0..self.partitions(limit))
            .into_par_iter()
            .map(|part| {
                let mut acc = SquarefreeAcc::new(classes, buckets);
                let end = ((part + 1) * PARTITION).min(self.norms.len());
                for lead in part * PARTITION..end {
                    let n = self.norms[lead];
                    if n > limit {
                        break;
                    }
                    self.squarefree_visit(&mut acc, cps, lead, n, -1, true);
                    self.squarefree_walk(&mut acc, cps, limit, lead, lead + 1, n, -1, true);
                }
                acc
            })
            .collect();
        let mut total = SquarefreeAcc::new(classes, buckets);
        for p in &parts {
            total.merge(p);
        }
        total
    }

    #[allow(clippy::too_many_arguments)]
    fn squarefree_walk(
        &self,
        acc: &mut SquarefreeAcc,
        cps: &Checkpoints,
        limit: u64,
        lead: usize,
        start: usize,
        norm: u64,
        mu: i64,
        salient: bool,
    ) {
        let lead_norm = self.norms[lead];
        for j in start..self.norms.len() {
            let n = match norm.checked_mul(self.norms[j]) {
                Some(n) if n <= limit => n,
                _ => break,
            };
            let salient = salient && self.norms[j] != lead_norm;
            self.squarefree_visit(acc, cps, lead, n, -mu, salient);
            self.squarefree_walk(acc, cps, limit, lead, j + 1, n, -mu, salient);
        }
    }

    #[inline]
    fn squarefree_visit(
        &self,
        acc: &mut SquarefreeAcc,
        cps: &Checkpoints,
        lead: usize,
        norm: u64,
        mu: i64,
        salient: bool,
    ) {
        let b = cps.bucket(norm);
        let nf = norm as f64;
        let term = mu as f64 / nf;
        acc.count_sqf[b] += 1;
        acc.mertens[b] += mu;
        acc.mertens_n[b].add(term);
        acc.mertens_log[b].add(term * nf.ln());
        if !salient {
            acc.count_nonsalient[b] += 1;
            return;
        }
        match self.roles.get(lead) {
            Some(MinRole::Class(c)) => {
                acc.sc[*c][b].add(-term);
                acc.salient_abs[b].add(1.0 / nf);
                acc.count_classified[b] += 1;
            }
            Some(MinRole::Excluded) => {
                acc.ramified_min[b].add(-term);
                acc.count_ramified[b] += 1;
            }
            // No extension: every salient ideal counts as classified.
            None => acc.count_classified[b] += 1,
        }
    }

    fn all_ideal_pass(&self, cps: &Checkpoints) -> AllIdealAcc {
        let limit = cps.limit();
        let buckets = cps.len();
        let classes = self.class_count();
        let parts: Vec<AllIdealAcc> = (0..self.partitions(limit))
            .into_par_iter()
            .map(|part| {
                let mut acc = AllIdealAcc::new(classes, buckets);
                let mut path = Vec::new();
                let end = ((part + 1) * PARTITION).min(self.norms.len());
                for lead in part * PARTITION..end {
                    if self.norms[lead] > limit {
                        break;
                    }
                    self.all_ideal_walk(&mut acc, cps, limit, lead, 1, &mut path, true);
                }
                acc
            })
            .collect();
        let mut total = AllIdealAcc::new(classes, buckets);
        for p in &parts {
            total.merge(p);
        }
        total
    }

    /// Extends `norm` by powers of each prime from index `start` on (only
    /// `start` itself when `single` is set) and recurses.
    #[allow(clippy::too_many_arguments)]
    fn all_ideal_walk(
        &self,
        acc: &mut AllIdealAcc,
        cps: &Checkpoints,
        limit: u64,
        start: usize,
        norm: u64,
        path: &mut Vec<usize>,
        single: bool,
    ) {
        let end = if single { start + 1 } else { self.norms.len() };
        for j in start..end {
            let pn = self.norms[j];
            let Some(first) = norm.checked_mul(pn).filter(|&n| n <= limit) else {
                break;
            };
            path.push(j);
            let mut m = first;
            loop {
                self.all_ideal_visit(acc, cps, m, path);
                self.all_ideal_walk(acc, cps, limit, j + 1, m, path, false);
                match m.checked_mul(pn) {
                    Some(next) if next <= limit => m = next,
                    _ => break,
                }
            }
            path.pop();
        }
    }

    #[inline]
    fn all_ideal_visit(&self, acc: &mut AllIdealAcc, cps: &Checkpoints, norm: u64, path: &[usize]) {
        let b = cps.bucket(norm);
        let top = self.norms[*path.last().unwrap()];
        let inv = 1.0 / norm as f64;
        let mut q = 0;
        for &j in path.iter().rev() {
            if self.norms[j] != top {
                break;
            }
            q += 1;
            if let Some(ArtinResult::Class(c)) = self.artin.get(j) {
                acc.qc[*c][b] += 1;
                acc.qc_over_n[*c][b].add(inv);
            }
        }
        acc.q[b] += q;
    }

    /// S_C(X) for every class, plus the ramified-minimum row, the salient
    /// |μ|/N total and the partition-identity counts.
    pub fn s_c_series(&self, cps: &Checkpoints) -> Result<SumSeries> {
        let ext = self
            .ext
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("S_C needs a relative extension".into()))?;
        self.check_range(cps)?;
        let acc = self.squarefree_pass(cps);
        let m = cps.len();
        let mut rows: Vec<SeriesRow> = ext
            .classes()
            .iter()
            .zip(&acc.sc)
            .map(|(entry, buckets)| SeriesRow {
                kind: SeriesKind::SC,
                label: entry.label.clone(),
                values: cumulative(buckets),
                reference: vec![Some(entry.weight.to_f64()); m],
            })
            .collect();
        let plain = |kind, values| SeriesRow {
            kind,
            label: String::new(),
            values,
            reference: vec![None; m],
        };
        rows.push(plain(SeriesKind::RamifiedMin, cumulative(&acc.ramified_min)));
        rows.push(plain(SeriesKind::SalientAbs, cumulative(&acc.salient_abs)));
        rows.push(plain(SeriesKind::CountSquarefree, cumulative_int(&acc.count_sqf)));
        rows.push(plain(
            SeriesKind::CountSalientClassified,
            cumulative_int(&acc.count_classified),
        ));
        rows.push(plain(
            SeriesKind::CountSalientRamifiedMin,
            cumulative_int(&acc.count_ramified),
        ));
        rows.push(plain(SeriesKind::CountNonSalient, cumulative_int(&acc.count_nonsalient)));
        Ok(SumSeries {
            checkpoints: cps.values().to_vec(),
            rows,
        })
    }

    /// Σμ(I), Σμ(I)/N(I), Σμ(I)log N(I)/N(I) over 2 ≤ N(I) ≤ X, and θ(X), ψ(X).
    pub fn mertens_series(&self, cps: &Checkpoints, residue: Option<&Residue>) -> Result<SumSeries> {
        self.check_range(cps)?;
        let acc = self.squarefree_pass(cps);
        let m = cps.len();
        let limit = cps.limit();
        let mut theta = vec![CompensatedSum::new(); m];
        let mut psi = vec![CompensatedSum::new(); m];
        for &n in self.norms.iter().take_while(|&&n| n <= limit) {
            let log_n = (n as f64).ln();
            theta[cps.bucket(n)].add(log_n);
            let mut power = n;
            loop {
                psi[cps.bucket(power)].add(log_n);
                match power.checked_mul(n) {
                    Some(next) if next <= limit => power = next,
                    _ => break,
                }
            }
        }
        let xs: Vec<Option<f64>> = cps.values().iter().map(|&x| Some(x as f64)).collect();
        let row = |kind, values, reference| SeriesRow {
            kind,
            label: String::new(),
            values,
            reference,
        };
        Ok(SumSeries {
            checkpoints: cps.values().to_vec(),
            rows: vec![
                row(SeriesKind::Mertens, cumulative_int(&acc.mertens), vec![None; m]),
                row(SeriesKind::MertensOverNorm, cumulative(&acc.mertens_n), vec![None; m]),
                row(
                    SeriesKind::MertensLogOverNorm,
                    cumulative(&acc.mertens_log),
                    vec![residue.map(|r| -1.0 / r.value); m],
                ),
                row(SeriesKind::Theta, cumulative(&theta), xs.clone()),
                row(SeriesKind::Psi, cumulative(&psi), xs),
            ],
        })
    }

    /// ΣQ_C(I), ΣQ(I), ΣQ_C(I)/N(I) over all ideals with 2 ≤ N(I) ≤ X.
    pub fn qc_series(&self, cps: &Checkpoints, residue: &Residue) -> Result<QcSeries> {
        let ext = self
            .ext
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("Q_C sums need a relative extension".into()))?;
        self.check_range(cps)?;
        let acc = self.all_ideal_pass(cps);
        let m = cps.len();
        let c_k = residue.value;
        let xs: Vec<f64> = cps.values().iter().map(|&x| x as f64).collect();
        let mut rows = Vec::new();
        let mut k_prime = Vec::new();
        for (i, entry) in ext.classes().iter().enumerate() {
            let w = entry.weight.to_f64();
            rows.push(SeriesRow {
                kind: SeriesKind::SumQC,
                label: entry.label.clone(),
                values: cumulative_int(&acc.qc[i]),
                reference: xs.iter().map(|x| Some(c_k * w * x)).collect(),
            });
            let over_n = cumulative(&acc.qc_over_n[i]);
            // Constant offset of ΣQ_C/N against c_K·w·log X, least squares.
            let residuals: Vec<f64> = xs
                .iter()
                .zip(&over_n)
                .filter(|(&x, _)| x >= 2.0)
                .map(|(x, v)| v - c_k * w * x.ln())
                .collect();
            let kp = if residuals.is_empty() {
                0.0
            } else {
                residuals.iter().copied().collect::<CompensatedSum>().value() / residuals.len() as f64
            };
            k_prime.push((entry.label.clone(), kp));
            rows.push(SeriesRow {
                kind: SeriesKind::SumQCOverNorm,
                label: entry.label.clone(),
                values: over_n,
                reference: xs
                    .iter()
                    .map(|&x| (x >= 2.0).then(|| c_k * w * x.ln() + kp))
                    .collect(),
            });
        }
        rows.push(SeriesRow {
            kind: SeriesKind::SumQ,
            label: String::new(),
            values: cumulative_int(&acc.q),
            reference: xs.iter().map(|x| Some(c_k * x)).collect(),
        });
        debug_assert_eq!(rows.len(), 2 * ext.classes().len() + 1);
        let _ = m;
        Ok(QcSeries {
            series: SumSeries {
                checkpoints: cps.values().to_vec(),
                rows,
            },
            k_prime,
        })
    }

    /// Runs [`duality_check`] on every squarefree ideal of norm ≤ bound and
    /// returns the failures (ideal, outcome).
    pub fn duality_failures(
        &self,
        bound: u64,
        pred: &MinPrimePredicate,
    ) -> Result<Vec<(SquarefreeIdeal, DualityOutcome)>> {
        let ext = self
            .ext
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("duality needs a relative extension".into()))?;
        let bound = bound.min(self.x_max);
        let holds: std::collections::HashMap<PrimeIdeal, bool> = self
            .primes
            .iter()
            .zip(&self.artin)
            .map(|(q, a)| (*q, pred.holds(ext, a, q)))
            .collect();
        let mut failures = Vec::new();
        let mut err = None;
        enumerate_squarefree(&self.primes, bound, |ideal| {
            if err.is_some() {
                return;
            }
            let flags: Vec<bool> = ideal.factors().iter().map(|q| holds[q]).collect();
            match duality_from_flags(ideal, &flags) {
                Ok(out) if !out.equal => failures.push((ideal.clone(), out)),
                Ok(_) => {}
                Err(e) => err = Some(e),
            }
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(failures),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QcSeries {
    pub series: SumSeries,
    /// Fitted constant k′ per class label.
    pub k_prime: Vec<(String, f64)>,
}

/// S_C(X) series for `ext` at the given checkpoints.
pub fn s_c_series(
    spec: &NumberFieldSpec,
    ext: &RelativeExtension,
    cps: &Checkpoints,
) -> Result<SumSeries> {
    IdealSums::new(spec, Some(ext), cps.limit())?.s_c_series(cps)
}

pub fn qc_series(
    spec: &NumberFieldSpec,
    ext: &RelativeExtension,
    cps: &Checkpoints,
    residue: &Residue,
) -> Result<QcSeries> {
    IdealSums::new(spec, Some(ext), cps.limit())?.qc_series(cps, residue)
}

pub fn mertens_series(
    spec: &NumberFieldSpec,
    cps: &Checkpoints,
    residue: Option<&Residue>,
) -> Result<SumSeries> {
    IdealSums::new(spec, None, cps.limit())?.mertens_series(cps, residue)
}
