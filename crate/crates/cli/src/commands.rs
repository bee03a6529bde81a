use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use log::info;

use cheb_core::analytic::{dickman_rho, gamma_bound, li, smooth_count, DickmanTable};
use cheb_core::finitefield::reduce_i64;
use cheb_core::galois::{prime_census, RelativeExtension};
use cheb_core::moebius::{Checkpoints, IdealSums, MinPrimePredicate, SeriesKind};
use cheb_core::numberfield::{
    count_ideals as count_all, decompose_prime, prime_ideal_stream, primes_up_to, residue,
    residue_from_invariants, NumberFieldSpec,
};
use cheb_core::report::{format_value, Report, ReportRow};

use crate::{AnalyticArgs, Failure, RunArgs};

/// Smallest norm bound for the class-density suite.
const CENSUS_MIN: u64 = 100_000;
/// Largest rational prime checked against the exhaustive root count.
const ROOT_ORACLE_MAX: u64 = 10_000;
const MAX_COUNTEREXAMPLES: usize = 10;
/// Bound used by `verify` when neither --xmax nor --checkpoints is given.
const DEFAULT_VERIFY_BOUND: u64 = 2000;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_field(path: &Path) -> Result<NumberFieldSpec, Failure> {
    Ok(NumberFieldSpec::from_json(&read(path)?)?)
}

fn load_ext(path: Option<&Path>) -> Result<Option<RelativeExtension>, Failure> {
    path.map(|p| Ok(RelativeExtension::from_json(&read(p)?)?))
        .transpose()
}

fn require_ext(args: &RunArgs) -> Result<RelativeExtension, Failure> {
    load_ext(args.ext.as_deref())?
        .ok_or_else(|| Failure::Usage("this command needs --ext".into()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Resolves (x_max, checkpoints). Without explicit checkpoints the single
/// checkpoint is x_max, dropped when x_max < 2.
fn plan(args: &RunArgs, default_xmax: Option<u64>) -> Result<(u64, Checkpoints), Failure> {
    let boundary = args.boundary.into();
    if args.checkpoints.is_empty() {
        let x = args
            .xmax
            .or(default_xmax)
            .ok_or_else(|| Failure::Usage("give --xmax or --checkpoints".into()))?;
        let values = if x >= 2 { vec![x] } else { Vec::new() };
        return Ok((x, Checkpoints::new(values, boundary)?));
    }
    let last = *args.checkpoints.last().unwrap();
    let x = args.xmax.unwrap_or(last);
    if let Some(&c) = args.checkpoints.iter().find(|&&c| c > x) {
        return Err(Failure::Usage(format!("checkpoint {c} exceeds --xmax {x}")));
    }
    Ok((x, Checkpoints::new(args.checkpoints.clone(), boundary)?))
}

pub fn sums(args: &RunArgs) -> Result<(), Failure> {
    let spec = load_field(&args.field)?;
    let ext = require_ext(args)?;
    let (_, cps) = plan(args, None)?;
    let mut report = Report::new();
    if let Some(&last) = cps.values().last() {
        let c_k = residue(&spec, last.max(10_000))?;
        info!("c_K = {} ({:?})", c_k.value, c_k.source);
        let sums = IdealSums::new(&spec, Some(&ext), last)?;
        info!("{} prime ideals up to {last}", sums.primes().len());
        report.push_series(&sums.s_c_series(&cps)?);
        report.push_series(&sums.mertens_series(&cps, Some(&c_k))?);
        let q = sums.qc_series(&cps, &c_k)?;
        report.push_series(&q.series);
        for (label, k_prime) in &q.k_prime {
            report.push(ReportRow {
                x: Some(last),
                series: "k_prime".into(),
                label: label.clone(),
                value: *k_prime,
                reference: None,
            });
        }
    }
    emit(args.out.as_deref(), &report.to_tsv())
}

/// Result of one verification suite.
struct Suite {
    name: &'static str,
    checked: u64,
    failures: u64,
    examples: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checked: 0,
            failures: 0,
            examples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < MAX_COUNTEREXAMPLES {
                self.examples.push(detail());
            }
        }
    }
}

fn splitting_suite(spec: &NumberFieldSpec, bound: u64) -> Result<Suite, Failure> {
    let mut suite = Suite::new("splitting");
    let d = spec.degree() as u32;
    for p in primes_up_to(bound) {
        let rep = decompose_prime(spec, p)?;
        if rep.index_divisor {
            return Err(cheb_core::Error::IndexDivisor(p).into());
        }
        let total: u32 = rep.primes.iter().map(|q| q.ram_index * q.res_degree).sum();
        suite.check(total == d, || format!("p={p}: sum of e*f = {total}, degree {d}"));
        if rep.ramified_in_k || p > ROOT_ORACLE_MAX {
            continue;
        }
        let linear = rep.primes.iter().filter(|q| q.res_degree == 1).count() as u64;
        let coeffs: Vec<u64> = spec.min_poly().iter().map(|&c| reduce_i64(c, p)).collect();
        let roots = (0..p)
            .filter(|&x| {
                coeffs
                    .iter()
                    .rev()
                    .fold(0u64, |acc, &c| ((acc as u128 * x as u128 + c as u128) % p as u128) as u64)
                    == 0
            })
            .count() as u64;
        suite.check(linear == roots, || {
            format!("p={p}: {linear} degree-1 primes but {roots} roots mod p")
        });
    }
    Ok(suite)
}

pub fn verify(args: &RunArgs) -> Result<(), Failure> {
    let spec = load_field(&args.field)?;
    let ext = load_ext(args.ext.as_deref())?;
    let (bound, cps) = plan(args, Some(DEFAULT_VERIFY_BOUND))?;
    let mut suites = vec![splitting_suite(&spec, bound)?];

    if let Some(ext) = &ext {
        let sums = IdealSums::new(&spec, Some(ext), bound)?;

        let mut partition = Suite::new("partition");
        if !cps.is_empty() {
            let s = sums.s_c_series(&cps)?;
            for (i, &x) in cps.values().iter().enumerate() {
                let get = |k| s.value(k, "", i) as u64;
                let total = get(SeriesKind::CountSquarefree);
                let parts = get(SeriesKind::CountSalientClassified)
                    + get(SeriesKind::CountSalientRamifiedMin)
                    + get(SeriesKind::CountNonSalient);
                partition.check(parts == total, || {
                    format!("X={x}: parts sum to {parts}, {total} squarefree ideals")
                });
            }
        }
        suites.push(partition);

        let mut duality = Suite::new("duality");
        let mut preds: Vec<MinPrimePredicate> = ext
            .classes()
            .iter()
            .map(|c| MinPrimePredicate::ArtinClassIs(c.label.clone()))
            .collect();
        preds.push(MinPrimePredicate::SplitsCompletely);
        for pred in &preds {
            let failures = sums.duality_failures(bound, pred)?;
            let mut checked = 0u64;
            cheb_core::moebius::enumerate_squarefree(sums.primes(), bound, |_| checked += 1)?;
            duality.checked += checked;
            duality.failures += failures.len() as u64;
            for (ideal, out) in failures {
                if duality.examples.len() < MAX_COUNTEREXAMPLES {
                    duality
                        .examples
                        .push(format!("{pred}: {ideal}: lhs {} rhs {}", out.lhs, out.rhs));
                }
            }
        }
        suites.push(duality);

        // Each class must hold its share of primes, to within four standard
        // deviations of a binomial draw or 0.05, whichever is larger.
        let mut classes = Suite::new("class-density");
        let census = prime_census(&spec, ext, bound.max(CENSUS_MIN))?;
        let n = census.total as f64;
        for c in &census.classes {
            let sigma = (c.weight * (1.0 - c.weight) / n.max(1.0)).sqrt();
            let tol = (4.0 * sigma).max(0.05);
            classes.check((c.ratio - c.weight).abs() <= tol, || {
                format!(
                    "class {} at X={}: ratio {} vs weight {} (tolerance {})",
                    c.label,
                    census.x_max,
                    format_value(c.ratio),
                    format_value(c.weight),
                    format_value(tol)
                )
            });
        }
        suites.push(classes);
    }

    let mut text = String::from("suite\tstatus\tchecked\tfailures\n");
    for s in &suites {
        let status = if s.failures == 0 { "PASS" } else { "FAIL" };
        let _ = writeln!(text, "{}\t{status}\t{}\t{}", s.name, s.checked, s.failures);
    }
    for s in &suites {
        for e in &s.examples {
            let _ = writeln!(text, "# counterexample {}: {e}", s.name);
        }
    }
    emit(args.out.as_deref(), &text)?;
    if suites.iter().any(|s| s.failures > 0) {
        Err(Failure::Verification)
    } else {
        Ok(())
    }
}

pub fn analytic(args: &AnalyticArgs) -> Result<(), Failure> {
    let mut report = Report::new();
    let table = DickmanTable::standard();
    let row = |x, series: &str, label: String, value, reference| ReportRow {
        x,
        series: series.into(),
        label,
        value,
        reference,
    };

    let mut violations = 0u64;
    for (beta, rho) in table.nodes() {
        if rho > gamma_bound(beta) * (1.0 + 1e-12) {
            violations += 1;
        }
    }
    for k in 0..=40 {
        let beta = k as f64 * 0.5;
        report.push(row(None, "rho", format!("beta={beta}"), dickman_rho(beta)?, Some(gamma_bound(beta))));
    }
    for &beta in &args.beta {
        report.push(row(None, "rho", format!("beta={beta}"), dickman_rho(beta)?, Some(gamma_bound(beta))));
    }
    let rho2 = dickman_rho(2.0)?;
    let closed = 1.0 - 2f64.ln();
    report.push(row(None, "rho_closed_form", "beta=2".into(), rho2, Some(closed)));
    report.push(row(None, "gamma_bound_violations", String::new(), violations as f64, Some(0.0)));

    for &x in &args.checkpoints {
        report.push(row(Some(x), "li", String::new(), li(x as f64)?, None));
    }
    if let Some(path) = &args.field {
        let spec = load_field(path)?;
        let y = args.y.unwrap_or_else(|| (args.xmax as f64).sqrt().floor() as u64);
        let s = smooth_count(&spec, args.xmax, y)?;
        let label = if s.bound_only { format!("Y={y} bound-only") } else { format!("Y={y}") };
        report.push(row(Some(s.x), "smooth_count", label.clone(), s.exact as f64, Some(s.predicted)));
        report.push(row(Some(s.x), "smooth_rel_error", label, s.rel_error, None));
    }
    emit(args.out.as_deref(), &report.to_tsv())?;
    if violations > 0 || (rho2 - closed).abs() > 1e-6 {
        return Err(Failure::Verification);
    }
    Ok(())
}

pub fn primes(args: &RunArgs) -> Result<(), Failure> {
    let spec = load_field(&args.field)?;
    let ext = load_ext(args.ext.as_deref())?;
    let (x, _) = plan(args, None)?;
    let text = match ext {
        Some(ext) => {
            let mut report = Report::new();
            report.push_census(&prime_census(&spec, &ext, x)?)?;
            report.to_tsv()
        }
        None => {
            let mut text = String::from("p\tnorm\tres_degree\tram_index\tslot\n");
            for q in prime_ideal_stream(&spec, x)? {
                let _ = writeln!(
                    text,
                    "{}\t{}\t{}\t{}\t{}",
                    q.p, q.norm, q.res_degree, q.ram_index, q.slot
                );
            }
            text
        }
    };
    emit(args.out.as_deref(), &text)
}

pub fn count_ideals(args: &RunArgs) -> Result<(), Failure> {
    let spec = load_field(&args.field)?;
    let (_, cps) = plan(args, None)?;
    let c_k = residue_from_invariants(&spec).ok();
    let mut report = Report::new();
    for &x in cps.values() {
        let count = count_all(&spec, x)?;
        report.push(ReportRow {
            x: Some(x),
            series: "count_ideals".into(),
            label: String::new(),
            value: count.count as f64,
            reference: c_k.map(|c| c * x as f64),
        });
        report.push(ReportRow {
            x: Some(x),
            series: "count_ratio".into(),
            label: String::new(),
            value: count.ratio,
            reference: c_k,
        });
    }
    emit(args.out.as_deref(), &report.to_tsv())
}
