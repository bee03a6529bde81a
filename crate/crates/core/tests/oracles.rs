//! Sums from the partitioned engine against independent computations.

use cheb_core::analytic::smooth_count_with;
use cheb_core::galois::{artin_class, ArtinResult, RelativeExtension};
use cheb_core::moebius::{enumerate_squarefree, Boundary, Checkpoints, IdealSums, SeriesKind};
use cheb_core::numberfield::{count_ideals, residue, residue_from_invariants, NumberFieldSpec};
use cheb_core::summation::CompensatedSum;

fn config(rel: &str) -> String {
    let dir = env!("CARGO_MANIFEST_DIR");
    std::fs::read_to_string(format!("{dir}/../../configs/{rel}")).unwrap()
}

fn example1() -> (NumberFieldSpec, RelativeExtension) {
    (
        NumberFieldSpec::from_json(&config("fields/zeta7.json")).unwrap(),
        RelativeExtension::from_json(&config("extensions/example1.json")).unwrap(),
    )
}

fn example2() -> (NumberFieldSpec, RelativeExtension) {
    (
        NumberFieldSpec::from_json(&config("fields/gaussian.json")).unwrap(),
        RelativeExtension::from_json(&config("extensions/example2.json")).unwrap(),
    )
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn bundled_configs_match_builtin_fields() {
    let (k, ext) = example2();
    assert_eq!(k.min_poly(), NumberFieldSpec::gaussian().min_poly());
    assert_eq!(ext.classes(), RelativeExtension::s3_cubic().classes());
    assert!(ext.exclude_ramified_in_k());
    let (k, ext) = example1();
    assert_eq!(k.min_poly(), NumberFieldSpec::cyclotomic7().min_poly());
    assert_eq!(ext.classes(), RelativeExtension::sqrt2().classes());
}

/// Per-ideal recomputation of every squarefree row, from the rich
/// enumeration with Artin classes looked up one prime at a time.
#[test]
fn fast_engine_matches_rich_enumeration() {
    for (k, ext) in [example1(), example2()] {
        let xs = vec![500, 3000, 12_000];
        let cps = Checkpoints::inclusive(xs.clone()).unwrap();
        let sums = IdealSums::new(&k, Some(&ext), 12_000).unwrap();
        let fast = sums.s_c_series(&cps).unwrap();
        let mertens = sums.mertens_series(&cps, None).unwrap();
        let classes = ext.classes().len();
        for (i, &x) in xs.iter().enumerate() {
            let mut sc = vec![CompensatedSum::new(); classes];
            let mut ram = CompensatedSum::new();
            let mut mu_n = CompensatedSum::new();
            let (mut n, mut salient_classified, mut salient_ram, mut nonsalient, mut mu) = (0, 0, 0, 0, 0i64);
            enumerate_squarefree(sums.primes(), x, |ideal| {
                n += 1;
                mu += ideal.mu() as i64;
                let term = ideal.mu() as f64 / ideal.norm() as f64;
                mu_n.add(term);
                let Some(q) = ideal.min_prime() else {
                    nonsalient += 1;
                    return;
                };
                match artin_class(&ext, q).unwrap() {
                    ArtinResult::Class(c) if !(ext.exclude_ramified_in_k() && q.is_ramified_in_k()) => {
                        sc[c].add(-term);
                        salient_classified += 1;
                    }
                    ArtinResult::Unclassifiable(_) => panic!("unclassifiable {q}"),
                    _ => {
                        ram.add(-term);
                        salient_ram += 1;
                    }
                }
            })
            .unwrap();
            for (c, entry) in ext.classes().iter().enumerate() {
                let got = fast.value(SeriesKind::SC, &entry.label, i);
                assert!((got - sc[c].value()).abs() < 1e-12, "{} X={x}", entry.label);
            }
            assert!((fast.value(SeriesKind::RamifiedMin, "", i) - ram.value()).abs() < 1e-12);
            assert_eq!(fast.value(SeriesKind::CountSquarefree, "", i), n as f64);
            assert_eq!(fast.value(SeriesKind::CountSalientClassified, "", i), salient_classified as f64);
            assert_eq!(fast.value(SeriesKind::CountSalientRamifiedMin, "", i), salient_ram as f64);
            assert_eq!(fast.value(SeriesKind::CountNonSalient, "", i), nonsalient as f64);
            assert_eq!(mertens.value(SeriesKind::Mertens, "", i), mu as f64);
            assert!((mertens.value(SeriesKind::MertensOverNorm, "", i) - mu_n.value()).abs() < 1e-12);
        }
    }
}

/// Σ Q_C(I) over 2 ≤ N(I) ≤ X equals Σ_{𝔭 ∈ C, N𝔭 ≤ X} Ψ(X/N𝔭, N𝔭): each
/// ideal is 𝔭·J with every prime of J of norm at most N𝔭.
#[test]
fn q_sums_match_smooth_count_decomposition() {
    for ((k, ext), x) in [(example1(), 30_000u64), (example2(), 60_000)] {
        let sums = IdealSums::new(&k, Some(&ext), x).unwrap();
        let c_k = residue(&k, 10_000).unwrap();
        let q = sums
            .qc_series(&Checkpoints::inclusive(vec![x]).unwrap(), &c_k)
            .unwrap()
            .series;
        let mut want = vec![0u64; ext.classes().len()];
        let mut total = 0u64;
        for (p, a) in sums.primes().iter().zip(sums.artin()) {
            let psi = smooth_count_with(sums.primes(), x / p.norm, p.norm).unwrap().exact;
            total += psi;
            if let ArtinResult::Class(c) = a {
                want[*c] += psi;
            }
        }
        for (c, entry) in ext.classes().iter().enumerate() {
            assert_eq!(q.value(SeriesKind::SumQC, &entry.label, 0), want[c] as f64, "{}", entry.label);
        }
        assert_eq!(q.value(SeriesKind::SumQ, "", 0), total as f64);
    }
}

#[test]
fn q_sum_gaussian_ten_by_listing() {
    // Norms 2, 4, 5, 5, 8, 9, 10, 10; each ideal has one prime of maximal norm.
    let (k, ext) = example2();
    let c_k = residue(&k, 100).unwrap();
    let q = IdealSums::new(&k, Some(&ext), 10)
        .unwrap()
        .qc_series(&Checkpoints::inclusive(vec![10]).unwrap(), &c_k)
        .unwrap()
        .series;
    assert_eq!(q.value(SeriesKind::SumQ, "", 0), 8.0);
    let per_class: f64 = ext
        .classes()
        .iter()
        .map(|c| q.value(SeriesKind::SumQC, &c.label, 0))
        .sum();
    // No prime of norm <= 10 ramifies in L, so every maximal prime is classified.
    assert_eq!(per_class, 8.0);
}

#[test]
fn class_sums_bounded_by_absolute_sum() {
    let (k, ext) = example2();
    let cps = Checkpoints::inclusive(vec![1000, 50_000, 200_000]).unwrap();
    let s = IdealSums::new(&k, Some(&ext), 200_000).unwrap().s_c_series(&cps).unwrap();
    for i in 0..cps.len() {
        let total: f64 = ext
            .classes()
            .iter()
            .map(|c| s.value(SeriesKind::SC, &c.label, i))
            .sum();
        assert!(total.abs() <= s.value(SeriesKind::SalientAbs, "", i));
    }
}

#[test]
fn prefix_stability_is_bitwise() {
    let (k, ext) = example2();
    let sums = IdealSums::new(&k, Some(&ext), 150_000).unwrap();
    let c_k = residue(&k, 100).unwrap();
    let short = Checkpoints::inclusive(vec![2000, 40_000]).unwrap();
    let long = Checkpoints::inclusive(vec![2000, 40_000, 90_000, 150_000]).unwrap();
    let pairs = [
        (sums.s_c_series(&short).unwrap(), sums.s_c_series(&long).unwrap()),
        (sums.mertens_series(&short, None).unwrap(), sums.mertens_series(&long, None).unwrap()),
        (
            sums.qc_series(&short, &c_k).unwrap().series,
            sums.qc_series(&long, &c_k).unwrap().series,
        ),
    ];
    for (a, b) in &pairs {
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            assert_eq!(ra.kind, rb.kind);
            for i in 0..short.len() {
                assert_eq!(ra.values[i].to_bits(), rb.values[i].to_bits(), "{:?} {}", ra.kind, ra.label);
            }
        }
    }
}

#[test]
fn worker_count_does_not_change_bits() {
    let (k, ext) = example2();
    let c_k = residue(&k, 100).unwrap();
    let cps = Checkpoints::inclusive(vec![10_000, 100_000, 250_000]).unwrap();
    let run = |threads| {
        in_pool(threads, || {
            let sums = IdealSums::new(&k, Some(&ext), 250_000).unwrap();
            (
                sums.s_c_series(&cps).unwrap(),
                sums.mertens_series(&cps, Some(&c_k)).unwrap(),
                sums.qc_series(&cps, &c_k).unwrap(),
            )
        })
    };
    let one = run(1);
    for threads in [2, 3, 8] {
        let other = run(threads);
        assert!(one == other, "{threads} workers");
    }
}

#[test]
fn exclusive_boundary_drops_norm_equal_to_checkpoint() {
    let (k, ext) = example2();
    // 1010 = 2·5·101 is the norm of squarefree ideals.
    let x = 1010;
    let sums = IdealSums::new(&k, Some(&ext), x).unwrap();
    let inc = sums.s_c_series(&Checkpoints::inclusive(vec![x]).unwrap()).unwrap();
    let exc = sums
        .s_c_series(&Checkpoints::new(vec![x], Boundary::Exclusive).unwrap())
        .unwrap();
    let mut below = sums.s_c_series(&Checkpoints::inclusive(vec![x - 1]).unwrap()).unwrap();
    below.checkpoints = vec![x];
    assert_eq!(exc, below);
    assert!(inc.value(SeriesKind::CountSquarefree, "", 0) > exc.value(SeriesKind::CountSquarefree, "", 0));
}

#[test]
fn excluding_ramified_minimum_only_moves_those_ideals() {
    let (k, ext) = example1();
    let cps = Checkpoints::inclusive(vec![10_000, 20_000, 30_000, 40_000]).unwrap();
    let with = IdealSums::new(&k, Some(&ext), 40_000).unwrap().s_c_series(&cps).unwrap();
    let plain_ext = ext.clone().with_exclude_ramified_in_k(false);
    let without = IdealSums::new(&k, Some(&plain_ext), 40_000).unwrap().s_c_series(&cps).unwrap();
    // The prime above 7 is totally ramified in K and x^2 - 2 splits mod 7.
    let frozen = [0.480_035_582_76, 0.495_881_014_15, 0.503_196_330_47, 0.508_895_654_67];
    for (i, want) in frozen.iter().enumerate() {
        assert_eq!(with.value(SeriesKind::SC, "nonid", i), without.value(SeriesKind::SC, "nonid", i));
        let moved = without.value(SeriesKind::SC, "id", i) - with.value(SeriesKind::SC, "id", i);
        let ram = with.value(SeriesKind::RamifiedMin, "", i) - without.value(SeriesKind::RamifiedMin, "", i);
        assert!((moved - ram).abs() < 1e-12);
        assert!((without.value(SeriesKind::SC, "id", i) - want).abs() < 1e-10);
    }
}

#[test]
fn theta_over_x_near_one() {
    let k = NumberFieldSpec::gaussian();
    let s = IdealSums::new(&k, None, 1_000_000)
        .unwrap()
        .mertens_series(&Checkpoints::inclusive(vec![1_000_000]).unwrap(), None)
        .unwrap();
    let theta = s.value(SeriesKind::Theta, "", 0) / 1e6;
    let psi = s.value(SeriesKind::Psi, "", 0) / 1e6;
    assert!((theta - 1.0).abs() < 0.01, "theta/X = {theta}");
    assert!(psi > theta && (psi - 1.0).abs() < 0.01, "psi/X = {psi}");
}

#[test]
fn cyclotomic_residue_matches_ideal_count() {
    let (k, _) = example1();
    let c_k = residue_from_invariants(&k).unwrap();
    let ratio = count_ideals(&k, 1_000_000).unwrap().ratio;
    assert!(((ratio - c_k) / c_k).abs() < 0.01, "{ratio} vs {c_k}");
}

#[test]
fn k_prime_fit_is_residual_mean() {
    let (k, ext) = example2();
    let c_k = residue(&k, 100).unwrap();
    let xs = [20_000u64, 40_000, 80_000];
    let q = IdealSums::new(&k, Some(&ext), 80_000)
        .unwrap()
        .qc_series(&Checkpoints::inclusive(xs.to_vec()).unwrap(), &c_k)
        .unwrap();
    for (label, kp) in &q.k_prime {
        let w = ext.classes()[ext.class_index(label).unwrap()].weight.to_f64();
        let mean = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| q.series.value(SeriesKind::SumQCOverNorm, label, i) - c_k.value * w * (x as f64).ln())
            .sum::<f64>()
            / 3.0;
        assert!((kp - mean).abs() < 1e-12);
    }
}
