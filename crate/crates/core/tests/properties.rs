use proptest::prelude::*;

use cheb_core::finitefield::{ddf_pattern, pattern_over_extension, FactorPattern, FpPoly};
use cheb_core::numberfield::{count_ideals, prime_ideal_stream, NumberFieldSpec};

const SMALL_PRIMES: &[u64] = &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Monic integer polynomial, ascending coefficients, degree 1..=max_deg.
fn monic(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..50, 1..=max_deg).prop_map(|mut c| {
        c.push(1);
        c
    })
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(SMALL_PRIMES)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ddf_degrees_sum_to_degree(g in monic(8), p in prime()) {
        let f = FpPoly::from_integers(p, &g);
        let pat = ddf_pattern(&f).unwrap();
        let d = (g.len() - 1) as u32;
        if pat.is_squarefree() {
            prop_assert_eq!(pat.total_degree(), d);
        } else {
            prop_assert!(pat.total_degree() < d);
            prop_assert_eq!(pat.total_degree() as usize, f.radical().degree().unwrap());
        }
    }

    #[test]
    fn linear_factors_match_root_count(g in monic(3), p in prime()) {
        let f = FpPoly::from_integers(p, &g);
        let pat = ddf_pattern(&f).unwrap();
        let roots = (0..p).filter(|&x| f.eval(x) == 0).count() as u32;
        let linear = pat.entries().iter().find(|e| e.0 == 1).map_or(0, |e| e.1);
        prop_assert_eq!(linear, roots);
    }

    #[test]
    fn extension_of_degree_one_is_prime_field(g in monic(6), p in prime()) {
        let base = ddf_pattern(&FpPoly::from_integers(p, &g)).unwrap();
        prop_assert_eq!(pattern_over_extension(&g, p, 1).unwrap(), base);
    }

    /// An irreducible of degree d over 𝔽_p splits over 𝔽_{p^f} into gcd(d, f)
    /// factors of degree d / gcd(d, f).
    #[test]
    fn extension_pattern_follows_gcd_rule(g in monic(6), p in prime(), f_res in 1u32..=4) {
        let base = ddf_pattern(&FpPoly::from_integers(p, &g)).unwrap();
        prop_assume!(base.is_squarefree());
        prop_assume!((p as f64).powi(f_res as i32) < 1e12);
        let want = FactorPattern::new(
            base.entries().iter().map(|&(d, c)| {
                let k = gcd(d, f_res);
                (d / k, c * k)
            }),
            true,
        );
        prop_assert_eq!(pattern_over_extension(&g, p, f_res).unwrap(), want);
    }

    #[test]
    fn ddf_is_deterministic(g in monic(7), p in prime(), f_res in 1u32..=3) {
        prop_assert_eq!(
            pattern_over_extension(&g, p, f_res).unwrap(),
            pattern_over_extension(&g, p, f_res).unwrap()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prime_stream_prefix_stable(small in 1u64..3000, extra in 0u64..3000) {
        for spec in [NumberFieldSpec::gaussian(), NumberFieldSpec::cyclotomic7()] {
            let short = prime_ideal_stream(&spec, small).unwrap();
            let long = prime_ideal_stream(&spec, small + extra).unwrap();
            let prefix: Vec<_> = long.into_iter().filter(|q| q.norm <= small).collect();
            prop_assert_eq!(short, prefix);
        }
    }

    #[test]
    fn ideal_count_monotone(a in 1u64..20_000, b in 0u64..5_000) {
        let k = NumberFieldSpec::gaussian();
        prop_assert!(count_ideals(&k, a).unwrap().count <= count_ideals(&k, a + b).unwrap().count);
    }
}
