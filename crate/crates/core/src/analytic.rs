//! Dickman's ρ, the logarithmic integral, and exact smooth-ideal counts
//! Ψ(X, Y) compared against X·ρ(log X / log Y).

use std::sync::OnceLock;

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::numberfield::{check_bound, count_products, prime_ideal_stream, NumberFieldSpec, PrimeIdeal};

pub const DEFAULT_STEP: f64 = 1.0 / 1024.0;
pub const DEFAULT_BETA_MAX: f64 = 20.0;

/// ρ sampled on the grid k·h, 0 ≤ k·h ≤ β_max.
#[derive(Debug, Clone, PartialEq)]
pub struct DickmanTable {
    step: f64,
    beta_max: f64,
    values: Vec<f64>,
}

/// A ρ value, or for β beyond the table the bound 1/Γ(β+1) in its place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoValue {
    pub value: f64,
    pub bound_only: bool,
}

impl DickmanTable {
    /// Solves the delay equation in its averaged form
    /// βρ(β) = ∫_{β−1}^{β} ρ(t) dt, discretised with the trapezoid rule and
    /// solved for the newest node. Every term is positive, so the grid stays
    /// positive. `1/step` must be a positive integer.
    pub fn new(step: f64, beta_max: f64) -> Result<Self> {
        let per_unit = 1.0 / step;
        if !(step > 0.0) || per_unit.fract() != 0.0 || !(beta_max >= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "Dickman grid needs 1/step integral and beta_max >= 1 (step {step}, beta_max {beta_max})"
            )));
        }
        let per_unit = per_unit as usize;
        let n = (beta_max * per_unit as f64).ceil() as usize;
        let mut values = vec![1.0; n + 1];
        for k in per_unit + 1..=n {
            let beta = k as f64 * step;
            // Interior nodes summed smallest-first.
            let interior: f64 = values[k - per_unit + 1..k].iter().rev().sum();
            let window = 0.5 * values[k - per_unit] + interior;
            values[k] = step * window / (beta - 0.5 * step);
        }
        Ok(Self {
            step,
            beta_max: n as f64 * step,
            values,
        })
    }

    /// Shared table with h = 2⁻¹⁰ on [0, 20].
    pub fn standard() -> &'static DickmanTable {
        static TABLE: OnceLock<DickmanTable> = OnceLock::new();
        TABLE.get_or_init(|| DickmanTable::new(DEFAULT_STEP, DEFAULT_BETA_MAX).expect("valid grid"))
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn beta_max(&self) -> f64 {
        self.beta_max
    }

    /// `(β, ρ(β))` at every grid node.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| (k as f64 * self.step, v))
    }

    /// ρ(β) by linear interpolation between nodes.
    pub fn rho(&self, beta: f64) -> Result<f64> {
        if !(beta >= 0.0) || beta > self.beta_max {
            return Err(Error::OutOfRange(format!(
                "beta = {beta} outside [0, {}]",
                self.beta_max
            )));
        }
        let pos = beta / self.step;
        let k = pos.floor() as usize;
        if k + 1 >= self.values.len() {
            return Ok(self.values[self.values.len() - 1]);
        }
        let frac = pos - k as f64;
        Ok(self.values[k] + frac * (self.values[k + 1] - self.values[k]))
    }

    /// Like [`Self::rho`], but β past the table yields 1/Γ(β+1), flagged.
    pub fn rho_or_bound(&self, beta: f64) -> Result<RhoValue> {
        if beta > self.beta_max {
            return Ok(RhoValue {
                value: gamma_bound(beta),
                bound_only: true,
            });
        }
        Ok(RhoValue {
            value: self.rho(beta)?,
            bound_only: false,
        })
    }
}

/// ρ(β) from the standard table.
pub fn dickman_rho(beta: f64) -> Result<f64> {
    DickmanTable::standard().rho(beta)
}

/// 1/Γ(β+1), the upper bound for ρ(β).
pub fn gamma_bound(beta: f64) -> f64 {
    1.0 / gamma(beta + 1.0)
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (lm, flm, left) = simpson(f, a, fa, m, fm);
    let (rm, frm, right) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
        + adaptive_simpson(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
}

/// Li(x) = ∫₂^x dt / log t.
pub fn li(x: f64) -> Result<f64> {
    if !(x >= 2.0) || !x.is_finite() {
        return Err(Error::OutOfRange(format!("li({x}) needs x >= 2")));
    }
    if x == 2.0 {
        return Ok(0.0);
    }
    let f = |t: f64| 1.0 / t.ln();
    // Crude upper bound on the integral fixes an absolute tolerance that
    // meets 1e-9 relative.
    let tol = 1e-11 * (x - 2.0) / x.ln();
    let (fa, fb) = (f(2.0), f(x));
    let (m, fm, whole) = simpson(&f, 2.0, fa, x, fb);
    Ok(adaptive_simpson(&f, 2.0, fa, x, fb, m, fm, whole, tol, 60))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothCount {
    pub x: u64,
    pub y: u64,
    /// Ψ(X, Y), counting O_K.
    pub exact: u64,
    /// X·ρ(log X / log Y).
    pub predicted: f64,
    /// |exact − predicted| / predicted.
    pub rel_error: f64,
    /// The prediction used the Γ bound because β exceeded the ρ table.
    pub bound_only: bool,
}

/// Ψ(X, Y): ideals of norm ≤ X all of whose prime factors have norm ≤ Y.
pub fn smooth_count(spec: &NumberFieldSpec, x: u64, y: u64) -> Result<SmoothCount> {
    check_bound(x)?;
    let primes = prime_ideal_stream(spec, y.min(x).max(1))?;
    smooth_count_with(&primes, x, y)
}

/// [`smooth_count`] over a prime list covering at least norms ≤ min(X, Y).
pub fn smooth_count_with(primes: &[PrimeIdeal], x: u64, y: u64) -> Result<SmoothCount> {
    if x < 1 || y < 1 {
        return Err(Error::InvalidArgument(format!("Psi({x}, {y}) needs X, Y >= 1")));
    }
    let norms: Vec<u64> = primes
        .iter()
        .map(|q| q.norm)
        .take_while(|&n| n <= y)
        .collect();
    let exact = count_products(&norms, 0, x);
    let (predicted, bound_only) = if y < 2 {
        (0.0, false)
    } else {
        let beta = (x as f64).ln() / (y as f64).ln();
        let r = DickmanTable::standard().rho_or_bound(beta)?;
        (x as f64 * r.value, r.bound_only)
    };
    Ok(SmoothCount {
        x,
        y,
        exact,
        predicted,
        rel_error: if predicted > 0.0 {
            (exact as f64 - predicted).abs() / predicted
        } else {
            f64::INFINITY
        },
        bound_only,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rho_reference_values() {
        assert_eq!(dickman_rho(1.0).unwrap(), 1.0);
        assert_eq!(dickman_rho(0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(dickman_rho(2.0).unwrap(), 1.0 - 2f64.ln(), epsilon = 1e-6);
        // Closed form on [2, 3] via the dilogarithm, evaluated offline.
        assert_abs_diff_eq!(dickman_rho(2.5).unwrap(), 0.130_319_561_832_250_7, epsilon = 1e-6);
        assert_abs_diff_eq!(dickman_rho(3.0).unwrap(), 0.048_608_388_291_131_57, epsilon = 1e-6);
        assert!(dickman_rho(5.0).unwrap() <= 1.0 / 120.0);
    }

    #[test]
    fn rho_out_of_range() {
        assert!(matches!(dickman_rho(-0.1), Err(Error::OutOfRange(_))));
        assert!(matches!(dickman_rho(20.5), Err(Error::OutOfRange(_))));
        let r = DickmanTable::standard().rho_or_bound(25.0).unwrap();
        assert!(r.bound_only);
        assert_eq!(r.value, gamma_bound(25.0));
    }

    #[test]
    fn grid_is_monotone_positive_and_bounded() {
        let table = DickmanTable::standard();
        let mut prev = f64::INFINITY;
        for (beta, rho) in table.nodes() {
            assert!(rho > 0.0 && rho <= prev, "beta {beta}");
            assert!(rho <= gamma_bound(beta) * (1.0 + 1e-12), "beta {beta}");
            prev = rho;
        }
    }

    #[test]
    fn grid_refinement() {
        let coarse = DickmanTable::standard();
        let fine = DickmanTable::new(DEFAULT_STEP / 2.0, DEFAULT_BETA_MAX).unwrap();
        let at = |t: &DickmanTable, b| t.rho(b).unwrap();
        assert!((at(coarse, 20.0) - at(&fine, 20.0)).abs() < 1e-6);
        assert!((at(coarse, 3.0) - at(&fine, 3.0)).abs() < 1e-6);
    }

    #[test]
    fn li_values() {
        assert_eq!(li(2.0).unwrap(), 0.0);
        // mpmath reference values for ∫₂^x dt/log t.
        for (x, want) in [
            (10.0, 5.120_435_724_669_805),
            (100.0, 29.080_977_803_962_14),
            (1e4, 1_245.092_052_119_271),
            (1e6, 78_626.503_995_682_06),
        ] {
            let got = li(x).unwrap();
            assert!(((got - want) / want).abs() <= 1e-9, "li({x}) = {got}");
        }
        assert!(li(1.5).is_err());
    }

    #[test]
    fn li_below_trivial_bound() {
        for x in [3.0, 50.0, 1e3, 1e5, 1e6] {
            assert!(li(x).unwrap() < x / 2f64.ln());
        }
    }

    #[test]
    fn smooth_count_edges() {
        let k = NumberFieldSpec::gaussian();
        let full = crate::numberfield::count_ideals(&k, 1000).unwrap().count;
        assert_eq!(smooth_count(&k, 1000, 1000).unwrap().exact, full);
        assert_eq!(smooth_count(&k, 1000, 1).unwrap().exact, 1);
        let a = smooth_count(&k, 5000, 30).unwrap().exact;
        let b = smooth_count(&k, 5000, 31).unwrap().exact;
        let c = smooth_count(&k, 5000, 100).unwrap().exact;
        assert!(a <= b && b <= c);
    }
}
