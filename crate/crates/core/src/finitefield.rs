//! Polynomials over 𝔽_p and 𝔽_{p^f}, reduced to what prime decomposition and
//! Frobenius cycle types need: squarefree tests and distinct-degree factor
//! *patterns*. Explicit factors are never produced.

use std::fmt;

use crate::error::{Error, Result};

/// Largest modulus / residue-field size accepted anywhere in the crate.
pub const NORM_LIMIT: u64 = 1 << 62;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Reduces a signed integer into `[0, p)`.
#[inline]
pub fn reduce_i64(c: i64, p: u64) -> u64 {
    (c as i128).rem_euclid(p as i128) as u64
}

/// Minimal field interface used by the generic polynomial routines below.
pub(crate) trait Field {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Number of elements q.
    fn order(&self) -> u64;
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct PrimeField {
    p: u64,
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.p)
    }
    fn order(&self) -> u64 {
        self.p
    }
}

/// 𝔽_{p^f} realised as 𝔽_p[t]/(h). Elements are coefficient vectors of
/// length exactly `f`.
#[derive(Debug, Clone)]
pub(crate) struct ExtensionField {
    base: PrimeField,
    modulus: FpPoly,
    order: u64,
}

impl ExtensionField {
    fn new(modulus: FpPoly) -> Self {
        let p = modulus.p;
        let f = modulus.degree().expect("nonzero modulus") as u32;
        Self {
            base: PrimeField { p },
            order: p.pow(f),
            modulus,
        }
    }

    fn dim(&self) -> usize {
        self.modulus.coeffs.len() - 1
    }

    fn embed(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        v[0] = c;
        v
    }

    fn pad(&self, mut v: Vec<u64>) -> Vec<u64> {
        v.resize(self.dim(), 0);
        v
    }
}

impl Field for ExtensionField {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.dim()]
    }
    fn one(&self) -> Vec<u64> {
        self.embed(1)
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let prod = poly_mul(&self.base, a, b);
        self.pad(poly_rem(&self.base, prod, &self.modulus.coeffs))
    }
    fn inv(&self, a: &Vec<u64>) -> Vec<u64> {
        // a^(q-2); q is small enough at every call site that this is cheap.
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = self.order - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
    fn order(&self) -> u64 {
        self.order
    }
}

fn trim<F: Field>(field: &F, mut v: Vec<F::Elem>) -> Vec<F::Elem> {
    while v.last().is_some_and(|c| field.is_zero(c)) {
        v.pop();
    }
    v
}

fn poly_mul<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if field.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = field.add(&out[i + j], &field.mul(x, y));
        }
    }
    trim(field, out)
}

fn poly_sub<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let zero = field.zero();
    let out = (0..n)
        .map(|i| field.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(field, out)
}

/// Quotient and remainder; `m` must be nonzero.
fn poly_divrem<F: Field>(
    field: &F,
    a: Vec<F::Elem>,
    m: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let mut r = trim(field, a);
    let dm = m.len() - 1;
    if r.len() < m.len() {
        return (Vec::new(), r);
    }
    let lead_inv = field.inv(&m[dm]);
    let mut q = vec![field.zero(); r.len() - dm];
    while r.len() >= m.len() {
        let shift = r.len() - m.len();
        let c = field.mul(r.last().unwrap(), &lead_inv);
        for (k, mk) in m.iter().enumerate() {
            r[shift + k] = field.sub(&r[shift + k], &field.mul(&c, mk));
        }
        q[shift] = c;
        r = trim(field, r);
    }
    (q, r)
}

fn poly_rem<F: Field>(field: &F, a: Vec<F::Elem>, m: &[F::Elem]) -> Vec<F::Elem> {
    poly_divrem(field, a, m).1
}

fn make_monic<F: Field>(field: &F, a: Vec<F::Elem>) -> Vec<F::Elem> {
    match a.last() {
        None => a,
        Some(lead) => {
            let inv = field.inv(lead);
            a.iter().map(|c| field.mul(c, &inv)).collect()
        }
    }
}

/// Monic gcd (the zero polynomial if both inputs are zero).
fn poly_gcd<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut a = trim(field, a.to_vec());
    let mut b = trim(field, b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(field, a, &b);
        a = b;
        b = r;
    }
    make_monic(field, a)
}

/// `base^exp mod m`, squaring with reduction at every step.
fn poly_powmod<F: Field>(field: &F, base: &[F::Elem], mut exp: u64, m: &[F::Elem]) -> Vec<F::Elem> {
    let mut acc = poly_rem(field, vec![field.one()], m);
    let mut b = poly_rem(field, base.to_vec(), m);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_rem(field, poly_mul(field, &acc, &b), m);
        }
        exp >>= 1;
        if exp > 0 {
            b = poly_rem(field, poly_mul(field, &b, &b), m);
        }
    }
    acc
}

/// Distinct-degree split of a monic squarefree polynomial: for every degree
/// i, the number of irreducible factors of degree i.
fn ddf_degrees<F: Field>(field: &F, f: &[F::Elem]) -> Vec<(u32, u32)> {
    let mut rest = trim(field, f.to_vec());
    let mut out = Vec::new();
    let x = vec![field.zero(), field.one()];
    let mut xq = x.clone();
    let q = field.order();
    let mut i = 0u32;
    while rest.len() > 1 {
        i += 1;
        if 2 * (i as usize) > rest.len() - 1 {
            // Whatever is left is a single irreducible factor.
            out.push(((rest.len() - 1) as u32, 1));
            break;
        }
        xq = poly_powmod(field, &xq, q, &rest);
        let g = poly_gcd(field, &rest, &poly_sub(field, &xq, &x));
        let dg = g.len() - 1;
        if dg > 0 {
            out.push((i, (dg as u32) / i));
            rest = poly_divrem(field, rest, &g).0;
            xq = poly_rem(field, xq, &rest);
        }
    }
    out
}

/// Univariate polynomial over 𝔽_p with coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    /// Builds a polynomial from residues, reducing each coefficient mod `p`
    /// and stripping trailing zeros.
    pub fn new(p: u64, coeffs: impl IntoIterator<Item = u64>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| c % p).collect();
        Self {
            p,
            coeffs: trim(&PrimeField { p }, coeffs),
        }
    }

    /// Reduces an integer polynomial (ascending coefficients) mod `p`.
    pub fn from_integers(p: u64, coeffs: &[i64]) -> Self {
        Self::new(p, coeffs.iter().map(|&c| reduce_i64(c, p)))
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    fn with(&self, coeffs: Vec<u64>) -> Self {
        Self { p: self.p, coeffs }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
            .collect();
        self.with(trim(&self.field(), coeffs))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        self.with(poly_gcd(&self.field(), &self.coeffs, &other.coeffs))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.with(poly_mul(&self.field(), &self.coeffs, &other.coeffs))
    }

    /// Quotient and remainder. Panics on a zero divisor.
    pub fn div_rem(&self, other: &Self) -> (Self, Self) {
        assert!(!other.is_zero(), "division by the zero polynomial");
        let (q, r) = poly_divrem(&self.field(), self.coeffs.clone(), &other.coeffs);
        (self.with(trim(&self.field(), q)), self.with(r))
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    /// True iff gcd(f, f') is a nonzero constant.
    pub fn is_squarefree(&self) -> bool {
        let d = self.derivative();
        if d.is_zero() {
            return self.degree() == Some(0);
        }
        self.gcd(&d).degree() == Some(0)
    }

    /// Substitutes x ↦ x^{1/p} (valid when f' = 0, i.e. only exponents
    /// divisible by p occur). Coefficients are fixed by Frobenius on 𝔽_p.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        let coeffs = self.coeffs.iter().step_by(p).copied().collect();
        self.with(coeffs)
    }

    /// Squarefree decomposition f = lc · Π a_j^j with each a_j monic and
    /// squarefree, returned as `(a_j, j)` for nonconstant a_j in ascending j.
    pub fn squarefree_decomposition(&self) -> Vec<(FpPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let monic = self.with(make_monic(&self.field(), self.coeffs.clone()));
        sqf_rec(&monic, 1, &mut out);
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.coeffs.cmp(&b.0.coeffs)));
        // Merge equal multiplicities that arise from separate p-th root passes.
        let mut merged: Vec<(FpPoly, u32)> = Vec::new();
        for (poly, mult) in out {
            match merged.last_mut() {
                Some((prev, m)) if *m == mult => *prev = prev.mul(&poly),
                _ => merged.push((poly, mult)),
            }
        }
        merged
    }

    /// Product of the distinct monic irreducible factors.
    pub fn radical(&self) -> FpPoly {
        self.squarefree_decomposition()
            .into_iter()
            .fold(self.with(vec![1]), |acc, (a, _)| acc.mul(&a))
    }

    /// Irreducible factor degrees with multiplicity: one `(degree, e)` entry per
    /// distinct irreducible factor, ordered by `e` then degree.
    pub fn factor_degrees(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for (a, e) in self.squarefree_decomposition() {
            for (deg, count) in ddf_degrees(&self.field(), &a.coeffs) {
                for _ in 0..count {
                    out.push((deg, e));
                }
            }
        }
        out.sort_by_key(|&(deg, e)| (e, deg));
        out
    }
}

fn sqf_rec(f: &FpPoly, scale: u32, out: &mut Vec<(FpPoly, u32)>) {
    // Musser / Yun with the characteristic-p correction.
    let d = f.derivative();
    if d.is_zero() {
        if f.degree().unwrap_or(0) > 0 {
            sqf_rec(&f.pth_root(), scale * f.p as u32, out);
        }
        return;
    }
    let mut c = f.gcd(&d);
    let mut w = f.div_rem(&c).0;
    let mut i = 1u32;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((z, i * scale));
        }
        c = c.div_rem(&y).0;
        w = y;
        i += 1;
    }
    if c.degree().unwrap_or(0) > 0 {
        sqf_rec(&c.pth_root(), scale * f.p as u32, out);
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".into(),
                (1, c) => format!("{c}x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}x^{i}"),
            })
            .collect();
        write!(f, "{} (mod {})", terms.join(" + "), self.p)
    }
}

/// Multiset of irreducible-factor degrees, plus whether the factored
/// polynomial was squarefree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactorPattern {
    /// `(degree, count)` sorted by degree, counts positive.
    entries: Vec<(u32, u32)>,
    squarefree: bool,
}

impl FactorPattern {
    pub fn new(entries: impl IntoIterator<Item = (u32, u32)>, squarefree: bool) -> Self {
        let mut merged: Vec<(u32, u32)> = Vec::new();
        let mut raw: Vec<(u32, u32)> = entries.into_iter().filter(|e| e.1 > 0).collect();
        raw.sort_unstable();
        for (d, c) in raw {
            match merged.last_mut() {
                Some((pd, pc)) if *pd == d => *pc += c,
                _ => merged.push((d, c)),
            }
        }
        Self {
            entries: merged,
            squarefree,
        }
    }

    /// Builds a squarefree pattern from a flat list of degrees, e.g. `[1, 2]`.
    pub fn from_degrees(degrees: &[u32]) -> Self {
        Self::new(degrees.iter().map(|&d| (d, 1)), true)
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    pub fn is_squarefree(&self) -> bool {
        self.squarefree
    }

    /// Σ degree·count.
    pub fn total_degree(&self) -> u32 {
        self.entries.iter().map(|(d, c)| d * c).sum()
    }

    /// Flat ascending degree list, e.g. `{(1,1),(2,1)}` → `[1, 2]`.
    pub fn degrees(&self) -> Vec<u32> {
        self.entries
            .iter()
            .flat_map(|&(d, c)| std::iter::repeat_n(d, c as usize))
            .collect()
    }

    pub fn splits_completely(&self) -> bool {
        self.squarefree && self.entries.iter().all(|&(d, _)| d == 1)
    }
}

impl fmt::Display for FactorPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let degs: Vec<String> = self.degrees().iter().map(u32::to_string).collect();
        write!(f, "[{}]", degs.join(","))?;
        if !self.squarefree {
            write!(f, "(non-squarefree)")?;
        }
        Ok(())
    }
}

fn require_monic(f: &FpPoly) -> Result<()> {
    if f.is_zero() || f.degree() == Some(0) {
        return Err(Error::InvalidArgument(format!(
            "polynomial {f} must have degree >= 1"
        )));
    }
    if !f.is_monic() {
        return Err(Error::InvalidArgument(format!("polynomial {f} is not monic")));
    }
    Ok(())
}

/// Degrees of the irreducible factors of `f` over 𝔽_p, multiplicities
/// collapsed. For non-squarefree input the pattern describes the radical.
pub fn ddf_pattern(f: &FpPoly) -> Result<FactorPattern> {
    require_monic(f)?;
    let squarefree = f.is_squarefree();
    let target = if squarefree { f.clone() } else { f.radical() };
    Ok(FactorPattern::new(
        ddf_degrees(&f.field(), &target.coeffs),
        squarefree,
    ))
}

pub fn is_irreducible(f: &FpPoly) -> Result<bool> {
    let pattern = ddf_pattern(f)?;
    let deg = f.degree().unwrap_or(0) as u32;
    Ok(pattern.squarefree && pattern.entries == [(deg, 1)])
}

/// The first monic irreducible polynomial of degree `f_res` over 𝔽_p when
/// candidates are enumerated by counting upward with the constant term as the
/// least significant digit.
pub fn extension_modulus(p: u64, f_res: u32) -> Result<FpPoly> {
    if f_res == 0 {
        return Err(Error::InvalidArgument("extension degree must be >= 1".into()));
    }
    if f_res == 1 {
        return Ok(FpPoly::new(p, [0, 1]));
    }
    let mut digits = vec![0u64; f_res as usize];
    loop {
        // Increment the base-p counter.
        let mut k = 0;
        loop {
            if k == digits.len() {
                return Err(Error::InvalidArgument(format!(
                    "no irreducible polynomial of degree {f_res} over F_{p}"
                )));
            }
            digits[k] += 1;
            if digits[k] < p {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
        if digits[0] == 0 {
            continue;
        }
        let mut coeffs = digits.clone();
        coeffs.push(1);
        let cand = FpPoly::new(p, coeffs);
        if is_irreducible(&cand)? {
            return Ok(cand);
        }
    }
}

/// Degree pattern of the integer polynomial `g` over 𝔽_{p^f_res}.
pub fn pattern_over_extension(g: &[i64], p: u64, f_res: u32) -> Result<FactorPattern> {
    if g.len() < 2 || *g.last().unwrap() != 1 {
        return Err(Error::InvalidArgument(format!(
            "polynomial {g:?} must be monic of degree >= 1"
        )));
    }
    if f_res == 0 {
        return Err(Error::InvalidArgument("residue degree must be >= 1".into()));
    }
    let q = (p as u128)
        .checked_pow(f_res)
        .filter(|&q| q < NORM_LIMIT as u128)
        .ok_or_else(|| Error::Overflow(format!("field size {p}^{f_res} exceeds 2^62")))?;
    let gbar = FpPoly::from_integers(p, g);
    if f_res == 1 {
        return ddf_pattern(&gbar);
    }
    let squarefree = gbar.is_squarefree();
    let rad = if squarefree { gbar.clone() } else { gbar.radical() };
    let field = ExtensionField::new(extension_modulus(p, f_res)?);
    debug_assert_eq!(field.order() as u128, q);
    let lifted: Vec<Vec<u64>> = rad.coeffs.iter().map(|&c| field.embed(c)).collect();
    Ok(FactorPattern::new(ddf_degrees(&field, &lifted), squarefree))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, c: &[i64]) -> FpPoly {
        FpPoly::from_integers(p, c)
    }

    #[test]
    fn ddf_examples() {
        let pat = ddf_pattern(&poly(5, &[1, 0, 1])).unwrap();
        assert_eq!(pat, FactorPattern::new([(1, 2)], true));
        let pat = ddf_pattern(&poly(3, &[1, 0, 1])).unwrap();
        assert_eq!(pat, FactorPattern::new([(2, 1)], true));
        let pat = ddf_pattern(&poly(2, &[1, 0, 1])).unwrap();
        assert!(!pat.is_squarefree());
        assert_eq!(pat.entries(), &[(1, 1)]);
    }

    #[test]
    fn rejects_non_monic_and_zero() {
        assert!(matches!(
            ddf_pattern(&poly(7, &[1, 2])),
            Err(Error::InvalidArgument(_))
        ));
        assert!(ddf_pattern(&FpPoly::new(7, [])).is_err());
        assert!(ddf_pattern(&FpPoly::new(7, [3])).is_err());
        assert!(pattern_over_extension(&[1, 0, 2], 5, 1).is_err());
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&poly(2, &[1, 1, 0, 1])).unwrap());
        assert!(!is_irreducible(&poly(5, &[1, 0, 1])).unwrap());
        for p in [2, 3, 101] {
            assert!(is_irreducible(&poly(p, &[0, 1])).unwrap());
        }
    }

    #[test]
    fn extension_examples() {
        let pat = pattern_over_extension(&[1, 1, 0, 1], 3, 1).unwrap();
        assert_eq!(pat, FactorPattern::from_degrees(&[1, 2]));
        let pat = pattern_over_extension(&[-2, 0, 1], 7, 1).unwrap();
        assert_eq!(pat, FactorPattern::from_degrees(&[1, 1]));
        let pat = pattern_over_extension(&[-2, 0, 1], 5, 1).unwrap();
        assert_eq!(pat, FactorPattern::from_degrees(&[2]));
    }

    #[test]
    fn two_is_a_square_in_f729() {
        let pat = pattern_over_extension(&[-2, 0, 1], 3, 6).unwrap();
        assert_eq!(pat, FactorPattern::from_degrees(&[1, 1]));
    }

    #[test]
    fn extension_size_overflow() {
        assert!(matches!(
            pattern_over_extension(&[1, 1, 0, 1], 1_000_003, 4),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn squarefree_decomposition_char_p() {
        // (x+1)^2 (x+2)^3 over F_3: the cube has zero derivative.
        let f = poly(3, &[1, 1]).mul(&poly(3, &[1, 1]));
        let g = poly(3, &[2, 1]);
        let f = f.mul(&g).mul(&g).mul(&g);
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(poly(3, &[1, 1]), 2), (poly(3, &[2, 1]), 3)]);
        assert_eq!(f.factor_degrees(), vec![(1, 2), (1, 3)]);
        assert_eq!(f.radical(), poly(3, &[1, 1]).mul(&g));
    }

    #[test]
    fn extension_modulus_is_first_irreducible() {
        assert_eq!(extension_modulus(3, 2).unwrap(), poly(3, &[1, 0, 1]));
        assert_eq!(extension_modulus(2, 3).unwrap(), poly(2, &[1, 1, 0, 1]));
        assert_eq!(extension_modulus(5, 1).unwrap(), poly(5, &[0, 1]));
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            small,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(3_215_031_751));
    }
}
