//! Exact dynamical zeta functions and the arithmetic around iterated
//! Reidemeister numbers: truncated power series over the rationals,
//! product-form zeta functions ∏(1−z^d)^e with rational exponents,
//! Möbius congruence audits, and a (deliberately quarantined) floating-point
//! growth-rate estimator.
//!
//! The two zeta constructors are self-verifying: each builds its answer by
//! two independent routes — a closed product form and the exponential
//! generating series — and insists the truncated expansions agree
//! coefficient by coefficient.

use crate::lattice::{IntMatrix, Reidemeister, ReidemeisterSequence};
use crate::poly::IntPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Hard ceiling on truncation orders accepted by the zeta constructors.
pub const MAX_TRUNCATION: usize = 128;
/// Truncation used when callers have no reason to pick another.
pub const DEFAULT_TRUNCATION: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZetaError {
    ZeroArgument,
    TruncationTooLarge { requested: usize, max: usize },
    ZeroPeriod,
    NegativeCount { index: usize, value: i64 },
    CountMismatch { expected: usize, got: usize },
    SequenceTooShort { needed: usize, have: usize },
    InfiniteTerm { n: usize },
    InputInconsistency { detail: String },
    EmptyInput,
    WindowOutOfRange { window: usize, length: usize },
    InvalidValue { index: usize },
}

impl fmt::Display for ZetaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZetaError::ZeroArgument => write!(f, "argument must be a positive integer"),
            ZetaError::TruncationTooLarge { requested, max } => {
                write!(f, "truncation order {} exceeds the maximum {}", requested, max)
            }
            ZetaError::ZeroPeriod => write!(f, "period m must be at least 1"),
            ZetaError::NegativeCount { index, value } => {
                write!(f, "count #{} is negative ({})", index, value)
            }
            ZetaError::CountMismatch { expected, got } => {
                write!(f, "expected {} counts (one per divisor), got {}", expected, got)
            }
            ZetaError::SequenceTooShort { needed, have } => {
                write!(f, "sequence has {} terms but {} are needed", have, needed)
            }
            ZetaError::InfiniteTerm { n } => {
                write!(f, "term R_{} is infinite inside the truncation window", n)
            }
            ZetaError::InputInconsistency { detail } => {
                write!(f, "input inconsistency: {}", detail)
            }
            ZetaError::EmptyInput => write!(f, "sequence is empty"),
            ZetaError::WindowOutOfRange { window, length } => {
                write!(f, "window {} is not in 1..={}", window, length)
            }
            ZetaError::InvalidValue { index } => {
                write!(f, "value #{} is negative or not finite", index)
            }
        }
    }
}

impl std::error::Error for ZetaError {}

// ---------------------------------------------------------------------------
// power series
// ---------------------------------------------------------------------------

/// A truncated power series Σ c_i z^i, i = 0..=order, with exact rational
/// coefficients. The truncation order is `coeffs.len() - 1` and every
/// operation stays inside it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigRational>,
}

impl PowerSeries {
    pub fn zero(order: usize) -> PowerSeries {
        PowerSeries { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> PowerSeries {
        let mut s = PowerSeries::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// Series with the given coefficients; the truncation order is
    /// `coeffs.len() - 1`. Panics on an empty list.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> PowerSeries {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        PowerSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        PowerSeries { coeffs }
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect();
        PowerSeries { coeffs }
    }

    pub fn scale(&self, c: &BigRational) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order().min(other.order());
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        PowerSeries { coeffs }
    }

    /// exp of a series with zero constant term: f_0 = 1 and
    /// n·f_n = Σ_{k=1..n} k·g_k·f_{n−k}.
    pub fn exp(&self) -> PowerSeries {
        assert!(self.coeffs[0].is_zero(), "exp needs constant term 0");
        let order = self.order();
        let weighted: Vec<BigRational> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, g)| g * BigRational::from(BigInt::from(k)))
            .collect();
        let mut f = vec![BigRational::zero(); order + 1];
        f[0] = BigRational::one();
        for n in 1..=order {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if weighted[k].is_zero() || f[n - k].is_zero() {
                    continue;
                }
                acc += &weighted[k] * &f[n - k];
            }
            f[n] = acc / BigRational::from(BigInt::from(n));
        }
        PowerSeries { coeffs: f }
    }

    /// log of a series with constant term 1:
    /// n·g_n = n·f_n − Σ_{k=1..n−1} k·g_k·f_{n−k}.
    pub fn log(&self) -> PowerSeries {
        assert!(self.coeffs[0].is_one(), "log needs constant term 1");
        let order = self.order();
        let mut g = vec![BigRational::zero(); order + 1];
        for n in 1..=order {
            let mut acc = BigRational::from(BigInt::from(n)) * &self.coeffs[n];
            for k in 1..n {
                acc -= BigRational::from(BigInt::from(k)) * &g[k] * &self.coeffs[n - k];
            }
            g[n] = acc / BigRational::from(BigInt::from(n));
        }
        PowerSeries { coeffs: g }
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn recip(&self) -> PowerSeries {
        assert!(!self.coeffs[0].is_zero(), "reciprocal needs a nonzero constant term");
        let order = self.order();
        let inv0 = BigRational::one() / &self.coeffs[0];
        let mut h = vec![BigRational::zero(); order + 1];
        h[0] = inv0.clone();
        for n in 1..=order {
            let mut acc = BigRational::zero();
            for k in 1..=n {
                if self.coeffs[k].is_zero() || h[n - k].is_zero() {
                    continue;
                }
                acc += &self.coeffs[k] * &h[n - k];
            }
            h[n] = -acc * &inv0;
        }
        PowerSeries { coeffs: h }
    }
}

fn rational_term(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().magnitude().to_string()
    } else {
        format!("{}/{}", c.numer().magnitude(), c.denom())
    }
}

impl fmt::Display for PowerSeries {
    /// Renders like `1 + z + 5/2*z^2 + O(z^3)`; every coefficient is an
    /// exact fraction.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    out.push('-');
                }
                first = false;
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mag = rational_term(c);
            let unit = mag == "1";
            match (k, unit) {
                (0, _) => out.push_str(&mag),
                (_, true) => {}
                (_, false) => {
                    out.push_str(&mag);
                    out.push('*');
                }
            }
            if k == 1 {
                out.push('z');
            } else if k > 1 {
                out.push_str(&format!("z^{}", k));
            }
        }
        if first {
            out.push('0');
        }
        write!(f, "{} + O(z^{})", out, self.order() + 1)
    }
}

// ---------------------------------------------------------------------------
// zeta forms
// ---------------------------------------------------------------------------

/// A zeta function in closed form:
/// ∏ (1−z^d)^{e_d} · ∏ numerator / ∏ denominator,
/// with exact rational exponents e_d and integer polynomial parts. Integer
/// exponents make the whole thing a rational function; fractional exponents
/// a radical of one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaForm {
    /// (d, e) pairs for ∏ (1 − z^d)^e, sorted by d, exponents nonzero.
    pub factors: Vec<(usize, BigRational)>,
    /// Polynomial factors upstairs; each has constant term 1.
    pub numerator: Vec<IntPoly>,
    /// Polynomial factors downstairs; each has constant term 1.
    pub denominator: Vec<IntPoly>,
}

impl ZetaForm {
    pub fn one() -> ZetaForm {
        ZetaForm { factors: Vec::new(), numerator: Vec::new(), denominator: Vec::new() }
    }

    /// True exactly when every (1−z^d) exponent is an integer, i.e. the form
    /// is a rational function rather than a radical of one.
    pub fn is_rational(&self) -> bool {
        self.factors.iter().all(|(_, e)| e.is_integer())
    }

    /// Expand to a truncated power series. Well defined for any order since
    /// every factor has constant term 1.
    pub fn expand(&self, order: usize) -> PowerSeries {
        let mut acc = PowerSeries::one(order);
        for p in &self.numerator {
            acc = acc.mul(&poly_series(p, order));
        }
        for p in &self.denominator {
            acc = acc.mul(&poly_series(p, order).recip());
        }
        for (d, e) in &self.factors {
            acc = acc.mul(&binomial_factor_series(*d, e, order));
        }
        acc
    }
}

fn poly_series(p: &IntPoly, order: usize) -> PowerSeries {
    let coeffs = (0..=order).map(|i| BigRational::from(p.coeff(i))).collect();
    PowerSeries::from_coeffs(coeffs)
}

/// The binomial expansion of (1 − z^d)^e for a rational exponent e:
/// coefficient at z^{dk} is (−1)^k · e(e−1)…(e−k+1)/k!.
fn binomial_factor_series(d: usize, e: &BigRational, order: usize) -> PowerSeries {
    let mut s = PowerSeries::zero(order);
    let mut term = BigRational::one();
    s.coeffs[0] = BigRational::one();
    let mut k = 1usize;
    while d * k <= order {
        let step = (e - BigRational::from(BigInt::from(k as i64 - 1)))
            / BigRational::from(BigInt::from(k as i64));
        term = -(term * step);
        s.coeffs[d * k] = term.clone();
        k += 1;
    }
    s
}

/// Exact rational arithmetic on i128 with overflow detection. This is a
/// fast path for the high-volume internal consistency check in
/// `periodic_floer_zeta`; every operation either returns the exact reduced
/// result or `None`, in which case the caller falls back to the
/// arbitrary-precision route. Nothing here is ever approximate.
mod fastq {
    fn gcd(a: i128, b: i128) -> i128 {
        let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
        // drop to u64 as soon as both operands fit: u128 division is software
        while b != 0 {
            if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
                let (mut x, mut y) = (a as u64, b as u64);
                while y != 0 {
                    let t = x % y;
                    x = y;
                    y = t;
                }
                return x as i128;
            }
            let t = a % b;
            a = b;
            b = t;
        }
        a as i128
    }

    /// Reduced fraction with positive denominator.
    #[derive(Clone, Copy, PartialEq, Eq, Debug)]
    pub struct Q {
        n: i128,
        d: i128,
    }

    pub const ZERO: Q = Q { n: 0, d: 1 };
    pub const ONE: Q = Q { n: 1, d: 1 };

    impl Q {
        pub fn new(n: i128, d: i128) -> Option<Q> {
            if d == 0 {
                return None;
            }
            let (n, d) = if d < 0 { (n.checked_neg()?, d.checked_neg()?) } else { (n, d) };
            let g = gcd(n, d).max(1);
            Some(Q { n: n / g, d: d / g })
        }

        pub fn is_zero(self) -> bool {
            self.n == 0
        }

        pub fn add(self, o: Q) -> Option<Q> {
            let g = gcd(self.d, o.d).max(1);
            let t1 = self.n.checked_mul(o.d / g)?;
            let t2 = o.n.checked_mul(self.d / g)?;
            let num = t1.checked_add(t2)?;
            let den = self.d.checked_mul(o.d / g)?;
            Q::new(num, den)
        }

        pub fn mul(self, o: Q) -> Option<Q> {
            let g1 = gcd(self.n, o.d).max(1);
            let g2 = gcd(o.n, self.d).max(1);
            let n = (self.n / g1).checked_mul(o.n / g2)?;
            let d = (self.d / g2).checked_mul(o.d / g1)?;
            Some(Q { n, d })
        }

        pub fn mul_int(self, k: i128) -> Option<Q> {
            self.mul(Q { n: k, d: 1 })
        }

        pub fn div_int(self, k: i128) -> Option<Q> {
            Q::new(self.n, self.d.checked_mul(k)?)
        }

        pub fn neg(self) -> Option<Q> {
            Some(Q { n: self.n.checked_neg()?, d: self.d })
        }

        pub fn sub_int(self, k: i128) -> Option<Q> {
            self.add(Q { n: k.checked_neg()?, d: 1 })
        }
    }
}

/// Fast-path replica of the floer consistency check: expands the product
/// form and the exponential series over checked i128 rationals and compares
/// them. `None` means some intermediate overflowed and the caller must use
/// the arbitrary-precision route; `Some(ok)` is an exact verdict.
fn floer_fast_verify(
    factors: &[(usize, BigRational)],
    expansion: &[i64],
    order: usize,
) -> Option<bool> {
    use fastq::{Q, ONE, ZERO};
    // product form: multiply the (1 − z^d)^e binomial series together
    let mut acc = vec![ZERO; order + 1];
    acc[0] = ONE;
    for (d, e) in factors {
        let e = Q::new(e.numer().to_i128()?, e.denom().to_i128()?)?;
        // binomial series of (1 − z^d)^e, nonzero only at multiples of d
        let mut coeffs: Vec<Q> = vec![ONE];
        let mut term = ONE;
        let mut k = 1usize;
        while d * k <= order {
            term = term.mul(e.sub_int(k as i128 - 1)?)?.div_int(k as i128)?.neg()?;
            coeffs.push(term);
            k += 1;
        }
        let mut next = vec![ZERO; order + 1];
        for i in 0..=order {
            if acc[i].is_zero() {
                continue;
            }
            for (kk, c) in coeffs.iter().enumerate() {
                let pos = i + d * kk;
                if pos > order {
                    break;
                }
                next[pos] = next[pos].add(acc[i].mul(*c)?)?;
            }
        }
        acc = next;
    }
    // exponential series: n·f_n = Σ_k N_k·f_{n−k} since k·(N_k/k) = N_k
    let mut f = vec![ZERO; order + 1];
    f[0] = ONE;
    for n in 1..=order {
        let mut s = ZERO;
        for k in 1..=n {
            let nk = expansion[k - 1];
            if nk == 0 || f[n - k].is_zero() {
                continue;
            }
            s = s.add(f[n - k].mul_int(nk as i128)?)?;
        }
        f[n] = s.div_int(n as i128)?;
    }
    Some(acc == f)
}

fn exponent_string(e: &BigRational) -> Option<String> {
    if e.is_one() {
        None
    } else if e.is_integer() {
        Some(format!("^{}", e.numer()))
    } else {
        Some(format!("^({}/{})", e.numer(), e.denom()))
    }
}

impl fmt::Display for ZetaForm {
    /// Renders as `num/den`, merging repeated factors into powers:
    /// `(1 - 3*z + z^2)/(1 - z)^2`, `1/(1 - z^2)^(1/2)`, or `1` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // gather (base string, exponent) with insertion order preserved
        let mut bases: Vec<(String, BigRational)> = Vec::new();
        let mut push = |base: String, delta: BigRational| {
            if let Some(entry) = bases.iter_mut().find(|(b, _)| *b == base) {
                entry.1 += delta;
            } else {
                bases.push((base, delta));
            }
        };
        for p in &self.numerator {
            push(p.to_string_in("z"), BigRational::one());
        }
        for p in &self.denominator {
            push(p.to_string_in("z"), -BigRational::one());
        }
        for (d, e) in &self.factors {
            let base = IntPoly::one().add(&IntPoly::monomial(*d).neg());
            push(base.to_string_in("z"), e.clone());
        }
        let mut num = Vec::new();
        let mut den = Vec::new();
        for (base, e) in bases {
            if e.is_zero() {
                continue;
            }
            let (target, mag) = if e.is_positive() { (&mut num, e) } else { (&mut den, -e) };
            let rendered = match exponent_string(&mag) {
                None => format!("({})", base),
                Some(exp) => format!("({}){}", base, exp),
            };
            target.push(rendered);
        }
        let num_str = if num.is_empty() { "1".to_string() } else { num.join("*") };
        if den.is_empty() {
            write!(f, "{}", num_str)
        } else if den.len() == 1 {
            write!(f, "{}/{}", num_str, den[0])
        } else {
            write!(f, "{}/({})", num_str, den.join("*"))
        }
    }
}

// ---------------------------------------------------------------------------
// Möbius arithmetic
// ---------------------------------------------------------------------------

/// Möbius function by trial division: μ(1)=1, μ(n)=0 when a square divides
/// n, otherwise (−1)^{number of prime factors}.
pub fn mobius(n: u64) -> Result<i32, ZetaError> {
    if n == 0 {
        return Err(ZetaError::ZeroArgument);
    }
    let mut m = n;
    let mut factors = 0u32;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return Ok(0);
            }
            factors += 1;
        }
        p += 1;
    }
    if m > 1 {
        factors += 1;
    }
    Ok(if factors % 2 == 0 { 1 } else { -1 })
}

/// Divisors of n in increasing order; n must be positive.
pub fn divisors(n: usize) -> Vec<usize> {
    assert!(n > 0, "divisors of 0 are not defined");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1usize;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

// ---------------------------------------------------------------------------
// Lefschetz zeta
// ---------------------------------------------------------------------------

/// The alternating-trace numbers L_n = Σ_k (−1)^k tr(maps[k]^n) for
/// n = 1..=count.
pub fn lefschetz_numbers(maps: &[IntMatrix], count: usize) -> Vec<BigInt> {
    let mut powers: Vec<IntMatrix> = maps.to_vec();
    let mut out = Vec::with_capacity(count);
    for n in 1..=count {
        if n > 1 {
            for (pw, m) in powers.iter_mut().zip(maps) {
                *pw = pw.mul(m);
            }
        }
        let mut l = BigInt::zero();
        for (k, pw) in powers.iter().enumerate() {
            let t = pw.trace();
            if k % 2 == 0 {
                l += t;
            } else {
                l -= t;
            }
        }
        out.push(l);
    }
    out
}

/// Zeta function of a self-map from its action on homology:
/// ∏_k det(I − z·maps[k])^{(−1)^{k+1}}, built alongside the series
/// exp(Σ L_n z^n / n); the two expansions must agree to the truncation
/// order, and that agreement is asserted, not assumed.
pub fn lefschetz_zeta(
    maps: &[IntMatrix],
    order: usize,
) -> Result<(ZetaForm, PowerSeries), ZetaError> {
    if order > MAX_TRUNCATION {
        return Err(ZetaError::TruncationTooLarge { requested: order, max: MAX_TRUNCATION });
    }
    let mut form = ZetaForm::one();
    for (k, m) in maps.iter().enumerate() {
        let p = m.det_one_minus_z();
        if p.is_one() {
            continue;
        }
        if k % 2 == 1 {
            form.numerator.push(p);
        } else {
            form.denominator.push(p);
        }
    }
    let ls = lefschetz_numbers(maps, order);
    let mut log_series = PowerSeries::zero(order);
    for (i, l) in ls.iter().enumerate() {
        let n = i + 1;
        log_series.coeffs[n] =
            BigRational::new(l.clone(), BigInt::from(n));
    }
    let series = log_series.exp();
    let expanded = form.expand(order);
    assert_eq!(
        expanded, series,
        "rational form and trace series of the zeta function disagree"
    );
    Ok((form, series))
}

// ---------------------------------------------------------------------------
// periodic-map zeta
// ---------------------------------------------------------------------------

fn validate_periodic_counts(m: usize, counts: &[i64]) -> Result<Vec<usize>, ZetaError> {
    if m == 0 {
        return Err(ZetaError::ZeroPeriod);
    }
    let divs = divisors(m);
    if counts.len() != divs.len() {
        return Err(ZetaError::CountMismatch { expected: divs.len(), got: counts.len() });
    }
    for (i, &c) in counts.iter().enumerate() {
        if c < 0 {
            return Err(ZetaError::NegativeCount { index: i, value: c });
        }
    }
    Ok(divs)
}

/// Expands divisor-indexed counts to the full sequence N_1..N_order via
/// N_n = N_{gcd(n,m)}. `counts[i]` belongs to the i-th divisor of m in
/// increasing order.
pub fn periodic_count_expansion(
    m: usize,
    counts: &[i64],
    order: usize,
) -> Result<Vec<i64>, ZetaError> {
    let divs = validate_periodic_counts(m, counts)?;
    let at = |d: usize| counts[divs.iter().position(|&x| x == d).expect("gcd divides m")];
    Ok((1..=order).map(|n| at(n.gcd(&m))).collect())
}

/// Zeta function of a period-m map from the counts N_d (one per divisor d
/// of m, increasing): ∏_{d|m} (1−z^d)^{−P(d)/d} with
/// P(d) = Σ_{d1|d} μ(d1)·N_{d/d1}. The expansion is checked against
/// exp(Σ N_n z^n / n) with N_n = N_{gcd(n,m)}; disagreement is reported as
/// input inconsistency.
pub fn periodic_floer_zeta(
    m: usize,
    counts: &[i64],
    order: usize,
) -> Result<ZetaForm, ZetaError> {
    if order > MAX_TRUNCATION {
        return Err(ZetaError::TruncationTooLarge { requested: order, max: MAX_TRUNCATION });
    }
    let divs = validate_periodic_counts(m, counts)?;
    let at = |d: usize| counts[divs.iter().position(|&x| x == d).expect("divisor of m")];
    let mut form = ZetaForm::one();
    for &d in &divs {
        let mut p = 0i64;
        for &d1 in &divisors(d) {
            p += i64::from(mobius(d1 as u64).expect("d1 >= 1")) * at(d / d1);
        }
        if p != 0 {
            form.factors.push((d, BigRational::new(BigInt::from(-p), BigInt::from(d))));
        }
    }
    let expansion = periodic_count_expansion(m, counts, order)?;
    let consistent = match floer_fast_verify(&form.factors, &expansion, order) {
        Some(ok) => ok,
        None => {
            // an i128 intermediate overflowed; redo the check in full precision
            let mut log_series = PowerSeries::zero(order);
            for (i, &n_val) in expansion.iter().enumerate() {
                let n = i + 1;
                log_series.coeffs[n] = BigRational::new(BigInt::from(n_val), BigInt::from(n));
            }
            form.expand(order) == log_series.exp()
        }
    };
    if !consistent {
        return Err(ZetaError::InputInconsistency {
            detail: "product form does not match the exponential series of the counts".into(),
        });
    }
    Ok(form)
}

// ---------------------------------------------------------------------------
// Reidemeister zeta series and congruences
// ---------------------------------------------------------------------------

/// exp(Σ R_n z^n / n) truncated at the given order. Every term R_1..R_order
/// must be finite.
pub fn reidemeister_zeta_series(
    seq: &ReidemeisterSequence,
    order: usize,
) -> Result<PowerSeries, ZetaError> {
    if order > MAX_TRUNCATION {
        return Err(ZetaError::TruncationTooLarge { requested: order, max: MAX_TRUNCATION });
    }
    if seq.terms.len() < order {
        return Err(ZetaError::SequenceTooShort { needed: order, have: seq.terms.len() });
    }
    let mut log_series = PowerSeries::zero(order);
    for n in 1..=order {
        match &seq.terms[n - 1] {
            Reidemeister::Finite(r) => {
                log_series.coeffs[n] = BigRational::new(r.clone(), BigInt::from(n));
            }
            Reidemeister::Infinite => return Err(ZetaError::InfiniteTerm { n }),
        }
    }
    Ok(log_series.exp())
}

/// One row of a congruence audit: the Möbius sum Σ_{d|n} μ(d)·R_{n/d} and
/// its residue mod n, or `None` when an infinite term forced a skip.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceRow {
    pub n: usize,
    /// (sum, residue mod n); `None` means skipped because some R_{n/d} = ∞.
    pub result: Option<(BigInt, BigInt)>,
}

/// The full audit of Σ_{d|n} μ(d)·R_{n/d} ≡ 0 (mod n) over n = 1..=max_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceAudit {
    pub source: String,
    pub max_n: usize,
    pub rows: Vec<CongruenceRow>,
    /// The n whose residue was nonzero. Empty means every computed row passed.
    pub violations: Vec<usize>,
}

impl CongruenceAudit {
    pub fn all_pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn skipped(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| r.result.is_none()).map(|r| r.n).collect()
    }
}

/// Checks the divisibility n | Σ_{d|n} μ(d)·R_{n/d} for every n up to
/// max_n. Rows that would need an infinite term are marked skipped, never
/// silently passed.
pub fn congruence_audit(
    seq: &ReidemeisterSequence,
    max_n: usize,
) -> Result<CongruenceAudit, ZetaError> {
    if seq.terms.len() < max_n {
        return Err(ZetaError::SequenceTooShort { needed: max_n, have: seq.terms.len() });
    }
    let mut rows = Vec::with_capacity(max_n);
    let mut violations = Vec::new();
    for n in 1..=max_n {
        let mut sum = BigInt::zero();
        let mut finite = true;
        for d in divisors(n) {
            let mu = mobius(d as u64).expect("d >= 1");
            if mu == 0 {
                continue;
            }
            match &seq.terms[n / d - 1] {
                Reidemeister::Finite(r) => {
                    if mu == 1 {
                        sum += r;
                    } else {
                        sum -= r;
                    }
                }
                Reidemeister::Infinite => {
                    finite = false;
                    break;
                }
            }
        }
        if finite {
            let residue = sum.mod_floor(&BigInt::from(n));
            if !residue.is_zero() {
                violations.push(n);
            }
            rows.push(CongruenceRow { n, result: Some((sum, residue)) });
        } else {
            rows.push(CongruenceRow { n, result: None });
        }
    }
    Ok(CongruenceAudit { source: seq.source.clone(), max_n, rows, violations })
}

// ---------------------------------------------------------------------------
// growth rate
// ---------------------------------------------------------------------------

/// Result of the growth-rate estimator — the one deliberately non-exact
/// computation in this crate. `per_n` discloses every n-th root that went
/// into the estimate so callers can judge convergence themselves.
#[derive(Clone, Debug)]
pub struct GrowthEstimate {
    pub estimate: f64,
    /// (n, a_n^{1/n}) over the trailing window, n counted from 1.
    pub per_n: Vec<(usize, f64)>,
    pub window: usize,
    /// Smallest exact period of the input (repeating at least twice), if any.
    /// A periodic sequence is bounded, so its growth rate is exactly 1.
    pub detected_period: Option<usize>,
}

/// max(1, max over the trailing window of a_n^{1/n}), except that an input
/// which is exactly periodic (smallest period p, verified across the whole
/// list, repeating at least twice) short-circuits to exactly 1.0 — the
/// n-th-root estimator converges to 1 from above on such sequences but never
/// reaches it inside a finite window.
pub fn growth_rate(seq: &[f64], window: usize) -> Result<GrowthEstimate, ZetaError> {
    if seq.is_empty() {
        return Err(ZetaError::EmptyInput);
    }
    for (i, &v) in seq.iter().enumerate() {
        if !v.is_finite() || v < 0.0 {
            return Err(ZetaError::InvalidValue { index: i });
        }
    }
    if window == 0 || window > seq.len() {
        return Err(ZetaError::WindowOutOfRange { window, length: seq.len() });
    }
    let len = seq.len();
    let detected_period = (1..=len / 2)
        .find(|&p| (0..len - p).all(|i| seq[i] == seq[i + p]));
    let per_n: Vec<(usize, f64)> = (len - window..len)
        .map(|i| {
            let n = i + 1;
            (n, seq[i].powf(1.0 / n as f64))
        })
        .collect();
    let estimate = if detected_period.is_some() {
        1.0
    } else {
        per_n.iter().map(|&(_, v)| v).fold(1.0f64, f64::max)
    };
    Ok(GrowthEstimate { estimate, per_n, window, detected_period })
}
