//! Closed-form bounds on the largest packing of `cn`-subsets of an `n`-set
//! with pairwise intersections below `alpha·cn`.
//!
//! All logarithms are natural. Exponential-rate bounds are reported per
//! element (`ln P / n`) with the vanishing `o(1)` terms dropped; reports say
//! so through their `asymptotic` flag.

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Rational64};
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{binomial, ln_big};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("{what} = {value} is outside {range}")]
    Domain { what: &'static str, value: f64, range: &'static str },
    #[error("no sign change of the derivative on ({lo}, {hi})")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("finite bound hypothesis fails: {0}")]
    Hypothesis(String),
}

fn domain(what: &'static str, value: f64, range: &'static str) -> BoundsError {
    BoundsError::Domain { what, value, range }
}

/// Binary entropy in nats, `−x ln x − (1−x) ln(1−x)`; zero at the endpoints.
pub fn entropy(x: f64) -> Result<f64, BoundsError> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("x", x, "[0, 1]"));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.ln() - (1.0 - x) * (1.0 - x).ln())
}

// x ln x with the continuous extension at 0
fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowerBound {
    pub log_per_n: f64,
    pub base: f64,
    /// Whether `c < alpha`, which the existence argument needs.
    pub hypothesis_holds: bool,
}

/// Rate of the Turán-type lower bound `T(n, c, alpha)`:
///
/// `ln T / n = αc ln(α/c) + 2(1−α)c ln(1−α) + (1−2c+αc) ln(1−2c+αc) − 2(1−c) ln(1−c)`.
///
/// The value is returned whenever the expression is defined; the caller
/// must check `hypothesis_holds` before reading it as a bound.
pub fn lower_bound_t(c: f64, alpha: f64) -> Result<LowerBound, BoundsError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(domain("alpha", alpha, "(0, 1]"));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(domain("c", c, "(0, 1)"));
    }
    let rest = 1.0 - 2.0 * c + alpha * c;
    if rest < 0.0 {
        return Err(domain("1 - 2c + alpha c", rest, "[0, inf)"));
    }
    let log_per_n = alpha * c * (alpha / c).ln() + 2.0 * c * xlnx(1.0 - alpha) + xlnx(rest) - 2.0 * xlnx(1.0 - c);
    Ok(LowerBound { log_per_n, base: log_per_n.exp(), hypothesis_holds: c < alpha })
}

/// Derivative of `ln T / n` in `c`:
/// `α ln(α/c) + 2(1−α) ln(1−α) + (α−2) ln(1−2c+αc) + 2 ln(1−c)`.
pub fn lower_bound_slope(c: f64, alpha: f64) -> f64 {
    alpha * (alpha / c).ln() + 2.0 * xlnx(1.0 - alpha) + (alpha - 2.0) * (1.0 - 2.0 * c + alpha * c).ln()
        + 2.0 * (1.0 - c).ln()
}

pub const BISECTION_MAX_ITERATIONS: usize = 200;
pub const OPTIMAL_C_TOLERANCE: f64 = 1e-10;

/// The `c` in `(0, alpha)` maximizing `T(n, c, alpha)`: the root of the
/// slope, found by bisection on `(αε, α − αε)` with `ε = 1e−6`.
pub fn optimal_c(alpha: f64) -> Result<f64, BoundsError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain("alpha", alpha, "(0, 1)"));
    }
    let eps = alpha * 1e-6;
    let (mut lo, mut hi) = (eps, alpha - eps);
    let (f_lo, f_hi) = (lower_bound_slope(lo, alpha), lower_bound_slope(hi, alpha));
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(BoundsError::NoSignChange { lo, hi });
    }
    for _ in 0..BISECTION_MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if lower_bound_slope(mid, alpha) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < OPTIMAL_C_TOLERANCE * 1e-3 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Newton iterations on the slope from a starting point; used to cross-check
/// the bisection root.
pub fn optimal_c_newton(alpha: f64, start: f64, iterations: usize) -> f64 {
    let mut c = start;
    for _ in 0..iterations {
        // d/dc of the slope
        let rest = 1.0 - 2.0 * c + alpha * c;
        let d = -alpha / c + (alpha - 2.0) * (alpha - 2.0) / rest - 2.0 / (1.0 - c);
        c -= lower_bound_slope(c, alpha) / d;
    }
    c
}

/// `(1 − α)/(c − α)`, the packing bound when blocks are larger than the
/// allowed overlap fraction.
pub fn upper_bound_small_c(c: f64, alpha: f64) -> Result<f64, BoundsError> {
    if !(c > alpha) {
        return Err(domain("c - alpha", c - alpha, "(0, inf)"));
    }
    Ok((1.0 - alpha) / (c - alpha))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DPrimeEndpoint {
    /// `d′ = 1 − α` (the `d = 0` edge).
    OneMinusAlpha,
    /// `d′ = (1 − 2c + cα)/(1 − c)` (the `e = 1` edge).
    FullGround,
}

impl DPrimeEndpoint {
    pub fn value(self, c: f64, alpha: f64) -> f64 {
        match self {
            DPrimeEndpoint::OneMinusAlpha => 1.0 - alpha,
            DPrimeEndpoint::FullGround => (1.0 - 2.0 * c + c * alpha) / (1.0 - c),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            DPrimeEndpoint::OneMinusAlpha => "1-alpha",
            DPrimeEndpoint::FullGround => "(1-2c+c*alpha)/(1-c)",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyUpperBound {
    pub log_per_n: f64,
    pub base: f64,
    pub d_prime: f64,
    pub endpoint: DPrimeEndpoint,
    /// Rates at both endpoints, `[1 − α, (1−2c+cα)/(1−c)]`.
    pub candidates: [f64; 2],
    /// The `o(1)` term is taken as zero.
    pub asymptotic: bool,
}

/// `I(c) − c(1−α) I(d′) / (d′(1−d′))` at a given `d′`.
pub fn entropy_rate_at(c: f64, alpha: f64, d_prime: f64) -> Result<f64, BoundsError> {
    if !(d_prime > 0.0 && d_prime < 1.0) {
        return Err(domain("d'", d_prime, "(0, 1)"));
    }
    Ok(entropy(c)? - c * (1.0 - alpha) / (d_prime * (1.0 - d_prime)) * entropy(d_prime)?)
}

/// Entropy upper bound on `ln P / n` for `0 < c <= alpha < 1`, evaluated at
/// both ends of the admissible `d′` interval; the smaller wins.
pub fn upper_bound_entropy(c: f64, alpha: f64) -> Result<EntropyUpperBound, BoundsError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain("alpha", alpha, "(0, 1)"));
    }
    if !(c > 0.0 && c <= alpha) {
        return Err(domain("c", c, "(0, alpha]"));
    }
    let ends = [DPrimeEndpoint::OneMinusAlpha, DPrimeEndpoint::FullGround];
    let rates = [
        entropy_rate_at(c, alpha, ends[0].value(c, alpha))?,
        entropy_rate_at(c, alpha, ends[1].value(c, alpha))?,
    ];
    let pick = if rates[1] < rates[0] { 1 } else { 0 };
    Ok(EntropyUpperBound {
        log_per_n: rates[pick],
        base: rates[pick].exp(),
        d_prime: ends[pick].value(c, alpha),
        endpoint: ends[pick],
        candidates: rates,
        asymptotic: true,
    })
}

/// Everything known at one `(alpha, c)` point.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub alpha: f64,
    pub c: f64,
    pub c_star: Option<f64>,
    pub lower: Option<LowerBound>,
    pub upper_small_c: Option<f64>,
    pub upper_entropy: Option<EntropyUpperBound>,
}

/// Bound report at `c`, or at the optimal `c` when none is given.
pub fn bound_report(alpha: f64, c: Option<f64>) -> Result<BoundReport, BoundsError> {
    let c_star = if alpha > 0.0 && alpha < 1.0 { Some(optimal_c(alpha)?) } else { None };
    let c = match c.or(c_star) {
        Some(c) => c,
        None => return Err(domain("alpha", alpha, "(0, 1) when c is omitted")),
    };
    let lower = if c < alpha { Some(lower_bound_t(c, alpha)?) } else { None };
    let upper_small_c = upper_bound_small_c(c, alpha).ok();
    let upper_entropy = if c <= alpha { Some(upper_bound_entropy(c, alpha)?) } else { None };
    Ok(BoundReport { alpha, c, c_star, lower, upper_small_c, upper_entropy })
}

/// Exact finite-`n` upper bound from restricting to blocks between a fixed
/// `dn`-set and a fixed `en`-superset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteUpperBound {
    pub n: usize,
    pub block_size: usize,
    pub d_count: usize,
    pub e_count: usize,
    /// `⌊N(c′, α′)⌋` for the restricted problem.
    pub restricted_bound: BigUint,
    /// `C(n, cn) ⌊N⌋ / C((e−d)n, (e−c)n)`.
    pub value: BigRational,
}

impl FiniteUpperBound {
    pub fn floor(&self) -> BigUint {
        self.value.floor().to_integer().to_biguint().expect("non-negative")
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::INFINITY)
    }

    /// `ln(value) / n`.
    pub fn log_per_n(&self) -> f64 {
        let num = self.value.numer().to_biguint().unwrap();
        let den = self.value.denom().to_biguint().unwrap();
        (ln_big(&num) - ln_big(&den)) / self.n as f64
    }
}

/// `C(i, j) C(i−j, k−j) = C(i, k) C(k, j)` for `i >= k >= j`.
pub fn binomial_identity_holds(i: usize, j: usize, k: usize) -> bool {
    assert!(i >= k && k >= j);
    binomial(i, j) * binomial(i - j, k - j) == binomial(i, k) * binomial(k, j)
}

/// Exact finite-`n` packing bound for block size `cn`, overlap fraction
/// `alpha`, and integer restriction sizes `dn <= alpha·cn`, `cn <= en <= n`.
/// Requires `(αc − d)/(c − d) < (c − d)/(e − d)`.
pub fn finite_n_upper_bound(
    n: usize,
    block_size: usize,
    alpha: Rational64,
    d_count: usize,
    e_count: usize,
) -> Result<FiniteUpperBound, BoundsError> {
    let (cn, dn, en) = (block_size as i128, d_count as i128, e_count as i128);
    let (an, ad) = (*alpha.numer() as i128, *alpha.denom() as i128);
    if !(an > 0) {
        return Err(BoundsError::Hypothesis(format!("alpha = {alpha} must be positive")));
    }
    if !(block_size <= e_count && e_count <= n) {
        return Err(BoundsError::Hypothesis(format!("need cn <= en <= n, got {block_size}, {e_count}, {n}")));
    }
    // d <= alpha c, scaled by n and the denominator of alpha
    if dn * ad > an * cn {
        return Err(BoundsError::Hypothesis(format!("need dn <= alpha*cn, got dn = {d_count}")));
    }
    if dn >= cn {
        return Err(BoundsError::Hypothesis("need dn < cn".into()));
    }
    // (αc − d)/(c − d) < (c − d)/(e − d), all scaled by n; αcn − dn is
    // multiplied through by ad to stay integral
    let lhs = (an * cn - dn * ad) * (en - dn);
    let rhs = ad * (cn - dn) * (cn - dn);
    if !(lhs < rhs) {
        return Err(BoundsError::Hypothesis(format!(
            "(alpha c - d)/(c - d) < (c - d)/(e - d) fails for dn = {d_count}, en = {e_count}"
        )));
    }

    // restricted problem: ground (e−d)n, blocks (c−d)n, overlap (αc−d)n;
    // N(c′, α′) = (1 − α′)/(c′ − α′) = (e−d)(c−d − (αc−d)) / ((c−d)² − (αc−d)(e−d))
    let num = (en - dn) * ((cn - dn) * ad - (an * cn - dn * ad));
    let den = rhs - lhs;
    let restricted = BigUint::from((num / den) as u128);

    // consistency of the double count behind the bound
    let lhs_id = binomial(n - block_size, e_count - block_size) * binomial(block_size, d_count) * binomial(n, block_size);
    let rhs_id = binomial(n, e_count) * binomial(e_count, d_count) * binomial(e_count - d_count, e_count - block_size);
    assert_eq!(lhs_id, rhs_id, "binomial double-count identity failed");

    let value = BigRational::new(
        BigInt::from(binomial(n, block_size) * &restricted),
        BigInt::from(binomial(e_count - d_count, e_count - block_size)),
    );
    Ok(FiniteUpperBound { n, block_size, d_count, e_count, restricted_bound: restricted, value })
}

/// Smallest [`finite_n_upper_bound`] over all admissible integer `(dn, en)`.
pub fn best_finite_upper_bound(n: usize, block_size: usize, alpha: Rational64) -> Option<FiniteUpperBound> {
    let mut best: Option<FiniteUpperBound> = None;
    for d in 0..block_size {
        for e in block_size..=n {
            if let Ok(b) = finite_n_upper_bound(n, block_size, alpha, d, e) {
                if best.as_ref().is_none_or(|cur| b.value < cur.value) {
                    best = Some(b);
                }
            }
        }
    }
    best
}

/// `ln C(n, k)`: exact big-integer evaluation up to `n = 10⁴`, log-gamma
/// beyond.
pub fn ln_binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if n <= 10_000 {
        let b = binomial(n, k);
        if b.is_zero() {
            return f64::NEG_INFINITY;
        }
        return ln_big(&b);
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

// Lanczos approximation (g = 7, 9 terms), good to ~1e−15 relative
fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + G + 0.5;
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}
