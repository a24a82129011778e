//! Exact integer helpers shared by the counting and bound modules.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // stays integral: acc = C(n, i) before the division
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `2^e`.
pub fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// Natural log of a positive big integer, accurate to double precision.
pub fn ln_big(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "ln of zero");
    let bits = x.bits() as usize;
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_rational(q: &BigRational) -> f64 {
    let num = q.numer().to_biguint().expect("positive rational");
    let den = q.denom().to_biguint().expect("positive rational");
    ln_big(&num) - ln_big(&den)
}

/// Decimal rendering of a rational with a fixed number of fractional
/// digits, truncated toward zero.
pub fn rational_to_decimal(q: &BigRational, digits: usize) -> String {
    use num_bigint::BigInt;
    let neg = q.numer() < &BigInt::zero();
    let num = q.numer().magnitude().clone();
    let den = q.denom().magnitude().clone();
    let int = &num / &den;
    let mut rem = num % &den;
    let mut out = format!("{}{}", if neg { "-" } else { "" }, int);
    if digits > 0 {
        out.push('.');
        for _ in 0..digits {
            rem *= 10u32;
            let d = &rem / &den;
            rem %= &den;
            out.push_str(&d.to_string());
        }
    }
    out
}
