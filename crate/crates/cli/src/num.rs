//! Parsing of rationals from the command line and fixed-width float output.

use num_rational::Rational64;

pub const MAX_DENOMINATOR: i64 = 1_000_000;

/// `P/Q`, an integer, or a decimal. Decimals are replaced by the nearest
/// rational with denominator at most [`MAX_DENOMINATOR`].
pub fn parse_rational(text: &str) -> Result<Rational64, String> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| format!("bad numerator in `{t}`"))?;
        let q: i64 = q.trim().parse().map_err(|_| format!("bad denominator in `{t}`"))?;
        if q == 0 {
            return Err(format!("zero denominator in `{t}`"));
        }
        return Ok(Rational64::new(p, q));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.bytes().all(|b| b.is_ascii_digit())
        || !frac.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(format!("`{t}` is neither P/Q nor a decimal"));
    }
    // the exact decimal as int + frac / 10^len, then the best approximation
    let frac = frac.trim_end_matches('0');
    if int.len() > 15 || frac.len() > 30 {
        return Err(format!("`{t}` has too many digits"));
    }
    let whole: i64 = if int.is_empty() { 0 } else { int.parse().expect("digits") };
    let (num, den) = if frac.is_empty() { (0u128, 1u128) } else { (frac.parse::<u128>().expect("digits"), 10u128.pow(frac.len() as u32)) };
    let (p, q) = best_approximation(num, den, MAX_DENOMINATOR as u128);
    let r = Rational64::from_integer(whole) + Rational64::new(p as i64, q as i64);
    Ok(if neg { -r } else { r })
}

/// Closest fraction to `num/den` (both non-negative) with denominator at
/// most `max_den`, from the continued fraction convergents and their
/// semiconvergents.
fn best_approximation(num: u128, den: u128, max_den: u128) -> (u128, u128) {
    if den <= max_den {
        return (num, den);
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    let (mut a, mut b) = (num, den);
    while b != 0 {
        let t = a / b;
        let q2 = q0 + t * q1;
        if q2 > max_den {
            // largest semiconvergent that still fits
            let s = (max_den - q0) / q1;
            let (ps, qs) = (p0 + s * p1, q0 + s * q1);
            // compare |ps/qs − x| with |p1/q1 − x| exactly
            let err = |p: u128, q: u128| (p * den).abs_diff(num * q) as f64 / q as f64;
            return if err(ps, qs) < err(p1, q1) { (ps, qs) } else { (p1, q1) };
        }
        let p2 = p0 + t * p1;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        (a, b) = (b, a - t * b);
    }
    (p1, q1)
}

pub fn rational_text(r: Rational64) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Six significant digits, fixed notation for moderate magnitudes.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..=14).contains(&exp) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new digit
    let digits = s.bytes().filter(u8::is_ascii_digit).skip_while(|&b| b == b'0').count();
    if digits > 6 && decimals > 0 {
        return format!("{x:.prec$}", prec = decimals - 1);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/3").unwrap(), Rational64::new(1, 3));
        assert_eq!(parse_rational(" 2/4 ").unwrap(), Rational64::new(1, 2));
        assert_eq!(parse_rational("0.5").unwrap(), Rational64::new(1, 2));
        assert_eq!(parse_rational("0.0825").unwrap(), Rational64::new(33, 400));
        assert_eq!(parse_rational("3").unwrap(), Rational64::from_integer(3));
        assert_eq!(parse_rational(".25").unwrap(), Rational64::new(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), Rational64::new(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn long_decimals_snap_to_small_denominators() {
        assert_eq!(parse_rational("0.3333333333333").unwrap(), Rational64::new(1, 3));
        assert_eq!(parse_rational("3.14159265358979").unwrap(), Rational64::new(3_126_535, 995_207));
        let r = parse_rational("0.0822194227").unwrap();
        assert!(*r.denom() <= MAX_DENOMINATOR);
        assert!((rational_f64(r) - 0.0822194227).abs() < 1e-11);
    }

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.0822194227), "0.0822194");
        assert_eq!(sig6(1.02451136), "1.02451");
        assert_eq!(sig6(9.999999), "10.0000");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(0.0), "0");
        assert_eq!(sig6(1.5e-9), "1.50000e-9");
    }
}
