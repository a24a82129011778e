use std::fmt::Write;

use num_rational::Rational64;
use serde_json::{json, Value};
use setinv::bounds::{
    best_finite_upper_bound, finite_n_upper_bound, lower_bound_slope, lower_bound_t, optimal_c, upper_bound_entropy,
    upper_bound_small_c, EntropyUpperBound, LowerBound,
};
use setinv::exact::rational_to_decimal;

use super::usage;
use crate::num::{rational_f64, rational_text, sig6};
use crate::{Failure, Outcome};

fn lower_lines(text: &mut String, c: f64, lb: &LowerBound) -> Value {
    let _ = writeln!(text, "lower ln/n: {}", sig6(lb.log_per_n));
    let _ = writeln!(text, "lower base: {}", sig6(lb.base));
    let _ = writeln!(text, "c < alpha: {}", if lb.hypothesis_holds { "yes" } else { "NO (not a bound)" });
    json!({ "c": c, "log_per_n": lb.log_per_n, "base": lb.base, "hypothesis_holds": lb.hypothesis_holds })
}

fn entropy_lines(text: &mut String, ub: &EntropyUpperBound) -> Value {
    let _ = writeln!(text, "upper ln/n: {}", sig6(ub.log_per_n));
    let _ = writeln!(text, "upper base: {}", sig6(ub.base));
    let _ = writeln!(text, "d' used: {} = {}", ub.endpoint.label(), sig6(ub.d_prime));
    let _ = writeln!(
        text,
        "d' candidates: 1-alpha -> {}, (1-2c+c*alpha)/(1-c) -> {}",
        sig6(ub.candidates[0].exp()),
        sig6(ub.candidates[1].exp())
    );
    let _ = writeln!(text, "note: asymptotic, lower-order terms dropped");
    json!({
        "log_per_n": ub.log_per_n,
        "base": ub.base,
        "d_prime": ub.d_prime,
        "d_prime_endpoint": ub.endpoint.label(),
        "candidate_bases": [ub.candidates[0].exp(), ub.candidates[1].exp()],
        "asymptotic": ub.asymptotic,
    })
}

fn header(text: &mut String, alpha: Rational64) {
    let _ = writeln!(text, "alpha: {}", rational_text(alpha));
}

pub fn lower(alpha: Rational64, c: Option<f64>) -> Result<Outcome, Failure> {
    let a = rational_f64(alpha);
    let mut text = String::new();
    header(&mut text, alpha);
    let (c, optimal) = match c {
        Some(c) => (c, false),
        None => (optimal_c(a).map_err(usage)?, true),
    };
    let _ = writeln!(text, "c: {}{}", sig6(c), if optimal { " (optimal)" } else { "" });
    let lb = lower_bound_t(c, a).map_err(usage)?;
    let json_lb = lower_lines(&mut text, c, &lb);
    let json = json!({ "alpha": rational_text(alpha), "c": c, "c_is_optimal": optimal, "lower": json_lb });
    Ok(Outcome { positive: lb.hypothesis_holds, text, json })
}

pub fn upper(alpha: Rational64, c: f64) -> Result<Outcome, Failure> {
    let a = rational_f64(alpha);
    let mut text = String::new();
    header(&mut text, alpha);
    let _ = writeln!(text, "c: {}", sig6(c));
    let mut json = json!({ "alpha": rational_text(alpha), "c": c });
    if c > a {
        let v = upper_bound_small_c(c, a).map_err(usage)?;
        let _ = writeln!(text, "upper (c > alpha): {}", sig6(v));
        json["upper_small_c"] = json!(v);
    } else {
        let ub = upper_bound_entropy(c, a).map_err(usage)?;
        json["upper_entropy"] = entropy_lines(&mut text, &ub);
        if c < a {
            let lb = lower_bound_t(c, a).map_err(usage)?;
            let ok = lb.log_per_n <= ub.log_per_n + 1e-12;
            let _ = writeln!(text, "lower base: {}", sig6(lb.base));
            let _ = writeln!(text, "consistent (lower <= upper): {}", if ok { "yes" } else { "NO" });
            json["lower_base"] = json!(lb.base);
            json["consistent"] = json!(ok);
            return Ok(Outcome { positive: ok, text, json });
        }
    }
    Ok(Outcome { positive: true, text, json })
}

pub fn optimum(alpha: Rational64) -> Result<Outcome, Failure> {
    let a = rational_f64(alpha);
    let c = optimal_c(a).map_err(usage)?;
    let slope = lower_bound_slope(c, a);
    let lb = lower_bound_t(c, a).map_err(usage)?;
    let ub = upper_bound_entropy(c, a).map_err(usage)?;
    let ok = slope.abs() < 1e-9 && lb.log_per_n <= ub.log_per_n;
    let mut text = String::new();
    header(&mut text, alpha);
    let _ = writeln!(text, "optimal c: {}", sig6(c));
    let _ = writeln!(text, "slope at optimum: {}", sig6(slope));
    let json_lb = lower_lines(&mut text, c, &lb);
    let json_ub = entropy_lines(&mut text, &ub);
    let _ = writeln!(text, "verified: {}", if ok { "yes" } else { "NO" });
    let json = json!({
        "alpha": rational_text(alpha),
        "c_star": c,
        "slope": slope,
        "lower": json_lb,
        "upper_entropy": json_ub,
        "verified": ok,
    });
    Ok(Outcome { positive: ok, text, json })
}

pub fn finite(n: usize, block_size: usize, alpha: Rational64, de: Option<(usize, usize)>) -> Result<Outcome, Failure> {
    let b = match de {
        Some((d, e)) => finite_n_upper_bound(n, block_size, alpha, d, e).map_err(usage)?,
        None => best_finite_upper_bound(n, block_size, alpha)
            .ok_or_else(|| usage("no admissible core and superset sizes"))?,
    };
    let mut text = String::new();
    let _ = writeln!(text, "{}", b.floor());
    let _ = writeln!(text, "# n={n} size={block_size} alpha={}", rational_text(alpha));
    let _ = writeln!(text, "# core={} superset={} restricted bound={}", b.d_count, b.e_count, b.restricted_bound);
    let _ = writeln!(text, "# exact: {} = {}", b.value, rational_to_decimal(&b.value, 6));
    let _ = writeln!(text, "# ln/n: {}", sig6(b.log_per_n()));
    let json = json!({
        "n": n,
        "block_size": block_size,
        "alpha": rational_text(alpha),
        "d_count": b.d_count,
        "e_count": b.e_count,
        "restricted_bound": b.restricted_bound.to_string(),
        "value": b.value.to_string(),
        "floor": b.floor().to_string(),
        "log_per_n": b.log_per_n(),
    });
    Ok(Outcome { positive: true, text, json })
}
