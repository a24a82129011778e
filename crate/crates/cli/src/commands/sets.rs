use std::fmt::Write;

use serde_json::json;
use setinv::exact::rational_to_decimal;
use setinv::invert::{brute_force_invertible, check_triple, conflict_graph, decide_invertible, DEFAULT_BRUTE_FORCE_LIMIT};
use setinv::kappa::{
    ceil_nonneg, exhaustive_kappa, find_simple_permutation, lambda_simple, sigma as simple_count, SizeProfile, DEFAULT_EXHAUSTIVE_LIMIT,
};

use super::{input, read_collection, set_line, usage};
use crate::{Failure, Outcome};

pub fn invert(path: &str, brute_force: bool, limit: Option<usize>) -> Result<Outcome, Failure> {
    let c = read_collection(path)?;
    let n = c.ground_size();
    let verdict = decide_invertible(&c);
    let mut text = String::new();
    let mut json = json!({ "n": n, "sets": c.len(), "invertible": verdict.is_perfect() });

    if let Some(p) = verdict.permutation() {
        let checked = c.sets().iter().all(|s| p.inverts(s).expect("sizes match"));
        assert!(checked, "matching produced a non-inverting permutation");
        let _ = writeln!(text, "{p}");
        let _ = writeln!(text, "# verified: inverts all {} sets", c.len());
        json["permutation"] = json!(p.image());
        json["verified"] = json!(checked);
    } else {
        let cert = verdict.certificate().expect("deficient result carries a certificate");
        let hood = conflict_graph(&c).neighborhood(cert);
        assert!(hood.cardinality() < cert.cardinality(), "certificate is not a Hall violator");
        let _ = writeln!(text, "NOT INVERTIBLE");
        let _ = writeln!(text, "{}", set_line(cert));
        let _ = writeln!(
            text,
            "# verified: {} elements with only {} admissible images",
            cert.cardinality(),
            hood.cardinality()
        );
        json["certificate"] = json!(cert.to_vec());
        json["neighborhood"] = json!(hood.to_vec());
        json["verified"] = json!(true);
    }

    if brute_force {
        let cap = limit.unwrap_or(DEFAULT_BRUTE_FORCE_LIMIT);
        let found = brute_force_invertible(&c, cap).map_err(usage)?;
        let agrees = found.is_some() == verdict.is_perfect();
        let _ = writeln!(text, "# exhaustive search: {}", if agrees { "agrees" } else { "DISAGREES" });
        json["brute_force_agrees"] = json!(agrees);
        assert!(agrees, "matching and exhaustive search disagree");
    }
    Ok(Outcome { positive: verdict.is_perfect(), text, json })
}

pub fn triple(path: &str) -> Result<Outcome, Failure> {
    let c = read_collection(path)?;
    let by_formula = check_triple(&c).map_err(|e| input(format!("{path}: {e}")))?;
    let by_matching = decide_invertible(&c).is_perfect();
    let s = c.sets();
    let all = s[0].intersection(&s[1]).intersection(&s[2]).cardinality();
    let none = s[0].union(&s[1]).union(&s[2]).complement().cardinality();
    let mut text = String::new();
    let _ = writeln!(text, "{}", if by_formula { "INVERTIBLE" } else { "NOT INVERTIBLE" });
    let _ = writeln!(text, "# in all three: {all}, in none: {none}, set size: {}", s[0].cardinality());
    let _ = writeln!(text, "# matching: {}", if by_formula == by_matching { "agrees" } else { "DISAGREES" });
    let json = json!({
        "n": c.ground_size(),
        "set_size": s[0].cardinality(),
        "in_all": all,
        "in_none": none,
        "invertible": by_formula,
        "matching_agrees": by_formula == by_matching,
    });
    Ok(Outcome { positive: by_formula && by_formula == by_matching, text, json })
}

pub fn kappa(path: &str, exhaustive: bool, all_permutations: bool, limit: Option<usize>) -> Result<Outcome, Failure> {
    let c = read_collection(path)?;
    let profile = SizeProfile::from_collection(&c);
    let search = find_simple_permutation(&c);
    let bound = &search.bound;
    let recount = c.sets().iter().filter(|s| search.permutation.inverts(s).expect("sizes match")).count();
    let verified = recount == search.inverted && ceil_nonneg(bound) <= search.inverted.into();

    let bound_text = format!("{bound}");
    let bound_dec = rational_to_decimal(bound, 6);
    let mut text = String::new();
    let _ = writeln!(text, "{}", search.permutation);
    let _ = writeln!(text, "# inverts {} of {} sets", search.inverted, c.len());
    let _ = writeln!(text, "# averaging bound: {bound_text} = {bound_dec}");
    if profile.oversized() > 0 {
        let _ = writeln!(text, "# sets larger than n/2 (never inverted): {}", profile.oversized());
    }
    let _ = writeln!(
        text,
        "# inverted sets: {}",
        search.inverted_sets.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
    );
    let _ = writeln!(text, "# verified: {}", if verified { "yes" } else { "NO" });
    let mut json = json!({
        "n": c.ground_size(),
        "sets": c.len(),
        "permutation": search.permutation.image(),
        "inverted": search.inverted,
        "inverted_sets": search.inverted_sets,
        "bound": bound_text,
        "bound_decimal": bound_dec,
        "oversized": profile.oversized(),
        "verified": verified,
    });
    if exhaustive {
        let cap = limit.unwrap_or(DEFAULT_EXHAUSTIVE_LIMIT);
        let (best, count) = exhaustive_kappa(&c, !all_permutations, cap).map_err(usage)?;
        let kind = if all_permutations { "permutations" } else { "simple permutations" };
        let _ = writeln!(text, "# best over all {kind}: {count} ({best})");
        json["exhaustive"] = json!({ "over": kind, "best": count, "permutation": best.image() });
    }
    Ok(Outcome { positive: verified, text, json })
}

pub fn sigma(n: usize) -> Result<Outcome, Failure> {
    let v = simple_count(n).to_string();
    Ok(Outcome { positive: true, text: format!("{v}\n"), json: json!({ "n": n, "sigma": v }) })
}

pub fn lambda(n: usize, i: usize) -> Result<Outcome, Failure> {
    if 2 * i > n {
        return Err(usage(format!("need i <= n/2, got n = {n}, i = {i}")));
    }
    let v = lambda_simple(n, i).to_string();
    Ok(Outcome { positive: true, text: format!("{v}\n"), json: json!({ "n": n, "i": i, "lambda": v }) })
}
