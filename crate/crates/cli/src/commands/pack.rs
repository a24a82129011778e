use std::fmt::Write;

use num_rational::Rational64;
use serde_json::json;
use setinv::pack::{
    default_rs_family, max_shared_constituents, no_three_invertible_family, verify_no_three, verify_packing,
    PackingFamily, PackingPlan,
};

use super::{read_collection, set_line, usage, write_file};
use crate::num::rational_text;
use crate::{Failure, No3Args, Outcome};

const GREEDY_BUDGET: u64 = 5_000_000;

pub fn build(n: usize, alpha: Rational64, output: Option<&str>, max_blocks: u128) -> Result<Outcome, Failure> {
    let plan = PackingPlan::build(n, alpha).map_err(usage)?;
    let structure = plan.check_structure();
    let mut notes: Vec<String> = vec![format!("packing n={} alpha={}", n, rational_text(alpha))];
    let mut levels_json = Vec::new();
    for l in plan.levels() {
        let modulus = l.modulus.map_or("-".to_string(), |q| q.to_string());
        let parts = if l.parts == 0 { "-".to_string() } else { l.parts.to_string() };
        notes.push(format!(
            "level {}: n={} alpha={} parts={} q={} blocks={} size={} c={} max-intersection<={}{}",
            l.depth,
            l.n,
            rational_text(l.alpha),
            parts,
            modulus,
            l.family_size,
            l.block_size,
            rational_text(l.achieved_c),
            l.max_intersection_bound,
            if l.fallback { " (singletons)" } else { "" }
        ));
        levels_json.push(json!({
            "depth": l.depth,
            "n": l.n,
            "alpha": rational_text(l.alpha),
            "parts": l.parts,
            "modulus": l.modulus,
            "sub_family_size": l.sub_family_size.to_string(),
            "family_size": l.family_size.to_string(),
            "block_size": l.block_size,
            "achieved_c": rational_text(l.achieved_c),
            "max_intersection_bound": l.max_intersection_bound,
            "fallback": l.fallback,
        }));
    }
    notes.push(format!(
        "blocks={} size={} achieved c={} used elements={}",
        plan.family_size(),
        plan.block_size(),
        rational_text(plan.achieved_c()),
        plan.ground_size()
    ));
    notes.push(match &structure {
        Ok(()) => "structure: ok".to_string(),
        Err(e) => format!("structure: FAILED ({e})"),
    });
    let mut json = json!({
        "n": n,
        "alpha": rational_text(alpha),
        "used_elements": plan.ground_size(),
        "blocks": plan.family_size().to_string(),
        "block_size": plan.block_size(),
        "achieved_c": rational_text(plan.achieved_c()),
        "levels": levels_json,
        "structure_ok": structure.is_ok(),
    });

    let mut positive = structure.is_ok();
    let mut body = String::new();
    if plan.family_size() <= max_blocks {
        let family = plan.materialize(max_blocks).map_err(usage)?;
        let family = PackingFamily::new(n, family.blocks().iter().map(|b| widen(b, n)).collect(), alpha)
            .map_err(usage)?;
        let report = verify_packing(&family);
        let shared = plan.partition().map(|(parts, size)| max_shared_constituents(&family, parts, size));
        positive &= report.passed && shared.is_none_or(|s| s <= 1);
        notes.push(format!(
            "verified pairwise: max intersection {} vs alpha*size = {} over {} pairs: {}",
            report.max_intersection,
            rational_text(report.threshold),
            report.pairs_checked,
            if report.passed { "ok" } else { "FAILED" }
        ));
        if let Some(s) = shared {
            notes.push(format!("max shared top-level parts: {s}"));
        }
        json["pairwise"] = json!({
            "pairs_checked": report.pairs_checked,
            "max_intersection": report.max_intersection,
            "threshold": rational_text(report.threshold),
            "passed": report.passed,
            "max_shared_parts": shared,
        });
        let text = family.to_collection().to_text_with_comments(&notes).map_err(usage)?;
        match output {
            Some(path) => {
                write_file(path, &text)?;
                notes.push(format!("written to {path}"));
                body = comments(&notes);
            }
            None => body = text,
        }
    } else {
        notes.push(format!("pairwise check skipped: more than {max_blocks} blocks"));
        if output.is_some() {
            return Err(usage(format!("cannot list {} blocks; raise --max-blocks", plan.family_size())));
        }
        body.push_str(&comments(&notes));
    }
    json["verified"] = json!(positive);
    Ok(Outcome { positive, text: body, json })
}

// the plan may use fewer than n elements; blocks are reported on all n
fn widen(b: &setinv::Subset, n: usize) -> setinv::Subset {
    setinv::Subset::from_elements(n, b.iter()).expect("plan elements lie below n")
}

fn comments(lines: &[String]) -> String {
    lines.iter().map(|l| format!("# {l}\n")).collect()
}

pub fn verify(path: &str, alpha: Rational64) -> Result<Outcome, Failure> {
    let c = read_collection(path)?;
    let family = PackingFamily::from_collection(c, alpha).map_err(usage)?;
    let r = verify_packing(&family);
    let mut text = String::new();
    let _ = writeln!(text, "{}", if r.passed { "PACKING OK" } else { "NOT A PACKING" });
    let _ = writeln!(
        text,
        "# blocks={} size={} pairs={} max intersection={} threshold={}",
        r.blocks,
        r.block_size,
        r.pairs_checked,
        r.max_intersection,
        rational_text(r.threshold)
    );
    if !r.equal_sized {
        let _ = writeln!(text, "# blocks differ in size");
    }
    if !r.distinct {
        let _ = writeln!(text, "# some block appears twice");
    }
    if let (false, Some((i, j))) = (r.passed, r.worst_pair) {
        let b = family.blocks();
        let _ = writeln!(text, "# worst pair: #{i} and #{j} share {}", b[i].intersection_len(&b[j]));
        let _ = writeln!(text, "# #{i}: {}", set_line(&b[i]));
        let _ = writeln!(text, "# #{j}: {}", set_line(&b[j]));
    }
    let json = json!({
        "blocks": r.blocks,
        "block_size": r.block_size,
        "pairs_checked": r.pairs_checked,
        "equal_sized": r.equal_sized,
        "distinct": r.distinct,
        "max_intersection": r.max_intersection,
        "worst_pair": r.worst_pair,
        "threshold": rational_text(r.threshold),
        "passed": r.passed,
    });
    Ok(Outcome { positive: r.passed, text, json })
}

pub fn no3(args: &No3Args) -> Result<Outcome, Failure> {
    let (n, k) = (args.n, args.k);
    let rs = match &args.rs {
        Some(path) => {
            let c = read_collection(path)?;
            PackingFamily::from_collection(c, Rational64::new(1, 3)).map_err(usage)?
        }
        None => default_rs_family(n, k, GREEDY_BUDGET).map_err(usage)?,
    };
    let family = no_three_invertible_family(n, k, &rs).map_err(|e| match args.rs {
        Some(_) => Failure::Input(e.to_string()),
        None => usage(e),
    })?;
    let max_triples = if args.seed.is_some() { args.max_triples } else { u64::MAX };
    let r = verify_no_three(&family, max_triples, args.seed.unwrap_or(0));
    let positive = r.passed();
    let notes = vec![
        format!("no-three family n={n} k={k} sets={}", r.sets),
        format!(
            "triples checked={}{} invertible={} closed-form disagreements={}",
            r.triples_checked,
            if r.exhaustive_triples { " (all)" } else { " (sampled)" },
            r.invertible_triples,
            r.triple_test_disagreements
        ),
        format!("pairs checked={} non-invertible={}", r.pairs_checked, r.non_invertible_pairs),
        format!("verified: {}", if positive { "yes" } else { "NO" }),
    ];
    let text = family.to_text_with_comments(&notes).map_err(usage)?;
    let body = match &args.output {
        Some(path) => {
            write_file(path, &text)?;
            comments(&notes)
        }
        None => text,
    };
    let json = json!({
        "n": n,
        "k": k,
        "sets": family.sets().iter().map(|s| s.to_vec()).collect::<Vec<_>>(),
        "triples_checked": r.triples_checked,
        "exhaustive_triples": r.exhaustive_triples,
        "invertible_triples": r.invertible_triples,
        "closed_form_disagreements": r.triple_test_disagreements,
        "pairs_checked": r.pairs_checked,
        "non_invertible_pairs": r.non_invertible_pairs,
        "verified": positive,
    });
    Ok(Outcome { positive, text: body, json })
}
