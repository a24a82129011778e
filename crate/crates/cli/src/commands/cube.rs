use std::fmt::Write;

use serde_json::json;
use setinv::qcube::{
    blocking_lower_bound, first_unblocked_square, inversion_assisted_blocking, recursive_blocking_set,
    recursive_size_ceiling, square_count, CubeEdgeSet, DEFAULT_CUBE_LIMIT,
};

use super::{input, read_text, usage, write_file};
use crate::{Failure, Outcome};

pub fn build(n: usize, assist: bool, output: Option<&str>, limit: Option<usize>) -> Result<Outcome, Failure> {
    let (set, assisted) = if assist {
        let a = inversion_assisted_blocking(n).map_err(usage)?;
        (a.set.clone(), Some(a))
    } else {
        (recursive_blocking_set(n).map_err(usage)?, None)
    };
    let cap = limit.unwrap_or(DEFAULT_CUBE_LIMIT);
    let blocking = if n <= cap { Some(first_unblocked_square(&set, cap).map_err(usage)?.is_none()) } else { None };

    let mut notes = vec![
        format!("edges: {}", set.len()),
        format!("ceiling (n-1)*2^(n-2): {}", recursive_size_ceiling(n)),
        format!("squares: {}, counting lower bound: {}", square_count(n), blocking_lower_bound(n)),
    ];
    let mut json = json!({
        "n": n,
        "edges": set.len(),
        "ceiling": recursive_size_ceiling(n),
        "squares": square_count(n),
        "lower_bound": blocking_lower_bound(n),
        "square_blocking": blocking,
    });
    if let Some(a) = &assisted {
        notes.push(format!("unassisted edges: {}, saved: {}{}", a.unassisted_size, a.saved, if a.fell_back { " (fell back)" } else { "" }));
        let mut steps = Vec::new();
        for s in &a.steps {
            notes.push(format!(
                "step {}->{}: heavy vertices {}, inverted {}, cover {} (plain {})",
                s.n,
                s.n + 1,
                s.heavy_vertices,
                s.inverted,
                s.chosen_cover,
                s.plain_cover
            ));
            steps.push(json!({
                "n": s.n,
                "heavy_vertices": s.heavy_vertices,
                "inverted": s.inverted,
                "cover": s.chosen_cover,
                "plain_cover": s.plain_cover,
                "directions": s.symmetry.directions,
                "flip": s.symmetry.flip,
            }));
        }
        json["unassisted_edges"] = json!(a.unassisted_size);
        json["saved"] = json!(a.saved);
        json["fell_back"] = json!(a.fell_back);
        json["steps"] = json!(steps);
    }
    notes.push(match blocking {
        Some(true) => "square-blocking: verified".into(),
        Some(false) => "square-blocking: FAILED".into(),
        None => format!("square-blocking: not checked (n > {cap})"),
    });
    let body: String = notes.iter().map(|l| format!("# {l}\n")).collect();
    let text = match output {
        Some(path) => {
            write_file(path, &format!("{body}{}", set.to_text()))?;
            body
        }
        None => format!("{body}{}", set.to_text()),
    };
    Ok(Outcome { positive: blocking != Some(false), text, json })
}

pub fn verify(n: usize, path: &str, limit: Option<usize>) -> Result<Outcome, Failure> {
    let set = CubeEdgeSet::parse(&read_text(path)?).map_err(|e| input(format!("{path}: {e}")))?;
    if set.dimension() != n {
        return Err(input(format!("{path}: file is for Q_{}, expected Q_{n}", set.dimension())));
    }
    let cap = limit.unwrap_or(DEFAULT_CUBE_LIMIT);
    let open = first_unblocked_square(&set, cap).map_err(usage)?;
    let mut text = String::new();
    let _ = writeln!(text, "{}", if open.is_none() { "SQUARE-BLOCKING" } else { "NOT SQUARE-BLOCKING" });
    let _ = writeln!(text, "# edges: {}, squares: {}", set.len(), square_count(n));
    let mut json = json!({ "n": n, "edges": set.len(), "square_blocking": open.is_none() });
    if let Some(s) = open {
        let width = n;
        let _ = writeln!(text, "# open square at {:0width$b} in directions {} and {}", s.base, s.i, s.j);
        json["open_square"] = json!({ "base": s.base, "directions": [s.i, s.j] });
    }
    Ok(Outcome { positive: open.is_none(), text, json })
}
