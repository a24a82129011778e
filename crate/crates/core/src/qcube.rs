//! Square-blocking edge sets in the hypercube `Q_n`.
//!
//! Vertices are `n`-bit labels. An edge is stored as `(vertex, direction)`
//! with bit `direction` of `vertex` clear; it joins `vertex` and
//! `vertex | 1 << direction`. A set of edges is square-blocking when every
//! 4-cycle of `Q_n` uses at least one of them.
//!
//! `Q_{n+1}` splits along its top direction into a lower copy `Q'` and an
//! upper copy `Q''` joined by the matching `W`. Blocking sets `N'` of `Q'`
//! and `N''` of `Q''` extend to `Q_{n+1}` by the `W`-edges at a vertex cover
//! of the edges of `Q'` missed by both `N'` and the projection of `N''`.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::invert::matching::minimum_vertex_cover;
use crate::kappa::find_simple_permutation;
use crate::setcore::{Collection, Subset};

/// Largest dimension for square enumeration and verification.
pub const DEFAULT_CUBE_LIMIT: usize = 14;
/// Largest dimension the constructions accept.
pub const MAX_CONSTRUCTION_DIM: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("dimension {n} exceeds the limit {limit}")]
    Limit { n: usize, limit: usize },
    #[error("dimension {n} is below the minimum {min}")]
    Dimension { n: usize, min: usize },
    #[error("edge ({vertex}, {direction}) does not fit in Q_{n}")]
    EdgeOutOfRange { vertex: u32, direction: usize, n: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn parse_err(line: usize, message: impl Into<String>) -> CubeError {
    CubeError::Parse { line, message: message.into() }
}

/// A set of edges of `Q_n`, kept in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CubeEdgeSet {
    n: usize,
    edges: BTreeSet<(u32, u8)>,
}

impl CubeEdgeSet {
    pub fn new(n: usize) -> Self {
        assert!(n <= 31, "dimension {n} does not fit a u32 label");
        CubeEdgeSet { n, edges: BTreeSet::new() }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Inserts the edge at `vertex` in `direction`, from either endpoint.
    pub fn insert(&mut self, vertex: u32, direction: usize) -> Result<bool, CubeError> {
        if direction >= self.n || (vertex >> self.n) != 0 {
            return Err(CubeError::EdgeOutOfRange { vertex, direction, n: self.n });
        }
        Ok(self.edges.insert((vertex & !(1 << direction), direction as u8)))
    }

    pub fn contains(&self, vertex: u32, direction: usize) -> bool {
        direction < self.n && self.edges.contains(&(vertex & !(1 << direction), direction as u8))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Canonical `(vertex, direction)` pairs in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.edges.iter().map(|&(v, d)| (v, d as usize))
    }

    /// Number of edges of the set incident to `vertex`.
    pub fn degree(&self, vertex: u32) -> usize {
        (0..self.n).filter(|&d| self.contains(vertex, d)).count()
    }

    /// First line `n`, then `<label, most significant bit first> <direction>`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (v, d) in self.iter() {
            out.push_str(&format!("{} {d}\n", label(v, self.n)));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, CubeError> {
        let mut set: Option<CubeEdgeSet> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some(s) = set.as_mut() else {
                let n: usize = line.parse().map_err(|_| parse_err(line_no, format!("bad dimension `{line}`")))?;
                if n > 31 {
                    return Err(CubeError::Limit { n, limit: 31 });
                }
                set = Some(CubeEdgeSet::new(n));
                continue;
            };
            let mut parts = line.split_whitespace();
            let (Some(bits), Some(dir), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(parse_err(line_no, "expected `<binary label> <direction>`"));
            };
            if bits.len() != s.n || !bits.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(parse_err(line_no, format!("label `{bits}` is not {} binary digits", s.n)));
            }
            let vertex = if s.n == 0 { 0 } else { u32::from_str_radix(bits, 2).expect("binary digits") };
            let direction: usize = dir.parse().map_err(|_| parse_err(line_no, format!("bad direction `{dir}`")))?;
            s.insert(vertex, direction)
                .map_err(|e| parse_err(line_no, e.to_string()))?;
        }
        set.ok_or_else(|| parse_err(0, "missing dimension line"))
    }
}

fn label(v: u32, n: usize) -> String {
    (0..n).rev().map(|b| if v >> b & 1 == 1 { '1' } else { '0' }).collect()
}

impl fmt::Display for CubeEdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The 4-cycle spanned by directions `i < j` at `base`, whose bits `i` and
/// `j` are clear.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Square {
    pub base: u32,
    pub i: usize,
    pub j: usize,
}

impl Square {
    pub fn edges(&self) -> [(u32, usize); 4] {
        let (bi, bj) = (1u32 << self.i, 1u32 << self.j);
        [(self.base, self.i), (self.base, self.j), (self.base | bj, self.i), (self.base | bi, self.j)]
    }
}

fn check_limit(n: usize, limit: usize) -> Result<(), CubeError> {
    if n > limit {
        return Err(CubeError::Limit { n, limit });
    }
    Ok(())
}

/// `C(n, 2) · 2^{n−2}`.
pub fn square_count(n: usize) -> u64 {
    if n < 2 {
        return 0;
    }
    (n * (n - 1) / 2) as u64 * (1u64 << (n - 2))
}

/// Every square of `Q_n` once, ordered by direction pair then base.
pub fn enumerate_squares(n: usize, limit: usize) -> Result<impl Iterator<Item = Square>, CubeError> {
    if n < 2 {
        return Err(CubeError::Dimension { n, min: 2 });
    }
    check_limit(n, limit)?;
    Ok((0..n).flat_map(move |i| {
        (i + 1..n).flat_map(move |j| {
            let mask = (1u32 << i) | (1u32 << j);
            (0..1u32 << n).filter(move |v| v & mask == 0).map(move |base| Square { base, i, j })
        })
    }))
}

/// A square of `Q_n` that avoids every edge of `m`, if any.
pub fn first_unblocked_square(m: &CubeEdgeSet, limit: usize) -> Result<Option<Square>, CubeError> {
    let n = m.dimension();
    check_limit(n, limit)?;
    if n < 2 {
        return Ok(None);
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    // per direction pair, the lowest unblocked base; the first pair wins
    let found = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mask = (1u32 << i) | (1u32 << j);
            (0..1u32 << n)
                .filter(|v| v & mask == 0)
                .map(|base| Square { base, i, j })
                .find(|s| s.edges().iter().all(|&(v, d)| !m.contains(v, d)))
        })
        .collect::<Vec<_>>();
    Ok(found.into_iter().flatten().next())
}

/// Whether removing `m` leaves `Q_n` without 4-cycles.
pub fn is_square_blocking(m: &CubeEdgeSet, limit: usize) -> Result<bool, CubeError> {
    Ok(first_unblocked_square(m, limit)?.is_none())
}

/// `⌈C(n,2) 2^{n−2} / (n−1)⌉`: each edge lies in `n − 1` squares.
pub fn blocking_lower_bound(n: usize) -> u64 {
    if n < 2 {
        return 0;
    }
    square_count(n).div_ceil(n as u64 - 1)
}

/// `(n − 1) · 2^{n−2}`, the size the plain recursion never exceeds.
pub fn recursive_size_ceiling(n: usize) -> u64 {
    if n < 2 {
        return 0;
    }
    (n as u64 - 1) << (n - 2)
}

/// A symmetry of `Q_n`: move bit `d` to bit `directions[d]`, then flip the
/// bits of `flip`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeSymmetry {
    pub directions: Vec<usize>,
    pub flip: u32,
}

impl CubeSymmetry {
    pub fn identity(n: usize) -> Self {
        CubeSymmetry { directions: (0..n).collect(), flip: 0 }
    }

    pub fn is_identity(&self) -> bool {
        self.flip == 0 && self.directions.iter().enumerate().all(|(d, &e)| d == e)
    }

    pub fn vertex(&self, v: u32) -> u32 {
        let mut out = 0;
        for (d, &e) in self.directions.iter().enumerate() {
            out |= (v >> d & 1) << e;
        }
        out ^ self.flip
    }

    pub fn edges(&self, m: &CubeEdgeSet) -> CubeEdgeSet {
        let mut out = CubeEdgeSet::new(m.dimension());
        for (v, d) in m.iter() {
            out.insert(self.vertex(v), self.directions[d]).expect("symmetry keeps edges in range");
        }
        out
    }
}

/// Edges of `Q_n` outside both `lower` and `upper`, covered minimally by
/// vertices. Returns the cover as a sorted vertex list.
pub fn residual_cover(lower: &CubeEdgeSet, upper: &CubeEdgeSet) -> Vec<u32> {
    let n = lower.dimension();
    let size = 1usize << n;
    // even-parity vertices on the left, odd on the right, indexed by rank
    let mut rank = vec![0usize; size];
    let (mut evens, mut odds) = (Vec::new(), Vec::new());
    for v in 0..size as u32 {
        if v.count_ones() % 2 == 0 {
            rank[v as usize] = evens.len();
            evens.push(v);
        } else {
            rank[v as usize] = odds.len();
            odds.push(v);
        }
    }
    let mut adjacency = vec![Subset::empty(odds.len()); evens.len()];
    for (li, &v) in evens.iter().enumerate() {
        for d in 0..n {
            if !lower.contains(v, d) && !upper.contains(v, d) {
                adjacency[li].insert(rank[(v ^ (1 << d)) as usize]);
            }
        }
    }
    let (_, cover) = minimum_vertex_cover(&adjacency, odds.len());
    let mut out: Vec<u32> = cover.left.iter().map(|i| evens[i]).chain(cover.right.iter().map(|i| odds[i])).collect();
    out.sort_unstable();
    out
}

/// `N' ∪ N'' ∪ W'` in `Q_{n+1}`, with `N' = lower` in the copy where the
/// top bit is clear, `N'' = upper` where it is set, and `W'` the top-direction
/// edges at a minimum cover of what both miss.
pub fn extend_blocking(lower: &CubeEdgeSet, upper: &CubeEdgeSet) -> CubeEdgeSet {
    let n = lower.dimension();
    assert_eq!(n, upper.dimension());
    let top = 1u32 << n;
    let mut out = CubeEdgeSet::new(n + 1);
    for (v, d) in lower.iter() {
        out.insert(v, d).expect("in range");
    }
    for (v, d) in upper.iter() {
        out.insert(v | top, d).expect("in range");
    }
    for v in residual_cover(lower, upper) {
        out.insert(v, n).expect("in range");
    }
    out
}

fn check_construction_dim(n: usize, min: usize) -> Result<(), CubeError> {
    if n < min {
        return Err(CubeError::Dimension { n, min });
    }
    check_limit(n, MAX_CONSTRUCTION_DIM)
}

/// `M_2` is the edge `(00, 0)`; `M_{k+1}` extends two copies of `M_k`.
pub fn recursive_blocking_set(n: usize) -> Result<CubeEdgeSet, CubeError> {
    check_construction_dim(n, 2)?;
    let mut m = CubeEdgeSet::new(2);
    m.insert(0, 0)?;
    for _ in 2..n {
        m = extend_blocking(&m, &m);
    }
    if n <= DEFAULT_CUBE_LIMIT {
        assert!(is_square_blocking(&m, DEFAULT_CUBE_LIMIT)?, "recursive construction left a square");
    }
    Ok(m)
}

/// One step of the assisted recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssistStep {
    /// Dimension of the copies being joined.
    pub n: usize,
    /// Vertices with at least `n/2` incident edges in the current set.
    pub heavy_vertices: usize,
    /// How many of their free-direction sets the direction permutation inverts.
    pub inverted: usize,
    /// Cover size when the upper copy repeats the lower one.
    pub plain_cover: usize,
    /// Cover size with the chosen symmetry.
    pub chosen_cover: usize,
    pub symmetry: CubeSymmetry,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssistedBlocking {
    pub set: CubeEdgeSet,
    pub unassisted_size: usize,
    /// `unassisted_size − set.len()`, never negative.
    pub saved: usize,
    pub steps: Vec<AssistStep>,
    /// The assisted recursion was no better and the plain set was returned.
    pub fell_back: bool,
}

const MAX_FLIPS: usize = 64;

fn assisted_step(m: &CubeEdgeSet) -> (CubeEdgeSet, AssistStep) {
    let n = m.dimension();
    let heavy: Vec<u32> = (0..1u32 << n).filter(|&v| 2 * m.degree(v) >= n).collect();
    let plain_cover = residual_cover(m, m).len();
    let mut step = AssistStep {
        n,
        heavy_vertices: heavy.len(),
        inverted: 0,
        plain_cover,
        chosen_cover: plain_cover,
        symmetry: CubeSymmetry::identity(n),
    };
    if heavy.is_empty() {
        return (extend_blocking(m, m), step);
    }
    let free: Vec<Subset> = heavy
        .iter()
        .map(|&v| Subset::from_elements(n, (0..n).filter(|&d| !m.contains(v, d))).expect("directions in range"))
        .collect();
    let search = find_simple_permutation(&Collection::new(n, free).expect("same ground set"));
    step.inverted = search.inverted;
    let directions = search.permutation.image().to_vec();

    // flips that fix an inverted heavy vertex, so all its edges get covered
    let moved = CubeSymmetry { directions: directions.clone(), flip: 0 };
    let mut flips: Vec<u32> = vec![0];
    for &i in &search.inverted_sets {
        let t = heavy[i] ^ moved.vertex(heavy[i]);
        if !flips.contains(&t) {
            flips.push(t);
        }
        if flips.len() >= MAX_FLIPS {
            break;
        }
    }
    let mut best: Option<(usize, CubeSymmetry, CubeEdgeSet)> = None;
    for flip in flips {
        let sym = CubeSymmetry { directions: directions.clone(), flip };
        if sym.is_identity() {
            continue;
        }
        let image = sym.edges(m);
        let cover = residual_cover(m, &image).len();
        if best.as_ref().is_none_or(|b| cover < b.0) {
            best = Some((cover, sym, image));
        }
    }
    match best {
        Some((cover, sym, image)) if cover < plain_cover => {
            step.chosen_cover = cover;
            step.symmetry = sym;
            (extend_blocking(m, &image), step)
        }
        _ => (extend_blocking(m, m), step),
    }
}

/// The recursion with `N''` taken as the image of `N'` under a cube symmetry
/// whose direction part is a simple permutation inverting the free-direction
/// sets of heavy vertices. Each step keeps the smaller of the assisted and
/// plain extensions; the final set is never larger than
/// [`recursive_blocking_set`].
pub fn inversion_assisted_blocking(n: usize) -> Result<AssistedBlocking, CubeError> {
    check_construction_dim(n, 3)?;
    let plain = recursive_blocking_set(n)?;
    let mut m = CubeEdgeSet::new(2);
    m.insert(0, 0)?;
    let mut steps = Vec::new();
    for _ in 2..n {
        let (next, step) = assisted_step(&m);
        steps.push(step);
        m = next;
    }
    if n <= DEFAULT_CUBE_LIMIT {
        assert!(is_square_blocking(&m, DEFAULT_CUBE_LIMIT)?, "assisted construction left a square");
    }
    let fell_back = m.len() > plain.len();
    let set = if fell_back { plain.clone() } else { m };
    Ok(AssistedBlocking { unassisted_size: plain.len(), saved: plain.len() - set.len(), set, steps, fell_back })
}
