//! Deciding whether one permutation can invert every set of a collection.
//!
//! A collection is invertible exactly when its conflict graph has a perfect
//! matching: left vertex `i` may be sent to right vertex `j` iff no set holds
//! both `i` and `j`. The decision procedure returns either a verified
//! inverting permutation or a Hall-violating certificate.

pub mod conditions;
pub mod matching;

pub use conditions::{check_disjoint_criterion, check_halfsize_conditions, check_triple};

use thiserror::Error;

use crate::setcore::{for_each_permutation, Collection, Permutation, SetError, Subset};

pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvertError {
    #[error("ground set size {n} exceeds the enumeration limit {limit}")]
    LimitExceeded { n: usize, limit: usize },
    #[error("sets #{0} and #{1} are not disjoint")]
    NotDisjoint(usize, usize),
    #[error("expected exactly {expected} sets, found {found}")]
    WrongSetCount { expected: usize, found: usize },
    #[error("sets must all have size {expected}, set #{index} has size {found}")]
    UnequalSizes { expected: usize, index: usize, found: usize },
    #[error("ground set size {0} is odd")]
    OddGroundSet(usize),
    #[error(transparent)]
    Set(#[from] SetError),
}

/// Bipartite graph on two copies of the ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictGraph {
    adjacency: Vec<Subset>,
}

impl ConflictGraph {
    pub fn size(&self) -> usize {
        self.adjacency.len()
    }

    pub fn adjacency(&self) -> &[Subset] {
        &self.adjacency
    }

    pub fn neighbors(&self, i: usize) -> &Subset {
        &self.adjacency[i]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    pub fn neighborhood(&self, of: &Subset) -> Subset {
        matching::neighborhood(&self.adjacency, self.size(), of)
    }
}

/// `adjacency[i] = V − ∪{ S : i ∈ S }`.
pub fn conflict_graph(c: &Collection) -> ConflictGraph {
    let n = c.ground_size();
    let mut forbidden = vec![Subset::empty(n); n];
    for s in c.sets() {
        for i in s {
            forbidden[i].union_with(s);
        }
    }
    ConflictGraph { adjacency: forbidden.iter().map(Subset::complement).collect() }
}

/// Outcome of the matching search: a perfect matching read as a
/// permutation, or a set of left vertices with too few neighbors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchingResult {
    Perfect(Permutation),
    Deficient(Subset),
}

impl MatchingResult {
    pub fn permutation(&self) -> Option<&Permutation> {
        match self {
            MatchingResult::Perfect(p) => Some(p),
            MatchingResult::Deficient(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&Subset> {
        match self {
            MatchingResult::Perfect(_) => None,
            MatchingResult::Deficient(c) => Some(c),
        }
    }

    pub fn is_perfect(&self) -> bool {
        matches!(self, MatchingResult::Perfect(_))
    }
}

/// Maximum matching of the conflict graph. The certificate is grown from the
/// lowest-index unmatched left vertex.
pub fn maximum_matching(g: &ConflictGraph) -> MatchingResult {
    let n = g.size();
    let m = matching::maximum_matching(&g.adjacency, n);
    match m.left_to_right.iter().position(Option::is_none) {
        None => {
            let image = m.left_to_right.iter().map(|v| v.unwrap()).collect();
            let p = Permutation::from_image(image).expect("perfect matching is a bijection");
            MatchingResult::Perfect(p)
        }
        Some(free) => {
            let (left, right) = matching::alternating_reach(&g.adjacency, &m, free);
            assert!(right.cardinality() < left.cardinality(), "alternating reach is not a Hall violator");
            MatchingResult::Deficient(left)
        }
    }
}

/// Decides invertibility. A returned permutation is re-checked against every
/// set; a mismatch is an internal bug and panics.
pub fn decide_invertible(c: &Collection) -> MatchingResult {
    let g = conflict_graph(c);
    let result = maximum_matching(&g);
    match &result {
        MatchingResult::Perfect(p) => {
            for (i, s) in c.sets().iter().enumerate() {
                assert!(
                    p.inverts(s).expect("same ground set"),
                    "matching permutation fails to invert set #{i}"
                );
            }
        }
        MatchingResult::Deficient(cert) => {
            let nb = g.neighborhood(cert);
            assert!(nb.cardinality() < cert.cardinality(), "certificate is not a Hall violator");
        }
    }
    result
}

/// Lexicographically first permutation that inverts every set, found by
/// enumerating all `n!` permutations.
pub fn brute_force_invertible(c: &Collection, limit: usize) -> Result<Option<Permutation>, InvertError> {
    let n = c.ground_size();
    if n > limit {
        return Err(InvertError::LimitExceeded { n, limit });
    }
    let sets: Vec<Vec<usize>> = c.sets().iter().map(Subset::to_vec).collect();
    let members: Vec<&Subset> = c.sets().iter().collect();
    let mut found = None;
    for_each_permutation(n, |img| {
        let ok = sets
            .iter()
            .zip(&members)
            .all(|(elems, s)| elems.iter().all(|&x| !s.contains(img[x])));
        if ok {
            found = Some(img.to_vec());
        }
        !ok
    });
    Ok(found.map(|img| Permutation::from_image(img).unwrap()))
}
