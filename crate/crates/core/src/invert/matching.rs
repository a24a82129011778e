//! Maximum bipartite matching over bit-vector adjacency.
//!
//! Left vertex `u` is adjacent to the right vertices in `adjacency[u]`.
//! Phases follow Hopcroft–Karp: a BFS builds alternating layers from every
//! free left vertex, then a layered DFS augments along vertex-disjoint
//! shortest paths. Neighborhood scans skip over already-visited right
//! vertices a whole word at a time.

use std::collections::VecDeque;

use crate::setcore::Subset;

const UNREACHED: usize = usize::MAX;

/// A matching in a bipartite graph with `left` and `right` vertex classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub left_to_right: Vec<Option<usize>>,
    pub right_to_left: Vec<Option<usize>>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.left_to_right.iter().flatten().count()
    }

    pub fn is_left_perfect(&self) -> bool {
        self.left_to_right.iter().all(Option::is_some)
    }
}

/// Computes a maximum matching. `right` is the size of the right class;
/// every adjacency row must be a subset of `[0, right)`.
pub fn maximum_matching(adjacency: &[Subset], right: usize) -> Matching {
    for row in adjacency {
        assert_eq!(row.ground_size(), right, "adjacency row over wrong right class");
    }
    let left = adjacency.len();
    let mut pair_l: Vec<Option<usize>> = vec![None; left];
    let mut pair_r: Vec<Option<usize>> = vec![None; right];

    // cheap greedy start
    for u in 0..left {
        let mut v = adjacency[u].first();
        while let Some(j) = v {
            if pair_r[j].is_none() {
                pair_l[u] = Some(j);
                pair_r[j] = Some(u);
                break;
            }
            v = adjacency[u].next_element(j + 1);
        }
    }

    let mut dist = vec![UNREACHED; left];
    let mut cursor = vec![0usize; left];
    loop {
        if !bfs_layers(adjacency, &pair_l, &pair_r, &mut dist) {
            break;
        }
        cursor.iter_mut().for_each(|c| *c = 0);
        for u in 0..left {
            if pair_l[u].is_none() {
                augment_from(u, adjacency, &mut pair_l, &mut pair_r, &mut dist, &mut cursor);
            }
        }
    }
    Matching { left_to_right: pair_l, right_to_left: pair_r }
}

/// Returns true when some free right vertex is reachable.
fn bfs_layers(
    adjacency: &[Subset],
    pair_l: &[Option<usize>],
    pair_r: &[Option<usize>],
    dist: &mut [usize],
) -> bool {
    let right = pair_r.len();
    let mut unvisited = Subset::full(right);
    let mut queue = VecDeque::new();
    for (u, d) in dist.iter_mut().enumerate() {
        if pair_l[u].is_none() {
            *d = 0;
            queue.push_back(u);
        } else {
            *d = UNREACHED;
        }
    }
    let mut found = false;
    while let Some(u) = queue.pop_front() {
        let frontier = adjacency[u].intersection(&unvisited);
        for v in &frontier {
            unvisited.remove(v);
            match pair_r[v] {
                None => found = true,
                Some(w) => {
                    if dist[w] == UNREACHED {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    found
}

// Iterative layered DFS. `cursor[u]` is the next right index to try from u,
// so each edge is scanned at most once per phase.
fn augment_from(
    root: usize,
    adjacency: &[Subset],
    pair_l: &mut [Option<usize>],
    pair_r: &mut [Option<usize>],
    dist: &mut [usize],
    cursor: &mut [usize],
) -> bool {
    // stack of (left vertex, right vertex chosen to reach the next layer)
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut u = root;
    loop {
        let mut advanced = false;
        while let Some(v) = adjacency[u].next_element(cursor[u]) {
            cursor[u] = v + 1;
            match pair_r[v] {
                None => {
                    // flip the alternating path root -> ... -> u -> v
                    stack.push((u, v));
                    for &(a, b) in stack.iter().rev() {
                        pair_l[a] = Some(b);
                        pair_r[b] = Some(a);
                    }
                    return true;
                }
                Some(w) if dist[w] == dist[u].wrapping_add(1) => {
                    stack.push((u, v));
                    u = w;
                    advanced = true;
                    break;
                }
                Some(_) => {}
            }
        }
        if advanced {
            continue;
        }
        dist[u] = UNREACHED;
        match stack.pop() {
            Some((prev, _)) => u = prev,
            None => return false,
        }
    }
}

/// Left vertices reachable from `start` by alternating paths (any edge from
/// the left, matching edges back from the right), and the right vertices
/// seen on the way. When `start` is free and the matching is maximum, the
/// left set is a Hall violator: its neighborhood is exactly the right set,
/// which is one smaller.
pub fn alternating_reach(adjacency: &[Subset], m: &Matching, start: usize) -> (Subset, Subset) {
    let right = m.right_to_left.len();
    let mut left_seen = Subset::empty(adjacency.len());
    let mut right_seen = Subset::empty(right);
    let mut queue = VecDeque::from([start]);
    left_seen.insert(start);
    while let Some(u) = queue.pop_front() {
        let fresh = adjacency[u].difference(&right_seen);
        for v in &fresh {
            right_seen.insert(v);
            if let Some(w) = m.right_to_left[v] {
                if !left_seen.contains(w) {
                    left_seen.insert(w);
                    queue.push_back(w);
                }
            }
        }
    }
    (left_seen, right_seen)
}

/// Neighborhood of a set of left vertices.
pub fn neighborhood(adjacency: &[Subset], right: usize, of: &Subset) -> Subset {
    let mut out = Subset::empty(right);
    for u in of {
        out.union_with(&adjacency[u]);
    }
    out
}

/// A minimum vertex cover split into its left and right parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexCover {
    pub left: Subset,
    pub right: Subset,
}

impl VertexCover {
    pub fn size(&self) -> usize {
        self.left.cardinality() + self.right.cardinality()
    }
}

/// König's construction: with `Z` the vertices reachable by alternating
/// paths from free left vertices, `(L − Z) ∪ (R ∩ Z)` is a minimum cover.
pub fn minimum_vertex_cover(adjacency: &[Subset], right: usize) -> (Matching, VertexCover) {
    let m = maximum_matching(adjacency, right);
    let left = adjacency.len();
    let mut z_left = Subset::empty(left);
    let mut z_right = Subset::empty(right);
    let mut queue: VecDeque<usize> = VecDeque::new();
    for u in 0..left {
        if m.left_to_right[u].is_none() {
            z_left.insert(u);
            queue.push_back(u);
        }
    }
    while let Some(u) = queue.pop_front() {
        let fresh = adjacency[u].difference(&z_right);
        for v in &fresh {
            z_right.insert(v);
            if let Some(w) = m.right_to_left[v] {
                if !z_left.contains(w) {
                    z_left.insert(w);
                    queue.push_back(w);
                }
            }
        }
    }
    let cover = VertexCover { left: z_left.complement(), right: z_right };
    debug_assert_eq!(cover.size(), m.size());
    (m, cover)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn graph(right: usize, rows: &[&[usize]]) -> Vec<Subset> {
        rows.iter().map(|r| Subset::from_elements(right, r.iter().copied()).unwrap()).collect()
    }

    // exponential reference: best matching size by trying every assignment
    fn brute_max_matching(adj: &[Subset], u: usize, used: &mut Vec<bool>) -> usize {
        if u == adj.len() {
            return 0;
        }
        let mut best = brute_max_matching(adj, u + 1, used);
        for v in &adj[u] {
            if !used[v] {
                used[v] = true;
                best = best.max(1 + brute_max_matching(adj, u + 1, used));
                used[v] = false;
            }
        }
        best
    }

    fn check_matching(adj: &[Subset], m: &Matching) {
        for (u, v) in m.left_to_right.iter().enumerate() {
            if let Some(v) = *v {
                assert!(adj[u].contains(v));
                assert_eq!(m.right_to_left[v], Some(u));
            }
        }
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let left = rng.gen_range(0..8);
            let right = rng.gen_range(0..8);
            let p: f64 = rng.gen();
            let adj: Vec<Subset> = (0..left)
                .map(|_| {
                    Subset::from_elements(right, (0..right).filter(|_| rng.gen::<f64>() < p)).unwrap()
                })
                .collect();
            let m = maximum_matching(&adj, right);
            check_matching(&adj, &m);
            let best = brute_max_matching(&adj, 0, &mut vec![false; right]);
            assert_eq!(m.size(), best);
            let (_, cover) = minimum_vertex_cover(&adj, right);
            assert_eq!(cover.size(), best);
            for u in 0..left {
                for v in &adj[u] {
                    assert!(cover.left.contains(u) || cover.right.contains(v));
                }
            }
        }
    }

    #[test]
    fn hall_violator_from_free_vertex() {
        // left 0 and 1 both only see right 0
        let adj = graph(3, &[&[0], &[0], &[0, 1, 2]]);
        let m = maximum_matching(&adj, 3);
        assert_eq!(m.size(), 2);
        let free = m.left_to_right.iter().position(Option::is_none).unwrap();
        let (l, r) = alternating_reach(&adj, &m, free);
        assert_eq!(l.to_vec(), vec![0, 1]);
        assert_eq!(r.to_vec(), vec![0]);
        assert_eq!(neighborhood(&adj, 3, &l), r);
    }

    #[test]
    fn wide_graph_uses_many_words() {
        // a long path forces long augmenting paths
        let n = 300;
        let adj: Vec<Subset> = (0..n)
            .map(|u| Subset::from_elements(n, [u, (u + 1) % n]).unwrap())
            .collect();
        let m = maximum_matching(&adj, n);
        assert!(m.is_left_perfect());
        check_matching(&adj, &m);
    }
}
