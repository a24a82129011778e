//! Recursive explicit packing.
//!
//! With `k = 1/alpha`, the ground set is cut into `2k` equal parts and each
//! part carries a packing for `alpha/2` built the same way. Sub-blocks are
//! indexed `0..q` for a prime `q > 2k`, and block `(l, m)` takes sub-block
//! `l` from part 0, `m` from part 1 and `l + j·m (mod q)` from part `j >= 2`.
//! Two distinct index pairs agree in at most one coordinate, so two blocks
//! share at most one whole sub-block and meet in fewer than
//! `s + (2k − 1)·(alpha/2)·s = 2s = alpha·(block size)` elements, where `s`
//! is the sub-block size. Recursion stops at singletons once
//! `n·alpha/4 <= 1`.
//!
//! Families square in size per level, so they are described by a
//! [`PackingPlan`] that generates blocks on demand and only materialized
//! when small enough.

use std::collections::HashSet;

use num_rational::Rational64;

use super::{below_threshold, check_alpha, PackError, PackingFamily};
use crate::setcore::Subset;

pub const DEFAULT_MATERIALIZE_LIMIT: u128 = 200_000;

/// Largest prime `<= x`, if any.
pub fn largest_prime_at_most(x: u64) -> Option<u64> {
    (2..=x).rev().find(|&p| is_prime(p))
}

// deterministic Miller–Rabin for 64-bit inputs
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        r
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    /// The `n` singletons.
    Singletons,
    /// `parts` copies of `sub` side by side, combined by the index design.
    Product { parts: usize, q: u64, sub: Box<PackingPlan> },
}

/// Lazy description of a recursively constructed packing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingPlan {
    n: usize,
    alpha: Rational64,
    depth: usize,
    node: Node,
    /// Set when a product level had to stop early for lack of a prime.
    fallback: bool,
    /// Size of the sub-family before prime rounding (product levels only).
    sub_family_size: u128,
}

/// Summary of one level of the recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelInfo {
    pub depth: usize,
    pub n: usize,
    pub alpha: Rational64,
    /// `2k` for product levels, `0` at the singleton base.
    pub parts: usize,
    /// Sub-family size before prime rounding.
    pub sub_family_size: u128,
    /// Prime modulus used (product levels).
    pub modulus: Option<u64>,
    pub family_size: u128,
    pub block_size: usize,
    pub achieved_c: Rational64,
    /// Proven upper bound on pairwise intersections of distinct blocks.
    pub max_intersection_bound: usize,
    /// True when this level wanted to recurse but no prime `q > 2k` fit.
    pub fallback: bool,
}

impl PackingPlan {
    pub fn build(n: usize, alpha: Rational64) -> Result<Self, PackError> {
        check_alpha(alpha)?;
        if *alpha.numer() != 1 {
            return Err(PackError::NonIntegralInverse(alpha));
        }
        Self::build_level(n, alpha, 0)
    }

    fn build_level(n: usize, alpha: Rational64, depth: usize) -> Result<Self, PackError> {
        let k = *alpha.denom() as usize;
        let base = PackingPlan { n, alpha, depth, node: Node::Singletons, fallback: false, sub_family_size: 0 };
        // n * alpha / 4 <= 1  <=>  n <= 4k
        if n <= 4 * k {
            return Ok(base);
        }
        let parts = 2 * k;
        let sub = Self::build_level(n / parts, alpha / 2, depth + 1)?;
        let q0 = sub.family_size();
        let q0_u64 = u64::try_from(q0).map_err(|_| PackError::IndexOverflow(q0))?;
        match largest_prime_at_most(q0_u64) {
            Some(q) if q > parts as u64 => Ok(PackingPlan {
                n: parts * sub.n,
                alpha,
                depth,
                node: Node::Product { parts, q, sub: Box::new(sub) },
                fallback: false,
                sub_family_size: q0,
            }),
            _ => Ok(PackingPlan { fallback: true, sub_family_size: q0, ..base }),
        }
    }

    /// Ground set size actually used (at most the requested size).
    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> Rational64 {
        self.alpha
    }

    pub fn family_size(&self) -> u128 {
        match &self.node {
            Node::Singletons => self.n as u128,
            Node::Product { q, .. } => (*q as u128) * (*q as u128),
        }
    }

    pub fn block_size(&self) -> usize {
        match &self.node {
            Node::Singletons => 1,
            Node::Product { parts, sub, .. } => parts * sub.block_size(),
        }
    }

    pub fn max_intersection_bound(&self) -> usize {
        match &self.node {
            Node::Singletons => 0,
            Node::Product { parts, sub, .. } => sub.block_size() + (parts - 1) * sub.max_intersection_bound(),
        }
    }

    pub fn achieved_c(&self) -> Rational64 {
        Rational64::new(self.block_size() as i64, self.n as i64)
    }

    /// Index coordinates of block `index` in each part (product levels).
    pub fn coordinates(&self, index: u128) -> Option<Vec<u64>> {
        match &self.node {
            Node::Singletons => None,
            Node::Product { parts, q, .. } => Some(design_row(*q, *parts, index)),
        }
    }

    /// Elements of block `index`, ascending.
    pub fn block(&self, index: u128) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.block_size());
        self.push_block(index, 0, &mut out);
        out
    }

    fn push_block(&self, index: u128, offset: usize, out: &mut Vec<usize>) {
        match &self.node {
            Node::Singletons => out.push(offset + index as usize),
            Node::Product { parts, q, sub } => {
                for (j, coord) in design_row(*q, *parts, index).into_iter().enumerate() {
                    sub.push_block(coord as u128, offset + j * sub.n, out);
                }
            }
        }
    }

    /// Top level first, singleton base last.
    pub fn levels(&self) -> Vec<LevelInfo> {
        let mut out = Vec::new();
        let mut cur = Some(self);
        while let Some(p) = cur {
            let (parts, modulus, next) = match &p.node {
                Node::Singletons => (0, None, None),
                Node::Product { parts, q, sub } => (*parts, Some(*q), Some(sub.as_ref())),
            };
            out.push(LevelInfo {
                depth: p.depth,
                n: p.n,
                alpha: p.alpha,
                parts,
                sub_family_size: p.sub_family_size,
                modulus,
                family_size: p.family_size(),
                block_size: p.block_size(),
                achieved_c: p.achieved_c(),
                max_intersection_bound: p.max_intersection_bound(),
                fallback: p.fallback,
            });
            cur = next;
        }
        out
    }

    /// The plan's own sub-plan, if it is a product level.
    pub fn sub_plan(&self) -> Option<&PackingPlan> {
        match &self.node {
            Node::Singletons => None,
            Node::Product { sub, .. } => Some(sub),
        }
    }

    /// `(parts, part size)` for product levels.
    pub fn partition(&self) -> Option<(usize, usize)> {
        match &self.node {
            Node::Singletons => None,
            Node::Product { parts, sub, .. } => Some((*parts, sub.n)),
        }
    }

    /// Checks every product level's index design exhaustively and that each
    /// level's intersection bound stays below `alpha * block size`.
    pub fn check_structure(&self) -> Result<(), String> {
        self.check_structure_with(&mut HashSet::new())
    }

    /// [`check_structure`](Self::check_structure), skipping index designs
    /// already in `proven` and adding the ones it proves.
    pub fn check_structure_with(&self, proven: &mut HashSet<(u64, usize)>) -> Result<(), String> {
        let mut cur = Some(self);
        while let Some(p) = cur {
            if p.family_size() > 1 && !below_threshold(p.max_intersection_bound(), p.alpha, p.block_size()) {
                return Err(format!(
                    "depth {}: bound {} not below alpha*size = {}*{}",
                    p.depth,
                    p.max_intersection_bound(),
                    p.alpha,
                    p.block_size()
                ));
            }
            if let Node::Product { parts, q, sub } = &p.node {
                if !proven.contains(&(*q, *parts)) {
                    if let Some((a, b)) = check_index_design(*q, *parts) {
                        return Err(format!("depth {}: index pairs {a} and {b} share two coordinates", p.depth));
                    }
                    proven.insert((*q, *parts));
                }
                cur = Some(sub.as_ref());
            } else {
                cur = None;
            }
        }
        Ok(())
    }

    pub fn materialize(&self, limit: u128) -> Result<PackingFamily, PackError> {
        let size = self.family_size();
        if size > limit {
            return Err(PackError::TooLarge { blocks: size, limit });
        }
        let blocks = (0..size)
            .map(|i| Subset::from_elements(self.n, self.block(i)))
            .collect::<Result<Vec<_>, _>>()?;
        PackingFamily::new(self.n, blocks, self.alpha)
    }
}

fn design_row(q: u64, parts: usize, index: u128) -> Vec<u64> {
    let q128 = q as u128;
    let l = (index / q128) as u64;
    let m = (index % q128) as u64;
    (0..parts)
        .map(|j| match j {
            0 => l,
            1 => m,
            _ => ((l as u128 + j as u128 * m as u128) % q128) as u64,
        })
        .collect()
}

/// Largest modulus [`check_index_design`] enumerates row by row.
pub const EXHAUSTIVE_DESIGN_LIMIT: u64 = 1024;

/// Checks that no two distinct index pairs `(l, m)` agree in two
/// coordinates of the design with modulus `q` and `parts` coordinates.
/// Agreement in coordinates `j, j'` means the map `(l, m) -> (c_j, c_j')`
/// collides. Up to [`EXHAUSTIVE_DESIGN_LIMIT`] each coordinate pair is tested
/// for injectivity over all `q²` rows; above it the map's determinant is
/// tested for being a unit mod `q`. Returns a colliding pair of row indices,
/// if any.
pub fn check_index_design(q: u64, parts: usize) -> Option<(u128, u128)> {
    if q > EXHAUSTIVE_DESIGN_LIMIT {
        return check_index_design_algebraic(q, parts);
    }
    check_index_design_exhaustive(q, parts)
}

/// Coordinate `t` is the linear form `(1, t)` for `t >= 2`, `(1, 0)` for
/// `t = 0` and `(0, 1)` for `t = 1`. Two coordinates collide exactly when
/// their 2×2 determinant shares a factor `d` with `q`; then rows `0` and
/// the kernel vector `(l, q/d)` agree on both. Only `(0, 1)` has a zero
/// first entry and it pairs with a unit determinant, so `l = -t·q/d`.
pub fn check_index_design_algebraic(q: u64, parts: usize) -> Option<(u128, u128)> {
    let q128 = q as u128;
    let form = |t: usize| -> (u128, u128) {
        match t {
            0 => (1, 0),
            1 => (0, 1),
            _ => (1, t as u128 % q128),
        }
    };
    for j in 0..parts {
        for jj in j + 1..parts {
            let ((a, b), (c, d)) = (form(j), form(jj));
            let det = (a * d + q128 * q128 - b * c % q128) % q128;
            let g = num_integer::gcd(det, q128);
            if g != 1 {
                // m = q/g kills the determinant; pick l so the first form vanishes
                let m = q128 / g;
                let l = (q128 - b * m % q128) % q128;
                return Some((0, l * q128 + m));
            }
        }
    }
    None
}

pub fn check_index_design_exhaustive(q: u64, parts: usize) -> Option<(u128, u128)> {
    let q128 = q as u128;
    let rows = q128 * q128;
    let mut seen: Vec<u64> = vec![0; (rows as usize).div_ceil(64)];
    let mut owner: Vec<u32> = Vec::new();
    for j in 0..parts {
        for jj in j + 1..parts {
            seen.iter_mut().for_each(|w| *w = 0);
            for idx in 0..rows {
                let l = idx / q128;
                let m = idx % q128;
                let coord = |t: usize| -> u128 {
                    match t {
                        0 => l,
                        1 => m,
                        _ => (l + t as u128 * m) % q128,
                    }
                };
                let key = (coord(j) * q128 + coord(jj)) as usize;
                if seen[key / 64] >> (key % 64) & 1 == 1 {
                    // locate the earlier row for the report
                    if owner.is_empty() {
                        owner = vec![u32::MAX; rows as usize];
                        for prev in 0..idx {
                            let (pl, pm) = (prev / q128, prev % q128);
                            let pc = |t: usize| -> u128 {
                                match t {
                                    0 => pl,
                                    1 => pm,
                                    _ => (pl + t as u128 * pm) % q128,
                                }
                            };
                            owner[(pc(j) * q128 + pc(jj)) as usize] = prev as u32;
                        }
                    }
                    return Some((owner[key] as u128, idx));
                }
                seen[key / 64] |= 1 << (key % 64);
            }
        }
    }
    None
}

/// Largest number of parts on which two blocks of a materialized product
/// level coincide exactly, over all pairs of distinct blocks.
pub fn max_shared_constituents(family: &PackingFamily, parts: usize, part_size: usize) -> usize {
    let n = family.ground_size();
    let restrictions: Vec<Vec<Vec<usize>>> = family
        .blocks()
        .iter()
        .map(|b| {
            let mut per_part = vec![Vec::new(); parts];
            for x in b {
                if x / part_size < parts {
                    per_part[x / part_size].push(x);
                }
            }
            per_part
        })
        .collect();
    debug_assert!(parts * part_size <= n);
    let mut worst = 0;
    for i in 0..restrictions.len() {
        for j in i + 1..restrictions.len() {
            let shared = (0..parts).filter(|&t| restrictions[i][t] == restrictions[j][t]).count();
            worst = worst.max(shared);
        }
    }
    worst
}

/// A materialized construction together with its plan.
#[derive(Clone, Debug)]
pub struct Construction {
    pub requested_n: usize,
    pub plan: PackingPlan,
    pub family: PackingFamily,
}

/// Builds and materializes the recursive packing on (at most) `n` elements.
pub fn construct_packing(n: usize, alpha: Rational64) -> Result<Construction, PackError> {
    construct_packing_with_limit(n, alpha, DEFAULT_MATERIALIZE_LIMIT)
}

pub fn construct_packing_with_limit(n: usize, alpha: Rational64, limit: u128) -> Result<Construction, PackError> {
    let plan = PackingPlan::build(n, alpha)?;
    let family = plan.materialize(limit)?;
    Ok(Construction { requested_n: n, plan, family })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pack::verify_packing;

    fn half() -> Rational64 {
        Rational64::new(1, 2)
    }

    #[test]
    fn primes() {
        assert_eq!(largest_prime_at_most(1), None);
        assert_eq!(largest_prime_at_most(2), Some(2));
        assert_eq!(largest_prime_at_most(7), Some(7));
        assert_eq!(largest_prime_at_most(3721), Some(3719));
        let sieve: Vec<u64> = (0..2000).filter(|&x| (2..x).all(|d| x % d != 0) && x >= 2).collect();
        let mr: Vec<u64> = (0..2000).filter(|&x| is_prime(x)).collect();
        assert_eq!(sieve, mr);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn n28_half() {
        let c = construct_packing(28, half()).unwrap();
        let f = &c.family;
        assert_eq!(f.len(), 49);
        assert_eq!(f.block_size(), 4);
        assert_eq!(f.achieved_c(), Rational64::new(1, 7));
        let r = verify_packing(f);
        assert!(r.passed);
        assert_eq!(r.max_intersection, 1);
        assert_eq!(max_shared_constituents(f, 4, 7), 1);
        let levels = c.plan.levels();
        assert_eq!(levels[0].modulus, Some(7));
        assert_eq!(levels[1].n, 7);
    }

    #[test]
    fn base_case() {
        let c = construct_packing(4, Rational64::new(1, 1)).unwrap();
        assert_eq!(c.family.len(), 4);
        assert!(c.family.blocks().iter().all(|b| b.cardinality() == 1));
    }

    #[test]
    fn rejects_non_unit_alpha() {
        assert_eq!(
            PackingPlan::build(28, Rational64::new(2, 3)),
            Err(PackError::NonIntegralInverse(Rational64::new(2, 3)))
        );
    }

    #[test]
    fn falls_back_without_a_prime() {
        // parts of 3 give only 3 sub-blocks, and no prime lies in (4, 3]
        let p = PackingPlan::build(12, half()).unwrap();
        assert_eq!(p.family_size(), 12);
        assert!(p.levels()[0].fallback);
    }

    #[test]
    fn blocks_come_out_sorted() {
        for n in [20, 28, 40, 67, 100] {
            let c = construct_packing(n, half()).unwrap();
            let blocks = c.family.blocks();
            assert!(blocks.windows(2).all(|w| w[0] < w[1]), "n = {n}");
        }
    }

    #[test]
    fn every_small_construction_verifies() {
        for (n, a) in (1..=400).flat_map(|n| [(n, half()), (n, Rational64::new(1, 3)), (n, Rational64::new(1, 1))]) {
            let plan = PackingPlan::build(n, a).unwrap();
            assert!(plan.ground_size() <= n);
            plan.check_structure().unwrap();
            if plan.family_size() <= 3000 {
                let f = plan.materialize(3000).unwrap();
                let r = verify_packing(&f);
                assert!(r.passed, "n={n} alpha={a}: {r:?}");
                assert!(r.max_intersection <= plan.max_intersection_bound());
            }
        }
    }

    #[test]
    fn size_squares_per_level() {
        for n in [28, 100, 500, 2000] {
            let plan = PackingPlan::build(n, half()).unwrap();
            let levels = plan.levels();
            for w in levels.windows(2) {
                let (top, sub) = (&w[0], &w[1]);
                if top.modulus.is_some() {
                    assert_eq!(top.sub_family_size, sub.family_size);
                    assert!(top.family_size <= sub.family_size * sub.family_size);
                    if top.modulus == Some(sub.family_size as u64) {
                        assert_eq!(top.family_size, sub.family_size * sub.family_size);
                    }
                }
            }
        }
    }

    #[test]
    fn index_design_detects_collisions() {
        assert_eq!(check_index_design(7, 4), None);
        assert_eq!(check_index_design(5, 4), None);
        // with q = 4 the coefficients 2 and 3 are not all invertible
        assert!(check_index_design(4, 4).is_some());
        for q in [2u64, 3, 4, 5, 6, 7, 9, 11, 12, 15, 49] {
            for parts in 2..=8 {
                let fast = check_index_design_algebraic(q, parts);
                let slow = check_index_design_exhaustive(q, parts);
                assert_eq!(fast.is_some(), slow.is_some(), "q={q} parts={parts}");
                if let Some((a, b)) = fast {
                    let (ra, rb) = (design_row(q, parts, a), design_row(q, parts, b));
                    let agree = ra.iter().zip(&rb).filter(|(x, y)| x == y).count();
                    assert!(a != b && agree >= 2, "q={q} parts={parts}");
                }
            }
        }
        assert_eq!(check_index_design(3469, 8), None);
    }
}
