//! Set packings: families of equal-size blocks whose pairwise intersections
//! stay below a fraction `alpha` of the block size.

mod construct;
mod graph;
mod no_three;

pub use construct::{
    check_index_design, construct_packing, construct_packing_with_limit, largest_prime_at_most, max_shared_constituents,
    Construction, LevelInfo, PackingPlan, DEFAULT_MATERIALIZE_LIMIT,
};
pub use graph::{degree_term, greedy_independent_set, packing_graph_stats, GraphStats};
pub use no_three::{default_rs_family, no_three_invertible_family, verify_no_three, NoThreeReport};

use num_rational::Rational64;
use rayon::prelude::*;
use thiserror::Error;

use crate::setcore::{Collection, SetError, Subset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PackError {
    #[error("alpha = {0} must be positive")]
    NonPositiveAlpha(Rational64),
    #[error("alpha = {0} must be at most 1")]
    AlphaAboveOne(Rational64),
    #[error("1/alpha must be an integer, alpha = {0}")]
    NonIntegralInverse(Rational64),
    #[error("block size {block_size} must lie in (0, {n}]")]
    BlockSize { block_size: usize, n: usize },
    #[error("{count} candidate blocks exceed the enumeration budget {budget}")]
    BudgetExceeded { count: String, budget: u64 },
    #[error("family of {blocks} blocks exceeds the materialization limit {limit}")]
    TooLarge { blocks: u128, limit: u128 },
    #[error("sub-family of size {0} is too large to index")]
    IndexOverflow(u128),
    #[error("ground set size {0} must be even")]
    OddGroundSet(usize),
    #[error("need 0 < k < n/2, got n = {n}, k = {k}")]
    BadK { n: usize, k: usize },
    #[error("reference family lives on {found} elements, expected n/2 + k = {expected}")]
    RsGround { expected: usize, found: usize },
    #[error("reference block #{index} has size {found}, expected {expected}")]
    RsBlockSize { index: usize, expected: usize, found: usize },
    #[error("reference blocks #{0} and #{1} share {2} elements, need fewer than k/3")]
    RsIntersection(usize, usize, usize),
    #[error(transparent)]
    Set(#[from] SetError),
}

pub(crate) fn check_alpha(alpha: Rational64) -> Result<(), PackError> {
    if *alpha.numer() <= 0 {
        return Err(PackError::NonPositiveAlpha(alpha));
    }
    Ok(())
}

/// `x < alpha * size`, exactly.
#[inline]
pub(crate) fn below_threshold(x: usize, alpha: Rational64, size: usize) -> bool {
    (x as i128) * (*alpha.denom() as i128) < (*alpha.numer() as i128) * (size as i128)
}

/// A family of blocks over `[0, n)` together with the intersection fraction
/// it claims to respect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingFamily {
    n: usize,
    blocks: Vec<Subset>,
    alpha: Rational64,
}

impl PackingFamily {
    pub fn new(n: usize, blocks: Vec<Subset>, alpha: Rational64) -> Result<Self, PackError> {
        check_alpha(alpha)?;
        if let Some(b) = blocks.iter().find(|b| b.ground_size() != n) {
            return Err(SetError::SizeMismatch { expected: n, found: b.ground_size() }.into());
        }
        Ok(PackingFamily { n, blocks, alpha })
    }

    pub fn from_collection(c: Collection, alpha: Rational64) -> Result<Self, PackError> {
        let n = c.ground_size();
        PackingFamily::new(n, c.sets().to_vec(), alpha)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn declared_alpha(&self) -> Rational64 {
        self.alpha
    }

    /// Size of the first block (all blocks share it in a valid family).
    pub fn block_size(&self) -> usize {
        self.blocks.first().map_or(0, Subset::cardinality)
    }

    /// Block size over ground size, measured rather than targeted.
    pub fn achieved_c(&self) -> Rational64 {
        if self.n == 0 {
            return Rational64::from_integer(0);
        }
        Rational64::new(self.block_size() as i64, self.n as i64)
    }

    pub fn to_collection(&self) -> Collection {
        Collection::new(self.n, self.blocks.clone()).expect("blocks share the ground set")
    }

    /// Collection text form with a `# packing n=.. alpha=p/q c=p/q` header.
    pub fn to_text(&self) -> Result<String, PackError> {
        let a = self.alpha;
        let c = self.achieved_c();
        let header = format!(
            "packing n={} alpha={}/{} c={}/{}",
            self.n,
            a.numer(),
            a.denom(),
            c.numer(),
            c.denom()
        );
        Ok(self.to_collection().to_text_with_comments(&[header])?)
    }
}

/// Outcome of a pairwise check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingReport {
    pub blocks: usize,
    pub pairs_checked: u64,
    pub block_size: usize,
    pub equal_sized: bool,
    pub distinct: bool,
    pub max_intersection: usize,
    /// A pair attaining `max_intersection` (first in index order).
    pub worst_pair: Option<(usize, usize)>,
    /// `alpha * block_size`; intersections must stay strictly below it.
    pub threshold: Rational64,
    pub passed: bool,
}

/// Checks every pair of blocks. Passes iff blocks are equal-sized and
/// distinct and every pairwise intersection is `< alpha * block_size`.
pub fn verify_packing(f: &PackingFamily) -> PackingReport {
    let blocks = f.blocks();
    let m = blocks.len();
    let block_size = f.block_size();
    let equal_sized = blocks.iter().all(|b| b.cardinality() == block_size);

    // (max intersection, first pair attaining it, any duplicate)
    let (max_intersection, worst_pair, duplicate) = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut best = (0usize, None::<(usize, usize)>, false);
            for j in i + 1..m {
                let x = blocks[i].intersection_len(&blocks[j]);
                if best.1.is_none() || x > best.0 {
                    best.0 = x;
                    best.1 = Some((i, j));
                }
                if !best.2 && blocks[i] == blocks[j] {
                    best.2 = true;
                }
            }
            best
        })
        .reduce(
            || (0, None, false),
            |a, b| {
                let dup = a.2 || b.2;
                let pick_b = match (a.1, b.1) {
                    (None, _) => true,
                    (_, None) => false,
                    (Some(pa), Some(pb)) => b.0 > a.0 || (b.0 == a.0 && pb < pa),
                };
                if pick_b {
                    (b.0, b.1, dup)
                } else {
                    (a.0, a.1, dup)
                }
            },
        );
    let threshold = f.alpha * Rational64::from_integer(block_size as i64);
    let intersections_ok = worst_pair.is_none() || below_threshold(max_intersection, f.alpha, block_size);
    PackingReport {
        blocks: m,
        pairs_checked: (m as u64) * (m.saturating_sub(1) as u64) / 2,
        block_size,
        equal_sized,
        distinct: !duplicate,
        max_intersection,
        worst_pair,
        threshold,
        passed: equal_sized && !duplicate && intersections_ok,
    }
}
