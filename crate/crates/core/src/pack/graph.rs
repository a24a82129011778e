//! The packing graph: vertices are the `cn`-subsets of `[0, n)`, adjacent
//! when they share at least `alpha * cn` elements. Packings are its
//! independent sets.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};

use super::{below_threshold, check_alpha, PackError, PackingFamily};
use crate::exact::binomial;
use crate::setcore::Subset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphStats {
    pub n: usize,
    pub block_size: usize,
    pub alpha: Rational64,
    /// `⌈alpha * block_size⌉`, the smallest intersection that makes an edge.
    pub threshold: usize,
    /// `C(n, block_size)`.
    pub vertices: BigUint,
    /// Common degree, the vertex itself excluded.
    pub degree: BigUint,
}

impl GraphStats {
    /// `⌈N / (D + 1)⌉`, the size every greedy maximal independent set reaches.
    pub fn turan_bound(&self) -> BigUint {
        let d1 = &self.degree + BigUint::one();
        self.vertices.div_ceil(&d1)
    }
}

/// Number of `cn`-subsets meeting a fixed `cn`-subset in exactly `i`
/// elements: `C(cn, i) C(n − cn, cn − i)`.
pub fn degree_term(n: usize, block_size: usize, i: usize) -> BigUint {
    if i > block_size || block_size - i > n - block_size {
        return BigUint::zero();
    }
    binomial(block_size, i) * binomial(n - block_size, block_size - i)
}

fn ceil_mul(alpha: Rational64, size: usize) -> usize {
    let num = *alpha.numer() as i128 * size as i128;
    let den = *alpha.denom() as i128;
    ((num + den - 1) / den).max(0) as usize
}

/// Vertex count and degree of the packing graph, exactly.
pub fn packing_graph_stats(n: usize, block_size: usize, alpha: Rational64) -> Result<GraphStats, PackError> {
    check_alpha(alpha)?;
    if alpha > Rational64::from_integer(1) {
        return Err(PackError::AlphaAboveOne(alpha));
    }
    if block_size == 0 || block_size > n {
        return Err(PackError::BlockSize { block_size, n });
    }
    let threshold = ceil_mul(alpha, block_size);
    let degree = if threshold > block_size {
        BigUint::zero()
    } else {
        let raw: BigUint = (threshold..=block_size).map(|i| degree_term(n, block_size, i)).sum();
        // the i = block_size term is the vertex itself
        raw - BigUint::one()
    };
    Ok(GraphStats { n, block_size, alpha, threshold, vertices: binomial(n, block_size), degree })
}

/// Greedy independent set: scan `block_size`-subsets in lexicographic order
/// and keep each one meeting every kept block in `< alpha * block_size`
/// elements.
pub fn greedy_independent_set(
    n: usize,
    block_size: usize,
    alpha: Rational64,
    budget: u64,
) -> Result<PackingFamily, PackError> {
    check_alpha(alpha)?;
    if block_size == 0 || block_size > n {
        return Err(PackError::BlockSize { block_size, n });
    }
    let count = binomial(n, block_size);
    if count.to_u64().is_none_or(|c| c > budget) {
        return Err(PackError::BudgetExceeded { count: count.to_string(), budget });
    }
    let mut kept: Vec<Subset> = Vec::new();
    let mut comb: Vec<usize> = (0..block_size).collect();
    loop {
        let cand = Subset::from_elements(n, comb.iter().copied())?;
        if kept.iter().all(|b| below_threshold(b.intersection_len(&cand), alpha, block_size)) {
            kept.push(cand);
        }
        // next combination in lexicographic order
        let Some(i) = (0..block_size).rev().find(|&i| comb[i] < n - block_size + i) else {
            break;
        };
        comb[i] += 1;
        for j in i + 1..block_size {
            comb[j] = comb[j - 1] + 1;
        }
    }
    PackingFamily::new(n, kept, alpha)
}
