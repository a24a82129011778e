//! Collections of half-size sets in which no three sets are simultaneously
//! invertible, built from a packing of `k`-sets with pairwise intersections
//! below `k/3`.

use num_rational::Rational64;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{greedy_independent_set, PackError, PackingFamily};
use crate::invert::{check_triple, decide_invertible};
use crate::setcore::{Collection, Subset};

/// `S_i = K ∪ R_i` with `K = [0, n/2 − k)` and `R_i` the reference blocks
/// shifted past `K`.
///
/// `rs` lives on the `n/2 + k` elements after `K` (its element `x` becomes
/// `x + n/2 − k`), holds `k`-sets, and any two of them share fewer than
/// `k/3` elements.
pub fn no_three_invertible_family(n: usize, k: usize, rs: &PackingFamily) -> Result<Collection, PackError> {
    if n % 2 != 0 {
        return Err(PackError::OddGroundSet(n));
    }
    if k == 0 || 2 * k >= n {
        return Err(PackError::BadK { n, k });
    }
    let core = n / 2 - k;
    let rest = n - core;
    if rs.ground_size() != rest {
        return Err(PackError::RsGround { expected: rest, found: rs.ground_size() });
    }
    let blocks = rs.blocks();
    for (index, b) in blocks.iter().enumerate() {
        if b.cardinality() != k {
            return Err(PackError::RsBlockSize { index, expected: k, found: b.cardinality() });
        }
    }
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let x = blocks[i].intersection_len(&blocks[j]);
            if 3 * x >= k {
                return Err(PackError::RsIntersection(i, j, x));
            }
        }
    }
    let base = Subset::from_elements(n, 0..core)?;
    let sets = blocks
        .iter()
        .map(|r| Ok(base.union(&r.shifted(n, core)?)))
        .collect::<Result<Vec<_>, PackError>>()?;
    Ok(Collection::new(n, sets)?)
}

/// A reference family for [`no_three_invertible_family`]: the greedy
/// packing of `k`-subsets of `n/2 + k` elements with intersections `< k/3`.
pub fn default_rs_family(n: usize, k: usize, budget: u64) -> Result<PackingFamily, PackError> {
    if n % 2 != 0 {
        return Err(PackError::OddGroundSet(n));
    }
    if k == 0 || 2 * k >= n {
        return Err(PackError::BadK { n, k });
    }
    greedy_independent_set(n / 2 + k, k, Rational64::new(1, 3), budget)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoThreeReport {
    pub sets: usize,
    pub triples_checked: u64,
    /// All triples were examined, rather than a seeded sample.
    pub exhaustive_triples: bool,
    /// Triples the matching decided were invertible (must be zero).
    pub invertible_triples: u64,
    /// Triples where the closed-form three-set test disagreed with matching.
    pub triple_test_disagreements: u64,
    pub pairs_checked: u64,
    /// Pairs the matching decided were not invertible (must be zero).
    pub non_invertible_pairs: u64,
}

impl NoThreeReport {
    pub fn passed(&self) -> bool {
        self.invertible_triples == 0 && self.triple_test_disagreements == 0 && self.non_invertible_pairs == 0
    }
}

/// Runs the matching decision on triples and pairs of `c`. When there are
/// more than `max_triples` triples, that many are drawn with a seeded RNG.
pub fn verify_no_three(c: &Collection, max_triples: u64, seed: u64) -> NoThreeReport {
    let m = c.len();
    let mut report = NoThreeReport {
        sets: m,
        triples_checked: 0,
        exhaustive_triples: true,
        invertible_triples: 0,
        triple_test_disagreements: 0,
        pairs_checked: 0,
        non_invertible_pairs: 0,
    };
    let check = |idx: [usize; 3], report: &mut NoThreeReport| {
        let sub = c.select(&idx);
        let by_matching = decide_invertible(&sub).is_perfect();
        report.triples_checked += 1;
        if by_matching {
            report.invertible_triples += 1;
        }
        if check_triple(&sub).ok() != Some(by_matching) {
            report.triple_test_disagreements += 1;
        }
    };
    let total = (m as u128) * (m.saturating_sub(1) as u128) * (m.saturating_sub(2) as u128) / 6;
    if total <= max_triples as u128 {
        for a in 0..m {
            for b in a + 1..m {
                for d in b + 1..m {
                    check([a, b, d], &mut report);
                }
            }
        }
    } else {
        report.exhaustive_triples = false;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..max_triples {
            let mut idx: Vec<usize> = sample(&mut rng, m, 3).into_vec();
            idx.sort_unstable();
            check([idx[0], idx[1], idx[2]], &mut report);
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            report.pairs_checked += 1;
            if !decide_invertible(&c.select(&[a, b])).is_perfect() {
                report.non_invertible_pairs += 1;
            }
        }
    }
    report
}
