//! How many sets of a collection one permutation can invert.
//!
//! Counting is restricted to simple permutations: `⌊n/2⌋` disjoint
//! transpositions, with one fixed point when `n` is odd. Averaging the
//! number of inverted sets over all of them gives a lower bound on the best
//! permutation, and [`find_simple_permutation`] turns that average into an
//! explicit permutation by fixing one transposition at a time while never
//! letting the conditional expectation drop.
//!
//! Everything here is exact: big integers and big rationals only.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exact::{binomial, factorial, pow2};
use crate::setcore::{for_each_permutation, Collection, Permutation, Subset};

pub type ExactRational = BigRational;

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KappaError {
    #[error("ground set size {n} exceeds the enumeration limit {limit}")]
    LimitExceeded { n: usize, limit: usize },
    #[error("size class {size} exceeds ⌊n/2⌋ = {half}; such sets are never inverted")]
    OversizedClass { size: usize, half: usize },
}

/// Number of simple permutations of an `n`-set: `n! / (2^⌊n/2⌋ ⌊n/2⌋!)`.
pub fn sigma(n: usize) -> BigUint {
    let h = n / 2;
    factorial(n) / (pow2(h) * factorial(h))
}

/// Number of simple permutations of an `n`-set inverting a fixed `i`-subset:
/// `(n−i)! / (2^(⌊n/2⌋−i) (⌊n/2⌋−i)!)`, and zero once `i > ⌊n/2⌋`.
pub fn lambda_simple(n: usize, i: usize) -> BigUint {
    let h = n / 2;
    if i > h {
        return BigUint::zero();
    }
    factorial(n - i) / (pow2(h - i) * factorial(h - i))
}

/// Counts of sets by cardinality. `counts[i]` is the number of sets of size
/// `i` for `0 <= i <= ⌊n/2⌋` (index 0 counts empty sets, which every
/// permutation inverts). Larger sets are tallied in `oversized`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeProfile {
    n: usize,
    counts: Vec<BigUint>,
    oversized: usize,
}

impl SizeProfile {
    pub fn new(n: usize, counts: Vec<BigUint>) -> Result<Self, KappaError> {
        let h = n / 2;
        if counts.len() > h + 1 {
            let size = counts.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
            if size > h {
                return Err(KappaError::OversizedClass { size, half: h });
            }
        }
        let mut counts = counts;
        counts.resize(h + 1, BigUint::zero());
        Ok(SizeProfile { n, counts, oversized: 0 })
    }

    /// `m_i = C(n, i)` for `1 <= i <= ⌊n/2⌋`: every non-empty set small
    /// enough to be invertible.
    pub fn full(n: usize) -> Self {
        let h = n / 2;
        let mut counts: Vec<BigUint> = (0..=h).map(|i| binomial(n, i)).collect();
        counts[0] = BigUint::zero();
        SizeProfile { n, counts, oversized: 0 }
    }

    pub fn from_collection(c: &Collection) -> Self {
        let n = c.ground_size();
        let h = n / 2;
        let mut counts = vec![BigUint::zero(); h + 1];
        let mut oversized = 0;
        for s in c.sets() {
            let k = s.cardinality();
            if k <= h {
                counts[k] += 1u32;
            } else {
                oversized += 1;
            }
        }
        SizeProfile { n, counts, oversized }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn count(&self, size: usize) -> BigUint {
        self.counts.get(size).cloned().unwrap_or_default()
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn oversized(&self) -> usize {
        self.oversized
    }
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Average number of sets inverted by a uniformly random simple
/// permutation: `Σ_i m_i λ(n, i) / σ(n)`. Some simple permutation inverts at
/// least this many.
pub fn kappa_lower_bound(p: &SizeProfile) -> ExactRational {
    let total: BigUint = p
        .counts
        .iter()
        .enumerate()
        .map(|(i, m)| m * lambda_simple(p.n, i))
        .sum();
    ratio(total, sigma(p.n))
}

/// Same bound written as `(⌊n/2⌋!/n!) Σ_i m_i 2^i (n−i)! / (⌊n/2⌋−i)!`.
pub fn kappa_lower_bound_closed_form(p: &SizeProfile) -> ExactRational {
    let n = p.n;
    let h = n / 2;
    let total: BigUint = p
        .counts
        .iter()
        .enumerate()
        .map(|(i, m)| m * pow2(i) * factorial(n - i) / factorial(h - i))
        .sum();
    ratio(total * factorial(h), factorial(n))
}

/// Smallest integer not below `q` (for non-negative `q`).
pub fn ceil_nonneg(q: &ExactRational) -> BigUint {
    q.ceil().to_integer().to_biguint().expect("non-negative")
}

/// Visits every simple permutation of `[0, n)` as an image array. The
/// visitor returns `false` to stop.
pub fn for_each_simple_permutation<F>(n: usize, mut visit: F)
where
    F: FnMut(&[usize]) -> bool,
{
    fn rec<F: FnMut(&[usize]) -> bool>(image: &mut Vec<usize>, free: &mut Vec<bool>, fixed_left: bool, visit: &mut F) -> bool {
        let Some(a) = free.iter().position(|&f| f) else {
            return visit(image);
        };
        free[a] = false;
        for b in a + 1..image.len() {
            if free[b] {
                free[b] = false;
                image[a] = b;
                image[b] = a;
                let go = rec(image, free, fixed_left, visit);
                free[b] = true;
                if !go {
                    free[a] = true;
                    return false;
                }
            }
        }
        if fixed_left {
            image[a] = a;
            if !rec(image, free, false, visit) {
                free[a] = true;
                return false;
            }
        }
        free[a] = true;
        true
    }
    let mut image: Vec<usize> = (0..n).collect();
    let mut free = vec![true; n];
    rec(&mut image, &mut free, n % 2 == 1, &mut visit);
}

fn count_inverted(c: &Collection, p: &Permutation) -> usize {
    c.sets().iter().filter(|s| p.inverts(s).expect("same ground set")).count()
}

/// Probability that a uniformly random simple permutation of an `f`-set
/// inverts a fixed `r`-subset, memoised.
struct InversionOdds {
    memo: HashMap<(usize, usize), BigRational>,
}

impl InversionOdds {
    fn new() -> Self {
        InversionOdds { memo: HashMap::new() }
    }

    fn get(&mut self, f: usize, r: usize) -> BigRational {
        self.memo
            .entry((f, r))
            .or_insert_with(|| ratio(lambda_simple(f, r), sigma(f)))
            .clone()
    }
}

/// Result of the derandomized search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleSearch {
    pub permutation: Permutation,
    pub inverted: usize,
    /// The averaging bound the count is guaranteed to reach.
    pub bound: ExactRational,
    /// Indices of sets the permutation inverts.
    pub inverted_sets: Vec<usize>,
}

/// A choice for the lowest free element: pair it with `Some(b)`, or leave it
/// as the fixed point (`None`, only when an odd number of elements is free).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    Pair(usize),
    Fix,
}

/// Builds a simple permutation that inverts at least `⌈kappa_lower_bound⌉`
/// sets by the method of conditional expectations.
///
/// At each step the lowest free element `a` is paired with the free `b`
/// whose exact conditional expectation of the inverted count (over uniform
/// completions on the remaining free elements) is largest, ties going to
/// the lowest `b`. With an odd number of free elements, leaving `a` fixed
/// is one more option, ranked after every real partner. A set dies once a
/// chosen pair lies inside it or the fixed point lands in it.
pub fn find_simple_permutation(c: &Collection) -> SimpleSearch {
    let n = c.ground_size();
    let h = n / 2;
    let bound = kappa_lower_bound(&SizeProfile::from_collection(c));

    let mut odds = InversionOdds::new();
    let mut free = Subset::full(n);
    let mut free_count = n;
    // remaining free members of each live set; None once dead
    let mut live: Vec<Option<usize>> = c
        .sets()
        .iter()
        .map(|s| (s.cardinality() <= h).then(|| s.cardinality()))
        .collect();
    let mut image: Vec<usize> = (0..n).collect();

    let expectation = |live: &[Option<usize>], odds: &mut InversionOdds, f: usize| -> BigRational {
        let mut by_size: HashMap<usize, usize> = HashMap::new();
        for r in live.iter().flatten() {
            *by_size.entry(*r).or_insert(0) += 1;
        }
        by_size
            .into_iter()
            .map(|(r, k)| odds.get(f, r) * BigRational::from_integer(BigInt::from(k)))
            .fold(BigRational::zero(), |a, b| a + b)
    };

    let mut current = expectation(&live, &mut odds, free_count);
    assert_eq!(current, bound, "initial expectation differs from the averaging bound");

    while let Some(a) = free.first() {
        let mut moves: Vec<Move> = free.iter().filter(|&b| b != a).map(Move::Pair).collect();
        if free_count % 2 == 1 {
            moves.push(Move::Fix);
        }
        let remaining = match moves[0] {
            Move::Pair(_) => free_count - 2,
            Move::Fix => free_count - 1,
        };
        let fix_remaining = free_count - 1;
        for f in [remaining, fix_remaining] {
            for r in 0..=f {
                odds.get(f, r);
            }
        }
        let odds_ref = &odds;
        let sets = c.sets();
        let scores: Vec<BigRational> = moves
            .par_iter()
            .map(|mv| {
                let mut total = BigRational::zero();
                for (s, r) in sets.iter().zip(&live) {
                    let Some(r) = *r else { continue };
                    let in_a = s.contains(a);
                    let (f, r2) = match *mv {
                        Move::Pair(b) => {
                            let in_b = s.contains(b);
                            if in_a && in_b {
                                continue;
                            }
                            (free_count - 2, r - in_a as usize - in_b as usize)
                        }
                        Move::Fix => {
                            if in_a {
                                continue;
                            }
                            (free_count - 1, r)
                        }
                    };
                    total += &odds_ref.memo[&(f, r2)];
                }
                total
            })
            .collect();

        // deterministic reduction: first maximum in move order
        let mut best = 0;
        for i in 1..scores.len() {
            if scores[i] > scores[best] {
                best = i;
            }
        }
        assert!(
            scores[best] >= current,
            "conditional expectation decreased from {current} to {}",
            scores[best]
        );

        free.remove(a);
        match moves[best] {
            Move::Pair(b) => {
                free.remove(b);
                free_count -= 2;
                image[a] = b;
                image[b] = a;
                for (s, r) in c.sets().iter().zip(live.iter_mut()) {
                    if let Some(k) = *r {
                        let (in_a, in_b) = (s.contains(a), s.contains(b));
                        *r = if in_a && in_b { None } else { Some(k - in_a as usize - in_b as usize) };
                    }
                }
            }
            Move::Fix => {
                free_count -= 1;
                for (s, r) in c.sets().iter().zip(live.iter_mut()) {
                    if r.is_some() && s.contains(a) {
                        *r = None;
                    }
                }
            }
        }
        current = scores[best].clone();
    }

    let permutation = Permutation::from_image(image).expect("pairs form a bijection");
    assert!(permutation.is_simple(), "derandomized permutation is not simple");
    let inverted_sets: Vec<usize> = c
        .sets()
        .iter()
        .enumerate()
        .filter(|(_, s)| permutation.inverts(s).expect("same ground set"))
        .map(|(i, _)| i)
        .collect();
    let inverted = inverted_sets.len();
    assert_eq!(
        current,
        BigRational::from_integer(BigInt::from(inverted)),
        "final expectation disagrees with the verified count"
    );
    assert!(
        BigRational::from_integer(BigInt::from(inverted)) >= bound,
        "count {inverted} below the averaging bound"
    );
    SimpleSearch { permutation, inverted, bound, inverted_sets }
}

/// Best permutation by enumeration, over all permutations or over simple
/// ones only. Returns the first maximizer in enumeration order.
pub fn exhaustive_kappa(c: &Collection, simple_only: bool, limit: usize) -> Result<(Permutation, usize), KappaError> {
    let n = c.ground_size();
    if n > limit {
        return Err(KappaError::LimitExceeded { n, limit });
    }
    let m = c.len();
    let mut best: Option<(Vec<usize>, usize)> = None;
    let mut visit = |img: &[usize]| {
        let p = Permutation::from_image(img.to_vec()).unwrap();
        let k = count_inverted(c, &p);
        if best.as_ref().is_none_or(|(_, b)| k > *b) {
            best = Some((img.to_vec(), k));
        }
        k < m
    };
    if simple_only {
        for_each_simple_permutation(n, &mut visit);
    } else {
        for_each_permutation(n, &mut visit);
    }
    let (img, k) = best.expect("at least one permutation exists");
    Ok((Permutation::from_image(img).unwrap(), k))
}

/// Exact sum over all simple permutations of the number of sets each one
/// inverts. Exponential; a test oracle for the double-counting identity.
pub fn total_inversions_over_simple(c: &Collection) -> BigUint {
    let mut total = BigUint::zero();
    for_each_simple_permutation(c.ground_size(), |img| {
        let p = Permutation::from_image(img.to_vec()).unwrap();
        total += count_inverted(c, &p);
        true
    });
    total
}

/// `Σ_i m_i λ(n, i)`.
pub fn weighted_lambda_sum(p: &SizeProfile) -> BigUint {
    p.counts.iter().enumerate().map(|(i, m)| m * lambda_simple(p.n, i)).sum()
}

/// `3^⌊n/2⌋ − 1`, the bound for the full profile.
pub fn full_profile_bound(n: usize) -> BigUint {
    num_traits::pow(BigUint::from(3u32), n / 2) - BigUint::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coll(n: usize, lists: &[&[usize]]) -> Collection {
        Collection::from_lists(n, lists).unwrap()
    }

    fn all_small_sets(n: usize) -> Collection {
        let mut lists = Vec::new();
        for mask in 1u64..(1 << n) {
            if mask.count_ones() as usize <= n / 2 {
                lists.push((0..n).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            }
        }
        Collection::from_lists(n, &lists).unwrap()
    }

    fn int(k: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(k))
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(0), BigUint::one());
        assert_eq!(sigma(2), BigUint::from(1u32));
        assert_eq!(sigma(4), BigUint::from(3u32));
        assert_eq!(sigma(5), BigUint::from(15u32));
        assert_eq!(sigma(6), BigUint::from(15u32));
    }

    #[test]
    fn lambda_values() {
        assert_eq!(lambda_simple(4, 1), BigUint::from(3u32));
        assert_eq!(lambda_simple(4, 2), BigUint::from(2u32));
        assert_eq!(lambda_simple(6, 3), BigUint::from(6u32));
        assert_eq!(lambda_simple(6, 4), BigUint::zero());
        assert_eq!(lambda_simple(5, 0), sigma(5));
    }

    #[test]
    fn simple_enumeration_counts() {
        for n in 0..=9 {
            let mut count = 0u32;
            for_each_simple_permutation(n, |img| {
                assert!(Permutation::from_image(img.to_vec()).unwrap().is_simple());
                count += 1;
                true
            });
            assert_eq!(BigUint::from(count), sigma(n), "n = {n}");
        }
    }

    #[test]
    fn bound_examples() {
        let c = all_small_sets(4);
        assert_eq!(c.len(), 10);
        let p = SizeProfile::from_collection(&c);
        assert_eq!(kappa_lower_bound(&p), int(8));
        assert_eq!(kappa_lower_bound(&SizeProfile::from_collection(&coll(2, &[&[0]]))), int(1));
        for n in 0..=12 {
            let full = SizeProfile::full(n);
            assert_eq!(kappa_lower_bound(&full), BigRational::from_integer(full_profile_bound(n).into()));
            assert_eq!(kappa_lower_bound_closed_form(&full), kappa_lower_bound(&full));
        }
    }

    #[test]
    fn profile_rejects_oversized_classes() {
        let counts = vec![BigUint::zero(), BigUint::one(), BigUint::zero(), BigUint::one()];
        assert_eq!(SizeProfile::new(4, counts), Err(KappaError::OversizedClass { size: 3, half: 2 }));
        let c = coll(4, &[&[0, 1, 2], &[0]]);
        let p = SizeProfile::from_collection(&c);
        assert_eq!(p.oversized(), 1);
        assert_eq!(p.count(1), BigUint::one());
    }

    #[test]
    fn derandomized_examples() {
        let c = all_small_sets(4);
        let r = find_simple_permutation(&c);
        assert!(r.inverted >= 8);
        assert_eq!(exhaustive_kappa(&c, true, 8).unwrap().1, 8);

        let r = find_simple_permutation(&coll(2, &[&[0]]));
        assert_eq!(r.permutation.image(), &[1, 0]);
        assert_eq!(r.inverted, 1);

        let c = coll(5, &[&[0, 1, 2], &[3]]);
        let r = find_simple_permutation(&c);
        assert_eq!(r.inverted_sets, vec![1]);
    }

    #[test]
    fn odd_ground_sets_use_the_fixed_point() {
        let c = coll(3, &[&[0], &[1], &[2]]);
        let r = find_simple_permutation(&c);
        assert!(r.permutation.is_simple());
        // exactly one fixed point, so exactly two singletons move
        assert_eq!(r.inverted, 2);
        let r = find_simple_permutation(&coll(1, &[&[0]]));
        assert_eq!(r.inverted, 0);
        assert_eq!(r.permutation.image(), &[0]);
    }

    #[test]
    fn exhaustive_examples() {
        let c = coll(4, &[&[0, 1], &[1, 2], &[0, 3]]);
        let all = exhaustive_kappa(&c, false, 8).unwrap().1;
        let simple = exhaustive_kappa(&c, true, 8).unwrap().1;
        assert!(all >= simple);
        assert_eq!(exhaustive_kappa(&coll(3, &[]), false, 8).unwrap().1, 0);
        assert_eq!(exhaustive_kappa(&coll(9, &[]), true, 8), Err(KappaError::LimitExceeded { n: 9, limit: 8 }));
    }

    #[test]
    fn empty_sets_count_as_inverted() {
        let c = Collection::new(4, vec![Subset::empty(4)]).unwrap();
        assert_eq!(kappa_lower_bound(&SizeProfile::from_collection(&c)), int(1));
        assert_eq!(find_simple_permutation(&c).inverted, 1);
    }
}
