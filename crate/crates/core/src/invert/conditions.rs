//! Closed-form invertibility tests for special collections.

use std::collections::HashMap;

use super::InvertError;
use crate::setcore::Collection;

/// Pairwise disjoint sets are invertible iff every set has size `<= n/2`.
pub fn check_disjoint_criterion(c: &Collection) -> Result<bool, InvertError> {
    let sets = c.sets();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if !sets[i].is_disjoint(&sets[j]) {
                return Err(InvertError::NotDisjoint(i, j));
            }
        }
    }
    let n = c.ground_size();
    Ok(sets.iter().all(|s| 2 * s.cardinality() <= n))
}

fn common_size(c: &Collection) -> Result<usize, InvertError> {
    let Some(first) = c.sets().first() else {
        return Ok(0);
    };
    let k = first.cardinality();
    for (index, s) in c.sets().iter().enumerate() {
        if s.cardinality() != k {
            return Err(InvertError::UnequalSizes { expected: k, index, found: s.cardinality() });
        }
    }
    Ok(k)
}

/// Three sets of common size `k` are invertible iff
/// `a <= b <= a + 3(n − 2k)/2`, where `a = |S1 ∩ S2 ∩ S3|` and `b` is the size
/// of the intersection of the complements. Compared in doubled form so odd
/// `n − 2k` stays integral.
pub fn check_triple(c: &Collection) -> Result<bool, InvertError> {
    if c.len() != 3 {
        return Err(InvertError::WrongSetCount { expected: 3, found: c.len() });
    }
    let k = common_size(c)?;
    let n = c.ground_size() as i64;
    let s = c.sets();
    let all = s[0].intersection(&s[1]).intersection(&s[2]).cardinality() as i64;
    let none = s[0].union(&s[1]).union(&s[2]).complement().cardinality() as i64;
    Ok(all <= none && 2 * none <= 2 * all + 3 * (n - 2 * k as i64))
}

/// For `n = 2k` and sets of size exactly `k`: invertible iff every Venn atom
/// has the same size as its complementary atom.
///
/// Elements are bucketed by membership signature, so at most `n` atoms are
/// ever non-empty.
pub fn check_halfsize_conditions(c: &Collection) -> Result<bool, InvertError> {
    let n = c.ground_size();
    if n % 2 != 0 {
        return Err(InvertError::OddGroundSet(n));
    }
    let k = n / 2;
    for (index, s) in c.sets().iter().enumerate() {
        if s.cardinality() != k {
            return Err(InvertError::UnequalSizes { expected: k, index, found: s.cardinality() });
        }
    }
    let m = c.len();
    let words = m.div_ceil(64);
    let mut atoms: HashMap<Vec<u64>, usize> = HashMap::new();
    for x in 0..n {
        let mut sig = vec![0u64; words];
        for (i, s) in c.sets().iter().enumerate() {
            if s.contains(x) {
                sig[i / 64] |= 1 << (i % 64);
            }
        }
        *atoms.entry(sig).or_insert(0) += 1;
    }
    let flip = |sig: &[u64]| -> Vec<u64> {
        let mut out: Vec<u64> = sig.iter().map(|w| !w).collect();
        if m % 64 != 0 {
            if let Some(last) = out.last_mut() {
                *last &= (1u64 << (m % 64)) - 1;
            }
        }
        out
    };
    Ok(atoms.iter().all(|(sig, &count)| atoms.get(&flip(sig)).copied().unwrap_or(0) == count))
}
