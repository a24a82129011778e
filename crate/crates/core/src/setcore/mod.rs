//! Ground sets, subsets, permutations and collections, plus their text
//! formats.
//!
//! Elements are 0-based. Subsets are multi-word bit vectors, so the ground
//! set size is bounded only by memory.

mod collection;
mod permutation;
mod subset;

pub use collection::Collection;
pub use permutation::Permutation;
pub use subset::{Elements, Subset};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("element {element} is outside the ground set [0, {n})")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("element {0} appears twice in one set")]
    DuplicateElement(usize),
    #[error("ground set size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("image array is not a bijection")]
    NotABijection,
    #[error("missing ground-set size header")]
    MissingHeader,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("set #{0} is empty and has no line form")]
    EmptySetNotSerializable(usize),
}

/// `V − s`.
pub fn complement(s: &Subset) -> Subset {
    s.complement()
}

/// `{ p(x) : x ∈ s }`.
pub fn apply(p: &Permutation, s: &Subset) -> Result<Subset, SetError> {
    p.apply(s)
}

/// True iff `p(s) ∩ s = ∅`.
pub fn inverts(p: &Permutation, s: &Subset) -> Result<bool, SetError> {
    p.inverts(s)
}

/// Reads a collection from its text form.
pub fn parse_collection(text: &str) -> Result<Collection, SetError> {
    Collection::parse(text)
}

/// Visits every permutation of `[0, n)` in lexicographic order of the image
/// array. The visitor returns `false` to stop early.
pub fn for_each_permutation<F>(n: usize, mut visit: F)
where
    F: FnMut(&[usize]) -> bool,
{
    let mut image: Vec<usize> = (0..n).collect();
    loop {
        if !visit(&image) {
            return;
        }
        // standard next-permutation step
        let Some(i) = (1..n).rev().find(|&i| image[i - 1] < image[i]) else {
            return;
        };
        let pivot = i - 1;
        let j = (i..n).rev().find(|&j| image[j] > image[pivot]).unwrap();
        image.swap(pivot, j);
        image[i..].reverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_subset(max_n: usize) -> impl Strategy<Value = Subset> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n).prop_map(move |bits| {
                Subset::from_elements(n, bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i))
                    .unwrap()
            })
        })
    }

    fn arb_collection() -> impl Strategy<Value = Collection> {
        (1usize..150).prop_flat_map(|n| {
            proptest::collection::vec(
                proptest::collection::btree_set(0..n, 1..=n.min(12)),
                0..6,
            )
            .prop_map(move |lists| {
                let lists: Vec<Vec<usize>> = lists.into_iter().map(|s| s.into_iter().collect()).collect();
                Collection::from_lists(n, &lists).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn complement_is_an_involution(s in arb_subset(200)) {
            prop_assert_eq!(s.complement().complement(), s.clone());
            prop_assert_eq!(s.complement().cardinality(), s.ground_size() - s.cardinality());
        }

        #[test]
        fn text_round_trip(c in arb_collection()) {
            let text = c.to_text().unwrap();
            let back = Collection::parse(&text).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(back.to_text().unwrap(), text);
        }

        #[test]
        fn apply_preserves_cardinality(
            s in arb_subset(90),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut image: Vec<usize> = (0..s.ground_size()).collect();
            image.shuffle(&mut rng);
            let p = Permutation::from_image(image).unwrap();
            prop_assert_eq!(p.apply(&s).unwrap().cardinality(), s.cardinality());
        }
    }

    #[test]
    fn permutation_enumeration_is_lexicographic_and_complete() {
        let mut seen = Vec::new();
        for_each_permutation(4, |p| {
            seen.push(p.to_vec());
            true
        });
        assert_eq!(seen.len(), 24);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
        let mut count = 0;
        for_each_permutation(0, |_| {
            count += 1;
            true
        });
        assert_eq!(count, 1);
    }

    // pigeonhole: more than half the ground set can never be moved off itself
    #[test]
    fn large_sets_are_never_inverted() {
        for n in 1..=6usize {
            for mask in 0u64..(1 << n) {
                let s = Subset::from_mask(n, mask);
                if s.cardinality() <= n / 2 {
                    continue;
                }
                for_each_permutation(n, |img| {
                    let p = Permutation::from_image(img.to_vec()).unwrap();
                    assert!(!inverts(&p, &s).unwrap());
                    true
                });
            }
        }
    }
}
