use num_rational::Rational64;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use setinv::bounds::{lower_bound_t, upper_bound_entropy};
use setinv::invert::{brute_force_invertible, decide_invertible};
use setinv::kappa::{ceil_nonneg, find_simple_permutation};
use setinv::pack::{verify_packing, PackingPlan};
use setinv::qcube::{is_square_blocking, recursive_blocking_set, CubeSymmetry};
use setinv::{Collection, Subset};

fn collection(max_n: usize, max_sets: usize) -> impl Strategy<Value = Collection> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(0u64..(1u64 << n), 0..=max_sets)
            .prop_map(move |masks| Collection::new(n, masks.into_iter().map(|m| Subset::from_mask(n, m)).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matching_answer_is_checkable(c in collection(6, 6)) {
        let result = decide_invertible(&c);
        match result.permutation() {
            Some(p) => {
                for s in c.sets() {
                    prop_assert!(p.inverts(s).unwrap());
                }
            }
            None => prop_assert!(brute_force_invertible(&c, 8).unwrap().is_none()),
        }
    }

    #[test]
    fn adding_subsets_keeps_invertibility(c in collection(7, 5), keep in any::<u64>()) {
        prop_assume!(!c.is_empty());
        let mut grown = c.clone();
        for s in c.sets() {
            let mask = s.words()[0] & keep;
            grown.push(Subset::from_mask(c.ground_size(), mask)).unwrap();
        }
        if decide_invertible(&c).is_perfect() {
            prop_assert!(decide_invertible(&grown).is_perfect());
        }
    }

    #[test]
    fn simple_search_reaches_its_bound(c in collection(12, 10)) {
        let found = find_simple_permutation(&c);
        prop_assert!(found.permutation.is_simple() || c.ground_size() < 2);
        let counted = c.sets().iter().filter(|s| found.permutation.inverts(s).unwrap()).count();
        prop_assert_eq!(counted, found.inverted);
        prop_assert_eq!(found.inverted_sets.len(), found.inverted);
        prop_assert!(found.inverted >= ceil_nonneg(&found.bound).to_usize().unwrap());
    }

    #[test]
    fn small_packings_verify(n in 1usize..=40, den in 1i64..=4) {
        let alpha = Rational64::new(1, den);
        let plan = PackingPlan::build(n, alpha).unwrap();
        prop_assert!(plan.check_structure().is_ok());
        if plan.family_size() <= 300 {
            let family = plan.materialize(300).unwrap();
            prop_assert!(verify_packing(&family).passed);
        }
    }

    #[test]
    fn lower_bound_stays_below_entropy_bound(alpha in 0.05f64..0.95, t in 0.02f64..0.98) {
        let c = alpha * t;
        let lower = lower_bound_t(c, alpha).unwrap();
        let upper = upper_bound_entropy(c, alpha).unwrap();
        prop_assert!(lower.log_per_n <= upper.log_per_n + 1e-12);
    }

    #[test]
    fn cube_symmetries_preserve_blocking(n in 2usize..=7, seed in any::<u64>()) {
        let mut directions: Vec<usize> = (0..n).collect();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            directions.swap(i, (state >> 33) as usize % (i + 1));
        }
        let flip = (seed as u32) & ((1u32 << n) - 1);
        let symmetry = CubeSymmetry { directions, flip };
        let m = recursive_blocking_set(n).unwrap();
        let moved = symmetry.edges(&m);
        prop_assert_eq!(moved.len(), m.len());
        prop_assert!(is_square_blocking(&moved, 14).unwrap());
    }
}
