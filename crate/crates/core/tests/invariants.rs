use pcramsey_core::axioms::{check_a1, check_a2, count_below, enumerate_below, sample_fragment};
use pcramsey_core::creature::{le_fin, sigma_to_word, word_to_sigma, Example};
use pcramsey_core::hj::{Letter, VariableWord};
use pcramsey_core::product::{homogenize_product, s_bound, verify_selection, ProductColoring, ProductShape};
use pcramsey_core::sample::{dense_prefix, SeededColoring};
use pcramsey_core::subset::{colex_rank, colex_unrank, k_subsets};
use proptest::prelude::*;

fn example() -> impl Strategy<Value = Example> {
    prop_oneof![Just(Example::Ex210), Just(Example::Ex211), Just(Example::Ex213)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn colex_rank_inverts_unrank(n in 1u32..16, k in 1u32..5) {
        prop_assume!(k <= n);
        for (i, mask) in k_subsets(n, k).enumerate() {
            prop_assert_eq!(colex_rank(mask), i as u64);
            prop_assert_eq!(colex_unrank(i as u64, k), mask);
        }
    }

    #[test]
    fn sampled_prefixes_are_dense_and_valid(ex in example(), len in 1usize..9, seed: u64) {
        let p = dense_prefix(ex, len, seed);
        prop_assert!(p.validate().is_empty());
        prop_assert!(p.is_dense());
        prop_assert!(le_fin(&p, &p));
    }

    #[test]
    fn composed_fragments_are_valid_and_below(ex in example(), seed in 0u64..10_000) {
        let s = sample_fragment(ex, seed);
        for p in [&s.y, &s.z] {
            prop_assert!(p.validate().is_empty());
            prop_assert!(p.is_dense());
        }
        prop_assert!(le_fin(&s.y, &s.x));
        prop_assert!(le_fin(&s.z, &s.y));
        prop_assert!(le_fin(&s.z, &s.x));
        prop_assert!(check_a1(&s).passed());
        prop_assert!(check_a2(&s).passed());
    }

    #[test]
    fn below_count_matches_enumeration(ex in example(), seed in 0u64..1000, n in 0usize..4) {
        let u = dense_prefix(ex, 3, seed).r(n);
        prop_assert_eq!(enumerate_below(&u).unwrap().len() as u128, count_below(&u));
    }

    #[test]
    fn words_and_compositions_correspond(seed in 0u64..1000, raw in prop::collection::vec(0u8..3, 1..5)) {
        let t = dense_prefix(Example::Ex213, raw.len(), seed);
        let mut letters: Vec<Letter> = raw.iter().map(|&d| if d == 2 { Letter::Var } else { Letter::Sym(d) }).collect();
        letters[0] = Letter::Var;
        let w = VariableWord::new(2, letters).unwrap();
        let c = word_to_sigma(&t.creatures, &w).unwrap();
        prop_assert!(c.is_valid());
        prop_assert_eq!(sigma_to_word(&t.creatures, &c).unwrap(), w);
    }

    #[test]
    fn product_selections_verify(seed: u64, m0 in 1u32..3, m1 in 1u32..3) {
        let ms = [m0, m1];
        let sizes = s_bound(1, &ms, 1 << 12).unwrap();
        let shape = ProductShape::new(1, sizes.iter().map(|&s| s as u32).collect()).unwrap();
        let col = SeededColoring(seed);
        let c = ProductColoring::from_fn(shape, |sub, xs| {
            col.color_hash(xs.iter().fold(sub, |h, &x| h.wrapping_mul(31).wrapping_add(x as u64)))
        })
        .unwrap();
        let sel = homogenize_product(1, &ms, &c).unwrap();
        prop_assert!(verify_selection(&c, &sel));
    }

    #[test]
    fn seeded_colorings_are_pure(ex in example(), seed: u64, other: u64) {
        let p = dense_prefix(ex, 3, other);
        for c in &p.creatures {
            let a = SeededColoring(seed).color(c);
            prop_assert_eq!(a, SeededColoring(seed).color(&c.clone()));
            prop_assert!(a < 2);
        }
    }
}
