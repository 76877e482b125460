use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use thompson_core::circuits::{desugar, GateKind};
use thompson_core::codes::{all_words, ideal_intersection, words_up_to, PrefixCode, Word};
use thompson_core::generators::{eval_word, word_inverse, Gen};
use thompson_core::sample::{random_circuit, random_gen_word, random_group_element, random_maximal_code, random_table};
use thompson_core::thompson::{
    compose, embed0, embed1, image_of_ideal, invert, preimage_restrict, reduce, Element, Table,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..2, 0..=5).prop_map(Word::from_letters)
}

fn code(max_members: usize) -> impl Strategy<Value = PrefixCode> {
    prop::collection::vec(word(), 0..=max_members).prop_map(|ws| PrefixCode::minimal(2, ws))
}

fn in_ideal(p: &PrefixCode, w: &Word) -> bool {
    p.prefix_of(w.letters()).is_some()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn intersection_lies_in_union_and_commutes(p in code(6), q in code(6)) {
        let pq = ideal_intersection(&p, &q);
        for w in pq.words() {
            prop_assert!(p.contains(w) || q.contains(w));
        }
        let qp = ideal_intersection(&q, &p);
        prop_assert_eq!(pq.words(), qp.words());
        // membership agrees with both ideals on every short word
        for w in words_up_to(2, p.max_len().max(q.max_len()) + 1) {
            prop_assert_eq!(in_ideal(&pq, &w), in_ideal(&p, &w) && in_ideal(&q, &w));
        }
    }

    #[test]
    fn maximal_code_has_exactly_one_prefix(seed in any::<u64>(), tail in 0usize..3) {
        let mut r = rng(seed);
        let p = random_maximal_code(&mut r, 2, 5, 8);
        for w in all_words(2, p.max_len() + tail) {
            prop_assert_eq!(p.words().iter().filter(|u| u.is_prefix_of(&w)).count(), 1);
        }
    }

    #[test]
    fn kraft_agrees_with_essentiality(p in code(6)) {
        let brute = all_words(2, p.max_len() + 1).iter().all(|w| in_ideal(&p, w));
        prop_assert_eq!(p.is_maximal(), brute && !p.is_empty());
    }

    #[test]
    fn reduce_is_idempotent_and_preserves_meaning(seed in any::<u64>(), partial in any::<bool>()) {
        let t = random_table(&mut rng(seed), 2, 4, partial);
        let r = reduce(&t);
        prop_assert!(reduce(r.table()).table() == r.table());
        for w in words_up_to(2, t.ell() + 3) {
            if let Some(y) = t.apply(&w) {
                prop_assert_eq!(r.apply(&w), Some(y));
            }
        }
    }

    #[test]
    fn compose_is_associative(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let [a, b, c] = [a, b, c].map(|s| reduce(&random_table(&mut rng(s), 2, 3, true)));
        let left = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        let right = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        prop_assert!(left.table() == right.table());
    }

    #[test]
    fn group_laws(seed in any::<u64>()) {
        let g = random_group_element(&mut rng(seed), 4);
        let gi = invert(&g).unwrap();
        prop_assert!(compose(&g, &gi).unwrap().is_identity());
        prop_assert!(compose(&gi, &g).unwrap().is_identity());
        prop_assert!(invert(&gi).unwrap().table() == g.table());
    }

    #[test]
    fn embeddings_are_homomorphisms_into_fixers(a in any::<u64>(), b in any::<u64>()) {
        let f = random_group_element(&mut rng(a), 3);
        let g = random_group_element(&mut rng(b), 3);
        let fg = compose(&f, &g).unwrap();
        let lhs = embed0(&fg).unwrap();
        let rhs = compose(&embed0(&f).unwrap(), &embed0(&g).unwrap()).unwrap();
        prop_assert!(lhs.table() == rhs.table());
        prop_assert!(embed0(&f).unwrap().flags().in_fix1);
        prop_assert!(embed1(&f).unwrap().flags().in_fix0);
        let both = compose(&embed0(&f).unwrap(), &embed1(&g).unwrap()).unwrap();
        prop_assert!(both.flags().in_stab01);
    }

    #[test]
    fn word_inverse_inverts(seed in any::<u64>(), len in 0usize..=6) {
        let toks = [Gen::Sigma, Gen::sigma_inv(), Gen::PhiNot, Gen::PhiOr, Gen::PhiAnd, Gen::Tau(1, 2), Gen::Tau(2, 3)];
        let w = random_gen_word(&mut rng(seed), &toks, len);
        let e = eval_word(&w).unwrap();
        let ei = eval_word(&word_inverse(&w).unwrap()).unwrap();
        prop_assert!(ei.table() == invert(&e).unwrap().table());
    }

    #[test]
    fn preimage_and_image_lengths(seed in any::<u64>(), r in code(4)) {
        let t = random_table(&mut rng(seed), 2, 3, true);
        let bound = t.ell() + r.max_len();
        let pre = preimage_restrict(&t, &r);
        prop_assert!(pre.domain_code().max_len() <= bound);
        prop_assert!(image_of_ideal(&t, &r).max_len() <= bound);
        for w in words_up_to(2, bound + 1) {
            if let Some(y) = pre.apply(&w) {
                prop_assert!(in_ideal(&r, &y));
                prop_assert_eq!(t.apply(&w), Some(y));
            }
        }
    }

    #[test]
    fn desugar_preserves_function(seed in any::<u64>(), m in 1usize..=5, gates in 1usize..=15) {
        let kinds = [GateKind::And, GateKind::Or, GateKind::Not, GateKind::Fork, GateKind::Swap, GateKind::Xor, GateKind::Cnot, GateKind::Ccnot];
        let c = random_circuit(&mut rng(seed), m, gates, &kinds, 4);
        let d = desugar(&c);
        prop_assert!(d.is_desugared());
        prop_assert!(d.truth_table() == c.truth_table());
    }
}

#[test]
fn identity_element_is_neutral() {
    let e = Element::identity(2);
    let g = reduce(&Table::from_pairs(2, &[("0", "00"), ("10", "01"), ("11", "1")]));
    assert!(compose(&e, &g).unwrap().table() == g.table());
    assert!(compose(&g, &e).unwrap().table() == g.table());
}
