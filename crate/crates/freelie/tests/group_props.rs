mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{random_group_word, random_lie_combination, random_order, random_rational, rat, w};
use freelie::coeff::{Coefficient, RingTag};
use freelie::coproduct::{is_grouplike, substitute_log, Coproduct};
use freelie::group::{
    group_power, is_in_group, is_integral, lyndon_coefficients, magnus_embed, malcev_compose,
    malcev_decompose, reconstruct_from_lyndon_coeffs, GroupWord, MalcevCoordinates,
};
use freelie::json::series_to_json;
use freelie::series::SeriesContext;
use freelie::words::{lyndon_words, LyndonOrder, Word};

fn ctx_q(n: u8, max: u32) -> SeriesContext {
    SeriesContext::new(n, max, RingTag::Rational)
}

fn ctx_z(n: u8, max: u32) -> SeriesContext {
    SeriesContext::new(n, max, RingTag::Integer)
}

fn orders() -> Vec<LyndonOrder> {
    vec![LyndonOrder::GradedLex, LyndonOrder::PureLex, random_order(0xfeed)]
}

#[test]
fn magnus_images_are_grouplike() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let ctx = ctx_z(2, 5);
    for _ in 0..8 {
        let word = random_group_word(&mut rng, 2, 6);
        let g = magnus_embed(&ctx, &word).unwrap();
        assert!(is_in_group(&g).unwrap(), "{word}");
        assert!(is_integral(&g), "{word}");
    }
    // images under the log substitution of exponentials also land in the group
    let ctx = ctx_q(2, 4);
    for _ in 0..4 {
        let z = random_lie_combination(&mut rng, &ctx);
        let g = substitute_log(&z.exp().unwrap()).unwrap();
        assert!(is_in_group(&g).unwrap());
    }
}

#[test]
fn decompose_then_compose_recovers_group_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let ctx = ctx_z(2, 5);
    for order in orders() {
        for _ in 0..6 {
            let word = random_group_word(&mut rng, 2, 6);
            let g = magnus_embed(&ctx, &word).unwrap();
            let coords = malcev_decompose(&g, &order).unwrap();
            assert!(coords.is_integral(), "{word}");
            let back = malcev_compose(&ctx, &coords).unwrap();
            assert_eq!(back, g, "{word} under {:?}", order.label());
        }
    }
}

#[test]
fn compose_then_decompose_recovers_coordinates() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let ctx = ctx_q(2, 5);
    let words = lyndon_words(2, 5, &LyndonOrder::GradedLex);
    for order in orders() {
        for _ in 0..6 {
            let mut entries: Vec<(Word, Coefficient)> = Vec::new();
            for w in &words {
                if rng.gen_bool(0.5) {
                    entries.push((w.clone(), random_rational(&mut rng)));
                }
            }
            let coords = MalcevCoordinates::from_entries(order.clone(), entries).unwrap();
            let g = malcev_compose(&ctx, &coords).unwrap();
            assert!(is_in_group(&g).unwrap());
            let back = malcev_decompose(&g, &order).unwrap();
            assert_eq!(back, coords);
        }
    }
}

#[test]
fn integer_coordinates_compose_to_integral_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let ctx = ctx_q(2, 5);
    let words = lyndon_words(2, 5, &LyndonOrder::GradedLex);
    for _ in 0..6 {
        let mut entries: Vec<(Word, Coefficient)> = Vec::new();
        for w in &words {
            if rng.gen_bool(0.6) {
                entries.push((w.clone(), rat(rng.gen_range(-6i64..=6), 1)));
            }
        }
        let coords = MalcevCoordinates::from_entries(LyndonOrder::GradedLex, entries).unwrap();
        let g = malcev_compose(&ctx, &coords).unwrap();
        assert!(is_integral(&g));
    }
}

#[test]
fn padic_integral_coordinates_compose_to_padic_integral_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let ring = RingTag::padic(2, 16).unwrap();
    let ctx = SeriesContext::new(2, 4, ring.clone());
    let words = lyndon_words(2, 4, &LyndonOrder::GradedLex);
    for _ in 0..4 {
        let entries: Vec<(Word, Coefficient)> = words
            .iter()
            .map(|w| {
                // random 2-adic integers, odd and even valuations mixed
                let v: i64 = rng.gen_range(0..=200);
                (w.clone(), ring.from_i64(v))
            })
            .collect();
        let coords = MalcevCoordinates::from_entries(LyndonOrder::GradedLex, entries).unwrap();
        let g = malcev_compose(&ctx, &coords).unwrap();
        assert!(g.is_integral());
        let back = malcev_decompose(&g, &LyndonOrder::GradedLex).unwrap();
        assert_eq!(back, coords);
    }
}

#[test]
fn different_orders_can_give_different_coordinates() {
    // degree-1 factors in reversed order: the swapped product needs no
    // degree-2 correction, the graded product does
    let ctx = ctx_z(2, 3);
    let g = magnus_embed(&ctx, &GroupWord::parse(2, "ba").unwrap()).unwrap();
    let graded = malcev_decompose(&g, &LyndonOrder::GradedLex).unwrap();
    let swapped = LyndonOrder::Custom(Arc::new(|a: &Word, b: &Word| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.letters().cmp(b.letters()).reverse())
    }));
    let other = malcev_decompose(&g, &swapped).unwrap();
    let ab = w(2, &[1, 2]);
    assert_eq!(graded.get(&ab), Some(&Coefficient::Int(BigInt::from(-1))));
    assert_eq!(other.get(&ab), None);
    // both recompose to g
    assert_eq!(malcev_compose(&ctx, &graded).unwrap(), g);
    assert_eq!(malcev_compose(&ctx, &other).unwrap(), g);
}

#[test]
fn magnus_embedding_separates_short_words() {
    let ctx = ctx_z(2, 6);
    let mut images: BTreeSet<String> = BTreeSet::new();
    let mut count = 0usize;
    for len in 0..=4u32 {
        for word in common::reduced_words_of_length(2, len) {
            let g = magnus_embed(&ctx, &word).unwrap();
            images.insert(series_to_json(&g));
            count += 1;
        }
    }
    assert_eq!(images.len(), count, "some reduced words collided");
}

#[test]
fn power_and_log_substitution_commute() {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    let ctx = ctx_q(2, 4);
    for _ in 0..6 {
        let g = random_lie_combination(&mut rng, &ctx).exp().unwrap();
        assert!(is_grouplike(&g, Coproduct::Standard).unwrap());
        let t = random_rational(&mut rng);
        let lhs = substitute_log(&g.power(&t).unwrap()).unwrap();
        let rhs = substitute_log(&g).unwrap().power(&t).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn reconstruction_hits_prescribed_lyndon_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let ctx = ctx_q(2, 4);
    let words = lyndon_words(2, 4, &LyndonOrder::GradedLex);
    for _ in 0..8 {
        let targets: BTreeMap<Word, Coefficient> = words
            .iter()
            .map(|w| (w.clone(), rat(rng.gen_range(-5i64..=5), 1)))
            .collect();
        let (g, coords) =
            reconstruct_from_lyndon_coeffs(&ctx, &targets, &LyndonOrder::GradedLex).unwrap();
        assert_eq!(&lyndon_coefficients(&g), &targets);
        assert!(is_in_group(&g).unwrap());
        // integer targets give integer exponents and integer coefficients
        assert!(coords.is_integral());
        assert!(is_integral(&g));
        // and the coordinates recompose to the same element
        assert_eq!(malcev_compose(&ctx, &coords).unwrap(), g);
    }
}

#[test]
fn group_power_bridges_integer_and_ring_exponents() {
    let ctx = ctx_z(2, 4);
    let g = magnus_embed(&ctx, &GroupWord::parse(2, "ab").unwrap()).unwrap();
    let inv = group_power(&g, &Coefficient::Int(BigInt::from(-1))).unwrap();
    assert!(g.checked_mul(&inv).unwrap().is_one());
    // non-integer exponents over the integer ring are refused by power()
    assert!(g.power(&Coefficient::Int(BigInt::from(-1))).is_err());
}
