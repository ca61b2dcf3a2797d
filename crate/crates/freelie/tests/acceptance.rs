//! The acceptance suite: one test per criterion, each printing a single
//! pass line on success. Everything runs in exact arithmetic at desk scale;
//! every tolerance is zero unless a p-adic precision is stated explicitly.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{
    brute_lyndon, lyndon_count_oracle, random_group_word, random_lie_combination, random_order,
    random_rational, random_series, rat, w,
};
use freelie::coeff::{Coefficient, PAdic, RingTag};
use freelie::completions::{
    enumerate_cosets, in_open_subgroup, order_mod_subgroup, power_convergence,
    power_into_subgroup, OpenSubgroupSpec, SigmaNu,
};
use freelie::coproduct::{
    delta_standard, delta_twisted, is_grouplike, is_primitive, substitute_expm1, substitute_log,
    tensor_substitute_log, Coproduct,
};
use freelie::group::{
    is_integral, lyndon_coefficients, magnus_embed, malcev_compose, malcev_decompose,
    reconstruct_from_lyndon_coeffs, MalcevCoordinates,
};
use freelie::lie::{bch, group_bracketing, lie_bracketing};
use freelie::series::{Series, SeriesContext};
use freelie::words::{lex_compare, lyndon_words, LyndonOrder, Word};

fn ctx_q(n: u8, max: u32) -> SeriesContext {
    SeriesContext::new(n, max, RingTag::Rational)
}

fn ctx_z(n: u8, max: u32) -> SeriesContext {
    SeriesContext::new(n, max, RingTag::Integer)
}

#[test]
fn criterion_01_lyndon_counts() {
    let expected_n2 = [2u64, 1, 2, 3, 6, 9];
    let words = lyndon_words(2, 6, &LyndonOrder::GradedLex);
    for (k, want) in expected_n2.iter().enumerate() {
        let len = k as u32 + 1;
        let from_enum = words.iter().filter(|w| w.len() == len as usize).count() as u64;
        let from_filter = brute_lyndon(2, len).len() as u64;
        assert_eq!(from_enum, *want, "n=2 len={len}");
        assert_eq!(from_filter, *want, "n=2 len={len} (filter)");
        assert_eq!(lyndon_count_oracle(2, len), *want, "n=2 len={len} (oracle)");
    }
    let expected_n3 = [3u64, 3, 8, 18];
    let words = lyndon_words(3, 4, &LyndonOrder::GradedLex);
    for (k, want) in expected_n3.iter().enumerate() {
        let len = k as u32 + 1;
        let from_enum = words.iter().filter(|w| w.len() == len as usize).count() as u64;
        let from_filter = brute_lyndon(3, len).len() as u64;
        assert_eq!(from_enum, *want, "n=3 len={len}");
        assert_eq!(from_filter, *want, "n=3 len={len} (filter)");
        assert_eq!(lyndon_count_oracle(3, len), *want, "n=3 len={len} (oracle)");
    }
    println!("criterion 01 (Lyndon counts): pass");
}

#[test]
fn criterion_02_bracketing_triangularity() {
    for (n, max) in [(2u8, 6u32), (3, 4)] {
        let ctx = ctx_q(n, max);
        for word in lyndon_words(n, max, &LyndonOrder::GradedLex) {
            let s = lie_bracketing(&ctx, &word).unwrap();
            assert_eq!(s.coefficient(&word), rat(1, 1), "leading coefficient of {word}");
            for (monomial, coeff) in s.terms() {
                assert_eq!(monomial.len(), word.len(), "{word} not homogeneous");
                assert!(!coeff.is_zero());
                if monomial != &word {
                    assert_eq!(
                        lex_compare(&word, monomial).unwrap(),
                        std::cmp::Ordering::Less,
                        "support of {word} contains earlier monomial {monomial}"
                    );
                }
            }
        }
    }
    println!("criterion 02 (bracketing triangularity): pass");
}

#[test]
fn criterion_03_group_vs_lie_bracketing() {
    for (n, max) in [(2u8, 6u32), (3, 4)] {
        let ctx = ctx_z(n, max);
        for word in lyndon_words(n, max, &LyndonOrder::GradedLex) {
            let group = group_bracketing(&ctx, &word).unwrap();
            let affine = Series::one(&ctx)
                .checked_add(&lie_bracketing(&ctx, &word).unwrap())
                .unwrap();
            assert!(
                group.equal_mod(&affine, word.len() as u32).unwrap(),
                "{word}"
            );
        }
    }
    println!("criterion 03 (group bracketing approximates Lie bracketing): pass");
}

#[test]
fn criterion_04_grouplike_and_primitive_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let ctx = ctx_z(2, 6);
    let mut images = Vec::new();
    for _ in 0..50 {
        let word = random_group_word(&mut rng, 2, 8);
        let g = magnus_embed(&ctx, &word).unwrap();
        assert!(is_grouplike(&g, Coproduct::Twisted).unwrap(), "{word}");
        images.push(g);
    }
    let qctx = ctx_q(2, 6);
    let mut primitives = Vec::new();
    for _ in 0..50 {
        let z = random_lie_combination(&mut rng, &qctx);
        assert!(is_primitive(&z).unwrap());
        primitives.push(z);
    }
    // corrupt one coefficient of degree >= 2: both membership tests must fail
    for k in 0..20 {
        let degree = rng.gen_range(2..=6u32);
        let letters: Vec<u8> = (0..degree).map(|_| rng.gen_range(1..=2u8)).collect();
        let word = Word::new(2, letters).unwrap();

        let g = &images[k % images.len()];
        let bad = g
            .checked_add(&Series::monomial(&ctx, &word, ctx.ring.from_i64(1)).unwrap())
            .unwrap();
        assert!(!is_grouplike(&bad, Coproduct::Twisted).unwrap(), "corruption {k} at {word}");

        let z = &primitives[k % primitives.len()];
        let bad = z
            .checked_add(&Series::monomial(&qctx, &word, rat(1, 1)).unwrap())
            .unwrap();
        assert!(!is_primitive(&bad).unwrap(), "corruption {k} at {word}");
    }
    println!("criterion 04 (grouplike/primitive membership, 50+50 pass, 20+20 corrupted fail): pass");
}

#[test]
fn criterion_05_malcev_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let orders = vec![LyndonOrder::GradedLex, LyndonOrder::PureLex, random_order(0x105)];
    let ctx = ctx_z(2, 6);
    let words: Vec<_> = (0..50).map(|_| random_group_word(&mut rng, 2, 8)).collect();
    for order in &orders {
        for word in &words {
            let g = magnus_embed(&ctx, word).unwrap();
            let coords = malcev_decompose(&g, order).unwrap();
            let back = malcev_compose(&ctx, &coords).unwrap();
            assert_eq!(back, g, "{word} under order {}", order.label());
        }
    }

    let qctx = ctx_q(2, 6);
    let lyndon = lyndon_words(2, 6, &LyndonOrder::GradedLex);
    for order in &orders {
        for _ in 0..50 {
            let mut entries = Vec::new();
            for w in &lyndon {
                if rng.gen_bool(0.5) {
                    entries.push((w.clone(), random_rational(&mut rng)));
                }
            }
            let coords = MalcevCoordinates::from_entries(order.clone(), entries).unwrap();
            let g = malcev_compose(&qctx, &coords).unwrap();
            let back = malcev_decompose(&g, order).unwrap();
            assert_eq!(back, coords, "order {}", order.label());
        }
    }
    println!("criterion 05 (Malcev round trips, 3 orders, exact): pass");
}

#[test]
fn criterion_06_integral_coordinates() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let ctx = ctx_q(2, 6);
    // coordinates of embedded free-group words are integers (denominator 1)
    for _ in 0..50 {
        let word = random_group_word(&mut rng, 2, 8);
        let g = magnus_embed(&ctx, &word).unwrap();
        let coords = malcev_decompose(&g, &LyndonOrder::GradedLex).unwrap();
        for (l, t) in coords.entries() {
            assert!(t.is_integral(), "{word}: non-integer exponent at {l}");
        }
    }
    // integer coordinates compose to integer coefficients
    let lyndon = lyndon_words(2, 6, &LyndonOrder::GradedLex);
    for _ in 0..10 {
        let mut entries = Vec::new();
        for w in &lyndon {
            if rng.gen_bool(0.6) {
                entries.push((w.clone(), rat(rng.gen_range(-6i64..=6), 1)));
            }
        }
        let coords = MalcevCoordinates::from_entries(LyndonOrder::GradedLex, entries).unwrap();
        assert!(is_integral(&malcev_compose(&ctx, &coords).unwrap()));
    }
    // a half-integer coordinate produces a non-integral element
    let coords = MalcevCoordinates::from_entries(
        LyndonOrder::GradedLex,
        [(w(2, &[1]), rat(1, 2)), (w(2, &[2]), rat(3, 1))],
    )
    .unwrap();
    assert!(!is_integral(&malcev_compose(&ctx, &coords).unwrap()));
    println!("criterion 06 (integrality of coordinates and coefficients): pass");
}

#[test]
fn criterion_07_lyndon_coefficient_parametrization() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let ctx = ctx_q(2, 5);
    let lyndon = lyndon_words(2, 5, &LyndonOrder::GradedLex);
    for round in 0..50 {
        let targets: BTreeMap<Word, Coefficient> = lyndon
            .iter()
            .map(|w| (w.clone(), rat(rng.gen_range(-9i64..=9), 1)))
            .collect();
        let (g, coords) =
            reconstruct_from_lyndon_coeffs(&ctx, &targets, &LyndonOrder::GradedLex).unwrap();
        assert_eq!(lyndon_coefficients(&g), targets, "round {round}");
        for (l, t) in coords.entries() {
            assert!(t.is_integral(), "round {round}: exponent at {l}");
        }
        assert!(is_integral(&g), "round {round}");
    }
    println!("criterion 07 (Lyndon-coefficient parametrization, 50 integer vectors): pass");
}

#[test]
fn criterion_08_coproduct_coherence() {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let ctx = ctx_q(2, 5);
    for k in 0..20 {
        let constant = rng.gen_range(0..=1);
        let g = random_series(&mut rng, &ctx, 6, constant);
        let direct = delta_twisted(&g).unwrap();
        let conjugated =
            tensor_substitute_log(&delta_standard(&substitute_expm1(&g).unwrap()).unwrap())
                .unwrap();
        assert_eq!(direct, conjugated, "sample {k}");
    }
    for k in 0..20 {
        let g = random_lie_combination(&mut rng, &ctx).exp().unwrap();
        let t = random_rational(&mut rng);
        let lhs = substitute_log(&g.power(&t).unwrap()).unwrap();
        let rhs = substitute_log(&g).unwrap().power(&t).unwrap();
        assert_eq!(lhs, rhs, "sample {k}");
    }
    println!("criterion 08 (coproduct conjugation and power-substitution identities): pass");
}

#[test]
fn criterion_09_pro_p_quotients() {
    let ctx = SeriesContext::new(2, 2, RingTag::padic(2, 16).unwrap());
    let spec = OpenSubgroupSpec::new(2, 2, 1).unwrap();

    let cosets = enumerate_cosets(&ctx, &spec).unwrap();
    let sigma = SigmaNu::new(2, 2).sigma(2);
    assert_eq!(sigma, 3);
    assert_eq!(cosets.len(), 8, "2^(1*3) coordinate classes");
    let distinct: BTreeSet<_> = cosets.iter().collect();
    assert_eq!(distinct.len(), 8);

    // sampled orders are powers of 2
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    for _ in 0..8 {
        let g = magnus_embed(&ctx, &random_group_word(&mut rng, 2, 5)).unwrap();
        let order = order_mod_subgroup(&g, &spec).unwrap();
        let mut k = order.clone();
        while (&k % 2u8).is_zero() {
            k /= 2u8;
        }
        assert!(k.is_one(), "order {order}");
    }

    // the finer subgroup is contained in the coarser one
    let ctx3 = SeriesContext::new(2, 3, RingTag::padic(2, 16).unwrap());
    let fine = OpenSubgroupSpec::new(3, 2, 2).unwrap();
    let coarse = OpenSubgroupSpec::new(2, 2, 1).unwrap();
    for _ in 0..5 {
        let g = magnus_embed(&ctx3, &random_group_word(&mut rng, 2, 5)).unwrap();
        let member = power_into_subgroup(&g, &fine).unwrap();
        assert!(in_open_subgroup(&member, &fine).unwrap());
        assert!(in_open_subgroup(&member, &coarse).unwrap());
    }
    println!("criterion 09 (pro-p quotient: 8 cosets, 2-power orders, nested filtration): pass");
}

#[test]
fn criterion_10_power_convergence() {
    let ctx = SeriesContext::new(2, 6, RingTag::padic(2, 16).unwrap());
    let p2 = BigUint::from(2u8);
    let t = PAdic::from_integer(&BigInt::from(-1), &p2, 16).unwrap();
    let ks: Vec<BigInt> = (1..=8).map(|i| BigInt::from((1i64 << i) - 1)).collect();
    let report = power_convergence(&ctx, &w(2, &[1, 2]), &t, &ks).unwrap();
    let schedule: Vec<i64> = report.steps.iter().map(|s| s.agreement).collect();
    for i in 1..schedule.len() {
        assert!(schedule[i - 1] <= schedule[i], "not monotone: {schedule:?}");
    }
    assert!(schedule[7] >= 6, "final agreement {} below 6", schedule[7]);
    // frozen regression value of the whole schedule
    assert_eq!(schedule, vec![0, 1, 2, 3, 4, 5, 6, 7]);
    println!("criterion 10 (coefficientwise convergence of integer powers): pass");
}

#[test]
fn criterion_11_bch() {
    let ctx = ctx_q(2, 2);
    let z = bch(
        &Series::generator(&ctx, 1).unwrap(),
        &Series::generator(&ctx, 2).unwrap(),
    )
    .unwrap();
    let want = Series::from_terms(
        &ctx,
        [
            (w(2, &[1]), rat(1, 1)),
            (w(2, &[2]), rat(1, 1)),
            (w(2, &[1, 2]), rat(1, 2)),
            (w(2, &[2, 1]), rat(-1, 2)),
        ],
    )
    .unwrap();
    assert_eq!(z, want);

    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let ctx = ctx_q(2, 5);
    for k in 0..20 {
        let u = random_lie_combination(&mut rng, &ctx);
        let v = random_lie_combination(&mut rng, &ctx);
        let z = bch(&u, &v).unwrap();
        assert!(is_primitive(&z).unwrap(), "sample {k}");
    }
    println!("criterion 11 (Campbell-Hausdorff: degree-2 value and primitivity): pass");
}
