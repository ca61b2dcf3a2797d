mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_nonzero_rational, random_rational, random_series, rat, w};
use freelie::coeff::{Coefficient, RingTag};
use freelie::series::{Series, SeriesContext};
use freelie::words::{all_words, Word};

fn ctx_q(n: u8, max: u32) -> SeriesContext {
    SeriesContext::new(n, max, RingTag::Rational)
}

fn coeff_strategy() -> impl Strategy<Value = Coefficient> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn series_strategy(n: u8, max: u32) -> impl Strategy<Value = Series> {
    let word = prop::collection::vec(1..=n, 0..=max as usize);
    prop::collection::vec((word, coeff_strategy()), 0..8).prop_map(move |entries| {
        let ctx = ctx_q(n, max);
        Series::from_terms(
            &ctx,
            entries.into_iter().map(|(letters, c)| (Word::new(n, letters).unwrap(), c)),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative(
        a in series_strategy(2, 5),
        b in series_strategy(2, 5),
        c in series_strategy(2, 5),
    ) {
        let left = a.checked_mul(&b).unwrap().checked_mul(&c).unwrap();
        let right = a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn multiplication_distributes(
        a in series_strategy(2, 5),
        b in series_strategy(2, 5),
        c in series_strategy(2, 5),
    ) {
        let left = a.checked_mul(&b.checked_add(&c).unwrap()).unwrap();
        let right = a.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

#[test]
fn exp_ln_mutually_inverse_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ctx = ctx_q(2, 5);
    for _ in 0..10 {
        let x = random_series(&mut rng, &ctx, 6, 0);
        assert_eq!(x.exp().unwrap().ln().unwrap(), x);
        let g = random_series(&mut rng, &ctx, 6, 1);
        assert_eq!(g.ln().unwrap().exp().unwrap(), g);
    }
}

#[test]
fn power_laws_hold_for_rational_exponents() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let ctx = ctx_q(2, 5);
    for _ in 0..10 {
        let g = random_series(&mut rng, &ctx, 5, 1);
        let s = random_rational(&mut rng);
        let t = random_rational(&mut rng);
        let sum = s.checked_add(&t).unwrap();
        let prod = s.checked_mul(&t).unwrap();
        let gs = g.power(&s).unwrap();
        let gt = g.power(&t).unwrap();
        assert_eq!(gs.checked_mul(&gt).unwrap(), g.power(&sum).unwrap());
        assert_eq!(gs.power(&t).unwrap(), g.power(&prod).unwrap());
    }
}

#[test]
fn integer_powers_of_integral_series_stay_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let ctx = ctx_q(2, 5);
    for _ in 0..10 {
        // integer coefficients inside the rational ring
        let mut entries = vec![(Word::empty(2), rat(1, 1))];
        for _ in 0..5 {
            let d = rand::Rng::gen_range(&mut rng, 1..=5u32);
            let letters: Vec<u8> =
                (0..d).map(|_| rand::Rng::gen_range(&mut rng, 1..=2u8)).collect();
            let c = rand::Rng::gen_range(&mut rng, -5i64..=5);
            entries.push((Word::new(2, letters).unwrap(), rat(c, 1)));
        }
        let g = Series::from_terms(&ctx, entries).unwrap();
        for t in [-7i64, -1, 2, 9] {
            let h = g.power(&rat(t, 1)).unwrap();
            assert!(h.is_integral(), "t = {t}");
        }
    }
}

#[test]
fn commutator_of_deep_elements_is_bracket_of_leading_terms() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let ctx = ctx_q(2, 5);
    for _ in 0..12 {
        let k = rand::Rng::gen_range(&mut rng, 1..=2u32);
        let l = rand::Rng::gen_range(&mut rng, 1..=3u32);
        if k + l > 5 {
            continue;
        }
        let homogeneous = |rng: &mut ChaCha8Rng, d: u32| {
            let terms: Vec<(Word, Coefficient)> = all_words(2, d)
                .into_iter()
                .map(|word| (word, random_rational(rng)))
                .collect();
            Series::from_terms(&ctx, terms).unwrap()
        };
        let p = homogeneous(&mut rng, k);
        let q = homogeneous(&mut rng, l);
        // tails strictly past the leading degree
        let tail = |rng: &mut ChaCha8Rng, d: u32| {
            if d + 1 > 5 {
                return Series::zero(&ctx);
            }
            let deg = rand::Rng::gen_range(rng, d + 1..=5u32);
            let letters: Vec<u8> = (0..deg).map(|_| rand::Rng::gen_range(rng, 1..=2u8)).collect();
            Series::monomial(&ctx, &Word::new(2, letters).unwrap(), random_nonzero_rational(rng))
                .unwrap()
        };
        let g = Series::one(&ctx)
            .checked_add(&p)
            .unwrap()
            .checked_add(&tail(&mut rng, k))
            .unwrap();
        let h = Series::one(&ctx)
            .checked_add(&q)
            .unwrap()
            .checked_add(&tail(&mut rng, l))
            .unwrap();
        let commutator = g.group_commutator(&h).unwrap();
        let bracket = p
            .checked_mul(&q)
            .unwrap()
            .checked_sub(&q.checked_mul(&p).unwrap())
            .unwrap();
        let expected = Series::one(&ctx).checked_add(&bracket).unwrap();
        assert!(commutator.equal_mod(&expected, k + l).unwrap(), "k={k} l={l}");
    }
}

#[test]
fn group_of_constant_term_one_is_closed() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let ctx = ctx_q(2, 5);
    for _ in 0..10 {
        let g = random_series(&mut rng, &ctx, 5, 1);
        let h = random_series(&mut rng, &ctx, 5, 1);
        assert!(g.checked_mul(&h).unwrap().constant_term().is_one());
        assert!(g.inverse().unwrap().constant_term().is_one());
        assert!(g.checked_mul(&g.inverse().unwrap()).unwrap().is_one());
    }
}

#[test]
fn pow_int_matches_binomial_power_over_rationals() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let ctx = ctx_q(2, 5);
    for _ in 0..8 {
        let g = random_series(&mut rng, &ctx, 4, 1);
        for k in [-3i64, -1, 0, 2, 5] {
            assert_eq!(
                g.pow_int(&BigInt::from(k)).unwrap(),
                g.power(&rat(k, 1)).unwrap(),
                "k = {k}"
            );
        }
    }
}

#[cfg(feature = "parallel")]
#[test]
fn parallel_and_sequential_products_agree_bitwise() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let ctx = ctx_q(3, 6);
    for _ in 0..4 {
        let g = random_series(&mut rng, &ctx, 40, 1);
        let h = random_series(&mut rng, &ctx, 40, 1);
        assert_eq!(g.mul_par(&h).unwrap(), g.mul_seq(&h).unwrap());
    }
}

#[test]
fn truncation_of_monomial_products() {
    let ctx = ctx_q(2, 2);
    let a = Series::monomial(&ctx, &w(2, &[1, 2]), rat(1, 1)).unwrap();
    let b = Series::monomial(&ctx, &w(2, &[1]), rat(1, 1)).unwrap();
    assert!(a.checked_mul(&b).unwrap().is_zero());
    assert!(b.checked_mul(&a).unwrap().is_zero());
}
