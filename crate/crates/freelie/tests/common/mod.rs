//! Shared oracles and random generators for the integration suites. Oracles
//! here are deliberately naive (enumeration, brute force, Gaussian
//! elimination) and independent of the library's algorithmic paths.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use freelie::coeff::Coefficient;
use freelie::group::GroupWord;
use freelie::lie::lie_bracketing;
use freelie::series::{Series, SeriesContext};
use freelie::words::{all_words, is_lyndon, lyndon_words, LyndonOrder, Word};

pub fn rat(n: i64, d: i64) -> Coefficient {
    Coefficient::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
}

pub fn int(v: i64) -> Coefficient {
    Coefficient::Int(BigInt::from(v))
}

pub fn w(n: u8, letters: &[u8]) -> Word {
    Word::new(n, letters.to_vec()).unwrap()
}

/// Necklace-counting oracle for the number of Lyndon words of length k.
pub fn lyndon_count_oracle(n: u64, k: u32) -> u64 {
    fn moebius(mut n: u32) -> i64 {
        let mut m = 1i64;
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                n /= d;
                if n.is_multiple_of(d) {
                    return 0;
                }
                m = -m;
            }
            d += 1;
        }
        if n > 1 {
            m = -m;
        }
        m
    }
    let mut total = 0i64;
    for d in 1..=k {
        if k.is_multiple_of(d) {
            total += moebius(d) * (n as i64).pow(k / d);
        }
    }
    (total / i64::from(k)) as u64
}

/// Brute-force Lyndon words of one length: filter every word.
pub fn brute_lyndon(n: u8, len: u32) -> Vec<Word> {
    all_words(n, len).into_iter().filter(|v| is_lyndon(v).unwrap()).collect()
}

/// Rotation-based Lyndon oracle: strictly minimal among rotations and not a
/// proper power.
pub fn lyndon_by_rotations(word: &Word) -> bool {
    let letters = word.letters();
    let k = letters.len();
    if k == 0 {
        return false;
    }
    for shift in 1..k {
        let rotated: Vec<u8> = (0..k).map(|i| letters[(i + shift) % k]).collect();
        if rotated.as_slice() <= letters {
            return false;
        }
    }
    true
}

/// Brute-force enumeration of tri-colorings: for every candidate word, count
/// the colorings whose projections are the given pair.
pub fn brute_quasi_shuffle(alpha: &Word, beta: &Word) -> BTreeMap<Word, u64> {
    brute_colorings(alpha, beta, true)
}

pub fn brute_shuffle(alpha: &Word, beta: &Word) -> BTreeMap<Word, u64> {
    brute_colorings(alpha, beta, false)
}

fn brute_colorings(alpha: &Word, beta: &Word, shared: bool) -> BTreeMap<Word, u64> {
    let n = alpha.alphabet_size();
    let total = (alpha.len() + beta.len()) as u32;
    let states = if shared { 3u64 } else { 2u64 };
    let mut out = BTreeMap::new();
    for d in 0..=total {
        for tau in all_words(n, d) {
            let mut count = 0u64;
            for mut code in 0..states.pow(d) {
                let mut left = Vec::new();
                let mut right = Vec::new();
                for &l in tau.letters() {
                    match code % states {
                        0 => right.push(l),
                        1 => left.push(l),
                        _ => {
                            left.push(l);
                            right.push(l);
                        }
                    }
                    code /= states;
                }
                if left == alpha.letters() && right == beta.letters() {
                    count += 1;
                }
            }
            if count > 0 {
                out.insert(tau, count);
            }
        }
    }
    out
}

/// Rank of a list of series viewed as vectors over their monomials, by
/// Gaussian elimination over the rationals.
pub fn rank_over_q(rows: &[Series]) -> usize {
    let mut columns: BTreeSet<Word> = BTreeSet::new();
    for s in rows {
        for (word, _) in s.terms() {
            columns.insert(word.clone());
        }
    }
    let columns: Vec<Word> = columns.into_iter().collect();
    let mut matrix: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|s| {
            columns
                .iter()
                .map(|word| match s.coefficient(word) {
                    Coefficient::Rat(q) => q,
                    Coefficient::Int(z) => BigRational::from(z),
                    other => panic!("rank oracle needs exact scalars, got {other:?}"),
                })
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..columns.len() {
        let Some(pivot) = (rank..matrix.len()).find(|&r| !matrix[r][col].is_zero()) else {
            continue;
        };
        matrix.swap(rank, pivot);
        let lead = matrix[rank][col].clone();
        for r in 0..matrix.len() {
            if r != rank && !matrix[r][col].is_zero() {
                let factor = &matrix[r][col] / &lead;
                let pivot_row = matrix[rank].clone();
                for (cell, pivot) in matrix[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    let delta = &factor * pivot;
                    *cell = &*cell - &delta;
                }
            }
        }
        rank += 1;
        if rank == matrix.len() {
            break;
        }
    }
    rank
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Coefficient {
    let num = rng.gen_range(-9i64..=9);
    let den = rng.gen_range(1i64..=4);
    rat(num, den)
}

pub fn random_nonzero_rational<R: Rng>(rng: &mut R) -> Coefficient {
    loop {
        let c = random_rational(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

/// A sparse random series with the given constant term.
pub fn random_series<R: Rng>(rng: &mut R, ctx: &SeriesContext, terms: usize, constant: i64) -> Series {
    let mut entries = vec![(Word::empty(ctx.n), rat(constant, 1))];
    for _ in 0..terms {
        let degree = rng.gen_range(1..=ctx.max_degree);
        let letters: Vec<u8> = (0..degree).map(|_| rng.gen_range(1..=ctx.n)).collect();
        entries.push((Word::new(ctx.n, letters).unwrap(), random_rational(rng)));
    }
    Series::from_terms(ctx, entries).unwrap()
}

/// A random rational combination of Lyndon bracketings: a guaranteed Lie
/// element.
pub fn random_lie_combination<R: Rng>(rng: &mut R, ctx: &SeriesContext) -> Series {
    let words = lyndon_words(ctx.n, ctx.max_degree, &LyndonOrder::GradedLex);
    let mut acc = Series::zero(ctx);
    for word in words {
        if rng.gen_bool(0.5) {
            let c = random_rational(rng);
            if c.is_zero() {
                continue;
            }
            let basis = lie_bracketing(ctx, &word).unwrap();
            acc = acc.checked_add(&basis.scalar_mul(&c).unwrap()).unwrap();
        }
    }
    acc
}

/// A random reduced word in the free group with at most `max_len` letters.
pub fn random_group_word<R: Rng>(rng: &mut R, n: u8, max_len: u32) -> GroupWord {
    let len = rng.gen_range(1..=max_len);
    let mut syllables: Vec<(u8, i64)> = Vec::new();
    for _ in 0..len {
        loop {
            let j = rng.gen_range(1..=n);
            let e: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
            // keep the word freely reduced
            if let Some(&(k, f)) = syllables.last() {
                if k == j && f.signum() != e.signum() {
                    continue;
                }
            }
            match syllables.last_mut() {
                Some((k, f)) if *k == j => *f += e,
                _ => syllables.push((j, e)),
            }
            break;
        }
    }
    GroupWord::new(n, syllables).unwrap()
}

/// A deterministic pseudo-random total order on words: hash first, graded-lex
/// tiebreak.
pub fn random_order(seed: u64) -> LyndonOrder {
    LyndonOrder::Custom(Arc::new(move |a: &Word, b: &Word| {
        fn mix(seed: u64, word: &Word) -> u64 {
            let mut x = seed ^ 0x9e37_79b9_7f4a_7c15;
            for &l in word.letters() {
                x = x.wrapping_mul(0x0100_0000_01b3).wrapping_add(u64::from(l));
                x ^= x >> 29;
            }
            x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
            x ^ (x >> 32)
        }
        mix(seed, a).cmp(&mix(seed, b)).then_with(|| {
            a.len().cmp(&b.len()).then_with(|| a.letters().cmp(b.letters()))
        })
    }))
}

/// All reduced group words over n generators with exactly `len` letters.
pub fn reduced_words_of_length(n: u8, len: u32) -> Vec<GroupWord> {
    let mut out: Vec<Vec<(u8, i64)>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for word in &out {
            for j in 1..=n {
                for e in [1i64, -1] {
                    if let Some(&(k, f)) = word.last() {
                        if k == j && f.signum() != e.signum() {
                            continue;
                        }
                    }
                    let mut extended = word.clone();
                    match extended.last_mut() {
                        Some((k, f)) if *k == j => *f += e,
                        _ => extended.push((j, e)),
                    }
                    next.push(extended);
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|syl| GroupWord::new(n, syl).unwrap()).collect()
}
