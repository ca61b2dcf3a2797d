//! The group of twisted-grouplike series: Magnus embedding of free-group
//! words, Malcev-coordinate decomposition and composition with respect to an
//! arbitrary factor order, integrality, and the parametrization of group
//! elements by their coefficients at Lyndon words.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::coeff::Coefficient;
use crate::coproduct::{grouplike_violation, is_primitive, Coproduct};
use crate::error::{Error, Result};
use crate::lie::{decompose_lie_unchecked, group_bracketing};
use crate::series::{Series, SeriesContext};
use crate::words::{is_lyndon, lyndon_words, LyndonOrder, Word};

/// A word in the free group: a sequence of generator powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupWord {
    n: u8,
    syllables: Vec<(u8, i64)>,
}

impl GroupWord {
    pub fn new(n: u8, syllables: Vec<(u8, i64)>) -> Result<Self> {
        for &(j, e) in &syllables {
            if j == 0 || j > n {
                return Err(Error::LetterOutOfRange { letter: j, n });
            }
            if e == 0 {
                return Err(Error::Parse("zero exponent in group word".into()));
            }
        }
        Ok(GroupWord { n, syllables })
    }

    pub fn identity(n: u8) -> Self {
        GroupWord { n, syllables: Vec::new() }
    }

    pub fn alphabet_size(&self) -> u8 {
        self.n
    }

    pub fn syllables(&self) -> &[(u8, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Total letter count, inverses included.
    pub fn length(&self) -> u64 {
        self.syllables.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    /// Merges adjacent equal generators and drops cancelled syllables. The
    /// result is freely reduced.
    pub fn reduced(&self) -> GroupWord {
        let mut out: Vec<(u8, i64)> = Vec::new();
        for &(j, e) in &self.syllables {
            match out.last_mut() {
                Some((k, f)) if *k == j => {
                    *f += e;
                    if *f == 0 {
                        out.pop();
                    }
                }
                _ => out.push((j, e)),
            }
        }
        GroupWord { n: self.n, syllables: out }
    }

    /// Parses either signed generator indices ("1 2 -1") or letters
    /// ("a b A", or the compact "abA"); uppercase letters are inverses.
    pub fn parse(n: u8, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(GroupWord::identity(n));
        }
        let mut syllables = Vec::new();
        if text.chars().all(|c| c.is_ascii_alphabetic() || c.is_whitespace()) {
            for c in text.chars().filter(|c| !c.is_whitespace()) {
                let (j, e) = if c.is_ascii_lowercase() {
                    (c as u8 - b'a' + 1, 1)
                } else {
                    (c as u8 - b'A' + 1, -1)
                };
                syllables.push((j, e));
            }
        } else {
            for token in text.split_whitespace() {
                let v: i64 = token
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad group-word token {token:?}")))?;
                if v == 0 {
                    return Err(Error::Parse("generator index 0 in group word".into()));
                }
                let j = u8::try_from(v.unsigned_abs())
                    .map_err(|_| Error::Parse(format!("generator index {v} too large")))?;
                syllables.push((j, if v > 0 { 1 } else { -1 }));
            }
        }
        GroupWord::new(n, syllables)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "e");
        }
        if self.n <= 26 {
            for &(j, e) in &self.syllables {
                let c = if e > 0 { (b'a' + j - 1) as char } else { (b'A' + j - 1) as char };
                for _ in 0..e.unsigned_abs() {
                    write!(f, "{c}")?;
                }
            }
            Ok(())
        } else {
            let parts: Vec<String> = self
                .syllables
                .iter()
                .flat_map(|&(j, e)| {
                    let tok = if e > 0 { format!("{j}") } else { format!("-{j}") };
                    std::iter::repeat_n(tok, e.unsigned_abs() as usize)
                })
                .collect();
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// The Magnus image: each generator power maps to an integer power of the
/// affine series `1 + x_j`. The result has constant term 1 and integer
/// coefficients in every ring.
pub fn magnus_embed(ctx: &SeriesContext, word: &GroupWord) -> Result<Series> {
    if word.alphabet_size() != ctx.n {
        return Err(Error::AlphabetMismatch { left: ctx.n, right: word.alphabet_size() });
    }
    let mut acc = Series::one(ctx);
    for &(j, e) in word.syllables() {
        let base = Series::one(ctx).checked_add(&Series::generator(ctx, j)?)?;
        acc = acc.checked_mul(&base.pow_int(&BigInt::from(e))?)?;
    }
    Ok(acc)
}

/// Membership in the group of twisted-grouplike series. A constant term
/// other than 1 simply fails the test.
pub fn is_in_group(g: &Series) -> Result<bool> {
    if !g.constant_term().is_one() {
        return Ok(false);
    }
    Ok(grouplike_violation(g, Coproduct::Twisted)?.is_none())
}

/// A power of a group element by a ring exponent: exactly known integers use
/// the group power (inverse then binomial expansion), everything else the
/// binomial series.
pub fn group_power(g: &Series, t: &Coefficient) -> Result<Series> {
    match t.as_integer() {
        Some(k) => g.pow_int(&k),
        None => g.power(t),
    }
}

/// Exponents of an ordered product of Lyndon-word group bracketings.
#[derive(Debug, Clone)]
pub struct MalcevCoordinates {
    order: LyndonOrder,
    entries: BTreeMap<Word, Coefficient>,
}

impl MalcevCoordinates {
    /// Zero coordinates are dropped; keys must be Lyndon words.
    pub fn from_entries<I>(order: LyndonOrder, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Coefficient)>,
    {
        let mut map = BTreeMap::new();
        for (w, c) in entries {
            if !is_lyndon(&w)? {
                return Err(Error::NotLyndon(w.to_string()));
            }
            if !c.is_zero() {
                map.insert(w, c);
            }
        }
        Ok(MalcevCoordinates { order, entries: map })
    }

    pub fn order(&self) -> &LyndonOrder {
        &self.order
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Coefficient)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, word: &Word) -> Option<&Coefficient> {
        self.entries.get(word)
    }

    /// All exponents are exactly known integers.
    pub fn is_integral(&self) -> bool {
        self.entries.values().all(Coefficient::is_integral)
    }
}

impl PartialEq for MalcevCoordinates {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries && self.order.label() == other.order.label()
    }
}

/// Decomposes a grouplike series into Malcev coordinates with respect to the
/// given factor order.
///
/// Degree stage `m` forms the partial product of the already assigned
/// factors in order, truncated at degree `m`; the degree-`m` part of
/// `g * P^-1` is certified primitive and split in the Lyndon basis, which
/// assigns the exponents of the degree-`m` words. Lower-degree residue or a
/// non-primitive residual would contradict the grouplike precondition and is
/// reported as an inconsistency.
pub fn malcev_decompose(g: &Series, order: &LyndonOrder) -> Result<MalcevCoordinates> {
    if !g.constant_term().is_one() {
        return Err(Error::ConstantTermNotOne);
    }
    if let Some((l, r)) = grouplike_violation(g, Coproduct::Twisted)? {
        return Err(Error::NotGrouplike { left: l.to_string(), right: r.to_string() });
    }
    let ctx = g.context();
    let mut by_order = lyndon_words(ctx.n, ctx.max_degree, &LyndonOrder::GradedLex);
    by_order.sort_by(|a, b| order.compare(a, b));
    let mut bracketings: BTreeMap<Word, Series> = BTreeMap::new();
    let mut coords: BTreeMap<Word, Coefficient> = BTreeMap::new();

    for m in 1..=ctx.max_degree {
        let g_m = g.restrict(m);
        let stage_ctx = g_m.context().clone();
        let mut partial = Series::one(&stage_ctx);
        for word in by_order.iter().filter(|w| (w.len() as u32) < m) {
            let Some(t) = coords.get(word) else { continue };
            if !bracketings.contains_key(word) {
                bracketings.insert(word.clone(), group_bracketing(ctx, word)?);
            }
            let factor = group_power(&bracketings[word].restrict(m), t)?;
            partial = partial.checked_mul(&factor)?;
        }
        let q = g_m.checked_mul(&partial.inverse()?)?;
        for d in 1..m {
            if !q.homogeneous_component(d)?.is_zero() {
                return Err(Error::Inconsistency(format!(
                    "partial product disagrees at degree {d} before stage {m}"
                )));
            }
        }
        let residual = q.homogeneous_component(m)?;
        if residual.is_zero() {
            continue;
        }
        if !is_primitive(&residual)? {
            return Err(Error::Inconsistency(format!("stage-{m} residual is not primitive")));
        }
        for (word, t) in decompose_lie_unchecked(&residual)?.entries() {
            coords.insert(word.clone(), t.clone());
        }
    }
    Ok(MalcevCoordinates { order: order.clone(), entries: coords })
}

/// The ordered product of powers of group bracketings, truncated.
pub fn malcev_compose(ctx: &SeriesContext, coords: &MalcevCoordinates) -> Result<Series> {
    let mut words: Vec<&Word> = coords.entries.keys().collect();
    words.sort_by(|a, b| coords.order.compare(a, b));
    let mut acc = Series::one(ctx);
    for word in words {
        let t = &coords.entries[word];
        let factor = group_power(&group_bracketing(ctx, word)?, t)?;
        acc = acc.checked_mul(&factor)?;
    }
    Ok(acc)
}

/// Every coefficient lies in the closure of the integers.
pub fn is_integral(g: &Series) -> bool {
    g.is_integral()
}

/// The coefficients of the series at every Lyndon word inside the truncation,
/// zeros included.
pub fn lyndon_coefficients(g: &Series) -> BTreeMap<Word, Coefficient> {
    let ctx = g.context();
    lyndon_words(ctx.n, ctx.max_degree, &LyndonOrder::GradedLex)
        .into_iter()
        .map(|w| {
            let c = g.coefficient(&w);
            (w, c)
        })
        .collect()
}

/// Builds the unique grouplike series whose coefficient at each Lyndon word
/// equals the prescribed value (missing words default to zero), iterating the
/// words in the given order and correcting one coordinate per step.
///
/// The step relies on factors of later words never disturbing already-fixed
/// coefficients, which holds for degree-compatible orders such as the graded
/// default (a bracketing of a word `K` contains monomials of higher degree
/// that precede `K` lexicographically, so the pure-lex order is not safe
/// here).
pub fn reconstruct_from_lyndon_coeffs(
    ctx: &SeriesContext,
    targets: &BTreeMap<Word, Coefficient>,
    order: &LyndonOrder,
) -> Result<(Series, MalcevCoordinates)> {
    for word in targets.keys() {
        if !is_lyndon(word)? {
            return Err(Error::NotLyndon(word.to_string()));
        }
    }
    let mut words = lyndon_words(ctx.n, ctx.max_degree, &LyndonOrder::GradedLex);
    words.sort_by(|a, b| order.compare(a, b));
    let mut acc = Series::one(ctx);
    let mut coords = BTreeMap::new();
    for word in words {
        let goal = targets.get(&word).cloned().unwrap_or_else(|| ctx.ring.zero());
        let t = goal.checked_sub(&acc.coefficient(&word))?;
        if t.is_zero() {
            continue;
        }
        let factor = group_power(&group_bracketing(ctx, &word)?, &t)?;
        acc = acc.checked_mul(&factor)?;
        coords.insert(word, t);
    }
    Ok((acc, MalcevCoordinates { order: order.clone(), entries: coords }))
}
