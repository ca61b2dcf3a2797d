//! The standard coproduct (sum over unshuffles), the twisted coproduct (sum
//! over tri-colorings), the primitive and grouplike membership tests, and the
//! substitution automorphism that conjugates one coproduct into the other.
//!
//! Grouplike membership is decided coefficientwise: for every pair of words
//! with total degree inside the truncation, the product of coefficients must
//! equal the weighted sum of coefficients over the (quasi-)shuffle targets of
//! the pair. This avoids materializing the tensor square and yields the first
//! violated pair, in a fixed canonical order, as a diagnostic.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coeff::Coefficient;
#[cfg(feature = "parallel")]
use crate::coeff::RingTag;
use crate::error::{Error, Result};
use crate::series::{Series, SeriesContext};
use crate::words::{all_words, Word};

/// Which coproduct a membership test refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coproduct {
    /// Generators map to `x (x) 1 + 1 (x) x`.
    Standard,
    /// Generators map to `x (x) 1 + 1 (x) x + x (x) x`.
    Twisted,
}

/// A sparse element of the tensor square, truncated by total degree.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorSeries {
    ctx: SeriesContext,
    terms: BTreeMap<(Word, Word), Coefficient>,
}

impl TensorSeries {
    pub fn zero(ctx: &SeriesContext) -> Self {
        TensorSeries { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn context(&self) -> &SeriesContext {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Coefficient)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, left: &Word, right: &Word) -> Coefficient {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(|| self.ctx.ring.zero())
    }

    fn add_term(&mut self, left: Word, right: Word, coeff: Coefficient) -> Result<()> {
        if (left.len() + right.len()) as u32 > self.ctx.max_degree {
            return Ok(()); // outside the tensor truncation
        }
        if coeff.is_zero() {
            return Ok(());
        }
        let key = (left, right);
        match self.terms.remove(&key) {
            None => {
                self.terms.insert(key, coeff);
            }
            Some(old) => {
                let sum = old.checked_add(&coeff)?;
                if !sum.is_zero() {
                    self.terms.insert(key, sum);
                }
            }
        }
        Ok(())
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), c.checked_neg())?;
        }
        Ok(out)
    }

    /// Componentwise product: `(a (x) b)(c (x) d) = ac (x) bd`, truncated by
    /// total degree.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = TensorSeries::zero(&self.ctx);
        let max = self.ctx.max_degree as usize;
        for ((la, ra), ca) in &self.terms {
            let da = la.len() + ra.len();
            if da > max {
                continue;
            }
            for ((lb, rb), cb) in &other.terms {
                if da + lb.len() + rb.len() > max {
                    continue;
                }
                out.add_term(la.concat(lb)?, ra.concat(rb)?, ca.checked_mul(cb)?)?;
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for TensorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((l, r), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*({l}(x){r})")?;
        }
        Ok(())
    }
}

/// The tensor product `g (x) h`, truncated by total degree.
pub fn tensor_of(g: &Series, h: &Series) -> Result<TensorSeries> {
    if g.context() != h.context() {
        return Err(Error::ContextMismatch);
    }
    let mut out = TensorSeries::zero(g.context());
    for (wl, cl) in g.terms() {
        for (wr, cr) in h.terms() {
            out.add_term(wl.clone(), wr.clone(), cl.checked_mul(cr)?)?;
        }
    }
    Ok(out)
}

/// The standard coproduct: each monomial expands over all splittings of its
/// letters into two complementary subsequences.
pub fn delta_standard(g: &Series) -> Result<TensorSeries> {
    expand(g, false)
}

/// The twisted coproduct: each monomial expands over all tri-colorings of its
/// letters; a letter may go left, right, or to both sides.
pub fn delta_twisted(g: &Series) -> Result<TensorSeries> {
    expand(g, true)
}

pub fn coproduct(g: &Series, which: Coproduct) -> Result<TensorSeries> {
    match which {
        Coproduct::Standard => delta_standard(g),
        Coproduct::Twisted => delta_twisted(g),
    }
}

fn expand(g: &Series, twisted: bool) -> Result<TensorSeries> {
    let ctx = g.context();
    #[cfg(feature = "parallel")]
    {
        if !matches!(ctx.ring, RingTag::PAdic { .. }) && g.term_count() >= 64 {
            use rayon::prelude::*;
            let terms: Vec<(&Word, &Coefficient)> = g.terms().collect();
            let chunk = (terms.len() / (rayon::current_num_threads() * 4)).max(1);
            let partials: Vec<Result<TensorSeries>> = terms
                .par_chunks(chunk)
                .map(|chunk| {
                    let mut out = TensorSeries::zero(ctx);
                    for (w, c) in chunk {
                        expand_monomial(&mut out, w, c, twisted)?;
                    }
                    Ok(out)
                })
                .collect();
            let mut out = TensorSeries::zero(ctx);
            for part in partials {
                out = out.checked_add(&part?)?;
            }
            return Ok(out);
        }
    }
    let mut out = TensorSeries::zero(ctx);
    for (w, c) in g.terms() {
        expand_monomial(&mut out, w, c, twisted)?;
    }
    Ok(out)
}

fn expand_monomial(out: &mut TensorSeries, w: &Word, c: &Coefficient, twisted: bool) -> Result<()> {
    let n = w.alphabet_size();
    let k = w.len();
    let letters = w.letters();
    if !twisted {
        // 2^k unshuffles
        for mask in 0u32..(1u32 << k) {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (i, &l) in letters.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    left.push(l);
                } else {
                    right.push(l);
                }
            }
            out.add_term(Word::new(n, left)?, Word::new(n, right)?, c.clone())?;
        }
    } else {
        // 3^k colorings: 0 keeps the letter on the right only, 1 on the left
        // only, 2 on both sides
        let total = 3u32.pow(k as u32);
        for mut code in 0..total {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for &l in letters {
                match code % 3 {
                    0 => right.push(l),
                    1 => left.push(l),
                    _ => {
                        left.push(l);
                        right.push(l);
                    }
                }
                code /= 3;
            }
            out.add_term(Word::new(n, left)?, Word::new(n, right)?, c.clone())?;
        }
    }
    Ok(())
}

fn merge_target(acc: &mut BTreeMap<Word, u64>, w: Word, mult: u64) {
    *acc.entry(w).or_insert(0) += mult;
}

fn prepend(letter: u8, w: &Word) -> Word {
    let mut letters = Vec::with_capacity(w.len() + 1);
    letters.push(letter);
    letters.extend_from_slice(w.letters());
    Word::new(w.alphabet_size(), letters).expect("letter already validated")
}

/// All words receiving a contribution in the twisted-coproduct equation of
/// the pair `(alpha, beta)`, with multiplicities: the number of tri-colorings
/// of the target whose left projection is `alpha` and right projection is
/// `beta`. Computed by the first-letter recursion of the quasi-shuffle
/// product.
pub fn quasi_shuffle_targets(alpha: &Word, beta: &Word) -> Result<BTreeMap<Word, u64>> {
    if alpha.alphabet_size() != beta.alphabet_size() {
        return Err(Error::AlphabetMismatch {
            left: alpha.alphabet_size(),
            right: beta.alphabet_size(),
        });
    }
    Ok(stuffle(alpha, beta, true))
}

/// Shuffle targets of a pair: as above but for the standard coproduct, where
/// no letter is shared.
pub fn shuffle_targets(alpha: &Word, beta: &Word) -> Result<BTreeMap<Word, u64>> {
    if alpha.alphabet_size() != beta.alphabet_size() {
        return Err(Error::AlphabetMismatch {
            left: alpha.alphabet_size(),
            right: beta.alphabet_size(),
        });
    }
    Ok(stuffle(alpha, beta, false))
}

fn stuffle(alpha: &Word, beta: &Word, merge: bool) -> BTreeMap<Word, u64> {
    let mut out = BTreeMap::new();
    if alpha.is_empty() {
        out.insert(beta.clone(), 1);
        return out;
    }
    if beta.is_empty() {
        out.insert(alpha.clone(), 1);
        return out;
    }
    let n = alpha.alphabet_size();
    let a = alpha.letters()[0];
    let b = beta.letters()[0];
    let alpha_tail = Word::new(n, alpha.letters()[1..].to_vec()).expect("valid tail");
    let beta_tail = Word::new(n, beta.letters()[1..].to_vec()).expect("valid tail");
    for (w, m) in stuffle(&alpha_tail, beta, merge) {
        merge_target(&mut out, prepend(a, &w), m);
    }
    for (w, m) in stuffle(alpha, &beta_tail, merge) {
        merge_target(&mut out, prepend(b, &w), m);
    }
    if merge && a == b {
        for (w, m) in stuffle(&alpha_tail, &beta_tail, merge) {
            merge_target(&mut out, prepend(a, &w), m);
        }
    }
    out
}

/// Primitivity: the standard coproduct equals `z (x) 1 + 1 (x) z`.
pub fn is_primitive(z: &Series) -> Result<bool> {
    if !z.constant_term().is_zero() {
        return Err(Error::ConstantTermNotZero);
    }
    let ctx = z.context();
    let mut expected = TensorSeries::zero(ctx);
    let empty = Word::empty(ctx.n);
    for (w, c) in z.terms() {
        expected.add_term(w.clone(), empty.clone(), c.clone())?;
        expected.add_term(empty.clone(), w.clone(), c.clone())?;
    }
    Ok(delta_standard(z)? == expected)
}

/// The canonical pair enumeration used by the grouplike test: pairs sorted by
/// total degree, then by left degree, then lexicographically on each side.
fn pair_list(n: u8, max_degree: u32) -> Vec<(Word, Word)> {
    let by_degree: Vec<Vec<Word>> = (0..=max_degree).map(|d| all_words(n, d)).collect();
    let mut pairs = Vec::new();
    for total in 0..=max_degree {
        for a in 0..=total {
            for alpha in &by_degree[a as usize] {
                for beta in &by_degree[(total - a) as usize] {
                    pairs.push((alpha.clone(), beta.clone()));
                }
            }
        }
    }
    pairs
}

fn pair_violated(g: &Series, which: Coproduct, alpha: &Word, beta: &Word) -> Result<bool> {
    let lhs = g.coefficient(alpha).checked_mul(&g.coefficient(beta))?;
    let targets = match which {
        Coproduct::Twisted => quasi_shuffle_targets(alpha, beta)?,
        Coproduct::Standard => shuffle_targets(alpha, beta)?,
    };
    let mut rhs = g.context().ring.zero();
    for (tau, mult) in &targets {
        let c = g.coefficient(tau);
        if c.is_zero() {
            continue;
        }
        rhs = rhs.checked_add(&c.scale_rational(&BigRational::from(BigInt::from(*mult)))?)?;
    }
    Ok(lhs != rhs)
}

/// The first pair of words whose coefficient equation fails, or `None` when
/// the series is grouplike for the chosen coproduct.
pub fn grouplike_violation(g: &Series, which: Coproduct) -> Result<Option<(Word, Word)>> {
    if !g.constant_term().is_one() {
        return Err(Error::ConstantTermNotOne);
    }
    let ctx = g.context();
    let pairs = pair_list(ctx.n, ctx.max_degree);
    #[cfg(feature = "parallel")]
    {
        if pairs.len() >= 512 {
            use rayon::prelude::*;
            let hit = pairs
                .par_iter()
                .find_first(|(a, b)| !matches!(pair_violated(g, which, a, b), Ok(false)));
            return match hit {
                None => Ok(None),
                Some((a, b)) => {
                    pair_violated(g, which, a, b)?; // surface the error, if any
                    Ok(Some((a.clone(), b.clone())))
                }
            };
        }
    }
    scan_pairs(g, which, &pairs)
}

/// Sequential pair scan (reference implementation).
pub fn grouplike_violation_seq(g: &Series, which: Coproduct) -> Result<Option<(Word, Word)>> {
    if !g.constant_term().is_one() {
        return Err(Error::ConstantTermNotOne);
    }
    let ctx = g.context();
    scan_pairs(g, which, &pair_list(ctx.n, ctx.max_degree))
}

fn scan_pairs(
    g: &Series,
    which: Coproduct,
    pairs: &[(Word, Word)],
) -> Result<Option<(Word, Word)>> {
    for (a, b) in pairs {
        if pair_violated(g, which, a, b)? {
            return Ok(Some((a.clone(), b.clone())));
        }
    }
    Ok(None)
}

/// Membership in the grouplike set of the chosen coproduct.
pub fn is_grouplike(g: &Series, which: Coproduct) -> Result<bool> {
    Ok(grouplike_violation(g, which)?.is_none())
}

/// The continuous algebra endomorphism sending each generator to its image.
/// Images must have zero constant term so the substitution respects the
/// truncation filtration.
pub fn substitute(g: &Series, images: &[Series]) -> Result<Series> {
    let ctx = g.context();
    if images.len() != ctx.n as usize {
        return Err(Error::ContextMismatch);
    }
    for img in images {
        if img.context() != ctx {
            return Err(Error::ContextMismatch);
        }
        if !img.constant_term().is_zero() {
            return Err(Error::ConstantTermNotZero);
        }
    }
    let mut cache: BTreeMap<Word, Series> = BTreeMap::new();
    cache.insert(Word::empty(ctx.n), Series::one(ctx));
    let mut acc = Series::zero(ctx);
    for (w, c) in g.terms() {
        let img = monomial_image(w, images, &mut cache)?;
        acc = acc.checked_add(&img.scalar_mul(c)?)?;
    }
    Ok(acc)
}

fn monomial_image(w: &Word, images: &[Series], cache: &mut BTreeMap<Word, Series>) -> Result<Series> {
    if let Some(s) = cache.get(w) {
        return Ok(s.clone());
    }
    let n = w.alphabet_size();
    let last = *w.letters().last().expect("empty word is pre-cached");
    let prefix = Word::new(n, w.letters()[..w.len() - 1].to_vec())?;
    let img = monomial_image(&prefix, images, cache)?
        .checked_mul(&images[usize::from(last) - 1])?;
    cache.insert(w.clone(), img.clone());
    Ok(img)
}

fn log_images(ctx: &SeriesContext) -> Result<Vec<Series>> {
    (1..=ctx.n)
        .map(|j| {
            Series::one(ctx)
                .checked_add(&Series::generator(ctx, j)?)?
                .ln()
        })
        .collect()
}

fn expm1_images(ctx: &SeriesContext) -> Result<Vec<Series>> {
    (1..=ctx.n)
        .map(|j| {
            Series::generator(ctx, j)?
                .exp()?
                .checked_sub(&Series::one(ctx))
        })
        .collect()
}

/// The automorphism substituting `ln(1 + x)` for each generator `x`; it
/// conjugates the standard coproduct into the twisted one.
pub fn substitute_log(g: &Series) -> Result<Series> {
    substitute(g, &log_images(g.context())?)
}

/// The inverse automorphism, substituting `exp(x) - 1` for each generator.
pub fn substitute_expm1(g: &Series) -> Result<Series> {
    substitute(g, &expm1_images(g.context())?)
}

/// Applies the log substitution to both tensor factors.
pub fn tensor_substitute_log(t: &TensorSeries) -> Result<TensorSeries> {
    let ctx = t.context().clone();
    let images = log_images(&ctx)?;
    let mut cache: BTreeMap<Word, Series> = BTreeMap::new();
    cache.insert(Word::empty(ctx.n), Series::one(&ctx));
    let mut out = TensorSeries::zero(&ctx);
    for ((l, r), c) in t.terms() {
        let img_l = monomial_image(l, &images, &mut cache)?;
        let img_r = monomial_image(r, &images, &mut cache)?;
        for (wl, cl) in img_l.terms() {
            for (wr, cr) in img_r.terms() {
                let coeff = c.checked_mul(cl)?.checked_mul(cr)?;
                out.add_term(wl.clone(), wr.clone(), coeff)?;
            }
        }
    }
    Ok(out)
}
