//! The free Lie algebra inside the associative algebra: Lyndon-word
//! bracketings, the resulting homogeneous bases, decomposition of primitive
//! elements by forward substitution, and the truncated Campbell-Hausdorff
//! product.

use std::collections::BTreeMap;

use crate::coeff::Coefficient;
use crate::coproduct::is_primitive;
use crate::error::{Error, Result};
use crate::series::{Series, SeriesContext};
use crate::words::{is_lyndon, lyndon_words, parenthesize, LyndonOrder, ParenTree, Word};

/// A series known to have zero constant term, optionally certified primitive.
#[derive(Debug, Clone, PartialEq)]
pub struct LieElement {
    series: Series,
    verified: bool,
}

impl LieElement {
    /// Wraps a zero-constant-term series without running the primitivity test.
    pub fn unverified(series: Series) -> Result<Self> {
        if !series.constant_term().is_zero() {
            return Err(Error::ConstantTermNotZero);
        }
        Ok(LieElement { series, verified: false })
    }

    /// Wraps a series after certifying it primitive at the ambient truncation.
    pub fn verified(series: Series) -> Result<Self> {
        if !is_primitive(&series)? {
            return Err(Error::NotPrimitive);
        }
        Ok(LieElement { series, verified: true })
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn as_series(&self) -> &Series {
        &self.series
    }

    pub fn into_series(self) -> Series {
        self.series
    }
}

/// The Lie bracket `[x, y] = xy - yx` computed in the associative algebra.
pub fn bracket(x: &Series, y: &Series) -> Result<Series> {
    x.checked_mul(y)?.checked_sub(&y.checked_mul(x)?)
}

fn eval_tree_lie(ctx: &SeriesContext, tree: &ParenTree) -> Result<Series> {
    match tree {
        ParenTree::Leaf(j) => Series::generator(ctx, *j),
        ParenTree::Node(a, b) => bracket(&eval_tree_lie(ctx, a)?, &eval_tree_lie(ctx, b)?),
    }
}

fn eval_tree_group(ctx: &SeriesContext, tree: &ParenTree) -> Result<Series> {
    match tree {
        ParenTree::Leaf(j) => Series::one(ctx).checked_add(&Series::generator(ctx, *j)?),
        ParenTree::Node(a, b) => {
            eval_tree_group(ctx, a)?.group_commutator(&eval_tree_group(ctx, b)?)
        }
    }
}

/// The Lie element of a Lyndon word: read its parenthesization with Lie
/// brackets on the generators. Homogeneous of the word's degree, with integer
/// coefficients in any ring.
pub fn lie_bracketing(ctx: &SeriesContext, word: &Word) -> Result<Series> {
    check_word(ctx, word)?;
    eval_tree_lie(ctx, &parenthesize(word)?)
}

/// The group element of a Lyndon word: read the same parenthesization with
/// group commutators on the affine generators `1 + x_j`.
pub fn group_bracketing(ctx: &SeriesContext, word: &Word) -> Result<Series> {
    check_word(ctx, word)?;
    eval_tree_group(ctx, &parenthesize(word)?)
}

fn check_word(ctx: &SeriesContext, word: &Word) -> Result<()> {
    if word.alphabet_size() != ctx.n {
        return Err(Error::AlphabetMismatch { left: ctx.n, right: word.alphabet_size() });
    }
    if word.len() as u32 > ctx.max_degree {
        return Err(Error::DegreeOutOfRange { degree: word.len() as u32, max: ctx.max_degree });
    }
    if !is_lyndon(word)? {
        return Err(Error::NotLyndon(word.to_string()));
    }
    Ok(())
}

/// The homogeneous Lyndon basis of one degree, listed in lexicographic order.
pub fn lyndon_basis(ctx: &SeriesContext, degree: u32) -> Result<Vec<(Word, Series)>> {
    if degree == 0 || degree > ctx.max_degree {
        return Err(Error::DegreeOutOfRange { degree, max: ctx.max_degree });
    }
    lyndon_words(ctx.n, degree, &LyndonOrder::GradedLex)
        .into_iter()
        .filter(|w| w.len() as u32 == degree)
        .map(|w| {
            let s = lie_bracketing(ctx, &w)?;
            Ok((w, s))
        })
        .collect()
}

/// Coefficients of a Lie element with respect to the Lyndon basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LyndonBasisCoefficients {
    entries: BTreeMap<Word, Coefficient>,
}

impl LyndonBasisCoefficients {
    pub fn from_entries<I>(entries: I) -> Result<Self>
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
        Ok(LyndonBasisCoefficients { entries: map })
    }

    pub fn empty() -> Self {
        LyndonBasisCoefficients { entries: BTreeMap::new() }
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

    /// Assembles the linear combination of Lie bracketings.
    pub fn combine(&self, ctx: &SeriesContext) -> Result<Series> {
        let mut acc = Series::zero(ctx);
        for (w, c) in &self.entries {
            acc = acc.checked_add(&lie_bracketing(ctx, w)?.scalar_mul(c)?)?;
        }
        Ok(acc)
    }
}

/// Decomposes a primitive series in the Lyndon basis.
///
/// Works degree by degree. Within a degree the bracketing of a Lyndon word is
/// unitriangular: its lex-least monomial is the word itself with coefficient
/// one. So a forward pass in lex order reads each coordinate off the residual
/// and subtracts that multiple of the basis element. A nonzero residual after
/// a full degree means the input was not a Lie element, which the primitivity
/// precondition rules out; it is reported as an internal inconsistency.
pub fn decompose_lie(z: &Series) -> Result<LyndonBasisCoefficients> {
    if !is_primitive(z)? {
        return Err(Error::NotPrimitive);
    }
    decompose_lie_unchecked(z)
}

/// The forward-substitution pass without the primitivity precheck; used
/// internally where primitivity has already been certified.
pub(crate) fn decompose_lie_unchecked(z: &Series) -> Result<LyndonBasisCoefficients> {
    let ctx = z.context();
    let mut residual = z.clone();
    let mut out = BTreeMap::new();
    let words = lyndon_words(ctx.n, ctx.max_degree, &LyndonOrder::GradedLex);
    for degree in 1..=ctx.max_degree {
        for word in words.iter().filter(|w| w.len() as u32 == degree) {
            let t = residual.coefficient(word);
            if t.is_zero() {
                continue;
            }
            let basis_elt = lie_bracketing(ctx, word)?;
            residual = residual.checked_sub(&basis_elt.scalar_mul(&t)?)?;
            out.insert(word.clone(), t);
        }
        if !residual.homogeneous_component(degree)?.is_zero() {
            return Err(Error::Inconsistency(format!(
                "nonzero residual of degree {degree} after processing all Lyndon words"
            )));
        }
    }
    Ok(LyndonBasisCoefficients { entries: out })
}

/// The Campbell-Hausdorff product `ln(exp(u) exp(v))`, truncated. Inputs must
/// be primitive; the output is again primitive at the truncation.
pub fn bch(u: &Series, v: &Series) -> Result<Series> {
    if !is_primitive(u)? || !is_primitive(v)? {
        return Err(Error::NotPrimitive);
    }
    u.exp()?.checked_mul(&v.exp()?)?.ln()
}
