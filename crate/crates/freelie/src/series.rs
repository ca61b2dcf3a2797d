//! The truncated free associative algebra: sparse series with exact
//! coefficients, truncated multiplication, group inverse, exp/ln/power, and
//! group commutators.
//!
//! A series with truncation degree `N` represents its class modulo the ideal
//! of terms of degree `> N`; every public result is exact in that quotient.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Signed;

use crate::coeff::{binomial, Coefficient, RingTag};
use crate::error::{Error, Result};
use crate::words::Word;

/// Shared construction parameters of a family of series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesContext {
    pub n: u8,
    pub max_degree: u32,
    pub ring: RingTag,
}

impl SeriesContext {
    pub fn new(n: u8, max_degree: u32, ring: RingTag) -> Self {
        SeriesContext { n, max_degree, ring }
    }
}

/// A sparse series: a map from words of length `<= max_degree` to nonzero
/// coefficients, iterated in graded-lex order.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    ctx: SeriesContext,
    terms: BTreeMap<Word, Coefficient>,
}

impl Series {
    pub fn zero(ctx: &SeriesContext) -> Self {
        Series { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &SeriesContext) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Word::empty(ctx.n), ctx.ring.one());
        Series { ctx: ctx.clone(), terms }
    }

    /// The generator `1 <= j <= n` as a series.
    pub fn generator(ctx: &SeriesContext, j: u8) -> Result<Self> {
        Self::monomial(ctx, &Word::letter(ctx.n, j)?, ctx.ring.one())
    }

    pub fn monomial(ctx: &SeriesContext, word: &Word, coeff: Coefficient) -> Result<Self> {
        let mut s = Series::zero(ctx);
        s.add_term(word.clone(), coeff)?;
        Ok(s)
    }

    pub fn from_terms<I>(ctx: &SeriesContext, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, Coefficient)>,
    {
        let mut s = Series::zero(ctx);
        for (w, c) in terms {
            s.add_term(w, c)?;
        }
        Ok(s)
    }

    fn add_term(&mut self, word: Word, coeff: Coefficient) -> Result<()> {
        if word.alphabet_size() != self.ctx.n {
            return Err(Error::AlphabetMismatch { left: self.ctx.n, right: word.alphabet_size() });
        }
        if word.len() as u32 > self.ctx.max_degree {
            return Err(Error::DegreeOutOfRange {
                degree: word.len() as u32,
                max: self.ctx.max_degree,
            });
        }
        if coeff.ring() != self.ctx.ring && !ring_compatible(&coeff, &self.ctx.ring) {
            return Err(Error::RingMismatch {
                left: self.ctx.ring.to_string(),
                right: coeff.ring().to_string(),
            });
        }
        if coeff.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&word) {
            None => {
                self.terms.insert(word, coeff);
            }
            Some(old) => {
                let sum = old.checked_add(&coeff)?;
                if !sum.is_zero() {
                    self.terms.insert(word, sum);
                }
            }
        }
        Ok(())
    }

    pub fn context(&self) -> &SeriesContext {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coefficient)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The coefficient at a word; zero when the word is absent.
    pub fn coefficient(&self, word: &Word) -> Coefficient {
        self.terms.get(word).cloned().unwrap_or_else(|| self.ctx.ring.zero())
    }

    pub fn constant_term(&self) -> Coefficient {
        self.coefficient(&Word::empty(self.ctx.n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    fn has_constant_term_one(&self) -> bool {
        self.constant_term().is_one()
    }

    /// Smallest degree with a nonzero term, ignoring the constant term.
    /// `None` when no such term exists.
    pub fn positive_order(&self) -> Option<u32> {
        self.terms.keys().find(|w| !w.is_empty()).map(|w| w.len() as u32)
    }

    fn check_ctx(&self, other: &Series) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn checked_add(&self, other: &Series) -> Result<Series> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Series) -> Result<Series> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.checked_neg())?;
        }
        Ok(out)
    }

    pub fn checked_neg(&self) -> Series {
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), c.checked_neg())).collect();
        Series { ctx: self.ctx.clone(), terms }
    }

    pub fn scalar_mul(&self, c: &Coefficient) -> Result<Series> {
        if !ring_compatible(c, &self.ctx.ring) {
            return Err(Error::RingMismatch {
                left: self.ctx.ring.to_string(),
                right: c.ring().to_string(),
            });
        }
        if c.is_zero() {
            return Ok(Series::zero(&self.ctx));
        }
        let mut out = Series::zero(&self.ctx);
        for (w, old) in &self.terms {
            out.add_term(w.clone(), old.checked_mul(c)?)?;
        }
        Ok(out)
    }

    /// Truncated product. Dispatches to the parallel kernel for the exact
    /// rings when the workload is large enough; p-adic coefficients always
    /// take the sequential path so that precision bookkeeping is applied in
    /// one fixed grouping.
    pub fn checked_mul(&self, other: &Series) -> Result<Series> {
        self.check_ctx(other)?;
        #[cfg(feature = "parallel")]
        {
            let pairs = self.terms.len().saturating_mul(other.terms.len());
            if pairs >= PAR_PAIR_THRESHOLD && !matches!(self.ctx.ring, RingTag::PAdic { .. }) {
                return self.mul_par(other);
            }
        }
        self.mul_seq(other)
    }

    /// Sequential multiplication kernel (reference implementation).
    pub fn mul_seq(&self, other: &Series) -> Result<Series> {
        self.check_ctx(other)?;
        let mut out = Series::zero(&self.ctx);
        let max = self.ctx.max_degree as usize;
        for (wa, ca) in &self.terms {
            if wa.len() > max {
                continue;
            }
            let room = max - wa.len();
            for (wb, cb) in &other.terms {
                if wb.len() > room {
                    // keys are graded: every later word is at least as long
                    break;
                }
                out.add_term(wa.concat(wb)?, ca.checked_mul(cb)?)?;
            }
        }
        Ok(out)
    }

    /// Parallel multiplication kernel. Splits the left factor into chunks and
    /// merges the partial maps in chunk order, which reproduces the sequential
    /// result bit for bit over the exact rings.
    #[cfg(feature = "parallel")]
    pub fn mul_par(&self, other: &Series) -> Result<Series> {
        use rayon::prelude::*;
        self.check_ctx(other)?;
        let left: Vec<(&Word, &Coefficient)> = self.terms.iter().collect();
        let chunk = (left.len() / (rayon::current_num_threads() * 4)).max(1);
        let max = self.ctx.max_degree as usize;
        let partials: Vec<Result<Series>> = left
            .par_chunks(chunk)
            .map(|chunk| {
                let mut out = Series::zero(&self.ctx);
                for (wa, ca) in chunk {
                    if wa.len() > max {
                        continue;
                    }
                    let room = max - wa.len();
                    for (wb, cb) in &other.terms {
                        if wb.len() > room {
                            break;
                        }
                        out.add_term(wa.concat(wb)?, ca.checked_mul(cb)?)?;
                    }
                }
                Ok(out)
            })
            .collect();
        let mut out = Series::zero(&self.ctx);
        for part in partials {
            out = out.checked_add(&part?)?;
        }
        Ok(out)
    }

    /// Inverse of a series with constant term 1, by the Neumann iteration.
    pub fn inverse(&self) -> Result<Series> {
        if !self.has_constant_term_one() {
            return Err(Error::ConstantTermNotOne);
        }
        let one = Series::one(&self.ctx);
        let x = self.checked_sub(&one)?;
        if x.is_zero() {
            return Ok(one);
        }
        let mut inv = one.clone();
        for _ in 0..self.ctx.max_degree {
            inv = one.checked_sub(&x.checked_mul(&inv)?)?;
        }
        Ok(inv)
    }

    /// Exponential of a series with zero constant term; needs a ring
    /// containing the rationals.
    pub fn exp(&self) -> Result<Series> {
        if !self.constant_term().is_zero() {
            return Err(Error::ConstantTermNotZero);
        }
        if !self.ctx.ring.contains_rationals() {
            return Err(Error::RingNotRational);
        }
        let mut acc = Series::one(&self.ctx);
        let mut term = Series::one(&self.ctx);
        for m in 1..=self.ctx.max_degree {
            term = term.checked_mul(self)?;
            term = term.scalar_mul(&self.ctx.ring.from_i64(i64::from(m)).checked_inv()?)?;
            if term.is_zero() {
                break;
            }
            acc = acc.checked_add(&term)?;
        }
        Ok(acc)
    }

    /// Logarithm of a series with constant term 1; needs a ring containing
    /// the rationals.
    pub fn ln(&self) -> Result<Series> {
        if !self.has_constant_term_one() {
            return Err(Error::ConstantTermNotOne);
        }
        if !self.ctx.ring.contains_rationals() {
            return Err(Error::RingNotRational);
        }
        let x = self.checked_sub(&Series::one(&self.ctx))?;
        let mut acc = Series::zero(&self.ctx);
        let mut pow = Series::one(&self.ctx);
        for m in 1..=self.ctx.max_degree {
            pow = pow.checked_mul(&x)?;
            if pow.is_zero() {
                break;
            }
            let sign = if m % 2 == 1 { 1 } else { -1 };
            let c = self.ctx.ring.from_i64(sign).checked_mul(
                &self.ctx.ring.from_i64(i64::from(m)).checked_inv()?,
            )?;
            acc = acc.checked_add(&pow.scalar_mul(&c)?)?;
        }
        Ok(acc)
    }

    /// Binomial power `(1+x)^t` of a series with constant term 1.
    ///
    /// The exponent must live in the coefficient ring. Over the integer ring
    /// only nonnegative exponents are accepted; a negative power there is a
    /// request that must be made explicit through `inverse` or `pow_int`.
    pub fn power(&self, t: &Coefficient) -> Result<Series> {
        if !self.has_constant_term_one() {
            return Err(Error::ConstantTermNotOne);
        }
        let t = coerce_exponent(t, &self.ctx.ring)?;
        if matches!(self.ctx.ring, RingTag::Integer) {
            match &t {
                Coefficient::Int(k) if k.is_negative() => {
                    return Err(Error::NegativeIntegerExponent)
                }
                _ => {}
            }
        }
        self.binomial_power(&t)
    }

    /// Integer power of a series with constant term 1, valid over every ring;
    /// negative exponents go through the group inverse first.
    pub fn pow_int(&self, k: &BigInt) -> Result<Series> {
        if !self.has_constant_term_one() {
            return Err(Error::ConstantTermNotOne);
        }
        if k.is_negative() {
            self.inverse()?.binomial_power(&self.ctx.ring.from_integer(&-k))
        } else {
            self.binomial_power(&self.ctx.ring.from_integer(k))
        }
    }

    /// `sum_m C(t, m) x^m` with `x = self - 1`; exact because `x` has positive
    /// order, so only finitely many summands survive the truncation.
    fn binomial_power(&self, t: &Coefficient) -> Result<Series> {
        let x = self.checked_sub(&Series::one(&self.ctx))?;
        let mut acc = Series::one(&self.ctx);
        let Some(order) = x.positive_order() else {
            return Ok(acc);
        };
        let mut pow = Series::one(&self.ctx);
        let mut m = 0u32;
        while (m + 1) * order <= self.ctx.max_degree {
            m += 1;
            pow = pow.checked_mul(&x)?;
            if pow.is_zero() {
                break;
            }
            acc = acc.checked_add(&pow.scalar_mul(&binomial(t, m)?)?)?;
        }
        Ok(acc)
    }

    /// The group commutator `g^-1 h^-1 g h`.
    pub fn group_commutator(&self, other: &Series) -> Result<Series> {
        if !self.has_constant_term_one() || !other.has_constant_term_one() {
            return Err(Error::ConstantTermNotOne);
        }
        self.inverse()?
            .checked_mul(&other.inverse()?)?
            .checked_mul(self)?
            .checked_mul(other)
    }

    /// Drops every term of degree `> k`; the truncation degree of the context
    /// is unchanged.
    pub fn truncate(&self, k: u32) -> Result<Series> {
        if k > self.ctx.max_degree {
            return Err(Error::DegreeOutOfRange { degree: k, max: self.ctx.max_degree });
        }
        let terms =
            self.terms.iter().filter(|(w, _)| w.len() as u32 <= k).map(|(w, c)| (w.clone(), c.clone()));
        Ok(Series { ctx: self.ctx.clone(), terms: terms.collect() })
    }

    /// The degree-`k` homogeneous part.
    pub fn homogeneous_component(&self, k: u32) -> Result<Series> {
        if k > self.ctx.max_degree {
            return Err(Error::DegreeOutOfRange { degree: k, max: self.ctx.max_degree });
        }
        let terms =
            self.terms.iter().filter(|(w, _)| w.len() as u32 == k).map(|(w, c)| (w.clone(), c.clone()));
        Ok(Series { ctx: self.ctx.clone(), terms: terms.collect() })
    }

    /// Equality of all coefficients in degrees `<= k`.
    pub fn equal_mod(&self, other: &Series, k: u32) -> Result<bool> {
        self.check_ctx(other)?;
        Ok(self.truncate(k)? == other.truncate(k)?)
    }

    /// Every coefficient lies in the closure of the integers.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(Coefficient::is_integral)
    }

    /// Reinterprets the series at a lower truncation degree (dropped terms
    /// are forgotten, the context changes). Used internally for
    /// degree-staged algorithms.
    pub(crate) fn restrict(&self, max_degree: u32) -> Series {
        let ctx = SeriesContext { max_degree, ..self.ctx.clone() };
        let terms = self
            .terms
            .iter()
            .filter(|(w, _)| w.len() as u32 <= max_degree)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        Series { ctx, terms }
    }
}

#[cfg(feature = "parallel")]
const PAR_PAIR_THRESHOLD: usize = 1 << 14;

fn ring_compatible(c: &Coefficient, ring: &RingTag) -> bool {
    match (c, ring) {
        (Coefficient::Int(_), RingTag::Integer) => true,
        (Coefficient::Rat(_), RingTag::Rational) => true,
        (Coefficient::Padic(x), RingTag::PAdic { p, .. }) => x.prime() == p,
        _ => false,
    }
}

/// Embeds an exponent into the target ring when it is an exactly known
/// integer; otherwise the variants must match.
fn coerce_exponent(t: &Coefficient, ring: &RingTag) -> Result<Coefficient> {
    if ring_compatible(t, ring) {
        return Ok(t.clone());
    }
    if let Some(n) = t.as_integer() {
        return Ok(ring.from_integer(&n));
    }
    Err(Error::RingMismatch { left: ring.to_string(), right: t.ring().to_string() })
}

macro_rules! impl_series_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &Series {
            type Output = Series;
            fn $method(self, other: &Series) -> Series {
                self.$checked(other).expect("series context mismatch")
            }
        }
    };
}

impl_series_op!(Add, add, checked_add);
impl_series_op!(Sub, sub, checked_sub);
impl_series_op!(Mul, mul, checked_mul);

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.checked_neg()
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if w.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{c}*{w}")?;
            }
        }
        Ok(())
    }
}
