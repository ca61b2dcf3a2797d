//! Exact coefficient scalars: arbitrary-precision integers, rationals, and
//! fixed-precision p-adics, together with the generalized binomial
//! coefficient `C(t, m) = t(t-1)...(t-m+1)/m!`.
//!
//! No floating point anywhere; every operation is exact in its ring (p-adics
//! are exact modulo their tracked precision).

mod padic;

pub use padic::{is_prime, PAdic};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision integer scalar.
pub type Integer = BigInt;
/// Arbitrary-precision rational scalar, always in lowest terms.
pub type Rational = BigRational;

/// Selects the coefficient ring of a series. Every coefficient of one series
/// carries the same tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingTag {
    Integer,
    Rational,
    PAdic { p: BigUint, prec: u32 },
}

impl RingTag {
    /// A p-adic ring tag; `p` must be prime and `prec >= 1`.
    pub fn padic(p: u64, prec: u32) -> Result<Self> {
        let p = BigUint::from(p);
        if !is_prime(&p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        if prec == 0 {
            return Err(Error::PrecisionExhausted("precision must be at least 1".into()));
        }
        Ok(RingTag::PAdic { p, prec })
    }

    /// Whether the ring contains the rationals (needed by exp, ln, and
    /// non-integer powers).
    pub fn contains_rationals(&self) -> bool {
        !matches!(self, RingTag::Integer)
    }

    pub fn zero(&self) -> Coefficient {
        match self {
            RingTag::Integer => Coefficient::Int(BigInt::zero()),
            RingTag::Rational => Coefficient::Rat(BigRational::zero()),
            RingTag::PAdic { p, prec } => Coefficient::Padic(PAdic::zero(p.clone(), *prec)),
        }
    }

    pub fn one(&self) -> Coefficient {
        match self {
            RingTag::Integer => Coefficient::Int(BigInt::one()),
            RingTag::Rational => Coefficient::Rat(BigRational::one()),
            RingTag::PAdic { p, prec } => Coefficient::Padic(PAdic::one(p.clone(), *prec)),
        }
    }

    pub fn from_integer(&self, n: &BigInt) -> Coefficient {
        match self {
            RingTag::Integer => Coefficient::Int(n.clone()),
            RingTag::Rational => Coefficient::Rat(BigRational::from(n.clone())),
            RingTag::PAdic { p, prec } => {
                Coefficient::Padic(PAdic::from_integer(n, p, *prec).expect("valid prime"))
            }
        }
    }

    pub fn from_i64(&self, n: i64) -> Coefficient {
        self.from_integer(&BigInt::from(n))
    }

    /// Embeds a rational; fails over the integer ring unless the value is integral.
    pub fn from_rational(&self, q: &BigRational) -> Result<Coefficient> {
        match self {
            RingTag::Integer => {
                if q.is_integer() {
                    Ok(Coefficient::Int(q.to_integer()))
                } else {
                    Err(Error::RingNotRational)
                }
            }
            RingTag::Rational => Ok(Coefficient::Rat(q.clone())),
            RingTag::PAdic { p, prec } => Ok(Coefficient::Padic(PAdic::from_rational(q, p, *prec)?)),
        }
    }
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::Integer => write!(f, "Z"),
            RingTag::Rational => write!(f, "Q"),
            RingTag::PAdic { p, prec } => write!(f, "Q_{p} (prec {prec})"),
        }
    }
}

/// A tagged exact scalar.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    Int(BigInt),
    Rat(BigRational),
    Padic(PAdic),
}

impl Coefficient {
    pub fn ring(&self) -> RingTag {
        match self {
            Coefficient::Int(_) => RingTag::Integer,
            Coefficient::Rat(_) => RingTag::Rational,
            Coefficient::Padic(x) => RingTag::PAdic { p: x.prime().clone(), prec: x.precision() },
        }
    }

    fn mismatch(&self, other: &Self) -> Error {
        Error::RingMismatch { left: self.ring().to_string(), right: other.ring().to_string() }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Int(n) => n.is_zero(),
            Coefficient::Rat(q) => q.is_zero(),
            Coefficient::Padic(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coefficient::Int(n) => n.is_one(),
            Coefficient::Rat(q) => q.is_one(),
            Coefficient::Padic(x) => x.is_one(),
        }
    }

    /// Membership in the closure of the integers: `Z` itself, rationals with
    /// denominator 1, p-adics with nonnegative valuation.
    pub fn is_integral(&self) -> bool {
        match self {
            Coefficient::Int(_) => true,
            Coefficient::Rat(q) => q.is_integer(),
            Coefficient::Padic(x) => x.is_integral(),
        }
    }

    /// The integer value, when the scalar is an exactly known integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Coefficient::Int(n) => Some(n.clone()),
            Coefficient::Rat(q) if q.is_integer() => Some(q.to_integer()),
            _ => None,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Coefficient::Int(a), Coefficient::Int(b)) => Ok(Coefficient::Int(a + b)),
            (Coefficient::Rat(a), Coefficient::Rat(b)) => Ok(Coefficient::Rat(a + b)),
            (Coefficient::Padic(a), Coefficient::Padic(b)) => Ok(Coefficient::Padic(a.checked_add(b)?)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Coefficient::Int(a), Coefficient::Int(b)) => Ok(Coefficient::Int(a - b)),
            (Coefficient::Rat(a), Coefficient::Rat(b)) => Ok(Coefficient::Rat(a - b)),
            (Coefficient::Padic(a), Coefficient::Padic(b)) => Ok(Coefficient::Padic(a.checked_sub(b)?)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Coefficient::Int(a), Coefficient::Int(b)) => Ok(Coefficient::Int(a * b)),
            (Coefficient::Rat(a), Coefficient::Rat(b)) => Ok(Coefficient::Rat(a * b)),
            (Coefficient::Padic(a), Coefficient::Padic(b)) => Ok(Coefficient::Padic(a.checked_mul(b)?)),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn checked_neg(&self) -> Self {
        match self {
            Coefficient::Int(a) => Coefficient::Int(-a),
            Coefficient::Rat(a) => Coefficient::Rat(-a),
            Coefficient::Padic(a) => Coefficient::Padic(a.checked_neg()),
        }
    }

    /// Multiplicative inverse. Over the integers only units invert; rationals
    /// and p-adics invert whenever nonzero.
    pub fn checked_inv(&self) -> Result<Self> {
        match self {
            Coefficient::Int(a) => {
                if a.is_one() || (-a).is_one() {
                    Ok(Coefficient::Int(a.clone()))
                } else if a.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Err(Error::RingNotRational)
                }
            }
            Coefficient::Rat(a) => {
                if a.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Coefficient::Rat(a.recip()))
                }
            }
            Coefficient::Padic(a) => Ok(Coefficient::Padic(a.checked_inv()?)),
        }
    }

    /// Multiplies by an exact rational constant, exact in every ring. Over the
    /// integer ring the product must remain integral.
    pub fn scale_rational(&self, q: &BigRational) -> Result<Self> {
        match self {
            Coefficient::Int(a) => {
                let r = BigRational::from(a.clone()) * q;
                if r.is_integer() {
                    Ok(Coefficient::Int(r.to_integer()))
                } else {
                    Err(Error::RingNotRational)
                }
            }
            Coefficient::Rat(a) => Ok(Coefficient::Rat(a * q)),
            Coefficient::Padic(a) => Ok(Coefficient::Padic(a.mul_exact_rational(q))),
        }
    }
}

// Canonical text form: integers and integral rationals print bare, proper
// fractions as "num/den".
impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Int(n) => write!(f, "{n}"),
            Coefficient::Rat(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Coefficient::Padic(x) => write!(f, "{x}"),
        }
    }
}

macro_rules! impl_coeff_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &Coefficient {
            type Output = Coefficient;
            fn $method(self, other: &Coefficient) -> Coefficient {
                self.$checked(other).expect("coefficient ring mismatch")
            }
        }
    };
}

impl_coeff_op!(Add, add, checked_add);
impl_coeff_op!(Sub, sub, checked_sub);
impl_coeff_op!(Mul, mul, checked_mul);

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        self.checked_neg()
    }
}

/// Generalized binomial coefficient `C(t, m) = t(t-1)...(t-m+1)/m!`,
/// computed exactly in the ring of `t`. For integer `t` (of either sign) the
/// value is an integer; for a p-adic integer `t` the value stays integral.
pub fn binomial(t: &Coefficient, m: u32) -> Result<Coefficient> {
    match t {
        Coefficient::Int(t) => {
            let mut num = BigInt::one();
            let mut den = BigInt::one();
            for k in 0..m {
                num *= t - BigInt::from(k);
                den *= BigInt::from(k + 1);
            }
            let (q, r) = num_integer::Integer::div_rem(&num, &den);
            debug_assert!(r.is_zero(), "integer binomial must divide exactly");
            Ok(Coefficient::Int(q))
        }
        Coefficient::Rat(t) => {
            let mut acc = BigRational::one();
            for k in 0..m {
                acc *= t - BigRational::from(BigInt::from(k));
                acc /= BigRational::from(BigInt::from(k + 1));
            }
            Ok(Coefficient::Rat(acc))
        }
        Coefficient::Padic(t) => {
            let mut acc = PAdic::one(t.prime().clone(), t.precision());
            for k in 0..m {
                let factor = t.add_exact_rational(&BigRational::from(BigInt::from(-i64::from(k))));
                acc = acc.checked_mul(&factor)?;
                acc = acc.mul_exact_rational(&BigRational::new(BigInt::one(), BigInt::from(k + 1)));
            }
            Ok(Coefficient::Padic(acc))
        }
    }
}

/// Embedding of the rationals into the p-adic field, exact up to `prec`
/// relative digits; denominators contribute negative valuation.
pub fn rational_to_padic(q: &BigRational, p: &BigUint, prec: u32) -> Result<PAdic> {
    PAdic::from_rational(q, p, prec)
}

// ---------------------------------------------------------------------------
// JSON scalar encodings: integers and rationals as decimal strings, p-adics
// as {"p", "prec", "val", "unit"} with "unit": "0" denoting the exact zero.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum CoeffRepr {
    Text(String),
    Padic { p: String, prec: u32, val: i64, unit: String },
}

impl CoeffRepr {
    pub(crate) fn encode(c: &Coefficient) -> Self {
        match c {
            Coefficient::Int(_) | Coefficient::Rat(_) => CoeffRepr::Text(c.to_string()),
            Coefficient::Padic(x) => CoeffRepr::Padic {
                p: x.prime().to_string(),
                prec: x.precision(),
                val: x.valuation().unwrap_or(0),
                unit: x.unit_part().map(|u| u.to_string()).unwrap_or_else(|| "0".into()),
            },
        }
    }

    pub(crate) fn decode(&self, ring: &RingTag) -> Result<Coefficient> {
        match (self, ring) {
            (CoeffRepr::Text(s), RingTag::Integer) => {
                let n: BigInt = s.parse().map_err(|_| Error::Parse(format!("bad integer {s:?}")))?;
                Ok(Coefficient::Int(n))
            }
            (CoeffRepr::Text(s), RingTag::Rational) => Ok(Coefficient::Rat(parse_rational(s)?)),
            (CoeffRepr::Padic { p, prec, val, unit }, RingTag::PAdic { p: rp, prec: rprec }) => {
                let p: BigUint = p.parse().map_err(|_| Error::Parse(format!("bad prime {p:?}")))?;
                if &p != rp {
                    return Err(Error::RingMismatch {
                        left: format!("Q_{p}"),
                        right: format!("Q_{rp}"),
                    });
                }
                if prec > rprec {
                    return Err(Error::Parse(format!(
                        "stored precision {prec} exceeds ring precision {rprec}"
                    )));
                }
                let unit: BigUint =
                    unit.parse().map_err(|_| Error::Parse(format!("bad unit {unit:?}")))?;
                Ok(Coefficient::Padic(PAdic::from_parts(p, *prec, *val, unit)?))
            }
            _ => Err(Error::Parse(format!("coefficient does not match ring {ring}"))),
        }
    }
}

/// Parses "a" or "a/b" into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
            Ok(BigRational::from(n))
        }
        Some((num, den)) => {
            let n: BigInt = num.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
            let d: BigInt = den.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
    }
}
