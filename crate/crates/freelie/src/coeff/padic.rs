//! Fixed-precision p-adic scalars.
//!
//! A nonzero element is stored as `unit * p^val` with `unit` coprime to `p`
//! and known modulo `p^prec`, i.e. the value is known modulo `p^(val+prec)`.
//! `val >= 0` identifies elements of the subring of p-adic integers.
//!
//! Zero is a distinguished exact element. Addition and subtraction track the
//! minimum of the operands' absolute precisions; a cancellation of all known
//! digits collapses to the exact zero, which keeps equality deterministic.
//! Equality compares two elements at the finer of the two stored precisions,
//! so it is an approximation of true equality in `Q_p` (and, like any such
//! scheme, not transitive across very different precisions).

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Zero,
    Unit { val: i64, unit: BigUint },
}

/// A p-adic scalar with explicit relative precision.
#[derive(Debug, Clone)]
pub struct PAdic {
    p: BigUint,
    prec: u32,
    repr: Repr,
}

fn pow_p(p: &BigUint, k: u32) -> BigUint {
    p.pow(k)
}

/// Largest e with p^e dividing n, together with n / p^e. n must be nonzero.
fn strip_p(p: &BigUint, n: &BigUint) -> (u64, BigUint) {
    debug_assert!(!n.is_zero());
    let mut e = 0u64;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(p);
        if r.is_zero() {
            e += 1;
            n = q;
        } else {
            return (e, n);
        }
    }
}

fn mod_inverse(a: &BigUint, modulus: &BigUint) -> Result<BigUint> {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(modulus.clone());
    let ext = a.extended_gcd(&m);
    if !ext.gcd.is_one() {
        return Err(Error::DivisionByZero);
    }
    let x = ext.x.mod_floor(&m);
    Ok(x.to_biguint().expect("mod_floor of positive modulus"))
}

impl PAdic {
    /// The exact zero of `Q_p`; `prec` is kept only as the ring's target
    /// precision for bookkeeping.
    pub fn zero(p: BigUint, prec: u32) -> Self {
        PAdic { p, prec, repr: Repr::Zero }
    }

    pub fn one(p: BigUint, prec: u32) -> Self {
        PAdic { p, prec: prec.max(1), repr: Repr::Unit { val: 0, unit: BigUint::one() } }
    }

    /// Builds an element from a residue `s` known modulo `p^window`, sitting at
    /// base valuation `base_val` (the value is `s * p^base_val`).
    fn from_residue(p: BigUint, window: u32, base_val: i64, s: BigUint) -> Self {
        let modulus = pow_p(&p, window);
        let s = s % &modulus;
        if s.is_zero() {
            return PAdic::zero(p, window);
        }
        let (ord, unit) = strip_p(&p, &s);
        let ord = u32::try_from(ord).expect("ord below window");
        debug_assert!(ord < window);
        PAdic { p, prec: window - ord, repr: Repr::Unit { val: base_val + i64::from(ord), unit } }
    }

    /// Embeds an exact rational with `prec` digits of relative precision.
    pub fn from_rational(q: &BigRational, p: &BigUint, prec: u32) -> Result<Self> {
        if p < &BigUint::from(2u8) {
            return Err(Error::NotPrime(p.to_string()));
        }
        let prec = prec.max(1);
        if q.is_zero() {
            return Ok(PAdic::zero(p.clone(), prec));
        }
        let (a, num) = strip_p(p, q.numer().magnitude());
        let (b, den) = strip_p(p, q.denom().magnitude());
        let modulus = pow_p(p, prec);
        let mut unit = (num % &modulus) * mod_inverse(&den, &modulus)? % &modulus;
        if q.numer().sign() == Sign::Minus {
            unit = (&modulus - unit) % &modulus;
        }
        let val = i64::try_from(a).expect("valuation fits i64") - i64::try_from(b).expect("valuation fits i64");
        // unit is coprime to p by construction and nonzero mod p^prec
        Ok(PAdic { p: p.clone(), prec, repr: Repr::Unit { val, unit } })
    }

    pub fn from_integer(n: &BigInt, p: &BigUint, prec: u32) -> Result<Self> {
        Self::from_rational(&BigRational::from(n.clone()), p, prec)
    }

    /// Rebuilds an element from stored parts; `unit == 0` denotes the exact zero.
    pub fn from_parts(p: BigUint, prec: u32, val: i64, unit: BigUint) -> Result<Self> {
        if p < BigUint::from(2u8) {
            return Err(Error::NotPrime(p.to_string()));
        }
        let prec = prec.max(1);
        if unit.is_zero() {
            return Ok(PAdic::zero(p, prec));
        }
        Ok(PAdic::from_residue(p, prec, val, unit))
    }

    pub fn prime(&self) -> &BigUint {
        &self.p
    }

    /// Relative precision: the number of known base-p digits.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// `None` for the exact zero.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Unit { val, .. } => Some(*val),
        }
    }

    pub fn unit_part(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Unit { unit, .. } => Some(unit),
        }
    }

    /// The value is known modulo `p^abs`; `None` (infinite) for the exact zero.
    pub fn abs_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Unit { val, .. } => Some(val + i64::from(self.prec)),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.repr, Repr::Unit { val: 0, unit } if unit.is_one())
    }

    /// Membership in the ring of p-adic integers (valuation >= 0; zero counts).
    pub fn is_integral(&self) -> bool {
        match &self.repr {
            Repr::Zero => true,
            Repr::Unit { val, .. } => *val >= 0,
        }
    }

    pub fn same_field(&self, other: &Self) -> bool {
        self.p == other.p
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: format!("Q_{}", self.p),
                right: format!("Q_{}", other.p),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) => Ok(other.clone()),
            (_, Repr::Zero) => Ok(self.clone()),
            (Repr::Unit { val: v1, unit: u1 }, Repr::Unit { val: v2, unit: u2 }) => {
                let a1 = v1 + i64::from(self.prec);
                let a2 = v2 + i64::from(other.prec);
                let v = (*v1).min(*v2);
                let window = u32::try_from(a1.min(a2) - v).expect("window is positive");
                let modulus = pow_p(&self.p, window);
                let shift = |val: i64, unit: &BigUint| -> BigUint {
                    let e = u32::try_from(val - v).expect("nonnegative shift");
                    unit * pow_p(&self.p, e) % &modulus
                };
                let s = (shift(*v1, u1) + shift(*v2, u2)) % &modulus;
                Ok(PAdic::from_residue(self.p.clone(), window, v, s))
            }
        }
    }

    pub fn checked_neg(&self) -> Self {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Unit { val, unit } => {
                let modulus = pow_p(&self.p, self.prec);
                PAdic {
                    p: self.p.clone(),
                    prec: self.prec,
                    repr: Repr::Unit { val: *val, unit: (&modulus - unit) % &modulus },
                }
            }
        }
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.checked_neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let prec = self.prec.min(other.prec);
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => Ok(PAdic::zero(self.p.clone(), prec)),
            (Repr::Unit { val: v1, unit: u1 }, Repr::Unit { val: v2, unit: u2 }) => {
                let modulus = pow_p(&self.p, prec);
                Ok(PAdic {
                    p: self.p.clone(),
                    prec,
                    repr: Repr::Unit { val: v1 + v2, unit: u1 * u2 % &modulus },
                })
            }
        }
    }

    /// Inverse of any nonzero element; the valuation flips sign.
    pub fn checked_inv(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero => Err(Error::DivisionByZero),
            Repr::Unit { val, unit } => {
                let modulus = pow_p(&self.p, self.prec);
                Ok(PAdic {
                    p: self.p.clone(),
                    prec: self.prec,
                    repr: Repr::Unit { val: -val, unit: mod_inverse(unit, &modulus)? },
                })
            }
        }
    }

    /// Multiplies by an exact rational scalar; relative precision is preserved.
    pub fn mul_exact_rational(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return PAdic::zero(self.p.clone(), self.prec);
        }
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Unit { val, unit } => {
                let (a, num) = strip_p(&self.p, q.numer().magnitude());
                let (b, den) = strip_p(&self.p, q.denom().magnitude());
                let modulus = pow_p(&self.p, self.prec);
                let mut u = unit * (num % &modulus) % &modulus;
                u = u * mod_inverse(&den, &modulus).expect("denominator unit") % &modulus;
                if q.numer().sign() == Sign::Minus {
                    u = (&modulus - u) % &modulus;
                }
                let vq = i64::try_from(a).unwrap() - i64::try_from(b).unwrap();
                PAdic { p: self.p.clone(), prec: self.prec, repr: Repr::Unit { val: val + vq, unit: u } }
            }
        }
    }

    /// Adds an exact rational; the result keeps this element's absolute precision.
    pub fn add_exact_rational(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return self.clone();
        }
        match &self.repr {
            Repr::Zero => PAdic::from_rational(q, &self.p, self.prec).expect("valid prime"),
            Repr::Unit { val, .. } => {
                let abs = val + i64::from(self.prec);
                let vq = {
                    let (a, _) = strip_p(&self.p, q.numer().magnitude());
                    let (b, _) = strip_p(&self.p, q.denom().magnitude());
                    i64::try_from(a).unwrap() - i64::try_from(b).unwrap()
                };
                if vq >= abs {
                    // the addend vanishes at this element's precision
                    return self.clone();
                }
                let prec_q = u32::try_from(abs - vq).expect("positive width");
                let y = PAdic::from_rational(q, &self.p, prec_q).expect("valid prime");
                self.checked_add(&y).expect("same field")
            }
        }
    }

    /// The residue of an integral element modulo `p^digits`.
    pub fn residue(&self, digits: u32) -> Result<BigUint> {
        match &self.repr {
            Repr::Zero => Ok(BigUint::zero()),
            Repr::Unit { val, unit } => {
                if *val < 0 {
                    return Err(Error::NotIntegral(self.to_string()));
                }
                if *val >= i64::from(digits) {
                    return Ok(BigUint::zero());
                }
                if val + i64::from(self.prec) < i64::from(digits) {
                    return Err(Error::PrecisionExhausted(format!(
                        "residue mod {}^{} requested, value known mod {}^{}",
                        self.p,
                        digits,
                        self.p,
                        val + i64::from(self.prec)
                    )));
                }
                let modulus = pow_p(&self.p, digits);
                let v = u32::try_from(*val).unwrap();
                Ok(unit * pow_p(&self.p, v) % &modulus)
            }
        }
    }

    /// Valuation of `self - other` capped by the shared absolute precision.
    /// Used for convergence reports: the two elements agree modulo
    /// `p^result` and no further digits are available for comparison.
    pub fn agreement(&self, other: &Self) -> Result<i64> {
        self.check_field(other)?;
        let diff = self.checked_sub(other)?;
        match diff.valuation() {
            Some(v) => Ok(v),
            None => {
                let cap = match (self.abs_precision(), other.abs_precision()) {
                    (Some(a), Some(b)) => a.min(b),
                    (Some(a), None) => a,
                    (None, Some(b)) => b,
                    (None, None) => i64::MAX,
                };
                Ok(cap)
            }
        }
    }
}

impl PartialEq for PAdic {
    fn eq(&self, other: &Self) -> bool {
        if self.p != other.p {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Zero, Repr::Zero) => true,
            (Repr::Zero, _) | (_, Repr::Zero) => false,
            (Repr::Unit { val: v1, unit: u1 }, Repr::Unit { val: v2, unit: u2 }) => {
                if v1 != v2 {
                    return false;
                }
                let prec = self.prec.min(other.prec);
                let modulus = pow_p(&self.p, prec);
                u1 % &modulus == u2 % &modulus
            }
        }
    }
}

impl Eq for PAdic {}

impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero => write!(f, "0"),
            Repr::Unit { val, unit } => {
                write!(f, "{}*{}^{}+O({}^{})", unit, self.p, val, self.p, val + i64::from(self.prec))
            }
        }
    }
}

/// Trial-division primality check; sufficient for the desk-scale primes used here.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u8);
    if n < &two {
        return false;
    }
    if let Some(small) = n.to_u64() {
        if small < 4 {
            return true;
        }
        if small % 2 == 0 {
            return false;
        }
        let mut d = 3u64;
        while d.saturating_mul(d) <= small {
            if small % d == 0 {
                return false;
            }
            d += 2;
        }
        return true;
    }
    // arbitrary-size fallback
    let mut d = BigUint::from(2u8);
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            return false;
        }
        d += 1u8;
    }
    true
}
