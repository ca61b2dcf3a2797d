//! Pro-p structure over the p-adic coefficients: the open subgroups cut out
//! by divisibility of low-degree coefficients, coset coordinates, p-power
//! orders in the finite quotients, and coefficientwise convergence of integer
//! powers toward a p-adic power.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::coeff::{is_prime, Coefficient, PAdic, RingTag};
use crate::error::{Error, Result};
use crate::group::{group_power, magnus_embed, malcev_decompose, GroupWord};
use crate::lie::group_bracketing;
use crate::series::{Series, SeriesContext};
use crate::words::{is_lyndon, lyndon_words, LyndonOrder, Word};

/// The open subgroup of integral grouplike series whose coefficients in
/// degrees `1..=nu` are divisible by `p^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenSubgroupSpec {
    nu: u32,
    p: BigUint,
    m: u32,
}

impl OpenSubgroupSpec {
    pub fn new(nu: u32, p: u64, m: u32) -> Result<Self> {
        let p = BigUint::from(p);
        if !is_prime(&p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        if nu == 0 || m == 0 {
            return Err(Error::Parse("subgroup parameters nu and m must be positive".into()));
        }
        Ok(OpenSubgroupSpec { nu, p, m })
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn prime(&self) -> &BigUint {
        &self.p
    }

    pub fn exponent(&self) -> u32 {
        self.m
    }

    /// Containment of the defining conditions: larger cutoff and exponent
    /// give a smaller subgroup.
    pub fn refines(&self, coarser: &OpenSubgroupSpec) -> bool {
        self.p == coarser.p && self.nu >= coarser.nu && self.m >= coarser.m
    }
}

/// Counts of Lyndon words by length, with cumulative totals: `sigma(nu)` is
/// the number of Lyndon words of length at most `nu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaNu {
    per_length: Vec<u64>,
}

impl SigmaNu {
    pub fn new(n: u8, max_len: u32) -> Self {
        let words = lyndon_words(n, max_len, &LyndonOrder::GradedLex);
        let mut per_length = vec![0u64; max_len as usize + 1];
        for w in words {
            per_length[w.len()] += 1;
        }
        SigmaNu { per_length }
    }

    /// Number of Lyndon words of length at most `nu`.
    pub fn sigma(&self, nu: u32) -> u64 {
        self.per_length.iter().take(nu as usize + 1).sum()
    }

    pub fn count_of_length(&self, len: u32) -> u64 {
        self.per_length.get(len as usize).copied().unwrap_or(0)
    }
}

fn padic_ring_of(g: &Series, spec: &OpenSubgroupSpec) -> Result<u32> {
    match &g.context().ring {
        RingTag::PAdic { p, prec } if p == &spec.p => {
            if *prec < spec.m {
                Err(Error::PrecisionExhausted(format!(
                    "ring precision {prec} below subgroup exponent {}",
                    spec.m
                )))
            } else {
                Ok(*prec)
            }
        }
        ring => Err(Error::RingMismatch {
            left: format!("Q_{} (prec >= {})", spec.p, spec.m),
            right: ring.to_string(),
        }),
    }
}

/// Membership test: every coefficient in degrees `1..=nu` has valuation at
/// least `m`. The series must be integral and carried at sufficient
/// precision; violations are errors, not silent degradation.
pub fn in_open_subgroup(g: &Series, spec: &OpenSubgroupSpec) -> Result<bool> {
    padic_ring_of(g, spec)?;
    for (w, c) in g.terms() {
        let Coefficient::Padic(x) = c else { unreachable!("ring checked above") };
        if !x.is_integral() {
            return Err(Error::NotIntegral(format!("coefficient at {w}")));
        }
        if w.is_empty() || w.len() as u32 > spec.nu {
            continue;
        }
        if let Some(v) = x.valuation() {
            if v < i64::from(spec.m) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The coset label of a grouplike series: its graded-order Malcev exponents
/// at Lyndon words of length `<= nu`, reduced modulo `p^m`.
pub fn coset_coordinates(
    g: &Series,
    spec: &OpenSubgroupSpec,
) -> Result<BTreeMap<Word, BigUint>> {
    padic_ring_of(g, spec)?;
    let coords = malcev_decompose(g, &LyndonOrder::GradedLex)?;
    let ctx = g.context();
    let mut out = BTreeMap::new();
    for word in lyndon_words(ctx.n, spec.nu.min(ctx.max_degree), &LyndonOrder::GradedLex) {
        let residue = match coords.get(&word) {
            None => BigUint::zero(),
            Some(Coefficient::Padic(t)) => {
                if !t.is_integral() {
                    return Err(Error::NotIntegral(format!("exponent of {word}")));
                }
                t.residue(spec.m)?
            }
            Some(_) => unreachable!("ring checked above"),
        };
        out.insert(word, residue);
    }
    Ok(out)
}

/// The smallest power of p taking the element into the subgroup. The search
/// stops at `p^(m * sigma(nu))`, the order bound of the coordinate quotient;
/// exceeding it reports an error rather than looping.
pub fn order_mod_subgroup(g: &Series, spec: &OpenSubgroupSpec) -> Result<BigUint> {
    padic_ring_of(g, spec)?;
    let ctx = g.context();
    let sigma = SigmaNu::new(ctx.n, spec.nu.min(ctx.max_degree)).sigma(spec.nu);
    let bound = u64::from(spec.m) * sigma;
    let p_int = BigInt::from(spec.p.clone());
    let mut h = g.clone();
    let mut e = 0u64;
    loop {
        if in_open_subgroup(&h, spec)? {
            return Ok(spec.p.pow(u32::try_from(e).expect("small exponent")));
        }
        if e >= bound {
            return Err(Error::OrderSearchExceeded { bound });
        }
        h = h.pow_int(&p_int)?;
        e += 1;
    }
}

/// One step of a convergence report: the integer exponent used and the
/// number of base-p digits through which the power agrees with the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceStep {
    pub exponent: BigInt,
    pub agreement: i64,
}

/// Coefficientwise comparison of `B^k_i` against `B^t` for a coherent integer
/// approximation `k_i` of the p-adic exponent `t`, where `B` is the group
/// bracketing of a Lyndon word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub word: Word,
    pub prime: BigUint,
    pub steps: Vec<ConvergenceStep>,
}

/// For each approximation `k_i` (required to match `t` modulo `p^i`), reports
/// the largest `a` with `B^{k_i} = B^t` coefficientwise modulo `p^a` across
/// all degrees of the truncation.
pub fn power_convergence(
    ctx: &SeriesContext,
    word: &Word,
    t: &PAdic,
    approximations: &[BigInt],
) -> Result<ConvergenceReport> {
    let RingTag::PAdic { p, .. } = &ctx.ring else {
        return Err(Error::RingMismatch {
            left: format!("Q_{}", t.prime()),
            right: ctx.ring.to_string(),
        });
    };
    if p != t.prime() {
        return Err(Error::RingMismatch {
            left: format!("Q_{}", t.prime()),
            right: ctx.ring.to_string(),
        });
    }
    if !is_lyndon(word)? {
        return Err(Error::NotLyndon(word.to_string()));
    }
    // coherence: k_i = t mod p^i, checked at the available precision of t
    let t_abs = t.abs_precision().unwrap_or(i64::MAX);
    for (i, k) in approximations.iter().enumerate() {
        let digits = (i + 1) as u32;
        if i64::from(digits) > t_abs {
            return Err(Error::PrecisionExhausted(format!(
                "cannot certify approximation {digits}: exponent known to {t_abs} digits"
            )));
        }
        let k_emb = PAdic::from_integer(k, p, digits.max(1))?;
        let diff = k_emb.checked_sub(&t.clone())?;
        let ok = match diff.valuation() {
            None => true,
            Some(v) => v >= i64::from(digits),
        };
        if !ok {
            return Err(Error::IncoherentSequence { index: i });
        }
    }

    let base = group_bracketing(ctx, word)?;
    let target = base.power(&Coefficient::Padic(t.clone()))?;
    let mut steps = Vec::with_capacity(approximations.len());
    for k in approximations {
        let approx = base.pow_int(k)?;
        let mut agreement = i64::MAX;
        for w in all_words_iter(ctx) {
            let a = coeff_padic(&approx.coefficient(&w))?;
            let b = coeff_padic(&target.coefficient(&w))?;
            agreement = agreement.min(a.agreement(&b)?);
        }
        steps.push(ConvergenceStep { exponent: k.clone(), agreement });
    }
    Ok(ConvergenceReport { word: word.clone(), prime: p.clone(), steps })
}

fn coeff_padic(c: &Coefficient) -> Result<PAdic> {
    match c {
        Coefficient::Padic(x) => Ok(x.clone()),
        other => Err(Error::RingMismatch { left: "Q_p".into(), right: other.ring().to_string() }),
    }
}

fn all_words_iter(ctx: &SeriesContext) -> Vec<Word> {
    (0..=ctx.max_degree).flat_map(|d| crate::words::all_words(ctx.n, d)).collect()
}

/// Exhausts the coset labels reachable from products of the Magnus
/// generators: a breadth-first walk on coordinate tuples, multiplying
/// representatives by each generator and its inverse. Labels determine the
/// walk, so the enumeration terminates with the full finite quotient.
pub fn enumerate_cosets(
    ctx: &SeriesContext,
    spec: &OpenSubgroupSpec,
) -> Result<Vec<BTreeMap<Word, BigUint>>> {
    let mut generators = Vec::new();
    for j in 1..=ctx.n {
        for e in [1i64, -1] {
            let word = GroupWord::new(ctx.n, vec![(j, e)])?;
            generators.push(magnus_embed(ctx, &word)?);
        }
    }
    let identity = Series::one(ctx);
    let mut seen: BTreeMap<Vec<(Word, BigUint)>, Series> = BTreeMap::new();
    let id_label = label_vec(coset_coordinates(&identity, spec)?);
    seen.insert(id_label.clone(), identity);
    let mut frontier = vec![id_label];
    while let Some(label) = frontier.pop() {
        let rep = seen[&label].clone();
        for gen in &generators {
            let next = rep.checked_mul(gen)?;
            let next_label = label_vec(coset_coordinates(&next, spec)?);
            if !seen.contains_key(&next_label) {
                seen.insert(next_label.clone(), next);
                frontier.push(next_label);
            }
        }
    }
    Ok(seen.into_keys().map(|label| label.into_iter().collect()).collect())
}

fn label_vec(map: BTreeMap<Word, BigUint>) -> Vec<(Word, BigUint)> {
    map.into_iter().collect()
}

/// Sample elements of the subgroup itself: powers `h^{p^e}` of integral
/// grouplike elements land in every finite quotient eventually, so iterating
/// the p-th power until membership yields a genuine member.
pub fn power_into_subgroup(g: &Series, spec: &OpenSubgroupSpec) -> Result<Series> {
    padic_ring_of(g, spec)?;
    let ctx = g.context();
    let sigma = SigmaNu::new(ctx.n, spec.nu.min(ctx.max_degree)).sigma(spec.nu);
    let bound = u64::from(spec.m) * sigma;
    let p_int = BigInt::from(spec.p.clone());
    let mut h = g.clone();
    for _ in 0..=bound {
        if in_open_subgroup(&h, spec)? {
            return Ok(h);
        }
        h = h.pow_int(&p_int)?;
    }
    Err(Error::OrderSearchExceeded { bound })
}

/// Convenience: the group bracketing of a Lyndon word raised to a p-adic
/// exponent, in a p-adic context.
pub fn bracketing_power(ctx: &SeriesContext, word: &Word, t: &Coefficient) -> Result<Series> {
    group_power(&group_bracketing(ctx, word)?, t)
}
