//! Canonical JSON interchange: series, tensor series, Malcev coordinates,
//! Lyndon coefficient vectors, coset tables, and convergence reports.
//!
//! All scalars travel as exact decimal strings (p-adics as their stored
//! parts); term lists are emitted in graded-lex order, so re-serializing a
//! parsed document reproduces it byte for byte.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::coeff::{Coefficient, RingTag};
use crate::completions::ConvergenceReport;
use crate::coproduct::TensorSeries;
use crate::error::{Error, Result};
use crate::group::MalcevCoordinates;
use crate::series::{Series, SeriesContext};
use crate::words::{LyndonOrder, Word};

pub(crate) use crate::coeff::CoeffRepr;

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RingRepr {
    Int,
    Rat,
    Padic { p: String, prec: u32 },
}

impl RingRepr {
    fn encode(ring: &RingTag) -> Self {
        match ring {
            RingTag::Integer => RingRepr::Int,
            RingTag::Rational => RingRepr::Rat,
            RingTag::PAdic { p, prec } => RingRepr::Padic { p: p.to_string(), prec: *prec },
        }
    }

    fn decode(&self) -> Result<RingTag> {
        match self {
            RingRepr::Int => Ok(RingTag::Integer),
            RingRepr::Rat => Ok(RingTag::Rational),
            RingRepr::Padic { p, prec } => {
                let p: u64 =
                    p.parse().map_err(|_| Error::Parse(format!("bad prime {p:?}")))?;
                RingTag::padic(p, *prec)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    word: Vec<u8>,
    coeff: CoeffRepr,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    n: u8,
    max_degree: u32,
    ring: RingRepr,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct TensorTermRepr {
    left: Vec<u8>,
    right: Vec<u8>,
    coeff: CoeffRepr,
}

#[derive(Serialize, Deserialize)]
struct TensorRepr {
    n: u8,
    max_degree: u32,
    ring: RingRepr,
    terms: Vec<TensorTermRepr>,
}

#[derive(Serialize, Deserialize)]
struct CoordEntryRepr {
    word: Vec<u8>,
    t: CoeffRepr,
}

#[derive(Serialize, Deserialize)]
struct CoordsRepr {
    order: String,
    entries: Vec<CoordEntryRepr>,
}

#[derive(Serialize, Deserialize)]
struct LyndonEntryRepr {
    word: Vec<u8>,
    coeff: CoeffRepr,
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serializable");
    out.push('\n');
    out
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn series_to_json(g: &Series) -> String {
    let ctx = g.context();
    let repr = SeriesRepr {
        n: ctx.n,
        max_degree: ctx.max_degree,
        ring: RingRepr::encode(&ctx.ring),
        terms: g
            .terms()
            .map(|(w, c)| TermRepr { word: w.letters().to_vec(), coeff: CoeffRepr::encode(c) })
            .collect(),
    };
    to_pretty(&repr)
}

pub fn series_from_json(text: &str) -> Result<Series> {
    let repr: SeriesRepr = parse_json(text)?;
    let ring = repr.ring.decode()?;
    let ctx = SeriesContext::new(repr.n, repr.max_degree, ring.clone());
    let terms = repr
        .terms
        .into_iter()
        .map(|t| Ok((Word::new(repr.n, t.word)?, t.coeff.decode(&ring)?)))
        .collect::<Result<Vec<_>>>()?;
    Series::from_terms(&ctx, terms)
}

pub fn tensor_to_json(t: &TensorSeries) -> String {
    let ctx = t.context();
    let repr = TensorRepr {
        n: ctx.n,
        max_degree: ctx.max_degree,
        ring: RingRepr::encode(&ctx.ring),
        terms: t
            .terms()
            .map(|((l, r), c)| TensorTermRepr {
                left: l.letters().to_vec(),
                right: r.letters().to_vec(),
                coeff: CoeffRepr::encode(c),
            })
            .collect(),
    };
    to_pretty(&repr)
}

pub fn tensor_from_json(text: &str) -> Result<TensorSeries> {
    let repr: TensorRepr = parse_json(text)?;
    let ring = repr.ring.decode()?;
    let ctx = SeriesContext::new(repr.n, repr.max_degree, ring.clone());
    let mut out = TensorSeries::zero(&ctx);
    for term in repr.terms {
        let left = Word::new(repr.n, term.left)?;
        let right = Word::new(repr.n, term.right)?;
        let coeff = term.coeff.decode(&ring)?;
        let single = crate::coproduct::tensor_of(
            &Series::monomial(&ctx, &left, coeff)?,
            &Series::monomial(&ctx, &right, ctx.ring.one())?,
        )?;
        out = out.checked_add(&single)?;
    }
    Ok(out)
}

pub fn coords_to_json(coords: &MalcevCoordinates) -> String {
    let repr = CoordsRepr {
        order: coords.order().label().to_string(),
        entries: coords
            .entries()
            .map(|(w, c)| CoordEntryRepr { word: w.letters().to_vec(), t: CoeffRepr::encode(c) })
            .collect(),
    };
    to_pretty(&repr)
}

/// Parses coordinates for a known alphabet and ring. A stored order label of
/// "custom" needs the comparator supplied by the caller; the named labels
/// may also be overridden.
pub fn coords_from_json(
    text: &str,
    n: u8,
    ring: &RingTag,
    custom_order: Option<LyndonOrder>,
) -> Result<MalcevCoordinates> {
    let repr: CoordsRepr = parse_json(text)?;
    let order = match (repr.order.as_str(), custom_order) {
        (_, Some(order)) => order,
        ("graded", None) => LyndonOrder::GradedLex,
        ("lex", None) => LyndonOrder::PureLex,
        ("custom", None) => {
            return Err(Error::Parse(
                "coordinates use a custom order; supply the order explicitly".into(),
            ))
        }
        (other, None) => return Err(Error::Parse(format!("unknown order label {other:?}"))),
    };
    let entries = repr
        .entries
        .into_iter()
        .map(|e| Ok((Word::new(n, e.word)?, e.t.decode(ring)?)))
        .collect::<Result<Vec<_>>>()?;
    MalcevCoordinates::from_entries(order, entries)
}

pub fn lyndon_map_to_json(map: &BTreeMap<Word, Coefficient>) -> String {
    let repr: Vec<LyndonEntryRepr> = map
        .iter()
        .map(|(w, c)| LyndonEntryRepr { word: w.letters().to_vec(), coeff: CoeffRepr::encode(c) })
        .collect();
    to_pretty(&repr)
}

pub fn lyndon_map_from_json(
    text: &str,
    n: u8,
    ring: &RingTag,
) -> Result<BTreeMap<Word, Coefficient>> {
    let repr: Vec<LyndonEntryRepr> = parse_json(text)?;
    let mut out = BTreeMap::new();
    for entry in repr {
        out.insert(Word::new(n, entry.word)?, entry.coeff.decode(ring)?);
    }
    Ok(out)
}

#[derive(Serialize)]
struct ResidueRepr {
    word: Vec<u8>,
    residue: String,
}

pub fn coset_to_json(tuple: &BTreeMap<Word, BigUint>) -> String {
    to_pretty(&residue_repr(tuple))
}

fn residue_repr(tuple: &BTreeMap<Word, BigUint>) -> Vec<ResidueRepr> {
    tuple
        .iter()
        .map(|(w, r)| ResidueRepr { word: w.letters().to_vec(), residue: r.to_string() })
        .collect()
}

pub fn coset_table_to_json(tuples: &[BTreeMap<Word, BigUint>]) -> String {
    let repr: Vec<Vec<ResidueRepr>> = tuples.iter().map(residue_repr).collect();
    to_pretty(&repr)
}

#[derive(Serialize)]
struct ConvergenceStepRepr {
    k: String,
    agreement: i64,
}

#[derive(Serialize)]
struct ConvergenceRepr {
    word: Vec<u8>,
    p: String,
    steps: Vec<ConvergenceStepRepr>,
}

pub fn convergence_to_json(report: &ConvergenceReport) -> String {
    let repr = ConvergenceRepr {
        word: report.word.letters().to_vec(),
        p: report.prime.to_string(),
        steps: report
            .steps
            .iter()
            .map(|s| ConvergenceStepRepr { k: s.exponent.to_string(), agreement: s.agreement })
            .collect(),
    };
    to_pretty(&repr)
}
