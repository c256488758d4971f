//! The tracial state as an exact linear map into the moment basis
//! `{1, p = τ(P), q = τ(Q), m_k = τ((PQ)^k)}`.
//!
//! Reduction rule: a word containing both letters is rotated cyclically so
//! that it starts with `P` and ends with `Q` (merging the seam letter with
//! idempotency if needed), which leaves `(PQ)^j` with `j = min(#P, #Q)`.
//! Words `P(QP)^k` and `Q(PQ)^k` lose one letter at the seam, the
//! alternating even words are already of the form `(PQ)^k` or `(QP)^k`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeMap, Serializer};
use thiserror::Error;

use crate::ncword::{Letter, NCPoly, Word};
use crate::rational::{frac_string, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("assignment has no value for m_{0}")]
    MissingMoment(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MomentExpr {
    unit: Rational,
    p: Rational,
    q: Rational,
    m: BTreeMap<u32, Rational>,
}

impl MomentExpr {
    pub fn zero() -> Self {
        MomentExpr {
            unit: Rational::zero(),
            p: Rational::zero(),
            q: Rational::zero(),
            m: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        MomentExpr { unit: c, ..Self::zero() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn p() -> Self {
        MomentExpr { p: Rational::one(), ..Self::zero() }
    }

    pub fn q() -> Self {
        MomentExpr { q: Rational::one(), ..Self::zero() }
    }

    /// `m_k = τ((PQ)^k)`; `m_0` is the unit.
    pub fn m(k: u32) -> Self {
        if k == 0 {
            return Self::one();
        }
        let mut e = Self::zero();
        e.m.insert(k, Rational::one());
        e
    }

    /// `α = τ(R) = 2p - 1`.
    pub fn alpha() -> Self {
        &Self::p().scale(&int(2)) - &Self::one()
    }

    /// `β = τ(S) = 2q - 1`.
    pub fn beta() -> Self {
        &Self::q().scale(&int(2)) - &Self::one()
    }

    pub fn unit_coeff(&self) -> &Rational {
        &self.unit
    }

    pub fn p_coeff(&self) -> &Rational {
        &self.p
    }

    pub fn q_coeff(&self) -> &Rational {
        &self.q
    }

    pub fn m_coeff(&self, k: u32) -> Rational {
        self.m.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn m_terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.m.iter().map(|(k, c)| (*k, c))
    }

    pub fn max_moment(&self) -> u32 {
        self.m.keys().next_back().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero() && self.p.is_zero() && self.q.is_zero() && self.m.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        out.accumulate(self, c);
        out
    }

    fn accumulate(&mut self, other: &MomentExpr, c: &Rational) {
        self.unit += &other.unit * c;
        self.p += &other.p * c;
        self.q += &other.q * c;
        for (k, x) in &other.m {
            let slot = self.m.entry(*k).or_insert_with(Rational::zero);
            *slot += x * c;
            if slot.is_zero() {
                self.m.remove(k);
            }
        }
    }
}

impl Add for &MomentExpr {
    type Output = MomentExpr;

    fn add(self, rhs: &MomentExpr) -> MomentExpr {
        let mut out = self.clone();
        out.accumulate(rhs, &Rational::one());
        out
    }
}

impl Sub for &MomentExpr {
    type Output = MomentExpr;

    fn sub(self, rhs: &MomentExpr) -> MomentExpr {
        let mut out = self.clone();
        out.accumulate(rhs, &-Rational::one());
        out
    }
}

impl Add for MomentExpr {
    type Output = MomentExpr;

    fn add(self, rhs: MomentExpr) -> MomentExpr {
        &self + &rhs
    }
}

impl Sub for MomentExpr {
    type Output = MomentExpr;

    fn sub(self, rhs: MomentExpr) -> MomentExpr {
        &self - &rhs
    }
}

impl Neg for &MomentExpr {
    type Output = MomentExpr;

    fn neg(self) -> MomentExpr {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for MomentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(String, &Rational)> = Vec::new();
        if !self.unit.is_zero() {
            parts.push((String::new(), &self.unit));
        }
        if !self.p.is_zero() {
            parts.push(("p".into(), &self.p));
        }
        if !self.q.is_zero() {
            parts.push(("q".into(), &self.q));
        }
        for (k, c) in &self.m {
            parts.push((format!("m_{k}"), c));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        for (i, (sym, c)) in parts.into_iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if sym.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&sym)?;
            } else {
                write!(f, "{mag}{sym}")?;
            }
        }
        Ok(())
    }
}

/// `{"unit": "a/b", "p": "a/b", "q": "a/b", "m": {"1": "a/b", ...}}`.
impl Serialize for MomentExpr {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let ordered: Vec<(u32, String)> =
            self.m.iter().map(|(k, c)| (*k, frac_string(c))).collect();
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("unit", &frac_string(&self.unit))?;
        map.serialize_entry("p", &frac_string(&self.p))?;
        map.serialize_entry("q", &frac_string(&self.q))?;
        map.serialize_entry("m", &OrderedPairs(&ordered))?;
        map.end()
    }
}

struct OrderedPairs<'a>(&'a [(u32, String)]);

impl Serialize for OrderedPairs<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(&k.to_string(), v)?;
        }
        map.end()
    }
}

/// Moment-basis image of a single word.
pub fn trace_word(w: &Word) -> MomentExpr {
    let (np, nq) = (w.count(Letter::P), w.count(Letter::Q));
    match (np, nq) {
        (0, 0) => MomentExpr::one(),
        (_, 0) => MomentExpr::p(),
        (0, _) => MomentExpr::q(),
        (a, b) => MomentExpr::m(a.min(b) as u32),
    }
}

pub fn trace(x: &NCPoly) -> MomentExpr {
    let mut out = MomentExpr::zero();
    for (w, c) in x.terms() {
        out.accumulate(&trace_word(w), c);
    }
    out
}

pub fn cyclic_equivalence_check(u: &Word, v: &Word) -> bool {
    trace_word(u) == trace_word(v)
}

/// Numeric values for the moment basis.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Assignment {
    pub p: f64,
    pub q: f64,
    pub m: BTreeMap<u32, f64>,
}

pub fn eval(e: &MomentExpr, a: &Assignment) -> Result<f64, EvalError> {
    let f = |r: &Rational| r.to_f64().unwrap_or(f64::NAN);
    let mut acc = f(&e.unit) + f(&e.p) * a.p + f(&e.q) * a.q;
    for (k, c) in &e.m {
        let v = a.m.get(k).ok_or(EvalError::MissingMoment(*k))?;
        acc += f(c) * v;
    }
    Ok(acc)
}
