//! Noncommutative polynomials in two idempotents `P` and `Q`.
//!
//! Modulo `P² = P` and `Q² = Q` every monomial collapses to an alternating
//! word, so a word is fully described by its first letter and its length.
//! Polynomials are finite maps from such words to exact rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{abs_string, int, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid character {found:?} at position {position} (expected P or Q)")]
    InvalidLetter { position: usize, found: char },
    #[error("malformed term {term:?} at position {position}")]
    MalformedTerm { position: usize, term: String },
    #[error("empty expression")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    P,
    Q,
}

impl Letter {
    pub fn other(self) -> Letter {
        match self {
            Letter::P => Letter::Q,
            Letter::Q => Letter::P,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::P => 'P',
            Letter::Q => 'Q',
        }
    }
}

/// An alternating word in `P`, `Q`.
///
/// Field order gives the canonical ordering: the unit first, then by
/// length, `P` before `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    len: usize,
    first: Option<Letter>,
}

impl Word {
    pub const UNIT: Word = Word { len: 0, first: None };

    /// The alternating word of `len` letters starting at `first`.
    /// A zero length gives the unit whatever the letter.
    pub fn new(first: Letter, len: usize) -> Word {
        if len == 0 {
            Word::UNIT
        } else {
            Word { len, first: Some(first) }
        }
    }

    pub fn letter(l: Letter) -> Word {
        Word::new(l, 1)
    }

    pub fn is_unit(&self) -> bool {
        self.len == 0
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn first_letter(&self) -> Option<Letter> {
        self.first
    }

    pub fn last_letter(&self) -> Option<Letter> {
        self.first
            .map(|l| if self.len % 2 == 1 { l } else { l.other() })
    }

    /// Number of occurrences of `l`.
    pub fn count(&self, l: Letter) -> usize {
        match self.first {
            None => 0,
            Some(f) if f == l => self.len.div_ceil(2),
            Some(_) => self.len / 2,
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        let first = self.first;
        (0..self.len).map(move |i| {
            let f = first.expect("nonempty word has a first letter");
            if i % 2 == 0 {
                f
            } else {
                f.other()
            }
        })
    }

    /// The adjoint word (letters in reverse order).
    pub fn reverse(&self) -> Word {
        match self.last_letter() {
            None => Word::UNIT,
            Some(l) => Word::new(l, self.len),
        }
    }

    /// Normal form of the concatenation `self · other`.
    pub fn mul(&self, other: &Word) -> Word {
        match (self.last_letter(), other.first) {
            (None, _) => *other,
            (_, None) => *self,
            (Some(a), Some(b)) => {
                let len = if a == b {
                    self.len + other.len - 1
                } else {
                    self.len + other.len
                };
                Word::new(self.first.unwrap(), len)
            }
        }
    }
}

/// Collapses runs of equal letters; the empty string and `1` are the unit.
pub fn parse_word(text: &str) -> Result<Word, ParseError> {
    if text == "1" {
        return Ok(Word::UNIT);
    }
    let mut word = Word::UNIT;
    for (position, ch) in text.chars().enumerate() {
        let l = match ch {
            'P' => Letter::P,
            'Q' => Letter::Q,
            found => return Err(ParseError::InvalidLetter { position, found }),
        };
        word = word.mul(&Word::letter(l));
    }
    Ok(word)
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("1");
        }
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

/// Element of the free algebra on `P`, `Q` modulo `P² = P`, `Q² = Q`,
/// with exact rational coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, Rational>,
}

impl NCPoly {
    pub fn zero() -> NCPoly {
        NCPoly::default()
    }

    pub fn one() -> NCPoly {
        NCPoly::monomial(int(1), Word::UNIT)
    }

    pub fn monomial(coeff: Rational, word: Word) -> NCPoly {
        let mut p = NCPoly::zero();
        p.add_term(word, coeff);
        p
    }

    pub fn word(word: Word) -> NCPoly {
        NCPoly::monomial(int(1), word)
    }

    pub fn constant(c: Rational) -> NCPoly {
        NCPoly::monomial(c, Word::UNIT)
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Rational)>>(terms: I) -> NCPoly {
        let mut p = NCPoly::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, word: Word, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(word).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&word);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, word: &Word) -> Rational {
        self.terms.get(word).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Rational) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly {
            terms: self.terms.iter().map(|(w, x)| (*w, x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> NCPoly {
        let mut acc = NCPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Adjoint: reverses every word, keeps the (real) coefficients.
    pub fn reverse(&self) -> NCPoly {
        NCPoly::from_terms(self.terms.iter().map(|(w, c)| (w.reverse(), c.clone())))
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }
}

impl Add for &NCPoly {
    type Output = NCPoly;

    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, c.clone());
        }
        out
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;

    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, -c.clone());
        }
        out
    }
}

impl Mul for &NCPoly {
    type Output = NCPoly;

    fn mul(self, rhs: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.mul(v), a * b);
            }
        }
        out
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;

    fn neg(self) -> NCPoly {
        NCPoly {
            terms: self.terms.iter().map(|(w, c)| (*w, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for NCPoly {
            type Output = NCPoly;
            fn $m(self, rhs: NCPoly) -> NCPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&NCPoly> for NCPoly {
            type Output = NCPoly;
            fn $m(self, rhs: &NCPoly) -> NCPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<NCPoly> for &NCPoly {
            type Output = NCPoly;
            fn $m(self, rhs: NCPoly) -> NCPoly {
                self.$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for NCPoly {
    type Output = NCPoly;

    fn neg(self) -> NCPoly {
        -&self
    }
}

/// `coeff*WORD` terms joined by ` + ` / ` - `; the unit word prints as `1`.
impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write!(f, "{}*{}", abs_string(c), w)?;
        }
        Ok(())
    }
}

/// Parses the text form written by `Display`, and also accepts bare words
/// (`P + QPQ`), bare constants and a leading sign.
impl FromStr for NCPoly {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut poly = NCPoly::zero();
        let mut seen = false;
        let mut start = 0usize;
        let mut sign = int(1);
        let chars: Vec<char> = s.chars().collect();
        let mut i = 0usize;
        let flush = |poly: &mut NCPoly, from: usize, to: usize, sign: &Rational| {
            let raw: String = chars[from..to].iter().collect();
            let term = raw.trim();
            let malformed = || ParseError::MalformedTerm {
                position: from,
                term: term.to_string(),
            };
            if term.is_empty() {
                return Err(malformed());
            }
            let (coeff, word) = match term.split_once('*') {
                Some((c, w)) => (parse_rational(c).ok_or_else(malformed)?, w.trim()),
                None => match parse_rational(term) {
                    Some(c) => (c, "1"),
                    None => (int(1), term),
                },
            };
            let word = if word == "1" {
                Word::UNIT
            } else {
                parse_word(word).map_err(|e| match e {
                    ParseError::InvalidLetter { position, found } => ParseError::InvalidLetter {
                        position: position + from + raw.find(word).unwrap_or(0),
                        found,
                    },
                    other => other,
                })?
            };
            poly.add_term(word, coeff * sign);
            Ok(())
        };
        while i < chars.len() {
            let c = chars[i];
            if c == '+' || c == '-' {
                let pending: String = chars[start..i].iter().collect();
                if !pending.trim().is_empty() {
                    flush(&mut poly, start, i, &sign)?;
                    seen = true;
                    sign = int(1);
                } else if seen {
                    return Err(ParseError::MalformedTerm {
                        position: i,
                        term: c.to_string(),
                    });
                }
                if c == '-' {
                    sign = -sign;
                }
                start = i + 1;
            }
            i += 1;
        }
        let tail: String = chars[start..].iter().collect();
        if tail.trim().is_empty() {
            if !seen && start == 0 {
                return Err(ParseError::Empty);
            }
            return Err(ParseError::MalformedTerm {
                position: start,
                term: String::new(),
            });
        }
        flush(&mut poly, start, chars.len(), &sign)?;
        Ok(poly)
    }
}

pub fn proj_p() -> NCPoly {
    NCPoly::word(Word::letter(Letter::P))
}

pub fn proj_q() -> NCPoly {
    NCPoly::word(Word::letter(Letter::Q))
}

/// `R = 2P - 1`.
pub fn sym_r() -> NCPoly {
    proj_p().scale(&int(2)) - NCPoly::one()
}

/// `S = 2Q - 1`.
pub fn sym_s() -> NCPoly {
    proj_q().scale(&int(2)) - NCPoly::one()
}

/// `A = P - Q`.
pub fn kato_a() -> NCPoly {
    proj_p() - proj_q()
}

/// `B = 1 - P - Q`.
pub fn kato_b() -> NCPoly {
    NCPoly::one() - proj_p() - proj_q()
}

/// `D = PQ - QP`. The self-adjoint commutator is `C = iD`, so `C² = -D²`.
pub fn comm_skew() -> NCPoly {
    NCPoly::word(Word::new(Letter::P, 2)) - NCPoly::word(Word::new(Letter::Q, 2))
}

pub fn complement(x: &NCPoly) -> NCPoly {
    NCPoly::one() - x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn poly(s: &str) -> NCPoly {
        s.parse().unwrap()
    }

    #[test]
    fn parse_collapses_runs() {
        assert_eq!(w("PP"), Word::new(Letter::P, 1));
        assert_eq!(w("PQQP"), Word::new(Letter::P, 3));
        assert_eq!(w(""), Word::UNIT);
        assert_eq!(w("QQQPQ"), Word::new(Letter::Q, 3));
        assert_eq!(w("PQQP").to_string(), "PQP");
    }

    #[test]
    fn parse_reports_position() {
        assert_eq!(
            parse_word("PQxP"),
            Err(ParseError::InvalidLetter { position: 2, found: 'x' })
        );
        assert!(parse_word("pq").is_err());
    }

    #[test]
    fn seam_collapse() {
        assert_eq!(w("PQ").mul(&w("QP")), Word::new(Letter::P, 3));
        assert_eq!(w("P").mul(&w("P")), w("P"));
        assert_eq!(w("PQ").mul(&w("PQ")), Word::new(Letter::P, 4));
        assert_eq!(Word::UNIT.mul(&w("QP")), w("QP"));
    }

    #[test]
    fn counts_and_reverse() {
        let x = w("QPQPQ");
        assert_eq!(x.count(Letter::Q), 3);
        assert_eq!(x.count(Letter::P), 2);
        assert_eq!(w("PQ").reverse(), w("QP"));
        assert_eq!(w("PQP").reverse(), w("PQP"));
        assert_eq!(Word::UNIT.reverse(), Word::UNIT);
    }

    #[test]
    fn canonical_order() {
        let mut words = [w("QP"), w("P"), w(""), w("PQ"), w("Q")];
        words.sort();
        let rendered: Vec<String> = words.iter().map(|x| x.to_string()).collect();
        assert_eq!(rendered, ["1", "P", "Q", "PQ", "QP"]);
    }

    #[test]
    fn idempotent_sum_square() {
        let s = proj_p() + proj_q();
        assert_eq!(&s * &s, poly("P + Q + PQ + QP"));
    }

    #[test]
    fn symmetries_are_involutions() {
        assert_eq!(sym_r().pow(2), NCPoly::one());
        assert_eq!(sym_s().pow(2), NCPoly::one());
        let one = NCPoly::one();
        assert!(((&one + sym_s()) * (&one - sym_s())).is_zero());
    }

    #[test]
    fn p_plus_qpq_powers() {
        let x = poly("P + QPQ");
        assert_eq!(x.pow(0), NCPoly::one());
        assert_eq!(x.pow(2), poly("P + PQPQ + QPQP + QPQPQ"));
        assert_eq!(
            x.pow(3),
            poly("P + PQPQ + QPQP + PQPQP + PQPQPQ + QPQPQP + 2*QPQPQPQ")
        );
        // P + (PQ)^2 + (QP)^2 + 2P(QP)^2 + P(QP)^3 + (PQ)^3 + (QP)^3
        //   + Q(PQ)^3 + 2(PQ)^4 + 2(QP)^4 + 3Q(PQ)^4
        assert_eq!(
            x.pow(4),
            poly(
                "P + PQPQ + QPQP + 2*PQPQP + PQPQPQP + PQPQPQ + QPQPQP + QPQPQPQ \
                 + 2*PQPQPQPQ + 2*QPQPQPQP + 3*QPQPQPQPQ"
            )
        );
    }

    #[test]
    fn builders() {
        assert_eq!(sym_r(), poly("2*P - 1"));
        assert_eq!(kato_b(), poly("1 - P - Q"));
        assert_eq!(comm_skew(), poly("PQ - QP"));
    }

    #[test]
    fn kato_relations() {
        let (a, b) = (kato_a(), kato_b());
        assert_eq!(&a * &a + &b * &b, NCPoly::one());
        assert!((&a * &b + &b * &a).is_zero());
        let b2 = &b * &b;
        assert_eq!(&b2 * proj_p(), proj_p() * &b2);
    }

    #[test]
    fn display_round_trip() {
        let p = poly("-1/2*1 + 3*PQ - QPQ");
        assert_eq!(p.to_string(), "-1/2*1 + 3*PQ - 1*QPQ");
        assert_eq!(p.to_string().parse::<NCPoly>().unwrap(), p);
        assert_eq!(NCPoly::zero().to_string(), "0");
    }

    #[test]
    fn expression_errors() {
        assert_eq!("".parse::<NCPoly>(), Err(ParseError::Empty));
        assert!("P +".parse::<NCPoly>().is_err());
        assert!("P ++ Q".parse::<NCPoly>().is_err());
        assert!(matches!(
            "P + PXQ".parse::<NCPoly>(),
            Err(ParseError::InvalidLetter { position: 5, found: 'X' })
        ));
        assert_eq!("-P".parse::<NCPoly>().unwrap(), -proj_p());
    }
}
