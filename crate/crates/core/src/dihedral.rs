//! Group algebra of the infinite dihedral group generated by two involutions.
//!
//! With `r = RS`, every element is `r^k` or `r^k·R` for a unique integer
//! `k`; `R r R = r⁻¹` and `S = r⁻¹·R`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use crate::ncword::{sym_r, sym_s, NCPoly};
use crate::rational::{from_big, int, pascal_row, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DihedralElem {
    pub reflection: bool,
    pub k: i64,
}

impl DihedralElem {
    pub const UNIT: DihedralElem = DihedralElem { reflection: false, k: 0 };
    pub const R: DihedralElem = DihedralElem { reflection: true, k: 0 };
    pub const S: DihedralElem = DihedralElem { reflection: true, k: -1 };

    /// `(RS)^k`; negative `k` gives `(SR)^-k`.
    pub fn rotation(k: i64) -> DihedralElem {
        DihedralElem { reflection: false, k }
    }

    pub fn mul(self, other: DihedralElem) -> DihedralElem {
        // r^a R^e · r^b R^f = r^(a ± b) R^(e+f), with the sign flipped when e = 1
        let k = if self.reflection {
            self.k - other.k
        } else {
            self.k + other.k
        };
        DihedralElem {
            reflection: self.reflection ^ other.reflection,
            k,
        }
    }

    pub fn inverse(self) -> DihedralElem {
        if self.reflection {
            self
        } else {
            DihedralElem::rotation(-self.k)
        }
    }
}

impl fmt::Display for DihedralElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.k, self.reflection) {
            (0, false) => f.write_str("1"),
            (0, true) => f.write_str("R"),
            (k, false) => write!(f, "(RS)^{k}"),
            (k, true) => write!(f, "(RS)^{k}.R"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DihedralPoly {
    terms: BTreeMap<DihedralElem, Rational>,
}

impl DihedralPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::elem(DihedralElem::UNIT)
    }

    pub fn elem(e: DihedralElem) -> Self {
        let mut p = Self::zero();
        p.add_term(e, int(1));
        p
    }

    pub fn add_term(&mut self, e: DihedralElem, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: &DihedralElem) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DihedralElem, &Rational)> {
        self.terms.iter()
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

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Sum of all coefficients (image under the trivial character).
    pub fn mass(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |a, c| a + c)
    }

    pub fn has_rotations(&self) -> bool {
        self.terms.keys().any(|e| !e.reflection)
    }
}

impl Add for &DihedralPoly {
    type Output = DihedralPoly;

    fn add(self, rhs: &DihedralPoly) -> DihedralPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &DihedralPoly {
    type Output = DihedralPoly;

    fn sub(self, rhs: &DihedralPoly) -> DihedralPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &DihedralPoly {
    type Output = DihedralPoly;

    fn mul(self, rhs: &DihedralPoly) -> DihedralPoly {
        let mut out = DihedralPoly::zero();
        for (x, a) in &self.terms {
            for (y, b) in &rhs.terms {
                out.add_term(x.mul(*y), a * b);
            }
        }
        out
    }
}

impl fmt::Display for DihedralPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{e}")?;
        }
        Ok(())
    }
}

fn r_plus_s() -> DihedralPoly {
    &DihedralPoly::elem(DihedralElem::R) + &DihedralPoly::elem(DihedralElem::S)
}

/// `(R+S)^{2n}` by raw multiplication in the group algebra.
pub fn binomial_expand(n: u32) -> DihedralPoly {
    r_plus_s().pow(2 * n)
}

/// `C(2n,n)·1 + Σ_{k=1..n} C(2n,n-k)((RS)^k + (SR)^k)`.
pub fn binomial_closed_form(n: u32) -> DihedralPoly {
    let row = pascal_row(2 * n);
    let mut out = DihedralPoly::zero();
    out.add_term(DihedralElem::UNIT, from_big(&row[n as usize]));
    for k in 1..=n {
        let c = from_big(&row[(n - k) as usize]);
        out.add_term(DihedralElem::rotation(k as i64), c.clone());
        out.add_term(DihedralElem::rotation(-(k as i64)), c);
    }
    out
}

/// `(R+S)^{2n+1}`; supported on reflections only.
pub fn odd_expand(n: u32) -> DihedralPoly {
    r_plus_s().pow(2 * n + 1)
}

/// Image of a group element under `R ↦ 2P-1`, `S ↦ 2Q-1`.
pub fn elem_to_projection_poly(e: DihedralElem) -> NCPoly {
    let (r, s) = (sym_r(), sym_s());
    let rot = if e.k >= 0 {
        (&r * &s).pow(e.k as u32)
    } else {
        (&s * &r).pow(e.k.unsigned_abs() as u32)
    };
    if e.reflection {
        rot * r
    } else {
        rot
    }
}

pub fn to_projection_poly(x: &DihedralPoly) -> NCPoly {
    let mut out = NCPoly::zero();
    for (e, c) in x.terms() {
        out = out + elem_to_projection_poly(*e).scale(c);
    }
    out
}
