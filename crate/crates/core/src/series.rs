//! Truncated power series in `z` whose coefficients are polynomials in `w`,
//! over exact rationals.

use std::ops::{Add, Mul, Sub};

use num_traits::Zero;
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("divisor has constant term {0} in z, which is not a nonzero constant in w")]
    NonInvertibleConstantTerm(String),
}

/// Dense polynomial in `w`, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WPoly(Vec<Rational>);

impl WPoly {
    pub fn zero() -> Self {
        WPoly(Vec::new())
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = WPoly(coeffs);
        p.trim();
        p
    }

    /// `c·w^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.0.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// The value if this is a constant polynomial.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.0.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.0[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.0.iter().map(|x| x * c).collect())
    }
}

impl std::fmt::Display for WPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}*w"),
                _ => format!("{c}*w^{k}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Add for &WPoly {
    type Output = WPoly;

    fn add(self, rhs: &WPoly) -> WPoly {
        let n = self.0.len().max(rhs.0.len());
        WPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &WPoly {
    type Output = WPoly;

    fn sub(self, rhs: &WPoly) -> WPoly {
        let n = self.0.len().max(rhs.0.len());
        WPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &WPoly {
    type Output = WPoly;

    fn mul(self, rhs: &WPoly) -> WPoly {
        if self.is_zero() || rhs.is_zero() {
            return WPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        WPoly::from_coeffs(out)
    }
}

/// `Σ_{n ≤ order} c_n(w) z^n`, everything above `order` discarded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSeries {
    order: usize,
    coeffs: Vec<WPoly>,
}

impl BiSeries {
    pub fn zero(order: usize) -> Self {
        BiSeries { order, coeffs: vec![WPoly::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::term(order, 0, 0, Rational::from_integer(1.into()))
    }

    /// `c·z^n·w^k`, or zero if `n` exceeds the order.
    pub fn term(order: usize, n: usize, k: usize, c: Rational) -> Self {
        let mut s = Self::zero(order);
        if n <= order {
            s.coeffs[n] = WPoly::monomial(c, k);
        }
        s
    }

    /// Builds from `(n, k, coefficient)` triples.
    pub fn from_terms<I: IntoIterator<Item = (usize, usize, Rational)>>(order: usize, terms: I) -> Self {
        let mut s = Self::zero(order);
        for (n, k, c) in terms {
            s = &s + &Self::term(order, n, k, c);
        }
        s
    }

    /// `1 / (1 - z)` truncated.
    pub fn geometric(order: usize) -> Self {
        let mut s = Self::zero(order);
        for c in &mut s.coeffs {
            *c = WPoly::monomial(Rational::from_integer(1.into()), 0);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, n: usize) -> &WPoly {
        &self.coeffs[n]
    }

    pub fn scale(&self, c: &Rational) -> Self {
        BiSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Series quotient `self / divisor`. The divisor's `z^0` coefficient must
    /// be a nonzero constant so that each step divides by a scalar.
    pub fn div(&self, divisor: &BiSeries) -> Result<BiSeries, SeriesError> {
        let order = self.order.min(divisor.order);
        let lead = divisor.coeffs[0]
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| SeriesError::NonInvertibleConstantTerm(divisor.coeffs[0].to_string()))?;
        let inv = Rational::from_integer(1.into()) / lead;
        let mut q: Vec<WPoly> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coeffs[n].clone();
            for i in 1..=n {
                acc = &acc - &(&divisor.coeffs[i] * &q[n - i]);
            }
            q.push(acc.scale(&inv));
        }
        Ok(BiSeries { order, coeffs: q })
    }
}

impl Add for &BiSeries {
    type Output = BiSeries;

    fn add(self, rhs: &BiSeries) -> BiSeries {
        let order = self.order.min(rhs.order);
        BiSeries {
            order,
            coeffs: (0..=order).map(|n| &self.coeffs[n] + &rhs.coeffs[n]).collect(),
        }
    }
}

impl Sub for &BiSeries {
    type Output = BiSeries;

    fn sub(self, rhs: &BiSeries) -> BiSeries {
        let order = self.order.min(rhs.order);
        BiSeries {
            order,
            coeffs: (0..=order).map(|n| &self.coeffs[n] - &rhs.coeffs[n]).collect(),
        }
    }
}

impl Mul for &BiSeries {
    type Output = BiSeries;

    fn mul(self, rhs: &BiSeries) -> BiSeries {
        let order = self.order.min(rhs.order);
        let mut out = BiSeries::zero(order);
        for n in 0..=order {
            let mut acc = WPoly::zero();
            for i in 0..=n {
                acc = &acc + &(&self.coeffs[i] * &rhs.coeffs[n - i]);
            }
            out.coeffs[n] = acc;
        }
        out
    }
}
