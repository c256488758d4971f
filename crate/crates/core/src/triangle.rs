//! The coefficient triangle of `τ[(P+QPQ)^n] = τ(P) + Σ_k f(n,k) m_k`.
//!
//! `f` is computed three ways: by expanding `(P+QPQ)^n` in the word algebra
//! (which also yields the word multiplicities `a, b, c, d` of `P(QP)^k`,
//! `Q(PQ)^k`, `(PQ)^k`, `(QP)^k`), by the closed-form and four-term
//! recurrences for `f` alone, and by the coupled recurrences for `a, b, c, d`
//! seeded at `n = 2`. The word "cardinalities" in the original statement are
//! read as these multiplicities; the displayed expansions force that reading
//! (e.g. the coefficient 2 on `P(QP)^2` at `n = 4`).
//!
//! All tables return 0 outside their ranges: `f` on `1 ≤ k ≤ n`, `a` on
//! `0 ≤ k ≤ n-1`, `b` on `1 ≤ k ≤ n`, `c` and `d` on `2 ≤ k ≤ n`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::ncword::{Letter, NCPoly, Word};
use crate::rational::{binomial, frac_string, Rational};
use crate::series::{BiSeries, WPoly};
use crate::trace::trace;

pub const DEFAULT_ORDER: usize = 20;
pub const GOLDEN_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangleError {
    #[error("order {got} is below the minimum {min}")]
    OrderTooSmall { min: usize, got: usize },
    #[error("{0} tables carry no a/b/c/d counts")]
    MissingCounts(Method),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Recurrence,
    Abcd,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Recurrence => "recurrence",
            Method::Abcd => "abcd",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "direct" => Ok(Method::Direct),
            "recurrence" => Ok(Method::Recurrence),
            "abcd" => Ok(Method::Abcd),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

/// Dense integer table indexed `(n, k)` for `0 ≤ n, k ≤ order + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    rows: Vec<Vec<BigInt>>,
}

impl Table {
    fn new(order: usize) -> Self {
        Table { rows: vec![vec![BigInt::zero(); order + 2]; order + 1] }
    }

    /// Entry at `(n, k)`, zero when outside the stored range.
    pub fn get(&self, n: i64, k: i64) -> BigInt {
        if n < 0 || k < 0 {
            return BigInt::zero();
        }
        self.rows
            .get(n as usize)
            .and_then(|r| r.get(k as usize))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    fn set(&mut self, n: usize, k: usize, v: BigInt) {
        self.rows[n][k] = v;
    }

    pub fn order(&self) -> usize {
        self.rows.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts {
    pub a: Table,
    pub b: Table,
    pub c: Table,
    pub d: Table,
}

impl Counts {
    fn new(order: usize) -> Self {
        Counts {
            a: Table::new(order),
            b: Table::new(order),
            c: Table::new(order),
            d: Table::new(order),
        }
    }

    fn sum(&self, n: i64, k: i64) -> BigInt {
        self.a.get(n, k) + self.b.get(n, k) + self.c.get(n, k) + self.d.get(n, k)
    }
}

#[derive(Debug, Clone)]
pub struct FnkTables {
    pub order: usize,
    pub method: Method,
    pub f: Table,
    pub counts: Option<Counts>,
}

impl FnkTables {
    pub fn f(&self, n: usize, k: usize) -> BigInt {
        self.f.get(n as i64, k as i64)
    }

    pub fn counts(&self) -> Result<&Counts, TriangleError> {
        self.counts.as_ref().ok_or(TriangleError::MissingCounts(self.method))
    }
}

fn require(order: usize, min: usize) -> Result<(), TriangleError> {
    if order < min {
        return Err(TriangleError::OrderTooSmall { min, got: order });
    }
    Ok(())
}

fn big(n: usize) -> BigInt {
    BigInt::from(n)
}

fn to_int(r: &Rational) -> BigInt {
    assert!(r.is_integer(), "non-integer coefficient {r}");
    r.to_integer()
}

fn count_words(x: &NCPoly, n: usize, counts: &mut Counts) {
    for k in 0..=n {
        counts.a.set(n, k, to_int(&x.coeff(&Word::new(Letter::P, 2 * k + 1))));
        counts.b.set(n, k, to_int(&x.coeff(&Word::new(Letter::Q, 2 * k + 1))));
        if k >= 1 {
            counts.c.set(n, k, to_int(&x.coeff(&Word::new(Letter::P, 2 * k))));
            counts.d.set(n, k, to_int(&x.coeff(&Word::new(Letter::Q, 2 * k))));
        }
    }
}

pub fn p_plus_qpq() -> NCPoly {
    NCPoly::word(Word::letter(Letter::P)) + NCPoly::word(Word::new(Letter::Q, 3))
}

/// Expands `(P+QPQ)^n` for `1 ≤ n ≤ order` and reads off `f, a, b, c, d`.
pub fn fnk_direct(order: usize) -> Result<FnkTables, TriangleError> {
    require(order, 2)?;
    let x = p_plus_qpq();
    let mut f = Table::new(order);
    let mut counts = Counts::new(order);
    let mut power = NCPoly::one();
    for n in 1..=order {
        power = &power * &x;
        count_words(&power, n, &mut counts);
        let t = trace(&power);
        for (k, c) in t.m_terms() {
            f.set(n, k as usize, to_int(c));
        }
        if n >= 2 {
            assert!(t.p_coeff().is_one(), "p-coefficient of trace at n={n}");
            assert!(t.q_coeff().is_zero() && t.unit_coeff().is_zero(), "trace at n={n}");
            assert!(
                t.m_terms().all(|(k, _)| (2..=n as u32).contains(&k)),
                "moment range at n={n}"
            );
        }
    }
    Ok(FnkTables { order, method: Method::Direct, f, counts: Some(counts) })
}

/// `f` from the diagonal Lucas recurrence, `f(n,2) = n + δ_{n2}`, and the
/// four-term recurrence `f(n,k) = f(n-1,k-1) + f(n-1,k) - f(n-2,k-1) + f(n-2,k-2)`
/// for `3 ≤ k ≤ n-1`, with `f(1,1) = 1` and `f(m,1) = 0` for `m ≥ 2`.
pub fn fnk_recurrence(order: usize) -> Result<FnkTables, TriangleError> {
    require(order, 2)?;
    let mut f = Table::new(order);
    f.set(1, 1, BigInt::one());
    f.set(2, 2, big(3));
    for n in 3..=order {
        let diag = f.get(n as i64 - 1, n as i64 - 1) + f.get(n as i64 - 2, n as i64 - 2);
        f.set(n, n, diag);
        f.set(n, 2, big(n));
        for k in 3..n {
            let (n, k) = (n as i64, k as i64);
            let v = f.get(n - 1, k - 1) + f.get(n - 1, k) - f.get(n - 2, k - 1)
                + f.get(n - 2, k - 2);
            f.set(n as usize, k as usize, v);
        }
    }
    Ok(FnkTables { order, method: Method::Recurrence, f, counts: None })
}

/// The single recurrence valid on all of `2 ≤ k ≤ n`, using the boundary
/// values `f(m,0) = 1`, `f(m,1) = 0` (m ≥ 2), `f(1,1) = 1`.
pub fn unified_recurrence(order: usize) -> Result<Table, TriangleError> {
    require(order, 2)?;
    let mut f = Table::new(order);
    for m in 1..=order {
        f.set(m, 0, BigInt::one());
    }
    f.set(1, 1, BigInt::one());
    f.set(2, 2, big(3));
    for n in 3..=order {
        for k in 2..=n {
            let (n, k) = (n as i64, k as i64);
            let v = f.get(n - 1, k) + f.get(n - 1, k - 1) - f.get(n - 2, k - 1)
                + f.get(n - 2, k - 2);
            f.set(n as usize, k as usize, v);
        }
    }
    // the f(m,0) entries are boundary conventions, not coefficients
    for m in 1..=order {
        f.set(m, 0, BigInt::zero());
    }
    Ok(f)
}

/// Coupled recurrences for the word multiplicities, seeded from the full
/// expansion of `(P+QPQ)^2`:
///
/// ```text
/// a(n,k) = a(n-1,k) + d(n-1,k)        b(n,k) = b(n-1,k-1) + c(n-1,k-1)
/// c(n,k) = c(n-1,k) + b(n-1,k-1)      d(n,k) = d(n-1,k-1) + a(n-1,k-2)
/// ```
pub fn abcd_recurrence(order: usize) -> Result<FnkTables, TriangleError> {
    require(order, 2)?;
    let mut counts = Counts::new(order);
    count_words(&p_plus_qpq().pow(2), 2, &mut counts);
    for n in 3..=order {
        let m = n as i64 - 1;
        for k in 0..=n {
            let kk = k as i64;
            counts.a.set(n, k, counts.a.get(m, kk) + counts.d.get(m, kk));
            counts.b.set(n, k, counts.b.get(m, kk - 1) + counts.c.get(m, kk - 1));
            counts.c.set(n, k, counts.c.get(m, kk) + counts.b.get(m, kk - 1));
            counts.d.set(n, k, counts.d.get(m, kk - 1) + counts.a.get(m, kk - 2));
        }
    }
    let mut f = Table::new(order);
    for n in 2..=order {
        for k in 1..=n {
            f.set(n, k, counts.sum(n as i64, k as i64));
        }
    }
    Ok(FnkTables { order, method: Method::Abcd, f, counts: Some(counts) })
}

/// One exact integer equality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub relation: &'static str,
    pub n: usize,
    pub k: usize,
    #[serde(serialize_with = "ser_big")]
    pub lhs: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub rhs: BigInt,
    pub holds: bool,
}

fn ser_big<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl CheckLine {
    fn new(relation: &'static str, n: usize, k: usize, lhs: BigInt, rhs: BigInt) -> Self {
        let holds = lhs == rhs;
        CheckLine { relation, n, k, lhs, rhs, holds }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CheckReport {
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    pub fn all_hold(&self) -> bool {
        self.lines.iter().all(|l| l.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckLine> {
        self.lines.iter().filter(|l| !l.holds)
    }

    pub fn relation(&self, name: &str) -> impl Iterator<Item = &CheckLine> {
        let name = name.to_string();
        self.lines.iter().filter(move |l| l.relation == name)
    }

    fn push(&mut self, line: CheckLine) {
        self.lines.push(line);
    }
}

/// `a(n+1,k) + b(n+1,k+1) = f(n,k)` for `2 ≤ k ≤ n ≤ order - 1`.
pub fn relation_f_check(t: &FnkTables) -> Result<CheckReport, TriangleError> {
    let c = t.counts()?;
    let mut rep = CheckReport::default();
    for n in 2..t.order {
        for k in 2..=n {
            let (ni, ki) = (n as i64, k as i64);
            let lhs = c.a.get(ni + 1, ki) + c.b.get(ni + 1, ki + 1);
            rep.push(CheckLine::new("relation_f", n, k, lhs, t.f(n, k)));
        }
    }
    Ok(rep)
}

/// The four identities linking `f` at consecutive orders through the word
/// counts. The `k = 2` case is checked both in the shifted form
/// `f(n,2) = f(n-1,2) - b(n-1,2) + 1` and as `f(n+1,2) = f(n,2) - b(n,2) + 1`.
pub fn lemma_sys_check(t: &FnkTables) -> Result<CheckReport, TriangleError> {
    let c = t.counts()?;
    let f = |n: i64, k: i64| t.f.get(n, k);
    let mut rep = CheckReport::default();
    for n in 2..=t.order {
        let ni = n as i64;
        let rhs = f(ni - 1, ni - 1) + c.a.get(ni - 1, ni - 2) + c.b.get(ni - 1, ni - 1);
        rep.push(CheckLine::new("lemma_diag", n, n, f(ni, ni), rhs));
    }
    for n in 3..=t.order {
        let ni = n as i64;
        let rhs = f(ni - 1, 2) - c.b.get(ni - 1, 2) + 1;
        rep.push(CheckLine::new("lemma_k2", n, 2, f(ni, 2), rhs));
    }
    for n in 2..t.order {
        let ni = n as i64;
        let rhs = f(ni, 2) - c.b.get(ni, 2) + 1;
        rep.push(CheckLine::new("lemma_k2_proof_form", n + 1, 2, f(ni + 1, 2), rhs));
    }
    for n in 4..=t.order {
        let ni = n as i64;
        let rhs = f(ni - 1, 2) + f(ni - 1, 3) - c.b.get(ni - 1, 3) - c.a.get(ni - 1, 2)
            + c.b.get(ni - 1, 2);
        rep.push(CheckLine::new("lemma_k3", n, 3, f(ni, 3), rhs));
    }
    for n in 5..=t.order {
        for k in 4..n {
            let (ni, ki) = (n as i64, k as i64);
            let rhs = f(ni - 1, ki - 1) + f(ni - 1, ki) - c.b.get(ni - 1, ki)
                - c.a.get(ni - 1, ki - 1)
                + c.a.get(ni - 1, ki - 2)
                + c.b.get(ni - 1, ki - 1);
            rep.push(CheckLine::new("lemma_interior", n, k, f(ni, ki), rhs));
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone, Serialize)]
pub struct GoldenLine {
    pub n: usize,
    pub exact: String,
    pub approx: f64,
    pub rel_err: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormReport {
    pub exact: CheckReport,
    pub golden: Vec<GoldenLine>,
}

impl ClosedFormReport {
    pub fn all_hold(&self) -> bool {
        self.exact.all_hold() && self.golden.iter().all(|g| g.holds)
    }
}

fn delta(a: usize, b: usize) -> usize {
    usize::from(a == b)
}

/// Lucas numbers `L_1 = 1`, `L_2 = 3`, indices `0..=order` (`L_0` unused).
pub fn lucas(order: usize) -> Vec<BigInt> {
    let mut l = vec![BigInt::zero(), BigInt::one(), big(3)];
    while l.len() <= order {
        let next = &l[l.len() - 1] + &l[l.len() - 2];
        l.push(next);
    }
    l.truncate(order + 1);
    l
}

/// Closed forms for the first columns and the diagonal:
/// `f(n,2) = n + δ_{n2}`, `f(n,3) = n + δ_{n3}`, `f(n,4) = C(n,2) + δ_{n4}`,
/// `f(n,5) = n² - 4n + 6`, `f(n,n) = L_n`, and `L_n = φ^n + ψ^n` in floating
/// point.
pub fn closed_forms_check(t: &FnkTables) -> Result<ClosedFormReport, TriangleError> {
    require(t.order, 5)?;
    let mut rep = CheckReport::default();
    for n in 2..=t.order {
        rep.push(CheckLine::new("f_n2", n, 2, t.f(n, 2), big(n + delta(n, 2))));
    }
    for n in 3..=t.order {
        rep.push(CheckLine::new("f_n3", n, 3, t.f(n, 3), big(n + delta(n, 3))));
    }
    for n in 4..=t.order {
        let rhs = binomial(n as u32, 2) + big(delta(n, 4));
        rep.push(CheckLine::new("f_n4", n, 4, t.f(n, 4), rhs));
    }
    for n in 5..=t.order {
        let rhs = BigInt::from(n * n) - big(4 * n) + 6;
        rep.push(CheckLine::new("f_n5", n, 5, t.f(n, 5), rhs));
    }
    let l = lucas(t.order);
    for n in 1..=t.order {
        rep.push(CheckLine::new("f_nn_lucas", n, n, t.f(n, n), l[n].clone()));
    }
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let psi = (1.0 - 5f64.sqrt()) / 2.0;
    let golden = (1..=t.order)
        .map(|n| {
            let exact = t.f(n, n);
            let e = exact.to_f64().unwrap_or(f64::NAN);
            let approx = phi.powi(n as i32) + psi.powi(n as i32);
            let rel_err = ((approx - e) / e).abs();
            GoldenLine {
                n,
                exact: exact.to_string(),
                approx,
                rel_err,
                holds: rel_err <= GOLDEN_TOLERANCE,
            }
        })
        .collect();
    Ok(ClosedFormReport { exact: rep, golden })
}

/// A row of the cross-method table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRow {
    pub n: usize,
    pub k: usize,
    pub f_direct: BigInt,
    pub f_recurrence: BigInt,
    pub f_abcd: BigInt,
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl ComparisonRow {
    pub fn matches(&self) -> bool {
        self.f_direct == self.f_recurrence && self.f_direct == self.f_abcd
    }
}

/// `f` from all three methods side by side for `2 ≤ k ≤ n ≤ order`, with
/// the direct word counts.
pub fn compare_methods(order: usize) -> Result<Vec<ComparisonRow>, TriangleError> {
    let direct = fnk_direct(order)?;
    let rec = fnk_recurrence(order)?;
    let abcd = abcd_recurrence(order)?;
    let c = direct.counts()?;
    let mut rows = Vec::new();
    for n in 2..=order {
        for k in 2..=n {
            let (ni, ki) = (n as i64, k as i64);
            rows.push(ComparisonRow {
                n,
                k,
                f_direct: direct.f(n, k),
                f_recurrence: rec.f(n, k),
                f_abcd: abcd.f(n, k),
                a: c.a.get(ni, ki),
                b: c.b.get(ni, ki),
                c: c.c.get(ni, ki),
                d: c.d.get(ni, ki),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct GenfunCoefficient {
    pub n: usize,
    pub k: usize,
    pub series: String,
    pub triangle: String,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GenfunReport {
    pub order: usize,
    pub divisor_constant_term: String,
    /// `G · divisor` reproduces the right-hand side through `z^order`.
    pub self_consistent: bool,
    pub mismatches: usize,
    pub coefficients: Vec<GenfunCoefficient>,
}

/// `1 - z - zw + z²w - z²w²`
pub fn genfun_divisor(order: usize) -> BiSeries {
    BiSeries::from_terms(
        order,
        [
            (0, 0, Rational::from_integer(1.into())),
            (1, 0, Rational::from_integer((-1).into())),
            (1, 1, Rational::from_integer((-1).into())),
            (2, 1, Rational::from_integer(1.into())),
            (2, 2, Rational::from_integer((-1).into())),
        ],
    )
}

/// `3z³w²(1 - z + zw) + z³w²(3 - 2z)/(1 - z)`
pub fn genfun_numerator(order: usize) -> BiSeries {
    let r = |x: i64| Rational::from_integer(x.into());
    let first = BiSeries::from_terms(order, [(3, 2, r(3)), (4, 2, r(-3)), (4, 3, r(3))]);
    let second = BiSeries::from_terms(order, [(3, 2, r(3)), (4, 2, r(-2))]);
    &first + &(&second * &BiSeries::geometric(order))
}

/// Expands the printed generating-function identity as a series and
/// compares it coefficient by coefficient with `Σ_{n≥3} Σ_{2≤k≤n} f(n,k) z^n w^k`.
/// Disagreements are reported, not corrected.
pub fn genfun_compare(t: &FnkTables) -> Result<GenfunReport, TriangleError> {
    require(t.order, 3)?;
    let order = t.order;
    let divisor = genfun_divisor(order);
    let numerator = genfun_numerator(order);
    let lead = divisor.coeff(0).as_constant().expect("constant lead");
    let g = numerator
        .div(&divisor)
        .expect("divisor has constant term 1 in z");
    let self_consistent = &g * &divisor == numerator;
    let mut coefficients = Vec::new();
    for n in 0..=order {
        let cn: &WPoly = g.coeff(n);
        let kmax = cn.degree().unwrap_or(0).max(n);
        for k in 0..=kmax {
            let triangle = if n >= 3 && (2..=n).contains(&k) {
                t.f(n, k)
            } else {
                BigInt::zero()
            };
            let series = cn.coeff(k);
            let matches = series == Rational::from_integer(triangle.clone());
            coefficients.push(GenfunCoefficient {
                n,
                k,
                series: frac_string(&series),
                triangle: triangle.to_string(),
                matches,
            });
        }
    }
    let mismatches = coefficients.iter().filter(|c| !c.matches).count();
    Ok(GenfunReport {
        order,
        divisor_constant_term: frac_string(&lead),
        self_consistent,
        mismatches,
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn direct_small_orders() {
        let t = fnk_direct(5).unwrap();
        let c = t.counts().unwrap();
        assert_eq!(t.f(2, 2), i(3));
        assert_eq!((c.b.get(2, 2), c.c.get(2, 2), c.d.get(2, 2)), (i(1), i(1), i(1)));
        assert_eq!(c.a.get(2, 2), i(0));
        assert_eq!(c.a.get(2, 0), i(1));
        assert_eq!(c.b.get(2, 1), i(0));
        // (P+QPQ)^4
        assert_eq!((c.a.get(4, 2), c.a.get(4, 3)), (i(2), i(1)));
        assert_eq!((c.b.get(4, 3), c.b.get(4, 4)), (i(1), i(3)));
        assert_eq!((c.c.get(4, 3), c.c.get(4, 4)), (i(1), i(2)));
        assert_eq!((c.d.get(4, 3), c.d.get(4, 4)), (i(1), i(2)));
        assert_eq!((t.f(4, 2), t.f(4, 3), t.f(4, 4)), (i(4), i(4), i(7)));
        assert_eq!(t.f(5, 5), i(11));
        assert_eq!(t.f(1, 1), i(1));
        assert_eq!(t.f(3, 1), i(0));
    }

    #[test]
    fn recurrence_values() {
        let t = fnk_recurrence(6).unwrap();
        assert_eq!(t.f(4, 3), i(4));
        assert_eq!(t.f(6, 6), i(18));
        for n in 3..=6 {
            assert_eq!(t.f(n, 2), BigInt::from(n));
        }
        assert_eq!(t.f(2, 2), i(3));
    }

    #[test]
    fn abcd_values() {
        let t = abcd_recurrence(5).unwrap();
        let c = t.counts().unwrap();
        assert_eq!(c.a.get(3, 2), i(1));
        assert_eq!(c.b.get(4, 4), i(3));
        assert_eq!(c.a.get(5, 2) + c.b.get(5, 3), fnk_direct(5).unwrap().f(4, 2));
    }

    #[test]
    fn methods_agree() {
        let rows = compare_methods(14).unwrap();
        assert!(rows.iter().all(ComparisonRow::matches));
        let unified = unified_recurrence(14).unwrap();
        let direct = fnk_direct(14).unwrap();
        for n in 2..=14i64 {
            for k in 2..=n {
                assert_eq!(unified.get(n, k), direct.f.get(n, k), "({n},{k})");
            }
        }
    }

    #[test]
    fn lemma_spot_values() {
        let t = fnk_direct(6).unwrap();
        let rep = lemma_sys_check(&t).unwrap();
        assert!(rep.all_hold());
        let diag3 = rep.relation("lemma_diag").find(|l| l.n == 3).unwrap();
        assert_eq!((diag3.lhs.clone(), diag3.rhs.clone()), (i(4), i(4)));
        let k2 = rep.relation("lemma_k2").find(|l| l.n == 4).unwrap();
        assert_eq!(k2.lhs, i(4));
        assert!(rep.relation("lemma_interior").any(|l| l.n == 5 && l.k == 4));
        assert!(relation_f_check(&t).unwrap().all_hold());
    }

    #[test]
    fn closed_form_spot_values() {
        let t = fnk_direct(6).unwrap();
        let rep = closed_forms_check(&t).unwrap();
        assert!(rep.all_hold(), "{:?}", rep.exact.failures().collect::<Vec<_>>());
        assert_eq!(t.f(5, 4), i(10));
        assert_eq!(lucas(5)[5], i(11));
        assert_eq!(lucas(4)[4], i(7));
    }

    #[test]
    fn fifth_column_quadratic_breaks_at_seven() {
        // the f(n,5) quadratic agrees at n = 5, 6 only; the three methods agree
        // on f(7,5) = 28
        let t = fnk_direct(8).unwrap();
        let rep = closed_forms_check(&t).unwrap();
        let bad: Vec<usize> = rep.exact.failures().map(|l| l.n).collect();
        assert_eq!(bad, vec![7, 8]);
        assert_eq!(t.f(7, 5), i(28));
        assert_eq!(fnk_recurrence(8).unwrap().f(7, 5), i(28));
    }

    #[test]
    fn genfun_low_order() {
        let t = fnk_direct(6).unwrap();
        let rep = genfun_compare(&t).unwrap();
        assert_eq!(rep.divisor_constant_term, "1/1");
        assert!(rep.self_consistent);
        let at = |n, k| rep.coefficients.iter().find(|c| c.n == n && c.k == k).unwrap();
        // series expansion of the printed right-hand side over the divisor
        assert_eq!(at(3, 2).series, "6/1");
        assert_eq!(at(3, 2).triangle, "3");
        assert!(!at(3, 2).matches);
        assert_eq!(at(3, 3).series, "0/1");
        assert!(!at(3, 3).matches);
        assert!(at(4, 2).matches);
        assert!(rep.mismatches > 0);
    }

    #[test]
    fn order_guard() {
        assert_eq!(
            fnk_direct(1).unwrap_err(),
            TriangleError::OrderTooSmall { min: 2, got: 1 }
        );
        let t = fnk_recurrence(4).unwrap();
        assert!(matches!(lemma_sys_check(&t), Err(TriangleError::MissingCounts(_))));
    }
}
