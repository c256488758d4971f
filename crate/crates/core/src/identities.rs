//! Registry of moment and operator identities for two projections.
//!
//! Each identity builds both sides exactly and reports `lhs - rhs`. Anything
//! that involves the self-adjoint commutator `C = i(PQ - QP)` is restated
//! through `D = PQ - QP` using `τ(C^{2j}) = (-1)^j τ(D^{2j})`.
//!
//! Entry 13, 16 and 17 group several related identities; each component can
//! also be verified on its own by name.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::ser::{Serialize, SerializeMap, SerializeStruct, Serializer};
use thiserror::Error;

use crate::dihedral::{binomial_closed_form, binomial_expand, DihedralPoly};
use crate::ncword::{comm_skew, complement, kato_a, kato_b, proj_p, proj_q, sym_r, sym_s, NCPoly};
use crate::rational::{frac_string, from_big, int, inv_pow2, pascal_row, Rational};
use crate::trace::{trace, MomentExpr};

pub const DEFAULT_CAP: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
    #[error("order {order} exceeds the configured cap {cap}")]
    OrderExceedsCap { order: u32, cap: u32 },
}

/// Difference of the two sides of an identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Residual {
    Moment(MomentExpr),
    Operator(NCPoly),
    Group(DihedralPoly),
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Moment(e) => e.is_zero(),
            Residual::Operator(p) => p.is_zero(),
            Residual::Group(g) => g.is_zero(),
        }
    }
}

impl std::fmt::Display for Residual {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Residual::Moment(e) => write!(f, "{e}"),
            Residual::Operator(p) => write!(f, "{p}"),
            Residual::Group(g) => write!(f, "{g}"),
        }
    }
}

impl Serialize for Residual {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Residual::Moment(e) => {
                let mut map = s.serialize_map(Some(1))?;
                map.serialize_entry("moment", e)?;
                map.end()
            }
            Residual::Operator(p) => {
                let terms: Vec<(String, String)> =
                    p.terms().map(|(w, c)| (w.to_string(), frac_string(c))).collect();
                let mut map = s.serialize_map(Some(1))?;
                map.serialize_entry("operator", &Pairs(terms))?;
                map.end()
            }
            Residual::Group(g) => {
                let terms: Vec<(String, String)> =
                    g.terms().map(|(e, c)| (e.to_string(), frac_string(c))).collect();
                let mut map = s.serialize_map(Some(1))?;
                map.serialize_entry("group", &Pairs(terms))?;
                map.end()
            }
        }
    }
}

struct Pairs(Vec<(String, String)>);

impl Serialize for Pairs {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub name: String,
    pub order: u32,
    pub status: Status,
    /// Nonzero residuals keyed by `component[j]`; empty iff the report passes.
    pub residual: BTreeMap<String, Residual>,
    /// Number of exact equalities that were checked.
    pub checks: usize,
    pub wall_time: Duration,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl Serialize for IdentityReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("IdentityReport", 5)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("status", self.status.as_str())?;
        st.serialize_field("checks", &self.checks)?;
        st.serialize_field("residual", &self.residual)?;
        st.end()
    }
}

/// Whether an identity is indexed by an order or is a single fixed equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Checked for every `j` from `start` up to the requested order.
    Ordered { start: u32 },
    /// Order-independent operator identity; checked once.
    Fixed,
}

type CheckFn = fn(&Ctx, u32) -> Vec<Residual>;

pub struct Identity {
    pub name: &'static str,
    pub scope: Scope,
    pub statement: &'static str,
    check: CheckFn,
}

impl Identity {
    /// `j` values checked for a requested order.
    pub fn orders(&self, order: u32) -> Vec<u32> {
        match self.scope {
            Scope::Ordered { start } => (start..=order).collect(),
            Scope::Fixed => vec![0],
        }
    }

    pub fn residuals(&self, j: u32) -> Vec<Residual> {
        (self.check)(&Ctx::new(), j)
    }
}

pub struct Entry {
    pub number: u8,
    pub name: &'static str,
    pub components: &'static [&'static str],
}

pub const ENTRIES: &[Entry] = &[
    Entry { number: 1, name: "prop_binom", components: &["prop_binom"] },
    Entry { number: 2, name: "cor_even", components: &["cor_even"] },
    Entry { number: 3, name: "cor_odd", components: &["cor_odd"] },
    Entry { number: 4, name: "ham1_prop41", components: &["ham1_prop41"] },
    Entry { number: 5, name: "thm_sum", components: &["thm_sum"] },
    Entry { number: 6, name: "eq_complement", components: &["eq_complement"] },
    Entry { number: 7, name: "identity_diff", components: &["identity_diff"] },
    Entry { number: 8, name: "eq_pq_diff", components: &["eq_pq_diff"] },
    Entry { number: 9, name: "comm_odd", components: &["comm_odd"] },
    Entry { number: 10, name: "comm_even_rs", components: &["comm_even_rs"] },
    Entry { number: 11, name: "thm_comm", components: &["thm_comm"] },
    Entry { number: 12, name: "comm_word_eq", components: &["comm_word_eq"] },
    Entry {
        number: 13,
        name: "kato_dual",
        components: &["kato_pyth", "kato_anti", "kato_center"],
    },
    Entry { number: 14, name: "kato_square", components: &["kato_square"] },
    Entry { number: 15, name: "kato_sym", components: &["kato_sym"] },
    Entry { number: 16, name: "b_pow", components: &["b_even_pow", "b_odd_pow"] },
    Entry {
        number: 17,
        name: "odd_moment",
        components: &["b_odd_moment", "a_odd_moment"],
    },
    Entry { number: 18, name: "eq11", components: &["eq11"] },
    Entry { number: 19, name: "c_factored", components: &["c_factored"] },
    Entry { number: 20, name: "c_square", components: &["c_square"] },
    Entry { number: 21, name: "final_split", components: &["final_split"] },
];

pub const IDENTITIES: &[Identity] = &[
    Identity {
        name: "prop_binom",
        scope: Scope::Ordered { start: 1 },
        statement: "(R+S)^{2n} = C(2n,n) + sum_k C(2n,n-k)((RS)^k + (SR)^k)",
        check: prop_binom,
    },
    Identity {
        name: "cor_even",
        scope: Scope::Ordered { start: 0 },
        statement: "tau[(R+S)^{2j}] = C(2j,j) + 2 sum_k C(2j,j-k) tau[(RS)^k]",
        check: cor_even,
    },
    Identity {
        name: "cor_odd",
        scope: Scope::Ordered { start: 0 },
        statement: "tau[(R+S)^{2j+1}] = 4^j tau(R+S)",
        check: cor_odd,
    },
    Identity {
        name: "ham1_prop41",
        scope: Scope::Ordered { start: 1 },
        statement: "tau[(PQP)^j] = C(2j,j)/2^{2j+1} + (a+b)/4 + 2^{-2j} sum_k C(2j,j-k) tau[(RS)^k]",
        check: ham1_prop41,
    },
    Identity {
        name: "thm_sum",
        scope: Scope::Ordered { start: 1 },
        statement: "2 tau[(PQP)^j] - (a+b)/2 = 4^{-j} tau[(R+S)^{2j}] = tau[(P+Q-1)^{2j}]",
        check: thm_sum,
    },
    Identity {
        name: "eq_complement",
        scope: Scope::Ordered { start: 1 },
        statement: "2 tau[((1-P)(1-Q)(1-P))^j] + (a+b)/2 = tau[(P+Q-1)^{2j}]",
        check: eq_complement,
    },
    Identity {
        name: "identity_diff",
        scope: Scope::Ordered { start: 1 },
        statement: "2 tau[(PQP)^j] - 2 tau[((1-P)(1-Q)(1-P))^j] = a+b",
        check: identity_diff,
    },
    Identity {
        name: "eq_pq_diff",
        scope: Scope::Ordered { start: 1 },
        statement: "2 tau[((1-P)Q(1-P))^j] + (a-b)/2 = 4^{-j} tau[(R-S)^{2j}] = tau[(P-Q)^{2j}]",
        check: eq_pq_diff,
    },
    Identity {
        name: "comm_odd",
        scope: Scope::Ordered { start: 0 },
        statement: "tau(D^{2j+1}) = 0",
        check: comm_odd,
    },
    Identity {
        name: "comm_even_rs",
        scope: Scope::Ordered { start: 0 },
        statement: "(-1)^j tau(D^{2j}) = 16^{-j} [C(2j,j) + 2 sum_k (-1)^k C(2j,j-k) tau[(RS)^{2k}]]",
        check: comm_even_rs,
    },
    Identity {
        name: "thm_comm",
        scope: Scope::Ordered { start: 1 },
        statement: "(-1)^j tau(D^{2j}) = 2 tau[(PQP(P-PQP))^j]",
        check: thm_comm,
    },
    Identity {
        name: "comm_word_eq",
        scope: Scope::Ordered { start: 1 },
        statement: "tau[(PQP(P-PQ))^j] = tau[(PQP(P-PQP))^j]",
        check: comm_word_eq,
    },
    Identity {
        name: "kato_pyth",
        scope: Scope::Fixed,
        statement: "A^2 + B^2 = 1",
        check: kato_pyth,
    },
    Identity {
        name: "kato_anti",
        scope: Scope::Fixed,
        statement: "AB + BA = 0",
        check: kato_anti,
    },
    Identity {
        name: "kato_center",
        scope: Scope::Fixed,
        statement: "B^2 P = P B^2 = PQP, B^2 Q = Q B^2 = QPQ",
        check: kato_center,
    },
    Identity {
        name: "kato_square",
        scope: Scope::Fixed,
        statement: "B^2 = (1-P)(1-Q) + QP = (1-Q)(1-P) + PQ",
        check: kato_square,
    },
    Identity {
        name: "kato_sym",
        scope: Scope::Fixed,
        statement: "B + A = -S, B - A = -R",
        check: kato_sym,
    },
    Identity {
        name: "b_even_pow",
        scope: Scope::Ordered { start: 1 },
        statement: "B^{2j} = (QP)^j + ((1-P)(1-Q))^j",
        check: b_even_pow,
    },
    Identity {
        name: "b_odd_pow",
        scope: Scope::Ordered { start: 0 },
        statement: "B^{2j+1} = ((1-P)(1-Q))^j (1-P) - (QP)^j Q",
        check: b_odd_pow,
    },
    Identity {
        name: "b_odd_moment",
        scope: Scope::Ordered { start: 0 },
        statement: "tau[B^{2j+1}] = tau(B)",
        check: b_odd_moment,
    },
    Identity {
        name: "a_odd_moment",
        scope: Scope::Ordered { start: 0 },
        statement: "tau[A^{2j+1}] = tau(A)",
        check: a_odd_moment,
    },
    Identity {
        name: "eq11",
        scope: Scope::Ordered { start: 1 },
        statement: "tau[B^{2j}] = 2 tau[(PQP)^j] - (a+b)/2 = 2 tau[(B^2 P)^j] + tau(B)",
        check: eq11,
    },
    Identity {
        name: "c_factored",
        scope: Scope::Fixed,
        statement: "D = (P-Q)(P+Q-1), AB = -D",
        check: c_factored,
    },
    Identity {
        name: "c_square",
        scope: Scope::Fixed,
        statement: "-D^2 = A^2 B^2 = B^2 (1 - B^2)",
        check: c_square,
    },
    Identity {
        name: "final_split",
        scope: Scope::Ordered { start: 1 },
        statement: "tau[B^{2j}(1-B^2)^j P] = tau[B^{2j}(1-B^2)^j (1-P)]",
        check: final_split,
    },
];

pub fn identity(name: &str) -> Option<&'static Identity> {
    IDENTITIES.iter().find(|i| i.name == name)
}

pub fn entry(name: &str) -> Option<&'static Entry> {
    ENTRIES.iter().find(|e| e.name == name)
}

/// Entry names followed by component names that are not entry names.
pub fn names() -> Vec<&'static str> {
    let mut out: Vec<&str> = ENTRIES.iter().map(|e| e.name).collect();
    for i in IDENTITIES {
        if !out.contains(&i.name) {
            out.push(i.name);
        }
    }
    out
}

/// Runs identities up to a capped order.
#[derive(Debug, Clone, Copy)]
pub struct Verifier {
    pub cap: u32,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier { cap: DEFAULT_CAP }
    }
}

impl Verifier {
    pub fn with_cap(cap: u32) -> Self {
        Verifier { cap }
    }

    fn components(name: &str) -> Result<Vec<&'static Identity>, IdentityError> {
        if let Some(e) = entry(name) {
            return Ok(e.components.iter().map(|c| identity(c).unwrap()).collect());
        }
        identity(name)
            .map(|i| vec![i])
            .ok_or_else(|| IdentityError::UnknownIdentity(name.to_string()))
    }

    fn check_cap(&self, order: u32) -> Result<(), IdentityError> {
        if order > self.cap {
            return Err(IdentityError::OrderExceedsCap { order, cap: self.cap });
        }
        Ok(())
    }

    /// One report per order `j` for the named entry or component. Fixed
    /// operator identities yield a single report at order 0.
    pub fn verify(&self, name: &str, order: u32) -> Result<Vec<IdentityReport>, IdentityError> {
        self.check_cap(order)?;
        let comps = Self::components(name)?;
        let mut js: Vec<u32> = comps.iter().flat_map(|c| c.orders(order)).collect();
        js.sort_unstable();
        js.dedup();
        Ok(js
            .into_iter()
            .map(|j| {
                let selected: Vec<(&Identity, u32)> = comps
                    .iter()
                    .filter(|c| c.orders(order).contains(&j))
                    .map(|c| (*c, j))
                    .collect();
                run(name, j, &selected)
            })
            .collect())
    }

    /// One aggregated report per registry entry, covering every order up to
    /// `order`.
    pub fn verify_all(&self, order: u32) -> Result<Vec<IdentityReport>, IdentityError> {
        self.check_cap(order)?;
        Ok(ENTRIES
            .par_iter()
            .map(|e| self.verify_entry(e, order))
            .collect())
    }

    pub fn verify_entry(&self, e: &Entry, order: u32) -> IdentityReport {
        let selected: Vec<(&Identity, u32)> = e
            .components
            .iter()
            .map(|c| identity(c).unwrap())
            .flat_map(|c| c.orders(order).into_iter().map(move |j| (c, j)))
            .collect();
        run(e.name, order, &selected)
    }
}

fn run(name: &str, order: u32, selected: &[(&Identity, u32)]) -> IdentityReport {
    let start = Instant::now();
    let ctx = Ctx::new();
    let mut residual = BTreeMap::new();
    let mut checks = 0;
    for (id, j) in selected {
        for (i, r) in (id.check)(&ctx, *j).into_iter().enumerate() {
            checks += 1;
            if r.is_zero() {
                continue;
            }
            let key = match (id.scope, i) {
                (Scope::Fixed, 0) => id.name.to_string(),
                (Scope::Fixed, i) => format!("{}#{i}", id.name),
                (_, 0) => format!("{}[{j}]", id.name),
                (_, i) => format!("{}[{j}]#{i}", id.name),
            };
            residual.insert(key, r);
        }
    }
    IdentityReport {
        name: name.to_string(),
        order,
        status: if residual.is_empty() { Status::Pass } else { Status::Fail },
        residual,
        checks,
        wall_time: start.elapsed(),
    }
}

/// Frequently used generators.
struct Ctx {
    one: NCPoly,
    p: NCPoly,
    q: NCPoly,
    r: NCPoly,
    s: NCPoly,
    a: NCPoly,
    b: NCPoly,
    d: NCPoly,
}

impl Ctx {
    fn new() -> Self {
        Ctx {
            one: NCPoly::one(),
            p: proj_p(),
            q: proj_q(),
            r: sym_r(),
            s: sym_s(),
            a: kato_a(),
            b: kato_b(),
            d: comm_skew(),
        }
    }

    fn pqp(&self) -> NCPoly {
        &self.p * &self.q * &self.p
    }

    /// `τ[(RS)^k]`
    fn tau_rs(&self, k: u32) -> MomentExpr {
        trace(&(&self.r * &self.s).pow(k))
    }

    fn alpha_plus_beta(&self) -> MomentExpr {
        &MomentExpr::alpha() + &MomentExpr::beta()
    }

    fn shifted_sum(&self) -> NCPoly {
        &self.p + &self.q - &self.one
    }
}

fn moment(lhs: MomentExpr, rhs: MomentExpr) -> Residual {
    Residual::Moment(&lhs - &rhs)
}

fn operator(lhs: NCPoly, rhs: NCPoly) -> Residual {
    Residual::Operator(lhs - rhs)
}

fn r(x: u32) -> Rational {
    int(x as i64)
}

fn prop_binom(_: &Ctx, n: u32) -> Vec<Residual> {
    vec![Residual::Group(&binomial_expand(n) - &binomial_closed_form(n))]
}

fn cor_even(c: &Ctx, j: u32) -> Vec<Residual> {
    let row = pascal_row(2 * j);
    let lhs = trace(&(&c.r + &c.s).pow(2 * j));
    let mut rhs = MomentExpr::constant(from_big(&row[j as usize]));
    for k in 1..=j {
        let coeff = from_big(&row[(j - k) as usize]) * r(2);
        rhs = &rhs + &c.tau_rs(k).scale(&coeff);
    }
    vec![moment(lhs, rhs)]
}

fn cor_odd(c: &Ctx, j: u32) -> Vec<Residual> {
    let sum = &c.r + &c.s;
    let lhs = trace(&sum.pow(2 * j + 1));
    let rhs = trace(&sum).scale(&from_big(&(num_bigint::BigInt::from(1) << (2 * j))));
    vec![moment(lhs, rhs)]
}

fn ham1_prop41(c: &Ctx, j: u32) -> Vec<Residual> {
    let row = pascal_row(2 * j);
    let lhs = trace(&c.pqp().pow(j));
    let mut rhs = MomentExpr::constant(from_big(&row[j as usize]) * inv_pow2(2 * j + 1));
    rhs = &rhs + &c.alpha_plus_beta().scale(&inv_pow2(2));
    for k in 1..=j {
        let coeff = from_big(&row[(j - k) as usize]) * inv_pow2(2 * j);
        rhs = &rhs + &c.tau_rs(k).scale(&coeff);
    }
    vec![moment(lhs, rhs)]
}

fn thm_sum(c: &Ctx, j: u32) -> Vec<Residual> {
    let lhs = &trace(&c.pqp().pow(j)).scale(&r(2)) - &c.alpha_plus_beta().scale(&inv_pow2(1));
    let mid = trace(&(&c.r + &c.s).pow(2 * j)).scale(&inv_pow2(2 * j));
    let rhs = trace(&c.shifted_sum().pow(2 * j));
    vec![moment(lhs.clone(), rhs), moment(lhs, mid)]
}

fn complement_angle(c: &Ctx) -> NCPoly {
    let (cp, cq) = (complement(&c.p), complement(&c.q));
    &cp * &cq * &cp
}

fn eq_complement(c: &Ctx, j: u32) -> Vec<Residual> {
    let lhs = &trace(&complement_angle(c).pow(j)).scale(&r(2))
        + &c.alpha_plus_beta().scale(&inv_pow2(1));
    let rhs = trace(&c.shifted_sum().pow(2 * j));
    vec![moment(lhs, rhs)]
}

fn identity_diff(c: &Ctx, j: u32) -> Vec<Residual> {
    let lhs = (&trace(&c.pqp().pow(j)) - &trace(&complement_angle(c).pow(j))).scale(&r(2));
    vec![moment(lhs, c.alpha_plus_beta())]
}

fn eq_pq_diff(c: &Ctx, j: u32) -> Vec<Residual> {
    let cp = complement(&c.p);
    let x = &cp * &c.q * &cp;
    let a_minus_b = &MomentExpr::alpha() - &MomentExpr::beta();
    let lhs = &trace(&x.pow(j)).scale(&r(2)) + &a_minus_b.scale(&inv_pow2(1));
    let mid = trace(&(&c.r - &c.s).pow(2 * j)).scale(&inv_pow2(2 * j));
    let rhs = trace(&(&c.p - &c.q).pow(2 * j));
    vec![moment(lhs.clone(), rhs), moment(lhs, mid)]
}

fn comm_odd(c: &Ctx, j: u32) -> Vec<Residual> {
    vec![moment(trace(&c.d.pow(2 * j + 1)), MomentExpr::zero())]
}

fn sign(j: u32) -> Rational {
    if j.is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    }
}

/// `τ(C^{2j}) = (-1)^j τ(D^{2j})`
fn tau_c_even(c: &Ctx, j: u32) -> MomentExpr {
    trace(&c.d.pow(2 * j)).scale(&sign(j))
}

fn comm_even_rs(c: &Ctx, j: u32) -> Vec<Residual> {
    let row = pascal_row(2 * j);
    let mut bracket = MomentExpr::constant(from_big(&row[j as usize]));
    for k in 1..=j {
        let coeff = from_big(&row[(j - k) as usize]) * r(2) * sign(k);
        bracket = &bracket + &c.tau_rs(2 * k).scale(&coeff);
    }
    let rhs = bracket.scale(&inv_pow2(4 * j));
    vec![moment(tau_c_even(c, j), rhs)]
}

fn angle_gap(c: &Ctx) -> NCPoly {
    let pqp = c.pqp();
    &pqp * (&c.p - &pqp)
}

fn thm_comm(c: &Ctx, j: u32) -> Vec<Residual> {
    let rhs = trace(&angle_gap(c).pow(j)).scale(&r(2));
    vec![moment(tau_c_even(c, j), rhs)]
}

fn comm_word_eq(c: &Ctx, j: u32) -> Vec<Residual> {
    let left = c.pqp() * (&c.p - &c.p * &c.q);
    vec![moment(trace(&left.pow(j)), trace(&angle_gap(c).pow(j)))]
}

fn kato_pyth(c: &Ctx, _: u32) -> Vec<Residual> {
    vec![operator(&c.a * &c.a + &c.b * &c.b, c.one.clone())]
}

fn kato_anti(c: &Ctx, _: u32) -> Vec<Residual> {
    vec![operator(&c.a * &c.b + &c.b * &c.a, NCPoly::zero())]
}

fn kato_center(c: &Ctx, _: u32) -> Vec<Residual> {
    let b2 = &c.b * &c.b;
    let qpq = &c.q * &c.p * &c.q;
    vec![
        operator(&b2 * &c.p, c.pqp()),
        operator(&c.p * &b2, c.pqp()),
        operator(&b2 * &c.q, qpq.clone()),
        operator(&c.q * &b2, qpq),
    ]
}

fn kato_square(c: &Ctx, _: u32) -> Vec<Residual> {
    let b2 = &c.b * &c.b;
    let (cp, cq) = (complement(&c.p), complement(&c.q));
    vec![
        operator(b2.clone(), &cp * &cq + &c.q * &c.p),
        operator(b2, &cq * &cp + &c.p * &c.q),
    ]
}

fn kato_sym(c: &Ctx, _: u32) -> Vec<Residual> {
    vec![
        operator(&c.b + &c.a, -&c.s),
        operator(&c.b - &c.a, -&c.r),
    ]
}

fn b_even_pow(c: &Ctx, j: u32) -> Vec<Residual> {
    let cc = complement(&c.p) * complement(&c.q);
    let rhs = (&c.q * &c.p).pow(j) + cc.pow(j);
    vec![operator(c.b.pow(2 * j), rhs)]
}

fn b_odd_pow(c: &Ctx, j: u32) -> Vec<Residual> {
    let cp = complement(&c.p);
    let cc = &cp * complement(&c.q);
    let rhs = cc.pow(j) * &cp - (&c.q * &c.p).pow(j) * &c.q;
    vec![operator(c.b.pow(2 * j + 1), rhs)]
}

fn b_odd_moment(c: &Ctx, j: u32) -> Vec<Residual> {
    vec![moment(trace(&c.b.pow(2 * j + 1)), trace(&c.b))]
}

fn a_odd_moment(c: &Ctx, j: u32) -> Vec<Residual> {
    vec![moment(trace(&c.a.pow(2 * j + 1)), trace(&c.a))]
}

fn eq11(c: &Ctx, j: u32) -> Vec<Residual> {
    let lhs = trace(&c.b.pow(2 * j));
    let via_angle =
        &trace(&c.pqp().pow(j)).scale(&r(2)) - &c.alpha_plus_beta().scale(&inv_pow2(1));
    let b2p = &c.b * &c.b * &c.p;
    let via_b = &trace(&b2p.pow(j)).scale(&r(2)) + &trace(&c.b);
    vec![moment(lhs.clone(), via_angle), moment(lhs, via_b)]
}

fn c_factored(c: &Ctx, _: u32) -> Vec<Residual> {
    let factored = (&c.p - &c.q) * c.shifted_sum();
    vec![
        operator(c.d.clone(), factored),
        operator(&c.a * &c.b, -&c.d),
    ]
}

fn c_square(c: &Ctx, _: u32) -> Vec<Residual> {
    let b2 = &c.b * &c.b;
    let c2 = -(&c.d * &c.d);
    vec![
        operator(c2.clone(), &b2 * complement(&b2)),
        operator(c2, &c.a * &c.a * &b2),
    ]
}

fn final_split(c: &Ctx, j: u32) -> Vec<Residual> {
    let b2 = &c.b * &c.b;
    let x = b2.pow(j) * complement(&b2).pow(j);
    vec![moment(
        trace(&(&x * &c.p)),
        trace(&(&x * complement(&c.p))),
    )]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residuals(name: &str, j: u32) -> Vec<Residual> {
        identity(name).unwrap().residuals(j)
    }

    #[test]
    fn registry_shape() {
        assert_eq!(ENTRIES.len(), 21);
        for (i, e) in ENTRIES.iter().enumerate() {
            assert_eq!(e.number as usize, i + 1);
            for c in e.components {
                assert!(identity(c).is_some(), "{c}");
            }
        }
        let covered: usize = ENTRIES.iter().map(|e| e.components.len()).sum();
        assert_eq!(covered, IDENTITIES.len());
    }

    #[test]
    fn thm_sum_first_order_by_hand() {
        // both sides reduce to 2m_1 - p - q + 1
        let c = Ctx::new();
        let expect = &(&MomentExpr::m(1).scale(&int(2)) - &MomentExpr::p())
            - &(&MomentExpr::q() - &MomentExpr::one());
        assert_eq!(trace(&c.shifted_sum().pow(2)), expect);
        assert!(residuals("thm_sum", 1).iter().all(Residual::is_zero));
    }

    #[test]
    fn thm_comm_first_order_by_hand() {
        let c = Ctx::new();
        // D^2 = (PQ)^2 - PQP - QPQ + (QP)^2, traced: 2m_2 - 2m_1
        let lhs = tau_c_even(&c, 1);
        let expect = (&MomentExpr::m(1) - &MomentExpr::m(2)).scale(&int(2));
        assert_eq!(lhs, expect);
        assert!(residuals("thm_comm", 1).iter().all(Residual::is_zero));
    }

    #[test]
    fn ham1_first_order_substitution() {
        let c = Ctx::new();
        let rs = &(&MomentExpr::m(1).scale(&int(4)) - &MomentExpr::p().scale(&int(2)))
            - &(&MomentExpr::q().scale(&int(2)) - &MomentExpr::one());
        assert_eq!(c.tau_rs(1), rs);
        assert!(residuals("ham1_prop41", 1).iter().all(Residual::is_zero));
    }

    #[test]
    fn ham1_fails_at_order_zero() {
        // j = 0 would need τ(1) = 1/2 + (α+β)/4
        assert!(!residuals("ham1_prop41", 0)[0].is_zero());
    }

    #[test]
    fn cor_even_zero_order_is_unit() {
        assert!(residuals("cor_even", 0)[0].is_zero());
    }

    #[test]
    fn verify_reports_per_order() {
        let v = Verifier::default();
        let reports = v.verify("thm_sum", 10).unwrap();
        assert_eq!(reports.len(), 10);
        assert!(reports.iter().all(IdentityReport::passed));
        assert_eq!(reports[3].order, 4);
        let prop = v.verify("prop_binom", 2).unwrap();
        assert_eq!(prop.len(), 2);
        assert!(prop[1].passed());
    }

    #[test]
    fn verify_errors() {
        let v = Verifier::with_cap(4);
        assert_eq!(
            v.verify("nope", 1).unwrap_err(),
            IdentityError::UnknownIdentity("nope".into())
        );
        assert_eq!(
            v.verify("thm_sum", 5).unwrap_err(),
            IdentityError::OrderExceedsCap { order: 5, cap: 4 }
        );
    }

    #[test]
    fn verify_all_small_orders() {
        let v = Verifier::default();
        for order in 0..=4 {
            let reports = v.verify_all(order).unwrap();
            assert_eq!(reports.len(), 21);
            for rep in &reports {
                assert!(rep.passed(), "{} at order {order}: {:?}", rep.name, rep.residual);
            }
        }
    }

    #[test]
    fn failing_residual_is_reported_in_full() {
        let rep = run("ham1_prop41", 0, &[(identity("ham1_prop41").unwrap(), 0)]);
        assert_eq!(rep.status, Status::Fail);
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains(r#""ham1_prop41[0]":{"moment":"#), "{json}");
    }

    #[test]
    fn operator_identities_trace_to_zero() {
        for id in IDENTITIES.iter().filter(|i| i.scope == Scope::Fixed) {
            for res in id.residuals(0) {
                match res {
                    Residual::Operator(p) => assert!(trace(&p).is_zero()),
                    other => panic!("{} produced {other:?}", id.name),
                }
            }
        }
    }
}
