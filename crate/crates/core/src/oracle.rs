//! Finite-dimensional ground truth for the symbolic engine.
//!
//! A [`ModelSpec`] fixes the principal angles between the ranges of `P` and
//! `Q` together with the dimensions of the four intersections
//! `ran P ∩ ran Q`, `ran P ∩ ker Q`, `ker P ∩ ran Q`, `ker P ∩ ker Q`. The
//! realization is block diagonal: one 2×2 block per angle
//!
//! ```text
//! P = [1 0]    Q = [cos²θ      cosθ sinθ]
//!     [0 0]        [cosθ sinθ  sin²θ    ]
//! ```
//!
//! followed by 1×1 blocks for the intersections. Degenerate angles (0 and
//! π/2) are expressed only through the multiplicities.
//!
//! Random rotations use ChaCha8 seeded from `seed`, with sample `i` drawn on
//! stream `i`, so runs are reproducible and independent of scheduling.

use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ncword::{Letter, NCPoly, Word};
use crate::rational::binomial;
use crate::trace::{eval, trace, Assignment};

/// Absolute tolerance for every numeric comparison in this module.
pub const TOLERANCE: f64 = 1e-10;
/// Entrywise tolerance for `P² = P`, `Pᵀ = P` after construction.
pub const BUILD_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("angle {0} is outside the open interval (0, pi/2)")]
    AngleOutOfRange(f64),
    #[error("model has total dimension 0")]
    EmptyModel,
    #[error("dimension {0} must be even")]
    OddDimension(usize),
    #[error("dimension {0} is below the minimum 16")]
    DimensionTooSmall(usize),
    #[error("cannot read model file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed model file {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

/// Principal angles (radians) and intersection multiplicities
/// `[m11, m10, m01, m00]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub angles: Vec<f64>,
    pub mult: [usize; 4],
}

impl ModelSpec {
    pub fn new(angles: Vec<f64>, mult: [usize; 4]) -> Result<Self, OracleError> {
        let spec = ModelSpec { angles, mult };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        for &t in &self.angles {
            if !(t > 0.0 && t < std::f64::consts::FRAC_PI_2) {
                return Err(OracleError::AngleOutOfRange(t));
            }
        }
        if self.dim() == 0 {
            return Err(OracleError::EmptyModel);
        }
        Ok(())
    }

    pub fn from_json_file(path: &Path) -> Result<Self, OracleError> {
        let text = fs::read_to_string(path).map_err(|source| OracleError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let spec: ModelSpec = serde_json::from_str(&text).map_err(|source| OracleError::Json {
            path: path.display().to_string(),
            source,
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        2 * self.angles.len() + self.mult.iter().sum::<usize>()
    }

    /// `τ(P)`
    pub fn p(&self) -> f64 {
        (self.angles.len() + self.mult[0] + self.mult[1]) as f64 / self.dim() as f64
    }

    /// `τ(Q)`
    pub fn q(&self) -> f64 {
        (self.angles.len() + self.mult[0] + self.mult[2]) as f64 / self.dim() as f64
    }

    /// `m_k = τ((PQ)^k)`
    pub fn m(&self, k: u32) -> f64 {
        let s: f64 = self.angles.iter().map(|t| t.cos().powi(2 * k as i32)).sum();
        (s + self.mult[0] as f64) / self.dim() as f64
    }

    pub fn assignment(&self, max_k: u32) -> Assignment {
        Assignment {
            p: self.p(),
            q: self.q(),
            m: (1..=max_k).map(|k| (k, self.m(k))).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProjectionPair {
    pub spec: ModelSpec,
    pub p: DMatrix<f64>,
    pub q: DMatrix<f64>,
}

impl ProjectionPair {
    pub fn dim(&self) -> usize {
        self.p.nrows()
    }

    fn letter(&self, l: Letter) -> &DMatrix<f64> {
        match l {
            Letter::P => &self.p,
            Letter::Q => &self.q,
        }
    }

    pub fn word_matrix(&self, w: &Word) -> DMatrix<f64> {
        let d = self.dim();
        w.letters()
            .fold(DMatrix::identity(d, d), |acc, l| acc * self.letter(l))
    }

    pub fn poly_matrix(&self, x: &NCPoly) -> DMatrix<f64> {
        let d = self.dim();
        let mut out = DMatrix::zeros(d, d);
        for (w, c) in x.terms() {
            let c = num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN);
            out += self.word_matrix(w) * c;
        }
        out
    }

    /// Largest entrywise deviation from `P² = P = Pᵀ`, `Q² = Q = Qᵀ`.
    pub fn projection_defect(&self) -> f64 {
        [&self.p, &self.q]
            .iter()
            .map(|m| {
                let sq = (*m * *m - *m).amax();
                let sym = (*m - m.transpose()).amax();
                sq.max(sym)
            })
            .fold(0.0, f64::max)
    }
}

pub fn build(spec: &ModelSpec) -> Result<ProjectionPair, OracleError> {
    spec.validate()?;
    let d = spec.dim();
    let mut p = DMatrix::zeros(d, d);
    let mut q = DMatrix::zeros(d, d);
    let mut at = 0;
    for &t in &spec.angles {
        let (s, c) = t.sin_cos();
        p[(at, at)] = 1.0;
        q[(at, at)] = c * c;
        q[(at, at + 1)] = c * s;
        q[(at + 1, at)] = c * s;
        q[(at + 1, at + 1)] = s * s;
        at += 2;
    }
    let blocks = [(1.0, 1.0), (1.0, 0.0), (0.0, 1.0), (0.0, 0.0)];
    for (&(pv, qv), &count) in blocks.iter().zip(&spec.mult) {
        for _ in 0..count {
            p[(at, at)] = pv;
            q[(at, at)] = qv;
            at += 1;
        }
    }
    Ok(ProjectionPair { spec: spec.clone(), p, q })
}

pub fn normalized_trace(m: &DMatrix<f64>) -> f64 {
    m.trace() / m.nrows() as f64
}

pub fn word_trace(pair: &ProjectionPair, w: &Word) -> f64 {
    normalized_trace(&pair.word_matrix(w))
}

/// `|eval(trace(x)) - tr(x(P,Q))/d|` with moments taken from the model's
/// closed forms.
pub fn crosscheck(pair: &ProjectionPair, x: &NCPoly) -> f64 {
    let symbolic = trace(x);
    let a = pair.spec.assignment(symbolic.max_moment());
    let lhs = eval(&symbolic, &a).expect("assignment covers every moment");
    (lhs - normalized_trace(&pair.poly_matrix(x))).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumOp {
    /// `P + Q`
    Sum,
    /// `(P + Q - 1)²`
    SumShiftSq,
    /// `C² = -(PQ - QP)²`
    CommutatorSq,
    /// `PQP`
    Angle,
    /// `P + QPQ`
    PPlusQpq,
    /// `A = P - Q`
    #[serde(rename = "kato_A")]
    KatoA,
    /// `B = 1 - P - Q`
    #[serde(rename = "kato_B")]
    KatoB,
}

impl SpectrumOp {
    pub const ALL: [SpectrumOp; 7] = [
        SpectrumOp::Sum,
        SpectrumOp::SumShiftSq,
        SpectrumOp::CommutatorSq,
        SpectrumOp::Angle,
        SpectrumOp::PPlusQpq,
        SpectrumOp::KatoA,
        SpectrumOp::KatoB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpectrumOp::Sum => "sum",
            SpectrumOp::SumShiftSq => "sum_shift_sq",
            SpectrumOp::CommutatorSq => "commutator_sq",
            SpectrumOp::Angle => "angle",
            SpectrumOp::PPlusQpq => "p_plus_qpq",
            SpectrumOp::KatoA => "kato_A",
            SpectrumOp::KatoB => "kato_B",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.name() == s)
    }

    pub fn matrix(self, pair: &ProjectionPair) -> DMatrix<f64> {
        let (p, q) = (&pair.p, &pair.q);
        let id = DMatrix::<f64>::identity(pair.dim(), pair.dim());
        match self {
            SpectrumOp::Sum => p + q,
            SpectrumOp::SumShiftSq => {
                let x = p + q - &id;
                &x * &x
            }
            SpectrumOp::CommutatorSq => {
                let d = p * q - q * p;
                -(&d * &d)
            }
            SpectrumOp::Angle => p * q * p,
            SpectrumOp::PPlusQpq => p + q * p * q,
            SpectrumOp::KatoA => p - q,
            SpectrumOp::KatoB => id - p - q,
        }
    }

    /// Eigenvalues predicted from the angles and multiplicities alone, when
    /// they are an elementary function of each block.
    pub fn expected(self, spec: &ModelSpec) -> Option<Vec<f64>> {
        let per_angle = |t: f64| -> [f64; 2] {
            let (s, c) = t.sin_cos();
            match self {
                SpectrumOp::Sum => [1.0 - c, 1.0 + c],
                SpectrumOp::SumShiftSq => [c * c, c * c],
                SpectrumOp::CommutatorSq => [c * c * s * s, c * c * s * s],
                SpectrumOp::Angle => [0.0, c * c],
                SpectrumOp::KatoA => [-s, s],
                SpectrumOp::KatoB => [-c, c],
                SpectrumOp::PPlusQpq => [f64::NAN; 2],
            }
        };
        if self == SpectrumOp::PPlusQpq {
            return None;
        }
        // (P, Q) = (1,1), (1,0), (0,1), (0,0)
        let corner = |pv: f64, qv: f64| -> f64 {
            match self {
                SpectrumOp::Sum => pv + qv,
                SpectrumOp::SumShiftSq => (pv + qv - 1.0).powi(2),
                SpectrumOp::CommutatorSq => 0.0,
                SpectrumOp::Angle => pv * qv,
                SpectrumOp::KatoA => pv - qv,
                SpectrumOp::KatoB => 1.0 - pv - qv,
                SpectrumOp::PPlusQpq => unreachable!(),
            }
        };
        let mut out: Vec<f64> = spec.angles.iter().flat_map(|&t| per_angle(t)).collect();
        let blocks = [(1.0, 1.0), (1.0, 0.0), (0.0, 1.0), (0.0, 0.0)];
        for (&(pv, qv), &count) in blocks.iter().zip(&spec.mult) {
            out.extend(std::iter::repeat_n(corner(pv, qv), count));
        }
        out.sort_by(f64::total_cmp);
        Some(out)
    }
}

/// Sorted eigenvalues of the selected self-adjoint matrix.
pub fn spectrum(pair: &ProjectionPair, which: SpectrumOp) -> Vec<f64> {
    let m = which.matrix(pair);
    // symmetrize to remove rounding asymmetry from the products
    let m = (&m + m.transpose()) * 0.5;
    // adding 0.0 turns -0.0 into 0.0
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().map(|v| v + 0.0).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Largest deviation between computed and predicted eigenvalues, `None` when
/// no prediction exists for `which`.
pub fn spectrum_mapping_residual(pair: &ProjectionPair, which: SpectrumOp) -> Option<f64> {
    let expected = which.expected(&pair.spec)?;
    let got = spectrum(pair, which);
    Some(
        got.iter()
            .zip(&expected)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max),
    )
}

/// All words of length at most `max_len`, canonical order.
pub fn words_up_to(max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::UNIT];
    for len in 1..=max_len {
        out.push(Word::new(Letter::P, len));
        out.push(Word::new(Letter::Q, len));
    }
    out
}

/// Seeded grid of models: 0–4 angles drawn from a fixed list, each
/// multiplicity in `{0, 1, 2}`.
pub fn model_grid(count: usize, seed: u64) -> Vec<ModelSpec> {
    const ANGLES: [f64; 8] = [0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    // the commuting models and single-angle model come first
    out.push(ModelSpec { angles: vec![], mult: [1, 0, 0, 1] });
    out.push(ModelSpec { angles: vec![], mult: [1, 1, 1, 1] });
    out.push(ModelSpec { angles: vec![std::f64::consts::FRAC_PI_4], mult: [0; 4] });
    while out.len() < count {
        let n_angles = rng.random_range(0..=4usize);
        let angles = (0..n_angles)
            .map(|_| ANGLES[rng.random_range(0..ANGLES.len())])
            .collect();
        let mult = [0; 4].map(|_: usize| rng.random_range(0..=2usize));
        let spec = ModelSpec { angles, mult };
        if spec.dim() > 0 {
            out.push(spec);
        }
    }
    out.truncate(count);
    out
}

/// Random polynomial with small integer coefficients on words of length
/// at most `max_len`.
pub fn random_poly<R: Rng>(rng: &mut R, terms: usize, max_len: usize) -> NCPoly {
    let words = words_up_to(max_len);
    NCPoly::from_terms((0..terms).map(|_| {
        let w = words[rng.random_range(0..words.len())];
        let c: i64 = rng.random_range(-5..=5);
        (w, crate::rational::int(c))
    }))
}

#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckSummary {
    pub models: usize,
    pub words_checked: usize,
    pub polys_checked: usize,
    pub max_word_residual: f64,
    pub max_poly_residual: f64,
    pub max_spectrum_residual: f64,
    pub max_build_defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Crosschecks every word of length `≤ max_len` and `polys` random
/// polynomials on each model, plus the blockwise spectrum predictions.
pub fn crosscheck_models(
    specs: &[ModelSpec],
    max_len: usize,
    polys: usize,
    seed: u64,
) -> Result<CrosscheckSummary, OracleError> {
    let words = words_up_to(max_len);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random: Vec<NCPoly> = (0..polys).map(|_| random_poly(&mut rng, 6, max_len)).collect();
    let mut max_word: f64 = 0.0;
    let mut max_poly: f64 = 0.0;
    let mut max_spec: f64 = 0.0;
    let mut max_build: f64 = 0.0;
    for spec in specs {
        let pair = build(spec)?;
        max_build = max_build.max(pair.projection_defect());
        for w in &words {
            max_word = max_word.max(crosscheck(&pair, &NCPoly::word(*w)));
        }
        for x in &random {
            max_poly = max_poly.max(crosscheck(&pair, x));
        }
        for op in SpectrumOp::ALL {
            if let Some(r) = spectrum_mapping_residual(&pair, op) {
                max_spec = max_spec.max(r);
            }
        }
    }
    let pass = max_word <= TOLERANCE
        && max_poly <= TOLERANCE
        && max_spec <= TOLERANCE
        && max_build <= BUILD_TOLERANCE;
    Ok(CrosscheckSummary {
        models: specs.len(),
        words_checked: words.len() * specs.len(),
        polys_checked: random.len() * specs.len(),
        max_word_residual: max_word,
        max_poly_residual: max_poly,
        max_spectrum_residual: max_spec,
        max_build_defect: max_build,
        tolerance: TOLERANCE,
        pass,
    })
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of `R`'s diagonal moved into `Q`.
pub fn haar_orthogonal<R: Rng>(rng: &mut R, d: usize) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

#[derive(Debug, Clone, Serialize)]
pub struct HaarMoment {
    pub j: u32,
    pub estimate: f64,
    pub target: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HaarReport {
    pub d: usize,
    pub samples: usize,
    pub max_j: u32,
    pub seed: u64,
    pub moments: Vec<HaarMoment>,
    pub max_thm_sum_residual: f64,
    pub max_thm_comm_residual: f64,
}

struct SampleOutcome {
    moments: Vec<f64>,
    thm_sum: f64,
    thm_comm: f64,
}

fn mat_pow(m: &DMatrix<f64>, n: u32) -> DMatrix<f64> {
    let d = m.nrows();
    (0..n).fold(DMatrix::identity(d, d), |acc, _| acc * m)
}

fn haar_sample(d: usize, max_j: u32, seed: u64, index: u64) -> SampleOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let half = d / 2;
    let id = DMatrix::<f64>::identity(d, d);
    let p = DMatrix::<f64>::from_fn(d, d, |i, j| if i == j && i < half { 1.0 } else { 0.0 });
    let u = haar_orthogonal(&mut rng, d);
    let q = &u * &p * u.transpose();

    let shifted = &p + &q - &id;
    let shifted_sq = &shifted * &shifted;
    let pqp = &p * &q * &p;
    let gap = &pqp * (&p - &pqp);
    let dcomm = &p * &q - &q * &p;
    let dsq = &dcomm * &dcomm;
    let alpha_beta = 2.0 * normalized_trace(&p) - 1.0 + 2.0 * normalized_trace(&q) - 1.0;

    let mut moments = Vec::with_capacity(max_j as usize);
    let (mut thm_sum, mut thm_comm) = (0.0f64, 0.0f64);
    for j in 1..=max_j {
        let sum_side = normalized_trace(&mat_pow(&shifted_sq, j));
        moments.push(sum_side);
        let angle_side = 2.0 * normalized_trace(&mat_pow(&pqp, j)) - alpha_beta / 2.0;
        thm_sum = thm_sum.max((angle_side - sum_side).abs());
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let c_side = sign * normalized_trace(&mat_pow(&dsq, j));
        let gap_side = 2.0 * normalized_trace(&mat_pow(&gap, j));
        thm_comm = thm_comm.max((c_side - gap_side).abs());
    }
    SampleOutcome { moments, thm_sum, thm_comm }
}

/// Monte-Carlo estimate of `τ[(P + UQUᵀ - 1)^{2j}]` for rank-`d/2`
/// projections and Haar `U`, against the arcsine moments `C(2j,j)/4^j`.
/// Also records per-sample residuals of the sum and commutator identities.
pub fn haar_demo(d: usize, samples: usize, max_j: u32, seed: u64) -> Result<HaarReport, OracleError> {
    if !d.is_multiple_of(2) {
        return Err(OracleError::OddDimension(d));
    }
    if d < 16 {
        return Err(OracleError::DimensionTooSmall(d));
    }
    let outcomes: Vec<SampleOutcome> = (0..samples as u64)
        .into_par_iter()
        .map(|i| haar_sample(d, max_j, seed, i))
        .collect();
    let mut moments = Vec::with_capacity(max_j as usize);
    for j in 1..=max_j {
        // summed in sample order
        let total: f64 = outcomes.iter().map(|o| o.moments[j as usize - 1]).sum();
        let estimate = total / samples as f64;
        let target = num_traits::ToPrimitive::to_f64(&binomial(2 * j, j as i64)).unwrap()
            / 4f64.powi(j as i32);
        moments.push(HaarMoment { j, estimate, target, error: (estimate - target).abs() });
    }
    Ok(HaarReport {
        d,
        samples,
        max_j,
        seed,
        moments,
        max_thm_sum_residual: outcomes.iter().map(|o| o.thm_sum).fold(0.0, f64::max),
        max_thm_comm_residual: outcomes.iter().map(|o| o.thm_comm).fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncword::{comm_skew, parse_word, proj_p, proj_q};
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    fn one_angle(t: f64) -> ProjectionPair {
        build(&ModelSpec::new(vec![t], [0; 4]).unwrap()).unwrap()
    }

    #[test]
    fn one_angle_traces() {
        let pair = one_angle(FRAC_PI_3);
        assert_eq!(pair.dim(), 2);
        let pq = word_trace(&pair, &parse_word("PQ").unwrap());
        assert!((pq - 0.125).abs() < 1e-15);
        assert!((word_trace(&pair, &parse_word("P").unwrap()) - 0.5).abs() < 1e-15);
        let pqpq = word_trace(&pair, &parse_word("PQPQ").unwrap());
        assert!((pqpq - 0.03125).abs() < 1e-15);
        assert_eq!(word_trace(&pair, &Word::UNIT), 1.0);
        assert!(pair.projection_defect() <= BUILD_TOLERANCE);
    }

    #[test]
    fn commuting_model() {
        let spec = ModelSpec::new(vec![], [1, 0, 0, 1]).unwrap();
        let pair = build(&spec).unwrap();
        assert_eq!(pair.p, pair.q);
        for k in 1..6 {
            assert_eq!(spec.m(k), 0.5);
        }
    }

    #[test]
    fn dimension_counting() {
        let spec = ModelSpec::new(vec![FRAC_PI_6, FRAC_PI_4], [0, 1, 0, 0]).unwrap();
        assert_eq!(spec.dim(), 5);
        assert!((spec.p() - 0.6).abs() < 1e-15);
        assert!((spec.q() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(
            ModelSpec::new(vec![0.0], [0; 4]),
            Err(OracleError::AngleOutOfRange(_))
        ));
        assert!(ModelSpec::new(vec![FRAC_PI_4 * 2.0], [0; 4]).is_err());
        assert!(matches!(ModelSpec::new(vec![], [0; 4]), Err(OracleError::EmptyModel)));
    }

    #[test]
    fn crosscheck_examples() {
        let pair = one_angle(FRAC_PI_4);
        let shifted = proj_p() + proj_q() - NCPoly::one();
        assert!(crosscheck(&pair, &shifted.pow(2)) <= TOLERANCE);
        let d2 = comm_skew().pow(2);
        assert!(crosscheck(&pair, &d2) <= TOLERANCE);
        let value = eval(&trace(&d2), &pair.spec.assignment(2)).unwrap();
        assert!((value + 0.25).abs() < 1e-12);
        assert_eq!(crosscheck(&pair, &NCPoly::one()), 0.0);
    }

    #[test]
    fn spectrum_examples() {
        let pair = one_angle(FRAC_PI_3);
        let sum = spectrum(&pair, SpectrumOp::Sum);
        assert!((sum[0] - 0.5).abs() < 1e-12 && (sum[1] - 1.5).abs() < 1e-12);
        for v in spectrum(&pair, SpectrumOp::CommutatorSq) {
            assert!((v - 3.0 / 16.0).abs() < 1e-12);
        }
        let commuting = build(&ModelSpec::new(vec![], [2, 0, 0, 1]).unwrap()).unwrap();
        for v in spectrum(&commuting, SpectrumOp::SumShiftSq) {
            assert!((v - 1.0).abs() < 1e-12);
        }
        assert!(SpectrumOp::PPlusQpq.expected(&pair.spec).is_none());
    }

    #[test]
    fn spectrum_mappings_on_mixed_model() {
        let spec = ModelSpec::new(vec![0.3, 1.1], [1, 2, 0, 1]).unwrap();
        let pair = build(&spec).unwrap();
        for op in SpectrumOp::ALL {
            if let Some(r) = spectrum_mapping_residual(&pair, op) {
                assert!(r <= TOLERANCE, "{} residual {r}", op.name());
            }
        }
    }

    #[test]
    fn haar_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = haar_orthogonal(&mut rng, 8);
        let err = (&u * u.transpose() - DMatrix::<f64>::identity(8, 8)).amax();
        assert!(err < 1e-12);
    }

    #[test]
    fn haar_rejects_odd_dimension() {
        assert!(matches!(haar_demo(17, 1, 1, 0), Err(OracleError::OddDimension(17))));
        assert!(matches!(haar_demo(8, 1, 1, 0), Err(OracleError::DimensionTooSmall(8))));
    }

    #[test]
    fn haar_small_run_is_reproducible() {
        let a = haar_demo(16, 4, 2, 9).unwrap();
        let b = haar_demo(16, 4, 2, 9).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert!(a.max_thm_sum_residual <= TOLERANCE);
        assert!(a.max_thm_comm_residual <= TOLERANCE);
    }

    #[test]
    fn model_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        fs::write(&path, r#"{"angles":[0.5,1.0],"mult":[1,0,2,0]}"#).unwrap();
        let spec = ModelSpec::from_json_file(&path).unwrap();
        assert_eq!(spec.dim(), 7);
        assert!(matches!(
            ModelSpec::from_json_file(&dir.path().join("missing.json")),
            Err(OracleError::Io { .. })
        ));
        fs::write(&path, "{").unwrap();
        assert!(matches!(ModelSpec::from_json_file(&path), Err(OracleError::Json { .. })));
    }
}
