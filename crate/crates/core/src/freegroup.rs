//! Operator norms in the reduced group C*-algebra of a free group `F_N`.
//!
//! `‖λ(f)‖` is estimated from below by compressing `λ(f)` to `ℓ²(B_m)`, the
//! span of the Cayley ball of radius `m`, and running power iteration on
//! `T*T`. The Haagerup bound `Σ_k (1+k) ‖f|_{S_k}‖_2` bounds it from above.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{Block, FourierCoefficients};
use crate::repdata::{GroupDescriptor, IrrLabel, Letter, Word, MAX_TEXT_RANK};
use crate::stats::ols_fit;

/// Largest ball the truncation machinery will enumerate.
pub const BALL_LIMIT: u128 = 5_000_000;
/// Default relative tolerance of the power iteration.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Iteration cap of the power iteration.
pub const MAX_ITERATIONS: usize = 10_000;

/// Finitely supported `f: F_N → ℂ`, standing for `λ(f) = Σ f(g) λ_g`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElementCoeffs {
    rank: usize,
    terms: BTreeMap<Word, Complex64>,
}

impl GroupElementCoeffs {
    pub fn new(rank: usize) -> Result<Self> {
        if !(2..=MAX_TEXT_RANK).contains(&rank) {
            return Err(Error::InvalidGroup(format!(
                "free group rank must lie in 2..={MAX_TEXT_RANK}, got {rank}"
            )));
        }
        Ok(GroupElementCoeffs {
            rank,
            terms: BTreeMap::new(),
        })
    }

    /// `δ_g`.
    pub fn delta(rank: usize, g: Word) -> Result<Self> {
        let mut f = Self::new(rank)?;
        f.add_term(g, Complex64::new(1.0, 0.0))?;
        Ok(f)
    }

    /// `σ_k = Σ_{|g|=k} δ_g`.
    pub fn sphere_indicator(rank: usize, k: usize) -> Result<Self> {
        let ball = enumerate_ball(rank, k)?;
        let mut f = Self::new(rank)?;
        for w in ball.sphere(k) {
            f.add_term(w.clone(), Complex64::new(1.0, 0.0))?;
        }
        Ok(f)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Adds `c` to the coefficient of `g`.
    pub fn add_term(&mut self, g: Word, c: Complex64) -> Result<()> {
        if g.max_generator() > self.rank {
            return Err(Error::LabelMismatch {
                group: format!("fdual:{}", self.rank),
                label: g.to_string(),
            });
        }
        *self.terms.entry(g).or_default() += c;
        Ok(())
    }

    pub fn with_term(mut self, g: Word, c: Complex64) -> Result<Self> {
        self.add_term(g, c)?;
        Ok(self)
    }

    pub fn coeff(&self, g: &Word) -> Complex64 {
        self.terms.get(g).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.terms.iter()
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), *c)?;
        }
        Ok(out)
    }

    /// Largest word length carrying a nonzero coefficient.
    pub fn support_radius(&self) -> usize {
        self.terms
            .iter()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(w, _)| w.len())
            .max()
            .unwrap_or(0)
    }

    /// `(Σ_{|g|=k} |f(g)|²)^{1/2}` for each `k` up to the support radius.
    pub fn sphere_norms(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.support_radius() + 1];
        for (w, c) in &self.terms {
            if let Some(slot) = out.get_mut(w.len()) {
                *slot += c.norm_sqr();
            }
        }
        out.into_iter().map(f64::sqrt).collect()
    }

    /// `‖f‖_{ℓ²} = ‖λ(f)δ_e‖`.
    pub fn l2_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// The same data as Fourier coefficients on the dual of `F_N`.
    pub fn to_fourier(&self) -> FourierCoefficients {
        let group = GroupDescriptor::dual_free_group(self.rank).expect("rank validated");
        let mut f = FourierCoefficients::new(group);
        for (w, c) in &self.terms {
            f.insert(IrrLabel::Word(w.clone()), Block::scalar(1u32, *c))
                .expect("words fit the rank");
        }
        f
    }

    pub fn to_json(&self) -> String {
        let doc = ElementDoc {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TermDoc {
                    word: w.to_string(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let doc: ElementDoc = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        let mut f = Self::new(doc.rank)?;
        for t in doc.terms {
            f.add_term(t.word.parse()?, Complex64::new(t.re, t.im))?;
        }
        Ok(f)
    }
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    word: String,
    #[serde(default)]
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct ElementDoc {
    #[serde(rename = "N")]
    rank: usize,
    terms: Vec<TermDoc>,
}

/// `|B_m| = 1 + Σ_{k=1}^m 2N(2N-1)^{k-1}`, saturating.
pub fn ball_cardinality(rank: usize, m: usize) -> u128 {
    let mut total: u128 = 1;
    let mut sphere: u128 = 2 * rank as u128;
    for _ in 0..m {
        total = total.saturating_add(sphere);
        sphere = sphere.saturating_mul(2 * rank as u128 - 1);
    }
    total
}

/// Cayley ball of radius `m` in `F_N`, in breadth-first order: spheres by
/// increasing radius, each sphere obtained by extending the previous one on
/// the right in alphabet order.
#[derive(Clone, Debug)]
pub struct Ball {
    rank: usize,
    radius: usize,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    sphere_starts: Vec<usize>,
}

impl Ball {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn position(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Words of length exactly `k ≤ radius`.
    pub fn sphere(&self, k: usize) -> &[Word] {
        &self.words[self.sphere_starts[k]..self.sphere_starts[k + 1]]
    }
}

pub fn enumerate_ball(rank: usize, m: usize) -> Result<Ball> {
    GroupElementCoeffs::new(rank)?;
    let size = ball_cardinality(rank, m);
    if size > BALL_LIMIT {
        return Err(Error::BallTooLarge {
            rank,
            radius: m,
            size,
            limit: BALL_LIMIT,
        });
    }
    let alphabet = Letter::alphabet(rank);
    let mut words = Vec::with_capacity(size as usize);
    let mut sphere_starts = vec![0, 1];
    words.push(Word::identity());
    for _ in 0..m {
        let (lo, hi) = (sphere_starts[sphere_starts.len() - 2], words.len());
        for i in lo..hi {
            let last = words[i].last();
            for &l in &alphabet {
                if last != Some(l.inverse()) {
                    let next = words[i].push(l);
                    words.push(next);
                }
            }
        }
        sphere_starts.push(words.len());
    }
    let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    Ok(Ball {
        rank,
        radius: m,
        words,
        index,
        sphere_starts,
    })
}

/// Compression `P_m λ(f) P_m` in compressed-row form, together with its
/// adjoint.
struct Compression {
    offsets: Vec<usize>,
    entries: Vec<(u32, Complex64)>,
    adj_offsets: Vec<usize>,
    adj_entries: Vec<(u32, Complex64)>,
}

impl Compression {
    fn new(f: &GroupElementCoeffs, ball: &Ball) -> Self {
        let terms: Vec<(&Word, Complex64, Word)> = f
            .terms
            .iter()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(g, c)| (g, *c, g.inverse()))
            .collect();
        let build = |adjoint: bool| {
            let mut offsets = Vec::with_capacity(ball.len() + 1);
            let mut entries = Vec::new();
            offsets.push(0);
            for x in &ball.words {
                // (λ(f)v)(x) = Σ_g f(g) v(g⁻¹x); the adjoint uses g x and conj f(g)
                for (g, c, ginv) in &terms {
                    let (y, c) = if adjoint {
                        (g.mul(x), c.conj())
                    } else {
                        (ginv.mul(x), *c)
                    };
                    if let Some(j) = ball.position(&y) {
                        entries.push((j as u32, c));
                    }
                }
                offsets.push(entries.len());
            }
            (offsets, entries)
        };
        let (offsets, entries) = build(false);
        let (adj_offsets, adj_entries) = build(true);
        Compression {
            offsets,
            entries,
            adj_offsets,
            adj_entries,
        }
    }

    fn apply(offsets: &[usize], entries: &[(u32, Complex64)], v: &[Complex64]) -> Vec<Complex64> {
        (0..offsets.len() - 1)
            .into_par_iter()
            .map(|i| {
                entries[offsets[i]..offsets[i + 1]]
                    .iter()
                    .map(|&(j, c)| c * v[j as usize])
                    .sum()
            })
            .collect()
    }

    fn forward(&self, v: &[Complex64]) -> Vec<Complex64> {
        Self::apply(&self.offsets, &self.entries, v)
    }

    fn backward(&self, v: &[Complex64]) -> Vec<Complex64> {
        Self::apply(&self.adj_offsets, &self.adj_entries, v)
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let n = norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|z| *z /= n);
    }
    n
}

/// Deterministic dense start vector used when the iterate collapses.
fn perturbed_start(len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|i| Complex64::new(1.0 + ((i * 7919) % 97) as f64 / 97.0, 0.0))
        .collect()
}

/// `‖P_m λ(f) P_m‖` by power iteration on `T*T` from `δ_e`; the Rayleigh
/// quotient is a lower bound for `‖λ(f)‖`. Requires `support radius + 2 ≤ m`.
pub fn truncated_operator_norm(f: &GroupElementCoeffs, m: usize, tol: f64) -> Result<f64> {
    let r = f.support_radius();
    if r + 2 > m {
        return Err(Error::SupportTooWide {
            support_radius: r,
            radius: m,
            required: r + 2,
        });
    }
    let ball = enumerate_ball(f.rank, m)?;
    truncated_operator_norm_on(f, &ball, tol)
}

/// As [`truncated_operator_norm`], reusing an enumerated ball.
pub fn truncated_operator_norm_on(f: &GroupElementCoeffs, ball: &Ball, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let r = f.support_radius();
    if r + 2 > ball.radius || f.rank != ball.rank {
        return Err(Error::SupportTooWide {
            support_radius: r,
            radius: ball.radius,
            required: r + 2,
        });
    }
    let op = Compression::new(f, ball);
    if op.entries.is_empty() {
        return Ok(0.0);
    }
    let mut v = vec![Complex64::new(0.0, 0.0); ball.len()];
    v[0] = Complex64::new(1.0, 0.0);
    let mut restarted = false;
    let (mut prev, mut last) = (0.0, 0.0);
    for _ in 0..MAX_ITERATIONS {
        let u = op.forward(&v);
        let est = norm(&u);
        let mut w = op.backward(&u);
        if normalize(&mut w) == 0.0 {
            if restarted {
                return Ok(est);
            }
            restarted = true;
            v = perturbed_start(ball.len());
            normalize(&mut v);
            continue;
        }
        v = w;
        if (est - last).abs() <= tol * est {
            return Ok(est);
        }
        prev = last;
        last = est;
    }
    Err(Error::NotConverged {
        iterations: MAX_ITERATIONS,
        last,
        previous: prev,
    })
}

/// Truncated norms over several radii and their extrapolation to `m → ∞`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Extrapolation {
    pub samples: Vec<(usize, f64)>,
    /// Intercept of the least-squares fit `λ(m) = L + C m^{-2}`.
    pub limit: f64,
}

/// Fits `λ(m) ≈ L + C/m²` to the truncated norms at `radii` and reports `L`.
pub fn extrapolated_operator_norm(
    f: &GroupElementCoeffs,
    radii: &[usize],
    tol: f64,
) -> Result<Extrapolation> {
    if radii.len() < 2 {
        return Err(Error::InvalidParameter(
            "extrapolation needs at least two radii".into(),
        ));
    }
    let samples = radii
        .iter()
        .map(|&m| truncated_operator_norm(f, m, tol).map(|v| (m, v)))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(m, v)| ((m as f64).powi(-2), v))
        .collect();
    let (limit, _) = ols_fit(&points);
    Ok(Extrapolation { samples, limit })
}

/// `Σ_k (1+k) (Σ_{|g|=k} |f(g)|²)^{1/2}`, an upper bound for `‖λ(f)‖`.
pub fn haagerup_upper_bound(f: &GroupElementCoeffs) -> f64 {
    f.sphere_norms()
        .iter()
        .enumerate()
        .map(|(k, s)| (1 + k) as f64 * s)
        .sum()
}

/// Both sides of the radial norm equivalence for `F_N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialEquivalence {
    /// Truncated norm of `Σ_k a_k σ_k / √s_k`.
    pub lhs: f64,
    /// `Σ_k (k+1) a_k`.
    pub rhs: f64,
    pub ratio: f64,
}

pub fn radial_equivalence_report(rank: usize, a: &[f64], m: usize) -> Result<RadialEquivalence> {
    if a.is_empty() || a.iter().any(|x| !(*x >= 0.0)) {
        return Err(Error::InvalidParameter(
            "radial coefficients must be non-empty and non-negative".into(),
        ));
    }
    let top = a.len() - 1;
    if top + 2 > m {
        return Err(Error::SupportTooWide {
            support_radius: top,
            radius: m,
            required: top + 2,
        });
    }
    let ball = enumerate_ball(rank, m)?;
    let mut f = GroupElementCoeffs::new(rank)?;
    for (k, &ak) in a.iter().enumerate() {
        if ak == 0.0 {
            continue;
        }
        let sphere = ball.sphere(k);
        let c = Complex64::new(ak / (sphere.len() as f64).sqrt(), 0.0);
        for w in sphere {
            f.add_term(w.clone(), c)?;
        }
    }
    let lhs = truncated_operator_norm_on(&f, &ball, DEFAULT_TOL)?;
    let rhs: f64 = a.iter().enumerate().map(|(k, x)| (k + 1) as f64 * x).sum();
    Ok(RadialEquivalence {
        lhs,
        rhs,
        ratio: lhs / rhs,
    })
}
