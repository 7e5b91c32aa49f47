//! Fourier coefficients on the discrete dual, noncommutative `ℓ^p` norms,
//! radial multipliers and the exponent arithmetic of complex interpolation
//! between weighted `ℓ^p` spaces.
//!
//! A coefficient family `f̂ = (f̂(α))_α` lives in `⊕_α M_{n_α}` with the trace
//! weight `Σ_α n_α tr(·)`. Blocks of huge dimension (free quantum groups at
//! large degree) are only representable as scalar multiples of the identity;
//! their norms are evaluated in log space so that `n_α` never has to fit in
//! an `f64`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::repdata::{self, big_to_f64, ln_big, GroupDescriptor, IrrLabel};

/// Largest dimension for which a dense block is accepted.
pub const DENSE_DIM_LIMIT: usize = 64;

/// One Fourier coefficient `f̂(α) ∈ M_{n_α}`.
#[derive(Clone, Debug, PartialEq)]
pub enum Block {
    ScalarTimesIdentity { dim: BigUint, value: Complex64 },
    Dense(DMatrix<Complex64>),
}

impl Block {
    pub fn scalar(dim: impl Into<BigUint>, value: Complex64) -> Self {
        Block::ScalarTimesIdentity {
            dim: dim.into(),
            value,
        }
    }

    pub fn dense(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::InvalidParameter(format!(
                "dense block must be square and non-empty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() > DENSE_DIM_LIMIT {
            return Err(Error::DenseTooLarge {
                dim: m.nrows(),
                limit: DENSE_DIM_LIMIT,
            });
        }
        Ok(Block::Dense(m))
    }

    pub fn dim(&self) -> BigUint {
        match self {
            Block::ScalarTimesIdentity { dim, .. } => dim.clone(),
            Block::Dense(m) => BigUint::from(m.nrows()),
        }
    }

    fn ln_dim(&self) -> f64 {
        match self {
            Block::ScalarTimesIdentity { dim, .. } => ln_big(dim),
            Block::Dense(m) => (m.nrows() as f64).ln(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> Block {
        match self {
            Block::ScalarTimesIdentity { dim, value } => Block::ScalarTimesIdentity {
                dim: dim.clone(),
                value: value * c,
            },
            Block::Dense(m) => Block::Dense(m * c),
        }
    }

    fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
        m.clone().singular_values().iter().copied().collect()
    }

    /// Operator norm.
    pub fn operator_norm(&self) -> f64 {
        match self {
            Block::ScalarTimesIdentity { value, .. } => value.norm(),
            Block::Dense(m) => Self::singular_values(m).into_iter().fold(0.0, f64::max),
        }
    }

    /// `ln tr(|A|^p)`, `-inf` for the zero block.
    fn ln_trace_power(&self, p: f64) -> f64 {
        match self {
            Block::ScalarTimesIdentity { dim, value } => ln_big(dim) + p * value.norm().ln(),
            Block::Dense(m) => Self::singular_values(m)
                .into_iter()
                .map(|s| s.powf(p))
                .sum::<f64>()
                .ln(),
        }
    }

    /// Schatten norm `‖A‖_{S^p}`.
    pub fn schatten_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.operator_norm();
        }
        (self.ln_trace_power(p) / p).exp()
    }

    /// `‖A‖_{HS}^2`.
    pub fn hs_norm_sq(&self) -> f64 {
        match self {
            Block::ScalarTimesIdentity { .. } => self.ln_trace_power(2.0).exp(),
            Block::Dense(m) => m.iter().map(|z| z.norm_sqr()).sum(),
        }
    }

    fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        match self {
            Block::Dense(m) => Ok(m.clone()),
            Block::ScalarTimesIdentity { dim, value } => {
                let n = usize::try_from(dim.clone())
                    .ok()
                    .filter(|n| *n <= DENSE_DIM_LIMIT)
                    .ok_or(Error::DenseTooLarge {
                        dim: usize::MAX,
                        limit: DENSE_DIM_LIMIT,
                    })?;
                Ok(DMatrix::from_diagonal_element(n, n, *value))
            }
        }
    }
}

/// `f̂`: finitely supported family of blocks indexed by irreducibles.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoefficients {
    group: GroupDescriptor,
    support: BTreeMap<IrrLabel, Block>,
}

impl FourierCoefficients {
    pub fn new(group: GroupDescriptor) -> Self {
        FourierCoefficients {
            group,
            support: BTreeMap::new(),
        }
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    /// Inserts (or replaces) the block at `label` after checking that its
    /// dimension equals `n_α`.
    pub fn insert(&mut self, label: IrrLabel, block: Block) -> Result<()> {
        let expected = repdata::dimension(&self.group, &label)?;
        let found = block.dim();
        if expected != found {
            return Err(Error::BlockDimension {
                label: label.to_string(),
                expected: expected.to_string(),
                found: found.to_string(),
            });
        }
        self.support.insert(label, block);
        Ok(())
    }

    pub fn with(mut self, label: IrrLabel, block: Block) -> Result<Self> {
        self.insert(label, block)?;
        Ok(self)
    }

    pub fn get(&self, label: &IrrLabel) -> Option<&Block> {
        self.support.get(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IrrLabel, &Block)> {
        self.support.iter()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    fn length_of(&self, label: &IrrLabel) -> u64 {
        repdata::length(&self.group, label).expect("labels are validated on insert")
    }

    /// `Σ_{α∈S_k} n_α ‖f̂(α)‖_{HS}^2` for every sphere that meets the support.
    pub fn sphere_energies(&self) -> BTreeMap<u64, f64> {
        let mut out = BTreeMap::new();
        for (label, block) in &self.support {
            let e = (block.ln_dim() + block.hs_norm_sq().ln()).exp();
            *out.entry(self.length_of(label)).or_insert(0.0) += e;
        }
        out
    }
}

/// `Σ_k a_k χ_k` on an integer-labelled group, stored by degree.
/// Interconverts with [`FourierCoefficients`] via `f̂(k) = (a_k / n_k) Id`.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralElement {
    group: GroupDescriptor,
    coeffs: BTreeMap<u64, Complex64>,
}

impl CentralElement {
    pub fn new(group: GroupDescriptor) -> Result<Self> {
        if !group.is_nonneg_int_labelled() {
            return Err(Error::NotNonNegIntLabelled {
                group: group.to_string(),
            });
        }
        Ok(CentralElement {
            group,
            coeffs: BTreeMap::new(),
        })
    }

    /// Real coefficients `a_0, a_1, ...`.
    pub fn from_real(group: GroupDescriptor, coeffs: &[f64]) -> Result<Self> {
        let mut c = Self::new(group)?;
        for (k, &a) in coeffs.iter().enumerate() {
            c.set(k as u64, Complex64::new(a, 0.0));
        }
        Ok(c)
    }

    /// The character `χ_k`.
    pub fn character(group: GroupDescriptor, k: u64) -> Result<Self> {
        let mut c = Self::new(group)?;
        c.set(k, Complex64::new(1.0, 0.0));
        Ok(c)
    }

    pub fn from_map(group: GroupDescriptor, coeffs: BTreeMap<u64, Complex64>) -> Result<Self> {
        let mut c = Self::new(group)?;
        c.coeffs = coeffs;
        Ok(c)
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn set(&mut self, k: u64, a: Complex64) {
        self.coeffs.insert(k, a);
    }

    pub fn coeff(&self, k: u64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &BTreeMap<u64, Complex64> {
        &self.coeffs
    }

    pub fn max_degree(&self) -> u64 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn to_fourier(&self) -> FourierCoefficients {
        let dims = repdata::dimension_sequence(&self.group, self.max_degree())
            .expect("integer-labelled group");
        let mut f = FourierCoefficients::new(self.group);
        for (&k, &a) in &self.coeffs {
            let n = &dims[k as usize];
            let value = scale_by_ln(a, -ln_big(n));
            f.support.insert(IrrLabel::NonNegInt(k), Block::scalar(n.clone(), value));
        }
        f
    }

    /// Inverse of [`CentralElement::to_fourier`]; every block must be a
    /// scalar multiple of the identity.
    pub fn from_fourier(f: &FourierCoefficients) -> Result<Self> {
        let mut c = Self::new(f.group)?;
        for (label, block) in &f.support {
            let IrrLabel::NonNegInt(k) = label else {
                unreachable!("integer-labelled group")
            };
            match block {
                Block::ScalarTimesIdentity { dim, value } => {
                    c.set(*k, scale_by_ln(*value, ln_big(dim)));
                }
                Block::Dense(_) => {
                    return Err(Error::Unsupported(format!(
                        "dense block at degree {k} is not central"
                    )))
                }
            }
        }
        Ok(c)
    }

    /// Scales `a_k` by `w(k)`.
    pub fn apply_multiplier<W: RadialWeight + ?Sized>(&self, w: &W) -> CentralElement {
        CentralElement {
            group: self.group,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&k, &a)| (k, a * w.weight(k)))
                .collect(),
        }
    }

    /// `(Σ_k |a_k|^2)^{1/2}`: the characters are orthonormal in `L^2`.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

fn scale_by_ln(z: Complex64, ln_factor: f64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    let r = (z.norm().ln() + ln_factor).exp();
    Complex64::from_polar(r, z.arg())
}

/// Weight depending on the length `|α|` only.
pub trait RadialWeight {
    fn weight(&self, k: u64) -> f64;
}

impl<F: Fn(u64) -> f64> RadialWeight for F {
    fn weight(&self, k: u64) -> f64 {
        self(k)
    }
}

/// Named radial weight families, all powers of `(1+k)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WeightSpec {
    /// `(1+k)^{-s(2/p-1)/2}`: square-root of the Sobolev weight, so that the
    /// squared weight is `(1+k)^{-s(2/p-1)}`.
    Sobolev { s: f64, p: f64 },
    /// `(1+k)^{-β(p'-2)}`: outer weight of the sharpened Hausdorff–Young norm.
    SharpHy { beta: f64, p: f64 },
    /// `(1+k)^{-(β+1)(2-p)}`: Hardy–Littlewood weight.
    HardyLittlewood { beta: f64, p: f64 },
    /// `(1+k)^{-s}`: rapid-decay multiplier.
    RapidDecay { s: f64 },
    /// `(1+k)^e`.
    PlainPower { e: f64 },
}

impl WeightSpec {
    /// Exponent `e` with `w(k) = (1+k)^e`.
    pub fn exponent(&self) -> f64 {
        match *self {
            WeightSpec::Sobolev { s, p } => -s * (2.0 / p - 1.0) / 2.0,
            WeightSpec::SharpHy { beta, p } => -beta * (conjugate_exponent(p) - 2.0),
            WeightSpec::HardyLittlewood { beta, p } => -(beta + 1.0) * (2.0 - p),
            WeightSpec::RapidDecay { s } => -s,
            WeightSpec::PlainPower { e } => e,
        }
    }
}

impl RadialWeight for WeightSpec {
    fn weight(&self, k: u64) -> f64 {
        (1.0 + k as f64).powf(self.exponent())
    }
}

/// `p' = p / (p - 1)`, with `1' = ∞` and `∞' = 1`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// `‖A‖_{ℓ^p} = (Σ_α n_α tr|A_α|^p)^{1/p}`; `p = ∞` gives `max_α ‖A_α‖`.
pub fn dual_lp_norm(coeffs: &FourierCoefficients, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent {
            value: p,
            range: "[1, ∞]",
        });
    }
    if p.is_infinite() {
        return Ok(coeffs
            .support
            .values()
            .map(Block::operator_norm)
            .fold(0.0, f64::max));
    }
    let total: f64 = coeffs
        .support
        .values()
        .map(|b| (b.ln_dim() + b.ln_trace_power(p)).exp())
        .sum();
    Ok(total.powf(1.0 / p))
}

/// `‖f‖_{L^2} = ‖f̂‖_{ℓ^2}`.
pub fn plancherel_l2_norm(coeffs: &FourierCoefficients) -> f64 {
    dual_lp_norm(coeffs, 2.0).expect("p = 2 is admissible")
}

/// Dual bracket `⟨A, B⟩ = Σ_α n_α tr(B_α A_α)` over the common support.
pub fn dual_pairing(a: &FourierCoefficients, b: &FourierCoefficients) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (label, x) in &a.support {
        let Some(y) = b.support.get(label) else {
            continue;
        };
        let term = match (x, y) {
            (
                Block::ScalarTimesIdentity { dim, value: u },
                Block::ScalarTimesIdentity { value: v, .. },
            ) => scale_by_ln(u * v, 2.0 * ln_big(dim)),
            _ => {
                let (xm, ym) = (x.to_dense()?, y.to_dense()?);
                (ym * xm).trace() * xm_dim(x)
            }
        };
        acc += term;
    }
    Ok(acc)
}

fn xm_dim(b: &Block) -> f64 {
    big_to_f64(&b.dim())
}

/// Scales the block at `α` by `w(|α|)`.
pub fn apply_multiplier<W: RadialWeight + ?Sized>(
    coeffs: &FourierCoefficients,
    w: &W,
) -> FourierCoefficients {
    let support = coeffs
        .support
        .iter()
        .map(|(label, block)| {
            let k = coeffs.length_of(label);
            (label.clone(), block.scaled(Complex64::new(w.weight(k), 0.0)))
        })
        .collect();
    FourierCoefficients {
        group: coeffs.group,
        support,
    }
}

/// Restriction to the sphere `{α : |α| = k}`.
pub fn project_sphere(coeffs: &FourierCoefficients, k: u64) -> FourierCoefficients {
    let support = coeffs
        .support
        .iter()
        .filter(|(label, _)| coeffs.length_of(label) == k)
        .map(|(l, b)| (l.clone(), b.clone()))
        .collect();
    FourierCoefficients {
        group: coeffs.group,
        support,
    }
}

/// Two-level norm `(Σ_k w(k) (Σ_{α∈S_k} n_α ‖f̂(α)‖_{S^2}^2)^{q/2})^{1/q}`.
///
/// For `q = ∞` the weight is folded into the supremum:
/// `sup_k w(k) (Σ_{α∈S_k} n_α ‖f̂(α)‖_{S^2}^2)^{1/2}`.
pub fn mixed_norm<W: RadialWeight + ?Sized>(
    coeffs: &FourierCoefficients,
    q: f64,
    w: &W,
) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidExponent {
            value: q,
            range: "[1, ∞]",
        });
    }
    let energies = coeffs.sphere_energies();
    if q.is_infinite() {
        return Ok(energies
            .iter()
            .map(|(&k, &e)| w.weight(k) * e.sqrt())
            .fold(0.0, f64::max));
    }
    let total: f64 = energies
        .iter()
        .map(|(&k, &e)| w.weight(k) * e.powf(q / 2.0))
        .sum();
    Ok(total.powf(1.0 / q))
}

/// `(Σ_α n_α^{p'/2-1} (1+|α|)^{-β(p'-2)} n_α ‖f̂(α)‖_{S^{p'}}^{p'})^{1/p'}`.
pub fn schatten_weighted_norm(coeffs: &FourierCoefficients, p_dual: f64, beta: f64) -> Result<f64> {
    if p_dual.is_nan() || p_dual < 2.0 || p_dual.is_infinite() {
        return Err(Error::InvalidExponent {
            value: p_dual,
            range: "[2, ∞)",
        });
    }
    let total: f64 = coeffs
        .support
        .iter()
        .map(|(label, block)| {
            let k = coeffs.length_of(label) as f64;
            let ln_n = block.ln_dim();
            let ln_term = (p_dual / 2.0) * ln_n - beta * (p_dual - 2.0) * (1.0 + k).ln()
                + block.ln_trace_power(p_dual);
            ln_term.exp()
        })
        .sum();
    Ok(total.powf(1.0 / p_dual))
}

/// Exponent of `μ = μ_0^{p(1-θ)/p_0} μ_1^{pθ/p_1}` when `μ_i(k) = (1+k)^{e_i}`,
/// for the interpolation space between `ℓ^{p_0}(μ_0)` and `ℓ^{p_1}(μ_1)`.
/// Endpoints may be infinite.
pub fn interp_weight_combine(
    mu0_exp: f64,
    p0: f64,
    mu1_exp: f64,
    p1: f64,
    theta: f64,
    p_target: f64,
) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InadmissibleInterpolation(format!(
            "θ = {theta} is not in (0, 1)"
        )));
    }
    let inv = |p: f64| if p.is_infinite() { 0.0 } else { 1.0 / p };
    let lhs = (1.0 - theta) * inv(p0) + theta * inv(p1);
    if (lhs - inv(p_target)).abs() > 1e-12 {
        return Err(Error::InadmissibleInterpolation(format!(
            "(1-θ)/p0 + θ/p1 = {lhs} but 1/p = {}",
            inv(p_target)
        )));
    }
    let term = |e: f64, t: f64, p: f64| if p.is_infinite() { 0.0 } else { e * p_target * t / p };
    Ok(term(mu0_exp, 1.0 - theta, p0) + term(mu1_exp, theta, p1))
}

// ---------------------------------------------------------------------------
// JSON documents: {"group": "...", "coeffs": [{"label": ..., "block": ...}]}
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum BlockDoc {
    /// `value · Id_{n_α}`.
    Scalar([f64; 2]),
    /// Coefficient `a_k` of `χ_k`, i.e. `(a_k/n_k) · Id`.
    Character([f64; 2]),
    Dense {
        re: Vec<Vec<f64>>,
        im: Vec<Vec<f64>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct EntryDoc {
    label: IrrLabel,
    block: BlockDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct CoeffDoc {
    group: GroupDescriptor,
    coeffs: Vec<EntryDoc>,
}

fn parse_doc(json: &str) -> Result<CoeffDoc> {
    serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
}

fn c64(z: [f64; 2]) -> Complex64 {
    Complex64::new(z[0], z[1])
}

impl FourierCoefficients {
    pub fn to_json(&self) -> String {
        let coeffs = self
            .support
            .iter()
            .map(|(label, block)| EntryDoc {
                label: label.clone(),
                block: match block {
                    Block::ScalarTimesIdentity { value, .. } => BlockDoc::Scalar([value.re, value.im]),
                    Block::Dense(m) => BlockDoc::Dense {
                        re: m.row_iter().map(|r| r.iter().map(|z| z.re).collect()).collect(),
                        im: m.row_iter().map(|r| r.iter().map(|z| z.im).collect()).collect(),
                    },
                },
            })
            .collect();
        serde_json::to_string(&CoeffDoc {
            group: self.group,
            coeffs,
        })
        .expect("serializable")
    }

    /// Accepts `scalar`, `dense` and `character` blocks.
    pub fn from_json(json: &str) -> Result<Self> {
        let doc = parse_doc(json)?;
        let mut f = FourierCoefficients::new(doc.group);
        for entry in doc.coeffs {
            let n = repdata::dimension(&doc.group, &entry.label)?;
            let block = match entry.block {
                BlockDoc::Scalar(v) => Block::scalar(n, c64(v)),
                BlockDoc::Character(v) => {
                    let value = scale_by_ln(c64(v), -ln_big(&n));
                    Block::scalar(n, value)
                }
                BlockDoc::Dense { re, im } => {
                    let d = re.len();
                    if im.len() != d || re.iter().chain(&im).any(|r| r.len() != d) {
                        return Err(Error::Parse("dense block must be square".into()));
                    }
                    Block::dense(DMatrix::from_fn(d, d, |i, j| Complex64::new(re[i][j], im[i][j])))?
                }
            };
            f.insert(entry.label, block)?;
        }
        Ok(f)
    }
}

impl CentralElement {
    pub fn to_json(&self) -> String {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, a)| EntryDoc {
                label: IrrLabel::NonNegInt(k),
                block: BlockDoc::Character([a.re, a.im]),
            })
            .collect();
        serde_json::to_string(&CoeffDoc {
            group: self.group,
            coeffs,
        })
        .expect("serializable")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Self::from_fourier(&FourierCoefficients::from_json(json)?)
    }
}
