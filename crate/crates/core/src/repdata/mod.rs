//! Representation data of the supported compact matrix quantum groups:
//! irreducible labels, dimensions `n_α`, lengths `|α|`, fusion rules and the
//! sphere/ball counters `s_k`, `b_k`.
//!
//! Fusion rules used here:
//! * `O_N^+` and `SU(2)`: `a ⊗ b = |a-b| ⊕ (|a-b|+2) ⊕ ... ⊕ (a+b)`.
//! * `S_N^+` and `SO(3)`: `a ⊗ b = |a-b| ⊕ (|a-b|+1) ⊕ ... ⊕ (a+b)`.
//! * duals of `Z^d` and `F_N`: `g ⊗ h = gh`.
//!
//! The dimension recurrences follow from tensoring with the fundamental
//! representation: `k ⊗ 1 = (k-1) ⊕ (k+1)` gives `n_{k+1} = N n_k - n_{k-1}`
//! for `O_N^+`, and `k ⊗ 1 = (k-1) ⊕ k ⊕ (k+1)` gives
//! `n_{k+1} = (N-2) n_k - n_{k-1}` for `S_N^+` (with `n_1 = N - 1`).

mod word;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{AddAssign, Mul};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use word::{Letter, Word, MAX_TEXT_RANK};

/// Which quantum group is in play. Every variant is of Kac type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// Dual of the lattice `Z^d`.
    DualZd { d: usize },
    /// Dual of the free group `F_N`.
    DualFreeGroup { n: usize },
    /// Free orthogonal quantum group `O_N^+`.
    FreeOrthogonal { n: usize },
    /// Free permutation quantum group `S_N^+`.
    FreePermutation { n: usize },
    Su2,
    So3,
}

/// A validated [`GroupKind`]. Parameter bounds are checked on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupDescriptor(GroupKind);

impl GroupDescriptor {
    pub fn new(kind: GroupKind) -> Result<Self> {
        let ok = match kind {
            GroupKind::DualZd { d } => d >= 1,
            GroupKind::DualFreeGroup { n } => (2..=MAX_TEXT_RANK).contains(&n),
            GroupKind::FreeOrthogonal { n } => n >= 2,
            GroupKind::FreePermutation { n } => n >= 4,
            GroupKind::Su2 | GroupKind::So3 => true,
        };
        if ok {
            Ok(GroupDescriptor(kind))
        } else {
            Err(Error::InvalidGroup(format!("{kind:?} violates its parameter bounds")))
        }
    }

    pub fn dual_zd(d: usize) -> Result<Self> {
        Self::new(GroupKind::DualZd { d })
    }

    pub fn dual_free_group(n: usize) -> Result<Self> {
        Self::new(GroupKind::DualFreeGroup { n })
    }

    pub fn free_orthogonal(n: usize) -> Result<Self> {
        Self::new(GroupKind::FreeOrthogonal { n })
    }

    pub fn free_permutation(n: usize) -> Result<Self> {
        Self::new(GroupKind::FreePermutation { n })
    }

    pub fn su2() -> Self {
        GroupDescriptor(GroupKind::Su2)
    }

    pub fn so3() -> Self {
        GroupDescriptor(GroupKind::So3)
    }

    pub fn kind(&self) -> GroupKind {
        self.0
    }

    /// Irreducibles are labelled by degrees `k = 0, 1, 2, ...`.
    pub fn is_nonneg_int_labelled(&self) -> bool {
        matches!(
            self.0,
            GroupKind::FreeOrthogonal { .. }
                | GroupKind::FreePermutation { .. }
                | GroupKind::Su2
                | GroupKind::So3
        )
    }

    /// Polynomial growth order `γ` with `b_k ≈ (1+k)^γ`, if the dual grows
    /// polynomially.
    pub fn growth_order(&self) -> Option<f64> {
        match self.0 {
            GroupKind::DualZd { d } => Some(d as f64),
            GroupKind::FreeOrthogonal { n: 2 } | GroupKind::FreePermutation { n: 4 } => Some(3.0),
            GroupKind::Su2 | GroupKind::So3 => Some(3.0),
            _ => None,
        }
    }

    pub fn has_polynomial_growth(&self) -> bool {
        self.growth_order().is_some()
    }

    /// Upper envelope `s_k <= constant (1+k)^degree rate^k`, of the exact
    /// asymptotic order of `s_k`.
    pub fn sphere_growth(&self) -> SphereGrowth {
        match self.0 {
            GroupKind::DualZd { d } => SphereGrowth {
                constant: 2f64.powi(d as i32),
                degree: (d - 1) as f64,
                rate: 1.0,
            },
            GroupKind::DualFreeGroup { n } => {
                let r = (2 * n - 1) as f64;
                SphereGrowth {
                    constant: 2.0 * n as f64 / r,
                    degree: 0.0,
                    rate: r,
                }
            }
            GroupKind::FreeOrthogonal { n } => recurrence_envelope(n as f64, n as f64),
            GroupKind::FreePermutation { n } => {
                recurrence_envelope((n - 2) as f64, (n - 1) as f64)
            }
            GroupKind::Su2 => recurrence_envelope(2.0, 2.0),
            GroupKind::So3 => recurrence_envelope(2.0, 3.0),
        }
    }

    /// Human-readable mathematical name.
    pub fn pretty(&self) -> String {
        match self.0 {
            GroupKind::DualZd { d } => format!("dual of Z^{d}"),
            GroupKind::DualFreeGroup { n } => format!("dual of F_{n}"),
            GroupKind::FreeOrthogonal { n } => format!("O_{n}^+"),
            GroupKind::FreePermutation { n } => format!("S_{n}^+"),
            GroupKind::Su2 => "SU(2)".into(),
            GroupKind::So3 => "SO(3)".into(),
        }
    }
}

/// Selector grammar: `oplus:N`, `splus:N`, `fdual:N`, `zd:d`, `su2`, `so3`.
impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            GroupKind::DualZd { d } => write!(f, "zd:{d}"),
            GroupKind::DualFreeGroup { n } => write!(f, "fdual:{n}"),
            GroupKind::FreeOrthogonal { n } => write!(f, "oplus:{n}"),
            GroupKind::FreePermutation { n } => write!(f, "splus:{n}"),
            GroupKind::Su2 => f.write_str("su2"),
            GroupKind::So3 => f.write_str("so3"),
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "su2" => return Ok(Self::su2()),
            "so3" => return Ok(Self::so3()),
            _ => {}
        }
        let (name, param) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unknown group selector {s:?}")))?;
        let n: usize = param
            .parse()
            .map_err(|_| Error::Parse(format!("bad group parameter {param:?} in {s:?}")))?;
        match name {
            "oplus" => Self::free_orthogonal(n),
            "splus" => Self::free_permutation(n),
            "fdual" => Self::dual_free_group(n),
            "zd" => Self::dual_zd(n),
            _ => Err(Error::Parse(format!("unknown group selector {s:?}"))),
        }
    }
}

impl Serialize for GroupDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `s_k <= constant * (1+k)^degree * rate^k`, with the same asymptotic order
/// as `s_k` itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereGrowth {
    pub constant: f64,
    pub degree: f64,
    pub rate: f64,
}

impl SphereGrowth {
    pub fn bound(&self, k: u64) -> f64 {
        self.constant * (1.0 + k as f64).powf(self.degree) * self.rate.powf(k as f64)
    }

    pub fn is_exponential(&self) -> bool {
        self.rate > 1.0
    }
}

// n_0 = 1, n_1 = first, n_{k+1} = c n_k - n_{k-1}; envelope for n_k^2.
fn recurrence_envelope(c: f64, first: f64) -> SphereGrowth {
    if c <= 2.0 {
        // n_k = 1 + (first - 1) k <= max(1, first - 1) (1 + k)
        let m = (first - 1.0).max(1.0);
        return SphereGrowth {
            constant: m * m,
            degree: 2.0,
            rate: 1.0,
        };
    }
    let q = (c + (c * c - 4.0).sqrt()) / 2.0;
    let a = (first - 1.0 / q) / (q - 1.0 / q);
    let b = 1.0 - a;
    let m = a.abs() + b.abs();
    SphereGrowth {
        constant: m * m,
        degree: 0.0,
        rate: q * q,
    }
}

/// Label of an irreducible representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IrrLabel {
    /// Degree `k` for `O_N^+`, `S_N^+`, `SU(2)`, `SO(3)`.
    NonNegInt(u64),
    /// Reduced word for the dual of `F_N`.
    Word(Word),
    /// Lattice point for the dual of `Z^d`.
    Lattice(Vec<i64>),
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex in the enumeration order of letters.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let a = self.letters().iter().map(|l| l.order_key());
            let b = other.letters().iter().map(|l| l.order_key());
            a.cmp(b)
        })
    }
}

impl fmt::Display for IrrLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrLabel::NonNegInt(k) => write!(f, "{k}"),
            IrrLabel::Word(w) if w.is_identity() => f.write_str("e"),
            IrrLabel::Word(w) => write!(f, "{w}"),
            IrrLabel::Lattice(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

impl From<u64> for IrrLabel {
    fn from(k: u64) -> Self {
        IrrLabel::NonNegInt(k)
    }
}

impl From<Word> for IrrLabel {
    fn from(w: Word) -> Self {
        IrrLabel::Word(w)
    }
}

fn mismatch(group: &GroupDescriptor, label: &IrrLabel) -> Error {
    Error::LabelMismatch {
        group: group.to_string(),
        label: label.to_string(),
    }
}

/// Checks that the label variant (and its parameters) fit the group.
pub fn check_label(group: &GroupDescriptor, label: &IrrLabel) -> Result<()> {
    let ok = match (group.kind(), label) {
        (GroupKind::DualZd { d }, IrrLabel::Lattice(v)) => v.len() == d,
        (GroupKind::DualFreeGroup { n }, IrrLabel::Word(w)) => w.max_generator() <= n,
        (_, IrrLabel::NonNegInt(_)) => group.is_nonneg_int_labelled(),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(mismatch(group, label))
    }
}

/// The trivial representation.
pub fn trivial_label(group: &GroupDescriptor) -> IrrLabel {
    match group.kind() {
        GroupKind::DualZd { d } => IrrLabel::Lattice(vec![0; d]),
        GroupKind::DualFreeGroup { .. } => IrrLabel::Word(Word::identity()),
        _ => IrrLabel::NonNegInt(0),
    }
}

/// `n_0, ..., n_kmax` for integer-labelled groups, exact.
pub fn dimension_sequence(group: &GroupDescriptor, kmax: u64) -> Result<Vec<BigUint>> {
    let (c, first): (u64, u64) = match group.kind() {
        GroupKind::FreeOrthogonal { n } => (n as u64, n as u64),
        GroupKind::FreePermutation { n } => (n as u64 - 2, n as u64 - 1),
        GroupKind::Su2 => (2, 2),
        GroupKind::So3 => (2, 3),
        _ => {
            return Err(Error::NotNonNegIntLabelled {
                group: group.to_string(),
            })
        }
    };
    let mut dims = Vec::with_capacity(kmax as usize + 1);
    dims.push(BigUint::one());
    if kmax >= 1 {
        dims.push(BigUint::from(first));
    }
    let c = BigUint::from(c);
    for k in 2..=kmax as usize {
        // n_{k} = c n_{k-1} - n_{k-2}; never negative for these parameters
        let next = &c * &dims[k - 1] - &dims[k - 2];
        dims.push(next);
    }
    Ok(dims)
}

/// `n_α`, exact.
pub fn dimension(group: &GroupDescriptor, label: &IrrLabel) -> Result<BigUint> {
    check_label(group, label)?;
    match label {
        IrrLabel::NonNegInt(k) => {
            let mut dims = dimension_sequence(group, *k)?;
            Ok(dims.pop().expect("sequence is non-empty"))
        }
        _ => Ok(BigUint::one()),
    }
}

/// `|α|`.
pub fn length(group: &GroupDescriptor, label: &IrrLabel) -> Result<u64> {
    check_label(group, label)?;
    Ok(match label {
        IrrLabel::NonNegInt(k) => *k,
        IrrLabel::Word(w) => w.len() as u64,
        IrrLabel::Lattice(v) => v.iter().map(|x| x.unsigned_abs()).sum(),
    })
}

/// Decomposition of `a ⊗ b` into irreducibles with multiplicities, in
/// increasing label order.
pub fn fusion_decompose(
    group: &GroupDescriptor,
    a: &IrrLabel,
    b: &IrrLabel,
) -> Result<Vec<(IrrLabel, u64)>> {
    check_label(group, a)?;
    check_label(group, b)?;
    Ok(match (a, b) {
        (IrrLabel::NonNegInt(x), IrrLabel::NonNegInt(y)) => {
            let step = fusion_step(group);
            (x.abs_diff(*y)..=x + y)
                .step_by(step)
                .map(|c| (IrrLabel::NonNegInt(c), 1))
                .collect()
        }
        (IrrLabel::Word(x), IrrLabel::Word(y)) => vec![(IrrLabel::Word(x.mul(y)), 1)],
        (IrrLabel::Lattice(x), IrrLabel::Lattice(y)) => {
            let v = x.iter().zip(y).map(|(p, q)| p + q).collect();
            vec![(IrrLabel::Lattice(v), 1)]
        }
        _ => unreachable!("labels were checked against the group"),
    })
}

fn fusion_step(group: &GroupDescriptor) -> usize {
    match group.kind() {
        GroupKind::FreeOrthogonal { .. } | GroupKind::Su2 => 2,
        _ => 1,
    }
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `s_k = Σ_{|α|=k} n_α^2`, exact.
pub fn sphere_size(group: &GroupDescriptor, k: u64) -> BigUint {
    match group.kind() {
        GroupKind::DualZd { d } => {
            if k == 0 {
                return BigUint::one();
            }
            let d = d as u64;
            (1..=d.min(k))
                .map(|i| (BigUint::one() << i) * binomial(d, i) * binomial(k - 1, i - 1))
                .sum()
        }
        GroupKind::DualFreeGroup { n } => {
            if k == 0 {
                return BigUint::one();
            }
            let n = n as u64;
            BigUint::from(2 * n) * BigUint::from(2 * n - 1).pow((k - 1) as u32)
        }
        _ => {
            let n = dimension(group, &IrrLabel::NonNegInt(k)).expect("integer-labelled group");
            &n * &n
        }
    }
}

/// `s_0, ..., s_kmax`.
pub fn sphere_sizes(group: &GroupDescriptor, kmax: u64) -> Vec<BigUint> {
    if group.is_nonneg_int_labelled() {
        dimension_sequence(group, kmax)
            .expect("integer-labelled group")
            .into_iter()
            .map(|n| &n * &n)
            .collect()
    } else {
        (0..=kmax).map(|k| sphere_size(group, k)).collect()
    }
}

/// `ln s_0, ..., ln s_kmax` in floating point, for series that run far
/// beyond the range where exact integers are affordable.
pub fn ln_sphere_sizes(group: &GroupDescriptor, kmax: u64) -> Vec<f64> {
    let (c, first) = match group.kind() {
        GroupKind::FreeOrthogonal { n } => (n as f64, n as f64),
        GroupKind::FreePermutation { n } => (n as f64 - 2.0, n as f64 - 1.0),
        GroupKind::Su2 => (2.0, 2.0),
        GroupKind::So3 => (2.0, 3.0),
        GroupKind::DualFreeGroup { n } => {
            let n = n as f64;
            return (0..=kmax)
                .map(|k| {
                    if k == 0 {
                        0.0
                    } else {
                        (2.0 * n).ln() + (k - 1) as f64 * (2.0 * n - 1.0).ln()
                    }
                })
                .collect();
        }
        GroupKind::DualZd { .. } => {
            return (0..=kmax).map(|k| ln_big(&sphere_size(group, k))).collect();
        }
    };
    // n_k by the recurrence, rescaled to stay finite
    let mut out = Vec::with_capacity(kmax as usize + 1);
    out.push(0.0);
    let (mut prev, mut cur, mut scale) = (1.0f64, first, 0.0f64);
    for _ in 1..=kmax {
        out.push(2.0 * (cur.ln() + scale));
        let next = c * cur - prev;
        prev = cur;
        cur = next;
        if cur > 1e200 {
            prev *= 1e-200;
            cur *= 1e-200;
            scale += 200.0 * std::f64::consts::LN_10;
        }
    }
    out
}

/// `b_k = Σ_{j<=k} s_j`, exact.
pub fn ball_size(group: &GroupDescriptor, k: u64) -> BigUint {
    sphere_sizes(group, k).into_iter().sum()
}

/// `b_0, ..., b_kmax`.
pub fn ball_sizes(group: &GroupDescriptor, kmax: u64) -> Vec<BigUint> {
    let mut acc = BigUint::zero();
    sphere_sizes(group, kmax)
        .into_iter()
        .map(|s| {
            acc += s;
            acc.clone()
        })
        .collect()
}

/// Natural logarithm of a big integer; works beyond the `f64` range.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Big integer as `f64`, saturating to infinity.
pub fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Least-squares slope of `log b_k` against `log(1+k)` over
/// `k ∈ [kmax/2, kmax]`.
pub fn growth_order_estimate(group: &GroupDescriptor, kmax: u64) -> Result<f64> {
    if !group.has_polynomial_growth() {
        return Err(Error::NotPolynomialGrowth {
            group: group.to_string(),
        });
    }
    if kmax < 8 {
        return Err(Error::InvalidParameter(format!(
            "growth estimate needs kmax >= 8, got {kmax}"
        )));
    }
    let balls = ball_sizes(group, kmax);
    let pts: Vec<(f64, f64)> = (kmax / 2..=kmax)
        .map(|k| ((1.0 + k as f64).ln(), ln_big(&balls[k as usize])))
        .collect();
    Ok(crate::stats::ols_slope(&pts))
}

/// Fusion ring of a group: multiplicities, dimensions, lengths. Dimensions
/// of integer labels up to `cached_degree` are precomputed.
#[derive(Clone, Debug)]
pub struct FusionRing {
    group: GroupDescriptor,
    dims: Vec<BigUint>,
}

impl FusionRing {
    pub fn new(group: GroupDescriptor, cached_degree: u64) -> Self {
        let dims = dimension_sequence(&group, cached_degree).unwrap_or_default();
        FusionRing { group, dims }
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    /// `N(a, b, c)`.
    pub fn multiplicity(&self, a: &IrrLabel, b: &IrrLabel, c: &IrrLabel) -> Result<u64> {
        check_label(&self.group, c)?;
        Ok(fusion_decompose(&self.group, a, b)?
            .into_iter()
            .find(|(l, _)| l == c)
            .map_or(0, |(_, m)| m))
    }

    pub fn dim(&self, label: &IrrLabel) -> Result<BigUint> {
        match label {
            IrrLabel::NonNegInt(k) if (*k as usize) < self.dims.len() => {
                check_label(&self.group, label)?;
                Ok(self.dims[*k as usize].clone())
            }
            _ => dimension(&self.group, label),
        }
    }

    pub fn length(&self, label: &IrrLabel) -> Result<u64> {
        length(&self.group, label)
    }
}

/// Product of two elements in the character basis, `χ_a χ_b = Σ_c N(a,b,c) χ_c`.
/// Works for every group: on group duals this is convolution in the group
/// algebra.
pub fn character_product<T>(
    group: &GroupDescriptor,
    a: &BTreeMap<IrrLabel, T>,
    b: &BTreeMap<IrrLabel, T>,
) -> Result<BTreeMap<IrrLabel, T>>
where
    T: Clone + Zero + AddAssign + Mul<Output = T>,
{
    let mut out: BTreeMap<IrrLabel, T> = BTreeMap::new();
    for (la, x) in a {
        for (lb, y) in b {
            for (lc, mult) in fusion_decompose(group, la, lb)? {
                let mut term = x.clone() * y.clone();
                for _ in 1..mult {
                    term += x.clone() * y.clone();
                }
                *out.entry(lc).or_insert_with(T::zero) += term;
            }
        }
    }
    Ok(out)
}

/// Product of central elements given by degree, `χ_a χ_b = Σ_c N(a,b,c) χ_c`.
/// Exact for exact coefficient types (integers, rationals).
pub fn central_product<T>(
    group: &GroupDescriptor,
    a: &BTreeMap<u64, T>,
    b: &BTreeMap<u64, T>,
) -> Result<BTreeMap<u64, T>>
where
    T: Clone + Zero + AddAssign + Mul<Output = T>,
{
    if !group.is_nonneg_int_labelled() {
        return Err(Error::NotNonNegIntLabelled {
            group: group.to_string(),
        });
    }
    let step = fusion_step(group);
    let mut out: BTreeMap<u64, T> = BTreeMap::new();
    for (&i, x) in a {
        for (&j, y) in b {
            let xy = x.clone() * y.clone();
            for c in (i.abs_diff(j)..=i + j).step_by(step) {
                *out.entry(c).or_insert_with(T::zero) += xy.clone();
            }
        }
    }
    Ok(out)
}
