//! Radial Markov semigroups `T_t = e^{-t L}` acting by `e^{-t l(|α|)}`,
//! ultracontractivity series, `C_w` sums and sup-over-`t` scans.
//!
//! Every truncated series carries an explicit analytic tail bound. A scan is
//! classified from its smallest decade of `t`: it is `bounded` when the
//! log-log slope there is at least [`SLOPE_THRESHOLD`] and the largest value
//! in the decade is within a factor [`DECADE_RATIO`] of the value at the
//! decade's upper end; otherwise it is `divergent`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fourier::{apply_multiplier, FourierCoefficients};
use crate::report::{fmt_f64, Verdict};
use crate::repdata::{ln_sphere_sizes, GroupDescriptor, GroupKind, SphereGrowth};
use crate::stats::{log_grid, ols_slope};

/// Scans whose small-`t` slope falls below this value are divergent.
pub const SLOPE_THRESHOLD: f64 = -0.05;
/// Largest admissible ratio between the decade maximum and the value at the
/// upper end of the smallest decade.
pub const DECADE_RATIO: f64 = 1.5;
/// Series stop once the tail bound drops below this fraction of the sum.
pub const SERIES_REL_TOL: f64 = 1e-14;
/// Hard cap on the number of series terms.
pub const MAX_SERIES_TERMS: u64 = 100_000_000;
/// Minimal number of points in a `t` grid.
pub const MIN_GRID_POINTS: usize = 40;

/// Length function `l` of the generator: `T_t` multiplies the block at `α`
/// by `e^{-t l(|α|)}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthFunction {
    /// `l(k) = k`.
    Poisson,
    /// `l(k) = k`, or `l(k) = k²` when `quadratic`.
    Heat { quadratic: bool },
    /// Tabulated values, continued linearly with the last increment.
    Explicit(Vec<f64>),
}

impl LengthFunction {
    /// Heat semigroup of `group`: quadratic on `O_2^+` and `S_4^+`, linear on
    /// the other free quantum groups.
    pub fn heat(group: &GroupDescriptor) -> Self {
        let quadratic = matches!(
            group.kind(),
            GroupKind::FreeOrthogonal { n: 2 } | GroupKind::FreePermutation { n: 4 }
        );
        LengthFunction::Heat { quadratic }
    }

    pub fn explicit(table: Vec<f64>) -> Result<Self> {
        if table.len() < 2 {
            return Err(Error::InvalidParameter(
                "explicit length table needs at least two values".into(),
            ));
        }
        if table[0] < 0.0 || table.windows(2).any(|w| !(w[1] >= w[0])) {
            return Err(Error::InvalidParameter(
                "explicit length table must be non-negative and nondecreasing".into(),
            ));
        }
        Ok(LengthFunction::Explicit(table))
    }

    pub fn eval(&self, k: u64) -> f64 {
        let x = k as f64;
        match self {
            LengthFunction::Poisson | LengthFunction::Heat { quadratic: false } => x,
            LengthFunction::Heat { quadratic: true } => x * x,
            LengthFunction::Explicit(t) => {
                let n = t.len();
                match t.get(k as usize) {
                    Some(v) => *v,
                    None => t[n - 1] + (t[n - 1] - t[n - 2]) * (k as usize - (n - 1)) as f64,
                }
            }
        }
    }

    /// Lower bound for `l(j+1) - l(j)` over all `j ≥ from`.
    pub fn min_increment(&self, from: u64) -> f64 {
        match self {
            LengthFunction::Poisson | LengthFunction::Heat { quadratic: false } => 1.0,
            LengthFunction::Heat { quadratic: true } => 2.0 * from as f64 + 1.0,
            LengthFunction::Explicit(t) => {
                let n = t.len();
                let last = t[n - 1] - t[n - 2];
                t.windows(2)
                    .skip(from as usize)
                    .map(|w| w[1] - w[0])
                    .fold(last, f64::min)
            }
        }
    }
}

fn check_time(t: f64, strict: bool) -> Result<()> {
    let ok = if strict { t > 0.0 } else { t >= 0.0 };
    if ok && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTime {
            t,
            requirement: if strict { "positive and finite" } else { "non-negative and finite" },
        })
    }
}

/// `T_t f̂`: the block at `α` is scaled by `e^{-t l(|α|)}`.
pub fn apply_semigroup(
    coeffs: &FourierCoefficients,
    l: &LengthFunction,
    t: f64,
) -> Result<FourierCoefficients> {
    check_time(t, false)?;
    Ok(apply_multiplier(coeffs, &|k: u64| (-t * l.eval(k)).exp()))
}

/// A truncated series with a certified bound on the omitted tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub tail_bound: f64,
    pub terms: u64,
}

/// `Σ_{k≥0} (1+k)² r^{1+k}` with `r = e^{-2t}`, i.e. `r(1+r)/(1-r)³`.
pub fn ultra_closed_form(t: f64) -> Result<f64> {
    check_time(t, true)?;
    let r = (-2.0 * t).exp();
    let one_minus_r = -(-2.0 * t).exp_m1();
    Ok(r * (1.0 + r) / one_minus_r.powi(3))
}

/// `Σ_{k≥0} (1+k)² e^{-2t(1+l(k))}`. With `l = Poisson` and
/// `closed_form_allowed`, the closed form is returned.
pub fn ultra_series(t: f64, l: &LengthFunction, closed_form_allowed: bool) -> Result<f64> {
    if closed_form_allowed && *l == LengthFunction::Poisson {
        return ultra_closed_form(t);
    }
    Ok(ultra_series_certified(t, l)?.value)
}

/// Direct summation of the ultracontractivity series with its tail bound.
///
/// For `j > k` the term ratio is at most
/// `((k+3)/(k+2))² e^{-2tδ}` with `δ` the least increment of `l` beyond `k`,
/// so the tail after `k` is bounded by a geometric series.
pub fn ultra_series_certified(t: f64, l: &LengthFunction) -> Result<SeriesValue> {
    check_time(t, true)?;
    let term = |k: u64| (1.0 + k as f64).powi(2) * (-2.0 * t * (1.0 + l.eval(k))).exp();
    let mut sum = 0.0;
    for k in 0..MAX_SERIES_TERMS {
        sum += term(k);
        let kf = k as f64;
        let rho = ((kf + 3.0) / (kf + 2.0)).powi(2) * (-2.0 * t * l.min_increment(k + 1)).exp();
        if rho < 1.0 {
            let tail = term(k + 1) / (1.0 - rho);
            if tail <= SERIES_REL_TOL * sum {
                return Ok(SeriesValue {
                    value: sum,
                    tail_bound: tail,
                    terms: k + 1,
                });
            }
        }
    }
    Err(Error::Unsupported(format!(
        "series at t = {t} did not reach its tail tolerance within {MAX_SERIES_TERMS} terms"
    )))
}

/// One grid point of a scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanPoint {
    pub param: f64,
    pub value: f64,
    pub certified_tail: f64,
}

/// Result of scanning a quantity over a parameter grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub name: String,
    /// Name of the scanned parameter, `t` or `m`.
    pub parameter: String,
    pub points: Vec<ScanPoint>,
    pub verdict: Verdict,
    /// Fitted log-log slope used by the verdict.
    pub slope: f64,
    /// Grid point with the largest value.
    pub extremal: ScanPoint,
}

impl ScanReport {
    pub fn new(
        name: impl Into<String>,
        parameter: impl Into<String>,
        points: Vec<ScanPoint>,
        verdict: Verdict,
        slope: f64,
    ) -> Self {
        let extremal = points
            .iter()
            .copied()
            .filter(|p| p.value.is_finite())
            .max_by(|a, b| a.value.total_cmp(&b.value))
            .unwrap_or(ScanPoint {
                param: f64::NAN,
                value: f64::NAN,
                certified_tail: f64::NAN,
            });
        ScanReport {
            name: name.into(),
            parameter: parameter.into(),
            points,
            verdict,
            slope,
            extremal,
        }
    }

    pub fn sup(&self) -> f64 {
        self.extremal.value
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// CSV with columns `<parameter>, value, certified_tail`; floats carry
    /// 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([self.parameter.as_str(), "value", "certified_tail"])
            .expect("in-memory write");
        for p in &self.points {
            w.write_record([fmt_f64(p.param), fmt_f64(p.value), fmt_f64(p.certified_tail)])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{}: verdict {}, slope {:.4}, sup {:.6e} at {} = {:.4e}",
            self.name, self.verdict, self.slope, self.extremal.value, self.parameter, self.extremal.param
        );
        s
    }
}

/// Checks that `grid` is increasing, log-spaced, has at least
/// [`MIN_GRID_POINTS`] points and covers `[1e-3, 10]` and four decades.
pub fn validate_t_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < MIN_GRID_POINTS {
        return Err(Error::GridTooSmall(format!(
            "{} points, at least {MIN_GRID_POINTS} required",
            grid.len()
        )));
    }
    if grid.iter().any(|t| !(*t > 0.0 && t.is_finite())) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::GridTooSmall(
            "grid must be positive and strictly increasing".into(),
        ));
    }
    let steps: Vec<f64> = grid.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
    let mean = steps.iter().sum::<f64>() / steps.len() as f64;
    if steps.iter().any(|s| (s - mean).abs() > 1e-6 * mean) {
        return Err(Error::GridTooSmall("grid is not log-spaced".into()));
    }
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    if (hi / lo).log10() < 4.0 - 1e-9 || lo > 1e-3 * (1.0 + 1e-9) || hi < 10.0 * (1.0 - 1e-9) {
        return Err(Error::GridTooSmall(format!(
            "grid [{lo}, {hi}] must span four decades and include [1e-3, 10]"
        )));
    }
    Ok(())
}

/// 60 log-spaced points on `[1e-3, 10]`.
pub fn default_t_grid() -> Vec<f64> {
    log_grid(1e-3, 10.0, 60)
}

/// Small-`t` classification: slope and decade ratio over `[t_0, 10 t_0]`.
pub fn small_t_verdict(points: &[ScanPoint]) -> (Verdict, f64) {
    if points.iter().any(|p| !(p.value.is_finite() && p.value > 0.0)) {
        return (Verdict::Inconclusive, f64::NAN);
    }
    let t0 = points[0].param;
    let decade: Vec<&ScanPoint> = points
        .iter()
        .take_while(|p| p.param <= 10.0 * t0 * (1.0 + 1e-9))
        .collect();
    if decade.len() < 2 {
        return (Verdict::Inconclusive, f64::NAN);
    }
    let pts: Vec<(f64, f64)> = decade.iter().map(|p| (p.param.ln(), p.value.ln())).collect();
    let slope = ols_slope(&pts);
    let top = decade.iter().map(|p| p.value).fold(0.0, f64::max);
    let end = decade[decade.len() - 1].value;
    let verdict = if slope >= SLOPE_THRESHOLD && top / end < DECADE_RATIO {
        Verdict::Bounded
    } else {
        Verdict::Divergent
    };
    (verdict, slope)
}

/// Scans `t^s Σ_k (1+k)² e^{-2t(1+l(k))}` over `grid`.
pub fn ultra_sup_scan(s: f64, l: &LengthFunction, grid: &[f64]) -> Result<ScanReport> {
    validate_t_grid(grid)?;
    let points = grid
        .par_iter()
        .map(|&t| {
            let v = ultra_series_certified(t, l)?;
            let f = t.powf(s);
            Ok(ScanPoint {
                param: t,
                value: f * v.value,
                certified_tail: f * v.tail_bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (verdict, slope) = small_t_verdict(&points);
    Ok(ScanReport::new(
        format!("sup_t t^{s} ultra_series"),
        "t",
        points,
        verdict,
        slope,
    ))
}

/// Radial sum `Σ_k c_k e^{-2w(k)}` of a `C_w` constant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CwForm {
    /// `c_k = s_k = Σ_{|α|=k} n_α²`.
    Growth,
    /// `c_k = (1+k)^{2β}`.
    RapidDecay { beta: f64 },
}

/// Radial weight `w(k)` with a known tail behaviour.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CwWeight {
    /// `w(k) = t(1+k)`.
    Linear { t: f64 },
    /// `w(k) = s log(1+k)`.
    Log { s: f64 },
}

impl CwWeight {
    pub fn eval(&self, k: u64) -> f64 {
        match *self {
            CwWeight::Linear { t } => t * (1.0 + k as f64),
            CwWeight::Log { s } => s * (1.0 + k as f64).ln(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CwStatus {
    /// `partial + tail_bound` bounds the full sum.
    Certified,
    /// The full series diverges.
    Divergent,
    /// No analytic tail bound is available for this weight or cutoff.
    NoCertificate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CwSum {
    pub partial: f64,
    pub kmax: u64,
    pub tail_bound: Option<f64>,
    pub status: CwStatus,
}

fn form_coefficients(group: &GroupDescriptor, form: CwForm, kmax: u64) -> (Vec<f64>, SphereGrowth) {
    match form {
        CwForm::Growth => (ln_sphere_sizes(group, kmax), group.sphere_growth()),
        CwForm::RapidDecay { beta } => (
            (0..=kmax).map(|k| 2.0 * beta * (1.0 + k as f64).ln()).collect(),
            SphereGrowth {
                constant: 1.0,
                degree: 2.0 * beta,
                rate: 1.0,
            },
        ),
    }
}

/// `Σ_{k≤kmax} c_k e^{-2w(k)}` with an analytic bound on the rest.
pub fn cw_sum(group: &GroupDescriptor, form: CwForm, weight: CwWeight, kmax: u64) -> Result<CwSum> {
    if let CwWeight::Linear { t } = weight {
        check_time(t, true)?;
    }
    let (ln_c, env) = form_coefficients(group, form, kmax);
    let partial: f64 = ln_c
        .iter()
        .enumerate()
        .map(|(k, lc)| (lc - 2.0 * weight.eval(k as u64)).exp())
        .sum();
    let k1 = (kmax + 1) as f64;
    let (status, tail_bound) = match weight {
        CwWeight::Linear { t } => {
            let q = env.rate * (-2.0 * t).exp();
            let rho = ((k1 + 2.0) / (k1 + 1.0)).powf(env.degree) * q;
            if q >= 1.0 {
                (CwStatus::Divergent, None)
            } else if rho >= 1.0 {
                (CwStatus::NoCertificate, None)
            } else {
                let first = env.bound(kmax + 1) * (-2.0 * t * (1.0 + k1)).exp();
                (CwStatus::Certified, Some(first / (1.0 - rho)))
            }
        }
        CwWeight::Log { s } => {
            let sigma = 2.0 * s - env.degree;
            if env.is_exponential() || sigma <= 1.0 {
                (CwStatus::Divergent, None)
            } else {
                // Σ_{k>K} (1+k)^{-σ} ≤ ∫_{K+1}^∞ x^{-σ} dx
                let tail = env.constant * k1.powf(1.0 - sigma) / (sigma - 1.0);
                (CwStatus::Certified, Some(tail))
            }
        }
    };
    Ok(CwSum {
        partial,
        kmax,
        tail_bound,
        status,
    })
}

/// `Σ_{k≤kmax} c_k e^{-2w(k)}` for an arbitrary weight; never certified.
pub fn cw_sum_custom<W: Fn(u64) -> f64>(
    group: &GroupDescriptor,
    form: CwForm,
    w: W,
    kmax: u64,
) -> CwSum {
    let (ln_c, _) = form_coefficients(group, form, kmax);
    let partial = ln_c
        .iter()
        .enumerate()
        .map(|(k, lc)| (lc - 2.0 * w(k as u64)).exp())
        .sum();
    CwSum {
        partial,
        kmax,
        tail_bound: None,
        status: CwStatus::NoCertificate,
    }
}

/// Default cap on the degree used by [`poly_ultra_sup`].
pub const POLY_SCAN_KMAX: u64 = 200_000;

/// Scans `t^{2s} Σ_k s_k e^{-2t(1+k)}` over `grid` on a group of polynomial
/// growth. Each point sums until the envelope tail drops below
/// [`SERIES_REL_TOL`] of the partial sum, or up to `kmax`.
pub fn poly_ultra_sup(group: &GroupDescriptor, s: f64, grid: &[f64], kmax: u64) -> Result<ScanReport> {
    if !group.has_polynomial_growth() {
        return Err(Error::NotPolynomialGrowth {
            group: group.to_string(),
        });
    }
    validate_t_grid(grid)?;
    let ln_s = ln_sphere_sizes(group, kmax);
    let env = group.sphere_growth();
    let points: Vec<ScanPoint> = grid
        .par_iter()
        .map(|&t| {
            let mut sum = 0.0;
            let mut tail = f64::INFINITY;
            for (k, ls) in ln_s.iter().enumerate() {
                let kf = k as f64;
                sum += (ls - 2.0 * t * (1.0 + kf)).exp();
                let rho = ((kf + 3.0) / (kf + 2.0)).powf(env.degree) * (-2.0 * t).exp();
                if rho < 1.0 {
                    tail = env.bound(k as u64 + 1) * (-2.0 * t * (2.0 + kf)).exp() / (1.0 - rho);
                    if tail <= SERIES_REL_TOL * sum {
                        break;
                    }
                }
            }
            let f = t.powf(2.0 * s);
            ScanPoint {
                param: t,
                value: f * sum,
                certified_tail: f * tail,
            }
        })
        .collect();
    let (mut verdict, slope) = small_t_verdict(&points);
    if points.iter().any(|p| !(p.certified_tail <= 1e-6 * p.value)) {
        verdict = Verdict::Inconclusive;
    }
    Ok(ScanReport::new(
        format!("sup_t t^{} growth series on {group}", 2.0 * s),
        "t",
        points,
        verdict,
        slope,
    ))
}
