//! `L^p` norms of central elements through the classical model: a central
//! element `Σ a_k χ_k` of `O_N^+` has the same distribution as the class
//! function `Σ a_k χ̃_k` on SU(2), and on `S_N^+` as the corresponding class
//! function on SO(3). Both reduce to one-dimensional integrals over the
//! rotation angle `θ ∈ [0, π]` against the Weyl density.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::CentralElement;
use crate::quadrature::{integrate_adaptive, AdaptiveOptions};
use crate::repdata::{GroupDescriptor, GroupKind};

/// Grid size for the sup-norm search.
pub const LINF_GRID: usize = 4096;
/// Number of best grid points refined by golden-section search.
pub const LINF_REFINE: usize = 8;

/// Weyl integration formula for class functions on SU(2) or SO(3).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylMeasure {
    /// Density `(2/π) sin²θ`.
    Su2,
    /// Density `(2/π) sin²(θ/2)`.
    So3,
}

impl WeylMeasure {
    /// Classical model for the central algebra of `group`.
    pub fn for_group(group: &GroupDescriptor) -> Result<Self> {
        match group.kind() {
            GroupKind::FreeOrthogonal { .. } | GroupKind::Su2 => Ok(WeylMeasure::Su2),
            GroupKind::FreePermutation { .. } | GroupKind::So3 => Ok(WeylMeasure::So3),
            _ => Err(Error::NoClassicalModel {
                group: group.to_string(),
            }),
        }
    }

    pub fn density(self, theta: f64) -> f64 {
        match self {
            WeylMeasure::Su2 => 2.0 / PI * theta.sin().powi(2),
            WeylMeasure::So3 => 2.0 / PI * (theta / 2.0).sin().powi(2),
        }
    }

    pub fn character(self, k: u64, theta: f64) -> f64 {
        match self {
            WeylMeasure::Su2 => su2_character(k, theta),
            WeylMeasure::So3 => so3_character(k, theta),
        }
    }

    /// `Σ_k a_k χ̃_k(θ)` in one pass of the Chebyshev recurrence.
    pub fn eval_series(self, f: &CentralElement, theta: f64) -> Complex64 {
        let coeffs = f.coeffs();
        let Some(&top) = coeffs.keys().next_back() else {
            return Complex64::new(0.0, 0.0);
        };
        let (x, stride) = match self {
            WeylMeasure::Su2 => (theta.cos(), 1),
            WeylMeasure::So3 => ((theta / 2.0).cos(), 2),
        };
        let mut acc = Complex64::new(0.0, 0.0);
        let (mut prev, mut cur) = (0.0, 1.0); // U_{-1}, U_0
        let mut j = 0u64;
        loop {
            if j % stride == 0 {
                if let Some(a) = coeffs.get(&(j / stride)) {
                    acc += a * cur;
                }
            }
            if j == top * stride {
                break;
            }
            let next = 2.0 * x * cur - prev;
            prev = cur;
            cur = next;
            j += 1;
        }
        acc
    }
}

/// `U_n(x)`, Chebyshev polynomial of the second kind.
fn chebyshev_u(n: u64, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for _ in 0..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `sin((k+1)θ) / sin θ`, continuous at `0` and `π`.
pub fn su2_character(k: u64, theta: f64) -> f64 {
    chebyshev_u(k, theta.cos())
}

/// `sin((2k+1)θ/2) / sin(θ/2)`, continuous at `0`.
pub fn so3_character(k: u64, theta: f64) -> f64 {
    chebyshev_u(2 * k, (theta / 2.0).cos())
}

fn initial_panels(f: &CentralElement) -> usize {
    (f.max_degree() as usize / 2).clamp(4, 256)
}

/// `(∫ |f̃(θ)|^p dWeyl(θ))^{1/p}` for `p ∈ [1, ∞)`, by adaptive Gauss–Legendre
/// quadrature with absolute tolerance `1e-10` on the integral.
pub fn central_lp_norm(group: &GroupDescriptor, f: &CentralElement, p: f64) -> Result<f64> {
    let model = WeylMeasure::for_group(group)?;
    if p.is_nan() || p < 1.0 || p.is_infinite() {
        return Err(Error::InvalidExponent {
            value: p,
            range: "[1, ∞)",
        });
    }
    if f.coeffs().is_empty() {
        return Ok(0.0);
    }
    let panels = initial_panels(f);
    let opts = AdaptiveOptions {
        abs_tol: 1e-10 / panels as f64,
        ..AdaptiveOptions::default()
    };
    let h = PI / panels as f64;
    let integrand = |t: f64| model.eval_series(f, t).norm().powf(p) * model.density(t);
    let total: f64 = (0..panels)
        .map(|i| {
            let hi = if i + 1 == panels { PI } else { (i + 1) as f64 * h };
            integrate_adaptive(integrand, i as f64 * h, hi, opts).value
        })
        .sum();
    Ok(total.max(0.0).powf(1.0 / p))
}

fn golden_max<F: Fn(f64) -> f64>(g: F, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..80 {
        if b - a < 1e-14 {
            break;
        }
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    gc.max(gd)
}

/// `sup_θ |f̃(θ)|`: grid search followed by golden-section refinement of the
/// best grid points.
pub fn central_linf_norm(group: &GroupDescriptor, f: &CentralElement) -> Result<f64> {
    let model = WeylMeasure::for_group(group)?;
    if f.coeffs().is_empty() {
        return Ok(0.0);
    }
    let g = |t: f64| model.eval_series(f, t).norm();
    let h = PI / (LINF_GRID - 1) as f64;
    let grid: Vec<(usize, f64)> = (0..LINF_GRID).map(|i| (i, g(i as f64 * h))).collect();
    let mut best = grid.clone();
    best.sort_by(|x, y| y.1.total_cmp(&x.1));
    let mut sup = best[0].1;
    for &(i, _) in best.iter().take(LINF_REFINE) {
        let lo = i.saturating_sub(1) as f64 * h;
        let hi = ((i + 1).min(LINF_GRID - 1) as f64 * h).min(PI);
        sup = sup.max(golden_max(g, lo, hi));
    }
    Ok(sup)
}
