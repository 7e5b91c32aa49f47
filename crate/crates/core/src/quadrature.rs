//! Gauss–Legendre rules and adaptive panel integration on a finite interval.

use std::sync::OnceLock;

/// Points per panel.
pub const PANEL_POINTS: usize = 32;

#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// The shared 32-point rule.
    pub fn panel_rule() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(PANEL_POINTS))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Clone, Copy, Debug)]
pub struct AdaptiveOptions {
    /// Absolute tolerance for the whole interval.
    pub abs_tol: f64,
    /// Relative agreement required between a panel and its two halves.
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        AdaptiveOptions {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_depth: 40,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Sum of accepted panel discrepancies.
    pub error: f64,
    pub panels: usize,
    /// False if some panel hit the depth limit.
    pub converged: bool,
}

/// Adaptive bisection with 32-point panels. A panel is accepted once its
/// one-panel and two-half-panel estimates agree to `rel_tol` relative or to
/// its share of `abs_tol`. Summation runs left to right.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    opts: AdaptiveOptions,
) -> Integral {
    let rule = GaussLegendre::panel_rule();
    let width = b - a;
    let mut out = Integral {
        value: 0.0,
        error: 0.0,
        panels: 0,
        converged: true,
    };
    // stack of (lo, hi, estimate, depth), right halves pushed first
    let mut stack = vec![(a, b, rule.integrate(&f, a, b), 0u32)];
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(&f, lo, mid);
        let right = rule.integrate(&f, mid, hi);
        let halves = left + right;
        let diff = (whole - halves).abs();
        let share = opts.abs_tol * (hi - lo) / width;
        if diff <= opts.rel_tol * halves.abs() || diff <= share || depth >= opts.max_depth {
            if depth >= opts.max_depth && diff > share {
                out.converged = false;
            }
            out.value += halves;
            out.error += diff;
            out.panels += 1;
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_nodes_symmetric() {
        let r = GaussLegendre::new(32);
        assert!((r.weights().iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for (x, y) in r.nodes().iter().zip(r.nodes().iter().rev()) {
            assert!((x + y).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_for_degree_63() {
        let r = GaussLegendre::new(32);
        // ∫_{-1}^{1} x^62 dx = 2/63
        let v = r.integrate(&|x: f64| x.powi(62), -1.0, 1.0);
        assert!((v - 2.0 / 63.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_kinks() {
        let opts = AdaptiveOptions::default();
        let v = integrate_adaptive(|x: f64| (x - 0.3).abs(), 0.0, 1.0, opts);
        assert!(v.converged);
        assert!((v.value - (0.045 + 0.245)).abs() < 1e-10);
        let v = integrate_adaptive(|x: f64| x.sin(), 0.0, std::f64::consts::PI, opts);
        assert!((v.value - 2.0).abs() < 1e-13);
    }
}
