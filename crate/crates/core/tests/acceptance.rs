//! Acceptance battery. Runs every criterion in sequence (so runtimes are not
//! distorted by sibling tests), prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_complex::Complex64;
use sobolev_qg::classical_lp::{central_lp_norm, WeylMeasure};
use sobolev_qg::fourier::plancherel_l2_norm;
use sobolev_qg::freegroup::{
    extrapolated_operator_norm, truncated_operator_norm, GroupElementCoeffs, DEFAULT_TOL,
};
use sobolev_qg::quadrature::{integrate_adaptive, AdaptiveOptions};
use sobolev_qg::repdata::{dimension_sequence, fusion_decompose, growth_order_estimate};
use sobolev_qg::semigroup::{ultra_series, LengthFunction};
use sobolev_qg::verify::{
    l4_interpolation_theta, exponent_algebra_check, haagerup_sandwich_battery, hy_battery, random_centrals,
    rd_degree_scan, sharpened_hy_trend, sharpness_scan, sobolev_trend,
    ultracontractivity_decision, ExponentGrid, ExponentKind, GradedFamily,
};
use sobolev_qg::{Error, GroupDescriptor, IrrLabel, Letter, Verdict, Word};

type Outcome = Result<String, String>;

fn g(sel: &str) -> GroupDescriptor {
    sel.parse().unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let elapsed = start.elapsed();
    ensure(elapsed < limit, || format!("runtime {elapsed:?} exceeds {limit:?}"))?;
    Ok(format!("{detail}; {:.2}s", elapsed.as_secs_f64()))
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Σ_{j≥1} j² r^j summed directly until the terms vanish.
fn squares_geometric(r: f64) -> f64 {
    let mut sum = 0.0;
    let mut j = 1.0f64;
    loop {
        let term = j * j * r.powf(j);
        sum += term;
        if term < 1e-18 * sum {
            return sum;
        }
        j += 1.0;
    }
}

fn semigroup_identity() -> Outcome {
    timed(Duration::from_secs(1), || {
        let mut worst = 0.0f64;
        for t in log_grid(0.05, 5.0, 50) {
            let r = (-2.0 * t).exp();
            let closed = r * (1.0 + r) / (1.0 - r).powi(3);
            let series = ultra_series(t, &LengthFunction::Poisson, false).map_err(|e| e.to_string())?;
            worst = worst.max((series - closed).abs() / closed);
        }
        ensure(worst < 1e-10, || format!("max relative error {worst:e}"))?;
        let t = 2f64.ln() / 2.0;
        let spot = ultra_series(t, &LengthFunction::Poisson, false).map_err(|e| e.to_string())?;
        let direct = squares_geometric(0.5);
        ensure((spot - 6.0).abs() < 1e-12 && (direct - 6.0).abs() < 1e-12, || {
            format!("spot value {spot}, direct partial sums {direct}")
        })?;
        Ok(format!("max rel err {worst:.2e}, spot {spot}"))
    })
}

fn ultracontractivity_threshold() -> Outcome {
    timed(Duration::from_secs(10), || {
        let expected = [Verdict::Divergent, Verdict::Divergent, Verdict::Bounded, Verdict::Bounded];
        for sel in ["fdual:2", "oplus:4", "splus:7"] {
            for (s, want) in [2.5, 2.8, 3.0, 3.5].into_iter().zip(expected) {
                let d = ultracontractivity_decision(&g(sel), s).map_err(|e| e.to_string())?;
                ensure(d.scan.verdict == want, || {
                    format!("{sel} s={s}: {:?}, expected {want:?} (slope {})", d.scan.verdict, d.scan.slope)
                })?;
            }
        }
        let t: f64 = 1e-3;
        let scaled = t.powi(3) * ultra_series(t, &LengthFunction::Poisson, false).map_err(|e| e.to_string())?;
        ensure((0.2495..=0.2505).contains(&scaled), || format!("t^3 series = {scaled}"))?;
        Ok(format!("12 verdicts as expected, t^3 series(1e-3) = {scaled:.6}"))
    })
}

fn rapid_decay_degree() -> Outcome {
    timed(Duration::from_secs(5), || {
        let grid = [1.4, 1.5, 1.51, 1.6, 2.0];
        let want = [false, false, true, true, true];
        for sel in ["oplus:3", "splus:5", "oplus:2"] {
            let v = rd_degree_scan(&g(sel), &grid, 100_000).map_err(|e| e.to_string())?;
            for (r, conv) in v.iter().zip(want) {
                let ok = if conv {
                    r.verdict == Verdict::Converges && r.tail_bound.is_some_and(f64::is_finite)
                } else {
                    r.verdict == Verdict::Divergent
                };
                ensure(ok, || format!("{sel} s={}: {:?}", r.s, r.verdict))?;
            }
        }
        Ok("15 classifications as expected".into())
    })
}

fn sharpness_threshold() -> Outcome {
    timed(Duration::from_secs(30), || {
        let o2 = g("oplus:2");
        let below = sharpness_scan(&o2, 0.70, 200, 40).map_err(|e| e.to_string())?;
        let above = sharpness_scan(&o2, 0.80, 200, 0).map_err(|e| e.to_string())?;
        ensure(below.scan.slope >= 0.02, || format!("slope at s=0.70 is {}", below.scan.slope))?;
        ensure(above.scan.slope <= 0.0, || format!("slope at s=0.80 is {}", above.scan.slope))?;
        ensure(below.products.len() == 40, || "product checks missing".into())?;
        let gap = below.max_product_discrepancy();
        ensure(gap < 1e-6, || format!("fusion vs quadrature gap {gap:e}"))?;
        Ok(format!(
            "slopes {:.4} (s=0.70) and {:.4} (s=0.80), product gap {gap:.1e}",
            below.scan.slope, above.scan.slope
        ))
    })
}

fn representation_data() -> Outcome {
    for sel in ["oplus:2", "oplus:3", "oplus:4", "oplus:5", "splus:4", "splus:5", "splus:6"] {
        let grp = g(sel);
        let dims = dimension_sequence(&grp, 40).map_err(|e| e.to_string())?;
        for a in 0..=20u64 {
            for b in 0..=20u64 {
                let parts = fusion_decompose(&grp, &IrrLabel::NonNegInt(a), &IrrLabel::NonNegInt(b))
                    .map_err(|e| e.to_string())?;
                let total: BigUint = parts
                    .iter()
                    .map(|(c, m)| match c {
                        IrrLabel::NonNegInt(c) => &dims[*c as usize] * BigUint::from(*m),
                        _ => unreachable!(),
                    })
                    .sum();
                ensure(total == &dims[a as usize] * &dims[b as usize], || format!("{sel}: {a} x {b}"))?;
            }
        }
    }
    let o3: Vec<BigUint> = dimension_sequence(&g("oplus:3"), 4).map_err(|e| e.to_string())?;
    let want: Vec<BigUint> = [1u32, 3, 8, 21, 55].into_iter().map(BigUint::from).collect();
    ensure(o3 == want, || format!("O_3^+ dims {o3:?}"))?;
    let s4 = dimension_sequence(&g("splus:4"), 50).map_err(|e| e.to_string())?;
    let so3 = dimension_sequence(&g("so3"), 50).map_err(|e| e.to_string())?;
    ensure(s4 == so3 && so3.iter().enumerate().all(|(k, n)| *n == BigUint::from(2 * k + 1)), || {
        "S_4^+ and SO(3) dimensions differ".into()
    })?;
    let mut estimates = Vec::new();
    for (sel, gamma) in [("oplus:2", 3.0), ("zd:1", 1.0), ("zd:2", 2.0)] {
        let est = growth_order_estimate(&g(sel), 2000).map_err(|e| e.to_string())?;
        ensure((est - gamma).abs() <= 0.1, || format!("{sel}: growth order {est}"))?;
        estimates.push(format!("{sel} {est:.3}"));
    }
    Ok(format!("fusion dimensions exact; growth orders {}", estimates.join(", ")))
}

fn quadrature() -> Outcome {
    let opts = AdaptiveOptions::default();
    let mut worst = 0.0f64;
    for m in [WeylMeasure::Su2, WeylMeasure::So3] {
        for j in 0..=10u64 {
            for k in 0..=10u64 {
                let v = integrate_adaptive(|t| m.character(j, t) * m.character(k, t) * m.density(t), 0.0, PI, opts);
                let id = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((v.value - id).abs());
            }
        }
    }
    ensure(worst < 1e-10, || format!("Gram error {worst:e}"))?;
    let o3 = g("oplus:3");
    let chi1 = sobolev_qg::CentralElement::character(o3, 1).map_err(|e| e.to_string())?;
    let l4 = central_lp_norm(&o3, &chi1, 4.0).map_err(|e| e.to_string())?.powi(4);
    ensure((l4 - 2.0).abs() < 1e-6, || format!("||chi_1||_4^4 = {l4}"))?;
    let mut plancherel_gap = 0.0f64;
    for (sel, seed) in [("oplus:3", 1u64), ("splus:5", 2)] {
        for f in random_centrals(&g(sel), 50, seed, 30).map_err(|e| e.to_string())? {
            let q = central_lp_norm(f.group(), &f, 2.0).map_err(|e| e.to_string())?;
            plancherel_gap = plancherel_gap.max((q - plancherel_l2_norm(&f.to_fourier())).abs());
        }
    }
    ensure(plancherel_gap < 1e-8, || format!("Plancherel gap {plancherel_gap:e}"))?;
    Ok(format!("Gram error {worst:.1e}, ||chi_1||_4^4 = {l4:.10}, Plancherel gap {plancherel_gap:.1e}"))
}

fn hausdorff_young() -> Outcome {
    let o3 = g("oplus:3");
    let mut worst = 0.0f64;
    for p in [1.0, 4.0 / 3.0, 1.5, 2.0] {
        let r = hy_battery(&o3, p, 200, 7).map_err(|e| e.to_string())?;
        ensure(r.verdict == Verdict::Holds, || format!("p={p}: max ratio {}", r.max_ratio))?;
        worst = worst.max(r.max_ratio);
    }
    let ms: Vec<u64> = (1..=60).collect();
    let shy = sharpened_hy_trend(&o3, GradedFamily::Dirichlet, 4.0 / 3.0, 1.0, &ms).map_err(|e| e.to_string())?;
    let sob = sobolev_trend(&o3, GradedFamily::Xi, 1.5, 3.0, &ms).map_err(|e| e.to_string())?;
    let sob2 = sobolev_trend(&g("oplus:2"), GradedFamily::Xi, 4.0 / 3.0, 3.0, &ms).map_err(|e| e.to_string())?;
    for r in [&shy, &sob, &sob2] {
        ensure(r.slope.is_some_and(|s| s <= 0.05), || format!("{}: slope {:?}", r.id, r.slope))?;
    }
    Ok(format!(
        "max HY ratio {worst:.12}; trend slopes {:.4}, {:.4}, {:.4}",
        shy.slope.unwrap(),
        sob.slope.unwrap(),
        sob2.slope.unwrap()
    ))
}

fn free_group_norms() -> Outcome {
    let a = Letter::new(1, false);
    let gen = |i: usize, inv: bool| Word::from_letters([Letter::new(i, inv)]);
    let one = Complex64::new(1.0, 0.0);
    let single = GroupElementCoeffs::new(2)
        .and_then(|f| f.with_term(Word::from_letters([a]), one))
        .and_then(|f| f.with_term(Word::from_letters([a.inverse()]), one))
        .map_err(|e| e.to_string())?;
    let n1 = truncated_operator_norm(&single, 10, DEFAULT_TOL).map_err(|e| e.to_string())?;
    ensure(n1 >= 1.95, || format!("single generator norm {n1}"))?;
    let mut radial = GroupElementCoeffs::new(2).map_err(|e| e.to_string())?;
    for i in 1..=2 {
        for inv in [false, true] {
            radial.add_term(gen(i, inv), one).map_err(|e| e.to_string())?;
        }
    }
    let ex = extrapolated_operator_norm(&radial, &[6, 7, 8, 9, 10], DEFAULT_TOL).map_err(|e| e.to_string())?;
    let target = 2.0 * 3f64.sqrt();
    let raw = ex.samples.last().unwrap().1;
    let monotone = ex.samples.windows(2).all(|w| w[1].1 >= w[0].1);
    ensure(monotone, || format!("not monotone: {:?}", ex.samples))?;
    ensure((ex.limit - target).abs() <= 0.02 * target, || {
        format!("extrapolated {} vs {target}", ex.limit)
    })?;
    let sandwich = haagerup_sandwich_battery(2, 4, 100, 11).map_err(|e| e.to_string())?;
    ensure(sandwich.verdict == Verdict::Holds, || format!("sandwich max ratio {}", sandwich.max_ratio))?;
    Ok(format!(
        "single {n1:.6}; radial raw(m=10) {raw:.6}, extrapolated {:.6} ({:+.2}% of 2*sqrt(3)); sandwich max ratio {:.4}",
        ex.limit,
        100.0 * (ex.limit / target - 1.0),
        sandwich.max_ratio
    ))
}

fn exponent_algebra() -> Outcome {
    let grid = ExponentGrid::default();
    let mut worst = 0.0f64;
    for kind in [ExponentKind::HardyLittlewood, ExponentKind::SharpenedHy, ExponentKind::InterpolatedWeight, ExponentKind::L4Exponent] {
        let r = exponent_algebra_check(kind, &grid).map_err(|e| e.to_string())?;
        ensure(r.verdict == Verdict::Holds, || format!("{kind:?}: max residual {:e}", r.max_residual))?;
        worst = worst.max(r.max_residual);
    }
    for p in [1.1, 1.25, 1.5, 1.75, 2.0] {
        let pd = p / (p - 1.0);
        for (kind, threshold) in [(ExponentKind::HardyLittlewood, 4.0 - 2.0 * p), (ExponentKind::SharpenedHy, pd - 2.0)] {
            let r = exponent_algebra_check(kind, &ExponentGrid { ps: vec![p], ..ExponentGrid::default() })
                .map_err(|e| e.to_string())?;
            let solved = r.rows.last().unwrap();
            ensure((solved.computed - threshold).abs() < 1e-12, || {
                format!("{kind:?} at p={p}: threshold {} vs {threshold}", solved.computed)
            })?;
        }
    }
    ensure(matches!(l4_interpolation_theta(1.2, 1.2), Err(Error::InadmissibleInterpolation(_))), || {
        "degenerate interpolation not flagged".into()
    })?;
    Ok(format!("max residual {worst:.1e}; thresholds 4-2p and p'-2 reproduced"))
}

fn determinism() -> Outcome {
    let o3 = g("oplus:3");
    let runs = || -> Result<Vec<String>, Error> {
        Ok(vec![
            hy_battery(&o3, 4.0 / 3.0, 50, 7)?.to_json(),
            hy_battery(&o3, 4.0 / 3.0, 50, 7)?.to_csv(),
            haagerup_sandwich_battery(2, 3, 20, 5)?.to_json(),
            sharpness_scan(&g("oplus:2"), 0.7, 60, 5)?.scan.to_csv(),
            ultracontractivity_decision(&g("fdual:2"), 3.0)?.scan.to_json(),
            sobolev_trend(&o3, GradedFamily::Xi, 1.5, 3.0, &[5, 10, 20])?.to_json(),
        ])
    };
    let first = runs().map_err(|e| e.to_string())?;
    let second = runs().map_err(|e| e.to_string())?;
    ensure(first == second, || "reports differ between runs".into())?;
    Ok(format!("{} reports byte-identical", first.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("semigroup series identity", semigroup_identity),
        ("ultracontractivity threshold", ultracontractivity_threshold),
        ("rapid-decay degree", rapid_decay_degree),
        ("sharpness scan", sharpness_threshold),
        ("representation data", representation_data),
        ("quadrature", quadrature),
        ("Hausdorff-Young battery", hausdorff_young),
        ("free group norms", free_group_norms),
        ("exponent algebra", exponent_algebra),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
