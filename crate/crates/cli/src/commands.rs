use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use sobolev_qg::classical_lp::{central_linf_norm, central_lp_norm};
use sobolev_qg::fourier::{dual_lp_norm, plancherel_l2_norm};
use sobolev_qg::freegroup::{
    enumerate_ball, extrapolated_operator_norm, haagerup_upper_bound, truncated_operator_norm,
    GroupElementCoeffs,
};
use sobolev_qg::repdata::{
    ball_sizes, dimension_sequence, fusion_decompose, growth_order_estimate, sphere_sizes,
};
use sobolev_qg::semigroup::{poly_ultra_sup, ultra_sup_scan, ScanReport, POLY_SCAN_KMAX};
use sobolev_qg::stats::log_grid;
use sobolev_qg::verify::{
    exponent_algebra_check, haagerup_sandwich_battery, hy_battery, rapid_decay_beta,
    rd_degree_scan, sharpened_hy_trend, sharpness_scan, sobolev_trend, standard_length,
    ultracontractivity_decision, ExponentGrid, VerifyReport,
};
use sobolev_qg::{
    CentralElement, Error, FourierCoefficients, GroupDescriptor, GroupKind, IrrLabel, Result,
    Verdict, Word,
};

use crate::args::{Check, Command};
use crate::output::{num, opt_num, Outcome};

/// Failures that are the caller's fault map to exit status 2.
pub enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Run = std::result::Result<Outcome, Failure>;

pub fn run(cmd: &Command) -> Run {
    match cmd {
        Command::Dims { group, kmax } => dims(&group.group, *kmax),
        Command::Growth { group, kmax } => growth(&group.group, *kmax),
        Command::Fusion { group, a, b } => fusion(&group.group, a, b),
        Command::Norm { input, p } => norm(input, p),
        Command::Fgnorm {
            rank,
            input,
            radial,
            m,
            tol,
        } => fgnorm(*rank, input.as_deref(), radial.as_deref(), m, *tol),
        Command::ScanUltra {
            group,
            s,
            tmin,
            tmax,
            points,
            expect,
        } => scan_ultra(&group.group, *s, *tmin, *tmax, *points, *expect),
        Command::ScanSharpness {
            group,
            s,
            mmax,
            qmax,
            expect,
        } => scan_sharpness(&group.group, *s, *mmax, *qmax, *expect),
        Command::RdDegree { group, s, kmax } => rd_degree(&group.group, s, *kmax),
        Command::Verify { check } => verify(check),
    }
}

fn dims(group: &GroupDescriptor, kmax: u64) -> Run {
    let spheres = sphere_sizes(group, kmax);
    let balls = ball_sizes(group, kmax);
    let dims = if group.is_nonneg_int_labelled() {
        dimension_sequence(group, kmax)?.iter().map(|n| n.to_string()).collect()
    } else {
        vec!["1".to_string(); kmax as usize + 1]
    };
    let mut out = Outcome::new(&["k", "n_k", "s_k", "b_k"], Value::Null);
    let mut rows = Vec::new();
    for k in 0..=kmax as usize {
        let row = vec![k.to_string(), dims[k].clone(), spheres[k].to_string(), balls[k].to_string()];
        rows.push(json!({"k": k, "n_k": row[1], "s_k": row[2], "b_k": row[3]}));
        out.row(row);
    }
    out.note("group", group.to_string());
    out.result = json!({"group": group.to_string(), "rows": rows});
    Ok(out)
}

fn growth(group: &GroupDescriptor, kmax: u64) -> Run {
    let env = group.sphere_growth();
    let estimate = if group.has_polynomial_growth() {
        Some(growth_order_estimate(group, kmax)?)
    } else {
        None
    };
    let mut out = Outcome::new(
        &["group", "polynomial", "growth_order", "growth_order_fit", "envelope_constant", "envelope_degree", "envelope_rate"],
        json!({
            "group": group.to_string(),
            "polynomial": group.has_polynomial_growth(),
            "growth_order": group.growth_order(),
            "growth_order_fit": estimate,
            "envelope": {"constant": env.constant, "degree": env.degree, "rate": env.rate},
        }),
    );
    out.row(vec![
        group.to_string(),
        group.has_polynomial_growth().to_string(),
        opt_num(group.growth_order()),
        opt_num(estimate),
        num(env.constant),
        num(env.degree),
        num(env.rate),
    ]);
    Ok(out)
}

fn parse_label(group: &GroupDescriptor, s: &str) -> Result<IrrLabel> {
    let s = s.trim();
    match group.kind() {
        GroupKind::DualFreeGroup { .. } => {
            let w: Word = if s == "e" { Word::identity() } else { s.parse()? };
            Ok(IrrLabel::Word(w))
        }
        GroupKind::DualZd { .. } => s
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{x:?}: {e}"))))
            .collect::<Result<Vec<_>>>()
            .map(IrrLabel::Lattice),
        _ => s
            .parse::<u64>()
            .map(IrrLabel::NonNegInt)
            .map_err(|e| Error::Parse(format!("{s:?}: {e}"))),
    }
}

fn fusion(group: &GroupDescriptor, a: &str, b: &str) -> Run {
    let (la, lb) = (parse_label(group, a)?, parse_label(group, b)?);
    let parts = fusion_decompose(group, &la, &lb)?;
    let dim = |l: &IrrLabel| sobolev_qg::repdata::dimension(group, l);
    let mut out = Outcome::new(&["label", "multiplicity", "dimension"], Value::Null);
    let mut items = Vec::new();
    for (c, m) in &parts {
        let d = dim(c)?;
        out.row(vec![c.to_string(), m.to_string(), d.to_string()]);
        items.push(json!({"label": c.to_string(), "multiplicity": m, "dimension": d.to_string()}));
    }
    out.note("product", format!("{la} x {lb}"));
    out.note("product_dimension", (dim(&la)? * dim(&lb)?).to_string());
    out.result = json!({"group": group.to_string(), "a": la.to_string(), "b": lb.to_string(), "terms": items});
    Ok(out)
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn norm(input: &Path, ps: &[f64]) -> Run {
    let coeffs = FourierCoefficients::from_json(&read(input)?)?;
    let group = *coeffs.group();
    let central = CentralElement::from_fourier(&coeffs).ok();
    let classical = central.filter(|_| sobolev_qg::classical_lp::WeylMeasure::for_group(&group).is_ok());
    let mut out = Outcome::new(&["p", "fourier_lp", "function_lp"], Value::Null);
    let mut items = Vec::new();
    for &p in ps {
        let fourier = dual_lp_norm(&coeffs, p)?;
        let function = match &classical {
            Some(f) if p.is_infinite() => Some(central_linf_norm(&group, f)?),
            Some(f) => Some(central_lp_norm(&group, f, p)?),
            None if p == 2.0 => Some(plancherel_l2_norm(&coeffs)),
            None => None,
        };
        out.row(vec![num(p), num(fourier), opt_num(function)]);
        items.push(json!({"p": p, "fourier_lp": fourier, "function_lp": function}));
    }
    out.note("group", group.to_string());
    out.note("plancherel_l2", plancherel_l2_norm(&coeffs));
    out.result = json!({"group": group.to_string(), "rows": items});
    Ok(out)
}

fn fgnorm(rank: usize, input: Option<&Path>, radial: Option<&[f64]>, radii: &[usize], tol: f64) -> Run {
    let f = match (input, radial) {
        (Some(path), _) => GroupElementCoeffs::from_json(&read(path)?)?,
        (None, Some(a)) => {
            let top = a.len().saturating_sub(1);
            let ball = enumerate_ball(rank, top)?;
            let mut f = GroupElementCoeffs::new(rank)?;
            for (k, &ak) in a.iter().enumerate() {
                for w in ball.sphere(k) {
                    f.add_term(w.clone(), ak.into())?;
                }
            }
            f
        }
        (None, None) => return Err(Failure::Usage("one of --input or --radial is required".into())),
    };
    let bound = haagerup_upper_bound(&f);
    let mut out = Outcome::new(&["m", "truncated_norm", "haagerup_bound"], Value::Null);
    let (samples, limit) = if radii.len() >= 3 {
        let ex = extrapolated_operator_norm(&f, radii, tol)?;
        (ex.samples, Some(ex.limit))
    } else {
        let s = radii
            .iter()
            .map(|&m| Ok((m, truncated_operator_norm(&f, m, tol)?)))
            .collect::<Result<Vec<_>>>()?;
        (s, None)
    };
    for (m, v) in &samples {
        out.row(vec![m.to_string(), num(*v), num(bound)]);
    }
    let holds = samples.iter().all(|(_, v)| *v <= bound * (1.0 + sobolev_qg::verify::HY_SLACK));
    let verdict = if holds { Verdict::Holds } else { Verdict::Violated };
    out.ok = holds;
    out.note("rank", rank as u64);
    out.note("support_radius", f.support_radius() as u64);
    out.note("haagerup_bound", bound);
    if let Some(l) = limit {
        out.note("extrapolated_limit", l);
    }
    out.note("verdict", verdict.to_string());
    out.result = json!({
        "rank": rank,
        "support_radius": f.support_radius(),
        "samples": samples.iter().map(|(m, v)| json!({"m": m, "norm": v})).collect::<Vec<_>>(),
        "extrapolated_limit": limit,
        "haagerup_bound": bound,
        "verdict": verdict,
    });
    Ok(out)
}

fn scan_outcome(scan: &ScanReport, expect: Option<Verdict>) -> Outcome {
    let mut out = Outcome::new(&[&scan.parameter, "value", "certified_tail"], serde_json::to_value(scan).expect("serializable"));
    for p in &scan.points {
        out.row(vec![num(p.param), num(p.value), num(p.certified_tail)]);
    }
    out.note("scan", scan.name.clone());
    out.note("verdict", scan.verdict.to_string());
    out.note("slope", scan.slope);
    out.note("sup", scan.sup());
    if let Some(e) = expect {
        out.note("expected", e.to_string());
        out.ok = e == scan.verdict;
    }
    out
}

fn scan_ultra(group: &GroupDescriptor, s: f64, tmin: f64, tmax: f64, points: usize, expect: Option<Verdict>) -> Run {
    if !(tmin > 0.0 && tmax > tmin) || points < 2 {
        return Err(Failure::Usage(format!("invalid t range [{tmin}, {tmax}] with {points} points")));
    }
    let grid = log_grid(tmin, tmax, points);
    let scan = if group.has_polynomial_growth() {
        poly_ultra_sup(group, s, &grid, POLY_SCAN_KMAX)?
    } else {
        ultra_sup_scan(s, &standard_length(group)?, &grid)?
    };
    Ok(scan_outcome(&scan, expect))
}

fn scan_sharpness(group: &GroupDescriptor, s: f64, mmax: u64, qmax: u64, expect: Option<Verdict>) -> Run {
    let r = sharpness_scan(group, s, mmax, qmax)?;
    let mut out = Outcome::new(&["m", "lower_bound", "product_fusion", "product_quadrature"], serde_json::to_value(&r).expect("serializable"));
    for (i, p) in r.scan.points.iter().enumerate() {
        let q = r.products.get(i);
        out.row(vec![
            (p.param as u64).to_string(),
            num(p.value),
            opt_num(q.map(|q| q.fusion)),
            opt_num(q.map(|q| q.quadrature)),
        ]);
    }
    let gap = r.max_product_discrepancy();
    out.note("verdict", r.scan.verdict.to_string());
    out.note("slope", r.scan.slope);
    out.note("threshold", r.threshold);
    out.note("max_product_discrepancy", gap);
    out.ok = gap < 1e-6;
    if let Some(e) = expect {
        out.note("expected", e.to_string());
        out.ok &= e == r.scan.verdict;
    }
    Ok(out)
}

fn rd_degree(group: &GroupDescriptor, s: &[f64], kmax: u64) -> Run {
    let v = rd_degree_scan(group, s, kmax)?;
    let mut out = Outcome::new(&["s", "verdict", "partial_sum", "tail_bound"], serde_json::to_value(&v).expect("serializable"));
    for r in &v {
        out.row(vec![num(r.s), r.verdict.to_string(), num(r.partial), opt_num(r.tail_bound)]);
    }
    out.note("group", group.to_string());
    out.note("kmax", kmax);
    Ok(out)
}

fn report_outcome(r: &VerifyReport, ok: bool) -> Outcome {
    let mut out = Outcome::new(&["label", "lhs", "rhs", "ratio"], serde_json::to_value(r).expect("serializable"));
    for i in &r.instances {
        out.row(vec![i.label.clone(), num(i.lhs), num(i.rhs), num(i.ratio)]);
    }
    out.note("check", r.id.clone());
    out.note("verdict", r.verdict.to_string());
    out.note("max_ratio", r.max_ratio);
    if let Some(s) = r.slope {
        out.note("slope", s);
    }
    out.ok = ok;
    out
}

fn verify(check: &Check) -> Run {
    match check {
        Check::Hy { group, p, trials, seed } => {
            let r = hy_battery(&group.group, *p, *trials, *seed)?;
            Ok(report_outcome(&r, r.verdict == Verdict::Holds))
        }
        Check::Haagerup { rank, radius, trials, seed } => {
            let r = haagerup_sandwich_battery(*rank, *radius, *trials, *seed)?;
            Ok(report_outcome(&r, r.verdict == Verdict::Holds))
        }
        Check::Shy { group, p, beta, family, mmax } => {
            let beta = match beta.or_else(|| rapid_decay_beta(&group.group)) {
                Some(b) => b,
                None => return Err(Failure::Usage(format!("no rapid-decay exponent known for {}; pass --beta", group.group))),
            };
            let ms: Vec<u64> = (1..=*mmax).collect();
            let r = sharpened_hy_trend(&group.group, *family, *p, beta, &ms)?;
            Ok(report_outcome(&r, r.verdict == Verdict::Bounded))
        }
        Check::Sobolev { group, p, s, family, mmax } => {
            let ms: Vec<u64> = (1..=*mmax).collect();
            let r = sobolev_trend(&group.group, *family, *p, *s, &ms)?;
            Ok(report_outcome(&r, r.verdict == Verdict::Bounded))
        }
        Check::Exponents { kind, p } => {
            let mut grid = ExponentGrid::default();
            if let Some(ps) = p {
                grid.ps = ps.clone();
            }
            let mut out = Outcome::new(&["kind", "params", "computed", "expected", "residual", "equivalence"], Value::Null);
            let mut reports = Vec::new();
            for k in kind {
                let r = exponent_algebra_check(*k, &grid)?;
                let name = serde_json::to_value(k).expect("serializable");
                let name = name.as_str().unwrap_or_default().to_string();
                for row in &r.rows {
                    let params: Vec<String> = row.params.iter().map(|(k, v)| format!("{k}={}", num(*v))).collect();
                    out.row(vec![
                        name.clone(),
                        params.join(" "),
                        num(row.computed),
                        num(row.expected),
                        num(row.residual),
                        row.equivalence_holds.to_string(),
                    ]);
                }
                out.note(&format!("{name}_verdict"), r.verdict.to_string());
                out.note(&format!("{name}_max_residual"), r.max_residual);
                out.ok &= r.verdict == Verdict::Holds;
                reports.push(r);
            }
            out.result = serde_json::to_value(&reports).expect("serializable");
            Ok(out)
        }
        Check::Ultra { group, s } => {
            let d = ultracontractivity_decision(&group.group, *s)?;
            let expected = if *s >= 3.0 { Verdict::Bounded } else { Verdict::Divergent };
            let mut out = scan_outcome(&d.scan, Some(expected));
            out.note("rd_sum_at_tmin", d.rd_sum);
            out.note("series_at_tmin", d.series);
            out.result = serde_json::to_value(&d).expect("serializable");
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_follow_the_group() {
        let g = |s: &str| s.parse::<GroupDescriptor>().unwrap();
        assert_eq!(parse_label(&g("oplus:3"), "4").unwrap(), IrrLabel::NonNegInt(4));
        assert_eq!(parse_label(&g("zd:2"), "(1,-2)").unwrap(), IrrLabel::Lattice(vec![1, -2]));
        assert_eq!(parse_label(&g("fdual:2"), "e").unwrap(), IrrLabel::Word(Word::identity()));
        assert_eq!(parse_label(&g("fdual:2"), "aA").unwrap(), IrrLabel::Word(Word::identity()));
        assert!(parse_label(&g("oplus:3"), "-1").is_err());
        assert!(parse_label(&g("zd:2"), "1,x").is_err());
    }
}
