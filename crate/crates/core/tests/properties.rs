use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use sobolev_qg::classical_lp::{central_linf_norm, central_lp_norm, WeylMeasure};
use sobolev_qg::fourier::{
    apply_multiplier, conjugate_exponent, dual_lp_norm, interp_weight_combine, mixed_norm,
    plancherel_l2_norm, project_sphere,
};
use sobolev_qg::freegroup::{
    enumerate_ball, haagerup_upper_bound, truncated_operator_norm, truncated_operator_norm_on,
    GroupElementCoeffs, DEFAULT_TOL,
};
use sobolev_qg::quadrature::{integrate_adaptive, AdaptiveOptions};
use sobolev_qg::repdata::{
    ball_sizes, central_product, dimension_sequence, fusion_decompose, sphere_sizes,
};
use sobolev_qg::semigroup::{
    cw_sum, default_t_grid, ultra_series, ultra_sup_scan, CwForm, CwWeight, LengthFunction,
};
use sobolev_qg::verify::{
    check_hausdorff_young, check_sobolev, random_group_element, rd_degree_scan,
    sharpness_scan,
};
use sobolev_qg::{
    Block, CentralElement, FourierCoefficients, GroupDescriptor, IrrLabel, Verdict, WeightSpec,
    Word,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn g(sel: &str) -> GroupDescriptor {
    sel.parse().unwrap()
}

fn int_group() -> impl Strategy<Value = GroupDescriptor> {
    prop::sample::select(vec!["oplus:2", "oplus:3", "oplus:5", "splus:4", "splus:5", "splus:7", "su2", "so3"])
        .prop_map(g)
}

fn quad_group() -> impl Strategy<Value = GroupDescriptor> {
    prop::sample::select(vec!["oplus:2", "oplus:3", "oplus:4", "splus:4", "splus:6"]).prop_map(g)
}

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn central(group: GroupDescriptor, max_degree: usize) -> impl Strategy<Value = CentralElement> {
    prop::collection::vec(coeff(), 1..=max_degree + 1).prop_map(move |cs| {
        let mut f = CentralElement::new(group).unwrap();
        for (k, c) in cs.into_iter().enumerate() {
            f.set(k as u64, c);
        }
        f
    })
}

fn any_central(max_degree: usize) -> impl Strategy<Value = CentralElement> {
    quad_group().prop_flat_map(move |grp| central(grp, max_degree))
}

/// Fourier data with a few small dense blocks on `O_3^+` (dimensions 1, 3, 8).
fn dense_coeffs() -> impl Strategy<Value = FourierCoefficients> {
    prop::collection::vec((0u64..3, prop::collection::vec(coeff(), 64)), 1..4).prop_map(|blocks| {
        let grp = g("oplus:3");
        let dims = [1usize, 3, 8];
        let mut f = FourierCoefficients::new(grp);
        for (k, entries) in blocks {
            let n = dims[k as usize];
            let m = nalgebra::DMatrix::from_fn(n, n, |i, j| entries[i * 8 + j]);
            f.insert(IrrLabel::NonNegInt(k), Block::dense(m).unwrap()).unwrap();
        }
        f
    })
}

fn rational_map(v: &[(u64, i64, i64)]) -> BTreeMap<u64, BigRational> {
    v.iter()
        .map(|&(k, n, d)| (k, BigRational::new(BigInt::from(n), BigInt::from(d))))
        .collect()
}

fn rational_central() -> impl Strategy<Value = BTreeMap<u64, BigRational>> {
    prop::collection::vec((0u64..=10, -20i64..=20, 1i64..=9), 1..6).prop_map(|v| rational_map(&v))
}

fn rank_element(rank: usize, radius: usize) -> impl Strategy<Value = GroupElementCoeffs> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_group_element(rank, radius, 4, &mut rng).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dimension_consistency(grp in int_group(), a in 0u64..=20, b in 0u64..=20) {
        let dims = dimension_sequence(&grp, 40).unwrap();
        let parts = fusion_decompose(&grp, &IrrLabel::NonNegInt(a), &IrrLabel::NonNegInt(b)).unwrap();
        let mut total = num_bigint::BigUint::from(0u32);
        for (c, m) in &parts {
            let IrrLabel::NonNegInt(c) = c else { unreachable!() };
            prop_assert!(*c <= a + b);
            total += &dims[*c as usize] * num_bigint::BigUint::from(*m);
        }
        prop_assert_eq!(total, &dims[a as usize] * &dims[b as usize]);
    }

    #[test]
    fn ball_sphere_telescoping(grp in int_group()) {
        let s = sphere_sizes(&grp, 100);
        let b = ball_sizes(&grp, 100);
        prop_assert_eq!(&b[0], &s[0]);
        for k in 1..=100 {
            prop_assert_eq!(&b[k], &(&b[k - 1] + &s[k]));
        }
    }

    #[test]
    fn lattice_and_free_fusion_lengths(d in 1usize..=3, x in prop::collection::vec(-5i64..=5, 3), y in prop::collection::vec(-5i64..=5, 3)) {
        let grp = GroupDescriptor::dual_zd(d).unwrap();
        let a = IrrLabel::Lattice(x[..d].to_vec());
        let b = IrrLabel::Lattice(y[..d].to_vec());
        let len = |l: &IrrLabel| sobolev_qg::repdata::length(&grp, l).unwrap();
        for (c, _) in fusion_decompose(&grp, &a, &b).unwrap() {
            prop_assert!(len(&c) <= len(&a) + len(&b));
        }
    }

    #[test]
    fn central_product_is_commutative_and_associative(
        grp in int_group(),
        a in rational_central(),
        b in rational_central(),
        c in rational_central(),
    ) {
        let ab = central_product(&grp, &a, &b).unwrap();
        prop_assert_eq!(&ab, &central_product(&grp, &b, &a).unwrap());
        let left = central_product(&grp, &ab, &c).unwrap();
        let right = central_product(&grp, &a, &central_product(&grp, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn lp_monotone_in_p(f in dense_coeffs(), p in 1.0..6.0f64, dq in 0.0..6.0f64) {
        let q = p + dq;
        prop_assert!(dual_lp_norm(&f, q).unwrap() <= dual_lp_norm(&f, p).unwrap() * (1.0 + 1e-12));
        prop_assert!(dual_lp_norm(&f, f64::INFINITY).unwrap() <= dual_lp_norm(&f, q).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn mixed_norm_at_two_is_plancherel(f in dense_coeffs()) {
        let w = |_: u64| 1.0;
        let m = mixed_norm(&f, 2.0, &w).unwrap();
        let pl = plancherel_l2_norm(&f);
        prop_assert!((m - pl).abs() <= 1e-13 * pl.max(1.0));
    }

    #[test]
    fn multiplier_commutes_with_sphere_projection(f in dense_coeffs(), k in 0u64..3, s in 0.0..4.0f64) {
        let w = WeightSpec::RapidDecay { s };
        let support: Vec<_> = f.iter().map(|(l, _)| l.clone()).collect();
        let tf = apply_multiplier(&f, &w);
        let tf_support: Vec<_> = tf.iter().map(|(l, _)| l.clone()).collect();
        prop_assert_eq!(support, tf_support);
        let a = project_sphere(&tf, k);
        let b = apply_multiplier(&project_sphere(&f, k), &w);
        prop_assert_eq!(a.len(), b.len());
        for ((la, ba), (lb, bb)) in a.iter().zip(b.iter()) {
            prop_assert_eq!(la, lb);
            let diff = (ba.hs_norm_sq() - bb.hs_norm_sq()).abs();
            prop_assert!(diff <= 1e-13 * ba.hs_norm_sq().max(1.0));
        }
    }

    #[test]
    fn interpolated_weight_exponent(p in 1.01..=2.0f64, beta in 0.0..4.0f64) {
        let pd = conjugate_exponent(p);
        let e = interp_weight_combine(-(beta + 1.0) * (2.0 - p), p, -beta * (pd - 2.0), pd, 0.5, 2.0).unwrap();
        prop_assert!((e + (2.0 * beta + 1.0) * (2.0 / p - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn classical_l2_is_plancherel(f in any_central(30)) {
        let q = central_lp_norm(f.group(), &f, 2.0).unwrap();
        prop_assert!((q - f.l2_norm()).abs() < 1e-8);
    }

    #[test]
    fn hausdorff_young_constant_one(f in any_central(12), idx in 0usize..4) {
        let p = [1.0, 4.0 / 3.0, 1.5, 2.0][idx];
        let r = check_hausdorff_young(&f.to_fourier(), p).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Holds, "ratio {}", r.max_ratio);
    }

    #[test]
    fn sobolev_at_zero_is_plancherel_comparison(f in any_central(10), p in 1.05..=2.0f64) {
        let r = check_sobolev(&f.to_fourier(), p, 0.0).unwrap();
        prop_assert!((r.instances[0].lhs - plancherel_l2_norm(&f.to_fourier())).abs() < 1e-14);
    }

    #[test]
    fn holder_on_classical_side(grp in quad_group(), a in prop::collection::vec(coeff(), 1..8), b in prop::collection::vec(coeff(), 1..8)) {
        let mk = |cs: &[Complex64]| {
            let mut f = CentralElement::new(grp).unwrap();
            for (k, c) in cs.iter().enumerate() {
                f.set(k as u64, *c);
            }
            f
        };
        let (f, h) = (mk(&a), mk(&b));
        let prod = CentralElement::from_map(grp, central_product(&grp, f.coeffs(), h.coeffs()).unwrap()).unwrap();
        let lhs = central_lp_norm(&grp, &prod, 2.0).unwrap();
        let rhs = central_lp_norm(&grp, &f, 4.0).unwrap() * central_lp_norm(&grp, &h, 4.0).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-9));
    }

    #[test]
    fn trunc_norm_below_haagerup(f in rank_element(2, 3)) {
        let r = f.support_radius();
        let t = truncated_operator_norm(&f, r + 2, DEFAULT_TOL).unwrap();
        prop_assert!(t <= haagerup_upper_bound(&f) * (1.0 + 1e-9));
    }

    #[test]
    fn trunc_norm_triangle(f in rank_element(2, 2), h in rank_element(2, 2)) {
        let ball = enumerate_ball(2, 5).unwrap();
        let n = |x: &GroupElementCoeffs| truncated_operator_norm_on(x, &ball, DEFAULT_TOL).unwrap();
        prop_assert!(n(&f.add(&h).unwrap()) <= n(&f) + n(&h) + 2.0 * DEFAULT_TOL);
    }

    #[test]
    fn group_side_plancherel(f in rank_element(3, 3)) {
        let d = dual_lp_norm(&f.to_fourier(), 2.0).unwrap();
        prop_assert!((d - f.l2_norm()).abs() <= 1e-13 * d.max(1.0));
    }

    #[test]
    fn unitarity_of_translations(word in "[aAbB]{0,5}") {
        let w: Word = word.parse().unwrap();
        let f = GroupElementCoeffs::delta(2, w.clone()).unwrap();
        let n = truncated_operator_norm(&f, w.len() + 2, DEFAULT_TOL).unwrap();
        prop_assert!((n - 1.0).abs() < 1e-9, "{n}");
    }

    #[test]
    fn ultra_series_decreasing(t in 0.01..5.0f64, dt in 1e-3..1.0f64) {
        let l = LengthFunction::Poisson;
        prop_assert!(ultra_series(t + dt, &l, false).unwrap() < ultra_series(t, &l, false).unwrap());
    }

    #[test]
    fn cw_sum_matches_series(t in 0.05..5.0f64) {
        let c = cw_sum(&g("fdual:2"), CwForm::RapidDecay { beta: 1.0 }, CwWeight::Linear { t }, (80.0 / t) as u64).unwrap();
        let s = ultra_series(t, &LengthFunction::Poisson, false).unwrap();
        prop_assert!((c.partial - s).abs() <= 1e-12 * s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn product_oracle(grp in quad_group(), a in prop::collection::vec(coeff(), 1..=21), b in prop::collection::vec(coeff(), 1..=21)) {
        let mk = |cs: &[Complex64]| {
            let mut f = CentralElement::new(grp).unwrap();
            for (k, c) in cs.iter().enumerate() {
                f.set(k as u64, *c);
            }
            f
        };
        let (f, h) = (mk(&a), mk(&b));
        let fusion: f64 = central_product(&grp, f.coeffs(), h.coeffs())
            .unwrap()
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt();
        let model = WeylMeasure::for_group(&grp).unwrap();
        let pointwise = |t: f64| (model.eval_series(&f, t) * model.eval_series(&h, t)).norm_sqr() * model.density(t);
        let panels = 64;
        let quad: f64 = (0..panels)
            .map(|i| {
                let lo = PI * i as f64 / panels as f64;
                let hi = PI * (i + 1) as f64 / panels as f64;
                integrate_adaptive(pointwise, lo, hi, AdaptiveOptions::default()).value
            })
            .sum::<f64>()
            .sqrt();
        prop_assert!((fusion - quad).abs() < 1e-6, "{fusion} vs {quad}");
    }

    #[test]
    fn trunc_norm_monotone_in_radius(f in rank_element(2, 2)) {
        let r = f.support_radius();
        let mut last = 0.0;
        for m in r + 2..=r + 5 {
            let n = truncated_operator_norm(&f, m, DEFAULT_TOL).unwrap();
            prop_assert!(n >= last - 2.0 * DEFAULT_TOL);
            last = n;
        }
    }

    #[test]
    fn t_power_series_unimodal(s in 2.5..4.0f64) {
        let vals: Vec<f64> = default_t_grid()
            .iter()
            .map(|&t| t.powf(s) * ultra_series(t, &LengthFunction::Poisson, false).unwrap())
            .collect();
        let peak = vals.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        prop_assert!(vals[..=peak].windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)));
        prop_assert!(vals[peak..].windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
    }
}

#[test]
fn rapid_decay_witness() {
    for grp in [g("oplus:3"), g("su2")] {
        for k in 0..=100u64 {
            let chi = CentralElement::character(grp, k).unwrap();
            let ratio = central_linf_norm(&grp, &chi).unwrap() / chi.l2_norm();
            assert!((ratio - (k + 1) as f64).abs() < 1e-8 * (k + 1) as f64, "k = {k}: {ratio}");
        }
    }
}

#[test]
fn free_orthogonal_two_matches_su2_and_s4_matches_so3() {
    assert_eq!(dimension_sequence(&g("oplus:2"), 50).unwrap(), dimension_sequence(&g("su2"), 50).unwrap());
    assert_eq!(dimension_sequence(&g("splus:4"), 50).unwrap(), dimension_sequence(&g("so3"), 50).unwrap());
}

#[test]
fn verdicts_monotone_in_s() {
    let grid: Vec<f64> = (0..=20).map(|i| 2.0 + 0.1 * i as f64).collect();
    for l in [LengthFunction::Poisson, LengthFunction::heat(&g("oplus:2"))] {
        let bounded: Vec<bool> = grid
            .iter()
            .map(|&s| ultra_sup_scan(s, &l, &default_t_grid()).unwrap().verdict == Verdict::Bounded)
            .collect();
        assert!(bounded.windows(2).all(|w| !w[0] || w[1]), "{l:?}: {bounded:?}");
    }
    for sel in ["oplus:3", "splus:5", "oplus:2", "zd:2", "fdual:3"] {
        let conv: Vec<bool> = rd_degree_scan(&g(sel), &grid, 20_000)
            .unwrap()
            .iter()
            .map(|r| r.verdict == Verdict::Converges)
            .collect();
        assert!(conv.windows(2).all(|w| !w[0] || w[1]), "{sel}: {conv:?}");
    }
    let sharp: Vec<Verdict> = [0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
        .iter()
        .map(|&s| sharpness_scan(&g("oplus:2"), s, 200, 0).unwrap().scan.verdict)
        .collect();
    let first_bounded = sharp.iter().position(|v| *v == Verdict::Bounded).unwrap();
    assert!(sharp[first_bounded..].iter().all(|v| *v == Verdict::Bounded), "{sharp:?}");
}
