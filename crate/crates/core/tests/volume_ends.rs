use std::f64::consts::TAU;

use proptest::prelude::*;
use warpgeom::certify::MetricSpec;
use warpgeom::volume::{cross_section_volume, end_volume, volume_between, EndSpec, EndVolume};
use warpgeom::warpfn::{build_interpolant, choose_rho, MetricVariant};
use warpgeom::WarpingFunction;

fn finite(v: EndVolume) -> f64 {
    match v {
        EndVolume::Finite(x) => x,
        other => panic!("{other:?}"),
    }
}

fn constructed(variant: MetricVariant, n: usize, r0: f64) -> EndSpec {
    let eps = 0.5;
    let pair = build_interpolant(eps, choose_rho(eps).unwrap(), variant).unwrap();
    EndSpec::new(MetricSpec::from_pair(&pair, n).unwrap(), 1.0, r0).unwrap()
}

#[test]
fn quadrature_matches_exponential_closed_form() {
    // closed-form tail below -5, Simpson on [-5, 0]
    let spec = MetricSpec::new(WarpingFunction::exp(), WarpingFunction::exp(), 4).unwrap();
    let end = EndSpec::new(spec.clone(), 1.0, 0.0).unwrap();
    let tail = finite(end_volume(&EndSpec::new(spec, 1.0, -5.0).unwrap()).unwrap());
    let total = tail + volume_between(&end, -5.0, 0.0).unwrap();
    let exact = TAU / 7.0;
    assert!((total - exact).abs() <= 1e-8 * exact, "{total}");
    assert!((finite(end_volume(&end).unwrap()) - exact).abs() <= 1e-12 * exact);
}

#[test]
fn exponential_ends_in_every_dimension() {
    for n in 2..=6 {
        let spec = MetricSpec::new(WarpingFunction::exp(), WarpingFunction::exp(), n).unwrap();
        for (vol_b, r0) in [(1.0, 0.0), (2.5, -1.3), (0.3, 0.7)] {
            let end = EndSpec::new(spec.clone(), vol_b, r0).unwrap();
            let k = (2 * n - 1) as f64;
            let exact = TAU * vol_b / k * (k * r0).exp();
            let got = finite(end_volume(&end).unwrap());
            assert!(
                (got - exact).abs() <= 1e-8 * exact,
                "n {n}: {got} vs {exact}"
            );
        }
    }
}

#[test]
fn fujiwara_tail_matches_quadrature() {
    let spec = MetricSpec::new(
        WarpingFunction::exp(),
        WarpingFunction::exp_shift(0.1).unwrap(),
        3,
    )
    .unwrap();
    let end = EndSpec::new(spec.clone(), 1.0, 0.0).unwrap();
    // ∫ e^u (e^u + τ)^4 = ((e^u + τ)^5 − τ^5) / 5
    let exact = TAU * (1.1_f64.powi(5) - 0.1_f64.powi(5)) / 5.0;
    assert!((finite(end_volume(&end).unwrap()) - exact).abs() <= 1e-12 * exact);
    let tail = finite(end_volume(&EndSpec::new(spec, 1.0, -30.0).unwrap()).unwrap());
    let total = tail + volume_between(&end, -30.0, 0.0).unwrap();
    assert!((total - exact).abs() <= 1e-8 * exact);
}

#[test]
fn paper_end_is_finite_and_hs_tail_diverges() {
    for n in [3, 4] {
        let end = constructed(MetricVariant::PaperNegative, n, 0.0);
        let v = finite(end_volume(&end).unwrap());
        assert!(v.is_finite() && v > 0.0);
    }
    let hs = constructed(MetricVariant::HeintzeSchroeder, 4, 0.0);
    assert!(matches!(
        end_volume(&hs).unwrap(),
        EndVolume::Divergent { .. }
    ));
    // a truncated product end has finite volume
    let rho = hs.metric.rho.unwrap();
    assert!(volume_between(&hs, -rho - 10.0, 0.0).unwrap().is_finite());
    let c = WarpingFunction::constant(1.0).unwrap();
    let flat = EndSpec::new(MetricSpec::new(c.clone(), c, 4).unwrap(), 1.0, 0.0).unwrap();
    assert!(matches!(
        end_volume(&flat).unwrap(),
        EndVolume::Divergent { .. }
    ));
}

#[test]
fn cumulative_volume_has_cross_section_derivative() {
    let end = constructed(MetricVariant::PaperNegative, 3, 0.4);
    let rho = end.metric.rho.unwrap();
    let knots: Vec<f64> = end
        .metric
        .v
        .knots()
        .into_iter()
        .chain(end.metric.h.knots())
        .collect();
    let cumulative = |r: f64| {
        let e = EndSpec::new(end.metric.clone(), end.vol_b, r).unwrap();
        finite(end_volume(&e).unwrap())
    };
    let dr = 1e-4;
    for k in 1..20 {
        let r = -rho - 1.0 + (rho + 1.3) * k as f64 / 20.0;
        if knots.iter().any(|x| (x - r).abs() < 2.0 * dr) {
            continue;
        }
        let fd = (cumulative(r + dr) - cumulative(r - dr)) / (2.0 * dr);
        let exact = cross_section_volume(&end, r).unwrap();
        assert!(
            (fd - exact).abs() <= 1e-6 * (1.0 + exact),
            "r {r}: {fd} vs {exact}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn volume_is_additive(a in -14.0f64..0.5, n in 3usize..5) {
        let end = constructed(MetricVariant::PaperNegative, n, 0.5);
        let left = EndSpec::new(end.metric.clone(), 1.0, a).unwrap();
        let whole = finite(end_volume(&end).unwrap());
        let split = finite(end_volume(&left).unwrap()) + volume_between(&end, a, 0.5).unwrap();
        prop_assert!((whole - split).abs() <= 1e-10, "{} vs {}", whole, split);
    }
}
