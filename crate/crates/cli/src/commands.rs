use std::fmt::Write;

use anyhow::anyhow;
use warpgeom::bundle::{
    deform, trivializing_cover_degree, trivializing_cover_degree_nonorientable,
    NonOrientableFlatBundle, OrientableFlatBundle, Turns,
};
use warpgeom::certify::{
    certify_bounds, certify_upper_bound, principal_profiles, rescale_to_unit_lower_bound,
    CertifyError, LowerBound, MetricSpec,
};
use warpgeom::frame::{
    assemble_curvature, bracket_coeffs, mixed_term, mixed_term_erroneous, warped_hyperbolic_model,
    FiberCurvature, FrameBracketData, WarpProfile,
};
use warpgeom::morse::{
    handle_decomposition, homotopy_type, is_aspherical, kernel_rank, KernelRank, StratumData,
};
use warpgeom::oracle::{
    chart_heisenberg, chart_warped_hyperbolic, convergence_check, coordinate_sectional,
    frame_compare, heisenberg_frame, riemann_fd, warped_hyperbolic_frame, ConvergenceStatus,
    FDConfig, CONVERGENCE_STEP,
};
use warpgeom::treegraded::{
    find_open_perturbation, is_open, wall_crossings, ConePoint, MetricTree, Perturbation, TreeError,
};
use warpgeom::volume::{end_volume, EndSpec, EndVolume};
use warpgeom::warpfn::{build_interpolant, choose_rho, fmt_real, InterpolantMethod, MetricVariant};
use warpgeom::{WarpError, WarpingFunction};

use crate::{Failure, Outcome};

/// Largest number of rows `curvature` will emit.
const MAX_ROWS: usize = 10_000_000;

fn method_name(m: InterpolantMethod) -> String {
    match m {
        InterpolantMethod::SingleQuintic => "single-quintic".into(),
        InterpolantMethod::ConvexChain { segments } => format!("convex-chain {segments}"),
    }
}

fn parse_spec(text: &str) -> Result<MetricSpec, Failure> {
    MetricSpec::parse(text).map_err(|e| Failure::Input(anyhow!("bad spec: {e}")))
}

/// Report and spec text of the constructed pair.
pub fn construct(
    eps: f64,
    variant: MetricVariant,
    rho: Option<f64>,
    n: usize,
) -> Result<(String, String), Failure> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Failure::Input(anyhow!("--eps must be positive, got {eps}")));
    }
    if n < 2 {
        return Err(Failure::Input(anyhow!("--n must be at least 2, got {n}")));
    }
    let threshold = choose_rho(eps)?;
    let pair = match build_interpolant(eps, rho.unwrap_or(threshold), variant) {
        Ok(p) => p,
        Err(e @ WarpError::ConstructionFailed { .. }) => {
            return Err(Failure::Science(String::new(), e.into()))
        }
        Err(e) => return Err(Failure::Input(e.into())),
    };
    let spec = MetricSpec::from_pair(&pair, n)?;

    let mut r = String::new();
    let _ = writeln!(r, "variant = {}", variant.name());
    if let MetricVariant::Fujiwara { tau } = variant {
        let _ = writeln!(r, "tau = {}", fmt_real(tau));
    }
    let _ = writeln!(r, "eps = {}", fmt_real(eps));
    let _ = writeln!(r, "n = {n}");
    let _ = writeln!(r, "rho_threshold = {}", fmt_real(threshold));
    let _ = writeln!(r, "rho = {}", fmt_real(pair.rho));
    let _ = writeln!(r, "attempts = {}", pair.attempts);
    let _ = writeln!(r, "v_method = {}", method_name(pair.v_method));
    let _ = writeln!(r, "h_method = {}", method_name(pair.h_method));
    let mismatch = pair.v.max_knot_mismatch().max(pair.h.max_knot_mismatch());
    let _ = writeln!(r, "jet_mismatch = {}", fmt_real(mismatch));
    let _ = writeln!(
        r,
        "positivity_grid_step = {}",
        fmt_real(pair.v_report.grid_step)
    );
    for (name, rep) in [("v", &pair.v_report), ("h", &pair.h_report)] {
        let _ = writeln!(
            r,
            "{name}_min = {} {} {}",
            fmt_real(rep.min_value),
            fmt_real(rep.min_d1),
            fmt_real(rep.min_d2)
        );
    }
    let passed = pair.v_report.passed() && pair.h_report.passed();
    let _ = writeln!(r, "positivity = {}", if passed { "pass" } else { "fail" });
    if !passed {
        return Err(Failure::Science(r, anyhow!("positivity check failed")));
    }
    Ok((r, spec.to_text()))
}

pub fn curvature(text: &str, from: f64, to: f64, step: f64) -> Outcome {
    let spec = parse_spec(text)?;
    if !(from.is_finite() && to.is_finite() && from <= to) {
        return Err(Failure::Input(anyhow!("need finite --from <= --to")));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Failure::Input(anyhow!(
            "--step must be positive, got {step}"
        )));
    }
    let count = ((to - from) / step * (1.0 + 1e-12)).floor();
    if count >= MAX_ROWS as f64 {
        return Err(Failure::Input(anyhow!(
            "grid has more than {MAX_ROWS} rows"
        )));
    }
    let grid: Vec<f64> = (0..=count as usize)
        .map(|i| from + i as f64 * step)
        .collect();
    let rows = principal_profiles(&spec, &grid).map_err(|e| Failure::Input(e.into()))?;

    let mut out = String::from("r");
    if spec.n >= 3 {
        out += ",K1,K2";
    }
    out += ",K3";
    if spec.n >= 4 {
        out += ",K4";
    }
    out.push('\n');
    for row in rows {
        out += &fmt_real(row.r);
        for k in row.k.values() {
            out.push(',');
            out += &fmt_real(k);
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn certify(text: &str) -> Outcome {
    let spec = parse_spec(text)?;
    let (cert, failure) = match certify_upper_bound(&spec) {
        Ok(cert) => (cert, None),
        Err(e @ CertifyError::CertificationFailed { .. }) => (
            certify_bounds(&spec).map_err(|e| Failure::Input(e.into()))?,
            Some(e),
        ),
        Err(e) => return Err(Failure::Input(e.into())),
    };
    let mut out = String::new();
    if let Some(v) = spec.variant {
        let _ = writeln!(out, "variant = {}", v.name());
    }
    out += &cert.to_string();
    let pinching = match &cert.lower {
        LowerBound::Finite(_) => "finite",
        LowerBound::Unbounded { .. } => "unbounded",
    };
    let _ = writeln!(out, "pinching = {pinching}");
    if let Ok(rs) = rescale_to_unit_lower_bound(&cert) {
        let _ = writeln!(out, "rescale = {}", fmt_real(rs.scale));
        let _ = writeln!(out, "rescaled_lower = {}", fmt_real(rs.lower));
        let _ = writeln!(out, "rescaled_upper = {}", fmt_real(rs.upper));
    }
    match failure {
        None => {
            out += "verdict = certified\n";
            Ok(out)
        }
        Some(e) => {
            out += "verdict = failed\n";
            Err(Failure::Science(out, e.into()))
        }
    }
}

pub fn volume(text: &str, r0: f64, vol_b: f64) -> Outcome {
    let spec = parse_spec(text)?;
    let end = EndSpec::new(spec, vol_b, r0)?;
    Ok(match end_volume(&end)? {
        EndVolume::Finite(v) => format!("{v}\n"),
        EndVolume::Divergent { .. } => "divergent\n".into(),
    })
}

fn verdict(out: String, pass: bool, what: &str) -> Outcome {
    if pass {
        Ok(out + "result = PASS\n")
    } else {
        Err(Failure::Science(out + "result = FAIL\n", anyhow!("{what}")))
    }
}

pub fn oracle_hyperbolic() -> Outcome {
    let (v, h) = (WarpingFunction::sinh(), WarpingFunction::cosh());
    let (mut frame_worst, mut formula_worst, mut oracle_worst) = (0.0f64, 0.0f64, 0.0f64);
    for n in 3..=5 {
        let chart = chart_warped_hyperbolic(&v, &h, n)?;
        let (data, prof, fiber) = warped_hyperbolic_model(&v, &h, n)?;
        for r in [0.25, 0.5, 1.0, 2.0] {
            let mut p = vec![0.0; n];
            p[0] = r;
            p[n - 1] = 1.0;
            let expected = assemble_curvature(&data, &prof, &fiber, r)?;
            let frame = warped_hyperbolic_frame(&v, &h, &p)?;
            let report = frame_compare(&chart, &frame, &p, &FDConfig::default(), &expected)?;
            frame_worst = frame_worst.max(report.max_discrepancy);
            let table = riemann_fd(&chart, &p, &FDConfig::default())?;
            for a in 0..n {
                for b in a + 1..n {
                    formula_worst = formula_worst.max((expected.get(a, b, b, a) + 1.0).abs());
                    oracle_worst = oracle_worst
                        .max((coordinate_sectional(&chart, &table, &p, a, b)? + 1.0).abs());
                }
            }
        }
    }
    let mut out = String::from("check = hyperbolic\n");
    let _ = writeln!(out, "discrepancy = {}", fmt_real(frame_worst));
    let _ = writeln!(out, "sectional_formula_error = {}", fmt_real(formula_worst));
    let _ = writeln!(out, "sectional_oracle_error = {}", fmt_real(oracle_worst));
    let pass = frame_worst <= 1e-6 && formula_worst <= 1e-12 && oracle_worst <= 1e-6;
    verdict(out, pass, "hyperbolic model does not match the oracle")
}

pub fn oracle_heisenberg() -> Outcome {
    let h = [
        WarpingFunction::constant(1.0)?,
        WarpingFunction::constant(1.0)?,
        WarpingFunction::exp(),
    ];
    let chart = chart_heisenberg(&h[0], &h[1], &h[2]);
    let data = FrameBracketData::heisenberg();
    let prof = WarpProfile::new(h.to_vec())?;
    let r = 0.0;
    let p = [r, 0.0, 0.0, 0.0];
    let frame = heisenberg_frame([&h[0], &h[1], &h[2]], &p)?;
    let expected = assemble_curvature(&data, &prof, &FiberCurvature::LieFrame, r)?;
    let report = frame_compare(&chart, &frame, &p, &FDConfig::default(), &expected)?;
    let b = bracket_coeffs(&data, &prof, r)?;
    let fd = report.oracle.get(0, 1, 2, 3);
    let good = mixed_term(0, 1, 2, &prof, &b, r)?;
    let bad = mixed_term_erroneous(0, 1, 2, &prof, &b, r)?;

    let mut out = String::from("check = heisenberg-mixed\n");
    let _ = writeln!(out, "oracle = {}", fmt_real(fd));
    let _ = writeln!(out, "mixed_term = {}", fmt_real(good));
    let _ = writeln!(out, "mixed_term_erroneous = {}", fmt_real(bad));
    let _ = writeln!(out, "discrepancy = {}", fmt_real((fd - good).abs()));
    let _ = writeln!(
        out,
        "frame_discrepancy = {}",
        fmt_real(report.max_discrepancy)
    );
    let _ = writeln!(out, "erroneous_gap = {}", fmt_real((fd - bad).abs()));
    let pass = (fd - good).abs() <= 1e-4
        && report.max_discrepancy <= 1e-4
        && ((fd - bad).abs() - 1.0).abs() <= 1e-3;
    verdict(out, pass, "mixed term does not match the oracle")
}

pub fn oracle_convergence() -> Outcome {
    let chart = chart_warped_hyperbolic(&WarpingFunction::sinh(), &WarpingFunction::cosh(), 4)?;
    let report = convergence_check(&chart, &[0.5, 0.0, 0.0, 1.0], CONVERGENCE_STEP, -1.0);
    let mut out = String::from("check = convergence\n");
    let _ = writeln!(out, "step = {}", fmt_real(report.step));
    let _ = writeln!(out, "error_step = {}", fmt_real(report.error_step));
    let _ = writeln!(out, "error_half = {}", fmt_real(report.error_half));
    let order = report.order.unwrap_or(f64::NAN);
    let _ = writeln!(out, "order = {}", fmt_real(order));
    let status = match &report.status {
        ConvergenceStatus::Reliable => "reliable".to_string(),
        ConvergenceStatus::RoundoffFloor => "roundoff-floor".to_string(),
        ConvergenceStatus::Unreliable(why) => format!("unreliable ({why})"),
    };
    let _ = writeln!(out, "status = {status}");
    let pass = report.status == ConvergenceStatus::Reliable && (3.5..=4.5).contains(&order);
    verdict(out, pass, "observed order outside [3.5, 4.5]")
}

fn parse_torsion(s: &str) -> Result<(i64, Turns), Failure> {
    let bad = || Failure::Input(anyhow!("torsion summand must be ORDER:ANGLE, got `{s}`"));
    let (d, a) = s.split_once(':').ok_or_else(bad)?;
    Ok((
        d.trim().parse().map_err(|_| bad())?,
        a.trim().parse().map_err(|_| bad())?,
    ))
}

pub fn bundle(free: Vec<f64>, torsion: &[String], t: Option<f64>, nonorientable: bool) -> Outcome {
    let (orders, angles): (Vec<i64>, Vec<Turns>) = torsion
        .iter()
        .map(|s| parse_torsion(s))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .unzip();
    let b = OrientableFlatBundle::new(free.len(), orders, free, angles)?;
    let degree = if nonorientable {
        trivializing_cover_degree_nonorientable(&NonOrientableFlatBundle {
            orientation_cover: b.clone(),
        })?
    } else {
        trivializing_cover_degree(&b)?
    };
    let mut out = format!("degree = {degree}\n");
    if let Some(t) = t {
        let d = deform(&b, t)?;
        let _ = writeln!(out, "t = {}", fmt_real(t));
        let free: Vec<String> = d.free_angles.iter().map(|&a| fmt_real(a)).collect();
        let _ = writeln!(out, "free_angles = {}", free.join(" "));
        let tors: Vec<String> = d.torsion_angles.iter().map(|a| a.to_string()).collect();
        let _ = writeln!(out, "torsion_angles = {}", tors.join(" "));
    }
    Ok(out)
}

pub fn morse(codims: Vec<u32>, countable: bool) -> Outcome {
    let s = if countable {
        StratumData::countable(codims)?
    } else {
        StratumData::new(codims)?
    };
    let handles: Vec<String> = handle_decomposition(&s)?
        .iter()
        .map(|(k, c)| format!("{k}:{c}"))
        .collect();
    let mut out = format!("handles = {}\n", handles.join(" "));
    let _ = writeln!(out, "aspherical = {}", is_aspherical(&s));
    let rank = match kernel_rank(&s) {
        Ok(KernelRank::Finite(r)) => r.to_string(),
        Ok(KernelRank::CountablyInfinite) => "countably-infinite".into(),
        Err(_) => "none".into(),
    };
    let _ = writeln!(out, "kernel_rank = {rank}");
    let spheres: Vec<String> = homotopy_type(&s)?.iter().map(|d| format!("S{d}")).collect();
    let wedge = if spheres.is_empty() {
        "point".to_string()
    } else {
        spheres.join(" v ")
    };
    let _ = writeln!(out, "homotopy_type = {wedge}");
    Ok(out)
}

/// `t,VERTEX` or `t,U:V:OFFSET` with the offset measured from `U`.
fn parse_point(tree: &MetricTree, s: &str) -> Result<ConePoint, Failure> {
    let bad = || Failure::Input(anyhow!("point must be t,VERTEX or t,U:V:OFFSET, got `{s}`"));
    let (t, rest) = s.split_once(',').ok_or_else(bad)?;
    let t: f64 = t.trim().parse().map_err(|_| bad())?;
    let p = match rest.split(':').collect::<Vec<_>>()[..] {
        [name] => tree.named_vertex(name)?,
        [u, v, off] => tree.point_between(u, v, off.parse().map_err(|_| bad())?)?,
        _ => return Err(bad()),
    };
    Ok(ConePoint { t, p })
}

fn show_point(tree: &MetricTree, z: &ConePoint) -> String {
    let e = &tree.edges()[z.p.edge];
    format!(
        "{},{}:{}:{}",
        z.t,
        tree.name(e.u),
        tree.name(e.v),
        z.p.offset
    )
}

pub fn tree(text: &str, points: &[String], perturb: Option<u32>) -> Outcome {
    let tree = MetricTree::parse(text)?;
    let [x, y, z] = match points {
        [a, b, c] => [
            parse_point(&tree, a)?,
            parse_point(&tree, b)?,
            parse_point(&tree, c)?,
        ],
        _ => return Err(Failure::Input(anyhow!("--open takes three points"))),
    };
    let open = is_open(&tree, &x, &y, &z);
    let mut out = String::from(if open { "open" } else { "not open" });
    match wall_crossings(&tree, &x, &y, &z) {
        Ok(c) => {
            let _ = write!(out, "; crossings {:?} {:?} {:?}", c[0], c[1], c[2]);
        }
        Err(TreeError::DegenerateTripod) => out += "; degenerate tripod",
        Err(e) => return Err(Failure::Input(e.into())),
    }
    out.push('\n');
    if let Some(n) = perturb {
        match find_open_perturbation(&tree, &x, &y, &z, n)? {
            Perturbation::Found(zn) => {
                let _ = writeln!(out, "perturbed = {}", show_point(&tree, &zn));
            }
            Perturbation::NotFound {
                diagnostic,
                candidates,
            } => {
                let _ = writeln!(out, "perturbed = none ({candidates} candidates)");
                return Err(Failure::Science(out, anyhow!("{diagnostic}")));
            }
        }
    }
    Ok(out)
}
