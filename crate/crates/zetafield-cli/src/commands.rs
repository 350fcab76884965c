//! Command bodies. Each builds its report text, prints it to stdout,
//! optionally mirrors it to --out, and only then applies its verification
//! gate, so a failing run still shows the full evidence.

use std::path::PathBuf;

use num_complex::Complex64;

use zetafield::approx::{approximate, choose_eta, ApproxError, ApproxProblem, Disk};
use zetafield::instability::{
    perturb_fail_rh, remove_offcircle_zeros, validate_membership, MembershipReport,
    PerturbationSpec, ZetaLikeMember,
};
use zetafield::nevanlinna::{
    analyze_probes, default_probes, geometric_grid, Alpha, NevError, QuadConfig,
};
use zetafield::report::{
    fmt_c64, member_text, nevanlinna_csv, nevanlinna_text, perturbation_text, point_counts_text,
    removal_text, translate_sum_csv, translate_sum_text, zeta_text, Report,
};

use crate::artifact;
use crate::{
    ApproxArgs, BuildArgs, Cli, Cmd, CountArgs, CurveCmd, FailRhArgs, Failure, FixRhArgs, Format,
    MemberArgs, NevanlinnaArgs, PerturbCmd, RhArgs, ValidateCmd, ZetaCmd,
};

pub fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Cmd::Curve(CurveCmd::Count(a)) => curve_count(&a),
        Cmd::Zeta(ZetaCmd::Build(a)) => zeta_build(&a),
        Cmd::Zeta(ZetaCmd::Rh(a)) => zeta_rh(&a),
        Cmd::Zeta(ZetaCmd::Nevanlinna(a)) => zeta_nevanlinna(&a),
        Cmd::Perturb(PerturbCmd::FailRh(a)) => perturb_fail(&a),
        Cmd::Perturb(PerturbCmd::FixRh(a)) => perturb_fix(&a),
        Cmd::Approx(a) => approx(&a),
        Cmd::Validate(ValidateCmd::Member(a)) => validate_member(&a),
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn first_failing(membership: &MembershipReport) -> String {
    membership
        .checks
        .iter()
        .find(|c| !c.passed)
        .map(|c| format!("membership.{}: residual {} ({})", c.name, c.residual, c.detail))
        .unwrap_or_else(|| "membership: verdict false with no failing check".into())
}

fn curve_count(a: &CountArgs) -> Result<(), Failure> {
    let cf = artifact::load_curve_file(&a.spec)?;
    let curve = artifact::build_curve(&cf)?;
    let genus = artifact::model_genus(&cf);
    let depth = (2 * genus).max(2);
    let mut counts = Vec::with_capacity(depth as usize);
    for n in 1..=depth {
        counts.push(
            curve
                .count_points(n)
                .map_err(|e| Failure::Input(format!("counting over extension {n}: {e}")))?,
        );
    }
    let q = cf.p.pow(cf.r);
    emit(&point_counts_text(q, genus, &counts), &a.out)
}

fn zeta_build(a: &BuildArgs) -> Result<(), Failure> {
    let cf = artifact::load_curve_file(&a.spec)?;
    let zf = artifact::build_zeta(&cf)?;
    let rep = zf
        .report(a.tol, a.seed)
        .map_err(|e| Failure::Verify(format!("zeta.report: {e}")))?;
    emit(&zeta_text(&rep), &a.out)?;
    if !rep.rh_verdict {
        return Err(Failure::Verify(format!(
            "zeta.rh_verdict: a root misses the critical circle by {}",
            rep.rh_max_deviation
        )));
    }
    if let Some(w) = rep.weil.iter().find(|w| !w.within_bound) {
        return Err(Failure::Verify(format!(
            "zeta.weil_bound: |a_{}| = {} exceeds 2g q^(n/2) = {}",
            w.n,
            w.a.magnitude(),
            w.bound
        )));
    }
    Ok(())
}

fn zeta_rh(a: &RhArgs) -> Result<(), Failure> {
    let cf = artifact::load_curve_file(&a.spec)?;
    let zf = artifact::build_zeta(&cf)?;
    let verdict = zf
        .l()
        .check_rh(a.tol)
        .map_err(|e| Failure::Verify(format!("zeta.rh_roots: {e}")))?;
    let mut r = Report::new("zeta-rh");
    r.entry("q", zf.q()).entry("genus", zf.g()).entry("tol", a.tol);
    r.section("rh");
    r.entry("rh_verdict", verdict.verdict)
        .entry("rh_max_deviation", verdict.max_deviation);
    for (i, (z, mult, dev)) in verdict.deviations.iter().enumerate() {
        r.entry(
            &format!("root_{}", i + 1),
            format!("{} (multiplicity {mult}, deviation {dev})", fmt_c64(*z)),
        );
    }
    emit(&r.render(), &a.out)?;
    if !verdict.verdict {
        return Err(Failure::Verify(format!(
            "zeta.rh_verdict: a root misses the critical circle by {}",
            verdict.max_deviation
        )));
    }
    Ok(())
}

fn parse_alpha(s: &str) -> Result<Alpha, Failure> {
    let t = s.trim();
    let bad = || Failure::Input(format!("bad probe value `{s}`; use a real, a+bi, i, or inf"));
    if t.eq_ignore_ascii_case("inf") {
        return Ok(Alpha::Infinity);
    }
    if let Some(body) = t.strip_suffix('i') {
        // split a trailing imaginary part off an optional real part; the
        // sign position must not belong to an exponent
        let split = body
            .char_indices()
            .rev()
            .find(|(idx, ch)| {
                (*ch == '+' || *ch == '-')
                    && *idx > 0
                    && !matches!(body.as_bytes()[idx - 1], b'e' | b'E')
            })
            .map(|(idx, _)| idx);
        let (re_part, im_part) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let re = if re_part.is_empty() {
            0.0
        } else {
            re_part.parse::<f64>().map_err(|_| bad())?
        };
        let im = match im_part {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse::<f64>().map_err(|_| bad())?,
        };
        return Ok(Alpha::finite(re, im));
    }
    let re = t.parse::<f64>().map_err(|_| bad())?;
    Ok(Alpha::finite(re, 0.0))
}

fn nev_failure(e: NevError) -> Failure {
    match e {
        NevError::InsufficientGrid(_) | NevError::DegenerateTarget(_) => {
            Failure::Input(e.to_string())
        }
        NevError::QuadratureUnstable { .. } => {
            Failure::Verify(format!("nevanlinna.quadrature_stability: {e}"))
        }
        NevError::NonMonotoneT { .. } => {
            Failure::Verify(format!("nevanlinna.characteristic_monotone: {e}"))
        }
        NevError::Roots(_) => Failure::Verify(format!("nevanlinna.roots: {e}")),
    }
}

fn zeta_nevanlinna(a: &NevanlinnaArgs) -> Result<(), Failure> {
    let cf = artifact::load_curve_file(&a.spec)?;
    let zf = artifact::build_zeta(&cf)?;
    if a.rmax < 100.0 {
        return Err(Failure::Input(
            "rmax must be at least 100: the analysis needs radii >= 1 spanning two decades".into(),
        ));
    }
    if !(a.grid > 0.0) {
        return Err(Failure::Input("grid must be a positive density".into()));
    }
    let decades = 2.0f64;
    let n = ((decades * a.grid).ceil() as usize + 1).max(5);
    let grid = geometric_grid(a.rmax / 100.0, a.rmax, n);
    let probes = if a.alpha.is_empty() {
        default_probes()
    } else {
        a.alpha.iter().map(|s| parse_alpha(s)).collect::<Result<Vec<_>, _>>()?
    };
    let rep =
        analyze_probes(&zf, &grid, &probes, &QuadConfig::default()).map_err(nev_failure)?;
    let text = match a.format {
        Format::Report => nevanlinna_text(&rep),
        Format::Csv => nevanlinna_csv(&rep),
    };
    emit(&text, &a.out)
}

fn perturb_fail(a: &FailRhArgs) -> Result<(), Failure> {
    let cf = artifact::load_curve_file(&a.spec)?;
    let zf = artifact::build_zeta(&cf)?;
    let base = ZetaLikeMember::from_zeta(&zf);
    if !(a.epsilon > 0.0) {
        return Err(Failure::Input("epsilon must be positive".into()));
    }
    if a.annulus <= base.q() as f64 {
        return Err(Failure::Input(format!(
            "annulus must exceed q = {} so the annulus contains the critical circle",
            base.q()
        )));
    }
    let pert = perturb_fail_rh(
        &base,
        &PerturbationSpec {
            r: a.annulus,
            epsilon: a.epsilon,
        },
    );
    let membership = validate_membership(&pert.member);
    let rh = pert
        .member
        .check_rh(a.tol)
        .map_err(|e| Failure::Verify(format!("member.rh_roots: {e}")))?;
    print!("{}", perturbation_text(&pert, &membership, &rh));
    if let Some(path) = &a.out {
        let mf = artifact::perturbation_to_file(&cf, &pert, rh.verdict);
        artifact::save_member_file(path, &mf)?;
    }
    if !membership.verdict {
        return Err(Failure::Verify(first_failing(&membership)));
    }
    if rh.verdict {
        return Err(Failure::Verify(
            "instability.rh_broken: the perturbation left every root on the critical circle"
                .into(),
        ));
    }
    Ok(())
}

fn perturb_fix(a: &FixRhArgs) -> Result<(), Failure> {
    let mf = artifact::load_member_file(&a.spec)?;
    let (_zf, member) = artifact::rebuild_member(&mf)?;
    let removal = remove_offcircle_zeros(&member, a.tol)
        .map_err(|e| Failure::Verify(format!("instability.removal: {e}")))?;
    let membership = validate_membership(&removal.member);
    let rh = removal
        .member
        .check_rh(a.tol)
        .map_err(|e| Failure::Verify(format!("member.rh_roots: {e}")))?;
    print!("{}", removal_text(&removal, &membership, &rh));
    if let Some(path) = &a.out {
        let out = artifact::removal_to_file(&mf.base, &removal, rh.verdict);
        artifact::save_member_file(path, &out)?;
    }
    if !membership.verdict {
        return Err(Failure::Verify(first_failing(&membership)));
    }
    if !rh.verdict {
        return Err(Failure::Verify(
            "instability.rh_restored: off-circle roots remain after removal".into(),
        ));
    }
    Ok(())
}

fn approx_failure(e: ApproxError) -> Failure {
    match e {
        ApproxError::Geometry(_) => Failure::Input(e.to_string()),
        ApproxError::ExtrapolationUnstable(_) => {
            Failure::Verify(format!("approx.residue_extrapolation: {e}"))
        }
        ApproxError::PoleCollision(_) => Failure::Verify(format!("approx.pole_guard: {e}")),
        ApproxError::Zeta(_) => Failure::Verify(format!("approx.zeta: {e}")),
    }
}

fn approx(a: &ApproxArgs) -> Result<(), Failure> {
    let cf = artifact::load_curve_file(&a.spec)?;
    let zf = artifact::build_zeta(&cf)?;
    let k = Disk::new(Complex64::new(0.0, 0.0), 1.0);
    let u = Disk::new(Complex64::new(0.0, 0.0), 2.0);
    if !(a.grid > 0.0 && a.grid <= 0.5) {
        return Err(Failure::Input("grid step must lie in (0, 0.5]".into()));
    }
    let eta = if a.eta.eq_ignore_ascii_case("auto") {
        choose_eta(&zf, &u)
    } else {
        let v = a
            .eta
            .parse::<f64>()
            .map_err(|_| Failure::Input(format!("bad eta `{}`; use a positive real or auto", a.eta)))?;
        if !(v > 0.0) {
            return Err(Failure::Input("eta must be positive".into()));
        }
        v
    };
    let target = |s: Complex64| s.exp();
    let prob = ApproxProblem {
        target: &target,
        k,
        u,
        eta,
        grid_step: a.grid,
    };
    let ts = approximate(&zf, &prob).map_err(approx_failure)?;
    let text = match a.format {
        Format::Report => translate_sum_text(&ts),
        Format::Csv => translate_sum_csv(&ts),
    };
    emit(&text, &a.out)
}

fn validate_member(a: &MemberArgs) -> Result<(), Failure> {
    let mf = artifact::load_member_file(&a.spec)?;
    let (_zf, member) = artifact::rebuild_member(&mf)?;
    let membership = validate_membership(&member);
    let rh = member
        .check_rh(a.tol)
        .map_err(|e| Failure::Verify(format!("member.rh_roots: {e}")))?;
    emit(&member_text(&member, &membership, &rh), &a.out)?;
    if let Some(claims) = &mf.claims {
        if let Some(claimed) = claims.rh_verdict {
            if claimed != rh.verdict {
                return Err(Failure::Verify(format!(
                    "artifact.claimed_rh: artifact claims rh_verdict = {claimed}, recheck says {}",
                    rh.verdict
                )));
            }
        }
    }
    if !membership.verdict {
        return Err(Failure::Verify(first_failing(&membership)));
    }
    Ok(())
}
