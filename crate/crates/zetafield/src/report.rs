//! Canonical structured-text reports and CSV tables.
//!
//! Every pipeline serializes through the same line-oriented schema: a
//! version header, a `kind:` line, then named sections in a fixed order
//! with one `key: value` pair per line. Two runs over identical inputs
//! produce byte-identical output (nothing here reads clocks, hashes, or
//! environment), so reports diff cleanly.
//!
//! CSV is emitted only for plot-bound tables: the per-alpha growth rows of
//! a value-distribution run and the per-sample errors of a translate-sum
//! audit.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::approx::TranslateSum;
use crate::instability::{
    MembershipReport, MultiplierProvenance, Perturbation, Removal, ZetaLikeMember,
};
use crate::nevanlinna::NevanlinnaReport;
use crate::polyrat::Coeff;
use crate::zeta::{RhVerdict, ZetaReport};

pub const REPORT_VERSION: &str = "zetafield-report 1";

/// Line-oriented report builder with stable section and key order.
#[derive(Debug, Clone)]
pub struct Report {
    kind: String,
    lines: Vec<String>,
}

impl Report {
    pub fn new(kind: &str) -> Report {
        Report {
            kind: kind.to_string(),
            lines: Vec::new(),
        }
    }

    pub fn section(&mut self, name: &str) -> &mut Self {
        self.lines.push(format!("[{name}]"));
        self
    }

    pub fn entry(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.lines.push(format!("{key}: {value}"));
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {REPORT_VERSION}");
        let _ = writeln!(out, "kind: {}", self.kind);
        for line in &self.lines {
            let _ = writeln!(out, "{line}");
        }
        out
    }
}

pub fn fmt_c64(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

/// The zeta pipeline report: L-polynomial, class number, root check,
/// residues, functional-equation residual, Weil coefficient margins.
pub fn zeta_text(rep: &ZetaReport) -> String {
    let mut r = Report::new("zeta");
    r.entry("q", rep.q)
        .entry("genus", rep.g)
        .entry("l_coefficients", join(&rep.l_coefficients, ", "))
        .entry("class_number", &rep.class_number);
    r.section("rh");
    r.entry("rh_verdict", rep.rh_verdict)
        .entry("rh_max_deviation", rep.rh_max_deviation);
    for (i, root) in rep.roots.iter().enumerate() {
        r.entry(
            &format!("root_{}", i + 1),
            format!(
                "{} (multiplicity {}, residual {})",
                fmt_c64(root.value),
                root.multiplicity,
                root.residual
            ),
        );
    }
    r.section("analytic");
    r.entry("residue_closed_form", rep.residue_closed_form)
        .entry("residue_numeric", rep.residue_numeric)
        .entry("fe_residual", rep.fe_residual);
    r.section("weil");
    for w in &rep.weil {
        r.entry(
            &format!("a_{}", w.n),
            format!("{} (margin {}, within_bound {})", w.a, w.margin, w.within_bound),
        );
    }
    r.render()
}

/// The value-distribution report: order/type/deficiency estimates, then the
/// growth table and the per-probe deficiency rows.
pub fn nevanlinna_text(rep: &NevanlinnaReport) -> String {
    let mut r = Report::new("nevanlinna");
    r.entry("description", &rep.description)
        .entry("q", rep.q)
        .entry("genus", rep.genus);
    r.section("estimates");
    r.entry("rho_hat", rep.rho_hat)
        .entry("rho_lower", rep.rho_lower)
        .entry("lambda_hat", rep.lambda_hat)
        .entry("lambda_target", rep.lambda_target)
        .entry("sum_delta", rep.sum_delta);
    r.section("deficiencies");
    for table in &rep.alpha_tables {
        r.entry(
            &format!("delta_hat({})", table.alpha),
            format!("{} (fmt_residual {})", table.delta_hat, table.fmt_residual),
        );
    }
    r.section("growth");
    for (i, row) in rep.growth.rows.iter().enumerate() {
        r.entry(
            &format!("row_{}", i + 1),
            format!(
                "r={} m_inf={} n_poles={} big_n_poles={} t={}",
                row.r, row.m_inf, row.n_poles, row.big_n_poles, row.t
            ),
        );
    }
    r.render()
}

/// CSV companion of the value-distribution report: one row per (alpha,
/// radius) pair, columns r, alpha, n, N, m, T.
pub fn nevanlinna_csv(rep: &NevanlinnaReport) -> String {
    let mut out = String::from("r,alpha,n,N,m,T\n");
    for table in &rep.alpha_tables {
        for (row, grow) in table.rows.iter().zip(&rep.growth.rows) {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                row.r, table.alpha, row.n, row.big_n, row.m, grow.t
            );
        }
    }
    out
}

/// Point-count table from the curve pipeline.
pub fn point_counts_text(q: u64, genus: u32, counts: &[u64]) -> String {
    let mut r = Report::new("counts");
    r.entry("q", q).entry("genus", genus);
    r.section("counts");
    for (i, n) in counts.iter().enumerate() {
        r.entry(&format!("n_{}", i + 1), n);
    }
    r.render()
}

fn membership_lines(r: &mut Report, membership: &MembershipReport) {
    r.section("membership");
    for check in &membership.checks {
        let value = if check.passed {
            format!("pass ({})", check.detail)
        } else {
            format!("FAIL (residual {}; {})", check.residual, check.detail)
        };
        r.entry(check.name, value);
    }
    r.entry("membership_verdict", membership.verdict);
}

fn rh_lines(r: &mut Report, rh: &RhVerdict) {
    r.section("rh");
    r.entry("rh_verdict", rh.verdict)
        .entry("rh_max_deviation", rh.max_deviation);
    let mut worst: Vec<_> = rh.deviations.iter().collect();
    worst.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap());
    for (i, (value, mult, dev)) in worst.iter().take(8).enumerate() {
        r.entry(
            &format!("worst_root_{}", i + 1),
            format!("{} (multiplicity {}, circle_deviation {})", fmt_c64(*value), mult, dev),
        );
    }
}

/// Validation report for one member: the structural checks and the root
/// verdict, with the invariant names CLI failures point back to.
pub fn member_text(
    member: &ZetaLikeMember,
    membership: &MembershipReport,
    rh: &RhVerdict,
) -> String {
    let mut r = Report::new("member");
    r.entry("q", member.q())
        .entry("genus", member.g())
        .entry("h_numerator_degree", member.h().num().degree().unwrap_or(0))
        .entry("h_denominator_degree", member.h().den().degree().unwrap_or(0));
    membership_lines(&mut r, membership);
    rh_lines(&mut r, rh);
    r.render()
}

fn provenance_label(p: &MultiplierProvenance) -> &'static str {
    match p {
        MultiplierProvenance::Identity => "identity",
        MultiplierProvenance::Generator(_) => "generator",
        MultiplierProvenance::Removal(_) => "removal",
    }
}

/// Failure-direction artifact: the doubling ladder and the final deviation,
/// plus membership and root status of the produced member.
pub fn perturbation_text(
    pert: &Perturbation,
    membership: &MembershipReport,
    rh: &RhVerdict,
) -> String {
    let mut r = Report::new("perturb-fail-rh");
    r.entry("q", pert.member.q())
        .entry("genus", pert.member.g())
        .entry("u0", pert.u0)
        .entry("boundary_deviation", pert.boundary_deviation)
        .entry("boundary_samples", crate::instability::BOUNDARY_SAMPLES)
        .entry("multiplier", provenance_label(pert.multiplier.provenance()));
    r.section("ladder");
    for rung in &pert.ladder {
        r.entry(&format!("u0_{}", rung.u0), rung.sup_deviation);
    }
    membership_lines(&mut r, membership);
    rh_lines(&mut r, rh);
    r.render()
}

/// Restoration-direction artifact: the removed orbit and the restored
/// member's status.
pub fn removal_text(rem: &Removal, membership: &MembershipReport, rh: &RhVerdict) -> String {
    let mut r = Report::new("perturb-fix-rh");
    r.entry("q", rem.member.q())
        .entry("genus", rem.member.g())
        .entry("multiplier", provenance_label(rem.multiplier.provenance()))
        .entry("normalization", fmt_c64(rem.normalization.to_c64()))
        .entry("removed_orbit_points", rem.removed.len());
    r.section("removed");
    for (i, (value, mult)) in rem.removed.iter().enumerate() {
        r.entry(
            &format!("zero_{}", i + 1),
            format!("{} (multiplicity {})", fmt_c64(*value), mult),
        );
    }
    membership_lines(&mut r, membership);
    rh_lines(&mut r, rh);
    r.render()
}

/// Approximation artifact: scaling, residue constant, weights and shifts,
/// and the audit summary.
pub fn translate_sum_text(ts: &TranslateSum) -> String {
    let mut r = Report::new("approx");
    r.entry("eta", ts.eta)
        .entry("residue_a", fmt_c64(ts.residue_a))
        .entry("term_count", ts.terms.len())
        .entry("audit_samples", ts.sample_errors.len())
        .entry("sup_error", ts.sup_error);
    r.section("terms");
    for (i, t) in ts.terms.iter().enumerate() {
        r.entry(
            &format!("term_{}", i + 1),
            format!("lambda={} shift={}", fmt_c64(t.lambda), fmt_c64(t.shift)),
        );
    }
    r.render()
}

/// CSV of the per-sample audit errors, columns re, im, error.
pub fn translate_sum_csv(ts: &TranslateSum) -> String {
    let mut out = String::from("re,im,error\n");
    for (s, err) in &ts.sample_errors {
        let _ = writeln!(out, "{},{},{}", s.re, s.im, err);
    }
    out
}
