//! Approximation of holomorphic functions on a disk by finite sums of
//! scaled and shifted zeta values, Sum_k lambda_k zeta(eta s + b_k).
//!
//! The construction follows the Cauchy-Pompeiu route: multiply the target f
//! by a radial C-infinity cutoff chi that is 1 on the inner disk K and 0
//! outside the outer disk U, so dbar(chi f) = f dbar(chi) lives on the
//! collar U minus K. For s in K,
//!
//!   f(s) = (1/pi) integral of dbar(chi f)(z) / (s - z) over the collar,
//!
//! and zeta(eta(s - z)) = a / (pi (s - z)) + holomorphic rest once eta is
//! small enough that the nonzero poles clear U and U - U; the rest
//! integrates to zero against dbar(chi f) by Stokes. A midpoint Riemann sum
//! of the collar integral with kernel zeta(eta .) therefore converges to f
//! on K, and its weights form the finite sum.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::extrap::neville_to_zero;
use crate::polyrat::RationalFn;
use crate::zeta::{ZetaError, ZetaFunction};

#[derive(Debug, Error)]
pub enum ApproxError {
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("residue extrapolation did not stabilize: {0}")]
    ExtrapolationUnstable(String),
    #[error("kernel argument hit the pole lattice: {0}")]
    PoleCollision(String),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
}

/// distance to the pole lattice below which a kernel argument counts as a
/// collision
pub const POLE_GUARD: f64 = 1e-9;

/// relative agreement demanded between the numeric residue limit and its
/// closed form
pub const RESIDUE_AGREE_RTOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct Disk {
    pub center: Complex64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Complex64, radius: f64) -> Disk {
        assert!(radius > 0.0 && radius.is_finite());
        Disk { center, radius }
    }

    pub fn contains(&self, s: Complex64) -> bool {
        (s - self.center).norm() <= self.radius
    }

    /// sup of |w| over the disk together with its difference set.
    fn reach(&self) -> f64 {
        (self.center.norm() + self.radius).max(2.0 * self.radius)
    }
}

/// Scale eta so every nonzero pole of s -> zeta(eta s) stays outside U and
/// U - U with a factor-2 margin; capped at 1. The nonzero poles of zeta sit
/// at modulus >= min(1, 2 pi / log q).
pub fn choose_eta(zf: &ZetaFunction, u: &Disk) -> f64 {
    let rho_min = (2.0 * PI / zf.log_q()).min(1.0);
    (rho_min / (2.0 * u.reach())).min(1.0)
}

/// pi times the residue at s = 0 of s -> zeta(eta s), computed as the
/// numeric limit pi lim t zeta(eta t) by extrapolation over four decades
/// and cross-checked against the closed form -pi h / ((q-1) log q eta)
/// obtained from the u-plane residue L(1)/(q-1) divided by du/ds = -log q.
pub fn residue_a(zf: &ZetaFunction, eta: f64) -> Result<Complex64, ApproxError> {
    assert!(eta > 0.0 && eta.is_finite(), "eta must be positive");
    let ts = [1e-3, 1e-4, 1e-5, 1e-6];
    let mut vals = Vec::with_capacity(ts.len());
    for &t in &ts {
        let z = zf.eval(Complex64::new(eta * t, 0.0))?;
        vals.push(z * t);
    }
    let full = neville_to_zero(&ts, &vals);
    let shorter = neville_to_zero(&ts[..3], &vals[..3]);
    if (full - shorter).norm() > 1e-7 * full.norm().max(1.0) {
        return Err(ApproxError::ExtrapolationUnstable(format!(
            "limit moved from {shorter} to {full} on the last refinement"
        )));
    }
    let a = full * PI;

    let h = zf
        .l()
        .class_number()
        .map_err(ApproxError::Zeta)?
        .to_f64()
        .expect("class number fits in f64");
    let a_closed = -PI * h / ((zf.q() as f64 - 1.0) * zf.log_q() * eta);
    if (a - Complex64::new(a_closed, 0.0)).norm() > RESIDUE_AGREE_RTOL * a_closed.abs().max(1.0) {
        return Err(ApproxError::ExtrapolationUnstable(format!(
            "numeric residue {a} disagrees with closed form {a_closed}"
        )));
    }
    Ok(a)
}

fn bump(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

fn bump_prime(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp() / (t * t)
    }
}

fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = bump(t);
        a / (a + bump(1.0 - t))
    }
}

fn smoothstep_prime(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        let a = bump(t);
        let b = bump(1.0 - t);
        (bump_prime(t) * b + a * bump_prime(1.0 - t)) / ((a + b) * (a + b))
    }
}

/// Radial cutoff: 1 on the inner disk, 0 outside the outer one, with a
/// closed-form derivative on the collar.
#[derive(Debug, Clone, Copy)]
pub struct Cutoff {
    center: Complex64,
    r_inner: f64,
    r_outer: f64,
}

impl Cutoff {
    fn psi(&self, rho: f64) -> f64 {
        smoothstep((self.r_outer - rho) / (self.r_outer - self.r_inner))
    }

    fn psi_prime(&self, rho: f64) -> f64 {
        -smoothstep_prime((self.r_outer - rho) / (self.r_outer - self.r_inner))
            / (self.r_outer - self.r_inner)
    }

    pub fn chi(&self, s: Complex64) -> f64 {
        self.psi((s - self.center).norm())
    }

    /// dbar of a radial profile: psi'(rho) (s - c) / (2 rho).
    pub fn dbar_chi(&self, s: Complex64) -> Complex64 {
        let d = s - self.center;
        let rho = d.norm();
        if rho == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        d * (self.psi_prime(rho) / (2.0 * rho))
    }

    pub fn collar(&self) -> (f64, f64) {
        (self.r_inner, self.r_outer)
    }
}

/// The collar must be concentric, nonempty, and at least two grid steps
/// wide, so the Riemann sum has room to see the transition.
pub fn build_cutoff(k: &Disk, u: &Disk, grid_step: f64) -> Result<Cutoff, ApproxError> {
    if (k.center - u.center).norm() > 1e-12 * (1.0 + u.center.norm()) {
        return Err(ApproxError::Geometry(
            "inner and outer disks must be concentric for the radial cutoff".into(),
        ));
    }
    if k.radius >= u.radius {
        return Err(ApproxError::Geometry(format!(
            "inner radius {} must be smaller than outer radius {}",
            k.radius, u.radius
        )));
    }
    if !(grid_step > 0.0) || u.radius - k.radius < 2.0 * grid_step {
        return Err(ApproxError::Geometry(format!(
            "collar of width {} is thinner than two grid steps of {}",
            u.radius - k.radius,
            grid_step
        )));
    }
    Ok(Cutoff {
        center: u.center,
        r_inner: k.radius,
        r_outer: u.radius,
    })
}

/// One request: approximate `target` (holomorphic on a neighborhood of U)
/// on K by a finite sum of zeta translates.
pub struct ApproxProblem<'a> {
    pub target: &'a dyn Fn(Complex64) -> Complex64,
    pub k: Disk,
    pub u: Disk,
    pub eta: f64,
    pub grid_step: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Term {
    pub lambda: Complex64,
    pub shift: Complex64,
}

/// The finite approximation Sum_k lambda_k zeta(eta s + shift_k), plus the
/// audit run against the target on a fixed boundary-biased sample of K.
#[derive(Debug, Clone)]
pub struct TranslateSum {
    pub eta: f64,
    pub residue_a: Complex64,
    pub terms: Vec<Term>,
    pub sup_error: f64,
    pub sample_errors: Vec<(Complex64, f64)>,
}

fn pairwise_sum(vals: &[Complex64]) -> Complex64 {
    match vals.len() {
        0 => Complex64::new(0.0, 0.0),
        1..=8 => vals.iter().sum(),
        n => {
            let (a, b) = vals.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Distance from w to the pole lattice {2 pi i j / log q} and
/// {1 + 2 pi i j / log q}.
fn pole_distance(w: Complex64, ln_q: f64) -> f64 {
    let spacing = 2.0 * PI / ln_q;
    let j = (w.im / spacing).round();
    let on_zero = (w - Complex64::new(0.0, j * spacing)).norm();
    let on_one = (w - Complex64::new(1.0, j * spacing)).norm();
    on_zero.min(on_one)
}

struct Kernel {
    zc: RationalFn<Complex64>,
    ln_q: f64,
}

impl Kernel {
    fn new(zf: &ZetaFunction) -> Kernel {
        Kernel {
            zc: zf.z_rational().to_c64(),
            ln_q: zf.log_q(),
        }
    }

    fn eval(&self, w: Complex64) -> Result<Complex64, ApproxError> {
        if pole_distance(w, self.ln_q) < POLE_GUARD {
            return Err(ApproxError::PoleCollision(format!(
                "argument {w} lies on the pole lattice"
            )));
        }
        let u = (-w * self.ln_q).exp();
        let den = self.zc.den().eval(&u);
        Ok(self.zc.num().eval(&u) / den)
    }
}

fn sum_at(kernel: &Kernel, eta: f64, terms: &[Term], s: Complex64) -> Result<Complex64, ApproxError> {
    let mut vals = Vec::with_capacity(terms.len());
    for t in terms {
        vals.push(t.lambda * kernel.eval(s * eta + t.shift)?);
    }
    Ok(pairwise_sum(&vals))
}

/// Deterministic boundary-biased sample of the inner disk: three rings plus
/// the center, 256 points.
pub fn audit_samples(k: &Disk) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(256);
    for (count, frac) in [(128usize, 1.0), (80, 0.7), (47, 0.35)] {
        for j in 0..count {
            let theta = 2.0 * PI * j as f64 / count as f64;
            pts.push(k.center + Complex64::from_polar(k.radius * frac, theta));
        }
    }
    pts.push(k.center);
    pts
}

/// Builds the Riemann-sum approximation: weights a^{-1} dbar(chi f)(z_k)
/// delta^2 at collar midpoints z_k, shifts -eta z_k, then audits the sum
/// against the target on the fixed sample of K.
pub fn approximate(zf: &ZetaFunction, prob: &ApproxProblem) -> Result<TranslateSum, ApproxError> {
    let cutoff = build_cutoff(&prob.k, &prob.u, prob.grid_step)?;
    let rho_min = (2.0 * PI / zf.log_q()).min(1.0);
    if !(prob.eta > 0.0) || prob.eta * prob.u.reach() > rho_min / 2.0 * (1.0 + 1e-12) {
        return Err(ApproxError::Geometry(format!(
            "eta = {} does not keep the nonzero poles clear of the domain; \
             the largest admissible value here is {}",
            prob.eta,
            choose_eta(zf, &prob.u)
        )));
    }
    let a = residue_a(zf, prob.eta)?;

    let delta = prob.grid_step;
    let c = prob.u.center;
    let r_out = prob.u.radius;
    let r_in = prob.k.radius;
    let n = (2.0 * r_out / delta).ceil() as usize;
    let mut terms = Vec::new();
    for i in 0..n {
        let x = c.re - r_out + (i as f64 + 0.5) * delta;
        for j in 0..n {
            let y = c.im - r_out + (j as f64 + 0.5) * delta;
            let z = Complex64::new(x, y);
            let rho = (z - c).norm();
            if rho <= r_in || rho >= r_out {
                continue;
            }
            let dbar = (prob.target)(z) * cutoff.dbar_chi(z);
            terms.push(Term {
                lambda: dbar * (delta * delta) / a,
                shift: -z * prob.eta,
            });
        }
    }

    let kernel = Kernel::new(zf);
    let mut sample_errors = Vec::with_capacity(256);
    let mut sup_error = 0.0f64;
    for s in audit_samples(&prob.k) {
        let v = sum_at(&kernel, prob.eta, &terms, s)?;
        let err = (v - (prob.target)(s)).norm();
        sup_error = sup_error.max(err);
        sample_errors.push((s, err));
    }
    Ok(TranslateSum {
        eta: prob.eta,
        residue_a: a,
        terms,
        sup_error,
        sample_errors,
    })
}

/// Direct evaluation of the sum at one point.
pub fn eval_translate_sum(
    zf: &ZetaFunction,
    ts: &TranslateSum,
    s: Complex64,
) -> Result<Complex64, ApproxError> {
    sum_at(&Kernel::new(zf), ts.eta, &ts.terms, s)
}

/// The same sum with the kernel replaced by its singular part a/(pi w):
/// this degenerates the construction to the plain discretized Cauchy
/// transform of dbar(chi f), which must reproduce the target on K up to
/// the same discretization error.
pub fn eval_singular_part(ts: &TranslateSum, s: Complex64) -> Complex64 {
    let vals: Vec<Complex64> = ts
        .terms
        .iter()
        .map(|t| t.lambda * ts.residue_a * ts.eta / ((s * ts.eta + t.shift) * PI))
        .collect();
    pairwise_sum(&vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::CurveSpec;
    use crate::gf::FiniteField;

    fn elliptic_zeta() -> ZetaFunction {
        let k = FiniteField::new(5, 1).unwrap();
        let c = CurveSpec::elliptic(k.clone(), k.scalar(1), k.scalar(1)).unwrap();
        ZetaFunction::from_curve(&c, 2).unwrap()
    }

    fn line_zeta(p: u64) -> ZetaFunction {
        let line = CurveSpec::projective_line(FiniteField::new(p, 1).unwrap());
        ZetaFunction::from_curve(&line, 1).unwrap()
    }

    fn disk(re: f64, im: f64, r: f64) -> Disk {
        Disk::new(Complex64::new(re, im), r)
    }

    #[test]
    fn eta_examples() {
        // 2 pi / log 5 > 1, so rho_min = 1; U = disk(0, 2) reaches 4
        let zf = elliptic_zeta();
        assert_eq!(choose_eta(&zf, &disk(0.0, 0.0, 2.0)), 0.125);
        // tiny domain: the cap at 1 binds
        assert_eq!(choose_eta(&zf, &disk(0.0, 0.0, 0.1)), 1.0);
        // off-center domain: reach is max(|c| + R, 2R)
        let eta = choose_eta(&zf, &disk(3.0, 0.0, 1.0));
        assert!((eta - 1.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn residue_matches_closed_form() {
        // genus 0 over F_2: h = 1, so a(1) = -pi / log 2
        let zf = line_zeta(2);
        let a = residue_a(&zf, 1.0).unwrap();
        let expect = -PI / 2f64.ln();
        assert!((a.re - expect).abs() <= 1e-8 * expect.abs());
        assert!(a.im.abs() <= 1e-8);

        // scaling: a(eta) = a(1) / eta
        let a4 = residue_a(&zf, 0.25).unwrap();
        assert!((a4 - a * 4.0).norm() <= 1e-6 * a4.norm());

        // elliptic base: h = 9, q = 5
        let zf5 = elliptic_zeta();
        let a5 = residue_a(&zf5, 0.125).unwrap();
        let expect5 = -PI * 9.0 / (4.0 * 5f64.ln() * 0.125);
        assert!((a5.re - expect5).abs() <= 1e-8 * expect5.abs());
    }

    #[test]
    fn cutoff_profile_and_derivative() {
        let cut = build_cutoff(&disk(0.0, 0.0, 1.0), &disk(0.0, 0.0, 2.0), 0.125).unwrap();
        assert_eq!(cut.chi(Complex64::new(0.5, 0.2)), 1.0);
        assert_eq!(cut.dbar_chi(Complex64::new(0.5, 0.2)), Complex64::new(0.0, 0.0));
        assert_eq!(cut.chi(Complex64::new(2.5, 0.0)), 0.0);
        assert_eq!(cut.dbar_chi(Complex64::new(0.0, -2.5)), Complex64::new(0.0, 0.0));

        // collar midpoint: |dbar chi| = |psi'| / 2, and the closed form
        // matches a central finite difference of chi
        let s = Complex64::from_polar(1.5, 0.7);
        let closed = cut.dbar_chi(s);
        assert!((closed.norm() - cut.psi_prime(1.5).abs() / 2.0).abs() < 1e-14);
        let h = 1e-5;
        let dx = (cut.chi(s + Complex64::new(h, 0.0)) - cut.chi(s - Complex64::new(h, 0.0)))
            / (2.0 * h);
        let dy = (cut.chi(s + Complex64::new(0.0, h)) - cut.chi(s - Complex64::new(0.0, h)))
            / (2.0 * h);
        let fd = Complex64::new(dx, dy) * 0.5;
        assert!((closed - fd).norm() < 1e-6, "closed {closed} vs fd {fd}");
    }

    #[test]
    fn bad_geometry_is_rejected() {
        let thin = build_cutoff(&disk(0.0, 0.0, 1.0), &disk(0.0, 0.0, 1.1), 0.125);
        assert!(matches!(thin, Err(ApproxError::Geometry(_))));
        let shifted = build_cutoff(&disk(0.3, 0.0, 1.0), &disk(0.0, 0.0, 2.0), 0.125);
        assert!(matches!(shifted, Err(ApproxError::Geometry(_))));
        let inverted = build_cutoff(&disk(0.0, 0.0, 2.0), &disk(0.0, 0.0, 1.0), 0.125);
        assert!(matches!(inverted, Err(ApproxError::Geometry(_))));
    }

    fn run_exp(zf: &ZetaFunction, eta: f64, delta: f64) -> TranslateSum {
        let target = |s: Complex64| s.exp();
        approximate(
            zf,
            &ApproxProblem {
                target: &target,
                k: disk(0.0, 0.0, 1.0),
                u: disk(0.0, 0.0, 2.0),
                eta,
                grid_step: delta,
            },
        )
        .unwrap()
    }

    #[test]
    fn exp_target_converges_under_refinement() {
        let zf = elliptic_zeta();
        let eta = choose_eta(&zf, &disk(0.0, 0.0, 2.0));
        let mut errors = Vec::new();
        for k in 0..4 {
            let delta = 0.25 / (1 << k) as f64;
            errors.push(run_exp(&zf, eta, delta).sup_error);
        }
        for pair in errors.windows(2) {
            assert!(
                pair[1] * 1.8 <= pair[0],
                "refinement only improved {} -> {}",
                pair[0],
                pair[1]
            );
        }
        assert!(errors[3] <= 0.05, "fine-grid error {}", errors[3]);
    }

    #[test]
    fn square_target_converges_under_refinement() {
        let zf = elliptic_zeta();
        let k = disk(0.0, 0.0, 0.5);
        let u = disk(0.0, 0.0, 1.5);
        let eta = choose_eta(&zf, &u);
        let target = |s: Complex64| s * s;
        let mut errors = Vec::new();
        for j in 0..3 {
            let delta = 0.125 / (1 << j) as f64;
            let ts = approximate(
                &zf,
                &ApproxProblem {
                    target: &target,
                    k,
                    u,
                    eta,
                    grid_step: delta,
                },
            )
            .unwrap();
            errors.push(ts.sup_error);
        }
        for pair in errors.windows(2) {
            assert!(pair[1] * 1.8 <= pair[0]);
        }
        assert!(errors[2] <= 0.05, "fine-grid error {}", errors[2]);
    }

    #[test]
    fn zero_target_gives_zero_sum() {
        let zf = elliptic_zeta();
        let target = |_: Complex64| Complex64::new(0.0, 0.0);
        let ts = approximate(
            &zf,
            &ApproxProblem {
                target: &target,
                k: disk(0.0, 0.0, 1.0),
                u: disk(0.0, 0.0, 2.0),
                eta: 0.125,
                grid_step: 0.125,
            },
        )
        .unwrap();
        assert_eq!(ts.sup_error, 0.0);
        assert!(ts.terms.iter().all(|t| t.lambda.norm() == 0.0));
        let v = eval_translate_sum(&zf, &ts, Complex64::new(0.3, 0.1)).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn single_term_is_a_bare_zeta_value() {
        let zf = elliptic_zeta();
        let ts = TranslateSum {
            eta: 0.125,
            residue_a: Complex64::new(1.0, 0.0),
            terms: vec![Term {
                lambda: Complex64::new(1.0, 0.0),
                shift: Complex64::new(0.0, 0.0),
            }],
            sup_error: 0.0,
            sample_errors: Vec::new(),
        };
        let s = Complex64::new(0.3, 0.2);
        let got = eval_translate_sum(&zf, &ts, s).unwrap();
        let want = zf.eval(s * 0.125).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn audit_covers_the_center() {
        let zf = elliptic_zeta();
        let ts = run_exp(&zf, 0.125, 0.0625);
        let center = Complex64::new(0.0, 0.0);
        let v = eval_translate_sum(&zf, &ts, center).unwrap();
        assert!((v - center.exp()).norm() <= ts.sup_error + 1e-15);
    }

    #[test]
    fn error_is_insensitive_to_valid_eta() {
        // the holomorphic rest of the kernel integrates to zero, so two
        // valid scalings differ only through discretization
        let zf = elliptic_zeta();
        let e1 = run_exp(&zf, 0.125, 0.0625).sup_error;
        let e2 = run_exp(&zf, 0.1, 0.0625).sup_error;
        assert!(e1.max(e2) <= 4.0 * e1.min(e2) + 1e-9, "e1 {e1} e2 {e2}");
    }

    #[test]
    fn singular_part_reproduces_the_cauchy_transform() {
        let zf = elliptic_zeta();
        let ts = run_exp(&zf, 0.125, 0.0625);
        let mut sup = 0.0f64;
        for s in audit_samples(&disk(0.0, 0.0, 1.0)) {
            let v = eval_singular_part(&ts, s);
            sup = sup.max((v - s.exp()).norm());
        }
        assert!(
            sup <= (3.0 * ts.sup_error).max(0.05),
            "singular-part error {sup} vs kernel error {}",
            ts.sup_error
        );
    }

    #[test]
    fn pole_lattice_arguments_are_rejected() {
        let zf = elliptic_zeta();
        let ts = TranslateSum {
            eta: 0.125,
            residue_a: Complex64::new(1.0, 0.0),
            terms: vec![Term {
                lambda: Complex64::new(1.0, 0.0),
                shift: Complex64::new(0.0, 0.0),
            }],
            sup_error: 0.0,
            sample_errors: Vec::new(),
        };
        let err = eval_translate_sum(&zf, &ts, Complex64::new(0.0, 0.0)).unwrap_err();
        assert!(matches!(err, ApproxError::PoleCollision(_)));
        // the shifted pole line Re w = 1 is guarded too
        let err = eval_translate_sum(&zf, &ts, Complex64::new(8.0, 0.0)).unwrap_err();
        assert!(matches!(err, ApproxError::PoleCollision(_)));
    }

    #[test]
    fn oversized_eta_is_rejected() {
        let zf = elliptic_zeta();
        let target = |s: Complex64| s.exp();
        let out = approximate(
            &zf,
            &ApproxProblem {
                target: &target,
                k: disk(0.0, 0.0, 1.0),
                u: disk(0.0, 0.0, 2.0),
                eta: 0.3,
                grid_step: 0.125,
            },
        );
        assert!(matches!(out, Err(ApproxError::Geometry(_))));
    }
}
