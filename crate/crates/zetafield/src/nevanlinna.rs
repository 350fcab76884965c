//! Value-distribution machinery for meromorphic functions of finite order:
//! alpha-point lattices, proximity integrals, characteristic growth tables,
//! and estimators for the order, the type, and the deficiencies.
//!
//! Functions of the form h(q^{-s}) with h rational are handled exactly: the
//! alpha-points form lattices on vertical lines (one line per u-root of the
//! cleared numerator), so the integrated counting function N is a closed
//! Jensen sum instead of a quadrature. Only the proximity function m needs
//! numerical integration.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::polyrat::{roots, CRat, Poly, PolyError, RationalFn, RootCluster, RootConfig};
use crate::zeta::{UFunction, ZetaFunction};

/// Lattice points this close to s = 0 are booked in the origin bucket of N.
/// The tolerance is loose enough to absorb the ~1e-8 splitting that the
/// root finder introduces on double roots of clustered denominators, and
/// tight enough that no genuine off-origin point of the test corpus is
/// captured (cleared numerators stay bounded away from u = 1 by h/q).
const ORIGIN_TOL: f64 = 1e-6;

/// Relative slack when testing membership of a lattice point in the closed
/// disk |s| <= r, so boundary points are counted stably.
const DISK_SLACK: f64 = 1e-14;

#[derive(Debug, Error)]
pub enum NevError {
    #[error("target value is attained identically: {0}")]
    DegenerateTarget(String),
    #[error("proximity quadrature did not stabilize on |s| = {r}")]
    QuadratureUnstable { r: f64 },
    #[error("radius grid is too coarse: {0}")]
    InsufficientGrid(String),
    #[error("characteristic decreased across the grid near r = {r}")]
    NonMonotoneT { r: f64 },
    #[error(transparent)]
    Roots(#[from] PolyError),
}

/// A target value on the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    Finite(Complex64),
    Infinity,
}

impl Alpha {
    pub fn finite(re: f64, im: f64) -> Alpha {
        Alpha::Finite(Complex64::new(re, im))
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Infinity => write!(f, "inf"),
            Alpha::Finite(c) => {
                if c.im == 0.0 {
                    write!(f, "{}", c.re)
                } else if c.re == 0.0 {
                    match c.im {
                        1.0 => write!(f, "i"),
                        -1.0 => write!(f, "-i"),
                        im => write!(f, "{im}i"),
                    }
                } else if c.im > 0.0 {
                    write!(f, "{}+{}i", c.re, c.im)
                } else {
                    write!(f, "{}-{}i", c.re, -c.im)
                }
            }
        }
    }
}

/// The solutions of f(s) = alpha inside |s| <= r, with multiplicities.
///
/// `u_roots` holds the roots of the cleared numerator in the variable the
/// function is rational in (u = q^{-s} for lattice functions, s itself for
/// plain rational functions). Points indistinguishable from the origin sit
/// in `n_zero` rather than in `s_points`.
#[derive(Debug, Clone)]
pub struct AlphaPointSet {
    pub alpha: Alpha,
    pub r: f64,
    pub u_roots: Vec<RootCluster>,
    pub s_points: Vec<(Complex64, usize)>,
    pub n_zero: usize,
}

impl AlphaPointSet {
    /// Multiplicity-weighted count of alpha-points in the closed disk
    /// |s| <= r. Requires r within the enumerated radius.
    pub fn counting_n(&self, r: f64) -> usize {
        assert!(
            r <= self.r * (1.0 + 1e-12),
            "counting radius {r} exceeds enumerated radius {}",
            self.r
        );
        let r2 = r * r * (1.0 + DISK_SLACK);
        self.n_zero
            + self
                .s_points
                .iter()
                .filter(|(s, _)| s.norm_sqr() <= r2)
                .map(|&(_, m)| m)
                .sum::<usize>()
    }

    /// Integrated counting function as an exact Jensen sum:
    /// N(r) = n(0) log r + sum over 0 < |s_j| <= r of mult_j log(r / |s_j|).
    pub fn integrated_big_n(&self, r: f64) -> f64 {
        assert!(
            r <= self.r * (1.0 + 1e-12),
            "counting radius {r} exceeds enumerated radius {}",
            self.r
        );
        let r2 = r * r * (1.0 + DISK_SLACK);
        let mut acc = self.n_zero as f64 * r.ln();
        for &(s, m) in &self.s_points {
            let d2 = s.norm_sqr();
            if d2 <= r2 {
                acc += m as f64 * (r / d2.sqrt()).ln();
            }
        }
        acc
    }
}

/// A meromorphic function that exposes what the value-distribution
/// estimators need: pointwise evaluation, a numerically robust proximity
/// integrand, and exact alpha-point enumeration.
pub trait MeroFn {
    fn describe(&self) -> String;

    /// Direct evaluation. Adequate at moderate |s|; the argument-principle
    /// crosscheck is the main consumer.
    fn eval_s(&self, s: Complex64) -> Complex64;

    /// Returns theta-independent machinery evaluating
    /// log+ |1/(f(s) - alpha)| (log+ |f(s)| when alpha = inf) in a form
    /// that stays finite-precision-safe for |Re s| in the hundreds.
    /// Non-finite outputs signal a node that must be jittered.
    fn proximity_integrand(
        &self,
        alpha: &Alpha,
    ) -> Result<Box<dyn Fn(Complex64) -> f64 + '_>, NevError>;

    fn alpha_points(&self, alpha: &Alpha, r: f64) -> Result<AlphaPointSet, NevError>;

    /// Radii of the pole rings inside |s| <= r. Grid radii are nudged off
    /// these so the proximity quadrature never stalls on a singular circle.
    fn pole_radii(&self, r: f64) -> Result<Vec<f64>, NevError> {
        let ps = self.alpha_points(&Alpha::Infinity, r)?;
        let mut out: Vec<f64> = ps.s_points.iter().map(|(s, _)| s.norm()).collect();
        if ps.n_zero > 0 {
            out.push(0.0);
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        Ok(out)
    }
}

/// log |p(u)| at u = q^{-s} without materializing u when it would overflow.
/// The dominant monomial is factored out and the remainder is evaluated in
/// whichever of u, 1/u lies in the closed unit disk; underflow of the small
/// variable then lands on a nonzero coefficient instead of zeroing p.
fn stable_log_abs_u(p: &Poly<Complex64>, s: Complex64, ln_q: f64) -> f64 {
    let c = p.coeffs();
    if c.is_empty() {
        return f64::NEG_INFINITY;
    }
    let log_abs_u = -s.re * ln_q;
    if s.re >= 0.0 {
        let v = c
            .iter()
            .position(|a| a.re != 0.0 || a.im != 0.0)
            .expect("trimmed polynomial has a nonzero coefficient");
        let u = (-s * ln_q).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for a in c[v..].iter().rev() {
            acc = acc * u + a;
        }
        v as f64 * log_abs_u + acc.norm().ln()
    } else {
        // p(u) = u^d p_rev(1/u) with p_rev the coefficient-reversed polynomial
        let w = (s * ln_q).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for a in c.iter() {
            acc = acc * w + a;
        }
        (c.len() - 1) as f64 * log_abs_u + acc.norm().ln()
    }
}

fn alpha_to_crat(a: Complex64) -> CRat {
    CRat::new(
        BigRational::from_float(a.re).expect("finite probe value"),
        BigRational::from_float(a.im).expect("finite probe value"),
    )
}

impl UFunction {
    /// Numerator of f - alpha cleared of denominators, computed exactly so
    /// that cancellations (e.g. the constant term at alpha = f(0)) are
    /// exact and the u = 0 factor can be stripped rather than root-found.
    fn shifted_numerator(&self, alpha: &Alpha) -> Result<Poly<CRat>, NevError> {
        let rf = self.exact();
        let p = match alpha {
            Alpha::Infinity => rf.den().clone(),
            Alpha::Finite(a) => rf.num().sub(&rf.den().scale(&alpha_to_crat(*a))),
        };
        if p.is_zero() {
            return Err(NevError::DegenerateTarget(format!(
                "f - ({alpha}) vanishes identically"
            )));
        }
        Ok(p)
    }
}

impl MeroFn for UFunction {
    fn describe(&self) -> String {
        format!(
            "rational function of u = {}^(-s), degrees ({}, {})",
            self.q(),
            self.exact().num().degree().unwrap_or(0),
            self.exact().den().degree().unwrap_or(0),
        )
    }

    fn eval_s(&self, s: Complex64) -> Complex64 {
        self.eval(s)
    }

    fn proximity_integrand(
        &self,
        alpha: &Alpha,
    ) -> Result<Box<dyn Fn(Complex64) -> f64 + '_>, NevError> {
        let ln_q = self.log_q();
        let den = self.exact().den().to_c64();
        match alpha {
            Alpha::Infinity => {
                let num = self.exact().num().to_c64();
                Ok(Box::new(move |s| {
                    let v = stable_log_abs_u(&num, s, ln_q) - stable_log_abs_u(&den, s, ln_q);
                    if v.is_nan() {
                        return f64::NAN;
                    }
                    v.max(0.0)
                }))
            }
            Alpha::Finite(_) => {
                let shifted = self.shifted_numerator(alpha)?.to_c64();
                Ok(Box::new(move |s| {
                    let v = stable_log_abs_u(&den, s, ln_q) - stable_log_abs_u(&shifted, s, ln_q);
                    if v.is_nan() {
                        return f64::NAN;
                    }
                    v.max(0.0)
                }))
            }
        }
    }

    fn alpha_points(&self, alpha: &Alpha, r: f64) -> Result<AlphaPointSet, NevError> {
        let shifted = self.shifted_numerator(alpha)?;
        // u = q^{-s} omits 0, so the valuation factor carries no s-points;
        // stripping it exactly is what keeps e.g. f(s) = f(0) root-free.
        let coeffs = shifted.coeffs();
        let v = coeffs
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero polynomial");
        let core = Poly::new(coeffs[v..].to_vec());
        let u_roots = if core.degree().unwrap_or(0) >= 1 {
            roots(&core.to_c64(), &RootConfig::default())?
        } else {
            Vec::new()
        };

        let ln_q = self.log_q();
        let two_pi = 2.0 * PI;
        let r_incl = r * r * (1.0 + DISK_SLACK);
        let mut s_points: Vec<(Complex64, usize)> = Vec::new();
        let mut n_zero = 0usize;
        for cl in &u_roots {
            let x = -cl.value.norm().ln() / ln_q;
            if !x.is_finite() || x.abs() > r * (1.0 + 1e-12) {
                continue;
            }
            let w = (r * r - x * x).max(0.0).sqrt();
            let at_one = (cl.value - Complex64::new(1.0, 0.0)).norm() <= ORIGIN_TOL;
            let phase = cl.value.arg();
            let j_lo = ((phase - w * ln_q) / two_pi).floor() as i64 - 1;
            let j_hi = ((phase + w * ln_q) / two_pi).ceil() as i64 + 1;
            for j in j_lo..=j_hi {
                if at_one && j == 0 {
                    n_zero += cl.multiplicity;
                    continue;
                }
                let y = (two_pi * j as f64 - phase) / ln_q;
                if x * x + y * y <= r_incl {
                    s_points.push((Complex64::new(x, y), cl.multiplicity));
                }
            }
        }
        sort_points(&mut s_points);
        Ok(AlphaPointSet {
            alpha: *alpha,
            r,
            u_roots,
            s_points,
            n_zero,
        })
    }
}

/// A rational function of s itself. Order-zero reference object for the
/// estimator tests; direct evaluation is used, so it is intended for
/// modest degrees and radii.
#[derive(Debug, Clone)]
pub struct SRational {
    rf: RationalFn<Complex64>,
}

impl SRational {
    pub fn new(num: Poly<Complex64>, den: Poly<Complex64>) -> SRational {
        SRational {
            rf: RationalFn::new(num, den),
        }
    }

    fn shifted_numerator(&self, alpha: &Alpha) -> Result<Poly<Complex64>, NevError> {
        let p = match alpha {
            Alpha::Infinity => self.rf.den().clone(),
            Alpha::Finite(a) => self.rf.num().sub(&self.rf.den().scale(a)),
        };
        if p.is_zero() {
            return Err(NevError::DegenerateTarget(format!(
                "f - ({alpha}) vanishes identically"
            )));
        }
        Ok(p)
    }
}

impl MeroFn for SRational {
    fn describe(&self) -> String {
        format!(
            "rational function of s, degrees ({}, {})",
            self.rf.num().degree().unwrap_or(0),
            self.rf.den().degree().unwrap_or(0),
        )
    }

    fn eval_s(&self, s: Complex64) -> Complex64 {
        self.rf.eval(&s)
    }

    fn proximity_integrand(
        &self,
        alpha: &Alpha,
    ) -> Result<Box<dyn Fn(Complex64) -> f64 + '_>, NevError> {
        let shifted = self.shifted_numerator(alpha)?;
        let den = self.rf.den().clone();
        let infinite = matches!(alpha, Alpha::Infinity);
        Ok(Box::new(move |s| {
            let v = if infinite {
                // shifted holds the denominator in this branch
                self_log_abs(self.rf.num(), s) - self_log_abs(&shifted, s)
            } else {
                self_log_abs(&den, s) - self_log_abs(&shifted, s)
            };
            if v.is_nan() {
                return f64::NAN;
            }
            v.max(0.0)
        }))
    }

    fn alpha_points(&self, alpha: &Alpha, r: f64) -> Result<AlphaPointSet, NevError> {
        let shifted = self.shifted_numerator(alpha)?;
        let clusters = if shifted.degree().unwrap_or(0) >= 1 {
            roots(&shifted, &RootConfig::default())?
        } else {
            Vec::new()
        };
        let r_incl = r * r * (1.0 + DISK_SLACK);
        let mut s_points = Vec::new();
        let mut n_zero = 0usize;
        for cl in &clusters {
            if cl.value.norm() <= ORIGIN_TOL {
                n_zero += cl.multiplicity;
            } else if cl.value.norm_sqr() <= r_incl {
                s_points.push((cl.value, cl.multiplicity));
            }
        }
        sort_points(&mut s_points);
        Ok(AlphaPointSet {
            alpha: *alpha,
            r,
            u_roots: clusters,
            s_points,
            n_zero,
        })
    }
}

fn self_log_abs(p: &Poly<Complex64>, s: Complex64) -> f64 {
    p.eval(&s).norm().ln()
}

fn sort_points(pts: &mut [(Complex64, usize)]) {
    pts.sort_by(|a, b| {
        a.0.norm_sqr()
            .partial_cmp(&b.0.norm_sqr())
            .unwrap()
            .then(a.0.im.partial_cmp(&b.0.im).unwrap())
            .then(a.0.re.partial_cmp(&b.0.re).unwrap())
    });
}

/// Quadrature control for the proximity integrals.
#[derive(Debug, Clone)]
pub struct QuadConfig {
    pub base_nodes: usize,
    pub max_nodes: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            base_nodes: 4096,
            max_nodes: 1 << 18,
            abs_tol: 1e-6,
            rel_tol: 1e-6,
        }
    }
}

/// Mean of g over the circle |s| = r by the periodic trapezoid rule with
/// node doubling; returns (mean, last doubling delta). Non-finite node
/// values are retried at deterministically jittered angles.
fn adaptive_circle_mean(
    g: &dyn Fn(Complex64) -> f64,
    r: f64,
    cfg: &QuadConfig,
) -> Result<(f64, f64), NevError> {
    let eval_node = |theta: f64| -> Result<f64, NevError> {
        const OFFSETS: [f64; 6] = [0.0, 1e-9, -1e-9, 1e-7, -1e-7, 1e-5];
        for off in OFFSETS {
            let s = Complex64::from_polar(r, theta + off);
            let v = g(s);
            if v.is_finite() {
                return Ok(v);
            }
        }
        Err(NevError::QuadratureUnstable { r })
    };
    let mut n = cfg.base_nodes.max(2);
    let step = 2.0 * PI / n as f64;
    let mut sum = 0.0;
    for k in 0..n {
        sum += eval_node(k as f64 * step)?;
    }
    let mut mean = sum / n as f64;
    while n < cfg.max_nodes {
        let step = 2.0 * PI / n as f64;
        let mut odd = 0.0;
        for k in 0..n {
            odd += eval_node((k as f64 + 0.5) * step)?;
        }
        let refined = (sum + odd) / (2 * n) as f64;
        let delta = (refined - mean).abs();
        sum += odd;
        n *= 2;
        mean = refined;
        if delta <= cfg.abs_tol.max(cfg.rel_tol * refined.abs()) {
            return Ok((mean, delta));
        }
    }
    Err(NevError::QuadratureUnstable { r })
}

/// Proximity function m(r, alpha): circle mean of log+ |1/(f - alpha)|
/// (of log+ |f| for alpha = inf). Returns (value, quadrature delta).
pub fn proximity_m(
    f: &dyn MeroFn,
    r: f64,
    alpha: &Alpha,
    cfg: &QuadConfig,
) -> Result<(f64, f64), NevError> {
    let integrand = f.proximity_integrand(alpha)?;
    adaptive_circle_mean(&*integrand, r, cfg)
}

/// Characteristic T(r) = m(r, inf) + N(r, inf) at a single radius.
pub fn characteristic_t(f: &dyn MeroFn, r: f64, cfg: &QuadConfig) -> Result<f64, NevError> {
    let poles = f.alpha_points(&Alpha::Infinity, r)?;
    let (m, _) = proximity_m(f, r, &Alpha::Infinity, cfg)?;
    Ok(m + poles.integrated_big_n(r))
}

#[derive(Debug, Clone)]
pub struct GrowthRow {
    pub r: f64,
    pub m_inf: f64,
    pub n_poles: usize,
    pub big_n_poles: f64,
    pub t: f64,
}

#[derive(Debug, Clone)]
pub struct GrowthTable {
    pub rows: Vec<GrowthRow>,
}

impl GrowthTable {
    pub fn grid(&self) -> Vec<f64> {
        self.rows.iter().map(|w| w.r).collect()
    }

    pub fn r_max(&self) -> f64 {
        self.rows.last().expect("nonempty table").r
    }

    fn top_decade(&self) -> Vec<&GrowthRow> {
        let lo = self.r_max() / 10.0 * (1.0 - 1e-12);
        self.rows.iter().filter(|w| w.r >= lo).collect()
    }
}

/// Geometric radius grid from r0 to r1 inclusive.
pub fn geometric_grid(r0: f64, r1: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && r0 > 0.0 && r1 > r0, "need n >= 2 and 0 < r0 < r1");
    let ratio = r1 / r0;
    (0..n)
        .map(|k| r0 * ratio.powf(k as f64 / (n - 1) as f64))
        .collect()
}

/// Push grid radii off the listed singular rings (relative window 1e-4).
pub fn nudge_grid(grid: &[f64], rings: &[f64]) -> Vec<f64> {
    grid.iter()
        .map(|&r0| {
            let mut r = r0;
            while rings.iter().any(|&p| (p - r).abs() < 1e-4 * r) {
                r *= 1.0005;
            }
            r
        })
        .collect()
}

/// Tabulates m(r, inf), pole counts, and T(r) over an increasing radius
/// grid. Radii are nudged off pole rings first; T is checked to be
/// nondecreasing up to quadrature slack.
pub fn tabulate(f: &dyn MeroFn, grid: &[f64], cfg: &QuadConfig) -> Result<GrowthTable, NevError> {
    assert!(!grid.is_empty(), "empty radius grid");
    assert!(
        grid.windows(2).all(|w| w[0] < w[1]) && grid[0] > 0.0,
        "grid must be positive and strictly increasing"
    );
    let rings = f.pole_radii(grid[grid.len() - 1] * 1.02)?;
    let radii = nudge_grid(grid, &rings);
    let poles = f.alpha_points(&Alpha::Infinity, *radii.last().unwrap())?;
    let mut rows = Vec::with_capacity(radii.len());
    for &r in &radii {
        let (m_inf, _) = proximity_m(f, r, &Alpha::Infinity, cfg)?;
        let big_n_poles = poles.integrated_big_n(r);
        rows.push(GrowthRow {
            r,
            m_inf,
            n_poles: poles.counting_n(r),
            big_n_poles,
            t: m_inf + big_n_poles,
        });
    }
    for w in rows.windows(2) {
        let slack = 2.0 * (cfg.abs_tol + cfg.rel_tol * w[0].t.abs()) + 1e-9;
        if w[1].t < w[0].t - slack {
            return Err(NevError::NonMonotoneT { r: w[1].r });
        }
    }
    Ok(GrowthTable { rows })
}

/// Least-squares slope of log T against log r over the top decade, plus the
/// minimum local slope there as a lower estimate. Requires a grid spanning
/// at least two decades.
pub fn estimate_order(table: &GrowthTable) -> Result<(f64, f64), NevError> {
    let rows = &table.rows;
    if rows.len() < 3 {
        return Err(NevError::InsufficientGrid(format!(
            "{} grid points",
            rows.len()
        )));
    }
    let span = rows[rows.len() - 1].r / rows[0].r;
    if span < 99.0 {
        return Err(NevError::InsufficientGrid(format!(
            "grid spans {:.2} decades, need at least 2",
            span.log10()
        )));
    }
    let pts: Vec<(f64, f64)> = table
        .top_decade()
        .into_iter()
        .filter(|w| w.t > 0.0)
        .map(|w| (w.r.ln(), w.t.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(NevError::InsufficientGrid(
            "fewer than 3 usable points in the top decade".into(),
        ));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let lower = pts
        .windows(2)
        .map(|p| (p[1].1 - p[0].1) / (p[1].0 - p[0].0))
        .fold(f64::INFINITY, f64::min);
    Ok((slope, lower))
}

/// Type estimate for an order-one function: median of T(r)/r over the top
/// decade of the grid.
pub fn estimate_type(table: &GrowthTable) -> f64 {
    let mut v: Vec<f64> = table.top_decade().iter().map(|w| w.t / w.r).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Claimed mean type g log q / pi (log q / pi in genus zero).
pub fn lambda_target(q: u64, g: u32) -> f64 {
    g.max(1) as f64 * (q as f64).ln() / PI
}

#[derive(Debug, Clone)]
pub struct AlphaRow {
    pub r: f64,
    pub n: usize,
    pub big_n: f64,
    pub m: f64,
}

#[derive(Debug, Clone)]
pub struct AlphaTable {
    pub alpha: Alpha,
    pub rows: Vec<AlphaRow>,
    /// 1 - max over the top decade of N(r, alpha)/T(r), clamped to [0, 1].
    pub delta_hat: f64,
    /// max over the top decade of |m + N - T|; bounded for a sound pipeline.
    pub fmt_residual: f64,
}

/// Per-alpha table of n, N, m on the radii of an existing growth table,
/// with the deficiency estimate. When the cleared numerator has roots, at
/// least 50 alpha-points must fall inside the largest radius for the limit
/// superior surrogate to mean anything.
pub fn alpha_table(
    f: &dyn MeroFn,
    table: &GrowthTable,
    alpha: &Alpha,
    cfg: &QuadConfig,
) -> Result<AlphaTable, NevError> {
    let r_max = table.r_max();
    let points = f.alpha_points(alpha, r_max)?;
    let have_lines = !points.u_roots.is_empty() || points.n_zero > 0;
    if have_lines && points.counting_n(r_max) < 50 {
        return Err(NevError::InsufficientGrid(format!(
            "only {} alpha-points inside r = {r_max} for alpha = {alpha}",
            points.counting_n(r_max)
        )));
    }
    let mut rows = Vec::with_capacity(table.rows.len());
    for grow in &table.rows {
        let m = match alpha {
            Alpha::Infinity => grow.m_inf,
            Alpha::Finite(_) => proximity_m(f, grow.r, alpha, cfg)?.0,
        };
        rows.push(AlphaRow {
            r: grow.r,
            n: points.counting_n(grow.r),
            big_n: points.integrated_big_n(grow.r),
            m,
        });
    }
    let lo = r_max / 10.0 * (1.0 - 1e-12);
    let mut ratio_max = 0.0f64;
    let mut fmt_residual = 0.0f64;
    for (row, grow) in rows.iter().zip(&table.rows) {
        if grow.r >= lo && grow.t > 0.0 {
            ratio_max = ratio_max.max(row.big_n / grow.t);
            fmt_residual = fmt_residual.max((row.m + row.big_n - grow.t).abs());
        }
    }
    Ok(AlphaTable {
        alpha: *alpha,
        rows,
        delta_hat: (1.0 - ratio_max).clamp(0.0, 1.0),
        fmt_residual,
    })
}

/// Deterministic probe set {0, 1, 2, i, inf}; the limit value of the zeta
/// at the ends of the lattice strip (1 as Re s -> +inf; 0 or inf on the
/// other end depending on the genus) is always one of these.
pub fn default_probes() -> Vec<Alpha> {
    vec![
        Alpha::finite(0.0, 0.0),
        Alpha::finite(1.0, 0.0),
        Alpha::finite(2.0, 0.0),
        Alpha::Finite(Complex64::new(0.0, 1.0)),
        Alpha::Infinity,
    ]
}

#[derive(Debug, Clone)]
pub struct NevanlinnaReport {
    pub description: String,
    pub q: u64,
    pub genus: u32,
    pub growth: GrowthTable,
    pub alpha_tables: Vec<AlphaTable>,
    pub rho_hat: f64,
    pub rho_lower: f64,
    pub lambda_hat: f64,
    pub lambda_target: f64,
    pub sum_delta: f64,
}

/// Full value-distribution analysis of a zeta function over the given
/// radius grid: growth table, per-probe alpha tables, and the order, type,
/// and deficiency estimates.
pub fn analyze(
    zf: &ZetaFunction,
    grid: &[f64],
    cfg: &QuadConfig,
) -> Result<NevanlinnaReport, NevError> {
    analyze_probes(zf, grid, &default_probes(), cfg)
}

/// Same analysis over a caller-chosen probe set.
pub fn analyze_probes(
    zf: &ZetaFunction,
    grid: &[f64],
    probes: &[Alpha],
    cfg: &QuadConfig,
) -> Result<NevanlinnaReport, NevError> {
    assert!(
        grid.first().is_some_and(|&r| r >= 1.0),
        "grid radii must be >= 1 so Jensen sums stay nonnegative"
    );
    let uf = zf.u_function();
    let table = tabulate(&uf, grid, cfg)?;
    let mut alpha_tables = Vec::new();
    for a in probes {
        alpha_tables.push(alpha_table(&uf, &table, a, cfg)?);
    }
    let (rho_hat, rho_lower) = estimate_order(&table)?;
    let lambda_hat = estimate_type(&table);
    let sum_delta = alpha_tables.iter().map(|t| t.delta_hat).sum();
    Ok(NevanlinnaReport {
        description: format!(
            "value distribution of the zeta function: q = {}, genus = {}",
            zf.q(),
            zf.g()
        ),
        q: zf.q(),
        genus: zf.g(),
        growth: table,
        alpha_tables,
        rho_hat,
        rho_lower,
        lambda_hat,
        lambda_target: lambda_target(zf.q(), zf.g()),
        sum_delta,
    })
}

/// T(r) by the coarse max rule for a quotient of entire functions:
/// max(m(r, numerator), m(r, denominator) + log(q - 1)). Agrees with the
/// direct characteristic up to an additive band that grows at most like
/// log r.
pub fn characteristic_heuristic(
    zf: &ZetaFunction,
    r: f64,
    cfg: &QuadConfig,
) -> Result<f64, NevError> {
    let q = zf.q();
    let ln_q = zf.log_q();
    let l = zf.l().poly().to_c64();
    let den = Poly::<Complex64>::from_integers(&[-1, 1 + q as i64, -(q as i64)]);
    let m_num = adaptive_circle_mean(&|s| stable_log_abs_u(&l, s, ln_q).max(0.0), r, cfg)?.0;
    let m_den = adaptive_circle_mean(&|s| stable_log_abs_u(&den, s, ln_q).max(0.0), r, cfg)?.0;
    Ok(m_num.max(m_den + ((q - 1) as f64).ln()))
}

/// Net winding of s -> f(s) - alpha around 0 along |s| = r, by summing
/// principal-branch argument increments over a uniform sampling. By the
/// argument principle this equals n(r, alpha) - n(r, inf) when no
/// alpha-point or pole sits on the circle.
pub fn winding_number(
    f: &dyn MeroFn,
    alpha: Complex64,
    r: f64,
    samples: usize,
) -> Result<i64, NevError> {
    assert!(samples >= 16, "winding sampling too coarse");
    let mut total = 0.0f64;
    let mut prev = f.eval_s(Complex64::new(r, 0.0)) - alpha;
    for k in 1..=samples {
        let theta = 2.0 * PI * k as f64 / samples as f64;
        let cur = f.eval_s(Complex64::from_polar(r, theta)) - alpha;
        total += (cur / prev).arg();
        prev = cur;
    }
    let turns = total / (2.0 * PI);
    let rounded = turns.round();
    if !turns.is_finite() || (turns - rounded).abs() > 0.1 {
        return Err(NevError::QuadratureUnstable { r });
    }
    Ok(rounded as i64)
}

#[derive(Debug, Clone)]
pub struct InequalityRow {
    pub name: String,
    pub observed: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Classical characteristic inequalities checked numerically for a pair of
/// lattice functions over the same base: subadditivity of T under sums
/// (with the log 2 term) and products, boundedness of the first-main
/// -theorem shift at alpha = 2, defect sums, and the product order bound.
pub fn inequality_suite(
    f: &UFunction,
    g: &UFunction,
    grid: &[f64],
    cfg: &QuadConfig,
) -> Result<Vec<InequalityRow>, NevError> {
    assert_eq!(f.q(), g.q(), "members must share the lattice base");
    let sum_fg = f.add(g);
    let prod_fg = f.mul(g);
    let two = CRat::new(BigRational::from_float(2.0).unwrap(), BigRational::zero());
    let recip = f.shifted_reciprocal(two);

    // a common grid clear of every pole ring involved, so characteristics
    // are compared at identical radii
    let r_probe = grid.last().unwrap() * 1.02;
    let members: [&dyn MeroFn; 5] = [f, g, &sum_fg, &prod_fg, &recip];
    let mut rings = Vec::new();
    for h in members {
        rings.extend(h.pole_radii(r_probe)?);
    }
    let mut grid = nudge_grid(grid, &rings);

    // Pole rings are known in advance, but a probe circle can still graze
    // a level-set crossing (f = alpha exactly on the circle), which the
    // quadrature reports as unstable. Every inequality here is a
    // per-radius fact, so a grazed radius is simply moved and the pass
    // rerun; eight repairs is far more than the discrete bad set needs.
    let mut repairs = 0;
    loop {
        match inequality_pass(f, g, &sum_fg, &prod_fg, &recip, &grid, cfg) {
            Err(NevError::QuadratureUnstable { r }) if repairs < 8 => {
                repairs += 1;
                shift_radius(&mut grid, r);
                grid = nudge_grid(&grid, &rings);
            }
            other => return other,
        }
    }
}

fn shift_radius(grid: &mut [f64], r: f64) {
    for x in grid.iter_mut() {
        if (*x - r).abs() <= 1e-9 * r.max(1.0) {
            *x *= 1.002;
        }
    }
}

fn inequality_pass(
    f: &UFunction,
    g: &UFunction,
    sum_fg: &UFunction,
    prod_fg: &UFunction,
    recip: &UFunction,
    grid: &[f64],
    cfg: &QuadConfig,
) -> Result<Vec<InequalityRow>, NevError> {
    const SLACK: f64 = 0.01;
    let tf = tabulate(f, grid, cfg)?;
    let tg = tabulate(g, grid, cfg)?;
    let t_sum = tabulate(sum_fg, grid, cfg)?;
    let t_prod = tabulate(prod_fg, grid, cfg)?;
    let t_recip = tabulate(recip, grid, cfg)?;

    let ln2 = 2f64.ln();
    let mut worst_sum = f64::NEG_INFINITY;
    let mut worst_prod = f64::NEG_INFINITY;
    let mut worst_fmt = 0.0f64;
    for i in 0..grid.len() {
        worst_sum = worst_sum.max(t_sum.rows[i].t - (tf.rows[i].t + tg.rows[i].t + ln2));
        worst_prod = worst_prod.max(t_prod.rows[i].t - (tf.rows[i].t + tg.rows[i].t));
        worst_fmt = worst_fmt.max((t_recip.rows[i].t - tf.rows[i].t).abs());
    }

    let mut out = vec![
        InequalityRow {
            name: "T(f+g) <= T(f) + T(g) + log 2".into(),
            observed: worst_sum,
            bound: SLACK,
            pass: worst_sum <= SLACK,
        },
        InequalityRow {
            name: "T(fg) <= T(f) + T(g)".into(),
            observed: worst_prod,
            bound: SLACK,
            pass: worst_prod <= SLACK,
        },
        InequalityRow {
            name: "|T(1/(f-2)) - T(f)| bounded".into(),
            observed: worst_fmt,
            bound: 10.0,
            pass: worst_fmt <= 10.0,
        },
    ];

    for (label, member, tab) in [("f", f, &tf), ("g", g, &tg)] {
        let mut sum_delta = 0.0;
        for a in default_probes() {
            sum_delta += alpha_table(member, tab, &a, cfg)?.delta_hat;
        }
        out.push(InequalityRow {
            name: format!("defect sum({label}) <= 2"),
            observed: sum_delta,
            bound: 2.1,
            pass: sum_delta <= 2.1,
        });
    }

    let (rho_f, _) = estimate_order(&tf)?;
    let (rho_g, _) = estimate_order(&tg)?;
    let (rho_p, _) = estimate_order(&t_prod)?;
    let bound = rho_f.max(rho_g) + 0.05;
    out.push(InequalityRow {
        name: "order(fg) <= max(order(f), order(g))".into(),
        observed: rho_p,
        bound,
        pass: rho_p <= bound,
    });
    Ok(out)
}
