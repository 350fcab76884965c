//! The zeta function of a curve over F_q, built exactly from point counts.
//!
//! The numerator L(u) is an integer polynomial of degree 2g recovered from
//! N_1..N_m by exponentiating the count series and clearing the two
//! universal poles: Z(u) = exp(sum N_n u^n / n) = L(u)/((1-u)(1-qu)). Only
//! c_0..c_g are taken from the series; the upper half is filled through the
//! symmetry c_j = c_{2g-j} q^{j-g} and the series orders g+1..m then act as
//! consistency checks on the input counts. Everything here is exact until a
//! value is actually evaluated at a complex point.
//!
//! In the s-plane the function is zeta(s) = Z(q^{-s}), periodic with period
//! 2 pi i / log q, with simple poles on the lattices Re s = 0 and Re s = 1.

use crate::curves::{CurveError, CurveSpec, PointCounts};
use crate::extrap::neville_to_zero;
use crate::polyrat::{roots, CRat, Poly, PolyError, RationalFn, RootCluster, RootConfig};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ZetaError {
    #[error("inconsistent point counts: {0}")]
    InconsistentCounts(String),
    #[error("evaluation at a pole: u within 1e-13 of {0}")]
    PoleHit(&'static str),
    #[error("class number must be a positive integer, got {0}")]
    NonPositiveH(BigInt),
    #[error(transparent)]
    Roots(#[from] PolyError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Exact numerator of the zeta function: integer coefficients c_0..c_{2g}
/// with c_0 = 1, c_{2g} = q^g and the symmetry c_j = c_{2g-j} q^{j-g}.
#[derive(Debug, Clone, PartialEq)]
pub struct LPolynomial {
    q: u64,
    g: u32,
    c: Vec<BigInt>,
}

/// Verdict of the critical-circle check on a numerator's roots.
#[derive(Debug, Clone)]
pub struct RhVerdict {
    pub verdict: bool,
    /// (root, multiplicity, | |root| sqrt(q) - 1 |) per cluster
    pub deviations: Vec<(Complex64, usize, f64)>,
    pub max_deviation: f64,
}

/// One log-derivative coefficient a_n with its classical bound 2g q^{n/2}.
#[derive(Debug, Clone)]
pub struct WeilCoefficient {
    pub n: u32,
    pub a: BigInt,
    pub bound: f64,
    /// |a_n| / (2g q^{n/2}); 0 for genus 0 where a_n = 0 identically
    pub margin: f64,
    /// the exact integer comparison a_n^2 <= 4 g^2 q^n
    pub within_bound: bool,
}

impl LPolynomial {
    /// Recover L from point counts in exact arithmetic.
    pub fn from_counts(pc: &PointCounts, g: u32) -> Result<Self, ZetaError> {
        let m = pc.counts.len();
        if m < g as usize {
            return Err(ZetaError::InconsistentCounts(format!(
                "genus {g} needs at least {g} counts, got {m}"
            )));
        }
        let q = BigRational::from_integer(BigInt::from(pc.q));
        // E_k: Taylor coefficients of exp(sum N_n u^n / n), via
        // E_k = (1/k) sum_{j=1..k} N_j E_{k-j}
        let mut e: Vec<BigRational> = vec![BigRational::one()];
        for k in 1..=m {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                acc += BigRational::from_integer(BigInt::from(pc.counts[j - 1])) * &e[k - j];
            }
            e.push(acc / BigRational::from_integer(BigInt::from(k as i64)));
        }
        // L series = E * (1-u)(1-qu) = E * (1 - (1+q)u + q u^2)
        let one_plus_q = BigRational::one() + &q;
        let lser = |k: usize| -> BigRational {
            let mut v = e[k].clone();
            if k >= 1 {
                v -= &one_plus_q * &e[k - 1];
            }
            if k >= 2 {
                v += &q * &e[k - 2];
            }
            v
        };
        let mut c: Vec<BigInt> = Vec::with_capacity(2 * g as usize + 1);
        for j in 0..=(g as usize).min(m) {
            let v = lser(j);
            if !v.is_integer() {
                return Err(ZetaError::InconsistentCounts(format!(
                    "coefficient c_{j} = {v} is not an integer"
                )));
            }
            c.push(v.to_integer());
        }
        // upper half by symmetry
        let qz = BigInt::from(pc.q);
        for j in (0..g as usize).rev() {
            let v = &c[j] * qz.pow(g - j as u32);
            c.push(v);
        }
        debug_assert_eq!(c.len(), 2 * g as usize + 1);
        let l = LPolynomial { q: pc.q, g, c };
        // consistency: the zeta series of the filled L must reproduce every
        // given count order
        let z = l.zeta_rational();
        let zser = z.series(m).expect("denominator is 1 at u = 0");
        for (k, (got, want)) in zser.iter().zip(e.iter()).enumerate() {
            if got != want {
                return Err(ZetaError::InconsistentCounts(format!(
                    "series order {k}: counts give {want}, genus-{g} symmetry forces {got}"
                )));
            }
        }
        Ok(l)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.c
    }

    pub fn poly(&self) -> Poly<BigRational> {
        Poly::new(
            self.c
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// L/( (1-u)(1-qu) ) as an exact rational function of u.
    pub fn zeta_rational(&self) -> RationalFn<BigRational> {
        let den = Poly::from_integers(&[1, -1])
            .mul(&Poly::new(vec![
                BigRational::one(),
                -BigRational::from_integer(BigInt::from(self.q)),
            ]));
        RationalFn::new(self.poly(), den)
    }

    /// h = L(1), the class number for a genuine curve.
    pub fn class_number(&self) -> Result<BigInt, ZetaError> {
        let h: BigInt = self.c.iter().sum();
        if h <= BigInt::zero() {
            return Err(ZetaError::NonPositiveH(h));
        }
        Ok(h)
    }

    /// Critical-circle check: true iff every root u of L satisfies
    /// | |u| sqrt(q) - 1 | <= tol. Genus 0 passes vacuously.
    pub fn check_rh(&self, tol: f64) -> Result<RhVerdict, ZetaError> {
        check_rh_poly(&self.poly().to_c64(), self.q, tol)
    }

    /// a_1..a_{n_max} from u L'/L = sum a_n u^n, with the bound
    /// |a_n| <= 2g q^{n/2} checked exactly as a_n^2 <= 4 g^2 q^n.
    pub fn weil_coefficients(&self, n_max: u32) -> Vec<WeilCoefficient> {
        let rf = RationalFn::from_poly(self.poly());
        let a = rf
            .log_derivative(n_max as usize)
            .expect("L(0) = 1 by construction");
        a.iter()
            .enumerate()
            .map(|(i, an)| {
                let n = (i + 1) as u32;
                debug_assert!(an.is_integer());
                let az = an.to_integer();
                let qn = BigInt::from(self.q).pow(n);
                let four_g2 = BigInt::from(4) * BigInt::from(self.g) * BigInt::from(self.g);
                let within = &az * &az <= &four_g2 * &qn;
                let bound = 2.0 * self.g as f64 * (self.q as f64).powf(n as f64 / 2.0);
                let abs = az.magnitude().to_f64().unwrap_or(f64::INFINITY);
                WeilCoefficient {
                    n,
                    a: az,
                    bound,
                    margin: if bound > 0.0 { abs / bound } else { 0.0 },
                    within_bound: within,
                }
            })
            .collect()
    }

    /// Counts this L predicts over F_{q^n}: N_n = q^n + 1 + a_n.
    pub fn predicted_counts(&self, m: u32) -> Vec<BigInt> {
        self.weil_coefficients(m)
            .into_iter()
            .map(|w| BigInt::from(self.q).pow(w.n) + 1 + w.a)
            .collect()
    }
}

/// Root check shared by exact numerators and perturbed members.
pub fn check_rh_poly(p: &Poly<Complex64>, q: u64, tol: f64) -> Result<RhVerdict, ZetaError> {
    let rs = roots(p, &RootConfig::default())?;
    let sq = (q as f64).sqrt();
    let mut deviations = Vec::new();
    let mut max_dev = 0.0f64;
    for r in rs {
        let dev = (r.value.norm() * sq - 1.0).abs();
        max_dev = max_dev.max(dev);
        deviations.push((r.value, r.multiplicity, dev));
    }
    Ok(RhVerdict {
        verdict: max_dev <= tol,
        deviations,
        max_deviation: max_dev,
    })
}

/// A zeta function zeta(s) = Z(q^{-s}) with exact rational-in-u core.
#[derive(Debug, Clone)]
pub struct ZetaFunction {
    l: LPolynomial,
    z: RationalFn<BigRational>,
}

/// Everything the verification pipeline knows about one zeta function.
#[derive(Debug, Clone)]
pub struct ZetaReport {
    pub q: u64,
    pub g: u32,
    pub l_coefficients: Vec<BigInt>,
    pub roots: Vec<RootCluster>,
    pub rh_verdict: bool,
    pub rh_max_deviation: f64,
    pub class_number: BigInt,
    pub residue_closed_form: f64,
    pub residue_numeric: f64,
    pub fe_residual: f64,
    pub weil: Vec<WeilCoefficient>,
}

impl ZetaFunction {
    pub fn new(l: LPolynomial) -> Self {
        let z = l.zeta_rational();
        ZetaFunction { l, z }
    }

    /// Count the curve over m extensions and build its zeta function.
    pub fn from_curve(c: &CurveSpec, m: usize) -> Result<Self, ZetaError> {
        let counts = c.count_series(m)?;
        Ok(ZetaFunction::new(LPolynomial::from_counts(
            &counts,
            c.genus(),
        )?))
    }

    pub fn l(&self) -> &LPolynomial {
        &self.l
    }

    pub fn q(&self) -> u64 {
        self.l.q
    }

    pub fn g(&self) -> u32 {
        self.l.g
    }

    pub fn z_rational(&self) -> &RationalFn<BigRational> {
        &self.z
    }

    pub fn log_q(&self) -> f64 {
        (self.l.q as f64).ln()
    }

    pub fn u_of_s(&self, s: Complex64) -> Complex64 {
        (-s * self.log_q()).exp()
    }

    /// Z at a u-point, guarding the two simple poles at 1e-13 relative.
    pub fn eval_u(&self, u: Complex64) -> Result<Complex64, ZetaError> {
        let qinv = 1.0 / self.l.q as f64;
        if (u - Complex64::new(1.0, 0.0)).norm() < 1e-13 {
            return Err(ZetaError::PoleHit("u = 1"));
        }
        if (u - Complex64::new(qinv, 0.0)).norm() < 1e-13 * qinv {
            return Err(ZetaError::PoleHit("u = 1/q"));
        }
        Ok(self.z.to_c64().eval(&u))
    }

    /// zeta(s) = Z(q^{-s}).
    pub fn eval(&self, s: Complex64) -> Result<Complex64, ZetaError> {
        self.eval_u(self.u_of_s(s))
    }

    /// Max over the samples of the normalized residuals of the reflection
    /// identity zeta(1-s) = q^{(g-1)(2s-1)} zeta(s) and of Schwarz reality
    /// conj(zeta(conj s)) = zeta(s).
    pub fn verify_functional_equation(&self, samples: &[Complex64]) -> Result<f64, ZetaError> {
        let g = self.l.g as f64;
        let lnq = self.log_q();
        let mut worst = 0.0f64;
        for &s in samples {
            let zs = self.eval(s)?;
            let z1s = self.eval(Complex64::new(1.0, 0.0) - s)?;
            let factor = ((g - 1.0) * (2.0 * s - Complex64::new(1.0, 0.0)) * lnq).exp();
            let scale = 1.0 + zs.norm();
            worst = worst.max((z1s - factor * zs).norm() / scale);
            let zbar = self.eval(s.conj())?;
            worst = worst.max((zbar.conj() - zs).norm() / scale);
        }
        Ok(worst)
    }

    /// Simple poles of zeta in the closed disk |s| <= r: the two vertical
    /// lattices Re s in {0, 1}, Im s = 2 pi j / log q.
    pub fn pole_lattice(&self, r: f64) -> Vec<Complex64> {
        pole_lattice(self.l.q, r)
    }

    /// Closed form q^{1-g} h / ((q-1) log q) for lim_{s->1} (s-1) zeta(s),
    /// next to a Neville-extrapolated numeric limit.
    pub fn residue_at_1(&self) -> Result<(f64, f64), ZetaError> {
        let h = self
            .l
            .class_number()?
            .to_f64()
            .expect("class numbers at desk scale fit in f64");
        let q = self.l.q as f64;
        let closed = q.powf(1.0 - self.l.g as f64) * h / ((q - 1.0) * q.ln());
        let ts = [1e-3, 1e-4, 1e-5, 1e-6];
        let mut vals = Vec::with_capacity(ts.len());
        for &t in &ts {
            let s = Complex64::new(1.0 + t, 0.0);
            vals.push((Complex64::new(t, 0.0) * self.eval(s)?).re);
        }
        let numeric = neville_to_zero(&ts, &vals);
        Ok((closed, numeric))
    }

    /// The full verification bundle.
    pub fn report(&self, rh_tol: f64, fe_seed: u64) -> Result<ZetaReport, ZetaError> {
        let rh = self.l.check_rh(rh_tol)?;
        let samples = fe_samples(self.l.q, fe_seed, 100);
        let fe_residual = self.verify_functional_equation(&samples)?;
        let (closed, numeric) = self.residue_at_1()?;
        let root_clusters = roots(&self.l.poly().to_c64(), &RootConfig::default())?;
        Ok(ZetaReport {
            q: self.l.q,
            g: self.l.g,
            l_coefficients: self.l.c.clone(),
            roots: root_clusters,
            rh_verdict: rh.verdict,
            rh_max_deviation: rh.max_deviation,
            class_number: self.l.class_number()?,
            residue_closed_form: closed,
            residue_numeric: numeric,
            fe_residual,
            weil: self.l.weil_coefficients(2 * self.l.g.max(1)),
        })
    }

    /// u-plane view for the value-distribution machinery.
    pub fn u_function(&self) -> UFunction {
        UFunction::new(self.l.q, to_crat(&self.z))
    }
}

/// Poles of any genuine zeta over F_q within |s| <= r, sorted by
/// (Re, Im): { 2 pi i j / log q } and { 1 + 2 pi i j / log q }.
pub fn pole_lattice(q: u64, r: f64) -> Vec<Complex64> {
    let lnq = (q as f64).ln();
    let spacing = 2.0 * std::f64::consts::PI / lnq;
    let mut out = Vec::new();
    for x in [0.0f64, 1.0] {
        if x > r {
            continue;
        }
        let half_chord = (r * r - x * x).max(0.0).sqrt();
        let j_max = (half_chord / spacing).floor() as i64;
        for j in -j_max..=j_max {
            let s = Complex64::new(x, j as f64 * spacing);
            if s.norm() <= r {
                out.push(s);
            }
        }
    }
    out.sort_by(|a, b| {
        (a.re, a.im)
            .partial_cmp(&(b.re, b.im))
            .expect("lattice points are finite")
    });
    out
}

/// Deterministic pole-avoiding sample points in the strip
/// -2 <= Re s <= 3, |Im s| <= 10, for functional-equation checks.
pub fn fe_samples(q: u64, seed: u64, count: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lnq = (q as f64).ln();
    let qinv = 1.0 / q as f64;
    let far_from_poles = |s: Complex64| {
        let u = (-s * lnq).exp();
        (u - Complex64::new(1.0, 0.0)).norm() > 1e-6
            && (u - Complex64::new(qinv, 0.0)).norm() > 1e-6 * qinv
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s = Complex64::new(rng.gen_range(-2.0..3.0), rng.gen_range(-10.0..10.0));
        if far_from_poles(s) && far_from_poles(Complex64::new(1.0, 0.0) - s) {
            out.push(s);
        }
    }
    out
}

/// A meromorphic function of s of the form F(q^{-s}) with F rational: the
/// view shared by genuine zetas and perturbed members. Carries both the
/// exact rational core (so symbolic cancellations like a u = 0 factor stay
/// exact) and a floating copy for evaluation.
#[derive(Debug, Clone)]
pub struct UFunction {
    q: u64,
    exact: RationalFn<CRat>,
    numeric: RationalFn<Complex64>,
}

impl UFunction {
    pub fn new(q: u64, exact: RationalFn<CRat>) -> Self {
        let numeric = exact.to_c64();
        UFunction { q, exact, numeric }
    }

    pub fn constant(q: u64, c: CRat) -> Self {
        UFunction::new(q, RationalFn::from_poly(Poly::constant(c)))
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn log_q(&self) -> f64 {
        (self.q as f64).ln()
    }

    pub fn exact(&self) -> &RationalFn<CRat> {
        &self.exact
    }

    pub fn rational(&self) -> &RationalFn<Complex64> {
        &self.numeric
    }

    pub fn u_of_s(&self, s: Complex64) -> Complex64 {
        (-s * self.log_q()).exp()
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.numeric.eval(&self.u_of_s(s))
    }

    fn combined(&self, other: &UFunction, rf: RationalFn<CRat>) -> UFunction {
        assert_eq!(
            self.q, other.q,
            "functions live over different base fields"
        );
        UFunction::new(self.q, rf)
    }

    pub fn add(&self, other: &UFunction) -> UFunction {
        self.combined(other, self.exact.add(&other.exact))
    }

    pub fn mul(&self, other: &UFunction) -> UFunction {
        self.combined(other, self.exact.mul(&other.exact))
    }

    /// 1 / (f - alpha), exact.
    pub fn shifted_reciprocal(&self, alpha: CRat) -> UFunction {
        let shifted = self
            .exact
            .sub(&RationalFn::from_poly(Poly::constant(alpha)));
        assert!(
            !shifted.num().is_zero(),
            "function is identically the shift value"
        );
        UFunction::new(
            self.q,
            RationalFn::new(shifted.den().clone(), shifted.num().clone()),
        )
    }
}

/// Exact complex-rational image of a real-rational function.
pub fn to_crat(rf: &RationalFn<BigRational>) -> RationalFn<CRat> {
    rf.map(|c| CRat::new(c.clone(), BigRational::zero()))
}
