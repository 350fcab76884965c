//! Dense univariate polynomials and rational functions in the variable `u`,
//! generic over a scalar that is either exact (arbitrary-precision rationals,
//! possibly with an exact imaginary part) or floating (complex doubles).
//!
//! Exact scalars keep every identity checkable with `==`: rational functions
//! are reduced by polynomial gcd and carry a monic denominator, so two
//! representations of the same function compare equal structurally. Floating
//! scalars skip reduction and are used for evaluation and root finding.
//!
//! Two operations here are the workhorses of everything downstream:
//!
//! * [`RationalFn::inversion_compose`], the substitution `u -> 1/(q u)` that
//!   implements the functional-equation symmetry of zeta numerators, and
//! * [`roots`], a simultaneous Aberth-Ehrlich iteration with Fujiwara-bound
//!   initial guesses and cluster-based multiplicity detection.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

/// Exact complex rationals: the scalar for computations that must certify
/// identities (functional equations, Schwarz symmetry, exact cancellation)
/// even when intermediate factors are complex.
pub type CRat = num_complex::Complex<BigRational>;

#[derive(Debug, Error, PartialEq)]
pub enum PolyError {
    /// The root iteration did not reach the requested residual.
    #[error("root iteration failed to converge within {0} iterations")]
    NonConvergence(usize),
    /// Series expansion (or log-derivative) requested at u = 0 where the
    /// function has a pole or, for log-derivatives, a zero.
    #[error("series undefined at u = 0: {0}")]
    PoleAtOrigin(&'static str),
    /// Polynomial division by the zero polynomial.
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Scalar abstraction shared by exact and floating coefficient types.
pub trait Coeff:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + std::fmt::Debug
{
    /// Whether arithmetic in this scalar is exact. Exact rational functions
    /// are gcd-reduced and denominator-normalized; floating ones are not.
    const EXACT: bool;
    fn from_integer(n: i64) -> Self;
    /// Complex conjugate; identity on real scalars.
    fn conj(&self) -> Self;
    /// Lossy conversion for numerical work.
    fn to_c64(&self) -> Complex64;
}

impl Coeff for BigRational {
    const EXACT: bool = true;
    fn from_integer(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Coeff for CRat {
    const EXACT: bool = true;
    fn from_integer(n: i64) -> Self {
        CRat::new(
            BigRational::from_integer(BigInt::from(n)),
            BigRational::zero(),
        )
    }
    fn conj(&self) -> Self {
        CRat::new(self.re.clone(), -self.im.clone())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Coeff for Complex64 {
    const EXACT: bool = false;
    fn from_integer(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

/// Dense polynomial, coefficients lowest degree first, canonical form with no
/// trailing zero coefficients (the zero polynomial has an empty vector).
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T: Coeff> {
    coeffs: Vec<T>,
}

impl<T: Coeff> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![T::one()],
        }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// c * u^k
    pub fn monomial(c: T, k: usize) -> Self {
        let mut v = vec![T::zero(); k];
        v.push(c);
        Poly::new(v)
    }

    pub fn from_integers(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| T::from_integer(c)).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| T::from_integer(k as i64) * c.clone())
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division: self = q * div + r with deg r < deg div.
    /// Coefficients must form a field.
    pub fn divrem(&self, div: &Self) -> Result<(Self, Self), PolyError> {
        if div.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let dd = div.degree().unwrap();
        let lc = div.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k].clone() / lc.clone();
            if !c.is_zero() {
                for j in 0..dd {
                    rem[k - dd + j] = rem[k - dd + j].clone() - c.clone() * div.coeffs[j].clone();
                }
            }
            rem[k] = T::zero();
            quot[k - dd] = c;
        }
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Monic gcd by the Euclidean algorithm; meaningful for exact scalars.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Divide by the leading coefficient (identity for the zero polynomial).
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => {
                let inv = T::one() / lc.clone();
                self.scale(&inv)
            }
        }
    }

    /// Coefficient-wise complex conjugation. Together with inversion
    /// composition this generates the symmetries of zeta numerators.
    pub fn conj_coeffs(&self) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(&f).collect())
    }

    pub fn to_c64(&self) -> Poly<Complex64> {
        self.map(|c| c.to_c64())
    }

    /// The numerator of p(1/(qu)), i.e. sum_j p_j q^{-j} u^{d-j} where
    /// d = deg p; the full substitution is this over u^d.
    pub fn inversion_numerator(&self, q: i64) -> Self {
        let d = match self.degree() {
            None => return Poly::zero(),
            Some(d) => d,
        };
        let qinv = T::one() / T::from_integer(q);
        let mut out = Vec::with_capacity(d + 1);
        for i in 0..=d {
            // coefficient of u^i is p_{d-i} q^{-(d-i)}
            let mut c = self.coeff(d - i);
            for _ in 0..(d - i) {
                c = c * qinv.clone();
            }
            out.push(c);
        }
        Poly::new(out)
    }
}

/// Quotient of two polynomials. Exact scalars keep the invariant
/// gcd(num, den) = 1 with monic den, so equality is structural.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFn<T: Coeff> {
    num: Poly<T>,
    den: Poly<T>,
}

impl<T: Coeff> RationalFn<T> {
    /// Panics if `den` is the zero polynomial (a programming error, not an
    /// input condition: every constructor in this crate supplies nonzero
    /// denominators).
    pub fn new(num: Poly<T>, den: Poly<T>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        let mut rf = RationalFn { num, den };
        rf.canonicalize();
        rf
    }

    pub fn from_poly(p: Poly<T>) -> Self {
        RationalFn {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn num(&self) -> &Poly<T> {
        &self.num
    }

    pub fn den(&self) -> &Poly<T> {
        &self.den
    }

    fn canonicalize(&mut self) {
        if !T::EXACT {
            return;
        }
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree().unwrap_or(0) > 0 {
            self.num = self.num.divrem(&g).unwrap().0;
            self.den = self.den.divrem(&g).unwrap().0;
        }
        let lc = self.den.leading().unwrap().clone();
        if !lc.is_one() {
            let inv = T::one() / lc;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// Unchecked evaluation; for floating scalars a denominator zero yields
    /// non-finite values, which callers screen for.
    pub fn eval(&self, x: &T) -> T {
        self.num.eval(x) / self.den.eval(x)
    }

    /// None when the denominator vanishes at x.
    pub fn eval_checked(&self, x: &T) -> Option<T> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        RationalFn::new(
            self.num
                .mul(&other.den)
                .add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        RationalFn::new(
            self.num
                .mul(&other.den)
                .sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFn::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.num.is_zero(), "division by the zero function");
        RationalFn::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn scale(&self, c: &T) -> Self {
        RationalFn::new(self.num.scale(c), self.den.clone())
    }

    /// Equality as functions (cross-multiplied); for exact scalars this is
    /// also structural equality thanks to canonicalization.
    pub fn functional_eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// The substitution u -> 1/(q u), exactly. Applying it twice gives back
    /// the original function.
    pub fn inversion_compose(&self, q: i64) -> Self {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let nrev = self.num.inversion_numerator(q);
        let drev = self.den.inversion_numerator(q);
        if dd >= dn {
            RationalFn::new(nrev.mul(&Poly::monomial(T::one(), dd - dn)), drev)
        } else {
            RationalFn::new(nrev, drev.mul(&Poly::monomial(T::one(), dn - dd)))
        }
    }

    /// Schwarz reflection: coefficient-wise conjugation, i.e. the function
    /// u -> conj(f(conj u)). Fixed points are exactly the functions real on
    /// the real axis.
    pub fn schwarz_conjugate(&self) -> Self {
        RationalFn::new(self.num.conj_coeffs(), self.den.conj_coeffs())
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> RationalFn<U> {
        RationalFn::new(self.num.map(&f), self.den.map(&f))
    }

    pub fn to_c64(&self) -> RationalFn<Complex64> {
        self.map(|c| c.to_c64())
    }

    /// Taylor coefficients of self at u = 0 through order m (inclusive),
    /// by series division. Errors if the denominator vanishes at 0.
    pub fn series(&self, m: usize) -> Result<Vec<T>, PolyError> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(PolyError::PoleAtOrigin("denominator vanishes"));
        }
        let mut s: Vec<T> = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let mut acc = self.num.coeff(k);
            for j in 1..=k.min(self.den.degree().unwrap_or(0)) {
                acc = acc - self.den.coeff(j) * s[k - j].clone();
            }
            s.push(acc / d0.clone());
        }
        Ok(s)
    }

    /// Coefficients a_1..a_m of u f'/f = sum_{n>=1} a_n u^n. Requires
    /// f(0) != 0 and finite.
    pub fn log_derivative(&self, m: usize) -> Result<Vec<T>, PolyError> {
        if self.num.coeff(0).is_zero() {
            return Err(PolyError::PoleAtOrigin(
                "log-derivative of a function vanishing at 0",
            ));
        }
        let s = self.series(m)?;
        let s0 = s[0].clone();
        // d_k with f'/f = sum d_k u^k, from (f')_k = sum_j d_j s_{k-j}
        let mut d: Vec<T> = Vec::with_capacity(m);
        for k in 0..m {
            let mut acc = T::from_integer((k + 1) as i64) * s[k + 1].clone();
            for (j, dj) in d.iter().enumerate().take(k) {
                acc = acc - dj.clone() * s[k - j].clone();
            }
            d.push(acc / s0.clone());
        }
        Ok(d)
    }
}

/// A root found by [`roots`], with the multiplicity of its cluster and the
/// relative backward error |p(z)| / sum_k |c_k| |z|^k.
#[derive(Debug, Clone)]
pub struct RootCluster {
    pub value: Complex64,
    pub multiplicity: usize,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct RootConfig {
    /// Residual acceptance threshold (relative backward error).
    pub tol: f64,
    /// Roots closer than this are merged into one cluster; defaults to
    /// 10 * tol when None.
    pub cluster_radius: Option<f64>,
    pub max_iterations: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            tol: 1e-12,
            cluster_radius: None,
            max_iterations: 200,
        }
    }
}

/// All complex roots of p with multiplicities, by simultaneous
/// Aberth-Ehrlich iteration started on a circle of Fujiwara-bound radius.
/// Exact zero coefficients at the bottom are factored out first, so roots at
/// the origin are reported exactly. Constant polynomials yield no roots.
pub fn roots(p: &Poly<Complex64>, cfg: &RootConfig) -> Result<Vec<RootCluster>, PolyError> {
    let mut cs: Vec<Complex64> = p.coeffs().to_vec();
    while cs.last().map_or(false, |c| c.norm() == 0.0) {
        cs.pop();
    }
    if cs.len() <= 1 {
        return Ok(vec![]);
    }
    let mut zero_mult = 0usize;
    while cs.first().map_or(false, |c| c.norm() == 0.0) {
        cs.remove(0);
        zero_mult += 1;
    }
    let mut out = Vec::new();
    if zero_mult > 0 {
        out.push(RootCluster {
            value: Complex64::new(0.0, 0.0),
            multiplicity: zero_mult,
            residual: 0.0,
        });
    }
    let n = cs.len() - 1;
    if n == 0 {
        return Ok(out);
    }
    // normalize to monic
    let lc = *cs.last().unwrap();
    for c in cs.iter_mut() {
        *c /= lc;
    }
    if n == 1 {
        let z = -cs[0];
        out.push(RootCluster {
            value: z,
            multiplicity: 1,
            residual: backward_error(&cs, z),
        });
        return Ok(out);
    }

    // Fujiwara bound: all roots lie within 2 max_k (b_k)^{1/k},
    // b_k = |a_{n-k}| for k < n and |a_0|/2 for k = n.
    let mut radius: f64 = 0.0;
    for k in 1..=n {
        let mut b = cs[n - k].norm();
        if k == n {
            b /= 2.0;
        }
        if b > 0.0 {
            radius = radius.max(b.powf(1.0 / k as f64));
        }
    }
    radius = 2.0 * radius.max(1e-3);

    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * j as f64 / n as f64 + 0.376;
            Complex64::from_polar(radius, th)
        })
        .collect();

    let mut calm = 0usize;
    for _ in 0..cfg.max_iterations {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (pv, dv) = horner_with_derivative(&cs, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let newton = if dv.norm() > 0.0 {
                pv / dv
            } else {
                // flat spot: nudge off it
                Complex64::new(1e-12, 1e-12)
            };
            let mut s = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let d = z[i] - zj;
                    if d.norm() > 0.0 {
                        s += d.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * s;
            let w = if denom.norm() > 1e-290 {
                newton / denom
            } else {
                newton
            };
            z[i] -= w;
            max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-14 {
            calm += 1;
            if calm >= 2 {
                break;
            }
        } else {
            calm = 0;
        }
    }

    // cluster by proximity (deterministic order), centroid per cluster
    let cluster_r = cfg.cluster_radius.unwrap_or(10.0 * cfg.tol);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        (z[a].re, z[a].im)
            .partial_cmp(&(z[b].re, z[b].im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut used = vec![false; n];
    let mut clusters: Vec<RootCluster> = Vec::new();
    for &i in &idx {
        if used[i] {
            continue;
        }
        let mut members = vec![i];
        used[i] = true;
        // grow transitively
        let mut grew = true;
        while grew {
            grew = false;
            for &j in &idx {
                if !used[j] && members.iter().any(|&k| (z[k] - z[j]).norm() <= cluster_r) {
                    members.push(j);
                    used[j] = true;
                    grew = true;
                }
            }
        }
        let centroid = members.iter().map(|&k| z[k]).sum::<Complex64>() / members.len() as f64;
        let mut value = centroid;
        // polish simple roots to the floating-point floor
        if members.len() == 1 {
            for _ in 0..3 {
                let (pv, dv) = horner_with_derivative(&cs, value);
                if dv.norm() == 0.0 {
                    break;
                }
                let step = pv / dv;
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                value -= step;
            }
        }
        clusters.push(RootCluster {
            value,
            multiplicity: members.len(),
            residual: backward_error(&cs, value),
        });
    }

    if clusters.iter().any(|c| !c.residual.is_finite() || c.residual > cfg.tol) {
        return Err(PolyError::NonConvergence(cfg.max_iterations));
    }
    out.extend(clusters);
    Ok(out)
}

fn horner_with_derivative(cs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for c in cs.iter().rev() {
        d = d * x + p;
        p = p * x + c;
    }
    (p, d)
}

fn backward_error(cs: &[Complex64], z: Complex64) -> f64 {
    let mut p = Complex64::new(0.0, 0.0);
    let mut scale = 0.0f64;
    let mut zp = 1.0f64;
    for c in cs.iter() {
        scale += c.norm() * zp;
        zp *= z.norm();
    }
    for c in cs.iter().rev() {
        p = p * z + c;
    }
    if scale == 0.0 {
        return 0.0;
    }
    p.norm() / scale
}
