//! Zeta-like rational members and the two constructive directions on them:
//! multipliers that plant zeros off the critical circle while keeping the
//! member uniformly close to the original on a prescribed annulus, and the
//! inverse operation that removes off-circle zero orbits exactly.
//!
//! A member is determined by its numerator-part h(u): a rational function
//! holomorphic away from u = 0, agreeing with the reference L-polynomial at
//! u = 1 and u = 1/q, satisfying the weight-g inversion equation
//! u^{-g} h(u) = (qu)^g h(1/(qu)), and fixed by coefficientwise conjugation.
//! All structural checks run in exact rational arithmetic.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::polyrat::{roots, CRat, Coeff, Poly, PolyError, RationalFn, RootCluster, RootConfig};
use crate::zeta::{check_rh_poly, RhVerdict, UFunction, ZetaError, ZetaFunction};

#[derive(Debug, Error)]
pub enum InstabilityError {
    #[error("multiplier seed is not normalized: {0}")]
    BadNormalization(String),
    #[error("off-circle zero set is not closed under its symmetries: {0}")]
    OrbitMismatch(String),
    #[error("off-circle zeros could not be removed exactly: {0}")]
    ResidualZeros(String),
    #[error(transparent)]
    Roots(#[from] PolyError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
}

fn cint(n: i64) -> CRat {
    <CRat as Coeff>::from_integer(n)
}

fn creal(r: BigRational) -> CRat {
    CRat::new(r, BigRational::zero())
}

fn crat_inv(c: &CRat) -> CRat {
    let n = c.norm_sqr();
    assert!(!n.is_zero(), "inverse of zero");
    CRat::new(&c.re / &n, -(&c.im / &n))
}

fn one_over(q: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(q))
}

/// u - z as an exact linear polynomial.
fn linear(z: CRat) -> Poly<CRat> {
    Poly::new(vec![-z, cint(1)])
}

/// A candidate element of the zeta-like class over F_q: the rational
/// numerator part h together with the base data it must reproduce.
#[derive(Debug, Clone)]
pub struct ZetaLikeMember {
    q: u64,
    g: u32,
    l: Poly<CRat>,
    h: RationalFn<CRat>,
}

impl ZetaLikeMember {
    /// The base zeta itself as a member (h = L).
    pub fn from_zeta(zf: &ZetaFunction) -> ZetaLikeMember {
        let l = zf
            .l()
            .poly()
            .map(|c| CRat::new(c.clone(), BigRational::zero()));
        ZetaLikeMember {
            q: zf.q(),
            g: zf.g(),
            l: l.clone(),
            h: RationalFn::from_poly(l),
        }
    }

    /// Same base data, different numerator part. No validation is applied;
    /// run `validate_membership` on the result.
    pub fn with_h(&self, h: RationalFn<CRat>) -> ZetaLikeMember {
        ZetaLikeMember {
            q: self.q,
            g: self.g,
            l: self.l.clone(),
            h,
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn reference_l(&self) -> &Poly<CRat> {
        &self.l
    }

    pub fn h(&self) -> &RationalFn<CRat> {
        &self.h
    }

    /// The full member function of u: h(u) / ((1 - u)(1 - qu)).
    pub fn f(&self) -> RationalFn<CRat> {
        let den = Poly::new(vec![cint(1), cint(-(1 + self.q as i64)), cint(self.q as i64)]);
        self.h.div(&RationalFn::from_poly(den))
    }

    /// The member as a lattice function of s for the value-distribution
    /// machinery.
    pub fn u_function(&self) -> UFunction {
        UFunction::new(self.q, self.f())
    }

    /// Root-location verdict on the numerator of h: true iff every root
    /// lies within tol of the circle |u| = q^{-1/2}.
    pub fn check_rh(&self, tol: f64) -> Result<RhVerdict, InstabilityError> {
        Ok(check_rh_poly(&self.h.num().to_c64(), self.q, tol)?)
    }
}

#[derive(Debug, Clone)]
pub struct MembershipCheck {
    pub name: &'static str,
    pub passed: bool,
    /// 0 for an exact pass; a measured magnitude when the check fails.
    pub residual: f64,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct MembershipReport {
    pub checks: Vec<MembershipCheck>,
    pub verdict: bool,
}

impl MembershipReport {
    pub fn check(&self, name: &str) -> Option<&MembershipCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn numeric_size(rf: &RationalFn<CRat>) -> f64 {
    // magnitude of a rational function that should be identically zero,
    // probed at a fixed generic point
    let probe = Complex64::new(0.61, 0.347);
    let c = rf.to_c64();
    let d = c.den().eval(&probe);
    if d.norm() == 0.0 {
        return f64::INFINITY;
    }
    (c.num().eval(&probe) / d).norm()
}

fn crat_dist(a: &CRat, b: &CRat) -> f64 {
    (a.clone() - b.clone()).to_c64().norm()
}

/// Evaluates the membership contract on a candidate: denominator supported
/// at u = 0 only, exact agreement with the reference at u = 1 and u = 1/q,
/// the weight-g inversion equation as an identity, coefficient reality, and
/// the induced equality of pole principal parts with the base zeta.
pub fn validate_membership(m: &ZetaLikeMember) -> MembershipReport {
    let mut checks = Vec::new();
    let q = m.q;
    let one = cint(1);
    let inv_q = creal(one_over(q));

    // (i) holomorphic on the punctured plane: den = u^k after reduction
    let den = m.h.den();
    let den_ok = den
        .coeffs()
        .iter()
        .enumerate()
        .all(|(j, c)| j + 1 == den.coeffs().len() || c.is_zero());
    checks.push(MembershipCheck {
        name: "holomorphic-on-punctured-plane",
        passed: den_ok,
        residual: if den_ok { 0.0 } else { 1.0 },
        detail: format!(
            "reduced denominator is u^{} with {} lower-order term(s)",
            den.degree().unwrap_or(0),
            den.coeffs().iter().filter(|c| !c.is_zero()).count() - 1
        ),
    });

    // (value pinning) h(1) = L(1), h(1/q) = L(1/q), both exact
    for (name, point) in [
        ("value-at-1", one.clone()),
        ("value-at-1-over-q", inv_q.clone()),
    ] {
        let want = m.l.eval(&point);
        match m.h.eval_checked(&point) {
            Some(got) => {
                let passed = got == want;
                checks.push(MembershipCheck {
                    name,
                    passed,
                    residual: if passed { 0.0 } else { crat_dist(&got, &want) },
                    detail: format!("reference value {}", want.to_c64()),
                });
            }
            None => checks.push(MembershipCheck {
                name,
                passed: false,
                residual: f64::INFINITY,
                detail: "denominator vanishes at the pinned point".into(),
            }),
        }
    }

    // (ii) u^{-g} h(u) = (qu)^g h(1/(qu)) as rational functions
    let g = m.g;
    let lhs = m
        .h
        .div(&RationalFn::from_poly(Poly::monomial(cint(1), g as usize)));
    let qg = (q as i64).pow(g);
    let rhs = m
        .h
        .inversion_compose(q as i64)
        .mul(&RationalFn::from_poly(Poly::monomial(cint(qg), g as usize)));
    let fe_diff = lhs.sub(&rhs);
    let fe_ok = fe_diff.num().is_zero();
    checks.push(MembershipCheck {
        name: "functional-equation",
        passed: fe_ok,
        residual: if fe_ok { 0.0 } else { numeric_size(&fe_diff) },
        detail: format!("weight {g} inversion identity"),
    });

    // (iii) Schwarz reality: conjugating coefficients fixes h
    let schwarz_diff = m.h.schwarz_conjugate().sub(&m.h);
    let schwarz_ok = schwarz_diff.num().is_zero();
    checks.push(MembershipCheck {
        name: "schwarz-reality",
        passed: schwarz_ok,
        residual: if schwarz_ok {
            0.0
        } else {
            numeric_size(&schwarz_diff)
        },
        detail: "coefficientwise conjugation".into(),
    });

    // consequence: f = h/((1-u)(1-qu)) keeps the simple poles of the base
    // zeta with the same principal parts; for the simple roots u = 1, 1/q
    // of the denominator D the residue is h(point)/D'(point)
    let mut pole_ok = true;
    let mut pole_residual = 0.0f64;
    for (point, dprime) in [
        (one.clone(), cint(q as i64 - 1)),
        (inv_q.clone(), cint(1 - q as i64)),
    ] {
        let res_base = m.l.eval(&point) * crat_inv(&dprime);
        match m.h.eval_checked(&point) {
            Some(hv) => {
                let res_member = hv * crat_inv(&dprime);
                if res_member != res_base {
                    pole_ok = false;
                    pole_residual = pole_residual.max(crat_dist(&res_member, &res_base));
                }
            }
            None => {
                pole_ok = false;
                pole_residual = f64::INFINITY;
            }
        }
    }
    checks.push(MembershipCheck {
        name: "pole-principal-parts",
        passed: pole_ok,
        residual: pole_residual,
        detail: "simple poles at u = 1 and u = 1/q with the base residues".into(),
    });

    let verdict = checks.iter().all(|c| c.passed);
    MembershipReport { checks, verdict }
}

/// How a multiplier was produced, kept for artifact provenance.
#[derive(Debug, Clone)]
pub enum MultiplierProvenance {
    Identity,
    /// ν built from a seed polynomial p normalized at u = 1, 1/q.
    Generator(Poly<CRat>),
    /// ν built as the reciprocal of the symmetrized orbit polynomial P.
    Removal(Poly<CRat>),
}

/// An inversion-invariant, Schwarz-real rational function with value 1 at
/// u = 1 and u = 1/q. Multiplying any member by one of these yields a
/// member again.
#[derive(Debug, Clone)]
pub struct MultiplierFn {
    nu: RationalFn<CRat>,
    provenance: MultiplierProvenance,
}

impl MultiplierFn {
    pub fn identity() -> MultiplierFn {
        MultiplierFn {
            nu: RationalFn::one(),
            provenance: MultiplierProvenance::Identity,
        }
    }

    pub fn nu(&self) -> &RationalFn<CRat> {
        &self.nu
    }

    pub fn provenance(&self) -> &MultiplierProvenance {
        &self.provenance
    }

    pub fn is_identity(&self) -> bool {
        self.nu.sub(&RationalFn::one()).num().is_zero()
    }

    pub fn apply(&self, m: &ZetaLikeMember) -> ZetaLikeMember {
        m.with_h(m.h().mul(&self.nu))
    }
}

fn assert_multiplier_invariants(nu: &RationalFn<CRat>, q: u64) {
    assert!(
        nu.inversion_compose(q as i64).sub(nu).num().is_zero(),
        "multiplier is not inversion-invariant"
    );
    assert!(
        nu.schwarz_conjugate().sub(nu).num().is_zero(),
        "multiplier is not Schwarz-real"
    );
    let one = cint(1);
    assert!(
        nu.eval_checked(&one) == Some(one.clone()),
        "multiplier is not 1 at u = 1"
    );
    assert!(
        nu.eval_checked(&creal(one_over(q))) == Some(one),
        "multiplier is not 1 at u = 1/q"
    );
}

/// Builds ν = p(u) · p(1/(qu)) · p*(u) · p*(1/(qu)) from a seed polynomial
/// with p(1) = p(1/q) = 1. The factor set is closed under inversion and
/// conjugation, so all multiplier invariants hold by construction; they are
/// re-verified symbolically anyway.
pub fn make_multiplier(p: &Poly<CRat>, q: u64) -> Result<MultiplierFn, InstabilityError> {
    let one = cint(1);
    let at_one = p.eval(&one);
    if at_one != one {
        return Err(InstabilityError::BadNormalization(format!(
            "p(1) = {}, expected 1",
            at_one.to_c64()
        )));
    }
    let at_inv = p.eval(&creal(one_over(q)));
    if at_inv != one {
        return Err(InstabilityError::BadNormalization(format!(
            "p(1/q) = {}, expected 1",
            at_inv.to_c64()
        )));
    }
    let rp = RationalFn::from_poly(p.clone());
    let rp_star = RationalFn::from_poly(p.conj_coeffs());
    let nu = rp
        .mul(&rp.inversion_compose(q as i64))
        .mul(&rp_star)
        .mul(&rp_star.inversion_compose(q as i64));
    assert_multiplier_invariants(&nu, q);
    Ok(MultiplierFn {
        nu,
        provenance: MultiplierProvenance::Generator(p.clone()),
    })
}

/// The one-parameter seed family 1 - (u - 1)(u - 1/q)/((u0 - 1)(u0 - 1/q)):
/// value 1 at u = 1 and u = 1/q exactly, a zero planted at u = u0, and
/// uniformly close to 1 on compact sets once u0 is large.
pub fn p_delta(q: u64, u0: u64) -> Poly<CRat> {
    assert!(u0 >= 2, "planted zero must be off the normalization points");
    let u0r = BigRational::from_integer(BigInt::from(u0));
    let iq = one_over(q);
    let c0 = (&u0r - BigRational::one()) * (&u0r - &iq);
    // 1 - (u^2 - (1 + 1/q)u + 1/q)/c0
    let coeffs = vec![
        creal(BigRational::one() - &iq / &c0),
        creal((BigRational::one() + &iq) / &c0),
        creal(-(BigRational::one() / &c0)),
    ];
    Poly::new(coeffs)
}

/// Multiplier planting the zero orbit {u0, 1/(q u0)} (doubled by reality).
pub fn multiplier_for_u0(q: u64, u0: u64) -> MultiplierFn {
    make_multiplier(&p_delta(q, u0), q).expect("p_delta is normalized by construction")
}

/// Perturbation request: stay within epsilon of the member on the annulus
/// 1/(q r) <= |u| <= r. The annulus must contain the critical circle with
/// room to spare, so r > q is required.
#[derive(Debug, Clone, Copy)]
pub struct PerturbationSpec {
    pub r: f64,
    pub epsilon: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct LadderRung {
    pub u0: u64,
    pub sup_deviation: f64,
}

/// Result of the failure-direction construction, with enough provenance to
/// re-check every claim offline.
#[derive(Debug, Clone)]
pub struct Perturbation {
    pub member: ZetaLikeMember,
    pub multiplier: MultiplierFn,
    pub u0: u64,
    pub boundary_deviation: f64,
    pub ladder: Vec<LadderRung>,
}

pub const BOUNDARY_SAMPLES: usize = 512;

fn boundary_points(q: u64, r: f64) -> Vec<Complex64> {
    let inner = 1.0 / (q as f64 * r);
    let half = BOUNDARY_SAMPLES / 2;
    let mut pts = Vec::with_capacity(BOUNDARY_SAMPLES);
    for k in 0..half {
        let theta = 2.0 * PI * k as f64 / half as f64;
        pts.push(Complex64::from_polar(r, theta));
        pts.push(Complex64::from_polar(inner, theta));
    }
    pts
}

/// Measured sup of |f_perturbed - f| over the sampled boundary circles of
/// the annulus, for the multiplier with planted zero u0.
pub fn boundary_deviation(base: &ZetaLikeMember, r: f64, u0: u64) -> f64 {
    let mult = multiplier_for_u0(base.q(), u0);
    let base_f = base.f().to_c64();
    let pert_f = mult.apply(base).f().to_c64();
    boundary_points(base.q(), r)
        .iter()
        .map(|u| (pert_f.eval(u) - base_f.eval(u)).norm())
        .fold(0.0, f64::max)
}

/// Failure direction: multiplies the member by ν built from p_delta,
/// doubling the planted zero u0 until the boundary deviation drops under
/// epsilon. The deviation difference is holomorphic on the punctured plane
/// (the seed is 1 at both poles of f), so control on the two boundary
/// circles controls the whole annulus by the maximum principle. The search
/// terminates because the deviation decays like u0^{-2}.
pub fn perturb_fail_rh(base: &ZetaLikeMember, spec: &PerturbationSpec) -> Perturbation {
    let q = base.q();
    assert!(
        spec.r > q as f64,
        "annulus outer radius must exceed q = {q}"
    );
    assert!(spec.epsilon > 0.0, "epsilon must be positive");

    let start = (2.0 * spec.r + 2.0).log2().ceil() as u32;
    let mut u0: u64 = 1u64 << start;
    let samples = boundary_points(q, spec.r);
    let base_f = base.f().to_c64();
    let mut ladder = Vec::new();
    loop {
        let mult = multiplier_for_u0(q, u0);
        let member = mult.apply(base);
        let pert_f = member.f().to_c64();
        let sup = samples
            .iter()
            .map(|u| (pert_f.eval(u) - base_f.eval(u)).norm())
            .fold(0.0, f64::max);
        ladder.push(LadderRung {
            u0,
            sup_deviation: sup,
        });
        if sup < spec.epsilon {
            return Perturbation {
                member,
                multiplier: mult,
                u0,
                boundary_deviation: sup,
                ladder,
            };
        }
        u0 = u0.checked_mul(2).expect("planted zero search overflowed");
    }
}

/// Best rational approximation of x among continued-fraction convergents,
/// accepted once within abs_tol; denominators are capped.
fn rationalize(x: f64, abs_tol: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut k0) = (BigInt::one(), BigInt::zero());
    let mut a = x.floor();
    let (mut h1, mut k1) = (BigInt::from(a as i64), BigInt::one());
    let mut frac = x - a;
    for _ in 0..64 {
        let num = h1.to_f64()?;
        let den = k1.to_f64()?;
        if (num / den - x).abs() <= abs_tol {
            return Some(BigRational::new(h1, k1));
        }
        if k1 > BigInt::from(max_den) || frac.abs() < 1e-15 {
            return None;
        }
        let next = 1.0 / frac;
        a = next.floor();
        frac = next - a;
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        h0 = h1;
        k0 = k1;
        h1 = h2;
        k1 = k2;
    }
    None
}

#[derive(Debug, Clone)]
struct ZeroGroup {
    value: Complex64,
    mult: usize,
}

fn group_window(z: Complex64) -> f64 {
    1e-6 * (1.0 + z.norm())
}

/// Merges root clusters that are numerically the same point; the root
/// finder reports a multiplicity-m root as m nearby simple roots whose
/// centroid recovers the true location to far better accuracy than any
/// single one of them.
fn group_clusters(clusters: &[RootCluster]) -> Vec<ZeroGroup> {
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    for cl in clusters {
        let mut merged = false;
        for (sum, mult) in groups.iter_mut() {
            let centroid = *sum / *mult as f64;
            if (centroid - cl.value).norm() <= group_window(cl.value) {
                *sum += cl.value * cl.multiplicity as f64;
                *mult += cl.multiplicity;
                merged = true;
                break;
            }
        }
        if !merged {
            groups.push((cl.value * cl.multiplicity as f64, cl.multiplicity));
        }
    }
    groups
        .into_iter()
        .map(|(sum, mult)| ZeroGroup {
            value: sum / mult as f64,
            mult,
        })
        .collect()
}

fn find_group(groups: &[ZeroGroup], target: Complex64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, g) in groups.iter().enumerate() {
        let d = (g.value - target).norm();
        if d <= group_window(target) && best.map_or(true, |(_, bd)| d < bd) {
            best = Some((i, d));
        }
    }
    best.map(|(i, _)| i)
}

/// Result of the restoration direction.
#[derive(Debug, Clone)]
pub struct Removal {
    pub member: ZetaLikeMember,
    pub multiplier: MultiplierFn,
    /// detected off-circle zeros (value, multiplicity), before removal
    pub removed: Vec<(Complex64, usize)>,
    /// the positive normalization scalar c with ν = c / (P·P∘inv·P*·P*∘inv)
    pub normalization: CRat,
}

/// Restoration direction: finds the numerator zeros off the critical
/// circle, checks they form orbits closed under conjugation and the
/// inversion u -> 1/(qu), reconstructs the orbit polynomial P with exact
/// coefficients, and divides the symmetrized product out of the member.
/// The cancellation is verified by exact polynomial division; anything
/// short of an exact result is an error, never a silent approximation.
pub fn remove_offcircle_zeros(
    m: &ZetaLikeMember,
    tol: f64,
) -> Result<Removal, InstabilityError> {
    let q = m.q();
    let sqrt_q = (q as f64).sqrt();
    let num = m.h().num().to_c64();
    let clusters = if num.degree().unwrap_or(0) >= 1 {
        roots(&num, &RootConfig::default())?
    } else {
        Vec::new()
    };
    for cl in &clusters {
        if cl.residual > tol {
            return Err(InstabilityError::ResidualZeros(format!(
                "root near {} carries residual {:.3e} above the requested tolerance {tol:.3e}",
                cl.value, cl.residual
            )));
        }
    }

    let off: Vec<RootCluster> = clusters
        .iter()
        .filter(|cl| (cl.value.norm() * sqrt_q - 1.0).abs() > 10.0 * tol)
        .cloned()
        .collect();
    if off.is_empty() {
        return Ok(Removal {
            member: m.clone(),
            multiplier: MultiplierFn::identity(),
            removed: Vec::new(),
            normalization: cint(1),
        });
    }

    let groups = group_clusters(&off);
    for grp in &groups {
        if grp.value.norm() < 1e-9 {
            return Err(InstabilityError::OrbitMismatch(format!(
                "zero at the origin (|z| = {:.3e}) has no inversion partner",
                grp.value.norm()
            )));
        }
    }

    // walk orbits from the outside in; the inversion partner of an outside
    // representative lies inside the critical circle
    let mut order: Vec<usize> = (0..groups.len()).collect();
    order.sort_by(|&a, &b| {
        groups[b]
            .value
            .norm()
            .partial_cmp(&groups[a].value.norm())
            .unwrap()
    });
    let mut used = vec![false; groups.len()];
    let mut p_poly = Poly::new(vec![cint(1)]);
    let mut removed = Vec::new();
    let real_window = |z: Complex64| 1e-9 * (1.0 + z.norm());

    for &i in &order {
        if used[i] {
            continue;
        }
        used[i] = true;
        let z = groups[i].value;
        let mu = groups[i].mult;
        let inv_image = 1.0 / (q as f64 * z);
        if z.im.abs() <= real_window(z) {
            let j = find_group(&groups, Complex64::new(inv_image.re, 0.0)).ok_or_else(|| {
                InstabilityError::OrbitMismatch(format!(
                    "real zero {} of multiplicity {mu} lacks its inversion partner near {}",
                    z.re, inv_image.re
                ))
            })?;
            if used[j] || groups[j].mult != mu {
                return Err(InstabilityError::OrbitMismatch(format!(
                    "real zero pair {} <-> {} has mismatched multiplicities {} vs {}",
                    z.re, groups[j].value.re, mu, groups[j].mult
                )));
            }
            used[j] = true;
            if mu % 2 != 0 {
                return Err(InstabilityError::ResidualZeros(format!(
                    "real zero pair {} <-> {} has odd multiplicity {mu}; the symmetrized \
                     denominator removes real pairs in even orders only",
                    z.re, groups[j].value.re
                )));
            }
            let exact = rationalize(z.re, group_window(z), 1 << 30).ok_or_else(|| {
                InstabilityError::ResidualZeros(format!(
                    "no exact rational location identified for the zero near {}",
                    z.re
                ))
            })?;
            p_poly = p_poly.mul(&linear(creal(exact)).pow(mu / 2));
            removed.push((z, mu));
            removed.push((groups[j].value, mu));
        } else {
            let conj_i = find_group(&groups, z.conj());
            let inv_i = find_group(&groups, inv_image);
            let inv_conj_i = find_group(&groups, inv_image.conj());
            let (cj, iv, ic) = match (conj_i, inv_i, inv_conj_i) {
                (Some(a), Some(b), Some(c)) => (a, b, c),
                _ => {
                    return Err(InstabilityError::OrbitMismatch(format!(
                        "complex zero {} of multiplicity {mu} lacks a conjugation or \
                         inversion partner",
                        z
                    )))
                }
            };
            let quad = [cj, iv, ic];
            if cj == iv || cj == ic || iv == ic || quad.contains(&i) {
                return Err(InstabilityError::OrbitMismatch(format!(
                    "zero orbit of {} collapses onto itself; the point sits too close \
                     to the critical circle to resolve",
                    z
                )));
            }
            if quad.iter().any(|&k| used[k] || groups[k].mult != mu) {
                return Err(InstabilityError::OrbitMismatch(format!(
                    "complex zero orbit of {} is not multiplicity-balanced",
                    z
                )));
            }
            for &k in &quad {
                used[k] = true;
            }
            let rep = if z.im > 0.0 { z } else { z.conj() };
            let re = rationalize(rep.re, group_window(rep), 1 << 30);
            let im = rationalize(rep.im, group_window(rep), 1 << 30);
            let (re, im) = match (re, im) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(InstabilityError::ResidualZeros(format!(
                        "no exact rational location identified for the zero near {rep}"
                    )))
                }
            };
            p_poly = p_poly.mul(&linear(CRat::new(re, im)).pow(mu));
            removed.push((z, mu));
            for &k in &quad {
                removed.push((groups[k].value, mu));
            }
        }
    }

    // ν = c / (P(u) P(1/(qu)) P*(u) P*(1/(qu))), normalized at u = 1
    let rp = RationalFn::from_poly(p_poly.clone());
    let rp_star = RationalFn::from_poly(p_poly.conj_coeffs());
    let symmetrized = rp
        .mul(&rp.inversion_compose(q as i64))
        .mul(&rp_star)
        .mul(&rp_star.inversion_compose(q as i64));
    let c = symmetrized
        .eval_checked(&cint(1))
        .expect("symmetrized orbit polynomial finite at u = 1");
    assert!(
        c.im.is_zero() && c.re.is_positive(),
        "normalization scalar must be real and positive"
    );
    let nu = RationalFn::from_poly(Poly::constant(c.clone())).div(&symmetrized);
    assert_multiplier_invariants(&nu, q);
    let multiplier = MultiplierFn {
        nu,
        provenance: MultiplierProvenance::Removal(p_poly),
    };

    // independent cancellation witness: the cleared symmetrized product
    // must divide the numerator exactly
    let (_, remainder) = m.h().num().divrem(symmetrized.num())?;
    if !remainder.is_zero() {
        return Err(InstabilityError::ResidualZeros(
            "reconstructed orbit polynomial does not divide the numerator exactly".into(),
        ));
    }

    let member = multiplier.apply(m);
    let report = validate_membership(&member);
    assert!(
        report.verdict,
        "removal multiplier failed to preserve membership"
    );
    let rh = member.check_rh(10.0 * tol)?;
    if !rh.verdict {
        return Err(InstabilityError::ResidualZeros(format!(
            "a root with circle deviation {:.3e} survived removal",
            rh.max_deviation
        )));
    }
    Ok(Removal {
        member,
        multiplier,
        removed,
        normalization: c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::CurveSpec;
    use crate::gf::FiniteField;
    use crate::nevanlinna::{estimate_order, geometric_grid, tabulate, QuadConfig};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn elliptic_zeta() -> ZetaFunction {
        let k = FiniteField::new(5, 1).unwrap();
        let c = CurveSpec::elliptic(k.clone(), k.scalar(1), k.scalar(1)).unwrap();
        ZetaFunction::from_curve(&c, 2).unwrap()
    }

    fn genus2_zeta() -> ZetaFunction {
        let f7 = FiniteField::new(7, 1).unwrap();
        let f: Vec<_> = [1, 3, 0, 0, 0, 1].iter().map(|&c| f7.scalar(c)).collect();
        let c = CurveSpec::hyperelliptic(f7, f).unwrap();
        ZetaFunction::from_curve(&c, 4).unwrap()
    }

    fn line_zeta(p: u64) -> ZetaFunction {
        let line = CurveSpec::projective_line(FiniteField::new(p, 1).unwrap());
        ZetaFunction::from_curve(&line, 1).unwrap()
    }

    fn elliptic_member() -> ZetaLikeMember {
        ZetaLikeMember::from_zeta(&elliptic_zeta())
    }

    /// Inversion-invariant real atom with zero pair {a, 1/(qa)}, value 1 at
    /// u = 1 (and so at u = 1/q).
    fn real_pair_atom(q: u64, a: i64) -> RationalFn<CRat> {
        let inv = creal(BigRational::new(BigInt::one(), BigInt::from(q) * BigInt::from(a)));
        let num = linear(cint(a)).mul(&linear(inv));
        let rf = RationalFn::new(num, Poly::monomial(cint(1), 1));
        let at_one = rf.eval_checked(&cint(1)).unwrap();
        rf.scale(&crat_inv(&at_one))
    }

    /// Inversion-invariant real atom with the complex zero quadruple
    /// {z, conj z, 1/(qz), 1/(q conj z)}, value 1 at u = 1.
    fn quadruple_atom(q: u64, z: CRat) -> RationalFn<CRat> {
        let inv_z = crat_inv(&(z.clone() * cint(q as i64)));
        let pair = linear(z).mul(&linear(inv_z));
        let num = pair.mul(&pair.conj_coeffs());
        let rf = RationalFn::new(num, Poly::monomial(cint(1), 2));
        let at_one = rf.eval_checked(&cint(1)).unwrap();
        rf.scale(&crat_inv(&at_one))
    }

    #[test]
    fn base_zetas_are_members() {
        for zf in [elliptic_zeta(), genus2_zeta(), line_zeta(2)] {
            let m = ZetaLikeMember::from_zeta(&zf);
            let report = validate_membership(&m);
            assert!(report.verdict, "q = {}: {:?}", zf.q(), report.checks);
            for c in &report.checks {
                assert!(c.passed && c.residual == 0.0, "{}: {}", c.name, c.detail);
            }
            assert!(m.check_rh(1e-9).unwrap().verdict);
        }
    }

    #[test]
    fn extra_u_factor_breaks_the_weight() {
        let m = elliptic_member();
        let bad = m.with_h(m.h().mul(&RationalFn::from_poly(Poly::monomial(cint(1), 1))));
        let report = validate_membership(&bad);
        assert!(!report.verdict);
        assert!(!report.check("functional-equation").unwrap().passed);
        assert!(report.check("holomorphic-on-punctured-plane").unwrap().passed);
    }

    #[test]
    fn imaginary_bump_breaks_reality_only() {
        // adding (i/1000)(u-1)(u-1/q) keeps the pinned values and, in
        // weight 1, even the inversion identity; only reality fails
        let m = elliptic_member();
        let bump = Poly::new(vec![
            CRat::new(BigRational::zero(), BigRational::new(BigInt::one(), BigInt::from(5000))),
            CRat::new(
                BigRational::zero(),
                BigRational::new(BigInt::from(-6), BigInt::from(5000)),
            ),
            CRat::new(BigRational::zero(), BigRational::new(BigInt::from(5), BigInt::from(5000))),
        ]);
        // bump = (i/1000)(u-1)(u-1/5) = (i/5000)(5u^2 - 6u + 1)
        let bad = m.with_h(m.h().add(&RationalFn::from_poly(bump)));
        let report = validate_membership(&bad);
        assert!(!report.verdict);
        assert!(!report.check("schwarz-reality").unwrap().passed);
        assert!(report.check("functional-equation").unwrap().passed);
        assert!(report.check("value-at-1").unwrap().passed);
        assert!(report.check("value-at-1-over-q").unwrap().passed);
    }

    #[test]
    fn identity_multiplier_from_unit_seed() {
        let mult = make_multiplier(&Poly::new(vec![cint(1)]), 5).unwrap();
        assert!(mult.is_identity());
        let m = elliptic_member();
        let out = mult.apply(&m);
        assert!(out.h().sub(m.h()).num().is_zero());
    }

    #[test]
    fn planted_orbit_multiplier_values() {
        let mult = make_multiplier(&p_delta(5, 10), 5).unwrap();
        let one = cint(1);
        assert_eq!(mult.nu().eval_checked(&one), Some(one.clone()));
        assert_eq!(
            mult.nu().eval_checked(&creal(one_over(5))),
            Some(one.clone())
        );
        assert_eq!(mult.nu().eval_checked(&cint(10)), Some(CRat::zero()));
        let inner = creal(BigRational::new(BigInt::one(), BigInt::from(50)));
        assert_eq!(mult.nu().eval_checked(&inner), Some(CRat::zero()));
    }

    #[test]
    fn unnormalized_seeds_are_rejected() {
        let err = make_multiplier(&Poly::new(vec![cint(2)]), 5).unwrap_err();
        assert!(matches!(err, InstabilityError::BadNormalization(_)));
        // p(1) = 1 but p(1/5) != 1
        let p = Poly::new(vec![cint(0), cint(1)]);
        let err = make_multiplier(&p, 5).unwrap_err();
        assert!(matches!(err, InstabilityError::BadNormalization(_)));
    }

    #[test]
    fn multiplier_closure_randomized() {
        // seeds of the form 1 + (u-1)(u-1/q) w(u) are normalized for free;
        // closure of the class under such multipliers is checked exactly
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let bases = [elliptic_member(), ZetaLikeMember::from_zeta(&genus2_zeta())];
        for round in 0..6 {
            let base = &bases[round % 2];
            let q = base.q();
            let w = Poly::new(
                (0..=rng.gen_range(0..3))
                    .map(|_| {
                        CRat::new(
                            BigRational::new(
                                BigInt::from(rng.gen_range(-9i64..=9)),
                                BigInt::from(rng.gen_range(1i64..=9)),
                            ),
                            BigRational::zero(),
                        )
                    })
                    .collect(),
            );
            // (u-1)(u-1/q) = u^2 - (1+1/q)u + 1/q
            let vanishing = Poly::new(vec![
                creal(one_over(q)),
                creal(-(BigRational::one() + one_over(q))),
                cint(1),
            ]);
            let p = Poly::new(vec![cint(1)]).add(&vanishing.mul(&w));
            let mult = make_multiplier(&p, q).unwrap();
            let out = mult.apply(base);
            let report = validate_membership(&out);
            assert!(report.verdict, "round {round}: {:?}", report.checks);
        }
    }

    #[test]
    fn canonical_perturbation_run() {
        let base = elliptic_member();
        let spec = PerturbationSpec {
            r: 10.0,
            epsilon: 1e-3,
        };
        let pert = perturb_fail_rh(&base, &spec);
        assert_eq!(pert.u0, 512, "doubling search landed on {}", pert.u0);
        assert!(pert.boundary_deviation < 1e-3);
        assert!(validate_membership(&pert.member).verdict);

        let rh = pert.member.check_rh(1e-9).unwrap();
        assert!(!rh.verdict);
        // worst deviation is the planted outer zero at u0
        let expected = 512.0 * 5f64.sqrt() - 1.0;
        assert!((rh.max_deviation - expected).abs() / expected < 1e-6);

        // a numerator root lands on the planted orbit {u0, 1/(q u0)}; the
        // outer double zero splits to square-root precision, the inner one
        // is the point that meets a tight absolute gate
        let clusters = roots(&pert.member.h().num().to_c64(), &RootConfig::default()).unwrap();
        let inner = 1.0 / (5.0 * 512.0);
        let closest = clusters
            .iter()
            .map(|c| {
                (c.value - Complex64::new(512.0, 0.0))
                    .norm()
                    .min((c.value - Complex64::new(inner, 0.0)).norm())
            })
            .fold(f64::INFINITY, f64::min);
        assert!(closest <= 1e-8, "closest root distance {closest:.3e}");

        // each doubling of u0 cut the boundary deviation at least in half
        assert!(pert.ladder.len() >= 5);
        for pair in pert.ladder.windows(2) {
            assert!(pair[1].sup_deviation * 2.0 <= pair[0].sup_deviation);
        }
    }

    #[test]
    fn fixed_u0_breaks_rh_and_stacking_keeps_it_broken() {
        let base = elliptic_member();
        let once = multiplier_for_u0(5, 10).apply(&base);
        assert!(validate_membership(&once).verdict);
        assert!(!once.check_rh(1e-9).unwrap().verdict);
        // planting further zeros cannot restore the root locations
        let twice = multiplier_for_u0(5, 20).apply(&once);
        assert!(validate_membership(&twice).verdict);
        assert!(!twice.check_rh(1e-9).unwrap().verdict);
        let n_once = once.h().num().degree().unwrap();
        let n_twice = twice.h().num().degree().unwrap();
        assert!(n_twice > n_once);
    }

    #[test]
    fn removal_round_trip_is_exact() {
        let base = elliptic_member();
        let pert = perturb_fail_rh(
            &base,
            &PerturbationSpec {
                r: 10.0,
                epsilon: 1e-3,
            },
        );
        let removal = remove_offcircle_zeros(&pert.member, 1e-9).unwrap();
        assert!(validate_membership(&removal.member).verdict);
        assert!(removal.member.check_rh(1e-9).unwrap().verdict);
        // the detected orbit: 4 real points, total multiplicity 8
        assert_eq!(removal.removed.len(), 4);
        assert_eq!(removal.removed.iter().map(|(_, m)| m).sum::<usize>(), 8);
        assert!(removal.normalization.im.is_zero());
        assert!(removal.normalization.re.is_positive());
        // the round trip recovers the base numerator exactly, so the values
        // agree everywhere, in particular at u = -1
        assert!(removal.member.h().sub(base.h()).num().is_zero());
        assert_eq!(
            removal.member.h().eval_checked(&cint(-1)),
            base.h().eval_checked(&cint(-1))
        );
    }

    #[test]
    fn removal_is_identity_on_the_base() {
        let removal = remove_offcircle_zeros(&elliptic_member(), 1e-9).unwrap();
        assert!(removal.multiplier.is_identity());
        assert!(removal.removed.is_empty());
        assert!(removal.member.h().sub(elliptic_member().h()).num().is_zero());
    }

    #[test]
    fn unpaired_zero_is_an_orbit_mismatch() {
        let m = elliptic_member();
        let bad = m.with_h(m.h().mul(&RationalFn::from_poly(linear(cint(3)))));
        let err = remove_offcircle_zeros(&bad, 1e-9).unwrap_err();
        assert!(matches!(err, InstabilityError::OrbitMismatch(_)));
    }

    #[test]
    fn odd_real_pair_is_unremovable() {
        // a genuine member whose off-circle pair {3, 1/15} has multiplicity
        // one; the symmetrized denominator can only cancel even orders
        let m = elliptic_member();
        let atom = real_pair_atom(5, 3);
        let candidate = m.with_h(m.h().mul(&atom));
        assert!(validate_membership(&candidate).verdict);
        let err = remove_offcircle_zeros(&candidate, 1e-9).unwrap_err();
        assert!(matches!(err, InstabilityError::ResidualZeros(_)));
    }

    #[test]
    fn complex_quadruple_removes_exactly() {
        let m = elliptic_member();
        let z = CRat::new(BigRational::from_integer(BigInt::from(2)), BigRational::one());
        let atom = quadruple_atom(5, z);
        let candidate = m.with_h(m.h().mul(&atom));
        assert!(validate_membership(&candidate).verdict);
        assert!(!candidate.check_rh(1e-9).unwrap().verdict);
        let removal = remove_offcircle_zeros(&candidate, 1e-9).unwrap();
        assert!(removal.member.check_rh(1e-9).unwrap().verdict);
        assert_eq!(removal.removed.len(), 4);
        assert!(removal.member.h().sub(m.h()).num().is_zero());
    }

    #[test]
    fn rouche_disk_traps_the_planted_zero() {
        let base = elliptic_member();
        let pert = perturb_fail_rh(
            &base,
            &PerturbationSpec {
                r: 10.0,
                epsilon: 1e-3,
            },
        );
        let f_minus = pert.member.f().to_c64();
        let center = Complex64::new(pert.u0 as f64, 0.0);
        let circle: Vec<Complex64> = (0..256)
            .map(|k| center + Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 256.0))
            .collect();
        let d = circle
            .iter()
            .map(|u| f_minus.eval(u).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(d > 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(0x70c4e);
        for _ in 0..3 {
            let den = rng.gen_range(300_000_000i64..=999_999_999);
            let t = BigRational::new(BigInt::one(), BigInt::from(den));
            let seed = Poly::new(vec![cint(1)]).add(
                &Poly::new(vec![
                    creal(one_over(5)),
                    creal(-(BigRational::one() + one_over(5))),
                    cint(1),
                ])
                .mul(&Poly::constant(creal(-t))),
            );
            let mult = make_multiplier(&seed, 5).unwrap();
            let nearby = mult.apply(&pert.member);
            let g = nearby.f().to_c64();
            // Rouché hypothesis, verified numerically on the circle
            let sup = circle
                .iter()
                .map(|u| (g.eval(u) - f_minus.eval(u)).norm())
                .fold(0.0, f64::max);
            assert!(
                sup < d / 2.0,
                "perturbation too large for the Rouché setup: {sup:.3e} vs d/2 = {:.3e}",
                d / 2.0
            );
            // conclusion: the nearby member keeps zeros inside the disk
            let clusters = roots(&nearby.h().num().to_c64(), &RootConfig::default()).unwrap();
            let inside: usize = clusters
                .iter()
                .filter(|c| (c.value - center).norm() < 1.0)
                .map(|c| c.multiplicity)
                .sum();
            assert_eq!(inside, 2);
        }
    }

    #[test]
    fn zero_multiset_has_the_double_symmetry() {
        // conjugation and inversion invariance of the numerator zero set,
        // measured as a relative distance to the predicted partner
        let m = elliptic_member();
        let quad = m.with_h(m.h().mul(&quadruple_atom(
            5,
            CRat::new(BigRational::from_integer(BigInt::from(2)), BigRational::one()),
        )));
        let odd = m.with_h(m.h().mul(&real_pair_atom(5, 3)));
        for (member, tol) in [(&m, 1e-9), (&quad, 1e-9), (&odd, 1e-9)] {
            assert!(
                zero_symmetry_residual(member) <= tol,
                "symmetry residual {} above {tol}",
                zero_symmetry_residual(member)
            );
        }
        // the perturbed member carries double zeros, which a root finder
        // only locates to square-root precision; grouped centroids recover
        // the symmetry well below the gate used here
        let pert = perturb_fail_rh(
            &m,
            &PerturbationSpec {
                r: 10.0,
                epsilon: 1e-3,
            },
        );
        assert!(zero_symmetry_residual(&pert.member) <= 1e-6);
    }

    fn zero_symmetry_residual(member: &ZetaLikeMember) -> f64 {
        let clusters = roots(&member.h().num().to_c64(), &RootConfig::default()).unwrap();
        let groups = group_clusters(&clusters);
        let mut worst = 0.0f64;
        for grp in &groups {
            for target in [grp.value.conj(), 1.0 / (member.q() as f64 * grp.value)] {
                let best = groups
                    .iter()
                    .map(|o| (o.value - target).norm())
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(best / (1.0 + target.norm()));
            }
        }
        worst
    }

    #[test]
    fn perturbed_member_keeps_order_one() {
        let pert = perturb_fail_rh(
            &elliptic_member(),
            &PerturbationSpec {
                r: 10.0,
                epsilon: 1e-3,
            },
        );
        // the multiplier subtracts a constant ~2 ln c0 from T, which biases
        // the log-log slope high at moderate radii; push the top decade out
        // far enough for the linear term to dominate
        let uf = pert.member.u_function();
        let table = tabulate(&uf, &geometric_grid(10.0, 3000.0, 15), &QuadConfig::default())
            .unwrap();
        let (rho, _) = estimate_order(&table).unwrap();
        assert!((rho - 1.0).abs() <= 0.02, "order estimate {rho}");
    }
}
