//! Finite fields F_{p^r} with a canonical choice of defining modulus, dense
//! element enumeration, square-root lookup tables for point counting, and
//! compatible embeddings into extension fields.
//!
//! The modulus for F_{p^r} is the lexicographically smallest monic
//! irreducible of degree r over F_p, where candidates are ordered by the
//! integer encoding sum_i c_i p^i of their non-leading coefficients. This
//! makes every field object, element index, and downstream point count
//! reproducible across runs. Degree 1 uses the modulus x, so prime fields
//! are the constants.
//!
//! Elements are coefficient vectors in the power basis 1, a, ..., a^{r-1}
//! of the class a of x. The index of an element is sum_i c_i p^i, giving a
//! bijection with 0..q that the enumeration and the sqrt table key on.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};
use thiserror::Error;

/// Elements-per-field ceiling for operations that enumerate a whole field
/// (sqrt tables, point counts). Enumerating beyond this is a sign the caller
/// picked an infeasible parameter, not a slow path worth waiting on.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;

#[derive(Debug, Error, PartialEq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {q} exceeds the enumeration cap {cap}")]
    CapExceeded { q: u64, cap: u64 },
    #[error("field size p^r overflows")]
    SizeOverflow,
    #[error("zero has no multiplicative inverse")]
    NoInverse,
    #[error("degree must be positive")]
    ZeroDegree,
}

#[derive(Debug)]
struct FieldRepr {
    p: u64,
    r: u32,
    q: u64,
    /// Monic irreducible of degree r over F_p, lowest coefficient first,
    /// length r + 1.
    modulus: Vec<u64>,
    cap: u64,
    /// index of y^2 -> indices of its square roots (one or two).
    sqrt: OnceLock<HashMap<u64, (u64, Option<u64>)>>,
}

/// A finite field F_{p^r}. Cheap to clone (shared representation); two
/// fields compare equal when they have the same characteristic and modulus.
#[derive(Debug, Clone)]
pub struct FiniteField {
    repr: Arc<FieldRepr>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.repr, &other.repr)
            || (self.repr.p == other.repr.p && self.repr.modulus == other.repr.modulus)
    }
}
impl Eq for FiniteField {}

/// An element of a [`FiniteField`], carrying its field so that mixed-field
/// arithmetic is caught immediately (it panics: using elements of different
/// fields together is a programming error, not an input condition).
#[derive(Debug, Clone)]
pub struct FieldElement {
    field: FiniteField,
    c: Vec<u64>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.c == other.c
    }
}
impl Eq for FieldElement {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |dd| dd <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

// dense F_p[x] helpers on trimmed, lowest-first Vec<u64> with entries < p

fn ptrim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn pmulmod_scalar(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn sinv(a: u64, p: u64) -> u64 {
    // Fermat: a^{p-2} mod p
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = pmulmod_scalar(acc, base, p);
        }
        base = pmulmod_scalar(base, base, p);
        e >>= 1;
    }
    acc
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + pmulmod_scalar(x, y, p)) % p;
        }
    }
    ptrim(out)
}

fn psub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for k in 0..n {
        let x = a.get(k).copied().unwrap_or(0);
        let y = b.get(k).copied().unwrap_or(0);
        out[k] = (x + p - y) % p;
    }
    ptrim(out)
}

/// Remainder of a modulo the monic-after-normalization polynomial f.
fn pmod(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut rem: Vec<u64> = a.to_vec();
    let df = f.len() - 1;
    let lead_inv = sinv(f[df], p);
    while rem.len() > df {
        let k = rem.len() - 1;
        let c = pmulmod_scalar(rem[k], lead_inv, p);
        if c != 0 {
            for j in 0..df {
                let t = pmulmod_scalar(c, f[j], p);
                rem[k - df + j] = (rem[k - df + j] + p - t) % p;
            }
        }
        rem.pop();
        rem = ptrim(rem);
    }
    rem
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = ptrim(a.to_vec());
    let mut y = ptrim(b.to_vec());
    while !y.is_empty() {
        let r = pmod(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lc) = x.last() {
        let inv = sinv(lc, p);
        for c in x.iter_mut() {
            *c = pmulmod_scalar(*c, inv, p);
        }
    }
    x
}

/// x^e mod f by square and multiply.
fn pmodexp_x(e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut base = pmod(&[0, 1], f, p);
    let mut acc = vec![1u64];
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = pmod(&pmul(&acc, &base, p), f, p);
        }
        base = pmod(&pmul(&base, &base, p), f, p);
        e >>= 1;
    }
    acc
}

/// Rabin test: f of degree r is irreducible over F_p iff x^{p^r} = x mod f
/// and gcd(x^{p^{r/l}} - x, f) = 1 for every prime l dividing r.
fn is_irreducible(f: &[u64], p: u64, r: u32) -> bool {
    let x = vec![0u64, 1];
    let pr = match p.checked_pow(r) {
        Some(v) => v,
        None => return false,
    };
    let xq = pmodexp_x(pr, f, p);
    if psub(&xq, &pmod(&x, f, p), p) != Vec::<u64>::new() {
        return false;
    }
    let mut rr = r;
    let mut ell = 2u32;
    let mut prime_divs = Vec::new();
    while rr > 1 {
        if rr % ell == 0 {
            prime_divs.push(ell);
            while rr % ell == 0 {
                rr /= ell;
            }
        }
        ell += 1;
    }
    for ell in prime_divs {
        let e = p.pow(r / ell);
        let xe = pmodexp_x(e, f, p);
        let diff = psub(&xe, &pmod(&x, f, p), p);
        let g = pgcd(&diff, f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

impl FiniteField {
    /// F_{p^r} with the canonical modulus and the default enumeration cap.
    pub fn new(p: u64, r: u32) -> Result<Self, GfError> {
        Self::with_cap(p, r, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(p: u64, r: u32, cap: u64) -> Result<Self, GfError> {
        if r == 0 {
            return Err(GfError::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        let q = p.checked_pow(r).ok_or(GfError::SizeOverflow)?;
        if q > cap {
            return Err(GfError::CapExceeded { q, cap });
        }
        let modulus = if r == 1 {
            vec![0, 1] // the polynomial x
        } else {
            // smallest non-leading-coefficient encoding that is irreducible
            let mut found = None;
            'search: for code in 0..q {
                let mut f = Vec::with_capacity(r as usize + 1);
                let mut c = code;
                for _ in 0..r {
                    f.push(c % p);
                    c /= p;
                }
                f.push(1);
                if is_irreducible(&f, p, r) {
                    found = Some(f);
                    break 'search;
                }
            }
            found.expect("an irreducible polynomial of every degree exists")
        };
        Ok(FiniteField {
            repr: Arc::new(FieldRepr {
                p,
                r,
                q,
                modulus,
                cap,
                sqrt: OnceLock::new(),
            }),
        })
    }

    pub fn p(&self) -> u64 {
        self.repr.p
    }

    pub fn r(&self) -> u32 {
        self.repr.r
    }

    pub fn q(&self) -> u64 {
        self.repr.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.repr.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            c: vec![0; self.repr.r as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_index(1.min(self.repr.q - 1))
    }

    /// The class of x in F_p[x]/(modulus); zero in a prime field.
    pub fn alpha(&self) -> FieldElement {
        let mut c = vec![0u64; self.repr.r as usize];
        if self.repr.r > 1 {
            c[1] = 1;
        }
        FieldElement {
            field: self.clone(),
            c,
        }
    }

    /// Element from integer coefficients (any sign) in the power basis;
    /// entries beyond degree r are reduced modulo the field modulus.
    pub fn element(&self, coeffs: &[i64]) -> FieldElement {
        let p = self.repr.p as i64;
        let raw: Vec<u64> = coeffs.iter().map(|&c| (c.rem_euclid(p)) as u64).collect();
        let reduced = pmod(&ptrim(raw), &self.repr.modulus, self.repr.p);
        self.from_vec(reduced)
    }

    /// Constant element from an integer.
    pub fn scalar(&self, n: i64) -> FieldElement {
        self.element(&[n])
    }

    fn from_vec(&self, mut c: Vec<u64>) -> FieldElement {
        c.resize(self.repr.r as usize, 0);
        FieldElement {
            field: self.clone(),
            c,
        }
    }

    /// Element with the given index in the enumeration 0..q.
    pub fn from_index(&self, idx: u64) -> FieldElement {
        assert!(idx < self.repr.q, "index out of range");
        let p = self.repr.p;
        let mut c = Vec::with_capacity(self.repr.r as usize);
        let mut n = idx;
        for _ in 0..self.repr.r {
            c.push(n % p);
            n /= p;
        }
        FieldElement {
            field: self.clone(),
            c,
        }
    }

    /// All q elements in index order. Always enumerable: the constructor
    /// enforces the cap, so a constructed field is desk-sized by invariant.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.repr.q).map(move |i| self.from_index(i))
    }

    fn sqrt_table(&self) -> &HashMap<u64, (u64, Option<u64>)> {
        self.repr.sqrt.get_or_init(|| {
            let mut table: HashMap<u64, (u64, Option<u64>)> = HashMap::new();
            for i in 0..self.repr.q {
                let x = self.from_index(i);
                let s = (&x * &x).index();
                table
                    .entry(s)
                    .and_modify(|e| {
                        if e.0 != i && e.1.is_none() {
                            e.1 = Some(i);
                        }
                    })
                    .or_insert((i, None));
            }
            table
        })
    }

    /// The square roots of a (zero, one, or two elements, ascending index).
    pub fn square_roots(&self, a: &FieldElement) -> Vec<FieldElement> {
        assert!(a.field == *self, "element from a different field");
        match self.sqrt_table().get(&a.index()) {
            None => vec![],
            Some(&(x, None)) => vec![self.from_index(x)],
            Some(&(x, Some(y))) => vec![self.from_index(x), self.from_index(y)],
        }
    }

    /// Number of solutions y of y^2 = a.
    pub fn sqrt_count(&self, a: &FieldElement) -> usize {
        assert!(a.field == *self, "element from a different field");
        match self.sqrt_table().get(&a.index()) {
            None => 0,
            Some(&(_, None)) => 1,
            Some(&(_, Some(_))) => 2,
        }
    }

    /// The extension F_{p^{rn}} together with the embedding of this field
    /// into it, determined by sending the power-basis generator to the
    /// first root (in index order) of this field's modulus there.
    pub fn extend(&self, n: u32) -> Result<(FiniteField, Embedding), GfError> {
        if n == 0 {
            return Err(GfError::ZeroDegree);
        }
        let big = FiniteField::with_cap(self.repr.p, self.repr.r * n, self.repr.cap)?;
        let beta = if self.repr.r == 1 {
            big.zero()
        } else {
            let mut found = None;
            for i in 0..big.q() {
                let x = big.from_index(i);
                if self.eval_modulus_in(&x).is_zero() {
                    found = Some(x);
                    break;
                }
            }
            found.expect("the modulus splits in every extension of its degree")
        };
        Ok((
            big.clone(),
            Embedding {
                base: self.clone(),
                target: big,
                beta,
            },
        ))
    }

    /// Evaluate this field's modulus at an element of another field with
    /// the same characteristic.
    fn eval_modulus_in(&self, x: &FieldElement) -> FieldElement {
        let target = &x.field;
        debug_assert_eq!(target.p(), self.p());
        let mut acc = target.zero();
        for &c in self.repr.modulus.iter().rev() {
            acc = &(&acc * x) + &target.scalar(c as i64);
        }
        acc
    }
}

/// Ring embedding of a base field into one of its extensions, fixing F_p and
/// sending the base power-basis generator to a chosen root of the base
/// modulus.
#[derive(Debug, Clone)]
pub struct Embedding {
    base: FiniteField,
    target: FiniteField,
    beta: FieldElement,
}

impl Embedding {
    pub fn base(&self) -> &FiniteField {
        &self.base
    }

    pub fn target(&self) -> &FiniteField {
        &self.target
    }

    pub fn apply(&self, a: &FieldElement) -> FieldElement {
        assert!(a.field == self.base, "element not from the base field");
        let mut acc = self.target.zero();
        for &c in a.c.iter().rev() {
            acc = &(&acc * &self.beta) + &self.target.scalar(c as i64);
        }
        acc
    }
}

impl FieldElement {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&c| c == 0)
    }

    /// Position in the canonical enumeration: sum_i c_i p^i.
    pub fn index(&self) -> u64 {
        let p = self.field.repr.p;
        self.c.iter().rev().fold(0u64, |acc, &c| acc * p + c)
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The Frobenius x -> x^p, a field automorphism fixing F_p.
    pub fn frobenius(&self) -> FieldElement {
        self.pow(self.field.repr.p)
    }

    pub fn inv(&self) -> Result<FieldElement, GfError> {
        if self.is_zero() {
            return Err(GfError::NoInverse);
        }
        let p = self.field.repr.p;
        let f = &self.field.repr.modulus;
        // extended Euclid in F_p[x]: s*a + t*f = g (constant)
        let mut r0 = ptrim(self.c.clone());
        let mut r1 = f.clone();
        let mut s0 = vec![1u64];
        let mut s1: Vec<u64> = vec![];
        while !r1.is_empty() {
            // r0 = q*r1 + r
            let (q, r) = pdivrem(&r0, &r1, p);
            let s = psub(&s0, &pmul(&q, &s1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        debug_assert_eq!(r0.len(), 1, "modulus is irreducible");
        let ginv = sinv(r0[0], p);
        let mut s = s0;
        for c in s.iter_mut() {
            *c = pmulmod_scalar(*c, ginv, p);
        }
        Ok(self.field.from_vec(pmod(&s, f, p)))
    }
}

fn pdivrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (vec![], a.to_vec());
    }
    let lead_inv = sinv(b[db], p);
    let mut rem = a.to_vec();
    let mut quo = vec![0u64; a.len() - db];
    for k in (db..a.len()).rev() {
        let c = pmulmod_scalar(rem[k], lead_inv, p);
        if c != 0 {
            for j in 0..=db {
                let t = pmulmod_scalar(c, b[j], p);
                rem[k - db + j] = (rem[k - db + j] + p - t) % p;
            }
        }
        quo[k - db] = c;
    }
    (ptrim(quo), ptrim(rem))
}

impl std::ops::Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, other: &FieldElement) -> FieldElement {
        assert!(self.field == other.field, "elements of different fields");
        let p = self.field.repr.p;
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        FieldElement {
            field: self.field.clone(),
            c,
        }
    }
}

impl std::ops::Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, other: &FieldElement) -> FieldElement {
        assert!(self.field == other.field, "elements of different fields");
        let p = self.field.repr.p;
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(&a, &b)| (a + p - b) % p)
            .collect();
        FieldElement {
            field: self.field.clone(),
            c,
        }
    }
}

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        &self.field.zero() - self
    }
}

impl std::ops::Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, other: &FieldElement) -> FieldElement {
        assert!(self.field == other.field, "elements of different fields");
        let p = self.field.repr.p;
        let prod = pmul(&ptrim(self.c.clone()), &ptrim(other.c.clone()), p);
        let red = pmod(&prod, &self.field.repr.modulus, p);
        self.field.from_vec(red)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.c.iter().enumerate() {
            if c == 0 {
                continue;
            }
            terms.push(match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}a"),
                (i, 1) => format!("a^{i}"),
                (i, c) => format!("{c}a^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_moduli() {
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), &[1, 0, 1]); // x^2+1
        assert_eq!(FiniteField::new(2, 2).unwrap().modulus(), &[1, 1, 1]); // x^2+x+1
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]); // x^3+x+1
        assert_eq!(FiniteField::new(5, 2).unwrap().modulus(), &[2, 0, 1]); // x^2+2
        assert_eq!(FiniteField::new(7, 1).unwrap().modulus(), &[0, 1]); // x
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert_eq!(FiniteField::new(6, 1).unwrap_err(), GfError::NotPrime(6));
        assert_eq!(FiniteField::new(1, 1).unwrap_err(), GfError::NotPrime(1));
    }

    #[test]
    fn prime_field_arithmetic() {
        let f5 = FiniteField::new(5, 1).unwrap();
        let three = f5.scalar(3);
        assert_eq!(three.inv().unwrap(), f5.scalar(2));
        assert_eq!(&three + &f5.scalar(4), f5.scalar(2));
        assert_eq!(&three * &three, f5.scalar(4));
        assert_eq!(f5.scalar(-1), f5.scalar(4));
        assert!(f5.zero().inv().is_err());
    }

    #[test]
    fn squares_mod_five() {
        let f5 = FiniteField::new(5, 1).unwrap();
        let squares: Vec<u64> = f5
            .elements()
            .filter(|a| f5.sqrt_count(a) > 0)
            .map(|a| a.index())
            .collect();
        assert_eq!(squares, vec![0, 1, 4]);
        let roots: Vec<u64> = f5
            .square_roots(&f5.scalar(4))
            .iter()
            .map(|a| a.index())
            .collect();
        assert_eq!(roots, vec![2, 3]);
        assert!(f5.square_roots(&f5.scalar(3)).is_empty());
        assert_eq!(
            f5.square_roots(&f5.zero()),
            vec![f5.zero()],
            "zero has the single root zero"
        );
    }

    #[test]
    fn char_two_sqrt_is_unique() {
        let f8 = FiniteField::new(2, 3).unwrap();
        for a in f8.elements() {
            assert_eq!(f8.sqrt_count(&a), 1);
        }
    }

    #[test]
    fn unit_group_order() {
        let f9 = FiniteField::new(3, 2).unwrap();
        for a in f9.elements() {
            if !a.is_zero() {
                assert_eq!(a.pow(f9.q() - 1), f9.one());
                assert_eq!(&a * &a.inv().unwrap(), f9.one());
            }
        }
    }

    #[test]
    fn frobenius_is_an_automorphism() {
        let f9 = FiniteField::new(3, 2).unwrap();
        let elems: Vec<_> = f9.elements().collect();
        for a in &elems {
            for b in &elems {
                assert_eq!((&(a + b)).frobenius(), &a.frobenius() + &b.frobenius());
                assert_eq!((&(a * b)).frobenius(), &a.frobenius() * &b.frobenius());
            }
        }
        // fixes the prime field
        for n in 0..3 {
            let c = f9.scalar(n);
            assert_eq!(c.frobenius(), c);
        }
        // alpha^3 != alpha since alpha generates F_9 over F_3
        assert_ne!(f9.alpha().frobenius(), f9.alpha());
    }

    #[test]
    fn index_roundtrip() {
        let f25 = FiniteField::new(5, 2).unwrap();
        for i in 0..f25.q() {
            assert_eq!(f25.from_index(i).index(), i);
        }
    }

    #[test]
    fn extension_embedding_is_a_ring_hom() {
        let f9 = FiniteField::new(3, 2).unwrap();
        let (f81, emb) = f9.extend(2).unwrap();
        assert_eq!(f81.q(), 81);
        // beta is a root of x^2+1 in F_81
        let beta = emb.apply(&f9.alpha());
        assert_eq!(&(&beta * &beta) + &f81.one(), f81.zero());
        let elems: Vec<_> = f9.elements().collect();
        for a in &elems {
            for b in &elems {
                assert_eq!(emb.apply(&(a + b)), &emb.apply(a) + &emb.apply(b));
                assert_eq!(emb.apply(&(a * b)), &emb.apply(a) * &emb.apply(b));
            }
        }
        assert_eq!(emb.apply(&f9.one()), f81.one());
    }

    #[test]
    fn prime_field_extension() {
        let f5 = FiniteField::new(5, 1).unwrap();
        let (f25, emb) = f5.extend(2).unwrap();
        assert_eq!(f25.q(), 25);
        for n in 0..5 {
            assert_eq!(emb.apply(&f5.scalar(n)), f25.scalar(n));
        }
    }

    #[test]
    fn cap_is_enforced_at_construction() {
        assert!(matches!(
            FiniteField::with_cap(2, 21, 1 << 20),
            Err(GfError::CapExceeded { .. })
        ));
        // the documented desk-scale boundary: 3^20 > 2^20
        assert!(matches!(
            FiniteField::new(3, 20),
            Err(GfError::CapExceeded { .. })
        ));
        assert!(FiniteField::new(2, 20).is_ok());
    }

    #[test]
    fn element_reduction_by_modulus() {
        let f9 = FiniteField::new(3, 2).unwrap();
        // a^2 = -1 = 2 in F_9 with modulus x^2+1
        assert_eq!(f9.element(&[0, 0, 1]), f9.scalar(2));
        let display = format!("{}", f9.element(&[2, 1]));
        assert_eq!(display, "2+a");
    }
}
