//! The fields F_p and F_{p^2} = F_p[u]/(u^2 - d), and polynomials over F_{p^2}.
//!
//! Elements carry their field parameters, so arithmetic is written with the
//! ordinary operators. The characteristic is limited to p < 2^31.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};
use crate::exactnum::{CycloElt, DEG};
use crate::modarith::{bigint_mod, factor, inv_mod, is_prime, pow_mod};
use crate::util::fnv1a_words;

/// F_{p^2} with p an odd prime and d the smallest quadratic nonresidue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GF2Field {
    p: u32,
    d: u32,
}

/// a + b*u
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GF2Elt {
    a: u32,
    b: u32,
    p: u32,
    d: u32,
}

fn legendre(a: u64, p: u64) -> i32 {
    match pow_mod(a, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Square root in F_p (Tonelli-Shanks), any root.
fn sqrt_fp(a: u64, p: u64, nonres: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut m = s;
    let mut c = pow_mod(nonres, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = tt * tt % p;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    Some(r)
}

/// Build the canonical F_{p^2}.
pub fn make_field(p: u64) -> Result<GF2Field> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(domain!("p = {p} is not an odd prime"));
    }
    if p >= 1 << 31 {
        return Err(domain!("p = {p} exceeds the supported range (< 2^31)"));
    }
    let d = (2..p).find(|&x| legendre(x, p) == -1).expect("nonresidue exists");
    Ok(GF2Field { p: p as u32, d: d as u32 })
}

impl GF2Field {
    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn d(&self) -> u64 {
        self.d as u64
    }

    /// p^2 - 1
    pub fn order_units(&self) -> u64 {
        self.p() * self.p() - 1
    }

    pub fn elt(&self, a: i64, b: i64) -> GF2Elt {
        let p = self.p as i64;
        GF2Elt { a: a.rem_euclid(p) as u32, b: b.rem_euclid(p) as u32, p: self.p, d: self.d }
    }

    pub fn from_i64(&self, a: i64) -> GF2Elt {
        self.elt(a, 0)
    }

    pub fn zero(&self) -> GF2Elt {
        self.elt(0, 0)
    }

    pub fn one(&self) -> GF2Elt {
        self.elt(1, 0)
    }

    /// The adjoined square root of d.
    pub fn u(&self) -> GF2Elt {
        self.elt(0, 1)
    }

    /// Element with encoding a + b*p.
    pub fn from_index(&self, idx: u64) -> GF2Elt {
        self.elt((idx % self.p()) as i64, (idx / self.p()) as i64)
    }

    /// All p^2 elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = GF2Elt> + '_ {
        (0..self.p() * self.p()).map(|i| self.from_index(i))
    }

    /// The generator of the unit group with the smallest encoding a + b*p.
    pub fn generator(&self) -> GF2Elt {
        let n = self.order_units();
        let primes: Vec<u64> = factor(n).into_iter().map(|f| f.0).collect();
        // elements of F_p have order dividing p - 1, so start at b = 1
        (self.p()..n + 1)
            .map(|i| self.from_index(i))
            .find(|g| primes.iter().all(|&q| !g.pow(n / q).is_one()))
            .expect("cyclic unit group")
    }

    /// Deterministic element of exact order n: g^{(p^2-1)/n}.
    pub fn nth_root_of_unity(&self, n: u64) -> Result<GF2Elt> {
        if n == 0 || !self.order_units().is_multiple_of(n) {
            return Err(domain!("{n} does not divide p^2 - 1 = {}", self.order_units()));
        }
        Ok(self.generator().pow(self.order_units() / n))
    }

    /// Field header text.
    pub fn header(&self) -> String {
        format!("p={} d={}", self.p, self.d)
    }

    /// Ring map Z[zeta_48] -> F_{p^2} for this field.
    pub fn cyclo_embedding(&self) -> Result<CycloEmbedding> {
        let full = self.order_units().is_multiple_of(48);
        let z = if full { self.nth_root_of_unity(48)? } else { self.nth_root_of_unity(24)? };
        let mut pows = [self.one(); DEG];
        for i in 1..DEG {
            pows[i] = pows[i - 1] * z;
        }
        Ok(CycloEmbedding { field: *self, pows, full })
    }

    pub fn poly(&self, coeffs: Vec<GF2Elt>) -> GFPoly {
        GFPoly::new(*self, coeffs)
    }
}

/// Image of zeta_48 (or of zeta_24 = zeta_48^2 when 48 does not divide
/// p^2 - 1) and its powers.
#[derive(Debug, Clone)]
pub struct CycloEmbedding {
    field: GF2Field,
    pows: [GF2Elt; DEG],
    full: bool,
}

impl CycloEmbedding {
    pub fn map(&self, c: &CycloElt) -> Result<GF2Elt> {
        let p = self.field.p();
        let den = bigint_mod(c.denominator(), p);
        let dinv = inv_mod(den, p).ok_or_else(|| domain!("denominator of {c} vanishes mod {p}"))?;
        let mut acc = self.field.zero();
        for (i, n) in c.numerators().iter().enumerate() {
            let r = bigint_mod(n, p);
            if r == 0 {
                continue;
            }
            let z = if self.full {
                self.pows[i]
            } else if i % 2 == 0 {
                self.pows[i / 2]
            } else {
                return Err(domain!("{c} does not lie in Q(zeta_24); 48 does not divide p^2-1"));
            };
            acc += z * self.field.from_i64(r as i64);
        }
        Ok(acc * self.field.from_i64(dinv as i64))
    }
}

impl GF2Elt {
    pub fn field(&self) -> GF2Field {
        GF2Field { p: self.p, d: self.d }
    }

    pub fn a(&self) -> u64 {
        self.a as u64
    }

    pub fn b(&self) -> u64 {
        self.b as u64
    }

    /// a + b*p
    pub fn index(&self) -> u64 {
        self.a() + self.b() * self.p as u64
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_one(&self) -> bool {
        self.a == 1 && self.b == 0
    }

    pub fn in_prime_field(&self) -> bool {
        self.b == 0
    }

    fn mk(&self, a: u64, b: u64) -> GF2Elt {
        GF2Elt { a: a as u32, b: b as u32, p: self.p, d: self.d }
    }

    /// Frobenius image a - b*u.
    pub fn conj(&self) -> GF2Elt {
        let p = self.p as u64;
        self.mk(self.a(), (p - self.b()) % p)
    }

    /// a^2 - d b^2 in F_p.
    pub fn norm(&self) -> u64 {
        let p = self.p as u64;
        let a2 = self.a() * self.a() % p;
        let b2 = self.b() * self.b() % p * self.d as u64 % p;
        (a2 + p - b2) % p
    }

    pub fn inv(&self) -> Option<GF2Elt> {
        let n = inv_mod(self.norm(), self.p as u64)?;
        let c = self.conj();
        let p = self.p as u64;
        Some(self.mk(c.a() * n % p, c.b() * n % p))
    }

    pub fn pow(&self, mut e: u64) -> GF2Elt {
        let mut base = *self;
        let mut acc = self.mk(1, 0);
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Signed power; `None` for a negative power of zero.
    pub fn powi(&self, e: i64) -> Option<GF2Elt> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inv().map(|x| x.pow(e.unsigned_abs()))
        }
    }

    pub fn is_square(&self) -> bool {
        self.is_zero() || legendre(self.norm(), self.p as u64) == 1
    }

    /// Square root with the smaller (a, b) of the two choices; `None` for a
    /// non-square.
    pub fn sqrt(&self) -> Option<GF2Elt> {
        let p = self.p as u64;
        let d = self.d as u64;
        if self.is_zero() {
            return Some(*self);
        }
        let y = if self.b == 0 {
            match sqrt_fp(self.a(), p, d) {
                Some(r) => self.mk(r, 0),
                // a/d is then a square: sqrt(a) = sqrt(a/d) * u
                None => {
                    let r = sqrt_fp(self.a() * inv_mod(d, p).unwrap() % p, p, d)?;
                    self.mk(0, r)
                }
            }
        } else {
            let r = sqrt_fp(self.norm(), p, d)?;
            let half = inv_mod(2, p).unwrap();
            let c2 = [(self.a() + r) % p * half % p, (self.a() + p - r) % p * half % p];
            let c = c2.iter().find_map(|&x| if x != 0 { sqrt_fp(x, p, d) } else { None })?;
            let e = self.b() * inv_mod(2 * c % p, p)? % p;
            self.mk(c, e)
        };
        debug_assert_eq!(y * y, *self);
        Some(y.min(-y))
    }

    /// Text form "a+b*u".
    pub fn encode(&self) -> String {
        format!("{}+{}*u", self.a, self.b)
    }

    /// Parse "a+b*u" or a bare prime-field integer "a".
    pub fn parse_in(field: &GF2Field, s: &str) -> Result<GF2Elt> {
        let bad = || domain!("bad element encoding '{s}'");
        let (a, b) = match s.trim().split_once('+') {
            Some((a, rest)) => (a, rest.strip_suffix("*u").ok_or_else(bad)?),
            None => (s.trim(), "0"),
        };
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if a < 0 || b < 0 || a >= field.p as i64 || b >= field.p as i64 {
            return Err(bad());
        }
        Ok(field.elt(a, b))
    }
}

impl fmt::Display for GF2Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl fmt::Debug for GF2Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl FromStr for GF2Field {
    type Err = crate::Error;
    /// Parses "p=<p> d=<d>" and checks d is canonical.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = None;
        let mut d = None;
        for part in s.split_whitespace() {
            match part.split_once('=') {
                Some(("p", v)) => p = v.parse::<u64>().ok(),
                Some(("d", v)) => d = v.parse::<u64>().ok(),
                _ => return Err(domain!("bad field header '{s}'")),
            }
        }
        let f = make_field(p.ok_or_else(|| domain!("missing p"))?)?;
        if d.is_some_and(|d| d != f.d()) {
            return Err(domain!("d is not the canonical nonresidue"));
        }
        Ok(f)
    }
}

impl Add for GF2Elt {
    type Output = GF2Elt;
    fn add(self, o: GF2Elt) -> GF2Elt {
        debug_assert_eq!(self.p, o.p);
        let p = self.p as u64;
        self.mk((self.a() + o.a()) % p, (self.b() + o.b()) % p)
    }
}

impl Sub for GF2Elt {
    type Output = GF2Elt;
    fn sub(self, o: GF2Elt) -> GF2Elt {
        let p = self.p as u64;
        self.mk((self.a() + p - o.a()) % p, (self.b() + p - o.b()) % p)
    }
}

impl Neg for GF2Elt {
    type Output = GF2Elt;
    fn neg(self) -> GF2Elt {
        let p = self.p as u64;
        self.mk((p - self.a()) % p, (p - self.b()) % p)
    }
}

impl Mul for GF2Elt {
    type Output = GF2Elt;
    fn mul(self, o: GF2Elt) -> GF2Elt {
        debug_assert_eq!(self.p, o.p);
        let p = self.p as u64;
        let (a, b, c, e) = (self.a(), self.b(), o.a(), o.b());
        let bd = b * e % p * self.d as u64 % p;
        self.mk((a * c + bd) % p, (a * e + b * c) % p)
    }
}

impl Div for GF2Elt {
    type Output = GF2Elt;
    /// Panics on division by zero; use `inv` to test.
    fn div(self, o: GF2Elt) -> GF2Elt {
        self * o.inv().expect("division by zero in F_{p^2}")
    }
}

impl AddAssign for GF2Elt {
    fn add_assign(&mut self, o: GF2Elt) {
        *self = *self + o;
    }
}

impl SubAssign for GF2Elt {
    fn sub_assign(&mut self, o: GF2Elt) {
        *self = *self - o;
    }
}

impl MulAssign for GF2Elt {
    fn mul_assign(&mut self, o: GF2Elt) {
        *self = *self * o;
    }
}

/// Polynomial over F_{p^2}, constant term first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GFPoly {
    field: GF2Field,
    c: Vec<GF2Elt>,
}

impl fmt::Debug for GFPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.c)
    }
}

impl GFPoly {
    pub fn new(field: GF2Field, mut c: Vec<GF2Elt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        GFPoly { field, c }
    }

    pub fn zero(field: GF2Field) -> Self {
        GFPoly { field, c: Vec::new() }
    }

    pub fn constant(c: GF2Elt) -> Self {
        Self::new(c.field(), vec![c])
    }

    /// x - r
    pub fn linear(r: GF2Elt) -> Self {
        Self::new(r.field(), vec![-r, r.field().one()])
    }

    pub fn x(field: GF2Field) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    /// prod (x - r)
    pub fn from_roots(field: GF2Field, roots: &[GF2Elt]) -> Self {
        roots.iter().fold(Self::constant(field.one()), |acc, &r| acc.mul(&Self::linear(r)))
    }

    pub fn field(&self) -> GF2Field {
        self.field
    }

    pub fn coeffs(&self) -> &[GF2Elt] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> GF2Elt {
        self.c.get(i).copied().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn lead(&self) -> GF2Elt {
        self.c.last().copied().unwrap_or_else(|| self.field.zero())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.lead().inv().unwrap())
    }

    pub fn scale(&self, k: GF2Elt) -> Self {
        Self::new(self.field, self.c.iter().map(|&x| x * k).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new(self.field, (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new(self.field, (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(self.field, out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, o: &Self) -> (Self, Self) {
        assert!(!o.is_zero(), "polynomial division by zero");
        if self.degree() < o.degree() {
            return (Self::zero(self.field), self.clone());
        }
        let inv = o.lead().inv().unwrap();
        let mut r = self.c.clone();
        let dq = self.c.len() - o.c.len();
        let mut q = vec![self.field.zero(); dq + 1];
        for k in (0..=dq).rev() {
            let t = r[k + o.c.len() - 1] * inv;
            q[k] = t;
            if t.is_zero() {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                r[k + j] -= t * b;
            }
        }
        r.truncate(o.c.len() - 1);
        (Self::new(self.field, q), Self::new(self.field, r))
    }

    pub fn rem(&self, o: &Self) -> Self {
        self.divrem(o).1
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.field,
            self.c.iter().enumerate().skip(1).map(|(i, &x)| x * self.field.from_i64(i as i64)).collect(),
        )
    }

    pub fn eval(&self, x: GF2Elt) -> GF2Elt {
        self.c.iter().rev().fold(self.field.zero(), |acc, &c| acc * x + c)
    }

    /// self^e mod m
    pub fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::constant(self.field.one()).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Product of the distinct linear factors: gcd(f, x^{p^2} - x).
    pub fn linear_part(&self) -> Self {
        let q = self.field.p() * self.field.p();
        let xq = Self::x(self.field).powmod(q, self);
        self.gcd(&xq.sub(&Self::x(self.field)))
    }

    fn seed(&self) -> u64 {
        let mut words = vec![self.field.p()];
        words.extend(self.c.iter().map(|x| x.index()));
        fnv1a_words(&words)
    }
}

/// Roots of a squarefree product of distinct linear factors (equal-degree
/// splitting).
fn split_linear(g: &GFPoly, rng: &mut ChaCha8Rng, out: &mut Vec<GF2Elt>) {
    match g.degree() {
        d if d <= 0 => {}
        1 => out.push(-g.coeff(0) * g.lead().inv().unwrap()),
        d => {
            let f = g.field;
            let e = (f.p() * f.p() - 1) / 2;
            loop {
                let a = GFPoly::new(
                    f,
                    (0..d).map(|_| f.from_index(rng.gen_range(0..f.p() * f.p()))).collect(),
                );
                if a.degree() < 1 {
                    continue;
                }
                let h = a.powmod(e, g).sub(&GFPoly::constant(f.one()));
                let s = g.gcd(&h);
                if s.degree() > 0 && s.degree() < g.degree() {
                    split_linear(&s, rng, out);
                    split_linear(&g.divrem(&s).0, rng, out);
                    return;
                }
            }
        }
    }
}

/// All roots in F_{p^2} with multiplicity, sorted by (a, b).
pub fn roots(f: &GFPoly) -> Vec<(GF2Elt, u32)> {
    if f.degree() < 1 {
        return Vec::new();
    }
    let g = f.linear_part();
    let mut rng = ChaCha8Rng::seed_from_u64(f.seed());
    let mut rs = Vec::new();
    split_linear(&g, &mut rng, &mut rs);
    rs.sort();
    rs.into_iter()
        .map(|r| {
            let lin = GFPoly::linear(r);
            let mut m = 0;
            let mut cur = f.clone();
            loop {
                let (q, rem) = cur.divrem(&lin);
                if !rem.is_zero() {
                    break;
                }
                m += 1;
                cur = q;
            }
            (r, m)
        })
        .collect()
}

/// Roots repeated according to multiplicity.
pub fn roots_flat(f: &GFPoly) -> Vec<GF2Elt> {
    roots(f).into_iter().flat_map(|(r, m)| std::iter::repeat_n(r, m as usize)).collect()
}

/// Number of distinct roots in F_{p^2}.
pub fn split_count(f: &GFPoly) -> usize {
    if f.degree() < 1 {
        return 0;
    }
    f.linear_part().degree().max(0) as usize
}

impl PartialOrd for GFPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GFPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c.len().cmp(&other.c.len()).then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_nonresidues() {
        assert_eq!(make_field(13).unwrap().d(), 2);
        assert_eq!(make_field(17).unwrap().d(), 3);
        assert!(make_field(9).is_err());
        assert!(make_field(2).is_err());
    }

    #[test]
    fn sqrt_examples() {
        let f = make_field(13).unwrap();
        assert_eq!(f.from_i64(4).sqrt(), Some(f.from_i64(2)));
        assert_eq!(f.from_i64(2).sqrt(), Some(f.u()));
        assert_eq!(f.zero().sqrt(), Some(f.zero()));
        let g = f.generator();
        assert!(g.sqrt().is_none());
    }

    #[test]
    fn roots_of_unity() {
        let f = make_field(17).unwrap();
        assert_eq!(f.generator(), f.elt(3, 1));
        let z8 = f.nth_root_of_unity(8).unwrap();
        assert!(z8.in_prime_field());
        assert_eq!(z8.pow(8), f.one());
        assert_ne!(z8.pow(4), f.one());
        assert!(f.nth_root_of_unity(7).is_err());
        for p in [5u64, 7, 11, 13, 101, 1009] {
            let f = make_field(p).unwrap();
            let z = f.nth_root_of_unity(24).unwrap();
            assert!(z.pow(24).is_one());
            for q in [2, 3] {
                assert!(!z.pow(24 / q).is_one());
            }
        }
    }

    #[test]
    fn root_finding_examples() {
        let f = make_field(13).unwrap();
        let x2m2 = f.poly(vec![f.from_i64(-2), f.zero(), f.one()]);
        let r = roots(&x2m2);
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|&(x, m)| m == 1 && x * x == f.from_i64(2)));
        let g = GFPoly::from_roots(f, &[f.from_i64(3), f.from_i64(3), f.from_i64(5)]);
        assert_eq!(roots(&g), vec![(f.from_i64(3), 2), (f.from_i64(5), 1)]);
        // (x - 16)^3 - 5x
        let x = GFPoly::x(f);
        let c = x.sub(&GFPoly::constant(f.from_i64(16)));
        let h = c.mul(&c).mul(&c).sub(&x.scale(f.from_i64(5)));
        assert_eq!(split_count(&h), 3);
    }

    #[test]
    fn split_count_of_nonresidue_and_irreducible() {
        let f = make_field(13).unwrap();
        let q = f.poly(vec![-f.from_i64(2), f.zero(), f.one()]);
        assert_eq!(split_count(&q), 2);
        // x^3 - g with g a generator is irreducible over F_{p^2} (3 | p^2 - 1)
        let g = f.generator();
        let cubic = f.poly(vec![-g, f.zero(), f.zero(), f.one()]);
        assert_eq!(split_count(&cubic), 0);
        assert!(roots(&cubic).is_empty());
    }

    #[test]
    fn encoding_roundtrip() {
        let f = make_field(101).unwrap();
        let x = f.elt(7, 93);
        assert_eq!(x.encode(), "7+93*u");
        assert_eq!(GF2Elt::parse_in(&f, "7+93*u").unwrap(), x);
        assert_eq!(f.from_i64(5).encode(), "5+0*u");
        assert!(GF2Elt::parse_in(&f, "7+101*u").is_err());
        assert_eq!("p=101 d=2".parse::<GF2Field>().unwrap(), f);
    }

    #[test]
    fn cyclo_embedding_is_a_ring_map() {
        for p in [13u64, 17, 23, 31] {
            let f = make_field(p).unwrap();
            let e = f.cyclo_embedding().unwrap();
            let z24 = CycloElt::zeta48(2);
            assert!(e.map(&z24).unwrap().pow(24).is_one());
            assert!(!e.map(&z24).unwrap().pow(12).is_one());
            let s = CycloElt::sqrt2();
            let img = e.map(&s).unwrap();
            assert_eq!(img * img, f.from_i64(2));
            let a: CycloElt = "1/3 + 2*z^2 + -5*z^10".parse().unwrap();
            let b: CycloElt = "7 + 1*z^4".parse().unwrap();
            assert_eq!(e.map(&(&a * &b)).unwrap(), e.map(&a).unwrap() * e.map(&b).unwrap());
        }
    }

    proptest! {
        #[test]
        fn field_axioms(p in prop::sample::select(vec![13u64, 17, 101, 65537]), a in any::<u32>(), b in any::<u32>(), c in any::<u32>(), e in any::<u32>()) {
            let f = make_field(p).unwrap();
            let x = f.elt(a as i64, b as i64);
            let y = f.elt(c as i64, e as i64);
            prop_assert_eq!(x * y, y * x);
            prop_assert_eq!((x + y) * y, x * y + y * y);
            if !x.is_zero() {
                prop_assert!((x * x.inv().unwrap()).is_one());
            }
            let s = x * x;
            let r = s.sqrt().unwrap();
            prop_assert_eq!(r * r, s);
            prop_assert!(r <= -r);
        }

        #[test]
        fn roots_divide(p in prop::sample::select(vec![13u64, 17, 29]), cs in prop::collection::vec(any::<u32>(), 2..8)) {
            let f = make_field(p).unwrap();
            let mut v: Vec<GF2Elt> = cs.iter().map(|&c| f.from_index(c as u64 % (p * p))).collect();
            v.push(f.one());
            let poly = f.poly(v);
            let rs = roots(&poly);
            let prod = rs.iter().fold(GFPoly::constant(f.one()), |acc, &(r, m)| {
                (0..m).fold(acc, |a, _| a.mul(&GFPoly::linear(r)))
            });
            prop_assert!(poly.rem(&prod).is_zero());
            prop_assert_eq!(rs.clone(), roots(&poly));
            prop_assert_eq!(rs.len(), split_count(&poly));
        }
    }
}
