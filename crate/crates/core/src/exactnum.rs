//! Exact arithmetic in Q(zeta_48).
//!
//! Elements are stored as sixteen integer numerators over one positive
//! common denominator, in the power basis 1, z, ..., z^15 with z = zeta_48,
//! reduced modulo the 48th cyclotomic polynomial x^16 - x^8 + 1.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::modarith::{add_mod, bigint_mod, inv_mod, mul_mod};

pub type Rational = BigRational;

/// Degree of Q(zeta_48) over Q.
pub const DEG: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloElt {
    num: [BigInt; DEG],
    den: BigInt,
}

impl Default for CycloElt {
    fn default() -> Self {
        Self::zero()
    }
}

fn zero_array() -> [BigInt; DEG] {
    std::array::from_fn(|_| BigInt::zero())
}

/// Power-basis vectors of zeta_48^k for 0 <= k < 48.
fn zeta_table() -> &'static [[i8; DEG]; 48] {
    static TABLE: OnceLock<[[i8; DEG]; 48]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [[0i8; DEG]; 48];
        let mut cur = [0i8; DEG];
        cur[0] = 1;
        for row in t.iter_mut() {
            *row = cur;
            // multiply by z: shift up, then fold z^16 = z^8 - 1
            let top = cur[DEG - 1];
            let mut next = [0i8; DEG];
            next[1..DEG].copy_from_slice(&cur[..DEG - 1]);
            next[8] += top;
            next[0] -= top;
            cur = next;
        }
        t
    })
}

impl CycloElt {
    pub fn zero() -> Self {
        CycloElt { num: zero_array(), den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        let mut num = zero_array();
        num[0] = n;
        CycloElt { num, den: BigInt::one() }
    }

    pub fn from_rational(q: &Rational) -> Self {
        let mut num = zero_array();
        num[0] = q.numer().clone();
        CycloElt { num, den: q.denom().clone() }.normalized()
    }

    /// Build from sixteen rational coordinates.
    pub fn from_coeffs(coeffs: &[Rational]) -> Self {
        assert!(coeffs.len() <= DEG);
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num = zero_array();
        for (slot, c) in num.iter_mut().zip(coeffs) {
            *slot = c.numer() * (&den / c.denom());
        }
        CycloElt { num, den }.normalized()
    }

    /// Build from integer numerators and a common nonzero denominator.
    pub fn from_parts(num: [BigInt; DEG], den: BigInt) -> Self {
        assert!(!den.is_zero());
        CycloElt { num, den }.normalized()
    }

    /// zeta_48^k for any integer k.
    pub fn zeta48(k: i64) -> Self {
        let row = &zeta_table()[k.rem_euclid(48) as usize];
        let mut num = zero_array();
        for (slot, &c) in num.iter_mut().zip(row) {
            *slot = BigInt::from(c);
        }
        CycloElt { num, den: BigInt::one() }
    }

    /// zeta_m^k = zeta_48^{(48/m) k}, for m | 48.
    pub fn root_of_unity(m: u32, k: i64) -> Result<Self> {
        if m == 0 || 48 % m != 0 {
            return Err(domain!("root_of_unity: {m} does not divide 48"));
        }
        Ok(Self::zeta48((48 / m as i64) * k))
    }

    /// sqrt(2) = zeta_8 + zeta_8^{-1}.
    pub fn sqrt2() -> Self {
        &Self::zeta48(6) + &Self::zeta48(42)
    }

    fn normalized(mut self) -> Self {
        if self.den.is_negative() {
            self.den = -self.den;
            for c in self.num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        if self.den.is_one() {
            return self;
        }
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
            return self;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            self.den /= &g;
            for c in self.num.iter_mut() {
                if !c.is_zero() {
                    *c /= &g;
                }
            }
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// Rational iff every coordinate beyond the constant one vanishes.
    pub fn is_rational(&self) -> bool {
        self.num[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_integral_rational(&self) -> bool {
        self.is_rational() && self.den.is_one()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| Rational::new(self.num[0].clone(), self.den.clone()))
    }

    pub fn coeff(&self, i: usize) -> Rational {
        Rational::new(self.num[i].clone(), self.den.clone())
    }

    pub fn coeffs(&self) -> Vec<Rational> {
        (0..DEG).map(|i| self.coeff(i)).collect()
    }

    pub fn numerators(&self) -> &[BigInt; DEG] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Largest index with a nonzero coordinate.
    pub fn support_max(&self) -> Option<usize> {
        (0..DEG).rev().find(|&i| !self.num[i].is_zero())
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        let num = std::array::from_fn(|i| &self.num[i] * k);
        CycloElt { num, den: self.den.clone() }.normalized()
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        let num = std::array::from_fn(|i| &self.num[i] * q.numer());
        CycloElt { num, den: &self.den * q.denom() }.normalized()
    }

    fn add_signed(&self, other: &Self, sign: i8) -> Self {
        if self.den == other.den {
            let num = std::array::from_fn(|i| {
                if sign > 0 {
                    &self.num[i] + &other.num[i]
                } else {
                    &self.num[i] - &other.num[i]
                }
            });
            return CycloElt { num, den: self.den.clone() }.normalized();
        }
        let num = std::array::from_fn(|i| {
            let a = &self.num[i] * &other.den;
            let b = &other.num[i] * &self.den;
            if sign > 0 {
                a + b
            } else {
                a - b
            }
        });
        CycloElt { num, den: &self.den * &other.den }.normalized()
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if other.is_rational() {
            let k = &other.num[0];
            let num = std::array::from_fn(|i| &self.num[i] * k);
            return CycloElt { num, den: &self.den * &other.den }.normalized();
        }
        if self.is_rational() {
            return other.mul_impl(self);
        }
        let mut t: Vec<BigInt> = vec![BigInt::zero(); 2 * DEG - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    t[i + j] += a * b;
                }
            }
        }
        for k in (DEG..2 * DEG - 1).rev() {
            let c = std::mem::take(&mut t[k]);
            if !c.is_zero() {
                t[k - 8] += &c;
                t[k - 16] -= &c;
            }
        }
        let mut num = zero_array();
        for (slot, v) in num.iter_mut().zip(t) {
            *slot = v;
        }
        CycloElt { num, den: &self.den * &other.den }.normalized()
    }

    /// In-place `self += a * b`.
    pub fn add_product(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        if self.den.is_one() && a.den.is_one() && b.den.is_one() && a.is_rational() && b.is_rational() {
            self.num[0] += &a.num[0] * &b.num[0];
            return;
        }
        let prod = a.mul_impl(b);
        *self = self.add_signed(&prod, 1);
    }

    /// Galois action zeta -> zeta^k, k a unit mod 48.
    pub fn galois(&self, k: i64) -> Self {
        assert_eq!(k.rem_euclid(48).gcd(&48), 1, "Galois exponent must be a unit");
        if self.is_rational() {
            return self.clone();
        }
        let table = zeta_table();
        let mut num = zero_array();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &table[(i as i64 * k).rem_euclid(48) as usize];
            for (slot, &r) in num.iter_mut().zip(row) {
                if r != 0 {
                    *slot += c * BigInt::from(r);
                }
            }
        }
        CycloElt { num, den: self.den.clone() }
    }

    /// Multiplicative inverse via the product of the nontrivial conjugates.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(domain!("division by zero in Q(zeta_48)"));
        }
        if self.is_rational() {
            let mut num = zero_array();
            num[0] = self.den.clone();
            return Ok(CycloElt { num, den: self.num[0].clone() }.normalized());
        }
        let mut prod = Self::one();
        for k in [5i64, 7, 11, 13, 17, 19, 23, 25, 29, 31, 35, 37, 41, 43, 47] {
            prod = prod.mul_impl(&self.galois(k));
        }
        let norm = self.mul_impl(&prod);
        let n = norm
            .to_rational()
            .ok_or_else(|| Error::Internal("norm is not rational".into()))?;
        Ok(prod.scale_rational(&(Rational::one() / n)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_impl(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_impl(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_impl(&base);
            }
        }
        Ok(acc)
    }

    /// Image modulo p under zeta -> omega, given omega^i for i < 16.
    /// `None` if the denominator vanishes mod p.
    pub fn eval_mod(&self, p: u64, omega_pows: &[u64; DEG]) -> Option<u64> {
        let dinv = inv_mod(bigint_mod(&self.den, p), p)?;
        let mut s = 0u64;
        for (c, &w) in self.num.iter().zip(omega_pows) {
            if !c.is_zero() {
                s = add_mod(s, mul_mod(bigint_mod(c, p), w, p), p);
            }
        }
        Some(mul_mod(s, dinv, p))
    }
}

/// The three field operations named in the interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycloOp {
    Add,
    Mul,
    Div,
}

pub fn cyclo_arith(a: &CycloElt, b: &CycloElt, op: CycloOp) -> Result<CycloElt> {
    match op {
        CycloOp::Add => Ok(a + b),
        CycloOp::Mul => Ok(a * b),
        CycloOp::Div => a.div(b),
    }
}

impl Add for &CycloElt {
    type Output = CycloElt;
    fn add(self, o: &CycloElt) -> CycloElt {
        self.add_signed(o, 1)
    }
}

impl Sub for &CycloElt {
    type Output = CycloElt;
    fn sub(self, o: &CycloElt) -> CycloElt {
        self.add_signed(o, -1)
    }
}

impl Mul for &CycloElt {
    type Output = CycloElt;
    fn mul(self, o: &CycloElt) -> CycloElt {
        self.mul_impl(o)
    }
}

impl Neg for &CycloElt {
    type Output = CycloElt;
    fn neg(self) -> CycloElt {
        let num = std::array::from_fn(|i| -&self.num[i]);
        CycloElt { num, den: self.den.clone() }
    }
}

impl Add for CycloElt {
    type Output = CycloElt;
    fn add(self, o: CycloElt) -> CycloElt {
        &self + &o
    }
}

impl Sub for CycloElt {
    type Output = CycloElt;
    fn sub(self, o: CycloElt) -> CycloElt {
        &self - &o
    }
}

impl Mul for CycloElt {
    type Output = CycloElt;
    fn mul(self, o: CycloElt) -> CycloElt {
        &self * &o
    }
}

impl Neg for CycloElt {
    type Output = CycloElt;
    fn neg(self) -> CycloElt {
        -&self
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Canonical text: nonzero terms "c", "c*z", "c*z^i" joined by " + ".
impl fmt::Display for CycloElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for i in 0..DEG {
            if self.num[i].is_zero() {
                continue;
            }
            let c = fmt_rational(&self.coeff(i));
            parts.push(match i {
                0 => c,
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for CycloElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloElt({self})")
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || domain!("bad rational '{s}'");
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for CycloElt {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut coeffs = vec![Rational::zero(); DEG];
        for term in s.split(" + ") {
            let term = term.trim();
            let (c, idx) = match term.split_once("*z") {
                None => (term, 0usize),
                Some((c, rest)) => {
                    let idx = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .and_then(|e| e.parse().ok())
                            .ok_or_else(|| domain!("bad term '{term}'"))?
                    };
                    (c, idx)
                }
            };
            if idx >= DEG {
                return Err(domain!("power {idx} out of range in '{term}'"));
            }
            coeffs[idx] += parse_rational(c)?;
        }
        Ok(Self::from_coeffs(&coeffs))
    }
}
