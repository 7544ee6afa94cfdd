//! Truncated Laurent series in q^{1/48} over Q(zeta_48).
//!
//! A series stores its terms on the lattice `val + k*stride` and an absolute
//! precision `prec`: every coefficient of exponent `e < prec` is known, and
//! nothing at or beyond `prec` is ever read. Exponents are always counted in
//! units of q^{1/48}.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::exactnum::CycloElt;
use crate::modpoly::InvariantLine;
use crate::util::gcd_i64;

/// Precision used for exact (finite) series such as constants.
pub const EXACT: i64 = i64::MAX / 8;

#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    val: i64,
    stride: i64,
    coeffs: Vec<CycloElt>,
    prec: i64,
}

impl QSeries {
    /// Series that is zero up to (absolute) precision `prec`.
    pub fn zero(prec: i64) -> Self {
        QSeries { val: prec, stride: 1, coeffs: Vec::new(), prec }
    }

    /// Exact constant.
    pub fn constant(c: CycloElt) -> Self {
        Self::from_terms(vec![(0, c)], EXACT)
    }

    pub fn one() -> Self {
        Self::constant(CycloElt::one())
    }

    /// Exact monomial c * q^{e/48}.
    pub fn monomial(e: i64, c: CycloElt) -> Self {
        Self::from_terms(vec![(e, c)], EXACT)
    }

    /// Build from (exponent, coefficient) pairs; terms at or beyond `prec`
    /// are dropped.
    pub fn from_terms(mut terms: Vec<(i64, CycloElt)>, prec: i64) -> Self {
        terms.retain(|(e, c)| *e < prec && !c.is_zero());
        if terms.is_empty() {
            return Self::zero(prec);
        }
        terms.sort_by_key(|t| t.0);
        let val = terms[0].0;
        let stride = terms.iter().fold(0, |g, (e, _)| gcd_i64(g, e - val)).max(1);
        let len = ((terms.last().unwrap().0 - val) / stride + 1) as usize;
        let mut coeffs = vec![CycloElt::zero(); len];
        for (e, c) in terms {
            let slot = &mut coeffs[((e - val) / stride) as usize];
            *slot = &*slot + &c;
        }
        QSeries { val, stride, coeffs, prec }.normalized()
    }

    /// Strip zero ends and compress the stride to the gcd of the support.
    fn normalized(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        let Some(lead) = lead else {
            return Self::zero(self.prec);
        };
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64 * self.stride;
        }
        let g = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(0i64, |g, (k, _)| gcd_i64(g, k as i64));
        if g > 1 {
            let g = g as usize;
            self.coeffs = self.coeffs.into_iter().step_by(g).collect();
            self.stride *= g as i64;
        }
        if self.coeffs.len() == 1 {
            self.stride = 1;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Absolute precision: coefficients of exponents below this are known.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Number of known q^{1/48}-steps beyond the valuation.
    pub fn relative_precision(&self) -> i64 {
        self.prec.saturating_sub(self.val)
    }

    /// Exponent of the lowest nonzero term.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    pub fn stride(&self) -> i64 {
        self.stride
    }

    pub fn leading(&self) -> Option<&CycloElt> {
        self.coeffs.first()
    }

    /// Coefficient of q^{e/48}; `None` beyond the precision.
    pub fn coeff(&self, e: i64) -> Option<CycloElt> {
        if e >= self.prec {
            return None;
        }
        if self.is_zero() || e < self.val || (e - self.val) % self.stride != 0 {
            return Some(CycloElt::zero());
        }
        let k = ((e - self.val) / self.stride) as usize;
        Some(self.coeffs.get(k).cloned().unwrap_or_else(CycloElt::zero))
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &CycloElt)> {
        let (v, s) = (self.val, self.stride);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (v + k as i64 * s, c))
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_rational())
    }

    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::from_terms(self.terms().map(|(e, c)| (e, c.clone())).collect(), prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let prec = self.prec.min(other.prec);
        let mut terms: Vec<(i64, CycloElt)> =
            self.terms().filter(|t| t.0 < prec).map(|(e, c)| (e, c.clone())).collect();
        for (e, c) in other.terms().filter(|t| t.0 < prec) {
            terms.push((e, if negate { -c } else { c.clone() }));
        }
        Self::from_terms(terms, prec)
    }

    pub fn neg(&self) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c).collect(), ..self.clone() }
    }

    pub fn scale(&self, k: &CycloElt) -> Self {
        if k.is_zero() {
            return Self::zero(self.prec);
        }
        QSeries { coeffs: self.coeffs.iter().map(|c| c * k).collect(), ..self.clone() }.normalized()
    }

    /// Product; absolute precision min(pa + vb, pb + va).
    pub fn mul(&self, other: &Self) -> Self {
        let va = if self.is_zero() { self.prec } else { self.val };
        let vb = if other.is_zero() { other.prec } else { other.val };
        let mut prec = self.prec.saturating_add(vb).min(other.prec.saturating_add(va));
        if prec >= EXACT / 2 {
            prec = EXACT;
        }
        if self.is_zero() || other.is_zero() {
            return Self::zero(prec);
        }
        let val = self.val + other.val;
        let g = gcd_i64(self.stride, other.stride);
        let span = prec.saturating_sub(val);
        let last_a = (self.coeffs.len() as i64 - 1) * self.stride;
        let last_b = (other.coeffs.len() as i64 - 1) * other.stride;
        let top = (last_a + last_b).min(span - 1);
        if top < 0 {
            return Self::zero(prec);
        }
        let mut out = vec![CycloElt::zero(); (top / g + 1) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            let ea = i as i64 * self.stride;
            if ea > top {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let e = ea + j as i64 * other.stride;
                if e > top {
                    break;
                }
                if !b.is_zero() {
                    out[(e / g) as usize].add_product(a, b);
                }
            }
        }
        QSeries { val, stride: g, coeffs: out, prec }.normalized()
    }

    /// Reciprocal; needs a nonzero leading coefficient, keeps relative precision.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(domain!("cannot invert a series that is zero to precision"));
        }
        if self.prec >= EXACT && self.coeffs.len() == 1 {
            return Ok(Self::monomial(-self.val, self.coeffs[0].inv()?));
        }
        let rel = self.relative_precision();
        let n = ((rel + self.stride - 1) / self.stride) as usize;
        let b0 = self.coeffs[0].inv()?;
        let mut b: Vec<CycloElt> = Vec::with_capacity(n);
        b.push(b0.clone());
        for k in 1..n {
            let mut acc = CycloElt::zero();
            for i in 1..=k.min(self.coeffs.len() - 1) {
                acc.add_product(&self.coeffs[i], &b[k - i]);
            }
            b.push(-&(&acc * &b0));
        }
        Ok(QSeries { val: -self.val, stride: self.stride, coeffs: b, prec: -self.val + rel }
            .normalized())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc: Option<Self> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc.unwrap_or_else(Self::one))
    }

    /// Substitution tau -> tau + k: the q^{e/48} coefficient picks up zeta_48^{k e}.
    pub fn shift_tau(&self, k: i64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let e = self.val + i as i64 * self.stride;
                if c.is_zero() {
                    c.clone()
                } else {
                    c * &CycloElt::zeta48((k * e).rem_euclid(48))
                }
            })
            .collect();
        QSeries { coeffs, ..self.clone() }.normalized()
    }

    /// Substitution q -> q^l: every exponent (and the precision) scales by l.
    pub fn substitute_qpower(&self, l: i64) -> Self {
        assert!(l >= 1);
        if self.is_zero() {
            return Self::zero(self.prec.saturating_mul(l).min(EXACT));
        }
        QSeries {
            val: self.val * l,
            stride: self.stride * l,
            coeffs: self.coeffs.clone(),
            prec: self.prec.saturating_mul(l).min(EXACT),
        }
    }

    /// Substitution q -> q^{1/2}; all exponents must be even.
    pub fn halve_exponents(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(Self::zero(ceil_half(self.prec)));
        }
        if self.val % 2 != 0 || (self.coeffs.len() > 1 && self.stride % 2 != 0) {
            return Err(domain!("odd exponent in halving"));
        }
        Ok(QSeries {
            val: self.val / 2,
            stride: (self.stride / 2).max(1),
            coeffs: self.coeffs.clone(),
            prec: ceil_half(self.prec),
        })
    }

    /// Map every coefficient through `f` (e.g. reduction or Galois action).
    pub fn map_coeffs(&self, f: impl Fn(&CycloElt) -> CycloElt) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(f).collect(), ..self.clone() }.normalized()
    }

    /// Debug dump: one "e c" line per nonzero term.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (e, c) in self.terms() {
            let _ = writeln!(s, "{e} {c}");
        }
        s
    }
}

fn ceil_half(x: i64) -> i64 {
    if x >= EXACT {
        EXACT
    } else {
        x.div_euclid(2) + x.rem_euclid(2)
    }
}

/// Argument at which eta is expanded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaVariant {
    Tau,
    TauHalf,
    TauPlus1Half,
    TwoTau,
}

/// Euler's pentagonal expansion of eta(tau) = sum (-1)^k q^{(6k-1)^2/24},
/// known for exponents below `prec` (absolute, in q^{1/48}).
fn eta_master(prec: i64) -> QSeries {
    let mut terms = Vec::new();
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let m = 6 * kk - 1;
            let e = 2 * m * m;
            if e < prec {
                any = true;
                let sign = if kk.rem_euclid(2) == 0 { 1 } else { -1 };
                terms.push((e, CycloElt::from_int(sign)));
            }
        }
        if !any && k > 0 {
            break;
        }
        k += 1;
    }
    QSeries::from_terms(terms, prec)
}

/// Expansion of eta at the given argument with `prec` known steps past the
/// valuation. The half-argument variants come from the master series by
/// exponent halving and a tau-shift.
pub fn eta_component(variant: EtaVariant, prec: i64) -> QSeries {
    assert!(prec >= 1);
    match variant {
        EtaVariant::Tau => eta_master(2 + prec),
        EtaVariant::TauHalf => eta_master(2 + 2 * prec).halve_exponents().expect("even exponents"),
        EtaVariant::TauPlus1Half => eta_component(EtaVariant::TauHalf, prec).shift_tau(1),
        EtaVariant::TwoTau => eta_master(2 + ceil_half(prec)).substitute_qpower(2).truncate(4 + prec),
    }
}

/// The Weber functions and the normalized triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeberFn {
    F,
    F1,
    F2,
    U0,
    U1,
    U2,
}

/// q-expansion of a Weber function with `prec` relative steps.
pub fn weber_series(which: WeberFn, prec: i64) -> QSeries {
    let eta = eta_component(EtaVariant::Tau, prec);
    let ratio = |num: QSeries| num.div(&eta).expect("eta is invertible");
    let out = match which {
        WeberFn::F => ratio(eta_component(EtaVariant::TauPlus1Half, prec)).scale(&CycloElt::zeta48(-1)),
        WeberFn::F1 => ratio(eta_component(EtaVariant::TauHalf, prec)),
        WeberFn::F2 => ratio(eta_component(EtaVariant::TwoTau, prec)).scale(&CycloElt::sqrt2()),
        WeberFn::U0 => weber_series(WeberFn::F, prec),
        WeberFn::U1 => weber_series(WeberFn::F1, prec).scale(&CycloElt::zeta48(3)),
        WeberFn::U2 => weber_series(WeberFn::F2, prec).scale(&CycloElt::zeta48(-3)),
    };
    let v = out.valuation().unwrap_or(0);
    out.truncate(v + prec)
}

/// sum_{d | n} d^3
fn sigma3(n: i64) -> BigInt {
    let mut s = BigInt::zero();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            s += BigInt::from(d).pow(3);
            if d * d != n {
                s += BigInt::from(n / d).pow(3);
            }
        }
        d += 1;
    }
    s
}

/// j = E4^3 / Delta, computed without reference to the Weber functions.
pub fn j_series(prec: i64) -> QSeries {
    assert!(prec >= 1);
    let nq = (prec + 47) / 48 + 1;
    let mut e4 = vec![(0i64, CycloElt::one())];
    for n in 1..nq {
        e4.push((48 * n, CycloElt::from_bigint(BigInt::from(240) * sigma3(n))));
    }
    let e4 = QSeries::from_terms(e4, 48 * nq);
    // Delta = q prod (1 - q^n)^24 = eta(tau)^24
    let eta = eta_component(EtaVariant::Tau, 48 * nq);
    let delta = eta.pow(24).unwrap();
    let j = e4.pow(3).unwrap().div(&delta).unwrap();
    j.truncate(-48 + prec)
}

/// The invariant coordinate of an invariant line, with `prec` relative steps.
pub fn line_series(line: InvariantLine, prec: i64) -> QSeries {
    use InvariantLine::*;
    let f_power = |k: i64| {
        // relative precision is preserved by powers
        weber_series(WeberFn::F, prec).pow(k).unwrap()
    };
    match line {
        X(n) => f_power(24 / n as i64),
        R => f_power(3),
        T => weber_series(WeberFn::F1, prec).pow(8).unwrap(),
        Y(n) => {
            let q = weber_series(WeberFn::U0, prec).div(&weber_series(WeberFn::U1, prec)).unwrap();
            q.pow(8 / n as i64).unwrap()
        }
        J => j_series(prec),
    }
}

/// Evaluate an exact univariate rational function N(x)/D(x) (integer
/// coefficients, lowest degree first) at a series.
pub fn eval_rational_function(num: &[BigInt], den: &[BigInt], x: &QSeries) -> Result<QSeries> {
    let horner = |c: &[BigInt]| {
        let mut acc = QSeries::zero(EXACT);
        for a in c.iter().rev() {
            acc = acc.mul(x).add(&QSeries::constant(CycloElt::from_bigint(a.clone())));
        }
        acc
    };
    horner(num).div(&horner(den))
}

/// Product of (1 - q^n) for n >= 1, expanded directly (test oracle for the
/// pentagonal series).
pub fn euler_product_direct(nterms: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); nterms];
    c[0] = BigInt::one();
    for n in 1..nterms {
        for k in (n..nterms).rev() {
            let t = c[k - n].clone();
            c[k] -= t;
        }
    }
    c
}

/// Outcome of one exact series identity.
#[derive(Debug, Clone, serde::Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
    /// Residue vanishes below this absolute exponent (units of q^{1/48}).
    pub checked_to: i64,
    /// Half-integral q-steps checked past the leading term of the left side.
    pub terms: i64,
}

fn residue_check(name: &'static str, lhs: &QSeries, rhs: &QSeries) -> IdentityCheck {
    let d = lhs.sub(rhs);
    let lead = lhs.valuation().unwrap_or(0);
    IdentityCheck { name, holds: d.is_zero(), checked_to: d.precision(), terms: (d.precision() - lead) / 24 }
}

/// Check the classical Weber identities with `terms` half-integral steps of q
/// (the natural spacing of f and f1) past the leading term.
pub fn identity_checks(terms: i64) -> Result<Vec<IdentityCheck>> {
    let prec = 24 * terms;
    let f = weber_series(WeberFn::F, prec);
    let f1 = weber_series(WeberFn::F1, prec);
    let f2 = weber_series(WeberFn::F2, prec);
    let sqrt2 = QSeries::constant(CycloElt::sqrt2());
    let mut out = Vec::new();

    let (f8, f18, f28) = (f.pow(8)?, f1.pow(8)?, f2.pow(8)?);
    out.push(residue_check("f^8 = f1^8 + f2^8", &f8, &f18.add(&f28)));
    out.push(residue_check("f f1 f2 = sqrt2", &f.mul(&f1).mul(&f2), &sqrt2));

    let eta = eta_component(EtaVariant::Tau, prec);
    let lhs = eta_component(EtaVariant::TauPlus1Half, prec)
        .mul(&eta_component(EtaVariant::TauHalf, prec))
        .mul(&eta_component(EtaVariant::TwoTau, prec))
        .scale(&CycloElt::zeta48(-1));
    out.push(residue_check("eta triple product", &lhs, &eta.pow(3)?));

    let j = j_series(prec);
    let sixteen = QSeries::constant(CycloElt::from_int(16));
    let rel = |x: &QSeries, c: &QSeries| -> Result<QSeries> {
        let x24 = x.pow(24)?;
        x24.add(c).pow(3)?.div(&x24)
    };
    out.push(residue_check("j from f", &rel(&f, &sixteen.neg())?, &j));
    out.push(residue_check("j from f1", &rel(&f1, &sixteen)?, &j));
    out.push(residue_check("j from f2", &rel(&f2, &sixteen)?, &j));

    let shifted = f.shift_tau(3).pow(8)?.neg();
    out.push(residue_check("f1^8 = -f(tau+3)^8", &f18, &shifted));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_tau_examples() {
        let eta = eta_component(EtaVariant::Tau, 48 * 6);
        let expect = [1, -1, -1, 0, 0, 1];
        for (n, &c) in expect.iter().enumerate() {
            assert_eq!(eta.coeff(2 + 48 * n as i64).unwrap(), CycloElt::from_int(c));
        }
        assert_eq!(eta.valuation(), Some(2));
        let two = eta_component(EtaVariant::TwoTau, 300);
        assert_eq!(two.valuation(), Some(4));
    }

    #[test]
    fn pentagonal_matches_product() {
        let direct = euler_product_direct(200);
        let eta = eta_component(EtaVariant::Tau, 48 * 200);
        for (n, c) in direct.iter().enumerate() {
            assert_eq!(eta.coeff(2 + 48 * n as i64).unwrap(), CycloElt::from_bigint(c.clone()));
        }
    }

    #[test]
    fn plus_one_half_is_shifted_half() {
        let h = eta_component(EtaVariant::TauHalf, 400);
        let s = eta_component(EtaVariant::TauPlus1Half, 400);
        for (e, c) in h.terms() {
            assert_eq!(s.coeff(e).unwrap(), c * &CycloElt::zeta48(e));
        }
        assert!(!s.is_rational());
    }

    #[test]
    fn precision_never_extends() {
        let a = eta_component(EtaVariant::Tau, 100);
        let b = eta_component(EtaVariant::Tau, 50);
        let s = a.add(&b);
        assert_eq!(s.precision(), b.precision());
        let p = a.mul(&b);
        assert_eq!(p.relative_precision(), 50);
        assert!(p.coeff(p.precision()).is_none());
        let i = a.inv().unwrap();
        assert_eq!(i.relative_precision(), 100);
    }

    #[test]
    fn shift_and_substitute_trivial_cases() {
        let f = weber_series(WeberFn::F, 300);
        assert_eq!(f.shift_tau(48), f);
        assert_eq!(f.shift_tau(0), f);
        assert_eq!(f.substitute_qpower(1), f);
        assert_eq!(f.substitute_qpower(7).valuation(), Some(-7));
    }

    #[test]
    fn weber_valuations() {
        assert_eq!(weber_series(WeberFn::F, 100).valuation(), Some(-1));
        assert_eq!(weber_series(WeberFn::F1, 100).valuation(), Some(-1));
        let f2 = weber_series(WeberFn::F2, 100);
        assert_eq!(f2.valuation(), Some(2));
        // coefficients in sqrt(2) Z
        let s = CycloElt::sqrt2();
        for (_, c) in f2.terms() {
            let r = c.div(&s).unwrap();
            assert!(r.is_integral_rational());
        }
        assert!(weber_series(WeberFn::F, 400).is_rational());
    }

    #[test]
    fn j_constant_term() {
        let j = j_series(48 * 5);
        assert_eq!(j.valuation(), Some(-48));
        assert_eq!(j.coeff(0).unwrap(), CycloElt::from_int(744));
        assert_eq!(j.coeff(48).unwrap(), CycloElt::from_int(196884));
    }

    #[test]
    fn identities_short_range() {
        for c in identity_checks(20).unwrap() {
            assert!(c.holds, "{}", c.name);
            assert!(c.checked_to > 0, "{}", c.name);
        }
    }

    #[test]
    fn exact_monomial_inverse() {
        let m = QSeries::monomial(-3, CycloElt::from_int(2));
        let i = m.inv().unwrap();
        assert_eq!(i.valuation(), Some(3));
        assert!(i.precision() >= EXACT);
        assert_eq!(m.mul(&i), QSeries::one());
    }

    #[test]
    fn dump_format() {
        let s = QSeries::from_terms(vec![(-1, CycloElt::one()), (23, CycloElt::zeta48(1))], 40);
        assert_eq!(s.dump(), "-1 1\n23 1*z\n");
    }
}
