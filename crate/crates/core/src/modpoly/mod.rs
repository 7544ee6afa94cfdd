//! Invariant lines, sparse bivariate polynomials, and modular polynomials
//! generated from q-expansions.

mod builtin;
mod generate;
mod io;

pub use builtin::{builtin, BUILTIN_NAMES};
pub use generate::{default_precision, generate, pair_series, verify, VerifyReport};
pub use io::{load_or_generate, memo_generate, read_poly_file, write_atomic, CacheOutcome};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{domain, Error, Result};
use crate::exactnum::CycloElt;
use crate::qseries::QSeries;

/// A genus-0 modular curve together with its coordinate function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InvariantLine {
    /// f^{24/n}, n | 24
    X(u8),
    /// (u0/u1)^{8/n}, n | 8
    Y(u8),
    /// f1^8
    T,
    /// f^3
    R,
    J,
}

impl InvariantLine {
    pub fn all() -> Vec<InvariantLine> {
        use InvariantLine::*;
        let mut v: Vec<_> = [1, 2, 3, 4, 6, 8, 12, 24].into_iter().map(X).collect();
        v.extend([T, R]);
        v.extend([1, 2, 4, 8].into_iter().map(Y));
        v.push(J);
        v
    }

    pub fn name(&self) -> String {
        match self {
            InvariantLine::X(n) => format!("x{n}"),
            InvariantLine::Y(n) => format!("y{n}"),
            InvariantLine::T => "t".into(),
            InvariantLine::R => "r".into(),
            InvariantLine::J => "j".into(),
        }
    }

    /// Degree of the map to the j-line.
    pub fn cover_degree(&self) -> u32 {
        match *self {
            InvariantLine::X(n) => 3 * n as u32,
            InvariantLine::Y(n) => 6 * n as u32,
            InvariantLine::T => 9,
            InvariantLine::R => 24,
            InvariantLine::J => 1,
        }
    }

    /// Order of the group of roots of unity x -> zeta x preserving the j-map.
    pub fn fiber_order(&self) -> u32 {
        match *self {
            InvariantLine::X(n) | InvariantLine::Y(n) => n as u32,
            InvariantLine::T => 3,
            InvariantLine::R => 8,
            InvariantLine::J => 1,
        }
    }

    pub fn sparsity_modulus(&self) -> Option<u32> {
        (*self == InvariantLine::X(24)).then_some(24)
    }

    /// j as N(x)/D(x); integer coefficients, constant term first.
    pub fn j_relation(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        fn poly(terms: &[(usize, i64)]) -> Vec<BigInt> {
            let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
            let mut v = vec![BigInt::zero(); deg + 1];
            for &(e, c) in terms {
                v[e] += BigInt::from(c);
            }
            v
        }
        fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
            let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    out[i + j] += x * y;
                }
            }
            out
        }
        let cube = |p: &[BigInt]| mul(&mul(p, p), p);
        match *self {
            InvariantLine::X(n) => {
                let n = n as usize;
                (cube(&poly(&[(n, 1), (0, -16)])), poly(&[(n, 1)]))
            }
            InvariantLine::Y(n) => {
                let n = n as usize;
                let num = cube(&poly(&[(2 * n, 1), (n, 1), (0, 1)]))
                    .into_iter()
                    .map(|c| c * 256)
                    .collect();
                let s1 = poly(&[(n, 1), (0, 1)]);
                let den = mul(&poly(&[(2 * n, 1)]), &mul(&s1, &s1));
                (num, den)
            }
            InvariantLine::T => (cube(&poly(&[(3, 1), (0, 16)])), poly(&[(3, 1)])),
            InvariantLine::R => (cube(&poly(&[(8, 1), (0, -16)])), poly(&[(8, 1)])),
            InvariantLine::J => (poly(&[(1, 1)]), poly(&[(0, 1)])),
        }
    }
}

impl fmt::Display for InvariantLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for InvariantLine {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let parsed = match s.as_str() {
            "t" => Some(InvariantLine::T),
            "r" => Some(InvariantLine::R),
            "j" => Some(InvariantLine::J),
            "f" => Some(InvariantLine::X(24)),
            _ => {
                let (head, tail) = s.split_at(1.min(s.len()));
                match (head, tail.parse::<u8>()) {
                    ("x", Ok(n)) if 24 % n == 0 && n > 0 => Some(InvariantLine::X(n)),
                    ("y", Ok(n)) if 8 % n == 0 && n > 0 => Some(InvariantLine::Y(n)),
                    _ => None,
                }
            }
        };
        parsed.ok_or_else(|| domain!("unregistered invariant line '{s}'"))
    }
}

/// Sparse bivariate polynomial over Q(zeta_48); no zero coefficients stored.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), CycloElt>,
}

impl BiPoly {
    pub fn new() -> Self {
        Self::default()
    }

    /// From integer (i, j, c) triples.
    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Self {
        let mut p = Self::new();
        for &(i, j, c) in terms {
            p.add_term(i, j, &CycloElt::from_int(c));
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), CycloElt)>) -> Self {
        let mut p = Self::new();
        for ((i, j), c) in terms {
            p.add_term(i, j, &c);
        }
        p
    }

    /// Add c to the coefficient of x^i y^j.
    pub fn add_term(&mut self, i: u32, j: u32, c: &CycloElt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(CycloElt::zero);
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> CycloElt {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(CycloElt::zero)
    }

    /// Terms in increasing (i, j) order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &CycloElt)> {
        self.terms.iter()
    }

    /// Number of nonzero coefficients.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.is_rational())
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integral_rational())
    }

    /// Monomial with the largest x-degree, ties broken by smallest y-degree.
    pub fn leading_monomial(&self) -> Option<(u32, u32)> {
        self.terms.keys().copied().max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
    }

    /// Scale so the leading monomial has coefficient 1.
    pub fn normalized(&self) -> Result<Self> {
        let Some(m) = self.leading_monomial() else {
            return Ok(self.clone());
        };
        let inv = self.terms[&m].inv()?;
        Ok(self.scale(&inv))
    }

    pub fn scale(&self, c: &CycloElt) -> Self {
        Self::from_terms(self.terms.iter().map(|(&k, v)| (k, v * c)))
    }

    pub fn neg(&self) -> Self {
        self.scale(&CycloElt::from_int(-1))
    }

    /// Phi(y, x).
    pub fn transpose(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), v)| ((j, i), v.clone())))
    }

    /// Phi(a x, b y).
    pub fn scale_vars(&self, a: &CycloElt, b: &CycloElt) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), v)| {
            let f = &a.pow(i as i64).expect("nonnegative power") * &b.pow(j as i64).expect("nonnegative power");
            ((i, j), v * &f)
        }))
    }

    /// Phi(x^kx, y^ky).
    pub fn compose_powers(&self, kx: u32, ky: u32) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), v)| ((i * kx, j * ky), v.clone())))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, &(-c));
        }
        out
    }

    /// Sum of c * u^i v^j, each power computed once.
    pub fn eval_series(&self, u: &QSeries, v: &QSeries) -> Result<QSeries> {
        let pu = powers(u, self.degree_x())?;
        let pv = powers(v, self.degree_y())?;
        let mut acc: Option<QSeries> = None;
        for (&(i, j), c) in &self.terms {
            let t = pu[i as usize].mul(&pv[j as usize]).scale(c);
            acc = Some(match acc {
                None => t,
                Some(a) => a.add(&t),
            });
        }
        Ok(acc.unwrap_or_else(|| QSeries::zero(crate::qseries::EXACT)))
    }

    /// Bit-exact text form with the standard header.
    pub fn to_text(&self, line: InvariantLine, ell: u32) -> String {
        let mut s = format!("# line={} ell={} norm=monic-x\n", line.name(), ell);
        for (&(i, j), c) in &self.terms {
            s.push_str(&format!("{i} {j} {c}\n"));
        }
        s
    }

    /// Parse the text form; returns the header fields and the polynomial.
    pub fn from_text(text: &str) -> Result<(InvariantLine, u32, BiPoly)> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| domain!("empty polynomial file"))?;
        let rest = header
            .strip_prefix("# ")
            .ok_or_else(|| domain!("missing polynomial header"))?;
        let mut line = None;
        let mut ell = None;
        for field in rest.split_whitespace() {
            match field.split_once('=') {
                Some(("line", v)) => line = Some(v.parse::<InvariantLine>()?),
                Some(("ell", v)) => ell = Some(v.parse::<u32>().map_err(|e| domain!("bad ell: {e}"))?),
                Some(("norm", "monic-x")) => {}
                _ => return Err(domain!("unexpected header field '{field}'")),
            }
        }
        let (line, ell) = match (line, ell) {
            (Some(l), Some(e)) => (l, e),
            _ => return Err(domain!("incomplete header")),
        };
        let mut poly = BiPoly::new();
        let mut last: Option<(u32, u32)> = None;
        for row in lines.filter(|r| !r.trim().is_empty()) {
            let mut parts = row.splitn(3, ' ');
            let (Some(i), Some(j), Some(c)) = (parts.next(), parts.next(), parts.next()) else {
                return Err(domain!("malformed row '{row}'"));
            };
            let i: u32 = i.parse().map_err(|_| domain!("bad exponent in '{row}'"))?;
            let j: u32 = j.parse().map_err(|_| domain!("bad exponent in '{row}'"))?;
            if last.is_some_and(|l| l >= (i, j)) {
                return Err(domain!("rows not strictly sorted at '{row}'"));
            }
            last = Some((i, j));
            let c: CycloElt = c.parse()?;
            if c.is_zero() {
                return Err(domain!("stored zero coefficient at '{row}'"));
            }
            poly.add_term(i, j, &c);
        }
        Ok((line, ell, poly))
    }
}

/// [1, s, s^2, ..., s^n]
pub(crate) fn powers(s: &QSeries, n: u32) -> Result<Vec<QSeries>> {
    let mut out = vec![QSeries::one()];
    for k in 1..=n as usize {
        out.push(out[k - 1].mul(s));
    }
    Ok(out)
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mono = match (i, j) {
                (0, 0) => String::new(),
                (i, 0) => format!("x^{i}"),
                (0, j) => format!("y^{j}"),
                (i, j) => format!("x^{i}*y^{j}"),
            };
            if mono.is_empty() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "({c})*{mono}")?;
            }
        }
        Ok(())
    }
}

/// The congruence i + l j = l + 1 (mod 24) for every monomial.
pub fn check_sparsity(poly: &BiPoly, ell: u32) -> bool {
    let target = (ell + 1) % 24;
    poly.terms().all(|(&(i, j), _)| (i as u64 + ell as u64 * j as u64) % 24 == target as u64)
}

/// Exact check of Phi(z x, z^l y) = z^{l+1} Phi(x, y) with z a primitive
/// 24th root of unity.
pub fn check_transform(poly: &BiPoly, ell: u32) -> bool {
    let z = CycloElt::zeta48(2);
    let zl = CycloElt::zeta48(2 * ell as i64);
    let lhs = poly.scale_vars(&z, &zl);
    let rhs = poly.scale(&CycloElt::zeta48(2 * (ell as i64 + 1)));
    lhs == rhs
}

/// Phi(x, y) == Phi(y, x).
pub fn is_symmetric(poly: &BiPoly) -> bool {
    poly.transpose() == *poly
}

/// Integer coefficients as BigInt, if the polynomial is integral.
pub fn integer_coefficients(poly: &BiPoly) -> Option<BTreeMap<(u32, u32), BigInt>> {
    poly.terms()
        .map(|(&k, c)| {
            if c.is_integral_rational() {
                Some((k, c.to_rational().unwrap().numer().clone()))
            } else {
                None
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_names_roundtrip() {
        for l in InvariantLine::all() {
            assert_eq!(l.name().parse::<InvariantLine>().unwrap(), l);
        }
        assert!("x5".parse::<InvariantLine>().is_err());
        assert!("y3".parse::<InvariantLine>().is_err());
        assert!("q".parse::<InvariantLine>().is_err());
    }

    #[test]
    fn cover_degrees_match_relation_degrees() {
        for l in InvariantLine::all() {
            let (n, d) = l.j_relation();
            let deg = (n.len() - 1).max(d.len() - 1);
            assert_eq!(deg as u32, l.cover_degree(), "{l}");
        }
    }

    #[test]
    fn sparsity_examples() {
        let phi5 = builtin("phi5").unwrap();
        assert!(check_sparsity(&phi5, 5));
        assert!(check_transform(&phi5, 5));
        let mut bad = phi5.clone();
        bad.add_term(2, 3, &CycloElt::one());
        assert!(!check_sparsity(&bad, 5));
        assert!(!check_transform(&bad, 5));
        assert!(check_transform(&builtin("phi11").unwrap(), 11));
    }

    #[test]
    fn text_roundtrip_with_cyclotomic_coefficient() {
        let mut p = BiPoly::from_int_terms(&[(3, 0, 1), (1, 1, -7), (0, 3, 1)]);
        p.add_term(2, 0, &"1/2 + 3*z^5".parse().unwrap());
        let txt = p.to_text(InvariantLine::Y(2), 5);
        let (line, ell, q) = BiPoly::from_text(&txt).unwrap();
        assert_eq!((line, ell), (InvariantLine::Y(2), 5));
        assert_eq!(q, p);
        assert_eq!(q.to_text(line, ell), txt);
    }

    #[test]
    fn text_rejects_unsorted_rows() {
        let txt = "# line=x24 ell=5 norm=monic-x\n6 0 1\n0 6 1\n";
        assert!(BiPoly::from_text(txt).is_err());
    }

    #[test]
    fn leading_monomial_order() {
        let p = BiPoly::from_int_terms(&[(2, 1, 1), (0, 2, -1), (1, 0, 16)]);
        assert_eq!(p.leading_monomial(), Some((2, 1)));
        let q = BiPoly::from_int_terms(&[(16, 8, 3), (16, 9, 1)]);
        assert_eq!(q.leading_monomial(), Some((16, 8)));
    }
}
