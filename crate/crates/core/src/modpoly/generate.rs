//! Modular polynomials from q-expansions.
//!
//! The unknown coefficients c_ij of sum c_ij u^i v^j = 0 are found as the
//! kernel of the linear system given by the q-expansion coefficients. The
//! system is solved modulo primes p = 1 (mod 48), once per embedding
//! zeta_48 -> w^k, and the exact coefficients are recovered by CRT and
//! rational reconstruction. Monomials whose products have exponents in
//! different residue classes modulo the common stride never interact, so
//! each class is an independent system.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::{BiPoly, InvariantLine};
use crate::error::{domain, Error, Result};
use crate::exactnum::{CycloElt, DEG};
use crate::modarith::{
    add_mod, crt_step, is_prime, mul_mod, nullspace_mod, pow_mod, primes_one_mod, rational_reconstruct,
    root_of_unity_mod, solve_mod,
};
use crate::qseries::{line_series, QSeries};
use crate::util::gcd_i64;

const UNITS_48: [i64; 16] = [1, 5, 7, 11, 13, 17, 19, 23, 25, 29, 31, 35, 37, 41, 43, 47];

/// Whether (line, l) needs the minimal-box search; errors for unsupported pairs.
fn descended(line: InvariantLine, ell: u32) -> Result<bool> {
    if !is_prime(ell as u64) {
        return Err(domain!("l = {ell} is not prime"));
    }
    if ell >= 5 || line == InvariantLine::J {
        return Ok(false);
    }
    match (line, ell) {
        (InvariantLine::T, 2) | (InvariantLine::R, 3) | (InvariantLine::X(24), 2) | (InvariantLine::X(24), 3) => {
            Ok(true)
        }
        _ => Err(domain!(
            "l = {ell} divides the level of line {line}; use the t-line (l=2), r-line (l=3) or x24"
        )),
    }
}

fn line_valuation(line: InvariantLine) -> i64 {
    match line {
        InvariantLine::X(n) => -24 / n as i64,
        InvariantLine::Y(_) => 0,
        InvariantLine::T => -8,
        InvariantLine::R => -3,
        InvariantLine::J => -48,
    }
}

/// Pole span of a box of size d, in q^{1/48} steps.
fn span(line: InvariantLine, ell: u32, d: u32) -> i64 {
    let l = ell as i64;
    match line {
        InvariantLine::Y(_) => d as i64 * (1 + l) * 48,
        _ => d as i64 * line_valuation(line).abs() * (1 + l),
    }
}

/// Default verification precision: 2 * span + 96 steps past the lowest
/// valuation, with the box at l+1.
pub fn default_precision(line: InvariantLine, ell: u32) -> i64 {
    2 * span(line, ell, ell + 1) + 96
}

/// (u(q), second argument) with `rel` relative steps each.
///
/// On x24 at l = 2 the second argument is f(2 tau - 3); every other pair
/// uses u(q^l).
pub fn pair_series(line: InvariantLine, ell: u32, rel: i64) -> Result<(QSeries, QSeries)> {
    descended(line, ell)?;
    let u = line_series(line, rel);
    let v = if line == InvariantLine::X(24) && ell == 2 {
        u.shift_tau(-3).substitute_qpower(2)
    } else {
        u.substitute_qpower(ell as i64)
    };
    Ok((u, v))
}

/// Result of an exact vanishing check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub vanishes: bool,
    /// Exponent (in q^{1/48}) and coefficient of the first surviving term.
    pub first_nonzero: Option<(i64, CycloElt)>,
    /// All exponents below this were checked.
    pub checked_to: i64,
}

/// Evaluate `poly` at (u(q), v(q)) exactly, `prec` steps past the lowest
/// monomial valuation.
pub fn verify(poly: &BiPoly, line: InvariantLine, ell: u32, prec: i64) -> Result<VerifyReport> {
    let (u, v) = pair_series(line, ell, prec)?;
    let vu = u.valuation().unwrap_or(0);
    let vv = v.valuation().unwrap_or(0);
    let emin = poly
        .terms()
        .map(|(&(i, j), _)| i as i64 * vu + j as i64 * vv)
        .min()
        .unwrap_or(0);
    let checked_to = emin + prec;
    let r = poly.eval_series(&u, &v)?.truncate(checked_to);
    let first = r.terms().next().map(|(e, c)| (e, c.clone()));
    Ok(VerifyReport { vanishes: first.is_none(), first_nonzero: first, checked_to })
}

/// Exact inputs to the modular solver.
struct Setup {
    u: QSeries,
    v: QSeries,
    vu: i64,
    vv: i64,
    g: i64,
    cyclotomic: bool,
}

impl Setup {
    fn new(line: InvariantLine, ell: u32, rel: i64) -> Result<Self> {
        let (u, v) = pair_series(line, ell, rel)?;
        let vu = u.valuation().ok_or_else(|| Error::Internal("zero line series".into()))?;
        let vv = v.valuation().ok_or_else(|| Error::Internal("zero line series".into()))?;
        let g = gcd_i64(u.stride(), v.stride());
        let cyclotomic = !(u.is_rational() && v.is_rational());
        Ok(Setup { u, v, vu, vv, g, cyclotomic })
    }

    fn val(&self, (i, j): (u32, u32)) -> i64 {
        i as i64 * self.vu + j as i64 * self.vv
    }

    fn class(&self, m: (u32, u32)) -> i64 {
        self.val(m).rem_euclid(self.g)
    }
}

/// Dense truncation: entry k is the coefficient of q^{(val + k g)/48}.
fn reduce_dense(s: &QSeries, g: i64, len: usize, p: u64, pows: &[u64; DEG]) -> Result<Option<Vec<u64>>> {
    let val = s.valuation().unwrap_or(0);
    if s.precision() < val + len as i64 * g {
        return Err(Error::Internal("series precision too small for reduction".into()));
    }
    let mut out = vec![0u64; len];
    for (e, c) in s.terms() {
        let k = (e - val) / g;
        if k as usize >= len {
            break;
        }
        debug_assert_eq!((e - val) % g, 0);
        match c.eval_mod(p, pows) {
            Some(x) => out[k as usize] = x,
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Truncated product of dense series modulo p (p < 2^62).
fn mul_trunc(a: &[u64], b: &[u64], len: usize, p: u64) -> Vec<u64> {
    let bn: Vec<(usize, u64)> = b.iter().copied().enumerate().filter(|&(j, x)| x != 0 && j < len).collect();
    let mut acc = vec![0u128; len];
    for (n, &(j, bj)) in bn.iter().enumerate() {
        for k in j..len.min(a.len() + j) {
            acc[k] += a[k - j] as u128 * bj as u128;
        }
        if n % 8 == 7 {
            for x in acc.iter_mut() {
                *x %= p as u128;
            }
        }
    }
    acc.into_iter().map(|x| (x % p as u128) as u64).collect()
}

fn omega_powers(w: u64, k: i64, p: u64) -> [u64; DEG] {
    let wk = pow_mod(w, k as u64, p);
    let mut out = [1u64; DEG];
    for i in 1..DEG {
        out[i] = mul_mod(out[i - 1], wk, p);
    }
    out
}

/// Dense powers of u and v modulo p under one embedding.
struct ModPowers {
    u: Vec<Vec<u64>>,
    v: Vec<Vec<u64>>,
    len: usize,
}

impl ModPowers {
    fn new(s: &Setup, dx: u32, dy: u32, rel: i64, p: u64, pows: &[u64; DEG]) -> Result<Option<Self>> {
        let len = ((rel + s.g - 1) / s.g) as usize;
        let Some(u1) = reduce_dense(&s.u, s.g, len, p, pows)? else { return Ok(None) };
        let Some(v1) = reduce_dense(&s.v, s.g, len, p, pows)? else { return Ok(None) };
        let mut one = vec![0u64; len];
        one[0] = 1;
        let mut u = vec![one.clone()];
        for i in 1..=dx as usize {
            u.push(mul_trunc(&u[i - 1], &u1, len, p));
        }
        let mut v = vec![one];
        for j in 1..=dy as usize {
            v.push(mul_trunc(&v[j - 1], &v1, len, p));
        }
        Ok(Some(ModPowers { u, v, len }))
    }

    /// Kernel of the system restricted to the monomials `cols` (one class).
    fn class_kernel(&self, s: &Setup, cols: &[(u32, u32)], p: u64) -> Vec<Vec<u64>> {
        let e0 = cols.iter().map(|&m| s.val(m)).min().unwrap_or(0);
        let mut rows = vec![vec![0u64; cols.len()]; self.len];
        for (c, &(i, j)) in cols.iter().enumerate() {
            let prod = mul_trunc(&self.u[i as usize], &self.v[j as usize], self.len, p);
            let shift = ((s.val((i, j)) - e0) / s.g) as usize;
            for (k, &x) in prod.iter().enumerate() {
                if shift + k >= self.len {
                    break;
                }
                rows[shift + k][c] = x;
            }
        }
        nullspace_mod(&mut rows, cols.len(), p)
    }

    /// Whether sum c_ij u^i v^j vanishes to the available precision.
    fn vanishes(&self, s: &Setup, terms: &[((u32, u32), u64)], p: u64) -> bool {
        let e0 = terms.iter().map(|&(m, _)| s.val(m)).min().unwrap_or(0);
        let mut by_class: BTreeMap<i64, Vec<u64>> = BTreeMap::new();
        for &((i, j), c) in terms {
            let shift = ((s.val((i, j)) - e0).div_euclid(s.g)) as usize;
            let class = s.class((i, j));
            let acc = by_class.entry(class).or_insert_with(|| vec![0u64; self.len]);
            let prod = mul_trunc(&self.u[i as usize], &self.v[j as usize], self.len, p);
            for (k, &x) in prod.iter().enumerate() {
                if shift + k >= self.len {
                    break;
                }
                acc[shift + k] = add_mod(acc[shift + k], mul_mod(c, x, p), p);
            }
        }
        by_class.values().all(|v| v.iter().all(|&x| x == 0))
    }
}

fn leading_key(m: (u32, u32)) -> (u32, std::cmp::Reverse<u32>) {
    (m.0, std::cmp::Reverse(m.1))
}

/// Monomials of the box [0, d]^2, optionally restricted by the congruence
/// i + l j = l + 1 (mod 24).
fn box_monomials(d: u32, ell: u32, sparse: bool) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for i in 0..=d {
        for j in 0..=d {
            if !sparse || (i + ell * j) % 24 == (ell + 1) % 24 {
                out.push((i, j));
            }
        }
    }
    out
}

fn group_by_class(s: &Setup, monos: &[(u32, u32)]) -> BTreeMap<i64, Vec<(u32, u32)>> {
    let mut m: BTreeMap<i64, Vec<(u32, u32)>> = BTreeMap::new();
    for &mono in monos {
        m.entry(s.class(mono)).or_default().push(mono);
    }
    m
}

fn working_precision(line: InvariantLine, ell: u32, d: u32, max_class: usize, g: i64) -> i64 {
    let a = 2 * span(line, ell, d) + 96;
    let b = 2 * (max_class as i64 + 8) * g;
    let r = a.max(b);
    (r + g - 1) / g * g
}

/// Stride gcd of a (line, l) pair, from a short expansion.
fn pair_stride(line: InvariantLine, ell: u32) -> Result<i64> {
    let s = Setup::new(line, ell, 200)?;
    Ok(s.g)
}

/// Outcome of probing one box with one prime.
enum Probe {
    Empty,
    Unique { class: i64 },
    Ambiguous,
}

fn probe(s: &Setup, classes: &BTreeMap<i64, Vec<(u32, u32)>>, d: u32, rel: i64) -> Result<Probe> {
    for p in primes_one_mod(48).skip(7) {
        let w = root_of_unity_mod(48, p).expect("p = 1 mod 48");
        let pows = omega_powers(w, 1, p);
        let Some(mp) = ModPowers::new(s, d, d, rel, p, &pows)? else { continue };
        let dims: Vec<(i64, usize)> = classes
            .par_iter()
            .map(|(&c, cols)| (c, mp.class_kernel(s, cols, p).len()))
            .collect();
        let total: usize = dims.iter().map(|x| x.1).sum();
        return Ok(match total {
            0 => Probe::Empty,
            1 => Probe::Unique { class: dims.iter().find(|x| x.1 == 1).unwrap().0 },
            _ => Probe::Ambiguous,
        });
    }
    unreachable!("prime stream exhausted")
}

/// Generate the modular polynomial of prime level l on `line`, normalized so
/// the leading monomial (largest x-degree, then smallest y-degree) has
/// coefficient 1. On x24 with `use_sparsity` (and l prime to 6) only
/// monomials with i + l j = l + 1 (mod 24) are admitted.
pub fn generate(line: InvariantLine, ell: u32, use_sparsity: bool) -> Result<BiPoly> {
    let desc = descended(line, ell)?;
    let sparse = use_sparsity && line.sparsity_modulus().is_some() && ell >= 5;
    let boxes: Vec<u32> = if desc { (1..=8 * (ell + 1)).collect() } else { vec![ell + 1] };
    let g = pair_stride(line, ell)?;
    for d in boxes {
        let monos = box_monomials(d, ell, sparse);
        let mut rel = {
            let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
            for &m in &monos {
                let val = m.0 as i64 * line_valuation(line) + m.1 as i64 * ell as i64 * line_valuation(line);
                *counts.entry(val.rem_euclid(g)).or_default() += 1;
            }
            working_precision(line, ell, d, counts.values().copied().max().unwrap_or(0), g)
        };
        let mut tries = 0;
        loop {
            tries += 1;
            if tries > 3 {
                return Err(Error::Ambiguity(format!(
                    "kernel for {line}, l={ell}, box {d} stays degenerate after raising precision to {rel}"
                )));
            }
            let s = Setup::new(line, ell, 2 * rel)?;
            let classes = group_by_class(&s, &monos);
            match probe(&s, &classes, d, rel)? {
                Probe::Empty if desc => break,
                Probe::Empty => {
                    return Err(Error::Consistency(format!("no relation for {line}, l={ell} in box {d}")));
                }
                Probe::Ambiguous => {
                    rel *= 2;
                    continue;
                }
                Probe::Unique { class } => match solve(&s, &classes[&class], d, rel)? {
                    Some(poly) => return Ok(poly),
                    None => {
                        rel *= 2;
                        continue;
                    }
                },
            }
        }
    }
    Err(Error::Consistency(format!("no relation for {line}, l={ell} in any box")))
}

/// Multimodular solve of one class system. `None` when the modular
/// post-check at doubled precision fails.
fn solve(s: &Setup, cols: &[(u32, u32)], d: u32, rel: i64) -> Result<Option<BiPoly>> {
    let ks: Vec<i64> = if s.cyclotomic { UNITS_48.to_vec() } else { vec![1] };
    let m = cols.len();
    let mut acc: Vec<[BigInt; DEG]> = vec![std::array::from_fn(|_| BigInt::from(0)); m];
    let mut modulus = BigInt::from(1);
    let mut lead: Option<usize> = None;
    let mut prev: Option<Vec<CycloElt>> = None;
    let mut bad = 0;
    let mut primes = primes_one_mod(48);
    let result = loop {
        let p = primes.next().expect("prime stream exhausted");
        let w = root_of_unity_mod(48, p).expect("p = 1 mod 48");
        let per_embedding: Vec<Option<Vec<u64>>> = ks
            .par_iter()
            .map(|&k| -> Result<Option<Vec<u64>>> {
                let pows = omega_powers(w, k, p);
                let Some(mp) = ModPowers::new(s, d, d, rel, p, &pows)? else { return Ok(None) };
                let ker = mp.class_kernel(s, cols, p);
                Ok(if ker.len() == 1 { Some(ker.into_iter().next().unwrap()) } else { None })
            })
            .collect::<Result<_>>()?;
        if per_embedding.iter().any(|x| x.is_none()) {
            bad += 1;
            if bad > 6 {
                return Err(Error::Ambiguity("kernel dimension differs from 1 at many primes".into()));
            }
            continue;
        }
        let vecs: Vec<Vec<u64>> = per_embedding.into_iter().map(|x| x.unwrap()).collect();
        let li = *lead.get_or_insert_with(|| {
            (0..m).filter(|&c| vecs[0][c] != 0).max_by_key(|&c| leading_key(cols[c])).unwrap()
        });
        if vecs.iter().any(|v| v[li] == 0) {
            bad += 1;
            continue;
        }
        let normed: Vec<Vec<u64>> = vecs
            .iter()
            .map(|v| {
                let inv = crate::modarith::inv_mod(v[li], p).unwrap();
                v.iter().map(|&x| mul_mod(x, inv, p)).collect()
            })
            .collect();
        // coordinates in the power basis
        let vander: Vec<Vec<u64>> = ks.iter().map(|&k| omega_powers(w, k, p).to_vec()).collect();
        for c in 0..m {
            let coords: Vec<u64> = if s.cyclotomic {
                let y: Vec<u64> = normed.iter().map(|v| v[c]).collect();
                solve_mod(&vander, &y, p).expect("Vandermonde on distinct nodes")
            } else {
                let mut v = vec![0u64; DEG];
                v[0] = normed[0][c];
                v
            };
            for (slot, &r) in acc[c].iter_mut().zip(&coords) {
                *slot = crt_step(slot, &modulus, r, p);
            }
        }
        modulus *= BigInt::from(p);
        let recon: Option<Vec<CycloElt>> = acc
            .iter()
            .map(|coords| {
                let qs: Option<Vec<BigRational>> = coords
                    .iter()
                    .map(|a| rational_reconstruct(a, &modulus).map(|(n, d)| BigRational::new(n, d)))
                    .collect();
                qs.map(|q| CycloElt::from_coeffs(&q))
            })
            .collect();
        if let Some(r) = recon {
            if prev.as_ref() == Some(&r) {
                break r;
            }
            prev = Some(r);
        } else {
            prev = None;
        }
    };
    let poly = BiPoly::from_terms(cols.iter().copied().zip(result)).normalized()?;
    // fresh prime, doubled precision
    let p = primes.nth(3).expect("prime stream exhausted");
    let w = root_of_unity_mod(48, p).expect("p = 1 mod 48");
    for &k in &ks {
        let pows = omega_powers(w, k, p);
        let Some(mp) = ModPowers::new(s, d, d, 2 * rel, p, &pows)? else { continue };
        let terms: Option<Vec<((u32, u32), u64)>> =
            poly.terms().map(|(&mono, c)| c.eval_mod(p, &pows).map(|x| (mono, x))).collect();
        let Some(terms) = terms else { continue };
        if !mp.vanishes(s, &terms, p) {
            return Ok(None);
        }
        if !s.cyclotomic {
            break;
        }
    }
    Ok(Some(poly))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modpoly::builtin;

    #[test]
    fn mul_trunc_matches_naive() {
        let p = 1_000_000_007;
        let a = vec![1, 2, 3, 0, 5];
        let b = vec![0, 7, 0, 11, 13];
        let out = mul_trunc(&a, &b, 5, p);
        let mut naive = vec![0u64; 5];
        for i in 0..5 {
            for j in 0..5 {
                if i + j < 5 {
                    naive[i + j] = (naive[i + j] + a[i] * b[j]) % p;
                }
            }
        }
        assert_eq!(out, naive);
    }

    #[test]
    fn phi5_generation_and_verification() {
        let g = generate(InvariantLine::X(24), 5, true).unwrap();
        assert_eq!(g, builtin("phi5").unwrap());
        let r = verify(&g, InvariantLine::X(24), 5, default_precision(InvariantLine::X(24), 5)).unwrap();
        assert!(r.vanishes);
    }

    #[test]
    fn perturbed_polynomial_fails_verification() {
        let mut p = builtin("phi5").unwrap();
        p.add_term(1, 1, &CycloElt::one());
        let r = verify(&p, InvariantLine::X(24), 5, default_precision(InvariantLine::X(24), 5)).unwrap();
        assert!(!r.vanishes);
        assert!(r.first_nonzero.is_some());
    }

    #[test]
    fn psi2_on_t_line() {
        assert_eq!(generate(InvariantLine::T, 2, false).unwrap(), builtin("psi2").unwrap());
    }

    #[test]
    fn unsupported_pairs_are_rejected() {
        assert!(generate(InvariantLine::X(1), 2, false).is_err());
        assert!(generate(InvariantLine::X(24), 4, false).is_err());
    }
}
