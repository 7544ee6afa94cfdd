//! Hecke operators from supersingular graphs, and the integer eigensystem
//! sieve.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{domain, Error, Result};
use crate::linalg::{apply, kernel, mat_mul, primitive, IntMatrix};
use crate::modarith::rank_mod;
use crate::modpoly::InvariantLine;
use crate::ssgraph::SSGraph;

/// Prime used to screen eigenvalue candidates before exact elimination.
const SCREEN_PRIME: u64 = 2_305_843_009_213_693_951;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeOp {
    pub ell: u32,
    /// M[dst][src]
    pub matrix: IntMatrix,
}

impl HeckeOp {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn column_sums(&self) -> Vec<i64> {
        let n = self.dim();
        (0..n).map(|c| (0..n).map(|r| self.matrix[r][c]).sum()).collect()
    }

    /// ones * M == (l + 1) * ones
    pub fn eisenstein_left(&self) -> bool {
        let ones = vec![vec![1i64; self.dim()]];
        mat_mul(&ones, &self.matrix)[0].iter().all(|&x| x == self.ell as i64 + 1)
    }
}

pub fn hecke_matrix(g: &SSGraph) -> HeckeOp {
    HeckeOp { ell: g.ell, matrix: g.adjacency() }
}

pub fn commute_check(a: &HeckeOp, b: &HeckeOp) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(domain!("operators act on spaces of dimension {} and {}", a.dim(), b.dim()));
    }
    Ok(mat_mul(&a.matrix, &b.matrix) == mat_mul(&b.matrix, &a.matrix))
}

#[derive(Debug, Clone)]
pub struct Eigensystem {
    /// (l, a_l) in the order of the operators.
    pub eigenvalues: Vec<(u32, i64)>,
    pub dim: usize,
    pub basis: Vec<Vec<BigRational>>,
}

impl Eigensystem {
    pub fn is_eisenstein(&self) -> bool {
        self.eigenvalues.iter().all(|&(l, a)| a == l as i64 + 1)
    }

    /// a_l^2 <= 4l for every eigenvalue.
    pub fn within_hasse(&self) -> bool {
        self.eigenvalues.iter().all(|&(l, a)| a * a <= 4 * l as i64)
    }

    pub fn eigenvalue(&self, ell: u32) -> Option<i64> {
        self.eigenvalues.iter().find(|e| e.0 == ell).map(|e| e.1)
    }

    pub fn to_json(&self) -> Value {
        let ev: BTreeMap<String, i64> = self.eigenvalues.iter().map(|&(l, a)| (l.to_string(), a)).collect();
        json!({
            "eigenvalues": ev,
            "dim": self.dim,
            "basis": self.basis.iter().map(|v| primitive(v).iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// -floor(2 sqrt l) ..= floor(2 sqrt l), then l + 1.
pub fn candidates(ell: u32) -> Vec<i64> {
    let b = isqrt(4 * ell as i64);
    (-b..=b).chain([ell as i64 + 1]).collect()
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Basis of {B c : (T - a) B c = 0}, with B given by columns.
fn restrict_kernel(op: &HeckeOp, a: i64, basis: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = op.dim();
    let t: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| rat(op.matrix[i][j] - if i == j { a } else { 0 })).collect())
        .collect();
    let images: Vec<Vec<BigRational>> = basis.iter().map(|b| apply(&t, b)).collect();
    // rows of (T - a) B
    let rows: Vec<Vec<BigRational>> = (0..n).map(|i| images.iter().map(|col| col[i].clone()).collect()).collect();
    kernel(&rows, basis.len())
        .into_iter()
        .map(|c| {
            (0..n)
                .map(|i| {
                    basis
                        .iter()
                        .zip(&c)
                        .filter(|(_, ci)| !ci.is_zero())
                        .fold(BigRational::zero(), |s, (b, ci)| s + &b[i] * ci)
                })
                .collect()
        })
        .collect()
}

/// T - a is invertible modulo a large prime, hence over Q.
fn screened_out(op: &HeckeOp, a: i64) -> bool {
    let n = op.dim();
    let p = SCREEN_PRIME;
    let mut rows: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (op.matrix[i][j] - if i == j { a } else { 0 }).rem_euclid(p as i64) as u64)
                .collect()
        })
        .collect();
    rank_mod(&mut rows, n, p) == n
}

fn sieve_rec(ops: &[HeckeOp], k: usize, basis: Vec<Vec<BigRational>>, eigs: Vec<(u32, i64)>, out: &mut Vec<Eigensystem>) {
    if k == ops.len() {
        out.push(Eigensystem { eigenvalues: eigs, dim: basis.len(), basis });
        return;
    }
    for a in candidates(ops[k].ell) {
        let sub = restrict_kernel(&ops[k], a, &basis);
        if !sub.is_empty() {
            let mut e = eigs.clone();
            e.push((ops[k].ell, a));
            sieve_rec(ops, k + 1, sub, e, out);
        }
    }
}

/// All simultaneous integer eigensystems of the commuting operators,
/// with Hasse-bounded candidates plus l + 1.
pub fn eigen_sieve(ops: &[HeckeOp], exclude_eisenstein: bool) -> Result<Vec<Eigensystem>> {
    let Some(first) = ops.first() else {
        return Err(domain!("no operators given"));
    };
    let n = first.dim();
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            if !commute_check(a, b)? {
                return Err(domain!("T_{} and T_{} do not commute", a.ell, b.ell));
            }
        }
    }
    let identity: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| rat((i == j) as i64)).collect()).collect();
    let mut found: Vec<Eigensystem> = candidates(first.ell)
        .into_par_iter()
        .filter(|&a| !screened_out(first, a))
        .flat_map_iter(|a| {
            let sub = restrict_kernel(first, a, &identity);
            let mut out = Vec::new();
            if !sub.is_empty() {
                sieve_rec(ops, 1, sub, vec![(first.ell, a)], &mut out);
            }
            out
        })
        .collect();
    if exclude_eisenstein {
        found.retain(|s| !s.is_eisenstein());
    }
    Ok(found)
}

/// Sign characters mod 24 as bit triples over (chi_-4, chi_8, chi_-3).
pub fn character_mod24(index: u8, ell: u32) -> i64 {
    let chi_m4 = if ell % 4 == 1 { 1 } else { -1 };
    let chi_8 = if ell % 8 == 1 || ell % 8 == 7 { 1 } else { -1 };
    let chi_m3 = if ell % 3 == 1 { 1 } else { -1 };
    let mut v = 1;
    if index & 1 != 0 {
        v *= chi_m4;
    }
    if index & 2 != 0 {
        v *= chi_8;
    }
    if index & 4 != 0 {
        v *= chi_m3;
    }
    v
}

/// Characters chi with b_l = chi(l) a_l for all tested l.
pub fn relating_characters(a: &Eigensystem, b: &Eigensystem) -> Vec<u8> {
    if a.eigenvalues.iter().map(|e| e.0).ne(b.eigenvalues.iter().map(|e| e.0)) {
        return Vec::new();
    }
    (0..8u8)
        .filter(|&c| {
            a.eigenvalues
                .iter()
                .zip(&b.eigenvalues)
                .all(|(&(l, x), &(_, y))| y == character_mod24(c, l) * x)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct TwistOrbit {
    pub members: Vec<usize>,
    /// For each member, the smallest character index relating it to the first.
    pub characters: Vec<u8>,
}

fn find(parent: &mut [usize], i: usize) -> usize {
    if parent[i] != i {
        let r = find(parent, parent[i]);
        parent[i] = r;
    }
    parent[i]
}

/// Group eigensystems that differ by a quadratic character mod 24.
pub fn twist_orbits(systems: &[Eigensystem], line: InvariantLine) -> Result<Vec<TwistOrbit>> {
    if line.fiber_order() <= 1 {
        return Err(domain!("line {line} has no nontrivial fiber action"));
    }
    let n = systems.len();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if !relating_characters(&systems[i], &systems[j]).is_empty() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[b.max(a)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut orbits = Vec::new();
    for members in groups.into_values() {
        if ![1, 2, 4].contains(&members.len()) {
            return Err(Error::AmbiguousOrbit(format!("orbit of size {} among {:?}", members.len(), members)));
        }
        let base = &systems[members[0]];
        let mut characters = Vec::new();
        for &m in &members {
            match relating_characters(base, &systems[m]).first() {
                Some(&c) => characters.push(c),
                None => {
                    return Err(Error::AmbiguousOrbit(format!(
                        "members {} and {m} are linked only through intermediate twists",
                        members[0]
                    )))
                }
            }
        }
        orbits.push(TwistOrbit { members, characters });
    }
    Ok(orbits)
}

/// Consistency report over one graph family.
#[derive(Debug, Clone)]
pub struct HeckeReport {
    pub p: u64,
    pub line: InvariantLine,
    pub nodes: usize,
    pub ells: Vec<u32>,
    pub column_sums_ok: bool,
    pub commute_ok: bool,
    pub eisenstein_ok: bool,
    pub hasse_ok: bool,
    pub systems: Vec<Eigensystem>,
    pub orbits: Option<Vec<TwistOrbit>>,
    pub orbit_error: Option<String>,
}

impl HeckeReport {
    pub fn consistent(&self) -> bool {
        self.column_sums_ok && self.commute_ok && self.eisenstein_ok && self.hasse_ok
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "line": self.line.name(),
            "nodes": self.nodes,
            "ells": self.ells,
            "column_sums_ok": self.column_sums_ok,
            "commute_ok": self.commute_ok,
            "eisenstein_ok": self.eisenstein_ok,
            "hasse_ok": self.hasse_ok,
            "count": self.systems.len(),
            "total_dim": self.systems.iter().map(|s| s.dim).sum::<usize>(),
            "systems": self.systems.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            "orbit_grouping": "quadratic characters mod 24",
            "orbits": self.orbits.as_ref().map(|o| o.iter().map(|t| json!({"members": t.members, "characters": t.characters})).collect::<Vec<_>>()),
            "orbit_count": self.orbits.as_ref().map(|o| o.len()),
            "orbit_error": self.orbit_error,
        })
    }
}

/// Default tested primes: the first `count` primes outside {2, 3, p}.
pub fn default_ells(p: u64, count: usize) -> Vec<u32> {
    (5u32..)
        .filter(|&l| crate::modarith::is_prime(l as u64) && l as u64 != p)
        .take(count)
        .collect()
}

pub fn analyze(graphs: &[SSGraph]) -> Result<HeckeReport> {
    let g0 = graphs.first().ok_or_else(|| domain!("no graphs given"))?;
    let ops: Vec<HeckeOp> = graphs.iter().map(hecke_matrix).collect();
    let column_sums_ok = ops.iter().all(|o| o.column_sums().iter().all(|&c| c == o.ell as i64 + 1));
    let eisenstein_ok = ops.iter().all(|o| o.eisenstein_left());
    let mut commute_ok = true;
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            commute_ok &= commute_check(a, b)?;
        }
    }
    let systems = if commute_ok { eigen_sieve(&ops, true)? } else { Vec::new() };
    let hasse_ok = systems.iter().all(|s| s.within_hasse());
    let (orbits, orbit_error) = if g0.line.fiber_order() > 1 {
        match twist_orbits(&systems, g0.line) {
            Ok(o) => (Some(o), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    Ok(HeckeReport {
        p: g0.field.p(),
        line: g0.line,
        nodes: g0.nodes.len(),
        ells: ops.iter().map(|o| o.ell).collect(),
        column_sums_ok,
        commute_ok,
        eisenstein_ok,
        hasse_ok,
        systems,
        orbits,
        orbit_error,
    })
}

/// Entries of an eigenvector as integers (primitive scaling).
pub fn integer_vector(v: &[BigRational]) -> Vec<i64> {
    primitive(v).iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::ssgraph::build_graph;

    fn ops(p: u64, line: InvariantLine, ells: &[u32]) -> Vec<HeckeOp> {
        let f = make_field(p).unwrap();
        ells.iter().map(|&l| hecke_matrix(&build_graph(f, line, l).unwrap())).collect()
    }

    #[test]
    fn p13_trivial_module() {
        let o = ops(13, InvariantLine::J, &[2]);
        assert_eq!(o[0].matrix, vec![vec![3]]);
        let s = eigen_sieve(&o, false).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].is_eisenstein());
        assert!(eigen_sieve(&o, true).unwrap().is_empty());
    }

    #[test]
    fn p37_two_cusp_forms() {
        let o = ops(37, InvariantLine::J, &[2, 3, 5]);
        assert_eq!(o[0].dim(), 3);
        assert!(o.iter().all(|x| x.column_sums().iter().all(|&c| c == x.ell as i64 + 1)));
        assert!(commute_check(&o[0], &o[1]).unwrap());
        let s = eigen_sieve(&o, true).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|e| e.dim == 1 && e.within_hasse()));
        // the two weight-2 newforms of level 37: a_2 in {-2, 0}
        let mut a2: Vec<i64> = s.iter().map(|e| e.eigenvalue(2).unwrap()).collect();
        a2.sort();
        assert_eq!(a2, vec![-2, 0]);
    }

    #[test]
    fn corrupted_matrix_detected() {
        let mut o = ops(37, InvariantLine::J, &[2, 3]);
        assert!(commute_check(&o[0], &o[1]).unwrap());
        o[1].matrix[0][1] += 1;
        o[1].matrix[1][1] -= 1;
        assert!(!commute_check(&o[0], &o[1]).unwrap());
        assert!(eigen_sieve(&o, true).is_err());
        let short = HeckeOp { ell: 5, matrix: vec![vec![6]] };
        assert!(commute_check(&o[0], &short).is_err());
    }

    #[test]
    fn characters() {
        // 8 distinct sign patterns on {5, 7, 11, 13}
        let pats: std::collections::BTreeSet<Vec<i64>> =
            (0..8).map(|c| [5, 7, 11, 13].iter().map(|&l| character_mod24(c, l)).collect()).collect();
        assert_eq!(pats.len(), 8);
        let mk = |e: &[(u32, i64)]| Eigensystem { eigenvalues: e.to_vec(), dim: 1, basis: vec![] };
        let a = mk(&[(5, 2), (7, -2), (11, 4)]);
        let b = mk(&[(5, -2), (7, 2), (11, 4)]);
        let rel = relating_characters(&a, &b);
        assert!(!rel.is_empty());
        for &c in &rel {
            assert_eq!(character_mod24(c, 5), -1);
            assert_eq!(character_mod24(c, 7), -1);
            assert_eq!(character_mod24(c, 11), 1);
        }
        let orbits = twist_orbits(&[a.clone(), a.clone()], InvariantLine::X(12)).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].characters, vec![0, 0]);
        assert_eq!(twist_orbits(&[a.clone(), b], InvariantLine::X(12)).unwrap().len(), 1);
        assert!(twist_orbits(&vec![a.clone(); 3], InvariantLine::X(12)).is_err());
        assert!(twist_orbits(&[a], InvariantLine::X(1)).is_err());
    }

    #[test]
    fn commuting_on_x1() {
        let o = ops(37, InvariantLine::X(1), &[5, 7]);
        assert!(commute_check(&o[0], &o[1]).unwrap());
        assert!(o.iter().all(|x| x.eisenstein_left()));
    }
}
