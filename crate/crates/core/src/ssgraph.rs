//! Supersingular isogeny graphs over F_{p^2} on the invariant lines.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{domain, Error, Result};
use crate::gf::{roots, GF2Elt, GF2Field, GFPoly};
use crate::modarith::bigint_mod;
use crate::modpoly::{builtin, memo_generate, BiPoly, InvariantLine};

/// floor(p/12) + (0, 1, 1, 2) for p = 1, 5, 7, 11 mod 12.
pub fn ss_count_formula(p: u64) -> usize {
    let eps = match p % 12 {
        1 => 0,
        5 | 7 => 1,
        11 => 2,
        _ => 0,
    };
    (p / 12) as usize + eps
}

fn require_p(f: &GF2Field) -> Result<()> {
    if f.p() < 5 {
        return Err(domain!("characteristic {} is below 5", f.p()));
    }
    Ok(())
}

fn lift(f: GF2Field, c: &BigInt) -> GF2Elt {
    f.from_i64(bigint_mod(c, f.p()) as i64)
}

/// Supersingular j from the roots of sum_i C(m,i)^2 x^i, m = (p-1)/2.
pub fn hasse_ss_j(f: GF2Field) -> Result<Vec<GF2Elt>> {
    require_p(&f)?;
    let m = (f.p() - 1) / 2;
    let mut coeffs = Vec::with_capacity(m as usize + 1);
    let mut binom = f.one();
    for i in 0..=m {
        coeffs.push(binom * binom);
        // C(m, i+1) = C(m, i) (m - i) / (i + 1)
        binom = binom * f.from_i64((m - i) as i64) / f.from_i64(i as i64 + 1);
    }
    let k = |n: i64| f.from_i64(n);
    let js: BTreeSet<GF2Elt> = roots(&f.poly(coeffs))
        .into_iter()
        .map(|(l, _)| {
            let a = l * l - l + f.one();
            k(256) * a * a * a / (l * l * (l - f.one()) * (l - f.one()))
        })
        .collect();
    Ok(js.into_iter().collect())
}

/// Bivariate polynomial with coefficients mapped into F_{p^2}.
#[derive(Debug, Clone)]
pub struct FieldBiPoly {
    pub terms: Vec<((u32, u32), GF2Elt)>,
    pub deg_y: u32,
    pub field: GF2Field,
}

impl FieldBiPoly {
    pub fn from_bipoly(f: GF2Field, poly: &BiPoly) -> Result<Self> {
        let emb = f.cyclo_embedding()?;
        let terms = poly
            .terms()
            .map(|(&k, c)| Ok((k, emb.map(c)?)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(FieldBiPoly { terms, deg_y: poly.degree_y(), field: f })
    }

    /// Phi(u, Y) as a polynomial in Y.
    pub fn specialize_x(&self, u: GF2Elt) -> GFPoly {
        let f = self.field;
        let mut c = vec![f.zero(); self.deg_y as usize + 1];
        for &((i, j), a) in &self.terms {
            c[j as usize] += a * u.pow(i as u64);
        }
        f.poly(c)
    }

    pub fn eval(&self, x: GF2Elt, y: GF2Elt) -> GF2Elt {
        self.terms
            .iter()
            .fold(self.field.zero(), |acc, &((i, j), a)| acc + a * x.pow(i as u64) * y.pow(j as u64))
    }
}

/// Closure of {start} under Phi_2-neighbours.
pub fn ss_j_bfs(f: GF2Field, start: GF2Elt) -> Result<Vec<GF2Elt>> {
    let phi2 = FieldBiPoly::from_bipoly(f, &builtin("phi2_j")?)?;
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(j) = queue.pop_front() {
        for (n, _) in roots(&phi2.specialize_x(j)) {
            if seen.insert(n) {
                queue.push_back(n);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// All supersingular j in F_{p^2}, sorted, cross-checked against a
/// Phi_2 closure and the class-number count.
pub fn ss_j_enumerate(f: GF2Field) -> Result<Vec<GF2Elt>> {
    let js = hasse_ss_j(f)?;
    let bfs = ss_j_bfs(f, js[0])?;
    if bfs != js || js.len() != ss_count_formula(f.p()) {
        return Err(Error::Internal(format!(
            "supersingular enumeration disagrees at p = {}: hasse {}, bfs {}, formula {}",
            f.p(),
            js.len(),
            bfs.len(),
            ss_count_formula(f.p())
        )));
    }
    Ok(js)
}

/// Numerator of J_line(x) - j0 in F_{p^2}[x].
pub fn fiber_polynomial(f: GF2Field, line: InvariantLine, j0: GF2Elt) -> GFPoly {
    let (num, den) = line.j_relation();
    let n = num.len().max(den.len());
    let c = (0..n)
        .map(|i| {
            let a = num.get(i).map(|c| lift(f, c)).unwrap_or(f.zero());
            let b = den.get(i).map(|c| lift(f, c)).unwrap_or(f.zero());
            a - j0 * b
        })
        .collect();
    f.poly(c)
}

/// Points of the line above j0 with multiplicity.
pub fn nodes_above(f: GF2Field, line: InvariantLine, j0: GF2Elt) -> Vec<(GF2Elt, u32)> {
    roots(&fiber_polynomial(f, line, j0))
}

#[derive(Debug, Clone)]
pub struct SSGraph {
    pub field: GF2Field,
    pub line: InvariantLine,
    pub ell: u32,
    /// (value, multiplicity weight), sorted by value.
    pub nodes: Vec<(GF2Elt, u32)>,
    /// (src, dst, multiplicity), sorted.
    pub edges: Vec<(usize, usize, u32)>,
    /// deg_y of the polynomial used for the edges.
    pub degree: u32,
}

impl SSGraph {
    pub fn index_of(&self, u: GF2Elt) -> Option<usize> {
        self.nodes.binary_search_by(|(v, _)| v.cmp(&u)).ok()
    }

    pub fn out_degrees(&self) -> Vec<u32> {
        let mut d = vec![0; self.nodes.len()];
        for &(s, _, m) in &self.edges {
            d[s] += m;
        }
        d
    }

    /// Adjacency matrix with M[dst][src] = multiplicity.
    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        let n = self.nodes.len();
        let mut m = vec![vec![0i64; n]; n];
        for &(s, d, k) in &self.edges {
            m[d][s] += k as i64;
        }
        m
    }

    pub fn to_json(&self) -> Value {
        let nodes: Vec<Value> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, (v, m))| json!({"id": i, "value": v.encode(), "mult": m}))
            .collect();
        json!({
            "p": self.field.p(),
            "d": self.field.d(),
            "line": self.line.name(),
            "ell": self.ell,
            "nodes": nodes,
            "edges": self.edges.iter().map(|&(s, d, m)| json!([s, d, m])).collect::<Vec<_>>(),
        })
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph \"{}_{}_p{}\" {{\n", self.line.name(), self.ell, self.field.p());
        for (i, (v, m)) in self.nodes.iter().enumerate() {
            let label = if *m > 1 { format!("{} (x{m})", v.encode()) } else { v.encode() };
            out.push_str(&format!("  n{i} [label=\"{label}\"];\n"));
        }
        for &(s, d, m) in &self.edges {
            out.push_str(&format!("  n{s} -> n{d} [label=\"{m}\"];\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Polynomial carrying the edges of the (line, l) graph.
pub fn edge_polynomial(line: InvariantLine, ell: u32) -> Result<std::sync::Arc<BiPoly>> {
    memo_generate(line, ell)
}

pub fn build_graph(f: GF2Field, line: InvariantLine, ell: u32) -> Result<SSGraph> {
    let poly = edge_polynomial(line, ell)?;
    build_graph_with(f, line, ell, &poly)
}

pub fn build_graph_with(f: GF2Field, line: InvariantLine, ell: u32, poly: &BiPoly) -> Result<SSGraph> {
    if ell as u64 == f.p() {
        return Err(domain!("l = {ell} equals the characteristic"));
    }
    let js = ss_j_enumerate(f)?;
    let mut nodes: Vec<(GF2Elt, u32)> = js.iter().flat_map(|&j| nodes_above(f, line, j)).collect();
    nodes.sort();
    if nodes.is_empty() {
        return Err(Error::Internal("empty node set".into()));
    }
    let phi = FieldBiPoly::from_bipoly(f, poly)?;
    let mut g = SSGraph { field: f, line, ell, nodes, edges: Vec::new(), degree: phi.deg_y };
    let rows: Vec<Result<Vec<(usize, usize, u32)>>> = (0..g.nodes.len())
        .into_par_iter()
        .map(|s| {
            roots(&phi.specialize_x(g.nodes[s].0))
                .into_iter()
                .map(|(v, m)| {
                    let d = g.index_of(v).ok_or_else(|| {
                        Error::Internal(format!("neighbour {v} of {} is not supersingular", g.nodes[s].0))
                    })?;
                    Ok((s, d, m))
                })
                .collect()
        })
        .collect();
    for r in rows {
        g.edges.extend(r?);
    }
    Ok(g)
}

/// Result of a non-backtracking walk.
#[derive(Debug, Clone)]
pub struct Walk {
    pub path: Vec<GF2Elt>,
    /// Some step had no continuation other than going back.
    pub dead_end: bool,
    /// Every consecutive pair re-checked against Phi.
    pub verified: bool,
}

pub fn walk(f: GF2Field, line: InvariantLine, ell: u32, u0: GF2Elt, length: usize, seed: u64) -> Result<Walk> {
    let poly = edge_polynomial(line, ell)?;
    let phi = FieldBiPoly::from_bipoly(f, &poly)?;
    walk_with(&phi, u0, length, seed)
}

pub fn walk_with(phi: &FieldBiPoly, u0: GF2Elt, length: usize, seed: u64) -> Result<Walk> {
    if length == 0 {
        return Err(domain!("walk length must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut path = vec![u0];
    let mut dead_end = false;
    for _ in 0..length {
        let cur = *path.last().unwrap();
        let prev = (path.len() >= 2).then(|| path[path.len() - 2]);
        let rs: Vec<GF2Elt> = roots(&phi.specialize_x(cur)).into_iter().map(|r| r.0).collect();
        if rs.is_empty() {
            dead_end = true;
            break;
        }
        let fresh: Vec<GF2Elt> = rs.iter().copied().filter(|&r| Some(r) != prev).collect();
        let choices = if fresh.is_empty() {
            dead_end = true;
            &rs
        } else {
            &fresh
        };
        path.push(choices[rng.gen_range(0..choices.len())]);
    }
    let verified = path.windows(2).all(|w| phi.eval(w[0], w[1]).is_zero());
    Ok(Walk { path, dead_end, verified })
}

/// Splitting of (x^24 - 16)^3 - j0 x^24 over F_{p^2} for one j0.
#[derive(Debug, Clone)]
pub struct SplitEntry {
    pub j0: GF2Elt,
    /// total multiplicity of roots found in F_{p^2}
    pub roots: u32,
    pub distinct: usize,
    /// multiplicity -> number of roots with it
    pub pattern: BTreeMap<u32, usize>,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct SplitReport {
    pub p: u64,
    pub entries: Vec<SplitEntry>,
    pub violations: usize,
}

/// Expected multiplicity pattern above j0.
fn expected_pattern(f: GF2Field, j0: GF2Elt) -> BTreeMap<u32, usize> {
    if j0.is_zero() {
        BTreeMap::from([(3, 24)])
    } else if j0 == f.from_i64(1728) {
        // (w - 64)(w + 8)^2 with w = x^24
        BTreeMap::from([(1, 24), (2, 24)])
    } else {
        BTreeMap::from([(1, 72)])
    }
}

pub fn split_check(f: GF2Field) -> Result<SplitReport> {
    let js = ss_j_enumerate(f)?;
    let entries: Vec<SplitEntry> = js
        .par_iter()
        .map(|&j0| {
            let rs = nodes_above(f, InvariantLine::X(24), j0);
            let mut pattern = BTreeMap::new();
            for &(_, m) in &rs {
                *pattern.entry(m).or_insert(0) += 1;
            }
            let total = rs.iter().map(|r| r.1).sum();
            let ok = total == 72 && pattern == expected_pattern(f, j0);
            SplitEntry { j0, roots: total, distinct: rs.len(), pattern, ok }
        })
        .collect();
    let violations = entries.iter().filter(|e| !e.ok).count();
    Ok(SplitReport { p: f.p(), entries, violations })
}

impl SplitReport {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "violations": self.violations,
            "entries": self.entries.iter().map(|e| json!({
                "j0": e.j0.encode(),
                "roots": e.roots,
                "distinct": e.distinct,
                "pattern": e.pattern.iter().map(|(m, c)| json!({"mult": m, "count": c})).collect::<Vec<_>>(),
                "ok": e.ok,
            })).collect::<Vec<_>>(),
        })
    }
}
