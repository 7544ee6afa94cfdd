//! The 3x3 monomial representation of PSL2(Z) on Weber triples
//! (u0, u1, u2) acting on row vectors, its finite image G and diagonal
//! subgroup D, plus a matrix identity in SL2(Z/16).

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exactnum::CycloElt;

/// Bound on the closure size; exceeding it means an arithmetic bug.
pub const CLOSURE_BOUND: usize = 4096;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycMat3(pub [[CycloElt; 3]; 3]);

impl CycMat3 {
    pub fn identity() -> Self {
        Self::diag([CycloElt::one(), CycloElt::one(), CycloElt::one()])
    }

    pub fn diag(d: [CycloElt; 3]) -> Self {
        let z = CycloElt::zero;
        let [a, b, c] = d;
        CycMat3([[a, z(), z()], [z(), b, z()], [z(), z(), c]])
    }

    pub fn scalar(c: CycloElt) -> Self {
        Self::diag([c.clone(), c.clone(), c])
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out: [[CycloElt; 3]; 3] = Default::default();
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let mut acc = CycloElt::zero();
                for k in 0..3 {
                    if !self.0[i][k].is_zero() && !o.0[k][j].is_zero() {
                        acc.add_product(&self.0[i][k], &o.0[k][j]);
                    }
                }
                *e = acc;
            }
        }
        CycMat3(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| acc.mul(self))
    }

    /// Inverse of a monomial matrix.
    pub fn inv_monomial(&self) -> Result<Self> {
        let perm = self.permutation().ok_or_else(|| domain!("matrix is not monomial"))?;
        let mut out: [[CycloElt; 3]; 3] = Default::default();
        for (i, &j) in perm.iter().enumerate() {
            out[j][i] = self.0[i][j].inv()?;
        }
        Ok(CycMat3(out))
    }

    /// sigma with entry (i, sigma(i)) the only nonzero one in row i.
    pub fn permutation(&self) -> Option<[usize; 3]> {
        let mut perm = [0usize; 3];
        let mut seen = [false; 3];
        for (i, row) in self.0.iter().enumerate() {
            let nz: Vec<usize> = (0..3).filter(|&j| !row[j].is_zero()).collect();
            if nz.len() != 1 || seen[nz[0]] {
                return None;
            }
            seen[nz[0]] = true;
            perm[i] = nz[0];
        }
        Some(perm)
    }

    pub fn is_diagonal(&self) -> bool {
        self.permutation() == Some([0, 1, 2])
    }

    pub fn is_scalar(&self) -> bool {
        self.is_diagonal() && self.0[0][0] == self.0[1][1] && self.0[1][1] == self.0[2][2]
    }

    /// Nonzero entries, one per row, scaled to a permutation matrix.
    pub fn is_permutation_matrix(&self) -> bool {
        self.permutation().is_some_and(|p| (0..3).all(|i| self.0[i][p[i]].is_one()))
    }
}

impl fmt::Debug for CycMat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.0 {
            writeln!(f, "[{}, {}, {}]", row[0], row[1], row[2])?;
        }
        Ok(())
    }
}

fn z24(k: i64) -> CycloElt {
    CycloElt::zeta48(2 * k)
}

fn z8(k: i64) -> CycloElt {
    CycloElt::zeta48(6 * k)
}

pub fn iota_s() -> CycMat3 {
    let z = CycloElt::zero;
    CycMat3([[CycloElt::one(), z(), z()], [z(), z(), z8(-1)], [z(), z8(1), z()]])
}

pub fn iota_t() -> CycMat3 {
    let z = CycloElt::zero;
    CycMat3([[z(), z24(1), z()], [z24(-2), z(), z()], [z(), z(), z24(1)]])
}

/// Product over a word in S, T and their inverses s, t.
pub fn iota_word(word: &str) -> Result<CycMat3> {
    let (s, t) = (iota_s(), iota_t());
    let (si, ti) = (s.inv_monomial()?, t.inv_monomial()?);
    word.chars().try_fold(CycMat3::identity(), |acc, ch| {
        let g = match ch {
            'S' => &s,
            'T' => &t,
            's' => &si,
            't' => &ti,
            _ => return Err(domain!("bad symbol '{ch}' in word (expected S, T, s, t)")),
        };
        Ok(acc.mul(g))
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupReport {
    pub order_g: usize,
    pub order_d: usize,
    pub all_monomial: bool,
    pub d_abelian: bool,
    /// D equals the subgroup generated by iota(T)^2 and iota(STS)^2.
    pub d_generated: bool,
    /// G -> S3 is onto with kernel D.
    pub quotient_s3: bool,
    /// Permutations of U = T^-1 S T, V = T^-2 S T^2, W = S T^3.
    pub coset_permutations: Vec<[usize; 3]>,
    pub coset_reps_are_permutations: bool,
    pub s_squared_identity: bool,
    pub st_cubed_scalar: bool,
    pub t16_zeta3_inverse: bool,
    pub sts16_zeta3_inverse: bool,
}

impl GroupReport {
    pub fn ok(&self) -> bool {
        self.order_g == 1152
            && self.order_d == 192
            && self.all_monomial
            && self.d_abelian
            && self.d_generated
            && self.quotient_s3
            && self.coset_permutations == vec![[2, 1, 0], [0, 2, 1], [1, 2, 0]]
            && self.coset_reps_are_permutations
            && self.s_squared_identity
            && self.st_cubed_scalar
            && self.t16_zeta3_inverse
            && self.sts16_zeta3_inverse
    }
}

/// Breadth-first closure of the generated group, in discovery order.
pub fn closure(gens: &[CycMat3], bound: usize) -> Result<Vec<CycMat3>> {
    let mut index: HashMap<CycMat3, usize> = HashMap::new();
    let mut elems = vec![CycMat3::identity()];
    index.insert(CycMat3::identity(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let h = elems[i].mul(g);
            if !index.contains_key(&h) {
                if elems.len() >= bound {
                    return Err(Error::Divergence(format!("closure exceeds {bound} elements")));
                }
                index.insert(h.clone(), elems.len());
                queue.push_back(elems.len());
                elems.push(h);
            }
        }
    }
    Ok(elems)
}

pub fn group_closure() -> Result<GroupReport> {
    let g = closure(&[iota_s(), iota_t()], CLOSURE_BOUND)?;
    let d: Vec<&CycMat3> = g.iter().filter(|m| m.is_diagonal()).collect();
    let all_monomial = g.iter().all(|m| m.permutation().is_some());
    let d_abelian = d.iter().all(|a| d.iter().all(|b| a.mul(b) == b.mul(a)));
    let gen_d = closure(&[iota_word("TT")?, iota_word("STSSTS")?], CLOSURE_BOUND)?;
    let d_generated = gen_d.len() == d.len() && gen_d.iter().all(|m| m.is_diagonal());
    let perms: std::collections::BTreeSet<[usize; 3]> = g.iter().filter_map(|m| m.permutation()).collect();
    let compose = |a: [usize; 3], b: [usize; 3]| [b[a[0]], b[a[1]], b[a[2]]];
    let hom = {
        let (s, t) = (iota_s(), iota_t());
        g.iter().all(|m| {
            let p = m.permutation().unwrap_or([0, 0, 0]);
            [&s, &t].iter().all(|x| m.mul(x).permutation() == Some(compose(p, x.permutation().unwrap())))
        })
    };
    let quotient_s3 = perms.len() == 6 && hom && g.len() == 6 * d.len();
    let reps = ["tST", "ttSTT", "STTT"].map(|w| iota_word(w).unwrap());
    let zeta3_inv = CycMat3::scalar(CycloElt::zeta48(-16));
    Ok(GroupReport {
        order_g: g.len(),
        order_d: d.len(),
        all_monomial,
        d_abelian,
        d_generated,
        quotient_s3,
        coset_permutations: reps.iter().map(|m| m.permutation().unwrap_or([0, 0, 0])).collect(),
        coset_reps_are_permutations: reps.iter().all(|m| m.is_permutation_matrix()),
        s_squared_identity: iota_word("SS")? == CycMat3::identity(),
        st_cubed_scalar: iota_word("STSTST")?.is_scalar(),
        t16_zeta3_inverse: iota_t().pow(16) == zeta3_inv,
        sts16_zeta3_inverse: iota_word("STS")?.pow(16) == zeta3_inv,
    })
}

/// 2x2 matrix over Z/m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SL2Mod {
    pub m: [[i64; 2]; 2],
    pub modulus: i64,
}

impl SL2Mod {
    pub fn new(m: [[i64; 2]; 2], modulus: i64) -> Self {
        let r = |x: i64| x.rem_euclid(modulus);
        SL2Mod { m: [[r(m[0][0]), r(m[0][1])], [r(m[1][0]), r(m[1][1])]], modulus }
    }

    pub fn det(&self) -> i64 {
        (self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]).rem_euclid(self.modulus)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = &self.m;
        let b = &o.m;
        Self::new(
            [
                [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
                [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
            ],
            self.modulus,
        )
    }

    /// Adjugate, the inverse when det = 1.
    pub fn inv(&self) -> Self {
        let a = &self.m;
        Self::new([[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]], self.modulus)
    }

    pub fn reduce(&self, modulus: i64) -> Self {
        Self::new(self.m, modulus)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Sl2Report {
    pub commutator: SL2Mod,
    pub matches: bool,
    pub square_is_nine: bool,
    pub mod8_is_five: bool,
}

/// T^2 U^2 T^-2 U^-2 with U = S T S^-1 in SL2(Z/16).
pub fn sl2_identity_check() -> Sl2Report {
    let s = SL2Mod::new([[0, -1], [1, 0]], 16);
    let t = SL2Mod::new([[1, 1], [0, 1]], 16);
    let u = s.mul(&t).mul(&s.inv());
    let (t2, u2) = (t.mul(&t), u.mul(&u));
    let c = t2.mul(&u2).mul(&t2.inv()).mul(&u2.inv());
    let target = SL2Mod::new([[13, 8], [8, 5]], 16);
    Sl2Report {
        commutator: c,
        matches: c == target,
        square_is_nine: c.mul(&c) == SL2Mod::new([[9, 0], [0, 9]], 16),
        mod8_is_five: c.reduce(8) == SL2Mod::new([[5, 0], [0, 5]], 8),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_relations() {
        assert_eq!(iota_word("SS").unwrap(), CycMat3::identity());
        assert_eq!(iota_word("Ss").unwrap(), CycMat3::identity());
        assert_eq!(iota_word("tT").unwrap(), CycMat3::identity());
        assert_eq!(iota_word("TT").unwrap(), CycMat3::diag([z24(-1), z24(-1), z24(2)]));
        assert_eq!(iota_word("STSSTS").unwrap(), CycMat3::diag([z24(-1), z24(2), z24(-1)]));
        assert_eq!(iota_t().pow(16), CycMat3::scalar(CycloElt::zeta48(-16)));
        assert!(iota_word("STSTST").unwrap().is_scalar());
        assert!(iota_word("SxT").is_err());
    }

    #[test]
    fn row_action_matches_generators() {
        // (u0, u1, u2) o S = (u0, z8 u2, z8^-1 u1)
        let s = iota_s();
        assert_eq!(s.0[2][1], z8(1));
        assert_eq!(s.0[1][2], z8(-1));
        // (u0, u1, u2) o T = (z12^-1 u1, z24 u0, z24 u2)
        let t = iota_t();
        assert_eq!(t.0[1][0], CycloElt::zeta48(-4));
        assert_eq!(t.0[0][1], z24(1));
    }

    #[test]
    fn closure_orders() {
        let r = group_closure().unwrap();
        assert_eq!(r.order_g, 1152);
        assert_eq!(r.order_d, 192);
        assert!(r.ok(), "{r:?}");
    }

    #[test]
    fn divergence_guard() {
        assert!(matches!(closure(&[iota_s(), iota_t()], 100), Err(Error::Divergence(_))));
    }

    #[test]
    fn sl2_identity() {
        let r = sl2_identity_check();
        assert!(r.matches && r.square_is_nine && r.mod8_is_five, "{r:?}");
        assert_eq!(r.commutator.det(), 1);
    }
}
