//! Weber curves W_n in P^3, Fermat curves F_n in P^2 and the isomorphisms
//! between them for n | 8.
//!
//! W_n:    X0^n + X1^n + X2^n = 48 X3^n,  X0 X1 X2 = sqrt(8)^(8/n) X3^3
//! W_3n:   X0^n + X1^n + X2^n = 0,        X0 X1 X2 = sqrt(2)^(8/n) X3^3
//! F_n:    X^n + Y^n + Z^n = 0

use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::gf::{roots_flat, GF2Elt, GF2Field};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjPoint(pub Vec<GF2Elt>);

impl ProjPoint {
    pub fn new(coords: Vec<GF2Elt>) -> Result<Self> {
        if coords.is_empty() || coords.iter().all(|c| c.is_zero()) {
            return Err(domain!("projective point with all coordinates zero"));
        }
        Ok(ProjPoint(coords))
    }

    pub fn coords(&self) -> &[GF2Elt] {
        &self.0
    }

    /// Equality up to a nonzero scalar.
    pub fn proj_eq(&self, other: &ProjPoint) -> bool {
        let (a, b) = (&self.0, &other.0);
        a.len() == b.len()
            && (0..a.len()).all(|i| (0..a.len()).all(|j| a[i] * b[j] == a[j] * b[i]))
    }

    /// Scaled so that the last nonzero coordinate is 1.
    pub fn normalized(&self) -> ProjPoint {
        let piv = *self.0.iter().rev().find(|c| !c.is_zero()).expect("nonzero point");
        ProjPoint(self.0.iter().map(|&c| c / piv).collect())
    }

    pub fn encode(&self) -> Vec<String> {
        self.0.iter().map(|c| c.encode()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Weber,
    Weber3n,
    Fermat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelSpec {
    pub n: u32,
    pub kind: ModelKind,
}

fn check_n(n: u32) -> Result<()> {
    if matches!(n, 1 | 2 | 4 | 8) {
        Ok(())
    } else {
        Err(domain!("model degree n = {n} must divide 8"))
    }
}

/// sqrt(2) with the canonical sign of the field.
pub fn sqrt2(f: GF2Field) -> GF2Elt {
    f.from_i64(2).sqrt().expect("every element of F_p is a square in F_{p^2}")
}

/// sqrt(8) = 2 sqrt(2).
pub fn sqrt8(f: GF2Field) -> GF2Elt {
    f.from_i64(2) * sqrt2(f)
}

impl ModelSpec {
    pub fn weber(n: u32) -> Result<Self> {
        check_n(n)?;
        Ok(ModelSpec { n, kind: ModelKind::Weber })
    }

    pub fn weber3n(n: u32) -> Result<Self> {
        check_n(n)?;
        Ok(ModelSpec { n, kind: ModelKind::Weber3n })
    }

    pub fn fermat(n: u32) -> Result<Self> {
        check_n(n)?;
        Ok(ModelSpec { n, kind: ModelKind::Fermat })
    }

    pub fn arity(&self) -> usize {
        match self.kind {
            ModelKind::Fermat => 3,
            _ => 4,
        }
    }

    /// c in X0 X1 X2 = c X3^3.
    pub fn product_constant(&self, f: GF2Field) -> GF2Elt {
        let m = (8 / self.n) as u64;
        match self.kind {
            ModelKind::Weber => sqrt8(f).pow(m),
            ModelKind::Weber3n => sqrt2(f).pow(m),
            ModelKind::Fermat => f.zero(),
        }
    }

    /// Values of the defining equations at P.
    pub fn equations(&self, p: &ProjPoint) -> Result<Vec<GF2Elt>> {
        let x = p.coords();
        if x.len() != self.arity() {
            return Err(domain!("expected {} coordinates, got {}", self.arity(), x.len()));
        }
        let f = x[0].field();
        let n = self.n as u64;
        let sum = x[0].pow(n) + x[1].pow(n) + x[2].pow(n);
        Ok(match self.kind {
            ModelKind::Fermat => vec![sum],
            ModelKind::Weber | ModelKind::Weber3n => {
                let rhs = if self.kind == ModelKind::Weber { f.from_i64(48) * x[3].pow(n) } else { f.zero() };
                let c = self.product_constant(f);
                vec![sum - rhs, x[0] * x[1] * x[2] - c * x[3].pow(3)]
            }
        })
    }

    pub fn contains(&self, p: &ProjPoint) -> Result<bool> {
        Ok(self.equations(p)?.iter().all(|e| e.is_zero()))
    }

    /// Random point, with last coordinate 1 (Weber) or Z = 1 (Fermat).
    pub fn random_point<R: Rng>(&self, f: GF2Field, rng: &mut R) -> ProjPoint {
        let n = self.n as usize;
        let q = f.p() * f.p();
        loop {
            let x0 = f.from_index(rng.gen_range(0..q));
            let one = f.one();
            let (coeffs, finish): (Vec<GF2Elt>, Box<dyn Fn(GF2Elt) -> Option<Vec<GF2Elt>>>) = match self.kind {
                ModelKind::Fermat => {
                    // X^n = -(x0^n + 1)
                    let mut c = vec![f.zero(); n + 1];
                    c[0] = x0.pow(n as u64) + one;
                    c[n] = one;
                    (c, Box::new(move |r| Some(vec![r, x0, one])))
                }
                ModelKind::Weber | ModelKind::Weber3n => {
                    if x0.is_zero() {
                        continue;
                    }
                    // X1 X2 = P, X1^n + X2^n = S
                    let big_p = self.product_constant(f) / x0;
                    let rhs = if self.kind == ModelKind::Weber { f.from_i64(48) } else { f.zero() };
                    let s = rhs - x0.pow(n as u64);
                    let mut c = vec![f.zero(); 2 * n + 1];
                    c[0] = big_p.pow(n as u64);
                    c[n] = -s;
                    c[2 * n] = one;
                    (c, Box::new(move |r: GF2Elt| (!r.is_zero()).then(|| vec![x0, r, big_p / r, one])))
                }
            };
            let rs = roots_flat(&f.poly(coeffs));
            if rs.is_empty() {
                continue;
            }
            if let Some(pt) = finish(rs[rng.gen_range(0..rs.len())]) {
                return ProjPoint(pt);
            }
        }
    }
}

/// F_n -> W_n: (k s0^3 : k s1^3 : k s2^3 : s0 s1 s2), k^n = 16.
pub fn fermat_to_weber(n: u32, p: &ProjPoint) -> Result<ProjPoint> {
    let spec = ModelSpec::fermat(n)?;
    if !spec.contains(p)? {
        return Err(domain!("point is not on F_{n}"));
    }
    let s = p.coords();
    let f = s[0].field();
    let k = match n {
        8 => sqrt2(f),
        4 => f.from_i64(2),
        2 => f.from_i64(4),
        _ => f.from_i64(16),
    };
    let cube = |x: GF2Elt| k * x * x * x;
    ProjPoint::new(vec![cube(s[0]), cube(s[1]), cube(s[2]), s[0] * s[1] * s[2]])
}

/// The three chart expressions for W_2 -> F_2.
pub fn weber2_charts(u: &[GF2Elt]) -> [[GF2Elt; 3]; 3] {
    let f = u[0].field();
    let (four, sixteen) = (f.from_i64(4), f.from_i64(16));
    let (u0, u1, u2, u3) = (u[0], u[1], u[2], u[3]);
    [
        [-u0 * u0 + sixteen * u3 * u3, u0 * u1 - four * u2 * u3, u0 * u2 - four * u1 * u3],
        [u0 * u1 - four * u2 * u3, -u1 * u1 + sixteen * u3 * u3, u1 * u2 - four * u0 * u3],
        [u0 * u2 - four * u1 * u3, u1 * u2 - four * u0 * u3, -u2 * u2 + sixteen * u3 * u3],
    ]
}

/// W_n -> F_n.
pub fn weber_to_fermat(n: u32, p: &ProjPoint) -> Result<ProjPoint> {
    let spec = ModelSpec::weber(n)?;
    if !spec.contains(p)? {
        return Err(domain!("point is not on W_{n}"));
    }
    let u = p.coords();
    let f = u[0].field();
    let two = f.from_i64(2);
    let sixteen = f.from_i64(16);
    let (u0, u1, u2, u3) = (u[0], u[1], u[2], u[3]);
    let image = match n {
        8 => {
            let r2 = sqrt2(f);
            vec![
                r2 * u2.pow(5) * u3 - u0.pow(3) * u1.pow(3),
                u1.pow(6) - two * u0 * u0 * u2 * u2 * u3 * u3,
                r2 * u0.pow(5) * u3 - u1.pow(3) * u2.pow(3),
            ]
        }
        4 => vec![
            u0.pow(3) - two * u1 * u2 * u3,
            u1.pow(3) - two * u0 * u2 * u3,
            u2.pow(3) - two * u0 * u1 * u3,
        ],
        2 => weber2_charts(u)
            .into_iter()
            .find(|c| c.iter().any(|x| !x.is_zero()))
            .ok_or_else(|| Error::Chart("all W_2 charts vanish".into()))?
            .to_vec(),
        _ => vec![u0 - sixteen * u3, u1 - sixteen * u3, u2 - sixteen * u3],
    };
    ProjPoint::new(image).map_err(|_| Error::Chart(format!("W_{n} -> F_{n} image vanishes")))
}

/// pi_0 = s1/s2, pi_1 = s0/s2, pi_2 = s0/s1.
pub fn fermat_projection(i: usize, p: &ProjPoint) -> Result<GF2Elt> {
    let s = p.coords();
    if s.len() != 3 {
        return Err(domain!("Fermat points have three coordinates"));
    }
    let (num, den) = match i {
        0 => (s[1], s[2]),
        1 => (s[0], s[2]),
        2 => (s[0], s[1]),
        _ => return Err(domain!("projection index {i} not in 0..3")),
    };
    if den.is_zero() {
        return Err(Error::Chart(format!("projection {i} has a zero denominator")));
    }
    Ok(num / den)
}

/// Results of the sampled model checks for one n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelReport {
    pub n: u32,
    pub samples: usize,
    pub fermat_round_trip: bool,
    pub weber_round_trip: bool,
    pub images_on_model: bool,
    pub charts_agree: Option<bool>,
}

impl ModelReport {
    pub fn ok(&self) -> bool {
        self.fermat_round_trip && self.weber_round_trip && self.images_on_model && self.charts_agree.unwrap_or(true)
    }
}

pub fn check_models<R: Rng>(f: GF2Field, n: u32, samples: usize, rng: &mut R) -> Result<ModelReport> {
    let (wspec, fspec) = (ModelSpec::weber(n)?, ModelSpec::fermat(n)?);
    let mut rep = ModelReport {
        n,
        samples,
        fermat_round_trip: true,
        weber_round_trip: true,
        images_on_model: true,
        charts_agree: (n == 2).then_some(true),
    };
    for _ in 0..samples {
        let s = fspec.random_point(f, rng);
        let w = fermat_to_weber(n, &s)?;
        rep.images_on_model &= wspec.contains(&w)?;
        match weber_to_fermat(n, &w) {
            Ok(back) => rep.fermat_round_trip &= back.proj_eq(&s),
            Err(Error::Chart(_)) => {}
            Err(e) => return Err(e),
        }
        let u = wspec.random_point(f, rng);
        match weber_to_fermat(n, &u) {
            Ok(img) => {
                rep.images_on_model &= fspec.contains(&img)?;
                rep.weber_round_trip &= fermat_to_weber(n, &img)?.proj_eq(&u);
            }
            Err(Error::Chart(_)) => {}
            Err(e) => return Err(e),
        }
        if n == 2 {
            let charts: Vec<ProjPoint> = weber2_charts(u.coords())
                .into_iter()
                .filter(|c| c.iter().any(|x| !x.is_zero()))
                .map(|c| ProjPoint(c.to_vec()))
                .collect();
            let agree = charts.windows(2).all(|w| w[0].proj_eq(&w[1]));
            rep.charts_agree = rep.charts_agree.map(|a| a && agree);
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::modpoly::InvariantLine;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt(f: GF2Field, xs: &[i64]) -> ProjPoint {
        ProjPoint(xs.iter().map(|&x| f.from_i64(x)).collect())
    }

    #[test]
    fn n1_examples() {
        let f = make_field(97).unwrap();
        let w1 = ModelSpec::weber(1).unwrap();
        assert!(w1.contains(&pt(f, &[16, 16, -128, -2])).unwrap());
        assert!(!w1.contains(&pt(f, &[1, 1, 1, 1])).unwrap());
        assert!(ModelSpec::fermat(1).unwrap().contains(&pt(f, &[1, 1, -2])).unwrap());
        let s = pt(f, &[1, 1, -2]);
        let w = fermat_to_weber(1, &s).unwrap();
        assert!(w.proj_eq(&pt(f, &[16, 16, -128, -2])));
        assert!(weber_to_fermat(1, &w).unwrap().proj_eq(&s));
        let cusp = pt(f, &[1, -1, 0]);
        let wc = fermat_to_weber(1, &cusp).unwrap();
        assert!(wc.proj_eq(&pt(f, &[16, -16, 0, 0])));
        assert!(weber_to_fermat(1, &wc).unwrap().proj_eq(&cusp));
        assert!(w1.contains(&pt(f, &[1, 1, 1])).is_err());
    }

    #[test]
    fn round_trips() {
        let f = make_field(97).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 2, 4, 8] {
            let rep = check_models(f, n, 40, &mut rng).unwrap();
            assert!(rep.ok(), "{rep:?}");
        }
    }

    #[test]
    fn weber3n_sampling() {
        let f = make_field(113).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [1, 2, 4, 8] {
            let spec = ModelSpec::weber3n(n).unwrap();
            let p = spec.random_point(f, &mut rng);
            assert!(spec.contains(&p).unwrap());
            // dropping X3 lands on F_n
            let q = ProjPoint(p.coords()[..3].to_vec());
            assert!(ModelSpec::fermat(n).unwrap().contains(&q).unwrap());
        }
    }

    #[test]
    fn projections_match_j() {
        let f = make_field(97).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let ev = |v: &[num_bigint::BigInt], x: GF2Elt| {
            v.iter().rev().fold(f.zero(), |acc, c| {
                acc * x + f.from_i64(crate::modarith::bigint_mod(c, f.p()) as i64)
            })
        };
        for n in [1u32, 2, 4, 8] {
            let fs = ModelSpec::fermat(n).unwrap();
            let (yn, yd) = InvariantLine::Y(n as u8).j_relation();
            let (xn, xd) = InvariantLine::X(n as u8).j_relation();
            let mut tested = 0;
            while tested < 10 {
                let s = fs.random_point(f, &mut rng);
                let Ok(w) = fermat_to_weber(n, &s) else { continue };
                let w = w.normalized();
                if w.coords()[3] != f.one() {
                    continue;
                }
                let jd = ev(&xd, w.coords()[0]);
                if jd.is_zero() {
                    continue;
                }
                let j = ev(&xn, w.coords()[0]) / jd;
                for i in 0..3 {
                    let Ok(y) = fermat_projection(i, &s) else { continue };
                    let d = ev(&yd, y);
                    if !d.is_zero() {
                        assert_eq!(ev(&yn, y) / d, j, "n={n} i={i}");
                    }
                }
                tested += 1;
            }
        }
        let zero_den = pt(f, &[0, 1, 0]);
        assert!(matches!(fermat_projection(0, &zero_den), Err(Error::Chart(_))));
        assert_eq!(fermat_projection(2, &pt(f, &[6, 3, 1])).unwrap(), f.from_i64(2));
    }
}
