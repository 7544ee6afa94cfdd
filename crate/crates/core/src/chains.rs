//! Explicit three-step 2-isogeny chains from the Legendre-type curve
//! y^2 = x(x -+ 1)(x + t0), t0 = t3^8.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::curves::{from_x_map, two_isogeny_quotient, Curve, Isogeny, Point};
use crate::error::{Error, Result};
use crate::gf::{roots, GF2Elt, GF2Field, GFPoly};
use crate::util::fnv1a_words;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainVariant {
    Standard,
    Twisted,
}

impl ChainVariant {
    pub fn name(&self) -> &'static str {
        match self {
            ChainVariant::Standard => "standard",
            ChainVariant::Twisted => "twisted",
        }
    }
}

impl std::str::FromStr for ChainVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(ChainVariant::Standard),
            "twisted" => Ok(ChainVariant::Twisted),
            _ => Err(Error::Domain(format!("unknown chain variant '{s}'"))),
        }
    }
}

/// Outcome of the checks run on a built chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainChecks {
    pub on_curve: bool,
    pub kernel: bool,
    pub homomorphism: bool,
    pub double_torsion: bool,
    pub torsion_image: bool,
    pub matches_quotient: bool,
    pub degree_eight: bool,
    /// Twisted variant only.
    pub legendre: Option<bool>,
    /// Twisted variant only: phi0((-1,0)) = phi0((-t0,0)) = (-(t1+1)^2, 0).
    pub two_torsion_image: Option<bool>,
}

impl ChainChecks {
    pub fn all_ok(&self) -> bool {
        self.on_curve
            && self.kernel
            && self.homomorphism
            && self.double_torsion
            && self.torsion_image
            && self.matches_quotient
            && self.degree_eight
            && self.legendre.unwrap_or(true)
            && self.two_torsion_image.unwrap_or(true)
    }
}

#[derive(Debug, Clone)]
pub struct ChainWitness {
    pub variant: ChainVariant,
    /// (t0, t1, t2, t3) with t_{k-1} = t_k^2.
    pub t: [GF2Elt; 4],
    pub c0: GF2Elt,
    pub e0: GF2Elt,
    pub c1: GF2Elt,
    pub e1: GF2Elt,
    pub c2: GF2Elt,
    /// Standard variant.
    pub c3: Option<GF2Elt>,
    /// Twisted variant.
    pub e2: Option<GF2Elt>,
    pub u3: Option<GF2Elt>,
    pub curves: [Curve; 4],
    pub isogenies: [Isogeny; 3],
    pub torsion: [Point; 2],
    pub checks: ChainChecks,
}

fn nonzero(x: GF2Elt, what: &str) -> Result<GF2Elt> {
    if x.is_zero() {
        Err(Error::DegenerateSeed(format!("{what} vanishes")))
    } else {
        Ok(x)
    }
}

fn curve(a2: GF2Elt, a4: GF2Elt, a6: GF2Elt, what: &str) -> Result<Curve> {
    Curve::with_a2_a4_a6(a2, a4, a6).map_err(|_| Error::DegenerateSeed(format!("{what} is singular")))
}

/// y^2 = x(x + 4c)(x + e^2)
fn step_curve(c: GF2Elt, e: GF2Elt, what: &str) -> Result<Curve> {
    let f = c.field();
    let four = f.from_i64(4);
    curve(four * c + e * e, four * c * e * e, f.zero(), what)
}

/// x -> (x - c)^2 / x
fn square_step(dom: Curve, cod: Curve, c: GF2Elt) -> Isogeny {
    let f = c.field();
    let x = GFPoly::x(f);
    let xc = f.poly(vec![-c, f.one()]);
    from_x_map(dom, cod, x.clone(), 2, xc.mul(&xc), x)
}

pub fn build_chain(f: GF2Field, t3: GF2Elt, variant: ChainVariant) -> Result<ChainWitness> {
    let t2 = t3 * t3;
    let t1 = t2 * t2;
    let t0 = t1 * t1;
    let one = f.one();
    let k = |n: i64| f.from_i64(n);
    let z8 = f.nth_root_of_unity(8)?;
    let i = z8 * z8;
    nonzero(t0, "t0")?;
    let (c0, e0, c1, e1, c0_curve) = match variant {
        ChainVariant::Standard => {
            let (c0, e0) = (i * t1, t1 + i);
            let c1 = k(2) * z8 * t2 * (t1 + i);
            let e1 = (t2 + z8) * (t2 + z8);
            // x(x - 1)(x + t0)
            let c = curve(t0 - one, -t0, f.zero(), "C0")?;
            (c0, e0, c1, e1, c)
        }
        ChainVariant::Twisted => {
            let (c0, e0) = (t1, t1 + one);
            let c1 = k(2) * t2 * e0;
            let e1 = (t2 + one) * (t2 + one);
            // x(x + 1)(x + t0)
            let c = curve(t0 + one, t0, f.zero(), "C0")?;
            (c0, e0, c1, e1, c)
        }
    };
    for (v, name) in [(c0, "c0"), (e0, "e0"), (c1, "c1"), (e1, "e1")] {
        nonzero(v, name)?;
    }
    let c1_curve = step_curve(c0, e0, "C1")?;
    let c2_curve = step_curve(c1, e1, "C2")?;
    let phi0 = square_step(c0_curve, c1_curve, c0);
    let phi1 = square_step(c1_curve, c2_curve, c1);
    let x = GFPoly::x(f);
    let (c2, c3, e2, u3, c3_curve, phi2) = match variant {
        ChainVariant::Standard => {
            let c2 = nonzero(-k(4) * c1 * e1 * e1, "c2")?;
            let c3 = e1 * e1 + k(4) * c1;
            // (x^2 + 4c2)(x + c3)
            let cur = curve(c3, k(4) * c2, k(4) * c2 * c3, "C3")?;
            let xn = f.poly(vec![-c2, f.zero(), one]);
            let phi = from_x_map(c2_curve, cur, x.clone(), 2, xn, x);
            (c2, Some(c3), None, None, cur, phi)
        }
        ChainVariant::Twisted => {
            let u3 = (k(8) * e0)
                .sqrt()
                .ok_or_else(|| Error::NeedsExtension(format!("8e0 = {} is not a square", k(8) * e0)))?;
            let c2 = nonzero(t3 * u3 * e1, "c2")?;
            let e2 = nonzero(t3 * u3 + e1, "e2")?;
            let cur = step_curve(c2, e2, "C3")?;
            let phi = square_step(c2_curve, cur, c2);
            (c2, None, Some(e2), Some(u3), cur, phi)
        }
    };
    let torsion = [Point::Affine(c0, c0 * e0), Point::Affine(c1, c1 * e1)];
    let mut w = ChainWitness {
        variant,
        t: [t0, t1, t2, t3],
        c0,
        e0,
        c1,
        e1,
        c2,
        c3,
        e2,
        u3,
        curves: [c0_curve, c1_curve, c2_curve, c3_curve],
        isogenies: [phi0, phi1, phi2],
        torsion,
        checks: ChainChecks {
            on_curve: false,
            kernel: false,
            homomorphism: false,
            double_torsion: false,
            torsion_image: false,
            matches_quotient: false,
            degree_eight: false,
            legendre: None,
            two_torsion_image: None,
        },
    };
    let seed = fnv1a_words(&[f.p(), t3.index(), variant as u64]);
    w.checks = check_chain(&w, &mut ChaCha8Rng::seed_from_u64(seed), 16)?;
    Ok(w)
}

/// Specialization checks at `samples` random points per curve.
pub fn check_chain(w: &ChainWitness, rng: &mut ChaCha8Rng, samples: usize) -> Result<ChainChecks> {
    let f = w.t[0].field();
    let origin = Point::Affine(f.zero(), f.zero());
    let mut on_curve = true;
    let mut homomorphism = true;
    let mut kernel = true;
    let mut matches_quotient = true;
    for (k, phi) in w.isogenies.iter().enumerate() {
        let (dom, cod) = (&w.curves[k], &w.curves[k + 1]);
        on_curve &= phi.domain == *dom && phi.codomain == *cod;
        for _ in 0..samples {
            let p = dom.random_point(rng);
            let q = dom.random_point(rng);
            let (ip, iq) = (phi.apply(&p), phi.apply(&q));
            on_curve &= cod.contains(&ip) && cod.contains(&iq);
            homomorphism &= phi.apply(&dom.add(&p, &q)) == cod.add(&ip, &iq);
        }
        kernel &= dom.contains(&origin) && phi.apply(&origin) == Point::Infinity;
        let q = two_isogeny_quotient(dom, &origin)?;
        matches_quotient &= q.codomain.j_invariant() == cod.j_invariant();
    }
    let mut double_torsion = true;
    let mut torsion_image = true;
    for (k, t) in w.torsion.iter().enumerate() {
        let dom = &w.curves[k];
        on_curve &= dom.contains(t);
        double_torsion &= dom.mul(2, t) == origin;
        torsion_image &= w.isogenies[k].apply(t) == origin;
    }
    let (legendre, two_torsion_image) = match w.variant {
        ChainVariant::Standard => (None, None),
        ChainVariant::Twisted => {
            let ok = match legendre_sequence(w) {
                Ok(l) => (0..3).all(|i| legendre_step_holds(l[i], l[i + 1])),
                Err(_) => false,
            };
            // on x(x + 1)(x + t0) both points map to (-(t1 + 1)^2, 0)
            let img = Point::Affine(-(w.e0 * w.e0), f.zero());
            let phi0 = &w.isogenies[0];
            let tt = Point::Affine(-w.t[0], f.zero());
            let minus_one = Point::Affine(-f.one(), f.zero());
            let imgs_ok = phi0.apply(&minus_one) == img && phi0.apply(&tt) == img;
            (Some(ok), Some(imgs_ok))
        }
    };
    Ok(ChainChecks {
        on_curve,
        kernel,
        homomorphism,
        double_torsion,
        torsion_image,
        matches_quotient,
        degree_eight: composed_degree(w) == (8, 8),
        legendre,
        two_torsion_image,
    })
}

/// (lambda_0, .., lambda_3) = (t0, e0^2/4c0, e1^2/4c1, e2^2/4c2).
pub fn legendre_sequence(w: &ChainWitness) -> Result<[GF2Elt; 4]> {
    let f = w.t[0].field();
    let e2 = w
        .e2
        .ok_or_else(|| Error::Domain("Legendre sequence needs the twisted variant".into()))?;
    let four = f.from_i64(4);
    let l = [w.t[0], w.e0 * w.e0 / (four * w.c0), w.e1 * w.e1 / (four * w.c1), e2 * e2 / (four * w.c2)];
    for x in l {
        if x.is_zero() || x.is_one() {
            return Err(Error::DegenerateSeed(format!("Legendre invariant {x} is degenerate")));
        }
    }
    Ok(l)
}

/// l1 (l1 - 1) = (l0 - 1)^2 / (16 l0)
pub fn legendre_step_holds(l0: GF2Elt, l1: GF2Elt) -> bool {
    let f = l0.field();
    let one = f.one();
    l1 * (l1 - one) * f.from_i64(16) * l0 == (l0 - one) * (l0 - one)
}

/// (zeta8^i1 s3, zeta8^i2 t3)
pub fn twist_chain_seed(s3: GF2Elt, t3: GF2Elt, i1: i64, i2: i64) -> (GF2Elt, GF2Elt) {
    let z8 = s3.field().nth_root_of_unity(8).expect("8 divides p^2 - 1");
    (s3 * z8.powi(i1).unwrap(), t3 * z8.powi(i2).unwrap())
}

/// R(N/D) * D^m over a common denominator.
fn compose(rn: &GFPoly, rd: &GFPoly, n: &GFPoly, d: &GFPoly) -> (GFPoly, GFPoly) {
    let f = n.field();
    let m = rn.degree().max(rd.degree()).max(0) as usize;
    let mut dpow = vec![GFPoly::constant(f.one())];
    let mut npow = vec![GFPoly::constant(f.one())];
    for i in 1..=m {
        dpow.push(dpow[i - 1].mul(d));
        npow.push(npow[i - 1].mul(n));
    }
    let eval = |r: &GFPoly| {
        (0..=m).fold(GFPoly::zero(f), |acc, i| {
            acc.add(&npow[i].mul(&dpow[m - i]).scale(r.coeff(i)))
        })
    };
    let (a, b) = (eval(rn), eval(rd));
    let g = a.gcd(&b);
    (a.divrem(&g).0, b.divrem(&g).0)
}

/// (degree of the composed x-map, kernel size counted from its poles).
pub fn composed_degree(w: &ChainWitness) -> (usize, usize) {
    let (n0, d0) = w.isogenies[0].x_map();
    let (mut n, mut d) = (n0.clone(), d0.clone());
    for phi in &w.isogenies[1..] {
        let (rn, rd) = phi.x_map();
        (n, d) = compose(rn, rd, &n, &d);
    }
    let deg = n.degree().max(d.degree()).max(0) as usize;
    let dsf = d.divrem(&d.gcd(&d.derivative())).0.monic();
    let two_tors = roots(&w.curves[0].cubic()).iter().filter(|(r, _)| dsf.eval(*r).is_zero()).count();
    let kernel = 1 + 2 * dsf.degree().max(0) as usize - two_tors;
    (deg, kernel)
}

fn enc(x: GF2Elt) -> Value {
    Value::String(x.encode())
}

fn point_json(p: &Point) -> Value {
    match p {
        Point::Infinity => Value::String("O".into()),
        Point::Affine(x, y) => json!([x.encode(), y.encode()]),
    }
}

fn curve_json(c: &Curve) -> Value {
    json!({"a1": enc(c.a1), "a2": enc(c.a2), "a3": enc(c.a3), "a4": enc(c.a4), "a6": enc(c.a6), "j": enc(c.j_invariant())})
}

impl ChainWitness {
    pub fn to_json(&self) -> Value {
        let f = self.t[0].field();
        let opt = |x: Option<GF2Elt>| x.map(enc).unwrap_or(Value::Null);
        let legendre = legendre_sequence(self).ok().map(|l| l.iter().map(|x| x.encode()).collect::<Vec<_>>());
        json!({
            "field": f.header(),
            "variant": self.variant.name(),
            "seed": enc(self.t[3]),
            "t": self.t.iter().map(|x| x.encode()).collect::<Vec<_>>(),
            "constants": {
                "c0": enc(self.c0), "e0": enc(self.e0), "c1": enc(self.c1), "e1": enc(self.e1),
                "c2": enc(self.c2), "c3": opt(self.c3), "e2": opt(self.e2), "u3": opt(self.u3),
            },
            "curves": self.curves.iter().map(curve_json).collect::<Vec<_>>(),
            "torsion": self.torsion.iter().map(point_json).collect::<Vec<_>>(),
            "legendre": legendre,
            "checks": {
                "on_curve": self.checks.on_curve,
                "kernel": self.checks.kernel,
                "homomorphism": self.checks.homomorphism,
                "double_torsion": self.checks.double_torsion,
                "torsion_image": self.checks.torsion_image,
                "matches_quotient": self.checks.matches_quotient,
                "degree_eight": self.checks.degree_eight,
                "legendre_recursion": self.checks.legendre,
                "two_torsion_image": self.checks.two_torsion_image,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use rand::Rng;

    #[test]
    fn twisted_p17_example() {
        let f = make_field(17).unwrap();
        let w = build_chain(f, f.from_i64(3), ChainVariant::Twisted).unwrap();
        assert_eq!(w.t[0], f.from_i64(16));
        assert_eq!((w.c0, w.e0), (f.from_i64(13), f.from_i64(14)));
        assert_eq!(w.torsion[0], Point::Affine(f.from_i64(13), f.from_i64(12)));
        let l = legendre_sequence(&w).unwrap();
        assert_eq!((l[0], l[1]), (f.from_i64(16), f.from_i64(9)));
        assert!(w.checks.all_ok(), "{:?}", w.checks);
        // every element of F_17 is a square in F_289
        assert!(w.u3.unwrap().pow(2) == f.from_i64(10));
    }

    #[test]
    fn standard_p17_degenerate() {
        let f = make_field(17).unwrap();
        let i = f.nth_root_of_unity(4).unwrap();
        let r = build_chain(f, f.from_i64(3), ChainVariant::Standard);
        if i == f.from_i64(4) {
            assert!(matches!(r, Err(Error::DegenerateSeed(_))));
        } else {
            assert!(r.unwrap().checks.all_ok());
        }
    }

    #[test]
    fn random_chains_pass_all_checks() {
        for p in [41u64, 73, 89, 103] {
            let f = make_field(p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            for variant in [ChainVariant::Standard, ChainVariant::Twisted] {
                let mut good = 0;
                while good < 10 {
                    let t3 = f.from_index(rng.gen_range(1..p * p));
                    match build_chain(f, t3, variant) {
                        Ok(w) => {
                            assert!(w.checks.all_ok(), "p={p} {variant:?} t3={t3} {:?}", w.checks);
                            assert_eq!(composed_degree(&w), (8, 8));
                            good += 1;
                        }
                        Err(Error::DegenerateSeed(_)) | Err(Error::NeedsExtension(_)) => {}
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_seeds() {
        let f = make_field(41).unwrap();
        // t0 = 1 makes the twisted base curve singular
        assert!(matches!(build_chain(f, f.one(), ChainVariant::Twisted), Err(Error::DegenerateSeed(_))));
        assert!(matches!(build_chain(f, f.zero(), ChainVariant::Standard), Err(Error::DegenerateSeed(_))));
    }

    #[test]
    fn legendre_fixed_point() {
        let f = make_field(41).unwrap();
        let one = f.one();
        assert!(legendre_step_holds(one, f.zero()));
        assert!(legendre_step_holds(one, one));
    }

    #[test]
    fn twisting_seed_preserves_j0() {
        let f = make_field(73).unwrap();
        let (s3, t3) = (f.from_i64(5), f.from_i64(11));
        assert_eq!(twist_chain_seed(s3, t3, 0, 0), (s3, t3));
        let base = build_chain(f, t3, ChainVariant::Twisted).unwrap();
        let mut orbit = std::collections::BTreeSet::new();
        for i1 in 0..8 {
            for i2 in 0..8 {
                let (a, b) = twist_chain_seed(s3, t3, i1, i2);
                orbit.insert((a, b));
                if let Ok(w) = build_chain(f, b, ChainVariant::Twisted) {
                    assert_eq!(w.curves[0].j_invariant(), base.curves[0].j_invariant());
                }
            }
        }
        assert_eq!(64 % orbit.len(), 0);
    }
}
