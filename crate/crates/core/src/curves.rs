//! Weierstrass curves over F_{p^2}, their points and isogenies.

use rand::{Rng, SeedableRng};

use crate::error::{domain, Error, Result};
use crate::gf::{GF2Elt, GF2Field, GFPoly};

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Curve {
    pub a1: GF2Elt,
    pub a2: GF2Elt,
    pub a3: GF2Elt,
    pub a4: GF2Elt,
    pub a6: GF2Elt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine(GF2Elt, GF2Elt),
}

impl Point {
    /// Projective coordinates (X:Y:Z); the identity is (0:1:0).
    pub fn projective(&self, f: GF2Field) -> [GF2Elt; 3] {
        match *self {
            Point::Infinity => [f.zero(), f.one(), f.zero()],
            Point::Affine(x, y) => [x, y, f.one()],
        }
    }

    pub fn x(&self) -> Option<GF2Elt> {
        match self {
            Point::Infinity => None,
            Point::Affine(x, _) => Some(*x),
        }
    }
}

impl Curve {
    pub fn new(a1: GF2Elt, a2: GF2Elt, a3: GF2Elt, a4: GF2Elt, a6: GF2Elt) -> Result<Self> {
        let e = Curve { a1, a2, a3, a4, a6 };
        if e.discriminant().is_zero() {
            return Err(Error::SingularParameter("discriminant vanishes".into()));
        }
        Ok(e)
    }

    /// y^2 = x^3 + a2 x^2 + a4 x + a6
    pub fn with_a2_a4_a6(a2: GF2Elt, a4: GF2Elt, a6: GF2Elt) -> Result<Self> {
        let z = a2.field().zero();
        Self::new(z, a2, z, a4, a6)
    }

    pub fn field(&self) -> GF2Field {
        self.a2.field()
    }

    fn k(&self, n: i64) -> GF2Elt {
        self.field().from_i64(n)
    }

    pub fn b2(&self) -> GF2Elt {
        self.a1 * self.a1 + self.k(4) * self.a2
    }

    pub fn b4(&self) -> GF2Elt {
        self.k(2) * self.a4 + self.a1 * self.a3
    }

    pub fn b6(&self) -> GF2Elt {
        self.a3 * self.a3 + self.k(4) * self.a6
    }

    pub fn b8(&self) -> GF2Elt {
        let (a1, a2, a3, a4, a6) = (self.a1, self.a2, self.a3, self.a4, self.a6);
        a1 * a1 * a6 + self.k(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    }

    pub fn c4(&self) -> GF2Elt {
        self.b2() * self.b2() - self.k(24) * self.b4()
    }

    pub fn c6(&self) -> GF2Elt {
        let b2 = self.b2();
        -(b2 * b2 * b2) + self.k(36) * b2 * self.b4() - self.k(216) * self.b6()
    }

    pub fn discriminant(&self) -> GF2Elt {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -(b2 * b2 * b8) - self.k(8) * b4 * b4 * b4 - self.k(27) * b6 * b6 + self.k(9) * b2 * b4 * b6
    }

    pub fn j_invariant(&self) -> GF2Elt {
        let c4 = self.c4();
        c4 * c4 * c4 / self.discriminant()
    }

    /// Isomorphic over F_{p^2}: equal j and a square twisting factor.
    pub fn is_isomorphic(&self, other: &Curve) -> bool {
        if self.j_invariant() != other.j_invariant() {
            return false;
        }
        let (c4, c6, d4, d6) = (self.c4(), self.c6(), other.c4(), other.c6());
        if c4.is_zero() {
            // j = 0: other / self = u^6 on c6; sixth power class
            let r = d6 / c6;
            return r.pow(self.field().order_units() / gcd(6, self.field().order_units())).is_one();
        }
        if c6.is_zero() {
            let r = d4 / c4;
            return r.pow(self.field().order_units() / gcd(4, self.field().order_units())).is_one();
        }
        (d6 * c4 / (c6 * d4)).is_square()
    }

    /// Right-hand side cubic when a1 = a3 = 0.
    pub fn cubic(&self) -> GFPoly {
        self.field().poly(vec![self.a6, self.a4, self.a2, self.field().one()])
    }

    fn short_form(&self) -> bool {
        self.a1.is_zero() && self.a3.is_zero()
    }

    pub fn contains(&self, p: &Point) -> bool {
        match *p {
            Point::Infinity => true,
            Point::Affine(x, y) => {
                y * y + self.a1 * x * y + self.a3 * y == x * x * x + self.a2 * x * x + self.a4 * x + self.a6
            }
        }
    }

    pub fn neg(&self, p: &Point) -> Point {
        match *p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x, -y - self.a1 * x - self.a3),
        }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (*p, *q) {
            (Point::Infinity, _) => return *q,
            (_, Point::Infinity) => return *p,
            (Point::Affine(a, b), Point::Affine(c, d)) => (a, b, c, d),
        };
        let lambda = if x1 == x2 {
            let den = self.k(2) * y1 + self.a1 * x1 + self.a3;
            if den.is_zero() || y1 != y2 {
                return Point::Infinity;
            }
            (self.k(3) * x1 * x1 + self.k(2) * self.a2 * x1 + self.a4 - self.a1 * y1) / den
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let nu = y1 - lambda * x1;
        let x3 = lambda * lambda + self.a1 * lambda - self.a2 - x1 - x2;
        let y3 = -(lambda + self.a1) * x3 - nu - self.a3;
        Point::Affine(x3, y3)
    }

    pub fn mul(&self, n: i64, p: &Point) -> Point {
        let mut base = if n < 0 { self.neg(p) } else { *p };
        let mut n = n.unsigned_abs();
        let mut acc = Point::Infinity;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Point with the given x, if x lies on the curve over F_{p^2}
    /// (a1 = a3 = 0 only).
    pub fn lift_x(&self, x: GF2Elt) -> Option<Point> {
        debug_assert!(self.short_form());
        let y = self.cubic().eval(x).sqrt()?;
        Some(Point::Affine(x, y))
    }

    pub fn random_point<R: Rng>(&self, rng: &mut R) -> Point {
        let f = self.field();
        loop {
            let x = f.from_index(rng.gen_range(0..f.p() * f.p()));
            if let Some(mut pt) = self.lift_x(x) {
                if rng.gen_bool(0.5) {
                    pt = self.neg(&pt);
                }
                return pt;
            }
        }
    }

    /// Rational 2-torsion points (a1 = a3 = 0).
    pub fn two_torsion(&self) -> Vec<Point> {
        let z = self.field().zero();
        crate::gf::roots(&self.cubic()).into_iter().map(|(x, _)| Point::Affine(x, z)).collect()
    }

    /// Division polynomials g_n, with psi_n = g_n for odd n and
    /// psi_n = 2y g_n for even n (a1 = a3 = 0).
    pub fn division_polynomials(&self, n: usize) -> Vec<GFPoly> {
        let f = self.field();
        let c = |x: GF2Elt| GFPoly::constant(x);
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        let k = |n: i64| f.from_i64(n);
        let mut g: Vec<GFPoly> = vec![
            GFPoly::zero(f),
            c(f.one()),
            c(f.one()),
            f.poly(vec![b8, k(3) * b6, k(3) * b4, b2, k(3)]),
            f.poly(vec![
                b4 * b8 - b6 * b6,
                b2 * b8 - b4 * b6,
                k(10) * b8,
                k(10) * b6,
                k(5) * b4,
                b2,
                k(2),
            ]),
        ];
        let ff = self.cubic().scale(k(4));
        let ff2 = ff.mul(&ff);
        for m_n in 5..=n {
            let m = m_n / 2;
            let next = if m_n % 2 == 1 {
                let a = g[m + 2].mul(&g[m]).mul(&g[m]).mul(&g[m]);
                let b = g[m - 1].mul(&g[m + 1]).mul(&g[m + 1]).mul(&g[m + 1]);
                if m % 2 == 0 {
                    ff2.mul(&a).sub(&b)
                } else {
                    a.sub(&ff2.mul(&b))
                }
            } else {
                let a = g[m + 2].mul(&g[m - 1]).mul(&g[m - 1]);
                let b = g[m - 2].mul(&g[m + 1]).mul(&g[m + 1]);
                g[m].mul(&a.sub(&b))
            };
            g.push(next);
        }
        g.truncate(n + 1);
        g
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// An isogeny given by x -> xn(x)/xd(x), y -> y * yn(x)/yd(x).
#[derive(Debug, Clone)]
pub struct Isogeny {
    pub domain: Curve,
    pub codomain: Curve,
    pub kernel_polynomial: GFPoly,
    pub degree: u64,
    xn: GFPoly,
    xd: GFPoly,
    yn: GFPoly,
    yd: GFPoly,
}

impl Isogeny {
    pub fn apply(&self, p: &Point) -> Point {
        match *p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let d = self.xd.eval(x);
                if d.is_zero() {
                    return Point::Infinity;
                }
                Point::Affine(self.xn.eval(x) / d, y * self.yn.eval(x) / self.yd.eval(x))
            }
        }
    }

    /// x-coordinate map as (numerator, denominator).
    pub fn x_map(&self) -> (&GFPoly, &GFPoly) {
        (&self.xn, &self.xd)
    }

    /// Randomized checks: images on the codomain and additivity.
    pub fn check_random<R: Rng>(&self, rng: &mut R, trials: usize) -> bool {
        (0..trials).all(|_| {
            let p = self.domain.random_point(rng);
            let q = self.domain.random_point(rng);
            let (ip, iq) = (self.apply(&p), self.apply(&q));
            self.codomain.contains(&ip)
                && self.codomain.contains(&iq)
                && self.apply(&self.domain.add(&p, &q)) == self.codomain.add(&ip, &iq)
        })
    }
}

/// Isogeny from its x-map xn/xd, with y-map y * d/dx(xn/xd)
/// (normalized maps, a1 = a3 = 0).
pub fn from_x_map(domain: Curve, codomain: Curve, kernel: GFPoly, degree: u64, xn: GFPoly, xd: GFPoly) -> Isogeny {
    let yn = xn.derivative().mul(&xd).sub(&xn.mul(&xd.derivative()));
    let yd = xd.mul(&xd);
    Isogeny { domain, codomain, kernel_polynomial: kernel, degree, xn, xd, yn, yd }
}

/// Quotient by the 2-torsion point T = (x0, 0), codomain in the form
/// Y^2 = X^3 - 2a X^2 + (a^2 - 4b) X after moving T to the origin.
pub fn two_isogeny_quotient(e: &Curve, t: &Point) -> Result<Isogeny> {
    let f = e.field();
    let Point::Affine(x0, y0) = *t else {
        return Err(domain!("kernel point is the identity"));
    };
    if !e.short_form() || !y0.is_zero() || !e.contains(t) {
        return Err(domain!("({x0}, {y0}) is not a 2-torsion point"));
    }
    let k = |n: i64| f.from_i64(n);
    let a = k(3) * x0 + e.a2;
    let b = k(3) * x0 * x0 + k(2) * e.a2 * x0 + e.a4;
    let cod = Curve::with_a2_a4_a6(-k(2) * a, a * a - k(4) * b, f.zero())?;
    // X = (xs^2 + a xs + b) / xs with xs = x - x0
    let xs = f.poly(vec![-x0, f.one()]);
    let xn = xs.mul(&xs).add(&xs.scale(a)).add(&GFPoly::constant(b));
    Ok(from_x_map(*e, cod, xs.clone(), 2, xn, xs))
}

/// sum of g over the roots of monic h: x^{deg h - 1} coefficient of g h' mod h.
fn trace(g: &GFPoly, h: &GFPoly) -> GF2Elt {
    if h.degree() < 1 {
        return h.field().zero();
    }
    g.mul(&h.derivative()).rem(h).coeff(h.degree() as usize - 1)
}

/// Isogeny with kernel polynomial h (Velu's formulas in Kohel's form).
pub fn velu(e: &Curve, h: &GFPoly) -> Result<Isogeny> {
    let f = e.field();
    if !e.short_form() {
        return Err(domain!("velu expects a1 = a3 = 0"));
    }
    if h.degree() < 1 {
        return Err(Error::Kernel("kernel polynomial must have positive degree".into()));
    }
    let h = h.monic();
    if h.gcd(&h.derivative()).degree() > 0 {
        return Err(Error::Kernel("kernel polynomial is not squarefree".into()));
    }
    let cubic = e.cubic();
    let h2 = h.gcd(&cubic);
    let hodd = h.divrem(&h2).0;
    if h2.degree() == 2 {
        return Err(Error::Kernel("two of three 2-torsion points do not form a subgroup".into()));
    }
    let n = hodd.degree().max(0) as usize;
    if n > 0 {
        let psi = &e.division_polynomials(2 * n + 1)[2 * n + 1];
        if !psi.rem(&hodd).is_zero() {
            return Err(Error::Kernel("odd part does not divide the division polynomial".into()));
        }
    }
    let k = |n: i64| f.from_i64(n);
    let (b2, b4) = (e.b2(), e.b4());
    let x = GFPoly::x(f);
    let v = f.poly(vec![b4, b2, k(6)]);
    let u = cubic.scale(k(4));
    let fp = cubic.derivative();
    let t = trace(&v, &hodd) + trace(&fp, &h2);
    let w = trace(&u.add(&x.mul(&v)), &hodd) + trace(&x.mul(&fp), &h2);
    let cod = Curve::with_a2_a4_a6(e.a2, e.a4 - k(5) * t, e.a6 - b2 * t - k(7) * w)
        .map_err(|_| Error::Kernel("codomain is singular".into()))?;
    // X = x + R/hodd - (S/hodd)' + R2/h2
    let one = GFPoly::constant(f.one());
    let hodd_or_one = if n > 0 { hodd.clone() } else { one.clone() };
    let r = if n > 0 { v.mul(&hodd.derivative()).rem(&hodd) } else { GFPoly::zero(f) };
    let s = if n > 0 { u.mul(&hodd.derivative()).rem(&hodd) } else { GFPoly::zero(f) };
    let r2 = if h2.degree() > 0 { fp.mul(&h2.derivative()).rem(&h2) } else { GFPoly::zero(f) };
    let h2_or_one = if h2.degree() > 0 { h2.clone() } else { one };
    let ho2 = hodd_or_one.mul(&hodd_or_one);
    let xd = ho2.mul(&h2_or_one);
    let ds = s.derivative().mul(&hodd_or_one).sub(&s.mul(&hodd_or_one.derivative()));
    let xn = x
        .mul(&xd)
        .add(&r.mul(&hodd_or_one).mul(&h2_or_one))
        .sub(&ds.mul(&h2_or_one))
        .add(&r2.mul(&ho2));
    let degree = (2 * n as u64 + 1) * (h2.degree().max(0) as u64 + 1);
    let iso = from_x_map(*e, cod, h.clone(), degree, xn, xd);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(crate::util::fnv1a_words(&[f.p(), h.degree() as u64]));
    if !iso.check_random(&mut rng, 4) {
        return Err(Error::Kernel("kernel polynomial does not define a subgroup".into()));
    }
    Ok(iso)
}

/// w = u^n; errors when w is 0 or 64.
fn weber_power(u: GF2Elt, n: u32) -> Result<GF2Elt> {
    let w = u.pow(n as u64);
    let f = u.field();
    if w.is_zero() || w == f.from_i64(64) {
        return Err(Error::SingularParameter(format!("u^{n} = {w} gives a singular curve")));
    }
    Ok(w)
}

/// y^2 = x(x^2 - ((w-64)/4) x - (w-64)), w = u^n.
pub fn family_e0(u: GF2Elt, n: u32) -> Result<Curve> {
    let f = u.field();
    let w = weber_power(u, n)?;
    let m = w - f.from_i64(64);
    Curve::with_a2_a4_a6(-m / f.from_i64(4), -m, f.zero())
}

/// y^2 = x(x^2 + ((w-64)/2) x + ((w-64)/16) w), w = u^n.
pub fn family_e1(u: GF2Elt, n: u32) -> Result<Curve> {
    let f = u.field();
    let w = weber_power(u, n)?;
    let m = w - f.from_i64(64);
    Curve::with_a2_a4_a6(m / f.from_i64(2), m * w / f.from_i64(16), f.zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CFamily {
    C0,
    C1,
}

/// C0: y^2 = x(x-1)(x-(s+1));  C1: y^2 = x((x+s)^2 + 4x).
pub fn family_c(s: GF2Elt, which: CFamily) -> Result<Curve> {
    let f = s.field();
    if s.is_zero() || s == -f.one() {
        return Err(Error::SingularParameter(format!("s = {s} gives a singular curve")));
    }
    let k = |n: i64| f.from_i64(n);
    match which {
        CFamily::C0 => Curve::with_a2_a4_a6(-(s + k(2)), s + k(1), f.zero()),
        CFamily::C1 => Curve::with_a2_a4_a6(k(2) * s + k(4), s * s, f.zero()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{make_field, roots};
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn e0_special_values() {
        let f = make_field(101).unwrap();
        let e = family_e0(f.from_i64(16), 1).unwrap();
        assert!(e.c4().is_zero());
        assert!(e.j_invariant().is_zero());
        assert!(matches!(family_e0(f.from_i64(64), 1), Err(Error::SingularParameter(_))));
        assert!(matches!(family_e0(f.from_i64(2), 6), Err(Error::SingularParameter(_))));
    }

    #[test]
    fn family_j_invariants() {
        let f = make_field(1009).unwrap();
        let mut r = rng();
        for _ in 0..30 {
            let u = f.from_index(r.gen_range(2..f.p() * f.p()));
            for n in [1u32, 2, 3, 24] {
                let w = u.pow(n as u64);
                let (Ok(e0), Ok(e1)) = (family_e0(u, n), family_e1(u, n)) else { continue };
                let k = |x: i64| f.from_i64(x);
                let j0 = (w - k(16)) * (w - k(16)) * (w - k(16)) / w;
                assert_eq!(e0.j_invariant(), j0);
                let j1 = -((w - k(256)) * (w - k(256)) * (w - k(256))) / (w * w);
                assert_eq!(e1.j_invariant(), j1);
                let m = w - k(64);
                assert_eq!(e1.discriminant(), -(m * m * m * w * w));
                let q = two_isogeny_quotient(&e0, &Point::Affine(f.zero(), f.zero())).unwrap();
                assert_eq!(q.codomain, e1);
            }
            let s = u;
            if let (Ok(c0), Ok(c1)) = (family_c(s, CFamily::C0), family_c(s, CFamily::C1)) {
                let k = |x: i64| f.from_i64(x);
                let a = s * s + s + k(1);
                assert_eq!(c0.j_invariant(), k(256) * a * a * a / (s * s * (s + k(1)) * (s + k(1))));
                let b = s * s + k(16) * s + k(16);
                assert_eq!(c1.j_invariant(), k(16) * b * b * b / (s * s * s * s * (s + k(1))));
                assert_eq!(c0.discriminant(), k(16) * s * s * (s + k(1)) * (s + k(1)));
                assert_eq!(c1.discriminant(), k(256) * s * s * s * s * (s + k(1)));
                let q = two_isogeny_quotient(&c0, &Point::Affine(f.zero(), f.zero())).unwrap();
                assert_eq!(q.codomain, c1);
            }
        }
    }

    #[test]
    fn cube_root_of_unity_gives_j_zero() {
        let f = make_field(13).unwrap();
        let w = f.nth_root_of_unity(3).unwrap();
        assert!(family_c(w, CFamily::C0).unwrap().j_invariant().is_zero());
    }

    #[test]
    fn group_law_and_isogeny_homomorphism() {
        let f = make_field(103).unwrap();
        let e = family_c(f.from_i64(5), CFamily::C0).unwrap();
        let mut r = rng();
        for _ in 0..20 {
            let (p, q, s) = (e.random_point(&mut r), e.random_point(&mut r), e.random_point(&mut r));
            assert!(e.contains(&p));
            assert_eq!(e.add(&e.add(&p, &q), &s), e.add(&p, &e.add(&q, &s)));
            assert_eq!(e.add(&p, &e.neg(&p)), Point::Infinity);
        }
        let phi = two_isogeny_quotient(&e, &Point::Affine(f.zero(), f.zero())).unwrap();
        assert!(phi.check_random(&mut r, 20));
        for t in e.two_torsion() {
            let img = phi.apply(&t);
            assert_eq!(phi.codomain.mul(2, &img), Point::Infinity);
        }
        // dual: quotient of the image by its 2-torsion point (0,0) composes to [2] up to isomorphism
        let back = two_isogeny_quotient(&phi.codomain, &Point::Affine(f.zero(), f.zero())).unwrap();
        assert_eq!(back.codomain.j_invariant(), e.j_invariant());
        let p = e.random_point(&mut r);
        let twice = back.apply(&phi.apply(&p));
        let q = e.mul(2, &p);
        assert_eq!(twice == Point::Infinity, q == Point::Infinity);
    }

    #[test]
    fn velu_two_torsion_agrees_with_quotient() {
        let f = make_field(103).unwrap();
        let e = family_e0(f.from_i64(7), 1).unwrap();
        let t = Point::Affine(f.zero(), f.zero());
        let q = two_isogeny_quotient(&e, &t).unwrap();
        let v = velu(&e, &GFPoly::linear(f.zero())).unwrap();
        assert_eq!(v.degree, 2);
        assert_eq!(v.codomain.j_invariant(), q.codomain.j_invariant());
        let mut r = rng();
        assert!(v.check_random(&mut r, 10));
        // x-maps differ by a constant translation
        let p = e.random_point(&mut r);
        let p2 = e.random_point(&mut r);
        let dx = |iso: &Isogeny, pt: &Point| iso.apply(pt).x().unwrap();
        assert_eq!(dx(&v, &p) - dx(&q, &p), dx(&v, &p2) - dx(&q, &p2));
    }

    fn classical_phi3(a: GF2Elt, b: GF2Elt) -> GF2Elt {
        let poly = crate::modpoly::generate(crate::modpoly::InvariantLine::J, 3, false).unwrap();
        let emb = a.field().cyclo_embedding().unwrap();
        poly.terms().fold(a.field().zero(), |acc, (&(i, j), c)| {
            acc + emb.map(c).unwrap() * a.pow(i as u64) * b.pow(j as u64)
        })
    }

    #[test]
    fn velu_degree_three() {
        let f = make_field(101).unwrap();
        let mut found = 0;
        for s in 2..40 {
            let Ok(e) = family_c(f.from_i64(s), CFamily::C1) else { continue };
            let psi3 = &e.division_polynomials(3)[3];
            for (r, _) in roots(psi3) {
                let iso = velu(&e, &GFPoly::linear(r)).unwrap();
                assert_eq!(iso.degree, 3);
                assert!(classical_phi3(e.j_invariant(), iso.codomain.j_invariant()).is_zero());
                found += 1;
            }
            if found > 4 {
                break;
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn division_polynomial_roots_are_torsion() {
        let f = make_field(101).unwrap();
        let e = family_c(f.from_i64(3), CFamily::C0).unwrap();
        let g = e.division_polynomials(7);
        for n in [3usize, 5, 7] {
            for (x, _) in roots(&g[n]) {
                if let Some(pt) = e.lift_x(x) {
                    assert_eq!(e.mul(n as i64, &pt), Point::Infinity, "n = {n}");
                }
            }
        }
    }

    #[test]
    fn random_kernel_is_rejected() {
        let f = make_field(101).unwrap();
        let e = family_c(f.from_i64(3), CFamily::C0).unwrap();
        let h = f.poly(vec![f.from_i64(17), f.from_i64(5), f.one()]);
        assert!(matches!(velu(&e, &h), Err(Error::Kernel(_))));
    }

    #[test]
    fn twists_share_j() {
        let f = make_field(103).unwrap();
        let e = family_c(f.from_i64(5), CFamily::C0).unwrap();
        let g = f.generator();
        // quadratic twist by g: a2 -> g a2, a4 -> g^2 a4
        let t = Curve::with_a2_a4_a6(e.a2 * g, e.a4 * g * g, f.zero()).unwrap();
        assert_eq!(t.j_invariant(), e.j_invariant());
        assert!(!t.is_isomorphic(&e));
        let s = g * g;
        let iso = Curve::with_a2_a4_a6(e.a2 * s, e.a4 * s * s, f.zero()).unwrap();
        assert!(iso.is_isomorphic(&e));
    }
}
