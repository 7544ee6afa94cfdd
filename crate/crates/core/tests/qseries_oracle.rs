//! Weber-function expansions against product formulas computed here with
//! plain integer polynomials in Q = q^(1/2).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use weber_core::exactnum::CycloElt;
use weber_core::modpoly::InvariantLine;
use weber_core::qseries::{eval_rational_function, identity_checks, j_series, line_series, weber_series, QSeries, WeberFn};

const N: usize = 220;

type Poly = Vec<BigInt>;

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut c = vec![BigInt::zero(); N];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(N - i) {
            c[i + j] += x * y;
        }
    }
    c
}

fn pow(a: &Poly, e: u32) -> Poly {
    let mut acc = one();
    for _ in 0..e {
        acc = mul(&acc, a);
    }
    acc
}

fn one() -> Poly {
    let mut v = vec![BigInt::zero(); N];
    v[0] = BigInt::one();
    v
}

fn add(a: &Poly, b: &Poly) -> Poly {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn shift_scale(a: &Poly, k: usize, c: i64) -> Poly {
    let mut v = vec![BigInt::zero(); N];
    for i in 0..N - k {
        v[i + k] = &a[i] * c;
    }
    v
}

/// prod over n >= 1 of (1 + sign * Q^(step*n - offset))
fn product(step: usize, offset: usize, sign: i64) -> Poly {
    let mut acc = one();
    let mut n = 1;
    while step * n - offset < N {
        let e = step * n - offset;
        let mut next = acc.clone();
        for i in 0..N - e {
            next[i + e] += &acc[i] * sign;
        }
        acc = next;
        n += 1;
    }
    acc
}

/// f = q^(-1/48) A, f1 = q^(-1/48) B, f2 = sqrt2 q^(1/24) C.
fn abc() -> (Poly, Poly, Poly) {
    (product(2, 1, 1), product(2, 1, -1), product(2, 0, 1))
}

/// q j(q) as a series in Q (even powers only), from E4^3 / Delta.
fn j_times_q() -> Poly {
    let mut e4 = vec![BigInt::zero(); N];
    e4[0] = BigInt::one();
    for n in 1..N / 2 {
        let s: i64 = (1..=n as i64).filter(|d| n as i64 % d == 0).map(|d| d * d * d).sum();
        e4[2 * n] = BigInt::from(240 * s);
    }
    let euler = product(2, 0, -1);
    let e24 = pow(&euler, 24);
    // invert e24 (constant term 1)
    let mut inv = vec![BigInt::zero(); N];
    inv[0] = BigInt::one();
    for k in 1..N {
        let mut s = BigInt::zero();
        for i in 1..=k {
            s += &e24[i] * &inv[k - i];
        }
        inv[k] = -s;
    }
    mul(&pow(&e4, 3), &inv)
}

fn weber_matches(series: &QSeries, val: i64, stride: i64, oracle: &Poly, scale: &CycloElt) {
    assert_eq!(series.valuation(), Some(val));
    let mut checked = 0;
    for (k, c) in oracle.iter().enumerate() {
        let e = val + stride * k as i64;
        let Some(got) = series.coeff(e) else { break };
        assert_eq!(got, scale * &CycloElt::from_bigint(c.clone()), "exponent {e}");
        checked += 1;
    }
    assert!(checked >= 200, "only {checked} coefficients compared");
}

#[test]
fn weber_series_match_product_formulas() {
    let (a, b, c) = abc();
    let prec = 24 * 210;
    weber_matches(&weber_series(WeberFn::F, prec), -1, 24, &a, &CycloElt::one());
    weber_matches(&weber_series(WeberFn::F1, prec), -1, 24, &b, &CycloElt::one());
    weber_matches(&weber_series(WeberFn::F2, prec), 2, 24, &c, &CycloElt::sqrt2());
}

#[test]
fn oracle_identities() {
    let (a, b, c) = abc();
    // f f1 f2 = sqrt2
    assert_eq!(mul(&mul(&a, &b), &c), one());
    // f^8 = f1^8 + f2^8, with q^(1/3) = q^(-1/6) Q
    let (a8, b8, c8) = (pow(&a, 8), pow(&b, 8), pow(&c, 8));
    assert_eq!(a8, add(&b8, &shift_scale(&c8, 1, 16)));
    // j-relations against an Eisenstein-series j
    let j = j_times_q();
    let (a24, b24, c24) = (pow(&a8, 3), pow(&b8, 3), pow(&c8, 3));
    let lhs = pow(&add(&a24, &shift_scale(&one(), 1, -16)), 3);
    assert_eq!(lhs, mul(&j, &a24));
    let lhs = pow(&add(&b24, &shift_scale(&one(), 1, 16)), 3);
    assert_eq!(lhs, mul(&j, &b24));
    let lhs = pow(&add(&shift_scale(&c24, 2, 4096), &shift_scale(&one(), 0, 16)), 3);
    assert_eq!(lhs, shift_scale(&mul(&j, &c24), 0, 4096));
}

#[test]
fn library_identities_through_200_terms() {
    for c in identity_checks(200).unwrap() {
        assert!(c.holds, "{}", c.name);
        // at least 200 half-integral q-steps past the leading term
        assert!(c.terms >= 200, "{} only {} terms", c.name, c.terms);
    }
}

#[test]
fn j_series_matches_oracle() {
    let j = j_series(48 * 100);
    let oracle = j_times_q();
    for k in 0..100i64 {
        assert_eq!(j.coeff(-48 + 48 * k).unwrap(), CycloElt::from_bigint(oracle[2 * k as usize].clone()));
    }
}

#[test]
fn every_line_satisfies_its_j_relation() {
    let prec = 48 * 12;
    let j = j_series(prec);
    for line in InvariantLine::all() {
        let x = line_series(line, prec);
        let (num, den) = line.j_relation();
        let jx = eval_rational_function(&num, &den, &x).unwrap();
        let d = jx.sub(&j);
        assert!(d.is_zero(), "{}", line.name());
        assert!(d.precision() > 0, "{} precision {}", line.name(), d.precision());
    }
}

#[test]
fn all_72_roots_satisfy_the_weber_polynomial() {
    let prec = 48 * 6;
    let j = j_series(prec);
    let sixteen = QSeries::constant(CycloElt::from_int(16));
    for (i, which) in [WeberFn::U0, WeberFn::U1, WeberFn::U2].into_iter().enumerate() {
        let u = weber_series(which, prec);
        for k in [0i64, 1, 5, 11, 17, 23] {
            let x = u.scale(&CycloElt::zeta48(2 * k));
            let x24 = x.pow(24).unwrap();
            let r = x24.sub(&sixteen).pow(3).unwrap().sub(&j.mul(&x24));
            assert!(r.is_zero(), "u{i} zeta24^{k}");
        }
    }
}
