//! Word-size modular arithmetic, primality, and linear algebra over Z/pZ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime; `None` for zero.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Deterministic Miller-Rabin for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial-division factorization; adequate for the field sizes used here.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            let mut e = 0;
            while n.is_multiple_of(q) {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Primes p = 1 mod `m`, descending from just below 2^62.
pub fn primes_one_mod(m: u64) -> impl Iterator<Item = u64> {
    let top = (1u64 << 62) - 1;
    let start = top - (top % m) + 1;
    let mut cur = if start > top { start - m } else { start };
    std::iter::from_fn(move || loop {
        if cur < m {
            return None;
        }
        let c = cur;
        cur -= m;
        if is_prime(c) {
            return Some(c);
        }
    })
}

/// Element of exact multiplicative order `n` modulo prime `p` (requires n | p-1).
pub fn root_of_unity_mod(n: u64, p: u64) -> Option<u64> {
    if !(p - 1).is_multiple_of(n) {
        return None;
    }
    let fs = factor(n);
    for g in 2..p {
        let z = pow_mod(g, (p - 1) / n, p);
        if fs.iter().all(|&(q, _)| pow_mod(z, n / q, p) != 1) {
            return Some(z);
        }
    }
    None
}

/// Reduce a big integer modulo p.
pub fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

/// Row-reduce `rows` (each of length `ncols`) in place and return a basis of
/// the right kernel.
pub fn nullspace_mod(rows: &mut [Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c], p).unwrap();
        for x in rows[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if y != 0 {
                    *x = sub_mod(*x, mul_mod(f, y, p), p);
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &c in &pivot_cols {
            v[c] = true;
        }
        v
    };
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; ncols];
        v[free] = 1;
        for (ri, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = (p - rows[ri][free]) % p;
        }
        basis.push(v);
    }
    basis
}

/// Rank of a matrix modulo p (destroys the input).
pub fn rank_mod(rows: &mut [Vec<u64>], ncols: usize, p: u64) -> usize {
    ncols - nullspace_mod(rows, ncols, p).len()
}

/// Solve the square system A x = b modulo p; `None` if singular.
pub fn solve_mod(a: &[Vec<u64>], b: &[u64], p: u64) -> Option<Vec<u64>> {
    let n = a.len();
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| m[i][c] != 0)?;
        m.swap(c, piv);
        let inv = inv_mod(m[c][c], p)?;
        for x in m[c].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pr = m[c].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != c && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pr) {
                    *x = sub_mod(*x, mul_mod(f, y, p), p);
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n]).collect())
}

/// Chinese remaindering of residue `r` mod prime `p` into (acc mod modulus).
pub fn crt_step(acc: &BigInt, modulus: &BigInt, r: u64, p: u64) -> BigInt {
    let pb = BigInt::from(p);
    let acc_p = bigint_mod(acc, p);
    let m_p = bigint_mod(modulus, p);
    let t = mul_mod(sub_mod(r % p, acc_p, p), inv_mod(m_p, p).expect("coprime moduli"), p);
    let res = acc + modulus * BigInt::from(t);
    res.mod_floor(&(modulus * pb))
}

/// Rational reconstruction of `a` mod `m` with |num|, den <= sqrt(m/2).
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (mut n, mut d) = (r1, t1);
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    if !n.gcd(&d).is_one() {
        return None;
    }
    Some((n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let ps: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(!is_prime(3215031751));
        assert!(is_prime((1u64 << 61) - 1));
    }

    #[test]
    fn prime_stream_congruence() {
        for p in primes_one_mod(48).take(5) {
            assert_eq!(p % 48, 1);
            assert!(p < (1 << 62));
            let w = root_of_unity_mod(48, p).unwrap();
            assert_eq!(pow_mod(w, 48, p), 1);
            assert_ne!(pow_mod(w, 24, p), 1);
            assert_ne!(pow_mod(w, 16, p), 1);
        }
    }

    #[test]
    fn nullspace_rank_one() {
        let p = 101;
        let mut rows = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let ker = nullspace_mod(&mut rows, 3, p);
        assert_eq!(ker.len(), 2);
        for v in ker {
            let s = (v[0] + 2 * v[1] + 3 * v[2]) % p;
            assert_eq!(s, 0);
        }
    }

    #[test]
    fn reconstruct_fraction() {
        let p1 = 1_000_000_007u64;
        let p2 = 998_244_353u64;
        let (n, d) = (BigInt::from(-12345), BigInt::from(678));
        let r1 = mul_mod(bigint_mod(&n, p1), inv_mod(678, p1).unwrap(), p1);
        let r2 = mul_mod(bigint_mod(&n, p2), inv_mod(678, p2).unwrap(), p2);
        let acc = crt_step(&BigInt::from(r1), &BigInt::from(p1), r2, p2);
        let m = BigInt::from(p1) * BigInt::from(p2);
        let (rn, rd) = rational_reconstruct(&acc, &m).unwrap();
        let g = n.gcd(&d);
        assert_eq!((rn, rd), (&n / &g, &d / &g));
    }

    #[test]
    fn factor_roundtrip() {
        let n = 2u64.pow(5) * 3 * 7u64.pow(2) * 101;
        let f = factor(n);
        assert_eq!(f, vec![(2, 5), (3, 1), (7, 2), (101, 1)]);
    }
}
