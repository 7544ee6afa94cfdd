//! Exact linear algebra over Z and Q: fraction-free (Bareiss) row reduction
//! and rational kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<i64>>;

/// Product of two dense integer matrices.
pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for (k, &aik) in a[i].iter().enumerate() {
            if aik == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// Scale each row by the lcm of its denominators, giving an integer row.
fn integer_rows(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            r.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

/// Bareiss fraction-free elimination to row echelon form. Returns the pivot
/// columns; `m` is overwritten by the echelon form (rows past the rank are 0).
pub fn bareiss_echelon(m: &mut [Vec<BigInt>]) -> Vec<usize> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        // columns left of c in rows below r are already zero
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right kernel of a rational matrix with `ncols` columns.
/// Each basis vector has a 1 in its free coordinate.
pub fn kernel(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut m = integer_rows(rows);
    let pivots = bareiss_echelon(&mut m);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (ri, &pc) in pivots.iter().enumerate().rev() {
            let mut s = BigRational::zero();
            for j in pc + 1..ncols {
                if !m[ri][j].is_zero() && !v[j].is_zero() {
                    s += BigRational::from_integer(m[ri][j].clone()) * &v[j];
                }
            }
            v[pc] = -s / BigRational::from_integer(m[ri][pc].clone());
        }
        basis.push(v);
    }
    basis
}

/// Rank of a rational matrix.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m = integer_rows(rows);
    bareiss_echelon(&mut m).len()
}

/// Lift an integer matrix to rationals.
pub fn to_rational(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    m.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect()
}

/// A · v for a rational matrix and vector.
pub fn apply(m: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .fold(BigRational::zero(), |s, (a, b)| s + a * b)
        })
        .collect()
}

/// Scale a rational vector to a primitive integer vector with positive
/// leading entry.
pub fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut out: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = out.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() {
        for x in out.iter_mut() {
            *x = &*x / &g;
        }
    }
    if out.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in out.iter_mut() {
            *x = -&*x;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn kernel_of_rank_two() {
        let m = vec![vec![q(1), q(2), q(3), q(4)], vec![q(2), q(4), q(7), q(9)], vec![q(3), q(6), q(10), q(13)]];
        let k = kernel(&m, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(apply(&m, v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn kernel_with_fractions() {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let m = vec![vec![half.clone(), q(-1)], vec![q(1), q(-2)]];
        let k = kernel(&m, 2);
        assert_eq!(k.len(), 1);
        assert_eq!(primitive(&k[0]), vec![BigInt::from(2), BigInt::from(1)]);
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        assert!(kernel(&m, 2).is_empty());
    }

    #[test]
    fn mat_mul_small() {
        let a = vec![vec![1, 2], vec![3, 4]];
        let b = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(mat_mul(&a, &b), vec![vec![2, 1], vec![4, 3]]);
    }
}
