//! Integer Hermite normal form and an exact LLL pass over a Gram matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::Rational;

/// Column-style Hermite normal form of an `n × m` integer matrix of rank `n`.
///
/// Returns the lower-triangular `n × n` basis `H` of the column span, with a
/// positive diagonal and `0 ≤ H[i][k] < H[i][i]` for `k < i`. Intermediate
/// entries can grow well beyond the final ones, so the elimination runs on
/// big integers.
pub(crate) fn hnf(rows: &[Vec<i128>]) -> Result<Vec<Vec<i128>>> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if m < n {
        return Err(Error::RankDeficient);
    }
    // Work on columns.
    let mut cols: Vec<Vec<BigInt>> = (0..m)
        .map(|j| rows.iter().map(|r| BigInt::from(r[j])).collect())
        .collect();
    for i in 0..n {
        if cols[i][i].is_zero() {
            if let Some(j) = (i + 1..m).find(|&j| !cols[j][i].is_zero()) {
                cols.swap(i, j);
            } else {
                return Err(Error::RankDeficient);
            }
        }
        for j in i + 1..m {
            if cols[j][i].is_zero() {
                continue;
            }
            let x = cols[i][i].clone();
            let y = cols[j][i].clone();
            let e = x.extended_gcd(&y);
            let (a, b) = (-&y / &e.gcd, &x / &e.gcd);
            let (ci, cj) = (cols[i].clone(), cols[j].clone());
            for r in i..n {
                cols[i][r] = &e.x * &ci[r] + &e.y * &cj[r];
                cols[j][r] = &a * &ci[r] + &b * &cj[r];
            }
        }
        if cols[i][i].is_negative() {
            for v in cols[i].iter_mut() {
                *v = -&*v;
            }
        }
        let p = cols[i][i].clone();
        for k in 0..i {
            let q = Integer::div_floor(&cols[k][i], &p);
            if !q.is_zero() {
                for r in i..n {
                    let v = &q * &cols[i][r];
                    cols[k][r] -= v;
                }
            }
        }
    }
    (0..n)
        .map(|r| {
            (0..n)
                .map(|j| cols[j][r].to_i128().ok_or(Error::InvalidInput("HNF entry overflows i128".into())))
                .collect()
        })
        .collect()
}

/// LLL-reduces the lattice with Gram matrix `gram`.
///
/// Returns the unimodular `U` (columns are the reduced basis in the input
/// coordinates) and the reduced Gram matrix `Uᵀ G U`.
pub(crate) fn lll(gram: &Matrix<Rational>) -> (Matrix<Rational>, Matrix<Rational>) {
    let n = gram.rows();
    let mut u: Matrix<Rational> = Matrix::identity(n);
    if n <= 1 {
        return (u, gram.clone());
    }
    let delta = Rational::new(3, 4);
    let mut g = gram.clone();
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        assert!(guard < 100_000, "LLL failed to terminate");
        for j in (0..k).rev() {
            let (mu, _) = gso(&g);
            let q = round(&mu[(k, j)]);
            if !q.is_zero() {
                for r in 0..n {
                    let v = u[(r, j)] * q;
                    u[(r, k)] -= v;
                }
                g = u.transpose().mul(gram).mul(&u);
            }
        }
        let (mu, b) = gso(&g);
        let m = mu[(k, k - 1)];
        if b[k] >= (delta - m * m) * b[k - 1] {
            k += 1;
        } else {
            for r in 0..n {
                let tmp = u[(r, k)];
                u[(r, k)] = u[(r, k - 1)];
                u[(r, k - 1)] = tmp;
            }
            g = u.transpose().mul(gram).mul(&u);
            k = (k - 1).max(1);
        }
    }
    (u, g)
}

fn round(r: &Rational) -> Rational {
    (r + Rational::new(1, 2)).floor()
}

/// Gram–Schmidt coefficients and squared lengths from a Gram matrix.
fn gso(g: &Matrix<Rational>) -> (Matrix<Rational>, Vec<Rational>) {
    let n = g.rows();
    let mut mu: Matrix<Rational> = Matrix::identity(n);
    let mut b = vec![Rational::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut v = g[(i, j)];
            for k in 0..j {
                v -= mu[(j, k)] * mu[(i, k)] * b[k];
            }
            mu[(i, j)] = v / b[j];
        }
        let mut v = g[(i, i)];
        for k in 0..i {
            v -= mu[(i, k)] * mu[(i, k)] * b[k];
        }
        b[i] = v;
    }
    debug_assert!(b.iter().all(|v| *v > Rational::zero()));
    (mu, b)
}
