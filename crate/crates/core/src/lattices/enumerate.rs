//! Fincke–Pohst sphere enumeration over a Gram matrix.
//!
//! Interval endpoints are computed in `f64` and widened; every accepted
//! partial sum is then compared in the scalar type itself, so for exact
//! scalars the result is exact.

use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Enumerates every integer vector `z` with `(z−c)ᵀ G (z−c) ≤ R`.
///
/// `visit` receives each hit with its distance and may return a smaller
/// radius to prune the rest of the search.
pub(crate) fn enumerate<T: Scalar>(
    gram: &Matrix<T>,
    center: &[T],
    radius_sq: T,
    mut visit: impl FnMut(&[i64], &T) -> Option<T>,
) {
    let n = gram.rows();
    assert_eq!(center.len(), n);
    let (l, d) = gram
        .ldl()
        .expect("Gram matrix of a lattice basis is positive definite");
    let mut state = Search {
        l,
        d_approx: d.iter().map(Scalar::approx).collect(),
        d,
        center,
        z: vec![0; n],
        radius: radius_sq,
    };
    if n == 0 {
        visit(&[], &T::zero());
        return;
    }
    state.level(n - 1, T::zero(), &mut visit);
}

struct Search<'a, T> {
    l: Matrix<T>,
    d: Vec<T>,
    d_approx: Vec<f64>,
    center: &'a [T],
    z: Vec<i64>,
    radius: T,
}

fn within<T: Scalar>(value: &T, radius: &T) -> bool {
    if T::EXACT {
        value <= radius
    } else {
        let tol = (1e4 * T::ROUNDOFF).max(1e-12);
        value.approx() <= radius.approx() * (1.0 + tol) + tol
    }
}

impl<T: Scalar> Search<'_, T> {
    fn level(&mut self, i: usize, partial: T, visit: &mut impl FnMut(&[i64], &T) -> Option<T>) {
        let n = self.z.len();
        let mut shift = T::zero();
        for j in i + 1..n {
            let e = T::from_int(self.z[j]) - self.center[j].clone();
            shift = shift + self.l[(j, i)].clone() * e;
        }
        let mid = self.center[i].clone() - shift;
        let slack = (self.radius.clone() - partial.clone()).approx();
        if slack < -(1e4 * T::ROUNDOFF).max(1e-9) * (1.0 + self.radius.approx().abs()) {
            return;
        }
        let w = (slack.max(0.0) / self.d_approx[i]).sqrt();
        let m = mid.approx();
        let pad = (1e4 * T::ROUNDOFF).max(1e-7) * (1.0 + m.abs() + w);
        let lo = (m - w - pad).ceil() as i64;
        let hi = (m + w + pad).floor() as i64;
        for zi in lo..=hi {
            let e = T::from_int(zi) - mid.clone();
            let next = partial.clone() + self.d[i].clone() * e.clone() * e;
            if !within(&next, &self.radius) {
                continue;
            }
            self.z[i] = zi;
            if i == 0 {
                if let Some(r) = visit(&self.z, &next) {
                    self.radius = r;
                }
            } else {
                self.level(i - 1, next, visit);
            }
        }
        self.z[i] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn counts_points_in_a_disc() {
        let g = Matrix::<Rational>::identity(2);
        let c = vec![Rational::from_integer(0); 2];
        let mut count = 0;
        enumerate(&g, &c, Rational::from_integer(1), |_, _| {
            count += 1;
            None
        });
        assert_eq!(count, 5);
        let gf = Matrix::<f64>::identity(2);
        let mut count = 0;
        enumerate(&gf, &[0.0, 0.0], 2.0, |_, _| {
            count += 1;
            None
        });
        assert_eq!(count, 9);
    }

    #[test]
    fn skewed_gram() {
        // Basis (1, 0), (100, 1): the sheared square lattice.
        let g = Matrix::from_rows(vec![vec![1, 100], vec![100, 10001]])
            .map(|&v| Rational::from_integer(v));
        let c = vec![Rational::from_integer(0); 2];
        let mut hits = Vec::new();
        enumerate(&g, &c, Rational::from_integer(1), |z, _| {
            hits.push(z.to_vec());
            None
        });
        hits.sort();
        assert_eq!(hits, vec![vec![-1, 0], vec![0, 0], vec![1, 0], vec![100, -1], vec![-100, 1]]
            .into_iter()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect::<Vec<_>>());
    }
}
