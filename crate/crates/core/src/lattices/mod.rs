//! Real lattices with exact Gram matrices, and lattices over the rings.
//!
//! A [`RealLattice`] stores a rational basis in *frame coordinates*. The
//! Cartesian frame is ordinary ℝⁿ. The hexagonal frame writes each complex
//! coordinate in the basis `(1, ω)` of ℤ\[ω\]; its metric is rational even
//! though the embedding into ℝⁿ involves √3. All algebraic quantities (Gram
//! matrices, squared minimum distances, volumes squared, coset leaders) are
//! therefore exact rationals.

mod enumerate;
mod reduce;
pub(crate) use reduce::hnf;
mod ring_lattice;

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{sqrt_rational, Scalar};
use crate::{ExactMatrix, ExactPoint, Rational};

pub(crate) use enumerate::enumerate;
pub use ring_lattice::{quaternion_right_matrix, BaseLattice, RingLattice};

/// Shortest-vector and kissing-number searches are limited to this dimension.
pub const MAX_ENUM_DIM: usize = 8;
/// Default cap on the number of enumerated coset leaders.
pub const COSET_CAP: u128 = 1_000_000;

/// Coordinate frame of a lattice basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Cartesian,
    /// `n = 2t` coordinates `(a₁..a_t, b₁..b_t)` meaning `a_k + b_k ω`.
    Hexagonal,
}

/// A lattice point: integer coefficients and the real embedding.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticePoint {
    pub coeffs: Vec<i64>,
    pub embedding: Vec<f64>,
}

/// Result of a shortest-vector search.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortestVector {
    pub d_min: f64,
    pub d_min_sq: Rational,
    pub witness: LatticePoint,
}

/// A full-rank lattice `{B z : z ∈ ℤⁿ}` with `B` given in frame coordinates.
#[derive(Debug, Clone)]
pub struct RealLattice {
    frame: Frame,
    basis: ExactMatrix,
    cache: OnceLock<Reduced>,
}

#[derive(Debug, Clone)]
struct Reduced {
    /// Frame coordinates to basis coefficients.
    basis_inv: ExactMatrix,
    /// Columns: LLL-reduced basis in basis coefficients.
    u: ExactMatrix,
    u_inv: ExactMatrix,
    gram: ExactMatrix,
    reduced_gram: ExactMatrix,
}

impl PartialEq for RealLattice {
    /// Equality of bases, not of lattices; see [`RealLattice::same_lattice`].
    fn eq(&self, other: &Self) -> bool {
        self.frame == other.frame && self.basis == other.basis
    }
}

fn q(v: i64) -> Rational {
    Rational::from_integer(v as i128)
}

impl RealLattice {
    /// Lattice from a square rational basis (columns) in the given frame.
    pub fn new(frame: Frame, basis: ExactMatrix) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::IncompatibleDimensions(format!(
                "basis is {}x{}",
                basis.rows(),
                basis.cols()
            )));
        }
        if frame == Frame::Hexagonal && !basis.rows().is_multiple_of(2) {
            return Err(Error::IncompatibleDimensions(
                "hexagonal frame needs an even dimension".into(),
            ));
        }
        if basis.determinant().is_zero() {
            return Err(Error::RankDeficient);
        }
        Ok(RealLattice {
            frame,
            basis,
            cache: OnceLock::new(),
        })
    }

    /// Lattice generated by integer columns in ℝⁿ.
    pub fn from_integer_columns(cols: &[Vec<i64>]) -> Result<Self> {
        let cols: Vec<Vec<Rational>> = cols.iter().map(|c| c.iter().map(|&v| q(v)).collect()).collect();
        if cols.iter().any(|c| c.len() != cols.len()) {
            return Err(Error::IncompatibleDimensions("columns must form a square matrix".into()));
        }
        RealLattice::new(Frame::Cartesian, Matrix::from_columns(&cols))
    }

    /// Lattice generated by the columns of an integer matrix given by rows.
    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::IncompatibleDimensions("generator must be square".into()));
        }
        let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect());
        RealLattice::new(Frame::Cartesian, m)
    }

    /// `cℤⁿ`.
    pub fn scaled_integer(c: i64, n: usize) -> Self {
        RealLattice::new(Frame::Cartesian, Matrix::identity(n).scaled(&q(c)))
            .expect("nonzero scale")
    }

    pub fn integer(n: usize) -> Self {
        RealLattice::scaled_integer(1, n)
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    /// Basis columns in frame coordinates.
    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    /// Metric of the frame: real inner product of frame coordinate vectors.
    pub fn frame_gram(&self) -> ExactMatrix {
        frame_gram(self.frame, self.dim())
    }

    fn reduced(&self) -> &Reduced {
        self.cache.get_or_init(|| {
            let gram = self.basis.transpose().mul(&self.frame_gram()).mul(&self.basis);
            let (u, reduced_gram) = reduce::lll(&gram);
            Reduced {
                basis_inv: self.basis.inverse().expect("full rank"),
                u_inv: u.inverse().expect("unimodular"),
                u,
                gram,
                reduced_gram,
            }
        })
    }

    /// Exact Gram matrix `Bᵀ G_F B`.
    pub fn gram(&self) -> &ExactMatrix {
        &self.reduced().gram
    }

    /// Frame coordinates of `B z`.
    pub fn frame_point(&self, coeffs: &[i64]) -> ExactPoint {
        let z: Vec<Rational> = coeffs.iter().map(|&v| q(v)).collect();
        self.basis.mul_vec(&z)
    }

    /// Embedding of frame coordinates into ℝⁿ.
    pub fn to_real(&self, frame: &[Rational]) -> Vec<f64> {
        frame_to_real(self.frame, &frame.iter().map(Scalar::approx).collect::<Vec<_>>())
    }

    /// Frame coordinates of a real vector.
    pub fn from_real(&self, x: &[f64]) -> Vec<f64> {
        real_to_frame(self.frame, x)
    }

    pub fn point(&self, coeffs: &[i64]) -> LatticePoint {
        LatticePoint {
            coeffs: coeffs.to_vec(),
            embedding: self.to_real(&self.frame_point(coeffs)),
        }
    }

    /// Exact squared Euclidean norm of a frame-coordinate vector.
    pub fn norm_sq(&self, frame: &[Rational]) -> Rational {
        self.frame_gram().quadratic_form(frame)
    }

    /// Basis coefficients of a frame-coordinate point, if it is a lattice point.
    pub fn coefficients(&self, frame: &[Rational]) -> Option<Vec<i64>> {
        let c = self.reduced().basis_inv.mul_vec(frame);
        c.iter()
            .map(|v| v.is_integer().then(|| v.to_integer() as i64))
            .collect()
    }

    pub fn contains(&self, frame: &[Rational]) -> bool {
        self.coefficients(frame).is_some()
    }

    /// Coefficients of a nearest lattice point to a target in frame
    /// coordinates. Ties go to the lexicographically largest coefficients.
    pub fn closest_point<T: Scalar>(&self, target: &[T]) -> Vec<i64> {
        assert_eq!(target.len(), self.dim(), "target dimension mismatch");
        let red = self.reduced();
        let conv = |m: &ExactMatrix| m.map(T::from_rational);
        let c = conv(&red.basis_inv).mul_vec(target);
        let c_red = conv(&red.u_inv).mul_vec(&c);
        let gram = conv(&red.reduced_gram);
        let u = &red.u;
        // Babai rounding gives the initial radius.
        let start: Vec<T> = c_red
            .iter()
            .map(|v| T::from_int(v.approx().round() as i64))
            .collect();
        let diff: Vec<T> = start.iter().zip(&c_red).map(|(a, b)| a.clone() - b.clone()).collect();
        let radius = gram.quadratic_form(&diff);
        let mut best: Option<T> = None;
        let mut ties: Vec<Vec<i64>> = Vec::new();
        let close = |a: &T, b: &T| -> bool {
            if T::EXACT {
                a == b
            } else {
                (a.approx() - b.approx()).abs() <= (1e3 * T::ROUNDOFF).max(1e-9) * (1.0 + b.approx().abs())
            }
        };
        enumerate(&gram, &c_red, radius, |z, d| {
            match &best {
                Some(b) if close(d, b) => ties.push(z.to_vec()),
                Some(b) if d > b => {}
                _ => {
                    best = Some(d.clone());
                    ties.clear();
                    ties.push(z.to_vec());
                }
            }
            best.clone()
        });
        ties.into_iter()
            .map(|zr| {
                let zr: Vec<Rational> = zr.iter().map(|&v| q(v)).collect();
                u.mul_vec(&zr).iter().map(|v| v.to_integer() as i64).collect::<Vec<i64>>()
            })
            .max()
            .expect("enumeration always finds the Babai point")
    }

    /// Nearest lattice point to a real vector.
    pub fn quantize(&self, x: &[f64]) -> LatticePoint {
        let z = self.closest_point(&self.from_real(x));
        self.point(&z)
    }

    /// `x − Q(x)` for a real vector.
    pub fn mod_lattice(&self, x: &[f64]) -> Vec<f64> {
        let p = self.quantize(x);
        x.iter().zip(&p.embedding).map(|(a, b)| a - b).collect()
    }

    /// Exact `x mod Λ` in frame coordinates.
    pub fn mod_exact(&self, frame: &[Rational]) -> ExactPoint {
        let z = self.closest_point(frame);
        let p = self.frame_point(&z);
        frame.iter().zip(&p).map(|(a, b)| a - b).collect()
    }

    /// Exact squared volume, `det(Gram)`.
    pub fn volume_sq(&self) -> Rational {
        self.gram().determinant()
    }

    pub fn volume(&self) -> f64 {
        self.volume_sq().approx().sqrt()
    }

    fn check_enum_dim(&self) -> Result<()> {
        if self.dim() > MAX_ENUM_DIM {
            return Err(Error::DimensionTooLarge(self.dim()));
        }
        Ok(())
    }

    /// Exact minimum distance by enumeration.
    pub fn shortest_vector(&self) -> Result<ShortestVector> {
        self.check_enum_dim()?;
        let red = self.reduced();
        let n = self.dim();
        let gram = &red.reduced_gram;
        let radius = (0..n)
            .map(|i| gram[(i, i)])
            .min()
            .expect("nonzero dimension");
        let zero = vec![Rational::zero(); n];
        let mut best: Option<(Rational, Vec<i64>)> = None;
        enumerate(gram, &zero, radius, |z, d| {
            if z.iter().all(|&v| v == 0) {
                return None;
            }
            let better = match &best {
                None => true,
                Some((bd, bz)) => d < bd || (d == bd && z > bz.as_slice()),
            };
            if better {
                best = Some((*d, z.to_vec()));
            }
            best.as_ref().map(|b| b.0)
        });
        let (d_min_sq, zr) = best.expect("radius bounds a basis vector");
        let zr: Vec<Rational> = zr.iter().map(|&v| q(v)).collect();
        let coeffs: Vec<i64> = red.u.mul_vec(&zr).iter().map(|v| v.to_integer() as i64).collect();
        Ok(ShortestVector {
            d_min: d_min_sq.approx().sqrt(),
            d_min_sq,
            witness: self.point(&coeffs),
        })
    }

    pub fn min_distance_sq(&self) -> Result<Rational> {
        Ok(self.shortest_vector()?.d_min_sq)
    }

    /// Number of lattice vectors of minimum length.
    pub fn kissing_number(&self) -> Result<u64> {
        let d = self.min_distance_sq()?;
        let red = self.reduced();
        let zero = vec![Rational::zero(); self.dim()];
        let mut count = 0u64;
        enumerate(&red.reduced_gram, &zero, d, |z, dist| {
            if *dist == d && z.iter().any(|&v| v != 0) {
                count += 1;
            }
            None
        });
        Ok(count)
    }

    /// Squared center density `((d_min/2)ⁿ / Vol)²`, exact.
    pub fn center_density_sq(&self) -> Result<Rational> {
        let d = self.min_distance_sq()?;
        let r = d / q(4);
        let n = self.dim() as i32;
        Ok(pow(r, n) / self.volume_sq())
    }

    /// Center density `(d_min/2)ⁿ / Vol`.
    pub fn center_density(&self) -> Result<f64> {
        Ok(self.center_density_sq()?.approx().sqrt())
    }

    /// Center density as an exact rational, when it is one.
    pub fn center_density_exact(&self) -> Result<Option<Rational>> {
        Ok(sqrt_rational(&self.center_density_sq()?))
    }

    /// Covering radius of a scaled cubic lattice (orthogonal basis of equal
    /// lengths in the Cartesian frame).
    pub fn covering_radius(&self) -> Result<f64> {
        let g = self.gram();
        let n = self.dim();
        let c2 = g[(0, 0)];
        let cubic = self.frame == Frame::Cartesian
            && (0..n).all(|i| (0..n).all(|j| g[(i, j)] == if i == j { c2 } else { Rational::zero() }));
        if !cubic {
            return Err(Error::UnsupportedLattice(
                "covering radius is only available for scaled cubic lattices".into(),
            ));
        }
        Ok(covering_radius_scaled_cubic(c2.approx().sqrt(), n))
    }

    /// Canonical (Hermite normal form) basis of the same lattice.
    pub fn canonical_basis(&self) -> ExactMatrix {
        sum_basis(&self.basis.columns()).expect("full-rank basis")
    }

    /// True when both describe the same point set.
    pub fn same_lattice(&self, other: &Self) -> bool {
        self.frame == other.frame
            && self.dim() == other.dim()
            && self.canonical_basis() == other.canonical_basis()
    }

    /// Multiplies the lattice by a rational scalar.
    pub fn scaled(&self, s: Rational) -> Self {
        RealLattice::new(self.frame, self.basis.scaled(&s)).expect("nonzero scale")
    }
}

fn pow(r: Rational, n: i32) -> Rational {
    (0..n).fold(Rational::one(), |acc, _| acc * r)
}

fn frame_gram(frame: Frame, n: usize) -> ExactMatrix {
    let mut g: ExactMatrix = Matrix::identity(n);
    if frame == Frame::Hexagonal {
        let t = n / 2;
        for k in 0..t {
            g[(k, t + k)] = Rational::new(-1, 2);
            g[(t + k, k)] = Rational::new(-1, 2);
        }
    }
    g
}

fn frame_to_real(frame: Frame, v: &[f64]) -> Vec<f64> {
    match frame {
        Frame::Cartesian => v.to_vec(),
        Frame::Hexagonal => {
            let t = v.len() / 2;
            let h = 3f64.sqrt() / 2.0;
            let mut out = vec![0.0; v.len()];
            for k in 0..t {
                out[k] = v[k] - v[t + k] / 2.0;
                out[t + k] = v[t + k] * h;
            }
            out
        }
    }
}

fn real_to_frame(frame: Frame, x: &[f64]) -> Vec<f64> {
    match frame {
        Frame::Cartesian => x.to_vec(),
        Frame::Hexagonal => {
            let t = x.len() / 2;
            let h = 3f64.sqrt() / 2.0;
            let mut out = vec![0.0; x.len()];
            for k in 0..t {
                let b = x[t + k] / h;
                out[k] = x[k] + b / 2.0;
                out[t + k] = b;
            }
            out
        }
    }
}

/// `c·√n / 2`.
pub fn covering_radius_scaled_cubic(c: f64, n: usize) -> f64 {
    c * (n as f64).sqrt() / 2.0
}

/// Hermite normal form basis of the ℤ-span of rational columns.
fn sum_basis(cols: &[Vec<Rational>]) -> Result<ExactMatrix> {
    let n = cols.first().map_or(0, Vec::len);
    let den = cols
        .iter()
        .flatten()
        .fold(1i128, |acc, v| acc.lcm(v.denom()));
    let rows: Vec<Vec<i128>> = (0..n)
        .map(|r| cols.iter().map(|c| (c[r] * den).to_integer()).collect())
        .collect();
    let h = reduce::hnf(&rows)?;
    Ok(Matrix::from_rows(
        h.into_iter()
            .map(|row| row.into_iter().map(|v| Rational::new(v, den)).collect())
            .collect(),
    ))
}

/// The lattice generated by the union of the given lattices' bases.
pub fn sum_lattice(lattices: &[&RealLattice]) -> Result<RealLattice> {
    let first = lattices
        .first()
        .ok_or_else(|| Error::IncompatibleDimensions("empty list".into()))?;
    let n = first.dim();
    if lattices.iter().any(|l| l.dim() != n) {
        return Err(Error::IncompatibleDimensions("lattices differ in dimension".into()));
    }
    if lattices.iter().any(|l| l.frame != first.frame) {
        return Err(Error::IrrationalBasisMismatch);
    }
    let cols: Vec<Vec<Rational>> = lattices.iter().flat_map(|l| l.basis.columns()).collect();
    RealLattice::new(first.frame, sum_basis(&cols)?)
}

/// Integer matrix `X` with `B_fine X = B_coarse`, or `NotNested`.
pub fn nesting_matrix(fine: &RealLattice, coarse: &RealLattice) -> Result<ExactMatrix> {
    if fine.dim() != coarse.dim() {
        return Err(Error::IncompatibleDimensions("fine and coarse differ in dimension".into()));
    }
    if fine.frame != coarse.frame {
        return Err(Error::IrrationalBasisMismatch);
    }
    let x = fine.reduced().basis_inv.mul(&coarse.basis);
    let data_integral = (0..x.rows()).all(|i| (0..x.cols()).all(|j| x[(i, j)].is_integer()));
    if !data_integral {
        return Err(Error::NotNested);
    }
    Ok(x)
}

/// `|fine / coarse|`.
pub fn quotient_size(fine: &RealLattice, coarse: &RealLattice) -> Result<u128> {
    let x = nesting_matrix(fine, coarse)?;
    Ok(x.determinant().abs().to_integer() as u128)
}

/// Orders exact points by squared norm, then by real embedding.
pub(crate) fn leader_order(l: &RealLattice, a: &ExactPoint, b: &ExactPoint) -> Ordering {
    l.norm_sq(a).cmp(&l.norm_sq(b)).then_with(|| {
        let (ra, rb) = (l.to_real(a), l.to_real(b));
        ra.iter()
            .zip(&rb)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

/// Exact representatives of `fine / coarse` reduced into the Voronoi region
/// of `coarse`, sorted by squared norm then embedding.
pub fn coset_leaders_exact(
    fine: &RealLattice,
    coarse: &RealLattice,
    cap: u128,
) -> Result<Vec<ExactPoint>> {
    let x = nesting_matrix(fine, coarse)?;
    let size = x.determinant().abs().to_integer() as u128;
    if size > cap {
        return Err(Error::IndexTooLarge { size, cap });
    }
    let rows: Vec<Vec<i128>> = x.to_rows().iter().map(|r| r.iter().map(|v| v.to_integer()).collect()).collect();
    let h = reduce::hnf(&rows)?;
    let diag: Vec<i64> = (0..h.len()).map(|i| h[i][i] as i64).collect();
    let mut out = Vec::with_capacity(size as usize);
    let mut z = vec![0i64; diag.len()];
    loop {
        out.push(coarse.mod_exact(&fine.frame_point(&z)));
        // Mixed-radix increment over the box 0 ≤ z_i < h_ii.
        let mut k = 0;
        loop {
            if k == z.len() {
                out.sort_by(|a, b| leader_order(fine, a, b));
                return Ok(out);
            }
            z[k] += 1;
            if z[k] < diag[k] {
                break;
            }
            z[k] = 0;
            k += 1;
        }
    }
}

/// Real coset leaders of `fine / coarse`.
pub fn coset_leaders(fine: &RealLattice, coarse: &RealLattice) -> Result<Vec<Vec<f64>>> {
    Ok(coset_leaders_exact(fine, coarse, COSET_CAP)?
        .iter()
        .map(|p| fine.to_real(p))
        .collect())
}
