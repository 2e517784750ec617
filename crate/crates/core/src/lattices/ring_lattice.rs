use serde::{Deserialize, Serialize};

use super::{Frame, RealLattice};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rings::{RingElement, RingTag};
use crate::{ExactMatrix, ExactPoint, Rational};

/// A lattice `{G̃ z}·m` over one of the rings.
///
/// `gen` is a `t × t` matrix given by rows; its columns span the lattice as
/// a module (left module for ℍ, where coefficients multiply from the left).
/// `scale` multiplies every vector, on the right for ℍ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingLattice {
    pub ring: RingTag,
    pub gen: Vec<Vec<RingElement>>,
    pub scale: Option<RingElement>,
}

/// Named base lattices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseLattice {
    /// ℤ.
    Z,
    /// ℤ\[i\] = ℤ².
    Zi,
    /// ℤ\[ω\] = A₂.
    A2,
    /// D₄ as a ℤ\[i\]-lattice.
    D4,
    /// ℍ = D₄*.
    Hurwitz,
    /// Gosset lattice as an ℍ-lattice.
    E8,
}

impl BaseLattice {
    pub fn lattice(self) -> RingLattice {
        match self {
            BaseLattice::Z => RingLattice::integers(),
            BaseLattice::Zi => RingLattice::gaussian(),
            BaseLattice::A2 => RingLattice::eisenstein(),
            BaseLattice::D4 => RingLattice::d4(),
            BaseLattice::Hurwitz => RingLattice::hurwitz(),
            BaseLattice::E8 => RingLattice::e8(),
        }
    }
}

impl RingLattice {
    pub fn new(ring: RingTag, gen: Vec<Vec<RingElement>>) -> Result<Self> {
        let t = gen.len();
        if t == 0 || gen.iter().any(|r| r.len() != t) {
            return Err(Error::IncompatibleDimensions("generator must be square".into()));
        }
        if gen.iter().flatten().any(|e| e.tag() != ring) {
            return Err(Error::RingMismatch(format!("generator entries must lie in {ring}")));
        }
        let l = RingLattice {
            ring,
            gen,
            scale: None,
        };
        l.real_embedding()?;
        Ok(l)
    }

    fn one_by_one(ring: RingTag) -> Self {
        RingLattice {
            ring,
            gen: vec![vec![RingElement::one(ring)]],
            scale: None,
        }
    }

    pub fn integers() -> Self {
        Self::one_by_one(RingTag::Rational)
    }

    pub fn gaussian() -> Self {
        Self::one_by_one(RingTag::Gaussian)
    }

    pub fn eisenstein() -> Self {
        Self::one_by_one(RingTag::Eisenstein)
    }

    pub fn hurwitz() -> Self {
        Self::one_by_one(RingTag::Hurwitz)
    }

    /// D₄ with complex generator `((1, 0), (1, 1+i))`.
    pub fn d4() -> Self {
        let g = RingElement::gaussian;
        RingLattice {
            ring: RingTag::Gaussian,
            gen: vec![vec![g(1, 0), g(0, 0)], vec![g(1, 0), g(1, 1)]],
            scale: None,
        }
    }

    /// E₈ as `{(A(1+i) + B, B) : A, B ∈ ℍ}`.
    pub fn e8() -> Self {
        let h = RingElement::quaternion;
        RingLattice {
            ring: RingTag::Hurwitz,
            gen: vec![vec![h(1, 1, 0, 0), h(1, 0, 0, 0)], vec![h(0, 0, 0, 0), h(1, 0, 0, 0)]],
            scale: None,
        }
    }

    pub fn with_scale(&self, m: RingElement) -> Self {
        RingLattice {
            scale: Some(m),
            ..self.clone()
        }
    }

    /// Module rank `t`.
    pub fn rank(&self) -> usize {
        self.gen.len()
    }

    /// Real dimension `n`.
    pub fn dim(&self) -> usize {
        self.rank() * self.ring.real_dim()
    }

    /// ℤ-basis of the ring itself, as used for the columns of the embedding.
    fn ring_basis(&self) -> Vec<RingElement> {
        match self.ring {
            RingTag::Rational => vec![RingElement::rational(1)],
            RingTag::Gaussian => vec![RingElement::gaussian(1, 0), RingElement::gaussian(0, 1)],
            RingTag::Eisenstein => vec![RingElement::eisenstein(1, 0), RingElement::eisenstein(0, 1)],
            RingTag::Hurwitz => vec![
                RingElement::hurwitz_doubled([1, 1, 1, 1]).expect("odd coordinates"),
                RingElement::quaternion(0, 1, 0, 0),
                RingElement::quaternion(0, 0, 1, 0),
                RingElement::quaternion(0, 0, 0, 1),
            ],
        }
    }

    /// ℤ-basis of the lattice as vectors over the ring, in column order of
    /// the real generator.
    pub fn z_basis(&self) -> Vec<Vec<RingElement>> {
        let t = self.rank();
        let m = self.scale.unwrap_or_else(|| RingElement::one(self.ring));
        let units = self.ring_basis();
        let column = |u: RingElement, j: usize| -> Vec<RingElement> {
            (0..t).map(|r| u * self.gen[r][j] * m).collect()
        };
        let mut out = Vec::with_capacity(self.dim());
        if self.ring == RingTag::Hurwitz {
            for j in 0..t {
                for u in &units {
                    out.push(column(*u, j));
                }
            }
        } else {
            for u in &units {
                for j in 0..t {
                    out.push(column(*u, j));
                }
            }
        }
        out
    }

    /// Frame coordinates `Ψ(v)` of a ring vector.
    ///
    /// Complex rings give `(a₁..a_t, b₁..b_t)`; ℍ concatenates the four
    /// coordinates of each entry.
    pub fn frame_of(&self, v: &[RingElement]) -> ExactPoint {
        let t = v.len();
        match self.ring {
            RingTag::Rational => v.iter().map(|e| Rational::from_integer(e.coords()[0] as i128)).collect(),
            RingTag::Gaussian | RingTag::Eisenstein => {
                let mut out = vec![Rational::from_integer(0); 2 * t];
                for (k, e) in v.iter().enumerate() {
                    out[k] = Rational::from_integer(e.coords()[0] as i128);
                    out[t + k] = Rational::from_integer(e.coords()[1] as i128);
                }
                out
            }
            RingTag::Hurwitz => v
                .iter()
                .flat_map(|e| e.coords().iter().map(|&c| Rational::new(c as i128, 2)).collect::<Vec<_>>())
                .collect(),
        }
    }

    pub fn frame(&self) -> Frame {
        if self.ring == RingTag::Eisenstein {
            Frame::Hexagonal
        } else {
            Frame::Cartesian
        }
    }

    /// The real lattice `Ψ(Λ̃·m)`.
    pub fn real_embedding(&self) -> Result<RealLattice> {
        let cols: Vec<ExactPoint> = self.z_basis().iter().map(|v| self.frame_of(v)).collect();
        RealLattice::new(self.frame(), Matrix::from_columns(&cols))
    }

    /// First `(basis vector, ring generator)` pair whose right product
    /// leaves the lattice, or `None` when the lattice is closed under right
    /// multiplication by the ring.
    ///
    /// Checking the ℤ-basis against the ℤ-basis of the ring is complete,
    /// since both products are bilinear.
    pub fn right_closure_witness(&self) -> Result<Option<(Vec<RingElement>, RingElement)>> {
        let lattice = self.real_embedding()?;
        for v in self.z_basis() {
            for e in self.ring_basis() {
                let w: Vec<RingElement> = v.iter().map(|x| *x * e).collect();
                if !lattice.contains(&self.frame_of(&w)) {
                    return Ok(Some((v, e)));
                }
            }
        }
        Ok(None)
    }
}

/// Matrix `𝓜(M)` with `vec(B·M) = 𝓜(M)·vec(B)` for quaternions.
pub fn quaternion_right_matrix(m: &RingElement) -> ExactMatrix {
    let c = m
        .quaternion_coords()
        .expect("quaternion coordinates exist for Hurwitz elements");
    let [a, b, cc, d] = c;
    Matrix::from_rows(vec![
        vec![a, -b, -cc, -d],
        vec![b, a, d, -cc],
        vec![cc, -d, a, b],
        vec![d, cc, -b, a],
    ])
}
