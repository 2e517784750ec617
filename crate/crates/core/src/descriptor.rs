//! JSON descriptors for codes and superposition schemes.
//!
//! ```json
//! {"kind": "crt", "ring": "gaussian", "primes": [[1, 2], [1, -2]], "base": "zi"}
//! {"kind": "hurwitz", "primes": [3, 5], "base": "e8"}
//! {"kind": "custom", "components": [{"rows": [[4, 2], [0, 3]]}, {"rows": [[0, 3], [4, 2]]}], "coarse": {"rows": [[12, 0], [0, 12]]}}
//! {"kind": "builtin", "name": "psk16"}
//! ```
//!
//! Ring elements are coordinate arrays: `[a]` over ℤ, `[a, b]` for `a + bi`
//! or `a + bω`, and doubled coordinates `[2a, 2b, 2c, 2d]` for a Hurwitz
//! quaternion. A base is either a named lattice or an explicit generator.
//! Matrices are given by rows; their columns generate the lattice.

use serde::{Deserialize, Serialize};

use crate::codes::{Construction, LabeledConstellation, LatticeIndexCode};
use crate::error::{Error, Result};
use crate::lattices::{BaseLattice, Frame, RealLattice, RingLattice};
use crate::matrix::Matrix;
use crate::rings::{RingElement, RingTag};
use crate::superpose::SuperpositionScheme;
use crate::Rational;

/// Base lattice: a name or an explicit ring generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseSpec {
    Named(BaseLattice),
    Explicit {
        ring: RingTag,
        /// Generator rows of ring elements.
        gen: Vec<Vec<Vec<i64>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<Vec<i64>>,
    },
}

impl BaseSpec {
    pub fn build(&self) -> Result<RingLattice> {
        match self {
            BaseSpec::Named(b) => Ok(b.lattice()),
            BaseSpec::Explicit { ring, gen, scale } => {
                let gen = gen
                    .iter()
                    .map(|row| row.iter().map(|c| RingElement::from_coords(*ring, c)).collect())
                    .collect::<Result<Vec<Vec<_>>>>()?;
                let l = RingLattice::new(*ring, gen)?;
                match scale {
                    Some(s) => Ok(l.with_scale(RingElement::from_coords(*ring, s)?)),
                    None => Ok(l),
                }
            }
        }
    }

    pub fn from_lattice(l: &RingLattice) -> Self {
        BaseSpec::Explicit {
            ring: l.ring,
            gen: l.gen.iter().map(|r| r.iter().map(|e| e.coords().to_vec()).collect()).collect(),
            scale: l.scale.map(|s| s.coords().to_vec()),
        }
    }
}

/// An integer matrix given by rows, optionally divided by `denominator`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixSpec {
    pub rows: Vec<Vec<i64>>,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub denominator: i64,
}

fn one() -> i64 {
    1
}

fn is_one(v: &i64) -> bool {
    *v == 1
}

impl MatrixSpec {
    pub fn new(rows: Vec<Vec<i64>>) -> Self {
        MatrixSpec { rows, denominator: 1 }
    }

    pub fn build(&self, frame: Frame) -> Result<RealLattice> {
        if self.denominator == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.rows.len();
        if self.rows.iter().any(|r| r.len() != n) {
            return Err(Error::IncompatibleDimensions("generator must be square".into()));
        }
        let d = self.denominator as i128;
        let m = Matrix::from_rows(
            self.rows
                .iter()
                .map(|r| r.iter().map(|&v| Rational::new(v as i128, d)).collect())
                .collect(),
        );
        RealLattice::new(frame, m)
    }

    /// Rows of a lattice basis over a common denominator.
    pub fn from_lattice(l: &RealLattice) -> Result<Self> {
        use num_integer::Integer;
        let rows = l.basis().to_rows();
        let den = rows.iter().flatten().fold(1i128, |acc, v| acc.lcm(v.denom()));
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| i64::try_from((v * den).to_integer()).map_err(|_| Error::InvalidInput(format!("{v} overflows"))))
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(MatrixSpec {
            rows,
            denominator: den as i64,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Builtin {
    Psk16,
    Qam16,
}

/// A code description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CodeDescriptor {
    Crt {
        ring: RingTag,
        primes: Vec<Vec<i64>>,
        base: BaseSpec,
    },
    Hurwitz {
        primes: Vec<i64>,
        base: BaseSpec,
    },
    Custom {
        components: Vec<MatrixSpec>,
        coarse: MatrixSpec,
        #[serde(default = "cartesian")]
        frame: Frame,
    },
    Builtin {
        name: Builtin,
    },
}

fn cartesian() -> Frame {
    Frame::Cartesian
}

/// A built descriptor.
#[derive(Debug, Clone)]
pub enum BuiltCode {
    Lattice(LatticeIndexCode),
    Labeled(LabeledConstellation),
}

impl BuiltCode {
    /// The labelled point set, enumerating lattice codes up to `cap`.
    pub fn constellation(&self, cap: u128) -> Result<LabeledConstellation> {
        match self {
            BuiltCode::Lattice(c) => LabeledConstellation::from_code(c, cap),
            BuiltCode::Labeled(c) => Ok(c.clone()),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            BuiltCode::Lattice(c) => c.k(),
            BuiltCode::Labeled(c) => c.k(),
        }
    }
}

impl CodeDescriptor {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("descriptor: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serialises")
    }

    /// Compact form, stable for hashing.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("descriptor serialises")
    }

    pub fn build(&self) -> Result<BuiltCode> {
        match self {
            CodeDescriptor::Crt { ring, primes, base } => {
                let primes = primes
                    .iter()
                    .map(|c| RingElement::from_coords(*ring, c))
                    .collect::<Result<Vec<_>>>()?;
                let base = base.build()?;
                Ok(BuiltCode::Lattice(LatticeIndexCode::construct_crt(*ring, &primes, &base)?))
            }
            CodeDescriptor::Hurwitz { primes, base } => Ok(BuiltCode::Lattice(LatticeIndexCode::construct_hurwitz(
                primes,
                &base.build()?,
            )?)),
            CodeDescriptor::Custom {
                components,
                coarse,
                frame,
            } => {
                let components = components.iter().map(|m| m.build(*frame)).collect::<Result<Vec<_>>>()?;
                Ok(BuiltCode::Lattice(LatticeIndexCode::construct_custom(
                    components,
                    coarse.build(*frame)?,
                )?))
            }
            CodeDescriptor::Builtin { name } => Ok(BuiltCode::Labeled(match name {
                Builtin::Psk16 => LabeledConstellation::psk16(),
                Builtin::Qam16 => LabeledConstellation::qam16_set_partition(),
            })),
        }
    }

    /// Descriptor reproducing a code.
    pub fn from_code(code: &LatticeIndexCode) -> Result<Self> {
        match code.construction() {
            Construction::Crt { primes, .. } => Ok(CodeDescriptor::Crt {
                ring: code.ring().expect("ring code"),
                primes: primes.iter().map(|p| p.coords().to_vec()).collect(),
                base: BaseSpec::from_lattice(code.base().expect("ring code")),
            }),
            Construction::Hurwitz { primes, .. } => Ok(CodeDescriptor::Hurwitz {
                primes: primes.clone(),
                base: BaseSpec::from_lattice(code.base().expect("ring code")),
            }),
            Construction::Custom => Ok(CodeDescriptor::Custom {
                components: code.components().iter().map(MatrixSpec::from_lattice).collect::<Result<_>>()?,
                coarse: MatrixSpec::from_lattice(code.coarse())?,
                frame: code.coarse().frame(),
            }),
        }
    }
}

/// A superposition scheme: a two-message inner code and an outer nested
/// pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeDescriptor {
    pub inner: CodeDescriptor,
    pub outer: MatrixSpec,
    pub outer_coarse: MatrixSpec,
}

impl SchemeDescriptor {
    pub fn qam25() -> Self {
        SchemeDescriptor {
            inner: CodeDescriptor::Crt {
                ring: RingTag::Gaussian,
                primes: vec![vec![1, 2], vec![1, -2]],
                base: BaseSpec::Named(BaseLattice::Zi),
            },
            outer: MatrixSpec::new(vec![vec![10, -5], vec![5, 10]]),
            outer_coarse: MatrixSpec::new(vec![vec![25, 0], vec![0, 25]]),
        }
    }

    pub fn build(&self) -> Result<SuperpositionScheme> {
        let inner = match self.inner.build()? {
            BuiltCode::Lattice(c) => c,
            BuiltCode::Labeled(_) => {
                return Err(Error::InvalidInput("the inner code must be a lattice index code".into()))
            }
        };
        let frame = inner.coarse().frame();
        SuperpositionScheme::new(inner, self.outer.build(frame)?, self.outer_coarse.build(frame)?)
    }
}
