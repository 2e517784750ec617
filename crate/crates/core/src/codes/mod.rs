//! Lattice index codes.
//!
//! A code is a list of nested pairs `Λ_k ⊇ Λ_c` together with the encoder
//! `ρ(x₁,…,x_K) = (x₁ + ⋯ + x_K) mod Λ_c`. Message `k` is an index into the
//! sorted coset leaders of `Λ_k/Λ_c`.
//!
//! Side-information sets are bit masks: bit `k` set means message `k + 1` is
//! known at the receiver.

mod analysis;
mod labeled;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattices::{coset_leaders_exact, quotient_size, sum_lattice, RealLattice, RingLattice, COSET_CAP};
use crate::rings::{
    canonical, exact_div, four_square_pow2_real, gcd_commutative, gcrd_hurwitz, is_prime_element, RingElement,
    RingTag,
};
use crate::{ExactPoint, Rational};

pub use analysis::{gamma_upper_bound_check, ratio_law_holds, GainEntry, GainReport, UpperBoundCheck};
pub use labeled::LabeledConstellation;

/// Cap on enumerated codebooks used by decoders and oracles.
pub const CODEBOOK_CAP: u128 = 100_000;

/// Side-information set as a bit mask over message indices.
pub type Subset = u32;

/// 1-based message indices of a mask, e.g. `0b101 → [1, 3]`.
pub fn members(s: Subset, k: usize) -> Vec<usize> {
    (0..k).filter(|i| s >> i & 1 == 1).map(|i| i + 1).collect()
}

/// Mask of a list of 1-based message indices.
pub fn mask_of(messages: &[usize]) -> Subset {
    messages.iter().fold(0, |m, &i| m | 1 << (i - 1))
}

/// All nonempty proper subsets of `{1..k}`, in mask order.
pub fn proper_subsets(k: usize) -> impl Iterator<Item = Subset> {
    1..(1u32 << k) - 1
}

/// Known message values: `values[j]` is the index of the `j`-th member of
/// `mask` (in increasing message order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SideInfo {
    pub mask: Subset,
    pub values: Vec<usize>,
}

impl SideInfo {
    pub fn none() -> Self {
        SideInfo { mask: 0, values: Vec::new() }
    }
}

/// How the component lattices were obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum Construction {
    /// `Λ_k = Ψ(M_k Λ̃)` with `M = ∏φ_k`, `M_k = M/φ_k`.
    Crt {
        primes: Vec<RingElement>,
        m: RingElement,
        m_k: Vec<RingElement>,
    },
    /// `Λ_k = Ψ(Λ̃ M_k)` over the Hurwitz integers, two messages per prime.
    Hurwitz {
        primes: Vec<i64>,
        p: Vec<RingElement>,
        m: RingElement,
        m_k: Vec<RingElement>,
    },
    /// Explicit generator matrices.
    Custom,
}

/// A lattice index code with exact geometry.
#[derive(Debug, Clone)]
pub struct LatticeIndexCode {
    construction: Construction,
    base: Option<RingLattice>,
    components: Vec<RealLattice>,
    coarse: RealLattice,
    lattice: RealLattice,
    alphabets: Vec<Vec<ExactPoint>>,
}

fn scaled(base: &RingLattice, m: RingElement) -> RingLattice {
    match base.scale {
        Some(s) => base.with_scale(s * m),
        None => base.with_scale(m),
    }
}

impl LatticeIndexCode {
    /// Chinese-remainder construction over ℤ, ℤ\[i\] or ℤ\[ω\].
    pub fn construct_crt(ring: RingTag, primes: &[RingElement], base: &RingLattice) -> Result<Self> {
        if !ring.is_commutative() {
            return Err(Error::RingMismatch("use construct_hurwitz for the Hurwitz integers".into()));
        }
        if base.ring != ring || primes.iter().any(|p| p.tag() != ring) {
            return Err(Error::RingMismatch(format!("primes and base must lie in {ring}")));
        }
        if primes.is_empty() {
            return Err(Error::InvalidInput("at least one prime is required".into()));
        }
        for p in primes {
            if !is_prime_element(p) {
                return Err(Error::NotPrime(p.to_string()));
            }
        }
        for (i, a) in primes.iter().enumerate() {
            for b in &primes[i + 1..] {
                if canonical(a) == canonical(b) {
                    return Err(Error::AssociatePrimes(a.to_string(), b.to_string()));
                }
            }
        }
        let m = primes.iter().fold(RingElement::one(ring), |acc, p| acc * *p);
        let m_k = primes.iter().map(|p| exact_div(&m, p)).collect::<Result<Vec<_>>>()?;
        let components = m_k
            .iter()
            .map(|mk| scaled(base, *mk).real_embedding())
            .collect::<Result<Vec<_>>>()?;
        let coarse = scaled(base, m).real_embedding()?;
        Self::assemble(
            Construction::Crt {
                primes: primes.to_vec(),
                m,
                m_k,
            },
            Some(base.clone()),
            components,
            coarse,
        )
    }

    /// Quaternionic construction: for odd primes `p₁..p_L`, messages
    /// `k ≤ L` use `M_k = P_k ∏_{ℓ≠k} p_ℓ` and messages `k + L` use the
    /// conjugate of `P_k`, where `N(P_k) = p_k`.
    pub fn construct_hurwitz(odd_primes: &[i64], base: &RingLattice) -> Result<Self> {
        if base.ring != RingTag::Hurwitz {
            return Err(Error::RingMismatch("base lattice must be a Hurwitz lattice".into()));
        }
        if odd_primes.is_empty() {
            return Err(Error::InvalidInput("at least one prime is required".into()));
        }
        for (i, &p) in odd_primes.iter().enumerate() {
            if p % 2 == 0 {
                return Err(Error::NotOdd(p));
            }
            if !crate::rings::is_rational_prime(p as i128) {
                return Err(Error::NotPrime(p.to_string()));
            }
            if odd_primes[..i].contains(&p) {
                return Err(Error::DuplicatePrime(p));
            }
        }
        if let Some((v, e)) = base.right_closure_witness()? {
            let v: Vec<String> = v.iter().map(ToString::to_string).collect();
            return Err(Error::NotTwoSidedModule(format!("({}) * {e}", v.join(", "))));
        }
        let h = |v: i64| RingElement::from_int(RingTag::Hurwitz, v);
        let p: Vec<RingElement> = odd_primes
            .iter()
            .map(|&q| four_square_pow2_real(q))
            .collect::<Result<_>>()?;
        let m = odd_primes.iter().fold(h(1), |acc, &q| acc * h(q));
        let others = |k: usize| {
            odd_primes
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != k)
                .fold(h(1), |acc, (_, &q)| acc * h(q))
        };
        let l = odd_primes.len();
        let m_k: Vec<RingElement> = (0..2 * l)
            .map(|k| {
                if k < l {
                    p[k] * others(k)
                } else {
                    p[k - l].conjugate() * others(k - l)
                }
            })
            .collect();
        let components = m_k
            .iter()
            .map(|mk| scaled(base, *mk).real_embedding())
            .collect::<Result<Vec<_>>>()?;
        let coarse = scaled(base, m).real_embedding()?;
        Self::assemble(
            Construction::Hurwitz {
                primes: odd_primes.to_vec(),
                p,
                m,
                m_k,
            },
            Some(base.clone()),
            components,
            coarse,
        )
    }

    /// Code over explicit component lattices and a common coarse lattice.
    pub fn construct_custom(components: Vec<RealLattice>, coarse: RealLattice) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidInput("at least one component is required".into()));
        }
        Self::assemble(Construction::Custom, None, components, coarse)
    }

    fn assemble(
        construction: Construction,
        base: Option<RingLattice>,
        components: Vec<RealLattice>,
        coarse: RealLattice,
    ) -> Result<Self> {
        let refs: Vec<&RealLattice> = components.iter().collect();
        let lattice = sum_lattice(&refs)?;
        let sizes = components
            .iter()
            .map(|c| quotient_size(c, &coarse))
            .collect::<Result<Vec<_>>>()?;
        let product = sizes.iter().try_fold(1u128, |acc, &s| acc.checked_mul(s));
        let codebook = quotient_size(&lattice, &coarse)?;
        // ρ is a surjective homomorphism onto Λ/Λ_c, so it is injective
        // exactly when the two groups have the same order.
        if product != Some(codebook) {
            return Err(Error::NotInjective {
                product: product.unwrap_or(u128::MAX),
                codebook,
            });
        }
        let alphabets = components
            .iter()
            .map(|c| coset_leaders_exact(c, &coarse, COSET_CAP))
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticeIndexCode {
            construction,
            base,
            components,
            coarse,
            lattice,
            alphabets,
        })
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn ring(&self) -> Option<RingTag> {
        self.base.as_ref().map(|b| b.ring)
    }

    pub fn base(&self) -> Option<&RingLattice> {
        self.base.as_ref()
    }

    /// Number of messages `K`.
    pub fn k(&self) -> usize {
        self.components.len()
    }

    /// Real dimension `n`.
    pub fn dim(&self) -> usize {
        self.coarse.dim()
    }

    pub fn components(&self) -> &[RealLattice] {
        &self.components
    }

    pub fn coarse(&self) -> &RealLattice {
        &self.coarse
    }

    /// The sum `Λ = Λ₁ + ⋯ + Λ_K`.
    pub fn lattice(&self) -> &RealLattice {
        &self.lattice
    }

    /// Coset leaders of `Λ_k/Λ_c`, 0-based `k`.
    pub fn alphabet(&self, k: usize) -> &[ExactPoint] {
        &self.alphabets[k]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.alphabets.iter().map(Vec::len).collect()
    }

    /// `|𝒞| = ∏|Λ_k/Λ_c|`.
    pub fn codebook_size(&self) -> u128 {
        self.sizes().iter().map(|&s| s as u128).product()
    }

    /// Message rates `R_k = log₂|Λ_k/Λ_c| / n` in b/dim.
    pub fn rates(&self) -> Vec<f64> {
        let n = self.dim() as f64;
        self.sizes().iter().map(|&s| (s as f64).log2() / n).collect()
    }

    /// `R_S = Σ_{k∈S} R_k`.
    pub fn rate(&self, s: Subset) -> f64 {
        self.rates()
            .iter()
            .enumerate()
            .filter(|(k, _)| s >> k & 1 == 1)
            .map(|(_, r)| r)
            .sum()
    }

    /// `∏_{k∈S} |Λ_k/Λ_c|`.
    pub fn subset_size(&self, s: Subset) -> u128 {
        self.sizes()
            .iter()
            .enumerate()
            .filter(|(k, _)| s >> k & 1 == 1)
            .map(|(_, &v)| v as u128)
            .product()
    }

    fn check_tuple(&self, w: &[usize]) -> Result<()> {
        if w.len() != self.k() {
            return Err(Error::InvalidInput(format!("expected {} messages, got {}", self.k(), w.len())));
        }
        for (k, (&v, a)) in w.iter().zip(&self.alphabets).enumerate() {
            if v >= a.len() {
                return Err(Error::InvalidInput(format!(
                    "message {} index {v} is outside 0..{}",
                    k + 1,
                    a.len()
                )));
            }
        }
        Ok(())
    }

    /// `ρ(w)` in exact frame coordinates.
    pub fn encode_exact(&self, w: &[usize]) -> Result<ExactPoint> {
        self.check_tuple(w)?;
        let mut sum = vec![Rational::from_integer(0); self.dim()];
        for (k, &v) in w.iter().enumerate() {
            for (s, x) in sum.iter_mut().zip(&self.alphabets[k][v]) {
                *s += x;
            }
        }
        Ok(self.coarse.mod_exact(&sum))
    }

    /// `ρ(w)` as a real vector.
    pub fn encode(&self, w: &[usize]) -> Result<Vec<f64>> {
        Ok(self.coarse.to_real(&self.encode_exact(w)?))
    }

    /// Message tuple of the mixed-radix index `i` (message 1 varies fastest).
    pub fn tuple(&self, mut i: u128) -> Vec<usize> {
        self.sizes()
            .iter()
            .map(|&s| {
                let v = (i % s as u128) as usize;
                i /= s as u128;
                v
            })
            .collect()
    }

    /// The full codebook in mixed-radix order of the message tuples.
    pub fn codebook_exact(&self, cap: u128) -> Result<Vec<ExactPoint>> {
        let size = self.codebook_size();
        if size > cap {
            return Err(Error::CodebookTooLarge { size, cap });
        }
        (0..size).map(|i| self.encode_exact(&self.tuple(i))).collect()
    }

    /// Codewords consistent with the side information, in mixed-radix order
    /// of the unknown messages.
    pub fn subcode(&self, info: &SideInfo) -> Result<Vec<ExactPoint>> {
        let known = members(info.mask, self.k());
        if known.len() != info.values.len() || info.mask >> self.k() != 0 {
            return Err(Error::InvalidInput("side information does not match its mask".into()));
        }
        let free: Vec<usize> = (0..self.k()).filter(|k| info.mask >> k & 1 == 0).collect();
        let size: u128 = free.iter().map(|&k| self.alphabets[k].len() as u128).product();
        if size > CODEBOOK_CAP {
            return Err(Error::CodebookTooLarge { size, cap: CODEBOOK_CAP });
        }
        let mut w = vec![0usize; self.k()];
        for (m, &v) in known.iter().zip(&info.values) {
            w[m - 1] = v;
        }
        let mut out = Vec::with_capacity(size as usize);
        for i in 0..size {
            let mut r = i;
            for &k in &free {
                let s = self.alphabets[k].len() as u128;
                w[k] = (r % s) as usize;
                r /= s;
            }
            out.push(self.encode_exact(&w)?);
        }
        Ok(out)
    }

    /// `Σ_{k∉S} Λ_k`.
    pub fn complement_sum(&self, s: Subset) -> Result<RealLattice> {
        let refs: Vec<&RealLattice> = (0..self.k())
            .filter(|k| s >> k & 1 == 0)
            .map(|k| &self.components[k])
            .collect();
        if refs.is_empty() {
            return Err(Error::InvalidInput("S must be a proper subset".into()));
        }
        sum_lattice(&refs)
    }

    /// Ring element generating `Σ_{k∉S} Λ_k` over the base, obtained as the
    /// gcd (gcrd over ℍ) of the `M_k` outside `S`.
    pub fn ring_divisor(&self, s: Subset) -> Option<Result<RingElement>> {
        let m_k = match &self.construction {
            Construction::Crt { m_k, .. } | Construction::Hurwitz { m_k, .. } => m_k,
            Construction::Custom => return None,
        };
        let outside: Vec<&RingElement> = (0..self.k()).filter(|k| s >> k & 1 == 0).map(|k| &m_k[k]).collect();
        let hurwitz = self.ring() == Some(RingTag::Hurwitz);
        Some(outside.split_first().map_or_else(
            || Err(Error::InvalidInput("S must be a proper subset".into())),
            |(first, rest)| {
                rest.iter().try_fold(canonical(first), |g, x| {
                    if hurwitz {
                        gcrd_hurwitz(x, &g)
                    } else {
                        gcd_commutative(&g, x)
                    }
                })
            },
        ))
    }

    /// The lattice `Ψ(D_S Λ̃)` (or `Ψ(Λ̃ D_S)` over ℍ) predicted by the ring
    /// structure for `Σ_{k∉S} Λ_k`.
    pub fn ring_sum_lattice(&self, s: Subset) -> Option<Result<RealLattice>> {
        let base = self.base.as_ref()?;
        Some(
            self.ring_divisor(s)?
                .and_then(|d| scaled(base, d).real_embedding()),
        )
    }

    /// Squared minimum distance of the base lattice `Ψ(Λ̃)`.
    fn base_distance_sq(&self) -> Option<Result<Rational>> {
        let base = self.base.as_ref()?;
        let plain = RingLattice {
            scale: None,
            ..base.clone()
        };
        Some(plain.real_embedding().and_then(|l| {
            let d = l.min_distance_sq()?;
            let s = base.scale.map_or(1, |s| s.norm());
            Ok(d * Rational::from_integer(s))
        }))
    }

    /// Ring-level prediction `N(D_S)·d_min²(Ψ(Λ̃))`, if the code has a ring
    /// structure.
    pub fn predicted_distance_sq(&self, s: Subset) -> Option<Result<Rational>> {
        let d = self.ring_divisor(s)?;
        let base = self.base_distance_sq()?;
        Some(d.and_then(|d| Ok(base? * Rational::from_integer(d.norm()))))
    }

    /// `d_S²`: the squared minimum distance of `Σ_{k∉S} Λ_k`, checked against
    /// the ring-level prediction when one exists. `S = ∅` gives `d₀²`.
    pub fn distance_sq(&self, s: Subset) -> Result<Rational> {
        let geometric = self.complement_sum(s)?.min_distance_sq()?;
        if let Some(predicted) = self.predicted_distance_sq(s) {
            let predicted = predicted?;
            if predicted != geometric {
                return Err(Error::MismatchedOracles(format!(
                    "S mask {s:#b}: ring {predicted} vs enumeration {geometric}"
                )));
            }
        }
        Ok(geometric)
    }

    pub fn distance(&self, s: Subset) -> Result<f64> {
        use crate::Scalar;
        Ok(self.distance_sq(s)?.approx().sqrt())
    }

    /// Per-subset gains and `Γ`.
    pub fn gain_report(&self) -> Result<GainReport> {
        analysis::lattice_gain_report(self)
    }
}
