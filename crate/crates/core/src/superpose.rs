//! Three-receiver private-message broadcast with superposition coding.
//!
//! A two-message index code `Λ₁, Λ₂ ⊃ Λ_c⁽¹²⁾` supplies the cloud particles
//! `x₁₂ = (x₁ + x₂) mod Λ_c⁽¹²⁾`; a nested pair `Λ₃ ⊃ Λ_c⁽³⁾` supplies the
//! cloud centres `x₃`. The transmitted vector is `x₁₂ + x₃`.
//!
//! Receiver `j` demands message `j`. Rx2 knows `w₁`; the others know
//! nothing. Rx3 treats `x₁₂` as noise and decodes to the nearest centre.
//! Rx1 and Rx2 first decode `w₃` the same way, cancel `x₃`, then decode the
//! inner codebook (Rx2 restricted to the subcode with its known `w₁`).

use rand::Rng;
use serde::Serialize;

use crate::codes::{mask_of, LatticeIndexCode};
use crate::error::{Error, Result};
use crate::lattices::{coset_leaders_exact, RealLattice, COSET_CAP};
use crate::simulate::{batch_rng, db_to_linear, fill_gaussian, q_function, run_point, SerCurve, SerPoint, StopRule};
use crate::{ExactPoint, Rational, Scalar};

/// One of the three receivers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Receiver {
    Rx1,
    Rx2,
    Rx3,
}

impl Receiver {
    pub const ALL: [Receiver; 3] = [Receiver::Rx1, Receiver::Rx2, Receiver::Rx3];

    pub fn index(self) -> usize {
        match self {
            Receiver::Rx1 => 0,
            Receiver::Rx2 => 1,
            Receiver::Rx3 => 2,
        }
    }
}

/// Messages recovered by a receiver. Messages a receiver does not decode
/// are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Estimate {
    pub w1: Option<usize>,
    pub w2: Option<usize>,
    pub w3: usize,
}

/// Closed-form high-SNR gaps relative to Rx1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DesignGaps {
    /// `10·log₁₀(d²(Λ₂)/d²(Λ₁₂))`.
    pub gap21_db: f64,
    /// `10·log₁₀((d(Λ₃) − 2r_cov)²/d²(Λ₁₂))`.
    pub gap31_db: f64,
    /// `d(Λ₃) − 2r_cov(Λ_c⁽¹²⁾)`.
    pub margin: f64,
}

impl DesignGaps {
    pub fn to_csv(&self) -> Result<String> {
        let io = |e: csv::Error| Error::InvalidInput(e.to_string());
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["gap21_db", "gap31_db", "margin"]).map_err(io)?;
        w.write_record([self.gap21_db, self.gap31_db, self.margin].map(|v| format!("{v:.6}")))
            .map_err(io)?;
        let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Union-bound style estimates for the three receivers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorEstimates {
    pub rx1: f64,
    pub rx2: f64,
    pub rx3: f64,
}

impl ErrorEstimates {
    pub fn get(&self, rx: Receiver) -> f64 {
        match rx {
            Receiver::Rx1 => self.rx1,
            Receiver::Rx2 => self.rx2,
            Receiver::Rx3 => self.rx3,
        }
    }
}

/// Superposition of an index code and a nested lattice code.
#[derive(Debug, Clone)]
pub struct SuperpositionScheme {
    inner: LatticeIndexCode,
    outer: RealLattice,
    outer_coarse: RealLattice,
    /// Inner codebook in mixed-radix order (`w₁` fastest).
    particles: Vec<ExactPoint>,
    /// Coset leaders of `Λ₃/Λ_c⁽³⁾`.
    centers: Vec<ExactPoint>,
    particles_real: Vec<Vec<f64>>,
    centers_real: Vec<Vec<f64>>,
    /// `r_cov²(Λ_c⁽¹²⁾)`.
    r_cov_sq: Rational,
}

impl SuperpositionScheme {
    pub fn new(inner: LatticeIndexCode, outer: RealLattice, outer_coarse: RealLattice) -> Result<Self> {
        if inner.k() != 2 {
            return Err(Error::InvalidInput(format!("inner code must carry 2 messages, not {}", inner.k())));
        }
        if outer.dim() != inner.dim() || outer_coarse.dim() != inner.dim() {
            return Err(Error::IncompatibleDimensions(format!(
                "inner code has dimension {}, outer lattices {} and {}",
                inner.dim(),
                outer.dim(),
                outer_coarse.dim()
            )));
        }
        if outer.frame() != inner.coarse().frame() || outer_coarse.frame() != outer.frame() {
            return Err(Error::IrrationalBasisMismatch);
        }
        // Rejects anything but a scaled cubic coarse lattice.
        inner.coarse().covering_radius()?;
        let c_sq = inner.coarse().gram()[(0, 0)];
        let r_cov_sq = c_sq * Rational::from_integer(inner.dim() as i128) / Rational::from_integer(4);
        let particles = inner.codebook_exact(crate::codes::CODEBOOK_CAP)?;
        let centers = coset_leaders_exact(&outer, &outer_coarse, COSET_CAP)?;
        let particles_real = particles.iter().map(|p| outer.to_real(p)).collect();
        let centers_real = centers.iter().map(|p| outer.to_real(p)).collect();
        Ok(SuperpositionScheme {
            inner,
            outer,
            outer_coarse,
            particles,
            centers,
            particles_real,
            centers_real,
            r_cov_sq,
        })
    }

    /// 25-QAM index code over `ℤ[i]` with primes `1 ± 2i`, and cloud
    /// centres from the lattice with columns `(10, 5)`, `(−5, 10)` modulo
    /// `25ℤ²`.
    pub fn qam25() -> Self {
        use crate::lattices::RingLattice;
        use crate::rings::{RingElement, RingTag};
        let g = RingElement::gaussian;
        let inner = LatticeIndexCode::construct_crt(RingTag::Gaussian, &[g(1, 2), g(1, -2)], &RingLattice::gaussian())
            .expect("valid construction");
        let outer = RealLattice::from_integer_rows(&[vec![10, -5], vec![5, 10]]).expect("full rank");
        SuperpositionScheme::new(inner, outer, RealLattice::scaled_integer(25, 2)).expect("valid scheme")
    }

    pub fn inner(&self) -> &LatticeIndexCode {
        &self.inner
    }

    pub fn outer(&self) -> &RealLattice {
        &self.outer
    }

    pub fn outer_coarse(&self) -> &RealLattice {
        &self.outer_coarse
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Alphabet sizes `(|W₁|, |W₂|, |W₃|)`.
    pub fn sizes(&self) -> [usize; 3] {
        let s = self.inner.sizes();
        [s[0], s[1], self.centers.len()]
    }

    /// Rates in b/dim.
    pub fn rates(&self) -> [f64; 3] {
        self.sizes().map(|s| (s as f64).log2() / self.dim() as f64)
    }

    pub fn centers(&self) -> &[ExactPoint] {
        &self.centers
    }

    pub fn particles(&self) -> &[ExactPoint] {
        &self.particles
    }

    pub fn covering_radius(&self) -> f64 {
        self.r_cov_sq.approx().sqrt()
    }

    fn particle_index(&self, w1: usize, w2: usize) -> usize {
        w1 + self.inner.sizes()[0] * w2
    }

    fn check(&self, w: [usize; 3]) -> Result<()> {
        for (k, (&v, s)) in w.iter().zip(self.sizes()).enumerate() {
            if v >= s {
                return Err(Error::InvalidInput(format!("message {} index {v} is outside 0..{s}", k + 1)));
            }
        }
        Ok(())
    }

    /// `x₁₂ + x₃` in exact frame coordinates.
    pub fn encode3_exact(&self, w1: usize, w2: usize, w3: usize) -> Result<ExactPoint> {
        self.check([w1, w2, w3])?;
        let p = &self.particles[self.particle_index(w1, w2)];
        Ok(p.iter().zip(&self.centers[w3]).map(|(a, b)| a + b).collect())
    }

    pub fn encode3(&self, w1: usize, w2: usize, w3: usize) -> Result<Vec<f64>> {
        Ok(self.outer.to_real(&self.encode3_exact(w1, w2, w3)?))
    }

    fn nearest<'a>(candidates: impl Iterator<Item = (usize, &'a Vec<f64>)>, y: &[f64]) -> usize {
        let mut best = (usize::MAX, f64::INFINITY);
        for (i, p) in candidates {
            let d: f64 = p.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
            if d < best.1 {
                best = (i, d);
            }
        }
        best.0
    }

    /// Decodes `y` at receiver `rx`. Rx2 needs its known `w₁` as
    /// `side_info`; the other receivers ignore it.
    pub fn decode_rx(&self, rx: Receiver, y: &[f64], side_info: Option<usize>) -> Result<Estimate> {
        if y.len() != self.dim() {
            return Err(Error::IncompatibleDimensions(format!("received vector has length {}", y.len())));
        }
        let w3 = Self::nearest(self.centers_real.iter().enumerate(), y);
        let residual: Vec<f64> = y.iter().zip(&self.centers_real[w3]).map(|(a, b)| a - b).collect();
        let q = self.inner.sizes()[0];
        match rx {
            Receiver::Rx3 => Ok(Estimate { w1: None, w2: None, w3 }),
            Receiver::Rx1 => {
                let i = Self::nearest(self.particles_real.iter().enumerate(), &residual);
                Ok(Estimate {
                    w1: Some(i % q),
                    w2: Some(i / q),
                    w3,
                })
            }
            Receiver::Rx2 => {
                let a1 = side_info.ok_or_else(|| Error::InvalidInput("Rx2 needs the value of w1".into()))?;
                if a1 >= q {
                    return Err(Error::InvalidInput(format!("w1 = {a1} is outside 0..{q}")));
                }
                let sub = self.particles_real.iter().enumerate().skip(a1).step_by(q);
                let i = Self::nearest(sub, &residual);
                Ok(Estimate {
                    w1: Some(a1),
                    w2: Some(i / q),
                    w3,
                })
            }
        }
    }

    /// True when the receiver got its demanded message and, for Rx1 and
    /// Rx2, the interfering `w₃` it cancelled.
    fn is_error(rx: Receiver, sent: [usize; 3], est: &Estimate) -> bool {
        est.w3 != sent[2]
            || match rx {
                Receiver::Rx1 => est.w1 != Some(sent[0]),
                Receiver::Rx2 => est.w2 != Some(sent[1]),
                Receiver::Rx3 => false,
            }
    }

    /// Squared distances `(d²(Λ₁₂), d²(Λ₂), d²(Λ₃))`.
    pub fn distances_sq(&self) -> Result<[Rational; 3]> {
        Ok([
            self.inner.distance_sq(0)?,
            self.inner.distance_sq(mask_of(&[1]))?,
            self.outer.min_distance_sq()?,
        ])
    }

    /// `d(Λ₃) − 2r_cov(Λ_c⁽¹²⁾)`, or `NegativeMargin` when it is not
    /// positive. The sign is decided exactly.
    pub fn margin(&self) -> Result<f64> {
        let d3_sq = self.outer.min_distance_sq()?;
        let m = d3_sq.approx().sqrt() - 2.0 * self.covering_radius();
        if d3_sq <= self.r_cov_sq * Rational::from_integer(4) {
            return Err(Error::NegativeMargin(m.min(0.0)));
        }
        Ok(m)
    }

    pub fn design_gaps(&self) -> Result<DesignGaps> {
        let margin = self.margin()?;
        let [d12, d2, _] = self.distances_sq()?;
        let d12 = d12.approx();
        Ok(DesignGaps {
            gap21_db: 10.0 * (d2.approx() / d12).log10(),
            gap31_db: 10.0 * (margin * margin / d12).log10(),
            margin,
        })
    }

    /// Right-hand sides of the approximate bounds at noise variances
    /// `N₁ ≤ N₂ ≤ N₃` per dimension.
    pub fn union_bound_estimates(&self, n1: f64, n2: f64, n3: f64) -> Result<ErrorEstimates> {
        if !(n1 > 0.0 && n1 <= n2 && n2 <= n3) {
            return Err(Error::InvalidInput(format!("noise variances must satisfy 0 < N1 <= N2 <= N3, got {n1}, {n2}, {n3}")));
        }
        let margin = self.margin()?;
        let [d12, d2, _] = self.distances_sq()?;
        let tau12 = self.inner.lattice().kissing_number()? as f64;
        let tau2 = self.inner.components()[1].kissing_number()? as f64;
        let tau3 = self.outer.kissing_number()? as f64;
        let interference = |n: f64| tau3 * q_function(margin / (2.0 * n.sqrt()));
        Ok(ErrorEstimates {
            rx1: tau12 * q_function(d12.approx().sqrt() / (2.0 * n1.sqrt())) + interference(n1),
            rx2: tau2 * q_function(d2.approx().sqrt() / (2.0 * n2.sqrt())) + interference(n2),
            rx3: interference(n3),
        })
    }

    /// Average energy per dimension of the superposed codebook.
    pub fn es_per_dim(&self) -> f64 {
        let mut total = 0.0;
        for p in &self.particles_real {
            for c in &self.centers_real {
                total += p.iter().zip(c).map(|(a, b)| (a + b) * (a + b)).sum::<f64>();
            }
        }
        total / (self.particles_real.len() * self.centers_real.len() * self.dim()) as f64
    }

    /// Noise variance per dimension at `snr_db = 10·log₁₀(E_s/N)`.
    pub fn noise_variance(&self, snr_db: f64) -> f64 {
        self.es_per_dim() / db_to_linear(snr_db)
    }

    /// SNR at which the estimate for `rx` equals `target`, by bisection.
    pub fn estimate_snr(&self, rx: Receiver, target: f64) -> Result<f64> {
        let (mut lo, mut hi) = (-20.0, 80.0);
        for _ in 0..100 {
            let mid: f64 = 0.5 * (lo + hi);
            let n = self.noise_variance(mid);
            if self.union_bound_estimates(n, n, n)?.get(rx) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// SNR grid `c − below, …, c + above` around [`Self::estimate_snr`].
    pub fn grid_around(&self, rx: Receiver, target: f64, below: f64, above: f64, step: f64) -> Result<Vec<f64>> {
        let c = (self.estimate_snr(rx, target)? / step).round() * step;
        let lo = (-below / step).floor() as i64;
        let hi = (above / step).ceil() as i64;
        Ok((lo..=hi).map(|k| c + k as f64 * step).collect())
    }

    /// Error rate of one receiver over an SNR grid. Messages are uniform;
    /// randomness follows the same keyed batches as
    /// [`crate::simulate::simulate_ser`].
    pub fn simulate(&self, rx: Receiver, snr_db: &[f64], stop: StopRule, seed: u64) -> Result<SerCurve> {
        if snr_db.is_empty() || snr_db.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("SNR grid must be nonempty and strictly increasing".into()));
        }
        let n = self.dim();
        let [s1, s2, s3] = self.sizes().map(|s| s as u64);
        let points = snr_db
            .iter()
            .enumerate()
            .map(|(g, &snr)| {
                let sigma = self.noise_variance(snr).sqrt();
                let (trials, errors) = run_point(g as u64, stop, |grid, b, count| {
                    let mut rng = batch_rng(seed, grid, b);
                    let mut z = vec![0.0; n];
                    let mut errors = 0;
                    for _ in 0..count {
                        let w = [
                            rng.random_range(0..s1) as usize,
                            rng.random_range(0..s2) as usize,
                            rng.random_range(0..s3) as usize,
                        ];
                        fill_gaussian(&mut rng, &mut z);
                        let p = &self.particles_real[self.particle_index(w[0], w[1])];
                        let c = &self.centers_real[w[2]];
                        let y: Vec<f64> = (0..n).map(|i| p[i] + c[i] + sigma * z[i]).collect();
                        let est = self.decode_rx(rx, &y, Some(w[0])).expect("valid side information");
                        if Self::is_error(rx, w, &est) {
                            errors += 1;
                        }
                    }
                    errors
                });
                SerPoint::new(snr, trials, errors)
            })
            .collect();
        Ok(SerCurve {
            code: format!("superposition-{rx:?}").to_lowercase(),
            side_info: if rx == Receiver::Rx2 { vec![1] } else { Vec::new() },
            seed,
            stop,
            points,
        })
    }
}
