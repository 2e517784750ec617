//! Monte Carlo symbol error rates over the AWGN channel.
//!
//! `SNR = E_s/σ²`, where `E_s` is the average codeword energy per real
//! dimension over the uniform codebook and `σ²` the noise variance per real
//! dimension. A receiver with side information `S` decodes to the nearest
//! point of the subcode consistent with its known messages; a trial is an
//! error when that point differs from the transmitted one.
//!
//! Randomness is drawn per batch from a ChaCha8 stream keyed by
//! `(seed, grid index, batch index)`. Batches run in rounds of a fixed size,
//! so results do not depend on the number of worker threads.

mod curve;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::codes::{members, LabeledConstellation, Subset};
use crate::error::{Error, Result};

pub use curve::{snr_at, snr_gain, SerCurve, SerPoint};

/// Trials per batch.
pub const BATCH: u64 = 8192;
/// Largest number of batches in one round.
const MAX_ROUND: u64 = 64;

/// Per-grid-point stopping rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_errors: u64,
    pub max_trials: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_errors: 200,
            max_trials: 1_000_000_000,
        }
    }
}

/// A receiver `(SNR grid, S)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReceiverSpec {
    /// Known messages as a bit mask.
    pub side_info: Subset,
    pub snr_db: Vec<f64>,
}

impl ReceiverSpec {
    pub fn new(side_info: Subset, snr_db: Vec<f64>) -> Result<Self> {
        if snr_db.is_empty() || snr_db.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("SNR grid must be nonempty and strictly increasing".into()));
        }
        Ok(ReceiverSpec { side_info, snr_db })
    }
}

/// `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// A codebook prepared for decoding with one side-information set.
#[derive(Debug, Clone)]
pub struct Decoder {
    n: usize,
    /// Flattened coordinates of every point.
    points: Vec<f64>,
    /// Subcode index of each point.
    group: Vec<usize>,
    /// Point indices of each subcode.
    groups: Vec<Vec<usize>>,
    es_per_dim: f64,
}

impl Decoder {
    pub fn new(c: &LabeledConstellation, side_info: Subset) -> Result<Self> {
        if side_info >> c.k() != 0 {
            return Err(Error::InvalidInput(format!("side information mask {side_info:#b} names unknown messages")));
        }
        let known = members(side_info, c.k());
        let mut keys: Vec<Vec<usize>> = Vec::new();
        let mut group = Vec::with_capacity(c.points.len());
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, l) in c.labels.iter().enumerate() {
            let key: Vec<usize> = known.iter().map(|&m| l[m - 1]).collect();
            let g = match keys.iter().position(|k| *k == key) {
                Some(g) => g,
                None => {
                    keys.push(key);
                    groups.push(Vec::new());
                    keys.len() - 1
                }
            };
            group.push(g);
            groups[g].push(i);
        }
        let energy: f64 = c.points.iter().flatten().map(|v| v * v).sum();
        Ok(Decoder {
            n: c.n,
            points: c.points.iter().flatten().copied().collect(),
            group,
            groups,
            es_per_dim: energy / (c.points.len() * c.n) as f64,
        })
    }

    pub fn es_per_dim(&self) -> f64 {
        self.es_per_dim
    }

    pub fn len(&self) -> usize {
        self.group.len()
    }

    pub fn is_empty(&self) -> bool {
        self.group.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.n..(i + 1) * self.n]
    }

    /// Noise standard deviation per dimension at the given SNR.
    pub fn sigma(&self, snr_db: f64) -> f64 {
        (self.es_per_dim / db_to_linear(snr_db)).sqrt()
    }

    /// Nearest point to `y` within the subcode of point `sent`.
    pub fn decode(&self, sent: usize, y: &[f64]) -> usize {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for &j in &self.groups[self.group[sent]] {
            let d: f64 = self.point(j).iter().zip(y).map(|(p, v)| (p - v) * (p - v)).sum();
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        best
    }

    /// Union bound `(1/|𝒞|) Σ_i Σ_{j ≠ i in the subcode} Q(‖x_i − x_j‖/2σ)`.
    pub fn union_bound(&self, snr_db: f64) -> f64 {
        let sigma = self.sigma(snr_db);
        let mut total = 0.0;
        for g in &self.groups {
            for &i in g {
                for &j in g {
                    if i != j {
                        let d: f64 = self
                            .point(i)
                            .iter()
                            .zip(self.point(j))
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum();
                        total += q_function(d.sqrt() / (2.0 * sigma));
                    }
                }
            }
        }
        total / self.len() as f64
    }

    /// SNR at which the union bound equals `target`, by bisection.
    pub fn union_bound_snr(&self, target: f64) -> f64 {
        let (mut lo, mut hi) = (-20.0, 80.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if self.union_bound(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Grid `center − below, …, center + above` in steps of `step`, centred on
/// the union-bound prediction for `target`.
pub fn grid_around(
    c: &LabeledConstellation,
    side_info: Subset,
    target: f64,
    below: f64,
    above: f64,
    step: f64,
) -> Result<Vec<f64>> {
    let center = Decoder::new(c, side_info)?.union_bound_snr(target);
    let center = (center / step).round() * step;
    let lo = ((-below) / step).floor() as i64;
    let hi = (above / step).ceil() as i64;
    Ok((lo..=hi).map(|k| center + k as f64 * step).collect())
}

/// Standard normal pair by Box–Muller.
fn gaussian_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
    (r * c, r * s)
}

/// Generator for one batch: the key is `(seed, grid index, batch index)`.
pub fn batch_rng(seed: u64, grid: u64, batch: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&grid.to_le_bytes());
    key[16..24].copy_from_slice(&batch.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Fills `z` with i.i.d. standard normal samples.
pub fn fill_gaussian(rng: &mut ChaCha8Rng, z: &mut [f64]) {
    let mut chunks = z.chunks_exact_mut(2);
    for pair in &mut chunks {
        let (a, b) = gaussian_pair(rng);
        pair[0] = a;
        pair[1] = b;
    }
    if let [last] = chunks.into_remainder() {
        *last = gaussian_pair(rng).0;
    }
}

/// Runs batches in deterministic rounds until the stop rule is met.
///
/// `batch(grid, index, trials)` returns the error count of one batch.
pub(crate) fn run_point(grid: u64, stop: StopRule, batch: impl Fn(u64, u64, u64) -> u64 + Sync) -> (u64, u64) {
    let max_batches = stop.max_trials.div_ceil(BATCH);
    let (mut trials, mut errors, mut next, mut round) = (0u64, 0u64, 0u64, 1u64);
    while errors < stop.min_errors && next < max_batches {
        let end = (next + round).min(max_batches);
        let (t, e) = (next..end)
            .into_par_iter()
            .map(|b| {
                let n = BATCH.min(stop.max_trials - b * BATCH);
                (n, batch(grid, b, n))
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        trials += t;
        errors += e;
        next = end;
        round = (round * 2).min(MAX_ROUND);
    }
    (trials, errors)
}

/// Symbol (codeword) error rate of a receiver over its SNR grid.
pub fn simulate_ser(c: &LabeledConstellation, spec: &ReceiverSpec, stop: StopRule, seed: u64) -> Result<SerCurve> {
    let spec = ReceiverSpec::new(spec.side_info, spec.snr_db.clone())?;
    let dec = Decoder::new(c, spec.side_info)?;
    let n = dec.n;
    let size = dec.len() as u64;
    let points = spec
        .snr_db
        .iter()
        .enumerate()
        .map(|(g, &snr_db)| {
            let sigma = dec.sigma(snr_db);
            let (trials, errors) = run_point(g as u64, stop, |grid, b, count| {
                let mut rng = batch_rng(seed, grid, b);
                let mut z = vec![0.0; n];
                let mut y = vec![0.0; n];
                let mut errors = 0;
                for _ in 0..count {
                    let sent = rng.random_range(0..size) as usize;
                    fill_gaussian(&mut rng, &mut z);
                    for ((y, x), z) in y.iter_mut().zip(dec.point(sent)).zip(&z) {
                        *y = x + sigma * z;
                    }
                    if dec.decode(sent, &y) != sent {
                        errors += 1;
                    }
                }
                errors
            });
            SerPoint::new(snr_db, trials, errors)
        })
        .collect();
    Ok(SerCurve {
        code: c.name.clone(),
        side_info: members(spec.side_info, c.k()),
        seed,
        stop,
        points,
    })
}

/// Symbol error rate of `m × m` QAM with nearest-point decoding, under the
/// same SNR normalisation as [`simulate_ser`].
pub fn square_qam_ser(m_per_axis: u32, snr_db: f64) -> f64 {
    assert!(m_per_axis >= 2, "QAM needs at least two levels per axis");
    let m = m_per_axis as f64;
    // Unit spacing: E_s per dimension is (m² − 1)/12.
    let es = (m * m - 1.0) / 12.0;
    let sigma = (es / db_to_linear(snr_db)).sqrt();
    let p1 = 2.0 * (1.0 - 1.0 / m) * q_function(0.5 / sigma);
    1.0 - (1.0 - p1) * (1.0 - p1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::mask_of;

    fn pam(m: usize) -> LabeledConstellation {
        let points = (0..m).map(|i| vec![i as f64 - (m as f64 - 1.0) / 2.0]).collect();
        LabeledConstellation::new("pam", points, (0..m).map(|i| vec![i]).collect(), vec![m]).unwrap()
    }

    #[test]
    fn q_function_values() {
        assert!((q_function(0.0) - 0.5).abs() < 1e-15);
        assert!((q_function(1.0) - 0.158_655_253_931_457).abs() < 1e-10);
        assert!((q_function(4.0) / 3.167_124_183_311_998e-5 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn qam_limits() {
        assert!(square_qam_ser(5, 80.0) < 1e-300);
        let low = square_qam_ser(5, -60.0);
        assert!(low < 1.0 && (low - (1.0 - 1.0 / 25.0)).abs() < 1e-2);
    }

    #[test]
    fn grid_must_increase() {
        assert!(ReceiverSpec::new(0, vec![1.0, 1.0]).is_err());
        assert!(ReceiverSpec::new(0, vec![]).is_err());
    }

    #[test]
    fn deterministic_regardless_of_threads() {
        let c = LabeledConstellation::qam16_set_partition();
        let spec = ReceiverSpec::new(mask_of(&[1]), vec![8.0, 10.0]).unwrap();
        let stop = StopRule {
            min_errors: 50,
            max_trials: 200_000,
        };
        let a = simulate_ser(&c, &spec, stop, 7).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| simulate_ser(&c, &spec, stop, 7).unwrap());
        assert_eq!(a, b);
        let c2 = simulate_ser(&c, &spec, stop, 8).unwrap();
        assert_ne!(a, c2);
    }

    #[test]
    fn stop_rule_is_respected() {
        let c = pam(4);
        let spec = ReceiverSpec::new(0, vec![40.0]).unwrap();
        let stop = StopRule {
            min_errors: 10,
            max_trials: 10_000,
        };
        let curve = simulate_ser(&c, &spec, stop, 1).unwrap();
        assert_eq!(curve.points[0].trials, 10_000);
        assert_eq!(curve.points[0].errors, 0);
    }

    #[test]
    fn pam_matches_closed_form() {
        // 4-PAM: SER = 2(1 − 1/4) Q(1/(2σ)).
        let c = pam(4);
        let dec = Decoder::new(&c, 0).unwrap();
        let spec = ReceiverSpec::new(0, vec![10.0, 12.0]).unwrap();
        let curve = simulate_ser(&c, &spec, StopRule { min_errors: 2000, max_trials: 10_000_000 }, 3).unwrap();
        for p in &curve.points {
            let want = 1.5 * q_function(0.5 / dec.sigma(p.snr_db));
            assert!((p.ser - want).abs() < 4.0 * p.std_err(), "{} vs {want}", p.ser);
        }
        // For PAM the pairwise union bound is exact up to the far terms.
        assert!((dec.union_bound(20.0) / (1.5 * q_function(0.5 / dec.sigma(20.0))) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn qam25_matches_simulation() {
        let points: Vec<Vec<f64>> = (0..25).map(|i| vec![(i % 5) as f64 - 2.0, (i / 5) as f64 - 2.0]).collect();
        let labels = (0..25).map(|i| vec![i]).collect();
        let c = LabeledConstellation::new("qam25", points, labels, vec![25]).unwrap();
        let spec = ReceiverSpec::new(0, vec![10.0, 14.0]).unwrap();
        let curve = simulate_ser(&c, &spec, StopRule { min_errors: 1000, max_trials: 5_000_000 }, 11).unwrap();
        for p in &curve.points {
            let want = square_qam_ser(5, p.snr_db);
            assert!((p.ser - want).abs() < 4.0 * p.std_err());
        }
    }

    #[test]
    fn union_bound_snr_inverts() {
        let c = pam(8);
        let dec = Decoder::new(&c, 0).unwrap();
        let s = dec.union_bound_snr(1e-4);
        assert!((dec.union_bound(s) / 1e-4 - 1.0).abs() < 1e-6);
        let g = grid_around(&c, 0, 1e-4, 1.0, 1.0, 0.5).unwrap();
        assert_eq!(g.len(), 5);
    }
}
