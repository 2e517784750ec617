use serde::{Serialize, Serializer};

use super::{members, proper_subsets, LatticeIndexCode, Subset};
use crate::error::{Error, Result};
use crate::{Rational, Scalar};

/// Gain of one side-information set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GainEntry {
    pub mask: Subset,
    /// 1-based message indices in `S`.
    pub subset: Vec<usize>,
    pub d_s: f64,
    #[serde(serialize_with = "opt_rational")]
    pub d_s_sq: Option<Rational>,
    /// `R_S` in b/dim.
    pub rate: f64,
    /// `10·log₁₀(d_S²/d₀²) / R_S` in dB per b/dim.
    pub gain_db: f64,
}

/// Side-information gain of a code over every nonempty proper `S`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GainReport {
    pub k: usize,
    pub n: usize,
    pub d0: f64,
    #[serde(serialize_with = "opt_rational")]
    pub d0_sq: Option<Rational>,
    pub entries: Vec<GainEntry>,
    /// `Γ`, the smallest normalised gain.
    pub gamma: f64,
    /// All normalised gains agree to 1e-9.
    pub uniform: bool,
    /// `(d_S²/d₀²)ⁿ = (∏_{k∈S}|Λ_k/Λ_c|)²` holds exactly for every `S`,
    /// i.e. every gain equals `20·log₁₀2`. `None` for labelled
    /// constellations.
    pub exact_gain_law: Option<bool>,
}

fn opt_rational<S: Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

impl GainReport {
    pub(crate) fn new(
        k: usize,
        n: usize,
        d0_sq: f64,
        d0_exact: Option<Rational>,
        entries: Vec<GainEntry>,
        exact_gain_law: Option<bool>,
    ) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("gain needs at least two messages".into()));
        }
        let gamma = entries.iter().map(|e| e.gain_db).fold(f64::INFINITY, f64::min);
        let top = entries.iter().map(|e| e.gain_db).fold(f64::NEG_INFINITY, f64::max);
        let uniform = top - gamma <= 1e-9 * top.abs().max(1.0);
        Ok(GainReport {
            k,
            n,
            d0: d0_sq.sqrt(),
            d0_sq: d0_exact,
            entries,
            gamma,
            uniform,
            exact_gain_law,
        })
    }

    pub fn entry(&self, mask: Subset) -> Option<&GainEntry> {
        self.entries.iter().find(|e| e.mask == mask)
    }

    /// CSV with columns `s_mask,subset,d_s,r_s,gain_db`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidInput(e.to_string());
        w.write_record(["s_mask", "subset", "d_s", "d_s_sq", "r_s", "gain_db"]).map_err(io)?;
        for e in &self.entries {
            let subset: Vec<String> = e.subset.iter().map(ToString::to_string).collect();
            w.write_record([
                e.mask.to_string(),
                format!("{{{}}}", subset.join(",")),
                format!("{:.12}", e.d_s),
                e.d_s_sq.map_or_else(String::new, |r| r.to_string()),
                format!("{:.12}", e.rate),
                format!("{:.6}", e.gain_db),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

pub(crate) fn gain_db(d_sq_ratio: f64, rate: f64) -> f64 {
    10.0 * d_sq_ratio.log10() / rate
}

pub(super) fn lattice_gain_report(code: &LatticeIndexCode) -> Result<GainReport> {
    let k = code.k();
    let n = code.dim();
    let d0_sq = code.distance_sq(0)?;
    let mut exact = true;
    let mut entries = Vec::new();
    for s in proper_subsets(k) {
        let d_sq = code.distance_sq(s)?;
        let ratio = d_sq / d0_sq;
        let rate = code.rate(s);
        exact &= ratio_law_holds(ratio, n, code.subset_size(s));
        entries.push(GainEntry {
            mask: s,
            subset: members(s, k),
            d_s: d_sq.approx().sqrt(),
            d_s_sq: Some(d_sq),
            rate,
            gain_db: gain_db(ratio.approx(), rate),
        });
    }
    GainReport::new(k, n, d0_sq.approx(), Some(d0_sq), entries, Some(exact))
}

/// `ratioⁿ == size²` in exact arithmetic, without overflow.
pub fn ratio_law_holds(ratio: Rational, n: usize, size: u128) -> bool {
    use num_bigint::BigInt;
    let num = BigInt::from(*ratio.numer()).pow(n as u32);
    let den = BigInt::from(*ratio.denom()).pow(n as u32);
    num == den * BigInt::from(size).pow(2)
}

/// Evaluation of `R_S = log₂(d_S/d₀) + (1/n)·log₂(δ(Λ)/δ(Λ_K))` for
/// `S = {1..K−1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpperBoundCheck {
    pub rate: f64,
    pub predicted_rate: f64,
    pub identity_holds: bool,
    pub density_sum: f64,
    pub density_last: f64,
    /// `δ(Λ) ≥ δ(Λ_K)`, under which `Γ ≤ 20·log₁₀2`.
    pub sum_at_least_as_dense: bool,
    pub gamma: f64,
    pub bound_db: f64,
    pub within_bound: bool,
}

pub fn gamma_upper_bound_check(code: &LatticeIndexCode) -> Result<UpperBoundCheck> {
    let k = code.k();
    if k < 2 {
        return Err(Error::InvalidInput("gain needs at least two messages".into()));
    }
    let s: Subset = (1 << (k - 1)) - 1;
    let n = code.dim() as f64;
    let d_s = code.distance(s)?;
    let d0 = code.distance(0)?;
    let density_sum = code.lattice().center_density()?;
    let density_last = code.components()[k - 1].center_density()?;
    let rate = code.rate(s);
    let predicted_rate = (d_s / d0).log2() + (density_sum / density_last).log2() / n;
    let exact_densities =
        code.lattice().center_density_sq()? >= code.components()[k - 1].center_density_sq()?;
    let gamma = code.gain_report()?.gamma;
    let bound_db = 20.0 * 2f64.log10();
    Ok(UpperBoundCheck {
        rate,
        predicted_rate,
        identity_holds: (rate - predicted_rate).abs() <= 1e-9,
        density_sum,
        density_last,
        sum_at_least_as_dense: exact_densities,
        gamma,
        bound_db,
        within_bound: gamma <= bound_db + 1e-9,
    })
}
