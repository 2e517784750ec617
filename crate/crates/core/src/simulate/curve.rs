use serde::{Deserialize, Serialize};

use super::StopRule;
use crate::error::{Error, Result};

/// One grid point of an error-rate curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SerPoint {
    pub snr_db: f64,
    pub trials: u64,
    pub errors: u64,
    pub ser: f64,
}

impl SerPoint {
    pub fn new(snr_db: f64, trials: u64, errors: u64) -> Self {
        let ser = if trials == 0 { 0.0 } else { errors as f64 / trials as f64 };
        SerPoint {
            snr_db,
            trials,
            errors,
            ser,
        }
    }

    /// Binomial standard error of `ser`.
    pub fn std_err(&self) -> f64 {
        if self.trials == 0 {
            return f64::INFINITY;
        }
        (self.ser * (1.0 - self.ser) / self.trials as f64).sqrt()
    }
}

/// Error rate against SNR for one receiver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SerCurve {
    /// Identifier of the codebook (a name or a descriptor hash).
    pub code: String,
    /// 1-based indices of the known messages.
    pub side_info: Vec<usize>,
    pub seed: u64,
    pub stop: StopRule,
    pub points: Vec<SerPoint>,
}

impl SerCurve {
    pub fn label(&self) -> String {
        let s: Vec<String> = self.side_info.iter().map(ToString::to_string).collect();
        format!("S={{{}}}", s.join(","))
    }

    /// RFC 4180 CSV. Every row repeats the provenance columns so that any
    /// extract stays self-describing.
    pub fn to_csv(&self) -> Result<String> {
        let io = |e: csv::Error| Error::InvalidInput(e.to_string());
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "snr_db", "trials", "errors", "ser", "std_err", "receiver", "code", "seed", "min_errors", "max_trials",
        ])
        .map_err(io)?;
        for p in &self.points {
            w.write_record([
                format!("{}", p.snr_db),
                p.trials.to_string(),
                p.errors.to_string(),
                format!("{:e}", p.ser),
                format!("{:e}", p.std_err()),
                self.label(),
                self.code.clone(),
                self.seed.to_string(),
                self.stop.min_errors.to_string(),
                self.stop.max_trials.to_string(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Whitespace-separated columns `snr_db ser std_err` for gnuplot.
    pub fn to_gnuplot(&self) -> String {
        let mut out = format!(
            "# {} code={} seed={} min_errors={} max_trials={}\n# snr_db ser std_err\n",
            self.label(),
            self.code,
            self.seed,
            self.stop.min_errors,
            self.stop.max_trials
        );
        for p in &self.points {
            out.push_str(&format!("{} {:e} {:e}\n", p.snr_db, p.ser, p.std_err()));
        }
        out
    }
}

/// SNR at which the curve crosses `target`, by linear interpolation of
/// `log₁₀(ser)` in dB between the bracketing grid points. Points without
/// errors are skipped.
pub fn snr_at(curve: &SerCurve, target: f64) -> Result<f64> {
    let pts: Vec<&SerPoint> = curve.points.iter().filter(|p| p.errors > 0).collect();
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.ser >= target && b.ser <= target {
            if a.ser == b.ser {
                return Ok(a.snr_db);
            }
            let (la, lb, lt) = (a.ser.log10(), b.ser.log10(), target.log10());
            return Ok(a.snr_db + (la - lt) / (la - lb) * (b.snr_db - a.snr_db));
        }
    }
    Err(Error::TargetNotBracketed(target))
}

/// SNR gain in dB of `improved` over `reference` at error rate `target`.
pub fn snr_gain(reference: &SerCurve, improved: &SerCurve, target: f64) -> Result<f64> {
    Ok(snr_at(reference, target)? - snr_at(improved, target)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(points: &[(f64, f64)]) -> SerCurve {
        SerCurve {
            code: "test".into(),
            side_info: vec![1],
            seed: 0,
            stop: StopRule::default(),
            points: points
                .iter()
                .map(|&(s, ser)| SerPoint::new(s, 1_000_000, (ser * 1e6).round() as u64))
                .collect(),
        }
    }

    #[test]
    fn interpolation() {
        let c = curve(&[(0.0, 1e-2), (1.0, 1e-4)]);
        assert!((snr_at(&c, 1e-3).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(snr_gain(&c, &c, 1e-3).unwrap(), 0.0);
        assert_eq!(snr_at(&c, 1e-5), Err(Error::TargetNotBracketed(1e-5)));
        let shifted = curve(&[(-3.0, 1e-2), (-2.0, 1e-4)]);
        assert!((snr_gain(&c, &shifted, 1e-3).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_error_points_are_skipped() {
        let c = curve(&[(0.0, 1e-2), (1.0, 1e-4), (2.0, 0.0)]);
        assert!(snr_at(&c, 1e-5).is_err());
        assert!((snr_at(&c, 1e-4).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csv_and_gnuplot() {
        let c = curve(&[(0.0, 1e-2)]);
        let csv = c.to_csv().unwrap();
        assert!(csv.starts_with("snr_db,trials,errors,ser,std_err,receiver,code,seed,min_errors,max_trials\n"));
        assert!(csv.contains("S={1},test,0,200,1000000000"));
        assert_eq!(c.to_gnuplot().lines().count(), 3);
    }
}
