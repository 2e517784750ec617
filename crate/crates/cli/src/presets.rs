//! Named configurations for the examples, tables and figures.

use anyhow::{bail, Result};
use lattice_index::descriptor::{BaseSpec, Builtin, CodeDescriptor, MatrixSpec, SchemeDescriptor};
use lattice_index::lattices::BaseLattice;
use lattice_index::rings::RingTag;
use lattice_index::simulate::StopRule;

use crate::config::{GridConfig, ReceiverConfig, RunConfig};

pub const NAMES: [&str; 15] = [
    "ex1", "ex2", "ex3", "ex4", "ex5", "ex6", "ex7", "ex8", "table1", "table2", "table3", "fig3", "fig5", "fig8", "sec7",
];

/// `(ring, norm bound)` of a prime table preset.
pub fn table(name: &str) -> Option<(RingTag, i64)> {
    match name {
        "table1" => Some((RingTag::Gaussian, 53)),
        "table2" => Some((RingTag::Eisenstein, 61)),
        "table3" => Some((RingTag::Hurwitz, 31)),
        _ => None,
    }
}

fn crt(ring: RingTag, primes: &[&[i64]], base: BaseLattice) -> CodeDescriptor {
    CodeDescriptor::Crt {
        ring,
        primes: primes.iter().map(|p| p.to_vec()).collect(),
        base: BaseSpec::Named(base),
    }
}

pub fn code(name: &str) -> Option<CodeDescriptor> {
    Some(match name {
        "ex1" | "fig3" => crt(RingTag::Rational, &[&[2], &[3], &[5]], BaseLattice::Z),
        "ex2" => CodeDescriptor::Builtin { name: Builtin::Psk16 },
        "ex3" | "fig5" => CodeDescriptor::Builtin { name: Builtin::Qam16 },
        "ex4" => CodeDescriptor::Custom {
            components: vec![
                MatrixSpec::new(vec![vec![4, 2], vec![0, 3]]),
                MatrixSpec::new(vec![vec![0, 3], vec![4, 2]]),
            ],
            coarse: MatrixSpec::new(vec![vec![12, 0], vec![0, 12]]),
            frame: lattice_index::lattices::Frame::Cartesian,
        },
        "ex5" => crt(RingTag::Gaussian, &[&[1, 1], &[1, 2]], BaseLattice::D4),
        "ex6" | "fig8" => crt(RingTag::Gaussian, &[&[1, 2], &[1, -2]], BaseLattice::Zi),
        "ex7" => CodeDescriptor::Hurwitz {
            primes: vec![3, 5],
            base: BaseSpec::Named(BaseLattice::Hurwitz),
        },
        "ex8" => CodeDescriptor::Hurwitz {
            primes: vec![3, 5],
            base: BaseSpec::Named(BaseLattice::E8),
        },
        _ => return None,
    })
}

fn receiver(side_info: &[usize], grid: GridConfig) -> ReceiverConfig {
    ReceiverConfig {
        side_info: side_info.to_vec(),
        snr_db: None,
        grid,
    }
}

pub fn config(name: &str) -> Result<RunConfig> {
    if !NAMES.contains(&name) {
        bail!("unknown preset '{name}'; choose one of {}", NAMES.join(", "));
    }
    let narrow = GridConfig {
        below: 1.5,
        above: 1.0,
        step: 0.25,
    };
    let stop = StopRule {
        min_errors: 200,
        max_trials: 50_000_000,
    };
    let mut c = RunConfig {
        name: name.to_string(),
        code: code(name),
        scheme: None,
        receivers: Vec::new(),
        target_ser: 1e-4,
        stop,
        baseline_qam: None,
        seed: None,
    };
    match name {
        "fig3" => c.receivers = vec![receiver(&[], narrow), receiver(&[1], narrow), receiver(&[1, 2], narrow)],
        "fig5" => c.receivers = vec![receiver(&[], narrow), receiver(&[1, 2], narrow), receiver(&[2, 3, 4], narrow)],
        "fig8" => {
            c.target_ser = 1e-5;
            c.baseline_qam = Some(5);
            c.receivers = vec![receiver(&[], narrow), receiver(&[1], narrow)];
        }
        "sec7" => {
            c.scheme = Some(SchemeDescriptor::qam25());
            let rx3 = GridConfig {
                below: 9.0,
                above: 1.0,
                step: 0.5,
            };
            c.receivers = vec![receiver(&[1], narrow), receiver(&[2], narrow), receiver(&[3], rx3)];
        }
        _ => {}
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_is_valid() {
        for n in NAMES {
            let c = config(n).unwrap();
            c.validate().unwrap();
            if let Some(d) = &c.code {
                d.build().unwrap();
            }
        }
        assert!(config("fig9").is_err());
    }
}
