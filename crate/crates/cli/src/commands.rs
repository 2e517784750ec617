use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use lattice_index::codes::{gamma_upper_bound_check, mask_of, LatticeIndexCode, CODEBOOK_CAP};
use lattice_index::descriptor::{BuiltCode, CodeDescriptor};
use lattice_index::lattices::RingLattice;
use lattice_index::oracle::{
    distance_agreement, exhaustive_injectivity, lemma_suite, odd_prime_decompositions, right_module_check,
    VerificationReport, INJECTIVITY_CAP,
};
use lattice_index::rings::{primes_up_to, CanonicalPrime, RingTag};
use lattice_index::simulate::{grid_around, simulate_ser, snr_at, snr_gain, square_qam_ser, ReceiverSpec, SerCurve};
use lattice_index::superpose::{Receiver, SuperpositionScheme};
use serde::Serialize;

use crate::config::RunConfig;
use crate::presets;
use crate::GlobalArgs;

/// Design gaps of the 25-QAM scheme that `verify --superpose-example`
/// checks, with their tolerance.
const EXPECTED_GAPS_DB: (f64, f64) = (6.9, 12.2);
const GAP_TOLERANCE_DB: f64 = 0.1;

fn write(g: &GlobalArgs, file: &str, contents: &str) -> Result<()> {
    let path = g.output(file)?;
    std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn build_lattice_code(d: &CodeDescriptor) -> Result<LatticeIndexCode> {
    match d.build()? {
        BuiltCode::Lattice(c) => Ok(c),
        BuiltCode::Labeled(_) => bail!("this needs a lattice index code, not a labelled constellation"),
    }
}

/// Prime table grouped by norm.
pub fn format_primes(primes: &[CanonicalPrime]) -> String {
    let mut out = String::from("norm\tprimes\trate (b/dim)\n");
    let mut i = 0;
    while i < primes.len() {
        let norm = primes[i].norm;
        let group: Vec<String> = primes[i..]
            .iter()
            .take_while(|p| p.norm == norm)
            .map(|p| p.value.to_string())
            .collect();
        let _ = writeln!(out, "{norm}\t{}\t{:.4}", group.join(", "), primes[i].rate_bits_per_dim);
        i += group.len();
    }
    out
}

pub fn primes(g: &GlobalArgs, ring: Option<&str>, bound: Option<i64>) -> Result<()> {
    let from_preset = g.preset.as_deref().and_then(presets::table);
    let ring = match ring {
        Some(r) => r.parse::<RingTag>().map_err(|e| anyhow::anyhow!("{e}"))?,
        None => from_preset.map(|t| t.0).context("give --ring or a table preset")?,
    };
    let bound = match bound.or(from_preset.map(|t| t.1)) {
        Some(b) => b,
        None => bail!("give --bound or a table preset"),
    };
    ensure!(bound >= 2, "the norm bound must be at least 2");
    print!("{}", format_primes(&primes_up_to(ring, bound)));
    Ok(())
}

#[derive(Serialize)]
struct Summary {
    name: String,
    code_id: String,
    k: usize,
    dim: usize,
    sizes: Vec<usize>,
    codebook_size: u128,
    rates: Vec<f64>,
    d0: f64,
}

pub fn construct(g: &GlobalArgs) -> Result<()> {
    let c = g.require_config()?;
    let d = c.code()?;
    let summary = match d.build().context("construction failed")? {
        BuiltCode::Lattice(code) => Summary {
            name: c.name.clone(),
            code_id: c.code_id(),
            k: code.k(),
            dim: code.dim(),
            sizes: code.sizes(),
            codebook_size: code.codebook_size(),
            rates: code.rates(),
            d0: code.distance(0)?,
        },
        BuiltCode::Labeled(l) => Summary {
            name: c.name.clone(),
            code_id: c.code_id(),
            k: l.k(),
            dim: l.n,
            sizes: l.sizes.clone(),
            codebook_size: l.points.len() as u128,
            rates: (0..l.k()).map(|i| l.rate(1 << i)).collect(),
            d0: l.distance_sq(0)?.sqrt(),
        },
    };
    println!("code     {}", summary.name);
    println!("id       {}", summary.code_id);
    println!("messages {} in {} real dimensions", summary.k, summary.dim);
    println!("sizes    {:?} (|C| = {})", summary.sizes, summary.codebook_size);
    let rates: Vec<String> = summary.rates.iter().map(|r| format!("{r:.4}")).collect();
    println!("rates    {} b/dim", rates.join(", "));
    println!("d0       {:.6}", summary.d0);
    write(g, &format!("{}.code.json", c.name), &d.to_json())?;
    write(g, &format!("{}.summary.json", c.name), &serde_json::to_string_pretty(&summary)?)
}

pub fn analyze(g: &GlobalArgs, code_file: Option<&Path>) -> Result<()> {
    let (name, d) = match code_file {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("code");
            let stem = stem.strip_suffix(".code").unwrap_or(stem).to_string();
            (stem, CodeDescriptor::from_json(&text)?)
        }
        None => {
            let c = g.require_config()?;
            (c.name.clone(), c.code()?.clone())
        }
    };
    let report = match d.build()? {
        BuiltCode::Lattice(code) => {
            let r = code.gain_report()?;
            if code.k() >= 2 {
                if let Ok(b) = gamma_upper_bound_check(&code) {
                    println!(
                        "rate identity {}; sum lattice at least as dense as last component: {}",
                        if b.identity_holds { "holds" } else { "FAILS" },
                        b.sum_at_least_as_dense
                    );
                }
            }
            r
        }
        BuiltCode::Labeled(l) => l.gain_report()?,
    };
    println!("S\td_S\tR_S\tgain (dB per b/dim)");
    for e in &report.entries {
        let s: Vec<String> = e.subset.iter().map(ToString::to_string).collect();
        println!("{{{}}}\t{:.6}\t{:.4}\t{:.4}", s.join(","), e.d_s, e.rate, e.gain_db);
    }
    println!("gamma = {:.4} dB/(b/dim), uniform = {}", report.gamma, report.uniform);
    if let Some(law) = report.exact_gain_law {
        println!("exact gain law: {}", if law { "holds" } else { "does not hold" });
    }
    write(g, &format!("{name}.gain.csv"), &report.to_csv()?)
}

fn curve_files(g: &GlobalArgs, stem: &str, curve: &SerCurve) -> Result<()> {
    write(g, &format!("{stem}.csv"), &curve.to_csv()?)?;
    write(g, &format!("{stem}.dat"), &curve.to_gnuplot())
}

fn receiver_stem(name: &str, side_info: &[usize]) -> String {
    if side_info.is_empty() {
        format!("{name}.rx-none")
    } else {
        let s: Vec<String> = side_info.iter().map(ToString::to_string).collect();
        format!("{name}.rx-{}", s.join("-"))
    }
}

pub fn simulate(g: &GlobalArgs) -> Result<()> {
    let c = g.require_config()?;
    ensure!(!c.receivers.is_empty(), "the config lists no receivers");
    let seed = g.seed(&c);
    if c.scheme.is_some() {
        return simulate_scheme(g, &c, seed);
    }
    let id = c.code_id();
    let constellation = c.code()?.build()?.constellation(CODEBOOK_CAP)?;
    let mut curves = Vec::new();
    for r in &c.receivers {
        ensure!(
            r.side_info.iter().all(|&i| i >= 1 && i <= constellation.k()),
            "side information {:?} names a message outside 1..{}",
            r.side_info,
            constellation.k()
        );
        let mask = mask_of(&r.side_info);
        let grid = match &r.snr_db {
            Some(v) => v.clone(),
            None => grid_around(&constellation, mask, c.target_ser, r.grid.below, r.grid.above, r.grid.step)?,
        };
        let mut curve = simulate_ser(&constellation, &ReceiverSpec::new(mask, grid)?, c.stop, seed)?;
        curve.code = id.clone();
        println!("{}: {}", curve.label(), summarize(&curve, c.target_ser));
        curve_files(g, &receiver_stem(&c.name, &r.side_info), &curve)?;
        curves.push((mask, curve));
    }

    if let Some((_, reference)) = curves.iter().find(|(m, _)| *m == 0) {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["receiver", "rate", "gain_db", "gain_db_per_bit", "target_ser", "code", "seed"])?;
        for (mask, curve) in curves.iter().filter(|(m, _)| *m != 0) {
            let rate = constellation.rate(*mask);
            let gain = snr_gain(reference, curve, c.target_ser).ok();
            let cell = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_default();
            if let Some(x) = gain {
                println!("gain of {} over S={{}}: {x:.3} dB ({:.3} dB per b/dim)", curve.label(), x / rate);
            }
            w.write_record([
                curve.label(),
                format!("{rate:.6}"),
                cell(gain),
                cell(gain.map(|x| x / rate)),
                c.target_ser.to_string(),
                id.clone(),
                seed.to_string(),
            ])?;
        }
        write(g, &format!("{}.gains.csv", c.name), &String::from_utf8(w.into_inner()?)?)?;

        if let Some(m) = c.baseline_qam {
            ensure!(m >= 2, "baseline_qam needs at least 2 levels per axis");
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["snr_db", "ser", "qam_levels_per_axis"])?;
            let mut dat = format!("# closed-form {m}x{m} QAM\n# snr_db ser\n");
            for p in &reference.points {
                let ser = square_qam_ser(m, p.snr_db);
                w.write_record([p.snr_db.to_string(), format!("{ser:e}"), m.to_string()])?;
                let _ = writeln!(dat, "{} {ser:e}", p.snr_db);
            }
            write(g, &format!("{}.baseline.csv", c.name), &String::from_utf8(w.into_inner()?)?)?;
            write(g, &format!("{}.baseline.dat", c.name), &dat)?;
        }
    }
    Ok(())
}

fn summarize(curve: &SerCurve, target: f64) -> String {
    match snr_at(curve, target) {
        Ok(s) => format!("SER {target:e} at {s:.3} dB"),
        Err(_) => format!("SER {target:e} not bracketed by the grid"),
    }
}

fn simulate_scheme(g: &GlobalArgs, c: &RunConfig, seed: u64) -> Result<()> {
    let scheme = c.scheme()?.build()?;
    let id = c.code_id();
    let mut curves = Vec::new();
    for r in &c.receivers {
        let rx = Receiver::ALL[r.side_info[0] - 1];
        let grid = match &r.snr_db {
            Some(v) => v.clone(),
            None => scheme.grid_around(rx, c.target_ser, r.grid.below, r.grid.above, r.grid.step)?,
        };
        let mut curve = scheme.simulate(rx, &grid, c.stop, seed)?;
        curve.code = id.clone();
        println!("{rx:?}: {}", summarize(&curve, c.target_ser));
        curve_files(g, &format!("{}.rx{}", c.name, rx.index() + 1), &curve)?;
        curves.push((rx, curve));
    }
    let design = scheme.design_gaps()?;
    write(g, &format!("{}.design.csv", c.name), &design.to_csv()?)?;

    if let Some((_, rx1)) = curves.iter().find(|(rx, _)| *rx == Receiver::Rx1) {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["receiver", "simulated_gap_db", "design_gap_db", "target_ser", "code", "seed"])?;
        for (rx, curve) in curves.iter().filter(|(rx, _)| *rx != Receiver::Rx1) {
            let gap = snr_gain(rx1, curve, c.target_ser).ok();
            let design_gap = if *rx == Receiver::Rx2 { design.gap21_db } else { design.gap31_db };
            if let Some(x) = gap {
                println!("gap of {rx:?} over Rx1: {x:.3} dB (design {design_gap:.3} dB)");
            }
            w.write_record([
                format!("{rx:?}"),
                gap.map(|x| format!("{x:.4}")).unwrap_or_default(),
                format!("{design_gap:.4}"),
                c.target_ser.to_string(),
                id.clone(),
                seed.to_string(),
            ])?;
        }
        write(g, &format!("{}.gains.csv", c.name), &String::from_utf8(w.into_inner()?)?)?;
    }
    Ok(())
}

/// Lemma suite, pairwise distances and injectivity of one code.
fn code_checks(name: &str, code: &LatticeIndexCode) -> Result<VerificationReport> {
    let mut children = vec![lemma_suite(code)?];
    if code.codebook_size() <= CODEBOOK_CAP {
        children.push(distance_agreement(code)?);
    }
    if code.codebook_size() <= INJECTIVITY_CAP {
        children.push(exhaustive_injectivity(code)?);
    }
    Ok(VerificationReport::group(name, children))
}

fn default_suite() -> Result<VerificationReport> {
    let mut children = Vec::new();
    for name in ["ex1", "ex5", "ex6", "ex8"] {
        let d = presets::code(name).expect("preset code");
        children.push(code_checks(name, &build_lattice_code(&d)?)?);
    }
    children.push(right_module_check(&RingLattice::e8(), 1000, 1)?);
    Ok(VerificationReport::group("default suite", children))
}

fn superpose_check() -> Result<VerificationReport> {
    let gaps = SuperpositionScheme::qam25().design_gaps()?;
    let check = |name: &str, got: f64, want: f64| {
        if (got - want).abs() <= GAP_TOLERANCE_DB {
            VerificationReport::pass(name, 1)
        } else {
            VerificationReport::fail(name, format!("{got:.3} dB, expected {want} ± {GAP_TOLERANCE_DB} dB"), 1)
        }
    };
    Ok(VerificationReport::group(
        "25-QAM superposition design gaps",
        vec![
            check("gap Rx2 over Rx1", gaps.gap21_db, EXPECTED_GAPS_DB.0),
            check("gap Rx3 over Rx1", gaps.gap31_db, EXPECTED_GAPS_DB.1),
        ],
    ))
}

pub fn verify(g: &GlobalArgs, appendix_b: Option<i64>, superpose_example: bool) -> Result<bool> {
    let config = g.run_config()?;
    let mut children = Vec::new();
    if let Some(max) = appendix_b {
        children.push(odd_prime_decompositions(max));
    }
    if superpose_example {
        children.push(superpose_check()?);
    }
    if let Some(c) = &config {
        if let Some(d) = &c.code {
            children.push(code_checks(&c.name, &build_lattice_code(d)?)?);
        }
        if let Some(s) = &c.scheme {
            children.push(code_checks(&format!("{} inner code", c.name), s.build()?.inner())?);
        }
    }
    if children.is_empty() {
        children.push(default_suite()?);
    }
    let report = VerificationReport::group("verify", children);
    for child in &report.children {
        println!("{}: {}", child.name, if child.passed { "pass" } else { "FAIL" });
    }
    for f in report.failures() {
        println!("  failed {}: {}", f.name, f.witness.as_deref().unwrap_or(""));
    }
    let name = config.map(|c| c.name).unwrap_or_else(|| "verify".into());
    write(g, &format!("{name}.verify.json"), &report.to_json())?;
    Ok(report.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_table_has_ten_norm_classes() {
        let t = format_primes(&primes_up_to(RingTag::Gaussian, 53));
        assert_eq!(t.lines().count(), 11);
        assert!(t.lines().nth(1).unwrap().starts_with("2\t"));
    }

    #[test]
    fn superposition_gaps_pass() {
        assert!(superpose_check().unwrap().passed);
    }
}
