//! Quantities derived from trajectories: symbol counts, box-counting
//! dimension and entropic parameter, Tsallis and Boltzmann entropy, radix
//! economy and the length-monotonicity ("Second Law") verdict.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::engine::Trajectory;
use crate::numtheory::{self, Natural, Radix};
use crate::rulespec::{RuleTable, Symbol};

/// Below this distance from 1 the entropic parameter is treated as exactly 1.
pub const TSALLIS_Q_ONE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("closed form needs a two-symbol alphabet, rule has {0}")]
    NotBinary(u32),
    #[error("closed form needs the block of 0 to be all zeros")]
    ZeroBlockNotZero,
    #[error("closed form needs a constant block length of at least 2")]
    NotConstantLength,
    #[error("block of 1 contains no 1: the pattern dies and the dimension is undefined")]
    PatternDies,
    #[error("dimension estimate needs the seed to be the single symbol 1")]
    SeedNotUnit,
    #[error("radix must be at least 2, got {0}")]
    RadixTooSmall(u32),
    #[error("radix economy is undefined for zero")]
    ZeroArgument,
}

/// Occurrences of `s` in `w`.
pub fn count_symbol(w: &crate::engine::Word, s: Symbol) -> usize {
    w.symbols().iter().filter(|&&x| x == s).count()
}

/// Occurrences of each symbol of the alphabet, indexed by symbol.
pub fn symbol_counts(w: &crate::engine::Word) -> Vec<usize> {
    let mut counts = vec![0usize; w.radix().get() as usize];
    for &s in w.symbols() {
        counts[s as usize] += 1;
    }
    counts
}

/// Number of ones in the block of 1, after checking the binary premises.
fn unit_block_ones(rule: &RuleTable) -> Result<u32, AnalysisError> {
    if rule.alphabet_size() != 2 {
        return Err(AnalysisError::NotBinary(rule.alphabet_size()));
    }
    if rule.block(0).iter().any(|&s| s != 0) {
        return Err(AnalysisError::ZeroBlockNotZero);
    }
    Ok(rule.block(1).iter().filter(|&&s| s == 1).count() as u32)
}

/// Ones after `t` steps from the seed `1`: `s^t`, where `s` is the number of
/// ones in the block of 1. Only a 1 can produce a 1 when 0 maps to zeros.
pub fn predicted_ones(rule: &RuleTable, t: u32) -> Result<Natural, AnalysisError> {
    let s = unit_block_ones(rule)?;
    Ok(Natural::from(s).pow(t))
}

/// `ln s / ln N` for binary constant-length rules whose 0 block is all zeros.
pub fn box_dimension_closed(rule: &RuleTable) -> Result<f64, AnalysisError> {
    let s = unit_block_ones(rule)?;
    let n = match rule.constant_length() {
        Some(n) if n >= 2 => n,
        _ => return Err(AnalysisError::NotConstantLength),
    };
    if s == 0 {
        return Err(AnalysisError::PatternDies);
    }
    Ok(f64::from(s).ln() / (n as f64).ln())
}

/// One step of the box-counting estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionSample {
    pub step: usize,
    pub ones: usize,
    pub total: usize,
    /// `ln ones / ln total`; `None` when no 1 survives.
    pub dimension: Option<f64>,
}

/// `ln N1_t / ln W_t` for every `t ≥ 1` of a trajectory seeded with `1`.
pub fn box_dimension_empirical(traj: &Trajectory) -> Result<Vec<DimensionSample>, AnalysisError> {
    if traj.words()[0].symbols() != [1] {
        return Err(AnalysisError::SeedNotUnit);
    }
    Ok(traj
        .words()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(step, w)| {
            let ones = count_symbol(w, 1);
            let total = w.len();
            let dimension =
                (ones > 0 && total > 1).then(|| (ones as f64).ln() / (total as f64).ln());
            DimensionSample {
                step,
                ones,
                total,
                dimension,
            }
        })
        .collect())
}

/// Natural logarithm of an arbitrary-size natural. `ln 0` is `-inf`.
pub fn ln_natural(w: &Natural) -> f64 {
    if w.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = w.bits();
    if bits <= 1000 {
        return w.to_f64().expect("fits in f64").ln();
    }
    // Keep the top 64 bits; the rest only shifts the exponent.
    let shift = bits - 64;
    let top = (w >> shift).to_f64().expect("64-bit prefix");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `S_q = (W^(1−q) − 1)/(1 − q)`, with the Boltzmann limit `ln W` at `q = 1`.
pub fn tsallis_entropy(w: &Natural, q: f64) -> f64 {
    assert!(!w.is_zero(), "microstate count must be at least 1");
    tsallis_from_ln(ln_natural(w), q)
}

/// [`tsallis_entropy`] given `ln W` directly.
pub fn tsallis_from_ln(ln_w: f64, q: f64) -> f64 {
    let one_minus_q = 1.0 - q;
    if one_minus_q.abs() < TSALLIS_Q_ONE_TOLERANCE {
        return ln_w;
    }
    (one_minus_q * ln_w).exp_m1() / one_minus_q
}

/// `η·⌊1 + log_η A⌋`, the cost of writing `A` with `η` symbols.
pub fn radix_economy(eta: u32, a: &Natural) -> Result<u64, AnalysisError> {
    let radix = Radix::new(eta).map_err(|_| AnalysisError::RadixTooSmall(eta))?;
    if a.is_zero() {
        return Err(AnalysisError::ZeroArgument);
    }
    Ok(u64::from(eta) * numtheory::num_digits(radix, a) as u64)
}

/// Radix economy of `a` for every radix in `2..=eta_max`.
pub fn radix_economy_table(a: &Natural, eta_max: u32) -> Result<Vec<(u32, u64)>, AnalysisError> {
    if eta_max < 2 {
        return Err(AnalysisError::RadixTooSmall(eta_max));
    }
    (2..=eta_max)
        .map(|eta| radix_economy(eta, a).map(|c| (eta, c)))
        .collect()
}

/// The radix in `2..=eta_max` with the least economy; ties go to the
/// smallest radix.
pub fn optimal_radix(a: &Natural, eta_max: u32) -> Result<u32, AnalysisError> {
    let table = radix_economy_table(a, eta_max)?;
    Ok(table
        .into_iter()
        .min_by_key(|&(eta, c)| (c, eta))
        .map(|(eta, _)| eta)
        .expect("table is nonempty"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Unit-length blocks forming a permutation.
    Reversible,
    /// Unit-length blocks, but two symbols share an image.
    LengthPreserving,
    Expanding,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Reversible => "reversible",
            Verdict::LengthPreserving => "length-preserving",
            Verdict::Expanding => "expanding",
        })
    }
}

pub fn verdict(rule: &RuleTable) -> Verdict {
    if rule.is_reversible() {
        Verdict::Reversible
    } else if rule.constant_length() == Some(1) {
        Verdict::LengthPreserving
    } else {
        Verdict::Expanding
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondLawReport {
    pub verdict: Verdict,
    pub lengths: Vec<usize>,
    /// `Σ_j (L_{s_j} − 1)` over the symbols of `w_t`, one entry per completed
    /// step; this is the length gained at that step and never negative.
    pub exponents: Vec<usize>,
    pub non_decreasing: bool,
    /// Every completed step kept the length unchanged.
    pub constant: bool,
}

pub fn second_law_report(traj: &Trajectory) -> SecondLawReport {
    let rule = traj.rule();
    let block_lengths = rule.lengths();
    let lengths = traj.lengths();
    let completed = traj.steps();
    let exponents: Vec<usize> = traj.words()[..completed]
        .iter()
        .map(|w| {
            w.symbols()
                .iter()
                .map(|&s| block_lengths[s as usize] - 1)
                .sum()
        })
        .collect();
    SecondLawReport {
        verdict: verdict(rule),
        non_decreasing: lengths.windows(2).all(|w| w[0] <= w[1]),
        constant: exponents.iter().all(|&e| e == 0),
        lengths,
        exponents,
    }
}

/// Where the entropic parameter of a report came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QSource {
    Given,
    ClosedForm,
    /// Box-counting estimate at the given step.
    Empirical(usize),
    /// Nothing better available; `q = 1` gives Boltzmann entropy.
    Boltzmann,
}

impl fmt::Display for QSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QSource::Given => f.write_str("given"),
            QSource::ClosedForm => f.write_str("closed-form"),
            QSource::Empirical(t) => write!(f, "empirical@{t}"),
            QSource::Boltzmann => f.write_str("boltzmann"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AnalysisOptions {
    /// Use this entropic parameter instead of the derived one.
    pub q: Option<f64>,
    /// Tabulate radix economy of the final numeral for radices `2..=max`.
    pub radix_table_max: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub counts: Vec<usize>,
    /// Total boxes `W_t`, the word length.
    pub total: usize,
    pub ones: usize,
    pub dimension: Option<f64>,
    pub tsallis: f64,
    pub boltzmann: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadixEconomyReport {
    pub table: Vec<(u32, u64)>,
    pub optimal: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub steps: Vec<StepRecord>,
    pub closed_dimension: Result<f64, AnalysisError>,
    pub empirical_dimension: Result<(), AnalysisError>,
    pub q: f64,
    pub q_source: QSource,
    pub second_law: SecondLawReport,
    pub radix_economy: Option<Result<RadixEconomyReport, AnalysisError>>,
    pub truncated: bool,
}

pub fn analyze(traj: &Trajectory, options: &AnalysisOptions) -> AnalysisReport {
    let closed = box_dimension_closed(traj.rule());
    let empirical = box_dimension_empirical(traj);
    let dimension_at = |step: usize| -> Option<f64> {
        empirical
            .as_ref()
            .ok()
            .and_then(|samples| samples.iter().find(|s| s.step == step))
            .and_then(|s| s.dimension)
    };

    let (q, q_source) = if let Some(q) = options.q {
        (q, QSource::Given)
    } else if let Ok(d) = closed {
        (d, QSource::ClosedForm)
    } else if let Some((t, d)) = (1..=traj.steps())
        .rev()
        .find_map(|t| dimension_at(t).map(|d| (t, d)))
    {
        (d, QSource::Empirical(t))
    } else {
        (1.0, QSource::Boltzmann)
    };

    let steps = traj
        .words()
        .iter()
        .enumerate()
        .map(|(step, w)| {
            let counts = symbol_counts(w);
            let ln_w = (w.len() as f64).ln();
            StepRecord {
                step,
                ones: counts.get(1).copied().unwrap_or(0),
                counts,
                total: w.len(),
                dimension: dimension_at(step),
                tsallis: tsallis_from_ln(ln_w, q),
                boltzmann: ln_w,
            }
        })
        .collect();

    let radix_economy = options.radix_table_max.map(|max| {
        let a = traj.last().numeral();
        let table = radix_economy_table(a, max)?;
        let optimal = optimal_radix(a, max)?;
        Ok(RadixEconomyReport { table, optimal })
    });

    AnalysisReport {
        steps,
        closed_dimension: closed,
        empirical_dimension: empirical.map(|_| ()),
        q,
        q_source,
        second_law: second_law_report(traj),
        radix_economy,
        truncated: traj.is_truncated(),
    }
}

/// Formats `x` with 12 significant digits, trailing zeros trimmed.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, Mode, RunOptions, Word};
    use crate::rulespec::named::*;

    fn traj(rule: &RuleTable, seed: &str, steps: usize) -> Trajectory {
        let w = Word::parse(rule.alphabet_size(), seed).unwrap();
        run(rule, &w, steps, RunOptions::default()).unwrap()
    }

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs())
    }

    #[test]
    fn count_examples() {
        let c = traj(&cantor(), "1", 3);
        assert_eq!(count_symbol(c.last(), 1), 8);
        assert_eq!(count_symbol(c.last(), 0), 19);
        let tm = traj(&thue_morse(), "0", 4);
        assert_eq!(count_symbol(tm.last(), 1), 8);
        let fib = traj(&fibonacci(), "1", 3);
        assert_eq!(count_symbol(fib.last(), 0), 0);
        assert_eq!(symbol_counts(fib.last()), vec![0, 3, 2]);
    }

    #[test]
    fn predicted_ones_examples() {
        assert_eq!(predicted_ones(&cantor(), 3).unwrap(), Natural::from(8u32));
        assert_eq!(predicted_ones(&cantor(), 0).unwrap(), Natural::from(1u32));
        let fill = RuleTable::from_strs(2, &["00", "11"]).unwrap();
        assert_eq!(predicted_ones(&fill, 5).unwrap(), Natural::from(32u32));
        assert_eq!(count_symbol(traj(&fill, "1", 5).last(), 1), 32);
        assert_eq!(
            predicted_ones(&fibonacci(), 1),
            Err(AnalysisError::NotBinary(3))
        );
        assert_eq!(
            predicted_ones(&thue_morse(), 1),
            Err(AnalysisError::ZeroBlockNotZero)
        );
    }

    #[test]
    fn closed_dimension_examples() {
        let d = box_dimension_closed(&cantor()).unwrap();
        assert!((d - 0.630_929_753_571_457_4).abs() < 1e-12);
        let fill = RuleTable::from_strs(2, &["00", "11"]).unwrap();
        assert_eq!(box_dimension_closed(&fill).unwrap(), 1.0);
        let point = RuleTable::from_strs(2, &["00", "10"]).unwrap();
        assert_eq!(box_dimension_closed(&point).unwrap(), 0.0);
        let dead = RuleTable::from_strs(2, &["00", "00"]).unwrap();
        assert_eq!(box_dimension_closed(&dead), Err(AnalysisError::PatternDies));
        assert_eq!(
            box_dimension_closed(&identity(2)),
            Err(AnalysisError::NotConstantLength)
        );
        let mixed = RuleTable::from_strs(2, &["0", "10"]).unwrap();
        assert_eq!(
            box_dimension_closed(&mixed),
            Err(AnalysisError::NotConstantLength)
        );
    }

    #[test]
    fn empirical_dimension_examples() {
        let closed = box_dimension_closed(&cantor()).unwrap();
        let samples = box_dimension_empirical(&traj(&cantor(), "1", 6)).unwrap();
        assert_eq!(samples.len(), 6);
        for s in samples {
            assert_eq!(s.ones, 1 << s.step);
            assert!(rel_close(s.dimension.unwrap(), closed, 1e-12));
        }
        let fill = RuleTable::from_strs(2, &["00", "11"]).unwrap();
        for s in box_dimension_empirical(&traj(&fill, "1", 4)).unwrap() {
            assert!(rel_close(s.dimension.unwrap(), 1.0, 1e-12));
        }
        let tm = box_dimension_empirical(&traj(&thue_morse(), "1", 4)).unwrap();
        assert_eq!((tm[3].ones, tm[3].total), (8, 16));
        assert!(rel_close(tm[3].dimension.unwrap(), 0.75, 1e-12));
        assert_eq!(
            box_dimension_empirical(&traj(&cantor(), "101", 1)),
            Err(AnalysisError::SeedNotUnit)
        );
        let dead = RuleTable::from_strs(2, &["00", "00"]).unwrap();
        assert_eq!(
            box_dimension_empirical(&traj(&dead, "1", 2)).unwrap()[0].dimension,
            None
        );
    }

    #[test]
    fn tsallis_examples() {
        let q = 2f64.ln() / 3f64.ln();
        let expected = (27.0 / 8.0 - 1.0) / (1.0 - q);
        assert!(rel_close(
            tsallis_entropy(&Natural::from(27u32), q),
            expected,
            1e-9
        ));
        for w in [1u32, 10, 1_000_000] {
            let w = Natural::from(w);
            assert_eq!(tsallis_entropy(&w, 1.0), ln_natural(&w));
        }
        for q in [0.0, 0.3, 1.0, 1.7] {
            assert_eq!(tsallis_entropy(&Natural::from(1u32), q), 0.0);
        }
        // q = 0 counts microstates minus one.
        assert!(rel_close(
            tsallis_entropy(&Natural::from(27u32), 0.0),
            26.0,
            1e-12
        ));
    }

    #[test]
    fn tsallis_continuity_and_monotonicity() {
        for w in [2u32, 7, 100, 12_345, 1_000_000] {
            let w = Natural::from(w);
            let ln_w = ln_natural(&w);
            for q in [1.0 + 1e-8, 1.0 - 1e-8] {
                assert!((tsallis_entropy(&w, q) - ln_w).abs() <= 1e-6);
            }
        }
        for q in [0.0, 0.25, 0.630_929_753_571_457_4, 0.9, 1.0] {
            let mut prev = -1.0;
            for w in 1u32..2000 {
                let s = tsallis_entropy(&Natural::from(w), q);
                assert!(s >= 0.0 && s >= prev, "q={q} w={w}");
                prev = s;
            }
        }
    }

    #[test]
    fn ln_natural_handles_huge_values() {
        let big = Natural::from(3u32).pow(5000);
        assert!(rel_close(ln_natural(&big), 5000.0 * 3f64.ln(), 1e-14));
        assert_eq!(ln_natural(&Natural::zero()), f64::NEG_INFINITY);
    }

    #[test]
    fn radix_economy_examples() {
        let a = Natural::from(8674u32);
        assert_eq!(radix_economy(10, &a), Ok(40));
        assert_eq!(radix_economy(3, &a), Ok(27));
        assert_eq!(radix_economy(2, &Natural::from(1u32)), Ok(2));
        assert_eq!(radix_economy(1, &a), Err(AnalysisError::RadixTooSmall(1)));
        assert_eq!(
            radix_economy(2, &Natural::zero()),
            Err(AnalysisError::ZeroArgument)
        );
        for eta in [2u32, 3, 7, 10, 36] {
            for k in 0..=40u32 {
                let a = Natural::from(eta).pow(k);
                assert_eq!(
                    radix_economy(eta, &a),
                    Ok(u64::from(eta) * u64::from(k + 1))
                );
            }
        }
    }

    #[test]
    fn optimal_radix_examples() {
        assert_eq!(optimal_radix(&Natural::from(8674u32), 36), Ok(3));
        assert_eq!(optimal_radix(&Natural::from(1u32), 36), Ok(2));
        assert_eq!(
            optimal_radix(&Natural::from(5u32), 1),
            Err(AnalysisError::RadixTooSmall(1))
        );
        // Exhaustive oracle over the table.
        let a = Natural::from(8674u32);
        let best = (2..=36u32)
            .min_by_key(|&e| (radix_economy(e, &a).unwrap(), e))
            .unwrap();
        assert_eq!(best, 3);
    }

    #[test]
    fn second_law_examples() {
        let fib = second_law_report(&traj(&fibonacci(), "1", 5));
        assert_eq!(fib.verdict, Verdict::Expanding);
        assert_eq!(fib.lengths, vec![1, 2, 3, 5, 8, 13]);
        assert_eq!(fib.exponents, vec![1, 1, 2, 3, 5]);
        assert!(fib.non_decreasing && !fib.constant);

        let swap = RuleTable::from_strs(2, &["1", "0"]).unwrap();
        let r = second_law_report(&traj(&swap, "10", 3));
        assert_eq!(r.verdict, Verdict::Reversible);
        assert!(r.constant);

        let merge = RuleTable::from_strs(2, &["0", "0"]).unwrap();
        assert_eq!(
            second_law_report(&traj(&merge, "1", 2)).verdict,
            Verdict::LengthPreserving
        );
        assert_eq!(
            second_law_report(&traj(&cantor(), "1", 3)).verdict,
            Verdict::Expanding
        );
    }

    #[test]
    fn analyze_cantor() {
        let t = traj(&cantor(), "1", 6);
        let report = analyze(&t, &AnalysisOptions::default());
        let d = report.closed_dimension.clone().unwrap();
        assert_eq!(report.q, d);
        assert_eq!(report.q_source, QSource::ClosedForm);
        assert_eq!(report.second_law.verdict, Verdict::Expanding);
        assert_eq!(report.steps[3].ones, 8);
        assert_eq!(report.steps[3].total, 27);
        assert!(rel_close(
            report.steps[3].tsallis,
            (27.0 / 8.0 - 1.0) / (1.0 - d),
            1e-9
        ));
        assert_eq!(report.steps[0].dimension, None);
    }

    #[test]
    fn analyze_identity_and_fibonacci() {
        let t = traj(&identity(2), "1", 4);
        let report = analyze(&t, &AnalysisOptions::default());
        assert_eq!(report.second_law.verdict, Verdict::Reversible);
        assert_eq!(report.q_source, QSource::Boltzmann);
        assert!(report
            .steps
            .iter()
            .all(|s| s.tsallis == report.steps[0].tsallis));

        let w = Word::parse(3, "1").unwrap();
        let t = run(&fibonacci(), &w, 10, RunOptions::mode(Mode::Both)).unwrap();
        let report = analyze(
            &t,
            &AnalysisOptions {
                q: None,
                radix_table_max: Some(36),
            },
        );
        assert!(report.closed_dimension.is_err());
        assert_eq!(report.q_source, QSource::Empirical(10));
        let lengths: Vec<usize> = report.steps.iter().map(|s| s.total).collect();
        assert_eq!(lengths, vec![1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144]);
        let econ = report.radix_economy.unwrap().unwrap();
        assert_eq!(econ.table.len(), 35);
    }

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(2f64.ln() / 3f64.ln()), "0.630929753571");
        assert_eq!(format_real(1.0), "1");
        assert_eq!(format_real(0.0), "0");
        assert_eq!(format_real(6.435_111_111), "6.435111111");
        assert_eq!(format_real(-0.75), "-0.75");
    }
}
