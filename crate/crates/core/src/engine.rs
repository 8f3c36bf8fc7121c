//! Iterating substitution rules.
//!
//! Two independent routes produce the next word:
//!
//! * the array route ([`step_string`]) replaces every symbol by its block,
//!   left to right;
//! * the numeral route ([`step_number`], [`step_constant_number`]) treats the
//!   word as a radix-`p` natural and places each block's numeral at the
//!   offset given by the lengths of all blocks below it.
//!
//! The array route is the fast one. The numeral route exists to cross-check
//! it and to feed the growth analysis.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::numtheory::{self, Natural, Radix};
use crate::rulespec::{RuleError, RuleTable, Symbol, WolframCode};

/// Default cap on the number of symbols in a single word.
pub const DEFAULT_MAX_WORD_LEN: usize = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("words must contain at least one symbol")]
    EmptyWord,
    #[error("symbol {symbol} at position {position} is outside alphabet of size {radix}")]
    SymbolOutOfRange {
        position: usize,
        symbol: u32,
        radix: u32,
    },
    #[error("cannot parse `{0}` as a symbol")]
    BadSymbol(String),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("word starts with symbol 0, which a bare numeral cannot represent")]
    LeadingZero,
    #[error("numeral has {actual} digits but the declared length is {declared}")]
    LengthMismatch { declared: usize, actual: usize },
    #[error(
        "array and numeral routes disagree at step {step}: `{from_array}` vs `{from_numeral}`"
    )]
    RepresentationMismatch {
        step: usize,
        from_array: String,
        from_numeral: String,
    },
    #[error("numeral at step {step} is zero; growth ratio undefined")]
    ZeroNumeral { step: usize },
}

/// A state of a substitution system: symbols leftmost-first, with the numeral
/// view (leftmost symbol most significant) computed on first use.
pub struct Word {
    radix: Radix,
    symbols: Vec<Symbol>,
    numeral: OnceLock<Natural>,
}

impl Word {
    pub fn new(p: u32, symbols: Vec<Symbol>) -> Result<Self, EngineError> {
        let radix = Radix::new(p).map_err(RuleError::from)?;
        if symbols.is_empty() {
            return Err(EngineError::EmptyWord);
        }
        if let Some((position, &s)) = symbols.iter().enumerate().find(|(_, &s)| u32::from(s) >= p) {
            return Err(EngineError::SymbolOutOfRange {
                position,
                symbol: u32::from(s),
                radix: p,
            });
        }
        Ok(Word {
            radix,
            symbols,
            numeral: OnceLock::new(),
        })
    }

    /// Parses `"121"` (one base-36 character per symbol) or, when the text
    /// contains whitespace, `"1 12 3"` (decimal symbols).
    pub fn parse(p: u32, text: &str) -> Result<Self, EngineError> {
        let text = text.trim();
        let symbols: Vec<u32> = if text.contains(char::is_whitespace) {
            text.split_whitespace()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| EngineError::BadSymbol(t.to_string()))
                })
                .collect::<Result<_, _>>()?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(36)
                        .ok_or_else(|| EngineError::BadSymbol(c.to_string()))
                })
                .collect::<Result<_, _>>()?
        };
        if let Some((position, &s)) = symbols.iter().enumerate().find(|(_, &s)| s >= p) {
            return Err(EngineError::SymbolOutOfRange {
                position,
                symbol: s,
                radix: p,
            });
        }
        Word::new(p, symbols.into_iter().map(|s| s as Symbol).collect())
    }

    /// The word of `len` symbols whose numeral is `numeral`; missing high
    /// digits become leading zeros.
    pub fn from_numeral(p: u32, numeral: Natural, len: usize) -> Result<Self, EngineError> {
        let radix = Radix::new(p).map_err(RuleError::from)?;
        if len == 0 {
            return Err(EngineError::EmptyWord);
        }
        let actual = numtheory::num_digits(radix, &numeral);
        if actual > len {
            return Err(EngineError::LengthMismatch {
                declared: len,
                actual,
            });
        }
        let mut symbols = numtheory::to_symbols_le(radix, &numeral);
        symbols.resize(len, 0);
        symbols.reverse();
        let cell = OnceLock::new();
        let _ = cell.set(numeral);
        Ok(Word {
            radix,
            symbols,
            numeral: cell,
        })
    }

    pub fn radix(&self) -> Radix {
        self.radix
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn leading_symbol(&self) -> Symbol {
        self.symbols[0]
    }

    /// The natural number spelled by the word.
    pub fn numeral(&self) -> &Natural {
        self.numeral.get_or_init(|| {
            let le: Vec<Symbol> = self.symbols.iter().rev().copied().collect();
            numtheory::from_symbols_le(self.radix, &le)
        })
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }
}

impl Clone for Word {
    fn clone(&self) -> Self {
        Word {
            radix: self.radix,
            symbols: self.symbols.clone(),
            numeral: self.numeral.clone(),
        }
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.radix == other.radix && self.symbols == other.symbols
    }
}

impl Eq for Word {}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({}; p={})", self, self.radix)
    }
}

/// Symbols as base-36 characters when the alphabet allows it, otherwise as
/// space-separated decimals.
pub fn format_symbols(p: u32, symbols: &[Symbol]) -> String {
    if p <= 36 {
        symbols
            .iter()
            .map(|&s| char::from_digit(u32::from(s), 36).expect("symbol below 36"))
            .collect()
    } else {
        symbols
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_symbols(self.radix.get(), &self.symbols))
    }
}

/// Length of the word that one step would produce, without producing it.
pub fn next_length(rule: &RuleTable, w: &Word) -> Result<usize, EngineError> {
    let lengths = rule.lengths();
    let mut total = 0usize;
    for (position, &s) in w.symbols.iter().enumerate() {
        let len = lengths
            .get(s as usize)
            .ok_or(EngineError::SymbolOutOfRange {
                position,
                symbol: u32::from(s),
                radix: rule.alphabet_size(),
            })?;
        total = total.saturating_add(*len);
    }
    Ok(total)
}

/// Replaces every symbol of `w` by its block, left to right.
pub fn step_string(rule: &RuleTable, w: &Word) -> Result<Word, EngineError> {
    let out_len = next_length(rule, w)?;
    let mut out = Vec::with_capacity(out_len);
    for &s in &w.symbols {
        out.extend_from_slice(rule.block(s));
    }
    Ok(Word {
        radix: rule.radix(),
        symbols: out,
        numeral: OnceLock::new(),
    })
}

/// Precomputed word functions of a rule that admits the numeral
/// representation.
#[derive(Debug, Clone)]
pub struct NumeralMap {
    radix: Radix,
    pieces: Vec<(Natural, usize)>,
}

impl NumeralMap {
    pub fn new(rule: &RuleTable) -> Result<Self, EngineError> {
        Ok(NumeralMap {
            radix: rule.radix(),
            pieces: rule.word_functions()?,
        })
    }

    /// One step on `(numeral, length)`.
    ///
    /// Digit `m` of `a` (counting from the least significant end) is
    /// replaced by `f(d_m)` shifted up by the total length of the blocks of
    /// digits `0..m`. The shift uses each block's explicit length, so a block
    /// of several zeros keeps its width.
    pub fn step(&self, a: &Natural, len: usize) -> Result<(Natural, usize), EngineError> {
        check_numeral_word(self.radix, a, len)?;
        let digits = numtheory::to_symbols_le(self.radix, a);
        let pieces = digits
            .iter()
            .map(|&d| self.pieces[d as usize].clone())
            .collect();
        Ok(numtheory::concat_pieces(self.radix, pieces))
    }
}

fn check_numeral_word(radix: Radix, a: &Natural, len: usize) -> Result<(), EngineError> {
    if len == 0 {
        return Err(EngineError::EmptyWord);
    }
    let actual = numtheory::num_digits(radix, a);
    if actual > len {
        return Err(EngineError::LengthMismatch {
            declared: len,
            actual,
        });
    }
    if actual < len || a.is_zero() {
        return Err(EngineError::LeadingZero);
    }
    Ok(())
}

/// One step of the general word map on numerals. `len` is the declared
/// length of the word; its leftmost symbol must be nonzero.
pub fn step_number(
    rule: &RuleTable,
    a: &Natural,
    len: usize,
) -> Result<(Natural, usize), EngineError> {
    NumeralMap::new(rule)?.step(a, len)
}

/// One step of the constant-length map: symbol `h` of the block for digit
/// `m` lands on exponent `(N − 1 − h) + N·m`.
pub fn step_constant_number(
    code: &WolframCode,
    a: &Natural,
    len: usize,
) -> Result<(Natural, usize), EngineError> {
    let rule = code.decode();
    rule.validate().map_err(RuleError::NumeralConditions)?;
    let radix = code.radix();
    check_numeral_word(radix, a, len)?;

    let n = code.block_len();
    let vector = code.rule_vector();
    let per_symbol: Vec<Natural> = (0..radix.get())
        .map(|x| {
            (0..n)
                .map(|h| numtheory::pow(radix, n - 1 - h) * vector.subs(x as Symbol, h))
                .sum()
        })
        .collect();

    // Every block has width N, so at merge level `l` the lower half always
    // spans N·2^l digits.
    let mut level: Vec<Natural> = numtheory::to_symbols_le(radix, a)
        .iter()
        .map(|&d| per_symbol[d as usize].clone())
        .collect();
    let mut shift = numtheory::pow(radix, n);
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut iter = level.into_iter();
        while let Some(lo) = iter.next() {
            match iter.next() {
                Some(hi) => next.push(hi * &shift + lo),
                None => next.push(lo),
            }
        }
        level = next;
        shift = &shift * &shift;
    }
    Ok((level.pop().unwrap_or_default(), n * len))
}

/// Which representation(s) [`run`] iterates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Strings,
    Numbers,
    /// Both routes, compared at every step.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub mode: Mode,
    pub max_word_len: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            mode: Mode::Strings,
            max_word_len: DEFAULT_MAX_WORD_LEN,
        }
    }
}

impl RunOptions {
    pub fn mode(mode: Mode) -> Self {
        RunOptions {
            mode,
            ..Default::default()
        }
    }
}

/// Marks a run that stopped because the next word would exceed the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    /// The step that was not computed.
    pub step: usize,
    pub required_len: usize,
    pub max_word_len: usize,
}

/// Words `w_0 … w_T` of one run. `w_0` is the seed.
#[derive(Debug, Clone)]
pub struct Trajectory {
    rule: RuleTable,
    words: Vec<Word>,
    requested_steps: usize,
    truncation: Option<Truncation>,
}

impl Trajectory {
    pub fn rule(&self) -> &RuleTable {
        &self.rule
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.words.iter().map(Word::len).collect()
    }

    pub fn last(&self) -> &Word {
        self.words.last().expect("trajectories hold the seed")
    }

    /// Number of completed steps.
    pub fn steps(&self) -> usize {
        self.words.len() - 1
    }

    pub fn requested_steps(&self) -> usize {
        self.requested_steps
    }

    pub fn truncation(&self) -> Option<Truncation> {
        self.truncation
    }

    pub fn is_truncated(&self) -> bool {
        self.truncation.is_some()
    }
}

/// Iterates `rule` from `seed` for `steps` steps.
///
/// Stops early, with [`Trajectory::truncation`] set, when a word would exceed
/// `options.max_word_len` symbols.
pub fn run(
    rule: &RuleTable,
    seed: &Word,
    steps: usize,
    options: RunOptions,
) -> Result<Trajectory, EngineError> {
    if let Some((position, &s)) = seed
        .symbols
        .iter()
        .enumerate()
        .find(|(_, &s)| u32::from(s) >= rule.alphabet_size())
    {
        return Err(EngineError::SymbolOutOfRange {
            position,
            symbol: u32::from(s),
            radix: rule.alphabet_size(),
        });
    }
    let numeral_map = match options.mode {
        Mode::Strings => None,
        Mode::Numbers | Mode::Both => {
            if seed.leading_symbol() == 0 {
                return Err(EngineError::LeadingZero);
            }
            Some(NumeralMap::new(rule)?)
        }
    };

    let first = Word {
        radix: rule.radix(),
        symbols: seed.symbols.clone(),
        numeral: OnceLock::new(),
    };
    let mut words = vec![first];
    let mut truncation = None;
    for t in 1..=steps {
        let current = words.last().expect("nonempty");
        let required = next_length(rule, current)?;
        if required > options.max_word_len {
            truncation = Some(Truncation {
                step: t,
                required_len: required,
                max_word_len: options.max_word_len,
            });
            break;
        }
        let next = match (options.mode, &numeral_map) {
            (Mode::Strings, _) => step_string(rule, current)?,
            (Mode::Numbers, Some(map)) => {
                let (value, len) = map.step(current.numeral(), current.len())?;
                Word::from_numeral(rule.alphabet_size(), value, len)?
            }
            (Mode::Both, Some(map)) => {
                let by_array = step_string(rule, current)?;
                let (value, len) = map.step(current.numeral(), current.len())?;
                let by_numeral = Word::from_numeral(rule.alphabet_size(), value, len)?;
                if by_array != by_numeral {
                    return Err(EngineError::RepresentationMismatch {
                        step: t,
                        from_array: by_array.to_string(),
                        from_numeral: by_numeral.to_string(),
                    });
                }
                by_numeral
            }
            _ => unreachable!("numeral map is built for numeral modes"),
        };
        words.push(next);
    }
    Ok(Trajectory {
        rule: rule.clone(),
        words,
        requested_steps: steps,
        truncation,
    })
}

/// Growth of the numeral between consecutive words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthStep {
    /// `A_{t+1} / A_t`, exact.
    pub ratio: BigRational,
    /// `⌊log_p(A_{t+1}/A_t)⌋`; equals `length_increase` or one less.
    pub floor_log: i64,
    /// `len_{t+1} − len_t`.
    pub length_increase: i64,
}

/// `⌊log_p(num/den)⌋` for positive integers, exactly.
pub fn floor_log_ratio(p: Radix, num: &Natural, den: &Natural) -> i64 {
    assert!(
        !num.is_zero() && !den.is_zero(),
        "ratio of positive integers"
    );
    if num >= den {
        let q = num / den;
        (numtheory::num_digits(p, &q) - 1) as i64
    } else {
        // Smallest k with num·p^k ≥ den, i.e. p^k ≥ ⌈den/num⌉.
        let c = Integer::div_ceil(den, num);
        let k = if numtheory::is_power_of(p, &c) {
            numtheory::num_digits(p, &c) - 1
        } else {
            numtheory::num_digits(p, &c)
        };
        -(k as i64)
    }
}

/// Exact ratios `A_{t+1}/A_t` along a trajectory.
pub fn growth_ratios(traj: &Trajectory) -> Result<Vec<GrowthStep>, EngineError> {
    let p = traj.rule.radix();
    if let Some(step) = traj.words.iter().position(|w| w.numeral().is_zero()) {
        return Err(EngineError::ZeroNumeral { step });
    }
    Ok(traj
        .words
        .windows(2)
        .map(|pair| {
            let (a, b) = (pair[0].numeral(), pair[1].numeral());
            GrowthStep {
                ratio: BigRational::new(BigInt::from(b.clone()), BigInt::from(a.clone())),
                floor_log: floor_log_ratio(p, b, a),
                length_increase: pair[1].len() as i64 - pair[0].len() as i64,
            }
        })
        .collect())
}

/// `true` when the ratio is exactly one.
pub fn is_unit_ratio(step: &GrowthStep) -> bool {
    step.ratio.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rulespec::named::*;

    fn word(p: u32, s: &str) -> Word {
        Word::parse(p, s).unwrap()
    }

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    fn wc(code: u64, len: usize, p: u32) -> WolframCode {
        WolframCode::new(n(code), len, p).unwrap()
    }

    #[test]
    fn word_parse_and_display() {
        assert_eq!(word(3, "121").symbols(), &[1, 2, 1]);
        assert_eq!(word(40, "1 39 0").symbols(), &[1, 39, 0]);
        assert_eq!(word(40, "1 39 0").to_string(), "1 39 0");
        assert_eq!(word(16, "f0a").to_string(), "f0a");
        assert!(matches!(
            Word::parse(2, "102"),
            Err(EngineError::SymbolOutOfRange { position: 2, .. })
        ));
        assert!(matches!(
            Word::parse(2, "1x"),
            Err(EngineError::SymbolOutOfRange { .. })
        ));
        assert!(matches!(
            Word::parse(40, "1 ?"),
            Err(EngineError::BadSymbol(_))
        ));
        assert_eq!(Word::parse(2, ""), Err(EngineError::EmptyWord));
    }

    #[test]
    fn word_numeral_is_synchronized() {
        let w = word(3, "121");
        assert_eq!(w.numeral(), &n(16));
        let padded = Word::from_numeral(2, n(5), 5).unwrap();
        assert_eq!(padded.to_string(), "00101");
        assert_eq!(
            Word::from_numeral(2, n(5), 2),
            Err(EngineError::LengthMismatch {
                declared: 2,
                actual: 3
            })
        );
    }

    #[test]
    fn step_string_examples() {
        assert_eq!(
            step_string(&thue_morse(), &word(2, "0110")).unwrap(),
            word(2, "01101001")
        );
        assert_eq!(
            step_string(&cantor(), &word(2, "101")).unwrap(),
            word(2, "101000101")
        );
        assert_eq!(
            step_string(&fibonacci(), &word(3, "121")).unwrap(),
            word(3, "12112")
        );
    }

    #[test]
    fn step_string_rejects_foreign_symbols() {
        let w = word(3, "12");
        assert!(matches!(
            step_string(&cantor(), &w),
            Err(EngineError::SymbolOutOfRange {
                position: 1,
                symbol: 2,
                radix: 2
            })
        ));
    }

    #[test]
    fn step_number_examples() {
        assert_eq!(step_number(&fibonacci(), &n(16), 3).unwrap(), (n(149), 5));
        assert_eq!(step_number(&cantor(), &n(5), 3).unwrap(), (n(325), 9));
        for k in 1..3u8 {
            let f = fibonacci().word_function(k).unwrap();
            assert_eq!(step_number(&fibonacci(), &n(u64::from(k)), 1).unwrap(), f);
        }
    }

    #[test]
    fn step_number_errors() {
        assert!(matches!(
            step_number(&thue_morse(), &n(1), 1),
            Err(EngineError::Rule(RuleError::NumeralConditions(_)))
        ));
        assert_eq!(
            step_number(&cantor(), &n(1), 3),
            Err(EngineError::LeadingZero)
        );
        assert_eq!(
            step_number(&cantor(), &n(0), 1),
            Err(EngineError::LeadingZero)
        );
        assert_eq!(
            step_number(&cantor(), &n(8), 2),
            Err(EngineError::LengthMismatch {
                declared: 2,
                actual: 4
            })
        );
    }

    #[test]
    fn step_constant_number_examples() {
        assert_eq!(
            step_constant_number(&wc(40, 3, 2), &n(1), 1).unwrap(),
            (n(5), 3)
        );
        assert_eq!(
            step_constant_number(&wc(40, 3, 2), &n(5), 3).unwrap(),
            (n(325), 9)
        );
        assert_eq!(
            step_constant_number(&wc(2, 1, 2), &n(1), 1).unwrap(),
            (n(1), 1)
        );
        assert!(matches!(
            step_constant_number(&wc(6, 2, 2), &n(1), 1),
            Err(EngineError::Rule(RuleError::NumeralConditions(_)))
        ));
    }

    #[test]
    fn run_examples() {
        let tm = run(&thue_morse(), &word(2, "0"), 4, RunOptions::default()).unwrap();
        assert_eq!(tm.last().to_string(), "0110100110010110");
        assert_eq!(tm.lengths(), vec![1, 2, 4, 8, 16]);

        let cantor_run = run(&cantor(), &word(2, "1"), 3, RunOptions::mode(Mode::Both)).unwrap();
        assert_eq!(cantor_run.last().to_string(), "101000101000000000101000101");

        let fib = run(
            &fibonacci(),
            &word(3, "1"),
            5,
            RunOptions::mode(Mode::Numbers),
        )
        .unwrap();
        assert_eq!(fib.lengths(), vec![1, 2, 3, 5, 8, 13]);
        assert_eq!(fib.last().to_string(), "1211212112112");
    }

    #[test]
    fn run_modes_and_seed_rules() {
        let seed = word(2, "01");
        assert!(run(&cantor(), &seed, 2, RunOptions::default()).is_ok());
        assert_eq!(
            run(&cantor(), &seed, 2, RunOptions::mode(Mode::Numbers)).unwrap_err(),
            EngineError::LeadingZero
        );
        assert!(matches!(
            run(
                &thue_morse(),
                &word(2, "1"),
                2,
                RunOptions::mode(Mode::Both)
            ),
            Err(EngineError::Rule(_))
        ));
        let zero_steps = run(&cantor(), &word(2, "1"), 0, RunOptions::default()).unwrap();
        assert_eq!(zero_steps.words().len(), 1);
    }

    #[test]
    fn run_truncates_at_cap() {
        let opts = RunOptions {
            mode: Mode::Strings,
            max_word_len: 10,
        };
        let t = run(&cantor(), &word(2, "1"), 5, opts).unwrap();
        assert_eq!(t.lengths(), vec![1, 3, 9]);
        assert_eq!(
            t.truncation(),
            Some(Truncation {
                step: 3,
                required_len: 27,
                max_word_len: 10
            })
        );
        assert_eq!(t.requested_steps(), 5);
        assert_eq!(t.steps(), 2);
    }

    #[test]
    fn growth_examples() {
        let c = run(&cantor(), &word(2, "1"), 4, RunOptions::mode(Mode::Numbers)).unwrap();
        let g = growth_ratios(&c).unwrap();
        let inc: Vec<i64> = g.iter().map(|s| s.length_increase).collect();
        assert_eq!(inc, vec![2, 6, 18, 54]);
        for s in &g {
            assert_eq!(s.floor_log, s.length_increase);
        }
        assert_eq!(g[0].ratio, BigRational::from_integer(5.into()));

        let fib = run(
            &fibonacci(),
            &word(3, "1"),
            7,
            RunOptions::mode(Mode::Numbers),
        )
        .unwrap();
        let g = growth_ratios(&fib).unwrap();
        let inc: Vec<i64> = g.iter().map(|s| s.length_increase).collect();
        assert_eq!(inc, vec![1, 1, 2, 3, 5, 8, 13]);
        assert!(g.iter().all(|s| s.floor_log == s.length_increase));

        let id = run(&identity(3), &word(3, "21"), 3, RunOptions::default()).unwrap();
        assert!(growth_ratios(&id).unwrap().iter().all(is_unit_ratio));

        let zero = run(&cantor(), &word(2, "0"), 1, RunOptions::default()).unwrap();
        assert_eq!(
            growth_ratios(&zero),
            Err(EngineError::ZeroNumeral { step: 0 })
        );
    }

    #[test]
    fn floor_log_ratio_small_cases() {
        let p = Radix::new(3).unwrap();
        for num in 1u64..60 {
            for den in 1u64..60 {
                let exact = ((num as f64) / (den as f64)).log(3.0);
                // Skip values whose float log sits on an integer boundary.
                if (exact - exact.round()).abs() < 1e-9 {
                    continue;
                }
                assert_eq!(
                    floor_log_ratio(p, &n(num), &n(den)),
                    exact.floor() as i64,
                    "{num}/{den}"
                );
            }
        }
        assert_eq!(floor_log_ratio(p, &n(1), &n(9)), -2);
        assert_eq!(floor_log_ratio(p, &n(9), &n(1)), 2);
        assert_eq!(floor_log_ratio(p, &n(1), &n(10)), -3);
    }
}
