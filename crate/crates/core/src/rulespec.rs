//! Substitution tables, their validity conditions and the Wolfram codec.
//!
//! Blocks are stored leftmost-first, exactly as they are displayed. Inside a
//! Wolfram code the entry `a[m + n*N]` is the character at displayed position
//! `m` of the block that replaces symbol `n`, with `m = 0` the leftmost one.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::numtheory::{self, bfunc, Natural, NumError, Radix};

/// One alphabet symbol. Alphabets are limited to 256 symbols.
pub type Symbol = u8;

pub const MAX_ALPHABET: u32 = 256;

/// A broken invariant of a substitution table, tagged with the symbol whose
/// block breaks it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SymbolOutOfRange {
        symbol: usize,
        position: usize,
        value: u32,
    },
    EmptyBlock {
        symbol: usize,
    },
    /// The block of symbol 0 must consist of zeros only.
    NonZeroInZeroBlock {
        position: usize,
        value: u32,
    },
    /// Blocks of nonzero symbols must start with a nonzero symbol.
    LeadingZero {
        symbol: usize,
    },
}

impl Violation {
    /// Structural violations make a table unusable by any engine; the other
    /// two only rule out the numeral representation.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            Violation::SymbolOutOfRange { .. } | Violation::EmptyBlock { .. }
        )
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SymbolOutOfRange {
                symbol,
                position,
                value,
            } => write!(
                f,
                "block of symbol {symbol}: entry {value} at position {position} is outside the alphabet"
            ),
            Violation::EmptyBlock { symbol } => {
                write!(f, "block of symbol {symbol} is empty (erasing rules are not supported)")
            }
            Violation::NonZeroInZeroBlock { position, value } => write!(
                f,
                "block of symbol 0 must be all zeros, found {value} at position {position}"
            ),
            Violation::LeadingZero { symbol } => {
                write!(f, "block of symbol {symbol} starts with 0")
            }
        }
    }
}

fn join_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error(transparent)]
    Radix(#[from] NumError),
    #[error("alphabet size {0} exceeds the supported maximum of 256")]
    AlphabetTooLarge(u32),
    #[error("expected {expected} blocks, one per symbol, found {found}")]
    BlockCount { expected: usize, found: usize },
    #[error("malformed rule: {}", join_violations(.0))]
    Malformed(Vec<Violation>),
    #[error("rule cannot be used as a numeral map: {}", join_violations(.0))]
    NumeralConditions(Vec<Violation>),
    #[error("rule has non-constant length")]
    NonConstantLength,
    #[error("block length must be at least 1")]
    ZeroBlockLength,
    #[error("code {code} is out of range for block length {block_len} and alphabet {radix} (limit {limit})")]
    CodeOutOfRange {
        code: Natural,
        block_len: usize,
        radix: u32,
        limit: Natural,
    },
    #[error("symbol {symbol} is outside alphabet of size {radix}")]
    SymbolOutOfRange { symbol: u32, radix: u32 },
}

/// Checks raw blocks against every table invariant and returns all
/// violations, in symbol order.
pub fn validate_blocks(p: u32, blocks: &[Vec<u32>]) -> Vec<Violation> {
    let mut out = Vec::new();
    for (symbol, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            out.push(Violation::EmptyBlock { symbol });
            continue;
        }
        for (position, &value) in block.iter().enumerate() {
            if value >= p {
                out.push(Violation::SymbolOutOfRange {
                    symbol,
                    position,
                    value,
                });
            }
        }
        if symbol == 0 {
            for (position, &value) in block.iter().enumerate() {
                if value != 0 {
                    out.push(Violation::NonZeroInZeroBlock { position, value });
                }
            }
        } else if block[0] == 0 {
            out.push(Violation::LeadingZero { symbol });
        }
    }
    out
}

/// A substitution rule: alphabet `0..p` and one replacement block per symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleTable {
    radix: Radix,
    blocks: Vec<Vec<Symbol>>,
}

impl RuleTable {
    /// Builds a table, rejecting out-of-range symbols and empty blocks.
    ///
    /// Tables that break the zero-block conditions are accepted here; see
    /// [`RuleTable::validate`].
    pub fn new(p: u32, blocks: Vec<Vec<u32>>) -> Result<Self, RuleError> {
        let radix = Radix::new(p)?;
        if p > MAX_ALPHABET {
            return Err(RuleError::AlphabetTooLarge(p));
        }
        if blocks.len() != p as usize {
            return Err(RuleError::BlockCount {
                expected: p as usize,
                found: blocks.len(),
            });
        }
        let structural: Vec<_> = validate_blocks(p, &blocks)
            .into_iter()
            .filter(Violation::is_structural)
            .collect();
        if !structural.is_empty() {
            return Err(RuleError::Malformed(structural));
        }
        let blocks = blocks
            .into_iter()
            .map(|b| b.into_iter().map(|s| s as Symbol).collect())
            .collect();
        Ok(RuleTable { radix, blocks })
    }

    /// Convenience constructor from digit strings such as `["000", "101"]`.
    pub fn from_strs(p: u32, blocks: &[&str]) -> Result<Self, RuleError> {
        let parsed = blocks
            .iter()
            .map(|b| {
                b.chars()
                    .map(|c| c.to_digit(36).unwrap_or(u32::MAX))
                    .collect()
            })
            .collect();
        RuleTable::new(p, parsed)
    }

    pub fn radix(&self) -> Radix {
        self.radix
    }

    pub fn alphabet_size(&self) -> u32 {
        self.radix.get()
    }

    pub fn block(&self, symbol: Symbol) -> &[Symbol] {
        &self.blocks[symbol as usize]
    }

    pub fn blocks(&self) -> &[Vec<Symbol>] {
        &self.blocks
    }

    /// Block lengths `L_k`, indexed by symbol.
    pub fn lengths(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Checks the two conditions needed for the numeral representation: the
    /// block of 0 is all zeros and every other block starts with a nonzero
    /// symbol.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let raw: Vec<Vec<u32>> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&s| u32::from(s)).collect())
            .collect();
        let violations = validate_blocks(self.alphabet_size(), &raw);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// The common block length, if every block has the same length.
    pub fn constant_length(&self) -> Option<usize> {
        let first = self.blocks[0].len();
        self.blocks
            .iter()
            .all(|b| b.len() == first)
            .then_some(first)
    }

    /// True iff every block has length 1 and `k -> block_k[0]` is a
    /// permutation of the alphabet.
    pub fn is_reversible(&self) -> bool {
        if self.constant_length() != Some(1) {
            return false;
        }
        let mut seen = vec![false; self.blocks.len()];
        for b in &self.blocks {
            let s = b[0] as usize;
            if seen[s] {
                return false;
            }
            seen[s] = true;
        }
        true
    }

    /// The flat rule vector of a constant-length table.
    pub fn rule_vector(&self) -> Result<RuleVector, RuleError> {
        let block_len = self.constant_length().ok_or(RuleError::NonConstantLength)?;
        Ok(RuleVector {
            radix: self.radix,
            block_len,
            entries: self.blocks.concat(),
        })
    }

    pub fn wolfram_code(&self) -> Result<WolframCode, RuleError> {
        Ok(self.rule_vector()?.code())
    }

    /// The word function of one symbol: the numeral spelling its block
    /// (leftmost character most significant) together with the block length.
    ///
    /// The length is carried separately because the block of 0 is a run of
    /// zeros whose numeral is 0 whatever its length.
    pub fn word_function(&self, symbol: Symbol) -> Result<(Natural, usize), RuleError> {
        if u32::from(symbol) >= self.alphabet_size() {
            return Err(RuleError::SymbolOutOfRange {
                symbol: u32::from(symbol),
                radix: self.alphabet_size(),
            });
        }
        self.validate().map_err(RuleError::NumeralConditions)?;
        Ok(self.block_numeral(symbol))
    }

    /// Word functions for the whole alphabet, indexed by symbol.
    pub fn word_functions(&self) -> Result<Vec<(Natural, usize)>, RuleError> {
        self.validate().map_err(RuleError::NumeralConditions)?;
        Ok((0..self.blocks.len())
            .map(|k| self.block_numeral(k as Symbol))
            .collect())
    }

    fn block_numeral(&self, symbol: Symbol) -> (Natural, usize) {
        let block = &self.blocks[symbol as usize];
        let reversed: Vec<Symbol> = block.iter().rev().copied().collect();
        (
            numtheory::from_symbols_le(self.radix, &reversed),
            block.len(),
        )
    }

    /// Serializes to the line-oriented rule file format.
    pub fn to_rule_file(&self) -> String {
        let mut out = format!("p {}\n", self.alphabet_size());
        for (k, block) in self.blocks.iter().enumerate() {
            let rhs: Vec<String> = block.iter().map(ToString::to_string).collect();
            out.push_str(&format!("{k} -> {}\n", rhs.join(" ")));
        }
        out
    }
}

impl fmt::Display for RuleTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_rule_file())
    }
}

/// The flat vector `a` of a constant-length rule, `pN` entries long.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleVector {
    radix: Radix,
    block_len: usize,
    entries: Vec<Symbol>,
}

impl RuleVector {
    pub fn entries(&self) -> &[Symbol] {
        &self.entries
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// Character `h` of the block replacing `x`: `a[h + N x]`.
    #[inline]
    pub fn subs(&self, x: Symbol, h: usize) -> Symbol {
        self.entries[h + self.block_len * x as usize]
    }

    /// The same selection written as the double sum of window products
    /// `Σ a[m+nN]·B(h−m, ½)·B(n−x, ½)`. Quadratic; kept as a reference.
    pub fn subs_by_window_sum(&self, x: Symbol, h: usize) -> Symbol {
        let p = self.radix.get() as usize;
        let n_len = self.block_len;
        let mut acc = 0.0;
        for n in 0..p {
            for m in 0..n_len {
                let a = f64::from(self.entries[m + n * n_len]);
                acc += a * bfunc(h as f64 - m as f64, 0.5) * bfunc(n as f64 - f64::from(x), 0.5);
            }
        }
        acc as Symbol
    }

    /// `Σ a_k p^k`.
    pub fn code(&self) -> WolframCode {
        WolframCode {
            code: numtheory::from_symbols_le(self.radix, &self.entries),
            block_len: self.block_len,
            radix: self.radix,
        }
    }
}

/// The triple `(code, N, p)` that names a constant-length rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WolframCode {
    code: Natural,
    block_len: usize,
    radix: Radix,
}

impl WolframCode {
    pub fn new(code: Natural, block_len: usize, p: u32) -> Result<Self, RuleError> {
        let radix = Radix::new(p)?;
        if p > MAX_ALPHABET {
            return Err(RuleError::AlphabetTooLarge(p));
        }
        if block_len == 0 {
            return Err(RuleError::ZeroBlockLength);
        }
        let limit = Self::rule_count(radix, block_len);
        if code >= limit {
            return Err(RuleError::CodeOutOfRange {
                code,
                block_len,
                radix: p,
                limit,
            });
        }
        Ok(WolframCode {
            code,
            block_len,
            radix,
        })
    }

    /// Number of distinct rules, `p^(pN)`.
    pub fn rule_count(radix: Radix, block_len: usize) -> Natural {
        numtheory::pow(radix, radix.get() as usize * block_len)
    }

    pub fn code(&self) -> &Natural {
        &self.code
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn radix(&self) -> Radix {
        self.radix
    }

    pub fn rule_vector(&self) -> RuleVector {
        let len = self.radix.get() as usize * self.block_len;
        let mut entries = if self.code.is_zero() {
            Vec::new()
        } else {
            numtheory::to_symbols_le(self.radix, &self.code)
        };
        entries.resize(len, 0);
        RuleVector {
            radix: self.radix,
            block_len: self.block_len,
            entries,
        }
    }

    pub fn decode(&self) -> RuleTable {
        let vector = self.rule_vector();
        let blocks = vector
            .entries
            .chunks(self.block_len)
            .map(<[Symbol]>::to_vec)
            .collect();
        RuleTable {
            radix: self.radix,
            blocks,
        }
    }
}

impl fmt::Display for WolframCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.code, self.block_len, self.radix)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn parse_err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Error)]
pub enum RuleFileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Rule(#[from] RuleError),
}

/// Parses the rule file format:
///
/// ```text
/// # Fibonacci word
/// p 3
/// 0 -> 0
/// 1 -> 1 2
/// 2 -> 1
/// ```
///
/// Symbols without a line map to themselves.
pub fn parse_rule_file(text: &str) -> Result<RuleTable, RuleFileError> {
    let mut alphabet: Option<u32> = None;
    let mut entries: Vec<(usize, u32, Vec<u32>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p ").or_else(|| line.strip_prefix("p\t")) {
            if alphabet.is_some() {
                return Err(parse_err(line_no, "duplicate alphabet header").into());
            }
            let p = rest.trim().parse::<u32>().map_err(|_| {
                parse_err(line_no, format!("invalid alphabet size `{}`", rest.trim()))
            })?;
            alphabet = Some(p);
            continue;
        }
        let (lhs, rhs) = line
            .split_once("->")
            .ok_or_else(|| parse_err(line_no, "expected `p <size>` or `<symbol> -> <symbols>`"))?;
        let symbol = lhs
            .trim()
            .parse::<u32>()
            .map_err(|_| parse_err(line_no, format!("invalid symbol `{}`", lhs.trim())))?;
        let block = rhs
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u32>()
                    .map_err(|_| parse_err(line_no, format!("invalid symbol `{tok}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if block.is_empty() {
            return Err(parse_err(line_no, format!("empty block for symbol {symbol}")).into());
        }
        entries.push((line_no, symbol, block));
    }

    let p = alphabet.ok_or_else(|| parse_err(0, "missing `p <size>` header"))?;
    Radix::new(p).map_err(RuleError::from)?;
    if p > MAX_ALPHABET {
        return Err(RuleError::AlphabetTooLarge(p).into());
    }
    let mut blocks: Vec<Option<Vec<u32>>> = vec![None; p as usize];
    for (line_no, symbol, block) in entries {
        let slot = blocks.get_mut(symbol as usize).ok_or_else(|| {
            parse_err(
                line_no,
                format!("symbol {symbol} is outside alphabet of size {p}"),
            )
        })?;
        if slot.is_some() {
            return Err(parse_err(line_no, format!("duplicate rule for symbol {symbol}")).into());
        }
        *slot = Some(block);
    }
    let blocks = blocks
        .into_iter()
        .enumerate()
        .map(|(k, b)| b.unwrap_or_else(|| vec![k as u32]))
        .collect();
    Ok(RuleTable::new(p, blocks)?)
}

impl FromStr for RuleTable {
    type Err = RuleFileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rule_file(s)
    }
}

/// Rules used throughout the examples and tests.
pub mod named {
    use super::RuleTable;

    /// `0 -> 01`, `1 -> 10`.
    pub fn thue_morse() -> RuleTable {
        RuleTable::from_strs(2, &["01", "10"]).expect("static rule")
    }

    /// `0 -> 000`, `1 -> 101`.
    pub fn cantor() -> RuleTable {
        RuleTable::from_strs(2, &["000", "101"]).expect("static rule")
    }

    /// `0 -> 0`, `1 -> 12`, `2 -> 1` over three symbols.
    pub fn fibonacci() -> RuleTable {
        RuleTable::from_strs(3, &["0", "12", "1"]).expect("static rule")
    }

    /// Every symbol maps to itself.
    pub fn identity(p: u32) -> RuleTable {
        RuleTable::new(p, (0..p).map(|k| vec![k]).collect()).expect("identity rule")
    }
}
