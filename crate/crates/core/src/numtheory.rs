//! Digit arithmetic over arbitrary-precision naturals.
//!
//! A word over the alphabet `0..p` is read as the radix-`p` numeral whose
//! least significant digit is digit 0. Everything here works on exact
//! integers; digit counts are never taken from a floating-point logarithm,
//! since words routinely run to thousands of digits.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision non-negative integer.
pub type Natural = BigUint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("radix must be at least 2, got {0}")]
    RadixTooSmall(u32),
    #[error("digit {digit} at index {index} is out of range for radix {radix}")]
    DigitOutOfRange {
        index: usize,
        digit: u32,
        radix: u32,
    },
    #[error("concatenation exponent is undefined for a zero upper operand")]
    ZeroUpperOperand,
}

/// A positional base `p >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Radix(u32);

impl Radix {
    pub const BINARY: Radix = Radix(2);
    pub const DECIMAL: Radix = Radix(10);

    pub fn new(p: u32) -> Result<Self, NumError> {
        if p < 2 {
            return Err(NumError::RadixTooSmall(p));
        }
        Ok(Radix(p))
    }

    #[inline]
    pub const fn get(self) -> u32 {
        self.0
    }
}

impl std::fmt::Display for Radix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<u32> for Radix {
    type Error = NumError;

    fn try_from(p: u32) -> Result<Self, Self::Error> {
        Radix::new(p)
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// The window function `½(sign(x+y) − sign(x−y))` with `sign(0) = 0`.
///
/// For `y > 0` it is 1 inside `|x| < y`, ½ on the border and 0 outside.
/// Over integers, `bfunc(n - m, 0.5)` is the Kronecker delta.
pub fn bfunc(x: f64, y: f64) -> f64 {
    0.5 * (sign(x + y) - sign(x - y))
}

/// `p^k` as a natural.
pub fn pow(p: Radix, k: usize) -> Natural {
    let k = u32::try_from(k).expect("exponent exceeds u32");
    Natural::from(p.get()).pow(k)
}

/// The `k`-th radix-`p` digit of `a`, `⌊a/pᵏ⌋ − p⌊a/pᵏ⁺¹⌋`.
///
/// `p = 1` is admitted and always yields 0. `p = 0` is treated the same way.
pub fn digit(p: u32, k: usize, a: &Natural) -> u32 {
    if p <= 1 {
        return 0;
    }
    let shifted = a / pow(Radix(p), k);
    let above = &shifted / p;
    (shifted - above * p)
        .to_u32()
        .expect("a single digit always fits in u32")
}

/// Number of radix-`p` digits of `a`, i.e. `1 + ⌊log_p a⌋`; zero has one digit.
pub fn num_digits(p: Radix, a: &Natural) -> usize {
    if a.is_zero() {
        return 1;
    }
    let p = p.get();
    let bits = a.bits();
    if p.is_power_of_two() {
        let step = u64::from(p.trailing_zeros());
        return ((bits - 1) / step + 1) as usize;
    }

    // 2^(bits-1) <= a < 2^bits; start from the float estimate and settle it
    // by exact comparison.
    let estimate = ((bits - 1) as f64 / f64::from(p).log2()).floor();
    let mut k = estimate.max(0.0) as usize;
    let mut power = pow(Radix(p), k);
    while k > 0 && &power > a {
        power /= p;
        k -= 1;
    }
    loop {
        let next = &power * p;
        if &next > a {
            break;
        }
        power = next;
        k += 1;
    }
    k + 1
}

/// Radix-`p` digits of `a`, least significant first. Zero yields `[0]`.
pub fn to_digits(p: Radix, a: &Natural) -> Vec<u32> {
    if a.is_zero() {
        return vec![0];
    }
    if p.get() <= 256 {
        return a.to_radix_le(p.get()).into_iter().map(u32::from).collect();
    }
    let mut out = Vec::with_capacity(num_digits(p, a));
    let mut rest = a.clone();
    while !rest.is_zero() {
        let d = (&rest % p.get()).to_u32().expect("remainder below radix");
        out.push(d);
        rest /= p.get();
    }
    out
}

/// `Σ pᵏ·ds[k]`, with `ds` least significant first.
pub fn from_digits(p: Radix, ds: &[u32]) -> Result<Natural, NumError> {
    if let Some((index, &digit)) = ds.iter().enumerate().find(|(_, &d)| d >= p.get()) {
        return Err(NumError::DigitOutOfRange {
            index,
            digit,
            radix: p.get(),
        });
    }
    if ds.is_empty() {
        return Ok(Natural::zero());
    }
    if p.get() <= 256 {
        let bytes: Vec<u8> = ds.iter().map(|&d| d as u8).collect();
        return Ok(Natural::from_radix_le(&bytes, p.get()).expect("digits validated"));
    }
    let mut acc = Natural::zero();
    for &d in ds.iter().rev() {
        acc *= p.get();
        acc += d;
    }
    Ok(acc)
}

/// Byte-symbol variant of [`to_digits`] for alphabets of at most 256 symbols.
pub(crate) fn to_symbols_le(p: Radix, a: &Natural) -> Vec<u8> {
    debug_assert!(p.get() <= 256);
    if a.is_zero() {
        return vec![0];
    }
    a.to_radix_le(p.get())
}

/// Byte-symbol variant of [`from_digits`]; symbols must already be below `p`.
pub(crate) fn from_symbols_le(p: Radix, ds: &[u8]) -> Natural {
    debug_assert!(p.get() <= 256);
    if ds.is_empty() {
        return Natural::zero();
    }
    Natural::from_radix_le(ds, p.get()).expect("symbols below radix")
}

/// The concatenation operator `J_p(a, b) = b·p^(digits of a) + a`: the digits
/// of `b` are placed above those of `a`.
pub fn concat(p: Radix, a: &Natural, b: &Natural) -> Natural {
    b * pow(p, num_digits(p, a)) + a
}

/// `log_p((J_p(a, b) − a)/b)`, which is always the digit count of `a`.
pub fn concat_exponent(p: Radix, a: &Natural, b: &Natural) -> Result<usize, NumError> {
    if b.is_zero() {
        return Err(NumError::ZeroUpperOperand);
    }
    let joined = concat(p, a, b);
    let scale = (joined - a) / b;
    let k = num_digits(p, &scale) - 1;
    debug_assert_eq!(pow(p, k), scale, "quotient is an exact power of the radix");
    Ok(k)
}

/// Joins `(value, length)` pieces, lowest piece first, into one numeral.
///
/// Lengths are explicit so that all-zero blocks still occupy their width.
/// Pieces are merged pairwise, which keeps the cost near one big
/// multiplication per level instead of one per piece.
pub(crate) fn concat_pieces(p: Radix, mut pieces: Vec<(Natural, usize)>) -> (Natural, usize) {
    if pieces.is_empty() {
        return (Natural::zero(), 0);
    }
    while pieces.len() > 1 {
        let mut merged = Vec::with_capacity(pieces.len().div_ceil(2));
        let mut iter = pieces.into_iter();
        while let Some((lo, lo_len)) = iter.next() {
            match iter.next() {
                Some((hi, hi_len)) => {
                    let value = if hi.is_zero() {
                        lo
                    } else {
                        hi * pow(p, lo_len) + lo
                    };
                    merged.push((value, lo_len + hi_len));
                }
                None => merged.push((lo, lo_len)),
            }
        }
        pieces = merged;
    }
    pieces.pop().expect("one piece left")
}

/// `true` when `a` is exactly `p^k` for some `k`.
pub fn is_power_of(p: Radix, a: &Natural) -> bool {
    !a.is_zero() && pow(p, num_digits(p, a) - 1) == *a
}
