//! The representation-equivalence suite.
//!
//! For every rule of a family and every seed, the numeral route must spell
//! exactly the word the array route produces, step after step. The same
//! sweep checks length additivity and that lengths never shrink.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::engine::{self, EngineError, Word};
use crate::numtheory::{self, Natural, Radix};
use crate::rulespec::{RuleTable, Symbol, WolframCode};

/// A numeral-route stepper. The suite is generic over it so that a
/// deliberately broken one can prove the suite catches faults.
pub trait NumeralStepper: Sync {
    fn step(
        &self,
        rule: &RuleTable,
        a: &Natural,
        len: usize,
    ) -> Result<(Natural, usize), EngineError>;
}

/// [`engine::step_number`], plus [`engine::step_constant_number`] for
/// constant-length rules, which must agree with it.
#[derive(Debug, Clone, Copy, Default)]
pub struct WordMap;

impl NumeralStepper for WordMap {
    fn step(
        &self,
        rule: &RuleTable,
        a: &Natural,
        len: usize,
    ) -> Result<(Natural, usize), EngineError> {
        let general = engine::step_number(rule, a, len)?;
        if let Ok(code) = rule.wolfram_code() {
            let constant = engine::step_constant_number(&code, a, len)?;
            if constant != general {
                return Err(EngineError::RepresentationMismatch {
                    step: 0,
                    from_array: format!("{} ({})", general.0, general.1),
                    from_numeral: format!("{} ({})", constant.0, constant.1),
                });
            }
        }
        Ok(general)
    }
}

/// Weights block position `h` by `p^h` instead of `p^(L−1−h)`, i.e. reads
/// every block backwards. Wrong on purpose, for self-testing the suite.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReversedBlocks;

impl NumeralStepper for ReversedBlocks {
    fn step(
        &self,
        rule: &RuleTable,
        a: &Natural,
        len: usize,
    ) -> Result<(Natural, usize), EngineError> {
        let radix = rule.radix();
        let digits = numtheory::to_digits(radix, a);
        if digits.len() != len {
            return Err(EngineError::LeadingZero);
        }
        let mut value = Natural::default();
        let mut offset = 0usize;
        for d in digits {
            let block = rule.block(d as Symbol);
            for (h, &s) in block.iter().enumerate() {
                value += numtheory::pow(radix, offset + h) * u32::from(s);
            }
            offset += block.len();
        }
        Ok((value, offset))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckConfig {
    /// Exhaustive family: alphabets `2..=max_p`.
    pub max_p: u32,
    /// Exhaustive family: block lengths `1..=max_len`.
    pub max_len: usize,
    pub max_seed_len: usize,
    pub max_steps: usize,
    /// Random valid rules on top of the exhaustive family.
    pub samples: usize,
    pub random_max_p: u32,
    pub random_max_len: usize,
    pub random_max_steps: usize,
    pub rng_seed: u64,
    /// Sampled codes for the `(N = 3, p = 7)` codec check.
    pub codec_samples: usize,
    /// Worker threads, `0` for the rayon default.
    pub workers: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            max_p: 3,
            max_len: 3,
            max_seed_len: 4,
            max_steps: 4,
            samples: 200,
            random_max_p: 5,
            random_max_len: 4,
            random_max_steps: 6,
            rng_seed: 0x5eed,
            codec_samples: 1000,
            workers: 0,
        }
    }
}

/// First failing case of a sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub rule: RuleTable,
    pub seed: String,
    pub step: usize,
    pub detail: String,
}

impl std::fmt::Display for Counterexample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rule = self.rule.to_rule_file().trim_end().replace('\n', "; ");
        write!(
            f,
            "rule [{rule}] seed {} step {}: {}",
            self.seed, self.step, self.detail
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckSummary {
    pub exhaustive_rules: usize,
    pub exhaustive_cases: usize,
    pub random_rules: usize,
    pub random_cases: usize,
    /// Word-steps compared across all cases.
    pub steps_compared: usize,
    pub codec_cases: usize,
    pub mismatches: usize,
    /// Trajectories whose length stayed constant.
    pub constant_cases: usize,
    pub first_failure: Option<Counterexample>,
}

impl CheckSummary {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

/// All valid rules with alphabet `p` and block lengths `1..=max_len`: the 0
/// block is a run of zeros and every other block starts with a nonzero
/// symbol.
pub fn valid_rules(p: u32, max_len: usize) -> Vec<RuleTable> {
    let zero_blocks: Vec<Vec<u32>> = (1..=max_len).map(|l| vec![0; l]).collect();
    let mut other_blocks: Vec<Vec<u32>> = Vec::new();
    for l in 1..=max_len {
        let total = (p as usize).pow(l as u32);
        for idx in 0..total {
            let mut block = Vec::with_capacity(l);
            let mut rest = idx;
            for _ in 0..l {
                block.push((rest % p as usize) as u32);
                rest /= p as usize;
            }
            block.reverse();
            if block[0] != 0 {
                other_blocks.push(block);
            }
        }
    }

    let mut tables: Vec<Vec<Vec<u32>>> = zero_blocks.into_iter().map(|b| vec![b]).collect();
    for _ in 1..p {
        tables = tables
            .into_iter()
            .flat_map(|t| {
                other_blocks.iter().map(move |b| {
                    let mut next = t.clone();
                    next.push(b.clone());
                    next
                })
            })
            .collect();
    }
    tables
        .into_iter()
        .map(|blocks| RuleTable::new(p, blocks).expect("enumerated rules are well formed"))
        .collect()
}

/// All words of length `1..=max_len` over `p` symbols with a nonzero first
/// symbol.
pub fn seeds(p: u32, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        let lo = numtheory::pow(Radix::new(p).expect("p >= 2"), len - 1);
        let hi = &lo * p;
        let mut a = lo;
        while a < hi {
            out.push(Word::from_numeral(p, a.clone(), len).expect("length fits"));
            a += 1u32;
        }
    }
    out
}

/// Rejection-samples a uniform valid rule.
pub fn random_valid_rule<R: Rng>(rng: &mut R, max_p: u32, max_len: usize) -> RuleTable {
    loop {
        let p = rng.gen_range(2..=max_p);
        let blocks: Vec<Vec<u32>> = (0..p)
            .map(|_| {
                let len = rng.gen_range(1..=max_len);
                (0..len).map(|_| rng.gen_range(0..p)).collect()
            })
            .collect();
        let rule = RuleTable::new(p, blocks).expect("symbols drawn in range");
        if rule.is_valid() {
            return rule;
        }
    }
}

fn random_seed<R: Rng>(rng: &mut R, p: u32, max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len);
    let symbols = (0..len)
        .map(|i| {
            if i == 0 {
                rng.gen_range(1..p) as Symbol
            } else {
                rng.gen_range(0..p) as Symbol
            }
        })
        .collect();
    Word::new(p, symbols).expect("symbols drawn in range")
}

#[derive(Debug, Default)]
struct CaseResult {
    steps: usize,
    constant: bool,
    failure: Option<Counterexample>,
}

fn check_case(
    stepper: &dyn NumeralStepper,
    rule: &RuleTable,
    seed: &Word,
    steps: usize,
) -> CaseResult {
    let fail = |step: usize, detail: String| CaseResult {
        steps: step,
        constant: false,
        failure: Some(Counterexample {
            rule: rule.clone(),
            seed: seed.to_string(),
            step,
            detail,
        }),
    };
    let lengths = rule.lengths();
    let mut current = seed.clone();
    let mut numeral: (BigUint, usize) = (seed.numeral().clone(), seed.len());
    let mut constant = true;
    for t in 1..=steps {
        let by_array = match engine::step_string(rule, &current) {
            Ok(w) => w,
            Err(e) => return fail(t, format!("array route failed: {e}")),
        };
        numeral = match stepper.step(rule, &numeral.0, numeral.1) {
            Ok(n) => n,
            Err(e) => return fail(t, format!("numeral route failed: {e}")),
        };
        let by_numeral =
            match Word::from_numeral(rule.alphabet_size(), numeral.0.clone(), numeral.1) {
                Ok(w) => w,
                Err(e) => {
                    return fail(t, format!("numeral route produced an unreadable word: {e}"))
                }
            };
        if by_array != by_numeral {
            return fail(t, format!("array `{by_array}` vs numeral `{by_numeral}`"));
        }
        let additive: usize = current.symbols().iter().map(|&s| lengths[s as usize]).sum();
        if by_array.len() != additive {
            return fail(
                t,
                format!(
                    "length {} is not the block-length sum {additive}",
                    by_array.len()
                ),
            );
        }
        if by_array.len() < current.len() {
            return fail(
                t,
                format!("length shrank from {} to {}", current.len(), by_array.len()),
            );
        }
        constant &= by_array.len() == current.len();
        current = by_array;
    }
    CaseResult {
        steps,
        constant,
        failure: None,
    }
}

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
}

fn fold_cases(summary: &mut CheckSummary, results: Vec<CaseResult>) {
    for r in results {
        summary.steps_compared += r.steps;
        if r.constant && r.failure.is_none() {
            summary.constant_cases += 1;
        }
        if let Some(f) = r.failure {
            summary.mismatches += 1;
            if summary.first_failure.is_none() {
                summary.first_failure = Some(f);
            }
        }
    }
}

/// Runs the exhaustive family, the random family and the codec round trips.
/// Results, including which failure is reported first, do not depend on the
/// number of workers.
pub fn run_check(config: &CheckConfig, stepper: &dyn NumeralStepper) -> CheckSummary {
    let mut summary = CheckSummary::default();
    let pool = pool(config.workers);

    for p in 2..=config.max_p {
        let rules = valid_rules(p, config.max_len);
        let seed_words = seeds(p, config.max_seed_len);
        summary.exhaustive_rules += rules.len();
        summary.exhaustive_cases += rules.len() * seed_words.len();
        let results: Vec<CaseResult> = pool.install(|| {
            rules
                .par_iter()
                .flat_map_iter(|rule| {
                    seed_words
                        .iter()
                        .map(move |seed| check_case(stepper, rule, seed, config.max_steps))
                })
                .collect()
        });
        fold_cases(&mut summary, results);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let random_cases: Vec<(RuleTable, Word)> = (0..config.samples)
        .map(|_| {
            let rule = random_valid_rule(&mut rng, config.random_max_p, config.random_max_len);
            let seed = random_seed(&mut rng, rule.alphabet_size(), config.max_seed_len.max(1));
            (rule, seed)
        })
        .collect();
    summary.random_rules = random_cases.len();
    summary.random_cases = random_cases.len();
    let results: Vec<CaseResult> = pool.install(|| {
        random_cases
            .par_iter()
            .map(|(rule, seed)| check_case(stepper, rule, seed, config.random_max_steps))
            .collect()
    });
    fold_cases(&mut summary, results);

    let (codec_cases, codec_failure) = codec_round_trips(config.codec_samples, &mut rng);
    summary.codec_cases = codec_cases;
    if let Some(detail) = codec_failure {
        summary.mismatches += 1;
        summary.first_failure.get_or_insert(Counterexample {
            rule: crate::rulespec::named::identity(2),
            seed: String::new(),
            step: 0,
            detail,
        });
    }
    summary
}

/// Exhaustive `(N, p) = (2, 2), (3, 2)` plus `samples` random `(3, 7)` codes:
/// decoding then encoding must give the code back.
pub fn codec_round_trips<R: Rng>(samples: usize, rng: &mut R) -> (usize, Option<String>) {
    let mut cases = 0;
    let mut check = |code: Natural, n: usize, p: u32| -> Option<String> {
        cases += 1;
        let wc = match WolframCode::new(code.clone(), n, p) {
            Ok(wc) => wc,
            Err(e) => return Some(format!("code {code} ({n};{p}) rejected: {e}")),
        };
        match wc.decode().wolfram_code() {
            Ok(back) if back == wc => None,
            Ok(back) => Some(format!("code {wc} re-encoded as {back}")),
            Err(e) => Some(format!("code {wc} could not be re-encoded: {e}")),
        }
    };
    for (n, p) in [(2usize, 2u32), (3, 2)] {
        for code in 0u32..(1 << (n as u32 * p)) {
            if let Some(f) = check(Natural::from(code), n, p) {
                return (cases, Some(f));
            }
        }
    }
    let radix = Radix::new(7).expect("literal radix");
    for _ in 0..samples {
        let digits: Vec<u32> = (0..21).map(|_| rng.gen_range(0..7)).collect();
        let code = numtheory::from_digits(radix, &digits).expect("digits below 7");
        if let Some(f) = check(code, 3, 7) {
            return (cases, Some(f));
        }
    }
    (cases, None)
}
