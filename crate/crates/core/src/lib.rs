//! One-dimensional deterministic substitution systems.
//!
//! Words are iterated two ways: as symbol arrays, where every symbol is
//! replaced by its block, and as radix-`p` naturals, where the word map
//! places each block's numeral at an offset fixed by the blocks below it.
//! Both must agree, and [`check`] sweeps whole rule families to confirm it.
//!
//! ```
//! use subst_core::{run, named, RunOptions, Mode, Word};
//!
//! let seed = Word::parse(3, "1").unwrap();
//! let traj = run(&named::fibonacci(), &seed, 5, RunOptions::mode(Mode::Both)).unwrap();
//! assert_eq!(traj.lengths(), vec![1, 2, 3, 5, 8, 13]);
//! assert_eq!(traj.last().to_string(), "1211212112112");
//! ```

pub mod analysis;
pub mod check;
pub mod engine;
pub mod numtheory;
pub mod render;
pub mod rulespec;

pub use analysis::{AnalysisError, AnalysisOptions, AnalysisReport, SecondLawReport, Verdict};
pub use engine::{
    growth_ratios, run, step_constant_number, step_number, step_string, EngineError, GrowthStep,
    Mode, RunOptions, Trajectory, Truncation, Word, DEFAULT_MAX_WORD_LEN,
};
pub use numtheory::{Natural, NumError, Radix};
pub use render::{Palette, RasterImage, RenderError};
pub use rulespec::{named, parse_rule_file, RuleError, RuleTable, Symbol, Violation, WolframCode};
