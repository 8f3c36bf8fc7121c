//! `subst`: decode, run, analyze, render and cross-check substitution systems.

mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use subst_core::analysis::{self, format_real};
use subst_core::check::{self, CheckConfig, NumeralStepper, ReversedBlocks, WordMap};
use subst_core::engine::{self, format_symbols};
use subst_core::render::{self, Palette};
use subst_core::{
    named, parse_rule_file, run, AnalysisOptions, Mode, RuleTable, RunOptions, Trajectory,
    WolframCode, Word, DEFAULT_MAX_WORD_LEN,
};

use report::Report;

#[derive(Debug, Parser)]
#[command(
    name = "subst",
    version,
    about = "Substitution systems as symbol arrays and as numerals"
)]
struct Cli {
    /// Emit `key<TAB>value` lines only.
    #[arg(long, global = true)]
    porcelain: bool,

    /// Longest word, in symbols, a run may produce.
    #[arg(long, global = true, env = "SUBST_MAX_WORD_LEN", default_value_t = DEFAULT_MAX_WORD_LEN)]
    max_word_len: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the rule table of a code in rule-file format.
    Decode {
        #[arg(long)]
        code: BigUint,
        #[arg(long)]
        blocklen: usize,
        #[arg(long)]
        alphabet: u32,
    },
    /// Print the `code N p` triple of a constant-length rule file.
    Encode { rulefile: PathBuf },
    /// Iterate a rule and print the trajectory.
    Run {
        #[command(flatten)]
        traj: TrajectoryArgs,
        #[arg(long, value_enum, default_value_t = Format::Words)]
        format: Format,
        #[arg(long, value_enum, default_value_t = ModeArg::String)]
        mode: ModeArg,
    },
    /// Dimension, entropy, Second-Law and radix-economy report.
    Analyze {
        #[command(flatten)]
        traj: TrajectoryArgs,
        /// Entropic parameter; defaults to the dimension when defined.
        #[arg(long)]
        q: Option<f64>,
        /// Tabulate the radix economy of the last numeral for radices 2..=N.
        #[arg(long, value_name = "N")]
        radix_table: Option<u32>,
    },
    /// Draw the space-time diagram.
    Render {
        #[command(flatten)]
        traj: TrajectoryArgs,
        /// Image width in pixels (PPM); defaults to the last word's length.
        #[arg(long)]
        width: Option<usize>,
        #[arg(long, default_value_t = 4)]
        row_height: usize,
        /// `default` or `warm`.
        #[arg(long, default_value = "default")]
        palette: String,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = ImageFormat::Ppm)]
        format: ImageFormat,
    },
    /// Check the numeral map against the array map on a family of rules.
    Check {
        /// Largest alphabet of the random family.
        #[arg(long, default_value_t = 5)]
        max_p: u32,
        /// Largest alphabet of the exhaustive family.
        #[arg(long, default_value_t = 3)]
        exhaustive_max_p: u32,
        /// Longest block of the exhaustive family.
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// Steps per exhaustive case.
        #[arg(long, default_value_t = 4)]
        max_steps: usize,
        /// Random valid rules on top of the exhaustive family.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Worker threads; 0 uses every available core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, hide = true)]
        inject_orientation_bug: bool,
    },
    /// Time the array and numeral paths step by step.
    Bench {
        #[command(flatten)]
        traj: TrajectoryArgs,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
    },
}

#[derive(Debug, Args)]
struct TrajectoryArgs {
    /// Rule file (`p <n>` header, then `k -> s0 s1 ...` lines).
    #[arg(long, conflicts_with_all = ["code", "named"])]
    rule: Option<PathBuf>,
    /// Built-in rule: thue-morse, cantor or fibonacci.
    #[arg(long, conflicts_with = "code")]
    named: Option<String>,
    #[arg(long, requires_all = ["blocklen", "alphabet"])]
    code: Option<BigUint>,
    #[arg(long, requires = "code")]
    blocklen: Option<usize>,
    #[arg(long, requires = "code")]
    alphabet: Option<u32>,
    /// Seed word: digits/letters for p <= 36, else space-separated decimals.
    #[arg(long, default_value = "1")]
    seed: String,
    #[arg(long, default_value_t = 4)]
    steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Words,
    Numbers,
    Lengths,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    String,
    Number,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ImageFormat {
    Ppm,
    Svg,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Invalid(String),
    Cap(String),
    Check(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Cap(_) => 3,
            Failure::Check(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Invalid(m) | Failure::Cap(m) | Failure::Check(m) => m,
        }
    }
}

fn invalid(e: impl ToString) -> Failure {
    Failure::Invalid(e.to_string())
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("subst: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    let porcelain = cli.porcelain;
    let options = RunOptions {
        mode: Mode::Strings,
        max_word_len: cli.max_word_len,
    };
    match &cli.command {
        Command::Decode {
            code,
            blocklen,
            alphabet,
        } => cmd_decode(code, *blocklen, *alphabet, porcelain),
        Command::Encode { rulefile } => cmd_encode(rulefile, porcelain),
        Command::Run { traj, format, mode } => cmd_run(traj, *format, *mode, options, porcelain),
        Command::Analyze {
            traj,
            q,
            radix_table,
        } => {
            let opts = AnalysisOptions {
                q: *q,
                radix_table_max: *radix_table,
            };
            cmd_analyze(traj, &opts, options, porcelain)
        }
        Command::Render {
            traj,
            width,
            row_height,
            palette,
            out,
            format,
        } => cmd_render(
            traj,
            *width,
            *row_height,
            palette,
            out,
            *format,
            options,
            porcelain,
        ),
        Command::Check {
            max_p,
            exhaustive_max_p,
            max_len,
            max_steps,
            samples,
            seed,
            workers,
            inject_orientation_bug,
        } => {
            if *max_p < 2 || *exhaustive_max_p < 2 || *max_len == 0 {
                return Err(Failure::Usage(
                    "alphabets need at least 2 symbols and blocks at least 1".into(),
                ));
            }
            let config = CheckConfig {
                max_p: *exhaustive_max_p,
                max_len: *max_len,
                max_steps: *max_steps,
                samples: *samples,
                random_max_p: *max_p,
                rng_seed: *seed,
                workers: *workers,
                ..CheckConfig::default()
            };
            let stepper: &dyn NumeralStepper = if *inject_orientation_bug {
                &ReversedBlocks
            } else {
                &WordMap
            };
            cmd_check(&config, stepper, porcelain)
        }
        Command::Bench { traj, repetitions } => cmd_bench(traj, *repetitions, options, porcelain),
    }
}

fn output_error(e: io::Error) -> Result<(), Failure> {
    if e.kind() == io::ErrorKind::BrokenPipe {
        Ok(())
    } else {
        Err(Failure::Invalid(format!("writing output: {e}")))
    }
}

fn emit(report: &Report, porcelain: bool) -> CmdResult {
    report
        .write(porcelain, io::stdout().lock())
        .or_else(output_error)
}

fn load_rule(args: &TrajectoryArgs) -> Result<RuleTable, Failure> {
    if let Some(path) = &args.rule {
        let text =
            fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        return parse_rule_file(&text).map_err(|e| invalid(format!("{}: {e}", path.display())));
    }
    if let Some(name) = &args.named {
        return match name.as_str() {
            "thue-morse" => Ok(named::thue_morse()),
            "cantor" => Ok(named::cantor()),
            "fibonacci" => Ok(named::fibonacci()),
            other => Err(Failure::Usage(format!("unknown rule name `{other}`"))),
        };
    }
    match (&args.code, args.blocklen, args.alphabet) {
        (Some(code), Some(n), Some(p)) => Ok(WolframCode::new(code.clone(), n, p)
            .map_err(invalid)?
            .decode()),
        _ => Err(Failure::Usage(
            "give a rule with --rule FILE, --named NAME or --code/--blocklen/--alphabet".into(),
        )),
    }
}

fn trajectory(args: &TrajectoryArgs, options: RunOptions) -> Result<Trajectory, Failure> {
    let rule = load_rule(args)?;
    let seed = Word::parse(rule.alphabet_size(), &args.seed).map_err(invalid)?;
    run(&rule, &seed, args.steps, options).map_err(invalid)
}

fn truncation_failure(traj: &Trajectory) -> CmdResult {
    match traj.truncation() {
        Some(t) => Err(Failure::Cap(format!(
            "stopped after step {}: step {} needs {} symbols, cap is {} (SUBST_MAX_WORD_LEN)",
            t.step - 1,
            t.step,
            t.required_len,
            t.max_word_len
        ))),
        None => Ok(()),
    }
}

fn cmd_decode(code: &BigUint, n: usize, p: u32, porcelain: bool) -> CmdResult {
    let rule = WolframCode::new(code.clone(), n, p)
        .map_err(invalid)?
        .decode();
    if porcelain {
        let mut r = Report::new();
        r.push("alphabet", p);
        for (k, block) in rule.blocks().iter().enumerate() {
            r.push(format!("block.{k}"), format_symbols(p, block));
        }
        return emit(&r, true);
    }
    print!("{}", rule.to_rule_file());
    Ok(())
}

fn cmd_encode(path: &Path, porcelain: bool) -> CmdResult {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let rule = parse_rule_file(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let code = rule.wolfram_code().map_err(invalid)?;
    if porcelain {
        let mut r = Report::new();
        r.push("code", code.code());
        r.push("block_len", code.block_len());
        r.push("alphabet", code.radix());
        return emit(&r, true);
    }
    println!("{code}");
    Ok(())
}

fn cmd_run(
    args: &TrajectoryArgs,
    format: Format,
    mode: ModeArg,
    options: RunOptions,
    porcelain: bool,
) -> CmdResult {
    let mode = match mode {
        ModeArg::String => Mode::Strings,
        ModeArg::Number => Mode::Numbers,
        ModeArg::Both => Mode::Both,
    };
    let traj = trajectory(args, RunOptions { mode, ..options })?;
    let mut out = io::stdout().lock();
    let write =
        |out: &mut io::StdoutLock, line: String| writeln!(out, "{line}").or_else(output_error);
    match (format, porcelain) {
        (Format::Lengths, false) => {
            let lengths: Vec<String> = traj.lengths().iter().map(ToString::to_string).collect();
            write(&mut out, lengths.join(" "))?;
        }
        _ => {
            for (t, w) in traj.words().iter().enumerate() {
                let line = match (format, porcelain) {
                    (Format::Words, false) => w.to_string(),
                    (Format::Numbers, false) => format!("{} {}", w.numeral(), w.len()),
                    (Format::Words, true) => format!("step.{t}.word\t{w}"),
                    (Format::Numbers, true) => {
                        format!(
                            "step.{t}.numeral\t{}\nstep.{t}.length\t{}",
                            w.numeral(),
                            w.len()
                        )
                    }
                    (Format::Lengths, _) => format!("step.{t}.length\t{}", w.len()),
                };
                write(&mut out, line)?;
            }
        }
    }
    if porcelain {
        write(&mut out, format!("truncated\t{}", traj.is_truncated()))?;
    }
    drop(out);
    truncation_failure(&traj)
}

const NOT_APPLICABLE: &str = "not applicable (preconditions)";

fn cmd_analyze(
    args: &TrajectoryArgs,
    opts: &AnalysisOptions,
    options: RunOptions,
    porcelain: bool,
) -> CmdResult {
    let traj = trajectory(args, options)?;
    let report = analysis::analyze(&traj, opts);
    let mut r = Report::new();
    r.push("alphabet", traj.rule().alphabet_size());
    r.push("steps", traj.steps());
    match &report.closed_dimension {
        Ok(d) => r.push("d_closed", format_real(*d)),
        Err(e) => {
            r.push("d_closed", NOT_APPLICABLE);
            r.push("d_closed.reason", e);
        }
    }
    if let Err(e) = &report.empirical_dimension {
        r.push("d_empirical", NOT_APPLICABLE);
        r.push("d_empirical.reason", e);
    }
    r.push("q", format_real(report.q));
    r.push("q.source", report.q_source);
    r.push("verdict", report.second_law.verdict);
    r.push("lengths.non_decreasing", report.second_law.non_decreasing);
    r.push("lengths.constant", report.second_law.constant);
    for s in &report.steps {
        let t = s.step;
        r.push(format!("step.{t}.W"), s.total);
        r.push(format!("step.{t}.N1"), s.ones);
        let counts: Vec<String> = s.counts.iter().map(ToString::to_string).collect();
        r.push(format!("step.{t}.counts"), counts.join(" "));
        if let Some(d) = s.dimension {
            r.push(format!("step.{t}.d_empirical"), format_real(d));
        }
        r.push(format!("step.{t}.S_q"), format_real(s.tsallis));
        r.push(format!("step.{t}.lnW"), format_real(s.boltzmann));
    }
    match &report.radix_economy {
        Some(Ok(econ)) => {
            for (eta, cost) in &econ.table {
                r.push(format!("radix_economy.{eta}"), cost);
            }
            r.push("radix_economy.optimal", econ.optimal);
        }
        Some(Err(e)) => r.push("radix_economy", format!("{NOT_APPLICABLE}: {e}")),
        None => {}
    }
    r.push("truncated", report.truncated);
    emit(&r, porcelain)?;
    truncation_failure(&traj)
}

#[allow(clippy::too_many_arguments)]
fn cmd_render(
    args: &TrajectoryArgs,
    width: Option<usize>,
    row_height: usize,
    palette: &str,
    out: &Path,
    format: ImageFormat,
    options: RunOptions,
    porcelain: bool,
) -> CmdResult {
    let traj = trajectory(args, options)?;
    let palette = Palette::named(palette, traj.rule().alphabet_size()).map_err(invalid)?;
    let mut r = Report::new();
    let bytes = match format {
        ImageFormat::Ppm => {
            let width = width.unwrap_or_else(|| traj.last().len());
            let img =
                render::render_spacetime(&traj, &palette, width, row_height).map_err(invalid)?;
            r.push("width", img.width());
            r.push("height", img.height());
            img.to_ppm()
        }
        ImageFormat::Svg => {
            r.push("rows", traj.words().len());
            render::write_svg(&traj, &palette)
                .map_err(invalid)?
                .into_bytes()
        }
    };
    fs::write(out, &bytes).map_err(|e| invalid(format!("{}: {e}", out.display())))?;
    r.push("path", out.display());
    r.push("sha256", render::digest(&bytes));
    r.push("truncated", traj.is_truncated());
    emit(&r, porcelain)?;
    truncation_failure(&traj)
}

fn cmd_check(config: &CheckConfig, stepper: &dyn NumeralStepper, porcelain: bool) -> CmdResult {
    let summary = check::run_check(config, stepper);
    let mut r = Report::new();
    r.push("result", if summary.passed() { "PASS" } else { "FAIL" });
    r.push("exhaustive.rules", summary.exhaustive_rules);
    r.push("exhaustive.cases", summary.exhaustive_cases);
    r.push("random.cases", summary.random_cases);
    r.push("steps_compared", summary.steps_compared);
    r.push("codec.cases", summary.codec_cases);
    r.push("constant_length.cases", summary.constant_cases);
    r.push("mismatches", summary.mismatches);
    if let Some(f) = &summary.first_failure {
        r.push("counterexample", f);
    }
    emit(&r, porcelain)?;
    if summary.passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "{} mismatching cases",
            summary.mismatches
        )))
    }
}

fn median(samples: &mut [Duration]) -> Duration {
    samples.sort();
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2
    }
}

fn cmd_bench(
    args: &TrajectoryArgs,
    repetitions: usize,
    options: RunOptions,
    porcelain: bool,
) -> CmdResult {
    if repetitions == 0 {
        return Err(Failure::Usage("--repetitions must be at least 1".into()));
    }
    let rule = load_rule(args)?;
    let seed = Word::parse(rule.alphabet_size(), &args.seed).map_err(invalid)?;
    let reference = run(&rule, &seed, args.steps, options).map_err(invalid)?;
    let steps = reference.steps();
    let numeral_skip = if seed.leading_symbol() == 0 {
        Some("no (seed starts with 0)")
    } else if !rule.is_valid() {
        Some("no (rule violates the numeral conditions)")
    } else {
        None
    };
    let numeral_path = numeral_skip.is_none();

    let mut array = vec![Vec::with_capacity(repetitions); steps];
    let mut numeral = vec![Vec::with_capacity(repetitions); steps];
    for _ in 0..repetitions {
        let mut w = seed.clone();
        for per_step in array.iter_mut() {
            let t0 = Instant::now();
            w = engine::step_string(&rule, &w).map_err(invalid)?;
            per_step.push(t0.elapsed());
        }
        if numeral_path {
            let mut a = (seed.numeral().clone(), seed.len());
            for per_step in numeral.iter_mut() {
                let t0 = Instant::now();
                a = engine::step_number(&rule, &a.0, a.1).map_err(invalid)?;
                per_step.push(t0.elapsed());
            }
        }
    }

    let mut r = Report::new();
    r.push("steps", steps);
    r.push("repetitions", repetitions);
    r.push(
        "peak_length",
        reference.lengths().iter().max().copied().unwrap_or(0),
    );
    r.push("numeral_path", numeral_skip.unwrap_or("yes"));
    for (i, len) in reference.lengths().iter().enumerate().skip(1) {
        r.push(format!("step.{i}.length"), len);
        r.push(
            format!("step.{i}.array_ns"),
            median(&mut array[i - 1]).as_nanos(),
        );
        if numeral_path {
            r.push(
                format!("step.{i}.numeral_ns"),
                median(&mut numeral[i - 1]).as_nanos(),
            );
        }
    }
    let totals = |per_step: &[Vec<Duration>]| -> Vec<Duration> {
        (0..repetitions)
            .map(|k| per_step.iter().map(|s| s[k]).sum())
            .collect()
    };
    let mut paths = vec![("array", totals(&array))];
    if numeral_path {
        paths.push(("numeral", totals(&numeral)));
    }
    for (name, mut samples) in paths {
        for (k, s) in samples.iter().enumerate() {
            r.push(format!("{name}.sample.{}", k + 1), s.as_nanos());
        }
        r.push(format!("{name}.median_ns"), median(&mut samples).as_nanos());
    }
    r.push("truncated", reference.is_truncated());
    emit(&r, porcelain)?;
    truncation_failure(&reference)
}
