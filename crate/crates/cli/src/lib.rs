//! Command-line front end: construct single codewords, enumerate families,
//! tabulate PMEPR CCDFs and run the verification suites.

pub mod file;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nearcomp::analysis::{
    ccdf, default_thresholds, family_metrics, random_baseline, EnvelopeEvaluator,
};
use nearcomp::constructions::FamilyParams;
use nearcomp::verification::lemma_sweep;
use nearcomp::{
    build, example_regression, family_size, theorem_bound_audit, BoundClass, EnvelopeConfig,
    Modulation, OffsetKind,
};
use rayon::prelude::*;
use serde_json::json;

use file::{check_file, params_from, CodewordFile};

/// Largest order enumerated without `--stream`.
pub const ENUMERATE_CAP_16QAM: usize = 4;
pub const ENUMERATE_CAP_64QAM: usize = 3;

#[derive(Debug, Parser)]
#[command(
    name = "nearcomp",
    version,
    about = "QAM near-complementary sequences: construction, enumeration and PMEPR checks"
)]
pub struct Cli {
    /// Worker threads for family-wide work (0 = all cores).
    #[arg(long, global = true, env = "NEARCOMP_THREADS", default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build one codeword from explicit parameters.
    Construct(ConstructArgs),
    /// Stream every codeword of a family as JSON lines.
    Enumerate(EnumerateArgs),
    /// Tabulate the PMEPR CCDF of a family against a random baseline.
    Ccdf(CcdfArgs),
    /// Run verification suites or re-check a codeword file.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModulationArg {
    #[value(name = "16qam")]
    Qam16,
    #[value(name = "64qam")]
    Qam64,
}

impl From<ModulationArg> for Modulation {
    fn from(m: ModulationArg) -> Modulation {
        match m {
            ModulationArg::Qam16 => Modulation::Qam16,
            ModulationArg::Qam64 => Modulation::Qam64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Type1,
    Type2,
}

impl From<KindArg> for OffsetKind {
    fn from(k: KindArg) -> OffsetKind {
        match k {
            KindArg::Type1 => OffsetKind::Type1,
            KindArg::Type2 => OffsetKind::Type2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Lemmas,
    Bounds,
    Examples,
    All,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_enum)]
    pub modulation: ModulationArg,
    /// Path permutation π(0),…,π(m−1); identity if omitted.
    #[arg(long, value_delimiter = ',')]
    pub pi: Option<Vec<usize>>,
    /// Linear coefficients c_0,…,c_{m−1} followed by the constant.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub c: Vec<i64>,
    /// d1,d2,d3 for 16-QAM; d1,d2,d3,h1,h3 for 64-QAM.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub offset: Vec<i64>,
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long, default_value_t = 16)]
    pub oversample: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_enum)]
    pub modulation: ModulationArg,
    /// Print the closed-form and enumerated family sizes only.
    #[arg(long)]
    pub count_only: bool,
    /// Allow orders above the default cap (output grows as 4^(m+1)·m!).
    #[arg(long)]
    pub stream: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CcdfArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_enum)]
    pub modulation: ModulationArg,
    #[arg(long, default_value_t = 10_000)]
    pub baseline_count: usize,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    #[arg(long, default_value_t = 16)]
    pub oversample: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Re-derive a codeword file written by `construct` and check it.
    #[arg(long, conflicts_with = "suite")]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 16)]
    pub oversample: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    VerificationFailed,
}

fn writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn envelope(oversample: usize) -> Result<EnvelopeConfig> {
    Ok(EnvelopeConfig::new(oversample)?)
}

pub fn run(cli: Cli) -> Result<Outcome> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .context("configuring worker threads")?;
    }
    match cli.command {
        Command::Construct(a) => construct(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Ccdf(a) => ccdf_table(a),
        Command::Verify(a) => verify(a),
    }
}

fn construct(a: ConstructArgs) -> Result<Outcome> {
    let cfg = envelope(a.oversample)?;
    let params = params_from(
        a.m,
        a.modulation.into(),
        a.kind.map(Into::into),
        a.pi,
        &a.c,
        &a.offset,
    )?;
    let rec = build(&params)?;
    let mut env = EnvelopeEvaluator::new(rec.n(), cfg)?;
    let file = CodewordFile::from_record(&rec).with_metrics(&rec, &mut env)?;
    let mut w = writer(&a.out)?;
    match a.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &file)?;
            writeln!(w)?;
        }
        Format::Csv => w.write_all(file.to_csv().as_bytes())?,
    }
    w.flush()?;
    Ok(Outcome::Ok)
}

fn check_cap(m: usize, modulation: Modulation, stream: bool) -> Result<()> {
    let cap = match modulation {
        Modulation::Qam16 => ENUMERATE_CAP_16QAM,
        Modulation::Qam64 => ENUMERATE_CAP_64QAM,
    };
    if m > cap && !stream {
        bail!("m = {m} exceeds the {modulation} enumeration cap m <= {cap}; pass --stream to enumerate anyway");
    }
    Ok(())
}

fn enumerate(a: EnumerateArgs) -> Result<Outcome> {
    let modulation: Modulation = a.modulation.into();
    let params = FamilyParams::new(a.m, modulation)?;
    let mut w = writer(&a.out)?;
    if a.count_only {
        let closed = family_size(a.m, modulation)?;
        let enumerated = params.total();
        serde_json::to_writer(
            &mut w,
            &json!({ "m": a.m, "modulation": modulation, "closed_form": closed.to_string(), "enumerated": enumerated }),
        )?;
        writeln!(w)?;
        w.flush()?;
        return Ok(if closed == enumerated.into() {
            Outcome::Ok
        } else {
            Outcome::VerificationFailed
        });
    }
    check_cap(a.m, modulation, a.stream)?;
    for p in params {
        let rec = build(&p)?;
        serde_json::to_writer(&mut w, &CodewordFile::from_record(&rec))?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(Outcome::Ok)
}

/// Rounds to 12 significant digits and prints the shortest exact form.
pub fn sig12(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

fn ccdf_table(a: CcdfArgs) -> Result<Outcome> {
    let cfg = envelope(a.oversample)?;
    let modulation: Modulation = a.modulation.into();
    if !(3..=4).contains(&a.m) {
        bail!(
            "constraint violated: ccdf needs 3 <= m <= 4 (got m = {})",
            a.m
        );
    }
    if a.baseline_count == 0 {
        bail!("constraint violated: --baseline-count must be at least 1");
    }
    let n = 1usize << a.m;
    let thresholds = default_thresholds();
    let metrics = family_metrics(a.m, modulation, cfg)?;

    let mut columns = vec![(
        "ccdf_constructed",
        metrics.iter().map(|r| r.pmepr).collect::<Vec<_>>(),
    )];
    if modulation == Modulation::Qam64 {
        for (name, class) in [
            ("ccdf_type1", BoundClass::Type1),
            ("ccdf_type2", BoundClass::Type2),
        ] {
            columns.push((
                name,
                metrics
                    .iter()
                    .filter(|r| r.class == class)
                    .map(|r| r.pmepr)
                    .collect(),
            ));
        }
    }
    let baseline = random_baseline(n, modulation, a.baseline_count, a.seed)?;
    let base_values: Vec<f64> = baseline
        .par_chunks(256)
        .flat_map_iter(|chunk| {
            let mut env = EnvelopeEvaluator::new(n, cfg).expect("validated config");
            chunk
                .iter()
                .map(|s| env.pmepr(s).expect("length n"))
                .collect::<Vec<_>>()
        })
        .collect();
    columns.push(("ccdf_baseline", base_values));

    let curves = columns
        .iter()
        .map(|(_, v)| ccdf(v, &thresholds))
        .collect::<nearcomp::Result<Vec<_>>>()?;
    let mut w = writer(&a.out)?;
    write!(w, "threshold_linear,threshold_db")?;
    for (name, _) in &columns {
        write!(w, ",{name}")?;
    }
    writeln!(w)?;
    for (k, &t) in thresholds.iter().enumerate() {
        write!(w, "{},{}", sig12(t), sig12(10.0 * t.log10()))?;
        for c in &curves {
            write!(w, ",{}", sig12(c.points[k].1))?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(Outcome::Ok)
}

fn verify(a: VerifyArgs) -> Result<Outcome> {
    let cfg = envelope(a.oversample)?;
    if let Some(path) = &a.input {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: CodewordFile = serde_json::from_str(&text)
            .with_context(|| format!("parsing codeword file {}", path.display()))?;
        let check = check_file(&file, cfg)?;
        let pass = check.consistent && check.within_bound;
        let mut w = writer(&a.out)?;
        serde_json::to_writer_pretty(
            &mut w,
            &json!({ "input": path, "passed": pass, "check": check }),
        )?;
        writeln!(w)?;
        w.flush()?;
        return Ok(if pass {
            Outcome::Ok
        } else {
            Outcome::VerificationFailed
        });
    }
    if !(3..=4).contains(&a.m) {
        bail!(
            "constraint violated: verify needs 3 <= m <= 4 (got m = {})",
            a.m
        );
    }

    let mut report = serde_json::Map::new();
    let mut pass = true;
    if matches!(a.suite, Suite::Lemmas | Suite::All) {
        let r = lemma_sweep(a.m)?;
        pass &= r.all_passed();
        report.insert(
            "lemmas".into(),
            json!({ "passed": r.all_passed(), "report": r }),
        );
    }
    if matches!(a.suite, Suite::Bounds | Suite::All) {
        let mut audits = Vec::new();
        for modulation in [Modulation::Qam16, Modulation::Qam64] {
            let r = theorem_bound_audit(a.m, modulation, cfg)?;
            pass &= r.all_passed();
            audits.push(json!({ "passed": r.all_passed(), "report": r }));
        }
        report.insert("bounds".into(), json!(audits));
    }
    if matches!(a.suite, Suite::Examples | Suite::All) {
        let r = example_regression(cfg)?;
        pass &= r.all_passed();
        report.insert(
            "examples".into(),
            json!({ "passed": r.all_passed(), "report": r }),
        );
    }
    report.insert("passed".into(), json!(pass));
    let mut w = writer(&a.out)?;
    serde_json::to_writer_pretty(&mut w, &report)?;
    writeln!(w)?;
    w.flush()?;
    Ok(if pass {
        Outcome::Ok
    } else {
        Outcome::VerificationFailed
    })
}
