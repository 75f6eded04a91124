mod output;
mod svg;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use circlerig::deform::{handle_partner, monitor_path, uniform_grid, DeformationPath, DEFAULT_SAMPLES};
use circlerig::homeo::classify;
use circlerig::representation::{fuchsian_closed, fuchsian_once_punctured_torus, Representation, DEFAULT_TOL};
use circlerig::rotnum::{translation_number, DEFAULT_MAX_ITER};
use circlerig::suite::{run_suite, DEFAULT_SEED};
use circlerig::surface::{Generator, Word};
use clap::{Parser, Subcommand, ValueEnum};

use verify::Check;

#[derive(Parser, Debug)]
#[command(name = "circlerig", version, about = "Invariants of surface-group actions on the circle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Fuchsian,
    Trivial,
    /// Once-punctured torus; a free representation on a1, b1.
    Torus,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a representation file.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 2)]
        genus: usize,
        /// Eigenvalue of a1 for the torus kind.
        #[arg(long, default_value_t = 3.0)]
        lambda: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Euler number, per-generator dynamics and rotation enclosures.
    Invariants {
        #[arg(short, long)]
        input: PathBuf,
        /// One word per line; `#` starts a comment.
        #[arg(long)]
        probes: Option<PathBuf>,
        /// Print a JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Sample a bending path and monitor eu and probe invariants.
    Bend {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        curve: Word,
        /// Generator moved by a nonseparating bend; defaults to the handle partner of the curve.
        #[arg(long)]
        partner: Option<String>,
        /// Generators conjugated by a separating bend; defaults to the handles the curve misses.
        #[arg(long, value_delimiter = ',')]
        side: Option<Vec<String>>,
        /// Flow time at the end of the path.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        scale: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Probe words, comma separated; defaults to the generators and the curve.
        #[arg(long, value_delimiter = ',')]
        probes: Option<Vec<Word>>,
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run one verifier and print its report; exit 2 when it fails.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        check: Check,
        /// Chain words, comma separated, for chain-order and separation.
        #[arg(long, value_delimiter = ',')]
        chain: Option<Vec<Word>>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the acceptance battery; exit 0 iff every criterion passes.
    Suite {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Run criteria in parallel; runtimes then compete for cores.
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Draw the circle with the labeled fixed points of some words.
    Svg {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        words: Vec<Word>,
        #[arg(short, long)]
        output: PathBuf,
    },
}

/// Failure classes with their exit codes.
enum Failure {
    Usage(anyhow::Error),
    Verification(String),
    Tolerance(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let tolerance = e.chain().any(|c| {
            matches!(
                c.downcast_ref::<circlerig::Error>(),
                Some(circlerig::Error::ToleranceNotReached { .. } | circlerig::Error::AmbiguousAtTolerance { .. })
            )
        });
        if tolerance {
            Failure::Tolerance(e)
        } else {
            Failure::Usage(e)
        }
    }
}

impl From<circlerig::Error> for Failure {
    fn from(e: circlerig::Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

type Outcome = std::result::Result<(), Failure>;

fn tolerance() -> anyhow::Result<f64> {
    match std::env::var("CIRCLERIG_TOL") {
        Ok(s) => {
            let t: f64 = s.trim().parse().with_context(|| format!("CIRCLERIG_TOL={s:?} is not a number"))?;
            anyhow::ensure!(t > 0.0 && t.is_finite(), "CIRCLERIG_TOL must be positive, got {t}");
            Ok(t)
        }
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn load(path: &Path) -> anyhow::Result<Representation> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let rep: Representation = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let tol = tolerance()?;
    if tol == rep.tol() {
        Ok(rep)
    } else {
        Ok(rep.with_tol(tol)?)
    }
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_probes(path: &Path) -> anyhow::Result<Vec<Word>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| Word::parse(l).with_context(|| format!("probe {l:?}")))
        .collect()
}

fn construct(kind: Kind, genus: usize, lambda: f64, output: Option<PathBuf>) -> Outcome {
    let rep = match kind {
        Kind::Fuchsian => fuchsian_closed(genus)?,
        Kind::Trivial => Representation::trivial(genus)?,
        Kind::Torus => fuchsian_once_punctured_torus(lambda)?,
    };
    let tol = tolerance()?;
    let rep = if tol == rep.tol() { rep } else { rep.with_tol(tol)? };
    // representation files keep full precision so the relator still verifies on reload
    let text = serde_json::to_string_pretty(&rep).map_err(anyhow::Error::from)? + "\n";
    match output {
        Some(p) => write(&p, &text)?,
        None => output::emit(&text)?,
    }
    Ok(())
}

fn invariants(input: &Path, probes: Option<PathBuf>, as_json: bool) -> Outcome {
    let rep = load(input)?;
    let mut words: Vec<Word> = rep.generators().into_iter().map(Word::gen).collect();
    if let Some(p) = probes {
        words.extend(read_probes(&p)?);
    }
    let eu = if rep.is_free() { None } else { Some(rep.euler_number()?) };
    let mut rows = Vec::new();
    for w in &words {
        let c = classify(&rep.evaluate_word(w)?, rep.tol())?;
        let lift = rep.evaluate_word_lift(w, &Default::default())?;
        let rot = translation_number(&lift, rep.tol(), DEFAULT_MAX_ITER)?;
        rows.push((w.clone(), c, rot));
    }
    if as_json {
        let v = serde_json::json!({
            "eu": eu,
            "relator": rep.status(),
            "tol": rep.tol(),
            "words": rows.iter().map(|(w, c, r)| serde_json::json!({"word": w, "class": c, "rot": r})).collect::<Vec<_>>(),
        });
        output::emit(&output::to_json(&v)?)?;
        return Ok(());
    }
    let mut text = match eu {
        Some(e) => format!("eu = {e}\n"),
        None => format!("eu undefined (free representation on {} handles)\n", rep.handles()),
    };
    for (w, c, r) in &rows {
        text += &format!("{}: {}; rot~ {}\n", w, output::class(c), output::enclosure(r));
    }
    output::emit(&text)?;
    Ok(())
}

fn bend_path(rep: Representation, curve: &Word, partner: Option<String>, side: Option<Vec<String>>, scale: f64) -> anyhow::Result<DeformationPath> {
    if curve.homology().is_zero() {
        let b_side = match side {
            Some(s) => s.iter().map(|g| Generator::parse(g)).collect::<Result<Vec<_>, _>>()?,
            None => {
                let used: Vec<u16> = curve.letters().iter().map(|(g, _)| g.handle()).collect();
                rep.generators().into_iter().filter(|g| !used.contains(&g.handle())).collect()
            }
        };
        Ok(DeformationPath::bend_separating(rep, curve.clone(), b_side, scale)?)
    } else {
        anyhow::ensure!(side.is_none(), "--side applies to separating curves only");
        let partner = match partner {
            Some(p) => Generator::parse(&p)?,
            None => handle_partner(curve).with_context(|| format!("no handle partner for {curve}; pass --partner"))?,
        };
        Ok(DeformationPath::bend_nonseparating(rep, curve.clone(), partner, scale)?)
    }
}

#[allow(clippy::too_many_arguments)]
fn bend(
    input: &Path,
    curve: Word,
    partner: Option<String>,
    side: Option<Vec<String>>,
    scale: f64,
    samples: usize,
    probes: Option<Vec<Word>>,
    report: Option<PathBuf>,
    json: Option<PathBuf>,
) -> Outcome {
    let rep = load(input)?;
    let probes = probes.unwrap_or_else(|| {
        let mut p: Vec<Word> = rep.generators().into_iter().map(Word::gen).collect();
        if !p.contains(&curve) {
            p.push(curve.clone());
        }
        p
    });
    let path = bend_path(rep, &curve, partner, side, scale)?;
    let out = match monitor_path(&path, &probes, &uniform_grid(samples)) {
        Ok(r) => r,
        Err(e @ circlerig::Error::DiscontinuityDetected { .. }) => return Err(Failure::Verification(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    if let Some(p) = report {
        write(&p, &out.to_csv())?;
    }
    if let Some(p) = json {
        write(&p, &output::to_json(&out)?)?;
    }
    let eu = out.records.first().map(|r| r.eu.to_string()).unwrap_or_else(|| "n/a".into());
    let mut text = format!("{}\neu = {eu} at all {} samples\n", out.kind, out.records.len());
    if let Some(s) = out.declared_sign {
        text += &format!("declared sign i(curve, partner) = {s}\n");
    }
    output::emit(&text)?;
    Ok(())
}

fn verify_cmd(input: &Path, check: Check, chain: Option<Vec<Word>>, out: Option<PathBuf>) -> Outcome {
    let rep = load(input)?;
    let report = verify::run(&rep, check, chain)?;
    let text = output::to_json(&report)?;
    match out {
        Some(p) => write(&p, &text)?,
        None => output::emit(&text)?,
    }
    if report.passed() {
        eprintln!("{}: pass", check.name());
        Ok(())
    } else {
        Err(Failure::Verification(format!("{}: fail", check.name())))
    }
}

fn suite(seed: u64, parallel: bool, json: Option<PathBuf>) -> Outcome {
    let reports = run_suite(seed, parallel);
    let lines: String = reports.iter().map(|r| r.line() + "\n").collect();
    output::emit(&lines)?;
    if let Some(p) = json {
        write(&p, &output::to_json(&reports)?)?;
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{failed} of {} criteria failed", reports.len())))
    }
}

fn svg_cmd(input: &Path, words: &[Word], output: &Path) -> Outcome {
    let rep = load(input)?;
    let pts = svg::labeled_points(&rep, words)?;
    write(output, &svg::render(&pts))?;
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Construct {
            kind,
            genus,
            lambda,
            output,
        } => construct(kind, genus, lambda, output),
        Command::Invariants { input, probes, json } => invariants(&input, probes, json),
        Command::Bend {
            input,
            curve,
            partner,
            side,
            scale,
            samples,
            probes,
            report,
            json,
        } => bend(&input, curve, partner, side, scale, samples, probes, report, json),
        Command::Verify {
            input,
            check,
            chain,
            output,
        } => verify_cmd(&input, check, chain, output),
        Command::Suite { seed, parallel, json } => suite(seed, parallel, json),
        Command::Svg { input, words, output } => svg_cmd(&input, &words, &output),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(Failure::Tolerance(e)) => {
            eprintln!("tolerance failure: {e:#}");
            ExitCode::from(3)
        }
    }
}
