use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use uniconv::bounds::{collective_convergence_profile, shifted_deviation_check};
use uniconv::checkers::run_property;
use uniconv::report::{self, Format};
use uniconv::space::sample_grid;
use uniconv::{ComparisonReport, Error, Mode, Property, ScenarioSpec, SystemView};

/// Compare a non-autonomous system with its autonomous limit.
#[derive(Parser)]
#[command(name = "uniconv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the scenario catalog.
    List,
    /// Run every requested checker on a scenario document.
    Run {
        spec: PathBuf,
        #[command(flatten)]
        opts: Overrides,
    },
    /// Run a catalog scenario with its pinned parameters and compare with the golden table.
    Reproduce {
        id: String,
        #[command(flatten)]
        opts: Overrides,
        /// Print the verdict table as JSON instead of the summary.
        #[arg(long)]
        table: bool,
    },
    /// Shifted deviation bound at (n, k) over the grid, plus the collective profile as CSV.
    Bound {
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[command(flatten)]
        opts: Overrides,
    },
    /// Run one property in both modes.
    Check {
        property: String,
        spec: PathBuf,
        #[command(flatten)]
        opts: Overrides,
    },
}

#[derive(Args, Default)]
struct Overrides {
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Directory for emitted files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; repeatable.
    #[arg(long, value_parser = parse_format)]
    format: Vec<Format>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Overrides {
    fn apply(&self, spec: &mut ScenarioSpec) {
        let c = &mut spec.check;
        if let Some(h) = self.horizon {
            c.horizon = h;
            c.tail_window = c.tail_window.min(h);
        }
        if let Some(g) = self.grid {
            c.grid = g;
        }
        if let Some(e) = self.eps {
            c.eps = e;
        }
        if let Some(d) = self.delta {
            c.delta = d;
        }
        if let Some(o) = &self.out {
            spec.output.dir = Some(o.clone());
        }
        if !self.format.is_empty() {
            spec.output.formats = self.format.clone();
        }
    }
}

/// Exit status: 0 completed, 1 failure, 2 inconsistency, 3 configuration error.
enum Status {
    Ok,
    Inconsistent,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Inconsistent) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            let config = e.chain().any(|c| {
                matches!(
                    c.downcast_ref::<Error>(),
                    Some(
                        Error::Config(_)
                            | Error::UnknownScenario(_)
                            | Error::SpaceMismatch { .. }
                            | Error::InvalidMap(_)
                            | Error::Domain(_)
                    )
                )
            });
            ExitCode::from(if config { 3 } else { 1 })
        }
    }
}

fn load(path: &Path, opts: &Overrides) -> anyhow::Result<ScenarioSpec> {
    let mut spec = ScenarioSpec::load(path)?;
    opts.apply(&mut spec);
    Ok(spec)
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    match cli.command {
        Command::List => {
            for e in report::catalog() {
                println!("{:<26} {}", e.id, e.summary);
            }
            Ok(Status::Ok)
        }
        Command::Run { spec, opts } => {
            let spec = load(&spec, &opts)?;
            let report = report::run_comparison(&spec)?;
            print_summary(&report);
            write_outputs(&report, &spec)?;
            Ok(status(&report))
        }
        Command::Reproduce { id, opts, table } => {
            let mut spec = report::scenario(&id)?;
            opts.apply(&mut spec);
            let report = report::run_comparison(&spec)?;
            let rendered = report.verdict_table().to_json();
            if table {
                print!("{rendered}");
            } else {
                print_summary(&report);
            }
            write_outputs(&report, &spec)?;
            let pinned = report::scenario(&id)?.config_hash() == spec.config_hash();
            if pinned {
                let golden = report::golden(&id)?;
                anyhow::ensure!(rendered == golden, "verdict table differs from the shipped golden for `{id}`");
                if !table {
                    println!("golden: match");
                }
            } else if !table {
                println!("golden: skipped (parameters differ from the pinned configuration)");
            }
            Ok(status(&report))
        }
        Command::Bound { spec, n, k, opts } => {
            let spec = load(&spec, &opts)?;
            let fam = spec.validate()?;
            anyhow::ensure!(k >= 1, Error::Config("--k must be ≥ 1".into()));
            let grid = sample_grid(&fam.space, spec.check.grid)?;
            let mut violations = 0;
            let mut worst = (0.0f64, 0.0f64);
            for x in grid.points() {
                let r = shifted_deviation_check(&fam, x, n, k, spec.check.tol)?;
                if !r.holds {
                    violations += 1;
                }
                if r.measured >= worst.0 {
                    worst = (r.measured, r.bound);
                }
            }
            println!(
                "n={n} k={k} points={} violations={violations} max-measured={:.6} bound={:.6}",
                grid.len(),
                worst.0,
                worst.1
            );
            let profile =
                collective_convergence_profile(&fam, n.max(1), k, spec.check.grid, spec.check.eps, spec.check.tol)?;
            let csv = profile.to_csv();
            match &spec.output.dir {
                Some(dir) => {
                    std::fs::create_dir_all(dir)?;
                    let path = dir.join("collective.csv");
                    std::fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?;
                    println!("wrote {}", path.display());
                }
                None => print!("{csv}"),
            }
            println!("collective-likely={}", profile.collective_likely);
            Ok(Status::Ok)
        }
        Command::Check { property, spec, opts } => {
            let property: Property = property.parse()?;
            let spec = load(&spec, &opts)?;
            let fam = spec.validate()?;
            for mode in Mode::BOTH {
                let sys = SystemView::new(fam.clone(), mode);
                let v = run_property(&sys, &spec.check, property)?;
                println!("{}", serde_json::to_string(&serde_json::json!({ "mode": mode, "verdict": v }))?);
            }
            Ok(Status::Ok)
        }
    }
}

fn status(report: &ComparisonReport) -> Status {
    if report.inconsistent() {
        Status::Inconsistent
    } else {
        Status::Ok
    }
}

fn outcome(v: &uniconv::Verdict) -> &'static str {
    match v.outcome {
        uniconv::Outcome::Holds => "holds",
        uniconv::Outcome::Refuted => "refuted",
        uniconv::Outcome::Inconclusive => "inconclusive",
    }
}

fn print_summary(r: &ComparisonReport) {
    println!("{} ({})", r.label, r.provenance.config_hash);
    for note in &r.notes {
        println!("  {note}");
    }
    println!(
        "{:<24} {:<13} {:<13} {:<10} {:<10} theorem",
        "property", "F", "f", "applies", "consistent"
    );
    for row in &r.rows {
        println!(
            "{:<24} {:<13} {:<13} {:<10} {:<10} {}",
            row.property.name(),
            outcome(&row.verdict_family),
            outcome(&row.verdict_limit),
            row.applicable,
            row.consistent,
            row.theorem
        );
    }
    println!(
        "bound: {} of {} deviation checks violated (bound {}applicable)",
        r.bounds.violations,
        r.bounds.checked,
        if r.bounds.bound_applies { "" } else { "not " }
    );
}

fn write_outputs(report: &ComparisonReport, spec: &ScenarioSpec) -> anyhow::Result<()> {
    let Some(dir) = &spec.output.dir else { return Ok(()) };
    let formats = if spec.output.formats.is_empty() { vec![Format::Json] } else { spec.output.formats.clone() };
    for f in formats {
        for path in report::emit(report, f, dir)? {
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
