//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use combifock::ansatz::DEFAULT_MP2_EPS;
use combifock::compact_ham::CompactHamiltonian;
use combifock::jw::jw_hamiltonian;
use combifock::pauli::{decompose_real, DEFAULT_PRUNE_EPS};
use combifock::vqe::VqeConfig;
use rayon::prelude::*;

use crate::fixtures::{select, Fixture};
use crate::morse::{fit_morse, MorseError};
use crate::report::{compare_csv, scan_csv, terms_csv, CompareRow, ScanReport};
use crate::run::{compact_terms, run_point, Encoding, RunSettings, ScanRow};
use crate::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "combifock",
    version,
    about = "Compact combinadic encoding of molecular Hamiltonians"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(
        long,
        global = true,
        env = "COMBIFOCK_FIXTURES",
        default_value = "data/fixtures"
    )]
    pub fixture_dir: PathBuf,
    #[arg(long, global = true, default_value = "h2")]
    pub molecule: String,
    #[arg(long, global = true, default_value_t = 4)]
    pub spin_orbitals: usize,
    /// Comma-separated bond distances in Å; all available fixtures when omitted.
    #[arg(long, global = true)]
    pub distances: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "compact")]
    pub encoding: Encoding,
    #[arg(long, global = true, default_value_t = DEFAULT_MP2_EPS)]
    pub mp2_eps: f64,
    #[arg(long, global = true, default_value_t = DEFAULT_PRUNE_EPS)]
    pub prune_eps: f64,
    #[arg(long, global = true, default_value_t = 0.05)]
    pub adam_lr: f64,
    #[arg(long, global = true, default_value_t = 2000)]
    pub max_iters: usize,
    /// Output directory; results go to stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Half-width of the seeded uniform perturbation of the zero start.
    #[arg(long, global = true, default_value_t = 0.0)]
    pub init_jitter: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// VQE and exact energies along a bond-distance scan.
    Scan,
    /// Compact against Jordan–Wigner depths and function calls.
    Compare,
    /// Pauli term counts of the compact Hamiltonian.
    Terms,
    /// Morse fit of (distance, energy) points from a CSV file.
    FitMorse {
        input: PathBuf,
        #[arg(long, default_value = "vqe_energy")]
        energy_column: String,
    },
    /// Dense compact Hamiltonian at a single distance.
    DumpHam,
    /// Pauli decomposition at a single distance.
    DumpPauli,
}

impl Common {
    fn distances(&self) -> CliResult<Option<Vec<f64>>> {
        let Some(text) = &self.distances else {
            return Ok(None);
        };
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse()
                    .map_err(|_| CliError::Usage(format!("invalid distance '{s}'")))
            })
            .collect::<CliResult<Vec<f64>>>()
            .map(Some)
    }

    fn fixtures(&self) -> CliResult<Vec<Fixture>> {
        let d = self.distances()?;
        select(
            &self.fixture_dir,
            &self.molecule,
            self.spin_orbitals,
            d.as_deref(),
        )
    }

    fn single_fixture(&self) -> CliResult<Fixture> {
        let mut f = self.fixtures()?;
        if f.len() != 1 {
            return Err(CliError::Usage(format!(
                "expected exactly one distance, got {}",
                f.len()
            )));
        }
        Ok(f.remove(0))
    }

    fn settings(&self) -> CliResult<RunSettings> {
        let vqe = VqeConfig {
            learning_rate: self.adam_lr,
            max_iterations: self.max_iters,
            seed: self.seed,
            initial_jitter: self.init_jitter,
            ..VqeConfig::default()
        };
        vqe.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        if self.mp2_eps.is_nan()
            || self.prune_eps.is_nan()
            || self.mp2_eps < 0.0
            || self.prune_eps < 0.0
        {
            return Err(CliError::Usage("thresholds must be non-negative".into()));
        }
        Ok(RunSettings {
            mp2_eps: self.mp2_eps,
            prune_eps: self.prune_eps,
            vqe,
        })
    }
}

/// Writes `text` to `<out>/<name>` when an output directory is set, else to `stdout`.
fn emit(out_dir: Option<&Path>, name: &str, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(name), text)?;
        }
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize") + "\n"
}

fn scan_rows(common: &Common, encodings: &[Encoding], increasing: bool) -> CliResult<Vec<ScanRow>> {
    let fixtures = common.fixtures()?;
    if increasing && fixtures.windows(2).any(|w| w[1].distance <= w[0].distance) {
        return Err(CliError::Usage(
            "scan distances must be strictly increasing".into(),
        ));
    }
    let settings = common.settings()?;
    let loaded: Vec<_> = fixtures
        .iter()
        .map(|f| f.load().map(|i| (f.distance, i)))
        .collect::<CliResult<_>>()?;
    let jobs: Vec<_> = loaded
        .iter()
        .flat_map(|p| encodings.iter().map(move |&e| (p, e)))
        .collect();
    jobs.par_iter()
        .map(|((d, ints), e)| run_point(ints, *d, *e, &settings))
        .collect()
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    let common = &cli.common;
    let out = common.out.as_deref();
    match &cli.command {
        Command::Scan => {
            let rows = scan_rows(common, common.encoding.expand(), true)?;
            emit(out, "scan.csv", &scan_csv(&rows), stdout)?;
            if let Some(dir) = out {
                let points: Vec<_> = rows
                    .iter()
                    .filter(|r| r.encoding == "compact")
                    .map(|r| (r.distance_angstrom, r.vqe_energy))
                    .collect();
                let morse_fit = if points.len() >= 4 {
                    fit_morse(&points).ok()
                } else {
                    None
                };
                let settings = common.settings()?;
                let report = ScanReport {
                    molecule: &common.molecule,
                    spin_orbitals: common.spin_orbitals,
                    settings: &settings,
                    rows: &rows,
                    morse_fit,
                };
                emit(Some(dir), "scan.json", &to_json(&report), stdout)?;
            }
        }
        Command::Compare => {
            let rows = scan_rows(common, Encoding::Both.expand(), false)?;
            let table: Vec<CompareRow> = rows
                .chunks(2)
                .map(|p| CompareRow::from_pair(&p[0], &p[1]))
                .collect();
            for r in table.iter().filter(|r| !r.compact_fewer_calls) {
                eprintln!(
                    "warning: at {} Å the compact run used {} function calls, full used {}",
                    r.distance_angstrom, r.compact_function_calls, r.full_function_calls
                );
            }
            emit(out, "compare.csv", &compare_csv(&table), stdout)?;
            if let Some(dir) = out {
                emit(Some(dir), "compare.json", &to_json(&table), stdout)?;
            }
        }
        Command::Terms => {
            let rows = common
                .fixtures()?
                .iter()
                .map(|f| {
                    let (q, t) = compact_terms(&f.load()?, common.prune_eps)?;
                    Ok((f.distance, q, t))
                })
                .collect::<CliResult<Vec<_>>>()?;
            emit(out, "terms.csv", &terms_csv(&rows), stdout)?;
        }
        Command::FitMorse {
            input,
            energy_column,
        } => {
            let points = read_points(input, energy_column, common.encoding)?;
            let fit = fit_morse(&points).map_err(|e| match e {
                MorseError::TooFewPoints(_) => CliError::Usage(e.to_string()),
                MorseError::NonConvergence { .. } => CliError::Numerical(e.to_string()),
            })?;
            emit(out, "morse.json", &to_json(&fit), stdout)?;
        }
        Command::DumpHam => {
            let ints = common.single_fixture()?.load()?;
            let ham = CompactHamiltonian::build(&ints, &ints.shape()?)?;
            let mut buf = Vec::new();
            ham.write_dense(&mut buf)?;
            emit(
                out,
                "hamiltonian.txt",
                &String::from_utf8_lossy(&buf),
                stdout,
            )?;
        }
        Command::DumpPauli => {
            let ints = common.single_fixture()?.load()?;
            let sum = match common.encoding {
                Encoding::JwFull => jw_hamiltonian(&ints)?.pruned(common.prune_eps),
                _ => decompose_real(
                    CompactHamiltonian::build(&ints, &ints.shape()?)?.matrix(),
                    common.prune_eps,
                )?,
            };
            emit(out, "pauli.txt", &sum.to_text(), stdout)?;
        }
    }
    Ok(())
}

/// `(distance, energy)` pairs from a CSV with a header row. Rows of a scan
/// CSV are filtered to the selected encoding.
pub fn read_points(
    path: &Path,
    energy_column: &str,
    encoding: Encoding,
) -> CliResult<Vec<(f64, f64)>> {
    let bad = |message: String| CliError::Fixture {
        path: path.display().to_string(),
        message,
    };
    let text = std::fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| bad("empty file".into()))?
        .split(',')
        .map(str::trim)
        .collect();
    let col = |name: &str| header.iter().position(|h| *h == name);
    let d_col = col("distance_angstrom").unwrap_or(0);
    let e_col = match col(energy_column) {
        Some(c) => c,
        None if header.len() == 2 => 1,
        None => return Err(bad(format!("no column '{energy_column}'"))),
    };
    let enc_col = col("encoding");
    let want = match encoding {
        Encoding::Both => Encoding::Compact,
        e => e,
    };
    let mut points = Vec::new();
    for (k, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if let Some(c) = enc_col {
            if f.get(c) != Some(&want.label()) {
                continue;
            }
        }
        let num = |i: usize| -> CliResult<f64> {
            f.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad(format!("line {}: bad number", k + 2)))
        };
        points.push((num(d_col)?, num(e_col)?));
    }
    Ok(points)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
