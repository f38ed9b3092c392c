//! Command line front end: validate complexes, run the Hodge
//! decomposition, split individual elements, and generate example
//! complexes from builder specs.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cstar_hodge::hodge::hodge_decompose;
use cstar_hodge::io::{
    self, ComplexDto, DecomposeReport, HodgeReport, ModuleElementDto, ValidateReport,
};
use cstar_hodge::{CochainComplex, Error, Result, Tolerance};

#[derive(Parser)]
#[command(
    name = "cstar-hodge",
    version,
    about = "Hodge decomposition for cochain complexes of Hilbert modules over finite-dimensional C*-algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Relative tolerance for rank and residual decisions.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_rel: f64,
    /// Absolute tolerance floor.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_abs: f64,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized builders when the spec carries none.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the complex condition, reporting per-degree residuals.
    Validate {
        /// Complex JSON file, or a builder spec such as "cycle:3".
        input: String,
    },
    /// Decompose every degree: multiplicities, parametrix residuals,
    /// spectral gaps.
    Hodge {
        /// Complex JSON file, or a builder spec such as "cycle:3".
        input: String,
    },
    /// Split one element into harmonic, exact, and coexact parts.
    Decompose {
        /// Complex JSON file, or a builder spec such as "cycle:3".
        input: String,
        /// Degree of the element.
        #[arg(long)]
        degree: usize,
        /// JSON file holding the element's coordinates.
        #[arg(long)]
        element: PathBuf,
    },
    /// Build a complex from a builder spec and emit its JSON.
    Generate {
        /// Builder spec, e.g. "tetra-boundary blocks=2,1" or
        /// "planted ranks=2,3,2 seed=7".
        spec: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tolerance = match Tolerance::new(cli.tol_rel, cli.tol_abs) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&cli, tolerance) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli, tolerance: Tolerance) -> Result<ExitCode> {
    match &cli.command {
        Command::Validate { input } => cmd_validate(cli, tolerance, input),
        Command::Hodge { input } => cmd_hodge(cli, tolerance, input),
        Command::Decompose {
            input,
            degree,
            element,
        } => cmd_decompose(cli, tolerance, input, *degree, element),
        Command::Generate { spec } => cmd_generate(cli, tolerance, spec),
    }
}

/// Reads a complex from a file path or builds it from a builder spec.
fn load_complex(input: &str, seed: u64, tolerance: Tolerance) -> Result<CochainComplex> {
    if io::looks_like_builder_spec(input) {
        io::parse_builder_spec(input)?.build(seed, tolerance)
    } else {
        read_complex_dto(input)?.to_complex(tolerance)
    }
}

fn read_complex_dto(path: &str) -> Result<ComplexDto> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn emit(cli: &Cli, content: &str) -> Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn emit_report<T: serde::Serialize>(
    cli: &Cli,
    report: &T,
    render: impl Fn(&T) -> String,
) -> Result<()> {
    let content = match cli.format {
        Format::Text => render(report),
        Format::Json => {
            let mut json = serde_json::to_string_pretty(report)?;
            json.push('\n');
            json
        }
    };
    emit(cli, &content)
}

fn cmd_validate(cli: &Cli, tolerance: Tolerance, input: &str) -> Result<ExitCode> {
    let report: ValidateReport = if io::looks_like_builder_spec(input) {
        let complex = io::parse_builder_spec(input)?.build(cli.seed, tolerance)?;
        let parts = io::ComplexParts {
            spaces: complex.spaces().to_vec(),
            differentials: complex.differentials().to_vec(),
        };
        io::validate_parts(&parts, &tolerance)
    } else {
        let parts = read_complex_dto(input)?.to_parts()?;
        io::validate_parts(&parts, &tolerance)
    };
    emit_report(cli, &report, io::render_validate_text)?;
    if report.valid {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_hodge(cli: &Cli, tolerance: Tolerance, input: &str) -> Result<ExitCode> {
    let complex = load_complex(input, cli.seed, tolerance)?;
    let result = hodge_decompose(&complex)?;
    let report: HodgeReport = io::hodge_report(&result);
    for d in &report.degrees {
        if d.ill_separated {
            eprintln!(
                "warning: degree {} spectral gap is ill-separated from the kernel cut {:e}",
                d.degree, d.kernel_cut
            );
        }
    }
    emit_report(cli, &report, io::render_hodge_text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_decompose(
    cli: &Cli,
    tolerance: Tolerance,
    input: &str,
    degree: usize,
    element: &PathBuf,
) -> Result<ExitCode> {
    let complex = load_complex(input, cli.seed, tolerance)?;
    let result = hodge_decompose(&complex)?;
    if degree > complex.length() {
        return Err(Error::DegreeOutOfRange {
            degree,
            length: complex.length(),
        });
    }
    let text = fs::read_to_string(element)?;
    let dto: ModuleElementDto = serde_json::from_str(&text)?;
    let x = dto.to_element(&complex.space(degree))?;
    let report: DecomposeReport = io::decompose_report(&result, degree, &x)?;
    emit_report(cli, &report, io::render_decompose_text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_generate(cli: &Cli, tolerance: Tolerance, spec: &str) -> Result<ExitCode> {
    let complex = io::parse_builder_spec(spec)?.build(cli.seed, tolerance)?;
    let dto = ComplexDto::from_complex(&complex);
    let mut json = serde_json::to_string_pretty(&dto)?;
    json.push('\n');
    emit(cli, &json)?;
    Ok(ExitCode::SUCCESS)
}
