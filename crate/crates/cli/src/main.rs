use clap::{Parser, Subcommand};
use k3census::census::{self, Engine};
use k3census::deform;
use k3census::export;
use k3census::lattice::Surface;
use k3census_cli::counts;
use k3census_cli::figure::{self, FigureFormat, FigureSpec};
use std::path::PathBuf;
use std::process::ExitCode;

/// Largest degree accepted by `deform`; the deformation rules only depend
/// on n mod 8, so small degrees already exercise every branch.
const N_BOUND: i64 = 64;

#[derive(Parser)]
#[command(name = "k3census", version, about = "Census of real K3 moduli components")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the five lattice fixtures as JSON.
    Fixtures {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the census of one surface.
    Enumerate {
        #[arg(long)]
        surface: String,
        /// Condition engine: generic or percase.
        #[arg(long, default_value = "generic")]
        engine: String,
        /// Group tuples into related-involution classes.
        #[arg(long)]
        identify_related: bool,
        /// Output format: json, csv or ascii.
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the (r, a) marker grids of a surface.
    Figure {
        #[arg(long)]
        surface: String,
        /// Output format: ascii or svg.
        #[arg(long, default_value = "ascii")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the deformation image for an even degree.
    Deform {
        #[arg(long)]
        n: i64,
        /// Verify that no excluded invariants appear in the image.
        #[arg(long)]
        check_exceptions: bool,
        /// Output format: json or ascii.
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-derive all censuses and compare against the expected counts.
    CheckCounts,
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), String> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text).map_err(|e| format!("write {path:?}: {e}")),
    }
}

fn usage_err(msg: String) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Fixtures { out } => {
            let text = export::fixtures_json() + "\n";
            match emit(&text, &out) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => usage_err(e),
            }
        }
        Command::Enumerate { surface, engine, identify_related, format, out } => {
            let surface = match Surface::parse(&surface) {
                Ok(s) => s,
                Err(e) => return usage_err(e.to_string()),
            };
            let engine = match Engine::parse(&engine) {
                Ok(e) => e,
                Err(e) => return usage_err(e.to_string()),
            };
            let tuples = match census::enumerate(surface, engine) {
                Ok(t) => t,
                Err(e) => return usage_err(e.to_string()),
            };
            let text = if identify_related {
                match census::identify_related(&tuples)
                    .and_then(|c| export::related_classes_json(surface, &c))
                {
                    Ok(t) => t + "\n",
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::FAILURE;
                    }
                }
            } else {
                let rendered = match format.as_str() {
                    "json" => export::census_json(surface, &tuples).map(|t| t + "\n"),
                    "csv" => export::census_csv(&tuples),
                    "ascii" => Ok(tuples
                        .iter()
                        .map(|g| {
                            format!(
                                "{} r={} a={} H={} delta_phiS={} v={} type={}\n",
                                g.surface.name(),
                                g.r,
                                g.a,
                                g.h_name(),
                                g.delta_phi_s,
                                g.v_name().unwrap_or_else(|| "-".into()),
                                g.tuple_type(),
                            )
                        })
                        .collect()),
                    other => return usage_err(format!("unknown format {other}")),
                };
                match rendered {
                    Ok(t) => t,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::FAILURE;
                    }
                }
            };
            match emit(&text, &out) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => usage_err(e),
            }
        }
        Command::Figure { surface, format, out } => {
            let surface = match Surface::parse(&surface) {
                Ok(s) => s,
                Err(e) => return usage_err(e.to_string()),
            };
            let format = match format.as_str() {
                "ascii" => FigureFormat::Ascii,
                "svg" => FigureFormat::Svg,
                other => return usage_err(format!("unknown figure format {other}")),
            };
            let census = census::census_for(surface);
            let spec = FigureSpec { surface, h_filter: None, format };
            let text = figure::render(&spec, census);
            match emit(&text, &out) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => usage_err(e),
            }
        }
        Command::Deform { n, check_exceptions, format, out } => {
            if n < 2 || n % 2 != 0 || n > N_BOUND {
                return usage_err(format!("n must be even with 2 <= n <= {N_BOUND}, got {n}"));
            }
            let image = match deform::image(n) {
                Ok(i) => i,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::FAILURE;
                }
            };
            if check_exceptions {
                let bad: Vec<_> = image
                    .iter()
                    .filter(|(p, _)| deform::is_exception(p))
                    .collect();
                if bad.is_empty() {
                    println!(
                        "deform n={n}: exception exclusion PASS ({} image tuples)",
                        image.len()
                    );
                } else {
                    for (p, _) in bad {
                        eprintln!("exception present in image: {p}");
                    }
                    return ExitCode::FAILURE;
                }
                return ExitCode::SUCCESS;
            }
            let text = match format.as_str() {
                "json" => export::image_json(n, &image) + "\n",
                "ascii" => image
                    .iter()
                    .map(|(p, sources)| format!("{p} <- {} sources\n", sources.len()))
                    .collect(),
                other => return usage_err(format!("unknown format {other}")),
            };
            match emit(&text, &out) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => usage_err(e),
            }
        }
        Command::CheckCounts => match counts::check_all() {
            Ok(lines) => {
                let mut ok = true;
                for l in &lines {
                    println!("{}", l.render());
                    ok &= l.pass();
                }
                if ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        },
    }
}
