use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fiberstp::mesh::{build_box_mesh, write_msh};
use fiberstp::pipeline::{format_float, run_case};
use fiberstp::stp::{rotate_stp, FiberSection, Notation, StrainTransferOperator};
use fiberstp::tensor::MaterialSpec;
use fiberstp::{Error, Result};

#[derive(Parser)]
#[command(name = "fiberstp", version, about = "Strain transfer for embedded fiber sensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a case: solves without fiber, with fiber and (optionally) the reference,
    /// then writes the strain trace along the fiber.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        skip_reference: bool,
    },
    /// Print the 6×6 transfer operator as CSV. Both materials are given with the
    /// fiber (reinforcement) axis along z.
    StpMatrix {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        fiber: PathBuf,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, value_enum, default_value_t = Notation::Mandel)]
        notation: Notation,
        /// Print the full operator record as JSON instead of CSV.
        #[arg(long)]
        json: bool,
    },
    /// Write a structured box mesh in MSH 2.2 format.
    MeshBox {
        #[arg(long)]
        nx: usize,
        #[arg(long)]
        ny: usize,
        #[arg(long)]
        nz: usize,
        #[arg(long)]
        lx: f64,
        #[arg(long)]
        ly: f64,
        #[arg(long)]
        lz: f64,
        #[arg(long)]
        out: PathBuf,
        /// Add a grid line as physical group "fiber", as `axis:p:q` (axis 0, 1 or 2).
        #[arg(long)]
        fiber: Option<String>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}: {e}", e.category());
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Solve { config, skip_reference } => {
            let (result, written) = run_case(&config, skip_reference)?;
            match written {
                Some(p) => {
                    writeln!(
                        out,
                        "wrote {} rows to {} (cg iterations: no fiber {}, fiber {}{})",
                        result.trace.rows.len(),
                        p.display(),
                        result.no_fiber.report.iterations,
                        if result.fiber_solve_skipped {
                            "skipped".to_string()
                        } else {
                            result.with_fiber.report.iterations.to_string()
                        },
                        result
                            .reference
                            .as_ref()
                            .map(|r| format!(", reference {}", r.report.iterations))
                            .unwrap_or_default(),
                    )?;
                }
                None => result.trace.write_to(&mut out)?,
            }
        }
        Command::StpMatrix {
            matrix,
            fiber,
            radius,
            alpha,
            beta,
            notation,
            json,
        } => {
            let cm = MaterialSpec::load(&matrix)?.stiffness()?;
            let cf = MaterialSpec::load(&fiber)?.stiffness()?;
            let base = StrainTransferOperator::from_fiber_z_frame(&cm, &cf, &FiberSection::circular(radius)?)?;
            let op = rotate_stp(&base, alpha, beta)?;
            if json {
                serde_json::to_writer_pretty(&mut out, &op.record(notation))?;
                writeln!(out)?;
            } else {
                let mut w = csv::Writer::from_writer(&mut out);
                for row in op.matrix(notation) {
                    w.write_record(row.iter().copied().map(format_float))?;
                }
                w.flush()?;
            }
        }
        Command::MeshBox {
            nx,
            ny,
            nz,
            lx,
            ly,
            lz,
            out: path,
            fiber,
        } => {
            let b = build_box_mesh(nx, ny, nz, lx, ly, lz)?;
            let mut chains = BTreeMap::new();
            if let Some(spec) = fiber {
                let parts: Vec<usize> = spec
                    .split(':')
                    .map(|s| s.parse().map_err(|_| Error::Config(format!("bad --fiber {spec:?}, expected axis:p:q"))))
                    .collect::<Result<_>>()?;
                let [axis, p, q] = parts[..] else {
                    return Err(Error::Config(format!("bad --fiber {spec:?}, expected axis:p:q")));
                };
                chains.insert("fiber".to_string(), b.grid_line(axis, p, q)?);
            }
            std::fs::write(&path, write_msh(&b.mesh, &chains))?;
            writeln!(
                out,
                "wrote {} vertices, {} tets to {}",
                b.mesh.n_vertices(),
                b.mesh.n_tets(),
                path.display()
            )?;
        }
    }
    Ok(())
}
