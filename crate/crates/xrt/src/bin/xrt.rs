//! Command-line driver: forward projection, Fourier analysis, range
//! checks, Hilbert transforms, reconstruction, GGHL moments, and the
//! end-to-end pipeline.
//!
//! Exit codes: 0 success, 1 a checked condition failed, 2 usage or I/O
//! error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use xrt::bukhgeim::{hilbert_fourier, range_residual, BoundaryModeSequence};
use xrt::forward::{doubled_restriction, odd_extension, xray_sinogram, GridKind};
use xrt::gghl;
use xrt::io;
use xrt::lattice::{analyze, synthesize_odd, FourierLattice};
use xrt::phantom::parse_phantom;
use xrt::range::{check_all, project_consistent, ConditionReport};
use xrt::reconstruct::{
    build_boundary_sequence, density_error, interior_u, recover_f, reproject_check,
    transport_residual, ReprojectStats,
};

#[derive(Parser)]
#[command(
    name = "xrt",
    about = "Fan-beam X-ray transform on the torus: forward projection, \
             Fourier-lattice range conditions, Bukhgeim-Hilbert machinery, \
             reconstruction, and GGHL moments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the X-ray transform of a phantom; writes xray/odd/doubled CSVs
    Forward(ForwardArgs),
    /// Double Fourier coefficients of a torus grid
    Analyze(AnalyzeArgs),
    /// Sample the odd-mode synthesis of a lattice back onto a grid
    Synthesize(SynthesizeArgs),
    /// Range condition checks on a lattice (or on a grid via analysis)
    Check(CheckArgs),
    /// Bukhgeim-Hilbert transform of a lattice
    Hilbert(HilbertArgs),
    /// Interior extension and density recovery from a lattice
    Reconstruct(ReconstructArgs),
    /// Classical GGHL moment conditions on a doubled sinogram
    Gghl(GghlArgs),
    /// Forward -> analyze -> check -> hilbert -> reconstruct -> gghl
    Pipeline(PipelineArgs),
}

#[derive(Args)]
struct ForwardArgs {
    /// Phantom spec, e.g. disc:cx=0.3,cy=0,r=0.4,a=1+bump:m=2,a=0.5
    #[arg(long)]
    phantom: String,
    #[arg(long, default_value_t = 256)]
    nbeta: usize,
    #[arg(long, default_value_t = 256)]
    ntheta: usize,
    /// Output directory for xray.csv, odd.csv, doubled.csv
    #[arg(short, long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Torus grid CSV
    #[arg(long)]
    input: PathBuf,
    /// Angular band n_max
    #[arg(long, default_value_t = 64)]
    band: i64,
    /// Boundary band k_max (defaults to --band)
    #[arg(long)]
    kband: Option<i64>,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct SynthesizeArgs {
    /// Lattice CSV
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 256)]
    nbeta: usize,
    #[arg(long, default_value_t = 256)]
    ntheta: usize,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    /// Lattice CSV, or grid CSV (analyzed with --band first)
    #[arg(long)]
    input: PathBuf,
    /// Tolerance relative to the sup of the lattice
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[arg(long, default_value_t = 64)]
    band: i64,
    /// Write the projection of the lattice onto the consistent subspace
    #[arg(long)]
    project: Option<PathBuf>,
    /// Report JSON path (stdout always gets a copy)
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HilbertArgs {
    /// Lattice CSV restricted to odd negative angular modes
    #[arg(long)]
    input: PathBuf,
    /// fourier (multiplier form) or direct (boundary-integral form)
    #[arg(long, default_value = "fourier")]
    mode: String,
    /// Quadrature nodes for the direct form
    #[arg(long, default_value_t = 256)]
    nodes: usize,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Lattice CSV restricted to odd negative angular modes
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.9)]
    rho: f64,
    /// Interior grid points per axis
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Corrector series depth
    #[arg(long, default_value_t = 8)]
    jterms: usize,
    /// Boundary quadrature nodes
    #[arg(long, default_value_t = 512)]
    nodes: usize,
    /// Sinogram CSV to reproject against
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Stats JSON path (stdout always gets a copy)
    #[arg(long)]
    stats: Option<PathBuf>,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct GghlArgs {
    /// Doubled sinogram CSV
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 4)]
    pmax: u32,
    /// Tolerance relative to |M(0,0)|
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Also verify the lattice equivalence of the moment identities
    #[arg(long)]
    equivalence: bool,
    /// Moment table CSV path
    #[arg(long)]
    moments: Option<PathBuf>,
    /// Report JSON path (stdout always gets a copy)
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    phantom: String,
    #[arg(long, default_value_t = 256)]
    nbeta: usize,
    #[arg(long, default_value_t = 256)]
    ntheta: usize,
    #[arg(long, default_value_t = 64)]
    band: i64,
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    #[arg(long, default_value_t = 0.9)]
    rho: f64,
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long, default_value_t = 8)]
    jterms: usize,
    #[arg(long, default_value_t = 3)]
    pmax: u32,
    /// GGHL tolerance relative to |M(0,0)|
    #[arg(long, default_value_t = 1e-3)]
    gghl_tol: f64,
    /// Reconstruction error tolerance (relative L2 vs the phantom)
    #[arg(long, default_value_t = 0.05)]
    recon_tol: f64,
    /// Aggregate report JSON path (stdout always gets a copy)
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct CheckReport {
    lattice_sup: f64,
    relative_tolerance: f64,
    conditions: Vec<ConditionReport>,
    pass: bool,
}

#[derive(Serialize)]
struct ReconstructStats {
    boundary_rows: usize,
    boundary_tail_bound: f64,
    hilbert_range_residual: f64,
    transport_residual: f64,
    reprojection: Option<ReprojectStats>,
}

#[derive(Serialize)]
struct PipelineReport {
    phantom: String,
    grid: String,
    range: CheckReport,
    gghl: gghl::GghlReport,
    equivalence: gghl::EquivalenceReport,
    reconstruction: ReconstructStats,
    density_rel_l2_vs_phantom: f64,
    density_sup_error_vs_phantom: f64,
    pass: bool,
}

fn emit<T: Serialize>(report: &T, out: &Option<PathBuf>) -> xrt::Result<()> {
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| xrt::Error::Format(e.to_string()))?;
    println!("{text}");
    if let Some(path) = out {
        io::write_text(path, &text)?;
    }
    Ok(())
}

/// Read either a lattice CSV or a torus grid CSV (analyzed at `band`).
fn load_lattice(path: &PathBuf, band: i64) -> xrt::Result<FourierLattice> {
    let text = io::read_text(path)?;
    if text.starts_with("# lattice") {
        io::lattice_from_string(&text)
    } else {
        let grid = io::grid_from_string(&text)?;
        let odd = match grid.kind() {
            GridKind::Xray => odd_extension(&grid)?,
            _ => grid,
        };
        analyze(&odd, band, band)
    }
}

fn run_check_all(lat: &FourierLattice, tol: f64) -> CheckReport {
    let sup = lat.max_abs();
    let conditions = check_all(lat, tol * sup.max(1e-300));
    let pass = conditions.iter().all(|c| c.pass);
    CheckReport {
        lattice_sup: sup,
        relative_tolerance: tol,
        conditions,
        pass,
    }
}

fn run(cli: Cli) -> xrt::Result<bool> {
    match cli.command {
        Command::Forward(a) => {
            let f = parse_phantom(&a.phantom)?;
            let xray = xray_sinogram(&f, a.nbeta, a.ntheta)?;
            let odd = odd_extension(&xray)?;
            let doubled = doubled_restriction(&xray)?;
            std::fs::create_dir_all(&a.out)?;
            io::write_text(a.out.join("xray.csv"), &io::grid_to_string(&xray))?;
            io::write_text(a.out.join("odd.csv"), &io::grid_to_string(&odd))?;
            io::write_text(a.out.join("doubled.csv"), &io::grid_to_string(&doubled))?;
            Ok(true)
        }
        Command::Analyze(a) => {
            let grid = io::grid_from_string(&io::read_text(&a.input)?)?;
            let lat = analyze(&grid, a.band, a.kband.unwrap_or(a.band))?;
            io::write_text(&a.out, &io::lattice_to_string(&lat))?;
            Ok(true)
        }
        Command::Synthesize(a) => {
            let lat = io::lattice_from_string(&io::read_text(&a.input)?)?;
            let grid = synthesize_odd(&lat.odd_negative_part(), a.nbeta, a.ntheta)?;
            io::write_text(&a.out, &io::grid_to_string(&grid))?;
            Ok(true)
        }
        Command::Check(a) => {
            let lat = load_lattice(&a.input, a.band)?;
            let report = run_check_all(&lat, a.tol);
            if let Some(path) = &a.project {
                io::write_text(path, &io::lattice_to_string(&project_consistent(&lat)))?;
            }
            emit(&report, &a.out)?;
            Ok(report.pass)
        }
        Command::Hilbert(a) => {
            let lat = io::lattice_from_string(&io::read_text(&a.input)?)?;
            let out = match a.mode.as_str() {
                "fourier" => hilbert_fourier(&lat)?,
                "direct" => {
                    let s = BoundaryModeSequence::from_lattice(&lat)?;
                    xrt::bukhgeim::hilbert_direct(&s, a.nodes)
                        .to_lattice(lat.n_max(), lat.k_max())
                }
                other => {
                    return Err(xrt::Error::Format(format!(
                        "unknown hilbert mode `{other}` (fourier|direct)"
                    )))
                }
            };
            io::write_text(&a.out, &io::lattice_to_string(&out))?;
            Ok(true)
        }
        Command::Reconstruct(a) => {
            let lat = io::lattice_from_string(&io::read_text(&a.input)?)?;
            let s = BoundaryModeSequence::from_lattice(&lat.odd_negative_part())?.trimmed();
            let field = interior_u(&s, a.rho, a.grid, a.jterms, a.nodes)?;
            let density = recover_f(&field);
            io::write_text(&a.out, &io::density_to_string(&density))?;
            let reprojection = match &a.reference {
                Some(path) => {
                    let g = io::grid_from_string(&io::read_text(path)?)?;
                    Some(xrt::reconstruct::reproject_grid(&density, &g)?)
                }
                None => Some(reproject_check(&density, &lat, 128, 128)?),
            };
            let stats = ReconstructStats {
                boundary_rows: s.num_rows(),
                boundary_tail_bound: s.tail_bound(a.jterms + 1),
                hilbert_range_residual: range_residual(&s),
                transport_residual: transport_residual(&field),
                reprojection,
            };
            emit(&stats, &a.stats)?;
            Ok(true)
        }
        Command::Gghl(a) => {
            let grid = io::grid_from_string(&io::read_text(&a.input)?)?;
            let report = gghl::check_gghl(&grid, a.pmax, f64::INFINITY)?;
            let pass_moments = report.max_abs_residual <= a.tol * report.scale.max(1e-300);
            let report = gghl::GghlReport {
                tolerance: a.tol,
                pass: pass_moments,
                ..report
            };
            if let Some(path) = &a.moments {
                let table = gghl::moment_table(&grid, a.pmax, 2 * a.pmax as i64 + 2)?;
                io::write_text(path, &io::moments_to_string(&table))?;
            }
            let mut pass = report.pass;
            if a.equivalence {
                let band = 2 * a.pmax as i64 + 8;
                let lat = analyze(&grid, band, a.pmax as i64 + 1)?;
                let eq = gghl::verify_equivalence(&lat, &grid, a.pmax, a.tol)?;
                pass &= eq.pass;
                #[derive(Serialize)]
                struct Both {
                    moments: gghl::GghlReport,
                    equivalence: gghl::EquivalenceReport,
                }
                emit(
                    &Both {
                        moments: report,
                        equivalence: eq,
                    },
                    &a.out,
                )?;
            } else {
                emit(&report, &a.out)?;
            }
            Ok(pass)
        }
        Command::Pipeline(a) => {
            let f = parse_phantom(&a.phantom)?;
            let xray = xray_sinogram(&f, a.nbeta, a.ntheta)?;
            let odd = odd_extension(&xray)?;
            let doubled = doubled_restriction(&xray)?;
            let lat = analyze(&odd, a.band, a.band)?;
            let range = run_check_all(&lat, a.tol);

            let moments = gghl::check_gghl(&doubled, a.pmax, f64::INFINITY)?;
            let gghl_pass = moments.max_abs_residual <= a.gghl_tol * moments.scale.max(1e-300);
            let moments = gghl::GghlReport {
                tolerance: a.gghl_tol,
                pass: gghl_pass,
                ..moments
            };
            let eq_lat = analyze(&doubled, 2 * a.pmax as i64 + 8, a.pmax as i64 + 1)?;
            let equivalence =
                gghl::verify_equivalence(&eq_lat, &doubled, a.pmax, a.gghl_tol)?;

            let s = build_boundary_sequence(&odd, a.band, a.band)?;
            let field = interior_u(&s, a.rho, a.grid, a.jterms, 512)?;
            let density = recover_f(&field);
            let (rel_l2, sup_err) = density_error(&density, &f, 0.8 * a.rho)?;
            let reprojection = reproject_check(&density, &lat, a.nbeta, a.ntheta)?;
            let recon_pass = rel_l2 <= a.recon_tol;
            let reconstruction = ReconstructStats {
                boundary_rows: s.num_rows(),
                boundary_tail_bound: s.tail_bound(a.jterms + 1),
                hilbert_range_residual: range_residual(&s),
                transport_residual: transport_residual(&field),
                reprojection: Some(reprojection),
            };

            let pass = range.pass && moments.pass && equivalence.pass && recon_pass;
            let report = PipelineReport {
                phantom: a.phantom.clone(),
                grid: format!("{}x{} band {}", a.nbeta, a.ntheta, a.band),
                range,
                gghl: moments,
                equivalence,
                reconstruction,
                density_rel_l2_vs_phantom: rel_l2,
                density_sup_error_vs_phantom: sup_err,
                pass,
            };
            emit(&report, &a.out)?;
            Ok(pass)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    match std::env::var("XRT_THREADS") {
        Ok(v) => {
            let n: usize = v
                .parse()
                .map_err(|_| format!("XRT_THREADS must be a number, got {v:?}"))?;
            if n > 0 {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| e.to_string())?;
            }
            Ok(())
        }
        Err(_) => Ok(()),
    }
}

fn main() -> ExitCode {
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
