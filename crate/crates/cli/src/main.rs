//! `coxtile`: prototile catalogs, cut-and-project patches, verification
//! suites, and hypercube projections from the command line.
//!
//! Exit codes: 0 on success, 1 when a computation or check fails, 2 on bad
//! arguments (including a malformed `COXTILE_THREADS`).

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use coxtile_core::descent::{self, CubeVertex};
use coxtile_core::render::{patch_json_string, render_svg, RenderStyle};
use coxtile_core::tiling::{self, LatticeKind, Patch};
use coxtile_core::{catalog, verify, CoxeterFrame, LatticeRank};

#[derive(Parser)]
#[command(
    name = "coxtile",
    version,
    about = "Prototiles and cut-and-project tilings from the A_n root lattice"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List prototile classes for one rank.
    Catalog {
        #[command(subcommand)]
        what: CatalogWhat,
    },
    /// Generate a tiling patch and write it as SVG or JSON.
    Patch {
        /// Lattice rank n (the cyclic order is h = n + 1).
        #[arg(long)]
        n: usize,
        /// Which lattice to sample points from.
        #[arg(long, value_enum, default_value_t = LatticeArg::Weight)]
        lattice: LatticeArg,
        /// Which tiles to emit.
        #[arg(long, value_enum, default_value_t = KindArg::Rhombic)]
        kind: KindArg,
        /// Patch radius in the projection plane. Defaults to a per-rank
        /// desk-scale value (8 at n = 4, 6 at n = 7, 5 at n = 11).
        #[arg(long)]
        radius: Option<f64>,
        /// Window shift, comma-separated (n - 2 values). All zeros selects
        /// the symmetric closed-window mode.
        #[arg(long)]
        shift: Option<String>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Svg)]
        format: FormatArg,
    },
    /// Run a named verification suite.
    Verify {
        /// One of: tables, descent, eigen, all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Emit the report as JSON instead of pass/fail lines.
        #[arg(long)]
        json: bool,
    },
    /// Project special points onto the lattice hyperplane.
    Project {
        #[command(subcommand)]
        what: ProjectWhat,
    },
}

#[derive(Subcommand)]
enum CatalogWhat {
    /// Rhombus classes (ranks 3 and up).
    Rhombi {
        #[arg(long)]
        n: usize,
        /// Emit JSON with exact angle fractions instead of the text table.
        #[arg(long)]
        json: bool,
    },
    /// Triangle classes from the Delone 2-faces.
    Triangles {
        #[arg(long)]
        n: usize,
        /// Emit JSON with exact angle fractions instead of the text table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum ProjectWhat {
    /// Project one vertex of the unit hypercube [-1/2, 1/2]^h.
    CubeVertex {
        #[arg(long)]
        n: usize,
        /// One '+' or '-' per ambient coordinate (h = n + 1 of them).
        #[arg(long)]
        signs: String,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum LatticeArg {
    Root,
    Weight,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Rhombic,
    Triangular,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Svg,
    Json,
}

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    match std::env::var("COXTILE_THREADS") {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(threads) => {
                if let Err(e) = tiling::configure_thread_cap(threads) {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_FAILURE);
                }
            }
            Err(_) => {
                eprintln!(
                    "error: COXTILE_THREADS must be a nonnegative integer \
                     (0 = auto), got {raw:?}"
                );
                return ExitCode::from(EXIT_USAGE);
            }
        },
        Err(std::env::VarError::NotPresent) => {}
        Err(e) => {
            eprintln!("error: COXTILE_THREADS is not readable: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }

    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

enum CliError {
    /// Arguments that never made sense: exit 2.
    Usage(String),
    /// A computation, check, or write that failed: exit 1.
    Failure(String),
}

impl From<coxtile_core::Error> for CliError {
    fn from(e: coxtile_core::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("write failed: {e}"))
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn parse_rank(n: usize) -> Result<LatticeRank, CliError> {
    LatticeRank::new(n).map_err(|e| CliError::Usage(e.to_string()))
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Catalog { what } => run_catalog(what),
        Command::Patch {
            n,
            lattice,
            kind,
            radius,
            shift,
            out,
            format,
        } => run_patch(n, lattice, kind, radius, shift, out, format),
        Command::Verify { suite, json } => run_verify(&suite, json),
        Command::Project {
            what: ProjectWhat::CubeVertex { n, signs },
        } => run_cube_vertex(n, &signs),
    }
}

fn run_catalog(what: CatalogWhat) -> Result<(), CliError> {
    let (n, json, rhombi) = match what {
        CatalogWhat::Rhombi { n, json } => (n, json, true),
        CatalogWhat::Triangles { n, json } => (n, json, false),
    };
    let rank = parse_rank(n)?;
    if rank.n() < 2 {
        return usage(format!("the catalog starts at rank 2, got {n}"));
    }
    let cat = catalog::catalog_json(rank)?;

    if json {
        let value = serde_json::to_value(&cat)
            .map_err(|e| CliError::Failure(format!("serialization failed: {e}")))?;
        let section = if rhombi { "rhombi" } else { "triangles" };
        let out = serde_json::json!({
            "n": cat.n,
            "h": cat.h,
            section: value[section],
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&out)
                .map_err(|e| CliError::Failure(format!("serialization failed: {e}")))?
        );
        return Ok(());
    }

    if rhombi {
        println!(
            "rank {} (h = {}): {} rhombus class{}",
            cat.n,
            cat.h,
            cat.rhombi.len(),
            if cat.rhombi.len() == 1 { "" } else { "es" }
        );
        for r in &cat.rhombi {
            let square = if r.is_square { "  (square)" } else { "" };
            println!(
                "  rhombus-{}: angles {}° and {}°{square}",
                r.m, r.angles_deg[0], r.angles_deg[1]
            );
        }
    } else {
        println!(
            "rank {} (h = {}): {} triangle class{}",
            cat.n,
            cat.h,
            cat.triangles.len(),
            if cat.triangles.len() == 1 { "" } else { "es" }
        );
        for t in &cat.triangles {
            println!(
                "  triangle-{}-{}-{}: angles {}°, {}°, {}°; edges {}, {}, {}",
                t.parts[0],
                t.parts[1],
                t.parts[2],
                t.angles_deg[0],
                t.angles_deg[1],
                t.angles_deg[2],
                t.edge_lengths[0],
                t.edge_lengths[1],
                t.edge_lengths[2],
            );
        }
    }
    Ok(())
}

fn default_radius(n: usize) -> f64 {
    match n {
        4 => 8.0,
        7 => 6.0,
        11 => 5.0,
        _ => 6.0,
    }
}

fn parse_shift(rank: LatticeRank, raw: Option<&str>) -> Result<Vec<f64>, CliError> {
    let expected = rank.n().saturating_sub(2);
    let Some(raw) = raw else {
        return Ok(tiling::default_shift(rank));
    };
    let trimmed = raw.trim();
    let parts: Vec<&str> = if trimmed.is_empty() {
        Vec::new()
    } else {
        trimmed.split(',').collect()
    };
    if parts.len() != expected {
        return usage(format!(
            "--shift needs {expected} comma-separated values at rank {}, got {}",
            rank.n(),
            parts.len()
        ));
    }
    parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("--shift entry {p:?} is not a number")))
        })
        .collect()
}

fn run_patch(
    n: usize,
    lattice: LatticeArg,
    kind: KindArg,
    radius: Option<f64>,
    shift: Option<String>,
    out: Option<PathBuf>,
    format: FormatArg,
) -> Result<(), CliError> {
    let rank = parse_rank(n)?;
    let radius = radius.unwrap_or_else(|| default_radius(rank.n()));
    if !radius.is_finite() || radius <= 0.0 {
        return usage(format!("--radius must be positive, got {radius}"));
    }
    let shift = parse_shift(rank, shift.as_deref())?;
    let symmetric = !shift.is_empty() && shift.iter().all(|g| *g == 0.0);
    if symmetric {
        eprintln!(
            "note: zero shift selects the symmetric closed-window mode; window \
             boundary points are kept, and triangular patches may stack both \
             diagonals of a cell"
        );
    }

    let patch: Patch = match kind {
        KindArg::Rhombic => {
            let lattice = match lattice {
                LatticeArg::Root => LatticeKind::Root,
                LatticeArg::Weight => LatticeKind::Weight,
            };
            tiling::generate_rhombic_patch(rank, lattice, radius, &shift)?
        }
        KindArg::Triangular => {
            if lattice == LatticeArg::Weight {
                eprintln!(
                    "note: triangular patches are built from root-lattice \
                     points; --lattice weight does not apply"
                );
            }
            tiling::generate_triangular_patch(rank, radius, &shift)?
        }
    };

    if patch.singular_count > 0 && !symmetric {
        eprintln!(
            "warning: {} candidate point{} within epsilon of the window \
             boundary were excluded; perturb --shift for a generic cut",
            patch.singular_count,
            if patch.singular_count == 1 { "" } else { "s" }
        );
    }
    if let Some(d) = &patch.diagnostic {
        eprintln!("note: {d}");
    }

    let text = match format {
        FormatArg::Svg => render_svg(&patch, &RenderStyle::default())?,
        FormatArg::Json => patch_json_string(&patch),
    };
    match out {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::Failure(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn run_verify(suite: &str, json: bool) -> Result<(), CliError> {
    if !verify::SUITES.contains(&suite) {
        return usage(format!(
            "unknown suite {suite:?}; available: {}",
            verify::SUITES.join(", ")
        ));
    }
    let checks = verify::run_suite(suite)?;
    let failed = checks.iter().filter(|c| !c.pass).count();

    if json {
        let mut map = serde_json::Map::new();
        for check in &checks {
            map.insert(
                check.name.clone(),
                serde_json::json!({ "pass": check.pass, "details": check.details }),
            );
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::Value::Object(map))
                .map_err(|e| CliError::Failure(format!("serialization failed: {e}")))?
        );
    } else {
        for check in &checks {
            let tag = if check.pass { "PASS" } else { "FAIL" };
            println!("{tag} {}: {}", check.name, check.details);
        }
        println!(
            "{} of {} checks passed",
            checks.len() - failed,
            checks.len()
        );
    }

    if failed > 0 {
        return Err(CliError::Failure(format!(
            "{failed} check{} failed in suite {suite:?}",
            if failed == 1 { "" } else { "s" }
        )));
    }
    Ok(())
}

fn run_cube_vertex(n: usize, signs: &str) -> Result<(), CliError> {
    let rank = parse_rank(n)?;
    let vertex = CubeVertex::parse(signs).map_err(|e| CliError::Usage(e.to_string()))?;
    if vertex.len() != rank.h() {
        return usage(format!(
            "--signs needs h = {} entries at rank {}, got {}",
            rank.h(),
            rank.n(),
            vertex.len()
        ));
    }
    let image = descent::project_cube_vertex(&vertex, rank)?;
    let coords = image
        .integer_coords()
        .map_err(|e| CliError::Failure(e.to_string()))?;
    println!("signs: {vertex}  ({} minus)", vertex.minus_count());
    println!(
        "lattice image: [{}]",
        coords
            .iter()
            .map(i64::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!("congruence level: {}", image.level()?);
    if rank.n() >= 2 {
        let frame = CoxeterFrame::new(rank)?;
        let p = frame.project_parallel(&image);
        println!("projection plane: ({}, {})", p.x, p.y);
    }
    Ok(())
}
