//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::bruteforce::enumerate_bruteforce;
use crate::constructions::{build_m_tau, build_q, fit_in_disc, primitive_vectors, verify_q_family, QSelector};
use crate::enumerator::{enumerate_classes_with_sink, vertex_count_bound, ClassTable, EnumerationOptions, NullSink};
use crate::equivalence::{apply_map, find_unimodular_map, random_unimodular_map};
use crate::error::{Error, Result};
use crate::geometry::{ConvexLatticePolygon, LatticePoint};
use crate::invariants::compute_invariants;
use crate::persist::{counts_csv, write_run, DirectorySink, RepresentativeRecord, RunSummary, COUNTS_FILE};
use crate::region::{parse_rational, Region};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "latpoly",
    version,
    about = "Convex lattice polygons up to unimodular equivalence"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate all classes in a region by successive shaving.
    Enumerate(EnumerateArgs),
    /// Classify every closed subset of a small region exhaustively.
    Oracle(OracleArgs),
    /// Search for a unimodular map between two polygons.
    Eq(EqArgs),
    /// Print the invariant vector of a polygon.
    Invariants(PolygonArg),
    /// Build M_tau, 2M_tau or one Q_u polygon.
    Construct(ConstructArgs),
    /// Check the pairing of the Q_u family for one tau^2.
    #[command(name = "verify-theorem2")]
    VerifyTheorem2(VerifyArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct RegionArgs {
    /// Integer disc radius.
    #[arg(long)]
    pub radius: Option<i64>,
    /// Squared disc radius, `p` or `p/q`.
    #[arg(long)]
    pub radius2: Option<String>,
    /// Region document (JSON).
    #[arg(long)]
    pub region: Option<PathBuf>,
}

impl RegionArgs {
    pub fn resolve(&self) -> Result<Region> {
        if let Some(r) = self.radius {
            if r < 0 {
                return Err(Error::InvalidRegion(format!("negative radius {r}")));
            }
            return Ok(Region::disc(r));
        }
        if let Some(r2) = &self.radius2 {
            return Region::disc_squared(parse_rational(r2)?);
        }
        let path = self.region.as_ref().expect("clap enforces one region source");
        Region::from_json(&fs::read_to_string(path)?)
    }
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub region: RegionArgs,
    /// Output directory for counts, summary and level files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Deterministic merge order (representatives reproducible byte-for-byte).
    #[arg(long, default_value_t = true, num_args = 0..=1, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub deterministic: bool,
    /// Write representative files for levels up to the cap.
    #[arg(long = "emit-representatives", default_value_t = true, num_args = 0..=1, default_missing_value = "true", action = clap::ArgAction::Set)]
    pub emit_representatives: bool,
    /// Largest cardinality whose representatives are written; 0 means no cap.
    #[arg(long, default_value_t = 24)]
    pub emit_max_w: usize,
    /// Shuffle each level's candidate stream with this seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub region: RegionArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PolygonArg {
    /// Polygon file: a JSON list of `[x, y]` generators, or a representative record.
    #[arg(long)]
    pub polygon: PathBuf,
}

#[derive(Debug, Args)]
pub struct EqArgs {
    #[arg(long)]
    pub a: PathBuf,
    /// Second polygon; defaults to a random unimodular image of the first.
    #[arg(long)]
    pub b: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Entry bound for the random map.
    #[arg(long, default_value_t = 3)]
    pub entry_bound: i64,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub tau2: String,
    #[arg(long, default_value_t = 2)]
    pub scale: i64,
    /// Comma-separated selector over {1,2}; builds Q_u from 2M_tau.
    #[arg(long)]
    pub selector: Option<String>,
    /// Translate 2M_tau into the disc of this squared radius when it fits.
    #[arg(long)]
    pub fit_radius2: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub tau2: String,
    /// Write the full report as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PolygonDocument {
    Generators(Vec<LatticePoint>),
    Record { hull: Vec<LatticePoint> },
}

pub fn read_polygon(path: &Path) -> Result<ConvexLatticePolygon> {
    let text = fs::read_to_string(path)?;
    let doc: PolygonDocument =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let gens = match doc {
        PolygonDocument::Generators(g) => g,
        PolygonDocument::Record { hull } => hull,
    };
    ConvexLatticePolygon::from_generators(&gens)
}

fn hull_json(p: &ConvexLatticePolygon) -> String {
    serde_json::to_string(p.hull()).expect("points serialize")
}

fn print_table(table: &ClassTable) {
    print!("{}", counts_csv(table));
}

fn enumerate(args: &EnumerateArgs) -> Result<()> {
    let region = args.region.resolve()?;
    let options = EnumerationOptions {
        workers: args.workers,
        deterministic: args.deterministic,
        shuffle_seed: args.seed,
        keep_representatives: false,
    };
    let (table, stats) = match (&args.out, args.emit_representatives) {
        (Some(out), true) => {
            let cap = (args.emit_max_w > 0).then_some(args.emit_max_w);
            let mut sink = DirectorySink::new(out, cap)?;
            enumerate_classes_with_sink(&region, &options, &mut sink)?
        }
        _ => enumerate_classes_with_sink(&region, &options, &mut NullSink)?,
    };
    let bound = region
        .radius2()
        .map(|r2| vertex_count_bound(*r2.numer() as f64 / *r2.denom() as f64));
    if let Some(out) = &args.out {
        let summary = RunSummary {
            region: region.to_string(),
            total: table.total(),
            rows: table.rows().to_vec(),
            stats: stats.clone(),
            vertex_bound: bound,
        };
        write_run(out, &table, &summary)?;
    }
    println!("region: {region}");
    print_table(&table);
    println!(
        "lattice points {}, classes {}, max vertices {}, shaves {}, eq calls {}",
        stats.lattice_points, stats.classes, stats.max_vertices, stats.shaves, stats.eq_calls
    );
    if let Some(b) = bound {
        if stats.max_vertices as f64 > b {
            return Err(Error::ConstructionInvariantViolated(format!(
                "{} vertices exceeds the bound {b:.3}",
                stats.max_vertices
            )));
        }
    }
    Ok(())
}

fn oracle(args: &OracleArgs) -> Result<()> {
    let region = args.region.resolve()?;
    let table = enumerate_bruteforce(&region)?;
    if let Some(out) = &args.out {
        fs::create_dir_all(out)?;
        fs::write(out.join(COUNTS_FILE), counts_csv(&table))?;
    }
    println!("region: {region}");
    print_table(&table);
    Ok(())
}

fn eq(args: &EqArgs) -> Result<()> {
    let a = read_polygon(&args.a)?;
    let b = match &args.b {
        Some(path) => read_polygon(path)?,
        None => {
            let sigma = random_unimodular_map(args.seed, args.entry_bound.max(1));
            println!("image under {sigma}: {}", hull_json(&apply_map(&sigma, &a)));
            apply_map(&sigma, &a)
        }
    };
    match find_unimodular_map(&a, &b) {
        Some(map) => {
            if apply_map(&map, &a) != b {
                return Err(Error::ConstructionInvariantViolated(format!(
                    "witness {map} does not map a onto b"
                )));
            }
            println!("equivalent: {map}");
        }
        None => println!("not equivalent"),
    }
    Ok(())
}

fn invariants(args: &PolygonArg) -> Result<()> {
    let p = read_polygon(&args.polygon)?;
    println!(
        "{}",
        serde_json::to_string(&compute_invariants(&p)).expect("invariants serialize")
    );
    Ok(())
}

fn construct(args: &ConstructArgs) -> Result<()> {
    let fan = primitive_vectors(parse_rational(&args.tau2)?)?;
    println!(
        "fan ({} vectors): {}",
        fan.len(),
        serde_json::to_string(fan.vectors()).expect("points serialize")
    );
    let m = build_m_tau(&fan, args.scale)?;
    let polygon = match (&args.selector, &args.fit_radius2) {
        (Some(sel), _) => {
            let choices = sel
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u8>()
                        .map_err(|_| Error::Parse(format!("bad selector entry {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            build_q(&m, &QSelector::new(choices)?)?
        }
        (None, Some(r2)) => match fit_in_disc(&m, parse_rational(r2)?)? {
            Some(p) => p,
            None => {
                println!("does not fit: d^2 = {} > 2 * {r2}", m.diameter_length_sq());
                return Ok(());
            }
        },
        (None, None) => m.polygon().clone(),
    };
    println!(
        "{}",
        serde_json::to_string(&RepresentativeRecord::of(&polygon)).expect("record serializes")
    );
    Ok(())
}

fn verify_theorem2(args: &VerifyArgs) -> Result<()> {
    let report = verify_q_family(parse_rational(&args.tau2)?)?;
    if let Some(out) = &args.out {
        let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
        json.push('\n');
        fs::write(out, json)?;
    }
    println!(
        "{} polygons, {} classes, max class size {}",
        report.polygons, report.classes, report.max_class_size
    );
    println!(
        "lower bound 2^{} = {}: {}; mirror witnesses: {}",
        report.fan_size - 2,
        report.lower_bound,
        if report.meets_lower_bound() { "met" } else { "NOT met" },
        if report.all_pairs_mirrored() { "all" } else { "missing" }
    );
    if !report.meets_lower_bound() || !report.all_pairs_mirrored() {
        return Err(Error::ConstructionInvariantViolated(
            "pairing report failed its checks".into(),
        ));
    }
    Ok(())
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::PairingViolation { .. } | Error::ConstructionInvariantViolated(_) => EXIT_INVARIANT,
        _ => EXIT_USAGE,
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Enumerate(a) => enumerate(a),
        Command::Oracle(a) => oracle(a),
        Command::Eq(a) => eq(a),
        Command::Invariants(a) => invariants(a),
        Command::Construct(a) => construct(a),
        Command::VerifyTheorem2(a) => verify_theorem2(a),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
