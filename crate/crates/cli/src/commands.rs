//! Verb dispatch: argument resolution, guardrails, and report assembly.

use std::thread;

use clap::{Args, Parser, Subcommand};
use cubic_orbits::cubic::{CubicCtx, LineClassKind};
use cubic_orbits::families::mu_line;
use cubic_orbits::gfq::FieldCtx;
use cubic_orbits::group::identify_group;
use cubic_orbits::orbits::{
    orbit_of_line, partition_all, partition_class, stabilizer_of_line, OrbitCensus,
    DEFAULT_CENSUS_MAX_Q, DEFAULT_ORBIT_MAX_Q,
};
use cubic_orbits::pg3::{line_count, line_through, PlueckerLine};

use crate::battery::run_battery;
use crate::error::CliError;
use crate::parse;
use crate::report::{
    CensusReport, ClassRow, ClassifyReport, ExploreClassRow, ExploreReport, Format, LengthRow,
    LineDesc, OrbitReport, RepRow,
};

#[derive(Parser)]
#[command(
    name = "cubic-orbits",
    version,
    about = "Line classification and orbit machinery for the twisted cubic in PG(3,q)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Count the lines of PG(3,q) in each class relative to the twisted cubic
    Classify(CommonArgs),
    /// Compute one line's orbit and stabilizer under the cubic's stabilizer group
    Orbit(OrbitArgs),
    /// Decompose the generic external line class into orbits
    Census(CommonArgs),
    /// Run every documented-claim check that applies to this field order
    Verify(VerifyArgs),
    /// Decompose every line class and compare against the predicted orbit pattern
    Explore(CommonArgs),
}

#[derive(Args)]
pub struct CommonArgs {
    /// Field order q (a prime power, q >= 4)
    #[arg(long)]
    pub q: u32,
    /// Worker threads (default: available parallelism)
    #[arg(long, env = "CUBIC_ORBITS_WORKERS")]
    pub workers: Option<usize>,
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Raise or lower the size guardrail (default 64 for whole-space sweeps,
    /// 169 for single-orbit work)
    #[arg(long)]
    pub max_q: Option<u32>,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("target").required(true).multiple(false)))]
pub struct OrbitArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Two spanning points, each four comma-separated coordinates
    #[arg(long, num_args = 2, allow_hyphen_values = true, group = "target")]
    pub points: Option<Vec<String>>,
    /// Six comma-separated Pluecker coordinates (p01,p02,p03,p12,p31,p23)
    #[arg(long, allow_hyphen_values = true, group = "target")]
    pub line: Option<String>,
    /// Family parameter mu, naming the line through (0,mu,0,1) and (1,0,1,0);
    /// accepts an element code, a negative integer, or a fraction like -1/3
    #[arg(long, allow_hyphen_values = true, group = "target")]
    pub mu: Option<String>,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Only run checks whose id starts with this prefix (e.g. 6.5 or 2.2ii)
    #[arg(long)]
    pub theorem: Option<String>,
}

pub fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Orbit(args) => cmd_orbit(args),
        Command::Census(args) => cmd_census(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Explore(args) => cmd_explore(args),
    }
}

fn resolve_workers(requested: Option<usize>) -> usize {
    requested
        .filter(|&w| w > 0)
        .unwrap_or_else(|| thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

fn census_guard(q: u32, max_q: Option<u32>) -> Result<(), CliError> {
    let bound = max_q.unwrap_or(DEFAULT_CENSUS_MAX_Q);
    if q > bound {
        return Err(CliError::Guardrail(format!(
            "q = {q} exceeds the whole-space guardrail ({bound}); pass --max-q {q} to allow \
             the sweep"
        )));
    }
    Ok(())
}

fn line_desc(f: &FieldCtx, l: &PlueckerLine) -> LineDesc {
    LineDesc {
        key: l.key(f).0,
        coords: l.coords().map(|e| e.code()),
    }
}

fn cmd_classify(args: CommonArgs) -> Result<u8, CliError> {
    let cubic = CubicCtx::new(args.q)?;
    census_guard(args.q, args.max_q)?;
    let workers = resolve_workers(args.workers);
    let census = cubic.class_census(workers);
    let classes = LineClassKind::ALL
        .iter()
        .map(|k| ClassRow {
            class: k.label().to_owned(),
            count: census[k],
        })
        .collect();
    let report = ClassifyReport {
        q: args.q,
        total_lines: line_count(args.q),
        classes,
    };
    print!("{}", report.render(args.format));
    Ok(0)
}

fn cmd_orbit(args: OrbitArgs) -> Result<u8, CliError> {
    let cubic = CubicCtx::new(args.common.q)?;
    let f = cubic.field();
    let bound = args.common.max_q.unwrap_or(DEFAULT_ORBIT_MAX_Q);
    let (line, source, mu_code) = if let Some(points) = &args.points {
        let a = parse::parse_point(f, &points[0])?;
        let b = parse::parse_point(f, &points[1])?;
        (line_through(f, &a, &b)?, "points", None)
    } else if let Some(token) = &args.line {
        (parse::parse_line_coords(f, token)?, "line", None)
    } else {
        let token = args.mu.as_ref().expect("clap guarantees one target");
        let mu = parse::parse_element(f, token)?;
        (mu_line(&cubic, mu)?, "mu", Some(mu.code()))
    };

    let class = cubic.classify_line(&line);
    let orbit = orbit_of_line(&cubic, &line, false, bound)?;
    let stab = stabilizer_of_line(&cubic, &line, bound)?;
    let structure = identify_group(f, &stab).expect("a stabilizer is closed under composition");
    let q = u64::from(args.common.q);
    let group_order = q * q * q - q;
    assert_eq!(
        orbit.size * stab.len() as u64,
        group_order,
        "orbit-stabilizer identity"
    );

    let canonical = PlueckerLine::from_key(f, orbit.canonical)?;
    let report = OrbitReport {
        q: args.common.q,
        source: source.to_owned(),
        mu: mu_code,
        line: line_desc(f, &line),
        class: class.kind.label().to_owned(),
        witness: class.witness.map(|(a, b)| [a.code(), b.code()]),
        orbit_size: orbit.size,
        stabilizer_order: stab.len() as u64,
        stabilizer_structure: structure.label(),
        canonical: line_desc(f, &canonical),
        group_order,
    };
    print!("{}", report.render(args.common.format));
    Ok(0)
}

fn census_to_report(census: &OrbitCensus) -> CensusReport {
    CensusReport {
        q: census.q,
        class: census.class.label().to_owned(),
        class_size: census.class_size,
        orbit_count: census.orbit_count(),
        orbit_lengths: census
            .orbit_sizes
            .iter()
            .map(|(&length, &multiplicity)| LengthRow {
                length,
                multiplicity,
            })
            .collect(),
        representatives: census
            .representatives
            .iter()
            .map(|&(key, length)| RepRow { key: key.0, length })
            .collect(),
    }
}

fn cmd_census(args: CommonArgs) -> Result<u8, CliError> {
    let cubic = CubicCtx::new(args.q)?;
    let workers = resolve_workers(args.workers);
    let bound = args.max_q.unwrap_or(DEFAULT_CENSUS_MAX_Q);
    let census = partition_class(&cubic, LineClassKind::ExternalGeneric, workers, bound)?;
    print!("{}", census_to_report(&census).render(args.format));
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, CliError> {
    let cubic = CubicCtx::new(args.common.q)?;
    let workers = resolve_workers(args.common.workers);
    let report = run_battery(&cubic, workers, args.common.max_q, args.theorem.as_deref())?;
    print!("{}", report.render(args.common.format));
    Ok(if report.failed > 0 { 1 } else { 0 })
}

fn cmd_explore(args: CommonArgs) -> Result<u8, CliError> {
    let cubic = CubicCtx::new(args.q)?;
    let f = cubic.field();
    let workers = resolve_workers(args.workers);
    let bound = args.max_q.unwrap_or(DEFAULT_CENSUS_MAX_Q);
    let censuses = partition_all(&cubic, workers, bound)?;

    let q = i64::from(args.q);
    let xi = i64::from(f.residue_facts().xi);
    let predicted_eng = if q % 2 == 1 {
        2 * q - 3 + xi
    } else {
        2 * q - 2 + xi
    } as u64;
    let conjectured_total = (2 * q + 7 + xi) as u64;

    let measured_eng = censuses
        .iter()
        .find(|c| c.class == LineClassKind::ExternalGeneric)
        .map(OrbitCensus::orbit_count)
        .unwrap_or(0);
    let measured_total: u64 = censuses.iter().map(OrbitCensus::orbit_count).sum();

    let report = ExploreReport {
        q: args.q,
        xi: f.residue_facts().xi,
        classes: censuses
            .iter()
            .map(|c| ExploreClassRow {
                class: c.class.label().to_owned(),
                class_size: c.class_size,
                orbit_count: c.orbit_count(),
                orbit_lengths: c
                    .orbit_sizes
                    .iter()
                    .map(|(&length, &multiplicity)| LengthRow {
                        length,
                        multiplicity,
                    })
                    .collect(),
            })
            .collect(),
        external_generic_orbit_count: measured_eng,
        predicted_external_generic_orbit_count: predicted_eng,
        external_generic_matches: measured_eng == predicted_eng,
        total_line_orbit_count: measured_total,
        conjectured_total_line_orbit_count: conjectured_total,
        conjecture_matches: measured_total == conjectured_total,
    };
    print!("{}", report.render(args.format));
    Ok(0)
}
