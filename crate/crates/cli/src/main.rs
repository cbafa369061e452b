//! Command-line front end: enumerate Coxeter groups, compute polynomial
//! tables, and run the identity-verification suites.
//!
//! Exit codes: 0 success, 1 identity failure on a graph where the
//! identities are proved, 2 usage or input error, 3 expected failure
//! confirmed on a gate-shut graph (the projection dichotomy's negative
//! direction).

use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tlkl::coxeter::{CoxeterGraph, Element, Group, Side};
use tlkl::hecke::Hecke;
use tlkl::table::{build_table, load_cache, save_cache, Family, PolyTable, RouteChoice};
use tlkl::tl::{LRoute, Tl};
use tlkl::verify::{run_suite, Suite, VerifyConfig};

#[derive(Parser)]
#[command(
    name = "tlkl",
    version,
    about = "Exact Kazhdan-Lusztig-style polynomial families for Hecke and \
             generalized Temperley-Lieb algebras of Coxeter groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List group elements with length, descent sets, and FC flag
    Enum(EnumArgs),
    /// Compute a single polynomial
    Poly(PolyArgs),
    /// Run an identity-verification suite
    Verify(VerifyArgs),
    /// Export the full (x, w) table of a family
    Table(TableArgs),
}

#[derive(Args)]
struct Common {
    /// Graph spec: A3, B4, D4, F4, H3, H4, I2(7), affA1, affA2, affB3,
    /// affC2, affF4, or custom:[[1,3],[3,1]] (0 = infinite bond)
    #[arg(long)]
    graph: String,
    /// Length bound for enumeration; required for infinite graphs
    #[arg(long)]
    max_length: Option<u32>,
    /// Directory holding the R/P cache file (kl-cache.tsv)
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct EnumArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PolyArgs {
    #[command(flatten)]
    common: Common,
    /// Family: R, P, D, a, or L
    #[arg(long)]
    family: String,
    /// Lower index, e.g. "2 3" (1-based generators, "e" for the identity)
    #[arg(long)]
    x: String,
    /// Upper index
    #[arg(long)]
    w: String,
    #[arg(long, value_enum, default_value_t = RouteArg::Main)]
    route: RouteArg,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Suite: r-identities, d-identities, a-identities, l-identities,
    /// projection, or all
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Nonzero seeds shuffle the tuple evaluation order
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    common: Common,
    /// Family: R, P, D, a, or L
    #[arg(long)]
    family: String,
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Main route or the independent verification route
    #[arg(long, value_enum, default_value_t = RouteArg::Main)]
    route: RouteArg,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Main,
    Oracle,
    Both,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}

/// Shared setup: parse the graph, resolve the length bound, build the
/// algebra contexts, and warm the cache.
struct Session {
    tl: Arc<Tl>,
    max_len: u32,
    cache_file: Option<PathBuf>,
}

impl Session {
    fn open(common: &Common) -> Result<Self, tlkl::Error> {
        let graph = CoxeterGraph::parse(&common.graph)?;
        let max_len = match common.max_length {
            Some(l) => l,
            None if graph.is_finite() => u32::MAX,
            None => {
                return Err(tlkl::Error::BadGraphSpec {
                    spec: common.graph.clone(),
                    reason: "--max-length is required for infinite (affine or custom) graphs"
                        .into(),
                })
            }
        };
        let group = Group::new(graph);
        let hecke = Hecke::new(group);
        let cache_file = common.cache.as_ref().map(|dir| dir.join("kl-cache.tsv"));
        if let Some(path) = &cache_file {
            let loaded = load_cache(path, &hecke)?;
            if loaded > 0 {
                eprintln!("loaded {loaded} cached entries from {}", path.display());
            }
        }
        Ok(Session {
            tl: Tl::new(hecke),
            max_len,
            cache_file,
        })
    }

    fn group(&self) -> &Arc<Group> {
        self.tl.group()
    }

    fn save_cache(&self) -> Result<(), tlkl::Error> {
        if let Some(path) = &self.cache_file {
            let written = save_cache(path, self.tl.hecke())?;
            eprintln!("saved {written} entries to {}", path.display());
        }
        Ok(())
    }
}

fn run(cli: Cli) -> Result<i32, tlkl::Error> {
    match cli.command {
        Command::Enum(args) => cmd_enum(args),
        Command::Poly(args) => cmd_poly(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Table(args) => cmd_table(args),
    }
}

fn write_out(out: &Option<PathBuf>, content: &str) -> Result<(), tlkl::Error> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| tlkl::Error::Io {
            path: path.display().to_string(),
            source: e,
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn descent_text(w: &Element, side: Side) -> String {
    let d: Vec<String> = w
        .descents(side)
        .into_iter()
        .map(|s| (s + 1).to_string())
        .collect();
    if d.is_empty() {
        "-".into()
    } else {
        d.join(";")
    }
}

fn cmd_enum(args: EnumArgs) -> Result<i32, tlkl::Error> {
    let session = Session::open(&args.common)?;
    let group = session.group().clone();
    let elements = group.enumerate_up_to(session.max_len)?;
    let fc_count = elements.iter().filter(|w| w.is_fully_commutative()).count();
    let complete = group.is_fully_enumerated();
    let mut out = String::new();
    match args.format {
        OutFormat::Text => {
            for w in &elements {
                out.push_str(&format!(
                    "{:<20} len={:<3} fc={:<5} right={:<8} left={}\n",
                    w.to_string(),
                    w.length(),
                    w.is_fully_commutative(),
                    descent_text(w, Side::Right),
                    descent_text(w, Side::Left),
                ));
            }
        }
        OutFormat::Csv => {
            out.push_str("word,length,fc,right_descents,left_descents\n");
            for w in &elements {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    w,
                    w.length(),
                    w.is_fully_commutative(),
                    descent_text(w, Side::Right),
                    descent_text(w, Side::Left),
                ));
            }
        }
        OutFormat::Json => {
            let rows: Vec<serde_json::Value> = elements
                .iter()
                .map(|w| {
                    serde_json::json!({
                        "word": w.to_string(),
                        "length": w.length(),
                        "fc": w.is_fully_commutative(),
                        "right_descents": w.descents(Side::Right).iter().map(|s| s + 1).collect::<Vec<_>>(),
                        "left_descents": w.descents(Side::Left).iter().map(|s| s + 1).collect::<Vec<_>>(),
                    })
                })
                .collect();
            out.push_str(&serde_json::to_string_pretty(&rows).expect("rows serialize"));
            out.push('\n');
        }
    }
    write_out(&args.out, &out)?;
    let size = if complete {
        format!("|W| = {}", elements.len())
    } else {
        format!(
            "{} elements of length <= {} (group truncated)",
            elements.len(),
            session.max_len
        )
    };
    eprintln!("{}: {size}, |W_c| = {fc_count}", group.graph());
    Ok(0)
}

fn cmd_poly(args: PolyArgs) -> Result<i32, tlkl::Error> {
    let session = Session::open(&args.common)?;
    let tl = &session.tl;
    let group = session.group().clone();
    let family = Family::from_str(&args.family).map_err(|reason| tlkl::Error::BadGraphSpec {
        spec: args.family.clone(),
        reason,
    })?;
    let x = group.parse_element(&args.x)?;
    let w = group.parse_element(&args.w)?;
    let hecke = tl.hecke();

    let main = |route_name: &mut String| -> Result<tlkl::laurent::LaurentPoly, tlkl::Error> {
        Ok(match family {
            Family::R => {
                *route_name = "recursion".into();
                hecke.r_poly(&x, &w)?
            }
            Family::P => {
                *route_name = "recursion".into();
                hecke.kl_poly(&x, &w)?
            }
            Family::D => {
                *route_name = "recursion".into();
                tl.d_rec(&x, &w)?
            }
            Family::A => {
                *route_name = "recursion".into();
                tl.a_rec(&x, &w)?
            }
            Family::L => {
                if tl.cw0_holds() {
                    *route_name = "closed".into();
                    tl.l_poly(&x, &w, LRoute::Closed)?
                } else {
                    *route_name = "ic-solve".into();
                    tl.l_poly(&x, &w, LRoute::IcSolve)?
                }
            }
        })
    };
    let oracle = |route_name: &mut String| -> Result<tlkl::laurent::LaurentPoly, tlkl::Error> {
        match family {
            Family::R | Family::P => Err(tlkl::Error::BadHypotheses {
                op: "poly --route oracle",
                reason: format!("family {family} has no independent oracle route"),
            }),
            Family::D => {
                *route_name = "via-kl".into();
                tl.d_via_kl(&x, &w)
            }
            Family::A => {
                *route_name = "via-hecke".into();
                tlkl::oracle::a_via_hecke(tl, &x, &w)
            }
            Family::L => {
                *route_name = "linear-solve".into();
                let cw = tlkl::oracle::ic_solve(tl, &w)?;
                Ok(cw.coeff(&x).mul_monomial(1, x.length() as i32))
            }
        }
    };

    let mut code = 0;
    match args.route {
        RouteArg::Main => {
            let mut name = String::new();
            let p = main(&mut name)?;
            println!("{p}  [route: {name}]");
        }
        RouteArg::Oracle => {
            let mut name = String::new();
            let p = oracle(&mut name)?;
            println!("{p}  [route: {name}]");
        }
        RouteArg::Both => {
            let (mut n1, mut n2) = (String::new(), String::new());
            let p1 = main(&mut n1)?;
            let p2 = oracle(&mut n2)?;
            println!("{p1}  [route: {n1}]");
            println!("{p2}  [route: {n2}]");
            if p1 == p2 {
                println!("routes agree");
            } else {
                println!("ROUTES DISAGREE");
                code = 1;
            }
        }
    }
    session.save_cache()?;
    Ok(code)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, tlkl::Error> {
    let session = Session::open(&args.common)?;
    let suite = Suite::from_str(&args.suite).map_err(|reason| tlkl::Error::BadGraphSpec {
        spec: args.suite.clone(),
        reason,
    })?;
    let cfg = VerifyConfig {
        max_len: session.max_len.min(1_000_000),
        threads: args.threads.max(1),
        seed: args.seed,
        ..VerifyConfig::default()
    };
    let report = run_suite(&session.tl, suite, &cfg)?;
    print!("{}", report.render_text());
    session.save_cache()?;
    Ok(report.exit_code())
}

fn cmd_table(args: TableArgs) -> Result<i32, tlkl::Error> {
    let session = Session::open(&args.common)?;
    let family = Family::from_str(&args.family).map_err(|reason| tlkl::Error::BadGraphSpec {
        spec: args.family.clone(),
        reason,
    })?;
    let choice = match args.route {
        RouteArg::Main => RouteChoice::Main,
        RouteArg::Oracle => RouteChoice::Oracle,
        RouteArg::Both => {
            return Err(tlkl::Error::BadHypotheses {
                op: "table",
                reason: "--route both is only available for poly; \
                         export one route per file"
                    .into(),
            })
        }
    };
    let table = build_table(&session.tl, family, session.max_len, choice)?;
    let content = render_table(&table, args.format);
    write_out(&args.out, &content)?;
    eprintln!(
        "{} rows for family {} on {}",
        table.rows.len(),
        table.family,
        table.graph
    );
    session.save_cache()?;
    Ok(0)
}

fn render_table(table: &PolyTable, format: OutFormat) -> String {
    match format {
        OutFormat::Json => table.to_json(),
        _ => table.to_csv(),
    }
}
