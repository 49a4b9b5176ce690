//! Command-line front end: build, count, verify, analyze, entropy.
//!
//! Exit codes: 0 success, 1 verification or runtime failure, 2 usage
//! error, 3 resource limit, 4 method disagreement. All output is
//! deterministic; JSON is the machine format and text output is
//! line-stable.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use crate::error::Error;
use crate::graph::{ExportFormat, MGraph};
use crate::verify::{Fault, VerifyConfig};
use crate::{analysis, count, kirchhoff, verify};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_DISAGREEMENT: i32 = 4;

#[derive(Parser)]
#[command(
    name = "mgraph",
    version,
    about = "Exact spanning-tree counts and structural analysis of the M(t) graph family",
    after_help = "Exit codes: 0 ok, 1 check failure, 2 usage, 3 resource limit, 4 method disagreement.\n\
                  MGRAPH_MAX_T overrides every resource limit."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BuildFormat {
    #[value(alias = "edge-list")]
    Edgelist,
    Dot,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Recurrence,
    ClosedForm,
    Kirchhoff,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextOrJson {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Construct M(t); print a size summary or export the graph
    Build {
        /// Iteration index
        #[arg(long)]
        t: u32,
        /// Export format; without it only the size summary is printed
        #[arg(long, value_enum)]
        format: Option<BuildFormat>,
        /// Write the export to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count spanning trees of M(t)
    Count {
        #[arg(long)]
        t: u32,
        /// Counting route; `all` cross-checks every applicable one
        #[arg(long, value_enum, default_value_t = Method::Recurrence)]
        method: Method,
        /// Report the count modulo this prime
        #[arg(long)]
        modulus: Option<u64>,
        /// Print only the decimal digit count of s(t)
        #[arg(long)]
        digits_only: bool,
        #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
        format: TextOrJson,
    },
    /// Run the full cross-check battery
    Verify {
        /// Largest level for the graph-based checks
        #[arg(long, default_value_t = 6)]
        t_max: u32,
        #[arg(long, value_enum, default_value_t = TextOrJson::Json)]
        format: TextOrJson,
        /// Test hook: inject a construction fault (drop-edge)
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Measure structural metrics of M(t)
    Analyze {
        #[arg(long)]
        t: u32,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spanning-tree entropy at level t
    Entropy {
        #[arg(long)]
        t: u32,
        /// Decimal digits of the reported value (min 10)
        #[arg(long, default_value_t = 30)]
        precision: u32,
        /// Append the comparison table of reference families
        #[arg(long)]
        compare: bool,
        #[arg(long, value_enum, default_value_t = TextOrJson::Text)]
        format: TextOrJson,
    },
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::ResourceLimit { .. } => EXIT_RESOURCE,
        Error::UnsupportedFormat(_)
        | Error::IdenticalVertices(_)
        | Error::VertexOutOfRange(_)
        | Error::LevelTooSmall { .. }
        | Error::PrecisionTooSmall(_)
        | Error::NonPrimeModulus(_)
        | Error::DegenerateDegrees(_) => EXIT_USAGE,
        Error::Disconnected
        | Error::IrrationalResidue { .. }
        | Error::NonIntegerProduct { .. }
        | Error::Io(_) => EXIT_FAILURE,
    }
}

/// Parses argv and runs one command, returning the process exit code.
/// Usage errors exit directly through clap with code 2.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn dispatch(command: Command) -> crate::Result<i32> {
    match command {
        Command::Build { t, format, out } => cmd_build(t, format, out),
        Command::Count { t, method, modulus, digits_only, format } => {
            cmd_count(t, method, modulus, digits_only, format)
        }
        Command::Verify { t_max, format, inject_fault } => {
            cmd_verify(t_max, format, inject_fault)
        }
        Command::Analyze { t, format, out } => cmd_analyze(t, format, out),
        Command::Entropy { t, precision, compare, format } => {
            cmd_entropy(t, precision, compare, format)
        }
    }
}

fn write_artifact(bytes: &[u8], out: Option<&PathBuf>) -> crate::Result<bool> {
    match out {
        Some(path) => {
            std::fs::write(path, bytes)?;
            Ok(true)
        }
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(false)
        }
    }
}

fn cmd_build(t: u32, format: Option<BuildFormat>, out: Option<PathBuf>) -> crate::Result<i32> {
    let g = MGraph::build(t)?;
    let summary = format!("V={} E={}", g.vertex_count(), g.edge_count());
    let export = format.map(|f| match f {
        BuildFormat::Edgelist => ExportFormat::EdgeList,
        BuildFormat::Dot => ExportFormat::Dot,
        BuildFormat::Json => ExportFormat::Json,
    });
    match export {
        None => {
            if let Some(path) = &out {
                std::fs::write(path, g.export(ExportFormat::EdgeList))?;
            }
            println!("{summary}");
        }
        Some(fmt) => {
            let to_file = write_artifact(&g.export(fmt), out.as_ref())?;
            if to_file {
                println!("{summary}");
            } else {
                // artifact owns stdout; keep it byte-clean
                eprintln!("{summary}");
            }
        }
    }
    Ok(EXIT_OK)
}

fn validated_modulus(modulus: Option<u64>) -> crate::Result<Option<u64>> {
    match modulus {
        None => Ok(None),
        Some(p) => {
            if p >= (1 << 31) || !kirchhoff::is_prime_u64(p) {
                return Err(Error::NonPrimeModulus(p));
            }
            Ok(Some(p))
        }
    }
}

fn cmd_count(
    t: u32,
    method: Method,
    modulus: Option<u64>,
    digits_only: bool,
    format: TextOrJson,
) -> crate::Result<i32> {
    let modulus = validated_modulus(modulus)?;
    let materialize_limit = count::max_materialize_t();

    // value per method, as decimal strings for uniform comparison
    let mut values: BTreeMap<&'static str, String> = BTreeMap::new();
    let mut digits: Option<u64> = None;

    let digits_path = digits_only || (modulus.is_none() && t > materialize_limit);
    if digits_path {
        if method != Method::Recurrence && method != Method::All {
            return Err(Error::ResourceLimit { t, limit: materialize_limit });
        }
        digits = Some(if t == 0 {
            1
        } else {
            count::entropy(t, 12)?.digits
        });
    }

    let run_recurrence = matches!(method, Method::Recurrence | Method::All);
    let run_product = matches!(method, Method::ClosedForm | Method::All) && t >= 1;
    let run_kirchhoff = matches!(method, Method::Kirchhoff | Method::All);

    if !digits_path {
        if run_recurrence {
            let v = match modulus {
                Some(p) => count::spanning_tree_count_mod(t, p).to_string(),
                None => count::spanning_tree_count(t).to_string(),
            };
            values.insert("recurrence", v);
        }
        if run_product {
            if t > materialize_limit {
                if method == Method::ClosedForm {
                    return Err(Error::ResourceLimit { t, limit: materialize_limit });
                }
            } else {
                let full = count::spanning_tree_count_product(t)?;
                let v = match modulus {
                    Some(p) => (full % BigUint::from(p)).to_string(),
                    None => full.to_string(),
                };
                values.insert("closed-form", v);
            }
        }
        if run_kirchhoff {
            let limit = match modulus {
                Some(_) => kirchhoff::max_mod_t(),
                None => kirchhoff::max_exact_t(),
            };
            if t > limit {
                if method == Method::Kirchhoff {
                    return Err(Error::ResourceLimit { t, limit });
                }
            } else {
                let g = MGraph::build(t)?;
                let v = match modulus {
                    Some(p) => kirchhoff::count_trees_mod(&g, p).to_string(),
                    None => kirchhoff::count_trees(&g)?.to_string(),
                };
                values.insert("kirchhoff", v);
            }
        }
    }

    let mut agreement = true;
    if values.len() > 1 {
        let first = values.values().next().expect("nonempty");
        agreement = values.values().all(|v| v == first);
    }

    match format {
        TextOrJson::Text => {
            if method == Method::All {
                println!("t={t}");
                if let Some(p) = modulus {
                    println!("modulus={p}");
                }
                for (name, v) in &values {
                    println!("{name}={v}");
                }
                if let Some(d) = digits {
                    println!("digits={d}");
                }
                if !values.is_empty() {
                    println!("agreement={}", if agreement { "ok" } else { "MISMATCH" });
                }
            } else if let Some(d) = digits {
                println!("digits={d}");
            } else {
                // bare value for single-method runs
                println!("{}", values.values().next().expect("one method ran"));
            }
        }
        TextOrJson::Json => {
            let doc = serde_json::json!({
                "t": t,
                "modulus": modulus,
                "values": values,
                "digits": digits,
                "agreement": agreement,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
    }

    if !agreement {
        return Ok(EXIT_DISAGREEMENT);
    }
    Ok(EXIT_OK)
}

fn cmd_verify(t_max: u32, format: TextOrJson, inject_fault: Option<String>) -> crate::Result<i32> {
    let fault = match inject_fault {
        Some(s) => Some(s.parse::<Fault>()?),
        None => None,
    };
    let checks = verify::run_checks(&VerifyConfig { t_max, fault });
    let failed = checks.iter().filter(|c| !c.passed).count();
    match format {
        TextOrJson::Json => {
            let doc = serde_json::json!({
                "t_max": t_max,
                "checks": checks,
                "passed": checks.len() - failed,
                "failed": failed,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        TextOrJson::Text => {
            for c in &checks {
                println!("{} {} - {}", if c.passed { "ok  " } else { "FAIL" }, c.id, c.detail);
            }
            println!("passed {}/{}", checks.len() - failed, checks.len());
        }
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_analyze(t: u32, format: ReportFormat, out: Option<PathBuf>) -> crate::Result<i32> {
    let g = MGraph::build(t)?;
    let report = analysis::analyze(&g);
    let rendered = match format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Csv => report.to_csv(),
        ReportFormat::Text => report.to_text(),
    };
    write_artifact(rendered.as_bytes(), out.as_ref())?;
    Ok(EXIT_OK)
}

fn cmd_entropy(t: u32, precision: u32, compare: bool, format: TextOrJson) -> crate::Result<i32> {
    let estimate = count::entropy(t, precision)?;
    let table = if compare { Some(analysis::entropy_table()) } else { None };
    match format {
        TextOrJson::Text => {
            println!("t={t}");
            println!("h={}", estimate.h);
            println!("s_digits={}", estimate.digits);
            if let Some(rows) = &table {
                println!("family entropy source");
                for row in rows {
                    let shown = if row.family == "M(t)" {
                        format!("{:.6}", row.entropy)
                    } else {
                        format!("{:.3}", row.entropy)
                    };
                    println!("{} {} ({})", row.family, shown, row.source);
                }
            }
        }
        TextOrJson::Json => {
            let doc = serde_json::json!({
                "t": t,
                "h": estimate.h.to_string(),
                "h_f64": estimate.h_f64(),
                "s_digits": estimate.digits,
                "comparison": table,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
    }
    Ok(EXIT_OK)
}
