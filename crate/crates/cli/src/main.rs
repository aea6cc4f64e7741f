//! `dessin`: exact correlators, EO forms and verification suites from the command line.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dessin_core::airy::{local_identity_check, times_json, Branch, LocalIdentity};
use dessin_core::closed_forms::{catalog_check, dessin_closed_series, gf_identity_check, CatalogKey, DessinForm, IdentityName};
use dessin_core::eo::{verify_main_theorem_with, EoEngine};
use dessin_core::properties::partitions;
use dessin_core::report::{Status, VerificationReport};
use dessin_core::suites::{operator_form_report, run_suites, RunOptions, Suite, DEFAULT_BUDGET, DEFAULT_SEED};
use dessin_core::virasoro::{CorrelatorTable, Strategy, VirasoroEngine};

const CACHE_ENV: &str = "DESSIN_CACHE_DIR";
const CACHE_FILE: &str = "correlators.json";

#[derive(Parser)]
#[command(name = "dessin", version, about = "Exact dessin correlators, Eynard-Orantin forms and identity checks")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Cache directory; overrides DESSIN_CACHE_DIR, which overrides ./.dessin-cache.
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Bare or weighted correlator <p_a1 ... p_an>_g.
    Correlator {
        #[arg(long)]
        genus: u32,
        /// Comma-separated positive parts.
        #[arg(long, value_delimiter = ',', required = true)]
        parts: Vec<u32>,
        /// Multiply by the product of the parts.
        #[arg(long)]
        weighted: bool,
    },
    /// n-point function G_{g,n} from the Virasoro recursion.
    Npoint {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        order: u32,
    },
    /// Eynard-Orantin form w_{g,n} in the global coordinate.
    Eo {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        n: usize,
    },
    /// Expansion of a closed-form n-point function.
    Expand {
        #[arg(long)]
        which: String,
        #[arg(long)]
        order: u32,
    },
    /// Coefficients of y in a local coordinate at a branch point.
    Times {
        #[arg(long)]
        branch: String,
        #[arg(long)]
        order: u32,
    },
    /// Generating-function, local-kernel and catalog identities.
    Identity {
        #[arg(long, required_unless_present = "list")]
        name: Option<String>,
        #[arg(long, default_value_t = 8)]
        order: u32,
        #[arg(long)]
        list: bool,
    },
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Inspect or manage the correlator cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// `all` runs every suite.
    #[arg(value_name = "all")]
    target: Option<String>,
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    g: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    order: Option<u32>,
    /// Suites needing a larger order are skipped.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u32,
    /// Omit randomized checks and zero all timings, for byte-identical reruns.
    #[arg(long)]
    seedless: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    list: bool,
}

#[derive(Subcommand)]
enum CacheAction {
    /// Print the resolved cache file.
    Path,
    /// Number of stored correlators.
    Stats,
    /// Delete the cache file.
    Clear,
    /// Fill the cache with every partition up to a sum, for genera 0..=genus.
    Warm {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        max_sum: u32,
    },
}

enum Failure {
    Usage(String),
    Verification(Value),
}

type Outcome = Result<Value, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn cache_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    match std::env::var_os(CACHE_ENV) {
        Some(d) if !d.is_empty() => PathBuf::from(d),
        _ => PathBuf::from(".dessin-cache"),
    }
}

struct Cache {
    file: PathBuf,
}

impl Cache {
    fn load_engine(&self) -> VirasoroEngine {
        let table = if self.file.exists() {
            CorrelatorTable::load(&self.file).unwrap_or_else(|e| {
                eprintln!("warning: ignoring cache {}: {e}", self.file.display());
                CorrelatorTable::new()
            })
        } else {
            CorrelatorTable::new()
        };
        VirasoroEngine::with_table(table, Strategy::Largest)
    }

    fn store(&self, engine: VirasoroEngine) {
        if let Err(e) = engine.into_table().save(&self.file) {
            eprintln!("warning: could not write cache {}: {e}", self.file.display());
        }
    }
}

fn stable(g: u32, n: usize) -> Result<(), Failure> {
    if n == 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(usage(format!("(g, n) = ({g}, {n}) is not stable; need n >= 1 and 2g - 2 + n > 0")));
    }
    Ok(())
}

fn reports_value(reports: &[VerificationReport]) -> Value {
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    json!({
        "reports": reports,
        "summary": { "passed": count(Status::Pass), "failed": count(Status::Fail), "skipped": count(Status::Skipped) },
    })
}

fn verdict(value: Value, failed: bool) -> Outcome {
    if failed {
        Err(Failure::Verification(value))
    } else {
        Ok(value)
    }
}

fn single(report: VerificationReport) -> Outcome {
    let failed = report.status == Status::Fail;
    verdict(serde_json::to_value(&report).expect("serializable"), failed)
}

fn identity_names() -> Vec<String> {
    let mut names: Vec<String> = IdentityName::ALL.iter().map(|n| n.as_str().to_string()).collect();
    names.extend(LocalIdentity::ALL.iter().map(|n| n.as_str().to_string()));
    names.extend(CatalogKey::all().iter().map(|k| k.name()));
    names
}

fn run_identity(name: &str, order: u32) -> Outcome {
    if let Ok(n) = name.parse::<IdentityName>() {
        return single(gf_identity_check(n, order));
    }
    if let Ok(n) = name.parse::<LocalIdentity>() {
        return single(local_identity_check(n, order));
    }
    if let Ok(k) = name.parse::<CatalogKey>() {
        return single(catalog_check(k, order));
    }
    Err(usage(format!("unknown identity {name:?}; valid: {}", identity_names().join(", "))))
}

fn run_verify(args: &VerifyArgs, cache: &Cache) -> Outcome {
    if args.list {
        let list: Vec<Value> = Suite::ALL
            .iter()
            .map(|s| json!({ "suite": s.name(), "criterion": s.criterion(), "order": s.order(), "description": s.description() }))
            .collect();
        return Ok(json!({ "suites": list }));
    }
    let name = match (&args.target, &args.suite) {
        (Some(t), None) if t == "all" => "all".to_string(),
        (Some(t), None) => return Err(usage(format!("unexpected argument {t:?}; use `verify all` or `verify --suite NAME`"))),
        (None, Some(s)) => s.clone(),
        (Some(_), Some(_)) => return Err(usage("give either `all` or --suite, not both")),
        (None, None) => return Err(usage("missing suite; use `verify all`, `verify --suite NAME` or `verify --list`")),
    };
    let opts = RunOptions { budget: args.budget, seedless: args.seedless, seed: args.seed };
    let suites: Vec<Suite> = if name == "all" {
        Suite::ALL.to_vec()
    } else {
        let suite: Suite = name.parse().map_err(usage)?;
        let parametric = args.g.is_some() || args.n.is_some() || args.order.is_some();
        if parametric {
            let (Some(g), Some(n)) = (args.g, args.n) else {
                return Err(usage("--g and --n must be given together"));
            };
            stable(g, n)?;
            let order = args.order.unwrap_or(10);
            let mut report = match suite {
                Suite::MainTheorem => {
                    let mut vir = cache.load_engine();
                    let r = verify_main_theorem_with(&mut EoEngine::new(), &mut vir, g, n, order);
                    cache.store(vir);
                    r
                }
                Suite::OperatorForm => operator_form_report(g, n, order),
                _ => return Err(usage(format!("suite {name} takes no --g/--n/--order"))),
            };
            if args.seedless {
                report.elapsed_ms = 0;
            }
            return single(report);
        }
        vec![suite]
    };
    let results = run_suites(&suites, &opts, args.jobs);
    let reports: Vec<VerificationReport> = results.into_iter().flat_map(|(_, r)| r).collect();
    let failed = reports.iter().any(|r| r.status == Status::Fail);
    verdict(reports_value(&reports), failed)
}

fn run(cli: &Cli) -> Outcome {
    let cache = Cache { file: cache_dir(cli.cache.as_deref()).join(CACHE_FILE) };
    match &cli.command {
        Command::Correlator { genus, parts, weighted } => {
            if parts.contains(&0) {
                return Err(usage("parts must be positive"));
            }
            let mut e = cache.load_engine();
            let poly = if *weighted { e.weighted(*genus, parts) } else { e.raw(*genus, parts) };
            cache.store(e);
            Ok(json!({ "genus": genus, "parts": parts, "weighted": weighted, "poly": poly, "text": poly.to_text() }))
        }
        Command::Npoint { genus, n, order } => {
            if *n == 0 {
                return Err(usage("--n must be positive"));
            }
            let mut e = cache.load_engine();
            let series = e.npoint_series(*genus, *n, *order).map_err(|e| usage(e.to_string()))?;
            cache.store(e);
            Ok(series.to_json())
        }
        Command::Eo { genus, n } => {
            stable(*genus, *n)?;
            let form = EoEngine::new().omega(*genus, *n).map_err(|e| usage(e.to_string()))?;
            let mut v = form.to_json();
            v["text"] = json!(form.poly.to_text());
            Ok(v)
        }
        Command::Expand { which, order } => {
            let form: DessinForm = which.parse().map_err(usage)?;
            let series = dessin_closed_series(form, *order).map_err(|e| usage(e.to_string()))?;
            let mut v = series.to_json();
            v["which"] = json!(form.to_string());
            Ok(v)
        }
        Command::Times { branch, order } => {
            let branch: Branch = branch.parse().map_err(usage)?;
            if *order < 1 {
                return Err(usage("--order must be at least 1"));
            }
            Ok(times_json(branch, *order))
        }
        Command::Identity { name, order, list } => {
            if *list {
                return Ok(json!({ "identities": identity_names() }));
            }
            run_identity(name.as_deref().unwrap_or_default(), *order)
        }
        Command::Verify(args) => run_verify(args, &cache),
        Command::Cache { action } => match action {
            CacheAction::Path => Ok(json!({ "path": cache.file.display().to_string() })),
            CacheAction::Stats => {
                let entries = if cache.file.exists() {
                    CorrelatorTable::load(&cache.file).map_err(|e| usage(e.to_string()))?.len()
                } else {
                    0
                };
                Ok(json!({ "path": cache.file.display().to_string(), "exists": cache.file.exists(), "entries": entries }))
            }
            CacheAction::Clear => {
                let existed = cache.file.exists();
                if existed {
                    std::fs::remove_file(&cache.file).map_err(|e| usage(e.to_string()))?;
                }
                Ok(json!({ "path": cache.file.display().to_string(), "removed": existed }))
            }
            CacheAction::Warm { genus, max_sum } => {
                let mut e = cache.load_engine();
                for g in 0..=*genus {
                    for p in partitions(*max_sum) {
                        e.raw(g, &p);
                    }
                }
                let entries = e.table().len();
                cache.store(e);
                Ok(json!({ "path": cache.file.display().to_string(), "entries": entries }))
            }
        },
    }
}

/// Human rendering: report summary lines, or `key: value` lines for other objects.
fn render_text(v: &Value) -> String {
    if let Ok(r) = serde_json::from_value::<VerificationReport>(v.clone()) {
        return r.summary_line();
    }
    if let Some(reports) = v.get("reports").and_then(|r| r.as_array()) {
        let mut out: Vec<String> = reports
            .iter()
            .filter_map(|r| serde_json::from_value::<VerificationReport>(r.clone()).ok())
            .map(|r| r.summary_line())
            .collect();
        let s = &v["summary"];
        out.push(format!("{} passed, {} failed, {} skipped", s["passed"], s["failed"], s["skipped"]));
        return out.join("\n");
    }
    if let Some(text) = v.get("text").and_then(|t| t.as_str()) {
        return text.to_string();
    }
    if let Some(coeffs) = v.get("coefficients").and_then(|c| c.as_array()) {
        return coeffs
            .iter()
            .map(|c| {
                let poly: dessin_core::algebra::LaurentPolynomial =
                    serde_json::from_value(c["poly"].clone()).expect("polynomial json");
                format!("{}: {}", c["parts"], poly.to_text())
            })
            .collect::<Vec<_>>()
            .join("\n");
    }
    if let Some(suites) = v.get("suites").and_then(|s| s.as_array()) {
        return suites
            .iter()
            .map(|s| format!("{:>2}  {:<20} order={:<3} {}", s["criterion"], s["suite"].as_str().unwrap_or(""), s["order"], s["description"].as_str().unwrap_or("")))
            .collect::<Vec<_>>()
            .join("\n");
    }
    if let Some(times) = v.get("times").and_then(|t| t.as_array()) {
        return times.iter().map(|t| format!("xi^{}: {}", t["k"], t["text"].as_str().unwrap_or(""))).collect::<Vec<_>>().join("\n");
    }
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, x)| match x {
                Value::String(s) => format!("{k}: {s}"),
                Value::Array(items) => format!(
                    "{k}:\n{}",
                    items.iter().map(|i| format!("  {}", i.as_str().map(String::from).unwrap_or_else(|| i.to_string()))).collect::<Vec<_>>().join("\n")
                ),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}

fn emit(format: Format, v: &Value) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).expect("json")),
        Format::Text => println!("{}", render_text(v)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(v) => {
            emit(cli.format, &v);
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(v)) => {
            emit(cli.format, &v);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("usage: dessin [--format json|text] [--cache PATH] <command> [options]; see `dessin --help`");
            ExitCode::from(2)
        }
    }
}
