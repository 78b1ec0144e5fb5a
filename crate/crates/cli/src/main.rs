use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use law_core::algebra::{congruences_bruteforce, is_congruence_uniform, FiniteAlgebra};
use law_core::gallery::{self, Params};
use law_core::hierarchy::classes::{check_class_on, monotonicity_probe_on, InventoryModels};
use law_core::hierarchy::witness::find_protoalgebraic_witness_with;
use law_core::hierarchy::{recheck_class_witness, recheck_probe_witness, CheckOptions, Class};
use law_core::json::{
    algebra_from_value, logic_from_value, logic_to_value, matrix_from_value, matrix_to_value, sha256_hex,
    translation_from_value,
};
use law_core::logic::{FilterLattice, LogicPresentation};
use law_core::matrix::{leibniz_congruence, matrix_product, reduce};
use law_core::translation::{check_interpretation_bounded, recheck_interpretation_witness};
use law_core::verdict::Verdict;
use law_core::{Caps, Error, Matrix, Result, Subset};

#[derive(Parser)]
#[command(name = "law", version, about = "Leibniz congruences, filters and class checks for finite logical matrices")]
struct Cli {
    /// JSON file with caps; overrides LAW_CONFIG
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Include wall time in the report (reports are then no longer reproducible byte for byte)
    #[arg(long, global = true)]
    timing: bool,

    /// Re-verify any failure witness before reporting it
    #[arg(long, global = true)]
    recheck: bool,

    #[arg(long, global = true)]
    oracle_max: Option<usize>,

    #[arg(long, global = true)]
    product_max: Option<usize>,

    #[arg(long, global = true)]
    depth_default: Option<usize>,

    #[arg(long, global = true)]
    variable_budget: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Leibniz congruence of a matrix
    Leibniz {
        #[arg(short = 'm', long)]
        matrix: PathBuf,
    },
    /// Suszko congruence of a filter of a logic on an algebra
    Suszko {
        #[arg(short = 'l', long)]
        logic: PathBuf,
        #[arg(short = 'a', long)]
        algebra: PathBuf,
        /// Comma-separated elements, e.g. 0,3 (empty for the empty set)
        #[arg(long, allow_hyphen_values = true)]
        filter: String,
    },
    /// Deductive filters of a logic on an algebra
    Filters {
        #[arg(short = 'l', long)]
        logic: PathBuf,
        #[arg(short = 'a', long)]
        algebra: PathBuf,
    },
    /// Reduction of a matrix by its Leibniz congruence
    Reduce {
        #[arg(short = 'm', long)]
        matrix: PathBuf,
    },
    /// Non-indexed product of two logics or two matrices
    Product {
        #[arg(short = 'l', long = "logic")]
        logics: Vec<PathBuf>,
        #[arg(short = 'm', long = "matrix")]
        matrices: Vec<PathBuf>,
    },
    /// Bounded class check over an algebra inventory
    Check {
        /// One of the class names, or `monotonicity`
        class: String,
        #[arg(short = 'l', long)]
        logic: PathBuf,
        /// Algebra files or directories of algebra files
        #[arg(short = 'i', long = "inventory", num_args = 1..)]
        inventory: Vec<PathBuf>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 2)]
        max_set: usize,
    },
    /// Bounded interpretation check for a translation between two logics
    Interpret {
        #[arg(short = 't', long)]
        translation: PathBuf,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(short = 'i', long = "inventory", num_args = 1..)]
        inventory: Vec<PathBuf>,
    },
    /// Build a gallery entry and write its files
    Gallery {
        name: String,
        /// Entry parameter as key=value
        #[arg(long = "param")]
        params: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Brute-force oracles
    Oracle {
        #[command(subcommand)]
        what: OracleCommand,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Every congruence of an algebra by partition enumeration
    Congruences {
        #[arg(short = 'a', long)]
        algebra: PathBuf,
    },
}

/// Input files read during a run, with their content hashes.
#[derive(Default)]
struct Inputs {
    hashes: BTreeMap<String, String>,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<Value> {
        let bytes = std::fs::read(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        self.hashes.insert(path.display().to_string(), sha256_hex(&bytes));
        serde_json::from_slice(&bytes).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    fn algebra(&mut self, path: &Path) -> Result<FiniteAlgebra> {
        algebra_from_value(&self.read(path)?)
    }

    fn matrix(&mut self, path: &Path) -> Result<Matrix> {
        let v = self.read(path)?;
        if let Some(p) = v["algebra"]["path"].as_str() {
            self.read(&base_of(path).join(p))?;
        }
        matrix_from_value(&v, &base_of(path))
    }

    fn logic(&mut self, path: &Path, caps: &Caps) -> Result<LogicPresentation> {
        let v = self.read(path)?;
        let mut l = logic_from_value(&v, &base_of(path))?;
        if v.get("variable_budget").is_none() {
            l.variable_budget = caps.variable_budget;
        }
        Ok(l)
    }

    /// Algebras from files and directories; directory entries are taken in name order.
    fn inventory(&mut self, paths: &[PathBuf]) -> Result<Vec<FiniteAlgebra>> {
        let mut out = Vec::new();
        for p in paths {
            if p.is_dir() {
                let mut files: Vec<PathBuf> = std::fs::read_dir(p)
                    .map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|f| f.extension().is_some_and(|x| x == "json"))
                    .collect();
                files.sort();
                for f in files {
                    out.push(self.algebra(&f)?);
                }
            } else {
                out.push(self.algebra(p)?);
            }
        }
        if out.is_empty() {
            return Err(Error::BadParam("the inventory is empty".into()));
        }
        Ok(out)
    }
}

fn base_of(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn load_caps(cli: &Cli) -> Result<Caps> {
    let path = cli
        .config
        .clone()
        .or_else(|| std::env::var_os("LAW_CONFIG").map(PathBuf::from));
    let mut caps = match path {
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?
        }
        None => Caps::default(),
    };
    if let Some(v) = cli.oracle_max {
        caps.oracle_max = v;
    }
    if let Some(v) = cli.product_max {
        caps.product_max = v;
    }
    if let Some(v) = cli.depth_default {
        caps.depth_default = v;
    }
    if let Some(v) = cli.variable_budget {
        caps.variable_budget = v;
    }
    Ok(caps)
}

fn parse_filter(s: &str, n: usize) -> Result<Subset> {
    let mut f = Subset::empty();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let a: usize = part
            .parse()
            .map_err(|_| Error::Parse(format!("filter element `{part}` is not a number")))?;
        if a >= n {
            return Err(Error::Parse(format!("filter element {a} is outside the carrier of size {n}")));
        }
        f.insert(a);
    }
    Ok(f)
}

fn parse_params(raw: &[String]) -> Result<Params> {
    raw.iter()
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::BadParam(format!("expected key=value, got `{kv}`")))
        })
        .collect()
}

/// Outcome of a subcommand: result payload, exit code and a one-line summary.
struct Outcome {
    result: Value,
    code: u8,
    summary: String,
}

fn ok(result: Value, summary: String) -> Outcome {
    Outcome {
        result,
        code: 0,
        summary,
    }
}

fn verdict_outcome(v: &Verdict, extra: Value, recheck: Option<bool>) -> Outcome {
    let mut result = json!({ "verdict": v });
    if let (Value::Object(r), Value::Object(e)) = (&mut result, extra) {
        r.extend(e);
    }
    let mut code = if v.is_holds() { 0 } else { 1 };
    if let Some(passed) = recheck {
        result["recheck"] = json!(if passed { "passed" } else { "failed" });
        if !passed {
            code = 2;
        }
    }
    Outcome {
        summary: v.label().to_string(),
        result,
        code,
    }
}

fn run(cli: &Cli, caps: &Caps, inputs: &mut Inputs) -> Result<Outcome> {
    match &cli.command {
        Command::Leibniz { matrix } => {
            let m = inputs.matrix(matrix)?;
            let omega = leibniz_congruence(&m);
            let summary = format!("{} blocks", omega.num_blocks());
            Ok(ok(
                json!({
                    "algebra": m.algebra().name(),
                    "filter": m.filter(),
                    "partition": omega,
                    "reduced": omega.is_identity(),
                }),
                summary,
            ))
        }
        Command::Suszko { logic, algebra, filter } => {
            let l = inputs.logic(logic, caps)?;
            let a = inputs.algebra(algebra)?;
            let f = parse_filter(filter, a.size())?;
            let lattice = FilterLattice::new(&l, &a, caps)?;
            let s = lattice.suszko(&f)?;
            let summary = format!("{} blocks", s.num_blocks());
            Ok(ok(
                json!({
                    "algebra": a.name(),
                    "filter": f,
                    "partition": s,
                    "leibniz": lattice.omega(&f),
                    "suszko_reduced": s.is_identity(),
                    "filter_notion": lattice.notion(),
                }),
                summary,
            ))
        }
        Command::Filters { logic, algebra } => {
            let l = inputs.logic(logic, caps)?;
            let a = inputs.algebra(algebra)?;
            let lattice = FilterLattice::new(&l, &a, caps)?;
            let summary = format!("{} filters", lattice.filters().len());
            Ok(ok(
                json!({
                    "algebra": a.name(),
                    "filters": lattice.filters(),
                    "reduced_filters": lattice.reduced_filters(),
                    "filter_notion": lattice.notion(),
                }),
                summary,
            ))
        }
        Command::Reduce { matrix } => {
            let m = inputs.matrix(matrix)?;
            let (r, omega) = reduce(&m);
            let summary = format!("{} -> {} elements", m.size(), r.size());
            Ok(ok(json!({ "partition": omega, "reduced_matrix": matrix_to_value(&r) }), summary))
        }
        Command::Product { logics, matrices } => match (logics.as_slice(), matrices.as_slice()) {
            ([a, b], []) => {
                let l1 = inputs.logic(a, caps)?;
                let l2 = inputs.logic(b, caps)?;
                let p = gallery::product_of_logics(&l1, &l2, caps)?;
                let summary = format!("{} defining matrices", p.matrices().map_or(0, <[_]>::len));
                Ok(ok(json!({ "logic": logic_to_value(&p) }), summary))
            }
            ([], [a, b]) => {
                let m1 = inputs.matrix(a)?;
                let m2 = inputs.matrix(b)?;
                let p = matrix_product(&m1, &m2, caps)?;
                let summary = format!("{} elements", p.size());
                Ok(ok(json!({ "matrix": matrix_to_value(&p) }), summary))
            }
            _ => Err(Error::BadParam("product takes exactly two -l files or two -m files".into())),
        },
        Command::Check {
            class,
            logic,
            inventory,
            depth,
            max_set,
        } => {
            let l = inputs.logic(logic, caps)?;
            let inv = inputs.inventory(inventory)?;
            let opts = CheckOptions {
                depth: depth.unwrap_or(caps.depth_default),
                max_set: *max_set,
                caps: *caps,
            };
            let models = InventoryModels::new(&l, &inv, caps)?;
            if class == "monotonicity" {
                let v = monotonicity_probe_on(&models, models.bounds(&l));
                let recheck = match (cli.recheck, v.witness()) {
                    (true, Some(w)) => Some(recheck_probe_witness(&l, w, caps)?),
                    _ => None,
                };
                return Ok(verdict_outcome(&v, json!({ "class": class }), recheck));
            }
            let c: Class = class.parse()?;
            let v = check_class_on(c, &l, &models, &opts)?;
            let mut extra = json!({ "class": class });
            if c == Class::Protoalgebraic {
                let w = find_protoalgebraic_witness_with(&models.consequence(&l), opts.depth, opts.max_set, caps)?;
                extra["witness"] = json!(w);
            }
            let recheck = match (cli.recheck, v.witness()) {
                (true, Some(w)) => Some(recheck_class_witness(c, &l, w, caps)?),
                _ => None,
            };
            Ok(verdict_outcome(&v, extra, recheck))
        }
        Command::Interpret {
            translation,
            from,
            to,
            inventory,
        } => {
            let tau = translation_from_value(&inputs.read(translation)?)?;
            let source = inputs.logic(from, caps)?;
            let target = inputs.logic(to, caps)?;
            let inv = inputs.inventory(inventory)?;
            let v = check_interpretation_bounded(&tau, &source, &target, &inv, caps)?;
            let recheck = match (cli.recheck, v.witness()) {
                (true, Some(w)) => Some(recheck_interpretation_witness(&source, w, caps)?),
                _ => None,
            };
            Ok(verdict_outcome(&v, json!({}), recheck))
        }
        Command::Gallery { name, params, out } => {
            let entry = gallery::build(name, &parse_params(params)?, caps)?;
            let mut written = Vec::new();
            for (rel, value) in entry.files() {
                let path = out.join(&rel);
                if let Some(dir) = path.parent() {
                    std::fs::create_dir_all(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
                }
                let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
                std::fs::write(&path, text + "\n").map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                written.push(rel.display().to_string());
            }
            let outcomes = gallery::verify_entry(&entry, caps)?;
            let passed = outcomes.iter().filter(|o| o.passed).count();
            let code = if passed == outcomes.len() { 0 } else { 1 };
            Ok(Outcome {
                summary: format!("{} files, {passed}/{} expectations hold", written.len(), outcomes.len()),
                result: json!({
                    "entry": entry.name,
                    "files": written,
                    "expectations": outcomes,
                    "notes": entry.notes,
                }),
                code,
            })
        }
        Command::Oracle {
            what: OracleCommand::Congruences { algebra },
        } => {
            let a = inputs.algebra(algebra)?;
            let cons = congruences_bruteforce(&a, caps)?;
            let uniform = is_congruence_uniform(&a, caps)?;
            Ok(ok(
                json!({
                    "algebra": a.name(),
                    "count": cons.len(),
                    "congruences": cons,
                    "uniform": uniform,
                }),
                format!("{} congruences", cons.len()),
            ))
        }
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let report = json!({ "command": argv, "error": e.to_string().trim_end(), "status": "error" });
            emit(&report);
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    let mut inputs = Inputs::default();
    let outcome = load_caps(&cli).and_then(|caps| run(&cli, &caps, &mut inputs).map(|o| (o, caps)));
    let mut report = json!({ "command": argv, "inputs": inputs.hashes });
    let code = match outcome {
        Ok((o, caps)) => {
            report["caps"] = json!(caps);
            report["result"] = o.result;
            report["status"] = json!("ok");
            eprintln!("{}", o.summary);
            o.code
        }
        Err(e) => {
            report["status"] = json!("error");
            report["error"] = json!(e.to_string());
            eprintln!("error: {e}");
            2
        }
    };
    if cli.timing {
        report["wall_time_ms"] = json!(start.elapsed().as_secs_f64() * 1000.0);
    }
    emit(&report);
    ExitCode::from(code)
}

fn emit(report: &Value) {
    let text = serde_json::to_string_pretty(report).expect("JSON values serialize");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}
