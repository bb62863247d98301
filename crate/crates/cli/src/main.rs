mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use quasimod::diffring::{differentiate, ideal_generators, semisym_ideal_generators, DiffError, IdentityPair};
use quasimod::modext::{build_extension, check_module, verify_extension, ModError, ModuleAssignment};
use quasimod::mts::{search_with_stats, MendelsohnTripleSystem, MtsError, DEFAULT_SEARCH_BUDGET};
use quasimod::qg::{Axiom, FiniteQuasigroup, DEFAULT_TABLE_CAP};
use quasimod::semisym::semisymmetrize;
use quasimod::stabilizer::{schreier_basis, StabilizerError};
use quasimod::words::{Normalizer, Term, Variety};

use report::{Report, Status};

#[derive(Parser)]
#[command(name = "quasimod", version, about = "Finite semisymmetric quasigroups, triple systems and their modules")]
struct Cli {
    /// Print the report as JSON
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the quasigroup axioms, semisymmetry and idempotence of a table
    Check { file: PathBuf },
    /// Build the semisymmetrization on Q^3
    Semisymmetrize {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Largest order allowed for the result
        #[arg(long, default_value_t = DEFAULT_TABLE_CAP)]
        cap: usize,
    },
    /// Search for a Mendelsohn triple system on n points
    MtsSearch {
        n: usize,
        /// Node budget for the backtracking search
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert a triple system (JSON) to its quasigroup table
    MtsToQg {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert an idempotent semisymmetric table to its triple system
    QgToMts {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the free basis of the stabilizer of a base point
    StabilizerBasis {
        file: PathBuf,
        #[arg(long)]
        base: Option<String>,
    },
    /// Print the generators of the representation ideal
    Ideal {
        file: PathBuf,
        #[arg(long)]
        base: Option<String>,
        #[arg(long, default_value = "P")]
        variety: Variety,
    },
    /// Check that a matrix module is annihilated by the ideal
    ModuleCheck {
        file: PathBuf,
        module: PathBuf,
        #[arg(long)]
        base: Option<String>,
    },
    /// Build and verify the extension of a quasigroup by a matrix module
    Extend {
        file: PathBuf,
        module: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TABLE_CAP)]
        cap: usize,
    },
    /// Reduce a word in Q[X] to normal form
    NormalizeWord {
        file: PathBuf,
        word: String,
        #[arg(long, default_value = "P")]
        variety: Variety,
    },
    /// Differentiate a word in variables into the group ring
    Differentiate {
        file: PathBuf,
        word: String,
        /// Comma-separated variable names, in order
        #[arg(long, value_delimiter = ',', required = true)]
        vars: Vec<String>,
        /// Variable to differentiate by
        #[arg(long)]
        wrt: String,
        /// Comma-separated elements substituted for the variables
        #[arg(long, value_delimiter = ',', required = true)]
        at: Vec<String>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_qg(path: &Path) -> Result<FiniteQuasigroup> {
    FiniteQuasigroup::parse_text(&read(path)?).with_context(|| format!("invalid quasigroup file {}", path.display()))
}

fn element(q: &FiniteQuasigroup, name: &str) -> Result<usize> {
    q.index_of(name).ok_or_else(|| anyhow!("unknown element {name:?}"))
}

fn base_point(q: &FiniteQuasigroup, base: Option<&str>) -> Result<usize> {
    base.map_or(Ok(0), |b| element(q, b))
}

/// Writes `text` to `output`, or attaches it as the report body.
fn deliver(report: Report, text: String, output: Option<&Path>) -> Result<Report> {
    match output {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("cannot write {}", path.display()))?;
            Ok(report.with("written", path.display().to_string()))
        }
        None => Ok(report.body(text)),
    }
}

fn pair(q: &FiniteQuasigroup, (x, y): (usize, usize)) -> Value {
    json!([q.label(x), q.label(y)])
}

fn not_semisymmetric(command: &'static str, q: &FiniteQuasigroup) -> Report {
    let witness = q.semisymmetry_witness().expect("called on a non-semisymmetric table");
    Report::fail(command).with("reason", "not semisymmetric").with("witness", pair(q, witness))
}

fn check(file: &Path) -> Result<Report> {
    let q = load_qg(file)?;
    let axioms = q.check_axioms();
    let semisym = q.is_semisymmetric();
    let mut report = Report::new("check", if semisym { Status::Ok } else { Status::Fail }).with("order", q.order());
    for a in [Axiom::IL, Axiom::IR, Axiom::SL, Axiom::SR] {
        report = report.with(&a.to_string(), axioms.get(a).counterexample.is_none());
    }
    report = report.with("semisymmetric", semisym).with("idempotent", q.is_idempotent());
    if let Some(w) = q.semisymmetry_witness() {
        report = report.with("witness", pair(&q, w));
    }
    Ok(report)
}

fn mts_failure(command: &'static str, q: &FiniteQuasigroup, err: MtsError) -> Result<Report> {
    let report = Report::fail(command).with("reason", err.to_string());
    Ok(match err {
        MtsError::NotIdempotent => {
            let x = q.elements().find(|&x| q.mul(x, x) != x).expect("some element is not idempotent");
            report.with("witness", q.label(x))
        }
        MtsError::NotSemisymmetric => report.with("witness", pair(q, q.semisymmetry_witness().expect("witness"))),
        MtsError::OrderTooSmall(n) => report.with("witness", n),
        MtsError::Invalid(v) => report.with("witness", serde_json::to_value(v)?),
        other => bail!(other),
    })
}

fn mts_search(n: usize, budget: u64, output: Option<&Path>) -> Result<Report> {
    let (found, stats) = search_with_stats(n, budget)?;
    match found {
        Some(mts) => {
            let report =
                Report::ok("mts-search").with("n", n).with("triples", mts.triples().len()).with("nodes", stats.nodes);
            deliver(report, mts.to_json(), output)
        }
        None => Ok(Report::fail("mts-search")
            .with("n", n)
            .with("reason", "no triple system exists (search exhausted)")
            .with("witness", json!({ "exhausted": true, "nodes": stats.nodes }))),
    }
}

fn mts_to_qg(file: &Path, output: Option<&Path>) -> Result<Report> {
    let mts = MendelsohnTripleSystem::from_json(&read(file)?).context("invalid triple system JSON")?;
    match mts.to_quasigroup() {
        Ok(q) => deliver(Report::ok("mts-to-qg").with("order", q.order()), q.to_text(), output),
        Err(MtsError::Invalid(v)) => {
            Ok(Report::fail("mts-to-qg").with("reason", v.to_string()).with("witness", serde_json::to_value(v)?))
        }
        Err(e) => Err(e.into()),
    }
}

fn qg_to_mts(file: &Path, output: Option<&Path>) -> Result<Report> {
    let q = load_qg(file)?;
    match MendelsohnTripleSystem::from_quasigroup(&q) {
        Ok(mts) => deliver(Report::ok("qg-to-mts").with("triples", mts.triples().len()), mts.to_json(), output),
        Err(e) => mts_failure("qg-to-mts", &q, e),
    }
}

fn stabilizer_basis(file: &Path, base: Option<&str>) -> Result<Report> {
    let q = load_qg(file)?;
    let e = base_point(&q, base)?;
    match schreier_basis(&q, e) {
        Ok(basis) => {
            let elements: Vec<Value> = basis
                .elements()
                .iter()
                .map(|b| format!("{}\t{}", b.kind.describe(&q), b.word.display(&q)).into())
                .collect();
            Ok(Report::ok("stabilizer-basis")
                .with("base", q.label(e))
                .with("rank", basis.rank())
                .with("elements", elements))
        }
        Err(StabilizerError::NotSemisymmetric) => Ok(not_semisymmetric("stabilizer-basis", &q)),
        Err(err) => Err(err.into()),
    }
}

fn ideal(file: &Path, base: Option<&str>, variety: Variety) -> Result<Report> {
    let q = load_qg(file)?;
    let e = base_point(&q, base)?;
    let closed = match semisym_ideal_generators(&q, e) {
        Ok(c) => c,
        Err(DiffError::NotSemisymmetric) => return Ok(not_semisymmetric("ideal", &q)),
        Err(err) => return Err(err.into()),
    };
    let mut lines: Vec<Value> = closed
        .iter()
        .map(|g| format!("({}, {})\t{}", q.label(g.x), q.label(g.y), g.element.display(&q)).into())
        .collect();
    if variety == Variety::Mts {
        if let Some(x) = q.elements().find(|&x| q.mul(x, x) != x) {
            return Ok(Report::fail("ideal").with("reason", "not idempotent").with("witness", q.label(x)));
        }
        for g in ideal_generators(&q, e, &[IdentityPair::idempotence()])? {
            lines.push(format!("({})\t{}", q.label(g.args[0]), g.element.display(&q)).into());
        }
    }
    Ok(Report::ok("ideal")
        .with("base", q.label(e))
        .with("variety", if variety == Variety::Mts { "MTS" } else { "P" })
        .with("count", lines.len())
        .with("generators", lines))
}

fn load_module(path: &Path, q: &FiniteQuasigroup) -> Result<ModuleAssignment> {
    ModuleAssignment::from_json(&read(path)?, q).with_context(|| format!("invalid module file {}", path.display()))
}

fn module_check(file: &Path, module: &Path, base: Option<&str>) -> Result<Report> {
    let q = load_qg(file)?;
    let e = base_point(&q, base)?;
    let a = load_module(module, &q)?;
    let report = match check_module(&q, e, &a) {
        Ok(r) => r,
        Err(ModError::Ideal(DiffError::NotSemisymmetric)) => return Ok(not_semisymmetric("module-check", &q)),
        Err(err) => return Err(err.into()),
    };
    let failures: Vec<Value> = report.failures.iter().map(|&p| pair(&q, p)).collect();
    let status = if report.passed { Status::Ok } else { Status::Fail };
    let mut out = Report::new("module-check", status).with("base", q.label(e)).with("generators", report.generators);
    if !report.passed {
        out = out.with("witness", failures);
    }
    Ok(out)
}

fn extend(file: &Path, module: &Path, output: Option<&Path>, cap: usize) -> Result<Report> {
    let q = load_qg(file)?;
    let a = load_module(module, &q)?;
    let ext = match build_extension(&q, &a, cap) {
        Ok(ext) => ext,
        Err(ModError::ModuleCheckFailed(pairs)) => {
            let witness: Vec<Value> = pairs.iter().map(|&p| pair(&q, p)).collect();
            return Ok(Report::fail("extend").with("reason", "module check failed").with("witness", witness));
        }
        Err(ModError::Ideal(DiffError::NotSemisymmetric)) => return Ok(not_semisymmetric("extend", &q)),
        Err(err) => return Err(err.into()),
    };
    let verified = verify_extension(&ext);
    let mut checks = serde_json::Map::new();
    for c in &verified.checks {
        let name = serde_json::to_value(c.kind)?.as_str().unwrap_or_default().to_owned();
        checks.insert(name, c.witness.is_none().into());
    }
    let status = if verified.all_pass() { Status::Ok } else { Status::Fail };
    let mut report = Report::new("extend", status).with("order", ext.order()).with("checks", Value::Object(checks));
    if let Some(c) = verified.checks.iter().find(|c| c.witness.is_some()) {
        report = report.with("witness", json!({ "check": c.kind, "pair": c.witness }));
    }
    let text = ext.to_quasigroup()?.to_text();
    deliver(report, text, output)
}

fn normalize_word(file: &Path, word: &str, variety: Variety) -> Result<Report> {
    let q = load_qg(file)?;
    let t = Term::parse_qx(word, &q)?;
    let normal = Normalizer::new(&q, variety).normalize(&t);
    Ok(Report::ok("normalize-word")
        .with("input", t.display(&q))
        .with("normal_form", normal.display(&q))
        .with("nodes", normal.node_count()))
}

fn differentiate_cmd(file: &Path, word: &str, vars: &[String], wrt: &str, at: &[String]) -> Result<Report> {
    let q = load_qg(file)?;
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    let t = Term::parse_vars(word, &names)?;
    let h = names.iter().position(|v| *v == wrt).ok_or_else(|| anyhow!("{wrt:?} is not among the variables"))?;
    if at.len() != names.len() {
        bail!("expected {} values, got {}", names.len(), at.len());
    }
    let args = at.iter().map(|a| element(&q, a)).collect::<Result<Vec<_>>>()?;
    let d = differentiate(&t, h, &args, &q)?;
    let shown = d.display(&q).to_string();
    Ok(Report::ok("differentiate").with("derivative", shown).with("terms", d.len()))
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Check { file } => check(file),
        Command::Semisymmetrize { file, output, cap } => {
            let q = load_qg(file)?;
            let s = semisymmetrize(&q, *cap)?;
            let report =
                Report::ok("semisymmetrize").with("order", s.order()).with("semisymmetric", s.is_semisymmetric());
            deliver(report, s.to_text(), output.as_deref())
        }
        Command::MtsSearch { n, budget, output } => mts_search(*n, *budget, output.as_deref()),
        Command::MtsToQg { file, output } => mts_to_qg(file, output.as_deref()),
        Command::QgToMts { file, output } => qg_to_mts(file, output.as_deref()),
        Command::StabilizerBasis { file, base } => stabilizer_basis(file, base.as_deref()),
        Command::Ideal { file, base, variety } => ideal(file, base.as_deref(), *variety),
        Command::ModuleCheck { file, module, base } => module_check(file, module, base.as_deref()),
        Command::Extend { file, module, output, cap } => extend(file, module, output.as_deref(), *cap),
        Command::NormalizeWord { file, word, variety } => normalize_word(file, word, *variety),
        Command::Differentiate { file, word, vars, wrt, at } => differentiate_cmd(file, word, vars, wrt, at),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(report.status.exit_code() as u8)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
