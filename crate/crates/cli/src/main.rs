use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value as Json};

use noet::arith::{Field, PrimeField, Rational};
use noet::cover::{
    extract_subcover, to_pseudoaffine, verify_cover_sample, PseudoaffineVariety, SubcoverOptions, SAMPLE_PRIME,
};
use noet::formula::{parse_formula, FamilyPresentation, PredFormula};
use noet::galois::{hold_set, net_finite_basis, solution_set_pred, AffineSpace, BoundedUniverse};
use noet::noether::{
    dennet0_check, dennet_acf_check, dennet_r_witness, lognet_refute_infinite, DennetOptions,
};
use noet::qe::{decide_sentence_acf, eliminate_all, QeOptions};

const GRAMMAR: &str = "\
formula grammar:
  variables   [a-z][a-z0-9]*        literals  12, -3, 1/2
  terms       + - * ^ ( )           atoms     p = q, p != q
  connectives ! & | ->              constants true, false
  quantifiers exists v. f, forall v. f
family file: plain formulas one per line, or
  @family i in 1..      (also 1..10, 1..=10)
  <one template formula mentioning i>
cover family file: one literal conjunction per line, e.g. x = 0 & y - 1 != 0
field descriptors: fp:<p>, q, qbar";

#[derive(Parser, Debug)]
#[command(name = "noet", version, about = "Noetherianity checks for logical formulas over fields", after_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Formula file (parse, eval, qe, decide)
    #[arg(long, global = true)]
    formula: Option<PathBuf>,
    /// Family file: premises, equations, or cover pieces
    #[arg(long, global = true)]
    family: Option<PathBuf>,
    /// Goal formula file (dennet-acf, dennet0)
    #[arg(long, global = true)]
    goal: Option<PathBuf>,
    /// fp:<p>, q, or qbar
    #[arg(long, global = true)]
    field: Option<String>,
    #[arg(long, global = true, default_value_t = 2)]
    degree_bound: u32,
    #[arg(long, global = true, default_value_t = 100)]
    scan_limit: usize,
    #[arg(long, global = true, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Comma-separated 1-based indices
    #[arg(long, global = true)]
    indices: Option<String>,
    /// Ambient dimension (1 or 2)
    #[arg(long, global = true)]
    dim: Option<usize>,
    /// Point as var=value pairs, e.g. x=1/2,y=3
    #[arg(long, global = true)]
    point: Option<String>,
    /// Comma-separated distinct rationals (lognet)
    #[arg(long, global = true)]
    values: Option<String>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Cmd {
    /// Parse and print a formula canonically
    Parse,
    /// Evaluate a formula at a point
    Eval,
    /// Solution set and vanishing equations of a family over F_p
    Galois,
    /// Greedy finite basis of a family over F_p
    NetBasis,
    /// Eliminate quantifiers over algebraically closed fields
    Qe,
    /// Decide a sentence over algebraically closed fields
    Decide,
    /// Finite subcover of a family of pseudoaffine varieties
    Subcover,
    /// Sample-check that chosen pieces cover F_p^n
    VerifySample,
    /// Witness refuting a finite subfamily of x != a_j
    Lognet,
    /// Real witness for exists y. i*(x^2 + y^2) = 1 => x = 0
    DennetR,
    /// Finite premise set over algebraically closed fields
    DennetAcf,
    /// Finite premise set for quantifier-free premises
    Dennet0,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Run = Result<Outcome, Failure>;

struct Outcome {
    report: Json,
    text: Option<String>,
    ok: bool,
}

fn ok(report: Json, text: impl Into<Option<String>>) -> Run {
    Ok(Outcome {
        report,
        text: text.into(),
        ok: true,
    })
}

fn to_json(v: &impl Serialize) -> Json {
    // round-trip through Value so object keys come out sorted
    serde_json::to_value(v).expect("serializable")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            usage();
            return ExitCode::from(1);
        }
    };
    let textual = matches!(cli.cmd, Cmd::Parse | Cmd::Eval | Cmd::Qe | Cmd::Decide);
    let format = cli.format.unwrap_or(if textual { Format::Text } else { Format::Json });
    match run(&cli) {
        Ok(out) => {
            match (format, out.text) {
                (Format::Text, Some(t)) => println!("{t}"),
                (Format::Text, None) => print!("{}", render_text(&out.report)),
                (Format::Json, _) => println!("{}", serde_json::to_string_pretty(&out.report).expect("json")),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}\n");
            usage();
            ExitCode::from(1)
        }
    }
}

fn usage() {
    // the long help carries the flag table and, after it, the grammar summary
    eprintln!("{}", Cli::command().render_long_help());
}

fn render_text(v: &Json) -> String {
    let mut s = String::new();
    if let Json::Object(map) = v {
        for (k, v) in map {
            let shown = match v {
                Json::String(t) => t.clone(),
                other => other.to_string(),
            };
            s.push_str(&format!("{k}: {shown}\n"));
        }
    }
    s
}

fn need<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T, Failure> {
    v.as_ref().ok_or_else(|| Failure(format!("missing --{flag}")))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn read_formula(path: &Path) -> Result<PredFormula, Failure> {
    Ok(parse_formula(read(path)?.trim())?)
}

fn read_family(path: &Path) -> Result<FamilyPresentation, Failure> {
    Ok(FamilyPresentation::parse(&read(path)?)?)
}

fn parse_indices(s: &str) -> Result<Vec<u64>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|_| Failure(format!("bad index `{t}`"))))
        .collect()
}

fn parse_field(cli: &Cli, default: Field) -> Result<Field, Failure> {
    match &cli.field {
        None => Ok(default),
        Some(s) => Ok(s.parse::<Field>()?),
    }
}

fn prime_field(cli: &Cli) -> Result<PrimeField, Failure> {
    match parse_field(cli, Field::Rational)? {
        Field::Prime(p) => Ok(p),
        _ => Err(Failure("this command needs --field fp:<p>".into())),
    }
}

fn parse_point(s: &str) -> Result<BTreeMap<String, Rational>, Failure> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Failure(format!("bad point component `{part}`")))?;
        out.insert(k.trim().to_string(), v.trim().parse::<Rational>()?);
    }
    Ok(out)
}

/// Sorted free variables, padded with x, y, ... up to `dim`.
fn ambient(vars: BTreeSet<String>, dim: usize) -> Result<Vec<String>, Failure> {
    if vars.len() > dim {
        return Err(Failure(format!(
            "{} variables ({}) exceed dimension {dim}",
            vars.len(),
            vars.iter().cloned().collect::<Vec<_>>().join(", ")
        )));
    }
    let mut vars = vars;
    for name in ["x", "y", "z", "w"] {
        if vars.len() >= dim {
            break;
        }
        vars.insert(name.to_string());
    }
    Ok(vars.into_iter().collect())
}

/// Without `--dim`, the space is spanned by the free variables (at least one).
fn ambient_default(cli: &Cli, vars: BTreeSet<String>) -> Result<Vec<String>, Failure> {
    let dim = cli.dim.unwrap_or(vars.len()).max(1);
    ambient(vars, dim)
}

fn take(fam: &FamilyPresentation, limit: usize) -> Result<Vec<(u64, PredFormula)>, Failure> {
    let mut out = Vec::new();
    for item in fam.iter().take(limit) {
        out.push(item?);
    }
    Ok(out)
}

fn run(cli: &Cli) -> Run {
    if cli.scan_limit == 0 {
        return Err(Failure("--scan-limit must be at least 1".into()));
    }
    match cli.cmd {
        Cmd::Parse => {
            let f = read_formula(need(&cli.formula, "formula")?)?;
            let report = json!({
                "formula": f.to_string(),
                "free_variables": f.free_vars(),
                "bound_variables": f.prefix.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>(),
                "quantifier_free": f.is_quantifier_free(),
            });
            ok(report, f.to_string())
        }
        Cmd::Eval => eval(cli),
        Cmd::Galois => galois(cli),
        Cmd::NetBasis => {
            let field = prime_field(cli)?;
            let fam = read_family(need(&cli.family, "family")?)?;
            let items = take(&fam, cli.scan_limit)?;
            let vars = ambient_default(cli, items.iter().flat_map(|(_, f)| f.free_vars()).collect())?;
            let space = AffineSpace::new(field, &vars)?;
            let basis = net_finite_basis(items.into_iter().map(Ok), &space, cli.scan_limit)?;
            let mut report = to_json(&basis);
            report["field"] = json!(format!("fp:{}", field.modulus()));
            report["variables"] = json!(vars);
            ok(report, None)
        }
        Cmd::Qe => {
            let f = read_formula(need(&cli.formula, "formula")?)?;
            let m = eliminate_all(&f, &QeOptions::default())?;
            ok(json!({"input": f.to_string(), "output": m.to_string()}), m.to_string())
        }
        Cmd::Decide => {
            let f = read_formula(need(&cli.formula, "formula")?)?;
            let b = decide_sentence_acf(&f, &QeOptions::default())?;
            ok(json!({"sentence": f.to_string(), "value": b}), b.to_string())
        }
        Cmd::Subcover => {
            let (pieces, vars) = read_cover(cli)?;
            let report = extract_subcover(
                pieces.into_iter().map(Ok),
                &vars,
                &SubcoverOptions {
                    scan_limit: cli.scan_limit,
                    samples: cli.samples,
                    seed: cli.seed,
                },
            )?;
            let good = report.is_ok();
            Ok(Outcome {
                report: to_json(&report),
                text: None,
                ok: good,
            })
        }
        Cmd::VerifySample => {
            let (pieces, vars) = read_cover(cli)?;
            let p = match parse_field(cli, Field::Prime(PrimeField::new(SAMPLE_PRIME)?))? {
                Field::Prime(p) => p.modulus(),
                _ => return Err(Failure("verify-sample needs --field fp:<p>".into())),
            };
            let indices = match &cli.indices {
                Some(s) => parse_indices(s)?,
                None => (1..=pieces.len() as u64).collect(),
            };
            let report = verify_cover_sample(&pieces, &indices, &vars, p, cli.samples, cli.seed)?;
            let good = report.uncovered_count == 0;
            Ok(Outcome {
                report: to_json(&report),
                text: None,
                ok: good,
            })
        }
        Cmd::Lognet => {
            let values = need(&cli.values, "values")?
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<Rational>())
                .collect::<Result<Vec<_>, _>>()?;
            let indices = match &cli.indices {
                Some(s) => parse_indices(s)?,
                None => (1..=values.len() as u64).collect(),
            };
            witness(lognet_refute_infinite(&values, &indices)?)
        }
        Cmd::DennetR => witness(dennet_r_witness(&parse_indices(need(&cli.indices, "indices")?)?)?),
        Cmd::DennetAcf => {
            let fam = read_family(need(&cli.family, "family")?)?;
            let goal = read_formula(need(&cli.goal, "goal")?)?;
            witness(dennet_acf_check(&fam, &goal, &dennet_options(cli))?)
        }
        Cmd::Dennet0 => {
            let fam = read_family(need(&cli.family, "family")?)?;
            let goal = read_formula(need(&cli.goal, "goal")?)?;
            witness(dennet0_check(&fam, goal.as_prop()?, &dennet_options(cli))?)
        }
    }
}

fn dennet_options(cli: &Cli) -> DennetOptions {
    DennetOptions {
        scan_limit: cli.scan_limit,
        samples: cli.samples,
        seed: cli.seed,
        qe: QeOptions::default(),
    }
}

fn witness(r: noet::noether::WitnessReport) -> Run {
    let good = r.is_ok();
    Ok(Outcome {
        report: to_json(&r),
        text: None,
        ok: good,
    })
}

fn read_cover(cli: &Cli) -> Result<(Vec<PseudoaffineVariety>, Vec<String>), Failure> {
    let fam = read_family(need(&cli.family, "family")?)?;
    let items = take(&fam, cli.scan_limit)?;
    let dim = *need(&cli.dim, "dim")?;
    if !(1..=2).contains(&dim) {
        return Err(Failure("--dim must be 1 or 2".into()));
    }
    let vars = ambient(items.iter().flat_map(|(_, f)| f.free_vars()).collect(), dim)?;
    let pieces = items
        .iter()
        .map(|(_, f)| Ok(to_pseudoaffine(f.as_prop()?, &vars)?))
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok((pieces, vars))
}

fn eval(cli: &Cli) -> Run {
    let f = read_formula(need(&cli.formula, "formula")?)?;
    let point = parse_point(need(&cli.point, "point")?)?;
    for v in f.free_vars() {
        if !point.contains_key(&v) {
            return Err(Failure(format!("point assigns no value to {v}")));
        }
    }
    let field = parse_field(cli, Field::Rational)?;
    let value = match field {
        Field::Prime(pf) => {
            let vars: Vec<String> = f.free_vars().into_iter().collect();
            let coords = vars
                .iter()
                .map(|v| point[v].reduce_mod(pf))
                .collect::<Result<Vec<_>, _>>()?;
            if vars.is_empty() {
                let space = AffineSpace::new(pf, &["x".to_string()])?;
                solution_set_pred(std::slice::from_ref(&f), &space)?.contains(0)
            } else {
                let space = AffineSpace::new(pf, &vars)?;
                solution_set_pred(std::slice::from_ref(&f), &space)?.contains(space.index_of(&coords))
            }
        }
        Field::Rational => f.as_prop()?.eval_rational(&point)?,
        Field::AlgebraicClosure => eliminate_all(&f, &QeOptions::default())?.eval_rational(&point)?,
    };
    let shown: BTreeMap<String, String> = point.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
    let report = json!({
        "formula": f.to_string(),
        "field": field.to_string(),
        "point": shown,
        "value": value,
    });
    ok(report, value.to_string())
}

fn galois(cli: &Cli) -> Run {
    let field = prime_field(cli)?;
    let fam = read_family(need(&cli.family, "family")?)?;
    let items = take(&fam, cli.scan_limit)?;
    let vars = ambient_default(cli, items.iter().flat_map(|(_, f)| f.free_vars()).collect())?;
    let space = AffineSpace::new(field, &vars)?;
    let formulas: Vec<PredFormula> = items.into_iter().map(|(_, f)| f).collect();
    let sol = solution_set_pred(&formulas, &space)?;
    let universe = BoundedUniverse::new(&space, cli.degree_bound)?;
    let hold = hold_set(&sol, &universe);
    let report = json!({
        "field": format!("fp:{}", field.modulus()),
        "variables": vars,
        "degree_bound": cli.degree_bound,
        "formulas": formulas.len(),
        "solution": sol.points(&space),
        "hold_set": universe.render(&hold),
    });
    ok(report, None)
}
