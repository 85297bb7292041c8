//! Command implementations behind the `nalg` binary.
//!
//! Every command returns a [`Report`]: deterministic `key: value` lines under
//! `[section]` headers plus an exit status (0 success, 1 check failure,
//! 2 usage or parse error).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::algebra::{Algebra, Subspace};
use crate::catalog;
use crate::format;
use crate::free::{self, BuildOptions};
use crate::identity::{self, CheckOptions, Membership, Variety};
use crate::moufang::{self, ConjectureOptions, Contrast};
use crate::structure;

pub const BUDGET_ENV: &str = "NALG_RELATION_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "nalg", version, about = "Exact computations with anticommutative algebras over Q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Membership in every built-in variety
    Classify { file: PathBuf },
    /// Centers, product space, Jacobian ideal and series
    Invariants { file: PathBuf },
    /// Check one identity or one variety
    Check(CheckArgs),
    /// Moufang-type check for a triple of elements
    Moufang {
        file: PathBuf,
        /// e.g. "x1=a; x2=b; x3=2*c - d"
        #[arg(long)]
        elements: String,
    },
    /// Build an algebra from a construction file
    Construct { file: PathBuf },
    /// Decompose an algebra of the variety w into construction data
    Decompose { file: PathBuf },
    /// Dimensions of a truncated free algebra of a variety
    Free(FreeArgs),
    /// Evaluate J(a,b,(a*b)*(a*c)) in the free v-algebra
    Conjecture(ConjectureArgs),
    /// Print a catalog algebra as an algebra file
    Catalog(CatalogArgs),
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    pub file: PathBuf,
    #[arg(long, conflicts_with = "variety", required_unless_present = "variety")]
    pub identity: Option<String>,
    #[arg(long)]
    pub variety: Option<String>,
}

#[derive(Args, Debug)]
pub struct FreeArgs {
    #[arg(long, conflicts_with = "identities", required_unless_present = "identities")]
    pub variety: Option<String>,
    /// File with one identity per line
    #[arg(long)]
    pub identities: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    pub generators: usize,
    #[arg(long, default_value_t = 4)]
    pub max_degree: usize,
    /// Word over the generators to evaluate, e.g. "J(a,b,a*c)"
    #[arg(long)]
    pub eval: Option<String>,
    /// Relation adjoined to the ideal; may be repeated
    #[arg(long = "extra-relation")]
    pub extra_relation: Vec<String>,
}

#[derive(Args, Debug)]
pub struct ConjectureArgs {
    /// Also examine the subalgebra generated by a, b, a*c
    #[arg(long)]
    pub variant_generators: bool,
    #[arg(long, default_value_t = 6)]
    pub max_degree: usize,
}

#[derive(Args, Debug)]
pub struct CatalogArgs {
    #[arg(required_unless_present = "list")]
    pub name: Option<String>,
    /// Parameters of B, e.g. "1,2,3"
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub list: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub status: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { status: 2, message: message.into() }
    }

    pub fn failure(message: impl Into<String>) -> Self {
        CliError { status: 1, message: message.into() }
    }
}

/// Accumulated output of one command.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    text: String,
    pub status: u8,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn section(&mut self, name: &str) {
        if !self.text.is_empty() && !self.text.ends_with("\n\n") {
            self.text.push('\n');
        }
        let _ = writeln!(self.text, "[{name}]");
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.text, "{key}: {value}");
    }

    pub fn line(&mut self, line: impl std::fmt::Display) {
        let _ = writeln!(self.text, "{line}");
    }

    pub fn raw(text: String) -> Self {
        Report { text, status: 0 }
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<Algebra, CliError> {
    format::parse_algebra(&read(path)?).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn yes(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn membership_line(alg: &Algebra, m: &Membership) -> String {
    match &m.failure {
        None => "holds".to_string(),
        Some((id, witness)) => {
            let mut s = format!("FAILS ({}: {})", id.name, witness.describe(alg));
            if let Ok(Some((tuple, value))) = identity::find_direct_failure(alg, id, CheckOptions::default()) {
                let parts: Vec<String> =
                    id.variables.iter().zip(&tuple).map(|(v, &i)| format!("{v}={}", alg.basis_names()[i])).collect();
                let _ = write!(s, " direct {}; value {}", parts.join(", "), alg.format_element(&value));
            }
            s
        }
    }
}

pub fn cmd_classify(file: &Path) -> Result<Report, CliError> {
    let alg = load_algebra(file)?;
    let report_list = identity::classify(&alg).map_err(|e| CliError::failure(e.to_string()))?;
    let mut r = Report::new();
    r.section("classify");
    r.kv("algebra", alg.name());
    r.kv("dim", alg.dim());
    r.section("varieties");
    for m in &report_list {
        r.kv(&m.variety, membership_line(&alg, m));
    }
    Ok(r)
}

fn series(alg: &Algebra, s: &[Subspace]) -> String {
    s.iter().map(|x| alg.format_subspace(x)).collect::<Vec<_>>().join(" > ")
}

pub fn cmd_invariants(file: &Path) -> Result<Report, CliError> {
    let alg = load_algebra(file)?;
    let mut r = Report::new();
    r.section("invariants");
    r.kv("algebra", alg.name());
    r.kv("dim", alg.dim());
    r.kv("product_space", alg.format_subspace(&alg.product_space()));
    r.kv("center", alg.format_subspace(&alg.center()));
    r.kv("lie_center", alg.format_subspace(&alg.lie_center()));
    r.kv("jacobian_ideal", alg.format_subspace(&alg.jacobian_ideal()));
    r.kv("derived_series", series(&alg, &alg.derived_series()));
    r.kv("lower_central_series", series(&alg, &alg.lower_central_series()));
    r.kv("solvable", yes(alg.is_solvable()));
    r.kv("nilpotent", yes(alg.is_nilpotent()));
    r.kv("jacobi", yes(alg.satisfies_jacobi()));
    Ok(r)
}

fn lookup_variety(name: &str) -> Result<Variety, CliError> {
    identity::variety(name).map_err(|e| CliError::usage(e.to_string()))
}

pub fn cmd_check(args: &CheckArgs) -> Result<Report, CliError> {
    let alg = load_algebra(&args.file)?;
    let variety = match (&args.identity, &args.variety) {
        (Some(text), None) => {
            let id = identity::parse_identity(text).map_err(|e| CliError::usage(e.to_string()))?;
            Variety::from_identities("identity", vec![id])
        }
        (None, Some(name)) => lookup_variety(name)?,
        _ => return Err(CliError::usage("give exactly one of --identity and --variety")),
    };
    let m =
        identity::membership(&alg, &variety, CheckOptions::default()).map_err(|e| CliError::usage(e.to_string()))?;
    let mut r = Report::new();
    r.section("check");
    r.kv("algebra", alg.name());
    r.kv("target", &variety.name);
    for id in &variety.identities {
        r.kv("identity", &id.name);
        for c in id.polarize().render() {
            r.kv("component", c);
        }
    }
    r.kv("result", membership_line(&alg, &m));
    r.status = if m.holds { 0 } else { 1 };
    Ok(r)
}

pub fn cmd_moufang(file: &Path, elements: &str) -> Result<Report, CliError> {
    let alg = load_algebra(file)?;
    let xs = format::parse_elements(elements, &alg).map_err(CliError::usage)?;
    let rep = moufang::moufang_check(&alg, &xs[0], &xs[1], &xs[2]).map_err(|e| CliError::failure(e.to_string()))?;
    let mut r = Report::new();
    r.section("moufang");
    r.kv("algebra", alg.name());
    for (k, x) in rep.triple.iter().enumerate() {
        r.kv(&format!("x{}", k + 1), alg.format_element(x));
    }
    r.kv("jacobian", alg.format_element(&rep.jacobian));
    r.kv("hypothesis", if rep.hypothesis_holds { "holds" } else { "fails" });
    match (&rep.subalgebra, &rep.restricted, rep.conclusion_holds) {
        (Some(sub), Some(res), Some(ok)) => {
            r.kv("subalgebra", alg.format_subspace(sub));
            r.kv("subalgebra_dim", sub.dim());
            if ok {
                r.kv("conclusion", "holds");
            } else {
                let (i, j, k, v) = rep.jacobi_failure.clone().expect("failing conclusion has a witness");
                let b = |t: usize| alg.format_element(&crate::algebra::Element::from_coords(sub.basis()[t].clone()));
                r.kv("conclusion", format!("FAILS (J({}, {}, {}) = {})", b(i), b(j), b(k), res.format_element(&v)));
                r.status = 1;
            }
        }
        _ => r.kv("conclusion", "not evaluated"),
    }
    r.section("varieties");
    for m in &rep.memberships {
        r.kv(&m.variety, if m.holds { "holds" } else { "fails" });
    }
    Ok(r)
}

pub fn cmd_construct(file: &Path) -> Result<Report, CliError> {
    let data =
        format::parse_construction(&read(file)?).map_err(|e| CliError::usage(format!("{}: {e}", file.display())))?;
    let alg = structure::build_from_construction(&data).map_err(|e| CliError::failure(e.to_string()))?;
    Ok(Report::raw(format::emit_algebra(&alg)))
}

pub fn cmd_decompose(file: &Path) -> Result<Report, CliError> {
    let alg = load_algebra(file)?;
    let dec = structure::decompose(&alg).map_err(|e| CliError::failure(e.to_string()))?;
    let mut text = String::new();
    let basis: Vec<String> =
        dec.adapted_basis.iter().map(|v| crate::algebra::format_combination(alg.basis_names(), v)).collect();
    let _ = writeln!(text, "# adapted basis: {}", basis.join(", "));
    text.push_str(&format::emit_construction(&dec.data));
    Ok(Report::raw(text))
}

fn read_identities(path: &Path) -> Result<Variety, CliError> {
    let text = read(path)?;
    let mut ids = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        ids.push(
            identity::parse_identity(line)
                .map_err(|e| CliError::usage(format!("{}: line {}: {e}", path.display(), k + 1)))?,
        );
    }
    let name = path.file_stem().map_or("custom".into(), |s| s.to_string_lossy().into_owned());
    Ok(Variety::from_identities(name, ids))
}

fn free_error(e: free::FreeError) -> CliError {
    match e {
        free::FreeError::RelationBudget { .. } | free::FreeError::SelfCheck(_) => CliError::failure(e.to_string()),
        _ => CliError::usage(e.to_string()),
    }
}

pub fn cmd_free(args: &FreeArgs, budget: u64) -> Result<Report, CliError> {
    let variety = match (&args.variety, &args.identities) {
        (Some(name), None) => lookup_variety(name)?,
        (None, Some(path)) => read_identities(path)?,
        _ => return Err(CliError::usage("give exactly one of --variety and --identities")),
    };
    let names = free::generator_names(args.generators.min(26));
    let parse = |t: &str| identity::parse_word(t, &names).map_err(|e| CliError::usage(format!("`{t}`: {e}")));
    let extra = args.extra_relation.iter().map(|t| Ok((t.clone(), parse(t)?))).collect::<Result<Vec<_>, CliError>>()?;
    let word = args.eval.as_deref().map(parse).transpose()?;
    let certificate_degree = word.as_ref().map(|w| w.max_degree()).filter(|&d| d >= 2);
    let opts = BuildOptions { relation_budget: budget, certificate_degree, relation_order_seed: None };
    let fq = free::build_free_quotient(&variety, args.generators, args.max_degree, &extra, opts).map_err(free_error)?;
    let mut r = Report::new();
    r.section("free");
    r.kv("variety", &variety.name);
    for id in &variety.identities {
        r.kv("identity", &id.name);
    }
    for t in &args.extra_relation {
        r.kv("extra_relation", t);
    }
    r.kv("generators", names.join(", "));
    r.kv("max_degree", args.max_degree);
    let dims: Vec<String> = fq.dims().iter().enumerate().map(|(k, d)| format!("{}: {d}", k + 1)).collect();
    r.kv("dims", dims.join(", "));
    r.kv("relations", fq.relation_counts().iter().map(usize::to_string).collect::<Vec<_>>().join(", "));
    if let (Some(text), Some(w)) = (&args.eval, &word) {
        r.section("eval");
        r.kv("word", text);
        let value = fq.evaluate(w).map_err(free_error)?;
        r.kv("value", fq.format_vector(&value));
        if certificate_degree.is_some() {
            let cert = fq.certify(w).map_err(free_error)?;
            let valid = fq.verify_certificate(w, &cert).map_err(free_error)?;
            r.section("certificate");
            for line in cert.render(&fq) {
                r.line(line);
            }
            r.kv("certificate_valid", yes(valid));
            if !valid {
                r.status = 1;
            }
        }
    }
    Ok(r)
}

pub fn cmd_conjecture(args: &ConjectureArgs, budget: u64) -> Result<Report, CliError> {
    let opts = ConjectureOptions {
        generators: 3,
        max_degree: args.max_degree,
        relation_budget: budget,
        variant: args.variant_generators,
    };
    let rep = moufang::run_conjecture(opts).map_err(|e| match e {
        moufang::MoufangError::Free(f) => free_error(f),
        other => CliError::failure(other.to_string()),
    })?;
    let fq = &rep.main.quotient;
    let dims =
        |d: &[usize]| d.iter().enumerate().map(|(k, x)| format!("{}: {x}", k + 1)).collect::<Vec<_>>().join(", ");
    let mut r = Report::new();
    r.section("conjecture");
    r.kv("variety", fq.variety());
    r.kv("generators", fq.generators().join(", "));
    r.kv("max_degree", fq.max_degree());
    r.kv("dims", dims(&fq.dims()));
    r.kv("sanity", format!("{} = 0: {}", free::SANITY_WORD, yes(rep.main.sanity_zero)));
    r.kv("word", free::CONJECTURE_WORD);
    r.kv("verdict", if rep.main.certificate.is_zero() { "zero" } else { "nonzero" });
    r.section("certificate");
    for line in rep.main.certificate.render(fq) {
        r.line(line);
    }
    r.kv("certificate_valid", yes(rep.main.valid));
    r.section("cross-check w");
    r.kv("dims", dims(&rep.cross_check.dims));
    r.kv("verdict", if rep.cross_check.certificate.is_zero() { "zero" } else { "nonzero" });
    r.kv("certificate_valid", yes(rep.cross_check.valid));
    if let Some(v) = &rep.variant {
        r.section("variant");
        r.kv("generators", v.generators.join(", "));
        r.kv("dims", dims(&v.dims));
        r.kv("word_in_subalgebra", yes(v.word_in_subalgebra));
        r.kv("verdict", if v.word_zero { "zero" } else { "nonzero" });
        match &v.jacobi_failure {
            None => r.kv("jacobi_on_subalgebra", "holds up to the truncation degree"),
            Some((t, val)) => {
                r.kv("jacobi_on_subalgebra", format!("FAILS at ({}, {}, {}) with value {val}", t[0], t[1], t[2]))
            }
        }
    }
    r.section("contrast");
    match &rep.contrast {
        Contrast::Witness { triple, element, value } => {
            r.kv("status", "witness");
            r.kv("triple", triple.join(", "));
            r.kv("element", element);
            r.kv("value", value);
        }
        Contrast::Skipped(why) => {
            r.kv("status", "skipped");
            r.kv("reason", why);
        }
    }
    let sanity_ok =
        rep.main.sanity_zero && rep.main.valid && rep.cross_check.valid && rep.cross_check.certificate.is_zero();
    if !sanity_ok {
        r.status = 1;
    }
    Ok(r)
}

pub fn cmd_catalog(args: &CatalogArgs) -> Result<Report, CliError> {
    if args.list {
        let mut r = Report::new();
        r.section("catalog");
        for e in &catalog::ENTRIES {
            r.kv(e.name, e.summary);
        }
        return Ok(r);
    }
    let name = args.name.as_deref().ok_or_else(|| CliError::usage("missing catalog name"))?;
    let alpha =
        args.alpha.as_deref().map(catalog::parse_alpha).transpose().map_err(|e| CliError::usage(e.to_string()))?;
    let alg = catalog::lookup(name, alpha.as_ref()).map_err(|e| match e {
        catalog::CatalogError::Structure(s) => CliError::failure(s.to_string()),
        other => CliError::usage(other.to_string()),
    })?;
    Ok(Report::raw(format::emit_algebra(&alg)))
}

/// Relation budget from the environment, or the default.
pub fn relation_budget_from_env() -> Result<u64, CliError> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{BUDGET_ENV} must be a nonnegative integer, got `{v}`"))),
        Err(_) => Ok(free::DEFAULT_RELATION_BUDGET),
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Classify { file } => cmd_classify(file),
        Command::Invariants { file } => cmd_invariants(file),
        Command::Check(args) => cmd_check(args),
        Command::Moufang { file, elements } => cmd_moufang(file, elements),
        Command::Construct { file } => cmd_construct(file),
        Command::Decompose { file } => cmd_decompose(file),
        Command::Free(args) => cmd_free(args, relation_budget_from_env()?),
        Command::Conjecture(args) => cmd_conjecture(args, relation_budget_from_env()?),
        Command::Catalog(args) => cmd_catalog(args),
    }
}
