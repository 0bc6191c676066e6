//! `glq`: conjugacy classes and class-sum products of GL_n(q) from the command line.

use std::collections::HashMap;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use glq::classcalc::{multiply_class_sums, stable_product, Bounds, Expansion};
use glq::gltype::{
    centralizer_order, class_size, modified_type_of, modify, plain_types, reflection_length,
    type_of,
};
use glq::poly::{enumerate_phi, monic_polys};
use glq::stablecenter::{
    check_case, fit_family, fit_polynomial_in_n, fit_polynomial_in_q, mixed_union_families,
    reflection_sweep, CaseReport, FitResult, UnionCase,
};
use glq::store::{cache_key, Store};
use glq::verify::{self, SuiteReport};
use glq::{Elem, Error, Field, GlType, Matrix, Poly, Role};

#[derive(Parser, Debug)]
#[command(name = "glq", version, about = "Class sums of finite general linear groups")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Cache file (overrides GLQ_CACHE).
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,
    /// Ignore and do not update the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads for counting loops.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest class held in memory.
    #[arg(long, global = true, value_name = "M")]
    memory_bound: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Machine,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FitVar {
    Q,
    N,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Stability,
    Oracle,
    Centralizers,
    #[value(name = "paper4")]
    Published,
    NormalForm,
    Cache,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monic irreducible polynomials other than t, up to a degree.
    Irr {
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        e: Option<u32>,
        #[arg(long)]
        dmax: usize,
    },
    /// All conjugacy classes of GL_n(q).
    Classes {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
    },
    /// Type, modified type and reflection length of one matrix.
    Type {
        #[arg(long)]
        q: u32,
        /// Rows separated by ';', entries by ','.
        #[arg(long)]
        matrix: String,
    },
    /// Full expansion of K_lambda(n) K_mu(n).
    Mul {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
    },
    /// Top-degree terms of K_lambda K_mu in the stable center.
    Stable {
        #[arg(long)]
        q: u32,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
    },
    /// Exact polynomial fit in q or in [n]_q.
    Fit {
        #[arg(long, value_enum)]
        var: FitVar,
        /// `q:value` pairs, comma separated (for --var q).
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        nu: Option<String>,
        /// Comma-separated sizes (for --var n).
        #[arg(long)]
        ns: Option<String>,
    },
    /// Run a self-check suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
    },
    /// Compare a closed-form prediction with direct computation.
    Check {
        #[arg(long)]
        case: String,
        /// Space-separated key=value pairs, lists comma separated.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        params: String,
    },
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::ResourceBound { .. } => 3,
            Error::Invariant(_) | Error::Io(_) | Error::Inconclusive { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Outcome = std::result::Result<(String, u8), Failure>;

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

struct Table {
    headers: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(headers: &[&'static str]) -> Table {
        Table {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Machine => self.rows.iter().map(|r| r.join("\t") + "\n").collect(),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.headers).expect("in-memory write");
                for r in &self.rows {
                    w.write_record(r).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
            }
            Format::Table => {
                let width = |i: usize| {
                    self.rows
                        .iter()
                        .map(|r| r[i].chars().count())
                        .chain([self.headers[i].chars().count()])
                        .max()
                        .unwrap_or(0)
                };
                let widths: Vec<usize> = (0..self.headers.len()).map(width).collect();
                let line = |cells: Vec<&str>| {
                    let mut s = String::new();
                    for (i, c) in cells.iter().enumerate() {
                        if i > 0 {
                            s.push_str("  ");
                        }
                        s.push_str(c);
                        if i + 1 < cells.len() {
                            s.push_str(&" ".repeat(widths[i] - c.chars().count()));
                        }
                    }
                    s + "\n"
                };
                let mut out = line(self.headers.clone());
                for r in &self.rows {
                    out.push_str(&line(r.iter().map(String::as_str).collect()));
                }
                out
            }
        }
    }
}

fn render_expansion(exp: &Expansion, field: &Field, format: Format) -> String {
    match format {
        Format::Machine => exp.to_machine(field),
        Format::Csv => exp.to_csv(field),
        Format::Table => exp.to_table(field),
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

struct Ctx {
    format: Format,
    bounds: Bounds,
    seed: u64,
    cache: Option<PathBuf>,
}

fn field(q: u32) -> Result<Field, Failure> {
    Ok(Field::from_order(q)?)
}

fn modified(text: &str, f: &Field) -> Result<GlType, Failure> {
    Ok(GlType::parse(text, Role::Modified, f)?)
}

fn cmd_irr(ctx: &Ctx, q: Option<u32>, p: Option<u32>, e: Option<u32>, dmax: usize) -> Outcome {
    let f = match (q, p, e) {
        (_, Some(p), Some(e)) => {
            let f = Field::new(p, e)?;
            if q.is_some_and(|q| q != f.q()) {
                return Err(usage(format!("--q disagrees with --p {p} --e {e}")));
            }
            f
        }
        (Some(q), None, None) => field(q)?,
        _ => return Err(usage("give --q, or both --p and --e")),
    };
    let mut t = Table::new(&["degree", "polynomial"]);
    for g in enumerate_phi(&f, dmax) {
        t.row(vec![g.deg().to_string(), g.format(&f)]);
    }
    Ok((t.render(ctx.format), 0))
}

fn cmd_classes(ctx: &Ctx, q: u32, n: usize) -> Outcome {
    let f = field(q)?;
    let mut t = Table::new(&["type", "modified", "length", "size", "centralizer"]);
    let mut total = BigUint::from(0u32);
    for lambda in plain_types(n, &f) {
        let m = modify(&lambda, &f)?;
        let size = class_size(&m, n, &f)?;
        total += &size;
        t.row(vec![
            lambda.format(&f),
            m.format(&f),
            m.norm().to_string(),
            size.to_string(),
            centralizer_order(&lambda, &f)?.to_string(),
        ]);
    }
    let order = glq::gltype::gl_order(n, &f);
    if total != order {
        return Err(Error::Invariant(format!("class sizes sum to {total}, |GL_{n}({q})| = {order}")).into());
    }
    Ok((t.render(ctx.format), 0))
}

fn cmd_type(ctx: &Ctx, q: u32, text: &str) -> Outcome {
    let f = field(q)?;
    let g = Matrix::parse(text, &f)?;
    if !g.is_invertible(&f) {
        return Err(usage("matrix is not invertible"));
    }
    let mut t = Table::new(&["type", "modified", "length"]);
    t.row(vec![
        type_of(&g, &f)?.format(&f),
        modified_type_of(&g, &f)?.format(&f),
        reflection_length(&g, &f)?.to_string(),
    ]);
    Ok((t.render(ctx.format), 0))
}

fn with_cache(
    ctx: &Ctx,
    key: String,
    seed: u64,
    compute: impl FnOnce() -> glq::Result<Expansion>,
) -> Result<Expansion, Failure> {
    let Some(path) = &ctx.cache else {
        return Ok(compute()?);
    };
    let mut store = Store::load(path)?;
    for w in store.warnings() {
        eprintln!("warning: {w}");
    }
    if let Some(exp) = store.get(&key) {
        return Ok(exp.clone());
    }
    let exp = compute()?;
    store.put(key, exp.clone(), seed);
    store.save(path)?;
    Ok(exp)
}

fn cmd_mul(ctx: &Ctx, q: u32, n: usize, lambda: &str, mu: &str) -> Outcome {
    let f = field(q)?;
    let (l, m) = (modified(lambda, &f)?, modified(mu, &f)?);
    let key = cache_key(q, Some(n), &l, &m, &f);
    let exp = with_cache(ctx, key, ctx.seed, || multiply_class_sums(&l, &m, n, &f, &ctx.bounds))?;
    Ok((render_expansion(&exp, &f, ctx.format), 0))
}

fn cmd_stable(ctx: &Ctx, q: u32, lambda: &str, mu: &str) -> Outcome {
    let f = field(q)?;
    let (l, m) = (modified(lambda, &f)?, modified(mu, &f)?);
    let key = cache_key(q, None, &l, &m, &f);
    let exp = with_cache(ctx, key, ctx.seed, || stable_product(&l, &m, &f, &ctx.bounds))?;
    Ok((render_expansion(&exp, &f, ctx.format), 0))
}

fn render_fit(ctx: &Ctx, fit: &FitResult) -> String {
    if fit.possibly_underdetermined() {
        eprintln!(
            "warning: {} points determine at most degree {}; the true degree may be higher",
            fit.points.len(),
            fit.points.len() - 1
        );
    }
    let mut t = Table::new(&["field", "value"]);
    let pts: Vec<String> = fit.points.iter().map(|(x, y)| format!("{x}:{y}")).collect();
    let coeffs: Vec<String> = fit.coefficients.iter().map(ToString::to_string).collect();
    let shifted: Vec<String> = fit.shifted.iter().map(ToString::to_string).collect();
    t.row(vec!["polynomial".into(), fit.polynomial()]);
    t.row(vec!["shifted".into(), fit.shifted_polynomial()]);
    t.row(vec!["coefficients".into(), coeffs.join(",")]);
    t.row(vec!["shifted_coefficients".into(), shifted.join(",")]);
    t.row(vec!["all_integer".into(), fit.all_integer.to_string()]);
    t.row(vec![
        "all_nonnegative_shifted".into(),
        fit.all_nonnegative_shifted.to_string(),
    ]);
    t.row(vec!["points".into(), pts.join(",")]);
    t.render(ctx.format)
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| usage(format!("bad {what} entry '{s}'"))))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_fit(
    ctx: &Ctx,
    var: FitVar,
    points: Option<&str>,
    q: Option<u32>,
    lambda: Option<&str>,
    mu: Option<&str>,
    nu: Option<&str>,
    ns: Option<&str>,
) -> Outcome {
    let fit = match var {
        FitVar::Q => {
            let points = points.ok_or_else(|| usage("--var q needs --points"))?;
            let pts = points
                .split(',')
                .map(|item| {
                    let (x, y) = item
                        .split_once(':')
                        .ok_or_else(|| usage(format!("point '{item}' is not q:value")))?;
                    let x = x.trim().parse::<u64>().map_err(|_| usage(format!("bad q in '{item}'")))?;
                    let y = y.trim().parse::<BigUint>().map_err(|_| usage(format!("bad value in '{item}'")))?;
                    Ok((x, y))
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            fit_polynomial_in_q(&pts)?
        }
        FitVar::N => {
            let (Some(q), Some(l), Some(m), Some(v), Some(ns)) = (q, lambda, mu, nu, ns) else {
                return Err(usage("--var n needs --q, --lambda, --mu, --nu and --ns"));
            };
            let f = field(q)?;
            let ns: Vec<usize> = parse_list(ns, "--ns")?;
            fit_polynomial_in_n(
                &modified(l, &f)?,
                &modified(m, &f)?,
                &modified(v, &f)?,
                &f,
                &ns,
                &ctx.bounds,
            )?
        }
    };
    Ok((render_fit(ctx, &fit), 0))
}

fn render_suite(ctx: &Ctx, rep: &SuiteReport) -> (String, u8) {
    let mut t = Table::new(&["check", "result", "detail"]);
    for l in &rep.lines {
        t.row(vec![
            l.name.clone(),
            if l.ok { "ok" } else { "FAIL" }.into(),
            l.detail.clone(),
        ]);
    }
    let mut out = t.render(ctx.format);
    for f in &rep.findings {
        out.push_str(&format!("finding: {f}\n"));
    }
    let code = if rep.passed() { 0 } else { 1 };
    (out, code)
}

fn cmd_verify(ctx: &Ctx, suite: Suite) -> Outcome {
    let b = &ctx.bounds;
    let rep = match suite {
        Suite::Stability => verify::stability_suite(b)?,
        Suite::Oracle => verify::oracle_suite(b)?,
        Suite::Centralizers => verify::centralizer_suite(b)?,
        Suite::Published => verify::published_values_suite(b)?,
        Suite::NormalForm => verify::normal_form_suite(ctx.seed)?,
        Suite::Cache => {
            let path = ctx.cache.as_ref().ok_or_else(|| usage("the cache suite needs a cache"))?;
            let store = Store::load(path)?;
            for w in store.warnings() {
                eprintln!("warning: {w}");
            }
            verify::cross_check_cache(&store, b)?
        }
    };
    Ok(render_suite(ctx, &rep))
}

struct Params(HashMap<String, String>);

impl Params {
    fn parse(text: &str) -> Result<Params, Failure> {
        let mut map = HashMap::new();
        for item in text.split_whitespace() {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| usage(format!("parameter '{item}' is not key=value")))?;
            map.insert(k.to_string(), v.to_string());
        }
        Ok(Params(map))
    }

    fn get(&self, key: &str) -> Result<&str, Failure> {
        self.0
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| usage(format!("missing parameter {key}")))
    }

    fn num<T: std::str::FromStr>(&self, key: &str) -> Result<T, Failure> {
        self.get(key)?
            .parse()
            .map_err(|_| usage(format!("parameter {key} is not a number")))
    }

    fn field(&self) -> Result<Field, Failure> {
        field(self.num("q")?)
    }

    fn elem(&self, key: &str, f: &Field) -> Result<Elem, Failure> {
        Ok(f.parse(self.get(key)?)?)
    }

    fn elems(&self, key: &str, f: &Field) -> Result<Vec<Elem>, Failure> {
        self.get(key)?
            .split(',')
            .map(|s| Ok(f.parse(s)?))
            .collect()
    }

    fn poly(&self, key: &str, f: &Field) -> Result<Poly, Failure> {
        Ok(Poly::parse(self.get(key)?, f)?)
    }
}

fn render_reports(ctx: &Ctx, reports: &[CaseReport], extra: &[String]) -> (String, u8) {
    let mut out = match ctx.format {
        Format::Machine => reports.iter().map(|r| r.line() + "\n").collect(),
        _ => {
            let mut t = Table::new(&["case", "parameters", "computed", "predicted", "status", "result"]);
            for r in reports {
                t.row(vec![
                    r.id.clone(),
                    r.params.clone(),
                    r.computed.to_string(),
                    r.predicted.value.to_string(),
                    r.predicted.status.to_string(),
                    if r.matches() {
                        "match"
                    } else if r.is_failure() {
                        "MISMATCH"
                    } else {
                        "finding"
                    }
                    .into(),
                ]);
            }
            t.render(ctx.format)
        }
    };
    for e in extra {
        out.push_str(&format!("finding: {e}\n"));
    }
    let code = if reports.iter().any(CaseReport::is_failure) { 1 } else { 0 };
    (out, code)
}

fn cmd_check(ctx: &Ctx, case: &str, params: &str) -> Outcome {
    let p = Params::parse(params)?;
    let b = &ctx.bounds;
    let single = |c: UnionCase, f: &Field| -> Outcome {
        let r = check_case(&c, f, b)?;
        Ok(render_reports(ctx, &[r], &[]))
    };
    match case {
        "reflection-product" | "reflection-cases" => {
            let f = p.field()?;
            let reports = reflection_sweep(&f, case == "reflection-cases", b)?;
            Ok(render_reports(ctx, &reports, &[]))
        }
        "distinct-eigenvalue-union" => {
            let f = p.field()?;
            single(UnionCase::DistinctEigenvalueUnion { xis: p.elems("xis", &f)? }, &f)
        }
        "repeated-eigenvalue-union" => {
            let f = p.field()?;
            let c = UnionCase::RepeatedEigenvalueUnion {
                xi: p.elem("xi", &f)?,
                c: p.num("c")?,
                d: p.num("d")?,
            };
            single(c, &f)
        }
        "mixed-union" => {
            let f = p.field()?;
            let c = UnionCase::MixedUnion {
                xis: p.elems("xis", &f)?,
                cs: parse_list(p.get("cs")?, "cs")?,
            };
            single(c, &f)
        }
        "reflection-times-cycle" => {
            let f = p.field()?;
            let c = UnionCase::ReflectionTimesCycle {
                xi: p.elem("xi", &f)?,
                f: p.poly("f", &f)?,
            };
            single(c, &f)
        }
        "general-union" => {
            let f = p.field()?;
            let rest = p
                .get("rest")?
                .split(',')
                .map(|item| {
                    let (g, c) = item
                        .rsplit_once(':')
                        .ok_or_else(|| usage(format!("rest item '{item}' is not poly:count")))?;
                    let c = c.parse().map_err(|_| usage(format!("bad count in '{item}'")))?;
                    Ok((Poly::parse(g, &f)?, c))
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            let c = UnionCase::GeneralUnion {
                xi: p.elem("xi", &f)?,
                c1: p.num("c1")?,
                rest,
            };
            single(c, &f)
        }
        "cycle-extension" => {
            let f = p.field()?;
            let xi = p.elem("xi", &f)?;
            let f_prime = p.poly("fprime", &f)?;
            let targets: Vec<Poly> = match p.0.get("f") {
                Some(text) => vec![Poly::parse(text, &f)?],
                None => monic_polys(&f, f_prime.deg() + 1)
                    .filter(|g| g.is_irreducible(&f))
                    .collect(),
            };
            let reports = targets
                .into_iter()
                .map(|target| {
                    check_case(
                        &UnionCase::CycleExtension {
                            xi,
                            f_prime: f_prime.clone(),
                            f: target,
                        },
                        &f,
                        b,
                    )
                })
                .collect::<glq::Result<Vec<_>>>()?;
            Ok(render_reports(ctx, &reports, &[]))
        }
        "mixed-union-fits" => {
            let qs: Vec<u32> = match p.0.get("qs") {
                Some(text) => parse_list(text, "qs")?,
                None => vec![3, 5, 7],
            };
            let mut t = Table::new(&["family", "values", "fit", "shifted", "integer", "nonnegative"]);
            let mut findings = Vec::new();
            for fam in mixed_union_families() {
                let fit = fit_family(&fam, &qs, b)?;
                let values: Vec<String> = fit.values.iter().map(|(q, a, _)| format!("{q}:{a}")).collect();
                let (poly, shifted, int, nonneg) = match &fit.fit {
                    Some(r) if fit.determined() => (
                        r.polynomial(),
                        r.shifted_polynomial(),
                        r.all_integer.to_string(),
                        r.all_nonnegative_shifted.to_string(),
                    ),
                    _ => ("-".into(), "-".into(), "-".into(), "-".into()),
                };
                t.row(vec![fam.name.into(), values.join(","), poly, shifted, int, nonneg]);
                findings.extend(fit.findings());
            }
            let mut out = t.render(ctx.format);
            for f in findings {
                out.push_str(&format!("finding: {f}\n"));
            }
            Ok((out, 0))
        }
        other => Err(usage(format!(
            "unknown case '{other}'; expected one of reflection-product, reflection-cases, \
             distinct-eigenvalue-union, repeated-eigenvalue-union, mixed-union, \
             reflection-times-cycle, general-union, cycle-extension, mixed-union-fits"
        ))),
    }
}

fn run(cli: &Cli) -> Outcome {
    let c = &cli.common;
    let mut bounds = Bounds::default();
    if let Some(m) = c.memory_bound {
        bounds.class_memory = m;
    }
    let cache = if c.no_cache {
        None
    } else {
        Store::resolve_path(c.cache.as_deref())
    };
    let ctx = Ctx {
        format: c.format,
        bounds,
        seed: c.seed,
        cache,
    };
    match &cli.command {
        Command::Irr { q, p, e, dmax } => cmd_irr(&ctx, *q, *p, *e, *dmax),
        Command::Classes { q, n } => cmd_classes(&ctx, *q, *n),
        Command::Type { q, matrix } => cmd_type(&ctx, *q, matrix),
        Command::Mul { q, n, lambda, mu } => cmd_mul(&ctx, *q, *n, lambda, mu),
        Command::Stable { q, lambda, mu } => cmd_stable(&ctx, *q, lambda, mu),
        Command::Fit {
            var,
            points,
            q,
            lambda,
            mu,
            nu,
            ns,
        } => cmd_fit(
            &ctx,
            *var,
            points.as_deref(),
            *q,
            lambda.as_deref(),
            mu.as_deref(),
            nu.as_deref(),
            ns.as_deref(),
        ),
        Command::Verify { suite } => cmd_verify(&ctx, *suite),
        Command::Check { case, params } => cmd_check(&ctx, case, params),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.common.no_cache && cli.common.cache.is_some() {
        eprintln!("error: --cache and --no-cache are mutually exclusive");
        return ExitCode::from(2);
    }
    if cli.common.jobs == Some(0) {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(2);
    }
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.common.jobs.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok((out, code)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
