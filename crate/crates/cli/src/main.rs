use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hclat_core::borelweil::{
    basis_vector, counit_fraction_witness, dual_lattice, embedded_dual, generated_lattice,
    hom_lattice, kostant_lattice, maximality_certificate, shifted_kostant_lattice, Closure,
    FiniteLattice, Sublattice,
};
use hclat_core::contraction::{
    contracted_induced, contracted_produced, contracted_ps, ContractedPs,
};
use hclat_core::hcmod::{
    induced_module, parabolic_zform, principal_series, produced_module, validate_eps,
    CharacterModule,
};
use hclat_core::lattice::{integral_model, LatticeParams, Variant};
use hclat_core::scalar::{
    format_rational, int, parse_rational, CoefficientRing, Laurent, Rational,
};
use hclat_core::table::{ContractOutput, LatticeDoc, ModuleTable};
use hclat_core::verify::{verify, Suite, VerifyOptions};
use hclat_core::zform::{classify, make_zform, BracketTable, SubalgebraLabel};
use hclat_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "hclat",
    version,
    about = "Exact integral models of weight modules for split Z-forms of sl2"
)]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the document to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recover (n, m, |q|) from a bracket table.
    Classify {
        #[arg(long, value_name = "FILE")]
        table: PathBuf,
    },
    /// Tabulate an induced, produced or principal series module.
    Module(ModuleArgs),
    /// Exponents of the integral principal series.
    Lattice(LatticeArgs),
    /// Tabulate a module of the contraction family.
    Contract(ContractArgs),
    /// Lattices in the irreducible SL2-modules.
    Bw(BwArgs),
    /// Run invariant suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Ind,
    Pro,
    Ps,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Parabolic {
    Q,
    Qp,
    Qpp,
}

impl Parabolic {
    fn label(self) -> SubalgebraLabel {
        match self {
            Parabolic::Q => SubalgebraLabel::Q,
            Parabolic::Qp => SubalgebraLabel::QPrime,
            Parabolic::Qpp => SubalgebraLabel::QDoublePrime,
        }
    }

    fn variant(self) -> Variant {
        match self {
            Parabolic::Q => Variant::Q,
            Parabolic::Qp => Variant::Qp,
            Parabolic::Qpp => Variant::Qpp,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Hecke,
    Modules,
    Lattice,
    Contraction,
    Borelweil,
    All,
}

impl SuiteArg {
    fn suite(self) -> Suite {
        match self {
            SuiteArg::Hecke => Suite::Hecke,
            SuiteArg::Modules => Suite::Modules,
            SuiteArg::Lattice => Suite::Lattice,
            SuiteArg::Contraction => Suite::Contraction,
            SuiteArg::Borelweil => Suite::Borelweil,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RingArg {
    Poly,
    Laurent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Op {
    Min,
    Max,
    Dual,
    Hom,
    Certify,
    Counit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClosureArg {
    Hyperalgebra,
    Enveloping,
}

#[derive(Args, Debug)]
struct ModuleArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, value_enum)]
    parabolic: Option<Parabolic>,
    #[arg(long, allow_hyphen_values = true)]
    n: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    m: i64,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<i64>,
    /// Fraction K/N with N dividing n.
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window, default_value = "-5:5")]
    window: (i64, i64),
}

#[derive(Args, Debug)]
struct LatticeArgs {
    #[arg(long, value_enum)]
    variant: Parabolic,
    #[arg(long, allow_hyphen_values = true)]
    n: i64,
    #[arg(long, allow_hyphen_values = true)]
    m: i64,
    #[arg(long, allow_hyphen_values = true)]
    eps: String,
    #[arg(long, allow_hyphen_values = true)]
    mu: i64,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window, default_value = "-5:5")]
    window: (i64, i64),
    /// Cross-check every exponent against the extension oracle.
    #[arg(long)]
    oracle: bool,
}

#[derive(Args, Debug)]
struct ContractArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    n: i64,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    /// A Laurent polynomial in z, e.g. "2z", "1 + z^2" or "z^-1".
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, value_enum, default_value_t = RingArg::Laurent)]
    ring: RingArg,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window, default_value = "-5:5")]
    window: (i64, i64),
}

#[derive(Args, Debug)]
struct BwArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda: i64,
    #[arg(long, allow_hyphen_values = true)]
    n: Option<i64>,
    #[arg(long, value_enum)]
    op: Op,
    #[arg(long, value_enum, default_value_t = ClosureArg::Hyperalgebra)]
    closure: ClosureArg,
    /// Primes for the maximality certificate.
    #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
    primes: Vec<u64>,
    /// Certify the minimal lattice instead of the maximal one.
    #[arg(long)]
    minimal: bool,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("window {s:?} must look like A:B"))?;
    let a: i64 = a
        .trim()
        .parse()
        .map_err(|_| format!("bad window start {a:?}"))?;
    let b: i64 = b
        .trim()
        .parse()
        .map_err(|_| format!("bad window end {b:?}"))?;
    if a > b {
        return Err(format!("window start {a} exceeds end {b}"));
    }
    Ok((a, b))
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

/// A document with a JSON form and a tabular form.
struct Doc {
    json: String,
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
    ok: bool,
}

fn doc<T: Serialize>(value: &T, headers: &[&str], rows: Vec<Vec<String>>) -> Doc {
    Doc {
        json: serde_json::to_string(value).expect("documents serialize"),
        headers: headers.iter().map(|h| h.to_string()).collect(),
        rows,
        ok: true,
    }
}

fn window(w: (i64, i64)) -> RangeInclusive<i64> {
    w.0..=w.1
}

fn parse_eps(s: &str, n: i64) -> CliResult<Rational> {
    let eps = parse_rational(s).or_else(|_| usage(format!("eps {s:?} must be a fraction K/N")))?;
    if n < 1 {
        return usage(format!("n must be positive (got {n})"));
    }
    if validate_eps(n, &eps).is_err() {
        return usage(format!("eps = {s}: the denominator must divide n = {n}"));
    }
    Ok(eps)
}

fn module_table_doc(t: &ModuleTable) -> Doc {
    let rows = t
        .rows
        .iter()
        .map(|r| {
            vec![
                r.0.to_string(),
                r.1.to_string(),
                r.2.clone(),
                r.3.clone(),
                r.4.clone(),
            ]
        })
        .collect();
    doc(t, &["index", "weight", "E", "F", "H"], rows)
}

fn run_module(a: &ModuleArgs) -> CliResult<Doc> {
    let table = match a.kind {
        Kind::Ind | Kind::Pro => {
            if a.parabolic.is_some() || a.eps.is_some() || a.mu.is_some() {
                return usage("--parabolic, --eps and --mu apply to --kind ps only");
            }
            let Some(lambda) = a.lambda else {
                return usage("--kind ind/pro requires --lambda");
            };
            let g = make_zform(a.n, a.m, Rational::from_integer(1.into()))?;
            let m = if a.kind == Kind::Ind {
                induced_module(&g, lambda, CoefficientRing::Rationals)
            } else {
                produced_module(&g, lambda, CoefficientRing::Rationals)
            };
            ModuleTable::new(&m, window(a.window))
        }
        Kind::Ps => {
            if a.lambda.is_some() {
                return usage("--lambda applies to --kind ind/pro only");
            }
            let (Some(p), Some(eps), Some(mu)) = (a.parabolic, &a.eps, &a.mu) else {
                return usage("--kind ps requires --parabolic, --eps and --mu");
            };
            if p == Parabolic::Qpp && a.m != 2 * a.n {
                return usage(format!(
                    "q'' requires m = 2n (got n = {}, m = {})",
                    a.n, a.m
                ));
            }
            let eps = parse_eps(eps, a.n)?;
            let mu =
                parse_rational(mu).or_else(|_| usage(format!("mu {mu:?} must be rational")))?;
            let g = parabolic_zform(a.n, a.m, p.label())?;
            let chi = CharacterModule::new(p.label(), a.n, eps, mu, CoefficientRing::Rationals)?;
            ModuleTable::new(
                &principal_series(&g, &chi, CoefficientRing::Rationals)?,
                window(a.window),
            )
        }
    };
    Ok(module_table_doc(&table))
}

fn run_lattice(a: &LatticeArgs) -> CliResult<Doc> {
    if a.variant == Parabolic::Qpp && a.m != 2 * a.n {
        return usage(format!(
            "q'' requires m = 2n (got n = {}, m = {})",
            a.n, a.m
        ));
    }
    let eps = parse_eps(&a.eps, a.n)?;
    let params = LatticeParams::new(a.variant.variant(), a.n, a.m, eps, a.mu)?;
    let r = integral_model(&params, window(a.window), a.oracle)?;
    let rows = r
        .exponents
        .iter()
        .map(|(p, e)| vec![p.to_string(), e.to_string()])
        .collect();
    Ok(doc(&r, &["index", "exponent"], rows))
}

fn run_contract(a: &ContractArgs) -> CliResult<Doc> {
    let module = match a.kind {
        Kind::Ind | Kind::Pro => {
            if a.eps.is_some() || a.mu.is_some() {
                return usage("--eps and --mu apply to --kind ps only");
            }
            let Some(lambda) = a.lambda else {
                return usage("--kind ind/pro requires --lambda");
            };
            if a.kind == Kind::Ind {
                contracted_induced(lambda, a.n)?
            } else {
                contracted_produced(lambda, a.n)?
            }
        }
        Kind::Ps => {
            if a.lambda.is_some() {
                return usage("--lambda applies to --kind ind/pro only");
            }
            let (Some(eps), Some(mu)) = (&a.eps, &a.mu) else {
                return usage("--kind ps requires --eps and --mu");
            };
            let eps = parse_eps(eps, a.n)?;
            let mu: Laurent = mu
                .parse()
                .or_else(|_| usage(format!("mu {mu:?} is not a Laurent polynomial in z")))?;
            let ring = match a.ring {
                RingArg::Poly => CoefficientRing::Poly,
                RingArg::Laurent => CoefficientRing::Laurent,
            };
            match contracted_ps(a.n, &eps, &mu, ring)? {
                ContractedPs::Module(m) => m,
                ContractedPs::Vanishing { reason } => {
                    let out = ContractOutput {
                        vanishing: Some(reason.clone()),
                        module: None,
                    };
                    return Ok(doc(&out, &["vanishing"], vec![vec![reason]]));
                }
            }
        }
    };
    let table = ModuleTable::new(&module, window(a.window));
    let inner = module_table_doc(&table);
    let out = ContractOutput {
        vanishing: None,
        module: Some(table),
    };
    Ok(Doc {
        json: serde_json::to_string(&out).expect("documents serialize"),
        ..inner
    })
}

fn closure(c: ClosureArg) -> Closure {
    match c {
        ClosureArg::Hyperalgebra => Closure::Hyperalgebra,
        ClosureArg::Enveloping => Closure::Enveloping,
    }
}

fn lattice_rows(l: &FiniteLattice, scales: Option<&[Rational]>) -> Vec<Vec<String>> {
    let col = |m: &Vec<Vec<i64>>, j: usize| {
        m.iter()
            .map(|row| row[j].to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let live: Vec<String> = scales
        .map(|s| {
            s.iter()
                .filter(|x| **x != int(0))
                .map(format_rational)
                .collect()
        })
        .unwrap_or_default();
    (0..l.rank())
        .map(|j| {
            vec![
                j.to_string(),
                l.weights[j].to_string(),
                live.get(j).cloned().unwrap_or_default(),
                col(&l.e, j),
                col(&l.f, j),
            ]
        })
        .collect()
}

fn lattice_doc(l: FiniteLattice, scales: Option<&[Rational]>) -> Doc {
    let rows = lattice_rows(&l, scales);
    let d = LatticeDoc {
        lattice: l,
        scales: scales.map(|s| s.iter().map(format_rational).collect()),
    };
    doc(
        &d,
        &["index", "weight", "scale", "E column", "F column"],
        rows,
    )
}

fn extremal(lambda: i64, lowest: bool, mode: Closure) -> CliResult<Sublattice> {
    if lambda < 0 {
        return Err(Error::InvalidParameter(format!(
            "highest weight must be nonnegative (got {lambda})"
        ))
        .into());
    }
    let amb = kostant_lattice(lambda)?;
    let v = basis_vector(amb.rank(), if lowest { amb.rank() - 1 } else { 0 });
    let generated = generated_lattice(&amb, &[v], mode)?;
    if lowest {
        Ok(embedded_dual(&generated)?.normalized()?)
    } else {
        Ok(generated)
    }
}

fn run_bw(a: &BwArgs) -> CliResult<Doc> {
    let mode = closure(a.closure);
    if a.n.is_some() && !matches!(a.op, Op::Dual | Op::Counit) {
        return usage("--n applies to --op dual and --op counit only");
    }
    match a.op {
        Op::Min | Op::Max => {
            let s = extremal(a.lambda, a.op == Op::Max, mode)?;
            Ok(lattice_doc(s.realize()?, Some(&s.scales)))
        }
        Op::Dual => Ok(lattice_doc(
            dual_lattice(&shifted_kostant_lattice(a.lambda, a.n.unwrap_or(0))?),
            None,
        )),
        Op::Hom => {
            let min = extremal(a.lambda, false, mode)?.realize()?;
            let max = extremal(a.lambda, true, mode)?.realize()?;
            let h = hom_lattice(&min, &max)?;
            let rows = h
                .generators
                .iter()
                .flat_map(|g| g.iter().map(|row| vec![h.rank.to_string(), row.join(" ")]))
                .collect();
            Ok(doc(&h, &["rank", "generator row"], rows))
        }
        Op::Certify => {
            let l = extremal(a.lambda, !a.minimal, mode)?;
            let r = maximality_certificate(&l, &a.primes, mode)?;
            let mut rows: Vec<Vec<String>> = r
                .enlargeable
                .iter()
                .map(|e| {
                    vec![
                        "enlargeable".into(),
                        e.index.to_string(),
                        e.weight.to_string(),
                        e.prime.to_string(),
                    ]
                })
                .collect();
            if r.certified {
                rows.push(vec![
                    "certified".into(),
                    String::new(),
                    String::new(),
                    String::new(),
                ]);
            }
            Ok(doc(&r, &["status", "index", "weight", "prime"], rows))
        }
        Op::Counit => {
            let Some(n) = a.n else {
                return usage("--op counit requires --n");
            };
            let w = counit_fraction_witness(a.lambda, n)?;
            let rows = vec![vec![
                w.lambda.to_string(),
                w.n.to_string(),
                format_rational(&w.fraction),
            ]];
            Ok(doc(&w, &["lambda", "n", "fraction"], rows))
        }
    }
}

fn run_classify(path: &PathBuf) -> CliResult<Doc> {
    let text = std::fs::read_to_string(path)
        .or_else(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let table: BracketTable =
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let c = classify(&table)?;
    let rows = vec![vec![
        c.n.to_string(),
        c.m.to_string(),
        format_rational(&c.q),
    ]];
    Ok(doc(&c, &["n", "m", "q"], rows))
}

fn run_verify(suite: SuiteArg, inject_fault: bool) -> Doc {
    let r = verify(suite.suite(), VerifyOptions { inject_fault });
    let rows = r
        .checks
        .iter()
        .map(|c| {
            vec![
                c.suite.to_string(),
                c.name.clone(),
                c.status.to_string(),
                c.detail.clone(),
            ]
        })
        .collect();
    let mut d = doc(&r, &["suite", "name", "status", "detail"], rows);
    d.ok = r.passed;
    d
}

fn render(d: &Doc, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", d.json),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&d.headers).expect("in-memory write");
            for row in &d.rows {
                w.write_record(row).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        Format::Table => {
            let mut widths: Vec<usize> = d.headers.iter().map(|h| h.chars().count()).collect();
            for row in &d.rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            let line = |cells: &[String]| {
                let padded: Vec<String> = cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:<w$}"))
                    .collect();
                format!("{}\n", padded.join("  ").trim_end())
            };
            let mut out = line(&d.headers);
            for row in &d.rows {
                out.push_str(&line(row));
            }
            out
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    error: ErrorBody<'a>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify { table } => run_classify(table),
        Command::Module(a) => run_module(a),
        Command::Lattice(a) => run_lattice(a),
        Command::Contract(a) => run_contract(a),
        Command::Bw(a) => run_bw(a),
        Command::Verify {
            suite,
            inject_fault,
        } => Ok(run_verify(*suite, *inject_fault)),
    };
    match result {
        Ok(d) => {
            if let Err(e) = emit(&render(&d, cli.format), cli.out.as_ref()) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if d.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => Cli::command()
            .error(ErrorKind::ArgumentConflict, msg)
            .exit(),
        Err(Failure::Domain(e)) => {
            if cli.format == Format::Json {
                let body = ErrorDoc {
                    error: ErrorBody {
                        kind: e.kind(),
                        message: e.to_string(),
                    },
                };
                let text = format!(
                    "{}\n",
                    serde_json::to_string(&body).expect("error serializes")
                );
                if emit(&text, cli.out.as_ref()).is_err() {
                    eprintln!("error: {e}");
                }
            }
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
