use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use typea::basis::enumerate_basis;
use typea::branch::branch;
use typea::mult::{DimMethod, Method, MultEngine};
use typea::pbw::{FactorWord, PbwPolynomial, Straightener};
use typea::rootsys::weight_to_alpha;
use typea::verify::verify_all;
use typea::{AlphaVector, Error, Rank, Weight};

mod cache;

#[derive(Parser, Debug)]
#[command(
    name = "typea",
    version,
    about = "Bases, branching and weight multiplicities for sl(l+1) modules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// JSON file persisting multiplicity memos between runs.
    #[arg(long, global = true, env = "TYPEA_CACHE")]
    cache: Option<PathBuf>,

    /// Maximum number of basis elements to enumerate.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    max_basis: usize,

    /// Maximum number of PBW terms during straightening.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_terms: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Module {
    #[arg(long)]
    rank: usize,

    /// Highest weight in fundamental weight coordinates, e.g. 2,3.
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<i64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum DimArg {
    Enum,
    Weyl,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Recursive,
    Count,
    Freudenthal,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CharMethodArg {
    Recursive,
    Count,
    Freudenthal,
}

impl From<CharMethodArg> for Method {
    fn from(m: CharMethodArg) -> Self {
        match m {
            CharMethodArg::Recursive => Method::Recursive,
            CharMethodArg::Count => Method::Count,
            CharMethodArg::Freudenthal => Method::Freudenthal,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension of V(lambda).
    Dim {
        #[command(flatten)]
        module: Module,
        #[arg(long, value_enum, default_value_t = DimArg::Weyl)]
        method: DimArg,
    },
    /// Multiplicity of the weight mu in V(lambda).
    Mult {
        #[command(flatten)]
        module: Module,
        /// Weight in fundamental weight coordinates.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        mu: Vec<i64>,
        #[arg(long, value_enum, default_value_t = MethodArg::Recursive)]
        method: MethodArg,
    },
    /// Components of the restriction to the next smaller rank.
    Branch {
        #[command(flatten)]
        module: Module,
    },
    /// Monomial basis elements, optionally of one weight.
    Basis {
        #[command(flatten)]
        module: Module,
        /// Restrict to lambda - (a1 alpha_1 + ...), given as a1,a2,...
        #[arg(long, value_delimiter = ',')]
        content: Option<Vec<u32>>,
    },
    /// Full character of V(lambda).
    Char {
        #[command(flatten)]
        module: Module,
        #[arg(long, value_enum, default_value_t = CharMethodArg::Recursive)]
        method: CharMethodArg,
    },
    /// Expansion of a product of divided powers in the PBW basis.
    Expand {
        #[arg(long)]
        rank: usize,
        /// Comma-separated factors such as f2^2,f1^1,f1~3^1.
        #[arg(long)]
        word: String,
    },
    /// Cross-check all algorithms on every small highest weight.
    Verify {
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
        #[arg(long, default_value_t = 2)]
        max_coord: u32,
    },
}

enum Failure {
    Usage(String),
    Cap(String),
    Mismatch(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResourceCap { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = Result<(), Failure>;

struct Ctx<'a> {
    engine: &'a MultEngine,
    format: Format,
    max_terms: usize,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit_json(&mut self, v: &Value) -> io::Result<()> {
        writeln!(self.out, "{v}")
    }
}

fn weight_of(module: &Module) -> Result<Weight, Failure> {
    let lambda = Weight::new(module.lambda.clone())?;
    check_len("lambda", module.rank, lambda.coords().len())?;
    lambda.ensure_dominant()?;
    Ok(lambda)
}

fn check_len(what: &str, rank: usize, got: usize) -> Result<(), Failure> {
    if got == rank {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "{what} has {got} coordinates, expected {rank}"
        )))
    }
}

fn header(command: &str, lambda: &Weight) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("rank".into(), json!(lambda.coords().len()));
    m.insert("lambda".into(), json!(lambda.coords()));
    m
}

fn run_dim(ctx: &mut Ctx, module: &Module, method: DimArg) -> Outcome {
    let lambda = weight_of(module)?;
    let method = match method {
        DimArg::Enum => DimMethod::Enum,
        DimArg::Weyl => DimMethod::Weyl,
    };
    let d = ctx.engine.dim(&lambda, method)?;
    match ctx.format {
        Format::Text => writeln!(ctx.out, "{d}")?,
        Format::Json => {
            let mut m = header("dim", &lambda);
            m.insert("value".into(), json!(d.to_string()));
            ctx.emit_json(&Value::Object(m))?;
        }
    }
    Ok(())
}

fn run_mult(ctx: &mut Ctx, module: &Module, mu: &[i64], method: MethodArg) -> Outcome {
    let lambda = weight_of(module)?;
    let mu = Weight::new(mu.to_vec())?;
    check_len("mu", module.rank, mu.coords().len())?;
    let methods: Vec<Method> = match method {
        MethodArg::All => Method::ALL.to_vec(),
        MethodArg::Recursive => vec![Method::Recursive],
        MethodArg::Count => vec![Method::Count],
        MethodArg::Freudenthal => vec![Method::Freudenthal],
    };
    let values = methods
        .iter()
        .map(|&m| Ok((m, ctx.engine.mult(&lambda, &mu, m)?)))
        .collect::<Result<Vec<_>, Failure>>()?;
    match ctx.format {
        Format::Text if values.len() == 1 => writeln!(ctx.out, "{}", values[0].1)?,
        Format::Text => {
            for (m, v) in &values {
                writeln!(ctx.out, "{m}: {v}")?;
            }
        }
        Format::Json => {
            let alpha = weight_to_alpha(lambda.rank(), &lambda.checked_sub(&mu)?)?;
            let mut m = header("mult", &lambda);
            m.insert("mu".into(), json!(mu.coords()));
            m.insert(
                "alpha".into(),
                json!(alpha.as_ref().map(AlphaVector::coeffs)),
            );
            let vals: serde_json::Map<String, Value> = values
                .iter()
                .map(|(k, v)| (k.name().to_string(), json!(v.to_string())))
                .collect();
            m.insert("mult".into(), Value::Object(vals));
            ctx.emit_json(&Value::Object(m))?;
        }
    }
    if values.iter().any(|(_, v)| *v != values[0].1) {
        let detail: Vec<String> = values.iter().map(|(m, v)| format!("{m}={v}")).collect();
        return Err(Failure::Mismatch(format!(
            "methods disagree for lambda = {lambda}, mu = {mu}: {}",
            detail.join(", ")
        )));
    }
    Ok(())
}

fn run_branch(ctx: &mut Ctx, module: &Module) -> Outcome {
    let lambda = weight_of(module)?;
    let comps = branch(&lambda)?;
    match ctx.format {
        Format::Text => {
            for c in &comps {
                writeln!(
                    ctx.out,
                    "{}, {}, {}, {}",
                    c.index, c.p, c.highest_weight, c.dim
                )?;
            }
        }
        Format::Json => {
            let list: Vec<Value> = comps
                .iter()
                .map(|c| {
                    json!({
                        "s": c.index,
                        "P": c.p.descending_tuple(),
                        "hw": c.highest_weight.coords(),
                        "dim": c.dim.to_string(),
                    })
                })
                .collect();
            let mut m = header("branch", &lambda);
            m.insert("components".into(), Value::Array(list));
            ctx.emit_json(&Value::Object(m))?;
        }
    }
    Ok(())
}

fn run_basis(ctx: &mut Ctx, module: &Module, content: Option<&[u32]>, cap: usize) -> Outcome {
    let lambda = weight_of(module)?;
    let filter = match content {
        Some(a) => {
            check_len("content", module.rank, a.len())?;
            Some(AlphaVector::new(a.to_vec()))
        }
        None => None,
    };
    let mut elements = Vec::new();
    for (n, k) in enumerate_basis(&lambda, filter.as_ref())?.enumerate() {
        if n >= cap {
            return Err(Error::ResourceCap {
                what: "basis enumeration",
                cap,
            }
            .into());
        }
        match ctx.format {
            Format::Text => writeln!(ctx.out, "{k}\t{}", k.render_theta())?,
            Format::Json => elements.push(json!({ "K": k.entries(), "theta": k.render_theta() })),
        }
    }
    if ctx.format == Format::Json {
        let mut m = header("basis", &lambda);
        m.insert(
            "alpha".into(),
            json!(filter.as_ref().map(AlphaVector::coeffs)),
        );
        m.insert("count".into(), json!(elements.len().to_string()));
        m.insert("elements".into(), Value::Array(elements));
        ctx.emit_json(&Value::Object(m))?;
    }
    Ok(())
}

fn run_char(ctx: &mut Ctx, module: &Module, method: CharMethodArg) -> Outcome {
    let lambda = weight_of(module)?;
    let method = Method::from(method);
    let ch = ctx.engine.character(&lambda, method)?;
    // by depth below lambda, then lexicographically descending
    let mut rows = ch
        .iter()
        .map(|(mu, m)| {
            let d = lambda.checked_sub(mu)?;
            let depth: u64 = weight_to_alpha(lambda.rank(), &d)?
                .map_or(0, |a| a.coeffs().iter().map(|&c| u64::from(c)).sum());
            Ok((depth, mu, m))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    rows.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| y.1.cmp(x.1)));
    match ctx.format {
        Format::Text => {
            for (_, mu, m) in &rows {
                writeln!(ctx.out, "{mu}\t{m}")?;
            }
        }
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|(_, mu, m)| json!({ "mu": mu.coords(), "mult": m.to_string() }))
                .collect();
            let mut m = header("char", &lambda);
            m.insert("method".into(), json!(method.name()));
            m.insert("character".into(), Value::Array(list));
            ctx.emit_json(&Value::Object(m))?;
        }
    }
    Ok(())
}

fn run_expand(ctx: &mut Ctx, rank: usize, word: &str) -> Outcome {
    let rank = Rank::new(rank)?;
    let word = FactorWord::parse(rank, word)?;
    let poly: PbwPolynomial<BigInt> = Straightener::new(rank)
        .with_term_cap(ctx.max_terms)
        .straighten(&word)?;
    let terms: Vec<(FactorWord, &BigInt, &[u32])> = poly
        .terms()
        .rev()
        .map(|(e, c)| (FactorWord::from_exponents(e), c, e.entries()))
        .collect();
    match ctx.format {
        Format::Text => {
            writeln!(ctx.out, "{word} =")?;
            for (w, c, _) in &terms {
                writeln!(ctx.out, "  {c} * {w}")?;
            }
            match terms.first() {
                Some((w, c, _)) => writeln!(ctx.out, "leading term: {c} * {w}")?,
                None => writeln!(ctx.out, "leading term: none")?,
            }
        }
        Format::Json => {
            let list: Vec<Value> = terms
                .iter()
                .map(|(w, c, e)| json!({ "I": e, "coeff": c.to_string(), "monomial": w.to_string() }))
                .collect();
            let leading = terms.first().map(
                |(w, c, e)| json!({ "I": e, "coeff": c.to_string(), "monomial": w.to_string() }),
            );
            let doc = json!({
                "command": "expand",
                "rank": rank.get(),
                "word": word.to_string(),
                "terms": list,
                "leading": leading,
            });
            ctx.emit_json(&doc)?;
        }
    }
    Ok(())
}

fn run_verify(ctx: &mut Ctx, max_rank: usize, max_coord: u32) -> Outcome {
    if max_rank == 0 {
        return Err(Error::ZeroRank.into());
    }
    let reports = verify_all(ctx.engine, max_rank, max_coord)?;
    match ctx.format {
        Format::Text => {
            for r in &reports {
                match &r.counterexample {
                    None => writeln!(ctx.out, "PASS {} ({} cases)", r.name, r.checked)?,
                    Some(c) => writeln!(ctx.out, "FAIL {}: {c}", r.name)?,
                }
            }
        }
        Format::Json => {
            let list: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "passed": r.passed(),
                        "checked": r.checked,
                        "counterexample": r.counterexample,
                    })
                })
                .collect();
            let doc = json!({
                "command": "verify",
                "max_rank": max_rank,
                "max_coord": max_coord,
                "properties": list,
            });
            ctx.emit_json(&doc)?;
        }
    }
    match reports.iter().find(|r| !r.passed()) {
        Some(r) => Err(Failure::Mismatch(format!(
            "{}: {}",
            r.name,
            r.counterexample.as_deref().unwrap_or_default()
        ))),
        None => Ok(()),
    }
}

fn dispatch(cli: &Cli, engine: &MultEngine, out: &mut dyn Write) -> Outcome {
    let mut ctx = Ctx {
        engine,
        format: cli.format,
        max_terms: cli.max_terms,
        out,
    };
    match &cli.command {
        Command::Dim { module, method } => run_dim(&mut ctx, module, *method),
        Command::Mult { module, mu, method } => run_mult(&mut ctx, module, mu, *method),
        Command::Branch { module } => run_branch(&mut ctx, module),
        Command::Basis { module, content } => {
            run_basis(&mut ctx, module, content.as_deref(), cli.max_basis)
        }
        Command::Char { module, method } => run_char(&mut ctx, module, *method),
        Command::Expand { rank, word } => run_expand(&mut ctx, *rank, word),
        Command::Verify {
            max_rank,
            max_coord,
        } => run_verify(&mut ctx, *max_rank, *max_coord),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let engine = MultEngine::new().with_basis_cap(cli.max_basis);
    if let Some(path) = &cli.cache {
        cache::load(path, &engine);
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let outcome = dispatch(&cli, &engine, &mut out);
    let flushed = out.flush();
    if let Some(path) = &cli.cache {
        if let Err(e) = cache::save(path, &engine) {
            eprintln!("warning: could not write cache {}: {e}", path.display());
        }
    }
    match outcome.and(flushed.map_err(Failure::Io)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("mismatch: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
