use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use pform::dobbertin::{derive_perm_poly, qn, qn_delta_closed_form, qn_inverse, uniform_rep};
use pform::expr::parse;
use pform::group::coset::{classify_coset, coset_rep_system};
use pform::group::words::{relation_search, word_delta_n2q2, word_expand, GeneratorTable, Word, DEFAULT_BUDGET};
use pform::group::{cor412_data, embed, is_monomial_pform, phi, phi_inv, RationalMonomial};
use pform::pform::{
    compose, delta, delta_of_iterate, iterate, membership_necessary_checks, order, star, verify_inverse,
    DEFAULT_ORDER_BOUND,
};
use pform::{DegElem, Error, FieldCtx, PFormCtx, RatFunc, UnitSystem};

/// Computations with global P-forms over finite fields.
#[derive(Parser, Debug)]
#[command(name = "pform", version)]
struct Cli {
    #[command(flatten)]
    field: FieldArgs,

    /// Number of variables
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,

    /// Emit one JSON object instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Word budget for relation-search
    #[arg(long, global = true)]
    budget: Option<u64>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Field order (prime power); alternative to --p/--s
    #[arg(long, global = true, conflicts_with_all = ["p", "s"])]
    q: Option<u64>,

    /// Characteristic
    #[arg(long, global = true)]
    p: Option<u64>,

    /// Extension degree over F_p
    #[arg(long, global = true)]
    s: Option<usize>,

    /// Monic modulus for F_{p^s}, coefficients from constant term up, e.g. "1,1,0,1"
    #[arg(long, global = true)]
    modulus: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Apply the star map k times
    Star {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Twisted composition f o g
    Compose {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// m-fold composition of f with itself
    Iterate {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        m: u64,
    },
    /// The degree pair (d_max, d_min)
    Delta {
        #[arg(long)]
        expr: String,
    },
    /// Check g o f = x0
    VerifyInverse {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Order of f under composition
    Order {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = DEFAULT_ORDER_BOUND)]
        bound: u64,
    },
    /// Coset representative of f modulo H
    ClassifyCoset {
        #[arg(long)]
        expr: String,
    },
    /// All coset representatives
    CosetSystem,
    /// Dobbertin form Q_n over F_2
    Qn,
    /// Inverse of Q_n
    QnInverse,
    /// delta of the iterates of Q_n for m = 0..mmax
    QnDeltaTable {
        #[arg(long)]
        mmax: u64,
    },
    /// Monomial of a unit of Z[q^(1/n)]
    Phi {
        #[arg(long, allow_hyphen_values = true)]
        e: String,
    },
    /// Exponent vector of a rational monomial
    PhiInv {
        #[arg(long)]
        expr: String,
    },
    /// Whether a rational monomial is a P-form
    IsMonomialUnit {
        #[arg(long)]
        expr: String,
    },
    /// Norm of an element of Z[q^(1/n)]
    UnitNorm {
        #[arg(long, allow_hyphen_values = true)]
        e: String,
    },
    /// Inverse of a unit of Z[q^(1/n)]
    UnitInv {
        #[arg(long, allow_hyphen_values = true)]
        e: String,
    },
    /// Relabel a function in `from` variables into the --n variable context
    Embed {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        from: usize,
    },
    /// Whether f o g = g o f
    Commutes {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// The gcd d and mu_d for a system of units
    Cor412 {
        /// A unit as comma-separated coordinates; repeat for each unit
        #[arg(long = "unit", allow_hyphen_values = true)]
        units: Vec<String>,
    },
    /// Expand a word over named generators
    WordExpand {
        #[command(flatten)]
        gens: GenArgs,
        /// e.g. "M^2 o A o M^-1 o A"
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Closed-form delta of (x0x1)^(e_1) o (x0+1) o ... over F_2, n = 2
    WordDelta {
        #[arg(long, allow_hyphen_values = true)]
        exps: String,
    },
    /// Search for words equal to x0
    RelationSearch {
        #[command(flatten)]
        gens: GenArgs,
        #[arg(long)]
        max_len: usize,
        /// Disable the shape filter for x0x1 and x0+1
        #[arg(long)]
        no_filter: bool,
    },
    /// Univariate specialisation of f reduced in F_{q^m}
    UniformRep {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        nprime: u64,
        #[arg(long)]
        m: u64,
    },
    /// Permutation polynomial derived from f and its inverse
    PermPoly {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        inverse: Option<String>,
        #[arg(long)]
        nprime: u64,
        #[arg(long)]
        m: u64,
    },
    /// Necessary conditions for membership in the group
    CheckMembership {
        #[arg(long)]
        expr: String,
    },
}

#[derive(Args, Debug)]
struct GenArgs {
    /// NAME=EXPR or NAME=EXPR:INVERSE; repeat for each generator
    #[arg(long = "gen", required = true)]
    gens: Vec<String>,
}

struct Out {
    text: String,
    json: Value,
    /// Set when the result is partial; reported as a domain error.
    error: Option<Error>,
}

impl Out {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Out { text: text.into(), json, error: None }
    }
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

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn parse_ints(s: &str) -> Result<Vec<i64>, Failure> {
    let t = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    t.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| usage(format!("expected comma-separated integers, got '{s}'"))))
        .collect()
}

fn parse_deg(s: &str, n: usize) -> Result<DegElem, Failure> {
    let v = parse_ints(s)?;
    if v.len() != n {
        return Err(usage(format!("'{s}' has {} coordinates, expected {n}", v.len())));
    }
    Ok(DegElem::from_i64s(&v))
}

fn build_ctx(cli: &Cli) -> Result<PFormCtx, Failure> {
    let f = &cli.field;
    let field = match (f.q, f.p) {
        (Some(q), _) => {
            if f.modulus.is_some() {
                let (p, s) = pform::field::prime_power(q)
                    .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
                FieldCtx::new(p, s, Some(&modulus(f)?))?
            } else {
                return Ok(PFormCtx::with_q(q, cli.n)?);
            }
        }
        (None, Some(p)) => {
            let s = f.s.unwrap_or(1);
            match &f.modulus {
                Some(_) => FieldCtx::new(p, s, Some(&modulus(f)?))?,
                None => FieldCtx::new(p, s, None)?,
            }
        }
        (None, None) if f.s.is_some() => return Err(usage("--s needs --p")),
        (None, None) => FieldCtx::prime(2)?,
    };
    Ok(PFormCtx::new(field, cli.n)?)
}

fn modulus(f: &FieldArgs) -> Result<Vec<u64>, Failure> {
    let v = parse_ints(f.modulus.as_deref().unwrap_or(""))?;
    v.into_iter().map(|c| u64::try_from(c).map_err(|_| usage("modulus coefficients must be nonnegative"))).collect()
}

/// Printed form, with the denominator divided out when it divides exactly.
fn show(f: &RatFunc) -> String {
    match f.exact_quotient() {
        Some(q) => RatFunc::from_poly(q).to_string(),
        None => f.to_string(),
    }
}

fn expr_out(f: &RatFunc) -> Out {
    let s = show(f);
    Out::new(s.clone(), json!(s))
}

fn ensure_binary(ctx: &PFormCtx) -> Result<(), Failure> {
    if ctx.q() != 2 {
        return Err(Error::InvalidContext(format!("Q_n lives over F_2, not F_{}", ctx.q())).into());
    }
    Ok(())
}

fn build_table(ctx: &PFormCtx, specs: &[String]) -> Result<GeneratorTable, Failure> {
    let mut table = GeneratorTable::new(ctx);
    for spec in specs {
        let (name, rest) = spec.split_once('=').ok_or_else(|| usage(format!("generator '{spec}' is not NAME=EXPR")))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(usage(format!("bad generator name '{name}'")));
        }
        let (f, inv) = match rest.split_once(':') {
            Some((f, i)) => (f, Some(i)),
            None => (rest, None),
        };
        table.parse_and_add(name, f, inv)?;
    }
    Ok(table)
}

/// Atoms separated by whitespace, `o` or `*`; each atom is NAME, NAME^E or NAME^(E).
fn parse_word(table: &GeneratorTable, s: &str) -> Result<Word, Failure> {
    let mut atoms = Vec::new();
    for tok in s.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty() && *t != "o") {
        let (name, e) = match tok.split_once('^') {
            Some((name, e)) => {
                let e = e.trim_start_matches('(').trim_end_matches(')');
                (name, e.parse::<i64>().map_err(|_| usage(format!("bad exponent in '{tok}'")))?)
            }
            None => (tok, 1),
        };
        let g = table.index_of(name).ok_or_else(|| usage(format!("unknown generator '{name}'")))?;
        if e == 0 {
            return Err(Error::ZeroExponent.into());
        }
        atoms.push((g, e));
    }
    Ok(Word::new(atoms))
}

fn monomial_of(f: &RatFunc) -> Result<RationalMonomial, Failure> {
    RationalMonomial::from_ratfunc(f)
        .ok_or_else(|| Error::PreconditionUnmet(format!("{f} is not a rational monomial with coefficient 1")).into())
}

fn run(cli: &Cli, ctx: &PFormCtx) -> Result<Out, Failure> {
    let p = |s: &str| parse(ctx, s).map_err(Failure::from);
    let ring = ctx.ring();
    let out = match &cli.cmd {
        Cmd::Star { expr, k } => expr_out(&star(&p(expr)?, *k)),
        Cmd::Compose { f, g } => expr_out(&compose(&p(f)?, &p(g)?)?),
        Cmd::Iterate { expr, m } => expr_out(&iterate(&p(expr)?, *m)?),
        Cmd::Delta { expr } => {
            let d = delta(&p(expr)?);
            Out::new(d.to_string(), d.to_json())
        }
        Cmd::VerifyInverse { f, g } => {
            let ok = verify_inverse(&p(f)?, &p(g)?)?;
            Out::new(ok.to_string(), json!(ok))
        }
        Cmd::Order { expr, bound } => {
            let o = order(&p(expr)?, *bound)?;
            Out::new(o.to_string(), o.to_json())
        }
        Cmd::ClassifyCoset { expr } => {
            let c = classify_coset(&p(expr)?)?;
            let rep = c.rep.to_ratfunc(ctx)?;
            let text = format!("rep: {rep}\ncase: {}\nverified: {}\ndelta: {}", c.case, c.verified, c.delta);
            Out::new(text, c.to_json(ctx))
        }
        Cmd::CosetSystem => {
            let sys = coset_rep_system(ctx);
            let reps = sys.reps().iter().map(|r| r.to_ratfunc(ctx).map(|f| f.to_string())).collect::<Result<Vec<_>, _>>()?;
            Out::new(reps.join("\n"), json!({ "size": reps.len(), "reps": reps }))
        }
        Cmd::Qn => {
            ensure_binary(ctx)?;
            expr_out(&qn(cli.n)?)
        }
        Cmd::QnInverse => {
            ensure_binary(ctx)?;
            expr_out(&qn_inverse(cli.n)?)
        }
        Cmd::QnDeltaTable { mmax } => {
            ensure_binary(ctx)?;
            let f = qn(cli.n)?;
            let mut lines = vec!["m\tdelta (closed form)\tdelta (composition law)".to_string()];
            let mut rows = Vec::new();
            for m in 0..=*mmax {
                let closed = qn_delta_closed_form(cli.n, m)?;
                let law = delta_of_iterate(&f, m)?;
                lines.push(format!("{m}\t{closed}\t{law}"));
                rows.push(json!({ "m": m, "closed_form": closed.to_json(), "law": law.to_json(), "agree": closed == law }));
            }
            Out::new(lines.join("\n"), Value::Array(rows))
        }
        Cmd::Phi { e } => {
            let m = phi(ring, &parse_deg(e, cli.n)?)?;
            let f = m.to_ratfunc(ctx)?;
            Out::new(f.to_string(), json!({ "expr": f.to_string(), "exponents": m.exps }))
        }
        Cmd::PhiInv { expr } => {
            let d = phi_inv(&monomial_of(&p(expr)?)?);
            Out::new(d.to_string(), d.to_json())
        }
        Cmd::IsMonomialUnit { expr } => {
            let ok = is_monomial_pform(ring, &monomial_of(&p(expr)?)?);
            Out::new(ok.to_string(), json!(ok))
        }
        Cmd::UnitNorm { e } => {
            let nm = ring.norm(&parse_deg(e, cli.n)?)?;
            let v: Value = serde_json::from_str(&nm.to_string()).expect("integer literal");
            Out::new(nm.to_string(), v)
        }
        Cmd::UnitInv { e } => {
            let d = ring.unit_inv(&parse_deg(e, cli.n)?)?;
            Out::new(d.to_string(), d.to_json())
        }
        Cmd::Embed { expr, from } => {
            let src = ctx.with_n(*from)?;
            expr_out(&embed(&parse(&src, expr)?, cli.n)?)
        }
        Cmd::Commutes { f, g } => {
            let ok = pform::group::commutes(&p(f)?, &p(g)?)?;
            Out::new(ok.to_string(), json!(ok))
        }
        Cmd::Cor412 { units } => {
            let us = units.iter().map(|u| parse_deg(u, cli.n)).collect::<Result<Vec<_>, _>>()?;
            let us = UnitSystem::new(ring, us)?;
            let (d, mu) = cor412_data(&us, ctx)?;
            let mu: Vec<String> = mu.iter().map(|c| ctx.field().format_elem(*c)).collect();
            Out::new(format!("d = {d}\nmu_d = {{{}}}", mu.join(", ")), json!({ "d": d, "mu_d": mu }))
        }
        Cmd::WordExpand { gens, word } => {
            let table = build_table(ctx, &gens.gens)?;
            let w = parse_word(&table, word)?;
            let f = show(&word_expand(&table, &w)?);
            Out::new(f.clone(), json!({ "word": w.display(&table), "expr": f }))
        }
        Cmd::WordDelta { exps } => {
            let d = word_delta_n2q2(&parse_ints(exps)?)?;
            Out::new(d.to_string(), d.to_json())
        }
        Cmd::RelationSearch { gens, max_len, no_filter } => {
            let table = build_table(ctx, &gens.gens)?;
            let budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
            let r = relation_search(&table, *max_len, budget, !no_filter)?;
            let mut lines: Vec<String> = r.relations.iter().map(|x| x.word.display(&table)).collect();
            lines.push(format!(
                "{} relation(s), {} word(s) examined, filter {}",
                r.relations.len(),
                r.words_examined,
                if r.filter_applied { "on" } else { "off" }
            ));
            let mut out = Out::new(lines.join("\n"), r.to_json(&table));
            if r.budget_exceeded {
                out.error = Some(Error::BudgetExceeded(budget));
            }
            out
        }
        Cmd::UniformRep { expr, nprime, m } => {
            let u = uniform_rep(&p(expr)?, *nprime, *m)?;
            Out::new(u.to_string(), u.to_json())
        }
        Cmd::PermPoly { expr, inverse, nprime, m } => {
            let inv = inverse.as_deref().map(p).transpose()?;
            let r = derive_perm_poly(&p(expr)?, inv.as_ref(), *nprime, *m)?;
            let text = format!(
                "g = {}\nf~ = {}\nD: {} of {} elements\ninjective on D: {}\npermutation: {}",
                r.g,
                r.f_tilde,
                r.domain.len(),
                r.field_size,
                r.injective_on_d,
                r.permutation
            );
            Out::new(text, r.to_json())
        }
        Cmd::CheckMembership { expr } => {
            let r = membership_necessary_checks(&p(expr)?);
            let mut lines = vec![format!("delta: {}", r.delta)];
            for c in &r.checks {
                lines.push(format!("({}) {}: {}", c.clause, if c.passed { "pass" } else { "FAIL" }, c.detail));
            }
            lines.push(if r.passed() { "necessary conditions hold".into() } else { "not a member".into() });
            Out::new(lines.join("\n"), r.to_json())
        }
    };
    Ok(out)
}

fn error_json(e: &Error) -> Value {
    json!({ "code": e.code(), "message": e.to_string() })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut ctx_json = Value::Null;
    let result = build_ctx(&cli).and_then(|ctx| {
        ctx_json = ctx.to_json();
        run(&cli, &ctx)
    });
    let timings = json!({ "total_ms": start.elapsed().as_secs_f64() * 1e3 });
    match result {
        Ok(out) => {
            if cli.json {
                let mut obj = json!({ "result": out.json, "context": ctx_json, "timings": timings });
                if let Some(e) = &out.error {
                    obj["error"] = error_json(e);
                }
                println!("{obj}");
            } else {
                println!("{}", out.text);
            }
            match out.error {
                Some(e) => {
                    eprintln!("error[{}]: {e}", e.code());
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Domain(e)) => {
            if cli.json {
                println!("{}", json!({ "result": Value::Null, "error": error_json(&e), "context": ctx_json, "timings": timings }));
            }
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
