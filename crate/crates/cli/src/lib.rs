//! Command-line front end for `gpfree`.
//!
//! [`run`] takes the full argument vector and two output streams and returns
//! the process exit code: 0 on success, 1 when a computation fails (budget or
//! precision), 2 on a usage error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gpfree::density::{
    checkpoint_density, empirical_greedy_density, figure1_data, greedy_density,
    lower_bound_mq, rn_sequence, upper_bound_no_with_budget, upper_bound_simple_report,
    DensityReport, DEFAULT_RN_BUDGET,
};
use gpfree::ff::prime_power;
use gpfree::numeric::{decimal, rat_int};
use gpfree::progfree::{
    greedy_member, greedy_set, has_progression, max_progression_free_subset, nk,
    ProgressionWitness, DEFAULT_ENUM_BUDGET, DEFAULT_EXTREMAL_BUDGET,
};
use gpfree::tables::verify_table;
use gpfree::{factor::factorize_with_seed, make_field, parse_poly, Error, FieldSpec, Poly};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// JSON schema for every `--json` output, shipped with the crate.
pub const OUTPUT_SCHEMA: &str = include_str!("../schema/output.schema.json");

#[derive(Debug, Parser)]
#[command(name = "gpfree", version, about = "Geometric-progression-free sets in F_q[x] and their densities")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Cap on enumerated polynomials and on r_n search nodes.
    #[arg(long, global = true, env = "GPFREE_BUDGET")]
    budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certified density values and bounds.
    Density {
        #[arg(value_enum)]
        kind: DensityKind,
        #[arg(long, value_parser = parse_q)]
        q: u64,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=60))]
        digits: u32,
    },
    /// Recompute a published table and compare every cell.
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
    },
    /// Greedy density for every prime power up to qmax, as CSV.
    Figure1 {
        #[arg(long, default_value_t = 130)]
        qmax: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact density of S(T_{3,q}) at degree N_k.
    Checkpoint {
        #[arg(long, value_parser = parse_q)]
        q: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=12))]
        k: u32,
    },
    /// Fraction of polynomials of degree <= max-degree in the greedy set.
    Empirical {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        max_degree: usize,
    },
    /// Least m with an n-element AP-free subset of [1, m], for n = 1..N.
    Rn {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=64))]
        n: u64,
    },
    /// Factor a polynomial into monic irreducibles.
    Factor {
        #[command(flatten)]
        field: FieldArgs,
        poly: String,
        /// Seed for the equal-degree splitter.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Membership in, or enumeration of, the greedy set.
    Greedy {
        #[command(subcommand)]
        action: GreedyAction,
    },
    /// Search a list of polynomials for a geometric progression.
    Progcheck {
        #[command(flatten)]
        field: FieldArgs,
        /// One polynomial per line; `#` starts a comment.
        #[arg(long)]
        file: PathBuf,
        /// Match progression terms up to unit factors.
        #[arg(long)]
        unit_tolerant: bool,
    },
    /// Exact largest progression-free subset of small degree.
    Extremal {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        max_degree: usize,
        #[arg(long, default_value_t = DEFAULT_EXTREMAL_BUDGET)]
        max_vertices: usize,
    },
}

#[derive(Debug, Subcommand)]
enum GreedyAction {
    Check {
        #[command(flatten)]
        field: FieldArgs,
        poly: String,
    },
    Enumerate {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        max_degree: usize,
        #[arg(long)]
        counts_only: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DensityKind {
    Greedy,
    Lower,
    UpperSimple,
    UpperNo,
}

#[derive(Debug, Args)]
struct FieldArgs {
    #[arg(long, value_parser = parse_q)]
    q: u64,
    /// Modulus coefficients for GF(p^k), constant term first, e.g. `1,0,1`.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
}

fn parse_q(s: &str) -> std::result::Result<u64, String> {
    let q: u64 = s.parse().map_err(|_| format!("'{s}' is not an integer"))?;
    prime_power(q).map_err(|e| e.to_string())?;
    Ok(q)
}

impl FieldArgs {
    fn build(&self) -> gpfree::Result<FieldSpec> {
        let (p, k) = prime_power(self.q)?;
        make_field(p, k, self.modulus.as_deref())
    }
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } | Error::NeedsMorePrecision { .. } => {
                Failure::Compute(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

type Outcome = std::result::Result<i32, Failure>;

struct Ctx<'a> {
    json: bool,
    budget: Option<u64>,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn enum_budget(&self) -> u128 {
        self.budget.map_or(DEFAULT_ENUM_BUDGET, u128::from)
    }

    fn rn_budget(&self) -> u64 {
        self.budget.unwrap_or(DEFAULT_RN_BUDGET)
    }

    fn emit_json(&mut self, v: Value) -> Outcome {
        writeln!(self.out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
        Ok(EXIT_OK)
    }
}

/// Runs one invocation. `args[0]` is the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let mut ctx = Ctx {
        json: cli.json,
        budget: cli.budget,
        out,
        err,
    };
    match dispatch(&mut ctx, cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(ctx: &mut Ctx<'_>, command: Command) -> Outcome {
    match command {
        Command::Density { kind, q, digits } => cmd_density(ctx, kind, q, digits),
        Command::Tables { which } => cmd_tables(ctx, which),
        Command::Figure1 { qmax, out } => cmd_figure1(ctx, qmax, out),
        Command::Checkpoint { q, k } => cmd_checkpoint(ctx, q, k),
        Command::Empirical { field, max_degree } => cmd_empirical(ctx, &field, max_degree),
        Command::Rn { n } => cmd_rn(ctx, n as usize),
        Command::Factor { field, poly, seed } => cmd_factor(ctx, &field, &poly, seed),
        Command::Greedy { action } => match action {
            GreedyAction::Check { field, poly } => cmd_greedy_check(ctx, &field, &poly),
            GreedyAction::Enumerate {
                field,
                max_degree,
                counts_only,
            } => cmd_greedy_enumerate(ctx, &field, max_degree, counts_only),
        },
        Command::Progcheck {
            field,
            file,
            unit_tolerant,
        } => cmd_progcheck(ctx, &field, &file, unit_tolerant),
        Command::Extremal {
            field,
            max_degree,
            max_vertices,
        } => cmd_extremal(ctx, &field, max_degree, max_vertices),
    }
}

fn field_json(field: &FieldSpec) -> Value {
    json!({ "p": field.p(), "k": field.k(), "modulus": field.modulus() })
}

fn cmd_density(ctx: &mut Ctx<'_>, kind: DensityKind, q: u64, digits: u32) -> Outcome {
    let report: DensityReport = match kind {
        DensityKind::Greedy => greedy_density(q, digits)?,
        DensityKind::Lower => lower_bound_mq(q, digits)?,
        DensityKind::UpperSimple => upper_bound_simple_report(q, digits)?,
        DensityKind::UpperNo => upper_bound_no_with_budget(q, digits, ctx.rn_budget())?,
    };
    if ctx.json {
        let mut v = serde_json::to_value(report.to_json()).expect("json");
        v["command"] = json!("density");
        return ctx.emit_json(v);
    }
    let t = &report.truncation;
    if let Some(depth) = t.product_depth {
        writeln!(ctx.err, "product depth {depth}")?;
    }
    if let Some(terms) = t.series_terms {
        writeln!(ctx.err, "series terms {terms}")?;
    }
    writeln!(ctx.out, "{}", report.rendered)?;
    Ok(EXIT_OK)
}

fn cmd_tables(ctx: &mut Ctx<'_>, which: u8) -> Outcome {
    let cells = verify_table(which)?;
    let passed = cells.iter().filter(|c| c.pass).count();
    let all = passed == cells.len();
    if ctx.json {
        let rows: Vec<Value> = cells
            .iter()
            .map(|c| {
                json!({
                    "q": c.cell.q,
                    "column": c.cell.column.label(),
                    "expected": c.cell.normalized(),
                    "computed": c.computed,
                    "pass": c.pass,
                    "interval": c.interval.to_json(),
                })
            })
            .collect();
        ctx.emit_json(json!({
            "command": "tables",
            "which": which,
            "cells": rows,
            "passed": passed,
            "all_pass": all,
        }))?;
    } else {
        for c in &cells {
            writeln!(ctx.out, "{}", c.line())?;
        }
        writeln!(ctx.out, "{passed}/{} cells pass", cells.len())?;
    }
    Ok(if all { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_figure1(ctx: &mut Ctx<'_>, qmax: u64, out: Option<PathBuf>) -> Outcome {
    let rows = figure1_data(qmax)?;
    let mut csv = String::from("q,density\n");
    for (q, d) in &rows {
        csv.push_str(&format!("{q},{d}\n"));
    }
    if let Some(path) = &out {
        std::fs::write(path, &csv)?;
        writeln!(ctx.err, "wrote {} rows to {}", rows.len(), path.display())?;
    }
    if ctx.json {
        let rows: Vec<Value> = rows
            .iter()
            .map(|(q, d)| json!({ "q": q, "density": d }))
            .collect();
        return ctx.emit_json(json!({ "command": "figure1", "qmax": qmax, "rows": rows }));
    }
    if out.is_none() {
        write!(ctx.out, "{csv}")?;
    }
    Ok(EXIT_OK)
}

fn cmd_checkpoint(ctx: &mut Ctx<'_>, q: u64, k: u32) -> Outcome {
    let v = checkpoint_density(q, k)?;
    if ctx.json {
        return ctx.emit_json(json!({
            "command": "checkpoint",
            "q": q,
            "k": k,
            "n_k": nk(k),
            "value": v.to_string(),
            "decimal": decimal(&v, 9),
        }));
    }
    writeln!(ctx.out, "{v}")?;
    Ok(EXIT_OK)
}

fn cmd_empirical(ctx: &mut Ctx<'_>, field: &FieldArgs, max_degree: usize) -> Outcome {
    let f = field.build()?;
    let v = empirical_greedy_density(&f, max_degree, ctx.enum_budget())?;
    if ctx.json {
        let total = num_bigint::BigUint::from(field.q).pow(max_degree as u32 + 1);
        let members = (&v * rat_int(total.clone())).to_integer();
        return ctx.emit_json(json!({
            "command": "empirical",
            "field": field_json(&f),
            "max_degree": max_degree,
            "members": members.to_string(),
            "total": total.to_string(),
            "value": v.to_string(),
            "decimal": decimal(&v, 6),
        }));
    }
    writeln!(ctx.out, "{v} = {}", decimal(&v, 6))?;
    Ok(EXIT_OK)
}

fn cmd_rn(ctx: &mut Ctx<'_>, n: usize) -> Outcome {
    let table = rn_sequence(n, ctx.rn_budget())?;
    if ctx.json {
        return ctx.emit_json(json!({ "command": "rn", "values": table.values }));
    }
    let line: Vec<String> = table.values.iter().map(u64::to_string).collect();
    writeln!(ctx.out, "{}", line.join(", "))?;
    Ok(EXIT_OK)
}

fn cmd_factor(ctx: &mut Ctx<'_>, field: &FieldArgs, text: &str, seed: Option<u64>) -> Outcome {
    let f = field.build()?;
    let poly = parse_poly(&f, text)?;
    let fac = factorize_with_seed(&poly, seed)?;
    if ctx.json {
        let mut v = serde_json::to_value(fac.to_json()).expect("json");
        v["command"] = json!("factor");
        v["field"] = field_json(&f);
        v["input"] = json!(poly.to_string());
        return ctx.emit_json(v);
    }
    let mut pieces = Vec::new();
    if !fac.unit.field().one().eq(&fac.unit) || fac.parts.is_empty() {
        pieces.push(fac.unit.to_string());
    }
    for (prime, e) in &fac.parts {
        if *e == 1 {
            pieces.push(format!("({prime})"));
        } else {
            pieces.push(format!("({prime})^{e}"));
        }
    }
    writeln!(ctx.out, "{}", pieces.join(" * "))?;
    Ok(EXIT_OK)
}

fn cmd_greedy_check(ctx: &mut Ctx<'_>, field: &FieldArgs, text: &str) -> Outcome {
    let f = field.build()?;
    let poly = parse_poly(&f, text)?;
    let member = greedy_member(&poly)?;
    if ctx.json {
        return ctx.emit_json(json!({
            "command": "greedy-check",
            "field": field_json(&f),
            "poly": poly.to_string(),
            "member": member,
        }));
    }
    writeln!(ctx.out, "{}", if member { "member" } else { "not a member" })?;
    Ok(EXIT_OK)
}

fn cmd_greedy_enumerate(
    ctx: &mut Ctx<'_>,
    field: &FieldArgs,
    max_degree: usize,
    counts_only: bool,
) -> Outcome {
    let f = field.build()?;
    let set = greedy_set(&f, max_degree, ctx.enum_budget())?;
    let mut counts = vec![0u64; max_degree + 1];
    for p in &set {
        counts[p.degree().expect("nonzero")] += 1;
    }
    if ctx.json {
        let mut v = json!({
            "command": "greedy-enumerate",
            "field": field_json(&f),
            "max_degree": max_degree,
            "counts": counts,
            "total": set.len(),
        });
        if !counts_only {
            v["polys"] = json!(set.iter().map(Poly::to_string).collect::<Vec<_>>());
        }
        return ctx.emit_json(v);
    }
    if counts_only {
        writeln!(ctx.out, "degree,count")?;
        for (d, c) in counts.iter().enumerate() {
            writeln!(ctx.out, "{d},{c}")?;
        }
    } else {
        for p in &set {
            writeln!(ctx.out, "{p}")?;
        }
    }
    Ok(EXIT_OK)
}

fn witness_json(w: &ProgressionWitness) -> Value {
    json!({
        "base": w.base.to_string(),
        "ratio": w.ratio.to_string(),
        "terms": w.terms.iter().map(Poly::to_string).collect::<Vec<_>>(),
    })
}

fn cmd_progcheck(ctx: &mut Ctx<'_>, field: &FieldArgs, file: &PathBuf, unit_tolerant: bool) -> Outcome {
    let f = field.build()?;
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    let mut polys = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let p = parse_poly(&f, line)
            .map_err(|e| Failure::Usage(format!("line {}: {e}", lineno + 1)))?;
        polys.push(p);
    }
    let limit = ctx.enum_budget();
    if polys.len() as u128 > limit {
        return Err(Error::BudgetExceeded {
            what: "progression check input",
            needed: polys.len() as u128,
            cap: limit,
        }
        .into());
    }
    let witness = has_progression(&polys, unit_tolerant)?;
    if ctx.json {
        return ctx.emit_json(json!({
            "command": "progcheck",
            "field": field_json(&f),
            "size": polys.len(),
            "unit_tolerant": unit_tolerant,
            "progression_free": witness.is_none(),
            "witness": witness.as_ref().map(witness_json),
        }));
    }
    match witness {
        None => writeln!(ctx.out, "progression-free ({} polynomials)", polys.len())?,
        Some(w) => writeln!(
            ctx.out,
            "progression: {}, {}, {} (ratio {})",
            w.terms[0], w.terms[1], w.terms[2], w.ratio
        )?,
    }
    Ok(EXIT_OK)
}

fn cmd_extremal(ctx: &mut Ctx<'_>, field: &FieldArgs, max_degree: usize, max_vertices: usize) -> Outcome {
    let f = field.build()?;
    let r = max_progression_free_subset(&f, max_degree, max_vertices)?;
    if ctx.json {
        return ctx.emit_json(json!({
            "command": "extremal",
            "field": field_json(&f),
            "max_degree": max_degree,
            "size": r.size,
            "vertices": r.vertices,
            "edges": r.edges,
            "witness": r.witness.iter().map(Poly::to_string).collect::<Vec<_>>(),
        }));
    }
    writeln!(
        ctx.out,
        "maximum {} of {} ({} progressions)",
        r.size, r.vertices, r.edges
    )?;
    let names: Vec<String> = r.witness.iter().map(Poly::to_string).collect();
    writeln!(ctx.out, "{}", names.join(", "))?;
    Ok(EXIT_OK)
}
