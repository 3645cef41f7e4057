mod cache;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use eqmf_core::modular::f_basis;
use eqmf_core::positivity::{ConstantEntry, Status};
use eqmf_core::{
    bound_model, decompose_extremal, delta, dim_m, dim_qm, dim_s, eisenstein, extremal_poly, is_supported,
    verify_positivity_with, PositivityReport, QSeries,
};
use rayon::prelude::*;
use serde::Serialize;

use cache::Cache;

const DEFAULT_PREC: usize = 64;

/// Inclusive range `A..B`, `A..=B`, or a single value `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Span {
    lo: u32,
    hi: u32,
}

impl FromStr for Span {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("not a nonnegative integer: {t:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s}"));
        }
        Ok(Span { lo, hi })
    }
}

impl Span {
    fn iter(self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Parser)]
#[command(name = "eqmf", version, about = "Extremal quasimodular forms: expansions, decompositions and positivity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Weight or weight range, e.g. 12 or 4..100.
    #[arg(long = "w", global = true)]
    w: Option<Span>,
    /// Depth or depth range (default 1..4).
    #[arg(long = "r", global = true)]
    r: Option<Span>,
    /// Number of q-expansion coefficients.
    #[arg(long, global = true)]
    prec: Option<usize>,
    /// Upper limit on the precision used by `verify`.
    #[arg(long = "prec-cap", global = true)]
    prec_cap: Option<usize>,
    /// Worker threads for batch jobs (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[arg(long = "cache-dir", global = true, env = "EQMF_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// q-expansion of E2, E4, E6, delta, or f:w:k.
    Expand { form: String },
    /// Extremal form g_w^(r): polynomial in E2, E4, E6 and its q-expansion.
    Extremal {
        #[arg(value_name = "W")]
        weight: Option<Span>,
        #[arg(value_name = "R")]
        depth: Option<Span>,
    },
    /// Eisenstein multiples and cusp parts of g_w^(r) in the derivative basis.
    Decompose {
        #[arg(value_name = "W")]
        weight: Option<Span>,
        #[arg(value_name = "R")]
        depth: Option<Span>,
    },
    /// Cusp-form bound constants and the positivity threshold N0.
    Bound {
        #[arg(value_name = "W")]
        weight: Option<Span>,
        #[arg(value_name = "R")]
        depth: Option<Span>,
    },
    /// Certified positivity check over a grid of (w, r).
    Verify {
        #[arg(value_name = "W")]
        weight: Option<Span>,
        #[arg(value_name = "R")]
        depth: Option<Span>,
    },
    /// Dimensions of M_w, S_w and QM_w^r for r = 1..4.
    Dims {
        #[arg(value_name = "W")]
        weight: Option<Span>,
    },
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

fn usage(err: anyhow::Error) -> Failure {
    Failure { code: 2, err }
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        usage(err)
    }
}

impl From<eqmf_core::Error> for Failure {
    fn from(err: eqmf_core::Error) -> Self {
        usage(err.into())
    }
}

struct Ctx {
    cli_w: Option<Span>,
    cli_r: Option<Span>,
    prec: Option<usize>,
    prec_cap: Option<usize>,
    jobs: Option<usize>,
    format: Format,
    cache: Option<Cache>,
}

impl Ctx {
    fn pick(flag: Option<Span>, positional: Option<Span>, name: &str) -> anyhow::Result<Option<Span>> {
        match (flag, positional) {
            (Some(a), Some(b)) if a != b => bail!("conflicting values for {name}"),
            (a, b) => Ok(a.or(b)),
        }
    }

    fn grid(&self, w: Option<Span>, r: Option<Span>) -> anyhow::Result<Vec<(u32, u32)>> {
        let w = Self::pick(self.cli_w, w, "w")?.ok_or_else(|| anyhow!("a weight (or --w range) is required"))?;
        let r = Self::pick(self.cli_r, r, "r")?.unwrap_or(Span { lo: 1, hi: 4 });
        let jobs: Vec<(u32, u32)> = w
            .iter()
            .flat_map(|w| r.iter().map(move |r| (w, r)))
            .filter(|&(w, r)| is_supported(w, r))
            .collect();
        if jobs.is_empty() {
            eprintln!("warning: no supported (w, r) pairs in the requested range");
        }
        Ok(jobs)
    }

    fn expand_extremal(&self, w: u32, r: u32, prec: usize) -> eqmf_core::Result<QSeries> {
        let compute = || Ok(extremal_poly(w, r)?.expand(prec));
        match &self.cache {
            Some(c) => c.get_or_compute(&format!("g:{w}:{r}"), prec, compute),
            None => compute(),
        }
    }

    fn pool(&self) -> anyhow::Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs.unwrap_or(0))
            .build()
            .context("starting worker pool")
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serialisable")
}

fn coefficient_rows(series: &QSeries, format: Format) -> String {
    match format {
        Format::Csv => cache::to_csv(series),
        Format::Json => json(&series.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()) + "\n",
        Format::Plain => series.coeffs().iter().enumerate().fold(String::new(), |mut s, (n, c)| {
            let _ = writeln!(s, "{n} {c}");
            s
        }),
    }
}

fn named_series(name: &str, prec: usize) -> anyhow::Result<QSeries> {
    let s = match name {
        "E2" => eisenstein(2, prec)?.series,
        "E4" => eisenstein(4, prec)?.series,
        "E6" => eisenstein(6, prec)?.series,
        "delta" | "Delta" => delta(prec).series,
        _ => {
            let parts: Vec<&str> = name.split(':').collect();
            match parts.as_slice() {
                ["f", w, k] => {
                    let w: u32 = w.parse().context("weight in f:w:k")?;
                    let k: u32 = k.parse().context("index in f:w:k")?;
                    f_basis(w, k, prec)?.render()
                }
                _ => bail!("unknown form {name:?}; expected E2, E4, E6, delta or f:w:k"),
            }
        }
    };
    Ok(s)
}

fn cmd_expand(ctx: &Ctx, form: &str) -> Result<(String, u8), Failure> {
    let prec = ctx.prec.unwrap_or(DEFAULT_PREC);
    let s = match ctx.cache.as_ref().and_then(|c| c.get(form, prec)) {
        Some(s) => s,
        None => {
            let s = named_series(form, prec)?;
            if let Some(c) = &ctx.cache {
                c.store(form, prec, &s);
            }
            s
        }
    };
    let out = match ctx.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                form: &'a str,
                prec: usize,
                coefficients: Vec<String>,
            }
            json(&Out { form, prec, coefficients: s.coeffs().iter().map(|c| c.to_string()).collect() }) + "\n"
        }
        f => coefficient_rows(&s, f),
    };
    Ok((out, 0))
}

fn cmd_extremal(ctx: &Ctx, jobs: &[(u32, u32)]) -> Result<(String, u8), Failure> {
    if ctx.format == Format::Csv && jobs.len() > 1 {
        return Err(usage(anyhow!("csv output takes a single (w, r) pair")));
    }
    let mut out = String::new();
    for &(w, r) in jobs {
        let dim = dim_qm(w as i64, r)? as usize;
        let prec = ctx.prec.unwrap_or(DEFAULT_PREC.max(dim + 1));
        // extremal() checks the vanishing order
        eqmf_core::extremal(w, r, dim)?;
        let poly = extremal_poly(w, r)?;
        let series = ctx.expand_extremal(w, r, prec)?;
        match ctx.format {
            Format::Csv => out.push_str(&cache::to_csv(&series)),
            Format::Json => {
                #[derive(Serialize)]
                struct Out {
                    weight: u32,
                    depth: u32,
                    dim: usize,
                    order_of_vanishing: usize,
                    polynomial: String,
                    coefficients: Vec<String>,
                }
                out.push_str(&json(&Out {
                    weight: w,
                    depth: r,
                    dim,
                    order_of_vanishing: dim - 1,
                    polynomial: poly.to_string(),
                    coefficients: series.coeffs().iter().map(|c| c.to_string()).collect(),
                }));
                out.push('\n');
            }
            Format::Plain => {
                let _ = writeln!(out, "g_{w}^({r}) = {poly}");
                let _ = writeln!(out, "dim QM = {dim}, order of vanishing = {}", dim - 1);
                out.push_str(&coefficient_rows(&series, Format::Plain));
            }
        }
    }
    Ok((out, 0))
}

fn cmd_decompose(ctx: &Ctx, jobs: &[(u32, u32)]) -> Result<(String, u8), Failure> {
    #[derive(Serialize)]
    struct Entry {
        order: usize,
        weight: u32,
        eisenstein: String,
        cusp: Vec<String>,
    }
    #[derive(Serialize)]
    struct Out {
        weight: u32,
        depth: u32,
        prec: usize,
        entries: Vec<Entry>,
    }
    let mut out = String::new();
    if ctx.format == Format::Csv {
        out.push_str("weight,depth,order,eis_weight,eisenstein,cusp_zero\n");
    }
    for &(w, r) in jobs {
        let prec = match ctx.prec {
            Some(p) => p,
            None => dim_qm(w as i64, r)? as usize + r as usize + 2,
        };
        let d = decompose_extremal(w, r, prec)?;
        let entries: Vec<Entry> = d
            .entries
            .iter()
            .enumerate()
            .map(|(l, e)| Entry {
                order: l,
                weight: w - 2 * l as u32,
                eisenstein: e.eis_mult.to_string(),
                cusp: e.cusp.series.coeffs().iter().map(|c| c.to_string()).collect(),
            })
            .collect();
        match ctx.format {
            Format::Json => {
                out.push_str(&json(&Out { weight: w, depth: r, prec, entries }));
                out.push('\n');
            }
            Format::Csv => {
                for (e, raw) in entries.iter().zip(&d.entries) {
                    let _ = writeln!(
                        out,
                        "{w},{r},{},{},{},{}",
                        e.order,
                        e.weight,
                        e.eisenstein,
                        raw.cusp.is_zero()
                    );
                }
            }
            Format::Plain => {
                let _ = writeln!(out, "g_{w}^({r}) = sum_l D^l (c_l E_(w-2l) + alpha_(w-2l)), prec {prec}");
                for (e, raw) in entries.iter().zip(&d.entries) {
                    let cusp = if raw.cusp.is_zero() {
                        "0".to_string()
                    } else {
                        raw.cusp.series.truncate(6.min(prec)).to_string()
                    };
                    let _ = writeln!(out, "  l={} weight {}: c = {}, alpha = {}", e.order, e.weight, e.eisenstein, cusp);
                }
            }
        }
    }
    Ok((out, 0))
}

fn cmd_bound(ctx: &Ctx, jobs: &[(u32, u32)]) -> Result<(String, u8), Failure> {
    #[derive(Serialize)]
    struct Out {
        weight: u32,
        depth: u32,
        n0: Option<u64>,
        leading: String,
        constants: Vec<ConstantEntry>,
    }
    let pool = ctx.pool()?;
    let models = pool.install(|| jobs.par_iter().map(|&(w, r)| bound_model(w, r)).collect::<Vec<_>>());
    let mut out = String::new();
    if ctx.format == Format::Csv {
        out.push_str("weight,depth,n0,order,eis_weight,constant_upper\n");
    }
    let mut code = 0;
    for (&(w, r), m) in jobs.iter().zip(models) {
        let m = m?;
        let n0 = m.threshold();
        if n0.is_none() {
            code = 3;
        }
        let constants: Vec<ConstantEntry> = m
            .constants
            .iter()
            .enumerate()
            .map(|(l, c)| ConstantEntry { order: l as u32, weight: w - 2 * l as u32, upper: c.to_decimal_up(12) })
            .collect();
        let n0_text = n0.map_or("none".to_string(), |n| n.to_string());
        match ctx.format {
            Format::Json => {
                out.push_str(&json(&Out { weight: w, depth: r, n0, leading: m.leading().to_string(), constants }));
                out.push('\n');
            }
            Format::Csv => {
                for c in &constants {
                    let _ = writeln!(out, "{w},{r},{n0_text},{},{},{}", c.order, c.weight, c.upper);
                }
            }
            Format::Plain => {
                let _ = writeln!(out, "g_{w}^({r}): N0 = {n0_text}, leading prefactor = {}", m.leading());
                for c in &constants {
                    let _ = writeln!(out, "  C_{} (weight {}) <= {}", c.order, c.weight, c.upper);
                }
            }
        }
    }
    Ok((out, code))
}

fn cmd_verify(ctx: &Ctx, jobs: &[(u32, u32)]) -> Result<(String, u8), Failure> {
    let pool = ctx.pool()?;
    let reports: Vec<eqmf_core::Result<PositivityReport>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(w, r)| verify_positivity_with(w, r, ctx.prec_cap, |prec| ctx.expand_extremal(w, r, prec)))
            .collect()
    });
    let reports = reports.into_iter().collect::<eqmf_core::Result<Vec<_>>>()?;
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let (ok, bad, unknown) = (count(Status::Verified), count(Status::Violated), count(Status::Inconclusive));
    let summary = format!("{} jobs: {ok} verified, {bad} violated, {unknown} inconclusive", reports.len());

    let mut out = String::new();
    match ctx.format {
        Format::Json => {
            for rep in &reports {
                out.push_str(&rep.to_json());
                out.push('\n');
            }
            eprintln!("{summary}");
        }
        Format::Csv => {
            out.push_str("weight,depth,n0,scanned_up_to,violations,status,wall_time_ms\n");
            for rep in &reports {
                let n0 = rep.n0.map_or(String::new(), |n| n.to_string());
                let _ = writeln!(
                    out,
                    "{},{},{n0},{},{},{},{}",
                    rep.weight,
                    rep.depth,
                    rep.scanned_up_to,
                    rep.violations.len(),
                    rep.status,
                    rep.wall_time_ms
                );
            }
            eprintln!("{summary}");
        }
        Format::Plain => {
            for rep in &reports {
                let n0 = rep.n0.map_or("none".to_string(), |n| n.to_string());
                let _ = writeln!(
                    out,
                    "w={} r={} {} N0={n0} scanned_up_to={} violations={} ({} ms)",
                    rep.weight,
                    rep.depth,
                    rep.status,
                    rep.scanned_up_to,
                    rep.violations.len(),
                    rep.wall_time_ms
                );
                for (n, c) in &rep.violations {
                    let _ = writeln!(out, "  a({n}) = {c}");
                }
            }
            out.push_str(&summary);
            out.push('\n');
        }
    }
    let code = if bad > 0 {
        1
    } else if unknown > 0 {
        3
    } else {
        0
    };
    Ok((out, code))
}

fn cmd_dims(ctx: &Ctx, w: Option<Span>) -> Result<(String, u8), Failure> {
    #[derive(Serialize)]
    struct Row {
        weight: u32,
        dim_m: u64,
        dim_s: u64,
        dim_qm: [u64; 4],
    }
    let w = Ctx::pick(ctx.cli_w, w, "w")?.ok_or_else(|| usage(anyhow!("a weight (or --w range) is required")))?;
    let rows = w
        .iter()
        .map(|w| {
            let mut qm = [0; 4];
            for (i, slot) in qm.iter_mut().enumerate() {
                *slot = dim_qm(w as i64, i as u32 + 1)?;
            }
            Ok(Row { weight: w, dim_m: dim_m(w as i64), dim_s: dim_s(w as i64), dim_qm: qm })
        })
        .collect::<eqmf_core::Result<Vec<_>>>()?;
    let mut out = String::new();
    match ctx.format {
        Format::Json => {
            out.push_str(&json(&rows));
            out.push('\n');
        }
        Format::Csv => {
            out.push_str("w,dim_m,dim_s,dim_qm1,dim_qm2,dim_qm3,dim_qm4\n");
            for r in &rows {
                let [a, b, c, d] = r.dim_qm;
                let _ = writeln!(out, "{},{},{},{a},{b},{c},{d}", r.weight, r.dim_m, r.dim_s);
            }
        }
        Format::Plain => {
            let _ = writeln!(out, "{:>5} {:>6} {:>6} {:>8} {:>8} {:>8} {:>8}", "w", "dim_M", "dim_S", "QM^1", "QM^2", "QM^3", "QM^4");
            for r in &rows {
                let [a, b, c, d] = r.dim_qm;
                let _ = writeln!(out, "{:>5} {:>6} {:>6} {a:>8} {b:>8} {c:>8} {d:>8}", r.weight, r.dim_m, r.dim_s);
            }
        }
    }
    Ok((out, 0))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let cache = cli.cache_dir.as_deref().map(Cache::open).transpose()?;
    let ctx = Ctx {
        cli_w: cli.w,
        cli_r: cli.r,
        prec: cli.prec,
        prec_cap: cli.prec_cap,
        jobs: cli.jobs,
        format: cli.format,
        cache,
    };
    if ctx.prec == Some(0) {
        return Err(usage(anyhow!("--prec must be positive")));
    }
    let (text, code) = match &cli.command {
        Command::Expand { form } => cmd_expand(&ctx, form)?,
        Command::Extremal { weight, depth } => cmd_extremal(&ctx, &ctx.grid(*weight, *depth)?)?,
        Command::Decompose { weight, depth } => cmd_decompose(&ctx, &ctx.grid(*weight, *depth)?)?,
        Command::Bound { weight, depth } => cmd_bound(&ctx, &ctx.grid(*weight, *depth)?)?,
        Command::Verify { weight, depth } => cmd_verify(&ctx, &ctx.grid(*weight, *depth)?)?,
        Command::Dims { weight } => cmd_dims(&ctx, *weight)?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
