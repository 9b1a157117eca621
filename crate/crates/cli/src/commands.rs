use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use raider_core::mapfile::{map_to_text, parse_map_text, MapDocument};
use raider_core::rational::format_rational;
use raider_core::{
    count_derangements, derangement_upper_bound, enumerate_strict_nash_with, exp3_run,
    find_derangement, hall_witness, is_strict_nash, parse_edge_list, parse_rational,
    parse_rational_list, payoff_vector, q_factor, random_connected, verify_equivalence,
    Derangement, EnumerateOptions, Family, GameParams, Graph, LearningRun, Profile,
};

use crate::{EnumArgs, GraphArgs};

pub fn load_graph(args: &GraphArgs) -> Result<Graph> {
    match (&args.graph, &args.family) {
        (Some(path), None) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
        }
        (None, Some(family)) => {
            let size = args.size.context("--family needs --size")?;
            if family == "random" {
                let seed = args.seed.context("--family random needs --seed")?;
                let p = args.p.context("--family random needs --p")?;
                Ok(random_connected(size, p, seed)?)
            } else {
                Ok(raider_core::generate(family.parse::<Family>()?, size)?)
            }
        }
        _ => bail!("give exactly one of --graph or --family"),
    }
}

fn read_map(path: &Path, n: usize) -> Result<Vec<usize>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let doc: MapDocument =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if doc.map.len() != n {
            bail!(
                "{}: map has {} entries for {n} vertices",
                path.display(),
                doc.map.len()
            );
        }
        Ok(doc.map)
    } else {
        parse_map_text(&text, n).with_context(|| format!("parsing {}", path.display()))
    }
}

fn params_list(h: &str) -> Result<Vec<GameParams>> {
    parse_rational_list(h)?
        .into_iter()
        .map(|r| GameParams::new(r).map_err(Into::into))
        .collect()
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Runs `op` on a pool of `jobs` threads, or on the global pool.
fn on_pool<T: Send>(jobs: Option<usize>, op: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(op()),
        Some(0) => bail!("--jobs must be at least 1"),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(k).build()?;
            Ok(pool.install(op))
        }
    }
}

pub fn parse_check(out: &mut impl Write, args: &GraphArgs) -> Result<ExitCode> {
    let g = load_graph(args)?;
    writeln!(
        out,
        "ok: n={} m={} connected={}",
        g.n(),
        g.edge_count(),
        if g.is_connected() { "yes" } else { "no" }
    )?;
    Ok(ExitCode::SUCCESS)
}

pub fn generate(out: &mut impl Write, args: &GraphArgs) -> Result<ExitCode> {
    write!(out, "{}", load_graph(args)?.to_edge_list())?;
    Ok(ExitCode::SUCCESS)
}

pub fn derange(out: &mut impl Write, args: &GraphArgs, json: Option<&Path>) -> Result<ExitCode> {
    let g = load_graph(args)?;
    match find_derangement(&g) {
        Some(d) => {
            writeln!(out, "derangement:")?;
            write!(out, "{}", map_to_text(d.map()))?;
            if let Some(path) = json {
                write_json(path, &MapDocument { map: d.into_map() })?;
            }
        }
        None => {
            writeln!(out, "no derangement")?;
            match hall_witness(&g) {
                Ok(Some(w)) => writeln!(out, "Hall witness: W={} N(W)={}", w.set, w.neighborhood)?,
                Ok(None) => unreachable!("matching failed but Hall condition holds"),
                Err(_) => writeln!(out, "Hall witness: graph too large for exhaustive scan")?,
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn qfactor(out: &mut impl Write, args: &GraphArgs, profile: Option<&Path>) -> Result<ExitCode> {
    let g = load_graph(args)?;
    let d = match profile {
        Some(path) => Derangement::new(&g, read_map(path, g.n())?)?,
        None => match find_derangement(&g) {
            Some(d) => d,
            None => {
                writeln!(out, "no derangement; no Q-factor")?;
                return Ok(ExitCode::SUCCESS);
            }
        },
    };
    let q = q_factor(&g, &d)?;
    for c in &q.components {
        writeln!(out, "{c}")?;
    }
    Ok(ExitCode::SUCCESS)
}

pub fn hall(out: &mut impl Write, args: &GraphArgs) -> Result<ExitCode> {
    let g = load_graph(args)?;
    match hall_witness(&g)? {
        Some(w) => writeln!(
            out,
            "Hall condition fails: W={} N(W)={} deficiency={}",
            w.set,
            w.neighborhood,
            w.deficiency()
        )?,
        None => writeln!(out, "Hall condition holds")?,
    }
    Ok(ExitCode::SUCCESS)
}

pub fn count(out: &mut impl Write, args: &GraphArgs) -> Result<ExitCode> {
    let g = load_graph(args)?;
    writeln!(out, "derangements: {}", count_derangements(&g)?)?;
    writeln!(out, "bound: {}", derangement_upper_bound(g.n())?)?;
    Ok(ExitCode::SUCCESS)
}

pub fn payoffs(
    out: &mut impl Write,
    args: &GraphArgs,
    profile: &Path,
    h: &str,
) -> Result<ExitCode> {
    let g = load_graph(args)?;
    let f = Profile::new(&g, read_map(profile, g.n())?)?;
    for params in params_list(h)? {
        let pv = payoff_vector(&g, &f, &params)?;
        writeln!(out, "{params}")?;
        for (v, p) in pv.payoffs.iter().enumerate() {
            writeln!(out, "{v} {}", format_rational(p))?;
        }
        writeln!(out, "total {}", pv.total())?;
    }
    Ok(ExitCode::SUCCESS)
}

/// Exits 1 when the profile is not strict at some `h`.
pub fn nash_verify(
    out: &mut impl Write,
    args: &GraphArgs,
    profile: &Path,
    h: &str,
) -> Result<ExitCode> {
    let g = load_graph(args)?;
    let f = Profile::new(&g, read_map(profile, g.n())?)?;
    let mut all_strict = true;
    for params in params_list(h)? {
        match is_strict_nash(&g, &f, &params)?.counterexample() {
            None => writeln!(out, "{params}: strict Nash equilibrium")?,
            Some(d) => {
                all_strict = false;
                writeln!(out, "{params}: not strict; {d}")?;
            }
        }
    }
    Ok(if all_strict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize)]
struct EnumerationDoc {
    h: String,
    profiles: Vec<Vec<usize>>,
}

pub fn nash_enumerate(
    out: &mut impl Write,
    args: &GraphArgs,
    opts: &EnumArgs,
    json: Option<&Path>,
) -> Result<ExitCode> {
    let g = load_graph(args)?;
    let eopts = EnumerateOptions { force: opts.force };
    let mut docs = Vec::new();
    for params in params_list(&opts.h)? {
        let nes = on_pool(opts.jobs, || enumerate_strict_nash_with(&g, &params, eopts))??;
        writeln!(out, "{params}: {} strict Nash equilibria", nes.len())?;
        for f in &nes {
            writeln!(out, "  {f}")?;
        }
        docs.push(EnumerationDoc {
            h: format_rational(&params.h()),
            profiles: nes.into_iter().map(Profile::into_map).collect(),
        });
    }
    if let Some(path) = json {
        write_json(path, &docs)?;
    }
    Ok(ExitCode::SUCCESS)
}

/// Exits 1 when the correspondence is violated.
pub fn theorem(
    out: &mut impl Write,
    args: &GraphArgs,
    opts: &EnumArgs,
    json: Option<&Path>,
) -> Result<ExitCode> {
    let g = load_graph(args)?;
    let hs = params_list(&opts.h)?;
    let eopts = EnumerateOptions { force: opts.force };
    let report = on_pool(opts.jobs, || verify_equivalence(&g, &hs, eopts))??;
    for (i, h) in report.h_values.iter().enumerate() {
        let mut line = format!(
            "h={h}: strict NE={} set_equal={}",
            report.ne_count[i], report.set_equal[i]
        );
        if report.boundary_exceptions.contains(h) {
            line.push_str(" (h=1 boundary: no strict equilibrium expected)");
        }
        writeln!(out, "{line}")?;
    }
    for v in &report.violations {
        writeln!(out, "violation at h={}: {} {:?}", v.h, v.kind, v.profile)?;
    }
    writeln!(out, "{}", report.summary())?;
    if let Some(path) = json {
        write_json(path, &report)?;
    }
    Ok(if report.holds() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

pub struct LearnArgs {
    pub h: String,
    pub gamma: f64,
    pub rounds: u64,
    pub window: u64,
    pub threshold: f64,
    pub json: Option<PathBuf>,
    pub log: Option<PathBuf>,
}

pub fn learn(out: &mut impl Write, args: &GraphArgs, la: LearnArgs) -> Result<ExitCode> {
    let seed = args.seed.context("learn needs --seed")?;
    let g = load_graph(args)?;
    let params = GameParams::new(parse_rational(&la.h)?)?;
    let mut run = LearningRun::new(params, la.rounds, la.gamma, seed);
    run.window = la.window.min(la.rounds);
    run.threshold = la.threshold;
    run.record_history = la.log.is_some();
    let outcome = exp3_run(&g, &run)?;

    if let Some(path) = &la.log {
        let mut w =
            csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
        for row in &outcome.history {
            w.serialize(row)?;
        }
        w.flush()?;
    }

    writeln!(out, "{params} gamma={} seed={seed}", la.gamma)?;
    match (&outcome.modal_profile, outcome.certified) {
        (Some(f), true) => writeln!(
            out,
            "certified strict Nash equilibrium after {} rounds: {f}",
            outcome.rounds_used
        )?,
        (Some(f), false) => writeln!(
            out,
            "converged after {} rounds to {f}, which is not a strict Nash equilibrium",
            outcome.rounds_used
        )?,
        (None, _) => writeln!(out, "no convergence within {} rounds", outcome.rounds_used)?,
    }
    if let Some(path) = &la.json {
        write_json(path, &outcome.to_document())?;
    }
    Ok(ExitCode::SUCCESS)
}
