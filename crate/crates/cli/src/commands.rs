use std::io::Write;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use saw_core::enumerate::{SeriesOptions, SeriesScope};
use saw_core::estimate::{fisher_envelope, fisher_iterates, fisher_forward, semi_fisher_solve};
use saw_core::graph::{local_transitivity_check, parse_edge, PeriodicGraphSpec};
use saw_core::report::{compare_reports, estimate_graph, EstimateConfig, COUNT_SCHEMA};
use saw_core::transforms::{
    augment_edges, fisher_transform, multiplicities_symmetric, quotient_translation, semi_fisher_transform,
    shortest_same_orbit,
};
use saw_core::{
    count_bridges, count_k_extendable, count_saws, count_saws_for_bounds, count_saws_two_point,
    mean_square_displacement, resolve_graph, AnyGraph, EnumError, EnumOptions, EstimateError, GraphOracle, SawSeries,
    VertexKey,
};

use crate::{CheckArgs, Cli, Command, CompareArgs, CountArgs, EstimateArgs, Format, Output, Relation, SolveArgs, TransformCmd};

const EXIT_USAGE: u8 = 1;
const EXIT_CAP: u8 = 2;

/// Maps an error to the documented exit code.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    let cap = e.chain().any(|c| {
        matches!(c.downcast_ref::<EnumError>(), Some(EnumError::CapExceeded { .. }))
            || matches!(
                c.downcast_ref::<EstimateError>(),
                Some(EstimateError::Enum(EnumError::CapExceeded { .. }))
            )
    });
    if cap {
        EXIT_CAP
    } else {
        EXIT_USAGE
    }
}

pub fn run(cli: &Cli) -> Result<u8> {
    let opts = cli.options();
    let say = |msg: String| {
        if !cli.quiet {
            eprintln!("{}", msg);
        }
    };
    match &cli.command {
        Command::Count(a) => count(a, &opts, &say),
        Command::Estimate(a) => estimate(a, &opts, &say),
        Command::Transform(t) => transform(t),
        Command::Compare(a) => compare(a, &opts, &say),
        Command::Check(a) => check(a),
        Command::Solve(a) => solve(a),
    }
}

fn write_out(out: &Output, text: &str) -> Result<()> {
    match &out.output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => emit(text),
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r.context("writing stdout"),
    }
}

fn graph(sel: &str) -> Result<AnyGraph> {
    resolve_graph(sel).with_context(|| format!("graph `{}`", sel))
}

fn periodic_spec(sel: &str) -> Result<PeriodicGraphSpec> {
    let g = graph(sel)?;
    g.spec()
        .cloned()
        .ok_or_else(|| anyhow!("`{}` is not a periodic graph", sel))
}

fn strings(v: &[num_bigint::BigUint]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

/// Runs an optional extra count; a cap hit is recorded instead of failing.
fn extra<T>(partial: &mut Option<String>, r: Result<T, EnumError>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(EnumError::CapExceeded { reason, .. }) => {
            partial.get_or_insert(reason);
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn count(a: &CountArgs, opts: &EnumOptions, say: &dyn Fn(String)) -> Result<u8> {
    if a.n == 0 {
        bail!("--n must be at least 1");
    }
    let g = graph(&a.graph)?;
    let started = Instant::now();
    say(format!("counting walks on {} up to n = {} with {} workers", g.name(), a.n, opts.workers));
    let mut partial: Option<String> = None;
    let result = if a.all_classes {
        count_saws_for_bounds(&g, a.n, opts)
    } else {
        count_saws(&g, a.n, opts)
    };
    let series = match result {
        Ok(s) => s,
        Err(EnumError::CapExceeded { reason, completed }) => {
            partial = Some(reason);
            SawSeries {
                graph_id: g.name(),
                root: g.root(),
                counts: if completed.is_empty() { vec![1u32.into()] } else { completed },
                options: SeriesOptions::default(),
                scope: SeriesScope::Root,
                transitive: g.meta().claimed_transitive,
                extendable_k: None,
            }
        }
        Err(e) => return Err(e.into()),
    };
    let n = series.n_max();
    let (mut ext, mut two, mut bridges, mut msd) = (None, None, None, None);
    if partial.is_none() {
        if let Some(k) = a.k {
            ext = extra(&mut partial, count_k_extendable(&g, n, k, opts))?;
        }
        if let Some(t) = &a.two_point {
            let parts = t
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .with_context(|| format!("bad vertex key `{}`", t))?;
            two = extra(&mut partial, count_saws_two_point(&g, &VertexKey::new(&parts), n, opts))?;
        }
        if a.bridges {
            bridges = extra(&mut partial, count_bridges(&g, a.axis, n, opts))?;
        }
        if a.msd {
            msd = extra(&mut partial, mean_square_displacement(&g, n, opts))?;
        }
    }
    say(format!("done in {:.2?}", started.elapsed()));
    if let Some(r) = &partial {
        eprintln!("warning: partial result ({}); complete through n = {}", r, n);
    }

    let text = match a.format {
        Format::Csv => {
            let mut head = vec!["n".to_string(), "sigma_n".to_string()];
            if let Some(k) = a.k.filter(|_| ext.is_some()) {
                head.push(format!("extendable_k{}", k));
            }
            if two.is_some() {
                head.push("two_point".into());
            }
            if bridges.is_some() {
                head.push("bridges".into());
            }
            if msd.is_some() {
                head.push("msd".into());
            }
            let mut s = head.join(",") + "\n";
            for i in 1..=n {
                let mut row = vec![i.to_string(), series.counts[i].to_string()];
                if let Some(e) = &ext {
                    row.push(e.counts[i].to_string());
                }
                if let Some(t) = &two {
                    row.push(t.counts[i].to_string());
                }
                if let Some(b) = &bridges {
                    row.push(b.counts[i].to_string());
                }
                if let Some(m) = &msd {
                    row.push(m.mean(i).map_or(String::new(), |r| r.to_string()));
                }
                s.push_str(&(row.join(",") + "\n"));
            }
            s
        }
        Format::Json => {
            let mut v = json!({
                "schema": COUNT_SCHEMA,
                "graph": g.name(),
                "n_max": n,
                "partial": partial.is_some(),
                "partial_reason": partial,
                "series": series,
                "provenance": saw_core::report::Provenance::new(g.name(), g.spec_hash(), opts),
            });
            if let Some(e) = &ext {
                v["extendable"] = json!({ "k": a.k, "counts": strings(&e.counts) });
            }
            if let Some(t) = &two {
                v["two_point"] = serde_json::to_value(t)?;
            }
            if let Some(b) = &bridges {
                v["bridges"] = serde_json::to_value(b)?;
            }
            if let Some(m) = &msd {
                let means: Vec<Value> = m
                    .means()
                    .into_iter()
                    .map(|r| r.map_or(Value::Null, |r| Value::String(r.to_string())))
                    .collect();
                v["msd"] = json!({
                    "counts": strings(&m.counts),
                    "squared_distance_sums": strings(&m.squared_distance_sums),
                    "means": means,
                });
            }
            serde_json::to_string_pretty(&v)? + "\n"
        }
    };
    write_out(&a.out, &text)?;
    Ok(if partial.is_some() { EXIT_CAP } else { 0 })
}

fn estimate(a: &EstimateArgs, opts: &EnumOptions, say: &dyn Fn(String)) -> Result<u8> {
    if a.n == 0 {
        bail!("--n must be at least 1");
    }
    let g = graph(&a.graph)?;
    say(format!("estimating mu for {} at n = {}", g.name(), a.n));
    let cfg = EstimateConfig {
        n_max: a.n,
        bridge_n: a.bridge_n,
        axis: a.axis,
        use_known: a.use_known,
        fisher: a.fisher,
    };
    let r = estimate_graph(&g, g.known_mu(), g.spec_hash(), &cfg, opts)?;
    say(format!("mu in [{:.6}, {:.6}]", r.interval.lower, r.interval.upper));
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&r)? + "\n",
        Format::Csv => r.ratios.as_ref().map(|t| t.to_csv()).unwrap_or_default(),
    };
    write_out(&a.out, &text)?;
    Ok(0)
}

fn transform(t: &TransformCmd) -> Result<u8> {
    let (spec, out) = match t {
        TransformCmd::Fisher(a) => (fisher_transform(&periodic_spec(&a.graph)?)?, &a.out),
        TransformCmd::Semifisher(a) => (semi_fisher_transform(&periodic_spec(&a.graph)?)?, &a.out),
        TransformCmd::Quotient(a) => {
            let base = periodic_spec(&a.graph)?;
            let q = quotient_translation(&base, a.axis, a.modulus)?;
            match shortest_same_orbit(&base, a.axis, a.modulus, a.max_len) {
                Ok(c) => {
                    eprintln!("shortest orbit-closing walk: L = {}", c.length);
                    if c.degenerate {
                        eprintln!("note: degenerate quotient (L <= 2)");
                    }
                }
                Err(e) => eprintln!("warning: {}", e),
            }
            if !multiplicities_symmetric(&q) {
                eprintln!("warning: quotient multiplicities are not symmetric");
            }
            (q, &a.out)
        }
        TransformCmd::Augment(a) => {
            let base = periodic_spec(&a.graph)?;
            let edges = a
                .edges
                .iter()
                .map(|e| parse_edge(e, base.cells(), base.dim).with_context(|| format!("edge `{}`", e)))
                .collect::<Result<Vec<_>>>()?;
            (augment_edges(&base, &edges, a.parallel)?, &a.out)
        }
    };
    write_out(out, &spec.to_text())?;
    Ok(0)
}

fn compare(a: &CompareArgs, opts: &EnumOptions, say: &dyn Fn(String)) -> Result<u8> {
    let ga = graph(&a.a)?;
    let gb = graph(&a.b)?;
    let cfg = |n: usize, bridge_n: Option<usize>| EstimateConfig {
        n_max: n,
        bridge_n,
        axis: a.axis,
        use_known: !a.no_known,
        fisher: false,
    };
    say(format!("bounding mu({}) at n = {}", ga.name(), a.n_a));
    let ra = estimate_graph(&ga, ga.known_mu(), ga.spec_hash(), &cfg(a.n_a, None), opts)?;
    say(format!("bounding mu({}) at n = {}", gb.name(), a.n_b));
    let rb = estimate_graph(&gb, gb.known_mu(), gb.spec_hash(), &cfg(a.n_b, a.bridge_n_b), opts)?;
    let c = compare_reports(ra, rb);
    say(c.verdict.clone());
    write_out(&a.out, &(serde_json::to_string_pretty(&c)? + "\n"))?;
    Ok(0)
}

fn check(a: &CheckArgs) -> Result<u8> {
    let g = graph(&a.graph)?;
    let connected = match g.as_periodic() {
        Some(p) => Some(p.check_connected(64).map(|_| true).unwrap_or(false)),
        None => None,
    };
    let report = local_transitivity_check(&g, a.radius)?;
    let v = json!({
        "graph": g.name(),
        "degree": g.degree(),
        "regular": g.is_regular(),
        "meta": g.meta(),
        "connected": connected,
        "spec_hash": g.spec_hash(),
        "local_transitivity": report,
    });
    emit(&(serde_json::to_string_pretty(&v)? + "\n"))?;
    Ok(0)
}

fn parse_mu(s: &str) -> Result<f64> {
    match s {
        "hexagonal" => Ok((2.0 + 2f64.sqrt()).sqrt()),
        "phi" => Ok((1.0 + 5f64.sqrt()) / 2.0),
        _ => s.parse::<f64>().with_context(|| format!("bad mu `{}`", s)),
    }
}

fn solve(a: &SolveArgs) -> Result<u8> {
    let mu = parse_mu(&a.mu)?;
    let v = match (a.relation, a.iterate) {
        (Relation::Fisher, None) => serde_json::to_value(fisher_forward(mu)?)?,
        (Relation::Fisher, Some(k)) => {
            let phi_inv = 2.0 / (1.0 + 5f64.sqrt());
            let rows: Vec<Value> = fisher_iterates(mu, k)?
                .into_iter()
                .enumerate()
                .map(|(i, m)| {
                    let (lo, hi) = fisher_envelope(i);
                    let gap = 1.0 / m - phi_inv;
                    json!({ "k": i, "mu": m, "gap": gap, "envelope": [lo, hi], "inside": lo <= gap && gap <= hi })
                })
                .collect();
            json!({ "mu0": mu, "iterates": rows })
        }
        (Relation::Semifisher, None) => serde_json::to_value(semi_fisher_solve(mu)?)?,
        (Relation::Semifisher, Some(_)) => bail!("--iterate applies to the Fisher relation only"),
    };
    emit(&(serde_json::to_string_pretty(&v)? + "\n"))?;
    Ok(0)
}
