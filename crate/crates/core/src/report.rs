//! Interval reports and separation checks built from exact counts.

use serde::Serialize;

use crate::enumerate::{count_bridges, count_saws_for_bounds, EnumOptions, SawSeries, SeriesScope};
use crate::error::{EnumError, EstimateError};
use crate::estimate::{
    degree_bounds, fisher_forward, lower_profile, mu_lower_bridge, mu_lower_renewal, mu_upper, renewal_profile, ratio_diagnostics, upper_profile, Bound, MuInterval,
    RatioTable, Rigor,
};
use crate::graph::{GraphOracle, KnownMu};

pub const ESTIMATE_SCHEMA: &str = "sawcount.estimate/1";
pub const COMPARE_SCHEMA: &str = "sawcount.compare/1";
pub const COUNT_SCHEMA: &str = "sawcount.count/1";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub graph: String,
    pub spec_hash: Option<String>,
    pub workers: usize,
    pub split_depth: usize,
    pub max_ball_vertices: usize,
}

impl Provenance {
    pub fn new(graph: String, spec_hash: Option<String>, opts: &EnumOptions) -> Self {
        Provenance {
            tool: "sawcount",
            version: env!("CARGO_PKG_VERSION"),
            graph,
            spec_hash,
            workers: opts.workers,
            split_depth: opts.split_depth,
            max_ball_vertices: opts.max_ball_vertices,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EstimateConfig {
    pub n_max: usize,
    /// Bridge length; defaults to `n_max`.
    pub bridge_n: Option<usize>,
    pub axis: usize,
    /// Include a closed-form μ when one is known.
    pub use_known: bool,
    /// Map the interval through the Fisher relation (cubic graphs only).
    pub fisher: bool,
}

impl EstimateConfig {
    pub fn new(n_max: usize) -> Self {
        EstimateConfig {
            n_max,
            bridge_n: None,
            axis: 0,
            use_known: false,
            fisher: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub schema: &'static str,
    pub graph: String,
    pub n_max: usize,
    pub bridge_n: Option<usize>,
    pub interval: MuInterval,
    /// Every bound considered, tightest or not.
    pub witnesses: Vec<Bound>,
    /// `σ_n^{1/n}` for n = 1..=n_max
    pub upper_profile: Vec<f64>,
    /// `b_n^{1/n}` for n = 1..=bridge_n
    pub lower_profile: Vec<f64>,
    /// Irreducible-bridge renewal bound using bridges up to n, n = 1..=bridge_n
    pub renewal_profile: Vec<f64>,
    pub ratios: Option<RatioTable>,
    /// Interval for μ of the Fisher transform, the image of `interval`
    /// under the increasing map μ ↦ μ'.
    pub fisher_image: Option<[f64; 2]>,
    pub diagnostics: Vec<String>,
    pub provenance: Provenance,
    #[serde(skip)]
    pub series: Option<SawSeries>,
}

/// Counts walks (and bridges on periodic graphs) and assembles the tightest
/// rigorous interval for μ.
pub fn estimate_graph<G: GraphOracle + ?Sized>(
    g: &G,
    known: Option<KnownMu>,
    spec_hash: Option<String>,
    cfg: &EstimateConfig,
    opts: &EnumOptions,
) -> Result<EstimateReport, EstimateError> {
    let meta = g.meta();
    let mut bounds = Vec::new();
    let mut notes = Vec::new();

    let s = count_saws_for_bounds(g, cfg.n_max, opts)?;
    let up = mu_upper(&s)?;
    if s.scope == SeriesScope::MaxOverClasses {
        notes.push(format!(
            "upper bound uses the maximum of sigma_n over {} orbit representatives",
            g.representatives().len()
        ));
    }
    if up.rigor == Rigor::Heuristic {
        notes.push("upper bound is heuristic: graph does not claim transitivity".into());
    }
    bounds.push(up.clone());

    let mut lower_prof = Vec::new();
    let mut renewal_prof = Vec::new();
    let bridge_n = cfg.bridge_n.unwrap_or(cfg.n_max);
    let mut bridge_used = None;
    if g.as_periodic().is_some() {
        match count_bridges(g, cfg.axis, bridge_n, opts) {
            Ok(b) => {
                lower_prof = lower_profile(&b);
                renewal_prof = renewal_profile(&b);
                bridge_used = Some(bridge_n);
                match mu_lower_bridge(&b) {
                    Ok(l) => bounds.push(l),
                    Err(EstimateError::NoBridges) => notes.push("no bridges found along the chosen axis".into()),
                    Err(e) => return Err(e),
                }
                match mu_lower_renewal(&b) {
                    Ok(l) => bounds.push(l),
                    Err(EstimateError::NoBridges) => {}
                    Err(e) => notes.push(format!("renewal bound skipped: {}", e)),
                }
            }
            Err(EnumError::Graph(e)) => notes.push(format!("bridges unavailable: {}", e)),
            Err(e) => return Err(e.into()),
        }
    } else {
        notes.push("bridge lower bound needs a periodic graph".into());
    }

    let delta = g.degree();
    if let Ok(db) = degree_bounds(delta, meta.simple) {
        if meta.infinite {
            bounds.push(Bound::new(db.ceiling, "degree ceiling Δ−1", None, Rigor::RigorousUpper));
            if up.value > db.ceiling {
                notes.push(format!(
                    "enumeration upper bound {:.6} still exceeds the degree ceiling {}",
                    up.value, db.ceiling
                ));
            }
        }
        match db.floor {
            Some(f) if meta.claimed_transitive && meta.infinite && !meta.is_directed => {
                bounds.push(Bound::new(f, "degree floor sqrt(Δ−1)", None, Rigor::RigorousLower));
            }
            None if meta.claimed_transitive => {
                notes.push(format!("degree floor withheld: non-simple graph with Δ = {} > 4", delta))
            }
            _ => {}
        }
    }

    if cfg.use_known {
        if let Some(k) = known {
            bounds.push(Bound::new(k.value, format!("exact: {}", k.source), None, Rigor::Exact));
        }
    }

    let ratios = ratio_diagnostics(&s).ok();
    let interval = MuInterval::from_bounds(&bounds);
    let mut fisher_image = None;
    if cfg.fisher {
        if delta == 3 && g.is_regular() && meta.simple && !meta.is_directed {
            let lo = fisher_forward(interval.lower).map(|f| f.mu_next).unwrap_or(1.0);
            let hi = fisher_forward(interval.upper).map(|f| f.mu_next).unwrap_or(f64::INFINITY);
            fisher_image = Some([lo, hi]);
        } else {
            notes.push("Fisher relation skipped: graph is not simple and cubic".into());
        }
    }
    if !interval.is_consistent() {
        notes.push("inconsistent interval: lower bound exceeds upper bound".into());
    }
    Ok(EstimateReport {
        schema: ESTIMATE_SCHEMA,
        graph: g.name(),
        n_max: cfg.n_max,
        bridge_n: bridge_used,
        interval,
        witnesses: bounds,
        upper_profile: upper_profile(&s),
        lower_profile: lower_prof,
        renewal_profile: renewal_prof,
        ratios,
        fisher_image,
        diagnostics: notes,
        provenance: Provenance::new(g.name(), spec_hash, opts),
        series: Some(s),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationReport {
    pub schema: &'static str,
    /// `upper(A) < lower(B)` was established.
    pub separated: bool,
    pub upper_a: f64,
    pub lower_b: f64,
    pub upper_a_witness: Bound,
    pub lower_b_witness: Bound,
    /// Smallest walk length on A whose upper bound already beats lower(B).
    pub witness_n_a: Option<usize>,
    /// Smallest bridge length on B whose lower bound already beats upper(A).
    pub witness_n_b: Option<usize>,
    pub verdict: String,
    pub a: EstimateReport,
    pub b: EstimateReport,
}

fn first_prefix(profile: &[f64], beats: impl Fn(f64) -> bool) -> Option<usize> {
    profile.iter().position(|&v| beats(v)).map(|i| i + 1)
}

/// Reports whether the intervals show `μ(A) < μ(B)`. This is an interval
/// separation at the recorded lengths, never a proof of anything beyond it.
pub fn compare_reports(a: EstimateReport, b: EstimateReport) -> SeparationReport {
    let (ua, lb) = (a.interval.upper, b.interval.lower);
    let separated = ua < lb;
    let enum_a = a.interval.upper_witness.n.is_some();
    let enum_b = b.interval.lower_witness.n.is_some();
    let witness_n_a = (separated && enum_a).then(|| first_prefix(&a.upper_profile, |v| v < lb)).flatten();
    let best_lower: Vec<f64> = b
        .lower_profile
        .iter()
        .zip(b.renewal_profile.iter().chain(std::iter::repeat(&0.0)))
        .map(|(x, y)| x.max(*y))
        .collect();
    let witness_n_b = (separated && enum_b).then(|| first_prefix(&best_lower, |v| v > ua)).flatten();
    let verdict = if separated {
        format!(
            "separation achieved: mu({}) <= {:.6} < {:.6} <= mu({})",
            a.graph, ua, lb, b.graph
        )
    } else {
        format!(
            "no separation: upper({}) = {:.6} >= lower({}) = {:.6}",
            a.graph, ua, b.graph, lb
        )
    };
    SeparationReport {
        schema: COMPARE_SCHEMA,
        separated,
        upper_a: ua,
        lower_b: lb,
        upper_a_witness: a.interval.upper_witness.clone(),
        lower_b_witness: b.interval.lower_witness.clone(),
        witness_n_a,
        witness_n_b,
        verdict,
        a,
        b,
    }
}
