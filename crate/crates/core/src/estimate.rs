//! Bounds and diagnostics for the connective constant μ.
//!
//! Rigorous bounds come from exact counts: `σ_n^{1/n} >= μ` by
//! submultiplicativity and `b_n^{1/n} <= μ` by bridge supermultiplicativity.
//! Outward rounding of a few ulps keeps the floating-point values on the safe
//! side. Ratio and exponent fits are diagnostics only.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::enumerate::{BridgeSeries, DisplacementSeries, SawSeries, SeriesScope};
use crate::error::EstimateError;

const TOL: f64 = 1e-12;
const OUTWARD: f64 = 8.0 * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rigor {
    RigorousUpper,
    RigorousLower,
    /// Known closed form, valid in both directions.
    Exact,
    Diagnostic,
    /// An upper-bound formula applied where submultiplicativity is not established.
    Heuristic,
}

/// One bound on μ with the method and length that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bound {
    pub value: f64,
    pub method: String,
    pub n: Option<usize>,
    pub rigor: Rigor,
}

impl Bound {
    pub fn new(value: f64, method: impl Into<String>, n: Option<usize>, rigor: Rigor) -> Self {
        Bound {
            value,
            method: method.into(),
            n,
            rigor,
        }
    }

    fn usable_upper(&self) -> bool {
        matches!(self.rigor, Rigor::RigorousUpper | Rigor::Exact)
    }

    fn usable_lower(&self) -> bool {
        matches!(self.rigor, Rigor::RigorousLower | Rigor::Exact)
    }
}

/// ln of a positive big integer without overflowing f64.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

fn root_n(x: &BigUint, n: usize) -> f64 {
    if x.is_zero() {
        0.0
    } else {
        (ln_big(x) / n as f64).exp()
    }
}

/// Per-n values `σ_n^{1/n}` for n = 1..=N.
pub fn upper_profile(s: &SawSeries) -> Vec<f64> {
    (1..s.counts.len()).map(|n| root_n(&s.counts[n], n) * (1.0 + OUTWARD)).collect()
}

/// Per-n values `b_n^{1/n}` for n = 1..=N.
pub fn lower_profile(b: &BridgeSeries) -> Vec<f64> {
    (1..b.counts.len()).map(|n| root_n(&b.counts[n], n) * (1.0 - OUTWARD)).collect()
}

/// `min_{1<=n<=N} σ_n^{1/n}` with its minimizing n.
///
/// Rigorous for transitive oracles and for series maximized over every orbit
/// class; a single-root series on another graph is tagged heuristic.
pub fn mu_upper(s: &SawSeries) -> Result<Bound, EstimateError> {
    if s.counts.len() < 2 {
        return Err(EstimateError::TooShort {
            need: 1,
            got: s.counts.len().saturating_sub(1),
        });
    }
    let prof = upper_profile(s);
    let (i, v) = prof
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    let rigorous = s.transitive || s.scope == SeriesScope::MaxOverClasses;
    let (rigor, method) = if rigorous {
        (Rigor::RigorousUpper, "submultiplicative sigma_n^(1/n)")
    } else {
        (Rigor::Heuristic, "sigma_n^(1/n) from one root of a non-transitive graph")
    };
    Ok(Bound::new(v, method, Some(i + 1), rigor))
}

/// `max_n b_n^{1/n}` with its maximizing n.
pub fn mu_lower_bridge(b: &BridgeSeries) -> Result<Bound, EstimateError> {
    if b.counts.len() < 2 {
        return Err(EstimateError::TooShort { need: 1, got: 0 });
    }
    let prof = lower_profile(b);
    let (i, v) = prof
        .iter()
        .enumerate()
        .fold((0, 0.0), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    if v == 0.0 {
        return Err(EstimateError::NoBridges);
    }
    Ok(Bound::new(v, "bridge b_n^(1/n)", Some(i + 1), Rigor::RigorousLower))
}

/// Irreducible bridge counts `λ_n`, from `b_n = Σ_{k=1}^{n} λ_k b_{n−k}` with `b_0 = 1`.
pub fn irreducible_bridges(b: &BridgeSeries) -> Vec<BigInt> {
    let bn: Vec<BigInt> = b.counts.iter().map(|c| BigInt::from(c.clone())).collect();
    let mut lam = vec![BigInt::zero(); bn.len()];
    for n in 1..bn.len() {
        let mut v = bn[n].clone();
        for k in 1..n {
            v -= &lam[k] * &bn[n - k];
        }
        lam[n] = v;
    }
    lam
}

/// Renewal bound for every prefix length N = 1..=n_max; 0 where none exists.
pub fn renewal_profile(b: &BridgeSeries) -> Vec<f64> {
    (1..b.counts.len())
        .map(|n| {
            let head = BridgeSeries {
                graph_id: b.graph_id.clone(),
                axis: b.axis,
                counts: b.counts[..=n].to_vec(),
            };
            mu_lower_renewal(&head).map_or(0.0, |r| r.value)
        })
        .collect()
}

/// Renewal lower bound `1/x_N`, where `x_N` solves `Σ_{n≤N} λ_n x^n = 1`.
///
/// Bridges factor uniquely into irreducible ones, so the full series `I(x)`
/// stays below 1 for `x < 1/μ`; truncating it only moves the root right.
/// The root is bracketed in floating point and the bracket end is confirmed
/// in exact arithmetic before inverting.
pub fn mu_lower_renewal(b: &BridgeSeries) -> Result<Bound, EstimateError> {
    if b.counts.len() < 2 {
        return Err(EstimateError::TooShort { need: 1, got: 0 });
    }
    let lam = irreducible_bridges(b);
    if let Some(n) = lam.iter().position(|l| l.sign() == num_bigint::Sign::Minus) {
        return Err(EstimateError::BridgeDecomposition(n));
    }
    let n_max = lam.len() - 1;
    let coef: Vec<f64> = lam.iter().map(|l| l.to_f64().unwrap_or(f64::INFINITY)).collect();
    let poly = |x: f64| coef.iter().rev().fold(0.0, |acc, &c| acc * x + c);
    if poly(1.0) < 1.0 {
        return Err(EstimateError::NoBridges);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if poly(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let exact = |x: f64| -> bool {
        let Some(xr) = BigRational::from_float(x) else { return false };
        let mut acc = BigRational::zero();
        for l in lam.iter().rev() {
            acc = acc * &xr + BigRational::from_integer(l.clone());
        }
        acc >= BigRational::from_integer(1.into())
    };
    while !exact(hi) {
        if hi >= 1.0 {
            return Err(EstimateError::NoBridges);
        }
        hi = (hi * (1.0 + OUTWARD)).min(1.0);
    }
    Ok(Bound::new(
        (1.0 / hi) * (1.0 - OUTWARD),
        "irreducible-bridge renewal",
        Some(n_max),
        Rigor::RigorousLower,
    ))
}

fn ratio(a: &BigUint, b: &BigUint) -> Option<f64> {
    if b.is_zero() {
        return None;
    }
    BigRational::new(BigInt::from(a.clone()), BigInt::from(b.clone())).to_f64()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub n: usize,
    /// σ_{n+1}/σ_n
    pub ratio: Option<f64>,
    /// √(σ_{n+2}/σ_n)
    pub root_ratio2: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioTable {
    pub rigor: Rigor,
    pub rows: Vec<RatioRow>,
}

impl RatioTable {
    pub fn to_csv(&self) -> String {
        let cell = |x: Option<f64>| x.map_or(String::new(), |v| format!("{:.12}", v));
        let mut s = String::from("n,ratio,root_ratio2\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{}\n", r.n, cell(r.ratio), cell(r.root_ratio2)));
        }
        s
    }

    pub fn root_ratio2(&self, n: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.n == n).and_then(|r| r.root_ratio2)
    }
}

/// Ratio columns `σ_{n+1}/σ_n` and `√(σ_{n+2}/σ_n)` for n >= 1.
pub fn ratio_diagnostics(s: &SawSeries) -> Result<RatioTable, EstimateError> {
    let big_n = s.counts.len().saturating_sub(1);
    if big_n < 3 {
        return Err(EstimateError::TooShort { need: 3, got: big_n });
    }
    let c = &s.counts;
    let rows = (1..big_n)
        .map(|n| RatioRow {
            n,
            ratio: ratio(&c[n + 1], &c[n]),
            root_ratio2: c.get(n + 2).and_then(|x| ratio(x, &c[n])).map(f64::sqrt),
        })
        .collect();
    Ok(RatioTable {
        rigor: Rigor::Diagnostic,
        rows,
    })
}

/// Root of a strictly increasing `f` on (0,1) with `f(0) = 0 < target < f(1)`.
fn solve_unit(f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64, target: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..20 {
        let r = f(x) - target;
        if r.abs() <= TOL * 1e-3 {
            break;
        }
        let next = x - r / df(x);
        if !(lo..=hi).contains(&next) {
            break;
        }
        x = next;
    }
    (x, (f(x) - target).abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FisherSolve {
    pub mu: f64,
    pub mu_next: f64,
    /// |g(1/μ') − 1/μ|
    pub residual: f64,
}

/// μ' with `g(1/μ') = 1/μ`, g(x) = x² + x³: the connective constant of the
/// Fisher transform of a cubic graph with constant μ.
pub fn fisher_forward(mu: f64) -> Result<FisherSolve, EstimateError> {
    if !(mu > 1.0) || !mu.is_finite() {
        return Err(EstimateError::MuTooSmall(mu));
    }
    let (x, residual) = solve_unit(|x| x * x + x * x * x, |x| 2.0 * x + 3.0 * x * x, 1.0 / mu);
    Ok(FisherSolve {
        mu,
        mu_next: 1.0 / x,
        residual,
    })
}

/// μ_0 = `mu0`, μ_{k+1} = fisher_forward(μ_k) for k < `steps`.
pub fn fisher_iterates(mu0: f64, steps: usize) -> Result<Vec<f64>, EstimateError> {
    let mut v = vec![mu0];
    for _ in 0..steps {
        let last = *v.last().expect("nonempty");
        v.push(fisher_forward(last)?.mu_next);
    }
    Ok(v)
}

/// Bounds on μ_k⁻¹ − φ⁻¹ after k Fisher steps: `(-(4/7)^k, (½(7−√5))^{-k})`.
pub fn fisher_envelope(k: usize) -> (f64, f64) {
    let k = k as i32;
    (-(4.0f64 / 7.0).powi(k), (0.5 * (7.0 - 5f64.sqrt())).powi(-k))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SemiFisherSolve {
    pub mu: f64,
    pub mu_tilde: f64,
    /// |h(1/μ̃) − μ⁻²|
    pub residual: f64,
}

/// μ̃ with `h(1/μ̃) = μ⁻²`, h(x) = x³ + x⁴.
pub fn semi_fisher_solve(mu: f64) -> Result<SemiFisherSolve, EstimateError> {
    if !(mu > 1.0) || !mu.is_finite() {
        return Err(EstimateError::MuTooSmall(mu));
    }
    let (x, residual) = solve_unit(
        |x| x * x * x + x * x * x * x,
        |x| 3.0 * x * x + 4.0 * x * x * x,
        1.0 / (mu * mu),
    );
    Ok(SemiFisherSolve {
        mu,
        mu_tilde: 1.0 / x,
        residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DegreeBounds {
    pub degree: usize,
    pub simple: bool,
    pub ceiling: f64,
    /// `√(Δ−1)`, withheld for non-simple graphs with Δ > 4.
    pub floor: Option<f64>,
}

/// `μ <= Δ−1` always; `μ >= √(Δ−1)` for transitive graphs that are simple or have Δ <= 4.
/// The floor is only valid for transitive graphs, which callers must check.
pub fn degree_bounds(degree: usize, simple: bool) -> Result<DegreeBounds, EstimateError> {
    if degree < 2 {
        return Err(EstimateError::DegreeTooSmall(degree));
    }
    let ceiling = (degree - 1) as f64;
    Ok(DegreeBounds {
        degree,
        simple,
        ceiling,
        floor: (simple || degree <= 4).then(|| ceiling.sqrt()),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// root-mean-square residual
    pub rms: f64,
    pub points: usize,
}

fn least_squares(pts: &[(f64, f64)]) -> Result<LineFit, EstimateError> {
    if pts.len() < 4 {
        return Err(EstimateError::DegenerateFit(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(EstimateError::DegenerateFit(pts.len()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / n).sqrt();
    Ok(LineFit {
        slope,
        intercept,
        rms,
        points: pts.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentFit {
    pub rigor: Rigor,
    pub mu_hat: f64,
    pub gamma_hat: f64,
    pub nu_hat: f64,
    /// log(σ_n/μ̂^n) against log n; slope is γ−1
    pub gamma_fit: LineFit,
    /// log⟨‖π‖²⟩_n against log n; slope is 2ν
    pub nu_fit: LineFit,
}

/// Least-squares estimates of γ and ν from exact series and a guess for μ.
pub fn exponent_diagnostics(
    s: &SawSeries,
    msd: &DisplacementSeries,
    mu_hat: f64,
) -> Result<ExponentFit, EstimateError> {
    let big_n = s.counts.len().saturating_sub(1).min(msd.counts.len().saturating_sub(1));
    if big_n < 8 {
        return Err(EstimateError::TooShort { need: 8, got: big_n });
    }
    if !(mu_hat > 1.0) {
        return Err(EstimateError::MuTooSmall(mu_hat));
    }
    let g_pts: Vec<(f64, f64)> = (1..=big_n)
        .filter(|&n| !s.counts[n].is_zero())
        .map(|n| {
            let x = (n as f64).ln();
            (x, ln_big(&s.counts[n]) - n as f64 * mu_hat.ln())
        })
        .collect();
    let n_pts: Vec<(f64, f64)> = (1..=big_n)
        .filter_map(|n| {
            let m = msd.mean(n)?.to_f64()?;
            (m > 0.0).then(|| ((n as f64).ln(), m.ln()))
        })
        .collect();
    let gamma_fit = least_squares(&g_pts)?;
    let nu_fit = least_squares(&n_pts)?;
    Ok(ExponentFit {
        rigor: Rigor::Diagnostic,
        mu_hat,
        gamma_hat: 1.0 + gamma_fit.slope,
        nu_hat: nu_fit.slope / 2.0,
        gamma_fit,
        nu_fit,
    })
}

/// A bracket for μ assembled from the tightest rigorous bounds supplied.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MuInterval {
    pub lower: f64,
    pub upper: f64,
    pub lower_witness: Bound,
    pub upper_witness: Bound,
}

impl MuInterval {
    /// Picks the largest usable lower and smallest usable upper bound;
    /// diagnostic and heuristic entries are ignored.
    pub fn from_bounds(bounds: &[Bound]) -> MuInterval {
        let mut lower = Bound::new(0.0, "trivial", None, Rigor::RigorousLower);
        let mut upper = Bound::new(f64::INFINITY, "trivial", None, Rigor::RigorousUpper);
        for b in bounds {
            if b.usable_lower() && b.value > lower.value {
                lower = b.clone();
            }
            if b.usable_upper() && b.value < upper.value {
                upper = b.clone();
            }
        }
        MuInterval {
            lower: lower.value,
            upper: upper.value,
            lower_witness: lower,
            upper_witness: upper,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn is_consistent(&self) -> bool {
        self.lower <= self.upper
    }
}
