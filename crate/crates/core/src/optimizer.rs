//! Maximization of `DJ_alpha` over the reduced domain `Theta`, a lattice
//! brute-force oracle, and closed forms for special cases.
//!
//! On `Theta` each probability vector is the frontier maximizer with a given
//! row entropy, so `h(p_i) = psi(z_i)` and `h_r(p_i) = z_i`. Every `d_i` is a
//! nonnegative combination of the concave `psi(z_j)` and the linear `z_j`, so
//! the objective is concave. It is maximized in epigraph form
//!
//! ```text
//! maximize t  subject to  d_i(z) >= t,  z in Theta
//! ```
//!
//! with a log-barrier interior-point method and damped Newton steps,
//! restarted from a grid of interior points.

use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::carpet::{
    dim_functions, features, CarpetSpec, DimBreakdown, DimCoefficients, DimParams,
    EntropyProfile, ProbVector, Quad,
};
use crate::error::{Error, Result};
use crate::frontier::Frontier;

/// Slack allowed when checking membership in `Theta`.
const THETA_TOL: f64 = 1e-10;
/// Width below which a frontier interval is treated as a single point.
const DEGENERATE_WIDTH: f64 = 1e-12;

/// Row entropies `(z_-, z_1, z_2, z_+)` of the four frontier vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaPoint {
    pub z_minus: f64,
    pub z1: f64,
    pub z2: f64,
    pub z_plus: f64,
}

impl ThetaPoint {
    pub fn new(z_minus: f64, z1: f64, z2: f64, z_plus: f64) -> Self {
        Self {
            z_minus,
            z1,
            z2,
            z_plus,
        }
    }

    pub fn splat(z: f64) -> Self {
        Self::new(z, z, z, z)
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.z_minus, self.z1, self.z2, self.z_plus]
    }

    pub fn from_array(z: [f64; 4]) -> Self {
        Self::new(z[0], z[1], z[2], z[3])
    }

    /// Checks the `Theta` box and `z_1 >= z_-` with absolute slack `tol`.
    pub fn check(&self, spec: &CarpetSpec, tol: f64) -> Result<()> {
        let f = Frontier::new(spec);
        let (lo, mid, hi) = (f.hr_max_entropy(), f.hr_max_dimension(), spec.log_r());
        let bounds = [
            (self.z_minus, lo, mid),
            (self.z1, self.z_minus, hi),
            (self.z2, lo, hi),
            (self.z_plus, mid, hi),
        ];
        for (value, lo, hi) in bounds {
            if !(value >= lo - tol && value <= hi + tol) {
                return Err(Error::Domain { value, lo, hi });
            }
        }
        Ok(())
    }

    fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.to_array()
            .iter()
            .zip(other.to_array().iter())
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    }
}

/// Solver statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    /// Number of multistart runs.
    pub starts: usize,
    /// Newton steps summed over all starts.
    pub newton_steps: usize,
    /// `max - min` of the values reached by the starts.
    pub value_spread: f64,
    /// Largest final Newton decrement over the starts.
    pub newton_decrement: f64,
    /// Bound on the final barrier duality gap.
    pub barrier_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    /// `DIM(alpha, H)`.
    pub value: f64,
    pub argmax: ThetaPoint,
    pub breakdown: DimBreakdown,
    /// The lifted `(p_-, p_1, p_2, p_+)`.
    pub vectors: Quad<ProbVector>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximizeOptions {
    /// Interior starting fractions per free coordinate.
    pub grid_starts: usize,
    /// Stop once the barrier duality-gap bound falls below this.
    pub gap_tol: f64,
    /// Newton step cap per start.
    pub max_iters: usize,
    /// Largest allowed disagreement between starts.
    pub agreement_tol: f64,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        Self {
            grid_starts: 2,
            gap_tol: 1e-10,
            max_iters: 2000,
            agreement_tol: 1e-6,
        }
    }
}

/// `d_1 ... d_6` at `theta`, with `h(p_i) = psi(z_i)` and `h_r(p_i) = z_i`.
pub fn objective(spec: &CarpetSpec, params: &DimParams, theta: &ThetaPoint) -> Result<DimBreakdown> {
    theta.check(spec, THETA_TOL)?;
    let f = Frontier::new(spec);
    objective_with(&f, spec, params, theta)
}

fn objective_with(
    f: &Frontier,
    spec: &CarpetSpec,
    params: &DimParams,
    theta: &ThetaPoint,
) -> Result<DimBreakdown> {
    let z = theta.to_array();
    let mut prof = [EntropyProfile::new(0.0, 0.0); 4];
    for (p, &zj) in prof.iter_mut().zip(&z) {
        *p = EntropyProfile::new(f.psi(zj)?, zj);
    }
    Ok(dim_functions(
        spec,
        params,
        &Quad::new(prof[0], prof[1], prof[2], prof[3]),
    ))
}

/// Linear constraint `a . v + b >= 0` on the free coordinates.
#[derive(Debug, Clone)]
struct Linear {
    a: Vec<f64>,
    b: f64,
}

struct Problem<'a> {
    frontier: &'a Frontier,
    coef: DimCoefficients,
    /// Maps full coordinate `j` to its free variable.
    slot: [usize; 4],
    nfree: usize,
    linear: Vec<Linear>,
}

struct Eval {
    d: [f64; 6],
    grad: [Vec<f64>; 6],
    hess: [Vec<f64>; 6],
}

impl<'a> Problem<'a> {
    fn new(spec: &CarpetSpec, params: &DimParams, frontier: &'a Frontier, drop_first: bool) -> Self {
        let (lo, mid, hi) = (
            frontier.hr_max_entropy(),
            frontier.hr_max_dimension(),
            spec.log_r(),
        );
        let slot = if drop_first { [0, 0, 1, 2] } else { [0, 1, 2, 3] };
        let nfree = if drop_first { 3 } else { 4 };
        let unit = |k: usize, s: f64| {
            let mut a = vec![0.0; nfree];
            a[k] = s;
            a
        };
        let mut linear = vec![
            Linear { a: unit(slot[0], 1.0), b: -lo },
            Linear { a: unit(slot[0], -1.0), b: mid },
            Linear { a: unit(slot[2], 1.0), b: -lo },
            Linear { a: unit(slot[2], -1.0), b: hi },
            Linear { a: unit(slot[3], 1.0), b: -mid },
            Linear { a: unit(slot[3], -1.0), b: hi },
        ];
        if !drop_first {
            let mut a = unit(slot[1], 1.0);
            a[slot[0]] = -1.0;
            linear.push(Linear { a, b: 0.0 });
            linear.push(Linear { a: unit(slot[1], -1.0), b: hi });
        }
        Self {
            frontier,
            coef: DimCoefficients::new(spec, params),
            slot,
            nfree,
            linear,
        }
    }

    fn full(&self, v: &[f64]) -> [f64; 4] {
        [v[self.slot[0]], v[self.slot[1]], v[self.slot[2]], v[self.slot[3]]]
    }

    fn eval(&self, v: &[f64]) -> Result<Eval> {
        let z = self.full(v);
        let mut feat = [0.0; 8];
        let mut dpsi = [0.0; 4];
        let mut ddpsi = [0.0; 4];
        for j in 0..4 {
            let (p, d1, d2) = self.frontier.psi_derivatives(z[j])?;
            feat[2 * j] = p;
            feat[2 * j + 1] = z[j];
            dpsi[j] = d1;
            ddpsi[j] = d2;
        }
        let d = self.coef.eval(&feat);
        let mut grad: [Vec<f64>; 6] = Default::default();
        let mut hess: [Vec<f64>; 6] = Default::default();
        for i in 0..6 {
            let row = &self.coef.coef[i];
            let mut g = vec![0.0; self.nfree];
            let mut h = vec![0.0; self.nfree];
            for j in 0..4 {
                let (c_h, c_r) = (row[2 * j], row[2 * j + 1]);
                let k = self.slot[j];
                g[k] += c_r;
                if c_h != 0.0 {
                    g[k] += c_h * dpsi[j];
                    h[k] += c_h * ddpsi[j];
                }
            }
            grad[i] = g;
            hess[i] = h;
        }
        Ok(Eval { d, grad, hess })
    }

    fn linear_slacks(&self, v: &[f64]) -> Vec<f64> {
        self.linear
            .iter()
            .map(|c| c.a.iter().zip(v).map(|(a, x)| a * x).sum::<f64>() + c.b)
            .collect()
    }

    fn constraint_count(&self) -> usize {
        self.linear.len() + 6
    }
}

struct StartOutcome {
    theta: ThetaPoint,
    breakdown: DimBreakdown,
    newton_steps: usize,
    decrement: f64,
}

fn all_positive(xs: &[f64]) -> bool {
    xs.iter().all(|&s| s > 0.0 && s.is_finite())
}

fn run_barrier(problem: &Problem<'_>, start: Vec<f64>, opts: &MaximizeOptions) -> Result<(Vec<f64>, usize, f64)> {
    let n = problem.nfree;
    let mut v = start;
    let mut ev = problem.eval(&v)?;
    let dmin = ev.d.iter().copied().fold(f64::INFINITY, f64::min);
    let mut t = dmin - 0.5;
    let mut mu = 0.1;
    let mu_final = opts.gap_tol / problem.constraint_count() as f64;
    let mut steps = 0usize;
    let mut last_dec = 0.0;
    loop {
        for _ in 0..opts.max_iters {
            let lin = problem.linear_slacks(&v);
            let ds: Vec<f64> = ev.d.iter().map(|d| d - t).collect();
            let mut g = DVector::<f64>::zeros(n + 1);
            let mut h = DMatrix::<f64>::zeros(n + 1, n + 1);
            g[n] = 1.0 / mu;
            for (c, s) in problem.linear.iter().zip(&lin) {
                for k in 0..n {
                    g[k] += c.a[k] / s;
                    for l in 0..n {
                        h[(k, l)] += c.a[k] * c.a[l] / (s * s);
                    }
                }
            }
            for i in 0..6 {
                let s = ds[i];
                let mut grad = ev.grad[i].clone();
                grad.push(-1.0);
                for k in 0..=n {
                    g[k] += grad[k] / s;
                    for l in 0..=n {
                        h[(k, l)] += grad[k] * grad[l] / (s * s);
                    }
                }
                for k in 0..n {
                    h[(k, k)] -= ev.hess[i][k] / s;
                }
            }
            let delta = match h.clone().cholesky() {
                Some(ch) => ch.solve(&g),
                None => {
                    let ridge = 1e-12 * (0..=n).map(|k| h[(k, k)].abs()).fold(1.0, f64::max);
                    let mut hr = h.clone();
                    for k in 0..=n {
                        hr[(k, k)] += ridge;
                    }
                    hr.cholesky()
                        .ok_or_else(|| Error::ConvergenceFailure("singular Newton system".into()))?
                        .solve(&g)
                }
            };
            let dec2 = g.dot(&delta);
            if !dec2.is_finite() {
                return Err(Error::ConvergenceFailure("non-finite Newton step".into()));
            }
            last_dec = dec2.max(0.0).sqrt();
            if dec2 <= 2e-10 {
                break;
            }
            let mut step = 1.0;
            let mut accepted = false;
            for _ in 0..80 {
                let nv: Vec<f64> = (0..n).map(|k| v[k] + step * delta[k]).collect();
                let nt = t + step * delta[n];
                let nlin = problem.linear_slacks(&nv);
                if all_positive(&nlin) {
                    if let Ok(nev) = problem.eval(&nv) {
                        let nds: Vec<f64> = nev.d.iter().map(|d| d - nt).collect();
                        if all_positive(&nds) {
                            let gain = (nt - t) / mu
                                + nlin.iter().zip(&lin).map(|(a, b)| (a / b).ln()).sum::<f64>()
                                + nds.iter().zip(&ds).map(|(a, b)| (a / b).ln()).sum::<f64>();
                            if gain >= 1e-4 * step * dec2 {
                                v = nv;
                                t = nt;
                                ev = nev;
                                accepted = true;
                                break;
                            }
                        }
                    }
                }
                step *= 0.5;
            }
            steps += 1;
            if !accepted {
                break;
            }
        }
        if mu <= mu_final {
            break;
        }
        mu = (mu * 0.2).max(mu_final);
    }
    Ok((v, steps, last_dec))
}

fn start_points(problem: &Problem<'_>, lo: f64, mid: f64, hi: f64, per_axis: usize) -> Vec<Vec<f64>> {
    let fracs: Vec<f64> = (0..per_axis)
        .map(|i| (i + 1) as f64 / (per_axis + 1) as f64)
        .collect();
    let free_first = problem.nfree == 4;
    let mut out = Vec::new();
    let mut idx = vec![0usize; problem.nfree];
    loop {
        let zm = lo + fracs[idx[0]] * (mid - lo);
        let mut v = vec![zm];
        let mut k = 1;
        if free_first {
            v.push(zm + fracs[idx[1]] * (hi - zm));
            k = 2;
        }
        v.push(lo + fracs[idx[k]] * (hi - lo));
        v.push(mid + fracs[idx[k + 1]] * (hi - mid));
        out.push(v);
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < per_axis {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn lift_all(f: &Frontier, spec: &CarpetSpec, theta: &ThetaPoint) -> Result<Quad<ProbVector>> {
    Ok(Quad::new(
        f.lift(spec, theta.z_minus)?,
        f.lift(spec, theta.z1)?,
        f.lift(spec, theta.z2)?,
        f.lift(spec, theta.z_plus)?,
    ))
}

/// `DIM(alpha, H) = max_Theta min_i d_i`.
pub fn maximize(spec: &CarpetSpec, params: &DimParams, opts: &MaximizeOptions) -> Result<OptResult> {
    if opts.grid_starts == 0 {
        return Err(Error::InvalidParams("grid_starts must be >= 1".into()));
    }
    let f = Frontier::new(spec);
    let (lo, mid, hi) = (f.hr_max_entropy(), f.hr_max_dimension(), spec.log_r());
    let direct = |theta: ThetaPoint| -> Result<OptResult> {
        let breakdown = objective_with(&f, spec, params, &theta)?;
        Ok(OptResult {
            value: breakdown.dj,
            argmax: theta,
            breakdown,
            vectors: lift_all(&f, spec, &theta)?,
            diagnostics: Diagnostics {
                starts: 0,
                newton_steps: 0,
                value_spread: 0.0,
                newton_decrement: 0.0,
                barrier_gap: 0.0,
            },
        })
    };
    if params.alpha == 0.0 {
        return direct(ThetaPoint::splat(mid));
    }
    if hi - lo < DEGENERATE_WIDTH {
        return direct(ThetaPoint::splat(hi));
    }
    let drop_first = params.upper_weight(spec.tau()) <= 0.0;
    let problem = Problem::new(spec, params, &f, drop_first);
    let starts = start_points(&problem, lo, mid, hi, opts.grid_starts);
    let outcomes: Vec<Result<StartOutcome>> = starts
        .into_par_iter()
        .map(|s| {
            let (v, newton_steps, decrement) = run_barrier(&problem, s, opts)?;
            let z = problem.full(&v);
            let mut theta = ThetaPoint::from_array(z);
            theta.z_minus = theta.z_minus.clamp(lo, mid);
            theta.z1 = theta.z1.clamp(theta.z_minus, hi);
            theta.z2 = theta.z2.clamp(lo, hi);
            theta.z_plus = theta.z_plus.clamp(mid, hi);
            let breakdown = objective_with(&f, spec, params, &theta)?;
            Ok(StartOutcome {
                theta,
                breakdown,
                newton_steps,
                decrement,
            })
        })
        .collect();
    let outcomes: Vec<StartOutcome> = outcomes.into_iter().collect::<Result<_>>()?;
    let best = outcomes
        .iter()
        .map(|o| o.breakdown.dj)
        .fold(f64::NEG_INFINITY, f64::max);
    let worst = outcomes
        .iter()
        .map(|o| o.breakdown.dj)
        .fold(f64::INFINITY, f64::min);
    if !(best.is_finite() && worst.is_finite()) {
        return Err(Error::ConvergenceFailure("non-finite objective".into()));
    }
    if best - worst > opts.agreement_tol {
        return Err(Error::ConvergenceFailure(format!(
            "multistart values disagree: {worst} vs {best}"
        )));
    }
    let winner = outcomes
        .iter()
        .filter(|o| o.breakdown.dj >= best - 1e-8)
        .min_by(|a, b| a.theta.lex_cmp(&b.theta))
        .expect("at least one start");
    Ok(OptResult {
        value: winner.breakdown.dj,
        argmax: winner.theta,
        breakdown: winner.breakdown.clone(),
        vectors: lift_all(&f, spec, &winner.theta)?,
        diagnostics: Diagnostics {
            starts: outcomes.len(),
            newton_steps: outcomes.iter().map(|o| o.newton_steps).sum(),
            value_spread: best - worst,
            newton_decrement: outcomes.iter().map(|o| o.decrement).fold(0.0, f64::max),
            barrier_gap: opts.gap_tol,
        },
    })
}

/// `maximize` at each `alpha`, in parallel, results in input order.
pub fn sweep(
    spec: &CarpetSpec,
    params: &DimParams,
    alphas: &[f64],
    opts: &MaximizeOptions,
) -> Result<Vec<OptResult>> {
    let checked: Vec<DimParams> = alphas
        .iter()
        .map(|&a| DimParams::new(spec, params.target, a, params.h_avg))
        .collect::<Result<_>>()?;
    checked
        .par_iter()
        .map(|p| maximize(spec, p, opts))
        .collect()
}

/// Default cap on the lattice size and on the pruned quadruple search.
pub const BRUTE_FORCE_CAP: f64 = 1e12;

fn binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Pareto-maximal `(h, h_r)` pairs of the lattice vectors `c / k`.
fn lattice_profiles(spec: &CarpetSpec, k: u32) -> Vec<(f64, f64)> {
    let d = spec.d();
    let col: Vec<usize> = (0..d).map(|i| spec.column_of(i)).collect();
    let mut counts = vec![0u32; d];
    let mut out = Vec::new();
    let kf = k as f64;
    fn rec(
        pos: usize,
        left: u32,
        counts: &mut [u32],
        col: &[usize],
        r: usize,
        kf: f64,
        out: &mut Vec<(f64, f64)>,
    ) {
        if pos + 1 == counts.len() {
            counts[pos] = left;
            let mut rows = vec![0.0; r];
            let mut h = 0.0;
            for (i, &c) in counts.iter().enumerate() {
                if c > 0 {
                    let p = c as f64 / kf;
                    h -= p * p.ln();
                    rows[col[i]] += p;
                }
            }
            let hr = rows
                .iter()
                .filter(|&&p| p > 0.0)
                .map(|&p| -p * p.ln())
                .sum();
            out.push((h, hr));
            return;
        }
        for c in 0..=left {
            counts[pos] = c;
            rec(pos + 1, left - c, counts, col, r, kf, out);
        }
    }
    rec(0, k, &mut counts, &col, spec.r(), kf, &mut out);
    pareto(out)
}

fn pareto(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| b.1.total_cmp(&a.1).then(b.0.total_cmp(&a.0)));
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut best_h = f64::NEG_INFINITY;
    for p in pts {
        if p.0 > best_h {
            best_h = p.0;
            out.push(p);
        }
    }
    out
}

/// Max of `DJ_alpha` over quadruples of lattice probability vectors with
/// denominator `k`. A lower bound for `maximize`.
pub fn brute_force(spec: &CarpetSpec, params: &DimParams, k: u32) -> Result<f64> {
    brute_force_with_cap(spec, params, k, BRUTE_FORCE_CAP)
}

pub fn brute_force_with_cap(spec: &CarpetSpec, params: &DimParams, k: u32, cap: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParams("resolution must be >= 1".into()));
    }
    let d = spec.d() as u64;
    let lattice = binomial(k as u64 + d - 1, d - 1);
    if lattice > cap.min(1e8) {
        return Err(Error::ResourceLimit(format!(
            "{lattice:.3e} lattice vectors at resolution {k}"
        )));
    }
    let pts = lattice_profiles(spec, k);
    let drop_first = params.upper_weight(spec.tau()) <= 0.0;
    let firsts: Vec<(f64, f64)> = if drop_first { vec![pts[0]] } else { pts.clone() };
    let projected = (pts.len() as f64).powi(3) * firsts.len() as f64;
    if projected > cap {
        return Err(Error::ResourceLimit(format!(
            "{projected:.3e} quadruples at resolution {k}"
        )));
    }
    let coef = DimCoefficients::new(spec, params);
    let hmax = pts.iter().map(|p| p.0).fold(0.0, f64::max);
    let rmax = pts.iter().map(|p| p.1).fold(0.0, f64::max);
    let top = (hmax, rmax);
    let value = |q: [(f64, f64); 4]| -> [f64; 6] {
        let prof = Quad::new(
            EntropyProfile::new(q[0].0, q[0].1),
            EntropyProfile::new(q[1].0, q[1].1),
            EntropyProfile::new(q[2].0, q[2].1),
            EntropyProfile::new(q[3].0, q[3].1),
        );
        coef.eval(&features(&prof))
    };
    let min6 = |d: [f64; 6]| d.iter().copied().fold(f64::INFINITY, f64::min);

    let mut seed = f64::NEG_INFINITY;
    for &p in &pts {
        let f1 = if drop_first { firsts[0] } else { p };
        seed = seed.max(min6(value([p, f1, p, p])));
    }
    let best = AtomicU64::new(seed.max(0.0).to_bits());
    let read = |b: &AtomicU64| f64::from_bits(b.load(Ordering::Relaxed));

    pts.par_iter().for_each(|&pm| {
        let ub = min6(value([pm, top, top, top]));
        if ub <= read(&best) {
            return;
        }
        for &p1 in &firsts {
            if min6(value([pm, p1, top, top])) <= read(&best) {
                continue;
            }
            for &p2 in &pts {
                if min6(value([pm, p1, p2, top])) <= read(&best) {
                    continue;
                }
                for &pp in &pts {
                    let v = min6(value([pm, p1, p2, pp]));
                    if v > read(&best) {
                        best.fetch_max(v.to_bits(), Ordering::Relaxed);
                    }
                }
            }
        }
    });
    Ok(read(&best))
}

/// `min{(tau + 1)/(1 + alpha), 2 tau/(tau + alpha)}` for the full `n x m` torus.
///
/// Matches [`maximize`] for `tau <= 2`. For `tau > 2` the two disagree at
/// moderate `alpha` (about 0.05 at `tau = 3`).
pub fn closed_form_torus(n: u32, m: u32, alpha: f64) -> f64 {
    let tau = (m as f64).ln() / (n as f64).ln();
    ((tau + 1.0) / (1.0 + alpha)).min(2.0 * tau / (tau + alpha))
}

/// `log D / ((1 + alpha) log N)`.
pub fn large_alpha_value(spec: &CarpetSpec, alpha: f64) -> f64 {
    spec.log_d() / ((1.0 + alpha) * spec.log_n())
}

/// Number of log-spaced scan points per decade.
const THRESHOLD_SCAN: usize = 25;
const THRESHOLD_TOL: f64 = 1e-8;

/// A threshold `A` with `DIM(alpha) = log D / ((1 + alpha) log N)` for `alpha > A`.
///
/// Starts from `A0 = max{tau - 1, log D / log R - 1}` and scans 25
/// log-spaced values in `(A, 10 A]` with cylinder targets, which bound ball
/// targets from below. A violation moves `A` up to the violating value and
/// the scan is repeated; violations persisting after eight rounds raise
/// `CertificationFailure`.
pub fn large_alpha_threshold(spec: &CarpetSpec) -> Result<f64> {
    if spec.r() < 2 {
        return Err(Error::InvalidParams("large-alpha threshold needs R >= 2".into()));
    }
    let a0 = (spec.tau() - 1.0).max(spec.log_d() / spec.log_r() - 1.0);
    let opts = MaximizeOptions::default();
    let mut a = a0;
    for _ in 0..8 {
        let alphas: Vec<f64> = (1..=THRESHOLD_SCAN)
            .map(|k| a * 10f64.powf(k as f64 / THRESHOLD_SCAN as f64))
            .collect();
        let base = DimParams::cylinder(0.0)?;
        let results = sweep(spec, &base, &alphas, &opts)?;
        let violation = alphas
            .iter()
            .zip(&results)
            .filter(|(&al, r)| (r.value - large_alpha_value(spec, al)).abs() > THRESHOLD_TOL)
            .map(|(&al, r)| (al, r.value))
            .next_back();
        match violation {
            None => return Ok(a),
            Some((al, _)) => a = al,
        }
    }
    let got = maximize(spec, &DimParams::cylinder(10.0 * a)?, &opts)?.value;
    Err(Error::CertificationFailure {
        alpha: 10.0 * a,
        got,
        expected: large_alpha_value(spec, 10.0 * a),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpet::distinguished_measures;
    use approx::assert_abs_diff_eq;

    fn torus() -> CarpetSpec {
        CarpetSpec::full_torus(2, 4).unwrap()
    }

    #[test]
    fn objective_torus_alpha_one() {
        let spec = torus();
        let params = DimParams::ball(&spec, 1.0, 4f64.ln()).unwrap();
        let b = objective(&spec, &params, &ThetaPoint::splat(2f64.ln())).unwrap();
        assert_abs_diff_eq!(b.dj, 4.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn objective_at_zero_alpha_is_mcmullen() {
        let spec = CarpetSpec::figure5();
        let f = Frontier::new(&spec);
        let zd = f.hr_max_dimension();
        let params = DimParams::cylinder(0.0).unwrap();
        let b = objective(&spec, &params, &ThetaPoint::splat(zd)).unwrap();
        assert_abs_diff_eq!(b.dj, spec.mcmullen_dimension(), epsilon = 1e-10);
    }

    #[test]
    fn objective_rejects_points_outside_theta() {
        let spec = CarpetSpec::figure5();
        let params = DimParams::cylinder(1.0).unwrap();
        let r = objective(&spec, &params, &ThetaPoint::splat(spec.log_r()));
        assert!(matches!(r, Err(Error::Domain { .. })));
    }

    #[test]
    fn maximize_torus_matches_closed_form() {
        let spec = torus();
        for alpha in [0.05, 0.5, 1.0, 3.0, 7.0] {
            let params = DimParams::ball(&spec, alpha, 4f64.ln()).unwrap();
            let r = maximize(&spec, &params, &MaximizeOptions::default()).unwrap();
            assert_abs_diff_eq!(r.value, closed_form_torus(2, 4, alpha), epsilon = 1e-9);
        }
    }

    #[test]
    fn maximize_small_alpha_near_mcmullen() {
        let spec = CarpetSpec::figure5();
        let params = DimParams::cylinder(1e-6).unwrap();
        let r = maximize(&spec, &params, &MaximizeOptions::default()).unwrap();
        assert!((r.value - spec.mcmullen_dimension()).abs() < 1e-4);
        assert!(r.value <= spec.mcmullen_dimension() + 1e-9);
    }

    #[test]
    fn maximize_alpha_zero_direct() {
        let spec = CarpetSpec::figure5();
        let r = maximize(&spec, &DimParams::cylinder(0.0).unwrap(), &MaximizeOptions::default()).unwrap();
        assert_abs_diff_eq!(r.value, spec.mcmullen_dimension(), epsilon = 1e-12);
        let pd = distinguished_measures(&spec).max_dimension;
        assert!(r.vectors.minus.max_abs_diff(&pd) < 1e-10);
    }

    #[test]
    fn maximize_value_consistent_with_breakdown_and_theta() {
        let spec = CarpetSpec::figure5();
        let params = DimParams::ball(&spec, 1.3, 0.8).unwrap();
        let r = maximize(&spec, &params, &MaximizeOptions::default()).unwrap();
        assert_eq!(r.value, r.breakdown.dj);
        r.argmax.check(&spec, 1e-12).unwrap();
        assert!(r.value < spec.mcmullen_dimension() - 1e-6);
        let again = objective(&spec, &params, &r.argmax).unwrap();
        assert_abs_diff_eq!(again.dj, r.value, epsilon = 1e-14);
    }

    #[test]
    fn closed_form_examples() {
        assert_abs_diff_eq!(closed_form_torus(2, 4, 1.0), 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(closed_form_torus(2, 4, 0.0), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(closed_form_torus(2, 4, 3.0), 0.75, epsilon = 1e-15);
    }

    #[test]
    fn brute_force_torus_below_optimum() {
        let spec = torus();
        let params = DimParams::ball(&spec, 1.0, 4f64.ln()).unwrap();
        let b = brute_force(&spec, &params, 20).unwrap();
        assert!(b <= 4.0 / 3.0 + 1e-9);
        assert!(b >= 4.0 / 3.0 - 2e-2);
    }

    #[test]
    fn brute_force_resource_limit() {
        let spec = CarpetSpec::figure5();
        let params = DimParams::cylinder(1.0).unwrap();
        assert!(matches!(brute_force(&spec, &params, 30), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn pareto_keeps_only_maximal_points() {
        let p = pareto(vec![(1.0, 1.0), (2.0, 0.5), (0.5, 0.5), (1.0, 0.2), (2.0, 0.5)]);
        assert_eq!(p, vec![(1.0, 1.0), (2.0, 0.5)]);
    }

    #[test]
    fn threshold_torus() {
        let spec = torus();
        let a = large_alpha_threshold(&spec).unwrap();
        assert_abs_diff_eq!(a, 2.0, epsilon = 1e-12);
        let params = DimParams::cylinder(3.0).unwrap();
        let r = maximize(&spec, &params, &MaximizeOptions::default()).unwrap();
        assert_abs_diff_eq!(r.value, 0.75, epsilon = 1e-9);
    }
}
