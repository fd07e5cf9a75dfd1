//! Carpet data model, entropies and the six dimension functions.
//!
//! A Bedford–McMullen carpet is given by a horizontal base `N`, a vertical
//! base `M > N`, a set `S` of occupied columns and, for every column `a`, a
//! set `P_a` of occupied fibers. The digit set is
//! `Q = {(a, b) : a in S, b in P_a}`. Entropies are in nats throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `sum(p) == 1` for probability vectors.
pub const SIMPLEX_TOL: f64 = 1e-12;
/// Tolerance for algebraic identities between dimension functions.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Absolute tolerance for deciding which dimension functions attain the minimum.
pub const ACTIVE_TOL: f64 = 1e-9;

/// A digit `(a, b)`: column `a` in `S` and fiber `b` in `P_a`, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub column: u32,
    pub fiber: u32,
}

impl Symbol {
    pub fn new(column: u32, fiber: u32) -> Self {
        Self { column, fiber }
    }
}

/// One occupied column as it appears in a carpet file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnDescription {
    pub column: u32,
    pub fibers: Vec<u32>,
}

/// Unvalidated carpet description, the JSON carpet file format:
///
/// ```json
/// {"N": 3, "M": 8, "rows": [{"column": 1, "fibers": [1, 2, 3, 4, 5]}]}
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarpetDescription {
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "M")]
    pub m: u32,
    pub rows: Vec<ColumnDescription>,
}

impl CarpetDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedCarpet(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("carpet description serializes")
    }
}

/// A validated carpet together with its derived quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct CarpetSpec {
    n: u32,
    m: u32,
    columns: Vec<u32>,
    fibers: Vec<Vec<u32>>,
    counts: Vec<usize>,
    log_counts: Vec<f64>,
    offsets: Vec<usize>,
    symbols: Vec<Symbol>,
    symbol_column: Vec<usize>,
    column_pos: Vec<Option<usize>>,
    tau: f64,
    log_n: f64,
    log_m: f64,
}

/// Validates a raw description and computes `D`, `R`, `T_a` and `tau`.
pub fn validate_carpet(raw: &CarpetDescription) -> Result<CarpetSpec> {
    let malformed = |msg: String| Err(Error::MalformedCarpet(msg));
    if raw.n < 2 {
        return malformed(format!("N = {} must be at least 2", raw.n));
    }
    if raw.m <= raw.n {
        return malformed(format!("M = {} must exceed N = {}", raw.m, raw.n));
    }
    if raw.rows.is_empty() {
        return malformed("column set S is empty".into());
    }
    let mut prev_col = 0;
    for row in &raw.rows {
        if row.column < 1 || row.column > raw.n {
            return malformed(format!("column {} outside 1..={}", row.column, raw.n));
        }
        if row.column <= prev_col {
            return malformed(format!(
                "columns must be strictly increasing (found {} after {})",
                row.column, prev_col
            ));
        }
        prev_col = row.column;
        if row.fibers.is_empty() {
            return malformed(format!("column {} has no fibers", row.column));
        }
        let mut prev_fiber = 0;
        for &b in &row.fibers {
            if b < 1 || b > raw.m {
                return malformed(format!(
                    "fiber {} of column {} outside 1..={}",
                    b, row.column, raw.m
                ));
            }
            if b <= prev_fiber {
                return malformed(format!(
                    "fibers of column {} must be strictly increasing",
                    row.column
                ));
            }
            prev_fiber = b;
        }
    }

    let columns: Vec<u32> = raw.rows.iter().map(|r| r.column).collect();
    let fibers: Vec<Vec<u32>> = raw.rows.iter().map(|r| r.fibers.clone()).collect();
    let counts: Vec<usize> = fibers.iter().map(Vec::len).collect();
    let log_counts = counts.iter().map(|&t| (t as f64).ln()).collect();
    let mut offsets = Vec::with_capacity(columns.len() + 1);
    let mut symbols = Vec::new();
    let mut symbol_column = Vec::new();
    for (pos, (&a, fib)) in columns.iter().zip(&fibers).enumerate() {
        offsets.push(symbols.len());
        for &b in fib {
            symbols.push(Symbol::new(a, b));
            symbol_column.push(pos);
        }
    }
    offsets.push(symbols.len());
    let mut column_pos = vec![None; raw.n as usize + 1];
    for (pos, &a) in columns.iter().enumerate() {
        column_pos[a as usize] = Some(pos);
    }
    let log_n = (raw.n as f64).ln();
    let log_m = (raw.m as f64).ln();
    Ok(CarpetSpec {
        n: raw.n,
        m: raw.m,
        columns,
        fibers,
        counts,
        log_counts,
        offsets,
        symbols,
        symbol_column,
        column_pos,
        tau: log_m / log_n,
        log_n,
        log_m,
    })
}

impl CarpetSpec {
    /// The full `N x M` grid: every column holds every fiber.
    pub fn full_torus(n: u32, m: u32) -> Result<Self> {
        let rows = (1..=n)
            .map(|a| ColumnDescription {
                column: a,
                fibers: (1..=m).collect(),
            })
            .collect();
        validate_carpet(&CarpetDescription { n, m, rows })
    }

    /// Columns `1..=R` with fibers `1..=T_a` for the given counts.
    pub fn from_counts(n: u32, m: u32, counts: &[u32]) -> Result<Self> {
        let rows = counts
            .iter()
            .enumerate()
            .map(|(i, &t)| ColumnDescription {
                column: i as u32 + 1,
                fibers: (1..=t).collect(),
            })
            .collect();
        validate_carpet(&CarpetDescription { n, m, rows })
    }

    /// The carpet `N = 3, M = 8, T = (5, 2, 8)`.
    pub fn figure5() -> Self {
        Self::from_counts(3, 8, &[5, 2, 8]).expect("preset carpet is valid")
    }

    pub fn description(&self) -> CarpetDescription {
        CarpetDescription {
            n: self.n,
            m: self.m,
            rows: self
                .columns
                .iter()
                .zip(&self.fibers)
                .map(|(&column, fibers)| ColumnDescription {
                    column,
                    fibers: fibers.clone(),
                })
                .collect(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of occupied columns `R = |S|`.
    pub fn r(&self) -> usize {
        self.columns.len()
    }

    /// Number of digits `D = |Q|`.
    pub fn d(&self) -> usize {
        self.symbols.len()
    }

    /// `tau = log M / log N > 1`.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn log_n(&self) -> f64 {
        self.log_n
    }

    pub fn log_m(&self) -> f64 {
        self.log_m
    }

    pub fn log_d(&self) -> f64 {
        (self.d() as f64).ln()
    }

    pub fn log_r(&self) -> f64 {
        (self.r() as f64).ln()
    }

    /// Occupied columns in increasing order.
    pub fn columns(&self) -> &[u32] {
        &self.columns
    }

    /// Fibers of the column at position `pos` of [`columns`](Self::columns).
    pub fn fibers(&self, pos: usize) -> &[u32] {
        &self.fibers[pos]
    }

    /// Fiber counts `T_a` in column order.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn log_counts(&self) -> &[f64] {
        &self.log_counts
    }

    /// All digits, ordered by column then fiber. Probability vectors use this order.
    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// Range of digit indices belonging to the column at position `pos`.
    pub fn column_range(&self, pos: usize) -> std::ops::Range<usize> {
        self.offsets[pos]..self.offsets[pos + 1]
    }

    /// Column position of the digit with index `idx`.
    pub fn column_of(&self, idx: usize) -> usize {
        self.symbol_column[idx]
    }

    /// Position of column `a` in [`columns`](Self::columns), if occupied.
    pub fn column_position(&self, a: u32) -> Option<usize> {
        self.column_pos.get(a as usize).copied().flatten()
    }

    /// Index of a digit in [`symbols`](Self::symbols), if it lies in `Q`.
    pub fn index_of(&self, sym: Symbol) -> Option<usize> {
        let pos = self.column_position(sym.column)?;
        self.fibers[pos]
            .binary_search(&sym.fiber)
            .ok()
            .map(|k| self.offsets[pos] + k)
    }

    /// True when every column holds the same number of fibers.
    pub fn uniform_fibers(&self) -> bool {
        self.counts.iter().all(|&t| t == self.counts[0])
    }

    /// True for the full grid `{1..N} x {1..M}`.
    pub fn is_full_torus(&self) -> bool {
        self.r() == self.n as usize && self.d() == (self.n as usize) * (self.m as usize)
    }

    pub fn min_log_count(&self) -> f64 {
        self.log_counts.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_log_count(&self) -> f64 {
        self.log_counts.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `log_N sum_a T_a^(1/tau)`, the Hausdorff dimension of the carpet.
    pub fn mcmullen_dimension(&self) -> f64 {
        let s: f64 = self.counts.iter().map(|&t| (t as f64).powf(1.0 / self.tau)).sum();
        s.ln() / self.log_n
    }

    /// Floor of `x / tau` for a nonnegative integer `x`.
    ///
    /// A small absolute slack absorbs rounding when `x / tau` is an integer
    /// (e.g. `tau = 2`).
    pub fn floor_div_tau(&self, x: usize) -> usize {
        (x as f64 * self.log_n / self.log_m + 1e-9).floor() as usize
    }

    /// Floor of `tau * x`, with the same slack as [`floor_div_tau`](Self::floor_div_tau).
    pub fn floor_mul_tau(&self, x: f64) -> usize {
        (x * self.tau + 1e-9).floor() as usize
    }
}

pub(crate) fn neg_xlogx(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

pub(crate) fn shannon(weights: impl IntoIterator<Item = f64>) -> f64 {
    weights.into_iter().map(neg_xlogx).sum()
}

/// A probability vector on `Q`, indexed like [`CarpetSpec::symbols`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    weights: Vec<f64>,
}

impl ProbVector {
    pub fn new(spec: &CarpetSpec, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != spec.d() {
            return Err(Error::InvalidProbVector(format!(
                "expected {} weights, got {}",
                spec.d(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidProbVector(format!("bad weight {w}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidProbVector(format!("weights sum to {sum}")));
        }
        Ok(Self { weights })
    }

    /// Normalizes nonnegative weights with a positive total.
    pub fn from_unnormalized(spec: &CarpetSpec, mut weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::InvalidProbVector(format!("weights sum to {sum}")));
        }
        weights.iter_mut().for_each(|w| *w /= sum);
        Self::new(spec, weights)
    }

    pub fn uniform(spec: &CarpetSpec) -> Self {
        let d = spec.d();
        Self {
            weights: vec![1.0 / d as f64; d],
        }
    }

    pub fn point_mass(spec: &CarpetSpec, sym: Symbol) -> Result<Self> {
        let idx = spec
            .index_of(sym)
            .ok_or_else(|| Error::InvalidProbVector(format!("{sym:?} is not a digit")))?;
        let mut weights = vec![0.0; spec.d()];
        weights[idx] = 1.0;
        Ok(Self { weights })
    }

    /// Row marginal `rows` spread uniformly over the fibers of each column.
    pub fn from_rows(spec: &CarpetSpec, rows: &[f64]) -> Result<Self> {
        if rows.len() != spec.r() {
            return Err(Error::InvalidProbVector(format!(
                "expected {} row weights, got {}",
                spec.r(),
                rows.len()
            )));
        }
        let mut weights = vec![0.0; spec.d()];
        for (pos, &w) in rows.iter().enumerate() {
            let share = w / spec.counts()[pos] as f64;
            weights[spec.column_range(pos)].fill(share);
        }
        Self::new(spec, weights)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Column marginals `p_a = sum_b p_{a,b}`.
    pub fn row_marginals(&self, spec: &CarpetSpec) -> Vec<f64> {
        (0..spec.r())
            .map(|pos| self.weights[spec.column_range(pos)].iter().sum())
            .collect()
    }

    pub fn entropy(&self) -> f64 {
        shannon(self.weights.iter().copied())
    }

    pub fn row_entropy(&self, spec: &CarpetSpec) -> f64 {
        shannon(self.row_marginals(spec))
    }

    pub fn profile(&self, spec: &CarpetSpec) -> EntropyProfile {
        EntropyProfile {
            h: self.entropy(),
            h_r: self.row_entropy(spec),
        }
    }

    /// `t * self + (1 - t) * other`.
    pub fn mix(&self, other: &Self, t: f64) -> Self {
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| t * a + (1.0 - t) * b)
            .collect();
        Self { weights }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `h(p) = -sum p_{a,b} log p_{a,b}`.
pub fn entropy(p: &ProbVector) -> f64 {
    p.entropy()
}

/// `h_r(p) = -sum_a p_a log p_a` over column marginals.
pub fn row_entropy(spec: &CarpetSpec, p: &ProbVector) -> f64 {
    p.row_entropy(spec)
}

/// `dim(p) = (h(p) + (tau - 1) h_r(p)) / log M`, the dimension of the Bernoulli measure.
pub fn bernoulli_dimension(spec: &CarpetSpec, p: &ProbVector) -> f64 {
    let prof = p.profile(spec);
    profile_dimension(spec, prof.h, prof.h_r)
}

pub(crate) fn profile_dimension(spec: &CarpetSpec, h: f64, h_r: f64) -> f64 {
    (h + (spec.tau() - 1.0) * h_r) / spec.log_m()
}

/// Entropy and row entropy of a distribution on `Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyProfile {
    pub h: f64,
    pub h_r: f64,
}

impl EntropyProfile {
    pub fn new(h: f64, h_r: f64) -> Self {
        Self { h, h_r }
    }

    pub fn of(spec: &CarpetSpec, p: &ProbVector) -> Self {
        p.profile(spec)
    }

    /// Checks `0 <= h_r <= h <= log D` and `h_r <= log R` up to `tol`.
    pub fn is_admissible(&self, spec: &CarpetSpec, tol: f64) -> bool {
        self.h_r >= -tol
            && self.h_r <= self.h + tol
            && self.h <= spec.log_d() + tol
            && self.h_r <= spec.log_r() + tol
    }
}

/// The three distinguished Bernoulli measures of a carpet.
#[derive(Debug, Clone, PartialEq)]
pub struct Distinguished {
    /// `p_D`: uniform on `Q`, the measure of maximal entropy.
    pub max_entropy: ProbVector,
    /// `p_R`: uniform columns, uniform fibers within each column.
    pub max_row_entropy: ProbVector,
    /// `p_d`: the measure of maximal dimension.
    pub max_dimension: ProbVector,
}

pub fn distinguished_measures(spec: &CarpetSpec) -> Distinguished {
    let r = spec.r() as f64;
    let inv_tau = 1.0 / spec.tau();
    let norm: f64 = spec.counts().iter().map(|&t| (t as f64).powf(inv_tau)).sum();
    let mut p_r = vec![0.0; spec.d()];
    let mut p_d = vec![0.0; spec.d()];
    for (pos, &t) in spec.counts().iter().enumerate() {
        let t = t as f64;
        for idx in spec.column_range(pos) {
            p_r[idx] = 1.0 / (t * r);
            p_d[idx] = t.powf(inv_tau - 1.0) / norm;
        }
    }
    Distinguished {
        max_entropy: ProbVector::uniform(spec),
        max_row_entropy: ProbVector { weights: p_r },
        max_dimension: ProbVector { weights: p_d },
    }
}

/// Kind of shrinking target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    Cylinder,
    Ball,
}

impl std::fmt::Display for TargetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TargetKind::Cylinder => "cylinder",
            TargetKind::Ball => "ball",
        })
    }
}

/// Shrinking rate `alpha`, the target kind and the row-average `H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimParams {
    pub alpha: f64,
    pub h_avg: f64,
    pub target: TargetKind,
}

impl DimParams {
    pub fn cylinder(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            alpha,
            h_avg: 0.0,
            target: TargetKind::Cylinder,
        })
    }

    /// Ball targets; `h_avg` must lie in `[min_a log T_a, max_a log T_a]`.
    pub fn ball(spec: &CarpetSpec, alpha: f64, h_avg: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let (lo, hi) = (spec.min_log_count(), spec.max_log_count());
        if !(h_avg >= lo - SIMPLEX_TOL && h_avg <= hi + SIMPLEX_TOL) {
            return Err(Error::InvalidParams(format!(
                "H = {h_avg} outside [{lo}, {hi}]"
            )));
        }
        Ok(Self {
            alpha,
            h_avg,
            target: TargetKind::Ball,
        })
    }

    pub fn new(spec: &CarpetSpec, target: TargetKind, alpha: f64, h_avg: f64) -> Result<Self> {
        match target {
            TargetKind::Cylinder => Self::cylinder(alpha),
            TargetKind::Ball => Self::ball(spec, alpha, h_avg),
        }
    }

    pub fn with_alpha(&self, alpha: f64) -> Self {
        Self { alpha, ..*self }
    }

    /// `m(alpha, tau) = min{1, (1 + alpha) / tau}`.
    pub fn lower_weight(&self, tau: f64) -> f64 {
        ((1.0 + self.alpha) / tau).min(1.0)
    }

    /// `M(alpha, tau) = 1 - m(alpha, tau)`.
    pub fn upper_weight(&self, tau: f64) -> f64 {
        1.0 - self.lower_weight(tau)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("alpha = {alpha} must be finite and >= 0")))
    }
}

/// `H = sum_a nu_a log T_a` for a Bernoulli measure `nu`.
pub fn h_from_bernoulli(spec: &CarpetSpec, nu: &ProbVector) -> f64 {
    nu.row_marginals(spec)
        .iter()
        .zip(spec.log_counts())
        .map(|(w, l)| w * l)
        .sum()
}

/// Four values attached to `p_-`, `p_1`, `p_2`, `p_+`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad<T> {
    pub minus: T,
    pub first: T,
    pub second: T,
    pub plus: T,
}

impl<T> Quad<T> {
    pub fn new(minus: T, first: T, second: T, plus: T) -> Self {
        Self {
            minus,
            first,
            second,
            plus,
        }
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Quad<U> {
        Quad {
            minus: f(&self.minus),
            first: f(&self.first),
            second: f(&self.second),
            plus: f(&self.plus),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        [&self.minus, &self.first, &self.second, &self.plus].into_iter()
    }
}

impl<T: Clone> Quad<T> {
    pub fn splat(x: T) -> Self {
        Self::new(x.clone(), x.clone(), x.clone(), x)
    }
}

/// Coefficients of the six dimension functions as linear forms in
/// `(h_-, hr_-, h_1, hr_1, h_2, hr_2, h_+, hr_+)` plus a constant.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct DimCoefficients {
    pub coef: [[f64; 8]; 6],
    pub constant: [f64; 6],
}

impl DimCoefficients {
    pub fn new(spec: &CarpetSpec, params: &DimParams) -> Self {
        let tau = spec.tau();
        let a = params.alpha;
        let ln = spec.log_n();
        let lm = spec.log_m();
        let lo = params.lower_weight(tau);
        let up = params.upper_weight(tau);
        let ball = a * (1.0 - 1.0 / tau) * params.h_avg;

        let mut coef = [[0.0; 8]; 6];
        let mut constant = [0.0; 6];

        coef[0][0] = 1.0 / lm;
        coef[0][1] = (tau - 1.0) / lm;

        let c2 = (1.0 + a) * ln;
        coef[1][0] = lo / c2;
        coef[1][3] = up / c2;

        let c3 = (tau + a) * ln;
        coef[2][0] = lo / c3;
        coef[2][2] = up / c3;
        coef[2][5] = (tau - 1.0) / c3;

        let c4 = tau * (1.0 + a) * ln;
        coef[3][0] = lo / c4;
        coef[3][2] = up / c4;
        coef[3][5] = (tau - 1.0) / c4;
        coef[3][7] = a * (tau - 1.0) / c4;
        constant[3] = ball / c4;

        let c5 = tau * (tau + a) * ln;
        coef[4][0] = lo / c5;
        coef[4][2] = up / c5;
        coef[4][4] = (tau - 1.0) / c5;
        coef[4][7] = (tau + a) * (tau - 1.0) / c5;
        constant[4] = ball / c5;

        coef[5][6] = 1.0 / lm;
        coef[5][7] = (tau - 1.0) / lm;

        Self { coef, constant }
    }

    pub fn eval(&self, features: &[f64; 8]) -> [f64; 6] {
        let mut out = self.constant;
        for (o, row) in out.iter_mut().zip(&self.coef) {
            *o += row.iter().zip(features).map(|(c, x)| c * x).sum::<f64>();
        }
        out
    }
}

pub(crate) fn features(profiles: &Quad<EntropyProfile>) -> [f64; 8] {
    [
        profiles.minus.h,
        profiles.minus.h_r,
        profiles.first.h,
        profiles.first.h_r,
        profiles.second.h,
        profiles.second.h_r,
        profiles.plus.h,
        profiles.plus.h_r,
    ]
}

/// The six dimension functions, their minimum and the indices attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct DimBreakdown {
    /// `d_1 ... d_6`.
    pub d: [f64; 6],
    /// `min_i d_i`.
    pub dj: f64,
    /// 1-based indices `i` with `d_i <= dj + ACTIVE_TOL`.
    pub active: Vec<usize>,
}

impl DimBreakdown {
    pub fn from_values(d: [f64; 6]) -> Self {
        let dj = d.iter().copied().fold(f64::INFINITY, f64::min);
        let active = (1..=6).filter(|&i| d[i - 1] <= dj + ACTIVE_TOL).collect();
        Self { d, dj, active }
    }

    /// Whether `d_i` (1-based) is within `tol` of the minimum.
    pub fn is_active_within(&self, i: usize, tol: f64) -> bool {
        self.d[i - 1] <= self.dj + tol
    }

    pub fn active_within(&self, tol: f64) -> Vec<usize> {
        (1..=6).filter(|&i| self.is_active_within(i, tol)).collect()
    }

    /// Active set as `1;2;5;6`.
    pub fn active_label(&self) -> String {
        self.active
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Evaluates `d_1 ... d_6` from the entropy profiles of `(p_-, p_1, p_2, p_+)`.
pub fn dim_functions(
    spec: &CarpetSpec,
    params: &DimParams,
    profiles: &Quad<EntropyProfile>,
) -> DimBreakdown {
    DimBreakdown::from_values(DimCoefficients::new(spec, params).eval(&features(profiles)))
}
