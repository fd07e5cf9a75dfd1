//! Measures of approximate squares, local dimensions and the scale table.

use rayon::prelude::*;

use crate::carpet::{dim_functions, CarpetSpec, DimParams, ProbVector, Quad, TargetKind};
use crate::error::{Error, Result};
use crate::symdyn::schedule::{heuristic_schedule, word_rng, PiecewiseBernoulliSchedule};
use crate::symdyn::word::SymbolicWord;

/// Running sums sampled at a sorted set of checkpoints.
struct Checkpoints {
    at: Vec<usize>,
    pair: Vec<f64>,
    row: Vec<f64>,
    row_zero: Vec<usize>,
}

impl Checkpoints {
    /// Streams `(pos, log pair, log row)` and records cumulative sums after
    /// each checkpoint count of positions.
    fn collect(at: Vec<usize>, walk: impl FnOnce(&mut dyn FnMut(usize, f64, f64))) -> Self {
        let k = at.len();
        let mut out = Self {
            pair: vec![0.0; k],
            row: vec![0.0; k],
            row_zero: vec![0; k],
            at,
        };
        let (mut sp, mut sr, mut zeros) = (0.0f64, 0.0f64, 0usize);
        let mut next = 0;
        while next < k && out.at[next] == 0 {
            next += 1;
        }
        let mut record = |pos: usize, pair: f64, row: f64| {
            sp += pair;
            if row == f64::NEG_INFINITY {
                zeros += 1;
            } else {
                sr += row;
            }
            while next < k && out.at[next] == pos + 1 {
                out.pair[next] = sp;
                out.row[next] = sr;
                out.row_zero[next] = zeros;
                next += 1;
            }
        };
        walk(&mut record);
        out
    }

    fn index(&self, c: usize) -> usize {
        self.at.binary_search(&c).expect("checkpoint recorded")
    }

    fn log_measure(&self, spec: &CarpetSpec, q: usize) -> f64 {
        let g = self.index(spec.floor_div_tau(q));
        let e = self.index(q);
        if self.row_zero[e] > self.row_zero[g] {
            return f64::NEG_INFINITY;
        }
        self.pair[g] + (self.row[e] - self.row[g])
    }
}

fn checkpoints_for(spec: &CarpetSpec, scales: &[usize]) -> Vec<usize> {
    let mut at: Vec<usize> = scales
        .iter()
        .flat_map(|&q| [q, spec.floor_div_tau(q)])
        .collect();
    at.sort_unstable();
    at.dedup();
    at
}

fn check_word(schedule: &PiecewiseBernoulliSchedule, word: &SymbolicWord, q: usize) -> Result<()> {
    if word.len() < q {
        return Err(Error::WordTooShort {
            len: word.len(),
            needed: q,
        });
    }
    schedule.check_covers(q)
}

/// `log mu(B_q(word))`: full digit weights on the first `floor(q / tau)`
/// positions, column weights on the rest up to `q`. Negative infinity when
/// the square has measure zero.
pub fn log_measure_square(schedule: &PiecewiseBernoulliSchedule, word: &SymbolicWord, q: usize) -> Result<f64> {
    Ok(log_measures(schedule, word, &[q])?[0])
}

/// `log mu(B_q)` at each `q` in `scales`, in one pass over the word.
pub fn log_measures(
    schedule: &PiecewiseBernoulliSchedule,
    word: &SymbolicWord,
    scales: &[usize],
) -> Result<Vec<f64>> {
    let spec = schedule.spec();
    let top = scales.iter().copied().max().unwrap_or(0);
    check_word(schedule, word, top)?;
    let idx = word.indices(spec);
    let cp = Checkpoints::collect(checkpoints_for(spec, scales), |f| {
        schedule.walk_log_weights(&idx[..top], f)
    });
    Ok(scales.iter().map(|&q| cp.log_measure(spec, q)).collect())
}

fn to_local(spec: &CarpetSpec, m: usize, log_mu: f64) -> f64 {
    log_mu / (-(m as f64) * spec.log_n())
}

fn check_scales(scales: &[usize]) -> Result<()> {
    if scales.contains(&0) {
        return Err(Error::InvalidParams("scales must be >= 1".into()));
    }
    Ok(())
}

/// `(m, d_m)` with `d_m = log mu(B_m) / (-m log N)`; `+inf` on null squares.
pub fn local_dimension_curve(
    schedule: &PiecewiseBernoulliSchedule,
    word: &SymbolicWord,
    scales: &[usize],
) -> Result<Vec<(usize, f64)>> {
    check_scales(scales)?;
    let spec = schedule.spec();
    let logs = log_measures(schedule, word, scales)?;
    Ok(scales
        .iter()
        .zip(logs)
        .map(|(&m, l)| (m, to_local(spec, m, l)))
        .collect())
}

/// Local dimensions at `scales` of the `index`-th sampled word, sampled and
/// measured in one streaming pass.
pub fn sampled_local_dimensions(
    schedule: &PiecewiseBernoulliSchedule,
    scales: &[usize],
    seed: u64,
    index: u64,
) -> Result<Vec<f64>> {
    check_scales(scales)?;
    let spec = schedule.spec();
    let top = scales.iter().copied().max().unwrap_or(0);
    schedule.check_covers(top)?;
    let mut rng = word_rng(seed, index);
    let cp = Checkpoints::collect(checkpoints_for(spec, scales), |f| {
        schedule.sample_log_weights(top, &mut rng, f)
    });
    Ok(scales
        .iter()
        .map(|&m| to_local(spec, m, cp.log_measure(spec, m)))
        .collect())
}

/// Monte-Carlo mean of the local dimensions over `samples` words.
pub fn mean_local_dimensions(
    schedule: &PiecewiseBernoulliSchedule,
    scales: &[usize],
    samples: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if samples == 0 {
        return Err(Error::InvalidParams("samples must be >= 1".into()));
    }
    let per_word: Vec<Vec<f64>> = (0..samples as u64)
        .into_par_iter()
        .map(|k| sampled_local_dimensions(schedule, scales, seed, k))
        .collect::<Result<_>>()?;
    let mut mean = vec![0.0; scales.len()];
    for w in &per_word {
        for (m, v) in mean.iter_mut().zip(w) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= samples as f64);
    Ok(mean)
}

/// Scales `m_1 ... m_6` for depth `n` and target length `f`:
///
/// ```text
/// m_1 = n / 4          m_4 = tau (n + f)
/// m_2 = n + f          m_5 = tau (tau n + f)
/// m_3 = tau n + f      m_6 = 32 ceil(tau (tau n + f))
/// ```
pub fn scales(spec: &CarpetSpec, n: usize, f: usize) -> [usize; 6] {
    let tau = spec.tau();
    let (nf, ff) = (n as f64, f as f64);
    let m5 = spec.floor_mul_tau(tau * nf + ff);
    let top = (tau * (tau * nf + ff) - 1e-9).ceil() as usize;
    [
        n / 4,
        n + f,
        spec.floor_mul_tau(nf) + f,
        spec.floor_mul_tau(nf + ff),
        m5,
        32 * top,
    ]
}

/// A target word whose columns on `(floor(len / tau), len]` average `log T`
/// as close to `h` as possible. Columns alternate greedily between the
/// smallest and largest `T_a`; fibers are the first of each column.
pub fn target_word(spec: &CarpetSpec, h: f64, len: usize) -> SymbolicWord {
    let logs = spec.log_counts();
    let lo = (0..spec.r()).min_by(|&a, &b| logs[a].total_cmp(&logs[b])).unwrap_or(0);
    let hi = (0..spec.r()).max_by(|&a, &b| logs[a].total_cmp(&logs[b])).unwrap_or(0);
    let mut sum = 0.0;
    let idx: Vec<usize> = (0..len)
        .map(|k| {
            let col = if sum < h * k as f64 { hi } else { lo };
            sum += logs[col];
            spec.column_range(col).start
        })
        .collect();
    SymbolicWord::from_indices(spec, &idx)
}

/// Mean `log T_a` over the column-locked part of a ball target.
pub fn target_h(spec: &CarpetSpec, target: &SymbolicWord) -> f64 {
    let g = spec.floor_div_tau(target.len());
    let idx = target.indices(spec);
    let tail = &idx[g..];
    if tail.is_empty() {
        return 0.0;
    }
    tail.iter()
        .map(|&i| spec.log_counts()[spec.column_of(i)])
        .sum::<f64>()
        / tail.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleRow {
    /// `i` in `1..=6`.
    pub index: usize,
    pub m: usize,
    pub predicted: f64,
    pub simulated: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleTable {
    pub n: usize,
    pub f_n: usize,
    /// `H` of the target actually used (0 for cylinders).
    pub h_used: f64,
    pub rows: Vec<ScaleRow>,
    pub schedule: PiecewiseBernoulliSchedule,
}

impl PartialEq for PiecewiseBernoulliSchedule {
    fn eq(&self, other: &Self) -> bool {
        self.spec() == other.spec() && self.blocks() == other.blocks() && self.tail() == other.tail()
    }
}

/// Predicted `d_i` against the Monte-Carlo mean local dimension of the
/// heuristic measure at the six scales, with `f = floor(alpha n)`.
pub fn scale_table(
    spec: &CarpetSpec,
    params: &DimParams,
    quadruple: &Quad<ProbVector>,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<ScaleTable> {
    if n < 4 {
        return Err(Error::InvalidParams("scale table needs n >= 4".into()));
    }
    let f_n = (params.alpha * n as f64 + 1e-9).floor() as usize;
    let target = target_word(spec, params.h_avg, f_n);
    let h_used = match params.target {
        TargetKind::Cylinder => 0.0,
        TargetKind::Ball => target_h(spec, &target),
    };
    let predicted_params = DimParams::new(spec, params.target, params.alpha, h_used)?;
    let profiles = quadruple.map(|p| p.profile(spec));
    let predicted = dim_functions(spec, &predicted_params, &profiles);
    let schedule = heuristic_schedule(spec, n, f_n, &target, quadruple, params.target)?;
    let ms = scales(spec, n, f_n);
    let simulated = mean_local_dimensions(&schedule, &ms, samples, seed)?;
    let rows = (0..6)
        .map(|i| ScaleRow {
            index: i + 1,
            m: ms[i],
            predicted: predicted.d[i],
            simulated: simulated[i],
        })
        .collect();
    Ok(ScaleTable {
        n,
        f_n,
        h_used,
        rows,
        schedule,
    })
}

/// One representative word for every approximate square of depth `q`:
/// all digits on the first `floor(q / tau)` positions, then every column
/// with its first fiber.
pub fn square_representatives(spec: &CarpetSpec, q: usize, cap: usize) -> Result<Vec<SymbolicWord>> {
    let g = spec.floor_div_tau(q);
    let total = (spec.d() as f64).powi(g as i32) * (spec.r() as f64).powi((q - g) as i32);
    if total > cap as f64 {
        return Err(Error::ResourceLimit(format!("{total:.3e} squares at depth {q}")));
    }
    let firsts: Vec<usize> = (0..spec.r()).map(|c| spec.column_range(c).start).collect();
    let mut out = vec![Vec::with_capacity(q)];
    for pos in 0..q {
        let choices: Vec<usize> = if pos < g {
            (0..spec.d()).collect()
        } else {
            firsts.clone()
        };
        out = out
            .into_iter()
            .flat_map(|w| {
                choices.iter().map(move |&c| {
                    let mut w2 = w.clone();
                    w2.push(c);
                    w2
                })
            })
            .collect();
    }
    Ok(out
        .iter()
        .map(|w| SymbolicWord::from_indices(spec, w))
        .collect())
}
