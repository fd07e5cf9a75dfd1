//! Piecewise Bernoulli schedules and word sampling.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::carpet::{CarpetSpec, ProbVector, Quad, TargetKind};
use crate::error::{Error, Result};
use crate::symdyn::word::SymbolicWord;

/// Distribution used on the positions of one block.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockDist {
    /// The same Bernoulli vector at every position.
    Bernoulli(ProbVector),
    /// Position `k` of the block is the `k`-th digit of the word.
    PointMasses(SymbolicWord),
    /// Position `k` has the column of the `k`-th digit and a uniform fiber.
    ColumnLocked(SymbolicWord),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub len: usize,
    pub dist: BlockDist,
}

impl Block {
    pub fn bernoulli(len: usize, p: ProbVector) -> Self {
        Self {
            len,
            dist: BlockDist::Bernoulli(p),
        }
    }

    pub fn point_masses(word: SymbolicWord) -> Self {
        Self {
            len: word.len(),
            dist: BlockDist::PointMasses(word),
        }
    }

    pub fn column_locked(word: SymbolicWord) -> Self {
        Self {
            len: word.len(),
            dist: BlockDist::ColumnLocked(word),
        }
    }
}

#[derive(Debug, Clone)]
enum Compiled {
    Bernoulli {
        log_pair: Vec<f64>,
        log_row: Vec<f64>,
        sampler: WeightedIndex<f64>,
    },
    Point(Vec<usize>),
    Locked(Vec<usize>),
}

#[derive(Debug, Clone)]
struct Segment {
    start: usize,
    len: usize,
    kind: Compiled,
}

/// Blocks of lengths `m_k` with per-block distributions, followed by an
/// optional Bernoulli tail covering every later position.
#[derive(Debug, Clone)]
pub struct PiecewiseBernoulliSchedule {
    spec: CarpetSpec,
    blocks: Vec<Block>,
    tail: Option<ProbVector>,
    segments: Vec<Segment>,
    tail_compiled: Option<Compiled>,
}

fn compile_bernoulli(spec: &CarpetSpec, p: &ProbVector) -> Result<Compiled> {
    if p.len() != spec.d() {
        return Err(Error::LengthMismatch {
            expected: spec.d(),
            found: p.len(),
        });
    }
    Ok(Compiled::Bernoulli {
        log_pair: p.weights().iter().map(|w| w.ln()).collect(),
        log_row: p.row_marginals(spec).iter().map(|w| w.ln()).collect(),
        sampler: WeightedIndex::new(p.weights())
            .map_err(|e| Error::InvalidProbVector(e.to_string()))?,
    })
}

impl PiecewiseBernoulliSchedule {
    /// Zero-length blocks are dropped.
    pub fn new(spec: &CarpetSpec, blocks: Vec<Block>, tail: Option<ProbVector>) -> Result<Self> {
        let blocks: Vec<Block> = blocks.into_iter().filter(|b| b.len > 0).collect();
        let mut segments = Vec::with_capacity(blocks.len());
        let mut start = 0;
        for b in &blocks {
            let kind = match &b.dist {
                BlockDist::Bernoulli(p) => compile_bernoulli(spec, p)?,
                BlockDist::PointMasses(w) | BlockDist::ColumnLocked(w) => {
                    if w.len() != b.len {
                        return Err(Error::LengthMismatch {
                            expected: b.len,
                            found: w.len(),
                        });
                    }
                    let idx = SymbolicWord::new(spec, w.symbols().to_vec())?.indices(spec);
                    if matches!(b.dist, BlockDist::PointMasses(_)) {
                        Compiled::Point(idx)
                    } else {
                        Compiled::Locked(idx)
                    }
                }
            };
            segments.push(Segment {
                start,
                len: b.len,
                kind,
            });
            start += b.len;
        }
        let tail_compiled = tail.as_ref().map(|p| compile_bernoulli(spec, p)).transpose()?;
        Ok(Self {
            spec: spec.clone(),
            blocks,
            tail,
            segments,
            tail_compiled,
        })
    }

    /// A single Bernoulli measure at every position.
    pub fn bernoulli(spec: &CarpetSpec, p: ProbVector) -> Result<Self> {
        Self::new(spec, Vec::new(), Some(p))
    }

    pub fn spec(&self) -> &CarpetSpec {
        &self.spec
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn tail(&self) -> Option<&ProbVector> {
        self.tail.as_ref()
    }

    /// Block end points `S_k`.
    pub fn boundaries(&self) -> Vec<usize> {
        self.segments.iter().map(|s| s.start + s.len).collect()
    }

    /// Number of positions covered, `None` with a tail.
    pub fn covered(&self) -> Option<usize> {
        if self.tail.is_some() {
            None
        } else {
            Some(self.segments.last().map_or(0, |s| s.start + s.len))
        }
    }

    pub(crate) fn check_covers(&self, len: usize) -> Result<()> {
        match self.covered() {
            Some(c) if c < len => Err(Error::ScheduleTooShort(c)),
            _ => Ok(()),
        }
    }

    /// Walks positions `0..len`, calling `f(pos, compiled, offset_in_block)`.
    fn for_each_position(&self, len: usize, mut f: impl FnMut(usize, &Compiled, usize)) {
        let mut pos = 0;
        for seg in &self.segments {
            while pos < len && pos < seg.start + seg.len {
                f(pos, &seg.kind, pos - seg.start);
                pos += 1;
            }
        }
        if let Some(t) = &self.tail_compiled {
            while pos < len {
                f(pos, t, 0);
                pos += 1;
            }
        }
    }

    fn log_weight(&self, kind: &Compiled, off: usize, i: usize) -> (f64, f64) {
        let spec = &self.spec;
        match kind {
            Compiled::Bernoulli {
                log_pair, log_row, ..
            } => (log_pair[i], log_row[spec.column_of(i)]),
            Compiled::Point(target) => {
                let pair = if target[off] == i { 0.0 } else { f64::NEG_INFINITY };
                let row = if spec.column_of(target[off]) == spec.column_of(i) {
                    0.0
                } else {
                    f64::NEG_INFINITY
                };
                (pair, row)
            }
            Compiled::Locked(target) => {
                let col = spec.column_of(i);
                if spec.column_of(target[off]) == col {
                    (-spec.log_counts()[col], 0.0)
                } else {
                    (f64::NEG_INFINITY, f64::NEG_INFINITY)
                }
            }
        }
    }

    fn draw<R: Rng>(&self, kind: &Compiled, off: usize, rng: &mut R) -> usize {
        match kind {
            Compiled::Bernoulli { sampler, .. } => sampler.sample(rng),
            Compiled::Point(target) => target[off],
            Compiled::Locked(target) => {
                let range = self.spec.column_range(self.spec.column_of(target[off]));
                rng.gen_range(range)
            }
        }
    }

    /// Calls `f(pos, log eta(a, b), log eta_row(a))` for each digit of `word`.
    pub(crate) fn walk_log_weights(&self, word: &[usize], mut f: impl FnMut(usize, f64, f64)) {
        self.for_each_position(word.len(), |pos, kind, off| {
            let (pair, row) = self.log_weight(kind, off, word[pos]);
            f(pos, pair, row);
        });
    }

    /// Samples `len` digits and streams their log weights, without storing the word.
    pub(crate) fn sample_log_weights<R: Rng>(
        &self,
        len: usize,
        rng: &mut R,
        mut f: impl FnMut(usize, f64, f64),
    ) {
        self.for_each_position(len, |pos, kind, off| {
            let i = self.draw(kind, off, rng);
            let (pair, row) = self.log_weight(kind, off, i);
            f(pos, pair, row);
        });
    }

    /// Streams `len` sampled digit indices into `f`.
    pub(crate) fn sample_indices<R: Rng>(&self, len: usize, rng: &mut R, mut f: impl FnMut(usize)) {
        self.for_each_position(len, |_, kind, off| f(self.draw(kind, off, rng)));
    }
}

/// Generator for word number `index` drawn with `seed`: ChaCha8 seeded from
/// `seed`, stream `index`.
pub fn word_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws a word of `length` digits, each position independently from its block.
pub fn sample_word(schedule: &PiecewiseBernoulliSchedule, length: usize, seed: u64) -> Result<SymbolicWord> {
    sample_word_indexed(schedule, length, seed, 0)
}

/// The `index`-th word of the family drawn with `seed`.
pub fn sample_word_indexed(
    schedule: &PiecewiseBernoulliSchedule,
    length: usize,
    seed: u64,
    index: u64,
) -> Result<SymbolicWord> {
    if length == 0 {
        return Err(Error::InvalidParams("word length must be >= 1".into()));
    }
    schedule.check_covers(length)?;
    let mut idx = Vec::with_capacity(length);
    schedule.sample_indices(length, &mut word_rng(seed, index), |i| idx.push(i));
    Ok(SymbolicWord::from_indices(&schedule.spec, &idx))
}

/// The block layout of the heuristic measure `mu_n`:
///
/// ```text
/// p_-        on [1, min(n, (n + f) / tau)]
/// p_1        up to n
/// target     on (n, n + f]            (cylinder)
///            point masses to n + f / tau, column-locked to n + f   (ball)
/// p_2        on (n + f, tau n + f]
/// p_+        afterwards
/// ```
///
/// Fractional boundaries are floored.
pub fn heuristic_schedule(
    spec: &CarpetSpec,
    n: usize,
    f_n: usize,
    target: &SymbolicWord,
    quadruple: &Quad<ProbVector>,
    kind: TargetKind,
) -> Result<PiecewiseBernoulliSchedule> {
    if target.len() < f_n {
        return Err(Error::TargetTooShort {
            len: target.len(),
            needed: f_n,
        });
    }
    let first = n.min(spec.floor_div_tau(n + f_n));
    let target = target.prefix(f_n);
    let mut blocks = vec![
        Block::bernoulli(first, quadruple.minus.clone()),
        Block::bernoulli(n - first, quadruple.first.clone()),
    ];
    match kind {
        TargetKind::Cylinder => blocks.push(Block::point_masses(target)),
        TargetKind::Ball => {
            let g = spec.floor_div_tau(f_n);
            blocks.push(Block::point_masses(target.prefix(g)));
            blocks.push(Block::column_locked(target.shift(g)));
        }
    }
    let second = spec.floor_mul_tau(n as f64) - n;
    blocks.push(Block::bernoulli(second, quadruple.second.clone()));
    PiecewiseBernoulliSchedule::new(spec, blocks, Some(quadruple.plus.clone()))
}
