// Words, approximate squares and the measure of a square under a
// piecewise Bernoulli schedule.

use shrinking_carpet::symdyn::{
    approx_square, local_dimension_curve, log_measure_square, project, word_entropy, Block,
    PiecewiseBernoulliSchedule, SymbolicWord,
};
use shrinking_carpet::{CarpetSpec, ProbVector, Result};

pub fn run_example() -> Result<f64> {
    let spec = CarpetSpec::from_counts(2, 4, &[2, 1])?;
    let w = SymbolicWord::parse(&spec, "1:1 1:2 2:1 1:1 2:1 1:2")?;
    let (x, y) = project(&spec, &w);
    let e = word_entropy(&spec, &w);
    println!("word {w}");
    println!("point ({x:.6}, {y:.6}), h = {:.6}, h_r = {:.6}", e.h, e.h_r);

    let sq = approx_square(&spec, &w, 4)?;
    println!("B_4: pair prefix {:?}, column prefix {:?}", sq.pair_prefix, sq.column_prefix);

    let p = ProbVector::new(&spec, vec![0.5, 0.25, 0.25])?;
    let sched = PiecewiseBernoulliSchedule::new(
        &spec,
        vec![Block::point_masses(w.prefix(2)), Block::bernoulli(10, p.clone())],
        Some(ProbVector::uniform(&spec)),
    )?;
    let lm = log_measure_square(&sched, &w, 4)?;
    println!("log mu(B_4) = {lm:.9}");
    for (m, d) in local_dimension_curve(&sched, &w, &[1, 2, 3, 4, 5, 6])? {
        println!("  d_{m} = {d:.6}");
    }
    Ok(lm)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
