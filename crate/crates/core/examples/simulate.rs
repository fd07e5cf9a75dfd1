// Scale table of the heuristic measure: predicted d_i against sampled local
// dimensions at the six scales.

use shrinking_carpet::symdyn::{scale_table, ScaleTable};
use shrinking_carpet::{maximize, CarpetSpec, DimParams, MaximizeOptions, Result};

pub fn run_example() -> Result<ScaleTable> {
    let spec = CarpetSpec::full_torus(2, 4)?;
    let params = DimParams::ball(&spec, 1.0, 4f64.ln())?;
    let opt = maximize(&spec, &params, &MaximizeOptions::default())?;
    let table = scale_table(&spec, &params, &opt.vectors, 1000, 20, 42)?;
    println!("n = {}, f(n) = {}, H = {:.6}", table.n, table.f_n, table.h_used);
    println!("i,m,predicted,simulated");
    for r in &table.rows {
        println!("{},{},{:.6},{:.6}", r.index, r.m, r.predicted, r.simulated);
    }
    Ok(table)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
