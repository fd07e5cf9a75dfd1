// A coarse alpha sweep for the preset carpet N=3, M=8, T=(5,2,8) with H=0.8, as CSV.

use shrinking_carpet::cli::{alpha_grid, sweep_csv};
use shrinking_carpet::optimizer::sweep;
use shrinking_carpet::{CarpetSpec, DimParams, MaximizeOptions, Result};

pub fn run_example() -> Result<String> {
    let spec = CarpetSpec::figure5();
    let params = DimParams::ball(&spec, 0.0, 0.8)?;
    let alphas = alpha_grid(0.0, 6.0, 25)?;
    let results = sweep(&spec, &params, &alphas, &MaximizeOptions::default())?;
    let csv = sweep_csv(&alphas, &results);
    print!("{csv}");
    Ok(csv)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
