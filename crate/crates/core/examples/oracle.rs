// The reduced optimizer against a lattice brute force over all four vectors.

use shrinking_carpet::{brute_force, maximize, CarpetSpec, DimParams, MaximizeOptions, Result};

pub fn run_example() -> Result<Vec<(f64, f64, f64)>> {
    let spec = CarpetSpec::from_counts(2, 4, &[2, 1])?;
    let mut out = Vec::new();
    println!("alpha,brute_force(K=20),maximize");
    for alpha in [0.3, 1.0, 3.0] {
        let params = DimParams::cylinder(alpha)?;
        let brute = brute_force(&spec, &params, 20)?;
        let opt = maximize(&spec, &params, &MaximizeOptions::default())?.value;
        println!("{alpha},{brute:.9},{opt:.9}");
        out.push((alpha, brute, opt));
    }
    Ok(out)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
