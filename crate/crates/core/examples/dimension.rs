// DIM(alpha, H) for the carpet N=3, M=8, T=(5,2,8): maximizer, six functions, active set.

use shrinking_carpet::{maximize, CarpetSpec, DimParams, MaximizeOptions, Result};

pub fn run_example() -> Result<f64> {
    let spec = CarpetSpec::figure5();
    println!("carpet N={} M={} D={} tau={:.6}", spec.n(), spec.m(), spec.d(), spec.tau());
    println!("McMullen dimension {:.9}", spec.mcmullen_dimension());

    let params = DimParams::ball(&spec, 1.0, 0.8)?;
    let r = maximize(&spec, &params, &MaximizeOptions::default())?;
    let z = r.argmax.to_array();
    println!("DIM(1, 0.8) = {:.9}", r.value);
    println!("theta = ({:.6}, {:.6}, {:.6}, {:.6})", z[0], z[1], z[2], z[3]);
    for (i, d) in r.breakdown.d.iter().enumerate() {
        println!("  d{} = {:.9}", i + 1, d);
    }
    println!("active {}", r.breakdown.active_label());
    Ok(r.value)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
