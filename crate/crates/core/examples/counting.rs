// Type-class counts of low-entropy words and the method-of-types bound.

use shrinking_carpet::symdyn::{count_entropy_bounded, count_rowentropy_above, types_bound};
use shrinking_carpet::{CarpetSpec, Frontier, Result};

pub fn run_example() -> Result<Vec<(usize, u128, f64)>> {
    let spec = CarpetSpec::from_counts(2, 4, &[2, 1])?;
    let h = 0.8;
    let mut rows = Vec::new();
    println!("n,count(h<={h}),bound");
    for n in [4, 8, 16, 32] {
        let c = count_entropy_bounded(&spec, n, h)?;
        let b = types_bound(&spec, n, h);
        println!("{n},{c},{b:.6e}");
        rows.push((n, c, b));
    }

    let z = 0.6;
    let psi = Frontier::new(&spec).psi(z)?;
    let n = 20;
    let above = count_rowentropy_above(&spec, n, z)?;
    println!("#{{h_r >= {z}}} at n={n}: {above}, growth exp(n psi) = {:.6e}", (n as f64 * psi).exp());
    Ok(rows)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
