// The entropy frontier psi and its inverse phi, with the lifted vectors.

use shrinking_carpet::{distinguished_measures, CarpetSpec, Frontier, Result};

pub fn run_example() -> Result<Vec<(f64, f64)>> {
    let spec = CarpetSpec::figure5();
    let f = Frontier::new(&spec);
    let dist = distinguished_measures(&spec);
    println!("h_r(p_D) = {:.9}", f.hr_max_entropy());
    println!("h_r(p_d) = {:.9}", f.hr_max_dimension());
    println!("h(p_R)   = {:.9}", dist.max_row_entropy.entropy());

    let mut pts = Vec::new();
    println!("z,psi,psi',phi(psi)");
    for k in 0..=10 {
        let z = f.hr_max_entropy() + (spec.log_r() - f.hr_max_entropy()) * k as f64 / 10.0;
        let (psi, dpsi, _) = f.psi_derivatives(z)?;
        println!("{z:.6},{psi:.9},{dpsi:.6},{:.9}", f.phi(psi)?);
        pts.push((z, psi));
    }

    let z = 0.5 * (f.hr_max_entropy() + spec.log_r());
    let p = f.lift(&spec, z)?;
    println!("lift({z:.6}): h = {:.9}, h_r = {:.9}", p.entropy(), p.row_entropy(&spec));
    Ok(pts)
}

fn main() -> Result<()> {
    run_example().map(|_| ())
}
