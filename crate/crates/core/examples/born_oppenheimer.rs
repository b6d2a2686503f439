//! Exact and clamped-nuclei energies of a one-electron diatomic as the
//! nuclei get heavier.

use harmolec::born_oppenheimer::BoSolution;
use harmolec::exact::{exact_frequencies, internal_energy};
use harmolec::ModelParams;

fn main() -> harmolec::Result<()> {
    println!("{:>8} {:>12} {:>12} {:>12} {:>12} {:>10}", "M", "omega1", "omega_e", "omega2", "omega_N", "|dE_00|");
    for m in [1.0, 10.0, 100.0, 1000.0, 10000.0] {
        let p = ModelParams::from_values(m, m, 1.0, 1.0, 1.0, 1.0)?;
        let (w1, w2) = exact_frequencies(&p)?;
        let bo = BoSolution::new(&p)?;
        let err = (internal_energy(&p, 0, 0)? - bo.energy(0.0, 0, 0)).abs();
        println!("{m:>8} {w1:>12.8} {:>12.8} {w2:>12.8} {:>12.8} {err:>10.3e}", bo.omega_e, bo.omega_n);
    }
    // With identical nuclei the nuclear frequency is exact; the whole error
    // sits in the electronic mode.
    Ok(())
}
