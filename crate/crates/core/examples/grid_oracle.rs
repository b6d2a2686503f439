//! Finite-difference check of the analytic spectrum on a coarse grid.
//!
//! Set HARMOLEC_THREADS to cap the worker pool.

use harmolec::exact::lowest_levels;
use harmolec::oracle::{expectation_t_v, refine, solve, GridSpec};
use harmolec::ModelParams;

fn main() -> harmolec::Result<()> {
    let p = ModelParams::from_values(2.0, 1.0, 0.1, 1.0, 2.0, 3.0)?;
    let levels = lowest_levels(&p, 4)?;
    let coarse = solve(&p, GridSpec::auto(&p, 96)?, 4)?;
    let fine = refine(&p, GridSpec::auto(&p, 192)?, &coarse)?;
    println!("box half widths {:?}", coarse.grid().half_widths());
    println!("{:>8} {:>12} {:>12} {:>12} {:>6} {:>10}", "(n1,n2)", "analytic", "N=96", "N=192", "ratio", "|T-V|");
    for (k, &(n1, n2, e)) in levels.iter().enumerate() {
        let (a, b) = (coarse.pairs[k].eigenvalue, fine.pairs[k].eigenvalue);
        let (t, v) = expectation_t_v(&fine.hamiltonian, &fine.pairs[k]);
        println!(
            "{:>8} {e:>12.8} {a:>12.8} {b:>12.8} {:>6.2} {:>10.2e}",
            format!("({n1},{n2})"),
            (a - e) / (b - e),
            (t - v).abs()
        );
    }
    Ok(())
}
