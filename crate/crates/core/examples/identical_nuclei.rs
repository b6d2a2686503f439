//! Ground-state separation densities for identical nuclei and how the BO
//! nucleus-electron density approaches the exact one.

use harmolec::homonuclear::{linspace, parity, rho_ne, rho_ne_bo, rho_nn, HomonuclearParams};

fn main() -> harmolec::Result<()> {
    let h = HomonuclearParams::new(100.0, 1.0, 1.0, 1.0)?;
    let (nn, ne, ne_bo) = (rho_nn(&h), rho_ne(&h), rho_ne_bo(&h));
    println!("{:>6} {:>12} {:>12} {:>12}", "delta", "rho_nn", "rho_ne", "rho_ne_bo");
    for d in linspace(-1.5, 1.5, 7) {
        println!("{d:>6.2} {:>12.6} {:>12.6} {:>12.6}", nn.density(d), ne.density(d), ne_bo.density(d));
    }

    println!("\nmax |rho_ne - rho_ne_bo| against nucleus mass");
    let mut m1 = 10.0;
    while m1 < 2e4 {
        let h = HomonuclearParams::new(m1, 1.0, 1.0, 1.0)?;
        let (a, b) = (rho_ne(&h), rho_ne_bo(&h));
        let gap = linspace(-4.0, 4.0, 2001)
            .into_iter()
            .map(|d| (a.density(d) - b.density(d)).abs())
            .fold(0.0, f64::max);
        println!("  m1 = {m1:>7}: {gap:.3e}");
        m1 *= 4.0;
    }

    let signs: Vec<i32> = (0..6).map(parity).collect();
    println!("\nexchange parity of n2 = 0..5: {signs:?}");
    Ok(())
}
