//! First-order mass-ratio series of the squared frequencies and the order
//! of the Born-Oppenheimer error.

use harmolec::asymptotics::{bo_error_scaling, series_vs_exact, sweep, MassRatioFamily};
use harmolec::ForceConstants;

fn main() -> harmolec::Result<()> {
    let family = MassRatioFamily::new(ForceConstants::new(1.0, 2.0, 3.0), 2.0, 1.0, 1.0)?;
    let lambdas = [1e-1, 1e-2, 1e-3, 1e-4];
    let c = family.coefficients();
    println!("w1 = {} + {} lambda + ...,  w2 = {} lambda + ...", c.w1_0, c.w1_1, c.w2_1);
    for s in sweep(&family, &lambdas)? {
        println!(
            "lambda {:.0e}: w1 {:.10} (series {:.10}), w2 {:.3e} (series {:.3e}), |E - E_BO| {:.3e}",
            s.lambda, s.w1_exact, s.w1_series, s.w2_exact, s.w2_series, s.abs_error()
        );
    }
    for lambda in [1e-2, 1e-3, 1e-4] {
        let (r1, r2) = series_vs_exact(&family, lambda)?;
        println!("residual / lambda^2 at {lambda:.0e}: {:.6} {:.6}", r1 / (lambda * lambda), r2 / (lambda * lambda));
    }
    println!("fitted order of the BO error: {:.4}", bo_error_scaling(&family, &lambdas)?);
    Ok(())
}
