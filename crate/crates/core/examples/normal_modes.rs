//! Frequencies of the symmetric molecule by three independent routes, and
//! the normal-mode transform of an asymmetric one.

use harmolec::exact::char_poly;
use harmolec::homonuclear::{homonuclear_frequencies, HomonuclearParams};
use harmolec::model::internal_bilinear_form;
use harmolec::normal_modes::{diagonalize, ModeState};
use harmolec::ModelParams;

fn main() -> harmolec::Result<()> {
    let p = ModelParams::symmetric();
    let modes = diagonalize(&internal_bilinear_form(&p))?;
    let (w1, w2) = char_poly(&p).roots()?;
    let closed = homonuclear_frequencies(&HomonuclearParams::from_model(&p)?);
    println!("symmetric molecule, sqrt(3) = {:.16}", 3f64.sqrt());
    println!("  simultaneous diagonalization: {:?}", modes.frequencies());
    println!("  characteristic polynomial:    [{}, {}]", w1.sqrt(), w2.sqrt());
    println!("  identical-nuclei formulas:    [{}, {}]", closed.0, closed.1);

    let p = ModelParams::from_values(2.0, 1.0, 0.1, 1.0, 2.0, 3.0)?;
    let modes = diagonalize(&internal_bilinear_form(&p))?;
    println!("\nm = (2, 1, 0.1), k = (1, 2, 3)");
    println!("  frequencies {:?}", modes.frequencies());
    println!("  q = C y with C =\n{}", modes.transform());
    for n in [[0, 0], [1, 0], [0, 1]] {
        let s = ModeState(n.to_vec());
        let (t, v) = modes.virial_split(&s)?;
        println!("  state {n:?}: E = {:.6}, <T> = {t:.6}, <V> = {v:.6}", modes.mode_energy(&s)?);
    }
    Ok(())
}
