//! Assembles a Golden-code codeword and prints the real generator matrix.

use num_complex::Complex64;
use stbc_fsd::code::golden;

fn main() -> stbc_fsd::Result<()> {
    let code = golden();
    println!(
        "{}: n_t={} T={} kappa={} rate={}",
        code.name(),
        code.n_t(),
        code.t(),
        code.kappa(),
        code.rate()
    );
    let s: Vec<Complex64> = (0..code.kappa())
        .map(|k| Complex64::new(1.0 - 2.0 * (k % 2) as f64, 1.0))
        .collect();
    println!("codeword for s = {s:?}\n{:?}", code.assemble_codeword(&s)?);
    let g = code.generator_matrix();
    println!(
        "generator {}x{}, rank {}",
        g.rows(),
        g.cols(),
        code.generator_rank()
    );
    if let Some(w) = code.rank_warning() {
        println!("warning: {w}");
    }
    Ok(())
}
