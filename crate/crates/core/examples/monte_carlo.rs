//! BER/SER curve of the ABBA code with 16-QAM.

use stbc_fsd::code::abba;
use stbc_fsd::decoder::{monte_carlo, Constellation, SimConfig};
use stbc_fsd::structure::predicted_pattern;

fn main() -> stbc_fsd::Result<()> {
    let code = abba();
    let config = SimConfig {
        snr_db: vec![0.0, 5.0, 10.0, 15.0, 20.0],
        trials: 2000,
        seed: 42,
        n_r: 2,
        constellation: Constellation::new(4)?,
        oracle_check: true,
    };
    let pattern = predicted_pattern(&code);
    println!("snr_db      ber      ser  mean_nodes  agreement");
    for row in monte_carlo(&code, &config, Some(&pattern))? {
        println!(
            "{:>6} {:>8.2e} {:>8.2e} {:>11.1} {:>10}",
            row.snr_db,
            row.ber,
            row.ser,
            row.mean_nodes,
            row.oracle_agreement.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
