//! Measures the zero pattern of `R` for ABBA and compares it with the
//! structural prediction.

use stbc_fsd::code::abba;
use stbc_fsd::structure::{empirical_pattern, predicted_pattern, ChannelModel};

fn main() -> stbc_fsd::Result<()> {
    let code = abba();
    let measured = empirical_pattern(&code, &ChannelModel::new(2, 42), 100)?;
    let predicted = predicted_pattern(&code);
    println!(
        "measured ({} draws):\n{}",
        measured.trials,
        measured.pattern.to_ascii()
    );
    println!("predicted:\n{}", predicted.to_ascii());
    println!("agree: {}", measured.pattern == predicted);
    println!(
        "largest |R_ij|/|R|_F on zero entries: {:.1e}",
        measured.max_zero_magnitude()
    );
    println!(
        "{}",
        serde_json::to_string_pretty(&measured.to_json_value()).unwrap()
    );
    Ok(())
}
