//! Entries of `R` that are zero although the HRQF matrix is nonzero there.

use stbc_fsd::code::{golden, silver};
use stbc_fsd::structure::{compare_hrqf, empirical_pattern, ChannelModel};

fn main() -> stbc_fsd::Result<()> {
    for code in [silver(), golden()] {
        let measured = empirical_pattern(&code, &ChannelModel::new(2, 42), 100)?;
        let gaps = compare_hrqf(&code, &measured.pattern);
        println!("{}: {} mismatches", code.name(), gaps.len());
        for m in gaps {
            println!(
                "  {:?} ({},{})  U = {:.3}",
                m.direction, m.i, m.j, m.u_value
            );
        }
    }
    Ok(())
}
