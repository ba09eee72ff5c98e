//! Classifies every built-in code and reports its decoding complexity.

use stbc_fsd::code::{builtin, BUILTIN_NAMES};
use stbc_fsd::structure::{classify, empirical_pattern, ChannelModel};

fn main() -> stbc_fsd::Result<()> {
    for name in BUILTIN_NAMES {
        let code = builtin(name)?;
        let measured = empirical_pattern(&code, &ChannelModel::new(2, 42), 100)?;
        let report = classify(&code, &measured);
        println!(
            "{name:>16}: {:<16} groups {:?}  exponent {} (exhaustive {})",
            report.family.as_str(),
            report.groups.groups_one_based(),
            report.fsd.exponent,
            report.fsd.exhaustive_exponent
        );
        if let Some(fast) = report.fast() {
            println!("{:>18}head {:?}, tail {}", "", fast.head.sizes(), fast.tail);
        }
        if let Some(bo) = report.bo_params() {
            println!(
                "{:>18}block orthogonal ({}, {}, {})",
                "", bo.super_blocks, bo.k, bo.block_size
            );
        }
    }
    Ok(())
}
