//! Round-trips a code through its JSON file format and analyzes the copy.
//! The interleaved order hides the two ABBA groups, so the copy classifies
//! as a single block until an ordering search regroups it.

use stbc_fsd::code::{abba, load_code, save_code, SymbolOrdering};
use stbc_fsd::structure::{classify, empirical_pattern, ChannelModel};

fn main() -> stbc_fsd::Result<()> {
    let dir = std::env::temp_dir().join("stbc-fsd-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("scrambled_abba.json");

    let scrambled = abba()
        .apply_ordering(&SymbolOrdering::from_one_based(&[3, 1, 4, 2])?)?
        .with_name("scrambled-abba");
    save_code(&scrambled, &path)?;
    println!("wrote {}", path.display());

    let code = load_code(&path)?;
    let measured = empirical_pattern(&code, &ChannelModel::new(2, 42), 100)?;
    let report = classify(&code, &measured);
    println!(
        "{}: {} with groups {:?}",
        code.name(),
        report.family.as_str(),
        report.groups.groups_one_based()
    );
    Ok(())
}
