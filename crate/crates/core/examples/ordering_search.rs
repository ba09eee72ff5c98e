//! Finds a symbol ordering that lowers the decoding exponent.

use stbc_fsd::code::golden_canonical;
use stbc_fsd::structure::{ordering_search, ChannelModel, SearchConfig, DEFAULT_Q};

fn main() -> stbc_fsd::Result<()> {
    let code = golden_canonical();
    let config = SearchConfig::new(ChannelModel::new(2, 42), 100, DEFAULT_Q);
    let outcome = ordering_search(&code, &config)?;
    println!(
        "{}: exponent {} -> {} with ordering {:?} ({} candidates screened)",
        code.name(),
        outcome.baseline_exponent,
        outcome.best_exponent,
        outcome.ordering.to_one_based(),
        outcome.candidates_screened
    );

    let greedy = ordering_search(&code, &config.heuristic())?;
    println!("heuristic trace: {:?}", greedy.trace);
    Ok(())
}
