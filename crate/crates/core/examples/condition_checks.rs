//! Pairwise orthogonality conditions and HR checks for the Silver code.

use stbc_fsd::code::silver;
use stbc_fsd::criteria::{hr_mutual_orthogonality, predict_column_orthogonality, VerdictTable};

fn main() -> stbc_fsd::Result<()> {
    let code = silver();
    print!("{}", VerdictTable::new(&code).to_ascii());

    // Symbols 1 and 2 share a block; 1 and 3 do not.
    for (i, j) in [(0, 1), (0, 2)] {
        let p = predict_column_orthogonality(&code, i, j)?;
        let hr = hr_mutual_orthogonality(&code, i, j)?;
        println!(
            "({}, {}): c1={} c2={} orthogonal={} hr={} (|S|_F = {:.3e})",
            i + 1,
            j + 1,
            p.c1.holds,
            p.c2.holds,
            p.orthogonal,
            hr.orthogonal,
            hr.frobenius
        );
    }
    Ok(())
}
