//! The three reference codes: ABBA, Silver and Golden.

use num_complex::Complex64;

use super::StbcCode;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

pub const BUILTIN_NAMES: [&str; 4] = ["abba", "silver", "golden", "golden-canonical"];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn m2(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> CMatrix {
    CMatrix::from_rows(&[vec![a, b], vec![cc, d]]).expect("2x2")
}

fn interleaved_labels(kappa: usize) -> Vec<String> {
    (1..=kappa)
        .flat_map(|k| [format!("Re(s{k})"), format!("Im(s{k})")])
        .collect()
}

/// Looks up a built-in code by name.
pub fn builtin(name: &str) -> Result<StbcCode> {
    match name.to_ascii_lowercase().as_str() {
        "abba" => Ok(abba()),
        "silver" => Ok(silver()),
        "golden" => Ok(golden()),
        "golden-canonical" => Ok(golden_canonical()),
        _ => Err(Error::UnknownCode(name.to_string())),
    }
}

/// ABBA quasi-orthogonal code for two antennas, `κ = 2`, `T = 2`.
pub fn abba() -> StbcCode {
    let (o, one, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let weights = vec![
        CMatrix::identity(2),
        m2(o, -one, -one, o),
        m2(o, i, i, o),
        m2(i, o, o, i),
    ];
    StbcCode::new("abba", 2, 2, weights, interleaved_labels(2)).expect("valid built-in")
}

/// Silver code, `κ = 4`, `n_t = T = 2`, symbols in `Re/Im` interleaved order.
pub fn silver() -> StbcCode {
    let s7 = 7f64.sqrt();
    let u11 = c(1.0, 1.0) / s7;
    let u12 = c(-1.0, 2.0) / s7;
    let u21 = c(1.0, 2.0) / s7;
    let u22 = c(1.0, -1.0) / s7;
    let (o, one, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let weights = vec![
        CMatrix::identity(2),
        m2(i, o, o, -i),
        m2(o, -one, one, o),
        m2(o, i, i, o),
        m2(u11, -u21.conj(), -u21, -u11.conj()),
        m2(i * u11, i * u21.conj(), -i * u21, i * u11.conj()),
        m2(u12, -u22.conj(), -u22, -u12.conj()),
        m2(i * u12, i * u22.conj(), -i * u22, i * u12.conj()),
    ];
    StbcCode::new("silver", 2, 2, weights, interleaved_labels(4)).expect("valid built-in")
}

struct GoldenParts {
    d1: CMatrix,
    d2: CMatrix,
    e: CMatrix,
}

fn golden_parts() -> GoldenParts {
    let s5 = 5f64.sqrt();
    let theta = (1.0 + s5) / 2.0;
    let theta_bar = (1.0 - s5) / 2.0;
    let i = c(0.0, 1.0);
    let alpha = c(1.0, 1.0) - i * theta;
    let alpha_bar = c(1.0, 1.0) - i * theta_bar;
    let o = c(0.0, 0.0);
    GoldenParts {
        d1: CMatrix::diag(&[alpha / s5, alpha_bar / s5]),
        d2: CMatrix::diag(&[alpha * theta / s5, alpha_bar * theta_bar / s5]),
        e: m2(o, c(1.0, 0.0), i, o),
    }
}

/// Golden code in its customary sphere-decoding order
/// `[Re s1, Re s2, Im s1, Im s2, Re s3, Re s4, Im s3, Im s4]`.
pub fn golden() -> StbcCode {
    let GoldenParts { d1, d2, e } = golden_parts();
    let i = c(0.0, 1.0);
    let weights = vec![
        d1.clone(),
        d2.clone(),
        d1.scale(i),
        d2.scale(i),
        &d1 * &e,
        &d2 * &e,
        (&d1 * &e).scale(i),
        (&d2 * &e).scale(i),
    ];
    let labels = [
        "Re(s1)", "Re(s2)", "Im(s1)", "Im(s2)", "Re(s3)", "Re(s4)", "Im(s3)", "Im(s4)",
    ]
    .map(String::from)
    .to_vec();
    StbcCode::new("golden", 2, 2, weights, labels).expect("valid built-in")
}

/// Golden code with the plain `Re/Im` interleaved symbol order.
pub fn golden_canonical() -> StbcCode {
    let GoldenParts { d1, d2, e } = golden_parts();
    let i = c(0.0, 1.0);
    let weights = vec![
        d1.clone(),
        d1.scale(i),
        d2.clone(),
        d2.scale(i),
        &d1 * &e,
        (&d1 * &e).scale(i),
        &d2 * &e,
        (&d2 * &e).scale(i),
    ];
    StbcCode::new("golden-canonical", 2, 2, weights, interleaved_labels(4)).expect("valid built-in")
}
