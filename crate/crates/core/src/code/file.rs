//! JSON code-definition files.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::StbcCode;
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// On-disk layout: row-major matrices of `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeFile {
    pub name: String,
    pub nt: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub kappa: usize,
    pub symbol_labels: Vec<String>,
    pub weights: Vec<Vec<Vec<[f64; 2]>>>,
}

impl From<&StbcCode> for CodeFile {
    fn from(code: &StbcCode) -> Self {
        let weights = code
            .weights()
            .iter()
            .map(|w| {
                (0..w.rows())
                    .map(|r| {
                        (0..w.cols())
                            .map(|c| [w[(r, c)].re, w[(r, c)].im])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self {
            name: code.name().to_string(),
            nt: code.n_t(),
            t: code.t(),
            kappa: code.kappa(),
            symbol_labels: code.symbol_labels().to_vec(),
            weights,
        }
    }
}

impl TryFrom<CodeFile> for StbcCode {
    type Error = Error;

    fn try_from(file: CodeFile) -> Result<Self> {
        if file.weights.len() != 2 * file.kappa {
            return Err(Error::Schema(format!(
                "kappa = {} requires {} weight matrices, found {}",
                file.kappa,
                2 * file.kappa,
                file.weights.len()
            )));
        }
        let mut weights = Vec::with_capacity(file.weights.len());
        for (l, rows) in file.weights.iter().enumerate() {
            if rows.len() != file.nt || rows.iter().any(|r| r.len() != file.t) {
                return Err(Error::DimensionMismatch(format!(
                    "weight matrix {} is not {}x{}",
                    l + 1,
                    file.nt,
                    file.t
                )));
            }
            let data: Vec<Complex64> = rows
                .iter()
                .flatten()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect();
            if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite("weight matrix entries"));
            }
            weights.push(CMatrix::new(file.nt, file.t, data)?);
        }
        StbcCode::new(file.name, file.nt, file.t, weights, file.symbol_labels)
    }
}

impl StbcCode {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: CodeFile =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        file.try_into()
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&CodeFile::from(self))?)
    }
}

/// Reads a code definition. Linear dependence is not an error; check
/// [`StbcCode::rank_warning`].
pub fn load_code(path: impl AsRef<Path>) -> Result<StbcCode> {
    StbcCode::from_json_str(&fs::read_to_string(path)?)
}

pub fn save_code(code: &StbcCode, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, code.to_json_string()?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{builtin, BUILTIN_NAMES};

    #[test]
    fn round_trip_builtins() {
        for name in BUILTIN_NAMES {
            let code = builtin(name).unwrap();
            let back = StbcCode::from_json_str(&code.to_json_string().unwrap()).unwrap();
            assert_eq!(back, code);
        }
    }

    #[test]
    fn round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("abba.json");
        let code = builtin("abba").unwrap();
        save_code(&code, &path).unwrap();
        assert_eq!(load_code(&path).unwrap(), code);
    }

    #[test]
    fn odd_matrix_count_is_schema_error() {
        let mut file = CodeFile::from(&builtin("abba").unwrap());
        file.weights.pop();
        file.symbol_labels.pop();
        let text = serde_json::to_string(&file).unwrap();
        assert!(matches!(
            StbcCode::from_json_str(&text),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn wrong_shape_rejected() {
        let mut file = CodeFile::from(&builtin("abba").unwrap());
        file.weights[0][1].pop();
        let text = serde_json::to_string(&file).unwrap();
        assert!(matches!(
            StbcCode::from_json_str(&text),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn missing_field_rejected() {
        assert!(matches!(
            StbcCode::from_json_str(r#"{"name":"x","nt":2}"#),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn dependent_file_loads_with_warning() {
        let mut file = CodeFile::from(&builtin("abba").unwrap());
        file.weights[1] = file.weights[0].clone();
        let code: StbcCode = file.try_into().unwrap();
        assert!(code.rank_warning().is_some());
    }
}
