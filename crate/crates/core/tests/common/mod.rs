#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use stbc_fsd::code::StbcCode;
use stbc_fsd::linalg::CMatrix;
use stbc_fsd::parallel::task_rng;

pub fn random_complex<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let data = (0..rows * cols)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    CMatrix::new(rows, cols, data).unwrap()
}

/// Code with `dim` i.i.d. Gaussian weight matrices of size `n_t × t`.
pub fn random_code(dim: usize, n_t: usize, t: usize, seed: u64) -> StbcCode {
    let mut rng = task_rng(seed, 0);
    let weights = (0..dim).map(|_| random_complex(&mut rng, n_t, t)).collect();
    let labels = (0..dim).map(|l| format!("x{}", l + 1)).collect();
    StbcCode::new(format!("random-{seed}"), n_t, t, weights, labels).unwrap()
}
