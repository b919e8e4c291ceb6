//! Small helpers shared by unit tests.

use num_complex::Complex;

use crate::matrix::ComplexMatrix;

pub fn cplx(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

pub fn re_mat(rows: &[&[f64]]) -> ComplexMatrix<f64> {
    let r = rows.len();
    let c = rows[0].len();
    ComplexMatrix::from_fn(r, c, |i, j| cplx(rows[i][j], 0.0))
}
