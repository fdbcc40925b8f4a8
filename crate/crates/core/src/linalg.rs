//! Dense complex linear algebra used throughout the crate, backed by
//! `nalgebra`.

use nalgebra::{DMatrix, DVector};

#[allow(non_camel_case_types)]
pub type c64 = num_complex::Complex64;

pub type ComplexMatrix = DMatrix<c64>;
pub type ComplexVector = DVector<c64>;

/// `x · yᴴ`
pub fn outer(x: &ComplexVector, y: &ComplexVector) -> ComplexMatrix {
    x * y.adjoint()
}

pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise modulus of `a - b`. Panics on shape mismatch.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    m.singular_values().iter().copied().collect()
}

/// `log₂ |det(m)|` through an LU factorization, so large determinants
/// don't overflow. Returns `None` when `m` is singular.
pub fn log2_abs_det(m: &ComplexMatrix) -> Option<f64> {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let lu = m.clone().lu();
    let u = lu.u();
    let mut acc = 0.0;
    for i in 0..u.nrows() {
        let d = u[(i, i)].norm();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        acc += d.log2();
    }
    Some(acc)
}

/// Scales column `j` of `m` by `scale[j]` (right-multiplication by a diagonal).
pub fn scale_columns(m: &mut ComplexMatrix, scale: &[c64]) {
    assert_eq!(m.ncols(), scale.len());
    for (mut col, s) in m.column_iter_mut().zip(scale) {
        col *= *s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_det_of_diagonal() {
        let m = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![
            c64::new(2.0, 0.0),
            c64::new(0.0, 4.0),
        ]));
        assert!((log2_abs_det(&m).unwrap() - 3.0).abs() < 1e-12);
        assert!(log2_abs_det(&ComplexMatrix::zeros(2, 2)).is_none());
    }

    #[test]
    fn singular_values_sorted() {
        let m = ComplexMatrix::from_diagonal(&ComplexVector::from_vec(vec![
            c64::new(1.0, 0.0),
            c64::new(0.0, -3.0),
            c64::new(2.0, 0.0),
        ]));
        let s = singular_values(&m);
        assert_eq!(s.len(), 3);
        assert!((s[0] - 3.0).abs() < 1e-12 && (s[1] - 2.0).abs() < 1e-12 && (s[2] - 1.0).abs() < 1e-12);
    }
}
