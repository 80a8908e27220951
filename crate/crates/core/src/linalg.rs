//! Dense complex linear-algebra helpers.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::fock::CMatrix;

/// `exp(i t H)` for Hermitian `H`, through its eigendecomposition.
pub fn expi_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases =
        DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, t * l)));
    v * phases * v.adjoint()
}

/// `tr(A B)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let d = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..d {
        for m in 0..a.ncols() {
            acc += a[(n, m)] * b[(m, n)];
        }
    }
    acc
}

/// Projects a Hermitian matrix onto the positive trace-one cone by clipping
/// negative eigenvalues and renormalizing. Returns the projection and the
/// total negative weight that was removed.
pub fn project_to_states(m: &CMatrix) -> (CMatrix, f64) {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let clipped: f64 = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l < 0.0)
        .map(|l| -l)
        .sum();
    let kept = eig.eigenvalues.map(|l| l.max(0.0));
    let total: f64 = kept.iter().sum();
    let scale = if total > 0.0 { 1.0 / total } else { 0.0 };
    let diag = DMatrix::from_diagonal(&kept.map(|l| Complex64::new(l * scale, 0.0)));
    let v = &eig.eigenvectors;
    let mut out = v * diag * v.adjoint();
    // Restore exact Hermiticity lost in the products.
    let d = out.nrows();
    for n in 0..d {
        out[(n, n)].im = 0.0;
        for k in 0..n {
            let avg = 0.5 * (out[(n, k)] + out[(k, n)].conj());
            out[(n, k)] = avg;
            out[(k, n)] = avg.conj();
        }
    }
    (out, clipped)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_of_pauli_x() {
        let c = |re: f64| Complex64::new(re, 0.0);
        let x = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let u = expi_hermitian(&x, 0.7);
        // exp(i t X) = cos t I + i sin t X
        assert!((u[(0, 0)] - c(0.7f64.cos())).norm() < 1e-15);
        assert!((u[(0, 1)] - Complex64::new(0.0, 0.7f64.sin())).norm() < 1e-15);
    }

    #[test]
    fn projection_clips_negative_part() {
        let c = |re: f64| Complex64::new(re, 0.0);
        let m = CMatrix::from_row_slice(2, 2, &[c(1.1), c(0.0), c(0.0), c(-0.1)]);
        let (p, clipped) = project_to_states(&m);
        assert!((clipped - 0.1).abs() < 1e-15);
        assert!((p[(0, 0)] - c(1.0)).norm() < 1e-15);
        assert!(p[(1, 1)].norm() < 1e-15);
    }
}
