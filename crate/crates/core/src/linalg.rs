//! Small dense helpers on top of nalgebra.

use nalgebra::{Matrix3, SMatrix, SymmetricEigen, Vector3};

pub type Mat3 = Matrix3<f64>;
pub type Mat6 = SMatrix<f64, 6, 6>;
pub type State3 = [f64; 3];

/// 3×3 representation of the quarter turn acting on `(v, w)` and leaving
/// `p` fixed.
pub fn quarter_turn() -> Mat3 {
    Mat3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0)
}

#[inline]
pub fn apply(m: &Mat3, q: &State3) -> State3 {
    [
        m[(0, 0)] * q[0] + m[(0, 1)] * q[1] + m[(0, 2)] * q[2],
        m[(1, 0)] * q[0] + m[(1, 1)] * q[1] + m[(1, 2)] * q[2],
        m[(2, 0)] * q[0] + m[(2, 1)] * q[1] + m[(2, 2)] * q[2],
    ]
}

#[inline]
pub fn quadratic_form(m: &Mat3, q: &State3) -> f64 {
    let mq = apply(m, q);
    q[0] * mq[0] + q[1] * mq[1] + q[2] * mq[2]
}

pub fn sym_eigenvalues3(m: &Mat3) -> Vector3<f64> {
    SymmetricEigen::new(*m).eigenvalues
}

pub fn min_eigenvalue3(m: &Mat3) -> f64 {
    sym_eigenvalues3(m).min()
}

pub fn min_eigenvalue6(m: &Mat6) -> f64 {
    SymmetricEigen::new(*m).eigenvalues.min()
}

/// Moore–Penrose inverse of a symmetric matrix via its spectral
/// decomposition. Eigenvalues with modulus below `rank_tol · max|λ|` are
/// treated as zero.
pub fn pseudo_inverse_sym(m: &Mat3, rank_tol: f64) -> Mat3 {
    let eig = SymmetricEigen::new(*m);
    let scale = eig.eigenvalues.amax();
    let mut out = Mat3::zeros();
    if scale == 0.0 {
        return out;
    }
    for (k, &ev) in eig.eigenvalues.iter().enumerate() {
        if ev.abs() > rank_tol * scale {
            let u = eig.eigenvectors.column(k);
            out += (u * u.transpose()) / ev;
        }
    }
    // Symmetrise away the round-off of the outer products.
    (out + out.transpose()) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pinv_of_diagonal() {
        let m = Mat3::from_diagonal(&Vector3::new(0.5, 0.0, 0.25));
        let p = pseudo_inverse_sym(&m, 1e-10);
        assert_abs_diff_eq!(p, Mat3::from_diagonal(&Vector3::new(2.0, 0.0, 4.0)), epsilon = 1e-14);
        assert_abs_diff_eq!(pseudo_inverse_sym(&Mat3::identity(), 1e-10), Mat3::identity(), epsilon = 1e-15);
        assert_eq!(pseudo_inverse_sym(&Mat3::zeros(), 1e-10), Mat3::zeros());
    }

    #[test]
    fn quarter_turn_has_order_four() {
        let r = quarter_turn();
        assert_eq!(r * r * r * r, Mat3::identity());
        assert_eq!(apply(&r, &[1.0, 0.0, 3.0]), [0.0, 1.0, 3.0]);
    }
}
