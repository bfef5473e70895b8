//! Small dense linear algebra on fixed-size arrays.

use crate::error::{Error, Result};

pub type Mat<const N: usize> = [[f64; N]; N];

/// Invertibility threshold on |det g|.
pub const DET_FLOOR: f64 = 1e-12;

pub fn identity<const N: usize>() -> Mat<N> {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }))
}

pub fn matmul<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> Mat<N> {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..N).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn transpose<const N: usize>(a: &Mat<N>) -> Mat<N> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

pub fn max_abs<const N: usize>(a: &Mat<N>) -> f64 {
    a.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()))
}

pub fn symmetrize<const N: usize>(a: &Mat<N>) -> Mat<N> {
    std::array::from_fn(|i| std::array::from_fn(|j| 0.5 * (a[i][j] + a[j][i])))
}

/// Doolittle LU factorisation with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu<const N: usize> {
    lu: Mat<N>,
    perm: [usize; N],
    sign: f64,
}

impl<const N: usize> Lu<N> {
    pub fn new(a: &Mat<N>) -> Self {
        let mut lu = *a;
        let mut perm: [usize; N] = std::array::from_fn(|i| i);
        let mut sign = 1.0;
        for k in 0..N {
            let pivot = (k..N)
                .max_by(|&i, &j| lu[i][k].abs().total_cmp(&lu[j][k].abs()))
                .unwrap_or(k);
            if pivot != k {
                lu.swap(pivot, k);
                perm.swap(pivot, k);
                sign = -sign;
            }
            let d = lu[k][k];
            if d == 0.0 {
                continue;
            }
            for i in k + 1..N {
                let f = lu[i][k] / d;
                lu[i][k] = f;
                for j in k + 1..N {
                    lu[i][j] -= f * lu[k][j];
                }
            }
        }
        Lu { lu, perm, sign }
    }

    pub fn det(&self) -> f64 {
        (0..N).fold(self.sign, |acc, i| acc * self.lu[i][i])
    }

    pub fn solve(&self, b: &[f64; N]) -> [f64; N] {
        let mut y = [0.0; N];
        for i in 0..N {
            y[i] = b[self.perm[i]] - (0..i).map(|j| self.lu[i][j] * y[j]).sum::<f64>();
        }
        let mut x = [0.0; N];
        for i in (0..N).rev() {
            let s: f64 = (i + 1..N).map(|j| self.lu[i][j] * x[j]).sum();
            x[i] = (y[i] - s) / self.lu[i][i];
        }
        x
    }
}

pub fn det<const N: usize>(a: &Mat<N>) -> f64 {
    Lu::new(a).det()
}

/// Inverse of a (symmetric) metric matrix; the result is symmetrised.
pub fn invert_metric<const N: usize>(g: &Mat<N>) -> Result<Mat<N>> {
    let lu = Lu::new(g);
    let d = lu.det();
    if !(d.abs() > DET_FLOOR) {
        return Err(Error::SingularMetric { det: d });
    }
    let mut inv = [[0.0; N]; N];
    for j in 0..N {
        let mut e = [0.0; N];
        e[j] = 1.0;
        let col = lu.solve(&e);
        for i in 0..N {
            inv[i][j] = col[i];
        }
    }
    Ok(symmetrize(&inv))
}

/// Signs of the eigenvalues of a symmetric matrix, sorted descending
/// (`+1`, `-1`, or `0` for |λ| below `zero_tol`).
pub fn eigen_signs<const N: usize>(a: &Mat<N>, zero_tol: f64) -> [i8; N] {
    let m = nalgebra::DMatrix::from_fn(N, N, |i, j| a[i][j]);
    let eig = nalgebra::SymmetricEigen::new(m);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|x, y| y.total_cmp(x));
    std::array::from_fn(|i| {
        if vals[i] > zero_tol {
            1
        } else if vals[i] < -zero_tol {
            -1
        } else {
            0
        }
    })
}
