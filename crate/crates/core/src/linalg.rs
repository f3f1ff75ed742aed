//! Small dense kernels backing the implicit solves.

use ndarray::{Array2, ArrayView2};

/// Lower-triangular Cholesky factor `L` with `A = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: Array2<f64>,
}

/// Failed pivot: row index and the non-positive value found there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NotPositiveDefinite {
    pub row: usize,
    pub pivot: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Cholesky {
    pub fn factor(a: ArrayView2<'_, f64>) -> Result<Self, NotPositiveDefinite> {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "Cholesky needs a square matrix");
        // row-major, so every inner product below runs over contiguous prefixes
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let (done, rest) = l.split_at_mut((j + 1) * n);
            let row_j = &mut done[j * n..];
            let d = a[[j, j]] - dot(&row_j[..j], &row_j[..j]);
            if !(d > 0.0) || !d.is_finite() {
                return Err(NotPositiveDefinite { row: j, pivot: d });
            }
            let d = d.sqrt();
            row_j[j] = d;
            let row_j = &done[j * n..j * n + j];
            for (r, row_i) in rest.chunks_exact_mut(n).enumerate() {
                let i = j + 1 + r;
                row_i[j] = (a[[i, j]] - dot(&row_i[..j], row_j)) / d;
            }
        }
        Ok(Self {
            l: Array2::from_shape_vec((n, n), l).expect("n*n entries"),
        })
    }

    pub fn size(&self) -> usize {
        self.l.nrows()
    }

    pub fn lower(&self) -> &Array2<f64> {
        &self.l
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.size();
        assert_eq!(b.len(), n);
        let l = self.l.as_slice().expect("standard layout");
        for i in 0..n {
            let row = &l[i * n..i * n + i];
            b[i] = (b[i] - dot(row, &b[..i])) / l[i * n + i];
        }
        // Lᵀ x = y, sweeping rows of L from the bottom
        for i in (0..n).rev() {
            b[i] /= l[i * n + i];
            let bi = b[i];
            for (bk, lik) in b[..i].iter_mut().zip(&l[i * n..i * n + i]) {
                *bk -= lik * bi;
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    /// `L⁻¹`, built row by row: `row_i = (e_i - Σ_{k<i} L_ik row_k) / L_ii`.
    pub fn lower_inverse(&self) -> Array2<f64> {
        let n = self.size();
        let mut inv = Array2::<f64>::zeros((n, n));
        let out = inv.as_slice_mut().expect("standard layout");
        for i in 0..n {
            let (prev, cur) = out.split_at_mut(i * n);
            let row = &mut cur[..n];
            row[i] = 1.0;
            for k in 0..i {
                let lik = self.l[[i, k]];
                if lik != 0.0 {
                    for (r, p) in row[..=k].iter_mut().zip(&prev[k * n..k * n + k + 1]) {
                        *r -= lik * p;
                    }
                }
            }
            let d = self.l[[i, i]];
            row[..=i].iter_mut().for_each(|r| *r /= d);
        }
        inv
    }

    /// `A⁻¹ M = L⁻ᵀ (L⁻¹ M)`.
    pub fn solve_matrix(&self, m: ArrayView2<'_, f64>) -> Array2<f64> {
        let li = self.lower_inverse();
        li.t().dot(&li.dot(&m))
    }

    pub fn inverse(&self) -> Array2<f64> {
        let li = self.lower_inverse();
        li.t().dot(&li)
    }
}
