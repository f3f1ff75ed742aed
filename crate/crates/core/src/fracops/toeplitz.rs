use super::GrunwaldWeights;
use crate::error::{invalid, Error, Result};
use ndarray::{Array2, ArrayView2};

/// Square Toeplitz matrix stored by its first column and first row.
///
/// `T[i][j] = first_column[i - j]` for `i >= j` and `first_row[j - i]`
/// otherwise; `first_column[0] == first_row[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzOperator {
    first_column: Vec<f64>,
    first_row: Vec<f64>,
    symmetrized: bool,
}

impl ToeplitzOperator {
    pub fn new(first_column: Vec<f64>, first_row: Vec<f64>) -> Result<Self> {
        if first_column.len() != first_row.len() {
            return Err(Error::DimensionMismatch {
                expected: first_column.len(),
                actual: first_row.len(),
            });
        }
        if first_column.is_empty() {
            return Err(invalid("size", "Toeplitz operator must be non-empty"));
        }
        if first_column[0] != first_row[0] {
            return Err(invalid("first_row", "diagonal entries of column and row differ"));
        }
        let symmetrized = first_column == first_row;
        Ok(Self {
            first_column,
            first_row,
            symmetrized,
        })
    }

    /// Symmetric Toeplitz matrix from its first column.
    pub fn symmetric(first_column: Vec<f64>) -> Result<Self> {
        let row = first_column.clone();
        Self::new(first_column, row)
    }

    pub fn size(&self) -> usize {
        self.first_column.len()
    }

    pub fn first_column(&self) -> &[f64] {
        &self.first_column
    }

    pub fn first_row(&self) -> &[f64] {
        &self.first_row
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetrized
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i >= j {
            self.first_column[i - j]
        } else {
            self.first_row[j - i]
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            first_column: self.first_column.iter().map(|v| v * factor).collect(),
            first_row: self.first_row.iter().map(|v| v * factor).collect(),
            symmetrized: self.symmetrized,
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            first_column: self.first_row.clone(),
            first_row: self.first_column.clone(),
            symmetrized: self.symmetrized,
        }
    }

    pub fn dense(&self) -> Array2<f64> {
        let n = self.size();
        Array2::from_shape_fn((n, n), |(i, j)| self.get(i, j))
    }

    /// Matrix-vector product in O(n²) without materializing the matrix.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.size();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: x.len(),
            });
        }
        Ok((0..n)
            .map(|i| {
                let lower: f64 = (0..=i).map(|j| self.first_column[i - j] * x[j]).sum();
                let upper: f64 = (i + 1..n).map(|j| self.first_row[j - i] * x[j]).sum();
                lower + upper
            })
            .collect())
    }

    /// `T · X`, acting on every column of `X` (the operator runs along rows).
    pub fn apply_left(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        let n = self.size();
        if x.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: x.nrows(),
            });
        }
        let mut out = Array2::zeros(x.raw_dim());
        for i in 0..n {
            let mut row = out.row_mut(i);
            for j in 0..n {
                let t = self.get(i, j);
                if t != 0.0 {
                    row.scaled_add(t, &x.row(j));
                }
            }
        }
        Ok(out)
    }

    /// `X · Tᵀ`, acting along every row of `X`.
    pub fn apply_right_transposed(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        let out = self.apply_left(x.t())?.reversed_axes();
        Ok(out.as_standard_layout().into_owned())
    }
}

/// Assemble `A` (lower Hessenberg, `A[i][j] = ω_{i-j+1}`) or `B = A + Aᵀ`
/// on `n` interior points in compressed form.
pub fn assemble_operator(
    weights: &GrunwaldWeights,
    n: usize,
    symmetrize: bool,
) -> Result<ToeplitzOperator> {
    if n < 2 {
        return Err(invalid("n", format!("operator size must be >= 2, got {n}")));
    }
    let omega = weights.omega();
    if omega.len() < n + 1 {
        return Err(Error::WeightsTooShort {
            required: n + 1,
            available: omega.len(),
        });
    }
    let column: Vec<f64> = (0..n).map(|k| omega[k + 1]).collect();
    let mut row = vec![0.0; n];
    row[0] = omega[1];
    row[1] = omega[0];
    if !symmetrize {
        return ToeplitzOperator::new(column, row);
    }
    let sym: Vec<f64> = column.iter().zip(&row).map(|(c, r)| c + r).collect();
    ToeplitzOperator::symmetric(sym)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracops::{grunwald_weights, FractionalOrder};
    use nalgebra::{DMatrix, SymmetricEigen};

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    fn max_eigenvalue(op: &ToeplitzOperator) -> f64 {
        let n = op.size();
        let m = DMatrix::from_fn(n, n, |i, j| op.get(i, j));
        SymmetricEigen::new(m).eigenvalues.max()
    }

    #[test]
    fn alpha_two_symmetrized_dense() {
        let w = grunwald_weights(order(2.0), 3).unwrap();
        let b = assemble_operator(&w, 3, true).unwrap();
        let expected = ndarray::arr2(&[[-4.0, 2.0, 0.0], [2.0, -4.0, 2.0], [0.0, 2.0, -4.0]]);
        assert_eq!(b.dense(), expected);
    }

    #[test]
    fn lower_hessenberg_layout() {
        let w = grunwald_weights(order(1.5), 4).unwrap();
        let a = assemble_operator(&w, 4, false).unwrap();
        let o = w.omega();
        assert_eq!(a.first_column(), &[o[1], o[2], o[3], o[4]]);
        assert_eq!(a.first_row(), &[o[1], o[0], 0.0, 0.0]);
        for i in 0..4 {
            for j in 0..4 {
                let k = i as isize - j as isize + 1;
                let expect = if k >= 0 { o[k as usize] } else { 0.0 };
                assert_eq!(a.get(i, j), expect);
            }
        }
    }

    #[test]
    fn symmetrized_is_exactly_symmetric() {
        let w = grunwald_weights(order(1.37), 20).unwrap();
        let b = assemble_operator(&w, 20, true).unwrap();
        let d = b.dense();
        assert_eq!(d, d.t());
        assert!(b.is_symmetric());
    }

    #[test]
    fn short_weights_rejected() {
        let w = grunwald_weights(order(1.5), 4).unwrap();
        assert!(matches!(
            assemble_operator(&w, 8, true),
            Err(Error::WeightsTooShort { required: 9, available: 5 })
        ));
    }

    #[test]
    fn negative_definite() {
        for &a in &[1.1, 1.5, 1.9, 2.0] {
            for &n in &[4usize, 8, 16, 32] {
                let w = grunwald_weights(order(a), n).unwrap();
                let b = assemble_operator(&w, n, true).unwrap();
                let lmax = max_eigenvalue(&b);
                assert!(lmax < 0.0, "alpha={a} n={n} lmax={lmax}");
            }
        }
    }

    #[test]
    fn compressed_products_match_dense() {
        let w = grunwald_weights(order(1.3), 6).unwrap();
        let a = assemble_operator(&w, 6, false).unwrap();
        let x = ndarray::Array2::from_shape_fn((6, 4), |(i, j)| (i * 4 + j) as f64 * 0.1 - 1.0);
        let dense = a.dense();
        let left = a.apply_left(x.view()).unwrap();
        assert!((&left - &dense.dot(&x)).iter().all(|v| v.abs() < 1e-14));
        let xt = x.t().to_owned();
        let right = a.apply_right_transposed(xt.view()).unwrap();
        assert!((&right - &xt.dot(&dense.t())).iter().all(|v| v.abs() < 1e-14));
        let col = x.column(1).to_vec();
        let mv = a.apply(&col).unwrap();
        for i in 0..6 {
            assert!((mv[i] - left[[i, 1]]).abs() < 1e-14);
        }
    }
}
