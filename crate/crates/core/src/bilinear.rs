use crate::linalg::{add_scaled, FieldSpec, Matrix, Scalar};

/// A bilinear map `X × Y → Z` on chosen bases, stored as the dense 3-tensor
/// `t[i][j][k]` with `x_i × y_j ↦ Σ_k t[i][j][k] z_k`.
#[derive(Clone, PartialEq, Eq)]
pub struct BilinearMap {
    field: FieldSpec,
    left: usize,
    right: usize,
    out: usize,
    data: Vec<Scalar>,
}

impl BilinearMap {
    pub fn zero(field: FieldSpec, left: usize, right: usize, out: usize) -> Self {
        BilinearMap { field, left, right, out, data: field.zeros(left * right * out) }
    }

    /// Builds the map from its values on basis pairs.
    pub fn from_fn(
        field: FieldSpec,
        left: usize,
        right: usize,
        out: usize,
        mut f: impl FnMut(usize, usize) -> Vec<Scalar>,
    ) -> Self {
        let mut data = Vec::with_capacity(left * right * out);
        for i in 0..left {
            for j in 0..right {
                let v = f(i, j);
                assert_eq!(v.len(), out, "bilinear value length");
                data.extend(v);
            }
        }
        BilinearMap { field, left, right, out, data }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn left_dim(&self) -> usize {
        self.left
    }

    pub fn right_dim(&self) -> usize {
        self.right
    }

    pub fn out_dim(&self) -> usize {
        self.out
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.left, self.right, self.out)
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        (i * self.right + j) * self.out
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.data[self.offset(i, j) + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, x: Scalar) {
        let o = self.offset(i, j) + k;
        self.data[o] = x;
    }

    /// Value on the basis pair `(x_i, y_j)`.
    pub fn basis(&self, i: usize, j: usize) -> &[Scalar] {
        let o = self.offset(i, j);
        &self.data[o..o + self.out]
    }

    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut acc = self.field.zeros(self.out);
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                add_scaled(&mut acc, &a.mul(b), self.basis(i, j));
            }
        }
        acc
    }

    /// `β(x, y_j)` for a general left argument.
    pub fn eval_left_vec(&self, x: &[Scalar], j: usize) -> Vec<Scalar> {
        let mut acc = self.field.zeros(self.out);
        for (i, a) in x.iter().enumerate() {
            add_scaled(&mut acc, a, self.basis(i, j));
        }
        acc
    }

    /// `β(x_i, y)` for a general right argument.
    pub fn eval_right_vec(&self, i: usize, y: &[Scalar]) -> Vec<Scalar> {
        let mut acc = self.field.zeros(self.out);
        for (j, b) in y.iter().enumerate() {
            add_scaled(&mut acc, b, self.basis(i, j));
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Linear map on the ambient tensor space `X ⊗_k Y`, columns indexed by `i * right + j`.
    pub fn to_matrix(&self) -> Matrix {
        let cols: Vec<Vec<Scalar>> =
            (0..self.left * self.right).map(|c| self.basis(c / self.right, c % self.right).to_vec()).collect();
        Matrix::from_columns(self.field, self.out, &cols)
    }

    /// `(x, y) ↦ g(β(x, y))`.
    pub fn then(&self, g: &Matrix) -> BilinearMap {
        assert_eq!(g.cols(), self.out);
        BilinearMap::from_fn(self.field, self.left, self.right, g.rows(), |i, j| g.apply(self.basis(i, j)))
    }

    /// `(x, y) ↦ β(f x, g y)` for linear `f: X' → X`, `g: Y' → Y`.
    pub fn precompose(&self, f: &Matrix, g: &Matrix) -> BilinearMap {
        assert_eq!(f.rows(), self.left);
        assert_eq!(g.rows(), self.right);
        let fc: Vec<Vec<Scalar>> = (0..f.cols()).map(|c| f.column(c)).collect();
        let gc: Vec<Vec<Scalar>> = (0..g.cols()).map(|c| g.column(c)).collect();
        BilinearMap::from_fn(self.field, f.cols(), g.cols(), self.out, |i, j| self.eval(&fc[i], &gc[j]))
    }

    pub fn scale(&self, c: &Scalar) -> BilinearMap {
        let mut m = self.clone();
        for x in m.data.iter_mut() {
            *x = x.mul(c);
        }
        m
    }

    /// Image dimension, the span of all values on basis pairs.
    pub fn image_rank(&self) -> usize {
        crate::linalg::rank_of(
            self.field,
            self.out,
            &(0..self.left * self.right)
                .map(|c| self.basis(c / self.right, c % self.right).to_vec())
                .collect::<Vec<_>>(),
        )
    }

    /// Nonzero entries as `(i, j, k, value)`, in index order.
    pub fn sparse_entries(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for i in 0..self.left {
            for j in 0..self.right {
                for (k, x) in self.basis(i, j).iter().enumerate() {
                    if !x.is_zero() {
                        out.push((i, j, k, x.clone()));
                    }
                }
            }
        }
        out
    }
}

impl std::fmt::Debug for BilinearMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BilinearMap {}x{} -> {} over {} [", self.left, self.right, self.out, self.field)?;
        for (i, j, k, x) in self.sparse_entries() {
            write!(f, " ({i},{j},{k})={x}")?;
        }
        write!(f, " ]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_is_bilinear_extension() {
        let f = FieldSpec::Rationals;
        let m = BilinearMap::from_fn(f, 2, 2, 1, |i, j| vec![f.from_i64((i + 2 * j) as i64 + 1)]);
        let x = vec![f.from_i64(2), f.from_i64(-1)];
        let y = vec![f.from_i64(1), f.from_i64(3)];
        // 2*1*1 + 2*3*3 - 1*1*2 - 1*3*4
        assert_eq!(m.eval(&x, &y), vec![f.from_i64(2 + 18 - 2 - 12)]);
        assert_eq!(m.to_matrix().apply(&[f.one(), f.zero(), f.zero(), f.one()]), vec![f.from_i64(5)]);
    }

    #[test]
    fn precompose_with_identity() {
        let f = FieldSpec::prime(5).unwrap();
        let m = BilinearMap::from_fn(f, 2, 1, 2, |i, _| f.unit_vector(2, 1 - i));
        assert_eq!(m.precompose(&Matrix::identity(f, 2), &Matrix::identity(f, 1)), m);
        assert_eq!(m.image_rank(), 2);
    }
}
