use super::matrix::{add_scaled, Matrix};
use super::scalar::{FieldSpec, Scalar};

/// Reduced row echelon form: nonzero rows only, leading 1s at `pivots`
/// (strictly increasing), every pivot column zero outside its own row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub field: FieldSpec,
    pub width: usize,
    pub rows: Vec<Vec<Scalar>>,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.width];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.width).filter(|&c| !is_pivot[c]).collect()
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(self.field, self.width, self.rows.clone()).expect("rref rows have width")
    }

    /// Reduces `v` modulo the row space.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = v[p].neg();
                add_scaled(&mut v, &c, row);
            }
        }
        v
    }
}

/// Gauss-Jordan elimination, pivots chosen on the first nonzero row in each column.
pub fn rref_rows(field: FieldSpec, width: usize, mut rows: Vec<Vec<Scalar>>) -> Rref {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][c].inv();
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = x.mul(&inv);
                }
            }
        }
        let pivot_row = std::mem::take(&mut rows[r]);
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].neg();
                add_scaled(row, &f, &pivot_row);
            }
        }
        rows[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Rref { field, width, rows, pivots }
}

/// Incremental row space. Rows are kept normalized with a 1 at their pivot
/// and zero at every other pivot, so one pass reduces a new vector.
/// Pivots depend on insertion order; call [`Echelon::finish`] for the canonical form.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: FieldSpec,
    width: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    row_of_pivot: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(field: FieldSpec, width: usize) -> Self {
        Echelon { field, width, rows: Vec::new(), pivots: Vec::new(), row_of_pivot: vec![None; width] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    pub fn reduce_in_place(&self, v: &mut [Scalar]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = v[p].neg();
                add_scaled(v, &c, row);
            }
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w.iter().all(Scalar::is_zero)
    }

    /// Adds `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        debug_assert_eq!(v.len(), self.width);
        if self.is_full() {
            return false;
        }
        self.reduce_in_place(&mut v);
        let Some(c) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[c].inv();
        if !inv.is_one() {
            for x in v.iter_mut() {
                if !x.is_zero() {
                    *x = x.mul(&inv);
                }
            }
        }
        for row in self.rows.iter_mut() {
            if !row[c].is_zero() {
                let f = row[c].neg();
                add_scaled(row, &f, &v);
            }
        }
        self.row_of_pivot[c] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(c);
        true
    }

    pub fn finish(self) -> Rref {
        rref_rows(self.field, self.width, self.rows)
    }
}

/// Canonical quotient of `F^width` by a row space: the basis of the quotient
/// is the set of non-pivot coordinates.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub rref: Rref,
    /// Non-pivot columns; quotient basis element `d` is the class of `e_{reps[d]}`.
    pub reps: Vec<usize>,
    index_of_rep: Vec<Option<usize>>,
}

impl Quotient {
    pub fn new(rref: Rref) -> Self {
        let reps = rref.non_pivots();
        let mut index_of_rep = vec![None; rref.width];
        for (d, &c) in reps.iter().enumerate() {
            index_of_rep[c] = Some(d);
        }
        Quotient { rref, reps, index_of_rep }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn ambient(&self) -> usize {
        self.rref.width
    }

    pub fn field(&self) -> FieldSpec {
        self.rref.field
    }

    /// Coordinates of the class of `e_c` in the quotient basis.
    pub fn project_basis(&self, c: usize) -> Vec<Scalar> {
        let f = self.field();
        let mut out = f.zeros(self.dim());
        if let Some(d) = self.index_of_rep[c] {
            out[d] = f.one();
            return out;
        }
        let r = self.rref.pivots.iter().position(|&p| p == c).expect("pivot column");
        let row = &self.rref.rows[r];
        for (d, &rep) in self.reps.iter().enumerate() {
            if !row[rep].is_zero() {
                out[d] = row[rep].neg();
            }
        }
        out
    }

    /// Coordinates of the class of an ambient vector.
    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        let r = self.rref.reduce(v);
        self.reps.iter().map(|&c| r[c].clone()).collect()
    }

    /// Projection matrix, `dim x ambient`.
    pub fn projection(&self) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.ambient()).map(|c| self.project_basis(c)).collect();
        Matrix::from_columns(self.field(), self.dim(), &cols)
    }

    /// Section matrix, `ambient x dim`, sending basis element `d` to `e_{reps[d]}`.
    pub fn section(&self) -> Matrix {
        let f = self.field();
        let cols: Vec<Vec<Scalar>> =
            self.reps.iter().map(|&c| f.unit_vector(self.ambient(), c)).collect();
        Matrix::from_columns(f, self.ambient(), &cols)
    }
}

/// Quotient of `F^cols` by the row space of `relations`.
pub fn quotient_basis(relations: &Matrix) -> Quotient {
    Quotient::new(relations.rref())
}

/// A subspace given by its canonical basis (rows of an RREF), with coordinates
/// read off from pivot entries.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub rref: Rref,
}

impl Subspace {
    pub fn spanned_by(field: FieldSpec, width: usize, vectors: &[Vec<Scalar>]) -> Self {
        let mut e = Echelon::new(field, width);
        for v in vectors {
            e.insert(v.clone());
        }
        Subspace { rref: e.finish() }
    }

    pub fn dim(&self) -> usize {
        self.rref.rank()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rref.rows
    }

    /// Coordinates of `v` in the canonical basis, `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let coords: Vec<Scalar> = self.rref.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rebuilt = self.rref.field.zeros(self.rref.width);
        for (c, row) in coords.iter().zip(&self.rref.rows) {
            add_scaled(&mut rebuilt, c, row);
        }
        if rebuilt.as_slice() == v {
            Some(coords)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    #[test]
    fn quotient_of_single_relation() {
        let f = f5();
        let rel = Matrix::from_i64(f, 1, 3, &[0, 1, 2]);
        let q = quotient_basis(&rel);
        assert_eq!(q.dim(), 2);
        assert_eq!(q.reps, vec![0, 2]);
        let p = q.projection();
        let s = q.section();
        assert_eq!(p.mul(&s), Matrix::identity(f, 2));
        assert!(p.apply(rel.row(0)).iter().all(Scalar::is_zero));
        assert_eq!(q.project(&f.unit_vector(3, 1)), vec![f.zero(), f.from_i64(-2)]);
    }

    #[test]
    fn incremental_matches_batch() {
        let f = FieldSpec::Rationals;
        let vs = vec![
            vec![f.from_i64(0), f.from_i64(2), f.from_i64(1)],
            vec![f.from_i64(1), f.from_i64(1), f.from_i64(0)],
            vec![f.from_i64(1), f.from_i64(3), f.from_i64(1)],
        ];
        let mut e = Echelon::new(f, 3);
        for v in &vs {
            e.insert(v.clone());
        }
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&vs[2]));
        assert_eq!(e.finish(), rref_rows(f, 3, vs));
    }

    #[test]
    fn subspace_coordinates() {
        let f = f5();
        let s = Subspace::spanned_by(f, 3, &[vec![f.one(), f.one(), f.zero()]]);
        let v = vec![f.from_i64(3), f.from_i64(3), f.zero()];
        assert_eq!(s.coordinates(&v), Some(vec![f.from_i64(3)]));
        assert_eq!(s.coordinates(&f.unit_vector(3, 0)), None);
    }
}
