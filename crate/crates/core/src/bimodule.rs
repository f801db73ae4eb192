use std::sync::Arc;

use crate::algebra::Algebra;
use crate::bilinear::BilinearMap;
use crate::error::{Error, Result};
use crate::linalg::{rank_of, FieldSpec, Matrix, Quotient, Scalar, Subspace};
use crate::verify::{assoc_check, Report};

/// An `A`-`B`-bimodule given by its two action tensors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    left: Arc<Algebra>,
    right: Arc<Algebra>,
    dim: usize,
    left_action: BilinearMap,
    right_action: BilinearMap,
}

impl Bimodule {
    pub fn new(
        left: Arc<Algebra>,
        right: Arc<Algebra>,
        dim: usize,
        left_action: BilinearMap,
        right_action: BilinearMap,
    ) -> Result<Self> {
        let f = left.field();
        if right.field() != f {
            return Err(Error::FieldMismatch { expected: f, found: right.field() });
        }
        for t in [&left_action, &right_action] {
            if t.field() != f {
                return Err(Error::FieldMismatch { expected: f, found: t.field() });
            }
        }
        if left_action.shape() != (left.dim(), dim, dim) {
            return Err(Error::MalformedInput(format!(
                "left action has shape {:?}, expected {:?}",
                left_action.shape(),
                (left.dim(), dim, dim)
            )));
        }
        if right_action.shape() != (dim, right.dim(), dim) {
            return Err(Error::MalformedInput(format!(
                "right action has shape {:?}, expected {:?}",
                right_action.shape(),
                (dim, right.dim(), dim)
            )));
        }
        Ok(Bimodule { left, right, dim, left_action, right_action })
    }

    /// `A` as an `A`-`A`-bimodule.
    pub fn regular(a: Arc<Algebra>) -> Self {
        let mul = a.mul().clone();
        Bimodule { dim: a.dim(), left: a.clone(), right: a, left_action: mul.clone(), right_action: mul }
    }

    pub fn zero(a: Arc<Algebra>, b: Arc<Algebra>) -> Result<Self> {
        let f = a.field();
        let (da, db) = (a.dim(), b.dim());
        Bimodule::new(a, b, 0, BilinearMap::zero(f, da, 0, 0), BilinearMap::zero(f, 0, db, 0))
    }

    /// Row vectors `f^{1×k}` as an `f`-`M_k(f)`-bimodule (standard basis).
    pub fn row_vectors(field: FieldSpec, k: usize) -> Result<(Self, Arc<Algebra>, Arc<Algebra>)> {
        let base = Arc::new(Algebra::base_field(field));
        let mk = Arc::new(Algebra::matrix_algebra(field, k)?);
        let left = BilinearMap::from_fn(field, 1, k, k, |_, i| field.unit_vector(k, i));
        // e_a · e_bc = δ_ab e_c
        let right = BilinearMap::from_fn(field, k, k * k, k, |a, u| {
            if u / k == a {
                field.unit_vector(k, u % k)
            } else {
                field.zeros(k)
            }
        });
        Ok((Bimodule::new(base.clone(), mk.clone(), k, left, right)?, base, mk))
    }

    /// Column vectors `f^{k×1}` as an `M_k(f)`-`f`-bimodule.
    pub fn column_vectors(field: FieldSpec, k: usize) -> Result<(Self, Arc<Algebra>, Arc<Algebra>)> {
        let base = Arc::new(Algebra::base_field(field));
        let mk = Arc::new(Algebra::matrix_algebra(field, k)?);
        // e_ab · e_c = δ_bc e_a
        let left = BilinearMap::from_fn(field, k * k, k, k, |u, c| {
            if u % k == c {
                field.unit_vector(k, u / k)
            } else {
                field.zeros(k)
            }
        });
        let right = BilinearMap::from_fn(field, k, 1, k, |c, _| field.unit_vector(k, c));
        Ok((Bimodule::new(mk.clone(), base.clone(), k, left, right)?, mk, base))
    }

    pub fn field(&self) -> FieldSpec {
        self.left.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_algebra(&self) -> &Arc<Algebra> {
        &self.left
    }

    pub fn right_algebra(&self) -> &Arc<Algebra> {
        &self.right
    }

    pub fn left_action(&self) -> &BilinearMap {
        &self.left_action
    }

    pub fn right_action(&self) -> &BilinearMap {
        &self.right_action
    }

    pub fn act_left(&self, a: &[Scalar], m: &[Scalar]) -> Vec<Scalar> {
        self.left_action.eval(a, m)
    }

    pub fn act_right(&self, m: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        self.right_action.eval(m, b)
    }

    /// Surjectivity of `A ⊗ M → M`, by rank of all `a_i · m_j`.
    pub fn is_left_unital(&self) -> bool {
        let vs: Vec<Vec<Scalar>> = (0..self.left.dim())
            .flat_map(|a| (0..self.dim).map(move |j| (a, j)))
            .map(|(a, j)| self.left_action.basis(a, j).to_vec())
            .collect();
        rank_of(self.field(), self.dim, &vs) == self.dim
    }

    /// Surjectivity of `M ⊗ B → M`.
    pub fn is_right_unital(&self) -> bool {
        let vs: Vec<Vec<Scalar>> = (0..self.dim)
            .flat_map(|j| (0..self.right.dim()).map(move |b| (j, b)))
            .map(|(j, b)| self.right_action.basis(j, b).to_vec())
            .collect();
        rank_of(self.field(), self.dim, &vs) == self.dim
    }

    pub fn is_unital(&self) -> bool {
        self.is_left_unital() && self.is_right_unital()
    }

    pub fn verify(&self) -> Report {
        let mut r = Report::new();
        let (l, rt) = (&self.left_action, &self.right_action);
        r.add_check("left associativity", assoc_check(self.left.mul(), l, l, l), |a, b, m| {
            format!("(a{a}, a{b}, m{m})")
        });
        r.add_check("right associativity", assoc_check(rt, rt, self.right.mul(), rt), |m, a, b| {
            format!("(m{m}, b{a}, b{b})")
        });
        r.add_check("commuting actions", assoc_check(l, rt, rt, l), |a, m, b| format!("(a{a}, m{m}, b{b})"));
        r.flag("left unital", self.is_left_unital());
        r.flag("right unital", self.is_right_unital());
        r
    }

    /// The sub-bimodule generated by `generators`, on its canonical basis.
    pub fn generated_subspace(&self, generators: &[Vec<Scalar>]) -> Subspace {
        let f = self.field();
        let mut vs: Vec<Vec<Scalar>> = Vec::new();
        let la: Vec<Vec<Scalar>> = (0..self.left.dim()).map(|a| f.unit_vector(self.left.dim(), a)).collect();
        let rb: Vec<Vec<Scalar>> = (0..self.right.dim()).map(|b| f.unit_vector(self.right.dim(), b)).collect();
        for g in generators {
            vs.push(g.clone());
            let lefts: Vec<Vec<Scalar>> = la.iter().map(|a| self.act_left(a, g)).collect();
            for x in lefts.iter().chain(std::iter::once(g)) {
                vs.push(x.clone());
                for b in &rb {
                    vs.push(self.act_right(x, b));
                }
            }
        }
        Subspace::spanned_by(f, self.dim, &vs)
    }

    /// Quotient by the sub-bimodule generated by `generators`; the basis is
    /// the canonical quotient basis and the second value projects onto it.
    pub fn quotient_by(&self, generators: &[Vec<Scalar>]) -> Result<(Bimodule, Quotient)> {
        let sub = self.generated_subspace(generators);
        let q = Quotient::new(sub.rref.clone());
        let f = self.field();
        let d = q.dim();
        let left = BilinearMap::from_fn(f, self.left.dim(), d, d, |a, i| {
            q.project(self.left_action.basis(a, q.reps[i]))
        });
        let right = BilinearMap::from_fn(f, d, self.right.dim(), d, |i, b| {
            q.project(self.right_action.basis(q.reps[i], b))
        });
        Ok((Bimodule::new(self.left.clone(), self.right.clone(), d, left, right)?, q))
    }

    /// Restriction of scalars along algebra maps `sigma: A' → A` and
    /// `tau: B' → B`, given as `dim(A) × dim(A')` and `dim(B) × dim(B')` matrices.
    pub fn restrict(&self, new_left: Arc<Algebra>, sigma: &Matrix, new_right: Arc<Algebra>, tau: &Matrix) -> Result<Bimodule> {
        let left = self.left_action.precompose(sigma, &Matrix::identity(self.field(), self.dim));
        let right = self.right_action.precompose(&Matrix::identity(self.field(), self.dim), tau);
        Bimodule::new(new_left, new_right, self.dim, left, right)
    }

    /// Whether `f: self → other` (a `dim(other) × dim(self)` matrix) commutes with both actions.
    pub fn is_homomorphism_to(&self, other: &Bimodule, f: &Matrix) -> bool {
        if f.rows() != other.dim || f.cols() != self.dim {
            return false;
        }
        let fd = self.field();
        (0..self.dim).all(|m| {
            let fm = f.column(m);
            (0..self.left.dim()).all(|a| {
                f.apply(self.left_action.basis(a, m)) == other.act_left(&fd.unit_vector(self.left.dim(), a), &fm)
            }) && (0..self.right.dim()).all(|b| {
                f.apply(self.right_action.basis(m, b)) == other.act_right(&fm, &fd.unit_vector(self.right.dim(), b))
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    #[test]
    fn regular_m2_passes_and_is_unital() {
        let a = Arc::new(Algebra::matrix_algebra(f5(), 2).unwrap());
        let m = Bimodule::regular(a);
        let r = m.verify();
        assert!(r.passes());
        assert_eq!(m.dim(), 4);
        assert!(r.flags["left unital"] && r.flags["right unital"]);
    }

    #[test]
    fn zero_bimodule_passes() {
        let a = Arc::new(Algebra::base_field(f5()));
        let z = Bimodule::zero(a.clone(), a).unwrap();
        assert_eq!(z.dim(), 0);
        assert!(z.verify().passes());
        assert!(z.is_unital());
    }

    #[test]
    fn regular_of_base_and_zero_algebra() {
        assert_eq!(Bimodule::regular(Arc::new(Algebra::base_field(f5()))).dim(), 1);
        assert_eq!(Bimodule::regular(Arc::new(Algebra::zero(f5()))).dim(), 0);
    }

    #[test]
    fn rows_and_columns_pass() {
        let (rows, _, _) = Bimodule::row_vectors(f5(), 2).unwrap();
        let r = rows.verify();
        assert!(r.passes());
        assert!(rows.is_unital());
        let (cols, _, _) = Bimodule::column_vectors(f5(), 2).unwrap();
        assert!(cols.verify().passes());
        assert!(cols.is_unital());
    }

    #[test]
    fn mismatched_fields_rejected() {
        let a = Arc::new(Algebra::base_field(f5()));
        let b = Arc::new(Algebra::base_field(FieldSpec::Rationals));
        assert!(matches!(Bimodule::zero(a, b), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn broken_action_detected() {
        let f = f5();
        let a = Arc::new(Algebra::matrix_algebra(f, 2).unwrap());
        let reg = Bimodule::regular(a.clone());
        let left = reg.left_action().scale(&f.from_i64(2));
        let bad = Bimodule::new(a.clone(), a, 4, left, reg.right_action().clone()).unwrap();
        assert!(!bad.verify().passes());
    }

    #[test]
    fn quotient_of_regular_by_ideal() {
        let f = f5();
        let t = Arc::new(Algebra::upper_triangular(f, 2).unwrap());
        let reg = Bimodule::regular(t);
        // the ideal spanned by e12
        let (q, proj) = reg.quotient_by(&[f.unit_vector(3, 1)]).unwrap();
        assert_eq!(q.dim(), 2);
        assert!(q.verify().passes());
        assert_eq!(proj.reps, vec![0, 2]);
    }
}
