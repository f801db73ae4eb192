use std::sync::Arc;

use crate::algebra::{sum_vectors, Algebra};
use crate::bilinear::BilinearMap;
use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar, Subspace};

use super::GeneralisedContext;

/// A Peirce decomposition together with the block embeddings into the algebra.
#[derive(Clone, Debug)]
pub struct Peirce {
    pub context: GeneralisedContext,
    /// `embeddings[i*n + j]` maps `M_ij` coordinates into the algebra.
    pub embeddings: Vec<Matrix>,
}

impl Peirce {
    /// The block-basis bijection: block-concatenated coordinates (row-major)
    /// to algebra coordinates.
    pub fn bijection(&self) -> Matrix {
        let f = self.context.field().expect("nonempty context");
        let dim = self.embeddings.first().map_or(0, Matrix::rows);
        let cols: Vec<Vec<Scalar>> =
            self.embeddings.iter().flat_map(|e| (0..e.cols()).map(move |c| e.column(c))).collect();
        Matrix::from_columns(f, dim, &cols)
    }
}

/// Two-block decomposition with `A_1 = (1−e)a(1−e)` and `A_2 = eae`.
pub fn peirce(a: &Algebra, e: &[Scalar]) -> Result<Peirce> {
    if !a.is_idempotent(e) {
        return Err(Error::NotIdempotent);
    }
    let one = a.find_identity().ok_or(Error::NoIdentity)?;
    let comp: Vec<Scalar> = one.iter().zip(e).map(|(x, y)| x.sub(y)).collect();
    peirce_grouped(a, &[vec![comp], vec![e.to_vec()]])
}

/// Decomposition along groups of orthogonal idempotents whose total sum is
/// the identity; block `i` uses `f_i = Σ group_i`, and `A_i` gets the members
/// of group `i` as its designated idempotents.
pub fn peirce_grouped(a: &Algebra, groups: &[Vec<Vec<Scalar>>]) -> Result<Peirce> {
    let f = a.field();
    let d = a.dim();
    let one = a.find_identity().ok_or(Error::NoIdentity)?;
    let members: Vec<&Vec<Scalar>> = groups.iter().flatten().collect();
    for (x, e) in members.iter().enumerate() {
        if e.len() != d {
            return Err(Error::MalformedInput("idempotent of the wrong length".into()));
        }
        if !a.is_idempotent(e) {
            return Err(Error::NotIdempotent);
        }
        for (y, g) in members.iter().enumerate() {
            if x != y && !a.multiply(e, g).iter().all(Scalar::is_zero) {
                return Err(Error::MalformedInput("idempotents are not orthogonal".into()));
            }
        }
    }
    let total: Vec<Vec<Scalar>> = members.iter().map(|v| (*v).clone()).collect();
    if sum_vectors(f, d, &total) != one {
        return Err(Error::MalformedInput("idempotents do not sum to the identity".into()));
    }
    let n = groups.len();
    let fs: Vec<Vec<Scalar>> = groups.iter().map(|g| sum_vectors(f, d, g)).collect();
    let subs: Vec<Subspace> = (0..n * n).map(|b| a.sandwich(&fs[b / n], &fs[b % n])).collect();
    let coord = |i: usize, j: usize, v: &[Scalar]| subs[i * n + j].coordinates(v).expect("Peirce block is closed");
    let basis = |i: usize, j: usize| subs[i * n + j].basis();

    let product = |i: usize, k: usize, j: usize| {
        let (bx, by) = (basis(i, k), basis(k, j));
        BilinearMap::from_fn(f, bx.len(), by.len(), subs[i * n + j].dim(), |x, y| {
            coord(i, j, &a.multiply(&bx[x], &by[y]))
        })
    };

    let algebras: Vec<Arc<Algebra>> = (0..n)
        .map(|i| {
            let di = subs[i * n + i].dim();
            let idem: Vec<Vec<Scalar>> = groups[i]
                .iter()
                .filter(|e| !e.iter().all(Scalar::is_zero))
                .map(|e| coord(i, i, e))
                .collect();
            Algebra::new(f, di, product(i, i, i), idem).map(Arc::new)
        })
        .collect::<Result<_>>()?;
    let mut blocks = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            blocks.push(Bimodule::new(
                algebras[i].clone(),
                algebras[j].clone(),
                subs[i * n + j].dim(),
                product(i, i, j),
                product(i, j, j),
            )?);
        }
    }
    let mut maps = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                maps.push(product(i, k, j));
            }
        }
    }
    let context = GeneralisedContext::from_grids(algebras, blocks, maps)?;
    let embeddings = subs.iter().map(|s| Matrix::from_columns(f, d, s.basis())).collect();
    Ok(Peirce { context, embeddings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{ClassicalContext, MatrixRing};
    use crate::linalg::FieldSpec;

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    #[test]
    fn m2_at_e11() {
        let f = f5();
        let a = Algebra::matrix_algebra(f, 2).unwrap();
        let p = peirce(&a, &f.unit_vector(4, 0)).unwrap();
        assert_eq!(p.context.dims(), vec![vec![1, 1], vec![1, 1]]);
        assert!(p.context.verify().passes());
        let ring = MatrixRing::new(&p.context).unwrap();
        assert_eq!(ring.dim(), 4);
        let c = ClassicalContext::from_generalised(&p.context).unwrap();
        assert_eq!(c.zeta().image_rank(), 1);
        assert_eq!(c.theta().image_rank(), 1);
    }

    #[test]
    fn identity_gives_zero_first_block() {
        let f = f5();
        let a = Algebra::matrix_algebra(f, 2).unwrap();
        let p = peirce(&a, &a.unit()).unwrap();
        assert_eq!(p.context.dims(), vec![vec![0, 0], vec![0, 4]]);
        assert!(p.context.verify().passes());
    }

    #[test]
    fn upper_triangular_at_e22() {
        let f = f5();
        let t = Algebra::upper_triangular(f, 2).unwrap();
        let p = peirce(&t, &f.unit_vector(3, 2)).unwrap();
        assert_eq!(p.context.dims(), vec![vec![1, 1], vec![0, 1]]);
        assert!(p.context.verify().passes());
    }

    #[test]
    fn reassembly_is_byte_identical() {
        let f = f5();
        let t = Algebra::upper_triangular(f, 2).unwrap();
        let p = peirce(&t, &f.unit_vector(3, 2)).unwrap();
        let ring = MatrixRing::new(&p.context).unwrap();
        let bij = p.bijection();
        assert!(ring.ring().is_isomorphism(&t, &bij));
        assert_eq!(t.transport(&bij).unwrap().mul(), ring.ring().mul());
    }

    #[test]
    fn errors() {
        let f = f5();
        let a = Algebra::matrix_algebra(f, 2).unwrap();
        assert!(matches!(peirce(&a, &f.unit_vector(4, 1)), Err(Error::NotIdempotent)));
        let z = Algebra::new(f, 1, BilinearMap::zero(f, 1, 1, 1), vec![]).unwrap();
        assert!(matches!(peirce(&z, &[f.zero()]), Err(Error::NoIdentity)));
    }
}
