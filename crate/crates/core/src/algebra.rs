use crate::bilinear::BilinearMap;
use crate::error::{Error, Result};
use crate::linalg::{add_scaled, FieldSpec, Matrix, Scalar, Subspace};
use crate::verify::{assoc_check, Report};

/// Finite-dimensional associative algebra given by structure constants,
/// with a designated complete set of orthogonal idempotents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: FieldSpec,
    dim: usize,
    mul: BilinearMap,
    idempotents: Vec<Vec<Scalar>>,
    identity: Option<Vec<Scalar>>,
}

impl Algebra {
    pub fn new(field: FieldSpec, dim: usize, mul: BilinearMap, idempotents: Vec<Vec<Scalar>>) -> Result<Self> {
        if mul.shape() != (dim, dim, dim) {
            return Err(Error::MalformedInput(format!(
                "multiplication tensor has shape {:?}, algebra dim is {dim}",
                mul.shape()
            )));
        }
        if mul.field() != field {
            return Err(Error::FieldMismatch { expected: field, found: mul.field() });
        }
        for e in &idempotents {
            if e.len() != dim {
                return Err(Error::MalformedInput(format!(
                    "idempotent of length {} in an algebra of dim {dim}",
                    e.len()
                )));
            }
            if let Some(x) = e.iter().find(|x| !field.contains(x)) {
                return Err(Error::FieldMismatch { expected: field, found: x.field() });
            }
        }
        Ok(Algebra { field, dim, mul, idempotents, identity: None })
    }

    /// Records an explicit identity element; `verify` checks it equals `Σ E`.
    pub fn with_identity(mut self, identity: Vec<Scalar>) -> Result<Self> {
        if identity.len() != self.dim {
            return Err(Error::MalformedInput("identity has the wrong length".into()));
        }
        self.identity = Some(identity);
        Ok(self)
    }

    pub fn zero(field: FieldSpec) -> Self {
        Algebra { field, dim: 0, mul: BilinearMap::zero(field, 0, 0, 0), idempotents: vec![], identity: Some(vec![]) }
    }

    /// The base field as a 1-dimensional algebra.
    pub fn base_field(field: FieldSpec) -> Self {
        Algebra::matrix_algebra(field, 1).expect("k = 1")
    }

    /// `M_k(f)` on matrix units `e_ab` (index `a*k + b`) with `E = {e_11, ..., e_kk}`.
    pub fn matrix_algebra(field: FieldSpec, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::MalformedInput("matrix algebra of size 0".into()));
        }
        let dim = k * k;
        let mul = BilinearMap::from_fn(field, dim, dim, dim, |x, y| {
            let (a, b) = (x / k, x % k);
            let (c, d) = (y / k, y % k);
            if b == c {
                field.unit_vector(dim, a * k + d)
            } else {
                field.zeros(dim)
            }
        });
        let idempotents: Vec<_> = (0..k).map(|a| field.unit_vector(dim, a * k + a)).collect();
        let identity = sum_vectors(field, dim, &idempotents);
        Ok(Algebra { field, dim, mul, idempotents, identity: Some(identity) })
    }

    /// Upper-triangular `k×k` matrices on the units `e_ab`, `a ≤ b`, in lex order.
    pub fn upper_triangular(field: FieldSpec, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::MalformedInput("triangular algebra of size 0".into()));
        }
        let units: Vec<(usize, usize)> = (0..k).flat_map(|a| (a..k).map(move |b| (a, b))).collect();
        let basis: Vec<Matrix> = units
            .iter()
            .map(|&(a, b)| {
                let mut m = Matrix::zero(field, k, k);
                m.set(a, b, field.one());
                m
            })
            .collect();
        let diag: Vec<Vec<Scalar>> = (0..k)
            .map(|a| field.unit_vector(units.len(), units.iter().position(|&u| u == (a, a)).unwrap()))
            .collect();
        Algebra::from_matrix_basis(field, &basis, diag)
    }

    /// The algebra spanned by a multiplicatively closed, linearly independent
    /// family of square matrices.
    pub fn from_matrix_basis(field: FieldSpec, basis: &[Matrix], idempotents: Vec<Vec<Scalar>>) -> Result<Self> {
        let dim = basis.len();
        let flat: Vec<Vec<Scalar>> = basis.iter().map(|m| m.entries().to_vec()).collect();
        let width = basis.first().map_or(0, |m| m.entries().len());
        let coords = MatrixCoordinates::new(field, width, &flat)?;
        let mut mul = BilinearMap::zero(field, dim, dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let p = basis[i].mul(&basis[j]);
                let c = coords.of(p.entries()).ok_or_else(|| {
                    Error::MalformedInput(format!("matrix basis not closed under product ({i},{j})"))
                })?;
                for (k, x) in c.into_iter().enumerate() {
                    mul.set(i, j, k, x);
                }
            }
        }
        Algebra::new(field, dim, mul, idempotents)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mul(&self) -> &BilinearMap {
        &self.mul
    }

    pub fn idempotents(&self) -> &[Vec<Scalar>] {
        &self.idempotents
    }

    pub fn identity(&self) -> Option<&Vec<Scalar>> {
        self.identity.as_ref()
    }

    /// Same field and structure constants; idempotent choices are ignored.
    pub fn same_ring(&self, other: &Algebra) -> bool {
        self.field == other.field && self.dim == other.dim && self.mul == other.mul
    }

    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.mul.eval(x, y)
    }

    /// `Σ E`, which is the identity of every verified algebra.
    pub fn unit(&self) -> Vec<Scalar> {
        sum_vectors(self.field, self.dim, &self.idempotents)
    }

    pub fn is_idempotent(&self, e: &[Scalar]) -> bool {
        e.len() == self.dim && self.multiply(e, e) == e
    }

    pub fn verify(&self) -> Report {
        let mut r = Report::new();
        let c = assoc_check(&self.mul, &self.mul, &self.mul, &self.mul);
        r.add_check("associativity", c, |i, j, k| format!("basis triple ({i},{j},{k})"));

        let s = r.section("idempotents");
        for (a, e) in self.idempotents.iter().enumerate() {
            for (b, f) in self.idempotents.iter().enumerate() {
                s.checked += 1;
                let ef = self.multiply(e, f);
                let ok = if a == b { &ef == e } else { ef.iter().all(Scalar::is_zero) };
                if !ok {
                    s.fail(|| if a == b { format!("E[{a}] not idempotent") } else { format!("E[{a}]·E[{b}] ≠ 0") });
                }
            }
        }

        let one = self.unit();
        let s = r.section("completeness");
        for j in 0..self.dim {
            let b = self.field.unit_vector(self.dim, j);
            s.checked += 1;
            if self.multiply(&one, &b) != b || self.multiply(&b, &one) != b {
                s.fail(|| format!("Σ E is not an identity on basis element {j}"));
            }
        }
        if let Some(id) = &self.identity {
            let s = r.section("identity");
            s.checked += 1;
            if id != &one {
                s.fail(|| "declared identity differs from Σ E".into());
            }
        }
        r
    }

    /// Solves `x·b_j = b_j = b_j·x` for all `j`.
    pub fn find_identity(&self) -> Option<Vec<Scalar>> {
        let d = self.dim;
        let f = self.field;
        let mut rows = Vec::with_capacity(2 * d * d);
        let mut rhs = Vec::with_capacity(2 * d * d);
        for j in 0..d {
            for k in 0..d {
                rows.push((0..d).map(|i| self.mul.get(i, j, k).clone()).collect::<Vec<_>>());
                rhs.push(if j == k { f.one() } else { f.zero() });
                rows.push((0..d).map(|i| self.mul.get(j, i, k).clone()).collect::<Vec<_>>());
                rhs.push(if j == k { f.one() } else { f.zero() });
            }
        }
        Matrix::from_rows(f, d, rows).expect("rows have width d").solve(&rhs)
    }

    pub fn is_unital(&self) -> bool {
        self.find_identity().is_some()
    }

    /// Canonical basis of the subspace `x·A·y`, as rows of an RREF.
    pub fn sandwich(&self, x: &[Scalar], y: &[Scalar]) -> Subspace {
        let vs: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|i| {
                let b = self.field.unit_vector(self.dim, i);
                self.multiply(&self.multiply(x, &b), y)
            })
            .collect();
        Subspace::spanned_by(self.field, self.dim, &vs)
    }

    /// The corner `eAe` on the canonical basis of its span, with `e` as its
    /// identity, plus the `dim(A) × dim(eAe)` embedding.
    pub fn corner_subalgebra(&self, e: &[Scalar]) -> Result<(Algebra, Matrix)> {
        if !self.is_idempotent(e) {
            return Err(Error::NotIdempotent);
        }
        let sub = self.sandwich(e, e);
        let d = sub.dim();
        let basis = sub.basis().to_vec();
        let mul = BilinearMap::from_fn(self.field, d, d, d, |i, j| {
            sub.coordinates(&self.multiply(&basis[i], &basis[j])).expect("corner is closed")
        });
        let idempotents = if d == 0 { vec![] } else { vec![sub.coordinates(e).expect("e lies in eAe")] };
        let corner = Algebra::new(self.field, d, mul, idempotents)?;
        let embedding = Matrix::from_columns(self.field, self.dim, &basis);
        Ok((corner, embedding))
    }

    /// Structure constants after the change of basis whose new basis vectors
    /// are the columns of `p` (in old coordinates).
    pub fn transport(&self, p: &Matrix) -> Result<Algebra> {
        let inv = p
            .inverse()
            .ok_or_else(|| Error::MalformedInput("basis change is not invertible".into()))?;
        let cols: Vec<Vec<Scalar>> = (0..self.dim).map(|c| p.column(c)).collect();
        let mul = BilinearMap::from_fn(self.field, self.dim, self.dim, self.dim, |i, j| {
            inv.apply(&self.multiply(&cols[i], &cols[j]))
        });
        let idempotents = self.idempotents.iter().map(|e| inv.apply(e)).collect();
        let mut a = Algebra::new(self.field, self.dim, mul, idempotents)?;
        a.identity = self.identity.as_ref().map(|id| inv.apply(id));
        Ok(a)
    }

    /// Whether the linear map `phi: self → other` (a `dim(other) × dim(self)`
    /// matrix) is a bijective multiplicative map.
    pub fn is_isomorphism(&self, other: &Algebra, phi: &Matrix) -> bool {
        if phi.rows() != other.dim || phi.cols() != self.dim || phi.rank() != self.dim || self.dim != other.dim {
            return false;
        }
        let img: Vec<Vec<Scalar>> = (0..self.dim).map(|c| phi.column(c)).collect();
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| phi.apply(self.mul.basis(i, j)) == other.multiply(&img[i], &img[j]))
        })
    }

    /// The opposite algebra.
    pub fn opposite(&self) -> Algebra {
        let mul = BilinearMap::from_fn(self.field, self.dim, self.dim, self.dim, |i, j| self.mul.basis(j, i).to_vec());
        Algebra { field: self.field, dim: self.dim, mul, idempotents: self.idempotents.clone(), identity: self.identity.clone() }
    }
}

pub fn sum_vectors(field: FieldSpec, dim: usize, vs: &[Vec<Scalar>]) -> Vec<Scalar> {
    let mut acc = field.zeros(dim);
    for v in vs {
        add_scaled(&mut acc, &field.one(), v);
    }
    acc
}

/// Coordinates with respect to a linearly independent family.
struct MatrixCoordinates {
    sub: Subspace,
    change: Matrix,
}

impl MatrixCoordinates {
    fn new(field: FieldSpec, width: usize, family: &[Vec<Scalar>]) -> Result<Self> {
        let sub = Subspace::spanned_by(field, width, family);
        if sub.dim() != family.len() {
            return Err(Error::MalformedInput("matrix basis is linearly dependent".into()));
        }
        // Columns: family members in canonical coordinates.
        let cols: Vec<Vec<Scalar>> = family.iter().map(|v| sub.coordinates(v).unwrap()).collect();
        let change = Matrix::from_columns(field, family.len(), &cols)
            .inverse()
            .expect("independent family");
        Ok(MatrixCoordinates { sub, change })
    }

    fn of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        self.sub.coordinates(v).map(|c| self.change.apply(&c))
    }
}
