use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::bilinear::BilinearMap;
use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::linalg::{add_scaled, Echelon, FieldSpec, Matrix, Quotient, Rref, Scalar};
use crate::verify::assoc_check;

/// `M ⊗_A N` as an explicit quotient of `M ⊗_k N` by the balancing relations
/// `(m_i·a_b)⊗n_j − m_i⊗(a_b·n_j)`, carrying the induced `C`-`D`-structure.
///
/// Ambient basis vector `m_i ⊗ n_j` has index `i * dim(N) + j`. Quotient
/// basis elements are classes of pure tensors, so the section is trivial.
#[derive(Clone, Debug)]
pub struct TensorSpace {
    left: Bimodule,
    right: Bimodule,
    quotient: Quotient,
    proj_cols: Vec<Vec<Scalar>>,
    module: Bimodule,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

type Sparse = Vec<(usize, Scalar)>;

/// Sparse balancing relations from basis triples, zero relations dropped.
fn relations(m: &Bimodule, n: &Bimodule) -> Vec<Sparse> {
    let (dm, dn, da) = (m.dim(), n.dim(), m.right_algebra().dim());
    let mut out = Vec::new();
    for i in 0..dm {
        for b in 0..da {
            let mi_a = m.right_action().basis(i, b);
            for j in 0..dn {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (k, x) in mi_a.iter().enumerate() {
                    if !x.is_zero() {
                        acc.insert(k * dn + j, x.clone());
                    }
                }
                for (k, x) in n.left_action().basis(b, j).iter().enumerate() {
                    if !x.is_zero() {
                        let u = i * dn + k;
                        let v = match acc.remove(&u) {
                            Some(y) => y.sub(x),
                            None => x.neg(),
                        };
                        if !v.is_zero() {
                            acc.insert(u, v);
                        }
                    }
                }
                if !acc.is_empty() {
                    out.push(acc.into_iter().collect());
                }
            }
        }
    }
    out
}

/// Canonical RREF of the span of sparse relations, computed independently on
/// each connected block of coordinates and merged by pivot.
fn sparse_rref(field: FieldSpec, width: usize, rels: &[Sparse]) -> Rref {
    let mut dsu = Dsu((0..width).collect());
    for r in rels {
        for w in r.windows(2) {
            dsu.union(w[0].0, w[1].0);
        }
    }
    let mut groups: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for c in 0..width {
        let root = dsu.find(c);
        groups.entry(root).or_default().0.push(c);
    }
    for (idx, r) in rels.iter().enumerate() {
        let root = dsu.find(r[0].0);
        groups.get_mut(&root).expect("root").1.push(idx);
    }
    let blocks: Vec<(Vec<usize>, Vec<usize>)> =
        groups.into_values().filter(|(_, rs)| !rs.is_empty()).collect();
    let mut rows: Vec<(usize, Vec<Scalar>)> = blocks
        .par_iter()
        .flat_map_iter(|(coords, rs)| {
            let local: BTreeMap<usize, usize> = coords.iter().enumerate().map(|(l, &g)| (g, l)).collect();
            let mut e = Echelon::new(field, coords.len());
            for &ri in rs {
                if e.is_full() {
                    break;
                }
                let mut v = field.zeros(coords.len());
                for (g, x) in &rels[ri] {
                    v[local[g]] = x.clone();
                }
                e.insert(v);
            }
            let r = e.finish();
            r.rows
                .into_iter()
                .zip(r.pivots)
                .map(|(row, p)| {
                    let mut full = field.zeros(width);
                    for (l, x) in row.into_iter().enumerate() {
                        full[coords[l]] = x;
                    }
                    (coords[p], full)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    rows.sort_by_key(|(p, _)| *p);
    let pivots = rows.iter().map(|(p, _)| *p).collect();
    Rref { field, width, rows: rows.into_iter().map(|(_, r)| r).collect(), pivots }
}

impl TensorSpace {
    /// `M ⊗_A N` for a `C`-`A`-bimodule `M` and an `A`-`D`-bimodule `N`.
    pub fn new(m: &Bimodule, n: &Bimodule) -> Result<Self> {
        let (a, a2) = (m.right_algebra(), n.left_algebra());
        if !(std::sync::Arc::ptr_eq(a, a2) || a.same_ring(a2)) {
            return Err(Error::AlgebraMismatch(format!(
                "right algebra of the left factor (dim {}) differs from left algebra of the right factor (dim {})",
                a.dim(),
                a2.dim()
            )));
        }
        if m.field() != n.field() {
            return Err(Error::FieldMismatch { expected: m.field(), found: n.field() });
        }
        let f = m.field();
        let (dm, dn) = (m.dim(), n.dim());
        let width = dm * dn;
        let rref = sparse_rref(f, width, &relations(m, n));
        let quotient = Quotient::new(rref);
        let proj_cols: Vec<Vec<Scalar>> = (0..width).map(|u| quotient.project_basis(u)).collect();
        let d = quotient.dim();
        let reps = quotient.reps.clone();
        let pc = &proj_cols;
        let left = BilinearMap::from_fn(f, m.left_algebra().dim(), d, d, |c, q| {
            let (i, j) = (reps[q] / dn, reps[q] % dn);
            let mut acc = f.zeros(d);
            for (k, x) in m.left_action().basis(c, i).iter().enumerate() {
                add_scaled(&mut acc, x, &pc[k * dn + j]);
            }
            acc
        });
        let right = BilinearMap::from_fn(f, d, n.right_algebra().dim(), d, |q, e| {
            let (i, j) = (reps[q] / dn, reps[q] % dn);
            let mut acc = f.zeros(d);
            for (k, x) in n.right_action().basis(j, e).iter().enumerate() {
                add_scaled(&mut acc, x, &pc[i * dn + k]);
            }
            acc
        });
        let module = Bimodule::new(m.left_algebra().clone(), n.right_algebra().clone(), d, left, right)?;
        Ok(TensorSpace { left: m.clone(), right: n.clone(), quotient, proj_cols, module })
    }

    pub fn field(&self) -> FieldSpec {
        self.module.field()
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.left.dim() * self.right.dim()
    }

    pub fn relation_rank(&self) -> usize {
        self.quotient.rref.rank()
    }

    pub fn module(&self) -> &Bimodule {
        &self.module
    }

    pub fn left_factor(&self) -> &Bimodule {
        &self.left
    }

    pub fn right_factor(&self) -> &Bimodule {
        &self.right
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    /// The pure tensor `m_i ⊗ n_j` whose class is quotient basis element `d`.
    pub fn rep(&self, d: usize) -> (usize, usize) {
        let u = self.quotient.reps[d];
        (u / self.right.dim(), u % self.right.dim())
    }

    /// Class of `m_i ⊗ n_j`.
    pub fn class_of(&self, i: usize, j: usize) -> &[Scalar] {
        &self.proj_cols[i * self.right.dim() + j]
    }

    /// Class of `x ⊗ y`.
    pub fn project_pure(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let f = self.field();
        let mut acc = f.zeros(self.dim());
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if !b.is_zero() {
                    add_scaled(&mut acc, &a.mul(b), self.class_of(i, j));
                }
            }
        }
        acc
    }

    /// Class of `m_i ⊗ y`.
    pub fn project_left_basis(&self, i: usize, y: &[Scalar]) -> Vec<Scalar> {
        let mut acc = self.field().zeros(self.dim());
        for (j, b) in y.iter().enumerate() {
            add_scaled(&mut acc, b, self.class_of(i, j));
        }
        acc
    }

    /// Class of `x ⊗ n_j`.
    pub fn project_right_basis(&self, x: &[Scalar], j: usize) -> Vec<Scalar> {
        let mut acc = self.field().zeros(self.dim());
        for (i, a) in x.iter().enumerate() {
            add_scaled(&mut acc, a, self.class_of(i, j));
        }
        acc
    }

    /// Class of an ambient vector.
    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut acc = self.field().zeros(self.dim());
        for (u, x) in v.iter().enumerate() {
            add_scaled(&mut acc, x, &self.proj_cols[u]);
        }
        acc
    }

    pub fn projection(&self) -> Matrix {
        Matrix::from_columns(self.field(), self.dim(), &self.proj_cols)
    }

    pub fn section(&self) -> Matrix {
        self.quotient.section()
    }

    /// The universal map `M × N → M ⊗_A N` as a bilinear map.
    pub fn universal(&self) -> BilinearMap {
        BilinearMap::from_fn(self.field(), self.left.dim(), self.right.dim(), self.dim(), |i, j| {
            self.class_of(i, j).to_vec()
        })
    }

    /// The unique linear `f` with `f ∘ projection = β`; `NotBalanced` if none.
    pub fn factor(&self, beta: &BilinearMap) -> Result<Matrix> {
        if beta.left_dim() != self.left.dim() || beta.right_dim() != self.right.dim() {
            return Err(Error::MalformedInput(format!(
                "bilinear map of shape {:?} on a tensor of {}x{}",
                beta.shape(),
                self.left.dim(),
                self.right.dim()
            )));
        }
        let cols: Vec<Vec<Scalar>> = (0..self.dim())
            .map(|d| {
                let (i, j) = self.rep(d);
                beta.basis(i, j).to_vec()
            })
            .collect();
        let f = Matrix::from_columns(self.field(), beta.out_dim(), &cols);
        let dn = self.right.dim();
        for u in 0..self.ambient_dim() {
            if f.apply(&self.proj_cols[u]) != beta.basis(u / dn, u % dn) {
                return Err(Error::NotBalanced(format!(
                    "value on m{} ⊗ n{} does not factor through the tensor product",
                    u / dn,
                    u % dn
                )));
            }
        }
        Ok(f)
    }

    /// The map `f ⊗ g: self → target` for linear `f: M → M'`, `g: N → N'`.
    pub fn induced_map(&self, f: &Matrix, g: &Matrix, target: &TensorSpace) -> Result<Matrix> {
        if f.cols() != self.left.dim()
            || g.cols() != self.right.dim()
            || f.rows() != target.left.dim()
            || g.rows() != target.right.dim()
        {
            return Err(Error::MalformedInput("induced_map shape mismatch".into()));
        }
        let fc: Vec<Vec<Scalar>> = (0..f.cols()).map(|c| f.column(c)).collect();
        let gc: Vec<Vec<Scalar>> = (0..g.cols()).map(|c| g.column(c)).collect();
        let beta = BilinearMap::from_fn(self.field(), f.cols(), g.cols(), target.dim(), |i, j| {
            target.project_pure(&fc[i], &gc[j])
        });
        self.factor(&beta).map_err(|e| match e {
            Error::NotBalanced(w) => Error::RelationsNotPreserved(w),
            other => other,
        })
    }
}

/// Outcome of a balancedness test, with the first failing basis triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Balance {
    pub balanced: bool,
    pub witness: Option<(usize, usize, usize)>,
}

/// Whether `β(m_i·a_b, n_j) = β(m_i, a_b·n_j)` on all basis triples.
pub fn is_balanced(beta: &BilinearMap, m: &Bimodule, n: &Bimodule) -> Result<Balance> {
    if beta.left_dim() != m.dim() || beta.right_dim() != n.dim() {
        return Err(Error::MalformedInput(format!(
            "bilinear map of shape {:?} on modules of dims {} and {}",
            beta.shape(),
            m.dim(),
            n.dim()
        )));
    }
    if !m.right_algebra().same_ring(n.left_algebra()) {
        return Err(Error::AlgebraMismatch("balancedness over different middle algebras".into()));
    }
    let c = assoc_check(m.right_action(), beta, n.left_action(), beta);
    Ok(Balance { balanced: c.passes(), witness: c.witnesses.first().copied() })
}
