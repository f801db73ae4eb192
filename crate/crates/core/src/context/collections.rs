use std::sync::Arc;

use crate::algebra::Algebra;
use crate::bilinear::BilinearMap;
use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix};
use crate::tensor::TensorSpace;
use crate::verify::{assoc_check, equal_check, Report};

use super::matrix_ring::{assemble_block_map, BlockLayout, MatrixRing};
use super::GeneralisedContext;

fn shape_error(what: &str) -> Error {
    Error::MalformedInput(format!("{what} does not match the context's shape"))
}

/// Scalar action of the base field on a space of dimension `d`.
fn scalar_action(field: FieldSpec, d: usize, on_left: bool) -> BilinearMap {
    if on_left {
        BilinearMap::from_fn(field, 1, d, d, |_, i| field.unit_vector(d, i))
    } else {
        BilinearMap::from_fn(field, d, 1, d, |i, _| field.unit_vector(d, i))
    }
}

/// Left modules `P_i` over `A_i` with structure maps `β_ik: M_ik × P_k → P_i`
/// (`structure[i*n + k]`). Only the left side of each entry is used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnCollection {
    pub entries: Vec<Bimodule>,
    pub structure: Vec<BilinearMap>,
}

impl ColumnCollection {
    /// Column `j` of the regular matrix ring.
    pub fn column_of(g: &GeneralisedContext, j: usize) -> Self {
        let n = g.n();
        ColumnCollection {
            entries: (0..n).map(|i| g.block(i, j).clone()).collect(),
            structure: (0..n * n).map(|b| g.map(b / n, b % n, j).clone()).collect(),
        }
    }

    pub fn zero(g: &GeneralisedContext) -> Result<Self> {
        let n = g.n();
        let f = g.field().ok_or_else(|| shape_error("empty context"))?;
        let base = Arc::new(Algebra::base_field(f));
        let entries = (0..n).map(|i| Bimodule::zero(g.algebra(i).clone(), base.clone())).collect::<Result<_>>()?;
        let structure = (0..n * n).map(|b| BilinearMap::zero(f, g.block(b / n, b % n).dim(), 0, 0)).collect();
        Ok(ColumnCollection { entries, structure })
    }

    fn check_shape(&self, g: &GeneralisedContext) -> Result<()> {
        let n = g.n();
        if self.entries.len() != n || self.structure.len() != n * n {
            return Err(shape_error("column collection"));
        }
        for i in 0..n {
            for k in 0..n {
                let want = (g.block(i, k).dim(), self.entries[k].dim(), self.entries[i].dim());
                if self.structure[i * n + k].shape() != want {
                    return Err(shape_error(&format!("β{}{}", i + 1, k + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn verify(&self, g: &GeneralisedContext) -> Result<Report> {
        self.check_shape(g)?;
        let n = g.n();
        let mut r = Report::new();
        for i in 0..n {
            let c = equal_check(&self.structure[i * n + i], self.entries[i].left_action());
            r.add_check("unit maps", c, |a, p, _| format!("β{}{} ≠ λ at (a{a}, p{p})", i + 1, i + 1));
        }
        for i in 0..n {
            for k in 0..n {
                for h in 0..n {
                    let c = assoc_check(
                        g.map(i, k, h),
                        &self.structure[i * n + h],
                        &self.structure[k * n + h],
                        &self.structure[i * n + k],
                    );
                    r.add_check("associativity", c, |x, y, z| {
                        format!("(i,k,h)=({},{},{}) basis ({x},{y},{z})", i + 1, k + 1, h + 1)
                    });
                }
            }
        }
        Ok(r)
    }

    pub fn total_dim(&self) -> usize {
        self.entries.iter().map(Bimodule::dim).sum()
    }

    /// The left module over the matrix ring, as a `ring`-`k` bimodule.
    pub fn to_module(&self, ring: &MatrixRing) -> Result<Bimodule> {
        let g = ring.source();
        self.check_shape(g)?;
        let n = g.n();
        let f = ring.ring().field();
        let offs = offsets(&self.entries);
        let total = self.total_dim();
        let mut left = BilinearMap::zero(f, ring.dim(), total, total);
        for i in 0..n {
            for k in 0..n {
                let rr = ring.layout().range(i, k);
                for (a, b, c, v) in self.structure[i * n + k].sparse_entries() {
                    left.set(rr.start + a, offs[k] + b, offs[i] + c, v);
                }
            }
        }
        let base = Arc::new(Algebra::base_field(f));
        Bimodule::new(ring.ring().clone(), base, total, left, scalar_action(f, total, false))
    }
}

/// Right modules `Q_j` over `A_j` with structure maps `γ_kj: Q_k × M_kj → Q_j`
/// (`structure[k*n + j]`). Only the right side of each entry is used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowCollection {
    pub entries: Vec<Bimodule>,
    pub structure: Vec<BilinearMap>,
}

impl RowCollection {
    /// Row `i` of the regular matrix ring.
    pub fn row_of(g: &GeneralisedContext, i: usize) -> Self {
        let n = g.n();
        RowCollection {
            entries: (0..n).map(|j| g.block(i, j).clone()).collect(),
            structure: (0..n * n).map(|b| g.map(i, b / n, b % n).clone()).collect(),
        }
    }

    fn check_shape(&self, g: &GeneralisedContext) -> Result<()> {
        let n = g.n();
        if self.entries.len() != n || self.structure.len() != n * n {
            return Err(shape_error("row collection"));
        }
        for k in 0..n {
            for j in 0..n {
                let want = (self.entries[k].dim(), g.block(k, j).dim(), self.entries[j].dim());
                if self.structure[k * n + j].shape() != want {
                    return Err(shape_error(&format!("γ{}{}", k + 1, j + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn verify(&self, g: &GeneralisedContext) -> Result<Report> {
        self.check_shape(g)?;
        let n = g.n();
        let mut r = Report::new();
        for j in 0..n {
            let c = equal_check(&self.structure[j * n + j], self.entries[j].right_action());
            r.add_check("unit maps", c, |q, a, _| format!("γ{}{} ≠ ρ at (q{q}, a{a})", j + 1, j + 1));
        }
        for k in 0..n {
            for h in 0..n {
                for j in 0..n {
                    let c = assoc_check(
                        &self.structure[k * n + h],
                        &self.structure[h * n + j],
                        g.map(k, h, j),
                        &self.structure[k * n + j],
                    );
                    r.add_check("associativity", c, |x, y, z| {
                        format!("(k,h,j)=({},{},{}) basis ({x},{y},{z})", k + 1, h + 1, j + 1)
                    });
                }
            }
        }
        Ok(r)
    }

    /// The right module over the matrix ring, as a `k`-`ring` bimodule.
    pub fn to_module(&self, ring: &MatrixRing) -> Result<Bimodule> {
        let g = ring.source();
        self.check_shape(g)?;
        let n = g.n();
        let f = ring.ring().field();
        let offs = offsets(&self.entries);
        let total = self.entries.iter().map(Bimodule::dim).sum();
        let mut right = BilinearMap::zero(f, total, ring.dim(), total);
        for k in 0..n {
            for j in 0..n {
                let rr = ring.layout().range(k, j);
                for (a, b, c, v) in self.structure[k * n + j].sparse_entries() {
                    right.set(offs[k] + a, rr.start + b, offs[j] + c, v);
                }
            }
        }
        let base = Arc::new(Algebra::base_field(f));
        Bimodule::new(base, ring.ring().clone(), total, scalar_action(f, total, true), right)
    }
}

/// Checks `f_i β_ik = β'_ik (1 ⊗ f_k)` on basis pairs for all `i, k`.
pub fn verify_column_morphism(
    g: &GeneralisedContext,
    p: &ColumnCollection,
    p2: &ColumnCollection,
    fs: &[Matrix],
) -> Result<Report> {
    p.check_shape(g)?;
    p2.check_shape(g)?;
    let n = g.n();
    if fs.len() != n {
        return Err(shape_error("morphism tuple"));
    }
    for i in 0..n {
        if fs[i].cols() != p.entries[i].dim() || fs[i].rows() != p2.entries[i].dim() {
            return Err(shape_error(&format!("f{}", i + 1)));
        }
    }
    let mut r = Report::new();
    let s = r.section("squares");
    for i in 0..n {
        for k in 0..n {
            let (b, b2) = (&p.structure[i * n + k], &p2.structure[i * n + k]);
            for m in 0..g.block(i, k).dim() {
                for x in 0..p.entries[k].dim() {
                    s.checked += 1;
                    let lhs = fs[i].apply(b.basis(m, x));
                    let rhs = b2.eval_right_vec(m, &fs[k].column(x));
                    if lhs != rhs {
                        s.fail(|| format!("(i,k)=({},{}) basis ({m},{x})", i + 1, k + 1));
                    }
                }
            }
        }
    }
    Ok(r)
}

/// Blocks `T_ij` with left structure `γ_ikj: M_ik × T_kj → T_ij` over one
/// context and right structure `β_ikj: T_ik × M'_kj → T_ij` over another.
/// Both structure grids are indexed `(i*n + k)*n + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixBimodule {
    pub n: usize,
    pub blocks: Vec<Bimodule>,
    pub left: Vec<BilinearMap>,
    pub right: Vec<BilinearMap>,
}

impl MatrixBimodule {
    /// The matrix ring of `g` as a bimodule over itself.
    pub fn regular(g: &GeneralisedContext) -> Self {
        MatrixBimodule { n: g.n(), blocks: g.blocks().to_vec(), left: g.maps().to_vec(), right: g.maps().to_vec() }
    }

    pub fn block(&self, i: usize, j: usize) -> &Bimodule {
        &self.blocks[i * self.n + j]
    }

    pub fn gamma(&self, i: usize, k: usize, j: usize) -> &BilinearMap {
        &self.left[(i * self.n + k) * self.n + j]
    }

    pub fn beta(&self, i: usize, k: usize, j: usize) -> &BilinearMap {
        &self.right[(i * self.n + k) * self.n + j]
    }

    pub fn dims(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.block(i, j).dim()).collect()).collect()
    }

    pub fn layout(&self) -> BlockLayout {
        BlockLayout::of_blocks(self.n, &self.blocks)
    }

    fn check_shape(&self, gl: &GeneralisedContext, gr: &GeneralisedContext) -> Result<()> {
        let n = self.n;
        if gl.n() != n || gr.n() != n || self.blocks.len() != n * n || self.left.len() != n * n * n || self.right.len() != n * n * n {
            return Err(shape_error("matrix bimodule"));
        }
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    let wl = (gl.block(i, k).dim(), self.block(k, j).dim(), self.block(i, j).dim());
                    let wr = (self.block(i, k).dim(), gr.block(k, j).dim(), self.block(i, j).dim());
                    if self.gamma(i, k, j).shape() != wl || self.beta(i, k, j).shape() != wr {
                        return Err(shape_error(&format!("structure map ({}, {}, {})", i + 1, k + 1, j + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn verify(&self, gl: &GeneralisedContext, gr: &GeneralisedContext) -> Result<Report> {
        self.check_shape(gl, gr)?;
        let n = self.n;
        let mut r = Report::new();
        for i in 0..n {
            for j in 0..n {
                let t = self.block(i, j);
                let c = equal_check(self.gamma(i, i, j), t.left_action());
                r.add_check("unit maps", c, |a, x, _| format!("γ{}{}{} ≠ λ at ({a},{x})", i + 1, i + 1, j + 1));
                let c = equal_check(self.beta(i, j, j), t.right_action());
                r.add_check("unit maps", c, |x, a, _| format!("β{}{}{} ≠ ρ at ({x},{a})", i + 1, j + 1, j + 1));
            }
        }
        r.section("columns");
        r.section("rows");
        r.section("compatibility");
        for i in 0..n {
            for h in 0..n {
                for k in 0..n {
                    for j in 0..n {
                        let w = |x: usize, y: usize, z: usize| {
                            format!("(i,h,k,j)=({},{},{},{}) basis ({x},{y},{z})", i + 1, h + 1, k + 1, j + 1)
                        };
                        // γ_ihj(φ_ikh ⊗ 1) = γ_ikj(1 ⊗ γ_khj) on M_ik × M_kh × T_hj
                        let c = assoc_check(gl.map(i, k, h), self.gamma(i, h, j), self.gamma(k, h, j), self.gamma(i, k, j));
                        r.add_check("columns", c, w);
                        // β_ihj(β_ikh ⊗ 1) = β_ikj(1 ⊗ φ'_khj) on T_ik × M'_kh × M'_hj
                        let c = assoc_check(self.beta(i, k, h), self.beta(i, h, j), gr.map(k, h, j), self.beta(i, k, j));
                        r.add_check("rows", c, w);
                        // β_ikj(γ_ihk ⊗ 1) = γ_ihj(1 ⊗ β_hkj) on M_ih × T_hk × M'_kj
                        let c = assoc_check(self.gamma(i, h, k), self.beta(i, k, j), self.beta(h, k, j), self.gamma(i, h, j));
                        r.add_check("compatibility", c, w);
                    }
                }
            }
        }
        Ok(r)
    }

    /// The assembled bimodule over the two matrix rings.
    pub fn assemble(&self, left_ring: &MatrixRing, right_ring: &MatrixRing) -> Result<Bimodule> {
        self.check_shape(left_ring.source(), right_ring.source())?;
        let f = left_ring.ring().field();
        let t = self.layout();
        let la = assemble_block_map(f, left_ring.layout(), &t, &t, |i, k, j| self.gamma(i, k, j));
        let ra = assemble_block_map(f, &t, right_ring.layout(), &t, |i, k, j| self.beta(i, k, j));
        Bimodule::new(left_ring.ring().clone(), right_ring.ring().clone(), t.total(), la, ra)
    }
}

/// Factors blockwise maps `α_k: Q_k × P_k → Z` through `|Q| ⊗ |P|` over the
/// matrix ring, after checking `α_j(γ_kj ⊗ 1) = α_k(1 ⊗ β_kj)`.
pub fn factor_blockwise_balanced(
    ring: &MatrixRing,
    row: &RowCollection,
    col: &ColumnCollection,
    alphas: &[BilinearMap],
) -> Result<(TensorSpace, Matrix)> {
    let g = ring.source();
    let n = g.n();
    row.check_shape(g)?;
    col.check_shape(g)?;
    if alphas.len() != n {
        return Err(shape_error("α tuple"));
    }
    let out = alphas.first().map_or(0, BilinearMap::out_dim);
    for k in 0..n {
        if alphas[k].shape() != (row.entries[k].dim(), col.entries[k].dim(), out) {
            return Err(shape_error(&format!("α{}", k + 1)));
        }
    }
    for k in 0..n {
        for j in 0..n {
            let c = assoc_check(&row.structure[k * n + j], &alphas[j], &col.structure[k * n + j], &alphas[k]);
            if let Some(&(q, m, p)) = c.witnesses.first() {
                return Err(Error::NotBalanced(format!(
                    "(k,j)=({},{}) basis (q{q}, m{m}, p{p})",
                    k + 1,
                    j + 1
                )));
            }
        }
    }
    let qm = row.to_module(ring)?;
    let pm = col.to_module(ring)?;
    let t = TensorSpace::new(&qm, &pm)?;
    let f = ring.ring().field();
    let qo: Vec<usize> = offsets(&row.entries);
    let po: Vec<usize> = offsets(&col.entries);
    let mut alpha = BilinearMap::zero(f, qm.dim(), pm.dim(), out);
    for k in 0..n {
        for (a, b, c, v) in alphas[k].sparse_entries() {
            alpha.set(qo[k] + a, po[k] + b, c, v);
        }
    }
    let m = t.factor(&alpha)?;
    Ok((t, m))
}

fn offsets(v: &[Bimodule]) -> Vec<usize> {
    let mut acc = 0;
    v.iter()
        .map(|b| {
            let o = acc;
            acc += b.dim();
            o
        })
        .collect()
}
