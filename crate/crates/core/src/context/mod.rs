//! Generalised and classical Morita contexts, matrix rings and matrix bimodules.

mod classical;
mod collections;
mod matrix_ring;
mod peirce;

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::Algebra;
use crate::bilinear::BilinearMap;
use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::linalg::FieldSpec;
use crate::verify::{assoc_check, equal_check, Check, Report};

pub use classical::ClassicalContext;
pub use collections::{
    factor_blockwise_balanced, verify_column_morphism, ColumnCollection, MatrixBimodule, RowCollection,
};
pub use matrix_ring::{assemble_block_map, BlockLayout, MatrixRing};
pub use peirce::{peirce, peirce_grouped, Peirce};

/// `(A_i; M_ij; φ_ikj)` with `n²` blocks and `n³` multiplication maps.
/// Indices are 0-based internally and printed 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralisedContext {
    n: usize,
    algebras: Vec<Arc<Algebra>>,
    blocks: Vec<Bimodule>,
    maps: Vec<BilinearMap>,
}

impl GeneralisedContext {
    /// Builds a context from off-diagonal blocks and whichever maps are given.
    /// Diagonal blocks are the regular bimodules; missing maps default to the
    /// actions and multiplications where those apply and to zero elsewhere.
    pub fn new(
        algebras: Vec<Arc<Algebra>>,
        mut off_diagonal: BTreeMap<(usize, usize), Bimodule>,
        mut maps: BTreeMap<(usize, usize, usize), BilinearMap>,
    ) -> Result<Self> {
        let n = algebras.len();
        if let Some(&(i, j)) = off_diagonal.keys().find(|&&(i, j)| i >= n || j >= n || i == j) {
            return Err(Error::MalformedInput(format!(
                "block ({}, {}) is diagonal or out of range for n = {n}",
                i + 1,
                j + 1
            )));
        }
        if let Some(&(i, k, j)) = maps.keys().find(|&&(i, k, j)| i >= n || k >= n || j >= n) {
            return Err(Error::MalformedInput(format!("map ({}, {}, {}) out of range", i + 1, k + 1, j + 1)));
        }
        let mut blocks = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let b = if i == j {
                    Bimodule::regular(algebras[i].clone())
                } else {
                    match off_diagonal.remove(&(i, j)) {
                        Some(b) => b,
                        None => Bimodule::zero(algebras[i].clone(), algebras[j].clone())?,
                    }
                };
                blocks.push(b);
            }
        }
        let mut all = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    let m = match maps.remove(&(i, k, j)) {
                        Some(m) => m,
                        None => default_map(&blocks, n, i, k, j),
                    };
                    all.push(m);
                }
            }
        }
        GeneralisedContext::from_grids(algebras, blocks, all)
    }

    /// Builds from full grids: blocks indexed `i*n + j`, maps `(i*n + k)*n + j`.
    pub fn from_grids(algebras: Vec<Arc<Algebra>>, blocks: Vec<Bimodule>, maps: Vec<BilinearMap>) -> Result<Self> {
        let n = algebras.len();
        if blocks.len() != n * n || maps.len() != n * n * n {
            return Err(Error::MalformedInput(format!(
                "context with n = {n} needs {} blocks and {} maps, got {} and {}",
                n * n,
                n * n * n,
                blocks.len(),
                maps.len()
            )));
        }
        let field = algebras.first().map(|a| a.field());
        for a in &algebras {
            if Some(a.field()) != field {
                return Err(Error::FieldMismatch { expected: field.unwrap(), found: a.field() });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let b = &blocks[i * n + j];
                if !b.left_algebra().same_ring(&algebras[i]) || !b.right_algebra().same_ring(&algebras[j]) {
                    return Err(Error::AlgebraMismatch(format!(
                        "block ({}, {}) is not an A_{}-A_{} bimodule",
                        i + 1,
                        j + 1,
                        i + 1,
                        j + 1
                    )));
                }
                if i == j && !is_regular(b, &algebras[i]) {
                    return Err(Error::MalformedInput(format!(
                        "diagonal block ({}, {}) must be the regular bimodule",
                        i + 1,
                        i + 1
                    )));
                }
            }
        }
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    let m = &maps[(i * n + k) * n + j];
                    let want = (blocks[i * n + k].dim(), blocks[k * n + j].dim(), blocks[i * n + j].dim());
                    if m.shape() != want {
                        return Err(Error::MalformedInput(format!(
                            "map ({}, {}, {}) has shape {:?}, expected {:?}",
                            i + 1,
                            k + 1,
                            j + 1,
                            m.shape(),
                            want
                        )));
                    }
                }
            }
        }
        Ok(GeneralisedContext { n, algebras, blocks, maps })
    }

    /// The one-ring context `(A)`.
    pub fn single(a: Arc<Algebra>) -> Self {
        GeneralisedContext::new(vec![a], BTreeMap::new(), BTreeMap::new()).expect("n = 1")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Option<FieldSpec> {
        self.algebras.first().map(|a| a.field())
    }

    pub fn algebras(&self) -> &[Arc<Algebra>] {
        &self.algebras
    }

    pub fn algebra(&self, i: usize) -> &Arc<Algebra> {
        &self.algebras[i]
    }

    pub fn block(&self, i: usize, j: usize) -> &Bimodule {
        &self.blocks[i * self.n + j]
    }

    pub fn blocks(&self) -> &[Bimodule] {
        &self.blocks
    }

    /// `φ_ikj: M_ik × M_kj → M_ij`.
    pub fn map(&self, i: usize, k: usize, j: usize) -> &BilinearMap {
        &self.maps[(i * self.n + k) * self.n + j]
    }

    pub fn maps(&self) -> &[BilinearMap] {
        &self.maps
    }

    /// Block dimensions as an `n × n` table.
    pub fn dims(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.block(i, j).dim()).collect()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(Bimodule::dim).sum()
    }

    pub fn verify(&self) -> Report {
        let n = self.n;
        let mut r = Report::new();
        for (i, a) in self.algebras.iter().enumerate() {
            r.merge(&format!("algebras/A{}", i + 1), a.verify());
        }
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    r.merge(&format!("bimodules/M{}{}", i + 1, j + 1), self.block(i, j).verify());
                }
            }
        }
        for k in 0..n {
            for j in 0..n {
                let c = equal_check(self.map(k, k, j), self.block(k, j).left_action());
                r.add_check("unit maps", c, |a, m, _| format!("φ{}{}{} ≠ λ at (a{a}, m{m})", k + 1, k + 1, j + 1));
                let c = equal_check(self.map(j, k, k), self.block(j, k).right_action());
                r.add_check("unit maps", c, |m, a, _| format!("φ{}{}{} ≠ ρ at (m{m}, a{a})", j + 1, k + 1, k + 1));
            }
            let c = equal_check(self.map(k, k, k), self.algebra(k).mul());
            r.add_check("unit maps", c, |x, y, _| format!("φ{}{}{} ≠ μ at ({x}, {y})", k + 1, k + 1, k + 1));
        }
        let quads: Vec<(usize, usize, usize, usize)> = (0..n)
            .flat_map(|h| (0..n).flat_map(move |i| (0..n).flat_map(move |j| (0..n).map(move |k| (h, i, j, k)))))
            .collect();
        let checks: Vec<((usize, usize, usize, usize), Check)> =
            quads.par_iter().map(|&(h, i, j, k)| ((h, i, j, k), self.mixed_assoc(h, i, j, k))).collect();
        r.section("mixed associativity");
        for ((h, i, j, k), c) in checks {
            r.add_check("mixed associativity", c, |x, y, z| {
                format!("(h,i,j,k)=({},{},{},{}) basis ({x},{y},{z})", h + 1, i + 1, j + 1, k + 1)
            });
        }
        r
    }

    /// `φ_ihj(1⊗φ_hkj) = φ_ikj(φ_ihk⊗1)` on `M_ih × M_hk × M_kj`.
    pub fn mixed_assoc(&self, h: usize, i: usize, j: usize, k: usize) -> Check {
        assoc_check(self.map(i, h, k), self.map(i, k, j), self.map(h, k, j), self.map(i, h, j))
    }

    /// Unitality of every off-diagonal block, both sides.
    pub fn blocks_unital(&self) -> bool {
        self.blocks.iter().all(Bimodule::is_unital)
    }

    /// Checks `verify` and converts a failure into `ContextInvalid`.
    pub fn ensure_valid(&self) -> Result<()> {
        let r = self.verify();
        if r.passes() {
            Ok(())
        } else {
            Err(Error::ContextInvalid(r.summary()))
        }
    }
}

/// Either kind of context, for naming and serializing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContextObject {
    Generalised(GeneralisedContext),
    Classical(ClassicalContext),
}

impl ContextObject {
    pub fn field(&self) -> FieldSpec {
        match self {
            ContextObject::Generalised(g) => g.field().expect("contexts in use have at least one algebra"),
            ContextObject::Classical(c) => c.r().field(),
        }
    }

    pub fn verify(&self) -> Report {
        match self {
            ContextObject::Generalised(g) => g.verify(),
            ContextObject::Classical(c) => c.verify(),
        }
    }

    pub fn to_generalised(&self) -> GeneralisedContext {
        match self {
            ContextObject::Generalised(g) => g.clone(),
            ContextObject::Classical(c) => c.to_generalised(),
        }
    }
}

fn is_regular(b: &Bimodule, a: &Algebra) -> bool {
    b.dim() == a.dim() && b.left_action() == a.mul() && b.right_action() == a.mul()
}

pub(crate) fn default_map(blocks: &[Bimodule], n: usize, i: usize, k: usize, j: usize) -> BilinearMap {
    let (x, y, z) = (&blocks[i * n + k], &blocks[k * n + j], &blocks[i * n + j]);
    if i == k {
        y.left_action().clone()
    } else if k == j {
        x.right_action().clone()
    } else {
        BilinearMap::zero(x.field(), x.dim(), y.dim(), z.dim())
    }
}
