use std::ops::Range;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::bilinear::BilinearMap;
use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Scalar};

use super::GeneralisedContext;

/// Row-major concatenation of `n × n` blocks into one global basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    n: usize,
    dims: Vec<usize>,
    offsets: Vec<usize>,
}

impl BlockLayout {
    pub fn new(n: usize, dims: Vec<usize>) -> Self {
        assert_eq!(dims.len(), n * n);
        let mut offsets = Vec::with_capacity(n * n + 1);
        let mut acc = 0;
        offsets.push(0);
        for d in &dims {
            acc += d;
            offsets.push(acc);
        }
        BlockLayout { n, dims, offsets }
    }

    pub fn of_blocks(n: usize, blocks: &[Bimodule]) -> Self {
        BlockLayout::new(n, blocks.iter().map(Bimodule::dim).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> usize {
        self.offsets[self.n * self.n]
    }

    pub fn dim(&self, i: usize, j: usize) -> usize {
        self.dims[i * self.n + j]
    }

    pub fn range(&self, i: usize, j: usize) -> Range<usize> {
        let b = i * self.n + j;
        self.offsets[b]..self.offsets[b + 1]
    }

    /// `(i, j, local index)` of a global basis index.
    pub fn locate(&self, g: usize) -> (usize, usize, usize) {
        let b = self.offsets.partition_point(|&o| o <= g) - 1;
        (b / self.n, b % self.n, g - self.offsets[b])
    }

    pub fn embed(&self, field: FieldSpec, i: usize, j: usize, local: &[Scalar]) -> Vec<Scalar> {
        let mut v = field.zeros(self.total());
        v[self.range(i, j)].clone_from_slice(local);
        v
    }

    pub fn extract(&self, i: usize, j: usize, global: &[Scalar]) -> Vec<Scalar> {
        global[self.range(i, j)].to_vec()
    }
}

/// Assembles blockwise maps `X_ik × Y_kj → Z_ij` into one map on the
/// concatenated bases; pairs with mismatched inner index map to zero.
pub fn assemble_block_map<'a>(
    field: FieldSpec,
    x: &BlockLayout,
    y: &BlockLayout,
    z: &BlockLayout,
    map: impl Fn(usize, usize, usize) -> &'a BilinearMap,
) -> BilinearMap {
    let n = x.n();
    let mut out = BilinearMap::zero(field, x.total(), y.total(), z.total());
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                let m = map(i, k, j);
                debug_assert_eq!(m.shape(), (x.dim(i, k), y.dim(k, j), z.dim(i, j)));
                let (ox, oy, oz) = (x.range(i, k).start, y.range(k, j).start, z.range(i, j).start);
                for (a, b, c, v) in m.sparse_entries() {
                    out.set(ox + a, oy + b, oz + c, v);
                }
            }
        }
    }
    out
}

/// The generalised matrix ring `[A_i; M_ij]` of a context.
#[derive(Clone, Debug)]
pub struct MatrixRing {
    ring: Arc<Algebra>,
    layout: BlockLayout,
    source: GeneralisedContext,
}

impl MatrixRing {
    /// Requires the context to verify.
    pub fn new(g: &GeneralisedContext) -> Result<Self> {
        let r = g.verify();
        if !r.passes() {
            return Err(Error::ContextInvalid(r.summary()));
        }
        Ok(MatrixRing::assemble(g))
    }

    /// Assembles without verifying the context first.
    pub fn assemble(g: &GeneralisedContext) -> Self {
        let n = g.n();
        let f = g.field().unwrap_or(FieldSpec::Rationals);
        let layout = BlockLayout::of_blocks(n, g.blocks());
        let mul = assemble_block_map(f, &layout, &layout, &layout, |i, k, j| g.map(i, k, j));
        let idempotents: Vec<Vec<Scalar>> = (0..n)
            .filter(|&i| g.algebra(i).dim() > 0)
            .map(|i| layout.embed(f, i, i, &g.algebra(i).unit()))
            .collect();
        let ring = Algebra::new(f, layout.total(), mul, idempotents).expect("assembled shapes agree");
        MatrixRing { ring: Arc::new(ring), layout, source: g.clone() }
    }

    pub fn ring(&self) -> &Arc<Algebra> {
        &self.ring
    }

    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    pub fn source(&self) -> &GeneralisedContext {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    /// Reads blocks, actions and all `φ_ikj` back out of the ring's structure
    /// constants. Designated idempotents of the `A_i` are taken from the source.
    pub fn extract_context(&self) -> Result<GeneralisedContext> {
        let g = &self.source;
        let n = g.n();
        let f = self.ring.field();
        let l = &self.layout;
        let piece = |i: usize, k: usize, j: usize| {
            let (rx, ry, rz) = (l.range(i, k), l.range(k, j), l.range(i, j));
            BilinearMap::from_fn(f, rx.len(), ry.len(), rz.len(), |a, b| {
                self.ring.mul().basis(rx.start + a, ry.start + b)[rz.clone()].to_vec()
            })
        };
        let algebras: Vec<Arc<Algebra>> = (0..n)
            .map(|i| {
                let d = l.dim(i, i);
                let a = Algebra::new(f, d, piece(i, i, i), g.algebra(i).idempotents().to_vec())?;
                match g.algebra(i).identity() {
                    Some(id) => a.with_identity(id.clone()).map(Arc::new),
                    None => Ok(Arc::new(a)),
                }
            })
            .collect::<Result<_>>()?;
        let mut blocks = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                blocks.push(Bimodule::new(
                    algebras[i].clone(),
                    algebras[j].clone(),
                    l.dim(i, j),
                    piece(i, i, j),
                    piece(i, j, j),
                )?);
            }
        }
        let mut maps = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    maps.push(piece(i, k, j));
                }
            }
        }
        GeneralisedContext::from_grids(algebras, blocks, maps)
    }
}
