//! Corner replacement: composing a classical context into a generalised one,
//! the two excisions, the two ligations and the resulting Morita context
//! between the old and new matrix rings.

mod certificate;
mod formulas;

use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::Algebra;
use crate::bilinear::BilinearMap;
use crate::bimodule::Bimodule;
use crate::context::{assemble_block_map, peirce, BlockLayout, ClassicalContext, GeneralisedContext, MatrixBimodule, MatrixRing};
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix, Scalar};
use crate::tensor::TensorSpace;
use crate::verify::Report;

pub use certificate::{certify_equivalence, BlockRank, EquivalenceCertificate, Evidence, Refusal};
use formulas::Case;

/// A block of one of the surgery's matrix objects: either an input block or
/// a tensor product whose quotient basis consists of pure tensors.
#[derive(Clone, Copy, Debug)]
enum Piece<'a> {
    Plain(&'a Bimodule),
    Tensor(&'a TensorSpace),
}

impl<'a> Piece<'a> {
    fn module(&self) -> &'a Bimodule {
        match self {
            Piece::Plain(b) => b,
            Piece::Tensor(t) => t.module(),
        }
    }

    fn dim(&self) -> usize {
        self.module().dim()
    }

    fn ambient(&self) -> usize {
        match self {
            Piece::Plain(b) => b.dim(),
            Piece::Tensor(t) => t.ambient_dim(),
        }
    }

    fn rep(&self, d: usize) -> usize {
        match self {
            Piece::Plain(_) => d,
            Piece::Tensor(t) => {
                let (i, j) = t.rep(d);
                i * t.right_factor().dim() + j
            }
        }
    }

    fn project(&self, u: usize) -> Vec<Scalar> {
        match self {
            Piece::Plain(b) => b.field().unit_vector(b.dim(), u),
            Piece::Tensor(t) => {
                let dn = t.right_factor().dim();
                t.class_of(u / dn, u % dn).to_vec()
            }
        }
    }

    fn is_plain(&self) -> bool {
        matches!(self, Piece::Plain(_))
    }
}

/// Defines a bilinear map on `x × y` from a formula on ambient basis pairs
/// and checks that the formula is constant on tensor classes.
fn descend(
    field: FieldSpec,
    x: &Piece,
    y: &Piece,
    out: usize,
    formula: &(dyn Fn(usize, usize) -> Vec<Scalar> + Sync),
    what: &str,
) -> Result<BilinearMap> {
    let map = BilinearMap::from_fn(field, x.dim(), y.dim(), out, |p, q| formula(x.rep(p), y.rep(q)));
    if x.is_plain() && y.is_plain() {
        return Ok(map);
    }
    let py: Vec<Vec<Scalar>> = (0..y.ambient()).map(|v| y.project(v)).collect();
    let bad = (0..x.ambient()).into_par_iter().find_map_first(|u| {
        let pu = x.project(u);
        (0..y.ambient()).find(|&v| map.eval(&pu, &py[v]) != formula(u, v)).map(|v| (u, v))
    });
    match bad {
        None => Ok(map),
        Some((u, v)) => Err(Error::InvariantViolated(format!(
            "{what} is not well defined on the tensor quotient: ambient pair ({u}, {v})"
        ))),
    }
}

/// Column excision: column `t` of the matrix ring tensored with `N`.
#[derive(Clone, Debug)]
pub struct ColumnExcision {
    pub matrix: MatrixBimodule,
    /// `M_it ⊗_R N` for every `i`, including the literal `R ⊗_R N`.
    pub tensors: Vec<Arc<TensorSpace>>,
}

impl ColumnExcision {
    /// The canonical isomorphism `R ⊗_R N → N`, `r ⊗ n ↦ rn`.
    pub fn canonical_iso(&self, t: usize) -> Result<Matrix> {
        let tn = &self.tensors[t];
        tn.factor(tn.right_factor().left_action())
    }
}

/// Row excision: row `t` of the matrix ring tensored with `L`.
#[derive(Clone, Debug)]
pub struct RowExcision {
    pub matrix: MatrixBimodule,
    /// `L ⊗_R M_tj` for every `j`, including the literal `L ⊗_R R`.
    pub tensors: Vec<Arc<TensorSpace>>,
}

impl RowExcision {
    /// The canonical isomorphism `L ⊗_R R → L`, `l ⊗ r ↦ lr`.
    pub fn canonical_iso(&self, t: usize) -> Result<Matrix> {
        let tl = &self.tensors[t];
        tl.factor(tl.left_factor().right_action())
    }
}

/// A blockwise balanced pairing, assembled and factored through the tensor
/// product of the two excision bimodules.
#[derive(Clone, Debug)]
pub struct Ligation {
    /// Blockwise maps indexed `(i*n + k)*n + j`.
    pub blocks: Vec<BilinearMap>,
    pub map: BilinearMap,
    pub tensor: TensorSpace,
    pub factored: Matrix,
}

impl Ligation {
    pub fn rank(&self) -> usize {
        self.factored.rank()
    }

    pub fn target_dim(&self) -> usize {
        self.factored.rows()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target_dim()
    }
}

/// Everything produced by one corner replacement.
#[derive(Clone, Debug)]
pub struct SurgeryResult {
    pub t: usize,
    pub input: GeneralisedContext,
    pub classical: ClassicalContext,
    pub composed: GeneralisedContext,
    pub ring: MatrixRing,
    pub composed_ring: MatrixRing,
    pub column: ColumnExcision,
    pub row: RowExcision,
    pub alpha: Ligation,
    pub alpha_prime: Ligation,
    /// `([A_i; M_ij], [A_i'; M_ij']; |N|, |L|; |α|, |α'|)`.
    pub morita: ClassicalContext,
    pub report: Report,
}

impl SurgeryResult {
    /// For an identity-shaped context (`N = L = R` with `ζ = θ = μ`), the
    /// blockwise canonical map from the composed ring back to the original
    /// one: `m ⊗ r ↦ mr`, `r ⊗ m ↦ rm`, identity elsewhere.
    pub fn collapse_identity(&self) -> Result<Matrix> {
        let c = &self.classical;
        let r = c.r();
        let reg = Bimodule::regular(r.clone());
        let same = |b: &Bimodule| b.dim() == r.dim() && b.left_action() == reg.left_action() && b.right_action() == reg.right_action();
        if !c.s().same_ring(r) || !same(c.n_module()) || !same(c.l_module()) || c.zeta() != r.mul() || c.theta() != r.mul() {
            return Err(Error::MalformedInput("the classical context is not an identity context".into()));
        }
        let n = self.input.n();
        let f = r.field();
        let (src, dst) = (self.composed_ring.layout(), self.ring.layout());
        let mut out = Matrix::zero(f, dst.total(), src.total());
        for i in 0..n {
            for j in 0..n {
                let block = if j == self.t && i != self.t {
                    let t = &self.column.tensors[i];
                    t.factor(t.left_factor().right_action())?
                } else if i == self.t && j != self.t {
                    let t = &self.row.tensors[j];
                    t.factor(t.right_factor().left_action())?
                } else {
                    Matrix::identity(f, src.dim(i, j))
                };
                let (rs, rd) = (src.range(i, j), dst.range(i, j));
                for a in 0..block.rows() {
                    for b in 0..block.cols() {
                        out.set(rd.start + a, rs.start + b, block.get(a, b).clone());
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The data shared by every step of a corner replacement at index `t`.
#[derive(Clone, Debug)]
pub struct Surgery {
    g: GeneralisedContext,
    c: ClassicalContext,
    t: usize,
    col: Vec<Arc<TensorSpace>>,
    row: Vec<Arc<TensorSpace>>,
    s_reg: Bimodule,
}

impl Surgery {
    /// Checks that `t` is in range, that `R` is the ring `A_t`, and that both
    /// contexts verify; then forms all tensor products the steps need.
    pub fn new(g: &GeneralisedContext, c: &ClassicalContext, t: usize) -> Result<Self> {
        let n = g.n();
        if t >= n {
            return Err(Error::MalformedInput(format!("corner index {} out of range 1..={n}", t + 1)));
        }
        if !c.r().same_ring(g.algebra(t)) {
            return Err(Error::CornerMismatch(format!(
                "R (dim {}) is not the ring A_{} (dim {})",
                c.r().dim(),
                t + 1,
                g.algebra(t).dim()
            )));
        }
        g.ensure_valid()?;
        let cr = c.verify();
        if !cr.passes() {
            return Err(Error::ContextInvalid(cr.summary()));
        }
        let col = (0..n)
            .into_par_iter()
            .map(|i| TensorSpace::new(g.block(i, t), c.n_module()).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        let row = (0..n)
            .into_par_iter()
            .map(|j| TensorSpace::new(c.l_module(), g.block(t, j)).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        let s_reg = Bimodule::regular(c.s().clone());
        Ok(Surgery { g: g.clone(), c: c.clone(), t, col, row, s_reg })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    fn n(&self) -> usize {
        self.g.n()
    }

    fn field(&self) -> FieldSpec {
        self.c.r().field()
    }

    fn original(&self, i: usize, j: usize) -> Piece<'_> {
        Piece::Plain(self.g.block(i, j))
    }

    fn primed(&self, i: usize, j: usize) -> Piece<'_> {
        let t = self.t;
        match (i == t, j == t) {
            (true, true) => Piece::Plain(&self.s_reg),
            (false, true) => Piece::Tensor(&self.col[i]),
            (true, false) => Piece::Tensor(&self.row[j]),
            (false, false) => self.original(i, j),
        }
    }

    fn column_piece(&self, i: usize, j: usize) -> Piece<'_> {
        if j == self.t {
            Piece::Tensor(&self.col[i])
        } else {
            self.original(i, j)
        }
    }

    fn row_piece(&self, i: usize, j: usize) -> Piece<'_> {
        if i == self.t {
            Piece::Tensor(&self.row[j])
        } else {
            self.original(i, j)
        }
    }

    /// Builds all `n³` maps `x_ik × y_kj → z_ij` from a case table.
    fn grid<'s>(
        &'s self,
        x: impl Fn(usize, usize) -> Piece<'s> + Sync,
        y: impl Fn(usize, usize) -> Piece<'s> + Sync,
        z: impl Fn(usize, usize) -> Piece<'s> + Sync,
        case: impl Fn(usize, usize, usize) -> Case + Sync,
        name: &str,
    ) -> Result<Vec<BilinearMap>> {
        let n = self.n();
        let f = self.field();
        (0..n * n * n)
            .into_par_iter()
            .map(|b| {
                let (i, k, j) = (b / (n * n), (b / n) % n, b % n);
                let formula = self.formula(case(i, k, j), i, k, j);
                let what = format!("{name}{}{}{}", i + 1, k + 1, j + 1);
                descend(f, &x(i, k), &y(k, j), z(i, j).dim(), &*formula, &what)
            })
            .collect()
    }

    /// The composed context `(A_i'; M_ij'; φ_ikj')`.
    pub fn compose(&self) -> Result<GeneralisedContext> {
        let n = self.n();
        let t = self.t;
        let algebras: Vec<Arc<Algebra>> =
            (0..n).map(|i| if i == t { self.c.s().clone() } else { self.g.algebra(i).clone() }).collect();
        let blocks: Vec<Bimodule> = (0..n * n).map(|b| self.primed(b / n, b % n).module().clone()).collect();
        let maps = self.grid(
            |i, j| self.primed(i, j),
            |i, j| self.primed(i, j),
            |i, j| self.primed(i, j),
            |i, k, j| Case::of(i == t, k == t, j == t),
            "φ'",
        )?;
        GeneralisedContext::from_grids(algebras, blocks, maps)
    }

    pub fn column_excision(&self) -> Result<ColumnExcision> {
        let n = self.n();
        let t = self.t;
        let left = self.grid(
            |i, j| self.original(i, j),
            |i, j| self.column_piece(i, j),
            |i, j| self.column_piece(i, j),
            |_, _, j| Case::of(false, false, j == t),
            "γ",
        )?;
        let right = self.grid(
            |i, j| self.column_piece(i, j),
            |i, j| self.primed(i, j),
            |i, j| self.column_piece(i, j),
            |_, k, j| Case::of(false, k == t, j == t),
            "β",
        )?;
        let blocks = (0..n * n).map(|b| self.column_piece(b / n, b % n).module().clone()).collect();
        Ok(ColumnExcision { matrix: MatrixBimodule { n, blocks, left, right }, tensors: self.col.clone() })
    }

    pub fn row_excision(&self) -> Result<RowExcision> {
        let n = self.n();
        let t = self.t;
        let left = self.grid(
            |i, j| self.primed(i, j),
            |i, j| self.row_piece(i, j),
            |i, j| self.row_piece(i, j),
            |i, k, j| {
                if i != t && k == t && j == t {
                    Case::ZetaRight
                } else {
                    Case::of(i == t, k == t, false)
                }
            },
            "γ",
        )?;
        let right = self.grid(
            |i, j| self.row_piece(i, j),
            |i, j| self.original(i, j),
            |i, j| self.row_piece(i, j),
            |i, _, _| Case::of(i == t, false, false),
            "β",
        )?;
        let blocks = (0..n * n).map(|b| self.row_piece(b / n, b % n).module().clone()).collect();
        Ok(RowExcision { matrix: MatrixBimodule { n, blocks, left, right }, tensors: self.row.clone() })
    }

    /// `|α|: |N| ⊗ |L| → [A_i; M_ij]`, balanced over the composed ring.
    pub fn column_row_ligation(
        &self,
        rings: (&MatrixRing, &MatrixRing),
        column: &ColumnExcision,
        row: &RowExcision,
    ) -> Result<Ligation> {
        let t = self.t;
        let (ring, composed_ring) = rings;
        let blocks = self.grid(
            |i, j| self.column_piece(i, j),
            |i, j| self.row_piece(i, j),
            |i, j| self.original(i, j),
            |_, k, _| Case::of(false, k == t, false),
            "α",
        )?;
        let nm = column.matrix.assemble(ring, composed_ring)?;
        let lm = row.matrix.assemble(composed_ring, ring)?;
        self.factor_ligation(blocks, (&nm, column.matrix.layout()), (&lm, row.matrix.layout()), ring, "|α|")
    }

    /// `|α'|: |L| ⊗ |N| → [A_i'; M_ij']`, balanced over the original ring.
    pub fn row_column_ligation(
        &self,
        rings: (&MatrixRing, &MatrixRing),
        column: &ColumnExcision,
        row: &RowExcision,
    ) -> Result<Ligation> {
        let t = self.t;
        let (ring, composed_ring) = rings;
        let blocks = self.grid(
            |i, j| self.row_piece(i, j),
            |i, j| self.column_piece(i, j),
            |i, j| self.primed(i, j),
            |i, _, j| Case::of(i == t, false, j == t),
            "α'",
        )?;
        let nm = column.matrix.assemble(ring, composed_ring)?;
        let lm = row.matrix.assemble(composed_ring, ring)?;
        self.factor_ligation(blocks, (&lm, row.matrix.layout()), (&nm, column.matrix.layout()), composed_ring, "|α'|")
    }

    fn factor_ligation(
        &self,
        blocks: Vec<BilinearMap>,
        (left, lx): (&Bimodule, BlockLayout),
        (right, ly): (&Bimodule, BlockLayout),
        target: &MatrixRing,
        name: &str,
    ) -> Result<Ligation> {
        let n = self.n();
        let map = assemble_block_map(self.field(), &lx, &ly, target.layout(), |i, k, j| &blocks[(i * n + k) * n + j]);
        let tensor = TensorSpace::new(left, right)?;
        let factored = tensor.factor(&map).map_err(|e| match e {
            Error::NotBalanced(w) => Error::InvariantViolated(format!("{name} is not balanced: {w}")),
            other => other,
        })?;
        Ok(Ligation { blocks, map, tensor, factored })
    }

    /// Runs every step and verifies the results; a failing report is an
    /// `InvariantViolated` error carrying the full summary.
    pub fn run(&self) -> Result<SurgeryResult> {
        let composed = self.compose()?;
        let column = self.column_excision()?;
        let row = self.row_excision()?;
        let ring = MatrixRing::assemble(&self.g);
        let composed_ring = MatrixRing::assemble(&composed);
        let alpha = self.column_row_ligation((&ring, &composed_ring), &column, &row)?;
        let alpha_prime = self.row_column_ligation((&ring, &composed_ring), &column, &row)?;
        let morita = ClassicalContext::new(
            ring.ring().clone(),
            composed_ring.ring().clone(),
            alpha.tensor.left_factor().clone(),
            alpha.tensor.right_factor().clone(),
            alpha.map.clone(),
            alpha_prime.map.clone(),
        )?;
        let mut report = Report::new();
        report.merge("composed", composed.verify());
        report.merge("column excision", column.matrix.verify(&self.g, &composed)?);
        report.merge("row excision", row.matrix.verify(&composed, &self.g)?);
        report.merge("morita context", morita.verify());
        report.flag("composed blocks unital", composed.blocks_unital());
        if !report.passes() {
            return Err(Error::InvariantViolated(report.summary()));
        }
        Ok(SurgeryResult {
            t: self.t,
            input: self.g.clone(),
            classical: self.c.clone(),
            composed,
            ring,
            composed_ring,
            column,
            row,
            alpha,
            alpha_prime,
            morita,
            report,
        })
    }
}

/// The composition of `c` into `g` at corner `t` (0-based).
pub fn compose(c: &ClassicalContext, g: &GeneralisedContext, t: usize) -> Result<GeneralisedContext> {
    Surgery::new(g, c, t)?.compose()
}

pub fn column_excision(g: &GeneralisedContext, c: &ClassicalContext, t: usize) -> Result<ColumnExcision> {
    Surgery::new(g, c, t)?.column_excision()
}

pub fn row_excision(g: &GeneralisedContext, c: &ClassicalContext, t: usize) -> Result<RowExcision> {
    Surgery::new(g, c, t)?.row_excision()
}

/// Compose, excise, ligate and verify the resulting Morita context.
pub fn corner_replace(g: &GeneralisedContext, c: &ClassicalContext, t: usize) -> Result<SurgeryResult> {
    Surgery::new(g, c, t)?.run()
}

/// Replaces the corner `eRe` of a unital algebra by `S` through `c`, via the
/// two-block Peirce context at `t = 2`.
pub fn corner_replace_idempotent(r: &Algebra, e: &[Scalar], c: &ClassicalContext) -> Result<SurgeryResult> {
    let p = peirce(r, e)?;
    if !c.r().same_ring(p.context.algebra(1)) {
        return Err(Error::CornerMismatch(format!(
            "R (dim {}) is not the corner eRe (dim {}) in its Peirce basis",
            c.r().dim(),
            p.context.algebra(1).dim()
        )));
    }
    corner_replace(&p.context, c, 1)
}
