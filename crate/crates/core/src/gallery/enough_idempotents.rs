use std::sync::Arc;

use crate::algebra::Algebra;
use crate::bilinear::BilinearMap;
use crate::bimodule::Bimodule;
use crate::context::{peirce_grouped, ClassicalContext, ContextObject, GeneralisedContext, MatrixRing};
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Scalar, Subspace};
use crate::surgery::{corner_replace, SurgeryResult};
use crate::tensor::TensorSpace;

use super::GalleryInstance;

/// `M·e` as a left module over `M`'s left algebra (right algebra the base field).
fn right_cut(m: &Bimodule, e: &[Scalar]) -> Result<Bimodule> {
    let f = m.field();
    let vs: Vec<Vec<Scalar>> = (0..m.dim()).map(|x| m.act_right(&f.unit_vector(m.dim(), x), e)).collect();
    let sub = Subspace::spanned_by(f, m.dim(), &vs);
    let d = sub.dim();
    let a = m.left_algebra().clone();
    let left = BilinearMap::from_fn(f, a.dim(), d, d, |x, s| {
        sub.coordinates(&m.left_action().eval_right_vec(x, &sub.basis()[s])).expect("Me is a left submodule")
    });
    let base = Arc::new(Algebra::base_field(f));
    let right = BilinearMap::from_fn(f, d, 1, d, |s, _| f.unit_vector(d, s));
    Bimodule::new(a, base, d, left, right)
}

/// `e·M` as a right module over `M`'s right algebra.
fn left_cut(e: &[Scalar], m: &Bimodule) -> Result<Bimodule> {
    let f = m.field();
    let vs: Vec<Vec<Scalar>> = (0..m.dim()).map(|x| m.act_left(e, &f.unit_vector(m.dim(), x))).collect();
    let sub = Subspace::spanned_by(f, m.dim(), &vs);
    let d = sub.dim();
    let b = m.right_algebra().clone();
    let right = BilinearMap::from_fn(f, d, b.dim(), d, |s, y| {
        sub.coordinates(&m.right_action().eval_left_vec(&sub.basis()[s], y)).expect("eM is a right submodule")
    });
    let base = Arc::new(Algebra::base_field(f));
    let left = BilinearMap::from_fn(f, 1, d, d, |_, s| f.unit_vector(d, s));
    Bimodule::new(base, b, d, left, right)
}

/// For each tensor built by a replacement at `t`, the pair
/// `(dim L⊗M_tj, Σ_e' dim L⊗M_tj·e')` and `(dim M_it⊗N, Σ_e dim e·M_it⊗N)`,
/// summing over the designated idempotents of the far algebra.
fn far_side_sums(g: &GeneralisedContext, c: &ClassicalContext, t: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut whole = Vec::new();
    let mut summed = Vec::new();
    for j in (0..g.n()).filter(|&j| j != t) {
        let m = g.block(t, j);
        whole.push(TensorSpace::new(c.l_module(), m)?.dim());
        let mut s = 0;
        for e in g.algebra(j).idempotents() {
            s += TensorSpace::new(c.l_module(), &right_cut(m, e)?)?.dim();
        }
        summed.push(s);
    }
    for i in (0..g.n()).filter(|&i| i != t) {
        let m = g.block(i, t);
        whole.push(TensorSpace::new(m, c.n_module())?.dim());
        let mut s = 0;
        for e in g.algebra(i).idempotents() {
            s += TensorSpace::new(&left_cut(e, m)?, c.n_module())?.dim();
        }
        summed.push(s);
    }
    Ok((whole, summed))
}

fn replace_both(
    g: &GeneralisedContext,
    make: impl Fn(&Arc<Algebra>) -> Result<ClassicalContext>,
) -> Result<(SurgeryResult, SurgeryResult, Vec<usize>, Vec<usize>)> {
    let c1 = make(g.algebra(0))?;
    let (mut whole, mut summed) = far_side_sums(g, &c1, 0)?;
    let r1 = corner_replace(g, &c1, 0)?;
    let c2 = make(r1.composed.algebra(1))?;
    let (w, s) = far_side_sums(&r1.composed, &c2, 1)?;
    whole.extend(w);
    summed.extend(s);
    let r2 = corner_replace(&r1.composed, &c2, 1)?;
    Ok((r1, r2, whole, summed))
}

/// Splits the designated idempotents of `a` into two sides (`true` for the
/// first), forms the two-block context, and replaces each side in turn:
/// first by identity contexts, then by `2×2` matrix contexts.
pub fn enough_idempotents_instance(a: &Algebra, sides: &[bool]) -> Result<GalleryInstance> {
    let idem = a.idempotents();
    if sides.len() != idem.len() {
        return Err(Error::MalformedInput(format!(
            "partition has {} entries for {} idempotents",
            sides.len(),
            idem.len()
        )));
    }
    let group = |s: bool| -> Vec<Vec<Scalar>> {
        idem.iter().zip(sides).filter(|(_, &x)| x == s).map(|(e, _)| e.clone()).collect()
    };
    let groups = [group(true), group(false)];
    if groups.iter().any(Vec::is_empty) {
        return Err(Error::IncompletePartition);
    }
    let mut inst = GalleryInstance::new("enough-idempotents");
    inst.param("field", a.field().to_string());
    inst.param("dim", a.dim());
    inst.param("sides", sides.iter().map(|&s| if s { "+" } else { "-" }).collect::<String>());

    let p = peirce_grouped(a, &groups)?;
    let g = p.context.clone();
    inst.input("peirce", ContextObject::Generalised(g.clone()));
    let d: Vec<Vec<usize>> = (0..2)
        .map(|i| {
            (0..2)
                .map(|j| {
                    groups[i].iter().flat_map(|e| groups[j].iter().map(move |e2| a.sandwich(e, e2).dim())).sum()
                })
                .collect()
        })
        .collect();
    inst.expect("block dims (Σ e·a·e')", &d, g.dims());
    let ring = MatrixRing::new(&g)?;
    inst.expect("reassembled dim", a.dim(), ring.dim());
    let bij = p.bijection();
    inst.expect("structure constants under the Peirce basis", true, a.transport(&bij)?.mul() == ring.ring().mul());

    let (r1, r2, _, _) = replace_both(&g, |x| Ok(ClassicalContext::identity(x.clone())))?;
    let phi = bij.mul(&r1.collapse_identity()?).mul(&r2.collapse_identity()?);
    inst.expect("identity replacements ≅ a", true, r2.composed_ring.ring().is_isomorphism(a, &phi));
    inst.step("identity at t=1", r1);
    inst.step("identity at t=2", r2);

    let (r1, r2, whole, summed) = replace_both(&g, |x| ClassicalContext::matrix_context(x.clone(), 2))?;
    let scaled: Vec<Vec<usize>> = d.iter().map(|r| r.iter().map(|x| 4 * x).collect()).collect();
    inst.expect("dims after both M2 replacements", scaled, r2.composed.dims());
    inst.expect("matrix ring dims", [a.dim(), 4 * a.dim()], [r1.ring.dim(), r2.composed_ring.dim()]);
    inst.expect("far-side block sums", whole, summed);
    inst.step("M2 at t=1", r1);
    inst.step("M2 at t=2", r2);
    Ok(inst)
}

/// `M_k(F)` with `e_11..e_ss` on the first side and the rest on the second.
pub fn matrix_units_instance(f: FieldSpec, k: usize, split: usize) -> Result<GalleryInstance> {
    if split == 0 || split >= k {
        return Err(Error::IncompletePartition);
    }
    let a = Algebra::matrix_algebra(f, k)?;
    let sides: Vec<bool> = (0..k).map(|i| i < split).collect();
    let mut inst = enough_idempotents_instance(&a, &sides)?;
    inst.param("k", k);
    inst.param("split", split);
    let (s, r) = (split, k - split);
    let actual = inst.steps[0].result.input.dims();
    inst.expect("block dims (matrix units)", [[s * s, s * r], [r * s, r * r]], actual);
    Ok(inst)
}
