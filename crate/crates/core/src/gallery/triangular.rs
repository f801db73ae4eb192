use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::bimodule::Bimodule;
use crate::context::{ClassicalContext, ContextObject, GeneralisedContext};
use crate::error::Result;
use crate::linalg::FieldSpec;
use crate::surgery::corner_replace;

use super::GalleryInstance;

/// `(R, T; M, 0; 0, 0)` with `R = T = M` the base field, replacing `R` by
/// `S = M_2(R)` through the row/column context.
pub fn triangular_instance(f: FieldSpec) -> Result<GalleryInstance> {
    let mut inst = GalleryInstance::new("triangular");
    inst.param("field", f.to_string());
    let r = Arc::new(Algebra::base_field(f));
    let t = Arc::new(Algebra::base_field(f));
    let m = Bimodule::regular(r.clone());
    let g = GeneralisedContext::new(vec![r.clone(), t.clone()], BTreeMap::from([((0, 1), m)]), BTreeMap::new())?;
    let c = ClassicalContext::matrix_context(r, 2)?;
    inst.input("triangular", ContextObject::Generalised(g.clone()));
    inst.input("R~M2R", ContextObject::Classical(c.clone()));

    let res = corner_replace(&g, &c, 0)?;
    let h = &res.composed;
    let l_dim = c.l_module().dim();
    inst.expect("input dims", [[1, 1], [0, 1]], g.dims());
    inst.expect("composed dims", [[4, l_dim], [0, 1]], h.dims());
    inst.expect("dim L⊗M", 2, h.block(0, 1).dim());
    inst.expect("lower-left block", 0, h.block(1, 0).dim());
    inst.expect("A1' = S", true, h.algebra(0).same_ring(c.s()));
    inst.expect("A2' = T", true, h.algebra(1).same_ring(&t));
    inst.expect("composed pairings zero", true, h.map(0, 1, 0).is_zero() && h.map(1, 0, 1).is_zero());
    inst.expect("matrix ring dims", [3, 7], [res.ring.dim(), res.composed_ring.dim()]);
    inst.step("R ~ M2(R) at t=1", res);
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangular_matches() {
        let inst = triangular_instance(FieldSpec::prime(5).unwrap()).unwrap();
        assert!(inst.passes(), "{}", inst.table());
    }

    #[test]
    fn triangular_over_rationals() {
        let inst = triangular_instance(FieldSpec::Rationals).unwrap();
        assert!(inst.passes(), "{}", inst.table());
    }
}
