use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::bilinear::BilinearMap;
use crate::bimodule::Bimodule;
use crate::context::{ClassicalContext, ContextObject, GeneralisedContext};
use crate::error::{Error, Result};
use crate::linalg::{is_prime, FieldSpec, Matrix, Scalar};
use crate::surgery::corner_replace;
use crate::tensor::TensorSpace;

use super::GalleryInstance;

/// `F = F_p ⊂ L = F(u) ⊂ E = F(v)` with `p ≡ 1 (mod 4)`, `v⁴ = a` for the
/// least non-square `a`, and `u = v²`. `E` has basis `v^i`, `L` has `1, u`.
#[derive(Clone, Debug)]
pub struct ClannishFields {
    pub p: u64,
    pub a: u64,
    /// Primitive fourth root of unity `a^((p-1)/4)`.
    pub zeta: Scalar,
    pub f: Arc<Algebra>,
    pub l: Arc<Algebra>,
    pub e: Arc<Algebra>,
    /// `L[x]/(x² − u)` with basis `1, u, x, ux`.
    pub s: Arc<Algebra>,
    pub f_in_l: Matrix,
    pub f_in_e: Matrix,
    pub l_in_e: Matrix,
    /// `ρ(v) = ζv`, generating `Gal(E/F)`.
    pub rho: Matrix,
    /// `E → L[x]/(x² − u)`, `v ↦ x`.
    pub sigma: Matrix,
}

fn field_algebra(f: FieldSpec, dim: usize, mul: BilinearMap) -> Result<Arc<Algebra>> {
    let one = f.unit_vector(dim, 0);
    Ok(Arc::new(Algebra::new(f, dim, mul, vec![one.clone()])?.with_identity(one)?))
}

impl ClannishFields {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p % 4 != 1 {
            return Err(Error::BadPrime(p));
        }
        let f = FieldSpec::prime(p)?;
        let minus_one = f.from_i64(-1);
        let a = (2..p).find(|&x| f.from_i64(x as i64).pow((p - 1) / 2) == minus_one).expect("non-square exists");
        let a_s = f.from_i64(a as i64);
        let zeta = a_s.pow((p - 1) / 4);
        let e = field_algebra(
            f,
            4,
            BilinearMap::from_fn(f, 4, 4, 4, |i, j| {
                let mut v = f.zeros(4);
                v[(i + j) % 4] = if i + j >= 4 { a_s.clone() } else { f.one() };
                v
            }),
        )?;
        let l = field_algebra(
            f,
            2,
            BilinearMap::from_fn(f, 2, 2, 2, |i, j| {
                let mut v = f.zeros(2);
                v[(i + j) % 2] = if i + j == 2 { a_s.clone() } else { f.one() };
                v
            }),
        )?;
        // u^α x^β at index 2β + α
        let s = field_algebra(
            f,
            4,
            BilinearMap::from_fn(f, 4, 4, 4, |i, j| {
                let (al, be, ga, de) = (i % 2, i / 2, j % 2, j / 2);
                let ue = al + ga + (be + de) / 2;
                let xe = (be + de) % 2;
                let mut v = f.zeros(4);
                v[2 * xe + ue % 2] = a_s.pow((ue / 2) as u64);
                v
            }),
        )?;
        let base = Arc::new(Algebra::base_field(f));
        let f_in_l = Matrix::from_i64(f, 2, 1, &[1, 0]);
        let f_in_e = Matrix::from_i64(f, 4, 1, &[1, 0, 0, 0]);
        let l_in_e = Matrix::from_i64(f, 4, 2, &[1, 0, 0, 0, 0, 1, 0, 0]);
        let mut rho = Matrix::zero(f, 4, 4);
        for i in 0..4 {
            rho.set(i, i, zeta.pow(i as u64));
        }
        let sigma = Matrix::from_i64(f, 4, 4, &[1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1]);
        Ok(ClannishFields { p, a, zeta, f: base, l, e, s, f_in_l, f_in_e, l_in_e, rho, sigma })
    }

    pub fn field(&self) -> FieldSpec {
        self.f.field()
    }

    /// `ρ^k` on `E`.
    pub fn rho_power(&self, k: u32) -> Matrix {
        let f = self.field();
        (0..k % 4).fold(Matrix::identity(f, 4), |acc, _| self.rho.mul(&acc))
    }

    /// `ρ^k` restricted to `L`: the identity for even `k`, `u ↦ −u` for odd `k`.
    pub fn rho_power_on_l(&self, k: u32) -> Matrix {
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        Matrix::from_i64(self.field(), 2, 2, &[1, 0, 0, sign])
    }
}

/// The clannish context over `(L, E, F)` twisted by `θ = ρ^k`, followed by
/// `E ≅ L[x]/(x² − u)` at vertex 2 and `F ∼ M_2(F)` at vertex 3.
pub fn clannish_instance(p: u64, theta_power: u32) -> Result<GalleryInstance> {
    let k = theta_power % 4;
    let fl = ClannishFields::new(p)?;
    let f = fl.field();
    let mut inst = GalleryInstance::new("clannish");
    inst.param("p", p);
    inst.param("a", fl.a);
    inst.param("theta", format!("ρ^{k}"));
    let theta_on_l = if k.is_multiple_of(2) { "identity" } else { "conjugation" };
    inst.param("theta_on_L", theta_on_l);

    let (lf, ef, ff) = (fl.l.clone(), fl.e.clone(), fl.f.clone());
    let id = |n: usize| Matrix::identity(f, n);
    let theta = fl.rho_power(k);
    let theta_l = fl.rho_power_on_l(k);
    inst.expect("ρ is an automorphism of E", true, fl.e.is_isomorphism(&fl.e, &fl.rho));
    inst.expect("ρ has order 4", [false, true], [fl.rho_power(2) == id(4), fl.rho_power(4) == id(4)]);
    inst.expect("θ restricts to L", true, theta.mul(&fl.l_in_e) == fl.l_in_e.mul(&theta_l));
    inst.expect("E ≅ L[x]/(x² − u)", true, fl.e.is_isomorphism(&fl.s, &fl.sigma));

    let l_theta = Bimodule::regular(lf.clone()).restrict(lf.clone(), &id(2), lf.clone(), &theta_l)?;
    let e_le = Bimodule::regular(ef.clone()).restrict(lf.clone(), &fl.l_in_e, ef.clone(), &id(4))?;
    let e_ef = Bimodule::regular(ef.clone()).restrict(ef.clone(), &id(4), ff.clone(), &fl.f_in_e)?;
    let l_fl = Bimodule::regular(lf.clone()).restrict(ff.clone(), &fl.f_in_l, lf.clone(), &id(2))?;
    let f_reg = Bimodule::regular(ff.clone());

    let m12 = TensorSpace::new(&l_theta, &e_le)?.module().clone();
    let t_el = TensorSpace::new(&e_ef, &l_fl)?;
    let sign = if k.is_multiple_of(2) { -1 } else { 1 };
    let w: Vec<Scalar> = t_el
        .project_pure(&f.unit_vector(4, 2), &f.unit_vector(2, 0))
        .iter()
        .zip(t_el.project_pure(&f.unit_vector(4, 0), &f.unit_vector(2, 1)))
        .map(|(x, y)| x.add(&y.mul(&f.from_i64(sign))))
        .collect();
    let (m21, q) = t_el.module().quotient_by(&[w])?;
    inst.param("w", if sign < 0 { "v²⊗1 − 1⊗u" } else { "v²⊗1 + 1⊗u" });
    inst.expect("dim E⊗_F L", 8, t_el.dim());
    inst.expect("dim M21 = E⊗_F L/⟨w⟩", 4, m21.dim());
    let t23 = TensorSpace::new(&e_ef, &f_reg)?;
    let t31 = TensorSpace::new(&f_reg, &l_fl)?;

    // (e⊗f, f'⊗l) ↦ [e·ff' ⊗ l]
    let phi231 = BilinearMap::from_fn(f, t23.dim(), t31.dim(), m21.dim(), |x, y| {
        let (i, a) = t23.rep(x);
        let (b, j) = t31.rep(y);
        let e = e_ef.right_action().eval_right_vec(i, ff.mul().basis(a, b));
        q.project(&t_el.project_right_basis(&e, j))
    });
    let g = GeneralisedContext::new(
        vec![lf, ef.clone(), ff.clone()],
        BTreeMap::from([
            ((0, 1), m12),
            ((1, 0), m21),
            ((1, 2), t23.module().clone()),
            ((2, 0), t31.module().clone()),
        ]),
        BTreeMap::from([((1, 2, 0), phi231)]),
    )?;
    inst.expect("input dims", [[2, 4, 0], [4, 4, 4], [2, 0, 1]], g.dims());
    let c_e = ClassicalContext::from_isomorphism(ef, fl.s.clone(), &fl.sigma)?;
    inst.input("clannish", ContextObject::Generalised(g.clone()));
    inst.input("E~L[x]/(x2-u)", ContextObject::Classical(c_e.clone()));

    let r1 = corner_replace(&g, &c_e, 1)?;
    let mid = r1.composed.clone();
    let mid_dim = r1.composed_ring.dim();
    inst.expect("dims after E ≅ L[x]/(x² − u)", [[2, 4, 0], [4, 4, 4], [2, 0, 1]], mid.dims());
    inst.expect("vertex 2 is L[x]/(x² − u)", true, mid.algebra(1).same_ring(&fl.s));
    let c_f = ClassicalContext::matrix_context(ff, 2)?;
    inst.input("F~M2F", ContextObject::Classical(c_f.clone()));
    let ring_dim = r1.ring.dim();
    inst.step("E ≅ L[x]/(x² − u) at t=2", r1);

    let r2 = corner_replace(&mid, &c_f, 2)?;
    inst.expect("dims after F ∼ M2(F)", [[2, 4, 0], [4, 4, 8], [4, 0, 4]], r2.composed.dims());
    inst.expect("matrix ring dims", [21, 21, 30], [ring_dim, mid_dim, r2.composed_ring.dim()]);
    inst.step("F ∼ M2(F) at t=3", r2);
    Ok(inst)
}
