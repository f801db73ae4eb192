use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::bilinear::BilinearMap;
use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::verify::{assoc_check, Report};

use super::GeneralisedContext;

/// `(R, S; N, L; ζ, θ)` with `N` an `R`-`S`-bimodule, `L` an `S`-`R`-bimodule,
/// `ζ: N × L → R` and `θ: L × N → S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalContext {
    r: Arc<Algebra>,
    s: Arc<Algebra>,
    n: Bimodule,
    l: Bimodule,
    zeta: BilinearMap,
    theta: BilinearMap,
}

impl ClassicalContext {
    pub fn new(
        r: Arc<Algebra>,
        s: Arc<Algebra>,
        n: Bimodule,
        l: Bimodule,
        zeta: BilinearMap,
        theta: BilinearMap,
    ) -> Result<Self> {
        if !n.left_algebra().same_ring(&r) || !n.right_algebra().same_ring(&s) {
            return Err(Error::AlgebraMismatch("N must be an R-S-bimodule".into()));
        }
        if !l.left_algebra().same_ring(&s) || !l.right_algebra().same_ring(&r) {
            return Err(Error::AlgebraMismatch("L must be an S-R-bimodule".into()));
        }
        if zeta.shape() != (n.dim(), l.dim(), r.dim()) {
            return Err(Error::MalformedInput(format!("ζ has shape {:?}", zeta.shape())));
        }
        if theta.shape() != (l.dim(), n.dim(), s.dim()) {
            return Err(Error::MalformedInput(format!("θ has shape {:?}", theta.shape())));
        }
        Ok(ClassicalContext { r, s, n, l, zeta, theta })
    }

    /// `(R, R; R, R; μ, μ)`.
    pub fn identity(r: Arc<Algebra>) -> Self {
        let reg = Bimodule::regular(r.clone());
        let mu = r.mul().clone();
        ClassicalContext { s: r.clone(), r, n: reg.clone(), l: reg, zeta: mu.clone(), theta: mu }
    }

    /// The identity-shaped context of a ring isomorphism `σ: R → S`
    /// (a `dim(S) × dim(R)` matrix): `N = L = S` with `R` acting through `σ`,
    /// `ζ(n, l) = σ⁻¹(nl)` and `θ(l, n) = ln`.
    pub fn from_isomorphism(r: Arc<Algebra>, s: Arc<Algebra>, sigma: &Matrix) -> Result<Self> {
        if !r.is_isomorphism(&s, sigma) {
            return Err(Error::MalformedInput("σ is not a ring isomorphism R → S".into()));
        }
        let inv = sigma.inverse().expect("isomorphism is invertible");
        let reg = Bimodule::regular(s.clone());
        let id = Matrix::identity(s.field(), s.dim());
        let n = reg.restrict(r.clone(), sigma, s.clone(), &id)?;
        let l = reg.restrict(s.clone(), &id, r.clone(), sigma)?;
        let zeta = s.mul().then(&inv);
        let theta = s.mul().clone();
        ClassicalContext::new(r, s, n, l, zeta, theta)
    }

    /// `(R, M_k(R); R^{1×k}, R^{k×1}; ζ, θ)` with `ζ(n, l) = Σ n_v l_v` and
    /// `θ(l, n) = (l_u n_v)`. `M_k(R)` has basis index `(u*k + v)*dim(R) + a`,
    /// so its `e_11` corner has exactly `R`'s basis.
    pub fn matrix_context(r: Arc<Algebra>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::MalformedInput("matrix size 0".into()));
        }
        let f = r.field();
        let d = r.dim();
        let sd = k * k * d;
        let smul = BilinearMap::from_fn(f, sd, sd, sd, |x, y| {
            let (ux, a) = (x / d, x % d);
            let (uy, b) = (y / d, y % d);
            let (p, q) = (ux / k, ux % k);
            let (q2, w) = (uy / k, uy % k);
            let mut out = f.zeros(sd);
            if q == q2 {
                let base = (p * k + w) * d;
                out[base..base + d].clone_from_slice(r.mul().basis(a, b));
            }
            out
        });
        let sidem: Vec<Vec<Scalar>> = (0..k)
            .flat_map(|u| {
                r.idempotents().iter().map(move |e| {
                    let mut v = f.zeros(sd);
                    v[(u * k + u) * d..(u * k + u + 1) * d].clone_from_slice(e);
                    v
                })
            })
            .collect();
        let s = Arc::new(Algebra::new(f, sd, smul, sidem)?);
        let nd = k * d;
        // N: rows, index v*d + a.
        let n_left = BilinearMap::from_fn(f, d, nd, nd, |a, x| {
            let (v, b) = (x / d, x % d);
            let mut out = f.zeros(nd);
            out[v * d..(v + 1) * d].clone_from_slice(r.mul().basis(a, b));
            out
        });
        let n_right = BilinearMap::from_fn(f, nd, sd, nd, |x, y| {
            let (v, a) = (x / d, x % d);
            let (uy, b) = (y / d, y % d);
            let (p, w) = (uy / k, uy % k);
            let mut out = f.zeros(nd);
            if p == v {
                out[w * d..(w + 1) * d].clone_from_slice(r.mul().basis(a, b));
            }
            out
        });
        // L: columns, index u*d + a.
        let l_left = BilinearMap::from_fn(f, sd, nd, nd, |y, x| {
            let (uy, b) = (y / d, y % d);
            let (p, q) = (uy / k, uy % k);
            let (u, a) = (x / d, x % d);
            let mut out = f.zeros(nd);
            if q == u {
                out[p * d..(p + 1) * d].clone_from_slice(r.mul().basis(b, a));
            }
            out
        });
        let l_right = BilinearMap::from_fn(f, nd, d, nd, |x, a| {
            let (u, b) = (x / d, x % d);
            let mut out = f.zeros(nd);
            out[u * d..(u + 1) * d].clone_from_slice(r.mul().basis(b, a));
            out
        });
        let n = Bimodule::new(r.clone(), s.clone(), nd, n_left, n_right)?;
        let l = Bimodule::new(s.clone(), r.clone(), nd, l_left, l_right)?;
        let zeta = BilinearMap::from_fn(f, nd, nd, d, |x, y| {
            let (v, a) = (x / d, x % d);
            let (u, b) = (y / d, y % d);
            if u == v {
                r.mul().basis(a, b).to_vec()
            } else {
                f.zeros(d)
            }
        });
        let theta = BilinearMap::from_fn(f, nd, nd, sd, |y, x| {
            let (u, a) = (y / d, y % d);
            let (v, b) = (x / d, x % d);
            let mut out = f.zeros(sd);
            let base = (u * k + v) * d;
            out[base..base + d].clone_from_slice(r.mul().basis(a, b));
            out
        });
        ClassicalContext::new(r, s, n, l, zeta, theta)
    }

    pub fn r(&self) -> &Arc<Algebra> {
        &self.r
    }

    pub fn s(&self) -> &Arc<Algebra> {
        &self.s
    }

    pub fn n_module(&self) -> &Bimodule {
        &self.n
    }

    pub fn l_module(&self) -> &Bimodule {
        &self.l
    }

    pub fn zeta(&self) -> &BilinearMap {
        &self.zeta
    }

    pub fn theta(&self) -> &BilinearMap {
        &self.theta
    }

    /// `(S, R; L, N; θ, ζ)`.
    pub fn swap(&self) -> ClassicalContext {
        ClassicalContext {
            r: self.s.clone(),
            s: self.r.clone(),
            n: self.l.clone(),
            l: self.n.clone(),
            zeta: self.theta.clone(),
            theta: self.zeta.clone(),
        }
    }

    /// The 2×2 generalised context with `φ_121 = ζ`, `φ_212 = θ`.
    pub fn to_generalised(&self) -> GeneralisedContext {
        let maps = BTreeMap::from([((0, 1, 0), self.zeta.clone()), ((1, 0, 1), self.theta.clone())]);
        GeneralisedContext::new(
            vec![self.r.clone(), self.s.clone()],
            BTreeMap::from([((0, 1), self.n.clone()), ((1, 0), self.l.clone())]),
            maps,
        )
        .expect("classical context shapes were checked")
    }

    /// The `(ζ, θ)` face of a 2×2 context.
    pub fn from_generalised(g: &GeneralisedContext) -> Result<Self> {
        if g.n() != 2 {
            return Err(Error::WrongArity { expected: 2, found: g.n() });
        }
        ClassicalContext::new(
            g.algebra(0).clone(),
            g.algebra(1).clone(),
            g.block(0, 1).clone(),
            g.block(1, 0).clone(),
            g.map(0, 1, 0).clone(),
            g.map(1, 0, 1).clone(),
        )
    }

    pub fn verify(&self) -> Report {
        self.to_generalised().verify()
    }

    /// The classical axioms checked directly: rings, modules, the two pairings
    /// balanced and bimodule maps, and the two associativity laws linking them.
    pub fn verify_direct(&self) -> Report {
        let mut rep = Report::new();
        rep.merge("R", self.r.verify());
        rep.merge("S", self.s.verify());
        rep.merge("N", self.n.verify());
        rep.merge("L", self.l.verify());
        let (n, l, z, t) = (&self.n, &self.l, &self.zeta, &self.theta);
        let w = |x: usize, y: usize, v: usize| format!("({x},{y},{v})");
        rep.add_check("ζ balanced", assoc_check(n.right_action(), z, l.left_action(), z), w);
        rep.add_check("θ balanced", assoc_check(l.right_action(), t, n.left_action(), t), w);
        rep.add_check("ζ left linear", assoc_check(n.left_action(), z, z, self.r.mul()), w);
        rep.add_check("ζ right linear", assoc_check(z, self.r.mul(), l.right_action(), z), w);
        rep.add_check("θ left linear", assoc_check(l.left_action(), t, t, self.s.mul()), w);
        rep.add_check("θ right linear", assoc_check(t, self.s.mul(), n.right_action(), t), w);
        rep.add_check("ζ(n,l)n' = nθ(l,n')", assoc_check(z, n.left_action(), t, n.right_action()), w);
        rep.add_check("θ(l,n)l' = lζ(n,l')", assoc_check(t, l.left_action(), z, l.right_action()), w);
        rep
    }

    /// Whether `ζ` is surjective onto `R`.
    pub fn zeta_surjective(&self) -> bool {
        self.zeta.image_rank() == self.r.dim()
    }

    pub fn theta_surjective(&self) -> bool {
        self.theta.image_rank() == self.s.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FieldSpec;

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    #[test]
    fn identity_context_verifies() {
        let c = ClassicalContext::identity(Arc::new(Algebra::matrix_algebra(f5(), 2).unwrap()));
        assert!(c.verify().passes());
        assert!(c.verify_direct().passes());
        assert!(c.zeta_surjective() && c.theta_surjective());
    }

    #[test]
    fn matrix_context_verifies() {
        let f = f5();
        for r in [Algebra::base_field(f), Algebra::upper_triangular(f, 2).unwrap()] {
            let c = ClassicalContext::matrix_context(Arc::new(r), 2).unwrap();
            assert!(c.verify().passes(), "{}", c.verify().summary());
            assert!(c.verify_direct().passes());
            assert!(c.zeta_surjective() && c.theta_surjective());
            assert!(c.s().verify().passes());
        }
    }

    #[test]
    fn matrix_context_over_field_has_m2() {
        let f = f5();
        let c = ClassicalContext::matrix_context(Arc::new(Algebra::base_field(f)), 2).unwrap();
        assert!(c.s().same_ring(&Algebra::matrix_algebra(f, 2).unwrap()));
        let (rows, _, _) = Bimodule::row_vectors(f, 2).unwrap();
        assert_eq!(c.n_module().left_action(), rows.left_action());
        assert_eq!(c.n_module().right_action(), rows.right_action());
    }

    #[test]
    fn isomorphism_context_verifies() {
        let q = FieldSpec::Rationals;
        let a = Arc::new(Algebra::upper_triangular(q, 2).unwrap());
        let p = Matrix::from_i64(q, 3, 3, &[1, 1, 0, 0, 1, 0, 0, 2, 1]);
        let b = Arc::new(a.transport(&p).unwrap());
        let sigma = p.inverse().unwrap();
        let c = ClassicalContext::from_isomorphism(a, b, &sigma).unwrap();
        assert!(c.verify().passes(), "{}", c.verify().summary());
        assert!(c.zeta_surjective() && c.theta_surjective());
    }

    #[test]
    fn swap_verifies_and_face_round_trips() {
        let c = ClassicalContext::matrix_context(Arc::new(Algebra::base_field(f5())), 2).unwrap();
        assert!(c.swap().verify().passes());
        assert_eq!(ClassicalContext::from_generalised(&c.to_generalised()).unwrap(), c);
    }

    #[test]
    fn arity_checked() {
        let a = Arc::new(Algebra::base_field(f5()));
        let g = GeneralisedContext::new(vec![a.clone(), a.clone(), a], BTreeMap::new(), BTreeMap::new()).unwrap();
        assert!(matches!(ClassicalContext::from_generalised(&g), Err(Error::WrongArity { expected: 2, found: 3 })));
    }
}
