mod common;

use std::sync::Arc;

use common::*;
use morita::algebra::Algebra;
use morita::bimodule::Bimodule;
use morita::context::{peirce, ClassicalContext, MatrixRing};
use morita::linalg::{quotient_basis, Matrix};
use morita::spec::{SpecBuilder, Workspace};
use morita::surgery::{certify_equivalence, compose, corner_replace, corner_replace_idempotent};
use morita::tensor::TensorSpace;
use proptest::prelude::*;
use rand::Rng;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cases(128))]

    #[test]
    fn rank_plus_nullity_is_width(seed in any::<u64>(), rows in 0usize..6, cols in 0usize..6) {
        let mut r = rng(seed);
        let f = random_field(&mut r);
        let m = random_matrix(&mut r, f, rows, cols);
        let ker = m.kernel_basis();
        prop_assert_eq!(m.rank() + ker.len(), cols);
        for v in &ker {
            prop_assert!(m.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn quotient_projection_and_section(seed in any::<u64>(), rows in 0usize..5, width in 1usize..6) {
        let mut r = rng(seed);
        let f = random_field(&mut r);
        let rel = random_matrix(&mut r, f, rows, width);
        let q = quotient_basis(&rel);
        let (p, s) = (q.projection(), q.section());
        prop_assert_eq!(q.dim(), width - rel.rank());
        prop_assert_eq!(p.rank(), q.dim());
        prop_assert_eq!(s.rank(), q.dim());
        prop_assert_eq!(p.mul(&s), Matrix::identity(f, q.dim()));
        for row in rel.row_vectors() {
            prop_assert!(p.apply(&row).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn echelon_forms_are_canonical(seed in any::<u64>(), rows in 1usize..5, width in 1usize..5) {
        let mut r = rng(seed);
        let f = random_field(&mut r);
        let m = random_matrix(&mut r, f, rows, width);
        let g = random_invertible(&mut r, f, rows);
        prop_assert_eq!(g.mul(&m).rref().to_matrix(), m.rref().to_matrix());
    }

    #[test]
    fn tensor_dimension_matches_oracle(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_field(&mut r);
        let (m, n) = random_tensor_pair(&mut r, f, 3);
        let t = TensorSpace::new(&m, &n).unwrap();
        prop_assert_eq!(t.dim(), naive_tensor_dim(&m, &n));
        prop_assert!(t.module().verify().passes());
        prop_assert_eq!(t.dim(), t.ambient_dim() - t.relation_rank());
    }
}

proptest! {
    #![proptest_config(cases(48))]

    #[test]
    fn random_algebras_verify(seed in any::<u64>(), m in 1usize..4) {
        let mut r = rng(seed);
        let f = random_field(&mut r);
        let a = random_algebra(&mut r, f, m);
        prop_assert!(a.verify().passes());
        let sum = morita::algebra::sum_vectors(f, a.dim(), a.idempotents());
        prop_assert_eq!(a.find_identity(), Some(sum));
        let reg = Bimodule::regular(Arc::new(a));
        prop_assert!(reg.is_left_unital() && reg.is_right_unital());
    }

    #[test]
    fn bimodule_verdict_survives_basis_permutations(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_field(&mut r);
        let ctx = random_context(&mut r, f, 2, 2);
        let m = ctx.context().block(0, 1).clone();
        let (a, b) = (m.left_algebra().clone(), m.right_algebra().clone());
        let (p, q) = (random_permutation(&mut r, f, a.dim()), random_permutation(&mut r, f, b.dim()));
        let a2 = Arc::new(a.transport(&p).unwrap());
        let b2 = Arc::new(b.transport(&q).unwrap());
        let m2 = m.restrict(a2, &p, b2, &q).unwrap();
        prop_assert_eq!(m2.verify().passes(), m.verify().passes());
        prop_assert!(m2.verify().passes());
    }

    #[test]
    fn tensor_with_regular_is_the_module(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_field(&mut r);
        let (m, _) = random_tensor_pair(&mut r, f, 3);
        let a = Bimodule::regular(m.right_algebra().clone());
        let t = TensorSpace::new(&m, &a).unwrap();
        prop_assert_eq!(t.dim(), m.dim());
        let rho = t.factor(m.right_action()).unwrap();
        prop_assert_eq!(rho.rank(), m.dim());
    }

    #[test]
    fn factoring_recovers_balanced_maps(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_field(&mut r);
        let (m, n) = random_tensor_pair(&mut r, f, 3);
        let t = TensorSpace::new(&m, &n).unwrap();
        let out = r.gen_range(0..4);
        let beta = t.universal().then(&random_matrix(&mut r, f, out, t.dim()));
        let phi = t.factor(&beta).unwrap();
        for i in 0..m.dim() {
            for j in 0..n.dim() {
                let pure = t.project_pure(&f.unit_vector(m.dim(), i), &f.unit_vector(n.dim(), j));
                prop_assert_eq!(phi.apply(&pure), beta.basis(i, j).to_vec());
            }
        }
    }

    #[test]
    fn zero_factor_gives_zero_tensor(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_field(&mut r);
        let (m, _) = random_tensor_pair(&mut r, f, 3);
        let a = m.right_algebra().clone();
        let z = Bimodule::zero(a.clone(), a).unwrap();
        prop_assert_eq!(TensorSpace::new(&m, &z).unwrap().dim(), 0);
    }

    #[test]
    fn matrix_rings_of_random_contexts(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let f = random_field(&mut r);
        let ctx = random_context(&mut r, f, n, 2);
        let g = ctx.context();
        prop_assert!(g.verify().passes());
        let ring = MatrixRing::new(g).unwrap();
        prop_assert!(ring.ring().verify().passes());
        prop_assert_eq!(ring.dim(), ctx.algebra.dim());
        prop_assert_eq!(&ring.extract_context().unwrap(), g);
        let idem = ring.ring().idempotents();
        for (x, e) in idem.iter().enumerate() {
            for (y, e2) in idem.iter().enumerate() {
                let p = ring.ring().multiply(e, e2);
                if x == y {
                    prop_assert_eq!(&p, e);
                } else {
                    prop_assert!(p.iter().all(|v| v.is_zero()));
                }
            }
        }
        let bij = ctx.peirce.bijection();
        let moved = ctx.algebra.transport(&bij).unwrap();
        prop_assert_eq!(moved.mul(), ring.ring().mul());
    }

    #[test]
    fn two_block_verification_agrees_with_direct_axioms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_field(&mut r);
        let ctx = random_context(&mut r, f, 2, 2);
        let c = ClassicalContext::from_generalised(ctx.context()).unwrap();
        prop_assert_eq!(c.verify().passes(), c.verify_direct().passes());
        prop_assert!(c.verify_direct().passes());
    }

    #[test]
    fn spec_round_trip(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let f = random_field(&mut r);
        let ctx = random_context(&mut r, f, n, 2);
        let obj = morita::context::ContextObject::Generalised(ctx.context().clone());
        let mut b = SpecBuilder::new(f);
        let name = b.add_context("G", &obj);
        let text = b.finish().to_json_string();
        let ws = Workspace::load(&text).unwrap();
        prop_assert_eq!(&ws.generalised(&name).unwrap(), ctx.context());
        prop_assert_eq!(ws.to_spec().to_json_string(), text);
    }
}

proptest! {
    #![proptest_config(cases(32))]

    #[test]
    fn corner_replacement_invariants(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let f = random_field(&mut r);
        let ctx = random_context(&mut r, f, n, 2);
        let g = ctx.context();
        let t = r.gen_range(0..n);
        let c = random_surjective_classical(&mut r, g.algebra(t));
        let h = compose(&c, g, t).unwrap();
        prop_assert!(h.verify().passes());
        prop_assert!(h.blocks_unital());
        let res = corner_replace(g, &c, t).unwrap();
        prop_assert!(res.report.passes());
        prop_assert!(res.column.matrix.verify(g, &res.composed).unwrap().passes());
        prop_assert!(res.row.matrix.verify(&res.composed, g).unwrap().passes());
        prop_assert!(res.morita.verify().passes());
        prop_assert!(res.morita.verify_direct().passes());
        prop_assert!(res.alpha.is_surjective());
        prop_assert!(res.alpha_prime.is_surjective());
        prop_assert!(certify_equivalence(&res).is_ok());
    }

    #[test]
    fn zero_pairings_are_never_certified_on_one_block(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_field(&mut r);
        let m = r.gen_range(1..3);
        let a = Arc::new(random_algebra(&mut r, f, m));
        let g = morita::context::GeneralisedContext::single(a.clone());
        let c = zero_pairings(&random_surjective_classical(&mut r, &a));
        let res = corner_replace(&g, &c, 0).unwrap();
        let refusal = certify_equivalence(&res).unwrap_err();
        prop_assert!(refusal.to_string().contains("ζ not surjective"));
    }

    #[test]
    fn identity_replacement_at_an_idempotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_field(&mut r);
        let m = r.gen_range(2..4);
        let a: Algebra = random_algebra(&mut r, f, m);
        let e = a.idempotents()[r.gen_range(0..a.idempotents().len())].clone();
        let p = peirce(&a, &e).unwrap();
        let c = ClassicalContext::identity(p.context.algebra(1).clone());
        let res = corner_replace_idempotent(&a, &e, &c).unwrap();
        let phi = p.bijection().mul(&res.collapse_identity().unwrap());
        prop_assert!(res.composed_ring.ring().is_isomorphism(&a, &phi));
    }
}
