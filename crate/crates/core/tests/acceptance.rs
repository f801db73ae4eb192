#![allow(clippy::result_large_err)]

mod common;

use std::time::{Duration, Instant};

use common::*;
use morita::algebra::Algebra;
use morita::context::{peirce, ClassicalContext, GeneralisedContext, MatrixRing};
use morita::gallery::{clannish_instance, matrix_units_instance, triangular_instance, GalleryInstance};
use morita::linalg::FieldSpec;
use morita::spec::{canonical_json, SpecBuilder};
use morita::surgery::{certify_equivalence, compose, corner_replace, corner_replace_idempotent};
use morita::tensor::TensorSpace;
use rand::Rng;
use serde_json::{json, Value};

const RANDOM_CONTEXTS: usize = 500;
const SURGERY_CASES: usize = 200;
const TENSOR_PAIRS: usize = 1000;
const TIME_LIMIT: Duration = Duration::from_secs(60);

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn f5() -> FieldSpec {
    FieldSpec::prime(5).unwrap()
}

fn expectation(inst: &GalleryInstance, label: &str) -> bool {
    inst.expectation(label).is_some_and(|e| e.matches())
}

fn randomized_matrix_rings() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut failures = 0;
    let mut per_n = [0; 3];
    for _ in 0..RANDOM_CONTEXTS {
        let f = random_field(&mut r);
        let n = r.gen_range(1..=3);
        let ctx = random_context(&mut r, f, n, 2);
        per_n[n - 1] += 1;
        let ok = MatrixRing::new(ctx.context()).is_ok_and(|m| m.ring().verify().passes());
        failures += usize::from(!ok);
    }
    let elapsed = start.elapsed();
    Outcome::new(
        failures == 0 && elapsed < TIME_LIMIT,
        format!(
            "{RANDOM_CONTEXTS} contexts (n=1,2,3: {per_n:?}), {failures} failures, {:.1}s of {}s",
            elapsed.as_secs_f64(),
            TIME_LIMIT.as_secs()
        ),
    )
}

/// Peirce contexts with a classical context of surjective pairings at a random corner.
fn surgery_corpus() -> Vec<(GeneralisedContext, ClassicalContext, usize)> {
    let mut r = rng(2);
    (0..SURGERY_CASES)
        .map(|_| {
            let f = random_field(&mut r);
            let n = r.gen_range(1..=3);
            let g = random_context(&mut r, f, n, 2).peirce.context;
            let t = r.gen_range(0..n);
            let c = random_surjective_classical(&mut r, g.algebra(t));
            (g, c, t)
        })
        .collect()
}

fn composition(corpus: &[(GeneralisedContext, ClassicalContext, usize)]) -> Outcome {
    let mut failures = 0;
    for (g, c, t) in corpus {
        let ok = compose(c, g, *t).is_ok_and(|h| h.verify().passes() && h.blocks_unital());
        failures += usize::from(!ok);
    }
    Outcome::new(failures == 0, format!("{} compositions, {failures} failures", corpus.len()))
}

fn main_theorem(corpus: &[(GeneralisedContext, ClassicalContext, usize)]) -> Outcome {
    let mut failures = 0;
    for (g, c, t) in corpus {
        let ok = corner_replace(g, c, *t).is_ok_and(|res| {
            res.report.passes() && res.morita.verify().passes() && res.morita.verify_direct().passes()
        });
        failures += usize::from(!ok);
    }
    Outcome::new(failures == 0, format!("{} replacements, {failures} failures", corpus.len()))
}

fn surjectivity_criterion(corpus: &[(GeneralisedContext, ClassicalContext, usize)]) -> Outcome {
    let (mut granted, mut refused, mut wrong) = (0, 0, 0);
    for (g, c, t) in corpus {
        let surjective = c.zeta_surjective() && c.theta_surjective();
        let unital = g.blocks_unital() && c.n_module().is_unital() && c.l_module().is_unital();
        match corner_replace(g, c, *t) {
            Ok(res) if surjective && unital && certify_equivalence(&res).is_ok() => granted += 1,
            _ => wrong += 1,
        }
        let z = zero_pairings(c);
        match corner_replace(g, &z, *t).map(|res| certify_equivalence(&res)) {
            Ok(Err(refusal)) if c.r().dim() > 0 && refusal.reasons.iter().any(|x| x.starts_with("ζ not surjective")) => {
                refused += 1
            }
            _ => wrong += 1,
        }
    }
    Outcome::new(
        wrong == 0,
        format!("{granted} granted with surjective ζ, θ; {refused} refused with ζ = θ = 0; {wrong} wrong"),
    )
}

fn structure_constants(a: &Algebra) -> String {
    let mut b = SpecBuilder::new(a.field());
    let name = b.add_algebra("A", a);
    let doc: Value = serde_json::from_str(&b.finish().to_json_string()).unwrap();
    canonical_json(&doc["algebras"][&name]["mul"])
}

fn idempotent_corner() -> Outcome {
    let f = f5();
    let r = Algebra::upper_triangular(f, 2).unwrap();
    let e = f.unit_vector(3, 2);
    let p = peirce(&r, &e).unwrap();
    let c = ClassicalContext::matrix_context(p.context.algebra(1).clone(), 2).unwrap();
    let res = corner_replace_idempotent(&r, &e, &c).unwrap();
    let dim = res.composed_ring.dim();
    let granted = certify_equivalence(&res).is_ok();
    let ring = MatrixRing::new(&p.context).unwrap();
    let moved = r.transport(&p.bijection()).unwrap();
    let identical = structure_constants(&moved) == structure_constants(ring.ring());
    Outcome::new(
        dim == 7 && granted && identical,
        format!("composed dim {dim}, certificate granted: {granted}, reassembly byte-identical: {identical}"),
    )
}

fn triangular() -> Outcome {
    let inst = triangular_instance(f5()).unwrap();
    let l_m = inst.expectation("dim L⊗M").map(|e| e.actual.clone()).unwrap_or(Value::Null);
    let shape = ["lower-left block", "A1' = S", "A2' = T", "composed pairings zero"].iter().all(|l| expectation(&inst, l));
    Outcome::new(
        inst.passes() && l_m == json!(2) && shape,
        format!("dim L⊗M = {l_m}, composed shape (S,T; L⊗M,0; 0,0): {shape}, all expectations: {}", inst.passes()),
    )
}

fn clannish() -> Outcome {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/clannish_tables.json");
    let fixture: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let mut runs = Vec::new();
    let mut pass = true;
    for p in [5u64, 13] {
        for k in [0, 1] {
            let inst = clannish_instance(p, k).unwrap();
            let tables: Vec<_> = std::iter::once(inst.steps[0].result.input.dims())
                .chain(inst.steps.iter().map(|s| s.result.composed.dims()))
                .collect();
            let matches = json!(tables) == fixture[p.to_string()]["tables"];
            let certified = inst.steps.iter().all(|s| s.certificate.is_ok());
            pass &= matches && certified && inst.passes();
            runs.push(format!("p={p} w{}: table {matches}, certified {certified}", if k == 0 { "−" } else { "+" }));
        }
    }
    Outcome::new(pass, runs.join("; "))
}

fn enough_idempotents() -> Outcome {
    let inst = matrix_units_instance(f5(), 3, 1).unwrap();
    let dim = inst.expectation("reassembled dim").map(|e| e.actual.clone()).unwrap_or(Value::Null);
    let constants = expectation(&inst, "structure constants under the Peirce basis");
    let sums = expectation(&inst, "far-side block sums");
    Outcome::new(
        inst.passes() && dim == json!(9) && constants && sums,
        format!("reassembled dim {dim}, constants match: {constants}, block sums: {sums}, all expectations: {}", inst.passes()),
    )
}

fn tensor_oracle() -> Outcome {
    let mut r = rng(9);
    let mut disagreements = 0;
    let mut histogram = std::collections::BTreeMap::new();
    let mut collapsing = 0;
    for _ in 0..TENSOR_PAIRS {
        let f = random_field(&mut r);
        let (m, n) = random_tensor_pair(&mut r, f, 3);
        let d = TensorSpace::new(&m, &n).unwrap().dim();
        *histogram.entry(d).or_insert(0) += 1;
        collapsing += usize::from(d < m.dim() * n.dim());
        disagreements += usize::from(d != naive_tensor_dim(&m, &n));
    }
    Outcome::new(
        disagreements == 0,
        format!(
            "{TENSOR_PAIRS} pairs, {disagreements} disagreements, {collapsing} with nontrivial relations, tensor dims {histogram:?}"
        ),
    )
}

fn main() {
    let corpus = surgery_corpus();
    let criteria: Vec<Criterion> = vec![
        ("randomized matrix-ring axioms", Box::new(randomized_matrix_rings)),
        ("composition is a unital context", Box::new(|| composition(&corpus))),
        ("corner replacement is a Morita context", Box::new(|| main_theorem(&corpus))),
        ("certificate iff surjective ligations", Box::new(|| surjectivity_criterion(&corpus))),
        ("upper-triangular corner by M2(F5)", Box::new(idempotent_corner)),
        ("triangular instance", Box::new(triangular)),
        ("clannish instance", Box::new(clannish)),
        ("enough idempotents, M3(F5) split 1|2", Box::new(enough_idempotents)),
        ("tensor dimension oracle", Box::new(tensor_oracle)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {verdict} {name}: {} [{:.1}s]", i + 1, out.detail, start.elapsed().as_secs_f64());
        failed += usize::from(!out.pass);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
