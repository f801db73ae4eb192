//! The files under `fixtures/` are generated here; run with `MORITA_BLESS=1`
//! to rewrite them.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use morita::context::{peirce, ClassicalContext, ContextObject, GeneralisedContext};
use morita::gallery::clannish_instance;
use morita::spec::{SpecBuilder, SpecFile, SpecScalar};
use morita::{Algebra, Bimodule, FieldSpec};
use serde_json::json;

fn f5() -> FieldSpec {
    FieldSpec::prime(5).unwrap()
}

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn m2f5() -> SpecFile {
    let f = f5();
    let m2 = Arc::new(Algebra::matrix_algebra(f, 2).unwrap());
    let mut b = SpecBuilder::new(f);
    b.add_algebra("F5", &Algebra::base_field(f));
    b.add_algebra("M2", &m2);
    let c = ClassicalContext::matrix_context(Arc::new(Algebra::base_field(f)), 2).unwrap();
    b.add_bimodule("Rows", c.n_module());
    b.add_bimodule("Columns", c.l_module());
    b.add_context("RowsColumns", &ContextObject::Classical(c));
    b.finish()
}

fn corrupted() -> SpecFile {
    let mut s = m2f5();
    let mul = &mut s.algebras.get_mut("M2").unwrap().mul;
    // e_12 e_21 = 2 e_11
    let e = mul.iter_mut().find(|e| (e.0, e.1, e.2) == (1, 2, 0)).unwrap();
    e.3 = SpecScalar(f5().from_i64(2));
    s
}

fn peirce_m2() -> SpecFile {
    let f = f5();
    let t = Algebra::upper_triangular(f, 2).unwrap();
    let p = peirce(&t, &f.unit_vector(3, 2)).unwrap();
    let c = ClassicalContext::matrix_context(p.context.algebra(1).clone(), 2).unwrap();
    let mut b = SpecBuilder::new(f);
    b.add_algebra("UT2", &t);
    b.add_context("Peirce", &ContextObject::Generalised(p.context));
    b.add_context("RowsColumns", &ContextObject::Classical(c));
    b.finish()
}

fn triangular() -> SpecFile {
    let f = f5();
    let k = Arc::new(Algebra::base_field(f));
    let m = Bimodule::regular(k.clone());
    let g = GeneralisedContext::new(vec![k.clone(), k.clone()], BTreeMap::from([((0, 1), m)]), BTreeMap::new()).unwrap();
    let zero = ClassicalContext::from_generalised(&g).unwrap();
    let c = ClassicalContext::matrix_context(k, 2).unwrap();
    let mut b = SpecBuilder::new(f);
    b.add_algebra("F5", &Algebra::base_field(f));
    b.add_context("Triangular", &ContextObject::Generalised(g));
    b.add_context("ZeroPairing", &ContextObject::Classical(zero));
    b.add_context("RowsColumns", &ContextObject::Classical(c));
    b.finish()
}

const RESIDUE: &str = r#"{
  "version": "1",
  "field": "F_5",
  "algebras": {
    "F25": {
      "dim": 2,
      "mul": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 0, 1, "1"], [1, 1, 0, "7"]],
      "idempotents": [["1", "0"]]
    }
  }
}
"#;

/// Block dimension tables of the clannish instance, derived with the tensor engine.
fn clannish_tables() -> String {
    let mut out = serde_json::Map::new();
    for p in [5u64, 13] {
        let inst = clannish_instance(p, 0).unwrap();
        let tables: Vec<_> = std::iter::once(inst.steps[0].result.input.dims())
            .chain(inst.steps.iter().map(|s| s.result.composed.dims()))
            .collect();
        out.insert(p.to_string(), json!({ "tables": tables }));
    }
    morita::spec::canonical_json(&serde_json::Value::Object(out))
}

fn check(name: &str, text: &str) {
    let p = path(name);
    if std::env::var_os("MORITA_BLESS").is_some() {
        std::fs::create_dir_all(p.parent().unwrap()).unwrap();
        std::fs::write(&p, text).unwrap();
    }
    let on_disk = std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}; rerun with MORITA_BLESS=1", p.display()));
    assert_eq!(on_disk, text, "{name} is stale; rerun with MORITA_BLESS=1");
}

#[test]
fn fixtures_are_current() {
    check("m2f5.json", &m2f5().to_json_string());
    check("corrupted.json", &corrupted().to_json_string());
    check("peirce_m2.json", &peirce_m2().to_json_string());
    check("triangular.json", &triangular().to_json_string());
    check("residue.json", RESIDUE);
    check("clannish_tables.json", &clannish_tables());
}

#[test]
fn fixtures_round_trip() {
    for name in ["m2f5.json", "corrupted.json", "peirce_m2.json", "triangular.json", "residue.json"] {
        let text = std::fs::read_to_string(path(name)).unwrap();
        let s = SpecFile::parse(&text).unwrap();
        let again = SpecFile::parse(&s.to_json_string()).unwrap();
        assert_eq!(s, again, "{name}");
        let w = s.resolve().unwrap();
        assert_eq!(w.to_spec(), s, "{name}");
    }
}
