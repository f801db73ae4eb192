use super::*;
use crate::gallery::{self, GalleryOptions};

const M2F5: &str = r#"{
  "version": "1",
  "field": "F_5",
  "algebras": {
    "K": {"dim": 1, "mul": [[0, 0, 0, "1"]], "idempotents": [["1"]]},
    "M2": {
      "dim": 4,
      "mul": [
        [0, 0, 0, "1"], [0, 1, 1, "1"], [1, 2, 0, "1"], [1, 3, 1, "1"],
        [2, 0, 2, "1"], [2, 1, 3, "6"], [3, 2, 2, "1"], [3, 3, 3, "1"]
      ],
      "idempotents": [["1", "0", "0", "0"], ["0", "0", "0", "1"]]
    }
  },
  "bimodules": {
    "Row": {
      "left": "K", "right": "M2", "dim": 2,
      "left_action": [[0, 0, 0, "1"], [0, 1, 1, "1"]],
      "right_action": [[0, 0, 0, "1"], [0, 1, 1, "1"], [1, 2, 0, "1"], [1, 3, 1, "1"]]
    }
  }
}"#;

#[test]
fn reads_and_normalizes_residues() {
    let w = Workspace::load(M2F5).unwrap();
    let m2 = &w.algebras["M2"];
    assert!(m2.same_ring(&Algebra::matrix_algebra(FieldSpec::prime(5).unwrap(), 2).unwrap()));
    assert!(m2.verify().passes());
    assert!(w.bimodules["Row"].verify().passes());
}

#[test]
fn bad_scalar_reports_position() {
    let text = M2F5.replace("[2, 1, 3, \"6\"]", "[2, 1, 3, \"six\"]");
    match SpecFile::parse(&text) {
        Err(Error::Parse { line, column, message }) => {
            assert_eq!(line, 10);
            assert!(column > 0);
            assert!(message.contains("six"), "{message}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn syntax_errors_report_position() {
    let text = "{\n  \"version\": \"1\",\n  \"field\": \"F_5\",,\n}";
    assert!(matches!(SpecFile::parse(text), Err(Error::Parse { line: 3, .. })));
}

#[test]
fn field_and_version_are_checked() {
    let bad_field = M2F5.replace("\"F_5\"", "\"F_6\"");
    assert!(matches!(SpecFile::parse(&bad_field), Err(Error::Parse { line: 3, .. })));
    let bad_version = M2F5.replace("\"version\": \"1\"", "\"version\": \"9\"");
    assert!(matches!(SpecFile::parse(&bad_version), Err(Error::Parse { .. })));
    assert_eq!(parse_field("GF(7)").unwrap(), FieldSpec::prime(7).unwrap());
    assert_eq!(parse_field("Q").unwrap(), FieldSpec::Rationals);
}

#[test]
fn rationals_parse_fractions() {
    let text = r#"{"version": "1", "field": "Q", "algebras": {"K": {"dim": 1, "mul": [[0, 0, 0, "2/2"]]}}}"#;
    let w = Workspace::load(text).unwrap();
    assert!(w.algebras["K"].same_ring(&Algebra::base_field(FieldSpec::Rationals)));
}

#[test]
fn unresolved_names() {
    let text = M2F5.replace("\"right\": \"M2\"", "\"right\": \"M3\"");
    match Workspace::load(&text) {
        Err(Error::UnresolvedReference(m)) => assert!(m.contains("M3") && m.contains("Row")),
        other => panic!("{other:?}"),
    }
    let w = Workspace::load(M2F5).unwrap();
    assert!(matches!(w.get("nothing"), Err(Error::UnresolvedReference(_))));
}

#[test]
fn out_of_range_and_duplicate_entries() {
    let text = M2F5.replace("[3, 3, 3, \"1\"]", "[3, 3, 4, \"1\"]");
    assert!(matches!(Workspace::load(&text), Err(Error::MalformedInput(_))));
    let text = M2F5.replace("[3, 3, 3, \"1\"]", "[0, 0, 0, \"1\"]");
    assert!(matches!(Workspace::load(&text), Err(Error::MalformedInput(_))));
}

#[test]
fn text_round_trip() {
    let s = SpecFile::parse(M2F5).unwrap();
    let again = SpecFile::parse(&s.to_json_string()).unwrap();
    assert_eq!(s, again);
    assert_eq!(s.to_json_string(), again.to_json_string());
    let w = s.resolve().unwrap();
    assert_eq!(w.to_spec(), s);
}

#[test]
fn gallery_inputs_round_trip() {
    for name in gallery::NAMES {
        if name == "clannish" {
            continue;
        }
        let inst = gallery::run(name, &GalleryOptions::default()).unwrap();
        let f = inst.inputs[0].1.field();
        let mut b = SpecBuilder::new(f);
        for (n, c) in &inst.inputs {
            b.add_context(n, c);
        }
        let spec = b.finish();
        let text = spec.to_json_string();
        let w = Workspace::load(&text).unwrap();
        for (n, c) in &inst.inputs {
            assert_eq!(&w.contexts[n], c, "{name}: {n}");
        }
        assert_eq!(SpecFile::parse(&text).unwrap(), spec);
    }
}
