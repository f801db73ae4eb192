use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::bilinear::BilinearMap;
use crate::linalg::Scalar;

/// Witnesses kept per report section; the failure count is always exact.
pub const WITNESS_CAP: usize = 100;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Section {
    pub checked: u64,
    pub failures: u64,
    pub witnesses: Vec<String>,
}

impl Section {
    pub fn passes(&self) -> bool {
        self.failures == 0
    }

    pub fn fail(&mut self, witness: impl FnOnce() -> String) {
        self.failures += 1;
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(witness());
        }
    }

    pub fn absorb(&mut self, other: Section) {
        self.checked += other.checked;
        self.failures += other.failures;
        for w in other.witnesses {
            if self.witnesses.len() == WITNESS_CAP {
                break;
            }
            self.witnesses.push(w);
        }
    }
}

/// Exhaustive verification outcome, one section per family of checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub sections: BTreeMap<String, Section>,
    /// Informational booleans that do not affect `passes`.
    pub flags: BTreeMap<String, bool>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn passes(&self) -> bool {
        self.sections.values().all(Section::passes)
    }

    pub fn section(&mut self, name: &str) -> &mut Section {
        self.sections.entry(name.to_string()).or_default()
    }

    pub fn get(&self, name: &str) -> Option<&Section> {
        self.sections.get(name)
    }

    pub fn add_check(&mut self, name: &str, check: Check, describe: impl Fn(usize, usize, usize) -> String) {
        let s = self.section(name);
        s.checked += check.checked;
        s.failures += check.failures;
        for &(a, b, c) in &check.witnesses {
            if s.witnesses.len() < WITNESS_CAP {
                s.witnesses.push(describe(a, b, c));
            }
        }
    }

    /// Copies `other`'s sections in under `prefix/`.
    pub fn merge(&mut self, prefix: &str, other: Report) {
        for (k, v) in other.sections {
            self.section(&format!("{prefix}/{k}")).absorb(v);
        }
        for (k, v) in other.flags {
            self.flags.insert(format!("{prefix}/{k}"), v);
        }
        for n in other.notes {
            self.notes.push(format!("{prefix}: {n}"));
        }
    }

    pub fn flag(&mut self, name: &str, value: bool) {
        self.flags.insert(name.to_string(), value);
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    pub fn failing_sections(&self) -> Vec<String> {
        self.sections.iter().filter(|(_, s)| !s.passes()).map(|(k, _)| k.clone()).collect()
    }

    pub fn to_json(&self) -> Value {
        let sections: serde_json::Map<String, Value> = self
            .sections
            .iter()
            .map(|(k, s)| {
                let mut v = serde_json::to_value(s).expect("section serializes");
                v["pass"] = Value::Bool(s.passes());
                (k.clone(), v)
            })
            .collect();
        serde_json::json!({
            "pass": self.passes(),
            "sections": sections,
            "flags": self.flags,
            "notes": self.notes,
        })
    }

    /// First witness of the first failing section, for error messages.
    pub fn summary(&self) -> String {
        match self.sections.iter().find(|(_, s)| !s.passes()) {
            None => "all checks pass".into(),
            Some((k, s)) => format!(
                "{k}: {} failure(s){}",
                s.failures,
                s.witnesses.first().map(|w| format!(", first at {w}")).unwrap_or_default()
            ),
        }
    }
}

/// Outcome of one exhaustive sweep over basis triples.
#[derive(Clone, Debug, Default)]
pub struct Check {
    pub checked: u64,
    pub failures: u64,
    pub witnesses: Vec<(usize, usize, usize)>,
}

impl Check {
    pub fn passes(&self) -> bool {
        self.failures == 0
    }

    fn merge(mut self, other: Check) -> Check {
        self.checked += other.checked;
        self.failures += other.failures;
        let room = WITNESS_CAP.saturating_sub(self.witnesses.len());
        self.witnesses.extend(other.witnesses.into_iter().take(room));
        self
    }
}

/// Compares `then(first(x, y), z)` with `outer(x, inner(y, z))` on every
/// basis triple, where `first: X×Y→P`, `then: P×Z→W`, `inner: Y×Z→Q`, `outer: X×Q→W`.
pub fn assoc_check(first: &BilinearMap, then: &BilinearMap, inner: &BilinearMap, outer: &BilinearMap) -> Check {
    let (nx, ny, np) = first.shape();
    let (np2, nz, nw) = then.shape();
    let (ny2, nz2, nq) = inner.shape();
    let (nx2, nq2, nw2) = outer.shape();
    assert!(
        np == np2 && ny == ny2 && nz == nz2 && nx == nx2 && nq == nq2 && nw == nw2,
        "assoc_check shapes"
    );
    let yz: Vec<Vec<Scalar>> = (0..ny * nz).map(|c| inner.basis(c / nz, c % nz).to_vec()).collect();
    (0..nx)
        .into_par_iter()
        .map(|x| {
            let mut c = Check::default();
            for y in 0..ny {
                let xy = first.basis(x, y);
                for z in 0..nz {
                    let lhs = then.eval_left_vec(xy, z);
                    let rhs = outer.eval_right_vec(x, &yz[y * nz + z]);
                    c.checked += 1;
                    if lhs != rhs {
                        c.failures += 1;
                        if c.witnesses.len() < WITNESS_CAP {
                            c.witnesses.push((x, y, z));
                        }
                    }
                }
            }
            c
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Check::default(), Check::merge)
}

/// Compares two bilinear maps of the same shape on every basis pair.
pub fn equal_check(a: &BilinearMap, b: &BilinearMap) -> Check {
    assert_eq!(a.shape(), b.shape(), "equal_check shapes");
    let mut c = Check::default();
    for i in 0..a.left_dim() {
        for j in 0..a.right_dim() {
            c.checked += 1;
            if a.basis(i, j) != b.basis(i, j) {
                c.failures += 1;
                if c.witnesses.len() < WITNESS_CAP {
                    c.witnesses.push((i, j, 0));
                }
            }
        }
    }
    c
}
