use std::collections::BTreeMap;

use crate::algebra::Algebra;
use crate::bilinear::BilinearMap;
use crate::bimodule::Bimodule;
use crate::context::{default_map, ContextObject};
use crate::linalg::{FieldSpec, Scalar};

use super::{vertex_key_string, AlgebraSpec, BimoduleSpec, ContextSpec, Entry, SpecFile, SpecScalar};

fn entries(m: &BilinearMap) -> Vec<Entry> {
    m.sparse_entries().into_iter().map(|(i, j, k, v)| (i, j, k, SpecScalar(v))).collect()
}

fn vector(v: &[Scalar]) -> Vec<SpecScalar> {
    v.iter().cloned().map(SpecScalar).collect()
}

/// Collects objects into a spec file, naming the algebras and bimodules they
/// depend on. Equal dependencies are shared.
#[derive(Clone, Debug)]
pub struct SpecBuilder {
    spec: SpecFile,
    algebras: Vec<(Algebra, String)>,
    bimodules: Vec<(Bimodule, String)>,
}

impl SpecBuilder {
    pub fn new(field: FieldSpec) -> Self {
        SpecBuilder { spec: SpecFile::new(field), algebras: Vec::new(), bimodules: Vec::new() }
    }

    fn taken(&self, name: &str) -> bool {
        self.spec.algebras.contains_key(name)
            || self.spec.bimodules.contains_key(name)
            || self.spec.contexts.contains_key(name)
    }

    fn fresh(&self, base: &str) -> String {
        if !self.taken(base) {
            return base.to_string();
        }
        (2..).map(|i| format!("{base}_{i}")).find(|n| !self.taken(n)).unwrap()
    }

    /// Adds `a` under `name` (or a fresh variant of it) and returns the name used.
    pub fn add_algebra(&mut self, name: &str, a: &Algebra) -> String {
        let name = self.fresh(name);
        let spec = AlgebraSpec {
            dim: a.dim(),
            mul: entries(a.mul()),
            idempotents: a.idempotents().iter().map(|e| vector(e)).collect(),
            identity: a.identity().map(|v| vector(v)),
        };
        self.spec.algebras.insert(name.clone(), spec);
        self.algebras.push((a.clone(), name.clone()));
        name
    }

    fn algebra_ref(&mut self, suggested: &str, a: &Algebra) -> String {
        match self.algebras.iter().find(|(x, _)| x == a) {
            Some((_, n)) => n.clone(),
            None => self.add_algebra(suggested, a),
        }
    }

    pub fn add_bimodule(&mut self, name: &str, m: &Bimodule) -> String {
        let left = self.algebra_ref(&format!("{name}.left"), m.left_algebra());
        let right = self.algebra_ref(&format!("{name}.right"), m.right_algebra());
        let name = self.fresh(name);
        let spec = BimoduleSpec {
            left,
            right,
            dim: m.dim(),
            left_action: entries(m.left_action()),
            right_action: entries(m.right_action()),
        };
        self.spec.bimodules.insert(name.clone(), spec);
        self.bimodules.push((m.clone(), name.clone()));
        name
    }

    fn bimodule_ref(&mut self, suggested: &str, m: &Bimodule) -> String {
        match self.bimodules.iter().find(|(x, _)| x == m) {
            Some((_, n)) => n.clone(),
            None => self.add_bimodule(suggested, m),
        }
    }

    /// Adds a context and whatever it depends on. Zero blocks and maps equal
    /// to their defaults are omitted.
    pub fn add_context(&mut self, name: &str, c: &ContextObject) -> String {
        let name = self.fresh(name);
        let spec = match c {
            ContextObject::Generalised(g) => {
                let n = g.n();
                let algebras: Vec<String> =
                    (0..n).map(|i| self.algebra_ref(&format!("{name}.A{}", i + 1), g.algebra(i))).collect();
                let mut blocks = BTreeMap::new();
                for i in 0..n {
                    for j in 0..n {
                        let b = g.block(i, j);
                        if i != j && b.dim() > 0 {
                            let bn = self.bimodule_ref(&format!("{name}.M{}{}", i + 1, j + 1), b);
                            blocks.insert(vertex_key_string(&[i, j]), bn);
                        }
                    }
                }
                let mut maps = BTreeMap::new();
                for i in 0..n {
                    for k in 0..n {
                        for j in 0..n {
                            let m = g.map(i, k, j);
                            if *m != default_map(g.blocks(), n, i, k, j) {
                                maps.insert(vertex_key_string(&[i, k, j]), entries(m));
                            }
                        }
                    }
                }
                ContextSpec::Generalised { algebras, blocks, maps }
            }
            ContextObject::Classical(c) => ContextSpec::Classical {
                r: self.algebra_ref(&format!("{name}.R"), c.r()),
                s: self.algebra_ref(&format!("{name}.S"), c.s()),
                n: self.bimodule_ref(&format!("{name}.N"), c.n_module()),
                l: self.bimodule_ref(&format!("{name}.L"), c.l_module()),
                zeta: entries(c.zeta()),
                theta: entries(c.theta()),
            },
        };
        self.spec.contexts.insert(name.clone(), spec);
        name
    }

    pub fn finish(self) -> SpecFile {
        self.spec
    }
}
