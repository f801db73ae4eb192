//! JSON spec files: named algebras, bimodules and contexts over one field.
//!
//! Tensors are sparse lists of `[i, j, k, "c"]` with 0-based basis indices;
//! scalars are strings (`"3"`, `"-1/2"`) read in the declared field. Context
//! vertices are 1-based (`"1,2"` for a block, `"1,2,1"` for a map).

mod export;
mod json;

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::Algebra;
use crate::bilinear::BilinearMap;
use crate::bimodule::Bimodule;
use crate::context::{ClassicalContext, ContextObject, GeneralisedContext};
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Scalar};

pub use export::SpecBuilder;
pub use json::canonical_json;

pub const VERSION: &str = "1";

thread_local! {
    static READING_FIELD: Cell<Option<FieldSpec>> = const { Cell::new(None) };
}

/// Parses `Q`, `F_p`, `Fp` or `GF(p)`.
pub fn parse_field(s: &str) -> Result<FieldSpec> {
    let t = s.trim();
    if t == "Q" || t == "QQ" {
        return Ok(FieldSpec::Rationals);
    }
    let digits = t
        .strip_prefix("F_")
        .or_else(|| t.strip_prefix('F'))
        .or_else(|| t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')))
        .ok_or_else(|| Error::MalformedInput(format!("unknown field {t:?}, expected Q or F_p")))?;
    let p: u64 = digits.parse().map_err(|_| Error::MalformedInput(format!("unknown field {t:?}, expected Q or F_p")))?;
    FieldSpec::prime(p)
}

/// Canonical spelling accepted by `parse_field`.
pub fn field_name(f: FieldSpec) -> String {
    match f {
        FieldSpec::Rationals => "Q".into(),
        FieldSpec::Prime { p } => format!("F_{p}"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpecField(pub FieldSpec);

impl Serialize for SpecField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&field_name(self.0))
    }
}

impl<'de> Deserialize<'de> for SpecField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_field(&s).map(SpecField).map_err(D::Error::custom)
    }
}

/// A scalar written as a string; parsing uses the field of the file being read.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecScalar(pub Scalar);

impl Serialize for SpecScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for SpecScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let f = READING_FIELD.with(Cell::get).ok_or_else(|| D::Error::custom("scalar read outside a spec file"))?;
        f.parse_scalar(&s)
            .map(SpecScalar)
            .map_err(|_| D::Error::custom(format!("{s:?} is not a scalar of {f}")))
    }
}

/// `[i, j, k, "c"]`: the coefficient of basis vector `k` in the product of basis vectors `i` and `j`.
pub type Entry = (usize, usize, usize, SpecScalar);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub dim: usize,
    #[serde(default)]
    pub mul: Vec<Entry>,
    #[serde(default)]
    pub idempotents: Vec<Vec<SpecScalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<Vec<SpecScalar>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleSpec {
    pub left: String,
    pub right: String,
    pub dim: usize,
    #[serde(default)]
    pub left_action: Vec<Entry>,
    #[serde(default)]
    pub right_action: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ContextSpec {
    /// Diagonal blocks are always regular; missing blocks are zero; missing
    /// maps are the actions where `i = k` or `k = j` and zero elsewhere.
    Generalised {
        algebras: Vec<String>,
        #[serde(default)]
        blocks: BTreeMap<String, String>,
        #[serde(default)]
        maps: BTreeMap<String, Vec<Entry>>,
    },
    Classical {
        r: String,
        s: String,
        n: String,
        l: String,
        #[serde(default)]
        zeta: Vec<Entry>,
        #[serde(default)]
        theta: Vec<Entry>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub version: String,
    pub field: SpecField,
    #[serde(default)]
    pub algebras: BTreeMap<String, AlgebraSpec>,
    #[serde(default)]
    pub bimodules: BTreeMap<String, BimoduleSpec>,
    #[serde(default)]
    pub contexts: BTreeMap<String, ContextSpec>,
}

#[derive(Deserialize)]
struct Header {
    version: String,
    field: SpecField,
}

fn parse_error(e: serde_json::Error) -> Error {
    let message = e.to_string();
    // serde_json appends " at line L column C"
    let message = match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message,
    };
    Error::Parse { line: e.line(), column: e.column(), message }
}

struct FieldGuard;

impl FieldGuard {
    fn set(f: FieldSpec) -> Self {
        READING_FIELD.with(|c| c.set(Some(f)));
        FieldGuard
    }
}

impl Drop for FieldGuard {
    fn drop(&mut self) {
        READING_FIELD.with(|c| c.set(None));
    }
}

impl SpecFile {
    pub fn new(field: FieldSpec) -> Self {
        SpecFile {
            version: VERSION.into(),
            field: SpecField(field),
            algebras: BTreeMap::new(),
            bimodules: BTreeMap::new(),
            contexts: BTreeMap::new(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field.0
    }

    /// Reads the header for the field, then the whole file with scalars in it.
    pub fn parse(text: &str) -> Result<SpecFile> {
        let header: Header = serde_json::from_str(text).map_err(parse_error)?;
        if header.version != VERSION {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("unsupported version {:?}, expected {VERSION:?}", header.version),
            });
        }
        let _guard = FieldGuard::set(header.field.0);
        serde_json::from_str(text).map_err(parse_error)
    }

    /// Canonical text: sorted keys, two-space indent, short arrays inline.
    pub fn to_json_string(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("spec serializes"))
    }

    /// Every name defined in the file, checking that no name is reused across kinds.
    fn check_names(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        let all = self.algebras.keys().chain(self.bimodules.keys()).chain(self.contexts.keys());
        for name in all {
            if !seen.insert(name) {
                return Err(Error::MalformedInput(format!("name {name:?} is defined twice")));
            }
        }
        Ok(())
    }

    /// Builds every object, resolving names.
    pub fn resolve(&self) -> Result<Workspace> {
        self.check_names()?;
        let f = self.field();
        let mut algebras = BTreeMap::new();
        for (name, a) in &self.algebras {
            algebras.insert(name.clone(), Arc::new(build_algebra(f, name, a)?));
        }
        let find_algebra = |name: &str, user: &str| -> Result<Arc<Algebra>> {
            algebras
                .get(name)
                .cloned()
                .ok_or_else(|| Error::UnresolvedReference(format!("algebra {name:?} (used by {user:?})")))
        };
        let mut bimodules = BTreeMap::new();
        for (name, b) in &self.bimodules {
            let left = find_algebra(&b.left, name)?;
            let right = find_algebra(&b.right, name)?;
            let la = sparse_map(f, name, "left_action", (left.dim(), b.dim, b.dim), &b.left_action)?;
            let ra = sparse_map(f, name, "right_action", (b.dim, right.dim(), b.dim), &b.right_action)?;
            bimodules.insert(name.clone(), Bimodule::new(left, right, b.dim, la, ra)?);
        }
        let find_bimodule = |name: &str, user: &str| -> Result<Bimodule> {
            bimodules
                .get(name)
                .cloned()
                .ok_or_else(|| Error::UnresolvedReference(format!("bimodule {name:?} (used by {user:?})")))
        };
        let mut contexts = BTreeMap::new();
        for (name, c) in &self.contexts {
            let obj = match c {
                ContextSpec::Generalised { algebras: names, blocks, maps } => {
                    let algs: Vec<Arc<Algebra>> =
                        names.iter().map(|a| find_algebra(a, name)).collect::<Result<_>>()?;
                    let n = algs.len();
                    if n == 0 {
                        return Err(Error::MalformedInput(format!("context {name:?} has no algebras")));
                    }
                    let mut off = BTreeMap::new();
                    for (key, b) in blocks {
                        let ij = vertex_key(name, key, 2, n)?;
                        off.insert((ij[0], ij[1]), find_bimodule(b, name)?);
                    }
                    let dim = |i: usize, j: usize| -> usize {
                        if i == j {
                            algs[i].dim()
                        } else {
                            off.get(&(i, j)).map_or(0, Bimodule::dim)
                        }
                    };
                    let mut ms = BTreeMap::new();
                    for (key, entries) in maps {
                        let ikj = vertex_key(name, key, 3, n)?;
                        let (i, k, j) = (ikj[0], ikj[1], ikj[2]);
                        let what = format!("map {key}");
                        ms.insert((i, k, j), sparse_map(f, name, &what, (dim(i, k), dim(k, j), dim(i, j)), entries)?);
                    }
                    ContextObject::Generalised(GeneralisedContext::new(algs, off, ms)?)
                }
                ContextSpec::Classical { r, s, n, l, zeta, theta } => {
                    let (r, s) = (find_algebra(r, name)?, find_algebra(s, name)?);
                    let (n, l) = (find_bimodule(n, name)?, find_bimodule(l, name)?);
                    let z = sparse_map(f, name, "zeta", (n.dim(), l.dim(), r.dim()), zeta)?;
                    let t = sparse_map(f, name, "theta", (l.dim(), n.dim(), s.dim()), theta)?;
                    ContextObject::Classical(ClassicalContext::new(r, s, n, l, z, t)?)
                }
            };
            contexts.insert(name.clone(), obj);
        }
        Ok(Workspace { field: f, algebras, bimodules, contexts })
    }
}

fn build_algebra(f: FieldSpec, name: &str, a: &AlgebraSpec) -> Result<Algebra> {
    let mul = sparse_map(f, name, "mul", (a.dim, a.dim, a.dim), &a.mul)?;
    let vector = |v: &Vec<SpecScalar>, what: &str| -> Result<Vec<Scalar>> {
        if v.len() != a.dim {
            return Err(Error::MalformedInput(format!("{name}: {what} has length {}, dim is {}", v.len(), a.dim)));
        }
        Ok(v.iter().map(|x| x.0.clone()).collect())
    };
    let idem = a.idempotents.iter().map(|e| vector(e, "idempotent")).collect::<Result<Vec<_>>>()?;
    let alg = Algebra::new(f, a.dim, mul, idem)?;
    match &a.identity {
        Some(id) => alg.with_identity(vector(id, "identity")?),
        None => Ok(alg),
    }
}

fn sparse_map(
    f: FieldSpec,
    owner: &str,
    what: &str,
    shape: (usize, usize, usize),
    entries: &[Entry],
) -> Result<BilinearMap> {
    let mut m = BilinearMap::zero(f, shape.0, shape.1, shape.2);
    let mut seen = BTreeSet::new();
    for (i, j, k, c) in entries {
        let (i, j, k) = (*i, *j, *k);
        if i >= shape.0 || j >= shape.1 || k >= shape.2 {
            return Err(Error::MalformedInput(format!(
                "{owner}: {what} entry [{i}, {j}, {k}] is out of range for shape {shape:?}"
            )));
        }
        if !seen.insert((i, j, k)) {
            return Err(Error::MalformedInput(format!("{owner}: {what} entry [{i}, {j}, {k}] appears twice")));
        }
        m.set(i, j, k, c.0.clone());
    }
    Ok(m)
}

/// Parses a 1-based key such as `"1,2"` into 0-based indices.
fn vertex_key(owner: &str, key: &str, len: usize, n: usize) -> Result<Vec<usize>> {
    let bad = || Error::MalformedInput(format!("{owner}: key {key:?} should be {len} vertices in 1..={n}"));
    let parts: Vec<usize> = key
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    if parts.len() != len || parts.iter().any(|&v| v == 0 || v > n) {
        return Err(bad());
    }
    Ok(parts.into_iter().map(|v| v - 1).collect())
}

pub(crate) fn vertex_key_string(v: &[usize]) -> String {
    v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",")
}

/// A named object resolved from a spec file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Named {
    Algebra(Arc<Algebra>),
    Bimodule(Bimodule),
    Context(ContextObject),
}

impl Named {
    pub fn kind(&self) -> &'static str {
        match self {
            Named::Algebra(_) => "algebra",
            Named::Bimodule(_) => "bimodule",
            Named::Context(ContextObject::Generalised(_)) => "generalised context",
            Named::Context(ContextObject::Classical(_)) => "classical context",
        }
    }
}

/// The resolved contents of a spec file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Workspace {
    pub field: FieldSpec,
    pub algebras: BTreeMap<String, Arc<Algebra>>,
    pub bimodules: BTreeMap<String, Bimodule>,
    pub contexts: BTreeMap<String, ContextObject>,
}

impl Workspace {
    pub fn load(text: &str) -> Result<Workspace> {
        SpecFile::parse(text)?.resolve()
    }

    pub fn get(&self, name: &str) -> Result<Named> {
        if let Some(a) = self.algebras.get(name) {
            return Ok(Named::Algebra(a.clone()));
        }
        if let Some(b) = self.bimodules.get(name) {
            return Ok(Named::Bimodule(b.clone()));
        }
        if let Some(c) = self.contexts.get(name) {
            return Ok(Named::Context(c.clone()));
        }
        Err(Error::UnresolvedReference(format!("no object named {name:?}")))
    }

    pub fn generalised(&self, name: &str) -> Result<GeneralisedContext> {
        match self.get(name)? {
            Named::Context(ContextObject::Generalised(g)) => Ok(g),
            Named::Context(ContextObject::Classical(c)) => Ok(c.to_generalised()),
            Named::Algebra(a) => Ok(GeneralisedContext::single(a)),
            other => Err(Error::MalformedInput(format!("{name:?} is a {}, not a context", other.kind()))),
        }
    }

    pub fn classical(&self, name: &str) -> Result<ClassicalContext> {
        match self.get(name)? {
            Named::Context(ContextObject::Classical(c)) => Ok(c),
            Named::Context(ContextObject::Generalised(g)) => ClassicalContext::from_generalised(&g),
            other => Err(Error::MalformedInput(format!("{name:?} is a {}, not a classical context", other.kind()))),
        }
    }

    /// The name under which `a` appears, if any.
    pub fn algebra_name(&self, a: &Algebra) -> Option<&str> {
        self.algebras.iter().find(|(_, x)| x.same_ring(a)).map(|(k, _)| k.as_str())
    }

    /// Serializes every object back into a spec file, reusing the names.
    pub fn to_spec(&self) -> SpecFile {
        let mut b = SpecBuilder::new(self.field);
        for (name, a) in &self.algebras {
            b.add_algebra(name, a);
        }
        for (name, m) in &self.bimodules {
            b.add_bimodule(name, m);
        }
        for (name, c) in &self.contexts {
            b.add_context(name, c);
        }
        b.finish()
    }
}

impl fmt::Display for SpecFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json_string())
    }
}

#[cfg(test)]
mod tests;
