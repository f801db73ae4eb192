use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::bilinear::BilinearMap;
use crate::bimodule::Bimodule;
use crate::context::{ClassicalContext, ContextObject, GeneralisedContext};
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Scalar};
use crate::surgery::corner_replace;
use crate::tensor::TensorSpace;

use super::GalleryInstance;

/// `N_{d0 d1} ⊗ ... ⊗ N_{d(l-1) dl}`, nested to the left.
struct PathSpace {
    path: Vec<usize>,
    first: Bimodule,
    levels: Vec<TensorSpace>,
}

impl PathSpace {
    fn new(path: Vec<usize>, species: &BTreeMap<(usize, usize), Bimodule>) -> Result<Self> {
        let first = species[&(path[0], path[1])].clone();
        let mut levels: Vec<TensorSpace> = Vec::new();
        for w in path[1..].windows(2) {
            let left = levels.last().map_or(&first, |t| t.module()).clone();
            levels.push(TensorSpace::new(&left, &species[&(w[0], w[1])])?);
        }
        Ok(PathSpace { path, first, levels })
    }

    fn module(&self) -> &Bimodule {
        self.levels.last().map_or(&self.first, |t| t.module())
    }

    /// Factor basis indices of the pure tensor representing basis element `d`.
    fn decode(&self, d: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.path.len() - 1);
        let mut cur = d;
        for t in self.levels.iter().rev() {
            let (i, j) = t.rep(cur);
            out.push(j);
            cur = i;
        }
        out.push(cur);
        out.reverse();
        out
    }

    /// Coordinates of the pure tensor with the given factor basis indices.
    fn encode(&self, factors: &[usize]) -> Vec<Scalar> {
        let f = self.first.field();
        let mut v = f.unit_vector(self.first.dim(), factors[0]);
        for (t, &b) in self.levels.iter().zip(&factors[1..]) {
            v = t.project_right_basis(&v, b);
        }
        v
    }
}

fn topological_order(n: usize, edges: &[(usize, usize)]) -> Result<Vec<usize>> {
    let mut indeg = vec![0; n];
    for &(_, j) in edges {
        indeg[j] += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    while let Some(v) = ready.pop() {
        order.push(v);
        for &(i, j) in edges {
            if i == v {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.push(j);
                }
            }
        }
    }
    match (0..n).find(|&v| indeg[v] > 0) {
        Some(v) => Err(Error::CyclicProspecies(v + 1)),
        None => Ok(order),
    }
}

fn paths(n: usize, edges: &[(usize, usize)], from: usize, to: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![vec![from]];
    while let Some(p) = stack.pop() {
        let last = *p.last().unwrap();
        for &(i, j) in edges.iter().rev() {
            if i == last && j < n {
                let mut q = p.clone();
                q.push(j);
                if j == to {
                    out.push(q.clone());
                }
                stack.push(q);
            }
        }
    }
    out.sort();
    out
}

/// The context of the tensor ring of an acyclic pro-species: `M_ij` is the
/// direct sum over paths `i → j` of length at least one of the tensor
/// products along the path, and the maps concatenate paths.
pub fn tensor_ring_context(
    algebras: Vec<Arc<Algebra>>,
    species: &BTreeMap<(usize, usize), Bimodule>,
) -> Result<GeneralisedContext> {
    let n = algebras.len();
    if let Some(&(i, j)) = species.keys().find(|&&(i, j)| i >= n || j >= n || i == j) {
        return Err(Error::MalformedInput(format!("species entry ({}, {}) is diagonal or out of range", i + 1, j + 1)));
    }
    let edges: Vec<(usize, usize)> = species.keys().copied().collect();
    topological_order(n, &edges)?;
    let f = algebras.first().map(|a| a.field()).ok_or_else(|| Error::MalformedInput("empty pro-species".into()))?;
    let mut sums: BTreeMap<(usize, usize), Vec<PathSpace>> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let ps = paths(n, &edges, i, j).into_iter().map(|p| PathSpace::new(p, species)).collect::<Result<Vec<_>>>()?;
                sums.insert((i, j), ps);
            }
        }
    }
    let mut blocks = BTreeMap::new();
    let mut offsets: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for (&(i, j), ps) in &sums {
        if ps.is_empty() {
            continue;
        }
        let mut off = 0;
        for p in ps {
            offsets.insert(p.path.clone(), off);
            off += p.module().dim();
        }
        let (a, b) = (algebras[i].clone(), algebras[j].clone());
        let mut left = BilinearMap::zero(f, a.dim(), off, off);
        let mut right = BilinearMap::zero(f, off, b.dim(), off);
        for p in ps {
            let o = offsets[&p.path];
            for (x, y, z, v) in p.module().left_action().sparse_entries() {
                left.set(x, o + y, o + z, v);
            }
            for (x, y, z, v) in p.module().right_action().sparse_entries() {
                right.set(o + x, y, o + z, v);
            }
        }
        blocks.insert((i, j), Bimodule::new(a, b, off, left, right)?);
    }
    let dim = |i: usize, j: usize| blocks.get(&(i, j)).map_or(0, Bimodule::dim);
    let mut maps = BTreeMap::new();
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                if i == k || k == j || i == j {
                    continue;
                }
                let (d1, d2, d3) = (dim(i, k), dim(k, j), dim(i, j));
                if d1 == 0 || d2 == 0 {
                    continue;
                }
                let mut phi = BilinearMap::zero(f, d1, d2, d3);
                for p in &sums[&(i, k)] {
                    for q in &sums[&(k, j)] {
                        let mut pq = p.path.clone();
                        pq.extend_from_slice(&q.path[1..]);
                        let target = sums[&(i, j)].iter().find(|s| s.path == pq).expect("concatenated path is listed");
                        let (op, oq, ot) = (offsets[&p.path], offsets[&q.path], offsets[&pq]);
                        for x in 0..p.module().dim() {
                            let fx = p.decode(x);
                            for y in 0..q.module().dim() {
                                let mut fs = fx.clone();
                                fs.extend(q.decode(y));
                                for (z, v) in target.encode(&fs).into_iter().enumerate() {
                                    if !v.is_zero() {
                                        phi.set(op + x, oq + y, ot + z, v);
                                    }
                                }
                            }
                        }
                    }
                }
                maps.insert((i, k, j), phi);
            }
        }
    }
    GeneralisedContext::new(algebras, blocks, maps)
}

/// The chain `1 → 2 → 3` with `N_12 = N_23 = F` and `A_i = F`, with `A_1`
/// replaced by `M_2(F)`.
pub fn prospecies_instance(f: FieldSpec) -> Result<GalleryInstance> {
    let mut inst = GalleryInstance::new("prospecies");
    inst.param("field", f.to_string());
    let a = Arc::new(Algebra::base_field(f));
    let algebras = vec![a.clone(), a.clone(), a.clone()];
    let reg = Bimodule::regular(a.clone());
    let species = BTreeMap::from([((0, 1), reg.clone()), ((1, 2), reg)]);
    let g = tensor_ring_context(algebras, &species)?;
    let c = ClassicalContext::matrix_context(a, 2)?;
    inst.input("tensor-ring", ContextObject::Generalised(g.clone()));
    inst.input("A1~M2A1", ContextObject::Classical(c.clone()));

    inst.expect("dim M13 (one path of length 2)", 1, g.block(0, 2).dim());
    inst.expect("input dims", [[1, 1, 1], [0, 1, 1], [0, 0, 1]], g.dims());
    let res = corner_replace(&g, &c, 0)?;
    let h = &res.composed;
    inst.expect("dim M12' = L⊗N12", 2, h.block(0, 1).dim());
    inst.expect("composed dims", [[4, 2, 2], [0, 1, 1], [0, 0, 1]], h.dims());
    let m13 = TensorSpace::new(h.block(0, 1), h.block(1, 2))?;
    inst.expect("M13' = M12' ⊗ M23'", h.block(0, 2).dim(), m13.dim());
    inst.expect("matrix ring dims", [6, 11], [res.ring.dim(), res.composed_ring.dim()]);
    inst.step("A1 ~ M2(A1) at t=1", res);
    Ok(inst)
}
