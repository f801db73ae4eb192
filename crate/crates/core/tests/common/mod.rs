#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;
use std::sync::Arc;

use morita::algebra::Algebra;
use morita::bilinear::BilinearMap;
use morita::bimodule::Bimodule;
use morita::context::{peirce_grouped, ClassicalContext, GeneralisedContext, Peirce};
use morita::linalg::{FieldSpec, Matrix, Scalar};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn fields() -> [FieldSpec; 3] {
    [FieldSpec::prime(2).unwrap(), FieldSpec::prime(5).unwrap(), FieldSpec::rationals()]
}

pub fn random_field(rng: &mut impl Rng) -> FieldSpec {
    fields()[rng.gen_range(0..3)]
}

pub fn random_scalar(rng: &mut impl Rng, f: FieldSpec) -> Scalar {
    match f {
        FieldSpec::Rationals => {
            let num = rng.gen_range(-3i64..=3);
            let den = rng.gen_range(1i64..=2);
            f.from_ratio(&num.into(), &den.into()).unwrap()
        }
        FieldSpec::Prime { p } => f.from_i64(rng.gen_range(0..p as i64)),
    }
}

pub fn random_vector(rng: &mut impl Rng, f: FieldSpec, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| random_scalar(rng, f)).collect()
}

pub fn random_matrix(rng: &mut impl Rng, f: FieldSpec, rows: usize, cols: usize) -> Matrix {
    Matrix::new(f, rows, cols, random_vector(rng, f, rows * cols)).unwrap()
}

pub fn random_invertible(rng: &mut impl Rng, f: FieldSpec, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, f, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

/// An integer matrix of determinant `±1`: a permutation followed by `n`
/// random elementary row operations, so inverses stay integral over `Q`.
pub fn random_unimodular(rng: &mut impl Rng, f: FieldSpec, n: usize) -> Matrix {
    let mut rows: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    for i in (1..n).rev() {
        rows.swap(i, rng.gen_range(0..=i));
    }
    for _ in 0..n {
        if n < 2 {
            break;
        }
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n - 1));
        let b = if b >= a { b + 1 } else { b };
        let c = [-1i64, 1, 2][rng.gen_range(0..3)];
        for k in 0..n {
            rows[a][k] += c * rows[b][k];
        }
    }
    if n > 0 && rng.gen_bool(0.5) {
        rows[0].iter_mut().for_each(|x| *x = -*x);
    }
    Matrix::from_i64(f, n, n, &rows.concat())
}

pub fn random_permutation(rng: &mut impl Rng, f: FieldSpec, n: usize) -> Matrix {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        idx.swap(i, rng.gen_range(0..=i));
    }
    let cols: Vec<Vec<Scalar>> = idx.iter().map(|&i| f.unit_vector(n, i)).collect();
    Matrix::from_columns(f, n, &cols)
}

/// Basis element running from `source` to `target`; vertices are `(x, x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Element {
    source: usize,
    target: usize,
}

/// A basic algebra on `vertices` trivial paths plus extra elements, with the
/// products of non-trivial elements listed explicitly.
struct QuiverAlgebra {
    vertices: usize,
    elements: Vec<Element>,
    products: BTreeMap<(usize, usize), usize>,
}

impl QuiverAlgebra {
    fn new(vertices: usize) -> Self {
        QuiverAlgebra {
            vertices,
            elements: (0..vertices).map(|x| Element { source: x, target: x }).collect(),
            products: BTreeMap::new(),
        }
    }

    fn push(&mut self, source: usize, target: usize) -> usize {
        self.elements.push(Element { source, target });
        self.elements.len() - 1
    }

    fn product(&self, i: usize, j: usize) -> Option<usize> {
        let (a, b) = (&self.elements[i], &self.elements[j]);
        if a.target != b.source {
            return None;
        }
        match (i < self.vertices, j < self.vertices) {
            (true, _) => Some(j),
            (false, true) => Some(i),
            (false, false) => self.products.get(&(i, j)).copied(),
        }
    }

    fn build(&self, f: FieldSpec) -> Algebra {
        let d = self.elements.len();
        let mul = BilinearMap::from_fn(f, d, d, d, |i, j| {
            let mut v = f.zeros(d);
            if let Some(k) = self.product(i, j) {
                v[k] = f.one();
            }
            v
        });
        let idem: Vec<Vec<Scalar>> = (0..self.vertices).map(|x| f.unit_vector(d, x)).collect();
        let one = (0..d).map(|i| if i < self.vertices { f.one() } else { f.zero() }).collect();
        Algebra::new(f, d, mul, idem).unwrap().with_identity(one).unwrap()
    }
}

fn incidence(rng: &mut impl Rng, m: usize) -> QuiverAlgebra {
    let mut le = vec![vec![false; m]; m];
    for (x, row) in le.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            *cell = x == y || (x < y && rng.gen_bool(0.5));
        }
    }
    for k in 0..m {
        for x in 0..m {
            for y in 0..m {
                if le[x][k] && le[k][y] {
                    le[x][y] = true;
                }
            }
        }
    }
    let mut q = QuiverAlgebra::new(m);
    let mut index = BTreeMap::new();
    for x in 0..m {
        index.insert((x, x), x);
        for y in x + 1..m {
            if le[x][y] {
                index.insert((x, y), q.push(x, y));
            }
        }
    }
    for (&(x, y), &i) in &index {
        for (&(y2, z), &j) in &index {
            if y == y2 && x != y && y != z {
                q.products.insert((i, j), index[&(x, z)]);
            }
        }
    }
    q
}

/// Arrows between arbitrary vertices (loops allowed), all products zero.
fn radical_square_zero(rng: &mut impl Rng, m: usize) -> QuiverAlgebra {
    let mut q = QuiverAlgebra::new(m);
    for x in 0..m {
        for y in 0..m {
            for _ in 0..rng.gen_range(0..=1) {
                if rng.gen_bool(0.4) {
                    q.push(x, y);
                }
            }
        }
    }
    q
}

/// Path algebra of a random acyclic quiver, possibly with parallel arrows.
fn path_algebra(rng: &mut impl Rng, m: usize) -> QuiverAlgebra {
    let mut q = QuiverAlgebra::new(m);
    let mut paths: Vec<(Vec<usize>, usize)> = Vec::new();
    for x in 0..m {
        for y in x + 1..m {
            for _ in 0..rng.gen_range(0..=2) {
                if rng.gen_bool(0.5) {
                    let i = q.push(x, y);
                    paths.push((vec![i], i));
                }
            }
        }
    }
    let mut frontier = paths.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (p, _) in &frontier {
            for (a, ai) in paths.iter().filter(|(a, _)| a.len() == 1) {
                if q.elements[*p.last().unwrap()].target == q.elements[a[0]].source {
                    let src = q.elements[p[0]].source;
                    let tgt = q.elements[*ai].target;
                    let i = q.push(src, tgt);
                    let mut np = p.clone();
                    np.extend(a);
                    next.push((np, i));
                }
            }
        }
        paths.extend(next.iter().cloned());
        frontier = next;
    }
    let by_path: BTreeMap<Vec<usize>, usize> = paths.iter().cloned().collect();
    for (p, i) in &paths {
        for (r, j) in &paths {
            let mut pr = p.clone();
            pr.extend(r);
            if let Some(&k) = by_path.get(&pr) {
                q.products.insert((*i, *j), k);
            }
        }
    }
    q
}

fn random_quiver(rng: &mut impl Rng, m: usize) -> QuiverAlgebra {
    match rng.gen_range(0..3) {
        0 => incidence(rng, m),
        1 => radical_square_zero(rng, m),
        _ => path_algebra(rng, m),
    }
}

fn in_random_basis(rng: &mut impl Rng, f: FieldSpec, q: &QuiverAlgebra) -> Algebra {
    let a = q.build(f);
    let p = random_unimodular(rng, f, a.dim());
    a.transport(&p).unwrap()
}

/// A random basic algebra on `m` vertices in a random basis, with its vertex
/// idempotents designated.
pub fn random_algebra(rng: &mut impl Rng, f: FieldSpec, m: usize) -> Algebra {
    let q = random_quiver(rng, m);
    in_random_basis(rng, f, &q)
}

pub struct RandomContext {
    pub algebra: Algebra,
    pub peirce: Peirce,
}

impl RandomContext {
    pub fn context(&self) -> &GeneralisedContext {
        &self.peirce.context
    }
}

/// A Peirce context of a random algebra with `n` blocks, every block of
/// dimension at most `max_block`.
pub fn random_context(rng: &mut impl Rng, f: FieldSpec, n: usize, max_block: usize) -> RandomContext {
    loop {
        let m = rng.gen_range(n..=(n + 1).min(4));
        let q = random_quiver(rng, m);
        let mut group: Vec<usize> = (0..m).map(|x| if x < n { x } else { rng.gen_range(0..n) }).collect();
        for i in (1..m).rev() {
            group.swap(i, rng.gen_range(0..=i));
        }
        let mut dims = vec![0; n * n];
        for e in &q.elements {
            dims[group[e.source] * n + group[e.target]] += 1;
        }
        if dims.iter().any(|&d| d > max_block) {
            continue;
        }
        let a = in_random_basis(rng, f, &q);
        let idem = a.idempotents();
        let groups: Vec<Vec<Vec<Scalar>>> =
            (0..n).map(|g| (0..m).filter(|&x| group[x] == g).map(|x| idem[x].clone()).collect()).collect();
        let p = peirce_grouped(&a, &groups).unwrap();
        return RandomContext { algebra: a, peirce: p };
    }
}

/// A classical context out of `r` with surjective `ζ` and `θ`: the identity,
/// a transport of structure, or `R ∼ M_k(R)` for `k ≤ 2`.
pub fn random_surjective_classical(rng: &mut impl Rng, r: &Arc<Algebra>) -> ClassicalContext {
    let f = r.field();
    match rng.gen_range(0..4) {
        0 => ClassicalContext::identity(r.clone()),
        1 => {
            let p = random_unimodular(rng, f, r.dim());
            let s = Arc::new(r.transport(&p).unwrap());
            ClassicalContext::from_isomorphism(r.clone(), s, &p.inverse().unwrap()).unwrap()
        }
        k => ClassicalContext::matrix_context(r.clone(), k - 1).unwrap(),
    }
}

/// The same context with both pairings replaced by zero.
pub fn zero_pairings(c: &ClassicalContext) -> ClassicalContext {
    let f = c.r().field();
    let (n, l) = (c.n_module().dim(), c.l_module().dim());
    ClassicalContext::new(
        c.r().clone(),
        c.s().clone(),
        c.n_module().clone(),
        c.l_module().clone(),
        BilinearMap::zero(f, n, l, c.r().dim()),
        BilinearMap::zero(f, l, n, c.s().dim()),
    )
    .unwrap()
}

/// A nonzero proper quotient of `m` by the sub-bimodule generated by one
/// random element, or `m` itself.
pub fn maybe_quotient(rng: &mut impl Rng, m: &Bimodule) -> Bimodule {
    if m.dim() == 0 || rng.gen_bool(0.5) {
        return m.clone();
    }
    let v = random_vector(rng, m.field(), m.dim());
    let q = m.quotient_by(&[v]).unwrap().0;
    if q.dim() == 0 {
        m.clone()
    } else {
        q
    }
}

/// A right `A`-module `M` and a left `A`-module `N` over a common `A`, each
/// of dimension at most `max_dim`, cut from a random Peirce context; both are
/// nonzero whenever the context allows it.
pub fn random_tensor_pair(rng: &mut impl Rng, f: FieldSpec, max_dim: usize) -> (Bimodule, Bimodule) {
    let n = rng.gen_range(1..=3);
    let ctx = random_context(rng, f, n, max_dim);
    let g = ctx.context();
    let triples: Vec<(usize, usize, usize)> = (0..n * n * n).map(|x| (x / (n * n), x / n % n, x % n)).collect();
    let live: Vec<_> = triples.iter().copied().filter(|&(i, k, j)| g.block(i, k).dim() > 0 && g.block(k, j).dim() > 0).collect();
    let pool = if live.is_empty() { &triples } else { &live };
    let (i, k, j) = pool[rng.gen_range(0..pool.len())];
    (maybe_quotient(rng, g.block(i, k)), maybe_quotient(rng, g.block(k, j)))
}

#[derive(Clone, Debug, PartialEq)]
enum Entry {
    Mod(u64, u64),
    Q(BigRational),
}

fn entry(x: &Scalar) -> Entry {
    match x {
        Scalar::Rational(q) => Entry::Q(q.clone()),
        Scalar::Residue { value, modulus } => Entry::Mod(*value, *modulus),
    }
}

fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let inv = |a: u64| {
        let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = (r as u128 * b as u128 % p as u128) as u64;
            }
            b = (b as u128 * b as u128 % p as u128) as u64;
            e >>= 1;
        }
        r
    };
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, piv);
        let s = inv(rows[rank][c]);
        for x in rows[rank].iter_mut() {
            *x = (*x as u128 * s as u128 % p as u128) as u64;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let k = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = ((*x as u128 + p as u128 - (k as u128 * *y as u128) % p as u128) % p as u128) as u64;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rank_q(mut rows: Vec<Vec<BigRational>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, piv);
        let s = BigRational::one() / rows[rank][c].clone();
        for x in rows[rank].iter_mut() {
            *x = &*x * &s;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let k = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = &*x - &k * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `dim M ⊗_A N` as `dim M · dim N` minus the rank of all relations
/// `(m_x a) ⊗ n_y − m_x ⊗ (a n_y)`, with its own elimination.
pub fn naive_tensor_dim(m: &Bimodule, n: &Bimodule) -> usize {
    let (dm, dn, da) = (m.dim(), n.dim(), m.right_algebra().dim());
    let ambient = dm * dn;
    if ambient == 0 {
        return 0;
    }
    let mut rows: Vec<Vec<Entry>> = Vec::new();
    let zero = entry(&m.field().zero());
    for x in 0..dm {
        for a in 0..da {
            let ma = m.right_action().basis(x, a);
            for y in 0..dn {
                let an = n.left_action().basis(a, y);
                let mut row = vec![m.field().zero(); ambient];
                for (x2, c) in ma.iter().enumerate() {
                    row[x2 * dn + y] = row[x2 * dn + y].add(c);
                }
                for (y2, c) in an.iter().enumerate() {
                    row[x * dn + y2] = row[x * dn + y2].sub(c);
                }
                rows.push(row.iter().map(entry).collect());
            }
        }
    }
    let rank = match zero {
        Entry::Mod(_, p) => rank_mod(
            rows.into_iter()
                .map(|r| r.into_iter().map(|e| if let Entry::Mod(v, _) = e { v } else { unreachable!() }).collect())
                .collect(),
            p,
        ),
        Entry::Q(_) => rank_q(
            rows.into_iter()
                .map(|r| r.into_iter().map(|e| if let Entry::Q(q) = e { q } else { unreachable!() }).collect())
                .collect(),
        ),
    };
    ambient - rank
}
