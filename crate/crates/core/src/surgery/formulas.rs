use crate::linalg::Scalar;

use super::Surgery;

/// Which structure-map formula a block triple `(i, k, j)` uses, by which of
/// the three indices equal the replaced corner `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(super) enum Case {
    /// `i = k = j = t`: multiplication of `S`.
    Mul,
    /// `k = j = t`: `(m ⊗ n)·s = m ⊗ ns`.
    RightS,
    /// `i = k = t`: `s·(l ⊗ m) = sl ⊗ m`.
    LeftS,
    /// `i = j = t`: `(l ⊗ m, m' ⊗ n) ↦ θ(l·φ_tkt(m, m'), n)`.
    Theta,
    /// `j = t`: `(x, m ⊗ n) ↦ φ_ikt(x, m) ⊗ n`.
    Column,
    /// `i = t`: `(l ⊗ m, y) ↦ l ⊗ φ_tkj(m, y)`.
    Row,
    /// `k = t`: `(m ⊗ n, l ⊗ m') ↦ φ_itj(m·ζ(n, l), m')`.
    Zeta,
    /// `(m ⊗ n, l ⊗ r) ↦ m·(ζ(n, l)r)`, row excision with `i ≠ t = k = j`.
    ZetaRight,
    /// No index equals `t`: `φ_ikj`.
    Phi,
}

impl Case {
    pub(super) fn of(i: bool, k: bool, j: bool) -> Case {
        match (i, k, j) {
            (true, true, true) => Case::Mul,
            (false, true, true) => Case::RightS,
            (true, true, false) => Case::LeftS,
            (true, false, true) => Case::Theta,
            (false, false, true) => Case::Column,
            (true, false, false) => Case::Row,
            (false, true, false) => Case::Zeta,
            (false, false, false) => Case::Phi,
        }
    }
}

type Formula<'a> = Box<dyn Fn(usize, usize) -> Vec<Scalar> + Sync + 'a>;

impl Surgery {
    /// The formula on ambient basis indices. Tensor factors are split as
    /// `u = a * dim(right factor) + b`.
    pub(super) fn formula(&self, case: Case, i: usize, k: usize, j: usize) -> Formula<'_> {
        let (g, c, t) = (&self.g, &self.c, self.t);
        let dn = c.n_module().dim();
        match case {
            Case::Mul => Box::new(move |u, v| c.s().mul().basis(u, v).to_vec()),
            Case::RightS => {
                let out = &self.col[i];
                Box::new(move |u, v| out.project_left_basis(u / dn, c.n_module().right_action().basis(u % dn, v)))
            }
            Case::LeftS => {
                let out = &self.row[j];
                let dm = g.block(t, j).dim();
                Box::new(move |u, v| out.project_right_basis(c.l_module().left_action().basis(u, v / dm), v % dm))
            }
            Case::Theta => {
                let dm = g.block(t, k).dim();
                Box::new(move |u, v| {
                    let r = g.map(t, k, t).basis(u % dm, v / dn);
                    let l = c.l_module().right_action().eval_right_vec(u / dm, r);
                    c.theta().eval_left_vec(&l, v % dn)
                })
            }
            Case::Column => {
                let out = &self.col[i];
                Box::new(move |u, v| out.project_right_basis(g.map(i, k, t).basis(u, v / dn), v % dn))
            }
            Case::Row => {
                let out = &self.row[j];
                let dm = g.block(t, k).dim();
                Box::new(move |u, v| out.project_left_basis(u / dm, g.map(t, k, j).basis(u % dm, v)))
            }
            Case::Zeta => {
                let dm = g.block(t, j).dim();
                Box::new(move |u, v| {
                    let m = g.map(i, t, t).eval_right_vec(u / dn, c.zeta().basis(u % dn, v / dm));
                    g.map(i, t, j).eval_left_vec(&m, v % dm)
                })
            }
            Case::ZetaRight => {
                let dr = g.algebra(t).dim();
                Box::new(move |u, v| {
                    let r = g.algebra(t).mul().eval_left_vec(c.zeta().basis(u % dn, v / dr), v % dr);
                    g.map(i, t, t).eval_right_vec(u / dn, &r)
                })
            }
            Case::Phi => Box::new(move |u, v| g.map(i, k, j).basis(u, v).to_vec()),
        }
    }
}
