//! Coordinatization of bidegree components and rotation-invariant subspaces.
//!
//! A [`Space`] fixes a bidegree `(p, q)` and a basis of the value space
//! (defaulting to all matrix units of `End(V)`), and translates between
//! kernel elements and sparse coordinate vectors. Operators become sparse
//! matrices through [`op_rows`], and the rotation-invariant subspace is cut
//! out generator by generator in [`invariant_basis`].

use crate::forms::Kernel;
use crate::linalg::{nullspace, SparseMat, SparseVec};
use crate::mat::Mat;
use crate::model::Model;
use crate::ops::m_action;
use crate::rat::Q;
use num::Zero;
use std::collections::BTreeMap;

pub struct Space {
    pub p: u32,
    pub q: u32,
    /// Monomial masks, ascending.
    pub monos: Vec<u32>,
    mono_idx: BTreeMap<u32, usize>,
    pub valbasis: Vec<Mat>,
    /// Value-space dimension.
    pub vdim: usize,
    /// Total dimension `monos.len() * vdim`.
    pub dim: usize,
    d: usize,
    /// Fast path when every value basis element is a single matrix unit:
    /// `(row, col, coeff)` per basis element.
    units: Option<Vec<(usize, usize, Q)>>,
    /// Covered entries for the unit fast path (`row * d + col`).
    unit_cover: Vec<bool>,
    /// General path: echelonized value basis with coordinate tracking,
    /// sorted by leading flat index. Each item is (flat vector, coords).
    red: Vec<(SparseVec, SparseVec)>,
}

impl Space {
    /// Bidegree component with the full `End(V)` value space.
    pub fn end_v(model: &Model, p: u32, q: u32) -> Space {
        let d = model.d;
        let mut vals = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                vals.push(Mat::unit(d, d, a, b, num::One::one()));
            }
        }
        Space::with_values(model, p, q, vals)
    }

    /// Bidegree component with a custom (independent) value basis.
    pub fn with_values(model: &Model, p: u32, q: u32, valbasis: Vec<Mat>) -> Space {
        let n = model.n;
        let d = model.d;
        let nb = model.nb as u32;
        let mut monos = Vec::new();
        for mask in 0u32..(1 << nb) {
            let pm = (mask & model.pmask).count_ones();
            let qm = (mask & model.qmask).count_ones();
            if pm == p && qm == q {
                monos.push(mask);
            }
        }
        debug_assert_eq!(
            monos.len(),
            binom(n + 1, p as usize) * binom(n, q as usize)
        );
        let mono_idx = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let vdim = valbasis.len();
        let is_units = valbasis
            .iter()
            .all(|vb| vb.entries().iter().filter(|x| !x.is_zero()).count() == 1);
        let mut units = None;
        let mut unit_cover = vec![false; d * d];
        let mut red: Vec<(SparseVec, SparseVec)> = Vec::new();
        if is_units {
            let mut pos = Vec::with_capacity(vdim);
            for vb in &valbasis {
                let (a, b, c) = vb.first_nonzero().expect("zero value basis element");
                assert!(!unit_cover[a * d + b], "dependent value basis");
                unit_cover[a * d + b] = true;
                pos.push((a, b, c.clone()));
            }
            units = Some(pos);
        } else {
            for (j, vb) in valbasis.iter().enumerate() {
                let mut v = SparseVec::new();
                for a in 0..d {
                    for b in 0..d {
                        let x = vb.get(a, b);
                        if !x.is_zero() {
                            v.insert(a * d + b, x.clone());
                        }
                    }
                }
                let mut c = SparseVec::new();
                c.insert(j, num::One::one());
                reduce_flat(&red, &mut v, &mut c);
                assert!(!v.is_empty(), "dependent value basis");
                red.push((v, c));
                red.sort_by_key(|t| *t.0.keys().next().unwrap());
            }
        }
        Space {
            p,
            q,
            monos,
            mono_idx,
            valbasis,
            vdim,
            dim: 0,
            d,
            units,
            unit_cover,
            red,
        }
        .finish()
    }

    fn finish(mut self) -> Space {
        self.dim = self.monos.len() * self.vdim;
        self
    }

    /// Coordinates of `phi`. Errors if `phi` has a monomial outside the
    /// bidegree or a value outside the span of the value basis.
    pub fn to_vec(&self, phi: &Kernel) -> Result<SparseVec, String> {
        let d = self.d;
        let mut out = SparseVec::new();
        for (m, mat) in phi {
            let Some(&mi) = self.mono_idx.get(m) else {
                if mat.is_zero() {
                    continue;
                }
                return Err(format!("monomial {m:#b} outside space ({},{})", self.p, self.q));
            };
            if let Some(pos) = &self.units {
                // values must be supported on covered entries
                for a in 0..d {
                    for b in 0..d {
                        if !self.unit_cover[a * d + b] && !mat.get(a, b).is_zero() {
                            return Err("value outside the value span".into());
                        }
                    }
                }
                for (k, (a, b, c)) in pos.iter().enumerate() {
                    let x = mat.get(*a, *b);
                    if !x.is_zero() {
                        out.insert(mi * self.vdim + k, x / c);
                    }
                }
            } else {
                let mut fv = SparseVec::new();
                for a in 0..d {
                    for b in 0..d {
                        let x = mat.get(a, b);
                        if !x.is_zero() {
                            fv.insert(a * d + b, x.clone());
                        }
                    }
                }
                let mut c = SparseVec::new();
                reduce_flat(&self.red, &mut fv, &mut c);
                if !fv.is_empty() {
                    return Err("value outside the value span".into());
                }
                for (k, x) in c {
                    if !x.is_zero() {
                        out.insert(mi * self.vdim + k, -x);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Inverse of [`to_vec`].
    pub fn from_vec(&self, v: &SparseVec) -> Kernel {
        let mut phi = Kernel::new();
        for (idx, c) in v {
            if c.is_zero() {
                continue;
            }
            let (mi, k) = (idx / self.vdim, idx % self.vdim);
            let m = self.monos[mi];
            match phi.get_mut(&m) {
                Some(cur) => cur.add_scaled_assign(c, &self.valbasis[k]),
                None => {
                    phi.insert(m, self.valbasis[k].scale(c));
                }
            }
        }
        phi.retain(|_, v| !v.is_zero());
        phi
    }

    /// Single-term basis elements, with their coordinate index.
    pub fn basis_elems(&self) -> impl Iterator<Item = (usize, Kernel)> + '_ {
        self.monos.iter().enumerate().flat_map(move |(mi, m)| {
            (0..self.vdim).map(move |k| {
                let mut phi = Kernel::new();
                phi.insert(*m, self.valbasis[k].clone());
                (mi * self.vdim + k, phi)
            })
        })
    }
}

/// Forward-reduce a flat vector against echelonized rows (sorted by lead),
/// tracking coordinates; iterates to a fixed point so reduction is complete
/// even when the rows are not mutually reduced.
fn reduce_flat(red: &[(SparseVec, SparseVec)], v: &mut SparseVec, c: &mut SparseVec) {
    loop {
        let mut changed = false;
        for (pv, pc) in red {
            let lead = *pv.keys().next().unwrap();
            let Some(x) = v.get(&lead) else { continue };
            let f = x / pv.get(&lead).unwrap();
            changed = true;
            for (k, w) in pv {
                let e = v.entry(*k).or_insert_with(Q::zero);
                *e -= &f * w;
                if e.is_zero() {
                    v.remove(k);
                }
            }
            for (k, w) in pc {
                let e = c.entry(*k).or_insert_with(Q::zero);
                *e -= &f * w;
                if e.is_zero() {
                    c.remove(k);
                }
            }
        }
        if !changed {
            return;
        }
    }
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Matrix rows of `op : space_in -> space_out`, keyed by output coordinate.
/// Only nonzero rows are returned, in ascending row order.
pub fn op_rows(
    space_in: &Space,
    space_out: &Space,
    op: impl Fn(&Kernel) -> Kernel,
) -> Vec<(usize, SparseVec)> {
    let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for (j, el) in space_in.basis_elems() {
        let img = op(&el);
        let vec = space_out
            .to_vec(&img)
            .expect("operator image left the target space");
        for (i, c) in vec {
            rows.entry(i).or_default().insert(j, c);
        }
    }
    rows.into_iter().collect()
}

/// Full sparse matrix of `op` (for export): `space_out.dim x space_in.dim`.
pub fn operator_sparse_mat(
    space_in: &Space,
    space_out: &Space,
    op: impl Fn(&Kernel) -> Kernel,
) -> SparseMat {
    let mut m = SparseMat::new(space_out.dim, space_in.dim);
    for (i, row) in op_rows(space_in, space_out, op) {
        for (j, v) in row {
            m.set(i, j, v);
        }
    }
    m
}

/// Basis of the rotation-invariant subspace of `space`, computed by
/// restricting to the kernel of each rotation generator in turn (fixed
/// generator order, so the output is deterministic).
pub fn invariant_basis(model: &Model, space: &Space) -> Vec<Kernel> {
    let ngen = model.alg.m_mats.len();
    let mut basis: Option<Vec<SparseVec>> = None;
    for g in 0..ngen {
        match basis {
            None => {
                let rows: Vec<SparseVec> = op_rows(space, space, |el| m_action(model, g, el))
                    .into_iter()
                    .map(|(_, r)| r)
                    .collect();
                basis = Some(nullspace(&rows, space.dim));
            }
            Some(ref bs) => {
                if bs.is_empty() {
                    break;
                }
                let mut rowmap: BTreeMap<usize, SparseVec> = BTreeMap::new();
                for (j, bv) in bs.iter().enumerate() {
                    let el = space.from_vec(bv);
                    let img = m_action(model, g, &el);
                    let vec = space.to_vec(&img).expect("rotation action left the space");
                    for (i, c) in vec {
                        rowmap.entry(i).or_default().insert(j, c);
                    }
                }
                let rows: Vec<SparseVec> = rowmap.into_values().collect();
                let ns = nullspace(&rows, bs.len());
                let mut newbasis = Vec::with_capacity(ns.len());
                for nv in ns {
                    let mut w = SparseVec::new();
                    for (j, c) in nv {
                        for (i, x) in &bs[j] {
                            let e = w.entry(*i).or_insert_with(Q::zero);
                            *e += &c * x;
                            if e.is_zero() {
                                w.remove(i);
                            }
                        }
                    }
                    newbasis.push(w);
                }
                basis = Some(newbasis);
            }
        }
    }
    basis
        .expect("n >= 2 always has at least one rotation generator")
        .iter()
        .map(|v| space.from_vec(v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::keq;
    use crate::rat::{q, qr};

    #[test]
    fn roundtrip_unit_basis() {
        let m = Model::new(2);
        let sp = Space::end_v(&m, 1, 1);
        assert_eq!(sp.dim, 3 * 2 * 16);
        for (j, el) in sp.basis_elems() {
            let v = sp.to_vec(&el).unwrap();
            assert_eq!(v.len(), 1);
            assert_eq!(v.get(&j), Some(&Q::from_integer(1.into())));
            assert!(keq(&sp.from_vec(&v), &el));
        }
    }

    #[test]
    fn roundtrip_general_basis() {
        let m = Model::new(2);
        let d = m.d;
        // paired-rows basis: not matrix units
        let mut vals = Vec::new();
        for col in 0..d {
            let mut x = Mat::zero(d, d);
            x.set(0, col, q(1));
            x.set(d - 1, col, q(1));
            vals.push(x);
            for r in 1..d - 1 {
                vals.push(Mat::unit(d, d, r, col, q(1)));
            }
        }
        let sp = Space::with_values(&m, 1, 1, vals);
        assert_eq!(sp.vdim, d * (d - 1));
        for (j, el) in sp.basis_elems() {
            let v = sp.to_vec(&el).unwrap();
            assert_eq!(v.get(&j), Some(&q(1)), "elem {j}");
            assert_eq!(v.len(), 1);
            assert!(keq(&sp.from_vec(&v), &el));
        }
        // a value with row0 != row_last is outside
        let mut phi = Kernel::new();
        phi.insert(*sp.monos.first().unwrap(), Mat::unit(d, d, 0, 0, q(1)));
        assert!(sp.to_vec(&phi).is_err());
    }

    #[test]
    fn subset_unit_basis_detects_outside_values() {
        let m = Model::new(2);
        let d = m.d;
        let vals: Vec<Mat> = (0..d).map(|a| Mat::unit(d, d, a, d - 1, q(1))).collect();
        let sp = Space::with_values(&m, 0, 1, vals);
        let mut phi = Kernel::new();
        phi.insert(*sp.monos.first().unwrap(), Mat::unit(d, d, 0, 0, q(1)));
        assert!(sp.to_vec(&phi).is_err());
    }

    #[test]
    fn mixed_coordinates() {
        let m = Model::new(2);
        let sp = Space::end_v(&m, 0, 1);
        let mut phi = Kernel::new();
        let mut val = Mat::unit(m.d, m.d, 0, 1, qr(2, 3));
        val.set(3, 3, q(-1));
        phi.insert(1 << 3, val);
        let v = sp.to_vec(&phi).unwrap();
        let back = sp.from_vec(&v);
        assert!(keq(&back, &phi));
    }

    #[test]
    fn invariants_of_scalar_like_spaces() {
        // (0,0) invariants of End(V): block scalars commuting with rotations:
        // span(E00, Emid, Enn, E0n, En0) -> dimension 5
        let m = Model::new(3);
        let sp = Space::end_v(&m, 0, 0);
        let inv = invariant_basis(&m, &sp);
        assert_eq!(inv.len(), 5);
        for el in &inv {
            for g in 0..m.alg.m_mats.len() {
                assert!(crate::forms::kiszero(&m_action(&m, g, el)));
            }
        }
    }
}
