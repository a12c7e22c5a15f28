//! The Lie-algebra chain complex `C_k = Λ^k g_{+1} ⊗ V`, its boundary, the
//! dictionary onto boundary-leg multivectors, and homology.
//!
//! Chains are maps `mask -> vector`: the mask has one bit per `ξ_i`
//! (bits `0..n`), the value is a vector in `V`. The dictionary identifies the
//! chain generator for `ξ_i` with `-2n · G*_i`; that constant is the
//! Killing pairing `B(ξ_i, η_i)` written out literally, so comparing the
//! intrinsic chain boundary against the transported boundary codifferential
//! (whose normalization is *computed* from the Killing form) genuinely
//! cross-checks the normalization.

use crate::forms::insert_sign;
use crate::linalg::{nullspace, Echelon, SparseVec};
use crate::model::Model;
use crate::rat::{q, Q};
use num::{One, Zero};
use std::collections::BTreeMap;

/// Chain: wedge mask over `ξ` indices (bits `0..n`) -> vector in `V`.
pub type Chain = BTreeMap<u32, Vec<Q>>;

/// Vector-valued multivector on full `g/m` masks (the dictionary image).
pub type VecKernel = BTreeMap<u32, Vec<Q>>;

fn vec_add_scaled(acc: &mut Vec<Q>, c: &Q, v: &[Q]) {
    for (a, b) in acc.iter_mut().zip(v.iter()) {
        *a += c * b;
    }
}

fn vec_is_zero(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

fn mat_apply(m: &crate::mat::Mat, v: &[Q]) -> Vec<Q> {
    (0..m.rows)
        .map(|a| {
            let mut s = Q::zero();
            for b in 0..m.cols {
                let x = m.get(a, b);
                if !x.is_zero() {
                    s += x * &v[b];
                }
            }
            s
        })
        .collect()
}

/// Intrinsic boundary on `C_k`:
/// `∂(x_1∧..∧x_k ⊗ v) = Σ_t (-1)^{t+1} x_1∧..x̂_t..∧x_k ⊗ x_t·v`
/// (the bracket term vanishes because `g_{+1}` is abelian — asserted in the
/// structural checks). With `dualrep`, the value action is `x ↦ -x^T`.
pub fn boundary(model: &Model, psi: &Chain, dualrep: bool) -> Chain {
    let n = model.n;
    let mut out = Chain::new();
    for (m, v) in psi {
        let idxs: Vec<usize> = (0..n).filter(|i| m & (1 << i) != 0).collect();
        for (t, j) in idxs.iter().enumerate() {
            let nm = m ^ (1 << j);
            let x = if dualrep {
                model.alg.xi[*j].transpose().neg()
            } else {
                model.alg.xi[*j].clone()
            };
            let mut w = mat_apply(&x, v);
            if t % 2 == 1 {
                for c in w.iter_mut() {
                    *c = -c.clone();
                }
            }
            let entry = out.entry(nm).or_insert_with(|| vec![Q::zero(); model.d]);
            vec_add_scaled(entry, &Q::one(), &w);
        }
    }
    out.retain(|_, v| !vec_is_zero(v));
    out
}

/// Dictionary: chain generator `ξ_i` ↦ `-2n · G*_i`, extended multiplicatively.
pub fn chain_to_form(model: &Model, psi: &Chain) -> VecKernel {
    let n = model.n;
    let c = q(-2 * n as i64);
    let mut out = VecKernel::new();
    for (m, v) in psi {
        let mut gm = 0u32;
        let mut coef = Q::one();
        for i in 0..n {
            if m & (1 << i) != 0 {
                gm |= 1 << (n + 1 + i);
                coef *= &c;
            }
        }
        out.insert(gm, v.iter().map(|x| x * &coef).collect());
    }
    out
}

/// Inverse dictionary.
pub fn form_to_chain(model: &Model, phi: &VecKernel) -> Chain {
    let n = model.n;
    let c = q(-2 * n as i64);
    let mut out = Chain::new();
    for (m, v) in phi {
        let mut cm = 0u32;
        let mut coef = Q::one();
        for i in 0..n {
            if m & (1 << (n + 1 + i)) != 0 {
                cm |= 1 << i;
                coef *= &c;
            }
        }
        out.insert(cm, v.iter().map(|x| x / &coef).collect());
    }
    out
}

/// Boundary codifferential on vector-valued boundary-leg multivectors:
/// `c · Σ_j ι_{G_j} (ξ_j · values)` with `c` computed from the Killing form.
pub fn p_codiff_vec(model: &Model, phi: &VecKernel, dualrep: bool) -> VecKernel {
    let n = model.n;
    let mut out = VecKernel::new();
    for j in 0..n {
        let x = if dualrep {
            model.alg.xi[j].transpose().neg()
        } else {
            model.alg.xi[j].clone()
        };
        let bit = 1u32 << (n + 1 + j);
        for (m, v) in phi {
            if m & bit == 0 {
                continue;
            }
            let w = mat_apply(&x, v);
            if vec_is_zero(&w) {
                continue;
            }
            let s = q(insert_sign(*m, (n + 1 + j) as u32) as i64);
            let entry = out
                .entry(m ^ bit)
                .or_insert_with(|| vec![Q::zero(); model.d]);
            vec_add_scaled(entry, &s, &w);
        }
    }
    let norm = model.codiff_norm();
    let mut ret = VecKernel::new();
    for (m, v) in out {
        let w: Vec<Q> = v.iter().map(|x| x * &norm).collect();
        if !vec_is_zero(&w) {
            ret.insert(m, w);
        }
    }
    ret
}

/// Transported boundary: dictionary ∘ codifferential ∘ dictionary⁻¹. Must
/// agree with [`boundary`] — the two routes share no normalization source.
pub fn boundary_via_form(model: &Model, psi: &Chain, dualrep: bool) -> Chain {
    form_to_chain(model, &p_codiff_vec(model, &chain_to_form(model, psi), dualrep))
}

/// Top-degree pairing `(α, β) ↦ coefficient of the full wedge in α∧β`, with
/// the `V × V*` contraction on values.
pub fn chain_pair(model: &Model, alpha: &Chain, beta: &Chain) -> Q {
    let n = model.n;
    let full = (1u32 << n) - 1;
    let mut tot = Q::zero();
    for (m1, v) in alpha {
        let m2 = full ^ m1;
        if let Some(w) = beta.get(&m2) {
            let s = crate::forms::wedge_sign_masks(*m1, m2);
            if s == 0 {
                continue;
            }
            let mut dot = Q::zero();
            for (a, b) in v.iter().zip(w.iter()) {
                dot += a * b;
            }
            tot += q(s as i64) * dot;
        }
    }
    tot
}

/// Chain-space coordinates at degree `k`: masks ascending, then vector index.
pub fn chain_coords(model: &Model, k: usize) -> Vec<(u32, usize)> {
    let n = model.n;
    let mut out = Vec::new();
    for m in 0u32..(1 << n) {
        if m.count_ones() as usize == k {
            for a in 0..model.d {
                out.push((m, a));
            }
        }
    }
    out
}

fn chain_to_sparse(psi: &Chain, coords_idx: &BTreeMap<(u32, usize), usize>) -> SparseVec {
    let mut v = SparseVec::new();
    for (m, vec) in psi {
        for (a, x) in vec.iter().enumerate() {
            if !x.is_zero() {
                v.insert(coords_idx[&(*m, a)], x.clone());
            }
        }
    }
    v
}

fn sparse_to_chain(model: &Model, v: &SparseVec, coords: &[(u32, usize)]) -> Chain {
    let mut psi = Chain::new();
    for (idx, x) in v {
        let (m, a) = coords[*idx];
        let entry = psi.entry(m).or_insert_with(|| vec![Q::zero(); model.d]);
        entry[a] += x;
    }
    psi.retain(|_, vec| !vec_is_zero(vec));
    psi
}

/// Homology of the chain complex: per degree `k = 0..=n`, the dimension data
/// `(dim C_k, rank ∂_k, dim H_k)` and a representative basis of `H_k`
/// (cycles extending the boundary space, deterministic).
pub struct Homology {
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub hdims: Vec<usize>,
    pub representatives: Vec<Vec<Chain>>,
}

pub fn homology(model: &Model) -> Homology {
    let n = model.n;
    let coords_per_k: Vec<Vec<(u32, usize)>> = (0..=n).map(|k| chain_coords(model, k)).collect();
    let idx_per_k: Vec<BTreeMap<(u32, usize), usize>> = coords_per_k
        .iter()
        .map(|cs| cs.iter().enumerate().map(|(i, c)| (*c, i)).collect())
        .collect();
    let mut dims = Vec::new();
    let mut ranks = Vec::new();
    let mut cycle_bases: Vec<Vec<SparseVec>> = Vec::new();
    let mut image_vecs: Vec<Vec<SparseVec>> = vec![Vec::new(); n + 1]; // image of ∂_{k+1} in C_k
    for k in 0..=n {
        let coords = &coords_per_k[k];
        dims.push(coords.len());
        // boundary matrix C_k -> C_{k-1}; rows over target coords
        let mut rows: BTreeMap<usize, SparseVec> = BTreeMap::new();
        let mut images_below = Vec::new();
        for (j, &(m, a)) in coords.iter().enumerate() {
            let mut v = vec![Q::zero(); model.d];
            v[a] = Q::one();
            let mut psi = Chain::new();
            psi.insert(m, v);
            let b = boundary(model, &psi, false);
            if k > 0 && !b.is_empty() {
                let sv = chain_to_sparse(&b, &idx_per_k[k - 1]);
                images_below.push(sv.clone());
                for (i, c) in sv {
                    rows.entry(i).or_default().insert(j, c);
                }
            }
        }
        let rowvec: Vec<SparseVec> = rows.into_values().collect();
        ranks.push(crate::linalg::rank(&rowvec, coords.len()));
        cycle_bases.push(nullspace(&rowvec, coords.len()));
        if k > 0 {
            image_vecs[k - 1] = images_below;
        }
    }

    let mut hdims = Vec::new();
    let mut representatives = Vec::new();
    for k in 0..=n {
        hdims.push(dims[k] - ranks[k] - if k + 1 <= n { ranks[k + 1] } else { 0 });
        // representatives: cycles adding new pivots over the boundary space
        let mut ech = Echelon::new(dims[k]);
        for b in &image_vecs[k] {
            ech.insert(b);
        }
        let mut reps = Vec::new();
        for z in &cycle_bases[k] {
            if ech.insert(z) {
                reps.push(sparse_to_chain(model, z, &coords_per_k[k]));
            }
        }
        representatives.push(reps);
    }
    Homology {
        dims,
        ranks,
        hdims,
        representatives,
    }
}

/// Closed-form homology dimension: 1 at the ends, else
/// `n·C(n,k) - C(n,k-1) - C(n,k+1)`.
pub fn expected_h_dim(n: usize, k: usize) -> usize {
    if k == 0 || k == n {
        return 1;
    }
    let c = |a: usize, b: usize| -> i64 {
        if b > a {
            return 0;
        }
        let mut r = 1i64;
        for i in 0..b {
            r = r * (a - i) as i64 / (i as i64 + 1);
        }
        r
    };
    (n as i64 * c(n, k) - c(n, k - 1) - c(n, k + 1)) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_chain(model: &Model, m: u32, a: usize) -> Chain {
        let mut v = vec![Q::zero(); model.d];
        v[a] = Q::one();
        let mut psi = Chain::new();
        psi.insert(m, v);
        psi
    }

    #[test]
    fn boundary_squares_to_zero() {
        let model = Model::new(3);
        for m in 0u32..(1 << 3) {
            for a in 0..model.d {
                let psi = unit_chain(&model, m, a);
                let b2 = boundary(&model, &boundary(&model, &psi, false), false);
                assert!(b2.is_empty());
            }
        }
    }

    #[test]
    fn two_route_boundary_agreement() {
        let model = Model::new(2);
        for m in 0u32..(1 << 2) {
            for a in 0..model.d {
                let psi = unit_chain(&model, m, a);
                let r1 = boundary(&model, &psi, false);
                let r2 = boundary_via_form(&model, &psi, false);
                assert_eq!(r1, r2, "mask {m:#b} vec {a}");
            }
        }
    }

    #[test]
    fn pairing_self_adjointness() {
        // pair(∂α, β) = (-1)^k pair(α, ∂'β) for α in C_k, β in C_{n+1-k},
        // where ∂' uses the dual value action
        let model = Model::new(2);
        let n = model.n;
        for k in 1..=n {
            for m1 in 0u32..(1 << n) {
                if m1.count_ones() as usize != k {
                    continue;
                }
                for a in 0..model.d {
                    let alpha = unit_chain(&model, m1, a);
                    for m2 in 0u32..(1 << n) {
                        if m2.count_ones() as usize != n + 1 - k {
                            continue;
                        }
                        for b in 0..model.d {
                            let beta = unit_chain(&model, m2, b);
                            let lhs =
                                chain_pair(&model, &boundary(&model, &alpha, false), &beta);
                            let rhs = crate::rat::sign_pow(k as u32)
                                * chain_pair(&model, &alpha, &boundary(&model, &beta, true));
                            assert_eq!(lhs, rhs, "k={k} m1={m1:#b} a={a} m2={m2:#b} b={b}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn homology_small() {
        let model = Model::new(2);
        let h = homology(&model);
        assert_eq!(h.dims, vec![4, 8, 4]);
        let expect: Vec<usize> = (0..=2).map(|k| expected_h_dim(2, k)).collect();
        assert_eq!(h.hdims, expect);
        for k in 0..=2 {
            assert_eq!(h.representatives[k].len(), h.hdims[k], "degree {k}");
            // representatives are cycles
            for r in &h.representatives[k] {
                assert!(boundary(&model, r, false).is_empty());
            }
        }
    }
}
