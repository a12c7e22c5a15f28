//! Multivectors with matrix values ("kernel elements") and the wedge/interior
//! calculus on them.
//!
//! A kernel element of bidegree `(p, q)` assigns to each monomial — a subset
//! of covector ids encoded as a bit mask (`p` bits from the p-leg, `q` bits
//! from the q-leg) — a value in `End(V)`. Zero values are never stored.
//!
//! Monomials are ordered with all p-leg ids before all q-leg ids, ascending,
//! so a mask's natural `u32` order is also the lexicographic monomial order.

use crate::mat::Mat;
use crate::model::{GmCoords, Model};
use crate::rat::{fmt_frac, parse_q, Q};
use num::Zero;
use std::collections::BTreeMap;

/// Matrix-valued multivector: monomial mask -> value. Invariant: no zero values.
pub type Kernel = BTreeMap<u32, Mat>;

/// Scalar multivector: monomial mask -> coefficient. Invariant: no zero values.
pub type Scalar = BTreeMap<u32, Q>;

/// Sign from sorting the concatenation of two disjoint monomials; 0 on overlap.
pub fn wedge_sign_masks(m1: u32, m2: u32) -> i32 {
    if m1 & m2 != 0 {
        return 0;
    }
    let mut s = 0u32;
    let mut y = m2;
    while y != 0 {
        let ybit = y & y.wrapping_neg();
        let yidx = ybit.trailing_zeros();
        s += (m1 >> (yidx + 1)).count_ones();
        y ^= ybit;
    }
    if s & 1 == 1 {
        -1
    } else {
        1
    }
}

/// Sign for contracting basis covector `idx` out of monomial `mask`
/// (caller guarantees `idx` is in `mask`).
pub fn insert_sign(mask: u32, idx: u32) -> i32 {
    let below = (mask & ((1u32 << idx) - 1)).count_ones();
    if below & 1 == 1 {
        -1
    } else {
        1
    }
}

/// Insert a term, merging and dropping zeros.
pub fn kinsert(out: &mut Kernel, mask: u32, v: Mat) {
    if v.is_zero() {
        return;
    }
    match out.get_mut(&mask) {
        Some(cur) => {
            cur.add_assign(&v);
            if cur.is_zero() {
                out.remove(&mask);
            }
        }
        None => {
            out.insert(mask, v);
        }
    }
}

/// `out += c * phi`.
pub fn kadd_scaled_assign(out: &mut Kernel, c: &Q, phi: &Kernel) {
    if c.is_zero() {
        return;
    }
    for (m, v) in phi {
        match out.get_mut(m) {
            Some(cur) => {
                cur.add_scaled_assign(c, v);
                if cur.is_zero() {
                    out.remove(m);
                }
            }
            None => {
                out.insert(*m, v.scale(c));
            }
        }
    }
}

pub fn kadd(a: &Kernel, b: &Kernel) -> Kernel {
    let mut out = a.clone();
    for (m, v) in b {
        kinsert(&mut out, *m, v.clone());
    }
    out
}

pub fn ksub(a: &Kernel, b: &Kernel) -> Kernel {
    let mut out = a.clone();
    for (m, v) in b {
        kinsert(&mut out, *m, v.neg());
    }
    out
}

pub fn kscale(c: &Q, a: &Kernel) -> Kernel {
    if c.is_zero() {
        return Kernel::new();
    }
    a.iter().map(|(m, v)| (*m, v.scale(c))).collect()
}

pub fn kiszero(a: &Kernel) -> bool {
    a.values().all(|v| v.is_zero())
}

pub fn keq(a: &Kernel, b: &Kernel) -> bool {
    kiszero(&ksub(a, b))
}

/// Wedge the monomial `e_{mask2}` (coefficient 1) on the LEFT of `phi`.
pub fn wedge_mono(phi: &Kernel, mask2: u32) -> Kernel {
    let mut out = Kernel::new();
    for (m, v) in phi {
        let s = wedge_sign_masks(mask2, *m);
        if s == 0 {
            continue;
        }
        let vv = if s == 1 { v.clone() } else { v.neg() };
        kinsert(&mut out, m | mask2, vv);
    }
    out
}

/// Wedge a scalar form on the LEFT of `phi`.
pub fn wedge_scalar(sf: &Scalar, phi: &Kernel) -> Kernel {
    let mut out = Kernel::new();
    for (m1, c) in sf {
        for (m2, v) in phi {
            let s = wedge_sign_masks(*m1, *m2);
            if s == 0 {
                continue;
            }
            let coef = if s == 1 { c.clone() } else { -c.clone() };
            kinsert(&mut out, m1 | m2, v.scale(&coef));
        }
    }
    out
}

/// Wedge of two scalar forms.
pub fn wedge_scalar2(s1: &Scalar, s2: &Scalar) -> Scalar {
    let mut out = Scalar::new();
    for (m1, c1) in s1 {
        for (m2, c2) in s2 {
            let s = wedge_sign_masks(*m1, *m2);
            if s == 0 {
                continue;
            }
            let mut add = c1 * c2;
            if s == -1 {
                add = -add;
            }
            let nm = m1 | m2;
            let cur = out.entry(nm).or_insert_with(Q::zero);
            *cur += add;
            if cur.is_zero() {
                out.remove(&nm);
            }
        }
    }
    out
}

/// `k`-th wedge power of a scalar form.
pub fn wedge_power_scalar(sf: &Scalar, k: usize) -> Scalar {
    let mut out = Scalar::new();
    out.insert(0, num::One::one());
    for _ in 0..k {
        out = wedge_scalar2(&out, sf);
    }
    out
}

/// Interior product with the basis vector dual to covector `idx`.
pub fn interior_id(phi: &Kernel, idx: u32) -> Kernel {
    let mut out = Kernel::new();
    let bit = 1u32 << idx;
    for (m, v) in phi {
        if m & bit == 0 {
            continue;
        }
        let s = insert_sign(*m, idx);
        let vv = if s == 1 { v.clone() } else { v.neg() };
        kinsert(&mut out, m ^ bit, vv);
    }
    out
}

/// Interior product with a general vector in `g/m` coordinates.
pub fn interior_vec(phi: &Kernel, coords: &GmCoords) -> Kernel {
    let mut out = Kernel::new();
    for (idx, c) in coords {
        let t = interior_id(phi, *idx as u32);
        kadd_scaled_assign(&mut out, c, &t);
    }
    out
}

/// Bidegree of a monomial mask: (p-leg bits, q-leg bits).
pub fn bideg(mask: u32, model: &Model) -> (u32, u32) {
    (
        (mask & model.pmask).count_ones(),
        (mask & model.qmask).count_ones(),
    )
}

/// Bidegree of the first stored monomial, if any. Meaningful for homogeneous
/// elements (which everything in this crate is, term by term).
pub fn kernel_bideg(phi: &Kernel, model: &Model) -> Option<(u32, u32)> {
    phi.keys().next().map(|m| bideg(*m, model))
}

/// The scalar 1-form `E*`.
pub fn scalar_e() -> Scalar {
    let mut s = Scalar::new();
    s.insert(1, num::One::one());
    s
}

/// The scalar (1,1)-form `sum_i F*_i ∧ G*_i` (the boundary derivative of `E*`).
pub fn dp_e_star(model: &Model) -> Scalar {
    let n = model.n;
    let mut out = Scalar::new();
    for i in 0..n {
        out.insert((1u32 << (1 + i)) | (1u32 << (n + 1 + i)), num::One::one());
    }
    out
}

/// Human-readable monomial label, e.g. `E^F1^G2`; `1` for the empty monomial.
pub fn mono_label(mask: u32, n: usize) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let mut parts = Vec::new();
    for idx in 0..(2 * n + 1) as u32 {
        if mask & (1 << idx) != 0 {
            if idx == 0 {
                parts.push("E".to_string());
            } else if (idx as usize) <= n {
                parts.push(format!("F{}", idx));
            } else {
                parts.push(format!("G{}", idx as usize - n));
            }
        }
    }
    parts.join("^")
}

/// First coordinate where `a` and `b` differ, scanning monomials in mask
/// order and entries row-major: `(mask, row, col, a-value, b-value)`.
pub fn first_diff(a: &Kernel, b: &Kernel, d: usize) -> Option<(u32, usize, usize, Q, Q)> {
    let mut masks: Vec<u32> = a.keys().chain(b.keys()).copied().collect();
    masks.sort_unstable();
    masks.dedup();
    let zero = Mat::zero(d, d);
    for m in masks {
        let va = a.get(&m).unwrap_or(&zero);
        let vb = b.get(&m).unwrap_or(&zero);
        for r in 0..d {
            for c in 0..d {
                if va.get(r, c) != vb.get(r, c) {
                    return Some((m, r, c, va.get(r, c).clone(), vb.get(r, c).clone()));
                }
            }
        }
    }
    None
}

// ------------------------------------------------------------- serialization

/// Render a kernel element as text, one monomial per line:
///
/// ```text
/// kernel n=<n> d=<d> terms=<count>
/// <p ids or -> | <q subscripts or -> | <d*d values row-major, num/den>
/// ```
///
/// P-leg ids are `0` for `E` and `i` for `F_i`; q-leg entries are the
/// subscripts `j` of `G_j`. Lines are emitted in ascending mask order, so the
/// output is canonical: equal elements serialize identically.
pub fn kernel_to_text(phi: &Kernel, n: usize, d: usize) -> String {
    let mut out = format!("kernel n={} d={} terms={}\n", n, d, phi.len());
    for (m, v) in phi {
        let mut pids = Vec::new();
        let mut qids = Vec::new();
        for idx in 0..(2 * n + 1) as u32 {
            if m & (1 << idx) != 0 {
                if (idx as usize) <= n {
                    pids.push(idx.to_string());
                } else {
                    qids.push((idx as usize - n).to_string());
                }
            }
        }
        let ps = if pids.is_empty() { "-".into() } else { pids.join(" ") };
        let qs = if qids.is_empty() { "-".into() } else { qids.join(" ") };
        let vals: Vec<String> = v.entries().iter().map(fmt_frac).collect();
        out.push_str(&format!("{} | {} | {}\n", ps, qs, vals.join(" ")));
    }
    out
}

/// Parse the output of [`kernel_to_text`]. Bit-exact round trip.
pub fn kernel_from_text(text: &str) -> Result<(usize, usize, Kernel), String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty kernel text")?;
    let mut n = None;
    let mut d = None;
    let mut terms = None;
    for tok in header.split_whitespace() {
        if let Some(v) = tok.strip_prefix("n=") {
            n = Some(v.parse::<usize>().map_err(|e| e.to_string())?);
        } else if let Some(v) = tok.strip_prefix("d=") {
            d = Some(v.parse::<usize>().map_err(|e| e.to_string())?);
        } else if let Some(v) = tok.strip_prefix("terms=") {
            terms = Some(v.parse::<usize>().map_err(|e| e.to_string())?);
        }
    }
    let n = n.ok_or("missing n= in kernel header")?;
    let d = d.ok_or("missing d= in kernel header")?;
    let terms = terms.ok_or("missing terms= in kernel header")?;
    let mut phi = Kernel::new();
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split('|').collect();
        if parts.len() != 3 {
            return Err(format!("bad kernel line: {line:?}"));
        }
        let mut mask = 0u32;
        if parts[0].trim() != "-" {
            for tok in parts[0].split_whitespace() {
                let id: u32 = tok.parse().map_err(|e| format!("bad p id {tok:?}: {e}"))?;
                if id as usize > n {
                    return Err(format!("p id {id} out of range"));
                }
                mask |= 1 << id;
            }
        }
        if parts[1].trim() != "-" {
            for tok in parts[1].split_whitespace() {
                let j: u32 = tok.parse().map_err(|e| format!("bad q id {tok:?}: {e}"))?;
                if j as usize > n || j == 0 {
                    return Err(format!("q id {j} out of range"));
                }
                mask |= 1 << (n as u32 + j);
            }
        }
        let vals: Vec<&str> = parts[2].split_whitespace().collect();
        if vals.len() != d * d {
            return Err(format!("expected {} values, got {}", d * d, vals.len()));
        }
        let mut m = Mat::zero(d, d);
        for (i, tok) in vals.iter().enumerate() {
            m.set(i / d, i % d, parse_q(tok)?);
        }
        if phi.insert(mask, m).is_some() {
            return Err("duplicate monomial in kernel text".into());
        }
    }
    if phi.len() != terms {
        return Err(format!("header said {} terms, found {}", terms, phi.len()));
    }
    Ok((n, d, phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::q;
    use num::One;

    fn model2() -> Model {
        Model::new(2)
    }

    #[test]
    fn signs() {
        assert_eq!(wedge_sign_masks(0b001, 0b010), 1);
        assert_eq!(wedge_sign_masks(0b010, 0b001), -1);
        assert_eq!(wedge_sign_masks(0b001, 0b001), 0);
        assert_eq!(wedge_sign_masks(0b101, 0b010), -1); // (E^F2) then F1: one inversion
        assert_eq!(insert_sign(0b111, 0), 1);
        assert_eq!(insert_sign(0b111, 1), -1);
        assert_eq!(insert_sign(0b111, 2), 1);
    }

    #[test]
    fn wedge_interior_adjoint_like() {
        // iota_idx (e_idx ^ phi) + e_idx ^ (iota_idx phi) = phi
        let m = model2();
        let mut phi = Kernel::new();
        phi.insert(0b00101, Mat::unit(m.d, m.d, 1, 2, q(3)));
        phi.insert(0b00011, Mat::unit(m.d, m.d, 0, 0, q(1)));
        for idx in 0..m.nb as u32 {
            let a = interior_id(&wedge_mono(&phi, 1 << idx), idx);
            let b = wedge_mono(&interior_id(&phi, idx), 1 << idx);
            assert!(keq(&kadd(&a, &b), &phi), "idx {idx}");
        }
    }

    #[test]
    fn scalar_wedge_assoc_and_power() {
        let m = model2();
        let dpe = dp_e_star(&m);
        // (dPE*)^n != 0, ^(n+1) = 0
        let pn = wedge_power_scalar(&dpe, m.n);
        assert!(!pn.is_empty());
        let pn1 = wedge_scalar2(&pn, &dpe);
        assert!(pn1.is_empty());
        // left-assoc against kernel
        let mut phi = Kernel::new();
        phi.insert(0, Mat::eye(m.d));
        let a = wedge_scalar(&dpe, &wedge_scalar(&scalar_e(), &phi));
        let b = wedge_scalar(&wedge_scalar2(&dpe, &scalar_e()), &phi);
        assert!(keq(&a, &b));
    }

    #[test]
    fn labels() {
        assert_eq!(mono_label(0, 2), "1");
        assert_eq!(mono_label(0b00001, 2), "E");
        assert_eq!(mono_label(0b01010, 2), "F1^G1");
        assert_eq!(mono_label(0b10100, 2), "F2^G2");
    }

    #[test]
    fn serialization_roundtrip() {
        let m = model2();
        let mut phi = Kernel::new();
        phi.insert(
            0b01011,
            Mat::from_fn(m.d, m.d, |r, c| crate::rat::qr(r as i64 - 1, c as i64 + 2)),
        );
        phi.insert(0b00000, Mat::unit(m.d, m.d, 3, 3, crate::rat::qr(-7, 3)));
        let text = kernel_to_text(&phi, m.n, m.d);
        let (n2, d2, phi2) = kernel_from_text(&text).unwrap();
        assert_eq!((n2, d2), (m.n, m.d));
        assert_eq!(phi, phi2);
        // canonical: serialize again, identical bytes
        assert_eq!(text, kernel_to_text(&phi2, n2, d2));
    }

    #[test]
    fn first_diff_finds_earliest() {
        let d = 4;
        let mut a = Kernel::new();
        a.insert(0b0011, Mat::unit(d, d, 0, 1, q(2)));
        let mut b = a.clone();
        b.insert(0b0001, Mat::unit(d, d, 2, 2, Q::one()));
        let (mask, r, c, lhs, rhs) = first_diff(&a, &b, d).unwrap();
        assert_eq!((mask, r, c), (0b0001, 2, 2));
        assert_eq!((lhs, rhs), (q(0), q(1)));
    }
}
