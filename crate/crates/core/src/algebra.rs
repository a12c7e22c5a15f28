//! The matrix Lie algebra `so(n+1,1)` preserving a Lorentzian form in its
//! light-cone block shape, with the basis, bracket table, grading and Killing
//! form used everywhere else.
//!
//! The defining module `V` has dimension `d = n + 2`, with coordinates ordered
//! `(v_0, v_1, ..., v_n, v_{d-1})`: an isotropic line, a Euclidean middle
//! block, and a second isotropic line. The invariant bilinear form is
//!
//! ```text
//! S = [[0, 0, 1],
//!      [0, I_n, 0],
//!      [1, 0, 0]]
//! ```
//!
//! A matrix `x` lies in the algebra iff `x^T S + S x = 0`, which pins the
//! block shape `[[a, -Y^T, 0], [X, B, Y], [0, -X^T, -a]]` with `B`
//! antisymmetric. The grading element `Ẽ = diag(1, 0, ..., 0, -1)` splits the
//! algebra into `g_{-1} ⊕ g_0 ⊕ g_{+1}` with `g_{-1} = span(η_i)` (column `X`),
//! `g_0 = m ⊕ R·Ẽ` (block `B` and `a`), `g_{+1} = span(ξ_i)` (column `Y`).

use crate::mat::Mat;
use crate::rat::Q;
use num::{One, Zero};

/// Block decomposition of an algebra element.
pub struct Blocks {
    /// Lower-left column (coordinates along `η_i`).
    pub x: Vec<Q>,
    /// Diagonal scalar (coordinate along `Ẽ`).
    pub a: Q,
    /// Upper-right column (coordinates along `ξ_i`).
    pub y: Vec<Q>,
    /// Antisymmetric middle block (rotation part `m = so(n)`).
    pub b: Mat,
}

/// The graded orthogonal Lie algebra together with cached structure data.
pub struct Algebra {
    pub n: usize,
    /// Dimension of the defining module, `n + 2`.
    pub d: usize,
    /// The invariant bilinear form on `V`.
    pub s_form: Mat,
    /// Degree `-1` generators, `i = 0..n`.
    pub eta: Vec<Mat>,
    /// Degree `+1` generators, `i = 0..n`.
    pub xi: Vec<Mat>,
    /// Grading element.
    pub e_tilde: Mat,
    /// Rotation generator index pairs `(i, j)`, `i < j`, lexicographic.
    pub m_keys: Vec<(usize, usize)>,
    /// Rotation generators matching `m_keys`.
    pub m_mats: Vec<Mat>,
    /// Full ordered basis: `η_*`, rotation generators, `Ẽ`, `ξ_*`.
    pub g_basis: Vec<Mat>,
    /// Human-readable label per basis element (for exports).
    pub g_labels: Vec<String>,
    killing_scale: Q,
    /// `bracket[a][b]` = coordinates of `[g_a, g_b]` in `g_basis`.
    bracket: Vec<Vec<Vec<(usize, Q)>>>,
    /// Killing Gram matrix on `g_basis` (includes `killing_scale`).
    gram: Mat,
}

impl Algebra {
    pub fn new(n: usize) -> Algebra {
        Algebra::with_killing_scale(n, Q::one())
    }

    /// Same algebra, but every Killing-form value multiplied by `scale`.
    ///
    /// This is a fault-injection hook for tests: downstream normalizations
    /// that are *derived* from the Killing form pick up the scale, while
    /// literal constants do not, so consistency checks that compare the two
    /// routes break loudly when `scale != 1`.
    pub fn with_killing_scale(n: usize, scale: Q) -> Algebra {
        assert!(n >= 2, "the model needs n >= 2");
        let d = n + 2;
        let mut s_form = Mat::zero(d, d);
        s_form.set(0, d - 1, Q::one());
        s_form.set(d - 1, 0, Q::one());
        for i in 1..d - 1 {
            s_form.set(i, i, Q::one());
        }
        let mut eta = Vec::with_capacity(n);
        let mut xi = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = Mat::zero(d, d);
            e.set(1 + i, 0, Q::one());
            e.set(d - 1, 1 + i, -Q::one());
            eta.push(e);
            let mut x = Mat::zero(d, d);
            x.set(0, 1 + i, -Q::one());
            x.set(1 + i, d - 1, Q::one());
            xi.push(x);
        }
        let mut e_tilde = Mat::zero(d, d);
        e_tilde.set(0, 0, Q::one());
        e_tilde.set(d - 1, d - 1, -Q::one());
        let mut m_keys = Vec::new();
        let mut m_mats = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut m = Mat::zero(d, d);
                m.set(1 + i, 1 + j, Q::one());
                m.set(1 + j, 1 + i, -Q::one());
                m_keys.push((i, j));
                m_mats.push(m);
            }
        }
        let mut g_basis = Vec::new();
        let mut g_labels = Vec::new();
        for (i, e) in eta.iter().enumerate() {
            g_basis.push(e.clone());
            g_labels.push(format!("eta{}", i + 1));
        }
        for (k, m) in m_mats.iter().enumerate() {
            let (i, j) = m_keys[k];
            g_basis.push(m.clone());
            g_labels.push(format!("m{}{}", i + 1, j + 1));
        }
        g_basis.push(e_tilde.clone());
        g_labels.push("Et".to_string());
        for (i, x) in xi.iter().enumerate() {
            g_basis.push(x.clone());
            g_labels.push(format!("xi{}", i + 1));
        }

        let mut alg = Algebra {
            n,
            d,
            s_form,
            eta,
            xi,
            e_tilde,
            m_keys,
            m_mats,
            g_basis,
            g_labels,
            killing_scale: scale,
            bracket: Vec::new(),
            gram: Mat::zero(0, 0),
        };
        let nb = alg.g_basis.len();
        let mut bracket = Vec::with_capacity(nb);
        for a in 0..nb {
            let mut row = Vec::with_capacity(nb);
            for b in 0..nb {
                let c = alg.g_basis[a].commutator(&alg.g_basis[b]);
                row.push(alg.g_coords_sparse(&c));
            }
            bracket.push(row);
        }
        alg.bracket = bracket;
        alg.gram = alg.compute_gram();
        alg
    }

    /// Number of basis elements, `2n + n(n-1)/2 + 1`.
    pub fn dim(&self) -> usize {
        self.g_basis.len()
    }

    /// Cartan involution `θ(x) = -x^T`.
    pub fn theta(&self, x: &Mat) -> Mat {
        x.transpose().neg()
    }

    /// Membership test: `x^T S + S x = 0`.
    pub fn contains(&self, x: &Mat) -> bool {
        x.transpose()
            .mul(&self.s_form)
            .add(&self.s_form.mul(x))
            .is_zero()
    }

    /// Block decomposition (does not verify membership).
    pub fn decompose(&self, x: &Mat) -> Blocks {
        let (n, d) = (self.n, self.d);
        Blocks {
            x: (0..n).map(|i| x.get(1 + i, 0).clone()).collect(),
            a: x.get(0, 0).clone(),
            y: (0..n).map(|i| x.get(1 + i, d - 1).clone()).collect(),
            b: Mat::from_fn(n, n, |i, j| x.get(1 + i, 1 + j).clone()),
        }
    }

    /// Coordinates of `v` in `g_basis`. Valid only for members.
    pub fn g_coords(&self, v: &Mat) -> Vec<Q> {
        let bl = self.decompose(v);
        let mut out = Vec::with_capacity(self.dim());
        out.extend(bl.x.iter().cloned());
        for &(i, j) in &self.m_keys {
            out.push(bl.b.get(i, j).clone());
        }
        out.push(bl.a.clone());
        out.extend(bl.y.iter().cloned());
        out
    }

    fn g_coords_sparse(&self, v: &Mat) -> Vec<(usize, Q)> {
        self.g_coords(v)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// Rebuild a matrix from basis coordinates.
    pub fn from_coords(&self, coords: &[Q]) -> Mat {
        let mut m = Mat::zero(self.d, self.d);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                m.add_scaled_assign(c, &self.g_basis[i]);
            }
        }
        m
    }

    /// Killing form `B(x, y) = tr(ad x ∘ ad y)`, times the injected scale.
    pub fn killing(&self, x: &Mat, y: &Mat) -> Q {
        let mut tot = Q::zero();
        for (k, b) in self.g_basis.iter().enumerate() {
            let v = x.commutator(&y.commutator(b));
            tot += self.g_coord_at(&v, k);
        }
        tot * &self.killing_scale
    }

    /// Coefficient of `g_basis[k]` in `v`.
    fn g_coord_at(&self, v: &Mat, k: usize) -> Q {
        let n = self.n;
        let nm = self.m_keys.len();
        if k < n {
            return v.get(1 + k, 0).clone();
        }
        if k < n + nm {
            let (i, j) = self.m_keys[k - n];
            return v.get(1 + i, 1 + j).clone();
        }
        if k == n + nm {
            return v.get(0, 0).clone();
        }
        let i = k - n - nm - 1;
        v.get(1 + i, self.d - 1).clone()
    }

    fn compute_gram(&self) -> Mat {
        // trace(ad_a ad_b) from the bracket table:
        //   sum_{c,k} bracket[a][k]_c * bracket[b][c]_k
        let nb = self.dim();
        Mat::from_fn(nb, nb, |a, b| {
            let mut tot = Q::zero();
            for k in 0..nb {
                for (c, u) in &self.bracket[a][k] {
                    for (kk, w) in &self.bracket[b][*c] {
                        if *kk == k {
                            tot += u * w;
                        }
                    }
                }
            }
            tot * &self.killing_scale
        })
    }

    /// Killing Gram matrix on `g_basis`.
    pub fn killing_gram(&self) -> &Mat {
        &self.gram
    }

    /// Structure constants: coordinates of `[g_a, g_b]`.
    pub fn bracket_coords(&self, a: usize, b: usize) -> &[(usize, Q)] {
        &self.bracket[a][b]
    }

    /// Check the Jacobi identity on every basis triple via the bracket table.
    pub fn jacobi_holds(&self) -> bool {
        let nb = self.dim();
        for a in 0..nb {
            for b in a + 1..nb {
                for c in b + 1..nb {
                    let mut acc = vec![Q::zero(); nb];
                    // [a,[b,c]] + [b,[c,a]] + [c,[a,b]]
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        for (k, u) in &self.bracket[y][z] {
                            for (l, w) in &self.bracket[x][*k] {
                                acc[*l] += u * w;
                            }
                        }
                    }
                    if acc.iter().any(|v| !v.is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Grading degree of a basis element: `-1`, `0` or `+1`.
    pub fn grade(&self, idx: usize) -> i32 {
        let n = self.n;
        let nm = self.m_keys.len();
        if idx < n {
            -1
        } else if idx <= n + nm {
            0
        } else {
            1
        }
    }

    /// Pairs `(b_i, b^i)` with `B(b_i, b^j) = δ_ij`, built by inverting the
    /// Killing Gram matrix. Use for Casimir-type sums.
    pub fn casimir_pairs(&self) -> Vec<(Mat, Mat)> {
        let nb = self.dim();
        let inv = invert_dense(&self.gram).expect("Killing form must be nondegenerate");
        let mut out = Vec::with_capacity(nb);
        for i in 0..nb {
            let mut dual = Mat::zero(self.d, self.d);
            for j in 0..nb {
                let c = inv.get(i, j);
                if !c.is_zero() {
                    dual.add_scaled_assign(c, &self.g_basis[j]);
                }
            }
            out.push((self.g_basis[i].clone(), dual));
        }
        out
    }

    /// The Casimir element acting on the defining module `V`, i.e.
    /// `sum_i b_i · b^i` as a `d x d` matrix.
    pub fn casimir_on_v(&self) -> Mat {
        let mut cas = Mat::zero(self.d, self.d);
        for (b, bd) in self.casimir_pairs() {
            cas.add_assign(&b.mul(&bd));
        }
        cas
    }
}

/// Dense Gauss-Jordan inverse for small matrices. Returns `None` if singular.
pub fn invert_dense(m: &Mat) -> Option<Mat> {
    assert_eq!(m.rows, m.cols);
    let nb = m.rows;
    let mut a = m.clone();
    let mut inv = Mat::eye(nb);
    for c in 0..nb {
        let pr = (c..nb).find(|&r| !a.get(r, c).is_zero())?;
        if pr != c {
            for j in 0..nb {
                let t = a.get(c, j).clone();
                a.set(c, j, a.get(pr, j).clone());
                a.set(pr, j, t);
                let t = inv.get(c, j).clone();
                inv.set(c, j, inv.get(pr, j).clone());
                inv.set(pr, j, t);
            }
        }
        let piv = a.get(c, c).clone();
        for j in 0..nb {
            a.set(c, j, a.get(c, j) / &piv);
            inv.set(c, j, inv.get(c, j) / &piv);
        }
        for r in 0..nb {
            if r != c && !a.get(r, c).is_zero() {
                let f = a.get(r, c).clone();
                for j in 0..nb {
                    let av = a.get(r, j) - &f * a.get(c, j);
                    a.set(r, j, av);
                    let iv = inv.get(r, j) - &f * inv.get(c, j);
                    inv.set(r, j, iv);
                }
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qr};

    #[test]
    fn dimensions() {
        for n in 2..=5 {
            let a = Algebra::new(n);
            assert_eq!(a.dim(), 2 * n + n * (n - 1) / 2 + 1);
            assert_eq!(a.d, n + 2);
        }
    }

    #[test]
    fn membership_and_closure() {
        let a = Algebra::new(3);
        for x in &a.g_basis {
            assert!(a.contains(x));
            for y in &a.g_basis {
                assert!(a.contains(&x.commutator(y)));
            }
        }
        assert!(!a.contains(&Mat::eye(a.d)));
    }

    #[test]
    fn coords_roundtrip() {
        let a = Algebra::new(3);
        for (i, x) in a.g_basis.iter().enumerate() {
            let c = a.g_coords(x);
            for (j, v) in c.iter().enumerate() {
                assert_eq!(!v.is_zero(), i == j);
            }
            assert_eq!(&a.from_coords(&c), x);
        }
    }

    #[test]
    fn jacobi() {
        assert!(Algebra::new(2).jacobi_holds());
        assert!(Algebra::new(3).jacobi_holds());
    }

    #[test]
    fn killing_values() {
        for n in 2..=4usize {
            let a = Algebra::new(n);
            assert_eq!(a.killing(&a.xi[0], &a.eta[0]), q(-2 * n as i64));
            assert_eq!(a.killing(&a.e_tilde, &a.e_tilde), q(2 * n as i64));
            // Killing = n * trace form on the defining module
            let tf = a.xi[0].mul(&a.eta[0]).trace();
            assert_eq!(a.killing(&a.xi[0], &a.eta[0]), q(n as i64) * tf);
            // Gram matches pairwise values
            let g = a.killing_gram();
            for i in 0..a.dim() {
                for j in 0..a.dim() {
                    assert_eq!(
                        g.get(i, j),
                        &a.killing(&a.g_basis[i], &a.g_basis[j]),
                        "gram mismatch at ({i},{j}) n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn killing_scale_hook() {
        let a = Algebra::with_killing_scale(2, q(2));
        assert_eq!(a.killing(&a.xi[0], &a.eta[0]), q(-8));
        assert_eq!(a.killing_gram().get(0, 0), &q(0));
    }

    #[test]
    fn casimir_scalar_on_v() {
        for n in 2..=3usize {
            let a = Algebra::new(n);
            let cas = a.casimir_on_v();
            let expect = Mat::eye(a.d).scale(&qr(n as i64 + 1, 2 * n as i64));
            assert_eq!(cas, expect);
        }
    }

    #[test]
    fn grading() {
        let a = Algebra::new(3);
        let nb = a.dim();
        for idx in 0..nb {
            let g = a.grade(idx);
            // [Et, x] = grade * x for basis elements
            let br = a.e_tilde.commutator(&a.g_basis[idx]);
            assert_eq!(br, a.g_basis[idx].scale(&q(g as i64)));
        }
    }
}
