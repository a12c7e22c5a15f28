//! The quotient module `g/m` that coordinatizes both legs of the calculus,
//! plus the metric and projector data the operators need.
//!
//! Covector ids (bit positions in monomial masks):
//!
//! * `0` — `E`, represented by the grading element `Ẽ`;
//! * `1..=n` — `F_i`, represented by `ξ_i` (interior leg directions);
//! * `n+1..=2n` — `G_i`, represented by `η_i + ξ_i` (boundary leg directions).
//!
//! A "p-leg" monomial uses ids `0..=n`, a "q-leg" monomial ids `n+1..=2n`.
//! The metric on the p-leg is diagonal: `|E|² = 2nκ`, `|F_i|² = nκ`; the 2:1
//! ratio is forced by the commutation of the interior Hodge star with the
//! boundary differential, and the default `κ = 1/(2n)` makes `|E| = 1`, the
//! normalization in which the weighted-Laplacian eigenvalue constants hold
//! verbatim.

use crate::algebra::Algebra;
use crate::mat::Mat;
use crate::rat::{q, qr, Q};
use num::{One, Zero};

/// Sparse coordinates in `g/m`: pairs `(covector id, coefficient)`.
pub type GmCoords = Vec<(usize, Q)>;

pub struct Model {
    pub n: usize,
    /// `n + 2`, dimension of the defining module.
    pub d: usize,
    /// `2n + 1`, dimension of `g/m` (number of covector ids).
    pub nb: usize,
    /// Bit mask of p-leg ids `0..=n`.
    pub pmask: u32,
    /// Bit mask of q-leg ids `n+1..=2n`.
    pub qmask: u32,
    /// Global metric scale; default `1/(2n)`.
    pub kappa: Q,
    pub alg: Algebra,
    /// Representative matrix for each covector id.
    pub rep: Vec<Mat>,
    /// Diagonal metric coefficients for p-leg ids `0..=n`.
    pub gdiag: Vec<Q>,
    /// Projector onto the highest weight line `V_1 = span(e_0)`.
    pub pi1: Mat,
    /// Projector onto the middle block `V_0`.
    pub pi0: Mat,
    /// Projector onto the lowest line `V_{-1} = span(e_{d-1})`.
    pub pim1: Mat,
    /// Cached `proj_gm([rep_b, rep_c])` for `b < c`, indexed by `pair_index`.
    pair_bracket: Vec<GmCoords>,
    /// Cached `proj_gm([m_g, rep_b])` per rotation generator `g` and id `b`.
    m_bracket: Vec<Vec<GmCoords>>,
}

impl Model {
    /// Model at the calibrated default scale `κ = 1/(2n)`.
    pub fn new(n: usize) -> Model {
        Model::with_kappa(n, qr(1, 2 * n as i64))
    }

    pub fn with_kappa(n: usize, kappa: Q) -> Model {
        Model::with_algebra(Algebra::new(n), kappa)
    }

    /// Build on a custom algebra (used by fault-injection tests).
    pub fn with_algebra(alg: Algebra, kappa: Q) -> Model {
        let n = alg.n;
        let d = alg.d;
        let nb = 2 * n + 1;
        let pmask = (1u32 << (n + 1)) - 1;
        let qmask = ((1u32 << nb) - 1) ^ pmask;
        let mut rep = Vec::with_capacity(nb);
        rep.push(alg.e_tilde.clone());
        for i in 0..n {
            rep.push(alg.xi[i].clone());
        }
        for i in 0..n {
            rep.push(alg.eta[i].add(&alg.xi[i]));
        }
        let mut gdiag = Vec::with_capacity(n + 1);
        gdiag.push(q(2 * n as i64) * &kappa);
        for _ in 0..n {
            gdiag.push(q(n as i64) * &kappa);
        }
        let pi1 = Mat::unit(d, d, 0, 0, Q::one());
        let pim1 = Mat::unit(d, d, d - 1, d - 1, Q::one());
        let pi0 = Mat::eye(d).sub(&pi1.add(&pim1));

        let mut model = Model {
            n,
            d,
            nb,
            pmask,
            qmask,
            kappa,
            alg,
            rep,
            gdiag,
            pi1,
            pi0,
            pim1,
            pair_bracket: Vec::new(),
            m_bracket: Vec::new(),
        };
        let mut pair = Vec::with_capacity(nb * (nb - 1) / 2);
        for b in 0..nb {
            for c in b + 1..nb {
                let br = model.rep[b].commutator(&model.rep[c]);
                pair.push(model.proj_gm(&br));
            }
        }
        model.pair_bracket = pair;
        let mut mbr = Vec::with_capacity(model.alg.m_mats.len());
        for g in 0..model.alg.m_mats.len() {
            let mut per = Vec::with_capacity(nb);
            for b in 0..nb {
                let br = model.alg.m_mats[g].commutator(&model.rep[b]);
                per.push(model.proj_gm(&br));
            }
            mbr.push(per);
        }
        model.m_bracket = mbr;
        model
    }

    /// Index into `pair_bracket` for `b < c`.
    #[inline]
    fn pair_index(&self, b: usize, c: usize) -> usize {
        debug_assert!(b < c && c < self.nb);
        // rows of the strict upper triangle, laid out row by row
        b * self.nb - b * (b + 1) / 2 + (c - b - 1)
    }

    /// Cached coordinates of `[rep_b, rep_c]` in `g/m`, for `b < c`.
    pub fn bracket_gm(&self, b: usize, c: usize) -> &GmCoords {
        &self.pair_bracket[self.pair_index(b, c)]
    }

    /// Cached coordinates of `[m_g, rep_b]` in `g/m`.
    pub fn m_bracket_gm(&self, g: usize, b: usize) -> &GmCoords {
        &self.m_bracket[g][b]
    }

    /// Projection `g -> g/m` in covector coordinates:
    /// `E`-coordinate is the diagonal scalar, `G`-coordinates come from the
    /// degree `-1` column `X`, `F`-coordinates from `Y - X`.
    pub fn proj_gm(&self, x: &Mat) -> GmCoords {
        let bl = self.alg.decompose(x);
        let mut out = Vec::new();
        if !bl.a.is_zero() {
            out.push((0, bl.a));
        }
        for i in 0..self.n {
            let f = &bl.y[i] - &bl.x[i];
            if !f.is_zero() {
                out.push((1 + i, f));
            }
        }
        for i in 0..self.n {
            if !bl.x[i].is_zero() {
                out.push((self.n + 1 + i, bl.x[i].clone()));
            }
        }
        out.sort_by_key(|e| e.0);
        out
    }

    /// Adjoint action on matrix values: `ρ_x(A) = [x, A]`.
    pub fn rho(&self, x: &Mat, a: &Mat) -> Mat {
        x.commutator(a)
    }

    /// Twisted action: `ρ^θ_x(A) = θ(x)·A - A·x`.
    pub fn rho_theta(&self, x: &Mat, a: &Mat) -> Mat {
        self.alg.theta(x).mul(a).sub(&a.mul(x))
    }

    /// Input-leg dual action: `ρ^{V*}_x(A) = -A·x`.
    pub fn rho_dual_in(&self, x: &Mat, a: &Mat) -> Mat {
        a.mul(x).neg()
    }

    /// Normalization constant for the boundary codifferential, derived from
    /// the Killing form: `1 / B(ξ_1, η_1) = -1/(2n)` (picks up any injected
    /// Killing scale).
    pub fn codiff_norm(&self) -> Q {
        let b = self.alg.killing(&self.alg.xi[0], &self.alg.eta[0]);
        Q::one() / b
    }

    /// Dual pairs `(ξ_j, η_j / B(ξ_j, η_j))` used by the dual-basis route of
    /// the chain codifferential (also picks up any injected Killing scale).
    pub fn killing_dual_pairs(&self) -> Vec<(Mat, Mat)> {
        (0..self.n)
            .map(|j| {
                let b = self.alg.killing(&self.alg.xi[j], &self.alg.eta[j]);
                (self.alg.xi[j].clone(), self.alg.eta[j].scale(&(Q::one() / b)))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks_and_reps() {
        let m = Model::new(3);
        assert_eq!(m.nb, 7);
        assert_eq!(m.pmask, 0b0001111);
        assert_eq!(m.qmask, 0b1110000);
        assert_eq!(m.rep[0], m.alg.e_tilde);
        assert_eq!(m.rep[1], m.alg.xi[0]);
        assert_eq!(m.rep[4], m.alg.eta[0].add(&m.alg.xi[0]));
        assert_eq!(m.gdiag[0], q(6) * &m.kappa);
        assert_eq!(m.gdiag[1], q(3) * &m.kappa);
        assert_eq!(m.kappa, qr(1, 6));
    }

    #[test]
    fn proj_gm_on_reps() {
        let m = Model::new(3);
        // each representative projects to its own covector id
        for b in 0..m.nb {
            let c = m.proj_gm(&m.rep[b]);
            assert_eq!(c, vec![(b, Q::one())], "rep {b}");
        }
        // eta_i alone: X = e_i, Y = 0 -> G-coord 1, F-coord -1
        let c = m.proj_gm(&m.alg.eta[1]);
        assert_eq!(c, vec![(2, -Q::one()), (3 + 2, Q::one())]);
    }

    #[test]
    fn pair_bracket_cache_matches_direct() {
        let m = Model::new(2);
        for b in 0..m.nb {
            for c in b + 1..m.nb {
                let direct = m.proj_gm(&m.rep[b].commutator(&m.rep[c]));
                assert_eq!(m.bracket_gm(b, c), &direct);
            }
        }
    }

    #[test]
    fn codiff_norm_default_and_scaled() {
        let m = Model::new(3);
        assert_eq!(m.codiff_norm(), qr(-1, 6));
        let m2 = Model::with_algebra(Algebra::with_killing_scale(3, q(2)), qr(1, 6));
        assert_eq!(m2.codiff_norm(), qr(-1, 12));
    }

    #[test]
    fn projectors_resolve_identity() {
        let m = Model::new(4);
        let sum = m.pi1.add(&m.pi0).add(&m.pim1);
        assert_eq!(sum, Mat::eye(m.d));
        assert_eq!(m.pi1.mul(&m.pi0), Mat::zero(m.d, m.d));
    }
}
