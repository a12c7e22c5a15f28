//! Exact sparse linear algebra over the rationals.
//!
//! The public interface speaks rationals, but elimination happens on
//! integer rows: each incoming row is scaled by the least common multiple of
//! its denominators, every combination step is fraction-free
//! (`row * pivot_lead - pivot * row_lead`), and rows are divided by the gcd
//! of their entries after each step to control growth. The final reduced
//! echelon form is normalized back to rationals with unit pivots.
//!
//! Reduced row echelon form is canonical for the row space, so every query
//! here (rank, nullspace, solve) is deterministic regardless of the order in
//! which rows were produced.

use crate::rat::{parse_q, Q};
use num::bigint::BigInt;
use num::{Integer, One, Zero};
use std::collections::BTreeMap;

/// Sparse vector: coordinate -> value, zero values never stored.
pub type SparseVec = BTreeMap<usize, Q>;

/// Sorted sparse integer row.
type IntRow = Vec<(usize, BigInt)>;

fn to_int_row(v: &SparseVec) -> IntRow {
    let mut lcm = BigInt::one();
    for x in v.values() {
        lcm = lcm.lcm(x.denom());
    }
    let mut row: IntRow = v
        .iter()
        .map(|(c, x)| (*c, x.numer() * (&lcm / x.denom())))
        .filter(|(_, x)| !x.is_zero())
        .collect();
    normalize_content(&mut row);
    row
}

fn normalize_content(row: &mut IntRow) {
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, x) in row.iter() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if !g.is_one() && !g.is_zero() {
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// `a * ca - b * cb`, both rows sorted; result sorted, content-normalized.
fn combine(a: &IntRow, ca: &BigInt, b: &IntRow, cb: &BigInt) -> IntRow {
    let mut out = IntRow::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push((a[i].0, &a[i].1 * ca));
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(&b[j].1 * cb)));
            j += 1;
        } else {
            let v = &a[i].1 * ca - &b[j].1 * cb;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    normalize_content(&mut out);
    out
}

/// Incremental exact echelon form: rows keyed by leading column.
pub struct Echelon {
    ncols: usize,
    rows: BTreeMap<usize, IntRow>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Echelon {
        Echelon {
            ncols,
            rows: BTreeMap::new(),
        }
    }

    /// Reduce `row` against the current basis and insert the remainder if
    /// nonzero. Returns true if the row added a new pivot.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let mut row = to_int_row(v);
        self.insert_int(&mut row)
    }

    fn insert_int(&mut self, row: &mut IntRow) -> bool {
        loop {
            let Some(&(lead, ref lc)) = row.first() else {
                return false;
            };
            debug_assert!(lead < self.ncols);
            match self.rows.get(&lead) {
                Some(piv) => {
                    let pc = piv[0].1.clone();
                    let lc = lc.clone();
                    *row = combine(row, &pc, piv, &lc);
                }
                None => {
                    let mut r = std::mem::take(row);
                    normalize_content(&mut r);
                    self.rows.insert(lead, r);
                    return true;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot columns, ascending.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Finish Gauss-Jordan: eliminate every pivot column from all other rows
    /// and rescale pivots to 1. Returns the canonical RREF rows, sorted by
    /// pivot column.
    pub fn into_rref(mut self) -> Vec<SparseVec> {
        let leads: Vec<usize> = self.rows.keys().copied().collect();
        for &lead in leads.iter().rev() {
            let piv = self.rows.get(&lead).unwrap().clone();
            let pc = piv[0].1.clone();
            let others: Vec<usize> = self
                .rows
                .keys()
                .copied()
                .filter(|&l| l != lead)
                .collect();
            for l in others {
                let row = self.rows.get(&l).unwrap();
                if let Some(pos) = row.iter().position(|(c, _)| *c == lead) {
                    let rc = row[pos].1.clone();
                    let new = combine(row, &pc, &piv, &rc);
                    debug_assert_eq!(new[0].0, l);
                    self.rows.insert(l, new);
                }
            }
        }
        self.rows
            .into_values()
            .map(|r| {
                let lead = Q::from_integer(r[0].1.clone());
                r.into_iter()
                    .map(|(c, x)| (c, Q::from_integer(x) / &lead))
                    .collect()
            })
            .collect()
    }
}

/// Reduced row echelon form: returns (pivot columns ascending, reduced rows
/// with unit pivots, sorted by pivot column).
pub fn rref(rows: &[SparseVec], ncols: usize) -> (Vec<usize>, Vec<SparseVec>) {
    let mut ech = Echelon::new(ncols);
    for r in rows {
        ech.insert(r);
    }
    let pivots = ech.pivots();
    (pivots, ech.into_rref())
}

pub fn rank(rows: &[SparseVec], ncols: usize) -> usize {
    let mut ech = Echelon::new(ncols);
    for r in rows {
        ech.insert(r);
    }
    ech.rank()
}

/// Basis of `{x : A x = 0}` where the input rows are the rows of `A`.
///
/// One basis vector per free column `f` (ascending): `x_f = 1`,
/// `x_pivot = -R[pivot row, f]` — the canonical complement to the RREF.
pub fn nullspace(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    let (pivots, red) = rref(rows, ncols);
    nullspace_from_rref(&pivots, &red, ncols)
}

fn nullspace_from_rref(pivots: &[usize], red: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    let mut is_pivot = vec![false; ncols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for f in 0..ncols {
        if is_pivot[f] {
            continue;
        }
        let mut v = SparseVec::new();
        v.insert(f, Q::one());
        for (row, &c) in red.iter().zip(pivots.iter()) {
            if let Some(x) = row.get(&f) {
                v.insert(c, -x.clone());
            }
        }
        basis.push(v);
    }
    basis
}

/// Solve `A x = b` (rows of `A` paired with entries of `b`). Returns the
/// particular solution with all free variables zero, or `None` if
/// inconsistent.
pub fn solve(rows: &[SparseVec], rhs: &[Q], ncols: usize) -> Option<SparseVec> {
    assert_eq!(rows.len(), rhs.len());
    let mut ech = Echelon::new(ncols + 1);
    for (r, b) in rows.iter().zip(rhs.iter()) {
        let mut aug = r.clone();
        if !b.is_zero() {
            aug.insert(ncols, b.clone());
        }
        ech.insert(&aug);
    }
    let pivots = ech.pivots();
    if pivots.contains(&ncols) {
        return None;
    }
    let red = ech.into_rref();
    let mut x = SparseVec::new();
    for (row, &c) in red.iter().zip(pivots.iter()) {
        if let Some(v) = row.get(&ncols) {
            // row reads: x_c + sum_free a_f x_f = v; free vars set to zero
            x.insert(c, v.clone());
        }
    }
    Some(x)
}

/// Express `v` in the span of `cols`, returning coefficients, or `None`.
pub fn in_column_space(cols: &[SparseVec], v: &SparseVec) -> Option<SparseVec> {
    // assemble rows of the matrix whose j-th column is cols[j]
    let mut coords: Vec<usize> = v.keys().copied().collect();
    for c in cols {
        coords.extend(c.keys().copied());
    }
    coords.sort_unstable();
    coords.dedup();
    let mut rows = Vec::with_capacity(coords.len());
    let mut rhs = Vec::with_capacity(coords.len());
    for i in coords {
        let mut row = SparseVec::new();
        for (j, c) in cols.iter().enumerate() {
            if let Some(x) = c.get(&i) {
                row.insert(j, x.clone());
            }
        }
        rows.push(row);
        rhs.push(v.get(&i).cloned().unwrap_or_else(Q::zero));
    }
    solve(&rows, &rhs, cols.len())
}

// ------------------------------------------------------------- sparse export

/// Sparse matrix in coordinate form, for text export/import.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMat {
    pub rows: usize,
    pub cols: usize,
    pub entries: BTreeMap<(usize, usize), Q>,
}

impl SparseMat {
    pub fn new(rows: usize, cols: usize) -> SparseMat {
        SparseMat {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        assert!(r < self.rows && c < self.cols);
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    /// Canonical text form:
    ///
    /// ```text
    /// <rows> <cols> <nnz>
    /// <row> <col> <num>/<den>
    /// ...
    /// ```
    ///
    /// Indices are 0-based; entries sorted row-major; values in lowest terms
    /// with positive denominator. Lines starting with `#` are comments.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.entries.len());
        for ((r, c), v) in &self.entries {
            out.push_str(&format!("{} {} {}\n", r, c, crate::rat::fmt_frac(v)));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<SparseMat, String> {
        let mut lines = text.lines().filter(|l| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
        let header = lines.next().ok_or("empty sparse matrix text")?;
        let hp: Vec<&str> = header.split_whitespace().collect();
        if hp.len() != 3 {
            return Err(format!("bad header {header:?}, want 'rows cols nnz'"));
        }
        let rows: usize = hp[0].parse().map_err(|e| format!("bad rows: {e}"))?;
        let cols: usize = hp[1].parse().map_err(|e| format!("bad cols: {e}"))?;
        let nnz: usize = hp[2].parse().map_err(|e| format!("bad nnz: {e}"))?;
        let mut m = SparseMat::new(rows, cols);
        for line in lines {
            let p: Vec<&str> = line.split_whitespace().collect();
            if p.len() != 3 {
                return Err(format!("bad entry line {line:?}"));
            }
            let r: usize = p[0].parse().map_err(|e| format!("bad row index: {e}"))?;
            let c: usize = p[1].parse().map_err(|e| format!("bad col index: {e}"))?;
            if r >= rows || c >= cols {
                return Err(format!("index ({r},{c}) out of bounds {rows}x{cols}"));
            }
            let v = parse_q(p[2])?;
            if v.is_zero() {
                return Err(format!("explicit zero entry at ({r},{c})"));
            }
            if m.entries.insert((r, c), v).is_some() {
                return Err(format!("duplicate entry at ({r},{c})"));
            }
        }
        if m.entries.len() != nnz {
            return Err(format!("header said {nnz} entries, found {}", m.entries.len()));
        }
        Ok(m)
    }

    /// Rows as sparse vectors (for rank/nullspace queries).
    pub fn row_vecs(&self) -> Vec<SparseVec> {
        let mut out = vec![SparseVec::new(); self.rows];
        for ((r, c), v) in &self.entries {
            out[*r].insert(*c, v.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qr};

    fn sv(pairs: &[(usize, Q)]) -> SparseVec {
        pairs.iter().cloned().collect()
    }

    #[test]
    fn rref_canonical() {
        // same row space, different presentation -> identical RREF
        let a = vec![
            sv(&[(0, q(2)), (1, q(4)), (2, q(2))]),
            sv(&[(0, q(1)), (1, q(1))]),
        ];
        let b = vec![
            sv(&[(0, q(3)), (1, q(5)), (2, q(2))]),
            sv(&[(1, q(2)), (2, q(2))]),
            sv(&[(0, q(1)), (1, q(1))]),
        ];
        let (pa, ra) = rref(&a, 3);
        let (pb, rb) = rref(&b, 3);
        assert_eq!(pa, pb);
        assert_eq!(ra, rb);
        assert_eq!(pa, vec![0, 1]);
        // x - z = 0 ; y + z = 0  after reduction
        assert_eq!(ra[0], sv(&[(0, q(1)), (2, q(-1))]));
        assert_eq!(ra[1], sv(&[(1, q(1)), (2, q(1))]));
    }

    #[test]
    fn nullspace_matches_rref() {
        let rows = vec![
            sv(&[(0, q(1)), (1, q(2)), (3, q(1))]),
            sv(&[(1, q(1)), (2, q(1))]),
        ];
        let ns = nullspace(&rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                let dot: Q = r
                    .iter()
                    .map(|(c, x)| x * v.get(c).cloned().unwrap_or_else(Q::zero))
                    .sum();
                assert!(dot.is_zero());
            }
        }
        // canonical form: free columns are 2 and 3
        assert_eq!(ns[0].get(&2), Some(&q(1)));
        assert_eq!(ns[1].get(&3), Some(&q(1)));
    }

    #[test]
    fn rank_and_fractions() {
        let rows = vec![
            sv(&[(0, qr(1, 2)), (1, qr(1, 3))]),
            sv(&[(0, qr(3, 2)), (1, q(1))]),
            sv(&[(0, q(3)), (1, q(2))]),
        ];
        assert_eq!(rank(&rows, 2), 1);
    }

    #[test]
    fn solve_consistent_and_not() {
        let rows = vec![sv(&[(0, q(1)), (1, q(1))]), sv(&[(0, q(1)), (1, q(-1))])];
        let x = solve(&rows, &[q(3), q(1)], 2).unwrap();
        assert_eq!(x, sv(&[(0, q(2)), (1, q(1))]));
        let bad = vec![sv(&[(0, q(1))]), sv(&[(0, q(2))])];
        assert!(solve(&bad, &[q(1), q(3)], 1).is_none());
        // underdetermined: free var zeroed
        let under = vec![sv(&[(0, q(1)), (1, q(5))])];
        let x = solve(&under, &[q(7)], 2).unwrap();
        assert_eq!(x, sv(&[(0, q(7))]));
    }

    #[test]
    fn column_space_membership() {
        let cols = vec![sv(&[(0, q(1)), (2, q(1))]), sv(&[(1, q(2))])];
        let v = sv(&[(0, qr(1, 2)), (1, q(3)), (2, qr(1, 2))]);
        let c = in_column_space(&cols, &v).unwrap();
        assert_eq!(c, sv(&[(0, qr(1, 2)), (1, qr(3, 2))]));
        let w = sv(&[(0, q(1))]); // misses the (2, .) component
        assert!(in_column_space(&cols, &w).is_none());
    }

    #[test]
    fn sparse_text_roundtrip() {
        let mut m = SparseMat::new(3, 5);
        m.set(0, 4, qr(-7, 3));
        m.set(2, 0, q(5));
        m.set(1, 1, qr(1, 2));
        let text = m.to_text();
        assert!(text.starts_with("3 5 3\n"));
        let m2 = SparseMat::from_text(&text).unwrap();
        assert_eq!(m, m2);
        assert_eq!(text, m2.to_text());
        // with comments
        let commented = format!("# exported\n{}", text);
        assert_eq!(SparseMat::from_text(&commented).unwrap(), m);
        // malformed inputs
        assert!(SparseMat::from_text("1 1\n").is_err());
        assert!(SparseMat::from_text("1 1 1\n0 0 0/1\n").is_err());
        assert!(SparseMat::from_text("1 1 2\n0 0 1/1\n").is_err());
    }

    #[test]
    fn echelon_insert_reports_new_pivots() {
        let mut e = Echelon::new(3);
        assert!(e.insert(&sv(&[(0, q(1)), (1, q(1))])));
        assert!(!e.insert(&sv(&[(0, q(2)), (1, q(2))])));
        assert!(e.insert(&sv(&[(1, q(1))])));
        assert_eq!(e.rank(), 2);
        assert_eq!(e.pivots(), vec![0, 1]);
    }
}
