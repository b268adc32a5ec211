//! Subspaces of F_q^n in canonical form, with enumeration.
//!
//! A subspace is stored as the reduced row echelon basis of its row space,
//! which is unique, so equality of subspaces is equality of representations
//! and enumeration order is the lexicographic order of the canonical
//! matrices. These subspaces are the links of vertices in the lattice-model
//! building, so the enumerators here drive every neighbor and split-target
//! computation there.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A subspace of F_q^n, canonical RREF rows, pivots strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subspace {
    pub q: u64,
    pub n: usize,
    pub rows: Vec<Vec<u64>>,
}

fn inv_mod(a: u64, q: u64) -> u64 {
    // q is a small prime; a scan is simplest and exact.
    (1..q).find(|x| (a * x) % q == 1).expect("nonzero element has an inverse mod a prime")
}

/// Reduced row echelon form over F_q; returns the nonzero rows.
fn rref(mut mat: Vec<Vec<u64>>, n: usize, q: u64) -> Vec<Vec<u64>> {
    for row in &mut mat {
        debug_assert_eq!(row.len(), n);
        for x in row.iter_mut() {
            *x %= q;
        }
    }
    let mut r = 0;
    for c in 0..n {
        let Some(pivot) = (r..mat.len()).find(|&i| mat[i][c] != 0) else {
            continue;
        };
        mat.swap(r, pivot);
        let inv = inv_mod(mat[r][c], q);
        for x in mat[r].iter_mut() {
            *x = (*x * inv) % q;
        }
        for i in 0..mat.len() {
            if i != r && mat[i][c] != 0 {
                let f = mat[i][c];
                for j in 0..n {
                    let sub = (f * mat[r][j]) % q;
                    mat[i][j] = (mat[i][j] + q * q - sub) % q;
                }
            }
        }
        r += 1;
        if r == mat.len() {
            break;
        }
    }
    mat.truncate(r);
    mat
}

impl Subspace {
    /// Canonicalize a spanning set. Entries are reduced mod q.
    pub fn canonicalize(rows: Vec<Vec<u64>>, n: usize, q: u64) -> Result<Subspace> {
        if q < 2 {
            return Err(Error::invalid(format!("subspaces need a field order q >= 2, got {q}")));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid(format!("spanning vectors must have length {n}")));
        }
        Ok(Subspace { q, n, rows: rref(rows, n, q) })
    }

    pub fn zero(n: usize, q: u64) -> Subspace {
        Subspace { q, n, rows: Vec::new() }
    }

    pub fn full(n: usize, q: u64) -> Subspace {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
            .collect();
        Subspace { q, n, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Membership of a single vector.
    pub fn contains_vector(&self, v: &[u64]) -> bool {
        // Reduce v against the canonical rows; membership iff it vanishes.
        let mut v: Vec<u64> = v.iter().map(|x| x % self.q).collect();
        for row in &self.rows {
            let pivot = row.iter().position(|&x| x != 0).expect("canonical rows are nonzero");
            if v[pivot] != 0 {
                let f = v[pivot];
                for j in 0..self.n {
                    let sub = (f * row[j]) % self.q;
                    v[j] = (v[j] + self.q * self.q - sub) % self.q;
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }
}

/// Is `inner` a subspace of `outer`?
pub fn contains(outer: &Subspace, inner: &Subspace) -> bool {
    assert_eq!((outer.n, outer.q), (inner.n, inner.q), "subspaces live in the same F_q^n");
    inner.rows.iter().all(|r| outer.contains_vector(r))
}

/// Sum of subspaces.
pub fn join(a: &Subspace, b: &Subspace) -> Subspace {
    assert_eq!((a.n, a.q), (b.n, b.q), "subspaces live in the same F_q^n");
    let mut rows = a.rows.clone();
    rows.extend(b.rows.iter().cloned());
    Subspace { q: a.q, n: a.n, rows: rref(rows, a.n, a.q) }
}

/// Intersection of subspaces, by the kernel trick on the joint span:
/// a combination of a-rows equals a combination of b-rows exactly on the
/// kernel of the stacked matrix [A; B].
pub fn meet(a: &Subspace, b: &Subspace) -> Subspace {
    assert_eq!((a.n, a.q), (b.n, b.q), "subspaces live in the same F_q^n");
    let (n, q) = (a.n, a.q);
    let ra = a.rows.len();
    let rb = b.rows.len();
    if ra == 0 || rb == 0 {
        return Subspace::zero(n, q);
    }
    // Solve x*A + y*B = 0 by row-reducing the transpose system; columns are
    // the a-rows then b-rows, i.e. we find the nullspace of the
    // (n) x (ra+rb) matrix M with M[i][j] = basis_j[i].
    let cols = ra + rb;
    let mut m: Vec<Vec<u64>> = vec![vec![0; cols]; n];
    for (j, row) in a.rows.iter().enumerate() {
        for i in 0..n {
            m[i][j] = row[i];
        }
    }
    for (j, row) in b.rows.iter().enumerate() {
        for i in 0..n {
            m[i][ra + j] = row[i];
        }
    }
    let reduced = rref(m, cols, q);
    // Free columns of the reduced system give nullspace basis vectors.
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    for (r, row) in reduced.iter().enumerate() {
        let p = row.iter().position(|&x| x != 0).unwrap();
        pivot_of_col[p] = Some(r);
    }
    let mut meet_rows = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        // Nullspace vector: 1 in the free column, back-filled pivots.
        let mut coeff = vec![0u64; cols];
        coeff[free] = 1;
        for c in 0..cols {
            if let Some(r) = pivot_of_col[c] {
                coeff[c] = (q - reduced[r][free] % q) % q;
            }
        }
        // The a-part of the combination is a vector in the intersection.
        let mut v = vec![0u64; n];
        for (j, row) in a.rows.iter().enumerate() {
            for i in 0..n {
                v[i] = (v[i] + coeff[j] * row[i]) % q;
            }
        }
        meet_rows.push(v);
    }
    Subspace { q, n, rows: rref(meet_rows, n, q) }
}

/// All k-dimensional subspaces of F_q^n, sorted by their canonical matrices.
pub fn enumerate_subspaces(n: usize, q: u64, k: usize) -> Vec<Subspace> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    // Every canonical matrix is determined by its pivot-column set plus the
    // free entries: row r may be nonzero only right of its pivot and away
    // from other pivot columns.
    for pivots in combinations(n, k) {
        let mut free_positions = Vec::new();
        for (r, &p) in pivots.iter().enumerate() {
            for c in (p + 1)..n {
                if !pivots.contains(&c) {
                    free_positions.push((r, c));
                }
            }
        }
        let mut values = vec![0u64; free_positions.len()];
        loop {
            let mut rows = vec![vec![0u64; n]; k];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r][p] = 1;
            }
            for (idx, &(r, c)) in free_positions.iter().enumerate() {
                rows[r][c] = values[idx];
            }
            out.push(Subspace { q, n, rows });
            // Odometer over the free entries.
            let mut i = 0;
            loop {
                if i == values.len() {
                    break;
                }
                values[i] += 1;
                if values[i] < q {
                    break;
                }
                values[i] = 0;
                i += 1;
            }
            if i == values.len() {
                break;
            }
        }
    }
    out.sort();
    out
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All k-dimensional W with `lower` <= W <= `upper`, in deterministic order.
///
/// Works in the quotient upper/lower: extend a basis of `lower` to one of
/// `upper`, enumerate (k - dim lower)-dimensional subspaces of the quotient,
/// and pull back. The count is [dim U - dim L choose k - dim L]_q.
pub fn enumerate_between(lower: &Subspace, upper: &Subspace, k: usize) -> Result<Vec<Subspace>> {
    assert_eq!((lower.n, lower.q), (upper.n, upper.q), "subspaces live in the same F_q^n");
    if !contains(upper, lower) {
        return Err(Error::invalid("enumerate_between: lower is not contained in upper"));
    }
    let (n, q) = (lower.n, lower.q);
    let dl = lower.dim();
    let du = upper.dim();
    if k < dl || k > du {
        return Ok(Vec::new());
    }
    // Complement basis of lower inside upper.
    let mut complement: Vec<Vec<u64>> = Vec::new();
    let mut span = lower.clone();
    for row in &upper.rows {
        if !span.contains_vector(row) {
            complement.push(row.clone());
            let mut rows = span.rows.clone();
            rows.push(row.clone());
            span = Subspace { q, n, rows: rref(rows, n, q) };
        }
    }
    debug_assert_eq!(complement.len(), du - dl);
    let mut out = Vec::new();
    for small in enumerate_subspaces(du - dl, q, k - dl) {
        let mut rows = lower.rows.clone();
        for srow in &small.rows {
            let mut v = vec![0u64; n];
            for (j, c) in complement.iter().enumerate() {
                for i in 0..n {
                    v[i] = (v[i] + srow[j] * c[i]) % q;
                }
            }
            rows.push(v);
        }
        out.push(Subspace { q, n, rows: rref(rows, n, q) });
    }
    out.sort();
    Ok(out)
}
