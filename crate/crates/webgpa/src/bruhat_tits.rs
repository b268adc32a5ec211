//! The building of SL_n over Q_q, in its lattice-class model.
//!
//! A vertex is a homothety class of full-rank Z[1/q]-lattices in Q^n. The
//! canonical representative is the unique scaling L with L inside Z^n but
//! not inside q Z^n, stored as the upper-triangular Hermite basis matrix
//! (row span, diagonal entries powers of q, entries above a pivot reduced
//! mod that pivot). Classes [M] adjacent to [L] correspond to the proper
//! nonzero subspaces S of L/qL: the neighbor is the preimage of S, and the
//! edge label is dim S. Relative position of two arbitrary classes is read
//! off the q-valuations of the elementary divisors of the change of basis.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num::{BigInt, Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::BuildingGraph;
use crate::projgeom::{self, Subspace};

/// A homothety class of lattices, canonical Hermite representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[derive(Serialize, Deserialize)]
#[serde(try_from = "LatticeClassRepr", into = "LatticeClassRepr")]
pub struct LatticeClass {
    q: u64,
    n: usize,
    /// Canonical basis rows, upper triangular.
    mat: Vec<Vec<i64>>,
}

/// Serialized shape: diagonal as valuation exponents, plus the rows of
/// entries strictly above the diagonal.
#[derive(Clone, Serialize, Deserialize)]
struct LatticeClassRepr {
    q: u64,
    n: usize,
    diag: Vec<u32>,
    offdiag: Vec<Vec<i64>>,
}

impl From<LatticeClass> for LatticeClassRepr {
    fn from(c: LatticeClass) -> Self {
        let diag = (0..c.n).map(|i| val_q_i64(c.mat[i][i], c.q)).collect();
        let offdiag = (0..c.n).map(|i| c.mat[i][i + 1..].to_vec()).collect();
        LatticeClassRepr { q: c.q, n: c.n, diag, offdiag }
    }
}

impl TryFrom<LatticeClassRepr> for LatticeClass {
    type Error = Error;
    fn try_from(r: LatticeClassRepr) -> Result<Self> {
        let mut mat = vec![vec![0i64; r.n]; r.n];
        for i in 0..r.n {
            mat[i][i] = (r.q as i64).pow(*r.diag.get(i).ok_or_else(|| Error::invalid("short diag"))?);
            let row = r.offdiag.get(i).ok_or_else(|| Error::invalid("short offdiag"))?;
            if row.len() != r.n - i - 1 {
                return Err(Error::invalid("offdiag row has the wrong length"));
            }
            mat[i][i + 1..].copy_from_slice(row);
        }
        LatticeClass::from_rows(mat.iter().map(|r2| r2.iter().map(|&x| x as i128).collect()).collect(), r.n, r.q)
    }
}

fn val_q_i64(x: i64, q: u64) -> u32 {
    let mut x = x.unsigned_abs();
    let mut v = 0;
    while x % q == 0 && x > 0 {
        x /= q;
        v += 1;
    }
    v
}

fn val_q_big(x: &BigInt, q: u64) -> usize {
    assert!(!x.is_zero());
    let q = BigInt::from(q);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (d, r) = x.div_rem(&q);
        if !r.is_zero() {
            return v;
        }
        x = d;
        v += 1;
    }
}

/// Hermite form of a full-rank-n integer row span: upper triangular,
/// positive diagonal, entries above a pivot reduced into [0, pivot).
fn hermite(mut m: Vec<Vec<i128>>, n: usize) -> Result<Vec<Vec<i128>>> {
    let rows = m.len();
    let mut r = 0;
    for c in 0..n {
        // Euclid over the column below row r.
        loop {
            let Some(best) = (r..rows)
                .filter(|&i| m[i][c] != 0)
                .min_by_key(|&i| m[i][c].unsigned_abs())
            else {
                break;
            };
            m.swap(r, best);
            let mut reduced_all = true;
            for i in (r + 1)..rows {
                if m[i][c] != 0 {
                    let f = m[i][c].div_euclid(m[r][c]);
                    for j in 0..n {
                        m[i][j] -= f * m[r][j];
                    }
                    if m[i][c] != 0 {
                        reduced_all = false;
                    }
                }
            }
            if reduced_all {
                break;
            }
        }
        if m[r][c] == 0 {
            return Err(Error::invalid("lattice basis is not full rank"));
        }
        if m[r][c] < 0 {
            for j in 0..n {
                m[r][j] = -m[r][j];
            }
        }
        for i in 0..r {
            let f = m[i][c].div_euclid(m[r][c]);
            if f != 0 {
                for j in 0..n {
                    m[i][j] -= f * m[r][j];
                }
            }
        }
        r += 1;
        if r == n {
            break;
        }
    }
    if r < n {
        return Err(Error::invalid("lattice basis is not full rank"));
    }
    m.truncate(n);
    Ok(m)
}

impl LatticeClass {
    /// Class of the row span, normalized so L fits in Z^n but not q Z^n.
    pub fn from_rows(rows: Vec<Vec<i128>>, n: usize, q: u64) -> Result<LatticeClass> {
        if q < 2 {
            return Err(Error::invalid(format!("residue order must be at least 2, got {q}")));
        }
        if rows.len() < n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("need at least n spanning rows of length n"));
        }
        let mut h = hermite(rows, n)?;
        // Scale so that not every entry is divisible by q.
        let qi = q as i128;
        while h.iter().all(|row| row.iter().all(|&x| x % qi == 0)) {
            for row in &mut h {
                for x in row.iter_mut() {
                    *x /= qi;
                }
            }
        }
        let mut mat = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                mat[i][j] = i64::try_from(h[i][j])
                    .map_err(|_| Error::invalid("lattice entries exceed 64 bits"))?;
            }
            let d = mat[i][i];
            if d <= 0 || {
                let v = val_q_i64(d, q);
                (q as i64).pow(v) != d
            } {
                return Err(Error::invalid(
                    "row span is not commensurable with Z^n up to q-power index",
                ));
            }
        }
        Ok(LatticeClass { q, n, mat })
    }

    pub fn standard(n: usize, q: u64) -> Result<LatticeClass> {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
            .collect();
        LatticeClass::from_rows(rows, n, q)
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.mat
    }

    /// Valuation of the index [Z^n : L], the sum of diagonal valuations.
    pub fn index_valuation(&self) -> usize {
        (0..self.n).map(|i| val_q_i64(self.mat[i][i], self.q) as usize).sum()
    }

    fn mat_big(&self) -> Vec<Vec<BigInt>> {
        self.mat.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L[")?;
        for (i, row) in self.mat.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, "]")
    }
}

fn det_big(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    match n {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = BigInt::zero();
            for i in 0..n {
                if m[i][0].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> = (0..n)
                    .filter(|&r| r != i)
                    .map(|r| m[r][1..].to_vec())
                    .collect();
                let term = &m[i][0] * det_big(&minor);
                if i % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

fn adjugate_big(m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![BigInt::one()]];
    }
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| {
                    (0..n).filter(|&c| c != i).map(|c| m[r][c].clone()).collect()
                })
                .collect();
            let d = det_big(&minor);
            adj[i][j] = if (i + j) % 2 == 0 { d } else { -d };
        }
    }
    adj
}

fn matmul_big(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = BigInt::zero();
            for t in 0..k {
                acc += &a[i][t] * &b[t][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

/// q-valuations of the elementary divisors of B_y B_x^{-1}, ascending,
/// via determinantal divisors of the integer matrix B_y adj(B_x).
fn relative_valuations(x: &LatticeClass, y: &LatticeClass, q: u64) -> Vec<i64> {
    let n = x.n;
    let d = matmul_big(&y.mat_big(), &adjugate_big(&x.mat_big()));
    let dx = x.index_valuation() as i64;
    let mut prev = 0i64;
    let mut vals = Vec::with_capacity(n);
    for k in 1..=n {
        let mut g = BigInt::zero();
        for rows in projgeom::combinations(n, k) {
            for cols in projgeom::combinations(n, k) {
                let minor: Vec<Vec<BigInt>> = rows
                    .iter()
                    .map(|&r| cols.iter().map(|&c| d[r][c].clone()).collect())
                    .collect();
                let det = det_big(&minor);
                if !det.is_zero() {
                    g = g.gcd(&det);
                    if g.is_one() {
                        break;
                    }
                }
            }
            if g.is_one() {
                break;
            }
        }
        debug_assert!(!g.is_zero(), "change of basis must be invertible");
        let s_k = val_q_big(&g, q) as i64 - (k as i64) * dx;
        vals.push(s_k - prev);
        prev = s_k;
    }
    vals
}

/// The building graph of lattice classes, with a valuation budget that
/// bounds how deep any representative may get; pushing past it reports a
/// precision error instead of silently rescaling.
#[derive(Debug)]
pub struct BruhatTits {
    n: usize,
    q: u64,
    max_val: usize,
    neighbor_cache: RwLock<HashMap<(LatticeClass, usize), Vec<LatticeClass>>>,
}

impl BruhatTits {
    /// `radius` is the intended working ball around the standard vertex;
    /// the valuation budget is radius + 2, which covers the boundary walks
    /// the evaluators make from bases inside the ball.
    pub fn new(n: usize, q: u64, radius: usize) -> Result<Self> {
        if n < 2 || n > 6 {
            return Err(Error::invalid(format!("lattice model rank must be in 2..=6, got {n}")));
        }
        if crate::field::PrimeField::new(q).is_err() {
            return Err(Error::invalid(format!("residue order must be a prime, got {q}")));
        }
        Ok(BruhatTits {
            n,
            q,
            max_val: radius + 2,
            neighbor_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn standard_vertex(&self) -> LatticeClass {
        LatticeClass::standard(self.n, self.q).expect("standard lattice")
    }

    pub fn budget(&self) -> usize {
        self.max_val
    }

    fn check_budget(&self, c: &LatticeClass) -> Result<()> {
        let worst = (0..self.n)
            .map(|i| val_q_i64(c.mat[i][i], self.q) as usize)
            .max()
            .unwrap_or(0);
        if worst > self.max_val {
            return Err(Error::Precision { needed: worst, budget: self.max_val });
        }
        Ok(())
    }

    /// The subspace of L_v/qL_v (coordinates in v's basis) whose preimage
    /// is the neighbor y.
    pub fn residue_subspace(&self, v: &LatticeClass, y: &LatticeClass) -> Result<Subspace> {
        let n = self.n;
        let d = matmul_big(&y.mat_big(), &adjugate_big(&v.mat_big()));
        let dx = v.index_valuation();
        // Minimum entry valuation locates the representative inside L_v.
        let vals = relative_valuations(v, y, self.q);
        let v1 = vals[0];
        if *vals.last().unwrap() - v1 != 1 || vals.iter().any(|&t| t - v1 > 1) {
            return Err(Error::invalid("residue_subspace: vertices are not adjacent"));
        }
        // dx + v1 is the valuation of the entry gcd of the integer matrix d,
        // so the shift is nonnegative and the division below is exact.
        let shift = u32::try_from(dx as i64 + v1).expect("entry gcd valuation is nonnegative");
        let qb = BigInt::from(self.q);
        let denom = qb.pow(shift);
        let mut rows = Vec::with_capacity(n);
        for drow in d.iter().take(n) {
            let mut row = Vec::with_capacity(n);
            for e in drow.iter().take(n) {
                let (quot, rem) = e.div_rem(&denom);
                debug_assert!(rem.is_zero(), "sub-representative must be integral");
                let m = (quot % &qb + &qb) % &qb;
                row.push(m.to_u64_digits().1.first().copied().unwrap_or(0));
            }
            rows.push(row);
        }
        let s = Subspace::canonicalize(rows, n, self.q)?;
        Ok(s)
    }

    /// Neighbor of v attached to the residue subspace S (in v's basis).
    pub fn neighbor_from_subspace(&self, v: &LatticeClass, s: &Subspace) -> Result<LatticeClass> {
        let n = self.n;
        let mut rows: Vec<Vec<i128>> = Vec::with_capacity(s.dim() + n);
        for srow in &s.rows {
            let mut vec = vec![0i128; n];
            for (j, &coef) in srow.iter().enumerate() {
                for c in 0..n {
                    vec[c] += coef as i128 * v.mat[j][c] as i128;
                }
            }
            rows.push(vec);
        }
        for r in 0..n {
            rows.push((0..n).map(|c| self.q as i128 * v.mat[r][c] as i128).collect());
        }
        let class = LatticeClass::from_rows(rows, n, self.q)?;
        self.check_budget(&class)?;
        Ok(class)
    }
}

impl BuildingGraph for BruhatTits {
    type V = LatticeClass;

    fn rank(&self) -> usize {
        self.n
    }

    fn order(&self) -> u64 {
        self.q
    }

    fn type_of(&self, v: &LatticeClass) -> usize {
        v.index_valuation() % self.n
    }

    fn neighbors(&self, v: &LatticeClass, m: usize) -> Result<Vec<LatticeClass>> {
        if m == 0 || m >= self.n {
            return Err(Error::invalid(format!("edge label {m} outside 1..={}", self.n - 1)));
        }
        if let Some(hit) = self.neighbor_cache.read().unwrap().get(&(v.clone(), m)) {
            return Ok(hit.clone());
        }
        let mut out = Vec::new();
        for s in projgeom::enumerate_subspaces(self.n, self.q, m) {
            out.push(self.neighbor_from_subspace(v, &s)?);
        }
        self.neighbor_cache
            .write()
            .unwrap()
            .entry((v.clone(), m))
            .or_insert_with(|| out.clone());
        Ok(out)
    }

    fn edge_label(&self, x: &LatticeClass, y: &LatticeClass) -> Result<Option<usize>> {
        if x.n != self.n || y.n != self.n || x.q != self.q || y.q != self.q {
            return Err(Error::invalid("vertex does not belong to this building"));
        }
        if x == y {
            return Ok(None);
        }
        let vals = relative_valuations(x, y, self.q);
        let v1 = vals[0];
        if vals.iter().any(|&t| t - v1 > 1) {
            return Ok(None);
        }
        let m = vals.iter().filter(|&&t| t == v1).count();
        if m == self.n {
            // All valuations equal means the classes coincide.
            return Ok(None);
        }
        // The label is also the type difference; both routes must agree.
        debug_assert_eq!((self.type_of(y) + m) % self.n, self.type_of(x) % self.n);
        Ok(Some(m))
    }

    fn split_targets(&self, x: &LatticeClass, z: &LatticeClass, j: usize) -> Result<Vec<LatticeClass>> {
        let s_z = self.residue_subspace(x, z)?;
        if j == 0 || j >= s_z.dim() {
            return Err(Error::invalid(format!(
                "split_targets: need 1 <= j < {}, got {j}",
                s_z.dim()
            )));
        }
        let zero = Subspace::zero(self.n, self.q);
        let mut out = Vec::new();
        for t in projgeom::enumerate_between(&zero, &s_z, j)? {
            out.push(self.neighbor_from_subspace(x, &t)?);
        }
        Ok(out)
    }
}

/// Are two neighbors of v adjacent to each other? In the link this is
/// containment of residue subspaces one way or the other; the graph route
/// (edge_label) must agree, which the audits check.
pub fn link_incidence(g: &BruhatTits, v: &LatticeClass, x: &LatticeClass, y: &LatticeClass) -> Result<bool> {
    let sx = g.residue_subspace(v, x)?;
    let sy = g.residue_subspace(v, y)?;
    if sx == sy {
        return Ok(false);
    }
    Ok(projgeom::contains(&sx, &sy) || projgeom::contains(&sy, &sx))
}
