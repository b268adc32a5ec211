//! Binomial and Gaussian (q-)binomial coefficients, exactly.
//!
//! The Gaussian binomial [n choose k]_q counts k-dimensional subspaces of
//! F_q^n; at q = 1 it degenerates to the ordinary binomial. All values are
//! arbitrary-precision integers, so nothing here ever rounds.

use std::collections::HashMap;

use num::{BigInt, One, Zero};

/// Ordinary binomial coefficient, defined for every integer upper argument.
///
/// For n >= 0 this is the usual count, zero outside 0 <= k <= n. For n < 0
/// it is the polynomial continuation n(n-1)...(n-k+1)/k!, which is what the
/// square-switch coefficients need when m - l + j - k goes negative
/// (e.g. `binomial(-1, 1) == -1`).
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n >= 0 {
        if k > n {
            return BigInt::zero();
        }
        // C(n, k) with the smaller cofactor, multiplicative form.
        let k = k.min(n - k);
        let mut acc = BigInt::one();
        for i in 0..k {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        acc
    } else {
        // C(n, k) = (-1)^k C(k - n - 1, k)
        let pos = binomial(k - n - 1, k);
        if k % 2 == 0 {
            pos
        } else {
            -pos
        }
    }
}

/// Gaussian binomial [n choose k]_q for q >= 1.
///
/// Computed by the q-Pascal recurrence
/// [n k]_q = [n-1 k-1]_q + q^k [n-1 k]_q,
/// which stays in integers and is well defined at q = 1 (where it equals the
/// ordinary binomial). Zero outside 0 <= k <= n. Panics on q = 0: a
/// subspace count needs a field order.
pub fn gaussian_binomial(n: usize, k: i64, q: u64) -> BigInt {
    assert!(q >= 1, "gaussian_binomial needs q >= 1, got {q}");
    if k < 0 || k as usize > n {
        return BigInt::zero();
    }
    QBinomialTable::new(q).get(n, k as usize)
}

/// Memoized Gaussian binomials for a fixed q.
#[derive(Debug, Clone)]
pub struct QBinomialTable {
    q: u64,
    memo: HashMap<(usize, usize), BigInt>,
}

impl QBinomialTable {
    pub fn new(q: u64) -> Self {
        assert!(q >= 1, "QBinomialTable needs q >= 1, got {q}");
        QBinomialTable {
            q,
            memo: HashMap::new(),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn get(&mut self, n: usize, k: usize) -> BigInt {
        if k > n {
            return BigInt::zero();
        }
        if k == 0 || k == n {
            return BigInt::one();
        }
        if let Some(v) = self.memo.get(&(n, k)) {
            return v.clone();
        }
        let qk = BigInt::from(self.q).pow(k as u32);
        let v = self.get(n - 1, k - 1) + qk * self.get(n - 1, k);
        self.memo.insert((n, k), v.clone());
        v
    }
}
