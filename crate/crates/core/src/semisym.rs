//! Semisymmetrization of quasigroups and quasigroup homotopies.

use crate::qg::{FiniteQuasigroup, QuasigroupError};

/// A triple of maps `(f1, f2, f3): Q -> P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyTriple {
    pub f1: Vec<usize>,
    pub f2: Vec<usize>,
    pub f3: Vec<usize>,
}

impl HomotopyTriple {
    pub fn new(f1: Vec<usize>, f2: Vec<usize>, f3: Vec<usize>) -> Self {
        Self { f1, f2, f3 }
    }

    pub fn identity(n: usize) -> Self {
        let id: Vec<usize> = (0..n).collect();
        Self::new(id.clone(), id.clone(), id)
    }

    /// `(f, f, f)` for a single map `f`.
    pub fn diagonal(f: Vec<usize>) -> Self {
        Self::new(f.clone(), f.clone(), f)
    }

    /// True when `x f1 . y f2 = (x y) f3` for all `x, y` in `q`.
    pub fn is_homotopy(&self, q: &FiniteQuasigroup, p: &FiniteQuasigroup) -> bool {
        let n = q.order();
        let total = |f: &[usize]| f.len() == n && f.iter().all(|&v| v < p.order());
        if !(total(&self.f1) && total(&self.f2) && total(&self.f3)) {
            return false;
        }
        q.elements().all(|x| q.elements().all(|y| p.mul(self.f1[x], self.f2[y]) == self.f3[q.mul(x, y)]))
    }

    /// The componentwise map `Q^3 -> P^3` under the semisymmetrization encoding.
    pub fn cubed(&self, n: usize, target_order: usize) -> Vec<usize> {
        (0..n * n * n)
            .map(|i| {
                let (a, b, c) = decode_cube(i, n);
                encode_cube(self.f1[a], self.f2[b], self.f3[c], target_order)
            })
            .collect()
    }
}

/// `(i, j, k) -> i n^2 + j n + k`.
#[inline]
pub fn encode_cube(i: usize, j: usize, k: usize, n: usize) -> usize {
    (i * n + j) * n + k
}

#[inline]
pub fn decode_cube(idx: usize, n: usize) -> (usize, usize, usize) {
    (idx / (n * n), (idx / n) % n, idx % n)
}

/// The semisymmetric quasigroup on `Q^3` with
/// `(x1, x2, x3)(y1, y2, y3) = (y3 / x2, y1 \ x3, x1 y2)`.
pub fn semisymmetrize(q: &FiniteQuasigroup, cap: usize) -> Result<FiniteQuasigroup, QuasigroupError> {
    let n = q.order();
    let order = n
        .checked_pow(3)
        .filter(|&o| o <= cap)
        .ok_or(QuasigroupError::CapExceeded { order: n.saturating_pow(3), cap })?;
    let mut table = vec![0; order * order];
    for x in 0..order {
        let (x1, x2, x3) = decode_cube(x, n);
        for y in 0..order {
            let (y1, y2, y3) = decode_cube(y, n);
            table[x * order + y] = encode_cube(q.rdiv(y3, x2), q.ldiv(y1, x3), q.mul(x1, y2), n);
        }
    }
    FiniteQuasigroup::from_mul_table(order, table)
}
