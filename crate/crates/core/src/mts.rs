//! Mendelsohn triple systems and their correspondence with idempotent
//! semisymmetric quasigroups.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qg::FiniteQuasigroup;

/// Node budget for `search` when the caller does not supply one.
pub const DEFAULT_SEARCH_BUDGET: u64 = 200_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MtsError {
    #[error("invalid triple system: {0}")]
    Invalid(MtsViolation),
    #[error("quasigroup is not idempotent")]
    NotIdempotent,
    #[error("quasigroup is not semisymmetric")]
    NotSemisymmetric,
    #[error("triple systems correspond to quasigroups of order at least 3, got {0}")]
    OrderTooSmall(usize),
    #[error("search supports at most 64 points, got {0}")]
    OrderTooLarge(usize),
    #[error("search exceeded its budget of {0} nodes")]
    SearchBudgetExceeded(u64),
}

/// The first reason a candidate triple system fails validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MtsViolation {
    PointOutOfRange {
        triple: usize,
        point: usize,
    },
    RepeatedPoint {
        triple: usize,
    },
    /// Two stored triples are rotations of one another.
    RotatedDuplicate {
        first: usize,
        second: usize,
    },
    DuplicatedPair {
        pair: (usize, usize),
    },
    UncoveredPair {
        pair: (usize, usize),
    },
}

impl std::fmt::Display for MtsViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::PointOutOfRange { triple, point } => write!(f, "triple {triple} uses point {point} out of range"),
            Self::RepeatedPoint { triple } => write!(f, "triple {triple} repeats a point"),
            Self::RotatedDuplicate { first, second } => write!(f, "triples {first} and {second} are rotations"),
            Self::DuplicatedPair { pair: (x, y) } => write!(f, "pair ({x}, {y}) covered twice"),
            Self::UncoveredPair { pair: (x, y) } => write!(f, "pair ({x}, {y}) uncovered"),
        }
    }
}

/// A point set `0..n` with cyclic triples. Triples are kept rotated so the
/// least point comes first, and the list is sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MendelsohnTripleSystem {
    n: usize,
    triples: Vec<[usize; 3]>,
}

fn canonical_rotation(t: [usize; 3]) -> [usize; 3] {
    let [a, b, c] = t;
    if a <= b && a <= c {
        [a, b, c]
    } else if b <= a && b <= c {
        [b, c, a]
    } else {
        [c, a, b]
    }
}

impl MendelsohnTripleSystem {
    /// Stores the triples in canonical form without validating them.
    pub fn new(n: usize, triples: Vec<[usize; 3]>) -> Self {
        let mut triples: Vec<[usize; 3]> = triples.into_iter().map(canonical_rotation).collect();
        triples.sort_unstable();
        Self { n, triples }
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn triples(&self) -> &[[usize; 3]] {
        &self.triples
    }

    pub fn validate(&self) -> Result<(), MtsViolation> {
        let n = self.n;
        for (i, t) in self.triples.iter().enumerate() {
            if let Some(&p) = t.iter().find(|&&p| p >= n) {
                return Err(MtsViolation::PointOutOfRange { triple: i, point: p });
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(MtsViolation::RepeatedPoint { triple: i });
            }
        }
        // canonical storage makes rotated duplicates adjacent and identical
        if let Some(i) = (1..self.triples.len()).find(|&i| self.triples[i] == self.triples[i - 1]) {
            return Err(MtsViolation::RotatedDuplicate { first: i - 1, second: i });
        }
        let mut covered = vec![false; n * n];
        for &[a, b, c] in &self.triples {
            for (x, y) in [(a, b), (b, c), (c, a)] {
                if std::mem::replace(&mut covered[x * n + y], true) {
                    return Err(MtsViolation::DuplicatedPair { pair: (x, y) });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                if x != y && !covered[x * n + y] {
                    return Err(MtsViolation::UncoveredPair { pair: (x, y) });
                }
            }
        }
        Ok(())
    }

    /// `x x = x`, and `x y = z` for the triple `(x y z)`.
    pub fn to_quasigroup(&self) -> Result<FiniteQuasigroup, MtsError> {
        self.validate().map_err(MtsError::Invalid)?;
        let n = self.n;
        if n == 0 {
            return Err(MtsError::OrderTooSmall(0));
        }
        let mut table = vec![0; n * n];
        for x in 0..n {
            table[x * n + x] = x;
        }
        for &[a, b, c] in &self.triples {
            table[a * n + b] = c;
            table[b * n + c] = a;
            table[c * n + a] = b;
        }
        Ok(FiniteQuasigroup::from_mul_table(n, table).expect("a valid triple system yields a Latin square"))
    }

    /// The triples `(x y xy)` for distinct `x, y`.
    pub fn from_quasigroup(q: &FiniteQuasigroup) -> Result<Self, MtsError> {
        let n = q.order();
        if n < 3 {
            return Err(MtsError::OrderTooSmall(n));
        }
        if !q.is_idempotent() {
            return Err(MtsError::NotIdempotent);
        }
        if !q.is_semisymmetric() {
            return Err(MtsError::NotSemisymmetric);
        }
        let mut triples = Vec::with_capacity(n * (n - 1) / 3);
        for x in 0..n {
            for y in 0..n {
                let z = q.mul(x, y);
                // each triple is met three times; keep the rotation starting at its least point
                if x != y && x < y && x < z {
                    triples.push([x, y, z]);
                }
            }
        }
        Ok(Self::new(n, triples))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        let raw: Self = serde_json::from_str(s)?;
        Ok(Self::new(raw.n, raw.triples))
    }
}

/// Outcome counters of a completed search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub nodes: u64,
}

/// Backtracking search for an idempotent semisymmetric table of order `n`.
///
/// Cells are filled in row-major order with values tried in increasing order;
/// fixing `x y = z` also fixes `y z = x` and `z x = y`. The first witness is
/// therefore deterministic. Returns `Ok(None)` only after exhausting the space.
pub fn search(n: usize, budget: u64) -> Result<Option<MendelsohnTripleSystem>, MtsError> {
    search_with_stats(n, budget).map(|(r, _)| r)
}

pub fn search_with_stats(n: usize, budget: u64) -> Result<(Option<MendelsohnTripleSystem>, SearchStats), MtsError> {
    if n <= 1 {
        // n = 1 counts as having no system, although the empty triple set
        // covers its zero pairs vacuously
        return Ok((None, SearchStats::default()));
    }
    if n > 64 {
        return Err(MtsError::OrderTooLarge(n));
    }
    let mut s = Searcher::new(n, budget);
    let found = s.run()?;
    let stats = SearchStats { nodes: s.nodes };
    Ok((found.then(|| s.extract()), stats))
}

const EMPTY: u8 = u8::MAX;

struct Searcher {
    n: usize,
    table: Vec<u8>,
    // bit v set when value v already appears in the row / column
    rows: Vec<u64>,
    cols: Vec<u64>,
    nodes: u64,
    budget: u64,
}

impl Searcher {
    fn new(n: usize, budget: u64) -> Self {
        let mut s = Self { n, table: vec![EMPTY; n * n], rows: vec![0; n], cols: vec![0; n], nodes: 0, budget };
        for x in 0..n {
            s.set(x, x, x);
        }
        s
    }

    fn set(&mut self, x: usize, y: usize, z: usize) {
        self.table[x * self.n + y] = z as u8;
        self.rows[x] |= 1 << z;
        self.cols[y] |= 1 << z;
    }

    fn clear(&mut self, x: usize, y: usize, z: usize) {
        self.table[x * self.n + y] = EMPTY;
        self.rows[x] &= !(1 << z);
        self.cols[y] &= !(1 << z);
    }

    fn free(&self, x: usize, y: usize, z: usize) -> bool {
        self.table[x * self.n + y] == EMPTY && self.rows[x] & (1 << z) == 0 && self.cols[y] & (1 << z) == 0
    }

    /// Some empty cell has no value compatible with its row and column.
    fn dead_end(&self) -> bool {
        let n = self.n;
        let full: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
        (0..n).any(|x| {
            (0..n).any(|y| {
                self.table[x * n + y] == EMPTY && {
                    // x y cannot be x or y
                    let banned = self.rows[x] | self.cols[y] | (1 << x) | (1 << y);
                    banned & full == full
                }
            })
        })
    }

    fn run(&mut self) -> Result<bool, MtsError> {
        self.descend(0)
    }

    fn descend(&mut self, from: usize) -> Result<bool, MtsError> {
        let n = self.n;
        let Some(cell) = (from..n * n).find(|&c| self.table[c] == EMPTY) else {
            return Ok(true);
        };
        let (x, y) = (cell / n, cell % n);
        for z in 0..n {
            if z == x || z == y || !self.free(x, y, z) || !self.free(y, z, x) || !self.free(z, x, y) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(MtsError::SearchBudgetExceeded(self.budget));
            }
            self.set(x, y, z);
            self.set(y, z, x);
            self.set(z, x, y);
            if !self.dead_end() && self.descend(cell + 1)? {
                return Ok(true);
            }
            self.clear(x, y, z);
            self.clear(y, z, x);
            self.clear(z, x, y);
        }
        Ok(false)
    }

    fn extract(&self) -> MendelsohnTripleSystem {
        let table: Vec<usize> = self.table.iter().map(|&v| v as usize).collect();
        let q = FiniteQuasigroup::from_mul_table(self.n, table).expect("completed search table is Latin");
        MendelsohnTripleSystem::from_quasigroup(&q)
            .expect("completed search table is an idempotent semisymmetric quasigroup")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qg::fixtures::*;

    fn example_order3() -> MendelsohnTripleSystem {
        // (e a b), (e b a)
        MendelsohnTripleSystem::new(3, vec![[0, 1, 2], [0, 2, 1]])
    }

    fn example_order4() -> MendelsohnTripleSystem {
        // (e a b), (e c a), (a c b), (c e b)
        MendelsohnTripleSystem::new(4, vec![[0, 1, 2], [0, 3, 1], [1, 3, 2], [3, 0, 2]])
    }

    #[test]
    fn listed_systems_validate() {
        assert_eq!(example_order3().validate(), Ok(()));
        assert_eq!(example_order4().validate(), Ok(()));
    }

    #[test]
    fn missing_triple_leaves_pair_uncovered() {
        let m = MendelsohnTripleSystem::new(3, vec![[0, 1, 2]]);
        // (e a b) covers (e,a), (a,b), (b,e); first uncovered in row-major order is (e,b)
        assert_eq!(m.validate(), Err(MtsViolation::UncoveredPair { pair: (0, 2) }));
        assert!(matches!(m.to_quasigroup(), Err(MtsError::Invalid(_))));
    }

    #[test]
    fn validation_failures() {
        let rotated = MendelsohnTripleSystem::new(3, vec![[0, 1, 2], [1, 2, 0]]);
        assert_eq!(rotated.validate(), Err(MtsViolation::RotatedDuplicate { first: 0, second: 1 }));
        let repeated = MendelsohnTripleSystem::new(3, vec![[0, 0, 1]]);
        assert_eq!(repeated.validate(), Err(MtsViolation::RepeatedPoint { triple: 0 }));
        let out = MendelsohnTripleSystem::new(3, vec![[0, 1, 5]]);
        assert_eq!(out.validate(), Err(MtsViolation::PointOutOfRange { triple: 0, point: 5 }));
        let dup = MendelsohnTripleSystem::new(4, vec![[0, 1, 2], [0, 1, 3]]);
        assert_eq!(dup.validate(), Err(MtsViolation::DuplicatedPair { pair: (0, 1) }));
    }

    #[test]
    fn mendelsohn_table_correspondence() {
        assert_eq!(example_order3().to_quasigroup().unwrap(), mts_order3());
        assert_eq!(example_order4().to_quasigroup().unwrap(), mts_order4());
        assert_eq!(MendelsohnTripleSystem::from_quasigroup(&mts_order3()).unwrap(), example_order3());
        assert_eq!(MendelsohnTripleSystem::from_quasigroup(&mts_order4()).unwrap(), example_order4());
    }

    #[test]
    fn from_quasigroup_errors() {
        let z3 = FiniteQuasigroup::from_abelian_group(&[3]).unwrap();
        assert_eq!(MendelsohnTripleSystem::from_quasigroup(&z3), Err(MtsError::NotIdempotent));
        assert_eq!(
            MendelsohnTripleSystem::from_quasigroup(&FiniteQuasigroup::trivial()),
            Err(MtsError::OrderTooSmall(1))
        );
        // x y = 2x - y over Z_5 is idempotent but (y x) y = 3y - 2x
        let t: Vec<usize> = (0..25).map(|i| (2 * (i / 5) + 4 * (i % 5)) % 5).collect();
        let q = FiniteQuasigroup::from_mul_table(5, t).unwrap();
        assert!(q.is_idempotent());
        assert!(!q.is_semisymmetric());
        assert_eq!(MendelsohnTripleSystem::from_quasigroup(&q), Err(MtsError::NotSemisymmetric));
    }

    #[test]
    fn json_round_trip() {
        let m = example_order4();
        let s = m.to_json();
        assert_eq!(s, r#"{"n":4,"triples":[[0,1,2],[0,2,3],[0,3,1],[1,3,2]]}"#);
        assert_eq!(MendelsohnTripleSystem::from_json(&s).unwrap(), m);
        let unsorted = MendelsohnTripleSystem::from_json(r#"{"n":3,"triples":[[2,1,0],[1,2,0]]}"#).unwrap();
        assert_eq!(unsorted, example_order3());
    }

    #[test]
    fn small_searches() {
        let m3 = search(3, DEFAULT_SEARCH_BUDGET).unwrap().unwrap();
        assert_eq!(m3.validate(), Ok(()));
        assert_eq!(search(1, DEFAULT_SEARCH_BUDGET).unwrap(), None);
        assert_eq!(search(2, DEFAULT_SEARCH_BUDGET).unwrap(), None);
        assert_eq!(search(5, DEFAULT_SEARCH_BUDGET).unwrap(), None);
        let m4 = search(4, DEFAULT_SEARCH_BUDGET).unwrap().unwrap();
        assert_eq!(m4.validate(), Ok(()));
        let q = m4.to_quasigroup().unwrap();
        assert!(q.is_semisymmetric() && q.is_idempotent());
    }

    #[test]
    fn search_budget_is_reported() {
        assert_eq!(search(7, 1), Err(MtsError::SearchBudgetExceeded(1)));
    }
}
