//! Finite quasigroups stored as Latin squares with both division tables.
//!
//! Elements are the indices `0..n`. An optional label map is carried for
//! display and parsing only; equality of quasigroups is equality of the
//! multiplication tables.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Default bound on the number of elements of any constructed table.
pub const DEFAULT_TABLE_CAP: usize = 4096;

/// Default bound on the size of a materialized permutation group.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuasigroupError {
    #[error("quasigroup order must be at least 1")]
    Empty,
    #[error("table is ragged: row {row} has {len} entries, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("entry {value} at ({row}, {col}) is out of range for order {n}")]
    OutOfRange { row: usize, col: usize, value: usize, n: usize },
    #[error("not a Latin square: {line} repeats entry {value}")]
    NotLatin { line: Line, value: usize },
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("order {order} exceeds the table cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("label list has {got} entries, expected {expected}")]
    LabelCount { got: usize, expected: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("permutation group closure exceeded the cap of {0} elements")]
    ClosureCapExceeded(usize),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A row or column of a multiplication table, used in error reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Row(usize),
    Column(usize),
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row(r) => write!(f, "row {r}"),
            Line::Column(c) => write!(f, "column {c}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FiniteQuasigroup {
    n: usize,
    mul: Vec<usize>,
    rdiv: Vec<usize>,
    ldiv: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl PartialEq for FiniteQuasigroup {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.mul == other.mul
    }
}

impl Eq for FiniteQuasigroup {}

/// Checks that `table` (row-major, `n*n`) is a Latin square over `0..n`.
pub(crate) fn check_latin(n: usize, table: &[usize]) -> Result<(), QuasigroupError> {
    for (idx, &v) in table.iter().enumerate() {
        if v >= n {
            return Err(QuasigroupError::OutOfRange { row: idx / n, col: idx % n, value: v, n });
        }
    }
    let mut seen = vec![false; n];
    for r in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for c in 0..n {
            let v = table[r * n + c];
            if std::mem::replace(&mut seen[v], true) {
                return Err(QuasigroupError::NotLatin { line: Line::Row(r), value: v });
            }
        }
    }
    for c in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        for r in 0..n {
            let v = table[r * n + c];
            if std::mem::replace(&mut seen[v], true) {
                return Err(QuasigroupError::NotLatin { line: Line::Column(c), value: v });
            }
        }
    }
    Ok(())
}

impl FiniteQuasigroup {
    /// Builds a quasigroup from a row-major multiplication table, deriving
    /// both divisions by inverting rows and columns.
    pub fn from_mul_table(n: usize, table: Vec<usize>) -> Result<Self, QuasigroupError> {
        if n == 0 {
            return Err(QuasigroupError::Empty);
        }
        if table.len() != n * n {
            return Err(QuasigroupError::Ragged { row: table.len() / n, len: table.len() % n, expected: n });
        }
        check_latin(n, &table)?;
        let mut rdiv = vec![0; n * n];
        let mut ldiv = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let z = table[x * n + y];
                // z / y = x and x \ z = y
                rdiv[z * n + y] = x;
                ldiv[x * n + z] = y;
            }
        }
        Ok(Self { n, mul: table, rdiv, ldiv, labels: None })
    }

    /// Builds from a grid of rows; rejects ragged input.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, QuasigroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(QuasigroupError::Empty);
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(QuasigroupError::Ragged { row: r, len: row.len(), expected: n });
            }
        }
        Self::from_mul_table(n, rows.concat())
    }

    /// Accepts hand-supplied division tables without deriving them.
    ///
    /// The multiplication table must still be a Latin square; the divisions
    /// are only range-checked, so `check_axioms` is the way to validate them.
    pub fn from_raw_tables(
        n: usize,
        mul: Vec<usize>,
        rdiv: Vec<usize>,
        ldiv: Vec<usize>,
    ) -> Result<Self, QuasigroupError> {
        if n == 0 {
            return Err(QuasigroupError::Empty);
        }
        for t in [&mul, &rdiv, &ldiv] {
            if t.len() != n * n {
                return Err(QuasigroupError::Ragged { row: t.len() / n, len: t.len() % n, expected: n });
            }
        }
        check_latin(n, &mul)?;
        for t in [&rdiv, &ldiv] {
            if let Some((idx, &v)) = t.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(QuasigroupError::OutOfRange { row: idx / n, col: idx % n, value: v, n });
            }
        }
        Ok(Self { n, mul, rdiv, ldiv, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, QuasigroupError> {
        if labels.len() != self.n {
            return Err(QuasigroupError::LabelCount { got: labels.len(), expected: self.n });
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(QuasigroupError::DuplicateLabel(l.clone()));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// The one-element quasigroup.
    pub fn trivial() -> Self {
        Self::from_mul_table(1, vec![0]).expect("trivial table is Latin")
    }

    /// The abelian group `Z_{m1} x ... x Z_{mk}` as a quasigroup
    /// `(A, +, -, ~)` with `x ~ y = y - x`.
    ///
    /// Elements are tuples ordered lexicographically, first factor most
    /// significant.
    pub fn from_abelian_group(moduli: &[usize]) -> Result<Self, QuasigroupError> {
        if moduli.contains(&0) {
            return Err(QuasigroupError::ZeroModulus);
        }
        let n: usize = moduli.iter().product();
        let decode = |mut i: usize| {
            let mut digits = vec![0; moduli.len()];
            for (d, &m) in digits.iter_mut().zip(moduli).rev() {
                *d = i % m;
                i /= m;
            }
            digits
        };
        let encode = |digits: &[usize]| digits.iter().zip(moduli).fold(0, |acc, (&d, &m)| acc * m + d);
        let elems: Vec<Vec<usize>> = (0..n).map(decode).collect();
        let mut mul = vec![0; n * n];
        let mut rdiv = vec![0; n * n];
        let mut ldiv = vec![0; n * n];
        let mut buf = vec![0; moduli.len()];
        for x in 0..n {
            for y in 0..n {
                let (ex, ey) = (&elems[x], &elems[y]);
                for (i, &m) in moduli.iter().enumerate() {
                    buf[i] = (ex[i] + ey[i]) % m;
                }
                mul[x * n + y] = encode(&buf);
                for (i, &m) in moduli.iter().enumerate() {
                    buf[i] = (ex[i] + m - ey[i]) % m;
                }
                rdiv[x * n + y] = encode(&buf);
                for (i, &m) in moduli.iter().enumerate() {
                    buf[i] = (ey[i] + m - ex[i]) % m;
                }
                ldiv[x * n + y] = encode(&buf);
            }
        }
        Ok(Self { n, mul, rdiv, ldiv, labels: None })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.n + y]
    }

    /// Right division `x / y`.
    #[inline]
    pub fn rdiv(&self, x: usize, y: usize) -> usize {
        self.rdiv[x * self.n + y]
    }

    /// Left division `x \ y`.
    #[inline]
    pub fn ldiv(&self, x: usize, y: usize) -> usize {
        self.ldiv[x * self.n + y]
    }

    pub fn mul_table(&self) -> &[usize] {
        &self.mul
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of an element: its label, or its index.
    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    /// Looks an element up by label, falling back to a decimal index.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        if let Some(labels) = &self.labels {
            if let Some(i) = labels.iter().position(|l| l == name) {
                return Some(i);
            }
        }
        name.parse::<usize>().ok().filter(|&i| i < self.n)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// `(y x) y = x` for all `x, y`.
    pub fn is_semisymmetric(&self) -> bool {
        self.semisymmetry_witness().is_none()
    }

    /// First pair `(x, y)` with `(y x) y != x`.
    pub fn semisymmetry_witness(&self) -> Option<(usize, usize)> {
        for x in self.elements() {
            for y in self.elements() {
                if self.mul(self.mul(y, x), y) != x {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_idempotent(&self) -> bool {
        self.elements().all(|x| self.mul(x, x) == x)
    }

    pub fn check_axioms(&self) -> AxiomReport {
        let mut checks = Vec::with_capacity(4);
        for axiom in [Axiom::IL, Axiom::IR, Axiom::SL, Axiom::SR] {
            let mut counterexample = None;
            'scan: for x in self.elements() {
                for y in self.elements() {
                    let ok = match axiom {
                        Axiom::IL => self.ldiv(y, self.mul(y, x)) == x,
                        Axiom::IR => self.rdiv(self.mul(x, y), y) == x,
                        Axiom::SL => self.mul(y, self.ldiv(y, x)) == x,
                        Axiom::SR => self.mul(self.rdiv(x, y), y) == x,
                    };
                    if !ok {
                        counterexample = Some((x, y));
                        break 'scan;
                    }
                }
            }
            checks.push(AxiomCheck { axiom, counterexample });
        }
        AxiomReport { checks }
    }

    /// The opposite quasigroup, `x o y = y x`.
    pub fn opposite(&self) -> Self {
        let n = self.n;
        let mut mul = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                mul[x * n + y] = self.mul(y, x);
            }
        }
        let mut q = Self::from_mul_table(n, mul).expect("transpose of a Latin square is Latin");
        q.labels = self.labels.clone();
        q
    }

    /// Right translation `R(q): x -> x q`.
    pub fn right_translation(&self, q: usize) -> Permutation {
        Permutation { images: self.elements().map(|x| self.mul(x, q)).collect() }
    }

    /// Left translation `L(q): x -> q x`.
    pub fn left_translation(&self, q: usize) -> Permutation {
        Permutation { images: self.elements().map(|x| self.mul(q, x)).collect() }
    }

    /// The combinatorial multiplication group generated by all `R(q)` and `L(q)`.
    pub fn multiplication_group(&self, cap: usize) -> Result<PermutationGroup, QuasigroupError> {
        let mut generators: Vec<Permutation> = self.elements().map(|q| self.right_translation(q)).collect();
        generators.extend(self.elements().map(|q| self.left_translation(q)));
        PermutationGroup::generate(generators, self.n, cap)
    }

    /// True when `f` preserves multiplication from `self` into `target`.
    pub fn is_homomorphism(&self, f: &[usize], target: &FiniteQuasigroup) -> bool {
        f.len() == self.n
            && f.iter().all(|&v| v < target.n)
            && self.elements().all(|x| self.elements().all(|y| f[self.mul(x, y)] == target.mul(f[x], f[y])))
    }

    /// Parses the Latin-square text format: the order on the first line,
    /// then `n` rows of space-separated 0-based entries, then an optional
    /// `labels: ...` line.
    pub fn parse_text(text: &str) -> Result<Self, QuasigroupError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let perr = |line: usize, message: String| QuasigroupError::Parse { line, message };
        let (ln, first) = lines.next().ok_or_else(|| perr(1, "missing order line".into()))?;
        let n: usize = first.parse().map_err(|_| perr(ln, format!("invalid order {first:?}")))?;
        if n == 0 {
            return Err(QuasigroupError::Empty);
        }
        let mut rows = Vec::with_capacity(n);
        for r in 0..n {
            let (ln, line) = lines.next().ok_or_else(|| perr(ln, format!("expected {n} rows, found {r}")))?;
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| perr(ln, format!("invalid entry {t:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != n {
                return Err(QuasigroupError::Ragged { row: r, len: row.len(), expected: n });
            }
            rows.push(row);
        }
        let mut q = Self::from_rows(&rows)?;
        if let Some((ln, line)) = lines.next() {
            let rest =
                line.strip_prefix("labels:").ok_or_else(|| perr(ln, format!("unexpected trailing line {line:?}")))?;
            q = q.with_labels(rest.split_whitespace().map(str::to_owned).collect())?;
            if let Some((ln, extra)) = lines.next() {
                return Err(perr(ln, format!("unexpected trailing line {extra:?}")));
            }
        }
        Ok(q)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.mul.chunks(self.n) {
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        if let Some(labels) = &self.labels {
            out.push_str("labels: ");
            out.push_str(&labels.join(" "));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// `y \ (y x) = x`
    IL,
    /// `(x y) / y = x`
    IR,
    /// `y (y \ x) = x`
    SL,
    /// `(x / y) y = x`
    SR,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    /// First `(x, y)` in row-major order violating the axiom.
    pub counterexample: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.counterexample.is_none())
    }

    pub fn get(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks.iter().find(|c| c.axiom == axiom).expect("all four axioms are checked")
    }
}

/// A bijection on `0..n`. Composition is left to right: `p.then(q)` maps
/// `x` to `q(p(x))`, matching the right-action convention used throughout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Self { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&x| other.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }
}

#[derive(Debug, Clone)]
pub struct PermutationGroup {
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermutationGroup {
    /// Breadth-first saturation of the identity under right multiplication
    /// by generators. Finite, so closure under products gives inverses too.
    pub fn generate(generators: Vec<Permutation>, degree: usize, cap: usize) -> Result<Self, QuasigroupError> {
        let id = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in &generators {
                let next = p.then(g);
                if !seen.contains(&next) {
                    if seen.len() >= cap {
                        return Err(QuasigroupError::ClosureCapExceeded(cap));
                    }
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        Ok(Self { generators, elements })
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }
}
