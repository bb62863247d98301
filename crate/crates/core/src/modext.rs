//! Matrix modules over `Z_m`, the ideal-annihilation check, and linearized
//! extensions `A x Q` with a brute-force verifier.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diffring::{semisym_ideal_generators, DiffError, GroupRingElement};
use crate::qg::{FiniteQuasigroup, QuasigroupError};
use crate::words::FreeGroupWord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(i64),
    #[error("fiber dimension must be at least 1")]
    ZeroDimension,
    #[error("matrix for {label} is not {dim}x{dim}")]
    Shape { label: String, dim: usize },
    #[error("matrix for {0} is not invertible mod the modulus")]
    NotInvertible(String),
    #[error("no matrix assigned to {0}")]
    MissingAssignment(String),
    #[error("unknown element {0:?}")]
    UnknownLabel(String),
    #[error("expected {expected} matrices, found {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("generator {0} has no assigned matrix")]
    UnknownGenerator(usize),
    #[error("invalid module JSON: {0}")]
    Json(String),
    #[error("module check failed at {} pair(s)", .0.len())]
    ModuleCheckFailed(Vec<(usize, usize)>),
    #[error("extension order {order} exceeds cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error(transparent)]
    Ideal(#[from] DiffError),
    #[error(transparent)]
    Quasigroup(#[from] QuasigroupError),
}

/// A square matrix over `Z_m`, entries stored reduced in `[0, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    modulus: i64,
    dim: usize,
    data: Vec<i64>,
}

impl ModMatrix {
    pub fn from_rows(modulus: i64, rows: &[Vec<i64>]) -> Option<Self> {
        let dim = rows.len();
        if modulus < 1 || rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        let data = rows.iter().flatten().map(|v| v.rem_euclid(modulus)).collect();
        Some(Self { modulus, dim, data })
    }

    pub fn identity(modulus: i64, dim: usize) -> Self {
        let mut m = Self::zero(modulus, dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1 % modulus;
        }
        m
    }

    pub fn zero(modulus: i64, dim: usize) -> Self {
        Self { modulus, dim, data: vec![0; dim * dim] }
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.dim.max(1)).map(<[i64]>::to_vec).collect()
    }

    fn reduce(&self, v: i128) -> i64 {
        v.rem_euclid(self.modulus as i128) as i64
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        let k = self.dim;
        let mut out = Self::zero(self.modulus, k);
        for i in 0..k {
            for j in 0..k {
                let s: i128 = (0..k).map(|l| self.get(i, l) as i128 * other.get(l, j) as i128).sum();
                out.data[i * k + j] = self.reduce(s);
            }
        }
        out
    }

    pub fn add(&self, other: &ModMatrix) -> ModMatrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| (a + b) % self.modulus).collect();
        Self { data, ..self.clone() }
    }

    pub fn scale(&self, c: i64) -> ModMatrix {
        let data = self.data.iter().map(|&a| self.reduce(a as i128 * c as i128)).collect();
        Self { data, ..self.clone() }
    }

    pub fn neg(&self) -> ModMatrix {
        self.scale(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.modulus, self.dim)
    }

    pub fn pow(&self, mut e: u64) -> ModMatrix {
        let mut base = self.clone();
        let mut acc = Self::identity(self.modulus, self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    fn minor(&self, row: usize, col: usize) -> ModMatrix {
        let k = self.dim;
        let data = (0..k)
            .filter(|&i| i != row)
            .flat_map(|i| (0..k).filter(move |&j| j != col).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        Self { modulus: self.modulus, dim: k - 1, data }
    }

    /// Laplace expansion along the first row.
    pub fn det(&self) -> i64 {
        match self.dim {
            0 => 1 % self.modulus,
            1 => self.data[0],
            _ => {
                let mut s: i128 = 0;
                for j in 0..self.dim {
                    let term = self.get(0, j) as i128 * self.minor(0, j).det() as i128;
                    s += if j % 2 == 0 { term } else { -term };
                }
                self.reduce(s)
            }
        }
    }

    /// Adjugate over the inverse of a unit determinant.
    pub fn inverse(&self) -> Option<ModMatrix> {
        let d = self.det();
        let g = d.extended_gcd(&self.modulus);
        if g.gcd != 1 {
            return None;
        }
        let d_inv = g.x.rem_euclid(self.modulus);
        let k = self.dim;
        if k == 1 {
            return Some(Self { data: vec![d_inv], ..self.clone() });
        }
        let mut out = Self::zero(self.modulus, k);
        for i in 0..k {
            for j in 0..k {
                let c = self.minor(j, i).det() as i128 * d_inv as i128;
                out.data[i * k + j] = self.reduce(if (i + j) % 2 == 0 { c } else { -c });
            }
        }
        Some(out)
    }

    /// Least `t` in `1..=limit` with `M^t = I`.
    pub fn multiplicative_order(&self, limit: u64) -> Option<u64> {
        let id = Self::identity(self.modulus, self.dim);
        let mut acc = self.clone();
        for t in 1..=limit {
            if acc == id {
                return Some(t);
            }
            acc = acc.mul(self);
        }
        None
    }

    /// The row vector `v M`.
    pub fn apply_row(&self, v: &[i64]) -> Vec<i64> {
        (0..self.dim).map(|j| self.reduce((0..self.dim).map(|i| v[i] as i128 * self.get(i, j) as i128).sum())).collect()
    }
}

impl fmt::Display for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            write!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// An invertible matrix over `Z_m` for each element of a quasigroup,
/// indexed by element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleAssignment {
    modulus: i64,
    dim: usize,
    matrices: Vec<ModMatrix>,
    inverses: Vec<ModMatrix>,
}

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    modulus: i64,
    dim: usize,
    assign: BTreeMap<String, Vec<Vec<i64>>>,
}

impl ModuleAssignment {
    /// `matrices[q]` is the image of `R(q)`; `labels` only feed error messages.
    pub fn new(modulus: i64, dim: usize, matrices: Vec<Vec<Vec<i64>>>) -> Result<Self, ModError> {
        let labels: Vec<String> = (0..matrices.len()).map(|i| i.to_string()).collect();
        Self::with_labels(modulus, dim, matrices, &labels)
    }

    fn with_labels(
        modulus: i64,
        dim: usize,
        matrices: Vec<Vec<Vec<i64>>>,
        labels: &[String],
    ) -> Result<Self, ModError> {
        if modulus < 2 {
            return Err(ModError::ModulusTooSmall(modulus));
        }
        if dim == 0 {
            return Err(ModError::ZeroDimension);
        }
        let mut ms = Vec::with_capacity(matrices.len());
        let mut invs = Vec::with_capacity(matrices.len());
        for (rows, label) in matrices.iter().zip(labels) {
            let m = ModMatrix::from_rows(modulus, rows)
                .filter(|m| m.dim == dim)
                .ok_or_else(|| ModError::Shape { label: label.clone(), dim })?;
            invs.push(m.inverse().ok_or_else(|| ModError::NotInvertible(label.clone()))?);
            ms.push(m);
        }
        Ok(Self { modulus, dim, matrices: ms, inverses: invs })
    }

    /// Reads `{"modulus": m, "dim": k, "assign": {"<label>": [[..], ..]}}`
    /// and requires exactly one matrix per element of `q`.
    pub fn from_json(text: &str, q: &FiniteQuasigroup) -> Result<Self, ModError> {
        let raw: ModuleJson = serde_json::from_str(text).map_err(|e| ModError::Json(e.to_string()))?;
        let mut slots: Vec<Option<Vec<Vec<i64>>>> = vec![None; q.order()];
        for (label, rows) in raw.assign {
            let idx = q.index_of(&label).ok_or_else(|| ModError::UnknownLabel(label.clone()))?;
            slots[idx] = Some(rows);
        }
        let labels: Vec<String> = q.elements().map(|x| q.label(x)).collect();
        let matrices = slots
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| ModError::MissingAssignment(labels[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::with_labels(raw.modulus, raw.dim, matrices, &labels)
    }

    pub fn to_json(&self, q: &FiniteQuasigroup) -> String {
        let assign = self.matrices.iter().enumerate().map(|(i, m)| (q.label(i), m.rows())).collect();
        let raw = ModuleJson { modulus: self.modulus, dim: self.dim, assign };
        serde_json::to_string(&raw).expect("plain data serializes")
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrix(&self, q: usize) -> &ModMatrix {
        &self.matrices[q]
    }

    pub fn inverse(&self, q: usize) -> &ModMatrix {
        &self.inverses[q]
    }

    /// Number of vectors in the fiber `(Z_m)^k`, if it fits in `usize`.
    pub fn fiber_size(&self) -> Option<usize> {
        usize::try_from(self.modulus).ok()?.checked_pow(self.dim as u32)
    }
}

/// Product of the letter images, left to right.
pub fn evaluate_word(w: &FreeGroupWord, a: &ModuleAssignment) -> Result<ModMatrix, ModError> {
    let mut acc = ModMatrix::identity(a.modulus, a.dim);
    for l in w.letters() {
        let g = l.generator;
        if g >= a.matrices.len() {
            return Err(ModError::UnknownGenerator(g));
        }
        acc = acc.mul(if l.inverse { &a.inverses[g] } else { &a.matrices[g] });
    }
    Ok(acc)
}

pub fn evaluate_ring(r: &GroupRingElement, a: &ModuleAssignment) -> Result<ModMatrix, ModError> {
    let mut acc = ModMatrix::zero(a.modulus, a.dim);
    for (w, c) in r.terms() {
        acc = acc.add(&evaluate_word(w, a)?.scale(c));
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleReport {
    pub passed: bool,
    pub generators: usize,
    /// `(x, y)` pairs whose closed-form generator does not vanish.
    pub failures: Vec<(usize, usize)>,
}

/// Evaluates every closed-form ideal generator under `a`.
pub fn check_module(q: &FiniteQuasigroup, e: usize, a: &ModuleAssignment) -> Result<ModuleReport, ModError> {
    if a.len() != q.order() {
        return Err(ModError::WrongCount { expected: q.order(), found: a.len() });
    }
    let gens = semisym_ideal_generators(q, e)?;
    let mut failures = Vec::new();
    for g in &gens {
        if !evaluate_ring(&g.element, a)?.is_zero() {
            failures.push((g.x, g.y));
        }
    }
    Ok(ModuleReport { passed: failures.is_empty(), generators: gens.len(), failures })
}

/// The linearized product on `(Z_m)^k x Q`. Element `(v, p)` has index
/// `fiber_index(v) * n + p`, with `v` read as base-`m` digits, first
/// coordinate most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    base: FiniteQuasigroup,
    assignment: ModuleAssignment,
    fiber_size: usize,
    table: Vec<usize>,
}

impl Extension {
    pub fn from_parts(
        base: FiniteQuasigroup,
        assignment: ModuleAssignment,
        table: Vec<usize>,
    ) -> Result<Self, ModError> {
        if assignment.len() != base.order() {
            return Err(ModError::WrongCount { expected: base.order(), found: assignment.len() });
        }
        let fiber_size = assignment.fiber_size().ok_or(ModError::CapExceeded { order: usize::MAX, cap: usize::MAX })?;
        let order = fiber_size * base.order();
        if table.len() != order * order {
            return Err(ModError::WrongCount { expected: order * order, found: table.len() });
        }
        if let Some((idx, &value)) = table.iter().enumerate().find(|(_, &v)| v >= order) {
            let (row, col) = (idx / order, idx % order);
            return Err(QuasigroupError::OutOfRange { row, col, value, n: order }.into());
        }
        Ok(Self { base, assignment, fiber_size, table })
    }

    pub fn into_parts(self) -> (FiniteQuasigroup, ModuleAssignment, Vec<usize>) {
        (self.base, self.assignment, self.table)
    }

    pub fn base(&self) -> &FiniteQuasigroup {
        &self.base
    }

    pub fn assignment(&self) -> &ModuleAssignment {
        &self.assignment
    }

    pub fn fiber_size(&self) -> usize {
        self.fiber_size
    }

    pub fn order(&self) -> usize {
        self.fiber_size * self.base.order()
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order() + y]
    }

    pub fn projection(&self, x: usize) -> usize {
        x % self.base.order()
    }

    pub fn fiber_vector(&self, x: usize) -> Vec<i64> {
        decode_vector(x / self.base.order(), self.assignment.modulus, self.assignment.dim)
    }

    pub fn encode(&self, v: &[i64], p: usize) -> usize {
        encode_vector(v, self.assignment.modulus) * self.base.order() + p
    }

    /// Labels of the form `[v1,v2,..]p`.
    pub fn label(&self, x: usize) -> String {
        let v: Vec<String> = self.fiber_vector(x).iter().map(i64::to_string).collect();
        format!("[{}]{}", v.join(","), self.base.label(self.projection(x)))
    }

    /// The table as a quasigroup; fails when the table is not Latin.
    pub fn to_quasigroup(&self) -> Result<FiniteQuasigroup, QuasigroupError> {
        let labels = (0..self.order()).map(|x| self.label(x)).collect();
        FiniteQuasigroup::from_mul_table(self.order(), self.table.clone())?.with_labels(labels)
    }
}

fn decode_vector(mut idx: usize, m: i64, k: usize) -> Vec<i64> {
    let mut v = vec![0; k];
    for slot in v.iter_mut().rev() {
        *slot = (idx % m as usize) as i64;
        idx /= m as usize;
    }
    v
}

fn encode_vector(v: &[i64], m: i64) -> usize {
    v.iter().fold(0usize, |acc, &d| acc * m as usize + d.rem_euclid(m) as usize)
}

fn add_vectors(a: &[i64], b: &[i64], m: i64) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| (x + y).rem_euclid(m)).collect()
}

fn sub_vectors(a: &[i64], b: &[i64], m: i64) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| (x - y).rem_euclid(m)).collect()
}

/// Builds `((v, p), (w, q)) -> (v M_q + w M_p^-1, p q)` after checking the
/// module against the closed-form ideal.
pub fn build_extension(q: &FiniteQuasigroup, a: &ModuleAssignment, cap: usize) -> Result<Extension, ModError> {
    let report = check_module(q, 0, a)?;
    if !report.passed {
        return Err(ModError::ModuleCheckFailed(report.failures));
    }
    build_extension_unchecked(q, a, cap)
}

/// The same construction without the module check.
pub fn build_extension_unchecked(
    q: &FiniteQuasigroup,
    a: &ModuleAssignment,
    cap: usize,
) -> Result<Extension, ModError> {
    if a.len() != q.order() {
        return Err(ModError::WrongCount { expected: q.order(), found: a.len() });
    }
    let n = q.order();
    let order = a
        .fiber_size()
        .and_then(|f| f.checked_mul(n))
        .filter(|&o| o <= cap)
        .ok_or(ModError::CapExceeded { order: a.fiber_size().map_or(usize::MAX, |f| f.saturating_mul(n)), cap })?;
    let fiber = order / n;
    let m = a.modulus;
    let vectors: Vec<Vec<i64>> = (0..fiber).map(|i| decode_vector(i, m, a.dim)).collect();
    // right[v][q] = v M_q, left[w][p] = w M_p^-1
    let right: Vec<Vec<Vec<i64>>> =
        vectors.iter().map(|v| (0..n).map(|p| a.matrices[p].apply_row(v)).collect()).collect();
    let left: Vec<Vec<Vec<i64>>> =
        vectors.iter().map(|v| (0..n).map(|p| a.inverses[p].apply_row(v)).collect()).collect();
    let mut table = vec![0; order * order];
    for (vi, row) in table.chunks_mut(order * n).enumerate() {
        for p in 0..n {
            for wi in 0..fiber {
                for r in 0..n {
                    let sum = add_vectors(&right[vi][r], &left[wi][p], m);
                    row[p * order + wi * n + r] = encode_vector(&sum, m) * n + q.mul(p, r);
                }
            }
        }
    }
    Extension::from_parts(q.clone(), a.clone(), table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionCheckKind {
    Latin,
    Semisymmetry,
    Projection,
    AbelianFibers,
    LinearDivisions,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionCheck {
    pub kind: ExtensionCheckKind,
    /// A failing `(x, y)` pair; for Latin failures, a row or column index and a repeated value.
    pub witness: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    pub order: usize,
    pub checks: Vec<ExtensionCheck>,
}

impl ExtensionReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.witness.is_none())
    }

    pub fn get(&self, kind: ExtensionCheckKind) -> &ExtensionCheck {
        self.checks.iter().find(|c| c.kind == kind).expect("every check is reported")
    }
}

fn latin_witness(table: &[usize], order: usize) -> Option<(usize, usize)> {
    let mut seen = vec![usize::MAX; order];
    for x in 0..order {
        for y in 0..order {
            let v = table[x * order + y];
            if seen[v] == x {
                return Some((x, v));
            }
            seen[v] = x;
        }
    }
    seen.fill(usize::MAX);
    for y in 0..order {
        for x in 0..order {
            let v = table[x * order + y];
            if seen[v] == y {
                return Some((y, v));
            }
            seen[v] = y;
        }
    }
    None
}

/// Brute-force checks over all pairs of elements: Latin square, `(yx)y = x`,
/// projection homomorphism, additivity of the product across fibers, and
/// agreement of the opposite product with the linear division formulas.
pub fn verify_extension(ext: &Extension) -> ExtensionReport {
    let order = ext.order();
    let n = ext.base.order();
    let fiber = ext.fiber_size;
    let m = ext.assignment.modulus;
    let k = ext.assignment.dim;
    let mut checks = Vec::new();

    let latin = latin_witness(&ext.table, order);
    checks.push(ExtensionCheck { kind: ExtensionCheckKind::Latin, witness: latin });
    let mul = |x: usize, y: usize| ext.table[x * order + y];

    let semisym = first_pair(order, |x, y| mul(mul(y, x), y) != x);
    checks.push(ExtensionCheck { kind: ExtensionCheckKind::Semisymmetry, witness: semisym });

    let proj = first_pair(order, |x, y| mul(x, y) % n != ext.base.mul(x % n, y % n));
    checks.push(ExtensionCheck { kind: ExtensionCheckKind::Projection, witness: proj });

    // Fibers are (Z_m)^k under local subtraction; the product is additive
    // on each fiber pair iff g(x + u) = g(x) + g(u) for generators u.
    let vectors: Vec<Vec<i64>> = (0..fiber).map(|i| decode_vector(i, m, k)).collect();
    let units: Vec<usize> = (0..k)
        .map(|i| {
            let mut v = vec![0; k];
            v[i] = 1 % m;
            encode_vector(&v, m)
        })
        .collect();
    let fiber_of = |x: usize| x / n;
    let elem = |f: usize, p: usize| f * n + p;
    let add = |f: usize, g: usize| encode_vector(&add_vectors(&vectors[f], &vectors[g], m), m);
    let mut fibers = None;
    'outer: for a in 0..order {
        for b in 0..order {
            let (p, q) = (a % n, b % n);
            let ab = mul(a, b);
            let shifts = units.iter().map(|&u| (u, 0)).chain(units.iter().map(|&u| (0, u)));
            for (du, dv) in shifts.chain(std::iter::once((0, 0))) {
                let a2 = elem(add(fiber_of(a), du), p);
                let b2 = elem(add(fiber_of(b), dv), q);
                let lhs = mul(a2, b2);
                let rhs_fiber = add(fiber_of(ab), fiber_of(mul(elem(du, p), elem(dv, q))));
                if lhs % n != ab % n || fiber_of(lhs) != rhs_fiber {
                    fibers = Some((a, b));
                    break 'outer;
                }
            }
        }
    }
    checks.push(ExtensionCheck { kind: ExtensionCheckKind::AbelianFibers, witness: fibers });

    // a/b = (v - w M_{p/q}^-1) M_q^-1 and a\b = (w - v M_{p\q}) M_p,
    // both of which must equal the opposite product b a.
    let asg = &ext.assignment;
    let divisions = first_pair(order, |x, y| {
        let (v, p) = (&vectors[fiber_of(x)], x % n);
        let (w, q) = (&vectors[fiber_of(y)], y % n);
        let pq = ext.base.rdiv(p, q);
        let rd = asg.inverses[q].apply_row(&sub_vectors(v, &asg.inverses[pq].apply_row(w), m));
        let lq = ext.base.ldiv(p, q);
        let ld = asg.matrices[p].apply_row(&sub_vectors(w, &asg.matrices[lq].apply_row(v), m));
        let opposite = mul(y, x);
        encode_vector(&rd, m) * n + pq != opposite || encode_vector(&ld, m) * n + lq != opposite
    });
    checks.push(ExtensionCheck { kind: ExtensionCheckKind::LinearDivisions, witness: divisions });

    ExtensionReport { order, checks }
}

fn first_pair(order: usize, mut bad: impl FnMut(usize, usize) -> bool) -> Option<(usize, usize)> {
    (0..order).flat_map(|x| (0..order).map(move |y| (x, y))).find(|&(x, y)| bad(x, y))
}
