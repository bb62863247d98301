//! Free group words over the right multiplications `R(q)`, and quasigroup
//! words over `Q ∪ {X}` (plus argument variables) with the semisymmetric
//! rewriting system.
//!
//! A free group word acts on the right: the letter `R(q)` sends `w` to
//! `w q`, and `R(q)^-1` sends `w` to `q w`. In a semisymmetric quasigroup
//! `w / q = q w`, so the two descriptions agree.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::qg::FiniteQuasigroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
}

/// `R(generator)` or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn r(generator: usize) -> Self {
        Self { generator, inverse: false }
    }

    pub fn r_inv(generator: usize) -> Self {
        Self { generator, inverse: true }
    }

    pub fn inverted(self) -> Self {
        Self { generator: self.generator, inverse: !self.inverse }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A freely reduced word in the letters `R(q)^±1`. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeGroupWord {
    letters: Vec<Letter>,
}

/// Shortlex: shorter words first, then lexicographic by letter.
impl Ord for FreeGroupWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters.len().cmp(&other.letters.len()).then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for FreeGroupWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FreeGroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    /// The single letter `R(q)`.
    pub fn r(q: usize) -> Self {
        Self { letters: vec![Letter::r(q)] }
    }

    /// The single letter `R(q)^-1`.
    pub fn r_inv(q: usize) -> Self {
        Self { letters: vec![Letter::r_inv(q)] }
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            match out.last() {
                Some(&top) if top.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Self { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &FreeGroupWord) -> FreeGroupWord {
        // both operands are reduced, so cancellation only happens at the seam
        let common = self.letters.iter().rev().zip(&other.letters).take_while(|(a, b)| a.cancels(**b)).count();
        let mut letters = Vec::with_capacity(self.len() + other.len() - 2 * common);
        letters.extend_from_slice(&self.letters[..self.len() - common]);
        letters.extend_from_slice(&other.letters[common..]);
        FreeGroupWord { letters }
    }

    pub fn invert(&self) -> FreeGroupWord {
        FreeGroupWord { letters: self.letters.iter().rev().map(|l| l.inverted()).collect() }
    }

    /// Left-to-right product of a sequence of words.
    pub fn product<W: Borrow<FreeGroupWord>, I: IntoIterator<Item = W>>(words: I) -> FreeGroupWord {
        words.into_iter().fold(FreeGroupWord::identity(), |acc, w| acc.concat(w.borrow()))
    }

    /// Parses whitespace-separated letters `R(a)` / `R(a)^-1`; `1` or the
    /// empty string is the identity. Letters may also be juxtaposed.
    pub fn parse(text: &str, q: &FiniteQuasigroup) -> Result<Self, WordError> {
        let s = text.trim();
        if s.is_empty() || s == "1" {
            return Ok(Self::identity());
        }
        let bytes = s.as_bytes();
        let mut pos = 0;
        let mut letters = Vec::new();
        let syntax = |pos: usize, message: &str| WordError::Syntax { pos, message: message.to_owned() };
        while pos < bytes.len() {
            if bytes[pos].is_ascii_whitespace() {
                pos += 1;
                continue;
            }
            if !s[pos..].starts_with("R(") {
                return Err(syntax(pos, "expected R(<label>)"));
            }
            let close = s[pos..].find(')').ok_or_else(|| syntax(pos, "unclosed R("))? + pos;
            let label = s[pos + 2..close].trim();
            let g = q.index_of(label).ok_or_else(|| WordError::UnknownSymbol(label.to_owned()))?;
            pos = close + 1;
            if s[pos..].starts_with("^-1") {
                letters.push(Letter::r_inv(g));
                pos += 3;
            } else if s[pos..].starts_with("^1") {
                letters.push(Letter::r(g));
                pos += 2;
            } else {
                letters.push(Letter::r(g));
            }
        }
        Ok(Self::from_letters(letters))
    }

    pub fn display<'a>(&'a self, q: &'a FiniteQuasigroup) -> impl fmt::Display + 'a {
        DisplayWord { word: self, q }
    }

    /// Image of `p` under the word: `R(x)` maps `p` to `p x`, `R(x)^-1` to `p / x`.
    pub fn act_on_element(&self, p: usize, q: &FiniteQuasigroup) -> usize {
        self.letters.iter().fold(p, |p, l| if l.inverse { q.rdiv(p, l.generator) } else { q.mul(p, l.generator) })
    }

    /// The permutation of `Q` induced by the word, as a table of images.
    pub fn permutation(&self, q: &FiniteQuasigroup) -> Vec<usize> {
        q.elements().map(|p| self.act_on_element(p, q)).collect()
    }
}

struct DisplayWord<'a> {
    word: &'a FreeGroupWord,
    q: &'a FiniteQuasigroup,
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_identity() {
            return f.write_str("1");
        }
        for (i, l) in self.word.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "R({})", self.q.label(l.generator))?;
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// Binary quasigroup operations, ordered `* < / < \`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Mul,
    /// `a / b`
    RDiv,
    /// `a \ b`
    LDiv,
}

impl Op {
    fn symbol(self) -> char {
        match self {
            Op::Mul => '*',
            Op::RDiv => '/',
            Op::LDiv => '\\',
        }
    }
}

/// A quasigroup word: leaves are elements of `Q`, the indeterminate `X`, or
/// argument variables `x_1, x_2, ...` (0-based indices here).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Elem(usize),
    Indet,
    Var(usize),
    Node(Op, Box<Term>, Box<Term>),
}

/// The variety in which words are reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Variety {
    /// Semisymmetric quasigroups, `(y x) y = x`.
    #[default]
    P,
    /// Idempotent semisymmetric quasigroups (Mendelsohn triple systems).
    Mts,
}

impl std::str::FromStr for Variety {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "P" | "p" => Ok(Variety::P),
            "MTS" | "mts" | "Mts" => Ok(Variety::Mts),
            _ => Err(format!("unknown variety {s:?}, expected P or MTS")),
        }
    }
}

#[allow(clippy::should_implement_trait)]
impl Term {
    pub fn mul(a: Term, b: Term) -> Term {
        Term::Node(Op::Mul, Box::new(a), Box::new(b))
    }

    pub fn rdiv(a: Term, b: Term) -> Term {
        Term::Node(Op::RDiv, Box::new(a), Box::new(b))
    }

    pub fn ldiv(a: Term, b: Term) -> Term {
        Term::Node(Op::LDiv, Box::new(a), Box::new(b))
    }

    pub fn node_count(&self) -> usize {
        match self {
            Term::Node(_, a, b) => 1 + a.node_count() + b.node_count(),
            _ => 0,
        }
    }

    pub fn count_nodes(&self, op: Op) -> usize {
        match self {
            Term::Node(o, a, b) => usize::from(*o == op) + a.count_nodes(op) + b.count_nodes(op),
            _ => 0,
        }
    }

    pub fn count_leaves(&self, pred: &dyn Fn(&Term) -> bool) -> usize {
        match self {
            Term::Node(_, a, b) => a.count_leaves(pred) + b.count_leaves(pred),
            leaf => usize::from(pred(leaf)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Node(_, a, b) => 1 + a.depth().max(b.depth()),
            _ => 0,
        }
    }

    /// Replaces every `X` leaf by `replacement`.
    pub fn substitute_indet(&self, replacement: &Term) -> Term {
        match self {
            Term::Indet => replacement.clone(),
            Term::Node(op, a, b) => {
                Term::Node(*op, Box::new(a.substitute_indet(replacement)), Box::new(b.substitute_indet(replacement)))
            }
            leaf => leaf.clone(),
        }
    }

    /// Rewrites `a / b` and `a \ b` to `b a`, valid in any semisymmetric quasigroup.
    pub fn without_divisions(&self) -> Term {
        match self {
            Term::Node(op, a, b) => {
                let (a, b) = (a.without_divisions(), b.without_divisions());
                match op {
                    Op::Mul => Term::mul(a, b),
                    Op::RDiv | Op::LDiv => Term::mul(b, a),
                }
            }
            leaf => leaf.clone(),
        }
    }

    /// Evaluates through the quasigroup tables. `X` has no value; variables
    /// are looked up in `args`.
    pub fn evaluate(&self, q: &FiniteQuasigroup, args: &[usize]) -> Option<usize> {
        match self {
            Term::Elem(e) => Some(*e),
            Term::Indet => None,
            Term::Var(i) => args.get(*i).copied(),
            Term::Node(op, a, b) => {
                let (a, b) = (a.evaluate(q, args)?, b.evaluate(q, args)?);
                Some(match op {
                    Op::Mul => q.mul(a, b),
                    Op::RDiv => q.rdiv(a, b),
                    Op::LDiv => q.ldiv(a, b),
                })
            }
        }
    }

    /// Parses infix syntax with `*`, `/`, `\` and parentheses. Operators
    /// share one precedence level and associate to the left. Identifiers
    /// are resolved by `resolve`.
    pub fn parse_with(text: &str, resolve: &dyn Fn(&str) -> Option<Term>) -> Result<Term, WordError> {
        let mut p = Parser { src: text, pos: 0, resolve };
        let t = p.expr()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(t)
    }

    /// Words over `Q ∪ {X}`: element labels and the literal `X`.
    pub fn parse_qx(text: &str, q: &FiniteQuasigroup) -> Result<Term, WordError> {
        Self::parse_with(text, &|name| {
            if name == "X" {
                Some(Term::Indet)
            } else {
                q.index_of(name).map(Term::Elem)
            }
        })
    }

    /// Words over named argument variables; `vars[i]` becomes `Var(i)`.
    pub fn parse_vars(text: &str, vars: &[&str]) -> Result<Term, WordError> {
        Self::parse_with(text, &|name| vars.iter().position(|v| *v == name).map(Term::Var))
    }

    pub fn render(&self, elem: &dyn Fn(usize) -> String, var: &dyn Fn(usize) -> String) -> String {
        match self {
            Term::Elem(e) => elem(*e),
            Term::Indet => "X".to_owned(),
            Term::Var(i) => var(*i),
            Term::Node(op, a, b) => {
                let side = |t: &Term| match t {
                    Term::Node(..) => format!("({})", t.render(elem, var)),
                    _ => t.render(elem, var),
                };
                format!("{}{}{}", side(a), op.symbol(), side(b))
            }
        }
    }

    /// Renders with element labels of `q` and variables as `x1, x2, ...`.
    pub fn display(&self, q: &FiniteQuasigroup) -> String {
        self.render(&|e| q.label(e), &|i| format!("x{}", i + 1))
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    resolve: &'a dyn Fn(&str) -> Option<Term>,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> WordError {
        WordError::Syntax { pos: self.pos, message: message.to_owned() }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expr(&mut self) -> Result<Term, WordError> {
        let mut lhs = self.atom()?;
        loop {
            let op = match self.peek() {
                Some('*') => Op::Mul,
                Some('/') => Op::RDiv,
                Some('\\') => Op::LDiv,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            let rhs = self.atom()?;
            lhs = Term::Node(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn atom(&mut self) -> Result<Term, WordError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let t = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(t)
            }
            Some(c) if c.is_alphanumeric() || c == '_' => {
                let start = self.pos;
                let len = self.src[start..]
                    .find(|c: char| !(c.is_alphanumeric() || c == '_'))
                    .unwrap_or(self.src.len() - start);
                self.pos += len;
                let name = &self.src[start..start + len];
                (self.resolve)(name).ok_or_else(|| WordError::UnknownSymbol(name.to_owned()))
            }
            _ => Err(self.error("expected an operand")),
        }
    }
}

/// Order in which redexes are contracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Normalize children first, then the root, recursively.
    InnermostFirst,
    /// Repeatedly contract the leftmost-outermost redex by a single rule step.
    OutermostFirst,
}

/// The rewriting system for words in `Q[X]`:
///
/// 1. `a / b -> b a`
/// 2. `a \ b -> b a`
/// 3. `p q -> (p q evaluated in Q)` for `p, q` in `Q`
/// 4. `(u v) u -> v`
/// 5. `u (v u) -> v`
/// 6. `u u -> u` (MTS only)
#[derive(Debug, Clone, Copy)]
pub struct Normalizer<'a> {
    q: &'a FiniteQuasigroup,
    variety: Variety,
}

impl<'a> Normalizer<'a> {
    pub fn new(q: &'a FiniteQuasigroup, variety: Variety) -> Self {
        Self { q, variety }
    }

    pub fn variety(&self) -> Variety {
        self.variety
    }

    pub fn normalize(&self, t: &Term) -> Term {
        self.normalize_with(t, Strategy::InnermostFirst)
    }

    pub fn normalize_with(&self, t: &Term, strategy: Strategy) -> Term {
        match strategy {
            Strategy::InnermostFirst => self.innermost(t),
            Strategy::OutermostFirst => {
                let mut cur = t.clone();
                while let Some(next) = self.outermost_step(&cur) {
                    cur = next;
                }
                cur
            }
        }
    }

    fn innermost(&self, t: &Term) -> Term {
        match t {
            Term::Node(op, a, b) => self.combine(*op, self.innermost(a), self.innermost(b)),
            leaf => leaf.clone(),
        }
    }

    /// Builds `a op b` from normalized operands and reduces at the root.
    /// The result is normalized.
    pub fn combine(&self, op: Op, a: Term, b: Term) -> Term {
        let (a, b) = match op {
            Op::Mul => (a, b),
            Op::RDiv | Op::LDiv => (b, a),
        };
        if let (Term::Elem(x), Term::Elem(y)) = (&a, &b) {
            return Term::Elem(self.q.mul(*x, *y));
        }
        if let Term::Node(Op::Mul, u, _) = &a {
            if **u == b {
                let Term::Node(_, _, v) = a else { unreachable!() };
                return *v;
            }
        }
        if let Term::Node(Op::Mul, _, u) = &b {
            if **u == a {
                let Term::Node(_, v, _) = b else { unreachable!() };
                return *v;
            }
        }
        if self.variety == Variety::Mts && a == b {
            return a;
        }
        Term::mul(a, b)
    }

    /// One rule application at the root, in priority order, without
    /// assuming the children are normalized.
    fn root_step(&self, t: &Term) -> Option<Term> {
        let Term::Node(op, a, b) = t else { return None };
        match op {
            Op::RDiv | Op::LDiv => return Some(Term::mul((**b).clone(), (**a).clone())),
            Op::Mul => {}
        }
        if let (Term::Elem(x), Term::Elem(y)) = (&**a, &**b) {
            return Some(Term::Elem(self.q.mul(*x, *y)));
        }
        if let Term::Node(Op::Mul, u, v) = &**a {
            if **u == **b {
                return Some((**v).clone());
            }
        }
        if let Term::Node(Op::Mul, v, u) = &**b {
            if **u == **a {
                return Some((**v).clone());
            }
        }
        if self.variety == Variety::Mts && a == b {
            return Some((**a).clone());
        }
        None
    }

    fn outermost_step(&self, t: &Term) -> Option<Term> {
        if let Some(r) = self.root_step(t) {
            return Some(r);
        }
        let Term::Node(op, a, b) = t else { return None };
        if let Some(a2) = self.outermost_step(a) {
            return Some(Term::Node(*op, Box::new(a2), b.clone()));
        }
        self.outermost_step(b).map(|b2| Term::Node(*op, a.clone(), Box::new(b2)))
    }

    /// True when no rule applies anywhere in `t`.
    pub fn is_normal(&self, t: &Term) -> bool {
        match t {
            Term::Node(_, a, b) => self.root_step(t).is_none() && self.is_normal(a) && self.is_normal(b),
            _ => true,
        }
    }

    /// The action of a free group word on a word of `Q[X]`: `R(q)` maps
    /// `w` to `w q` and `R(q)^-1` maps it to `q w`. The result is normalized.
    pub fn act_on_word(&self, g: &FreeGroupWord, w: &Term) -> Term {
        g.letters().iter().fold(self.normalize(w), |w, l| {
            let q = Term::Elem(l.generator);
            if l.inverse {
                self.combine(Op::Mul, q, w)
            } else {
                self.combine(Op::Mul, w, q)
            }
        })
    }
}

/// The unreduced tree `w R(q1)^e1 ... R(qr)^er`.
pub fn act_unreduced(g: &FreeGroupWord, w: &Term) -> Term {
    g.letters().iter().fold(w.clone(), |w, l| {
        let q = Term::Elem(l.generator);
        if l.inverse {
            Term::mul(q, w)
        } else {
            Term::mul(w, q)
        }
    })
}

/// A letter of the universal multiplication group before identifying
/// `L~(q)` with `R~(q)^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MixedLetter {
    R(usize, bool),
    L(usize, bool),
}

/// Rewrites `L~(q)^±1` as `R~(q)^∓1`, which holds in any semisymmetric quasigroup.
pub fn from_mixed(letters: &[MixedLetter]) -> FreeGroupWord {
    FreeGroupWord::from_letters(letters.iter().map(|l| match *l {
        MixedLetter::R(q, inv) => Letter { generator: q, inverse: inv },
        MixedLetter::L(q, inv) => Letter { generator: q, inverse: !inv },
    }))
}
