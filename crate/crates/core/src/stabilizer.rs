//! Schreier transversal and free basis for the stabilizer of a base point
//! under the action of the free group on `R(Q)`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::qg::FiniteQuasigroup;
use crate::words::{from_mixed, FreeGroupWord, MixedLetter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabilizerError {
    #[error("quasigroup is not semisymmetric")]
    NotSemisymmetric,
    #[error("base point {0} is not an element")]
    BaseOutOfRange(usize),
    #[error("word maps the base point to {0}, not to itself")]
    NotInStabilizer(usize),
}

/// Which family a basis word belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// `R(e e)`
    E2,
    /// `T_e(x) = R(x e) R(e x)`
    T(usize),
    /// `R_e(x, y) = R(x e) R(y) R((x y) e)^-1`
    R(usize, usize),
}

impl BasisKind {
    pub fn describe(&self, q: &FiniteQuasigroup) -> String {
        match *self {
            BasisKind::E2 => "E2".to_owned(),
            BasisKind::T(x) => format!("T({})", q.label(x)),
            BasisKind::R(x, y) => format!("R({},{})", q.label(x), q.label(y)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub kind: BasisKind,
    pub word: FreeGroupWord,
}

/// A basis element with exponent `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisTerm {
    pub index: usize,
    pub inverse: bool,
}

#[derive(Debug, Clone)]
pub struct StabilizerBasis {
    base: usize,
    elements: Vec<BasisElement>,
    transversal: Vec<FreeGroupWord>,
    lookup: HashMap<FreeGroupWord, usize>,
}

fn require_semisymmetric(q: &FiniteQuasigroup, e: usize) -> Result<(), StabilizerError> {
    if e >= q.order() {
        return Err(StabilizerError::BaseOutOfRange(e));
    }
    if !q.is_semisymmetric() {
        return Err(StabilizerError::NotSemisymmetric);
    }
    Ok(())
}

impl StabilizerBasis {
    /// The basis `R(e^2)`, `T_e(x)` for `x != e`, and `R_e(x, y)` for
    /// `x != e`, `y != e x`, in that order with `x` then `y` ascending.
    pub fn new(q: &FiniteQuasigroup, e: usize) -> Result<Self, StabilizerError> {
        require_semisymmetric(q, e)?;
        let ee = q.mul(e, e);
        let mut elements = vec![BasisElement { kind: BasisKind::E2, word: FreeGroupWord::r(ee) }];
        let others = || q.elements().filter(move |&x| x != e);
        for x in others() {
            let word = FreeGroupWord::r(q.mul(x, e)).concat(&FreeGroupWord::r(q.mul(e, x)));
            elements.push(BasisElement { kind: BasisKind::T(x), word });
        }
        for x in others() {
            let ex = q.mul(e, x);
            for y in q.elements().filter(|&y| y != ex) {
                let word = FreeGroupWord::product(&[
                    FreeGroupWord::r(q.mul(x, e)),
                    FreeGroupWord::r(y),
                    FreeGroupWord::r_inv(q.mul(q.mul(x, y), e)),
                ]);
                elements.push(BasisElement { kind: BasisKind::R(x, y), word });
            }
        }
        let transversal = q
            .elements()
            .map(|p| if p == e { FreeGroupWord::identity() } else { FreeGroupWord::r(q.mul(p, e)) })
            .collect();
        let lookup = elements.iter().enumerate().map(|(i, b)| (b.word.clone(), i)).collect();
        Ok(Self { base: e, elements, transversal, lookup })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn rank(&self) -> usize {
        self.elements.len()
    }

    /// Coset representative carrying the base point to `p`.
    pub fn transversal(&self, p: usize) -> &FreeGroupWord {
        &self.transversal[p]
    }

    pub fn index_of(&self, kind: BasisKind) -> Option<usize> {
        self.elements.iter().position(|b| b.kind == kind)
    }

    /// Schreier rewriting: scans `w` left to right, carrying the coset
    /// representative of the current point, and emits one basis term for
    /// every nontrivial Schreier generator met.
    pub fn rewrite(&self, w: &FreeGroupWord, q: &FiniteQuasigroup) -> Result<Vec<BasisTerm>, StabilizerError> {
        let end = w.act_on_element(self.base, q);
        if end != self.base {
            return Err(StabilizerError::NotInStabilizer(end));
        }
        let mut out = Vec::new();
        let mut point = self.base;
        for l in w.letters() {
            let s = FreeGroupWord::r(l.generator);
            let (h, next, inverse) = if l.inverse {
                let next = q.rdiv(point, l.generator);
                // t s^-1 u^-1 = (u s t^-1)^-1
                let h = FreeGroupWord::product([&self.transversal[next], &s, &self.transversal[point].invert()]);
                (h, next, true)
            } else {
                let next = q.mul(point, l.generator);
                let h = FreeGroupWord::product([&self.transversal[point], &s, &self.transversal[next].invert()]);
                (h, next, false)
            };
            if !h.is_identity() {
                let index = *self.lookup.get(&h).expect("every nontrivial Schreier generator is a basis word");
                out.push(BasisTerm { index, inverse });
            }
            point = next;
        }
        Ok(out)
    }

    /// Substitutes basis words back and reduces.
    pub fn expand(&self, terms: &[BasisTerm]) -> FreeGroupWord {
        terms.iter().fold(FreeGroupWord::identity(), |acc, t| {
            let w = &self.elements[t.index].word;
            if t.inverse {
                acc.concat(&w.invert())
            } else {
                acc.concat(w)
            }
        })
    }

    pub fn display<'a>(&'a self, q: &'a FiniteQuasigroup) -> impl fmt::Display + 'a {
        DisplayBasis { basis: self, q }
    }
}

struct DisplayBasis<'a> {
    basis: &'a StabilizerBasis,
    q: &'a FiniteQuasigroup,
}

impl fmt::Display for DisplayBasis<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.basis.elements {
            writeln!(f, "{}\t{}", b.kind.describe(self.q), b.word.display(self.q))?;
        }
        write!(f, "rank {}", self.basis.rank())
    }
}

pub fn schreier_basis(q: &FiniteQuasigroup, e: usize) -> Result<StabilizerBasis, StabilizerError> {
    StabilizerBasis::new(q, e)
}

/// True when `w` fixes `e`.
pub fn is_stabilizer_word(w: &FreeGroupWord, q: &FiniteQuasigroup, e: usize) -> bool {
    w.act_on_element(e, q) == e
}

/// The loop-style stabilizer words `T_e(q)`, `R_e(q, r)`, `L_e(q, r)`
/// built from the division tables, with `L(u)` read as `R(u)^-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopGenerators {
    pub t: FreeGroupWord,
    pub r: FreeGroupWord,
    pub l: FreeGroupWord,
}

pub fn loop_generators(q: &FiniteQuasigroup, e: usize, x: usize, y: usize) -> Result<LoopGenerators, StabilizerError> {
    require_semisymmetric(q, e)?;
    use MixedLetter::{L, R};
    let t = from_mixed(&[R(q.ldiv(e, x), false), L(q.rdiv(x, e), true)]);
    let r = from_mixed(&[R(q.ldiv(e, x), false), R(y, false), R(q.ldiv(e, q.mul(x, y)), true)]);
    let l = from_mixed(&[L(q.rdiv(x, e), false), L(y, false), L(q.rdiv(q.mul(y, x), e), true)]);
    Ok(LoopGenerators { t, r, l })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qg::fixtures::*;
    use crate::words::Letter;

    const E: usize = 0;
    const A: usize = 1;
    const B: usize = 2;

    #[test]
    fn order_three_basis_matches_listed_generators() {
        let q = mts_order3();
        let basis = schreier_basis(&q, E).unwrap();
        assert_eq!(basis.rank(), 7);
        let kinds: Vec<BasisKind> = basis.elements().iter().map(|b| b.kind).collect();
        assert_eq!(
            kinds,
            vec![
                BasisKind::E2,
                BasisKind::T(A),
                BasisKind::T(B),
                BasisKind::R(A, E),
                BasisKind::R(A, A),
                BasisKind::R(B, E),
                BasisKind::R(B, B),
            ]
        );
        // e e = e, so the first element is R(e)
        assert_eq!(basis.elements()[0].word, FreeGroupWord::r(E));
        // T_e(a) = R(a e) R(e a) = R(b) R(b)
        assert_eq!(basis.elements()[1].word, FreeGroupWord::from_letters([Letter::r(B), Letter::r(B)]));
        // R_e(a, e) = R(b) R(e) R((a e) e)^-1 = R(b) R(e) R(a)^-1
        assert_eq!(
            basis.elements()[3].word,
            FreeGroupWord::from_letters([Letter::r(B), Letter::r(E), Letter::r_inv(A)])
        );
        for b in basis.elements() {
            assert!(is_stabilizer_word(&b.word, &q, E));
        }
    }

    #[test]
    fn trivial_basis() {
        let q = FiniteQuasigroup::trivial();
        let basis = schreier_basis(&q, 0).unwrap();
        assert_eq!(basis.rank(), 1);
        assert_eq!(basis.elements()[0].word, FreeGroupWord::r(0));
    }

    #[test]
    fn rejects_non_semisymmetric() {
        let z3 = FiniteQuasigroup::from_abelian_group(&[3]).unwrap();
        assert_eq!(schreier_basis(&z3, 0).unwrap_err(), StabilizerError::NotSemisymmetric);
        assert_eq!(schreier_basis(&mts_order3(), 3).unwrap_err(), StabilizerError::BaseOutOfRange(3));
    }

    #[test]
    fn transversal_reaches_every_point() {
        let q = mts_order4();
        for e in q.elements() {
            let basis = schreier_basis(&q, e).unwrap();
            assert!(basis.transversal(e).is_identity());
            for p in q.elements() {
                assert_eq!(basis.transversal(p).act_on_element(e, &q), p);
            }
        }
    }

    #[test]
    fn mixed_right_left_quotients_leave_the_stabilizer() {
        let q = mts_order4();
        for x in 1..4 {
            for y in 1..4 {
                if x != y {
                    let w = FreeGroupWord::r(q.mul(x, E)).concat(&FreeGroupWord::r_inv(q.mul(y, E)));
                    assert!(!is_stabilizer_word(&w, &q, E));
                }
            }
        }
        assert!(is_stabilizer_word(&FreeGroupWord::identity(), &q, E));
    }

    #[test]
    fn loop_generator_words() {
        let q = mts_order3();
        for x in q.elements() {
            for y in q.elements() {
                let g = loop_generators(&q, E, x, y).unwrap();
                // T_e(x) = R(x e) R(e x) once divisions are resolved
                let expected_t = FreeGroupWord::r(q.mul(x, E)).concat(&FreeGroupWord::r(q.mul(E, x)));
                assert_eq!(g.t, expected_t);
                for w in [&g.t, &g.r, &g.l] {
                    assert!(is_stabilizer_word(w, &q, E));
                }
                // R_e(x, y) visits e -> x -> x y -> e
                let letters = g.r.letters();
                if letters.len() == 3 {
                    let first = FreeGroupWord::from_letters(letters[..1].iter().copied());
                    let two = FreeGroupWord::from_letters(letters[..2].iter().copied());
                    assert_eq!(first.act_on_element(E, &q), x);
                    assert_eq!(two.act_on_element(E, &q), q.mul(x, y));
                }
            }
        }
        // T_e(e) = R(e e) R(e e)
        let t = loop_generators(&q, E, E, E).unwrap().t;
        assert_eq!(t, FreeGroupWord::from_letters([Letter::r(E), Letter::r(E)]));
    }

    #[test]
    fn rewriting_single_elements() {
        let q = mts_order3();
        let basis = schreier_basis(&q, E).unwrap();
        for (i, b) in basis.elements().iter().enumerate() {
            assert_eq!(basis.rewrite(&b.word, &q).unwrap(), vec![BasisTerm { index: i, inverse: false }]);
            assert_eq!(basis.rewrite(&b.word.invert(), &q).unwrap(), vec![BasisTerm { index: i, inverse: true }]);
        }
        let w = basis.elements()[0].word.concat(&basis.elements()[1].word);
        let terms = basis.rewrite(&w, &q).unwrap();
        assert_eq!(terms.len(), 2);
        assert_eq!(basis.expand(&terms), w);
        assert_eq!(basis.rewrite(&FreeGroupWord::r(A), &q).unwrap_err(), StabilizerError::NotInStabilizer(q.mul(E, A)));
    }
}
