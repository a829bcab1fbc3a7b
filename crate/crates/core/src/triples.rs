//! Curvature triples of tricycles and the descent to `(0,0,1)`.
//!
//! A triple `(a,b,c)` is admissible when `gcd = 1`, the weight `a+b+c` is
//! positive and `q = ab+bc+ca` is a perfect square; `√q` is the curvature of
//! the circle through the three tangency points. Self-inversion through slot
//! `i` negates entry `i` and adds twice its old value to the others; a
//! Descartes move replaces entry `i` by `w ± 2√q`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{add, gcd_all, mul, perfect_square, sub, Int};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CurvatureTriple(pub [Int; 3]);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

/// Slots are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum TriMove {
    SelfInvert { slot: usize },
    DescartesReplace { slot: usize, sign: Sign },
}

impl TriMove {
    /// `S` for self-inversions, `D` for Descartes moves.
    pub fn letter(&self) -> char {
        match self {
            TriMove::SelfInvert { .. } => 'S',
            TriMove::DescartesReplace { .. } => 'D',
        }
    }

    pub fn slot(&self) -> usize {
        match *self {
            TriMove::SelfInvert { slot } | TriMove::DescartesReplace { slot, .. } => slot,
        }
    }
}

impl fmt::Display for TriMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriMove::SelfInvert { slot } => write!(f, "S@{slot}"),
            TriMove::DescartesReplace { slot, sign } => {
                let s = if *sign == Sign::Plus { '+' } else { '-' };
                write!(f, "D{s}@{slot}")
            }
        }
    }
}

impl fmt::Display for CurvatureTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "({a},{b},{c})")
    }
}

impl From<[Int; 3]> for CurvatureTriple {
    fn from(v: [Int; 3]) -> Self {
        Self(v)
    }
}

pub const BASE_TRIPLE: CurvatureTriple = CurvatureTriple([0, 0, 1]);

impl CurvatureTriple {
    pub const fn new(a: Int, b: Int, c: Int) -> Self {
        Self([a, b, c])
    }

    pub fn sorted(&self) -> Self {
        let mut v = self.0;
        v.sort_unstable();
        Self(v)
    }

    pub fn is_base(&self) -> bool {
        self.sorted() == BASE_TRIPLE
    }

    fn invalid(&self, reason: String) -> Error {
        Error::InvalidTriple {
            triple: self.0,
            reason,
        }
    }

    /// Membership test for the admissible set, with one extra guard:
    /// at most one entry may be negative.
    pub fn validate(&self) -> Result<()> {
        let g = gcd_all(&self.0)?;
        if g != 1 {
            return Err(self.invalid(format!("gcd {g} ≠ 1")));
        }
        let w = weight3(self)?;
        if w <= 0 {
            return Err(self.invalid(format!("weight {w} ≤ 0")));
        }
        let q = q3(self)?;
        if perfect_square(q).is_none() {
            return Err(self.invalid(format!("ab+bc+ca = {q} is not a perfect square")));
        }
        if self.0.iter().filter(|&&v| v < 0).count() > 1 {
            return Err(self.invalid("more than one negative entry".into()));
        }
        Ok(())
    }
}

fn check_slot(slot: usize) -> Result<usize> {
    if (1..=3).contains(&slot) {
        Ok(slot - 1)
    } else {
        Err(Error::BadSlot(slot))
    }
}

pub fn weight3(t: &CurvatureTriple) -> Result<Int> {
    let [a, b, c] = t.0;
    add(add(a, b)?, c)
}

/// `ab + bc + ca`.
pub fn q3(t: &CurvatureTriple) -> Result<Int> {
    let [a, b, c] = t.0;
    add(add(mul(a, b)?, mul(b, c)?)?, mul(c, a)?)
}

pub fn is_proper(t: &CurvatureTriple) -> bool {
    matches!(gcd_all(&t.0), Ok(1))
        && matches!(weight3(t), Ok(w) if w > 0)
        && q3(t).ok().and_then(perfect_square).is_some()
}

/// `√(ab+bc+ca)`, the curvature of the circle through the tangency points.
pub fn inscribed_curvature(t: &CurvatureTriple) -> Result<Int> {
    if !is_proper(t) {
        return Err(Error::NotProper(t.0));
    }
    Ok(perfect_square(q3(t)?).expect("checked by is_proper"))
}

/// The two curvatures completing `t` to a Descartes quadruple, smaller first.
pub fn descartes_completions(t: &CurvatureTriple) -> Result<(Int, Int)> {
    let root = inscribed_curvature(t)?;
    let w = weight3(t)?;
    let twice = mul(2, root)?;
    Ok((sub(w, twice)?, add(w, twice)?))
}

/// Inversion through the boundary of the disk in `slot`.
pub fn self_invert3(t: &CurvatureTriple, slot: usize) -> Result<CurvatureTriple> {
    let i = check_slot(slot)?;
    let pivot = t.0[i];
    let mut out = t.0;
    for (j, v) in out.iter_mut().enumerate() {
        *v = if j == i {
            -pivot
        } else {
            add(*v, mul(2, pivot)?)?
        };
    }
    Ok(CurvatureTriple(out))
}

/// Replaces the entry in `slot` by `w ± 2√q` of the whole triple.
pub fn descartes_move3(t: &CurvatureTriple, slot: usize, sign: Sign) -> Result<CurvatureTriple> {
    let i = check_slot(slot)?;
    let (minus, plus) = descartes_completions(t)?;
    let mut out = t.0;
    out[i] = match sign {
        Sign::Plus => plus,
        Sign::Minus => minus,
    };
    Ok(CurvatureTriple(out))
}

/// One descending step: self-inversion through the negative entry when one
/// exists, otherwise the minus Descartes move on the maximal entry. Ties go
/// to the lowest slot.
pub fn descend_step3(t: &CurvatureTriple) -> Result<(TriMove, CurvatureTriple)> {
    t.validate()?;
    let v = t.0;
    let min_slot = (0..3).min_by_key(|&i| (v[i], i)).unwrap();
    if v[min_slot] < 0 {
        let slot = min_slot + 1;
        return Ok((TriMove::SelfInvert { slot }, self_invert3(t, slot)?));
    }
    let max_slot = (0..3)
        .max_by_key(|&i| (v[i], std::cmp::Reverse(i)))
        .unwrap();
    let slot = max_slot + 1;
    let mv = TriMove::DescartesReplace {
        slot,
        sign: Sign::Minus,
    };
    Ok((mv, descartes_move3(t, slot, Sign::Minus)?))
}

/// A recorded descent; `trace[0]` is the start, `trace[k+1]` the result of `moves[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Descent3 {
    pub moves: Vec<TriMove>,
    pub trace: Vec<CurvatureTriple>,
}

impl Descent3 {
    pub fn sorted_trace(&self) -> Vec<CurvatureTriple> {
        self.trace.iter().map(CurvatureTriple::sorted).collect()
    }

    pub fn last(&self) -> &CurvatureTriple {
        self.trace.last().expect("trace holds at least the start")
    }
}

/// Descends `t` until its sorted form is `(0,0,1)`.
pub fn descend3(t: &CurvatureTriple) -> Result<Descent3> {
    t.validate()?;
    let mut moves = Vec::new();
    let mut trace = vec![*t];
    let mut current = *t;
    while !current.is_base() {
        let (mv, next) = descend_step3(&current)?;
        if weight3(&next)? >= weight3(&current)? {
            return Err(Error::NonTermination(format!("{current} -> {next}")));
        }
        moves.push(mv);
        trace.push(next);
        current = next;
    }
    Ok(Descent3 { moves, trace })
}

/// Left-multiplication by the self-inversion matrix of `slot` acting on
/// column vectors; kept as an explicit matrix for cross-checks.
pub fn self_inversion_matrix(slot: usize) -> Result<[[Int; 3]; 3]> {
    let i = check_slot(slot)?;
    let mut m = [[0; 3]; 3];
    for (r, row) in m.iter_mut().enumerate() {
        row[r] = 1;
        if r != i {
            row[i] = 2;
        }
    }
    m[i][i] = -1;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(a: Int, b: Int, c: Int) -> CurvatureTriple {
        CurvatureTriple::new(a, b, c)
    }

    #[test]
    fn weight_and_form() {
        assert_eq!(weight3(&t(0, 0, 1)).unwrap(), 1);
        assert_eq!(weight3(&t(11, 14, 86)).unwrap(), 111);
        assert_eq!(weight3(&t(-6, 11, 14)).unwrap(), 19);
        assert_eq!(q3(&t(11, 14, 15)).unwrap(), 529);
        assert_eq!(q3(&t(1, 1, 1)).unwrap(), 3);
        assert_eq!(q3(&t(0, 0, 1)).unwrap(), 0);
    }

    #[test]
    fn properness() {
        assert!(!is_proper(&t(1, 1, 1)));
        assert!(is_proper(&t(2, 3, 6)));
        assert!(is_proper(&t(-6, 11, 14)));
        assert!(!is_proper(&t(2, 4, 6)));
        assert!(!is_proper(&t(-1, 0, 0)));
    }

    #[test]
    fn inscribed() {
        assert_eq!(inscribed_curvature(&t(11, 14, 15)).unwrap(), 23);
        assert_eq!(inscribed_curvature(&t(0, 0, 1)).unwrap(), 0);
        assert_eq!(inscribed_curvature(&t(-1, 2, 2)).unwrap(), 0);
        assert_eq!(
            inscribed_curvature(&t(1, 1, 1)),
            Err(Error::NotProper([1, 1, 1]))
        );
    }

    #[test]
    fn completions() {
        assert_eq!(descartes_completions(&t(11, 14, 15)).unwrap(), (-6, 86));
        assert_eq!(descartes_completions(&t(0, 0, 1)).unwrap(), (1, 1));
        for n in 1..30 {
            let k = n * n + n + 1;
            assert_eq!(
                descartes_completions(&t(-n, n + 1, n * n + n)).unwrap(),
                (k, k)
            );
        }
    }

    #[test]
    fn self_inversion_examples() {
        assert_eq!(self_invert3(&t(-6, 11, 14), 1).unwrap(), t(6, -1, 2));
        assert_eq!(self_invert3(&t(-1, 2, 6), 1).unwrap(), t(1, 0, 4));
        assert_eq!(self_invert3(&t(0, 0, 1), 1).unwrap(), t(0, 0, 1));
        assert_eq!(self_invert3(&t(0, 0, 1), 4), Err(Error::BadSlot(4)));
    }

    #[test]
    fn descartes_move_examples() {
        assert_eq!(
            descartes_move3(&t(11, 14, 86), 3, Sign::Minus).unwrap(),
            t(11, 14, 15)
        );
        assert_eq!(
            descartes_move3(&t(0, 1, 4), 3, Sign::Minus).unwrap(),
            t(0, 1, 1)
        );
        assert_eq!(
            descartes_move3(&t(0, 1, 1), 2, Sign::Minus)
                .unwrap()
                .sorted(),
            t(0, 0, 1)
        );
    }

    #[test]
    fn descend_step_examples() {
        let (mv, next) = descend_step3(&t(11, 14, 15)).unwrap();
        assert_eq!(
            mv,
            TriMove::DescartesReplace {
                slot: 3,
                sign: Sign::Minus
            }
        );
        assert_eq!(next.sorted(), t(-6, 11, 14));
        let (mv, next) = descend_step3(&t(-6, 11, 14)).unwrap();
        assert_eq!(mv, TriMove::SelfInvert { slot: 1 });
        assert_eq!(next.sorted(), t(-1, 2, 6));
        let (_, next) = descend_step3(&t(0, 0, 1)).unwrap();
        assert_eq!(next, t(0, 0, 1));
    }

    #[test]
    fn descent_chain_matches_known_sequence() {
        let d = descend3(&t(11, 14, 86)).unwrap();
        let expected = [
            t(11, 14, 86),
            t(11, 14, 15),
            t(-6, 11, 14),
            t(-1, 2, 6),
            t(0, 1, 4),
            t(0, 1, 1),
            t(0, 0, 1),
        ];
        assert_eq!(d.sorted_trace(), expected);
        let letters: String = d.moves.iter().map(TriMove::letter).collect();
        assert_eq!(letters, "DDSSDD");
    }

    #[test]
    fn descent_edge_cases() {
        let d = descend3(&t(0, 0, 1)).unwrap();
        assert!(d.moves.is_empty());
        let d = descend3(&t(2, 3, 6)).unwrap();
        assert_eq!(
            d.sorted_trace(),
            [t(2, 3, 6), t(-1, 2, 3), t(0, 1, 1), t(0, 0, 1)]
        );
        assert!(matches!(
            descend3(&t(1, 1, 1)),
            Err(Error::InvalidTriple { .. })
        ));
        assert!(matches!(
            descend3(&t(2, 4, 6)),
            Err(Error::InvalidTriple { .. })
        ));
        assert!(matches!(
            descend3(&t(-1, -1, 3)),
            Err(Error::InvalidTriple { .. })
        ));
    }

    #[test]
    fn matrices_match_moves_and_preserve_form() {
        // Gram matrix of ab+bc+ca, doubled to stay integral.
        let g = [[0, 1, 1], [1, 0, 1], [1, 1, 0]];
        for slot in 1..=3 {
            let m = self_inversion_matrix(slot).unwrap();
            for v in [[-6, 11, 14], [2, 3, 6], [0, 0, 1]] {
                let prod: Vec<Int> = (0..3)
                    .map(|r| (0..3).map(|c| m[r][c] * v[c]).sum())
                    .collect();
                assert_eq!(
                    self_invert3(&t(v[0], v[1], v[2]), slot).unwrap().0.to_vec(),
                    prod
                );
            }
            for r in 0..3 {
                for c in 0..3 {
                    let mut acc = 0;
                    for k in 0..3 {
                        for l in 0..3 {
                            acc += m[k][r] * g[k][l] * m[l][c];
                        }
                    }
                    assert_eq!(acc, g[r][c]);
                }
            }
        }
    }

    /// Admissible triples with entries in a box, by exhaustive scan.
    fn admissible(limit: Int) -> Vec<CurvatureTriple> {
        let mut out = Vec::new();
        for a in -limit..=limit {
            for b in a..=limit {
                for c in b..=limit {
                    let tr = t(a, b, c);
                    if tr.validate().is_ok() {
                        out.push(tr);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn descent_properties_on_all_small_triples() {
        for tr in admissible(40) {
            let d = descend3(&tr).unwrap();
            for (w, pair) in d.trace.windows(2).zip(&d.moves) {
                assert!(w[1].validate().is_ok(), "{} left the set via {pair}", w[0]);
                assert!(weight3(&w[1]).unwrap() < weight3(&w[0]).unwrap());
                if let TriMove::SelfInvert { .. } = pair {
                    assert_eq!(q3(&w[0]).unwrap(), q3(&w[1]).unwrap());
                }
            }
            assert!(d.last().is_base());
        }
    }

    proptest! {
        #[test]
        fn moves_are_involutive(idx in 0usize..200, slot in 1usize..=3) {
            let all = admissible(25);
            let tr = all[idx % all.len()];
            let inv = self_invert3(&tr, slot).unwrap();
            prop_assert_eq!(self_invert3(&inv, slot).unwrap(), tr);
            prop_assert!(inv.validate().is_ok());
            let up = descartes_move3(&tr, slot, Sign::Plus).unwrap();
            let back = descartes_move3(&up, slot, Sign::Minus).unwrap();
            let down = descartes_move3(&tr, slot, Sign::Minus).unwrap();
            let fwd = descartes_move3(&down, slot, Sign::Plus).unwrap();
            // w ± 2√q replaces the slot entry; the opposite sign restores it
            // whenever the replaced entry is the matching conjugate.
            prop_assert!(back == tr || fwd == tr);
            prop_assert!(is_proper(&up) && is_proper(&down));
        }
    }
}
