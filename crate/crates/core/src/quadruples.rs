//! Descartes quadruples, their descent to `(0,0,1,1)`, and geometrization.
//!
//! The eight generators act linearly on a quadruple written as a column:
//!
//! - `M_i` replaces entry `i` by `2·(sum of the other three) − entry`
//!   (the Descartes conjugate through the other three disks);
//! - `N_i` negates entry `i` and adds twice its old value to the others
//!   (inversion through the boundary of disk `i`).
//!
//! On a placed configuration the same update is applied to each of the four
//! symbol columns `(ẋ, ẏ, A, Aᶜ)`. Every generator is an involution, so a
//! recorded descent replays in reverse to move the fixed placement of the
//! base configuration onto the input curvatures.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::disk::{self, DiskSymbol};
use crate::error::{Error, Result};
use crate::exact::{self, add, gcd_all, mul, sub, two_squares, Int};
use crate::report::VerificationReport;
use crate::triples::CurvatureTriple;

/// Serialized as `{"quad": [a, b, c, d]}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "QuadJson", into = "QuadJson")]
pub struct DescartesQuadruple(pub [Int; 4]);

#[derive(Serialize, Deserialize)]
struct QuadJson {
    quad: [Int; 4],
}

impl From<QuadJson> for DescartesQuadruple {
    fn from(j: QuadJson) -> Self {
        Self(j.quad)
    }
}

impl From<DescartesQuadruple> for QuadJson {
    fn from(q: DescartesQuadruple) -> Self {
        Self { quad: q.0 }
    }
}

/// Four placed disks; row `i` is the disk in slot `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeoQuadruple {
    pub disks: [DiskSymbol; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    /// Descartes move (Apollonian group).
    M,
    /// Self-inversion (kaleidoscope group).
    N,
}

/// One generator application; `slot` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadMove {
    pub kind: MoveKind,
    pub slot: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoveChain(pub Vec<QuadMove>);

impl QuadMove {
    pub const fn m(slot: usize) -> Self {
        Self {
            kind: MoveKind::M,
            slot,
        }
    }

    pub const fn n(slot: usize) -> Self {
        Self {
            kind: MoveKind::N,
            slot,
        }
    }
}

impl fmt::Display for QuadMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}", self.kind, self.slot)
    }
}

impl fmt::Display for MoveChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl fmt::Display for DescartesQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

/// Applies a generator to one column of four values.
fn apply_column(col: [Int; 4], mv: QuadMove) -> Result<[Int; 4]> {
    if !(1..=4).contains(&mv.slot) {
        return Err(Error::BadSlot(mv.slot));
    }
    let i = mv.slot - 1;
    let mut out = col;
    match mv.kind {
        MoveKind::M => {
            let others = exact::sum(
                col.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &v)| v),
            )?;
            out[i] = sub(mul(2, others)?, col[i])?;
        }
        MoveKind::N => {
            let pivot = col[i];
            for (j, v) in out.iter_mut().enumerate() {
                *v = if j == i {
                    -pivot
                } else {
                    add(*v, mul(2, pivot)?)?
                };
            }
        }
    }
    Ok(out)
}

/// Something the eight generators act on.
pub trait Movable: Sized {
    fn apply(&self, mv: QuadMove) -> Result<Self>;
}

impl Movable for DescartesQuadruple {
    fn apply(&self, mv: QuadMove) -> Result<Self> {
        apply_column(self.0, mv).map(Self)
    }
}

impl Movable for GeoQuadruple {
    fn apply(&self, mv: QuadMove) -> Result<Self> {
        let mut rows = self.disks.map(|d| d.as_array());
        for c in 0..4 {
            let col = apply_column([rows[0][c], rows[1][c], rows[2][c], rows[3][c]], mv)?;
            for (row, x) in rows.iter_mut().zip(col) {
                row[c] = x;
            }
        }
        Ok(GeoQuadruple {
            disks: rows.map(DiskSymbol::from_array),
        })
    }
}

pub fn apply_move<Q: Movable>(q: &Q, mv: QuadMove) -> Result<Q> {
    q.apply(mv)
}

impl MoveChain {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Applies the moves in recorded order.
    pub fn apply<Q: Movable + Clone>(&self, start: &Q) -> Result<Q> {
        self.0.iter().try_fold(start.clone(), |q, &mv| q.apply(mv))
    }

    /// Applies the inverse of the whole chain: the moves in reverse order,
    /// each generator being its own inverse.
    pub fn apply_inverse<Q: Movable + Clone>(&self, start: &Q) -> Result<Q> {
        self.0
            .iter()
            .rev()
            .try_fold(start.clone(), |q, &mv| q.apply(mv))
    }
}

/// `(a+b+c+d)² − 2(a²+b²+c²+d²)`, zero exactly for Descartes quadruples.
pub fn q4(v: &DescartesQuadruple) -> Result<Int> {
    let total = exact::sum(v.0)?;
    let squares = exact::sum(v.0.iter().map(|&x| mul(x, x)).collect::<Result<Vec<_>>>()?)?;
    sub(mul(total, total)?, mul(2, squares)?)
}

pub const BASE_QUADRUPLE: DescartesQuadruple = DescartesQuadruple([0, 0, 1, 1]);

impl DescartesQuadruple {
    pub const fn new(a: Int, b: Int, c: Int, d: Int) -> Self {
        Self([a, b, c, d])
    }

    pub fn weight(&self) -> Result<Int> {
        exact::sum(self.0)
    }

    pub fn sorted(&self) -> Self {
        let mut v = self.0;
        v.sort_unstable();
        Self(v)
    }

    pub fn is_base(&self) -> bool {
        self.sorted() == BASE_QUADRUPLE
    }

    fn invalid(&self, reason: String) -> Error {
        Error::InvalidQuadruple {
            quad: self.0,
            reason,
        }
    }

    /// Membership: `gcd = 1`, Descartes relation, weight `> 1`.
    pub fn validate(&self) -> Result<()> {
        let g = gcd_all(&self.0)?;
        if g != 1 {
            return Err(self.invalid(format!("gcd {g} ≠ 1")));
        }
        let q = q4(self)?;
        if q != 0 {
            return Err(self.invalid(format!("(Σv)² − 2Σv² = {q} ≠ 0")));
        }
        let w = self.weight()?;
        if w <= 1 {
            return Err(self.invalid(format!("weight {w} ≤ 1")));
        }
        Ok(())
    }

    /// The triple left after dropping `slot` (1-based).
    pub fn without(&self, slot: usize) -> CurvatureTriple {
        let mut t = [0; 3];
        let mut k = 0;
        for (j, &v) in self.0.iter().enumerate() {
            if j + 1 != slot {
                t[k] = v;
                k += 1;
            }
        }
        CurvatureTriple(t)
    }
}

impl GeoQuadruple {
    pub fn new(disks: [DiskSymbol; 4]) -> Self {
        Self { disks }
    }

    pub fn curvatures(&self) -> DescartesQuadruple {
        DescartesQuadruple(self.disks.map(|d| d.curv))
    }

    /// Rows sorted lexicographically by `(curv, ẋ, ẏ, Aᶜ)`; a key for
    /// configurations that ignores slot order.
    pub fn sorted_key(&self) -> [DiskSymbol; 4] {
        let mut rows = self.disks;
        rows.sort_unstable_by_key(|d| (d.curv, d.xdot, d.ydot, d.cocurv));
        rows
    }
}

/// One descending step: `N` on the (first) negative minimum, else `M` on
/// the (first) maximum.
pub fn descend_move(v: &DescartesQuadruple) -> QuadMove {
    let min_slot = (0..4).min_by_key(|&i| (v.0[i], i)).unwrap();
    if v.0[min_slot] < 0 {
        QuadMove::n(min_slot + 1)
    } else {
        let max_slot = (0..4)
            .max_by_key(|&i| (v.0[i], std::cmp::Reverse(i)))
            .unwrap();
        QuadMove::m(max_slot + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Descent4 {
    pub chain: MoveChain,
    /// Start, then the quadruple after each move; slot order preserved.
    pub trace: Vec<DescartesQuadruple>,
}

impl Descent4 {
    pub fn final_quad(&self) -> DescartesQuadruple {
        *self.trace.last().expect("trace holds at least the start")
    }

    pub fn sorted_trace(&self) -> Vec<DescartesQuadruple> {
        self.trace.iter().map(DescartesQuadruple::sorted).collect()
    }

    pub fn weights(&self) -> Result<Vec<Int>> {
        self.trace.iter().map(DescartesQuadruple::weight).collect()
    }
}

/// Descends `v` to a slot permutation of `(0,0,1,1)`; the weight drops at
/// every step.
pub fn descend4(v: &DescartesQuadruple) -> Result<Descent4> {
    v.validate()?;
    let mut chain = Vec::new();
    let mut trace = vec![*v];
    let mut current = *v;
    while !current.is_base() {
        let mv = descend_move(&current);
        let next = current.apply(mv)?;
        let (w0, w1) = (current.weight()?, next.weight()?);
        if w1 >= w0 || w1 <= 1 {
            return Err(Error::NonTermination(format!("{current} -{mv}-> {next}")));
        }
        chain.push(mv);
        trace.push(next);
        current = next;
    }
    Ok(Descent4 {
        chain: MoveChain(chain),
        trace,
    })
}

/// The placed base configuration: two half-planes `x ≤ −1`, `x ≥ 1`, the
/// unit disk, and the unit disk centered at `(0, 2)`.
pub const BASE_ZEROS: [DiskSymbol; 2] = [
    DiskSymbol::new_unchecked(-1, 0, 0, 2),
    DiskSymbol::new_unchecked(1, 0, 0, 2),
];
pub const BASE_ONES: [DiskSymbol; 2] = [
    DiskSymbol::new_unchecked(0, 0, 1, -1),
    DiskSymbol::new_unchecked(0, 2, 1, 3),
];

/// The base placement with rows arranged so the curvature column equals
/// `pattern`. Equal curvatures take their rows in fixed order.
pub fn base_geo(pattern: &DescartesQuadruple) -> Result<GeoQuadruple> {
    if !pattern.is_base() {
        return Err(Error::BadPattern(pattern.0));
    }
    let (mut zeros, mut ones) = (BASE_ZEROS.iter(), BASE_ONES.iter());
    let disks = pattern.0.map(|c| {
        let next = if c == 0 { zeros.next() } else { ones.next() };
        *next.expect("pattern holds two zeros and two ones")
    });
    Ok(GeoQuadruple { disks })
}

/// Places `v` in the plane with integral symbols and spinors.
pub fn geometrize(v: &DescartesQuadruple) -> Result<GeoQuadruple> {
    let descent = descend4(v)?;
    let base = base_geo(&descent.final_quad())?;
    descent.chain.apply_inverse(&base)
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn verify_geo(g: &GeoQuadruple) -> VerificationReport {
    let mut report = VerificationReport::new();
    let rows = g.disks;
    report.check(
        "norm invariant",
        rows.iter().enumerate(),
        |(i, d)| match d.norm_defect() {
            Ok(0) => Ok(()),
            Ok(e) => Err(format!("row {}: {d} off by {e}", i + 1)),
            Err(e) => Err(format!("row {}: {e}", i + 1)),
        },
    );
    report.check(
        "pairwise tangency",
        PAIRS,
        |(i, j)| match disk::minkowski2(&rows[i], &rows[j]) {
            Ok(2) => Ok(()),
            Ok(p) => Err(format!("rows {},{}: doubled product {p}", i + 1, j + 1)),
            Err(e) => Err(format!("rows {},{}: {e}", i + 1, j + 1)),
        },
    );
    report.check("Descartes relation", [g.curvatures()], |v| match q4(&v) {
        Ok(0) => Ok(()),
        Ok(q) => Err(format!("{v}: form is {q}")),
        Err(e) => Err(e.to_string()),
    });
    report.check("integral spinors", PAIRS, |(i, j)| {
        let u = disk::tangency_spinor(&rows[i], &rows[j])
            .map_err(|e| format!("rows {},{}: {e}", i + 1, j + 1))?;
        let sum = rows[i].curv + rows[j].curv;
        match u.norm2() {
            Ok(n) if n == sum => Ok(()),
            _ => Err(format!("rows {},{}: |{u}|² ≠ {sum}", i + 1, j + 1)),
        }
    });
    report.check(
        "curvature/co-curvature parity",
        rows.iter().enumerate(),
        |(i, d)| {
            disk::spacetime(d)
                .map(|_| ())
                .map_err(|_| format!("row {}: {d}", i + 1))
        },
    );
    report.check("pairwise sums are sums of two squares", PAIRS, |(i, j)| {
        let sum = rows[i].curv + rows[j].curv;
        match two_squares(sum) {
            Ok(Some(_)) => Ok(()),
            _ => Err(format!("rows {},{}: {sum}", i + 1, j + 1)),
        }
    });
    report
}
