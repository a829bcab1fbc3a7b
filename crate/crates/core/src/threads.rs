//! Root quadruples, the descent digraph of principal triples, polynomial
//! thread families, and the Fibonacci thread.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disk::Rational;
use crate::error::{Error, Result};
use crate::exact::{fibonacci, gcd_all, isqrt, mul, Int};
use crate::packing::apollonian_root;
use crate::quadruples::{descend4, DescartesQuadruple};
use crate::triples::{
    descartes_completions, descend3, is_proper, self_invert3, CurvatureTriple, TriMove,
};

/// A Descartes quadruple `a ≤ 0 ≤ b ≤ c ≤ d` on which no Descartes move
/// lowers the weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootQuadruple {
    pub quad: DescartesQuadruple,
}

impl RootQuadruple {
    pub fn new(quad: DescartesQuadruple) -> Result<Self> {
        let sorted = quad.sorted();
        quad.validate()?;
        let [a, b, c, d] = sorted.0;
        if quad != sorted || a > 0 || b < 0 {
            return Err(Error::InvalidRoot(format!(
                "{quad} is not sorted as a ≤ 0 ≤ b ≤ c ≤ d"
            )));
        }
        if a + b + c < d {
            return Err(Error::InvalidRoot(format!("{quad}: {a}+{b}+{c} < {d}")));
        }
        Ok(Self { quad })
    }

    /// The three largest disks, i.e. the three smallest curvatures.
    pub fn principal_triple(&self) -> CurvatureTriple {
        self.quad.without(4)
    }
}

impl fmt::Display for RootQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.quad.fmt(f)
    }
}

/// Roots with outer curvature `−n`, scanning `n < b ≤ c`. A root needs
/// `d ≥ c`, i.e. `a + b ≥ 2√q`, which gives `4c(b−n) ≤ (b+n)²`; with
/// `b ≤ c` this bounds `b` too, and `c ≤ n² + n` overall.
fn roots_with_outer(n: Int) -> Result<Vec<RootQuadruple>> {
    if n == 0 {
        return Ok(vec![RootQuadruple::new(DescartesQuadruple::new(
            0, 0, 1, 1,
        ))?]);
    }
    let a = -n;
    let mut out = Vec::new();
    let mut b = n + 1;
    loop {
        let span = mul(4, b - n)?;
        let square = mul(b + n, b + n)?;
        if mul(span, b)? > square {
            break;
        }
        let c_max = square / span;
        for c in b..=c_max {
            let q = a * b + b * c + c * a;
            let (root, exact) = isqrt(q.max(0))?;
            if q < 0 || !exact {
                continue;
            }
            let d = a + b + c - 2 * root;
            if d < c || gcd_all(&[a, b, c, d])? != 1 {
                continue;
            }
            out.push(RootQuadruple::new(DescartesQuadruple::new(a, b, c, d))?);
        }
        b += 1;
    }
    Ok(out)
}

/// All primitive roots with `−max_outer ≤ a ≤ 0`, sorted by outer curvature
/// (descending) and then lexicographically.
pub fn root_atlas(max_outer: Int) -> Result<Vec<RootQuadruple>> {
    if max_outer < 0 {
        return Err(Error::NegativeInput(max_outer));
    }
    let mut roots: Vec<RootQuadruple> = (0..=max_outer)
        .into_par_iter()
        .map(roots_with_outer)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    roots.sort_unstable_by_key(|r| {
        let [a, b, c, d] = r.quad.0;
        (-a, b, c, d)
    });
    for r in &roots {
        let descent = descend4(&r.quad)?;
        let fixed = apollonian_root(&r.quad)?;
        if !descent.final_quad().is_base() || fixed != r.quad {
            return Err(Error::VerificationFailed(format!("atlas entry {r}")));
        }
    }
    Ok(roots)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigraphVertex {
    pub triple: CurvatureTriple,
    /// Principal triple of some root in the atlas.
    pub principal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigraphEdge {
    pub from: usize,
    pub to: usize,
    #[serde(rename = "move")]
    pub mv: TriMove,
}

/// Sorted triples linked by single descent steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Digraph {
    pub vertices: Vec<DigraphVertex>,
    pub edges: Vec<DigraphEdge>,
}

impl Digraph {
    pub fn index_of(&self, t: &CurvatureTriple) -> Option<usize> {
        let key = t.sorted();
        self.vertices.binary_search_by(|v| v.triple.cmp(&key)).ok()
    }

    pub fn successor(&self, idx: usize) -> Option<usize> {
        self.edges.iter().find(|e| e.from == idx).map(|e| e.to)
    }

    /// Vertices visited from `t` until a vertex without successor.
    pub fn path_from(&self, t: &CurvatureTriple) -> Vec<CurvatureTriple> {
        let mut path = Vec::new();
        let mut cur = self.index_of(t);
        while let Some(i) = cur {
            path.push(self.vertices[i].triple);
            cur = self.successor(i);
        }
        path
    }

    /// Graphviz text; principal triples are boxes, the rest ovals.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph descent {\n");
        for v in &self.vertices {
            let shape = if v.principal { "box" } else { "ellipse" };
            s.push_str(&format!("  \"{}\" [shape={shape}];\n", v.triple));
        }
        for e in &self.edges {
            let (a, b) = (&self.vertices[e.from].triple, &self.vertices[e.to].triple);
            s.push_str(&format!(
                "  \"{a}\" -> \"{b}\" [label=\"{}\"];\n",
                e.mv.letter()
            ));
        }
        s.push_str("}\n");
        s
    }
}

pub fn principal_descent_digraph(max_outer: Int) -> Result<Digraph> {
    let principal: BTreeSet<CurvatureTriple> = root_atlas(max_outer)?
        .iter()
        .map(|r| r.principal_triple())
        .collect();
    let mut steps: BTreeMap<CurvatureTriple, Option<(CurvatureTriple, TriMove)>> = BTreeMap::new();
    for t in &principal {
        let descent = descend3(t)?;
        let sorted = descent.sorted_trace();
        for (k, v) in sorted.iter().enumerate() {
            let next = descent.moves.get(k).map(|&mv| (sorted[k + 1], mv));
            steps.entry(*v).or_insert(next);
        }
    }
    let vertices: Vec<DigraphVertex> = steps
        .keys()
        .map(|t| DigraphVertex {
            triple: *t,
            principal: principal.contains(t),
        })
        .collect();
    let index: BTreeMap<CurvatureTriple, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.triple, i))
        .collect();
    let edges = steps
        .iter()
        .filter_map(|(from, step)| {
            step.map(|(to, mv)| DigraphEdge {
                from: index[from],
                to: index[&to],
                mv,
            })
        })
        .collect();
    Ok(Digraph { vertices, edges })
}

/// The thread families of principal triples indexed by `n ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ThreadFamily {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl ThreadFamily {
    pub const ALL: [ThreadFamily; 7] = [
        Self::A,
        Self::B,
        Self::C,
        Self::D,
        Self::E,
        Self::F,
        Self::G,
    ];

    /// The family's triple at `n`.
    pub fn triple(&self, n: Int) -> Result<CurvatureTriple> {
        if n < 1 {
            return Err(Error::NegativeInput(n));
        }
        let t = match self {
            Self::A => [-n, n + 1, n * n + n],
            Self::B => [-(2 * n - 1), 2 * n + 1, 2 * n * n],
            Self::C => [-(5 * n - 3), 5 * n + 2, 5 * n * n - n - 1],
            Self::D => [-4 * n, 4 * n + 4, (2 * n + 1) * (2 * n + 1)],
            Self::E => [-(5 * n - 4), 5 * n + 1, 5 * n * n - 3 * n],
            Self::F => {
                let k = mul(2, n)?;
                [-fibonacci(k)?, fibonacci(k + 1)?, fibonacci(k + 2)?]
            }
            Self::G => [-(4 * n - 2), 4 * n + 2, 4 * n * n - 1],
        };
        Ok(CurvatureTriple(t))
    }

    /// The closed-form fourth disks `(center − δ, center + δ)`.
    pub fn fourth_formula(&self, n: Int) -> Result<(Int, Int)> {
        if n < 1 {
            return Err(Error::NegativeInput(n));
        }
        let (center, delta) = match self {
            Self::A => (n * n + n + 1, 0),
            Self::B => (2 * n * n + 2, 2),
            Self::C => (5 * n * n - n + 4, 2),
            Self::D => ((2 * n + 1) * (2 * n + 1) + 4, 4),
            Self::E => (5 * n * n - 3 * n + 5, 4),
            Self::F => (mul(2, fibonacci(mul(2, n)? + 1)?)?, 2),
            Self::G => (4 * n * n + 3, 0),
        };
        Ok((center - delta, center + delta))
    }
}

impl FromStr for ThreadFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Self::A),
            "B" => Ok(Self::B),
            "C" => Ok(Self::C),
            "D" => Ok(Self::D),
            "E" => Ok(Self::E),
            "F" => Ok(Self::F),
            "G" => Ok(Self::G),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

impl fmt::Display for ThreadFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A triple with its two Descartes completions, smaller first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ThreadTriple {
    pub triple: CurvatureTriple,
    pub fourth: (Int, Int),
    pub proper: bool,
}

impl fmt::Display for ThreadTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.fourth;
        write!(
            f,
            "{}  fourth ({lo}, {hi})  proper={}",
            self.triple, self.proper
        )
    }
}

fn completed(triple: CurvatureTriple) -> Result<ThreadTriple> {
    let proper = is_proper(&triple);
    let fourth = descartes_completions(&triple)?;
    Ok(ThreadTriple {
        triple,
        fourth,
        proper,
    })
}

pub fn thread_triple(family: ThreadFamily, n: Int) -> Result<ThreadTriple> {
    completed(family.triple(n)?)
}

/// `(−F_{2n}, F_{2n+1}, F_{2n+2})` with fourth disks `2F_{2n+1} ± 2`.
pub fn fibonacci_triple(n: Int) -> Result<ThreadTriple> {
    thread_triple(ThreadFamily::F, n)
}

/// Inverting through the negative disk steps the Fibonacci thread down by one.
pub fn fibonacci_step_down(n: Int) -> Result<CurvatureTriple> {
    Ok(self_invert3(&fibonacci_triple(n)?.triple, 1)?.sorted())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FibonacciPoint {
    pub n: Int,
    pub point: (Rational, Rational),
    /// `(x+1)² + (y−1)² = 1`.
    pub on_circle: bool,
}

/// `P_n = (−F_{n−1}², 2F_n²) / F_{2n+1}`, the tangency point of the disks of
/// curvature `F_{2n−1}` and `F_{2n}` in the Fibonacci chain.
pub fn fibonacci_tangency_point(n: Int) -> Result<FibonacciPoint> {
    if n < 1 {
        return Err(Error::NegativeInput(n));
    }
    let (prev, cur) = (fibonacci(n - 1)?, fibonacci(n)?);
    let den = fibonacci(mul(2, n)? + 1)?;
    let x = Rational::new(-mul(prev, prev)?, den);
    let y = Rational::new(mul(2, mul(cur, cur)?)?, den);
    let one = Rational::from(1);
    let on_circle = (x + one) * (x + one) + (y - one) * (y - one) == one;
    Ok(FibonacciPoint {
        n,
        point: (x, y),
        on_circle,
    })
}
