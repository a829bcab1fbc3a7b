//! Apollonian completion: every disk of the packing generated by a placed
//! Descartes configuration, up to a curvature bound.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disk::{self, decode, DiskSymbol, EuclideanShape, Rational, Spinor};
use crate::error::{Error, Result};
use crate::exact::Int;
use crate::quadruples::{q4, verify_geo, DescartesQuadruple, GeoQuadruple, Movable, QuadMove};
use crate::report::VerificationReport;

/// Closed axis-aligned rectangle with rational corners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x0: Rational,
    pub y0: Rational,
    pub x1: Rational,
    pub y1: Rational,
}

impl Rect {
    pub fn new(x0: Rational, y0: Rational, x1: Rational, y1: Rational) -> Result<Self> {
        if x0 >= x1 || y0 >= y1 {
            return Err(Error::DegenerateViewport);
        }
        Ok(Self { x0, y0, x1, y1 })
    }

    pub fn from_ints(x0: Int, y0: Int, x1: Int, y1: Int) -> Result<Self> {
        Self::new(x0.into(), y0.into(), x1.into(), y1.into())
    }

    pub fn width(&self) -> Rational {
        self.x1 - self.x0
    }

    pub fn height(&self) -> Rational {
        self.y1 - self.y0
    }

    pub fn corners(&self) -> [(Rational, Rational); 4] {
        [
            (self.x0, self.y0),
            (self.x1, self.y0),
            (self.x0, self.y1),
            (self.x1, self.y1),
        ]
    }

    /// Whether the closed disk `d` meets this rectangle.
    pub fn meets(&self, d: &DiskSymbol) -> bool {
        match decode(d) {
            EuclideanShape::HalfPlane { normal, offset } => self.corners().iter().any(|&(x, y)| {
                Rational::from(normal.0) * x + Rational::from(normal.1) * y >= offset
            }),
            EuclideanShape::Circle { center, radius } => {
                let r2 = radius * radius;
                if radius.is_positive() {
                    let cx = center.0.clamp(self.x0, self.x1);
                    let cy = center.1.clamp(self.y0, self.y1);
                    dist2((cx, cy), center) <= r2
                } else {
                    // Exterior of a circle misses the rectangle only if the
                    // rectangle sits strictly inside that circle.
                    self.corners().iter().any(|&p| dist2(p, center) >= r2)
                }
            }
        }
    }
}

fn dist2(p: (Rational, Rational), q: (Rational, Rational)) -> Rational {
    let (dx, dy) = (p.0 - q.0, p.1 - q.1);
    dx * dx + dy * dy
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tangency {
    pub a: usize,
    pub b: usize,
    pub spinor: Spinor,
}

/// Where a non-root disk first appeared: configuration index and the slot
/// whose Descartes conjugate it is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Witness {
    pub configuration: usize,
    pub slot: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Packing {
    pub root: [DiskSymbol; 4],
    pub bound: Int,
    /// Sorted by `(curv, ẋ, ẏ)`.
    pub disks: Vec<DiskSymbol>,
    pub tangencies: Vec<Tangency>,
    /// Configurations visited by the completion; index 0 is the root.
    #[serde(skip)]
    pub configurations: Vec<GeoQuadruple>,
    /// Parallel to `disks`; `None` for root disks.
    #[serde(skip)]
    pub witnesses: Vec<Option<Witness>>,
}

impl Packing {
    pub fn root_geo(&self) -> GeoQuadruple {
        GeoQuadruple::new(self.root)
    }

    /// Distinct curvatures in increasing order.
    pub fn curvatures(&self) -> Vec<Int> {
        let mut c: Vec<Int> = self.disks.iter().map(|d| d.curv).collect();
        c.dedup();
        c
    }

    /// A packing holding only the disks of one configuration.
    pub fn from_configuration(g: &GeoQuadruple) -> Result<Self> {
        let bound = g.disks.iter().map(|d| d.curv).max().expect("four disks");
        let mut disks = g.disks.to_vec();
        sort_disks(&mut disks);
        let tangencies = tangency_edges(&disks)?;
        Ok(Self {
            root: g.disks,
            bound,
            witnesses: vec![None; disks.len()],
            disks,
            tangencies,
            configurations: vec![*g],
        })
    }
}

fn disk_key(d: &DiskSymbol) -> (Int, Int, Int, Int) {
    (d.curv, d.xdot, d.ydot, d.cocurv)
}

fn sort_disks(disks: &mut [DiskSymbol]) {
    disks.sort_unstable_by_key(disk_key);
}

/// Reduces by Descartes moves alone (replace the largest entry while that
/// lowers it). A packing is bounded iff the result has a negative entry.
pub fn apollonian_root(v: &DescartesQuadruple) -> Result<DescartesQuadruple> {
    let mut current = *v;
    loop {
        let slot = (0..4)
            .max_by_key(|&i| (current.0[i], std::cmp::Reverse(i)))
            .unwrap()
            + 1;
        let next = current.apply(QuadMove::m(slot))?;
        if next.0[slot - 1] >= current.0[slot - 1] {
            return Ok(current);
        }
        current = next;
    }
}

pub fn is_bounded_packing(v: &DescartesQuadruple) -> Result<bool> {
    Ok(apollonian_root(v)?.0.iter().any(|&c| c < 0))
}

/// All pairs `i < j` of tangent disks with their spinors.
pub fn tangency_edges(disks: &[DiskSymbol]) -> Result<Vec<Tangency>> {
    let rows: Vec<Vec<Tangency>> = (0..disks.len())
        .into_par_iter()
        .map(|i| {
            let mut row = Vec::new();
            for j in i + 1..disks.len() {
                if disk::minkowski2(&disks[i], &disks[j])? == 2 {
                    row.push(Tangency {
                        a: i,
                        b: j,
                        spinor: disk::tangency_spinor(&disks[i], &disks[j])?,
                    });
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Breadth-first completion over Descartes moves. A child configuration is
/// kept when its new disk has curvature `≤ max_curv` and meets `region`.
pub fn complete(g: &GeoQuadruple, max_curv: Int, region: Option<&Rect>) -> Result<Packing> {
    let report = verify_geo(g);
    if !report.passed() {
        let failed: Vec<&str> = report.failed_checks().map(|c| c.name.as_str()).collect();
        return Err(Error::InvalidRoot(failed.join(", ")));
    }
    let needed = g.disks.iter().map(|d| d.curv).max().expect("four disks");
    if max_curv < needed {
        return Err(Error::BoundTooSmall {
            bound: max_curv,
            needed,
        });
    }
    if region.is_none() && !is_bounded_packing(&g.curvatures())? {
        return Err(Error::RegionRequired);
    }

    let mut visited: HashSet<[DiskSymbol; 4]> = HashSet::from([g.sorted_key()]);
    let mut configurations = vec![*g];
    let mut origin: HashMap<DiskSymbol, Option<Witness>> =
        g.disks.iter().map(|&d| (d, None)).collect();
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let children: Vec<Vec<(usize, usize, GeoQuadruple)>> = frontier
            .par_iter()
            .map(|&idx| {
                let parent = &configurations[idx];
                let mut out = Vec::new();
                for slot in 1..=4 {
                    let child = parent.apply(QuadMove::m(slot))?;
                    let new = child.disks[slot - 1];
                    if new.curv <= max_curv && region.is_none_or(|r| r.meets(&new)) {
                        out.push((idx, slot, child));
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for (parent, slot, child) in children.into_iter().flatten() {
            if !visited.insert(child.sorted_key()) {
                continue;
            }
            origin.entry(child.disks[slot - 1]).or_insert(Some(Witness {
                configuration: parent,
                slot,
            }));
            next.push(configurations.len());
            configurations.push(child);
        }
        frontier = next;
    }

    let mut disks: Vec<DiskSymbol> = origin.keys().copied().collect();
    sort_disks(&mut disks);
    let witnesses = disks.iter().map(|d| origin[d]).collect();
    let tangencies = tangency_edges(&disks)?;
    Ok(Packing {
        root: g.disks,
        bound: max_curv,
        disks,
        tangencies,
        configurations,
        witnesses,
    })
}

pub fn verify_packing(p: &Packing) -> VerificationReport {
    let mut report = VerificationReport::new();
    report.check("norm invariant", &p.disks, |d| match d.norm_defect() {
        Ok(0) => Ok(()),
        _ => Err(d.to_string()),
    });
    report.check("curvature/co-curvature parity", &p.disks, |d| {
        disk::spacetime(d).map(|_| ()).map_err(|_| d.to_string())
    });
    report.check("curvature bound", &p.disks, |d| {
        if d.curv <= p.bound {
            Ok(())
        } else {
            Err(format!("{d} exceeds {}", p.bound))
        }
    });
    report.check("distinct disks", p.disks.windows(2), |w| {
        if disk_key(&w[0]) < disk_key(&w[1]) {
            Ok(())
        } else {
            Err(format!("{} then {}", w[0], w[1]))
        }
    });
    report.check("root disks present", p.root, |d| {
        if p.disks.contains(&d) {
            Ok(())
        } else {
            Err(d.to_string())
        }
    });
    let edge = |t: &Tangency| -> std::result::Result<(&DiskSymbol, &DiskSymbol), String> {
        match (p.disks.get(t.a), p.disks.get(t.b)) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(format!("edge ({},{}) out of range", t.a, t.b)),
        }
    };
    report.check("tangency edges", &p.tangencies, |t| {
        let (a, b) = edge(t)?;
        match disk::minkowski2(a, b) {
            Ok(2) => Ok(()),
            Ok(v) => Err(format!("{a} / {b}: doubled product {v}")),
            Err(e) => Err(format!("{a} / {b}: {e}")),
        }
    });
    report.check("edge spinors", &p.tangencies, |t| {
        let (a, b) = edge(t)?;
        let sum = a.curv + b.curv;
        match (disk::tangency_spinor(a, b), t.spinor.norm2()) {
            (Ok(u), Ok(n)) if u == t.spinor && n == sum => Ok(()),
            _ => Err(format!("{a} / {b}: spinor {} vs sum {sum}", t.spinor)),
        }
    });
    let listed: HashSet<(usize, usize)> = p.tangencies.iter().map(|t| (t.a, t.b)).collect();
    let tangent_pairs: Vec<(usize, usize)> = (0..p.disks.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            (i + 1..p.disks.len())
                .filter(move |&j| disk::minkowski2(&p.disks[i], &p.disks[j]) == Ok(2))
                .map(move |j| (i, j))
        })
        .collect();
    report.check("edge list complete", tangent_pairs, |(i, j)| {
        if listed.contains(&(i, j)) {
            Ok(())
        } else {
            Err(format!(
                "{} / {} tangent but unlisted",
                p.disks[i], p.disks[j]
            ))
        }
    });
    // Packings read back from JSON carry no completion history.
    if p.configurations.is_empty() {
        return report;
    }
    report.check("configurations are Descartes", &p.configurations, |g| {
        let inner = verify_geo(g);
        if inner.passed() && q4(&g.curvatures()) == Ok(0) {
            Ok(())
        } else {
            Err(format!("{}", g.curvatures()))
        }
    });
    report.check(
        "closure witnesses",
        p.disks.iter().zip(&p.witnesses),
        |(d, w)| {
            let Some(w) = w else {
                return if p.root.contains(d) {
                    Ok(())
                } else {
                    Err(format!("{d} has no witness"))
                };
            };
            let parent = p
                .configurations
                .get(w.configuration)
                .ok_or_else(|| format!("{d}: missing configuration {}", w.configuration))?;
            match parent.apply(QuadMove::m(w.slot)) {
                Ok(child) if child.disks[w.slot - 1] == *d => Ok(()),
                _ => Err(format!("{d} is not the conjugate in its witness")),
            }
        },
    );
    report
}

/// A tangency edge with its curvature sum written as a sum of two squares,
/// read off the spinor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AdjacentSum {
    pub a: usize,
    pub b: usize,
    pub curvatures: (Int, Int),
    pub sum: Int,
    /// `(|m|, |n|)` sorted ascending.
    pub squares: (Int, Int),
    pub holds: bool,
}

impl fmt::Display for AdjacentSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.squares;
        let (ca, cb) = self.curvatures;
        let mark = if self.holds { "" } else { "  (FAILS)" };
        write!(f, "{ca} + {cb} = {} = {x}² + {y}²{mark}", self.sum)
    }
}

pub fn adjacent_sums_report(p: &Packing) -> Vec<AdjacentSum> {
    p.tangencies
        .iter()
        .map(|t| {
            let (a, b) = (p.disks[t.a], p.disks[t.b]);
            let (m, n) = (t.spinor.m.abs(), t.spinor.n.abs());
            let squares = (m.min(n), m.max(n));
            let sum = a.curv + b.curv;
            let holds = t.spinor.norm2().is_ok_and(|v| v == sum);
            AdjacentSum {
                a: t.a,
                b: t.b,
                curvatures: (a.curv, b.curv),
                sum,
                squares,
                holds,
            }
        })
        .collect()
}
