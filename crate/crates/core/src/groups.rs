//! Generators of the Descartes groups in dimension `m` (configurations of
//! `m` mutually tangent balls in `ℝ^{m−2}`) and Cayley-graph enumeration.
//!
//! All matrices are exact: the Apollonian generators carry entries
//! `2/(m−3)`, which stop being integers for `m > 5`.

use std::collections::HashSet;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// A square matrix of exact rationals, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    dim: usize,
    entries: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl RationalMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![BigRational::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch(bad.len(), dim));
        }
        Ok(Self {
            dim,
            entries: rows.iter().flatten().map(|&x| rat(x)).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.entries[r * self.dim + c] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn neg(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    /// Determinant by fraction-exact Gaussian elimination.
    pub fn det(&self) -> BigRational {
        let n = self.dim;
        let mut a = self.entries.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return BigRational::zero();
            };
            if pivot != col {
                for c in 0..n {
                    a.swap(pivot * n + c, col * n + c);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in col + 1..n {
                let factor = &a[r * n + col] / &p;
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let delta = &factor * &a[col * n + c];
                    a[r * n + c] -= delta;
                }
            }
        }
        det
    }

    /// Whether every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|x| x.is_integer())
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        let n = self.dim;
        let mut out = RationalMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        out.entries[r * n + c] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn check_dim(m: usize) -> Result<()> {
    if m < 2 {
        Err(Error::InvalidDimension(m))
    } else {
        Ok(())
    }
}

fn check_index(m: usize, i: usize) -> Result<usize> {
    if (1..=m).contains(&i) {
        Ok(i - 1)
    } else {
        Err(Error::BadSlot(i))
    }
}

/// Gram matrix: `3 − m` on the diagonal, `1` elsewhere.
pub fn gram(m: usize) -> Result<RationalMatrix> {
    check_dim(m)?;
    let mut g = RationalMatrix::zeros(m);
    for r in 0..m {
        for c in 0..m {
            g.set(r, c, if r == c { rat(3 - m as i64) } else { rat(1) });
        }
    }
    Ok(g)
}

/// Apollonian generator: row `i` becomes `2/(m−3)` off the diagonal, `−1` on it.
pub fn gen_m(m: usize, i: usize) -> Result<RationalMatrix> {
    check_dim(m)?;
    let i = check_index(m, i)?;
    if m == 3 {
        return Err(Error::DimThreeUndefined);
    }
    let off = BigRational::new(BigInt::from(2), BigInt::from(m as i64 - 3));
    let mut x = RationalMatrix::identity(m);
    for c in 0..m {
        x.set(i, c, if c == i { rat(-1) } else { off.clone() });
    }
    Ok(x)
}

/// Self-inversion generator: column `i` becomes `2` off the diagonal, `−1` on it.
pub fn gen_n(m: usize, i: usize) -> Result<RationalMatrix> {
    check_dim(m)?;
    let i = check_index(m, i)?;
    let mut x = RationalMatrix::identity(m);
    for r in 0..m {
        x.set(r, i, if r == i { rat(-1) } else { rat(2) });
    }
    Ok(x)
}

fn bilinear(u: &[BigRational], g: &RationalMatrix, v: &[BigRational]) -> BigRational {
    let n = g.dim();
    let mut acc = BigRational::zero();
    for (r, ur) in u.iter().enumerate().take(n) {
        for (c, vc) in v.iter().enumerate().take(n) {
            acc += ur * g.get(r, c) * vc;
        }
    }
    acc
}

/// `id − 2·v·vᵀG / (vᵀGv)`.
pub fn reflection_from_axis(axis: &[BigRational], g: &RationalMatrix) -> Result<RationalMatrix> {
    let n = g.dim();
    if axis.len() != n {
        return Err(Error::DimensionMismatch(axis.len(), n));
    }
    let norm = bilinear(axis, g, axis);
    if norm.is_zero() {
        return Err(Error::IsotropicAxis);
    }
    // Row vector vᵀG.
    let vg: Vec<BigRational> = (0..n)
        .map(|c| (0..n).fold(BigRational::zero(), |acc, k| acc + &axis[k] * g.get(k, c)))
        .collect();
    let scale = rat(2) / norm;
    let mut x = RationalMatrix::identity(n);
    for (r, ar) in axis.iter().enumerate() {
        for (c, vgc) in vg.iter().enumerate() {
            let v = x.get(r, c) - &scale * ar * vgc;
            x.set(r, c, v);
        }
    }
    Ok(x)
}

/// Axis reflected by `gen_m(m, i)`: the basis vector `e_i`.
pub fn m_axis(m: usize, i: usize) -> Result<Vec<BigRational>> {
    let i = check_index(m, i)?;
    Ok((0..m).map(|j| rat(i64::from(j == i))).collect())
}

/// Axis reflected by `gen_n(m, i)`: `−e_i + Σ_{j≠i} e_j`.
pub fn n_axis(m: usize, i: usize) -> Result<Vec<BigRational>> {
    let i = check_index(m, i)?;
    Ok((0..m).map(|j| rat(if j == i { -1 } else { 1 })).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Kal,
    Apo,
    Des,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kal" => Ok(Self::Kal),
            "apo" => Ok(Self::Apo),
            "des" => Ok(Self::Des),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Kal => "Kal",
            Self::Apo => "Apo",
            Self::Des => "Des",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    pub dim: usize,
    pub family: Family,
}

impl GroupSpec {
    pub fn new(dim: usize, family: Family) -> Result<Self> {
        check_dim(dim)?;
        if dim == 3 && family != Family::Kal {
            return Err(Error::DimThreeUndefined);
        }
        Ok(Self { dim, family })
    }

    /// Generators in a fixed order: all `M_i`, then all `N_i`.
    pub fn generators(&self) -> Result<Vec<RationalMatrix>> {
        let m = self.dim;
        let mut gens = Vec::new();
        if matches!(self.family, Family::Apo | Family::Des) {
            for i in 1..=m {
                gens.push(gen_m(m, i)?);
            }
        }
        if matches!(self.family, Family::Kal | Family::Des) {
            for i in 1..=m {
                gens.push(gen_n(m, i)?);
            }
        }
        Ok(gens)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family, self.dim)
    }
}

/// Outcome of the generator identities in one dimension. Checks that do not
/// apply (Apollonian generators at `m = 3`) are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub dim: usize,
    pub involution: bool,
    pub orthogonality: bool,
    pub det_minus_one: bool,
    pub cross_commutation: Option<bool>,
    /// `N_i = M_iᵀ` for every `i`.
    pub transpose_duality: Option<bool>,
    /// `N_1 = −M_2` and `N_2 = −M_1`, only at `m = 2`.
    pub m2_relation: Option<bool>,
    /// Axis reflections reproduce the generators (isotropic axes skipped).
    pub axis_reflections: bool,
}

impl PropertyReport {
    /// Whether every applicable identity except transpose duality holds;
    /// duality is dimension-specific and reported separately.
    pub fn core_passed(&self) -> bool {
        self.involution
            && self.orthogonality
            && self.det_minus_one
            && self.cross_commutation.unwrap_or(true)
            && self.m2_relation.unwrap_or(true)
            && self.axis_reflections
    }

    pub fn lines(&self) -> Vec<String> {
        fn flag(b: Option<bool>) -> &'static str {
            match b {
                Some(true) => "holds",
                Some(false) => "fails",
                None => "n/a",
            }
        }
        vec![
            format!("involution X² = id: {}", flag(Some(self.involution))),
            format!("orthogonality XᵀGX = G: {}", flag(Some(self.orthogonality))),
            format!("det X = −1: {}", flag(Some(self.det_minus_one))),
            format!("[M_i, N_j] = 0 for i ≠ j: {}", flag(self.cross_commutation)),
            format!(
                "transpose duality N_i = M_iᵀ: {}",
                flag(self.transpose_duality)
            ),
            format!("N_1 = −M_2, N_2 = −M_1: {}", flag(self.m2_relation)),
            format!(
                "axis reflections match generators: {}",
                flag(Some(self.axis_reflections))
            ),
        ]
    }
}

pub fn check_generator_properties(m: usize) -> Result<PropertyReport> {
    check_dim(m)?;
    let g = gram(m)?;
    let id = RationalMatrix::identity(m);
    let ns: Vec<RationalMatrix> = (1..=m).map(|i| gen_n(m, i)).collect::<Result<_>>()?;
    let ms: Vec<RationalMatrix> = if m == 3 {
        Vec::new()
    } else {
        (1..=m).map(|i| gen_m(m, i)).collect::<Result<_>>()?
    };
    let all: Vec<&RationalMatrix> = ms.iter().chain(&ns).collect();

    let involution = all.iter().all(|x| *x * *x == id);
    let orthogonality = all.iter().all(|x| &(&x.transpose() * &g) * *x == g);
    let det_minus_one = all.iter().all(|x| x.det() == rat(-1));

    let (cross_commutation, transpose_duality) = if ms.is_empty() {
        (None, None)
    } else {
        let commute = (0..m).all(|i| {
            (0..m)
                .filter(|&j| j != i)
                .all(|j| &ms[i] * &ns[j] == &ns[j] * &ms[i])
        });
        let dual = (0..m).all(|i| ns[i] == ms[i].transpose());
        (Some(commute), Some(dual))
    };
    let m2_relation = (m == 2).then(|| ns[0] == ms[1].neg() && ns[1] == ms[0].neg());

    let matches = |axis: Vec<BigRational>, x: &RationalMatrix| match reflection_from_axis(&axis, &g)
    {
        Ok(r) => r == *x,
        Err(Error::IsotropicAxis) => true,
        Err(_) => false,
    };
    let mut axis_reflections = true;
    for i in 1..=m {
        if let Some(mi) = ms.get(i - 1) {
            axis_reflections &= matches(m_axis(m, i)?, mi);
        }
        axis_reflections &= matches(n_axis(m, i)?, &ns[i - 1]);
    }

    Ok(PropertyReport {
        dim: m,
        involution,
        orthogonality,
        det_minus_one,
        cross_commutation,
        transpose_duality,
        m2_relation,
        axis_reflections,
    })
}

/// Sizes of the spheres of radius `0..=depth` around the identity in the
/// Cayley graph of the group generated by `spec`'s generators.
pub fn cayley_sphere_sizes(spec: &GroupSpec, depth: usize) -> Result<Vec<usize>> {
    cayley_sphere_sizes_with_budget(spec, depth, DEFAULT_BUDGET)
}

pub fn cayley_sphere_sizes_with_budget(
    spec: &GroupSpec,
    depth: usize,
    budget: usize,
) -> Result<Vec<usize>> {
    let gens = spec.generators()?;
    let id = RationalMatrix::identity(spec.dim);
    let mut seen: HashSet<RationalMatrix> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    let mut sizes = vec![1];
    for _ in 0..depth {
        let mut next = Vec::new();
        for x in &frontier {
            for g in &gens {
                let y = x * g;
                if !seen.contains(&y) {
                    if seen.len() >= budget {
                        return Err(Error::BudgetExhausted(budget));
                    }
                    seen.insert(y.clone());
                    next.push(y);
                }
            }
        }
        sizes.push(next.len());
        frontier = next;
    }
    Ok(sizes)
}
