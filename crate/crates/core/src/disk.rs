//! Disk symbols, their Minkowski geometry, and tangency spinors.
//!
//! A disk with center `(x, y)` and signed curvature `A` is stored as the
//! integer quadruple `(ẋ, ẏ, A, Aᶜ)` with `ẋ = A·x`, `ẏ = A·y` and the
//! co-curvature `Aᶜ` fixed by `A·Aᶜ = ẋ² + ẏ² − 1`. Read as a vector with
//! the quadratic form `−ẋ² − ẏ² + A·Aᶜ`, every disk has norm `−1`; two disks
//! are tangent exactly when their product is `1`. Negative curvature denotes
//! the exterior of a circle, zero curvature a half-plane.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, add, mul, perfect_square, sub, Int};

pub type Rational = Ratio<Int>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiskSymbol {
    pub xdot: Int,
    pub ydot: Int,
    pub curv: Int,
    pub cocurv: Int,
}

/// Integer pair `m + n·i` attached to an ordered pair of tangent disks.
///
/// Spinors are only defined up to sign; [`Spinor::canonical`] picks the
/// representative with `m > 0`, or `m = 0` and `n ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[Int; 2]", into = "[Int; 2]")]
pub struct Spinor {
    pub m: Int,
    pub n: Int,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EuclideanShape {
    /// `radius = 1/curv`, negative for the exterior of the circle.
    Circle {
        center: (Rational, Rational),
        radius: Rational,
    },
    /// The closed half-plane `{p : normal · p ≥ offset}`.
    HalfPlane {
        normal: (Int, Int),
        offset: Rational,
    },
}

impl DiskSymbol {
    /// Builds a symbol without checking the norm invariant.
    pub const fn new_unchecked(xdot: Int, ydot: Int, curv: Int, cocurv: Int) -> Self {
        Self {
            xdot,
            ydot,
            curv,
            cocurv,
        }
    }

    pub fn new(xdot: Int, ydot: Int, curv: Int, cocurv: Int) -> Result<Self> {
        let d = Self::new_unchecked(xdot, ydot, curv, cocurv);
        d.validate()?;
        Ok(d)
    }

    /// Symbol from reduced coordinates and a nonzero curvature; the
    /// co-curvature is solved from the norm invariant and must be integral.
    pub fn from_reduced(xdot: Int, ydot: Int, curv: Int) -> Result<Self> {
        let invalid = |reason| Error::InvalidDisk {
            xdot,
            ydot,
            curv,
            cocurv: 0,
            reason,
        };
        if curv == 0 {
            return Err(invalid("co-curvature of a half-plane is not determined"));
        }
        let num = sub(add(mul(xdot, xdot)?, mul(ydot, ydot)?)?, 1)?;
        if num % curv != 0 {
            return Err(invalid("co-curvature is not integral"));
        }
        Ok(Self::new_unchecked(xdot, ydot, curv, num / curv))
    }

    /// Symbol of the circle with the given center and signed radius.
    pub fn from_circle(center: (Rational, Rational), radius: Rational) -> Result<Self> {
        if radius.is_zero() {
            return Err(Error::InvalidDisk {
                xdot: 0,
                ydot: 0,
                curv: 0,
                cocurv: 0,
                reason: "zero radius",
            });
        }
        let curv = radius.recip();
        let xdot = center.0 * curv;
        let ydot = center.1 * curv;
        if !(curv.is_integer() && xdot.is_integer() && ydot.is_integer()) {
            return Err(Error::InvalidDisk {
                xdot: xdot.to_integer(),
                ydot: ydot.to_integer(),
                curv: curv.to_integer(),
                cocurv: 0,
                reason: "curvature or reduced coordinates are not integral",
            });
        }
        Self::from_reduced(xdot.to_integer(), ydot.to_integer(), curv.to_integer())
    }

    /// `A·Aᶜ − (ẋ² + ẏ² − 1)`, zero for a valid symbol.
    pub fn norm_defect(&self) -> Result<Int> {
        let lhs = mul(self.curv, self.cocurv)?;
        let rhs = sub(
            add(mul(self.xdot, self.xdot)?, mul(self.ydot, self.ydot)?)?,
            1,
        )?;
        sub(lhs, rhs)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |reason| Error::InvalidDisk {
            xdot: self.xdot,
            ydot: self.ydot,
            curv: self.curv,
            cocurv: self.cocurv,
            reason,
        };
        if self.as_array() == [0; 4] {
            return Err(invalid("all components are zero"));
        }
        if self.norm_defect()? != 0 {
            return Err(invalid("norm invariant A·Aᶜ = ẋ² + ẏ² − 1 violated"));
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    pub fn as_array(&self) -> [Int; 4] {
        [self.xdot, self.ydot, self.curv, self.cocurv]
    }

    pub fn from_array(a: [Int; 4]) -> Self {
        Self::new_unchecked(a[0], a[1], a[2], a[3])
    }

    /// The same circle bounding the complementary disk.
    pub fn complement(&self) -> Self {
        Self::new_unchecked(-self.xdot, -self.ydot, -self.curv, -self.cocurv)
    }

    pub fn is_half_plane(&self) -> bool {
        self.curv == 0
    }

    /// Sign of `A|p|² − 2(ẋ, ẏ)·p + Aᶜ`: negative strictly inside the disk,
    /// zero on its boundary, positive outside.
    pub fn side_of(&self, p: &(Rational, Rational)) -> std::cmp::Ordering {
        let (x, y) = p;
        let value = (x * x + y * y) * self.curv - (x * self.xdot + y * self.ydot) * 2
            + Rational::from_integer(self.cocurv);
        value.cmp(&Rational::zero())
    }
}

impl Spinor {
    pub const fn new(m: Int, n: Int) -> Self {
        Self { m, n }
    }

    pub fn canonical(self) -> Self {
        if self.m < 0 || (self.m == 0 && self.n < 0) {
            Self::new(-self.m, -self.n)
        } else {
            self
        }
    }

    /// `m² + n²`.
    pub fn norm2(&self) -> Result<Int> {
        add(mul(self.m, self.m)?, mul(self.n, self.n)?)
    }

    /// The complex square `u² = (m² − n², 2mn)`.
    pub fn square(&self) -> Result<(Int, Int)> {
        Ok((
            sub(mul(self.m, self.m)?, mul(self.n, self.n)?)?,
            mul(2, mul(self.m, self.n)?)?,
        ))
    }
}

impl From<[Int; 2]> for Spinor {
    fn from(a: [Int; 2]) -> Self {
        Self::new(a[0], a[1])
    }
}

impl From<Spinor> for [Int; 2] {
    fn from(s: Spinor) -> Self {
        [s.m, s.n]
    }
}

impl std::fmt::Display for Spinor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{}]", self.m, self.n)
    }
}

impl std::fmt::Display for DiskSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.xdot, self.ydot, self.curv, self.cocurv
        )
    }
}

/// Twice the Minkowski product: `−2ẋ_Aẋ_B − 2ẏ_Aẏ_B + A·B^c + A^c·B`.
pub fn minkowski2(a: &DiskSymbol, b: &DiskSymbol) -> Result<Int> {
    exact::sum([
        mul(-2, mul(a.xdot, b.xdot)?)?,
        mul(-2, mul(a.ydot, b.ydot)?)?,
        mul(a.curv, b.cocurv)?,
        mul(a.cocurv, b.curv)?,
    ])
}

/// Tangency is a doubled product of exactly 2. `a` and `b` must be distinct
/// disks (and not complements of each other).
pub fn is_tangent(a: &DiskSymbol, b: &DiskSymbol) -> Result<bool> {
    if a == b || *a == b.complement() {
        return Err(Error::SameDisk);
    }
    Ok(minkowski2(a, b)? == 2)
}

/// Inversion of `c` in the boundary circle of `k`: `C + 2⟨K,C⟩K`.
pub fn invert_disk(k: &DiskSymbol, c: &DiskSymbol) -> Result<DiskSymbol> {
    let f = minkowski2(k, c)?;
    let mut out = [0; 4];
    for ((o, ci), ki) in out.iter_mut().zip(c.as_array()).zip(k.as_array()) {
        *o = add(ci, mul(f, ki)?)?;
    }
    Ok(DiskSymbol::from_array(out))
}

/// Spinor oriented from `a` to `b`, in canonical sign.
///
/// With `Δ = A·ẋ_B − B·ẋ_A` the spinor is
/// `√((A+B+Δ)/2) + s·√((A+B−Δ)/2)·i`, `s` the sign of `A·ẏ_B − B·ẏ_A`
/// (zero counts as positive).
pub fn tangency_spinor(a: &DiskSymbol, b: &DiskSymbol) -> Result<Spinor> {
    if !is_tangent(a, b)? {
        return Err(Error::NotTangent);
    }
    let delta_x = sub(mul(a.curv, b.xdot)?, mul(b.curv, a.xdot)?)?;
    let delta_y = sub(mul(a.curv, b.ydot)?, mul(b.curv, a.ydot)?)?;
    let total = add(a.curv, b.curv)?;
    let plus = add(total, delta_x)?;
    let minus = sub(total, delta_x)?;
    let radicand = |twice: Int| {
        if twice % 2 != 0 {
            None
        } else {
            perfect_square(twice / 2)
        }
    };
    match (radicand(plus), radicand(minus)) {
        (Some(m), Some(n)) => {
            let s = if delta_y < 0 { -1 } else { 1 };
            Ok(Spinor::new(m, s * n).canonical())
        }
        _ => Err(Error::NonIntegralSpinor(plus, minus)),
    }
}

/// `spin(B, A)` from `spin(A, B)`: `(m, n) ↦ (−n, m)`, canonicalized.
pub fn spinor_conjugate(u: Spinor) -> Spinor {
    Spinor::new(-u.n, u.m).canonical()
}

/// Space-time coordinates `(ẋ, ẏ, z, t)` with `z = (A − Aᶜ)/2`, `t = (A + Aᶜ)/2`.
pub fn spacetime(a: &DiskSymbol) -> Result<[Int; 4]> {
    let s = add(a.curv, a.cocurv)?;
    if s % 2 != 0 {
        return Err(Error::ParityViolation);
    }
    let d = sub(a.curv, a.cocurv)?;
    Ok([a.xdot, a.ydot, d / 2, s / 2])
}

pub fn decode(a: &DiskSymbol) -> EuclideanShape {
    if a.curv == 0 {
        EuclideanShape::HalfPlane {
            normal: (a.xdot, a.ydot),
            offset: Rational::new(a.cocurv, 2),
        }
    } else {
        EuclideanShape::Circle {
            center: (Rational::new(a.xdot, a.curv), Rational::new(a.ydot, a.curv)),
            radius: Rational::new(1, a.curv),
        }
    }
}

/// The common boundary point of two tangent disks,
/// `(ẋ_A + ẋ_B, ẏ_A + ẏ_B) / (A + B)`.
pub fn tangency_point(a: &DiskSymbol, b: &DiskSymbol) -> Result<(Rational, Rational)> {
    if !is_tangent(a, b)? {
        return Err(Error::NotTangent);
    }
    let total = add(a.curv, b.curv)?;
    if total == 0 {
        return Err(if a.curv == 0 && b.curv == 0 {
            Error::BothHalfPlanes
        } else {
            Error::NotTangent
        });
    }
    Ok((
        Rational::new(add(a.xdot, b.xdot)?, total),
        Rational::new(add(a.ydot, b.ydot)?, total),
    ))
}

impl EuclideanShape {
    /// Axis-aligned bounding box `(xmin, ymin, xmax, ymax)` of a bounded disk.
    pub fn bounding_box(&self) -> Option<[Rational; 4]> {
        match self {
            EuclideanShape::Circle { center, radius } if radius.is_positive() => Some([
                center.0 - radius,
                center.1 - radius,
                center.0 + radius,
                center.1 + radius,
            ]),
            _ => None,
        }
    }
}
