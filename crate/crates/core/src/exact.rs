//! Integer utilities: square roots, gcd, sums of two squares, Fibonacci.

use num_integer::Integer;

use crate::error::{Error, Result};

/// Scalar type for curvatures, coordinates and spinor components.
pub type Int = i128;

pub(crate) fn add(a: Int, b: Int) -> Result<Int> {
    a.checked_add(b).ok_or(Error::Overflow)
}

pub(crate) fn sub(a: Int, b: Int) -> Result<Int> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

pub(crate) fn mul(a: Int, b: Int) -> Result<Int> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

pub(crate) fn sum(values: impl IntoIterator<Item = Int>) -> Result<Int> {
    values.into_iter().try_fold(0, add)
}

/// `⌊√n⌋` by Newton iteration, plus whether the root is exact.
pub fn isqrt(n: Int) -> Result<(Int, bool)> {
    if n < 0 {
        return Err(Error::NegativeInput(n));
    }
    if n < 2 {
        return Ok((n, true));
    }
    // Start above the root; the iteration then decreases monotonically.
    let bits = 128 - n.leading_zeros();
    let mut x: Int = 1 << bits.div_ceil(2);
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            break;
        }
        x = y;
    }
    Ok((x, x * x == n))
}

/// `Some(√n)` when `n` is a perfect square, `None` otherwise (including `n < 0`).
pub fn perfect_square(n: Int) -> Option<Int> {
    match isqrt(n) {
        Ok((r, true)) => Some(r),
        _ => None,
    }
}

/// Greatest common divisor of the absolute values. All zeros give 0.
pub fn gcd_all(values: &[Int]) -> Result<Int> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(values.iter().fold(0, |g, &v| g.gcd(&v)))
}

/// Canonical representation `n = p² + q²` with `0 ≤ p ≤ q` and `p` minimal.
pub fn two_squares(n: Int) -> Result<Option<(Int, Int)>> {
    if n < 0 {
        return Err(Error::NegativeInput(n));
    }
    let (limit, _) = isqrt(n / 2)?;
    for p in 0..=limit {
        if let Some(q) = perfect_square(n - p * p) {
            return Ok(Some((p, q)));
        }
    }
    Ok(None)
}

/// `F_k` with `F_0 = 0`, `F_1 = 1`.
pub fn fibonacci(k: Int) -> Result<Int> {
    if k < 0 {
        return Err(Error::NegativeInput(k));
    }
    if k == 0 {
        return Ok(0);
    }
    let (mut a, mut b): (Int, Int) = (0, 1);
    for _ in 1..k {
        let next = add(a, b)?;
        a = b;
        b = next;
    }
    Ok(b)
}
