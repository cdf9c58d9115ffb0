//! Exact binomial coefficients on arbitrary-precision integers.

use num_bigint::BigUint;
use num_traits::Zero;

/// Exact binomial coefficient `C(n, k)`.
///
/// Returns 0 when `k > n`, and 1 when `k == 0` or `k == n`. The result is
/// computed exactly; it never overflows.
///
/// # Examples
///
/// ```
/// use binseq_core::binomial;
/// assert_eq!(binomial(5, 2), 10u32.into());
/// assert_eq!(binomial(0, 0), 1u32.into());
/// assert_eq!(binomial(3, 7), 0u32.into());
/// ```
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}
