//! Neville extrapolation of a sequence of samples f(t_k) to t = 0, used for
//! numeric limits (residues at simple poles) where the sampled quantity is
//! analytic in t near 0.

use std::ops::{Mul, Sub};

/// Polynomial extrapolation to t = 0 through the points (ts[k], vals[k]).
/// The ts must be distinct and nonzero.
pub(crate) fn neville_to_zero<T>(ts: &[f64], vals: &[T]) -> T
where
    T: Copy + Sub<Output = T> + Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let n = ts.len();
    assert!(n == vals.len() && n > 0);
    let mut v: Vec<T> = vals.to_vec();
    for j in 1..n {
        for i in 0..n - j {
            let denom = ts[i + j] - ts[i];
            v[i] = v[i] * (ts[i + j] / denom) + v[i + 1] * (-ts[i] / denom);
        }
    }
    v[0]
}
