//! Zeta functions of curves over finite fields: exact L-polynomial
//! computation from point counts, value-distribution numerics, and
//! constructive perturbations of the critical-circle property.

pub mod approx;
pub mod curves;
mod extrap;
pub mod gf;
pub mod instability;
pub mod nevanlinna;
pub mod polyrat;
pub mod report;
pub mod zeta;
