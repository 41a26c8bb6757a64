//! Exact computer-algebra engine for rational-function-valued Euler classes.
//!
//! * [`exactnum`]: rationals, polynomials and rational functions in `t`,
//!   truncated monoid series.
//! * [`cohring`]: cohomology rings of small smooth spaces and Chern-root
//!   calculus of split bundles.
//! * [`eulereng`]: Euler series, global series and reduced Euler numbers.
//! * [`gradedmod`]: Hilbert series of weighted graded modules.
//! * [`trajcalc`]: trajectory differentials, splitting formula, zeta function.

pub mod cohring;
pub mod eulereng;
pub mod exactnum;
pub mod gradedmod;
pub mod trajcalc;

pub use exactnum::{Field, Poly, RatFn, Rational};
