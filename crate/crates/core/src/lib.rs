//! Exact arithmetic for the part functions of the real line and the algebra
//! around them: rational floor/ceiling/fractional parts, symbolic function
//! families and their star companions, functional-equation checking over
//! rational grids with replayable witnesses, direct-sum factorizations
//! `ℝ = A ∔ B` of symbolic set families, and modular-style addition with a
//! rational modulus.
//!
//! Everything is computed over ℚ with arbitrary precision; equality is exact
//! and every verdict is three-valued (`Verified` / `Refuted` / `Unknown`) so
//! that finite checks never over-claim universally quantified facts.



pub mod funeq;
pub mod grid;
pub mod setalg;

pub mod partfn;
pub mod rational;
pub mod report;


pub use grid::{GridMode, GridSpec};
pub use partfn::{FunctionSpec, MuTable};
pub use rational::{NonZeroRational, Rational};
pub use report::{CheckReport, Verdict, Witness};

