//! Exact rationals and certified rational enclosures of irrational values.

mod constants;
mod enclosure;
pub mod rational;

pub use constants::{ball_volume_enclosure, laguerre_at_minus_two, pi_enclosure};
pub use enclosure::{nth_root_enclosure, Enclosure, PrecisionPolicy};
pub use rational::{fmt_rational, int, parse_rational, rat, Rational};
