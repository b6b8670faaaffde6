//! Exact computation in a Puiseux monoid generated by reciprocals of
//! products of consecutive-by-two primes, and in its monoid algebra.
//!
//! The library verifies, with certificates and exact arithmetic, the two
//! structural facts that make this monoid interesting: every generator is
//! an atom, yet the principal ideals of the elements 1/p_i + 1/p_(i+1)
//! form a strictly ascending chain that never stabilizes. The same chain
//! lifts through monomials into the monoid algebra F[X;M].

pub mod algebra;
pub mod exactnum;
pub mod factor;
pub mod monoid;
pub mod report;
pub mod suites;

pub use exactnum::{nth_prime, Rat};
pub use monoid::{Certificate, GeneratorFamily, MembershipOutcome, PuiseuxMonoid, SearchBudget};
pub use report::{Report, Status};
