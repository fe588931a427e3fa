//! The residue field F_p(t): prime-field arithmetic, polynomials, rational
//! functions, Möbius automorphisms and the text grammar.

pub mod fp;
mod mobius;
mod parse;
mod poly;
mod ratfunc;

pub use fp::{binomial_mod, check_prime, is_prime, signed_binomial_mod, FpElem, MAX_PRIME};
pub use mobius::Mobius;
pub use parse::{parse_poly, parse_poly_var, parse_ratfunc, parse_ratfunc_var};
pub use poly::Poly;
pub use ratfunc::{RatFunc, DEGREE_LIMIT};
