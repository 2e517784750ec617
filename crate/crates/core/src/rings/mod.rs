//! Exact arithmetic in the four principal ideal domains used by the
//! constructions: ℤ, the Gaussian integers ℤ\[i\], the Eisenstein integers
//! ℤ\[ω\] and the Hurwitz quaternions ℍ.

mod division;
mod element;
mod primes;

pub use division::{
    canonical, div_rem, exact_div, gcd_commutative, gcd_with_bezout, gcrd_hurwitz,
    gcrd_with_bezout, nearest_hurwitz, units, Bezout,
};
pub use element::{RingElement, RingTag};
pub use primes::{
    four_square_pow2_real, hurwitz_table, is_prime_element, is_rational_prime, primes_up_to,
    rational_primes_up_to, CanonicalPrime,
};
