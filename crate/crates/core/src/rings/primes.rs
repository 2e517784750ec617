use serde::Serialize;

use super::division::canonical;
use super::element::{RingElement, RingTag};
use crate::error::{Error, Result};

/// A prime representative together with its norm and the rate it supports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalPrime {
    #[serde(serialize_with = "serialize_element")]
    pub value: RingElement,
    pub norm: i128,
    /// `log2|φ|` for ℤ, ℤ\[i\], ℤ\[ω\]; `½·log2 p` for ℍ.
    pub rate_bits_per_dim: f64,
}

fn serialize_element<S: serde::Serializer>(
    v: &RingElement,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn is_rational_prime(n: i128) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Rational primes `p ≤ bound`.
pub fn rational_primes_up_to(bound: i64) -> Vec<i64> {
    (2..=bound).filter(|&p| is_rational_prime(p as i128)).collect()
}

/// Primality in the element's own ring.
///
/// In ℤ\[i\] and ℤ\[ω\] an element is prime iff its norm is a rational prime,
/// or its norm is `p²` for an inert `p`. In ℍ it is prime iff its norm is a
/// rational prime.
pub fn is_prime_element(x: &RingElement) -> bool {
    let n = x.norm();
    match x.tag() {
        RingTag::Rational => is_rational_prime(n.isqrt()),
        RingTag::Hurwitz => is_rational_prime(n),
        RingTag::Gaussian | RingTag::Eisenstein => {
            if is_rational_prime(n) {
                return true;
            }
            let p = n.isqrt();
            p * p == n && is_rational_prime(p) && is_inert(x.tag(), p)
        }
    }
}

fn is_inert(tag: RingTag, p: i128) -> bool {
    match tag {
        RingTag::Gaussian => p % 4 == 3,
        RingTag::Eisenstein => p % 3 == 2,
        _ => false,
    }
}

/// Element of norm `p`, found by bounded search.
fn element_of_norm(tag: RingTag, p: i64) -> Option<RingElement> {
    let r = (p as f64).sqrt() as i64 + 2;
    for a in 0..=r {
        for b in -r..=r {
            let x = match tag {
                RingTag::Gaussian => RingElement::gaussian(a, b),
                RingTag::Eisenstein => RingElement::eisenstein(a, b),
                _ => return None,
            };
            if x.norm() == p as i128 {
                return Some(x);
            }
        }
    }
    None
}

fn rate(tag: RingTag, norm: i128) -> f64 {
    match tag {
        RingTag::Rational => (norm as f64).sqrt().log2(),
        _ => 0.5 * (norm as f64).log2(),
    }
}

/// One representative per associate class of primes with norm at most
/// `norm_bound`, sorted by norm and then coordinates.
///
/// For ℤ the bound applies to `|p|`. For ℍ the list holds, for every odd
/// prime `p ≤ norm_bound`, the element returned by [`four_square_pow2_real`].
pub fn primes_up_to(tag: RingTag, norm_bound: i64) -> Vec<CanonicalPrime> {
    let mut out: Vec<RingElement> = Vec::new();
    match tag {
        RingTag::Rational => {
            out.extend(rational_primes_up_to(norm_bound).into_iter().map(RingElement::rational));
        }
        RingTag::Hurwitz => return hurwitz_table(norm_bound),
        RingTag::Gaussian | RingTag::Eisenstein => {
            for p in rational_primes_up_to(norm_bound) {
                let ramified = match tag {
                    RingTag::Gaussian => p == 2,
                    _ => p == 3,
                };
                let split = match tag {
                    RingTag::Gaussian => p % 4 == 1,
                    _ => p % 3 == 1,
                };
                if ramified || split {
                    let x = element_of_norm(tag, p).expect("split or ramified prime has a factor");
                    out.push(canonical(&x));
                    if split {
                        out.push(canonical(&x.conjugate()));
                    }
                } else if (p as i128) * (p as i128) <= norm_bound as i128 {
                    out.push(canonical(&RingElement::from_int(tag, p)));
                }
            }
        }
    }
    let mut primes: Vec<CanonicalPrime> = out
        .into_iter()
        .map(|value| {
            let norm = value.norm();
            CanonicalPrime {
                value,
                norm,
                rate_bits_per_dim: rate(tag, norm),
            }
        })
        .collect();
    primes.sort_by(|a, b| {
        a.norm
            .cmp(&b.norm)
            .then_with(|| a.value.coords().cmp(b.value.coords()))
    });
    primes
}

/// The Hurwitz prime of each odd rational prime up to `bound`.
pub fn hurwitz_table(bound: i64) -> Vec<CanonicalPrime> {
    rational_primes_up_to(bound)
        .into_iter()
        .filter(|&p| p > 2)
        .map(|p| CanonicalPrime {
            value: four_square_pow2_real(p).expect("odd prime"),
            norm: p as i128,
            rate_bits_per_dim: 0.5 * (p as f64).log2(),
        })
        .collect()
}

/// First `(x, y, z)` with `x ≤ y ≤ z` and `x² + y² + z² = m`.
fn three_squares(m: i64) -> Option<[i64; 3]> {
    let mut x = 0;
    while 3 * x * x <= m {
        let mut y = x;
        while x * x + 2 * y * y <= m {
            let rest = m - x * x - y * y;
            let z = (rest as f64).sqrt().round() as i64;
            if z >= y && z * z == rest {
                return Some([x, y, z]);
            }
            y += 1;
        }
        x += 1;
    }
    None
}

/// A Hurwitz integer of norm `p` with real part 1 or 2.
///
/// Real part 1 is tried first. The imaginary coordinates are the nonzero
/// entries of the first three-square decomposition in ascending order,
/// followed by its zeros.
pub fn four_square_pow2_real(p: i64) -> Result<RingElement> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::InvalidInput(format!(
            "expected an odd integer >= 3, got {p}"
        )));
    }
    for re in [1, 2] {
        if let Some(sq) = three_squares(p - re * re) {
            let mut imag: Vec<i64> = sq.iter().copied().filter(|&v| v != 0).collect();
            imag.resize(3, 0);
            return Ok(RingElement::quaternion(re, imag[0], imag[1], imag[2]));
        }
    }
    Err(Error::InvalidInput(format!(
        "{p} has no four-square form with real part 1 or 2"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_table_norms() {
        let norms: Vec<i128> = primes_up_to(RingTag::Gaussian, 53)
            .iter()
            .map(|p| p.norm)
            .collect();
        assert_eq!(
            norms,
            vec![2, 5, 5, 9, 13, 13, 17, 17, 29, 29, 37, 37, 41, 41, 49, 53, 53]
        );
    }

    #[test]
    fn eisenstein_small() {
        let primes = primes_up_to(RingTag::Eisenstein, 7);
        let norms: Vec<i128> = primes.iter().map(|p| p.norm).collect();
        assert_eq!(norms, vec![3, 4, 7, 7]);
        let w = |a, b| RingElement::eisenstein(a, b);
        let expected = [w(1, -1), w(2, 0), w(1, 3), w(1, 3).conjugate()];
        let mut got: Vec<_> = primes.iter().map(|p| p.value).collect();
        let mut want: Vec<_> = expected.iter().map(canonical).collect();
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn rational_small() {
        let v: Vec<_> = primes_up_to(RingTag::Rational, 6)
            .into_iter()
            .map(|p| p.value)
            .collect();
        assert_eq!(v, [2, 3, 5].map(RingElement::rational));
    }

    #[test]
    fn four_square_examples() {
        assert_eq!(four_square_pow2_real(3).unwrap(), RingElement::quaternion(1, 1, 1, 0));
        assert_eq!(four_square_pow2_real(11).unwrap(), RingElement::quaternion(1, 1, 3, 0));
        let p23 = four_square_pow2_real(23).unwrap();
        assert_eq!(p23, RingElement::quaternion(1, 2, 3, 3));
        assert!(four_square_pow2_real(4).is_err());
        assert!(four_square_pow2_real(1).is_err());
    }

    #[test]
    fn four_square_for_all_small_odd_primes() {
        for p in rational_primes_up_to(199).into_iter().filter(|&p| p > 2) {
            let x = four_square_pow2_real(p).unwrap();
            assert_eq!(x.norm(), p as i128);
            let re = x.real_part();
            assert!(re == 1.into() || re == 2.into(), "p = {p}");
        }
    }

    #[test]
    fn primality() {
        assert!(is_prime_element(&RingElement::gaussian(3, 0)));
        assert!(!is_prime_element(&RingElement::gaussian(5, 0)));
        assert!(is_prime_element(&RingElement::eisenstein(2, 0)));
        assert!(!is_prime_element(&RingElement::eisenstein(7, 0)));
        assert!(is_prime_element(&RingElement::quaternion(1, 1, 1, 0)));
        assert!(!is_prime_element(&RingElement::quaternion(3, 0, 0, 0)));
        assert!(is_prime_element(&RingElement::rational(-7)));
    }
}
