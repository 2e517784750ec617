use num_traits::Zero;

use super::element::{RingElement, RingTag};
use crate::error::{Error, Result};
use crate::scalar::floor_rational;
use crate::Rational;

/// All units of the ring.
pub fn units(tag: RingTag) -> Vec<RingElement> {
    match tag {
        RingTag::Rational => vec![RingElement::rational(1), RingElement::rational(-1)],
        RingTag::Gaussian => vec![
            RingElement::gaussian(1, 0),
            RingElement::gaussian(-1, 0),
            RingElement::gaussian(0, 1),
            RingElement::gaussian(0, -1),
        ],
        RingTag::Eisenstein => [(1, 0), (-1, 0), (0, 1), (0, -1), (-1, -1), (1, 1)]
            .into_iter()
            .map(|(a, b)| RingElement::eisenstein(a, b))
            .collect(),
        RingTag::Hurwitz => {
            let mut out = Vec::with_capacity(24);
            for axis in 0..4 {
                for s in [2, -2] {
                    let mut c = [0; 4];
                    c[axis] = s;
                    out.push(RingElement::hurwitz_doubled(c).expect("even coordinates"));
                }
            }
            for mask in 0..16u32 {
                let c: [i64; 4] =
                    std::array::from_fn(|k| if mask >> k & 1 == 1 { -1 } else { 1 });
                out.push(RingElement::hurwitz_doubled(c).expect("odd coordinates"));
            }
            out
        }
    }
}

/// The associate of `x` with the lexicographically greatest coordinates.
///
/// For ℍ the associates are the left multiples `u·x`, which generate the
/// same left ideal.
pub fn canonical(x: &RingElement) -> RingElement {
    canonical_with_unit(x).0
}

fn canonical_with_unit(x: &RingElement) -> (RingElement, RingElement) {
    units(x.tag())
        .into_iter()
        .map(|u| (u * *x, u))
        .max_by(|a, b| a.0.coords().cmp(b.0.coords()))
        .expect("every ring has units")
}

fn check_tags(a: &RingElement, b: &RingElement) -> Result<()> {
    if a.tag() != b.tag() {
        return Err(Error::RingMismatch(format!("{} vs {}", a.tag(), b.tag())));
    }
    Ok(())
}

/// Left quotient: returns `q` with `a = q·b`.
pub fn exact_div(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    check_tags(a, b)?;
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let n = b.norm();
    let x = *a * b.conjugate();
    let not_div = || Error::NotDivisible(a.to_string(), b.to_string());
    let mut q = Vec::with_capacity(x.coords().len());
    for &v in x.coords() {
        let v = v as i128;
        if v % n != 0 {
            return Err(not_div());
        }
        q.push((v / n) as i64);
    }
    RingElement::from_coords(a.tag(), &q).map_err(|_| not_div())
}

/// Hurwitz integer nearest to the rational quaternion `q`. Ties go to the
/// lexicographically smallest doubled coordinate tuple.
pub fn nearest_hurwitz(q: &[Rational; 4]) -> RingElement {
    let half = Rational::new(1, 2);
    let mut best: Option<(Rational, [i64; 4])> = None;
    for shift in [Rational::zero(), half] {
        let base: [i128; 4] = std::array::from_fn(|k| floor_rational(&(q[k] - shift)));
        for mask in 0..16u32 {
            let mut doubled = [0i64; 4];
            let mut dist = Rational::zero();
            for k in 0..4 {
                let v = Rational::from_integer(base[k] + i128::from(mask >> k & 1)) + shift;
                let d = q[k] - v;
                dist += d * d;
                doubled[k] = (v * 2).to_integer() as i64;
            }
            let better = match &best {
                None => true,
                Some((bd, bc)) => dist < *bd || (dist == *bd && doubled < *bc),
            };
            if better {
                best = Some((dist, doubled));
            }
        }
    }
    let (_, c) = best.expect("candidates are never empty");
    RingElement::hurwitz_doubled(c).expect("candidate built with uniform parity")
}

fn nearest_quotient(a: &RingElement, b: &RingElement) -> RingElement {
    let n = b.norm();
    let x = *a * b.conjugate();
    let tag = a.tag();
    match tag {
        RingTag::Hurwitz => {
            let q: [Rational; 4] =
                std::array::from_fn(|k| Rational::new(x.coords()[k] as i128, 2 * n));
            nearest_hurwitz(&q)
        }
        RingTag::Rational | RingTag::Gaussian => {
            let c: Vec<i64> = x
                .coords()
                .iter()
                .map(|&v| {
                    let r = Rational::new(v as i128, n);
                    floor_rational(&(r + Rational::new(1, 2))) as i64
                })
                .collect();
            RingElement::from_coords(tag, &c).expect("arity preserved")
        }
        RingTag::Eisenstein => {
            // The nearest point of the hexagonal lattice is a corner of the
            // (1, ω) parallelogram containing the target.
            let u = Rational::new(x.coords()[0] as i128, n);
            let v = Rational::new(x.coords()[1] as i128, n);
            let (fu, fv) = (floor_rational(&u), floor_rational(&v));
            let mut best: Option<(Rational, (i128, i128))> = None;
            for (du, dv) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                let (cu, cv) = (fu + du, fv + dv);
                let eu = u - Rational::from_integer(cu);
                let ev = v - Rational::from_integer(cv);
                let d = eu * eu - eu * ev + ev * ev;
                if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                    best = Some((d, (cu, cv)));
                }
            }
            let (_, (cu, cv)) = best.expect("four candidates");
            RingElement::eisenstein(cu as i64, cv as i64)
        }
    }
}

/// Euclidean division `a = q·b + r` with `N(r) < N(b)`.
pub fn div_rem(a: &RingElement, b: &RingElement) -> Result<(RingElement, RingElement)> {
    check_tags(a, b)?;
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let q = nearest_quotient(a, b);
    let r = *a - q * *b;
    debug_assert!(r.norm() < b.norm());
    Ok((q, r))
}

/// A generator together with left coefficients: `s·a + t·b = gcd`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bezout {
    pub gcd: RingElement,
    pub s: RingElement,
    pub t: RingElement,
}

fn euclid(a: &RingElement, b: &RingElement) -> Result<Bezout> {
    check_tags(a, b)?;
    let tag = a.tag();
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    let (mut r0, mut r1) = (*a, *b);
    let (mut s0, mut s1) = (RingElement::one(tag), RingElement::zero(tag));
    let (mut t0, mut t1) = (RingElement::zero(tag), RingElement::one(tag));
    while !r1.is_zero() {
        let (q, r) = div_rem(&r0, &r1)?;
        let s = s0 - q * s1;
        let t = t0 - q * t1;
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s);
        (t0, t1) = (t1, t);
    }
    let (g, u) = canonical_with_unit(&r0);
    Ok(Bezout {
        gcd: g,
        s: u * s0,
        t: u * t0,
    })
}

/// Canonical generator of the ideal `aD + bD` in a commutative ring.
pub fn gcd_commutative(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    gcd_with_bezout(a, b).map(|r| r.gcd)
}

/// Extended Euclid in a commutative ring.
pub fn gcd_with_bezout(a: &RingElement, b: &RingElement) -> Result<Bezout> {
    if !a.tag().is_commutative() {
        return Err(Error::RingMismatch(
            "gcd_commutative needs a commutative ring; use gcrd_hurwitz".into(),
        ));
    }
    euclid(a, b)
}

/// Greatest common right divisor: `ℍa + ℍb = ℍD`.
pub fn gcrd_hurwitz(a: &RingElement, b: &RingElement) -> Result<RingElement> {
    gcrd_with_bezout(a, b).map(|r| r.gcd)
}

/// Extended right-division Euclid in ℍ with left coefficients.
pub fn gcrd_with_bezout(a: &RingElement, b: &RingElement) -> Result<Bezout> {
    if a.tag() != RingTag::Hurwitz {
        return Err(Error::RingMismatch(format!(
            "gcrd_hurwitz needs Hurwitz elements, got {}",
            a.tag()
        )));
    }
    euclid(a, b)
}
