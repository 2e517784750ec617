use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rational;

/// The four rings supported by the constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingTag {
    Rational,
    Gaussian,
    Eisenstein,
    Hurwitz,
}

impl RingTag {
    pub const ALL: [RingTag; 4] = [
        RingTag::Rational,
        RingTag::Gaussian,
        RingTag::Eisenstein,
        RingTag::Hurwitz,
    ];

    /// Real dimension of the ring viewed as a lattice.
    pub fn real_dim(self) -> usize {
        match self {
            RingTag::Rational => 1,
            RingTag::Gaussian | RingTag::Eisenstein => 2,
            RingTag::Hurwitz => 4,
        }
    }

    pub fn is_commutative(self) -> bool {
        self != RingTag::Hurwitz
    }

    /// Number of stored integer coordinates.
    pub fn arity(self) -> usize {
        match self {
            RingTag::Rational => 1,
            RingTag::Gaussian | RingTag::Eisenstein => 2,
            RingTag::Hurwitz => 4,
        }
    }
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RingTag::Rational => "rational",
            RingTag::Gaussian => "gaussian",
            RingTag::Eisenstein => "eisenstein",
            RingTag::Hurwitz => "hurwitz",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for RingTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rational" | "z" | "integer" => Ok(RingTag::Rational),
            "gaussian" | "z[i]" => Ok(RingTag::Gaussian),
            "eisenstein" | "z[w]" => Ok(RingTag::Eisenstein),
            "hurwitz" | "h" => Ok(RingTag::Hurwitz),
            other => Err(Error::InvalidInput(format!("unknown ring '{other}'"))),
        }
    }
}

/// An exact element of one of the four rings.
///
/// Coordinates are `(a)` for ℤ, `(a, b)` for `a + bi` and `a + bω`, and the
/// doubled coordinates `(2a, 2b, 2c, 2d)` for a Hurwitz quaternion
/// `a + bi + cj + dk`. Unused slots are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    tag: RingTag,
    coords: [i64; 4],
}

impl RingElement {
    pub fn rational(a: i64) -> Self {
        RingElement {
            tag: RingTag::Rational,
            coords: [a, 0, 0, 0],
        }
    }

    pub fn gaussian(a: i64, b: i64) -> Self {
        RingElement {
            tag: RingTag::Gaussian,
            coords: [a, b, 0, 0],
        }
    }

    pub fn eisenstein(a: i64, b: i64) -> Self {
        RingElement {
            tag: RingTag::Eisenstein,
            coords: [a, b, 0, 0],
        }
    }

    /// Hurwitz quaternion with integer coordinates `a + bi + cj + dk`.
    pub fn quaternion(a: i64, b: i64, c: i64, d: i64) -> Self {
        RingElement {
            tag: RingTag::Hurwitz,
            coords: [2 * a, 2 * b, 2 * c, 2 * d],
        }
    }

    /// Hurwitz quaternion from doubled coordinates, which must share parity.
    pub fn hurwitz_doubled(c: [i64; 4]) -> Result<Self> {
        let p = c[0].rem_euclid(2);
        if c.iter().any(|v| v.rem_euclid(2) != p) {
            return Err(Error::InvalidInput(format!(
                "doubled Hurwitz coordinates {c:?} mix parities"
            )));
        }
        Ok(RingElement {
            tag: RingTag::Hurwitz,
            coords: c,
        })
    }

    /// Builds an element from its stored coordinates (doubled for Hurwitz).
    pub fn from_coords(tag: RingTag, coords: &[i64]) -> Result<Self> {
        if coords.len() != tag.arity() {
            return Err(Error::InvalidInput(format!(
                "{tag} element needs {} coordinates, got {}",
                tag.arity(),
                coords.len()
            )));
        }
        let mut c = [0i64; 4];
        c[..coords.len()].copy_from_slice(coords);
        match tag {
            RingTag::Hurwitz => RingElement::hurwitz_doubled(c),
            _ => Ok(RingElement { tag, coords: c }),
        }
    }

    pub fn zero(tag: RingTag) -> Self {
        RingElement {
            tag,
            coords: [0; 4],
        }
    }

    pub fn one(tag: RingTag) -> Self {
        RingElement::from_int(tag, 1)
    }

    /// Embedding of a rational integer.
    pub fn from_int(tag: RingTag, v: i64) -> Self {
        let mut c = [0; 4];
        c[0] = if tag == RingTag::Hurwitz { 2 * v } else { v };
        RingElement { tag, coords: c }
    }

    pub fn tag(&self) -> RingTag {
        self.tag
    }

    /// Stored coordinates, trimmed to the ring's arity.
    pub fn coords(&self) -> &[i64] {
        &self.coords[..self.tag.arity()]
    }

    pub fn is_zero(&self) -> bool {
        self.coords == [0; 4]
    }

    /// Exact ring norm: a², a²+b², a²−ab+b², or a²+b²+c²+d².
    pub fn norm(&self) -> i128 {
        let c = self.coords.map(i128::from);
        match self.tag {
            RingTag::Rational => c[0] * c[0],
            RingTag::Gaussian => c[0] * c[0] + c[1] * c[1],
            RingTag::Eisenstein => c[0] * c[0] - c[0] * c[1] + c[1] * c[1],
            RingTag::Hurwitz => c.iter().map(|v| v * v).sum::<i128>() / 4,
        }
    }

    pub fn conjugate(&self) -> Self {
        let [a, b, c, d] = self.coords;
        let coords = match self.tag {
            RingTag::Rational => [a, 0, 0, 0],
            RingTag::Gaussian => [a, -b, 0, 0],
            // a + bω̄ with ω̄ = −1 − ω.
            RingTag::Eisenstein => [a - b, -b, 0, 0],
            RingTag::Hurwitz => [a, -b, -c, -d],
        };
        RingElement {
            tag: self.tag,
            coords,
        }
    }

    /// Real part as an exact rational.
    pub fn real_part(&self) -> Rational {
        match self.tag {
            RingTag::Eisenstein => {
                Rational::new(2 * self.coords[0] as i128 - self.coords[1] as i128, 2)
            }
            RingTag::Hurwitz => Rational::new(self.coords[0] as i128, 2),
            _ => Rational::from_integer(self.coords[0] as i128),
        }
    }

    /// Quaternion coordinates `(a, b, c, d)` as exact rationals. Complex rings
    /// map into the `(1, i)` plane; Eisenstein imaginary parts are irrational,
    /// so this is only defined for the other three rings.
    pub fn quaternion_coords(&self) -> Option<[Rational; 4]> {
        let c = self.coords.map(|v| v as i128);
        match self.tag {
            RingTag::Rational => Some([
                Rational::from_integer(c[0]),
                0.into(),
                0.into(),
                0.into(),
            ]),
            RingTag::Gaussian => Some([
                Rational::from_integer(c[0]),
                Rational::from_integer(c[1]),
                0.into(),
                0.into(),
            ]),
            RingTag::Eisenstein => None,
            RingTag::Hurwitz => Some(c.map(|v| Rational::new(v, 2))),
        }
    }

    /// Complex value `(re, im)` for the commutative rings.
    pub fn to_complex(&self) -> (f64, f64) {
        let a = self.coords[0] as f64;
        let b = self.coords[1] as f64;
        match self.tag {
            RingTag::Rational => (a, 0.0),
            RingTag::Gaussian => (a, b),
            RingTag::Eisenstein => (a - b / 2.0, b * 3f64.sqrt() / 2.0),
            RingTag::Hurwitz => (a / 2.0, b / 2.0),
        }
    }

    /// True for elements of norm one.
    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    /// Multiplies by a rational integer.
    pub fn scale(&self, k: i64) -> Self {
        RingElement {
            tag: self.tag,
            coords: self.coords.map(|v| v * k),
        }
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(
            self.tag, other.tag,
            "ring mismatch: {} vs {}",
            self.tag, other.tag
        );
    }
}

fn hamilton(x: [i64; 4], y: [i64; 4]) -> [i64; 4] {
    let [a1, b1, c1, d1] = x;
    let [a2, b2, c2, d2] = y;
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

impl Mul for RingElement {
    type Output = RingElement;

    fn mul(self, rhs: RingElement) -> RingElement {
        self.check_same(&rhs);
        let [a, b, ..] = self.coords;
        let [c, d, ..] = rhs.coords;
        let coords = match self.tag {
            RingTag::Rational => [a * c, 0, 0, 0],
            RingTag::Gaussian => [a * c - b * d, a * d + b * c, 0, 0],
            // ω² = −1 − ω.
            RingTag::Eisenstein => [a * c - b * d, a * d + b * c - b * d, 0, 0],
            // Doubled inputs give four times the product; halve once.
            RingTag::Hurwitz => hamilton(self.coords, rhs.coords).map(|v| v / 2),
        };
        RingElement {
            tag: self.tag,
            coords,
        }
    }
}

impl Add for RingElement {
    type Output = RingElement;

    fn add(self, rhs: RingElement) -> RingElement {
        self.check_same(&rhs);
        let mut c = self.coords;
        for (x, y) in c.iter_mut().zip(rhs.coords) {
            *x += y;
        }
        RingElement {
            tag: self.tag,
            coords: c,
        }
    }
}

impl Sub for RingElement {
    type Output = RingElement;

    fn sub(self, rhs: RingElement) -> RingElement {
        self + (-rhs)
    }
}

impl Neg for RingElement {
    type Output = RingElement;

    fn neg(self) -> RingElement {
        RingElement {
            tag: self.tag,
            coords: self.coords.map(|v| -v),
        }
    }
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: &mut bool,
    value: String,
    negative: bool,
    unit: &str,
) -> fmt::Result {
    if *first {
        if negative {
            f.write_str("-")?;
        }
    } else {
        f.write_str(if negative { "-" } else { "+" })?;
    }
    *first = false;
    if value == "1" && !unit.is_empty() {
        f.write_str(unit)
    } else {
        write!(f, "{value}{unit}")
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let (values, units): (Vec<String>, &[&str]) = match self.tag {
            RingTag::Rational => (vec![self.coords[0].abs().to_string()], &[""]),
            RingTag::Gaussian => (
                self.coords[..2].iter().map(|v| v.abs().to_string()).collect(),
                &["", "i"],
            ),
            RingTag::Eisenstein => (
                self.coords[..2].iter().map(|v| v.abs().to_string()).collect(),
                &["", "w"],
            ),
            RingTag::Hurwitz => (
                self.coords
                    .iter()
                    .map(|v| {
                        if v % 2 == 0 {
                            (v.abs() / 2).to_string()
                        } else {
                            format!("{}/2", v.abs())
                        }
                    })
                    .collect(),
                &["", "i", "j", "k"],
            ),
        };
        let mut first = true;
        for ((value, unit), raw) in values.into_iter().zip(units).zip(self.coords) {
            if raw != 0 {
                write_term(f, &mut first, value, raw < 0, unit)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn norms() {
        assert_eq!(RingElement::gaussian(1, 2).norm(), 5);
        assert_eq!(RingElement::quaternion(1, 1, 1, 2).norm(), 7);
        for tag in RingTag::ALL {
            assert_eq!(RingElement::zero(tag).norm(), 0);
        }
        assert_eq!(RingElement::eisenstein(1, 3).norm(), 7);
        let h = RingElement::hurwitz_doubled([1, 1, 1, 1]).unwrap();
        assert_eq!(h.norm(), 1);
    }

    #[test]
    fn conjugates() {
        assert_eq!(
            RingElement::quaternion(1, 1, 1, 0).conjugate(),
            RingElement::quaternion(1, -1, -1, 0)
        );
        assert_eq!(RingElement::rational(7).conjugate(), RingElement::rational(7));
        assert_eq!(
            RingElement::eisenstein(1, 3).conjugate(),
            RingElement::eisenstein(-2, -3)
        );
    }

    #[test]
    fn parity_is_enforced() {
        assert!(RingElement::hurwitz_doubled([1, 0, 1, 1]).is_err());
        assert!(RingElement::hurwitz_doubled([3, -1, 1, 5]).is_ok());
    }

    #[test]
    fn quaternion_units_anticommute() {
        let i = RingElement::quaternion(0, 1, 0, 0);
        let j = RingElement::quaternion(0, 0, 1, 0);
        let k = RingElement::quaternion(0, 0, 0, 1);
        assert_eq!(i * j, k);
        assert_eq!(j * i, -k);
        assert_eq!(i * i, RingElement::from_int(RingTag::Hurwitz, -1));
    }

    #[test]
    fn display() {
        assert_eq!(RingElement::gaussian(1, -2).to_string(), "1-2i");
        assert_eq!(RingElement::eisenstein(1, -1).to_string(), "1-w");
        assert_eq!(RingElement::quaternion(5, 5, 5, 0).to_string(), "5+5i+5j");
        let h = RingElement::hurwitz_doubled([1, -1, 1, 1]).unwrap();
        assert_eq!(h.to_string(), "1/2-1/2i+1/2j+1/2k");
    }

    fn arb_element(tag: RingTag) -> impl Strategy<Value = RingElement> {
        prop::array::uniform4(-40i64..40).prop_map(move |mut c| {
            if tag == RingTag::Hurwitz {
                let p = c[0].rem_euclid(2);
                for v in c.iter_mut().skip(1) {
                    if v.rem_euclid(2) != p {
                        *v += 1;
                    }
                }
            }
            RingElement::from_coords(tag, &c[..tag.arity()]).unwrap()
        })
    }

    fn arb_pair() -> impl Strategy<Value = (RingElement, RingElement)> {
        prop::sample::select(RingTag::ALL.to_vec())
            .prop_flat_map(|tag| (arb_element(tag), arb_element(tag)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn norm_is_multiplicative((x, y) in arb_pair()) {
            prop_assert_eq!((x * y).norm(), x.norm() * y.norm());
        }

        #[test]
        fn conjugation_is_an_involution_giving_the_norm((x, _y) in arb_pair()) {
            prop_assert_eq!(x.conjugate().conjugate(), x);
            prop_assert_eq!(x * x.conjugate(), RingElement::from_int(x.tag(), x.norm() as i64));
        }
    }
}
