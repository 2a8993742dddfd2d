use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{FieldId, RealPlace};

/// An element `x + yω` of K with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: FieldId,
    x: BigRational,
    y: BigRational,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl FieldElement {
    pub fn new(field: FieldId, x: BigRational, y: BigRational) -> Self {
        assert!(
            field != FieldId::Rational || y.is_zero(),
            "ℚ has no ω-coordinate"
        );
        FieldElement { field, x, y }
    }

    pub fn from_ints(field: FieldId, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        Self::new(field, rat(x), rat(y))
    }

    pub fn from_int(field: FieldId, x: impl Into<BigInt>) -> Self {
        Self::new(field, rat(x), BigRational::zero())
    }

    pub fn one(field: FieldId) -> Self {
        Self::from_int(field, 1)
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn y(&self) -> &BigRational {
        &self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    pub fn conj(&self) -> Self {
        let t = rat(self.field.omega_trace());
        FieldElement {
            field: self.field,
            x: &self.x + &self.y * t,
            y: -&self.y,
        }
    }

    pub fn norm(&self) -> BigRational {
        if self.field == FieldId::Rational {
            return self.x.clone();
        }
        let t = rat(self.field.omega_trace());
        let n = rat(self.field.omega_norm());
        &self.x * &self.x + t * &self.x * &self.y + n * &self.y * &self.y
    }

    pub fn trace(&self) -> BigRational {
        if self.field == FieldId::Rational {
            return self.x.clone();
        }
        let t = rat(self.field.omega_trace());
        rat(2) * &self.x + t * &self.y
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        if self.field == FieldId::Rational {
            return Some(FieldElement::new(self.field, self.x.recip(), BigRational::zero()));
        }
        Some(FieldElement {
            field: self.field,
            x: c.x / &n,
            y: c.y / n,
        })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = FieldElement::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Writes the element as `(X + Yω) / D` with integers and `D >= 1` minimal.
    pub fn integral_parts(&self) -> (BigInt, BigInt, BigInt) {
        let d = self.x.denom().lcm(self.y.denom());
        let xx = (&self.x * rat(d.clone())).to_integer();
        let yy = (&self.y * rat(d.clone())).to_integer();
        (xx, yy, d)
    }

    /// Writes the element as `p + q√d` (over ℚ, `q = 0`).
    pub fn sqrt_d_coordinates(&self) -> (BigRational, BigRational) {
        match self.field {
            FieldId::Rational => (self.x.clone(), BigRational::zero()),
            FieldId::Quadratic(_) if self.field.omega_trace() == 1 => {
                let half = BigRational::new(BigInt::one(), BigInt::from(2));
                (&self.x + &self.y * &half, &self.y * half)
            }
            FieldId::Quadratic(_) => (self.x.clone(), self.y.clone()),
        }
    }

    /// Sign of the image under a real embedding; `Ordering::Equal` only for zero.
    pub fn sign_at(&self, place: RealPlace) -> Ordering {
        match self.field {
            FieldId::Rational => self.x.cmp(&BigRational::zero()),
            FieldId::Quadratic(d) => {
                assert!(d > 0, "imaginary quadratic fields have no real places");
                let (p, q) = self.sqrt_d_coordinates();
                let q = if place == RealPlace::S2 { -q } else { q };
                sign_of_p_plus_q_sqrt_d(&p, &q, d)
            }
        }
    }

    pub fn is_positive_at(&self, place: RealPlace) -> bool {
        self.sign_at(place) == Ordering::Greater
    }
}

fn sign_of_p_plus_q_sqrt_d(p: &BigRational, q: &BigRational, d: i64) -> Ordering {
    let zero = BigRational::zero();
    let sp = p.cmp(&zero);
    let sq = q.cmp(&zero);
    if sq == Ordering::Equal {
        return sp;
    }
    if sp == Ordering::Equal || sp == sq {
        return sq;
    }
    // opposite signs: the larger magnitude wins; p² = q²d is impossible for squarefree d > 1
    let lhs = p * p;
    let rhs = q * q * rat(d);
    if lhs > rhs {
        sp
    } else {
        sq
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "mixed fields");
        FieldElement {
            field: self.field,
            x: &self.x + &rhs.x,
            y: &self.y + &rhs.y,
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "mixed fields");
        FieldElement {
            field: self.field,
            x: &self.x - &rhs.x,
            y: &self.y - &rhs.y,
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        assert_eq!(self.field, rhs.field, "mixed fields");
        let t = rat(self.field.omega_trace());
        let n = rat(self.field.omega_norm());
        let yy = &self.y * &rhs.y;
        FieldElement {
            field: self.field,
            x: &self.x * &rhs.x - &n * &yy,
            y: &self.x * &rhs.y + &rhs.x * &self.y + t * yy,
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field,
            x: -&self.x,
            y: -&self.y,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = self.sqrt_d_coordinates();
        let d = match self.field {
            FieldId::Rational => return write!(f, "{p}"),
            FieldId::Quadratic(d) => d,
        };
        let root = if d == -1 { "i".to_string() } else { format!("sqrt({d})") };
        match (p.is_zero(), q.is_zero()) {
            (_, true) => write!(f, "{p}"),
            (true, false) if q.is_one() => write!(f, "{root}"),
            (true, false) => write!(f, "{q}*{root}"),
            (false, false) => {
                let sign = if q.is_negative() { "-" } else { "+" };
                let q = q.abs();
                if q.is_one() {
                    write!(f, "{p} {sign} {root}")
                } else {
                    write!(f, "{p} {sign} {q}*{root}")
                }
            }
        }
    }
}
