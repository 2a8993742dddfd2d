use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{prime, FieldElement, FieldId, PrimeIdeal, UnitGroup};
use crate::arith;
use crate::error::{Error, Result};

/// A nonzero ideal `c·(ℤa + ℤ(b + ω))` in canonical form.
///
/// Over ℚ the ideal `(n)` is stored as `(n, 1, 0)`. Two ideals are equal iff
/// their triples are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal {
    field: FieldId,
    c: i64,
    a: i64,
    b: i64,
}

type Vec2 = (i128, i128);

fn to_i64(v: i128) -> i64 {
    v.try_into().expect("ideal data exceeds 64-bit range")
}

/// Product of `x1 + y1ω` and `x2 + y2ω`.
fn mul_coords(field: FieldId, (x1, y1): Vec2, (x2, y2): Vec2) -> Vec2 {
    let t = field.omega_trace() as i128;
    let n = field.omega_norm() as i128;
    (x1 * x2 - n * y1 * y2, x1 * y2 + x2 * y1 + t * y1 * y2)
}

impl Ideal {
    pub(crate) fn from_triple_unchecked(field: FieldId, c: i64, a: i64, b: i64) -> Self {
        Ideal { field, c, a, b }
    }

    /// Validates and builds `c·(ℤa + ℤ(b + ω))`.
    pub fn from_triple(field: FieldId, c: i64, a: i64, b: i64) -> Result<Self> {
        if c < 1 || a < 1 || b < 0 || b >= a {
            return Err(Error::InvalidIdeal(format!(
                "({c}, {a}, {b}) violates c >= 1, a >= 1, 0 <= b < a"
            )));
        }
        if field == FieldId::Rational && (a, b) != (1, 0) {
            return Err(Error::InvalidIdeal("ideals of Z have a = 1, b = 0".into()));
        }
        let t = field.omega_trace() as i128;
        let n = field.omega_norm() as i128;
        let nb = b as i128 * b as i128 + t * b as i128 + n;
        if field != FieldId::Rational && nb.rem_euclid(a as i128) != 0 {
            return Err(Error::InvalidIdeal(format!("a = {a} does not divide N(b + ω) = {nb}")));
        }
        Ok(Ideal { field, c, a, b })
    }

    pub fn unit(field: FieldId) -> Self {
        Ideal { field, c: 1, a: 1, b: 0 }
    }

    pub(crate) fn from_int(field: FieldId, n: i64) -> Self {
        assert!(n > 0);
        Ideal { field, c: n, a: 1, b: 0 }
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn triple(&self) -> (i64, i64, i64) {
        (self.c, self.a, self.b)
    }

    pub fn norm(&self) -> u64 {
        match self.field {
            FieldId::Rational => self.c as u64,
            FieldId::Quadratic(_) => (self.c as u64)
                .checked_mul(self.c as u64)
                .and_then(|n| n.checked_mul(self.a as u64))
                .expect("ideal norm exceeds u64"),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.c == 1 && self.a == 1
    }

    /// Z-basis `{(A, 0), (B, C)}` in ω-coordinates.
    fn basis(&self) -> [Vec2; 2] {
        let (c, a, b) = (self.c as i128, self.a as i128, self.b as i128);
        if self.field == FieldId::Rational {
            return [(c, 0), (c, 0)];
        }
        [(c * a, 0), (c * b, c)]
    }

    /// Normal form of the Z-lattice spanned by `gens`, which must be an O-ideal of full rank.
    fn from_lattice(field: FieldId, gens: &[Vec2]) -> Self {
        if field == FieldId::Rational {
            let g = gens.iter().fold(0, |acc, v| arith::gcd_i128(acc, v.0));
            assert!(g != 0, "zero ideal");
            return Ideal::from_int(field, to_i64(g));
        }
        let mut cc = 0i128;
        let mut w: Vec2 = (0, 0);
        for &v in gens {
            if v.1 == 0 {
                continue;
            }
            let (g, s, t) = arith::ext_gcd(cc, v.1);
            w = (s * w.0 + t * v.0, s * w.1 + t * v.1);
            cc = g;
        }
        assert!(cc != 0, "lattice of rank < 2 is not an ideal");
        let bb = w.0;
        let aa = gens
            .iter()
            .fold(0, |acc, v| arith::gcd_i128(acc, v.0 - (v.1 / cc) * bb));
        assert!(aa != 0, "lattice of rank < 2 is not an ideal");
        assert!(aa % cc == 0 && bb % cc == 0, "lattice is not an O-module");
        let a = aa / cc;
        let b = (bb / cc).rem_euclid(a);
        Ideal {
            field,
            c: to_i64(cc),
            a: to_i64(a),
            b: to_i64(b),
        }
    }

    pub(crate) fn from_elements(field: FieldId, gens: &[FieldElement]) -> Result<Self> {
        let mut lattice = Vec::new();
        for g in gens {
            field.check(g.field())?;
            if !g.is_integral() {
                return Err(Error::InvalidIdeal(format!("{g} is not integral")));
            }
            if g.is_zero() {
                continue;
            }
            let x = g.x().to_integer().to_i128().expect("generator too large");
            let y = g.y().to_integer().to_i128().expect("generator too large");
            lattice.push((x, y));
            if field != FieldId::Rational {
                lattice.push(mul_coords(field, (x, y), (0, 1)));
            }
        }
        if lattice.is_empty() {
            return Err(Error::InvalidIdeal("zero ideal".into()));
        }
        Ok(Self::from_lattice(field, &lattice))
    }

    pub fn try_mul(&self, other: &Ideal) -> Result<Ideal> {
        self.field.check(other.field)?;
        Ok(self.mul(other))
    }

    /// Product of ideals. Panics on mixed fields; see [`Ideal::try_mul`].
    pub fn mul(&self, other: &Ideal) -> Ideal {
        assert_eq!(self.field, other.field, "mixed fields");
        if self.field == FieldId::Rational {
            return Ideal::from_int(self.field, self.c.checked_mul(other.c).expect("overflow"));
        }
        let mut gens = Vec::with_capacity(4);
        for u in self.basis() {
            for v in other.basis() {
                gens.push(mul_coords(self.field, u, v));
            }
        }
        Self::from_lattice(self.field, &gens)
    }

    pub fn pow(&self, e: u32) -> Ideal {
        let mut acc = Ideal::unit(self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `gcd(a, b) = a + b`.
    pub fn gcd(&self, other: &Ideal) -> Ideal {
        assert_eq!(self.field, other.field, "mixed fields");
        let [u1, u2] = self.basis();
        let [v1, v2] = other.basis();
        Self::from_lattice(self.field, &[u1, u2, v1, v2])
    }

    pub fn try_gcd(&self, other: &Ideal) -> Result<Ideal> {
        self.field.check(other.field)?;
        Ok(self.gcd(other))
    }

    /// `lcm(a, b) = a ∩ b = ab / gcd(a, b)`.
    pub fn lcm(&self, other: &Ideal) -> Ideal {
        let g = self.gcd(other);
        self.mul(other).div_exact(&g).expect("gcd divides the product")
    }

    pub fn try_lcm(&self, other: &Ideal) -> Result<Ideal> {
        self.field.check(other.field)?;
        Ok(self.lcm(other))
    }

    /// Galois conjugate ideal.
    pub fn conj(&self) -> Ideal {
        let t = self.field.omega_trace();
        Ideal {
            b: (-self.b - t).rem_euclid(self.a),
            ..*self
        }
    }

    /// The ideal `a'` with `a·a' = (N(a))`: the conjugate, or `(1)` over ℚ.
    pub(crate) fn adjugate(&self) -> Ideal {
        match self.field {
            FieldId::Rational => Ideal::unit(self.field),
            FieldId::Quadratic(_) => self.conj(),
        }
    }

    /// `self | other`, i.e. `other ⊂ self`.
    pub fn divides(&self, other: &Ideal) -> bool {
        assert_eq!(self.field, other.field, "mixed fields");
        other.basis().iter().all(|&v| self.contains(v))
    }

    pub fn is_coprime(&self, other: &Ideal) -> bool {
        self.gcd(other).is_unit()
    }

    /// `self / divisor`, defined when `divisor | self`.
    pub fn div_exact(&self, divisor: &Ideal) -> Option<Ideal> {
        assert_eq!(self.field, divisor.field, "mixed fields");
        if !divisor.divides(self) {
            return None;
        }
        if self.field == FieldId::Rational {
            return Some(Ideal::from_int(self.field, self.c / divisor.c));
        }
        // a·conj(b) = (a/b)·(N(b))
        let scaled = self.mul(&divisor.conj());
        let n = divisor.norm() as i64;
        debug_assert_eq!(scaled.c % n, 0);
        Some(Ideal {
            c: scaled.c / n,
            ..scaled
        })
    }

    /// Membership of `x + yω`.
    pub(crate) fn contains(&self, (x, y): Vec2) -> bool {
        let [(aa, _), (bb, cc)] = self.basis();
        if self.field == FieldId::Rational {
            return y == 0 && x % aa == 0;
        }
        y % cc == 0 && (x - (y / cc) * bb) % aa == 0
    }

    pub(crate) fn contains_big(&self, x: &BigInt, y: &BigInt) -> bool {
        let [(aa, _), (bb, cc)] = self.basis();
        if self.field == FieldId::Rational {
            return y.is_zero() && x.is_multiple_of(&BigInt::from(aa));
        }
        let cc = BigInt::from(cc);
        if !y.is_multiple_of(&cc) {
            return false;
        }
        let rest = x - (y / &cc) * BigInt::from(bb);
        rest.is_multiple_of(&BigInt::from(aa))
    }

    pub fn contains_element(&self, e: &FieldElement) -> bool {
        if !e.is_integral() {
            return false;
        }
        self.contains_big(&e.x().to_integer(), &e.y().to_integer())
    }

    /// Canonical residue of `x + yω` modulo this ideal: `0 <= y' < C`, `0 <= x' < A`.
    pub(crate) fn reduce(&self, (x, y): Vec2) -> Vec2 {
        let [(aa, _), (bb, cc)] = self.basis();
        if self.field == FieldId::Rational {
            return (x.rem_euclid(aa), 0);
        }
        let q = y.div_euclid(cc);
        let (x, y) = (x - q * bb, y - q * cc);
        (x.rem_euclid(aa), y)
    }

    pub(crate) fn reduce_big(&self, x: &BigInt, y: &BigInt) -> Vec2 {
        let [(aa, _), (bb, cc)] = self.basis();
        if self.field == FieldId::Rational {
            return (arith::big_mod(x, aa), 0);
        }
        let q = y.div_floor(&BigInt::from(cc));
        let y2 = (y - &q * BigInt::from(cc)).to_i128().expect("residue fits");
        let x2 = x - q * BigInt::from(bb);
        (arith::big_mod(&x2, aa), y2)
    }

    pub(crate) fn mul_coords(&self, u: Vec2, v: Vec2) -> Vec2 {
        mul_coords(self.field, u, v)
    }

    /// Exponent of `q` in this ideal.
    pub fn valuation(&self, q: &PrimeIdeal) -> u32 {
        assert_eq!(self.field, q.field(), "mixed fields");
        let qi = q.to_ideal();
        let mut cur = self.clone();
        let mut e = 0;
        while qi.divides(&cur) {
            cur = cur.div_exact(&qi).expect("divides");
            e += 1;
        }
        e
    }

    /// Prime factorization, ordered by prime.
    pub fn factor(&self) -> Vec<(PrimeIdeal, u32)> {
        let mut out = Vec::new();
        let mut cur = self.clone();
        for (p, _) in arith::factor(self.norm()) {
            for (q, _) in prime::factor_rational_prime(self.field, p as i64).expect("p prime") {
                let qi = q.to_ideal();
                let mut e = 0;
                while qi.divides(&cur) {
                    cur = cur.div_exact(&qi).expect("divides");
                    e += 1;
                }
                if e > 0 {
                    out.push((q, e));
                }
            }
        }
        debug_assert!(cur.is_unit());
        out.sort();
        out
    }

    pub fn from_factorization(field: FieldId, factors: &[(PrimeIdeal, u32)]) -> Ideal {
        factors
            .iter()
            .fold(Ideal::unit(field), |acc, (q, e)| acc.mul(&q.to_ideal().pow(*e)))
    }

    /// Generator of a principal ideal, found by exhaustive search over
    /// elements of norm `±N(a)`; `None` if the ideal is not principal.
    ///
    /// Real quadratic fields: some generator `β` satisfies `|β/β'| ∈ [1/ε, ε]`,
    /// hence `(y√D)² = (β - β')² <= 4·N·ε`, which bounds the search.
    pub(crate) fn generator(&self, units: &UnitGroup) -> Option<FieldElement> {
        let field = self.field;
        let d = match field {
            FieldId::Rational => return Some(FieldElement::from_int(field, self.c)),
            FieldId::Quadratic(d) => d,
        };
        let n = self.norm() as i128;
        let disc = field.discriminant() as i128;
        let t = field.omega_trace() as i128;
        let y_max: i128 = if d < 0 {
            arith::isqrt((4 * n / -disc) as u128) as i128
        } else {
            let eps = units.fundamental().expect("real quadratic field has a fundamental unit");
            // ε <= |Tr ε| + 1 since |ε'| < 1
            let eps_bound: BigInt = eps.trace().to_integer().abs() + 1;
            let bound: BigInt = (BigInt::from(4 * n) * eps_bound) / BigInt::from(disc);
            let bound = bound.to_u128().expect("principality search range too large");
            arith::isqrt(bound) as i128
        };
        let norm_targets: &[i128] = if d < 0 { &[1] } else { &[1, -1] };
        for y_abs in 0..=y_max {
            for y in [y_abs, -y_abs] {
                if y_abs == 0 && y < 0 {
                    continue;
                }
                for &sign in norm_targets {
                    // (2x + ty)² - disc·y² = 4·N(α)
                    let Some(s) = arith::exact_sqrt(4 * sign * n + disc * y * y) else {
                        continue;
                    };
                    for s in [s, -s] {
                        let num = s - t * y;
                        if num % 2 != 0 {
                            continue;
                        }
                        let x = num / 2;
                        if self.contains((x, y)) {
                            return Some(FieldElement::from_ints(field, x, y));
                        }
                    }
                }
            }
        }
        None
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field == FieldId::Rational || self.a == 1 {
            return write!(f, "({})", self.c);
        }
        let first = FieldElement::from_int(self.field, self.c as i128 * self.a as i128);
        let second = FieldElement::from_ints(self.field, self.c as i128 * self.b as i128, self.c);
        write!(f, "[{first}, {second}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumberField;

    fn q5() -> NumberField {
        NumberField::quadratic(-5).unwrap()
    }

    #[test]
    fn ramified_prime_squares_to_two() {
        let k = q5();
        let p2 = k.factor_rational_prime(2).unwrap()[0].0.to_ideal();
        assert_eq!(p2.triple(), (1, 2, 1));
        assert_eq!(p2.to_string(), "[2, 1 + sqrt(-5)]");
        assert_eq!(p2.mul(&p2), k.principal_int(2).unwrap());
    }

    #[test]
    fn generated_ideal_reduces_to_normal_form() {
        // module-generator reduction: (2, 1 + √-5) built from generators
        let k = q5();
        let f = k.id();
        let gens = [FieldElement::from_int(f, 2), FieldElement::from_ints(f, 1, 1)];
        let a = k.ideal_from_generators(&gens).unwrap();
        assert_eq!(a.triple(), (1, 2, 1));
        let six = k.ideal_from_generators(&[FieldElement::from_int(f, 6)]).unwrap();
        assert_eq!(six.triple(), (6, 1, 0));
    }

    #[test]
    fn unit_ideal_is_identity() {
        let k = q5();
        for a in k.ideals_up_to_norm(30) {
            assert_eq!(a.mul(&k.unit_ideal()), a);
        }
    }

    #[test]
    fn factor_six_in_q_sqrt_minus_5() {
        let k = q5();
        let six = k.principal_int(6).unwrap();
        let f = six.factor();
        let shape: Vec<(i64, PrimeKindTag, u32)> =
            f.iter().map(|(q, e)| (q.p(), tag(q), *e)).collect();
        assert_eq!(
            shape,
            vec![(2, PrimeKindTag::R, 2), (3, PrimeKindTag::S, 1), (3, PrimeKindTag::S, 1)]
        );
        assert_eq!(Ideal::from_factorization(k.id(), &f), six);
        assert!(k.unit_ideal().factor().is_empty());
    }

    #[derive(Debug, PartialEq)]
    enum PrimeKindTag {
        S,
        I,
        R,
    }

    fn tag(q: &PrimeIdeal) -> PrimeKindTag {
        match q.kind() {
            crate::field::PrimeKind::Split(_) => PrimeKindTag::S,
            crate::field::PrimeKind::Inert => PrimeKindTag::I,
            crate::field::PrimeKind::Ramified => PrimeKindTag::R,
        }
    }

    #[test]
    fn rational_ideals_are_integers() {
        let k = NumberField::rational();
        let a = k.principal_int(18).unwrap();
        let b = k.principal_int(12).unwrap();
        assert_eq!(a.gcd(&b), k.principal_int(6).unwrap());
        assert_eq!(a.lcm(&b), k.principal_int(36).unwrap());
        let twelve = b.factor();
        assert_eq!(
            twelve.iter().map(|(q, e)| (q.p(), *e)).collect::<Vec<_>>(),
            vec![(2, 2), (3, 1)]
        );
        assert_eq!(tag(&twelve[0].0), PrimeKindTag::I);
    }

    #[test]
    fn principality_in_q_sqrt_minus_5() {
        let k = q5();
        let p2 = k.factor_rational_prime(2).unwrap()[0].0.to_ideal();
        // x² + 5y² = 2 has no solutions
        assert!((-2i64..=2).all(|x| (-1i64..=1).all(|y| x * x + 5 * y * y != 2)));
        assert_eq!(k.is_principal(&p2).unwrap(), None);
        let two = k.principal_int(2).unwrap();
        let g = k.is_principal(&two).unwrap().unwrap();
        assert_eq!(g.norm().abs(), num_rational::BigRational::from_integer(4.into()));
        assert!(g == FieldElement::from_int(k.id(), 2) || g == FieldElement::from_int(k.id(), -2));
    }

    #[test]
    fn gaussian_prime_above_five() {
        let k = NumberField::quadratic(-1).unwrap();
        let dec = k.factor_rational_prime(5).unwrap();
        // [5, 2 + i] contains 2 + i, which has norm 5
        let target = FieldElement::from_ints(k.id(), 2, 1);
        let q = dec
            .iter()
            .map(|(q, _)| q.to_ideal())
            .find(|q| q.contains_element(&target))
            .unwrap();
        let g = k.is_principal(&q).unwrap().unwrap();
        assert_eq!(g.norm(), num_rational::BigRational::from_integer(5.into()));
        assert_eq!(k.ideal_from_generators(&[g]).unwrap(), q);
        assert_eq!(k.ideal_from_generators(&[target]).unwrap(), q);
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = q5().unit_ideal();
        let b = NumberField::quadratic(2).unwrap().unit_ideal();
        assert_eq!(a.try_mul(&b), Err(Error::MixedFields));
        assert_eq!(a.try_gcd(&b), Err(Error::MixedFields));
    }

    #[test]
    fn triple_validation() {
        let f = FieldId::Quadratic(-5);
        assert!(Ideal::from_triple(f, 1, 2, 1).is_ok());
        // N(0 + ω) = 5 is not divisible by 2
        assert!(Ideal::from_triple(f, 1, 2, 0).is_err());
        assert!(Ideal::from_triple(f, 0, 1, 0).is_err());
        assert!(Ideal::from_triple(FieldId::Rational, 3, 2, 1).is_err());
    }
}
