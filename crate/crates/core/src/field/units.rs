use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{FieldElement, FieldId};
use crate::arith;

/// `O*` = torsion × (fundamental unit)^ℤ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitGroup {
    field: FieldId,
    torsion_generator: FieldElement,
    torsion_order: u32,
    fundamental: Option<FieldElement>,
}

impl UnitGroup {
    pub(crate) fn compute(field: FieldId) -> Self {
        let minus_one = FieldElement::from_int(field, -1);
        let omega = || FieldElement::from_ints(field, 0, 1);
        let (torsion_generator, torsion_order, fundamental) = match field {
            FieldId::Rational => (minus_one, 2, None),
            FieldId::Quadratic(-1) => (omega(), 4, None),
            // ω = (1 + √-3)/2 is a primitive sixth root of unity
            FieldId::Quadratic(-3) => (omega(), 6, None),
            FieldId::Quadratic(d) if d < 0 => (minus_one, 2, None),
            FieldId::Quadratic(d) => (minus_one, 2, Some(fundamental_unit(field, d))),
        };
        UnitGroup {
            field,
            torsion_generator,
            torsion_order,
            fundamental,
        }
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn torsion_generator(&self) -> &FieldElement {
        &self.torsion_generator
    }

    pub fn torsion_order(&self) -> u32 {
        self.torsion_order
    }

    /// The fundamental unit `ε > 1` (real quadratic fields only).
    pub fn fundamental(&self) -> Option<&FieldElement> {
        self.fundamental.as_ref()
    }

    /// All roots of unity, `ζ^0, ζ^1, …`.
    pub fn torsion(&self) -> Vec<FieldElement> {
        (0..self.torsion_order)
            .map(|k| self.torsion_generator.pow(k as u64))
            .collect()
    }
}

/// Smallest unit `> 1` of ℤ[ω], read off the continued fraction of ω.
///
/// Writes each complete quotient as `(P + √d)/Q`; the first convergent
/// `p/q` with `N(p - qω) = ±1` yields `ε = p - qω' = (p - qt) + qω`.
fn fundamental_unit(field: FieldId, d: i64) -> FieldElement {
    let t = field.omega_trace();
    let n = BigInt::from(field.omega_norm());
    let s = arith::isqrt(d as u128) as i64;
    let (mut pp, mut qq): (i64, i64) = if t == 1 { (1, 2) } else { (0, 1) };
    let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
    loop {
        // floor((P + √d)/Q) = floor((P + ⌊√d⌋)/Q) for Q > 0 since √d is irrational
        let a = if qq > 0 {
            (pp + s).div_euclid(qq)
        } else {
            -((pp + s).div_euclid(-qq) + 1)
        };
        let a_big = BigInt::from(a);
        let p_next = &a_big * &p_cur + &p_prev;
        let q_next = &a_big * &q_cur + &q_prev;
        (p_prev, p_cur) = (p_cur, p_next);
        (q_prev, q_cur) = (q_cur, q_next);

        let norm = &p_cur * &p_cur - BigInt::from(t) * &p_cur * &q_cur + &n * &q_cur * &q_cur;
        if norm.abs().is_one() {
            let x = &p_cur - &q_cur * BigInt::from(t);
            return FieldElement::from_ints(field, x, q_cur);
        }

        let p_new = a * qq - pp;
        let q_new = (d - p_new * p_new) / qq;
        debug_assert_eq!((d - p_new * p_new) % qq, 0);
        pp = p_new;
        qq = q_new;
    }
}
