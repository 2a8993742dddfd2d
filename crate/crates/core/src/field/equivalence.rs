//! 𝔣-equivalence: `a ~ b` iff `x·a = b` for some `x ∈ K*` that is positive at
//! the marked real places and satisfies `ord_𝔭(x - 1) + ord_𝔭(a) >= ord_𝔭(𝔣)`
//! at every finite 𝔭.
//!
//! Any such `x` generates `b·a⁻¹`, so the candidates are `u·g/N(a)` where `g`
//! generates `b·ā` and `u` runs over units. The conditions only see `u`
//! modulo `𝔣^fin` and its signs at the marked places, so `ε^k` is needed
//! only for `k` below the order of that image.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::residue::Residue;
use super::{Cycle, FieldElement, Ideal, PrimeIdeal, RealPlace, ResidueRing, UnitGroup};
use crate::arith;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// Equivalent, with a witness `x`: `x·a = b`.
    Equivalent(FieldElement),
    /// `b·a⁻¹` is not principal.
    NotPrincipal,
    /// `b·a⁻¹` is principal, but no generator meets the congruence and sign conditions.
    NoAdmissibleUnit,
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Equivalent(_))
    }

    pub fn witness(&self) -> Option<&FieldElement> {
        match self {
            Equivalence::Equivalent(x) => Some(x),
            _ => None,
        }
    }
}

/// One finite condition: `u·g - N(a) ∈ 𝔭^E`.
struct Congruence {
    ring: ResidueRing,
    g: Residue,
    target: Residue,
}

pub(super) fn f_equivalence(units: &UnitGroup, a: &Ideal, b: &Ideal, f: &Cycle) -> Equivalence {
    let field = a.field();
    if a == b {
        return Equivalence::Equivalent(FieldElement::one(field));
    }
    let na = a.norm();
    let Some(g) = b.mul(&a.adjugate()).generator(units) else {
        return Equivalence::NotPrincipal;
    };
    let gx = g.x().to_integer();
    let gy = g.y().to_integer();

    // ord_𝔭(x - 1) = ord_𝔭(u·g - N(a)) - ord_𝔭(N(a))
    let mut congruences = Vec::new();
    for (q, &e) in f.finite() {
        let need = e as i64 - a.valuation(q) as i64
            + (q.ramification_index() * arith::valuation_big(&BigInt::from(na), q.p() as u64)) as i64;
        if need <= 0 {
            continue;
        }
        let ring = ResidueRing::new(&q.to_ideal().pow(need as u32));
        let g_res = ring.modulus().reduce_big(&gx, &gy);
        let target = ring.reduce((na as i128, 0));
        congruences.push(Congruence {
            ring,
            g: g_res,
            target,
        });
    }
    let places: Vec<RealPlace> = f.real_places().iter().copied().collect();
    let g_signs: Vec<Ordering> = places.iter().map(|&v| g.sign_at(v)).collect();

    let admissible = |u_res: &[Residue], u_signs: &[Ordering]| {
        congruences
            .iter()
            .zip(u_res)
            .all(|(c, &r)| c.ring.mul(r, c.g) == c.target)
            && u_signs.iter().zip(&g_signs).all(|(s, t)| *s == *t)
    };

    let finish = |u: FieldElement| {
        let scale = FieldElement::new(field, BigRational::new(BigInt::one(), BigInt::from(na)), BigRational::zero());
        Equivalence::Equivalent(&(&u * &g) * &scale)
    };

    let torsion = units.torsion();
    match units.fundamental() {
        None => {
            for z in torsion {
                let res: Vec<Residue> = congruences.iter().map(|c| c.ring.reduce_element(&z)).collect();
                let signs: Vec<Ordering> = places.iter().map(|&v| z.sign_at(v)).collect();
                if admissible(&res, &signs) {
                    return finish(z);
                }
            }
            Equivalence::NoAdmissibleUnit
        }
        Some(eps) => {
            let period = unit_period(eps, f);
            let eps_res: Vec<Residue> = congruences.iter().map(|c| c.ring.reduce_element(eps)).collect();
            let eps_signs: Vec<Ordering> = places.iter().map(|&v| eps.sign_at(v)).collect();
            for z in torsion {
                let mut res: Vec<Residue> = congruences.iter().map(|c| c.ring.reduce_element(&z)).collect();
                let mut signs: Vec<Ordering> = places.iter().map(|&v| z.sign_at(v)).collect();
                for k in 0..period {
                    if admissible(&res, &signs) {
                        return finish(&z * &eps.pow(k));
                    }
                    for (i, c) in congruences.iter().enumerate() {
                        res[i] = c.ring.mul(res[i], eps_res[i]);
                    }
                    for (s, es) in signs.iter_mut().zip(&eps_signs) {
                        if *es == Ordering::Less {
                            *s = s.reverse();
                        }
                    }
                }
            }
            Equivalence::NoAdmissibleUnit
        }
    }
}

/// Order of the image of `ε` in `(O/𝔣^fin)* × {±1}^{marked places}`.
fn unit_period(eps: &FieldElement, f: &Cycle) -> u64 {
    let ring = ResidueRing::new(&f.finite_part());
    let e = ring.reduce_element(eps);
    let negative_places = f
        .real_places()
        .iter()
        .filter(|&&v| eps.sign_at(v) == Ordering::Less)
        .count();
    let residue_order = ring.order(e);
    if negative_places > 0 && residue_order % 2 == 1 {
        2 * residue_order
    } else {
        residue_order
    }
}

/// `ord_𝔭(X + Yω)` for a nonzero integral element.
fn element_valuation(q: &PrimeIdeal, x: &BigInt, y: &BigInt) -> u32 {
    assert!(!(x.is_zero() && y.is_zero()));
    let qi = q.to_ideal();
    let mut power = qi.clone();
    let mut v = 0;
    while power.contains_big(x, y) {
        v += 1;
        power = power.mul(&qi);
    }
    v
}

/// `ord_𝔭(x)` for nonzero `x ∈ K*`.
fn valuation_of(q: &PrimeIdeal, e: &FieldElement) -> i64 {
    let (xx, yy, dd) = e.integral_parts();
    element_valuation(q, &xx, &yy) as i64
        - (q.ramification_index() * arith::valuation_big(&dd, q.p() as u64)) as i64
}

/// Checks a witness directly against the definition, without the search.
pub fn verify_equivalence_witness(a: &Ideal, b: &Ideal, f: &Cycle, x: &FieldElement) -> bool {
    let field = a.field();
    if x.is_zero() || x.field() != field || b.field() != field || f.field() != field {
        return false;
    }
    if !f.real_places().iter().all(|&v| x.is_positive_at(v)) {
        return false;
    }
    // (x)·a = b: norms agree and valuations agree at every prime that can occur
    let norm_ratio = BigRational::new(BigInt::from(b.norm()), BigInt::from(a.norm()));
    if x.norm().abs() != norm_ratio {
        return false;
    }
    let (_, _, dd) = x.integral_parts();
    let mut rational_primes: Vec<u64> = arith::factor(a.norm() * b.norm())
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    let mut rest = dd.clone();
    for p in 2u64.. {
        if rest.is_one() {
            break;
        }
        let pb = BigInt::from(p);
        if rest.is_multiple_of(&pb) {
            rational_primes.push(p);
            while rest.is_multiple_of(&pb) {
                rest /= &pb;
            }
        }
    }
    rational_primes.sort();
    rational_primes.dedup();
    for p in rational_primes {
        for (q, _) in super::prime::factor_rational_prime(field, p as i64).expect("prime") {
            if valuation_of(&q, x) + a.valuation(&q) as i64 != b.valuation(&q) as i64 {
                return false;
            }
        }
    }
    let x_minus_one = x - &FieldElement::one(field);
    for (q, &e) in f.finite() {
        if x_minus_one.is_zero() {
            break;
        }
        if valuation_of(q, &x_minus_one) + (a.valuation(q) as i64) < e as i64 {
            return false;
        }
    }
    true
}
