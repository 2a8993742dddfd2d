use std::cmp::Ordering;
use std::fmt;

use super::{FieldId, Ideal};
use crate::arith;
use crate::error::{Error, Result};

/// How a maximal ideal sits over its rational prime.
///
/// Over ℚ every prime is recorded as `Inert`: `(p)` stays prime and its
/// norm is `p^degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrimeKind {
    /// `𝔭 = (p, ω - r)` for a simple root `r` of the minimal polynomial of ω mod p.
    Split(i64),
    Inert,
    Ramified,
}

/// A maximal ideal of O.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    field: FieldId,
    p: i64,
    kind: PrimeKind,
}

/// Roots of `x² - t x + n` modulo `p`, sorted ascending.
fn omega_roots(field: FieldId, p: i64) -> Vec<i64> {
    let t = field.omega_trace();
    let n = field.omega_norm();
    if p == 2 {
        return (0..2).filter(|&r| (r * r - t * r + n).rem_euclid(2) == 0).collect();
    }
    // odd p: r = (t ± √Δ)/2 with Δ = t² - 4n
    let delta = t * t - 4 * n;
    let Some(s) = arith::sqrt_mod_prime(delta, p as u64) else {
        return vec![];
    };
    let inv2 = (p + 1) / 2;
    let s = s as i64;
    let mut roots: Vec<i64> = [t + s, t - s]
        .iter()
        .map(|&v| ((v as i128 * inv2 as i128).rem_euclid(p as i128)) as i64)
        .collect();
    roots.sort();
    roots.dedup();
    roots
}

/// Decomposition of the rational prime `p` in O, ordered by root.
pub fn factor_rational_prime(field: FieldId, p: i64) -> Result<Vec<(PrimeIdeal, u32)>> {
    if p < 2 || !arith::is_prime(p as u64) {
        return Err(Error::NotPrime(p));
    }
    let prime = |kind| PrimeIdeal { field, p, kind };
    Ok(match field {
        FieldId::Rational => vec![(prime(PrimeKind::Inert), 1)],
        FieldId::Quadratic(_) => {
            if field.discriminant().rem_euclid(p) == 0 {
                vec![(prime(PrimeKind::Ramified), 2)]
            } else {
                let roots = omega_roots(field, p);
                match roots.as_slice() {
                    [] => vec![(prime(PrimeKind::Inert), 1)],
                    [r1, r2] => vec![
                        (prime(PrimeKind::Split(*r1)), 1),
                        (prime(PrimeKind::Split(*r2)), 1),
                    ],
                    _ => unreachable!("unramified prime has 0 or 2 roots"),
                }
            }
        }
    })
}

impl PrimeIdeal {
    /// Builds a prime from serialized data, checking it against the decomposition of `p`.
    pub fn new(field: FieldId, p: i64, kind: PrimeKind) -> Result<Self> {
        let candidates = factor_rational_prime(field, p)?;
        candidates
            .into_iter()
            .map(|(q, _)| q)
            .find(|q| q.kind == kind)
            .ok_or_else(|| Error::InvalidIdeal(format!("no prime of type {kind:?} above {p} in {field}")))
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn kind(&self) -> PrimeKind {
        self.kind
    }

    /// Residue degree over ℚ.
    pub fn residue_degree(&self) -> u32 {
        match (self.field, self.kind) {
            (FieldId::Quadratic(_), PrimeKind::Inert) => 2,
            _ => 1,
        }
    }

    /// Ramification index over ℚ.
    pub fn ramification_index(&self) -> u32 {
        match self.kind {
            PrimeKind::Ramified => 2,
            _ => 1,
        }
    }

    pub fn norm(&self) -> u64 {
        (self.p as u64).pow(self.residue_degree())
    }

    /// Root `r` with `ω ≡ r (mod 𝔭)`, when the residue field is 𝔽_p.
    pub fn root(&self) -> Option<i64> {
        match (self.field, self.kind) {
            (FieldId::Rational, _) | (_, PrimeKind::Inert) => None,
            (_, PrimeKind::Split(r)) => Some(r),
            (_, PrimeKind::Ramified) => omega_roots(self.field, self.p).first().copied(),
        }
    }

    pub fn to_ideal(&self) -> Ideal {
        match self.root() {
            None => Ideal::from_int(self.field, self.p),
            // (p, ω - r) = ℤp + ℤ(-r + ω)
            Some(r) => Ideal::from_triple_unchecked(self.field, 1, self.p, (-r).rem_euclid(self.p)),
        }
    }

    /// The Galois-conjugate prime (itself unless split).
    pub fn conjugate(&self) -> PrimeIdeal {
        match self.kind {
            PrimeKind::Split(r) => {
                let r2 = (self.field.omega_trace() - r).rem_euclid(self.p);
                PrimeIdeal {
                    kind: PrimeKind::Split(r2),
                    ..*self
                }
            }
            _ => *self,
        }
    }

    fn sort_key(&self) -> (u64, i64, u8, i64) {
        let (tag, r) = match self.kind {
            PrimeKind::Split(r) => (0, r),
            PrimeKind::Inert => (1, 0),
            PrimeKind::Ramified => (2, 0),
        };
        (self.norm(), self.p, tag, r)
    }
}

impl Ord for PrimeIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .cmp(&other.field)
            .then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PrimeKind::Split(r) => write!(f, "P({},{})", self.p, r),
            _ => write!(f, "P({})", self.p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition_in_q_sqrt_minus_5() {
        let k = FieldId::Quadratic(-5);
        // x² + 5 ≡ x² + 2 (mod 3): roots found by trial squaring
        let brute: Vec<i64> = (0..3).filter(|x| (x * x + 5) % 3 == 0).collect();
        assert_eq!(brute, vec![1, 2]);
        let three = factor_rational_prime(k, 3).unwrap();
        assert_eq!(
            three.iter().map(|(q, e)| (q.kind(), *e)).collect::<Vec<_>>(),
            vec![(PrimeKind::Split(1), 1), (PrimeKind::Split(2), 1)]
        );
        // 2 | disc = -20
        assert_eq!(k.discriminant(), -20);
        let two = factor_rational_prime(k, 2).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!((two[0].0.kind(), two[0].1), (PrimeKind::Ramified, 2));
        // -5 is not a square mod 11
        assert!((0..11).all(|x| (x * x + 5) % 11 != 0));
        let eleven = factor_rational_prime(k, 11).unwrap();
        assert_eq!((eleven[0].0.kind(), eleven[0].1), (PrimeKind::Inert, 1));
        assert_eq!(eleven[0].0.norm(), 121);
    }

    #[test]
    fn split_type_matches_root_count_for_many_fields() {
        for d in [-163i64, -15, -7, -3, -2, -1, 2, 3, 5, 6, 7, 13, 21, 37] {
            let k = FieldId::Quadratic(d);
            for p in arith::primes_up_to(60) {
                let p = p as i64;
                let t = k.omega_trace();
                let n = k.omega_norm();
                let roots = (0..p).filter(|r| (r * r - t * r + n).rem_euclid(p) == 0).count();
                let dec = factor_rational_prime(k, p).unwrap();
                let expected = if k.discriminant().rem_euclid(p) == 0 {
                    assert_eq!(roots, 1);
                    PrimeKind::Ramified
                } else if roots == 2 {
                    PrimeKind::Split(0)
                } else {
                    assert_eq!(roots, 0);
                    PrimeKind::Inert
                };
                match expected {
                    PrimeKind::Split(_) => assert!(matches!(dec[0].0.kind(), PrimeKind::Split(_))),
                    other => assert_eq!(dec[0].0.kind(), other, "d={d} p={p}"),
                }
            }
        }
    }

    #[test]
    fn conjugate_of_split_prime_is_the_other_factor() {
        let k = FieldId::Quadratic(-5);
        let dec = factor_rational_prime(k, 3).unwrap();
        assert_eq!(dec[0].0.conjugate(), dec[1].0);
        assert_eq!(dec[1].0.conjugate(), dec[0].0);
    }

    #[test]
    fn non_primes_are_rejected() {
        assert_eq!(factor_rational_prime(FieldId::Rational, 9), Err(Error::NotPrime(9)));
        assert!(factor_rational_prime(FieldId::Quadratic(2), 1).is_err());
    }
}
