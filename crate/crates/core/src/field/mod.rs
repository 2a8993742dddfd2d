//! Exact arithmetic in the ring of integers of ℚ or a quadratic field ℚ(√d).
//!
//! Quadratic integers are written `x + yω` with `ω = √d` when `d ≡ 2, 3 (mod 4)`
//! and `ω = (1 + √d)/2` when `d ≡ 1 (mod 4)`. Every nonzero ideal has the
//! unique form `c·(ℤa + ℤ(b + ω))` with `a | N(b + ω)` and `0 <= b < a`; over ℚ
//! the same triple degenerates to `(n, 1, 0)`.
//!
//! Higher layers only talk to [`NumberField`], [`Ideal`], [`PrimeIdeal`],
//! [`Cycle`] and [`FieldElement`]; the backend is selected by [`FieldId`].

mod cycle;
mod element;
mod equivalence;
mod ideal;
mod prime;
mod residue;
mod units;

use std::fmt;
use std::sync::Arc;

pub use cycle::{Cycle, RealPlace};
pub use element::FieldElement;
pub use equivalence::{verify_equivalence_witness, Equivalence};
pub use ideal::Ideal;
pub use prime::{factor_rational_prime, PrimeIdeal, PrimeKind};
pub use residue::ResidueRing;
pub use units::UnitGroup;

use crate::arith;
use crate::error::{Error, Result};

/// Identifies the backend a value belongs to; cheap to copy and compare.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldId {
    Rational,
    /// ℚ(√d), `d` squarefree and not 0 or 1.
    Quadratic(i64),
}

impl FieldId {
    pub fn degree(self) -> u32 {
        match self {
            FieldId::Rational => 1,
            FieldId::Quadratic(_) => 2,
        }
    }

    /// Trace of ω; ω satisfies `ω² = tω - n`.
    pub(crate) fn omega_trace(self) -> i64 {
        match self {
            FieldId::Rational => 0,
            FieldId::Quadratic(d) => i64::from(d.rem_euclid(4) == 1),
        }
    }

    /// Norm of ω.
    pub(crate) fn omega_norm(self) -> i64 {
        match self {
            FieldId::Rational => 0,
            FieldId::Quadratic(d) if d.rem_euclid(4) == 1 => (1 - d) / 4,
            FieldId::Quadratic(d) => -d,
        }
    }

    pub fn discriminant(self) -> i64 {
        match self {
            FieldId::Rational => 1,
            FieldId::Quadratic(d) if d.rem_euclid(4) == 1 => d,
            FieldId::Quadratic(d) => 4 * d,
        }
    }

    /// `(r1, r2)`: numbers of real and complex places.
    pub fn signature(self) -> (u32, u32) {
        match self {
            FieldId::Rational => (1, 0),
            FieldId::Quadratic(d) if d < 0 => (0, 1),
            FieldId::Quadratic(_) => (2, 0),
        }
    }

    pub fn real_places(self) -> Vec<RealPlace> {
        match self.signature().0 {
            0 => vec![],
            1 => vec![RealPlace::S1],
            _ => vec![RealPlace::S1, RealPlace::S2],
        }
    }

    pub(crate) fn check(self, other: FieldId) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldId::Rational => write!(f, "Q"),
            FieldId::Quadratic(d) => write!(f, "Q(sqrt({d}))"),
        }
    }
}

/// ℚ or ℚ(√d) together with its (precomputed) unit group.
#[derive(Clone, Debug)]
pub struct NumberField {
    id: FieldId,
    units: Arc<UnitGroup>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for NumberField {}

impl NumberField {
    pub fn rational() -> Self {
        Self::from_id(FieldId::Rational)
    }

    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::InvalidField(format!("d = {d} does not define a quadratic field")));
        }
        if !arith::is_squarefree(d) {
            return Err(Error::InvalidField(format!("d = {d} is not squarefree")));
        }
        Ok(Self::from_id(FieldId::Quadratic(d)))
    }

    fn from_id(id: FieldId) -> Self {
        NumberField {
            id,
            units: Arc::new(UnitGroup::compute(id)),
        }
    }

    pub fn id(&self) -> FieldId {
        self.id
    }

    pub fn degree(&self) -> u32 {
        self.id.degree()
    }

    pub fn discriminant(&self) -> i64 {
        self.id.discriminant()
    }

    pub fn signature(&self) -> (u32, u32) {
        self.id.signature()
    }

    pub fn real_places(&self) -> Vec<RealPlace> {
        self.id.real_places()
    }

    pub fn unit_group(&self) -> &UnitGroup {
        &self.units
    }

    /// The generator ω of the ring of integers (`1` over ℚ is not meaningful; returns `None`).
    pub fn omega(&self) -> Option<FieldElement> {
        match self.id {
            FieldId::Rational => None,
            FieldId::Quadratic(_) => Some(FieldElement::from_ints(self.id, 0, 1)),
        }
    }

    pub fn unit_ideal(&self) -> Ideal {
        Ideal::unit(self.id)
    }

    /// The ideal `(n)` for a positive integer `n`.
    pub fn principal_int(&self, n: i64) -> Result<Ideal> {
        if n == 0 {
            return Err(Error::InvalidIdeal("zero ideal".into()));
        }
        Ok(Ideal::from_int(self.id, n.abs()))
    }

    /// Ideal generated (as an O-module) by the given integral elements.
    pub fn ideal_from_generators(&self, gens: &[FieldElement]) -> Result<Ideal> {
        Ideal::from_elements(self.id, gens)
    }

    /// Decomposition of the rational prime `p` in O.
    pub fn factor_rational_prime(&self, p: i64) -> Result<Vec<(PrimeIdeal, u32)>> {
        prime::factor_rational_prime(self.id, p)
    }

    /// All prime ideals of norm at most `bound`, ordered by `(norm, p, root)`.
    pub fn primes_up_to_norm(&self, bound: u64) -> Vec<PrimeIdeal> {
        let mut out = Vec::new();
        for p in arith::primes_up_to(bound) {
            let decomposition = prime::factor_rational_prime(self.id, p as i64).expect("p prime");
            for (q, _) in decomposition {
                if q.norm() <= bound {
                    out.push(q);
                }
            }
        }
        out.sort();
        out
    }

    /// All nonzero ideals of norm at most `bound`, ordered by norm then canonical triple.
    pub fn ideals_up_to_norm(&self, bound: u64) -> Vec<Ideal> {
        let primes = self.primes_up_to_norm(bound);
        let mut out = vec![self.unit_ideal()];
        for q in &primes {
            let qn = q.norm();
            let qi = q.to_ideal();
            let mut extended = Vec::new();
            for base in &out {
                let mut cur = base.clone();
                let mut norm = base.norm();
                while norm.saturating_mul(qn) <= bound {
                    cur = cur.mul(&qi);
                    norm *= qn;
                    extended.push(cur.clone());
                }
            }
            out.extend(extended);
        }
        out.sort_by_key(|a| (a.norm(), a.triple()));
        out
    }

    /// Upper bound (rounded up) on the Minkowski bound; every ideal class
    /// contains an integral ideal of norm at most this value.
    pub fn minkowski_bound(&self) -> u64 {
        match self.id {
            FieldId::Rational => 1,
            FieldId::Quadratic(_) => {
                let disc = self.discriminant().unsigned_abs() as u128;
                // imaginary: (2/π)√|D| < (2/3)√|D|; real: (1/2)√D
                let sq = if self.discriminant() < 0 {
                    arith::isqrt(4 * disc / 9)
                } else {
                    arith::isqrt(disc / 4)
                };
                sq as u64 + 1
            }
        }
    }

    /// Searches for a generator of `a`; see [`Ideal::generator`].
    pub fn is_principal(&self, a: &Ideal) -> Result<Option<FieldElement>> {
        self.id.check(a.field())?;
        Ok(a.generator(&self.units))
    }

    /// Decides `f`-equivalence of `a` and `b`, returning a witness when it holds.
    pub fn f_equivalence(&self, a: &Ideal, b: &Ideal, f: &Cycle) -> Result<Equivalence> {
        self.id.check(a.field())?;
        self.id.check(b.field())?;
        self.id.check(f.field())?;
        Ok(equivalence::f_equivalence(&self.units, a, b, f))
    }

    pub fn is_f_equivalent(&self, a: &Ideal, b: &Ideal, f: &Cycle) -> Result<bool> {
        Ok(self.f_equivalence(a, b, f)?.holds())
    }

    pub fn residue_ring(&self, modulus: &Ideal) -> Result<ResidueRing> {
        self.id.check(modulus.field())?;
        Ok(ResidueRing::new(modulus))
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.id.fmt(f)
    }
}
