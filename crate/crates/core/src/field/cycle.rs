use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{FieldId, Ideal, PrimeIdeal};
use crate::error::{Error, Result};

/// A real embedding. For ℚ(√d), d > 0, `S1` sends √d to the positive root
/// and `S2` to the negative one; ℚ has only `S1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RealPlace {
    S1,
    S2,
}

impl RealPlace {
    pub fn name(self) -> &'static str {
        match self {
            RealPlace::S1 => "s1",
            RealPlace::S2 => "s2",
        }
    }
}

/// A modulus: finite part `∏ 𝔭^n` plus a set of marked real places.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cycle {
    field: FieldId,
    finite: BTreeMap<PrimeIdeal, u32>,
    real: BTreeSet<RealPlace>,
}

impl Cycle {
    pub fn new(
        field: FieldId,
        finite: impl IntoIterator<Item = (PrimeIdeal, u32)>,
        real: impl IntoIterator<Item = RealPlace>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (q, e) in finite {
            if q.field() != field {
                return Err(Error::MixedFields);
            }
            if e > 0 {
                *map.entry(q).or_insert(0) += e;
            }
        }
        let allowed = field.real_places();
        let mut places = BTreeSet::new();
        for v in real {
            if !allowed.contains(&v) {
                return Err(Error::InvalidCycle(format!(
                    "{field} has no real place {}",
                    v.name()
                )));
            }
            places.insert(v);
        }
        Ok(Cycle {
            field,
            finite: map,
            real: places,
        })
    }

    pub fn unit(field: FieldId) -> Self {
        Cycle {
            field,
            finite: BTreeMap::new(),
            real: BTreeSet::new(),
        }
    }

    pub fn from_ideal(ideal: &Ideal, real: impl IntoIterator<Item = RealPlace>) -> Result<Self> {
        Cycle::new(ideal.field(), ideal.factor(), real)
    }

    /// The modulus with every real place of the field marked.
    pub fn with_all_real_places(&self) -> Cycle {
        Cycle {
            real: self.field.real_places().into_iter().collect(),
            ..self.clone()
        }
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    pub fn finite(&self) -> &BTreeMap<PrimeIdeal, u32> {
        &self.finite
    }

    pub fn real_places(&self) -> &BTreeSet<RealPlace> {
        &self.real
    }

    pub fn finite_part(&self) -> Ideal {
        let factors: Vec<_> = self.finite.iter().map(|(q, e)| (*q, *e)).collect();
        Ideal::from_factorization(self.field, &factors)
    }

    pub fn norm(&self) -> u64 {
        self.finite.iter().map(|(q, e)| q.norm().pow(*e)).product()
    }

    pub fn ord(&self, q: &PrimeIdeal) -> u32 {
        self.finite.get(q).copied().unwrap_or(0)
    }

    pub fn is_unit(&self) -> bool {
        self.finite.is_empty() && self.real.is_empty()
    }

    pub fn divides(&self, other: &Cycle) -> bool {
        self.field == other.field
            && self.finite.iter().all(|(q, e)| other.ord(q) >= *e)
            && self.real.is_subset(&other.real)
    }

    pub fn gcd(&self, other: &Cycle) -> Cycle {
        assert_eq!(self.field, other.field, "mixed fields");
        Cycle {
            field: self.field,
            finite: self
                .finite
                .iter()
                .filter_map(|(q, e)| {
                    let m = (*e).min(other.ord(q));
                    (m > 0).then_some((*q, m))
                })
                .collect(),
            real: self.real.intersection(&other.real).copied().collect(),
        }
    }

    pub fn lcm(&self, other: &Cycle) -> Cycle {
        assert_eq!(self.field, other.field, "mixed fields");
        let mut finite = self.finite.clone();
        for (q, e) in &other.finite {
            let slot = finite.entry(*q).or_insert(0);
            *slot = (*slot).max(*e);
        }
        Cycle {
            field: self.field,
            finite,
            real: self.real.union(&other.real).copied().collect(),
        }
    }

    /// `𝔡·𝔣` for an ideal `𝔡`.
    pub fn mul_ideal(&self, d: &Ideal) -> Cycle {
        assert_eq!(self.field, d.field(), "mixed fields");
        let mut finite = self.finite.clone();
        for (q, e) in d.factor() {
            *finite.entry(q).or_insert(0) += e;
        }
        Cycle {
            finite,
            ..self.clone()
        }
    }

    /// `𝔣/𝔡` for an ideal `𝔡` dividing the finite part.
    pub fn div_ideal(&self, d: &Ideal) -> Result<Cycle> {
        assert_eq!(self.field, d.field(), "mixed fields");
        let mut finite = self.finite.clone();
        for (q, e) in d.factor() {
            let have = self.ord(&q);
            if have < e {
                return Err(Error::NotDivisor(d.to_string(), self.to_string()));
            }
            if have == e {
                finite.remove(&q);
            } else {
                finite.insert(q, have - e);
            }
        }
        Ok(Cycle {
            finite,
            ..self.clone()
        })
    }

    /// True when no prime of the finite part divides `a`.
    pub fn is_coprime_to(&self, a: &Ideal) -> bool {
        self.finite.keys().all(|q| !q.to_ideal().divides(a))
    }

    /// All divisors, ordered by (norm of finite part, number of real places, exponents, places).
    pub fn divisors(&self) -> Vec<Cycle> {
        let mut finite_parts: Vec<BTreeMap<PrimeIdeal, u32>> = vec![BTreeMap::new()];
        for (q, e) in &self.finite {
            let mut next = Vec::new();
            for base in &finite_parts {
                for k in 0..=*e {
                    let mut m = base.clone();
                    if k > 0 {
                        m.insert(*q, k);
                    }
                    next.push(m);
                }
            }
            finite_parts = next;
        }
        let places: Vec<RealPlace> = self.real.iter().copied().collect();
        let mut out = Vec::new();
        for fin in finite_parts {
            for mask in 0..(1u32 << places.len()) {
                let real = places
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, v)| *v)
                    .collect();
                out.push(Cycle {
                    field: self.field,
                    finite: fin.clone(),
                    real,
                });
            }
        }
        out.sort_by_key(|c| c.sort_key());
        out
    }

    /// Divisors of the finite part as ideals, ordered by norm then triple.
    pub fn finite_divisors(&self) -> Vec<Ideal> {
        let mut out: Vec<Ideal> = Cycle {
            real: BTreeSet::new(),
            ..self.clone()
        }
        .divisors()
        .iter()
        .map(|c| c.finite_part())
        .collect();
        out.sort_by_key(|a| (a.norm(), a.triple()));
        out
    }

    /// The maximal proper divisors: drop one prime exponent or one real place.
    pub fn maximal_proper_divisors(&self) -> Vec<Cycle> {
        let mut out = Vec::new();
        for (q, e) in &self.finite {
            let mut c = self.clone();
            if *e == 1 {
                c.finite.remove(q);
            } else {
                c.finite.insert(*q, e - 1);
            }
            out.push(c);
        }
        for v in &self.real {
            let mut c = self.clone();
            c.real.remove(v);
            out.push(c);
        }
        out
    }

    pub fn sort_key(&self) -> (u64, usize, Vec<(PrimeIdeal, u32)>, Vec<RealPlace>) {
        (
            self.norm(),
            self.real.len(),
            self.finite.iter().map(|(q, e)| (*q, *e)).collect(),
            self.real.iter().copied().collect(),
        )
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field {
            FieldId::Rational => write!(f, "{}", self.norm())?,
            FieldId::Quadratic(_) => {
                write!(f, "[")?;
                for (i, (q, e)) in self.finite.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{q}")?;
                    if *e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
                write!(f, "]")?;
            }
        }
        let all = self.field.real_places();
        if !self.real.is_empty() && self.real.len() == all.len() {
            write!(f, "*inf")?;
        } else {
            for v in &self.real {
                match v {
                    RealPlace::S1 => write!(f, "*inf1")?,
                    RealPlace::S2 => write!(f, "*inf2")?,
                }
            }
        }
        Ok(())
    }
}
