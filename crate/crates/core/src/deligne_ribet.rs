//! Deligne–Ribet monoids `DR(𝔣)`: all nonzero ideals modulo 𝔣-equivalence.
//!
//! [`dr_structured`] builds the monoid from the pairs `(𝔡, c)` with
//! `𝔡 | 𝔣^fin` and `c ∈ Cl(𝔣/𝔡)`; [`dr_bruteforce`] partitions ideals of
//! bounded norm directly. The two are compared by [`dr_isomorphic`].

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Cycle, FieldId, Ideal, NumberField};
use crate::monoid::FiniteMonoid;
use crate::ray_class::{ray_class_number, RayClassGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Structured,
    BruteForce,
}

/// One element of `DR(𝔣)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DRElement {
    /// `gcd(a, 𝔣^fin)` for any ideal `a` in the class.
    pub d: Ideal,
    /// Canonical coordinates of the class in `Cl(𝔣/𝔡)`; absent for brute-force monoids.
    pub class: Option<Vec<u64>>,
    /// A representative ideal.
    pub rep: Ideal,
}

#[derive(Clone, Debug)]
struct Stratum {
    d: Ideal,
    group: RayClassGroup,
    offset: usize,
}

#[derive(Clone, Debug)]
pub struct DRMonoid {
    field: NumberField,
    cycle: Cycle,
    construction: Construction,
    elements: Vec<DRElement>,
    monoid: FiniteMonoid,
    strata: Vec<Stratum>,
}

fn class_number(field: &NumberField) -> Result<u64> {
    match field.id() {
        FieldId::Rational => Ok(1),
        FieldId::Quadratic(_) => Ok(RayClassGroup::compute(field, &Cycle::unit(field.id()))?.order()),
    }
}

/// `Σ_{𝔡 | 𝔣^fin} |Cl(𝔣/𝔡)|`, from the unit exact sequence alone.
pub fn expected_size(field: &NumberField, cycle: &Cycle) -> Result<u64> {
    let h = class_number(field)?;
    let mut total = 0;
    for d in cycle.finite_divisors() {
        total += ray_class_number(field, &cycle.div_ideal(&d)?, h);
    }
    Ok(total)
}

/// Default brute-force norm budget `4·N(𝔣^fin)·h`.
pub fn default_budget(field: &NumberField, cycle: &Cycle) -> Result<u64> {
    Ok(4 * cycle.norm().max(1) * class_number(field)?)
}

/// `DR(𝔣)` from the decomposition into ray class groups, with the product
/// `(𝔡₁,c₁)(𝔡₂,c₂) = (𝔡₃, π(c₁)π(c₂)[𝔡₁𝔡₂/𝔡₃])`, `𝔡₃ = gcd(𝔡₁𝔡₂, 𝔣^fin)`.
pub fn dr_structured(field: &NumberField, cycle: &Cycle) -> Result<DRMonoid> {
    if cycle.field() != field.id() {
        return Err(Error::MixedFields);
    }
    let fin = cycle.finite_part();
    let mut strata = Vec::new();
    let mut elements = Vec::new();
    for d in cycle.finite_divisors() {
        let group = RayClassGroup::compute(field, &cycle.div_ideal(&d)?)?;
        let offset = elements.len();
        for c in 0..group.order() as usize {
            elements.push(DRElement {
                d: d.clone(),
                class: Some(group.group().vector(c)),
                rep: d.mul(group.rep(c)),
            });
        }
        strata.push(Stratum { d, group, offset });
    }
    let position: BTreeMap<Ideal, usize> = strata.iter().enumerate().map(|(k, s)| (s.d.clone(), k)).collect();

    let mut projections: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let mut projection = |from: usize, to: usize| -> Result<Vec<usize>> {
        if let Some(p) = projections.get(&(from, to)) {
            return Ok(p.clone());
        }
        let p = strata[from].group.projection(&strata[to].group)?;
        projections.insert((from, to), p.clone());
        Ok(p)
    };

    let n = elements.len();
    let mut table = vec![vec![0; n]; n];
    for k1 in 0..strata.len() {
        for k2 in 0..strata.len() {
            let prod = strata[k1].d.mul(&strata[k2].d);
            let d3 = prod.gcd(&fin);
            let k3 = position[&d3];
            let e = prod.div_exact(&d3).expect("gcd divides the product");
            let g3 = &strata[k3].group;
            let ce = g3.class_of(&e)?;
            let p1 = projection(k1, k3)?;
            let p2 = projection(k2, k3)?;
            let (o1, o2, o3) = (strata[k1].offset, strata[k2].offset, strata[k3].offset);
            for (c1, &i1) in p1.iter().enumerate() {
                for (c2, &i2) in p2.iter().enumerate() {
                    table[o1 + c1][o2 + c2] = o3 + g3.mul(g3.mul(i1, i2), ce);
                }
            }
        }
    }
    Ok(DRMonoid {
        field: field.clone(),
        cycle: cycle.clone(),
        construction: Construction::Structured,
        elements,
        monoid: FiniteMonoid::new(table)?,
        strata,
    })
}

/// `DR(𝔣)` by partitioning every nonzero ideal of norm at most `budget`
/// under 𝔣-equivalence. Fails unless all `Σ |Cl(𝔣/𝔡)|` classes appear.
pub fn dr_bruteforce(field: &NumberField, cycle: &Cycle, budget: Option<u64>) -> Result<DRMonoid> {
    if cycle.field() != field.id() {
        return Err(Error::MixedFields);
    }
    let budget = match budget {
        Some(b) => b,
        None => default_budget(field, cycle)?,
    };
    let expected = expected_size(field, cycle)?;
    let find = |reps: &[Ideal], a: &Ideal| -> Result<Option<usize>> {
        for (i, r) in reps.iter().enumerate() {
            if field.is_f_equivalent(a, r, cycle)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    };
    let mut reps: Vec<Ideal> = Vec::new();
    for a in field.ideals_up_to_norm(budget) {
        if find(&reps, &a)?.is_none() {
            reps.push(a);
        }
    }
    let found = reps.len() as u64;
    if found < expected {
        return Err(Error::BudgetExhausted(format!(
            "DR({cycle}) over {}: norm budget {budget} exhibits {found} of {expected} classes ({} missing)",
            field.id(),
            expected - found
        )));
    }
    if found > expected {
        return Err(Error::Inconsistent(format!(
            "DR({cycle}) over {}: {found} classes found but the decomposition predicts {expected}",
            field.id()
        )));
    }
    let fin = cycle.finite_part();
    let mut elements: Vec<DRElement> = reps
        .into_iter()
        .map(|rep| DRElement {
            d: rep.gcd(&fin),
            class: None,
            rep,
        })
        .collect();
    elements.sort_by_key(|e| (e.d.norm(), e.d.triple(), e.rep.norm(), e.rep.triple()));
    let reps: Vec<Ideal> = elements.iter().map(|e| e.rep.clone()).collect();
    let n = reps.len();
    let mut table = vec![vec![0; n]; n];
    for i in 0..n {
        for j in i..n {
            let k = find(&reps, &reps[i].mul(&reps[j]))?.ok_or_else(|| {
                Error::Inconsistent(format!("product {}·{} lies in no class", reps[i], reps[j]))
            })?;
            table[i][j] = k;
            table[j][i] = k;
        }
    }
    Ok(DRMonoid {
        field: field.clone(),
        cycle: cycle.clone(),
        construction: Construction::BruteForce,
        elements,
        monoid: FiniteMonoid::new(table)?,
        strata: vec![],
    })
}

/// An isomorphism between the underlying monoids, if any.
pub fn dr_isomorphic(m1: &DRMonoid, m2: &DRMonoid) -> Option<Vec<usize>> {
    m1.monoid.isomorphism(&m2.monoid)
}

impl DRMonoid {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn cycle(&self) -> &Cycle {
        &self.cycle
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[DRElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &DRElement {
        &self.elements[i]
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn table(&self) -> &[Vec<usize>] {
        self.monoid.table()
    }

    pub fn identity(&self) -> usize {
        self.monoid.identity()
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.monoid.mul(i, j)
    }

    pub fn units(&self) -> Vec<usize> {
        self.monoid.units()
    }

    pub fn idempotents(&self) -> Vec<usize> {
        self.monoid.idempotents()
    }

    /// `Cl(𝔣/𝔡)` for each `𝔡 | 𝔣^fin`, with the index of its first element.
    /// Empty for brute-force monoids.
    pub fn strata(&self) -> impl Iterator<Item = (&Ideal, &RayClassGroup, usize)> {
        self.strata.iter().map(|s| (&s.d, &s.group, s.offset))
    }

    /// The element containing `a`.
    pub fn class_of(&self, a: &Ideal) -> Result<usize> {
        if a.field() != self.field.id() {
            return Err(Error::MixedFields);
        }
        match self.construction {
            Construction::Structured => {
                let d = a.gcd(&self.cycle.finite_part());
                let s = self
                    .strata
                    .iter()
                    .find(|s| s.d == d)
                    .expect("gcd with 𝔣^fin is a divisor");
                let b = a.div_exact(&d).expect("gcd divides a");
                Ok(s.offset + s.group.class_of(&b)?)
            }
            Construction::BruteForce => {
                for (i, e) in self.elements.iter().enumerate() {
                    if self.field.is_f_equivalent(a, &e.rep, &self.cycle)? {
                        return Ok(i);
                    }
                }
                Err(Error::Inconsistent(format!("{a} lies in no class of DR({})", self.cycle)))
            }
        }
    }

    /// The surjection `DR(𝔣) → DR(𝔣′)`, together with the target monoid.
    pub fn projection(&self, target: &Cycle) -> Result<(DRMonoid, Vec<usize>)> {
        if !target.divides(&self.cycle) {
            return Err(Error::NotDivisor(target.to_string(), self.cycle.to_string()));
        }
        let t = dr_structured(&self.field, target)?;
        let map = self
            .elements
            .iter()
            .map(|e| t.class_of(&e.rep))
            .collect::<Result<Vec<_>>>()?;
        Ok((t, map))
    }

    /// An isomorphism from `Cl(𝔣)` (by class index) onto the unit group,
    /// as element indices.
    pub fn unit_group_isomorphism(&self) -> Result<Vec<usize>> {
        let cl = match self.strata.first() {
            Some(s) => s.group.clone(),
            None => RayClassGroup::compute(&self.field, &self.cycle)?,
        };
        let units = self.units();
        let sub = self.monoid.submonoid(&units)?;
        let f = FiniteMonoid::from_group(cl.group()).isomorphism(&sub).ok_or_else(|| {
            Error::Inconsistent(format!(
                "units of DR({}) ({} elements) are not isomorphic to Cl({}) of order {}",
                self.cycle,
                units.len(),
                self.cycle,
                cl.order()
            ))
        })?;
        Ok(f.into_iter().map(|i| units[i]).collect())
    }
}
