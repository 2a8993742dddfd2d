//! Ray class groups `Cl(𝔣)`, the maps `Cl(𝔣) → Cl(𝔣′)` for `𝔣′ | 𝔣`, and
//! conductors of permutation actions.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::abelian::AbelianGroup;
use crate::error::{Error, Result};
use crate::field::{Cycle, FieldElement, FieldId, Ideal, NumberField, PrimeIdeal, RealPlace};

pub const DEFAULT_NORM_BOUND: u64 = 1000;

/// `Cl(𝔣)` with one representative ideal (coprime to `𝔣^fin`) per class.
///
/// Classes are indexed by [`AbelianGroup::index`] of their canonical
/// coordinates; index 0 is the identity.
#[derive(Clone, Debug)]
pub struct RayClassGroup {
    field: NumberField,
    cycle: Cycle,
    group: AbelianGroup,
    generators: Vec<PrimeIdeal>,
    reps: Vec<Ideal>,
    /// Exponents over `generators` of each representative.
    exponents: Vec<Vec<i64>>,
    /// Classes of the primes met while building the group.
    prime_classes: HashMap<PrimeIdeal, usize>,
}

/// Size of the image of `O*` in `(O/𝔣^fin)* × {±1}^{marked places}`.
pub fn unit_image_order(field: &NumberField, cycle: &Cycle) -> u64 {
    let ring = field
        .residue_ring(&cycle.finite_part())
        .expect("cycle belongs to field");
    let places: Vec<RealPlace> = cycle.real_places().iter().copied().collect();
    let key = |e: &FieldElement| -> ((i128, i128), Vec<bool>) {
        (
            ring.reduce_element(e),
            places.iter().map(|&v| e.sign_at(v) == Ordering::Less).collect(),
        )
    };
    let units = field.unit_group();
    let mut gens = vec![key(units.torsion_generator())];
    if let Some(eps) = units.fundamental() {
        gens.push(key(eps));
    }
    let start = (ring.one(), vec![false; places.len()]);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((r, s)) = queue.pop_front() {
        for (gr, gs) in &gens {
            let next = (
                ring.mul(r, *gr),
                s.iter().zip(gs).map(|(a, b)| a ^ b).collect::<Vec<_>>(),
            );
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.len() as u64
}

/// `|Cl(𝔣)|` from `|Cl(1)|` and the unit exact sequence.
pub fn ray_class_number(field: &NumberField, cycle: &Cycle, class_number: u64) -> u64 {
    let phi = field
        .residue_ring(&cycle.finite_part())
        .expect("cycle belongs to field")
        .unit_count();
    class_number * phi * (1u64 << cycle.real_places().len()) / unit_image_order(field, cycle)
}

struct Builder<'a> {
    field: &'a NumberField,
    cycle: &'a Cycle,
    generators: Vec<PrimeIdeal>,
    relations: Vec<Vec<i64>>,
    reps: Vec<Ideal>,
    exponents: Vec<Vec<i64>>,
    /// Scanned primes with the index of a representative in their class.
    prime_reps: Vec<(PrimeIdeal, usize)>,
}

impl Builder<'_> {
    fn find(&self, a: &Ideal) -> Result<Option<usize>> {
        for (k, r) in self.reps.iter().enumerate() {
            if self.field.is_f_equivalent(a, r, self.cycle)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// Adds `q` as a generator unless its class is already reached.
    fn add(&mut self, q: PrimeIdeal) -> Result<()> {
        let qi = q.to_ideal();
        let mut power = qi.clone();
        let mut j = 1i64;
        let hit = loop {
            if let Some(k) = self.find(&power)? {
                break k;
            }
            power = power.mul(&qi);
            j += 1;
        };
        if j == 1 {
            self.prime_reps.push((q, hit));
            return Ok(());
        }
        self.prime_reps.push((q, self.reps.len()));
        let n = self.generators.len();
        for row in self.relations.iter_mut() {
            row.push(0);
        }
        let mut rel: Vec<i64> = self.exponents[hit].iter().map(|e| -e).collect();
        rel.push(j);
        self.relations.push(rel);
        self.generators.push(q);
        for e in self.exponents.iter_mut() {
            e.push(0);
        }
        let base_reps = self.reps.clone();
        let base_exps = self.exponents.clone();
        let mut step = qi.clone();
        for i in 1..j {
            for (r, e) in base_reps.iter().zip(&base_exps) {
                self.reps.push(r.mul(&step));
                let mut e = e.clone();
                e[n] = i;
                self.exponents.push(e);
            }
            step = step.mul(&qi);
        }
        Ok(())
    }
}

impl RayClassGroup {
    pub fn compute(field: &NumberField, cycle: &Cycle) -> Result<Self> {
        Self::compute_with_bound(field, cycle, DEFAULT_NORM_BOUND)
    }

    /// Primes coprime to `𝔣^fin` are added in increasing norm until the
    /// group reaches the order predicted by the unit sequence. Running past
    /// `max(bound, Minkowski bound)` is an error.
    pub fn compute_with_bound(field: &NumberField, cycle: &Cycle, bound: u64) -> Result<Self> {
        if cycle.field() != field.id() {
            return Err(Error::MixedFields);
        }
        let h = match field.id() {
            FieldId::Rational => Some(1),
            FieldId::Quadratic(_) if cycle.is_unit() => None,
            FieldId::Quadratic(_) => {
                Some(Self::compute(field, &Cycle::unit(field.id()))?.order())
            }
        };
        let target = h.map(|h| ray_class_number(field, cycle, h));
        let minkowski = field.minkowski_bound();
        let limit = match target {
            Some(_) => bound.max(minkowski),
            None => minkowski,
        };

        let mut b = Builder {
            field,
            cycle,
            generators: vec![],
            relations: vec![],
            reps: vec![field.unit_ideal()],
            exponents: vec![vec![]],
            prime_reps: vec![],
        };
        for q in field.primes_up_to_norm(limit) {
            if target.is_some_and(|t| b.reps.len() as u64 >= t) {
                break;
            }
            if cycle.ord(&q) > 0 {
                continue;
            }
            b.add(q)?;
        }
        if let Some(t) = target {
            let got = b.reps.len() as u64;
            if got < t {
                return Err(Error::BudgetExhausted(format!(
                    "Cl({cycle}) over {}: {got} of {t} classes found with primes of norm <= {limit}",
                    field.id()
                )));
            }
            if got > t {
                return Err(Error::Inconsistent(format!(
                    "Cl({cycle}) over {}: found {got} classes, exact sequence gives {t}",
                    field.id()
                )));
            }
        }

        let k = b.generators.len();
        let group = if k == 0 {
            AbelianGroup::trivial()
        } else {
            AbelianGroup::from_relations(k, &b.relations)
        };
        assert_eq!(group.order() as usize, b.reps.len());
        let mut reps = vec![None; b.reps.len()];
        let mut exponents = vec![vec![]; b.reps.len()];
        let mut placed = Vec::with_capacity(b.reps.len());
        for (r, e) in b.reps.into_iter().zip(b.exponents) {
            let i = if k == 0 { 0 } else { group.index(&group.reduce(&e)) };
            assert!(reps[i].is_none(), "two representatives in one class");
            reps[i] = Some(r);
            exponents[i] = e;
            placed.push(i);
        }
        let prime_classes = b.prime_reps.into_iter().map(|(q, r)| (q, placed[r])).collect();
        Ok(RayClassGroup {
            field: field.clone(),
            cycle: cycle.clone(),
            group,
            generators: b.generators,
            reps: reps.into_iter().map(|r| r.expect("class without representative")).collect(),
            exponents,
            prime_classes,
        })
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn cycle(&self) -> &Cycle {
        &self.cycle
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    pub fn divisors(&self) -> &[u64] {
        self.group.divisors()
    }

    pub fn generators(&self) -> &[PrimeIdeal] {
        &self.generators
    }

    pub fn reps(&self) -> &[Ideal] {
        &self.reps
    }

    pub fn rep(&self, class: usize) -> &Ideal {
        &self.reps[class]
    }

    /// Exponents over [`Self::generators`] of the representative of `class`.
    pub fn rep_exponents(&self, class: usize) -> &[i64] {
        &self.exponents[class]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.group.add(i, j)
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.group.neg(i)
    }

    pub fn pow(&self, i: usize, mut e: u64) -> usize {
        let mut acc = 0;
        let mut base = i;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, i: usize) -> u64 {
        self.group.element_order(i)
    }

    /// Class of a generator-exponent vector.
    pub fn class_of_exponents(&self, e: &[i64]) -> usize {
        if self.generators.is_empty() {
            0
        } else {
            self.group.index(&self.group.reduce(e))
        }
    }

    fn check_coprime(&self, a: &Ideal) -> Result<()> {
        if a.field() != self.field.id() {
            return Err(Error::MixedFields);
        }
        if !self.cycle.is_coprime_to(a) {
            return Err(Error::NotCoprime(a.to_string(), self.cycle.to_string()));
        }
        Ok(())
    }

    /// Class of a prime ideal coprime to the modulus.
    pub fn class_of_prime(&self, q: &PrimeIdeal) -> Result<usize> {
        if let Some(&i) = self.prime_classes.get(q) {
            return Ok(i);
        }
        self.class_of_by_search(&q.to_ideal())
    }

    /// Class of an ideal coprime to `𝔣^fin`, assembled from its prime factors.
    pub fn class_of(&self, a: &Ideal) -> Result<usize> {
        self.check_coprime(a)?;
        let mut acc = 0;
        for (q, e) in a.factor() {
            let c = self.class_of_prime(&q)?;
            acc = self.mul(acc, self.pow(c, e as u64));
        }
        Ok(acc)
    }

    /// Class of `a` found by testing equivalence against every representative.
    pub fn class_of_by_search(&self, a: &Ideal) -> Result<usize> {
        self.check_coprime(a)?;
        for (i, r) in self.reps.iter().enumerate() {
            if self.field.is_f_equivalent(a, r, &self.cycle)? {
                return Ok(i);
            }
        }
        Err(Error::Inconsistent(format!(
            "{a} matches no representative of Cl({})",
            self.cycle
        )))
    }

    /// The map `Cl(𝔣) → Cl(𝔣′)` as a table of class indices.
    pub fn projection(&self, target: &RayClassGroup) -> Result<Vec<usize>> {
        if !target.cycle.divides(&self.cycle) {
            return Err(Error::NotDivisor(
                target.cycle.to_string(),
                self.cycle.to_string(),
            ));
        }
        let images: Vec<usize> = self
            .generators
            .iter()
            .map(|q| target.class_of_prime(q))
            .collect::<Result<_>>()?;
        Ok(self
            .exponents
            .iter()
            .map(|e| {
                e.iter().zip(&images).fold(0, |acc, (&x, &img)| {
                    target.mul(acc, target.pow(img, x.rem_euclid(target.order().max(1) as i64) as u64))
                })
            })
            .collect())
    }

    /// The projection to `Cl(𝔣′)`, computing the target group.
    pub fn project_to(&self, target: &Cycle) -> Result<(RayClassGroup, Vec<usize>)> {
        let t = RayClassGroup::compute(&self.field, target)?;
        let map = self.projection(&t)?;
        Ok((t, map))
    }
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // (p ∘ q)(s) = p(q(s))
    q.iter().map(|&s| p[s]).collect()
}

/// Checks that `action[i]` is a permutation for each class and that the
/// assignment is a homomorphism.
pub fn validate_action(rcg: &RayClassGroup, action: &[Vec<usize>]) -> Result<usize> {
    let order = rcg.order() as usize;
    if action.len() != order {
        return Err(Error::InvalidAction(format!(
            "{} permutations given for a group of order {order}",
            action.len()
        )));
    }
    let n = action.first().map_or(0, |p| p.len());
    for (i, p) in action.iter().enumerate() {
        let mut seen = vec![false; n];
        if p.len() != n || p.iter().any(|&s| s >= n || std::mem::replace(&mut seen[s], true)) {
            return Err(Error::InvalidAction(format!("class {i} does not act by a permutation")));
        }
    }
    for i in 0..order {
        for j in 0..order {
            if action[rcg.mul(i, j)] != compose(&action[i], &action[j]) {
                return Err(Error::InvalidAction(format!(
                    "classes {i} and {j}: action is not a homomorphism"
                )));
            }
        }
    }
    Ok(n)
}

fn kernel(action: &[Vec<usize>]) -> Vec<usize> {
    action
        .iter()
        .enumerate()
        .filter(|(_, p)| p.iter().enumerate().all(|(s, &t)| s == t))
        .map(|(i, _)| i)
        .collect()
}

/// Whether a validated action of `Cl(m)` factors through `Cl(d)`.
pub fn factors_through(rcg: &RayClassGroup, action: &[Vec<usize>], d: &Cycle) -> Result<bool> {
    let (_, proj) = rcg.project_to(d)?;
    let ker: BTreeSet<usize> = kernel(action).into_iter().collect();
    Ok((0..proj.len()).filter(|&i| proj[i] == 0).all(|i| ker.contains(&i)))
}

/// The smallest divisor `𝔣₀ | m` such that the action factors through `Cl(𝔣₀)`.
pub fn conductor_of_action(rcg: &RayClassGroup, action: &[Vec<usize>]) -> Result<Cycle> {
    validate_action(rcg, action)?;
    let mut working = Vec::new();
    for d in rcg.cycle().divisors() {
        if factors_through(rcg, action, &d)? {
            working.push(d);
        }
    }
    let first = working
        .first()
        .cloned()
        .ok_or_else(|| Error::Inconsistent("action does not factor through its own modulus".into()))?;
    if let Some(bad) = working.iter().find(|d| !first.divides(d)) {
        return Err(Error::Inconsistent(format!(
            "no unique minimal conductor: {first} and {bad} both work"
        )));
    }
    Ok(first)
}
