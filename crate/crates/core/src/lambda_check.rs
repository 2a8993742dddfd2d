//! Decides whether a finite set with commuting Galois and ideal actions
//! comes from a Λ-ring with an integral model, locally (one prime with
//! inertia and Frobenius) and globally (actions factoring through `DR(𝔣)`).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::deligne_ribet::{dr_structured, DRMonoid};
use crate::error::{Error, Result};
use crate::field::{Cycle, Ideal, NumberField, PrimeIdeal};
use crate::ray_class::{conductor_of_action, validate_action, RayClassGroup};

/// A map `S → S` on `{0, …, n-1}`, stored as its image list.
pub type SelfMap = Vec<usize>;

pub fn identity_map(n: usize) -> SelfMap {
    (0..n).collect()
}

/// `p ∘ q`.
pub fn compose(p: &[usize], q: &[usize]) -> SelfMap {
    q.iter().map(|&s| p[s]).collect()
}

pub fn map_pow(p: &[usize], e: u32) -> SelfMap {
    let mut acc = identity_map(p.len());
    for _ in 0..e {
        acc = compose(p, &acc);
    }
    acc
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&s| s < p.len() && !std::mem::replace(&mut seen[s], true))
}

fn invert(p: &[usize]) -> SelfMap {
    let mut inv = vec![0; p.len()];
    for (s, &t) in p.iter().enumerate() {
        inv[t] = s;
    }
    inv
}

fn check_map(name: &str, p: &[usize], n: usize, bijective: bool) -> Result<()> {
    if p.len() != n || p.iter().any(|&s| s >= n) {
        return Err(Error::Validation(format!("{name} is not a map on {n} points")));
    }
    if bijective && !is_permutation(p) {
        return Err(Error::Validation(format!("{name} is not a permutation")));
    }
    Ok(())
}

fn commute(p: &[usize], q: &[usize]) -> Option<usize> {
    (0..p.len()).find(|&s| p[q[s]] != q[p[s]])
}

/// All elements of the permutation group generated by `gens`.
pub fn generated_group(n: usize, gens: &[SelfMap]) -> BTreeSet<SelfMap> {
    let id = identity_map(n);
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = compose(g, &x);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// `⋂_k ψ^k(S)`, reached after at most `|S|` steps.
pub fn eventual_image(n: usize, psi: &[usize]) -> Vec<usize> {
    let mut cur: BTreeSet<usize> = (0..n).collect();
    loop {
        let next: BTreeSet<usize> = cur.iter().map(|&s| psi[s]).collect();
        if next == cur {
            return cur.into_iter().collect();
        }
        cur = next;
    }
}

// ---------------------------------------------------------------- local

/// Data at a single prime: inertia generators, a Frobenius lift and `ψ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalActionSpec {
    pub size: usize,
    pub inertia_generators: Vec<SelfMap>,
    pub frobenius: SelfMap,
    pub psi: SelfMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalFailure {
    /// Condition (1): an inertia generator moves a point of `S_unr`.
    InertiaMoves { generator: usize, point: usize },
    /// Condition (2): `ψ` and Frobenius differ at a point of `S_unr`.
    FrobeniusMismatch { point: usize, psi: usize, frobenius: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalVerdict {
    pub unramified: Vec<usize>,
    pub failure: Option<LocalFailure>,
    pub filtration: Vec<Vec<usize>>,
    pub splitting: SelfMap,
}

impl LocalVerdict {
    pub fn answer(&self) -> bool {
        self.failure.is_none()
    }
}

/// Layers, chain maps and exponents of the integral model `⊕ 𝔭^i R_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalModel {
    pub layers: Vec<Vec<usize>>,
    /// `f_0` is `ψ` on `S_0`; `f_i` for `i ≥ 1` sends `S_i` into `S_{i-1}`.
    pub chain_maps: Vec<Vec<(usize, usize)>>,
    pub exponents: Vec<u32>,
}

impl LocalActionSpec {
    pub fn validate(&self) -> Result<()> {
        let n = self.size;
        for (i, g) in self.inertia_generators.iter().enumerate() {
            check_map(&format!("inertia generator {i}"), g, n, true)?;
        }
        check_map("frobenius", &self.frobenius, n, true)?;
        check_map("psi", &self.psi, n, false)?;
        let inertia = generated_group(n, &self.inertia_generators);
        let mut all = self.inertia_generators.clone();
        all.push(self.frobenius.clone());
        for (j, g) in all.iter().enumerate() {
            let gi = invert(g);
            for (i, h) in self.inertia_generators.iter().enumerate() {
                if !inertia.contains(&compose(g, &compose(h, &gi))) {
                    return Err(Error::Validation(format!(
                        "inertia is not normal: conjugating generator {i} by group generator {j} leaves it"
                    )));
                }
            }
            if let Some(s) = commute(&self.psi, g) {
                return Err(Error::Validation(format!(
                    "psi does not commute with group generator {j} at point {s}"
                )));
            }
        }
        Ok(())
    }

    pub fn stabilized_subset(&self) -> Vec<usize> {
        eventual_image(self.size, &self.psi)
    }

    pub fn filtration(&self) -> Vec<Vec<usize>> {
        local_filtration(self.size, &self.psi)
    }
}

/// `S_0 = S_unr`, then `S_i` = points outside earlier layers with `ψ(s) ∈ S_{i-1}`.
pub fn local_filtration(n: usize, psi: &[usize]) -> Vec<Vec<usize>> {
    let s0 = eventual_image(n, psi);
    let mut placed: BTreeSet<usize> = s0.iter().copied().collect();
    let mut layers = vec![s0];
    loop {
        let prev: BTreeSet<usize> = layers.last().expect("nonempty").iter().copied().collect();
        let next: Vec<usize> = (0..n)
            .filter(|s| !placed.contains(s) && prev.contains(&psi[*s]))
            .collect();
        if next.is_empty() {
            break;
        }
        placed.extend(&next);
        layers.push(next);
    }
    assert_eq!(placed.len(), n, "every point reaches the stable part");
    layers
}

/// `s ∈ S_i ↦ (ψ|S_0)^{-i}(ψ^i s)`.
pub fn splitting_map(n: usize, psi: &[usize]) -> SelfMap {
    let layers = local_filtration(n, psi);
    let mut inv = BTreeMap::new();
    for &s in &layers[0] {
        inv.insert(psi[s], s);
    }
    let mut out = identity_map(n);
    for (i, layer) in layers.iter().enumerate() {
        for &s in layer {
            let mut t = s;
            for _ in 0..i {
                t = psi[t];
            }
            for _ in 0..i {
                t = inv[&t];
            }
            out[s] = t;
        }
    }
    out
}

pub fn check_local(spec: &LocalActionSpec) -> Result<LocalVerdict> {
    spec.validate()?;
    let unramified = spec.stabilized_subset();
    let mut failure = None;
    'outer: for (g, gen) in spec.inertia_generators.iter().enumerate() {
        for &s in &unramified {
            if gen[s] != s {
                failure = Some(LocalFailure::InertiaMoves { generator: g, point: s });
                break 'outer;
            }
        }
    }
    if failure.is_none() {
        failure = unramified
            .iter()
            .find(|&&s| spec.psi[s] != spec.frobenius[s])
            .map(|&s| LocalFailure::FrobeniusMismatch {
                point: s,
                psi: spec.psi[s],
                frobenius: spec.frobenius[s],
            });
    }
    Ok(LocalVerdict {
        unramified,
        failure,
        filtration: spec.filtration(),
        splitting: splitting_map(spec.size, &spec.psi),
    })
}

/// Conditions (1) and (2) evaluated from the definitions: the full inertia
/// group, every Frobenius lift in `F·I`, and `⋂ ψ^k S` by iteration.
pub fn check_local_bruteforce(spec: &LocalActionSpec) -> bool {
    let n = spec.size;
    let inertia = generated_group(n, &spec.inertia_generators);
    let mut unr: BTreeSet<usize> = (0..n).collect();
    let mut power = identity_map(n);
    for _ in 0..=n {
        power = compose(&spec.psi, &power);
        let image: BTreeSet<usize> = power.iter().copied().collect();
        unr = unr.intersection(&image).copied().collect();
    }
    let trivial = inertia.iter().all(|g| unr.iter().all(|&s| g[s] == s));
    let matches = inertia
        .iter()
        .map(|i| compose(&spec.frobenius, i))
        .all(|lift| unr.iter().all(|&s| lift[s] == spec.psi[s]));
    trivial && matches
}

pub fn local_model_description(spec: &LocalActionSpec) -> Result<LocalModel> {
    let verdict = check_local(spec)?;
    if !verdict.answer() {
        return Err(Error::Validation("no integral model: local conditions fail".into()));
    }
    Ok(describe_layers(verdict.filtration, &spec.psi))
}

fn describe_layers(layers: Vec<Vec<usize>>, psi: &[usize]) -> LocalModel {
    let chain_maps = layers
        .iter()
        .map(|layer| layer.iter().map(|&s| (s, psi[s])).collect())
        .collect();
    let exponents = (0..layers.len() as u32).collect();
    LocalModel {
        layers,
        chain_maps,
        exponents,
    }
}

// --------------------------------------------------------------- global

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisGenerator {
    pub class_rep: Ideal,
    pub perm: SelfMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListedPrime {
    pub prime: PrimeIdeal,
    pub map: SelfMap,
}

#[derive(Clone, Debug)]
pub struct GlobalActionSpec {
    pub field: NumberField,
    pub modulus: Cycle,
    pub size: usize,
    pub galois: Vec<GaloisGenerator>,
    pub psi: Vec<ListedPrime>,
}

/// A validated global spec with the Galois action spread over all of `Cl(m)`.
#[derive(Clone, Debug)]
pub struct GlobalAction {
    spec: GlobalActionSpec,
    cl_m: RayClassGroup,
    galois: Vec<SelfMap>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlobalCheck {
    /// Two representatives of one `DR(𝔣)` class act differently.
    WellDefined,
    /// `ρ(xy) ≠ ρ(x)ρ(y)`.
    Homomorphism,
    /// A listed `ψ_𝔭` differs from `ρ([𝔭])`.
    PrimeMatch,
    /// The Artin action of an ideal differs from `ρ` of its class.
    Galois,
}

impl GlobalCheck {
    pub fn name(self) -> &'static str {
        match self {
            GlobalCheck::WellDefined => "well-defined",
            GlobalCheck::Homomorphism => "homomorphism",
            GlobalCheck::PrimeMatch => "prime-match",
            GlobalCheck::Galois => "galois",
        }
    }
}

/// Two 𝔣-equivalent ideals whose actions differ at `point`. When
/// `first_by_artin` is set the first ideal acts through its Artin symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalWitness {
    pub check: GlobalCheck,
    pub first: Ideal,
    pub second: Ideal,
    pub first_by_artin: bool,
    pub point: usize,
    pub first_image: usize,
    pub second_image: usize,
}

#[derive(Clone, Debug)]
pub struct GlobalVerdict {
    pub r: Ideal,
    pub f: Cycle,
    pub dr: DRMonoid,
    /// `ρ(x)` for every element of `DR(𝔣)`, from the first representatives.
    pub rho: Vec<SelfMap>,
    pub witness: Option<GlobalWitness>,
    pub local_models: Vec<(PrimeIdeal, LocalModel)>,
}

impl GlobalVerdict {
    pub fn answer(&self) -> bool {
        self.witness.is_none()
    }
}

pub const REPRESENTATIVE_NORM_BOUND: u64 = 5000;

impl GlobalActionSpec {
    pub fn validate(self) -> Result<GlobalAction> {
        let n = self.size;
        let k = self.field.id();
        if self.modulus.field() != k {
            return Err(Error::MixedFields);
        }
        let mut listed = BTreeSet::new();
        for lp in &self.psi {
            if lp.prime.field() != k {
                return Err(Error::MixedFields);
            }
            if !listed.insert(lp.prime) {
                return Err(Error::Validation(format!("prime {} listed twice", lp.prime)));
            }
            check_map(&format!("psi at {}", lp.prime), &lp.map, n, false)?;
        }
        for q in self.modulus.finite().keys() {
            if !listed.contains(q) {
                return Err(Error::Validation(format!(
                    "prime {q} divides the modulus but has no psi map"
                )));
            }
        }
        for (i, g) in self.galois.iter().enumerate() {
            check_map(&format!("galois generator {i}"), &g.perm, n, true)?;
        }
        for (i, a) in self.psi.iter().enumerate() {
            for b in &self.psi[i + 1..] {
                if let Some(s) = commute(&a.map, &b.map) {
                    return Err(Error::Validation(format!(
                        "psi at {} and psi at {} do not commute (point {s})",
                        a.prime, b.prime
                    )));
                }
            }
            for (j, g) in self.galois.iter().enumerate() {
                if let Some(s) = commute(&a.map, &g.perm) {
                    return Err(Error::Validation(format!(
                        "psi at {} does not commute with galois generator {j} (point {s})",
                        a.prime
                    )));
                }
            }
        }

        let cl_m = RayClassGroup::compute(&self.field, &self.modulus)?;
        let order = cl_m.order() as usize;
        let mut gens = Vec::new();
        for (i, g) in self.galois.iter().enumerate() {
            let c = cl_m.class_of(&g.class_rep).map_err(|e| {
                Error::Validation(format!("galois generator {i}: {e}"))
            })?;
            gens.push((c, g.perm.clone()));
        }
        let mut table: Vec<Option<SelfMap>> = vec![None; order];
        table[0] = Some(identity_map(n));
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let px = table[x].clone().expect("queued classes are assigned");
            for (c, p) in &gens {
                let y = cl_m.mul(x, *c);
                let py = compose(p, &px);
                match &table[y] {
                    Some(prev) if *prev != py => {
                        return Err(Error::Validation(format!(
                            "galois generators are inconsistent: class {y} of Cl({}) gets two permutations",
                            self.modulus
                        )));
                    }
                    Some(_) => {}
                    None => {
                        table[y] = Some(py);
                        queue.push_back(y);
                    }
                }
            }
        }
        let galois: Vec<SelfMap> = table
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                p.ok_or_else(|| {
                    Error::Validation(format!(
                        "galois generators do not generate Cl({}): class {i} unreached",
                        self.modulus
                    ))
                })
            })
            .collect::<Result<_>>()?;
        if n > 0 {
            validate_action(&cl_m, &galois).map_err(|e| Error::Validation(e.to_string()))?;
        }
        Ok(GlobalAction {
            spec: self,
            cl_m,
            galois,
        })
    }
}

impl GlobalAction {
    pub fn spec(&self) -> &GlobalActionSpec {
        &self.spec
    }

    pub fn size(&self) -> usize {
        self.spec.size
    }

    pub fn modulus_group(&self) -> &RayClassGroup {
        &self.cl_m
    }

    /// The permutation of each class of `Cl(m)`.
    pub fn galois_table(&self) -> &[SelfMap] {
        &self.galois
    }

    fn listed(&self, q: &PrimeIdeal) -> Option<&SelfMap> {
        self.spec.psi.iter().find(|lp| lp.prime == *q).map(|lp| &lp.map)
    }

    /// The permutation attached to an ideal coprime to `m` through `Cl(m)`.
    pub fn artin_action(&self, a: &Ideal) -> Result<SelfMap> {
        Ok(self.galois[self.cl_m.class_of(a)?].clone())
    }

    /// Action of an ideal: listed primes by `ψ`, the others by their Artin symbol.
    pub fn ideal_action(&self, a: &Ideal) -> Result<SelfMap> {
        let mut acc = identity_map(self.size());
        for (q, e) in a.factor() {
            let step = match self.listed(&q) {
                Some(m) => m.clone(),
                None => self.galois[self.cl_m.class_of_prime(&q)?].clone(),
            };
            acc = compose(&map_pow(&step, e), &acc);
        }
        Ok(acc)
    }

    pub fn stabilized_subset(&self) -> Vec<usize> {
        let n = self.size();
        let product = self
            .spec
            .psi
            .iter()
            .fold(identity_map(n), |acc, lp| compose(&lp.map, &acc));
        eventual_image(n, &product)
    }

    /// `ord_𝔭(𝔯) = min{i : 𝔭^{i+1}S = 𝔭^i S}` over the listed primes.
    pub fn compute_r(&self) -> Ideal {
        let k = self.spec.field.id();
        let mut factors = Vec::new();
        for lp in &self.spec.psi {
            let mut cur: BTreeSet<usize> = (0..self.size()).collect();
            let mut i = 0;
            loop {
                let next: BTreeSet<usize> = cur.iter().map(|&s| lp.map[s]).collect();
                if next == cur {
                    break;
                }
                cur = next;
                i += 1;
            }
            if i > 0 {
                factors.push((lp.prime, i));
            }
        }
        Ideal::from_factorization(k, &factors)
    }

    /// Conductor of the Galois action restricted to a stable subset.
    pub fn conductor_of_subset(&self, subset: &[usize]) -> Result<Cycle> {
        if subset.is_empty() {
            return Ok(Cycle::unit(self.spec.field.id()));
        }
        let pos: BTreeMap<usize, usize> = subset.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let restricted = self
            .galois
            .iter()
            .map(|p| {
                subset
                    .iter()
                    .map(|s| pos.get(&p[*s]).copied())
                    .collect::<Option<Vec<usize>>>()
                    .ok_or_else(|| Error::Inconsistent("subset is not Galois-stable".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        conductor_of_action(&self.cl_m, &restricted)
    }

    /// `𝔣 = lcm_{𝔡 | 𝔯} 𝔡·c(𝔡S)`.
    pub fn compute_f(&self) -> Result<Cycle> {
        let r = self.compute_r();
        let k = self.spec.field.id();
        let r_cycle = Cycle::from_ideal(&r, [])?;
        let mut f = Cycle::unit(k);
        for d in r_cycle.finite_divisors() {
            let image: BTreeSet<usize> = self.ideal_action(&d)?.into_iter().collect();
            let subset: Vec<usize> = image.into_iter().collect();
            let c = self.conductor_of_subset(&subset)?;
            f = f.lcm(&c.mul_ideal(&d));
        }
        Ok(f)
    }

    /// A second representative `𝔡·𝔮` for each element, `𝔮` an unlisted prime
    /// coprime to `𝔣·m` of smallest norm in the right class.
    fn second_representatives(&self, dr: &DRMonoid) -> Result<Vec<Ideal>> {
        let bad = self.spec.modulus.lcm(dr.cycle()).finite_part();
        let candidates: Vec<PrimeIdeal> = self
            .spec
            .field
            .primes_up_to_norm(REPRESENTATIVE_NORM_BOUND)
            .into_iter()
            .filter(|q| self.listed(q).is_none() && q.to_ideal().is_coprime(&bad))
            .collect();
        let mut out = vec![None; dr.len()];
        for (d, group, offset) in dr.strata() {
            let mut missing = group.order() as usize;
            for q in &candidates {
                if missing == 0 {
                    break;
                }
                let c = group.class_of_prime(q)?;
                if out[offset + c].is_none() {
                    out[offset + c] = Some(d.mul(&q.to_ideal()));
                    missing -= 1;
                }
            }
        }
        out.into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| {
                    Error::BudgetExhausted(format!(
                        "no unlisted prime of norm <= {REPRESENTATIVE_NORM_BOUND} in the class of element {i} of DR({})",
                        dr.cycle()
                    ))
                })
            })
            .collect()
    }

    pub fn check(&self) -> Result<GlobalVerdict> {
        let r = self.compute_r();
        let f = self.compute_f()?;
        let dr = dr_structured(&self.spec.field, &f)?;
        let rho: Vec<SelfMap> = dr
            .elements()
            .iter()
            .map(|e| self.ideal_action(&e.rep))
            .collect::<Result<_>>()?;
        let witness = self.first_failure(&dr, &rho)?;
        let local_models = if witness.is_none() {
            self.spec
                .psi
                .iter()
                .map(|lp| (lp.prime, describe_layers(local_filtration(self.size(), &lp.map), &lp.map)))
                .collect()
        } else {
            vec![]
        };
        Ok(GlobalVerdict {
            r,
            f,
            dr,
            rho,
            witness,
            local_models,
        })
    }

    fn differ(
        &self,
        check: GlobalCheck,
        first: &Ideal,
        first_map: &[usize],
        second: &Ideal,
        second_map: &[usize],
        first_by_artin: bool,
    ) -> Option<GlobalWitness> {
        (0..self.size())
            .find(|&s| first_map[s] != second_map[s])
            .map(|point| GlobalWitness {
                check,
                first: first.clone(),
                second: second.clone(),
                first_by_artin,
                point,
                first_image: first_map[point],
                second_image: second_map[point],
            })
    }

    fn first_failure(&self, dr: &DRMonoid, rho: &[SelfMap]) -> Result<Option<GlobalWitness>> {
        let reps: Vec<&Ideal> = dr.elements().iter().map(|e| &e.rep).collect();
        for (i, second) in self.second_representatives(dr)?.iter().enumerate() {
            let m = self.ideal_action(second)?;
            if let Some(w) = self.differ(GlobalCheck::WellDefined, reps[i], &rho[i], second, &m, false) {
                return Ok(Some(w));
            }
        }
        for i in 0..dr.len() {
            for j in i..dr.len() {
                let k = dr.mul(i, j);
                let product = reps[i].mul(reps[j]);
                let m = compose(&rho[i], &rho[j]);
                if let Some(w) = self.differ(GlobalCheck::Homomorphism, &product, &m, reps[k], &rho[k], false) {
                    return Ok(Some(w));
                }
            }
        }
        for lp in &self.spec.psi {
            let p = lp.prime.to_ideal();
            let k = dr.class_of(&p)?;
            if let Some(w) = self.differ(GlobalCheck::PrimeMatch, &p, &lp.map, reps[k], &rho[k], false) {
                return Ok(Some(w));
            }
        }
        let big = RayClassGroup::compute(&self.spec.field, &self.spec.modulus.lcm(dr.cycle()))?;
        for rep in big.reps() {
            let artin = self.artin_action(rep)?;
            let k = dr.class_of(rep)?;
            if let Some(w) = self.differ(GlobalCheck::Galois, rep, &artin, reps[k], &rho[k], true) {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }

    /// Re-checks a witness from scratch: the ideals are 𝔣-equivalent and act
    /// differently at the recorded point.
    pub fn refalsify(&self, f: &Cycle, w: &GlobalWitness) -> Result<bool> {
        let field = &self.spec.field;
        if !field.is_f_equivalent(&w.first, &w.second, f)? {
            return Ok(false);
        }
        let a = if w.first_by_artin {
            self.artin_action(&w.first)?
        } else {
            self.ideal_action(&w.first)?
        };
        let b = self.ideal_action(&w.second)?;
        Ok(a[w.point] != b[w.point] && a[w.point] == w.first_image && b[w.point] == w.second_image)
    }

    /// Re-verifies a certificate from its table: `ρ` is a homomorphism,
    /// the identity acts trivially, and ideals of small norm act through the
    /// element found by a direct 𝔣-equivalence scan of the representatives.
    pub fn verify_certificate(
        &self,
        f: &Cycle,
        reps: &[Ideal],
        table: &[Vec<usize>],
        rho: &[SelfMap],
        norm_bound: u64,
    ) -> Result<bool> {
        let n = reps.len();
        if table.len() != n || rho.len() != n || table.iter().any(|row| row.len() != n) {
            return Ok(false);
        }
        for i in 0..n {
            for j in 0..n {
                if rho[table[i][j]] != compose(&rho[i], &rho[j]) {
                    return Ok(false);
                }
            }
        }
        let field = &self.spec.field;
        let locate = |a: &Ideal| -> Result<Option<usize>> {
            for (i, r) in reps.iter().enumerate() {
                if field.is_f_equivalent(a, r, f)? {
                    return Ok(Some(i));
                }
            }
            Ok(None)
        };
        let Some(one) = locate(&field.unit_ideal())? else {
            return Ok(false);
        };
        if rho[one] != identity_map(self.size()) {
            return Ok(false);
        }
        let mut ideals: Vec<Ideal> = self.spec.psi.iter().map(|lp| lp.prime.to_ideal()).collect();
        ideals.extend(field.ideals_up_to_norm(norm_bound));
        for a in ideals {
            let Some(k) = locate(&a)? else {
                return Ok(false);
            };
            if self.ideal_action(&a)? != rho[k] {
                return Ok(false);
            }
            if self.spec.modulus.is_coprime_to(&a) && f.is_coprime_to(&a) && self.artin_action(&a)? != rho[k] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn check_global(spec: GlobalActionSpec) -> Result<GlobalVerdict> {
    spec.validate()?.check()
}
