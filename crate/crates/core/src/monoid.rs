//! Finite monoids given by multiplication tables, and isomorphism search.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::abelian::AbelianGroup;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    table: Vec<Vec<usize>>,
    identity: usize,
}

/// Isomorphism invariants of one element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Profile {
    unit: bool,
    idempotent: bool,
    ideal_size: usize,
    index: usize,
    period: usize,
}

impl FiniteMonoid {
    /// Validates closure and finds the identity. Associativity is checked by
    /// [`FiniteMonoid::check_axioms`].
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Validation("empty monoid".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::Validation("table is not closed".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Validation("table has no identity".into()))?;
        Ok(FiniteMonoid { table, identity })
    }

    /// `(ℤ/m, ×)` with elements `0..m`.
    pub fn multiplicative_mod(m: usize) -> Self {
        assert!(m >= 1);
        let table = (0..m).map(|a| (0..m).map(|b| a * b % m).collect()).collect();
        FiniteMonoid::new(table).expect("ℤ/m is a monoid")
    }

    /// `(ℤ/m, ×)` modulo `a ~ -a`; element `k` is the class of `min(a, m - a)`
    /// listed in increasing order.
    pub fn multiplicative_mod_sign(m: usize) -> Self {
        assert!(m >= 1);
        let canon = |a: usize| a.min((m - a) % m);
        let reps: Vec<usize> = (0..m).filter(|&a| canon(a) == a).collect();
        let pos: BTreeMap<usize, usize> = reps.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| pos[&canon(a * b % m)]).collect())
            .collect();
        FiniteMonoid::new(table).expect("quotient is a monoid")
    }

    /// `(ℤ/m, +)` viewed as a monoid.
    pub fn additive_mod(m: usize) -> Self {
        let table = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        FiniteMonoid::new(table).expect("ℤ/m is a monoid")
    }

    pub fn from_group(g: &AbelianGroup) -> Self {
        FiniteMonoid::new(g.table()).expect("groups are monoids")
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn check_axioms(&self) -> Result<()> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                if self.mul(a, b) != self.mul(b, a) {
                    return Err(Error::Validation(format!("{a}·{b} != {b}·{a}")));
                }
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::Validation(format!("({a}·{b})·{c} != {a}·({b}·{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn units(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&a| (0..self.len()).any(|b| self.mul(a, b) == self.identity))
            .collect()
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.mul(a, a) == a).collect()
    }

    /// The submonoid on `elements` (which must contain the identity and be
    /// closed), reindexed in the given order.
    pub fn submonoid(&self, elements: &[usize]) -> Result<FiniteMonoid> {
        let pos: BTreeMap<usize, usize> = elements.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut table = Vec::with_capacity(elements.len());
        for &a in elements {
            let mut row = Vec::with_capacity(elements.len());
            for &b in elements {
                let p = pos
                    .get(&self.mul(a, b))
                    .ok_or_else(|| Error::Validation("subset is not closed".into()))?;
                row.push(*p);
            }
            table.push(row);
        }
        FiniteMonoid::new(table)
    }

    fn powers(&self, a: usize) -> (usize, usize) {
        // index and period of the sequence a, a², a³, …
        let mut seen = BTreeMap::new();
        let mut cur = a;
        for k in 1.. {
            if let Some(&first) = seen.get(&cur) {
                return (first, k - first);
            }
            seen.insert(cur, k);
            cur = self.mul(cur, a);
        }
        unreachable!()
    }

    fn profiles(&self) -> Vec<Profile> {
        let units: BTreeSet<usize> = self.units().into_iter().collect();
        (0..self.len())
            .map(|a| {
                let (index, period) = self.powers(a);
                Profile {
                    unit: units.contains(&a),
                    idempotent: self.mul(a, a) == a,
                    ideal_size: (0..self.len()).map(|b| self.mul(a, b)).collect::<BTreeSet<_>>().len(),
                    index,
                    period,
                }
            })
            .collect()
    }

    /// Greedy generating set, rarest profiles first.
    fn generating_set(&self, profiles: &[Profile]) -> Vec<usize> {
        let mut freq: BTreeMap<&Profile, usize> = BTreeMap::new();
        for p in profiles {
            *freq.entry(p).or_default() += 1;
        }
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&a| (freq[&profiles[a]], a));
        let mut gens = Vec::new();
        let mut span = BTreeSet::from([self.identity]);
        for a in order {
            if span.contains(&a) {
                continue;
            }
            gens.push(a);
            let mut queue: VecDeque<usize> = span.iter().copied().collect();
            while let Some(x) = queue.pop_front() {
                for &g in &gens {
                    let y = self.mul(x, g);
                    if span.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
        }
        gens
    }

    /// An explicit isomorphism `self → other` (as an image table), if one exists.
    pub fn isomorphism(&self, other: &FiniteMonoid) -> Option<Vec<usize>> {
        if self.len() != other.len() {
            return None;
        }
        let ps = self.profiles();
        let po = other.profiles();
        let mut a = ps.clone();
        let mut b = po.clone();
        a.sort();
        b.sort();
        if a != b {
            return None;
        }
        let gens = self.generating_set(&ps);
        let mut map = vec![None; self.len()];
        map[self.identity] = Some(other.identity);
        let found = self.extend(other, &gens, &ps, &po, 0, map)?;
        Some(found.into_iter().map(|x| x.expect("generated")).collect())
    }

    fn extend(
        &self,
        other: &FiniteMonoid,
        gens: &[usize],
        ps: &[Profile],
        po: &[Profile],
        k: usize,
        map: Vec<Option<usize>>,
    ) -> Option<Vec<Option<usize>>> {
        if k == gens.len() {
            let full: Option<Vec<usize>> = map.iter().copied().collect();
            return full
                .is_some_and(|f| self.is_isomorphism(other, &f))
                .then_some(map);
        }
        let g = gens[k];
        if map[g].is_some() {
            let closed = self.close(other, &gens[..=k], map)?;
            return self.extend(other, gens, ps, po, k + 1, closed);
        }
        let used: BTreeSet<usize> = map.iter().flatten().copied().collect();
        for cand in (0..other.len()).filter(|&c| po[c] == ps[g] && !used.contains(&c)) {
            let mut trial = map.clone();
            trial[g] = Some(cand);
            if let Some(closed) = self.close(other, &gens[..=k], trial) {
                if let Some(done) = self.extend(other, gens, ps, po, k + 1, closed) {
                    return Some(done);
                }
            }
        }
        None
    }

    /// Closes a partial map under right multiplication by the assigned
    /// generators; `None` on a conflict.
    fn close(
        &self,
        other: &FiniteMonoid,
        gens: &[usize],
        mut map: Vec<Option<usize>>,
    ) -> Option<Vec<Option<usize>>> {
        let mut used: BTreeMap<usize, usize> = map
            .iter()
            .enumerate()
            .filter_map(|(x, m)| m.map(|y| (y, x)))
            .collect();
        let mut queue: VecDeque<usize> = (0..self.len()).filter(|&x| map[x].is_some()).collect();
        while let Some(x) = queue.pop_front() {
            let mx = map[x].expect("queued elements are mapped");
            for &h in gens {
                let mh = map[h].expect("generators are mapped");
                let y = self.mul(x, h);
                let my = other.mul(mx, mh);
                match map[y] {
                    Some(prev) if prev != my => return None,
                    Some(_) => {}
                    None => {
                        if used.get(&my).is_some_and(|&z| z != y) {
                            return None;
                        }
                        map[y] = Some(my);
                        used.insert(my, y);
                        queue.push_back(y);
                    }
                }
            }
        }
        Some(map)
    }

    /// Whether `f` is a bijective, identity-preserving homomorphism.
    pub fn is_isomorphism(&self, other: &FiniteMonoid, f: &[usize]) -> bool {
        if f.len() != self.len() || other.len() != self.len() {
            return false;
        }
        let image: BTreeSet<usize> = f.iter().copied().collect();
        image.len() == self.len()
            && f[self.identity] == other.identity
            && (0..self.len()).all(|a| (0..self.len()).all(|b| f[self.mul(a, b)] == other.mul(f[a], f[b])))
    }

    /// Whether `f: self → other` is a monoid homomorphism.
    pub fn is_homomorphism(&self, other: &FiniteMonoid, f: &[usize]) -> bool {
        f.len() == self.len()
            && f[self.identity] == other.identity
            && (0..self.len()).all(|a| (0..self.len()).all(|b| f[self.mul(a, b)] == other.mul(f[a], f[b])))
    }
}
