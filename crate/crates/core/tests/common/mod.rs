#![allow(dead_code)]

use lambda_dr::lambda_check::{compose, identity_map, LocalActionSpec, SelfMap};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn all_perms(n: usize) -> Vec<SelfMap> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    permute(&mut p, 0, &mut out);
    out.sort();
    out
}

fn permute(p: &mut Vec<usize>, k: usize, out: &mut Vec<SelfMap>) {
    if k == p.len() {
        out.push(p.clone());
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, out);
        p.swap(k, i);
    }
}

/// One permutation of each cycle type, cycles laid out consecutively.
pub fn cycle_type_reps(n: usize) -> Vec<SelfMap> {
    fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=max.min(n)).rev() {
            for mut rest in partitions(n - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    partitions(n, n)
        .into_iter()
        .map(|parts| {
            let mut p = vec![0; n];
            let mut start = 0;
            for len in parts {
                for j in 0..len {
                    p[start + j] = start + (j + 1) % len;
                }
                start += len;
            }
            p
        })
        .collect()
}

/// Cycles of a permutation, each listed along the permutation.
pub fn cycles(f: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; f.len()];
    let mut out = Vec::new();
    for s in 0..f.len() {
        if seen[s] {
            continue;
        }
        let mut c = vec![s];
        seen[s] = true;
        let mut t = f[s];
        while t != s {
            seen[t] = true;
            c.push(t);
            t = f[t];
        }
        out.push(c);
    }
    out
}

pub fn perm_pow(f: &[usize], k: usize) -> SelfMap {
    (0..k).fold(identity_map(f.len()), |acc, _| compose(f, &acc))
}

pub fn perm_order(f: &[usize]) -> usize {
    let mut p = f.to_vec();
    let mut k = 1;
    while p.iter().enumerate().any(|(i, &x)| i != x) {
        p = compose(f, &p);
        k += 1;
    }
    k
}

fn place(psi: &mut [usize], c: &[usize], d: &[usize], offset: usize) {
    for (j, &s) in c.iter().enumerate() {
        psi[s] = d[(j + offset) % d.len()];
    }
}

/// Every map commuting with the permutation `f`.
pub fn all_equivariant_maps(f: &[usize]) -> Vec<SelfMap> {
    let cs = cycles(f);
    let choices: Vec<Vec<(usize, usize)>> = cs
        .iter()
        .map(|c| {
            cs.iter()
                .enumerate()
                .filter(|(_, d)| c.len() % d.len() == 0)
                .flat_map(|(i, d)| (0..d.len()).map(move |t| (i, t)))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; cs.len()];
    loop {
        let mut psi = vec![0; f.len()];
        for (ci, c) in cs.iter().enumerate() {
            let (di, t) = choices[ci][idx[ci]];
            place(&mut psi, c, &cs[di], t);
        }
        out.push(psi);
        let mut k = 0;
        loop {
            if k == cs.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// A random map commuting with `f`, agreeing with `f` on about half the cycles.
pub fn random_equivariant_map<R: Rng>(f: &[usize], rng: &mut R) -> SelfMap {
    let cs = cycles(f);
    let mut psi = vec![0; f.len()];
    for c in &cs {
        if rng.gen_bool(0.5) {
            place(&mut psi, c, c, 1);
        } else {
            let targets: Vec<&Vec<usize>> = cs.iter().filter(|d| c.len() % d.len() == 0).collect();
            let d = targets[rng.gen_range(0..targets.len())];
            place(&mut psi, c, d, rng.gen_range(0..d.len()));
        }
    }
    psi
}

pub fn random_perm<R: Rng>(n: usize, rng: &mut R) -> SelfMap {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// A random valid local spec with cyclic `G = ⟨F⟩` and inertia a power of `F`.
pub fn random_local_spec<R: Rng>(n: usize, rng: &mut R) -> LocalActionSpec {
    let f = random_perm(n, rng);
    let psi = random_equivariant_map(&f, rng);
    let inertia = if rng.gen_bool(0.3) {
        vec![]
    } else {
        vec![perm_pow(&f, rng.gen_range(1..=perm_order(&f)))]
    };
    LocalActionSpec {
        size: n,
        inertia_generators: inertia,
        frobenius: f,
        psi,
    }
}
