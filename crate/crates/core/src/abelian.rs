//! Finite abelian groups given by generators and relations, put in Smith
//! normal form so that every element has a canonical exponent vector.

use crate::arith;

/// `ℤ^k / R` with `R` of full rank, stored as elementary divisors
/// `d_1 | d_2 | … ` (all `> 1`) plus the change of coordinates from generator
/// exponents to canonical coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    divisors: Vec<u64>,
    generator_count: usize,
    /// Columns of the right transform `V` that survive (divisor > 1), with the divisor.
    coordinates: Vec<(Vec<i128>, u64)>,
    relations: Vec<Vec<i64>>,
}

/// Smith normal form `U·R·V = D`; only `V` is tracked.
fn smith_with_right_transform(rel: &[Vec<i128>], k: usize) -> (Vec<i128>, Vec<Vec<i128>>) {
    let rows = rel.len();
    let mut m: Vec<Vec<i128>> = rel.to_vec();
    let mut v: Vec<Vec<i128>> = (0..k)
        .map(|i| (0..k).map(|j| i128::from(i == j)).collect())
        .collect();

    let col_op = |m: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, dst: usize, src: usize, q: i128| {
        // column dst -= q * column src
        for row in m.iter_mut() {
            row[dst] -= q * row[src];
        }
        for row in v.iter_mut() {
            row[dst] -= q * row[src];
        }
    };
    let swap_cols = |m: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, a: usize, b: usize| {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
        for row in v.iter_mut() {
            row.swap(a, b);
        }
    };

    let n = rows.min(k);
    for t in 0..n {
        loop {
            // pivot: smallest nonzero absolute value in the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..k {
                    if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return (vec![0; n - t].into_iter().fold(diag(&m, t), |mut d, z| {
                    d.push(z);
                    d
                }), v);
            };
            m.swap(t, pi);
            swap_cols(&mut m, &mut v, t, pj);
            let p = m[t][t];

            let mut clean = true;
            for i in (t + 1)..rows {
                let q = m[i][t].div_euclid(p);
                if q != 0 {
                    let row_t = m[t].clone();
                    for (x, y) in m[i].iter_mut().zip(row_t) {
                        *x -= q * y;
                    }
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in (t + 1)..k {
                let q = m[t][j].div_euclid(p);
                if q != 0 {
                    col_op(&mut m, &mut v, j, t, q);
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // enforce divisibility of the rest of the block by the pivot
            let mut fixed = true;
            'scan: for i in (t + 1)..rows {
                for j in (t + 1)..k {
                    if m[i][j] % p != 0 {
                        let row_i = m[i].clone();
                        for (x, y) in m[t].iter_mut().zip(row_i) {
                            *x += y;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
    }
    (diag(&m, n), v)
}

fn diag(m: &[Vec<i128>], n: usize) -> Vec<i128> {
    (0..n.min(m.len())).map(|i| m[i][i].abs()).collect()
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup {
            divisors: vec![],
            generator_count: 0,
            coordinates: vec![],
            relations: vec![],
        }
    }

    /// Group on `k` generators with the given relation rows (each of length `k`).
    /// The relations must have full rank `k` (the group must be finite).
    pub fn from_relations(k: usize, relations: &[Vec<i64>]) -> Self {
        let rel: Vec<Vec<i128>> = relations
            .iter()
            .map(|r| {
                assert_eq!(r.len(), k, "relation length");
                r.iter().map(|&x| x as i128).collect()
            })
            .collect();
        let (d, v) = smith_with_right_transform(&rel, k);
        assert!(
            d.len() == k && d.iter().all(|&x| x > 0),
            "relations do not present a finite group"
        );
        let mut coordinates = Vec::new();
        for (j, &dj) in d.iter().enumerate() {
            if dj > 1 {
                let col: Vec<i128> = v.iter().map(|row| row[j]).collect();
                coordinates.push((col, dj as u64));
            }
        }
        let mut divisors: Vec<u64> = coordinates.iter().map(|(_, d)| *d).collect();
        debug_assert!(divisors.windows(2).all(|w| w[1] % w[0] == 0), "{divisors:?}");
        divisors.sort();
        AbelianGroup {
            divisors,
            generator_count: k,
            coordinates,
            relations: relations.to_vec(),
        }
    }

    /// Direct product of cyclic groups of the given orders (not necessarily
    /// in divisor-chain form; normalized here).
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let k = orders.len();
        let rel: Vec<Vec<i64>> = (0..k)
            .map(|i| (0..k).map(|j| if i == j { orders[i] as i64 } else { 0 }).collect())
            .collect();
        Self::from_relations(k, &rel)
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn order(&self) -> u64 {
        self.divisors.iter().product()
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relations(&self) -> &[Vec<i64>] {
        &self.relations
    }

    /// Canonical coordinates of the element `∑ e_i g_i`.
    pub fn reduce(&self, exponents: &[i64]) -> Vec<u64> {
        assert_eq!(exponents.len(), self.generator_count);
        self.coordinates
            .iter()
            .map(|(col, d)| {
                let s: i128 = col.iter().zip(exponents).map(|(c, &e)| c * e as i128).sum();
                s.rem_euclid(*d as i128) as u64
            })
            .collect()
    }

    /// Mixed-radix index of a canonical vector; `0` is the identity.
    pub fn index(&self, v: &[u64]) -> usize {
        assert_eq!(v.len(), self.divisors.len());
        v.iter()
            .zip(&self.divisors)
            .fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize)
    }

    pub fn vector(&self, mut index: usize) -> Vec<u64> {
        let mut out = vec![0; self.divisors.len()];
        for (slot, &d) in out.iter_mut().zip(&self.divisors).rev() {
            *slot = (index % d as usize) as u64;
            index /= d as usize;
        }
        out
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        let (a, b) = (self.vector(i), self.vector(j));
        let s: Vec<u64> = a
            .iter()
            .zip(&b)
            .zip(&self.divisors)
            .map(|((x, y), d)| (x + y) % d)
            .collect();
        self.index(&s)
    }

    pub fn neg(&self, i: usize) -> usize {
        let a = self.vector(i);
        let s: Vec<u64> = a.iter().zip(&self.divisors).map(|(x, d)| (d - x) % d).collect();
        self.index(&s)
    }

    /// Order of an element.
    pub fn element_order(&self, i: usize) -> u64 {
        self.vector(i)
            .iter()
            .zip(&self.divisors)
            .map(|(&x, &d)| d / arith::gcd(x as i64, d as i64) as u64)
            .fold(1, |acc, o| arith::lcm(acc as i64, o as i64) as u64)
    }

    /// Cayley table of the group law on indices.
    pub fn table(&self) -> Vec<Vec<usize>> {
        let n = self.order() as usize;
        (0..n).map(|i| (0..n).map(|j| self.add(i, j)).collect()).collect()
    }
}
