use super::{FieldElement, FieldId, Ideal};

/// The finite ring `O/𝔪`, residues kept as canonical `(x, y)` pairs.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    modulus: Ideal,
    primes: Vec<Ideal>,
}

pub type Residue = (i128, i128);

impl ResidueRing {
    pub(crate) fn new(modulus: &Ideal) -> Self {
        ResidueRing {
            modulus: modulus.clone(),
            primes: modulus.factor().iter().map(|(q, _)| q.to_ideal()).collect(),
        }
    }

    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    pub fn size(&self) -> u64 {
        self.modulus.norm()
    }

    pub fn one(&self) -> Residue {
        self.modulus.reduce((1, 0))
    }

    pub fn reduce(&self, r: Residue) -> Residue {
        self.modulus.reduce(r)
    }

    /// Residue of an integral element.
    pub fn reduce_element(&self, e: &FieldElement) -> Residue {
        assert!(e.is_integral(), "only integral elements have residues");
        self.modulus
            .reduce_big(&e.x().to_integer(), &e.y().to_integer())
    }

    pub fn mul(&self, u: Residue, v: Residue) -> Residue {
        self.modulus.reduce(self.modulus.mul_coords(u, v))
    }

    pub fn is_zero(&self, r: Residue) -> bool {
        self.modulus.contains(r)
    }

    pub fn is_unit(&self, r: Residue) -> bool {
        self.primes.iter().all(|q| !q.contains(r))
    }

    /// Canonical residues `x + yω`, `0 <= x < A`, `0 <= y < C`.
    pub fn elements(&self) -> Vec<Residue> {
        let (c, a, _) = self.modulus.triple();
        let (aa, cc) = (c as i128 * a as i128, c as i128);
        let cc = if self.modulus.field() == FieldId::Rational { 1 } else { cc };
        let mut out = Vec::with_capacity((aa * cc) as usize);
        for y in 0..cc {
            for x in 0..aa {
                out.push((x, y));
            }
        }
        out
    }

    /// `|(O/𝔪)*|`, by exhaustive unit counts on each prime-power factor (CRT).
    pub fn unit_count(&self) -> u64 {
        self.modulus
            .factor()
            .iter()
            .map(|(q, e)| {
                let local = ResidueRing::new(&q.to_ideal().pow(*e));
                local.elements().into_iter().filter(|&r| local.is_unit(r)).count() as u64
            })
            .product()
    }

    /// Multiplicative order of a unit residue.
    pub fn order(&self, r: Residue) -> u64 {
        assert!(self.is_unit(r), "order of a non-unit");
        let one = self.one();
        let mut cur = r;
        let mut k = 1;
        while cur != one {
            cur = self.mul(cur, r);
            k += 1;
        }
        k
    }
}
