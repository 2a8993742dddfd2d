use lambda_dr::deligne_ribet::{dr_structured, DRMonoid};
use lambda_dr::field::{Cycle, NumberField, PrimeIdeal};
use lambda_dr::lambda_check::{
    compose, GaloisGenerator, GlobalAction, GlobalActionSpec, ListedPrime, SelfMap,
};
use lambda_dr::ray_class::{conductor_of_action, RayClassGroup};
use lambda_dr::serial::{parse_cycle, parse_field};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A finite `DR(𝔣)`-set: copies of `DR(𝔣_i)` for divisors `𝔣_i | 𝔣`, acted on by multiplication.
struct DrSet {
    dr: DRMonoid,
    pieces: Vec<(DRMonoid, Vec<usize>)>,
}

impl DrSet {
    fn random<R: Rng>(k: &NumberField, f: &Cycle, rng: &mut R) -> Self {
        let dr = dr_structured(k, f).unwrap();
        let divisors = f.divisors();
        let pieces = (0..rng.gen_range(1..=2))
            .map(|_| dr.projection(&divisors[rng.gen_range(0..divisors.len())]).unwrap())
            .collect();
        DrSet { dr, pieces }
    }

    fn size(&self) -> usize {
        self.pieces.iter().map(|(m, _)| m.len()).sum()
    }

    fn rho(&self, x: usize) -> SelfMap {
        let mut out = Vec::with_capacity(self.size());
        let mut base = 0;
        for (m, proj) in &self.pieces {
            out.extend((0..m.len()).map(|s| base + m.mul(proj[x], s)));
            base += m.len();
        }
        out
    }

    fn spec(&self, extra_primes: &[PrimeIdeal]) -> GlobalActionSpec {
        let k = self.dr.field().clone();
        let f = self.dr.cycle().clone();
        let cl = RayClassGroup::compute(&k, &f).unwrap();
        let galois = cl
            .generators()
            .iter()
            .map(|q| GaloisGenerator {
                class_rep: q.to_ideal(),
                perm: self.rho(self.dr.class_of(&q.to_ideal()).unwrap()),
            })
            .collect();
        let mut listed: Vec<PrimeIdeal> = f.finite().iter().map(|(q, _)| *q).collect();
        listed.extend(extra_primes.iter().filter(|q| !listed.contains(q)).copied().collect::<Vec<_>>());
        let psi = listed
            .into_iter()
            .map(|q| ListedPrime {
                prime: q,
                map: self.rho(self.dr.class_of(&q.to_ideal()).unwrap()),
            })
            .collect();
        GlobalActionSpec {
            field: k,
            modulus: f,
            size: self.size(),
            galois,
            psi,
        }
    }
}

fn soundness_cases() -> Vec<(&'static str, &'static str)> {
    vec![
        ("Q", "4*inf"),
        ("Q", "6"),
        ("Q", "12*inf"),
        ("Q", "9"),
        ("Q(i)", "[P(2)^2]"),
        ("Q(i)", "3"),
        ("Q(sqrt -5)", "2"),
        ("Q(sqrt 2)", "[P(2)]*inf"),
    ]
}

fn check_divides_conductor(g: &GlobalAction) {
    let c = conductor_of_action(g.modulus_group(), g.galois_table()).unwrap();
    let f = g.compute_f().unwrap();
    assert!(c.divides(&f), "c(S) = {c} does not divide f = {f}");
}

fn certificate_verifies(g: &GlobalAction) -> bool {
    let v = g.check().unwrap();
    let reps: Vec<_> = v.dr.elements().iter().map(|e| e.rep.clone()).collect();
    v.answer() && g.verify_certificate(&v.f, &reps, v.dr.table(), &v.rho, 30).unwrap()
}

#[test]
fn dr_sets_are_accepted_and_perturbations_are_caught() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut yes_after, mut no_after, mut invalid_after) = (0, 0, 0);
    for (field, cycle) in soundness_cases() {
        let k = parse_field(field).unwrap();
        let f = parse_cycle(&k, cycle).unwrap();
        for _ in 0..8 {
            let set = DrSet::random(&k, &f, &mut rng);
            let extra: Vec<PrimeIdeal> = k
                .primes_up_to_norm(13)
                .into_iter()
                .filter(|q| f.is_coprime_to(&q.to_ideal()))
                .take(2)
                .collect();
            let spec = set.spec(&extra);
            let g = spec.clone().validate().unwrap();
            check_divides_conductor(&g);
            assert!(certificate_verifies(&g), "{field} {cycle}: DR-set rejected");

            // Perturb ψ at one point of a prime dividing 𝔣.
            let mut bad = spec.clone();
            let i = rng.gen_range(0..f.finite().len());
            let n = bad.size;
            let s = rng.gen_range(0..n);
            let old = bad.psi[i].map[s];
            bad.psi[i].map[s] = (old + rng.gen_range(1..n.max(2))) % n;
            if bad.psi[i].map[s] == old {
                continue;
            }
            match bad.validate() {
                Err(_) => invalid_after += 1,
                Ok(g) => {
                    check_divides_conductor(&g);
                    let v = g.check().unwrap();
                    match &v.witness {
                        Some(w) => {
                            assert!(g.refalsify(&v.f, w).unwrap(), "{field} {cycle}: witness does not re-falsify");
                            no_after += 1;
                        }
                        None => {
                            assert!(certificate_verifies(&g), "{field} {cycle}: silent pass");
                            yes_after += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(no_after + invalid_after > 0, "no perturbation was caught");
    eprintln!("perturbations: {no_after} no, {yes_after} still valid, {invalid_after} rejected");
}

fn regular_copies(cl: &RayClassGroup, copies: usize, swap: bool, class: usize) -> SelfMap {
    let n = cl.order() as usize;
    let mut out = Vec::with_capacity(n * copies);
    for c in 0..copies {
        let target = if swap { (c + 1) % copies } else { c };
        out.extend((0..n).map(|s| target * n + cl.mul(class, s)));
    }
    out
}

#[test]
fn bijective_psi_is_accepted_exactly_when_it_is_the_artin_action() {
    let k = parse_field("Q(sqrt -5)").unwrap();
    let m = Cycle::unit(k.id());
    let cl = RayClassGroup::compute(&k, &m).unwrap();
    let primes: Vec<PrimeIdeal> = k.primes_up_to_norm(11);
    let galois = cl
        .generators()
        .iter()
        .map(|q| GaloisGenerator {
            class_rep: q.to_ideal(),
            perm: regular_copies(&cl, 2, false, cl.class_of_prime(q).unwrap()),
        })
        .collect::<Vec<_>>();
    // Each listed prime gets its Artin action, or the Artin action followed by swapping the copies.
    for mask in 0u32..(1 << primes.len()) {
        let psi: Vec<ListedPrime> = primes
            .iter()
            .enumerate()
            .map(|(i, q)| ListedPrime {
                prime: *q,
                map: regular_copies(&cl, 2, mask >> i & 1 == 1, cl.class_of_prime(q).unwrap()),
            })
            .collect();
        for p in &psi {
            for g in &galois {
                assert_eq!(compose(&p.map, &g.perm), compose(&g.perm, &p.map));
            }
        }
        let spec = GlobalActionSpec {
            field: k.clone(),
            modulus: m.clone(),
            size: 2 * cl.order() as usize,
            galois: galois.clone(),
            psi,
        };
        let g = spec.validate().unwrap();
        let v = g.check().unwrap();
        assert_eq!(v.answer(), mask == 0, "mask {mask:b}");
        assert!(v.r.is_unit());
        if let Some(w) = &v.witness {
            assert!(g.refalsify(&v.f, w).unwrap());
        }
    }
}

#[test]
fn four_point_trivial_galois_fixture() {
    let k = NumberField::rational();
    let two = k.primes_up_to_norm(2)[0];
    let spec = GlobalActionSpec {
        field: k.clone(),
        modulus: Cycle::unit(k.id()),
        size: 4,
        galois: vec![],
        psi: vec![ListedPrime {
            prime: two,
            map: vec![0, 0, 0, 0],
        }],
    };
    let g = spec.validate().unwrap();
    assert_eq!(g.compute_r(), k.principal_int(2).unwrap());
    let v = g.check().unwrap();
    assert!(v.answer());
    assert_eq!(v.f, parse_cycle(&k, "2").unwrap());
    assert_eq!(v.dr.len(), 2);
    assert_eq!(v.local_models.len(), 1);
    assert!(certificate_verifies(&g));
}
