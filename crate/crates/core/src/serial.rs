//! JSON forms and text parsing for fields, ideals, cycles, monoids, specs
//! and verdicts. Arithmetic integers travel as decimal strings; indices into
//! tables and point sets are plain JSON numbers.

use serde::{Deserialize, Serialize};

use crate::deligne_ribet::{Construction, DRMonoid};
use crate::error::{Error, Result};
use crate::field::{Cycle, FieldId, Ideal, NumberField, PrimeIdeal, PrimeKind, RealPlace};
use crate::lambda_check::{
    GaloisGenerator, GlobalActionSpec, GlobalVerdict, GlobalWitness, ListedPrime, LocalActionSpec,
    LocalFailure, LocalModel, LocalVerdict, SelfMap,
};
use crate::ray_class::RayClassGroup;

/// An integer written either as a JSON string or a JSON number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntRepr {
    Str(String),
    Num(i64),
}

impl IntRepr {
    pub fn value(&self) -> Result<i64> {
        match self {
            IntRepr::Num(n) => Ok(*n),
            IntRepr::Str(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        }
    }
}

fn int(n: impl ToString) -> IntRepr {
    IntRepr::Str(n.to_string())
}

// ------------------------------------------------------------ text forms

/// Parses `Q`, `Q(i)`, `Q(sqrt(-5))`, `Q(sqrt -5)`, `Q(sqrt 2)`.
pub fn parse_field(s: &str) -> Result<NumberField> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || Error::Parse(format!("unrecognized field {s:?}"));
    if compact == "Q" {
        return Ok(NumberField::rational());
    }
    let inner = compact
        .strip_prefix("Q(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(err)?;
    if inner == "i" {
        return NumberField::quadratic(-1);
    }
    let arg = inner.strip_prefix("sqrt").ok_or_else(err)?;
    let arg = arg
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or(arg);
    let d: i64 = arg.parse().map_err(|_| err())?;
    NumberField::quadratic(d)
}

pub fn field_name(k: FieldId) -> String {
    k.to_string()
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            s: text.as_bytes(),
            pos: 0,
            text,
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {} in cycle {:?}", self.pos, self.text))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {lit:?}")))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.s.len() && self.s[self.pos] == b'-' {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| self.err("expected an integer"))
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.s.len()
    }
}

fn parse_prime_token(k: &NumberField, c: &mut Cursor) -> Result<PrimeIdeal> {
    c.expect("P(")?;
    let p = c.integer()?;
    let root = if c.eat(",") { Some(c.integer()?) } else { None };
    c.expect(")")?;
    prime_from_parts(k.id(), p, root)
}

/// The prime above `p` with the given root, or the unique prime above `p`.
pub fn prime_from_parts(k: FieldId, p: i64, root: Option<i64>) -> Result<PrimeIdeal> {
    let above: Vec<PrimeIdeal> = crate::field::factor_rational_prime(k, p)
        .map_err(|e| Error::Parse(e.to_string()))?
        .into_iter()
        .map(|(q, _)| q)
        .collect();
    match root {
        Some(r) => above
            .into_iter()
            .find(|q| matches!(q.kind(), PrimeKind::Split(x) if x == r.rem_euclid(p)))
            .ok_or_else(|| Error::Parse(format!("no split prime P({p},{r}) in {k}"))),
        None if above.len() == 1 => Ok(above[0]),
        None => Err(Error::Parse(format!(
            "{p} splits in {k}; name a root, e.g. {}",
            above[0]
        ))),
    }
}

/// Parses the cycle grammar (see the README):
///
/// ```text
/// cycle  = ideal { "*" place } ;
/// ideal  = integer | "[" [ power { "," power } ] "]" ;
/// power  = "P(" integer [ "," integer ] ")" [ "^" integer ] ;
/// place  = "inf" | "inf1" | "inf2" ;
/// ```
pub fn parse_cycle(k: &NumberField, text: &str) -> Result<Cycle> {
    let mut c = Cursor::new(text);
    let mut finite: Vec<(PrimeIdeal, u32)> = Vec::new();
    if c.eat("[") {
        if !c.eat("]") {
            loop {
                let q = parse_prime_token(k, &mut c)?;
                let e = if c.eat("^") { c.integer()? } else { 1 };
                if e < 0 {
                    return Err(c.err("negative exponent"));
                }
                finite.push((q, e as u32));
                if c.eat("]") {
                    break;
                }
                c.expect(",")?;
            }
        }
    } else {
        let n = c.integer()?;
        if n <= 0 {
            return Err(c.err("modulus must be a positive integer"));
        }
        finite = k.principal_int(n)?.factor();
    }
    let mut places = Vec::new();
    while c.eat("*") {
        if c.eat("inf1") {
            places.push(RealPlace::S1);
        } else if c.eat("inf2") {
            places.push(RealPlace::S2);
        } else if c.eat("inf") {
            let all = k.real_places();
            if all.is_empty() {
                return Err(Error::Parse(format!("{} has no real places", k.id())));
            }
            places.extend(all);
        } else {
            return Err(c.err("expected inf, inf1 or inf2"));
        }
    }
    if !c.at_end() {
        return Err(c.err("unexpected trailing input"));
    }
    Cycle::new(k.id(), finite, places).map_err(|e| Error::Parse(e.to_string()))
}

// ------------------------------------------------------------ JSON forms

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeJson {
    pub p: IntRepr,
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<IntRepr>,
}

impl PrimeJson {
    pub fn from_prime(q: &PrimeIdeal) -> Self {
        let (kind, root) = match q.kind() {
            PrimeKind::Split(r) => ("split", Some(int(r))),
            PrimeKind::Inert => ("inert", None),
            PrimeKind::Ramified => ("ramified", None),
        };
        PrimeJson {
            p: int(q.p()),
            kind: kind.into(),
            root,
        }
    }

    pub fn to_prime(&self, k: FieldId) -> Result<PrimeIdeal> {
        let p = self.p.value()?;
        let kind = match (self.kind.as_str(), &self.root) {
            ("split", Some(r)) => PrimeKind::Split(r.value()?.rem_euclid(p.max(1))),
            ("split", None) => return Err(Error::Parse("split prime without root".into())),
            ("inert", _) => PrimeKind::Inert,
            ("ramified", _) => PrimeKind::Ramified,
            (other, _) => return Err(Error::Parse(format!("unknown prime type {other:?}"))),
        };
        PrimeIdeal::new(k, p, kind).map_err(|e| Error::Validation(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealJson {
    pub c: IntRepr,
    pub a: IntRepr,
    pub b: IntRepr,
}

impl IdealJson {
    pub fn from_ideal(i: &Ideal) -> Self {
        let (c, a, b) = i.triple();
        IdealJson {
            c: int(c),
            a: int(a),
            b: int(b),
        }
    }

    pub fn to_ideal(&self, k: FieldId) -> Result<Ideal> {
        Ideal::from_triple(k, self.c.value()?, self.a.value()?, self.b.value()?)
            .map_err(|e| Error::Validation(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleJson {
    pub finite: Vec<(PrimeJson, IntRepr)>,
    pub real_places: Vec<String>,
}

impl CycleJson {
    pub fn from_cycle(f: &Cycle) -> Self {
        CycleJson {
            finite: f
                .finite()
                .iter()
                .map(|(q, e)| (PrimeJson::from_prime(q), int(e)))
                .collect(),
            real_places: f.real_places().iter().map(|v| v.name().to_string()).collect(),
        }
    }

    pub fn to_cycle(&self, k: FieldId) -> Result<Cycle> {
        let mut finite = Vec::new();
        for (q, e) in &self.finite {
            let e = e.value()?;
            if e < 0 {
                return Err(Error::Parse("negative exponent".into()));
            }
            finite.push((q.to_prime(k)?, e as u32));
        }
        let mut places = Vec::new();
        for v in &self.real_places {
            places.push(match v.as_str() {
                "s1" => RealPlace::S1,
                "s2" => RealPlace::S2,
                other => return Err(Error::Parse(format!("unknown real place {other:?}"))),
            });
        }
        Cycle::new(k, finite, places).map_err(|e| Error::Validation(e.to_string()))
    }
}

/// A cycle given either in JSON form or as a grammar string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CycleInput {
    Text(String),
    Json(CycleJson),
}

impl CycleInput {
    pub fn to_cycle(&self, k: &NumberField) -> Result<Cycle> {
        match self {
            CycleInput::Text(t) => parse_cycle(k, t),
            CycleInput::Json(j) => j.to_cycle(k.id()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub divisors: Vec<IntRepr>,
    pub reps: Vec<IdealJson>,
}

impl GroupJson {
    pub fn from_group(g: &RayClassGroup) -> Self {
        GroupJson {
            divisors: g.divisors().iter().map(int).collect(),
            reps: g.reps().iter().map(IdealJson::from_ideal).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionJson {
    pub classes: Vec<Vec<IntRepr>>,
    pub perms: Vec<SelfMap>,
}

impl ActionJson {
    pub fn from_action(g: &RayClassGroup, perms: &[SelfMap]) -> Self {
        ActionJson {
            classes: (0..g.order() as usize)
                .map(|i| g.group().vector(i).into_iter().map(int).collect())
                .collect(),
            perms: perms.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DRElementJson {
    pub d: IdealJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<Vec<IntRepr>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep: Option<IdealJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DRDump {
    pub field: String,
    pub cycle: CycleJson,
    pub elements: Vec<DRElementJson>,
    pub table: Vec<Vec<usize>>,
    pub units: Vec<usize>,
    pub idempotents: Vec<usize>,
}

impl DRDump {
    pub fn from_monoid(m: &DRMonoid) -> Self {
        let structured = m.construction() == Construction::Structured;
        DRDump {
            field: field_name(m.field().id()),
            cycle: CycleJson::from_cycle(m.cycle()),
            elements: m
                .elements()
                .iter()
                .map(|e| DRElementJson {
                    d: IdealJson::from_ideal(&e.d),
                    class: e.class.as_ref().map(|v| v.iter().map(int).collect()),
                    rep: (!structured).then(|| IdealJson::from_ideal(&e.rep)),
                })
                .collect(),
            table: m.table().to_vec(),
            units: m.units(),
            idempotents: m.idempotents(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisGeneratorJson {
    pub class_rep: IdealJson,
    pub perm: SelfMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisJson {
    pub generators: Vec<GaloisGeneratorJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiJson {
    pub prime: PrimeJson,
    pub map: SelfMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalSpecJson {
    pub field: String,
    pub modulus: CycleInput,
    pub set_size: usize,
    #[serde(default = "no_galois")]
    pub galois: GaloisJson,
    #[serde(default)]
    pub psi: Vec<PsiJson>,
}

fn no_galois() -> GaloisJson {
    GaloisJson { generators: vec![] }
}

impl GlobalSpecJson {
    pub fn to_spec(&self) -> Result<GlobalActionSpec> {
        let field = parse_field(&self.field)?;
        let k = field.id();
        let modulus = self.modulus.to_cycle(&field)?;
        let galois = self
            .galois
            .generators
            .iter()
            .map(|g| {
                Ok(GaloisGenerator {
                    class_rep: g.class_rep.to_ideal(k)?,
                    perm: g.perm.clone(),
                })
            })
            .collect::<Result<_>>()?;
        let psi = self
            .psi
            .iter()
            .map(|p| {
                Ok(ListedPrime {
                    prime: p.prime.to_prime(k)?,
                    map: p.map.clone(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(GlobalActionSpec {
            field,
            modulus,
            size: self.set_size,
            galois,
            psi,
        })
    }

    pub fn from_spec(spec: &GlobalActionSpec) -> Self {
        GlobalSpecJson {
            field: field_name(spec.field.id()),
            modulus: CycleInput::Json(CycleJson::from_cycle(&spec.modulus)),
            set_size: spec.size,
            galois: GaloisJson {
                generators: spec
                    .galois
                    .iter()
                    .map(|g| GaloisGeneratorJson {
                        class_rep: IdealJson::from_ideal(&g.class_rep),
                        perm: g.perm.clone(),
                    })
                    .collect(),
            },
            psi: spec
                .psi
                .iter()
                .map(|lp| PsiJson {
                    prime: PrimeJson::from_prime(&lp.prime),
                    map: lp.map.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSpecJson {
    pub set_size: usize,
    #[serde(default)]
    pub inertia_generators: Vec<SelfMap>,
    pub frobenius: SelfMap,
    pub psi: SelfMap,
}

impl LocalSpecJson {
    pub fn to_spec(&self) -> LocalActionSpec {
        LocalActionSpec {
            size: self.set_size,
            inertia_generators: self.inertia_generators.clone(),
            frobenius: self.frobenius.clone(),
            psi: self.psi.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalModelJson {
    pub layers: Vec<Vec<usize>>,
    pub chain_maps: Vec<Vec<(usize, usize)>>,
    pub exponents: Vec<u32>,
}

impl LocalModelJson {
    pub fn from_model(m: &LocalModel) -> Self {
        LocalModelJson {
            layers: m.layers.clone(),
            chain_maps: m.chain_maps.clone(),
            exponents: m.exponents.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalWitnessJson {
    pub condition: u8,
    pub point: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_image: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frobenius_image: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalVerdictJson {
    pub answer: String,
    pub unramified: Vec<usize>,
    pub filtration: Vec<Vec<usize>>,
    pub splitting: SelfMap,
    pub witness: Option<LocalWitnessJson>,
}

impl LocalVerdictJson {
    pub fn from_verdict(v: &LocalVerdict) -> Self {
        LocalVerdictJson {
            answer: if v.answer() { "yes" } else { "no" }.into(),
            unramified: v.unramified.clone(),
            filtration: v.filtration.clone(),
            splitting: v.splitting.clone(),
            witness: v.failure.as_ref().map(|f| match *f {
                LocalFailure::InertiaMoves { generator, point } => LocalWitnessJson {
                    condition: 1,
                    point,
                    generator: Some(generator),
                    psi_image: None,
                    frobenius_image: None,
                },
                LocalFailure::FrobeniusMismatch { point, psi, frobenius } => LocalWitnessJson {
                    condition: 2,
                    point,
                    generator: None,
                    psi_image: Some(psi),
                    frobenius_image: Some(frobenius),
                },
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalWitnessJson {
    pub check: String,
    pub first: IdealJson,
    pub second: IdealJson,
    pub first_by_artin: bool,
    pub point: usize,
    pub first_image: usize,
    pub second_image: usize,
}

impl GlobalWitnessJson {
    pub fn from_witness(w: &GlobalWitness) -> Self {
        GlobalWitnessJson {
            check: w.check.name().into(),
            first: IdealJson::from_ideal(&w.first),
            second: IdealJson::from_ideal(&w.second),
            first_by_artin: w.first_by_artin,
            point: w.point,
            first_image: w.first_image,
            second_image: w.second_image,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeModelJson {
    pub prime: PrimeJson,
    pub model: LocalModelJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalVerdictJson {
    pub answer: String,
    pub r: IdealJson,
    pub f: CycleJson,
    pub dr: DRDump,
    pub rho: Vec<SelfMap>,
    pub witness: Option<GlobalWitnessJson>,
    pub local_models: Vec<PrimeModelJson>,
}

impl GlobalVerdictJson {
    pub fn from_verdict(v: &GlobalVerdict) -> Self {
        GlobalVerdictJson {
            answer: if v.answer() { "yes" } else { "no" }.into(),
            r: IdealJson::from_ideal(&v.r),
            f: CycleJson::from_cycle(&v.f),
            dr: DRDump::from_monoid(&v.dr),
            rho: v.rho.clone(),
            witness: v.witness.as_ref().map(GlobalWitnessJson::from_witness),
            local_models: v
                .local_models
                .iter()
                .map(|(q, m)| PrimeModelJson {
                    prime: PrimeJson::from_prime(q),
                    model: LocalModelJson::from_model(m),
                })
                .collect(),
        }
    }
}
