use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lambda_dr::deligne_ribet::{dr_bruteforce, dr_isomorphic, dr_structured, DRMonoid};
use lambda_dr::field::{Cycle, NumberField};
use lambda_dr::lambda_check::{check_global, check_local, LocalFailure, LocalModel};
use lambda_dr::monoid::FiniteMonoid;
use lambda_dr::ray_class::{RayClassGroup, DEFAULT_NORM_BOUND};
use lambda_dr::serial::{
    field_name, parse_cycle, parse_field, CycleJson, DRDump, GlobalSpecJson, GlobalVerdictJson,
    IdealJson, LocalSpecJson, LocalVerdictJson, PrimeJson, PrimeModelJson, LocalModelJson,
};
use lambda_dr::{Error, ErrorClass, Result};

const TABLE_CAP: usize = 64;

#[derive(Parser)]
#[command(name = "lambda-dr", version, about = "Ray class groups, Deligne-Ribet monoids and integral model checks")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Discriminant, signature and units of a field.
    FieldInfo {
        #[arg(long)]
        field: String,
    },
    /// The ideal class group.
    Classgroup {
        #[arg(long)]
        field: String,
    },
    /// The ray class group modulo a cycle.
    Rayclassgroup {
        #[arg(long)]
        field: String,
        #[arg(long)]
        cycle: String,
    },
    /// The Deligne-Ribet monoid of a cycle.
    Dr {
        #[arg(long)]
        field: String,
        #[arg(long)]
        cycle: String,
        /// Enumerate ideal classes directly instead of by strata.
        #[arg(long)]
        bruteforce: bool,
    },
    /// Build both constructions and compare; optionally re-ingest a json dump.
    DrVerify {
        #[arg(long)]
        field: String,
        #[arg(long)]
        cycle: String,
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Decide the local criterion for a local spec file.
    CheckLocal { spec: PathBuf },
    /// Decide the global criterion for a spec file.
    CheckGlobal { spec: PathBuf },
    /// Print the local models of a spec that admits one.
    Model { spec: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Parse => 2,
                ErrorClass::Validation => 3,
                ErrorClass::Budget => 4,
            })
        }
    }
}

fn norm_budget() -> Result<Option<u64>> {
    match std::env::var("DR_NORM_BUDGET") {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Parse(format!("DR_NORM_BUDGET is not a positive integer: {s:?}"))),
        Err(_) => Ok(None),
    }
}

fn ray_class_group(k: &NumberField, f: &Cycle) -> Result<RayClassGroup> {
    let bound = norm_budget()?.unwrap_or(DEFAULT_NORM_BOUND);
    RayClassGroup::compute_with_bound(k, f, bound)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<String> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::FieldInfo { field } => field_info(&parse_field(field)?, json),
        Command::Classgroup { field } => {
            let k = parse_field(field)?;
            let g = ray_class_group(&k, &Cycle::unit(k.id()))?;
            Ok(group_output(&g, json))
        }
        Command::Rayclassgroup { field, cycle } => {
            let k = parse_field(field)?;
            let f = parse_cycle(&k, cycle)?;
            let g = ray_class_group(&k, &f)?;
            Ok(group_output(&g, json))
        }
        Command::Dr {
            field,
            cycle,
            bruteforce,
        } => {
            let k = parse_field(field)?;
            let f = parse_cycle(&k, cycle)?;
            let m = if *bruteforce {
                dr_bruteforce(&k, &f, norm_budget()?)?
            } else {
                dr_structured(&k, &f)?
            };
            Ok(if json { pretty(&DRDump::from_monoid(&m)) } else { dr_text(&m) })
        }
        Command::DrVerify { field, cycle, dump } => {
            let k = parse_field(field)?;
            let f = parse_cycle(&k, cycle)?;
            dr_verify(&k, &f, dump.as_deref(), json)
        }
        Command::CheckLocal { spec } => {
            let spec = read_json::<LocalSpecJson>(spec)?.to_spec();
            let v = check_local(&spec)?;
            if json {
                return Ok(pretty(&LocalVerdictJson::from_verdict(&v)));
            }
            let mut s = String::new();
            writeln!(s, "answer: {}", if v.answer() { "yes" } else { "no" }).unwrap();
            writeln!(s, "unramified points: {:?}", v.unramified).unwrap();
            for (i, layer) in v.filtration.iter().enumerate() {
                writeln!(s, "S_{i}: {layer:?}").unwrap();
            }
            writeln!(s, "splitting map: {:?}", v.splitting).unwrap();
            match v.failure {
                Some(LocalFailure::InertiaMoves { generator, point }) => writeln!(
                    s,
                    "witness: inertia generator {generator} moves unramified point {point}"
                )
                .unwrap(),
                Some(LocalFailure::FrobeniusMismatch {
                    point,
                    psi,
                    frobenius,
                }) => writeln!(
                    s,
                    "witness: at point {point} psi gives {psi} but frobenius gives {frobenius}"
                )
                .unwrap(),
                None => {}
            }
            Ok(s)
        }
        Command::CheckGlobal { spec } => {
            let spec = read_json::<GlobalSpecJson>(spec)?.to_spec()?;
            let v = check_global(spec)?;
            if json {
                return Ok(pretty(&GlobalVerdictJson::from_verdict(&v)));
            }
            let mut s = String::new();
            writeln!(s, "answer: {}", if v.answer() { "yes" } else { "no" }).unwrap();
            writeln!(s, "r = {}", v.r).unwrap();
            writeln!(s, "f = {}", v.f).unwrap();
            writeln!(s, "|DR(f)| = {}", v.dr.len()).unwrap();
            if let Some(w) = &v.witness {
                writeln!(s, "failed check: {}", w.check.name()).unwrap();
                let how = if w.first_by_artin { " (Artin action)" } else { "" };
                writeln!(
                    s,
                    "witness: {}{how} sends {} to {}, while {} sends it to {}",
                    w.first, w.point, w.first_image, w.second, w.second_image
                )
                .unwrap();
            } else {
                writeln!(s, "rho:").unwrap();
                for (i, r) in v.rho.iter().enumerate() {
                    let e = v.dr.element(i);
                    writeln!(s, "  {:>3}  d = {:<20} {:?}", i, e.d.to_string(), r).unwrap();
                }
            }
            Ok(s)
        }
        Command::Model { spec } => {
            let spec = read_json::<GlobalSpecJson>(spec)?.to_spec()?;
            let v = check_global(spec)?;
            if let Some(w) = &v.witness {
                return Err(Error::Validation(format!(
                    "no integral model: the {} check fails at point {}",
                    w.check.name(),
                    w.point
                )));
            }
            if json {
                let models: Vec<PrimeModelJson> = v
                    .local_models
                    .iter()
                    .map(|(q, m)| PrimeModelJson {
                        prime: PrimeJson::from_prime(q),
                        model: LocalModelJson::from_model(m),
                    })
                    .collect();
                return Ok(pretty(&json!({
                    "f": CycleJson::from_cycle(&v.f),
                    "local_models": models,
                })));
            }
            let mut s = String::new();
            writeln!(s, "f = {}", v.f).unwrap();
            for (q, m) in &v.local_models {
                writeln!(s, "at {q}:").unwrap();
                model_text(&mut s, m);
            }
            Ok(s)
        }
    }
}

fn field_info(k: &NumberField, json: bool) -> Result<String> {
    let u = k.unit_group();
    let (r1, r2) = k.signature();
    let fundamental = u.fundamental().map(|e| e.to_string());
    if json {
        return Ok(pretty(&json!({
            "field": field_name(k.id()),
            "degree": k.degree(),
            "discriminant": k.discriminant().to_string(),
            "signature": [r1, r2],
            "torsion_order": u.torsion_order(),
            "torsion_generator": u.torsion_generator().to_string(),
            "fundamental_unit": fundamental,
            "minkowski_bound": k.minkowski_bound(),
        })));
    }
    let mut s = String::new();
    writeln!(s, "field:             {}", k.id()).unwrap();
    writeln!(s, "degree:            {}", k.degree()).unwrap();
    writeln!(s, "discriminant:      {}", k.discriminant()).unwrap();
    writeln!(s, "signature:         ({r1}, {r2})").unwrap();
    writeln!(s, "roots of unity:    {} (generator {})", u.torsion_order(), u.torsion_generator()).unwrap();
    writeln!(s, "fundamental unit:  {}", fundamental.as_deref().unwrap_or("none")).unwrap();
    writeln!(s, "minkowski bound:   {}", k.minkowski_bound()).unwrap();
    Ok(s)
}

fn group_output(g: &RayClassGroup, json: bool) -> String {
    if json {
        return pretty(&json!({
            "field": field_name(g.field().id()),
            "cycle": CycleJson::from_cycle(g.cycle()),
            "order": g.order().to_string(),
            "divisors": g.divisors().iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "generators": g.generators().iter().map(PrimeJson::from_prime).collect::<Vec<_>>(),
            "reps": g.reps().iter().map(IdealJson::from_ideal).collect::<Vec<_>>(),
        }));
    }
    let mut s = String::new();
    writeln!(s, "field:      {}", g.field().id()).unwrap();
    writeln!(s, "cycle:      {}", g.cycle()).unwrap();
    writeln!(s, "order:      {}", g.order()).unwrap();
    writeln!(s, "type:       {:?}", g.divisors()).unwrap();
    let gens: Vec<String> = g.generators().iter().map(|q| q.to_string()).collect();
    writeln!(s, "generators: {}", gens.join(", ")).unwrap();
    writeln!(s, "classes:").unwrap();
    for (i, rep) in g.reps().iter().enumerate().take(TABLE_CAP) {
        writeln!(s, "  {:>4}  {:?}  {}", i, g.group().vector(i), rep).unwrap();
    }
    if g.reps().len() > TABLE_CAP {
        writeln!(s, "  ... {} more; use --format json for all", g.reps().len() - TABLE_CAP).unwrap();
    }
    s
}

fn dr_text(m: &DRMonoid) -> String {
    let mut s = String::new();
    writeln!(s, "DR({}) over {}: {} elements", m.cycle(), m.field().id(), m.len()).unwrap();
    let show = m.len() <= TABLE_CAP;
    if show {
        writeln!(s, "elements:").unwrap();
        for (i, e) in m.elements().iter().enumerate() {
            let class = e.class.as_ref().map(|c| format!("{c:?}")).unwrap_or_default();
            writeln!(s, "  {:>3}  d = {:<20} {:<12} rep {}", i, e.d.to_string(), class, e.rep).unwrap();
        }
        let w = m.len().saturating_sub(1).to_string().len().max(1);
        writeln!(s, "table:").unwrap();
        write!(s, "  {:>w$} |", "*").unwrap();
        for j in 0..m.len() {
            write!(s, " {j:>w$}").unwrap();
        }
        writeln!(s).unwrap();
        writeln!(s, "  {}", "-".repeat((w + 1) * (m.len() + 1) + 1)).unwrap();
        for (i, row) in m.table().iter().enumerate() {
            write!(s, "  {i:>w$} |").unwrap();
            for x in row {
                write!(s, " {x:>w$}").unwrap();
            }
            writeln!(s).unwrap();
        }
    } else {
        writeln!(s, "table omitted (more than {TABLE_CAP} elements); use --format json for the full dump").unwrap();
    }
    writeln!(s, "identity:    {}", m.identity()).unwrap();
    writeln!(s, "units:       {}", list(&m.units(), show)).unwrap();
    writeln!(s, "idempotents: {}", list(&m.idempotents(), show)).unwrap();
    s
}

fn list(v: &[usize], full: bool) -> String {
    if full || v.len() <= TABLE_CAP {
        format!("{v:?}")
    } else {
        format!("{} elements", v.len())
    }
}

fn model_text(s: &mut String, m: &LocalModel) {
    for (i, layer) in m.layers.iter().enumerate() {
        writeln!(s, "  layer {i} (exponent {}): {:?}", m.exponents[i], layer).unwrap();
    }
    for (i, maps) in m.chain_maps.iter().enumerate() {
        writeln!(s, "  map {i}: {maps:?}").unwrap();
    }
}

fn dr_verify(k: &NumberField, f: &Cycle, dump: Option<&Path>, json: bool) -> Result<String> {
    let s = dr_structured(k, f)?;
    let b = dr_bruteforce(k, f, norm_budget()?)?;
    let iso = dr_isomorphic(&s, &b).is_some();
    let units = s.unit_group_isomorphism().is_ok();
    let mut dump_matches = None;
    if let Some(path) = dump {
        let d: DRDump = read_json(path)?;
        let dk = parse_field(&d.field)?;
        if dk.id() != k.id() || d.cycle.to_cycle(dk.id())? != *f {
            return Err(Error::Validation(format!(
                "{} holds a dump for another field or cycle",
                path.display()
            )));
        }
        let dumped = FiniteMonoid::new(d.table.clone())?;
        dump_matches = Some(d.table.as_slice() == s.table() || dumped.isomorphism(s.monoid()).is_some());
    }
    let ok = iso && units && dump_matches.unwrap_or(true);
    let out = if json {
        let mut v: Value = json!({
            "field": field_name(k.id()),
            "cycle": CycleJson::from_cycle(f),
            "structured_size": s.len(),
            "bruteforce_size": b.len(),
            "isomorphic": iso,
            "units_match_ray_class_group": units,
        });
        if let Some(m) = dump_matches {
            v["dump_matches"] = json!(m);
        }
        v["ok"] = json!(ok);
        pretty(&v)
    } else {
        let mut t = String::new();
        writeln!(t, "structured:  {} elements", s.len()).unwrap();
        writeln!(t, "brute force: {} elements", b.len()).unwrap();
        writeln!(t, "isomorphic:  {}", if iso { "yes" } else { "no" }).unwrap();
        writeln!(t, "units = Cl(f): {}", if units { "yes" } else { "no" }).unwrap();
        if let Some(m) = dump_matches {
            writeln!(t, "dump table:  {}", if m { "matches" } else { "differs" }).unwrap();
        }
        t
    };
    if ok {
        Ok(out)
    } else {
        print!("{out}");
        Err(Error::Inconsistent(format!("DR({f}) constructions disagree")))
    }
}
