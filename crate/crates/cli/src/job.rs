use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use hochkit::algebra::{AlgebraMap, AlgebraRef, FreeBasisCert};
use hochkit::derived::{env_regular, named_module, DerivedOpts, Mode, SetupSigma, Window};
use hochkit::exactla::{Budget, Fp};
use hochkit::modcx::{AlgebraSpec, ChainComplex, ComplexJson, Module, ModuleJson};
use hochkit::simpset::{category_zoo, FinCategory};

use crate::manifest::{CaseSpec, Check, InputError};

type In<T> = Result<T, InputError>;

/// A case with every input built and validated.
pub struct Job {
    pub spec: CaseSpec,
    pub field: Fp,
    pub opts: DerivedOpts,
    pub kind: JobKind,
}

pub enum JobKind {
    Reduction { mode: Mode, setup: SetupSigma, m: Module, n: Module },
    Hochschild { setup: SetupSigma, coeff: Module, homology: bool, cross_check: bool, expect: Option<Vec<usize>> },
    Dualizing { setup: SetupSigma, require_iso: bool },
    AdjointAssoc { algebras: Vec<AlgebraRef>, triples: usize, seed: u64, max_dim: usize },
    ExtAdjointAssoc { lefts: Vec<AlgebraRef>, middles: Vec<AlgebraRef>, triples: usize, seed: u64, max_dim: usize },
    NerveSuite { categories: Vec<(String, FinCategory)>, up_to: usize, colimits: bool },
    QuasicatSuite { categories: Vec<(String, FinCategory)>, dg: Vec<Vec<ChainComplex<Module>>>, up_to: usize },
    DgnerveSuite { objects: Vec<ChainComplex<Module>>, top: usize },
}

fn err<T>(case: &str, msg: impl std::fmt::Display) -> In<T> {
    Err(InputError(format!("case '{case}': {msg}")))
}

fn field_of(case: &str, v: &Value, key: &str) -> In<Value> {
    match v.get(key) {
        Some(x) => Ok(x.clone()),
        None => err(case, format!("missing input '{key}'")),
    }
}

fn parse<T: for<'de> Deserialize<'de>>(case: &str, key: &str, v: Value) -> In<T> {
    serde_json::from_value(v).map_err(|e| InputError(format!("case '{case}': input '{key}': {e}")))
}

fn opt<T: for<'de> Deserialize<'de>>(case: &str, v: &Value, key: &str, default: T) -> In<T> {
    match v.get(key) {
        Some(x) => parse(case, key, x.clone()),
        None => Ok(default),
    }
}

fn algebra(case: &str, v: Value, field: Fp) -> In<AlgebraRef> {
    let spec: AlgebraSpec = parse(case, "algebra", v)?;
    spec.resolve(field).map(Arc::new).map_err(|e| InputError(format!("case '{case}': {e}")))
}

fn algebras(case: &str, v: Value, field: Fp) -> In<Vec<AlgebraRef>> {
    let list: Vec<Value> = parse(case, "algebras", v)?;
    list.into_iter().map(|a| algebra(case, a, field)).collect()
}

fn setup(case: &str, inputs: &Value, field: Fp) -> In<SetupSigma> {
    let s = algebra(case, field_of(case, inputs, "S")?, field)?;
    let Some(r) = inputs.get("R") else {
        return SetupSigma::over_ground(s).map_err(|e| InputError(format!("case '{case}': {e}")));
    };
    let r = algebra(case, r.clone(), field)?;
    let images: Vec<Vec<u32>> = parse(case, "map", field_of(case, inputs, "map")?)?;
    let basis: Vec<Vec<u32>> = parse(case, "basis", field_of(case, inputs, "basis")?)?;
    let reduce = |vs: Vec<Vec<u32>>| vs.into_iter().map(|v| v.into_iter().map(|x| x % field.p()).collect()).collect::<Vec<_>>();
    let map = AlgebraMap::from_images(r, s, &reduce(images))?;
    let cert = FreeBasisCert::new(map, reduce(basis))?;
    Ok(SetupSigma::new(cert)?)
}

fn module(case: &str, key: &str, setup: &SetupSigma, v: Option<&Value>, field: Fp) -> In<Module> {
    match v {
        None => err(case, format!("missing input '{key}'")),
        Some(Value::String(name)) => named_module(setup, name).map_err(|e| InputError(format!("case '{case}': {key}: {e}"))),
        Some(x) => {
            let j: ModuleJson = parse(case, key, x.clone())?;
            let m = j.build(field).map_err(|e| InputError(format!("case '{case}': {key}: {e}")))?;
            m.over(setup.s().clone()).map_err(|e| InputError(format!("case '{case}': {key}: {e}")))
        }
    }
}

fn categories(case: &str, v: Option<&Value>) -> In<Vec<(String, FinCategory)>> {
    let zoo = || category_zoo().into_iter().map(|(n, c)| (n.to_string(), c)).collect::<Vec<_>>();
    match v {
        None => Ok(zoo()),
        Some(Value::String(s)) if s == "zoo" => Ok(zoo()),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, it)| match it {
                Value::String(name) => zoo()
                    .into_iter()
                    .find(|(n, _)| n == name)
                    .ok_or_else(|| InputError(format!("case '{case}': unknown zoo category '{name}'"))),
                other => {
                    let c: FinCategory = parse(case, "categories", other.clone())?;
                    c.validate().map_err(|e| InputError(format!("case '{case}': category {i}: {e}")))?;
                    Ok((format!("inline{i}"), c))
                }
            })
            .collect(),
        Some(_) => err(case, "categories must be \"zoo\" or a list"),
    }
}

/// Three small complexes over k: k[0], the cone of the identity on k, and
/// k in degrees -1 and 0 with zero differential.
pub fn default_dg_objects(field: Fp) -> Vec<ChainComplex<Module>> {
    let k = Arc::new(hochkit::algebra::Algebra::ground(field));
    let one = || Module::free(k.clone(), 1);
    let id = hochkit::exactla::Matrix::identity(field, 1);
    let zero = hochkit::exactla::Matrix::zeros(field, 1, 1);
    vec![
        ChainComplex::concentrated(one(), 0),
        ChainComplex::new(0, vec![one(), one()], vec![id]).expect("complex"),
        ChainComplex::new(-1, vec![one(), one()], vec![zero]).expect("complex"),
    ]
}

fn complexes(case: &str, v: Option<&Value>, field: Fp) -> In<Vec<ChainComplex<Module>>> {
    match v {
        None => Ok(default_dg_objects(field)),
        Some(Value::String(s)) if s == "default" => Ok(default_dg_objects(field)),
        Some(x) => {
            let js: Vec<ComplexJson> = parse(case, "objects", x.clone())?;
            let cs = js.iter().map(|j| j.build(field).map_err(|e| InputError(format!("case '{case}': {e}")))).collect::<In<Vec<_>>>()?;
            if cs.is_empty() {
                return err(case, "need at least one complex");
            }
            Ok(cs)
        }
    }
}

pub fn budget_for(spec: &CaseSpec) -> Budget {
    let env = std::env::var("HOCHKIT_BUDGET").ok().and_then(|s| s.trim().parse().ok());
    env.or(spec.budget).map(Budget::new).unwrap_or_default()
}

impl Job {
    pub fn prepare(spec: &CaseSpec, default_p: u32) -> In<Job> {
        let case = spec.name.as_str();
        let field = Fp::new(spec.p.unwrap_or(default_p)).map_err(|e| InputError(format!("case '{case}': {e}")))?;
        let mut opts = DerivedOpts::default().with_budget(budget_for(spec));
        if let Some((lo, hi)) = spec.window {
            if lo > hi {
                return err(case, "window lo > hi");
            }
            opts.window = Window { lo, hi };
        }
        opts.length = spec.length;
        let inputs = &spec.inputs;
        let kind = match spec.check {
            Check::ReductionCo | Check::ReductionHo => {
                let st = setup(case, inputs, field)?;
                let m = module(case, "M", &st, inputs.get("M"), field)?;
                let n = module(case, "N", &st, inputs.get("N"), field)?;
                let mode = if spec.check == Check::ReductionCo { Mode::Co } else { Mode::Ho };
                JobKind::Reduction { mode, setup: st, m, n }
            }
            Check::Hochschild => {
                let st = setup(case, inputs, field)?;
                let coeff_name: String = opt(case, inputs, "coeff", "S".to_string())?;
                let coeff = match coeff_name.as_str() {
                    "S" => st.s_module.clone(),
                    "Se" => env_regular(&st),
                    "k" => Module::residue(st.env_algebra().clone()).map_err(|e| InputError(format!("case '{case}': {e}")))?,
                    other => return err(case, format!("unknown coefficient '{other}' (S, Se, or k)")),
                };
                let kind: String = opt(case, inputs, "kind", "cohomology".to_string())?;
                let homology = match kind.as_str() {
                    "cohomology" => false,
                    "homology" => true,
                    other => return err(case, format!("unknown kind '{other}'")),
                };
                let cross_check = opt(case, inputs, "cross_check", false)?;
                let expect = opt(case, inputs, "expect", None)?;
                JobKind::Hochschild { setup: st, coeff, homology, cross_check, expect }
            }
            Check::Dualizing => {
                let st = setup(case, inputs, field)?;
                JobKind::Dualizing { setup: st, require_iso: opt(case, inputs, "require_iso", false)? }
            }
            Check::AdjointAssoc => JobKind::AdjointAssoc {
                algebras: algebras(case, field_of(case, inputs, "algebras")?, field)?,
                triples: opt(case, inputs, "triples", 20)?,
                seed: opt(case, inputs, "seed", 0)?,
                max_dim: opt(case, inputs, "max_dim", 5)?,
            },
            Check::ExtAdjointAssoc => JobKind::ExtAdjointAssoc {
                lefts: algebras(case, field_of(case, inputs, "A")?, field)?,
                middles: algebras(case, field_of(case, inputs, "BC")?, field)?,
                triples: opt(case, inputs, "triples", 10)?,
                seed: opt(case, inputs, "seed", 0)?,
                max_dim: opt(case, inputs, "max_dim", 3)?,
            },
            Check::NerveSuite => JobKind::NerveSuite {
                categories: categories(case, inputs.get("categories"))?,
                up_to: opt(case, inputs, "up_to", 4)?,
                colimits: opt(case, inputs, "colimits", false)?,
            },
            Check::QuasicatSuite => {
                let dg = match inputs.get("dg_objects") {
                    None => vec![default_dg_objects(field)],
                    Some(Value::Array(list)) => list.iter().map(|x| complexes(case, Some(x), field)).collect::<In<Vec<_>>>()?,
                    Some(_) => return err(case, "dg_objects must be a list of complex lists"),
                };
                JobKind::QuasicatSuite {
                    categories: categories(case, inputs.get("categories"))?,
                    dg,
                    up_to: opt(case, inputs, "up_to", 3)?,
                }
            }
            Check::DgnerveSuite => {
                let top: usize = opt(case, inputs, "top", 3)?;
                if !(2..=3).contains(&top) {
                    return err(case, "top must be 2 or 3");
                }
                JobKind::DgnerveSuite { objects: complexes(case, inputs.get("objects"), field)?, top }
            }
        };
        Ok(Job { spec: spec.clone(), field, opts, kind })
    }
}
