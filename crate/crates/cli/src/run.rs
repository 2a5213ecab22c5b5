use std::collections::HashMap;
use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use hochkit::derived::{
    classical_grid, dualizing_complex, ext_grid, hochschild_cohomology, hochschild_homology, reduction_check, DerivedOpts, Engine,
    PairedDims,
};
use hochkit::modcx::{chain_homotopic_with, GradedDims, Term};
use hochkit::simpset::{
    check_relation, colimit_in_nerve, cone, dg_nerve_trunc, disjoint_union, homotopy_category, homotopy_pairs, horn, inner_kan_check,
    poset_diagram, standard, FinCategory, FinSimplicialSet, Nerve,
};
use hochkit::Error;

use crate::job::{Job, JobKind};
use crate::manifest::{InputError, Manifest};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    SkippedBudget,
    Error,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::SkippedBudget => "SKIPPED(budget)",
            Verdict::Error => "ERROR",
        })
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn pass_if(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub mode: String,
    pub degree: Option<i32>,
    pub lhs: String,
    pub rhs: String,
    pub verdict: Verdict,
}

impl Row {
    fn new(mode: impl Into<String>, degree: Option<i32>, lhs: impl ToString, rhs: impl ToString, verdict: Verdict) -> Self {
        Row { mode: mode.into(), degree, lhs: lhs.to_string(), rhs: rhs.to_string(), verdict }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub name: String,
    pub check: String,
    pub p: u32,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
    pub rows: Vec<Row>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub error: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub cases: Vec<CaseReport>,
    pub summary: Summary,
}

#[derive(Debug, Clone, Copy)]
pub struct RunOpts {
    pub jobs: usize,
    pub strict: bool,
    pub timestamp: bool,
}

impl Default for RunOpts {
    fn default() -> Self {
        RunOpts { jobs: 0, strict: false, timestamp: true }
    }
}

impl Report {
    pub fn exit_code(&self, strict: bool) -> i32 {
        if self.summary.error > 0 {
            2
        } else if self.summary.fail > 0 || (strict && self.summary.skipped > 0) {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        if let Some(ts) = self.timestamp {
            out += &format!("# {} {} generated at unix time {ts}\n", self.tool, self.version);
        }
        let timed = self.cases.iter().any(|c| c.wall_time.is_some());
        out += "case\tmode\tdegree\tlhs\trhs\tverdict";
        if timed {
            out += "\twall_time";
        }
        out.push('\n');
        for c in &self.cases {
            let rows: Vec<Row> = if c.rows.is_empty() {
                vec![Row::new(c.check.clone(), None, "-", if c.detail.is_empty() { "-".into() } else { c.detail.clone() }, c.verdict)]
            } else {
                c.rows.clone()
            };
            for r in rows {
                let deg = r.degree.map(|d| d.to_string()).unwrap_or_else(|| "-".into());
                out += &format!("{}\t{}\t{}\t{}\t{}\t{}", c.name, r.mode, deg, r.lhs, r.rhs, r.verdict);
                if timed {
                    out += &format!("\t{:.3}", c.wall_time.unwrap_or(0.0));
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Prepare every case (input errors abort before anything runs), then run
/// them on a pool of `jobs` threads, reporting in manifest order.
pub fn run_manifest(m: &Manifest, opts: RunOpts) -> Result<Report, InputError> {
    let jobs = m.cases.iter().map(|c| Job::prepare(c, m.p)).collect::<Result<Vec<_>, _>>()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build().map_err(|e| InputError(format!("thread pool: {e}")))?;
    let cases: Vec<CaseReport> = pool.install(|| jobs.par_iter().map(|j| run_case(j, opts.timestamp)).collect());
    let mut summary = Summary::default();
    for c in &cases {
        match c.verdict {
            Verdict::Pass => summary.pass += 1,
            Verdict::Fail => summary.fail += 1,
            Verdict::SkippedBudget => summary.skipped += 1,
            Verdict::Error => summary.error += 1,
        }
    }
    let timestamp =
        opts.timestamp.then(|| std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0));
    Ok(Report { tool: "hochkit".into(), version: env!("CARGO_PKG_VERSION").into(), timestamp, cases, summary })
}

type Outcome = hochkit::Result<(Vec<Row>, String)>;

pub fn run_case(job: &Job, timed: bool) -> CaseReport {
    let start = Instant::now();
    let res = catch_unwind(AssertUnwindSafe(|| execute(job)));
    let wall = start.elapsed().as_secs_f64();
    let (verdict, detail, rows) = match res {
        Ok(Ok((rows, detail))) => {
            let v = if rows.iter().all(|r| r.verdict == Verdict::Pass) { Verdict::Pass } else { Verdict::Fail };
            (v, detail, rows)
        }
        Ok(Err(e)) => {
            let v = match e {
                Error::BudgetExceeded { .. } => Verdict::SkippedBudget,
                Error::PreconditionUnverified(_) | Error::Violation(_) => Verdict::Fail,
                _ => Verdict::Error,
            };
            (v, e.to_string(), Vec::new())
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            (Verdict::Error, format!("internal error: {msg}"), Vec::new())
        }
    };
    CaseReport {
        name: job.spec.name.clone(),
        check: job.spec.check.to_string(),
        p: job.field.p(),
        verdict,
        detail,
        rows,
        wall_time: timed.then_some(wall),
    }
}

fn graded_rows(mode: &str, lhs: &GradedDims, rhs: &GradedDims) -> Vec<Row> {
    let lo = lhs.lo.min(rhs.lo);
    let hi = lhs.hi().max(rhs.hi());
    (lo..=hi).map(|d| Row::new(mode, Some(d), lhs.get(d), rhs.get(d), pass_if(lhs.get(d) == rhs.get(d)))).collect()
}

fn paired_rows(mode: &str, p: &PairedDims) -> Vec<Row> {
    graded_rows(mode, &p.lhs, &p.rhs)
}

fn execute(job: &Job) -> Outcome {
    let opts = &job.opts;
    match &job.kind {
        JobKind::Reduction { mode, setup, m, n } => {
            let p = reduction_check(*mode, setup, m, n, opts)?;
            Ok((paired_rows(&mode.to_string(), &p), String::new()))
        }
        JobKind::Hochschild { setup, coeff, homology, cross_check, expect } => {
            let run = |o: &DerivedOpts| {
                if *homology {
                    hochschild_homology(setup, coeff, o)
                } else {
                    hochschild_cohomology(setup, coeff, o)
                }
            };
            let cover = run(opts)?.dims;
            let mode = if *homology { "HH_*" } else { "HH^*" };
            let mut rows = Vec::new();
            if *cross_check {
                let bar = run(&opts.with_engine(Engine::Bar))?.dims;
                rows.extend(graded_rows(&format!("{mode} cover|bar"), &cover, &bar));
            }
            if let Some(e) = expect {
                let want = GradedDims::new(opts.window.lo, e.clone());
                rows.extend(graded_rows(&format!("{mode} expected"), &cover, &want));
            }
            if rows.is_empty() {
                rows = (cover.lo..=cover.hi()).map(|d| Row::new(mode, Some(d), cover.get(d), "-", Verdict::Pass)).collect();
            }
            Ok((rows, String::new()))
        }
        JobKind::Dualizing { setup, require_iso } => {
            let d = dualizing_complex(setup, opts)?;
            let dim_d = d.module.dim();
            let want = GradedDims::new(0, vec![dim_d]).window(d.oracle.lo, d.oracle.hi());
            let mut rows = graded_rows("oracle", &d.oracle, &want);
            if !d.oracle_agrees() {
                rows.push(Row::new("oracle", None, &d.oracle, dim_d, Verdict::Fail));
            }
            let found = d.iso.is_some();
            rows.push(Row::new(
                "iso D = S",
                None,
                if found { "found" } else { "none" },
                if *require_iso { "required" } else { "optional" },
                pass_if(found || !require_iso),
            ));
            Ok((rows, format!("dim D = {dim_d}")))
        }
        JobKind::AdjointAssoc { algebras, triples, seed, max_dim } => {
            let grid = classical_grid(algebras, *triples, *seed, *max_dim, &opts.budget)?;
            let mut rows = Vec::new();
            for (i, g) in grid.iter().enumerate() {
                let a = &g.adjoint;
                rows.push(Row::new(
                    "adjoint",
                    Some(i as i32),
                    format!("dims {:?} hom {}", g.dims, a.lhs_dim),
                    format!("{} bij={} bil={} nat={}", a.rhs_dim, a.bijective, a.bilinear, a.natural_x && a.natural_z),
                    pass_if(a.passed()),
                ));
                let s = &g.associator;
                rows.push(Row::new(
                    "associator",
                    Some(i as i32),
                    s.lhs_dim,
                    format!("{} inv={} bil={}", s.rhs_dim, s.inverse_ok, s.bilinear),
                    pass_if(s.passed()),
                ));
            }
            Ok((rows, format!("seed {seed}")))
        }
        JobKind::ExtAdjointAssoc { lefts, middles, triples, seed, max_dim } => {
            let grid = ext_grid(lefts, middles, *triples, *seed, *max_dim, opts)?;
            let rows = grid
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    let mode = if g.unit { "ext unit" } else { "ext" };
                    Row::new(mode, Some(i as i32), &g.ext.lhs, &g.ext.rhs, pass_if(g.ext.equal))
                })
                .collect();
            Ok((rows, format!("seed {seed}")))
        }
        JobKind::NerveSuite { categories, up_to, colimits } => {
            let mut rows = Vec::new();
            for (name, c) in categories {
                rows.push(nerve_row(name, c, *up_to, opts)?);
            }
            if *colimits {
                rows.extend(colimit_rows(opts)?);
            }
            Ok((rows, String::new()))
        }
        JobKind::QuasicatSuite { categories, dg, up_to } => {
            let mut sets: Vec<(String, FinSimplicialSet)> = Vec::new();
            for (name, c) in categories {
                sets.push((format!("N({name})"), Nerve::new(c, (*up_to).max(3), &opts.budget)?.sset));
            }
            for (i, objs) in dg.iter().enumerate() {
                sets.push((format!("dg{i}"), dg_nerve_trunc(objs, 3, &opts.budget)?.sset));
            }
            let mut rows = Vec::new();
            for (name, k) in &sets {
                let kan = inner_kan_check(k, (*up_to).min(k.top()))?;
                let rc = check_relation(k, &homotopy_pairs(k));
                let hc = homotopy_category(k);
                let ok = kan.is_quasicategory && rc.holds() && hc.is_ok();
                rows.push(Row::new(
                    format!("quasicat {name}"),
                    None,
                    format!("inner={} unique={}", kan.is_quasicategory, kan.unique),
                    format!(
                        "refl={} sym={} trans={} composition={}",
                        rc.reflexive,
                        rc.symmetric,
                        rc.transitive,
                        if hc.is_ok() { "well-defined" } else { "ill-defined" }
                    ),
                    pass_if(ok),
                ));
            }
            Ok((rows, String::new()))
        }
        JobKind::DgnerveSuite { objects, top } => {
            let dg = dg_nerve_trunc(objects, *top, &opts.budget)?;
            let hc = homotopy_category(&dg.sset)?;
            let mut by_pair: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
            for e in 0..dg.sset.count(1) {
                by_pair.entry(dg.endpoints(e)).or_default().push(e);
            }
            let mut pairs: Vec<_> = by_pair.into_iter().collect();
            pairs.sort();
            let mut rows = Vec::new();
            for ((a, b), es) in pairs {
                let maps = es.iter().map(|&e| dg.chain_map(e)).collect::<hochkit::Result<Vec<_>>>()?;
                let mut agree = true;
                let mut reps: Vec<usize> = Vec::new();
                for (i, f) in maps.iter().enumerate() {
                    let mut found = false;
                    for &r in &reps {
                        let same = chain_homotopic_with(f, &maps[r], &opts.budget)?.is_some();
                        agree &= same == (hc.class_of[es[i]] == hc.class_of[es[r]]);
                        found |= same;
                    }
                    if !found {
                        reps.push(i);
                    }
                }
                let classes: std::collections::BTreeSet<usize> = es.iter().map(|&e| hc.class_of[e]).collect();
                rows.push(Row::new(
                    format!("hom({a},{b})"),
                    None,
                    format!("{} classes of {} maps", classes.len(), es.len()),
                    format!("{} chain-homotopy classes", reps.len()),
                    pass_if(agree && classes.len() == reps.len()),
                ));
            }
            Ok((rows, format!("simplices {:?}", dg.sset.counts())))
        }
    }
}

fn nerve_row(name: &str, c: &FinCategory, up_to: usize, opts: &DerivedOpts) -> hochkit::Result<Row> {
    let nv = Nerve::new(c, up_to.max(3), &opts.budget)?;
    nv.sset.validate().map_err(|v| Error::Violation(v.to_string()))?;
    let kan = inner_kan_check(&nv.sset, up_to)?;
    let hc = homotopy_category(&nv.sset)?;
    let obj: Vec<usize> = (0..c.num_objects()).collect();
    let mor: Vec<usize> = (0..c.num_morphisms()).map(|f| hc.class_of[f]).collect();
    let iso = c.iso_via(&hc.category, &obj, &mor);
    Ok(Row::new(
        format!("nerve {name}"),
        None,
        format!("horns={} unique={}", kan.horns_checked, kan.unique),
        format!("h(N(C)) = C: {iso}"),
        pass_if(kan.is_quasicategory && kan.unique && iso),
    ))
}

fn colimit_rows(opts: &DerivedOpts) -> hochkit::Result<Vec<Row>> {
    let b = &opts.budget;
    let lat = FinCategory::subsets(2);
    let nv = Nerve::new(&lat, 3, b)?;
    let pt = standard(0, 3);
    let name = |o: Option<usize>| o.map(|i| lat.objects[i].clone()).unwrap_or_else(|| "none".into());
    let mut rows = Vec::new();
    let cases: Vec<(&str, FinSimplicialSet, Vec<usize>, usize)> = vec![
        ("coproduct", disjoint_union(&pt, &pt)?, vec![1, 2], 3),
        ("pushout", horn(2, 0, 3)?, vec![0, 1, 2], 3),
        ("empty", FinSimplicialSet::empty(3), vec![], 0),
    ];
    for (what, k, vmap, want) in cases {
        let p = poset_diagram(&k, &nv, &vmap)?;
        let got = colimit_in_nerve(&p, &nv, b)?.apex();
        rows.push(Row::new(format!("colimit {what}"), None, name(got), name(Some(want)), pass_if(got == Some(want))));
    }
    for n in 0..=3usize {
        let k = standard(n, 4);
        let c = cone(&k);
        let formula: Vec<usize> = (0..=4).map(|m| 1 + (0..=m).map(|j| k.count(j)).sum::<usize>()).collect();
        rows.push(Row::new(
            format!("cone Δ^{n}"),
            None,
            format!("{:?}", c.counts()),
            format!("{formula:?}"),
            pass_if(c.counts() == formula),
        ));
    }
    Ok(rows)
}
