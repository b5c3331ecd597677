//! Command dispatch: load a system, run one engine capability, fill a report.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use dualcheck::duality::{
    default_max_order, double_test, five_step_test, self_adjoint_check, DualityReport, Verdict,
};
use dualcheck::field::{FieldError, MultiIndex};
use dualcheck::geom::demo::{fixture, run_demo, Fixture, FIXTURE_IDS};
use dualcheck::geom::euler_characteristic;
use dualcheck::janet::{
    cc, dim_jet, janet_fibers_finite_type, pp_reduce, rank_d, specialize, spencer_fibers,
    spencerize, JanetError, SymbolTableau,
};
use dualcheck::{OpMatrix, RatFunc, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::dsl::{self, parse_value, ParseError, SystemDecl};
use crate::report::{Check, FlagInfo, InputInfo, Report, Step};

/// Environment variable holding the number of `demo --all` workers.
pub const WORKERS_ENV: &str = "DUALCHECK_WORKERS";

pub const COMMANDS: &[&str] = &[
    "adjoint",
    "cc",
    "rank",
    "test",
    "test2",
    "param",
    "selfadjoint",
    "dims",
    "pp",
    "spencerize",
    "demo",
];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("{0}")]
    Usage(String),
    #[error("substitution failed: {0}")]
    Field(#[from] FieldError),
    #[error(transparent)]
    Janet(JanetError),
}

#[derive(Clone, Debug)]
pub enum Source {
    File(PathBuf),
    Demo(String),
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub max_order: Option<u32>,
    pub seed: Option<u64>,
    /// `sym=value` pairs, applied in order.
    pub subst: Vec<String>,
    pub row_scale: Option<String>,
    pub col_scale: Option<String>,
    /// Extra prolongations `r` for `pp` and `dims`.
    pub prolong: u32,
    /// Projection depth `s` for `pp`.
    pub project: u32,
    pub all: bool,
}

/// A loaded system, with its fixture when it came from the registry.
pub struct Loaded {
    pub decl: SystemDecl,
    pub fixture: Option<Fixture>,
}

pub fn load(source: &Source) -> Result<Loaded, CliError> {
    match source {
        Source::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                path: path.clone(),
                source: e,
            })?;
            let decl = dsl::parse(&text).map_err(|e| CliError::Parse {
                path: path.display().to_string(),
                source: e,
            })?;
            Ok(Loaded {
                decl,
                fixture: None,
            })
        }
        Source::Demo(id) => {
            let fx = fixture(id).ok_or_else(|| CliError::UnknownFixture(id.clone()))?;
            let decl = SystemDecl::from_operator(fx.id, &fx.operator, &fx.unknowns);
            Ok(Loaded {
                decl,
                fixture: Some(fx),
            })
        }
    }
}

/// Apply `sym=value` substitutions to the parameters of `decl`.
pub fn substitute(decl: &SystemDecl, subst: &[String]) -> Result<SystemDecl, CliError> {
    let mut decl = decl.clone();
    for s in subst {
        let (sym, value) = s
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--subst expects sym=value, got `{s}`")))?;
        let sym = sym.trim();
        if !decl.params.iter().any(|p| p == sym) {
            return Err(CliError::Usage(format!(
                "`{sym}` is not a parameter of `{}`",
                decl.name
            )));
        }
        let v = parse_value(value, &decl).map_err(|e| CliError::Parse {
            path: "--subst".into(),
            source: e,
        })?;
        let a = specialize(&decl.operator(), &[(sym.to_string(), v)])?;
        for (eq, row) in decl.equations.iter_mut().zip(a.into_rows()) {
            eq.row = row;
        }
        let used = decl.operator().params();
        decl.params.retain(|p| used.contains(p));
    }
    Ok(decl)
}

fn parse_scale(text: &str, decl: &SystemDecl) -> Result<Vec<Q>, CliError> {
    text.split(',')
        .map(|t| {
            let v = parse_value(t, decl).map_err(|e| CliError::Parse {
                path: "--scale".into(),
                source: e,
            })?;
            v.as_constant()
                .ok_or_else(|| CliError::Usage(format!("scale `{t}` is not a constant")))
        })
        .collect()
}

fn names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

fn step(
    decl: &SystemDecl,
    name: &str,
    a: &OpMatrix,
    unknowns: Vec<String>,
    rank: Option<usize>,
) -> Step {
    Step {
        name: name.to_string(),
        rows: a.nrows(),
        cols: a.ncols(),
        order: a.order(),
        rank,
        certified: None,
        operator: decl.format_rows(a, &unknowns),
        unknowns,
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::TorsionFree => "torsion_free",
        Verdict::HasTorsion => "has_torsion",
        Verdict::Inconclusive => "inconclusive",
    }
}

/// Steps, torsion generators and verdict of one five-step transcript.
fn duality_steps(report: &mut Report, decl: &SystemDecl, r: &DualityReport<Q>, prefix: &str) {
    let summaries = r.summaries();
    let rank_of = |key: &str| {
        summaries
            .iter()
            .find(|(k, _)| k == key)
            .and_then(|(_, s)| s.rank)
    };
    let eqs: Vec<String> = names("lambda", r.input.nrows());
    let mut add = |name: &str, a: &OpMatrix, unknowns: Vec<String>, certified: Option<bool>| {
        let mut st = step(decl, &format!("{prefix}{name}"), a, unknowns, rank_of(name));
        st.certified = certified;
        report.steps.push(st);
    };
    let dep = if r.input.ncols() == decl.dep.len() {
        decl.dep.clone()
    } else {
        names("y", r.input.ncols())
    };
    add("D1", &r.input, dep.clone(), None);
    add("ad(D1)", &r.step2, eqs, None);
    if let Some(c) = &r.step3 {
        add(
            "ad(D)",
            &c.cc,
            names("mu", c.cc.ncols()),
            Some(c.certified_complete),
        );
    }
    if let Some(d) = &r.step4 {
        add("D", d, names("phi", d.ncols()), None);
    }
    if let Some(c) = &r.step5 {
        add("D1'", &c.cc, dep.clone(), Some(c.certified_complete));
    }
    let namer = decl.namer();
    let gens: Vec<_> = r
        .torsion_generators
        .iter()
        .map(|g| {
            let z = OpMatrix::from_rows(r.input.n(), r.input.ncols(), vec![g.row.clone()]);
            json!({
                "generator": z.fmt_row(0, &dep, &namer),
                "autonomous": g.autonomous.fmt_with(&namer),
                "separating_solution": g.solution.is_some(),
            })
        })
        .collect();
    if !gens.is_empty() || r.verdict == Verdict::HasTorsion {
        report.value(&format!("{prefix}torsion_generators"), gens);
    }
    if let Some(d) = &r.step4 {
        report.value(&format!("{prefix}parametrization_order"), d.order());
    }
    report.value(&format!("{prefix}input_in_d1prime"), r.input_in_d1prime);
    if let Some(n) = &r.note {
        report.notes.push(format!("{prefix}{n}"));
    }
}

/// Map a bound failure to an inconclusive report, anything else to an error.
fn bounded<T>(report: &mut Report, r: Result<T, JanetError>) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(JanetError::BoundExceeded(k)) => {
            report.verdict = "inconclusive".into();
            report.definite = false;
            report.notes.push(format!("search bound {k} exceeded"));
            Ok(None)
        }
        Err(e) => Err(CliError::Janet(e)),
    }
}

/// A random polynomial vector with small integer coefficients.
fn random_field(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<RatFunc> {
    (0..k)
        .map(|_| {
            let mut f = RatFunc::zero();
            for mu in MultiIndex::all_up_to(n, 5) {
                let c = rng.gen_range(-3i64..=3);
                let mono = mu
                    .to_indices()
                    .iter()
                    .fold(RatFunc::int(c), |t, &i| t.mul(&RatFunc::x(i)));
                f = f.add(&mono);
            }
            f
        })
        .collect()
}

/// Randomized confirmation of an exact result: `D1 (D φ) = 0` on a random
/// polynomial `φ`, and the verdict at a random specialization of the
/// parameters (which may legitimately differ on a special locus).
fn cross_check(
    report: &mut Report,
    decl: &SystemDecl,
    r: &DualityReport<Q>,
    seed: u64,
    max: u32,
) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if let Some(d) = &r.step4 {
        let phi = random_field(&mut rng, d.n(), d.ncols());
        let ok = d
            .apply(&phi)
            .and_then(|y| r.input.apply(&y))
            .map(|v| v.iter().all(RatFunc::is_zero))
            .unwrap_or(false);
        report.value("cross_check_composition", ok);
    }
    if !decl.params.is_empty() {
        let point: Vec<(String, RatFunc)> = decl
            .params
            .iter()
            .map(|p| (p.clone(), RatFunc::int(rng.gen_range(1i64..=97))))
            .collect();
        let a = specialize(&r.input, &point)?;
        let at = five_step_test(&a, max).map_err(CliError::Janet)?;
        let shown: Vec<String> = point.iter().map(|(p, v)| format!("{p}={v}")).collect();
        report.value("cross_check_point", shown.join(", "));
        report.value("cross_check_verdict", verdict_str(at.verdict));
        if at.verdict != r.verdict {
            report.notes.push(
                "the verdict differs at the random point, which lies on a special locus".into(),
            );
        }
    }
    Ok(())
}

fn flag_info(opts: &Options) -> FlagInfo {
    FlagInfo {
        max_order: opts.max_order,
        subst: opts.subst.clone(),
        seed: opts.seed,
    }
}

/// Run `command` on the system named by `source`.
pub fn run(command: &str, source: Option<&Source>, opts: &Options) -> Result<Report, CliError> {
    if command == "demo" {
        return demo(source, opts);
    }
    if !COMMANDS.contains(&command) {
        return Err(CliError::Usage(format!(
            "unknown command `{command}`; expected one of {}",
            COMMANDS.join(", ")
        )));
    }
    let source = source
        .ok_or_else(|| CliError::Usage(format!("`{command}` needs a FILE.sys or --demo ID")))?;
    let loaded = load(source)?;
    let decl = substitute(&loaded.decl, &opts.subst)?;
    let a = decl.operator();
    let max = opts.max_order.unwrap_or_else(|| default_max_order(&a));
    let mut flags = flag_info(opts);
    flags.max_order = Some(max);
    let mut report = Report::new(command, Some(InputInfo::of(&decl)), flags);
    let eq_names: Vec<String> = decl.equations.iter().map(|e| e.name.clone()).collect();
    match command {
        "adjoint" => {
            report.verdict = "computed".into();
            report
                .steps
                .push(step(&decl, "D1", &a, decl.dep.clone(), None));
            report
                .steps
                .push(step(&decl, "ad(D1)", &a.adjoint(), eq_names, None));
        }
        "cc" => {
            if let Some(c) = bounded(&mut report, cc(&a, max))? {
                report.definite = c.certified_complete;
                report.verdict = if c.certified_complete {
                    "complete"
                } else {
                    "inconclusive"
                }
                .into();
                report
                    .steps
                    .push(step(&decl, "D1", &a, decl.dep.clone(), Some(c.ranks.0)));
                let mut st = step(&decl, "cc", &c.cc, eq_names, Some(c.ranks.1));
                st.certified = Some(c.certified_complete);
                report.steps.push(st);
                report.value("search_order", c.search_order);
                report.value("orders", c.orders());
            }
        }
        "rank" => {
            if let Some(k) = bounded(&mut report, rank_d(&a, max))? {
                report.verdict = "computed".into();
                report.value("rank", k);
                report.value("defect", a.ncols() - k);
            }
        }
        "test" | "param" => {
            if let Some(r) = bounded(&mut report, five_step_test(&a, max))? {
                report.verdict = verdict_str(r.verdict).into();
                report.definite = r.verdict != Verdict::Inconclusive;
                if command == "test" {
                    duality_steps(&mut report, &decl, &r, "");
                } else if let Some(d) = r
                    .parametrization()
                    .filter(|_| r.verdict == Verdict::TorsionFree)
                {
                    report
                        .steps
                        .push(step(&decl, "D", d, names("phi", d.ncols()), None));
                    report.value("parametrization_order", d.order());
                } else if r.verdict == Verdict::HasTorsion {
                    report.notes.push(format!(
                        "no parametrization: {} torsion generator(s); run `test` for details",
                        r.torsion_generators.len()
                    ));
                }
                if let Some(seed) = opts.seed {
                    cross_check(&mut report, &decl, &r, seed, max)?;
                }
            }
        }
        "test2" => {
            if let Some(r) = bounded(&mut report, double_test(&a, max))? {
                duality_steps(&mut report, &decl, &r.first, "1:");
                if let Some(s) = &r.second {
                    duality_steps(&mut report, &decl, s, "2:");
                }
                let reflexive = r.reflexive();
                report.verdict = verdict_str(r.first.verdict).into();
                report.definite = reflexive.is_some();
                report.value("reflexive", reflexive);
                if let Some(seed) = opts.seed {
                    cross_check(&mut report, &decl, &r.first, seed, max)?;
                }
            }
        }
        "selfadjoint" => {
            let (rows, cols) = match (&opts.row_scale, &opts.col_scale) {
                (None, None) => match loaded.fixture.as_ref().and_then(|f| f.pairing.clone()) {
                    Some(p) => p,
                    None => (
                        vec![Q::from_integer(1.into()); a.nrows()],
                        vec![Q::from_integer(1.into()); a.ncols()],
                    ),
                },
                (r, c) => {
                    let one = |k| vec![Q::from_integer(1.into()); k];
                    let rows = r
                        .as_deref()
                        .map(|t| parse_scale(t, &decl))
                        .transpose()?
                        .unwrap_or_else(|| one(a.nrows()));
                    let cols = c
                        .as_deref()
                        .map(|t| parse_scale(t, &decl))
                        .transpose()?
                        .unwrap_or_else(|| one(a.ncols()));
                    (rows, cols)
                }
            };
            if rows.len() != a.nrows() || cols.len() != a.ncols() {
                return Err(CliError::Usage(format!(
                    "scalings need {} row and {} column entries",
                    a.nrows(),
                    a.ncols()
                )));
            }
            let ok = self_adjoint_check(&a, &rows, &cols);
            report.verdict = ok.to_string();
            report.value(
                "row_scale",
                rows.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            );
            report.value(
                "col_scale",
                cols.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            );
            report
                .steps
                .push(step(&decl, "D1", &a, decl.dep.clone(), None));
            report
                .steps
                .push(step(&decl, "ad(D1)", &a.adjoint(), eq_names, None));
        }
        "dims" => dims(&mut report, &a, opts, max),
        "pp" => {
            let pp = pp_reduce(&a, opts.prolong, opts.project);
            report.verdict = "computed".into();
            report.value("q", pp.q);
            report.value("order", pp.order);
            report.value("chain", pp.chain());
        }
        "spencerize" => match spencerize(&a, max) {
            Ok(sp) => {
                report.verdict = "finite_type".into();
                let unknowns = sp.unknown_names(&decl.dep);
                let k = unknowns.len();
                report
                    .steps
                    .push(step(&decl, "spencerized", &sp.system, unknowns, None));
                report.value("solution_dimension", k);
                let fibers = spencer_fibers(a.n(), k);
                report.value("euler_characteristic", euler_characteristic(&fibers));
                report.value("spencer_fibers", fibers);
            }
            Err(JanetError::NotFiniteType(k)) => {
                report.verdict = "inconclusive".into();
                report.definite = false;
                report
                    .notes
                    .push(format!("not of finite type up to order {k}"));
            }
            Err(e) => bounded(&mut report, Err::<(), _>(e)).map(|_| ())?,
        },
        _ => unreachable!("checked above"),
    }
    Ok(report)
}

/// `dim J_q`, `dim R_q` and, for constant symbols, `dim g_q` from the order
/// of the system to `order + r`; Janet fibers for finite type.
fn dims(report: &mut Report, a: &OpMatrix, opts: &Options, max: u32) {
    report.verdict = "computed".into();
    let q = a.order().unwrap_or(0);
    let tab = SymbolTableau::from_operator(a).ok();
    let mut table = Vec::new();
    for r in 0..=opts.prolong.max(2) {
        let pp = pp_reduce(a, r, 0);
        table.push(json!({
            "q": q + r,
            "dim_j": dim_jet(a.n(), a.ncols(), q + r),
            "dim_r": pp.dims[0],
            "dim_g": tab.as_ref().map(|t| t.at_order(q + r).dim()),
        }));
    }
    report.value("table", table);
    if let Some(t) = &tab {
        if let Ok(f) = janet_fibers_finite_type(t, max) {
            report.value("euler_characteristic", euler_characteristic(&f));
            report.value("janet_fibers", f);
        }
    }
}

fn demo_checks(id: &str) -> Result<Vec<Check>, CliError> {
    let rows = run_demo(id).map_err(|e| match e {
        JanetError::Unsupported(_) if fixture(id).is_none() => {
            CliError::UnknownFixture(id.to_string())
        }
        e => CliError::Janet(e),
    })?;
    Ok(rows
        .into_iter()
        .map(|c| Check {
            fixture: id.to_string(),
            check: c.check,
            expected: c.expected,
            actual: c.actual,
            pass: c.pass,
        })
        .collect())
}

fn workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&k| k > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|k| k.get())
                .unwrap_or(1)
        })
}

type DemoResult = Result<Vec<Check>, String>;

/// Run every fixture on a pool of workers; results keep registry order.
fn demo_all() -> Vec<DemoResult> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<DemoResult>>> =
        FIXTURE_IDS.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|s| {
        for _ in 0..workers().min(FIXTURE_IDS.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(id) = FIXTURE_IDS.get(i) else { break };
                let r = demo_checks(id).map_err(|e| e.to_string());
                *slots[i].lock().expect("unpoisoned") = Some(r);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().expect("unpoisoned").expect("filled"))
        .collect()
}

fn demo(source: Option<&Source>, opts: &Options) -> Result<Report, CliError> {
    let mut report = Report::new("demo", None, flag_info(opts));
    if opts.all {
        for (id, r) in FIXTURE_IDS.iter().zip(demo_all()) {
            match r {
                Ok(checks) => report.checks.extend(checks),
                Err(e) => report.checks.push(Check {
                    fixture: id.to_string(),
                    check: "run".into(),
                    expected: "completed".into(),
                    actual: e,
                    pass: false,
                }),
            }
        }
        report.value("fixtures", FIXTURE_IDS);
    } else {
        let id = match source {
            Some(Source::Demo(id)) => id.clone(),
            Some(Source::File(p)) => p.display().to_string(),
            None => return Err(CliError::Usage("demo needs a fixture id or --all".into())),
        };
        let fx = fixture(&id).ok_or_else(|| CliError::UnknownFixture(id.clone()))?;
        let decl = SystemDecl::from_operator(fx.id, &fx.operator, &fx.unknowns);
        report.input = Some(InputInfo::of(&decl));
        report.value("title", fx.title);
        report.checks = demo_checks(&id)?;
    }
    let failed = report.checks.iter().filter(|c| !c.pass).count();
    report.verdict = if failed == 0 { "pass" } else { "fail" }.into();
    report.value("checks_failed", failed);
    report.value("checks_total", report.checks.len());
    Ok(report)
}
