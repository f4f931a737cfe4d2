//! Named check suites over a loaded instance, producing deterministic JSON
//! reports.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::base::ChartSet;
use crate::bundle::{check_bundle_axioms, check_exchange_law, Bundle, BundleMorphism};
use crate::crossed::{check_tau_image_normal, validate_peiffer};
use crate::error::{Error, Result};
use crate::functorial::{
    check_endpoint_dependence, check_naturality, check_product_relation, check_theta_functorial, live_pairs, live_triples,
    FunctorialCocycle,
};
use crate::gerbal::{check_second_gerbe, check_tower, derive_tower, validate_gerbal};
use crate::instance::{validate_instance, Instance};
use crate::oracle::{compare_with_oracle, IdealOracle};
use crate::quotient::{build_quotient, check_classical_cocycle, check_jh_normal, check_q_functor, QuotientCatGroup, Scope, Variant};
use crate::report::Report;

pub const DEFAULT_MAX_LEN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Peiffer,
    Gerbal,
    Functorial,
    Naturality,
    Quotient,
    Bundle,
    Oracle,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 8] = ["peiffer", "gerbal", "functorial", "naturality", "quotient", "bundle", "oracle", "all"];

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        const ALL: [Suite; 8] = [
            Suite::Peiffer,
            Suite::Gerbal,
            Suite::Functorial,
            Suite::Naturality,
            Suite::Quotient,
            Suite::Bundle,
            Suite::Oracle,
            Suite::All,
        ];
        ALL.into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'; known: {}", Self::NAMES.join(", ")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub law: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Every violation; diagnostic mode only.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<String>,
    /// Rewriting chains behind equality verdicts; diagnostic mode only.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub status: Status,
    pub summary: BTreeMap<String, Value>,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Sorted keys, two-space indent, trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        let mut out = serde_json::to_string_pretty(&value).expect("values serialize");
        out.push('\n');
        out
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub max_len: usize,
    pub diagnostic: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self { max_len: DEFAULT_MAX_LEN, diagnostic: false }
    }
}

struct Builder {
    opts: Options,
    checks: Vec<CheckResult>,
    summary: BTreeMap<String, Value>,
}

impl Builder {
    fn new(opts: Options) -> Self {
        Self { opts, checks: Vec::new(), summary: BTreeMap::new() }
    }

    fn add(&mut self, id: impl Into<String>, law: &str, report: &Report) {
        self.add_traced(id, law, report, Vec::new());
    }

    fn add_traced(&mut self, id: impl Into<String>, law: &str, report: &Report, trace: Vec<String>) {
        let status = if report.is_ok() { Status::Pass } else { Status::Fail };
        let witness = report.first().map(|v| {
            let more = report.len() - 1;
            let head = format!("{}: {}", v.law, v.witness);
            if more == 0 { head } else { format!("{head} (+{more} more)") }
        });
        let violations = if self.opts.diagnostic && report.len() > 1 {
            report.violations.iter().map(|v| format!("{}: {}", v.law, v.witness)).collect()
        } else {
            Vec::new()
        };
        let trace = if self.opts.diagnostic { trace } else { Vec::new() };
        self.checks.push(CheckResult { id: id.into(), law: law.to_string(), status, witness, violations, trace });
    }

    fn error(&mut self, id: &str, law: &str, e: &Error) {
        let mut r = Report::new();
        r.push("error", e.to_string());
        self.add(id, law, &r);
    }

    fn note(&mut self, key: &str, value: Value) {
        self.summary.insert(key.to_string(), value);
    }

    fn finish(mut self, suite: Suite) -> SuiteReport {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
        let status = if self.checks.iter().all(|c| c.status == Status::Pass) { Status::Pass } else { Status::Fail };
        SuiteReport { suite: suite.name().to_string(), status, summary: self.summary, checks: self.checks }
    }
}

fn pair_id(inst: &Instance, i: usize, k: usize) -> String {
    format!("{},{}", inst.cover.chart_id(i), inst.cover.chart_id(k))
}

/// The structure-group variant used downstream: the full quotient when the
/// boundary map is onto, otherwise the τ-image quotient.
pub fn pipeline_variant(inst: &Instance) -> Variant {
    if inst.chain.outer().boundary_surjective() {
        Variant::Full
    } else {
        Variant::Tau
    }
}

/// Structural validation as a report; every group, hom, action, both
/// modules, the cover and the gerbal relation.
pub fn validation_report(inst: &Instance, opts: Options) -> SuiteReport {
    let mut b = Builder::new(opts);
    b.add("validate.structure", "group, action and crossed-module axioms; cover; gerbal relation", &validate_instance(inst));
    b.note("instance", json!(inst.meta.name));
    let mut report = b.finish(Suite::All);
    report.suite = "validate".to_string();
    report
}

/// Runs `suite` on an instance that passed [`validate_instance`].
pub fn run_suite(inst: &Instance, suite: Suite, opts: Options) -> Result<SuiteReport> {
    if suite == Suite::Oracle && !inst.cover.is_directed() {
        return Err(Error::Precondition("the oracle suite needs a directed base".into()));
    }
    let mut b = Builder::new(opts);
    b.note("instance", json!(inst.meta.name));
    b.note("max_path_len", json!(opts.max_len));
    let all = suite == Suite::All;
    if all || suite == Suite::Peiffer {
        peiffer(inst, &mut b);
    }
    if all || suite == Suite::Gerbal {
        gerbal(inst, &mut b);
    }
    let fc = FunctorialCocycle::new(inst.cocycle.clone());
    if all || suite == Suite::Functorial {
        functorial(inst, &fc, &mut b);
    }
    if all || suite == Suite::Naturality {
        naturality(inst, &fc, &mut b);
    }
    let needs_q = all || matches!(suite, Suite::Quotient | Suite::Bundle | Suite::Oracle);
    let q = if needs_q { quotient(inst, &fc, &mut b, all || suite == Suite::Quotient) } else { None };
    let needs_bundle = all || matches!(suite, Suite::Bundle | Suite::Oracle);
    if let (true, Some(q)) = (needs_bundle, q) {
        match Bundle::new(fc.clone(), q, opts.max_len) {
            Ok(bundle) => {
                if all || suite == Suite::Bundle {
                    bundle_checks(&bundle, &mut b);
                }
                if suite == Suite::Oracle || (all && inst.cover.is_directed()) {
                    oracle_checks(&bundle, &mut b);
                }
            }
            Err(e) => b.error("bundle.construction", "classical cocycle needed to glue the bundle", &e),
        }
    }
    if all && !inst.cover.is_directed() {
        b.note("oracle", json!("skipped: undirected base"));
    }
    Ok(b.finish(suite))
}

fn peiffer(inst: &Instance, b: &mut Builder) {
    for (name, cm) in [("outer", inst.chain.outer()), ("inner", inst.chain.inner())] {
        b.add(format!("peiffer.{name}"), "Peiffer identities", &validate_peiffer(cm));
        b.add(format!("peiffer.{name}.boundary-image"), "boundary image is normal", &check_tau_image_normal(cm));
    }
}

fn gerbal(inst: &Instance, b: &mut Builder) {
    let gc = &inst.cocycle;
    let tower = derive_tower(gc);
    b.add("gerbal.relation", "h_im = τ′(j_ikm) h_ik h_km", &validate_gerbal(gc));
    b.add("gerbal.tower", "g = τ(h), h_ikm = τ′(j_ikm)", &check_tower(gc, &tower));
    b.add("gerbal.second", "h_ijm α_{g_ij}(h_jkm) = h_ikm h_ijk", &check_second_gerbe(gc, &tower));
}

fn functorial(inst: &Instance, fc: &FunctorialCocycle, b: &mut Builder) {
    let max_len = b.opts.max_len;
    for (i, k) in live_pairs(&inst.cover) {
        let id = pair_id(inst, i, k);
        b.add(format!("functorial.theta({id})"), "θ_ik is a functor", &check_theta_functorial(fc, i, k, max_len));
        b.add(format!("functorial.endpoints({id})"), "θ_ik depends only on endpoints", &check_endpoint_dependence(fc, i, k, max_len));
    }
}

fn naturality(inst: &Instance, fc: &FunctorialCocycle, b: &mut Builder) {
    let max_len = b.opts.max_len;
    for (i, k, m) in live_triples(&inst.cover) {
        let id = format!("{},{}", pair_id(inst, i, k), inst.cover.chart_id(m));
        let report = check_naturality(fc, i, k, m, max_len);
        b.add(format!("naturality.square({id})"), "T_ikm: θ_ik θ_km ⇒ θ_im is natural", &report.filtered("naturality.square"));
        b.add(format!("naturality.target({id})"), "t(T_ikm) = g_im", &report.filtered("naturality.target"));
        b.add(format!("naturality.product({id})"), "Θ_ikm θ_ik θ_km = θ_im", &check_product_relation(fc, i, k, m, max_len));
    }
}

fn quotient(inst: &Instance, fc: &FunctorialCocycle, b: &mut Builder, report: bool) -> Option<QuotientCatGroup> {
    let variant = pipeline_variant(inst);
    if report {
        b.add("quotient.jh-normal", "J_H is normal in H ⋊ τ(H)", &check_jh_normal(&inst.chain, Scope::Tau));
        b.note("quotient_variant", json!(variant.to_string()));
    }
    let q = match build_quotient(Arc::clone(&inst.chain), variant) {
        Ok(q) => q,
        Err(e) => {
            b.error("quotient.descent", "s, t, ∘ and products descend to cosets", &e);
            return None;
        }
    };
    if report {
        b.add("quotient.descent", "s, t, ∘ and products descend to cosets", &Report::new());
        b.add("quotient.functor", "the quotient map is a functor", &check_q_functor(&q));
        b.note("quotient_objects", json!(q.obj_count()));
        b.note("quotient_morphisms", json!(q.mor_count()));
        match check_classical_cocycle(fc, &q, b.opts.max_len) {
            Ok(r) => b.add("quotient.classical-cocycle", "ḡ and θ̄ are genuine cocycles", &r),
            Err(e) => b.error("quotient.classical-cocycle", "ḡ and θ̄ are genuine cocycles", &e),
        }
    }
    Some(q)
}

const BUNDLE_CHECKS: [(&str, &str); 5] = [
    ("objects", "gluing of objects is an equivalence relation"),
    ("projection", "π is a surjective functor"),
    ("action", "free right action preserving π"),
    ("trivialization", "local trivializations are equivariant isomorphisms"),
    ("exchange", "exchange law for the action"),
];

fn bundle_checks(bundle: &Bundle, b: &mut Builder) {
    let summary = check_bundle_axioms(bundle, b.opts.max_len);
    let mut grouped: BTreeMap<&str, Report> = BTreeMap::new();
    for v in &summary.report.violations {
        let key = v.law.split('.').next().unwrap_or(&v.law);
        let key = BUNDLE_CHECKS.iter().map(|(k, _)| *k).find(|k| *k == key).unwrap_or("objects");
        grouped.entry(key).or_default().push(&v.law, &v.witness);
    }
    grouped.entry("exchange").or_default().extend(check_exchange_law(bundle.quotient()));
    let trace = if b.opts.diagnostic { lift_traces(bundle) } else { Vec::new() };
    for (key, law) in BUNDLE_CHECKS {
        let report = grouped.remove(key).unwrap_or_default();
        let t = if key == "projection" { trace.clone() } else { Vec::new() };
        b.add_traced(format!("bundle.{key}"), law, &report, t);
    }
    b.note("bundle_objects", json!(summary.object_count));
    b.note("bundle_fiber_sizes", json!(summary.fiber_sizes));
    b.note("bundle_sampled_morphisms", json!(summary.sampled_morphisms));
    b.note("bundle_distinct_morphisms", json!(summary.distinct_morphisms));
}

/// For each two-step walk inside one chart: the lift through unit edges
/// against the single edge over the whole walk.
fn lift_traces(bundle: &Bundle) -> Vec<String> {
    let c = bundle.cover();
    let mut out = Vec::new();
    for walk in crate::base::enumerate_walks(c, 2).into_iter().filter(|w| w.len() == 2) {
        let Some(chart) = c.charts_containing_walk(&walk).first() else { continue };
        let Ok(lift) = bundle.lift_walk(&walk) else { continue };
        let x = bundle.source(&lift);
        let q = bundle.quotient();
        let fiber = bundle.fiber_in(x, chart);
        let Ok(single) = bundle.trivialize_mor(chart, ChartSet::single(chart), &walk, q.identity(fiber)) else { continue };
        if let Some(w) = bundle.equality_witness(&lift, &single) {
            out.extend(bundle.render_witness(&lift, &single, &w));
        }
    }
    out
}

fn oracle_checks(bundle: &Bundle, b: &mut Builder) {
    let oracle = IdealOracle::build(bundle, b.opts.max_len);
    let cmp = compare_with_oracle(bundle, &oracle);
    let mut agreement = Report::new();
    for &(x, y, truth) in &cmp.disagreements {
        agreement.push(
            "oracle.agreement",
            format!(
                "{} vs {}: ideal membership says {}, normal forms say {}",
                bundle.fmt_mor(&oracle.morphism(x)),
                bundle.fmt_mor(&oracle.morphism(y)),
                if truth { "equal" } else { "unequal" },
                if truth { "unequal" } else { "equal" }
            ),
        );
    }
    let trace = if b.opts.diagnostic { class_traces(bundle, &oracle) } else { Vec::new() };
    b.add_traced("oracle.agreement", "normal-form equality matches ideal membership", &agreement, trace);
    let mut grouped: BTreeMap<String, Report> = ["soundness", "projection", "endpoints", "action"]
        .into_iter()
        .map(|k| (k.to_string(), Report::new()))
        .collect();
    for v in &cmp.invariants.violations {
        let key = v.law.rsplit('.').next().unwrap_or(&v.law).to_string();
        grouped.entry(key).or_default().push(&v.law, &v.witness);
    }
    for (key, report) in &grouped {
        let law = match key.as_str() {
            "soundness" => "every rewriting move is an instance of a relation",
            "projection" => "equal morphisms have equal projections",
            "endpoints" => "equal morphisms have equal endpoints",
            "action" => "the action preserves equality",
            _ => "congruence",
        };
        b.add(format!("oracle.{key}"), law, report);
    }
    b.note("oracle_edges", json!(cmp.edges));
    b.note("oracle_words", json!(cmp.words));
    b.note("oracle_generators", json!(cmp.generators));
    b.note("oracle_rank", json!(cmp.rank));
    b.note("oracle_classes", json!(cmp.classes));
    b.note("oracle_equal_pairs", json!(cmp.equal_pairs));
    b.note("oracle_unequal_pairs", json!(cmp.unequal_pairs));
}

/// One rewriting chain per oracle class with at least two words.
fn class_traces(bundle: &Bundle, oracle: &IdealOracle) -> Vec<String> {
    let classes = oracle.classes();
    let mut first: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for (w, &c) in classes.iter().enumerate() {
        match first.get(&c) {
            None => {
                first.insert(c, w);
            }
            Some(&v) if oracle.words()[w].len() != oracle.words()[v].len() && out.len() < 400 => {
                let (a, b): (BundleMorphism, BundleMorphism) = (oracle.morphism(v), oracle.morphism(w));
                if let Some(wit) = bundle.equality_witness(&a, &b) {
                    out.extend(bundle.render_witness(&a, &b, &wit));
                }
            }
            Some(_) => {}
        }
    }
    out
}
