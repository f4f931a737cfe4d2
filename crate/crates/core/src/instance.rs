//! JSON instance documents: groups, homomorphisms, actions, the chained
//! crossed modules, the cover and the cocycle tables.
//!
//! Parsing only checks shape and cross-references; the algebraic laws are
//! checked by [`validate_instance`], so a document with broken Peiffer data
//! still loads and is reported on.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::base::{self, CoverComplex, Edge};
use crate::crossed::{validate_peiffer, ChainedCrossedModules, CrossedModule};
use crate::error::{schema, Error, Result};
use crate::gerbal::{generate_gerbal, pair_domain, triple_domain, validate_gerbal, GerbalCocycle, PairTable, TripleTable};
use crate::group::{validate_action, validate_group, validate_hom, FiniteGroup, GroupAction, GroupHom, DEFAULT_MAX_ORDER};
use crate::presets;
use crate::report::Report;

pub const SCHEMA: &str = "catbundle/instance-v1";

/// Preset names accepted by [`preset_document`].
pub const PRESETS: [&str; 5] = ["s3-line5", "s3-line5w", "s4-line5w", "cycle6-trivial", "oracle-dirline3"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub schema: String,
    pub meta: Meta,
    pub groups: Vec<GroupDoc>,
    pub homs: Vec<HomDoc>,
    pub actions: Vec<ActionDoc>,
    pub chain: ChainDoc,
    pub cover: CoverDoc,
    pub cocycle: CocycleDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub name: String,
    pub seed: u64,
    pub noise: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub name: String,
    pub elements: Vec<String>,
    pub identity: String,
    pub inverse: BTreeMap<String, String>,
    /// `table[a][b]` is the id of `a·b`, rows and columns in element order.
    pub table: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub name: String,
    pub domain: String,
    pub codomain: String,
    pub map: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    pub name: String,
    pub actor: String,
    pub space: String,
    /// `table[g][h]` is the id of `α_g(h)`.
    pub table: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub base: String,
    pub top: String,
    pub action: String,
    pub boundary: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    pub outer: ModuleDoc,
    pub inner: ModuleDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub u: String,
    pub v: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDoc {
    pub id: String,
    pub vertices: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
    pub directed: bool,
    pub charts: Vec<ChartDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    pub i: String,
    pub k: String,
    pub u: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleEntry {
    pub i: String,
    pub k: String,
    pub m: String,
    pub u: String,
    pub value: String,
}

/// `top` holds `h_ik(u) ∈ H`, `inner` holds `j_ikm(u) ∈ J`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleDoc {
    pub top: Vec<PairEntry>,
    pub inner: Vec<TripleEntry>,
}

/// A loaded document.
#[derive(Debug, Clone)]
pub struct Instance {
    pub meta: Meta,
    pub groups: Vec<Arc<FiniteGroup>>,
    pub homs: Vec<GroupHom>,
    pub actions: Vec<GroupAction>,
    pub chain: Arc<ChainedCrossedModules>,
    pub cover: Arc<CoverComplex>,
    pub cocycle: GerbalCocycle,
}

impl InstanceDocument {
    /// Parses JSON text; syntax and shape errors carry line and column.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text)
            .map_err(|e| schema(format!("line {}, column {}: {}", e.line(), e.column(), strip_position(&e.to_string()))))?;
        if doc.schema != SCHEMA {
            return Err(schema(format!("unsupported schema '{}', expected '{SCHEMA}'", doc.schema)));
        }
        Ok(doc)
    }

    /// Canonical serialization: sorted keys, two-space indent, trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("documents serialize");
        let mut out = serde_json::to_string_pretty(&value).expect("values serialize");
        out.push('\n');
        out
    }

    pub fn load(&self) -> Result<Instance> {
        let mut groups: HashMap<&str, Arc<FiniteGroup>> = HashMap::new();
        let mut group_list = Vec::new();
        for g in &self.groups {
            let built = Arc::new(FiniteGroup::from_rows(&g.name, g.elements.clone(), &g.table, &g.identity, &g.inverse, DEFAULT_MAX_ORDER)?);
            if groups.insert(&g.name, built.clone()).is_some() {
                return Err(schema(format!("group '{}' is defined twice", g.name)));
            }
            group_list.push(built);
        }
        let group = |name: &str, ctx: &str| {
            groups.get(name).cloned().ok_or_else(|| schema(format!("{ctx} refers to unknown group '{name}'")))
        };
        let mut homs: HashMap<&str, GroupHom> = HashMap::new();
        let mut hom_list = Vec::new();
        for h in &self.homs {
            let ctx = format!("hom {}", h.name);
            let built = GroupHom::from_map(&h.name, group(&h.domain, &ctx)?, group(&h.codomain, &ctx)?, &h.map)?;
            if homs.insert(&h.name, built.clone()).is_some() {
                return Err(schema(format!("hom '{}' is defined twice", h.name)));
            }
            hom_list.push(built);
        }
        let mut actions: HashMap<&str, GroupAction> = HashMap::new();
        let mut action_list = Vec::new();
        for a in &self.actions {
            let ctx = format!("action {}", a.name);
            let built = GroupAction::from_table(&a.name, group(&a.actor, &ctx)?, group(&a.space, &ctx)?, &a.table)?;
            check_action_complete(&built, a)?;
            if actions.insert(&a.name, built.clone()).is_some() {
                return Err(schema(format!("action '{}' is defined twice", a.name)));
            }
            action_list.push(built);
        }
        let module = |m: &ModuleDoc, which: &str| -> Result<CrossedModule> {
            let ctx = format!("{which} module");
            let action = actions.get(m.action.as_str()).cloned().ok_or_else(|| schema(format!("{ctx} refers to unknown action '{}'", m.action)))?;
            let boundary = homs.get(m.boundary.as_str()).cloned().ok_or_else(|| schema(format!("{ctx} refers to unknown hom '{}'", m.boundary)))?;
            CrossedModule::new_unchecked(group(&m.base, &ctx)?, group(&m.top, &ctx)?, action, boundary)
        };
        let chain = Arc::new(ChainedCrossedModules::new(module(&self.chain.outer, "outer")?, module(&self.chain.inner, "inner")?)?);
        let cover = Arc::new(self.cover.build()?);
        let cocycle = self.cocycle.build(chain.clone(), cover.clone())?;
        Ok(Instance {
            meta: self.meta.clone(),
            groups: group_list,
            homs: hom_list,
            actions: action_list,
            chain,
            cover,
            cocycle,
        })
    }
}

fn strip_position(msg: &str) -> &str {
    msg.rfind(" at line ").map_or(msg, |n| &msg[..n])
}

fn check_action_complete(built: &GroupAction, doc: &ActionDoc) -> Result<()> {
    for g in built.actor().ids() {
        for h in built.space().ids() {
            if !doc.table.get(g).is_some_and(|row| row.contains_key(h)) {
                return Err(schema(format!("action {}: no entry for ({g}, {h})", doc.name)));
            }
        }
    }
    Ok(())
}

impl CoverDoc {
    fn build(&self) -> Result<CoverComplex> {
        let index: HashMap<&str, usize> = self.vertices.iter().enumerate().map(|(n, v)| (v.as_str(), n)).collect();
        let vertex = |id: &str, ctx: &str| index.get(id).copied().ok_or_else(|| schema(format!("{ctx} refers to unknown vertex '{id}'")));
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let ctx = format!("edge {}", e.id);
                Ok(Edge { id: e.id.clone(), u: vertex(&e.u, &ctx)?, v: vertex(&e.v, &ctx)? })
            })
            .collect::<Result<Vec<_>>>()?;
        let charts = self
            .charts
            .iter()
            .map(|c| {
                let ctx = format!("chart {}", c.id);
                Ok((c.id.clone(), c.vertices.iter().map(|v| vertex(v, &ctx)).collect::<Result<Vec<_>>>()?))
            })
            .collect::<Result<Vec<_>>>()?;
        CoverComplex::new_unchecked(self.vertices.clone(), edges, self.directed, charts)
    }

    pub fn from_cover(c: &CoverComplex) -> Self {
        Self {
            vertices: c.vertex_ids().to_vec(),
            edges: c
                .edges()
                .iter()
                .map(|e| EdgeDoc { id: e.id.clone(), u: c.vertex_id(e.u).to_string(), v: c.vertex_id(e.v).to_string() })
                .collect(),
            directed: c.is_directed(),
            charts: (0..c.chart_count())
                .map(|i| ChartDoc {
                    id: c.chart_id(i).to_string(),
                    vertices: c.chart_members(i).into_iter().map(|u| c.vertex_id(u).to_string()).collect(),
                })
                .collect(),
        }
    }
}

impl CocycleDoc {
    fn build(&self, chain: Arc<ChainedCrossedModules>, cover: Arc<CoverComplex>) -> Result<GerbalCocycle> {
        let charts: HashMap<&str, usize> = cover.chart_ids().iter().enumerate().map(|(n, v)| (v.as_str(), n)).collect();
        let vertices: HashMap<&str, usize> = cover.vertex_ids().iter().enumerate().map(|(n, v)| (v.as_str(), n)).collect();
        let chart = |id: &str| charts.get(id).copied().ok_or_else(|| schema(format!("cocycle refers to unknown chart '{id}'")));
        let vertex = |id: &str| vertices.get(id).copied().ok_or_else(|| schema(format!("cocycle refers to unknown vertex '{id}'")));
        let (h_grp, j_grp) = (chain.outer().top().clone(), chain.inner().top().clone());
        let element = |g: &FiniteGroup, id: &str| g.index_of(id).map_err(|_| schema(format!("cocycle value '{id}' is not in {}", g.name())));
        let (n, nv) = (cover.chart_count(), cover.vertex_count());
        let mut h = PairTable::empty(n, nv);
        for e in &self.top {
            let (i, k, u) = (chart(&e.i)?, chart(&e.k)?, vertex(&e.u)?);
            if !(cover.in_chart(i, u) && cover.in_chart(k, u)) {
                return Err(schema(format!("h entry ({},{},{}) lies outside the overlap", e.i, e.k, e.u)));
            }
            if h.get(i, k, u).is_some() {
                return Err(schema(format!("duplicate h entry ({},{},{})", e.i, e.k, e.u)));
            }
            h.set(i, k, u, element(&h_grp, &e.value)?);
        }
        let mut j = TripleTable::empty(n, nv);
        for e in &self.inner {
            let (i, k, m, u) = (chart(&e.i)?, chart(&e.k)?, chart(&e.m)?, vertex(&e.u)?);
            if !cover.in_overlap(base::ChartSet::from_indices([i, k, m]), u) {
                return Err(schema(format!("j entry ({},{},{},{}) lies outside the overlap", e.i, e.k, e.m, e.u)));
            }
            if j.get(i, k, m, u).is_some() {
                return Err(schema(format!("duplicate j entry ({},{},{},{})", e.i, e.k, e.m, e.u)));
            }
            j.set(i, k, m, u, element(&j_grp, &e.value)?);
        }
        GerbalCocycle::new(chain, cover, h, j)
    }

    pub fn from_cocycle(gc: &GerbalCocycle) -> Self {
        let c = gc.cover();
        let (h_grp, j_grp) = (gc.chain().outer().top(), gc.chain().inner().top());
        Self {
            top: pair_domain(c)
                .into_iter()
                .map(|(i, k, u)| PairEntry {
                    i: c.chart_id(i).to_string(),
                    k: c.chart_id(k).to_string(),
                    u: c.vertex_id(u).to_string(),
                    value: h_grp.id(gc.h(i, k, u)).to_string(),
                })
                .collect(),
            inner: triple_domain(c)
                .into_iter()
                .map(|(i, k, m, u)| TripleEntry {
                    i: c.chart_id(i).to_string(),
                    k: c.chart_id(k).to_string(),
                    m: c.chart_id(m).to_string(),
                    u: c.vertex_id(u).to_string(),
                    value: j_grp.id(gc.j(i, k, m, u)).to_string(),
                })
                .collect(),
        }
    }
}

fn group_doc(g: &FiniteGroup) -> GroupDoc {
    GroupDoc {
        name: g.name().to_string(),
        elements: g.ids().to_vec(),
        identity: g.id(g.identity()).to_string(),
        inverse: g.elements().map(|x| (g.id(x).to_string(), g.id(g.inv(x)).to_string())).collect(),
        table: g.rows(),
    }
}

fn hom_doc(f: &GroupHom) -> HomDoc {
    HomDoc {
        name: f.name().to_string(),
        domain: f.domain().name().to_string(),
        codomain: f.codomain().name().to_string(),
        map: f.domain().elements().map(|x| (f.domain().id(x).to_string(), f.codomain().id(f.apply(x)).to_string())).collect(),
    }
}

fn action_doc(a: &GroupAction) -> ActionDoc {
    ActionDoc {
        name: a.name().to_string(),
        actor: a.actor().name().to_string(),
        space: a.space().name().to_string(),
        table: a.to_table(),
    }
}

fn module_doc(cm: &CrossedModule) -> ModuleDoc {
    ModuleDoc {
        base: cm.base().name().to_string(),
        top: cm.top().name().to_string(),
        action: cm.action().name().to_string(),
        boundary: cm.boundary().name().to_string(),
    }
}

impl Instance {
    pub fn document(&self) -> InstanceDocument {
        document_for(&self.meta, &self.cocycle)
    }
}

/// Serializes a cocycle with all the data it depends on; groups appear once,
/// in order of first use.
pub fn document_for(meta: &Meta, gc: &GerbalCocycle) -> InstanceDocument {
    let (outer, inner) = (gc.chain().outer(), gc.chain().inner());
    let mut groups: Vec<GroupDoc> = Vec::new();
    for g in [outer.base(), outer.top(), inner.base(), inner.top()] {
        if !groups.iter().any(|d| d.name == g.name()) {
            groups.push(group_doc(g));
        }
    }
    InstanceDocument {
        schema: SCHEMA.to_string(),
        meta: meta.clone(),
        groups,
        homs: vec![hom_doc(outer.boundary()), hom_doc(inner.boundary())],
        actions: vec![action_doc(outer.action()), action_doc(inner.action())],
        chain: ChainDoc { outer: module_doc(outer), inner: module_doc(inner) },
        cover: CoverDoc::from_cover(gc.cover()),
        cocycle: CocycleDoc::from_cocycle(gc),
    }
}

/// Generates the named preset; `cycle6-trivial` always carries the trivial
/// cocycle.
pub fn preset_document(preset: &str, seed: u64, noise: bool) -> Result<InstanceDocument> {
    let (chain, cover) = match preset {
        "s3-line5" => ("s3-chain", "line5"),
        "s3-line5w" => ("s3-chain", "line5w"),
        "s4-line5w" => ("s4-chain", "line5w"),
        "cycle6-trivial" => ("s3-chain", "cycle6"),
        "oracle-dirline3" => ("s3-chain", "dirline3"),
        _ => return Err(Error::Precondition(format!("unknown preset '{preset}'; known: {}", PRESETS.join(", ")))),
    };
    let chain = Arc::new(presets::chain(chain).expect("known chain"));
    let cover = Arc::new(base::cover(cover).expect("known cover"));
    let (gc, noise) = if preset == "cycle6-trivial" {
        (GerbalCocycle::trivial(chain, cover), false)
    } else {
        (generate_gerbal(chain, cover, seed, noise)?, noise)
    };
    Ok(document_for(&Meta { name: preset.to_string(), seed, noise }, &gc))
}

/// Structural validation: [`validate_algebra`] plus the gerbal relation.
pub fn validate_instance(inst: &Instance) -> Report {
    let mut report = validate_algebra(inst);
    if report.is_ok() {
        report.extend(validate_gerbal(&inst.cocycle));
    }
    report
}

/// Group, hom and action laws, both Peiffer identities and the cover
/// properties. Later checks are skipped when the algebra they rely on is
/// broken.
pub fn validate_algebra(inst: &Instance) -> Report {
    let mut report = Report::new();
    for g in &inst.groups {
        report.extend(validate_group(g));
    }
    if !report.is_ok() {
        return report;
    }
    for f in &inst.homs {
        report.extend(validate_hom(f));
    }
    for a in &inst.actions {
        report.extend(validate_action(a));
    }
    if !report.is_ok() {
        return report;
    }
    report.extend(validate_peiffer(inst.chain.outer()));
    report.extend(validate_peiffer(inst.chain.inner()));
    report.extend(inst.cover.validate_cover());
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_documents_round_trip() {
        for preset in PRESETS {
            let doc = preset_document(preset, 7, true).unwrap();
            let text = doc.to_json();
            let back = InstanceDocument::parse(&text).unwrap();
            assert_eq!(back, doc);
            let inst = back.load().unwrap();
            assert!(validate_instance(&inst).is_ok(), "{preset}");
            assert_eq!(inst.document().to_json(), text);
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = preset_document("s3-line5w", 11, true).unwrap().to_json();
        let b = preset_document("s3-line5w", 11, true).unwrap().to_json();
        assert_eq!(a, b);
        assert_ne!(a, preset_document("s3-line5w", 12, true).unwrap().to_json());
    }

    #[test]
    fn cycle6_trivial_has_identity_values() {
        let doc = preset_document("cycle6-trivial", 3, true).unwrap();
        assert!(doc.cocycle.top.iter().all(|e| e.value == "e"));
        assert!(doc.cocycle.inner.iter().all(|e| e.value == "e"));
        assert!(doc.cocycle.inner.iter().all(|e| e.i == e.k || e.k == e.m || e.i == e.m));
    }

    #[test]
    fn truncated_json_reports_position() {
        let text = preset_document("s3-line5", 1, false).unwrap().to_json();
        let cut = &text[..text.len() / 2];
        match InstanceDocument::parse(cut) {
            Err(Error::Schema(msg)) => assert!(msg.starts_with("line "), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_cocycle_entry_is_a_schema_error() {
        let mut doc = preset_document("s3-line5", 1, false).unwrap();
        doc.cocycle.top.pop();
        assert!(matches!(doc.load(), Err(Error::Schema(_))));
    }

    #[test]
    fn unknown_reference_is_a_schema_error() {
        let mut doc = preset_document("s3-line5", 1, false).unwrap();
        doc.chain.inner.boundary = "nope".into();
        assert!(matches!(doc.load(), Err(Error::Schema(_))));
    }

    #[test]
    fn trivial_action_breaks_peiffer_but_loads() {
        let mut doc = preset_document("s3-line5", 1, false).unwrap();
        let action = &mut doc.actions[0];
        for row in action.table.values_mut() {
            for (h, v) in row.iter_mut() {
                *v = h.clone();
            }
        }
        let inst = doc.load().unwrap();
        let report = validate_instance(&inst);
        assert!(report.has_law("peiffer.first"));
    }
}
