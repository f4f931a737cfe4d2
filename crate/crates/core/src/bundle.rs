//! The bundle category glued from a functorial cocycle.
//!
//! Objects are classes `[i, u, ḡ]` under `(i, u, ḡ) ~ (j, u, ḡ_ji(u) ḡ)`,
//! stored canonically in the smallest chart containing `u`. Morphisms are
//! identity markers or composable words of quiver edges `(i, I, γ, φ̄)`,
//! compared modulo the congruence generated by
//!
//! * re-indexing: `(i, I, γ, φ̄) ~ (j, J, γ, θ̄_ji(γ) φ̄)` for γ inside `U_ij`;
//! * merging: `(k, K, γ_j∘γ_i, (θ̄_kj(γ_j)φ̄_j)∘(θ̄_ki(γ_i)φ̄_i)) ~ e_i·e_j`
//!   for `K ⊆ I ∩ J`, `k ∈ K`;
//! * a single edge over an identity walk with identity decoration equals the
//!   identity marker at its source.
//!
//! Equality is decided by rewriting to a normal form with explicit moves:
//! split every edge into unit steps, re-index each step to its smallest
//! chart, absorb pure-fiber steps into a neighbour, then push all decoration
//! onto the first step. Every move is an instance of one of the relations and
//! can be replayed by [`Bundle::verify_moves`].

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::base::{compose_paths, enumerate_paths, enumerate_walks, ChartSet, CoverComplex, IndexFamily, PathMor, Step};
use crate::error::{schema, Error, Result};
use crate::functorial::FunctorialCocycle;
use crate::quotient::{check_classical_cocycle, QuotientCatGroup};
use crate::report::Report;

/// Canonical representative `(chart, vertex, fiber)` of a point of X; `chart`
/// is the smallest chart containing `vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BundleObject {
    pub chart: usize,
    pub vertex: usize,
    pub fiber: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuiverEdge {
    pub chart: usize,
    pub label: ChartSet,
    pub walk: PathMor,
    /// Morphism coset of the quotient.
    pub deco: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BundleMorphism {
    Identity(BundleObject),
    Chain(Vec<QuiverEdge>),
}

/// A single rewriting step on a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    /// Replace `word[at]` by `first · second` (merge relation, read backwards).
    Split { at: usize, first: QuiverEdge, second: QuiverEdge },
    /// Replace `word[at] · word[at + 1]` by `merged`.
    Merge { at: usize, merged: QuiverEdge },
    /// Replace `word[at]` by a re-indexed copy.
    Reindex { at: usize, edge: QuiverEdge },
    /// Replace a lone identity-decorated edge over an identity walk by the
    /// identity marker.
    CollapseIdentity,
}

/// Rewriting sequences taking both sides to a common normal form.
#[derive(Debug, Clone)]
pub struct EqualityWitness {
    pub normal_form: BundleMorphism,
    pub left: Vec<Move>,
    pub right: Vec<Move>,
}

/// Either kind of thing the structure group acts on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Acted {
    Object(BundleObject),
    Morphism(BundleMorphism),
}

/// An element of the structure group: an object or a morphism coset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupElement {
    Object(usize),
    Morphism(usize),
}

#[derive(Debug, Clone)]
pub struct Bundle {
    fc: FunctorialCocycle,
    q: QuotientCatGroup,
    family: IndexFamily,
}

impl Bundle {
    /// Requires the classical cocycle identities up to `max_len`.
    pub fn new(fc: FunctorialCocycle, q: QuotientCatGroup, max_len: usize) -> Result<Self> {
        let report = check_classical_cocycle(&fc, &q, max_len)?;
        if !report.is_ok() {
            return Err(Error::Precondition(format!("classical cocycle check failed: {report}")));
        }
        let family = IndexFamily::new(fc.cover());
        Ok(Self { fc, q, family })
    }

    pub fn cover(&self) -> &CoverComplex {
        self.fc.cover()
    }

    pub fn quotient(&self) -> &QuotientCatGroup {
        &self.q
    }

    pub fn cocycle(&self) -> &FunctorialCocycle {
        &self.fc
    }

    pub fn family(&self) -> &IndexFamily {
        &self.family
    }

    /// `ḡ_ik(u)`.
    pub fn gbar(&self, i: usize, k: usize, u: usize) -> usize {
        self.q.obj_of(self.fc.tower().g(i, k, u)).expect("transition values lie in the quotient")
    }

    /// `θ̄_ki(γ)` for γ inside `U_ki`.
    pub fn theta_bar(&self, k: usize, i: usize, walk: &PathMor) -> usize {
        self.q
            .mor_of(self.fc.theta_at(k, i, walk.start, walk.end))
            .expect("θ values lie in the quotient")
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.q.mor_mul(a, b).expect("structure group")
    }

    fn obj_mul(&self, a: usize, b: usize) -> usize {
        self.q.obj_mul(a, b).expect("structure group")
    }

    fn home_chart(&self, u: usize) -> usize {
        self.cover().charts_containing_vertex(u).first().expect("cover property")
    }

    /// The canonical form of `[i, u, ḡ]`.
    pub fn object(&self, i: usize, u: usize, fiber: usize) -> Result<BundleObject> {
        let c = self.cover();
        if i >= c.chart_count() || u >= c.vertex_count() || fiber >= self.q.obj_count() {
            return Err(schema(format!("object ({i}, {u}, {fiber}) has an unknown component")));
        }
        if !c.in_chart(i, u) {
            return Err(Error::Domain(format!("vertex {} is not in chart {}", c.vertex_id(u), c.chart_id(i))));
        }
        Ok(self.object_unchecked(i, u, fiber))
    }

    fn object_unchecked(&self, i: usize, u: usize, fiber: usize) -> BundleObject {
        let home = self.home_chart(u);
        BundleObject { chart: home, vertex: u, fiber: self.obj_mul(self.gbar(home, i, u), fiber) }
    }

    /// Fiber coordinate of `x` in chart `i`.
    pub fn fiber_in(&self, x: BundleObject, i: usize) -> usize {
        self.obj_mul(self.gbar(i, x.chart, x.vertex), x.fiber)
    }

    pub fn objects(&self) -> Vec<BundleObject> {
        (0..self.cover().vertex_count())
            .flat_map(|u| (0..self.q.obj_count()).map(move |g| (u, g)))
            .map(|(u, g)| BundleObject { chart: self.home_chart(u), vertex: u, fiber: g })
            .collect()
    }

    pub fn check_edge(&self, e: &QuiverEdge) -> Result<()> {
        let c = self.cover();
        if e.chart >= c.chart_count() || e.deco >= self.q.mor_count() {
            return Err(schema("edge has an unknown chart or decoration"));
        }
        c.check_index_set(e.label)?;
        if !e.label.contains(e.chart) {
            return Err(schema(format!("edge chart {} is not in its label {}", c.chart_id(e.chart), c.fmt_set(e.label))));
        }
        if !c.walk_inside(e.label, &e.walk) {
            return Err(schema(format!("walk {} is not inside U_{}", c.fmt_walk(&e.walk), c.fmt_set(e.label))));
        }
        Ok(())
    }

    pub fn edge(&self, chart: usize, label: ChartSet, walk: PathMor, deco: usize) -> Result<QuiverEdge> {
        let e = QuiverEdge { chart, label, walk, deco };
        self.check_edge(&e)?;
        Ok(e)
    }

    /// `(s(e), t(e))` as canonical objects.
    pub fn edge_endpoints(&self, e: &QuiverEdge) -> Result<(BundleObject, BundleObject)> {
        self.check_edge(e)?;
        Ok(self.endpoints_unchecked(e))
    }

    fn endpoints_unchecked(&self, e: &QuiverEdge) -> (BundleObject, BundleObject) {
        (
            self.object_unchecked(e.chart, e.walk.start, self.q.source(e.deco)),
            self.object_unchecked(e.chart, e.walk.end, self.q.target(e.deco)),
        )
    }

    /// A composable word; an empty word is rejected.
    pub fn chain(&self, edges: Vec<QuiverEdge>) -> Result<BundleMorphism> {
        if edges.is_empty() {
            return Err(schema("empty edge word"));
        }
        for e in &edges {
            self.check_edge(e)?;
        }
        for w in edges.windows(2) {
            let (t, s) = (self.endpoints_unchecked(&w[0]).1, self.endpoints_unchecked(&w[1]).0);
            if t != s {
                return Err(Error::Composition(format!(
                    "{} ends at {} but {} starts at {}",
                    self.fmt_edge(&w[0]),
                    self.fmt_obj(t),
                    self.fmt_edge(&w[1]),
                    self.fmt_obj(s)
                )));
            }
        }
        Ok(BundleMorphism::Chain(edges))
    }

    pub fn source(&self, m: &BundleMorphism) -> BundleObject {
        match m {
            BundleMorphism::Identity(x) => *x,
            BundleMorphism::Chain(w) => self.endpoints_unchecked(&w[0]).0,
        }
    }

    pub fn target(&self, m: &BundleMorphism) -> BundleObject {
        match m {
            BundleMorphism::Identity(x) => *x,
            BundleMorphism::Chain(w) => self.endpoints_unchecked(w.last().expect("nonempty")).1,
        }
    }

    /// `π` on objects.
    pub fn project_obj(&self, x: BundleObject) -> usize {
        x.vertex
    }

    /// `π` on morphisms: the composite of the edge walks.
    pub fn project(&self, m: &BundleMorphism) -> PathMor {
        match m {
            BundleMorphism::Identity(x) => PathMor::identity(x.vertex),
            BundleMorphism::Chain(w) => {
                let mut steps: Vec<Step> = Vec::new();
                for e in w {
                    steps.extend_from_slice(&e.walk.steps);
                }
                PathMor { start: w[0].walk.start, end: w.last().unwrap().walk.end, steps }
            }
        }
    }

    pub fn normal_form(&self, m: &BundleMorphism) -> BundleMorphism {
        self.rewrite(m, false).0
    }

    pub fn normal_form_with_moves(&self, m: &BundleMorphism) -> (BundleMorphism, Vec<Move>) {
        self.rewrite(m, true)
    }

    fn rewrite(&self, m: &BundleMorphism, log: bool) -> (BundleMorphism, Vec<Move>) {
        let word = match m {
            BundleMorphism::Identity(_) => return (m.clone(), Vec::new()),
            BundleMorphism::Chain(w) => w.clone(),
        };
        let mut r = Rewriter { b: self, word, log: log.then(Vec::new) };
        let c = self.cover();

        let mut at = 0;
        while at < r.word.len() {
            if r.word[at].walk.len() >= 2 {
                r.split(at, 1);
            }
            at += 1;
        }
        for at in 0..r.word.len() {
            let walk = &r.word[at].walk;
            let home = match walk.steps.first() {
                Some(s) => c.charts_containing_edge(s.edge).first().expect("edge lies in its chart"),
                None => self.home_chart(walk.start),
            };
            r.reindex(at, home);
        }
        if r.word.iter().any(|e| !e.walk.is_identity()) {
            while let Some(p) = r.word.iter().position(|e| e.walk.is_identity()) {
                if p > 0 {
                    r.reindex(p, r.word[p - 1].chart);
                    r.merge(p - 1);
                } else {
                    r.reindex(0, r.word[1].chart);
                    r.merge(0);
                }
            }
        } else {
            while r.word.len() > 1 {
                r.merge(0);
            }
            if self.q.is_identity(r.word[0].deco) {
                let x = self.endpoints_unchecked(&r.word[0]).0;
                r.record(|| Move::CollapseIdentity);
                return (BundleMorphism::Identity(x), r.log.unwrap_or_default());
            }
        }
        for at in (1..r.word.len()).rev() {
            if self.q.is_identity(r.word[at].deco) {
                continue;
            }
            r.split(at, 0);
            r.reindex(at, r.word[at - 1].chart);
            r.merge(at - 1);
        }
        (BundleMorphism::Chain(r.word), r.log.unwrap_or_default())
    }

    pub fn mor_equal(&self, a: &BundleMorphism, b: &BundleMorphism) -> bool {
        self.normal_form(a) == self.normal_form(b)
    }

    /// Rewriting sequences from both sides to a shared normal form, if equal.
    pub fn equality_witness(&self, a: &BundleMorphism, b: &BundleMorphism) -> Option<EqualityWitness> {
        let (na, left) = self.normal_form_with_moves(a);
        let (nb, right) = self.normal_form_with_moves(b);
        (na == nb).then_some(EqualityWitness { normal_form: na, left, right })
    }

    /// Replays `moves` from `start`, checking each against the defining
    /// relations, and returns the final morphism.
    pub fn verify_moves(&self, start: &BundleMorphism, moves: &[Move]) -> std::result::Result<BundleMorphism, String> {
        let mut state = start.clone();
        for (n, mv) in moves.iter().enumerate() {
            let word = match &mut state {
                BundleMorphism::Chain(w) => w,
                BundleMorphism::Identity(_) => return Err(format!("move {n} applied to an identity marker")),
            };
            let get = |at: usize| word.get(at).cloned().ok_or_else(|| format!("move {n} points past the word"));
            match mv {
                Move::Split { at, first, second } => {
                    let old = get(*at)?;
                    self.check_merge_instance(&old, first, second).map_err(|e| format!("move {n}: {e}"))?;
                    word.splice(*at..=*at, [first.clone(), second.clone()]);
                }
                Move::Merge { at, merged } => {
                    let (a, b) = (get(*at)?, get(*at + 1)?);
                    self.check_merge_instance(merged, &a, &b).map_err(|e| format!("move {n}: {e}"))?;
                    word.splice(*at..=*at + 1, [merged.clone()]);
                }
                Move::Reindex { at, edge } => {
                    let old = get(*at)?;
                    self.check_reindex_instance(&old, edge).map_err(|e| format!("move {n}: {e}"))?;
                    word[*at] = edge.clone();
                }
                Move::CollapseIdentity => {
                    if word.len() != 1 || !word[0].walk.is_identity() || !self.q.is_identity(word[0].deco) {
                        return Err(format!("move {n}: word is not a lone identity edge"));
                    }
                    let x = self.endpoints_unchecked(&word[0]).0;
                    state = BundleMorphism::Identity(x);
                    continue;
                }
            }
            if let Err(e) = self.chain(word.clone()) {
                return Err(format!("move {n} breaks the word: {e}"));
            }
        }
        Ok(state)
    }

    /// `to = (j, J, γ, θ̄_ji(γ) φ̄)` for `from = (i, I, γ, φ̄)`, γ inside `U_ij`.
    fn check_reindex_instance(&self, from: &QuiverEdge, to: &QuiverEdge) -> std::result::Result<(), String> {
        self.check_edge(from).map_err(|e| e.to_string())?;
        self.check_edge(to).map_err(|e| e.to_string())?;
        if from.walk != to.walk {
            return Err("re-indexing changed the walk".into());
        }
        if !self.cover().walk_inside(ChartSet::from_indices([from.chart, to.chart]), &from.walk) {
            return Err("walk is not inside both charts".into());
        }
        let expected = self.mul(self.theta_bar(to.chart, from.chart, &from.walk), from.deco);
        if to.deco != expected {
            return Err(format!("decoration {} should be {}", self.q.fmt_mor(to.deco), self.q.fmt_mor(expected)));
        }
        Ok(())
    }

    /// `k_edge ~ i_edge · j_edge` with `K ⊆ I ∩ J`, `γ_k = γ_j∘γ_i` and
    /// `φ̄_k = (θ̄_kj(γ_j)φ̄_j) ∘ (θ̄_ki(γ_i)φ̄_i)`.
    fn check_merge_instance(&self, k: &QuiverEdge, i: &QuiverEdge, j: &QuiverEdge) -> std::result::Result<(), String> {
        for e in [k, i, j] {
            self.check_edge(e).map_err(|e| e.to_string())?;
        }
        if !k.label.is_subset(ChartSet(i.label.0 & j.label.0)) {
            return Err("merged label is not inside both labels".into());
        }
        let walk = compose_paths(&j.walk, &i.walk).map_err(|e| e.to_string())?;
        if walk != k.walk {
            return Err("merged walk is not the composite".into());
        }
        let di = self.mul(self.theta_bar(k.chart, i.chart, &i.walk), i.deco);
        let dj = self.mul(self.theta_bar(k.chart, j.chart, &j.walk), j.deco);
        match self.q.compose(dj, di) {
            Some(d) if d == k.deco => Ok(()),
            Some(d) => Err(format!("merged decoration {} should be {}", self.q.fmt_mor(k.deco), self.q.fmt_mor(d))),
            None => Err("transported decorations are not composable".into()),
        }
    }

    /// `a` followed by `b`, reduced to normal form.
    pub fn mor_compose(&self, a: &BundleMorphism, b: &BundleMorphism) -> Result<BundleMorphism> {
        let (t, s) = (self.target(a), self.source(b));
        if t != s {
            return Err(Error::Composition(format!("target {} ≠ source {}", self.fmt_obj(t), self.fmt_obj(s))));
        }
        let joined = match (a, b) {
            (BundleMorphism::Identity(_), m) | (m, BundleMorphism::Identity(_)) => m.clone(),
            (BundleMorphism::Chain(x), BundleMorphism::Chain(y)) => {
                let mut w = x.clone();
                w.extend(y.iter().cloned());
                BundleMorphism::Chain(w)
            }
        };
        Ok(self.normal_form(&joined))
    }

    /// `[i, u, ḡ]·ḡ′ = [i, u, ḡḡ′]`.
    pub fn act_obj(&self, x: BundleObject, g: usize) -> BundleObject {
        BundleObject { fiber: self.obj_mul(x.fiber, g), ..x }
    }

    /// Right action by a morphism coset ψ̄: the last edge is decorated by
    /// `φ̄ψ̄`, earlier edges by `φ̄·1_{s(ψ̄)}`. The result is not normalized.
    pub fn act_mor(&self, m: &BundleMorphism, psi: usize) -> BundleMorphism {
        match m {
            BundleMorphism::Identity(x) => {
                if self.q.is_identity(psi) {
                    BundleMorphism::Identity(self.act_obj(*x, self.q.source(psi)))
                } else {
                    BundleMorphism::Chain(vec![QuiverEdge {
                        chart: x.chart,
                        label: ChartSet::single(x.chart),
                        walk: PathMor::identity(x.vertex),
                        deco: self.mul(self.q.identity(x.fiber), psi),
                    }])
                }
            }
            BundleMorphism::Chain(w) => {
                let unit = self.q.identity(self.q.source(psi));
                let n = w.len();
                BundleMorphism::Chain(
                    w.iter()
                        .enumerate()
                        .map(|(k, e)| QuiverEdge { deco: self.mul(e.deco, if k + 1 == n { psi } else { unit }), ..e.clone() })
                        .collect(),
                )
            }
        }
    }

    /// Dispatching form of the action; a kind mismatch is a schema error.
    pub fn act(&self, target: &Acted, by: GroupElement) -> Result<Acted> {
        match (target, by) {
            (Acted::Object(x), GroupElement::Object(g)) if g < self.q.obj_count() => Ok(Acted::Object(self.act_obj(*x, g))),
            (Acted::Morphism(m), GroupElement::Morphism(p)) if p < self.q.mor_count() => {
                Ok(Acted::Morphism(self.normal_form(&self.act_mor(m, p))))
            }
            (Acted::Object(_), GroupElement::Object(_)) | (Acted::Morphism(_), GroupElement::Morphism(_)) => {
                Err(schema("unknown structure group element"))
            }
            _ => Err(schema("objects are acted on by objects and morphisms by morphisms")),
        }
    }

    /// `Φ_{i,I}(u, ḡ) = [i, I, u, ḡ]`.
    pub fn trivialize_obj(&self, i: usize, set: ChartSet, u: usize, g: usize) -> Result<BundleObject> {
        self.require_local(i, set)?;
        if !self.cover().in_overlap(set, u) {
            return Err(Error::Domain(format!("vertex {} is not in U_{}", self.cover().vertex_id(u), self.cover().fmt_set(set))));
        }
        self.object(i, u, g)
    }

    /// `Φ_{i,I}(γ, φ̄) = [i, I, γ, φ̄]`; identities go to identity markers.
    pub fn trivialize_mor(&self, i: usize, set: ChartSet, walk: &PathMor, phi: usize) -> Result<BundleMorphism> {
        self.require_local(i, set)?;
        let e = self.edge(i, set, walk.clone(), phi)?;
        if walk.is_identity() && self.q.is_identity(phi) {
            return Ok(BundleMorphism::Identity(self.endpoints_unchecked(&e).0));
        }
        Ok(BundleMorphism::Chain(vec![e]))
    }

    fn require_local(&self, i: usize, set: ChartSet) -> Result<()> {
        if !set.contains(i) || !self.family.contains(set) {
            return Err(Error::Precondition(format!(
                "({}, {}) is not a chart of a nonempty overlap",
                i,
                self.cover().fmt_set(set)
            )));
        }
        Ok(())
    }

    /// A lift of a base walk through unit edges in their smallest charts.
    pub fn lift_walk(&self, walk: &PathMor) -> std::result::Result<BundleMorphism, String> {
        let c = self.cover();
        let start = BundleObject { chart: self.home_chart(walk.start), vertex: walk.start, fiber: self.q.unit_obj() };
        if walk.is_identity() {
            return Ok(BundleMorphism::Identity(start));
        }
        let mut at = start;
        let mut edges = Vec::new();
        for unit in walk.unit_walks(c) {
            let Some(chart) = c.charts_containing_edge(unit.steps[0].edge).first() else {
                return Err(format!("walk {} uses edge {} which lies in no chart", c.fmt_walk(walk), c.edges()[unit.steps[0].edge].id));
            };
            let e = QuiverEdge {
                chart,
                label: ChartSet::single(chart),
                deco: self.q.identity(self.fiber_in(at, chart)),
                walk: unit,
            };
            at = self.endpoints_unchecked(&e).1;
            edges.push(e);
        }
        self.chain(edges).map_err(|e| e.to_string())
    }

    pub fn fmt_obj(&self, x: BundleObject) -> String {
        let c = self.cover();
        format!("[{},{},{}]", c.chart_id(x.chart), c.vertex_id(x.vertex), self.q.fmt_obj(x.fiber))
    }

    pub fn fmt_edge(&self, e: &QuiverEdge) -> String {
        let c = self.cover();
        format!("({},{},{},{})", c.chart_id(e.chart), c.fmt_set(e.label), c.fmt_walk(&e.walk), self.q.fmt_mor(e.deco))
    }

    pub fn fmt_mor(&self, m: &BundleMorphism) -> String {
        match m {
            BundleMorphism::Identity(x) => format!("1_{}", self.fmt_obj(*x)),
            BundleMorphism::Chain(w) => w.iter().map(|e| self.fmt_edge(e)).collect::<Vec<_>>().join("·"),
        }
    }

    pub fn fmt_move(&self, m: &Move) -> String {
        match m {
            Move::Split { at, first, second } => {
                format!("split #{at} into {}·{}", self.fmt_edge(first), self.fmt_edge(second))
            }
            Move::Merge { at, merged } => format!("merge #{at},#{} into {}", at + 1, self.fmt_edge(merged)),
            Move::Reindex { at, edge } => format!("re-index #{at} to {}", self.fmt_edge(edge)),
            Move::CollapseIdentity => "collapse identity edge".to_string(),
        }
    }

    /// Human-readable rendering of an equality witness.
    pub fn render_witness(&self, a: &BundleMorphism, b: &BundleMorphism, w: &EqualityWitness) -> Vec<String> {
        let mut lines = vec![format!("left  {}", self.fmt_mor(a))];
        lines.extend(w.left.iter().map(|m| format!("  {}", self.fmt_move(m))));
        lines.push(format!("right {}", self.fmt_mor(b)));
        lines.extend(w.right.iter().map(|m| format!("  {}", self.fmt_move(m))));
        lines.push(format!("normal form {}", self.fmt_mor(&w.normal_form)));
        lines
    }
}

struct Rewriter<'b> {
    b: &'b Bundle,
    word: Vec<QuiverEdge>,
    log: Option<Vec<Move>>,
}

impl Rewriter<'_> {
    fn record(&mut self, m: impl FnOnce() -> Move) {
        if let Some(log) = &mut self.log {
            log.push(m());
        }
    }

    /// Splits the walk of `word[at]` after `k` steps; the first part keeps the
    /// decoration, the second carries the identity at its target.
    fn split(&mut self, at: usize, k: usize) {
        let e = &self.word[at];
        let c = self.b.cover();
        let mid = e.walk.steps[..k].iter().fold(e.walk.start, |v, &s| {
            let (from, to) = c.step_endpoints(s);
            debug_assert_eq!(from, v);
            to
        });
        let first = QuiverEdge {
            walk: PathMor { start: e.walk.start, end: mid, steps: e.walk.steps[..k].to_vec() },
            ..e.clone()
        };
        let second = QuiverEdge {
            walk: PathMor { start: mid, end: e.walk.end, steps: e.walk.steps[k..].to_vec() },
            deco: self.b.q.identity(self.b.q.target(e.deco)),
            ..e.clone()
        };
        self.record(|| Move::Split { at, first: first.clone(), second: second.clone() });
        self.word.splice(at..=at, [first, second]);
    }

    fn reindex(&mut self, at: usize, chart: usize) {
        let e = &self.word[at];
        let label = ChartSet::single(chart);
        if e.chart == chart && e.label == label {
            return;
        }
        let deco = self.b.mul(self.b.theta_bar(chart, e.chart, &e.walk), e.deco);
        let edge = QuiverEdge { chart, label, walk: e.walk.clone(), deco };
        self.record(|| Move::Reindex { at, edge: edge.clone() });
        self.word[at] = edge;
    }

    /// Merges two consecutive edges carrying the same chart and label.
    fn merge(&mut self, at: usize) {
        let (a, b) = (&self.word[at], &self.word[at + 1]);
        debug_assert!(a.chart == b.chart && a.label == b.label);
        let k = a.chart;
        let da = self.b.mul(self.b.theta_bar(k, a.chart, &a.walk), a.deco);
        let db = self.b.mul(self.b.theta_bar(k, b.chart, &b.walk), b.deco);
        let deco = self.b.q.compose(db, da).expect("consecutive edges are composable");
        let walk = compose_paths(&b.walk, &a.walk).expect("consecutive walks");
        let merged = QuiverEdge { chart: k, label: a.label, walk, deco };
        self.record(|| Move::Merge { at, merged: merged.clone() });
        self.word.splice(at..=at + 1, [merged]);
    }
}

impl fmt::Display for BundleObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.chart, self.vertex, self.fiber)
    }
}

/// All canonical objects, after checking that the gluing relation on raw
/// triples is an equivalence relation whose classes are exactly the fibers of
/// canonicalization.
pub fn build_object_space(b: &Bundle) -> (Vec<BundleObject>, Report) {
    let c = b.cover();
    let q = b.quotient();
    let mut report = Report::new();
    for u in 0..c.vertex_count() {
        let raw: Vec<(usize, usize)> = c
            .charts_containing_vertex(u)
            .iter()
            .flat_map(|i| (0..q.obj_count()).map(move |g| (i, g)))
            .collect();
        let related = |(i, g): (usize, usize), (j, h): (usize, usize)| h == b.obj_mul(b.gbar(j, i, u), g);
        let show = |(i, g): (usize, usize)| format!("({},{},{})", c.chart_id(i), c.vertex_id(u), q.fmt_obj(g));
        for &x in &raw {
            if !related(x, x) {
                report.push("objects.reflexive", show(x));
            }
            for &y in &raw {
                let xy = related(x, y);
                if xy && !related(y, x) {
                    report.push("objects.symmetric", format!("{} ~ {}", show(x), show(y)));
                }
                if xy != (b.object_unchecked(x.0, u, x.1) == b.object_unchecked(y.0, u, y.1)) {
                    report.push("objects.canonical", format!("{} vs {}", show(x), show(y)));
                }
                for &z in &raw {
                    if xy && related(y, z) && !related(x, z) {
                        report.push("objects.transitive", format!("{} ~ {} ~ {}", show(x), show(y), show(z)));
                    }
                }
            }
        }
    }
    (b.objects(), report)
}

/// Exchange laws in the quotient: `(φ̄₂∘φ̄₁)(ψ̄₂∘ψ̄₁) = (φ̄₂ψ̄₂)∘(φ̄₁ψ̄₁)` for
/// composable pairs, and the displayed form with a single ψ̄ wherever
/// `φ̄₁ψ̄` and `φ̄₂ψ̄` compose.
pub fn check_exchange_law(q: &QuotientCatGroup) -> Report {
    let mut report = Report::new();
    let n = q.mor_count();
    let composable: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter_map(|(f1, f2)| q.compose(f2, f1).map(|c| (f1, f2, c)))
        .collect();
    let mul = |a, b| q.mor_mul(a, b).expect("structure group");
    for &(f1, f2, f) in &composable {
        for &(p1, p2, p) in &composable {
            let lhs = mul(f, p);
            let rhs = q.compose(mul(f2, p2), mul(f1, p1));
            if rhs != Some(lhs) {
                report.push(
                    "exchange.interchange",
                    format!("φ̄₁={}, φ̄₂={}, ψ̄₁={}, ψ̄₂={}", q.fmt_mor(f1), q.fmt_mor(f2), q.fmt_mor(p1), q.fmt_mor(p2)),
                );
            }
        }
        for psi in 0..n {
            if let Some(rhs) = q.compose(mul(f2, psi), mul(f1, psi)) {
                if rhs != mul(f, psi) {
                    report.push(
                        "exchange.single",
                        format!("φ̄₁={}, φ̄₂={}, ψ̄={}", q.fmt_mor(f1), q.fmt_mor(f2), q.fmt_mor(psi)),
                    );
                }
            }
        }
    }
    report
}

/// Every quiver edge with a walk of length at most `max_len`.
pub fn all_edges(b: &Bundle, max_len: usize) -> Vec<QuiverEdge> {
    let c = b.cover();
    let mut out = Vec::new();
    for &set in b.family().members() {
        let walks = enumerate_paths(c, set, max_len).unwrap_or_default();
        for i in set.iter() {
            for walk in &walks {
                for deco in 0..b.quotient().mor_count() {
                    out.push(QuiverEdge { chart: i, label: set, walk: walk.clone(), deco });
                }
            }
        }
    }
    out
}

/// Raw words of one or two edges with total walk length at most `max_len`.
pub fn short_words(b: &Bundle, max_len: usize) -> Vec<Vec<QuiverEdge>> {
    let edges = all_edges(b, max_len);
    let mut by_source: HashMap<BundleObject, Vec<usize>> = HashMap::new();
    let ends: Vec<(BundleObject, BundleObject)> = edges.iter().map(|e| b.endpoints_unchecked(e)).collect();
    for (n, (s, _)) in ends.iter().enumerate() {
        by_source.entry(*s).or_default().push(n);
    }
    let mut out: Vec<Vec<QuiverEdge>> = edges.iter().map(|e| vec![e.clone()]).collect();
    for (n, e1) in edges.iter().enumerate() {
        for &m in by_source.get(&ends[n].1).map(Vec::as_slice).unwrap_or(&[]) {
            let e2 = &edges[m];
            if e1.walk.len() + e2.walk.len() <= max_len {
                out.push(vec![e1.clone(), e2.clone()]);
            }
        }
    }
    out
}

/// A raw morphism with its normal form.
#[derive(Debug, Clone)]
pub struct Sampled {
    pub raw: BundleMorphism,
    pub normal: BundleMorphism,
}

/// Identities plus every one- and two-edge word up to `max_len`, with
/// normal forms.
pub fn morphism_sample(b: &Bundle, max_len: usize) -> Vec<Sampled> {
    let mut out: Vec<Sampled> = b
        .objects()
        .into_iter()
        .map(|x| Sampled { raw: BundleMorphism::Identity(x), normal: BundleMorphism::Identity(x) })
        .collect();
    for w in short_words(b, max_len) {
        let raw = BundleMorphism::Chain(w);
        let normal = b.normal_form(&raw);
        out.push(Sampled { raw, normal });
    }
    out
}

/// Local trivialization `Φ_{i,I}`: bijective on objects over `U_I` and on
/// morphisms projecting into `U_I` (against `sample`), functorial,
/// equivariant, and compatible with the projections.
pub fn check_local_trivialization(b: &Bundle, i: usize, set: ChartSet, max_len: usize, sample: &[Sampled]) -> Report {
    let c = b.cover();
    let q = b.quotient();
    let tag = format!("Φ_({},{})", c.chart_id(i), c.fmt_set(set));
    let mut report = Report::new();
    if let Err(e) = b.require_local(i, set) {
        report.push("trivialization.domain", format!("{tag}: {e}"));
        return report;
    }

    let over: Vec<usize> = (0..c.vertex_count()).filter(|&u| c.in_overlap(set, u)).collect();
    let mut image = BTreeSet::new();
    for &u in &over {
        for g in 0..q.obj_count() {
            let x = b.trivialize_obj(i, set, u, g).expect("in domain");
            if b.project_obj(x) != u {
                report.push("trivialization.projection", format!("{tag}: object over {}", c.vertex_id(u)));
            }
            if !image.insert(x) {
                report.push("trivialization.objects", format!("{tag}: ({},{}) hits a repeated object", c.vertex_id(u), q.fmt_obj(g)));
            }
            for h in 0..q.obj_count() {
                let moved = b.trivialize_obj(i, set, u, b.obj_mul(g, h)).expect("in domain");
                if moved != b.act_obj(x, h) {
                    report.push("trivialization.equivariant", format!("{tag}: object ({},{})·{}", c.vertex_id(u), q.fmt_obj(g), q.fmt_obj(h)));
                }
            }
        }
    }
    let expected: BTreeSet<BundleObject> = b.objects().into_iter().filter(|x| over.contains(&x.vertex)).collect();
    if image != expected {
        report.push("trivialization.objects", format!("{tag}: image has {} objects, X over U_I has {}", image.len(), expected.len()));
    }

    let walks = enumerate_paths(c, set, max_len).unwrap_or_default();
    let mut domain: Vec<(PathMor, usize, BundleMorphism)> = Vec::new();
    let mut seen: HashMap<BundleMorphism, (PathMor, usize)> = HashMap::new();
    for walk in &walks {
        for phi in 0..q.mor_count() {
            let m = b.trivialize_mor(i, set, walk, phi).expect("in domain");
            let nf = b.normal_form(&m);
            if b.project(&nf) != *walk {
                report.push("trivialization.projection", format!("{tag}: π(Φ({}, {}))", c.fmt_walk(walk), q.fmt_mor(phi)));
            }
            if let Some((w0, p0)) = seen.insert(nf.clone(), (walk.clone(), phi)) {
                report.push(
                    "trivialization.injective",
                    format!("{tag}: ({}, {}) and ({}, {}) collide", c.fmt_walk(&w0), q.fmt_mor(p0), c.fmt_walk(walk), q.fmt_mor(phi)),
                );
            }
            for psi in 0..q.mor_count() {
                let direct = b.normal_form(&b.trivialize_mor(i, set, walk, b.mul(phi, psi)).expect("in domain"));
                if direct != b.normal_form(&b.act_mor(&nf, psi)) {
                    report.push(
                        "trivialization.equivariant",
                        format!("{tag}: ({}, {})·{}", c.fmt_walk(walk), q.fmt_mor(phi), q.fmt_mor(psi)),
                    );
                }
            }
            domain.push((walk.clone(), phi, nf));
        }
    }
    for s in sample {
        let walk = b.project(&s.normal);
        if walk.len() <= max_len && c.walk_inside(set, &walk) && !seen.contains_key(&s.normal) {
            report.push("trivialization.surjective", format!("{tag}: {} is not in the image", b.fmt_mor(&s.raw)));
        }
    }
    let mut by_start: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (n, (walk, phi, _)) in domain.iter().enumerate() {
        by_start.entry((walk.start, q.source(*phi))).or_default().push(n);
    }
    for (walk1, phi1, m1) in &domain {
        for &n2 in by_start.get(&(walk1.end, q.target(*phi1))).map(Vec::as_slice).unwrap_or(&[]) {
            let (walk2, phi2, m2) = &domain[n2];
            let whole_walk = compose_paths(walk2, walk1).expect("composable");
            let phi = q.compose(*phi2, *phi1).expect("composable");
            let direct = b.normal_form(&b.trivialize_mor(i, set, &whole_walk, phi).expect("in domain"));
            match b.mor_compose(m1, m2) {
                Ok(composite) if composite == direct => {}
                _ => report.push(
                    "trivialization.functorial",
                    format!(
                        "{tag}: ({}, {}) then ({}, {})",
                        c.fmt_walk(walk1),
                        q.fmt_mor(*phi1),
                        c.fmt_walk(walk2),
                        q.fmt_mor(*phi2)
                    ),
                ),
            }
        }
    }
    report
}

/// Counts gathered while checking the bundle axioms.
#[derive(Debug, Clone)]
pub struct BundleSummary {
    pub object_count: usize,
    pub fiber_sizes: Vec<usize>,
    pub sampled_morphisms: usize,
    pub distinct_morphisms: usize,
    pub report: Report,
}

/// Projection surjective on objects and on walks up to `max_len`, free action
/// on objects and on sampled morphisms, `π(p·g) = π(p)`, `π` functorial on
/// sampled composites, and every local trivialization.
pub fn check_bundle_axioms(b: &Bundle, max_len: usize) -> BundleSummary {
    let c = b.cover();
    let q = b.quotient();
    let (objects, mut report) = build_object_space(b);
    let mut fiber_sizes = vec![0; c.vertex_count()];
    for x in &objects {
        fiber_sizes[x.vertex] += 1;
    }
    for (u, &n) in fiber_sizes.iter().enumerate() {
        if n == 0 {
            report.push("projection.objects", format!("no object over {}", c.vertex_id(u)));
        }
    }
    for walk in enumerate_walks(c, max_len) {
        match b.lift_walk(&walk) {
            Ok(m) if b.project(&m) == walk => {}
            Ok(m) => report.push("projection.morphisms", format!("lift {} projects elsewhere", b.fmt_mor(&m))),
            Err(w) => report.push("projection.morphisms", w),
        }
    }
    let unit_obj = q.unit_obj();
    for &x in &objects {
        for g in 0..q.obj_count() {
            let y = b.act_obj(x, g);
            if g != unit_obj && y == x {
                report.push("action.free-objects", format!("{}·{} = itself", b.fmt_obj(x), q.fmt_obj(g)));
            }
            if b.project_obj(y) != b.project_obj(x) {
                report.push("action.projection", format!("π({}·{})", b.fmt_obj(x), q.fmt_obj(g)));
            }
        }
    }

    let sample = morphism_sample(b, max_len);
    for s in &sample {
        if let BundleMorphism::Chain(w) = &s.raw {
            let raw_walk = b.project(&s.raw);
            if b.project(&s.normal) != raw_walk {
                let composite = w.iter().skip(1).try_fold(w[0].walk.clone(), |acc, e| compose_paths(&e.walk, &acc));
                let shown = composite.map(|p| c.fmt_walk(&p)).unwrap_or_default();
                report.push("projection.functor", format!("{} projects off {}", b.fmt_mor(&s.raw), shown));
            }
        }
    }
    let distinct: Vec<&BundleMorphism> = {
        let mut seen = HashSet::new();
        sample.iter().map(|s| &s.normal).filter(|m| seen.insert(*m)).collect()
    };
    let unit_mor = q.unit_mor();
    for &m in &distinct {
        for psi in 0..q.mor_count() {
            let moved = b.normal_form(&b.act_mor(m, psi));
            if psi != unit_mor && moved == *m {
                report.push("action.free-morphisms", format!("{}·{} = itself", b.fmt_mor(m), q.fmt_mor(psi)));
            }
            if b.project(&moved) != b.project(m) {
                report.push("action.projection", format!("π({}·{})", b.fmt_mor(m), q.fmt_mor(psi)));
            }
        }
    }
    for &set in b.family().members() {
        for i in set.iter() {
            report.extend(check_local_trivialization(b, i, set, max_len, &sample));
        }
    }
    BundleSummary {
        object_count: objects.len(),
        fiber_sizes,
        sampled_morphisms: sample.len(),
        distinct_morphisms: distinct.len(),
        report,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::gerbal::{generate_gerbal, GerbalCocycle};
    use crate::quotient::{build_quotient, Variant};
    use crate::{base, presets};

    fn bundle(seed: u64) -> Bundle {
        let chain = Arc::new(presets::s3_chain());
        let gc = generate_gerbal(chain.clone(), Arc::new(base::line5w()), seed, true).unwrap();
        let q = build_quotient(chain, Variant::Tau).unwrap();
        Bundle::new(FunctorialCocycle::new(gc), q, 3).unwrap()
    }

    fn deco_between(b: &Bundle, x: usize, y: usize) -> usize {
        b.quotient().hom(x, y).next().unwrap()
    }

    #[test]
    fn object_count_on_line5w() {
        let b = bundle(7);
        let (objects, report) = build_object_space(&b);
        assert_eq!(objects.len(), 10);
        assert!(report.is_ok(), "{report}");
    }

    #[test]
    fn transported_triples_share_a_canonical_object() {
        let b = bundle(7);
        for g in 0..2 {
            let x = b.object(0, 2, g).unwrap();
            let y = b.object(1, 2, b.obj_mul(b.gbar(1, 0, 2), g)).unwrap();
            assert_eq!(x, y);
        }
    }

    #[test]
    fn edge_with_chart_outside_label_is_rejected() {
        let b = bundle(1);
        let walk = b.cover().walk_through(&[1, 2]).unwrap();
        assert!(matches!(b.edge(2, ChartSet::from_indices([0, 1]), walk, 0), Err(Error::Schema(_))));
    }

    #[test]
    fn reindexed_edge_is_equal() {
        let b = bundle(3);
        let walk = b.cover().walk_through(&[1, 2]).unwrap();
        for phi in 0..b.quotient().mor_count() {
            let e = b.edge(0, ChartSet::single(0), walk.clone(), phi).unwrap();
            let deco = b.mul(b.theta_bar(1, 0, &walk), phi);
            let f = b.edge(1, ChartSet::from_indices([1, 2]), walk.clone(), deco).unwrap();
            let (a, c) = (BundleMorphism::Chain(vec![e]), BundleMorphism::Chain(vec![f]));
            let w = b.equality_witness(&a, &c).expect("equal");
            assert_eq!(b.verify_moves(&a, &w.left).unwrap(), w.normal_form);
            assert_eq!(b.verify_moves(&c, &w.right).unwrap(), w.normal_form);
        }
    }

    #[test]
    fn split_halves_compose_to_the_whole() {
        let b = bundle(5);
        let q = b.quotient();
        let walk = b.cover().walk_through(&[0, 1, 2]).unwrap();
        for phi in 0..q.mor_count() {
            let whole = b.trivialize_mor(0, ChartSet::single(0), &walk, phi).unwrap();
            let first = b.trivialize_mor(0, ChartSet::single(0), &b.cover().walk_through(&[0, 1]).unwrap(), phi).unwrap();
            let second = b
                .trivialize_mor(0, ChartSet::single(0), &b.cover().walk_through(&[1, 2]).unwrap(), q.identity(q.target(phi)))
                .unwrap();
            assert_eq!(b.mor_compose(&first, &second).unwrap(), b.normal_form(&whole));
            assert_eq!(b.project(&whole), walk);
        }
    }

    #[test]
    fn different_walks_are_unequal() {
        let b = bundle(5);
        let a = b.trivialize_mor(0, ChartSet::single(0), &b.cover().walk_through(&[1, 2]).unwrap(), 0).unwrap();
        let c = b.trivialize_mor(0, ChartSet::single(0), &b.cover().walk_through(&[1, 0]).unwrap(), 0).unwrap();
        assert!(!b.mor_equal(&a, &c));
    }

    #[test]
    fn identity_edge_is_neutral_and_equals_the_marker() {
        let b = bundle(2);
        let q = b.quotient();
        let x = b.object(0, 1, 0).unwrap();
        let id_edge = b.trivialize_mor(0, ChartSet::single(0), &PathMor::identity(1), q.identity(0)).unwrap();
        assert_eq!(b.normal_form(&id_edge), BundleMorphism::Identity(x));
        let raw = BundleMorphism::Chain(vec![QuiverEdge {
            chart: 0,
            label: ChartSet::single(0),
            walk: PathMor::identity(1),
            deco: q.identity(0),
        }]);
        assert!(b.mor_equal(&raw, &BundleMorphism::Identity(x)));
        let step = b.lift_walk(&b.cover().walk_through(&[1, 2]).unwrap()).unwrap();
        let composite = b.mor_compose(&raw, &step).unwrap();
        assert_eq!(composite, b.normal_form(&step));
    }

    #[test]
    fn chains_of_unit_edges_associate() {
        let b = bundle(9);
        let c = b.cover();
        let parts: Vec<BundleMorphism> = [[0, 1], [1, 2], [2, 3]]
            .iter()
            .scan(b.object(0, 0, 1).unwrap(), |at, vs| {
                let walk = c.walk_through(vs).unwrap();
                let chart = c.charts_containing_walk(&walk).first().unwrap();
                let fiber = b.fiber_in(*at, chart);
                let deco = deco_between(&b, fiber, 1 - fiber);
                let m = b.trivialize_mor(chart, ChartSet::single(chart), &walk, deco).unwrap();
                *at = b.target(&m);
                Some(m)
            })
            .collect();
        let left = b.mor_compose(&b.mor_compose(&parts[0], &parts[1]).unwrap(), &parts[2]).unwrap();
        let right = b.mor_compose(&parts[0], &b.mor_compose(&parts[1], &parts[2]).unwrap()).unwrap();
        assert_eq!(left, right);
        assert_eq!(b.project(&left), c.walk_through(&[0, 1, 2, 3]).unwrap());
    }

    #[test]
    fn identity_marker_is_neutral() {
        let b = bundle(4);
        let m = b.lift_walk(&b.cover().walk_through(&[2, 3]).unwrap()).unwrap();
        let x = BundleMorphism::Identity(b.source(&m));
        assert_eq!(b.mor_compose(&x, &m).unwrap(), b.normal_form(&m));
        assert!(b.mor_compose(&m, &x).is_err());
    }

    #[test]
    fn action_by_identity_is_trivial() {
        let b = bundle(6);
        let q = b.quotient();
        let m = b.lift_walk(&b.cover().walk_through(&[0, 1, 2]).unwrap()).unwrap();
        let nf = b.normal_form(&m);
        assert_eq!(b.normal_form(&b.act_mor(&nf, q.unit_mor())), nf);
        let x = b.source(&m);
        assert_eq!(b.act_obj(x, q.unit_obj()), x);
        assert!(b.act(&Acted::Object(x), GroupElement::Morphism(0)).is_err());
    }

    #[test]
    fn exchange_law_holds_in_the_quotients() {
        for chain in [presets::s3_chain(), presets::s4_chain()] {
            let q = build_quotient(Arc::new(chain), Variant::Tau).unwrap();
            assert!(check_exchange_law(&q).is_ok());
        }
    }

    #[test]
    fn bundle_axioms_hold_for_trivial_cocycle() {
        let chain = Arc::new(presets::s3_chain());
        let gc = GerbalCocycle::trivial(chain.clone(), Arc::new(base::line5()));
        let q = build_quotient(chain, Variant::Tau).unwrap();
        let b = Bundle::new(FunctorialCocycle::new(gc), q, 2).unwrap();
        let summary = check_bundle_axioms(&b, 2);
        assert!(summary.report.is_ok(), "{}", summary.report);
    }

    #[test]
    fn uncovered_edge_breaks_morphism_surjectivity() {
        let cover = CoverComplex::new_unchecked(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                crate::base::Edge { id: "ab".into(), u: 0, v: 1 },
                crate::base::Edge { id: "bc".into(), u: 1, v: 2 },
            ],
            false,
            vec![("1".into(), vec![0, 1]), ("2".into(), vec![2])],
        )
        .unwrap();
        let chain = Arc::new(presets::s3_chain());
        let gc = GerbalCocycle::trivial(chain.clone(), Arc::new(cover));
        let q = build_quotient(chain, Variant::Tau).unwrap();
        let b = Bundle::new(FunctorialCocycle::new(gc), q, 2).unwrap();
        let summary = check_bundle_axioms(&b, 2);
        assert!(summary.report.has_law("projection.morphisms"));
        assert!(summary.report.violations.iter().any(|v| v.witness.contains("bc")));
    }

    #[test]
    fn failed_classical_cocycle_is_a_precondition_error() {
        let chain = Arc::new(presets::s3_chain());
        let mut gc = generate_gerbal(chain.clone(), Arc::new(base::line5w()), 1, true).unwrap();
        let s3 = chain.outer().top().clone();
        gc.set_h(0, 1, 1, s3.mul(s3.index_of("(12)").unwrap(), gc.h(0, 1, 1)));
        let q = build_quotient(chain, Variant::Tau).unwrap();
        let err = Bundle::new(FunctorialCocycle::new(gc), q, 3).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }
}
