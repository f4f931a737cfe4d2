//! The discretized base: a finite graph with an indexed cover, its walk
//! category, overlap categories and the family of nonempty overlaps.

use std::fmt;

use crate::error::{schema, Error, Result};
use crate::report::Report;

/// Maximum number of charts, so that index subsets fit in a `u32` mask.
pub const MAX_CHARTS: usize = 32;

/// A set of chart indices stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ChartSet(pub u32);

impl ChartSet {
    pub fn single(i: usize) -> Self {
        ChartSet(1 << i)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        ChartSet(indices.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_CHARTS && self.0 & (1 << i) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: ChartSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: ChartSet) -> ChartSet {
        ChartSet(self.0 | other.0)
    }

    pub fn with(self, i: usize) -> ChartSet {
        ChartSet(self.0 | (1 << i))
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..MAX_CHARTS).filter(move |&i| self.contains(i))
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub u: usize,
    pub v: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub edge: usize,
    pub forward: bool,
}

/// A walk in the base graph. The empty walk is the identity at `start`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathMor {
    pub start: usize,
    pub end: usize,
    pub steps: Vec<Step>,
}

impl PathMor {
    pub fn identity(v: usize) -> Self {
        PathMor { start: v, end: v, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }

    /// Splits off unit walks, one per step.
    pub fn unit_walks(&self, c: &CoverComplex) -> Vec<PathMor> {
        let mut at = self.start;
        self.steps
            .iter()
            .map(|&s| {
                let (from, to) = c.step_endpoints(s);
                debug_assert_eq!(from, at);
                at = to;
                PathMor { start: from, end: to, steps: vec![s] }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverComplex {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    directed: bool,
    chart_ids: Vec<String>,
    /// `charts[i][v]` iff vertex v lies in U_i.
    charts: Vec<Vec<bool>>,
}

impl CoverComplex {
    /// Builds a complex, checking the structural constraints only: known
    /// vertex indices, no self-loops, distinct ids, at most [`MAX_CHARTS`] charts.
    pub fn new_unchecked(
        vertices: Vec<String>,
        edges: Vec<Edge>,
        directed: bool,
        charts: Vec<(String, Vec<usize>)>,
    ) -> Result<Self> {
        let n = vertices.len();
        if n == 0 {
            return Err(schema("cover has no vertices"));
        }
        if charts.is_empty() || charts.len() > MAX_CHARTS {
            return Err(schema(format!("cover needs 1..={MAX_CHARTS} charts, got {}", charts.len())));
        }
        check_distinct("vertex", &vertices)?;
        check_distinct("edge", &edges.iter().map(|e| e.id.clone()).collect::<Vec<_>>())?;
        for e in &edges {
            if e.u >= n || e.v >= n {
                return Err(schema(format!("edge {} has an unknown endpoint", e.id)));
            }
            if e.u == e.v {
                return Err(schema(format!("edge {} is a self-loop", e.id)));
            }
        }
        let chart_ids: Vec<String> = charts.iter().map(|(id, _)| id.clone()).collect();
        check_distinct("chart", &chart_ids)?;
        let mut masks = Vec::with_capacity(charts.len());
        for (id, members) in &charts {
            let mut mask = vec![false; n];
            for &v in members {
                if v >= n {
                    return Err(schema(format!("chart {id} lists an unknown vertex")));
                }
                mask[v] = true;
            }
            masks.push(mask);
        }
        Ok(Self { vertices, edges, directed, chart_ids, charts: masks })
    }

    /// Builds a complex and enforces the cover properties: every vertex lies in
    /// some chart and every edge lies inside some chart.
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<Edge>,
        directed: bool,
        charts: Vec<(String, Vec<usize>)>,
    ) -> Result<Self> {
        let c = Self::new_unchecked(vertices, edges, directed, charts)?;
        let report = c.validate_cover();
        if report.is_ok() {
            Ok(c)
        } else {
            Err(Error::Law(report))
        }
    }

    pub fn validate_cover(&self) -> Report {
        let mut report = Report::new();
        for v in 0..self.vertex_count() {
            if self.charts_containing_vertex(v).is_empty() {
                report.push("cover.vertex", format!("vertex {} lies in no chart", self.vertices[v]));
            }
        }
        for (n, e) in self.edges.iter().enumerate() {
            if self.charts_containing_edge(n).is_empty() {
                report.push(
                    "cover.edge",
                    format!("edge {} ({}-{}) lies in no chart", e.id, self.vertices[e.u], self.vertices[e.v]),
                );
            }
        }
        report
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| schema(format!("unknown vertex {id:?}")))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn chart_count(&self) -> usize {
        self.charts.len()
    }

    pub fn chart_ids(&self) -> &[String] {
        &self.chart_ids
    }

    pub fn chart_id(&self, i: usize) -> &str {
        &self.chart_ids[i]
    }

    pub fn chart_index(&self, id: &str) -> Result<usize> {
        self.chart_ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| schema(format!("unknown chart {id:?}")))
    }

    pub fn all_charts(&self) -> ChartSet {
        ChartSet((1u64 << self.charts.len()).wrapping_sub(1) as u32)
    }

    pub fn chart_members(&self, i: usize) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.charts[i][v]).collect()
    }

    pub fn in_chart(&self, i: usize, v: usize) -> bool {
        self.charts[i][v]
    }

    pub fn in_overlap(&self, set: ChartSet, v: usize) -> bool {
        set.iter().all(|i| self.charts[i][v])
    }

    pub fn charts_containing_vertex(&self, v: usize) -> ChartSet {
        ChartSet::from_indices((0..self.chart_count()).filter(|&i| self.charts[i][v]))
    }

    pub fn charts_containing_edge(&self, e: usize) -> ChartSet {
        let Edge { u, v, .. } = self.edges[e];
        ChartSet::from_indices((0..self.chart_count()).filter(|&i| self.charts[i][u] && self.charts[i][v]))
    }

    /// Charts containing every vertex the walk visits.
    pub fn charts_containing_walk(&self, p: &PathMor) -> ChartSet {
        let mut set = self.charts_containing_vertex(p.start);
        for &s in &p.steps {
            set = ChartSet(set.0 & self.charts_containing_edge(s.edge).0);
        }
        set
    }

    pub fn walk_inside(&self, set: ChartSet, p: &PathMor) -> bool {
        set.is_subset(self.charts_containing_walk(p))
    }

    pub fn check_index_set(&self, set: ChartSet) -> Result<()> {
        if set.is_empty() {
            return Err(schema("empty index set"));
        }
        if !set.is_subset(self.all_charts()) {
            return Err(schema(format!("index set {set:?} names an unknown chart")));
        }
        Ok(())
    }

    /// Oriented `(tail, head)` of a step.
    pub fn step_endpoints(&self, s: Step) -> (usize, usize) {
        let e = &self.edges[s.edge];
        if s.forward {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        }
    }

    /// Steps leaving `v`, in (edge, orientation) order.
    pub fn steps_from(&self, v: usize) -> Vec<(Step, usize)> {
        let mut out = Vec::new();
        for (n, e) in self.edges.iter().enumerate() {
            if e.u == v {
                out.push((Step { edge: n, forward: true }, e.v));
            }
            if e.v == v && !self.directed {
                out.push((Step { edge: n, forward: false }, e.u));
            }
        }
        out.sort();
        out
    }

    /// Validates a walk against the graph and returns it with its end filled in.
    pub fn walk(&self, start: usize, steps: Vec<Step>) -> Result<PathMor> {
        if start >= self.vertex_count() {
            return Err(schema(format!("walk starts at unknown vertex {start}")));
        }
        let mut at = start;
        for &s in &steps {
            if s.edge >= self.edges.len() {
                return Err(schema(format!("walk uses unknown edge {}", s.edge)));
            }
            if !s.forward && self.directed {
                return Err(schema(format!("walk traverses directed edge {} backwards", self.edges[s.edge].id)));
            }
            let (from, to) = self.step_endpoints(s);
            if from != at {
                return Err(schema(format!(
                    "walk step over edge {} starts at {} but the walk is at {}",
                    self.edges[s.edge].id, self.vertices[from], self.vertices[at]
                )));
            }
            at = to;
        }
        Ok(PathMor { start, end: at, steps })
    }

    /// Walk along a vertex sequence, using the first edge joining each pair.
    pub fn walk_through(&self, vertices: &[usize]) -> Result<PathMor> {
        let (&start, rest) = vertices.split_first().ok_or_else(|| schema("empty vertex sequence"))?;
        let mut steps = Vec::new();
        let mut at = start;
        for &next in rest {
            let step = self
                .steps_from(at)
                .into_iter()
                .find(|&(_, to)| to == next)
                .map(|(s, _)| s)
                .ok_or_else(|| schema(format!("no edge from {} to {}", self.vertex_id(at), self.vertex_id(next))))?;
            steps.push(step);
            at = next;
        }
        self.walk(start, steps)
    }

    pub fn fmt_walk(&self, p: &PathMor) -> String {
        let mut s = self.vertices[p.start].clone();
        for &st in &p.steps {
            s.push('→');
            s.push_str(&self.vertices[self.step_endpoints(st).1]);
        }
        s
    }

    pub fn fmt_set(&self, set: ChartSet) -> String {
        let ids: Vec<&str> = set.iter().map(|i| self.chart_id(i)).collect();
        format!("{{{}}}", ids.join(","))
    }
}

fn check_distinct(kind: &str, ids: &[String]) -> Result<()> {
    let mut sorted: Vec<&String> = ids.iter().collect();
    sorted.sort();
    match sorted.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(schema(format!("duplicate {kind} id {:?}", w[0]))),
        None => Ok(()),
    }
}

impl fmt::Display for ChartSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", ids.join(","))
    }
}

/// `U_I`, as a sorted vertex list.
pub fn overlap(c: &CoverComplex, set: ChartSet) -> Result<Vec<usize>> {
    c.check_index_set(set)?;
    Ok((0..c.vertex_count()).filter(|&v| c.in_overlap(set, v)).collect())
}

/// Every walk of length at most `max_len` staying inside `U_I`, identities
/// included. Ordered by length, then start vertex, then step sequence.
pub fn enumerate_paths(c: &CoverComplex, set: ChartSet, max_len: usize) -> Result<Vec<PathMor>> {
    let inside = overlap(c, set)?;
    let mut mask = vec![false; c.vertex_count()];
    for &v in &inside {
        mask[v] = true;
    }
    Ok(walks_within(c, &mask, max_len))
}

/// Every walk of the base graph of length at most `max_len`, in the same
/// order as [`enumerate_paths`].
pub fn enumerate_walks(c: &CoverComplex, max_len: usize) -> Vec<PathMor> {
    walks_within(c, &vec![true; c.vertex_count()], max_len)
}

fn walks_within(c: &CoverComplex, mask: &[bool], max_len: usize) -> Vec<PathMor> {
    let inside: Vec<usize> = (0..c.vertex_count()).filter(|&v| mask[v]).collect();
    let adjacency: Vec<Vec<(Step, usize)>> = (0..c.vertex_count())
        .map(|v| c.steps_from(v).into_iter().filter(|&(_, to)| mask[to]).collect())
        .collect();
    let mut layer: Vec<PathMor> = inside.iter().map(|&v| PathMor::identity(v)).collect();
    let mut out = layer.clone();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &layer {
            for &(s, to) in &adjacency[p.end] {
                let mut steps = p.steps.clone();
                steps.push(s);
                next.push(PathMor { start: p.start, end: to, steps });
            }
        }
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `p2 ∘ p1`: walk `p1` then `p2`. Backtracking is kept.
pub fn compose_paths(p2: &PathMor, p1: &PathMor) -> Result<PathMor> {
    if p1.end != p2.start {
        return Err(Error::Composition(format!(
            "walk ending at vertex {} cannot be followed by a walk starting at {}",
            p1.end, p2.start
        )));
    }
    let mut steps = p1.steps.clone();
    steps.extend_from_slice(&p2.steps);
    Ok(PathMor { start: p1.start, end: p2.end, steps })
}

/// The nonempty index subsets with nonempty overlap, ordered by size then mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexFamily {
    members: Vec<ChartSet>,
}

impl IndexFamily {
    pub fn new(c: &CoverComplex) -> Self {
        let n = c.chart_count();
        let mut members: Vec<ChartSet> = (1..(1u64 << n))
            .map(|m| ChartSet(m as u32))
            .filter(|&s| (0..c.vertex_count()).any(|v| c.in_overlap(s, v)))
            .collect();
        members.sort_by_key(|s| (s.len(), s.0));
        Self { members }
    }

    pub fn members(&self) -> &[ChartSet] {
        &self.members
    }

    pub fn contains(&self, s: ChartSet) -> bool {
        self.members.binary_search_by_key(&(s.len(), s.0), |m| (m.len(), m.0)).is_ok()
    }

    /// Pairs `I ⊊ J` of members.
    pub fn inclusions(&self) -> impl Iterator<Item = (ChartSet, ChartSet)> + '_ {
        self.members.iter().flat_map(move |&i| {
            self.members.iter().filter(move |&&j| i != j && i.is_subset(j)).map(move |&j| (i, j))
        })
    }

    /// Downward closure: every nonempty subset of a member is a member.
    pub fn is_downward_closed(&self) -> bool {
        self.members.iter().all(|&s| {
            let mut sub = s.0;
            loop {
                sub = (sub.wrapping_sub(1)) & s.0;
                if sub == 0 {
                    return true;
                }
                if !self.contains(ChartSet(sub)) {
                    return false;
                }
            }
        })
    }
}

/// Checks that claimed walks of `U_I` really lie inside `U_I`.
pub fn check_claimed_paths(c: &CoverComplex, set: ChartSet, paths: &[PathMor]) -> Report {
    let mut report = Report::new();
    for p in paths {
        if let Some(&bad) = std::iter::once(&p.start)
            .chain(p.steps.iter().map(|s| &c.edges[s.edge].u).chain(p.steps.iter().map(|s| &c.edges[s.edge].v)))
            .find(|&&v| !c.in_overlap(set, v))
        {
            report.push(
                "inclusion.inside",
                format!("walk {} claimed in U_{} visits vertex {}", c.fmt_walk(p), c.fmt_set(set), c.vertex_id(bad)),
            );
        }
    }
    report
}

/// For every `I ⊆ J` in the index family, walks of `U_J` up to `max_len` are
/// walks of `U_I` with the same endpoints.
pub fn inclusion_consistency(c: &CoverComplex, max_len: usize) -> Report {
    let family = IndexFamily::new(c);
    let mut report = Report::new();
    for (small, large) in family.inclusions() {
        let Ok(inner) = enumerate_paths(c, large, max_len) else { continue };
        let Ok(outer) = enumerate_paths(c, small, max_len) else { continue };
        report.extend(check_claimed_paths(c, small, &inner));
        for p in &inner {
            match outer.binary_search_by(|q| (q.len(), q.start, &q.steps).cmp(&(p.len(), p.start, &p.steps))) {
                Ok(pos) if outer[pos].end == p.end => {}
                _ => report.push(
                    "inclusion.functor",
                    format!("walk {} of U_{} missing from U_{}", c.fmt_walk(p), c.fmt_set(large), c.fmt_set(small)),
                ),
            }
        }
    }
    report
}

fn path_graph(n: usize, directed: bool, charts: &[(&str, &[usize])]) -> CoverComplex {
    let vertices = (0..n).map(|v| v.to_string()).collect();
    let edges = (0..n - 1).map(|v| Edge { id: format!("e{v}"), u: v, v: v + 1 }).collect();
    let charts = charts.iter().map(|(id, vs)| (id.to_string(), vs.to_vec())).collect();
    CoverComplex::new(vertices, edges, directed, charts).expect("preset cover")
}

/// Path graph 0-1-2-3-4 with U₁={0,1,2}, U₂={1,2,3}, U₃={2,3,4}.
pub fn line5() -> CoverComplex {
    path_graph(5, false, &[("1", &[0, 1, 2]), ("2", &[1, 2, 3]), ("3", &[2, 3, 4])])
}

/// Path graph on five vertices with wide overlaps: U₁₂₃={1,2,3} has edges.
pub fn line5w() -> CoverComplex {
    path_graph(5, false, &[("1", &[0, 1, 2, 3]), ("2", &[1, 2, 3, 4]), ("3", &[0, 1, 2, 3, 4])])
}

/// Six-cycle covered by three arcs; the triple overlap is empty.
pub fn cycle6() -> CoverComplex {
    let vertices = (0..6).map(|v| v.to_string()).collect();
    let edges = (0..6).map(|v| Edge { id: format!("e{v}"), u: v, v: (v + 1) % 6 }).collect();
    let charts = vec![
        ("1".to_string(), vec![0, 1, 2]),
        ("2".to_string(), vec![2, 3, 4]),
        ("3".to_string(), vec![4, 5, 0]),
    ];
    CoverComplex::new(vertices, edges, false, charts).expect("preset cover")
}

/// Directed line 0→1→2→3 with U₁={0,1,2}, U₂={1,2,3}.
pub fn dirline3() -> CoverComplex {
    path_graph(4, true, &[("1", &[0, 1, 2]), ("2", &[1, 2, 3])])
}

pub fn cover(name: &str) -> Option<CoverComplex> {
    match name {
        "line5" => Some(line5()),
        "line5w" => Some(line5w()),
        "cycle6" => Some(cycle6()),
        "dirline3" => Some(dirline3()),
        _ => None,
    }
}
