//! Gerbal cocycles `(h_ik, j_ikm)` over a cover, the derived tower
//! `(g_ik, h_ikm)`, the second gerbe relation and a seeded generator.
//!
//! Data is indexed by ordered pairs and triples of charts, repeated indices
//! included, and is required on every vertex of the corresponding overlap.
//! Generated cocycles use the diagonal convention `h_ii ≡ e` and `j ≡ e` on
//! the degenerate triples `(i,i,m)`, `(i,m,m)`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::base::{ChartSet, CoverComplex};
use crate::crossed::ChainedCrossedModules;
use crate::error::{schema, Error, Result};
use crate::report::Report;

const NONE: usize = usize::MAX;

/// Values indexed by `(i, k, u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTable {
    charts: usize,
    vertices: usize,
    data: Vec<usize>,
}

impl PairTable {
    pub fn empty(charts: usize, vertices: usize) -> Self {
        Self { charts, vertices, data: vec![NONE; charts * charts * vertices] }
    }

    fn slot(&self, i: usize, k: usize, u: usize) -> usize {
        (i * self.charts + k) * self.vertices + u
    }

    pub fn get(&self, i: usize, k: usize, u: usize) -> Option<usize> {
        let v = self.data[self.slot(i, k, u)];
        (v != NONE).then_some(v)
    }

    pub fn set(&mut self, i: usize, k: usize, u: usize, value: usize) {
        let s = self.slot(i, k, u);
        self.data[s] = value;
    }
}

/// Values indexed by `(i, k, m, u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleTable {
    charts: usize,
    vertices: usize,
    data: Vec<usize>,
}

impl TripleTable {
    pub fn empty(charts: usize, vertices: usize) -> Self {
        Self { charts, vertices, data: vec![NONE; charts * charts * charts * vertices] }
    }

    fn slot(&self, i: usize, k: usize, m: usize, u: usize) -> usize {
        ((i * self.charts + k) * self.charts + m) * self.vertices + u
    }

    pub fn get(&self, i: usize, k: usize, m: usize, u: usize) -> Option<usize> {
        let v = self.data[self.slot(i, k, m, u)];
        (v != NONE).then_some(v)
    }

    pub fn set(&mut self, i: usize, k: usize, m: usize, u: usize, value: usize) {
        let s = self.slot(i, k, m, u);
        self.data[s] = value;
    }
}

/// Every `(i, k, u)` with `u ∈ U_ik`, in index order.
pub fn pair_domain(c: &CoverComplex) -> Vec<(usize, usize, usize)> {
    let n = c.chart_count();
    let mut out = Vec::new();
    for i in 0..n {
        for k in 0..n {
            for u in 0..c.vertex_count() {
                if c.in_chart(i, u) && c.in_chart(k, u) {
                    out.push((i, k, u));
                }
            }
        }
    }
    out
}

/// Every `(i, k, m, u)` with `u ∈ U_ikm`, in index order.
pub fn triple_domain(c: &CoverComplex) -> Vec<(usize, usize, usize, usize)> {
    let n = c.chart_count();
    let mut out = Vec::new();
    for i in 0..n {
        for k in 0..n {
            for m in 0..n {
                for u in 0..c.vertex_count() {
                    if c.in_overlap(ChartSet::from_indices([i, k, m]), u) {
                        out.push((i, k, m, u));
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct GerbalCocycle {
    chain: Arc<ChainedCrossedModules>,
    cover: Arc<CoverComplex>,
    h: PairTable,
    j: TripleTable,
}

impl GerbalCocycle {
    /// Checks that both tables are dense over their domains and hold valid
    /// element indices.
    pub fn new(chain: Arc<ChainedCrossedModules>, cover: Arc<CoverComplex>, h: PairTable, j: TripleTable) -> Result<Self> {
        let nh = chain.outer().top().order();
        let nj = chain.inner().top().order();
        let shape = (cover.chart_count(), cover.vertex_count());
        if (h.charts, h.vertices) != shape || (j.charts, j.vertices) != shape {
            return Err(schema("cocycle tables do not match the cover"));
        }
        for (i, k, u) in pair_domain(&cover) {
            match h.get(i, k, u) {
                Some(x) if x < nh => {}
                Some(_) => return Err(schema(format!("h value out of range at {}", loc2(&cover, i, k, u)))),
                None => return Err(schema(format!("missing h entry at {}", loc2(&cover, i, k, u)))),
            }
        }
        for (i, k, m, u) in triple_domain(&cover) {
            match j.get(i, k, m, u) {
                Some(x) if x < nj => {}
                Some(_) => return Err(schema(format!("j value out of range at {}", loc3(&cover, i, k, m, u)))),
                None => return Err(schema(format!("missing j entry at {}", loc3(&cover, i, k, m, u)))),
            }
        }
        Ok(Self { chain, cover, h, j })
    }

    /// `h ≡ e`, `j ≡ e`.
    pub fn trivial(chain: Arc<ChainedCrossedModules>, cover: Arc<CoverComplex>) -> Self {
        let (n, v) = (cover.chart_count(), cover.vertex_count());
        let mut h = PairTable::empty(n, v);
        let mut j = TripleTable::empty(n, v);
        let eh = chain.outer().top().identity();
        let ej = chain.inner().top().identity();
        for (i, k, u) in pair_domain(&cover) {
            h.set(i, k, u, eh);
        }
        for (i, k, m, u) in triple_domain(&cover) {
            j.set(i, k, m, u, ej);
        }
        Self { chain, cover, h, j }
    }

    pub fn chain(&self) -> &Arc<ChainedCrossedModules> {
        &self.chain
    }

    pub fn cover(&self) -> &Arc<CoverComplex> {
        &self.cover
    }

    /// `h_ik(u)`; `u` must lie in `U_ik`.
    #[inline]
    pub fn h(&self, i: usize, k: usize, u: usize) -> usize {
        self.h.data[self.h.slot(i, k, u)]
    }

    /// `j_ikm(u)`; `u` must lie in `U_ikm`.
    #[inline]
    pub fn j(&self, i: usize, k: usize, m: usize, u: usize) -> usize {
        self.j.data[self.j.slot(i, k, m, u)]
    }

    pub fn h_table(&self) -> &PairTable {
        &self.h
    }

    pub fn j_table(&self) -> &TripleTable {
        &self.j
    }

    pub fn set_h(&mut self, i: usize, k: usize, u: usize, value: usize) {
        self.h.set(i, k, u, value);
    }

    pub fn set_j(&mut self, i: usize, k: usize, m: usize, u: usize, value: usize) {
        self.j.set(i, k, m, u, value);
    }
}

pub(crate) fn loc2(c: &CoverComplex, i: usize, k: usize, u: usize) -> String {
    format!("(i,k,u)=({},{},{})", c.chart_id(i), c.chart_id(k), c.vertex_id(u))
}

pub(crate) fn loc3(c: &CoverComplex, i: usize, k: usize, m: usize, u: usize) -> String {
    format!("(i,k,m,u)=({},{},{},{})", c.chart_id(i), c.chart_id(k), c.chart_id(m), c.vertex_id(u))
}

/// `h_im(u) = τ′(j_ikm(u)) h_ik(u) h_km(u)` on every triple overlap.
pub fn validate_gerbal(gc: &GerbalCocycle) -> Report {
    let inner = gc.chain.inner();
    let h_grp = inner.base();
    let mut report = Report::new();
    for (i, k, m, u) in triple_domain(&gc.cover) {
        let lhs = gc.h(i, m, u);
        let rhs = h_grp.mul3(inner.tau(gc.j(i, k, m, u)), gc.h(i, k, u), gc.h(k, m, u));
        if lhs != rhs {
            report.push(
                "gerbal.relation",
                format!(
                    "{}: h_im = {} but τ′(j_ikm) h_ik h_km = {}",
                    loc3(&gc.cover, i, k, m, u),
                    h_grp.id(lhs),
                    h_grp.id(rhs)
                ),
            );
        }
    }
    report
}

/// `g_ik = τ(h_ik)` and `h_ikm = τ′(j_ikm)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedTower {
    g: PairTable,
    h3: TripleTable,
}

impl DerivedTower {
    #[inline]
    pub fn g(&self, i: usize, k: usize, u: usize) -> usize {
        self.g.data[self.g.slot(i, k, u)]
    }

    #[inline]
    pub fn h3(&self, i: usize, k: usize, m: usize, u: usize) -> usize {
        self.h3.data[self.h3.slot(i, k, m, u)]
    }

    pub fn set_g(&mut self, i: usize, k: usize, u: usize, value: usize) {
        self.g.set(i, k, u, value);
    }

    pub fn set_h3(&mut self, i: usize, k: usize, m: usize, u: usize, value: usize) {
        self.h3.set(i, k, m, u, value);
    }
}

pub fn derive_tower(gc: &GerbalCocycle) -> DerivedTower {
    let (n, v) = (gc.cover.chart_count(), gc.cover.vertex_count());
    let mut g = PairTable::empty(n, v);
    let mut h3 = TripleTable::empty(n, v);
    for (i, k, u) in pair_domain(&gc.cover) {
        g.set(i, k, u, gc.chain.outer().tau(gc.h(i, k, u)));
    }
    for (i, k, m, u) in triple_domain(&gc.cover) {
        h3.set(i, k, m, u, gc.chain.inner().tau(gc.j(i, k, m, u)));
    }
    DerivedTower { g, h3 }
}

/// Re-verifies `h_im = h_ikm h_ik h_km` and `g_im = τ(h_ikm) g_ik g_km`.
pub fn check_tower(gc: &GerbalCocycle, tower: &DerivedTower) -> Report {
    let outer = gc.chain.outer();
    let (g_grp, h_grp) = (outer.base(), outer.top());
    let mut report = Report::new();
    for (i, k, m, u) in triple_domain(&gc.cover) {
        let h3 = tower.h3(i, k, m, u);
        let lhs = gc.h(i, m, u);
        let rhs = h_grp.mul3(h3, gc.h(i, k, u), gc.h(k, m, u));
        if lhs != rhs {
            report.push(
                "tower.h",
                format!("{}: h_im = {} but h_ikm h_ik h_km = {}", loc3(&gc.cover, i, k, m, u), h_grp.id(lhs), h_grp.id(rhs)),
            );
        }
        let lhs = tower.g(i, m, u);
        let rhs = g_grp.mul3(outer.tau(h3), tower.g(i, k, u), tower.g(k, m, u));
        if lhs != rhs {
            report.push(
                "tower.g",
                format!(
                    "{}: g_im = {} but τ(h_ikm) g_ik g_km = {}",
                    loc3(&gc.cover, i, k, m, u),
                    g_grp.id(lhs),
                    g_grp.id(rhs)
                ),
            );
        }
    }
    report
}

/// `h_ijm α_{g_ij}(h_jkm) = h_ikm h_ijk` at every vertex of every quadruple
/// overlap `U_ijkm`, repeated indices included.
pub fn check_second_gerbe(gc: &GerbalCocycle, tower: &DerivedTower) -> Report {
    let c = &gc.cover;
    let outer = gc.chain.outer();
    let h_grp = outer.top();
    let n = c.chart_count();
    let mut report = Report::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for m in 0..n {
                    let set = ChartSet::from_indices([i, j, k, m]);
                    for u in (0..c.vertex_count()).filter(|&u| c.in_overlap(set, u)) {
                        let lhs = h_grp.mul(tower.h3(i, j, m, u), outer.act(tower.g(i, j, u), tower.h3(j, k, m, u)));
                        let rhs = h_grp.mul(tower.h3(i, k, m, u), tower.h3(i, j, k, u));
                        if lhs != rhs {
                            report.push(
                                "gerbe.second",
                                format!(
                                    "(i,j,k,m,u)=({},{},{},{},{}): h_ijm α_g_ij(h_jkm) = {} but h_ikm h_ijk = {}",
                                    c.chart_id(i),
                                    c.chart_id(j),
                                    c.chart_id(k),
                                    c.chart_id(m),
                                    c.vertex_id(u),
                                    h_grp.id(lhs),
                                    h_grp.id(rhs)
                                ),
                            );
                        }
                    }
                }
            }
        }
    }
    report
}

/// Seeded generator: `h_ik(u) = τ′(a_ik(u)) f_i(u) f_k(u)⁻¹` with `j_ikm` solved
/// from the gerbal relation.
///
/// Randomness comes from `ChaCha8Rng::seed_from_u64(seed)`; every draw is
/// `gen_range(0..order)` on the element list. Draw order: `f_i(u)` for each
/// chart `i` and each `u ∈ U_i` in index order, then (with noise on) `a_ik(u)`
/// for each ordered pair `i ≠ k` and `u ∈ U_ik` in index order. `a_ii ≡ e`.
/// The solved `j_ikm(u)` is `e` when the discrepancy is trivial, otherwise its
/// preimage under τ′ with the smallest element index.
pub fn generate_gerbal(
    chain: Arc<ChainedCrossedModules>,
    cover: Arc<CoverComplex>,
    seed: u64,
    noise: bool,
) -> Result<GerbalCocycle> {
    let inner = chain.inner().clone();
    let (h_grp, j_grp) = (inner.base().clone(), inner.top().clone());
    let (n, nv) = (cover.chart_count(), cover.vertex_count());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut f = vec![vec![NONE; nv]; n];
    for (i, row) in f.iter_mut().enumerate() {
        for u in cover.chart_members(i) {
            row[u] = rng.gen_range(0..h_grp.order());
        }
    }
    let mut a = PairTable::empty(n, nv);
    for (i, k, u) in pair_domain(&cover) {
        let value = if noise && i != k { rng.gen_range(0..j_grp.order()) } else { j_grp.identity() };
        a.set(i, k, u, value);
    }

    let mut h = PairTable::empty(n, nv);
    for (i, k, u) in pair_domain(&cover) {
        let value = h_grp.mul3(inner.tau(a.get(i, k, u).unwrap()), f[i][u], h_grp.inv(f[k][u]));
        h.set(i, k, u, value);
    }

    let mut preimages = vec![Vec::new(); h_grp.order()];
    for x in j_grp.elements() {
        preimages[inner.tau(x)].push(x);
    }
    let mut j = TripleTable::empty(n, nv);
    for (i, k, m, u) in triple_domain(&cover) {
        let d = h_grp.mul(h.get(i, m, u).unwrap(), h_grp.inv(h_grp.mul(h.get(i, k, u).unwrap(), h.get(k, m, u).unwrap())));
        let value = if d == h_grp.identity() {
            j_grp.identity()
        } else {
            *preimages[d].first().ok_or_else(|| {
                Error::Invariant(format!(
                    "discrepancy {} at {} lies outside τ′(J)",
                    h_grp.id(d),
                    loc3(&cover, i, k, m, u)
                ))
            })?
        };
        j.set(i, k, m, u, value);
    }
    GerbalCocycle::new(chain, cover, h, j)
}
