//! The functorial cocycle of a gerbal cocycle: functors `θ_ik` on overlap
//! walk categories, the arrows `T_ikm(u)` and `Θ_ikm(γ)`, and exhaustive checks
//! of functoriality, naturality and the product relation.

use std::collections::BTreeMap;

use crate::base::{enumerate_paths, ChartSet, CoverComplex, PathMor};
use crate::crossed::{Arrow, CrossedModule};
use crate::error::{Error, Result};
use crate::gerbal::{derive_tower, loc3, DerivedTower, GerbalCocycle};
use crate::report::Report;

#[derive(Debug, Clone)]
pub struct FunctorialCocycle {
    gc: GerbalCocycle,
    tower: DerivedTower,
}

impl FunctorialCocycle {
    pub fn new(gc: GerbalCocycle) -> Self {
        let tower = derive_tower(&gc);
        Self { gc, tower }
    }

    /// Pairs a cocycle with a tower supplied by the caller, e.g. a corrupted one.
    pub fn with_tower(gc: GerbalCocycle, tower: DerivedTower) -> Self {
        Self { gc, tower }
    }

    pub fn gerbal(&self) -> &GerbalCocycle {
        &self.gc
    }

    pub fn tower(&self) -> &DerivedTower {
        &self.tower
    }

    pub fn tower_mut(&mut self) -> &mut DerivedTower {
        &mut self.tower
    }

    pub fn cover(&self) -> &CoverComplex {
        self.gc.cover()
    }

    pub fn module(&self) -> &CrossedModule {
        self.gc.chain().outer()
    }

    fn require(&self, set: ChartSet, p: &PathMor) -> Result<()> {
        if self.cover().walk_inside(set, p) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "walk {} does not lie inside U_{}",
                self.cover().fmt_walk(p),
                self.cover().fmt_set(set)
            )))
        }
    }

    /// `θ_ik(u) = g_ik(u)`.
    pub fn theta_obj(&self, i: usize, k: usize, u: usize) -> Result<usize> {
        self.require(ChartSet::from_indices([i, k]), &PathMor::identity(u))?;
        Ok(self.tower.g(i, k, u))
    }

    /// `θ_ik(γ) = (h_ik(γ₁) h_ik(γ₀)⁻¹, g_ik(γ₀))`.
    pub fn theta(&self, i: usize, k: usize, p: &PathMor) -> Result<Arrow> {
        self.require(ChartSet::from_indices([i, k]), p)?;
        Ok(self.theta_at(i, k, p.start, p.end))
    }

    /// θ_ik restricted to `U_ikm`.
    pub fn theta_restricted(&self, i: usize, k: usize, m: usize, p: &PathMor) -> Result<Arrow> {
        self.require(ChartSet::from_indices([i, k, m]), p)?;
        Ok(self.theta_at(i, k, p.start, p.end))
    }

    /// θ_ik on any walk from `u0` to `u1` inside `U_ik`.
    #[inline]
    pub fn theta_at(&self, i: usize, k: usize, u0: usize, u1: usize) -> Arrow {
        let h = self.module().top();
        Arrow::new(h.mul(self.gc.h(i, k, u1), h.inv(self.gc.h(i, k, u0))), self.tower.g(i, k, u0))
    }

    /// `T_ikm(u) = (h_ikm(u), g_ik(u) g_km(u))`.
    pub fn t_arrow(&self, i: usize, k: usize, m: usize, u: usize) -> Result<Arrow> {
        self.require(ChartSet::from_indices([i, k, m]), &PathMor::identity(u))?;
        Ok(self.t_at(i, k, m, u))
    }

    #[inline]
    fn t_at(&self, i: usize, k: usize, m: usize, u: usize) -> Arrow {
        let g = self.module().base();
        Arrow::new(self.tower.h3(i, k, m, u), g.mul(self.tower.g(i, k, u), self.tower.g(k, m, u)))
    }

    /// `Θ_ikm(γ) = (h_ikm(γ₁) h_ikm(γ₀)⁻¹, τ(h_ikm(γ₀)))`.
    pub fn big_theta(&self, i: usize, k: usize, m: usize, p: &PathMor) -> Result<Arrow> {
        self.require(ChartSet::from_indices([i, k, m]), p)?;
        Ok(self.big_theta_at(i, k, m, p.start, p.end))
    }

    fn big_theta_at(&self, i: usize, k: usize, m: usize, u0: usize, u1: usize) -> Arrow {
        let cm = self.module();
        let h = cm.top();
        let (a, b) = (self.tower.h3(i, k, m, u1), self.tower.h3(i, k, m, u0));
        Arrow::new(h.mul(a, h.inv(b)), cm.tau(b))
    }

    fn walks(&self, set: ChartSet, max_len: usize) -> Vec<PathMor> {
        enumerate_paths(self.cover(), set, max_len).unwrap_or_default()
    }

    fn pair_label(&self, i: usize, k: usize) -> String {
        format!("(i,k)=({},{})", self.cover().chart_id(i), self.cover().chart_id(k))
    }
}

/// `θ_ik(γ′∘γ) = θ_ik(γ′)∘θ_ik(γ)` for composable walks of length at most
/// `max_len` in `U_ik`, identities to identities, and `t(θ_ik(γ)) = g_ik(γ₁)`.
pub fn check_theta_functorial(fc: &FunctorialCocycle, i: usize, k: usize, max_len: usize) -> Report {
    let cm = fc.module();
    let c = fc.cover();
    let mut report = Report::new();
    let walks = fc.walks(ChartSet::from_indices([i, k]), max_len);
    let thetas: Vec<Arrow> = walks.iter().map(|p| fc.theta_at(i, k, p.start, p.end)).collect();
    for (p, &a) in walks.iter().zip(&thetas) {
        if p.is_identity() && a != cm.identity_at(fc.tower.g(i, k, p.start)) {
            report.push(
                "theta.identity",
                format!("{} at {}: θ(id) = {}", fc.pair_label(i, k), c.vertex_id(p.start), cm.fmt_arrow(a)),
            );
        }
        if cm.target(a) != fc.tower.g(i, k, p.end) {
            report.push(
                "theta.target",
                format!("{} γ={}: t(θ(γ)) ≠ g_ik(γ₁)", fc.pair_label(i, k), c.fmt_walk(p)),
            );
        }
    }
    let mut by_start: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (n, p) in walks.iter().enumerate() {
        by_start.entry(p.start).or_default().push(n);
    }
    for (n1, p1) in walks.iter().enumerate() {
        for &n2 in by_start.get(&p1.end).map(Vec::as_slice).unwrap_or(&[]) {
            let p2 = &walks[n2];
            let whole = fc.theta_at(i, k, p1.start, p2.end);
            match cm.try_compose(thetas[n2], thetas[n1]) {
                Some(composite) if composite == whole => {}
                Some(composite) => report.push(
                    "theta.functorial",
                    format!(
                        "{} γ={}, γ′={}: θ(γ′∘γ) = {} but θ(γ′)∘θ(γ) = {}",
                        fc.pair_label(i, k),
                        c.fmt_walk(p1),
                        c.fmt_walk(p2),
                        cm.fmt_arrow(whole),
                        cm.fmt_arrow(composite)
                    ),
                ),
                None => report.push(
                    "theta.functorial",
                    format!(
                        "{} γ={}, γ′={}: θ(γ′) and θ(γ) are not composable",
                        fc.pair_label(i, k),
                        c.fmt_walk(p1),
                        c.fmt_walk(p2)
                    ),
                ),
            }
        }
    }
    report
}

/// θ_ik agrees on any two walks with the same endpoints.
pub fn check_endpoint_dependence(fc: &FunctorialCocycle, i: usize, k: usize, max_len: usize) -> Report {
    let c = fc.cover();
    let mut report = Report::new();
    let mut seen: BTreeMap<(usize, usize), (PathMor, Arrow)> = BTreeMap::new();
    for p in fc.walks(ChartSet::from_indices([i, k]), max_len) {
        let a = fc.theta(i, k, &p).expect("enumerated walk lies in the overlap");
        match seen.get(&(p.start, p.end)) {
            Some((q, b)) if *b != a => report.push(
                "theta.endpoints",
                format!("{}: θ({}) ≠ θ({})", fc.pair_label(i, k), c.fmt_walk(q), c.fmt_walk(&p)),
            ),
            Some(_) => {}
            None => {
                seen.insert((p.start, p.end), (p, a));
            }
        }
    }
    report
}

/// `T_ikm(v) ∘ (θ_ik(γ)·θ_km(γ)) = θ_im(γ) ∘ T_ikm(u)` for every γ: u → v in
/// `U_ikm` up to `max_len`, plus `t(T_ikm(u)) = g_im(u)`.
pub fn check_naturality(fc: &FunctorialCocycle, i: usize, k: usize, m: usize, max_len: usize) -> Report {
    let cm = fc.module();
    let c = fc.cover();
    let mut report = Report::new();
    let set = ChartSet::from_indices([i, k, m]);
    for u in (0..c.vertex_count()).filter(|&u| c.in_overlap(set, u)) {
        let t = fc.t_at(i, k, m, u);
        if cm.target(t) != fc.tower.g(i, m, u) {
            report.push(
                "naturality.target",
                format!("{}: t(T_ikm) = {} but g_im = {}", loc3(c, i, k, m, u), cm.base().id(cm.target(t)), cm.base().id(fc.tower.g(i, m, u))),
            );
        }
    }
    for p in fc.walks(set, max_len) {
        let (u, v) = (p.start, p.end);
        let product = cm.product(fc.theta_at(i, k, u, v), fc.theta_at(k, m, u, v));
        let lhs = cm.try_compose(fc.t_at(i, k, m, v), product);
        let rhs = cm.try_compose(fc.theta_at(i, m, u, v), fc.t_at(i, k, m, u));
        if lhs.is_none() || lhs != rhs {
            let show = |a: Option<Arrow>| a.map_or("undefined".to_string(), |a| cm.fmt_arrow(a));
            report.push(
                "naturality.square",
                format!(
                    "(i,k,m)=({},{},{}) γ={}: T(v)∘(θ_ik·θ_km) = {} but θ_im∘T(u) = {}",
                    c.chart_id(i),
                    c.chart_id(k),
                    c.chart_id(m),
                    c.fmt_walk(&p),
                    show(lhs),
                    show(rhs)
                ),
            );
        }
    }
    report
}

/// `Θ_ikm(γ)·θ_ik(γ)·θ_km(γ) = θ_im(γ)` in `H ⋊ G` for every γ in `U_ikm`.
pub fn check_product_relation(fc: &FunctorialCocycle, i: usize, k: usize, m: usize, max_len: usize) -> Report {
    let cm = fc.module();
    let c = fc.cover();
    let mut report = Report::new();
    for p in fc.walks(ChartSet::from_indices([i, k, m]), max_len) {
        let (u, v) = (p.start, p.end);
        let lhs = cm.product(
            fc.big_theta_at(i, k, m, u, v),
            cm.product(fc.theta_at(i, k, u, v), fc.theta_at(k, m, u, v)),
        );
        let rhs = fc.theta_at(i, m, u, v);
        if lhs != rhs {
            report.push(
                "product.relation",
                format!(
                    "(i,k,m)=({},{},{}) γ={}: Θ·θ_ik·θ_km = {} but θ_im = {}",
                    c.chart_id(i),
                    c.chart_id(k),
                    c.chart_id(m),
                    c.fmt_walk(&p),
                    cm.fmt_arrow(lhs),
                    cm.fmt_arrow(rhs)
                ),
            );
        }
    }
    report
}

/// Ordered triples of charts with nonempty common overlap.
pub fn live_triples(c: &CoverComplex) -> Vec<(usize, usize, usize)> {
    let n = c.chart_count();
    let mut out = Vec::new();
    for i in 0..n {
        for k in 0..n {
            for m in 0..n {
                let set = ChartSet::from_indices([i, k, m]);
                if (0..c.vertex_count()).any(|u| c.in_overlap(set, u)) {
                    out.push((i, k, m));
                }
            }
        }
    }
    out
}

/// Ordered pairs of charts with nonempty overlap.
pub fn live_pairs(c: &CoverComplex) -> Vec<(usize, usize)> {
    let n = c.chart_count();
    (0..n)
        .flat_map(|i| (0..n).map(move |k| (i, k)))
        .filter(|&(i, k)| (0..c.vertex_count()).any(|u| c.in_chart(i, u) && c.in_chart(k, u)))
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::gerbal::generate_gerbal;
    use crate::{base, presets};

    fn generated(seed: u64) -> FunctorialCocycle {
        let gc = generate_gerbal(Arc::new(presets::s3_chain()), Arc::new(base::line5w()), seed, true).unwrap();
        FunctorialCocycle::new(gc)
    }

    #[test]
    fn identity_walk_maps_to_identity_arrow() {
        let fc = generated(1);
        let a = fc.theta(0, 1, &PathMor::identity(2)).unwrap();
        assert_eq!(a, fc.module().identity_at(fc.theta_obj(0, 1, 2).unwrap()));
    }

    #[test]
    fn trivial_cocycle_gives_unit_arrows() {
        let gc = GerbalCocycle::trivial(Arc::new(presets::s3_chain()), Arc::new(base::line5w()));
        let fc = FunctorialCocycle::new(gc);
        let p = fc.cover().walk_through(&[1, 2, 3]).unwrap();
        let unit = fc.module().unit();
        assert_eq!(fc.theta(0, 1, &p).unwrap(), unit);
        assert_eq!(fc.t_arrow(0, 1, 2, 2).unwrap(), unit);
        assert_eq!(fc.big_theta(0, 1, 2, &p).unwrap(), unit);
    }

    #[test]
    fn theta_on_unit_edge_matches_the_tables() {
        let gc = generate_gerbal(Arc::new(presets::s3_chain()), Arc::new(base::line5()), 9, true).unwrap();
        let fc = FunctorialCocycle::new(gc);
        let h = fc.module().top();
        let gamma = fc.cover().walk_through(&[1, 2]).unwrap();
        let expected = Arrow::new(h.mul(fc.gerbal().h(0, 1, 2), h.inv(fc.gerbal().h(0, 1, 1))), fc.tower().g(0, 1, 1));
        assert_eq!(fc.theta(0, 1, &gamma).unwrap(), expected);
    }

    #[test]
    fn walks_outside_the_overlap_are_domain_errors() {
        let fc = generated(1);
        let p = fc.cover().walk_through(&[3, 4]).unwrap();
        assert!(matches!(fc.theta(0, 1, &p), Err(Error::Domain(_))));
        assert!(matches!(fc.t_arrow(0, 1, 2, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn degenerate_triple_arrow_is_identity_sourced() {
        let fc = generated(4);
        let cm = fc.module();
        let t = fc.t_arrow(0, 0, 1, 2).unwrap();
        assert_eq!(t.top, cm.top().identity());
        assert_eq!(t.base, cm.base().mul(fc.tower().g(0, 0, 2), fc.tower().g(0, 1, 2)));
    }

    #[test]
    fn propositions_hold_for_generated_cocycles() {
        for seed in 0..5 {
            let fc = generated(seed);
            for (i, k) in live_pairs(fc.cover()) {
                assert!(check_theta_functorial(&fc, i, k, 3).is_ok());
                assert!(check_endpoint_dependence(&fc, i, k, 3).is_ok());
            }
            for (i, k, m) in live_triples(fc.cover()) {
                assert!(check_naturality(&fc, i, k, m, 3).is_ok());
                assert!(check_product_relation(&fc, i, k, m, 3).is_ok());
            }
        }
    }

    #[test]
    fn corrupted_h_breaks_functoriality() {
        let fc = generated(3);
        let mut gc = fc.gerbal().clone();
        let s3 = gc.chain().outer().top().clone();
        gc.set_h(0, 1, 2, s3.mul(s3.index_of("(12)").unwrap(), gc.h(0, 1, 2)));
        let broken = FunctorialCocycle::with_tower(gc, fc.tower().clone());
        let report = check_theta_functorial(&broken, 0, 1, 3);
        assert!(report.has_law("theta.functorial"));
    }

    #[test]
    fn corrupted_j_breaks_naturality() {
        let mut fc = generated(3);
        let a3 = fc.gerbal().chain().inner().top().clone();
        let s3 = fc.module().top().clone();
        let j = fc.gerbal().j(0, 1, 2, 2);
        let changed = a3.mul(a3.index_of("(123)").unwrap(), j);
        fc.tower_mut().set_h3(0, 1, 2, 2, s3.index_of(a3.id(changed)).unwrap());
        let report = check_naturality(&fc, 0, 1, 2, 3);
        assert!(report.has_law("naturality.square"));
        assert!(check_product_relation(&fc, 0, 1, 2, 3).has_law("product.relation"));
    }
}
