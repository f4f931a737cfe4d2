//! Quotients of the categorical group by the chained module: objects
//! `G/ττ′(J)`, morphisms `(H ⋊ G)/J_H` (variant [`Variant::Full`]) or their
//! restrictions to `τ(H)` and `H ⋊ τ(H)` (variant [`Variant::Tau`]).
//!
//! Cosets are left cosets `xN`; the canonical representative of a coset is its
//! element with the smallest index (for arrows, the smallest `(h, g)` pair).

use std::fmt;
use std::sync::Arc;

use crate::base::ChartSet;
use crate::crossed::{Arrow, ChainedCrossedModules, CrossedModule};
use crate::error::{Error, Result};
use crate::functorial::{live_triples, FunctorialCocycle};
use crate::gerbal::loc3;
use crate::group::validate_hom;
use crate::report::Report;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Objects `G/ττ′(J)`, morphisms `(H ⋊ G)/J_H`.
    Full,
    /// Objects `τ(H)/ττ′(J)`, morphisms `(H ⋊ τ(H))/J_H`.
    Tau,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Full => "full",
            Variant::Tau => "tau",
        })
    }
}

/// Left cosets of a subgroup inside a subset of a finite universe `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetSpace {
    members: Vec<usize>,
    subgroup: Vec<usize>,
    coset_of: Vec<usize>,
    reps: Vec<usize>,
}

impl CosetSpace {
    /// Partitions `members` into the cosets `x·subgroup`. Fails if some
    /// `x·n` leaves `members` or the cosets do not all have `|subgroup|`
    /// elements.
    pub fn left(universe: usize, members: &[usize], subgroup: &[usize], mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let mut members = members.to_vec();
        members.sort_unstable();
        members.dedup();
        let mut subgroup = subgroup.to_vec();
        subgroup.sort_unstable();
        subgroup.dedup();
        let mut coset_of = vec![NONE; universe];
        let mut reps = Vec::new();
        for &x in &members {
            if coset_of[x] != NONE {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for &n in &subgroup {
                let y = mul(x, n);
                if members.binary_search(&y).is_err() {
                    return Err(Error::Invariant(format!("coset of {x} leaves the ambient set at {y}")));
                }
                if coset_of[y] != NONE && coset_of[y] != id {
                    return Err(Error::Invariant(format!("cosets of {x} and {} overlap", reps[coset_of[y]])));
                }
                coset_of[y] = id;
            }
        }
        let space = Self { members, subgroup, coset_of, reps };
        for c in 0..space.len() {
            if space.coset_members(c).count() != space.subgroup.len() {
                return Err(Error::Invariant(format!("coset of {} has the wrong size", space.reps[c])));
            }
        }
        Ok(space)
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn subgroup(&self) -> &[usize] {
        &self.subgroup
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    /// Coset index of `x`, if `x` is an ambient member.
    pub fn coset(&self, x: usize) -> Option<usize> {
        self.coset_of.get(x).copied().filter(|&c| c != NONE)
    }

    pub fn rep(&self, c: usize) -> usize {
        self.reps[c]
    }

    pub fn coset_members(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied().filter(move |&x| self.coset_of[x] == c)
    }
}

/// `J_H = {(τ′(j), ττ′(j′))}` as a sorted arrow list.
pub fn build_jh(chain: &ChainedCrossedModules) -> Vec<Arrow> {
    let inner = chain.inner();
    let mut out: Vec<Arrow> = inner
        .top()
        .elements()
        .flat_map(|j| chain.double_image().into_iter().map(move |g| Arrow::new(inner.tau(j), g)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Conjugating group for the normality check of `J_H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Conjugate by `H ⋊ τ(H)`.
    Tau,
    /// Conjugate by all of `H ⋊ G`.
    Full,
}

fn scope_arrows(cm: &CrossedModule, scope: Scope) -> Vec<Arrow> {
    let image = cm.boundary_image();
    cm.arrows().filter(|a| scope == Scope::Full || image[a.base]).collect()
}

/// Every `y n y⁻¹` (y in `conjugators`, n in `subset`) lies in `subset`, and
/// `subset` is closed under the product.
pub fn check_normal_subset(cm: &CrossedModule, subset: &[Arrow], conjugators: &[Arrow]) -> Report {
    let mut inside = vec![false; cm.arrow_count()];
    for &a in subset {
        inside[cm.arrow_index(a)] = true;
    }
    let mut report = Report::new();
    for &a in subset {
        for &b in subset {
            let p = cm.product(a, b);
            if !inside[cm.arrow_index(p)] {
                report.push(
                    "jh.subgroup",
                    format!("{}·{} = {} ∉ J_H", cm.fmt_arrow(a), cm.fmt_arrow(b), cm.fmt_arrow(p)),
                );
            }
        }
    }
    for &y in conjugators {
        let yi = cm.product_inverse(y);
        for &n in subset {
            let c = cm.product(cm.product(y, n), yi);
            if !inside[cm.arrow_index(c)] {
                report.push(
                    "jh.normal",
                    format!("{} conjugates {} to {} ∉ J_H", cm.fmt_arrow(y), cm.fmt_arrow(n), cm.fmt_arrow(c)),
                );
            }
        }
    }
    report
}

/// `τ̄(j, h) = (τ′(j), τ(h))` is a homomorphism `J ⋊ H → H ⋊ G`, and `J_H` is
/// a normal subgroup of the scope group.
pub fn check_jh_normal(chain: &ChainedCrossedModules, scope: Scope) -> Report {
    let (outer, inner) = (chain.outer(), chain.inner());
    let mut report = validate_hom(inner.boundary());
    report.extend(validate_hom(outer.boundary()));
    if !report.is_ok() {
        return report;
    }
    let tau_bar = |a: Arrow| Arrow::new(inner.tau(a.top), outer.tau(a.base));
    for a in inner.arrows() {
        for b in inner.arrows() {
            let lhs = tau_bar(inner.product(a, b));
            let rhs = outer.product(tau_bar(a), tau_bar(b));
            if lhs != rhs {
                report.push(
                    "tau-bar.hom",
                    format!("τ̄({}·{}) = {} but τ̄·τ̄ = {}", inner.fmt_arrow(a), inner.fmt_arrow(b), outer.fmt_arrow(lhs), outer.fmt_arrow(rhs)),
                );
            }
        }
    }
    report.extend(check_normal_subset(outer, &build_jh(chain), &scope_arrows(outer, scope)));
    report
}

/// Number of conjugations performed by [`check_jh_normal`].
pub fn jh_conjugation_count(chain: &ChainedCrossedModules, scope: Scope) -> usize {
    scope_arrows(chain.outer(), scope).len() * build_jh(chain).len()
}

#[derive(Debug, Clone)]
pub struct QuotientCatGroup {
    variant: Variant,
    chain: Arc<ChainedCrossedModules>,
    objects: CosetSpace,
    morphisms: CosetSpace,
    source: Vec<usize>,
    target: Vec<usize>,
    identity: Vec<usize>,
    compose: Vec<usize>,
    obj_mul: Option<Vec<usize>>,
    mor_mul: Option<Vec<usize>>,
}

/// Builds the quotient and verifies that source, target and composition (and,
/// when the kernels are normal, both products) descend to cosets. A descent
/// failure is an [`Error::Invariant`].
pub fn build_quotient(chain: Arc<ChainedCrossedModules>, variant: Variant) -> Result<QuotientCatGroup> {
    let q = assemble(chain, variant)?;
    let report = verify_descent(&q);
    if report.is_ok() {
        Ok(q)
    } else {
        Err(Error::Invariant(format!("quotient descent failed: {report}")))
    }
}

fn assemble(chain: Arc<ChainedCrossedModules>, variant: Variant) -> Result<QuotientCatGroup> {
    let cm = chain.outer().clone();
    let g_grp = cm.base().clone();
    let image = cm.boundary_image();
    let obj_members: Vec<usize> = g_grp.elements().filter(|&g| variant == Variant::Full || image[g]).collect();
    let objects = CosetSpace::left(g_grp.order(), &obj_members, &chain.double_image(), |a, b| g_grp.mul(a, b))?;
    let mor_members: Vec<usize> = cm
        .arrows()
        .filter(|a| variant == Variant::Full || image[a.base])
        .map(|a| cm.arrow_index(a))
        .collect();
    let jh: Vec<usize> = build_jh(&chain).into_iter().map(|a| cm.arrow_index(a)).collect();
    let morphisms = CosetSpace::left(cm.arrow_count(), &mor_members, &jh, |x, y| {
        cm.arrow_index(cm.product(cm.arrow_at(x), cm.arrow_at(y)))
    })?;

    let obj = |g: usize| objects.coset(g).ok_or_else(|| Error::Invariant(format!("object {} outside the quotient", g_grp.id(g))));
    let mut source = Vec::with_capacity(morphisms.len());
    let mut target = Vec::with_capacity(morphisms.len());
    for &r in morphisms.reps() {
        let a = cm.arrow_at(r);
        source.push(obj(cm.source(a))?);
        target.push(obj(cm.target(a))?);
    }
    let mut identity = Vec::with_capacity(objects.len());
    for &g in objects.reps() {
        identity.push(morphisms.coset(cm.arrow_index(cm.identity_at(g))).expect("identity arrow is a member"));
    }
    let n = morphisms.len();
    let mut compose = vec![NONE; n * n];
    for c1 in 0..n {
        let a1 = cm.arrow_at(morphisms.rep(c1));
        let t1 = cm.target(a1);
        for c2 in 0..n {
            if target[c1] != source[c2] {
                continue;
            }
            let a2 = morphisms
                .coset_members(c2)
                .map(|x| cm.arrow_at(x))
                .find(|&a| cm.source(a) == t1)
                .ok_or_else(|| Error::Invariant(format!("no representative of coset {c2} starts at {}", g_grp.id(t1))))?;
            compose[c2 * n + c1] = morphisms.coset(cm.arrow_index(cm.compose_unchecked(a2, a1))).expect("composite is a member");
        }
    }

    let obj_normal = objects
        .members()
        .iter()
        .all(|&x| objects.subgroup().iter().all(|&s| objects.coset(g_grp.conj(x, s)) == objects.coset(g_grp.identity())));
    let obj_mul = obj_normal.then(|| {
        let k = objects.len();
        let mut t = vec![0; k * k];
        for a in 0..k {
            for b in 0..k {
                t[a * k + b] = objects.coset(g_grp.mul(objects.rep(a), objects.rep(b))).expect("closed");
            }
        }
        t
    });
    let jh_arrows: Vec<Arrow> = jh.iter().map(|&x| cm.arrow_at(x)).collect();
    let conj: Vec<Arrow> = morphisms.members().iter().map(|&x| cm.arrow_at(x)).collect();
    let mor_normal = check_normal_subset(&cm, &jh_arrows, &conj).is_ok();
    let mor_mul = mor_normal.then(|| {
        let mut t = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let p = cm.product(cm.arrow_at(morphisms.rep(a)), cm.arrow_at(morphisms.rep(b)));
                t[a * n + b] = morphisms.coset(cm.arrow_index(p)).expect("closed");
            }
        }
        t
    });
    if variant == Variant::Tau && (obj_mul.is_none() || mor_mul.is_none()) {
        return Err(Error::Invariant("restricted quotient is not a group".into()));
    }
    Ok(QuotientCatGroup { variant, chain, objects, morphisms, source, target, identity, compose, obj_mul, mor_mul })
}

impl QuotientCatGroup {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn chain(&self) -> &Arc<ChainedCrossedModules> {
        &self.chain
    }

    pub fn module(&self) -> &CrossedModule {
        self.chain.outer()
    }

    pub fn objects(&self) -> &CosetSpace {
        &self.objects
    }

    pub fn morphisms(&self) -> &CosetSpace {
        &self.morphisms
    }

    pub fn obj_count(&self) -> usize {
        self.objects.len()
    }

    pub fn mor_count(&self) -> usize {
        self.morphisms.len()
    }

    /// Object coset of a `G` element.
    pub fn obj_of(&self, g: usize) -> Option<usize> {
        self.objects.coset(g)
    }

    /// Morphism coset of an arrow.
    pub fn mor_of(&self, a: Arrow) -> Option<usize> {
        self.morphisms.coset(self.module().arrow_index(a))
    }

    pub fn mor_rep(&self, m: usize) -> Arrow {
        self.module().arrow_at(self.morphisms.rep(m))
    }

    #[inline]
    pub fn source(&self, m: usize) -> usize {
        self.source[m]
    }

    #[inline]
    pub fn target(&self, m: usize) -> usize {
        self.target[m]
    }

    #[inline]
    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identity[self.source[m]] == m
    }

    /// `m2 ∘ m1`, defined when `t(m1) = s(m2)`.
    #[inline]
    pub fn compose(&self, m2: usize, m1: usize) -> Option<usize> {
        let v = self.compose[m2 * self.mor_count() + m1];
        (v != NONE).then_some(v)
    }

    pub fn is_group(&self) -> bool {
        self.obj_mul.is_some() && self.mor_mul.is_some()
    }

    pub fn unit_obj(&self) -> usize {
        self.obj_of(self.module().base().identity()).expect("identity object")
    }

    pub fn unit_mor(&self) -> usize {
        self.mor_of(self.module().unit()).expect("unit morphism")
    }

    /// Product of object cosets, when `ττ′(J)` is normal in the ambient group.
    #[inline]
    pub fn obj_mul(&self, a: usize, b: usize) -> Option<usize> {
        self.obj_mul.as_ref().map(|t| t[a * self.obj_count() + b])
    }

    /// Product of morphism cosets, when `J_H` is normal in the ambient group.
    #[inline]
    pub fn mor_mul(&self, a: usize, b: usize) -> Option<usize> {
        self.mor_mul.as_ref().map(|t| t[a * self.mor_count() + b])
    }

    pub fn obj_inv(&self, a: usize) -> Option<usize> {
        let e = self.unit_obj();
        (0..self.obj_count()).find(|&b| self.obj_mul(a, b) == Some(e))
    }

    pub fn mor_inv(&self, a: usize) -> Option<usize> {
        let e = self.unit_mor();
        (0..self.mor_count()).find(|&b| self.mor_mul(a, b) == Some(e))
    }

    pub fn fmt_obj(&self, x: usize) -> String {
        format!("[{}]", self.module().base().id(self.objects.rep(x)))
    }

    pub fn fmt_mor(&self, m: usize) -> String {
        format!("[{}]", self.module().fmt_arrow(self.mor_rep(m)))
    }

    /// All morphism cosets from `x` to `y`.
    pub fn hom(&self, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.mor_count()).filter(move |&m| self.source[m] == x && self.target[m] == y)
    }
}

/// Exhaustive descent checks on all members: source, target, composition of
/// composable pairs, identities, and both products where present.
pub fn verify_descent(q: &QuotientCatGroup) -> Report {
    let cm = q.module();
    let g_grp = cm.base();
    let mut report = Report::new();
    let members: Vec<Arrow> = q.morphisms.members().iter().map(|&x| cm.arrow_at(x)).collect();
    for &a in &members {
        let m = q.mor_of(a).expect("member");
        if q.obj_of(cm.source(a)) != Some(q.source(m)) || q.obj_of(cm.target(a)) != Some(q.target(m)) {
            report.push("descent.endpoints", format!("{} disagrees with its coset {}", cm.fmt_arrow(a), q.fmt_mor(m)));
        }
    }
    let mut by_source: Vec<Vec<Arrow>> = vec![Vec::new(); g_grp.order()];
    for &a in &members {
        by_source[cm.source(a)].push(a);
    }
    for &a1 in &members {
        for &a2 in &by_source[cm.target(a1)] {
            let direct = q.mor_of(cm.compose_unchecked(a2, a1));
            let via = q.compose(q.mor_of(a2).unwrap(), q.mor_of(a1).unwrap());
            if direct != via {
                report.push(
                    "descent.compose",
                    format!("{}∘{} lands outside the composite coset", cm.fmt_arrow(a2), cm.fmt_arrow(a1)),
                );
            }
        }
    }
    for &g in q.objects.members() {
        let x = q.obj_of(g).unwrap();
        if q.mor_of(cm.identity_at(g)) != Some(q.identity(x)) {
            report.push("descent.identity", format!("identity at {} is not the identity of {}", g_grp.id(g), q.fmt_obj(x)));
        }
    }
    for (a, b) in pairs(q.objects.members()) {
        if let Some(p) = q.obj_mul(q.obj_of(a).unwrap(), q.obj_of(b).unwrap()) {
            if q.obj_of(g_grp.mul(a, b)) != Some(p) {
                report.push("descent.obj-product", format!("{}·{}", g_grp.id(a), g_grp.id(b)));
            }
        }
    }
    if q.mor_mul.is_some() {
        for &a in &members {
            for &b in &members {
                let p = q.mor_mul(q.mor_of(a).unwrap(), q.mor_of(b).unwrap());
                if q.mor_of(cm.product(a, b)) != p {
                    report.push("descent.mor-product", format!("{}·{}", cm.fmt_arrow(a), cm.fmt_arrow(b)));
                }
            }
        }
    }
    report
}

fn pairs(xs: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    xs.iter().flat_map(move |&a| xs.iter().map(move |&b| (a, b)))
}

/// The quotient map is a functor: it preserves source, target, identities and
/// composition; for group-valued quotients, also both products.
pub fn check_q_functor(q: &QuotientCatGroup) -> Report {
    let cm = q.module();
    let mut report = Report::new();
    let members: Vec<Arrow> = q.morphisms.members().iter().map(|&x| cm.arrow_at(x)).collect();
    for &a in &members {
        let m = q.mor_of(a).unwrap();
        if q.obj_of(cm.source(a)) != Some(q.source(m)) || q.obj_of(cm.target(a)) != Some(q.target(m)) {
            report.push("functor.endpoints", cm.fmt_arrow(a));
        }
        if let Some(x) = q.obj_of(cm.source(a)) {
            if q.mor_of(cm.identity_at(cm.source(a))) != Some(q.identity(x)) {
                report.push("functor.identity", cm.base().id(cm.source(a)).to_string());
            }
        }
        for &b in &members {
            if let Some(c) = cm.try_compose(b, a) {
                if q.mor_of(c) != q.compose(q.mor_of(b).unwrap(), m) {
                    report.push("functor.compose", format!("{}∘{}", cm.fmt_arrow(b), cm.fmt_arrow(a)));
                }
            }
        }
    }
    report
}

/// `ḡ_ik ḡ_km = ḡ_im` at every triple-overlap vertex, `ḡ_ii = ē`,
/// `ḡ_ik ḡ_ki = ē`, and `θ̄_ik(γ)·θ̄_km(γ) = θ̄_im(γ)` for every γ in `U_ikm`
/// up to `max_len`. Needs a quotient with group structure.
pub fn check_classical_cocycle(fc: &FunctorialCocycle, q: &QuotientCatGroup, max_len: usize) -> Result<Report> {
    if !q.is_group() {
        return Err(Error::Precondition(format!("the {} quotient carries no group structure", q.variant())));
    }
    let c = fc.cover();
    let tower = fc.tower();
    let gbar = |i: usize, k: usize, u: usize| {
        q.obj_of(tower.g(i, k, u)).ok_or_else(|| Error::Domain(format!("g_ik value at {} outside the quotient", loc3(c, i, k, k, u))))
    };
    let unit = q.unit_obj();
    let mut report = Report::new();
    for u in 0..c.vertex_count() {
        for i in c.charts_containing_vertex(u).iter() {
            if gbar(i, i, u)? != unit {
                report.push("classical.diagonal", format!("ḡ_ii ≠ ē at {}", loc3(c, i, i, i, u)));
            }
            for k in c.charts_containing_vertex(u).iter() {
                if q.obj_mul(gbar(i, k, u)?, gbar(k, i, u)?) != Some(unit) {
                    report.push("classical.inverse", format!("ḡ_ik ḡ_ki ≠ ē at {}", loc3(c, i, k, i, u)));
                }
            }
        }
    }
    for (i, k, m) in live_triples(c) {
        let set = ChartSet::from_indices([i, k, m]);
        for u in (0..c.vertex_count()).filter(|&u| c.in_overlap(set, u)) {
            let lhs = q.obj_mul(gbar(i, k, u)?, gbar(k, m, u)?);
            let rhs = gbar(i, m, u)?;
            if lhs != Some(rhs) {
                report.push(
                    "classical.objects",
                    format!("{}: ḡ_ik ḡ_km = {} but ḡ_im = {}", loc3(c, i, k, m, u), lhs.map_or("?".into(), |x| q.fmt_obj(x)), q.fmt_obj(rhs)),
                );
            }
        }
        for p in crate::base::enumerate_paths(c, set, max_len)? {
            let theta_bar = |a: usize, b: usize| {
                let arrow = fc.theta_at(a, b, p.start, p.end);
                q.mor_of(arrow).ok_or_else(|| Error::Domain(format!("θ value {} outside the quotient", q.module().fmt_arrow(arrow))))
            };
            let lhs = q.mor_mul(theta_bar(i, k)?, theta_bar(k, m)?);
            let rhs = theta_bar(i, m)?;
            if lhs != Some(rhs) {
                report.push(
                    "classical.morphisms",
                    format!(
                        "(i,k,m)=({},{},{}) γ={}: θ̄_ik θ̄_km = {} but θ̄_im = {}",
                        c.chart_id(i),
                        c.chart_id(k),
                        c.chart_id(m),
                        c.fmt_walk(&p),
                        lhs.map_or("?".into(), |x| q.fmt_mor(x)),
                        q.fmt_mor(rhs)
                    ),
                );
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupAction, GroupHom};
    use crate::presets;

    fn trivial_j_chain() -> ChainedCrossedModules {
        let s3 = presets::s3_chain();
        let outer = s3.outer().clone();
        let h = outer.top().clone();
        let z1 = Arc::new(presets::cyclic(1));
        let e = h.identity();
        let inner = CrossedModule::new(
            h.clone(),
            z1.clone(),
            GroupAction::trivial("triv", h.clone(), z1.clone()),
            GroupHom::from_fn("unit", z1, h, |_| e),
        )
        .unwrap();
        ChainedCrossedModules::new(outer, inner).unwrap()
    }

    /// Sign of a permutation given in cycle notation.
    fn sign(id: &str) -> bool {
        presets::Perm::parse(4, id).unwrap().is_even()
    }

    #[test]
    fn jh_sizes() {
        assert_eq!(build_jh(&presets::s3_chain()).len(), 9);
        assert_eq!(build_jh(&presets::s4_chain()).len(), 16);
        assert_eq!(build_jh(&trivial_j_chain()), vec![Arrow::new(0, 0)]);
    }

    #[test]
    fn jh_is_normal() {
        let s3 = presets::s3_chain();
        assert!(check_jh_normal(&s3, Scope::Tau).is_ok());
        assert_eq!(jh_conjugation_count(&s3, Scope::Full), 36 * 9);
        let s4 = presets::s4_chain();
        assert!(check_jh_normal(&s4, Scope::Tau).is_ok());
        assert!(check_jh_normal(&s4, Scope::Full).is_ok());
        assert_eq!(jh_conjugation_count(&s4, Scope::Full), 288 * 16);
        assert!(check_jh_normal(&trivial_j_chain(), Scope::Full).is_ok());
    }

    #[test]
    fn enlarged_jh_is_not_normal() {
        let chain = presets::s3_chain();
        let cm = chain.outer();
        let mut jh = build_jh(&chain);
        jh.push(cm.arrow_from_ids("(12)", "e").unwrap());
        let report = check_normal_subset(cm, &jh, &cm.arrows().collect::<Vec<_>>());
        assert!(!report.is_ok());
    }

    #[test]
    fn s3_quotient_matches_sign_pairs() {
        let chain = Arc::new(presets::s3_chain());
        let q = build_quotient(chain.clone(), Variant::Full).unwrap();
        assert_eq!(q.obj_count(), 2);
        assert_eq!(q.mor_count(), 4);
        let cm = chain.outer();
        for a in cm.arrows() {
            for b in cm.arrows() {
                let same = q.mor_of(a) == q.mor_of(b);
                let signs = |x: Arrow| (sign(cm.top().id(x.top)), sign(cm.base().id(x.base)));
                assert_eq!(same, signs(a) == signs(b));
            }
        }
        assert!(check_q_functor(&q).is_ok());
    }

    #[test]
    fn s4_quotients() {
        let chain = Arc::new(presets::s4_chain());
        let tau = build_quotient(chain.clone(), Variant::Tau).unwrap();
        assert_eq!(tau.obj_count(), 3);
        assert_eq!(tau.mor_count(), 9);
        assert!(tau.is_group());
        let full = build_quotient(chain, Variant::Full).unwrap();
        assert_eq!(full.obj_count(), 6);
        assert_eq!(full.mor_count(), 18);
        assert!(check_q_functor(&full).is_ok());
        assert!(check_q_functor(&tau).is_ok());
    }

    #[test]
    fn trivial_j_quotient_is_bijective() {
        let chain = Arc::new(trivial_j_chain());
        let q = build_quotient(chain.clone(), Variant::Full).unwrap();
        assert_eq!(q.obj_count(), 6);
        assert_eq!(q.mor_count(), 36);
    }

    #[test]
    fn codiscrete_when_boundary_is_onto_modulo_kernels() {
        let q = build_quotient(Arc::new(presets::s3_chain()), Variant::Tau).unwrap();
        for x in 0..q.obj_count() {
            for y in 0..q.obj_count() {
                assert_eq!(q.hom(x, y).count(), 1);
            }
        }
    }
}
