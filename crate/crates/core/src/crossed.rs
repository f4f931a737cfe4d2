//! Crossed modules `(G, H, α, τ)` and the arrow algebra of the associated
//! categorical group, whose morphism group is the semidirect product `H ⋊ G`.
//!
//! Naming: `base` is the object group G, `top` the group H, `action` is α and
//! `boundary` is τ. An [`Arrow`] is the pair `(h, g)` with source `g` and
//! target `τ(h) g`.

use std::sync::Arc;

use crate::error::{schema, Error, Result};
use crate::group::{validate_action, validate_group, validate_hom, FiniteGroup, GroupAction, GroupHom};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub top: usize,
    pub base: usize,
}

impl Arrow {
    pub fn new(top: usize, base: usize) -> Self {
        Self { top, base }
    }
}

#[derive(Debug, Clone)]
pub struct CrossedModule {
    base: Arc<FiniteGroup>,
    top: Arc<FiniteGroup>,
    action: GroupAction,
    boundary: GroupHom,
}

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl CrossedModule {
    /// Assembles the data after checking only that the pieces fit together.
    pub fn new_unchecked(
        base: Arc<FiniteGroup>,
        top: Arc<FiniteGroup>,
        action: GroupAction,
        boundary: GroupHom,
    ) -> Result<Self> {
        if !same_group(action.actor(), &base) {
            return Err(schema(format!(
                "action {} acts by {}, expected {}",
                action.name(),
                action.actor().name(),
                base.name()
            )));
        }
        if !same_group(action.space(), &top) {
            return Err(schema(format!(
                "action {} acts on {}, expected {}",
                action.name(),
                action.space().name(),
                top.name()
            )));
        }
        if !same_group(boundary.domain(), &top) || !same_group(boundary.codomain(), &base) {
            return Err(schema(format!(
                "boundary {} maps {} → {}, expected {} → {}",
                boundary.name(),
                boundary.domain().name(),
                boundary.codomain().name(),
                top.name(),
                base.name()
            )));
        }
        Ok(Self { base, top, action, boundary })
    }

    /// Assembles and validates eagerly: both groups, the action, the boundary
    /// homomorphism and both Peiffer identities.
    pub fn new(
        base: Arc<FiniteGroup>,
        top: Arc<FiniteGroup>,
        action: GroupAction,
        boundary: GroupHom,
    ) -> Result<Self> {
        let cm = Self::new_unchecked(base, top, action, boundary)?;
        let report = cm.validate_all();
        if report.is_ok() {
            Ok(cm)
        } else {
            Err(Error::Law(report))
        }
    }

    /// Component checks followed by the Peiffer identities.
    pub fn validate_all(&self) -> Report {
        let mut report = validate_group(&self.base);
        report.extend(validate_group(&self.top));
        report.extend(validate_action(&self.action));
        report.extend(validate_hom(&self.boundary));
        if report.is_ok() {
            report.extend(validate_peiffer(self));
        }
        report
    }

    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.base
    }

    pub fn top(&self) -> &Arc<FiniteGroup> {
        &self.top
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn boundary(&self) -> &GroupHom {
        &self.boundary
    }

    pub fn boundary_mut(&mut self) -> &mut GroupHom {
        &mut self.boundary
    }

    #[inline]
    pub fn act(&self, g: usize, h: usize) -> usize {
        self.action.apply(g, h)
    }

    #[inline]
    pub fn tau(&self, h: usize) -> usize {
        self.boundary.apply(h)
    }

    pub fn arrow_from_ids(&self, top: &str, base: &str) -> Result<Arrow> {
        Ok(Arrow::new(self.top.index_of(top)?, self.base.index_of(base)?))
    }

    fn check_arrow(&self, a: Arrow) -> Result<()> {
        if a.top >= self.top.order() || a.base >= self.base.order() {
            return Err(schema(format!("arrow ({}, {}) has an unknown component", a.top, a.base)));
        }
        Ok(())
    }

    pub fn fmt_arrow(&self, a: Arrow) -> String {
        format!("({}, {})", self.top.id(a.top), self.base.id(a.base))
    }

    #[inline]
    pub fn source(&self, a: Arrow) -> usize {
        a.base
    }

    #[inline]
    pub fn target(&self, a: Arrow) -> usize {
        self.base.mul(self.tau(a.top), a.base)
    }

    /// The identity arrow `(e, g)` at object `g`.
    pub fn identity_at(&self, g: usize) -> Arrow {
        Arrow::new(self.top.identity(), g)
    }

    /// Unit of the morphism group, `(e, e)`.
    pub fn unit(&self) -> Arrow {
        Arrow::new(self.top.identity(), self.base.identity())
    }

    /// `(h₂, g₂) ∘ (h₁, g₁) = (h₂ h₁, g₁)`, defined when `t(a1) = s(a2)`.
    #[inline]
    pub fn compose_unchecked(&self, a2: Arrow, a1: Arrow) -> Arrow {
        Arrow::new(self.top.mul(a2.top, a1.top), a1.base)
    }

    pub fn try_compose(&self, a2: Arrow, a1: Arrow) -> Option<Arrow> {
        (self.target(a1) == self.source(a2)).then(|| self.compose_unchecked(a2, a1))
    }

    /// `(h₂, g₂)(h₁, g₁) = (h₂ α_{g₂}(h₁), g₂ g₁)`.
    #[inline]
    pub fn product(&self, a2: Arrow, a1: Arrow) -> Arrow {
        Arrow::new(
            self.top.mul(a2.top, self.act(a2.base, a1.top)),
            self.base.mul(a2.base, a1.base),
        )
    }

    /// Inverse in the semidirect product: `(α_{g⁻¹}(h⁻¹), g⁻¹)`.
    pub fn product_inverse(&self, a: Arrow) -> Arrow {
        let gi = self.base.inv(a.base);
        Arrow::new(self.act(gi, self.top.inv(a.top)), gi)
    }

    /// Dense index of an arrow in `0..|H|·|G|`.
    #[inline]
    pub fn arrow_index(&self, a: Arrow) -> usize {
        a.top * self.base.order() + a.base
    }

    #[inline]
    pub fn arrow_at(&self, idx: usize) -> Arrow {
        Arrow::new(idx / self.base.order(), idx % self.base.order())
    }

    pub fn arrow_count(&self) -> usize {
        self.top.order() * self.base.order()
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arrow> + '_ {
        (0..self.arrow_count()).map(|n| self.arrow_at(n))
    }

    /// `τ(H)` as a membership mask over G.
    pub fn boundary_image(&self) -> Vec<bool> {
        self.boundary.image_mask()
    }

    pub fn boundary_surjective(&self) -> bool {
        self.boundary_image().iter().all(|&x| x)
    }
}

/// `(source, target)` of an arrow, after checking its components exist.
pub fn arrow_endpoints(cm: &CrossedModule, a: Arrow) -> Result<(usize, usize)> {
    cm.check_arrow(a)?;
    Ok((cm.source(a), cm.target(a)))
}

pub fn arrow_compose(cm: &CrossedModule, a2: Arrow, a1: Arrow) -> Result<Arrow> {
    cm.check_arrow(a1)?;
    cm.check_arrow(a2)?;
    cm.try_compose(a2, a1).ok_or_else(|| {
        Error::Composition(format!(
            "target {} of {} ≠ source {} of {}",
            cm.base.id(cm.target(a1)),
            cm.fmt_arrow(a1),
            cm.base.id(cm.source(a2)),
            cm.fmt_arrow(a2)
        ))
    })
}

pub fn arrow_product(cm: &CrossedModule, a2: Arrow, a1: Arrow) -> Result<Arrow> {
    cm.check_arrow(a1)?;
    cm.check_arrow(a2)?;
    Ok(cm.product(a2, a1))
}

/// Both Peiffer identities, exhaustively:
/// `τ(α_g(h)) = g τ(h) g⁻¹` and `α_{τ(h)}(h') = h h' h⁻¹`.
pub fn validate_peiffer(cm: &CrossedModule) -> Report {
    let mut report = Report::new();
    let (g_grp, h_grp) = (&*cm.base, &*cm.top);
    for g in g_grp.elements() {
        for h in h_grp.elements() {
            let lhs = cm.tau(cm.act(g, h));
            let rhs = g_grp.conj(g, cm.tau(h));
            if lhs != rhs {
                report.push(
                    "peiffer.first",
                    format!(
                        "g={}, h={}: τ(α_g(h)) = {} but g τ(h) g⁻¹ = {}",
                        g_grp.id(g),
                        h_grp.id(h),
                        g_grp.id(lhs),
                        g_grp.id(rhs)
                    ),
                );
            }
        }
    }
    for h in h_grp.elements() {
        for h2 in h_grp.elements() {
            let lhs = cm.act(cm.tau(h), h2);
            let rhs = h_grp.conj(h, h2);
            if lhs != rhs {
                report.push(
                    "peiffer.second",
                    format!(
                        "h={}, h'={}: α_τ(h)(h') = {} but h h' h⁻¹ = {}",
                        h_grp.id(h),
                        h_grp.id(h2),
                        h_grp.id(lhs),
                        h_grp.id(rhs)
                    ),
                );
            }
        }
    }
    report
}

/// Checks that `τ(H)` is normal in G. A boundary map that is not a
/// homomorphism is reported first, and the normality scan is skipped.
pub fn check_tau_image_normal(cm: &CrossedModule) -> Report {
    let hom = validate_hom(&cm.boundary);
    if !hom.is_ok() {
        return hom;
    }
    let mut report = Report::new();
    let image = cm.boundary_image();
    let g_grp = &*cm.base;
    for g in g_grp.elements() {
        for h in cm.top.elements() {
            let c = g_grp.conj(g, cm.tau(h));
            if !image[c] {
                report.push(
                    "boundary-image.normal",
                    format!("g={}, τ(h)={}: conjugate {} ∉ τ(H)", g_grp.id(g), g_grp.id(cm.tau(h)), g_grp.id(c)),
                );
            }
        }
    }
    report
}

/// The pair `(G, H, α, τ)`, `(H, J, α′, τ′)` sharing the group H.
#[derive(Debug, Clone)]
pub struct ChainedCrossedModules {
    outer: CrossedModule,
    inner: CrossedModule,
    /// `ττ′(J)` as a membership mask over G.
    double_image: Vec<bool>,
}

impl ChainedCrossedModules {
    pub fn new(outer: CrossedModule, inner: CrossedModule) -> Result<Self> {
        if !same_group(outer.top(), inner.base()) {
            return Err(schema(format!(
                "outer top group {} differs from inner base group {}",
                outer.top().name(),
                inner.base().name()
            )));
        }
        let mut double_image = vec![false; outer.base().order()];
        for j in inner.top().elements() {
            double_image[outer.tau(inner.tau(j))] = true;
        }
        Ok(Self { outer, inner, double_image })
    }

    pub fn outer(&self) -> &CrossedModule {
        &self.outer
    }

    pub fn inner(&self) -> &CrossedModule {
        &self.inner
    }

    pub fn inner_mut(&mut self) -> &mut CrossedModule {
        &mut self.inner
    }

    /// Elements of `ττ′(J)` in G, in element order.
    pub fn double_image(&self) -> Vec<usize> {
        (0..self.double_image.len()).filter(|&g| self.double_image[g]).collect()
    }

    pub fn in_double_image(&self, g: usize) -> bool {
        self.double_image[g]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn s3_identity_module() -> CrossedModule {
        presets::s3_chain().outer().clone()
    }

    #[test]
    fn identity_arrow_endpoints() {
        let cm = s3_identity_module();
        for g in cm.base().elements() {
            assert_eq!(arrow_endpoints(&cm, cm.identity_at(g)).unwrap(), (g, g));
        }
    }

    #[test]
    fn kernel_of_source_arrow_endpoints() {
        let cm = s3_identity_module();
        for h in cm.top().elements() {
            let (s, t) = arrow_endpoints(&cm, Arrow::new(h, cm.base().identity())).unwrap();
            assert_eq!(s, cm.base().identity());
            assert_eq!(t, cm.tau(h));
        }
    }

    #[test]
    fn unknown_arrow_component_is_schema_error() {
        let cm = s3_identity_module();
        assert!(matches!(arrow_endpoints(&cm, Arrow::new(99, 0)), Err(Error::Schema(_))));
        assert!(cm.arrow_from_ids("(1234)", "e").is_err());
    }

    #[test]
    fn identity_absorbs_under_composition() {
        let cm = s3_identity_module();
        for a in cm.arrows() {
            let left = arrow_compose(&cm, cm.identity_at(cm.target(a)), a).unwrap();
            let right = arrow_compose(&cm, a, cm.identity_at(cm.source(a))).unwrap();
            assert_eq!(left, a);
            assert_eq!(right, a);
        }
    }

    #[test]
    fn mismatched_composition_is_rejected() {
        let cm = s3_identity_module();
        let a1 = cm.arrow_from_ids("(12)", "e").unwrap();
        let a2 = cm.identity_at(cm.base().identity());
        assert!(matches!(arrow_compose(&cm, a2, a1), Err(Error::Composition(_))));
    }

    #[test]
    fn unit_is_neutral_for_product() {
        let cm = s3_identity_module();
        for a in cm.arrows() {
            assert_eq!(arrow_product(&cm, cm.unit(), a).unwrap(), a);
        }
        let top = cm.top();
        for h1 in top.elements() {
            for h2 in top.elements() {
                let p = cm.product(Arrow::new(h2, 0), Arrow::new(h1, 0));
                assert_eq!(p, Arrow::new(top.mul(h2, h1), 0));
            }
        }
    }

    #[test]
    fn trivially_acting_abelian_module_satisfies_peiffer() {
        let z4 = Arc::new(presets::cyclic(4));
        let z2 = Arc::new(presets::cyclic(2));
        let cm = CrossedModule::new_unchecked(
            z4.clone(),
            z2.clone(),
            GroupAction::trivial("triv", z4.clone(), z2.clone()),
            GroupHom::from_fn("double", z2, z4, |x| 2 * x),
        )
        .unwrap();
        assert!(validate_peiffer(&cm).is_ok());
    }

    #[test]
    fn trivial_action_with_identity_boundary_fails_first_identity() {
        let s3 = Arc::new(presets::symmetric(3));
        let cm = CrossedModule::new_unchecked(
            s3.clone(),
            s3.clone(),
            GroupAction::trivial("triv", s3.clone(), s3.clone()),
            GroupHom::by_id("id", s3.clone(), s3).unwrap(),
        )
        .unwrap();
        let report = validate_peiffer(&cm);
        assert!(report.has_law("peiffer.first"));
        assert!(report.has_law("peiffer.second"));
    }

    #[test]
    fn component_mismatch_is_schema_error() {
        let s3 = Arc::new(presets::symmetric(3));
        let z2 = Arc::new(presets::cyclic(2));
        let err = CrossedModule::new_unchecked(
            s3.clone(),
            s3.clone(),
            GroupAction::trivial("triv", s3.clone(), z2.clone()),
            GroupHom::by_id("id", s3.clone(), s3).unwrap(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
    }

    #[test]
    fn corrupted_boundary_reports_hom_failure_first() {
        let mut cm = presets::s3_chain().inner().clone();
        let h = cm.top().index_of("(123)").unwrap();
        let bad = cm.base().index_of("(12)").unwrap();
        cm.boundary_mut().set(h, bad);
        let report = check_tau_image_normal(&cm);
        assert!(report.first().unwrap().law.starts_with("hom."));
        assert!(!report.has_law("boundary-image.normal"));
    }

    #[test]
    fn surjective_boundary_image_is_normal() {
        assert!(check_tau_image_normal(&s3_identity_module()).is_ok());
    }
}
