//! Finite groups given by multiplication tables, homomorphisms between them,
//! and actions by automorphisms.
//!
//! Elements are opaque text ids. Internally every element is its position in
//! the group's ordered element list, and all semantics live in the tables.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{schema, Result};
use crate::report::Report;

/// Default cap on group order. Every check is exhaustive, so this keeps the
/// cubic associativity scan within seconds.
pub const DEFAULT_MAX_ORDER: usize = 1024;

/// Witnesses recorded per violated law before the report is truncated.
const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    ids: Vec<String>,
    lookup: HashMap<String, usize>,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Builds a group from id-level tables. Only the shape is checked here;
    /// the axioms are checked by [`validate_group`].
    pub fn from_rows(
        name: &str,
        ids: Vec<String>,
        rows: &[Vec<String>],
        identity: &str,
        inverse: &BTreeMap<String, String>,
        max_order: usize,
    ) -> Result<Self> {
        let lookup = index_ids(name, &ids, max_order)?;
        let n = ids.len();
        let resolve = |id: &str, ctx: &str| -> Result<usize> {
            lookup
                .get(id)
                .copied()
                .ok_or_else(|| schema(format!("group {name}: unknown element '{id}' in {ctx}")))
        };
        if rows.len() != n {
            return Err(schema(format!(
                "group {name}: table has {} rows, expected {n}",
                rows.len()
            )));
        }
        let mut table = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(schema(format!(
                    "group {name}: row '{}' has {} entries, expected {n}",
                    ids[a],
                    row.len()
                )));
            }
            for entry in row {
                table.push(resolve(entry, "multiplication table")?);
            }
        }
        let identity = resolve(identity, "identity")?;
        let mut inv = vec![usize::MAX; n];
        for (x, y) in inverse {
            inv[resolve(x, "inverse table")?] = resolve(y, "inverse table")?;
        }
        if let Some(missing) = inv.iter().position(|&y| y == usize::MAX) {
            return Err(schema(format!(
                "group {name}: inverse table has no entry for '{}'",
                ids[missing]
            )));
        }
        Ok(Self {
            name: name.to_string(),
            ids,
            lookup,
            table,
            identity,
            inverse: inv,
        })
    }

    /// Builds a group from a multiplication closure over element positions.
    /// Identity and inverses are located by search; failing to find them is a
    /// schema error, since the resulting tables could not be complete.
    pub fn from_fn(
        name: &str,
        ids: Vec<String>,
        max_order: usize,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let lookup = index_ids(name, &ids, max_order)?;
        let n = ids.len();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let c = mul(a, b);
                if c >= n {
                    return Err(schema(format!("group {name}: product out of range")));
                }
                table.push(c);
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] == x && table[x * n + e] == x))
            .ok_or_else(|| schema(format!("group {name}: no identity element")))?;
        let inverse = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| table[x * n + y] == identity)
                    .ok_or_else(|| schema(format!("group {name}: '{}' has no inverse", ids[x])))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            name: name.to_string(),
            ids,
            lookup,
            table,
            identity,
            inverse,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.ids.len()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, x: usize) -> &str {
        &self.ids[x]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.lookup
            .get(id)
            .copied()
            .ok_or_else(|| schema(format!("group {}: unknown element '{id}'", self.name)))
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.ids.len() + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul3(&self, a: usize, b: usize, c: usize) -> usize {
        self.mul(self.mul(a, b), c)
    }

    /// `a b a⁻¹`
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul3(a, b, self.inv(a))
    }

    /// Multiplication table rendered with ids, row-major in element order.
    pub fn rows(&self) -> Vec<Vec<String>> {
        self.elements()
            .map(|a| self.elements().map(|b| self.ids[self.mul(a, b)].clone()).collect())
            .collect()
    }
}

fn index_ids(name: &str, ids: &[String], max_order: usize) -> Result<HashMap<String, usize>> {
    if ids.is_empty() {
        return Err(schema(format!("group {name}: empty element list")));
    }
    if ids.len() > max_order {
        return Err(schema(format!(
            "group {name}: order {} exceeds the cap of {max_order}",
            ids.len()
        )));
    }
    let mut lookup = HashMap::with_capacity(ids.len());
    for (n, id) in ids.iter().enumerate() {
        if lookup.insert(id.clone(), n).is_some() {
            return Err(schema(format!("group {name}: duplicate element '{id}'")));
        }
    }
    Ok(lookup)
}

struct Capped<'a> {
    report: &'a mut Report,
    law: &'static str,
    seen: usize,
}

impl<'a> Capped<'a> {
    fn new(report: &'a mut Report, law: &'static str) -> Self {
        Self { report, law, seen: 0 }
    }

    fn push(&mut self, witness: impl FnOnce() -> String) {
        if self.seen < MAX_WITNESSES {
            self.report.push(self.law, witness());
        }
        self.seen += 1;
    }

    fn finish(self) {
        if self.seen > MAX_WITNESSES {
            self.report.push(
                self.law,
                format!("... {} further violations omitted", self.seen - MAX_WITNESSES),
            );
        }
    }
}

/// Checks the group axioms exhaustively: two-sided identity, two-sided
/// inverses and associativity over all triples.
pub fn validate_group(g: &FiniteGroup) -> Report {
    let mut report = Report::new();
    let e = g.identity();

    let mut ident = Capped::new(&mut report, "group.identity");
    for x in g.elements() {
        if g.mul(e, x) != x || g.mul(x, e) != x {
            ident.push(|| format!("{}: {} is not a two-sided identity for {}", g.name, g.id(e), g.id(x)));
        }
    }
    ident.finish();

    let mut inv = Capped::new(&mut report, "group.inverse");
    for x in g.elements() {
        let y = g.inv(x);
        if g.mul(x, y) == e && g.mul(y, x) == e {
            continue;
        }
        let exists = g.elements().any(|z| g.mul(x, z) == e && g.mul(z, x) == e);
        if exists {
            inv.push(|| format!("{}: inverse table entry for {} is wrong", g.name, g.id(x)));
        } else {
            inv.push(|| format!("{}: no inverse for {}", g.name, g.id(x)));
        }
    }
    inv.finish();

    let mut assoc = Capped::new(&mut report, "group.associativity");
    for a in g.elements() {
        for b in g.elements() {
            let ab = g.mul(a, b);
            for c in g.elements() {
                if g.mul(ab, c) != g.mul(a, g.mul(b, c)) {
                    assoc.push(|| {
                        format!("{}: ({}·{})·{} ≠ {}·({}·{})", g.name, g.id(a), g.id(b), g.id(c), g.id(a), g.id(b), g.id(c))
                    });
                }
            }
        }
    }
    assoc.finish();
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    name: String,
    domain: Arc<FiniteGroup>,
    codomain: Arc<FiniteGroup>,
    map: Vec<usize>,
}

impl GroupHom {
    pub fn from_map(
        name: &str,
        domain: Arc<FiniteGroup>,
        codomain: Arc<FiniteGroup>,
        map: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let mut table = vec![usize::MAX; domain.order()];
        for (x, y) in map {
            let x = domain
                .index_of(x)
                .map_err(|_| schema(format!("hom {name}: '{x}' not in domain {}", domain.name())))?;
            let y = codomain
                .index_of(y)
                .map_err(|_| schema(format!("hom {name}: '{y}' not in codomain {}", codomain.name())))?;
            table[x] = y;
        }
        if let Some(missing) = table.iter().position(|&y| y == usize::MAX) {
            return Err(schema(format!(
                "hom {name}: no image for '{}'",
                domain.id(missing)
            )));
        }
        Ok(Self { name: name.to_string(), domain, codomain, map: table })
    }

    pub fn from_fn(
        name: &str,
        domain: Arc<FiniteGroup>,
        codomain: Arc<FiniteGroup>,
        f: impl Fn(usize) -> usize,
    ) -> Self {
        let map = domain.elements().map(f).collect();
        Self { name: name.to_string(), domain, codomain, map }
    }

    /// The map sending each element to the element of `codomain` with the
    /// same id (inclusions and identities).
    pub fn by_id(name: &str, domain: Arc<FiniteGroup>, codomain: Arc<FiniteGroup>) -> Result<Self> {
        let map: BTreeMap<String, String> =
            domain.ids().iter().map(|x| (x.clone(), x.clone())).collect();
        Self::from_map(name, domain, codomain, &map)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Arc<FiniteGroup> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteGroup> {
        &self.codomain
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// Overwrites a single table entry without revalidating.
    pub fn set(&mut self, x: usize, y: usize) {
        self.map[x] = y;
    }

    /// Image of the homomorphism, as a membership mask over the codomain.
    pub fn image_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.codomain.order()];
        for &y in &self.map {
            mask[y] = true;
        }
        mask
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.order()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }
}

/// Checks `f(xy) = f(x)f(y)` for all pairs and `f(e) = e`.
pub fn validate_hom(f: &GroupHom) -> Report {
    let mut report = Report::new();
    let (d, c) = (&*f.domain, &*f.codomain);
    if f.apply(d.identity()) != c.identity() {
        report.push(
            "hom.identity",
            format!("{}: {} ↦ {}", f.name, d.id(d.identity()), c.id(f.apply(d.identity()))),
        );
    }
    let mut mult = Capped::new(&mut report, "hom.multiplicative");
    for x in d.elements() {
        for y in d.elements() {
            let lhs = f.apply(d.mul(x, y));
            let rhs = c.mul(f.apply(x), f.apply(y));
            if lhs != rhs {
                mult.push(|| {
                    format!("{}: f({}·{}) = {} but f({})·f({}) = {}", f.name, d.id(x), d.id(y), c.id(lhs), d.id(x), d.id(y), c.id(rhs))
                });
            }
        }
    }
    mult.finish();
    report
}

/// An action of `actor` on `space` by (putative) automorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    name: String,
    actor: Arc<FiniteGroup>,
    space: Arc<FiniteGroup>,
    table: Vec<usize>,
}

impl GroupAction {
    pub fn from_table(
        name: &str,
        actor: Arc<FiniteGroup>,
        space: Arc<FiniteGroup>,
        table: &BTreeMap<String, BTreeMap<String, String>>,
    ) -> Result<Self> {
        let n = space.order();
        let mut t = vec![usize::MAX; actor.order() * n];
        for (g, row) in table {
            let g = actor
                .index_of(g)
                .map_err(|_| schema(format!("action {name}: '{g}' not in actor {}", actor.name())))?;
            for (h, v) in row {
                let h = space
                    .index_of(h)
                    .map_err(|_| schema(format!("action {name}: '{h}' not in space {}", space.name())))?;
                let v = space
                    .index_of(v)
                    .map_err(|_| schema(format!("action {name}: '{v}' not in space {}", space.name())))?;
                t[g * n + h] = v;
            }
        }
        if let Some(gap) = t.iter().position(|&v| v == usize::MAX) {
            return Err(schema(format!(
                "action {name}: no entry for ({}, {})",
                actor.id(gap / n),
                space.id(gap % n)
            )));
        }
        Ok(Self { name: name.to_string(), actor, space, table: t })
    }

    pub fn from_fn(
        name: &str,
        actor: Arc<FiniteGroup>,
        space: Arc<FiniteGroup>,
        f: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let mut table = Vec::with_capacity(actor.order() * space.order());
        for g in actor.elements() {
            for h in space.elements() {
                table.push(f(g, h));
            }
        }
        Self { name: name.to_string(), actor, space, table }
    }

    /// The action of `actor` fixing every element of `space`.
    pub fn trivial(name: &str, actor: Arc<FiniteGroup>, space: Arc<FiniteGroup>) -> Self {
        Self::from_fn(name, actor, space, |_, h| h)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn actor(&self) -> &Arc<FiniteGroup> {
        &self.actor
    }

    pub fn space(&self) -> &Arc<FiniteGroup> {
        &self.space
    }

    #[inline]
    pub fn apply(&self, g: usize, h: usize) -> usize {
        self.table[g * self.space.order() + h]
    }

    /// Id-level table, `actor id → space id → image id`.
    pub fn to_table(&self) -> BTreeMap<String, BTreeMap<String, String>> {
        self.actor
            .elements()
            .map(|g| {
                let row = self
                    .space
                    .elements()
                    .map(|h| (self.space.id(h).to_string(), self.space.id(self.apply(g, h)).to_string()))
                    .collect();
                (self.actor.id(g).to_string(), row)
            })
            .collect()
    }
}

/// Checks that each `h ↦ act(g, h)` is an automorphism and that `g ↦ act(g, ·)`
/// is a homomorphism into the automorphism group.
pub fn validate_action(a: &GroupAction) -> Report {
    let mut report = Report::new();
    let (actor, space) = (&*a.actor, &*a.space);

    let mut bij = Capped::new(&mut report, "action.bijective");
    for g in actor.elements() {
        let mut hit = vec![false; space.order()];
        for h in space.elements() {
            hit[a.apply(g, h)] = true;
        }
        if let Some(missed) = hit.iter().position(|x| !x) {
            bij.push(|| format!("{}: act({}, ·) misses {}", a.name, actor.id(g), space.id(missed)));
        }
    }
    bij.finish();

    let mut hom = Capped::new(&mut report, "action.automorphism");
    for g in actor.elements() {
        for h1 in space.elements() {
            for h2 in space.elements() {
                let lhs = a.apply(g, space.mul(h1, h2));
                let rhs = space.mul(a.apply(g, h1), a.apply(g, h2));
                if lhs != rhs {
                    hom.push(|| {
                        format!("{}: act({}, {}·{}) ≠ act({}, {})·act({}, {})", a.name, actor.id(g), space.id(h1), space.id(h2), actor.id(g), space.id(h1), actor.id(g), space.id(h2))
                    });
                }
            }
        }
    }
    hom.finish();

    let mut unit = Capped::new(&mut report, "action.unit");
    for h in space.elements() {
        if a.apply(actor.identity(), h) != h {
            unit.push(|| format!("{}: act(e, {}) = {}", a.name, space.id(h), space.id(a.apply(actor.identity(), h))));
        }
    }
    unit.finish();

    let mut compat = Capped::new(&mut report, "action.compatible");
    for g1 in actor.elements() {
        for g2 in actor.elements() {
            let g12 = actor.mul(g1, g2);
            for h in space.elements() {
                if a.apply(g12, h) != a.apply(g1, a.apply(g2, h)) {
                    compat.push(|| {
                        format!("{}: act({}·{}, {}) ≠ act({}, act({}, {}))", a.name, actor.id(g1), actor.id(g2), space.id(h), actor.id(g1), actor.id(g2), space.id(h))
                    });
                }
            }
        }
    }
    compat.finish();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn z2_bad() -> FiniteGroup {
        let ids = vec!["e".to_string(), "a".to_string()];
        let rows = vec![
            vec!["e".to_string(), "a".to_string()],
            vec!["a".to_string(), "a".to_string()],
        ];
        let inv = [("e", "e"), ("a", "a")]
            .iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect();
        FiniteGroup::from_rows("Z2bad", ids, &rows, "e", &inv, DEFAULT_MAX_ORDER).unwrap()
    }

    #[test]
    fn z2_is_valid() {
        assert!(validate_group(&presets::cyclic(2)).is_ok());
    }

    #[test]
    fn idempotent_generator_has_no_inverse() {
        let report = validate_group(&z2_bad());
        assert!(report
            .violations
            .iter()
            .any(|v| v.law == "group.inverse" && v.witness.contains("no inverse for a")));
    }

    #[test]
    fn unknown_id_in_table_is_schema_error() {
        let ids = vec!["e".to_string(), "a".to_string()];
        let rows = vec![
            vec!["e".to_string(), "a".to_string()],
            vec!["a".to_string(), "b".to_string()],
        ];
        let inv = BTreeMap::new();
        let err = FiniteGroup::from_rows("Z2", ids, &rows, "e", &inv, DEFAULT_MAX_ORDER).unwrap_err();
        assert!(matches!(err, crate::Error::Schema(_)));
    }

    #[test]
    fn missing_row_is_schema_error() {
        let ids = vec!["e".to_string(), "a".to_string()];
        let rows = vec![vec!["e".to_string(), "a".to_string()]];
        let inv = BTreeMap::new();
        assert!(FiniteGroup::from_rows("Z2", ids, &rows, "e", &inv, DEFAULT_MAX_ORDER).is_err());
    }

    #[test]
    fn order_cap_is_enforced() {
        let ids: Vec<String> = (0..5).map(|n| n.to_string()).collect();
        let err = FiniteGroup::from_fn("Z5", ids, 4, |a, b| (a + b) % 5).unwrap_err();
        assert!(matches!(err, crate::Error::Schema(_)));
    }

    #[test]
    fn hom_with_unknown_codomain_id_is_schema_error() {
        let z2 = Arc::new(presets::cyclic(2));
        let map = [("0", "0"), ("1", "7")]
            .iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect();
        assert!(GroupHom::from_map("bad", z2.clone(), z2, &map).is_err());
    }

    #[test]
    fn reduction_mod_two_is_a_hom() {
        let z4 = Arc::new(presets::cyclic(4));
        let z2 = Arc::new(presets::cyclic(2));
        let f = GroupHom::from_fn("mod2", z4, z2, |x| x % 2);
        assert!(validate_hom(&f).is_ok());
    }

    #[test]
    fn doubling_into_z2_breaks_nothing_but_squaring_in_s3_does() {
        let s3 = Arc::new(presets::symmetric(3));
        let sq = GroupHom::from_fn("square", s3.clone(), s3.clone(), |x| s3.mul(x, x));
        let report = validate_hom(&sq);
        assert!(report.has_law("hom.multiplicative"));
    }

    #[test]
    fn action_table_gap_is_schema_error() {
        let z2 = Arc::new(presets::cyclic(2));
        let mut table = BTreeMap::new();
        table.insert(
            "0".to_string(),
            [("0", "0"), ("1", "1")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        );
        assert!(GroupAction::from_table("gap", z2.clone(), z2, &table).is_err());
    }

    #[test]
    fn left_translation_is_not_an_action_by_automorphisms() {
        let s3 = Arc::new(presets::symmetric(3));
        let g = s3.clone();
        let a = GroupAction::from_fn("left", s3.clone(), s3, move |x, h| g.mul(x, h));
        let report = validate_action(&a);
        assert!(report.has_law("action.automorphism"));
        assert!(!report.has_law("action.compatible"));
    }

    #[test]
    fn trivial_action_is_valid() {
        let s3 = Arc::new(presets::symmetric(3));
        let z4 = Arc::new(presets::cyclic(4));
        assert!(validate_action(&GroupAction::trivial("triv", s3, z4)).is_ok());
    }
}
