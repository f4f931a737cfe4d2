use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use catbundle_core::base::{self, compose_paths, enumerate_paths, ChartSet, PathMor};
use catbundle_core::bundle::{all_edges, Bundle, BundleMorphism, BundleObject, QuiverEdge};
use catbundle_core::crossed::{Arrow, CrossedModule};
use catbundle_core::functorial::{check_endpoint_dependence, check_theta_functorial, live_pairs, FunctorialCocycle};
use catbundle_core::gerbal::{check_second_gerbe, derive_tower, generate_gerbal, validate_gerbal};
use catbundle_core::group::{validate_action, validate_group, FiniteGroup};
use catbundle_core::oracle::EchelonBasis;
use catbundle_core::presets;
use catbundle_core::quotient::{build_jh, build_quotient, Variant};
use num_rational::BigRational;
use proptest::prelude::*;

fn groups() -> &'static Vec<FiniteGroup> {
    static G: OnceLock<Vec<FiniteGroup>> = OnceLock::new();
    G.get_or_init(|| {
        vec![presets::symmetric(3), presets::symmetric(4), presets::alternating(4), presets::klein_four(), presets::cyclic(7)]
    })
}

fn modules() -> &'static Vec<CrossedModule> {
    static M: OnceLock<Vec<CrossedModule>> = OnceLock::new();
    M.get_or_init(|| {
        let (s3, s4) = (presets::s3_chain(), presets::s4_chain());
        vec![s3.outer().clone(), s3.inner().clone(), s4.outer().clone(), s4.inner().clone()]
    })
}

struct Fixture {
    bundle: Bundle,
    by_source: HashMap<BundleObject, Vec<QuiverEdge>>,
    objects: Vec<BundleObject>,
}

const BUNDLE_SEEDS: usize = 6;

fn fixtures() -> &'static Vec<Fixture> {
    static F: OnceLock<Vec<Fixture>> = OnceLock::new();
    F.get_or_init(|| {
        let chain = Arc::new(presets::s3_chain());
        (0..BUNDLE_SEEDS as u64)
            .map(|seed| {
                let gc = generate_gerbal(chain.clone(), Arc::new(base::line5w()), seed, true).unwrap();
                let q = build_quotient(chain.clone(), Variant::Full).unwrap();
                let bundle = Bundle::new(FunctorialCocycle::new(gc), q, 3).unwrap();
                let mut by_source: HashMap<BundleObject, Vec<QuiverEdge>> = HashMap::new();
                for e in all_edges(&bundle, 2) {
                    by_source.entry(bundle.edge_endpoints(&e).unwrap().0).or_default().push(e);
                }
                let objects = bundle.objects();
                Fixture { bundle, by_source, objects }
            })
            .collect()
    })
}

/// A composable word driven by `choices`, starting at object `start`.
fn word(f: &Fixture, start: usize, choices: &[usize]) -> BundleMorphism {
    let mut at = f.objects[start % f.objects.len()];
    let mut edges = Vec::new();
    for &c in choices {
        let out = &f.by_source[&at];
        let e = out[c % out.len()].clone();
        at = f.bundle.edge_endpoints(&e).unwrap().1;
        edges.push(e);
    }
    f.bundle.chain(edges).unwrap()
}

fn composable_arrow(cm: &CrossedModule, source: usize, h: usize) -> Arrow {
    Arrow::new(h % cm.top().order(), source)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverses_cancel(g in 0..5usize, x in 0..64usize) {
        let grp = &groups()[g];
        let x = x % grp.order();
        prop_assert_eq!(grp.mul(x, grp.inv(x)), grp.identity());
        prop_assert_eq!(grp.mul(grp.inv(x), x), grp.identity());
    }

    #[test]
    fn actions_permute_and_validation_is_pure(m in 0..4usize, g in 0..64usize) {
        let a = modules()[m].action();
        let g = g % a.actor().order();
        let mut image: Vec<usize> = a.space().elements().map(|h| a.apply(g, h)).collect();
        image.sort_unstable();
        image.dedup();
        prop_assert_eq!(image.len(), a.space().order());
        prop_assert_eq!(validate_action(a), validate_action(a));
        prop_assert_eq!(validate_group(a.space()), validate_group(a.space()));
    }

    #[test]
    fn product_is_a_functor(m in 0..4usize, g1 in 0..64usize, g2 in 0..64usize, h in proptest::array::uniform4(0..64usize)) {
        let cm = &modules()[m];
        let n = cm.base().order();
        let a1 = composable_arrow(cm, g1 % n, h[0]);
        let a2 = composable_arrow(cm, cm.target(a1), h[1]);
        let b1 = composable_arrow(cm, g2 % n, h[2]);
        let b2 = composable_arrow(cm, cm.target(b1), h[3]);
        let lhs = cm.product(cm.try_compose(a2, a1).unwrap(), cm.try_compose(b2, b1).unwrap());
        let rhs = cm.try_compose(cm.product(a2, b2), cm.product(a1, b1));
        prop_assert_eq!(Some(lhs), rhs);
        prop_assert_eq!(cm.source(cm.product(a1, b1)), cm.base().mul(cm.source(a1), cm.source(b1)));
        prop_assert_eq!(cm.target(cm.product(a1, b1)), cm.base().mul(cm.target(a1), cm.target(b1)));
    }

    #[test]
    fn composition_is_associative_and_unital(m in 0..4usize, g in 0..64usize, h in proptest::array::uniform3(0..64usize)) {
        let cm = &modules()[m];
        let a1 = composable_arrow(cm, g % cm.base().order(), h[0]);
        let a2 = composable_arrow(cm, cm.target(a1), h[1]);
        let a3 = composable_arrow(cm, cm.target(a2), h[2]);
        let left = cm.try_compose(a3, cm.try_compose(a2, a1).unwrap());
        let right = cm.try_compose(cm.try_compose(a3, a2).unwrap(), a1);
        prop_assert_eq!(left, right);
        prop_assert_eq!(cm.try_compose(cm.identity_at(cm.target(a1)), a1), Some(a1));
        prop_assert_eq!(cm.try_compose(a1, cm.identity_at(cm.source(a1))), Some(a1));
    }

    #[test]
    fn paths_shrink_with_larger_index_sets(mask in 1u32..8, extra in 1u32..8, len in 0usize..4) {
        let c = base::line5w();
        let small = ChartSet(mask);
        let large = ChartSet(mask | extra);
        let outer = enumerate_paths(&c, small, len).unwrap();
        let inner = enumerate_paths(&c, large, len).unwrap();
        prop_assert!(inner.iter().all(|p| outer.contains(p)));
    }

    #[test]
    fn walk_lengths_add(i in 0usize..64, j in 0usize..64) {
        let c = base::cycle6();
        let all: Vec<PathMor> = base::enumerate_walks(&c, 3);
        let p1 = &all[i % all.len()];
        let starting: Vec<&PathMor> = all.iter().filter(|p| p.start == p1.end).collect();
        let p2 = starting[j % starting.len()];
        let p = compose_paths(p2, p1).unwrap();
        prop_assert_eq!(p.len(), p1.len() + p2.len());
        prop_assert_eq!((p.start, p.end), (p1.start, p2.end));
    }

    #[test]
    fn generated_cocycles_are_valid(seed in any::<u64>(), noise in any::<bool>(), wide in any::<bool>()) {
        let chain = Arc::new(if wide { presets::s3_chain() } else { presets::s4_chain() });
        let gc = generate_gerbal(chain.clone(), Arc::new(base::line5w()), seed, noise).unwrap();
        prop_assert!(validate_gerbal(&gc).is_ok());
        prop_assert!(check_second_gerbe(&gc, &derive_tower(&gc)).is_ok());
        let again = generate_gerbal(chain.clone(), Arc::new(base::line5w()), seed, noise).unwrap();
        prop_assert_eq!(gc.h_table(), again.h_table());
        for i in 0..3 {
            for u in (0..5).filter(|&u| gc.cover().in_chart(i, u)) {
                prop_assert_eq!(gc.h(i, i, u), chain.outer().top().identity());
            }
        }
    }

    #[test]
    fn theta_depends_on_endpoints_only(seed in any::<u64>()) {
        let gc = generate_gerbal(Arc::new(presets::s3_chain()), Arc::new(base::line5w()), seed, true).unwrap();
        let fc = FunctorialCocycle::new(gc);
        for (i, k) in live_pairs(fc.cover()) {
            prop_assert!(check_endpoint_dependence(&fc, i, k, 2).is_ok());
            prop_assert!(check_theta_functorial(&fc, i, k, 2).is_ok());
        }
    }

    #[test]
    fn coset_endpoints_are_well_defined(tau in any::<bool>(), x in 0usize..4096, j in 0usize..64) {
        let chain = Arc::new(if tau { presets::s4_chain() } else { presets::s3_chain() });
        let variant = if tau { Variant::Tau } else { Variant::Full };
        let q = build_quotient(chain.clone(), variant).unwrap();
        let cm = chain.outer();
        let members = q.morphisms().members();
        let a = cm.arrow_at(members[x % members.len()]);
        let jh = build_jh(&chain);
        let b = cm.product(a, jh[j % jh.len()]);
        prop_assert_eq!(q.mor_of(a), q.mor_of(b));
        prop_assert_eq!(q.obj_of(cm.source(a)), q.obj_of(cm.source(b)));
        prop_assert_eq!(q.obj_of(cm.target(a)), q.obj_of(cm.target(b)));
    }

    #[test]
    fn transitions_are_unital_and_inverse(seed in 0..BUNDLE_SEEDS, i in 0usize..3, k in 0usize..3, u in 0usize..5) {
        let b = &fixtures()[seed].bundle;
        let c = b.cover();
        prop_assume!(c.in_chart(i, u) && c.in_chart(k, u));
        let q = b.quotient();
        prop_assert_eq!(b.gbar(i, i, u), q.unit_obj());
        prop_assert_eq!(q.obj_mul(b.gbar(i, k, u), b.gbar(k, i, u)), Some(q.unit_obj()));
    }

    #[test]
    fn normal_forms_are_sound_and_stable(seed in 0..BUNDLE_SEEDS, start in 0usize..64, choices in proptest::collection::vec(0usize..4096, 1..4)) {
        let f = &fixtures()[seed];
        let b = &f.bundle;
        let m = word(f, start, &choices);
        let (nf, moves) = b.normal_form_with_moves(&m);
        let replay = b.verify_moves(&m, &moves);
        prop_assert_eq!(replay.as_ref().ok(), Some(&nf));
        prop_assert_eq!(b.normal_form(&nf), nf.clone());
        prop_assert_eq!(b.project(&nf), b.project(&m));
        prop_assert_eq!((b.source(&nf), b.target(&nf)), (b.source(&m), b.target(&m)));
    }

    #[test]
    fn action_respects_equality(seed in 0..BUNDLE_SEEDS, start in 0usize..64, choices in proptest::collection::vec(0usize..4096, 1..4), psi in 0usize..4) {
        let f = &fixtures()[seed];
        let b = &f.bundle;
        let m = word(f, start, &choices);
        let nf = b.normal_form(&m);
        let psi = psi % b.quotient().mor_count();
        prop_assert_eq!(b.normal_form(&b.act_mor(&m, psi)), b.normal_form(&b.act_mor(&nf, psi)));
        prop_assert_eq!(b.project(&b.act_mor(&m, psi)), b.project(&m));
    }

    #[test]
    fn identity_edges_are_neutral(seed in 0..BUNDLE_SEEDS, start in 0usize..64, choices in proptest::collection::vec(0usize..4096, 1..4), at in 0usize..4) {
        let f = &fixtures()[seed];
        let b = &f.bundle;
        let BundleMorphism::Chain(mut edges) = word(f, start, &choices) else { unreachable!() };
        let at = at % (edges.len() + 1);
        let x = if at == 0 { b.edge_endpoints(&edges[0]).unwrap().0 } else { b.edge_endpoints(&edges[at - 1]).unwrap().1 };
        let chart = x.chart;
        let unit = QuiverEdge { chart, label: ChartSet::single(chart), walk: PathMor::identity(x.vertex), deco: b.quotient().identity(x.fiber) };
        let plain = b.normal_form(&BundleMorphism::Chain(edges.clone()));
        edges.insert(at, unit);
        prop_assert_eq!(b.normal_form(&b.chain(edges).unwrap()), plain);
    }

    #[test]
    fn composition_is_associative(seed in 0..BUNDLE_SEEDS, start in 0usize..64, choices in proptest::collection::vec(0usize..4096, 3..4)) {
        let f = &fixtures()[seed];
        let b = &f.bundle;
        let BundleMorphism::Chain(edges) = word(f, start, &choices) else { unreachable!() };
        let part = |n: usize| BundleMorphism::Chain(vec![edges[n].clone()]);
        let left = b.mor_compose(&b.mor_compose(&part(0), &part(1)).unwrap(), &part(2)).unwrap();
        let right = b.mor_compose(&part(0), &b.mor_compose(&part(1), &part(2)).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn echelon_span_contains_combinations(rows in proptest::collection::vec(proptest::collection::btree_map(0usize..12, -3i64..4, 1..5), 1..6), coeffs in proptest::collection::vec(-2i64..3, 6)) {
        let to_vec = |m: &std::collections::BTreeMap<usize, i64>| m.iter().filter(|(_, &x)| x != 0).map(|(&c, &x)| (c, BigRational::from_integer(x.into()))).collect::<std::collections::BTreeMap<_, _>>();
        let mut basis = EchelonBasis::default();
        for r in &rows {
            basis.insert(to_vec(r));
        }
        let mut combo: std::collections::BTreeMap<usize, BigRational> = Default::default();
        for (r, &c) in rows.iter().zip(&coeffs) {
            for (col, x) in to_vec(r) {
                *combo.entry(col).or_default() += x * BigRational::from_integer(c.into());
            }
        }
        combo.retain(|_, x| *x != BigRational::default());
        prop_assert!(basis.contains(combo));
        prop_assert!(basis.rank() <= rows.len());
    }
}
