//! Preset groups, actions and crossed-module chains.
//!
//! Permutation groups are generated by composing permutations and then frozen
//! into tables; everything downstream only ever reads the tables.

use std::sync::Arc;

use crate::crossed::{ChainedCrossedModules, CrossedModule};
use crate::group::{FiniteGroup, GroupAction, GroupHom, DEFAULT_MAX_ORDER};

/// A permutation of `{0, .., n-1}` stored as its image vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(pub Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y as usize] = x as u8;
        }
        Perm(inv)
    }

    pub fn is_even(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        let mut transpositions = 0;
        for start in 0..self.0.len() {
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        transpositions % 2 == 0
    }

    /// Cycle notation on the points `1..=n`, e.g. `(12)(34)`; `e` for the identity.
    pub fn cycle_notation(&self) -> String {
        let mut seen = vec![false; self.0.len()];
        let mut out = String::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            out.push('(');
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                out.push_str(&(x + 1).to_string());
                x = self.0[x] as usize;
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push('e');
        }
        out
    }

    /// Parses cycle notation produced by [`Perm::cycle_notation`].
    pub fn parse(n: usize, s: &str) -> Option<Perm> {
        let mut p = Perm::identity(n);
        if s == "e" {
            return Some(p);
        }
        for cycle in s.split(')') {
            if cycle.is_empty() {
                continue;
            }
            let body = cycle.strip_prefix('(')?;
            let pts: Vec<usize> = body
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize - 1))
                .collect::<Option<_>>()?;
            for w in 0..pts.len() {
                p.0[pts[w]] = pts[(w + 1) % pts.len()] as u8;
            }
        }
        Some(p)
    }
}

fn all_perms(n: usize) -> Vec<Perm> {
    fn rec(n: usize, cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Perm>) {
        if cur.len() == n {
            out.push(Perm(cur.clone()));
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x as u8);
                rec(n, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Table of a permutation group given by its element list (assumed closed).
pub fn permutation_group(name: &str, perms: &[Perm]) -> FiniteGroup {
    let ids: Vec<String> = perms.iter().map(Perm::cycle_notation).collect();
    let pos = |p: &Perm| perms.iter().position(|q| q == p).expect("permutation list not closed");
    FiniteGroup::from_fn(name, ids, DEFAULT_MAX_ORDER, |a, b| pos(&perms[a].compose(&perms[b])))
        .expect("preset permutation group")
}

pub fn symmetric_perms(n: usize) -> Vec<Perm> {
    all_perms(n)
}

pub fn alternating_perms(n: usize) -> Vec<Perm> {
    all_perms(n).into_iter().filter(Perm::is_even).collect()
}

pub fn klein_perms() -> Vec<Perm> {
    ["e", "(12)(34)", "(13)(24)", "(14)(23)"]
        .iter()
        .map(|s| Perm::parse(4, s).unwrap())
        .collect()
}

pub fn symmetric(n: usize) -> FiniteGroup {
    permutation_group(&format!("S{n}"), &symmetric_perms(n))
}

pub fn alternating(n: usize) -> FiniteGroup {
    permutation_group(&format!("A{n}"), &alternating_perms(n))
}

pub fn klein_four() -> FiniteGroup {
    permutation_group("V4", &klein_perms())
}

/// ℤ_n with ids `"0"`..`"n-1"`.
pub fn cyclic(n: usize) -> FiniteGroup {
    let ids = (0..n).map(|k| k.to_string()).collect();
    FiniteGroup::from_fn(&format!("Z{n}"), ids, DEFAULT_MAX_ORDER, |a, b| (a + b) % n)
        .expect("cyclic group")
}

/// Conjugation `act(g, h) = g h g⁻¹` of one permutation group on another,
/// both sitting inside the symmetric group of the same degree.
pub fn conjugation(name: &str, degree: usize, actor: &Arc<FiniteGroup>, space: &Arc<FiniteGroup>) -> GroupAction {
    let perm = |g: &FiniteGroup, x: usize| Perm::parse(degree, g.id(x)).expect("preset id");
    let actor_perms: Vec<Perm> = actor.elements().map(|g| perm(actor, g)).collect();
    let space_perms: Vec<Perm> = space.elements().map(|h| perm(space, h)).collect();
    GroupAction::from_fn(name, actor.clone(), space.clone(), |g, h| {
        let p = &actor_perms[g];
        let image = p.compose(&space_perms[h]).compose(&p.inverse());
        space
            .index_of(&image.cycle_notation())
            .expect("conjugation preserves the subgroup")
    })
}

/// `(G, G, conjugation, id)` and `(G, A, conjugation, inclusion)` for G = S₃, A = A₃.
pub fn s3_chain() -> ChainedCrossedModules {
    let s3 = Arc::new(symmetric(3));
    let a3 = Arc::new(alternating(3));
    let outer = CrossedModule::new(
        s3.clone(),
        s3.clone(),
        conjugation("conj_S3_S3", 3, &s3, &s3),
        GroupHom::by_id("id_S3", s3.clone(), s3.clone()).expect("identity"),
    )
    .expect("s3 outer module");
    let inner = CrossedModule::new(
        s3.clone(),
        a3.clone(),
        conjugation("conj_S3_A3", 3, &s3, &a3),
        GroupHom::by_id("incl_A3_S3", a3, s3).expect("inclusion"),
    )
    .expect("s3 inner module");
    ChainedCrossedModules::new(outer, inner).expect("s3 chain")
}

/// `(S₄, A₄, conjugation, inclusion)` and `(A₄, V₄, conjugation, inclusion)`;
/// here the outer boundary map is not surjective.
pub fn s4_chain() -> ChainedCrossedModules {
    let s4 = Arc::new(symmetric(4));
    let a4 = Arc::new(alternating(4));
    let v4 = Arc::new(klein_four());
    let outer = CrossedModule::new(
        s4.clone(),
        a4.clone(),
        conjugation("conj_S4_A4", 4, &s4, &a4),
        GroupHom::by_id("incl_A4_S4", a4.clone(), s4).expect("inclusion"),
    )
    .expect("s4 outer module");
    let inner = CrossedModule::new(
        a4.clone(),
        v4.clone(),
        conjugation("conj_A4_V4", 4, &a4, &v4),
        GroupHom::by_id("incl_V4_A4", v4, a4).expect("inclusion"),
    )
    .expect("s4 inner module");
    ChainedCrossedModules::new(outer, inner).expect("s4 chain")
}

pub fn chain(name: &str) -> Option<ChainedCrossedModules> {
    match name {
        "s3-chain" => Some(s3_chain()),
        "s4-chain" => Some(s4_chain()),
        _ => None,
    }
}
