//! Exact linear-algebra ground truth for bundle morphism equality.
//!
//! The quiver algebra is spanned by composable words of edges `(i, I, γ, φ̄)`
//! with γ a non-identity walk. Every generator of the relation ideal
//! (re-indexing differences and merge binomials) preserves total walk length,
//! so the ideal is graded and its part up to a length bound is the span of
//! `u·g·v` for words `u`, `v` and generators `g` that fit. Membership of
//! `a − b` is decided by exact Gaussian elimination over the rationals.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::base::compose_paths;
use crate::bundle::{all_edges, Bundle, BundleMorphism, BundleObject, QuiverEdge};
use crate::report::Report;

type Vector = BTreeMap<usize, BigRational>;

/// Row-echelon basis; each row is stored under its largest column, with
/// coefficient one there.
#[derive(Debug, Default, Clone)]
pub struct EchelonBasis {
    rows: BTreeMap<usize, Vector>,
}

impl EchelonBasis {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The representative of `v` modulo the span with no pivot columns.
    pub fn reduce(&self, mut v: Vector) -> Vector {
        let mut bound = usize::MAX;
        loop {
            let next = v.range(..bound).rev().map(|(&c, _)| c).find(|c| self.rows.contains_key(c));
            let Some(col) = next else { break };
            let factor = v[&col].clone();
            for (&c, x) in &self.rows[&col] {
                let entry = v.entry(c).or_insert_with(BigRational::zero);
                *entry -= &factor * x;
                if entry.is_zero() {
                    v.remove(&c);
                }
            }
            bound = col;
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: Vector) -> bool {
        let mut v = self.reduce(v);
        let Some((&pivot, lead)) = v.iter().next_back() else { return false };
        let lead = lead.clone();
        if !lead.is_one() {
            for x in v.values_mut() {
                *x /= &lead;
            }
        }
        self.rows.insert(pivot, v);
        true
    }

    pub fn contains(&self, v: Vector) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Words, generators and the reduced span for one bundle.
#[derive(Debug, Clone)]
pub struct IdealOracle {
    edges: Vec<QuiverEdge>,
    ends: Vec<(BundleObject, BundleObject)>,
    words: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    generators: usize,
    basis: EchelonBasis,
}

impl IdealOracle {
    /// Builds the oracle on words of total walk length at most `max_len`.
    pub fn build(b: &Bundle, max_len: usize) -> Self {
        let edges: Vec<QuiverEdge> = all_edges(b, max_len).into_iter().filter(|e| !e.walk.is_identity()).collect();
        let ends: Vec<_> = edges.iter().map(|e| b.edge_endpoints(e).expect("enumerated edges are valid")).collect();
        let mut words: Vec<Vec<usize>> = Vec::new();
        let mut frontier: Vec<(Vec<usize>, usize)> = (0..edges.len()).map(|n| (vec![n], edges[n].walk.len())).collect();
        while let Some((w, len)) = frontier.pop() {
            let last = *w.last().unwrap();
            for n in 0..edges.len() {
                let total = len + edges[n].walk.len();
                if ends[n].0 == ends[last].1 && total <= max_len {
                    let mut longer = w.clone();
                    longer.push(n);
                    frontier.push((longer, total));
                }
            }
            words.push(w);
        }
        words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index: HashMap<Vec<usize>, usize> = words.iter().enumerate().map(|(n, w)| (w.clone(), n)).collect();
        let edge_index: HashMap<&QuiverEdge, usize> = edges.iter().enumerate().map(|(n, e)| (e, n)).collect();

        // Each generator is a list of (coefficient sign, word) with shared endpoints.
        let mut gens: Vec<Vec<(bool, Vec<usize>)>> = Vec::new();
        let q = b.quotient();
        for (n, e) in edges.iter().enumerate() {
            for &set in b.family().members() {
                if !b.cover().walk_inside(set, &e.walk) {
                    continue;
                }
                for j in set.iter() {
                    let deco = q.mor_mul(b.theta_bar(j, e.chart, &e.walk), e.deco).expect("structure group");
                    let other = QuiverEdge { chart: j, label: set, walk: e.walk.clone(), deco };
                    let m = edge_index[&other];
                    if m != n {
                        gens.push(vec![(true, vec![n]), (false, vec![m])]);
                    }
                }
            }
        }
        for (a, ea) in edges.iter().enumerate() {
            for (c, ec) in edges.iter().enumerate() {
                if ends[a].1 != ends[c].0 {
                    continue;
                }
                let Ok(walk) = compose_paths(&ec.walk, &ea.walk) else { continue };
                let common = ea.label.0 & ec.label.0;
                for &set in b.family().members() {
                    if set.0 & !common != 0 {
                        continue;
                    }
                    for k in set.iter() {
                        let da = q.mor_mul(b.theta_bar(k, ea.chart, &ea.walk), ea.deco).expect("structure group");
                        let dc = q.mor_mul(b.theta_bar(k, ec.chart, &ec.walk), ec.deco).expect("structure group");
                        let Some(deco) = q.compose(dc, da) else { continue };
                        let merged = QuiverEdge { chart: k, label: set, walk: walk.clone(), deco };
                        if let Some(&m) = edge_index.get(&merged) {
                            gens.push(vec![(true, vec![m]), (false, vec![a, c])]);
                        }
                    }
                }
            }
        }

        let mut basis = EchelonBasis::default();
        let mut by_end: HashMap<BundleObject, Vec<usize>> = HashMap::new();
        let mut by_start: HashMap<BundleObject, Vec<usize>> = HashMap::new();
        let empty = usize::MAX;
        for (n, w) in words.iter().enumerate() {
            by_end.entry(ends[*w.last().unwrap()].1).or_default().push(n);
            by_start.entry(ends[w[0]].0).or_default().push(n);
        }
        for g in &gens {
            let (s, t) = (ends[g[0].1[0]].0, ends[*g[0].1.last().unwrap()].1);
            let prefixes = std::iter::once(empty).chain(by_end.get(&s).into_iter().flatten().copied());
            for u in prefixes {
                let suffixes = std::iter::once(empty).chain(by_start.get(&t).into_iter().flatten().copied());
                for v in suffixes {
                    let mut vector = Vector::new();
                    for (positive, term) in g {
                        let mut word = Vec::new();
                        if u != empty {
                            word.extend_from_slice(&words[u]);
                        }
                        word.extend_from_slice(term);
                        if v != empty {
                            word.extend_from_slice(&words[v]);
                        }
                        let Some(&col) = index.get(&word) else { continue };
                        let x = if *positive { BigRational::one() } else { -BigRational::one() };
                        let entry = vector.entry(col).or_insert_with(BigRational::zero);
                        *entry += x;
                        if entry.is_zero() {
                            vector.remove(&col);
                        }
                    }
                    basis.insert(vector);
                }
            }
        }
        Self { edges, ends, words, index, generators: gens.len(), basis }
    }

    pub fn edges(&self) -> &[QuiverEdge] {
        &self.edges
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn word_index(&self, word: &[usize]) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn morphism(&self, word: usize) -> BundleMorphism {
        BundleMorphism::Chain(self.words[word].iter().map(|&n| self.edges[n].clone()).collect())
    }

    pub fn word_endpoints(&self, word: usize) -> (BundleObject, BundleObject) {
        let w = &self.words[word];
        (self.ends[w[0]].0, self.ends[*w.last().unwrap()].1)
    }

    /// Whether `a − b` lies in the ideal.
    pub fn equal(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        let mut v = Vector::new();
        v.insert(a, BigRational::one());
        v.insert(b, -BigRational::one());
        self.basis.contains(v)
    }

    /// Class label of every word: words share a label iff the oracle
    /// declares them equal.
    pub fn classes(&self) -> Vec<usize> {
        let mut seen: HashMap<Vec<(usize, BigRational)>, usize> = HashMap::new();
        (0..self.words.len())
            .map(|n| {
                let mut v = Vector::new();
                v.insert(n, BigRational::one());
                let key: Vec<_> = self.basis.reduce(v).into_iter().collect();
                let next = seen.len();
                *seen.entry(key).or_insert(next)
            })
            .collect()
    }
}

/// Outcome of comparing normal-form equality with the oracle.
#[derive(Debug, Clone)]
pub struct OracleComparison {
    pub edges: usize,
    pub words: usize,
    pub generators: usize,
    pub rank: usize,
    pub classes: usize,
    pub equal_pairs: usize,
    pub unequal_pairs: usize,
    /// Pairs `(a, b)` of word indices where the verdicts differ, with the
    /// oracle's verdict.
    pub disagreements: Vec<(usize, usize, bool)>,
    /// Soundness of every normal-form rewrite, plus projection, endpoint and
    /// action invariance on every oracle-equal pair.
    pub invariants: Report,
}

/// Compares `mor_equal` with ideal membership on every ordered pair of words.
pub fn compare_with_oracle(b: &Bundle, oracle: &IdealOracle) -> OracleComparison {
    let q = b.quotient();
    let n = oracle.words().len();
    let classes = oracle.classes();
    let morphisms: Vec<BundleMorphism> = (0..n).map(|w| oracle.morphism(w)).collect();
    let mut invariants = Report::new();
    let normal: Vec<BundleMorphism> = morphisms
        .iter()
        .map(|m| {
            let (nf, moves) = b.normal_form_with_moves(m);
            match b.verify_moves(m, &moves) {
                Ok(end) if end == nf => {}
                Ok(_) => invariants.push("congruence.soundness", format!("{}: replay ends elsewhere", b.fmt_mor(m))),
                Err(e) => invariants.push("congruence.soundness", format!("{}: {e}", b.fmt_mor(m))),
            }
            nf
        })
        .collect();
    let acted: Vec<Vec<BundleMorphism>> =
        normal.iter().map(|m| (0..q.mor_count()).map(|p| b.normal_form(&b.act_mor(m, p))).collect()).collect();

    let mut equal_pairs = 0;
    let mut unequal_pairs = 0;
    let mut disagreements = Vec::new();
    for a in 0..n {
        for c in 0..n {
            let truth = classes[a] == classes[c];
            if truth {
                equal_pairs += 1;
            } else {
                unequal_pairs += 1;
            }
            if truth != (normal[a] == normal[c]) {
                disagreements.push((a, c, truth));
            }
            if !truth || a >= c {
                continue;
            }
            let pair = || format!("{} vs {}", b.fmt_mor(&morphisms[a]), b.fmt_mor(&morphisms[c]));
            if b.project(&morphisms[a]) != b.project(&morphisms[c]) {
                invariants.push("congruence.projection", pair());
            }
            if oracle.word_endpoints(a) != oracle.word_endpoints(c) {
                invariants.push("congruence.endpoints", pair());
            }
            for (p, (x, y)) in acted[a].iter().zip(&acted[c]).enumerate() {
                if x != y {
                    invariants.push("congruence.action", format!("{} acted on by {}", pair(), q.fmt_mor(p)));
                }
            }
        }
    }
    OracleComparison {
        edges: oracle.edges().len(),
        words: n,
        generators: oracle.generator_count(),
        rank: oracle.rank(),
        classes: classes.iter().max().map_or(0, |m| m + 1),
        equal_pairs,
        unequal_pairs,
        disagreements,
        invariants,
    }
}
