//! Signed graphs at laboratory scale: exact matching numbers, exact counts
//! of signed subgraph embeddings, the cut-and-swap involution that maps
//! arrangements in one long cycle to arrangements in two shorter cycles,
//! and permutation-orbit indistinguishability checks for masked matrices.
//! Everything here is exhaustive and errors out beyond its size caps rather
//! than sampling silently.

use core_matrix::rng::trial_rng;
use core_matrix::{Mat, SymmetricMatrix};
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("input exceeds the exhaustive-enumeration cap: {0}")]
    TooLarge(String),
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("contract breached: {0}")]
    Contract(String),
}

/// Hosts larger than this refuse exhaustive subgraph counting.
pub const HOST_CAP: usize = 30;
/// Full permutation orbits are enumerated only up to this many vertices.
pub const ORBIT_CAP: usize = 10;
/// Matching numbers are computed exactly only at laboratory scale.
pub const MATCHING_CAP: usize = 40;

/// A graph with +1/-1 edge labels, no self-loops, at most one label per
/// unordered pair. Vertices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedGraph {
    n: usize,
    edges: BTreeMap<(usize, usize), i8>,
}

impl SignedGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: BTreeMap::new(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, i8)]) -> Result<Self, LabError> {
        let mut g = Self::empty(n);
        for &(u, v, s) in edges {
            g.add_edge(u, v, s)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize, sign: i8) -> Result<(), LabError> {
        if u >= self.n || v >= self.n {
            return Err(LabError::BadParameter(format!(
                "edge ({},{}) outside 0..{}",
                u, v, self.n
            )));
        }
        if u == v {
            return Err(LabError::BadParameter(format!("self-loop at {}", u)));
        }
        if sign != 1 && sign != -1 {
            return Err(LabError::BadParameter("sign must be +1 or -1".into()));
        }
        let key = (u.min(v), u.max(v));
        if self.edges.contains_key(&key) {
            return Err(LabError::BadParameter(format!(
                "duplicate edge ({},{})",
                key.0, key.1
            )));
        }
        self.edges.insert(key, sign);
        Ok(())
    }

    /// The plain cycle 0-1-2-..-(n-1)-0 with positive edges.
    pub fn cycle(n: usize) -> Result<Self, LabError> {
        if n < 3 {
            return Err(LabError::BadParameter("cycles need at least 3 vertices".into()));
        }
        let mut g = Self::empty(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n, 1)?;
        }
        Ok(g)
    }

    /// Two disjoint positive cycles on n1 + n2 vertices.
    pub fn two_cycles(n1: usize, n2: usize) -> Result<Self, LabError> {
        if n1 < 3 || n2 < 3 {
            return Err(LabError::BadParameter("cycles need at least 3 vertices".into()));
        }
        let mut g = Self::empty(n1 + n2);
        for i in 0..n1 {
            g.add_edge(i, (i + 1) % n1, 1)?;
        }
        for i in 0..n2 {
            g.add_edge(n1 + (i + 1) % n2, n1 + i, 1)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// 0 when the pair carries no edge.
    pub fn sign(&self, u: usize, v: usize) -> i8 {
        if u == v {
            return 0;
        }
        *self.edges.get(&(u.min(v), u.max(v))).unwrap_or(&0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, i8)> + '_ {
        self.edges.iter().map(|(&(u, v), &s)| (u, v, s))
    }

    pub fn positive_count(&self) -> usize {
        self.edges.values().filter(|&&s| s > 0).count()
    }

    pub fn negative_count(&self) -> usize {
        self.edges.values().filter(|&&s| s < 0).count()
    }

    /// Vertices touching at least one edge, ascending.
    pub fn core_vertices(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        for (&(u, v), _) in &self.edges {
            seen[u] = true;
            seen[v] = true;
        }
        (0..self.n).filter(|&v| seen[v]).collect()
    }

    pub fn matching_number(&self) -> usize {
        assert!(self.n <= MATCHING_CAP, "matching is exact only at lab scale");
        let edges: Vec<(usize, usize)> = self.edges.keys().cloned().collect();
        max_matching(&edges)
    }
}

/// A symmetric set of query positions; self-loops allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryPattern {
    n: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl QueryPattern {
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, LabError> {
        let mut set = BTreeSet::new();
        for &(u, v) in pairs {
            if u >= n || v >= n {
                return Err(LabError::BadParameter(format!(
                    "pair ({},{}) outside 0..{}",
                    u, v, n
                )));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self { n, pairs: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Unordered positions, loops included, ascending.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().cloned()
    }

    /// Maximum matching over the non-loop pairs.
    pub fn matching_number(&self) -> usize {
        assert!(self.n <= MATCHING_CAP, "matching is exact only at lab scale");
        let edges: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .filter(|&&(u, v)| u != v)
            .cloned()
            .collect();
        max_matching(&edges)
    }
}

/// Exact maximum matching by branching on the first edge.
fn max_matching(edges: &[(usize, usize)]) -> usize {
    if edges.is_empty() {
        return 0;
    }
    let (u, v) = edges[0];
    let without = max_matching(&edges[1..]);
    let rest: Vec<(usize, usize)> = edges[1..]
        .iter()
        .filter(|&&(a, b)| a != u && a != v && b != u && b != v)
        .cloned()
        .collect();
    without.max(1 + max_matching(&rest))
}

/// Completes a simple graph with negative edges: pairs present in the input
/// keep a positive sign, all other pairs get -1.
pub fn signed_complete(g: &SignedGraph) -> SignedGraph {
    let n = g.n();
    let mut out = SignedGraph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            let s = if g.sign(u, v) != 0 { 1 } else { -1 };
            out.add_edge(u, v, s).expect("complete graph edge");
        }
    }
    out
}

/// Backtracking over injective placements of the pattern core into the
/// host. When the remaining vertices are interchangeable leaves with all
/// parents placed, the tail collapses to a falling factorial instead of
/// being enumerated.
struct EmbedSearch<'a> {
    host: &'a SignedGraph,
    order: Vec<usize>,
    /// constraints[k] = (earlier position in `order`, sign) for core vertex order[k]
    constraints: Vec<Vec<(usize, i8)>>,
    /// adjacency among core vertices by order position
    adjacent: Vec<Vec<bool>>,
}

impl<'a> EmbedSearch<'a> {
    fn new(host: &'a SignedGraph, pattern: &SignedGraph) -> Self {
        let core = pattern.core_vertices();
        // place high-degree vertices first so the leaf tail can collapse
        let mut order = core.clone();
        let degree = |v: usize| {
            pattern
                .edges()
                .filter(|&(a, b, _)| a == v || b == v)
                .count()
        };
        order.sort_by_key(|&v| std::cmp::Reverse(degree(v)));
        let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let c = order.len();
        let mut constraints = vec![Vec::new(); c];
        let mut adjacent = vec![vec![false; c]; c];
        for (u, v, s) in pattern.edges() {
            let (a, b) = (pos[&u], pos[&v]);
            adjacent[a][b] = true;
            adjacent[b][a] = true;
            let (lo, hi) = (a.min(b), a.max(b));
            constraints[hi].push((lo, s));
        }
        for c in constraints.iter_mut() {
            c.sort();
        }
        Self {
            host,
            order,
            constraints,
            adjacent,
        }
    }

    fn count(&self) -> u128 {
        let mut assigned = vec![usize::MAX; self.order.len()];
        let mut used = vec![false; self.host.n()];
        self.recurse(0, &mut assigned, &mut used)
    }

    /// True when every vertex from position k on is a pairwise non-adjacent
    /// leaf whose parents are all already placed, with identical constraints.
    fn tail_is_uniform(&self, k: usize) -> bool {
        let c = self.order.len();
        if k >= c {
            return false;
        }
        for i in k..c {
            for j in (i + 1)..c {
                if self.adjacent[i][j] {
                    return false;
                }
            }
            if self.constraints[i] != self.constraints[k] {
                return false;
            }
            if self.constraints[i].iter().any(|&(p, _)| p >= k) {
                return false;
            }
        }
        true
    }

    fn recurse(&self, k: usize, assigned: &mut Vec<usize>, used: &mut Vec<bool>) -> u128 {
        let c = self.order.len();
        if k == c {
            return 1;
        }
        if self.tail_is_uniform(k) {
            let m = (c - k) as u128;
            let candidates = (0..self.host.n())
                .filter(|&h| {
                    !used[h]
                        && self.constraints[k]
                            .iter()
                            .all(|&(p, s)| self.host.sign(assigned[p], h) == s)
                })
                .count() as u128;
            if candidates < m {
                return 0;
            }
            let mut total = 1u128;
            for i in 0..m {
                total *= candidates - i;
            }
            return total;
        }
        let mut total = 0u128;
        for h in 0..self.host.n() {
            if used[h] {
                continue;
            }
            if self.constraints[k]
                .iter()
                .any(|&(p, s)| self.host.sign(assigned[p], h) != s)
            {
                continue;
            }
            assigned[k] = h;
            used[h] = true;
            total += self.recurse(k + 1, assigned, used);
            used[h] = false;
            assigned[k] = usize::MAX;
        }
        total
    }

    /// Collects up to `limit` embedded copies as explicit signed graphs on
    /// the host's vertex set.
    fn samples(&self, pattern: &SignedGraph, limit: usize) -> Vec<SignedGraph> {
        let mut out = Vec::new();
        let mut assigned = vec![usize::MAX; self.order.len()];
        let mut used = vec![false; self.host.n()];
        self.sample_recurse(0, &mut assigned, &mut used, pattern, limit, &mut out);
        out
    }

    fn sample_recurse(
        &self,
        k: usize,
        assigned: &mut Vec<usize>,
        used: &mut Vec<bool>,
        pattern: &SignedGraph,
        limit: usize,
        out: &mut Vec<SignedGraph>,
    ) {
        if out.len() >= limit {
            return;
        }
        let c = self.order.len();
        if k == c {
            let pos: HashMap<usize, usize> = self
                .order
                .iter()
                .enumerate()
                .map(|(idx, &v)| (v, assigned[idx]))
                .collect();
            let mut g = SignedGraph::empty(self.host.n());
            for (u, v, s) in pattern.edges() {
                g.add_edge(pos[&u], pos[&v], s).expect("distinct images");
            }
            out.push(g);
            return;
        }
        for h in 0..self.host.n() {
            if out.len() >= limit {
                return;
            }
            if used[h] {
                continue;
            }
            if self.constraints[k]
                .iter()
                .any(|&(p, s)| self.host.sign(assigned[p], h) != s)
            {
                continue;
            }
            assigned[k] = h;
            used[h] = true;
            self.sample_recurse(k + 1, assigned, used, pattern, limit, out);
            used[h] = false;
            assigned[k] = usize::MAX;
        }
    }
}

fn injective_map_count(host: &SignedGraph, pattern: &SignedGraph) -> u128 {
    EmbedSearch::new(host, pattern).count()
}

/// Automorphisms of the pattern restricted to its core (sign-preserving).
fn core_automorphisms(pattern: &SignedGraph) -> u128 {
    let core = pattern.core_vertices();
    if core.is_empty() {
        return 1;
    }
    // relabel the core to a standalone graph and map it into itself
    let pos: HashMap<usize, usize> = core.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut small = SignedGraph::empty(core.len());
    for (u, v, s) in pattern.edges() {
        small.add_edge(pos[&u], pos[&v], s).expect("core edge");
    }
    injective_map_count(&small, &small)
}

/// Number of distinct edge-subsets of the host isomorphic to the pattern
/// (pattern implicitly padded with isolated vertices).
pub fn count_embeddings(host: &SignedGraph, pattern: &SignedGraph) -> Result<u128, LabError> {
    if host.n() > HOST_CAP {
        return Err(LabError::TooLarge(format!(
            "host has {} vertices, cap is {}",
            host.n(),
            HOST_CAP
        )));
    }
    if pattern.core_vertices().len() > host.n() {
        return Ok(0);
    }
    let maps = injective_map_count(host, pattern);
    let aut = core_automorphisms(pattern);
    debug_assert_eq!(maps % aut, 0);
    Ok(maps / aut)
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Number of permutations of the host's vertex set under which the permuted
/// pattern is a subgraph of the host.
pub fn count_permutation_embeddings(
    host: &SignedGraph,
    pattern: &SignedGraph,
) -> Result<u128, LabError> {
    if pattern.n() != host.n() {
        return Err(LabError::BadParameter(
            "pattern must live on the host vertex count".into(),
        ));
    }
    if host.n() > HOST_CAP {
        return Err(LabError::TooLarge(format!(
            "host has {} vertices, cap is {}",
            host.n(),
            HOST_CAP
        )));
    }
    let c = pattern.core_vertices().len();
    Ok(injective_map_count(host, pattern) * factorial(host.n() - c))
}

/// Automorphism count of the pattern as a graph on all n vertices
/// (isolated vertices permute freely).
pub fn automorphism_count(pattern: &SignedGraph) -> u128 {
    let c = pattern.core_vertices().len();
    core_automorphisms(pattern) * factorial(pattern.n() - c)
}

/// The split-point permutation: swaps the i last vertices before each of
/// the two cut points n1 and n (1-based), identity elsewhere.
fn swap_permutation(n1: usize, n: usize, i: usize) -> Vec<usize> {
    // 1-based table with a dummy entry at 0
    let mut sigma: Vec<usize> = (0..=n).collect();
    for j in 0..i {
        sigma.swap(n1 - j, n - j);
    }
    sigma
}

/// The split index for the cut-and-swap map: the smallest i >= 0 such that
/// none of the four pairs bridging the two cut points at depth i carries an
/// edge. Vertices are 1-based with wraparound (vertex n+1 is vertex 1).
pub fn phi_index(x: &SignedGraph, n1: usize, n2: usize) -> Result<usize, LabError> {
    let n = n1 + n2;
    if x.n() != n {
        return Err(LabError::BadParameter("graph must have n1+n2 vertices".into()));
    }
    let min = n1.min(n2);
    if 4 * x.matching_number() > min {
        return Err(LabError::Contract(
            "matching number exceeds min(n1,n2)/4".into(),
        ));
    }
    // 1-based accessor with wraparound, returning the sign
    let at = |a: usize, b: usize| -> i8 {
        let a0 = (a - 1) % n;
        let b0 = (b - 1) % n;
        x.sign(a0, b0)
    };
    for i in 0..=(min / 2 + 1) {
        if at(n1 - i, n1 - i + 1) == 0
            && at(n - i, n - i + 1) == 0
            && at(n - i, n1 - i + 1) == 0
            && at(n1 - i, n - i + 1) == 0
        {
            return Ok(i);
        }
    }
    Err(LabError::Contract(
        "no admissible split index below min/2 + 1".into(),
    ))
}

/// The cut-and-swap map: conjugates the graph by the swap permutation at
/// the split index. An involution on graphs with small matching number.
pub fn phi_map(x: &SignedGraph, n1: usize, n2: usize) -> Result<SignedGraph, LabError> {
    let i = phi_index(x, n1, n2)?;
    let n = n1 + n2;
    let sigma = swap_permutation(n1, n, i);
    let mut out = SignedGraph::empty(n);
    for (u, v, s) in x.edges() {
        // public indices are 0-based; the permutation table is 1-based
        let su = sigma[u + 1] - 1;
        let sv = sigma[v + 1] - 1;
        out.add_edge(su, sv, s)?;
    }
    Ok(out)
}

/// Per-pattern outcome of the cycle-splitting equivalence check.
#[derive(Debug, Clone)]
pub struct PatternReport {
    pub edges: usize,
    pub matching_number: usize,
    pub count_single_cycle: u128,
    pub count_two_cycles: u128,
    pub counts_equal: bool,
    pub phi_closed: bool,
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub n1: usize,
    pub n2: usize,
    pub t: usize,
    pub patterns: Vec<PatternReport>,
}

impl EquivalenceReport {
    pub fn all_pass(&self) -> bool {
        self.patterns.iter().all(|p| p.counts_equal && p.phi_closed)
    }
}

/// How many embedded copies are pushed through the cut-and-swap map per
/// pattern when checking closure.
const PHI_SAMPLE_LIMIT: usize = 200;

/// Is `g` a subgraph of `host` (same signs wherever g has an edge)?
fn is_subgraph(g: &SignedGraph, host: &SignedGraph) -> bool {
    g.edges().all(|(u, v, s)| host.sign(u, v) == s)
}

/// For every pattern: counts embeddings into the completed single cycle and
/// the completed pair of cycles, demands equality, and pushes sampled
/// embeddings through the cut-and-swap map to confirm they land in the
/// split host.
pub fn verify_cycle_equivalence(
    n1: usize,
    n2: usize,
    t: usize,
    patterns: &[SignedGraph],
) -> Result<EquivalenceReport, LabError> {
    let min = n1.min(n2);
    if t == 0 || 4 * t > min + 3 {
        return Err(LabError::BadParameter(format!(
            "t={} exceeds the quarter budget of min(n1,n2)={}",
            t, min
        )));
    }
    let single = signed_complete(&SignedGraph::cycle(n1 + n2)?);
    let split = signed_complete(&SignedGraph::two_cycles(n1, n2)?);
    let mut reports = Vec::with_capacity(patterns.len());
    for pattern in patterns {
        let nu = pattern.matching_number();
        if nu >= t {
            return Err(LabError::Contract(format!(
                "pattern with matching number {} admitted at t={}",
                nu, t
            )));
        }
        let count_single_cycle = count_embeddings(&single, pattern)?;
        let count_two_cycles = count_embeddings(&split, pattern)?;
        let search = EmbedSearch::new(&single, pattern);
        let mut phi_closed = true;
        for copy in search.samples(pattern, PHI_SAMPLE_LIMIT) {
            let image = phi_map(&copy, n1, n2)?;
            if !is_subgraph(&image, &split) {
                phi_closed = false;
                break;
            }
        }
        reports.push(PatternReport {
            edges: pattern.edge_count(),
            matching_number: nu,
            count_single_cycle,
            count_two_cycles,
            counts_equal: count_single_cycle == count_two_cycles,
            phi_closed,
        });
    }
    Ok(EquivalenceReport {
        n1,
        n2,
        t,
        patterns: reports,
    })
}

/// All isomorphism classes of signed graphs with 1..=max_edges edges and
/// matching number <= max_nu, each on its minimal vertex set.
pub fn enumerate_patterns(max_edges: usize, max_nu: usize) -> Vec<SignedGraph> {
    let mut classes: Vec<SignedGraph> = Vec::new();
    let mut seen: BTreeSet<Vec<(usize, usize, i8)>> = BTreeSet::new();
    let mut frontier: Vec<SignedGraph> = vec![SignedGraph::empty(0)];
    for _level in 1..=max_edges {
        let mut next = Vec::new();
        for g in &frontier {
            let c = g.n();
            // candidate new edges: inside the core, one fresh endpoint, or
            // an entirely fresh edge
            let mut candidates: Vec<(usize, usize)> = Vec::new();
            for u in 0..c {
                for v in (u + 1)..c {
                    if g.sign(u, v) == 0 {
                        candidates.push((u, v));
                    }
                }
                candidates.push((u, c));
            }
            candidates.push((c, c + 1));
            for (u, v) in candidates {
                for s in [1i8, -1] {
                    let grown = v.max(u) + 1;
                    let mut h = SignedGraph::empty(c.max(grown));
                    for (a, b, sg) in g.edges() {
                        h.add_edge(a, b, sg).expect("copied edge");
                    }
                    if h.add_edge(u, v, s).is_err() {
                        continue;
                    }
                    if h.matching_number() > max_nu {
                        continue;
                    }
                    let key = canonical_form(&h);
                    if seen.insert(key) {
                        classes.push(h.clone());
                        next.push(h);
                    }
                }
            }
        }
        frontier = next;
    }
    classes
}

/// Canonical edge list: vertices are grouped by (positive degree, negative
/// degree) and the lexicographically smallest relabeled edge list over all
/// group-respecting orderings is taken.
fn canonical_form(g: &SignedGraph) -> Vec<(usize, usize, i8)> {
    let core = g.core_vertices();
    let inv = |v: usize| -> (usize, usize) {
        let pos = g
            .edges()
            .filter(|&(a, b, s)| (a == v || b == v) && s > 0)
            .count();
        let neg = g
            .edges()
            .filter(|&(a, b, s)| (a == v || b == v) && s < 0)
            .count();
        (pos, neg)
    };
    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for &v in &core {
        groups.entry(inv(v)).or_default().push(v);
    }
    let group_list: Vec<Vec<usize>> = groups.into_values().collect();
    let mut best: Option<Vec<(usize, usize, i8)>> = None;
    let mut labels: HashMap<usize, usize> = HashMap::new();
    permute_groups(&group_list, 0, &mut labels, &mut 0, g, &mut best);
    best.unwrap_or_default()
}

fn permute_groups(
    groups: &[Vec<usize>],
    gi: usize,
    labels: &mut HashMap<usize, usize>,
    next_label: &mut usize,
    g: &SignedGraph,
    best: &mut Option<Vec<(usize, usize, i8)>>,
) {
    if gi == groups.len() {
        let mut edges: Vec<(usize, usize, i8)> = g
            .edges()
            .map(|(u, v, s)| {
                let (a, b) = (labels[&u], labels[&v]);
                (a.min(b), a.max(b), s)
            })
            .collect();
        edges.sort();
        match best {
            None => *best = Some(edges),
            Some(b) if edges < *b => *b = edges,
            _ => {}
        }
        return;
    }
    let members = &groups[gi];
    let mut perm: Vec<usize> = members.clone();
    permute_within(&mut perm, 0, groups, gi, labels, next_label, g, best);
}

#[allow(clippy::too_many_arguments)]
fn permute_within(
    perm: &mut Vec<usize>,
    k: usize,
    groups: &[Vec<usize>],
    gi: usize,
    labels: &mut HashMap<usize, usize>,
    next_label: &mut usize,
    g: &SignedGraph,
    best: &mut Option<Vec<(usize, usize, i8)>>,
) {
    if k == perm.len() {
        let base = *next_label;
        for (offset, &v) in perm.iter().enumerate() {
            labels.insert(v, base + offset);
        }
        *next_label += perm.len();
        permute_groups(groups, gi + 1, labels, next_label, g, best);
        *next_label = base;
        for &v in perm.iter() {
            labels.remove(&v);
        }
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute_within(perm, k + 1, groups, gi, labels, next_label, g, best);
        perm.swap(k, i);
    }
}

/// A sparse random signed graph: `edges` distinct pairs, random signs.
/// With edges <= min(n1,n2)/4 the result is admissible for the cut-and-swap
/// map.
pub fn random_sparse_signed(n: usize, edges: usize, seed: u64) -> SignedGraph {
    let mut rng = trial_rng(seed, 7);
    let mut g = SignedGraph::empty(n);
    let mut placed = 0;
    while placed < edges {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v || g.sign(u, v) != 0 {
            continue;
        }
        let s = if rng.gen::<bool>() { 1 } else { -1 };
        g.add_edge(u, v, s).expect("fresh edge");
        placed += 1;
    }
    g
}

/// Exact multiset equality of masked views over the full permutation
/// orbit: for every vertex permutation, the matrix entries at the query
/// positions are recorded, and the two matrices must produce identical
/// multisets of views.
pub fn orbit_indistinguishability(
    b: &SymmetricMatrix,
    d: &SymmetricMatrix,
    u: &QueryPattern,
) -> Result<bool, LabError> {
    let n = b.n();
    if d.n() != n || u.n() != n {
        return Err(LabError::BadParameter("dimension mismatch".into()));
    }
    if n > ORBIT_CAP {
        return Err(LabError::TooLarge(format!(
            "orbit enumeration capped at {} vertices",
            ORBIT_CAP
        )));
    }
    let pairs: Vec<(usize, usize)> = u.pairs().collect();
    let mut tally: HashMap<Vec<u64>, i64> = HashMap::new();
    let view = |m: &SymmetricMatrix, perm: &[usize]| -> Vec<u64> {
        pairs
            .iter()
            .map(|&(i, j)| m.get(perm[i], perm[j]).to_bits())
            .collect()
    };
    for_each_permutation(n, |perm| {
        *tally.entry(view(b, perm)).or_insert(0) += 1;
        *tally.entry(view(d, perm)).or_insert(0) -= 1;
    });
    Ok(tally.values().all(|&c| c == 0))
}

/// The block-permutation lift: permutations act on the d block indices of a
/// Kronecker product with an m x m factor, leaving positions inside each
/// block fixed. The query pattern lives on the d*m product index set.
pub fn orbit_indistinguishability_lifted(
    b: &SymmetricMatrix,
    d: &SymmetricMatrix,
    z: &Mat,
    u: &QueryPattern,
) -> Result<bool, LabError> {
    let nd = b.n();
    let m = z.rows();
    if d.n() != nd || z.cols() != m || u.n() != nd * m {
        return Err(LabError::BadParameter("dimension mismatch".into()));
    }
    if nd > ORBIT_CAP {
        return Err(LabError::TooLarge(format!(
            "orbit enumeration capped at {} blocks",
            ORBIT_CAP
        )));
    }
    let pairs: Vec<(usize, usize)> = u.pairs().collect();
    let mut tally: HashMap<Vec<u64>, i64> = HashMap::new();
    let view = |small: &SymmetricMatrix, perm: &[usize]| -> Vec<u64> {
        pairs
            .iter()
            .map(|&(gi, gj)| {
                let (bi, ri) = (perm[gi / m], gi % m);
                let (bj, rj) = (perm[gj / m], gj % m);
                (small.get(bi, bj) * z.get(ri, rj)).to_bits()
            })
            .collect()
    };
    for_each_permutation(nd, |perm| {
        *tally.entry(view(b, perm)).or_insert(0) += 1;
        *tally.entry(view(d, perm)).or_insert(0) -= 1;
    });
    Ok(tally.values().all(|&c| c == 0))
}

fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    heap_permute(&mut perm, n, &mut f);
}

fn heap_permute(perm: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        f(perm);
        return;
    }
    for i in 0..k {
        heap_permute(perm, k - 1, f);
        if k % 2 == 0 {
            perm.swap(i, k - 1);
        } else {
            perm.swap(0, k - 1);
        }
    }
}
