//! Simple graphs and the collection/graph dictionary.
//!
//! Exact solvers are branch and bound over bitsets and are meant for small
//! graphs: independence number and Ω(G) up to 32 vertices, the matching-based
//! KE test through hke subcollections of Ω(G) up to 16.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iso::are_isomorphic;
use crate::maximal::{pow2, typical_collection};
use crate::sets::{
    label_cmp, tokens, ElementSet, ElementTable, SetFamily, SubcollectionSelector, ENUMERATION_CAP,
};
use crate::verify::{can_add_unchecked, check_hke_definition, check_ke, is_hke};

/// Vertex limit for the exact solvers.
pub const VERTEX_CAP: usize = 32;
/// Vertex limit for the operations that enumerate subcollections of Ω(G).
pub const THEOREM_VERTEX_CAP: usize = 16;

/// A simple undirected graph over labeled vertices.
#[derive(Clone, Debug)]
pub struct Graph {
    table: ElementTable,
    adj: Vec<ElementSet>,
}

impl Graph {
    /// Edgeless graph on `labels`.
    pub fn with_vertices<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let table = ElementTable::from_labels(labels)?;
        let adj = vec![ElementSet::EMPTY; table.len()];
        Ok(Graph { table, adj })
    }

    /// Graph on `labels` with the given index edges.
    pub fn from_edges<I, S>(labels: I, edges: &[(usize, usize)]) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut g = Self::with_vertices(labels)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds edge uv; rejects loops, repeats and unknown vertices.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.len();
        if u >= n || v >= n {
            return Err(Error::IndexOutOfRange {
                index: u.max(v),
                len: n,
            });
        }
        if u == v {
            return Err(Error::SelfLoop {
                label: self.table.label(u).to_owned(),
                line: 0,
            });
        }
        if self.adj[u].contains(v) {
            return Err(Error::DuplicateEdge {
                u: self.table.label(u).to_owned(),
                v: self.table.label(v).to_owned(),
                line: 0,
            });
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn table(&self) -> &ElementTable {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn vertices(&self) -> ElementSet {
        self.table.full_set()
    }

    pub fn neighbours(&self, v: usize) -> ElementSet {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// Edges as index pairs, endpoints and pairs in canonical label order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let order = self.table.sorted_indices(self.vertices());
        let mut rank = vec![0; self.len()];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        let mut out = Vec::with_capacity(self.edge_count());
        for &u in &order {
            for v in self.table.sorted_indices(self.adj[u]) {
                if rank[u] < rank[v] {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_labels(&self) -> Vec<[String; 2]> {
        self.edges()
            .into_iter()
            .map(|(u, v)| {
                [
                    self.table.label(u).to_owned(),
                    self.table.label(v).to_owned(),
                ]
            })
            .collect()
    }

    /// Whether `set` has no edge inside it.
    pub fn is_independent(&self, set: ElementSet) -> bool {
        set.iter().all(|v| self.adj[v].is_disjoint(set))
    }

    fn require_at_most(&self, limit: usize) -> Result<()> {
        if self.len() > limit {
            return Err(Error::TooLarge {
                what: "graph",
                size: self.len(),
                limit,
            });
        }
        Ok(())
    }

    pub fn parse(text: &[u8]) -> Result<Self> {
        parse_graph(text)
    }

    pub fn render(&self) -> String {
        render_graph(self)
    }
}

/// Equality by labels: same vertex labels and same labeled edges.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        let verts = |g: &Graph| g.table.labels().iter().cloned().collect::<BTreeSet<_>>();
        let edges = |g: &Graph| {
            g.edges()
                .into_iter()
                .map(|(u, v)| {
                    let (a, b) = (g.table.label(u).to_owned(), g.table.label(v).to_owned());
                    if a <= b {
                        (a, b)
                    } else {
                        (b, a)
                    }
                })
                .collect::<BTreeSet<_>>()
        };
        verts(self) == verts(other) && edges(self) == edges(other)
    }
}

impl Eq for Graph {}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_graph(self))
    }
}

/// Reads the edge-list format: `v <labels>` declares vertices, `e <u> <v>`
/// adds an edge, `#` starts a comment.
pub fn parse_graph(text: &[u8]) -> Result<Graph> {
    let text = std::str::from_utf8(text).map_err(|e| Error::Parse {
        line: text[..e.valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count()
            + 1,
        column: 1,
        message: "invalid UTF-8".into(),
    })?;
    let mut table = ElementTable::new();
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let lineno = n + 1;
        let toks = tokens(line);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        match head {
            "v" => {
                for &(_, l) in &toks[1..] {
                    table.intern(l)?;
                }
            }
            "e" => {
                if toks.len() != 3 {
                    return Err(Error::Parse {
                        line: lineno,
                        column: toks.get(3).map_or(col, |t| t.0),
                        message: "an edge line needs exactly two vertices".into(),
                    });
                }
                let (u, v) = (toks[1].1, toks[2].1);
                if u == v {
                    return Err(Error::SelfLoop {
                        label: u.to_owned(),
                        line: lineno,
                    });
                }
                let (ui, vi) = (table.intern(u)?, table.intern(v)?);
                edges.push((ui, vi, lineno));
            }
            other => {
                return Err(Error::Parse {
                    line: lineno,
                    column: col,
                    message: format!("unknown directive `{other}`"),
                })
            }
        }
    }
    let mut g = Graph {
        adj: vec![ElementSet::EMPTY; table.len()],
        table,
    };
    for (u, v, line) in edges {
        if g.adj[u].contains(v) {
            return Err(Error::DuplicateEdge {
                u: g.table.label(u).to_owned(),
                v: g.table.label(v).to_owned(),
                line,
            });
        }
        g.adj[u].insert(v);
        g.adj[v].insert(u);
    }
    Ok(g)
}

/// Canonical text: one `v` line with every vertex, then one `e` line per edge.
pub fn render_graph(g: &Graph) -> String {
    let mut out = String::from("v");
    for l in g.table.sorted_labels(g.vertices()) {
        out.push(' ');
        out.push_str(&l);
    }
    out.push('\n');
    for [u, v] in g.edge_labels() {
        out.push_str(&format!("e {u} {v}\n"));
    }
    out
}

/// G(F): vertices ⋃F, and uv an edge exactly when no member holds both.
pub fn graph_of(family: &SetFamily) -> Result<Graph> {
    family.alpha_of()?;
    let ft = family.table();
    let verts = ft.sorted_indices(family.union_all());
    let mut g = Graph::with_vertices(verts.iter().map(|&x| ft.label(x)))?;
    for (i, &x) in verts.iter().enumerate() {
        for (j, &y) in verts.iter().enumerate().skip(i + 1) {
            if !family
                .members()
                .iter()
                .any(|s| s.contains(x) && s.contains(y))
            {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

/// Compares two vertex sets by their canonically sorted label sequences.
fn canonical_cmp(rank: &[usize], a: ElementSet, b: ElementSet) -> Ordering {
    let key = |s: ElementSet| {
        let mut k: Vec<usize> = s.iter().map(|v| rank[v]).collect();
        k.sort_unstable();
        k
    };
    key(a).cmp(&key(b))
}

fn canonical_rank(table: &ElementTable) -> Vec<usize> {
    let mut rank = vec![0; table.len()];
    for (r, v) in table
        .sorted_indices(table.full_set())
        .into_iter()
        .enumerate()
    {
        rank[v] = r;
    }
    rank
}

struct MisSearch<'a> {
    adj: &'a [ElementSet],
    best: usize,
    found: Vec<ElementSet>,
}

impl MisSearch<'_> {
    fn run(&mut self, mut r: ElementSet, mut p: ElementSet) {
        // a candidate with no neighbour among the candidates is in every optimum below
        loop {
            let lone: ElementSet = p.iter().filter(|&v| self.adj[v].is_disjoint(p)).collect();
            if lone.is_empty() {
                break;
            }
            r = r | lone;
            p = p - lone;
        }
        if r.len() + p.len() < self.best {
            return;
        }
        if p.is_empty() {
            if r.len() > self.best {
                self.best = r.len();
                self.found.clear();
            }
            self.found.push(r);
            return;
        }
        let v = p
            .iter()
            .max_by_key(|&v| ((self.adj[v] & p).len(), std::cmp::Reverse(v)))
            .unwrap();
        let mut with = r;
        with.insert(v);
        self.run(with, p - self.adj[v] - ElementSet::singleton(v));
        let mut without = p;
        without.remove(v);
        self.run(r, without);
    }
}

fn maximum_independent_sets_raw(g: &Graph) -> (usize, Vec<ElementSet>) {
    let mut s = MisSearch {
        adj: &g.adj,
        best: 0,
        found: Vec::new(),
    };
    s.run(ElementSet::EMPTY, g.vertices());
    let rank = canonical_rank(&g.table);
    s.found.sort_by(|&a, &b| canonical_cmp(&rank, a, b));
    (s.best, s.found)
}

/// α(G).
pub fn independence_number(g: &Graph) -> Result<usize> {
    g.require_at_most(VERTEX_CAP)?;
    Ok(maximum_independent_sets_raw(g).0)
}

/// Ω(G) in lexicographic order, over the graph's vertex table.
pub fn max_independent_sets(g: &Graph) -> Result<SetFamily> {
    g.require_at_most(VERTEX_CAP)?;
    if g.is_empty() {
        return Err(Error::PreconditionFailed("graph has no vertices".into()));
    }
    SetFamily::from_parts(g.table.clone(), maximum_independent_sets_raw(g).1)
}

/// ⋃Ω(G).
pub fn corona(g: &Graph) -> Result<ElementSet> {
    g.require_at_most(VERTEX_CAP)?;
    Ok(maximum_independent_sets_raw(g)
        .1
        .into_iter()
        .fold(ElementSet::EMPTY, |a, s| a | s))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub edges: Vec<[String; 2]>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    fn from_pairs(g: &Graph, pairs: &[(usize, usize)]) -> Self {
        let mut edges: Vec<[String; 2]> = pairs
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (g.table.label(u), g.table.label(v));
                if label_cmp(a, b).is_le() {
                    [a.to_owned(), b.to_owned()]
                } else {
                    [b.to_owned(), a.to_owned()]
                }
            })
            .collect();
        edges.sort_by(|p, q| label_cmp(&p[0], &q[0]).then_with(|| label_cmp(&p[1], &q[1])));
        Matching { edges }
    }

    /// Whether the pairs are disjoint edges of `g`.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let mut used = ElementSet::EMPTY;
        self.edges
            .iter()
            .all(|[a, b]| match (g.table.get(a), g.table.get(b)) {
                (Some(u), Some(v))
                    if g.has_edge(u, v) && !used.contains(u) && !used.contains(v) =>
                {
                    used.insert(u);
                    used.insert(v);
                    true
                }
                _ => false,
            })
    }
}

/// Greedy maximal matching inside `w`, lowest vertices first.
fn greedy_matching(adj: &[ElementSet], mut w: ElementSet) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    while let Some(u) = w.min_index() {
        w.remove(u);
        if let Some(v) = (adj[u] & w).min_index() {
            w.remove(v);
            out.push((u, v));
        }
    }
    out
}

fn components(adj: &[ElementSet], w: ElementSet) -> Vec<ElementSet> {
    let mut rest = w;
    let mut out = Vec::new();
    while let Some(s) = rest.min_index() {
        let mut comp = ElementSet::singleton(s);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let next = frontier
                .iter()
                .fold(ElementSet::EMPTY, |acc, v| acc | adj[v])
                & w - comp;
            comp = comp | next;
            frontier = next;
        }
        rest = rest - comp;
        out.push(comp);
    }
    out
}

struct MatchingSearch<'a> {
    adj: &'a [ElementSet],
    best: Vec<(usize, usize)>,
    ceiling: usize,
}

impl MatchingSearch<'_> {
    fn bound(&self, w: ElementSet) -> usize {
        components(self.adj, w)
            .into_iter()
            .map(|c| (c.len() / 2).min(2 * greedy_matching(self.adj, c).len()))
            .sum()
    }

    fn run(&mut self, mut w: ElementSet, cur: &mut Vec<(usize, usize)>) {
        if self.best.len() == self.ceiling {
            return;
        }
        w = w
            .iter()
            .filter(|&v| !(self.adj[v] & w).is_empty())
            .collect();
        if cur.len() + self.bound(w) <= self.best.len() {
            return;
        }
        if w.is_empty() {
            self.best = cur.clone();
            return;
        }
        // a vertex of degree one can be matched to its neighbour without loss
        if let Some(u) = w.iter().find(|&v| (self.adj[v] & w).len() == 1) {
            let v = (self.adj[u] & w).min_index().unwrap();
            cur.push((u, v));
            self.run(w - ElementSet::singleton(u) - ElementSet::singleton(v), cur);
            cur.pop();
            return;
        }
        let u = w.iter().min_by_key(|&v| (self.adj[v] & w).len()).unwrap();
        for v in (self.adj[u] & w).iter() {
            cur.push((u, v));
            self.run(w - ElementSet::singleton(u) - ElementSet::singleton(v), cur);
            cur.pop();
        }
        let mut without = w;
        without.remove(u);
        self.run(without, cur);
    }
}

fn maximum_matching_raw(g: &Graph) -> Vec<(usize, usize)> {
    let w: ElementSet = g
        .vertices()
        .iter()
        .filter(|&v| !g.adj[v].is_empty())
        .collect();
    let mut s = MatchingSearch {
        adj: &g.adj,
        best: greedy_matching(&g.adj, w),
        ceiling: w.len() / 2,
    };
    s.run(w, &mut Vec::new());
    s.best
}

/// A maximum matching.
pub fn maximum_matching(g: &Graph) -> Result<Matching> {
    g.require_at_most(VERTEX_CAP)?;
    Ok(Matching::from_pairs(g, &maximum_matching_raw(g)))
}

/// α(G) + μ(G) = |V(G)|.
pub fn is_ke(g: &Graph) -> Result<bool> {
    g.require_at_most(VERTEX_CAP)?;
    Ok(maximum_independent_sets_raw(g).0 + maximum_matching_raw(g).len() == g.len())
}

/// Outcome of the KE test through Ω(G): the first hke Γ ⊆ Ω(G), in
/// increasing mask order, with a matching of V−⋃Γ into ⋂Γ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeTheoremVerdict {
    pub holds: bool,
    /// Positions in Ω(G) as returned by [`max_independent_sets`].
    pub gamma: Option<SubcollectionSelector>,
    pub matching: Option<Matching>,
}

/// Kuhn's augmenting paths from `left` into `right` along graph edges.
fn saturating_matching(
    adj: &[ElementSet],
    left: ElementSet,
    right: ElementSet,
) -> Option<Vec<(usize, usize)>> {
    if left.len() > right.len() {
        return None;
    }
    let mut mate: Vec<Option<usize>> = vec![None; adj.len()];
    fn augment(
        adj: &[ElementSet],
        u: usize,
        right: ElementSet,
        seen: &mut ElementSet,
        mate: &mut [Option<usize>],
    ) -> bool {
        for v in (adj[u] & right).iter() {
            if seen.contains(v) {
                continue;
            }
            seen.insert(v);
            if mate[v].is_none_or(|w| augment(adj, w, right, seen, mate)) {
                mate[v] = Some(u);
                return true;
            }
        }
        false
    }
    for u in left.iter() {
        let mut seen = ElementSet::EMPTY;
        if !augment(adj, u, right, &mut seen, &mut mate) {
            return None;
        }
    }
    Some(
        right
            .iter()
            .filter_map(|v| mate[v].map(|u| (u, v)))
            .collect(),
    )
}

struct TheoremSearch<'a> {
    g: &'a Graph,
    omega: &'a SetFamily,
}

impl TheoremSearch<'_> {
    /// Decides members from the highest position down, excluding first, so
    /// leaves arrive in increasing mask order. `gamma` is hke throughout.
    fn run(
        &self,
        pos: usize,
        mask: u32,
        gamma: Option<SetFamily>,
    ) -> Option<(u32, Vec<(usize, usize)>)> {
        if pos == 0 {
            let gamma = gamma?;
            let (u, i) = (gamma.union_all(), gamma.intersection_all());
            return saturating_matching(&self.g.adj, self.g.vertices() - u, i).map(|m| (mask, m));
        }
        let p = pos - 1;
        if let Some(hit) = self.run(p, mask, gamma.clone()) {
            return Some(hit);
        }
        let s = self.omega.members()[p];
        let next = match gamma {
            None => SetFamily::from_parts(self.omega.table().clone(), vec![s]).ok()?,
            Some(f) => {
                if !can_add_unchecked(&f, 0, s).ok()? {
                    return None;
                }
                f.with_member(s).ok()?.0
            }
        };
        self.run(p, mask | 1 << p, Some(next))
    }
}

/// The KE property through hke subcollections of Ω(G) and matchings.
pub fn is_ke_via_theorem(g: &Graph) -> Result<KeTheoremVerdict> {
    g.require_at_most(THEOREM_VERTEX_CAP)?;
    let fail = KeTheoremVerdict {
        holds: false,
        gamma: None,
        matching: None,
    };
    if g.is_empty() {
        return Ok(KeTheoremVerdict {
            holds: true,
            ..fail
        });
    }
    let omega = max_independent_sets(g)?;
    // an hke Γ has |V−⋃Γ| ≤ |⋂Γ| only if |V| ≤ |⋃Γ|+|⋂Γ| = 2α
    if g.len() > 2 * omega.alpha_of()? {
        return Ok(fail);
    }
    if omega.len() > 32 {
        return Err(Error::TooLarge {
            what: "Ω(G)",
            size: omega.len(),
            limit: 32,
        });
    }
    let search = TheoremSearch { g, omega: &omega };
    Ok(match search.run(omega.len(), 0, None) {
        Some((mask, pairs)) => KeTheoremVerdict {
            holds: true,
            gamma: Some(SubcollectionSelector::from_mask(mask)),
            matching: Some(Matching::from_pairs(g, &pairs)),
        },
        None => fail,
    })
}

/// Both KE tests; a disagreement is reported as a theorem violation.
pub fn is_ke_both(g: &Graph) -> Result<(bool, KeTheoremVerdict)> {
    let direct = is_ke(g)?;
    let via = is_ke_via_theorem(g)?;
    if direct != via.holds {
        return Err(Error::TheoremViolation(format!(
            "direct KE test says {direct}, theorem route says {}",
            via.holds
        )));
    }
    Ok((direct, via))
}

/// Whether Ω(G) is hke: the definition checker up to 24 members, the atom
/// test beyond.
pub fn omega_is_hke(g: &Graph) -> Result<bool> {
    g.require_at_most(THEOREM_VERTEX_CAP)?;
    let omega = max_independent_sets(g)?;
    if omega.len() <= ENUMERATION_CAP {
        Ok(check_hke_definition(&omega)?.holds)
    } else {
        Ok(is_hke(&omega))
    }
}

/// Bron–Kerbosch over non-adjacency; true when some maximal independent
/// set has fewer than `alpha` vertices.
fn small_maximal_exists(
    adj: &[ElementSet],
    all: ElementSet,
    r: usize,
    p: ElementSet,
    x: ElementSet,
    alpha: usize,
) -> bool {
    if p.is_empty() && x.is_empty() {
        return r < alpha;
    }
    let free = |v: usize| all - adj[v] - ElementSet::singleton(v);
    let pivot = (p | x).iter().max_by_key(|&u| (p & free(u)).len()).unwrap();
    let (mut p, mut x) = (p, x);
    for v in (p - free(pivot)).iter() {
        if small_maximal_exists(adj, all, r + 1, p & free(v), x & free(v), alpha) {
            return true;
        }
        p.remove(v);
        x.insert(v);
    }
    false
}

/// Every maximal independent set is maximum.
pub fn is_well_covered(g: &Graph) -> Result<bool> {
    g.require_at_most(VERTEX_CAP)?;
    let alpha = maximum_independent_sets_raw(g).0;
    let all = g.vertices();
    Ok(!small_maximal_exists(
        &g.adj,
        all,
        0,
        all,
        ElementSet::EMPTY,
        alpha,
    ))
}

/// G(Ω(G)) = G, for a well-covered G with V(G) = corona(G).
pub fn wellcovered_roundtrip(g: &Graph) -> Result<bool> {
    if !is_well_covered(g)? {
        return Err(Error::PreconditionFailed(
            "graph is not well-covered".into(),
        ));
    }
    if corona(g)? != g.vertices() || g.is_empty() {
        return Err(Error::PreconditionFailed(
            "some vertex lies in no maximum independent set".into(),
        ));
    }
    Ok(graph_of(&max_independent_sets(g)?)? == *g)
}

/// The perfect matching on [2α] with edges {i, i+α}.
pub fn typical_ke_graph(alpha: usize) -> Result<Graph> {
    if !(1..=16).contains(&alpha) {
        return Err(Error::AlphaOutOfRange {
            alpha,
            min: 1,
            max: 16,
        });
    }
    let edges: Vec<(usize, usize)> = (0..alpha).map(|i| (i, i + alpha)).collect();
    Graph::from_edges((1..=2 * alpha).map(|i| i.to_string()), &edges)
}

/// For V(G) = corona(G): G is a perfect matching graph exactly when Ω(G) is
/// a maximal hke collection. Both sides are computed and compared.
pub fn bipartite_check_and_theorem(g: &Graph) -> Result<bool> {
    g.require_at_most(THEOREM_VERTEX_CAP)?;
    if g.is_empty() || corona(g)? != g.vertices() {
        return Err(Error::PreconditionFailed(
            "theorem needs V(G) = corona(G)".into(),
        ));
    }
    let alpha = independence_number(g)?;
    let graph_side = g.vertices().iter().all(|v| g.degree(v) == 1) && g.len() == 2 * alpha;
    let omega = max_independent_sets(g)?;
    let family_side = omega.len() as u128 == pow2(alpha) && is_hke(&omega);
    if graph_side != family_side {
        return Err(Error::TheoremViolation(format!(
            "perfect matching graph: {graph_side}, Ω(G) maximal hke: {family_side}"
        )));
    }
    Ok(graph_side)
}

/// Injective placement of ⋃F into the slots (class, side) of typical(α)
/// such that no member meets a class twice.
fn embed_into_typical(family: &SetFamily, alpha: usize) -> Option<Vec<(usize, usize)>> {
    let xs = family.table().sorted_indices(family.union_all());
    if xs.len() > 2 * alpha {
        return None;
    }
    let members = family.members();
    fn go(
        k: usize,
        xs: &[usize],
        members: &[ElementSet],
        alpha: usize,
        slots: &mut Vec<(usize, usize)>,
        class_members: &mut Vec<Vec<ElementSet>>,
        opened: usize,
    ) -> bool {
        if k == xs.len() {
            return true;
        }
        let x = xs[k];
        let holders: Vec<ElementSet> = members.iter().copied().filter(|s| s.contains(x)).collect();
        // join an open class on its free side, or open the next class on side 0
        let mut options: Vec<(usize, usize)> = (0..opened)
            .filter(|&c| slots.iter().filter(|s| s.0 == c).count() == 1)
            .map(|c| (c, 1))
            .collect();
        if opened < alpha {
            options.push((opened, 0));
        }
        for (c, side) in options {
            let clash = class_members[c]
                .iter()
                .any(|other| holders.iter().any(|h| h == other));
            if clash {
                continue;
            }
            slots.push((c, side));
            let before = class_members[c].len();
            class_members[c].extend(holders.iter().copied());
            let next_open = if side == 0 { opened + 1 } else { opened };
            if go(k + 1, xs, members, alpha, slots, class_members, next_open) {
                return true;
            }
            class_members[c].truncate(before);
            slots.pop();
        }
        false
    }
    let mut slots = Vec::new();
    let mut class_members = vec![Vec::new(); alpha];
    go(0, &xs, members, alpha, &mut slots, &mut class_members, 0).then(|| {
        xs.iter()
            .copied()
            .zip(slots)
            .map(|(x, (c, s))| (x, c + s * alpha))
            .collect()
    })
}

/// The typical KE graph carried onto ⋃F by an embedding, with fresh
/// vertices for unused slots.
fn embedded_ke_graph(
    family: &SetFamily,
    alpha: usize,
    placement: &[(usize, usize)],
) -> Result<Graph> {
    let mut slot_label: Vec<Option<String>> = vec![None; 2 * alpha];
    for &(x, slot) in placement {
        slot_label[slot] = Some(family.table().label(x).to_owned());
    }
    let mut fresh = family
        .table()
        .fresh_integer_labels(slot_label.iter().filter(|l| l.is_none()).count())
        .into_iter();
    let labels: Vec<String> = slot_label
        .into_iter()
        .map(|l| l.unwrap_or_else(|| fresh.next().unwrap()))
        .collect();
    let edges: Vec<(usize, usize)> = (0..alpha).map(|i| (i, i + alpha)).collect();
    Graph::from_edges(labels, &edges)
}

/// F ⊆ Ω(G), matching members to vertex sets by label.
fn included_in_omega(family: &SetFamily, g: &Graph) -> Result<bool> {
    let omega = max_independent_sets(g)?;
    let sets: BTreeSet<BTreeSet<String>> = omega.label_sets().into_iter().collect();
    Ok(family.label_sets().iter().all(|s| sets.contains(s)))
}

/// The four equivalent conditions on F: hke; isomorphic to a subcollection
/// of typical(α); contained in Ω(G) for a KE graph G; contained in Ω(G) for
/// a graph G with |⋃F|+|⋂F| = 2α. Conditions 3 and 4 are decided on the
/// candidate graphs (the embedded typical KE graph and G(F)).
pub fn old_ke_equivalence(family: &SetFamily) -> Result<bool> {
    let alpha = family.alpha_of()?;
    if alpha > 4 {
        return Err(Error::TooLarge {
            what: "alpha",
            size: alpha,
            limit: 4,
        });
    }
    let n = family.union_all().len();
    if n > 12 {
        return Err(Error::TooLarge {
            what: "universe",
            size: n,
            limit: 12,
        });
    }
    let c1 = check_hke_definition(family)?.holds;
    let placement = embed_into_typical(family, alpha);
    let c2 = placement.is_some();
    if let Some(p) = &placement {
        // confirm the embedding against typical(α) independently
        let t = typical_collection(alpha)?;
        let sub: Vec<ElementSet> = family
            .members()
            .iter()
            .map(|s| {
                s.iter()
                    .map(|x| p.iter().find(|q| q.0 == x).unwrap().1)
                    .collect()
            })
            .collect();
        let image = SetFamily::from_parts(t.table().clone(), sub)?;
        let rel = image.relabel(|l| format!("t{l}"))?;
        let ok = image.members().iter().all(|s| t.contains_set(*s))
            && are_isomorphic(family, &rel).is_some();
        if !ok {
            return Err(Error::TheoremViolation(
                "embedding is not into typical(α)".into(),
            ));
        }
    }
    let mut candidates = Vec::new();
    if let Some(p) = &placement {
        candidates.push(embedded_ke_graph(family, alpha, p)?);
    }
    candidates.push(graph_of(family)?);
    let mut c3 = false;
    let mut c4 = false;
    let ke_equality = check_ke(family)?.holds;
    for g in &candidates {
        if included_in_omega(family, g)? {
            c3 |= is_ke(g)?;
            c4 |= ke_equality;
        }
    }
    if !(c1 == c2 && c2 == c3 && c3 == c4) {
        return Err(Error::TheoremViolation(format!(
            "conditions disagree: hke {c1}, embeds {c2}, in Ω of KE graph {c3}, old KE {c4}"
        )));
    }
    Ok(c1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::parse_family;

    fn fam(text: &str) -> SetFamily {
        parse_family(text.as_bytes()).unwrap()
    }

    fn graph(text: &str) -> Graph {
        parse_graph(text.as_bytes()).unwrap()
    }

    const WORKED: &str = "1 3 5\n1 4 6\n2 3 5\n2 4 5\n2 4 6\n";

    fn worked_example_graph() -> Graph {
        graph_of(&fam(WORKED)).unwrap()
    }

    fn triangle() -> Graph {
        graph("e 1 2\ne 2 3\ne 1 3\n")
    }

    fn path3() -> Graph {
        graph("e 1 2\ne 2 3\n")
    }

    #[test]
    fn parse_and_render() {
        let g = graph("v 1 2 3\ne 1 2\n");
        assert_eq!(g.len(), 3);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degree(2), 0);
        assert_eq!(g.render(), "v 1 2 3\ne 1 2\n");
        assert_eq!(graph(&g.render()), g);
        assert_eq!(
            parse_graph(b"e 1 1\n").unwrap_err(),
            Error::SelfLoop {
                label: "1".into(),
                line: 1
            }
        );
        assert!(matches!(
            parse_graph(b"e 1 2\n# again\ne 2 1\n"),
            Err(Error::DuplicateEdge { line: 3, .. })
        ));
        assert!(matches!(
            parse_graph(b"x 1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(parse_graph(b"e 1\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn graph_of_examples() {
        let g = worked_example_graph();
        assert_eq!(
            g.edge_labels(),
            [["1", "2"], ["3", "4"], ["3", "6"], ["5", "6"]]
                .map(|[a, b]| [a.to_owned(), b.to_owned()])
        );
        assert_eq!(graph_of(&fam("1 2\n1 3\n2 3\n")).unwrap().edge_count(), 0);
        let single = graph_of(&fam("4 5 6\n")).unwrap();
        assert_eq!((single.len(), single.edge_count()), (3, 0));
        assert!(matches!(
            graph_of(&fam("1\n1 2\n")),
            Err(Error::NotRelevant { .. })
        ));
    }

    #[test]
    fn omega_examples() {
        let omega = max_independent_sets(&worked_example_graph()).unwrap();
        assert_eq!(omega.render(), "1 3 5\n1 4 5\n1 4 6\n2 3 5\n2 4 5\n2 4 6\n");
        assert_eq!(
            independence_number(&graph_of(&fam("1 2\n1 3\n2 3\n")).unwrap()).unwrap(),
            3
        );
        let ten = fam("0 1 2 3 4 8\n0 3 4 5 6 7\n0 1 2 5 6 9\n");
        assert_eq!(ten.alpha_of().unwrap(), 6);
        assert_eq!(independence_number(&graph_of(&ten).unwrap()).unwrap(), 7);
    }

    #[test]
    fn corona_examples() {
        assert_eq!(corona(&worked_example_graph()).unwrap().len(), 6);
        assert_eq!(corona(&triangle()).unwrap().len(), 3);
        let star = graph("e c 1\ne c 2\ne c 3\n");
        let c = corona(&star).unwrap();
        assert_eq!(star.table().sorted_labels(c), vec!["1", "2", "3"]);
    }

    #[test]
    fn matching_examples() {
        assert_eq!(maximum_matching(&path3()).unwrap().size(), 1);
        assert_eq!(maximum_matching(&triangle()).unwrap().size(), 1);
        let t = typical_ke_graph(4).unwrap();
        let m = maximum_matching(&t).unwrap();
        assert_eq!(m.size(), 4);
        assert!(m.is_valid_for(&t));
        // Petersen graph has a perfect matching
        let petersen = Graph::from_edges(
            (0..10).map(|i| i.to_string()),
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 0),
                (0, 5),
                (1, 6),
                (2, 7),
                (3, 8),
                (4, 9),
                (5, 7),
                (7, 9),
                (9, 6),
                (6, 8),
                (8, 5),
            ],
        )
        .unwrap();
        assert_eq!(maximum_matching(&petersen).unwrap().size(), 5);
    }

    #[test]
    fn ke_examples() {
        assert!(is_ke(&typical_ke_graph(3).unwrap()).unwrap());
        assert!(!is_ke(&triangle()).unwrap());
        assert!(is_ke(&worked_example_graph()).unwrap());
        let v = is_ke_via_theorem(&typical_ke_graph(3).unwrap()).unwrap();
        assert!(v.holds);
        assert_eq!(v.gamma.unwrap().indices(), vec![0]);
        assert_eq!(v.matching.unwrap().size(), 3);
        assert!(!is_ke_via_theorem(&triangle()).unwrap().holds);
        assert!(is_ke_both(&worked_example_graph()).unwrap().0);
    }

    #[test]
    fn omega_hke_examples() {
        assert!(omega_is_hke(&worked_example_graph()).unwrap());
        assert!(!omega_is_hke(&triangle()).unwrap());
        assert!(omega_is_hke(&graph("e 1 2\n")).unwrap());
    }

    #[test]
    fn well_covered_examples() {
        assert!(is_well_covered(&graph("e 1 2\n")).unwrap());
        assert!(!is_well_covered(&path3()).unwrap());
        assert!(is_well_covered(&typical_ke_graph(3).unwrap()).unwrap());
        assert!(wellcovered_roundtrip(&typical_ke_graph(3).unwrap()).unwrap());
        assert!(matches!(
            wellcovered_roundtrip(&path3()),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn worked_example_roundtrip() {
        // K2 plus P4: well-covered with every vertex in some maximum set
        let g = worked_example_graph();
        assert!(is_well_covered(&g).unwrap());
        assert!(wellcovered_roundtrip(&g).unwrap());
    }

    #[test]
    fn typical_graph_examples() {
        assert_eq!(typical_ke_graph(1).unwrap().render(), "v 1 2\ne 1 2\n");
        assert_eq!(
            typical_ke_graph(3).unwrap().render(),
            "v 1 2 3 4 5 6\ne 1 4\ne 2 5\ne 3 6\n"
        );
        for a in 1..=4 {
            let omega = max_independent_sets(&typical_ke_graph(a).unwrap()).unwrap();
            assert_eq!(omega, typical_collection(a).unwrap());
        }
        assert!(matches!(
            typical_ke_graph(0),
            Err(Error::AlphaOutOfRange { .. })
        ));
        assert!(matches!(
            typical_ke_graph(17),
            Err(Error::AlphaOutOfRange { .. })
        ));
    }

    #[test]
    fn bipartite_examples() {
        assert!(bipartite_check_and_theorem(&typical_ke_graph(2).unwrap()).unwrap());
        assert!(!bipartite_check_and_theorem(&worked_example_graph()).unwrap());
        let c4 = graph("e 1 2\ne 2 3\ne 3 4\ne 4 1\n");
        assert!(!bipartite_check_and_theorem(&c4).unwrap());
        assert!(matches!(
            bipartite_check_and_theorem(&graph("e c 1\ne c 2\n")),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn old_ke_examples() {
        assert!(old_ke_equivalence(&fam(WORKED)).unwrap());
        assert!(!old_ke_equivalence(&fam("1 2\n1 3\n2 3\n1 4\n")).unwrap());
        assert!(old_ke_equivalence(&fam("1 2\n")).unwrap());
        assert!(matches!(
            old_ke_equivalence(&fam("1 2 3 4 5\n")),
            Err(Error::TooLarge { what: "alpha", .. })
        ));
    }
}
