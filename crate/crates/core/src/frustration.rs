//! Frustrated cycles of a fractional LP optimum.
//!
//! Each clique's belief table is projected onto every pair of its members.
//! A pair whose support forbids some joint values yields implications
//! between literals, where literal `2i` stands for `x_i = 0` (written `i+`)
//! and `2i + 1` for `x_i = 1` (written `i-`). A variable whose two literals
//! imply each other is frustrated; if only one direction holds it is
//! quasi-frustrated and the implication forces its value.

use std::collections::VecDeque;
use std::fmt;

use crate::decoder::{BeliefSolution, CliqueTable};
use crate::error::{Error, Result};

#[inline]
pub fn literal(var: usize, value: u8) -> usize {
    2 * var + value as usize
}

#[inline]
pub fn literal_var(lit: usize) -> usize {
    lit / 2
}

#[inline]
pub fn literal_value(lit: usize) -> u8 {
    (lit & 1) as u8
}

#[inline]
pub fn negate(lit: usize) -> usize {
    lit ^ 1
}

pub fn format_literal(lit: usize) -> String {
    format!("{}{}", literal_var(lit), if lit & 1 == 0 { '+' } else { '-' })
}

/// Subset of `{00, 01, 10, 11}`; bit `2·x_i + x_j` is set when `(x_i, x_j)`
/// carries mass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Support(pub u8);

impl Support {
    pub fn from_mass(mass: &[f64; 4], eps: f64) -> Self {
        let mut bits = 0;
        for (k, &v) in mass.iter().enumerate() {
            if v > eps {
                bits |= 1 << k;
            }
        }
        Support(bits)
    }

    pub fn contains(&self, xi: u8, xj: u8) -> bool {
        (self.0 >> (2 * xi + xj)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    /// Implications `(from, to)` as (variable side, value) pairs, `false`
    /// meaning the `i` side. Only the six restrictive supports whose two
    /// marginals are both non-degenerate produce any.
    pub fn implications(&self) -> &'static [((bool, u8), (bool, u8))] {
        const I: bool = false;
        const J: bool = true;
        match self.0 {
            // {01, 10}: x_i ≠ x_j
            0b0110 => &[((I, 0), (J, 1)), ((I, 1), (J, 0)), ((J, 0), (I, 1)), ((J, 1), (I, 0))],
            // {01, 10, 11}: not both zero
            0b1110 => &[((I, 0), (J, 1)), ((J, 0), (I, 1))],
            // {00, 01, 10}: not both one
            0b0111 => &[((I, 1), (J, 0)), ((J, 1), (I, 0))],
            // {00, 11}: x_i = x_j
            0b1001 => &[((I, 0), (J, 0)), ((I, 1), (J, 1)), ((J, 0), (I, 0)), ((J, 1), (I, 1))],
            // {00, 10, 11}: x_i = 0 ⇒ x_j = 0
            0b1101 => &[((I, 0), (J, 0)), ((J, 1), (I, 1))],
            // {00, 01, 11}: x_i = 1 ⇒ x_j = 1
            0b1011 => &[((I, 1), (J, 1)), ((J, 0), (I, 0))],
            _ => &[],
        }
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = ["00", "01", "10", "11"]
            .iter()
            .enumerate()
            .filter(|(k, _)| (self.0 >> k) & 1 == 1)
            .map(|(_, s)| *s)
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairwiseSupport {
    pub i: usize,
    pub j: usize,
    pub support: Support,
    /// Index of the source clique in the belief solution.
    pub source: usize,
}

/// Support of clique `clique`'s belief projected onto `(x_i, x_j)`.
pub fn project_pairwise(b: &BeliefSolution, clique: usize, i: usize, j: usize, eps: f64) -> Result<PairwiseSupport> {
    let table = b
        .cliques
        .get(clique)
        .ok_or_else(|| Error::Membership(format!("no clique {clique}")))?;
    project_table(table, i, j, eps).map(|support| PairwiseSupport { i, j, support, source: clique })
}

fn project_table(table: &CliqueTable, i: usize, j: usize, eps: f64) -> Result<Support> {
    if i == j {
        return Err(Error::Membership(format!("pair ({i}, {j}) is not two variables")));
    }
    let mass = table
        .pair_marginal(i, j)
        .ok_or_else(|| Error::Membership(format!("({i}, {j}) not both in clique {}", table.id)))?;
    Ok(Support::from_mass(&mass, eps))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ImplicationEdge {
    pub from: usize,
    pub to: usize,
    pub source: usize,
}

/// Directed graph on the `2n` literals. Parallel edges from different
/// source cliques are kept.
#[derive(Clone, Debug)]
pub struct ImplicationGraph {
    n: usize,
    edges: Vec<ImplicationEdge>,
    /// Per literal, `(to, source)` sorted ascending.
    out: Vec<Vec<(usize, usize)>>,
    /// Per literal, predecessors sorted ascending.
    inc: Vec<Vec<usize>>,
}

impl ImplicationGraph {
    pub fn from_edges(n: usize, mut edges: Vec<ImplicationEdge>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let mut out = vec![Vec::new(); 2 * n];
        let mut inc = vec![Vec::new(); 2 * n];
        for e in &edges {
            out[e.from].push((e.to, e.source));
            inc[e.to].push(e.from);
        }
        for l in &mut inc {
            l.sort_unstable();
            l.dedup();
        }
        Self { n, edges, out, inc }
    }

    pub fn num_nodes(&self) -> usize {
        2 * self.n
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[ImplicationEdge] {
        &self.edges
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.out[from].iter().any(|&(t, _)| t == to)
    }

    pub fn out_edges(&self, lit: usize) -> &[(usize, usize)] {
        &self.out[lit]
    }

    /// True if neither literal of `var` touches an edge.
    pub fn is_isolated(&self, var: usize) -> bool {
        [literal(var, 0), literal(var, 1)]
            .iter()
            .all(|&l| self.out[l].is_empty() && self.inc[l].is_empty())
    }

    /// One line per edge: `from to source-clique`.
    pub fn export(&self, b: &BeliefSolution) -> String {
        let mut s = String::new();
        for e in &self.edges {
            s.push_str(&format!(
                "{} {} {}\n",
                format_literal(e.from),
                format_literal(e.to),
                b.cliques[e.source].id
            ));
        }
        s
    }

    /// Hop distance from every literal to `target`, `usize::MAX` if none.
    fn distances_to(&self, target: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; 2 * self.n];
        let mut queue = VecDeque::new();
        dist[target] = 0;
        queue.push_back(target);
        while let Some(u) = queue.pop_front() {
            for &p in &self.inc[u] {
                if dist[p] == usize::MAX {
                    dist[p] = dist[u] + 1;
                    queue.push_back(p);
                }
            }
        }
        dist
    }

    /// Lexicographically least shortest path `from → target`, with the
    /// least source clique on each hop.
    fn shortest_path(&self, from: usize, dist: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut path = vec![from];
        let mut sources = Vec::new();
        let mut cur = from;
        while dist[cur] > 0 {
            let &(next, src) = self.out[cur]
                .iter()
                .find(|&&(t, _)| dist[t] != usize::MAX && dist[t] + 1 == dist[cur])
                .expect("bfs distances are consistent");
            path.push(next);
            sources.push(src);
            cur = next;
        }
        (path, sources)
    }
}

/// Implication graph of every clique's pairwise projections.
pub fn build_implication_graph(b: &BeliefSolution, eps: f64) -> ImplicationGraph {
    let mut edges = Vec::new();
    for (k, table) in b.cliques.iter().enumerate() {
        let members = table.id.members();
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                let support = project_table(table, i, j, eps).expect("members of the clique");
                for &((fs, fv), (ts, tv)) in support.implications() {
                    let side = |s: bool| if s { j } else { i };
                    edges.push(ImplicationEdge {
                        from: literal(side(fs), fv),
                        to: literal(side(ts), tv),
                        source: k,
                    });
                }
            }
        }
    }
    ImplicationGraph::from_edges(b.n(), edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleKind {
    True,
    Quasi,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrustratedCycle {
    pub kind: CycleKind,
    pub pivot: usize,
    /// Closed for a true cycle; from one literal of the pivot to the other
    /// for a quasi cycle.
    pub literal_path: Vec<usize>,
    /// Source clique of each hop of `literal_path`.
    pub literal_sources: Vec<usize>,
    /// Distinct variables in cycle order; empty until projected.
    pub variable_cycle: Vec<usize>,
    /// Source clique of the edge `variable_cycle[t] → variable_cycle[t+1]`,
    /// wrapping around.
    pub edge_sources: Vec<usize>,
}

impl FrustratedCycle {
    /// Number of implication hops.
    pub fn score(&self) -> usize {
        self.literal_sources.len()
    }

    /// For a quasi cycle, the value the implication forces on the pivot.
    pub fn forced_value(&self) -> Option<u8> {
        match self.kind {
            CycleKind::Quasi => self.literal_path.last().map(|&l| literal_value(l)),
            CycleKind::True => None,
        }
    }
}

/// Shortest frustrated or quasi-frustrated witness, by hop count, then
/// pivot index.
pub fn find_frustrated_cycle(g: &ImplicationGraph) -> Option<FrustratedCycle> {
    let mut best: Option<FrustratedCycle> = None;
    for i in 0..g.n {
        if g.is_isolated(i) {
            continue;
        }
        let (plus, minus) = (literal(i, 0), literal(i, 1));
        if g.out[plus].is_empty() && g.out[minus].is_empty() {
            continue;
        }
        let to_minus = g.distances_to(minus);
        let to_plus = g.distances_to(plus);
        let fwd = to_minus[plus];
        let back = to_plus[minus];
        let score = match (fwd != usize::MAX, back != usize::MAX) {
            (true, true) => fwd + back,
            (true, false) => fwd,
            (false, true) => back,
            (false, false) => continue,
        };
        if best.as_ref().is_some_and(|b| b.score() <= score) {
            continue;
        }
        let fc = if fwd != usize::MAX && back != usize::MAX {
            let (mut path, mut sources) = g.shortest_path(plus, &to_minus);
            let (p2, s2) = g.shortest_path(minus, &to_plus);
            path.extend_from_slice(&p2[1..]);
            sources.extend(s2);
            FrustratedCycle {
                kind: CycleKind::True,
                pivot: i,
                literal_path: path,
                literal_sources: sources,
                variable_cycle: Vec::new(),
                edge_sources: Vec::new(),
            }
        } else {
            let (path, sources) = if fwd != usize::MAX {
                g.shortest_path(plus, &to_minus)
            } else {
                g.shortest_path(minus, &to_plus)
            };
            FrustratedCycle {
                kind: CycleKind::Quasi,
                pivot: i,
                literal_path: path,
                literal_sources: sources,
                variable_cycle: Vec::new(),
                edge_sources: Vec::new(),
            }
        };
        best = Some(fc);
    }
    best
}

/// Fills `variable_cycle` and `edge_sources` from the literal walk.
///
/// The walk is closed in variable space. If it revisits a variable, the
/// shortest enclosed simple cycle through the pivot is kept, or the
/// shortest enclosed one at all if none passes through it.
pub fn project_to_variables(mut fc: FrustratedCycle) -> Result<FrustratedCycle> {
    if fc.literal_path.len() != fc.literal_sources.len() + 1 || fc.literal_path.len() < 2 {
        return Err(Error::Projection("literal path and sources disagree".into()));
    }
    let first = literal_var(fc.literal_path[0]);
    let last = literal_var(*fc.literal_path.last().unwrap());
    if first != last {
        return Err(Error::Projection("walk does not return to its start".into()));
    }
    // closed walk as vertices v[t] with edge t from v[t] to v[t+1 mod len]
    let mut v = Vec::new();
    let mut s = Vec::new();
    for (t, &src) in fc.literal_sources.iter().enumerate() {
        let a = literal_var(fc.literal_path[t]);
        let b = literal_var(fc.literal_path[t + 1]);
        if a != b {
            v.push(a);
            s.push(src);
        }
    }
    let len = v.len();
    if len < 2 {
        return Err(Error::Projection("fewer than two distinct variables".into()));
    }
    let mut best: Option<(bool, usize, usize)> = None; // (misses pivot, length, start)
    for a in 0..len {
        let mut seen = std::collections::HashSet::new();
        seen.insert(v[a]);
        for k in 1..=len {
            let x = v[(a + k) % len];
            if x == v[a] {
                let has_pivot = (0..k).any(|t| v[(a + t) % len] == fc.pivot);
                let key = (!has_pivot, k, a);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
                break;
            }
            if !seen.insert(x) {
                break;
            }
        }
    }
    let (_, k, a) = best.ok_or_else(|| Error::Projection("no enclosed simple cycle".into()))?;
    if k < 2 {
        return Err(Error::Projection("fewer than two distinct variables".into()));
    }
    fc.variable_cycle = (0..k).map(|t| v[(a + t) % len]).collect();
    fc.edge_sources = (0..k).map(|t| s[(a + t) % len]).collect();
    Ok(fc)
}
