//! Tightening the relaxation along a frustrated cycle.
//!
//! A cycle `v_0 … v_{k-1}` is chordalized by a fan of triangles
//! `(v_0, v_{s+1}, v_{s+2})`. Each triangle gets a full table of 8 beliefs,
//! tied to its neighbours through the shared chord, to the clique that
//! produced each cycle edge, and to the variable beliefs. A 2-cycle instead
//! gets a pair clique tied to both of its source cliques.

use std::ops::Range;

use crate::decoder::{BeliefLayout, CliqueEntry, CliqueId, CliqueKind, ConfigMask, DecodingProgram};
use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpStatus, SparseRow, Tolerances, VarSpec};

/// One cycle edge `(u, v)`, the clique whose projection produced it and
/// the plan triangle that covers it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeBinding {
    pub u: usize,
    pub v: usize,
    pub source: usize,
    pub triangle: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangulationPlan {
    /// The cycle rotated so the anchor comes first.
    pub cycle: Vec<usize>,
    /// Fan triangles `(v_0, v_{s+1}, v_{s+2})` in cycle order.
    pub triangles: Vec<[usize; 3]>,
    pub edge_bindings: Vec<EdgeBinding>,
}

impl TriangulationPlan {
    /// Chords `(v_0, v_{s+2})` shared by triangles `s` and `s + 1`.
    pub fn chords(&self) -> impl Iterator<Item = (usize, [usize; 2])> + '_ {
        (0..self.triangles.len().saturating_sub(1)).map(|s| (s, [self.cycle[0], self.cycle[s + 2]]))
    }
}

/// Fans `cycle` from `anchor` (or its least vertex when the anchor is not
/// on it). `edge_sources[t]` is the clique behind the edge from `cycle[t]`
/// to the next vertex.
pub fn triangulate(cycle: &[usize], edge_sources: &[usize], anchor: Option<usize>) -> Result<TriangulationPlan> {
    let k = cycle.len();
    if k < 3 {
        return Err(Error::Triangulation(format!("cycle of length {k} has no triangles")));
    }
    if edge_sources.len() != k {
        return Err(Error::Triangulation(format!(
            "{k} cycle edges but {} sources",
            edge_sources.len()
        )));
    }
    let mut sorted = cycle.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Triangulation("cycle revisits a variable".into()));
    }
    let start = anchor
        .and_then(|a| cycle.iter().position(|&v| v == a))
        .unwrap_or_else(|| (0..k).min_by_key(|&t| cycle[t]).unwrap());
    let rot: Vec<usize> = (0..k).map(|t| cycle[(start + t) % k]).collect();
    let src: Vec<usize> = (0..k).map(|t| edge_sources[(start + t) % k]).collect();
    let triangles = (0..k - 2).map(|s| [rot[0], rot[s + 1], rot[s + 2]]).collect();
    let edge_bindings = (0..k)
        .map(|t| EdgeBinding {
            u: rot[t],
            v: rot[(t + 1) % k],
            source: src[t],
            triangle: t.saturating_sub(1).min(k - 3),
        })
        .collect();
    Ok(TriangulationPlan {
        cycle: rot,
        triangles,
        edge_bindings,
    })
}

/// New columns and rows to append to a [`DecodingProgram`].
#[derive(Clone, Debug, Default)]
pub struct Augmentation {
    pub vars: Vec<VarSpec>,
    pub rows: Vec<SparseRow>,
    /// Cliques to register, with columns laid out consecutively after the
    /// program's current last column.
    pub new_cliques: Vec<(CliqueId, Vec<ConfigMask>)>,
    /// Every clique the augmentation constrains, new or already present.
    pub cliques: Vec<CliqueId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentationResult {
    pub new_variable_count: usize,
    pub new_row_count: usize,
    pub rows_skipped: usize,
    pub first_new_var: usize,
    pub new_rows: Range<usize>,
    pub cliques: Vec<CliqueId>,
}

/// Cliques visible to an augmentation under construction: those already in
/// the program plus the ones it is about to add.
struct Staging<'a> {
    layout: &'a BeliefLayout,
    next_col: usize,
    added: Vec<CliqueEntry>,
    aug: Augmentation,
}

impl<'a> Staging<'a> {
    fn new(program: &'a DecodingProgram) -> Self {
        Self {
            layout: &program.layout,
            next_col: program.lp.num_vars(),
            added: Vec::new(),
            aug: Augmentation::default(),
        }
    }

    fn entry(&self, id: &CliqueId) -> Option<&CliqueEntry> {
        self.layout
            .find(id)
            .map(|k| self.layout.clique(k))
            .or_else(|| self.added.iter().find(|e| &e.id == id))
    }

    /// Registers a full-table clique unless it already exists.
    fn ensure(&mut self, id: CliqueId) {
        if !self.aug.cliques.contains(&id) {
            self.aug.cliques.push(id.clone());
        }
        if self.entry(&id).is_some() {
            return;
        }
        let configs: Vec<ConfigMask> = (0..1u32 << id.members().len()).collect();
        let cols: Vec<usize> = (self.next_col..self.next_col + configs.len()).collect();
        self.aug.vars.extend(configs.iter().map(|_| VarSpec::unit(0.0)));
        self.aug.rows.push(SparseRow::new(cols.iter().map(|&c| (c, 1.0)).collect(), 1.0));
        self.added.push(CliqueEntry {
            id: id.clone(),
            configs: configs.clone(),
            first_col: self.next_col,
        });
        self.aug.new_cliques.push((id, configs));
        self.next_col += cols.len();
    }

    fn push(&mut self, row: SparseRow) {
        if !row.coeffs.is_empty() {
            self.aug.rows.push(row);
        }
    }

    /// Four rows equating the `(u, v)` marginals of two cliques.
    fn tie_pair(&mut self, a: &CliqueId, b: &CliqueId, u: usize, v: usize) {
        let ea = self.entry(a).expect("staged").clone();
        let eb = self.entry(b).expect("staged").clone();
        for xu in 0..2u8 {
            for xv in 0..2u8 {
                let mut coeffs: Vec<(usize, f64)> =
                    ea.marginal_columns(&[u, v], &[xu, xv]).into_iter().map(|c| (c, 1.0)).collect();
                coeffs.extend(eb.marginal_columns(&[u, v], &[xu, xv]).into_iter().map(|c| (c, -1.0)));
                self.push(SparseRow::new(coeffs, 0.0));
            }
        }
    }

    /// Two rows tying a clique's singleton marginal of `var` to `b_var`.
    fn tie_singleton(&mut self, id: &CliqueId, var: usize) {
        let e = self.entry(id).expect("staged").clone();
        for x in 0..2u8 {
            let mut coeffs = vec![(self.layout.var_col(var, x), 1.0)];
            coeffs.extend(e.marginal_columns(&[var], &[x]).into_iter().map(|c| (c, -1.0)));
            self.push(SparseRow::new(coeffs, 0.0));
        }
    }

    fn source(&self, idx: usize, u: usize, v: usize) -> Result<CliqueId> {
        let cliques = self.layout.cliques();
        let e = cliques
            .get(idx)
            .ok_or_else(|| Error::Triangulation(format!("binding to unknown clique {idx}")))?;
        if !(e.id.contains(u) && e.id.contains(v)) {
            return Err(Error::Triangulation(format!("clique {} does not contain ({u}, {v})", e.id)));
        }
        Ok(e.id.clone())
    }
}

pub fn triangle_id(t: [usize; 3]) -> CliqueId {
    CliqueId::new(CliqueKind::Triangle, t.to_vec())
}

/// Columns and rows realizing `plan` on top of `program`.
///
/// Triangles already present are reused, so only their missing rows are
/// emitted; duplicate rows are dropped when the augmentation is applied.
pub fn emit_constraints(plan: &TriangulationPlan, program: &DecodingProgram) -> Result<Augmentation> {
    let mut st = Staging::new(program);
    let sources = plan
        .edge_bindings
        .iter()
        .map(|e| st.source(e.source, e.u, e.v))
        .collect::<Result<Vec<_>>>()?;
    let tris: Vec<CliqueId> = plan.triangles.iter().map(|&t| triangle_id(t)).collect();
    for t in &tris {
        st.ensure(t.clone());
    }
    for (s, [a, b]) in plan.chords() {
        st.tie_pair(&tris[s], &tris[s + 1], a, b);
    }
    for (e, src) in plan.edge_bindings.iter().zip(&sources) {
        st.tie_pair(&tris[e.triangle], src, e.u, e.v);
    }
    for (t, id) in plan.triangles.iter().zip(&tris) {
        for &v in t {
            st.tie_singleton(id, v);
        }
    }
    Ok(st.aug)
}

/// A pair clique on `(i, j)` whose marginal must match both sources'.
pub fn bind_two_cycle(pair: (usize, usize), sources: (usize, usize), program: &DecodingProgram) -> Result<Augmentation> {
    let (i, j) = pair;
    if i == j {
        return Err(Error::Triangulation(format!("pair ({i}, {j}) is one variable")));
    }
    if sources.0 == sources.1 {
        return Err(Error::NoProgress(format!("both edges of ({i}, {j}) come from the same clique")));
    }
    let mut st = Staging::new(program);
    let a = st.source(sources.0, i, j)?;
    let b = st.source(sources.1, i, j)?;
    let id = CliqueId::new(CliqueKind::Pair, vec![i, j]);
    st.ensure(id.clone());
    st.tie_pair(&id, &a, i, j);
    st.tie_pair(&id, &b, i, j);
    st.tie_singleton(&id, i);
    st.tie_singleton(&id, j);
    Ok(st.aug)
}

impl DecodingProgram {
    /// Appends an augmentation built against the current program.
    pub fn apply(&mut self, aug: Augmentation) -> Result<AugmentationResult> {
        let first = self.lp.num_vars();
        let rows_before = self.lp.num_rows();
        let summary = self.lp.extend(&aug.vars, aug.rows)?;
        let mut col = first;
        for (id, configs) in aug.new_cliques {
            let width = configs.len();
            self.layout.register(id, configs, col);
            col += width;
        }
        debug_assert_eq!(col, self.lp.num_vars());
        Ok(AugmentationResult {
            new_variable_count: summary.vars_added,
            new_row_count: summary.rows_added,
            rows_skipped: summary.rows_skipped,
            first_new_var: first,
            new_rows: rows_before..self.lp.num_rows(),
            cliques: aug.cliques,
        })
    }
}

/// Whether the rows just added exclude `previous`, the optimum before the
/// augmentation, for every choice of the newly added columns.
///
/// Old columns are fixed at their previous values and a feasibility LP over
/// the new columns is solved; infeasibility means the cut is effective.
pub fn cuts_off(lp: &LinearProgram, result: &AugmentationResult, previous: &[f64], tols: &Tolerances) -> bool {
    let first = result.first_new_var;
    let mut sub = LinearProgram::new();
    for j in first..lp.num_vars() {
        sub.add_var(VarSpec {
            cost: 0.0,
            lower: lp.lower()[j],
            upper: lp.upper()[j],
        })
        .expect("finite bounds");
    }
    for row in &lp.rows()[result.new_rows.clone()] {
        let mut rhs = row.rhs;
        let mut coeffs = Vec::new();
        for &(j, a) in &row.coeffs {
            if j < first {
                rhs -= a * previous[j];
            } else {
                coeffs.push((j - first, a));
            }
        }
        if coeffs.is_empty() {
            if rhs.abs() > tols.feasibility {
                return true;
            }
            continue;
        }
        sub.add_row(SparseRow::new(coeffs, rhs)).expect("valid row");
    }
    lp::solve(&sub, tols).status == LpStatus::Infeasible
}
