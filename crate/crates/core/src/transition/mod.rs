//! Color transition matrices between nested pentagons.

mod matrix;
mod sample;

pub use matrix::{
    big_to_json, meets_three_halves_bound, permutations, verify_product_bound, Classification, Matrix5, Perm5,
    PotentialVector, ProductReport, ProductStep,
};
pub use sample::{random_chain, random_dominant, random_doubling};

use num_bigint::BigUint;
use serde_json::json;
use thiserror::Error;

use crate::coloring::{
    count_3_colorings, count_extensions, cycle_colorings, special_index, Color, ColoringError, CountError, CountOptions,
};
use crate::plane_graph::{Cycle, GraphError, PlaneGraph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransitionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("cycle of length {0} is not a pentagon")]
    NotPentagon(usize),
    #[error("labels of matrix {index} do not continue the previous matrix")]
    LabelMismatch { index: usize },
    #[error("nothing to compose")]
    Empty,
    #[error("raw count {raw} in cell ({row}, {col}) is not divisible by 6")]
    NotDivisible { row: usize, col: usize, raw: u128 },
    #[error("cells sum to {cells} but the annulus has {total} colorings")]
    Checksum { cells: u128, total: u128 },
}

/// A 5×5 transition matrix with its boundary labels (host vertex ids in
/// clockwise order from the smallest id).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub rows: Vec<Vertex>,
    pub cols: Vec<Vertex>,
    pub entries: Matrix5,
}

impl TransitionMatrix {
    pub fn classification(&self) -> Classification {
        self.entries.classify()
    }

    pub fn report(&self, g: &PlaneGraph, raw_count: Option<u128>) -> serde_json::Value {
        let names = |vs: &[Vertex]| vs.iter().map(|&v| g.name(v).to_owned()).collect::<Vec<_>>();
        let raw = match raw_count {
            Some(r) => big_to_json(&BigUint::from(r)),
            None => big_to_json(&(self.entries.sum() * 6u32)),
        };
        json!({
            "rows": names(&self.rows),
            "cols": names(&self.cols),
            "entries": self.entries.to_json(),
            "classification": self.classification().as_str(),
            "raw_count": raw,
        })
    }
}

/// A transition matrix together with the undivided cell counts it came from.
#[derive(Clone, Debug)]
pub struct AnnulusMatrix {
    pub matrix: TransitionMatrix,
    pub raw: [[u128; 5]; 5],
    /// Number of 3-colorings of the annulus.
    pub raw_count: u128,
    pub annulus_vertices: usize,
    pub budget_used: u64,
}

fn consistent(assign: &mut [Option<Color>], vs: &[Vertex], cs: &[Color]) -> bool {
    for (&v, &c) in vs.iter().zip(cs) {
        match assign[v] {
            Some(d) if d != c => return false,
            _ => assign[v] = Some(c),
        }
    }
    true
}

/// Transition matrix from `outer` to `inner`, with raw counts and checks.
pub fn annulus_matrix(
    g: &PlaneGraph,
    outer: &Cycle,
    inner: &Cycle,
    opts: CountOptions,
) -> Result<AnnulusMatrix, TransitionError> {
    for c in [outer, inner] {
        if c.len() != 5 {
            return Err(TransitionError::NotPentagon(c.len()));
        }
    }
    let ann = g.annulus_subgraph(outer, inner)?;
    let rows = g.clockwise(outer)?;
    let cols = g.clockwise(inner)?;
    let local = |vs: &[Vertex]| vs.iter().map(|&v| ann.from_host(v).expect("boundary kept")).collect::<Vec<_>>();
    let (lr, lc) = (local(&rows), local(&cols));

    let boundary = cycle_colorings(5);
    let n = ann.graph.names().len();
    let mut raw = [[0u128; 5]; 5];
    let mut used = 0u64;
    for a in &boundary {
        let i = special_index(a)?;
        for b in &boundary {
            let mut assign = vec![None; n];
            if !consistent(&mut assign, &lr, a) || !consistent(&mut assign, &lc, b) {
                continue;
            }
            let pre: Vec<(Vertex, Color)> = assign.iter().enumerate().filter_map(|(v, c)| c.map(|c| (v, c))).collect();
            let left = CountOptions { budget: opts.budget.saturating_sub(used), ..opts };
            let r = count_extensions(&ann.graph, &pre, left).map_err(|e| match e {
                CountError::BudgetExceeded { .. } => CountError::BudgetExceeded { budget: opts.budget },
                e => e,
            })?;
            used += r.budget_used;
            let j = special_index(b)?;
            raw[i][j] = raw[i][j].checked_add(r.count).ok_or(CountError::Overflow)?;
        }
    }

    let left = CountOptions { budget: opts.budget.saturating_sub(used), ..opts };
    let total = count_3_colorings(&ann.graph, left)?;
    used += total.budget_used;
    let cells: u128 = raw.iter().flatten().sum();
    if cells != total.count {
        return Err(TransitionError::Checksum { cells, total: total.count });
    }
    let mut entries: [[BigUint; 5]; 5] = Default::default();
    for i in 0..5 {
        for j in 0..5 {
            if raw[i][j] % 6 != 0 {
                return Err(TransitionError::NotDivisible { row: i, col: j, raw: raw[i][j] });
            }
            entries[i][j] = BigUint::from(raw[i][j] / 6);
        }
    }
    Ok(AnnulusMatrix {
        matrix: TransitionMatrix { rows, cols, entries: Matrix5::from_entries(entries) },
        raw,
        raw_count: total.count,
        annulus_vertices: n,
        budget_used: used,
    })
}

/// `M[i][j]` is one sixth of the number of colorings of the annulus between
/// `outer` and `inner` whose special vertices are `rows[i]` and `cols[j]`.
pub fn transition_matrix(
    g: &PlaneGraph,
    outer: &Cycle,
    inner: &Cycle,
    opts: CountOptions,
) -> Result<TransitionMatrix, TransitionError> {
    Ok(annulus_matrix(g, outer, inner, opts)?.matrix)
}

/// Product of consecutive matrices; the columns of each must be labelled
/// like the rows of the next.
pub fn compose(ms: &[TransitionMatrix]) -> Result<TransitionMatrix, TransitionError> {
    let (first, rest) = ms.split_first().ok_or(TransitionError::Empty)?;
    let mut acc = first.clone();
    for (k, m) in rest.iter().enumerate() {
        if acc.cols != m.rows {
            return Err(TransitionError::LabelMismatch { index: k + 1 });
        }
        acc = TransitionMatrix { rows: acc.rows, cols: m.cols.clone(), entries: acc.entries.mul(&m.entries) };
    }
    Ok(acc)
}

/// Layer matrices of a chain listed from outermost to innermost.
pub fn chain_matrices(
    g: &PlaneGraph,
    chain: &[Cycle],
    opts: CountOptions,
) -> Result<Vec<AnnulusMatrix>, TransitionError> {
    let mut out = Vec::with_capacity(chain.len().saturating_sub(1));
    let mut used = 0u64;
    for w in chain.windows(2) {
        let left = CountOptions { budget: opts.budget.saturating_sub(used), ..opts };
        let m = annulus_matrix(g, &w[0], &w[1], left)?;
        used += m.budget_used;
        out.push(m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane_graph::Adjacency;

    fn pentagon_graph() -> PlaneGraph {
        let names = (0..5).map(|i| format!("v{i}")).collect();
        let rotation = (0..5).map(|i| vec![(i + 4) % 5, (i + 1) % 5]).collect();
        PlaneGraph::with_outer_dart(names, rotation, Some((0, 1))).unwrap()
    }

    #[test]
    fn equal_cycles_are_rejected() {
        let g = pentagon_graph();
        let c = Cycle::new(&g, vec![0, 1, 2, 3, 4]).unwrap();
        assert!(matches!(
            transition_matrix(&g, &c, &c, CountOptions::default()),
            Err(TransitionError::Graph(GraphError::NotNested))
        ));
    }

    #[test]
    fn non_pentagons_are_rejected() {
        let names = (0..4).map(|i| format!("v{i}")).collect();
        let rotation = (0..4).map(|i| vec![(i + 3) % 4, (i + 1) % 4]).collect();
        let g = PlaneGraph::with_outer_dart(names, rotation, Some((0, 1))).unwrap();
        assert_eq!(g.edge_count(), 4);
        let c = Cycle::new(&g, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(transition_matrix(&g, &c, &c, CountOptions::default()), Err(TransitionError::NotPentagon(4)));
    }

    #[test]
    fn compose_checks_labels() {
        let m = TransitionMatrix { rows: vec![0, 1, 2, 3, 4], cols: vec![5, 6, 7, 8, 9], entries: Matrix5::a0() };
        let id = TransitionMatrix { rows: m.cols.clone(), cols: m.cols.clone(), entries: Matrix5::identity() };
        assert_eq!(compose(std::slice::from_ref(&m)).unwrap(), m);
        assert_eq!(compose(&[m.clone(), id]).unwrap(), m);
        assert_eq!(compose(&[m.clone(), m.clone()]), Err(TransitionError::LabelMismatch { index: 1 }));
        assert_eq!(compose(&[]), Err(TransitionError::Empty));
    }
}
