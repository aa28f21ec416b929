//! Proper 3-colorings: counting, enumeration, special vertices of
//! pentagons, boundary extension and bichromatic switching.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plane_graph::{Adjacency, PlaneGraph, Vertex};

mod count;

pub use count::{
    count_3_colorings, count_extensions, enumerate_3_colorings, enumerate_extensions, find_extension, Colorings,
    CountError, CountOptions, CountResult, DEFAULT_BUDGET,
};

/// A color, always one of 1, 2, 3.
pub type Color = u8;

pub const COLORS: [Color; 3] = [1, 2, 3];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("expected a cycle of length {expected}, got {actual}")]
    WrongLength { expected: usize, actual: usize },
    #[error("coloring is not proper on the cycle")]
    NotProper,
    #[error("cycle does not bound a face")]
    NotFacial,
    #[error("unknown vertex {0:?} in coloring")]
    UnknownVertex(String),
    #[error("color {0} is not in 1..=3")]
    BadColor(u8),
    #[error("vertex {0:?} has no color")]
    Missing(String),
    #[error("malformed coloring file: {0}")]
    Json(String),
    #[error(transparent)]
    Count(#[from] CountError),
}

/// Vertex-indexed 3-coloring of a whole graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring(Vec<Color>);

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Self {
        Coloring(colors)
    }

    pub fn color(&self, v: Vertex) -> Color {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.0
    }

    pub fn is_proper<G: Adjacency + ?Sized>(&self, g: &G) -> bool {
        self.0.len() == g.vertex_count()
            && self.0.iter().all(|c| (1..=3).contains(c))
            && g.edges().iter().all(|&(u, v)| self.0[u] != self.0[v])
    }

    /// Applies a color permutation given as the images of 1, 2, 3.
    pub fn permuted(&self, perm: [Color; 3]) -> Coloring {
        Coloring(self.0.iter().map(|&c| perm[c as usize - 1]).collect())
    }

    /// Colors along a vertex sequence.
    pub fn restrict(&self, vertices: &[Vertex]) -> Vec<Color> {
        vertices.iter().map(|&v| self.0[v]).collect()
    }

    /// JSON form `{"colors": {"a": 1, ...}}` keyed by vertex name.
    pub fn to_json(&self, g: &PlaneGraph) -> String {
        let colors: BTreeMap<String, Color> =
            self.0.iter().enumerate().map(|(v, &c)| (g.name(v).to_owned(), c)).collect();
        serde_json::to_string(&ColoringFile { colors }).expect("coloring serialises")
    }

    pub fn from_json(g: &PlaneGraph, text: &str) -> Result<Coloring, ColoringError> {
        let file: ColoringFile = serde_json::from_str(text).map_err(|e| ColoringError::Json(e.to_string()))?;
        let mut out = vec![0; g.vertex_count()];
        for (name, c) in file.colors {
            let v = g.vertex(&name).ok_or(ColoringError::UnknownVertex(name))?;
            if !(1..=3).contains(&c) {
                return Err(ColoringError::BadColor(c));
            }
            out[v] = c;
        }
        if let Some(v) = out.iter().position(|&c| c == 0) {
            return Err(ColoringError::Missing(g.name(v).to_owned()));
        }
        Ok(Coloring(out))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ColoringFile {
    colors: BTreeMap<String, Color>,
}

/// All proper colorings of a cycle of the given length, as color sequences
/// in cycle order, lexicographically sorted.
pub fn cycle_colorings(len: usize) -> Vec<Vec<Color>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(len: usize, cur: &mut Vec<Color>, out: &mut Vec<Vec<Color>>) {
        if cur.len() == len {
            if cur[0] != cur[len - 1] {
                out.push(cur.clone());
            }
            return;
        }
        for c in COLORS {
            if cur.last() != Some(&c) {
                cur.push(c);
                rec(len, cur, out);
                cur.pop();
            }
        }
    }
    if len >= 2 {
        rec(len, &mut cur, &mut out);
    }
    out
}

/// Position of the unique vertex whose color occurs once on a properly
/// colored pentagon.
pub fn special_index(colors: &[Color]) -> Result<usize, ColoringError> {
    if colors.len() != 5 {
        return Err(ColoringError::WrongLength { expected: 5, actual: colors.len() });
    }
    if (0..5).any(|i| colors[i] == colors[(i + 1) % 5]) {
        return Err(ColoringError::NotProper);
    }
    let mut singles = (0..5).filter(|&i| colors.iter().filter(|&&c| c == colors[i]).count() == 1);
    let i = singles.next().ok_or(ColoringError::NotProper)?;
    debug_assert!(singles.next().is_none());
    Ok(i)
}

/// The special vertex of a pentagon under a coloring, and the cycle edge
/// opposite to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpecialData {
    pub vertex: Vertex,
    pub edge: (Vertex, Vertex),
}

/// `cycle` lists the pentagon's vertices in cyclic order.
pub fn special_data(cycle: &[Vertex], coloring: &Coloring) -> Result<SpecialData, ColoringError> {
    let i = special_index(&coloring.restrict(cycle))?;
    Ok(SpecialData { vertex: cycle[i], edge: (cycle[(i + 2) % 5], cycle[(i + 3) % 5]) })
}

/// Whether the boundary coloring `colors` of the facial cycle `cycle`
/// extends to a proper 3-coloring of `g`.
pub fn extends(g: &PlaneGraph, cycle: &[Vertex], colors: &[Color], budget: u64) -> Result<bool, ColoringError> {
    if cycle.len() != colors.len() {
        return Err(ColoringError::WrongLength { expected: cycle.len(), actual: colors.len() });
    }
    if g.face_with_walk(cycle).is_none() {
        return Err(ColoringError::NotFacial);
    }
    let n = cycle.len();
    if (0..n).any(|i| colors[i] == colors[(i + 1) % n]) || colors.iter().any(|c| !(1..=3).contains(c)) {
        return Err(ColoringError::NotProper);
    }
    let pre: Vec<_> = cycle.iter().copied().zip(colors.iter().copied()).collect();
    Ok(find_extension(g, &pre, budget)?.is_some())
}

/// A connected component of the subgraph induced by two color classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BichromaticComponent {
    pub pair: (Color, Color),
    pub vertices: Vec<Vertex>,
}

/// Components of the subgraph induced by the vertices colored `i` or `j`,
/// ordered by smallest vertex.
pub fn bichromatic_components<G: Adjacency + ?Sized>(
    g: &G,
    coloring: &Coloring,
    i: Color,
    j: Color,
) -> Vec<BichromaticComponent> {
    let in_pair = |v: Vertex| coloring.color(v) == i || coloring.color(v) == j;
    let mut seen = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    for s in 0..g.vertex_count() {
        if seen[s] || !in_pair(s) {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if !seen[w] && in_pair(w) {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(BichromaticComponent { pair: (i, j), vertices: comp });
    }
    out
}

/// Swaps the two colors of `component` on its vertices.
pub fn switch_component(coloring: &Coloring, component: &BichromaticComponent) -> Coloring {
    let (i, j) = component.pair;
    let mut out = coloring.0.clone();
    for &v in &component.vertices {
        out[v] = if out[v] == i { j } else { i };
    }
    Coloring(out)
}

/// The colorings reachable by switching any subset of the bichromatic
/// components for one color pair.
#[derive(Clone, Debug)]
pub struct SwitchFamily {
    pub base: Coloring,
    pub pair: (Color, Color),
    pub components: Vec<BichromaticComponent>,
}

impl SwitchFamily {
    /// `2^t` for `t` components.
    pub fn size(&self) -> u128 {
        1u128 << self.components.len().min(127)
    }

    /// Every subset of components switched, in binary-counter order.
    /// Only practical for modest component counts.
    pub fn colorings(&self) -> impl Iterator<Item = Coloring> + '_ {
        assert!(self.components.len() < 64, "too many components to enumerate");
        (0..1u64 << self.components.len()).map(move |mask| {
            let mut c = self.base.clone();
            for (k, comp) in self.components.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    c = switch_component(&c, comp);
                }
            }
            c
        })
    }
}

/// Picks the color pair with the most bichromatic components (ties go to
/// the lexicographically least pair).
pub fn colorings_from_switching<G: Adjacency + ?Sized>(g: &G, coloring: &Coloring) -> SwitchFamily {
    let mut best: Option<SwitchFamily> = None;
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        let components = bichromatic_components(g, coloring, i, j);
        if best.as_ref().is_none_or(|b| components.len() > b.components.len()) {
            best = Some(SwitchFamily { base: coloring.clone(), pair: (i, j), components });
        }
    }
    best.expect("three pairs examined")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane_graph::AbstractGraph;

    fn pentagon() -> AbstractGraph {
        AbstractGraph::from_edges((1..=5).map(|i| format!("v{i}")).collect(), &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    }

    #[test]
    fn special_vertex_examples() {
        let c = [10, 11, 12, 13, 14];
        let mut phi = vec![0; 15];
        for (k, col) in [1, 2, 1, 2, 3].into_iter().enumerate() {
            phi[c[k]] = col;
        }
        let s = special_data(&c, &Coloring::new(phi)).unwrap();
        assert_eq!(s, SpecialData { vertex: 14, edge: (11, 12) });

        let mut phi = vec![0; 15];
        for (k, col) in [3, 1, 2, 1, 2].into_iter().enumerate() {
            phi[c[k]] = col;
        }
        let s = special_data(&c, &Coloring::new(phi)).unwrap();
        assert_eq!(s, SpecialData { vertex: 10, edge: (12, 13) });
    }

    #[test]
    fn special_rejects_bad_input() {
        assert_eq!(special_index(&[1, 2, 1, 2]), Err(ColoringError::WrongLength { expected: 5, actual: 4 }));
        assert_eq!(special_index(&[1, 1, 2, 1, 2]), Err(ColoringError::NotProper));
    }

    #[test]
    fn each_pentagon_vertex_is_special_six_times() {
        let all = cycle_colorings(5);
        assert_eq!(all.len(), 30);
        let mut tally = [0; 5];
        for col in &all {
            tally[special_index(col).unwrap()] += 1;
        }
        assert_eq!(tally, [6; 5]);
        assert_eq!(cycle_colorings(4).len(), 18);
    }

    #[test]
    fn special_data_is_color_equivariant() {
        let cyc = [0, 1, 2, 3, 4];
        for col in cycle_colorings(5) {
            let phi = Coloring::new(col);
            let base = special_data(&cyc, &phi).unwrap();
            for perm in [[2, 1, 3], [3, 2, 1], [1, 3, 2], [2, 3, 1], [3, 1, 2]] {
                assert_eq!(special_data(&cyc, &phi.permuted(perm)).unwrap(), base);
            }
        }
    }

    #[test]
    fn switching_on_an_edge() {
        let g = AbstractGraph::from_edges(vec!["a".into(), "b".into()], &[(0, 1)]);
        let phi = Coloring::new(vec![1, 2]);
        let comps = bichromatic_components(&g, &phi, 1, 2);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].vertices, vec![0, 1]);
        assert_eq!(switch_component(&phi, &comps[0]), Coloring::new(vec![2, 1]));
        let lone = AbstractGraph::from_edges(vec!["a".into()], &[]);
        assert!(bichromatic_components(&lone, &Coloring::new(vec![3]), 1, 2).is_empty());
    }

    #[test]
    fn switching_on_pentagon() {
        let g = pentagon();
        let phi = Coloring::new(vec![1, 2, 1, 2, 3]);
        let comps = bichromatic_components(&g, &phi, 1, 2);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].vertices, vec![0, 1, 2, 3]);
        let swapped = switch_component(&phi, &comps[0]);
        assert_eq!(swapped, Coloring::new(vec![2, 1, 2, 1, 3]));
        assert!(swapped.is_proper(&g));
        assert_eq!(switch_component(&swapped, &comps[0]), phi);
    }

    #[test]
    fn switching_on_single_vertex_prefers_first_maximal_pair() {
        let g = AbstractGraph::from_edges(vec!["a".into()], &[]);
        let phi = Coloring::new(vec![1]);
        assert!(bichromatic_components(&g, &phi, 2, 3).is_empty());
        let fam = colorings_from_switching(&g, &phi);
        assert_eq!(fam.pair, (1, 2));
        let all: Vec<_> = fam.colorings().collect();
        assert_eq!(all, vec![Coloring::new(vec![1]), Coloring::new(vec![2])]);
    }

    #[test]
    fn coloring_json_round_trip() {
        let g = crate::generators::pentagon_tower(1);
        let phi = Coloring::new(vec![1, 2, 1, 2, 3]);
        let text = phi.to_json(&g);
        assert_eq!(Coloring::from_json(&g, &text).unwrap(), phi);
        assert!(matches!(Coloring::from_json(&g, r#"{"colors":{"zz":1}}"#), Err(ColoringError::UnknownVertex(_))));
    }
}
