//! Triangle-free plane graphs with known embeddings.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::plane_graph::{GraphError, PlaneGraph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("parameter {name} = {value} out of range ({range})")]
    OutOfRange { name: &'static str, value: u64, range: &'static str },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Builds a plane graph from a straight-line drawing. Rotations follow the
/// clockwise angular order; the outer face is the one with negative area.
pub fn from_drawing(
    names: Vec<String>,
    coords: &[(f64, f64)],
    edges: &[(Vertex, Vertex)],
) -> Result<PlaneGraph, GraphError> {
    let n = names.len();
    let mut rotation: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        rotation[a].push(b);
        rotation[b].push(a);
    }
    for (v, rot) in rotation.iter_mut().enumerate() {
        let (x, y) = coords[v];
        let angle = |w: &Vertex| (coords[*w].1 - y).atan2(coords[*w].0 - x);
        rot.sort_by(|p, q| angle(q).total_cmp(&angle(p)));
    }
    let first = rotation.iter().position(|r| !r.is_empty()).map(|v| (v, rotation[v][0]));
    let g = PlaneGraph::with_outer_dart(names.clone(), rotation.clone(), first)?;
    let area = |f: usize| -> f64 {
        g.faces()[f].darts().iter().map(|&(u, v)| coords[u].0 * coords[v].1 - coords[v].0 * coords[u].1).sum()
    };
    let outer = (0..g.faces().len()).min_by(|&a, &b| area(a).total_cmp(&area(b))).expect("a face");
    let dart = g.faces()[outer].darts().first().copied();
    PlaneGraph::with_outer_dart(names, rotation, dart)
}

fn polar(r: f64, degrees: f64) -> (f64, f64) {
    let t = degrees * PI / 180.0;
    (r * t.cos(), r * t.sin())
}

/// `k` concentric pentagons `p{i}_{j}` (layer `i = 0` outermost) joined by
/// spokes `p{i}_{j} p{i+1}_{j}`.
pub fn pentagon_tower(k: usize) -> PlaneGraph {
    assert!(k >= 1, "tower height must be positive");
    let mut names = Vec::with_capacity(5 * k);
    let mut coords = Vec::with_capacity(5 * k);
    let mut edges = Vec::new();
    for i in 0..k {
        for j in 0..5 {
            names.push(format!("p{i}_{j}"));
            coords.push(polar((k - i) as f64, 90.0 + 72.0 * j as f64));
            edges.push((5 * i + j, 5 * i + (j + 1) % 5));
            if i + 1 < k {
                edges.push((5 * i + j, 5 * (i + 1) + j));
            }
        }
    }
    from_drawing(names, &coords, &edges).expect("tower drawing is valid")
}

/// Pentagon `u1 … u5` with an inner vertex `v` adjacent to `u1` and `u4`,
/// so that `u1 u2 u3 u4 v` is a second pentagon sharing four vertices.
pub fn shared_path_pentagons() -> PlaneGraph {
    let mut names: Vec<String> = (1..=5).map(|i| format!("u{i}")).collect();
    names.push("v".into());
    let mut coords: Vec<_> = (0..5).map(|j| polar(2.0, 90.0 + 72.0 * j as f64)).collect();
    coords.push((0.0, 0.0));
    let mut edges: Vec<_> = (0..5).map(|j| (j, (j + 1) % 5)).collect();
    edges.extend([(5, 0), (5, 3)]);
    from_drawing(names, &coords, &edges).expect("shared-path drawing is valid")
}

/// The dodecahedron: outer ring `a0..a4`, middle ring `b0..b9`, inner ring
/// `c0..c4`.
pub fn dodecahedron() -> PlaneGraph {
    let mut names = Vec::with_capacity(20);
    let mut coords = Vec::with_capacity(20);
    for i in 0..5 {
        names.push(format!("a{i}"));
        coords.push(polar(3.0, 90.0 + 72.0 * i as f64));
    }
    for j in 0..10 {
        names.push(format!("b{j}"));
        coords.push(polar(2.0, 90.0 + 36.0 * j as f64));
    }
    for i in 0..5 {
        names.push(format!("c{i}"));
        coords.push(polar(1.0, 126.0 + 72.0 * i as f64));
    }
    let (a, b, c) = (|i: usize| i % 5, |j: usize| 5 + j % 10, |i: usize| 15 + i % 5);
    let mut edges = Vec::with_capacity(30);
    for i in 0..5 {
        edges.push((a(i), a(i + 1)));
        edges.push((c(i), c(i + 1)));
        edges.push((a(i), b(2 * i)));
        edges.push((b(2 * i + 1), c(i)));
    }
    for j in 0..10 {
        edges.push((b(j), b(j + 1)));
    }
    from_drawing(names, &coords, &edges).expect("dodecahedron drawing is valid")
}

/// `m` disjoint pentagons `q{i}_{j}` inside an outer cycle `o0 …`, pentagon
/// `i` hanging from `o{2i}` by the path `o{2i} h{i} q{i}_0`.
pub fn garden(m: usize) -> PlaneGraph {
    assert!(m >= 1, "garden needs at least one pentagon");
    let len = (2 * m).max(4);
    let mut names = Vec::new();
    let mut coords = Vec::new();
    let mut edges = Vec::new();
    for i in 0..len {
        names.push(format!("o{i}"));
        coords.push(polar(10.0, 360.0 * i as f64 / len as f64));
        edges.push((i, (i + 1) % len));
    }
    for i in 0..m {
        let theta = 360.0 * (2 * i) as f64 / len as f64;
        let h = names.len();
        names.push(format!("h{i}"));
        coords.push(polar(8.0, theta));
        edges.push((2 * i, h));
        let (cx, cy) = polar(6.0, theta);
        let q0 = names.len();
        for j in 0..5 {
            names.push(format!("q{i}_{j}"));
            let (dx, dy) = polar(1.2, theta + 72.0 * j as f64);
            coords.push((cx + dx, cy + dy));
            edges.push((q0 + j, q0 + (j + 1) % 5));
        }
        edges.push((h, q0));
    }
    from_drawing(names, &coords, &edges).expect("garden drawing is valid")
}

/// Eight vertices, two pentagons `a b c d e` and `a x d y b` sharing the
/// edge `ab` and the opposite vertex `d`; their interiors overlap without
/// nesting.
pub fn crossing_pentagons() -> PlaneGraph {
    let names = ["a", "b", "c", "d", "e", "x", "y", "z"].map(String::from).to_vec();
    let coords = [(-1.0, -1.0), (1.0, -1.0), (1.5, 0.8), (0.0, 2.0), (-1.5, 0.8), (-0.5, 0.5), (3.0, 1.0), (2.2, 0.9)];
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (5, 3), (3, 6), (6, 1), (2, 7), (7, 6)];
    from_drawing(names, &coords, &edges).expect("crossing drawing is valid")
}

/// One face subdivision applied by [`perturbed_tower`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Subdivision {
    /// A new vertex joined to two opposite corners of a quadrilateral,
    /// leaving two quadrilaterals. Adds one vertex.
    Diagonal,
    /// A path of two new vertices parallel to one side of a quadrilateral,
    /// leaving a quadrilateral and a hexagon. Adds two vertices.
    Parallel,
    /// No inner quadrilateral was available. Adds nothing.
    Skipped,
}

impl Subdivision {
    pub fn added_vertices(self) -> usize {
        match self {
            Subdivision::Diagonal => 1,
            Subdivision::Parallel => 2,
            Subdivision::Skipped => 0,
        }
    }
}

fn insert_after(rot: &mut Vec<Vertex>, after: Vertex, new: Vertex) {
    let i = rot.iter().position(|&w| w == after).expect("neighbour in rotation");
    rot.insert(i + 1, new);
}

/// `pentagon_tower(k)` with `ops` seeded random subdivisions of inner
/// quadrilateral faces, and the list of operations applied.
pub fn perturbed_tower_with_log(k: usize, seed: u64, ops: usize) -> (PlaneGraph, Vec<Subdivision>) {
    let mut g = pentagon_tower(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = Vec::with_capacity(ops);
    let outer_dart = g.faces()[g.outer_face()].darts()[0];
    for op in 0..ops {
        let quads: Vec<usize> =
            (0..g.faces().len()).filter(|&f| f != g.outer_face() && g.faces()[f].len() == 4).collect();
        if quads.is_empty() {
            log.push(Subdivision::Skipped);
            continue;
        }
        let face = &g.faces()[quads[rng.gen_range(0..quads.len())]];
        let start = rng.gen_range(0..4);
        let walk: Vec<Vertex> = (0..4).map(|i| face.darts()[(start + i) % 4].0).collect();
        let (a, b, c, d) = (walk[0], walk[1], walk[2], walk[3]);
        let mut names = g.names().to_vec();
        let mut rotation: Vec<Vec<Vertex>> = (0..names.len()).map(|v| g.rotation(v).to_vec()).collect();
        let x = names.len();
        names.push(format!("s{op}"));
        let kind = if rng.gen_bool(0.5) { Subdivision::Diagonal } else { Subdivision::Parallel };
        match kind {
            Subdivision::Diagonal => {
                insert_after(&mut rotation[a], d, x);
                insert_after(&mut rotation[c], b, x);
                rotation.push(vec![a, c]);
            }
            _ => {
                let y = x + 1;
                names.push(format!("s{op}b"));
                insert_after(&mut rotation[a], d, x);
                insert_after(&mut rotation[b], a, y);
                rotation.push(vec![a, y]);
                rotation.push(vec![x, b]);
            }
        }
        g = PlaneGraph::with_outer_dart(names, rotation, Some(outer_dart))
            .expect("subdivision keeps the embedding valid");
        log.push(kind);
    }
    (g, log)
}

pub fn perturbed_tower(k: usize, seed: u64, ops: usize) -> PlaneGraph {
    perturbed_tower_with_log(k, seed, ops).0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Tower,
    Shared,
    Dodeca,
    Garden,
    Perturbed,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Tower, Family::Shared, Family::Dodeca, Family::Garden, Family::Perturbed];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Tower => "tower",
            Family::Shared => "shared",
            Family::Dodeca => "dodeca",
            Family::Garden => "garden",
            Family::Perturbed => "perturbed",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL.into_iter().find(|f| f.as_str() == s).ok_or_else(|| GeneratorError::UnknownFamily(s.to_owned()))
    }
}

/// Parameters of one generated instance. `k` is the tower height for
/// towers and perturbed towers and the pentagon count for gardens.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub k: usize,
    pub seed: u64,
    pub ops: usize,
}

/// Largest accepted `k`; keeps outputs small enough to count.
pub const MAX_K: usize = 64;

impl GeneratorSpec {
    pub fn new(family: Family, k: usize, seed: u64, ops: usize) -> Self {
        GeneratorSpec { family, k, seed, ops }
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        let needs_k = matches!(self.family, Family::Tower | Family::Garden | Family::Perturbed);
        if needs_k && !(1..=MAX_K).contains(&self.k) {
            return Err(GeneratorError::OutOfRange { name: "k", value: self.k as u64, range: "1..=64" });
        }
        if self.family == Family::Perturbed && self.ops > 1000 {
            return Err(GeneratorError::OutOfRange { name: "ops", value: self.ops as u64, range: "0..=1000" });
        }
        Ok(())
    }

    pub fn build(&self) -> Result<PlaneGraph, GeneratorError> {
        self.validate()?;
        Ok(match self.family {
            Family::Tower => pentagon_tower(self.k),
            Family::Shared => shared_path_pentagons(),
            Family::Dodeca => dodecahedron(),
            Family::Garden => garden(self.k),
            Family::Perturbed => perturbed_tower(self.k, self.seed, self.ops),
        })
    }

    /// Short identifier such as `tower-3` or `perturbed-3-s7-o2`.
    pub fn id(&self) -> String {
        match self.family {
            Family::Tower | Family::Garden => format!("{}-{}", self.family, self.k),
            Family::Shared | Family::Dodeca => self.family.to_string(),
            Family::Perturbed => format!("perturbed-{}-s{}-o{}", self.k, self.seed, self.ops),
        }
    }
}

/// The fixed test corpus: towers, the shared-path pair, the dodecahedron,
/// gardens and perturbed towers, all with at most 40 vertices.
pub fn corpus() -> Vec<GeneratorSpec> {
    let mut out = Vec::new();
    for k in 1..=8 {
        out.push(GeneratorSpec::new(Family::Tower, k, 0, 0));
    }
    out.push(GeneratorSpec::new(Family::Shared, 0, 0, 0));
    out.push(GeneratorSpec::new(Family::Dodeca, 0, 0, 0));
    for m in 1..=5 {
        out.push(GeneratorSpec::new(Family::Garden, m, 0, 0));
    }
    for k in 2..=4 {
        for seed in [1, 2, 3] {
            for ops in 1..=4 {
                out.push(GeneratorSpec::new(Family::Perturbed, k, seed, ops));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane_graph::{is_triangle_free, Adjacency};

    #[test]
    fn tower_shapes() {
        let g = pentagon_tower(1);
        assert_eq!((g.vertex_count(), g.edge_count(), g.faces().len()), (5, 5, 2));
        let g = pentagon_tower(2);
        assert_eq!((g.vertex_count(), g.edge_count(), g.faces().len()), (10, 15, 7));
        let g = pentagon_tower(4);
        let mut lens: Vec<_> = g.faces().iter().map(|f| f.len()).collect();
        lens.sort();
        assert_eq!(lens, [4; 15].into_iter().chain([5, 5]).collect::<Vec<_>>());
        assert_eq!(g.faces()[g.outer_face()].len(), 5);
        let outer: Vec<_> = g.faces()[g.outer_face()].vertices().iter().map(|&v| g.name(v).to_owned()).collect();
        assert!(outer.iter().all(|n| n.starts_with("p0_")));
    }

    #[test]
    fn shared_and_dodecahedron_shapes() {
        let g = shared_path_pentagons();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 7));
        assert!(is_triangle_free(&g));
        let g = dodecahedron();
        assert_eq!((g.vertex_count(), g.edge_count(), g.faces().len()), (20, 30, 12));
        assert!(g.faces().iter().all(|f| f.len() == 5));
        assert!((0..20).all(|v| g.degree(v) == 3));
    }

    #[test]
    fn garden_shape() {
        for m in 1..=5 {
            let g = garden(m);
            assert_eq!(g.vertex_count(), (2 * m).max(4) + 6 * m);
            assert!(is_triangle_free(&g));
            assert_eq!(g.faces()[g.outer_face()].len(), (2 * m).max(4));
        }
    }

    #[test]
    fn perturbation_bookkeeping() {
        assert_eq!(perturbed_tower(3, 9, 0), pentagon_tower(3));
        for seed in 0..5 {
            let (g, log) = perturbed_tower_with_log(3, seed, 6);
            let added: usize = log.iter().map(|s| s.added_vertices()).sum();
            assert_eq!(g.vertex_count(), 15 + added);
            assert!(is_triangle_free(&g));
            assert_eq!(PlaneGraph::from_json(&g.to_json()).unwrap(), g);
        }
        let (_, log) = perturbed_tower_with_log(1, 0, 2);
        assert_eq!(log, [Subdivision::Skipped; 2]);
    }

    #[test]
    fn specs_parse_and_validate() {
        assert_eq!("dodeca".parse::<Family>().unwrap(), Family::Dodeca);
        assert!("cube".parse::<Family>().is_err());
        assert!(GeneratorSpec::new(Family::Tower, 0, 0, 0).build().is_err());
        assert_eq!(GeneratorSpec::new(Family::Perturbed, 3, 7, 2).id(), "perturbed-3-s7-o2");
        assert!(corpus().iter().all(|s| s.build().unwrap().vertex_count() <= 40));
    }
}
