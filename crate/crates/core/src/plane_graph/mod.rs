//! Plane graphs described by rotation systems.
//!
//! A [`PlaneGraph`] stores, for every vertex, the clockwise cyclic order of
//! its neighbours together with a designated outer face. Faces are recovered
//! by the usual face-tracing walk: the dart `u -> v` is followed by
//! `v -> w` where `w` is the clockwise successor of `u` around `v`. With this
//! rule bounded faces of a straight-line drawing are walked counterclockwise,
//! so every face lies to the left of its darts.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

mod cycles;
mod io;
mod subgraph;

pub use cycles::{enumerate_cycles, Cycle};
pub use io::GraphFile;
pub use subgraph::Subgraph;

/// Dense vertex index.
pub type Vertex = usize;

/// A directed edge `(tail, head)`.
pub type Dart = (Vertex, Vertex);

/// Read-only neighbourhood access shared by embedded and abstract graphs.
pub trait Adjacency {
    fn vertex_count(&self) -> usize;
    fn neighbors(&self, v: Vertex) -> &[Vertex];

    fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }

    fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.neighbors(u).contains(&v)
    }

    fn edge_count(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.vertex_count() {
            for &v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// True iff no three vertices are mutually adjacent.
pub fn is_triangle_free<G: Adjacency + ?Sized>(g: &G) -> bool {
    for u in 0..g.vertex_count() {
        for &v in g.neighbors(u) {
            if v <= u {
                continue;
            }
            if g.neighbors(u).iter().any(|&w| w != v && g.has_edge(v, w)) {
                return false;
            }
        }
    }
    true
}

/// Vertices of degree at most `k`, in increasing order.
pub fn low_degree_set<G: Adjacency + ?Sized>(g: &G, k: usize) -> Vec<Vertex> {
    (0..g.vertex_count()).filter(|&v| g.degree(v) <= k).collect()
}

/// Validation and structural errors. Vertices are reported by name so the
/// error can be shown against the input file.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed graph file: {0}")]
    Json(String),
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex {vertex:?} is listed twice")]
    DuplicateVertex { vertex: String },
    #[error("unknown vertex {vertex:?}")]
    UnknownVertex { vertex: String },
    #[error("vertex {vertex:?} has no rotation entry")]
    MissingRotation { vertex: String },
    #[error("self-loop at {vertex:?}")]
    SelfLoop { vertex: String },
    #[error("{neighbor:?} repeated in the rotation of {vertex:?}")]
    RepeatedNeighbor { vertex: String, neighbor: String },
    #[error("rotation is not symmetric: {to:?} appears around {from:?} but not vice versa")]
    Asymmetric { from: String, to: String },
    #[error("graph is disconnected: {vertex:?} is unreachable")]
    Disconnected { vertex: String },
    #[error("Euler check failed: V={vertices} E={edges} F={faces}")]
    Euler { vertices: usize, edges: usize, faces: usize },
    #[error("outer face {walk:?} is not a face of the embedding")]
    OuterFace { walk: Vec<String> },
    #[error("not a cycle: {reason}")]
    NotACycle { reason: String },
    #[error("cycles are not nested")]
    NotNested,
    #[error("inconsistent embedding: {0}")]
    Inconsistent(String),
}

impl GraphError {
    /// Machine-readable form naming the offending vertices or edge.
    pub fn report(&self) -> serde_json::Value {
        use serde_json::json;
        let kind = match self {
            GraphError::Json(_) => "json",
            GraphError::Empty => "empty",
            GraphError::DuplicateVertex { .. } => "duplicate_vertex",
            GraphError::UnknownVertex { .. } => "unknown_vertex",
            GraphError::MissingRotation { .. } => "missing_rotation",
            GraphError::SelfLoop { .. } => "self_loop",
            GraphError::RepeatedNeighbor { .. } => "repeated_neighbor",
            GraphError::Asymmetric { .. } => "asymmetric_rotation",
            GraphError::Disconnected { .. } => "disconnected",
            GraphError::Euler { .. } => "euler",
            GraphError::OuterFace { .. } => "outer_face",
            GraphError::NotACycle { .. } => "not_a_cycle",
            GraphError::NotNested => "not_nested",
            GraphError::Inconsistent(_) => "inconsistent",
        };
        let mut obj = json!({ "error": kind, "message": self.to_string() });
        let extra = match self {
            GraphError::DuplicateVertex { vertex }
            | GraphError::UnknownVertex { vertex }
            | GraphError::MissingRotation { vertex }
            | GraphError::SelfLoop { vertex }
            | GraphError::Disconnected { vertex } => json!({ "vertex": vertex }),
            GraphError::RepeatedNeighbor { vertex, neighbor } => {
                json!({ "vertex": vertex, "edge": [vertex, neighbor] })
            }
            GraphError::Asymmetric { from, to } => json!({ "edge": [from, to] }),
            GraphError::Euler { vertices, edges, faces } => {
                json!({ "vertices": vertices, "edges": edges, "faces": faces })
            }
            GraphError::OuterFace { walk } => json!({ "walk": walk }),
            _ => json!({}),
        };
        if let (Some(o), Some(e)) = (obj.as_object_mut(), extra.as_object()) {
            o.extend(e.clone());
        }
        obj
    }
}

/// A boundary walk of one face, as a cyclic list of darts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    darts: Vec<Dart>,
}

impl Face {
    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    /// Length of the boundary walk in darts.
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Tails of the darts, in walk order.
    pub fn vertices(&self) -> Vec<Vertex> {
        self.darts.iter().map(|&(u, _)| u).collect()
    }

    /// True when the walk visits no vertex twice and has length at least 3.
    pub fn is_cycle(&self) -> bool {
        let vs = self.vertices();
        let mut sorted = vs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        vs.len() >= 3 && sorted.len() == vs.len()
    }
}

/// A set of faces of a fixed plane graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FaceSet(Vec<bool>);

impl FaceSet {
    pub fn contains(&self, f: usize) -> bool {
        self.0[f]
    }

    pub fn len(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.0.iter().any(|&b| b)
    }

    pub fn intersects(&self, other: &FaceSet) -> bool {
        self.0.iter().zip(&other.0).any(|(&a, &b)| a && b)
    }

    pub fn is_subset(&self, other: &FaceSet) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| !a || b)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }
}

/// Vertex partition induced by a cycle: strictly inside, strictly outside,
/// and on the cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionPartition {
    pub interior: Vec<Vertex>,
    pub exterior: Vec<Vertex>,
    pub boundary: Vec<Vertex>,
}

/// Graph without an embedding; the result of [`PlaneGraph::identify_neighbors`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractGraph {
    names: Vec<String>,
    adj: Vec<Vec<Vertex>>,
}

impl AbstractGraph {
    /// Builds a simple graph from an edge list, dropping loops and duplicates.
    pub fn from_edges(names: Vec<String>, edges: &[(Vertex, Vertex)]) -> Self {
        let mut adj = vec![Vec::new(); names.len()];
        for &(u, v) in edges {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        AbstractGraph { names, adj }
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

impl Adjacency for AbstractGraph {
    fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }
}

/// A connected simple graph with a planar rotation system and a designated
/// outer face. Immutable after construction.
#[derive(Clone, Debug)]
pub struct PlaneGraph {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    rotation: Vec<Vec<Vertex>>,
    dart_offset: Vec<usize>,
    twin: Vec<usize>,
    dart_face: Vec<usize>,
    faces: Vec<Face>,
    outer_face: usize,
}

impl PartialEq for PlaneGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.rotation == other.rotation
            && self.faces[self.outer_face] == other.faces[other.outer_face]
    }
}

impl Eq for PlaneGraph {}

impl Adjacency for PlaneGraph {
    fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.rotation[v]
    }
}

struct Traced {
    dart_offset: Vec<usize>,
    twin: Vec<usize>,
    dart_face: Vec<usize>,
    faces: Vec<Face>,
}

impl PlaneGraph {
    /// Builds a plane graph whose outer face is the face containing `outer`.
    /// `outer` may only be `None` for the one-vertex graph.
    pub fn with_outer_dart(
        names: Vec<String>,
        rotation: Vec<Vec<Vertex>>,
        outer: Option<Dart>,
    ) -> Result<Self, GraphError> {
        let traced = validate(&names, &rotation)?;
        let outer_face = match outer {
            None if traced.faces.len() == 1 && traced.faces[0].is_empty() => 0,
            None => {
                return Err(GraphError::OuterFace { walk: Vec::new() });
            }
            Some((u, v)) => {
                let p = rotation.get(u).and_then(|r| r.iter().position(|&w| w == v)).ok_or_else(|| {
                    GraphError::OuterFace {
                        walk: [u, v].iter().map(|&x| names.get(x).cloned().unwrap_or_default()).collect(),
                    }
                })?;
                traced.dart_face[traced.dart_offset[u] + p]
            }
        };
        Ok(Self::assemble(names, rotation, traced, outer_face))
    }

    /// Builds a plane graph whose outer face has the given boundary walk.
    /// The walk is matched cyclically in the traversal orientation first and
    /// reversed second.
    pub fn with_outer_walk(
        names: Vec<String>,
        rotation: Vec<Vec<Vertex>>,
        walk: &[Vertex],
    ) -> Result<Self, GraphError> {
        let traced = validate(&names, &rotation)?;
        let outer_face = find_face(&traced.faces, walk).ok_or_else(|| GraphError::OuterFace {
            walk: walk.iter().map(|&v| names.get(v).cloned().unwrap_or_default()).collect(),
        })?;
        Ok(Self::assemble(names, rotation, traced, outer_face))
    }

    fn assemble(names: Vec<String>, rotation: Vec<Vec<Vertex>>, t: Traced, outer_face: usize) -> Self {
        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        PlaneGraph {
            names,
            index,
            rotation,
            dart_offset: t.dart_offset,
            twin: t.twin,
            dart_face: t.dart_face,
            faces: t.faces,
            outer_face,
        }
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<Vertex> {
        self.index.get(name).copied()
    }

    /// Clockwise neighbour order around `v`.
    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        &self.rotation[v]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn outer_face(&self) -> usize {
        self.outer_face
    }

    fn dart_id(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.rotation.get(u)?.iter().position(|&w| w == v).map(|p| self.dart_offset[u] + p)
    }

    /// Face lying to the left of the dart `u -> v`.
    pub fn face_of_dart(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.dart_id(u, v).map(|d| self.dart_face[d])
    }

    /// Faces inside `c`: the faces not reachable from the outer face without
    /// crossing an edge of `c`.
    pub fn interior_faces(&self, c: &Cycle) -> Result<FaceSet, GraphError> {
        self.check_cycle(c)?;
        let nf = self.faces.len();
        let mut seen = vec![false; nf];
        let mut queue = VecDeque::from([self.outer_face]);
        seen[self.outer_face] = true;
        // Dual adjacency restricted to edges off the cycle.
        while let Some(f) = queue.pop_front() {
            for &(u, v) in self.faces[f].darts() {
                if c.has_edge(u, v) {
                    continue;
                }
                let d = self.dart_id(u, v).expect("face dart");
                let g = self.dart_face[self.twin[d]];
                if !seen[g] {
                    seen[g] = true;
                    queue.push_back(g);
                }
            }
        }
        let vs = c.vertices();
        let n = vs.len();
        let mut inside = 0;
        for i in 0..n {
            let (a, b) = (vs[i], vs[(i + 1) % n]);
            let fa = self.face_of_dart(a, b).expect("cycle dart");
            let fb = self.face_of_dart(b, a).expect("cycle dart");
            if seen[fa] == seen[fb] {
                return Err(GraphError::Inconsistent(format!(
                    "edge {}-{} has the outer region on both sides",
                    self.names[a], self.names[b]
                )));
            }
            inside += usize::from(!seen[fa]) + usize::from(!seen[fb]);
        }
        debug_assert_eq!(inside, n);
        Ok(FaceSet(seen.into_iter().map(|s| !s).collect()))
    }

    /// Splits the vertex set into the strict interior of `c`, its strict
    /// exterior and `c` itself.
    pub fn region_partition(&self, c: &Cycle) -> Result<RegionPartition, GraphError> {
        let inside = self.interior_faces(c)?;
        let mut part = RegionPartition { interior: Vec::new(), exterior: Vec::new(), boundary: c.vertices().to_vec() };
        part.boundary.sort_unstable();
        for v in 0..self.vertex_count() {
            if c.contains(v) {
                continue;
            }
            // All faces around an off-cycle vertex lie on one side.
            let f = self.dart_face[self.dart_offset[v]];
            if inside.contains(f) {
                part.interior.push(v);
            } else {
                part.exterior.push(v);
            }
        }
        Ok(part)
    }

    /// Whether the open interiors of two cycles cross: they overlap and
    /// neither contains the other. Regions sharing only boundary do not cross.
    pub fn crosses(&self, c1: &Cycle, c2: &Cycle) -> Result<bool, GraphError> {
        let a = self.interior_faces(c1)?;
        let b = self.interior_faces(c2)?;
        Ok(a.intersects(&b) && !a.is_subset(&b) && !b.is_subset(&a))
    }

    pub fn is_laminar(&self, family: &[Cycle]) -> Result<bool, GraphError> {
        let regions = family.iter().map(|c| self.interior_faces(c)).collect::<Result<Vec<_>, _>>()?;
        for i in 0..regions.len() {
            for j in i + 1..regions.len() {
                let (a, b) = (&regions[i], &regions[j]);
                if a.intersects(b) && !a.is_subset(b) && !b.is_subset(a) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The vertices of `c` in clockwise order (interior on the right),
    /// starting from the smallest vertex index.
    pub fn clockwise(&self, c: &Cycle) -> Result<Vec<Vertex>, GraphError> {
        let inside = self.interior_faces(c)?;
        let vs = c.vertices();
        let (a, b) = (vs[0], vs[1]);
        let f = self.face_of_dart(a, b).expect("cycle dart");
        // Faces lie to the left of darts, so a clockwise dart sees the
        // exterior on its left.
        if inside.contains(f) {
            let mut out = vec![vs[0]];
            out.extend(vs[1..].iter().rev());
            Ok(out)
        } else {
            Ok(vs.to_vec())
        }
    }

    /// `G_v`: delete `v`, merge its neighbours into one vertex and drop
    /// parallel edges. The merged vertex keeps the smallest neighbour's slot
    /// and a `+`-joined name.
    pub fn identify_neighbors(&self, v: Vertex) -> AbstractGraph {
        let nbrs = &self.rotation[v];
        let rep = nbrs.iter().copied().min();
        let mut map = vec![usize::MAX; self.vertex_count()];
        let mut names = Vec::new();
        for u in 0..self.vertex_count() {
            if u == v || (nbrs.contains(&u) && Some(u) != rep) {
                continue;
            }
            map[u] = names.len();
            if Some(u) == rep {
                let mut merged: Vec<&str> = nbrs.iter().map(|&w| self.name(w)).collect();
                merged.sort_unstable();
                names.push(merged.join("+"));
            } else {
                names.push(self.names[u].clone());
            }
        }
        if let Some(r) = rep {
            for &w in nbrs {
                map[w] = map[r];
            }
        }
        let edges: Vec<_> =
            self.edges().into_iter().filter(|&(a, b)| a != v && b != v).map(|(a, b)| (map[a], map[b])).collect();
        AbstractGraph::from_edges(names, &edges)
    }

    pub(crate) fn check_cycle(&self, c: &Cycle) -> Result<(), GraphError> {
        let vs = c.vertices();
        if vs.iter().any(|&v| v >= self.vertex_count()) {
            return Err(GraphError::NotACycle { reason: "vertex out of range".into() });
        }
        for (a, b) in c.edges() {
            if !self.has_edge(a, b) {
                return Err(GraphError::NotACycle {
                    reason: format!("{} and {} are not adjacent", self.names[a], self.names[b]),
                });
            }
        }
        Ok(())
    }

    /// The face matching a given cyclic vertex walk, in either direction.
    pub fn face_with_walk(&self, walk: &[Vertex]) -> Option<usize> {
        find_face(&self.faces, walk)
    }
}

fn find_face(faces: &[Face], walk: &[Vertex]) -> Option<usize> {
    let cyc_eq = |a: &[Vertex], b: &[Vertex]| {
        a.len() == b.len() && (a.is_empty() || (0..a.len()).any(|s| (0..a.len()).all(|i| a[(s + i) % a.len()] == b[i])))
    };
    let walk_or_single = |f: &Face| {
        if f.is_empty() {
            Vec::new()
        } else {
            f.vertices()
        }
    };
    // An edgeless graph accepts either [] or its single vertex.
    if faces.len() == 1 && faces[0].is_empty() && walk.len() <= 1 {
        return Some(0);
    }
    if let Some(i) = faces.iter().position(|f| cyc_eq(&walk_or_single(f), walk)) {
        return Some(i);
    }
    let rev: Vec<Vertex> = walk.iter().rev().copied().collect();
    faces.iter().position(|f| cyc_eq(&walk_or_single(f), &rev))
}

fn validate(names: &[String], rotation: &[Vec<Vertex>]) -> Result<Traced, GraphError> {
    let n = names.len();
    if n == 0 {
        return Err(GraphError::Empty);
    }
    if rotation.len() != n {
        return Err(GraphError::MissingRotation { vertex: names[rotation.len().min(n - 1)].clone() });
    }
    let name = |v: Vertex| names.get(v).cloned().unwrap_or_else(|| format!("#{v}"));
    let mut seen_names = std::collections::HashSet::new();
    for s in names {
        if !seen_names.insert(s) {
            return Err(GraphError::DuplicateVertex { vertex: s.clone() });
        }
    }
    for (v, rot) in rotation.iter().enumerate() {
        for (i, &u) in rot.iter().enumerate() {
            if u >= n {
                return Err(GraphError::UnknownVertex { vertex: name(u) });
            }
            if u == v {
                return Err(GraphError::SelfLoop { vertex: name(v) });
            }
            if rot[..i].contains(&u) {
                return Err(GraphError::RepeatedNeighbor { vertex: name(v), neighbor: name(u) });
            }
            if !rotation[u].contains(&v) {
                return Err(GraphError::Asymmetric { from: name(v), to: name(u) });
            }
        }
    }

    // Connectivity.
    let mut reached = vec![false; n];
    let mut queue = VecDeque::from([0]);
    reached[0] = true;
    while let Some(v) = queue.pop_front() {
        for &u in &rotation[v] {
            if !reached[u] {
                reached[u] = true;
                queue.push_back(u);
            }
        }
    }
    if let Some(v) = reached.iter().position(|&r| !r) {
        return Err(GraphError::Disconnected { vertex: name(v) });
    }

    let traced = trace_faces(rotation);
    let edges = traced.twin.len() / 2;
    let nf = traced.faces.len();
    if n as i64 - edges as i64 + nf as i64 != 2 {
        return Err(GraphError::Euler { vertices: n, edges, faces: nf });
    }
    Ok(traced)
}

fn trace_faces(rotation: &[Vec<Vertex>]) -> Traced {
    let n = rotation.len();
    let mut dart_offset = Vec::with_capacity(n + 1);
    let mut total = 0;
    for r in rotation {
        dart_offset.push(total);
        total += r.len();
    }
    let mut twin = vec![0; total];
    for u in 0..n {
        for (p, &v) in rotation[u].iter().enumerate() {
            let q = rotation[v].iter().position(|&w| w == u).expect("symmetric rotation");
            twin[dart_offset[u] + p] = dart_offset[v] + q;
        }
    }
    let mut head = vec![0; total];
    let mut tail = vec![0; total];
    for u in 0..n {
        for (p, &v) in rotation[u].iter().enumerate() {
            head[dart_offset[u] + p] = v;
            tail[dart_offset[u] + p] = u;
        }
    }
    let next = |d: usize| {
        let t = twin[d];
        let v = tail[t];
        let q = t - dart_offset[v];
        dart_offset[v] + (q + 1) % rotation[v].len()
    };
    let mut dart_face = vec![usize::MAX; total];
    let mut faces = Vec::new();
    for start in 0..total {
        if dart_face[start] != usize::MAX {
            continue;
        }
        let id = faces.len();
        let mut darts = Vec::new();
        let mut d = start;
        loop {
            dart_face[d] = id;
            darts.push((tail[d], head[d]));
            d = next(d);
            if d == start {
                break;
            }
        }
        faces.push(Face { darts });
    }
    if total == 0 {
        faces.push(Face { darts: Vec::new() });
    }
    Traced { dart_offset, twin, dart_face, faces }
}
