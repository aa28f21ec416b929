use super::{Adjacency, Cycle, Dart, FaceSet, GraphError, PlaneGraph, Vertex};

/// A plane subgraph together with the host index of each of its vertices.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: PlaneGraph,
    pub origin: Vec<Vertex>,
}

impl Subgraph {
    pub fn to_host(&self, v: Vertex) -> Vertex {
        self.origin[v]
    }

    pub fn from_host(&self, v: Vertex) -> Option<Vertex> {
        self.origin.binary_search(&v).ok()
    }

    /// Maps a host cycle into the subgraph; `None` if any vertex is missing.
    pub fn cycle_from_host(&self, c: &Cycle) -> Option<Cycle> {
        let seq = c.vertices().iter().map(|&v| self.from_host(v)).collect::<Option<Vec<_>>>()?;
        Cycle::new(&self.graph, seq).ok()
    }
}

impl PlaneGraph {
    /// Both sides of the edge `u v` lie in `region`.
    fn edge_within(&self, region: &FaceSet, u: Vertex, v: Vertex) -> bool {
        let f = self.face_of_dart(u, v).expect("dart");
        let g = self.face_of_dart(v, u).expect("dart");
        region.contains(f) && region.contains(g)
    }

    /// Neither side of the edge `u v` lies in `region`.
    fn edge_outside(&self, region: &FaceSet, u: Vertex, v: Vertex) -> bool {
        let f = self.face_of_dart(u, v).expect("dart");
        let g = self.face_of_dart(v, u).expect("dart");
        !region.contains(f) && !region.contains(g)
    }

    /// A dart of `c` whose left face is outside the cycle.
    fn exterior_dart(&self, c: &Cycle, inside: &FaceSet) -> Dart {
        c.edges()
            .flat_map(|(a, b)| [(a, b), (b, a)])
            .find(|&(a, b)| !inside.contains(self.face_of_dart(a, b).expect("dart")))
            .expect("a cycle has an exterior side")
    }

    fn outer_dart(&self) -> Option<Dart> {
        self.faces()[self.outer_face()].darts().first().copied()
    }

    /// Subgraph on the kept vertices and edges with the inherited rotation.
    pub(crate) fn restrict(
        &self,
        keep: &[bool],
        keep_edge: impl Fn(Vertex, Vertex) -> bool,
        outer: Option<Dart>,
    ) -> Result<Subgraph, GraphError> {
        let origin: Vec<Vertex> = (0..self.vertex_count()).filter(|&v| keep[v]).collect();
        let mut new_id = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in origin.iter().enumerate() {
            new_id[v] = i;
        }
        let names = origin.iter().map(|&v| self.name(v).to_owned()).collect();
        let rotation = origin
            .iter()
            .map(|&u| self.rotation(u).iter().filter(|&&w| keep[w] && keep_edge(u, w)).map(|&w| new_id[w]).collect())
            .collect();
        let outer = match outer {
            Some((a, b)) if origin.len() > 1 => Some((new_id[a], new_id[b])),
            _ => None,
        };
        let graph = PlaneGraph::with_outer_dart(names, rotation, outer)?;
        Ok(Subgraph { graph, origin })
    }

    /// The part of the graph drawn in the closed annulus between `outer`
    /// and `inner`. The outer face of the result is bounded by `outer`.
    pub fn annulus_subgraph(&self, outer: &Cycle, inner: &Cycle) -> Result<Subgraph, GraphError> {
        if outer == inner {
            return Err(GraphError::NotNested);
        }
        let a = self.interior_faces(outer)?;
        let b = self.interior_faces(inner)?;
        if !b.is_subset(&a) {
            return Err(GraphError::NotNested);
        }
        let p1 = self.region_partition(outer)?;
        let p2 = self.region_partition(inner)?;
        let mut keep = vec![false; self.vertex_count()];
        for &v in p1.interior.iter().chain(outer.vertices()) {
            keep[v] = true;
        }
        for &v in &p2.interior {
            keep[v] = false;
        }
        let dart = self.exterior_dart(outer, &a);
        self.restrict(&keep, |u, v| !self.edge_within(&b, u, v) && !self.edge_outside(&a, u, v), Some(dart))
    }

    /// Splits along `c` into (closed inside, closed outside). The inside part
    /// has `c` as its outer face; the outside part keeps the original one.
    pub fn split_at(&self, c: &Cycle) -> Result<(Subgraph, Subgraph), GraphError> {
        let inside = self.interior_faces(c)?;
        let part = self.region_partition(c)?;
        let mut keep_in = vec![false; self.vertex_count()];
        let mut keep_out = vec![false; self.vertex_count()];
        for &v in &part.boundary {
            keep_in[v] = true;
            keep_out[v] = true;
        }
        for &v in &part.interior {
            keep_in[v] = true;
        }
        for &v in &part.exterior {
            keep_out[v] = true;
        }
        let g1 =
            self.restrict(&keep_in, |u, v| !self.edge_outside(&inside, u, v), Some(self.exterior_dart(c, &inside)))?;
        let g2 = self.restrict(&keep_out, |u, v| !self.edge_within(&inside, u, v), self.outer_dart())?;
        Ok((g1, g2))
    }

    /// Removes everything strictly inside each of the given cycles.
    pub fn delete_interiors(&self, cycles: &[Cycle]) -> Result<Subgraph, GraphError> {
        let mut keep = vec![true; self.vertex_count()];
        let mut regions = Vec::with_capacity(cycles.len());
        for c in cycles {
            for v in self.region_partition(c)?.interior {
                keep[v] = false;
            }
            regions.push(self.interior_faces(c)?);
        }
        self.restrict(&keep, |u, v| !regions.iter().any(|r| self.edge_within(r, u, v)), self.outer_dart())
    }
}
