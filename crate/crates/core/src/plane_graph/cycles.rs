use super::{Adjacency, GraphError, Vertex};

/// A cycle stored in canonical form: rotated to start at its smallest
/// vertex, oriented so that the second vertex is smaller than the last.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle(Vec<Vertex>);

impl Cycle {
    /// Validates `seq` as a cycle of `g` and canonicalises it.
    pub fn new<G: Adjacency + ?Sized>(g: &G, seq: Vec<Vertex>) -> Result<Self, GraphError> {
        if seq.len() < 3 {
            return Err(GraphError::NotACycle { reason: format!("length {} < 3", seq.len()) });
        }
        let mut sorted = seq.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != seq.len() {
            return Err(GraphError::NotACycle { reason: "repeated vertex".into() });
        }
        if let Some(&v) = seq.iter().find(|&&v| v >= g.vertex_count()) {
            return Err(GraphError::NotACycle { reason: format!("vertex index {v} out of range") });
        }
        for i in 0..seq.len() {
            let (a, b) = (seq[i], seq[(i + 1) % seq.len()]);
            if !g.has_edge(a, b) {
                return Err(GraphError::NotACycle { reason: format!("{a} and {b} are not adjacent") });
            }
        }
        Ok(Cycle(canonical(seq)))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    /// Consecutive pairs, including the closing pair.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| (self.0[i], self.0[(i + 1) % n]))
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.edges().any(|(x, y)| (x == a && y == b) || (x == b && y == a))
    }

    /// Re-expresses the cycle through a vertex map (for example from a
    /// subgraph back to its host).
    pub fn map(&self, f: impl Fn(Vertex) -> Vertex) -> Cycle {
        Cycle(canonical(self.0.iter().map(|&v| f(v)).collect()))
    }
}

fn canonical(mut seq: Vec<Vertex>) -> Vec<Vertex> {
    let start = seq.iter().enumerate().min_by_key(|(_, &v)| v).map(|(i, _)| i).unwrap_or(0);
    seq.rotate_left(start);
    if seq.len() > 2 && seq[1] > seq[seq.len() - 1] {
        seq[1..].reverse();
    }
    seq
}

/// All cycles of exactly `length` vertices, each reported once, sorted.
pub fn enumerate_cycles<G: Adjacency + ?Sized>(g: &G, length: usize) -> Vec<Cycle> {
    let mut out = Vec::new();
    if length < 3 {
        return out;
    }
    let mut path = Vec::with_capacity(length);
    let mut on_path = vec![false; g.vertex_count()];
    for s in 0..g.vertex_count() {
        path.push(s);
        on_path[s] = true;
        extend(g, length, &mut path, &mut on_path, &mut out);
        on_path[s] = false;
        path.pop();
    }
    out.sort();
    out
}

fn extend<G: Adjacency + ?Sized>(
    g: &G,
    length: usize,
    path: &mut Vec<Vertex>,
    on_path: &mut [bool],
    out: &mut Vec<Cycle>,
) {
    let s = path[0];
    let last = *path.last().unwrap();
    if path.len() == length {
        // Each cycle is found twice from its minimum; keep one orientation.
        if g.has_edge(last, s) && path[1] < last {
            out.push(Cycle(path.clone()));
        }
        return;
    }
    for &w in g.neighbors(last) {
        if w > s && !on_path[w] {
            path.push(w);
            on_path[w] = true;
            extend(g, length, path, on_path, out);
            on_path[w] = false;
            path.pop();
        }
    }
}
