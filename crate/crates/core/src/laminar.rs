//! Laminar families of pentagons: extraction, the containment forest and
//! chain/antichain decomposition.

use serde::Serialize;
use thiserror::Error;

use crate::plane_graph::{
    enumerate_cycles, is_triangle_free, low_degree_set, Adjacency, Cycle, FaceSet, GraphError, PlaneGraph, Vertex,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaminarError {
    #[error("graph contains a triangle")]
    Triangle,
    #[error("family is not {0}")]
    WrongKind(FamilyKind),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("inconsistent extraction: {0}")]
    Inconsistent(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    General,
    Laminar,
    Chain,
    Antichain,
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FamilyKind::General => "general",
            FamilyKind::Laminar => "laminar",
            FamilyKind::Chain => "a chain",
            FamilyKind::Antichain => "an antichain",
        })
    }
}

/// Cycles of one host graph. Chains are listed from the outermost cycle
/// inwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleFamily {
    pub cycles: Vec<Cycle>,
    pub kind: FamilyKind,
}

impl CycleFamily {
    /// Checks that `cycles` really has the claimed kind.
    pub fn new(g: &PlaneGraph, cycles: Vec<Cycle>, kind: FamilyKind) -> Result<Self, LaminarError> {
        let regions = cycles.iter().map(|c| g.interior_faces(c)).collect::<Result<Vec<_>, _>>()?;
        let ok = match kind {
            FamilyKind::General => true,
            FamilyKind::Laminar => g.is_laminar(&cycles)?,
            FamilyKind::Chain => pairs(&regions).all(|(a, b)| a.is_subset(b) || b.is_subset(a)),
            FamilyKind::Antichain => pairs(&regions).all(|(a, b)| !a.intersects(b)),
        };
        if !ok {
            return Err(LaminarError::WrongKind(kind));
        }
        Ok(CycleFamily { cycles, kind })
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Cycles as lists of vertex names.
    pub fn names(&self, g: &PlaneGraph) -> Vec<Vec<String>> {
        self.cycles.iter().map(|c| c.vertices().iter().map(|&v| g.name(v).to_owned()).collect()).collect()
    }
}

fn pairs<T>(xs: &[T]) -> impl Iterator<Item = (&T, &T)> {
    (0..xs.len()).flat_map(move |i| (i + 1..xs.len()).map(move |j| (&xs[i], &xs[j])))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LaminarOutcome {
    /// A vertex of degree at most `k` whose `G_v` is triangle-free.
    Reducible { vertex: Vertex },
    /// A laminar family of pentagons through every vertex of degree at most
    /// `k` (listed in `covered`).
    Family { family: CycleFamily, covered: Vec<Vertex> },
}

/// Either a reducible low-degree vertex or a laminar family of pentagons
/// covering all low-degree vertices.
pub fn extract(g: &PlaneGraph, k: usize) -> Result<LaminarOutcome, LaminarError> {
    if !is_triangle_free(g) {
        return Err(LaminarError::Triangle);
    }
    let low = low_degree_set(g, k);
    if let Some(v) = first_reducible(g, &low) {
        return Ok(LaminarOutcome::Reducible { vertex: v });
    }
    let cycles = family_without_reducible(g, k)?;
    let family = CycleFamily::new(g, cycles, FamilyKind::Laminar)
        .map_err(|_| LaminarError::Inconsistent("merged family is not laminar".into()))?;
    for &v in &low {
        if !family.cycles.iter().any(|c| c.contains(v)) {
            return Err(LaminarError::Inconsistent(format!("vertex {} is not covered", g.name(v))));
        }
    }
    Ok(LaminarOutcome::Family { family, covered: low })
}

fn first_reducible(g: &PlaneGraph, low: &[Vertex]) -> Option<Vertex> {
    low.iter().copied().find(|&v| is_triangle_free(&g.identify_neighbors(v)))
}

/// Pentagons whose interior and exterior both contain vertices.
pub fn separating_pentagons(g: &PlaneGraph) -> Result<Vec<(Cycle, usize)>, GraphError> {
    let mut out = Vec::new();
    for c in enumerate_cycles(g, 5) {
        let part = g.region_partition(&c)?;
        if !part.interior.is_empty() && !part.exterior.is_empty() {
            out.push((c, part.interior.len()));
        }
    }
    Ok(out)
}

/// The family for a graph already known to have no reducible vertex.
fn family_without_reducible(g: &PlaneGraph, k: usize) -> Result<Vec<Cycle>, LaminarError> {
    let separating = separating_pentagons(g)?;
    let Some((c, _)) = separating.into_iter().min_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0))) else {
        return Ok(enumerate_cycles(g, 5));
    };
    let (inside, outside) = g.split_at(&c)?;
    let mut merged = Vec::new();
    for part in [&inside, &outside] {
        let low = low_degree_set(&part.graph, k);
        if let Some(v) = first_reducible(&part.graph, &low) {
            return Err(LaminarError::Inconsistent(format!(
                "vertex {} is reducible in a side of {:?} but not in the whole graph",
                part.graph.name(v),
                c.vertices().iter().map(|&u| g.name(u)).collect::<Vec<_>>()
            )));
        }
        for sub in family_without_reducible(&part.graph, k)? {
            merged.push(sub.map(|v| part.to_host(v)));
        }
    }
    merged.sort();
    merged.dedup();
    Ok(merged)
}

/// Containment order of a laminar family as a forest. `parent[i]` is the
/// smallest member strictly containing member `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContainmentForest {
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub roots: Vec<usize>,
    pub depth: Vec<usize>,
}

impl ContainmentForest {
    /// Members on a longest root-to-leaf path, root first.
    pub fn deepest_path(&self) -> Vec<usize> {
        let Some(leaf) = (0..self.depth.len()).max_by(|&a, &b| self.depth[a].cmp(&self.depth[b]).then(b.cmp(&a)))
        else {
            return Vec::new();
        };
        let mut path = vec![leaf];
        while let Some(p) = self.parent[*path.last().expect("non-empty")] {
            path.push(p);
        }
        path.reverse();
        path
    }

    /// A largest set of pairwise incomparable members.
    pub fn max_antichain(&self) -> Vec<usize> {
        fn best(f: &ContainmentForest, v: usize) -> Vec<usize> {
            let below: Vec<usize> = f.children[v].iter().flat_map(|&c| best(f, c)).collect();
            if below.is_empty() {
                vec![v]
            } else {
                below
            }
        }
        let mut out: Vec<usize> = self.roots.iter().flat_map(|&r| best(self, r)).collect();
        out.sort_unstable();
        out
    }
}

pub fn containment_forest(g: &PlaneGraph, fam: &CycleFamily) -> Result<ContainmentForest, LaminarError> {
    let regions: Vec<FaceSet> = fam.cycles.iter().map(|c| g.interior_faces(c)).collect::<Result<_, _>>()?;
    let m = regions.len();
    let mut parent = vec![None; m];
    for i in 0..m {
        parent[i] = (0..m)
            .filter(|&j| j != i && regions[i].is_subset(&regions[j]) && regions[i] != regions[j])
            .min_by_key(|&j| (regions[j].len(), j));
    }
    let mut children = vec![Vec::new(); m];
    let mut roots = Vec::new();
    for (i, p) in parent.iter().enumerate() {
        match p {
            Some(p) => children[*p].push(i),
            None => roots.push(i),
        }
    }
    let mut depth = vec![0; m];
    for i in 0..m {
        let mut d = 1;
        let mut cur = i;
        while let Some(p) = parent[cur] {
            d += 1;
            cur = p;
        }
        depth[i] = d;
    }
    Ok(ContainmentForest { parent, children, roots, depth })
}

/// A maximum chain and a maximum antichain of a laminar family.
pub fn dilworth_decompose(g: &PlaneGraph, fam: &CycleFamily) -> Result<(CycleFamily, CycleFamily), LaminarError> {
    if fam.kind != FamilyKind::Laminar && !g.is_laminar(&fam.cycles)? {
        return Err(LaminarError::WrongKind(FamilyKind::Laminar));
    }
    let forest = containment_forest(g, fam)?;
    let pick = |idx: Vec<usize>| idx.into_iter().map(|i| fam.cycles[i].clone()).collect::<Vec<_>>();
    let chain = CycleFamily::new(g, pick(forest.deepest_path()), FamilyKind::Chain)?;
    let antichain = CycleFamily::new(g, pick(forest.max_antichain()), FamilyKind::Antichain)?;
    Ok((chain, antichain))
}

/// Whether chain and antichain sizes meet the balancing inequalities for a
/// family of `m` members: `c·a ≥ m`, and `a ≥ √(6m/7)` or `c ≥ √(7m/6)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BalanceCheck {
    pub product: bool,
    pub antichain_large: bool,
    pub chain_large: bool,
}

impl BalanceCheck {
    pub fn new(chain: usize, antichain: usize, m: usize) -> Self {
        let (c, a, m) = (chain as u128, antichain as u128, m as u128);
        BalanceCheck { product: c * a >= m, antichain_large: 7 * a * a >= 6 * m, chain_large: 6 * c * c >= 7 * m }
    }

    pub fn holds(&self) -> bool {
        self.product && (self.antichain_large || self.chain_large)
    }
}

/// `(k − 1)·|D_k| ≥ (k − 3)·|V|`, the degree-counting bound for triangle-free
/// plane graphs of minimum degree at least two. `None` when it does not apply.
pub fn low_degree_bound(g: &PlaneGraph, k: usize) -> Option<bool> {
    let n = g.vertex_count();
    if k < 1 || n == 0 || (0..n).any(|v| g.degree(v) < 2) {
        return None;
    }
    let d = low_degree_set(g, k).len();
    Some((k as i128 - 1) * d as i128 >= (k as i128 - 3) * n as i128)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{dodecahedron, garden, pentagon_tower};

    #[test]
    fn pentagon_family() {
        let g = pentagon_tower(1);
        match extract(&g, 2).unwrap() {
            LaminarOutcome::Family { family, covered } => {
                assert_eq!(family.len(), 1);
                assert_eq!(covered.len(), 5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tower_family_is_a_chain() {
        let g = pentagon_tower(3);
        let LaminarOutcome::Family { family, .. } = extract(&g, 3).unwrap() else { panic!("reducible") };
        assert_eq!(family.len(), 3);
        let (chain, antichain) = dilworth_decompose(&g, &family).unwrap();
        assert_eq!((chain.len(), antichain.len()), (3, 1));
        assert_eq!(g.name(chain.cycles[0].vertices()[0]), "p0_0");
    }

    #[test]
    fn garden_family_is_an_antichain() {
        let g = garden(4);
        let LaminarOutcome::Family { family, .. } = extract(&g, 1).unwrap() else { panic!("reducible") };
        let (chain, antichain) = dilworth_decompose(&g, &family).unwrap();
        assert_eq!((family.len(), chain.len(), antichain.len()), (4, 1, 4));
    }

    #[test]
    fn dodecahedron_has_no_separating_pentagon() {
        let g = dodecahedron();
        assert!(separating_pentagons(&g).unwrap().is_empty());
        let LaminarOutcome::Family { family, covered } = extract(&g, 3).unwrap() else { panic!("reducible") };
        assert_eq!((family.len(), covered.len()), (12, 20));
    }

    #[test]
    fn kinds_are_checked() {
        let g = pentagon_tower(2);
        let all = enumerate_cycles(&g, 5);
        assert_eq!(all.len(), 2);
        assert!(CycleFamily::new(&g, all.clone(), FamilyKind::Chain).is_ok());
        assert_eq!(
            CycleFamily::new(&g, all, FamilyKind::Antichain).unwrap_err(),
            LaminarError::WrongKind(FamilyKind::Antichain)
        );
    }

    #[test]
    fn balance_arithmetic() {
        assert!(BalanceCheck::new(1, 5, 5).holds());
        assert!(BalanceCheck::new(2, 2, 4).holds());
        assert!(!BalanceCheck::new(1, 1, 2).product);
        assert!(BalanceCheck::new(0, 0, 0).holds());
    }
}
