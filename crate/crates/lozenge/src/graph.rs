//! The matching substrate: a bipartite weighted graph, usually the planar
//! dual of a lattice region (one vertex per unit triangle, one edge per
//! shared unit edge).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cell::{Orientation, TriCell};
use crate::region::Region;

/// Vertex color class. For region duals, up triangles are black and down
/// triangles white.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Color {
    Black,
    White,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) joins two vertices of the same color")]
    NotBipartite(usize, usize),
    #[error("partner map is not a fixed-point-free involution at vertex {0}")]
    BadPartner(usize),
    #[error("edge ({0}, {1}) has no symmetric partner edge of equal weight")]
    AsymmetricEdge(usize, usize),
    #[error("vertex index {0} out of range")]
    VertexRange(usize),
    #[error("the graph carries no planar embedding")]
    NoEmbedding,
}

/// A bipartite graph with exact rational edge weights, an optional
/// fixed-point-free symmetry (the `partner` map), and, when built from a
/// region, a planar embedding derived from the cells.
#[derive(Debug, Clone)]
pub struct DualGraph {
    colors: Option<Vec<Color>>,
    partner: Option<Vec<usize>>,
    cells: Option<Vec<TriCell>>,
    edges: Vec<(usize, usize, BigRational)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl DualGraph {
    /// Build a graph from explicit parts, checking the structural
    /// invariants: bipartiteness when colors are given, and, when a partner
    /// map is given, that it is a fixed-point-free involution under which the
    /// edge set is closed with equal weights.
    pub fn new(
        vertex_count: usize,
        colors: Option<Vec<Color>>,
        partner: Option<Vec<usize>>,
        edges: Vec<(usize, usize, BigRational)>,
    ) -> Result<DualGraph, GraphError> {
        if let Some(cs) = &colors {
            assert_eq!(cs.len(), vertex_count);
            for &(u, v, _) in &edges {
                if cs[u] == cs[v] {
                    return Err(GraphError::NotBipartite(u, v));
                }
            }
        }
        if let Some(p) = &partner {
            assert_eq!(p.len(), vertex_count);
            for v in 0..vertex_count {
                if p[v] >= vertex_count || p[v] == v || p[p[v]] != v {
                    return Err(GraphError::BadPartner(v));
                }
            }
            let by_pair: BTreeMap<(usize, usize), &BigRational> = edges
                .iter()
                .map(|(u, v, w)| ((*u.min(v), *u.max(v)), w))
                .collect();
            for &(u, v, ref w) in &edges {
                let (su, sv) = (p[u], p[v]);
                let key = (su.min(sv), su.max(sv));
                match by_pair.get(&key) {
                    Some(sw) if *sw == w => {}
                    _ => return Err(GraphError::AsymmetricEdge(u, v)),
                }
            }
        }
        for &(u, v, _) in &edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(GraphError::VertexRange(u.max(v)));
            }
        }
        Ok(DualGraph::assemble(
            colors,
            partner,
            None,
            edges,
            vertex_count,
        ))
    }

    fn assemble(
        colors: Option<Vec<Color>>,
        partner: Option<Vec<usize>>,
        cells: Option<Vec<TriCell>>,
        edges: Vec<(usize, usize, BigRational)>,
        n: usize,
    ) -> DualGraph {
        let mut adj = vec![Vec::new(); n];
        for (e, &(u, v, _)) in edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        DualGraph {
            colors,
            partner,
            cells,
            edges,
            adj,
        }
    }

    /// The planar dual of a region: one vertex per cell in row-major order,
    /// one unit-weight edge per pair of edge-adjacent cells, the symmetry
    /// inherited from the region's center.
    pub fn from_region(region: &Region) -> DualGraph {
        let cells = region.cells_sorted();
        let index: BTreeMap<TriCell, usize> =
            cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let colors = cells
            .iter()
            .map(|c| match c.orient {
                Orientation::Up => Color::Black,
                Orientation::Down => Color::White,
            })
            .collect();
        let mut edges = Vec::new();
        for (v, cell) in cells.iter().enumerate() {
            for n in cell.neighbors() {
                if let Some(&u) = index.get(&n) {
                    if v < u {
                        edges.push((v, u, BigRational::one()));
                    }
                }
            }
        }
        let partner = region.center2().map(|c2| {
            cells
                .iter()
                .map(|c| index[&c.rotated180(c2)])
                .collect::<Vec<_>>()
        });
        let n = cells.len();
        DualGraph::assemble(Some(colors), partner, Some(cells), edges, n)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, BigRational)] {
        &self.edges
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        (self.edges[edge].0, self.edges[edge].1)
    }

    pub fn weight(&self, edge: usize) -> &BigRational {
        &self.edges[edge].2
    }

    pub fn set_weight(&mut self, edge: usize, weight: BigRational) {
        self.edges[edge].2 = weight;
    }

    /// Neighbors of `v` as `(neighbor, edge index)` pairs.
    pub fn adjacency(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn color(&self, v: usize) -> Option<Color> {
        self.colors.as_ref().map(|c| c[v])
    }

    pub fn has_colors(&self) -> bool {
        self.colors.is_some()
    }

    pub fn partner(&self, v: usize) -> Option<usize> {
        self.partner.as_ref().map(|p| p[v])
    }

    pub fn has_symmetry(&self) -> bool {
        self.partner.is_some()
    }

    /// The symmetric partner of an edge, when symmetry is present. May be
    /// the edge itself: a region whose center lies on a lattice edge has one
    /// self-symmetric dual edge crossing that segment.
    pub fn partner_edge(&self, edge: usize) -> Option<usize> {
        let p = self.partner.as_ref()?;
        let (u, v, _) = &self.edges[edge];
        let (su, sv) = (p[*u], p[*v]);
        self.find_edge(su, sv)
    }

    pub fn find_edge(&self, u: usize, v: usize) -> Option<usize> {
        self.adj[u].iter().find(|(n, _)| *n == v).map(|(_, e)| *e)
    }

    pub fn cell(&self, v: usize) -> Option<TriCell> {
        self.cells.as_ref().map(|c| c[v])
    }

    pub fn cells(&self) -> Option<&[TriCell]> {
        self.cells.as_deref()
    }

    pub fn vertex_of_cell(&self, cell: &TriCell) -> Option<usize> {
        let cells = self.cells.as_ref()?;
        cells.binary_search(cell).ok()
    }

    pub fn unit_weights(&self) -> bool {
        self.edges.iter().all(|(_, _, w)| w.is_one())
    }

    /// Faces of the planar embedding, traced from the rotation system the
    /// cells induce. Only available for graphs built from a region.
    pub fn trace_faces(&self) -> Result<FaceSet, GraphError> {
        let cells = self.cells.as_ref().ok_or(GraphError::NoEmbedding)?;
        // Rotation system: neighbors in counterclockwise order around each
        // cell. For an up triangle the neighbors below, right and left come
        // in that ccw order; mirrored for down triangles.
        let rotation: Vec<Vec<(usize, usize)>> = (0..self.vertex_count())
            .map(|v| {
                let c = cells[v];
                let order = c.neighbors();
                order
                    .iter()
                    .filter_map(|n| {
                        self.vertex_of_cell(n)
                            .map(|u| (u, self.find_edge(v, u).unwrap()))
                    })
                    .collect()
            })
            .collect();
        let pos_in_rotation = |v: usize, e: usize| -> usize {
            rotation[v].iter().position(|&(_, ee)| ee == e).unwrap()
        };

        // Trace faces over directed edges: after arriving at v along e, leave
        // by the edge before e in v's rotation (clockwise step), which walks
        // each face once.
        let mut visited: BTreeMap<(usize, usize), bool> = BTreeMap::new();
        for &(u, v, _) in &self.edges {
            visited.insert((u, v), false);
            visited.insert((v, u), false);
        }
        let mut faces = Vec::new();
        let keys: Vec<(usize, usize)> = visited.keys().copied().collect();
        for start in keys {
            if visited[&start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut half = start;
            loop {
                visited.insert(half, true);
                let (u, v) = half;
                cycle.push(u);
                let e = self.find_edge(u, v).unwrap();
                let p = pos_in_rotation(v, e);
                let deg = rotation[v].len();
                let (w, _) = rotation[v][(p + deg - 1) % deg];
                half = (v, w);
                if half == start {
                    break;
                }
            }
            faces.push(cycle);
        }

        // Outer faces are the ones traced clockwise: nonpositive signed area
        // of the centroid polygon (zero for tree-like components, whose one
        // face walks out and back). A connected graph has one outer face;
        // degenerate regions can fall apart into several components, each
        // contributing one.
        let mut outer = Vec::new();
        for (i, f) in faces.iter().enumerate() {
            let mut area2 = 0i64;
            for t in 0..f.len() {
                let p = cells[f[t]].centroid6();
                let q = cells[f[(t + 1) % f.len()]].centroid6();
                area2 += p.0 * q.1 - q.0 * p.1;
            }
            if area2 <= 0 {
                outer.push(i);
            }
        }
        assert!(!outer.is_empty() || faces.is_empty(), "no outer face found");
        Ok(FaceSet { faces, outer })
    }
}

/// The faces of an embedded dual graph, each a cyclic vertex sequence.
/// `outer` lists the outward-facing cycles, one per connected component.
#[derive(Debug, Clone)]
pub struct FaceSet {
    pub faces: Vec<Vec<usize>>,
    pub outer: Vec<usize>,
}

impl FaceSet {
    /// The outer cycle of a connected graph.
    pub fn outer_cycle(&self) -> &[usize] {
        &self.faces[self.outer[0]]
    }

    pub fn outer_cycles(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.outer.iter().map(move |&i| &self.faces[i])
    }

    pub fn inner(&self) -> impl Iterator<Item = (usize, &Vec<usize>)> {
        self.faces
            .iter()
            .enumerate()
            .filter(move |(i, _)| !self.outer.contains(i))
    }

    /// The inner face whose centroid polygon strictly contains the given
    /// point (in sixfold axial coordinates). Interior lattice vertices give
    /// hexagonal faces containing their center; holes give longer faces
    /// containing the hole.
    pub fn face_containing(&self, g: &DualGraph, point6: (i64, i64)) -> Option<usize> {
        let cells = g.cells()?;
        for (i, face) in self.inner() {
            if polygon_contains(
                &face
                    .iter()
                    .map(|&v| cells[v].centroid6())
                    .collect::<Vec<_>>(),
                point6,
            ) {
                return Some(i);
            }
        }
        None
    }
}

/// Winding-number point-in-polygon test on integer coordinates. Points on
/// the boundary count as outside; the callers only probe face centers, which
/// are strictly interior.
fn polygon_contains(poly: &[(i64, i64)], p: (i64, i64)) -> bool {
    let mut winding = 0i64;
    for t in 0..poly.len() {
        let a = poly[t];
        let b = poly[(t + 1) % poly.len()];
        let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
        if a.1 <= p.1 {
            if b.1 > p.1 && cross > 0 {
                winding += 1;
            }
        } else if b.1 <= p.1 && cross < 0 {
            winding -= 1;
        }
    }
    winding != 0
}

/// Serialized form of a graph, including the embedding when present.
#[derive(Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    /// `[u, v, weight numerator, weight denominator]`
    pub edges: Vec<(usize, usize, String, String)>,
    pub outer_face: Option<Vec<usize>>,
    pub faces: Option<Vec<NamedFace>>,
}

#[derive(Serialize, Deserialize)]
pub struct VertexJson {
    pub color: Option<Color>,
    pub partner: Option<usize>,
}

#[derive(Serialize, Deserialize)]
pub struct NamedFace {
    pub name: Option<String>,
    pub cycle: Vec<usize>,
}

impl GraphJson {
    pub fn from_graph(g: &DualGraph) -> GraphJson {
        let faces = g.trace_faces().ok();
        GraphJson {
            vertices: (0..g.vertex_count())
                .map(|v| VertexJson {
                    color: g.color(v),
                    partner: g.partner(v),
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|(u, v, w)| (*u, *v, w.numer().to_string(), w.denom().to_string()))
                .collect(),
            outer_face: faces.as_ref().map(|f| f.outer_cycle().to_vec()),
            faces: faces.as_ref().map(|f| {
                f.inner()
                    .map(|(_, cycle)| NamedFace {
                        name: None,
                        cycle: cycle.clone(),
                    })
                    .collect()
            }),
        }
    }

    pub fn into_graph(self) -> Result<DualGraph, GraphError> {
        let n = self.vertices.len();
        let colors: Option<Vec<Color>> = self
            .vertices
            .iter()
            .map(|v| v.color)
            .collect::<Option<Vec<_>>>();
        let partner: Option<Vec<usize>> = self
            .vertices
            .iter()
            .map(|v| v.partner)
            .collect::<Option<Vec<_>>>();
        let edges = self
            .edges
            .into_iter()
            .map(|(u, v, num, den)| {
                let w = BigRational::new(
                    num.parse::<BigInt>().expect("bad numerator"),
                    den.parse::<BigInt>().expect("bad denominator"),
                );
                (u, v, w)
            })
            .collect();
        DualGraph::new(n, colors, partner, edges)
    }
}
