//! Exact counting and enumeration of perfect matchings.
//!
//! The counter is a backtracking search over the vertices in their fixed
//! row-major order with forced-edge propagation: whenever an uncovered
//! vertex has a single available edge left, that edge is taken before any
//! branching. All arithmetic is exact; weighted graphs accumulate rational
//! weights, unit graphs accumulate big integers.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::graph::DualGraph;

/// Cap on the number of matchings an enumeration call may produce.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CountError {
    #[error("enumeration exceeded the cap of {0} matchings")]
    CapExceeded(u64),
    #[error("graph has no symmetry map")]
    MissingSymmetry,
    #[error("edge ({0}, {1}) is its own symmetric partner; the orbit graph is not defined")]
    SelfSymmetricEdge(usize, usize),
    #[error("vertex {0} has no symmetric partner edge for edge {1}")]
    BrokenSymmetry(usize, usize),
}

/// A perfect matching, stored as the sorted edge-index set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    edges: Vec<usize>,
}

impl Matching {
    pub fn new(mut edges: Vec<usize>) -> Matching {
        edges.sort_unstable();
        Matching { edges }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Vertices covered by the matching.
    pub fn covered(&self, g: &DualGraph) -> Vec<bool> {
        let mut cov = vec![false; g.vertex_count()];
        for &e in &self.edges {
            let (u, v) = g.endpoints(e);
            cov[u] = true;
            cov[v] = true;
        }
        cov
    }

    pub fn weight(&self, g: &DualGraph) -> BigRational {
        let mut w = BigRational::one();
        for &e in &self.edges {
            w *= g.weight(e);
        }
        w
    }

    /// Checks the matching property and that exactly the vertices outside
    /// `missing` are covered.
    pub fn is_perfect_off(&self, g: &DualGraph, missing: &[usize]) -> bool {
        let mut deg = vec![0u32; g.vertex_count()];
        for &e in &self.edges {
            let (u, v) = g.endpoints(e);
            deg[u] += 1;
            deg[v] += 1;
        }
        deg.iter()
            .enumerate()
            .all(|(v, &d)| if missing.contains(&v) { d == 0 } else { d == 1 })
    }
}

struct Search<'g> {
    g: &'g DualGraph,
    covered: Vec<bool>,
    chosen: Vec<usize>,
    remaining: usize,
}

enum Forced {
    Take(usize, usize, usize), // vertex, neighbor, edge
    Dead,
    None,
}

impl<'g> Search<'g> {
    fn new(g: &'g DualGraph, removed: &[usize]) -> Search<'g> {
        let mut covered = vec![false; g.vertex_count()];
        for &v in removed {
            covered[v] = true;
        }
        let remaining = covered.iter().filter(|c| !**c).count();
        Search {
            g,
            covered,
            chosen: Vec::new(),
            remaining,
        }
    }

    fn find_forced(&self) -> Forced {
        for v in 0..self.covered.len() {
            if self.covered[v] {
                continue;
            }
            let mut found = None;
            let mut count = 0;
            for &(u, e) in self.g.adjacency(v) {
                if !self.covered[u] {
                    count += 1;
                    if count > 1 {
                        break;
                    }
                    found = Some((u, e));
                }
            }
            match (count, found) {
                (0, _) => return Forced::Dead,
                (1, Some((u, e))) => return Forced::Take(v, u, e),
                _ => {}
            }
        }
        Forced::None
    }

    /// Runs forced-edge propagation. Returns the trail of covered pairs, or
    /// `None` if a vertex ran out of edges (dead end).
    fn propagate(&mut self) -> Option<Vec<(usize, usize)>> {
        let mut trail = Vec::new();
        loop {
            match self.find_forced() {
                Forced::Dead => {
                    self.unwind(&trail);
                    return None;
                }
                Forced::Take(v, u, e) => {
                    self.covered[v] = true;
                    self.covered[u] = true;
                    self.remaining -= 2;
                    self.chosen.push(e);
                    trail.push((v, u));
                }
                Forced::None => return Some(trail),
            }
        }
    }

    fn unwind(&mut self, trail: &[(usize, usize)]) {
        for &(v, u) in trail.iter().rev() {
            self.covered[v] = false;
            self.covered[u] = false;
            self.remaining += 2;
            self.chosen.pop();
        }
    }

    fn first_uncovered(&self) -> Option<usize> {
        self.covered.iter().position(|c| !c)
    }
}

/// Visits every perfect matching of `g` with the vertices in `removed`
/// deleted. The visitor returns `false` to stop early. Returns whether the
/// walk ran to completion.
fn visit_matchings(
    g: &DualGraph,
    removed: &[usize],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let mut search = Search::new(g, removed);
    if search.remaining % 2 == 1 {
        return true;
    }
    fn rec(s: &mut Search, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let Some(trail) = s.propagate() else {
            return true;
        };
        let go_on = if s.remaining == 0 {
            visit(&s.chosen)
        } else {
            let v = s.first_uncovered().unwrap();
            s.covered[v] = true;
            s.remaining -= 1;
            let mut go_on = true;
            let nbrs: Vec<(usize, usize)> = s.g.adjacency(v).to_vec();
            for (u, e) in nbrs {
                if s.covered[u] {
                    continue;
                }
                s.covered[u] = true;
                s.remaining -= 1;
                s.chosen.push(e);
                go_on = rec(s, visit);
                s.chosen.pop();
                s.covered[u] = false;
                s.remaining += 1;
                if !go_on {
                    break;
                }
            }
            s.covered[v] = false;
            s.remaining += 1;
            go_on
        };
        s.unwind(&trail);
        go_on
    }
    rec(&mut search, visit)
}

/// Total weight of the perfect matchings of `g` minus `removed`. With unit
/// weights this is the number of matchings; it is zero when none exist.
pub fn count_matchings_without(g: &DualGraph, removed: &[usize]) -> BigRational {
    if g.unit_weights() {
        let mut n = BigUint::zero();
        visit_matchings(g, removed, &mut |_| {
            n += 1u32;
            true
        });
        BigRational::from_integer(n.into())
    } else {
        let mut total = BigRational::zero();
        visit_matchings(g, removed, &mut |edges| {
            let mut w = BigRational::one();
            for &e in edges {
                w *= g.weight(e);
            }
            total += w;
            true
        });
        total
    }
}

pub fn count_matchings(g: &DualGraph) -> BigRational {
    count_matchings_without(g, &[])
}

/// Every perfect matching of `g` minus `removed`, at most `cap` of them.
pub fn enumerate_matchings_without(
    g: &DualGraph,
    removed: &[usize],
    cap: u64,
) -> Result<Vec<Matching>, CountError> {
    let mut out = Vec::new();
    let complete = visit_matchings(g, removed, &mut |edges| {
        if out.len() as u64 >= cap {
            return false;
        }
        out.push(Matching::new(edges.to_vec()));
        true
    });
    if complete {
        Ok(out)
    } else {
        Err(CountError::CapExceeded(cap))
    }
}

pub fn enumerate_matchings(g: &DualGraph, cap: u64) -> Result<Vec<Matching>, CountError> {
    enumerate_matchings_without(g, &[], cap)
}

/// Visits the centrally symmetric perfect matchings. The search works over
/// orbits of edges under the symmetry: choosing an edge forces its partner
/// edge, so cost scales with the half system. The removed set must be closed
/// under the symmetry.
fn visit_symmetric(
    g: &DualGraph,
    removed: &[usize],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<bool, CountError> {
    if !g.has_symmetry() {
        return Err(CountError::MissingSymmetry);
    }
    let sig: Vec<usize> = (0..g.vertex_count())
        .map(|v| g.partner(v).unwrap())
        .collect();
    let mut covered = vec![false; g.vertex_count()];
    for &v in removed {
        covered[v] = true;
    }
    let remaining = covered.iter().filter(|c| !**c).count();
    if remaining % 2 == 1 {
        return Ok(true);
    }

    struct Ctx<'a> {
        g: &'a DualGraph,
        sig: &'a [usize],
        covered: Vec<bool>,
        remaining: usize,
        chosen: Vec<usize>,
    }

    fn forced(ctx: &Ctx) -> Forced {
        for v in 0..ctx.covered.len() {
            if ctx.covered[v] {
                continue;
            }
            let mut found = None;
            let mut count = 0;
            for &(u, e) in ctx.g.adjacency(v) {
                if !ctx.covered[u] {
                    count += 1;
                    if count > 1 {
                        break;
                    }
                    found = Some((u, e));
                }
            }
            match (count, found) {
                (0, _) => return Forced::Dead,
                (1, Some((u, e))) => return Forced::Take(v, u, e),
                _ => {}
            }
        }
        Forced::None
    }

    /// Covers the symmetric closure of edge (v, u). Returns the number of
    /// vertices covered (2 for a self-symmetric edge, 4 otherwise), or None
    /// on a conflict with already-covered vertices.
    fn take(ctx: &mut Ctx, v: usize, u: usize, e: usize) -> Result<Option<usize>, CountError> {
        let (sv, su) = (ctx.sig[v], ctx.sig[u]);
        if u == sv {
            ctx.covered[v] = true;
            ctx.covered[u] = true;
            ctx.chosen.push(e);
            return Ok(Some(2));
        }
        if ctx.covered[sv] || ctx.covered[su] {
            return Ok(None);
        }
        let se = ctx
            .g
            .find_edge(sv, su)
            .ok_or(CountError::BrokenSymmetry(sv, e))?;
        ctx.covered[v] = true;
        ctx.covered[u] = true;
        ctx.covered[sv] = true;
        ctx.covered[su] = true;
        ctx.chosen.push(e);
        ctx.chosen.push(se);
        Ok(Some(4))
    }

    fn untake(ctx: &mut Ctx, v: usize, u: usize, n: usize) {
        ctx.chosen.pop();
        if n == 4 {
            ctx.chosen.pop();
            ctx.covered[ctx.sig[v]] = false;
            ctx.covered[ctx.sig[u]] = false;
        }
        ctx.covered[v] = false;
        ctx.covered[u] = false;
    }

    fn rec(ctx: &mut Ctx, visit: &mut dyn FnMut(&[usize]) -> bool) -> Result<bool, CountError> {
        // forced propagation with symmetric closure
        let mut trail: Vec<(usize, usize, usize)> = Vec::new();
        let mut dead = false;
        loop {
            match forced(ctx) {
                Forced::Dead => {
                    dead = true;
                    break;
                }
                Forced::Take(v, u, e) => match take(ctx, v, u, e)? {
                    Some(n) => {
                        ctx.remaining -= n;
                        trail.push((v, u, n));
                    }
                    None => {
                        dead = true;
                        break;
                    }
                },
                Forced::None => break,
            }
        }
        let mut go_on = true;
        if !dead {
            if ctx.remaining == 0 {
                go_on = visit(&ctx.chosen);
            } else {
                let v = ctx.covered.iter().position(|c| !c).unwrap();
                let nbrs: Vec<(usize, usize)> = ctx.g.adjacency(v).to_vec();
                for (u, e) in nbrs {
                    if ctx.covered[u] {
                        continue;
                    }
                    if let Some(n) = take(ctx, v, u, e)? {
                        ctx.remaining -= n;
                        go_on = rec(ctx, visit)?;
                        ctx.remaining += n;
                        untake(ctx, v, u, n);
                        if !go_on {
                            break;
                        }
                    }
                }
            }
        }
        for &(v, u, n) in trail.iter().rev() {
            ctx.remaining += n;
            untake(ctx, v, u, n);
        }
        Ok(go_on)
    }

    let mut ctx = Ctx {
        g,
        sig: &sig,
        covered,
        remaining,
        chosen: Vec::new(),
    };
    let r = rec(&mut ctx, visit);
    debug_assert!(ctx.chosen.is_empty());
    r
}

/// Total weight of the centrally symmetric perfect matchings of `g` minus
/// `removed` (which must be symmetry-closed).
pub fn count_symmetric_matchings_without(
    g: &DualGraph,
    removed: &[usize],
) -> Result<BigRational, CountError> {
    let mut total = BigRational::zero();
    let mut n = BigUint::zero();
    let unit = g.unit_weights();
    visit_symmetric(g, removed, &mut |edges| {
        if unit {
            n += 1u32;
        } else {
            let mut w = BigRational::one();
            for &e in edges {
                w *= g.weight(e);
            }
            total += w;
        }
        true
    })?;
    if unit {
        Ok(BigRational::from_integer(n.into()))
    } else {
        Ok(total)
    }
}

pub fn count_symmetric_matchings(g: &DualGraph) -> Result<BigRational, CountError> {
    count_symmetric_matchings_without(g, &[])
}

/// The centrally symmetric perfect matchings themselves, at most `cap`.
pub fn enumerate_symmetric_matchings_without(
    g: &DualGraph,
    removed: &[usize],
    cap: u64,
) -> Result<Vec<Matching>, CountError> {
    let mut out = Vec::new();
    let complete = visit_symmetric(g, removed, &mut |edges| {
        if out.len() as u64 >= cap {
            return false;
        }
        out.push(Matching::new(edges.to_vec()));
        true
    })?;
    if complete {
        Ok(out)
    } else {
        Err(CountError::CapExceeded(cap))
    }
}

/// One centrally symmetric perfect matching, if any exists.
pub fn sample_symmetric_matching(g: &DualGraph) -> Result<Option<Matching>, CountError> {
    let mut out = None;
    visit_symmetric(g, &[], &mut |edges| {
        out = Some(Matching::new(edges.to_vec()));
        false
    })?;
    Ok(out)
}

/// The orbit graph of a centrally symmetric graph: one vertex per symmetry
/// orbit of vertices and one edge per orbit of edges, weights preserved.
/// Perfect matchings of the orbit graph correspond to the centrally
/// symmetric perfect matchings of the original (checked by the
/// `count_matchings(orbit) == count_symmetric_matchings(g)` invariant for
/// unit weights). Fails if an edge is its own partner.
pub fn orbit_graph(g: &DualGraph) -> Result<(DualGraph, Vec<usize>), CountError> {
    if !g.has_symmetry() {
        return Err(CountError::MissingSymmetry);
    }
    let n = g.vertex_count();
    let mut orbit_of = vec![usize::MAX; n];
    let mut next = 0usize;
    for v in 0..n {
        if orbit_of[v] == usize::MAX {
            orbit_of[v] = next;
            orbit_of[g.partner(v).unwrap()] = next;
            next += 1;
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut edges = Vec::new();
    for (e, &(u, v, ref w)) in g.edges().iter().enumerate() {
        if g.partner(u) == Some(v) {
            return Err(CountError::SelfSymmetricEdge(u, v));
        }
        let se = g.partner_edge(e).ok_or(CountError::BrokenSymmetry(u, e))?;
        debug_assert_eq!(g.weight(se), w);
        let (a, b) = (orbit_of[u].min(orbit_of[v]), orbit_of[u].max(orbit_of[v]));
        if seen.insert((a, b)) {
            edges.push((a, b, w.clone()));
        }
    }
    let orbit = DualGraph::new(next, None, None, edges).expect("orbit graph is well formed");
    Ok((orbit, orbit_of))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::{build_hexagon, carve_bowtie, carve_disconnected_bowtie};
    use num_bigint::BigInt;

    fn int(n: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn hexagon_graph(x: u32, y: u32, z: u32) -> DualGraph {
        DualGraph::from_region(&build_hexagon(x, y, z))
    }

    #[test]
    fn unit_hexagon_has_two_tilings() {
        assert_eq!(count_matchings(&hexagon_graph(1, 1, 1)), int(2));
    }

    #[test]
    fn hexagon_222_has_twenty_tilings() {
        assert_eq!(count_matchings(&hexagon_graph(2, 2, 2)), int(20));
    }

    #[test]
    fn hexagon_333() {
        assert_eq!(count_matchings(&hexagon_graph(3, 3, 3)), int(980));
    }

    #[test]
    fn parallelogram_has_one_tiling() {
        assert_eq!(count_matchings(&hexagon_graph(0, 3, 4)), int(1));
    }

    #[test]
    fn odd_vertex_count_gives_zero() {
        let g = DualGraph::new(3, None, None, vec![(0, 1, int(1)), (1, 2, int(1))]).unwrap();
        assert_eq!(count_matchings(&g), int(0));
    }

    #[test]
    fn enumeration_matches_count() {
        let g = hexagon_graph(2, 2, 2);
        let all = enumerate_matchings(&g, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(all.len(), 20);
        let unique: std::collections::BTreeSet<_> = all.iter().collect();
        assert_eq!(unique.len(), 20);
        for m in &all {
            assert!(m.is_perfect_off(&g, &[]));
        }
    }

    #[test]
    fn six_cycle_has_two_matchings() {
        let g = hexagon_graph(1, 1, 1);
        assert_eq!(enumerate_matchings(&g, 10).unwrap().len(), 2);
    }

    #[test]
    fn single_edge_has_one_matching() {
        let g = DualGraph::new(2, None, None, vec![(0, 1, int(1))]).unwrap();
        assert_eq!(enumerate_matchings(&g, 10).unwrap().len(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let g = hexagon_graph(2, 2, 2);
        assert_eq!(enumerate_matchings(&g, 5), Err(CountError::CapExceeded(5)));
    }

    #[test]
    fn symmetric_counts() {
        assert_eq!(
            count_symmetric_matchings(&hexagon_graph(2, 2, 2)).unwrap(),
            int(4)
        );
        // all three side lengths odd: no centrally symmetric tilings
        assert_eq!(
            count_symmetric_matchings(&hexagon_graph(1, 1, 1)).unwrap(),
            int(0)
        );
        assert_eq!(
            count_symmetric_matchings(&hexagon_graph(3, 3, 3)).unwrap(),
            int(0)
        );
    }

    #[test]
    fn symmetric_count_needs_symmetry() {
        let g = DualGraph::new(2, None, None, vec![(0, 1, int(1))]).unwrap();
        assert_eq!(
            count_symmetric_matchings(&g),
            Err(CountError::MissingSymmetry)
        );
    }

    #[test]
    fn symmetric_enumeration_agrees_with_filter() {
        let g = hexagon_graph(2, 2, 2);
        let sym = enumerate_symmetric_matchings_without(&g, &[], 1000).unwrap();
        assert_eq!(sym.len(), 4);
        // cross-check: filter the full enumeration through the symmetry
        let all = enumerate_matchings(&g, 1000).unwrap();
        let filtered = all
            .iter()
            .filter(|m| {
                let img: std::collections::BTreeSet<usize> = m
                    .edges()
                    .iter()
                    .map(|&e| g.partner_edge(e).unwrap())
                    .collect();
                img == m.edges().iter().copied().collect()
            })
            .count();
        assert_eq!(filtered, 4);
    }

    #[test]
    fn orbit_graph_of_hexagon_222() {
        let g = hexagon_graph(2, 2, 2);
        let (orbit, orbit_of) = orbit_graph(&g).unwrap();
        assert_eq!(orbit.vertex_count(), 12);
        assert_eq!(orbit_of.len(), 24);
        assert_eq!(count_matchings(&orbit), int(4));
    }

    #[test]
    fn orbit_graph_of_bowtie_2222() {
        let g = DualGraph::from_region(&carve_bowtie(2, 2, 2, 2).unwrap());
        let (orbit, _) = orbit_graph(&g).unwrap();
        assert_eq!(orbit.vertex_count(), 8);
    }

    #[test]
    fn orbit_graph_rejects_self_symmetric_edges() {
        let g = DualGraph::from_region(&carve_disconnected_bowtie(2, 1, 2, 1).unwrap());
        assert!(matches!(
            orbit_graph(&g),
            Err(CountError::SelfSymmetricEdge(..))
        ));
    }

    #[test]
    fn orbit_count_equals_symmetric_count() {
        for (x, y, z, k) in [(2, 2, 2, 0), (4, 2, 2, 2), (3, 3, 3, 1), (2, 4, 2, 0)] {
            let g = DualGraph::from_region(&carve_bowtie(x, y, z, k).unwrap());
            let (orbit, _) = orbit_graph(&g).unwrap();
            assert_eq!(
                count_matchings(&orbit),
                count_symmetric_matchings(&g).unwrap(),
                "mismatch at {:?}",
                (x, y, z, k)
            );
        }
    }

    #[test]
    fn weighted_six_cycle() {
        let r = build_hexagon(1, 1, 1);
        let mut g = DualGraph::from_region(&r);
        // weight one edge 3/7; of the two matchings, one uses it
        g.set_weight(0, BigRational::new(BigInt::from(3), BigInt::from(7)));
        let total = count_matchings(&g);
        assert_eq!(
            total,
            int(1) + BigRational::new(BigInt::from(3), BigInt::from(7))
        );
    }

    #[test]
    fn count_is_invariant_under_relabeling() {
        // reverse the vertex order of the dual of H(2,1,2)
        let r = build_hexagon(2, 1, 2);
        let g = DualGraph::from_region(&r);
        let n = g.vertex_count();
        let relabeled: Vec<_> = g
            .edges()
            .iter()
            .map(|(u, v, w)| (n - 1 - u, n - 1 - v, w.clone()))
            .collect();
        let g2 = DualGraph::new(n, None, None, relabeled).unwrap();
        assert_eq!(count_matchings(&g), count_matchings(&g2));
    }

    #[test]
    fn forced_edge_propagation_preserves_counts() {
        // deleting a degree-1 vertex and its neighbor leaves the count
        // unchanged for unit weights
        let r = carve_bowtie(3, 3, 3, 1).unwrap();
        let g = DualGraph::from_region(&r);
        let deg1 = (0..g.vertex_count()).find(|&v| g.adjacency(v).len() == 1);
        if let Some(v) = deg1 {
            let (u, _) = g.adjacency(v)[0];
            assert_eq!(count_matchings(&g), count_matchings_without(&g, &[v, u]));
        }
    }
}
