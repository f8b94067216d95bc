//! Superposition of two matchings: overlaying a matching of `G \ S` with a
//! matching of `G \ T` (for disjoint vertex sets `S`, `T`) decomposes the
//! edge multiset into doubled edges, alternating cycles, and alternating
//! paths whose endpoints are exactly `S ∪ T`.

use thiserror::Error;

use crate::count::Matching;
use crate::graph::DualGraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SuperposeError {
    #[error("input is not a matching: vertex {0} is covered twice")]
    NotAMatching(usize),
    #[error("the two matchings miss overlapping vertex sets (vertex {0})")]
    OverlappingGaps(usize),
    #[error("vertex {0} is not an endpoint of any path")]
    NotAPathEndpoint(usize),
}

/// Which of the two superposed matchings an edge belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

impl Side {
    fn flipped(self) -> Side {
        match self {
            Side::First => Side::Second,
            Side::Second => Side::First,
        }
    }
}

/// An alternating path of the superposition. Edges alternate strictly
/// between the two source matchings.
#[derive(Debug, Clone)]
pub struct AltPath {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, Side)>,
}

impl AltPath {
    pub fn endpoints(&self) -> (usize, usize) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }

    pub fn has_endpoint(&self, v: usize) -> bool {
        let (a, b) = self.endpoints();
        a == v || b == v
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// The decomposition of two overlaid matchings.
#[derive(Debug, Clone)]
pub struct Superposition {
    /// Edges present in both matchings.
    pub doubled: Vec<usize>,
    /// Alternating cycles (vertex cycles, length ≥ 4 edges).
    pub cycles: Vec<Vec<usize>>,
    /// Alternating paths; their endpoints are the vertices covered by
    /// exactly one of the two matchings.
    pub paths: Vec<AltPath>,
}

impl Superposition {
    /// The path having `v` as an endpoint, if any.
    pub fn path_at(&self, v: usize) -> Option<&AltPath> {
        self.paths.iter().find(|p| p.has_endpoint(v))
    }

    /// Every vertex of the graph lies in exactly one of: a doubled edge, a
    /// cycle, a path, or the uncovered set of both matchings.
    pub fn covers_partition(&self, g: &DualGraph, missing: &[usize]) -> bool {
        let mut seen = vec![0u32; g.vertex_count()];
        for &e in &self.doubled {
            let (u, v) = g.endpoints(e);
            seen[u] += 1;
            seen[v] += 1;
        }
        for c in &self.cycles {
            for &v in c {
                seen[v] += 1;
            }
        }
        for p in &self.paths {
            for &v in &p.vertices {
                seen[v] += 1;
            }
        }
        seen.iter()
            .enumerate()
            .all(|(v, &s)| if missing.contains(&v) { s == 0 } else { s == 1 })
    }
}

/// Superpose `mu` (a matching of `G` minus some vertex set) with `nu` (a
/// matching of `G` minus a disjoint vertex set).
pub fn superpose(
    g: &DualGraph,
    mu: &Matching,
    nu: &Matching,
) -> Result<Superposition, SuperposeError> {
    let n = g.vertex_count();
    let cover_mu = cover_of(g, mu)?;
    let cover_nu = cover_of(g, nu)?;
    // the two matchings must miss disjoint vertex sets
    for v in 0..n {
        if cover_mu[v].is_none() && cover_nu[v].is_none() && !g.adjacency(v).is_empty() {
            return Err(SuperposeError::OverlappingGaps(v));
        }
    }

    let mu_set: std::collections::BTreeSet<usize> = mu.edges().iter().copied().collect();
    let nu_set: std::collections::BTreeSet<usize> = nu.edges().iter().copied().collect();
    let doubled: Vec<usize> = mu_set.intersection(&nu_set).copied().collect();

    // incidence of the symmetric difference
    let mut inc: Vec<Vec<(usize, Side)>> = vec![Vec::new(); n];
    for &e in mu_set.difference(&nu_set) {
        let (u, v) = g.endpoints(e);
        inc[u].push((e, Side::First));
        inc[v].push((e, Side::First));
    }
    for &e in nu_set.difference(&mu_set) {
        let (u, v) = g.endpoints(e);
        inc[u].push((e, Side::Second));
        inc[v].push((e, Side::Second));
    }

    // path endpoints: vertices covered by exactly one matching
    let odd: Vec<usize> = (0..n)
        .filter(|&v| cover_mu[v].is_some() != cover_nu[v].is_some())
        .collect();
    debug_assert!(odd.iter().all(|&v| inc[v].len() == 1));

    let mut used = vec![false; g.edge_count()];
    let mut paths = Vec::new();
    for &start in &odd {
        let (e0, _) = inc[start][0];
        if used[e0] {
            continue;
        }
        let mut vertices = vec![start];
        let mut edges = Vec::new();
        let mut cur = start;
        loop {
            let next = inc[cur].iter().find(|(e, _)| !used[*e]);
            let Some(&(e, side)) = next else { break };
            used[e] = true;
            edges.push((e, side));
            let (a, b) = g.endpoints(e);
            cur = if a == cur { b } else { a };
            vertices.push(cur);
        }
        debug_assert!(edges.windows(2).all(|w| w[0].1 == w[1].1.flipped()));
        paths.push(AltPath { vertices, edges });
    }

    // remaining degree-2 vertices form cycles
    let mut cycles = Vec::new();
    for v in 0..n {
        if let Some(&(e0, _)) = inc[v].iter().find(|(e, _)| !used[*e]) {
            let mut cycle = vec![v];
            let mut cur = v;
            let mut e = e0;
            loop {
                used[e] = true;
                let (a, b) = g.endpoints(e);
                cur = if a == cur { b } else { a };
                if cur == v {
                    break;
                }
                cycle.push(cur);
                e = inc[cur]
                    .iter()
                    .find(|(ee, _)| !used[*ee])
                    .expect("cycle walk broke")
                    .0;
            }
            cycles.push(cycle);
        }
    }

    Ok(Superposition {
        doubled,
        cycles,
        paths,
    })
}

fn cover_of(g: &DualGraph, m: &Matching) -> Result<Vec<Option<usize>>, SuperposeError> {
    let mut cover = vec![None; g.vertex_count()];
    for &e in m.edges() {
        let (u, v) = g.endpoints(e);
        for w in [u, v] {
            if cover[w].is_some() {
                return Err(SuperposeError::NotAMatching(w));
            }
            cover[w] = Some(e);
        }
    }
    Ok(cover)
}

/// Exchange the edges of the path containing `d` between the two matchings.
/// The result covers `d` (and the other endpoint) with the opposite
/// matching; applying the map twice returns the original pair, and the
/// product of the two matchings' weights is unchanged.
pub fn shift_along_path(
    g: &DualGraph,
    sup: &Superposition,
    mu: &Matching,
    nu: &Matching,
    d: usize,
) -> Result<(Matching, Matching), SuperposeError> {
    let path = sup.path_at(d).ok_or(SuperposeError::NotAPathEndpoint(d))?;
    let mut mu_set: std::collections::BTreeSet<usize> = mu.edges().iter().copied().collect();
    let mut nu_set: std::collections::BTreeSet<usize> = nu.edges().iter().copied().collect();
    for &(e, side) in &path.edges {
        match side {
            Side::First => {
                mu_set.remove(&e);
                nu_set.insert(e);
            }
            Side::Second => {
                nu_set.remove(&e);
                mu_set.insert(e);
            }
        }
    }
    let _ = g;
    Ok((
        Matching::new(mu_set.into_iter().collect()),
        Matching::new(nu_set.into_iter().collect()),
    ))
}
