//! Graph automorphism and isomorphism by individualization–refinement.
//!
//! The search keeps the first and the lexicographically best leaf of the
//! refinement tree; leaves equal to the first leaf yield automorphism
//! generators, and the best leaf is the canonical form. Branches are pruned
//! by orbits of the automorphisms discovered so far that fix the current
//! individualization prefix, which keeps the tree small on the very
//! symmetric graphs this crate cares about.

use serde::{Deserialize, Serialize};

use crate::bicoset::OrbitPartition;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, SimpleGraph};
use crate::perm::{Perm, PermGroup};

#[derive(Clone, Copy, Debug)]
pub struct AutConfig {
    /// Refuse graphs above this size; semisymmetry of the paper's largest
    /// graphs is out of scope for this module by design.
    pub max_vertices: usize,
}

impl Default for AutConfig {
    fn default() -> Self {
        AutConfig { max_vertices: 1000 }
    }
}

/// A graph with a vertex coloring, the refinement substrate.
#[derive(Clone, Debug)]
pub struct ColoredGraph {
    pub graph: SimpleGraph,
    pub colors: Vec<usize>,
}

impl ColoredGraph {
    pub fn uniform(graph: SimpleGraph) -> Self {
        let n = graph.n();
        ColoredGraph {
            graph,
            colors: vec![0; n],
        }
    }

    fn cells(&self) -> Vec<Vec<usize>> {
        let max = self.colors.iter().copied().max().unwrap_or(0);
        let mut cells = vec![Vec::new(); max + 1];
        for (v, &c) in self.colors.iter().enumerate() {
            cells[c].push(v);
        }
        cells.retain(|c| !c.is_empty());
        cells
    }
}

/// Coarsest equitable refinement: every color class ends up with a uniform
/// neighbor count into every class. Idempotent and deterministic.
pub fn refine(cg: &ColoredGraph) -> ColoredGraph {
    let cells = refine_cells(&cg.graph, cg.cells());
    ColoredGraph {
        graph: cg.graph.clone(),
        colors: colors_from_cells(cg.graph.n(), &cells),
    }
}

fn colors_from_cells(n: usize, cells: &[Vec<usize>]) -> Vec<usize> {
    let mut colors = vec![0; n];
    for (ci, cell) in cells.iter().enumerate() {
        for &v in cell {
            colors[v] = ci;
        }
    }
    colors
}

fn refine_cells(g: &SimpleGraph, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut counts = vec![0usize; n];
    'outer: loop {
        for s in 0..cells.len() {
            counts.iter_mut().for_each(|c| *c = 0);
            for &v in &cells[s] {
                for &w in g.neighbors(v) {
                    counts[w] += 1;
                }
            }
            let mut split_any = false;
            let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut groups: std::collections::BTreeMap<usize, Vec<usize>> =
                    std::collections::BTreeMap::new();
                for &v in cell {
                    groups.entry(counts[v]).or_default().push(v);
                }
                if groups.len() > 1 {
                    split_any = true;
                }
                for (_, group) in groups {
                    next.push(group);
                }
            }
            if split_any {
                cells = next;
                continue 'outer;
            }
        }
        return cells;
    }
}

struct Leaf {
    /// vertex -> canonical position
    positions: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

fn leaf_from_cells(g: &SimpleGraph, cells: &[Vec<usize>]) -> Leaf {
    let mut positions = vec![0; g.n()];
    for (i, cell) in cells.iter().enumerate() {
        positions[cell[0]] = i;
    }
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (positions[a], positions[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    edges.sort_unstable();
    Leaf { positions, edges }
}

struct Searcher<'a> {
    g: &'a SimpleGraph,
    first: Option<Leaf>,
    best: Option<Leaf>,
    autos: Vec<Perm>,
}

impl<'a> Searcher<'a> {
    fn run(g: &'a SimpleGraph, initial: Vec<Vec<usize>>) -> Searcher<'a> {
        let mut s = Searcher {
            g,
            first: None,
            best: None,
            autos: Vec::new(),
        };
        let mut prefix = Vec::new();
        s.explore(initial, &mut prefix);
        s
    }

    fn explore(&mut self, cells: Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
        let cells = refine_cells(self.g, cells);
        if cells.iter().all(|c| c.len() == 1) {
            self.process_leaf(&cells);
            return;
        }
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i)
            .expect("non-discrete partition has a non-singleton cell");
        let candidates = cells[target].clone();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &candidates {
            if !tried.is_empty() {
                let orbits = self.prefix_orbits(prefix);
                if tried.iter().any(|&t| orbits[t] == orbits[v]) {
                    continue;
                }
            }
            tried.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            for (i, cell) in cells.iter().enumerate() {
                if i == target {
                    child.push(vec![v]);
                    child.push(cell.iter().copied().filter(|&x| x != v).collect());
                } else {
                    child.push(cell.clone());
                }
            }
            prefix.push(v);
            self.explore(child, prefix);
            prefix.pop();
        }
    }

    /// Orbit labels of the subgroup of discovered automorphisms fixing the
    /// prefix pointwise.
    fn prefix_orbits(&self, prefix: &[usize]) -> Vec<usize> {
        let n = self.g.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for a in &self.autos {
            if prefix.iter().any(|&p| a.apply(p) != p) {
                continue;
            }
            for v in 0..n {
                let (ra, rb) = (find(&mut parent, v), find(&mut parent, a.apply(v)));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
        (0..n).map(|v| find(&mut parent, v)).collect()
    }

    fn process_leaf(&mut self, cells: &[Vec<usize>]) {
        let leaf = leaf_from_cells(self.g, cells);
        match &self.first {
            None => {
                self.best = Some(Leaf {
                    positions: leaf.positions.clone(),
                    edges: leaf.edges.clone(),
                });
                self.first = Some(leaf);
            }
            Some(first) => {
                if leaf.edges == first.edges {
                    // σ(v) = vertex occupying, in the first leaf, the
                    // position v has in this leaf.
                    let mut at_pos = vec![0; self.g.n()];
                    for (v, &p) in first.positions.iter().enumerate() {
                        at_pos[p] = v;
                    }
                    let images: Vec<usize> =
                        leaf.positions.iter().map(|&p| at_pos[p]).collect();
                    let sigma = Perm::from_images(images).expect("leaf labelings are bijections");
                    if !sigma.is_identity() && !self.autos.contains(&sigma) {
                        debug_assert!(is_automorphism(self.g, &sigma));
                        self.autos.push(sigma);
                    }
                }
                if leaf.edges < self.best.as_ref().expect("best set with first").edges {
                    self.best = Some(leaf);
                }
            }
        }
    }
}

pub fn is_automorphism(g: &SimpleGraph, sigma: &Perm) -> bool {
    g.edges()
        .iter()
        .all(|&(a, b)| g.has_edge(sigma.apply(a), sigma.apply(b)))
}

/// Automorphism-group result, including the orbit structure on vertices and
/// the number of edge orbits.
#[derive(Clone, Debug)]
pub struct AutResult {
    pub generators: Vec<Perm>,
    pub group_order: u128,
    pub orbit_partition: OrbitPartition,
    pub vertex_orbits: usize,
    pub edge_orbits: usize,
}

impl AutResult {
    fn from_generators(g: &SimpleGraph, generators: Vec<Perm>) -> AutResult {
        let group = PermGroup::from_generators(g.n(), generators.clone())
            .expect("automorphisms are permutations");
        let cells = group.orbits();
        let vertex_orbits = cells.len();
        let orbit_partition =
            OrbitPartition::new(g.n(), cells).expect("orbits partition the vertices");
        let edge_orbits = count_edge_orbits(g, &generators);
        AutResult {
            generators,
            group_order: group.order(),
            orbit_partition,
            vertex_orbits,
            edge_orbits,
        }
    }
}

fn count_edge_orbits(g: &SimpleGraph, gens: &[Perm]) -> usize {
    let edges = g.edges();
    let index: std::collections::HashMap<(usize, usize), usize> = edges
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, i))
        .collect();
    let mut parent: Vec<usize> = (0..edges.len()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for sigma in gens {
        for (i, &(a, b)) in edges.iter().enumerate() {
            let (x, y) = (sigma.apply(a), sigma.apply(b));
            let j = index[&(x.min(y), x.max(y))];
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri] = rj;
            }
        }
    }
    (0..edges.len())
        .map(|i| find(&mut parent, i))
        .collect::<std::collections::HashSet<_>>()
        .len()
}

fn check_size(g: &SimpleGraph, cfg: &AutConfig) -> Result<()> {
    if g.n() > cfg.max_vertices {
        return Err(Error::SizeLimit {
            vertices: g.n(),
            limit: cfg.max_vertices,
        });
    }
    Ok(())
}

/// Full automorphism group of a simple graph, optionally seeded with an
/// initial coloring that the automorphisms must respect.
pub fn automorphism_group(
    g: &SimpleGraph,
    initial_colors: Option<&[usize]>,
    cfg: &AutConfig,
) -> Result<AutResult> {
    check_size(g, cfg)?;
    let cells = match initial_colors {
        None => vec![(0..g.n()).collect::<Vec<usize>>()],
        Some(colors) => ColoredGraph {
            graph: g.clone(),
            colors: colors.to_vec(),
        }
        .cells(),
    };
    let searcher = Searcher::run(g, cells);
    Ok(AutResult::from_generators(g, searcher.autos))
}

/// Automorphisms of a bipartite graph; with `part_colors` the parts are held
/// fixed (the group called `A⁺`), without it the full group `A` is computed.
pub fn automorphism_group_bipartite(
    bg: &BipartiteGraph,
    part_colors: bool,
    cfg: &AutConfig,
) -> Result<AutResult> {
    let g = bg.to_simple();
    if part_colors {
        let colors: Vec<usize> = (0..g.n()).map(|v| usize::from(v >= bg.u_size())).collect();
        automorphism_group(&g, Some(&colors), cfg)
    } else {
        automorphism_group(&g, None, cfg)
    }
}

/// Canonical labeling (vertex → canonical position) of an uncolored graph.
pub fn canonical_labeling(g: &SimpleGraph, cfg: &AutConfig) -> Result<Perm> {
    check_size(g, cfg)?;
    let searcher = Searcher::run(g, vec![(0..g.n()).collect()]);
    let best = searcher.best.expect("every graph has at least one leaf");
    Ok(Perm::from_images(best.positions).expect("labeling is a bijection"))
}

/// Canonical form: the edge list of the canonically relabeled graph.
pub fn canonical_form(g: &SimpleGraph, cfg: &AutConfig) -> Result<Vec<(usize, usize)>> {
    let lab = canonical_labeling(g, cfg)?;
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (lab.apply(a), lab.apply(b));
            (x.min(y), x.max(y))
        })
        .collect();
    edges.sort_unstable();
    Ok(edges)
}

/// Isomorphism test by canonical-form equality; on success returns the
/// vertex mapping `g1 → g2`.
pub fn are_isomorphic(
    g1: &SimpleGraph,
    g2: &SimpleGraph,
    cfg: &AutConfig,
) -> Result<Option<Vec<usize>>> {
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() {
        return Ok(None);
    }
    let l1 = canonical_labeling(g1, cfg)?;
    let l2 = canonical_labeling(g2, cfg)?;
    let relabel = |g: &SimpleGraph, l: &Perm| {
        let mut edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (l.apply(a), l.apply(b));
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        edges
    };
    if relabel(g1, &l1) != relabel(g2, &l2) {
        return Ok(None);
    }
    let mapping: Vec<usize> = {
        let l2_inv = l2.inverse();
        (0..g1.n()).map(|v| l2_inv.apply(l1.apply(v))).collect()
    };
    debug_assert!(g1
        .edges()
        .iter()
        .all(|&(a, b)| g2.has_edge(mapping[a], mapping[b])));
    Ok(Some(mapping))
}

/// Whether the full automorphism group is transitive on vertices.
pub fn is_vertex_transitive(g: &SimpleGraph, cfg: &AutConfig) -> Result<bool> {
    Ok(automorphism_group(g, None, cfg)?.vertex_orbits == 1)
}

/// Why a graph fails to be semisymmetric.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum SemisymmetryWitness {
    /// Two vertices of different degree.
    NotRegular { a: usize, b: usize },
    /// The automorphism group has more than one edge orbit.
    EdgeOrbits(usize),
    /// An automorphism merging the parts (vertex-transitive direction).
    PartMerging { vertex_orbits: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum SemisymmetryDecision {
    Yes,
    No(SemisymmetryWitness),
}

impl SemisymmetryDecision {
    pub fn is_yes(&self) -> bool {
        matches!(self, SemisymmetryDecision::Yes)
    }
}

/// Decides semisymmetry: regular, one edge orbit, two vertex orbits (the
/// parts). Disconnected input is rejected.
pub fn is_semisymmetric(g: &SimpleGraph, cfg: &AutConfig) -> Result<SemisymmetryDecision> {
    if !g.is_connected() {
        return Err(Error::Disconnected(
            "semisymmetry is decided for connected graphs only".into(),
        ));
    }
    check_size(g, cfg)?;
    if g.is_regular().is_none() {
        let degrees: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
        let a = 0;
        let b = (1..g.n())
            .find(|&v| degrees[v] != degrees[0])
            .expect("irregular graph has a degree mismatch");
        return Ok(SemisymmetryDecision::No(SemisymmetryWitness::NotRegular {
            a,
            b,
        }));
    }
    let aut = automorphism_group(g, None, cfg)?;
    if aut.edge_orbits != 1 {
        return Ok(SemisymmetryDecision::No(SemisymmetryWitness::EdgeOrbits(
            aut.edge_orbits,
        )));
    }
    if aut.vertex_orbits != 2 {
        return Ok(SemisymmetryDecision::No(
            SemisymmetryWitness::PartMerging {
                vertex_orbits: aut.vertex_orbits,
            },
        ));
    }
    Ok(SemisymmetryDecision::Yes)
}

/// Wire format for automorphism results.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AutResultJson {
    pub order: u128,
    pub generators: Vec<Vec<usize>>,
    pub vertex_orbits: usize,
    pub edge_orbits: usize,
    pub part_swap: bool,
}

impl AutResultJson {
    pub fn new(aut: &AutResult, part_swap: bool) -> Self {
        AutResultJson {
            order: aut.group_order,
            generators: aut
                .generators
                .iter()
                .map(|p| p.images().to_vec())
                .collect(),
            vertex_orbits: aut.vertex_orbits,
            edge_orbits: aut.edge_orbits,
            part_swap,
        }
    }
}
