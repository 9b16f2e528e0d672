//! Colored dual graphs, isomorphism testing and the dual-graph search for
//! partitions built from cubes and nonahedra.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::cells::CellType;

/// Simple undirected graph with one color per vertex. Parallel adjacencies
/// are collapsed into one edge carrying a multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoredGraph {
    pub colors: Vec<CellType>,
    adj: Vec<BTreeSet<usize>>,
    weights: BTreeMap<(usize, usize), usize>,
}

impl ColoredGraph {
    pub fn new(colors: Vec<CellType>) -> Self {
        let n = colors.len();
        ColoredGraph {
            colors,
            adj: vec![BTreeSet::new(); n],
            weights: BTreeMap::new(),
        }
    }

    pub fn uniform(n: usize, color: CellType) -> Self {
        Self::new(vec![color; n])
    }

    /// Adds an edge, or bumps its multiplicity if present. Loops are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.adj[a].insert(b);
        self.adj[b].insert(a);
        *self.weights.entry((a.min(b), a.max(b))).or_insert(0) += 1;
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.weights.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn weight(&self, a: usize, b: usize) -> usize {
        self.weights.get(&(a.min(b), a.max(b))).copied().unwrap_or(0)
    }

    /// Edges with multiplicities, smaller endpoint first.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.weights.iter().map(|(e, w)| (*e, *w))
    }

    pub fn color_count(&self, c: CellType) -> usize {
        self.colors.iter().filter(|&&x| x == c).count()
    }

    /// Induced subgraph on `vs`, in that order.
    pub fn induced(&self, vs: &[usize]) -> ColoredGraph {
        let mut g = ColoredGraph::new(vs.iter().map(|&v| self.colors[v]).collect());
        for (i, &a) in vs.iter().enumerate() {
            for (j, &b) in vs.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        if self.n() == 0 {
            return true;
        }
        let mut seen = vec![false; self.n()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Induced subgraph on the neighbors of `v`.
pub fn ego_graph(g: &ColoredGraph, v: usize) -> ColoredGraph {
    let nb: Vec<usize> = g.neighbors(v).collect();
    g.induced(&nb)
}

pub fn complete(n: usize, color: CellType) -> ColoredGraph {
    let mut g = ColoredGraph::uniform(n, color);
    for a in 0..n {
        for b in a + 1..n {
            g.add_edge(a, b);
        }
    }
    g
}

pub fn cycle(n: usize, color: CellType) -> ColoredGraph {
    let mut g = ColoredGraph::uniform(n, color);
    for a in 0..n {
        g.add_edge(a, (a + 1) % n);
    }
    g
}

/// Complement of a perfect matching on `2k` vertices (the cocktail-party
/// graph); k = 3 is the octahedron graph.
pub fn matching_complement(k: usize, color: CellType) -> ColoredGraph {
    let mut g = ColoredGraph::uniform(2 * k, color);
    for a in 0..2 * k {
        for b in a + 1..2 * k {
            if b != a + k {
                g.add_edge(a, b);
            }
        }
    }
    g
}

/// Complete multipartite graph with the given part sizes.
pub fn complete_multipartite(parts: &[usize], color: CellType) -> ColoredGraph {
    let n: usize = parts.iter().sum();
    let mut part = Vec::with_capacity(n);
    for (i, &s) in parts.iter().enumerate() {
        part.extend(std::iter::repeat_n(i, s));
    }
    let mut g = ColoredGraph::uniform(n, color);
    for a in 0..n {
        for b in a + 1..n {
            if part[a] != part[b] {
                g.add_edge(a, b);
            }
        }
    }
    g
}

/// Vertex graph of the icosahedron.
pub fn icosahedral(color: CellType) -> ColoredGraph {
    // top, upper ring 1..=5, lower ring 6..=10, bottom 11
    let mut g = ColoredGraph::uniform(12, color);
    for i in 0..5 {
        let (u, un) = (1 + i, 1 + (i + 1) % 5);
        let (l, ln) = (6 + i, 6 + (i + 1) % 5);
        g.add_edge(0, u);
        g.add_edge(u, un);
        g.add_edge(u, l);
        g.add_edge(u, ln);
        g.add_edge(l, ln);
        g.add_edge(11, l);
    }
    g
}

/// Triangular bipyramid: a triangle in `base` color plus two apexes in
/// `apex` color adjacent to the triangle but not to each other.
pub fn triangular_bipyramid(base: CellType, apex: CellType) -> ColoredGraph {
    let mut g = ColoredGraph::new(vec![base, base, base, apex, apex]);
    for (a, b) in [(0, 1), (1, 2), (0, 2)] {
        g.add_edge(a, b);
    }
    for a in 0..3 {
        g.add_edge(a, 3);
        g.add_edge(a, 4);
    }
    g
}

/// Dual graph of a prism over a polyhedron with `k` faces: two hubs joined
/// to every rim vertex, rim vertices adjacent as in `rim`.
pub fn prism_dual(rim: &ColoredGraph, hub: CellType) -> ColoredGraph {
    let k = rim.n();
    let mut colors = vec![hub, hub];
    colors.extend(rim.colors.iter().copied());
    let mut g = ColoredGraph::new(colors);
    for i in 0..k {
        g.add_edge(0, 2 + i);
        g.add_edge(1, 2 + i);
    }
    for ((a, b), _) in rim.edges() {
        g.add_edge(2 + a, 2 + b);
    }
    g
}

fn refine(g: &ColoredGraph, h: &ColoredGraph, cg: &mut [usize], ch: &mut [usize]) -> bool {
    loop {
        let before = distinct(cg) + distinct(ch);
        let sig = |graph: &ColoredGraph, c: &[usize], v: usize| {
            let mut nb: Vec<usize> = graph.neighbors(v).map(|w| c[w]).collect();
            nb.sort_unstable();
            (c[v], nb)
        };
        let sg: Vec<_> = (0..g.n()).map(|v| sig(g, cg, v)).collect();
        let sh: Vec<_> = (0..h.n()).map(|v| sig(h, ch, v)).collect();
        let keys: BTreeSet<&(usize, Vec<usize>)> = sg.iter().chain(&sh).collect();
        let order: BTreeMap<&(usize, Vec<usize>), usize> = keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
        for v in 0..g.n() {
            cg[v] = order[&sg[v]];
        }
        for v in 0..h.n() {
            ch[v] = order[&sh[v]];
        }
        let mut hist_g = BTreeMap::new();
        let mut hist_h = BTreeMap::new();
        for &c in cg.iter() {
            *hist_g.entry(c).or_insert(0usize) += 1;
        }
        for &c in ch.iter() {
            *hist_h.entry(c).or_insert(0usize) += 1;
        }
        if hist_g != hist_h {
            return false;
        }
        if distinct(cg) + distinct(ch) == before {
            return true;
        }
    }
}

fn distinct(c: &[usize]) -> usize {
    c.iter().collect::<BTreeSet<_>>().len()
}

fn search(g: &ColoredGraph, h: &ColoredGraph, cg: Vec<usize>, ch: Vec<usize>) -> bool {
    let mut cg = cg;
    let mut ch = ch;
    if !refine(g, h, &mut cg, &mut ch) {
        return false;
    }
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in &cg {
        *count.entry(c).or_insert(0) += 1;
    }
    let target = count.iter().filter(|(_, &n)| n > 1).min_by_key(|(_, &n)| n).map(|(&c, _)| c);
    let Some(cls) = target else {
        // discrete partition: the bijection is forced, check it
        let mut map = vec![0; g.n()];
        for v in 0..g.n() {
            map[v] = ch.iter().position(|&c| c == cg[v]).expect("same histogram");
        }
        return (0..g.n()).all(|a| g.neighbors(a).all(|b| h.has_edge(map[a], map[b])));
    };
    let fresh = cg.iter().chain(&ch).max().copied().unwrap_or(0) + 1;
    let v = cg.iter().position(|&c| c == cls).expect("class member");
    let mut cg2 = cg.clone();
    cg2[v] = fresh;
    for w in (0..h.n()).filter(|&w| ch[w] == cls) {
        let mut ch2 = ch.clone();
        ch2[w] = fresh;
        if search(g, h, cg2.clone(), ch2) {
            return true;
        }
    }
    false
}

/// Color-preserving isomorphism test by color refinement with
/// individualization. Edge multiplicities are ignored.
pub fn is_isomorphic(g: &ColoredGraph, h: &ColoredGraph) -> bool {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut dg: Vec<(CellType, usize)> = (0..g.n()).map(|v| (g.colors[v], g.degree(v))).collect();
    let mut dh: Vec<(CellType, usize)> = (0..h.n()).map(|v| (h.colors[v], h.degree(v))).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    let cg = g.colors.iter().map(|c| c.index()).collect();
    let ch = h.colors.iter().map(|c| c.index()).collect();
    search(g, h, cg, ch)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("search budget of {0} nodes exceeded")]
    SearchBudgetExceeded(u64),
}

/// Ego graph at a cube (red) vertex: six nonahedra in an octahedron.
pub fn t9_red_pattern() -> ColoredGraph {
    matching_complement(3, CellType::C10)
}

/// Ego graph at a nonahedron (blue) vertex: three pairwise non-adjacent
/// cubes and six nonahedra forming a triangular prism (two triangles
/// joined by a matching); each of those nonahedra sees two of the cubes.
pub fn t9_blue_pattern() -> ColoredGraph {
    let (r, b) = (CellType::C6, CellType::C10);
    // 0..3 cubes, 3..9 nonahedra B1..B6
    let mut g = ColoredGraph::new(vec![r, r, r, b, b, b, b, b, b]);
    let bl = |i: usize| 3 + i;
    for i in 0..3 {
        g.add_edge(bl(i), bl((i + 1) % 3));
        g.add_edge(bl(3 + i), bl(3 + (i + 1) % 3));
        g.add_edge(bl(i), bl(3 + i));
        for j in (0..3).filter(|&j| j != i) {
            g.add_edge(j, bl(i));
            g.add_edge(j, bl(3 + i));
        }
    }
    g
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Adj {
    Unknown,
    Yes,
    No,
}

#[derive(Clone, Debug)]
struct State {
    colors: Vec<CellType>,
    adj: Vec<Vec<Adj>>,
    closed: Vec<bool>,
}

impl State {
    fn n(&self) -> usize {
        self.colors.len()
    }

    fn push(&mut self, c: CellType) -> usize {
        let n = self.n();
        for (i, row) in self.adj.iter_mut().enumerate() {
            row.push(if self.closed[i] { Adj::No } else { Adj::Unknown });
        }
        let mut row: Vec<Adj> = self.closed.iter().map(|&c| if c { Adj::No } else { Adj::Unknown }).collect();
        row.push(Adj::No);
        self.adj.push(row);
        self.colors.push(c);
        self.closed.push(false);
        n
    }

    fn set(&mut self, a: usize, b: usize, x: Adj) -> bool {
        match self.adj[a][b] {
            Adj::Unknown => {
                self.adj[a][b] = x;
                self.adj[b][a] = x;
                true
            }
            y => y == x,
        }
    }

    fn yes_count(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&x| x == Adj::Yes).count()
    }

    /// Key identifying the state up to relabeling of vertices created after
    /// `fixed`. Fresh vertices are ordered by a local signature and only ties
    /// are permuted; very large tie classes fall back to a single order, which
    /// can only leave duplicates, never merge distinct states.
    fn key(&self, fixed: usize) -> Vec<u8> {
        let n = self.n();
        let sig = |v: usize| {
            let mut own = vec![self.colors[v].index() as u8, self.closed[v] as u8];
            own.extend((0..fixed).map(|u| self.adj[v][u] as u8));
            let mut rest: Vec<(u8, u8)> =
                (fixed..n).filter(|&u| u != v).map(|u| (self.colors[u].index() as u8, self.adj[v][u] as u8)).collect();
            rest.sort_unstable();
            (own, rest)
        };
        let mut fresh: Vec<usize> = (fixed..n).collect();
        fresh.sort_by_key(|&v| sig(v));
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in &fresh {
            match classes.last_mut() {
                Some(c) if sig(c[0]) == sig(v) => c.push(v),
                _ => classes.push(vec![v]),
            }
        }
        let total: usize = classes.iter().map(|c| (1..=c.len()).product::<usize>()).product();
        let row = |v: usize, order: &[usize]| -> Vec<u8> {
            let mut r = vec![self.colors[v].index() as u8, self.closed[v] as u8];
            r.extend((0..fixed).map(|u| self.adj[v][u] as u8));
            r.extend(order.iter().map(|&u| self.adj[v][u] as u8));
            r
        };
        let encode = |order: &[usize]| {
            let mut k = Vec::new();
            for v in 0..fixed {
                k.extend(row(v, order));
            }
            for &v in order {
                k.extend(row(v, order));
            }
            k
        };
        if total > 5040 {
            return encode(&fresh);
        }
        let mut best: Option<Vec<u8>> = None;
        let mut order = Vec::with_capacity(fresh.len());
        class_orders(&classes, &mut order, &mut |o| {
            let k = encode(o);
            if best.as_ref().is_none_or(|b| k < *b) {
                best = Some(k);
            }
        });
        best.unwrap_or_default()
    }
}

fn class_orders(classes: &[Vec<usize>], prefix: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
    let Some((first, rest)) = classes.split_first() else {
        f(prefix);
        return;
    };
    permutations(first, &mut |p| {
        let len = prefix.len();
        prefix.extend_from_slice(p);
        class_orders(rest, prefix, f);
        prefix.truncate(len);
    });
}

fn permutations(items: &[usize], f: &mut dyn FnMut(&[usize])) {
    fn rec(cur: &mut Vec<usize>, rest: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if rest.is_empty() {
            f(cur);
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            rec(cur, rest, f);
            cur.pop();
            rest.insert(i, x);
        }
    }
    rec(&mut Vec::new(), &mut items.to_vec(), f);
}

/// Outcome of the dual-graph search.
#[derive(Clone, Debug, Serialize)]
pub struct UniquenessSearch {
    /// Solutions up to isomorphism.
    pub solutions: Vec<ColoredGraph>,
    pub nodes: u64,
    /// Branches abandoned for exceeding the vertex cap; zero means the search
    /// was exhaustive.
    pub capped: u64,
    pub vertex_cap: usize,
}

/// Search configuration.
#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    pub node_budget: u64,
    pub vertex_cap: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            node_budget: 100_000_000,
            vertex_cap: 60,
        }
    }
}

struct Searcher {
    red: ColoredGraph,
    blue: ColoredGraph,
    limits: SearchLimits,
    nodes: u64,
    capped: u64,
    found: Vec<ColoredGraph>,
}

impl Searcher {
    fn pattern(&self, c: CellType) -> &ColoredGraph {
        if c == CellType::C6 {
            &self.red
        } else {
            &self.blue
        }
    }

    fn run(&mut self, s: State) -> Result<(), GraphError> {
        self.nodes += 1;
        if self.nodes > self.limits.node_budget {
            return Err(GraphError::SearchBudgetExceeded(self.limits.node_budget));
        }
        if s.n() > self.limits.vertex_cap {
            self.capped += 1;
            return Ok(());
        }
        for v in 0..s.n() {
            if s.yes_count(v) > self.pattern(s.colors[v]).n() {
                return Ok(());
            }
        }
        let open = (0..s.n())
            .filter(|&v| !s.closed[v])
            .max_by_key(|&v| (s.yes_count(v), std::cmp::Reverse(v)));
        let Some(v) = open else {
            let mut g = ColoredGraph::new(s.colors.clone());
            for a in 0..s.n() {
                for b in a + 1..s.n() {
                    if s.adj[a][b] == Adj::Yes {
                        g.add_edge(a, b);
                    }
                }
            }
            if !self.found.iter().any(|h| is_isomorphic(h, &g)) {
                self.found.push(g);
            }
            return Ok(());
        };
        for child in self.close(&s, v) {
            self.run(child)?;
        }
        Ok(())
    }

    /// All ways to give `v` a neighborhood matching its pattern, up to
    /// relabeling of newly created vertices.
    fn close(&self, s: &State, v: usize) -> Vec<State> {
        let p = self.pattern(s.colors[v]).clone();
        let required: Vec<usize> = (0..s.n()).filter(|&u| s.adj[v][u] == Adj::Yes).collect();
        let candidates: Vec<usize> = (0..s.n()).filter(|&u| u != v && s.adj[v][u] != Adj::No).collect();
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        let mut map: Vec<Option<usize>> = vec![None; p.n()];
        let mut used = vec![false; s.n()];
        self.assign(s, v, &p, &required, &candidates, 0, &mut map, &mut used, &mut out, &mut seen);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn assign(
        &self,
        s: &State,
        v: usize,
        p: &ColoredGraph,
        required: &[usize],
        candidates: &[usize],
        i: usize,
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        out: &mut Vec<State>,
        seen: &mut HashSet<Vec<u8>>,
    ) {
        if i == p.n() {
            if required.iter().any(|&u| !used[u]) {
                return;
            }
            if let Some(child) = self.apply(s, v, p, map) {
                if seen.insert(child.key(s.n())) {
                    out.push(child);
                }
            }
            return;
        }
        // remaining pattern slots must be able to cover required vertices
        let missing = required.iter().filter(|&&u| !used[u]).count();
        if missing > p.n() - i {
            return;
        }
        let consistent = |u: usize, map: &[Option<usize>]| {
            (0..i).all(|j| match map[j] {
                Some(w) => {
                    let want = if p.has_edge(i, j) { Adj::Yes } else { Adj::No };
                    s.adj[u][w] == Adj::Unknown || s.adj[u][w] == want
                }
                None => true,
            })
        };
        for &u in candidates {
            if used[u] || s.colors[u] != p.colors[i] || !consistent(u, map) {
                continue;
            }
            used[u] = true;
            map[i] = Some(u);
            self.assign(s, v, p, required, candidates, i + 1, map, used, out, seen);
            used[u] = false;
        }
        map[i] = None;
        if missing < p.n() - i {
            self.assign(s, v, p, required, candidates, i + 1, map, used, out, seen);
        }
    }

    fn apply(&self, s: &State, v: usize, p: &ColoredGraph, map: &[Option<usize>]) -> Option<State> {
        let mut t = s.clone();
        let image: Vec<usize> = map
            .iter()
            .enumerate()
            .map(|(i, m)| match m {
                Some(u) => *u,
                None => t.push(p.colors[i]),
            })
            .collect();
        for &u in &image {
            if !t.set(v, u, Adj::Yes) {
                return None;
            }
        }
        for i in 0..image.len() {
            for j in i + 1..image.len() {
                let want = if p.has_edge(i, j) { Adj::Yes } else { Adj::No };
                if !t.set(image[i], image[j], want) {
                    return None;
                }
            }
        }
        for u in 0..t.n() {
            if u != v && t.adj[v][u] == Adj::Unknown {
                t.set(v, u, Adj::No);
            }
        }
        t.closed[v] = true;
        Some(t)
    }
}

/// Enumerates connected colored graphs in which every cube vertex has the
/// red pattern and every nonahedron vertex the blue pattern, starting from a
/// nonahedron.
pub fn t9_dual_uniqueness_search(limits: SearchLimits) -> Result<UniquenessSearch, GraphError> {
    let mut s = Searcher {
        red: t9_red_pattern(),
        blue: t9_blue_pattern(),
        limits,
        nodes: 0,
        capped: 0,
        found: Vec::new(),
    };
    let mut start = State {
        colors: Vec::new(),
        adj: Vec::new(),
        closed: Vec::new(),
    };
    start.push(CellType::C10);
    s.run(start)?;
    Ok(UniquenessSearch {
        solutions: s.found,
        nodes: s.nodes,
        capped: s.capped,
        vertex_cap: limits.vertex_cap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::t9_ansatz;

    const R: CellType = CellType::C6;
    const B: CellType = CellType::C10;

    fn shuffled(g: &ColoredGraph, seed: u64) -> ColoredGraph {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let mut colors = vec![R; g.n()];
        for v in 0..g.n() {
            colors[perm[v]] = g.colors[v];
        }
        let mut h = ColoredGraph::new(colors);
        for ((a, b), _) in g.edges() {
            h.add_edge(perm[a], perm[b]);
        }
        h
    }

    #[test]
    fn isomorphism_basics() {
        assert!(is_isomorphic(&complete(5, R), &complete(5, R)));
        assert!(!is_isomorphic(&complete(4, R), &cycle(4, R)));
        assert!(is_isomorphic(&matching_complement(4, R), &complete_multipartite(&[2, 2, 2, 2], R)));
        assert!(!is_isomorphic(&complete(3, R), &complete(3, B)));
        let ico = icosahedral(R);
        assert_eq!(ico.edge_count(), 30);
        assert!((0..12).all(|v| is_isomorphic(&ego_graph(&ico, v), &cycle(5, R))));
        for seed in 0..5 {
            assert!(is_isomorphic(&ico, &shuffled(&ico, seed)));
            let p = t9_blue_pattern();
            assert!(is_isomorphic(&p, &shuffled(&p, seed)));
        }
    }

    #[test]
    fn regular_graphs_with_equal_refinement() {
        // 6-cycle vs two triangles: both 2-regular, refinement cannot split
        let mut two = ColoredGraph::uniform(6, R);
        for (a, b) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)] {
            two.add_edge(a, b);
        }
        assert!(!is_isomorphic(&cycle(6, R), &two));
        assert!(is_isomorphic(&cycle(6, R), &shuffled(&cycle(6, R), 3)));
    }

    #[test]
    fn ego_graphs() {
        assert!(is_isomorphic(&ego_graph(&complete(5, R), 0), &complete(4, R)));
        let oct = matching_complement(4, R);
        assert!((0..8).all(|v| is_isomorphic(&ego_graph(&oct, v), &matching_complement(3, R))));
    }

    #[test]
    fn weights_accumulate() {
        let mut g = ColoredGraph::uniform(2, R);
        g.add_edge(0, 1);
        g.add_edge(1, 0);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.weight(0, 1), 2);
    }

    fn ansatz_dual() -> ColoredGraph {
        let a = t9_ansatz(0.7);
        let mut g = ColoredGraph::new((0..15).map(|c| if c < 5 { R } else { B }).collect());
        for f in &a.faces {
            g.add_edge(f.cells[0], f.cells[1]);
        }
        g
    }

    #[test]
    fn patterns_match_the_explicit_complex() {
        let g = ansatz_dual();
        for v in 0..15 {
            let want = if v < 5 { t9_red_pattern() } else { t9_blue_pattern() };
            assert!(is_isomorphic(&ego_graph(&g, v), &want), "vertex {v}");
        }
    }

    #[test]
    fn uniqueness_search_finds_one_graph() {
        let r = t9_dual_uniqueness_search(SearchLimits::default()).unwrap();
        assert_eq!(r.capped, 0);
        assert_eq!(r.solutions.len(), 1);
        let g = &r.solutions[0];
        assert_eq!(g.n(), 15);
        assert_eq!(g.color_count(R), 5);
        assert!(is_isomorphic(g, &ansatz_dual()));
        // every blue-blue edge lies in exactly one blue triangle whose
        // vertices share two red neighbours
        for ((a, b), _) in g.edges() {
            if g.colors[a] != B || g.colors[b] != B {
                continue;
            }
            let tri: Vec<usize> = (0..g.n())
                .filter(|&c| g.colors[c] == B && g.has_edge(a, c) && g.has_edge(b, c))
                .filter(|&c| {
                    (0..g.n())
                        .filter(|&r| g.colors[r] == R && [a, b, c].iter().all(|&x| g.has_edge(x, r)))
                        .count()
                        == 1
                })
                .collect();
            let common = (0..g.n()).filter(|&r| g.colors[r] == R && g.has_edge(a, r) && g.has_edge(b, r)).count();
            assert_eq!(common, 2);
            assert!(!tri.is_empty());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let r = t9_dual_uniqueness_search(SearchLimits {
            node_budget: 3,
            vertex_cap: 60,
        });
        assert_eq!(r.unwrap_err(), GraphError::SearchBudgetExceeded(3));
    }
}
