use std::collections::{BTreeSet, VecDeque};
use std::path::Path;

use crate::error::{domain, Error, Result};

/// Simple undirected graph: symmetric adjacency, no self-loops, no parallel
/// edges. Neighbour lists are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(vertex_count: usize) -> Self {
        Graph { adjacency: vec![Vec::new(); vertex_count] }
    }

    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(vertex_count);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.vertex_count();
        if u >= n || v >= n {
            return domain(format!("edge ({u}, {v}) references a vertex outside 0..{n}"));
        }
        if u == v {
            return domain(format!("self-loop at vertex {u}"));
        }
        match self.adjacency[u].binary_search(&v) {
            Ok(_) => return domain(format!("duplicate edge ({u}, {v})")),
            Err(pos) => self.adjacency[u].insert(pos, v),
        }
        let pos = self.adjacency[v].binary_search(&u).unwrap_err();
        self.adjacency[v].insert(pos, u);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Each edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// `Some(D)` when every vertex has degree `D`.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = self.adjacency.first()?.len();
        self.adjacency.iter().all(|n| n.len() == first).then_some(first)
    }
}

/// The `n`-cycle `0 - 1 - ... - (n-1) - 0`.
pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return domain(format!("cycle needs at least 3 vertices, got {n}"));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

/// Builds a cubic graph from LCF notation: a Hamiltonian cycle on
/// `shifts.len() * repeats` vertices plus the chord `i -> i + shift`.
pub fn lcf_graph(shifts: &[i64], repeats: usize) -> Result<Graph> {
    let n = shifts.len() * repeats;
    let mut g = cycle_graph(n)?;
    for i in 0..n {
        let shift = shifts[i % shifts.len()];
        let j = (i as i64 + shift).rem_euclid(n as i64) as usize;
        // Each chord is listed from both ends; add it once.
        if !g.neighbors(i).contains(&j) {
            g.add_edge(i, j)?;
        }
    }
    Ok(g)
}

/// The Heawood graph: 14 vertices, cubic, girth 6. LCF `[5, -5]^7`.
pub fn heawood_graph() -> Graph {
    lcf_graph(&[5, -5], 7).expect("LCF [5,-5]^7 is a valid simple graph")
}

/// Complete graph on `n` vertices.
pub fn complete_graph(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v).expect("distinct vertices");
        }
    }
    g
}

pub fn path_graph(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for i in 1..n {
        g.add_edge(i - 1, i).expect("distinct vertices");
    }
    g
}

/// Experimental: the radius-2 tree around the edge `(0, 1)` in which both
/// endpoints and their other neighbours have degree `D` and the outermost
/// layer is made of leaves. Vertex count is `2 + 2(D-1) + 2(D-1)^2`.
///
/// Whether the depth-2 QAOA value on the central edge of this tree equals the
/// infinite-girth closed form is not assumed anywhere; see the oracle tests.
pub fn lightcone_tree(degree: usize) -> Result<Graph> {
    if degree < 2 {
        return domain(format!("degree D = {degree}; need D >= 2"));
    }
    let branch = degree - 1;
    let n = 2 + 2 * branch + 2 * branch * branch;
    let mut g = Graph::empty(n);
    g.add_edge(0, 1)?;
    let mut next = 2;
    for root in [0usize, 1] {
        for _ in 0..branch {
            let mid = next;
            next += 1;
            g.add_edge(root, mid)?;
            for _ in 0..branch {
                g.add_edge(mid, next)?;
                next += 1;
            }
        }
    }
    debug_assert_eq!(next, n);
    Ok(g)
}

/// Length of the shortest cycle, `None` for forests.
///
/// BFS from every vertex; a non-tree edge `(a, b)` met during the search
/// from `s` closes a walk of length `dist[a] + dist[b] + 1` through `s`, and
/// the minimum over all sources is the girth.
pub fn girth(g: &Graph) -> Option<usize> {
    let n = g.vertex_count();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        dist.fill(usize::MAX);
        parent.fill(usize::MAX);
        dist[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(a) = queue.pop_front() {
            if let Some(b) = best {
                if 2 * dist[a] + 1 >= b {
                    break;
                }
            }
            for &b in g.neighbors(a) {
                if dist[b] == usize::MAX {
                    dist[b] = dist[a] + 1;
                    parent[b] = a;
                    queue.push_back(b);
                } else if parent[a] != b {
                    let len = dist[a] + dist[b] + 1;
                    best = Some(best.map_or(len, |x| x.min(len)));
                }
            }
        }
    }
    best
}

/// Parses the edge-list format: one `u v` pair per line, 0-indexed,
/// blank lines and `#` comments ignored. The vertex count is one more than
/// the largest index seen.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    let mut max_vertex: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let input_err = |message: String| Error::Input { line: line_no, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(input_err(format!("expected two vertex indices, found {}", fields.len())));
        }
        let parse = |f: &str| {
            f.parse::<usize>()
                .map_err(|e| input_err(format!("bad vertex index {f:?}: {e}")))
        };
        let (u, v) = (parse(fields[0])?, parse(fields[1])?);
        if u == v {
            return Err(input_err(format!("self-loop at vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(input_err(format!("duplicate edge ({u}, {v})")));
        }
        max_vertex = Some(max_vertex.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v));
    }
    let n = max_vertex.map_or(0, |m| m + 1);
    Graph::from_edges(n, &edges)
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    parse_edge_list(&text)
}
