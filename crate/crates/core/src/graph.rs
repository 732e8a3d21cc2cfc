//! Undirected simple graphs, component decomposition and the structural
//! classes the solvers dispatch on.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{input, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Normalized `(u, v)` with `u < v`, sorted.
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return input(format!("edge ({u}, {v}) out of range for {n} vertices"));
            }
            if u == v {
                return input(format!("self-loop at vertex {u}"));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return input(format!("duplicate edge ({u}, {v})"));
            }
        }
        let edges: Vec<_> = seen.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// `P_n` laid out as `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    /// `C_n` laid out as `0 - 1 - ... - (n-1) - 0`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return input(format!("a cycle needs at least 3 vertices, got {n}"));
        }
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// `K_{1,spokes}` with the center at vertex 0.
    pub fn star(spokes: usize) -> Self {
        Graph::new(spokes + 1, (1..=spokes).map(|i| (0, i))).expect("valid star")
    }

    pub fn complete(n: usize) -> Self {
        Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).expect("valid clique")
    }

    /// `K_{r,s}` with sides `0..r` and `r..r+s`.
    pub fn complete_bipartite(r: usize, s: usize) -> Self {
        Graph::new(r + s, (0..r).flat_map(|i| (r..r + s).map(move |j| (i, j))))
            .expect("valid bipartite")
    }

    /// Places the given graphs side by side, relabelling consecutively.
    pub fn disjoint_union(parts: &[Graph]) -> Self {
        let mut offset = 0;
        let mut edges = Vec::new();
        for g in parts {
            edges.extend(g.edges.iter().map(|&(u, v)| (u + offset, v + offset)));
            offset += g.n;
        }
        Graph::new(offset, edges).expect("disjoint union of valid graphs")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || connected_components(self).len() == 1
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.edges.len() == self.n - 1 && self.is_connected()
    }

    /// Applies a vertex relabelling `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return input("relabelling has the wrong length");
        }
        Graph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }
}

/// A connected component: its vertices in the parent graph (ascending) and
/// the induced subgraph on local ids `0..vertices.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub graph: Graph,
}

impl Component {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Components ordered by their smallest vertex.
pub fn connected_components(graph: &Graph) -> Vec<Component> {
    let n = graph.vertex_count();
    let mut comp_of = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if comp_of[start] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut members = vec![start];
        comp_of[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in graph.neighbors(u) {
                if comp_of[w] == usize::MAX {
                    comp_of[w] = id;
                    members.push(w);
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    let mut local = vec![0; n];
    for members in &groups {
        for (i, &v) in members.iter().enumerate() {
            local[v] = i;
        }
    }
    let mut edge_lists = vec![Vec::new(); groups.len()];
    for &(u, v) in graph.edges() {
        edge_lists[comp_of[u]].push((local[u], local[v]));
    }
    groups
        .into_iter()
        .zip(edge_lists)
        .map(|(vertices, edges)| {
            let graph = Graph::new(vertices.len(), edges).expect("induced subgraph");
            Component { vertices, graph }
        })
        .collect()
}

/// Structural class of a connected graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentClass {
    Path(usize),
    Cycle(usize),
    /// Number of spokes.
    Star(usize),
    Clique(usize),
    /// Sides `(r, s)` with `r >= s`.
    CompleteBipartite(usize, usize),
    BinaryTree,
    Generic,
}

impl ComponentClass {
    pub fn vertex_count(&self) -> Option<usize> {
        match *self {
            ComponentClass::Path(n) | ComponentClass::Cycle(n) | ComponentClass::Clique(n) => {
                Some(n)
            }
            ComponentClass::Star(s) => Some(s + 1),
            ComponentClass::CompleteBipartite(r, s) => Some(r + s),
            ComponentClass::BinaryTree | ComponentClass::Generic => None,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            ComponentClass::Path(n) => format!("P_{n}"),
            ComponentClass::Cycle(n) => format!("C_{n}"),
            ComponentClass::Star(s) => format!("K_1,{s}"),
            ComponentClass::Clique(n) => format!("K_{n}"),
            ComponentClass::CompleteBipartite(r, s) => format!("K_{r},{s}"),
            ComponentClass::BinaryTree => "binary_tree".into(),
            ComponentClass::Generic => "generic".into(),
        }
    }

    pub fn is_path_like(&self) -> bool {
        matches!(self, ComponentClass::Path(_))
    }

    pub fn is_star_like(&self) -> bool {
        matches!(self, ComponentClass::Star(_) | ComponentClass::Path(1..=3))
    }

    pub fn clique_size(&self) -> Option<usize> {
        match *self {
            ComponentClass::Clique(n) => Some(n),
            ComponentClass::Path(n @ 1..=2) => Some(n),
            ComponentClass::Cycle(3) => Some(3),
            _ => None,
        }
    }
}

/// Classifies a connected graph under the precedence
/// Path > Cycle > Star > Clique > CompleteBipartite > BinaryTree > Generic.
pub fn classify_component(graph: &Graph) -> ComponentClass {
    let n = graph.vertex_count();
    let m = graph.edge_count();
    debug_assert!(
        graph.is_connected(),
        "classify_component expects a connected graph"
    );
    if n <= 1 {
        return ComponentClass::Path(n);
    }
    let degrees: Vec<usize> = (0..n).map(|v| graph.degree(v)).collect();
    let count = |d: usize| degrees.iter().filter(|&&x| x == d).count();
    if m == n - 1 && count(1) == 2 && count(2) == n - 2 {
        return ComponentClass::Path(n);
    }
    if m == n && count(2) == n {
        return ComponentClass::Cycle(n);
    }
    if m == n - 1 && count(n - 1) == 1 && count(1) == n - 1 {
        return ComponentClass::Star(n - 1);
    }
    if m == n * (n - 1) / 2 {
        return ComponentClass::Clique(n);
    }
    if let Some((left, right)) = bipartition(graph) {
        if left.len() * right.len() == m {
            let (r, s) = (left.len().max(right.len()), left.len().min(right.len()));
            return ComponentClass::CompleteBipartite(r, s);
        }
    }
    if binary_tree_root(graph).is_some() {
        return ComponentClass::BinaryTree;
    }
    ComponentClass::Generic
}

/// Two-colouring of a connected graph, if one exists. Side 0 holds vertex 0.
pub fn bipartition(graph: &Graph) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = graph.vertex_count();
    let mut color = vec![u8::MAX; n];
    let mut sides = (Vec::new(), Vec::new());
    for start in 0..n {
        if color[start] != u8::MAX {
            continue;
        }
        color[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in graph.neighbors(u) {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[u];
                    queue.push_back(w);
                } else if color[w] == color[u] {
                    return None;
                }
            }
        }
    }
    for (v, &c) in color.iter().enumerate() {
        if c == 0 {
            sides.0.push(v);
        } else {
            sides.1.push(v);
        }
    }
    Some(sides)
}

/// The unique vertex that roots a tree as a full binary tree (every vertex
/// with 0 or 2 children), if any.
pub fn binary_tree_root(graph: &Graph) -> Option<usize> {
    if !graph.is_tree() {
        return None;
    }
    let n = graph.vertex_count();
    if n == 1 {
        return Some(0);
    }
    let mut root = None;
    for v in 0..n {
        match graph.degree(v) {
            1 | 3 => {}
            2 if root.is_none() => root = Some(v),
            _ => return None,
        }
    }
    root
}

/// How a classified component's vertices line up with a solver's canonical
/// labelling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Layout {
    /// Vertices along a path or around a cycle.
    Sequence(Vec<usize>),
    Star {
        center: usize,
        spokes: Vec<usize>,
    },
    /// `larger` has at least as many vertices as `smaller`.
    Sides {
        larger: Vec<usize>,
        smaller: Vec<usize>,
    },
    /// Every vertex is interchangeable (cliques).
    Any,
    None,
}

pub fn layout(graph: &Graph, class: ComponentClass) -> Layout {
    let n = graph.vertex_count();
    match class {
        ComponentClass::Path(_) => {
            if n <= 1 {
                return Layout::Sequence((0..n).collect());
            }
            let start = (0..n)
                .find(|&v| graph.degree(v) == 1)
                .expect("path endpoint");
            Layout::Sequence(walk(graph, start))
        }
        ComponentClass::Cycle(_) => Layout::Sequence(walk(graph, 0)),
        ComponentClass::Star(_) => {
            let center = (0..n)
                .find(|&v| graph.degree(v) == n - 1)
                .expect("star center");
            Layout::Star {
                center,
                spokes: (0..n).filter(|&v| v != center).collect(),
            }
        }
        ComponentClass::Clique(_) => Layout::Any,
        ComponentClass::CompleteBipartite(..) => {
            let (a, b) = bipartition(graph).expect("bipartite");
            if a.len() >= b.len() {
                Layout::Sides {
                    larger: a,
                    smaller: b,
                }
            } else {
                Layout::Sides {
                    larger: b,
                    smaller: a,
                }
            }
        }
        ComponentClass::BinaryTree | ComponentClass::Generic => Layout::None,
    }
}

/// Follows a max-degree-2 graph from `start`, preferring the smaller neighbour.
fn walk(graph: &Graph, start: usize) -> Vec<usize> {
    let n = graph.vertex_count();
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while order.len() < n {
        let next = graph
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&w| w != prev && w != start);
        match next {
            Some(w) => {
                prev = cur;
                cur = w;
                order.push(w);
            }
            None => break,
        }
    }
    order
}

/// A tree with a designated root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    graph: Graph,
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    /// Vertices in BFS order from the root.
    order: Vec<usize>,
}

impl RootedTree {
    pub fn new(graph: Graph, root: usize) -> Result<Self> {
        let n = graph.vertex_count();
        if root >= n {
            return input(format!("root {root} out of range for {n} vertices"));
        }
        if !graph.is_tree() {
            return input("rooted tree input must be connected and acyclic");
        }
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0; n];
        let mut order = vec![root];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            i += 1;
            for &w in graph.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    depth[w] = depth[u] + 1;
                    children[u].push(w);
                    order.push(w);
                }
            }
        }
        Ok(RootedTree {
            graph,
            root,
            parent,
            children,
            depth,
            order,
        })
    }

    /// Complete binary tree on `2^levels - 1` vertices in heap order.
    pub fn complete_binary(levels: u32) -> Self {
        let n = (1usize << levels) - 1;
        let graph = Graph::new(n, (1..n).map(|v| ((v - 1) / 2, v))).expect("heap tree");
        RootedTree::new(graph, 0).expect("tree")
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    pub fn bfs_order(&self) -> &[usize] {
        &self.order
    }

    /// All vertices in the subtree rooted at `v`, including `v`.
    pub fn subtree(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut i = 0;
        while i < out.len() {
            let u = out[i];
            i += 1;
            out.extend_from_slice(&self.children[u]);
        }
        out
    }

    /// True when `v` lies in the subtree rooted at `ancestor`.
    pub fn is_descendant(&self, v: usize, ancestor: usize) -> bool {
        let mut cur = Some(v);
        while let Some(u) = cur {
            if u == ancestor {
                return true;
            }
            cur = self.parent[u];
        }
        false
    }
}

/// True iff every vertex has either 0 or 2 children.
pub fn validate_binary_tree(tree: &RootedTree) -> bool {
    (0..tree.len()).all(|v| matches!(tree.children(v).len(), 0 | 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn components_of_p2_plus_c3() {
        let g = Graph::disjoint_union(&[Graph::path(2), Graph::cycle(3).unwrap()]);
        let comps = connected_components(&g);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].vertices, vec![0, 1]);
        assert_eq!(comps[1].vertices, vec![2, 3, 4]);
        assert_eq!(comps[1].graph.edge_count(), 3);
    }

    #[test]
    fn connected_graph_is_one_component() {
        let g = Graph::cycle(5).unwrap();
        let comps = connected_components(&g);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].graph, g);
    }

    #[test]
    fn edgeless_graph_gives_singletons() {
        let comps = connected_components(&Graph::empty(4));
        assert_eq!(comps.len(), 4);
        assert!(comps.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn precedence_resolves_overlaps() {
        assert_eq!(classify_component(&Graph::star(2)), ComponentClass::Path(3));
        assert_eq!(
            classify_component(&Graph::complete(3)),
            ComponentClass::Cycle(3)
        );
        assert_eq!(
            classify_component(&Graph::complete_bipartite(2, 2)),
            ComponentClass::Cycle(4)
        );
        assert_eq!(
            classify_component(&Graph::complete_bipartite(3, 3)),
            ComponentClass::CompleteBipartite(3, 3)
        );
        assert_eq!(
            classify_component(&Graph::complete_bipartite(1, 4)),
            ComponentClass::Star(4)
        );
        assert_eq!(
            classify_component(&Graph::complete_bipartite(2, 3)),
            ComponentClass::CompleteBipartite(3, 2)
        );
        assert_eq!(
            classify_component(&Graph::complete(5)),
            ComponentClass::Clique(5)
        );
        assert_eq!(
            classify_component(&Graph::empty(1)),
            ComponentClass::Path(1)
        );
        assert_eq!(classify_component(&Graph::path(2)), ComponentClass::Path(2));
    }

    #[test]
    fn binary_tree_and_generic() {
        let t = RootedTree::complete_binary(3);
        assert_eq!(classify_component(t.graph()), ComponentClass::BinaryTree);
        // a spider with three legs of length 2
        let g = Graph::new(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        assert_eq!(classify_component(&g), ComponentClass::Generic);
    }

    #[test]
    fn layouts_follow_structure() {
        let g = Graph::new(4, [(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(
            layout(&g, ComponentClass::Path(4)),
            Layout::Sequence(vec![1, 3, 0, 2])
        );
        let c = Graph::new(4, [(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap();
        assert_eq!(
            layout(&c, ComponentClass::Cycle(4)),
            Layout::Sequence(vec![0, 2, 1, 3])
        );
        let s = Graph::new(4, [(2, 0), (2, 1), (2, 3)]).unwrap();
        assert_eq!(
            layout(&s, ComponentClass::Star(3)),
            Layout::Star {
                center: 2,
                spokes: vec![0, 1, 3]
            }
        );
    }

    #[test]
    fn binary_tree_validation() {
        let single = RootedTree::new(Graph::empty(1), 0).unwrap();
        assert!(validate_binary_tree(&single));
        let one_child = RootedTree::new(Graph::path(2), 0).unwrap();
        assert!(!validate_binary_tree(&one_child));
        assert!(validate_binary_tree(&RootedTree::complete_binary(3)));
        assert!(RootedTree::new(Graph::cycle(3).unwrap(), 0).is_err());
        assert!(RootedTree::new(Graph::empty(2), 0).is_err());
    }
}
