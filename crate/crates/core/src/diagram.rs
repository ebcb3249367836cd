//! Truncated Bratteli diagrams and their rooted path spaces.
//!
//! A diagram of depth `D` has vertex levels `0..=D`; level 0 is the root.
//! Parallel edges are multiplicities in the incidence matrices, and an
//! individual edge is `(level, source, range, copy)`. Paths are ordered
//! lexicographically on their edges, which is the canonical order every
//! table in this crate is indexed by.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default cap on the number of entries of any table or block family.
pub const DEFAULT_MAX_ENTRIES: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub level: usize,
    pub index: usize,
}

impl Vertex {
    pub const ROOT: Vertex = Vertex { level: 0, index: 0 };

    pub fn new(level: usize, index: usize) -> Self {
        Vertex { level, index }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.level, self.index)
    }
}

/// One edge from vertex `source` of `level` to vertex `range` of `level + 1`.
///
/// Field order gives the canonical edge order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub level: usize,
    pub source: usize,
    pub range: usize,
    pub copy: usize,
}

impl Edge {
    pub fn new(level: usize, source: usize, range: usize, copy: usize) -> Self {
        Edge { level, source, range, copy }
    }

    pub fn source_vertex(&self) -> Vertex {
        Vertex::new(self.level, self.source)
    }

    pub fn range_vertex(&self) -> Vertex {
        Vertex::new(self.level + 1, self.range)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}#{}", self.source, self.range, self.copy)
    }
}

fn write_edges(f: &mut fmt::Formatter<'_>, edges: &[Edge]) -> fmt::Result {
    if edges.is_empty() {
        return f.write_str("()");
    }
    for (i, e) in edges.iter().enumerate() {
        if i > 0 {
            f.write_str(";")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

/// A path starting at the root. The empty path is the root itself.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinitePath {
    edges: Vec<Edge>,
}

impl FinitePath {
    pub fn empty() -> Self {
        FinitePath::default()
    }

    /// Wraps an edge sequence without checking it against a diagram; see
    /// [`BratteliDiagram::check_path`].
    pub fn from_edges(edges: Vec<Edge>) -> Self {
        FinitePath { edges }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `r(γ)`: range of the last edge, or the root for the empty path.
    pub fn range(&self) -> Vertex {
        self.edges.last().map(Edge::range_vertex).unwrap_or(Vertex::ROOT)
    }

    pub fn prefix(&self, len: usize) -> FinitePath {
        FinitePath { edges: self.edges[..len].to_vec() }
    }

    pub fn extended(&self, edge: Edge) -> FinitePath {
        let mut edges = self.edges.clone();
        edges.push(edge);
        FinitePath { edges }
    }

    pub fn concat(&self, segment: &PathSegment) -> FinitePath {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&segment.edges);
        FinitePath { edges }
    }

    pub fn starts_with(&self, other: &FinitePath) -> bool {
        self.edges.starts_with(&other.edges)
    }
}

impl fmt::Display for FinitePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_edges(f, &self.edges)
    }
}

impl FromStr for FinitePath {
    type Err = Error;

    /// Parses `s>r#k;...` with edge levels taken from position, or `()`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "()" {
            return Ok(FinitePath::empty());
        }
        let bad = || Error::InvalidPath(s.to_string());
        let edges = s
            .split(';')
            .enumerate()
            .map(|(level, tok)| {
                let (source, rest) = tok.split_once('>').ok_or_else(bad)?;
                let (range, copy) = rest.split_once('#').ok_or_else(bad)?;
                Ok(Edge::new(
                    level,
                    source.parse().map_err(|_| bad())?,
                    range.parse().map_err(|_| bad())?,
                    copy.parse().map_err(|_| bad())?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinitePath { edges })
    }
}

/// A chained edge sequence from an arbitrary start vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathSegment {
    pub start: Vertex,
    pub edges: Vec<Edge>,
}

impl PathSegment {
    pub fn end(&self) -> Vertex {
        self.edges.last().map(Edge::range_vertex).unwrap_or(self.start)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

impl fmt::Display for PathSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.start)?;
        write_edges(f, &self.edges)
    }
}

/// Which structural condition a diagram violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// A vertex level is empty.
    NonemptyLevel,
    /// Level 0 is not a single vertex.
    SingletonRoot,
    /// A vertex below the truncation depth is the source of no edge.
    NoOutgoing,
    /// A vertex above the root is the range of no edge.
    NoIncoming,
}

impl Condition {
    pub fn label(&self) -> &'static str {
        match self {
            Condition::NonemptyLevel => "(a)",
            Condition::SingletonRoot => "(d)",
            Condition::NoOutgoing => "(e)",
            Condition::NoIncoming => "(f)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub condition: Condition,
    pub level: usize,
    pub index: Option<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = self.condition.label();
        match (self.condition, self.index) {
            (Condition::NonemptyLevel, _) => write!(f, "condition {label}: level {} is empty", self.level),
            (Condition::SingletonRoot, _) => write!(f, "condition {label}: level 0 is not a single vertex"),
            (Condition::NoOutgoing, Some(i)) => {
                write!(f, "condition {label}: vertex ({},{i}) is the source of no edge", self.level)
            }
            (Condition::NoIncoming, Some(i)) => {
                write!(f, "condition {label}: vertex ({},{i}) is the range of no edge", self.level)
            }
            (_, None) => write!(f, "condition {label} at level {}", self.level),
        }
    }
}

/// Cached enumeration of the rooted paths of one length.
#[derive(Debug)]
pub struct PathLevel {
    level: usize,
    paths: Vec<FinitePath>,
    terminal: Vec<usize>,
    parent: Vec<usize>,
    /// Indexed by a path of the previous level: index of its first extension.
    child_start: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    block_pos: Vec<usize>,
    index: HashMap<FinitePath, usize>,
}

impl PathLevel {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn paths(&self) -> &[FinitePath] {
        &self.paths
    }

    pub fn path(&self, i: usize) -> &FinitePath {
        &self.paths[i]
    }

    /// Index (within its level) of the terminal vertex of path `i`.
    pub fn terminal(&self, i: usize) -> usize {
        self.terminal[i]
    }

    /// Index of the one-shorter prefix of path `i`. Level must be positive.
    pub fn parent(&self, i: usize) -> usize {
        self.parent[i]
    }

    pub fn last_edge(&self, i: usize) -> Option<&Edge> {
        self.paths[i].edges.last()
    }

    /// Paths ending at vertex `v`, in canonical order.
    pub fn block(&self, v: usize) -> &[usize] {
        &self.blocks[v]
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Position of path `i` inside its terminal block.
    pub fn block_pos(&self, i: usize) -> usize {
        self.block_pos[i]
    }

    pub fn index_of(&self, path: &FinitePath) -> Option<usize> {
        self.index.get(path).copied()
    }

    /// Block sizes, i.e. `#v` for every vertex of the level.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }
}

/// The `R_n` classes of the length-`m` rooted paths: two paths are
/// equivalent when they end at the same level-`n` vertex and agree on
/// edges `n..m`.
#[derive(Debug, Clone)]
pub struct TailPartition {
    pub n: usize,
    pub m: usize,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_vertex: Vec<usize>,
}

impl TailPartition {
    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    /// Members of each class, ordered by their length-`n` prefix.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, c: usize) -> &[usize] {
        &self.classes[c]
    }

    /// Level-`n` vertex through which every member of class `c` passes.
    pub fn class_vertex(&self, c: usize) -> usize {
        self.class_vertex[c]
    }

    pub fn equivalent(&self, i: usize, j: usize) -> bool {
        self.class_of[i] == self.class_of[j]
    }
}

pub struct BratteliDiagram {
    vertex_counts: Vec<usize>,
    incidence: Vec<Vec<Vec<u64>>>,
    max_entries: u64,
    levels: Vec<OnceLock<PathLevel>>,
}

impl fmt::Debug for BratteliDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BratteliDiagram")
            .field("vertex_counts", &self.vertex_counts)
            .field("incidence", &self.incidence)
            .finish()
    }
}

impl Clone for BratteliDiagram {
    fn clone(&self) -> Self {
        BratteliDiagram {
            vertex_counts: self.vertex_counts.clone(),
            incidence: self.incidence.clone(),
            max_entries: self.max_entries,
            levels: (0..self.vertex_counts.len()).map(|_| OnceLock::new()).collect(),
        }
    }
}

impl PartialEq for BratteliDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_counts == other.vertex_counts && self.incidence == other.incidence
    }
}

impl Eq for BratteliDiagram {}

impl BratteliDiagram {
    /// Builds a diagram from vertex counts `c_0..c_D` and `D` incidence
    /// matrices. Only the shape is checked here; the structural conditions
    /// are reported by [`validate`](Self::validate).
    pub fn new(vertex_counts: Vec<usize>, incidence: Vec<Vec<Vec<u64>>>) -> Result<Self> {
        if vertex_counts.len() < 2 {
            return Err(Error::Shape("depth must be at least 1".into()));
        }
        if incidence.len() + 1 != vertex_counts.len() {
            return Err(Error::Shape(format!(
                "{} vertex levels need {} incidence matrices, got {}",
                vertex_counts.len(),
                vertex_counts.len() - 1,
                incidence.len()
            )));
        }
        for (n, matrix) in incidence.iter().enumerate() {
            if matrix.len() != vertex_counts[n] {
                return Err(Error::Shape(format!(
                    "incidence {n} has {} rows, expected {}",
                    matrix.len(),
                    vertex_counts[n]
                )));
            }
            if let Some((i, row)) = matrix.iter().enumerate().find(|(_, r)| r.len() != vertex_counts[n + 1]) {
                return Err(Error::Shape(format!(
                    "incidence {n} row {i} has {} columns, expected {}",
                    row.len(),
                    vertex_counts[n + 1]
                )));
            }
        }
        let levels = (0..vertex_counts.len()).map(|_| OnceLock::new()).collect();
        Ok(BratteliDiagram { vertex_counts, incidence, max_entries: DEFAULT_MAX_ENTRIES, levels })
    }

    /// Builds a diagram of the given depth whose level `n` stage is `stage(n)`.
    pub fn from_stages(depth: usize, stage: impl Fn(usize) -> Vec<Vec<u64>>) -> Result<Self> {
        let incidence: Vec<_> = (0..depth).map(stage).collect();
        let mut counts = vec![incidence.first().map_or(1, Vec::len)];
        for m in &incidence {
            counts.push(m.first().map_or(0, Vec::len));
        }
        BratteliDiagram::new(counts, incidence)
    }

    pub fn with_max_entries(mut self, cap: u64) -> Self {
        self.max_entries = cap;
        self
    }

    pub fn max_entries(&self) -> u64 {
        self.max_entries
    }

    pub fn check_entries(&self, entries: u128) -> Result<()> {
        if entries > self.max_entries as u128 {
            return Err(Error::ResourceLimit { entries, cap: self.max_entries });
        }
        Ok(())
    }

    pub fn depth(&self) -> usize {
        self.vertex_counts.len() - 1
    }

    pub fn vertex_counts(&self) -> &[usize] {
        &self.vertex_counts
    }

    pub fn vertex_count(&self, level: usize) -> Result<usize> {
        self.check_level(level)?;
        Ok(self.vertex_counts[level])
    }

    /// Incidence matrix of stage `n` (rows: level `n`, columns: level `n+1`).
    pub fn incidence(&self, n: usize) -> Result<&[Vec<u64>]> {
        if n >= self.depth() {
            return Err(Error::DepthExhausted { level: n, depth: self.depth() });
        }
        Ok(&self.incidence[n])
    }

    pub fn incidences(&self) -> &[Vec<Vec<u64>>] {
        &self.incidence
    }

    /// Restriction to the first `depth` stages.
    pub fn truncate(&self, depth: usize) -> Result<Self> {
        if depth > self.depth() {
            return Err(Error::LevelOutOfRange { level: depth, depth: self.depth() });
        }
        Ok(BratteliDiagram::new(self.vertex_counts[..=depth].to_vec(), self.incidence[..depth].to_vec())?
            .with_max_entries(self.max_entries))
    }

    pub fn check_level(&self, level: usize) -> Result<()> {
        if level > self.depth() {
            return Err(Error::LevelOutOfRange { level, depth: self.depth() });
        }
        Ok(())
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        self.check_level(v.level)?;
        let count = self.vertex_counts[v.level];
        if v.index >= count {
            return Err(Error::VertexOutOfRange { level: v.level, index: v.index, count });
        }
        Ok(())
    }

    /// Reports every violated structural condition; empty iff valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (level, &c) in self.vertex_counts.iter().enumerate() {
            if c == 0 {
                out.push(Violation { condition: Condition::NonemptyLevel, level, index: None });
            }
        }
        if self.vertex_counts[0] != 1 {
            out.push(Violation { condition: Condition::SingletonRoot, level: 0, index: None });
        }
        for (n, matrix) in self.incidence.iter().enumerate() {
            for (i, row) in matrix.iter().enumerate() {
                if row.iter().all(|&k| k == 0) {
                    out.push(Violation { condition: Condition::NoOutgoing, level: n, index: Some(i) });
                }
            }
            for j in 0..self.vertex_counts[n + 1] {
                if matrix.iter().all(|row| row[j] == 0) {
                    out.push(Violation { condition: Condition::NoIncoming, level: n + 1, index: Some(j) });
                }
            }
        }
        out
    }

    pub fn multiplicity(&self, level: usize, source: usize, range: usize) -> u64 {
        self.incidence[level][source][range]
    }

    /// `#v` for every vertex of `level`, by the incidence recursion.
    pub fn path_counts(&self, level: usize) -> Result<Vec<u64>> {
        self.check_level(level)?;
        let mut counts = vec![1u64; self.vertex_counts[0]];
        for n in 0..level {
            let matrix = &self.incidence[n];
            let mut next = vec![0u64; self.vertex_counts[n + 1]];
            for (i, row) in matrix.iter().enumerate() {
                for (j, &k) in row.iter().enumerate() {
                    next[j] = k
                        .checked_mul(counts[i])
                        .and_then(|x| x.checked_add(next[j]))
                        .ok_or(Error::ResourceLimit { entries: u128::MAX, cap: self.max_entries })?;
                }
            }
            counts = next;
        }
        Ok(counts)
    }

    /// `#v`: the number of rooted paths ending at `v`.
    pub fn path_count(&self, v: Vertex) -> Result<u64> {
        self.check_vertex(v)?;
        Ok(self.path_counts(v.level)?[v.index])
    }

    /// Edges leaving `v`, canonically ordered. Fails at the truncation depth.
    pub fn edges_from(&self, v: Vertex) -> Result<Vec<Edge>> {
        self.check_vertex(v)?;
        let row = &self.incidence(v.level)?[v.index];
        Ok(row
            .iter()
            .enumerate()
            .flat_map(|(range, &k)| (0..k as usize).map(move |copy| Edge::new(v.level, v.index, range, copy)))
            .collect())
    }

    /// Position of `edge` among the edges leaving its source.
    fn edge_rank(&self, edge: &Edge) -> usize {
        let row = &self.incidence[edge.level][edge.source];
        row[..edge.range].iter().sum::<u64>() as usize + edge.copy
    }

    fn edge_exists(&self, e: &Edge) -> bool {
        e.level < self.depth()
            && e.source < self.vertex_counts[e.level]
            && e.range < self.vertex_counts[e.level + 1]
            && (e.copy as u64) < self.incidence[e.level][e.source][e.range]
    }

    /// Checks that `path` is a rooted chained path of this diagram.
    pub fn check_path(&self, path: &FinitePath) -> Result<()> {
        self.check_chain(Vertex::ROOT, path.edges()).map_err(|msg| Error::InvalidPath(format!("{path}: {msg}")))
    }

    pub fn check_segment(&self, seg: &PathSegment) -> Result<()> {
        self.check_vertex(seg.start)?;
        self.check_chain(seg.start, &seg.edges).map_err(|msg| Error::InvalidPath(format!("{seg}: {msg}")))
    }

    fn check_chain(&self, start: Vertex, edges: &[Edge]) -> std::result::Result<(), String> {
        let mut at = start;
        for e in edges {
            if e.source_vertex() != at {
                return Err(format!("edge {e} does not leave {at}"));
            }
            if !self.edge_exists(e) {
                return Err(format!("edge {e} at level {} is not in the diagram", e.level));
            }
            at = e.range_vertex();
        }
        Ok(())
    }

    /// Cached enumeration of `Ω_n`.
    pub fn path_level(&self, n: usize) -> Result<&PathLevel> {
        self.check_level(n)?;
        if let Some(level) = self.levels[n].get() {
            return Ok(level);
        }
        let total: u128 = self.path_counts(n)?.iter().map(|&c| c as u128).sum();
        self.check_entries(total)?;
        let built = if n == 0 {
            self.root_level()
        } else {
            let prev = self.path_level(n - 1)?;
            self.next_level(prev)
        };
        Ok(self.levels[n].get_or_init(|| built))
    }

    fn root_level(&self) -> PathLevel {
        let empty = FinitePath::empty();
        let mut blocks = vec![Vec::new(); self.vertex_counts[0]];
        if let Some(b) = blocks.first_mut() {
            b.push(0);
        }
        PathLevel {
            level: 0,
            paths: vec![empty.clone()],
            terminal: vec![0],
            parent: Vec::new(),
            child_start: Vec::new(),
            blocks,
            block_pos: vec![0],
            index: HashMap::from([(empty, 0)]),
        }
    }

    fn next_level(&self, prev: &PathLevel) -> PathLevel {
        let n = prev.level;
        let mut paths = Vec::new();
        let mut terminal = Vec::new();
        let mut parent = Vec::new();
        let mut child_start = Vec::with_capacity(prev.len());
        for (p, path) in prev.paths.iter().enumerate() {
            child_start.push(paths.len());
            let row = &self.incidence[n][prev.terminal[p]];
            for (range, &k) in row.iter().enumerate() {
                for copy in 0..k as usize {
                    paths.push(path.extended(Edge::new(n, prev.terminal[p], range, copy)));
                    terminal.push(range);
                    parent.push(p);
                }
            }
        }
        let mut blocks = vec![Vec::new(); self.vertex_counts[n + 1]];
        let mut block_pos = Vec::with_capacity(paths.len());
        for (i, &t) in terminal.iter().enumerate() {
            block_pos.push(blocks[t].len());
            blocks[t].push(i);
        }
        let index = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        PathLevel { level: n + 1, paths, terminal, parent, child_start, blocks, block_pos, index }
    }

    /// `Ω_n` in canonical order.
    pub fn enumerate_paths(&self, n: usize) -> Result<Vec<FinitePath>> {
        Ok(self.path_level(n)?.paths.clone())
    }

    /// Index in `Ω_{k+1}` of path `idx` of `Ω_k` extended by `edge`.
    pub fn extend_index(&self, k: usize, idx: usize, edge: &Edge) -> Result<usize> {
        let from = self.path_level(k)?;
        if edge.level != k || edge.source != from.terminal(idx) || !self.edge_exists(edge) {
            return Err(Error::InvalidPath(format!("edge {edge} does not extend {}", from.path(idx))));
        }
        let to = self.path_level(k + 1)?;
        Ok(to.child_start[idx] + self.edge_rank(edge))
    }

    /// Index in `Ω_m` of path `x ∈ Ω_n` followed by `tail`.
    pub fn splice_index(&self, n: usize, x: usize, tail: &[Edge]) -> Result<usize> {
        tail.iter().enumerate().try_fold(x, |idx, (k, e)| self.extend_index(n + k, idx, e))
    }

    /// Index in `Ω_k` of the length-`k` prefix of path `idx ∈ Ω_m`.
    pub fn prefix_index(&self, m: usize, idx: usize, k: usize) -> Result<usize> {
        if k > m {
            return Err(Error::LevelOrder(format!("prefix length {k} > path length {m}")));
        }
        let mut idx = idx;
        for level in (k + 1..=m).rev() {
            idx = self.path_level(level)?.parent(idx);
        }
        Ok(idx)
    }

    /// All segments from `v` to `w`, canonically ordered.
    pub fn enumerate_segments(&self, v: Vertex, w: Vertex) -> Result<Vec<PathSegment>> {
        self.check_vertex(v)?;
        self.check_vertex(w)?;
        if v.level > w.level {
            return Err(Error::LevelOrder(format!("segment from {v} to {w}")));
        }
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.collect_segments(v, w, &mut stack, &mut out)?;
        Ok(out.into_iter().map(|edges| PathSegment { start: v, edges }).collect())
    }

    fn collect_segments(
        &self,
        at: Vertex,
        target: Vertex,
        stack: &mut Vec<Edge>,
        out: &mut Vec<Vec<Edge>>,
    ) -> Result<()> {
        if at.level == target.level {
            if at == target {
                out.push(stack.clone());
            }
            return Ok(());
        }
        for e in self.edges_from(at)? {
            stack.push(e);
            self.collect_segments(e.range_vertex(), target, stack, out)?;
            stack.pop();
        }
        Ok(())
    }

    /// The `R_n` classes of `Ω_m`.
    pub fn tail_partition(&self, n: usize, m: usize) -> Result<TailPartition> {
        if n > m {
            return Err(Error::LevelOrder(format!("R_{n} classes of paths of length {m}")));
        }
        let level_n = self.path_level(n)?;
        let level_m = self.path_level(m)?;
        let mut lookup: HashMap<(usize, &[Edge]), usize> = HashMap::new();
        let mut class_of = Vec::with_capacity(level_m.len());
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_vertex = Vec::new();
        for a in 0..level_m.len() {
            let p = self.prefix_index(m, a, n)?;
            let v = level_n.terminal(p);
            let key = (v, &level_m.path(a).edges()[n..]);
            let c = *lookup.entry(key).or_insert_with(|| {
                classes.push(Vec::new());
                class_vertex.push(v);
                classes.len() - 1
            });
            classes[c].push(a);
            class_of.push(c);
        }
        Ok(TailPartition { n, m, class_of, classes, class_vertex })
    }
}

/// The named diagrams shipped with the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    Car,
    Pascal,
    Fibonacci,
    Uhf3,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [Builtin::Car, Builtin::Pascal, Builtin::Fibonacci, Builtin::Uhf3];

    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Car => "car",
            Builtin::Pascal => "pascal",
            Builtin::Fibonacci => "fibonacci",
            Builtin::Uhf3 => "uhf3",
        }
    }

    pub fn from_name(name: &str) -> Option<Builtin> {
        match name.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "car" => Some(Builtin::Car),
            "pascal" | "gicar" => Some(Builtin::Pascal),
            "fibonacci" | "fib" => Some(Builtin::Fibonacci),
            "uhf3" => Some(Builtin::Uhf3),
            _ => None,
        }
    }

    /// Depth keeping the largest block family well under the default cap.
    pub fn default_depth(&self) -> usize {
        match self {
            Builtin::Car => 5,
            Builtin::Pascal => 6,
            Builtin::Fibonacci => 6,
            Builtin::Uhf3 => 4,
        }
    }

    pub fn diagram(&self, depth: usize) -> Result<BratteliDiagram> {
        match self {
            Builtin::Car => BratteliDiagram::from_stages(depth, |_| vec![vec![2]]),
            Builtin::Uhf3 => BratteliDiagram::from_stages(depth, |_| vec![vec![3]]),
            Builtin::Pascal => BratteliDiagram::from_stages(depth, |n| {
                (0..=n).map(|k| (0..=n + 1).map(|j| u64::from(j == k || j == k + 1)).collect()).collect()
            }),
            Builtin::Fibonacci => BratteliDiagram::from_stages(depth, |n| {
                if n == 0 {
                    vec![vec![1, 1]]
                } else {
                    vec![vec![1, 1], vec![1, 0]]
                }
            }),
        }
    }
}
