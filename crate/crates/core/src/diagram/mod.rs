//! Floor diagrams: weighted acyclic oriented graphs whose vertices carry the
//! left/right slope labels of an h-transverse polygon.

mod canonical;
mod enumerate;
mod surgery;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::polygon::{HProfile, PolygonData};

pub use canonical::Canonical;
pub use enumerate::enumerate_diagrams;

/// Element-level bitmasks cap the number of elements.
pub const MAX_ELEMENTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("element {0} does not exist")]
    NoSuchElement(Element),
    #[error("diagram has {0} elements, more than the supported {MAX_ELEMENTS}")]
    TooManyElements(usize),
    #[error("operation would create an oriented cycle")]
    WouldCreateCycle,
    #[error("invalid surgery: {0}")]
    BadSurgery(String),
    #[error("negative codegree {0}")]
    NegativeCodegree(i64),
    #[error("element count {found} differs from y - 1 + g = {expected}")]
    ElementCount { found: i64, expected: i64 },
    #[error("cannot parse diagram: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundedEdge {
    pub src: usize,
    pub dst: usize,
    pub weight: i64,
}

/// A source (entering `vertex`) or a sink (leaving `vertex`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfiniteEdge {
    pub vertex: usize,
    pub weight: i64,
}

/// A vertex or an edge of a diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Vertex(usize),
    Bounded(usize),
    Source(usize),
    Sink(usize),
}

impl Element {
    pub fn is_vertex(&self) -> bool {
        matches!(self, Element::Vertex(_))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vertex(i) => write!(f, "V{i}"),
            Element::Bounded(i) => write!(f, "E{i}"),
            Element::Source(i) => write!(f, "SRC{i}"),
            Element::Sink(i) => write!(f, "SNK{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FloorDiagram {
    labels: Vec<(i64, i64)>,
    edges: Vec<BoundedEdge>,
    sources: Vec<InfiniteEdge>,
    sinks: Vec<InfiniteEdge>,
}

/// One violated clause of the floor-diagram definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoVertices,
    Disconnected,
    Cycle,
    Genus { expected: i64, found: i64 },
    NonPositiveWeight(Element),
    InfiniteEdgeWeight(Element),
    VertexCount { expected: i64, found: usize },
    SourceCount { expected: i64, found: usize },
    SinkCount { expected: i64, found: usize },
    LeftLabels,
    RightLabels,
    Divergence { vertex: usize, divergence: i64, expected: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    pub violations: Vec<Violation>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagramStats {
    pub n: i64,
    pub genus: i64,
    pub deg: i64,
    pub codeg: i64,
}

impl FloorDiagram {
    pub fn new(
        labels: Vec<(i64, i64)>,
        edges: Vec<BoundedEdge>,
        sources: Vec<InfiniteEdge>,
        sinks: Vec<InfiniteEdge>,
    ) -> Result<Self, DiagramError> {
        let nv = labels.len();
        let check = |v: usize| if v < nv { Ok(()) } else { Err(DiagramError::VertexOutOfRange(v)) };
        for e in &edges {
            check(e.src)?;
            check(e.dst)?;
        }
        for e in sources.iter().chain(&sinks) {
            check(e.vertex)?;
        }
        Ok(FloorDiagram { labels, edges, sources, sinks })
    }

    /// Shorthand with weight-1 infinite edges given by their vertices and
    /// bounded edges as `(src, dst, weight)`.
    pub fn from_parts(
        labels: &[(i64, i64)],
        edges: &[(usize, usize, i64)],
        sources: &[usize],
        sinks: &[usize],
    ) -> Result<Self, DiagramError> {
        Self::new(
            labels.to_vec(),
            edges.iter().map(|&(src, dst, weight)| BoundedEdge { src, dst, weight }).collect(),
            sources.iter().map(|&vertex| InfiniteEdge { vertex, weight: 1 }).collect(),
            sinks.iter().map(|&vertex| InfiniteEdge { vertex, weight: 1 }).collect(),
        )
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }
    pub fn labels(&self) -> &[(i64, i64)] {
        &self.labels
    }
    pub fn edges(&self) -> &[BoundedEdge] {
        &self.edges
    }
    pub fn sources(&self) -> &[InfiniteEdge] {
        &self.sources
    }
    pub fn sinks(&self) -> &[InfiniteEdge] {
        &self.sinks
    }

    /// `n(D) = |V| + |E|`.
    pub fn num_elements(&self) -> usize {
        self.labels.len() + self.edges.len() + self.sources.len() + self.sinks.len()
    }

    /// Elements in index order: vertices, bounded edges, sources, sinks.
    pub fn elements(&self) -> Vec<Element> {
        let mut out: Vec<Element> = (0..self.labels.len()).map(Element::Vertex).collect();
        out.extend((0..self.edges.len()).map(Element::Bounded));
        out.extend((0..self.sources.len()).map(Element::Source));
        out.extend((0..self.sinks.len()).map(Element::Sink));
        out
    }

    pub fn element_index(&self, e: Element) -> usize {
        let (v, b, s) = (self.labels.len(), self.edges.len(), self.sources.len());
        match e {
            Element::Vertex(i) => i,
            Element::Bounded(i) => v + i,
            Element::Source(i) => v + b + i,
            Element::Sink(i) => v + b + s + i,
        }
    }

    pub fn element_at(&self, idx: usize) -> Element {
        let (v, b, s) = (self.labels.len(), self.edges.len(), self.sources.len());
        if idx < v {
            Element::Vertex(idx)
        } else if idx < v + b {
            Element::Bounded(idx - v)
        } else if idx < v + b + s {
            Element::Source(idx - v - b)
        } else {
            Element::Sink(idx - v - b - s)
        }
    }

    pub fn contains(&self, e: Element) -> bool {
        match e {
            Element::Vertex(i) => i < self.labels.len(),
            Element::Bounded(i) => i < self.edges.len(),
            Element::Source(i) => i < self.sources.len(),
            Element::Sink(i) => i < self.sinks.len(),
        }
    }

    /// Weight of an edge element, `None` for vertices.
    pub fn weight(&self, e: Element) -> Option<i64> {
        match e {
            Element::Vertex(_) => None,
            Element::Bounded(i) => Some(self.edges[i].weight),
            Element::Source(i) => Some(self.sources[i].weight),
            Element::Sink(i) => Some(self.sinks[i].weight),
        }
    }

    /// `(tail, head)` vertices of an edge element; infinite ends are `None`.
    pub fn endpoints(&self, e: Element) -> (Option<usize>, Option<usize>) {
        match e {
            Element::Vertex(_) => (None, None),
            Element::Bounded(i) => (Some(self.edges[i].src), Some(self.edges[i].dst)),
            Element::Source(i) => (None, Some(self.sources[i].vertex)),
            Element::Sink(i) => (Some(self.sinks[i].vertex), None),
        }
    }

    /// Incoming minus outgoing weight.
    pub fn divergence(&self, v: usize) -> i64 {
        let mut d = 0;
        for e in &self.edges {
            if e.dst == v {
                d += e.weight;
            }
            if e.src == v {
                d -= e.weight;
            }
        }
        d += self.sources.iter().filter(|s| s.vertex == v).map(|s| s.weight).sum::<i64>();
        d -= self.sinks.iter().filter(|s| s.vertex == v).map(|s| s.weight).sum::<i64>();
        d
    }

    /// First Betti number, assuming the graph is connected.
    pub fn genus(&self) -> i64 {
        self.edges.len() as i64 - self.labels.len() as i64 + 1
    }

    /// `Σ (w(e) - 1)` over all edges.
    pub fn degree(&self) -> i64 {
        self.edges.iter().map(|e| e.weight - 1).sum::<i64>()
            + self.sources.iter().chain(&self.sinks).map(|e| e.weight - 1).sum::<i64>()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.labels.len();
        if n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.src].push(e.dst);
            adj[e.dst].push(e.src);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// A topological order of the vertices, `None` if there is an oriented cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.labels.len();
        let mut indeg = vec![0usize; n];
        for e in &self.edges {
            indeg[e.dst] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for e in self.edges.iter().filter(|e| e.src == v) {
                indeg[e.dst] -= 1;
                if indeg[e.dst] == 0 {
                    ready.push(e.dst);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// `reach[u]` has bit `v` set iff there is an oriented path from `u` to `v`
    /// (including `u == v`).
    pub fn vertex_reachability(&self) -> Vec<u64> {
        let n = self.labels.len();
        let mut reach: Vec<u64> = (0..n).map(|v| 1u64 << v).collect();
        let order = self.topological_order().unwrap_or_else(|| (0..n).collect());
        for &v in order.iter().rev() {
            for e in self.edges.iter().filter(|e| e.src == v) {
                reach[v] |= reach[e.dst];
            }
        }
        reach
    }

    /// Checks every clause of the definition against `h` and genus `g`.
    pub fn validate(&self, h: &HProfile, g: i64) -> Validation {
        let mut violations = Vec::new();
        let nv = self.labels.len();
        if nv == 0 {
            violations.push(Violation::NoVertices);
        } else if !self.is_connected() {
            violations.push(Violation::Disconnected);
        }
        if !self.is_acyclic() {
            violations.push(Violation::Cycle);
        }
        if self.genus() != g {
            violations.push(Violation::Genus { expected: g, found: self.genus() });
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.weight < 1 {
                violations.push(Violation::NonPositiveWeight(Element::Bounded(i)));
            }
        }
        for (i, e) in self.sources.iter().enumerate() {
            if e.weight != 1 {
                violations.push(Violation::InfiniteEdgeWeight(Element::Source(i)));
            }
        }
        for (i, e) in self.sinks.iter().enumerate() {
            if e.weight != 1 {
                violations.push(Violation::InfiniteEdgeWeight(Element::Sink(i)));
            }
        }
        if nv as i64 != h.a() {
            violations.push(Violation::VertexCount { expected: h.a(), found: nv });
        }
        if self.sources.len() as i64 != h.e_bot() {
            violations.push(Violation::SourceCount { expected: h.e_bot(), found: self.sources.len() });
        }
        if self.sinks.len() as i64 != h.e_top() {
            violations.push(Violation::SinkCount { expected: h.e_top(), found: self.sinks.len() });
        }
        let mut left: Vec<i64> = self.labels.iter().map(|l| l.0).collect();
        let mut right: Vec<i64> = self.labels.iter().map(|l| l.1).collect();
        left.sort_unstable();
        right.sort_unstable();
        if left != h.b_left() {
            violations.push(Violation::LeftLabels);
        }
        if right != h.b_right() {
            violations.push(Violation::RightLabels);
        }
        for (v, &(l, r)) in self.labels.iter().enumerate() {
            let d = self.divergence(v);
            if d != l + r {
                violations.push(Violation::Divergence { vertex: v, divergence: d, expected: l + r });
            }
        }
        Validation { violations }
    }

    /// Element count, degree and codegree for a diagram of polygon `data`.
    pub fn stats(&self, data: &PolygonData) -> Result<DiagramStats, DiagramError> {
        let genus = self.genus();
        let n = self.num_elements() as i64;
        let expected = data.n_elements(genus);
        if n != expected {
            return Err(DiagramError::ElementCount { found: n, expected });
        }
        let deg = self.degree();
        let codeg = data.g_max - genus - deg;
        if codeg < 0 {
            return Err(DiagramError::NegativeCodegree(codeg));
        }
        Ok(DiagramStats { n, genus, deg, codeg })
    }

    /// Whether some pair of vertices is incomparable for the orientation order.
    pub fn has_incomparable_vertices(&self) -> bool {
        let reach = self.vertex_reachability();
        let n = self.labels.len();
        (0..n).any(|u| (0..n).any(|v| reach[u] & (1 << v) == 0 && reach[v] & (1 << u) == 0))
    }

    /// Groups of interchangeable edges: same kind, same endpoints, same
    /// weight. Each group lists element indices in increasing order.
    pub fn twin_classes(&self) -> Vec<Vec<usize>> {
        let mut groups: BTreeMap<(u8, usize, usize, i64), Vec<usize>> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            groups.entry((0, e.src, e.dst, e.weight)).or_default().push(self.element_index(Element::Bounded(i)));
        }
        for (i, e) in self.sources.iter().enumerate() {
            groups.entry((1, e.vertex, 0, e.weight)).or_default().push(self.element_index(Element::Source(i)));
        }
        for (i, e) in self.sinks.iter().enumerate() {
            groups.entry((2, e.vertex, 0, e.weight)).or_default().push(self.element_index(Element::Sink(i)));
        }
        groups.into_values().collect()
    }

    /// Text encoding: `V<i>:L=<l>,R=<r>`, `E:<src>-><dst>:w=<w>`,
    /// `SRC:-><dst>`, `SNK:<src>->` lines.
    pub fn encode(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FloorDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut lines = Vec::new();
        for (i, (l, r)) in self.labels.iter().enumerate() {
            lines.push(format!("V{i}:L={l},R={r}"));
        }
        for e in &self.edges {
            lines.push(format!("E:{}->{}:w={}", e.src, e.dst, e.weight));
        }
        for s in &self.sources {
            lines.push(if s.weight == 1 {
                format!("SRC:->{}", s.vertex)
            } else {
                format!("SRC:->{}:w={}", s.vertex, s.weight)
            });
        }
        for s in &self.sinks {
            lines.push(if s.weight == 1 {
                format!("SNK:{}->", s.vertex)
            } else {
                format!("SNK:{}->:w={}", s.vertex, s.weight)
            });
        }
        f.write_str(&lines.join("\n"))
    }
}

impl FromStr for FloorDiagram {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |line: &str| DiagramError::Parse(line.to_string());
        let num = |t: &str, line: &str| t.trim().parse::<i64>().map_err(|_| bad(line));
        let idx = |t: &str, line: &str| t.trim().parse::<usize>().map_err(|_| bad(line));
        let split_weight = |t: &str, line: &str| -> Result<(String, i64), DiagramError> {
            match t.split_once(":w=") {
                Some((head, w)) => Ok((head.to_string(), num(w, line)?)),
                None => Ok((t.to_string(), 1)),
            }
        };
        let mut labels = Vec::new();
        let (mut edges, mut sources, mut sinks) = (Vec::new(), Vec::new(), Vec::new());
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(rest) = line.strip_prefix("SRC:->") {
                let (v, w) = split_weight(rest, line)?;
                sources.push(InfiniteEdge { vertex: idx(&v, line)?, weight: w });
            } else if let Some(rest) = line.strip_prefix("SNK:") {
                let (v, w) = split_weight(rest, line)?;
                let v = v.strip_suffix("->").ok_or_else(|| bad(line))?;
                sinks.push(InfiniteEdge { vertex: idx(v, line)?, weight: w });
            } else if let Some(rest) = line.strip_prefix("E:") {
                let (ends, w) = split_weight(rest, line)?;
                let (a, b) = ends.split_once("->").ok_or_else(|| bad(line))?;
                edges.push(BoundedEdge { src: idx(a, line)?, dst: idx(b, line)?, weight: w });
            } else if let Some(rest) = line.strip_prefix('V') {
                let (i, lr) = rest.split_once(":L=").ok_or_else(|| bad(line))?;
                let (l, r) = lr.split_once(",R=").ok_or_else(|| bad(line))?;
                if idx(i, line)? != labels.len() {
                    return Err(bad(line));
                }
                labels.push((num(l, line)?, num(r, line)?));
            } else {
                return Err(bad(line));
            }
        }
        FloorDiagram::new(labels, edges, sources, sinks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::LatticePolygon;

    fn tri3() -> (HProfile, PolygonData) {
        let p = LatticePolygon::trapezoid(1, 3, 0).unwrap();
        (p.profile().unwrap(), p.data())
    }

    const L: (i64, i64) = (0, 1);

    /// The four diagrams of the degree-3 triangle: two chains, a fork, and
    /// the genus-1 chain with a doubled middle edge.
    pub(crate) fn triangle3_diagrams() -> [FloorDiagram; 4] {
        [
            FloorDiagram::from_parts(&[L; 3], &[(0, 1, 1), (1, 2, 1)], &[0, 0, 1], &[]).unwrap(),
            FloorDiagram::from_parts(&[L; 3], &[(0, 1, 2), (1, 2, 1)], &[0, 0, 0], &[]).unwrap(),
            FloorDiagram::from_parts(&[L; 3], &[(0, 1, 1), (0, 2, 1)], &[0, 0, 0], &[]).unwrap(),
            FloorDiagram::from_parts(&[L; 3], &[(0, 1, 1), (0, 1, 1), (1, 2, 1)], &[0, 0, 0], &[]).unwrap(),
        ]
    }

    #[test]
    fn triangle_diagrams_validate() {
        let (h, data) = tri3();
        let ds = triangle3_diagrams();
        for (d, g) in ds.iter().zip([0, 0, 0, 1]) {
            let v = d.validate(&h, g);
            assert!(v.is_valid(), "{d}\n{v:?}");
            assert_eq!(d.stats(&data).unwrap().n, 9 - 1 + g);
        }
        let s: Vec<_> = ds.iter().map(|d| d.stats(&data).unwrap()).collect();
        assert_eq!((s[0].deg, s[0].codeg), (0, 1));
        assert_eq!((s[1].deg, s[1].codeg), (1, 0));
        assert_eq!((s[2].deg, s[2].codeg), (0, 1));
        assert_eq!((s[3].deg, s[3].codeg, s[3].n), (0, 0, 9));
    }

    #[test]
    fn invalid_diagrams_are_diagnosed() {
        let (h, _) = tri3();
        let heavy_sink = FloorDiagram::new(
            vec![L; 3],
            vec![BoundedEdge { src: 0, dst: 1, weight: 1 }, BoundedEdge { src: 1, dst: 2, weight: 1 }],
            vec![InfiniteEdge { vertex: 0, weight: 1 }; 3],
            vec![InfiniteEdge { vertex: 2, weight: 2 }],
        )
        .unwrap();
        let v = heavy_sink.validate(&h, 0);
        assert!(v.violations.contains(&Violation::InfiniteEdgeWeight(Element::Sink(0))));

        let split = FloorDiagram::from_parts(&[L; 3], &[(0, 1, 1)], &[0, 0, 2], &[]).unwrap();
        let v = split.validate(&h, 0);
        assert!(v.violations.contains(&Violation::Disconnected));
        assert!(!v.is_valid());

        let cyc = FloorDiagram::from_parts(&[L; 3], &[(0, 1, 1), (1, 0, 1), (1, 2, 1)], &[0, 0, 0], &[]).unwrap();
        assert!(cyc.validate(&h, 1).violations.contains(&Violation::Cycle));
        assert!(FloorDiagram::from_parts(&[L; 2], &[(0, 5, 1)], &[], &[]).is_err());
    }

    #[test]
    fn text_round_trip() {
        for d in triangle3_diagrams() {
            let back: FloorDiagram = d.to_string().parse().unwrap();
            assert_eq!(back, d);
        }
        assert_eq!(
            triangle3_diagrams()[1].to_string(),
            "V0:L=0,R=1\nV1:L=0,R=1\nV2:L=0,R=1\nE:0->1:w=2\nE:1->2:w=1\nSRC:->0\nSRC:->0\nSRC:->0"
        );
        assert!("X:1".parse::<FloorDiagram>().is_err());
    }

    #[test]
    fn incomparable_vertices_flagged() {
        let ds = triangle3_diagrams();
        assert!(!ds[0].has_incomparable_vertices());
        assert!(ds[2].has_incomparable_vertices());
    }
}
