use super::{BoundedEdge, FloorDiagram, InfiniteEdge};

/// Relabel-invariant comparison key. Two diagrams are isomorphic iff their
/// keys are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Key {
    labels: Vec<(i64, i64)>,
    edges: Vec<(usize, usize, i64)>,
    sources: Vec<(usize, i64)>,
    sinks: Vec<(usize, i64)>,
}

/// A diagram in canonical vertex order together with its vertex symmetries.
#[derive(Debug, Clone)]
pub struct Canonical {
    /// Isomorphic copy with vertices and edges in canonical order.
    pub diagram: FloorDiagram,
    /// Every vertex permutation `phi` (as `phi[v]`) of the *original* diagram
    /// preserving labels, edges and weights.
    pub vertex_automorphisms: Vec<Vec<usize>>,
}

fn key_for(d: &FloorDiagram, pos: &[usize]) -> Key {
    let mut labels = vec![(0, 0); pos.len()];
    for (v, &p) in pos.iter().enumerate() {
        labels[p] = d.labels[v];
    }
    let mut edges: Vec<_> = d.edges.iter().map(|e| (pos[e.src], pos[e.dst], e.weight)).collect();
    let mut sources: Vec<_> = d.sources.iter().map(|s| (pos[s.vertex], s.weight)).collect();
    let mut sinks: Vec<_> = d.sinks.iter().map(|s| (pos[s.vertex], s.weight)).collect();
    edges.sort_unstable();
    sources.sort_unstable();
    sinks.sort_unstable();
    Key { labels, edges, sources, sinks }
}

/// Calls `f(order)` for every topological order of the vertices. In an
/// acyclic diagram any isomorphism maps topological orders to topological
/// orders, so minimising over them is enough.
fn for_each_topological_order(d: &FloorDiagram, f: &mut impl FnMut(&[usize])) {
    let n = d.labels.len();
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in &d.edges {
        indeg[e.dst] += 1;
        out[e.src].push(e.dst);
    }
    let mut used = vec![false; n];
    let mut order = Vec::with_capacity(n);
    fn rec(
        indeg: &mut [usize],
        out: &[Vec<usize>],
        used: &mut [bool],
        order: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]),
    ) {
        let n = indeg.len();
        if order.len() == n {
            f(order);
            return;
        }
        for v in 0..n {
            if used[v] || indeg[v] != 0 {
                continue;
            }
            used[v] = true;
            order.push(v);
            for &u in &out[v] {
                indeg[u] -= 1;
            }
            rec(indeg, out, used, order, f);
            for &u in &out[v] {
                indeg[u] += 1;
            }
            order.pop();
            used[v] = false;
        }
    }
    rec(&mut indeg, &out, &mut used, &mut order, f);
}

impl FloorDiagram {
    /// Canonical relabelling and vertex automorphism group. Requires an
    /// acyclic diagram; cyclic diagrams fall back to all permutations.
    pub fn canonical(&self) -> Canonical {
        let n = self.labels.len();
        let mut best: Option<(Key, Vec<Vec<usize>>)> = None;
        let mut visit = |order: &[usize]| {
            let mut pos = vec![0; n];
            for (i, &v) in order.iter().enumerate() {
                pos[v] = i;
            }
            let key = key_for(self, &pos);
            match &mut best {
                Some((k, positions)) if *k == key => positions.push(pos),
                Some((k, _)) if *k < key => {}
                _ => best = Some((key, vec![pos])),
            }
        };
        if self.is_acyclic() {
            for_each_topological_order(self, &mut visit);
        } else {
            for_each_permutation(n, &mut visit);
        }
        let (key, positions) = best.expect("at least one ordering");
        // pos_0^{-1} . pos_i maps the diagram onto itself.
        let base = &positions[0];
        let mut inv_base = vec![0; n];
        for (v, &p) in base.iter().enumerate() {
            inv_base[p] = v;
        }
        let vertex_automorphisms = positions.iter().map(|pos| pos.iter().map(|&p| inv_base[p]).collect()).collect();
        let diagram = FloorDiagram {
            labels: key.labels,
            edges: key.edges.into_iter().map(|(src, dst, weight)| BoundedEdge { src, dst, weight }).collect(),
            sources: key.sources.into_iter().map(|(vertex, weight)| InfiniteEdge { vertex, weight }).collect(),
            sinks: key.sinks.into_iter().map(|(vertex, weight)| InfiniteEdge { vertex, weight }).collect(),
        };
        Canonical { diagram, vertex_automorphisms }
    }

    /// The canonical text encoding; equal iff the diagrams are isomorphic.
    pub fn canonical_form(&self) -> String {
        self.canonical().diagram.to_string()
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    /// `|Aut(D)|`: vertex symmetries times permutations of parallel edges
    /// (same endpoints, same weight) and of infinite edges at one vertex.
    pub fn automorphism_count(&self) -> u128 {
        let vertex = self.canonical().vertex_automorphisms.len() as u128;
        self.twin_classes().iter().map(|c| factorial(c.len())).product::<u128>() * vertex
    }

    /// For every vertex automorphism, the induced permutation of element
    /// indices that keeps each twin class in increasing order.
    pub fn element_automorphisms(&self) -> Vec<Vec<usize>> {
        let canon = self.canonical();
        let classes = self.twin_classes();
        let n = self.num_elements();
        let nv = self.num_vertices();
        // identify the class of each element by its signature
        let signature = |phi: &[usize], idx: usize| -> (u8, usize, usize, i64) {
            match self.element_at(idx) {
                super::Element::Bounded(i) => {
                    let e = self.edges[i];
                    (0, phi[e.src], phi[e.dst], e.weight)
                }
                super::Element::Source(i) => (1, phi[self.sources[i].vertex], 0, self.sources[i].weight),
                super::Element::Sink(i) => (2, phi[self.sinks[i].vertex], 0, self.sinks[i].weight),
                super::Element::Vertex(_) => unreachable!(),
            }
        };
        let identity: Vec<usize> = (0..nv).collect();
        let by_sig: std::collections::HashMap<_, &Vec<usize>> =
            classes.iter().map(|c| (signature(&identity, c[0]), c)).collect();
        canon
            .vertex_automorphisms
            .iter()
            .map(|phi| {
                let mut map: Vec<usize> = (0..n).collect();
                map[..nv].copy_from_slice(phi);
                for class in &classes {
                    let image = by_sig[&signature(phi, class[0])];
                    for (k, &x) in class.iter().enumerate() {
                        map[x] = image[k];
                    }
                }
                map
            })
            .collect()
    }
}

fn for_each_permutation(n: usize, f: &mut impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(p, k + 1, f);
            p.swap(k, i);
        }
    }
    rec(&mut p, 0, f);
}

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

#[cfg(test)]
mod tests {
    use crate::diagram::FloorDiagram;

    const L: (i64, i64) = (0, 1);

    #[test]
    fn isomorphic_relabellings_share_a_canonical_form() {
        let a = FloorDiagram::from_parts(&[L; 3], &[(0, 1, 1), (0, 2, 1)], &[0, 0, 0], &[]).unwrap();
        let b = FloorDiagram::from_parts(&[L; 3], &[(2, 0, 1), (2, 1, 1)], &[2, 2, 2], &[]).unwrap();
        let c = FloorDiagram::from_parts(&[L; 3], &[(0, 1, 1), (1, 2, 1)], &[0, 0, 1], &[]).unwrap();
        assert!(a.is_isomorphic(&b));
        assert!(!a.is_isomorphic(&c));
    }

    #[test]
    fn automorphism_counts() {
        // fork: swap the two tips, and the three sources
        let fork = FloorDiagram::from_parts(&[L; 3], &[(0, 1, 1), (0, 2, 1)], &[0, 0, 0], &[]).unwrap();
        assert_eq!(fork.automorphism_count(), 2 * 6);
        let chain = FloorDiagram::from_parts(&[L; 3], &[(0, 1, 1), (1, 2, 1)], &[0, 0, 1], &[]).unwrap();
        assert_eq!(chain.automorphism_count(), 2);
        let doubled = FloorDiagram::from_parts(&[L; 3], &[(0, 1, 1), (0, 1, 1), (1, 2, 1)], &[0, 0, 0], &[]).unwrap();
        assert_eq!(doubled.automorphism_count(), 2 * 6);
        // distinct labels break the symmetry of the fork
        let asym =
            FloorDiagram::from_parts(&[(0, 1), (0, 1), (0, 2)], &[(0, 1, 1), (0, 2, 1)], &[0, 0, 0], &[]).unwrap();
        assert_eq!(asym.automorphism_count(), 6);
    }

    #[test]
    fn element_automorphisms_of_the_fork() {
        let fork = FloorDiagram::from_parts(&[L; 3], &[(0, 1, 1), (0, 2, 1)], &[0, 0, 0], &[]).unwrap();
        let autos = fork.element_automorphisms();
        assert_eq!(autos.len(), 2);
        assert!(autos.contains(&vec![0, 2, 1, 4, 3, 5, 6, 7]));
    }
}
