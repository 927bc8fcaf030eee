//! Slow, independent reference implementation.
//!
//! Nothing here reuses the engine's enumeration, canonical forms, poset code
//! or multiplicity rules. Diagrams come from a plain search over labelings,
//! infinite-edge attachments and bounded-edge multisets followed by a
//! validity filter; isomorphism classes come from trying every vertex
//! permutation; markings come from listing every linear extension and
//! identifying the ones whose labelled pictures coincide; multiplicities use
//! the symmetric closed form for paired edges. Polynomials live in a tiny
//! local type and are compared with the engine through the canonical text
//! serialization.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use refined_floors::polygon::HProfile;

/// Laurent polynomial in `q^{1/2}`: doubled exponent -> coefficient.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Poly(BTreeMap<i64, i128>);

impl Poly {
    pub fn one() -> Self {
        Poly(BTreeMap::from([(0, 1)]))
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for (e, c) in &other.0 {
            *self.0.entry(*e).or_insert(0) += c;
        }
        self.0.retain(|_, c| *c != 0);
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = BTreeMap::new();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &other.0 {
                *out.entry(e1 + e2).or_insert(0) += c1 * c2;
            }
        }
        out.retain(|_, c| *c != 0);
        Poly(out)
    }

    fn halve(&self) -> Poly {
        assert!(self.0.values().all(|c| c % 2 == 0), "odd coefficient in {self:?}");
        Poly(self.0.iter().map(|(e, c)| (*e, c / 2)).collect())
    }

    /// `[w] = q^{(w-1)/2} + q^{(w-3)/2} + ... + q^{-(w-1)/2}`, with exponents
    /// scaled by `scale` (so `scale = 2` gives `[w]_2`).
    fn quantum(w: i64, scale: i64) -> Poly {
        Poly((0..w).map(|j| (scale * (w - 1 - 2 * j), 1)).collect())
    }

    /// `[w]^2`
    fn square(w: i64) -> Poly {
        let b = Poly::quantum(w, 1);
        b.mul(&b)
    }

    /// `[w]_2`
    fn doubled(w: i64) -> Poly {
        Poly::quantum(w, 2)
    }

    pub fn has_half_integer_exponent(&self) -> bool {
        self.0.keys().any(|e| e % 2 != 0)
    }

    /// Canonical text: `c*q^e` terms by decreasing exponent, half-integers
    /// as `k/2`, zero as `0`.
    pub fn render(&self) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        self.0
            .iter()
            .rev()
            .map(|(e, c)| if e % 2 == 0 { format!("{c}*q^{}", e / 2) } else { format!("{c}*q^{e}/2") })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// A floor diagram with vertices `0..a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    pub labels: Vec<(i64, i64)>,
    /// `(tail, head, weight)`, sorted
    pub edges: Vec<(usize, usize, i64)>,
    /// vertex of each source, sorted
    pub sources: Vec<usize>,
    /// vertex of each sink, sorted
    pub sinks: Vec<usize>,
}

impl Graph {
    fn relabel(&self, perm: &[usize]) -> Graph {
        let mut labels = vec![(0, 0); self.labels.len()];
        for (v, &p) in perm.iter().enumerate() {
            labels[p] = self.labels[v];
        }
        let mut edges: Vec<_> = self.edges.iter().map(|&(u, v, w)| (perm[u], perm[v], w)).collect();
        let mut sources: Vec<_> = self.sources.iter().map(|&v| perm[v]).collect();
        let mut sinks: Vec<_> = self.sinks.iter().map(|&v| perm[v]).collect();
        edges.sort_unstable();
        sources.sort_unstable();
        sinks.sort_unstable();
        Graph { labels, edges, sources, sinks }
    }

    /// Smallest relabelling over all vertex permutations.
    pub fn canonical(&self) -> Graph {
        permutations(self.labels.len()).iter().map(|p| self.relabel(p)).min().expect("at least the identity")
    }

    fn is_acyclic(&self) -> bool {
        acyclic(self.labels.len(), self.edges.iter().map(|&(u, v, _)| (u, v)))
    }

    fn is_connected(&self) -> bool {
        connected(self.labels.len(), self.edges.iter().map(|&(u, v, _)| (u, v)))
    }

    /// Every clause of the definition, checked from scratch.
    pub fn is_valid(&self, h: &HProfile, g: i64) -> bool {
        let a = self.labels.len();
        let mut ls: Vec<i64> = self.labels.iter().map(|l| l.0).collect();
        let mut rs: Vec<i64> = self.labels.iter().map(|l| l.1).collect();
        ls.sort_unstable();
        rs.sort_unstable();
        a as i64 == h.a()
            && ls == h.b_left()
            && rs == h.b_right()
            && self.sources.len() as i64 == h.e_bot()
            && self.sinks.len() as i64 == h.e_top()
            && self.edges.iter().all(|&(u, v, w)| u != v && u < a && v < a && w >= 1)
            && self.edges.len() as i64 - a as i64 + 1 == g
            && self.is_connected()
            && self.is_acyclic()
            && (0..a).all(|v| {
                let inflow: i64 = self.edges.iter().filter(|e| e.1 == v).map(|e| e.2).sum::<i64>()
                    + self.sources.iter().filter(|&&x| x == v).count() as i64;
                let outflow: i64 = self.edges.iter().filter(|e| e.0 == v).map(|e| e.2).sum::<i64>()
                    + self.sinks.iter().filter(|&&x| x == v).count() as i64;
                inflow - outflow == self.labels[v].0 + self.labels[v].1
            })
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn acyclic(n: usize, edges: impl Iterator<Item = (usize, usize)> + Clone) -> bool {
    let mut alive = vec![true; n];
    for _ in 0..n {
        let Some(v) = (0..n).find(|&v| alive[v] && !edges.clone().any(|(x, y)| y == v && alive[x])) else {
            return false;
        };
        alive[v] = false;
    }
    true
}

fn connected(n: usize, edges: impl Iterator<Item = (usize, usize)> + Clone) -> bool {
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    loop {
        let grown = edges.clone().find(|&(x, y)| seen[x] != seen[y]);
        match grown {
            Some((x, y)) => {
                seen[x] = true;
                seen[y] = true;
            }
            None => return seen.iter().all(|&s| s),
        }
    }
}

/// All vectors of `len` nonnegative integers summing to `total`.
fn compositions(total: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, len - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Nonincreasing lists of `parts` positive integers summing to `total`.
fn partitions(total: i64, parts: usize, max: i64) -> Vec<Vec<i64>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (1..=max.min(total)).rev() {
        for mut rest in partitions(total - first, parts - 1, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn distinct_orderings(values: &[i64]) -> BTreeSet<Vec<i64>> {
    permutations(values.len()).into_iter().map(|p| p.iter().map(|&i| values[i]).collect()).collect()
}

/// Every floor diagram of `(h, g)` up to isomorphism, as canonical graphs.
pub fn diagrams(h: &HProfile, g: i64) -> BTreeSet<Graph> {
    let mut found = BTreeSet::new();
    let a = h.a() as usize;
    if a == 0 || g < 0 {
        return found;
    }
    let n_edges = a - 1 + g as usize;
    let pairs: Vec<(usize, usize)> =
        (0..a).flat_map(|u| (0..a).filter(move |&v| v != u).map(move |v| (u, v))).collect();

    let mut labelings = BTreeSet::new();
    for ls in distinct_orderings(h.b_left()) {
        for rs in distinct_orderings(h.b_right()) {
            labelings.insert(ls.iter().copied().zip(rs.iter().copied()).collect::<Vec<_>>());
        }
    }
    // Flow across any cut is at most all sources plus all divergence.
    let max_weight = h.e_bot() + h.b_left().iter().chain(h.b_right()).map(|b| b.abs()).sum::<i64>();

    let structures: Vec<Vec<usize>> = compositions(n_edges, pairs.len())
        .into_iter()
        .filter(|m| {
            let support = || pairs.iter().zip(m).filter(|(_, &k)| k > 0).map(|(p, _)| *p);
            acyclic(a, support()) && connected(a, support())
        })
        .collect();

    for labels in &labelings {
        for src in compositions(h.e_bot() as usize, a) {
            for snk in compositions(h.e_top() as usize, a) {
                for mult in &structures {
                    let used: Vec<usize> = (0..pairs.len()).filter(|&i| mult[i] > 0).collect();
                    let mut totals = vec![0i64; pairs.len()];
                    search_totals(mult, &used, 0, &mut totals, max_weight, &mut |totals| {
                        let balanced = (0..a).all(|v| {
                            let inflow: i64 = used.iter().filter(|&&i| pairs[i].1 == v).map(|&i| totals[i]).sum();
                            let outflow: i64 = used.iter().filter(|&&i| pairs[i].0 == v).map(|&i| totals[i]).sum();
                            inflow + src[v] as i64 - outflow - snk[v] as i64 == labels[v].0 + labels[v].1
                        });
                        if !balanced {
                            return;
                        }
                        let splits: Vec<Vec<Vec<i64>>> =
                            used.iter().map(|&i| partitions(totals[i], mult[i], totals[i])).collect();
                        for_each_choice(&splits, &mut |choice| {
                            let mut edges = Vec::new();
                            for (slot, &i) in used.iter().enumerate() {
                                for &w in &choice[slot] {
                                    edges.push((pairs[i].0, pairs[i].1, w));
                                }
                            }
                            edges.sort_unstable();
                            let sources = (0..a).flat_map(|v| std::iter::repeat_n(v, src[v])).collect();
                            let sinks = (0..a).flat_map(|v| std::iter::repeat_n(v, snk[v])).collect();
                            let graph = Graph { labels: labels.clone(), edges, sources, sinks };
                            if graph.is_valid(h, g) {
                                found.insert(graph.canonical());
                            }
                        });
                    });
                }
            }
        }
    }
    found
}

fn search_totals(
    mult: &[usize],
    used: &[usize],
    depth: usize,
    totals: &mut Vec<i64>,
    max_weight: i64,
    visit: &mut dyn FnMut(&[i64]),
) {
    if depth == used.len() {
        visit(totals);
        return;
    }
    let i = used[depth];
    for t in mult[i] as i64..=max_weight {
        totals[i] = t;
        search_totals(mult, used, depth + 1, totals, max_weight, visit);
    }
    totals[i] = 0;
}

fn for_each_choice<T: Clone>(options: &[Vec<T>], visit: &mut dyn FnMut(&[T])) {
    fn go<T: Clone>(options: &[Vec<T>], acc: &mut Vec<T>, visit: &mut dyn FnMut(&[T])) {
        if acc.len() == options.len() {
            visit(acc);
            return;
        }
        for o in &options[acc.len()] {
            acc.push(o.clone());
            go(options, acc, visit);
            acc.pop();
        }
    }
    go(options, &mut Vec::new(), visit);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Item {
    Vertex(usize),
    /// index into `Graph::edges`
    Edge(usize),
    Source(usize),
    Sink(usize),
}

/// A marked diagram: each element described through the marks of itself
/// and its endpoints. Two markings give the same description exactly when
/// the marked diagrams are isomorphic.
type MarkedPicture = Vec<(u8, usize, usize, usize, i64)>;

pub struct Marked {
    pub pictures: Vec<MarkedPicture>,
}

fn items(d: &Graph) -> Vec<Item> {
    let mut out: Vec<Item> = (0..d.labels.len()).map(Item::Vertex).collect();
    out.extend((0..d.edges.len()).map(Item::Edge));
    out.extend((0..d.sources.len()).map(Item::Source));
    out.extend((0..d.sinks.len()).map(Item::Sink));
    out
}

/// Elements that must be marked before `x`.
fn predecessors(d: &Graph, x: Item, index: &dyn Fn(Item) -> usize) -> Vec<usize> {
    match x {
        Item::Vertex(v) => {
            let mut p: Vec<usize> =
                (0..d.edges.len()).filter(|&e| d.edges[e].1 == v).map(|e| index(Item::Edge(e))).collect();
            p.extend((0..d.sources.len()).filter(|&s| d.sources[s] == v).map(|s| index(Item::Source(s))));
            p
        }
        Item::Edge(e) => vec![index(Item::Vertex(d.edges[e].0))],
        Item::Source(_) => vec![],
        Item::Sink(t) => vec![index(Item::Vertex(d.sinks[t]))],
    }
}

/// Every marking of `d` up to isomorphism, by brute-force listing of linear
/// extensions.
pub fn markings(d: &Graph) -> Marked {
    let all = items(d);
    let position = |x: Item| all.iter().position(|&y| y == x).expect("item exists");
    let preds: Vec<Vec<usize>> = all.iter().map(|&x| predecessors(d, x, &position)).collect();
    let mut marks = vec![0usize; all.len()];
    let mut seen = HashSet::new();
    extend(&preds, &mut marks, 1, &mut |marks| {
        seen.insert(picture(d, &all, marks));
    });
    let mut pictures: Vec<_> = seen.into_iter().collect();
    pictures.sort();
    Marked { pictures }
}

fn extend(preds: &[Vec<usize>], marks: &mut Vec<usize>, next: usize, visit: &mut dyn FnMut(&[usize])) {
    if next > marks.len() {
        visit(marks);
        return;
    }
    for x in 0..marks.len() {
        if marks[x] == 0 && preds[x].iter().all(|&p| marks[p] != 0) {
            marks[x] = next;
            extend(preds, marks, next + 1, visit);
            marks[x] = 0;
        }
    }
}

fn picture(d: &Graph, all: &[Item], marks: &[usize]) -> MarkedPicture {
    let mark_of_vertex = |v: usize| marks[v];
    // labels are small integers; the offset keeps them nonnegative
    let label = |k: i64| (k + 1000) as usize;
    let mut pic: MarkedPicture = all
        .iter()
        .zip(marks)
        .map(|(&x, &m)| match x {
            Item::Vertex(v) => (0, m, label(d.labels[v].0), label(d.labels[v].1), 0),
            Item::Edge(e) => {
                let (u, v, w) = d.edges[e];
                (1, m, mark_of_vertex(u), mark_of_vertex(v), w)
            }
            Item::Source(s) => (2, m, 0, mark_of_vertex(d.sources[s]), 1),
            Item::Sink(t) => (3, m, mark_of_vertex(d.sinks[t]), 0, 1),
        })
        .collect();
    pic.sort_unstable();
    pic
}

/// Refined multiplicity of one marked picture for the pairing
/// `{1,2}, ..., {2s-1, 2s}`.
pub fn multiplicity(pic: &MarkedPicture, s: usize) -> Poly {
    let by_mark: BTreeMap<usize, &(u8, usize, usize, usize, i64)> = pic.iter().map(|e| (e.1, e)).collect();
    // (tail mark, head mark, weight) of an edge; 0 stands for infinity
    let ends = |e: &(u8, usize, usize, usize, i64)| (e.2, e.3, e.4);
    let mut single: BTreeSet<usize> = pic.iter().filter(|e| e.0 != 0).map(|e| e.1).collect();
    let mut factor = Poly::one();
    for k in 0..s {
        let (x, y) = (by_mark[&(2 * k + 1)], by_mark[&(2 * k + 2)]);
        let (x, y) = if x.0 == 0 { (y, x) } else { (x, y) };
        if x.0 == 0 {
            return Poly::default();
        }
        if y.0 == 0 {
            let (t, h, w) = ends(x);
            if t != y.1 && h != y.1 {
                return Poly::default();
            }
            single.remove(&x.1);
            factor = factor.mul(&Poly::doubled(w));
            continue;
        }
        let ((t1, h1, w1), (t2, h2, w2)) = (ends(x), ends(y));
        let same_head = h1 != 0 && h1 == h2;
        let same_tail = t1 != 0 && t1 == t2;
        if !same_head && !same_tail {
            return Poly::default();
        }
        single.remove(&x.1);
        single.remove(&y.1);
        let mut paired = Poly::square(w1).mul(&Poly::doubled(w2));
        paired.add_assign(&Poly::doubled(w1).mul(&Poly::square(w2)));
        factor = factor.mul(&paired.halve());
    }
    for m in single {
        factor = factor.mul(&Poly::square(by_mark[&m].4));
    }
    factor
}

/// Shear-normalised profiles with `a <= max_a`, `y <= max_y` and every side
/// slope in `[-max_slope, max_slope]`; degenerate polygons with `a > 0` are
/// skipped.
pub fn domain(max_a: i64, max_y: i64, max_slope: i64) -> Vec<HProfile> {
    fn sorted(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
        if len == 0 {
            return vec![vec![]];
        }
        (lo..=hi)
            .flat_map(|first| {
                sorted(len - 1, first, hi).into_iter().map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
            })
            .collect()
    }
    let mut out = BTreeSet::new();
    for a in 0..=max_a {
        for e_top in 0..=max_y {
            for e_bot in 0..=max_y - e_top - 2 * a {
                for bl in sorted(a as usize, 0, max_slope) {
                    if a > 0 && bl[0] != 0 {
                        continue;
                    }
                    for br in sorted(a as usize, -max_slope, max_slope) {
                        let Ok(h) = HProfile::new(a, e_top, e_bot, bl.clone(), br) else { continue };
                        let Ok(p) = h.polygon() else { continue };
                        if a > 0 && p.is_degenerate() {
                            continue;
                        }
                        out.insert(h);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}
