use std::collections::BTreeMap;

use super::{BoundedEdge, DiagramError, FloorDiagram, InfiniteEdge, MAX_ELEMENTS};
use crate::polygon::HProfile;

/// All floor diagrams of genus `g` for the profile `h`, one per isomorphism
/// class, each in canonical form, sorted by canonical encoding.
///
/// Vertices are generated in a fixed topological order. At each vertex we
/// choose its sources and sinks; the rest of the flow imposed by the
/// divergence condition leaves through bounded edges to later vertices.
pub fn enumerate_diagrams(h: &HProfile, g: i64) -> Result<Vec<FloorDiagram>, DiagramError> {
    let a = h.a() as usize;
    if a == 0 || g < 0 {
        return Ok(Vec::new());
    }
    let n_edges = a - 1 + g as usize;
    let total = a + n_edges + (h.e_bot() + h.e_top()) as usize;
    if total > MAX_ELEMENTS {
        return Err(DiagramError::TooManyElements(total));
    }
    let mut found: BTreeMap<String, FloorDiagram> = BTreeMap::new();
    for lefts in distinct_permutations(h.b_left()) {
        for rights in distinct_permutations(h.b_right()) {
            let labels: Vec<(i64, i64)> = lefts.iter().copied().zip(rights.iter().copied()).collect();
            let mut search = Search {
                labels: &labels,
                in_weight: vec![0; a],
                sources_left: h.e_bot(),
                sinks_left: h.e_top(),
                edges_left: n_edges,
                edges: Vec::new(),
                sources: Vec::new(),
                sinks: Vec::new(),
            };
            search.vertex(0, &mut |d| {
                let canon = d.canonical().diagram;
                found.entry(canon.to_string()).or_insert(canon);
            });
        }
    }
    Ok(found.into_values().collect())
}

struct Search<'a> {
    labels: &'a [(i64, i64)],
    in_weight: Vec<i64>,
    sources_left: i64,
    sinks_left: i64,
    edges_left: usize,
    edges: Vec<BoundedEdge>,
    sources: Vec<usize>,
    sinks: Vec<usize>,
}

impl Search<'_> {
    fn vertex(&mut self, i: usize, out: &mut impl FnMut(FloorDiagram)) {
        let a = self.labels.len();
        if i == a {
            if self.sources_left == 0 && self.sinks_left == 0 && self.edges_left == 0 {
                let d = FloorDiagram {
                    labels: self.labels.to_vec(),
                    edges: self.edges.clone(),
                    sources: self.sources.iter().map(|&vertex| InfiniteEdge { vertex, weight: 1 }).collect(),
                    sinks: self.sinks.iter().map(|&vertex| InfiniteEdge { vertex, weight: 1 }).collect(),
                };
                if d.is_connected() {
                    out(d);
                }
            }
            return;
        }
        let (l, r) = self.labels[i];
        let last = i + 1 == a;
        for s in 0..=self.sources_left {
            let flow = self.in_weight[i] + s - (l + r);
            if flow < 0 {
                continue;
            }
            for t in 0..=flow.min(self.sinks_left) {
                let rest = flow - t;
                if last && (rest != 0 || s != self.sources_left || t != self.sinks_left) {
                    continue;
                }
                self.sources.extend(std::iter::repeat_n(i, s as usize));
                self.sinks.extend(std::iter::repeat_n(i, t as usize));
                self.sources_left -= s;
                self.sinks_left -= t;
                self.distribute(i, i + 1, rest, out);
                self.sources_left += s;
                self.sinks_left += t;
                self.sources.truncate(self.sources.len() - s as usize);
                self.sinks.truncate(self.sinks.len() - t as usize);
            }
        }
    }

    /// Sends `rest` units of outgoing weight from vertex `i` to targets `j..`.
    fn distribute(&mut self, i: usize, j: usize, rest: i64, out: &mut impl FnMut(FloorDiagram)) {
        if rest == 0 {
            self.vertex(i + 1, out);
            return;
        }
        let a = self.labels.len();
        if j == a || self.edges_left == 0 {
            return;
        }
        let lo = if j + 1 == a { rest } else { 0 };
        for m in lo..=rest {
            for parts in partitions(m, m, self.edges_left) {
                for &w in &parts {
                    self.edges.push(BoundedEdge { src: i, dst: j, weight: w });
                }
                self.in_weight[j] += m;
                self.edges_left -= parts.len();
                self.distribute(i, j + 1, rest - m, out);
                self.edges_left += parts.len();
                self.in_weight[j] -= m;
                self.edges.truncate(self.edges.len() - parts.len());
            }
        }
    }
}

/// Partitions of `m` into at most `max_len` parts, each at most `max_part`,
/// parts non-increasing.
fn partitions(m: i64, max_part: i64, max_len: usize) -> Vec<Vec<i64>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    if max_len == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for first in (1..=max_part.min(m)).rev() {
        for mut tail in partitions(m - first, first, max_len - 1) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// Distinct orderings of a multiset, in lexicographic order.
pub(crate) fn distinct_permutations(items: &[i64]) -> Vec<Vec<i64>> {
    let mut cur: Vec<i64> = items.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // standard next-permutation
    loop {
        let n = cur.len();
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}
