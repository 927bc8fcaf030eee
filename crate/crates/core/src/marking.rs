//! Markings, pairings and refined multiplicities.
//!
//! Elements (vertices and edges) are ordered by oriented paths, with every
//! edge sitting between its endpoints. A marking is a linear extension of that
//! order; a pairing glues consecutive marks `{i, i+1}`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::Rng;
use thiserror::Error;

use crate::diagram::{DiagramError, Element, FloorDiagram, MAX_ELEMENTS};
use crate::laurent::{LaurentError, SymLaurent};
use crate::Coefficient;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairingError {
    #[error("pairs are written i-(i+1) with i >= 1, got {0}")]
    BadPair(String),
    #[error("pairs starting at {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("pair {{{start},{}}} exceeds n = {n}", start + 1)]
    OutOfRange { start: usize, n: usize },
    #[error("no pairing of order {s} fits in 1..={n}")]
    TooLarge { s: usize, n: usize },
    #[error("invalid marking: {0}")]
    InvalidMarking(String),
}

/// A set of disjoint consecutive pairs `{i, i+1}`, stored by their starts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pairing {
    starts: Vec<usize>,
}

impl Pairing {
    pub fn new(mut starts: Vec<usize>) -> Result<Self, PairingError> {
        starts.sort_unstable();
        if let Some(&0) = starts.first() {
            return Err(PairingError::BadPair("0-1".into()));
        }
        for w in starts.windows(2) {
            if w[1] < w[0] + 2 {
                return Err(PairingError::Overlap(w[0], w[1]));
            }
        }
        Ok(Pairing { starts })
    }

    pub fn empty() -> Self {
        Pairing::default()
    }

    /// `{{1,2}, {3,4}, ..., {2s-1, 2s}}`, which must fit in `1..=n`.
    pub fn standard(s: usize, n: usize) -> Result<Self, PairingError> {
        if 2 * s > n {
            return Err(PairingError::TooLarge { s, n });
        }
        Ok(Pairing { starts: (0..s).map(|k| 2 * k + 1).collect() })
    }

    /// Uniformly random pairing of order `s` in `1..=n`.
    ///
    /// Sorted starts `i_1 < ... < i_s` with gaps of at least 2 correspond
    /// bijectively to `s`-subsets `{i_k - (k-1)}` of `1..=n-s`.
    pub fn random<R: Rng + ?Sized>(s: usize, n: usize, rng: &mut R) -> Result<Self, PairingError> {
        if 2 * s > n {
            return Err(PairingError::TooLarge { s, n });
        }
        let mut chosen = sample(rng, n - s, s).into_vec();
        chosen.sort_unstable();
        Ok(Pairing { starts: chosen.into_iter().enumerate().map(|(k, c)| c + 1 + k).collect() })
    }

    /// A uniformly random sub-pairing of order `s`.
    pub fn random_subset<R: Rng + ?Sized>(&self, s: usize, rng: &mut R) -> Result<Self, PairingError> {
        if s > self.starts.len() {
            return Err(PairingError::TooLarge { s, n: 2 * self.starts.len() });
        }
        let mut idx = sample(rng, self.starts.len(), s).into_vec();
        idx.sort_unstable();
        Ok(Pairing { starts: idx.into_iter().map(|i| self.starts[i]).collect() })
    }

    pub fn order(&self) -> usize {
        self.starts.len()
    }

    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    pub fn is_start(&self, i: usize) -> bool {
        self.starts.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &Pairing) -> bool {
        self.starts.iter().all(|&i| other.is_start(i))
    }

    pub fn check_within(&self, n: usize) -> Result<(), PairingError> {
        match self.starts.last() {
            Some(&start) if start + 1 > n => Err(PairingError::OutOfRange { start, n }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.starts.iter().map(|i| format!("{}-{}", i, i + 1)).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Pairing {
    type Err = PairingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Pairing::empty());
        }
        let mut starts = Vec::new();
        for part in s.split(',') {
            let bad = || PairingError::BadPair(part.trim().to_string());
            let (i, j) = part.trim().split_once('-').ok_or_else(bad)?;
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let j: usize = j.trim().parse().map_err(|_| bad())?;
            if i == 0 || j != i + 1 {
                return Err(bad());
            }
            starts.push(i);
        }
        Pairing::new(starts)
    }
}

/// The order on elements. `below[x]` is the bitmask of elements strictly
/// below `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementPoset {
    below: Vec<u64>,
}

impl ElementPoset {
    pub fn new(d: &FloorDiagram) -> Result<Self, DiagramError> {
        let n = d.num_elements();
        if n > MAX_ELEMENTS {
            return Err(DiagramError::TooManyElements(n));
        }
        if !d.is_acyclic() {
            return Err(DiagramError::WouldCreateCycle);
        }
        // direct covers: tail vertex < edge < head vertex
        let mut covers: Vec<u64> = vec![0; n];
        for idx in d.num_vertices()..n {
            let (tail, head) = d.endpoints(d.element_at(idx));
            if let Some(t) = tail {
                covers[idx] |= 1 << t;
            }
            if let Some(h) = head {
                covers[h] |= 1 << idx;
            }
        }
        let mut below = covers;
        loop {
            let mut changed = false;
            for x in 0..n {
                let mut acc = below[x];
                let mut bits = below[x];
                while bits != 0 {
                    let y = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    acc |= below[y];
                }
                if acc != below[x] {
                    below[x] = acc;
                    changed = true;
                }
            }
            if !changed {
                return Ok(ElementPoset { below });
            }
        }
    }

    pub fn len(&self) -> usize {
        self.below.len()
    }

    pub fn is_empty(&self) -> bool {
        self.below.is_empty()
    }

    pub fn less(&self, x: usize, y: usize) -> bool {
        self.below[y] & (1 << x) != 0
    }

    pub fn below(&self, x: usize) -> u64 {
        self.below[x]
    }

    /// Number of linear extensions.
    pub fn count_linear_extensions(&self) -> u128 {
        fn rec(p: &ElementPoset, mask: u64, full: u64, memo: &mut HashMap<u64, u128>) -> u128 {
            if mask == full {
                return 1;
            }
            if let Some(&v) = memo.get(&mask) {
                return v;
            }
            let mut total = 0;
            for x in 0..p.len() {
                if mask & (1 << x) == 0 && p.below[x] & !mask == 0 {
                    total += rec(p, mask | 1 << x, full, memo);
                }
            }
            memo.insert(mask, total);
            total
        }
        rec(self, 0, full_mask(self.len()), &mut HashMap::new())
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// An increasing bijection from elements to `1..=n`, indexed by element index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Marking {
    labels: Vec<usize>,
}

impl Marking {
    pub fn new(poset: &ElementPoset, labels: Vec<usize>) -> Result<Self, PairingError> {
        let n = poset.len();
        if labels.len() != n {
            return Err(PairingError::InvalidMarking(format!("{} labels for {n} elements", labels.len())));
        }
        let mut seen = vec![false; n + 1];
        for &l in &labels {
            if l == 0 || l > n || std::mem::replace(&mut seen[l], true) {
                return Err(PairingError::InvalidMarking(format!("labels must be a permutation of 1..={n}")));
            }
        }
        for y in 0..n {
            for x in 0..n {
                if poset.less(x, y) && labels[x] >= labels[y] {
                    return Err(PairingError::InvalidMarking(format!("element {x} precedes {y}")));
                }
            }
        }
        Ok(Marking { labels })
    }

    /// Builds a marking from the sequence of element indices in label order.
    pub fn from_sequence(poset: &ElementPoset, seq: &[usize]) -> Result<Self, PairingError> {
        let mut labels = vec![0; seq.len()];
        for (k, &x) in seq.iter().enumerate() {
            if x >= labels.len() {
                return Err(PairingError::InvalidMarking(format!("no element {x}")));
            }
            labels[x] = k + 1;
        }
        Self::new(poset, labels)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, element: usize) -> usize {
        self.labels[element]
    }

    /// Element indices in label order.
    pub fn sequence(&self) -> Vec<usize> {
        let mut seq = vec![0; self.labels.len()];
        for (x, &l) in self.labels.iter().enumerate() {
            seq[l - 1] = x;
        }
        seq
    }

    /// `m(<element>)=<k>` lines in element order.
    pub fn encode(&self, d: &FloorDiagram) -> String {
        self.labels
            .iter()
            .enumerate()
            .map(|(x, l)| format!("m({})={l}", d.element_at(x)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// How a pair `{x, y}` of elements of a diagram contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairShape {
    /// An edge of weight `w` with an adjacent vertex.
    EdgeVertex {
        edge: usize,
        vertex: usize,
        weight: i64,
    },
    /// Two edges both entering or both leaving a common vertex.
    EdgeEdge {
        first: usize,
        second: usize,
        weights: (i64, i64),
    },
    Incompatible,
}

pub fn pair_shape(d: &FloorDiagram, x: usize, y: usize) -> PairShape {
    let (ex, ey) = (d.element_at(x), d.element_at(y));
    match (ex.is_vertex(), ey.is_vertex()) {
        (true, true) => PairShape::Incompatible,
        (false, true) | (true, false) => {
            let (edge, vertex) = if ex.is_vertex() { (y, x) } else { (x, y) };
            let (tail, head) = d.endpoints(d.element_at(edge));
            if tail == Some(vertex) || head == Some(vertex) {
                let weight = d.weight(d.element_at(edge)).expect("edge");
                PairShape::EdgeVertex { edge, vertex, weight }
            } else {
                PairShape::Incompatible
            }
        }
        (false, false) => {
            let (tx, hx) = d.endpoints(ex);
            let (ty, hy) = d.endpoints(ey);
            let same_head = hx.is_some() && hx == hy;
            let same_tail = tx.is_some() && tx == ty;
            if same_head || same_tail {
                let weights = (d.weight(ex).expect("edge"), d.weight(ey).expect("edge"));
                PairShape::EdgeEdge { first: x.min(y), second: x.max(y), weights }
            } else {
                PairShape::Incompatible
            }
        }
    }
}

/// The split of the edges induced by a compatible marked, paired diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultPartition {
    /// unpaired edges
    pub e0: Vec<Element>,
    /// edges paired with an adjacent vertex
    pub e1: Vec<Element>,
    /// paired edges
    pub e2: Vec<(Element, Element)>,
}

/// `None` when some pair is incompatible.
pub fn compat_partition(
    d: &FloorDiagram,
    m: &Marking,
    pairing: &Pairing,
) -> Result<Option<MultPartition>, PairingError> {
    let n = d.num_elements();
    pairing.check_within(n)?;
    let seq = m.sequence();
    let mut paired = vec![false; n];
    let (mut e1, mut e2) = (Vec::new(), Vec::new());
    for &i in pairing.starts() {
        let (x, y) = (seq[i - 1], seq[i]);
        paired[x] = true;
        paired[y] = true;
        match pair_shape(d, x, y) {
            PairShape::Incompatible => return Ok(None),
            PairShape::EdgeVertex { edge, .. } => e1.push(d.element_at(edge)),
            PairShape::EdgeEdge { first, second, .. } => e2.push((d.element_at(first), d.element_at(second))),
        }
    }
    let e0 = (d.num_vertices()..n).filter(|&x| !paired[x]).map(|x| d.element_at(x)).collect();
    Ok(Some(MultPartition { e0, e1, e2 }))
}

/// The refined multiplicity of the marked diagram `(d, m)` for `pairing`.
pub fn multiplicity<C: Coefficient>(
    d: &FloorDiagram,
    m: &Marking,
    pairing: &Pairing,
) -> Result<SymLaurent<C>, crate::Error> {
    let Some(part) = compat_partition(d, m, pairing)? else {
        return Ok(SymLaurent::zero());
    };
    let w = |e: Element| d.weight(e).expect("edges carry weights");
    let mut acc = SymLaurent::one();
    for &e in &part.e0 {
        acc = acc.try_mul(&SymLaurent::bracket_sq(w(e)))?;
    }
    for &e in &part.e1 {
        acc = acc.try_mul(&SymLaurent::bracket_sub2(w(e)))?;
    }
    for &(e, f) in &part.e2 {
        acc = acc.try_mul(&SymLaurent::e2_factor(w(e), w(f))?)?;
    }
    debug_assert_eq!(acc.top_doubled(), Some(2 * d.degree()));
    Ok(acc)
}

/// All markings of `d` up to isomorphism, in lexicographic order of their
/// label sequences.
///
/// Interchangeable edges are forced into increasing label order, which picks
/// one marking per orbit of the edge swaps; the remaining vertex symmetries
/// are removed by keeping only orbit minima.
pub fn enumerate_markings(d: &FloorDiagram) -> Result<Vec<Marking>, DiagramError> {
    let poset = ElementPoset::new(d)?;
    let n = poset.len();
    let classes = d.twin_classes();
    let mut constrained: Vec<u64> = (0..n).map(|x| poset.below(x)).collect();
    for class in &classes {
        for w in class.windows(2) {
            constrained[w[1]] |= constrained[w[0]] | 1 << w[0];
        }
    }
    let autos = d.element_automorphisms();
    let mut out = Vec::new();
    let mut labels = vec![0; n];
    extend(&constrained, 0, 1, &mut labels, &mut |labels| {
        let is_min = autos.iter().all(|phi| {
            let mut image: Vec<usize> = (0..n).map(|x| labels[phi[x]]).collect();
            sort_within(&mut image, &classes);
            image.as_slice() >= labels
        });
        if is_min {
            out.push(Marking { labels: labels.to_vec() });
        }
    });
    out.sort();
    Ok(out)
}

fn sort_within(labels: &mut [usize], classes: &[Vec<usize>]) {
    for class in classes {
        let mut vals: Vec<usize> = class.iter().map(|&x| labels[x]).collect();
        vals.sort_unstable();
        for (&x, v) in class.iter().zip(vals) {
            labels[x] = v;
        }
    }
}

fn extend(below: &[u64], mask: u64, next: usize, labels: &mut [usize], f: &mut impl FnMut(&[usize])) {
    if next > below.len() {
        f(labels);
        return;
    }
    for x in 0..below.len() {
        if mask & (1 << x) == 0 && below[x] & !mask == 0 {
            labels[x] = next;
            extend(below, mask | 1 << x, next + 1, labels, f);
        }
    }
}

/// `ν(D)`: markings up to isomorphism. Every automorphism moves every
/// marking, so this is the number of linear extensions over `|Aut(D)|`.
pub fn nu(d: &FloorDiagram) -> Result<u128, DiagramError> {
    let ext = ElementPoset::new(d)?.count_linear_extensions();
    let aut = d.automorphism_count();
    debug_assert_eq!(ext % aut, 0);
    Ok(ext / aut)
}

/// Per-element and per-pair multiplicity factors of a diagram.
struct Factors<C> {
    single: Vec<SymLaurent<C>>,
    pair: Vec<Option<SymLaurent<C>>>,
    n: usize,
}

impl<C: Coefficient> Factors<C> {
    fn new(d: &FloorDiagram) -> Result<Self, LaurentError> {
        let n = d.num_elements();
        let single = (0..n)
            .map(|x| match d.weight(d.element_at(x)) {
                None => SymLaurent::one(),
                Some(w) => SymLaurent::bracket_sq(w),
            })
            .collect();
        let mut pair = vec![None; n * n];
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                pair[x * n + y] = match pair_shape(d, x, y) {
                    PairShape::Incompatible => None,
                    PairShape::EdgeVertex { weight, .. } => Some(SymLaurent::bracket_sub2(weight)),
                    PairShape::EdgeEdge { weights: (a, b), .. } => Some(SymLaurent::e2_factor(a, b)?),
                };
            }
        }
        Ok(Factors { single, pair, n })
    }
}

/// `Σ_m μ_S(D, m)` over *all* linear extensions `m` (not up to isomorphism),
/// by dynamic programming over down-sets.
pub fn sum_over_all_markings<C: Coefficient>(
    d: &FloorDiagram,
    poset: &ElementPoset,
    pairing: &Pairing,
) -> Result<SymLaurent<C>, crate::Error> {
    let n = poset.len();
    pairing.check_within(n)?;
    let factors = Factors::new(d)?;
    let mut memo = HashMap::new();
    Ok(down_set_sum(poset, pairing, &factors, 0, full_mask(n), &mut memo)?)
}

fn down_set_sum<C: Coefficient>(
    poset: &ElementPoset,
    pairing: &Pairing,
    factors: &Factors<C>,
    mask: u64,
    full: u64,
    memo: &mut HashMap<u64, SymLaurent<C>>,
) -> Result<SymLaurent<C>, LaurentError> {
    if mask == full {
        return Ok(SymLaurent::one());
    }
    if let Some(v) = memo.get(&mask) {
        return Ok(v.clone());
    }
    let n = factors.n;
    let position = mask.count_ones() as usize + 1;
    let available = |m: u64, x: usize| m & (1 << x) == 0 && poset.below(x) & !m == 0;
    let mut total = SymLaurent::zero();
    for x in (0..n).filter(|&x| available(mask, x)) {
        let after_x = mask | 1 << x;
        if pairing.is_start(position) {
            for y in (0..n).filter(|&y| available(after_x, y)) {
                if let Some(f) = &factors.pair[x * n + y] {
                    let rest = down_set_sum(poset, pairing, factors, after_x | 1 << y, full, memo)?;
                    if !rest.is_zero() {
                        total.try_add_assign(&rest.try_mul(f)?)?;
                    }
                }
            }
        } else {
            let rest = down_set_sum(poset, pairing, factors, after_x, full, memo)?;
            if !rest.is_zero() {
                total.try_add_assign(&rest.try_mul(&factors.single[x])?)?;
            }
        }
    }
    memo.insert(mask, total.clone());
    Ok(total)
}

/// `Σ μ_S(D, m)` over markings up to isomorphism, i.e. the contribution of
/// `d` to the invariant.
pub fn contribution<C: Coefficient>(d: &FloorDiagram, pairing: &Pairing) -> Result<SymLaurent<C>, crate::Error> {
    let poset = ElementPoset::new(d)?;
    let total: SymLaurent<C> = sum_over_all_markings(d, &poset, pairing)?;
    let aut = C::from_u128(d.automorphism_count()).ok_or(LaurentError::Overflow)?;
    Ok(total.try_div_scalar_exact(&aut)?)
}
