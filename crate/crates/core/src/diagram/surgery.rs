//! The edge-merging moves `A+` and `A-`.
//!
//! Both take a bounded edge `e1: v1 -> v2` and a second edge `e2`. `A+` slides
//! the tail of an edge leaving `v1` along `e1` to `v2`; `A-` slides the head of
//! an edge entering `v2` back along `e1` to `v1`. In both cases `e1` absorbs the
//! weight of `e2`, so every divergence is preserved.

use super::{DiagramError, Element, FloorDiagram};

impl FloorDiagram {
    /// `A+(e1, e2)`: `e2` (bounded or sink) leaves the tail of `e1` and does
    /// not enter its head.
    pub fn a_plus(&self, e1: Element, e2: Element) -> Result<FloorDiagram, DiagramError> {
        let (i, v1, v2) = self.bounded_ends(e1)?;
        if e1 == e2 {
            return Err(DiagramError::BadSurgery("the two edges must differ".into()));
        }
        let mut out = self.clone();
        let w2 = match e2 {
            Element::Bounded(j) if j < self.edges.len() => {
                let e = self.edges[j];
                if e.src != v1 || e.dst == v2 {
                    return Err(DiagramError::BadSurgery(format!("{e2} must leave V{v1} and not enter V{v2}")));
                }
                out.edges[j].src = v2;
                e.weight
            }
            Element::Sink(j) if j < self.sinks.len() => {
                if self.sinks[j].vertex != v1 {
                    return Err(DiagramError::BadSurgery(format!("{e2} must leave V{v1}")));
                }
                out.sinks[j].vertex = v2;
                self.sinks[j].weight
            }
            _ => return Err(DiagramError::BadSurgery(format!("{e2} is not a bounded edge or sink"))),
        };
        out.edges[i].weight += w2;
        if !out.is_acyclic() {
            return Err(DiagramError::WouldCreateCycle);
        }
        Ok(out)
    }

    /// `A-(e1, e2)`: `e2` (bounded or source) enters the head of `e1` and does
    /// not leave its tail.
    pub fn a_minus(&self, e1: Element, e2: Element) -> Result<FloorDiagram, DiagramError> {
        let (i, v1, v2) = self.bounded_ends(e1)?;
        if e1 == e2 {
            return Err(DiagramError::BadSurgery("the two edges must differ".into()));
        }
        let mut out = self.clone();
        let w2 = match e2 {
            Element::Bounded(j) if j < self.edges.len() => {
                let e = self.edges[j];
                if e.dst != v2 || e.src == v1 {
                    return Err(DiagramError::BadSurgery(format!("{e2} must enter V{v2} and not leave V{v1}")));
                }
                out.edges[j].dst = v1;
                e.weight
            }
            Element::Source(j) if j < self.sources.len() => {
                if self.sources[j].vertex != v2 {
                    return Err(DiagramError::BadSurgery(format!("{e2} must enter V{v2}")));
                }
                out.sources[j].vertex = v1;
                self.sources[j].weight
            }
            _ => return Err(DiagramError::BadSurgery(format!("{e2} is not a bounded edge or source"))),
        };
        out.edges[i].weight += w2;
        if !out.is_acyclic() {
            return Err(DiagramError::WouldCreateCycle);
        }
        Ok(out)
    }

    fn bounded_ends(&self, e: Element) -> Result<(usize, usize, usize), DiagramError> {
        match e {
            Element::Bounded(i) if i < self.edges.len() => Ok((i, self.edges[i].src, self.edges[i].dst)),
            _ => Err(DiagramError::BadSurgery(format!("{e} is not a bounded edge"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const L: (i64, i64) = (0, 1);

    fn fork() -> FloorDiagram {
        FloorDiagram::from_parts(&[L; 3], &[(0, 1, 1), (0, 2, 1)], &[0, 0, 0], &[]).unwrap()
    }

    #[test]
    fn a_plus_on_the_fork_gives_the_weighted_chain() {
        let d = fork().a_plus(Element::Bounded(0), Element::Bounded(1)).unwrap();
        let chain = FloorDiagram::from_parts(&[L; 3], &[(0, 1, 2), (1, 2, 1)], &[0, 0, 0], &[]).unwrap();
        assert!(d.is_isomorphic(&chain));
        for v in 0..3 {
            assert_eq!(d.divergence(v), fork().divergence(v));
        }
        assert_eq!(d.degree(), fork().degree() + 1);
    }

    #[test]
    fn a_minus_slides_a_source() {
        let chain = FloorDiagram::from_parts(&[L; 3], &[(0, 1, 1), (1, 2, 1)], &[0, 0, 1], &[]).unwrap();
        let d = chain.a_minus(Element::Bounded(0), Element::Source(2)).unwrap();
        assert_eq!(d.edges()[0].weight, 2);
        assert!(d.sources().iter().all(|s| s.vertex == 0));
    }

    #[test]
    fn illegal_surgeries_are_rejected() {
        let d = fork();
        assert!(d.a_plus(Element::Bounded(0), Element::Bounded(0)).is_err());
        assert!(d.a_plus(Element::Source(0), Element::Bounded(1)).is_err());
        assert!(d.a_minus(Element::Bounded(0), Element::Bounded(1)).is_err());
        // sliding 0->2 along 0->1 would give 1->2 next to 2->1
        let tri = FloorDiagram::from_parts(&[L; 3], &[(0, 1, 1), (2, 1, 1), (0, 2, 1)], &[0, 0, 0], &[]).unwrap();
        assert_eq!(tri.a_plus(Element::Bounded(0), Element::Bounded(2)), Err(DiagramError::WouldCreateCycle));
    }
}
