//! The invariants `G_g(Δ, S)` and `G_g(Δ, s)`.

use rayon::prelude::*;

use crate::diagram::{enumerate_diagrams, FloorDiagram};
use crate::laurent::{LaurentError, SymLaurent};
use crate::marking::{sum_over_all_markings, ElementPoset, Pairing};
use crate::polygon::{HProfile, LatticePolygon, PolygonData};
use crate::{Coefficient, Error, Result};

/// The floor diagrams of one `(Δ, g)`, prepared for repeated evaluation
/// under different pairings.
#[derive(Debug, Clone)]
pub struct GenusComputation {
    profile: HProfile,
    data: PolygonData,
    genus: i64,
    diagrams: Vec<Prepared>,
}

#[derive(Debug, Clone)]
struct Prepared {
    diagram: FloorDiagram,
    poset: ElementPoset,
    automorphisms: u128,
}

impl GenusComputation {
    pub fn new(profile: &HProfile, genus: i64) -> Result<Self> {
        let data = profile.data()?;
        let diagrams = enumerate_diagrams(profile, genus)?
            .into_iter()
            .map(|diagram| {
                let poset = ElementPoset::new(&diagram)?;
                let automorphisms = diagram.automorphism_count();
                Ok(Prepared { diagram, poset, automorphisms })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GenusComputation { profile: profile.clone(), data, genus, diagrams })
    }

    pub fn for_polygon(polygon: &LatticePolygon, genus: i64) -> Result<Self> {
        Self::new(&polygon.profile()?, genus)
    }

    pub fn profile(&self) -> &HProfile {
        &self.profile
    }

    pub fn data(&self) -> &PolygonData {
        &self.data
    }

    pub fn genus(&self) -> i64 {
        self.genus
    }

    /// `y - 1 + g`, the number of marks.
    pub fn n_elements(&self) -> usize {
        self.data.n_elements(self.genus).max(0) as usize
    }

    pub fn s_max(&self) -> usize {
        self.data.s_max(self.genus).max(0) as usize
    }

    /// `g_max - g`, the exponent codegrees are measured from.
    pub fn top_degree(&self) -> i64 {
        self.data.g_max - self.genus
    }

    pub fn diagrams(&self) -> impl ExactSizeIterator<Item = &FloorDiagram> + '_ {
        self.diagrams.iter().map(|p| &p.diagram)
    }

    pub fn num_diagrams(&self) -> usize {
        self.diagrams.len()
    }

    /// Per-diagram contributions `Σ_m μ_S(D, m)`, in diagram order.
    pub fn contributions<C: Coefficient>(&self, pairing: &Pairing) -> Result<Vec<SymLaurent<C>>> {
        pairing.check_within(self.n_elements())?;
        self.diagrams
            .par_iter()
            .map(|p| {
                let total: SymLaurent<C> = sum_over_all_markings(&p.diagram, &p.poset, pairing)?;
                let aut = C::from_u128(p.automorphisms).ok_or(LaurentError::Overflow)?;
                Ok(total.try_div_scalar_exact(&aut)?)
            })
            .collect()
    }

    /// `G_g(Δ, S)`.
    pub fn invariant_for<C: Coefficient>(&self, pairing: &Pairing) -> Result<SymLaurent<C>> {
        let mut total = SymLaurent::zero();
        for c in self.contributions::<C>(pairing)? {
            total.try_add_assign(&c)?;
        }
        ensure_integral(&total)?;
        Ok(total)
    }

    /// `G_g(Δ, s)` with the pairing `{1,2}, ..., {2s-1,2s}`.
    pub fn invariant<C: Coefficient>(&self, s: usize) -> Result<SymLaurent<C>> {
        self.invariant_for(&self.standard_pairing(s)?)
    }

    pub fn standard_pairing(&self, s: usize) -> Result<Pairing> {
        let s_max = self.s_max();
        if s > s_max {
            return Err(Error::SOutOfRange { s, s_max });
        }
        Ok(Pairing::standard(s, self.n_elements())?)
    }

    /// Contributions and totals for `s = 0..=s_hi`.
    pub fn table<C: Coefficient>(&self, s_hi: usize) -> Result<InvariantTable<C>> {
        let mut columns = Vec::new();
        let mut totals = Vec::new();
        for s in 0..=s_hi {
            let contributions = self.contributions::<C>(&self.standard_pairing(s)?)?;
            let mut total = SymLaurent::zero();
            for c in &contributions {
                total.try_add_assign(c)?;
            }
            ensure_integral(&total)?;
            columns.push(contributions);
            totals.push(total);
        }
        let rows = (0..self.diagrams.len()).map(|d| columns.iter().map(|col| col[d].clone()).collect()).collect();
        Ok(InvariantTable {
            profile: self.profile.clone(),
            genus: self.genus,
            diagrams: self.diagrams().cloned().collect(),
            rows,
            totals,
        })
    }

    /// `⟨G_g(Δ, s)⟩_i` for `i = 0..=2(g_max - g)`.
    pub fn codegree_profile<C: Coefficient>(&self, s: usize) -> Result<Vec<C>> {
        let g = self.invariant::<C>(s)?;
        Ok(codegree_profile_of(&g, self.top_degree()))
    }
}

pub fn codegree_profile_of<C: Coefficient>(g: &SymLaurent<C>, top: i64) -> Vec<C> {
    (0..=(2 * top).max(0)).map(|i| g.codeg_coeff(top, i)).collect()
}

fn ensure_integral<C: Coefficient>(p: &SymLaurent<C>) -> Result<()> {
    match p.terms().find(|(e, _)| e % 2 != 0) {
        Some((e, _)) => Err(Error::NonIntegralExponent(e)),
        None => Ok(()),
    }
}

/// `G_g(Δ, S)`.
pub fn invariant_s<C: Coefficient>(h: &HProfile, g: i64, pairing: &Pairing) -> Result<SymLaurent<C>> {
    GenusComputation::new(h, g)?.invariant_for(pairing)
}

/// `G_g(Δ, s)`.
pub fn invariant<C: Coefficient>(h: &HProfile, g: i64, s: usize) -> Result<SymLaurent<C>> {
    GenusComputation::new(h, g)?.invariant(s)
}

/// Per-diagram contributions and totals over a range of `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantTable<C: Coefficient> {
    pub profile: HProfile,
    pub genus: i64,
    pub diagrams: Vec<FloorDiagram>,
    /// `rows[d][s]`
    pub rows: Vec<Vec<SymLaurent<C>>>,
    /// `totals[s]`
    pub totals: Vec<SymLaurent<C>>,
}

impl<C: Coefficient> InvariantTable<C> {
    /// Whether the contribution of diagram `d` at `s` equals the one at
    /// `s - 1` (shown with a star).
    pub fn unchanged(&self, d: usize, s: usize) -> bool {
        s > 0 && self.rows[d][s] == self.rows[d][s - 1]
    }
}

pub fn contribution_table<C: Coefficient>(h: &HProfile, g: i64, s_hi: usize) -> Result<InvariantTable<C>> {
    GenusComputation::new(h, g)?.table(s_hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Laurent;

    fn trap(n: i64, a: i64, b: i64) -> HProfile {
        LatticePolygon::trapezoid(n, a, b).unwrap().profile().unwrap()
    }

    fn p(s: &str) -> Laurent {
        s.parse().unwrap()
    }

    #[test]
    fn cubic_invariants() {
        let c = GenusComputation::new(&trap(1, 3, 0), 0).unwrap();
        assert_eq!(c.s_max(), 4);
        for s in 0..=4 {
            let want = format!("1*q^1 + {}*q^0 + 1*q^-1", 10 - 2 * s);
            assert_eq!(c.invariant::<i64>(s).unwrap(), p(&want));
        }
        assert!(matches!(c.invariant::<i64>(5), Err(Error::SOutOfRange { s: 5, s_max: 4 })));
        assert_eq!(c.codegree_profile::<i64>(1).unwrap(), vec![1, 8, 1]);
        let top = GenusComputation::new(&trap(1, 3, 0), 1).unwrap();
        for s in 0..=top.s_max() {
            assert_eq!(top.invariant::<i64>(s).unwrap(), Laurent::one());
        }
    }

    #[test]
    fn table_rows_sum_to_totals() {
        let t = contribution_table::<i64>(&trap(1, 3, 0), 0, 4).unwrap();
        assert_eq!(t.rows.len(), 3);
        for s in 0..=4 {
            let sum = t.rows.iter().map(|r| r[s].clone()).fold(Laurent::zero(), |a, b| a + b);
            assert_eq!(sum, t.totals[s]);
        }
        assert!(!t.unchanged(0, 0));
        assert_eq!((0..3).filter(|&d| t.unchanged(d, 1)).count(), 2);
    }

    #[test]
    fn bad_pairings_and_empty_cases() {
        let h = trap(1, 3, 0);
        let far: Pairing = "8-9".parse().unwrap();
        assert!(invariant_s::<i64>(&h, 0, &far).is_err());
        assert!(invariant_s::<i64>(&h, 1, &far).is_ok());
        assert!(invariant::<i64>(&trap(2, 1, 4), 3, 0).unwrap().is_zero());
    }
}
