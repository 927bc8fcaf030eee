//! Executable checks of the identities, inequalities and conjectures
//! satisfied by the invariants. Each check returns a [`Report`].

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::invariant::{codegree_profile_of, GenusComputation};
use crate::laurent::SymLaurent;
use crate::marking::{enumerate_markings, multiplicity, Pairing};
use crate::polygon::{HProfile, LatticePolygon, LatticeTransform};
use crate::{Laurent, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The statement does not claim anything here; the note says what was
    /// observed anyway.
    OutsideHypotheses,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::OutsideHypotheses => "outside-hypotheses",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub check: String,
    pub params: String,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
    pub note: Option<String>,
}

impl Report {
    fn new(check: &str, params: String, ok: bool, lhs: String, rhs: String) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Report { check: check.to_string(), params, status, lhs, rhs, note: None }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// `Fail` is the only status that counts against a check.
    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "check={}  params={}  status={}  lhs={}  rhs={}",
            self.check, self.params, self.status, self.lhs, self.rhs
        )?;
        if let Some(note) = &self.note {
            write!(f, "  note={note}")?;
        }
        Ok(())
    }
}

/// Compact single-token rendering of a profile for report parameters.
pub fn profile_tag(h: &HProfile) -> String {
    let join = |v: &[i64]| v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(";");
    format!("a={},top={},bot={},L=[{}],R=[{}]", h.a(), h.e_top(), h.e_bot(), join(h.b_left()), join(h.b_right()))
}

fn join_ints(v: &[i64]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

/// `G_g(Δ, S)` is the same for the standard pairing and `trials` random
/// pairings of order `s`.
pub fn pairing_independence(h: &HProfile, g: i64, s: usize, trials: usize, seed: u64) -> Result<Report> {
    let comp = GenusComputation::new(h, g)?;
    let base = comp.standard_pairing(s)?;
    let expected: Laurent = comp.invariant_for(&base)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = format!("{},g={g},s={s},trials={trials},seed={seed}", profile_tag(h));
    for _ in 0..trials {
        let p = Pairing::random(s, comp.n_elements(), &mut rng)?;
        let got: Laurent = comp.invariant_for(&p)?;
        if got != expected {
            return Ok(Report::new("pairing-independence", params, false, expected.to_string(), got.to_string())
                .with_note(format!("pairing={p}")));
        }
    }
    Ok(Report::new("pairing-independence", params, true, expected.to_string(), expected.to_string()))
}

/// Every codegree coefficient is non-increasing in `s`.
pub fn monotonicity(h: &HProfile, g: i64) -> Result<Report> {
    let comp = GenusComputation::new(h, g)?;
    let top = comp.top_degree();
    let values: Vec<Laurent> = (0..=comp.s_max()).map(|s| comp.invariant(s)).collect::<Result<_>>()?;
    let profiles: Vec<Vec<i64>> = values.iter().map(|v| codegree_profile_of(v, top)).collect();
    let params = format!("{},g={g}", profile_tag(h));
    for (s, pair) in profiles.windows(2).enumerate().map(|(k, w)| (k + 1, w)) {
        for (i, (before, after)) in pair[0].iter().zip(&pair[1]).enumerate() {
            if after > before {
                return Ok(Report::new(
                    "monotonicity",
                    params,
                    false,
                    values[s - 1].to_string(),
                    values[s].to_string(),
                )
                .with_note(format!("codegree {i} increases from s={} to s={s}", s - 1)));
            }
        }
    }
    let first = values.first().map(|v| v.to_string()).unwrap_or_default();
    let last = values.last().map(|v| v.to_string()).unwrap_or_default();
    Ok(Report::new("monotonicity", params, true, first, last))
}

/// `μ_{S1}(D, m) - μ_{S2}(D, m)` has nonnegative coefficients for nested
/// random pairings `S1 ⊂ S2`, over every marked diagram of `(Δ, g)`.
pub fn positivity(h: &HProfile, g: i64, trials: usize, seed: u64) -> Result<Report> {
    let comp = GenusComputation::new(h, g)?;
    let n = comp.n_elements();
    let s_max = comp.s_max();
    let marked: Vec<_> = comp.diagrams().map(|d| Ok((d.clone(), enumerate_markings(d)?))).collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = format!("{},g={g},trials={trials},seed={seed}", profile_tag(h));
    let mut checked = 0usize;
    for t in 0..trials {
        let s2 = if s_max == 0 { 0 } else { 1 + t % s_max };
        let outer = Pairing::random(s2, n, &mut rng)?;
        let inner = outer.random_subset(t % (s2 + 1), &mut rng)?;
        for (d, markings) in &marked {
            for m in markings {
                let a: Laurent = multiplicity(d, m, &inner)?;
                let b: Laurent = multiplicity(d, m, &outer)?;
                let diff = a.try_sub(&b)?;
                checked += 1;
                if !diff.is_nonnegative() {
                    return Ok(Report::new("positivity", params, false, a.to_string(), b.to_string())
                        .with_note(format!("S1={inner} S2={outer} diagram={}", d.encode().replace('\n', " "))));
                }
            }
        }
    }
    Ok(Report::new("positivity", params, true, format!("{checked} marked comparisons"), "all differences >= 0".into()))
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, j| acc * (n - j) / (j + 1))
}

/// The `i`-th forward differences of `⟨G_g(Δ, s)⟩_i` over `s = 0..=s_max`.
pub fn forward_differences(values: &[i64], i: usize) -> Vec<i64> {
    let mut v = values.to_vec();
    for _ in 0..i {
        v = v.windows(2).map(|w| w[1] - w[0]).collect();
    }
    v
}

/// `s ↦ ⟨G_g(Δ, s)⟩_i` is a polynomial of degree `i` whose `i`-th forward
/// difference is `(-2)^i C(g_max - i, g)`.
pub fn polynomiality(h: &HProfile, g: i64, i: usize) -> Result<Report> {
    let comp = GenusComputation::new(h, g)?;
    let g_max = comp.data().g_max;
    let values: Vec<i64> = (0..=comp.s_max())
        .map(|s| Ok(comp.invariant::<i64>(s)?.codeg_coeff(comp.top_degree(), i as i64)))
        .collect::<Result<_>>()?;
    let expected = (-2i64).pow(i as u32) * binomial(g_max - i as i64, g);
    let diffs = forward_differences(&values, i);
    let holds = diffs.iter().all(|&d| d == expected);
    let within = 2 * i as i64 <= h.e_bot() && i as i64 <= g_max && g <= g_max;
    let params = format!("{},g={g},i={i}", profile_tag(h));
    let lhs = join_ints(&diffs);
    let rhs = format!("{expected}");
    let report = Report::new("polynomiality", params, holds, lhs, rhs)
        .with_note(format!("values={} forward differences a(s+1)-a(s)", join_ints(&values)));
    if within {
        return Ok(report);
    }
    let observed = if holds { "observed pass" } else { "observed fail" };
    Ok(Report { status: Status::OutsideHypotheses, note: Some(observed.to_string()), ..report })
}

/// `G_g(Δ, s+1) = G_g(Δ, s) - 2 G_g(Δ', s)` with `Δ'` the polygon with its
/// top corner cut off.
pub fn corner_cut(h: &HProfile, h_cut: &HProfile, g: i64, s: usize) -> Result<Report> {
    let comp = GenusComputation::new(h, g)?;
    let cut = GenusComputation::new(h_cut, g)?;
    let lhs: Laurent = comp.invariant(s + 1)?;
    let two = SymLaurent::constant(2);
    let rhs = comp.invariant::<i64>(s)?.try_sub(&cut.invariant::<i64>(s)?.try_mul(&two)?)?;
    let params = format!("{},cut={},g={g},s={s}", profile_tag(h), profile_tag(h_cut));
    Ok(Report::new("corner-cut", params, lhs == rhs, lhs.to_string(), rhs.to_string()))
}

/// Corner-cut check for a polygon whose top corner can be cut.
pub fn corner_cut_polygon(p: &LatticePolygon, g: i64, s: usize) -> Result<Report> {
    let cut = p.cut_top_corner()?;
    corner_cut(&p.profile()?, &cut.profile()?, g, s)
}

/// `G_g(Δ⁰_{a,a+b}, s) = Σ_j C(b+2j, j) G_g(Δ²_{a-j,b+2j}, s)`; terms with
/// `a - j = 0` are degenerate and vanish.
pub fn ab_formula(a: i64, b: i64, g: i64, s: usize) -> Result<Report> {
    let lhs_poly = LatticePolygon::trapezoid(0, a, a + b)?;
    let lhs: Laurent = GenusComputation::for_polygon(&lhs_poly, g)?.invariant(s)?;
    let mut rhs = Laurent::zero();
    let mut terms = Vec::new();
    for j in 0..a {
        let c = binomial(b + 2 * j, j);
        let poly = LatticePolygon::trapezoid(2, a - j, b + 2 * j)?;
        let term: Laurent = GenusComputation::for_polygon(&poly, g)?.invariant(s)?;
        terms.push(format!("{c}*({term})"));
        rhs.try_add_assign(&term.try_scalar_mul(&c)?)?;
    }
    let params = format!("a={a},b={b},g={g},s={s}");
    Ok(Report::new("ab-formula", params, lhs == rhs, lhs.to_string(), rhs.to_string())
        .with_note(format!("terms={}", terms.join(" + "))))
}

/// `G_g(p1, s) = G_g(p2, s)` when `t(p1)` is a translate of `p2`.
pub fn lattice_invariance(
    p1: &LatticePolygon,
    p2: &LatticePolygon,
    t: &LatticeTransform,
    g: i64,
    s: usize,
) -> Result<Report> {
    let params = format!("p1={p1},p2={p2},t={t},g={g},s={s}");
    let image = p1.apply_transform(t);
    if !image.congruent_by_translation(p2) {
        return Ok(Report::new("lattice-invariance", params, false, image.to_string(), p2.to_string())
            .with_note("t(p1) is not a translate of p2"));
    }
    if !p1.is_h_transverse() || !p2.is_h_transverse() {
        return Ok(Report {
            status: Status::OutsideHypotheses,
            ..Report::new("lattice-invariance", params, true, String::new(), String::new())
        }
        .with_note("both polygons must be h-transverse"));
    }
    let lhs: Laurent = GenusComputation::for_polygon(p1, g)?.invariant(s)?;
    let rhs: Laurent = GenusComputation::for_polygon(p2, g)?.invariant(s)?;
    Ok(Report::new("lattice-invariance", params, lhs == rhs, lhs.to_string(), rhs.to_string()))
}

/// Quantum-integer identities: `2[a][b][a+b] = [2]([a+b]²[a]₂ - [a+b]₂[a]²)
/// = [2]([a]²[b]₂ + [a]₂[b]²)` for `|a|, |b| <= range`, `[2k]/[2] = [k]₂`,
/// `[w]{w} = [w]₂` for odd `w`, and exactness of the paired-edge factor.
pub fn lemma32(range: i64) -> Result<Vec<Report>> {
    type L = Laurent;
    let mut out = Vec::new();
    let two = L::qint(2);
    let mut bad = None;
    for a in -range..=range {
        for b in -range..=range {
            let lhs = L::qint(a).try_mul(&L::qint(b))?.try_mul(&L::qint(a + b))?.try_scalar_mul(&2)?;
            let mid = L::bracket_sq(a + b)
                .try_mul(&L::bracket_sub2(a))?
                .try_sub(&L::bracket_sub2(a + b).try_mul(&L::bracket_sq(a))?)?
                .try_mul(&two)?;
            let right = L::bracket_sq(a)
                .try_mul(&L::bracket_sub2(b))?
                .try_add(&L::bracket_sub2(a).try_mul(&L::bracket_sq(b))?)?
                .try_mul(&two)?;
            if (lhs != mid || lhs != right) && bad.is_none() {
                bad = Some((a, b, lhs, mid, right));
            }
        }
    }
    let params = format!("a,b in [{},{}]", -range, range);
    out.push(match bad {
        None => Report::new("lemma32", params, true, "2[a][b][a+b]".into(), "[2]([a]^2[b]_2+[a]_2[b]^2)".into()),
        Some((a, b, l, m, r)) => {
            Report::new("lemma32", params, false, l.to_string(), format!("{m} ; {r}")).with_note(format!("a={a} b={b}"))
        }
    });

    let mut ok = true;
    for k in 1..=8 {
        ok &= L::qint(2 * k).exact_div(&two).ok() == Some(L::bracket_sub2(k));
    }
    out.push(Report::new("lemma32", "[2k]/[2],k=1..8".into(), ok, "[2k]/[2]".into(), "[k]_2".into()));

    let mut ok = true;
    for w in (1..=9).step_by(2) {
        ok &= L::qint(w).try_mul(&L::qbrace(w)?)? == L::bracket_sub2(w);
    }
    out.push(Report::new("lemma32", "[w]{w},w=1,3,..,9".into(), ok, "[w]{w}".into(), "[w]_2".into()));

    let mut ok = true;
    for w1 in 1..=8 {
        for w2 in 1..=8 {
            let Ok(f) = L::e2_factor(w1, w2) else {
                ok = false;
                continue;
            };
            let closed = L::bracket_sq(w1)
                .try_mul(&L::bracket_sub2(w2))?
                .try_add(&L::bracket_sub2(w1).try_mul(&L::bracket_sq(w2))?)?
                .try_div_scalar_exact(&2);
            ok &= f.has_integer_exponents() && closed.ok() == Some(f);
        }
    }
    out.push(Report::new(
        "lemma32",
        "e2_factor,w1,w2=1..8".into(),
        ok,
        "[w1][w2][w1+w2]/[2]".into(),
        "([w1]^2[w2]_2+[w1]_2[w2]^2)/2".into(),
    ));
    Ok(out)
}
