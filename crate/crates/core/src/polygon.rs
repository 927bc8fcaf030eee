//! Convex lattice polygons, h-transversality and the boundary profile that
//! drives floor-diagram enumeration.

use std::collections::HashSet;
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

pub type Point = (i64, i64);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("need at least 3 distinct points, got {0}")]
    TooFewPoints(usize),
    #[error("repeated point ({0}, {1})")]
    RepeatedPoint(i64, i64),
    #[error("all points are collinear")]
    Collinear,
    #[error("vertex list is not convex at ({0}, {1})")]
    NotConvex(i64, i64),
    #[error("polygon is not h-transverse: edge with primitive outward normal ({0}, {1})")]
    NotHTransverse(i64, i64),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("matrix has determinant {0}, expected ±1")]
    NotUnimodular(i64),
    #[error("invalid trapezoid parameters n={0}, a={1}, b={2}")]
    InvalidTrapezoid(i64, i64, i64),
    #[error("polygon literal, column {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

/// Whether a polygon is two-dimensional or collapsed to a segment or a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Proper,
    Segment,
    Point,
}

/// Convex lattice polygon, counterclockwise, without collinear vertices,
/// starting at its lowest-then-leftmost vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePolygon {
    vertices: Vec<Point>,
    shape: Shape,
}

fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn rotate_to_lowest(mut pts: Vec<Point>) -> Vec<Point> {
    let start = (0..pts.len()).min_by_key(|&i| (pts[i].1, pts[i].0)).unwrap_or(0);
    pts.rotate_left(start);
    pts
}

impl LatticePolygon {
    /// Normalizes a cyclic vertex list (either orientation) into a strictly
    /// convex counterclockwise polygon. Collinear boundary points are dropped
    /// from the vertex list.
    pub fn from_vertices(pts: &[Point]) -> Result<Self, PolygonError> {
        let mut seen = HashSet::new();
        for p in pts {
            if !seen.insert(*p) {
                return Err(PolygonError::RepeatedPoint(p.0, p.1));
            }
        }
        if pts.len() < 3 {
            return Err(PolygonError::TooFewPoints(pts.len()));
        }
        let area2: i64 = (0..pts.len())
            .map(|i| {
                let (p, q) = (pts[i], pts[(i + 1) % pts.len()]);
                p.0 * q.1 - q.0 * p.1
            })
            .sum();
        if area2 == 0 {
            return Err(PolygonError::Collinear);
        }
        let mut v: Vec<Point> = pts.to_vec();
        if area2 < 0 {
            v.reverse();
        }

        // drop straight-through vertices, reject reflex and reversing ones
        loop {
            let n = v.len();
            if n < 3 {
                return Err(PolygonError::Collinear);
            }
            let mut removed = false;
            for i in 0..n {
                let (prev, cur, next) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
                let c = cross(prev, cur, next);
                if c < 0 {
                    return Err(PolygonError::NotConvex(cur.0, cur.1));
                }
                if c == 0 {
                    let dot = (cur.0 - prev.0) * (next.0 - cur.0) + (cur.1 - prev.1) * (next.1 - cur.1);
                    if dot <= 0 {
                        return Err(PolygonError::NotConvex(cur.0, cur.1));
                    }
                    v.remove(i);
                    removed = true;
                    break;
                }
            }
            if !removed {
                break;
            }
        }
        // local convexity everywhere does not rule out a multiply-wound star
        let n = v.len();
        for i in 0..n {
            let (p, q) = (v[i], v[(i + 1) % n]);
            if let Some(r) = v.iter().find(|r| cross(p, q, **r) < 0) {
                return Err(PolygonError::NotConvex(r.0, r.1));
            }
        }
        Ok(LatticePolygon { vertices: rotate_to_lowest(v), shape: Shape::Proper })
    }

    /// Convex hull of collinear points: a segment, or a single point.
    fn degenerate(pts: &[Point]) -> Self {
        let lo = *pts.iter().min_by_key(|p| (p.1, p.0)).expect("nonempty");
        let hi = *pts.iter().max_by_key(|p| (p.1, p.0)).expect("nonempty");
        if lo == hi {
            LatticePolygon { vertices: vec![lo], shape: Shape::Point }
        } else {
            LatticePolygon { vertices: vec![lo, hi], shape: Shape::Segment }
        }
    }

    /// Like [`Self::from_vertices`] but accepts collinear input, producing a
    /// degenerate polygon.
    fn from_points_allow_degenerate(pts: &[Point]) -> Result<Self, PolygonError> {
        let mut uniq: Vec<Point> = Vec::new();
        for p in pts {
            if !uniq.contains(p) {
                uniq.push(*p);
            }
        }
        match Self::from_vertices(&uniq) {
            Err(PolygonError::Collinear) | Err(PolygonError::TooFewPoints(_)) => Ok(Self::degenerate(&uniq)),
            other => other,
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn is_degenerate(&self) -> bool {
        self.shape != Shape::Proper
    }

    /// Boundary edges as counterclockwise vertex pairs.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        let count = if self.shape == Shape::Proper { n } else { 0 };
        (0..count).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Twice the area (shoelace).
    pub fn double_area(&self) -> i64 {
        self.edges().map(|(p, q)| p.0 * q.1 - q.0 * p.1).sum()
    }

    /// Every edge has primitive outward normal `(0, ±1)` or `(±1, k)`.
    pub fn is_h_transverse(&self) -> bool {
        self.check_h_transverse().is_ok()
    }

    fn check_h_transverse(&self) -> Result<(), PolygonError> {
        if self.shape == Shape::Segment {
            let (p, q) = (self.vertices[0], self.vertices[1]);
            let (dx, dy) = (q.0 - p.0, q.1 - p.1);
            let g = dx.abs().gcd(&dy.abs());
            if dy != 0 && dy.abs() != g {
                return Err(PolygonError::NotHTransverse(dy / g, -dx / g));
            }
            return Ok(());
        }
        for (p, q) in self.edges() {
            let (nx, ny) = primitive_normal(p, q);
            if nx.abs() > 1 {
                return Err(PolygonError::NotHTransverse(nx, ny));
            }
        }
        Ok(())
    }

    pub fn profile(&self) -> Result<HProfile, PolygonError> {
        self.check_h_transverse()?;
        let ys = self.vertices.iter().map(|p| p.1);
        let a = ys.clone().max().unwrap() - ys.min().unwrap();
        match self.shape {
            Shape::Point => return HProfile::new(0, 0, 0, vec![], vec![]),
            Shape::Segment => {
                let (p, q) = (self.vertices[0], self.vertices[1]);
                let (dx, dy) = (q.0 - p.0, q.1 - p.1);
                if dy == 0 {
                    return HProfile::new(0, dx.abs(), dx.abs(), vec![], vec![]);
                }
                // a slanted or vertical segment: both sides share every edge
                let k = -dx / dy;
                return HProfile::new(a, 0, 0, vec![-k; a as usize], vec![k; a as usize]);
            }
            Shape::Proper => {}
        }
        let (mut e_top, mut e_bot) = (0, 0);
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for (p, q) in self.edges() {
            let (dx, dy) = (q.0 - p.0, q.1 - p.1);
            let len = dx.abs().gcd(&dy.abs());
            let (nx, ny) = primitive_normal(p, q);
            match (nx, ny) {
                (0, -1) => e_bot = len,
                (0, 1) => e_top = len,
                (1, k) => right.extend(std::iter::repeat_n(k, len as usize)),
                (-1, k) => left.extend(std::iter::repeat_n(k, len as usize)),
                _ => unreachable!("checked h-transverse"),
            }
        }
        HProfile::new(a, e_top, e_bot, left, right)
    }

    pub fn data(&self) -> PolygonData {
        let ys = self.vertices.iter().map(|p| p.1);
        let a = ys.clone().max().unwrap() - ys.min().unwrap();
        match self.shape {
            Shape::Point => PolygonData { a: 0, e_top: 0, e_bot: 0, y: 1, chi: 1, g_max: 0 },
            Shape::Segment => {
                let (p, q) = (self.vertices[0], self.vertices[1]);
                let len = (q.0 - p.0).abs().gcd(&(q.1 - p.1).abs());
                let e = if a == 0 { len } else { 0 };
                PolygonData { a, e_top: e, e_bot: e, y: len + 1, chi: 2, g_max: 0 }
            }
            Shape::Proper => {
                let y: i64 = self.edges().map(|(p, q)| (q.0 - p.0).abs().gcd(&(q.1 - p.1).abs())).sum();
                let interior = self.count_interior_points();
                let pick = (self.double_area() - y + 2) / 2;
                assert_eq!(interior, pick, "interior count disagrees with Pick's formula");
                let (mut e_top, mut e_bot) = (0, 0);
                for (p, q) in self.edges() {
                    if p.1 == q.1 {
                        if q.0 > p.0 {
                            e_bot = q.0 - p.0;
                        } else {
                            e_top = p.0 - q.0;
                        }
                    }
                }
                PolygonData { a, e_top, e_bot, y, chi: self.vertices.len() as i64, g_max: interior }
            }
        }
    }

    /// Lattice points strictly inside, by scanning the bounding box.
    pub fn count_interior_points(&self) -> i64 {
        if self.is_degenerate() {
            return 0;
        }
        let (x0, x1) = minmax(self.vertices.iter().map(|p| p.0));
        let (y0, y1) = minmax(self.vertices.iter().map(|p| p.1));
        let mut count = 0;
        for x in x0..=x1 {
            for y in y0..=y1 {
                if self.edges().all(|(p, q)| cross(p, q, (x, y)) > 0) {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn apply_transform(&self, t: &LatticeTransform) -> Self {
        let pts: Vec<Point> = self.vertices.iter().map(|p| t.apply(*p)).collect();
        Self::from_points_allow_degenerate(&pts).expect("unimodular image of a convex polygon is convex")
    }

    pub fn translated(&self, dx: i64, dy: i64) -> Self {
        let pts: Vec<Point> = self.vertices.iter().map(|p| (p.0 + dx, p.1 + dy)).collect();
        LatticePolygon { vertices: pts, shape: self.shape }
    }

    /// Equal up to an integer translation.
    pub fn congruent_by_translation(&self, other: &Self) -> bool {
        if self.vertices.len() != other.vertices.len() || self.shape != other.shape {
            return false;
        }
        let (a, b) = (self.vertices[0], other.vertices[0]);
        self.translated(b.0 - a.0, b.1 - a.1) == *other
    }

    /// `Δ^n_{a,b}`: hull of (0,0), (b+na,0), (b,a), (0,a).
    pub fn trapezoid(n: i64, a: i64, b: i64) -> Result<Self, PolygonError> {
        if n < 0 || a < 0 || b < 0 || (a == 0 && b == 0) {
            return Err(PolygonError::InvalidTrapezoid(n, a, b));
        }
        Self::from_points_allow_degenerate(&[(0, 0), (b + n * a, 0), (b, a), (0, a)])
    }

    /// Cuts the top corner at depth 2: keeps the part with `y <= top - 2`.
    /// The polygon must end in a single unimodular top vertex whose two
    /// adjacent sides both rise at least 2 units.
    pub fn cut_top_corner(&self) -> Result<Self, PolygonError> {
        let h = self.profile()?;
        let bad = |msg: &str| PolygonError::InvalidProfile(format!("cut_top_corner: {msg}"));
        if self.is_degenerate() || h.e_top() != 0 || h.a() < 2 {
            return Err(bad("needs a top vertex and height at least 2"));
        }
        let a = h.a() as usize;
        let (kl, kr) = (h.b_left()[a - 1], h.b_right()[a - 1]);
        if h.b_left()[a - 2] != kl || h.b_right()[a - 2] != kr {
            return Err(bad("both sides at the corner must have lattice length at least 2"));
        }
        // primitive side directions (-kr, 1) and (kl, 1) must span the lattice
        if (kl + kr).abs() != 1 {
            return Err(bad("top corner is not unimodular"));
        }
        let mut left = h.b_left().to_vec();
        let mut right = h.b_right().to_vec();
        left.truncate(a - 2);
        right.truncate(a - 2);
        let cut = HProfile::new(h.a() - 2, 2 * (kl + kr).abs(), h.e_bot(), left, right)?;
        let (x0, y0) = minmax_point(self);
        Ok(cut.polygon()?.translated(x0, y0))
    }
}

fn minmax_point(p: &LatticePolygon) -> (i64, i64) {
    // bottom-left corner of the bottom edge
    let y0 = p.vertices.iter().map(|v| v.1).min().unwrap();
    let x0 = p.vertices.iter().filter(|v| v.1 == y0).map(|v| v.0).min().unwrap();
    (x0, y0)
}

fn minmax<I: Iterator<Item = i64>>(it: I) -> (i64, i64) {
    it.fold((i64::MAX, i64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Primitive outward normal of a counterclockwise edge `p -> q`.
fn primitive_normal(p: Point, q: Point) -> (i64, i64) {
    let (dx, dy) = (q.0 - p.0, q.1 - p.1);
    let g = dx.abs().gcd(&dy.abs());
    (dy / g, -dx / g)
}

impl fmt::Display for LatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|(x, y)| format!("({x},{y})")).collect();
        f.write_str(&parts.join(","))?;
        match self.shape {
            Shape::Proper => Ok(()),
            Shape::Segment => f.write_str(" [degenerate: segment]"),
            Shape::Point => f.write_str(" [degenerate: point]"),
        }
    }
}

/// The h-transverse boundary profile: height, horizontal edge lengths and the
/// sorted side-slope multisets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HProfile {
    a: i64,
    e_top: i64,
    e_bot: i64,
    b_left: Vec<i64>,
    b_right: Vec<i64>,
}

impl HProfile {
    pub fn new(
        a: i64,
        e_top: i64,
        e_bot: i64,
        mut b_left: Vec<i64>,
        mut b_right: Vec<i64>,
    ) -> Result<Self, PolygonError> {
        let bad = |m: String| Err(PolygonError::InvalidProfile(m));
        if a < 0 || e_top < 0 || e_bot < 0 {
            return bad(format!("negative entry in a={a}, e_top={e_top}, e_bot={e_bot}"));
        }
        if b_left.len() as i64 != a || b_right.len() as i64 != a {
            return bad(format!("|b_left|={} and |b_right|={} must equal a={a}", b_left.len(), b_right.len()));
        }
        let sum: i64 = b_left.iter().chain(&b_right).sum();
        if e_bot != e_top + sum {
            return bad(format!("closure fails: e_bot={e_bot} but e_top + Σb = {}", e_top + sum));
        }
        b_left.sort_unstable();
        b_right.sort_unstable();
        Ok(HProfile { a, e_top, e_bot, b_left, b_right })
    }

    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn e_top(&self) -> i64 {
        self.e_top
    }
    pub fn e_bot(&self) -> i64 {
        self.e_bot
    }
    pub fn b_left(&self) -> &[i64] {
        &self.b_left
    }
    pub fn b_right(&self) -> &[i64] {
        &self.b_right
    }

    /// Boundary lattice points, `e_top + e_bot + 2a`.
    pub fn y(&self) -> i64 {
        self.e_top + self.e_bot + 2 * self.a
    }

    /// Reconstructs the polygon with bottom-left corner at the origin.
    ///
    /// Row `j` (from height `j` to `j+1`) uses the `j`-th smallest slope on
    /// each side: the right boundary moves by `-k_right`, the left by `+k_left`.
    pub fn polygon(&self) -> Result<LatticePolygon, PolygonError> {
        let a = self.a as usize;
        let mut right = vec![(self.e_bot, 0)];
        let mut left = vec![(0, 0)];
        for j in 0..a {
            let (xr, _) = right[j];
            let (xl, _) = left[j];
            right.push((xr - self.b_right[j], j as i64 + 1));
            left.push((xl + self.b_left[j], j as i64 + 1));
        }
        for j in 0..=a {
            if right[j].0 < left[j].0 {
                return Err(PolygonError::InvalidProfile(format!("negative width at height {j}")));
            }
        }
        let mut pts = right;
        pts.extend(left.into_iter().rev());
        LatticePolygon::from_points_allow_degenerate(&pts)
    }

    pub fn data(&self) -> Result<PolygonData, PolygonError> {
        Ok(self.polygon()?.data())
    }

    /// Image under the shear `(x, y) -> (x + t*y, y)`.
    pub fn sheared(&self, t: i64) -> Self {
        HProfile {
            a: self.a,
            e_top: self.e_top,
            e_bot: self.e_bot,
            b_left: self.b_left.iter().map(|k| k + t).collect(),
            b_right: self.b_right.iter().map(|k| k - t).collect(),
        }
    }
}

impl fmt::Display for HProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[i64]| v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        write!(
            f,
            "a={} e_top={} e_bot={} b_left={{{}}} b_right={{{}}}",
            self.a,
            self.e_top,
            self.e_bot,
            join(&self.b_left),
            join(&self.b_right)
        )
    }
}

/// Combinatorial data of a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PolygonData {
    pub a: i64,
    pub e_top: i64,
    pub e_bot: i64,
    /// boundary lattice points
    pub y: i64,
    /// number of vertices
    pub chi: i64,
    /// interior lattice points
    pub g_max: i64,
}

impl PolygonData {
    /// `floor((y - 1 + g) / 2)`.
    pub fn s_max(&self, g: i64) -> i64 {
        Integer::div_floor(&(self.y - 1 + g), &2)
    }

    /// Number of elements of every floor diagram of genus `g`.
    pub fn n_elements(&self, g: i64) -> i64 {
        self.y - 1 + g
    }
}

/// Affine map `x -> M x + t` with `M` in `GL_2(Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeTransform {
    matrix: [[i64; 2]; 2],
    translation: Point,
}

impl LatticeTransform {
    pub fn new(matrix: [[i64; 2]; 2], translation: Point) -> Result<Self, PolygonError> {
        let det = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
        if det.abs() != 1 {
            return Err(PolygonError::NotUnimodular(det));
        }
        Ok(LatticeTransform { matrix, translation })
    }

    pub fn identity() -> Self {
        LatticeTransform { matrix: [[1, 0], [0, 1]], translation: (0, 0) }
    }

    /// Counterclockwise quarter turn `(x, y) -> (-y, x)`.
    pub fn rotation90() -> Self {
        LatticeTransform { matrix: [[0, -1], [1, 0]], translation: (0, 0) }
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.matrix
    }

    pub fn translation(&self) -> Point {
        self.translation
    }

    pub fn apply(&self, p: Point) -> Point {
        let m = &self.matrix;
        (m[0][0] * p.0 + m[0][1] * p.1 + self.translation.0, m[1][0] * p.0 + m[1][1] * p.1 + self.translation.1)
    }
}

impl fmt::Display for LatticeTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.matrix;
        write!(f, "{},{},{},{},{},{}", m[0][0], m[0][1], m[1][0], m[1][1], self.translation.0, self.translation.1)
    }
}

/// Parses the polygon literal grammar:
///
/// ```text
/// trapezoid:n,a,b | triangle:d | rect:a,b | vertices:x1,y1;x2,y2;...
/// ```
///
/// optionally followed by `@transform=m11,m12,m21,m22,tx,ty`.
/// Non-h-transverse polygons are accepted.
pub fn parse_polygon_literal(text: &str) -> Result<LatticePolygon, PolygonError> {
    let syntax = |pos: usize, msg: &str| PolygonError::Syntax { pos, msg: msg.to_string() };
    let (body, transform) = match text.find('@') {
        Some(at) => (&text[..at], Some((at + 1, &text[at + 1..]))),
        None => (text, None),
    };
    let colon = body.find(':').ok_or_else(|| syntax(0, "expected `<family>:<args>`"))?;
    let (kind, args) = (&body[..colon], &body[colon + 1..]);
    let args_pos = colon + 1;

    let ints = |s: &str, base: usize, want: usize| -> Result<Vec<i64>, PolygonError> {
        let mut out = Vec::new();
        let mut offset = base;
        for part in s.split(',') {
            let v = part
                .trim()
                .parse::<i64>()
                .map_err(|_| syntax(offset, &format!("expected an integer, found `{part}`")))?;
            out.push(v);
            offset += part.len() + 1;
        }
        if out.len() != want {
            return Err(syntax(base, &format!("expected {want} integers, found {}", out.len())));
        }
        Ok(out)
    };

    let poly = match kind {
        "trapezoid" => {
            let v = ints(args, args_pos, 3)?;
            LatticePolygon::trapezoid(v[0], v[1], v[2])?
        }
        "triangle" => {
            let v = ints(args, args_pos, 1)?;
            LatticePolygon::trapezoid(1, v[0], 0)?
        }
        "rect" => {
            let v = ints(args, args_pos, 2)?;
            LatticePolygon::trapezoid(0, v[0], v[1])?
        }
        "vertices" => {
            let mut pts = Vec::new();
            let mut offset = args_pos;
            for chunk in args.split(';') {
                let v = ints(chunk, offset, 2)?;
                pts.push((v[0], v[1]));
                offset += chunk.len() + 1;
            }
            LatticePolygon::from_vertices(&pts)?
        }
        _ => return Err(syntax(0, &format!("unknown polygon family `{kind}`"))),
    };

    match transform {
        None => Ok(poly),
        Some((pos, t)) => {
            let spec = t
                .strip_prefix("transform=")
                .ok_or_else(|| syntax(pos, "expected `transform=m11,m12,m21,m22,tx,ty`"))?;
            let v = ints(spec, pos + "transform=".len(), 6)?;
            let tr = LatticeTransform::new([[v[0], v[1]], [v[2], v[3]]], (v[4], v[5]))?;
            Ok(poly.apply_transform(&tr))
        }
    }
}
