//! Two-dimensional shadows: the projection `x -> (c^T x, d^T x)`, exact
//! convex hulls, shadow-vertex certificates and the line-arrangement count
//! bounding shadows of boxes.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linalg::{dot, dot_unchecked, format_rational, LinalgError, Rational};
use crate::polytope::BoxBounds;

/// Largest box dimension for which all `2^d` corners are projected.
pub const BOX_CORNER_MAX_DIM: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShadowError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("projection vectors c and d are linearly dependent")]
    Dependent,
    #[error("index {index} out of range for {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("box dimension {d} exceeds the corner enumeration guard of {max}")]
    TooLarge { d: usize, max: usize },
}

/// A point `(y1, y2)` of the projection plane.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point2 {
    pub y1: Rational,
    pub y2: Rational,
}

impl Point2 {
    pub fn new(y1: Rational, y2: Rational) -> Self {
        Self { y1, y2 }
    }

    fn minus(&self, other: &Point2) -> Point2 {
        Point2::new(&self.y1 - &other.y1, &self.y2 - &other.y2)
    }

    fn dot(&self, other: &Point2) -> Rational {
        &self.y1 * &other.y1 + &self.y2 * &other.y2
    }

    fn cross(&self, other: &Point2) -> Rational {
        &self.y1 * &other.y2 - &self.y2 * &other.y1
    }

    /// Rotation by +90 degrees.
    fn perp(&self) -> Point2 {
        Point2::new(-self.y2.clone(), self.y1.clone())
    }

    fn is_origin(&self) -> bool {
        self.y1.is_zero() && self.y2.is_zero()
    }
}

/// `(b - a) x (c - a)`: positive for a left turn.
pub fn orientation(a: &Point2, b: &Point2, c: &Point2) -> Rational {
    b.minus(a).cross(&c.minus(a))
}

/// Total order of nonzero directions by polar angle in `[0, 2pi)`.
fn angle_cmp(a: &Point2, b: &Point2) -> Ordering {
    let half = |p: &Point2| -> u8 {
        if p.y2.is_positive() || (p.y2.is_zero() && p.y1.is_positive()) {
            0
        } else {
            1
        }
    };
    half(a).cmp(&half(b)).then_with(|| {
        let c = a.cross(b);
        if c.is_positive() {
            Ordering::Less
        } else if c.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    })
}

/// Angularly sorted distinct ray directions.
fn sorted_rays(mut rays: Vec<Point2>) -> Vec<Point2> {
    rays.sort_by(angle_cmp);
    rays.dedup_by(|a, b| angle_cmp(a, b) == Ordering::Equal);
    rays
}

/// Linearly independent pair `(c, d)` defining the projection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionPair {
    c: Vec<Rational>,
    d: Vec<Rational>,
}

impl ProjectionPair {
    pub fn new(c: Vec<Rational>, d: Vec<Rational>) -> Result<Self, ShadowError> {
        if c.len() != d.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: c.len(),
                found: d.len(),
            }
            .into());
        }
        // Independent iff some 2x2 minor is nonzero.
        let n = c.len();
        let independent = (0..n).any(|i| (i + 1..n).any(|j| &c[i] * &d[j] != &c[j] * &d[i]));
        if !independent {
            return Err(ShadowError::Dependent);
        }
        Ok(Self { c, d })
    }

    pub fn c(&self) -> &[Rational] {
        &self.c
    }

    pub fn d(&self) -> &[Rational] {
        &self.d
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn project(&self, x: &[Rational]) -> Result<Point2, ShadowError> {
        Ok(Point2::new(dot(&self.c, x)?, dot(&self.d, x)?))
    }

    /// `e = a1 c + a2 d`.
    pub fn combine(&self, a: &Point2) -> Vec<Rational> {
        self.c
            .iter()
            .zip(&self.d)
            .map(|(ci, di)| &a.y1 * ci + &a.y2 * di)
            .collect()
    }
}

/// Strictly convex polygon with vertices in counterclockwise order, starting
/// at the lexicographically smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowPolygon {
    pub vertices: Vec<Point2>,
}

impl ShadowPolygon {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Fewer than three vertices: the input was a point or collinear.
    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }

    pub fn is_strictly_convex(&self) -> bool {
        let n = self.vertices.len();
        n < 3
            || (0..n).all(|i| {
                orientation(
                    &self.vertices[i],
                    &self.vertices[(i + 1) % n],
                    &self.vertices[(i + 2) % n],
                )
                .is_positive()
            })
    }
}

/// Exact convex hull by the monotone chain; points in the relative interior
/// of hull edges are dropped.
pub fn hull2d(points: &[Point2]) -> ShadowPolygon {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return ShadowPolygon { vertices: pts };
    }

    fn chain<'a>(iter: impl Iterator<Item = &'a Point2>) -> Vec<Point2> {
        let mut out: Vec<Point2> = Vec::new();
        for p in iter {
            while out.len() >= 2
                && !orientation(&out[out.len() - 2], &out[out.len() - 1], p).is_positive()
            {
                out.pop();
            }
            out.push(p.clone());
        }
        out
    }

    let mut lower = chain(pts.iter());
    let mut upper = chain(pts.iter().rev());
    lower.pop();
    upper.pop();
    lower.extend(upper);
    // All collinear: both chains collapse to the two extremes.
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    ShadowPolygon { vertices: lower }
}

/// A shadow polygon with the input indices projecting to each hull vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shadow {
    pub polygon: ShadowPolygon,
    /// `preimages[k]` lists every input index whose projection equals hull
    /// vertex `k`, in increasing order.
    pub preimages: Vec<Vec<usize>>,
}

impl Shadow {
    pub fn len(&self) -> usize {
        self.polygon.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polygon.is_empty()
    }
}

pub fn project_all(
    pp: &ProjectionPair,
    vertices: &[Vec<Rational>],
) -> Result<Vec<Point2>, ShadowError> {
    vertices.iter().map(|x| pp.project(x)).collect()
}

/// Project `vertices` and take the hull.
pub fn shadow_of_vertices(
    pp: &ProjectionPair,
    vertices: &[Vec<Rational>],
) -> Result<Shadow, ShadowError> {
    let images = project_all(pp, vertices)?;
    let polygon = hull2d(&images);
    let mut by_point: BTreeMap<&Point2, Vec<usize>> = BTreeMap::new();
    for (i, w) in images.iter().enumerate() {
        by_point.entry(w).or_default().push(i);
    }
    let preimages = polygon
        .vertices
        .iter()
        .map(|w| by_point.get(w).cloned().unwrap_or_default())
        .collect();
    Ok(Shadow { polygon, preimages })
}

/// Outcome of [`certify_shadow_vertex`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// `e = a1 c + a2 d` is uniquely maximized at the target over all given
    /// vertices.
    Certified { a: Point2, e: Vec<Rational> },
    /// No such direction exists; `witness` ties with or beats the target
    /// under the direction tried last.
    Refused { witness: usize },
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certificate::Certified { .. })
    }
}

/// Search for a direction `a` such that `(a1 c + a2 d)^T x` is uniquely
/// maximized at `vertices[target]`.
///
/// Candidates come from the arrangement of lines orthogonal to the projected
/// differences `w_target - w_k`: every open cell of that arrangement contains
/// the sum of its two bounding rays, so trying those sums (and the differences
/// themselves, for half-plane cells) is complete.
pub fn certify_shadow_vertex(
    pp: &ProjectionPair,
    vertices: &[Vec<Rational>],
    target: usize,
) -> Result<Certificate, ShadowError> {
    if target >= vertices.len() {
        return Err(ShadowError::IndexOutOfRange {
            index: target,
            len: vertices.len(),
        });
    }
    let images = project_all(pp, vertices)?;
    let w = &images[target];
    if let Some(tie) = (0..images.len()).find(|&k| k != target && images[k] == *w) {
        return Ok(Certificate::Refused { witness: tie });
    }

    let deltas: Vec<Point2> = {
        let set: BTreeSet<Point2> = images
            .iter()
            .filter(|p| *p != w)
            .map(|p| w.minus(p))
            .collect();
        set.into_iter().collect()
    };
    let separates = |a: &Point2| deltas.iter().all(|dl| a.dot(dl).is_positive());

    let mut candidates: Vec<Point2> = deltas.clone();
    let rays = sorted_rays(
        deltas
            .iter()
            .flat_map(|dl| {
                let r = dl.perp();
                let neg = Point2::new(-r.y1.clone(), -r.y2.clone());
                [r, neg]
            })
            .collect(),
    );
    for k in 0..rays.len() {
        let (r, s) = (&rays[k], &rays[(k + 1) % rays.len()]);
        if r.cross(s).is_positive() {
            candidates.push(Point2::new(&r.y1 + &s.y1, &r.y2 + &s.y2));
        }
    }
    if deltas.is_empty() {
        candidates.push(Point2::new(
            Rational::from_integer(1.into()),
            Rational::zero(),
        ));
    }

    if let Some(a) = candidates.into_iter().find(|a| separates(a)) {
        let e = pp.combine(&a);
        let target_value = dot_unchecked(&e, &vertices[target]);
        let unique = vertices
            .iter()
            .enumerate()
            .all(|(k, x)| k == target || dot_unchecked(&e, x) < target_value);
        debug_assert!(unique);
        if unique {
            return Ok(Certificate::Certified { a, e });
        }
    }

    let a = deltas[0].clone();
    let witness = (0..images.len())
        .filter(|&k| k != target)
        .max_by(|&i, &j| a.dot(&images[i]).cmp(&a.dot(&images[j])).then(j.cmp(&i)))
        .expect("another vertex exists");
    Ok(Certificate::Refused { witness })
}

/// A nowhere-zero sign pattern of `e = a1 c + a2 d` over the coordinates
/// with `(c_i, d_i) != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern {
    /// `sign(e_i)`; exactly `0` at dropped coordinates.
    pub signs: Vec<i8>,
    /// A direction `a` in the open cell realizing the pattern.
    pub witness: Point2,
}

impl SignPattern {
    /// Box corner maximizing `e^T x`: the upper bound where `e_i > 0`, the
    /// lower bound otherwise (dropped coordinates take the lower bound).
    pub fn corner_index(&self) -> usize {
        self.signs
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > 0)
            .map(|(i, _)| 1usize << i)
            .sum()
    }

    pub fn render(&self) -> String {
        self.signs
            .iter()
            .map(|&s| match s {
                1 => '+',
                -1 => '-',
                _ => '0',
            })
            .collect()
    }
}

/// Cells of the arrangement of lines `{a : a1 c_i + a2 d_i = 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPatterns {
    pub patterns: Vec<SignPattern>,
    /// Coordinates with `c_i = d_i = 0`, ignored by the arrangement.
    pub dropped: Vec<usize>,
}

impl SignPatterns {
    /// Number of coordinates taking part in the arrangement.
    pub fn active_dim(&self) -> usize {
        self.patterns
            .first()
            .map_or(0, |p| p.signs.len() - self.dropped.len())
    }
}

/// Enumerate the two-dimensional cells of the line arrangement by walking
/// the angularly sorted boundary rays.
pub fn box_sign_patterns(pp: &ProjectionPair) -> SignPatterns {
    line_arrangement_cells(&pp.c, &pp.d)
}

/// Cells of the arrangement of lines with normals `(c_i, d_i)`; `c` and `d`
/// need not be independent here.
pub fn line_arrangement_cells(c: &[Rational], d: &[Rational]) -> SignPatterns {
    let normals: Vec<Point2> = c
        .iter()
        .zip(d)
        .map(|(c, d)| Point2::new(c.clone(), d.clone()))
        .collect();
    let dropped: Vec<usize> = normals
        .iter()
        .enumerate()
        .filter(|(_, n)| n.is_origin())
        .map(|(i, _)| i)
        .collect();
    let active: Vec<&Point2> = normals.iter().filter(|n| !n.is_origin()).collect();

    let rays = sorted_rays(
        active
            .iter()
            .flat_map(|n| {
                let r = n.perp();
                let neg = Point2::new(-r.y1.clone(), -r.y2.clone());
                [r, neg]
            })
            .collect(),
    );

    let witnesses: Vec<Point2> = if rays.is_empty() {
        Vec::new()
    } else if rays.len() == 2 {
        // A single distinct line: its two open half-planes.
        let n = active[0];
        vec![n.clone(), Point2::new(-n.y1.clone(), -n.y2.clone())]
    } else {
        (0..rays.len())
            .map(|k| {
                let (r, s) = (&rays[k], &rays[(k + 1) % rays.len()]);
                debug_assert!(r.cross(s).is_positive());
                Point2::new(&r.y1 + &s.y1, &r.y2 + &s.y2)
            })
            .collect()
    };

    let patterns = witnesses
        .into_iter()
        .map(|a| {
            let signs = normals
                .iter()
                .map(|n| {
                    let v = a.dot(n);
                    if v.is_positive() {
                        1
                    } else if v.is_negative() {
                        -1
                    } else {
                        0
                    }
                })
                .collect();
            SignPattern { signs, witness: a }
        })
        .collect();
    SignPatterns { patterns, dropped }
}

/// Hull of the projected box corners checked against the sign-pattern
/// corners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxShadowReport {
    pub dim: usize,
    pub hull_size: usize,
    pub pattern_count: usize,
    pub dropped: Vec<usize>,
    /// Every hull vertex has a preimage among the sign-pattern corners.
    pub hull_covered: bool,
    /// Every sign-pattern corner projects onto a hull vertex.
    pub patterns_on_hull: bool,
}

impl BoxShadowReport {
    /// `2d`.
    pub fn bound(&self) -> usize {
        2 * self.dim
    }

    pub fn holds(&self) -> bool {
        self.hull_size <= self.bound()
            && self.pattern_count <= self.bound()
            && self.hull_covered
            && self.patterns_on_hull
    }
}

pub fn box_shadow_report(
    bounds: &BoxBounds,
    pp: &ProjectionPair,
) -> Result<BoxShadowReport, ShadowError> {
    let d = bounds.dim();
    if pp.dim() != d {
        return Err(LinalgError::DimensionMismatch {
            expected: d,
            found: pp.dim(),
        }
        .into());
    }
    if d > BOX_CORNER_MAX_DIM {
        return Err(ShadowError::TooLarge {
            d,
            max: BOX_CORNER_MAX_DIM,
        });
    }
    let corners = bounds.corners();
    let shadow = shadow_of_vertices(pp, &corners)?;
    let patterns = box_sign_patterns(pp);
    let pattern_corners: BTreeSet<usize> = patterns
        .patterns
        .iter()
        .map(SignPattern::corner_index)
        .collect();

    let hull_covered = shadow
        .preimages
        .iter()
        .all(|pre| pre.iter().any(|i| pattern_corners.contains(i)));
    let hull_points: BTreeSet<&Point2> = shadow.polygon.vertices.iter().collect();
    let patterns_on_hull = pattern_corners
        .iter()
        .map(|&k| pp.project(&corners[k]))
        .collect::<Result<Vec<_>, _>>()?
        .iter()
        .all(|w| hull_points.contains(w));

    Ok(BoxShadowReport {
        dim: d,
        hull_size: shadow.len(),
        pattern_count: patterns.patterns.len(),
        dropped: patterns.dropped,
        hull_covered,
        patterns_on_hull,
    })
}

/// `(y1, y2)` as `p/q` text.
pub fn format_point(p: &Point2) -> String {
    format!("({}, {})", format_rational(&p.y1), format_rational(&p.y2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::km_cube::{km_vertex, objective_c, objective_d, KmParams, VertexCode};
    use crate::linalg::{int, rat};

    fn pt(a: i64, b: i64) -> Point2 {
        Point2::new(int(a), int(b))
    }

    fn unit(d: usize, i: usize) -> Vec<Rational> {
        (0..d)
            .map(|j| if i == j { int(1) } else { int(0) })
            .collect()
    }

    fn identity_pp() -> ProjectionPair {
        ProjectionPair::new(unit(2, 0), unit(2, 1)).unwrap()
    }

    #[test]
    fn projection_examples() {
        let pp = ProjectionPair::new(unit(3, 0), unit(3, 1)).unwrap();
        assert_eq!(pp.project(&[int(3), int(5), int(7)]).unwrap(), pt(3, 5));
        assert_eq!(pp.project(&[int(0), int(0), int(0)]).unwrap(), pt(0, 0));
        assert!(pp.project(&[int(1)]).is_err());

        let km = ProjectionPair::new(vec![rat(1, 64), int(0)], vec![int(0), int(1)]).unwrap();
        assert_eq!(
            km.project(&[int(1), rat(3, 4)]).unwrap(),
            Point2::new(rat(1, 64), rat(3, 4))
        );
    }

    #[test]
    fn dependent_pairs_rejected() {
        assert_eq!(
            ProjectionPair::new(vec![int(1), int(2)], vec![int(2), int(4)]),
            Err(ShadowError::Dependent)
        );
        assert_eq!(
            ProjectionPair::new(vec![int(0), int(0)], vec![int(2), int(4)]),
            Err(ShadowError::Dependent)
        );
        assert_eq!(
            ProjectionPair::new(vec![int(1)], vec![int(0)]),
            Err(ShadowError::Dependent)
        );
        assert!(ProjectionPair::new(vec![int(1)], vec![int(0), int(1)]).is_err());
    }

    #[test]
    fn hull_square_with_center() {
        let pts = [
            pt(0, 0),
            pt(1, 0),
            pt(1, 1),
            pt(0, 1),
            Point2::new(rat(1, 2), rat(1, 2)),
        ];
        let h = hull2d(&pts);
        assert_eq!(h.vertices, vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]);
        assert!(h.is_strictly_convex());
        assert!(!h.is_degenerate());
    }

    #[test]
    fn hull_drops_edge_points() {
        let pts = [pt(0, 0), pt(2, 0), pt(1, 0), pt(2, 2), pt(0, 2), pt(0, 1)];
        assert_eq!(hull2d(&pts).len(), 4);
    }

    #[test]
    fn hull_degenerate_inputs() {
        let h = hull2d(&[pt(0, 0), pt(1, 1), pt(2, 2)]);
        assert_eq!(h.vertices, vec![pt(0, 0), pt(2, 2)]);
        assert!(h.is_degenerate());
        let h = hull2d(&[pt(3, 3), pt(3, 3)]);
        assert_eq!(h.vertices, vec![pt(3, 3)]);
        let h = hull2d(&[pt(1, 0), pt(3, 0), pt(2, 0), pt(0, 0)]);
        assert_eq!(h.vertices, vec![pt(0, 0), pt(3, 0)]);
    }

    #[test]
    fn km3_shadow_has_eight_vertices() {
        let p = KmParams::new(3, rat(1, 4)).unwrap();
        let pp = ProjectionPair::new(objective_c(&p), objective_d(&p)).unwrap();
        let verts: Vec<_> = VertexCode::all(3)
            .map(|u| km_vertex(&u, &p).unwrap())
            .collect();
        let s = shadow_of_vertices(&pp, &verts).unwrap();
        assert_eq!(s.len(), 8);
        assert!(s.preimages.iter().all(|pre| pre.len() == 1));
    }

    #[test]
    fn km2_shadow_points() {
        let p = KmParams::new(2, rat(1, 4)).unwrap();
        let pp = ProjectionPair::new(objective_c(&p), objective_d(&p)).unwrap();
        let verts: Vec<_> = VertexCode::all(2)
            .map(|u| km_vertex(&u, &p).unwrap())
            .collect();
        let s = shadow_of_vertices(&pp, &verts).unwrap();
        let expected = hull2d(&[
            Point2::new(int(0), int(0)),
            Point2::new(rat(1, 64), rat(1, 4)),
            Point2::new(rat(1, 64), rat(3, 4)),
            Point2::new(int(0), int(1)),
        ]);
        assert_eq!(s.polygon, expected);
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn box_identity_shadow() {
        let corners = BoxBounds::unit_cube(2).corners();
        let s = shadow_of_vertices(&identity_pp(), &corners).unwrap();
        assert_eq!(
            s.polygon.vertices,
            vec![pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]
        );
    }

    #[test]
    fn preimages_collect_all() {
        // c = e1, d = e2 in 3-space: x3 is invisible, each hull vertex has two preimages.
        let pp = ProjectionPair::new(unit(3, 0), unit(3, 1)).unwrap();
        let s = shadow_of_vertices(&pp, &BoxBounds::unit_cube(3).corners()).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.preimages.iter().all(|pre| pre.len() == 2));
    }

    #[test]
    fn certify_examples() {
        let corners = vec![
            vec![int(0), int(0)],
            vec![int(1), int(0)],
            vec![int(1), int(1)],
            vec![int(0), int(1)],
            vec![rat(1, 2), rat(1, 2)],
        ];
        let pp = identity_pp();
        match certify_shadow_vertex(&pp, &corners, 2).unwrap() {
            Certificate::Certified { a, e } => {
                assert_eq!(e, pp.combine(&a));
                assert!(a.y1.is_positive() && a.y2.is_positive());
            }
            other => panic!("expected certificate, got {other:?}"),
        }
        assert!(matches!(
            certify_shadow_vertex(&pp, &corners, 4).unwrap(),
            Certificate::Refused { .. }
        ));
        assert!(certify_shadow_vertex(&pp, &corners, 9).is_err());
    }

    #[test]
    fn certify_refuses_edge_midpoint_and_ties() {
        let pts = vec![
            vec![int(0), int(0)],
            vec![int(2), int(0)],
            vec![int(1), int(0)],
            vec![int(0), int(2)],
        ];
        assert!(!certify_shadow_vertex(&identity_pp(), &pts, 2)
            .unwrap()
            .is_certified());

        let pp = ProjectionPair::new(unit(3, 0), unit(3, 1)).unwrap();
        let corners = BoxBounds::unit_cube(3).corners();
        // Corners 0 and 4 differ only in x3.
        assert_eq!(
            certify_shadow_vertex(&pp, &corners, 0).unwrap(),
            Certificate::Refused { witness: 4 }
        );
    }

    #[test]
    fn certify_single_vertex() {
        let pp = identity_pp();
        assert!(certify_shadow_vertex(&pp, &[vec![int(1), int(1)]], 0)
            .unwrap()
            .is_certified());
    }

    #[test]
    fn sign_patterns_axis_lines() {
        let sp = box_sign_patterns(&identity_pp());
        let got: BTreeSet<String> = sp.patterns.iter().map(SignPattern::render).collect();
        let want: BTreeSet<String> = ["++", "+-", "-+", "--"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(got, want);
        assert!(sp.dropped.is_empty());
    }

    #[test]
    fn sign_patterns_parallel_lines() {
        // Proportional (c_i, d_i): a single line, two open half-planes. Such
        // (c, d) are dependent, so this goes through the raw arrangement.
        let c = vec![int(1), int(2), int(-3), int(0)];
        let d = vec![int(2), int(4), int(-6), int(0)];
        let sp = line_arrangement_cells(&c, &d);
        assert_eq!(sp.patterns.len(), 2);
        assert_eq!(sp.dropped, vec![3]);
        let got: BTreeSet<String> = sp.patterns.iter().map(SignPattern::render).collect();
        let want: BTreeSet<String> = ["++-0", "--+0"].iter().map(|s| s.to_string()).collect();
        assert_eq!(got, want);
    }

    /// Brute-force oracle: evaluate sign patterns along a fine set of
    /// directions around the square `[-N, N]^2` boundary.
    fn oracle_patterns(pp: &ProjectionPair, n: i64) -> BTreeSet<Vec<i8>> {
        let mut dirs = Vec::new();
        for t in -n..n {
            dirs.push(Point2::new(int(n), int(t)));
            dirs.push(Point2::new(int(-t), int(n)));
            dirs.push(Point2::new(int(-n), int(-t)));
            dirs.push(Point2::new(int(t), int(-n)));
        }
        dirs.iter()
            .filter_map(|a| {
                let e = pp.combine(a);
                let signs: Vec<i8> = e
                    .iter()
                    .zip(pp.c().iter().zip(pp.d()))
                    .map(|(v, (c, d))| {
                        if c.is_zero() && d.is_zero() {
                            Some(0)
                        } else if v.is_positive() {
                            Some(1)
                        } else if v.is_negative() {
                            Some(-1)
                        } else {
                            None
                        }
                    })
                    .collect::<Option<_>>()?;
                Some(signs)
            })
            .collect()
    }

    #[test]
    fn sign_patterns_generic_three() {
        let pp = ProjectionPair::new(
            vec![int(1), rat(-2, 3), int(3)],
            vec![int(2), int(1), rat(-1, 2)],
        )
        .unwrap();
        let sp = box_sign_patterns(&pp);
        assert_eq!(sp.patterns.len(), 6);
        let oracle = oracle_patterns(&pp, 200);
        assert_eq!(oracle.len(), 6);
        let got: BTreeSet<Vec<i8>> = sp.patterns.iter().map(|p| p.signs.clone()).collect();
        assert_eq!(got, oracle);
        for p in &sp.patterns {
            let e = pp.combine(&p.witness);
            assert!(e.iter().all(|v| !v.is_zero()));
        }
    }

    #[test]
    fn sign_patterns_with_dropped_and_repeated_lines() {
        let pp = ProjectionPair::new(
            vec![int(1), int(0), int(2), int(0)],
            vec![int(1), int(0), int(2), int(1)],
        )
        .unwrap();
        let sp = box_sign_patterns(&pp);
        assert_eq!(sp.dropped, vec![1]);
        assert_eq!(sp.patterns.len(), 4);
        assert_eq!(sp.active_dim(), 3);
        let got: BTreeSet<Vec<i8>> = sp.patterns.iter().map(|p| p.signs.clone()).collect();
        assert_eq!(got, oracle_patterns(&pp, 50));
    }

    #[test]
    fn box_report_examples() {
        let pp = ProjectionPair::new(
            vec![int(1), rat(-2, 3), int(3)],
            vec![int(2), int(1), rat(-1, 2)],
        )
        .unwrap();
        let r = box_shadow_report(&BoxBounds::unit_cube(3), &pp).unwrap();
        assert!(r.hull_size <= 6);
        assert!(r.holds());

        let coord = ProjectionPair::new(unit(3, 0), unit(3, 2)).unwrap();
        let r = box_shadow_report(&BoxBounds::unit_cube(3), &coord).unwrap();
        assert_eq!(r.hull_size, 4);
        assert_eq!(r.dropped, vec![1]);
        assert!(r.holds());

        let big = ProjectionPair::new(unit(21, 0), unit(21, 1)).unwrap();
        assert!(matches!(
            box_shadow_report(&BoxBounds::unit_cube(21), &big),
            Err(ShadowError::TooLarge { .. })
        ));
    }

    #[test]
    fn angle_order() {
        let mut dirs = vec![
            pt(0, -1),
            pt(-1, 0),
            pt(1, 1),
            pt(1, 0),
            pt(0, 1),
            pt(1, -1),
        ];
        dirs.sort_by(angle_cmp);
        assert_eq!(
            dirs,
            vec![
                pt(1, 0),
                pt(1, 1),
                pt(0, 1),
                pt(-1, 0),
                pt(0, -1),
                pt(1, -1)
            ]
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn point() -> impl Strategy<Value = Point2> {
            (-8i64..=8, 1i64..=3, -8i64..=8, 1i64..=3)
                .prop_map(|(a, b, c, d)| Point2::new(rat(a, b), rat(c, d)))
        }

        proptest! {
            #[test]
            fn hull_idempotent_and_order_free(
                pts in prop::collection::vec(point(), 1..30),
                rotate in 0usize..30,
            ) {
                let h = hull2d(&pts);
                prop_assert!(h.is_strictly_convex());
                prop_assert_eq!(&hull2d(&h.vertices), &h);
                let mut rev = pts.clone();
                rev.reverse();
                rev.rotate_left(rotate % pts.len());
                prop_assert_eq!(&hull2d(&rev), &h);
                // Every input lies weakly left of every hull edge.
                let n = h.len();
                if n >= 3 {
                    for p in &pts {
                        for i in 0..n {
                            prop_assert!(!orientation(&h.vertices[i], &h.vertices[(i + 1) % n], p).is_negative());
                        }
                    }
                }
            }

            #[test]
            fn box_report_holds(
                d in 1usize..6,
                c in prop::collection::vec(-3i64..=3, 6),
                e in prop::collection::vec(-3i64..=3, 6),
            ) {
                let c: Vec<Rational> = c[..d].iter().map(|&v| int(v)).collect();
                let e: Vec<Rational> = e[..d].iter().map(|&v| int(v)).collect();
                if let Ok(pp) = ProjectionPair::new(c, e) {
                    let report = box_shadow_report(&BoxBounds::unit_cube(d), &pp).unwrap();
                    prop_assert!(report.holds(), "{:?}", report);
                }
            }
        }
    }
}
