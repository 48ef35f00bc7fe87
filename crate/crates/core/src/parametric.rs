//! The Gass-Saaty parametric objective sweep over a simple polytope and the
//! shadow vertex method built on it.
//!
//! Reduced costs are taken geometrically: at a vertex with basis `B`, the
//! edge obtained by relaxing row `i ∈ B` has direction `z_i` with
//! `A_j z_i = 0` for `j ∈ B \ {i}` and `A_i z_i = -1`. The objective
//! `(c + λ d)^T x` is optimal at the vertex iff `c^T z + λ d^T z <= 0` on
//! every edge.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::km_cube::VertexCode;
use crate::linalg::{dot, dot_unchecked, format_rational, LinalgError, Rational};
use crate::polytope::{binomial, Basis, Generator, HPolytope, PolytopeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplexError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("degenerate vertex: rows {tight:?} are tight, more than the dimension")]
    Degenerate { tight: Vec<usize> },
    #[error("start basis is not optimal as lambda -> -inf (edge relaxing row {row})")]
    BadStart { row: usize },
    #[error("genericity violated at lambda = {lambda}: edges relaxing rows {rows:?}")]
    Genericity { lambda: String, rows: Vec<usize> },
    #[error("unbounded edge relaxing row {row}")]
    Unbounded { row: usize },
    #[error("pivot limit of {0} exceeded")]
    PivotLimit(u128),
    #[error("optimality lost at lambda = {0}")]
    LostOptimality(String),
}

impl From<LinalgError> for SimplexError {
    fn from(e: LinalgError) -> Self {
        SimplexError::Polytope(e.into())
    }
}

/// Breakpoint value with symbolic infinities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Lambda {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lambda::NegInf => f.write_str("-inf"),
            Lambda::Finite(v) => f.write_str(&format_rational(v)),
            Lambda::PosInf => f.write_str("inf"),
        }
    }
}

/// Edge leaving a vertex: the relaxed basis row and the direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub relaxed_row: usize,
    pub direction: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotEvent {
    pub leaving_row: usize,
    pub entering_row: usize,
    pub lambda: Rational,
    pub edge_direction: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathStep {
    pub basis: Basis,
    pub vertex: Vec<Rational>,
    /// Set when the polytope came from the Klee-Minty generator.
    pub code: Option<VertexCode>,
}

/// Vertices `v_0 .. v_{M-1}` and the pivots between them; pivot `k` happens
/// at breakpoint `λ_{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParametricPath {
    pub steps: Vec<PathStep>,
    pub pivots: Vec<PivotEvent>,
}

impl ParametricPath {
    /// Number of vertices `M`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Finite breakpoints `λ_1 < ... < λ_{M-1}`.
    pub fn breakpoints(&self) -> impl Iterator<Item = &Rational> {
        self.pivots.iter().map(|p| &p.lambda)
    }

    /// `λ_k` for `k = 0..=M`.
    pub fn lambda(&self, k: usize) -> Lambda {
        if k == 0 {
            Lambda::NegInf
        } else if k > self.pivots.len() {
            Lambda::PosInf
        } else {
            Lambda::Finite(self.pivots[k - 1].lambda.clone())
        }
    }

    /// Closed interval `[λ_k, λ_{k+1}]` on which `v_k` is optimal.
    pub fn interval(&self, k: usize) -> (Lambda, Lambda) {
        (self.lambda(k), self.lambda(k + 1))
    }

    /// A rational strictly inside interval `k`: the midpoint, or one unit
    /// beyond the finite end for the two tails.
    pub fn representative(&self, k: usize) -> Rational {
        match self.interval(k) {
            (Lambda::Finite(a), Lambda::Finite(b)) => (a + b) / Rational::from_integer(2.into()),
            (Lambda::NegInf, Lambda::Finite(b)) => b - Rational::one(),
            (Lambda::Finite(a), Lambda::PosInf) => a + Rational::one(),
            _ => Rational::zero(),
        }
    }

    /// Index of the interval whose interior contains `lambda`; `None` when
    /// `lambda` is a breakpoint.
    pub fn interval_of(&self, lambda: &Rational) -> Option<usize> {
        let k = self.pivots.partition_point(|p| p.lambda < *lambda);
        match self.pivots.get(k) {
            Some(p) if p.lambda == *lambda => None,
            _ => Some(k),
        }
    }

    pub fn codes(&self) -> Option<Vec<VertexCode>> {
        self.steps.iter().map(|s| s.code.clone()).collect()
    }
}

/// Edge directions at the vertex of a feasible, nondegenerate basis.
pub fn edge_directions(p: &HPolytope, basis: &Basis) -> Result<Vec<Edge>, SimplexError> {
    let x = p.vertex_of(basis)?;
    edges_at(p, basis, &x)
}

fn edges_at(p: &HPolytope, basis: &Basis, x: &[Rational]) -> Result<Vec<Edge>, SimplexError> {
    let tight = p.tight_rows(x)?;
    if tight.len() > p.dim() {
        return Err(SimplexError::Degenerate { tight });
    }
    let inverse = p
        .matrix()
        .select_rows(basis.indices())
        .inverse()
        .map_err(|_| PolytopeError::NonBasis(basis.indices().to_vec()))?;
    // z_k = -(column k of A_B^{-1})
    Ok(basis
        .indices()
        .iter()
        .enumerate()
        .map(|(k, &row)| Edge {
            relaxed_row: row,
            direction: (0..p.dim()).map(|i| -inverse.get(i, k).clone()).collect(),
        })
        .collect())
}

/// Walk from `x` along `z` to the first blocking row; returns the row and
/// the step length.
fn ratio_test(
    p: &HPolytope,
    basis: &Basis,
    x: &[Rational],
    z: &[Rational],
    relaxed: usize,
) -> Result<(usize, Rational), SimplexError> {
    let mut best: Option<(usize, Rational)> = None;
    let mut tied = false;
    for (r, (row, b)) in p.matrix().rows().zip(p.rhs()).enumerate() {
        if basis.contains(r) {
            continue;
        }
        let rate = dot_unchecked(row, z);
        if !rate.is_positive() {
            continue;
        }
        let t = (b - dot_unchecked(row, x)) / rate;
        match &best {
            Some((_, bt)) if *bt < t => {}
            Some((_, bt)) if *bt == t => tied = true,
            _ => {
                best = Some((r, t));
                tied = false;
            }
        }
    }
    let (row, t) = best.ok_or(SimplexError::Unbounded { row: relaxed })?;
    if tied || t.is_zero() {
        let target: Vec<Rational> = x.iter().zip(z).map(|(xi, zi)| xi + &t * zi).collect();
        return Err(SimplexError::Degenerate {
            tight: p.tight_rows(&target)?,
        });
    }
    Ok((row, t))
}

fn code_of(p: &HPolytope, basis: &Basis) -> Option<VertexCode> {
    match p.generator() {
        Some(Generator::KleeMinty { .. }) => VertexCode::from_basis(basis, p.dim()),
        _ => None,
    }
}

/// The sweep state between pivots.
struct Sweep<'a> {
    p: &'a HPolytope,
    c: &'a [Rational],
    d: &'a [Rational],
    basis: Basis,
    x: Vec<Rational>,
    lambda: Lambda,
}

/// Outcome of looking for the next breakpoint at the current vertex.
enum Next {
    Pivot(PivotEvent, Basis, Vec<Rational>),
    Done,
}

impl<'a> Sweep<'a> {
    fn start(
        p: &'a HPolytope,
        c: &'a [Rational],
        d: &'a [Rational],
        start: &Basis,
    ) -> Result<Self, SimplexError> {
        for v in [c, d] {
            if v.len() != p.dim() {
                return Err(LinalgError::DimensionMismatch {
                    expected: p.dim(),
                    found: v.len(),
                }
                .into());
            }
        }
        let x = p.vertex_of(start)?;
        let sweep = Sweep {
            p,
            c,
            d,
            basis: start.clone(),
            x,
            lambda: Lambda::NegInf,
        };
        // Optimal for λ -> -inf: d^T z > 0, or d^T z = 0 and c^T z < 0.
        for edge in edges_at(p, start, &sweep.x)? {
            let dz = dot_unchecked(d, &edge.direction);
            let cz = dot_unchecked(c, &edge.direction);
            if dz.is_negative() || (dz.is_zero() && !cz.is_negative()) {
                return Err(SimplexError::BadStart {
                    row: edge.relaxed_row,
                });
            }
        }
        Ok(sweep)
    }

    /// Find the next breakpoint and pivot. With `stop`, a breakpoint at or
    /// beyond `stop` ends the sweep before any tie checks.
    fn next(&self, stop: Option<&Rational>) -> Result<Next, SimplexError> {
        let edges = edges_at(self.p, &self.basis, &self.x)?;
        let mut best: Option<Rational> = None;
        let mut argmin: Vec<&Edge> = Vec::new();
        for edge in &edges {
            let dz = dot_unchecked(self.d, &edge.direction);
            let cz = dot_unchecked(self.c, &edge.direction);
            if dz.is_zero() {
                if cz.is_zero() {
                    return Err(SimplexError::Genericity {
                        lambda: self.lambda.to_string(),
                        rows: vec![edge.relaxed_row],
                    });
                }
                if cz.is_positive() {
                    return Err(SimplexError::LostOptimality(self.lambda.to_string()));
                }
                continue;
            }
            if dz.is_negative() {
                continue;
            }
            let mu = -cz / dz;
            match &best {
                Some(b) if *b < mu => {}
                Some(b) if *b == mu => argmin.push(edge),
                _ => {
                    best = Some(mu);
                    argmin = vec![edge];
                }
            }
        }
        let Some(mu) = best else {
            return Ok(Next::Done);
        };
        if stop.is_some_and(|s| mu >= *s) {
            return Ok(Next::Done);
        }
        if let Lambda::Finite(current) = &self.lambda {
            if mu < *current {
                return Err(SimplexError::LostOptimality(self.lambda.to_string()));
            }
            // A second edge becoming tight at the current breakpoint means
            // three vertices share the optimum there.
            if mu == *current {
                return Err(SimplexError::Genericity {
                    lambda: format_rational(&mu),
                    rows: argmin.iter().map(|e| e.relaxed_row).collect(),
                });
            }
        }
        if argmin.len() > 1 {
            let rows: BTreeSet<usize> = argmin.iter().map(|e| e.relaxed_row).collect();
            return Err(SimplexError::Genericity {
                lambda: format_rational(&mu),
                rows: rows.into_iter().collect(),
            });
        }
        let edge = argmin[0];
        let (entering, t) = ratio_test(
            self.p,
            &self.basis,
            &self.x,
            &edge.direction,
            edge.relaxed_row,
        )?;
        let x: Vec<Rational> = self
            .x
            .iter()
            .zip(&edge.direction)
            .map(|(xi, zi)| xi + &t * zi)
            .collect();
        let basis = self.basis.pivot(edge.relaxed_row, entering);
        Ok(Next::Pivot(
            PivotEvent {
                leaving_row: edge.relaxed_row,
                entering_row: entering,
                lambda: mu,
                edge_direction: edge.direction.clone(),
            },
            basis,
            x,
        ))
    }

    fn advance(&mut self, basis: Basis, x: Vec<Rational>, lambda: Rational) {
        self.basis = basis;
        self.x = x;
        self.lambda = Lambda::Finite(lambda);
    }

    fn step(&self) -> PathStep {
        PathStep {
            basis: self.basis.clone(),
            vertex: self.x.clone(),
            code: code_of(self.p, &self.basis),
        }
    }
}

/// Run the parametric sweep over `(c + λ d)^T x` from a basis optimal at
/// `λ -> -inf` until no edge improves for any larger `λ`.
pub fn gass_saaty_path(
    p: &HPolytope,
    c: &[Rational],
    d: &[Rational],
    start: &Basis,
) -> Result<ParametricPath, SimplexError> {
    let mut sweep = Sweep::start(p, c, d, start)?;
    let limit = binomial(p.num_rows(), p.dim());
    let mut path = ParametricPath {
        steps: vec![sweep.step()],
        pivots: Vec::new(),
    };
    while let Next::Pivot(event, basis, x) = sweep.next(None)? {
        if path.steps.len() as u128 >= limit {
            return Err(SimplexError::PivotLimit(limit));
        }
        sweep.advance(basis, x, event.lambda.clone());
        path.pivots.push(event);
        path.steps.push(sweep.step());
    }
    Ok(path)
}

/// `-sum_{i ∈ B} w_i A_i` for positive weights, uniquely minimized over `P`
/// at the vertex of `B`.
pub fn auxiliary_objective(p: &HPolytope, basis: &Basis, weights: &[Rational]) -> Vec<Rational> {
    let mut aux = vec![Rational::zero(); p.dim()];
    for (&i, w) in basis.indices().iter().zip(weights) {
        for (a, v) in aux.iter_mut().zip(p.matrix().row(i)) {
            *a -= w * v;
        }
    }
    aux
}

/// Weight vectors tried for the auxiliary objective: uniform first, then
/// `(k+1)^t` for `t = 1..=3`.
fn auxiliary_weights(d: usize) -> impl Iterator<Item = Vec<Rational>> {
    (0..4u32).map(move |t| {
        (0..d)
            .map(|k| Rational::from_integer(num_bigint::BigInt::from(k + 1).pow(t)))
            .collect()
    })
}

/// Maximize `c^T x` from a feasible start basis by sweeping `c + λ d*` until
/// the interval containing `λ = 0`.
///
/// `d*` is the negated sum of the rows tight at the start. When that sweep
/// hits a tie before `λ = 0`, the rows are reweighted and the sweep retried;
/// the last genericity error is returned if every weighting ties.
pub fn shadow_vertex_solve(
    p: &HPolytope,
    c: &[Rational],
    start: &Basis,
) -> Result<(Basis, Vec<Rational>), SimplexError> {
    let mut last_err = None;
    for weights in auxiliary_weights(p.dim()) {
        let aux = auxiliary_objective(p, start, &weights);
        match solve_with(p, c, &aux, start) {
            Err(e @ SimplexError::Genericity { .. }) => last_err = Some(e),
            other => return other,
        }
    }
    Err(last_err.expect("at least one weighting"))
}

fn solve_with(
    p: &HPolytope,
    c: &[Rational],
    aux: &[Rational],
    start: &Basis,
) -> Result<(Basis, Vec<Rational>), SimplexError> {
    let mut sweep = Sweep::start(p, c, aux, start)?;
    let limit = binomial(p.num_rows(), p.dim());
    let zero = Rational::zero();
    let mut pivots: u128 = 0;
    while let Next::Pivot(event, basis, x) = sweep.next(Some(&zero))? {
        pivots += 1;
        if pivots >= limit {
            return Err(SimplexError::PivotLimit(limit));
        }
        sweep.advance(basis, x, event.lambda);
    }
    Ok((sweep.basis, sweep.x))
}

/// `(c + λ d)^T x`.
pub fn parametric_value(
    c: &[Rational],
    d: &[Rational],
    lambda: &Rational,
    x: &[Rational],
) -> Rational {
    dot_unchecked(c, x) + lambda * dot_unchecked(d, x)
}

/// Structural checks on a computed path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathChecks {
    pub vertices: usize,
    pub breakpoints: usize,
    pub strictly_increasing: bool,
    pub single_pivots: bool,
    pub distinct_vertices: bool,
    /// Both neighbours of every breakpoint attain the same objective there.
    pub continuous: bool,
    /// Every slope change of the piecewise-linear value function happens at a
    /// breakpoint and is an increase (convexity).
    pub convex: bool,
    /// Consecutive Klee-Minty codes differ in exactly one bit (`None` for
    /// other polytopes).
    pub gray: Option<bool>,
}

impl PathChecks {
    pub fn holds(&self) -> bool {
        self.strictly_increasing
            && self.single_pivots
            && self.distinct_vertices
            && self.continuous
            && self.convex
            && self.gray.unwrap_or(true)
    }
}

pub fn check_path(path: &ParametricPath, c: &[Rational], d: &[Rational]) -> PathChecks {
    let bps: Vec<&Rational> = path.breakpoints().collect();
    let strictly_increasing = bps.windows(2).all(|w| w[0] < w[1]);
    let single_pivots = path.steps.windows(2).all(|w| {
        let a: BTreeSet<_> = w[0].basis.indices().iter().collect();
        let b: BTreeSet<_> = w[1].basis.indices().iter().collect();
        a.difference(&b).count() == 1
    });
    let distinct_vertices = {
        let set: BTreeSet<&Vec<Rational>> = path.steps.iter().map(|s| &s.vertex).collect();
        set.len() == path.steps.len()
    };
    let continuous = path.pivots.iter().enumerate().all(|(k, ev)| {
        parametric_value(c, d, &ev.lambda, &path.steps[k].vertex)
            == parametric_value(c, d, &ev.lambda, &path.steps[k + 1].vertex)
    });
    // The slope of the value function on interval k is d^T v_k.
    let convex = path
        .steps
        .windows(2)
        .all(|w| dot_unchecked(d, &w[0].vertex) < dot_unchecked(d, &w[1].vertex));
    let gray = path
        .codes()
        .map(|codes| codes.windows(2).all(|w| w[0].hamming(&w[1]) == 1));
    PathChecks {
        vertices: path.len(),
        breakpoints: path.pivots.len(),
        strictly_increasing,
        single_pivots,
        distinct_vertices,
        continuous,
        convex,
        gray,
    }
}

/// Result of comparing a path with brute-force maximization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub checked: usize,
    /// `(λ, explanation)` for every disagreement.
    pub mismatches: Vec<(Rational, String)>,
}

impl OracleReport {
    pub fn passes(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// The sample set used by [`verify_path_against_oracle`]: every interval
/// representative plus `extra` evenly spaced non-breakpoint values spanning
/// one unit beyond the outermost breakpoints.
pub fn oracle_samples(path: &ParametricPath, extra: usize) -> Vec<Rational> {
    let mut samples: Vec<Rational> = (0..path.len()).map(|k| path.representative(k)).collect();
    let (lo, hi) = match (path.pivots.first(), path.pivots.last()) {
        (Some(a), Some(b)) => (&a.lambda - Rational::one(), &b.lambda + Rational::one()),
        _ => (-Rational::one(), Rational::one()),
    };
    let width = &hi - &lo;
    for k in 0..extra {
        let frac = Rational::new((2 * k + 1).into(), (2 * extra).into());
        let lambda = &lo + &width * frac;
        if path.interval_of(&lambda).is_some() {
            samples.push(lambda);
        }
    }
    samples
}

/// Check that the path vertex for each sampled `λ` is the unique maximizer
/// of `(c + λ d)^T x` among all vertices of `p` found by enumeration.
pub fn verify_path_against_oracle(
    p: &HPolytope,
    path: &ParametricPath,
    c: &[Rational],
    d: &[Rational],
    extra_samples: usize,
) -> Result<OracleReport, SimplexError> {
    let vertices = p.enumerate_vertices()?.distinct_points();
    dot(c, &vertices[0])?;
    dot(d, &vertices[0])?;
    let samples = oracle_samples(path, extra_samples);
    let mut mismatches = Vec::new();
    for lambda in &samples {
        let Some(k) = path.interval_of(lambda) else {
            continue;
        };
        let values: Vec<Rational> = vertices
            .iter()
            .map(|x| parametric_value(c, d, lambda, x))
            .collect();
        let max = values.iter().max().expect("nonempty");
        let winners: Vec<usize> = (0..values.len()).filter(|&i| values[i] == *max).collect();
        let expected = &path.steps[k].vertex;
        if winners.len() != 1 {
            mismatches.push((lambda.clone(), format!("{} maximizers", winners.len())));
        } else if vertices[winners[0]] != *expected {
            mismatches.push((
                lambda.clone(),
                format!("path vertex {k} is not the maximizer"),
            ));
        }
    }
    Ok(OracleReport {
        checked: samples.len(),
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::km_cube::{km_start_code, objective_c, objective_d, KmParams};
    use crate::linalg::{int, rat, RatMatrix};
    use crate::polytope::{make_box, make_klee_minty, BoxBounds};

    fn positive_multiple(a: &[Rational], b: &[Rational]) -> bool {
        let k = a
            .iter()
            .zip(b)
            .find(|(_, y)| !y.is_zero())
            .map(|(x, y)| x / y);
        match k {
            Some(k) if k.is_positive() => a.iter().zip(b).all(|(x, y)| *x == &k * y),
            _ => false,
        }
    }

    #[test]
    fn edges_of_square() {
        let sq = make_box(&BoxBounds::unit_cube(2));
        let edges = edge_directions(&sq, &Basis::new(vec![0, 2])).unwrap();
        assert_eq!(edges.len(), 2);
        assert_eq!(edges[0].relaxed_row, 0);
        assert_eq!(edges[0].direction, vec![int(1), int(0)]);
        assert_eq!(edges[1].direction, vec![int(0), int(1)]);
    }

    #[test]
    fn edges_of_km_match_closed_form() {
        let p = KmParams::new(2, rat(1, 4)).unwrap();
        let poly = make_klee_minty(2, p.eps()).unwrap();
        let u = VertexCode::zeros(2);
        let edges = edge_directions(&poly, &u.basis()).unwrap();
        for (ell, edge) in (1..=2).zip(&edges) {
            let delta = crate::km_cube::edge_delta(&u, ell, &p).unwrap();
            assert!(positive_multiple(&edge.direction, &delta));
        }
    }

    #[test]
    fn edges_reject_singular_and_degenerate() {
        let sq = make_box(&BoxBounds::unit_cube(2));
        assert!(matches!(
            edge_directions(&sq, &Basis::new(vec![0, 1])),
            Err(SimplexError::Polytope(PolytopeError::NonBasis(_)))
        ));
        // Apex of a square pyramid lies on four facets.
        let rows = vec![
            vec![int(0), int(0), int(-1)],
            vec![int(1), int(0), int(1)],
            vec![int(-1), int(0), int(1)],
            vec![int(0), int(1), int(1)],
            vec![int(0), int(-1), int(1)],
        ];
        let p = HPolytope::new(
            RatMatrix::new(rows).unwrap(),
            vec![int(0), int(1), int(1), int(1), int(1)],
            None,
        )
        .unwrap();
        assert!(matches!(
            edge_directions(&p, &Basis::new(vec![1, 2, 3])),
            Err(SimplexError::Degenerate { .. })
        ));
    }

    #[test]
    fn interval_path() {
        let p = make_box(&BoxBounds::new(vec![int(0)], vec![int(1)]).unwrap());
        let path = gass_saaty_path(&p, &[int(1)], &[int(1)], &Basis::new(vec![0])).unwrap();
        assert_eq!(path.len(), 2);
        assert_eq!(path.steps[0].vertex, vec![int(0)]);
        assert_eq!(path.steps[1].vertex, vec![int(1)]);
        assert_eq!(
            path.breakpoints().cloned().collect::<Vec<_>>(),
            vec![int(-1)]
        );
        assert_eq!(path.interval(0), (Lambda::NegInf, Lambda::Finite(int(-1))));
        assert_eq!(path.interval(1), (Lambda::Finite(int(-1)), Lambda::PosInf));
    }

    /// Brute-force argmax of (c + λ d)^T x over the four vertices on a fine
    /// λ grid, collapsing consecutive repeats.
    fn grid_sequence(c: &[Rational], d: &[Rational], p: &KmParams) -> Vec<String> {
        let mut seq: Vec<String> = Vec::new();
        for k in -2000..=2000 {
            let lambda = rat(k, 2000);
            let best = VertexCode::all(p.dim())
                .max_by_key(|u| {
                    parametric_value(c, d, &lambda, &crate::km_cube::km_vertex(u, p).unwrap())
                })
                .unwrap()
                .to_string();
            if seq.last() != Some(&best) {
                seq.push(best);
            }
        }
        seq
    }

    #[test]
    fn km2_path_matches_grid() {
        let p = KmParams::new(2, rat(1, 4)).unwrap();
        let poly = make_klee_minty(2, p.eps()).unwrap();
        let c = vec![rat(1, 64), int(0)];
        let d = vec![int(0), int(1)];
        let path = gass_saaty_path(&poly, &c, &d, &VertexCode::zeros(2).basis()).unwrap();
        let codes: Vec<String> = path
            .codes()
            .unwrap()
            .iter()
            .map(|u| u.to_string())
            .collect();
        assert_eq!(codes, grid_sequence(&c, &d, &p));
        assert_eq!(codes, ["00", "10", "11", "01"]);
        assert_eq!(path.pivots.len(), 3);
    }

    #[test]
    fn km_paths_visit_every_vertex() {
        for d in 2..=6 {
            let p = KmParams::new(d, rat(1, 4)).unwrap();
            let poly = make_klee_minty(d, p.eps()).unwrap();
            let (c, dv) = (objective_c(&p), objective_d(&p));
            let start = km_start_code(&p).unwrap().basis();
            let path = gass_saaty_path(&poly, &c, &dv, &start).unwrap();
            assert_eq!(path.len(), 1 << d);
            let checks = check_path(&path, &c, &dv);
            assert!(checks.holds(), "{checks:?}");
            assert_eq!(checks.gray, Some(true));
        }
    }

    #[test]
    fn bad_start_rejected() {
        let p = make_box(&BoxBounds::new(vec![int(0)], vec![int(1)]).unwrap());
        assert_eq!(
            gass_saaty_path(&p, &[int(1)], &[int(1)], &Basis::new(vec![1])),
            Err(SimplexError::BadStart { row: 1 })
        );
    }

    #[test]
    fn tie_is_a_genericity_violation() {
        // Unit square, c = (1, 1), d = (1, 1) scaled: both edges at the
        // origin break at the same λ.
        let sq = make_box(&BoxBounds::unit_cube(2));
        let err = gass_saaty_path(
            &sq,
            &[int(1), int(1)],
            &[int(1), int(1)],
            &Basis::new(vec![0, 2]),
        )
        .unwrap_err();
        assert!(matches!(err, SimplexError::Genericity { ref rows, .. } if rows == &vec![0, 2]));
    }

    #[test]
    fn constant_edge_is_a_genericity_violation() {
        let sq = make_box(&BoxBounds::unit_cube(2));
        let err = gass_saaty_path(
            &sq,
            &[int(0), int(-1)],
            &[int(1), int(0)],
            &Basis::new(vec![0, 2]),
        );
        // At the origin the x2-edge has d^T z = 0 and c^T z < 0: fine; the
        // path then pivots along x1 and ends.
        assert!(err.is_ok());
        let err = gass_saaty_path(
            &sq,
            &[int(1), int(0)],
            &[int(1), int(0)],
            &Basis::new(vec![0, 2]),
        );
        assert!(matches!(err, Err(SimplexError::BadStart { row: 2 })));
    }

    #[test]
    fn unbounded_edge() {
        // x >= 0, y >= 0, y <= 1: open to the right.
        let rows = vec![
            vec![int(-1), int(0)],
            vec![int(0), int(-1)],
            vec![int(0), int(1)],
        ];
        let p = HPolytope::new(
            RatMatrix::new(rows).unwrap(),
            vec![int(0), int(0), int(1)],
            None,
        )
        .unwrap();
        let err = gass_saaty_path(
            &p,
            &[int(1), int(0)],
            &[int(1), int(2)],
            &Basis::new(vec![0, 1]),
        );
        assert!(matches!(err, Err(SimplexError::Unbounded { .. })));
    }

    #[test]
    fn solve_square_examples() {
        let sq = make_box(&BoxBounds::unit_cube(2));
        let (basis, x) =
            shadow_vertex_solve(&sq, &[int(1), int(1)], &Basis::new(vec![0, 2])).unwrap();
        assert_eq!(x, vec![int(1), int(1)]);
        assert_eq!(basis, Basis::new(vec![1, 3]));

        assert!(matches!(
            shadow_vertex_solve(&sq, &[int(1), int(1)], &Basis::new(vec![0, 1])),
            Err(SimplexError::Polytope(PolytopeError::NonBasis(_)))
        ));
    }

    #[test]
    fn solve_km3_matches_brute_force() {
        let p = KmParams::new(3, rat(1, 4)).unwrap();
        let poly = make_klee_minty(3, p.eps()).unwrap();
        let c = objective_c(&p);
        let start = km_start_code(&p).unwrap().basis();
        let (_, x) = shadow_vertex_solve(&poly, &c, &start).unwrap();
        // c_3 = 0, so the maximum is shared by the two vertices on an x_3 edge.
        let values: Vec<Rational> = poly
            .enumerate_vertices()
            .unwrap()
            .vertices
            .iter()
            .map(|(_, v)| dot_unchecked(&c, v))
            .collect();
        let best = values.iter().max().unwrap();
        assert_eq!(dot_unchecked(&c, &x), *best);
        assert_eq!(values.iter().filter(|v| *v == best).count(), 2);
    }

    #[test]
    fn solve_infeasible_start() {
        let rows = vec![
            vec![int(1), int(0)],
            vec![int(0), int(1)],
            vec![int(1), int(1)],
            vec![int(-1), int(0)],
            vec![int(0), int(-1)],
        ];
        let p = HPolytope::new(
            RatMatrix::new(rows).unwrap(),
            vec![int(1), int(1), int(1), int(0), int(0)],
            None,
        )
        .unwrap();
        assert!(matches!(
            shadow_vertex_solve(&p, &[int(1), int(0)], &Basis::new(vec![0, 1])),
            Err(SimplexError::Polytope(PolytopeError::InfeasibleBasis(_)))
        ));
    }

    #[test]
    fn oracle_accepts_box_paths_and_rejects_corruption() {
        let cube = make_box(&BoxBounds::unit_cube(3));
        let c = vec![int(1), rat(-1, 2), int(2)];
        let d = vec![int(1), int(3), rat(1, 3)];
        let path = gass_saaty_path(&cube, &c, &d, &Basis::new(vec![0, 2, 4])).unwrap();
        let report = verify_path_against_oracle(&cube, &path, &c, &d, 16).unwrap();
        assert!(report.passes(), "{report:?}");
        assert!(check_path(&path, &c, &d).holds());

        let mut bad = path.clone();
        let n = bad.steps.len();
        bad.steps.swap(0, n - 1);
        let report = verify_path_against_oracle(&cube, &bad, &c, &d, 0).unwrap();
        assert!(!report.passes());
    }

    #[test]
    fn interval_lookup() {
        let p = make_box(&BoxBounds::new(vec![int(0)], vec![int(1)]).unwrap());
        let path = gass_saaty_path(&p, &[int(1)], &[int(1)], &Basis::new(vec![0])).unwrap();
        assert_eq!(path.interval_of(&int(-5)), Some(0));
        assert_eq!(path.interval_of(&int(-1)), None);
        assert_eq!(path.interval_of(&int(3)), Some(1));
        assert_eq!(path.representative(0), int(-2));
        assert_eq!(path.representative(1), int(0));
    }
}
