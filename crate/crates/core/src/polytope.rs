//! Polytopes in inequality form `A x <= b`, their bases and vertices, and
//! the box and Klee-Minty generators.

use std::fmt::Write as _;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{
    dot_unchecked, format_rational, parse_rational, solve_square, LinalgError, RatMatrix, Rational,
};

/// Default ceiling on the number of `d`-subsets examined by brute-force
/// vertex enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: u128 = 10_000_000;

/// Environment variable overriding [`DEFAULT_ENUMERATION_LIMIT`] and the
/// other enumeration guards.
pub const MAX_ENUM_ENV: &str = "SHADOWLAB_MAX_ENUM";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("degenerate box: lower bound {lower} is not below upper bound {upper} in coordinate {index}")]
    DegenerateBox {
        index: usize,
        lower: String,
        upper: String,
    },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("row {0} of the constraint matrix is zero")]
    ZeroRow(usize),
    #[error("need at least d >= 1 variables and n >= d rows (got n={rows}, d={dim})")]
    Shape { rows: usize, dim: usize },
    #[error("basis must have exactly {expected} distinct row indices below {rows}")]
    BasisShape { expected: usize, rows: usize },
    #[error("rows {0:?} do not form a basis (singular submatrix)")]
    NonBasis(Vec<usize>),
    #[error("basis {0:?} is infeasible")]
    InfeasibleBasis(Vec<usize>),
    #[error("instance too large: {count} candidate subsets exceed the limit of {limit} (set {MAX_ENUM_ENV} to override)")]
    InstanceTooLarge { count: u128, limit: u128 },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Provenance of a polytope, carried through the `.hpoly` comment line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    Box,
    KleeMinty { eps: Rational },
    Custom,
}

impl Generator {
    fn header(&self) -> String {
        match self {
            Generator::Box => "box".to_string(),
            Generator::KleeMinty { eps } => format!("klee-minty eps={}", format_rational(eps)),
            Generator::Custom => "custom".to_string(),
        }
    }

    fn parse_header(text: &str) -> Option<Self> {
        let mut words = text.split_whitespace();
        let tag = words.next()?;
        let params: Vec<&str> = words.collect();
        match (tag, params.as_slice()) {
            ("box", []) => Some(Generator::Box),
            ("custom", []) => Some(Generator::Custom),
            ("klee-minty", [p]) => {
                let eps = parse_rational(p.strip_prefix("eps=")?).ok()?;
                Some(Generator::KleeMinty { eps })
            }
            _ => None,
        }
    }
}

/// A set of exactly `d` row indices, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Basis(Vec<usize>);

impl Basis {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        Basis(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, row: usize) -> bool {
        self.0.binary_search(&row).is_ok()
    }

    /// Replace `leaving` by `entering`.
    pub fn pivot(&self, leaving: usize, entering: usize) -> Self {
        let mut rows: Vec<usize> = self.0.iter().copied().filter(|&r| r != leaving).collect();
        rows.push(entering);
        Basis::new(rows)
    }
}

/// Axis-parallel box `l_i <= x_i <= u_i` with `l_i < u_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxBounds {
    lowers: Vec<Rational>,
    uppers: Vec<Rational>,
}

impl BoxBounds {
    pub fn new(lowers: Vec<Rational>, uppers: Vec<Rational>) -> Result<Self, PolytopeError> {
        if lowers.len() != uppers.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: lowers.len(),
                found: uppers.len(),
            }
            .into());
        }
        if lowers.is_empty() {
            return Err(PolytopeError::Shape { rows: 0, dim: 0 });
        }
        for (i, (l, u)) in lowers.iter().zip(&uppers).enumerate() {
            if l >= u {
                return Err(PolytopeError::DegenerateBox {
                    index: i,
                    lower: format_rational(l),
                    upper: format_rational(u),
                });
            }
        }
        Ok(Self { lowers, uppers })
    }

    pub fn unit_cube(d: usize) -> Self {
        Self::new(vec![Rational::zero(); d], vec![Rational::one(); d]).expect("d >= 1")
    }

    pub fn dim(&self) -> usize {
        self.lowers.len()
    }

    pub fn lowers(&self) -> &[Rational] {
        &self.lowers
    }

    pub fn uppers(&self) -> &[Rational] {
        &self.uppers
    }

    /// The corner taking the upper bound exactly where `upper[i]` is set.
    pub fn corner(&self, upper: impl Fn(usize) -> bool) -> Vec<Rational> {
        (0..self.dim())
            .map(|i| {
                if upper(i) {
                    self.uppers[i].clone()
                } else {
                    self.lowers[i].clone()
                }
            })
            .collect()
    }

    /// All `2^d` corners; corner `k` takes the upper bound in coordinate `i`
    /// iff bit `i` of `k` is set.
    pub fn corners(&self) -> Vec<Vec<Rational>> {
        (0..1usize << self.dim())
            .map(|k| self.corner(|i| k >> i & 1 == 1))
            .collect()
    }
}

/// Result of brute-force vertex enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexEnumeration {
    /// Feasible bases with their vertices, sorted by basis.
    pub vertices: Vec<(Basis, Vec<Rational>)>,
    /// Number of bases whose point was already produced by an earlier basis.
    /// Nonzero means the polytope is not simple.
    pub duplicate_bases: usize,
}

impl VertexEnumeration {
    /// Distinct vertex points, first occurrence order.
    pub fn distinct_points(&self) -> Vec<Vec<Rational>> {
        let mut seen = std::collections::HashSet::new();
        self.vertices
            .iter()
            .filter(|(_, x)| seen.insert(x.clone()))
            .map(|(_, x)| x.clone())
            .collect()
    }
}

/// `{x : A x <= b}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolytope {
    a: RatMatrix,
    b: Vec<Rational>,
    generator: Option<Generator>,
}

impl HPolytope {
    pub fn new(
        a: RatMatrix,
        b: Vec<Rational>,
        generator: Option<Generator>,
    ) -> Result<Self, PolytopeError> {
        let (n, d) = (a.nrows(), a.ncols());
        if d == 0 || n < d {
            return Err(PolytopeError::Shape { rows: n, dim: d });
        }
        if b.len() != n {
            return Err(LinalgError::DimensionMismatch {
                expected: n,
                found: b.len(),
            }
            .into());
        }
        if let Some(i) = a.rows().position(|r| r.iter().all(Zero::is_zero)) {
            return Err(PolytopeError::ZeroRow(i));
        }
        Ok(Self { a, b, generator })
    }

    pub fn dim(&self) -> usize {
        self.a.ncols()
    }

    pub fn num_rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.b
    }

    pub fn generator(&self) -> Option<&Generator> {
        self.generator.as_ref()
    }

    /// Maximum number of nonzero coefficients in any row.
    pub fn sparsity(&self) -> usize {
        self.a
            .rows()
            .map(|r| r.iter().filter(|v| !v.is_zero()).count())
            .max()
            .unwrap_or(0)
    }

    fn check_dim(&self, x: &[Rational]) -> Result<(), PolytopeError> {
        if x.len() != self.dim() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            }
            .into());
        }
        Ok(())
    }

    /// `b_i - A_i x` for every row.
    pub fn slacks(&self, x: &[Rational]) -> Result<Vec<Rational>, PolytopeError> {
        self.check_dim(x)?;
        Ok(self
            .a
            .rows()
            .zip(&self.b)
            .map(|(row, b)| b - dot_unchecked(row, x))
            .collect())
    }

    pub fn is_feasible(&self, x: &[Rational]) -> Result<bool, PolytopeError> {
        Ok(self.slacks(x)?.iter().all(|s| !s.is_negative()))
    }

    /// Indices of rows with `A_i x = b_i`.
    pub fn tight_rows(&self, x: &[Rational]) -> Result<Vec<usize>, PolytopeError> {
        Ok(self
            .slacks(x)?
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_zero())
            .map(|(i, _)| i)
            .collect())
    }

    pub(crate) fn check_basis(&self, basis: &Basis) -> Result<(), PolytopeError> {
        let idx = basis.indices();
        let distinct = idx.windows(2).all(|w| w[0] < w[1]);
        if idx.len() != self.dim() || !distinct || idx.iter().any(|&i| i >= self.num_rows()) {
            return Err(PolytopeError::BasisShape {
                expected: self.dim(),
                rows: self.num_rows(),
            });
        }
        Ok(())
    }

    /// Solve `A_B x = b_B` without checking feasibility.
    pub(crate) fn basis_point(&self, basis: &Basis) -> Result<Vec<Rational>, PolytopeError> {
        self.check_basis(basis)?;
        let sub = self.a.select_rows(basis.indices());
        let rhs: Vec<Rational> = basis.indices().iter().map(|&i| self.b[i].clone()).collect();
        solve_square(&sub, &rhs).map_err(|e| match e {
            LinalgError::Singular => PolytopeError::NonBasis(basis.indices().to_vec()),
            other => other.into(),
        })
    }

    /// The vertex determined by a feasible basis.
    pub fn vertex_of(&self, basis: &Basis) -> Result<Vec<Rational>, PolytopeError> {
        let x = self.basis_point(basis)?;
        if !self.is_feasible(&x)? {
            return Err(PolytopeError::InfeasibleBasis(basis.indices().to_vec()));
        }
        Ok(x)
    }

    /// All feasible bases and their vertices by trying every `d`-subset of
    /// rows. Guarded by [`enumeration_limit`].
    pub fn enumerate_vertices(&self) -> Result<VertexEnumeration, PolytopeError> {
        self.enumerate_vertices_with_limit(enumeration_limit())
    }

    pub fn enumerate_vertices_with_limit(
        &self,
        limit: u128,
    ) -> Result<VertexEnumeration, PolytopeError> {
        let count = binomial(self.num_rows(), self.dim());
        if count > limit {
            return Err(PolytopeError::InstanceTooLarge { count, limit });
        }
        const CHUNK: usize = 1 << 14;
        let mut vertices = Vec::new();
        let mut subsets = (0..self.num_rows()).combinations(self.dim());
        loop {
            let chunk: Vec<Vec<usize>> = subsets.by_ref().take(CHUNK).collect();
            if chunk.is_empty() {
                break;
            }
            let found: Vec<(Basis, Vec<Rational>)> = chunk
                .into_par_iter()
                .filter_map(|rows| {
                    let basis = Basis(rows);
                    let x = self.basis_point(&basis).ok()?;
                    self.is_feasible(&x).ok()?.then_some((basis, x))
                })
                .collect();
            vertices.extend(found);
        }
        let distinct = {
            let mut seen = std::collections::HashSet::new();
            vertices.iter().filter(|(_, x)| seen.insert(x)).count()
        };
        Ok(VertexEnumeration {
            duplicate_bases: vertices.len() - distinct,
            vertices,
        })
    }

    /// Serialize in the `.hpoly` text format.
    pub fn to_hpoly(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.num_rows(), self.dim());
        if let Some(g) = &self.generator {
            let _ = writeln!(out, "# generator: {}", g.header());
        }
        for (row, b) in self.a.rows().zip(&self.b) {
            let coeffs: Vec<String> = row.iter().map(format_rational).collect();
            let _ = writeln!(out, "{} | {}", coeffs.join(" "), format_rational(b));
        }
        out
    }

    /// Parse the `.hpoly` text format.
    pub fn from_hpoly(text: &str) -> Result<Self, PolytopeError> {
        let fmt_err = |line: usize, message: &str| PolytopeError::Format {
            line,
            message: message.to_string(),
        };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or_else(|| fmt_err(1, "empty input"))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| fmt_err(1, "expected `n d`"))?;
        let [n, d] = dims[..] else {
            return Err(fmt_err(1, "expected `n d`"));
        };

        let mut generator = None;
        let mut rows = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for (lineno, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if lineno == 2 {
                    if let Some(tag) = comment.trim().strip_prefix("generator:") {
                        generator = Some(
                            Generator::parse_header(tag)
                                .ok_or_else(|| fmt_err(lineno, "unknown generator tag"))?,
                        );
                    }
                }
                continue;
            }
            let (lhs, b) = line
                .split_once('|')
                .ok_or_else(|| fmt_err(lineno, "expected `a_1 ... a_d | b`"))?;
            let coeffs: Vec<Rational> = lhs
                .split_whitespace()
                .map(parse_rational)
                .collect::<Result<_, _>>()
                .map_err(|e| fmt_err(lineno, &e.to_string()))?;
            if coeffs.len() != d {
                return Err(fmt_err(lineno, &format!("expected {d} coefficients")));
            }
            rows.push(coeffs);
            rhs.push(parse_rational(b).map_err(|e| fmt_err(lineno, &e.to_string()))?);
        }
        if rows.len() != n {
            return Err(fmt_err(
                1,
                &format!("header declares {n} rows, found {}", rows.len()),
            ));
        }
        HPolytope::new(RatMatrix::new(rows)?, rhs, generator)
    }
}

/// Build `l_i <= x_i <= u_i` as rows `-x_i <= -l_i`, `x_i <= u_i`, pair by
/// pair in coordinate order.
pub fn make_box(bounds: &BoxBounds) -> HPolytope {
    let d = bounds.dim();
    let mut rows = Vec::with_capacity(2 * d);
    let mut rhs = Vec::with_capacity(2 * d);
    for i in 0..d {
        let mut lower = vec![Rational::zero(); d];
        lower[i] = -Rational::one();
        let mut upper = vec![Rational::zero(); d];
        upper[i] = Rational::one();
        rows.push(lower);
        rhs.push(-bounds.lowers[i].clone());
        rows.push(upper);
        rhs.push(bounds.uppers[i].clone());
    }
    HPolytope::new(
        RatMatrix::new(rows).expect("rectangular"),
        rhs,
        Some(Generator::Box),
    )
    .expect("box rows are nonzero")
}

/// Row index of the lower-bound inequality of pair `j` (0-based).
pub fn lower_row(j: usize) -> usize {
    2 * j
}

/// Row index of the upper-bound inequality of pair `j` (0-based).
pub fn upper_row(j: usize) -> usize {
    2 * j + 1
}

pub(crate) fn check_eps(eps: &Rational) -> Result<(), PolytopeError> {
    let half = Rational::new(1.into(), 2.into());
    if !eps.is_positive() || *eps >= half {
        return Err(PolytopeError::Parameter(format!(
            "eps must satisfy 0 < eps < 1/2, got {}",
            format_rational(eps)
        )));
    }
    Ok(())
}

/// The Klee-Minty cube `0 <= x_1 <= 1`,
/// `eps x_{j-1} <= x_j <= 1 - eps x_{j-1}` for `j = 2..d`.
pub fn make_klee_minty(d: usize, eps: &Rational) -> Result<HPolytope, PolytopeError> {
    if d == 0 {
        return Err(PolytopeError::Parameter(
            "dimension must be at least 1".into(),
        ));
    }
    check_eps(eps)?;
    let mut rows = Vec::with_capacity(2 * d);
    let mut rhs = Vec::with_capacity(2 * d);
    for j in 0..d {
        let mut lower = vec![Rational::zero(); d];
        let mut upper = vec![Rational::zero(); d];
        lower[j] = -Rational::one();
        upper[j] = Rational::one();
        if j > 0 {
            lower[j - 1] = eps.clone();
            upper[j - 1] = eps.clone();
        }
        rows.push(lower);
        rhs.push(Rational::zero());
        rows.push(upper);
        rhs.push(Rational::one());
    }
    HPolytope::new(
        RatMatrix::new(rows)?,
        rhs,
        Some(Generator::KleeMinty { eps: eps.clone() }),
    )
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Enumeration guard, from [`MAX_ENUM_ENV`] when set.
pub fn enumeration_limit() -> u128 {
    std::env::var(MAX_ENUM_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUMERATION_LIMIT)
}
