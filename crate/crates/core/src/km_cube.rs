//! Closed-form Klee-Minty machinery.
//!
//! Vertices of the Klee-Minty cube are indexed by bit vectors `u`: bit `j`
//! selects the lower (`0`) or upper (`1`) inequality of pair `j`. Positions
//! `j` and `ell` in this module are 1-based, matching the usual statement of
//! the recursion `x_j(u) = u_j + (1 - 2 u_j) eps x_{j-1}(u)` with `x_0 = 0`.
//!
//! The closed forms (edge directions, `q`, the objective pair `c`, `d(u)`)
//! are checked against the recursion whenever debug assertions are on.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{dot_unchecked, pow, sub, Rational};
use crate::polytope::{check_eps, enumeration_limit, lower_row, upper_row, Basis, PolytopeError};

/// Largest `d` for which [`km_start_code`] enumerates all codes by default.
pub const START_CODE_MAX_DIM: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KmError {
    #[error(transparent)]
    Params(#[from] PolytopeError),
    #[error("vertex code has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("index {index} outside 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("closed form disagrees with the recursion: {0}")]
    FormulaMismatch(String),
    #[error("dimension {d} exceeds the enumeration guard of {max}")]
    TooLarge { d: usize, max: usize },
    #[error("invalid vertex code {0:?}")]
    Parse(String),
}

/// Bit vector `u_1 ... u_d`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexCode(Vec<bool>);

impl VertexCode {
    pub fn new(bits: Vec<bool>) -> Self {
        VertexCode(bits)
    }

    pub fn zeros(d: usize) -> Self {
        VertexCode(vec![false; d])
    }

    /// Code whose bit `j` (1-based) is bit `j - 1` of `k`.
    pub fn from_index(k: u64, d: usize) -> Self {
        VertexCode((0..d).map(|j| k >> j & 1 == 1).collect())
    }

    /// All `2^d` codes in lexicographic order of the bit string.
    pub fn all(d: usize) -> impl Iterator<Item = VertexCode> {
        (0..1u64 << d).map(move |k| VertexCode((0..d).map(|j| k >> (d - 1 - j) & 1 == 1).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Bit `u_j`, 1-based.
    pub fn bit(&self, j: usize) -> bool {
        self.0[j - 1]
    }

    /// `u ⊕ {ell}`.
    pub fn flipped(&self, ell: usize) -> Self {
        let mut bits = self.0.clone();
        bits[ell - 1] = !bits[ell - 1];
        VertexCode(bits)
    }

    pub fn hamming(&self, other: &Self) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    /// Basis of tight rows: lower row of pair `j` when `u_j = 0`, upper row
    /// otherwise.
    pub fn basis(&self) -> Basis {
        Basis::new(
            self.0
                .iter()
                .enumerate()
                .map(|(j, &b)| if b { upper_row(j) } else { lower_row(j) })
                .collect(),
        )
    }

    /// Inverse of [`VertexCode::basis`]; `None` unless the basis holds exactly
    /// one row of each pair.
    pub fn from_basis(basis: &Basis, d: usize) -> Option<Self> {
        let bits = (0..d)
            .map(
                |j| match (basis.contains(lower_row(j)), basis.contains(upper_row(j))) {
                    (true, false) => Some(false),
                    (false, true) => Some(true),
                    _ => None,
                },
            )
            .collect::<Option<Vec<bool>>>()?;
        (basis.indices().len() == d).then_some(VertexCode(bits))
    }
}

impl fmt::Display for VertexCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for VertexCode {
    type Err = KmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(KmError::Parse(s.to_string()));
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(KmError::Parse(s.to_string())),
            })
            .collect::<Result<_, _>>()
            .map(VertexCode)
    }
}

/// Dimension and deformation parameter, `0 < eps < 1/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmParams {
    d: usize,
    eps: Rational,
}

impl KmParams {
    pub fn new(d: usize, eps: Rational) -> Result<Self, KmError> {
        if d == 0 {
            return Err(PolytopeError::Parameter("dimension must be at least 1".into()).into());
        }
        check_eps(&eps)?;
        Ok(Self { d, eps })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn eps(&self) -> &Rational {
        &self.eps
    }

    fn check_code(&self, u: &VertexCode) -> Result<(), KmError> {
        if u.len() != self.d {
            return Err(KmError::LengthMismatch {
                expected: self.d,
                found: u.len(),
            });
        }
        Ok(())
    }

    fn check_ell(&self, ell: usize) -> Result<(), KmError> {
        if ell == 0 || ell > self.d {
            return Err(KmError::IndexOutOfRange {
                index: ell,
                max: self.d,
            });
        }
        Ok(())
    }
}

fn sign_factor(bit: bool) -> i32 {
    if bit {
        -1
    } else {
        1
    }
}

fn signed(value: Rational, sign: i32) -> Rational {
    if sign < 0 {
        -value
    } else {
        value
    }
}

/// The vertex `x(u)` via the recursion.
pub fn km_vertex(u: &VertexCode, p: &KmParams) -> Result<Vec<Rational>, KmError> {
    p.check_code(u)?;
    let mut x = Vec::with_capacity(p.d);
    let mut prev = Rational::zero();
    for &bit in u.bits() {
        let coupled = &p.eps * &prev;
        let xj = if bit {
            Rational::one() - coupled
        } else {
            coupled
        };
        x.push(xj.clone());
        prev = xj;
    }
    Ok(x)
}

/// Parity product `p_i^j(u) = prod_{k=i}^{j} (1 - 2 u_k)`, equal to `+1`
/// when `i > j`. Requires `1 <= i <= d + 1` and `1 <= j <= d`.
pub fn parity_p(u: &VertexCode, i: usize, j: usize) -> Result<i32, KmError> {
    let d = u.len();
    if i == 0 || i > d + 1 {
        return Err(KmError::IndexOutOfRange {
            index: i,
            max: d + 1,
        });
    }
    if j == 0 || j > d {
        return Err(KmError::IndexOutOfRange { index: j, max: d });
    }
    Ok(parity_unchecked(u, i, j))
}

fn parity_unchecked(u: &VertexCode, i: usize, j: usize) -> i32 {
    if i > j {
        return 1;
    }
    let ones = u.bits()[i - 1..j].iter().filter(|&&b| b).count();
    if ones % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `q^(ell)(u) = x_ell(u ⊕ {ell}) - x_ell(u)`, computed in closed form as
/// `(1 - 2 u_ell)(1 - 2 eps x_{ell-1}(u))`.
pub fn q_ell(u: &VertexCode, ell: usize, p: &KmParams) -> Result<Rational, KmError> {
    p.check_ell(ell)?;
    let x = km_vertex(u, p)?;
    let closed = q_closed(u, ell, &x, p);
    if cfg!(debug_assertions) {
        let flipped = km_vertex(&u.flipped(ell), p)?;
        let direct = &flipped[ell - 1] - &x[ell - 1];
        if direct != closed {
            return Err(KmError::FormulaMismatch(format!(
                "q^({ell})({u}): closed form {closed}, difference {direct}"
            )));
        }
    }
    Ok(closed)
}

fn q_closed(u: &VertexCode, ell: usize, x: &[Rational], p: &KmParams) -> Rational {
    let prev = if ell >= 2 {
        x[ell - 2].clone()
    } else {
        Rational::zero()
    };
    let two = Rational::from_integer(2.into());
    let magnitude = Rational::one() - two * &p.eps * prev;
    signed(magnitude, sign_factor(u.bit(ell)))
}

/// `y^(ell)(u)`: zero before position `ell`, `p_{ell+1}^j(u) eps^{j-ell}`
/// from position `ell` on.
pub fn edge_direction_y(
    u: &VertexCode,
    ell: usize,
    p: &KmParams,
) -> Result<Vec<Rational>, KmError> {
    p.check_code(u)?;
    p.check_ell(ell)?;
    let y = y_closed(u, ell, p);
    debug_assert!((ell..=p.d).all(|j| {
        let expected = signed(pow(&p.eps, j - ell), parity_unchecked(u, ell + 1, j));
        y[j - 1] == expected
    }));
    Ok(y)
}

fn y_closed(u: &VertexCode, ell: usize, p: &KmParams) -> Vec<Rational> {
    let mut y = vec![Rational::zero(); p.d];
    let mut power = Rational::one();
    let mut parity = 1;
    for j in ell..=p.d {
        if j > ell {
            power *= &p.eps;
            parity *= sign_factor(u.bit(j));
        }
        y[j - 1] = signed(power.clone(), parity);
    }
    y
}

/// `x(u ⊕ {ell}) - x(u)` as `y^(ell)(u) * q^(ell)(u)`.
pub fn edge_delta(u: &VertexCode, ell: usize, p: &KmParams) -> Result<Vec<Rational>, KmError> {
    let y = edge_direction_y(u, ell, p)?;
    let q = q_ell(u, ell, p)?;
    let delta: Vec<Rational> = y.iter().map(|v| v * &q).collect();
    if cfg!(debug_assertions) {
        let direct = sub(&km_vertex(&u.flipped(ell), p)?, &km_vertex(u, p)?);
        if direct != delta {
            return Err(KmError::FormulaMismatch(format!(
                "edge ({u}, {ell}) closed form disagrees with vertex difference"
            )));
        }
    }
    Ok(delta)
}

/// `c = (eps^{3(d-1)}, eps^{3(d-2)}, ..., eps^3, 0)`.
pub fn objective_c(p: &KmParams) -> Vec<Rational> {
    let cube = pow(&p.eps, 3);
    let mut c = vec![Rational::zero(); p.d];
    let mut power = Rational::one();
    for j in (0..p.d.saturating_sub(1)).rev() {
        power *= &cube;
        c[j] = power.clone();
    }
    c
}

/// `d = (0, ..., 0, 1)`.
pub fn objective_d(p: &KmParams) -> Vec<Rational> {
    let mut d = vec![Rational::zero(); p.d];
    d[p.d - 1] = Rational::one();
    d
}

/// `d(u) = lambda(u) * (0, ..., 0, 1)` with
/// `lambda(u) = -sum_{j=0}^{d-1} p_{j+1}^d(u) eps^{2(d-j)}`.
pub fn lambda_u(u: &VertexCode, p: &KmParams) -> Result<Rational, KmError> {
    p.check_code(u)?;
    let sq = &p.eps * &p.eps;
    // Accumulate from j = d-1 down to 0: power eps^{2(d-j)}, parity p_{j+1}^d.
    let mut sum = Rational::zero();
    let mut power = Rational::one();
    let mut parity = 1;
    for j in (0..p.d).rev() {
        power *= &sq;
        parity *= sign_factor(u.bit(j + 1));
        sum += signed(power.clone(), parity);
    }
    Ok(-sum)
}

/// The vector `d(u)` together with its scalar multiplier `lambda(u)`.
pub fn objective_d_u(u: &VertexCode, p: &KmParams) -> Result<(Vec<Rational>, Rational), KmError> {
    let lambda = lambda_u(u, p)?;
    let mut v = vec![Rational::zero(); p.d];
    v[p.d - 1] = lambda.clone();
    Ok((v, lambda))
}

/// `e(u) = c + d(u)`.
pub fn objective_e_u(u: &VertexCode, p: &KmParams) -> Result<Vec<Rational>, KmError> {
    let mut e = objective_c(p);
    e[p.d - 1] += lambda_u(u, p)?;
    Ok(e)
}

/// Per-vertex outcome of the local-optimality check for `e(u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub code: VertexCode,
    /// `e(u)^T (x(u ⊕ {ell}) - x(u))` for `ell = 1..=d`.
    pub values: Vec<Rational>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.values.iter().all(Signed::is_negative)
    }
}

/// Evaluate `e(u)` along every edge leaving `x(u)`.
pub fn check_lemma_main(u: &VertexCode, p: &KmParams) -> Result<LemmaReport, KmError> {
    let e = objective_e_u(u, p)?;
    let x = km_vertex(u, p)?;
    // e^T (y q) = (e^T y) q; the closed forms are cross-checked in edge_delta.
    let values = (1..=p.d)
        .map(|ell| dot_unchecked(&e, &y_closed(u, ell, p)) * q_closed(u, ell, &x, p))
        .collect();
    Ok(LemmaReport {
        code: u.clone(),
        values,
    })
}

/// The code minimizing `x_d(u)`, i.e. the vertex maximizing `-d^T x` for
/// `d = (0, ..., 0, 1)`, found by enumerating all codes.
pub fn km_start_code(p: &KmParams) -> Result<VertexCode, KmError> {
    let max = START_CODE_MAX_DIM.max(enumeration_limit().ilog2() as usize);
    if p.d > max {
        return Err(KmError::TooLarge { d: p.d, max });
    }
    let mut best: Option<(Rational, VertexCode)> = None;
    for u in VertexCode::all(p.d) {
        let last = km_vertex(&u, p)?.pop().expect("d >= 1");
        match &best {
            Some((value, _)) if *value <= last => {}
            _ => best = Some((last, u)),
        }
    }
    Ok(best.expect("at least one code").1)
}
