//! Exact rational scalars, vectors and dense square solves.
//!
//! Everything downstream is computed over [`Rational`]; floating point only
//! appears in [`to_decimal`] and [`to_f64`], which exist for CSV/SVG output.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Default number of significant digits for display-only decimal output.
pub const DEFAULT_DECIMAL_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("singular system")]
    Singular,
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

/// Shorthand for `num/den` with small integer parts.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse the `p/q` text form (`q` may be omitted).
pub fn parse_rational(text: &str) -> Result<Rational, LinalgError> {
    let text = text.trim();
    let err = || LinalgError::Parse(text.to_string());
    match text.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(p, q))
        }
        None => BigInt::from_str(text)
            .map(Rational::from_integer)
            .map_err(|_| err()),
    }
}

/// Canonical `p/q` text form; `q` is omitted when it equals 1.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// `value^exp` for a non-negative exponent.
pub fn pow(value: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= value;
    }
    acc
}

/// Sign as -1, 0 or +1.
pub fn signum(value: &Rational) -> i32 {
    if value.is_positive() {
        1
    } else if value.is_negative() {
        -1
    } else {
        0
    }
}

/// Lossy conversion for plotting.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering with `digits` significant digits, rounded half away
/// from zero. Uses scientific notation outside `[1e-4, 1e12)`.
pub fn to_decimal(value: &Rational, digits: usize) -> String {
    let digits = digits.max(1);
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let abs = value.abs();

    // Find exponent e with 10^e <= abs < 10^(e+1).
    let ten = BigInt::from(10);
    let mut exp: i64 = (abs.numer().bits() as i64 - abs.denom().bits() as i64) * 30103 / 100000;
    let scaled = |e: i64| -> Rational {
        if e >= 0 {
            abs.clone() / Rational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            abs.clone() * Rational::from_integer(num_traits::pow(ten.clone(), (-e) as usize))
        }
    };
    let mut s = scaled(exp);
    while s >= Rational::from_integer(ten.clone()) {
        exp += 1;
        s = scaled(exp);
    }
    while s < Rational::one() {
        exp -= 1;
        s = scaled(exp);
    }

    // mantissa digits: round(s * 10^(digits-1))
    let shift = Rational::from_integer(num_traits::pow(ten.clone(), digits - 1));
    let m = s * shift;
    let (q, r) = m.numer().div_rem(m.denom());
    let mut mant = q;
    if r * 2 >= *m.denom() {
        mant += 1;
    }
    if mant >= num_traits::pow(ten.clone(), digits) {
        mant /= 10;
        exp += 1;
    }
    let mut mdigits = mant.to_string();
    debug_assert_eq!(mdigits.len(), digits);

    let sign = if negative { "-" } else { "" };
    let body = if (-4..12).contains(&exp) {
        if exp >= 0 {
            let int_len = exp as usize + 1;
            while mdigits.len() < int_len {
                mdigits.push('0');
            }
            let (i, f) = mdigits.split_at(int_len);
            join_fraction(i, f)
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            join_fraction("0", &format!("{zeros}{mdigits}"))
        }
    } else {
        let (i, f) = mdigits.split_at(1);
        format!("{}e{}", join_fraction(i, f), exp)
    };
    format!("{sign}{body}")
}

fn join_fraction(int_part: &str, frac: &str) -> String {
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        int_part.to_string()
    } else {
        format!("{int_part}.{frac}")
    }
}

pub fn dot(u: &[Rational], v: &[Rational]) -> Result<Rational, LinalgError> {
    if u.len() != v.len() {
        return Err(LinalgError::DimensionMismatch {
            expected: u.len(),
            found: v.len(),
        });
    }
    Ok(dot_unchecked(u, v))
}

/// Inner product of equal-length slices; zero entries are skipped.
pub(crate) fn dot_unchecked(u: &[Rational], v: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (a, b) in u.iter().zip(v) {
        if !a.is_zero() && !b.is_zero() {
            acc += a * b;
        }
    }
    acc
}

pub fn sub(u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn scale(u: &[Rational], s: &Rational) -> Vec<Rational> {
    u.iter().map(|a| a * s).collect()
}

/// Comma-free rendering of a vector as `(a, b, c)`.
pub fn format_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

/// Dense rectangular matrix of rationals, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: Vec<Vec<Rational>>,
    cols: usize,
}

impl RatMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Ragged {
                    row: i,
                    expected: cols,
                    found: row.len(),
                });
            }
        }
        Ok(Self { rows, cols })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self { rows, cols: n }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.rows[i]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.rows.iter().map(Vec::as_slice)
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    /// The matrix formed by the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        Self {
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            cols: self.cols,
        }
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok(self.rows.iter().map(|r| dot_unchecked(r, x)).collect())
    }

    fn require_square(&self) -> Result<usize, LinalgError> {
        if self.nrows() != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.nrows(),
                cols: self.cols,
            });
        }
        Ok(self.cols)
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self, LinalgError> {
        let n = self.require_square()?;
        let mut rhs = Self::identity(n).rows;
        let mut lhs = self.rows.clone();
        eliminate(&mut lhs, &mut rhs)?;
        Ok(Self { rows: rhs, cols: n })
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        Self {
            rows,
            cols: self.nrows(),
        }
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| format_vector(r)).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Solve `a x = b` exactly for square nonsingular `a`.
pub fn solve_square(a: &RatMatrix, b: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
    let n = a.require_square()?;
    if b.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let mut lhs = a.rows.clone();
    let mut rhs: Vec<Vec<Rational>> = b.iter().map(|v| vec![v.clone()]).collect();
    eliminate(&mut lhs, &mut rhs)?;
    Ok(rhs.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Reduce `lhs` to the identity, applying the same row operations to `rhs`.
/// Pivots on the first nonzero entry in each column.
fn eliminate(lhs: &mut [Vec<Rational>], rhs: &mut [Vec<Rational>]) -> Result<(), LinalgError> {
    let n = lhs.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !lhs[r][col].is_zero())
            .ok_or(LinalgError::Singular)?;
        lhs.swap(col, pivot);
        rhs.swap(col, pivot);

        let inv = lhs[col][col].recip();
        if !inv.is_one() {
            for v in lhs[col].iter_mut().chain(rhs[col].iter_mut()) {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }

        let (pivot_lhs, pivot_rhs) = (lhs[col].clone(), rhs[col].clone());
        for r in 0..n {
            if r == col || lhs[r][col].is_zero() {
                continue;
            }
            let factor = lhs[r][col].clone();
            for (v, p) in lhs[r].iter_mut().zip(&pivot_lhs) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            for (v, p) in rhs[r].iter_mut().zip(&pivot_rhs) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
    }
    Ok(())
}
