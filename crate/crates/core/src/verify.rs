//! Verification suites behind `shadowlab verify`. Each produces a
//! line-oriented `key: value` report ending in `PASS` or `FAIL`.

use std::fmt::Write as _;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::km_cube::{
    check_lemma_main, edge_delta, edge_direction_y, km_start_code, km_vertex, lambda_u,
    objective_c, objective_d, objective_e_u, parity_p, q_ell, KmError, KmParams, VertexCode,
};
use crate::linalg::{dot_unchecked, format_rational, rat, sub, Rational};
use crate::parametric::{
    check_path, gass_saaty_path, verify_path_against_oracle, Lambda, SimplexError,
};
use crate::polytope::{make_klee_minty, BoxBounds};
use crate::shadow::{box_shadow_report, shadow_of_vertices, ProjectionPair, ShadowError};

/// Largest `d` at which the parity identity is checked exhaustively.
pub const PARITY_MAX_DIM: usize = 8;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Km(#[from] KmError),
    #[error(transparent)]
    Shadow(#[from] ShadowError),
    #[error(transparent)]
    Simplex(#[from] SimplexError),
}

/// Ordered `key: value` lines with an overall verdict.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    entries: Vec<(String, String)>,
    failed: bool,
}

impl Report {
    pub fn new(suite: &str) -> Self {
        let mut r = Report::default();
        r.push("suite", suite);
        r
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    /// Record a named check; any failing check fails the report.
    pub fn check(&mut self, key: &str, ok: bool) {
        self.push(key, if ok { "pass" } else { "fail" });
        self.failed |= !ok;
    }

    pub fn passed(&self) -> bool {
        !self.failed
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k}: {v}");
        }
        out.push_str(if self.passed() { "PASS\n" } else { "FAIL\n" });
        out
    }
}

/// All `2^d` vertices `x(u)`, codes in lexicographic order.
pub fn km_vertices(p: &KmParams) -> Result<Vec<(VertexCode, Vec<Rational>)>, KmError> {
    VertexCode::all(p.dim())
        .map(|u| km_vertex(&u, p).map(|x| (u, x)))
        .collect()
}

/// Hull of the projected Klee-Minty vertices under `c` and `(0, ..., 0, 1)`,
/// and a per-vertex check that `e(u)` is uniquely maximized at `x(u)`.
pub fn km_shadow(p: &KmParams) -> Result<Report, VerifyError> {
    let d = p.dim();
    let mut r = Report::new("km-shadow");
    r.push("dim", d);
    r.push("eps", format_rational(p.eps()));
    let pp = ProjectionPair::new(objective_c(p), objective_d(p))?;
    let verts = km_vertices(p)?;
    let points: Vec<Vec<Rational>> = verts.iter().map(|(_, x)| x.clone()).collect();
    let shadow = shadow_of_vertices(&pp, &points)?;
    r.push("vertices", points.len());
    r.push("hull_vertices", shadow.len());
    r.push("expected", 1u64 << d);
    r.check("hull_size", shadow.len() == 1 << d);
    r.check("strictly_convex", shadow.polygon.is_strictly_convex());

    let unique: Vec<bool> = verts
        .par_iter()
        .map(|(u, x)| {
            let e = objective_e_u(u, p)?;
            let best = dot_unchecked(&e, x);
            Ok(points.iter().all(|y| y == x || dot_unchecked(&e, y) < best))
        })
        .collect::<Result<_, KmError>>()?;
    let certified = unique.iter().filter(|&&b| b).count();
    r.push("unique_maximizers", certified);
    r.check("all_unique_maximizers", certified == points.len());
    Ok(r)
}

/// Strict negativity of `e(u)` along every edge, the edge-direction
/// factorization, and the parity cancellation identity.
pub fn km_lemmas(p: &KmParams) -> Result<Report, VerifyError> {
    let d = p.dim();
    let mut r = Report::new("km-lemmas");
    r.push("dim", d);
    r.push("eps", format_rational(p.eps()));

    let codes: Vec<VertexCode> = VertexCode::all(d).collect();
    let per_code: Vec<(usize, usize, usize)> = codes
        .par_iter()
        .map(|u| {
            let report = check_lemma_main(u, p)?;
            let lemma_fail = report.values.iter().filter(|v| !v.is_negative()).count();
            let x = km_vertex(u, p)?;
            let mut edge_fail = 0;
            let mut q_fail = 0;
            for ell in 1..=d {
                let y = edge_direction_y(u, ell, p)?;
                let q = q_ell(u, ell, p)?;
                let direct = sub(&km_vertex(&u.flipped(ell), p)?, &x);
                let factored: Vec<Rational> = y.iter().map(|v| v * &q).collect();
                if factored != direct || edge_delta(u, ell, p)? != direct {
                    edge_fail += 1;
                }
                // sign(q) = 1 - 2 u_ell and |q| >= 1 - 2 eps
                let floor = rat(1, 1) - rat(2, 1) * p.eps();
                let sign_ok = q.is_positive() != u.bit(ell);
                if !sign_ok || q.abs() < floor {
                    q_fail += 1;
                }
            }
            Ok((lemma_fail, edge_fail, q_fail))
        })
        .collect::<Result<_, KmError>>()?;
    let sum = |f: fn(&(usize, usize, usize)) -> usize| per_code.iter().map(f).sum::<usize>();
    let checks = d * codes.len();
    r.push("lemma_checks", checks);
    r.push("lemma_failures", sum(|t| t.0));
    r.check("lemma_strictly_negative", sum(|t| t.0) == 0);
    r.push("edge_checks", checks);
    r.push("edge_failures", sum(|t| t.1));
    r.check("edge_factorization", sum(|t| t.1) == 0);
    r.push("q_failures", sum(|t| t.2));
    r.check("q_sign_and_bound", sum(|t| t.2) == 0);

    if d <= PARITY_MAX_DIM {
        let (checked, failures) = parity_identity(&codes, d)?;
        r.push("parity_checks", checked);
        r.push("parity_failures", failures);
        r.check("parity_identity", failures == 0);
    } else {
        r.push("parity_checks", "skipped");
    }

    let lambdas: std::collections::BTreeSet<Rational> = codes
        .iter()
        .map(|u| lambda_u(u, p))
        .collect::<Result<_, _>>()?;
    r.check("lambda_distinct", lambdas.len() == codes.len());
    Ok(r)
}

/// `p_{j+1}^d(u) p_{ell+1}^d(u) = p_{ell+1}^j(u)` for all `u`, `ell <= j <= d`.
pub fn parity_identity(codes: &[VertexCode], d: usize) -> Result<(usize, usize), KmError> {
    let mut checked = 0;
    let mut failures = 0;
    for u in codes {
        for ell in 1..=d {
            for j in ell..=d {
                let lhs = parity_p(u, j + 1, d)? * parity_p(u, ell + 1, d)?;
                // p_{ell+1}^j with j = d handled by the empty-product rule.
                let rhs = parity_p(u, ell + 1, j)?;
                checked += 1;
                if lhs != rhs {
                    failures += 1;
                }
            }
        }
    }
    Ok((checked, failures))
}

/// Random rational `num/den` with `num` in `lo..=hi`, `den` in `1..=max_den`.
fn random_rational(rng: &mut impl Rng, lo: i64, hi: i64, max_den: i64) -> Rational {
    rat(rng.gen_range(lo..=hi), rng.gen_range(1..=max_den))
}

/// Per-trial generator derived from the master seed.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Random box with small rational bounds and a random independent
/// projection pair (coordinates may vanish in both vectors).
pub fn random_box_instance(rng: &mut impl Rng, d: usize) -> (BoxBounds, ProjectionPair) {
    let lowers: Vec<Rational> = (0..d).map(|_| random_rational(rng, -10, 10, 4)).collect();
    let uppers: Vec<Rational> = lowers
        .iter()
        .map(|l| l + random_rational(rng, 1, 10, 4))
        .collect();
    let bounds = BoxBounds::new(lowers, uppers).expect("widths are positive");
    loop {
        let c: Vec<Rational> = (0..d).map(|_| random_rational(rng, -6, 6, 5)).collect();
        let dv: Vec<Rational> = (0..d).map(|_| random_rational(rng, -6, 6, 5)).collect();
        if let Ok(pp) = ProjectionPair::new(c, dv) {
            return (bounds, pp);
        }
    }
}

/// Hull size, sign-pattern count and pattern coverage over random boxes.
pub fn box_bound(d: usize, trials: usize, seed: u64) -> Result<Report, VerifyError> {
    let mut r = Report::new("box-bound");
    r.push("dim", d);
    r.push("trials", trials);
    r.push("seed", seed);
    let reports = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let (bounds, pp) = random_box_instance(&mut rng, d);
            box_shadow_report(&bounds, &pp)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let max_hull = reports.iter().map(|b| b.hull_size).max().unwrap_or(0);
    let max_patterns = reports.iter().map(|b| b.pattern_count).max().unwrap_or(0);
    let uncovered = reports.iter().filter(|b| !b.hull_covered).count();
    let off_hull = reports.iter().filter(|b| !b.patterns_on_hull).count();
    let reduced = reports.iter().filter(|b| !b.dropped.is_empty()).count();
    r.push("bound", 2 * d);
    r.push("max_hull_size", max_hull);
    r.push("max_sign_patterns", max_patterns);
    r.push("trials_with_dropped_coordinates", reduced);
    r.check("hull_within_bound", max_hull <= 2 * d);
    r.check("patterns_within_bound", max_patterns <= 2 * d);
    r.push("uncovered_hull_vertices", uncovered);
    r.check("hull_preimages_in_pattern_corners", uncovered == 0);
    r.check("pattern_corners_on_hull", off_hull == 0);
    Ok(r)
}

/// Gass-Saaty sweep on the Klee-Minty cube with the shadow objectives,
/// cross-checked against brute-force maximization when `d` is small enough
/// for vertex enumeration.
pub fn km_path(p: &KmParams, oracle: bool, extra_samples: usize) -> Result<Report, VerifyError> {
    let d = p.dim();
    let mut r = Report::new("path-oracle");
    r.push("dim", d);
    r.push("eps", format_rational(p.eps()));
    let poly = make_klee_minty(d, p.eps()).map_err(KmError::from)?;
    let (c, dv) = (objective_c(p), objective_d(p));
    let start = km_start_code(p)?;
    r.push("start_code", &start);
    let path = gass_saaty_path(&poly, &c, &dv, &start.basis())?;
    let checks = check_path(&path, &c, &dv);
    r.push("path_vertices", path.len());
    r.push("finite_breakpoints", checks.breakpoints);
    r.check("vertex_count", path.len() == 1 << d);
    r.check("breakpoints_increasing", checks.strictly_increasing);
    r.check("single_index_pivots", checks.single_pivots);
    r.check("distinct_vertices", checks.distinct_vertices);
    r.check("objective_continuity", checks.continuous);
    r.check("convex_value_function", checks.convex);
    r.check("gray_code", checks.gray == Some(true));

    let mut interior = true;
    for (k, step) in path.steps.iter().enumerate() {
        let code = step.code.as_ref().expect("Klee-Minty path carries codes");
        let lambda = Lambda::Finite(lambda_u(code, p)?);
        let (lo, hi) = path.interval(k);
        interior &= lo < lambda && lambda < hi;
    }
    r.check("lambda_u_interior", interior);

    if oracle {
        let report = verify_path_against_oracle(&poly, &path, &c, &dv, extra_samples)?;
        r.push("oracle_samples", report.checked);
        r.push("oracle_mismatches", report.mismatches.len());
        r.check("oracle_agreement", report.passes());
    } else {
        r.push("oracle_samples", "skipped");
    }
    Ok(r)
}
