//! Scalar Newton iteration, tridiagonal direct solve and convergence-order
//! fitting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    /// Termination tolerance on the Newton step. The step is compared
    /// against `tol * max(1, |x|)` so that iterates of size O(1) stop at
    /// `tol` while larger iterates are not held below their own ulp.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            tol: 1e-15,
            max_iter: 50,
        }
    }
}

impl NewtonConfig {
    pub fn new(tol: f64, max_iter: usize) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument(format!("Newton tol must be > 0, got {tol}")));
        }
        if max_iter == 0 {
            return Err(Error::InvalidArgument("Newton max_iter must be > 0".into()));
        }
        Ok(Self { tol, max_iter })
    }
}

/// Outcome of a converged Newton solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonRoot {
    pub root: f64,
    pub iterations: usize,
}

/// Newton's method `x <- x - f(x)/f'(x)` on a scalar function.
///
/// `f` and `df` may fail (e.g. when an iterate leaves the domain of a
/// logarithm); such errors are propagated unchanged.
pub fn newton_scalar<F, D>(f: F, df: D, x0: f64, cfg: NewtonConfig) -> Result<NewtonRoot>
where
    F: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
{
    let mut x = x0;
    for it in 1..=cfg.max_iter {
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(NewtonRoot {
                root: x,
                iterations: it - 1,
            });
        }
        let dfx = df(x)?;
        if !(dfx.abs() >= 1e-300) {
            return Err(Error::NewtonZeroDerivative { last: x });
        }
        let step = fx / dfx;
        x -= step;
        if !x.is_finite() {
            return Err(Error::NewtonZeroDerivative { last: x });
        }
        if step.abs() <= cfg.tol * x.abs().max(1.0) {
            return Ok(NewtonRoot {
                root: x,
                iterations: it,
            });
        }
    }
    Err(Error::NewtonMaxIter {
        iterations: cfg.max_iter,
        last: x,
    })
}

/// Central finite-difference derivative with step `1e-7 * max(1, |x|)`.
pub fn central_difference<F>(f: F, x: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let h = 1e-7 * x.abs().max(1.0);
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

/// Solve a tridiagonal system by forward elimination and back substitution.
///
/// `lower[i]` multiplies `x[i-1]` in row `i` (so `lower[0]` is ignored) and
/// `upper[i]` multiplies `x[i+1]` (so `upper[n-1]` is ignored). All four
/// slices must have the same length.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if lower.len() != n || upper.len() != n || rhs.len() != n {
        return Err(Error::Dimension(format!(
            "tridiagonal lengths lower={}, diag={}, upper={}, rhs={}",
            lower.len(),
            n,
            upper.len(),
            rhs.len()
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot == 0.0 {
        return Err(Error::ZeroPivot { row: 0 });
    }
    c[0] = upper[0] / pivot;
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::ZeroPivot { row: i });
        }
        c[i] = if i + 1 < n { upper[i] / pivot } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

/// True when `|diag[i]| > |lower[i]| + |upper[i]|` for every row (ignoring
/// the unused corner entries).
pub fn strictly_diagonally_dominant(lower: &[f64], diag: &[f64], upper: &[f64]) -> Option<usize> {
    let n = diag.len();
    (0..n).find(|&i| {
        let off = if i > 0 { lower[i].abs() } else { 0.0 } + if i + 1 < n { upper[i].abs() } else { 0.0 };
        diag[i].abs() <= off
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n_elements: usize,
    pub h: f64,
    pub rel_linf_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    pub fitted_order: f64,
}

impl ConvergenceTable {
    /// Sorts rows by decreasing `h` and fits the order.
    pub fn from_rows(mut rows: Vec<ConvergenceRow>) -> Result<Self> {
        rows.sort_by(|a, b| b.h.total_cmp(&a.h));
        let fitted_order = estimate_order(&rows)?;
        Ok(Self { rows, fitted_order })
    }
}

/// Least-squares slope of `log(error)` against `log(h)`.
pub fn estimate_order(rows: &[ConvergenceRow]) -> Result<f64> {
    if rows.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "order fit needs at least 3 rows, got {}",
            rows.len()
        )));
    }
    if let Some(r) = rows.iter().find(|r| !(r.rel_linf_error > 0.0) || !(r.h > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "non-positive entry at n = {}: h = {}, error = {}",
            r.n_elements, r.h, r.rel_linf_error
        )));
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.h.ln(), r.rel_linf_error.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("order fit needs distinct h values".into()));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ok(v: f64) -> Result<f64> {
        Ok(v)
    }

    #[test]
    fn newton_sqrt2() {
        let r = newton_scalar(|x| ok(x * x - 2.0), |x| ok(2.0 * x), 1.0, NewtonConfig::default()).unwrap();
        assert!((r.root - 2f64.sqrt()).abs() <= 4e-16);
    }

    #[test]
    fn newton_linear_one_step() {
        let r = newton_scalar(|x| ok(x - 3.25), |_| ok(1.0), 0.0, NewtonConfig::default()).unwrap();
        assert_eq!(r.root, 3.25);
        // second iteration sees f == 0
        assert!(r.iterations <= 2);
    }

    #[test]
    fn newton_quadratic_convergence() {
        let root = 2f64.sqrt();
        let mut x = 1.0f64;
        let mut errs = vec![(x - root).abs()];
        for _ in 0..4 {
            x -= (x * x - 2.0) / (2.0 * x);
            errs.push((x - root).abs());
        }
        for w in errs.windows(2) {
            if w[1] > 1e-15 {
                assert!(w[1] <= 0.5 * w[0] * w[0], "{w:?}");
            }
        }
    }

    #[test]
    fn newton_triple_root_is_slow_but_not_failed_early() {
        // steps shrink by 2/3; reaching 1e-15 takes ~85 iterations
        let f = |x: f64| ok(x * x * x);
        let df = |x: f64| ok(3.0 * x * x);
        let expected_iters = ((1e-15f64 * 3.0).ln() / (2.0f64 / 3.0).ln()).ceil() as usize;
        let r = newton_scalar(f, df, 1.0, NewtonConfig::new(1e-15, 200).unwrap()).unwrap();
        assert!(r.root.abs() < 1e-14);
        assert!((r.iterations as i64 - expected_iters as i64).abs() <= 2, "{} vs {}", r.iterations, expected_iters);
        match newton_scalar(f, df, 1.0, NewtonConfig::default()) {
            Err(Error::NewtonMaxIter { iterations, .. }) => assert_eq!(iterations, 50),
            other => panic!("expected max-iter failure, got {other:?}"),
        }
    }

    #[test]
    fn newton_zero_derivative() {
        let r = newton_scalar(|x| ok(x * x + 1.0), |x| ok(2.0 * x), 0.0, NewtonConfig::default());
        assert!(matches!(r, Err(Error::NewtonZeroDerivative { .. })));
    }

    #[test]
    fn tridiagonal_identity_and_small() {
        let b = [1.0, -2.0, 3.0];
        assert_eq!(solve_tridiagonal(&[0.0; 3], &[1.0; 3], &[0.0; 3], &b).unwrap(), b.to_vec());
        // [2 1; 1 3] x = [3; 5] -> x = (4/5, 7/5)
        let x = solve_tridiagonal(&[0.0, 1.0], &[2.0, 3.0], &[1.0, 0.0], &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-15 && (x[1] - 1.4).abs() < 1e-15);
    }

    #[test]
    fn tridiagonal_zero_pivot() {
        assert!(matches!(
            solve_tridiagonal(&[0.0, 1.0], &[0.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]),
            Err(Error::ZeroPivot { row: 0 })
        ));
        assert!(solve_tridiagonal(&[0.0], &[1.0, 1.0], &[0.0, 0.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn tridiagonal_random_dominant_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 50;
        let lower: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let upper: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let diag: Vec<f64> = (0..n)
            .map(|i| lower[i].abs() + upper[i].abs() + rng.random_range(0.1..1.0))
            .collect();
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
        assert_eq!(strictly_diagonally_dominant(&lower, &diag, &upper), None);
        let x = solve_tridiagonal(&lower, &diag, &upper, &b).unwrap();
        let bnorm = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let res = (0..n).fold(0.0f64, |m, i| {
            let mut ax = diag[i] * x[i];
            if i > 0 {
                ax += lower[i] * x[i - 1];
            }
            if i + 1 < n {
                ax += upper[i] * x[i + 1];
            }
            m.max((ax - b[i]).abs())
        });
        assert!(res <= 1e-12 * bnorm, "{res}");
    }

    fn rows(p: f64) -> Vec<ConvergenceRow> {
        [10usize, 20, 40, 80]
            .iter()
            .map(|&n| {
                let h = 1.0 / n as f64;
                ConvergenceRow {
                    n_elements: n,
                    h,
                    rel_linf_error: 3.0 * h.powf(p),
                }
            })
            .collect()
    }

    #[test]
    fn order_of_exact_power_laws() {
        assert!((estimate_order(&rows(1.0)).unwrap() - 1.0).abs() < 1e-12);
        assert!((estimate_order(&rows(2.0)).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn order_fit_rejects_bad_rows() {
        assert!(estimate_order(&rows(1.0)[..2]).is_err());
        let mut r = rows(1.0);
        r[1].rel_linf_error = 0.0;
        assert!(estimate_order(&r).is_err());
    }

    #[test]
    fn table_sorted_by_h_descending() {
        let mut r = rows(1.0);
        r.reverse();
        let t = ConvergenceTable::from_rows(r).unwrap();
        assert!(t.rows.windows(2).all(|w| w[0].h > w[1].h));
    }
}
