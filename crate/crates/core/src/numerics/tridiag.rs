//! Lowest eigenvalues of a real symmetric tridiagonal matrix by Sturm
//! sequence counting and bisection.

/// Number of eigenvalues below `x`, from the signs of the leading principal
/// minors (computed via the LDL^T recurrence). Zero pivots count as
/// negative and are replaced by a tiny negative value so the recurrence can
/// continue; this is the usual convention and only matters when `x` hits an
/// eigenvalue of a leading submatrix exactly.
fn count_below(diag: &[f64], off_sq: &[f64], x: f64) -> usize {
    const PIVOT_FLOOR: f64 = 1.0e-150;
    let mut count = 0;
    let mut d = 1.0f64;
    for (i, &a) in diag.iter().enumerate() {
        d = if i == 0 { a - x } else { a - x - off_sq[i - 1] / d };
        if d <= 0.0 {
            count += 1;
        }
        if d.abs() < PIVOT_FLOOR {
            d = -PIVOT_FLOOR;
        }
    }
    count
}

/// The `count` smallest eigenvalues, ascending. `off` has length n-1.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], count: usize) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len(), n - 1, "off-diagonal length must be n-1");
    assert!(count <= n);
    let off_sq: Vec<f64> = off.iter().map(|b| b * b).collect();

    // Gershgorin enclosure.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 }
            + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }

    let mut eigs = Vec::with_capacity(count);
    for j in 0..count {
        let (mut a, mut b) = (lo, hi);
        // lambda_j is the infimum of { x : count_below(x) >= j+1 }.
        for _ in 0..120 {
            let mid = 0.5 * (a + b);
            if count_below(diag, &off_sq, mid) >= j + 1 {
                b = mid;
            } else {
                a = mid;
            }
            if b - a <= f64::EPSILON * b.abs().max(a.abs()).max(1.0) {
                break;
            }
        }
        eigs.push(0.5 * (a + b));
    }
    eigs
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn discrete_laplacian_spectrum() {
        // -u'' on a grid: eigenvalues 2 - 2 cos(k pi / (n+1)).
        let n = 500;
        let diag = vec![2.0; n];
        let off = vec![-1.0; n - 1];
        let eigs = lowest_eigenvalues(&diag, &off, 4);
        for (j, &e) in eigs.iter().enumerate() {
            let expected = 2.0 - 2.0 * ((j + 1) as f64 * PI / (n as f64 + 1.0)).cos();
            assert!((e - expected).abs() < 1e-12, "lambda_{j}: {e} vs {expected}");
        }
    }

    #[test]
    fn matches_dense_2x2() {
        let diag = [1.0, 3.0];
        let off = [0.5];
        let eigs = lowest_eigenvalues(&diag, &off, 2);
        // Roots of (1-l)(3-l) - 0.25.
        let disc = (1.0f64 + 0.25).sqrt();
        assert!((eigs[0] - (2.0 - disc)).abs() < 1e-13);
        assert!((eigs[1] - (2.0 + disc)).abs() < 1e-13);
    }
}
