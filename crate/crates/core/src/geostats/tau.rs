//! Kendall's tau-b and a zero-inflated variant for sparse adoption series.

use crate::error::{Error, Result};

fn tied_pairs(sorted: &[f64]) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Counts inversions while merge-sorting `v` in place.
fn merge_count(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps =
        merge_count(&mut v[..mid], &mut buf[..mid]) + merge_count(&mut v[mid..], &mut buf[mid..]);
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// Tie-corrected Kendall's tau-b in `O(n log n)` (Knight's algorithm).
/// Returns 0 when either series is constant or shorter than 2.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    if n < 2 {
        return 0.0;
    }
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let n0 = (n as u64) * (n as u64 - 1) / 2;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let n1 = tied_pairs(&xs);
    let mut joint = 0u64;
    let mut run = 1u64;
    for w in pairs.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            joint += run * (run - 1) / 2;
            run = 1;
        }
    }
    joint += run * (run - 1) / 2;

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut buf = vec![0.0; n];
    let swaps = merge_count(&mut ys, &mut buf);
    let n2 = tied_pairs(&ys);

    let denom = ((n0 - n1) as f64 * (n0 - n2) as f64).sqrt();
    if denom == 0.0 {
        return 0.0;
    }
    // concordant − discordant = n0 − n1 − n2 + n3 − 2·swaps
    let s = n0 as i128 - n1 as i128 - n2 as i128 + joint as i128 - 2 * swaps as i128;
    s as f64 / denom
}

/// Zero-inflated Kendall's tau:
/// `τ̂ = p₁₁²·τ₁₁ + 2·(p₀₀·p₁₁ − p₀₁·p₁₀)`, where `p_ab` are the joint
/// frequencies of zero (0) and positive (1) values and `τ₁₁` is tau-b over
/// the jointly positive observations (0 when fewer than two).
pub fn zero_inflated_tau(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            actual: v.len(),
        });
    }
    if u.len() < 2 {
        return Err(Error::invalid(
            "zero-inflated tau needs at least two observations",
        ));
    }
    let n = u.len() as f64;
    let (mut c00, mut c01, mut c10) = (0usize, 0usize, 0usize);
    let mut pu = Vec::new();
    let mut pv = Vec::new();
    for (&a, &b) in u.iter().zip(v) {
        match (a > 0.0, b > 0.0) {
            (false, false) => c00 += 1,
            (false, true) => c01 += 1,
            (true, false) => c10 += 1,
            (true, true) => {
                pu.push(a);
                pv.push(b);
            }
        }
    }
    let p00 = c00 as f64 / n;
    let p01 = c01 as f64 / n;
    let p10 = c10 as f64 / n;
    let p11 = pu.len() as f64 / n;
    let tau11 = if pu.len() >= 2 {
        kendall_tau_b(&pu, &pv)
    } else {
        0.0
    };
    Ok(p11 * p11 * tau11 + 2.0 * (p00 * p11 - p01 * p10))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn perfect_and_reversed_order() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(kendall_tau_b(&x, &x), 1.0);
        assert_eq!(kendall_tau_b(&x, &[4.0, 3.0, 2.0, 1.0]), -1.0);
    }

    #[test]
    fn ties_use_tau_b_correction() {
        // scipy.stats.kendalltau([1,2,2,3],[1,3,2,3]) = 0.8
        assert_abs_diff_eq!(
            kendall_tau_b(&[1.0, 2.0, 2.0, 3.0], &[1.0, 3.0, 2.0, 3.0]),
            0.8,
            epsilon = 1e-12
        );
        assert_eq!(kendall_tau_b(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), 0.0);
    }

    #[test]
    fn no_zeros_is_plain_tau_b() {
        let u = [0.5, 1.2, 0.7, 3.0, 2.2];
        let v = [0.1, 0.9, 1.4, 2.0, 2.1];
        assert_abs_diff_eq!(
            zero_inflated_tau(&u, &v).unwrap(),
            kendall_tau_b(&u, &v),
            epsilon = 1e-15
        );
    }

    #[test]
    fn all_zero_side_gives_zero() {
        assert_eq!(
            zero_inflated_tau(&[0.0; 5], &[0.0, 1.0, 2.0, 0.0, 3.0]).unwrap(),
            0.0
        );
    }

    #[test]
    fn worked_example() {
        let u = [0.0, 0.0, 1.0, 2.0];
        assert_abs_diff_eq!(zero_inflated_tau(&u, &u).unwrap(), 0.75, epsilon = 1e-15);
    }

    #[test]
    fn length_mismatch_rejected() {
        assert!(zero_inflated_tau(&[1.0, 2.0], &[1.0]).is_err());
        assert!(zero_inflated_tau(&[1.0], &[1.0]).is_err());
    }
}
