//! Small dense vector helpers shared by the geometric kernels.

/// Euclidean dot product.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Squared Euclidean distance.
#[inline]
pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Euclidean distance.
#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist2(a, b).sqrt()
}

/// Euclidean norm.
#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `a - b` as a new vector.
#[inline]
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a + b` as a new vector.
#[inline]
pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `s * a` as a new vector.
#[inline]
pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `acc += s * a` in place.
#[inline]
pub fn axpy(acc: &mut [f64], s: f64, a: &[f64]) {
    for (u, v) in acc.iter_mut().zip(a) {
        *u += s * v;
    }
}

/// Solves the dense square system `m x = rhs` by Gaussian elimination with
/// partial pivoting. Returns `None` when a pivot falls below `pivot_tol`
/// relative to the largest entry of the matrix.
pub fn solve(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>, pivot_tol: f64) -> Option<Vec<f64>> {
    let n = rhs.len();
    debug_assert!(m.len() == n && m.iter().all(|r| r.len() == n));
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |a, &x| a.max(x.abs()))
        .max(1e-300);
    for col in 0..n {
        let (pivot_row, pivot_val) = (col..n)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if pivot_val <= pivot_tol * scale {
            return None;
        }
        m.swap(col, pivot_row);
        rhs.swap(col, pivot_row);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for c in row + 1..n {
            acc -= m[row][c] * x[c];
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_recovers_known_solution() {
        let m = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = solve(m, vec![5.0, 10.0], 1e-14).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn solve_rejects_singular() {
        let m = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve(m, vec![1.0, 2.0], 1e-12).is_none());
    }
}
