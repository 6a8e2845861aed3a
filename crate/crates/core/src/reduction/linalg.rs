//! Dense row reduction for small linear systems.

use crate::scalar::Scalar;

/// General solution of `A y = b`: one particular solution and a basis of the
/// kernel of `A`. `None` when the system is inconsistent.
pub(crate) struct Solution<S> {
    pub particular: Vec<S>,
    pub kernel: Vec<Vec<S>>,
}

pub(crate) fn solve<S: Scalar>(a: &[Vec<S>], b: &[S], cols: usize, tol: f64) -> Option<Solution<S>> {
    let rows = a.len();
    let mut m: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows)
            .filter(|&i| !m[i][c].is_negligible(tol))
            .max_by(|&i, &j| {
                m[i][c]
                    .to_f64()
                    .abs()
                    .partial_cmp(&m[j][c].to_f64().abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = S::one() / m[r][c].clone();
        for v in m[r].iter_mut() {
            *v *= inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let d = f.clone() * m[r][j].clone();
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }

    if m[r..].iter().any(|row| !row[cols].is_negligible(tol)) {
        return None;
    }

    let mut particular = vec![S::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = m[i][cols].clone();
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![S::zero(); cols];
            v[f] = S::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -m[i][f].clone();
            }
            v
        })
        .collect();
    Some(Solution { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    fn r(v: i64) -> Rational {
        rat(v, 1)
    }

    #[test]
    fn consistent_rank_deficient_system() {
        let a = vec![vec![r(1), r(2), r(3)], vec![r(2), r(4), r(6)]];
        let b = vec![r(1), r(2)];
        let s = solve(&a, &b, 3, 0.0).unwrap();
        assert_eq!(s.kernel.len(), 2);
        for k in &s.kernel {
            let dot: Rational = a[0].iter().zip(k).map(|(x, y)| x * y).sum();
            assert_eq!(dot, r(0));
        }
        let dot: Rational = a[0].iter().zip(&s.particular).map(|(x, y)| x * y).sum();
        assert_eq!(dot, r(1));
    }

    #[test]
    fn inconsistent_system() {
        let a = vec![vec![r(1), r(1)], vec![r(2), r(2)]];
        assert!(solve(&a, &[r(1), r(3)], 2, 0.0).is_none());
    }
}
