//! Small dense linear solves: fraction-free elimination over the rationals
//! and partial-pivoting Gaussian elimination in `f64`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

/// Solves `a x = b` exactly.
///
/// Each augmented row is first scaled to integers, then reduced by Bareiss'
/// fraction-free elimination so every intermediate stays an integer, and
/// the triangular system is back-substituted over the rationals.
pub fn solve_exact(a: &[Vec<Q>], b: &[Q]) -> Result<Vec<Q>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::Invariant("linear system has inconsistent dimensions".into()));
    }
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (row, rhs) in a.iter().zip(b) {
        let lcm = row
            .iter()
            .chain(std::iter::once(rhs))
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        m.push(
            row.iter()
                .chain(std::iter::once(rhs))
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect(),
        );
    }
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n)
            .find(|&i| !m[i][k].is_zero())
            .ok_or_else(|| Error::Invariant("singular linear system".into()))?;
        m.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let mut x = vec![Q::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Q::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= Q::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / Q::from_integer(m[i][i].clone());
    }
    Ok(x)
}

/// Solves `a x = b` in `f64` with partial pivoting and returns `x` together
/// with the relative residual `max|a x - b| / max|b|`.
pub fn solve_f64(a: &[Vec<f64>], b: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(r, &v)| {
            let mut row = r.clone();
            row.push(v);
            row
        })
        .collect();
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs()))
            .expect("nonempty range");
        if m[pivot][k] == 0.0 {
            return Err(Error::Invariant("singular linear system".into()));
        }
        m.swap(k, pivot);
        let (top, below) = m.split_at_mut(k + 1);
        let prow = &top[k];
        for row in below {
            let f = row[k] / prow[k];
            if f != 0.0 {
                for (x, p) in row[k..].iter_mut().zip(&prow[k..]) {
                    *x -= f * p;
                }
            }
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = m[i][n];
        for j in i + 1..n {
            acc -= m[i][j] * x[j];
        }
        x[i] = acc / m[i][i];
    }
    let bmax = b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let rmax = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| (row.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>() - bi).abs())
        .fold(0.0f64, f64::max);
    let residual = if bmax > 0.0 { rmax / bmax } else { rmax };
    Ok((x, residual))
}
