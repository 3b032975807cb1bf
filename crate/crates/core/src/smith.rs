//! Smith normal form over a Euclidean integer type, and integer solvability
//! of linear systems with rational right-hand sides.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::Rational;

/// `left * input * right == diag(diagonal)` (padded with zeros), with `left`
/// and `right` unimodular and each diagonal entry dividing the next.
#[derive(Debug, Clone, PartialEq)]
pub struct SmithForm<I> {
    pub diagonal: Vec<I>,
    pub left: Vec<Vec<I>>,
    pub right: Vec<Vec<I>>,
}

impl<I> SmithForm<I> {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize
    where
        I: Zero,
    {
        self.diagonal.iter().take_while(|d| !d.is_zero()).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cancelled;

fn identity<I: Integer + Clone>(n: usize) -> Vec<Vec<I>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { I::one() } else { I::zero() })
                .collect()
        })
        .collect()
}

// row_dst -= q * row_src
fn row_axpy<I: Integer + Clone>(m: &mut [Vec<I>], dst: usize, src: usize, q: &I) {
    let (a, b) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        if !y.is_zero() {
            *x = x.clone() - q.clone() * y.clone();
        }
    }
}

fn col_axpy<I: Integer + Clone>(m: &mut [Vec<I>], dst: usize, src: usize, q: &I) {
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            row[dst] = row[dst].clone() - q.clone() * row[src].clone();
        }
    }
}

fn swap_cols<I>(m: &mut [Vec<I>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// Smith normal form of the `rows x cols` matrix `a`. `should_stop` is polled
/// once per pivot step; returning `true` aborts with [`Cancelled`].
pub fn smith_normal_form<I>(
    a: &[Vec<I>],
    cols: usize,
    mut should_stop: impl FnMut() -> bool,
) -> Result<SmithForm<I>, Cancelled>
where
    I: Integer + Signed + Clone,
{
    let rows = a.len();
    let mut b: Vec<Vec<I>> = a.to_vec();
    let mut left = identity::<I>(rows);
    let mut right = identity::<I>(cols);
    let steps = rows.min(cols);

    'pivots: for t in 0..steps {
        loop {
            if should_stop() {
                return Err(Cancelled);
            }
            // Smallest nonzero entry of the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if b[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| b[i][j].abs() < b[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'pivots;
            };
            b.swap(t, pi);
            left.swap(t, pi);
            swap_cols(&mut b, t, pj);
            swap_cols(&mut right, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if !b[i][t].is_zero() {
                    let q = b[i][t].div_floor(&b[t][t]);
                    row_axpy(&mut b, i, t, &q);
                    row_axpy(&mut left, i, t, &q);
                    clean &= b[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !b[t][j].is_zero() {
                    let q = b[t][j].div_floor(&b[t][t]);
                    col_axpy(&mut b, j, t, &q);
                    col_axpy(&mut right, j, t, &q);
                    clean &= b[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let pivot = b[t][t].clone();
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !b[i][j].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let minus_one = -I::one();
                    row_axpy(&mut b, t, i, &minus_one);
                    row_axpy(&mut left, t, i, &minus_one);
                }
                None => break,
            }
        }
        if b[t][t].is_negative() {
            for v in b[t].iter_mut() {
                *v = -v.clone();
            }
            for v in left[t].iter_mut() {
                *v = -v.clone();
            }
        }
    }

    let diagonal = (0..steps).map(|t| b[t][t].clone()).collect();
    Ok(SmithForm {
        diagonal,
        left,
        right,
    })
}

/// An integer vector `k` with `a k = c`, or `None` if none exists. `a` is an
/// integer matrix with `cols` columns; `c` may be rational (a non-integral
/// entry makes the system unsolvable over the integers).
pub fn solve_integer(
    a: &[Vec<BigInt>],
    cols: usize,
    c: &[Rational],
    should_stop: impl FnMut() -> bool,
) -> Result<Option<Vec<BigInt>>, Cancelled> {
    assert_eq!(a.len(), c.len());
    if c.iter().any(|v| !v.is_integer()) {
        return Ok(None);
    }
    let c: Vec<BigInt> = c.iter().map(|v| v.to_integer()).collect();
    let snf = smith_normal_form(a, cols, should_stop)?;
    let uc: Vec<BigInt> = snf
        .left
        .iter()
        .map(|row| {
            row.iter()
                .zip(&c)
                .fold(BigInt::zero(), |acc, (u, x)| acc + u * x)
        })
        .collect();
    let mut y = vec![BigInt::zero(); cols];
    for (i, rhs) in uc.iter().enumerate() {
        let d = snf.diagonal.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            if !rhs.is_zero() {
                return Ok(None);
            }
        } else {
            let (quot, rem) = rhs.div_rem(&d);
            if !rem.is_zero() {
                return Ok(None);
            }
            y[i] = quot;
        }
    }
    let k = snf
        .right
        .iter()
        .map(|row| {
            row.iter()
                .zip(&y)
                .fold(BigInt::zero(), |acc, (v, yi)| acc + v * yi)
        })
        .collect();
    Ok(Some(k))
}
