//! Exact computation of the bivariate permanent polynomial
//! `P(G; x, λ) = per(x·I + λ·A + Ā)`.
//!
//! The main route is Ryser inclusion–exclusion over column subsets,
//!
//! ```text
//! per(M) = (-1)^n · Σ_{S ⊆ [n]} (-1)^{|S|} · Π_i ( Σ_{j ∈ S} M[i][j] )
//! ```
//!
//! where row `i`'s sum over the columns of `S` is the linear factor
//! `x·[i ∈ S] + a_i·λ + b_i`, with `a_i = |N(i) ∩ S|` and `b_i` counting the
//! non-neighbours of `i` inside `S`. Subsets are walked in binary-reflected
//! Gray-code order so each step toggles a single column and refreshes all
//! row counters in O(n) from that column's adjacency word. Each subset's
//! n-factor product is expanded with nonnegative coefficients and added or
//! subtracted whole, which keeps every intermediate bounded by the final
//! coefficient mass of `n!`.
//!
//! Two independent cross-checks ship alongside: a naive sum over all `n!`
//! permutations (usable up to n = 9) and a scalar integer permanent for
//! evaluation-homomorphism tests.

use crate::bipoly::{BiPoly, PolyError};
use crate::graph::Graph;
use thiserror::Error;

/// Order cap for the polynomial engine; n! must fit in a coefficient.
pub const MAX_ENGINE_ORDER: usize = 20;
/// Order cap for the naive permutation-expansion oracle (9! permutations).
pub const MAX_NAIVE_ORDER: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("graph order {order} exceeds the engine limit {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("matrix is not square")]
    NonSquareMatrix,
    #[error("permanent overflowed 128 bits")]
    Overflow,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Incrementally maintained row sums of `x·I + λ·A + Ā` restricted to a
/// column subset `S`: for each row, the λ-multiplicity, the constant
/// multiplicity, and whether the diagonal `x` is present.
struct RowSumState {
    subset: u64,
    lambda: Vec<u32>,
    ones: Vec<u32>,
}

impl RowSumState {
    fn new(order: usize) -> Self {
        RowSumState {
            subset: 0,
            lambda: vec![0; order],
            ones: vec![0; order],
        }
    }

    /// Toggles column `col` in or out of `S`; `col_adj` is that column's
    /// adjacency word.
    fn toggle(&mut self, col: usize, col_adj: u64) {
        let entering = self.subset >> col & 1 == 0;
        self.subset ^= 1 << col;
        for i in 0..self.lambda.len() {
            if i == col {
                continue;
            }
            let slot = if col_adj >> i & 1 == 1 {
                &mut self.lambda[i]
            } else {
                &mut self.ones[i]
            };
            if entering {
                *slot += 1;
            } else {
                *slot -= 1;
            }
        }
    }

    fn len(&self) -> u32 {
        self.subset.count_ones()
    }

    fn has_x(&self, row: usize) -> bool {
        self.subset >> row & 1 == 1
    }

    /// Recomputes a row's counters from scratch; test oracle for `toggle`.
    #[cfg(test)]
    fn recompute(&self, g: &Graph, row: usize) -> (u32, u32) {
        let a = (g.row(row) & self.subset).count_ones();
        let b = (self.subset & !g.row(row) & !(1 << row)).count_ones();
        (a, b)
    }
}

/// Bivariate permanent polynomial of `g` by Ryser inclusion–exclusion.
pub fn bivariate_permanent(g: &Graph) -> Result<BiPoly, EngineError> {
    let n = g.order();
    if n > MAX_ENGINE_ORDER {
        return Err(EngineError::OrderTooLarge {
            order: n,
            max: MAX_ENGINE_ORDER,
        });
    }
    if n == 0 {
        // per of the 0×0 matrix is the empty sum over the one empty
        // permutation.
        return Ok(BiPoly::one(0)?);
    }

    let mut acc = BiPoly::zero(n)?;
    let mut product = BiPoly::zero(n)?;
    let mut state = RowSumState::new(n);

    for k in 1u64..1 << n {
        let col = k.trailing_zeros() as usize;
        state.toggle(col, g.row(col));

        product.reset_to_one();
        let mut deg = 0;
        for i in 0..n {
            let has_x = state.has_x(i);
            let a = state.lambda[i] as i64;
            let b = state.ones[i] as i64;
            product.mul_linear_factor_in_place(has_x, a, b, deg)?;
            deg += (has_x || a != 0) as usize;
        }

        let negate = (n as u32 - state.len()) % 2 == 1;
        acc.accumulate(&product, negate)?;
    }
    Ok(acc)
}

/// Bivariate permanent polynomial by direct summation over all `n!`
/// permutations; the independent oracle for [`bivariate_permanent`].
///
/// A permutation with `f` fixed points, `e` of whose non-fixed positions
/// `(i, σ(i))` are edges of `g`, contributes the monomial `x^f λ^e`.
pub fn bivariate_permanent_naive(g: &Graph) -> Result<BiPoly, EngineError> {
    let n = g.order();
    if n > MAX_NAIVE_ORDER {
        return Err(EngineError::OrderTooLarge {
            order: n,
            max: MAX_NAIVE_ORDER,
        });
    }
    let mut acc = BiPoly::zero(n)?;
    for_each_permutation(n, |perm| {
        let mut fixed = 0;
        let mut edges = 0;
        for (i, &p) in perm.iter().enumerate() {
            if p == i {
                fixed += 1;
            } else if g.has_edge(i, p) {
                edges += 1;
            }
        }
        let c = acc.coeff(fixed, edges);
        acc.set_coeff(fixed, edges, c + 1);
    });
    Ok(acc)
}

/// Permanent of a square integer matrix, Ryser with Gray-code row sums over
/// checked 128-bit arithmetic.
pub fn integer_permanent(rows: &[Vec<i64>]) -> Result<i128, EngineError> {
    let n = rows.len();
    if n > MAX_ENGINE_ORDER {
        return Err(EngineError::OrderTooLarge {
            order: n,
            max: MAX_ENGINE_ORDER,
        });
    }
    if rows.iter().any(|r| r.len() != n) {
        return Err(EngineError::NonSquareMatrix);
    }
    if n == 0 {
        return Ok(1);
    }

    let mut total = 0i128;
    let mut sums = vec![0i128; n];
    let mut subset = 0u64;
    for k in 1u64..1 << n {
        let col = k.trailing_zeros() as usize;
        let entering = subset >> col & 1 == 0;
        subset ^= 1 << col;
        for (i, s) in sums.iter_mut().enumerate() {
            let v = rows[i][col] as i128;
            *s = if entering {
                s.checked_add(v)
            } else {
                s.checked_sub(v)
            }
            .ok_or(EngineError::Overflow)?;
        }

        let mut prod = 1i128;
        for &s in &sums {
            prod = prod.checked_mul(s).ok_or(EngineError::Overflow)?;
        }
        if (n as u32 - subset.count_ones()) % 2 == 1 {
            prod = prod.checked_neg().ok_or(EngineError::Overflow)?;
        }
        total = total.checked_add(prod).ok_or(EngineError::Overflow)?;
    }
    Ok(total)
}

/// Calls `visit` with every permutation of `0..n` (Heap's algorithm).
fn for_each_permutation<F: FnMut(&[usize])>(n: usize, mut visit: F) {
    let mut perm: Vec<usize> = (0..n).collect();
    visit(&perm);
    let mut counters = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            visit(&perm);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}
