//! Realizations: simple roots as linear forms and simple coroots as vectors.

use crate::datum::CoxeterDatum;
use crate::linalg::{dot, Matrix};
use crate::rational::{int, Q};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizationError {
    #[error("expected {expected} vectors, got {got}")]
    Count { expected: usize, got: usize },
    #[error("vector {0} does not have dimension {1}")]
    Dimension(usize, usize),
    #[error("alpha_{j}(coroot_{i}) must equal a({i},{j})")]
    Pairing { i: usize, j: usize },
    #[error("simple roots are linearly dependent")]
    DependentRoots,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    datum: CoxeterDatum,
    dim: usize,
    roots: Vec<Vec<Q>>,
    coroots: Vec<Vec<Q>>,
    reflections: Vec<Matrix>,
}

impl Realization {
    /// Minimal realization of dimension `2|I| - rank(A)`: the simple roots are the
    /// first `|I|` coordinate forms, and coroot `i` starts with row `i` of `A`.
    pub fn new(datum: CoxeterDatum) -> Self {
        let n = datum.rank();
        let a = datum.cartan_matrix();
        let r = a.rank();
        let dim = 2 * n - r;
        let mut extra: Vec<usize> = Vec::new();
        let mut current = a.clone();
        for k in 0..n {
            if extra.len() == n - r {
                break;
            }
            let mut rows = current.to_rows();
            for (i, row) in rows.iter_mut().enumerate() {
                row.push(if i == k { Q::one() } else { Q::zero() });
            }
            let candidate = Matrix::from_rows(rows);
            if candidate.rank() > current.rank() {
                current = candidate;
                extra.push(k);
            }
        }
        let roots = (0..n)
            .map(|i| (0..dim).map(|c| if c == i { Q::one() } else { Q::zero() }).collect())
            .collect();
        let coroots = (0..n)
            .map(|i| {
                let mut v: Vec<Q> = (0..n).map(|j| int(datum.a(i, j))).collect();
                v.extend(extra.iter().map(|&k| if k == i { Q::one() } else { Q::zero() }));
                v
            })
            .collect();
        Self::assemble(datum, dim, roots, coroots)
    }

    /// A user-supplied realization, checked against the datum.
    pub fn custom(datum: CoxeterDatum, roots: Vec<Vec<Q>>, coroots: Vec<Vec<Q>>) -> Result<Self, RealizationError> {
        let n = datum.rank();
        for v in [&roots, &coroots] {
            if v.len() != n {
                return Err(RealizationError::Count { expected: n, got: v.len() });
            }
        }
        let dim = roots[0].len();
        for (k, v) in roots.iter().chain(coroots.iter()).enumerate() {
            if v.len() != dim {
                return Err(RealizationError::Dimension(k % n, dim));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if dot(&roots[j], &coroots[i]) != int(datum.a(i, j)) {
                    return Err(RealizationError::Pairing { i, j });
                }
            }
        }
        if Matrix::from_rows(roots.clone()).rank() < n {
            return Err(RealizationError::DependentRoots);
        }
        Ok(Self::assemble(datum, dim, roots, coroots))
    }

    fn assemble(datum: CoxeterDatum, dim: usize, roots: Vec<Vec<Q>>, coroots: Vec<Vec<Q>>) -> Self {
        let reflections = (0..datum.rank())
            .map(|i| {
                let mut m = Matrix::identity(dim);
                for r in 0..dim {
                    for c in 0..dim {
                        let v = m.get(r, c) - &coroots[i][r] * &roots[i][c];
                        m.set(r, c, v);
                    }
                }
                m
            })
            .collect();
        Realization { datum, dim, roots, coroots, reflections }
    }

    pub fn datum(&self) -> &CoxeterDatum {
        &self.datum
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn root(&self, i: usize) -> &[Q] {
        &self.roots[i]
    }

    pub fn coroot(&self, i: usize) -> &[Q] {
        &self.coroots[i]
    }

    pub fn reflection_matrix(&self, i: usize) -> &Matrix {
        &self.reflections[i]
    }

    pub fn eval_simple(&self, i: usize, v: &[Q]) -> Q {
        dot(&self.roots[i], v)
    }

    /// `r_i(v) = v - α_i(v) α_i∨`.
    pub fn reflect(&self, i: usize, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        let c = self.eval_simple(i, v);
        v.iter().zip(&self.coroots[i]).map(|(x, y)| x - &c * y).collect()
    }

    /// The linear form `Σ c_i α_i`.
    pub fn root_form(&self, coeffs: &[i64]) -> Vec<Q> {
        let mut f = vec![Q::zero(); self.dim];
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                let c = int(c);
                for (x, y) in f.iter_mut().zip(&self.roots[i]) {
                    *x += &c * y;
                }
            }
        }
        f
    }

    pub fn eval_root(&self, coeffs: &[i64], v: &[Q]) -> Q {
        dot(&self.root_form(coeffs), v)
    }

    /// The vector `Σ c_i α_i∨`.
    pub fn coroot_combination(&self, coeffs: &[Q]) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim];
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                for (x, y) in v.iter_mut().zip(&self.coroots[i]) {
                    *x += c * y;
                }
            }
        }
        v
    }

    /// Some `u` with `α_i(u) = values[i]` for all `i`.
    pub fn vector_with_values(&self, values: &[Q]) -> Vec<Q> {
        Matrix::from_rows(self.roots.clone())
            .solve(values)
            .expect("simple roots are independent")
    }

    /// Coefficients of `v`'s image in `V / V_0` seen through the simple roots.
    pub fn simple_values(&self, v: &[Q]) -> Vec<Q> {
        self.roots.iter().map(|a| dot(a, v)).collect()
    }
}
