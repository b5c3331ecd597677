use std::fmt;

use crate::field::{linalg, FieldError, MultiIndex, RatFunc, Scalar, Var};

use super::{OreError, OreOperator};

/// A `p × m` matrix of operators over `n` derivations.
///
/// Rows are equations and columns are unknowns: `apply(A, f)_i =
/// Σ_j A[i][j](f_j)`. Composition `B·A` is the matrix product with operator
/// composition, so a left syzygy `B` of `A` satisfies `B·A = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpMatrix<S: Scalar> {
    n: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<OreOperator<S>>>,
}

impl<S: Scalar> OpMatrix<S> {
    pub fn zeros(n: usize, rows: usize, cols: usize) -> Self {
        OpMatrix {
            n,
            rows,
            cols,
            entries: vec![vec![OreOperator::zero(n); cols]; rows],
        }
    }

    pub fn identity(n: usize, size: usize) -> Self {
        let mut m = Self::zeros(n, size, size);
        for i in 0..size {
            m.entries[i][i] = OreOperator::one(n);
        }
        m
    }

    /// Build from rows; `cols` is needed for the empty case.
    pub fn from_rows(n: usize, cols: usize, rows: Vec<Vec<OreOperator<S>>>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "ragged operator matrix");
            assert!(r.iter().all(|e| e.n() == n), "entries over a different n");
        }
        OpMatrix {
            n,
            rows: rows.len(),
            cols,
            entries: rows,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &OreOperator<S> {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: OreOperator<S>) {
        assert_eq!(p.n(), self.n);
        self.entries[i][j] = p;
    }

    pub fn row(&self, i: usize) -> &[OreOperator<S>] {
        &self.entries[i]
    }

    pub fn rows(&self) -> &[Vec<OreOperator<S>>] {
        &self.entries
    }

    pub fn into_rows(self) -> Vec<Vec<OreOperator<S>>> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(OreOperator::is_zero)
    }

    /// Max entry order; `None` for the zero matrix.
    pub fn order(&self) -> Option<u32> {
        self.entries
            .iter()
            .flatten()
            .filter_map(OreOperator::order)
            .max()
    }

    pub fn row_order(&self, i: usize) -> Option<u32> {
        self.entries[i].iter().filter_map(OreOperator::order).max()
    }

    pub fn is_constant_coeff(&self) -> bool {
        self.entries
            .iter()
            .flatten()
            .all(OreOperator::is_constant_coeff)
    }

    /// Matrix product `self · o` with operator composition.
    pub fn mul(&self, o: &Self) -> Result<Self, OreError> {
        if self.n != o.n || self.cols != o.rows {
            return Err(OreError::DimensionMismatch(format!(
                "({}x{}, n={}) · ({}x{}, n={})",
                self.rows, self.cols, self.n, o.rows, o.cols, o.n
            )));
        }
        let mut out = Self::zeros(self.n, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.entries[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o.entries[k][j];
                    if b.is_zero() {
                        continue;
                    }
                    let t = a.compose(b);
                    out.entries[i][j] = out.entries[i][j].add(&t);
                }
            }
        }
        Ok(out)
    }

    /// Row vector (1 × rows) times this matrix.
    pub fn left_apply_row(&self, row: &[OreOperator<S>]) -> Vec<OreOperator<S>> {
        let m = OpMatrix::from_rows(self.n, self.rows, vec![row.to_vec()]);
        m.mul(self)
            .expect("row width checked by caller")
            .entries
            .remove(0)
    }

    pub fn add(&self, o: &Self) -> Result<Self, OreError> {
        if self.n != o.n || self.rows != o.rows || self.cols != o.cols {
            return Err(OreError::DimensionMismatch("matrix sum shape".into()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[i][j] = self.entries[i][j].add(&o.entries[i][j]);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.map(|p| p.neg())
    }

    pub fn map(&self, f: impl Fn(&OreOperator<S>) -> OreOperator<S>) -> Self {
        OpMatrix {
            n: self.n,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(&f).collect())
                .collect(),
        }
    }

    /// Transpose of the entrywise adjoints.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.n, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j][i] = self.entries[i][j].adjoint();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.n, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j][i] = self.entries[i][j].clone();
            }
        }
        out
    }

    /// Symbolic application to a column of functions.
    pub fn apply(&self, f: &[RatFunc<S>]) -> Result<Vec<RatFunc<S>>, OreError> {
        if f.len() != self.cols {
            return Err(OreError::DimensionMismatch(format!(
                "{} functions for {} unknowns",
                f.len(),
                self.cols
            )));
        }
        Ok(self
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .zip(f)
                    .fold(RatFunc::zero(), |acc, (p, g)| acc.add(&p.apply(g)))
            })
            .collect())
    }

    /// Stack rows of `self` above rows of `o`.
    pub fn vstack(&self, o: &Self) -> Result<Self, OreError> {
        if self.n != o.n || self.cols != o.cols {
            return Err(OreError::DimensionMismatch("vstack shape".into()));
        }
        let mut rows = self.entries.clone();
        rows.extend(o.entries.iter().cloned());
        Ok(Self::from_rows(self.n, self.cols, rows))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_rows(
            self.n,
            self.cols,
            idx.iter().map(|&i| self.entries[i].clone()).collect(),
        )
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_rows(
            self.n,
            idx.len(),
            self.entries
                .iter()
                .map(|r| idx.iter().map(|&j| r[j].clone()).collect())
                .collect(),
        )
    }

    /// Multiply row `i` on the left by the scalar `s[i]` and column `j` on
    /// the right by `t[j]` (constant scalars commute with derivations).
    pub fn scale(&self, row: &[S], col: &[S]) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let k = row[i].clone() * col[j].clone();
                out.entries[i][j] = self.entries[i][j].scale_left(&RatFunc::constant(k));
            }
        }
        out
    }

    pub fn substitute(&self, map: &dyn Fn(&Var) -> Option<RatFunc<S>>) -> Result<Self, FieldError> {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[i][j] = self.entries[i][j].substitute(map)?;
            }
        }
        Ok(out)
    }

    /// Parameters occurring in any coefficient, sorted.
    pub fn params(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .entries
            .iter()
            .flatten()
            .flat_map(|p| p.terms().flat_map(|(_, a)| a.vars()).collect::<Vec<_>>())
            .filter_map(|v| match v {
                Var::P(p) => Some(p.to_string()),
                Var::X(_) => None,
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Rewrite in barred coordinates `x̄ = M x + c`.
    ///
    /// Since the Jacobian is constant, `d_i = Σ_j M[j][i] d̄_j` and the
    /// coefficients are composed with the inverse map.
    pub fn transform_affine(&self, m: &[Vec<S>], c: &[S]) -> Result<Self, OreError> {
        let n = self.n;
        if m.len() != n || m.iter().any(|r| r.len() != n) || c.len() != n {
            return Err(OreError::DimensionMismatch("affine map shape".into()));
        }
        let mk: Vec<Vec<RatFunc<S>>> = m
            .iter()
            .map(|r| r.iter().map(|v| RatFunc::constant(v.clone())).collect())
            .collect();
        let minv = linalg::inverse(&mk).ok_or(OreError::SingularMap)?;
        // x = M^{-1} (x̄ − c)
        let xs: Vec<RatFunc<S>> = (0..n)
            .map(|i| {
                (0..n).fold(RatFunc::zero(), |acc, j| {
                    let shifted = RatFunc::x(j).sub(&RatFunc::constant(c[j].clone()));
                    acc.add(&minv[i][j].mul(&shifted))
                })
            })
            .collect();
        let subst = |v: &Var| match v {
            Var::X(i) => Some(xs[*i as usize].clone()),
            Var::P(_) => None,
        };
        // d_i as an operator in barred derivations
        let di: Vec<OreOperator<S>> = (0..n)
            .map(|i| {
                OreOperator::from_terms(
                    n,
                    (0..n).map(|j| (MultiIndex::unit(n, j), RatFunc::constant(m[j][i].clone()))),
                )
            })
            .collect();
        let convert = |p: &OreOperator<S>| -> Result<OreOperator<S>, OreError> {
            let mut out = OreOperator::zero(n);
            for (mu, a) in p.terms() {
                let mut t = OreOperator::scalar(n, a.substitute(&subst)?);
                for (i, &e) in mu.exps().iter().enumerate() {
                    for _ in 0..e {
                        t = t.compose(&di[i]);
                    }
                }
                out = out.add(&t);
            }
            Ok(out)
        };
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[i][j] = convert(&self.entries[i][j])?;
            }
        }
        Ok(out)
    }

    /// Print row `i` with the given unknown and variable names.
    pub fn fmt_row(&self, i: usize, unknowns: &[String], name: &dyn Fn(&Var) -> String) -> String {
        super::print::format_row(&self.entries[i], unknowns, name)
    }

    pub fn default_unknowns(&self) -> Vec<String> {
        (1..=self.cols).map(|j| format!("u{j}")).collect()
    }
}

impl<S: Scalar> fmt::Display for OpMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = self.default_unknowns();
        for i in 0..self.rows {
            writeln!(f, "{}", self.fmt_row(i, &u, &|v| v.to_string()))?;
        }
        Ok(())
    }
}
