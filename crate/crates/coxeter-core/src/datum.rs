//! Coxeter matrices and generalized Cartan matrices.

use crate::linalg::Matrix;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatumError {
    #[error("index set is empty")]
    Empty,
    #[error("matrix is not {0}x{0}")]
    Shape(usize),
    #[error("m({0},{1}) must be 1 on the diagonal and at least 2 off it")]
    Diagonal(usize, usize),
    #[error("coxeter matrix is not symmetric at ({0},{1})")]
    Asymmetric(usize, usize),
    #[error("m({0},{1}) = {2} has no crystallographic realization")]
    Unsupported(usize, usize, u32),
    #[error("cartan entry ({0},{1}) violates a(i,i)=2, a(i,j)<=0, a(i,j)=0 iff a(j,i)=0")]
    Cartan(usize, usize),
    #[error("cartan product at ({0},{1}) does not match m = {2}")]
    Mismatch(usize, usize, String),
    #[error("duplicate generator label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown datum name `{0}`")]
    UnknownName(String),
}

/// `None` stands for `m = ∞`.
pub type Bond = Option<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CartanKind {
    Finite,
    Affine,
    Indefinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterDatum {
    labels: Vec<String>,
    coxeter: Vec<Vec<Bond>>,
    cartan: Vec<Vec<i64>>,
}

fn bond_for_product(p: i64) -> Bond {
    match p {
        0 => Some(2),
        1 => Some(3),
        2 => Some(4),
        3 => Some(6),
        _ => None,
    }
}

fn default_cartan_pair(m: Bond) -> Option<(i64, i64)> {
    match m {
        Some(2) => Some((0, 0)),
        Some(3) => Some((-1, -1)),
        Some(4) => Some((-1, -2)),
        Some(6) => Some((-1, -3)),
        None => Some((-2, -2)),
        _ => None,
    }
}

impl CoxeterDatum {
    /// Builds a datum from a Coxeter matrix and an optional GCM.
    /// Without a GCM one is derived: m = 4 and m = 6 put the long
    /// entry below the diagonal.
    pub fn new(
        labels: Vec<String>,
        coxeter: Vec<Vec<Bond>>,
        cartan: Option<Vec<Vec<i64>>>,
    ) -> Result<Self, DatumError> {
        let n = labels.len();
        if n == 0 {
            return Err(DatumError::Empty);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(DatumError::DuplicateLabel(l.clone()));
            }
        }
        if coxeter.len() != n || coxeter.iter().any(|r| r.len() != n) {
            return Err(DatumError::Shape(n));
        }
        for i in 0..n {
            for j in 0..n {
                let m = coxeter[i][j];
                if coxeter[j][i] != m {
                    return Err(DatumError::Asymmetric(i, j));
                }
                match (i == j, m) {
                    (true, Some(1)) => {}
                    (false, None) => {}
                    (false, Some(k)) if k >= 2 => {}
                    _ => return Err(DatumError::Diagonal(i, j)),
                }
                if i != j && default_cartan_pair(m).is_none() {
                    return Err(DatumError::Unsupported(i, j, m.unwrap_or(0)));
                }
            }
        }
        let cartan = match cartan {
            Some(a) => a,
            None => {
                let mut a = vec![vec![0i64; n]; n];
                for i in 0..n {
                    a[i][i] = 2;
                    for j in i + 1..n {
                        let (x, y) = default_cartan_pair(coxeter[i][j]).unwrap();
                        a[i][j] = x;
                        a[j][i] = y;
                    }
                }
                a
            }
        };
        if cartan.len() != n || cartan.iter().any(|r| r.len() != n) {
            return Err(DatumError::Shape(n));
        }
        for i in 0..n {
            if cartan[i][i] != 2 {
                return Err(DatumError::Cartan(i, i));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if cartan[i][j] > 0 || ((cartan[i][j] == 0) != (cartan[j][i] == 0)) {
                    return Err(DatumError::Cartan(i, j));
                }
                let m = bond_for_product(cartan[i][j] * cartan[j][i]);
                if m != coxeter[i][j] {
                    let shown = coxeter[i][j].map_or("∞".to_string(), |k| k.to_string());
                    return Err(DatumError::Mismatch(i, j, shown));
                }
            }
        }
        Ok(CoxeterDatum { labels, coxeter, cartan })
    }

    pub fn from_cartan(cartan: Vec<Vec<i64>>) -> Result<Self, DatumError> {
        let n = cartan.len();
        if cartan.iter().any(|r| r.len() != n) {
            return Err(DatumError::Shape(n));
        }
        let coxeter = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Some(1) } else { bond_for_product(cartan[i][j] * cartan[j][i]) })
                    .collect()
            })
            .collect();
        Self::new(default_labels(n), coxeter, Some(cartan))
    }

    /// Named data: `A<n>`, `B<n>`, `C<n>`, `D<n>`, `G2`, `F4`, `~A<n>`,
    /// `rank2:a,b` for `[[2,-a],[-b,2]]`, and products joined by `x`.
    pub fn named(name: &str) -> Result<Self, DatumError> {
        let parts: Vec<&str> = name.split('x').map(str::trim).collect();
        if parts.len() > 1 {
            let mut blocks = Vec::new();
            for p in &parts {
                blocks.push(Self::named(p)?.cartan);
            }
            return Self::from_cartan(block_diagonal(&blocks));
        }
        let unknown = || DatumError::UnknownName(name.to_string());
        if let Some(rest) = name.strip_prefix("rank2:") {
            let (a, b) = rest.split_once(',').ok_or_else(unknown)?;
            let a: i64 = a.trim().parse().map_err(|_| unknown())?;
            let b: i64 = b.trim().parse().map_err(|_| unknown())?;
            if a < 0 || b < 0 {
                return Err(unknown());
            }
            return Self::from_cartan(vec![vec![2, -a], vec![-b, 2]]);
        }
        let (affine, body) = match name.strip_prefix('~') {
            Some(b) => (true, b),
            None => (false, name),
        };
        let mut chars = body.chars();
        let family = chars.next().ok_or_else(unknown)?;
        let n: usize = chars.as_str().parse().map_err(|_| unknown())?;
        let a = if affine {
            match (family, n) {
                ('A', 1) => vec![vec![2, -2], vec![-2, 2]],
                ('A', n) if n >= 2 => {
                    let mut a = finite_cartan('A', n + 1).ok_or_else(unknown)?;
                    a[0][n] = -1;
                    a[n][0] = -1;
                    a
                }
                _ => return Err(unknown()),
            }
        } else {
            finite_cartan(family, n).ok_or_else(unknown)?
        };
        Self::from_cartan(a)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn m(&self, i: usize, j: usize) -> Bond {
        self.coxeter[i][j]
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.cartan[i][j]
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn coxeter_matrix(&self) -> &[Vec<Bond>] {
        &self.coxeter
    }

    pub fn cartan_matrix(&self) -> Matrix {
        Matrix::from_int_rows(&self.cartan)
    }

    pub fn sub_cartan(&self, j: &[usize]) -> Matrix {
        Matrix::from_int_rows(
            &j.iter().map(|&r| j.iter().map(|&c| self.cartan[r][c]).collect()).collect::<Vec<_>>(),
        )
    }

    /// Connected components of the Dynkin diagram restricted to `j`, each sorted.
    pub fn components_of(&self, j: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.rank()];
        let mut out = Vec::new();
        for &s in j {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut k = 0;
            while k < comp.len() {
                let u = comp[k];
                for &v in j {
                    if !seen[v] && self.cartan[u][v] != 0 {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.components_of(&(0..self.rank()).collect::<Vec<_>>())
    }

    /// Type of an indecomposable subdiagram, read off its principal minors.
    pub fn kind_of(&self, comp: &[usize]) -> CartanKind {
        let k = comp.len();
        let mut all_proper_positive = true;
        for mask in 1u64..(1u64 << k) {
            if mask == (1u64 << k) - 1 {
                continue;
            }
            let sub: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).map(|b| comp[b]).collect();
            if !self.sub_cartan(&sub).determinant().is_positive() {
                all_proper_positive = false;
                break;
            }
        }
        let det = self.sub_cartan(comp).determinant();
        match (all_proper_positive, det.is_positive(), det.is_zero()) {
            (true, true, _) => CartanKind::Finite,
            (true, _, true) => CartanKind::Affine,
            _ => CartanKind::Indefinite,
        }
    }

    /// Finite type iff every component is; affine iff every component is affine
    /// or finite with at least one affine; indefinite otherwise.
    pub fn kind(&self) -> CartanKind {
        let kinds: Vec<CartanKind> = self.components().iter().map(|c| self.kind_of(c)).collect();
        if kinds.contains(&CartanKind::Indefinite) {
            CartanKind::Indefinite
        } else if kinds.contains(&CartanKind::Affine) {
            CartanKind::Affine
        } else {
            CartanKind::Finite
        }
    }

    /// `W(J)` is finite iff every principal minor of `A_J` is positive.
    pub fn is_spherical(&self, j: &[usize]) -> bool {
        self.components_of(j).iter().all(|c| self.kind_of(c) == CartanKind::Finite)
    }

    /// Positive `d` with `a(i,j) / d_i` symmetric, normalized to 1 on the first
    /// generator of each component; `None` if `A` is not symmetrizable.
    pub fn symmetrizer(&self) -> Option<Vec<crate::rational::Q>> {
        use crate::rational::{int, one};
        let n = self.rank();
        let mut d: Vec<Option<crate::rational::Q>> = vec![None; n];
        for comp in self.components() {
            d[comp[0]] = Some(one());
            let mut stack = vec![comp[0]];
            while let Some(i) = stack.pop() {
                for j in 0..n {
                    if i == j || self.cartan[i][j] == 0 {
                        continue;
                    }
                    let dj = d[i].clone().unwrap() * int(self.cartan[j][i]) / int(self.cartan[i][j]);
                    match &d[j] {
                        Some(x) if *x != dj => return None,
                        Some(_) => {}
                        None => {
                            d[j] = Some(dj);
                            stack.push(j);
                        }
                    }
                }
            }
        }
        d.into_iter().collect()
    }

    /// The invariant form `(α_i | α_j) = a(i,j) / d_i` on root coefficients.
    pub fn root_form(&self, x: &[i64], y: &[i64]) -> Option<crate::rational::Q> {
        use crate::rational::int;
        let d = self.symmetrizer()?;
        let mut s = crate::rational::zero();
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                if x[i] != 0 && y[j] != 0 {
                    s += int(x[i] * y[j] * self.cartan[i][j]) / &d[i];
                }
            }
        }
        Some(s)
    }

    /// Whether the reflections in the given real roots generate a finite group:
    /// true iff the invariant form is positive definite on their span.
    /// `None` when `A` is not symmetrizable.
    pub fn reflection_subgroup_is_finite(&self, roots: &[Vec<i64>]) -> Option<bool> {
        let n = self.rank();
        let mut basis: Vec<Vec<i64>> = Vec::new();
        for r in roots {
            let mut trial = basis.clone();
            trial.push(r.clone());
            if Matrix::from_int_rows(&trial).rank() == trial.len() {
                basis = trial;
            }
            if basis.len() == n {
                break;
            }
        }
        self.symmetrizer()?;
        for k in 1..=basis.len() {
            let gram: Vec<Vec<crate::rational::Q>> = (0..k)
                .map(|a| (0..k).map(|b| self.root_form(&basis[a], &basis[b]).unwrap()).collect())
                .collect();
            if !Matrix::from_rows(gram).determinant().is_positive() {
                return Some(false);
            }
        }
        Some(true)
    }

    /// Primitive positive null vector of an affine component, indexed like `comp`.
    pub fn null_root(&self, comp: &[usize]) -> Option<Vec<i64>> {
        if self.kind_of(comp) != CartanKind::Affine {
            return None;
        }
        let ns = self.sub_cartan(comp).null_space();
        let v = ns.into_iter().next()?;
        let lcm = v.iter().fold(num_bigint::BigInt::from(1), |acc, q| {
            num_integer::Integer::lcm(&acc, q.denom())
        });
        let mut ints: Vec<num_bigint::BigInt> = v.iter().map(|q| (q * &lcm).to_integer()).collect();
        let g = ints.iter().fold(num_bigint::BigInt::from(0), |acc, x| num_integer::Integer::gcd(&acc, x));
        let neg = ints.iter().any(|x| x.is_negative());
        for x in ints.iter_mut() {
            *x /= &g;
            if neg {
                *x = -x.clone();
            }
        }
        ints.iter().map(|x| i64::try_from(x).ok()).collect()
    }

    /// Affine components with their null roots, as full-length coefficient vectors.
    pub fn null_roots(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for c in self.components() {
            if let Some(d) = self.null_root(&c) {
                let mut full = vec![0; self.rank()];
                for (k, &i) in c.iter().enumerate() {
                    full[i] = d[k];
                }
                out.push(full);
            }
        }
        out
    }
}

pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn block_diagonal(blocks: &[Vec<Vec<i64>>]) -> Vec<Vec<i64>> {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut a = vec![vec![0; n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                a[off + i][off + j] = x;
            }
        }
        off += b.len();
    }
    a
}

fn finite_cartan(family: char, n: usize) -> Option<Vec<Vec<i64>>> {
    if n == 0 {
        return None;
    }
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = 2;
        if i + 1 < n {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    match (family, n) {
        ('A', _) => {}
        ('B', n) if n >= 2 => a[n - 1][n - 2] = -2,
        ('C', n) if n >= 2 => a[n - 2][n - 1] = -2,
        ('D', n) if n >= 4 => {
            a[n - 2][n - 1] = 0;
            a[n - 1][n - 2] = 0;
            a[n - 3][n - 1] = -1;
            a[n - 1][n - 3] = -1;
        }
        ('G', 2) => a[1][0] = -3,
        ('F', 4) => a[2][1] = -2,
        _ => return None,
    }
    Some(a)
}
