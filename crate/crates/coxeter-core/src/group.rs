//! Weyl group elements, reduced words and the Bruhat order.

use crate::linalg::Matrix;
use crate::rational::{int, Q};
use crate::realization::Realization;
use num_traits::{Signed, Zero};
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

/// A group element: its action on `V`, its action on root coefficients and
/// one reduced word. Equality only looks at the action on `V`.
#[derive(Clone, Debug)]
pub struct GroupElement {
    matrix: Matrix,
    roots: Matrix,
    word: Vec<usize>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.matrix.hash(state);
    }
}

fn root_reflection(re: &Realization, i: usize) -> Matrix {
    let n = re.rank();
    let mut m = Matrix::identity(n);
    for j in 0..n {
        let v = m.get(i, j) - int(re.datum().a(i, j));
        m.set(i, j, v);
    }
    m
}

impl GroupElement {
    pub fn identity(re: &Realization) -> Self {
        GroupElement { matrix: Matrix::identity(re.dim()), roots: Matrix::identity(re.rank()), word: Vec::new() }
    }

    pub fn simple(re: &Realization, i: usize) -> Self {
        Self::identity(re).mul_simple(re, i)
    }

    /// Reduces an arbitrary word letter by letter.
    pub fn from_word(re: &Realization, word: &[usize]) -> Self {
        word.iter().fold(Self::identity(re), |w, &i| w.mul_simple(re, i))
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn root_matrix(&self) -> &Matrix {
        &self.roots
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        self.matrix.apply(v)
    }

    /// Coefficients of `w(Σ c_i α_i)`.
    pub fn apply_root(&self, coeffs: &[i64]) -> Vec<i64> {
        let c: Vec<Q> = coeffs.iter().map(|&x| int(x)).collect();
        self.roots
            .apply(&c)
            .iter()
            .map(|q| i64::try_from(q.to_integer()).expect("root coefficient overflow"))
            .collect()
    }

    /// `ℓ(w r_i) < ℓ(w)`, read off the sign of `w(α_i)`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        (0..self.roots.rows()).any(|r| self.roots.get(r, i).is_negative())
    }

    /// `w r_i`, keeping the stored word reduced.
    pub fn mul_simple(&self, re: &Realization, i: usize) -> Self {
        let matrix = &self.matrix * re.reflection_matrix(i);
        let roots = &self.roots * &root_reflection(re, i);
        let mut word = self.word.clone();
        if self.has_right_descent(i) {
            // exchange: delete the letter s_k with s_{k+1}..s_l(α_i) = α_{s_k}
            let n = re.rank();
            let mut beta: Vec<Q> = (0..n).map(|j| if j == i { int(1) } else { Q::zero() }).collect();
            let mut hit = None;
            for k in (0..word.len()).rev() {
                let s = word[k];
                if beta.iter().enumerate().all(|(j, c)| if j == s { *c == int(1) } else { c.is_zero() }) {
                    hit = Some(k);
                    break;
                }
                beta = root_reflection(re, s).apply(&beta);
            }
            word.remove(hit.expect("exchange condition"));
        } else {
            word.push(i);
        }
        GroupElement { matrix, roots, word }
    }

    pub fn mul(&self, re: &Realization, other: &Self) -> Self {
        other.word.iter().fold(self.clone(), |w, &i| w.mul_simple(re, i))
    }

    pub fn inverse(&self, re: &Realization) -> Self {
        let rev: Vec<usize> = self.word.iter().rev().copied().collect();
        Self::from_word(re, &rev)
    }

    /// `u ≤ w` in the Bruhat order. If `ws < w` then `u ≤ w` iff
    /// `min(u, us) ≤ ws`.
    pub fn bruhat_leq(re: &Realization, u: &Self, w: &Self) -> bool {
        let mut u = u.clone();
        let mut w = w.clone();
        loop {
            if u.is_identity() {
                return true;
            }
            if u.length() > w.length() {
                return false;
            }
            let s = *w.word.last().unwrap();
            if u.has_right_descent(s) {
                u = u.mul_simple(re, s);
            }
            w = w.mul_simple(re, s);
        }
    }

    pub fn labels(&self, re: &Realization) -> Vec<String> {
        self.word.iter().map(|&i| re.datum().labels()[i].clone()).collect()
    }
}

/// Elements of the parabolic subgroup on `gens` by breadth-first search over
/// right multiplication, layered by length, stopping after `max_len` or once
/// more than `cap` elements are found. The final flag reports closure.
pub fn enumerate(re: &Realization, gens: &[usize], max_len: usize, cap: usize) -> (Vec<Vec<GroupElement>>, bool) {
    let e = GroupElement::identity(re);
    let mut seen: HashSet<Matrix> = HashSet::from([e.matrix.clone()]);
    let mut layers = vec![vec![e]];
    let mut total = 1;
    while layers.len() <= max_len {
        let mut next = Vec::new();
        for w in layers.last().unwrap() {
            for &i in gens {
                let matrix = &w.matrix * re.reflection_matrix(i);
                if seen.insert(matrix.clone()) {
                    next.push(GroupElement {
                        matrix,
                        roots: &w.roots * &root_reflection(re, i),
                        word: w.word.iter().copied().chain([i]).collect(),
                    });
                }
            }
        }
        total += next.len();
        if next.is_empty() {
            return (layers, true);
        }
        layers.push(next);
        if total > cap {
            return (layers, false);
        }
    }
    (layers, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Finiteness {
    Finite(usize),
    Infinite,
    Undecided,
}

/// Decides finiteness of `W(J)` without the Cartan classification: enumeration
/// up to `cap` elements, plus `m = ∞` inside `J` as a certificate of infiniteness.
pub fn spherical_by_enumeration(re: &Realization, j: &[usize], cap: usize) -> Finiteness {
    for &a in j {
        for &b in j {
            if a != b && re.datum().m(a, b).is_none() {
                return Finiteness::Infinite;
            }
        }
    }
    let (layers, closed) = enumerate(re, j, usize::MAX, cap);
    if closed {
        Finiteness::Finite(layers.iter().map(Vec::len).sum())
    } else {
        Finiteness::Undecided
    }
}

/// Order of `r_i r_j` checked up to `max_power`; `None` if no power up to the
/// bound is the identity.
pub fn dihedral_order(re: &Realization, i: usize, j: usize, max_power: u32) -> Option<u32> {
    let p = re.reflection_matrix(i) * re.reflection_matrix(j);
    let mut acc = p.clone();
    for k in 1..=max_power {
        if acc.is_identity() {
            return Some(k);
        }
        acc = &acc * &p;
    }
    None
}

/// Bruhat order by brute force: `u ≤ w` iff some subword of the stored reduced
/// word of `w` multiplies to `u`. Exponential; used as an oracle.
pub fn bruhat_leq_by_subwords(re: &Realization, u: &GroupElement, w: &GroupElement) -> bool {
    let mut products: HashSet<Matrix> = HashSet::from([Matrix::identity(re.dim())]);
    for &s in w.word() {
        let extended: Vec<Matrix> = products.iter().map(|m| m * re.reflection_matrix(s)).collect();
        products.extend(extended);
    }
    products.contains(u.matrix())
}
