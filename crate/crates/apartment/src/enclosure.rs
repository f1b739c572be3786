use crate::model::{ApartmentError, ApartmentModel};
use coxeter_core::linalg::{add, dot, neg};
use coxeter_core::rational::{self, ceil_to_multiple, int, is_multiple, Q};
use coxeter_core::{GroupElement, Realization};
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// `D(α, k) = {v : α(v) + k ≥ 0}`; `level = None` is `k = ∞`, the whole space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfSpace {
    pub root: Vec<i64>,
    #[serde(serialize_with = "ser_level")]
    pub level: Option<Q>,
    pub real: bool,
}

fn ser_level<S: serde::Serializer>(l: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
    match l {
        Some(q) => s.serialize_str(&rational::to_string(q)),
        None => s.serialize_str("inf"),
    }
}

/// `∩ D(α, k_α)` over `Δ_H`, levels aligned with [`ApartmentModel::roots`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnclosureRep {
    pub height: i64,
    pub levels: Vec<Option<Q>>,
}

impl EnclosureRep {
    /// The whole apartment.
    pub fn everything(model: &ApartmentModel) -> Self {
        EnclosureRep { height: model.height(), levels: vec![None; model.roots().len()] }
    }

    pub fn level(&self, root: usize) -> Option<&Q> {
        self.levels[root].as_ref()
    }

    pub fn half_spaces(&self, model: &ApartmentModel) -> Vec<HalfSpace> {
        model
            .roots()
            .iter()
            .zip(&self.levels)
            .map(|(r, l)| HalfSpace { root: r.coeffs.clone(), level: l.clone(), real: r.is_real() })
            .collect()
    }

    /// Per-root minimum of the levels.
    pub fn intersect(&self, other: &Self) -> Self {
        let levels = self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(a.min(b).clone()),
                (Some(a), None) | (None, Some(a)) => Some(a.clone()),
                (None, None) => None,
            })
            .collect();
        EnclosureRep { height: self.height.min(other.height), levels }
    }

    /// Level comparison root by root; a sufficient test for `self ⊆ other`
    /// that is exact for enclosures at the same truncation.
    pub fn is_subset(&self, other: &Self) -> bool {
        self.levels.iter().zip(&other.levels).all(|(a, b)| match (a, b) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a <= b,
        })
    }

    pub fn is_unconstrained(&self) -> bool {
        self.levels.iter().all(Option::is_none)
    }
}

impl ApartmentModel {
    fn mins(&self, points: &[Vec<Q>]) -> Result<Vec<Q>, ApartmentError> {
        let Some(first) = points.first() else {
            return Err(ApartmentError::EmptyInput);
        };
        for p in points {
            self.check_dim(p)?;
        }
        Ok((0..self.roots().len())
            .map(|r| points.iter().skip(1).fold(self.eval(r, first), |m, p| m.min(self.eval(r, p))))
            .collect())
    }

    /// `cl(Ω)`: real levels rounded up into `Γ_α`, imaginary levels exact.
    pub fn enclose(&self, points: &[Vec<Q>]) -> Result<EnclosureRep, ApartmentError> {
        let mins = self.mins(points)?;
        let levels = mins.iter().enumerate().map(|(r, m)| Some(self.round_level(r, &-m))).collect();
        Ok(EnclosureRep { height: self.height(), levels })
    }

    /// `cl_ℝ(Ω)`: every level exact.
    pub fn enclose_exact(&self, points: &[Vec<Q>]) -> Result<EnclosureRep, ApartmentError> {
        let mins = self.mins(points)?;
        Ok(EnclosureRep { height: self.height(), levels: mins.into_iter().map(|m| Some(-m)).collect() })
    }

    /// Least admissible level `≥ k` for the root.
    pub fn round_level(&self, root: usize, k: &Q) -> Q {
        match self.step(root) {
            Some(d) => ceil_to_multiple(k, d),
            None => k.clone(),
        }
    }

    /// Least admissible level `> k` for a real root, `k` itself for an imaginary one.
    pub fn round_level_strict(&self, root: usize, k: &Q) -> Q {
        match self.step(root) {
            Some(d) => {
                let c = ceil_to_multiple(k, d);
                if &c == k {
                    c + d
                } else {
                    c
                }
            }
            None => k.clone(),
        }
    }

    pub fn contains(&self, enc: &EnclosureRep, x: &[Q]) -> bool {
        enc.levels.iter().enumerate().all(|(r, l)| match l {
            Some(k) => !(self.eval(r, x) + k).is_negative(),
            None => true,
        })
    }

    /// `(α, k)` with `α ∈ Δ_H` positive real and `α(x) + k = 0`, `k ∈ Γ_α`.
    pub fn walls_through(&self, x: &[Q]) -> Vec<(Vec<i64>, Q)> {
        self.roots()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_real() && r.is_positive())
            .filter_map(|(i, r)| {
                let k = -self.eval(i, x);
                is_multiple(&k, self.step(i).unwrap()).then(|| (r.coeffs.clone(), k))
            })
            .collect()
    }

    pub fn is_special(&self, x: &[Q]) -> SpecialReport {
        let walls = self.walls_through(x);
        let real = self.roots().iter().filter(|r| r.is_real() && r.is_positive()).count();
        SpecialReport { special: walls.len() == real, height: self.height(), walls: walls.len(), real_roots: real }
    }

    /// `g(cl Ω)` on the roots whose image stays in `Δ_H`: `g D(α,k) = D(wα, k - (wα)(t))`.
    pub fn transform(&self, enc: &EnclosureRep, g: &AffineMap) -> BTreeMap<usize, Option<Q>> {
        let mut out = BTreeMap::new();
        for (r, l) in enc.levels.iter().enumerate() {
            if let Some(img) = self.map_root(&g.linear, r) {
                let shift = dot(&self.roots()[img].form, &g.translation);
                out.insert(img, l.as_ref().map(|k| k - shift));
            }
        }
        out
    }

    /// `Σ n_i d_i α_i∨`.
    pub fn coroot_translation(&self, n: &[i64]) -> Vec<Q> {
        let coeffs: Vec<Q> = n.iter().enumerate().map(|(i, &c)| int(c) * self.simple_step(i)).collect();
        self.realization().coroot_combination(&coeffs)
    }

    /// Whether translation by `t` maps every wall of `Δ_H` to a wall.
    pub fn translation_preserves_walls(&self, t: &[Q]) -> bool {
        self.roots()
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_real())
            .all(|(i, _)| is_multiple(&self.eval(i, t), self.step(i).unwrap()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialReport {
    pub special: bool,
    /// Truncation the answer is relative to.
    pub height: i64,
    pub walls: usize,
    pub real_roots: usize,
}

/// `x ↦ w x + t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub linear: GroupElement,
    pub translation: Vec<Q>,
}

impl AffineMap {
    pub fn identity(re: &Realization) -> Self {
        AffineMap { linear: GroupElement::identity(re), translation: vec![Q::zero(); re.dim()] }
    }

    pub fn translation(re: &Realization, t: Vec<Q>) -> Self {
        AffineMap { linear: GroupElement::identity(re), translation: t }
    }

    pub fn linear(re: &Realization, w: GroupElement) -> Self {
        AffineMap { linear: w, translation: vec![Q::zero(); re.dim()] }
    }

    /// Reflection in the wall `M(α_i, k)`.
    pub fn reflection(re: &Realization, i: usize, k: &Q) -> Self {
        let t = re.coroot(i).iter().map(|c| -(c * k)).collect();
        AffineMap { linear: GroupElement::simple(re, i), translation: t }
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        add(&self.linear.apply(x), &self.translation)
    }

    /// `self ∘ other`.
    pub fn compose(&self, re: &Realization, other: &Self) -> Self {
        AffineMap { linear: self.linear.mul(re, &other.linear), translation: self.apply(&other.translation) }
    }

    pub fn inverse(&self, re: &Realization) -> Self {
        let w = self.linear.inverse(re);
        let t = neg(&w.apply(&self.translation));
        AffineMap { linear: w, translation: t }
    }

    pub fn is_identity(&self) -> bool {
        self.linear.is_identity() && self.translation.iter().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use coxeter_core::rational::frac;
    use coxeter_core::CoxeterDatum;

    fn model(name: &str) -> ApartmentModel {
        ApartmentModel::integral(Realization::new(CoxeterDatum::named(name).unwrap()))
    }

    fn lv(m: &ApartmentModel, e: &EnclosureRep, c: &[i64]) -> Option<Q> {
        e.levels[m.root_index(c).unwrap()].clone()
    }

    #[test]
    fn a1_segment() {
        let m = model("A1");
        let e = m.enclose(&[vec![frac(3, 10)], vec![frac(17, 10)]]).unwrap();
        assert_eq!(lv(&m, &e, &[1]), Some(int(0)));
        assert_eq!(lv(&m, &e, &[-1]), Some(int(2)));
        assert!(m.contains(&e, &[int(2)]));
        assert!(!m.contains(&e, &[frac(21, 10)]));
        let p = m.enclose(&[vec![int(0)]]).unwrap();
        assert_eq!(p.levels, vec![Some(int(0)), Some(int(0))]);
        assert!(m.contains(&EnclosureRep::everything(&m), &[int(1000)]));
        assert_eq!(m.enclose(&[]), Err(ApartmentError::EmptyInput));
    }

    #[test]
    fn a1xa1_box() {
        let m = model("A1xA1");
        let e = m.enclose(&[vec![frac(1, 2), frac(1, 2)], vec![frac(3, 2), frac(1, 2)]]).unwrap();
        assert_eq!(lv(&m, &e, &[1, 0]), Some(int(0)));
        assert_eq!(lv(&m, &e, &[-1, 0]), Some(int(2)));
        assert_eq!(lv(&m, &e, &[0, 1]), Some(int(0)));
        assert_eq!(lv(&m, &e, &[0, -1]), Some(int(1)));
    }

    #[test]
    fn walls_and_special_points() {
        let m = model("A1");
        assert!(m.is_special(&[int(0)]).special);
        assert!(m.walls_through(&[frac(1, 2)]).is_empty());
        assert!(!m.is_special(&[frac(1, 2)]).special);
        assert_eq!(m.walls_through(&[int(1)]), vec![(vec![1], int(-1))]);
        assert!(m.is_special(&[int(1)]).special);
        let m = model("A1xA1");
        let x = [int(1), frac(1, 2)];
        assert_eq!(m.walls_through(&x), vec![(vec![1, 0], int(-1))]);
        assert!(!m.is_special(&x).special);
    }

    #[test]
    fn imaginary_levels_are_exact() {
        let m = model("~A1");
        let x = m.realization().vector_with_values(&[frac(1, 3), frac(1, 3)]);
        let e = m.enclose(&[x]).unwrap();
        assert_eq!(lv(&m, &e, &[1, 1]), Some(frac(-2, 3)));
        assert_eq!(lv(&m, &e, &[1, 0]), Some(int(0)));
    }

    #[test]
    fn affine_reflection_fixes_its_wall() {
        let m = model("A2");
        let re = m.realization();
        let r = AffineMap::reflection(re, 0, &int(2));
        let x = re.vector_with_values(&[int(-2), int(5)]);
        assert_eq!(r.apply(&x), x);
        assert!(r.compose(re, &r).is_identity());
        let g = r.compose(re, &AffineMap::translation(re, m.coroot_translation(&[1, -2])));
        assert!(g.compose(re, &g.inverse(re)).is_identity());
    }
}
