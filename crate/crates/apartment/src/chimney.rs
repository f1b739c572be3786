use crate::enclosure::EnclosureRep;
use crate::model::{ApartmentError, ApartmentModel};
use coxeter_core::linalg::{add, dot, scale, sub};
use coxeter_core::rational::Q;
use coxeter_core::{GroupElement, Matrix, Realization};
use num_traits::{Signed, Zero};
use serde::Serialize;
use tits_cone::{FacetAddress, Sign};

/// Coefficients of `(ε w)⁻¹ α`.
pub fn pull_back_root(re: &Realization, f: &FacetAddress, coeffs: &[i64]) -> Vec<i64> {
    let c = f.w.inverse(re).apply_root(coeffs);
    match f.sign {
        Sign::Plus => c,
        Sign::Minus => c.into_iter().map(|x| -x).collect(),
    }
}

/// `α` is `≥ 0` on the vectorial facet `f`.
pub fn nonnegative_on(re: &Realization, f: &FacetAddress, coeffs: &[i64]) -> bool {
    pull_back_root(re, f, coeffs).iter().enumerate().all(|(i, &c)| c >= 0 || f.j.contains(&i))
}

/// `F^v(I)`, the subspace where every simple root vanishes.
pub fn fixed_direction(re: &Realization) -> FacetAddress {
    FacetAddress { sign: Sign::Plus, w: GroupElement::identity(re), j: (0..re.rank()).collect() }
}

/// The germ at `point` of `point + direction`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFacet {
    pub point: Vec<Q>,
    pub direction: FacetAddress,
}

impl LocalFacet {
    /// The point itself, up to the fixed subspace that no root sees.
    pub fn vertex(re: &Realization, point: Vec<Q>) -> Self {
        LocalFacet { point, direction: fixed_direction(re) }
    }
}

/// `x + F^v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorFace {
    pub base: Vec<Q>,
    pub direction: FacetAddress,
}

impl SectorFace {
    pub fn is_sector(&self) -> bool {
        self.direction.is_chamber()
    }

    pub fn is_sector_panel(&self) -> bool {
        self.direction.j.len() == 1
    }

    pub fn contains(&self, model: &ApartmentModel, p: &[Q]) -> bool {
        model.cone().in_open_facet(&self.direction, &sub(p, &self.base))
    }

    pub fn shorten(&self, model: &ApartmentModel, xi: &[Q]) -> Result<Self, ApartmentError> {
        check_shortening(model, &self.direction, xi)?;
        Ok(SectorFace { base: add(&self.base, xi), direction: self.direction.clone() })
    }

    /// Same direction, and the two bases differ by a vector in the span of
    /// the direction.
    pub fn germ_eq(&self, model: &ApartmentModel, other: &Self) -> bool {
        if self.direction != other.direction {
            return false;
        }
        let re = model.realization();
        let d = sub(&other.base, &self.base);
        let d = match self.direction.sign {
            Sign::Plus => d,
            Sign::Minus => coxeter_core::linalg::neg(&d),
        };
        let u = self.direction.w.inverse(re).apply(&d);
        self.direction.j.iter().all(|&j| re.eval_simple(j, &u).is_zero())
    }

    pub fn as_chimney(&self, re: &Realization) -> Chimney {
        Chimney { base: LocalFacet::vertex(re, self.base.clone()), direction: self.direction.clone() }
    }
}

/// `𝔯(F, F^v) = cl(F + F^v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chimney {
    pub base: LocalFacet,
    pub direction: FacetAddress,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChimneyClass {
    pub splayed: bool,
    pub solid: bool,
    pub full: bool,
}

fn check_shortening(model: &ApartmentModel, f: &FacetAddress, xi: &[Q]) -> Result<(), ApartmentError> {
    model.check_dim(xi)?;
    if model.cone().in_closed_facet(f, xi) {
        Ok(())
    } else {
        Err(ApartmentError::NotInDirection)
    }
}

impl Chimney {
    pub fn enclosure(&self, model: &ApartmentModel) -> EnclosureRep {
        let re = model.realization();
        let levels = model
            .roots()
            .iter()
            .enumerate()
            .map(|(r, root)| {
                if !nonnegative_on(re, &self.direction, &root.coeffs) {
                    return None;
                }
                let k = -model.eval(r, &self.base.point);
                Some(if nonnegative_on(re, &self.base.direction, &root.coeffs) {
                    model.round_level(r, &k)
                } else {
                    model.round_level_strict(r, &k)
                })
            })
            .collect();
        EnclosureRep { height: model.height(), levels }
    }

    pub fn shorten(&self, model: &ApartmentModel, xi: &[Q]) -> Result<Self, ApartmentError> {
        check_shortening(model, &self.direction, xi)?;
        let base = LocalFacet { point: add(&self.base.point, xi), direction: self.base.direction.clone() };
        Ok(Chimney { base, direction: self.direction.clone() })
    }

    /// Some shortening of `self` lies in `other`, found along the central ray of the direction.
    pub fn shortening_inside(&self, model: &ApartmentModel, other: &Self) -> Option<Self> {
        if self.direction != other.direction {
            return None;
        }
        let u = model.cone().facet_vector(&self.direction);
        let mine = self.enclosure(model);
        let theirs = other.enclosure(model);
        let mut t = Q::zero();
        for (r, (a, b)) in mine.levels.iter().zip(&theirs.levels).enumerate() {
            let (Some(a), Some(b)) = (a, b) else { continue };
            let slope = dot(&model.roots()[r].form, &u);
            if slope.is_positive() {
                let need = (a - b) / slope;
                if need > t {
                    t = need;
                }
            }
        }
        let s = self.shorten(model, &scale(&t, &u)).ok()?;
        s.enclosure(model).is_subset(&theirs).then_some(s)
    }

    /// Equal germs: each contains a shortening of the other.
    pub fn germ_eq(&self, model: &ApartmentModel, other: &Self) -> bool {
        self.shortening_inside(model, other).is_some() && other.shortening_inside(model, self).is_some()
    }

    /// Roots whose half-spaces the chimney leaves unconstrained; determined by the direction alone.
    pub fn unbounded_roots(&self, model: &ApartmentModel) -> Vec<usize> {
        self.enclosure(model).levels.iter().enumerate().filter(|(_, l)| l.is_none()).map(|(r, _)| r).collect()
    }

    /// Basis of the direction of the support, the affine span of the enclosure.
    pub fn support_direction(&self, model: &ApartmentModel) -> Vec<Vec<Q>> {
        let enc = self.enclosure(model);
        let pinned: Vec<Vec<Q>> = model
            .roots()
            .iter()
            .enumerate()
            .filter(|(r, root)| {
                let neg: Vec<i64> = root.coeffs.iter().map(|c| -c).collect();
                let Some(n) = model.root_index(&neg) else { return false };
                matches!((&enc.levels[*r], &enc.levels[n]), (Some(a), Some(b)) if (a + b).is_zero())
            })
            .map(|(_, root)| root.form.clone())
            .collect();
        if pinned.is_empty() {
            return Matrix::identity(model.dim()).to_rows();
        }
        Matrix::from_rows(pinned).null_space()
    }

    pub fn classify(&self, model: &ApartmentModel) -> Result<ChimneyClass, ApartmentError> {
        let splayed = model.cone().is_spherical(&self.direction.j);
        let support = self.support_direction(model);
        let full = support.len() == model.dim();
        let solid = if full {
            true
        } else {
            let vanishing: Vec<Vec<i64>> = model
                .roots()
                .iter()
                .filter(|r| r.is_real() && r.is_positive() && support.iter().all(|v| dot(&r.form, v).is_zero()))
                .map(|r| r.coeffs.clone())
                .collect();
            model.datum().reflection_subgroup_is_finite(&vanishing).ok_or(ApartmentError::Undecided)?
        };
        Ok(ChimneyClass { splayed, solid, full })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use coxeter_core::rational::{int, frac};
    use coxeter_core::CoxeterDatum;

    fn model(name: &str) -> ApartmentModel {
        ApartmentModel::integral(Realization::new(CoxeterDatum::named(name).unwrap()))
    }

    #[test]
    fn a1_sector_shortening() {
        let m = model("A1");
        let re = m.realization();
        let q = SectorFace { base: vec![frac(1, 3)], direction: FacetAddress::chamber(re) };
        let s = q.shorten(&m, &[int(2)]).unwrap();
        assert_eq!(s.base, vec![frac(7, 3)]);
        assert!(q.germ_eq(&m, &s));
        assert!(q.as_chimney(re).germ_eq(&m, &s.as_chimney(re)));
        assert_eq!(q.shorten(&m, &[int(-1)]), Err(ApartmentError::NotInDirection));
        assert_eq!(q.shorten(&m, &[int(0)]).unwrap(), q);
    }

    #[test]
    fn point_based_chimney_germ() {
        let m = model("A2");
        let re = m.realization();
        let dir = FacetAddress { sign: Sign::Minus, w: GroupElement::simple(re, 1), j: vec![0] };
        let ch = Chimney { base: LocalFacet::vertex(re, re.vector_with_values(&[frac(1, 2), int(-3)])), direction: dir };
        let xi = scale(&int(5), &m.cone().facet_vector(&ch.direction));
        let sh = ch.shorten(&m, &xi).unwrap();
        assert!(ch.germ_eq(&m, &sh));
        assert_eq!(ch.unbounded_roots(&m), sh.unbounded_roots(&m));
        let other = Chimney { base: LocalFacet::vertex(re, re.vector_with_values(&[int(7), int(1)])), ..ch.clone() };
        assert!(!ch.germ_eq(&m, &other));
    }

    #[test]
    fn classification_examples() {
        let m = model("A2");
        let re = m.realization();
        let x = re.vector_with_values(&[frac(1, 2), frac(1, 3)]);
        let sector = Chimney { base: LocalFacet::vertex(re, x.clone()), direction: FacetAddress::chamber(re) };
        assert_eq!(sector.classify(&m).unwrap(), ChimneyClass { splayed: true, solid: true, full: true });
        let panel = FacetAddress { sign: Sign::Plus, w: GroupElement::identity(re), j: vec![0] };
        let c = Chimney { base: LocalFacet::vertex(re, re.vector_with_values(&[int(0), int(0)])), direction: panel };
        let k = c.classify(&m).unwrap();
        assert!(k.splayed && !k.full && k.solid);

        let aff = model("~A1");
        let re = aff.realization();
        let c = Chimney { base: LocalFacet::vertex(re, vec![Q::zero(); re.dim()]), direction: fixed_direction(re) };
        let k = c.classify(&aff).unwrap();
        assert!(!k.splayed && !k.full);
        let c = Chimney { base: LocalFacet::vertex(re, vec![Q::zero(); re.dim()]), direction: FacetAddress::chamber(re) };
        assert_eq!(c.classify(&aff).unwrap(), ChimneyClass { splayed: true, solid: true, full: true });
    }

    #[test]
    fn local_facet_base_rounds_strictly() {
        let m = model("A1");
        let re = m.realization();
        let minus = FacetAddress { sign: Sign::Minus, w: GroupElement::identity(re), j: vec![] };
        let base = LocalFacet { point: vec![int(1)], direction: minus };
        let c = Chimney { base, direction: FacetAddress::chamber(re) };
        let e = c.enclosure(&m);
        // germ of ]0,1] pushed to +∞: α ≥ 0
        assert_eq!(e.levels, vec![Some(int(0)), None]);
    }
}
