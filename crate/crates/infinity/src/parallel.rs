//! Parallelism of sector faces and facets at infinity.

use crate::InfinityError;
use apartment::SectorFace;
use coxeter_core::rational::{frac, int, Q};
use coxeter_core::linalg::{add, scale};
use masure_atlas::{AtlasError, AxiomReport, CheckBounds, Location, MasurePoint, TreeAtlas, TreeLoc};
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use tits_cone::{FacetAddress, Sign};

/// Per factor, the end a face points to, or `None` when the face is constant
/// in that factor.
pub type Ends = Vec<Option<usize>>;

/// A parallelism class of sector faces, with its canonical representative:
/// the least chart carrying it and the face based at that chart's least
/// window corner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetAtInfinity {
    pub ends: Ends,
    pub chart: usize,
    pub face: SectorFace,
}

impl FacetAtInfinity {
    pub fn sign(&self) -> Sign {
        self.face.direction.sign
    }

    /// The type `J`: simple roots vanishing on the direction.
    pub fn j(&self) -> &[usize] {
        &self.face.direction.j
    }

    /// Canonical class of the given ends. At least one entry must be `Some`.
    pub fn from_ends(at: &TreeAtlas, ends: &[Option<usize>]) -> Result<Self, InfinityError> {
        check_ends(at, ends)?;
        let pairs: Vec<(usize, usize)> = at
            .factors()
            .iter()
            .zip(ends)
            .map(|(f, e)| match e {
                Some(e) => f.chart_through(&[], &[*e]).ok_or(AtlasError::IncompleteAtlas),
                None => Ok(f.pair(0)),
            })
            .collect::<Result<_, _>>()?;
        let chart = at.chart_id(&pairs);
        let base: Vec<Q> = at.factors().iter().map(|f| int(-(f.depth() as i64))).collect();
        let direction = direction_facet(at, &direction_vector(at, chart, ends)?);
        Ok(FacetAtInfinity { ends: ends.to_vec(), chart, face: SectorFace { base, direction } })
    }

    pub fn of_face(at: &TreeAtlas, chart: usize, face: &SectorFace) -> Result<Self, InfinityError> {
        Self::from_ends(at, &face_ends(at, chart, face)?)
    }
}

fn check_ends(at: &TreeAtlas, ends: &[Option<usize>]) -> Result<(), InfinityError> {
    let ok = ends.len() == at.rank()
        && ends.iter().any(Option::is_some)
        && ends.iter().zip(at.factors()).all(|(e, f)| e.is_none_or(|e| e < f.leaf_count()));
    if ok {
        Ok(())
    } else {
        Err(InfinityError::BadFacet(ends.to_vec()))
    }
}

/// `±1` toward each listed end, `0` elsewhere.
pub fn direction_vector(at: &TreeAtlas, chart: usize, ends: &[Option<usize>]) -> Result<Vec<Q>, InfinityError> {
    let pairs = at.chart_pairs(chart);
    ends.iter()
        .zip(pairs)
        .map(|(e, (a, b))| match e {
            None => Ok(int(0)),
            Some(e) if *e == b => Ok(int(1)),
            Some(e) if *e == a => Ok(int(-1)),
            Some(e) => Err(AtlasError::NotAnEnd(*e, chart).into()),
        })
        .collect()
}

/// The vector facet containing `v`.
pub fn direction_facet(at: &TreeAtlas, v: &[Q]) -> FacetAddress {
    at.model().cone().locate(v).facet().expect("the Tits cone of a finite type is everything").clone()
}

/// The ends a face of `chart` points to.
pub fn face_ends(at: &TreeAtlas, chart: usize, face: &SectorFace) -> Result<Ends, InfinityError> {
    if chart >= at.chart_count() {
        return Err(AtlasError::NoChart(chart).into());
    }
    let v = at.model().cone().facet_vector(&face.direction);
    Ok(at
        .chart_pairs(chart)
        .into_iter()
        .zip(&v)
        .map(|((a, b), x)| {
            if x.is_positive() {
                Some(b)
            } else if x.is_negative() {
                Some(a)
            } else {
                None
            }
        })
        .collect())
}

fn base_location(at: &TreeAtlas, chart: usize, face: &SectorFace) -> Result<Location, InfinityError> {
    Ok(at.location(&MasurePoint { chart, coords: face.base.clone() })?)
}

/// Whether two faces, each given in a chart, are parallel: in a chart
/// containing a tail of both, their directions coincide.
pub fn parallel(at: &TreeAtlas, f1: (usize, &SectorFace), f2: (usize, &SectorFace)) -> Result<bool, InfinityError> {
    let e1 = face_ends(at, f1.0, f1.1)?;
    let e2 = face_ends(at, f2.0, f2.1)?;
    let l1 = base_location(at, f1.0, f1.1)?;
    let l2 = base_location(at, f2.0, f2.1)?;
    let mut pairs = Vec::with_capacity(at.rank());
    for (k, f) in at.factors().iter().enumerate() {
        let mut ends: Vec<usize> = e1[k].into_iter().chain(e2[k]).collect();
        ends.dedup();
        let mut locs: Vec<&TreeLoc> = Vec::new();
        if e1[k].is_none() {
            locs.push(&l1[k]);
        }
        if e2[k].is_none() {
            locs.push(&l2[k]);
        }
        pairs.push(f.chart_through(&locs, &ends).ok_or(AtlasError::IncompleteAtlas)?);
    }
    let c = at.chart_id(&pairs);
    Ok(direction_vector(at, c, &e1)? == direction_vector(at, c, &e2)?)
}

/// The face with vertex `x` in the class `fi`, in the least chart containing
/// both. Every other such chart is checked to give the same face.
pub fn unique_face_at(at: &TreeAtlas, x: &Location, fi: &FacetAtInfinity) -> Result<(usize, SectorFace), InfinityError> {
    check_ends(at, &fi.ends)?;
    let carriers: Vec<usize> = at
        .charts_through(&[x])
        .into_iter()
        .filter(|&c| direction_vector(at, c, &fi.ends).is_ok())
        .collect();
    let &chart = carriers.first().ok_or(AtlasError::IncompleteAtlas)?;
    let probes = |c: usize| -> Result<Vec<MasurePoint>, InfinityError> {
        let base = at.point_in(c, x).ok_or(AtlasError::IncompleteAtlas)?.coords;
        let d = direction_vector(at, c, &fi.ends)?;
        [frac(0, 1), frac(1, 2), int(1), int(3)]
            .iter()
            .map(|t| Ok(at.normal_form(&MasurePoint { chart: c, coords: add(&base, &scale(t, &d)) })?))
            .collect()
    };
    let reference = probes(chart)?;
    for &c in &carriers[1..] {
        if probes(c)? != reference {
            return Err(InfinityError::NotUnique);
        }
    }
    let base = at.point_in(chart, x).ok_or(AtlasError::IncompleteAtlas)?.coords;
    let direction = direction_facet(at, &direction_vector(at, chart, &fi.ends)?);
    Ok((chart, SectorFace { base, direction }))
}

/// Walls with the same direction at infinity lie in a common chart.
///
/// A wall of a chart is a window vertex `v` of one factor times the chart's
/// geodesics in the other factors; its direction at infinity is given by the
/// ends of those geodesics.
pub fn check_wall_coherence(at: &TreeAtlas, bounds: &CheckBounds) -> AxiomReport {
    let mut rep = AxiomReport::new("wall coherence", bounds);
    // (factor, other pairs) -> vertices
    let mut groups: BTreeMap<(usize, Vec<(usize, usize)>), BTreeSet<usize>> = BTreeMap::new();
    for c in 0..at.chart_count() {
        let pairs = at.chart_pairs(c);
        for (k, f) in at.factors().iter().enumerate() {
            let mut others = pairs.clone();
            others.remove(k);
            groups.entry((k, others)).or_default().extend(f.path(pairs[k]));
        }
    }
    for ((k, others), verts) in &groups {
        let f = &at.factors()[*k];
        let verts: Vec<usize> = verts.iter().copied().collect();
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                let (u, v) = (TreeLoc::Vertex(verts[i]), TreeLoc::Vertex(verts[j]));
                // the other factors keep their geodesics, so a geodesic through u and v suffices
                let ok = f.chart_through(&[&u, &v], &[]).is_some();
                rep.record(ok, || format!("walls at v{} and v{} of factor {k} along {others:?}", verts[i], verts[j]));
            }
        }
    }
    rep
}

/// Distinct charts have distinct sets of ends.
pub fn check_apartments_at_infinity(at: &TreeAtlas, bounds: &CheckBounds) -> AxiomReport {
    let mut rep = AxiomReport::new("apartments at infinity", bounds);
    let mut seen: BTreeMap<Vec<BTreeSet<usize>>, usize> = BTreeMap::new();
    for c in 0..at.chart_count() {
        let key: Vec<BTreeSet<usize>> = at.chart_pairs(c).into_iter().map(|(a, b)| BTreeSet::from([a, b])).collect();
        let prev = seen.insert(key, c);
        rep.record(prev.is_none(), || format!("charts {} and {c} have the same ends", prev.unwrap()));
    }
    rep
}

/// The face of `chart` based at `base` pointing to `ends`.
pub fn face_toward(at: &TreeAtlas, chart: usize, base: Vec<Q>, ends: &[Option<usize>]) -> Result<SectorFace, InfinityError> {
    let v = direction_vector(at, chart, ends)?;
    if v.iter().all(Zero::is_zero) {
        return Err(InfinityError::BadFacet(ends.to_vec()));
    }
    Ok(SectorFace { base, direction: direction_facet(at, &v) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rays_in_a_tree() {
        let at = TreeAtlas::tree(2, 3).unwrap();
        let (a, b) = (0usize, 7usize);
        let c = at.chart_id(&[(a, b)]);
        let r1 = face_toward(&at, c, vec![int(-1)], &[Some(b)]).unwrap();
        let r2 = face_toward(&at, c, vec![int(2)], &[Some(b)]).unwrap();
        let r3 = face_toward(&at, c, vec![int(2)], &[Some(a)]).unwrap();
        assert!(parallel(&at, (c, &r1), (c, &r2)).unwrap());
        assert!(!parallel(&at, (c, &r1), (c, &r3)).unwrap());
        // the same ray seen from another chart through its tail
        let c2 = at.chart_id(&[(3, b)]);
        let top = at.point_in(c2, &at.location(&MasurePoint { chart: c, coords: vec![int(2)] }).unwrap()).unwrap();
        let r4 = face_toward(&at, c2, top.coords, &[Some(b)]).unwrap();
        assert!(parallel(&at, (c, &r1), (c2, &r4)).unwrap());
        assert!(parallel(&at, (c2, &r4), (c, &r2)).unwrap());
    }

    #[test]
    fn canonical_class() {
        let at = TreeAtlas::product(2, 2, 2).unwrap();
        let fi = FacetAtInfinity::from_ends(&at, &[Some(4), None]).unwrap();
        assert_eq!(fi.j(), &[1]);
        let c = at.chart_id(&[(2, 4), (1, 5)]);
        let f = face_toward(&at, c, vec![int(0), int(1)], &[Some(4), None]).unwrap();
        assert_eq!(FacetAtInfinity::of_face(&at, c, &f).unwrap(), fi);
        assert!(FacetAtInfinity::from_ends(&at, &[None, None]).is_err());
    }

    #[test]
    fn face_from_an_off_chart_point() {
        let at = TreeAtlas::tree(2, 2).unwrap();
        let fi = FacetAtInfinity::from_ends(&at, &[Some(5)]).unwrap();
        for v in at.vertices() {
            let (chart, face) = unique_face_at(&at, &v, &fi).unwrap();
            assert_eq!(at.location(&MasurePoint { chart, coords: face.base.clone() }).unwrap(), v);
            assert_eq!(face_ends(&at, chart, &face).unwrap(), vec![Some(5)]);
        }
    }

    #[test]
    fn walls_and_apartments() {
        let b = CheckBounds::default();
        for at in [TreeAtlas::tree(2, 3).unwrap(), TreeAtlas::product(2, 2, 1).unwrap()] {
            let w = check_wall_coherence(&at, &b);
            assert!(w.passed() && w.checked > 0);
            assert!(check_apartments_at_infinity(&at, &b).passed());
        }
    }
}
