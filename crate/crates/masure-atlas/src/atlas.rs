use crate::tree::{FactorGluing, TreeLoc, TreeWindow};
use apartment::{AffineMap, ApartmentModel, EnclosureRep};
use coxeter_core::rational::{int, Q};
use coxeter_core::{CoxeterDatum, GroupElement, Realization};
use std::fmt;
use thiserror::Error;

pub const DEFAULT_CHART_LIMIT: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AtlasError {
    #[error("branching must be at least 1 and depth at least 1")]
    BadShape,
    #[error("atlas would have {0} charts, above the limit {1}")]
    TooLarge(usize, usize),
    #[error("no chart of the atlas contains all the requested objects")]
    IncompleteAtlas,
    #[error("chart {0} does not exist")]
    NoChart(usize),
    #[error("point has {got} coordinates, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("gluing {0} -> {1} does not map walls to walls")]
    WallViolation(String, String),
    #[error("gluing domain of {0} -> {1} is not an enclosure")]
    DomainNotEnclosed(String, String),
    #[error("gluings are inconsistent around {0}")]
    Cocycle(String),
    #[error("chart `{0}` is declared twice")]
    DuplicateChart(String),
    #[error("unknown chart `{0}`")]
    UnknownChart(String),
    #[error("end {0} is not an end of chart {1}")]
    NotAnEnd(usize, usize),
}

/// A point given in chart coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MasurePoint {
    pub chart: usize,
    pub coords: Vec<Q>,
}

impl fmt::Display for MasurePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(coxeter_core::rational::to_string).collect();
        write!(f, "{}:({})", self.chart, c.join(","))
    }
}

/// A point of the masure: one tree location per factor.
pub type Location = Vec<TreeLoc>;

/// A glued pair of charts: the transition map and its domain in the source chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub map: AffineMap,
    pub domain: EnclosureRep,
}

/// An end of the atlas: a leaf per factor. As a sector germ it is a chamber
/// at infinity of either sign.
pub type End = Vec<usize>;

/// Products of tree windows with complete apartment systems. One factor gives
/// the tree atlas on the `A1` model, two give the product atlas on `A1×A1`.
#[derive(Clone, Debug)]
pub struct TreeAtlas {
    model: ApartmentModel,
    factors: Vec<TreeWindow>,
}

impl TreeAtlas {
    pub fn new(shape: &[(usize, usize)], limit: usize) -> Result<Self, AtlasError> {
        if shape.is_empty() || shape.iter().any(|&(q, d)| q == 0 || d == 0) {
            return Err(AtlasError::BadShape);
        }
        let count = shape.iter().try_fold(1usize, |acc, &(q, d)| {
            let leaves = (q + 1).checked_mul(q.checked_pow(d as u32 - 1)?)?;
            acc.checked_mul(leaves * (leaves - 1) / 2)
        });
        match count {
            Some(c) if c <= limit => {}
            c => return Err(AtlasError::TooLarge(c.unwrap_or(usize::MAX), limit)),
        }
        let factors: Vec<TreeWindow> = shape.iter().map(|&(q, d)| TreeWindow::new(q, d)).collect();
        let name = vec!["A1"; factors.len()].join("x");
        let re = Realization::new(CoxeterDatum::named(&name).expect("products of A1 are valid"));
        let n = re.rank();
        let model = ApartmentModel::new(re, apartment::ModelConfig::integral(n).with_height(4))
            .expect("Z value groups are compatible");
        Ok(TreeAtlas { model, factors })
    }

    pub fn tree(q: usize, depth: usize) -> Result<Self, AtlasError> {
        Self::new(&[(q, depth)], DEFAULT_CHART_LIMIT)
    }

    pub fn product(q1: usize, q2: usize, depth: usize) -> Result<Self, AtlasError> {
        Self::new(&[(q1, depth), (q2, depth)], DEFAULT_CHART_LIMIT)
    }

    pub fn model(&self) -> &ApartmentModel {
        &self.model
    }

    pub fn realization(&self) -> &Realization {
        self.model.realization()
    }

    pub fn factors(&self) -> &[TreeWindow] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn chart_count(&self) -> usize {
        self.factors.iter().map(TreeWindow::chart_count).product()
    }

    /// Per-factor leaf pairs of a chart; the id is mixed-radix, first factor most significant.
    pub fn chart_pairs(&self, id: usize) -> Vec<(usize, usize)> {
        let mut rest = id;
        let mut out = vec![(0, 0); self.rank()];
        for (k, f) in self.factors.iter().enumerate().rev() {
            out[k] = f.pair(rest % f.chart_count());
            rest /= f.chart_count();
        }
        out
    }

    pub fn chart_id(&self, pairs: &[(usize, usize)]) -> usize {
        self.factors.iter().zip(pairs).fold(0, |acc, (f, &(a, b))| acc * f.chart_count() + f.pair_id(a, b))
    }

    fn check(&self, p: &MasurePoint) -> Result<Vec<(usize, usize)>, AtlasError> {
        if p.chart >= self.chart_count() {
            return Err(AtlasError::NoChart(p.chart));
        }
        if p.coords.len() != self.rank() {
            return Err(AtlasError::Dimension { expected: self.rank(), got: p.coords.len() });
        }
        Ok(self.chart_pairs(p.chart))
    }

    pub fn location(&self, p: &MasurePoint) -> Result<Location, AtlasError> {
        let pairs = self.check(p)?;
        Ok(self.factors.iter().zip(&pairs).zip(&p.coords).map(|((f, &ab), x)| f.locate(ab, x)).collect())
    }

    pub fn contains(&self, chart: usize, loc: &[TreeLoc]) -> bool {
        let pairs = self.chart_pairs(chart);
        self.factors.iter().zip(&pairs).zip(loc).all(|((f, &ab), l)| f.contains(ab, l))
    }

    /// Coordinates of `loc` in `chart`, if it lies there.
    pub fn point_in(&self, chart: usize, loc: &[TreeLoc]) -> Option<MasurePoint> {
        let pairs = self.chart_pairs(chart);
        let coords = self
            .factors
            .iter()
            .zip(&pairs)
            .zip(loc)
            .map(|((f, &ab), l)| f.coord(ab, l))
            .collect::<Option<Vec<Q>>>()?;
        Some(MasurePoint { chart, coords })
    }

    /// The point in the least chart containing it.
    pub fn normal_form_of(&self, loc: &[TreeLoc]) -> MasurePoint {
        let pairs: Vec<(usize, usize)> = self.factors.iter().zip(loc).map(|(f, l)| f.least_chart(l)).collect();
        self.point_in(self.chart_id(&pairs), loc).expect("least chart contains the point")
    }

    pub fn normal_form(&self, p: &MasurePoint) -> Result<MasurePoint, AtlasError> {
        Ok(self.normal_form_of(&self.location(p)?))
    }

    pub fn same_point(&self, p: &MasurePoint, q: &MasurePoint) -> Result<bool, AtlasError> {
        Ok(self.location(p)? == self.location(q)?)
    }

    /// The least chart containing all of `locs` and the given end, per factor.
    pub fn chart_through(&self, locs: &[&[TreeLoc]], end: Option<&[usize]>) -> Result<usize, AtlasError> {
        let mut pairs = Vec::with_capacity(self.rank());
        for (k, f) in self.factors.iter().enumerate() {
            let ls: Vec<&TreeLoc> = locs.iter().map(|l| &l[k]).collect();
            let ends: Vec<usize> = end.map(|e| vec![e[k]]).unwrap_or_default();
            pairs.push(f.chart_through(&ls, &ends).ok_or(AtlasError::IncompleteAtlas)?);
        }
        Ok(self.chart_id(&pairs))
    }

    /// Every chart containing all of `locs`, in increasing id order.
    pub fn charts_through(&self, locs: &[&[TreeLoc]]) -> Vec<usize> {
        let per: Vec<Vec<(usize, usize)>> = self
            .factors
            .iter()
            .enumerate()
            .map(|(k, f)| f.charts_through(&locs.iter().map(|l| &l[k]).collect::<Vec<_>>()))
            .collect();
        let mut out = vec![Vec::new()];
        for p in &per {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<(usize, usize)>| {
                    p.iter().map(move |&ab| {
                        let mut v = prefix.clone();
                        v.push(ab);
                        v
                    })
                })
                .collect();
        }
        let mut ids: Vec<usize> = out.iter().map(|pairs| self.chart_id(pairs)).collect();
        ids.sort_unstable();
        ids
    }

    fn factor_gluings(&self, from: usize, to: usize) -> Option<Vec<FactorGluing>> {
        let (a, b) = (self.chart_pairs(from), self.chart_pairs(to));
        self.factors.iter().zip(a.iter().zip(&b)).map(|(f, (&x, &y))| f.transition(x, y)).collect()
    }

    /// The transition from one chart to another on their intersection.
    pub fn transition(&self, from: usize, to: usize) -> Option<Gluing> {
        let parts = self.factor_gluings(from, to)?;
        let re = self.realization();
        let word: Vec<usize> = parts.iter().enumerate().filter(|(_, g)| g.flip).map(|(k, _)| k).collect();
        // in the default realization of A1^k, coroot k is 2·e_k and s_k negates coordinate k
        let map = AffineMap { linear: GroupElement::from_word(re, &word), translation: parts.iter().map(|g| g.shift.clone()).collect() };
        let model = &self.model;
        let mut domain = EnclosureRep::everything(model);
        for (k, g) in parts.iter().enumerate() {
            let mut e = vec![0; self.rank()];
            e[k] = 1;
            domain.levels[model.root_index(&e).unwrap()] = g.lo.as_ref().map(|l| -l);
            e[k] = -1;
            domain.levels[model.root_index(&e).unwrap()] = g.hi.clone();
        }
        Some(Gluing { map, domain })
    }

    /// Moves a point into another chart by its location.
    pub fn transport(&self, p: &MasurePoint, to: usize) -> Result<Option<MasurePoint>, AtlasError> {
        Ok(self.point_in(to, &self.location(p)?))
    }

    /// Window vertices: tuples of tree vertices, in lexicographic order.
    pub fn vertices(&self) -> Vec<Location> {
        let mut out: Vec<Location> = vec![Vec::new()];
        for f in &self.factors {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..f.vertex_count()).map(move |v| {
                        let mut l = prefix.clone();
                        l.push(TreeLoc::Vertex(v));
                        l
                    })
                })
                .collect();
        }
        out
    }

    /// Ends of a chart: per factor `(a, b)`, with `b` in the positive direction.
    pub fn chart_ends(&self, chart: usize) -> (End, End) {
        let pairs = self.chart_pairs(chart);
        (pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1).collect())
    }

    /// All ends, in lexicographic order.
    pub fn ends(&self) -> Vec<End> {
        let mut out: Vec<End> = vec![Vec::new()];
        for f in &self.factors {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..f.leaf_count()).map(move |l| {
                        let mut e = prefix.clone();
                        e.push(l);
                        e
                    })
                })
                .collect();
        }
        out
    }

    /// Direction of an end in a chart containing it: `±1` per factor.
    pub fn end_direction(&self, chart: usize, end: &[usize]) -> Result<Vec<Q>, AtlasError> {
        self.chart_pairs(chart)
            .iter()
            .zip(end)
            .map(|(&(a, b), &e)| {
                if e == b {
                    Ok(int(1))
                } else if e == a {
                    Ok(int(-1))
                } else {
                    Err(AtlasError::NotAnEnd(e, chart))
                }
            })
            .collect()
    }

    /// The least chart having every listed end (per factor) among its ends.
    pub fn chart_with_ends(&self, ends: &[&[usize]]) -> Result<usize, AtlasError> {
        let mut pairs = Vec::with_capacity(self.rank());
        for (k, f) in self.factors.iter().enumerate() {
            let mut es: Vec<usize> = ends.iter().map(|e| e[k]).collect();
            es.sort_unstable();
            es.dedup();
            pairs.push(f.chart_through(&[], &es).ok_or(AtlasError::IncompleteAtlas)?);
        }
        Ok(self.chart_id(&pairs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use coxeter_core::rational::frac;

    #[test]
    fn sizes() {
        assert_eq!(TreeAtlas::tree(2, 1).unwrap().chart_count(), 3);
        assert_eq!(TreeAtlas::tree(1, 4).unwrap().chart_count(), 1);
        assert_eq!(TreeAtlas::product(2, 2, 2).unwrap().chart_count(), 225);
        assert_eq!(TreeAtlas::new(&[(2, 6)], 100).unwrap_err(), AtlasError::TooLarge(4560, 100));
        assert_eq!(TreeAtlas::tree(0, 3).unwrap_err(), AtlasError::BadShape);
    }

    #[test]
    fn normal_forms_identify_points() {
        let at = TreeAtlas::product(2, 2, 2).unwrap();
        for chart in (0..at.chart_count()).step_by(7) {
            let p = MasurePoint { chart, coords: vec![frac(1, 2), int(-1)] };
            let nf = at.normal_form(&p).unwrap();
            assert!(nf.chart <= chart);
            assert!(at.same_point(&p, &nf).unwrap());
            assert_eq!(at.normal_form(&nf).unwrap(), nf);
        }
    }

    #[test]
    fn transitions_are_affine_weyl_maps() {
        let at = TreeAtlas::product(2, 2, 1).unwrap();
        let re = at.realization();
        for i in 0..at.chart_count() {
            for j in 0..at.chart_count() {
                let Some(g) = at.transition(i, j) else { continue };
                assert!(at.model().translation_preserves_walls(&g.map.translation));
                let p = MasurePoint { chart: i, coords: vec![int(-1), frac(-1, 3)] };
                if at.model().contains(&g.domain, &p.coords) {
                    let img = MasurePoint { chart: j, coords: g.map.apply(&p.coords) };
                    assert!(at.same_point(&p, &img).unwrap());
                }
                let back = at.transition(j, i).unwrap();
                assert!(back.map.compose(re, &g.map).is_identity());
            }
        }
    }
}
