use crate::atlas::{AtlasError, End, Location, MasurePoint, TreeAtlas};
use crate::tree::TreeLoc;
use coxeter_core::linalg::{lerp, sub};
use coxeter_core::rational::{int, Q};
use coxeter_core::GroupElement;
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;
use tits_cone::Location as ConeLocation;

/// The germ of the sector of `chart` pointing to `end`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Center {
    pub chart: usize,
    pub end: End,
}

/// A breakpoint `z_i` of a retracted segment, with the minimal `w_±` such
/// that the outgoing germ lies in `z + w_+ C̄^v` and the incoming one in
/// `z - w_- C̄^v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fold {
    pub index: usize,
    pub w_plus: GroupElement,
    pub w_minus: GroupElement,
    pub positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldedSegment {
    pub chart: usize,
    pub points: Vec<Vec<Q>>,
    pub folds: Vec<Fold>,
    /// Consecutive breakpoints are `≤` in the target chart.
    pub increasing: bool,
}

impl FoldedSegment {
    pub fn positively_folded(&self) -> bool {
        self.folds.iter().all(|f| f.positive)
    }
}

impl TreeAtlas {
    fn check_center(&self, center: &Center) -> Result<(), AtlasError> {
        if center.chart >= self.chart_count() {
            return Err(AtlasError::NoChart(center.chart));
        }
        self.end_direction(center.chart, &center.end).map(|_| ())
    }

    /// `ρ(loc)` computed through `via`, which must contain `loc` and the center's end.
    pub fn retract_via(&self, center: &Center, loc: &[TreeLoc], via: usize) -> Option<Vec<Q>> {
        if !self.contains(via, loc) || self.end_direction(via, &center.end).is_err() {
            return None;
        }
        let p = self.point_in(via, loc)?;
        let g = self.transition(via, center.chart)?;
        Some(g.map.apply(&p.coords))
    }

    /// `ρ_{A,ξ}(loc)` in the coordinates of the center's chart.
    pub fn retract(&self, center: &Center, loc: &[TreeLoc]) -> Result<Vec<Q>, AtlasError> {
        self.check_center(center)?;
        let via = self.chart_through(&[loc], Some(&center.end))?;
        self.retract_via(center, loc, via).ok_or(AtlasError::IncompleteAtlas)
    }

    pub fn retract_point(&self, center: &Center, p: &MasurePoint) -> Result<MasurePoint, AtlasError> {
        let loc = self.location(p)?;
        Ok(MasurePoint { chart: center.chart, coords: self.retract(center, &loc)? })
    }

    /// Least chart containing both points, with their coordinates there.
    pub fn common_chart(&self, x: &[TreeLoc], y: &[TreeLoc]) -> Result<(usize, Vec<Q>, Vec<Q>), AtlasError> {
        let c = self.chart_through(&[x, y], None)?;
        let px = self.point_in(c, x).ok_or(AtlasError::IncompleteAtlas)?;
        let py = self.point_in(c, y).ok_or(AtlasError::IncompleteAtlas)?;
        Ok((c, px.coords, py.coords))
    }

    /// `x ≤ y`: `y - x ∈ T` in a chart containing both.
    pub fn global_leq(&self, x: &[TreeLoc], y: &[TreeLoc]) -> Result<bool, AtlasError> {
        let (_, px, py) = self.common_chart(x, y)?;
        self.model().cone().vec_leq(&px, &py).ok_or(AtlasError::IncompleteAtlas)
    }

    /// `x ≤ y` evaluated in every chart containing both; `None` if charts disagree.
    pub fn global_leq_everywhere(&self, x: &[TreeLoc], y: &[TreeLoc]) -> Option<bool> {
        let mut seen = BTreeSet::new();
        for c in self.charts_through(&[x, y]) {
            let px = self.point_in(c, x)?;
            let py = self.point_in(c, y)?;
            seen.insert(self.model().cone().vec_leq(&px.coords, &py.coords)?);
        }
        (seen.len() == 1).then(|| *seen.iter().next().unwrap())
    }

    /// The image of `[x, y]` under `ρ`, as a broken line with its folds.
    pub fn retract_segment(&self, center: &Center, x: &[TreeLoc], y: &[TreeLoc]) -> Result<FoldedSegment, AtlasError> {
        self.check_center(center)?;
        let (c0, px, py) = self.common_chart(x, y)?;
        let mut cuts: BTreeSet<Q> = BTreeSet::from([Q::zero(), int(1)]);
        for (a, b) in px.iter().zip(&py) {
            if a == b {
                continue;
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let mut n = lo.floor() + int(1);
            while &n < hi {
                cuts.insert((&n - a) / (b - a));
                n += int(1);
            }
        }
        let cuts: Vec<Q> = cuts.into_iter().collect();
        let at = |t: &Q| lerp(&px, &py, t);
        let loc_at = |t: &Q| -> Result<Location, AtlasError> { self.location(&MasurePoint { chart: c0, coords: at(t) }) };
        let mut images: Vec<Vec<Q>> = Vec::new();
        if px == py {
            images.push(self.retract(center, x)?);
        }
        for w in cuts.windows(2) {
            if px == py {
                break;
            }
            let mid = loc_at(&((&w[0] + &w[1]) / int(2)))?;
            let via = self.chart_through(&[&mid], Some(&center.end))?;
            let p0 = self.retract_via(center, &loc_at(&w[0])?, via).ok_or(AtlasError::IncompleteAtlas)?;
            let p1 = self.retract_via(center, &loc_at(&w[1])?, via).ok_or(AtlasError::IncompleteAtlas)?;
            if images.is_empty() {
                images.push(p0);
            }
            images.push(p1);
        }
        let points = merge_collinear(images);
        let cone = self.model().cone();
        let re = self.realization();
        let mut folds = Vec::new();
        for i in 1..points.len().saturating_sub(1) {
            let d_in = sub(&points[i], &points[i - 1]);
            let d_out = sub(&points[i + 1], &points[i]);
            let w_plus = chamber_element(cone.locate_positive(&d_out))?;
            let w_minus = chamber_element(cone.locate_positive(&d_in))?;
            let positive = GroupElement::bruhat_leq(re, &w_plus, &w_minus);
            folds.push(Fold { index: i, w_plus, w_minus, positive });
        }
        let increasing = points.windows(2).all(|w| cone.vec_leq(&w[0], &w[1]) == Some(true));
        Ok(FoldedSegment { chart: center.chart, points, folds, increasing })
    }
}

fn chamber_element(l: ConeLocation) -> Result<GroupElement, AtlasError> {
    l.facet().map(|f| f.w.clone()).ok_or(AtlasError::IncompleteAtlas)
}

/// Drops interior points where the direction does not change.
fn merge_collinear(points: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = Vec::new();
    for p in points {
        if out.last() == Some(&p) {
            continue;
        }
        if out.len() >= 2 {
            let n = out.len();
            let u = sub(&out[n - 1], &out[n - 2]);
            let v = sub(&p, &out[n - 1]);
            if same_ray(&u, &v) {
                out[n - 1] = p;
                continue;
            }
        }
        out.push(p);
    }
    out
}

fn same_ray(u: &[Q], v: &[Q]) -> bool {
    let Some(k) = u.iter().position(|x| !x.is_zero()) else { return false };
    let r = &v[k] / &u[k];
    r.is_positive() && u.iter().zip(v).all(|(a, b)| &(a * &r) == b)
}
