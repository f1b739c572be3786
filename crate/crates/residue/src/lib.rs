//! The residue of a tree atlas at a point.
//!
//! A chamber germ at `x` is the germ of a local chamber with vertex `x`. It is
//! recorded by the location of a probe at `x + d/4` in some chart, where `d`
//! has entries `±1`. In the restricted structure only the factors with a wall
//! through `x` are moved; the others keep the coordinate of `x`. A germ of sign
//! `ε` in direction `d` is `x + ε w C^v_f` with `ε d ∈ w C^v_f`.

use coxeter_core::rational::{frac, Q};
use coxeter_core::GroupElement;
use infinity::{check_distance_table, check_twin_tables, TwinTables, TwinningReport};
use masure_atlas::{AtlasError, AxiomReport, CheckBounds, Location, MasurePoint, TreeAtlas};
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;
use tits_cone::Sign;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResidueError {
    #[error(transparent)]
    Atlas(#[from] AtlasError),
    #[error("chamber germs of signs {0:?} and {1:?} do not fit this distance")]
    Signs(Sign, Sign),
    #[error("no chamber germ {0} at this point")]
    UnknownChamber(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    Restricted,
    NonRestricted,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChamberGerm {
    pub sign: Sign,
    /// Index into [`Residue::probes`].
    pub index: usize,
}

#[derive(Clone, Debug)]
pub struct Residue<'a> {
    atlas: &'a TreeAtlas,
    x: Location,
    mode: Mode,
    walled: Vec<usize>,
    probes: Vec<Location>,
    per_chart: BTreeMap<usize, usize>,
}

fn quarter() -> Q {
    frac(1, 4)
}

/// Enumerates the chamber germs at `x` over every chart through it.
pub fn residue_at<'a>(at: &'a TreeAtlas, x: &MasurePoint, mode: Mode) -> Result<Residue<'a>, ResidueError> {
    let loc = at.location(x)?;
    let charts = at.charts_through(&[&loc]);
    // walls are integer coordinates, in any chart
    let walled: Vec<usize> = (0..at.rank()).filter(|&k| x.coords[k].is_integer()).collect();
    let active: Vec<usize> = match mode {
        Mode::Restricted => walled.clone(),
        Mode::NonRestricted => (0..at.rank()).collect(),
    };
    let mut probes = BTreeSet::new();
    let mut per_chart = BTreeMap::new();
    for &c in &charts {
        let p = at.point_in(c, &loc).expect("chart passes through x");
        let mut here = BTreeSet::new();
        for bits in 0..1usize << active.len() {
            let mut y = p.coords.clone();
            for (i, &k) in active.iter().enumerate() {
                let step = if bits >> i & 1 == 1 { -quarter() } else { quarter() };
                y[k] += step;
            }
            let l = at.location(&MasurePoint { chart: c, coords: y })?;
            here.insert(l.clone());
            probes.insert(l);
        }
        per_chart.insert(c, here.len());
    }
    Ok(Residue { atlas: at, x: loc, mode, walled, probes: probes.into_iter().collect(), per_chart })
}

impl<'a> Residue<'a> {
    pub fn atlas(&self) -> &'a TreeAtlas {
        self.atlas
    }

    pub fn point(&self) -> &Location {
        &self.x
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Indices of the simple reflections in `S_x`.
    pub fn s_x(&self) -> &[usize] {
        &self.walled
    }

    /// Generators of the group the distances take values in.
    pub fn generators(&self) -> Vec<usize> {
        match self.mode {
            Mode::Restricted => self.walled.clone(),
            Mode::NonRestricted => (0..self.atlas.rank()).collect(),
        }
    }

    /// `|W^v_x|`; the factors of `S_x` commute.
    pub fn group_order(&self) -> usize {
        1 << self.walled.len()
    }

    pub fn probes(&self) -> &[Location] {
        &self.probes
    }

    /// Chamber germs of one sign, in probe order.
    pub fn chambers(&self, sign: Sign) -> Vec<ChamberGerm> {
        (0..self.probes.len()).map(|index| ChamberGerm { sign, index }).collect()
    }

    /// Number of chamber germs of one sign seen by each chart through `x`.
    pub fn chambers_per_chart(&self) -> &BTreeMap<usize, usize> {
        &self.per_chart
    }

    fn probe(&self, c: &ChamberGerm) -> Result<&Location, ResidueError> {
        self.probes.get(c.index).ok_or(ResidueError::UnknownChamber(c.index))
    }

    /// Charts through `x` and the probes of all given germs.
    pub fn common_charts(&self, cs: &[&ChamberGerm]) -> Result<Vec<usize>, ResidueError> {
        let mut locs: Vec<&[masure_atlas::TreeLoc]> = vec![&self.x];
        for c in cs {
            locs.push(self.probe(c)?);
        }
        Ok(self.atlas.charts_through(&locs))
    }

    /// `w` with `C = x + ε w C^v_f` in `chart`.
    pub fn element_in(&self, chart: usize, c: &ChamberGerm) -> Result<GroupElement, ResidueError> {
        let re = self.atlas.realization();
        let p = self.atlas.point_in(chart, &self.x).ok_or(AtlasError::IncompleteAtlas)?;
        let y = self.atlas.point_in(chart, self.probe(c)?).ok_or(AtlasError::IncompleteAtlas)?;
        let word: Vec<usize> = (0..self.atlas.rank())
            .filter(|&k| {
                let d = &y.coords[k] - &p.coords[k];
                !d.is_zero() && (d.is_negative() == (c.sign == Sign::Plus))
            })
            .collect();
        Ok(GroupElement::from_word(re, &word))
    }

    fn relative(&self, chart: usize, c1: &ChamberGerm, c2: &ChamberGerm) -> Result<GroupElement, ResidueError> {
        let re = self.atlas.realization();
        Ok(self.element_in(chart, c1)?.inverse(re).mul(re, &self.element_in(chart, c2)?))
    }

    /// `w⁻¹ w'` in the least chart containing both germs.
    pub fn relative_position(&self, c1: &ChamberGerm, c2: &ChamberGerm) -> Result<GroupElement, ResidueError> {
        let chart = *self.common_charts(&[c1, c2])?.first().ok_or(AtlasError::IncompleteAtlas)?;
        self.relative(chart, c1, c2)
    }

    /// The distance of two germs of the same sign.
    pub fn distance(&self, c1: &ChamberGerm, c2: &ChamberGerm) -> Result<GroupElement, ResidueError> {
        if c1.sign != c2.sign {
            return Err(ResidueError::Signs(c1.sign, c2.sign));
        }
        self.relative_position(c1, c2)
    }

    /// The codistance of two germs of opposite signs.
    pub fn codistance(&self, c1: &ChamberGerm, c2: &ChamberGerm) -> Result<GroupElement, ResidueError> {
        if c1.sign == c2.sign {
            return Err(ResidueError::Signs(c1.sign, c2.sign));
        }
        self.relative_position(c1, c2)
    }

    pub fn chart_independent(&self, c1: &ChamberGerm, c2: &ChamberGerm) -> Result<bool, ResidueError> {
        let charts = self.common_charts(&[c1, c2])?;
        let Some((&first, rest)) = charts.split_first() else {
            return Err(AtlasError::IncompleteAtlas.into());
        };
        let w = self.relative(first, c1, c2)?;
        for &c in rest {
            if self.relative(c, c1, c2)? != w {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn label(&self, c: &ChamberGerm) -> String {
        let parts: Vec<String> = self.probes[c.index].iter().map(ToString::to_string).collect();
        format!("{}{}", if c.sign == Sign::Plus { "+" } else { "-" }, parts.join(","))
    }

    fn table(&self, a: Sign, b: Sign) -> Result<Vec<Vec<GroupElement>>, ResidueError> {
        let (ca, cb) = (self.chambers(a), self.chambers(b));
        ca.iter().map(|x| cb.iter().map(|y| self.relative_position(x, y)).collect()).collect()
    }

    pub fn tables(&self) -> Result<TwinTables, ResidueError> {
        let labels = |s| self.chambers(s).iter().map(|c| self.label(c)).collect();
        Ok(TwinTables {
            plus: labels(Sign::Plus),
            minus: labels(Sign::Minus),
            star_pm: self.table(Sign::Plus, Sign::Minus)?,
            star_mp: self.table(Sign::Minus, Sign::Plus)?,
            d_plus: self.table(Sign::Plus, Sign::Plus)?,
            d_minus: self.table(Sign::Minus, Sign::Minus)?,
        })
    }

    pub fn check_twinning(&self, bounds: &CheckBounds) -> Result<TwinningReport, ResidueError> {
        Ok(check_twin_tables(self.atlas.realization(), &self.generators(), &self.tables()?, bounds))
    }

    /// The `W`-distance axioms on each sign.
    pub fn check_distances(&self, bounds: &CheckBounds) -> Result<Vec<AxiomReport>, ResidueError> {
        let t = self.tables()?;
        let re = self.atlas.realization();
        let gens = self.generators();
        Ok(vec![
            check_distance_table(re, &gens, "residue distance +", &t.plus, &t.d_plus, bounds),
            check_distance_table(re, &gens, "residue distance -", &t.minus, &t.d_minus, bounds),
        ])
    }

    /// Any two germs of the same sign lie in a common chart, which all give
    /// the same distance.
    pub fn check_common_charts(&self, bounds: &CheckBounds) -> Result<AxiomReport, ResidueError> {
        let mut rep = AxiomReport::new("common chart", bounds);
        let cs = self.chambers(Sign::Plus);
        for a in &cs {
            for b in &cs {
                let ok = !self.common_charts(&[a, b])?.is_empty() && self.chart_independent(a, b)?;
                rep.record(ok, || format!("{} {}", self.label(a), self.label(b)));
            }
        }
        Ok(rep)
    }

    /// Every chart sees `|W^v_x|` restricted germs of each sign.
    pub fn check_simply_transitive(&self, bounds: &CheckBounds) -> AxiomReport {
        let mut rep = AxiomReport::new("restricted count", bounds);
        let n = match self.mode {
            Mode::Restricted => self.group_order(),
            Mode::NonRestricted => 1 << self.atlas.rank(),
        };
        for (&c, &k) in &self.per_chart {
            rep.record(k == n, || format!("chart {c}: {k} germs, expected {n}"));
        }
        rep
    }

    /// For negative `C`, `C⁻` and positive `C⁺` opposite `C⁻`: the retraction
    /// centred at `C` sends `C⁺` to `-w⁺C` and `C⁻` to `w⁻C` with
    /// `w⁺ = d_*(C, C⁺)`, `w⁻ = d_−(C, C⁻)`, and `w⁺ ≤ w⁻`.
    pub fn check_retraction_order(&self, bounds: &CheckBounds) -> Result<AxiomReport, ResidueError> {
        let re = self.atlas.realization();
        let t = self.tables()?;
        let mut rep = AxiomReport::new("w+ <= w-", bounds);
        let n = self.probes.len();
        for c in 0..n {
            for cm in 0..n {
                for cp in 0..n {
                    if !t.star_mp[cm][cp].is_identity() {
                        continue;
                    }
                    let w_plus = &t.star_mp[c][cp];
                    let w_minus = &t.d_minus[c][cm];
                    rep.record(GroupElement::bruhat_leq(re, w_plus, w_minus), || {
                        let lbl = |i: usize, s| self.label(&ChamberGerm { sign: s, index: i });
                        format!("C={} C-={} C+={}: {:?} vs {:?}", lbl(c, Sign::Minus), lbl(cm, Sign::Minus), lbl(cp, Sign::Plus), w_plus.word(), w_minus.word())
                    });
                }
            }
        }
        Ok(rep)
    }

    pub fn report(&self, bounds: &CheckBounds) -> Result<ResidueReport, ResidueError> {
        let re = self.atlas.realization();
        let t = self.tables()?;
        let words = |m: &Vec<Vec<GroupElement>>| -> Vec<Vec<Vec<String>>> {
            m.iter().map(|row| row.iter().map(|w| w.labels(re)).collect()).collect()
        };
        let twinning = self.check_twinning(bounds)?;
        let mut checks = self.check_distances(bounds)?;
        checks.push(self.check_common_charts(bounds)?);
        checks.push(self.check_simply_transitive(bounds));
        checks.push(self.check_retraction_order(bounds)?);
        Ok(ResidueReport {
            point: self.x.iter().map(ToString::to_string).collect(),
            mode: self.mode,
            s_x: self.walled.iter().map(|&k| re.datum().labels()[k].clone()).collect(),
            chambers: t.plus.iter().map(|l| l[1..].to_string()).collect(),
            distance_plus: words(&t.d_plus),
            distance_minus: words(&t.d_minus),
            codistance: words(&t.star_pm),
            twinning,
            checks,
        })
    }
}

/// The JSON residue report. Group elements are words of generator labels.
#[derive(Clone, Debug, Serialize)]
pub struct ResidueReport {
    pub point: Vec<String>,
    pub mode: Mode,
    pub s_x: Vec<String>,
    pub chambers: Vec<String>,
    pub distance_plus: Vec<Vec<Vec<String>>>,
    pub distance_minus: Vec<Vec<Vec<String>>>,
    pub codistance: Vec<Vec<Vec<String>>>,
    pub twinning: TwinningReport,
    pub checks: Vec<AxiomReport>,
}

impl ResidueReport {
    pub fn passed(&self) -> bool {
        self.twinning.passed() && self.checks.iter().all(AxiomReport::passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use coxeter_core::rational::int;

    fn at_vertex(_at: &TreeAtlas, chart: usize, coords: &[i64]) -> MasurePoint {
        MasurePoint { chart, coords: coords.iter().map(|&c| int(c)).collect() }
    }

    #[test]
    fn tree_vertex_has_three_chambers() {
        let at = TreeAtlas::tree(2, 3).unwrap();
        // the centre of chart (0, 11) is the root
        let r = residue_at(&at, &at_vertex(&at, at.chart_id(&[(0, 11)]), &[0]), Mode::Restricted).unwrap();
        assert_eq!(r.probes().len(), 3);
        assert_eq!(r.s_x(), &[0]);
        assert_eq!(r.group_order(), 2);
        let cs = r.chambers(Sign::Plus);
        let s = GroupElement::simple(at.realization(), 0);
        for a in &cs {
            for b in &cs {
                let d = r.distance(a, b).unwrap();
                assert_eq!(d, if a == b { GroupElement::identity(at.realization()) } else { s.clone() });
            }
        }
    }

    #[test]
    fn edge_point_has_trivial_restricted_group() {
        let at = TreeAtlas::tree(2, 3).unwrap();
        let x = MasurePoint { chart: 0, coords: vec![frac(1, 2)] };
        let r = residue_at(&at, &x, Mode::Restricted).unwrap();
        assert!(r.s_x().is_empty());
        assert_eq!(r.probes().len(), 1);
        let nr = residue_at(&at, &x, Mode::NonRestricted).unwrap();
        assert_eq!(nr.probes().len(), 2);
        let c = nr.chambers(Sign::Plus);
        assert_eq!(nr.distance(&c[0], &c[1]).unwrap().length(), 1);
    }

    #[test]
    fn product_vertex_is_a_product() {
        let at = TreeAtlas::product(2, 2, 2).unwrap();
        let c = at.chart_id(&[(0, 5), (0, 5)]);
        let r = residue_at(&at, &at_vertex(&at, c, &[0, 0]), Mode::Restricted).unwrap();
        assert_eq!(r.probes().len(), 9);
        assert_eq!(r.s_x(), &[0, 1]);
        let cs = r.chambers(Sign::Minus);
        // distances are factorwise
        let mut lengths = BTreeMap::new();
        for b in &cs {
            *lengths.entry(r.distance(&cs[0], b).unwrap().length()).or_insert(0) += 1;
        }
        assert_eq!(lengths, BTreeMap::from([(0, 1), (1, 4), (2, 4)]));
    }

    #[test]
    fn opposite_germs_in_a_chart_have_trivial_codistance() {
        let at = TreeAtlas::product(2, 2, 2).unwrap();
        let chart = at.chart_id(&[(1, 4), (2, 3)]);
        let x = at_vertex(&at, chart, &[-1, 0]);
        let r = residue_at(&at, &x, Mode::Restricted).unwrap();
        for c in r.chambers(Sign::Plus) {
            // the negative germ along the opposite direction of the same chart
            let y = at.point_in(chart, &r.probes()[c.index]);
            let Some(y) = y else { continue };
            let back: Vec<Q> = x.coords.iter().zip(&y.coords).map(|(a, b)| a + a - b).collect();
            let l = at.location(&MasurePoint { chart, coords: back }).unwrap();
            let index = r.probes().iter().position(|p| p == &l).unwrap();
            let d = r.codistance(&c, &ChamberGerm { sign: Sign::Minus, index }).unwrap();
            assert!(d.is_identity());
        }
    }

    #[test]
    fn sign_mismatch_is_an_error() {
        let at = TreeAtlas::tree(2, 2).unwrap();
        let r = residue_at(&at, &at_vertex(&at, 0, &[0]), Mode::Restricted).unwrap();
        let p = ChamberGerm { sign: Sign::Plus, index: 0 };
        assert!(matches!(r.distance(&p, &ChamberGerm { sign: Sign::Minus, index: 0 }), Err(ResidueError::Signs(..))));
        assert!(matches!(r.codistance(&p, &p), Err(ResidueError::Signs(..))));
        assert!(matches!(r.distance(&p, &ChamberGerm { sign: Sign::Plus, index: 9 }), Err(ResidueError::UnknownChamber(9))));
    }
}
