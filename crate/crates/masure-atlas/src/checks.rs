use crate::atlas::{Gluing, Location, MasurePoint, TreeAtlas};
use crate::tree::TreeLoc;
use apartment::{Chimney, EnclosureRep, LocalFacet};
use coxeter_core::linalg::{add, lerp, scale};
use coxeter_core::rational::{frac, int, Q};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use tits_cone::{FacetAddress, Sign};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckBounds {
    pub height: i64,
    pub partners_per_chart: usize,
    pub charts_per_pair: usize,
    pub segment_samples: usize,
    pub seed: u64,
}

impl Default for CheckBounds {
    fn default() -> Self {
        CheckBounds { height: 4, partners_per_chart: 6, charts_per_pair: 8, segment_samples: 16, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub axiom: String,
    pub checked: usize,
    pub verified: usize,
    pub inconclusive: usize,
    pub counterexamples: Vec<String>,
    pub bounds: CheckBounds,
}

impl AxiomReport {
    pub fn new(axiom: &str, bounds: &CheckBounds) -> Self {
        AxiomReport {
            axiom: axiom.to_string(),
            checked: 0,
            verified: 0,
            inconclusive: 0,
            counterexamples: Vec::new(),
            bounds: bounds.clone(),
        }
    }

    /// A case the bounded search could not decide.
    pub fn record_inconclusive(&mut self) {
        self.checked += 1;
        self.inconclusive += 1;
    }

    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if ok {
            self.verified += 1;
        } else if self.counterexamples.len() < 20 {
            self.counterexamples.push(what());
        } else {
            self.counterexamples.truncate(20);
        }
    }

    /// No counterexample; inconclusive cases do not count against it.
    pub fn passed(&self) -> bool {
        self.checked == self.verified + self.inconclusive
    }

    pub fn violations(&self) -> usize {
        self.checked - self.verified - self.inconclusive
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThicknessReport {
    pub factor: usize,
    /// Number of chamber germs at each interior vertex.
    pub interior: BTreeMap<usize, usize>,
    pub leaves: BTreeMap<usize, usize>,
    pub expected: usize,
}

impl ThicknessReport {
    pub fn passed(&self) -> bool {
        self.interior.values().all(|&c| c == self.expected)
    }
}

impl TreeAtlas {
    /// Charts to compare with `chart`: random ones, and ones sharing an end
    /// with it in every factor.
    fn partners(&self, chart: usize, count: usize, seed: u64) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (chart as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let own = self.chart_pairs(chart);
        let mut out = BTreeSet::new();
        for k in 0..count {
            let pairs: Vec<(usize, usize)> = self
                .factors()
                .iter()
                .zip(&own)
                .map(|(f, &(a, b))| {
                    let l = f.leaf_count();
                    if l == 2 {
                        return (0, 1);
                    }
                    if k % 2 == 0 {
                        f.pair(rng.gen_range(0..f.chart_count()))
                    } else {
                        let keep = if rng.gen_bool(0.5) { a } else { b };
                        let mut c = rng.gen_range(0..l - 1);
                        if c >= keep {
                            c += 1;
                        }
                        if c < keep {
                            (c, keep)
                        } else {
                            (keep, c)
                        }
                    }
                })
                .collect();
            out.insert(self.chart_id(&pairs));
        }
        out.insert(chart);
        out.into_iter().collect()
    }

    /// Per-factor sample coordinates inside `[lo, hi]` of a gluing domain:
    /// the ends, the middle vertex and an edge midpoint.
    fn domain_samples(&self, chart: usize, g: &Gluing) -> Vec<Vec<Q>> {
        let pairs = self.chart_pairs(chart);
        let per: Vec<Vec<Q>> = self
            .factors()
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let mut e = vec![0; self.rank()];
                e[k] = 1;
                let lo = g.domain.level(self.model().root_index(&e).unwrap()).map(|l| -l);
                e[k] = -1;
                let hi = g.domain.level(self.model().root_index(&e).unwrap()).cloned();
                let path = f.path(pairs[k]);
                let bottom = -(f.depth() as i64);
                let top = bottom + path.len() as i64 - 1;
                let lo = lo.unwrap_or(int(bottom - 1));
                let hi = hi.unwrap_or(int(top + 1));
                let mid = ((&lo + &hi) / int(2)).floor();
                let mut s: BTreeSet<Q> = BTreeSet::from([lo.clone(), hi.clone(), mid.clone()]);
                if hi > lo {
                    s.insert(&lo + frac(1, 2));
                }
                s.into_iter().collect()
            })
            .collect();
        cartesian(&per)
    }

    fn fixes(&self, from: usize, to: usize, g: &Gluing, x: &[Q]) -> bool {
        let p = MasurePoint { chart: from, coords: x.to_vec() };
        let q = MasurePoint { chart: to, coords: g.map.apply(x) };
        self.same_point(&p, &q).unwrap_or(false)
    }

    fn box_corners(&self, e: &EnclosureRep) -> Option<Vec<Vec<Q>>> {
        let per: Option<Vec<Vec<Q>>> = (0..self.rank())
            .map(|k| {
                let mut r = vec![0; self.rank()];
                r[k] = 1;
                let lo = -e.level(self.model().root_index(&r).unwrap())?.clone();
                r[k] = -1;
                let hi = e.level(self.model().root_index(&r).unwrap())?.clone();
                Some(vec![lo, hi])
            })
            .collect();
        per.map(|p| cartesian(&p))
    }

    /// (MA2) for points, segment germs and generic rays in sampled chart pairs:
    /// the enclosure lies in the intersection and the transition fixes it.
    pub fn check_ma2(&self, bounds: &CheckBounds) -> AxiomReport {
        let mut rep = AxiomReport::new("MA2", bounds);
        let model = self.model();
        let re = self.realization();
        for a in 0..self.chart_count() {
            for b in self.partners(a, bounds.partners_per_chart, bounds.seed) {
                let Some(g) = self.transition(a, b) else { continue };
                for x in self.domain_samples(a, &g) {
                    if !model.contains(&g.domain, &x) {
                        continue;
                    }
                    // the point
                    let cl = model.enclose(&[x.clone()]).unwrap();
                    let corners = self.box_corners(&cl).unwrap();
                    let ok = cl.is_subset(&g.domain) && corners.iter().all(|c| self.fixes(a, b, &g, c));
                    rep.record(ok, || format!("point {x:?} in charts {a} -> {b}"));
                    if !x.iter().all(|c| c.is_integer()) {
                        continue;
                    }
                    // segment germs and rays leaving x along each factor
                    for k in 0..self.rank() {
                        for s in [-1, 1] {
                            let mut d = vec![Q::from_integer(0.into()); self.rank()];
                            d[k] = int(s);
                            let y = add(&x, &scale(&frac(1, 4), &d));
                            if !model.contains(&g.domain, &y) {
                                continue;
                            }
                            let cl = model.enclose(&[x.clone(), y]).unwrap();
                            let ok = cl.is_subset(&g.domain)
                                && self.box_corners(&cl).unwrap().iter().all(|c| self.fixes(a, b, &g, c));
                            rep.record(ok, || format!("segment germ at {x:?} dir {d:?} in {a} -> {b}"));
                            let far = add(&x, &scale(&int(1000), &d));
                            if !model.contains(&g.domain, &far) {
                                continue;
                            }
                            let dir = sector_direction(re, &d);
                            let ray = Chimney { base: LocalFacet::vertex(re, x.clone()), direction: dir };
                            let ok = ray.enclosure(model).is_subset(&g.domain)
                                && [0, 1, 7, 1000].iter().all(|&t| self.fixes(a, b, &g, &add(&x, &scale(&int(t), &d))));
                            rep.record(ok, || format!("ray from {x:?} dir {d:?} in {a} -> {b}"));
                        }
                    }
                }
            }
        }
        rep
    }

    /// (MA4) for a sector germ `R` shared by two charts and a point `F` in
    /// both: the chart-wise enclosure of `F ∪ R` lies in the intersection and
    /// the transition fixes it.
    pub fn check_ma4(&self, bounds: &CheckBounds) -> AxiomReport {
        let mut rep = AxiomReport::new("MA4", bounds);
        let model = self.model();
        let re = self.realization();
        for a in 0..self.chart_count() {
            let (lo_end, hi_end) = self.chart_ends(a);
            for mask in 0..(1usize << self.rank()) {
                let end: Vec<usize> =
                    (0..self.rank()).map(|k| if mask >> k & 1 == 1 { hi_end[k] } else { lo_end[k] }).collect();
                let d = self.end_direction(a, &end).unwrap();
                let dir = sector_direction(re, &d);
                for b in self.partners(a, bounds.partners_per_chart, bounds.seed) {
                    if self.end_direction(b, &end).is_err() {
                        continue;
                    }
                    let Some(g) = self.transition(a, b) else {
                        rep.record(false, || format!("charts {a}, {b} share the end {end:?} but do not meet"));
                        continue;
                    };
                    for x in self.domain_samples(a, &g) {
                        if !model.contains(&g.domain, &x) {
                            continue;
                        }
                        let ch = Chimney { base: LocalFacet::vertex(re, x.clone()), direction: dir.clone() };
                        let ok = ch.enclosure(model).is_subset(&g.domain)
                            && [0, 1, 3, 17].iter().all(|&t| self.fixes(a, b, &g, &add(&x, &scale(&int(t), &d))));
                        rep.record(ok, || format!("germ {end:?} with point {x:?} in {a} -> {b}"));
                    }
                }
            }
        }
        rep
    }

    /// (MAO) segments between two points agree in every chart containing both
    /// (at most `charts_per_pair` charts, evenly spread, per pair).
    pub fn check_mao(&self, pairs: &[(Location, Location)], bounds: &CheckBounds) -> AxiomReport {
        let mut rep = AxiomReport::new("MAO", bounds);
        let n = bounds.segment_samples as i64;
        for (x, y) in pairs {
            let charts = self.charts_through(&[x, y]);
            if charts.is_empty() {
                rep.record_inconclusive();
                continue;
            }
            let picked = spread(&charts, bounds.charts_per_pair);
            let samples = |c: usize| -> Vec<Location> {
                let px = self.point_in(c, x).unwrap().coords;
                let py = self.point_in(c, y).unwrap().coords;
                (0..=n)
                    .map(|k| self.location(&MasurePoint { chart: c, coords: lerp(&px, &py, &frac(k, n)) }).unwrap())
                    .collect()
            };
            let reference = samples(picked[0]);
            for &c in &picked[1..] {
                rep.record(samples(c) == reference, || format!("segment {x:?}..{y:?} differs in charts {} and {c}", picked[0]));
            }
            if picked.len() == 1 {
                rep.record(true, String::new);
            }
        }
        rep
    }

    /// Chamber germs at each window vertex of one factor, read off the charts.
    pub fn thickness(&self, factor: usize) -> ThicknessReport {
        let f = &self.factors()[factor];
        let mut germs: BTreeMap<usize, BTreeSet<TreeLoc>> = BTreeMap::new();
        for id in 0..f.chart_count() {
            let ab = f.pair(id);
            let bottom = -(f.depth() as i64);
            for (i, v) in f.path(ab).into_iter().enumerate() {
                let x = int(bottom + i as i64);
                let set = germs.entry(v).or_default();
                for s in [frac(-1, 4), frac(1, 4)] {
                    set.insert(f.locate(ab, &(&x + s)));
                }
            }
        }
        let mut interior = BTreeMap::new();
        let mut leaves = BTreeMap::new();
        for (v, s) in germs {
            if f.is_leaf(v) {
                leaves.insert(v, s.len());
            } else {
                interior.insert(v, s.len());
            }
        }
        ThicknessReport { factor, interior, leaves, expected: f.q() + 1 }
    }

    /// Transitions compose along triples of charts with a common point.
    pub fn check_cocycle(&self, samples: usize, bounds: &CheckBounds) -> AxiomReport {
        let mut rep = AxiomReport::new("cocycle", bounds);
        let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
        let verts = self.vertices();
        for _ in 0..samples {
            let v = &verts[rng.gen_range(0..verts.len())];
            let charts = self.charts_through(&[v]);
            let pick: Vec<usize> = (0..3).map(|_| charts[rng.gen_range(0..charts.len())]).collect();
            let (a, b, c) = (pick[0], pick[1], pick[2]);
            let (gab, gbc, gac) = (self.transition(a, b), self.transition(b, c), self.transition(a, c));
            let (Some(gab), Some(gbc), Some(gac)) = (gab, gbc, gac) else {
                rep.record(false, || format!("charts {a}, {b}, {c} through {v:?} are not glued"));
                continue;
            };
            let x = self.point_in(a, v).unwrap().coords;
            rep.record(gbc.map.apply(&gab.map.apply(&x)) == gac.map.apply(&x), || {
                format!("cycle {a} -> {b} -> {c} at {v:?}")
            });
        }
        rep
    }

    /// Two charts meeting in a half-line: the halves they do not share form a chart.
    pub fn check_half_apartment_gluing(&self, factor: usize, bounds: &CheckBounds) -> AxiomReport {
        let mut rep = AxiomReport::new("half-apartment gluing", bounds);
        let f = &self.factors()[factor];
        let l = f.leaf_count();
        for a in 0..l {
            for b in 0..l {
                for c in b + 1..l {
                    if a == b || a == c {
                        continue;
                    }
                    let (ab, ac) = (ordered(a, b), ordered(a, c));
                    let g = f.transition(ab, ac).expect("charts sharing an end meet");
                    // the shared part is the half-line toward a
                    let half_line = if a == ab.0 { g.lo.is_none() && g.hi.is_some() } else { g.hi.is_none() && g.lo.is_some() };
                    let split = if a == ab.0 { g.hi.clone() } else { g.lo.clone() };
                    if !half_line {
                        rep.record(false, || format!("charts {ab:?}, {ac:?} do not meet in a half-line"));
                        continue;
                    }
                    let split = split.unwrap();
                    let bc = ordered(b, c);
                    let mut ok = true;
                    for (chart, far, start) in [(ab, b, split.clone()), (ac, c, g.apply(&split))] {
                        let toward = if far == chart.1 { 1 } else { -1 };
                        for k in 0..=4 * (f.depth() as i64) + 8 {
                            let x = &start + int(toward) * frac(k, 2);
                            ok &= f.contains(bc, &f.locate(chart, &x));
                        }
                    }
                    rep.record(ok, || format!("halves of {ab:?} and {ac:?} are not the chart {bc:?}"));
                }
            }
        }
        rep
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The positive facet of `A1^k` containing a vector with entries in `{-1, 0, 1}`.
pub fn sector_direction(re: &coxeter_core::Realization, d: &[Q]) -> FacetAddress {
    let word: Vec<usize> = d.iter().enumerate().filter(|(_, x)| **x < int(0)).map(|(k, _)| k).collect();
    let j: Vec<usize> = d.iter().enumerate().filter(|(_, x)| x.is_zero()).map(|(k, _)| k).collect();
    FacetAddress { sign: Sign::Plus, w: coxeter_core::GroupElement::from_word(re, &word), j }
}

pub(crate) fn cartesian(per: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> = vec![Vec::new()];
    for p in per {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                p.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// At most `k` items including the first and last, evenly spaced.
fn spread(items: &[usize], k: usize) -> Vec<usize> {
    if items.len() <= k {
        return items.to_vec();
    }
    if k < 2 {
        return items[..k].to_vec();
    }
    (0..k).map(|i| items[i * (items.len() - 1) / (k - 1)]).collect()
}
