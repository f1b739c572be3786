//! Atlases given by explicit charts and gluing maps, with a text format.

use crate::atlas::{AtlasError, MasurePoint, TreeAtlas};
use crate::checks::{AxiomReport, CheckBounds};
use apartment::{AffineMap, ApartmentError, ApartmentModel, EnclosureRep, ModelConfig};
use coxeter_core::format::{parse_realization, FormatError, Line, Sections};
use coxeter_core::rational::{self, frac, int, Q};
use coxeter_core::{GroupElement, ImaginaryPolicy, Realization};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;
use thiserror::Error;

/// Longest chain of gluings followed when identifying points.
pub const DEFAULT_MAX_PATH: usize = 6;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Apartment(#[from] ApartmentError),
    #[error("line {line}: {source}")]
    Atlas { line: usize, source: AtlasError },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedChart {
    pub name: String,
    /// Region of the chart that samples are drawn from.
    pub window: Option<EnclosureRep>,
}

/// `x ↦ map(x)` from chart `from` to chart `to`, defined on `domain ⊆ from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingEntry {
    pub from: usize,
    pub to: usize,
    pub map: AffineMap,
    pub domain: EnclosureRep,
}

#[derive(Clone, Debug)]
pub struct GluedAtlas {
    model: ApartmentModel,
    charts: Vec<GluedChart>,
    gluings: Vec<GluingEntry>,
    max_path: usize,
}

impl GluedAtlas {
    pub fn new(model: ApartmentModel) -> Self {
        GluedAtlas { model, charts: Vec::new(), gluings: Vec::new(), max_path: DEFAULT_MAX_PATH }
    }

    pub fn with_max_path(mut self, n: usize) -> Self {
        self.max_path = n;
        self
    }

    pub fn model(&self) -> &ApartmentModel {
        &self.model
    }

    pub fn realization(&self) -> &Realization {
        self.model.realization()
    }

    pub fn charts(&self) -> &[GluedChart] {
        &self.charts
    }

    pub fn gluings(&self) -> &[GluingEntry] {
        &self.gluings
    }

    pub fn chart_index(&self, name: &str) -> Option<usize> {
        self.charts.iter().position(|c| c.name == name)
    }

    pub fn add_chart(&mut self, name: &str, window: Option<EnclosureRep>) -> Result<usize, AtlasError> {
        if self.chart_index(name).is_some() {
            return Err(AtlasError::DuplicateChart(name.to_string()));
        }
        self.charts.push(GluedChart { name: name.to_string(), window });
        Ok(self.charts.len() - 1)
    }

    /// Adds a gluing after checking that it maps walls to walls and that its
    /// domain is an intersection of admissible half-apartments.
    pub fn add_gluing(&mut self, from: usize, to: usize, map: AffineMap, domain: EnclosureRep) -> Result<(), AtlasError> {
        for c in [from, to] {
            if c >= self.charts.len() {
                return Err(AtlasError::NoChart(c));
            }
        }
        let dim = self.model.dim();
        if map.translation.len() != dim {
            return Err(AtlasError::Dimension { expected: dim, got: map.translation.len() });
        }
        if domain.levels.len() != self.model.roots().len() {
            return Err(AtlasError::Dimension { expected: self.model.roots().len(), got: domain.levels.len() });
        }
        let names = || (self.charts[from].name.clone(), self.charts[to].name.clone());
        if !self.model.translation_preserves_walls(&map.translation) {
            let (a, b) = names();
            return Err(AtlasError::WallViolation(a, b));
        }
        for (r, l) in domain.levels.iter().enumerate() {
            if let Some(k) = l {
                if self.model.roots()[r].is_real() && &self.model.round_level(r, k) != k {
                    let (a, b) = names();
                    return Err(AtlasError::DomainNotEnclosed(a, b));
                }
            }
        }
        self.gluings.push(GluingEntry { from, to, map, domain });
        Ok(())
    }

    fn check_point(&self, p: &MasurePoint) -> Result<(), AtlasError> {
        if p.chart >= self.charts.len() {
            return Err(AtlasError::NoChart(p.chart));
        }
        self.model
            .check_dim(&p.coords)
            .map_err(|_| AtlasError::Dimension { expected: self.model.dim(), got: p.coords.len() })
    }

    /// Images of `p` under single gluings, in either direction.
    pub fn moves(&self, p: &MasurePoint) -> Vec<MasurePoint> {
        let re = self.realization();
        let mut out = Vec::new();
        for g in &self.gluings {
            if g.from == p.chart && self.model.contains(&g.domain, &p.coords) {
                out.push(MasurePoint { chart: g.to, coords: g.map.apply(&p.coords) });
            }
            if g.to == p.chart {
                let y = g.map.inverse(re).apply(&p.coords);
                if self.model.contains(&g.domain, &y) {
                    out.push(MasurePoint { chart: g.from, coords: y });
                }
            }
        }
        out
    }

    /// Everything reachable from `p` along at most `max_path` gluings.
    pub fn reachable(&self, p: &MasurePoint) -> Result<BTreeSet<MasurePoint>, AtlasError> {
        self.check_point(p)?;
        let mut seen = BTreeSet::from([p.clone()]);
        let mut queue = VecDeque::from([(p.clone(), 0)]);
        while let Some((x, d)) = queue.pop_front() {
            if d == self.max_path {
                continue;
            }
            for y in self.moves(&x) {
                if seen.insert(y.clone()) {
                    queue.push_back((y, d + 1));
                }
            }
        }
        Ok(seen)
    }

    /// The representative in the least reachable chart.
    pub fn normal_form(&self, p: &MasurePoint) -> Result<MasurePoint, AtlasError> {
        Ok(self.reachable(p)?.into_iter().next().unwrap())
    }

    pub fn same_point(&self, p: &MasurePoint, q: &MasurePoint) -> Result<bool, AtlasError> {
        Ok(self.normal_form(p)? == self.normal_form(q)?)
    }

    /// Samples the half-integer lattice in each chart window (clipped to
    /// `[-radius, radius]`) and checks that no chart is reached twice with
    /// different coordinates.
    pub fn check_cocycle(&self, radius: i64, bounds: &CheckBounds) -> AxiomReport {
        let mut rep = AxiomReport::new("cocycle", bounds);
        let dim = self.model.dim();
        let axis: Vec<Q> = (-2 * radius..=2 * radius).map(|k| frac(k, 2)).collect();
        let grid = crate::checks::cartesian(&vec![axis; dim]);
        for (c, chart) in self.charts.iter().enumerate() {
            for x in &grid {
                if chart.window.as_ref().is_some_and(|w| !self.model.contains(w, x)) {
                    continue;
                }
                let p = MasurePoint { chart: c, coords: x.clone() };
                let Ok(all) = self.reachable(&p) else { continue };
                let mut per: BTreeMap<usize, usize> = BTreeMap::new();
                for q in &all {
                    *per.entry(q.chart).or_default() += 1;
                }
                let bad = per.iter().find(|(_, &n)| n > 1).map(|(&k, _)| k);
                rep.record(bad.is_none(), || {
                    format!("{} reaches chart {} twice", p, self.charts[bad.unwrap()].name)
                });
            }
        }
        rep
    }

    pub fn to_text(&self) -> String {
        let re = self.realization();
        let d = re.datum();
        let labels = d.labels();
        let mut s = String::new();
        writeln!(s, "[generators]\n{}", labels.join(" ")).unwrap();
        s.push_str("[coxeter]\n");
        for row in d.coxeter_matrix() {
            let r: Vec<String> = row.iter().map(|m| m.map_or(0, |m| m).to_string()).collect();
            writeln!(s, "{}", r.join(" ")).unwrap();
        }
        s.push_str("[cartan]\n");
        for row in d.cartan() {
            let r: Vec<String> = row.iter().map(i64::to_string).collect();
            writeln!(s, "{}", r.join(" ")).unwrap();
        }
        s.push_str("[realization]\n");
        for (i, l) in labels.iter().enumerate() {
            writeln!(s, "root {l}: {}", rational::vec_to_strings(re.root(i)).join(" ")).unwrap();
            writeln!(s, "coroot {l}: {}", rational::vec_to_strings(re.coroot(i)).join(" ")).unwrap();
        }
        let cfg = self.model.config();
        writeln!(s, "[apartment]\nheight {}", cfg.height).unwrap();
        writeln!(s, "imaginary {}", if cfg.policy == ImaginaryPolicy::Tame { "tame" } else { "none" }).unwrap();
        for (l, st) in labels.iter().zip(&cfg.steps) {
            writeln!(s, "step {l} {}", st.as_ref().map_or("dense".to_string(), rational::to_string)).unwrap();
        }
        s.push_str("[charts]\n");
        for c in &self.charts {
            writeln!(s, "{}", c.name).unwrap();
        }
        if self.charts.iter().any(|c| c.window.is_some()) {
            s.push_str("[windows]\n");
            for c in &self.charts {
                for (root, level) in finite_levels(&self.model, c.window.as_ref()) {
                    writeln!(s, "{} {} level {level}", c.name, root).unwrap();
                }
            }
        }
        s.push_str("[gluings]\n");
        for g in &self.gluings {
            writeln!(s, "glue {} {}", self.charts[g.from].name, self.charts[g.to].name).unwrap();
            let word: Vec<&str> = g.map.linear.word().iter().map(|&i| labels[i].as_str()).collect();
            if !word.is_empty() {
                writeln!(s, "linear {}", word.join(" ")).unwrap();
            }
            writeln!(s, "translation {}", rational::vec_to_strings(&g.map.translation).join(" ")).unwrap();
            for (root, level) in finite_levels(&self.model, Some(&g.domain)) {
                writeln!(s, "half {root} level {level}").unwrap();
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, LoadError> {
        let sections = Sections::parse(text)?;
        let re = parse_realization(&sections)?;
        let model = ApartmentModel::new(re.clone(), parse_config(&sections, &re)?)?;
        let mut atlas = GluedAtlas::new(model);
        for l in sections.require("charts")? {
            for (k, name) in l.words().iter().enumerate() {
                atlas.add_chart(name, None).map_err(|_| l.error(k, format!("duplicate chart `{name}`")))?;
            }
        }
        for l in sections.get("windows").unwrap_or(&[]) {
            let w = l.words();
            let c = w.first().and_then(|n| atlas.chart_index(n)).ok_or_else(|| l.error(0, "unknown chart"))?;
            let (root, level) = parse_half(&atlas.model, l, 1)?;
            let level = level.ok_or_else(|| l.error(w.len() - 1, "window levels are finite"))?;
            let win = atlas.charts[c].window.get_or_insert_with(|| EnclosureRep::everything(&atlas.model));
            tighten(win, root, level);
        }
        let lines = sections.require("gluings")?;
        let mut k = 0;
        while k < lines.len() {
            let head = &lines[k];
            let w = head.words();
            if w.len() != 3 || w[0] != "glue" {
                return Err(head.error(0, "expected `glue <chart> <chart>`").into());
            }
            let from = atlas.chart_index(w[1]).ok_or_else(|| head.error(1, "unknown chart"))?;
            let to = atlas.chart_index(w[2]).ok_or_else(|| head.error(2, "unknown chart"))?;
            let mut map = AffineMap::identity(&re);
            let mut domain = EnclosureRep::everything(&atlas.model);
            k += 1;
            while k < lines.len() && lines[k].words()[0] != "glue" {
                let l = &lines[k];
                let w = l.words();
                match w[0] {
                    "linear" => {
                        let word = w[1..]
                            .iter()
                            .enumerate()
                            .map(|(j, s)| {
                                re.datum().labels().iter().position(|x| x == s).ok_or_else(|| l.error(j + 1, "unknown generator"))
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        map.linear = GroupElement::from_word(&re, &word);
                    }
                    "translation" => {
                        if w.len() != re.dim() + 1 {
                            return Err(l.error(0, format!("expected {} coordinates", re.dim())).into());
                        }
                        map.translation = parse_values(l, 1)?;
                    }
                    "half" => {
                        let (root, level) = parse_half(&atlas.model, l, 1)?;
                        if let Some(q) = level {
                            tighten(&mut domain, root, q);
                        }
                    }
                    _ => return Err(l.error(0, "expected `linear`, `translation` or `half`").into()),
                }
                k += 1;
            }
            atlas.add_gluing(from, to, map, domain).map_err(|e| LoadError::Atlas { line: head.number, source: e })?;
        }
        Ok(atlas)
    }
}

fn finite_levels(model: &ApartmentModel, enc: Option<&EnclosureRep>) -> Vec<(String, String)> {
    let Some(enc) = enc else { return Vec::new() };
    enc.levels
        .iter()
        .enumerate()
        .filter_map(|(r, l)| {
            let c: Vec<String> = model.roots()[r].coeffs.iter().map(i64::to_string).collect();
            l.as_ref().map(|l| (c.join(" "), rational::to_string(l)))
        })
        .collect()
}

fn tighten(enc: &mut EnclosureRep, root: usize, level: Q) {
    let slot = &mut enc.levels[root];
    if slot.as_ref().is_none_or(|old| &level < old) {
        *slot = Some(level);
    }
}

fn parse_values(l: &Line, from: usize) -> Result<Vec<Q>, FormatError> {
    l.words()[from..]
        .iter()
        .enumerate()
        .map(|(j, s)| rational::parse(s).map_err(|e| l.error(from + j, e.to_string())))
        .collect()
}

/// `<coeffs> level <q|inf>` starting at token `from`.
fn parse_half(model: &ApartmentModel, l: &Line, from: usize) -> Result<(usize, Option<Q>), FormatError> {
    let w = l.words();
    let n = model.datum().rank();
    if w.len() != from + n + 2 || w[from + n] != "level" {
        return Err(l.error(from, format!("expected {n} root coefficients, `level` and a level")));
    }
    let coeffs = w[from..from + n]
        .iter()
        .enumerate()
        .map(|(j, s)| s.parse::<i64>().map_err(|_| l.error(from + j, "not an integer")))
        .collect::<Result<Vec<_>, _>>()?;
    let root = model.root_index(&coeffs).ok_or_else(|| l.error(from, "not a root of the truncated root set"))?;
    let last = from + n + 1;
    let level = match w[last] {
        "inf" => None,
        s => Some(rational::parse(s).map_err(|e| l.error(last, e.to_string()))?),
    };
    Ok((root, level))
}

/// Reads the optional `[apartment]` section.
pub fn parse_config(sections: &Sections, re: &Realization) -> Result<ModelConfig, FormatError> {
    let labels = re.datum().labels();
    let mut cfg = ModelConfig::integral(re.rank());
    for l in sections.get("apartment").unwrap_or(&[]) {
        let w = l.words();
        match (w[0], w.len()) {
            ("height", 2) => cfg.height = w[1].parse().map_err(|_| l.error(1, "not an integer"))?,
            ("imaginary", 2) => {
                cfg.policy = match w[1] {
                    "tame" => ImaginaryPolicy::Tame,
                    "none" => ImaginaryPolicy::None,
                    _ => return Err(l.error(1, "expected `tame` or `none`")),
                }
            }
            ("step", 3) => {
                let i = labels.iter().position(|x| x == w[1]).ok_or_else(|| l.error(1, "unknown generator"))?;
                cfg.steps[i] = match w[2] {
                    "dense" => None,
                    s => Some(rational::parse(s).map_err(|e| l.error(2, e.to_string()))?),
                };
            }
            _ => return Err(l.error(0, "expected `height <n>`, `imaginary <policy>` or `step <label> <q>`")),
        }
    }
    Ok(cfg)
}

impl TreeAtlas {
    /// The same atlas with every transition written out; refuses when the
    /// number of chart pairs exceeds `limit`.
    pub fn to_glued(&self, limit: usize) -> Result<GluedAtlas, AtlasError> {
        let n = self.chart_count();
        if n * n.saturating_sub(1) / 2 > limit {
            return Err(AtlasError::TooLarge(n * (n - 1) / 2, limit));
        }
        let model = self.model();
        let mut out = GluedAtlas::new(model.clone());
        for c in 0..n {
            let pairs = self.chart_pairs(c);
            let name: Vec<String> = pairs.iter().map(|(a, b)| format!("{a}-{b}")).collect();
            let mut win = EnclosureRep::everything(model);
            for (k, (f, &ab)) in self.factors().iter().zip(&pairs).enumerate() {
                let depth = f.depth() as i64;
                let top = f.path(ab).len() as i64 - 1 - depth;
                let mut e = vec![0; self.rank()];
                e[k] = 1;
                win.levels[model.root_index(&e).unwrap()] = Some(int(depth));
                e[k] = -1;
                win.levels[model.root_index(&e).unwrap()] = Some(int(top));
            }
            out.add_chart(&format!("c{}", name.join("_")), Some(win))?;
        }
        for a in 0..n {
            for b in a + 1..n {
                if let Some(g) = self.transition(a, b) {
                    out.add_gluing(a, b, g.map, g.domain)?;
                }
            }
        }
        Ok(out)
    }
}
