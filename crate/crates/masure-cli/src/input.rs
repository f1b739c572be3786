//! Parsing of command-line values: data files, atlas shapes, points and ends.

use apartment::{ApartmentModel, ModelConfig};
use coxeter_core::format::{parse_realization, Sections};
use coxeter_core::rational::{self, Q};
use coxeter_core::{CoxeterDatum, Realization};
use masure_atlas::{parse_config, MasurePoint, TreeAtlas};
use std::fmt;
use tits_cone::Sign;

/// An input problem; reported with exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<E: std::error::Error> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

pub fn err<T>(msg: impl Into<String>) -> Result<T, InputError> {
    Err(InputError(msg.into()))
}

/// A named datum, or a file with `[generators]`, `[coxeter]`, optional
/// `[cartan]`, `[realization]` and `[apartment]` sections.
pub fn load_model(datum: Option<&str>, file: Option<&str>, height: i64) -> Result<ApartmentModel, InputError> {
    let (re, mut cfg) = match (datum, file) {
        (Some(name), None) => {
            let re = Realization::new(CoxeterDatum::named(name)?);
            let n = re.rank();
            (re, ModelConfig::integral(n))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{path}: {e}")))?;
            let sections = Sections::parse(&text).map_err(|e| InputError(format!("{path}: {e}")))?;
            let re = parse_realization(&sections).map_err(|e| InputError(format!("{path}: {e}")))?;
            let cfg = parse_config(&sections, &re).map_err(|e| InputError(format!("{path}: {e}")))?;
            (re, cfg)
        }
        _ => return err("give exactly one of --datum and --file"),
    };
    cfg.height = height;
    Ok(ApartmentModel::new(re, cfg)?)
}

/// Space- or comma-separated rationals.
pub fn vector(s: &str, dim: usize) -> Result<Vec<Q>, InputError> {
    let items: Vec<&str> = s.split([',', ' ']).filter(|t| !t.is_empty()).collect();
    let v = rational::parse_vec(&items).map_err(|e| InputError(format!("`{s}`: {e}")))?;
    if v.len() != dim {
        return err(format!("`{s}`: expected {dim} coordinates, got {}", v.len()));
    }
    Ok(v)
}

fn key_values(items: &[String]) -> Result<Vec<(String, String)>, InputError> {
    items
        .iter()
        .map(|i| match i.split_once('=') {
            Some((k, v)) => Ok((k.trim().to_string(), v.trim().to_string())),
            None => err(format!("`{i}`: expected KEY=VALUE")),
        })
        .collect()
}

fn count(k: &str, v: &str) -> Result<usize, InputError> {
    v.parse().map_err(|_| InputError(format!("{k}={v}: not a non-negative integer")))
}

/// `--tree q=2 depth=4` or `--product q=2,3 depth=2`.
pub fn atlas(tree: &[String], product: &[String], limit: usize) -> Result<TreeAtlas, InputError> {
    let (items, is_product) = match (tree.is_empty(), product.is_empty()) {
        (false, true) => (tree, false),
        (true, false) => (product, true),
        _ => return err("give exactly one of --tree and --product"),
    };
    let mut qs = vec![2];
    let mut depth = None;
    for (k, v) in key_values(items)? {
        match k.as_str() {
            "q" => qs = v.split(',').map(|x| count(&k, x)).collect::<Result<_, _>>()?,
            "depth" => depth = Some(count(&k, &v)?),
            _ => return err(format!("unknown key `{k}`, expected q or depth")),
        }
    }
    let depth = depth.ok_or_else(|| InputError("missing depth=".into()))?;
    if is_product && qs.len() == 1 {
        qs.push(qs[0]);
    }
    if !is_product && qs.len() != 1 {
        return err("a tree takes a single q");
    }
    let shape: Vec<(usize, usize)> = qs.into_iter().map(|q| (q, depth)).collect();
    Ok(TreeAtlas::new(&shape, limit)?)
}

/// `CHART:x1,x2,...`.
pub fn point(at: &TreeAtlas, s: &str) -> Result<MasurePoint, InputError> {
    let Some((c, coords)) = s.split_once(':') else {
        return err(format!("`{s}`: expected CHART:COORDS"));
    };
    let chart: usize = c.trim().parse().map_err(|_| InputError(format!("`{c}`: not a chart id")))?;
    if chart >= at.chart_count() {
        return err(format!("chart {chart} does not exist ({} charts)", at.chart_count()));
    }
    Ok(MasurePoint { chart, coords: vector(coords, at.rank())? })
}

/// `CHART:a` or `CHART:b`, the end of a chart a retraction is centred at.
pub fn chart_end(at: &TreeAtlas, s: &str) -> Result<(usize, Vec<usize>), InputError> {
    let Some((c, e)) = s.split_once(':') else {
        return err(format!("`{s}`: expected CHART:a or CHART:b"));
    };
    let chart: usize = c.trim().parse().map_err(|_| InputError(format!("`{c}`: not a chart id")))?;
    if chart >= at.chart_count() {
        return err(format!("chart {chart} does not exist ({} charts)", at.chart_count()));
    }
    let (lo, hi) = at.chart_ends(chart);
    match e.trim() {
        "a" => Ok((chart, lo)),
        "b" => Ok((chart, hi)),
        other => err(format!("`{other}`: expected a or b")),
    }
}

/// `+L1,L2` or `-L1,L2`: a sector germ given by its sign and one leaf per factor.
pub fn germ(at: &TreeAtlas, s: &str) -> Result<(Sign, Vec<usize>), InputError> {
    let (sign, rest) = match s.chars().next() {
        Some('+') => (Sign::Plus, &s[1..]),
        Some('-') => (Sign::Minus, &s[1..]),
        _ => return err(format!("`{s}`: a germ starts with + or -")),
    };
    let end: Vec<usize> = rest.split(',').map(|x| count("leaf", x.trim())).collect::<Result<_, _>>()?;
    if end.len() != at.rank() {
        return err(format!("`{s}`: expected {} leaves", at.rank()));
    }
    for (k, &l) in end.iter().enumerate() {
        if l >= at.factors()[k].leaf_count() {
            return err(format!("leaf {l} does not exist in factor {k}"));
        }
    }
    Ok((sign, end))
}

/// One leaf or `*` per factor, e.g. `3,*`.
pub fn facet_ends(at: &TreeAtlas, s: &str) -> Result<Vec<Option<usize>>, InputError> {
    let ends: Vec<Option<usize>> = s
        .split(',')
        .map(|x| match x.trim() {
            "*" => Ok(None),
            v => count("leaf", v).map(Some),
        })
        .collect::<Result<_, _>>()?;
    if ends.len() != at.rank() {
        return err(format!("`{s}`: expected {} entries", at.rank()));
    }
    Ok(ends)
}
