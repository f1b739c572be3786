//! Façades: the germs of faces parallel to a facet at infinity, organised by
//! the quotient apartments of the charts carrying it.

use crate::distance::SectorGerm;
use crate::parallel::{direction_vector, FacetAtInfinity};
use crate::quotient::QuotientApartment;
use crate::InfinityError;
use coxeter_core::linalg::add;
use coxeter_core::rational::{int, Q};
use masure_atlas::{MasurePoint, TreeAtlas, TreeLoc, TreeWindow};
use petgraph::algo::is_isomorphic;
use petgraph::graph::{NodeIndex, UnGraph};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use tits_cone::Sign;

/// A façade restricted to the window. Vertices are face germs, keyed by their
/// position in the factors of `J`; edges join germs adjacent in a quotient
/// apartment.
#[derive(Clone, Debug)]
pub struct Facade {
    pub facet: FacetAtInfinity,
    pub quotient: QuotientApartment,
    /// Factors in which the faces are constant.
    pub factors: Vec<usize>,
    pub vertices: Vec<Vec<TreeLoc>>,
    pub edges: BTreeSet<(usize, usize)>,
    /// Charts carrying the facet, each giving one quotient apartment.
    pub apartments: usize,
}

impl Facade {
    pub fn new(at: &TreeAtlas, facet: &FacetAtInfinity) -> Result<Self, InfinityError> {
        let factors: Vec<usize> = (0..at.rank()).filter(|&k| facet.ends[k].is_none()).collect();
        let quotient = QuotientApartment::new(at.model(), &factors)?;
        let mut keys: BTreeMap<Vec<TreeLoc>, usize> = BTreeMap::new();
        let mut raw_edges: BTreeSet<(Vec<TreeLoc>, Vec<TreeLoc>)> = BTreeSet::new();
        let mut apartments = 0;
        for c in 0..at.chart_count() {
            if direction_vector(at, c, &facet.ends).is_err() {
                continue;
            }
            apartments += 1;
            let pairs = at.chart_pairs(c);
            // window lattice of the quotient: one coordinate range per factor of J
            let ranges: Vec<Vec<i64>> = factors
                .iter()
                .map(|&k| {
                    let f = &at.factors()[k];
                    let lo = -(f.depth() as i64);
                    (lo..lo + f.path(pairs[k]).len() as i64).collect()
                })
                .collect();
            let mut points: Vec<Vec<i64>> = vec![Vec::new()];
            for r in &ranges {
                points = points.into_iter().flat_map(|p| r.iter().map(move |&x| [p.clone(), vec![x]].concat())).collect();
            }
            let key_of = |y: &[i64]| -> Result<Vec<TreeLoc>, InfinityError> {
                let mut x: Vec<Q> = at.factors().iter().map(|f| int(-(f.depth() as i64))).collect();
                for (a, &k) in factors.iter().enumerate() {
                    x[k] = int(y[a]);
                }
                let loc = at.location(&MasurePoint { chart: c, coords: x.clone() })?;
                debug_assert_eq!(quotient.project(&x), y.iter().map(|&v| int(v)).collect::<Vec<_>>());
                Ok(factors.iter().map(|&k| loc[k].clone()).collect())
            };
            let inside: BTreeSet<Vec<i64>> = points.iter().cloned().collect();
            for y in &points {
                let ky = key_of(y)?;
                let n = keys.len();
                keys.entry(ky.clone()).or_insert(n);
                for a in 0..factors.len() {
                    let mut z = y.clone();
                    z[a] += 1;
                    if inside.contains(&z) {
                        let kz = key_of(&z)?;
                        raw_edges.insert(if ky < kz { (ky.clone(), kz) } else { (kz, ky.clone()) });
                    }
                }
            }
        }
        if apartments == 0 {
            return Err(masure_atlas::AtlasError::IncompleteAtlas.into());
        }
        // stable ids: lexicographic order of keys
        let vertices: Vec<Vec<TreeLoc>> = keys.into_keys().collect();
        let index: BTreeMap<&Vec<TreeLoc>, usize> = vertices.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let edges = raw_edges.iter().map(|(a, b)| (index[a], index[b])).collect();
        Ok(Facade { facet: facet.clone(), quotient, factors, vertices, edges, apartments })
    }

    pub fn graph(&self) -> UnGraph<usize, ()> {
        let mut g = UnGraph::new_undirected();
        let nodes: Vec<NodeIndex> = (0..self.vertices.len()).map(|i| g.add_node(i)).collect();
        for &(a, b) in &self.edges {
            g.add_edge(nodes[a], nodes[b], ());
        }
        g
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// Ends of a one-factor façade, each labelled by the sector germ it
    /// dominates: the facet's ends completed by the façade end.
    pub fn end_labels(&self, at: &TreeAtlas) -> Vec<(usize, SectorGerm)> {
        if self.factors.len() != 1 {
            return Vec::new();
        }
        let k = self.factors[0];
        (0..at.factors()[k].leaf_count())
            .map(|l| {
                let end = self.facet.ends.iter().enumerate().map(|(i, e)| if i == k { l } else { e.unwrap() }).collect();
                (l, SectorGerm::new(Sign::Plus, end))
            })
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let name = |i: usize| -> String {
            let parts: Vec<String> = self.vertices[i].iter().map(ToString::to_string).collect();
            format!("\"{}\"", parts.join(","))
        };
        let mut s = String::from("graph facade {\n");
        for i in 0..self.vertices.len() {
            writeln!(s, "  {};", name(i)).unwrap();
        }
        for &(a, b) in &self.edges {
            writeln!(s, "  {} -- {};", name(a), name(b)).unwrap();
        }
        s.push_str("}\n");
        s
    }
}

/// Graph of a tree window, vertices numbered as in the window.
pub fn window_graph(tree: &TreeWindow) -> UnGraph<usize, ()> {
    let mut g = UnGraph::new_undirected();
    let nodes: Vec<NodeIndex> = (0..tree.vertex_count()).map(|i| g.add_node(i)).collect();
    for (a, b) in tree.edges() {
        g.add_edge(nodes[a], nodes[b], ());
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphComparison {
    pub vertices: (usize, usize),
    pub edges: (usize, usize),
    pub degrees_equal: bool,
    pub isomorphic: bool,
}

impl GraphComparison {
    pub fn passed(&self) -> bool {
        self.vertices.0 == self.vertices.1 && self.edges.0 == self.edges.1 && self.degrees_equal && self.isomorphic
    }
}

pub fn compare(a: &UnGraph<usize, ()>, b: &UnGraph<usize, ()>) -> GraphComparison {
    let degrees = |g: &UnGraph<usize, ()>| -> Vec<usize> {
        let mut d: Vec<usize> = g.node_indices().map(|n| g.neighbors(n).count()).collect();
        d.sort_unstable();
        d
    };
    GraphComparison {
        vertices: (a.node_count(), b.node_count()),
        edges: (a.edge_count(), b.edge_count()),
        degrees_equal: degrees(a) == degrees(b),
        isomorphic: is_isomorphic(a, b),
    }
}

/// For the point set of a façade of type `J`: each germ is determined by
/// the point's position in the factors of `J`.
pub fn germ_key(at: &TreeAtlas, facade: &Facade, p: &MasurePoint) -> Result<Vec<TreeLoc>, InfinityError> {
    let loc = at.location(p)?;
    Ok(facade.factors.iter().map(|&k| loc[k].clone()).collect())
}

/// Shifts a point along the facet's direction in its chart.
pub fn slide(at: &TreeAtlas, facet: &FacetAtInfinity, p: &MasurePoint, t: i64) -> Result<MasurePoint, InfinityError> {
    let d = direction_vector(at, p.chart, &facet.ends)?;
    let shift: Vec<Q> = d.iter().map(|x| x * int(t)).collect();
    Ok(MasurePoint { chart: p.chart, coords: add(&p.coords, &shift) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_facade_is_the_second_tree() {
        let at = TreeAtlas::product(2, 2, 2).unwrap();
        let fi = FacetAtInfinity::from_ends(&at, &[Some(0), None]).unwrap();
        let fa = Facade::new(&at, &fi).unwrap();
        let cmp = compare(&fa.graph(), &window_graph(&at.factors()[1]));
        assert!(cmp.passed(), "{cmp:?}");
        assert_eq!(fa.vertices.len(), 10);
        assert_eq!(fa.end_labels(&at).len(), 6);
        assert!(fa.to_dot().starts_with("graph facade {"));
    }

    #[test]
    fn tree_facade_of_an_end() {
        // J empty has no quotient
        let at = TreeAtlas::tree(2, 2).unwrap();
        let fi = FacetAtInfinity::from_ends(&at, &[Some(0)]).unwrap();
        assert!(Facade::new(&at, &fi).is_err());
    }

    #[test]
    fn germs_do_not_depend_on_sliding() {
        let at = TreeAtlas::product(2, 2, 2).unwrap();
        let fi = FacetAtInfinity::from_ends(&at, &[Some(3), None]).unwrap();
        let fa = Facade::new(&at, &fi).unwrap();
        let c = at.chart_id(&[(0, 3), (1, 4)]);
        let p = MasurePoint { chart: c, coords: vec![int(-1), int(0)] };
        let k = germ_key(&at, &fa, &p).unwrap();
        for t in 0..5 {
            assert_eq!(germ_key(&at, &fa, &slide(&at, &fi, &p, t).unwrap()).unwrap(), k);
        }
    }
}
