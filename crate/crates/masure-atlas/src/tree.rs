//! A ball of radius `D` in the `(q+1)`-regular tree, with one ray attached
//! beyond each boundary leaf. Its ends are the leaves, and its apartments are
//! the geodesics between two leaves.
//!
//! Chart `(a, b)` with `a < b` coordinatizes the geodesic from leaf `a` to
//! leaf `b` so that leaf `a` sits at `-D`; a vertex of depth `d` then always has
//! a coordinate of the same parity as `d`.

use coxeter_core::rational::{int, Q};
use std::fmt;

/// A point of the tree: a vertex, a point inside the edge from `parent(child)`
/// at distance `t ∈ (0,1)`, or a point on the ray past a leaf at distance `t > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeLoc {
    Vertex(usize),
    Edge { child: usize, t: Q },
    Ray { leaf: usize, t: Q },
}

impl fmt::Display for TreeLoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeLoc::Vertex(v) => write!(f, "v{v}"),
            TreeLoc::Edge { child, t } => write!(f, "e{child}@{t}"),
            TreeLoc::Ray { leaf, t } => write!(f, "r{leaf}@{t}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TreeWindow {
    q: usize,
    depth: usize,
    parent: Vec<Option<usize>>,
    level: Vec<usize>,
    children: Vec<Vec<usize>>,
    lo: Vec<usize>,
    hi: Vec<usize>,
    leaves: Vec<usize>,
    pairs: Vec<(usize, usize)>,
}

impl TreeWindow {
    /// `q ≥ 1`, `depth ≥ 1`.
    pub fn new(q: usize, depth: usize) -> Self {
        assert!(q >= 1 && depth >= 1);
        let mut parent = vec![None];
        let mut level = vec![0];
        let mut children: Vec<Vec<usize>> = vec![Vec::new()];
        let mut v = 0;
        while v < parent.len() {
            if level[v] < depth {
                let k = if v == 0 { q + 1 } else { q };
                for _ in 0..k {
                    let c = parent.len();
                    parent.push(Some(v));
                    level.push(level[v] + 1);
                    children.push(Vec::new());
                    children[v].push(c);
                }
            }
            v += 1;
        }
        let n = parent.len();
        let leaves: Vec<usize> = (0..n).filter(|&v| level[v] == depth).collect();
        let mut lo = vec![0; n];
        let mut hi = vec![0; n];
        for (i, &l) in leaves.iter().enumerate() {
            lo[l] = i;
            hi[l] = i;
        }
        for v in (0..n).rev() {
            if let (Some(&f), Some(&l)) = (children[v].first(), children[v].last()) {
                lo[v] = lo[f];
                hi[v] = hi[l];
            }
        }
        let mut pairs = Vec::new();
        for a in 0..leaves.len() {
            for b in a + 1..leaves.len() {
                pairs.push((a, b));
            }
        }
        TreeWindow { q, depth, parent, level, children, lo, hi, leaves, pairs }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn chart_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn level(&self, v: usize) -> usize {
        self.level[v]
    }

    /// Vertex of the leaf with index `i`.
    pub fn leaf_vertex(&self, i: usize) -> usize {
        self.leaves[i]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.level[v] == self.depth
    }

    /// Tree neighbours inside the window.
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        self.parent[v].into_iter().chain(self.children[v].iter().copied()).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (1..self.vertex_count()).map(|c| (self.parent[c].unwrap(), c)).collect()
    }

    /// Leaf index `leaf` lies below `v`.
    pub fn below(&self, v: usize, leaf: usize) -> bool {
        self.lo[v] <= leaf && leaf <= self.hi[v]
    }

    pub fn pair(&self, id: usize) -> (usize, usize) {
        self.pairs[id]
    }

    pub fn pair_id(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let l = self.leaf_count();
        a * l - a * (a + 1) / 2 + (b - a - 1)
    }

    fn ancestor(&self, leaf: usize, d: usize) -> usize {
        let mut v = self.leaves[leaf];
        while self.level[v] > d {
            v = self.parent[v].unwrap();
        }
        v
    }

    /// Depth of the meeting vertex of the geodesic between two leaves.
    pub fn meet_depth(&self, a: usize, b: usize) -> usize {
        let (mut x, mut y) = (self.leaves[a], self.leaves[b]);
        while x != y {
            x = self.parent[x].unwrap();
            y = self.parent[y].unwrap();
        }
        self.level[x]
    }

    /// Coordinate of the far end of the finite part of chart `(a, b)`.
    fn top(&self, a: usize, b: usize) -> i64 {
        self.depth as i64 - 2 * self.meet_depth(a, b) as i64
    }

    pub fn vertex_coord(&self, (a, b): (usize, usize), v: usize) -> Option<i64> {
        let (ina, inb) = (self.below(v, a), self.below(v, b));
        let d = self.level[v] as i64;
        match (ina, inb) {
            (true, false) => Some(-d),
            (false, true) => Some(d - 2 * self.meet_depth(a, b) as i64),
            (true, true) if self.meet_depth(a, b) as i64 == d => Some(-d),
            _ => None,
        }
    }

    /// Coordinate of `loc` in chart `(a, b)`, if the chart contains it.
    pub fn coord(&self, ab: (usize, usize), loc: &TreeLoc) -> Option<Q> {
        match loc {
            TreeLoc::Vertex(v) => self.vertex_coord(ab, *v).map(int),
            TreeLoc::Edge { child, t } => {
                let xc = self.vertex_coord(ab, *child)?;
                let xp = self.vertex_coord(ab, self.parent[*child].unwrap())?;
                Some(int(xp) + t * int(xc - xp))
            }
            TreeLoc::Ray { leaf, t } => {
                if *leaf == ab.0 {
                    Some(int(-(self.depth as i64)) - t)
                } else if *leaf == ab.1 {
                    Some(int(self.top(ab.0, ab.1)) + t)
                } else {
                    None
                }
            }
        }
    }

    pub fn contains(&self, ab: (usize, usize), loc: &TreeLoc) -> bool {
        match loc {
            TreeLoc::Vertex(v) => self.vertex_coord(ab, *v).is_some(),
            TreeLoc::Edge { child, .. } => {
                self.vertex_coord(ab, *child).is_some() && self.vertex_coord(ab, self.parent[*child].unwrap()).is_some()
            }
            TreeLoc::Ray { leaf, .. } => *leaf == ab.0 || *leaf == ab.1,
        }
    }

    fn vertex_at(&self, (a, b): (usize, usize), n: i64) -> usize {
        let m = self.meet_depth(a, b) as i64;
        if n <= -m {
            self.ancestor(a, (-n) as usize)
        } else {
            self.ancestor(b, (n + 2 * m) as usize)
        }
    }

    /// The point with coordinate `x` in chart `(a, b)`.
    pub fn locate(&self, ab: (usize, usize), x: &Q) -> TreeLoc {
        let bottom = int(-(self.depth as i64));
        let top = int(self.top(ab.0, ab.1));
        if x < &bottom {
            return TreeLoc::Ray { leaf: ab.0, t: bottom - x };
        }
        if x > &top {
            return TreeLoc::Ray { leaf: ab.1, t: x - top };
        }
        if x.is_integer() {
            return TreeLoc::Vertex(self.vertex_at(ab, x.to_integer().try_into().unwrap()));
        }
        let f: i64 = x.floor().to_integer().try_into().unwrap();
        let (vf, vc) = (self.vertex_at(ab, f), self.vertex_at(ab, f + 1));
        if self.parent[vc] == Some(vf) {
            TreeLoc::Edge { child: vc, t: x - int(f) }
        } else {
            TreeLoc::Edge { child: vf, t: int(f + 1) - x }
        }
    }

    /// The least chart containing `loc`; all of them have first leaf `0`.
    pub fn least_chart(&self, loc: &TreeLoc) -> (usize, usize) {
        let spine_exit = |v: usize| -> usize {
            // first leaf outside the subtree of the spine child of v
            self.hi[self.children[v][0]] + 1
        };
        let b = match loc {
            TreeLoc::Vertex(v) if self.is_leaf(*v) => {
                if self.lo[*v] == 0 {
                    1
                } else {
                    self.lo[*v]
                }
            }
            TreeLoc::Vertex(v) => {
                if self.lo[*v] > 0 {
                    self.lo[*v]
                } else {
                    spine_exit(*v)
                }
            }
            TreeLoc::Edge { child, .. } => {
                if self.lo[*child] > 0 {
                    self.lo[*child]
                } else {
                    self.hi[*child] + 1
                }
            }
            TreeLoc::Ray { leaf, .. } => {
                if *leaf == 0 {
                    1
                } else {
                    *leaf
                }
            }
        };
        (0, b)
    }

    /// Shared part of two charts, as the interval `[lo, hi]` of coordinates of
    /// the first (`None` = unbounded), and the map `x ↦ ±x + c` onto the second.
    pub fn transition(&self, from: (usize, usize), to: (usize, usize)) -> Option<FactorGluing> {
        let bottom = -(self.depth as i64);
        let top = self.top(from.0, from.1);
        let mut shared: Option<(i64, i64)> = None;
        for x in bottom..=top {
            let v = self.vertex_at(from, x);
            if self.vertex_coord(to, v).is_some() {
                shared = Some(match shared {
                    None => (x, x),
                    Some((s, _)) => (s, x),
                });
            }
        }
        let (x0, x1) = shared?;
        let y0 = self.vertex_coord(to, self.vertex_at(from, x0)).unwrap();
        let y1 = self.vertex_coord(to, self.vertex_at(from, x1)).unwrap();
        let flip = x1 > x0 && y1 < y0;
        let c = if flip { y0 + x0 } else { y0 - x0 };
        let lo = (!(x0 == bottom && (from.0 == to.0 || from.0 == to.1))).then(|| int(x0));
        let hi = (!(x1 == top && (from.1 == to.0 || from.1 == to.1))).then(|| int(x1));
        Some(FactorGluing { flip, shift: int(c), lo, hi })
    }

    /// Every vertex with its coordinate in chart `ab`, in path order.
    pub fn path(&self, ab: (usize, usize)) -> Vec<usize> {
        (-(self.depth as i64)..=self.top(ab.0, ab.1)).map(|x| self.vertex_at(ab, x)).collect()
    }

    /// Length of the tree geodesic between two vertices.
    pub fn distance(&self, mut x: usize, mut y: usize) -> usize {
        let mut d = 0;
        while x != y {
            if self.level[x] >= self.level[y] {
                x = self.parent[x].unwrap();
            } else {
                y = self.parent[y].unwrap();
            }
            d += 1;
        }
        d
    }

    /// Some chart containing every location in `locs`, and the ends in `ends`.
    pub fn chart_through(&self, locs: &[&TreeLoc], ends: &[usize]) -> Option<(usize, usize)> {
        let ok = |ab: (usize, usize)| {
            ends.iter().all(|&e| e == ab.0 || e == ab.1) && locs.iter().all(|l| self.contains(ab, l))
        };
        match ends {
            [] => self.pairs.iter().copied().find(|&ab| ok(ab)),
            [e] => (0..self.leaf_count())
                .filter(|&c| c != *e)
                .map(|c| if c < *e { (c, *e) } else { (*e, c) })
                .find(|&ab| ok(ab)),
            [e, f] if e != f => {
                let ab = if e < f { (*e, *f) } else { (*f, *e) };
                ok(ab).then_some(ab)
            }
            _ => None,
        }
    }

    /// Every chart containing all of `locs`.
    pub fn charts_through(&self, locs: &[&TreeLoc]) -> Vec<(usize, usize)> {
        self.pairs.iter().copied().filter(|&ab| locs.iter().all(|l| self.contains(ab, l))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorGluing {
    pub flip: bool,
    pub shift: Q,
    pub lo: Option<Q>,
    pub hi: Option<Q>,
}

impl FactorGluing {
    pub fn apply(&self, x: &Q) -> Q {
        if self.flip {
            &self.shift - x
        } else {
            &self.shift + x
        }
    }

    pub fn in_domain(&self, x: &Q) -> bool {
        self.lo.as_ref().is_none_or(|l| x >= l) && self.hi.as_ref().is_none_or(|h| x <= h)
    }
}

/// `x` is within the ball: not on a ray.
pub fn in_window(loc: &TreeLoc) -> bool {
    !matches!(loc, TreeLoc::Ray { .. })
}
