//! Real roots by orbit enumeration, and tame imaginary roots.

use crate::datum::CoxeterDatum;
use std::collections::{BTreeSet, HashSet, VecDeque};

/// A root as its coefficient vector on the simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct RealRoot {
    pub coeffs: Vec<i64>,
}

impl RealRoot {
    pub fn simple(rank: usize, i: usize) -> Self {
        let mut coeffs = vec![0; rank];
        coeffs[i] = 1;
        RealRoot { coeffs }
    }

    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    pub fn negate(&self) -> Self {
        RealRoot { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Index of the simple root if this is one.
    pub fn as_simple(&self) -> Option<usize> {
        let mut idx = None;
        for (i, &c) in self.coeffs.iter().enumerate() {
            match c {
                0 => {}
                1 if idx.is_none() => idx = Some(i),
                _ => return None,
            }
        }
        idx
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImaginaryPolicy {
    None,
    Tame,
}

/// `r_i(c) = c - (Σ_j a(i,j) c_j) e_i`.
pub fn reflect_coeffs(datum: &CoxeterDatum, i: usize, c: &[i64]) -> Vec<i64> {
    let pairing: i64 = c.iter().enumerate().map(|(j, &x)| datum.a(i, j) * x).sum();
    let mut out = c.to_vec();
    out[i] -= pairing;
    out
}

/// `(Σ c_j α_j)(α_i∨)`.
pub fn pair_with_coroot(datum: &CoxeterDatum, i: usize, c: &[i64]) -> i64 {
    c.iter().enumerate().map(|(j, &x)| datum.a(i, j) * x).sum()
}

/// Positive real roots of height at most `h`, sorted by height, followed by
/// their negatives in the same order.
pub fn roots_up_to_height(datum: &CoxeterDatum, h: i64) -> Vec<RealRoot> {
    let n = datum.rank();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..n {
        let r = RealRoot::simple(n, i).coeffs;
        seen.insert(r.clone());
        queue.push_back(r);
    }
    // every positive root of height k > 1 is r_i of a positive root of height < k
    while let Some(c) = queue.pop_front() {
        for i in 0..n {
            let r = reflect_coeffs(datum, i, &c);
            let ht: i64 = r.iter().sum();
            if r.iter().all(|&x| x >= 0) && ht <= h && ht > c.iter().sum::<i64>() && seen.insert(r.clone()) {
                queue.push_back(r);
            }
        }
    }
    let mut pos: Vec<RealRoot> = seen.into_iter().map(|coeffs| RealRoot { coeffs }).collect();
    pos.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.coeffs.cmp(&a.coeffs)));
    let neg: Vec<RealRoot> = pos.iter().map(RealRoot::negate).collect();
    pos.extend(neg);
    pos
}

/// Whether the nonnegative vector `c` lies in every `w(Q+)`: reflecting by any
/// `r_i` with `c(α_i∨) > 0` strictly lowers the height, and `c` passes iff no
/// such descent produces a negative coefficient.
fn in_imaginary_cone(datum: &CoxeterDatum, c: &[i64]) -> bool {
    let mut c = c.to_vec();
    loop {
        if c.iter().any(|&x| x < 0) {
            return false;
        }
        let Some(i) = (0..c.len()).find(|&i| pair_with_coroot(datum, i, &c) > 0) else {
            return true;
        };
        c = reflect_coeffs(datum, i, &c);
    }
}

/// Tame imaginary roots: nonzero lattice points of `Q+` of height at most `h`
/// lying in the `W`-stable cone `∩ w(Q+)` and off every real root ray.
/// Positives first, then negatives.
pub fn imaginary_roots_up_to_height(datum: &CoxeterDatum, h: i64) -> Vec<Vec<i64>> {
    let n = datum.rank();
    let mut out: BTreeSet<(i64, Vec<i64>)> = BTreeSet::new();
    let mut c = vec![0i64; n];
    loop {
        // odometer over the simplex Σ c_i <= h
        let mut k = 0;
        loop {
            if k == n {
                let mut v: Vec<Vec<i64>> = out.into_iter().map(|(_, c)| c).collect();
                let neg: Vec<Vec<i64>> = v.iter().map(|c| c.iter().map(|x| -x).collect()).collect();
                v.extend(neg);
                return v;
            }
            c[k] += 1;
            if c.iter().sum::<i64>() <= h {
                break;
            }
            c[k] = 0;
            k += 1;
        }
        if in_imaginary_cone(datum, &c) && !on_real_ray(datum, &c) {
            out.insert((c.iter().sum(), c.clone()));
        }
    }
}

/// A nonnegative vector on the ray of a real root descends, through the same
/// reflections, to a multiple of a simple root.
fn on_real_ray(datum: &CoxeterDatum, c: &[i64]) -> bool {
    let mut c = c.to_vec();
    loop {
        if c.iter().filter(|&&x| x != 0).count() == 1 {
            return true;
        }
        let Some(i) = (0..c.len()).find(|&i| pair_with_coroot(datum, i, &c) > 0) else {
            return false;
        };
        c = reflect_coeffs(datum, i, &c);
        if c.iter().any(|&x| x < 0) {
            return false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn positives(name: &str, h: i64) -> BTreeSet<Vec<i64>> {
        roots_up_to_height(&CoxeterDatum::named(name).unwrap(), h)
            .into_iter()
            .filter(RealRoot::is_positive)
            .map(|r| r.coeffs)
            .collect()
    }

    #[test]
    fn height_examples() {
        assert_eq!(positives("A2", 2), BTreeSet::from([vec![1, 0], vec![0, 1], vec![1, 1]]));
        assert_eq!(
            positives("~A1", 3),
            BTreeSet::from([vec![1, 0], vec![0, 1], vec![2, 1], vec![1, 2]])
        );
        assert_eq!(positives("G2", 1), BTreeSet::from([vec![1, 0], vec![0, 1]]));
    }

    #[test]
    fn finite_counts() {
        for (name, count) in [("A2", 3), ("A3", 6), ("B2", 4), ("G2", 6), ("A1xA1", 2), ("F4", 24), ("D4", 12)] {
            assert_eq!(positives(name, 100).len(), count, "{name}");
        }
    }

    #[test]
    fn affine_roots() {
        // real roots of ~A1: (k+1, k) and (k, k+1)
        let p = positives("~A1", 9);
        for r in &p {
            assert_eq!((r[0] - r[1]).abs(), 1);
        }
        assert_eq!(p.len(), 10);
    }

    #[test]
    fn imaginary_examples() {
        let aff = CoxeterDatum::named("~A1").unwrap();
        let im = imaginary_roots_up_to_height(&aff, 6);
        assert_eq!(im[..3], [vec![1, 1], vec![2, 2], vec![3, 3]]);
        assert_eq!(im.len(), 6);
        let a2 = CoxeterDatum::named("~A2").unwrap();
        let im = imaginary_roots_up_to_height(&a2, 6);
        assert_eq!(im[..2], [vec![1, 1, 1], vec![2, 2, 2]]);
        assert!(imaginary_roots_up_to_height(&CoxeterDatum::named("B2").unwrap(), 8).is_empty());
        let hyp = CoxeterDatum::named("rank2:3,3").unwrap();
        let im = imaginary_roots_up_to_height(&hyp, 4);
        assert!(im.contains(&vec![1, 1]));
        assert!(im.contains(&vec![2, 1]));
        assert!(!im.contains(&vec![3, 1]));
    }
}
