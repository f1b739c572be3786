//! Sector germs at infinity, their `W^v`-distances and codistance.

use crate::InfinityError;
use coxeter_core::linalg::neg;
use coxeter_core::{GroupElement, Realization};
use masure_atlas::{AxiomReport, CheckBounds, End, TreeAtlas};
use serde::Serialize;
use tits_cone::Sign;

/// A chamber at infinity of the given sign: the germ of sectors pointing to `end`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SectorGerm {
    pub sign: Sign,
    pub end: End,
}

impl SectorGerm {
    pub fn new(sign: Sign, end: End) -> Self {
        SectorGerm { sign, end }
    }
}

/// All germs of one sign, one per end of the window.
pub fn germs(at: &TreeAtlas, sign: Sign) -> Vec<SectorGerm> {
    at.ends().into_iter().map(|e| SectorGerm::new(sign, e)).collect()
}

/// `w` with the germ equal to `ε w C^v_f` in `chart`.
pub fn germ_element(at: &TreeAtlas, chart: usize, q: &SectorGerm) -> Result<GroupElement, InfinityError> {
    if q.end.len() != at.rank() {
        return Err(InfinityError::BadEnd(q.end.clone()));
    }
    let d = at.end_direction(chart, &q.end)?;
    let v = match q.sign {
        Sign::Plus => d,
        Sign::Minus => neg(&d),
    };
    let loc = at.model().cone().locate_positive(&v);
    Ok(loc.facet().expect("±1 vectors lie in chambers").w.clone())
}

fn relative(at: &TreeAtlas, chart: usize, q1: &SectorGerm, q2: &SectorGerm) -> Result<GroupElement, InfinityError> {
    let re = at.realization();
    let w1 = germ_element(at, chart, q1)?;
    let w2 = germ_element(at, chart, q2)?;
    Ok(w1.inverse(re).mul(re, &w2))
}

fn common_chart(at: &TreeAtlas, q1: &SectorGerm, q2: &SectorGerm) -> Result<usize, InfinityError> {
    for q in [q1, q2] {
        if q.end.len() != at.rank() {
            return Err(InfinityError::BadEnd(q.end.clone()));
        }
    }
    Ok(at.chart_with_ends(&[&q1.end, &q2.end])?)
}

/// `w1⁻¹ w2` in a chart containing both germs, whatever their signs.
pub fn relative_position(at: &TreeAtlas, q1: &SectorGerm, q2: &SectorGerm) -> Result<GroupElement, InfinityError> {
    relative(at, common_chart(at, q1, q2)?, q1, q2)
}

/// The `W^v`-distance of two germs of the same sign.
pub fn distance(at: &TreeAtlas, q1: &SectorGerm, q2: &SectorGerm) -> Result<GroupElement, InfinityError> {
    if q1.sign != q2.sign {
        return Err(InfinityError::Signs(q1.sign, q2.sign));
    }
    relative_position(at, q1, q2)
}

pub fn d_plus(at: &TreeAtlas, q1: &SectorGerm, q2: &SectorGerm) -> Result<GroupElement, InfinityError> {
    if q1.sign != Sign::Plus {
        return Err(InfinityError::Signs(q1.sign, Sign::Plus));
    }
    distance(at, q1, q2)
}

pub fn d_minus(at: &TreeAtlas, q1: &SectorGerm, q2: &SectorGerm) -> Result<GroupElement, InfinityError> {
    if q1.sign != Sign::Minus {
        return Err(InfinityError::Signs(q1.sign, Sign::Minus));
    }
    distance(at, q1, q2)
}

/// The codistance of two germs of opposite signs.
pub fn d_star(at: &TreeAtlas, q1: &SectorGerm, q2: &SectorGerm) -> Result<GroupElement, InfinityError> {
    if q1.sign == q2.sign {
        return Err(InfinityError::Signs(q1.sign, q2.sign));
    }
    relative_position(at, q1, q2)
}

/// Whether every chart containing both germs gives the same relative position.
pub fn chart_independent(at: &TreeAtlas, q1: &SectorGerm, q2: &SectorGerm) -> Result<bool, InfinityError> {
    let reference = relative_position(at, q1, q2)?;
    for c in 0..at.chart_count() {
        if at.end_direction(c, &q1.end).is_ok() && at.end_direction(c, &q2.end).is_ok() && relative(at, c, q1, q2)? != reference {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Relative positions of all pairs from `a × b`, row-major.
fn table(at: &TreeAtlas, a: &[SectorGerm], b: &[SectorGerm]) -> Result<Vec<Vec<GroupElement>>, InfinityError> {
    a.iter().map(|x| b.iter().map(|y| relative_position(at, x, y)).collect()).collect()
}

/// The axioms of a `W`-distance on a finite chamber set, given its table:
/// `δ(C,D) = e` iff `C = D`; the descent rule for `s`-adjacent `C'`; and
/// existence of `C'` with `δ(C',C) = s`, `δ(C',D) = sw`, which is
/// inconclusive when no such chamber is in the table.
pub fn check_distance_table(
    re: &Realization,
    gens: &[usize],
    name: &str,
    labels: &[String],
    t: &[Vec<GroupElement>],
    bounds: &CheckBounds,
) -> AxiomReport {
    let mut rep = AxiomReport::new(name, bounds);
    let n = labels.len();
    for c in 0..n {
        for d in 0..n {
            let w = &t[c][d];
            rep.record(w.is_identity() == (c == d), || format!("{} {}: {:?}", labels[c], labels[d], w.word()));
            for &s in gens {
                let sw = GroupElement::simple(re, s).mul(re, w);
                let mut found = false;
                for c2 in 0..n {
                    if !is_simple(&t[c2][c], s) {
                        continue;
                    }
                    let v = &t[c2][d];
                    let ok = if sw.length() > w.length() { v == &sw } else { v == &sw || v == w };
                    rep.record(ok, || format!("descent at {} {} {}", labels[c2], labels[c], labels[d]));
                    found |= v == &sw;
                }
                if found {
                    rep.record(true, String::new);
                } else {
                    rep.record_inconclusive();
                }
            }
        }
    }
    rep
}

fn is_simple(w: &GroupElement, s: usize) -> bool {
    w.length() == 1 && w.word()[0] == s
}

pub fn check_w_distance(at: &TreeAtlas, sign: Sign, bounds: &CheckBounds) -> Result<AxiomReport, InfinityError> {
    let gs = germs(at, sign);
    let t = table(at, &gs, &gs)?;
    let labels: Vec<String> = gs.iter().map(|g| format!("{:?}", g.end)).collect();
    let gens: Vec<usize> = (0..at.rank()).collect();
    let name = if sign == Sign::Plus { "W-distance +" } else { "W-distance -" };
    Ok(check_distance_table(at.realization(), &gens, name, &labels, &t, bounds))
}

/// Tw1 to Tw3 for the codistance between positive and negative germs.
#[derive(Clone, Debug, Serialize)]
pub struct TwinningReport {
    pub tw1: AxiomReport,
    pub tw2: AxiomReport,
    pub tw3: AxiomReport,
}

impl TwinningReport {
    pub fn passed(&self) -> bool {
        self.tw1.passed() && self.tw2.passed() && self.tw3.passed()
    }

    pub fn inconclusive(&self) -> usize {
        self.tw1.inconclusive + self.tw2.inconclusive + self.tw3.inconclusive
    }
}

/// Distance and codistance tables of a pair of chamber sets. `star_pm[i][j]`
/// is the codistance from the `i`-th positive to the `j`-th negative chamber.
#[derive(Clone, Debug)]
pub struct TwinTables {
    pub plus: Vec<String>,
    pub minus: Vec<String>,
    pub star_pm: Vec<Vec<GroupElement>>,
    pub star_mp: Vec<Vec<GroupElement>>,
    pub d_plus: Vec<Vec<GroupElement>>,
    pub d_minus: Vec<Vec<GroupElement>>,
}

/// Tw1 to Tw3 on complete tables, with `gens` the simple reflections.
/// A Tw3 instance whose chamber is missing from the tables is inconclusive.
pub fn check_twin_tables(re: &Realization, gens: &[usize], t: &TwinTables, bounds: &CheckBounds) -> TwinningReport {
    let mut tw1 = AxiomReport::new("Tw1", bounds);
    let mut tw2 = AxiomReport::new("Tw2", bounds);
    let mut tw3 = AxiomReport::new("Tw3", bounds);
    for i in 0..t.plus.len() {
        for j in 0..t.minus.len() {
            tw1.record(t.star_mp[j][i] == t.star_pm[i][j].inverse(re), || format!("{} {}", t.plus[i], t.minus[j]));
        }
    }
    // (C, D) with C of sign ε and D of sign -ε, in both orientations
    for (star, dist, cs, ds) in [(&t.star_pm, &t.d_minus, &t.plus, &t.minus), (&t.star_mp, &t.d_plus, &t.minus, &t.plus)] {
        for c in 0..cs.len() {
            for d in 0..ds.len() {
                let w = &star[c][d];
                for &s in gens {
                    let ws = w.mul_simple(re, s);
                    let mut found = false;
                    for d2 in 0..ds.len() {
                        if !is_simple(&dist[d][d2], s) {
                            continue;
                        }
                        if ws.length() < w.length() {
                            tw2.record(star[c][d2] == ws, || format!("{} {} {}", cs[c], ds[d], ds[d2]));
                        }
                        found |= star[c][d2] == ws;
                    }
                    if found {
                        tw3.record(true, String::new);
                    } else {
                        tw3.record_inconclusive();
                    }
                }
            }
        }
    }
    TwinningReport { tw1, tw2, tw3 }
}

/// Exhaustive over the germs of the window. Tw3 asks for a germ that may lie
/// outside the window; when none is found the case counts as inconclusive.
pub fn check_twinning(at: &TreeAtlas, bounds: &CheckBounds) -> Result<TwinningReport, InfinityError> {
    let plus = germs(at, Sign::Plus);
    let minus = germs(at, Sign::Minus);
    let label = |g: &SectorGerm| format!("{}{:?}", if g.sign == Sign::Plus { "+" } else { "-" }, g.end);
    let t = TwinTables {
        plus: plus.iter().map(label).collect(),
        minus: minus.iter().map(label).collect(),
        star_pm: table(at, &plus, &minus)?,
        star_mp: table(at, &minus, &plus)?,
        d_plus: table(at, &plus, &plus)?,
        d_minus: table(at, &minus, &minus)?,
    };
    let gens: Vec<usize> = (0..at.rank()).collect();
    Ok(check_twin_tables(at.realization(), &gens, &t, bounds))
}

/// Both sides of the equivalence `d_+(Q+, Q') = d_*(Q-, Q')` ⟺ `Q' ⊂ A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OppositeDistance {
    pub distances_agree: bool,
    pub in_chart: bool,
}

impl OppositeDistance {
    pub fn holds(&self) -> bool {
        self.distances_agree == self.in_chart
    }
}

/// `q_plus` and `q_minus` must be opposite in `chart`.
pub fn check_opposite_distance(
    at: &TreeAtlas,
    chart: usize,
    q_plus: &SectorGerm,
    q_minus: &SectorGerm,
    q_prime: &SectorGerm,
) -> Result<OppositeDistance, InfinityError> {
    if !relative(at, chart, q_plus, q_minus)?.is_identity() {
        return Err(InfinityError::NotOpposite);
    }
    let lhs = d_plus(at, q_plus, q_prime)?;
    let rhs = d_star(at, q_minus, q_prime)?;
    let in_chart = at.end_direction(chart, &q_prime.end).is_ok();
    Ok(OppositeDistance { distances_agree: lhs == rhs, in_chart })
}

/// The equivalence for every chart, every opposite pair in it and every positive germ.
pub fn check_opposite_distances(at: &TreeAtlas, bounds: &CheckBounds) -> Result<AxiomReport, InfinityError> {
    let mut rep = AxiomReport::new("opposite-distance", bounds);
    let primes = germs(at, Sign::Plus);
    let rank = at.rank();
    for chart in 0..at.chart_count() {
        let (lo, hi) = at.chart_ends(chart);
        for mask in 0..(1usize << rank) {
            let pick = |flip: bool| -> End {
                (0..rank).map(|k| if (mask >> k & 1 == 1) != flip { hi[k] } else { lo[k] }).collect()
            };
            let qp = SectorGerm::new(Sign::Plus, pick(false));
            let qm = SectorGerm::new(Sign::Minus, pick(true));
            for q in &primes {
                let r = check_opposite_distance(at, chart, &qp, &qm, q)?;
                rep.record(r.holds(), || format!("chart {chart}, {:?}, {:?}, {:?}", qp.end, qm.end, q.end));
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_distances() {
        let at = TreeAtlas::tree(2, 2).unwrap();
        let (a, b) = at.chart_ends(0);
        let qa = SectorGerm::new(Sign::Plus, a.clone());
        let qb = SectorGerm::new(Sign::Plus, b.clone());
        assert!(d_plus(&at, &qa, &qa).unwrap().is_identity());
        assert_eq!(d_plus(&at, &qa, &qb).unwrap().word(), &[0]);
        // opposite germs of one chart
        let qm = SectorGerm::new(Sign::Minus, a.clone());
        assert!(d_star(&at, &qb, &qm).unwrap().is_identity());
        assert_eq!(d_star(&at, &qa, &qm).unwrap().word(), &[0]);
        assert!(d_star(&at, &qa, &qb).is_err());
    }

    #[test]
    fn product_distances_multiply() {
        let at = TreeAtlas::product(2, 2, 1).unwrap();
        let q1 = SectorGerm::new(Sign::Plus, vec![0, 0]);
        let q2 = SectorGerm::new(Sign::Plus, vec![1, 0]);
        let q3 = SectorGerm::new(Sign::Plus, vec![1, 2]);
        assert_eq!(d_plus(&at, &q1, &q2).unwrap().word(), &[0]);
        assert_eq!(d_plus(&at, &q2, &q3).unwrap().word(), &[1]);
        assert_eq!(d_plus(&at, &q1, &q3).unwrap().length(), 2);
        assert!(chart_independent(&at, &q1, &q3).unwrap());
    }

    #[test]
    fn opposite_distance_on_a_chart() {
        let at = TreeAtlas::tree(2, 2).unwrap();
        let (a, b) = at.chart_ends(0);
        let qp = SectorGerm::new(Sign::Plus, b);
        let qm = SectorGerm::new(Sign::Minus, a);
        for e in at.ends() {
            let r = check_opposite_distance(&at, 0, &qp, &qm, &SectorGerm::new(Sign::Plus, e.clone())).unwrap();
            assert!(r.holds());
            assert_eq!(r.in_chart, at.end_direction(0, &e).is_ok());
        }
    }
}
