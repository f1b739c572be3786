use coxeter_core::rational::int;
use infinity::*;
use masure_atlas::{CheckBounds, TreeAtlas};
use tits_cone::Sign;

#[test]
fn tree_twinning_is_exhaustively_verified() {
    let at = TreeAtlas::tree(2, 4).unwrap();
    let b = CheckBounds::default();
    let rep = check_twinning(&at, &b).unwrap();
    assert!(rep.passed(), "{rep:?}");
    // 24 ends: every Tw3 instance finds its germ inside the window
    assert_eq!(rep.inconclusive(), 0);
    assert_eq!(rep.tw1.checked, 24 * 24);
    for sign in [Sign::Plus, Sign::Minus] {
        assert!(check_w_distance(&at, sign, &b).unwrap().passed());
    }
    let lemma = check_opposite_distances(&at, &b).unwrap();
    assert!(lemma.passed() && lemma.checked == 276 * 2 * 24);
}

#[test]
fn product_twinning() {
    let at = TreeAtlas::product(2, 2, 1).unwrap();
    let b = CheckBounds::default();
    assert!(check_twinning(&at, &b).unwrap().passed());
    assert!(check_w_distance(&at, Sign::Plus, &b).unwrap().passed());
    assert!(check_opposite_distances(&at, &b).unwrap().passed());
}

#[test]
fn adjacency_means_a_shared_panel() {
    let at = TreeAtlas::product(2, 2, 1).unwrap();
    let gs = germs(&at, Sign::Plus);
    for x in &gs {
        for y in &gs {
            let d = d_plus(&at, x, y).unwrap();
            let differing = x.end.iter().zip(&y.end).filter(|(a, b)| a != b).count();
            assert_eq!(d.length() <= 1, differing <= 1);
            assert!(distance::chart_independent(&at, x, y).unwrap());
        }
    }
}

#[test]
fn parallelism_is_an_equivalence_on_window_rays() {
    let at = TreeAtlas::tree(2, 2).unwrap();
    let mut faces = Vec::new();
    for c in 0..at.chart_count() {
        let (a, b) = at.chart_ends(c);
        for base in -2..=2 {
            for e in [a[0], b[0]] {
                faces.push((c, face_toward(&at, c, vec![int(base)], &[Some(e)]).unwrap()));
            }
        }
    }
    let n = faces.len();
    let rel: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| parallel(&at, (faces[i].0, &faces[i].1), (faces[j].0, &faces[j].1)).unwrap()).collect())
        .collect();
    for i in 0..n {
        assert!(rel[i][i]);
        for j in 0..n {
            assert_eq!(rel[i][j], rel[j][i]);
            if rel[i][j] {
                for k in 0..n {
                    assert!(!rel[j][k] || rel[i][k]);
                }
            }
        }
    }
}

#[test]
fn facade_along_a_panel_direction() {
    let at = TreeAtlas::product(2, 2, 3).unwrap();
    for end in [0, 7, 11] {
        let fi = FacetAtInfinity::from_ends(&at, &[Some(end), None]).unwrap();
        let fa = Facade::new(&at, &fi).unwrap();
        let cmp = compare(&fa.graph(), &window_graph(&at.factors()[1]));
        assert!(cmp.passed(), "{cmp:?}");
    }
}
