use masure_atlas::atlas::{Location, TreeAtlas};
use masure_atlas::checks::CheckBounds;
use masure_atlas::retract::Center;
use masure_atlas::tree::TreeLoc;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn vertex_pairs(at: &TreeAtlas) -> Vec<(Location, Location)> {
    let v = at.vertices();
    let mut out = Vec::new();
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            out.push((v[i].clone(), v[j].clone()));
        }
    }
    out
}

fn sampled_pairs(at: &TreeAtlas, n: usize, seed: u64) -> Vec<(Location, Location)> {
    let v = at.vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (v[rng.gen_range(0..v.len())].clone(), v[rng.gen_range(0..v.len())].clone())).collect()
}

#[test]
fn tree_axioms_depth_four() {
    let at = TreeAtlas::tree(2, 4).unwrap();
    let b = CheckBounds::default();
    for rep in [at.check_ma2(&b), at.check_ma4(&b), at.check_mao(&vertex_pairs(&at), &b), at.check_cocycle(500, &b)] {
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.checked > 100);
    }
    assert!(at.thickness(0).passed());
}

#[test]
fn product_axioms() {
    let at = TreeAtlas::product(2, 2, 2).unwrap();
    let b = CheckBounds::default();
    for rep in [at.check_ma2(&b), at.check_ma4(&b), at.check_mao(&sampled_pairs(&at, 500, 3), &b), at.check_cocycle(300, &b)] {
        assert!(rep.passed(), "{rep:?}");
    }
}

#[test]
fn half_apartments_glue_to_charts() {
    let at = TreeAtlas::tree(2, 3).unwrap();
    let rep = at.check_half_apartment_gluing(0, &CheckBounds::default());
    assert!(rep.passed() && rep.checked == 12 * 11 * 10 / 2, "{rep:?}");
}

#[test]
fn retraction_is_idempotent_and_chart_independent() {
    let at = TreeAtlas::tree(3, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let verts = at.vertices();
    for _ in 0..200 {
        let chart = rng.gen_range(0..at.chart_count());
        let (lo, hi) = at.chart_ends(chart);
        let center = Center { chart, end: if rng.gen_bool(0.5) { lo } else { hi } };
        let v = &verts[rng.gen_range(0..verts.len())];
        let once = at.retract(&center, v).unwrap();
        let loc = at.location(&masure_atlas::atlas::MasurePoint { chart, coords: once.clone() }).unwrap();
        assert_eq!(at.retract(&center, &loc).unwrap(), once);
        for via in at.charts_through(&[v]) {
            if let Some(r) = at.retract_via(&center, v, via) {
                assert_eq!(r, once);
            }
        }
    }
}

#[test]
fn retraction_of_a_geodesic_sharing_the_end_is_an_isometry() {
    let at = TreeAtlas::tree(2, 3).unwrap();
    let f = &at.factors()[0];
    let a = at.chart_id(&[(0, 7)]);
    let center = Center { chart: a, end: vec![7] };
    let other = at.chart_id(&[(7, 11)]);
    for x in f.path((7, 11)) {
        let p = at.point_in(other, &[TreeLoc::Vertex(x)]).unwrap();
        let q = at.retract_point(&center, &p).unwrap();
        let g = at.transition(other, a).unwrap();
        assert_eq!(q.coords, g.map.apply(&p.coords));
    }
}

#[test]
fn product_fold_in_one_factor() {
    let at = TreeAtlas::product(2, 2, 2).unwrap();
    let f = &at.factors()[0];
    let chart = at.chart_id(&[(0, 5), (0, 5)]);
    let path = f.path((0, 5));
    let off = f.children(0).iter().copied().find(|c| !path.contains(c)).unwrap();
    let center = Center { chart, end: vec![0, 0] };
    let x = vec![TreeLoc::Vertex(off), TreeLoc::Vertex(path[1])];
    let y = vec![TreeLoc::Vertex(path[3]), TreeLoc::Vertex(path[2])];
    let seg = at.retract_segment(&center, &x, &y).unwrap();
    assert_eq!(seg.folds.len(), 1);
    let fold = &seg.folds[0];
    assert!(fold.positive);
    assert!(fold.w_plus.is_identity());
    assert_eq!(fold.w_minus.word(), &[0]);
}

#[test]
fn global_preorder_is_total_and_well_defined() {
    let at = TreeAtlas::tree(2, 2).unwrap();
    for (x, y) in vertex_pairs(&at) {
        assert!(at.global_leq(&x, &y).unwrap());
        assert_eq!(at.global_leq_everywhere(&x, &y), Some(true));
    }
}

#[test]
fn folds_are_positive_and_retractions_croissant() {
    let at = TreeAtlas::tree(2, 3).unwrap();
    let cone = at.model().cone();
    let verts = at.vertices();
    // the `a` end of a chart is the germ of a negative sector
    for chart in [0, 17, 40, 65] {
        let center = Center { chart, end: at.chart_ends(chart).0 };
        for x in &verts {
            for y in &verts {
                if !at.global_leq(x, y).unwrap() {
                    continue;
                }
                let seg = at.retract_segment(&center, x, y).unwrap();
                assert!(seg.positively_folded() && seg.increasing, "{x:?} {y:?}");
                let (rx, ry) = (at.retract(&center, x).unwrap(), at.retract(&center, y).unwrap());
                assert_eq!(cone.vec_leq(&rx, &ry), Some(true));
                assert_eq!(seg.points.first(), Some(&rx));
                assert_eq!(seg.points.last(), Some(&ry));
            }
        }
    }
}

#[test]
fn product_preorder_is_transitive_on_samples() {
    let at = TreeAtlas::product(2, 2, 2).unwrap();
    let v = at.vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut found = 0;
    while found < 200 {
        let (x, y, z) = (&v[rng.gen_range(0..v.len())], &v[rng.gen_range(0..v.len())], &v[rng.gen_range(0..v.len())]);
        if at.global_leq(x, y).unwrap() && at.global_leq(y, z).unwrap() {
            found += 1;
            assert!(at.global_leq(x, z).unwrap());
        }
    }
}

#[test]
fn product_folds_are_positive() {
    let at = TreeAtlas::product(2, 2, 2).unwrap();
    let v = at.vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0;
    while checked < 300 {
        let chart = rng.gen_range(0..at.chart_count());
        let center = Center { chart, end: at.chart_ends(chart).0 };
        let (x, y) = (&v[rng.gen_range(0..v.len())], &v[rng.gen_range(0..v.len())]);
        if !at.global_leq(x, y).unwrap() {
            continue;
        }
        checked += 1;
        let seg = at.retract_segment(&center, x, y).unwrap();
        assert!(seg.positively_folded() && seg.increasing, "{x:?} {y:?} {seg:?}");
    }
}
