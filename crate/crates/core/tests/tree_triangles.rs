use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use warpgeom::treegraded::{
    cone_distance, cone_geodesic, find_open_perturbation, is_open, median, tree_distance,
    tree_geodesic, ConePoint, MetricTree, Perturbation, TreePoint, SYMMETRIC_DIAGNOSTIC,
};

fn random_tree(rng: &mut impl Rng, edges: usize, integer_lengths: bool) -> MetricTree {
    let names: Vec<String> = (0..=edges).map(|i| format!("v{i}")).collect();
    let list: Vec<(&str, &str, f64)> = (1..=edges)
        .map(|i| {
            let parent = rng.gen_range(0..i);
            let len = if integer_lengths {
                f64::from(rng.gen_range(1..=3))
            } else {
                rng.gen_range(0.5..3.0)
            };
            (names[parent].as_str(), names[i].as_str(), len)
        })
        .collect();
    MetricTree::from_edges(&list).unwrap()
}

fn random_point(rng: &mut impl Rng, t: &MetricTree) -> TreePoint {
    let e = rng.gen_range(0..t.edges().len());
    t.point(e, rng.gen_range(0.0..=t.edges()[e].length))
        .unwrap()
}

fn random_cone(rng: &mut impl Rng, t: &MetricTree) -> ConePoint {
    ConePoint {
        t: rng.gen_range(-2.0..2.0),
        p: random_point(rng, t),
    }
}

#[test]
fn cone_distance_is_a_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let edges = rng.gen_range(1..=20);
        let t = random_tree(&mut rng, edges, false);
        for _ in 0..100 {
            let [a, b, c] = [0; 3].map(|_| random_cone(&mut rng, &t));
            let (ab, ba) = (cone_distance(&t, &a, &b), cone_distance(&t, &b, &a));
            assert_eq!(ab, ba);
            assert!(ab <= cone_distance(&t, &a, &c) + cone_distance(&t, &c, &b) + 1e-12);
            assert_eq!(cone_distance(&t, &a, &a), 0.0);
        }
    }
}

#[test]
fn geodesic_length_matches_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let edges = rng.gen_range(1..=20);
        let t = random_tree(&mut rng, edges, false);
        let (x, y) = (random_cone(&mut rng, &t), random_cone(&mut rng, &t));
        let g = cone_geodesic(&t, &x, &y);
        assert!((g.length - cone_distance(&t, &x, &y)).abs() <= 1e-12 * (1.0 + g.length));
        // the sampled path is a chain of exact sub-distances
        let k = 64;
        let pts: Vec<ConePoint> = (0..=k).map(|i| g.at(&t, i as f64 / k as f64)).collect();
        let walked: f64 = pts
            .windows(2)
            .map(|w| cone_distance(&t, &w[0], &w[1]))
            .sum();
        assert!(
            (walked - g.length).abs() <= 1e-12 * (1.0 + g.length),
            "{walked} vs {}",
            g.length
        );
        assert!(cone_distance(&t, &pts[0], &x) <= 1e-12 && cone_distance(&t, &pts[k], &y) <= 1e-12);
        // tree arc passes through its listed vertices
        let arc = tree_geodesic(&t, &x.p, &y.p);
        assert_eq!(arc.length, tree_distance(&t, &x.p, &y.p));
    }
}

#[test]
fn median_is_symmetric_and_on_all_arcs() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..500 {
        let edges = rng.gen_range(1..=20);
        let t = random_tree(&mut rng, edges, false);
        let [a, b, c] = [0; 3].map(|_| random_point(&mut rng, &t));
        let m = median(&t, &a, &b, &c);
        for other in [
            median(&t, &b, &c, &a),
            median(&t, &c, &a, &b),
            median(&t, &b, &a, &c),
        ] {
            assert!(tree_distance(&t, &m, &other) <= 1e-12);
        }
        for (p, q) in [(a, b), (a, c), (b, c)] {
            let via = tree_distance(&t, &p, &m) + tree_distance(&t, &m, &q);
            assert!((via - tree_distance(&t, &p, &q)).abs() <= 1e-12);
        }
    }
}

#[test]
fn asymmetric_configurations_admit_open_perturbations() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut done = 0;
    while done < 1000 {
        let edges = rng.gen_range(2..=20);
        let t = random_tree(&mut rng, edges, false);
        let [x, y, z] = [0; 3].map(|_| random_cone(&mut rng, &t));
        let m = median(&t, &x.p, &y.p, &z.p);
        let symmetric = (x.t - y.t).abs() < 1e-3
            && (tree_distance(&t, &x.p, &m) - tree_distance(&t, &y.p, &m)).abs() < 1e-3;
        if symmetric || cone_distance(&t, &x, &y) < 1e-3 {
            continue;
        }
        // half of the cases are forced onto a colliding configuration
        let z = if rng.gen_bool(0.5) {
            collide(&t, &x, &y, z).unwrap_or(z)
        } else {
            z
        };
        for n in [1, 2, 7, 64, rng.gen_range(1..=64)] {
            match find_open_perturbation(&t, &x, &y, &z, n).unwrap() {
                Perturbation::Found(zn) => {
                    assert!(cone_distance(&t, &zn, &z) <= 1.0 / f64::from(n) + 1e-15);
                    assert!(is_open(&t, &x, &y, &zn));
                }
                Perturbation::NotFound { diagnostic, .. } => {
                    panic!("n {n}: {diagnostic}; x {x} y {y} z {z}")
                }
            }
        }
        done += 1;
    }
}

/// Moves `z` vertically so that the crossings of `[x,z]` and `[y,z]` agree.
fn collide(t: &MetricTree, x: &ConePoint, y: &ConePoint, z: ConePoint) -> Option<ConePoint> {
    let m = median(t, &x.p, &y.p, &z.p);
    let (dx, dy, dz) = (
        tree_distance(t, &x.p, &m),
        tree_distance(t, &y.p, &m),
        tree_distance(t, &z.p, &m),
    );
    let (a, b) = (dx / (dx + dz), dy / (dy + dz));
    if dz < 1e-9 || (a - b).abs() < 1e-9 {
        return None;
    }
    // x.t + (s − x.t) a = y.t + (s − y.t) b
    let s = (y.t * (1.0 - b) - x.t * (1.0 - a)) / (a - b);
    let zc = ConePoint { t: s, p: z.p };
    (!is_open(t, x, y, &zc)).then_some(zc)
}

#[test]
fn symmetric_configuration_is_reported() {
    let t = MetricTree::parse("o a 1\no b 1\no c 1\nc d 2\n").unwrap();
    let x = ConePoint {
        t: 0.0,
        p: t.named_vertex("a").unwrap(),
    };
    let y = ConePoint {
        t: 0.0,
        p: t.named_vertex("b").unwrap(),
    };
    for (z, n) in [
        (
            ConePoint {
                t: 0.0,
                p: t.named_vertex("c").unwrap(),
            },
            2,
        ),
        (
            ConePoint {
                t: 0.7,
                p: t.named_vertex("d").unwrap(),
            },
            1,
        ),
        (
            ConePoint {
                t: -0.3,
                p: t.point_between("c", "d", 0.5).unwrap(),
            },
            5,
        ),
    ] {
        assert!(!is_open(&t, &x, &y, &z));
        match find_open_perturbation(&t, &x, &y, &z, n).unwrap() {
            Perturbation::NotFound {
                diagnostic,
                candidates,
            } => {
                assert_eq!(diagnostic, SYMMETRIC_DIAGNOSTIC);
                assert!(candidates > 0);
            }
            other => panic!("{other:?}"),
        }
    }
}

/// Sides `[v,a]` and `[v,b]` meet away from `v`: 10³ samples on each side,
/// the nearest sample of `[v,b]` refined by ternary search (the distance to a
/// geodesic is convex in `ℝ × T`).
fn sides_meet(t: &MetricTree, v: &ConePoint, a: &ConePoint, b: &ConePoint) -> bool {
    const SAMPLES: usize = 1000;
    let (g1, g2) = (cone_geodesic(t, v, a), cone_geodesic(t, v, b));
    let s2: Vec<ConePoint> = (0..=SAMPLES)
        .map(|i| g2.at(t, i as f64 / SAMPLES as f64))
        .collect();
    let tol = 1e-9 * (1.0 + g1.length.max(g2.length));
    (0..=SAMPLES)
        .map(|i| i as f64 / SAMPLES as f64)
        .filter(|&s| s * g1.length >= 0.05 * g1.length.min(g2.length))
        .any(|s| {
            let p = g1.at(t, s);
            let d = |u: f64| cone_distance(t, &p, &g2.at(t, u));
            let nearest = (0..=SAMPLES)
                .min_by(|&i, &j| {
                    cone_distance(t, &p, &s2[i]).total_cmp(&cone_distance(t, &p, &s2[j]))
                })
                .unwrap_or(0);
            let (mut lo, mut hi) = (
                nearest.saturating_sub(1) as f64 / SAMPLES as f64,
                (nearest + 1).min(SAMPLES) as f64 / SAMPLES as f64,
            );
            for _ in 0..60 {
                let (m1, m2) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
                if d(m1) <= d(m2) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            d(0.5 * (lo + hi)) < tol
        })
}

fn brute_force_open(t: &MetricTree, x: &ConePoint, y: &ConePoint, z: &ConePoint) -> bool {
    !sides_meet(t, x, y, z) && !sides_meet(t, y, x, z) && !sides_meet(t, z, x, y)
}

#[test]
fn openness_agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut cases, mut open) = (0, 0);
    while cases < 100 {
        let edges = rng.gen_range(1..=4);
        let t = random_tree(&mut rng, edges, true);
        let grid = |rng: &mut ChaCha8Rng| {
            let e = rng.gen_range(0..t.edges().len());
            let len = t.edges()[e].length;
            let offset = len * f64::from(rng.gen_range(0..=2)) / 2.0;
            ConePoint {
                t: f64::from(rng.gen_range(-2..=2)) * 0.5,
                p: t.point(e, offset).unwrap(),
            }
        };
        let [x, y, z] = [0; 3].map(|_| grid(&mut rng));
        if [(x, y), (x, z), (y, z)]
            .iter()
            .any(|(a, b)| cone_distance(&t, a, b) < 1e-9)
        {
            continue;
        }
        let fast = is_open(&t, &x, &y, &z);
        assert_eq!(fast, brute_force_open(&t, &x, &y, &z), "x {x} y {y} z {z}");
        cases += 1;
        open += usize::from(fast);
    }
    // both verdicts occur
    assert!((10..=95).contains(&open), "{open}");
}
