//! Greedy-net grids on curved and fractal sets: cover, nesting, separation,
//! and containment-ball properties checked exhaustively at desk scale.

use geom::BoundaryModel;
use grid::{build_grid, DyadicGrid, GridSpec};

fn sphere_grid() -> DyadicGrid {
    let model = BoundaryModel::sphere(3, 1.0);
    let spec = GridSpec {
        k_min: 0,
        k_max: 4,
        window: None,
        sample_spacing: Some(1.0 / 64.0),
        seed: 11,
    };
    build_grid(&model, &spec).expect("sphere grid builds")
}

#[test]
fn every_sample_lands_in_one_cube_per_level() {
    let g = sphere_grid();
    let total: f64 = (0..g.samples().len()).map(|i| g.sample_weight(i)).sum();
    for k in g.k_min()..=g.k_max() {
        let mut seen = vec![false; g.samples().len()];
        let mut sigma = 0.0;
        for &id in g.level(k) {
            let cube = g.cube(id);
            sigma += cube.sigma;
            for &m in &cube.members {
                assert!(
                    !seen[m as usize],
                    "sample {m} assigned to two cubes at level {k}"
                );
                seen[m as usize] = true;
            }
        }
        assert!(
            seen.iter().all(|&s| s),
            "level {k} cubes must cover every sample"
        );
        assert!(
            (sigma - total).abs() < 1e-9 * total,
            "level {k} mass {sigma} must equal the total {total}"
        );
    }
}

#[test]
fn net_centers_are_separated_and_cubes_nest() {
    let g = sphere_grid();
    for k in g.k_min()..=g.k_max() {
        let sep = (2.0f64).powi(-k);
        let ids = g.level(k);
        for (a, &ia) in ids.iter().enumerate() {
            for &ib in ids.iter().skip(a + 1) {
                let d = g.cube(ia).center.dist(&g.cube(ib).center);
                assert!(
                    d >= sep * (1.0 - 1e-12),
                    "level {k} centers {ia:?}, {ib:?} at distance {d} violate separation {sep}"
                );
            }
        }
    }
    for cube in g.cubes() {
        if let Some(p) = cube.parent {
            let parent = g.cube(p);
            for &m in &cube.members {
                assert!(
                    parent.is_member(m),
                    "member {m} of {:?} missing from parent {:?}",
                    cube.id,
                    p
                );
            }
        }
    }
}

#[test]
fn centers_belong_to_their_own_cubes() {
    let g = sphere_grid();
    for cube in g.cubes() {
        let dist = cube
            .members
            .iter()
            .map(|&m| cube.center.dist(&g.samples()[m as usize]))
            .fold(f64::INFINITY, f64::min);
        assert!(
            dist < 1e-12,
            "center of {:?} must be one of its own member samples, nearest is {dist}",
            cube.id
        );
    }
}

#[test]
fn containment_radii_bracket_each_cube() {
    let g = sphere_grid();
    for cube in g.cubes() {
        let ell = cube.side();
        assert!(
            cube.r > 0.0 && cube.r <= ell,
            "inner radius {} of {:?} must lie in (0, {ell}]",
            cube.r,
            cube.id
        );
        // Everything within r of the center is a member; exhaustive scan kept
        // to the coarse levels to stay fast.
        if cube.k <= 2 {
            for (i, p) in g.samples().iter().enumerate() {
                if cube.center.dist(p) < cube.r {
                    assert!(
                        cube.is_member(i as u32),
                        "sample {i} inside the inner ball of {:?} is not a member",
                        cube.id
                    );
                }
            }
        }
        assert!(
            cube.outer <= 2.0 * ell,
            "members of {:?} spread {} beyond twice the scale {ell}",
            cube.id,
            cube.outer
        );
    }
}

#[test]
fn cube_ball_report_is_consistent() {
    let g = sphere_grid();
    let id = g.level(2)[0];
    let report = g.cube_ball(id).expect("cube ball");
    let cube = g.cube(id);
    assert_eq!(report.ball.r, cube.r, "ball radius is the inner radius");
    assert!(
        report.sigma_delta <= cube.sigma * (1.0 + 1e-9),
        "surface-ball mass {} cannot exceed cube mass {} when the ball is inside",
        report.sigma_delta,
        cube.sigma
    );
    assert!(
        report.containment_radius <= 2.0 * cube.side(),
        "containment radius stays comparable to the scale"
    );
}

#[test]
fn cantor_grid_respects_dyadic_structure() {
    let model = BoundaryModel::four_corner_cantor(4);
    let spec = GridSpec {
        k_min: -1,
        k_max: 4,
        window: None,
        sample_spacing: Some(1.0 / 64.0),
        seed: 5,
    };
    let g = build_grid(&model, &spec).expect("cantor grid builds");
    assert_eq!(
        g.level(-1).len(),
        1,
        "one cube at scale 2 covers the whole unit-square set"
    );
    let total: f64 = g.level(-1).iter().map(|&id| g.cube(id).sigma).sum();
    assert!(
        (total - 1.0).abs() < 1e-12,
        "natural measure is normalized, got {total}"
    );
    for k in 0..=4 {
        assert!(
            g.level(k).len() >= g.level(k - 1).len(),
            "nets are nested so they never shrink"
        );
    }
    assert!(
        g.level(4).len() > g.level(-1).len(),
        "finest net must be strictly larger than the coarsest"
    );
}

#[test]
fn bounded_model_rejects_window_and_kmin_respects_diameter() {
    let model = BoundaryModel::sphere(3, 1.0);
    let mut spec = GridSpec {
        k_min: 0,
        k_max: 2,
        window: Some(geom::Frame {
            chart_center: vec![0.0, 0.0],
            half_extent: 1.0,
        }),
        sample_spacing: None,
        seed: 0,
    };
    assert!(
        build_grid(&model, &spec).is_err(),
        "sphere grid must reject a chart window"
    );
    spec.window = None;
    spec.k_min = -4;
    spec.k_max = 0;
    assert!(
        build_grid(&model, &spec).is_err(),
        "coarsest scale far beyond the diameter must be rejected"
    );
}
