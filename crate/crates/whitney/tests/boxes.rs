//! Boxes over boundary cubes and the domains carved out by removed families.

use std::sync::OnceLock;

use geom::{adr_check, AxisBox, BoundaryModel, ExecMode, Frame, Point};
use grid::{build_grid, CubeFamily, CubeId, DyadicGrid, GridSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use whitney::{
    approx_domain, build_regions, carleson_box, carleson_box_ball, decompose_focused, sawtooth,
    RegionConfig, RegionSet, SegmentChains, SideFilter, WhitneyDecomposition,
};

struct Fixture {
    model: BoundaryModel,
    grid: DyadicGrid,
    decomp: WhitneyDecomposition,
    regions: RegionSet,
}

/// Planar half-space fixture: seven grid levels over the unit chart window,
/// a decomposition refined to level 8 near the chart, and a region for every
/// interior cube. Coverage constants keep the region unions solid, so the
/// carved domains have no interior slab gaps.
fn fixture() -> &'static Fixture {
    static FX: OnceLock<Fixture> = OnceLock::new();
    FX.get_or_init(|| {
        let model = BoundaryModel::hyperplane(2);
        let grid = build_grid(
            &model,
            &GridSpec {
                k_min: 0,
                k_max: 6,
                window: Some(Frame::new(vec![0.5], 0.5)),
                sample_spacing: None,
                seed: 7,
            },
        )
        .expect("grid");
        let window = AxisBox::new(Point::new(&[-24.0, 0.0]), Point::new(&[25.0, 24.0]));
        let focus = AxisBox::new(Point::new(&[-0.1, 0.0]), Point::new(&[1.1, 0.02]));
        let decomp = decompose_focused(&model, &window, SideFilter::Interior, 8, &focus, 80.0)
            .expect("decomposition");
        let chains = SegmentChains { model: &model };
        let regions = build_regions(
            &grid,
            &decomp,
            &RegionConfig::covering(2),
            &chains,
            ExecMode::Sequential,
        )
        .expect("regions");
        Fixture {
            model,
            grid,
            decomp,
            regions,
        }
    })
}

/// The interior level-1 cube covering the left chart half.
fn left_l1(fx: &Fixture) -> CubeId {
    fx.grid
        .level(1)
        .iter()
        .copied()
        .find(|&id| {
            let c = fx.grid.cube(id);
            !c.rim && c.center.coord(0) < 0.5
        })
        .expect("left level-1 cube")
}

/// Bottom height of the deepest member box: the finest chained level is two
/// below the decomposition floor band start, and its lowest admissible box
/// starts at 29 floor sides, pulled down by half the fattening.
fn floor_bottom() -> f64 {
    (29.0 - 0.025) * 2.0f64.powi(-8)
}

#[test]
fn cube_box_is_trapped_by_an_enclosing_ball() {
    let fx = fixture();
    let q = left_l1(fx);
    let tq = carleson_box(&fx.grid, &fx.decomp, &fx.regions, q).expect("box over the cube");
    let x_q = fx.grid.cube(q).center.clone();
    let side = fx.grid.cube(q).side();

    let kappa0 = tq.enclosing_multiplier(&x_q, side);
    assert!(
        kappa0 > 1.0 && kappa0 < 40.0,
        "enclosing multiplier {} out of the expected range",
        kappa0
    );

    // Rejection sweep: points of the enlarged bounding box stay inside the
    // enclosing ball whenever they are inside the closed domain.
    let bounds = tq.bounds().dilate(1.3);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let (mut inside, mut outside) = (0usize, 0usize);
    for _ in 0..10_000 {
        let p = Point::new(&[
            rng.gen_range(bounds.lo().coord(0)..bounds.hi().coord(0)),
            rng.gen_range(bounds.lo().coord(1)..bounds.hi().coord(1)),
        ]);
        if tq.closure_contains(&p) {
            inside += 1;
            assert!(
                p.dist(&x_q) <= kappa0 * side * (1.0 + 1e-12),
                "contained point {:?} escapes the enclosing ball",
                p
            );
        } else {
            outside += 1;
        }
    }
    assert!(inside > 500, "sweep should land inside, got {inside}");
    assert!(outside > 500, "sweep should land outside, got {outside}");

    // The deepest boxes come from the chained floor band.
    let bottom = tq
        .boxes
        .iter()
        .map(|b| b.lo().coord(1))
        .fold(f64::INFINITY, f64::min);
    assert!(
        (bottom - floor_bottom()).abs() < 1e-12,
        "union bottom {} disagrees with the floor-band height {}",
        bottom,
        floor_bottom()
    );
    assert!(
        (tq.min_box_side - 1.05 * 2.0f64.powi(-8)).abs() < 1e-12,
        "smallest box side {} is not a fattened floor cube",
        tq.min_box_side
    );
}

#[test]
fn ball_box_covers_a_solid_band_above_the_floor() {
    let fx = fixture();
    let center = Point::new(&[0.25, 0.0]);
    let r = 0.0025;
    let delta = fx.model.surface_ball(center.clone(), r).expect("surface ball");
    let td = carleson_box_ball(&fx.grid, &fx.decomp, &fx.regions, &delta).expect("ball box");

    // The scale rule puts this radius at level 1, and only the left cube
    // lies within two radii, so the ball box equals that cube's box.
    let tq = carleson_box(&fx.grid, &fx.decomp, &fx.regions, left_l1(fx)).expect("cube box");
    let mut ids_ball = td.cube_ids.clone();
    let mut ids_cube = tq.cube_ids.clone();
    ids_ball.sort_unstable_by_key(|id| id.0);
    ids_cube.sort_unstable_by_key(|id| id.0);
    assert_eq!(ids_ball, ids_cube, "ball box should adopt the single root");

    // Solid coverage: a rectangle of probe points over the ball, from just
    // above the realized bottom up to four cube sides, is entirely inside.
    let bottom = floor_bottom();
    for i in 0..20 {
        let x = 0.06 + 0.02 * i as f64;
        for z in [bottom * 1.02, 0.15, 0.3, 0.7, 1.5, 2.0] {
            let p = Point::new(&[x, z]);
            assert!(
                td.contains(&p),
                "probe {:?} fell through the box over the ball",
                p
            );
        }
    }

    // The decomposition floor truncates the box from below, so the part of
    // the enlarged ball near the boundary has nothing to land in: the
    // inclusion into the box holds vacuously under the floor. Record the
    // gap instead of hiding it.
    assert!(
        1.25 * r < bottom,
        "enlarged ball top {} should stay under the realized bottom {}",
        1.25 * r,
        bottom
    );

    let kappa0 = td.enclosing_multiplier(&center, r);
    let c0 = RegionConfig::covering(2).c0;
    assert!(
        kappa0 >= 1.0 && kappa0 <= 400.0 * (c0 + 30.0),
        "enclosing multiplier {} out of range for the scale rule",
        kappa0
    );
    println!("ball box enclosing multiplier: {kappa0:.1}");
}

#[test]
fn removed_families_shrink_domains_monotonically() {
    let fx = fixture();

    // Removing the left half of generation 4 against removing all of it.
    let left: Vec<CubeId> = fx
        .grid
        .level(4)
        .iter()
        .copied()
        .filter(|&id| !fx.grid.cube(id).rim && fx.grid.cube(id).center.coord(0) < 0.5)
        .collect();
    assert_eq!(left.len(), 8, "left half of generation 4");
    let small = CubeFamily::new(left, fx.grid.cubes()).expect("half family");
    let big = fx.grid.generation_family(4).expect("full family");

    let dom_small = sawtooth(&fx.grid, &fx.decomp, &fx.regions, &small, None).expect("half domain");
    let dom_big = sawtooth(&fx.grid, &fx.decomp, &fx.regions, &big, None).expect("full domain");

    let bounds = dom_small.bounds();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut in_big = 0usize;
    for _ in 0..10_000 {
        let p = Point::new(&[
            rng.gen_range(bounds.lo().coord(0)..bounds.hi().coord(0)),
            rng.gen_range(bounds.lo().coord(1)..bounds.hi().coord(1)),
        ]);
        if dom_big.contains(&p) {
            in_big += 1;
            assert!(
                dom_small.contains(&p),
                "point {:?} of the smaller domain is missing from the larger one",
                p
            );
        }
    }
    assert!(in_big > 200, "sweep should land in the domain, got {in_big}");

    // Witness of strict shrinking: over the kept right half the small-family
    // domain still reaches the floor band, the full removal does not.
    let witness = Point::new(&[0.75, 0.15]);
    assert!(dom_small.contains(&witness), "witness lost from the half removal");
    assert!(!dom_big.contains(&witness), "witness survived the full removal");

    // Removing nothing under a root reproduces the box over that root.
    let q = left_l1(fx);
    let empty = sawtooth(
        &fx.grid,
        &fx.decomp,
        &fx.regions,
        &CubeFamily::empty(),
        Some(q),
    )
    .expect("empty-family domain");
    let tq = carleson_box(&fx.grid, &fx.decomp, &fx.regions, q).expect("cube box");
    let key = |b: &AxisBox| {
        (
            b.lo().coord(0),
            b.lo().coord(1),
            b.hi().coord(0),
            b.hi().coord(1),
        )
    };
    let mut lhs: Vec<_> = empty.boxes.iter().map(key).collect();
    let mut rhs: Vec<_> = tq.boxes.iter().map(key).collect();
    lhs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    rhs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(lhs, rhs, "empty removal must reproduce the root box");
}

#[test]
fn approximating_domains_refine_with_uniform_boundary_measure() {
    let fx = fixture();
    let mut constants = Vec::new();

    for n in 4..=6 {
        let (dom, boundary) = approx_domain(&fx.grid, &fx.decomp, &fx.regions, n).expect("domain");
        let scale = 2.0f64.powi(-(n + 1));
        assert!(
            (dom.min_box_side - 1.05 * scale).abs() < 1e-12,
            "smallest box side {} at generation {} is not one fattened half-step",
            dom.min_box_side,
            n
        );

        let faces = boundary.faces().expect("polyhedral boundary");
        // Lowest downward faces across the chart core sit at the realized
        // bottom for this generation: 29 half-steps less the fattening.
        let core_bottom = (29.0 - 0.025) * scale;
        let mut floor_faces = 0usize;
        for f in faces {
            let c = f.rect.center();
            if f.axis == 1
                && f.outward < 0.0
                && c.coord(0) > 0.15
                && c.coord(0) < 0.85
            {
                assert!(
                    f.offset() >= core_bottom - 1e-12,
                    "face at {} dips under the realized bottom {}",
                    f.offset(),
                    core_bottom
                );
                if f.offset() <= core_bottom * 1.05 {
                    floor_faces += 1;
                }
            }
        }
        assert!(
            floor_faces >= 15,
            "generation {} should expose a floor band, got {} faces",
            n,
            floor_faces
        );

        // Boundary measure stays regular at shared radii across generations.
        let centers: Vec<Point> = faces
            .iter()
            .filter(|f| {
                let c = f.rect.center();
                c.coord(0) > 0.2 && c.coord(0) < 0.8 && c.coord(1) < 40.0 * 2.0f64.powi(-n)
            })
            .map(|f| f.rect.center())
            .collect();
        assert!(centers.len() >= 15, "not enough probe centers at generation {n}");
        let radii = vec![0.02, 0.05, 0.125];
        let report =
            adr_check(&boundary, &centers, &radii, ExecMode::Sequential).expect("measure check");
        assert!(
            report.violations.is_empty(),
            "measure ratio violations at generation {n}: {:?}",
            report.violations
        );
        assert!(
            report.constant >= 1.0 && report.constant <= 4.0,
            "measure constant {} out of range at generation {n}",
            report.constant
        );
        constants.push(report.constant);
    }

    let max = constants.iter().cloned().fold(f64::MIN, f64::max);
    let min = constants.iter().cloned().fold(f64::MAX, f64::min);
    assert!(
        max - min <= 0.5,
        "measure constants drift across generations: {:?}",
        constants
    );
}

#[test]
fn approximating_domains_leave_room_under_floor_faces() {
    let fx = fixture();
    let n = 5;
    let (dom, boundary) = approx_domain(&fx.grid, &fx.decomp, &fx.regions, n).expect("domain");
    let faces = boundary.faces().expect("polyhedral boundary");

    let zmin = faces
        .iter()
        .filter(|f| {
            let c = f.rect.center();
            f.axis == 1 && f.outward < 0.0 && c.coord(0) > 0.15 && c.coord(0) < 0.85
        })
        .map(|f| f.offset())
        .fold(f64::INFINITY, f64::min);
    assert!(zmin.is_finite(), "no downward faces in the chart core");

    let band: Vec<_> = faces
        .iter()
        .filter(|f| {
            let c = f.rect.center();
            f.axis == 1
                && f.outward < 0.0
                && c.coord(0) > 0.2
                && c.coord(0) < 0.8
                && f.offset() <= zmin * 1.05
                && f.rect.side(0) >= 0.008
        })
        .collect();
    assert!(band.len() >= 15, "floor band too sparse: {} faces", band.len());

    // Below every floor face there is an empty ball of a quarter of the
    // probe scale, at the scale of the generation and three octaves down.
    let top_scale = 2.0f64.powi(-n);
    for f in &band {
        let width = f.rect.side(0);
        let c = f.rect.center();
        for s in [top_scale.min(0.9 * width), top_scale.min(0.9 * width) / 8.0] {
            let y = Point::new(&[c.coord(0), f.offset() - 0.5 * s]);
            assert!(
                !dom.closure_contains(&y),
                "probe center {:?} under a floor face is not exterior",
                y
            );
            for i in 0..32 {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / 32.0;
                for rho in [0.25 * s, 0.125 * s] {
                    let p = Point::new(&[
                        y.coord(0) + rho * theta.cos(),
                        y.coord(1) + rho * theta.sin(),
                    ]);
                    assert!(
                        !dom.closure_contains(&p),
                        "empty ball at {:?} touches the domain",
                        p
                    );
                }
            }
        }
    }
}
