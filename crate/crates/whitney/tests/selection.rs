//! Selection rules checked against closed-form distance oracles.

use geom::{AxisBox, BoundaryModel, Point};
use whitney::{decompose, Side, SideFilter, DIST_HIGH, DIST_LOW};

/// Clearance of a half-space cube is its bottom height, so the whole window
/// inequality can be recomputed without touching the decomposition code.
#[test]
fn half_space_cubes_sit_in_the_distance_window() {
    let model = BoundaryModel::hyperplane(3);
    let window = AxisBox::new(Point::new(&[-1.0, -1.0, 0.0]), Point::new(&[1.0, 1.0, 2.0]));
    let decomp =
        decompose(&model, &window, SideFilter::Interior, 5).expect("half-space decomposition");
    assert!(
        decomp.len() > 50_000,
        "window should fill densely, got {} cubes",
        decomp.len()
    );

    for w in decomp.cubes() {
        let z_lo = w.cube.lo().coord(2);
        let diam = w.cube.diam();
        assert!(
            (w.dist - z_lo).abs() <= 1e-12 * z_lo.max(1.0),
            "stored clearance {} disagrees with bottom height {} at level {}",
            w.dist,
            z_lo,
            w.k
        );
        assert!(
            DIST_LOW * diam <= z_lo && z_lo <= DIST_HIGH * diam,
            "cube at z = {} with diameter {} escapes the selection window",
            z_lo,
            diam
        );
        // Dilating by 4 keeps a clearance margin of 8.5 diameters.
        let quad = w.cube.dilate(4.0);
        let quad_clearance = z_lo - 1.5 * w.side_len();
        assert!(
            quad_clearance >= 8.5 * diam,
            "4-dilate clearance {} under 8.5 diam {} at level {}",
            quad_clearance,
            8.5 * diam,
            w.k
        );
        let (model_lo, model_hi) = model.dist_to_box(&quad);
        assert!(
            (model_lo - quad_clearance).abs() <= 1e-12 * quad_clearance && model_lo <= model_hi,
            "model clearance of the 4-dilate disagrees with the plane formula"
        );
    }

    // A point at unit height lands in a cube of side 2^-5: the only dyadic
    // side with 18 <= z / side <= 35 at z near 1.
    let probe = Point::new(&[0.01, 0.01, 1.01]);
    let id = decomp.locate(&probe).expect("unit-height point is covered");
    let w = decomp.get(id);
    assert_eq!(w.k, 5, "unit-height cube should sit at level 5");
    assert_eq!(
        w.cube.lo().coord(2),
        1.0,
        "unit-height cube should start exactly at z = 1"
    );
}

/// Outside a circle the clearance is the center distance minus the radius.
/// Far cubes must be coarse: past distance 80 every side reaches 1.
#[test]
fn circle_exterior_far_cubes_are_coarse() {
    let model = BoundaryModel::sphere(2, 1.0);
    let window = AxisBox::new(Point::new(&[-100.0, -100.0]), Point::new(&[100.0, 100.0]));
    let decomp =
        decompose(&model, &window, SideFilter::Exterior, 3).expect("circle exterior decomposition");
    assert!(
        decomp.len() > 10_000,
        "exterior shell should be populated, got {} cubes",
        decomp.len()
    );

    let origin = Point::zeros(2);
    let mut far_cubes = 0usize;
    for w in decomp.cubes() {
        let clearance = w.cube.dist_to_point(&origin) - 1.0;
        assert!(
            clearance > 0.0,
            "exterior cube touches the closed disk at level {}",
            w.k
        );
        assert!(
            (w.dist - clearance).abs() <= 1e-9 * clearance.max(1.0),
            "stored clearance {} disagrees with radial formula {}",
            w.dist,
            clearance
        );
        let diam = w.cube.diam();
        assert!(
            DIST_LOW * diam <= clearance && clearance <= DIST_HIGH * diam,
            "cube at clearance {} with diameter {} escapes the selection window",
            clearance,
            diam
        );
        if clearance > 80.0 {
            far_cubes += 1;
            assert!(
                w.side_len() >= 1.0,
                "cube at clearance {} is too fine: side {}",
                clearance,
                w.side_len()
            );
        }
    }
    assert!(far_cubes > 100, "expected many far cubes, got {far_cubes}");
}

/// Both sides of a plane decompose into mirror images of each other.
#[test]
fn mirror_symmetry_across_the_plane() {
    let model = BoundaryModel::hyperplane(3);
    let window = AxisBox::new(Point::new(&[-0.5, -0.5, -2.25]), Point::new(&[0.5, 0.5, 2.25]));
    let decomp = decompose(&model, &window, SideFilter::Both, 4).expect("two-sided decomposition");

    let interior = decomp
        .cubes()
        .iter()
        .filter(|w| w.side == Side::Interior)
        .count();
    let exterior = decomp.len() - interior;
    assert_eq!(
        interior, exterior,
        "side counts should match across the plane"
    );
    assert!(interior > 3_000, "each side should be dense, got {interior}");

    for w in decomp.cubes() {
        let c = w.center();
        let mirrored = Point::new(&[c.coord(0), c.coord(1), -c.coord(2)]);
        let id = decomp
            .locate(&mirrored)
            .expect("mirrored center must land in a cube");
        let m = decomp.get(id);
        assert_eq!(m.k, w.k, "mirror image changed level");
        assert_ne!(m.side, w.side, "mirror image kept its side");
        assert!(
            (m.cube.lo().coord(2) + w.cube.hi().coord(2)).abs() <= 1e-12,
            "mirror image is not the exact reflection"
        );
    }
}
