//! Fattened cubes overlap exactly when the originals touch.

use geom::{AxisBox, BoundaryModel, Point};
use whitney::{
    decompose, fatten, pairwise_fattening_check, SideFilter, LAMBDA_DEFAULT, LAMBDA_MAX,
};

fn unit_cube_at(x: f64, y: f64, z: f64) -> AxisBox {
    AxisBox::new(
        Point::new(&[x, y, z]),
        Point::new(&[x + 1.0, y + 1.0, z + 1.0]),
    )
}

#[test]
fn half_space_sweep_finds_no_phantom_overlaps() {
    let model = BoundaryModel::hyperplane(3);
    let window = AxisBox::new(Point::new(&[-1.0, -1.0, 0.0]), Point::new(&[1.0, 1.0, 4.5]));
    let decomp = decompose(&model, &window, SideFilter::Interior, 4).expect("decomposition");
    assert!(
        decomp.levels_present().len() >= 2,
        "sweep needs at least two levels to cross-check"
    );

    let report = pairwise_fattening_check(&decomp, LAMBDA_DEFAULT).expect("pairwise sweep");
    assert!(
        report.violations.is_empty(),
        "disjoint cubes grew into each other: {:?}",
        report.violations
    );
    assert!(
        report.touching_pairs > 0,
        "sweep should see touching neighbors"
    );
    assert!(
        report.pairs_checked >= report.touching_pairs,
        "touching pairs cannot outnumber checked pairs"
    );
    // Some shrink factor strictly between 1/2 and 1 separates every cube
    // from its neighbors' fattened boxes.
    assert!(
        report.min_meeting_tau > 0.5 && report.min_meeting_tau <= 1.0,
        "meeting shrink factor {} out of range",
        report.min_meeting_tau
    );
}

#[test]
fn face_sharing_cubes_overlap_by_lambda() {
    let a = unit_cube_at(0.0, 0.0, 0.0);
    let b = unit_cube_at(1.0, 0.0, 0.0);
    let (a_star, _) = fatten(&a, 0.05).expect("fatten a");
    let (b_star, _) = fatten(&b, 0.05).expect("fatten b");

    let cap = a_star.intersection(&b_star).expect("fattened boxes meet");
    assert!(
        (cap.side(0) - 0.05).abs() <= 1e-12,
        "overlap thickness {} should equal lambda across the shared face",
        cap.side(0)
    );
    assert!(
        (cap.side(1) - 1.05).abs() <= 1e-12 && (cap.side(2) - 1.05).abs() <= 1e-12,
        "overlap should span the full fattened face"
    );
    assert!(a_star.interiors_intersect(&b_star));
}

#[test]
fn corner_touching_cubes_overlap() {
    let a = unit_cube_at(0.0, 0.0, 0.0);
    let b = unit_cube_at(1.0, 1.0, 1.0);
    let (a_star, _) = fatten(&a, 0.05).expect("fatten a");
    let (b_star, _) = fatten(&b, 0.05).expect("fatten b");

    let cap = a_star.intersection(&b_star).expect("fattened boxes meet");
    for axis in 0..3 {
        assert!(
            (cap.side(axis) - 0.05).abs() <= 1e-12,
            "corner overlap thickness {} wrong on axis {}",
            cap.side(axis),
            axis
        );
    }
    assert!(a_star.interiors_intersect(&b_star));
}

/// A quarter-side gap survives even the doubled fattening at the largest
/// legal lambda: each side grows by at most 0.1 toward the other.
#[test]
fn separated_cubes_stay_disjoint() {
    let a = unit_cube_at(0.0, 0.0, 0.0);
    let b = unit_cube_at(1.25, 0.0, 0.0);
    let (a_star, a_star2) = fatten(&a, LAMBDA_MAX).expect("fatten a");
    let (b_star, b_star2) = fatten(&b, LAMBDA_MAX).expect("fatten b");

    assert!(!a_star.intersects(&b_star), "singly fattened boxes met");
    assert!(
        !a_star2.intersects(&b_star2),
        "doubly fattened boxes met across a quarter-side gap"
    );
}

#[test]
fn fattening_rejects_out_of_range_lambda() {
    let a = unit_cube_at(0.0, 0.0, 0.0);
    assert!(fatten(&a, 0.2).is_err(), "lambda 0.2 must be rejected");
    assert!(fatten(&a, 0.0).is_err(), "lambda 0 must be rejected");
    assert!(fatten(&a, -0.05).is_err(), "negative lambda must be rejected");
    assert!(fatten(&a, LAMBDA_MAX).is_ok(), "the top lambda is legal");
}
