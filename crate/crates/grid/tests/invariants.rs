//! Property tests over randomized windows: nesting, monotonicity of mass, and
//! lattice identities that must hold bit-for-bit.

use geom::{BoundaryModel, Frame};
use grid::{build_grid, GridSpec};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn cube_mass_never_exceeds_parent_mass(
        cx in -4i32..4,
        cy in -4i32..4,
        seed in 0u64..1000,
    ) {
        let model = BoundaryModel::hyperplane(3);
        let spec = GridSpec {
            k_min: 0,
            k_max: 3,
            window: Some(Frame {
                chart_center: vec![cx as f64 + 0.5, cy as f64 + 0.5],
                half_extent: 0.5,
            }),
            sample_spacing: None,
            seed,
        };
        let g = build_grid(&model, &spec).expect("plane grid");
        for cube in g.cubes() {
            if let Some(p) = cube.parent {
                let parent = g.cube(p);
                prop_assert!(cube.sigma <= parent.sigma + 1e-12);
                prop_assert!(cube.k == parent.k + 1);
                let cell = cube.chart_cell.as_ref().unwrap();
                let pcell = parent.chart_cell.as_ref().unwrap();
                for i in 0..cell.dim() {
                    prop_assert!(cell.lo().coord(i) >= pcell.lo().coord(i));
                    prop_assert!(cell.hi().coord(i) <= pcell.hi().coord(i));
                }
            }
        }
    }

    #[test]
    fn translated_windows_produce_identical_cell_counts(
        cx in -3i32..3,
        cy in -3i32..3,
    ) {
        let model = BoundaryModel::hyperplane(3);
        let mk = |x: f64, y: f64| GridSpec {
            k_min: 0,
            k_max: 2,
            window: Some(Frame { chart_center: vec![x, y], half_extent: 0.5 }),
            sample_spacing: None,
            seed: 0,
        };
        let a = build_grid(&model, &mk(cx as f64 + 0.5, cy as f64 + 0.5)).expect("grid a");
        let b = build_grid(&model, &mk(0.5, 0.5)).expect("grid b");
        prop_assert_eq!(a.cube_count(), b.cube_count());
        for k in 0..=2 {
            prop_assert_eq!(a.level(k).len(), b.level(k).len());
        }
    }
}
