//! Cube records and disjoint cube families.

use crate::error::GridError;
use geom::{AxisBox, Point};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CubeId(pub u32);

impl CubeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DyadicCube {
    pub id: CubeId,
    /// Generation: side scale 2^{-k}.
    pub k: i32,
    pub parent: Option<CubeId>,
    pub children: Vec<CubeId>,
    /// Cube center on the boundary set.
    pub center: Point,
    /// Inner radius: every boundary sample within `r` of the center is a
    /// member.
    pub r: f64,
    /// Farthest member sample from the center.
    pub outer: f64,
    /// Member sample indices, sorted.
    pub members: Vec<u32>,
    /// Cached measure: sum of member sample weights.
    pub sigma: f64,
    /// Touches the guard margin of a windowed build; excluded from stats.
    pub rim: bool,
    /// Chart cell for lattice builds on flat charts.
    pub chart_cell: Option<AxisBox>,
    /// Ambient bounding box of the member samples.
    pub bbox: Option<AxisBox>,
}

impl DyadicCube {
    #[inline]
    pub fn side(&self) -> f64 {
        (2.0f64).powi(-self.k)
    }

    pub fn is_member(&self, sample: u32) -> bool {
        self.members.binary_search(&sample).is_ok()
    }
}

/// Pairwise-disjoint cube family (no member contains another).
#[derive(Clone, Debug, Default)]
pub struct CubeFamily {
    ids: Vec<CubeId>,
}

impl CubeFamily {
    pub fn empty() -> Self {
        CubeFamily { ids: Vec::new() }
    }

    /// Validates pairwise disjointness via ancestor chains.
    pub fn new(mut ids: Vec<CubeId>, cubes: &[DyadicCube]) -> Result<Self, GridError> {
        ids.sort_unstable();
        ids.dedup();
        let chosen: std::collections::HashSet<CubeId> = ids.iter().copied().collect();
        for &id in &ids {
            if id.index() >= cubes.len() {
                return Err(GridError::UnknownCube(id.0));
            }
            let mut cur = cubes[id.index()].parent;
            while let Some(p) = cur {
                if chosen.contains(&p) {
                    return Err(GridError::OverlappingFamily {
                        child: id.0,
                        ancestor: p.0,
                    });
                }
                cur = cubes[p.index()].parent;
            }
        }
        Ok(CubeFamily { ids })
    }

    pub fn ids(&self) -> &[CubeId] {
        &self.ids
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: CubeId) -> bool {
        self.ids.binary_search(&id).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use geom::Point;

    fn toy_cubes() -> Vec<DyadicCube> {
        // two-level chain: 0 is the parent of 1 and 2, cube 3 stands alone
        let mk = |id: u32, k: i32, parent: Option<u32>| DyadicCube {
            id: CubeId(id),
            k,
            parent: parent.map(CubeId),
            children: Vec::new(),
            center: Point::new(&[id as f64, 0.0]),
            r: 0.5,
            outer: 0.5,
            members: vec![id],
            sigma: 1.0,
            rim: false,
            chart_cell: None,
            bbox: None,
        };
        vec![
            mk(0, 0, None),
            mk(1, 1, Some(0)),
            mk(2, 1, Some(0)),
            mk(3, 0, None),
        ]
    }

    #[test]
    fn family_rejects_nested_ids_and_accepts_disjoint_ones() {
        let cubes = toy_cubes();
        let err = CubeFamily::new(vec![CubeId(0), CubeId(1)], &cubes);
        assert!(
            matches!(err, Err(GridError::OverlappingFamily { child: 1, ancestor: 0 })),
            "a cube and its parent cannot share a family"
        );
        let ok = CubeFamily::new(vec![CubeId(2), CubeId(1), CubeId(3)], &cubes)
            .expect("siblings plus a stranger are disjoint");
        assert!(ok.contains(CubeId(3)), "membership after sorting");
        assert!(!ok.contains(CubeId(0)), "absent id is reported absent");
    }

    #[test]
    fn member_lookup_uses_sorted_order() {
        let cubes = toy_cubes();
        assert!(cubes[1].is_member(1));
        assert!(!cubes[1].is_member(0));
        assert_eq!(cubes[0].side(), 1.0, "side is 2^-k");
    }
}
