//! JSON boundary descriptions and the builtin model registry. Parsing is
//! fail-closed: unknown fields or missing parameters are errors.

use crate::boundary::{BoundaryModel, Face, GraphShape};
use crate::boxes::{AxisBox, CubeUnion};
use crate::error::GeomError;
use crate::point::Point;
use crate::Result;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BoxJson {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoxJson {
    fn to_box(&self) -> AxisBox {
        AxisBox::new(Point::new(&self.lo), Point::new(&self.hi))
    }

    fn of(b: &AxisBox) -> Self {
        BoxJson {
            lo: b.lo().as_slice().to_vec(),
            hi: b.hi().as_slice().to_vec(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FaceJson {
    pub axis: usize,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub outward: f64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extent: Option<BoxJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spacing: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<FaceJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells: Option<Vec<BoxJson>>,
}

/// Boundary description document: {variant, params, samples?}.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpecJson {
    pub variant: String,
    #[serde(default)]
    pub params: ParamsJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<(Vec<f64>, f64)>>,
}

fn need<T>(opt: Option<T>, what: &str, variant: &str) -> Result<T> {
    opt.ok_or_else(|| GeomError::InvalidArgument(format!("{variant} needs `{what}`")))
}

impl BoundarySpecJson {
    pub fn to_model(&self) -> Result<BoundaryModel> {
        match self.variant.as_str() {
            "hyperplane" => {
                let d = self.params.d.unwrap_or(3);
                Ok(match &self.params.extent {
                    Some(b) => BoundaryModel::hyperplane_patch(d, b.to_box()),
                    None => BoundaryModel::hyperplane(d),
                })
            }
            "sphere" => {
                let d = self.params.d.unwrap_or(3);
                let radius = need(self.params.radius, "radius", "sphere")?;
                Ok(BoundaryModel::sphere(d, radius))
            }
            "lipschitz-graph" => {
                let d = self.params.d.unwrap_or(3);
                let slope = need(self.params.slope, "slope", "lipschitz-graph")?;
                Ok(BoundaryModel::lipschitz_graph(
                    d,
                    GraphShape::AbsSlope { slope },
                    self.params.extent.as_ref().map(|b| b.to_box()),
                ))
            }
            "four-corner-cantor" => {
                let depth = need(self.params.depth, "depth", "four-corner-cantor")?;
                Ok(BoundaryModel::four_corner_cantor(depth))
            }
            "polyhedral" => {
                let faces = need(self.params.faces.clone(), "faces", "polyhedral")?;
                let faces: Vec<Face> = faces
                    .into_iter()
                    .map(|f| {
                        Face::new(
                            f.axis,
                            AxisBox::new(Point::new(&f.lo), Point::new(&f.hi)),
                            f.outward,
                        )
                    })
                    .collect();
                let cells = self
                    .params
                    .cells
                    .clone()
                    .unwrap_or_default()
                    .iter()
                    .map(|b| b.to_box())
                    .collect();
                BoundaryModel::polyhedral(faces, CubeUnion::new(cells))
            }
            "point-cloud" => {
                let spacing = need(self.params.spacing, "spacing", "point-cloud")?;
                let samples = need(self.samples.clone(), "samples", "point-cloud")?;
                let (points, weights): (Vec<Point>, Vec<f64>) = samples
                    .iter()
                    .map(|(c, w)| (Point::new(c), *w))
                    .unzip();
                BoundaryModel::point_cloud(points, weights, spacing)
            }
            other => Err(GeomError::InvalidArgument(format!(
                "unknown boundary variant `{other}`"
            ))),
        }
    }

    pub fn of_model(e: &BoundaryModel) -> Self {
        let mut params = ParamsJson::default();
        let mut samples = None;
        let variant = match e {
            BoundaryModel::Hyperplane { d, extent } => {
                params.d = Some(*d);
                params.extent = extent.as_ref().map(BoxJson::of);
                "hyperplane"
            }
            BoundaryModel::Sphere { d, radius } => {
                params.d = Some(*d);
                params.radius = Some(*radius);
                "sphere"
            }
            BoundaryModel::LipschitzGraph { d, shape, extent } => {
                params.d = Some(*d);
                params.slope = Some(shape.lipschitz());
                params.extent = extent.as_ref().map(BoxJson::of);
                "lipschitz-graph"
            }
            BoundaryModel::Polyhedral(_) => {
                params.faces = Some(
                    e.faces()
                        .unwrap()
                        .iter()
                        .map(|f| FaceJson {
                            axis: f.axis,
                            lo: f.rect.lo().as_slice().to_vec(),
                            hi: f.rect.hi().as_slice().to_vec(),
                            outward: f.outward,
                        })
                        .collect(),
                );
                "polyhedral"
            }
            BoundaryModel::FourCornerCantor(_) => {
                params.depth = e.cantor_depth();
                "four-corner-cantor"
            }
            BoundaryModel::PointCloud(_) => {
                let (pts, ws, spacing) = e.cloud().unwrap();
                params.spacing = Some(spacing);
                samples = Some(
                    pts.iter()
                        .zip(ws)
                        .map(|(p, w)| (p.as_slice().to_vec(), *w))
                        .collect(),
                );
                "point-cloud"
            }
        };
        BoundarySpecJson {
            variant: variant.into(),
            params,
            samples,
        }
    }
}

pub fn parse_boundary(json: &str) -> Result<BoundaryModel> {
    let spec: BoundarySpecJson = serde_json::from_str(json)
        .map_err(|e| GeomError::InvalidArgument(format!("boundary json: {e}")))?;
    spec.to_model()
}

pub fn boundary_to_json(e: &BoundaryModel) -> String {
    serde_json::to_string_pretty(&BoundarySpecJson::of_model(e))
        .expect("boundary spec serializes")
}

/// Builtin boundary models addressable by name from the CLI.
pub fn builtin_names() -> Vec<(&'static str, &'static str)> {
    vec![
        ("plane", "flat plane {t=0} in ambient d=3, upper half-space domain"),
        ("plane-2d", "flat line {t=0} in ambient d=2"),
        (
            "plane-patch",
            "plane with measure window [-1,1]^2 (sampling and patch measure)",
        ),
        ("sphere", "unit sphere in d=3, ball domain"),
        ("circle", "unit circle in d=2, disk domain"),
        (
            "graph-kink",
            "Lipschitz graph t = |x|/2 with chart window [-1,1]^2",
        ),
        ("graph-kink-full", "Lipschitz graph t = |x|/2, unbounded"),
        ("cantor-4", "four-corner set at generation 4 (planar)"),
        ("cantor-6", "four-corner set at generation 6 (planar)"),
        (
            "slit-2d",
            "unit segment in the plane, complement domain (chain-blocking control)",
        ),
    ]
}

pub fn builtin(name: &str) -> Option<BoundaryModel> {
    let sym2 = AxisBox::new(Point::new(&[-1.0, -1.0]), Point::new(&[1.0, 1.0]));
    match name {
        "plane" => Some(BoundaryModel::hyperplane(3)),
        "plane-2d" => Some(BoundaryModel::hyperplane(2)),
        "plane-patch" => Some(BoundaryModel::hyperplane_patch(3, sym2)),
        "sphere" => Some(BoundaryModel::sphere(3, 1.0)),
        "circle" => Some(BoundaryModel::sphere(2, 1.0)),
        "graph-kink" => Some(BoundaryModel::lipschitz_graph(
            3,
            GraphShape::AbsSlope { slope: 0.5 },
            Some(sym2),
        )),
        "graph-kink-full" => Some(BoundaryModel::lipschitz_graph(
            3,
            GraphShape::AbsSlope { slope: 0.5 },
            None,
        )),
        "cantor-4" => Some(BoundaryModel::four_corner_cantor(4)),
        "cantor-6" => Some(BoundaryModel::four_corner_cantor(6)),
        "slit-2d" => {
            let rect = AxisBox::new(Point::new(&[0.0, 0.0]), Point::new(&[1.0, 0.0]));
            Some(
                BoundaryModel::polyhedral(vec![Face::new(1, rect, 1.0)], CubeUnion::new(vec![]))
                    .expect("slit model is well formed"),
            )
        }
        _ => None,
    }
}
