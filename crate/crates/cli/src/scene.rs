//! Scene files: the bodies of a family plus run options.

use std::path::Path;

use hollowkit::bodies::{Ball, Body, BodyError, HPolytope, IntersectionBody, VPolytope};
use hollowkit::geom::{AffineSubspace, Point};
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "hollowkit/1";

#[derive(Debug, thiserror::Error)]
pub enum SceneError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported schema {found:?}, expected {SCHEMA:?}")]
    Schema { found: String },
    #[error("scene has no bodies")]
    NoBodies,
    #[error("dimension mismatch:\n{}", .0.join("\n"))]
    Dimensions(Vec<String>),
    #[error("option {name} must be positive, got {value}")]
    Option { name: &'static str, value: f64 },
    #[error("body {index}: {source}")]
    Body { index: usize, source: BodyError },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    /// `{x : normals[i] . x <= offsets[i]}`
    Hpoly { normals: Vec<Vec<f64>>, offsets: Vec<f64> },
    Vpoly { points: Vec<Vec<f64>> },
    Ball { center: Vec<f64>, radius: f64 },
    Intersection { bodies: Vec<BodySpec> },
}

impl BodySpec {
    /// Dimension implied by the coordinates, if they agree with each other.
    pub fn dim(&self) -> Result<usize, String> {
        let uniform = |rows: &[Vec<f64>]| -> Result<usize, String> {
            let d = rows.first().map(Vec::len).ok_or("no coordinates")?;
            match rows.iter().find(|r| r.len() != d) {
                Some(r) => Err(format!("mixed coordinate lengths {d} and {}", r.len())),
                None => Ok(d),
            }
        };
        match self {
            BodySpec::Hpoly { normals, .. } => uniform(normals),
            BodySpec::Vpoly { points } => uniform(points),
            BodySpec::Ball { center, .. } => Ok(center.len()),
            BodySpec::Intersection { bodies } => {
                let dims = bodies.iter().map(BodySpec::dim).collect::<Result<Vec<_>, _>>()?;
                let d = *dims.first().ok_or("empty intersection")?;
                match dims.iter().find(|x| **x != d) {
                    Some(x) => Err(format!("members of dimensions {d} and {x}")),
                    None => Ok(d),
                }
            }
        }
    }

    pub fn build(&self) -> Result<Body, BodyError> {
        let pts = |rows: &[Vec<f64>]| rows.iter().map(|r| Point::from_column_slice(r)).collect::<Vec<_>>();
        Ok(match self {
            BodySpec::Hpoly { normals, offsets } => HPolytope::new(pts(normals), offsets.clone())?.into(),
            BodySpec::Vpoly { points } => VPolytope::new(pts(points))?.into(),
            BodySpec::Ball { center, radius } => Ball::new(Point::from_column_slice(center), *radius)?.into(),
            BodySpec::Intersection { bodies } => {
                let members = bodies.iter().map(BodySpec::build).collect::<Result<Vec<_>, _>>()?;
                IntersectionBody::new(members)?.into()
            }
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
}

/// An affine subspace: `base + span(directions)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatSpec {
    pub base: Vec<f64>,
    pub directions: Vec<Vec<f64>>,
}

impl FlatSpec {
    pub fn build(&self) -> Result<AffineSubspace, SceneError> {
        AffineSubspace::new(
            Point::from_column_slice(&self.base),
            self.directions.iter().map(|r| Point::from_column_slice(r)).collect(),
        )
        .map_err(|e| SceneError::Invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabbingSpec {
    pub w: FlatSpec,
    pub v: FlatSpec,
}

/// Explicit KKM instance: `Γ(points[i]) = bodies[images[i]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KkmSpec {
    pub points: Vec<Vec<f64>>,
    pub images: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub schema: String,
    pub dimension: usize,
    pub bodies: Vec<BodySpec>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub options: SceneOptions,
    /// Leave-one-out witnesses for `solve-klee`; computed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kkm: Option<KkmSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stabbing: Option<StabbingSpec>,
}

fn is_default(o: &SceneOptions) -> bool {
    *o == SceneOptions::default()
}

impl Scene {
    pub fn new(dimension: usize, bodies: Vec<BodySpec>) -> Self {
        Scene {
            schema: SCHEMA.to_string(),
            dimension,
            bodies,
            options: SceneOptions::default(),
            witnesses: None,
            kkm: None,
            stabbing: None,
        }
    }

    pub fn load(path: &Path) -> Result<Scene, SceneError> {
        let text = std::fs::read_to_string(path).map_err(|source| SceneError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Scene::parse(&text, &path.display().to_string())
    }

    /// Parses and validates; `origin` names the source in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Scene, SceneError> {
        let scene: Scene = serde_json::from_str(text).map_err(|e| SceneError::Parse {
            path: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })?;
        scene.validate()?;
        Ok(scene)
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string_pretty(self)
    }

    pub fn validate(&self) -> Result<(), SceneError> {
        if self.schema != SCHEMA {
            return Err(SceneError::Schema {
                found: self.schema.clone(),
            });
        }
        if self.bodies.is_empty() {
            return Err(SceneError::NoBodies);
        }
        let mismatches: Vec<String> = self
            .bodies
            .iter()
            .enumerate()
            .filter_map(|(i, b)| match b.dim() {
                Ok(d) if d == self.dimension => None,
                Ok(d) => Some(format!("  body {i}: dimension {d}, scene dimension {}", self.dimension)),
                Err(why) => Some(format!("  body {i}: {why}")),
            })
            .collect();
        if !mismatches.is_empty() {
            return Err(SceneError::Dimensions(mismatches));
        }
        let o = &self.options;
        for (name, value) in [("tol", o.tol), ("resolution", o.resolution)] {
            if let Some(v) = value {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(SceneError::Option { name, value: v });
                }
            }
        }
        for (name, value) in [("depth", o.depth), ("restarts", o.restarts)] {
            if value == Some(0) {
                return Err(SceneError::Option { name, value: 0.0 });
            }
        }
        if let Some(w) = &self.witnesses {
            if w.len() != self.bodies.len() || w.iter().any(|p| p.len() != self.dimension) {
                return Err(SceneError::Invalid(format!(
                    "witnesses: expected {} points of dimension {}",
                    self.bodies.len(),
                    self.dimension
                )));
            }
        }
        if let Some(k) = &self.kkm {
            if k.points.len() != k.images.len() {
                return Err(SceneError::Invalid("kkm: points and images differ in length".into()));
            }
            if let Some(i) = k.images.iter().find(|i| **i >= self.bodies.len()) {
                return Err(SceneError::Invalid(format!("kkm: image {i} is not a body index")));
            }
        }
        Ok(())
    }

    pub fn build_bodies(&self) -> Result<Vec<Body>, SceneError> {
        self.bodies
            .iter()
            .enumerate()
            .map(|(index, b)| b.build().map_err(|source| SceneError::Body { index, source }))
            .collect()
    }
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}
