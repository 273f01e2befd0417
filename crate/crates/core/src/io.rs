//! JSON file formats.
//!
//! Triangulations are exchanged as rotation systems:
//!
//! ```json
//! {"n": 4, "rotation": [[1,2,3],[2,0,3],[3,0,1],[1,0,2]], "outer_face": [0,1,2]}
//! ```
//!
//! `outer_face` is optional and defaults to the face containing the directed
//! edge from vertex 0 to its first listed neighbor. Braced triangulations add
//! `"braces": [[u,v],...]`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braced::{BracedError, BracedTriangulation};
use crate::graph::edge;
use crate::triangulation::{PlaneTriangulation, TriangulationError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("inconsistent file: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error(transparent)]
    Braced(#[from] BracedError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TriangulationFile {
    pub n: usize,
    pub rotation: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_face: Option<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub braces: Option<Vec<(usize, usize)>>,
}

impl TriangulationFile {
    pub fn from_triangulation(t: &PlaneTriangulation) -> Self {
        TriangulationFile {
            n: t.n(),
            rotation: t.rotation().to_vec(),
            outer_face: Some(t.face_triple(t.outer_face())),
            braces: None,
        }
    }

    pub fn from_braced(g: &BracedTriangulation) -> Self {
        let mut f = Self::from_triangulation(g.t());
        if !g.braces().is_empty() {
            f.braces = Some(g.braces().iter().copied().collect());
        }
        f
    }

    pub fn to_triangulation(&self) -> Result<PlaneTriangulation, IoError> {
        if self.rotation.len() != self.n {
            return Err(IoError::Inconsistent(format!(
                "n = {} but rotation lists {} vertices",
                self.n,
                self.rotation.len()
            )));
        }
        Ok(PlaneTriangulation::from_rotation(
            self.rotation.clone(),
            self.outer_face,
        )?)
    }

    /// Parse as a braced triangulation; a missing `braces` field means an
    /// empty brace set.
    pub fn to_braced(&self) -> Result<BracedTriangulation, IoError> {
        let t = self.to_triangulation()?;
        let braces = self
            .braces
            .iter()
            .flatten()
            .map(|&(u, v)| edge(u, v))
            .collect();
        Ok(BracedTriangulation::new(t, braces)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("file serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(s)?)
    }
}
