//! JSON description of a verification scenario.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::domain::{ConformalDomain, FourierBoundary};
use super::revolution::{Profile, RevolutionSurface};
use super::verify::{verify_conformal, verify_revolution, VerificationReport};
use crate::error::{Error, Result};

/// Comparison curvatures; both must be present when given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub k: f64,
    #[serde(rename = "K")]
    pub big_k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ScenarioSpec {
    Conformal {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        curvature: f64,
        fourier: FourierBoundary,
        mesh_h: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bounds: Option<Bounds>,
    },
    Revolution {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        profile: Profile,
        cap_radius: f64,
        mesh_h: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bounds: Option<Bounds>,
    },
}

impl ScenarioSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("invalid scenario: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn name(&self) -> Option<&str> {
        match self {
            ScenarioSpec::Conformal { name, .. } | ScenarioSpec::Revolution { name, .. } => name.as_deref(),
        }
    }

    pub fn mesh_h(&self) -> f64 {
        match self {
            ScenarioSpec::Conformal { mesh_h, .. } | ScenarioSpec::Revolution { mesh_h, .. } => *mesh_h,
        }
    }

    /// Runs the verification with an optional override of the mesh size.
    pub fn verify(&self, mesh_h: Option<f64>) -> Result<VerificationReport> {
        let h = mesh_h.unwrap_or(self.mesh_h());
        let mut report = match self {
            ScenarioSpec::Conformal {
                curvature,
                fourier,
                bounds,
                ..
            } => {
                let domain = ConformalDomain::new(*curvature, fourier.clone())?;
                verify_conformal(&domain, h, bounds.map(|b| (b.k, b.big_k)))?
            }
            ScenarioSpec::Revolution {
                profile,
                cap_radius,
                bounds,
                ..
            } => {
                let surface = RevolutionSurface::new(profile.clone(), *cap_radius)?;
                verify_revolution(&surface, h, bounds.map(|b| (b.k, b.big_k)))?
            }
        };
        report.name = self.name().map(str::to_owned);
        Ok(report)
    }
}
