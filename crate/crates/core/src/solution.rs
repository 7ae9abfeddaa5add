//! Solutions shared by the heuristic and the exact solvers, and their JSON
//! file format.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{contains, Disk, Point, TOL};
use crate::instance::Instance;
use crate::solver::{SolveStats, Status};

/// Deterministic run metadata. Wall-clock time is kept in memory only so
/// that solution files are reproducible byte for byte.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolutionMeta {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub iterations: u64,
    #[serde(skip)]
    pub elapsed_secs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub method: String,
    pub instance: String,
    pub status: Status,
    pub disks: Vec<Disk>,
    /// Per-disk point indices the disk was built for (cluster members for
    /// the heuristic, covered points for the exact solvers).
    pub assignment: Vec<Vec<usize>>,
    pub objective: f64,
    pub lower_bound: Option<f64>,
    pub stats: Option<SolveStats>,
    pub meta: SolutionMeta,
}

#[derive(Serialize, Deserialize)]
struct DiskRecord {
    x: f64,
    y: f64,
    r: f64,
}

#[derive(Serialize, Deserialize)]
struct SolutionFile {
    method: String,
    instance: String,
    status: Status,
    objective: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    lower_bound: Option<f64>,
    disks: Vec<DiskRecord>,
    #[serde(default)]
    assignment: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    stats: Option<SolveStats>,
    meta: SolutionMeta,
}

/// `pi * sum(r^2)`.
pub fn total_area(disks: &[Disk]) -> f64 {
    std::f64::consts::PI * disks.iter().map(|d| d.radius * d.radius).sum::<f64>()
}

/// Number of disks containing each point (tolerance-inclusive).
pub fn coverage_counts(points: &[Point], disks: &[Disk]) -> Vec<u32> {
    points
        .iter()
        .map(|p| disks.iter().filter(|d| contains(d, p, TOL)).count() as u32)
        .collect()
}

impl Solution {
    pub fn recomputed_objective(&self) -> f64 {
        total_area(&self.disks)
    }

    pub fn max_radius(&self) -> f64 {
        self.disks.iter().map(|d| d.radius).fold(0.0, f64::max)
    }

    pub fn coverage(&self, inst: &Instance) -> Vec<u32> {
        coverage_counts(&inst.points, &self.disks)
    }

    /// Budget respected and every requirement met by geometric containment.
    pub fn is_feasible(&self, inst: &Instance) -> bool {
        self.disks.len() <= inst.m
            && self
                .coverage(inst)
                .iter()
                .zip(&inst.kappa)
                .all(|(c, k)| c >= k)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = SolutionFile {
            method: self.method.clone(),
            instance: self.instance.clone(),
            status: self.status,
            objective: self.objective,
            lower_bound: self.lower_bound,
            disks: self
                .disks
                .iter()
                .map(|d| DiskRecord {
                    x: d.center.x,
                    y: d.center.y,
                    r: d.radius,
                })
                .collect(),
            assignment: self.assignment.clone(),
            stats: self.stats.clone(),
            meta: self.meta.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SolutionFile = serde_json::from_str(text)?;
        if let Some(i) = file.disks.iter().position(|d| !(d.r >= 0.0 && d.r.is_finite())) {
            return Err(Error::Validation {
                field: "disks",
                reason: format!("disk {i} has an invalid radius"),
            });
        }
        Ok(Self {
            method: file.method,
            instance: file.instance,
            status: file.status,
            disks: file
                .disks
                .into_iter()
                .map(|d| Disk::new(Point::new(d.x, d.y), d.r))
                .collect(),
            assignment: file.assignment,
            objective: file.objective,
            lower_bound: file.lower_bound,
            stats: file.stats,
            meta: file.meta,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()?).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }
}
