//! Problem instances, the uniform benchmark generators and JSON persistence.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// A multi-cover instance: points with per-point coverage requirements, a
/// disk budget and an optional center separation distance.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub name: String,
    pub points: Vec<Point>,
    pub kappa: Vec<u32>,
    pub m: usize,
    pub ell: Option<f64>,
    pub seed: Option<u64>,
}

/// On-disk layout. Field order is the serialization order.
#[derive(Serialize, Deserialize)]
struct InstanceFile {
    name: String,
    n: usize,
    m: usize,
    ell: Option<f64>,
    points: Vec<Point>,
    kappa: Vec<u32>,
    seed: Option<u64>,
}

impl Instance {
    pub fn new(name: impl Into<String>, points: Vec<Point>, kappa: Vec<u32>, m: usize) -> Result<Self> {
        let inst = Self {
            name: name.into(),
            points,
            kappa,
            m,
            ell: None,
            seed: None,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn with_ell(mut self, ell: f64) -> Self {
        self.ell = Some(ell);
        self
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn kappa_max(&self) -> u32 {
        self.kappa.iter().copied().max().unwrap_or(0)
    }

    pub fn kappa_sum(&self) -> u64 {
        self.kappa.iter().map(|&k| k as u64).sum()
    }

    /// Without separation, a cover exists iff `m >= max kappa`.
    pub fn is_gmc_feasible(&self) -> bool {
        self.m >= self.kappa_max() as usize
    }

    pub fn ensure_gmc_feasible(&self) -> Result<()> {
        if self.is_gmc_feasible() {
            Ok(())
        } else {
            Err(Error::Infeasible {
                m: self.m,
                kappa_max: self.kappa_max(),
            })
        }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |field, reason: String| Err(Error::Validation { field, reason });
        if self.points.is_empty() {
            return invalid("points", "at least one point is required".into());
        }
        if self.kappa.len() != self.points.len() {
            return invalid(
                "kappa",
                format!("{} entries for {} points", self.kappa.len(), self.points.len()),
            );
        }
        if let Some(j) = self.points.iter().position(|p| !p.is_finite()) {
            return invalid("points", format!("point {j} has a non-finite coordinate"));
        }
        if let Some(j) = self.kappa.iter().position(|&k| k < 1) {
            return invalid("kappa", format!("entry {j} is {} but must be at least 1", self.kappa[j]));
        }
        if self.m < 1 {
            return invalid("m", "disk budget must be at least 1".into());
        }
        if let Some(ell) = self.ell {
            if !(ell.is_finite() && ell >= 0.0) {
                return invalid("ell", format!("{ell} is not a nonnegative length"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let file = InstanceFile {
            name: self.name.clone(),
            n: self.n(),
            m: self.m,
            ell: self.ell,
            points: self.points.clone(),
            kappa: self.kappa.clone(),
            seed: self.seed,
        };
        let mut s = serde_json::to_string_pretty(&file)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        if file.n != file.points.len() {
            return Err(Error::Validation {
                field: "n",
                reason: format!("declares {} but {} points are listed", file.n, file.points.len()),
            });
        }
        let inst = Self {
            name: file.name,
            points: file.points,
            kappa: file.kappa,
            m: file.m,
            ell: file.ell,
            seed: file.seed,
        };
        inst.validate()?;
        Ok(inst)
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

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub width: f64,
    pub height: f64,
    pub kappa_choices: Vec<u32>,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            width: 100.0,
            height: 100.0,
            kappa_choices: vec![1, 2, 3],
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

/// `n` points i.i.d. uniform on `[0, width) x [0, height)`, requirements
/// i.i.d. uniform over the configured choices. ChaCha8 seeded by `cfg.seed`.
pub fn generate(n: usize, m: usize, cfg: &GeneratorConfig) -> Result<Instance> {
    if n < 1 || m < 1 {
        return Err(Error::InvalidArgument(format!("n={n}, m={m}: both must be at least 1")));
    }
    if !(cfg.width > 0.0 && cfg.height > 0.0 && cfg.width.is_finite() && cfg.height.is_finite()) {
        return Err(Error::InvalidArgument("canvas dimensions must be positive".into()));
    }
    if cfg.kappa_choices.is_empty() || cfg.kappa_choices.contains(&0) {
        return Err(Error::InvalidArgument("kappa choices must be nonempty and at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let points = (0..n)
        .map(|_| Point::new(rng.gen_range(0.0..cfg.width), rng.gen_range(0.0..cfg.height)))
        .collect();
    let kappa = (0..n)
        .map(|_| cfg.kappa_choices[rng.gen_range(0..cfg.kappa_choices.len())])
        .collect();
    Ok(Instance {
        name: format!("uni_n{n}_m{m}_s{}", cfg.seed),
        points,
        kappa,
        m,
        ell: None,
        seed: Some(cfg.seed),
    })
}

/// Benchmark families with uniform instances on a 100 m x 100 m canvas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// n = 20, 30, ..., 200 with m = 20.
    UniSm,
    /// n = 30, 40, ..., 300 with m = 30.
    UniLg,
    /// m = 5, 10, ..., 100 with n = 250.
    UniFixN,
}

/// Suite size. `Small` caps instance sizes at `n <= 60` (and `m <= 60`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Scale {
    #[default]
    Full,
    Small,
}

pub const REPLICATES: usize = 5;
pub const SMALL_SCALE_CAP: usize = 60;

impl Family {
    pub const ALL: [Family; 3] = [Family::UniSm, Family::UniLg, Family::UniFixN];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::UniSm => "uni_sm",
            Family::UniLg => "uni_lg",
            Family::UniFixN => "uni_fix_n",
        }
    }

    /// `(n, m)` per size step.
    pub fn sizes(self, scale: Scale) -> Vec<(usize, usize)> {
        let cap = match scale {
            Scale::Full => usize::MAX,
            Scale::Small => SMALL_SCALE_CAP,
        };
        match self {
            Family::UniSm => (20..=200).step_by(10).filter(|&n| n <= cap).map(|n| (n, 20)).collect(),
            Family::UniLg => (30..=300).step_by(10).filter(|&n| n <= cap).map(|n| (n, 30)).collect(),
            Family::UniFixN => (5..=100)
                .step_by(5)
                .filter(|&m| m <= cap)
                .map(|m| (250.min(cap), m))
                .collect(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// Per-instance seed: the first eight bytes (little endian) of
/// `SHA-256("{base_seed}/{family}/{size_index}/{replicate}")`.
pub fn suite_seed(base_seed: u64, family: Family, size_index: usize, replicate: usize) -> u64 {
    let key = format!("{base_seed}/{family}/{size_index}/{replicate}");
    let digest = Sha256::digest(key.as_bytes());
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

pub fn make_suite(family: Family, base_seed: u64) -> Vec<Instance> {
    make_suite_scaled(family, base_seed, Scale::Full)
}

pub fn make_suite_scaled(family: Family, base_seed: u64, scale: Scale) -> Vec<Instance> {
    let mut out = Vec::new();
    for (size_index, (n, m)) in family.sizes(scale).into_iter().enumerate() {
        for rep in 0..REPLICATES {
            let cfg = GeneratorConfig::with_seed(suite_seed(base_seed, family, size_index, rep));
            let mut inst = generate(n, m, &cfg).expect("family sizes are positive");
            inst.name = format!("{family}_n{n:03}_m{m:03}_r{rep}");
            out.push(inst);
        }
    }
    out
}
