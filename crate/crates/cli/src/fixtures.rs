//! Fixture discovery. Files are named `<molecule>_<2M>so_<distance>A.fcidump`.

use std::path::{Path, PathBuf};

use combifock::integrals::IntegralSet;

use crate::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq)]
pub struct Fixture {
    pub path: PathBuf,
    /// Angstrom.
    pub distance: f64,
}

impl Fixture {
    pub fn load(&self) -> CliResult<IntegralSet> {
        IntegralSet::from_path(&self.path).map_err(|e| CliError::Fixture {
            path: self.path.display().to_string(),
            message: e.to_string(),
        })
    }
}

fn parse_name(name: &str, prefix: &str) -> Option<f64> {
    name.strip_prefix(prefix)?
        .strip_suffix("A.fcidump")?
        .parse()
        .ok()
}

/// Every fixture for the molecule and spin-orbital count, by increasing distance.
pub fn discover(dir: &Path, molecule: &str, spin_orbitals: usize) -> CliResult<Vec<Fixture>> {
    let prefix = format!("{}_{spin_orbitals}so_", molecule.to_lowercase());
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::Fixture {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let mut out = Vec::new();
    for entry in entries {
        let entry = entry?;
        let name = entry.file_name();
        if let Some(distance) = name.to_str().and_then(|n| parse_name(n, &prefix)) {
            out.push(Fixture {
                path: entry.path(),
                distance,
            });
        }
    }
    out.sort_by(|a, b| a.distance.total_cmp(&b.distance));
    Ok(out)
}

/// Fixtures at the requested distances, in the requested order; all
/// available fixtures when `distances` is `None`.
pub fn select(
    dir: &Path,
    molecule: &str,
    spin_orbitals: usize,
    distances: Option<&[f64]>,
) -> CliResult<Vec<Fixture>> {
    let all = discover(dir, molecule, spin_orbitals)?;
    let Some(wanted) = distances else {
        if all.is_empty() {
            return Err(CliError::Fixture {
                path: dir
                    .join(format!("{molecule}_{spin_orbitals}so_*A.fcidump"))
                    .display()
                    .to_string(),
                message: "no matching fixtures".into(),
            });
        }
        return Ok(all);
    };
    wanted
        .iter()
        .map(|&d| {
            all.iter()
                .find(|f| (f.distance - d).abs() < 1e-9)
                .cloned()
                .ok_or_else(|| CliError::Fixture {
                    path: dir
                        .join(format!("{molecule}_{spin_orbitals}so_{d}A.fcidump"))
                        .display()
                        .to_string(),
                    message: "fixture not found".into(),
                })
        })
        .collect()
}
