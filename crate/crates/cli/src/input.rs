use std::collections::BTreeMap;
use std::path::Path;

use posgeom::algebra::{parse_rational, Rational};
use posgeom::kinematics::{
    diagonals, sample_kinematics_with, KinematicData, PlanarVariables, SamplingMode,
};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{CliResult, Failure, GlobalArgs, KinematicsArgs};

/// Input files read during a run, with their SHA-256 digests.
#[derive(Default)]
pub struct Inputs {
    files: BTreeMap<String, (String, String)>,
}

impl Inputs {
    pub fn read(&mut self, role: &str, path: &Path) -> CliResult<String> {
        let bytes = std::fs::read(path)
            .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
        let digest = hex::encode(Sha256::digest(&bytes));
        self.files
            .insert(role.to_string(), (path.display().to_string(), digest));
        String::from_utf8(bytes)
            .map_err(|_| Failure::Validation(format!("{} is not UTF-8", path.display())))
    }

    pub fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .files
            .iter()
            .map(|(role, (path, digest))| (role.clone(), json!({"path": path, "sha256": digest})))
            .collect();
        Value::Object(map)
    }
}

pub fn rationals(texts: &[String]) -> CliResult<Vec<Rational>> {
    texts
        .iter()
        .map(|t| parse_rational(t).map_err(Failure::from))
        .collect()
}

fn n_from_count(count: usize) -> Option<usize> {
    (4..64).find(|&n| n * (n - 3) / 2 == count)
}

/// Resolves `--kinematics`, `--planar` or `--sample` (with `--n`).
pub fn kinematics(
    n: Option<usize>,
    args: &KinematicsArgs,
    global: &GlobalArgs,
    inputs: &mut Inputs,
) -> CliResult<KinematicData> {
    let k = if let Some(path) = &args.kinematics {
        KinematicData::from_json(&inputs.read("kinematics", path)?)?
    } else if let Some(values) = &args.planar {
        let values = rationals(values)?;
        let count = values.len();
        let m = match n {
            Some(m) => m,
            None => n_from_count(count).ok_or_else(|| {
                Failure::Validation(format!("{count} planar values do not match any n"))
            })?,
        };
        if diagonals(m).len() != count {
            return Err(Failure::Validation(format!(
                "n = {m} needs {} planar values, got {count}",
                diagonals(m).len()
            )));
        }
        KinematicData::from_planar(&PlanarVariables::new(m, &values)?)
    } else if let Some(mode) = &args.sample {
        let mode: SamplingMode = mode.parse()?;
        let m = n.ok_or_else(|| Failure::Validation("--sample needs --n".into()))?;
        sample_kinematics_with(m, global.seed, mode)?
    } else {
        return Err(Failure::Validation(
            "kinematics required: --kinematics FILE, --planar LIST or --sample MODE".into(),
        ));
    };
    if let Some(m) = n {
        if m != k.n() {
            return Err(Failure::Validation(format!(
                "--n {m} but the kinematics have n = {}",
                k.n()
            )));
        }
    }
    Ok(k)
}

/// Whether any kinematics source was given.
pub fn has_kinematics(args: &KinematicsArgs) -> bool {
    args.kinematics.is_some() || args.planar.is_some() || args.sample.is_some()
}
