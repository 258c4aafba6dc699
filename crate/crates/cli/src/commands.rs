use std::path::Path;

use num_complex::Complex64;
use posgeom::algebra::rational::to_f64;
use posgeom::chy::{chy_amplitude, chy_sign, solve_scattering};
use posgeom::dihedral::{dihedral_scattering_residual, potential_exponents, verify_u_equations};
use posgeom::gkz::{self, EulerIntegrand, QuadConfig};
use posgeom::grassmann::{
    self, adjoint_interpolation, twisted_cubic_z, Line, ZMatrix, PLUECKER_PAIRS,
};
use posgeom::kinematics::planar_name;
use posgeom::polytope::{self, Polytope, ABHY_LABELS};
use posgeom::signature::{self, cyclic_path, shuffle_check, words, PiecewiseLinearPath};
use posgeom::tree::{enumerate_triangulations, planar_amplitude, tree_amplitude_value};
use serde_json::{json, Value};

use crate::input::{has_kinematics, kinematics, rationals, Inputs};
use crate::{CliResult, Failure, GlobalArgs, KinematicsArgs};

const DEFAULT_CHY_TOL: f64 = 1e-10;
const SYMBOLIC_AMPLITUDE_MAX_N: usize = 7;
const SIGNATURE_MAX_ENTRIES: usize = 10_000_000;

fn complex(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn quad(global: &GlobalArgs) -> QuadConfig {
    match global.tol {
        Some(t) => QuadConfig {
            rel_tol: t,
            ..QuadConfig::default()
        },
        None => QuadConfig::default(),
    }
}

pub fn amplitude(
    n: Option<usize>,
    kin: &KinematicsArgs,
    global: &GlobalArgs,
    inputs: &mut Inputs,
) -> CliResult<Value> {
    let k = if has_kinematics(kin) {
        Some(kinematics(n, kin, global, inputs)?)
    } else {
        None
    };
    let n = k
        .as_ref()
        .map(|k| k.n())
        .or(n)
        .ok_or_else(|| Failure::Validation("--n or kinematics required".into()))?;
    if !(4..=12).contains(&n) {
        return Err(Failure::Validation(format!(
            "n must lie in 4..=12, got {n}"
        )));
    }
    let mut triangulations: Vec<Vec<[usize; 2]>> = enumerate_triangulations(n)
        .into_iter()
        .map(|t| t.diagonals.iter().map(|&(i, j)| [i, j]).collect())
        .collect();
    triangulations.sort();
    let mut out = json!({
        "n": n,
        "count": triangulations.len(),
        "triangulations": triangulations,
    });
    match &k {
        Some(k) => {
            out["amplitude"] = json!(tree_amplitude_value(k)?.to_string());
            out["kinematics"] = k.to_json();
        }
        None if n <= SYMBOLIC_AMPLITUDE_MAX_N => {
            out["symbolic"] = json!(planar_amplitude(n).to_string())
        }
        None => {}
    }
    Ok(out)
}

pub fn chy(
    n: Option<usize>,
    kin: &KinematicsArgs,
    global: &GlobalArgs,
    inputs: &mut Inputs,
) -> CliResult<Value> {
    let k = kinematics(n, kin, global, inputs)?;
    let tol = global.tol.unwrap_or(DEFAULT_CHY_TOL);
    let points = solve_scattering(&k, tol, global.seed)?;
    let sum = chy_amplitude(&points)?;
    let sign = chy_sign(k.n());
    let tree = tree_amplitude_value(&k)?;
    let reference = to_f64(&tree);
    let signed = sum * sign;
    let critical: Vec<Value> = points
        .iter()
        .map(|p| {
            json!({
                "x": p.coords.iter().map(|&z| complex(z)).collect::<Vec<_>>(),
                "residual": p.residual,
                "hessian_determinant": complex(p.hessian_determinant()),
            })
        })
        .collect();
    Ok(json!({
        "n": k.n(),
        "critical_points": critical,
        "count": points.len(),
        "chy_sum": complex(sum),
        "sign": sign,
        "tree": tree.to_string(),
        "tree_value": reference,
        "relative_error": (signed - reference).norm() / reference.abs(),
    }))
}

pub fn canonical_form(
    path: &Path,
    point: Option<&[String]>,
    inputs: &mut Inputs,
) -> CliResult<Value> {
    let p = Polytope::from_json(&inputs.read("polytope", path)?)?;
    let mut out = json!({
        "polytope": p.to_json(),
        "simple": p.is_simple(),
        "canonical_function": polytope::canonical_function(&p)?.to_string(),
        "adjoint": polytope::adjoint(&p)?.to_string(),
    });
    if let Some(point) = point {
        let x = rationals(point)?;
        out["point"] = json!(point);
        out["value"] = json!(polytope::canonical_value(&p, &x)?.to_string());
    }
    Ok(out)
}

pub fn abhy(
    constants: Option<&[String]>,
    n: Option<usize>,
    kin: &KinematicsArgs,
    global: &GlobalArgs,
    inputs: &mut Inputs,
) -> CliResult<Value> {
    let k = if has_kinematics(kin) {
        Some(kinematics(n, kin, global, inputs)?)
    } else {
        None
    };
    let c = match (constants, &k) {
        (Some(c), None) => {
            let c = rationals(c)?;
            <[_; 3]>::try_from(c)
                .map_err(|_| Failure::Validation("--constants needs c13,c14,c24".into()))?
        }
        (None, Some(k)) => polytope::abhy_constants(k)?,
        (Some(_), Some(_)) => {
            return Err(Failure::Validation(
                "give either --constants or kinematics".into(),
            ))
        }
        (None, None) => {
            return Err(Failure::Validation(
                "--constants or kinematics required".into(),
            ))
        }
    };
    let p = polytope::abhy_pentagon(&c[0], &c[1], &c[2])?;
    let labels: Vec<String> = ABHY_LABELS
        .iter()
        .map(|&(i, j)| planar_name(i, j))
        .collect();
    let mut out = json!({
        "constants": {"c13": c[0].to_string(), "c14": c[1].to_string(), "c24": c[2].to_string()},
        "polytope": p.to_json(),
        "facet_labels": labels,
        "canonical_function": polytope::canonical_function(&p)?.to_string(),
    });
    if let Some(k) = &k {
        let point = polytope::abhy_point(k);
        let value = polytope::canonical_value(&p, &point)?;
        let tree = tree_amplitude_value(k)?;
        out["point"] = json!(point.iter().map(|v| v.to_string()).collect::<Vec<_>>());
        out["value"] = json!(value.to_string());
        out["tree"] = json!(tree.to_string());
        out["passed"] = json!(value == tree);
    }
    Ok(out)
}

pub fn dihedral(
    n: usize,
    check: &str,
    kin: &KinematicsArgs,
    global: &GlobalArgs,
    inputs: &mut Inputs,
) -> CliResult<Value> {
    match check {
        "u-equations" => {
            let report = verify_u_equations(n, global.seed)?;
            let mut out = to_value(&report);
            out["passed"] = json!(report.all_passed());
            Ok(out)
        }
        "scattering" => {
            let k = kinematics(Some(n), kin, global, inputs)?;
            let exps = potential_exponents(&k)?;
            let points = solve_scattering(&k, global.tol.unwrap_or(DEFAULT_CHY_TOL), global.seed)?;
            let residuals = points
                .iter()
                .map(|p| dihedral_scattering_residual(&k, p))
                .collect::<Result<Vec<f64>, _>>()?;
            let max = residuals.iter().copied().fold(0.0, f64::max);
            let exponents: serde_json::Map<String, Value> = exps
                .iter()
                .map(|(&(i, j), v)| (format!("u{i}{j}"), json!(v.to_string())))
                .collect();
            Ok(json!({
                "n": n,
                "exponents": exponents,
                "residuals": residuals,
                "max_residual": max,
                "passed": max < 1e-9,
            }))
        }
        other => Err(Failure::Validation(format!(
            "unknown check {other:?}; use u-equations or scattering"
        ))),
    }
}

fn z_matrix(path: Option<&Path>, inputs: &mut Inputs) -> CliResult<ZMatrix> {
    match path {
        Some(p) => Ok(ZMatrix::from_json(&inputs.read("Z", p)?)?),
        None => Ok(twisted_cubic_z()),
    }
}

pub fn amplituhedron(
    z: Option<&Path>,
    line: &Path,
    extended: bool,
    inputs: &mut Inputs,
) -> CliResult<Value> {
    let z = z_matrix(z, inputs)?;
    let line = Line::from_json(&inputs.read("line", line)?)?;
    Ok(to_value(&grassmann::membership(&line, &z, extended)?))
}

pub fn adjoint_gr24(z: Option<&Path>, inputs: &mut Inputs) -> CliResult<Value> {
    let z = z_matrix(z, inputs)?;
    let coeffs = adjoint_interpolation(&z)?;
    let order: Vec<String> = PLUECKER_PAIRS
        .iter()
        .map(|&(i, j)| format!("p{i}{j}"))
        .collect();
    let numbers: Vec<Value> = coeffs
        .iter()
        .map(|c| match i64::try_from(c) {
            Ok(v) => json!(v),
            Err(_) => json!(c.to_string()),
        })
        .collect();
    Ok(json!({"order": order, "coefficients": numbers}))
}

pub fn stabs(z: Option<&Path>, line: &Path, inputs: &mut Inputs) -> CliResult<Value> {
    let z = z_matrix(z, inputs)?;
    let line = Line::from_json(&inputs.read("line", line)?)?;
    Ok(json!({"stabs": grassmann::stabs(&line, &z)?}))
}

pub fn gkz(
    integrand: Option<&Path>,
    at: Option<&[f64]>,
    params: Option<&[f64]>,
    h: f64,
    global: &GlobalArgs,
    inputs: &mut Inputs,
) -> CliResult<Value> {
    let f = match integrand {
        Some(p) => EulerIntegrand::from_json(&inputs.read("integrand", p)?)?,
        None => EulerIntegrand::two_site_chain(),
    };
    let system = gkz::gkz_operators(&f)?;
    let text =
        |ops: &[gkz::DifferentialOperator]| ops.iter().map(|o| o.to_string()).collect::<Vec<_>>();
    let mut out = json!({
        "coefficients": f.coefficients(),
        "params": f.params().to_vec(),
        "euler": text(&system.euler),
        "toric": text(&system.toric),
        "toric_basis": "kernel lattice basis of the A-matrix; not a saturated toric ideal",
    });
    if let Some(c) = at {
        let values = params.unwrap_or(&[]);
        let q = quad(global);
        let phi = gkz::evaluate_euler(&f, c, values, &q)?;
        let tight = QuadConfig {
            rel_tol: q.rel_tol.min(1e-11),
            max_intervals: q.max_intervals.max(2000),
        };
        let residuals = system
            .all()
            .map(|op| Ok(json!({"operator": op.to_string(), "residual": gkz::annihilation_residual(op, &f, c, values, h, &tight)?})))
            .collect::<Result<Vec<Value>, posgeom::Error>>()?;
        out["evaluation"] =
            json!({"at": c, "param_values": values, "value": phi, "h": h, "residuals": residuals});
    }
    Ok(out)
}

pub fn string_limit(
    n: Option<usize>,
    kin: &KinematicsArgs,
    eps: &[f64],
    unit_scale: bool,
    global: &GlobalArgs,
    inputs: &mut Inputs,
) -> CliResult<Value> {
    let mut k = kinematics(n, kin, global, inputs)?;
    if unit_scale {
        k = k.unit_scaled();
    }
    let r = gkz::string_limit(&k, eps, &quad(global))?;
    let table: Vec<Value> = r
        .epsilons
        .iter()
        .zip(&r.values)
        .map(|(e, v)| json!({"eps": e, "value": v}))
        .collect();
    Ok(json!({
        "kinematics": k.to_json(),
        "table": table,
        "extrapolated": r.extrapolated,
        "tree": r.tree,
        "relative_error": r.relative_error,
    }))
}

pub fn signature(
    path: Option<&Path>,
    cyclic: Option<&[String]>,
    dim: usize,
    level: usize,
    shuffles: bool,
    inputs: &mut Inputs,
) -> CliResult<Value> {
    let p = match (path, cyclic) {
        (Some(p), _) => PiecewiseLinearPath::from_json(&inputs.read("path", p)?)?,
        (None, Some(nodes)) => cyclic_path(&rationals(nodes)?, dim)?,
        (None, None) => {
            return Err(Failure::Validation(
                "--path FILE or --cyclic NODES required".into(),
            ))
        }
    };
    let entries = (p.dim() as f64).powi(level as i32);
    if entries > SIGNATURE_MAX_ENTRIES as f64 {
        return Err(Failure::Validation(format!(
            "d^K = {}^{level} exceeds {SIGNATURE_MAX_ENTRIES} entries",
            p.dim()
        )));
    }
    let stack = signature::signature(&p, level);
    let mut out = json!({
        "dim": p.dim(),
        "level": level,
        "levels": stack.to_json(),
    });
    if shuffles {
        let mut checked = 0usize;
        let mut failed = 0usize;
        for la in 1..level {
            for lb in 1..=(level - la) {
                for a in words(p.dim(), la) {
                    for b in words(p.dim(), lb) {
                        checked += 1;
                        if !shuffle_check(&stack, &a, &b)? {
                            failed += 1;
                        }
                    }
                }
            }
        }
        out["shuffle_checks"] = json!({"checked": checked, "failed": failed});
        out["passed"] = json!(failed == 0);
    }
    Ok(out)
}

pub fn crosscheck(
    kin: &KinematicsArgs,
    global: &GlobalArgs,
    inputs: &mut Inputs,
) -> CliResult<Value> {
    let k = kinematics(Some(5), kin, global, inputs)?;
    let report =
        posgeom::crosscheck::crosscheck(&k, global.tol.unwrap_or(DEFAULT_CHY_TOL), global.seed)?;
    let mut out = to_value(&report);
    out["kinematics"] = k.to_json();
    Ok(out)
}
