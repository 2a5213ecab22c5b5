use serde_json::{json, Value};

use crate::manifest::{InputError, Manifest};

pub const BUILTIN_SUITE: &str = "paper-suite";

const SETUPS: [(&str, &str); 4] =
    [("split2", "split:2"), ("tp2", "truncated_poly:2"), ("tp3", "truncated_poly:3"), ("tp2xtp2", "truncated_poly:2*truncated_poly:2")];

const PAIRS: [(&str, &str); 3] = [("S", "S"), ("k", "k"), ("S", "k")];

fn non_field_inputs() -> Value {
    json!({
        "R": "truncated_poly:2",
        "S": "truncated_poly:4",
        "map": [[1, 0, 0, 0], [0, 0, 1, 0]],
        "basis": [[1, 0, 0, 0], [0, 1, 0, 0]],
        "M": "S",
        "N": "S"
    })
}

/// The built-in manifest reproducing every headline check.
pub fn builtin_suite_value() -> Value {
    let mut cases = Vec::new();
    for check in ["reduction_co", "reduction_ho"] {
        for (tag, s) in SETUPS {
            for (m, n) in PAIRS {
                cases.push(json!({
                    "name": format!("{check}/{tag}/{m}-{n}"),
                    "check": check,
                    "inputs": {"S": s, "M": m, "N": n},
                    "window": [-4, 4]
                }));
            }
        }
    }
    for check in ["reduction_co", "reduction_ho"] {
        cases.push(json!({
            "name": format!("{check}/non_field_base"),
            "check": check,
            "inputs": non_field_inputs(),
            "window": [-3, 3]
        }));
    }
    for (tag, s) in SETUPS {
        cases.push(json!({
            "name": format!("dualizing/{tag}"),
            "check": "dualizing",
            "inputs": {"S": s, "require_iso": true},
            "window": [-4, 4]
        }));
    }
    cases.push(json!({
        "name": "dualizing/non_field_base",
        "check": "dualizing",
        "inputs": non_field_inputs(),
        "window": [-3, 3]
    }));
    cases.push(json!({
        "name": "hochschild/tp2/cohomology",
        "check": "hochschild",
        "inputs": {"S": "truncated_poly:2", "coeff": "S", "cross_check": true, "expect": [2, 1, 1, 1]},
        "window": [0, 3]
    }));
    cases.push(json!({
        "name": "hochschild/split2/homology",
        "check": "hochschild",
        "inputs": {"S": "split:2", "coeff": "S", "kind": "homology", "cross_check": true, "expect": [2, 0, 0, 0]},
        "window": [0, 3]
    }));
    cases.push(json!({
        "name": "adjoint_assoc/grid",
        "check": "adjoint_assoc",
        "p": 3,
        "inputs": {
            "algebras": ["k", "truncated_poly:2", "split:2", "triangular2", "truncated_poly:3", "truncated_poly:2*truncated_poly:2"],
            "triples": 24,
            "seed": 7,
            "max_dim": 4
        }
    }));
    cases.push(json!({
        "name": "ext_adjoint_assoc/grid",
        "check": "ext_adjoint_assoc",
        "inputs": {
            "A": ["k", "truncated_poly:2"],
            "BC": ["k", "truncated_poly:2", "split:2"],
            "triples": 12,
            "seed": 5,
            "max_dim": 2
        },
        "window": [0, 3]
    }));
    cases.push(json!({
        "name": "nerve_suite/zoo",
        "check": "nerve_suite",
        "inputs": {"categories": "zoo", "up_to": 4, "colimits": true}
    }));
    cases.push(json!({
        "name": "quasicat_suite/zoo",
        "check": "quasicat_suite",
        "p": 2,
        "inputs": {"categories": "zoo", "dg_objects": ["default"], "up_to": 3}
    }));
    cases.push(json!({
        "name": "dgnerve_suite/default",
        "check": "dgnerve_suite",
        "p": 2,
        "inputs": {"objects": "default", "top": 3}
    }));
    json!({"p": 5, "cases": cases})
}

pub fn builtin_suite() -> Manifest {
    Manifest::from_value(builtin_suite_value()).expect("built-in manifest is valid")
}

/// Resolve a manifest argument: a built-in name or a path.
pub fn load(arg: &str) -> Result<Manifest, InputError> {
    if arg == BUILTIN_SUITE {
        return Ok(builtin_suite());
    }
    Manifest::from_path(std::path::Path::new(arg))
}

pub fn builtin_manifests() -> Vec<(&'static str, usize)> {
    vec![(BUILTIN_SUITE, builtin_suite().cases.len())]
}
