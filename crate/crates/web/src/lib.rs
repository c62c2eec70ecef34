//! Browser bindings: a Hasse diagram of a catalog lattice, a membership
//! check and an identity check. Everything crosses the boundary as strings.

use serde_json::json;
use wasm_bindgen::prelude::*;

use sublo::catalog::{co_chain_with_sets, l_mn_with_sets};
use sublo::lattice::LatticeJson;
use sublo::membership::{decide_sub_lo, least_n, Membership};
use sublo::render::Hasse;
use sublo::term::{builtin, check, parse_identity, CheckOutcome};
use sublo::FinLattice;

/// Catalog indices above this make diagrams unreadable anyway.
pub const MAX_INDEX: usize = 6;

fn parse_lattice(text: &str) -> Result<FinLattice, String> {
    let json: LatticeJson = serde_json::from_str(text).map_err(|e| format!("lattice JSON: {e}"))?;
    FinLattice::from_json(&json).map_err(|e| e.to_string())
}

/// `kind` is `co` (uses `n`) or `lmn`.
pub fn catalog_svg(kind: &str, m: usize, n: usize) -> Result<String, String> {
    let built = match kind {
        "co" if (1..=MAX_INDEX).contains(&n) => co_chain_with_sets(n),
        "lmn" if m >= 1 && n >= 1 && m + n <= MAX_INDEX => l_mn_with_sets(m, n),
        "co" | "lmn" => return Err(format!("index out of range (at most {MAX_INDEX})")),
        _ => return Err(format!("unknown catalog kind `{kind}`")),
    };
    let (l, _) = built.map_err(|e| e.to_string())?;
    Ok(Hasse::of_lattice(&l).to_svg())
}

/// Lattice JSON for a catalog entry, to seed the text areas.
pub fn catalog_json(kind: &str, m: usize, n: usize) -> Result<String, String> {
    let built = match kind {
        "co" => co_chain_with_sets(n),
        "lmn" => l_mn_with_sets(m, n),
        _ => return Err(format!("unknown catalog kind `{kind}`")),
    };
    let (l, _) = built.map_err(|e| e.to_string())?;
    serde_json::to_string(&l.to_json()).map_err(|e| e.to_string())
}

pub fn membership_report(lattice: &str) -> Result<String, String> {
    let l = parse_lattice(lattice)?;
    let out = match decide_sub_lo(&l).map_err(|e| e.to_string())? {
        Membership::Accepted(cert) => json!({
            "verdict": "accepted",
            "least_n": least_n(&cert),
            "certificate": cert.to_json(&l),
        }),
        Membership::Rejected(rej) => json!({
            "verdict": "rejected",
            "anchor": l.label(rej.anchor),
            "failing_condition": rej.sigma.map(|(k, w)| json!({
                "kind": format!("{k:?}"),
                "tuple": w.iter().map(|&x| l.label(x)).collect::<Vec<_>>(),
            })),
        }),
    };
    serde_json::to_string_pretty(&out).map_err(|e| e.to_string())
}

/// `identity` is a built-in name or an `(= lhs rhs)` / `(<= lhs rhs)` form.
pub fn identity_report(identity: &str, lattice: &str) -> Result<String, String> {
    let id = if identity.trim_start().starts_with('(') {
        parse_identity("custom", identity)
    } else {
        builtin(identity.trim())
    }
    .map_err(|e| e.to_string())?;
    let l = parse_lattice(lattice)?;
    let out = match check(&l, &id).map_err(|e| e.to_string())? {
        CheckOutcome::Holds => json!({"identity": id.name, "verdict": "holds"}),
        CheckOutcome::Fails(w) => json!({
            "identity": id.name,
            "verdict": "fails",
            "assignment": w.describe(&id, &l),
            "lhs": l.label(w.lhs),
            "rhs": l.label(w.rhs),
        }),
    };
    serde_json::to_string_pretty(&out).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = hasseSvg)]
pub fn hasse_svg(kind: &str, m: usize, n: usize) -> Result<String, JsValue> {
    catalog_svg(kind, m, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = catalogJson)]
pub fn catalog_json_js(kind: &str, m: usize, n: usize) -> Result<String, JsValue> {
    catalog_json(kind, m, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = checkMembership)]
pub fn check_membership(lattice: &str) -> Result<String, JsValue> {
    membership_report(lattice).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = checkIdentity)]
pub fn check_identity(identity: &str, lattice: &str) -> Result<String, JsValue> {
    identity_report(identity, lattice).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const M3: &str = r#"{"size":5,"leq_pairs":[[0,1],[0,2],[0,3],[1,4],[2,4],[3,4]]}"#;

    #[test]
    fn svg_for_catalog() {
        let svg = catalog_svg("lmn", 1, 1).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(catalog_svg("co", 0, 9).is_err());
        assert!(catalog_svg("xyz", 1, 1).is_err());
    }

    #[test]
    fn membership_verdicts() {
        assert!(membership_report(M3).unwrap().contains("rejected"));
        let co3 = catalog_json("co", 0, 3).unwrap();
        assert!(membership_report(&co3).unwrap().contains("accepted"));
        assert!(membership_report("{").is_err());
    }

    #[test]
    fn identity_verdicts() {
        assert!(identity_report("HS", M3).unwrap().contains("fails"));
        let co4 = catalog_json("co", 0, 4).unwrap();
        assert!(identity_report("E", &co4).unwrap().contains("holds"));
        assert!(identity_report("(<= (meet x y) x)", M3).unwrap().contains("holds"));
    }
}
