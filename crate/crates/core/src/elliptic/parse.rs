use std::collections::BTreeMap;

use super::{CurveModel, EllipticError, NodeModel, WeierstrassCurve};
use crate::rings::GaloisField;

/// Parses `p=5 A=1 B=0`, `p=5 a1=.. a2=.. a3=.. a4=.. a6=..` or `node p=5`.
///
/// An optional `d=k` places the curve over `F_{p^k}`; coefficients are
/// integers in the prime field.
pub fn parse_curve(input: &str) -> Result<CurveModel, EllipticError> {
    let err = |reason: String| EllipticError::Parse { input: input.to_string(), reason };
    let mut node = false;
    let mut kv = BTreeMap::new();
    for tok in input.split_whitespace() {
        if tok == "node" {
            node = true;
            continue;
        }
        let (k, v) = tok.split_once('=').ok_or_else(|| err(format!("expected key=value, got `{tok}`")))?;
        let v: i64 = v.parse().map_err(|_| err(format!("`{v}` is not an integer")))?;
        if kv.insert(k.to_string(), v).is_some() {
            return Err(err(format!("duplicate key `{k}`")));
        }
    }
    let p = kv.remove("p").ok_or_else(|| err("missing p".to_string()))?;
    if p <= 0 {
        return Err(err("p must be positive".to_string()));
    }
    let d = kv.remove("d").unwrap_or(1);
    if d <= 0 {
        return Err(err("d must be positive".to_string()));
    }
    let field = GaloisField::extension(p as u64, d as usize)?;
    if node {
        if let Some(k) = kv.keys().next() {
            return Err(err(format!("unexpected key `{k}` for the node model")));
        }
        return Ok(CurveModel::Node(NodeModel::over(&field)?));
    }
    let short = kv.contains_key("A") || kv.contains_key("B");
    let names: &[&str] = if short { &["A", "B"] } else { &["a1", "a2", "a3", "a4", "a6"] };
    if let Some(k) = kv.keys().find(|k| !names.contains(&k.as_str())) {
        return Err(err(format!("unexpected key `{k}`")));
    }
    let get = |k: &str| field.from_i64(kv.get(k).copied().unwrap_or(0));
    let curve = if short {
        WeierstrassCurve::short(&field, get("A"), get("B"))?
    } else {
        WeierstrassCurve::long(&field, [get("a1"), get("a2"), get("a3"), get("a4"), get("a6")])?
    };
    Ok(CurveModel::Weierstrass(curve))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::RingError;

    #[test]
    fn parses_all_forms() {
        assert!(matches!(parse_curve("node p=5").unwrap(), CurveModel::Node(_)));
        let CurveModel::Weierstrass(w) = parse_curve("p=5 A=1 B=0").unwrap() else { panic!() };
        assert!(w.is_short());
        let CurveModel::Weierstrass(l) = parse_curve("p=7 a1=1 a2=0 a3=1 a4=2 a6=3").unwrap() else { panic!() };
        assert!(!l.is_short());
        let CurveModel::Weierstrass(e) = parse_curve("p=5 d=2 A=1 B=0").unwrap() else { panic!() };
        assert_eq!(e.field().order(), 25);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_curve("A=1 B=0"), Err(EllipticError::Parse { .. })));
        assert!(matches!(parse_curve("p=5 A=x"), Err(EllipticError::Parse { .. })));
        assert!(matches!(parse_curve("p=5 A=1 a1=2"), Err(EllipticError::Parse { .. })));
        assert_eq!(parse_curve("p=9 A=1 B=0"), Err(EllipticError::Ring(RingError::NotOddPrime(9))));
        assert_eq!(parse_curve("p=5 A=0 B=0"), Err(EllipticError::Singular));
    }
}
