use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use operlab_core::dop_local::{
    self, act, composition_consistent, default_window, horizontal_exponents, leibniz_consistent, pn_curvature, sol,
    verify_descent_report, LevelStructure,
};
use operlab_core::elliptic::{
    count_points, hasse_deuring, normalize_generator, parse_curve, pth_power_derivation, CurveModel,
};
use operlab_core::opers::{classify_dormant, hm_gamma, miura_fiber, Classification, OperContext};
use operlab_core::rings::{is_prime, GaloisField, Matrix, PrimeModulus, Ring, WittElem, WittRing};
use operlab_core::rootdata::{weyl_orbit_count, AdjointQuotientPoint, Family, RootDatum, TraceConvention};
use operlab_core::witt_opers::{
    build_witt_oper, canonical_diagonal_lift, canonicalize, decompose_dormant_matrix, diagonal_reduce, miura_fibers,
    theta_classify, ATuple, ATupleClass, LevelSide, WittContext, WittError, WittOperData,
};

use crate::{Certificate, CliError, Job, JobConfig, Table, ValidationError};

const MAX_WITT_MODULUS: u64 = 1 << 20;
const MAX_CLASSIFY_CANDIDATES: u64 = 10_000_000;
const MAX_CENSUS_POINTS: u64 = 10_000_000;

type Checks = BTreeMap<String, bool>;

pub(crate) fn dispatch(config: &JobConfig) -> Result<Certificate, CliError> {
    let w = config.window;
    let (results, checks, table) = match &config.job {
        Job::CurveHasse { curve } => curve_hasse(curve)?,
        Job::OperClassify { n, curve } => oper_classify(*n, curve)?,
        Job::OperHm { p, a, rho } => oper_hm(*p, *a, rho)?,
        Job::OperMiuraFiber { n, curve, rho } => oper_miura_fiber(*n, curve, rho.as_deref())?,
        Job::WittClassify { n, p, length, miura } => witt_classify(*n, *p, *length, *miura, w)?,
        Job::WittDecompose { matrix, p, length } => witt_decompose(matrix, *p, *length)?,
        Job::WittReduce { class, p, length } => witt_reduce(class, *p, *length, w)?,
        Job::WittLift { class, p, length } => witt_lift(class, *p, *length, w)?,
        Job::DopVerify429 { a, p, length, table } => dop_verify(*a, *p, *length, *table, w)?,
        Job::Census { family, n, primes } => census(family, *n, primes)?,
    };
    Ok(Certificate { job: config.clone(), results, checks, table })
}

type JobOutput = (Value, Checks, Option<Table>);

fn check(checks: &mut Checks, name: &str, ok: bool) {
    checks.insert(name.to_string(), ok);
}

fn validate_prime(p: u64) -> Result<(), ValidationError> {
    if p > 2 && p < (1 << 31) && is_prime(p) {
        Ok(())
    } else {
        Err(ValidationError::new("p", format!("{p} is not an odd prime")))
    }
}

fn validate_guard(n: usize, p: u64) -> Result<(), ValidationError> {
    if n < 1 || 2 * n as u64 >= p {
        return Err(ValidationError::new("n", format!("rank {n} must satisfy 1 <= n and 2n < p = {p}")));
    }
    Ok(())
}

fn parse_ints(parameter: &'static str, raw: &str) -> Result<Vec<i64>, ValidationError> {
    raw.split(',')
        .map(|s| {
            s.trim().parse::<i64>().map_err(|_| ValidationError::new(parameter, format!("`{s}` is not an integer")))
        })
        .collect()
}

fn parse_curve_param(raw: &str) -> Result<CurveModel, ValidationError> {
    let curve = parse_curve(raw).map_err(|e| ValidationError::new("curve", e.to_string()))?;
    if curve.field().order() > MAX_WITT_MODULUS {
        return Err(ValidationError::new("curve", "field too large for exhaustive checks"));
    }
    Ok(curve)
}

fn witt_ring(p: u64, length: u32) -> Result<WittRing, ValidationError> {
    validate_prime(p)?;
    if length == 0 || p.checked_pow(length).is_none_or(|q| q > MAX_WITT_MODULUS) {
        return Err(ValidationError::new("N", format!("need 1 <= N and p^N <= {MAX_WITT_MODULUS}")));
    }
    let modulus = PrimeModulus::new(p).map_err(|e| ValidationError::new("p", e.to_string()))?;
    WittRing::new(modulus, length).map_err(|e| ValidationError::new("N", e.to_string()))
}

fn witt_context(n: usize, p: u64, length: u32) -> Result<WittContext, ValidationError> {
    witt_ring(p, length)?;
    validate_guard(n, p)?;
    WittContext::new(n, p, length).map_err(|e| ValidationError::new("n", e.to_string()))
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn curve_hasse(raw: &str) -> Result<JobOutput, CliError> {
    let curve = parse_curve_param(raw)?;
    let h = pth_power_derivation(&curve, &curve.canonical_differential())?;
    let mut checks = Checks::new();
    let mut results = json!({
        "curve": curve.describe(),
        "field_order": curve.field().order(),
        "H": h.value().to_string(),
        "ordinary": h.is_unit(),
    });
    let (agree, total) = match &curve {
        CurveModel::Weierstrass(w) => {
            let deuring = hasse_deuring(w)?;
            let count = count_points(w);
            let ss_by_count = count % curve.p() == 1;
            check(&mut checks, "derivation_vs_deuring", deuring == h);
            check(&mut checks, "hasse_vs_point_count", ss_by_count == !h.is_unit());
            results["point_count"] = json!(count);
            (1 + (deuring == h) as u32 + (ss_by_count == !h.is_unit()) as u32, 3)
        }
        CurveModel::Node(_) => {
            check(&mut checks, "node_hasse_is_one", h.value().is_one());
            (h.value().is_one() as u32, 1)
        }
    };
    results["agreement"] = json!(format!("{agree}/{total}"));
    if h.is_unit() {
        let g = normalize_generator(&curve, &curve.canonical_differential())?;
        let hg = pth_power_derivation(&curve, &g)?;
        check(&mut checks, "normalized_hasse_is_one", hg.value().is_one());
        results["normalized_generator"] = json!({ "field_order": g.field().order(), "scale": g.scale().to_string() });
    }
    Ok((results, checks, None))
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn type_a_count(n: u64, p: u64) -> u64 {
    if p < n {
        return 0;
    }
    (1..n).map(|i| p - i).product::<u64>() / (1..=n).product::<u64>()
}

fn rho_json(rho: &AdjointQuotientPoint) -> Value {
    json!(strings(rho.coeffs()))
}

fn classify_for(n: usize, raw: &str) -> Result<(Classification, OperContext), CliError> {
    let curve = parse_curve_param(raw)?;
    validate_guard(n, curve.p())?;
    if n < 2 {
        return Err(ValidationError::new("n", "rank must be at least 2").into());
    }
    let ctx = OperContext::new(n, curve.p())?;
    Ok((classify_dormant(&curve, &ctx)?, ctx))
}

fn oper_classify(n: usize, raw: &str) -> Result<JobOutput, CliError> {
    let (c, ctx) = classify_for(n, raw)?;
    let mut checks = Checks::new();
    let mut table = Table::new(&["rho", "miura_lifts"]);
    let mut classes = Vec::new();
    let mut lifts_ok = true;
    for spec in &c.classes {
        let lifts = miura_fiber(spec, &ctx)?;
        let expected = if c.is_supersingular() { 1 } else { factorial(n) };
        lifts_ok &= lifts.len() == expected;
        let mus: Vec<Vec<String>> = lifts.iter().map(|m| strings(m.mu().coords())).collect();
        table.push(vec![spec.rho().to_string(), lifts.len().to_string()]);
        classes.push(json!({ "rho": rho_json(spec.rho()), "dormant": true, "miura_lifts": mus }));
    }
    let expected = if c.is_supersingular() { 1 } else { type_a_count(n as u64, ctx.p()) as usize };
    check(&mut checks, "class_count", c.classes.len() == expected);
    check(&mut checks, "miura_lift_counts", lifts_ok);
    if let Some(comp) = &c.complement {
        check(&mut checks, "complement_sweep", comp.agrees);
    }
    let results = json!({
        "curve": c.curve.describe(),
        "n": n,
        "H": c.canonical_hasse.value().to_string(),
        "normalized": c.normalized,
        "supersingular": c.is_supersingular(),
        "generator_field_order": c.generator.field().order(),
        "classes": classes,
        "complement": c.complement.as_ref().map(|k| json!({
            "field_order": k.field_order,
            "swept": k.swept,
            "dormant_found": k.dormant_found,
            "agrees": k.agrees,
        })),
    });
    Ok((results, checks, Some(table)))
}

fn rho_point(field: &std::sync::Arc<GaloisField>, raw: &str, n: usize) -> Result<AdjointQuotientPoint, CliError> {
    let vals = parse_ints("rho", raw)?;
    AdjointQuotientPoint::new(vals.iter().map(|&v| field.from_i64(v)).collect(), n, TraceConvention::Sl)
        .map_err(|e| ValidationError::new("rho", e.to_string()).into())
}

fn oper_hm(p: u64, a: i64, raw: &str) -> Result<JobOutput, CliError> {
    validate_prime(p)?;
    let n = parse_ints("rho", raw)?.len() + 1;
    validate_guard(n, p)?;
    let fp = GaloisField::prime(p)?;
    let rho = rho_point(&fp, raw, n)?;
    let gamma = hm_gamma(&fp.from_i64(a), &rho)?;
    let gamma0 = hm_gamma(&fp.zero(), &rho)?;
    let mut checks = Checks::new();
    check(&mut checks, "frobenius_at_zero", gamma0 == rho.frobenius());
    let results = json!({ "n": n, "a": fp.from_i64(a).to_string(), "rho": rho_json(&rho), "gamma": rho_json(&gamma) });
    Ok((results, checks, None))
}

fn oper_miura_fiber(n: usize, raw: &str, rho: Option<&str>) -> Result<JobOutput, CliError> {
    let (c, ctx) = classify_for(n, raw)?;
    let wanted = match rho {
        Some(r) => Some(rho_point(&GaloisField::prime(ctx.p())?, r, n)?),
        None => None,
    };
    let selected: Vec<_> = c.classes.iter().filter(|s| wanted.as_ref().is_none_or(|w| s.rho() == w)).collect();
    if selected.is_empty() {
        return Err(ValidationError::new("rho", "not a dormant class on this curve").into());
    }
    let datum = ctx.datum();
    let mut checks = Checks::new();
    let mut fibers = Vec::new();
    let mut table = Table::new(&["rho", "mu"]);
    let (mut counts_ok, mut regular_ok) = (true, true);
    for spec in selected {
        let lifts = miura_fiber(spec, &ctx)?;
        counts_ok &= lifts.len() == if c.is_supersingular() { 1 } else { factorial(n) };
        regular_ok &= lifts.iter().all(|m| m.is_degenerate() || m.mu().is_regular(&datum));
        for m in &lifts {
            table.push(vec![spec.rho().to_string(), m.mu().to_string()]);
        }
        let mus: Vec<Vec<String>> = lifts.iter().map(|m| strings(m.mu().coords())).collect();
        fibers.push(json!({ "rho": rho_json(spec.rho()), "lifts": mus, "degenerate": c.is_supersingular() }));
    }
    check(&mut checks, "fiber_sizes", counts_ok);
    check(&mut checks, "lifts_regular", regular_ok);
    let results = json!({ "curve": c.curve.describe(), "n": n, "fibers": fibers });
    Ok((results, checks, Some(table)))
}

fn class_json(class: &ATupleClass) -> Value {
    json!(class.values())
}

fn reduction_window(ctx: &WittContext, window: Option<i64>) -> i64 {
    window.unwrap_or_else(|| default_window(ctx.p(), ctx.length(), 2))
}

/// `Ok(None)` when the reduction check itself fails.
fn reduce_checked(ctx: &WittContext, d: &WittOperData, w: i64) -> Result<Option<WittOperData>, CliError> {
    match diagonal_reduce(ctx, d, w) {
        Ok(r) => Ok(Some(r)),
        Err(WittError::Verification(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn witt_classify(n: usize, p: u64, length: u32, miura: bool, window: Option<i64>) -> Result<JobOutput, CliError> {
    let ctx = witt_context(n, p, length)?;
    if ctx.ring().modulus().checked_pow(n as u32 - 1).is_none_or(|c| c > MAX_CLASSIFY_CANDIDATES) {
        return Err(ValidationError::new("N", "classification too large").into());
    }
    let w = reduction_window(&ctx, window);
    let classes = theta_classify(&ctx);
    let rows: Vec<Result<(Value, bool, bool, bool), CliError>> = classes
        .par_iter()
        .map(|class| {
            let d = build_witt_oper(&ctx, class.canonical(), LevelSide::N1)?;
            let decomposed = decompose_dormant_matrix(&d.matrix_in_flag_basis()?)? == *class;
            let reduced = reduce_checked(&ctx, &d, w)?;
            let lifted = match &reduced {
                Some(r) => canonical_diagonal_lift(&ctx, r)? == d,
                None => false,
            };
            let status = if reduced.is_some() && lifted { "pass" } else { "fail" };
            let row = json!({
                "canonical": class_json(class),
                "flag_det_unit": d.flag_det_unit(),
                "decompose_check": if decomposed { "pass" } else { "fail" },
                "reduction_check": status,
            });
            Ok((row, d.flag_det_unit(), decomposed, reduced.is_some() && lifted))
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut checks = Checks::new();
    check(&mut checks, "class_count_formula", classes.len() as u64 == ctx.expected_class_count());
    check(&mut checks, "flag_det_units", rows.iter().all(|r| r.1));
    check(&mut checks, "decompose_round_trip", rows.iter().all(|r| r.2));
    check(&mut checks, "reduction_and_lift", rows.iter().all(|r| r.3));
    let mut table = Table::new(&["canonical", "flag_det_unit", "decompose_check", "reduction_check"]);
    for (row, ..) in &rows {
        table.push(vec![
            class_json_str(&row["canonical"]),
            row["flag_det_unit"].to_string(),
            row["decompose_check"].as_str().unwrap_or_default().to_string(),
            row["reduction_check"].as_str().unwrap_or_default().to_string(),
        ]);
    }
    let mut results = json!({
        "p": p,
        "N": length,
        "n": n,
        "window": w,
        "class_count": classes.len(),
        "classes": rows.into_iter().map(|r| r.0).collect::<Vec<_>>(),
    });
    if miura {
        let fibers = miura_fibers(&ctx)?;
        let total: usize = fibers.values().sum();
        let sizes_ok = fibers.len() == classes.len() && fibers.values().all(|&k| k == factorial(n));
        check(&mut checks, "miura_fiber_sizes", sizes_ok);
        results["miura"] = json!({ "tuple_count": total, "fiber_size": factorial(n) });
    }
    Ok((results, checks, Some(table)))
}

fn class_json_str(v: &Value) -> String {
    v.as_array().map(|xs| xs.iter().map(Value::to_string).collect::<Vec<_>>().join(" ")).unwrap_or_default()
}

fn parse_matrix(ring: WittRing, raw: &str) -> Result<Matrix<WittElem>, ValidationError> {
    let rows: Vec<Vec<WittElem>> = raw
        .split(';')
        .map(|r| parse_ints("matrix", r).map(|v| v.into_iter().map(|x| ring.elem(x)).collect()))
        .collect::<Result<_, _>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(ValidationError::new("matrix", "must be square"));
    }
    Ok(Matrix::from_rows(rows))
}

fn witt_decompose(raw: &str, p: u64, length: u32) -> Result<JobOutput, CliError> {
    let ring = witt_ring(p, length)?;
    let m = parse_matrix(ring, raw)?;
    let n = m.rows();
    if n as u64 >= p {
        return Err(ValidationError::new("matrix", format!("size {n} must be below p = {p}")).into());
    }
    let class = decompose_dormant_matrix(&m)?;
    let ctx = WittContext::unguarded(n, p, length)?;
    let rebuilt = build_witt_oper(&ctx, class.canonical(), LevelSide::N1)?;
    let mut checks = Checks::new();
    check(&mut checks, "rebuild_round_trip", decompose_dormant_matrix(&rebuilt.matrix_in_flag_basis()?)? == class);
    let results = json!({ "p": p, "N": length, "n": n, "class": class_json(&class) });
    Ok((results, checks, None))
}

fn class_param(
    ctx_of: impl Fn(usize) -> Result<WittContext, ValidationError>,
    raw: &str,
) -> Result<(WittContext, ATuple), CliError> {
    let vals = parse_ints("class", raw)?;
    let ctx = ctx_of(vals.len())?;
    let t = ATuple::from_ints(ctx.ring(), &vals);
    canonicalize(&t).map_err(|e| ValidationError::new("class", e.to_string()))?;
    Ok((ctx, t))
}

fn oper_data_json(d: &WittOperData) -> Value {
    let flag: Vec<Vec<u64>> = d.oper_flag().to_rows().iter().map(|r| r.iter().map(WittElem::value).collect()).collect();
    json!({
        "side": match d.side() { LevelSide::N1 => "(N,1)", LevelSide::OneN => "(1,N)" },
        "class": class_json(d.class()),
        "ring_modulus": d.ring().modulus(),
        "oper_flag": flag,
        "flag_det": d.flag_det().value(),
        "flag_det_unit": d.flag_det_unit(),
        "miura_transverse": d.miura_transverse(),
        "structures": d.structures().iter().map(|s| s.a().value()).collect::<Vec<_>>(),
    })
}

fn witt_reduce(raw: &str, p: u64, length: u32, window: Option<i64>) -> Result<JobOutput, CliError> {
    let (ctx, t) = class_param(|n| witt_context(n, p, length), raw)?;
    let w = reduction_window(&ctx, window);
    let d = build_witt_oper(&ctx, &t, LevelSide::N1)?;
    let mut checks = Checks::new();
    for (i, &a) in d.class().canonical().entries().iter().enumerate() {
        check(&mut checks, &format!("descent_{i}"), dop_local::verify_descent(a, w)?);
    }
    let reduced = reduce_checked(&ctx, &d, w)?;
    check(&mut checks, "reduction", reduced.is_some());
    let results = json!({
        "window": w,
        "input": oper_data_json(&d),
        "reduced": reduced.as_ref().map(oper_data_json),
    });
    Ok((results, checks, None))
}

fn witt_lift(raw: &str, p: u64, length: u32, window: Option<i64>) -> Result<JobOutput, CliError> {
    let (ctx, t) = class_param(|n| witt_context(n, p, length), raw)?;
    let w = reduction_window(&ctx, window);
    let d = build_witt_oper(&ctx, &t, LevelSide::OneN)?;
    let lift = canonical_diagonal_lift(&ctx, &d)?;
    let mut checks = Checks::new();
    check(&mut checks, "lift_reduces_back", reduce_checked(&ctx, &lift, w)?.as_ref() == Some(&d));
    let results = json!({ "window": w, "input": oper_data_json(&d), "lift": oper_data_json(&lift) });
    Ok((results, checks, None))
}

fn dop_verify(a: i64, p: u64, length: u32, want_table: bool, window: Option<i64>) -> Result<JobOutput, CliError> {
    let ring = witt_ring(p, length)?;
    let w = window.unwrap_or(2 * ring.modulus() as i64);
    let a = ring.elem(a);
    let s = LevelStructure::new(a)?;
    let report = verify_descent_report(a, w)?;
    let basis = sol(&s)?;
    let mut checks = Checks::new();
    check(&mut checks, "descent", report.passed());
    check(&mut checks, "pn_curvature_zero", pn_curvature(&s, w)?.is_zero());
    check(&mut checks, "sol_residue", basis.residue == (-a).value());
    check(&mut checks, "leibniz", leibniz_consistent(&s, w)?);
    check(&mut checks, "composition", composition_consistent(&s, w)?);
    let results = json!({
        "a": a.value(),
        "p": p,
        "N": length,
        "window": w,
        "horizontal": report.horizontal,
        "compared": report.compared,
        "mismatches": report.mismatches,
        "sol_residue": basis.residue,
        "result": if report.passed() { "pass" } else { "fail" },
    });
    let table = if want_table {
        let r0 = horizontal_exponents(a, w).first().copied();
        let mut t = Table::new(&["k", "level", "scalar", "descended"]);
        for k in dop_local::window(w) {
            for level in 0..length {
                let scalar = act(level, &s, k)?.to_index();
                let descended = r0.map(|r| dop_local::descended_scalar(k, r, level, p).to_string()).unwrap_or_default();
                t.push(vec![k.to_string(), level.to_string(), scalar.to_string(), descended]);
            }
        }
        Some(t)
    } else {
        None
    };
    Ok((results, checks, table))
}

fn parse_prime_range(raw: &str) -> Result<Vec<u64>, ValidationError> {
    let bad = || ValidationError::new("p", format!("`{raw}` is not a range a..b"));
    let (lo, hi) = match raw.split_once("..") {
        Some((a, b)) => (a.trim().parse::<u64>().map_err(|_| bad())?, b.trim().parse::<u64>().map_err(|_| bad())?),
        None => {
            let v = raw.trim().parse::<u64>().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi || hi >= 1 << 31 {
        return Err(bad());
    }
    Ok((lo..=hi).filter(|&q| q > 2 && is_prime(q)).collect())
}

fn closed_form(family: Family, n: usize, p: u64) -> Option<u64> {
    match family {
        Family::A => Some(type_a_count(n as u64, p)),
        Family::B | Family::C => {
            let r = n as u64;
            if p < 2 * r + 1 {
                return Some(0);
            }
            Some((0..r).map(|i| p - 1 - 2 * i).product::<u64>() / ((1..=r).product::<u64>() << r))
        }
        Family::D => None,
    }
}

fn census(family_raw: &str, n: usize, primes_raw: &str) -> Result<JobOutput, CliError> {
    let family: Family = family_raw.parse().map_err(|e: String| ValidationError::new("type", e))?;
    let datum = match family {
        Family::A => RootDatum::pgl(n),
        _ => RootDatum::new(family, n),
    }
    .map_err(|e| ValidationError::new("n", e.to_string()))?;
    if family == Family::A && n < 2 {
        return Err(ValidationError::new("n", "type A needs n >= 2").into());
    }
    let primes = parse_prime_range(primes_raw)?;
    if primes.iter().any(|&q| q.checked_pow(datum.rank() as u32).is_none_or(|c| c > MAX_CENSUS_POINTS)) {
        return Err(ValidationError::new("p", "torus too large for brute force").into());
    }
    let counts: Vec<Result<(u64, usize), CliError>> =
        primes.par_iter().map(|&q| Ok((q, weyl_orbit_count(&datum, &PrimeModulus::new(q)?)?))).collect();
    let counts = counts.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut checks = Checks::new();
    if counts.iter().all(|&(q, _)| closed_form(family, n, q).is_some()) {
        check(&mut checks, "closed_form", counts.iter().all(|&(q, c)| closed_form(family, n, q) == Some(c as u64)));
    }
    let mut table = Table::new(&["p", "count"]);
    for (q, c) in &counts {
        table.push(vec![q.to_string(), c.to_string()]);
    }
    let results = json!({
        "type": family.to_string(),
        "n": n,
        "counts": counts.iter().map(|&(q, c)| json!({ "p": q, "count": c })).collect::<Vec<_>>(),
    });
    Ok((results, checks, Some(table)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use operlab_core::rings::FieldElem;

    fn run_job(job: Job) -> Certificate {
        crate::run(&JobConfig { job, window: None }).unwrap()
    }

    #[test]
    fn census_type_a() {
        let c = run_job(Job::Census { family: "A".into(), n: 2, primes: "5..13".into() });
        let counts: Vec<(u64, u64)> = c.results["counts"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| (v["p"].as_u64().unwrap(), v["count"].as_u64().unwrap()))
            .collect();
        assert_eq!(counts, vec![(5, 2), (7, 3), (11, 5), (13, 6)]);
        assert!(c.passed());
    }

    #[test]
    fn hasse_certificate() {
        let c = run_job(Job::CurveHasse { curve: "p=5 A=1 B=0".into() });
        assert_eq!(c.results["H"], "2");
        assert_eq!(c.results["ordinary"], true);
        assert_eq!(c.results["agreement"], "3/3");
        assert!(c.passed());
    }

    #[test]
    fn witt_classify_certificate() {
        let c = run_job(Job::WittClassify { n: 2, p: 5, length: 2, miura: true });
        assert_eq!(c.results["class_count"], 10);
        assert!(c.passed());
        assert!(c.results["classes"].as_array().unwrap().iter().all(|r| r["reduction_check"] == "pass"));
    }

    #[test]
    fn decompose_example() {
        let c = run_job(Job::WittDecompose { matrix: "0,-6;1,5".into(), p: 5, length: 2 });
        assert_eq!(c.results["class"], json!([0, 1]));
    }

    #[test]
    fn validation_names_parameter() {
        let err = crate::run(&JobConfig { job: Job::OperClassify { n: 3, curve: "p=5 A=1 B=0".into() }, window: None })
            .unwrap_err();
        assert!(matches!(err, CliError::Validation(ValidationError { parameter: "n", .. })));
        assert_eq!(err.exit_code(), 1);
        let err =
            crate::run(&JobConfig { job: Job::WittReduce { class: "0,5".into(), p: 5, length: 2 }, window: None })
                .unwrap_err();
        assert!(matches!(err, CliError::Validation(ValidationError { parameter: "class", .. })));
        let err =
            crate::run(&JobConfig { job: Job::CurveHasse { curve: "p=6 A=1 B=0".into() }, window: None }).unwrap_err();
        assert!(matches!(err, CliError::Validation(ValidationError { parameter: "curve", .. })));
    }

    #[test]
    fn module_errors_exit_two() {
        let err = crate::run(&JobConfig {
            job: Job::WittDecompose { matrix: "1,1;0,1".into(), p: 5, length: 2 },
            window: None,
        })
        .unwrap_err();
        assert!(matches!(err, CliError::Witt(WittError::NotDormantModP)));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn prime_ranges() {
        assert_eq!(parse_prime_range("2..13").unwrap(), vec![3, 5, 7, 11, 13]);
        assert_eq!(parse_prime_range("7").unwrap(), vec![7]);
        assert!(parse_prime_range("9..3").is_err());
    }

    #[test]
    fn field_elements_render_exactly() {
        let f = GaloisField::extension(5, 2).unwrap();
        let x: FieldElem = f.element(&[2, 3]);
        assert_eq!(strings(&[x]), vec!["2+3t".to_string()]);
        assert!(f.one().is_one());
    }
}
