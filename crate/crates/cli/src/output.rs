//! Canonical JSON and CSV renderings of reports and of the registry.

use std::collections::BTreeMap;

use hypverify::exactnum::{format_rational, Rational};
use hypverify::identities::{chain_links, Bindings, Identity, XDomain, N_MAX};
use hypverify::realnum::HighReal;
use hypverify::verify::{Detail, Report, Value as Scalar};
use serde_json::{json, Map, Value};

use crate::RunConfig;

pub const SCHEMA_VERSION: u64 = 1;

/// Builds an object with keys inserted in sorted order, so output is
/// canonical whichever map backs `serde_json`.
fn obj<const N: usize>(pairs: [(&str, Value); N]) -> Value {
    let sorted: BTreeMap<&str, Value> = pairs.into_iter().collect();
    let mut m = Map::new();
    for (k, v) in sorted {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

fn q(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn opt_q(r: &Option<Rational>) -> Value {
    r.as_ref().map_or(Value::Null, q)
}

fn real(h: &HighReal, digits: u32) -> Value {
    Value::String(h.to_decimal_string(digits))
}

fn scalar(v: &Scalar, digits: u32) -> Value {
    match v {
        Scalar::Exact(r) => q(r),
        Scalar::Real(h) => real(h, digits),
    }
}

fn bindings(b: &Bindings) -> Value {
    let mut m = Map::new();
    for (k, v) in b {
        m.insert(k.clone(), q(v));
    }
    Value::Object(m)
}

fn detail(d: &Detail, digits: u32) -> Value {
    match d {
        Detail::Exact { order, first_bad_order, lhs_coeff, rhs_coeff } => obj([
            ("order", json!(order)),
            ("first_bad_order", json!(first_bad_order)),
            ("lhs_coeff", opt_q(lhs_coeff)),
            ("rhs_coeff", opt_q(rhs_coeff)),
        ]),
        Detail::Numeric { max_rel_error, worst_point, skipped_points } => obj([
            ("max_rel_error", real(max_rel_error, digits)),
            ("worst_point", q(worst_point)),
            ("skipped_points", Value::Array(skipped_points.iter().map(q).collect())),
        ]),
        Detail::Summation { lhs_value, rhs_value, rel_error } => obj([
            ("exact", json!(matches!(lhs_value, Scalar::Exact(_)))),
            ("lhs_value", scalar(lhs_value, digits)),
            ("rhs_value", scalar(rhs_value, digits)),
            ("rel_error", scalar(rel_error, digits)),
        ]),
        Detail::Skip { reason } => obj([("reason", json!(reason))]),
        Detail::Error { error, message, point } => {
            obj([("error", json!(error)), ("message", json!(message)), ("point", opt_q(point))])
        }
    }
}

fn result(r: &Report, digits: u32) -> Value {
    obj([
        ("id", json!(r.id)),
        ("variant", json!(r.variant)),
        ("convention", r.convention.map_or(Value::Null, |c| json!(c.name()))),
        ("mode", json!(r.mode.name())),
        ("binding_index", json!(r.binding_index)),
        ("bindings", bindings(&r.bindings)),
        ("seed", json!(r.seed)),
        ("verdict", json!(r.verdict.name())),
        ("detail", detail(&r.detail, digits)),
        ("runtime_ms", json!(r.runtime_ms)),
    ])
}

pub fn reports_json(cfg: &RunConfig, reports: &[Report]) -> String {
    let digits = cfg.settings.precision.digits();
    let doc = obj([
        ("schema_version", json!(SCHEMA_VERSION)),
        (
            "config",
            obj([
                ("precision", json!(digits)),
                ("order", json!(cfg.settings.order)),
                ("tolerance", q(&cfg.settings.tolerance)),
                ("seed", json!(cfg.selection.seed)),
                ("trials", json!(cfg.selection.trials)),
                ("grid", Value::Array(cfg.settings.grid.iter().map(q).collect())),
            ]),
        ),
        ("results", Value::Array(reports.iter().map(|r| result(r, digits)).collect())),
    ]);
    let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
    s.push('\n');
    s
}

pub const CSV_COLUMNS: [&str; 17] = [
    "id",
    "variant",
    "convention",
    "mode",
    "binding_index",
    "bindings",
    "seed",
    "verdict",
    "first_bad_order",
    "lhs_coeff",
    "rhs_coeff",
    "max_rel_error",
    "worst_point",
    "lhs_value",
    "rhs_value",
    "rel_error",
    "message",
];

fn csv_row(r: &Report, digits: u32) -> Vec<String> {
    let binds: Vec<String> = r.bindings.iter().map(|(k, v)| format!("{k}={}", format_rational(v))).collect();
    let mut row = vec![
        r.id.clone(),
        r.variant.clone(),
        r.convention.map_or(String::new(), |c| c.name().to_string()),
        r.mode.name().to_string(),
        r.binding_index.to_string(),
        binds.join(";"),
        r.seed.map_or(String::new(), |s| s.to_string()),
        r.verdict.name().to_string(),
    ];
    let mut d = vec![String::new(); 9];
    let sc = |v: &Scalar| match v {
        Scalar::Exact(q) => format_rational(q),
        Scalar::Real(h) => h.to_decimal_string(digits),
    };
    match &r.detail {
        Detail::Exact { first_bad_order, lhs_coeff, rhs_coeff, .. } => {
            d[0] = first_bad_order.map_or(String::new(), |k| k.to_string());
            d[1] = lhs_coeff.as_ref().map_or(String::new(), format_rational);
            d[2] = rhs_coeff.as_ref().map_or(String::new(), format_rational);
        }
        Detail::Numeric { max_rel_error, worst_point, .. } => {
            d[3] = max_rel_error.to_decimal_string(digits);
            d[4] = format_rational(worst_point);
        }
        Detail::Summation { lhs_value, rhs_value, rel_error } => {
            d[5] = sc(lhs_value);
            d[6] = sc(rhs_value);
            d[7] = sc(rel_error);
        }
        Detail::Skip { reason } => d[8] = reason.clone(),
        Detail::Error { error, message, .. } => d[8] = format!("{error}: {message}"),
    }
    row.extend(d);
    row
}

pub fn reports_csv(cfg: &RunConfig, reports: &[Report]) -> String {
    let digits = cfg.settings.precision.digits();
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    for r in reports {
        w.write_record(csv_row(r, digits)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}

fn identity_json(i: &Identity) -> Value {
    let chain = chain_links(&i.id).map_or(Value::Null, |links| {
        Value::Array(links.iter().map(|l| obj([("name", json!(l.name)), ("mode", json!(l.mode.name()))])).collect())
    });
    obj([
        ("id", json!(i.id)),
        ("title", json!(i.title)),
        ("kind", json!(i.kind.name())),
        ("source", json!(i.source)),
        (
            "params",
            Value::Array(i.params.iter().map(|p| obj([("name", json!(p.name)), ("sampling", json!(p.dist.to_string()))])).collect()),
        ),
        (
            "derived",
            Value::Array(i.derived.iter().map(|d| obj([("name", json!(d.name)), ("formula", json!(d.expr.to_string()))])).collect()),
        ),
        ("constraints", Value::Array(i.constraints.iter().map(|c| json!(c.label)).collect())),
        (
            "variants",
            Value::Array(
                i.variants
                    .iter()
                    .map(|v| {
                        obj([
                            ("name", json!(v.name)),
                            ("lhs", json!(v.lhs.to_string())),
                            ("rhs", json!(v.rhs.to_string())),
                            ("conventions", Value::Array(v.conventions.iter().map(|c| json!(c.name())).collect())),
                        ])
                    })
                    .collect(),
            ),
        ),
        ("modes", Value::Array(i.modes.iter().map(|m| json!(m.name())).collect())),
        (
            "x_domain",
            json!(match i.x_domain {
                XDomain::All => "all",
                XDomain::Positive => "positive",
            }),
        ),
        ("chain", chain),
    ])
}

pub fn registry_json(reg: &[Identity]) -> String {
    let doc = obj([
        ("schema_version", json!(SCHEMA_VERSION)),
        ("n_max", json!(N_MAX)),
        ("identities", Value::Array(reg.iter().map(identity_json).collect())),
    ]);
    let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
    s.push('\n');
    s
}

fn field<'a>(v: &'a Value, key: &str, ctx: &str) -> Result<&'a Value, String> {
    v.get(key).ok_or_else(|| format!("{ctx}: missing {key}"))
}

fn string_field<'a>(v: &'a Value, key: &str, ctx: &str) -> Result<&'a str, String> {
    field(v, key, ctx)?.as_str().ok_or_else(|| format!("{ctx}: {key} is not a string"))
}

fn array_field<'a>(v: &'a Value, key: &str, ctx: &str) -> Result<&'a Vec<Value>, String> {
    field(v, key, ctx)?.as_array().ok_or_else(|| format!("{ctx}: {key} is not an array"))
}

/// Structural check of a registry dump; returns the number of identities.
pub fn validate_registry(doc: &Value) -> Result<usize, String> {
    if field(doc, "schema_version", "registry")?.as_u64() != Some(SCHEMA_VERSION) {
        return Err("registry: unsupported schema_version".into());
    }
    field(doc, "n_max", "registry")?.as_u64().ok_or("registry: n_max is not an integer")?;
    let ids = array_field(doc, "identities", "registry")?;
    for i in ids {
        let id = string_field(i, "id", "identity")?;
        string_field(i, "title", id)?;
        string_field(i, "source", id)?;
        if !matches!(string_field(i, "kind", id)?, "series" | "summation") {
            return Err(format!("{id}: bad kind"));
        }
        for p in array_field(i, "params", id)? {
            string_field(p, "name", id)?;
            string_field(p, "sampling", id)?;
        }
        for d in array_field(i, "derived", id)? {
            string_field(d, "name", id)?;
            string_field(d, "formula", id)?;
        }
        if array_field(i, "constraints", id)?.iter().any(|c| !c.is_string()) {
            return Err(format!("{id}: constraint labels must be strings"));
        }
        let variants = array_field(i, "variants", id)?;
        if variants.is_empty() {
            return Err(format!("{id}: no variants"));
        }
        for v in variants {
            for key in ["name", "lhs", "rhs"] {
                string_field(v, key, id)?;
            }
            for c in array_field(v, "conventions", id)? {
                if !matches!(c.as_str(), Some("naive" | "limit")) {
                    return Err(format!("{id}: bad convention"));
                }
            }
        }
        let modes = array_field(i, "modes", id)?;
        if modes.is_empty() || modes.iter().any(|m| !matches!(m.as_str(), Some("exact" | "numeric" | "summation"))) {
            return Err(format!("{id}: bad modes"));
        }
        if !matches!(string_field(i, "x_domain", id)?, "all" | "positive") {
            return Err(format!("{id}: bad x_domain"));
        }
        let chain = field(i, "chain", id)?;
        if !(chain.is_null() || chain.is_array()) {
            return Err(format!("{id}: bad chain"));
        }
    }
    Ok(ids.len())
}
