//! JSON and CSV encodings of posets, fields, elements, products and
//! results.

use incidence_core::classify::{Decomposition, NonPropernessWitness, PropernessCertificate};
use incidence_core::linalg::SparseRow;
use incidence_core::oracle::Report;
use incidence_core::search::PosetSurveyRow;
use incidence_core::structures::{self, BilinearProduct};
use incidence_core::{ChainConstantMap, Error, Field, FieldSpec, JElement, LinearEndo, Poset, Radical, Result};
use serde_json::{json, Map, Value};

fn bad(what: &str) -> Error {
    Error::ParseError(what.to_string())
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))
}

fn as_label(v: &Value) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| bad("expected a nonnegative integer label"))
}

fn as_array<'v>(v: &'v Value, what: &str) -> Result<&'v Vec<Value>> {
    v.as_array().ok_or_else(|| bad(&format!("expected an array for {}", what)))
}

fn field_of<'v>(v: &'v Value, key: &str) -> Result<&'v Value> {
    v.get(key).ok_or_else(|| bad(&format!("missing key \"{}\"", key)))
}

/// `[x, y]` or `[x, y, z]` as labels.
fn labels(v: &Value, len: usize) -> Result<Vec<usize>> {
    let arr = as_array(v, "a label tuple")?;
    if arr.len() != len {
        return Err(bad(&format!("expected {} labels", len)));
    }
    arr.iter().map(as_label).collect()
}

/// `{"n": int, "hasse": [[u, v], ...]}`.
pub fn parse_poset(v: &Value) -> Result<Poset> {
    let n = as_label(field_of(v, "n")?)?;
    let edges = as_array(field_of(v, "hasse")?, "hasse")?
        .iter()
        .map(|e| labels(e, 2).map(|l| (l[0], l[1])))
        .collect::<Result<Vec<_>>>()?;
    Poset::from_hasse(n, &edges)
}

pub fn poset_json(p: &Poset) -> Value {
    json!({
        "n": p.size(),
        "hasse": p.hasse_edges().iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>(),
    })
}

/// `{"field": "Q"}` or `{"field": "GF", "p": 3}`.
pub fn parse_field_fragment(v: &Value) -> Result<FieldSpec> {
    match field_of(v, "field")?.as_str() {
        Some("Q") => Ok(FieldSpec::Rationals),
        Some("GF") => FieldSpec::prime(field_of(v, "p")?.as_u64().ok_or_else(|| bad("p must be an integer"))?),
        _ => Err(bad("field must be \"Q\" or \"GF\"")),
    }
}

pub fn field_json(spec: FieldSpec) -> Value {
    match spec {
        FieldSpec::Rationals => json!({"field": "Q"}),
        FieldSpec::Prime(p) => json!({"field": "GF", "p": p}),
    }
}

/// Command-line field: `Q`, `GF:p`, `GFp`, `GF(p)` or the JSON fragment.
pub fn parse_field_flag(text: &str) -> Result<FieldSpec> {
    let t = text.trim();
    if t.starts_with('{') {
        return parse_field_fragment(&parse_json(t)?);
    }
    if t == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    let digits = t
        .strip_prefix("GF")
        .map(|r| r.trim_start_matches(':').trim_start_matches('(').trim_end_matches(')'))
        .ok_or_else(|| bad(&format!("unknown field {}", t)))?;
    let p: u64 = digits.parse().map_err(|_| bad(&format!("unknown field {}", t)))?;
    FieldSpec::prime(p)
}

fn coeff_str(v: &Value) -> Result<&str> {
    v.as_str().ok_or_else(|| bad("coefficients are strings"))
}

fn pair_index<F: Field>(rad: &Radical<'_, F>, v: &Value) -> Result<usize> {
    let l = labels(v, 2)?;
    rad.pair_index(l[0], l[1])
}

fn pair_labels<F: Field>(rad: &Radical<'_, F>, i: usize) -> Value {
    let p = rad.poset().pair(i);
    json!([p.x, p.y])
}

/// `[{"pair": [x, y], "coeff": "s"}, ...]`; repeated pairs add up.
pub fn parse_jelement<F: Field>(rad: &Radical<'_, F>, v: &Value) -> Result<JElement<F::Elem>> {
    let mut terms = Vec::new();
    for t in as_array(v, "an element")? {
        let pair = pair_index(rad, field_of(t, "pair")?)?;
        let c = rad.field().parse(coeff_str(field_of(t, "coeff")?)?)?;
        terms.push((pair, c));
    }
    rad.element(terms)
}

pub fn jelement_json<F: Field>(rad: &Radical<'_, F>, a: &JElement<F::Elem>) -> Value {
    Value::Array(
        a.terms()
            .map(|(i, c)| json!({"pair": pair_labels(rad, i), "coeff": rad.field().format(c)}))
            .collect(),
    )
}

/// A flat coordinate vector over tensor or matrix coordinates.
pub fn sparse_json<F: Field>(field: &F, v: &SparseRow<F::Elem>) -> Value {
    Value::Array(v.iter().map(|(i, c)| json!({"index": i, "coeff": field.format(c)})).collect())
}

/// A list of columns in pair-index order.
pub fn parse_endo<F: Field>(rad: &Radical<'_, F>, v: &Value) -> Result<LinearEndo<F::Elem>> {
    let cols = as_array(v, "a linear map")?
        .iter()
        .map(|c| parse_jelement(rad, c))
        .collect::<Result<Vec<_>>>()?;
    rad.endo_from_columns(&cols)
}

pub fn endo_json<F: Field>(rad: &Radical<'_, F>, phi: &LinearEndo<F::Elem>) -> Value {
    Value::Array((0..rad.dim()).map(|j| jelement_json(rad, &rad.endo_column(phi, j))).collect())
}

/// `[{"pair": [x, y], "coeff": "s"}]`, checked constant on `~` classes.
pub fn parse_sigma<F: Field>(rad: &Radical<'_, F>, v: &Value) -> Result<ChainConstantMap<F::Elem>> {
    let mut values = Vec::new();
    for t in as_array(v, "sigma")? {
        let pair = pair_index(rad, field_of(t, "pair")?)?;
        values.push((pair, rad.field().parse(coeff_str(field_of(t, "coeff")?)?)?));
    }
    rad.sigma_from_pairs(&values)
}

pub fn sigma_json<F: Field>(rad: &Radical<'_, F>, sigma: &ChainConstantMap<F::Elem>) -> Value {
    Value::Array(
        sigma
            .values()
            .iter()
            .enumerate()
            .map(|(d, c)| {
                json!({
                    "class_rep": pair_labels(rad, rad.sim().representative(d)),
                    "coeff": rad.field().format(c),
                })
            })
            .collect(),
    )
}

/// `{"entries": [{"a": [x, y], "b": [u, v], "value": [...]}]}`.
pub fn parse_product<F: Field>(rad: &Radical<'_, F>, v: &Value) -> Result<BilinearProduct<F::Elem>> {
    let mut entries = Vec::new();
    for e in as_array(field_of(v, "entries")?, "entries")? {
        let a = pair_index(rad, field_of(e, "a")?)?;
        let b = pair_index(rad, field_of(e, "b")?)?;
        entries.push(((a, b), parse_jelement(rad, field_of(e, "value")?)?));
    }
    structures::product_from_entries(rad, entries)
}

fn entries_json<F: Field>(rad: &Radical<'_, F>, b: &BilinearProduct<F::Elem>) -> Value {
    Value::Array(
        b.entries()
            .map(|((p, q), v)| {
                json!({
                    "a": pair_labels(rad, p),
                    "b": pair_labels(rad, q),
                    "value": jelement_json(rad, v),
                })
            })
            .collect(),
    )
}

pub fn product_json<F: Field>(rad: &Radical<'_, F>, b: &BilinearProduct<F::Elem>) -> Value {
    json!({"entries": entries_json(rad, b)})
}

fn triple_json(t: incidence_core::StrictTriple) -> Value {
    json!([t.x, t.y, t.z])
}

pub fn decomposition_json<F: Field>(rad: &Radical<'_, F>, d: &Decomposition<F::Elem>) -> Value {
    let triples = rad.poset().triples();
    let alpha: Vec<Value> = d
        .alpha()
        .iter()
        .enumerate()
        .map(|(c, a)| {
            json!({
                "class_rep": triple_json(triples[rad.approx().representative(c)]),
                "coeff": rad.field().format(a),
            })
        })
        .collect();
    json!({"entries": entries_json(rad, d.bullet()), "alpha": alpha})
}

pub fn certificate_json<F: Field>(rad: &Radical<'_, F>, c: &PropernessCertificate<F::Elem>) -> Value {
    json!({
        "proper": true,
        "entries": entries_json(rad, &c.bullet),
        "sigma": sigma_json(rad, &c.sigma),
    })
}

pub fn witness_json<F: Field>(rad: &Radical<'_, F>, w: &NonPropernessWitness<F::Elem>) -> Value {
    let f = rad.field();
    json!({
        "proper": false,
        "witness": {
            "sim_class_rep": pair_labels(rad, rad.sim().representative(w.sim_class)),
            "triple1": triple_json(w.triple1),
            "triple2": triple_json(w.triple2),
            "alpha1": f.format(&w.alpha1),
            "alpha2": f.format(&w.alpha2),
        }
    })
}

pub fn report_json<F: Field>(poset: &Poset, field: &F, r: &Report<F::Elem>) -> Value {
    let mut dims = Map::new();
    for (k, v) in &r.dims {
        dims.insert((*k).to_string(), json!(v));
    }
    let witness = match &r.witness {
        None => Value::Null,
        Some(w) => json!({"detail": w.detail, "vector": sparse_json(field, &w.vector)}),
    };
    json!({
        "check": r.check,
        "poset": poset_json(poset),
        "field": field_json(field.spec()),
        "status": r.status.as_str(),
        "dims": dims,
        "witness": witness,
    })
}

pub const SURVEY_COLUMNS: [&str; 8] = [
    "n",
    "canonical_hasse",
    "length",
    "num_sim_classes",
    "num_approx_classes",
    "suff_cond",
    "all_ann_valued",
    "all_proper",
];

pub fn survey_csv_header() -> String {
    SURVEY_COLUMNS.join(",")
}

pub fn survey_csv_row(r: &PosetSurveyRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        r.n,
        r.hasse_string(),
        r.length,
        r.num_sim_classes,
        r.num_approx_classes,
        r.suff_cond,
        r.all_ann_valued,
        r.all_proper
    )
}

pub fn survey_json_row(r: &PosetSurveyRow) -> Value {
    json!({
        "n": r.n,
        "canonical_hasse": r.hasse_string(),
        "length": r.length,
        "num_sim_classes": r.num_sim_classes,
        "num_approx_classes": r.num_approx_classes,
        "suff_cond": r.suff_cond,
        "all_ann_valued": r.all_ann_valued,
        "all_proper": r.all_proper,
    })
}
