//! Three operations for the static page in `www/`. Each returns `key: value`
//! lines; the plain functions are usable without a browser.

use dehnvol_core::dimgroup::Spectrum;
use dehnvol_core::{
    associated_ideal, cf_expand, comparison_report, predict_volume, validate_stationary, Real,
    RealQuadraticField,
};
use wasm_bindgen::prelude::*;

pub type Lines = Vec<(&'static str, String)>;

fn render(lines: Lines) -> String {
    let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    lines
        .iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

fn ints(s: &str) -> Result<Vec<i64>, String> {
    s.split(|c: char| c == ',' || c == '-' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("{t:?} is not an integer")))
        .collect()
}

fn decimal(x: &Real, digits: usize) -> String {
    x.to_decimal(digits)
}

pub fn volume_lines(surgery: &str, c: &str, digits: usize) -> Result<Lines, String> {
    let p = ints(surgery)?;
    let c_real: Real = c
        .trim()
        .parse()
        .map_err(|_| format!("C = {c:?} is not a decimal number"))?;
    let pred = predict_volume(&p, &c_real).map_err(|e| e.to_string())?;
    Ok(vec![
        ("theta", pred.theta.to_string()),
        ("continued fraction", cf_expand(&pred.theta).to_string()),
        ("d", pred.field.radicand().to_string()),
        ("D", pred.field.discriminant().to_string()),
        ("epsilon", pred.field.fundamental_unit().to_string()),
        ("h", pred.field.class_number().to_string()),
        ("volume (sqrt D)", decimal(&pred.value, digits)),
        ("volume (sqrt d)", decimal(&pred.value_d, digits)),
    ])
}

pub fn field_lines(d: i64, digits: usize) -> Result<Lines, String> {
    let field = RealQuadraticField::new(d).map_err(|e| e.to_string())?;
    let cmp = comparison_report(&field, None).map_err(|e| e.to_string())?;
    let eps = field.fundamental_unit();
    let reps: Vec<String> = field
        .classes()
        .iter()
        .map(|c| c.representative().to_string())
        .collect();
    Ok(vec![
        ("D", field.discriminant().to_string()),
        ("epsilon", eps.to_string()),
        (
            "epsilon decimal",
            decimal(&Real::from_quadratic(eps.as_number()), digits),
        ),
        ("N(epsilon)", field.unit_norm().to_string()),
        ("regulator", decimal(field.regulator(), digits)),
        ("h", field.class_number().to_string()),
        ("classes", reps.join("  ")),
        ("density", decimal(&cmp.density, digits)),
        ("zeta residue", decimal(&cmp.residue, digits)),
    ])
}

pub fn classify_lines(entries: &str, digits: usize) -> Result<Lines, String> {
    let e = ints(entries)?;
    let n = (e.len() as f64).sqrt().round() as usize;
    if e.is_empty() || n * n != e.len() {
        return Err(format!("{} entries do not form a square matrix", e.len()));
    }
    let rows: Vec<Vec<i64>> = e.chunks(n).map(|c| c.to_vec()).collect();
    let g = validate_stationary(&rows).map_err(|err| err.to_string())?;
    let mut out: Lines = vec![("rank", g.rank().to_string()), ("det", g.det().to_string())];
    match g.spectrum() {
        Spectrum::Certified(cert) => {
            let (lo, hi) = cert.bracket();
            out.push((
                "Perron-Frobenius",
                format!("{:.9} in [{lo:.9}, {hi:.9}]", cert.estimate),
            ));
            out.push(("classification", "rank 2 only".into()));
        }
        Spectrum::Quadratic { lambda, theta } => {
            let a = associated_ideal(&g).map_err(|err| err.to_string())?;
            let index = a
                .field
                .classes()
                .iter()
                .position(|c| c == &a.ideal_class)
                .unwrap_or(0);
            out.push((
                "Perron-Frobenius",
                format!(
                    "{lambda} = {}",
                    decimal(&Real::from_quadratic(lambda.as_number()), digits)
                ),
            ));
            out.push(("rotation number", theta.to_string()));
            out.push(("d", a.field.radicand().to_string()));
            out.push(("h", a.field.class_number().to_string()));
            out.push(("ideal", a.ideal.to_string()));
            out.push((
                "ideal class",
                format!("{index} of {}", a.field.class_number()),
            ));
            out.push(("principal", a.ideal_class.is_principal().to_string()));
            if let Some(w) = a.warning {
                out.push(("warning", w));
            }
        }
    }
    Ok(out)
}

fn js(r: Result<Lines, String>) -> Result<String, JsError> {
    r.map(render).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn volume(surgery: &str, c: &str, digits: usize) -> Result<String, JsError> {
    js(volume_lines(surgery, c, digits))
}

#[wasm_bindgen]
pub fn field(d: i64, digits: usize) -> Result<String, JsError> {
    js(field_lines(d, digits))
}

#[wasm_bindgen]
pub fn classify(entries: &str, digits: usize) -> Result<String, JsError> {
    js(classify_lines(entries, digits))
}
