//! Observation files and chain files.
//!
//! Observation file (CSV with header `surgery,volume,source`):
//!
//! ```text
//! surgery,volume,source
//! 1,0.538011,synthetic
//! "1 2",0.790247,synthetic
//! 1-1-4,0.911530,synthetic
//! ```
//!
//! Chain file (directives, then CSV with header `label,ideal,volume`):
//!
//! ```text
//! # d = 5
//! # t = 11
//! # k = 1
//! # K = 3
//! label,ideal,volume
//! M0,1,1
//! M1,1,1.5
//! ```
//!
//! Ideals are written `N` for the principal ideal `(N)`, `A:B` for
//! `[A, (B + sqrt D)/2]` and `M*A:B` for `M [A, (B + sqrt D)/2]`.

use std::collections::BTreeMap;

use dehnvol_core::{QuadIdeal, RealQuadraticField, VolumeObservation};

/// Every problem found in a file, one per offending line.
#[derive(Debug)]
pub struct Diagnostics(pub Vec<String>);

impl std::fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0.join("\n"))
    }
}

pub fn parse_surgery(s: &str) -> Result<Vec<i64>, String> {
    let s = s.trim();
    let parts: Vec<&str> = if s.contains('-') {
        s.split('-').collect()
    } else {
        s.split_whitespace().collect()
    };
    if parts.is_empty() || parts.iter().any(|p| p.trim().is_empty()) {
        return Err(format!("surgery coefficients {s:?} are empty or malformed"));
    }
    parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|_| format!("{p:?} is not an integer"))
        })
        .collect()
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

fn check_header(rdr: &mut csv::Reader<&[u8]>, expected: &[&str]) -> Result<(), Diagnostics> {
    let header = rdr
        .headers()
        .map_err(|e| Diagnostics(vec![format!("header: {e}")]))?;
    let got: Vec<&str> = header.iter().collect();
    if got != expected {
        return Err(Diagnostics(vec![format!(
            "header: expected {}, found {}",
            expected.join(","),
            got.join(",")
        )]));
    }
    Ok(())
}

pub fn parse_observations(text: &str) -> Result<Vec<VolumeObservation>, Diagnostics> {
    let mut rdr = reader(text);
    check_header(&mut rdr, &["surgery", "volume", "source"])?;
    let mut out = Vec::new();
    let mut problems = Vec::new();
    for record in rdr.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                problems.push(format!("line {line}: {e}"));
                continue;
            }
        };
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 3 {
            problems.push(format!(
                "line {line}: expected 3 fields, found {}",
                record.len()
            ));
            continue;
        }
        let parsed = parse_surgery(&record[0]).and_then(|p| {
            let v: f64 = record[1]
                .parse()
                .map_err(|_| format!("volume {:?} is not a number", &record[1]))?;
            VolumeObservation::new(p, v, &record[2]).map_err(|e| e.to_string())
        });
        match parsed {
            Ok(o) => out.push(o),
            Err(e) => problems.push(format!("line {line}: {e}")),
        }
    }
    if !problems.is_empty() {
        return Err(Diagnostics(problems));
    }
    if out.is_empty() {
        return Err(Diagnostics(vec!["no observations".into()]));
    }
    Ok(out)
}

pub fn parse_ideal(field: &RealQuadraticField, s: &str) -> Result<QuadIdeal, String> {
    let s = s.trim();
    let int = |x: &str| {
        x.trim()
            .parse::<i64>()
            .map_err(|_| format!("{x:?} is not an integer in ideal {s:?}"))
    };
    let (m, rest) = match s.split_once('*') {
        Some((m, rest)) => (int(m)?, rest),
        None => (1, s),
    };
    match rest.split_once(':') {
        Some((a, b)) => field.ideal(m, int(a)?, int(b)?).map_err(|e| e.to_string()),
        None if m == 1 => field.integer_ideal(int(rest)?).map_err(|e| e.to_string()),
        None => Err(format!("ideal {s:?}: write M*A:B or N")),
    }
}

pub fn format_ideal(i: &QuadIdeal) -> String {
    if i.a() == 1 {
        i.scale().to_string()
    } else if i.scale() == 1 {
        format!("{}:{}", i.a(), i.b())
    } else {
        format!("{}*{}:{}", i.scale(), i.a(), i.b())
    }
}

pub struct ChainRow {
    pub label: String,
    pub ideal: String,
    pub volume: f64,
}

pub struct ChainFile {
    pub directives: BTreeMap<String, String>,
    pub rows: Vec<ChainRow>,
}

impl ChainFile {
    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<T, String> {
        let v = self
            .directives
            .get(key)
            .ok_or_else(|| format!("missing directive `# {key} = ...`"))?;
        v.parse()
            .map_err(|_| format!("directive {key} = {v:?} is malformed"))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.directives {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out.push_str("label,ideal,volume\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.label, r.ideal, r.volume));
        }
        out
    }
}

pub fn parse_chain(text: &str) -> Result<ChainFile, Diagnostics> {
    let mut directives = BTreeMap::new();
    let mut problems = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if let Some(rest) = line.trim_start().strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                directives.insert(k.trim().to_string(), v.trim().to_string());
            } else if !rest.trim().is_empty() {
                problems.push(format!("line {}: directive without `=`", n + 1));
            }
        }
    }
    let mut rdr = reader(text);
    check_header(&mut rdr, &["label", "ideal", "volume"])?;
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                problems.push(format!(
                    "line {}: {e}",
                    e.position().map(|p| p.line()).unwrap_or(0)
                ));
                continue;
            }
        };
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != 3 {
            problems.push(format!(
                "line {line}: expected 3 fields, found {}",
                record.len()
            ));
            continue;
        }
        match record[2].parse::<f64>() {
            Ok(volume) => rows.push(ChainRow {
                label: record[0].to_string(),
                ideal: record[1].to_string(),
                volume,
            }),
            Err(_) => problems.push(format!(
                "line {line}: volume {:?} is not a number",
                &record[2]
            )),
        }
    }
    if !problems.is_empty() {
        return Err(Diagnostics(problems));
    }
    Ok(ChainFile { directives, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surgery_forms() {
        assert_eq!(parse_surgery("1 2 3"), Ok(vec![1, 2, 3]));
        assert_eq!(parse_surgery("1-2-3"), Ok(vec![1, 2, 3]));
        assert_eq!(parse_surgery("4"), Ok(vec![4]));
        assert!(parse_surgery("").is_err());
        assert!(parse_surgery("1--2").is_err());
        assert!(parse_surgery("1 x").is_err());
    }

    #[test]
    fn observation_diagnostics_name_every_line() {
        let text = "surgery,volume,source\n1,0.5,a\n0,0.5,b\n\"1 2\",abc,c\n2,1\n";
        let err = parse_observations(text).unwrap_err();
        assert_eq!(err.0.len(), 3, "{err}");
        assert!(err.0[0].starts_with("line 3:"));
        assert!(err.0[1].starts_with("line 4:"));
        assert!(err.0[2].starts_with("line 5:"));
        let ok = parse_observations("surgery,volume,source\n\"1 2\",0.5,x\n1-1-4,0.7,y\n").unwrap();
        assert_eq!(ok[1].surgery, vec![1, 1, 4]);
        assert!(parse_observations("surgery,vol,source\n").is_err());
    }

    #[test]
    fn ideals_round_trip() {
        let k10 = RealQuadraticField::new(10).unwrap();
        for s in ["6", "2:0", "3*3:2", "1"] {
            assert_eq!(format_ideal(&parse_ideal(&k10, s).unwrap()), s);
        }
        assert!(parse_ideal(&k10, "3:1").is_err());
        assert!(parse_ideal(&k10, "x").is_err());
        assert!(parse_ideal(&k10, "2*5").is_err());
    }

    #[test]
    fn chains_round_trip() {
        let text = "# d = 5\n# t = 11\nlabel,ideal,volume\nM0,1,1\nM1,4,2.5\n";
        let chain = parse_chain(text).unwrap();
        assert_eq!(chain.get::<i64>("d"), Ok(5));
        assert!(chain.get::<f64>("k").is_err());
        assert_eq!(chain.render(), text);
        assert!(parse_chain("label,ideal,volume\nM0,1,x\n").is_err());
    }
}
