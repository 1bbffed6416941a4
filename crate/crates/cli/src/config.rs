//! Run configuration files.
//!
//! Line-oriented: `[section]` headers, `key = value` lines, `#` comments.
//! Vectors are comma lists, matrices are rows separated by `;`. Field values
//! are exact rationals (`3`, `-1/2`) or powers of `q = ζ_{m²}` (`q^3`, `-q^-1`).

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use qhopf_core::{CycNum, PointedDatum, QlsComodDatum};
use thiserror::Error;

use crate::pipeline::Check;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },

    #[error("{field}: {msg}")]
    Validation { field: String, msg: String },
}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub datum: PointedDatum,
    pub comod: Option<QlsComodDatum>,
    /// Checks listed in `[run]`; empty when the file names none.
    pub checks: Vec<Check>,
    pub report: Option<PathBuf>,
    pub census_max_nonzero: Option<usize>,
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("datum", &["m", "theta", "d", "b", "s"]),
    ("comod", &["family", "f_order", "w", "xi", "alpha"]),
    ("run", &["checks", "report", "census_max_nonzero"]),
];

struct Entry {
    line: usize,
    value: String,
}

type Sections = BTreeMap<String, BTreeMap<String, Entry>>;

fn split(text: &str) -> Result<Sections> {
    let mut out: Sections = BTreeMap::new();
    let mut current: Option<String> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::Syntax { line, msg: format!("unterminated section header `{body}`") })?
                .trim();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                return Err(ConfigError::Syntax { line, msg: format!("unknown section [{name}]") });
            }
            if out.contains_key(name) {
                return Err(ConfigError::Syntax { line, msg: format!("section [{name}] appears twice") });
            }
            out.insert(name.to_string(), BTreeMap::new());
            current = Some(name.to_string());
            continue;
        }
        let sec = current.as_ref().ok_or_else(|| ConfigError::Syntax { line, msg: "key outside any section".into() })?;
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| ConfigError::Syntax { line, msg: format!("expected `key = value`, got `{body}`") })?;
        let key = key.trim();
        let allowed = SECTIONS.iter().find(|(s, _)| s == sec).map(|(_, k)| *k).unwrap_or(&[]);
        if !allowed.contains(&key) {
            return Err(ConfigError::Syntax { line, msg: format!("unknown key `{key}` in [{sec}]") });
        }
        let map = out.get_mut(sec).expect("section inserted above");
        if map.contains_key(key) {
            return Err(ConfigError::Syntax { line, msg: format!("duplicate key `{key}`") });
        }
        map.insert(key.to_string(), Entry { line, value: value.trim().to_string() });
    }
    Ok(out)
}

fn items(e: &Entry) -> Vec<&str> {
    if e.value.is_empty() {
        Vec::new()
    } else {
        e.value.split(',').map(str::trim).collect()
    }
}

fn parse_num<T: FromStr>(tok: &str, line: usize, key: &str) -> Result<T> {
    tok.parse().map_err(|_| ConfigError::Syntax { line, msg: format!("`{key}`: cannot read `{tok}` as an integer") })
}

fn ints<T: FromStr>(e: &Entry, key: &str) -> Result<Vec<T>> {
    items(e).into_iter().map(|t| parse_num(t, e.line, key)).collect()
}

/// Reads a rational or `±q^k` with `q` a primitive `n`-th root of unity.
pub fn parse_value(tok: &str, n: u32) -> std::result::Result<CycNum, String> {
    let t = tok.replace(' ', "");
    let (neg, rest) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t.as_str()),
    };
    let v = if let Some(k) = rest.strip_prefix("q^") {
        let k: i64 = k.parse().map_err(|_| format!("bad exponent in `{tok}`"))?;
        CycNum::root_of_unity(n, k)
    } else if rest == "q" {
        CycNum::root_of_unity(n, 1)
    } else {
        let (p, q) = rest.split_once('/').unwrap_or((rest, "1"));
        let p: i64 = p.parse().map_err(|_| format!("`{tok}` is neither a rational nor a power of q"))?;
        let q: i64 = q.parse().map_err(|_| format!("bad denominator in `{tok}`"))?;
        if q == 0 {
            return Err(format!("zero denominator in `{tok}`"));
        }
        CycNum::from_ratio(n, p, q)
    };
    Ok(if neg { -v } else { v })
}

fn values(e: &Entry, key: &str, n: u32) -> Result<Vec<CycNum>> {
    items(e)
        .into_iter()
        .map(|t| parse_value(t, n).map_err(|msg| ConfigError::Syntax { line: e.line, msg: format!("`{key}`: {msg}") }))
        .collect()
}

fn invalid(field: &str, line: Option<usize>, msg: impl Into<String>) -> ConfigError {
    let field = match line {
        Some(l) => format!("{field} (line {l})"),
        None => field.to_string(),
    };
    ConfigError::Validation { field, msg: msg.into() }
}

/// `{s : 1 ≤ s < m, b_i ≡ s·d_i (mod m) for all i}`.
fn upsilon(m: u32, d: &[i64], b: &[i64]) -> Vec<u32> {
    (1..m).filter(|&s| d.iter().zip(b).all(|(&di, &bi)| (bi - s as i64 * di).rem_euclid(m as i64) == 0)).collect()
}

fn parse_datum(sec: &BTreeMap<String, Entry>) -> Result<PointedDatum> {
    let req = |k: &str| sec.get(k).ok_or_else(|| invalid(&format!("datum.{k}"), None, "missing"));
    let m: u32 = parse_num(&req("m")?.value, req("m")?.line, "m")?;
    let (d, b): (Vec<i64>, Vec<i64>) = match (sec.get("d"), sec.get("b")) {
        (Some(d), Some(b)) => (ints(d, "d")?, ints(b, "b")?),
        (None, None) => (Vec::new(), Vec::new()),
        (Some(_), None) => return Err(invalid("datum.b", None, "missing while d is given")),
        (None, Some(_)) => return Err(invalid("datum.d", None, "missing while b is given")),
    };
    if d.len() != b.len() {
        return Err(invalid("datum.b", sec.get("b").map(|e| e.line), format!("{} entries but d has {}", b.len(), d.len())));
    }
    if let Some(e) = sec.get("theta") {
        let t: usize = parse_num(&e.value, e.line, "theta")?;
        if t != d.len() {
            return Err(invalid("datum.theta", Some(e.line), format!("theta = {t} but d has {} entries", d.len())));
        }
    }
    let Some(se) = sec.get("s") else {
        let ups: Vec<String> = if m >= 2 { upsilon(m, &d, &b).iter().map(u32::to_string).collect() } else { Vec::new() };
        return Err(invalid(
            "datum.s",
            None,
            format!("missing; s must lie in Υ(H) = {{s : b_i ≡ s·d_i mod m}} = {{{}}}", ups.join(", ")),
        ));
    };
    let s: u32 = parse_num(&se.value, se.line, "s")?;
    PointedDatum::new(m, &d, &b, s).map_err(|e| invalid("datum", None, e.to_string()))
}

fn parse_comod(sec: &BTreeMap<String, Entry>, base: &PointedDatum) -> Result<QlsComodDatum> {
    if let Some(e) = sec.get("family") {
        if e.value != "qls" {
            return Err(invalid("comod.family", Some(e.line), format!("unknown family `{}` (expected qls)", e.value)));
        }
    }
    let n = base.n();
    let t = base.theta();
    let fe = sec.get("f_order").ok_or_else(|| invalid("comod.f_order", None, "missing"))?;
    let f: u32 = parse_num(&fe.value, fe.line, "f_order")?;
    if f == 0 || !n.is_multiple_of(f) {
        return Err(invalid("comod.f_order", Some(fe.line), format!("{f} does not divide m² = {n}")));
    }
    let w: Vec<usize> = match sec.get("w") {
        Some(e) => {
            let raw: Vec<usize> = ints(e, "w")?;
            if let Some(bad) = raw.iter().find(|&&i| i == 0 || i > t) {
                return Err(invalid("comod.w", Some(e.line), format!("generator {bad} outside 1..={t}")));
            }
            let mut w: Vec<usize> = raw.iter().map(|i| i - 1).collect();
            w.sort_unstable();
            w.dedup();
            w
        }
        None => (0..t).collect(),
    };
    let mut d = QlsComodDatum::zero(base.clone(), f, w);
    if let Some(e) = sec.get("xi") {
        let xi = values(e, "xi", n)?;
        if xi.len() != t {
            return Err(invalid("comod.xi", Some(e.line), format!("{} entries for θ = {t}", xi.len())));
        }
        d.xi = xi;
    }
    if let Some(e) = sec.get("alpha") {
        let rows: Vec<&str> = e.value.split(';').map(str::trim).collect();
        if rows.len() != t {
            return Err(invalid("comod.alpha", Some(e.line), format!("{} rows for θ = {t}", rows.len())));
        }
        for (i, row) in rows.iter().enumerate() {
            let row = values(&Entry { line: e.line, value: row.to_string() }, "alpha", n)?;
            if row.len() != t {
                return Err(invalid("comod.alpha", Some(e.line), format!("row {} has {} entries for θ = {t}", i + 1, row.len())));
            }
            for (j, v) in row.into_iter().enumerate() {
                if j <= i && !v.is_zero() {
                    return Err(invalid("comod.alpha", Some(e.line), format!("entry ({}, {}) must be 0: only i < j is used", i + 1, j + 1)));
                }
                d.alpha[i][j] = v;
            }
        }
    }
    Ok(d)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let secs = split(text)?;
    let datum = parse_datum(secs.get("datum").ok_or_else(|| invalid("datum", None, "missing [datum] section"))?)?;
    let comod = secs.get("comod").map(|s| parse_comod(s, &datum)).transpose()?;
    let empty = BTreeMap::new();
    let run = secs.get("run").unwrap_or(&empty);
    let checks = match run.get("checks") {
        Some(e) => parse_checks(&e.value).map_err(|msg| ConfigError::Syntax { line: e.line, msg })?,
        None => Vec::new(),
    };
    let report = run.get("report").map(|e| PathBuf::from(&e.value));
    let census_max_nonzero = run.get("census_max_nonzero").map(|e| parse_num(&e.value, e.line, "census_max_nonzero")).transpose()?;
    Ok(RunConfig { datum, comod, checks, report, census_max_nonzero })
}

/// Comma list of check names, deduplicated and put in canonical order.
pub fn parse_checks(list: &str) -> std::result::Result<Vec<Check>, String> {
    let mut out: Vec<Check> =
        list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::parse).collect::<std::result::Result<_, _>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUNNING: &str = "[datum]\nm = 2\nd = 1\nb = 1\ns = 1\n";

    #[test]
    fn running_datum() {
        let cfg = parse_config(RUNNING).unwrap();
        assert_eq!(cfg.datum.nilpotency(0), 4);
        assert!(cfg.comod.is_none());
        assert!(cfg.checks.is_empty());
    }

    #[test]
    fn missing_s_names_upsilon() {
        let err = parse_config("[datum]\nm = 2\nd = 1\nb = 1\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("Υ(H)") && msg.contains("datum.s"), "{msg}");
        assert!(msg.contains("{1}"), "{msg}");
    }

    #[test]
    fn q_power_resolves_against_datum() {
        let text = format!("{RUNNING}[comod]\nf_order = 4\nxi = q^2\n");
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.comod.unwrap().xi[0], CycNum::from_int(4, -1));
    }

    #[test]
    fn values() {
        assert_eq!(parse_value("-1/2", 4).unwrap(), CycNum::from_ratio(4, -1, 2));
        assert_eq!(parse_value("-q^-1", 4).unwrap(), CycNum::root_of_unity(4, 1));
        assert_eq!(parse_value("q", 4).unwrap(), CycNum::root_of_unity(4, 1));
        assert!(parse_value("x", 4).is_err());
        assert!(parse_value("1/0", 4).is_err());
    }

    #[test]
    fn alpha_matrix_and_w() {
        let text = "[datum]\nm = 2\nd = 1, 3\nb = 1, 1\ns = 1\n[comod]\nf_order = 4\nw = 2, 1\nalpha = 0, 1; 0, 0\n";
        let d = parse_config(text).unwrap().comod.unwrap();
        assert_eq!(d.w, vec![0, 1]);
        assert!(d.alpha[0][1].is_one());
        let bad = text.replace("0, 1; 0, 0", "0, 1; 1, 0");
        assert!(matches!(parse_config(&bad), Err(ConfigError::Validation { .. })));
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let err = parse_config("[datum]\nm = 2\nbogus = 3\n").unwrap_err();
        assert_eq!(err, ConfigError::Syntax { line: 3, msg: "unknown key `bogus` in [datum]".into() });
        assert!(matches!(parse_config("m = 2\n"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(parse_config("[datum\n"), Err(ConfigError::Syntax { line: 1, .. })));
        let err = parse_config(&format!("{RUNNING}[run]\nchecks = hopf, nope\n")).unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 7, .. }), "{err}");
    }

    #[test]
    fn invalid_datum_is_reported() {
        let err = parse_config("[datum]\nm = 2\nd = 1\nb = 2\ns = 1\n").unwrap_err();
        assert!(err.to_string().contains("Υ(H)"), "{err}");
    }

    #[test]
    fn checks_are_canonically_ordered() {
        assert_eq!(parse_checks("census, hopf, hopf").unwrap(), vec![Check::Hopf, Check::Census]);
    }
}
