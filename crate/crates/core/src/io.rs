//! File formats: canonical JSON (sorted keys, rationals as strings) for
//! groups, disks, matrices and reports, and fixed-header CSV for covers and
//! height scans.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::disks::{Disk, DiskKind};
use crate::error::{Error, Result};
use crate::geodesy::{CommensurabilityReport, GeodesicReport, Stabilizer, Verdict};
use crate::heights::{CountingScan, HeightRow};
use crate::padic::{format_exponent, format_rational, parse_exponent, parse_rational, PrimeContext, DEFAULT_PRECISION};
use crate::proj::{Homography, ProjPoint};
use crate::schottky::{AxiomReport, DeltaGammaBound, LimitCover, ProperConstants, RadiusDecay, SchottkyGroup, TranslateReport, Word};

pub const COVER_CSV_HEADER: &str = "word,center,radius_exp";
pub const HEIGHTS_CSV_HEADER: &str = "length,word,height,threshold_bin";

/// Parse JSON text, reporting the line and column of syntax errors.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn field<'a>(obj: &'a Value, name: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| Error::parse(format!("{ctx}.{name}"), "missing field"))
}

fn string_at(v: &Value, path: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(Error::parse(path, "expected a string or number")),
    }
}

fn array_at<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(path, "expected an array"))
}

pub fn point_to_json(x: &ProjPoint) -> Value {
    Value::String(x.to_string())
}

pub fn matrix_to_json(g: &Homography) -> Value {
    json!(g.to_strings())
}

pub fn matrix_from_json(v: &Value, path: &str) -> Result<Homography> {
    let rows = array_at(v, path)?;
    if rows.len() != 2 {
        return Err(Error::parse(path, "expected two rows"));
    }
    let mut entries = Vec::with_capacity(4);
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let row = array_at(row, &row_path)?;
        if row.len() != 2 {
            return Err(Error::parse(&row_path, "expected two entries"));
        }
        for (j, x) in row.iter().enumerate() {
            let p = format!("{row_path}[{j}]");
            entries.push(parse_rational(&string_at(x, &p)?).map_err(|e| Error::parse(&p, e.to_string()))?);
        }
    }
    let m: [_; 4] = entries.try_into().expect("four entries");
    Homography::from_rationals(m).map_err(|e| Error::parse(path, e.to_string()))
}

pub fn disk_to_json(d: &Disk) -> Value {
    json!({
        "kind": match d.kind() { DiskKind::Bounded => "bounded", DiskKind::Unbounded => "unbounded" },
        "open": d.is_open(),
        "center": format_rational(d.center()),
        "radius_exp": format_exponent(&d.radius_exponent()),
    })
}

pub fn disk_from_json(v: &Value, ctx: &PrimeContext, path: &str) -> Result<Disk> {
    let kind = match field(v, "kind", path)?.as_str() {
        Some("bounded") => DiskKind::Bounded,
        Some("unbounded") => DiskKind::Unbounded,
        _ => return Err(Error::parse(format!("{path}.kind"), "expected \"bounded\" or \"unbounded\"")),
    };
    let open = field(v, "open", path)?
        .as_bool()
        .ok_or_else(|| Error::parse(format!("{path}.open"), "expected a boolean"))?;
    let center_path = format!("{path}.center");
    let center = parse_rational(&string_at(field(v, "center", path)?, &center_path)?)
        .map_err(|e| Error::parse(&center_path, e.to_string()))?;
    let radius_path = format!("{path}.radius_exp");
    let radius = parse_exponent(&string_at(field(v, "radius_exp", path)?, &radius_path)?)
        .map_err(|e| Error::parse(&radius_path, e.to_string()))?;
    Ok(Disk::new(ctx, kind, open, center, radius))
}

pub fn group_to_json(g: &SchottkyGroup) -> Value {
    let mut obj = Map::new();
    obj.insert("p".into(), json!(g.context().p()));
    obj.insert("generators".into(), Value::Array(g.generators().iter().map(matrix_to_json).collect()));
    obj.insert("B".into(), Value::Array(g.b_disks().iter().map(disk_to_json).collect()));
    obj.insert("C".into(), Value::Array(g.c_disks().iter().map(disk_to_json).collect()));
    if g.context().precision() != DEFAULT_PRECISION {
        obj.insert("precision".into(), json!(g.context().precision()));
    }
    Value::Object(obj)
}

/// An unverified group from its JSON description. `precision` applies
/// unless the file sets its own.
pub fn group_from_json(v: &Value, precision: u32) -> Result<SchottkyGroup> {
    if let Some(version) = v.get("version") {
        if version != &json!(1) {
            return Err(Error::parse("version", format!("unsupported format version {version}")));
        }
    }
    let p = field(v, "p", "group")?
        .as_u64()
        .ok_or_else(|| Error::parse("group.p", "expected a positive integer"))?;
    let precision = match v.get("precision") {
        None => precision,
        Some(n) => n
            .as_u64()
            .and_then(|n| u32::try_from(n).ok())
            .ok_or_else(|| Error::parse("group.precision", "expected a positive integer"))?,
    };
    let ctx = PrimeContext::new(p, precision).map_err(|e| Error::parse("group.p", e.to_string()))?;
    let gens = array_at(field(v, "generators", "group")?, "group.generators")?
        .iter()
        .enumerate()
        .map(|(i, m)| matrix_from_json(m, &format!("group.generators[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let disks = |name: &str| -> Result<Vec<Disk>> {
        array_at(field(v, name, "group")?, &format!("group.{name}"))?
            .iter()
            .enumerate()
            .map(|(i, d)| disk_from_json(d, &ctx, &format!("group.{name}[{i}]")))
            .collect()
    };
    SchottkyGroup::new(ctx, gens, disks("B")?, disks("C")?)
}

pub fn group_to_string(g: &SchottkyGroup) -> String {
    to_canonical_string(&group_to_json(g))
}

pub fn group_from_str(text: &str, precision: u32) -> Result<SchottkyGroup> {
    group_from_json(&parse_json(text)?, precision)
}

pub fn axiom_report_to_json(r: &AxiomReport) -> Value {
    json!({
        "passed": r.passed(),
        "checks": r.checks.iter().map(|c| json!({
            "axiom": c.axiom,
            "description": c.description,
            "passed": c.passed,
            "witness": c.witness,
        })).collect::<Vec<_>>(),
    })
}

pub fn cover_to_csv(cover: &LimitCover) -> String {
    let mut s = String::from(COVER_CSV_HEADER);
    s.push('\n');
    for (w, d) in &cover.disks {
        writeln!(s, "{},{},{}", w, format_rational(d.center()), format_exponent(&d.radius_exponent())).expect("string write");
    }
    s
}

/// Rows of a cover CSV as closed bounded disks.
pub fn cover_from_csv(text: &str, ctx: &PrimeContext) -> Result<Vec<(Word, Disk)>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == COVER_CSV_HEADER => {}
        _ => return Err(Error::parse("line 1", format!("expected header {COVER_CSV_HEADER:?}"))),
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let at = format!("line {}", i + 1);
            let cols: Vec<&str> = l.split(',').collect();
            if cols.len() != 3 {
                return Err(Error::parse(&at, "expected 3 columns"));
            }
            let w: Word = cols[0].parse().map_err(|e: Error| Error::parse(&at, e.to_string()))?;
            let c = parse_rational(cols[1]).map_err(|e| Error::parse(&at, e.to_string()))?;
            let r = parse_exponent(cols[2]).map_err(|e| Error::parse(&at, e.to_string()))?;
            Ok((w, Disk::closed(ctx, c, r)))
        })
        .collect()
}

pub fn cover_to_json(cover: &LimitCover) -> Value {
    json!({
        "depth": cover.depth,
        "max_radius_exp": format_exponent(&cover.max_radius_exponent),
        "disks": cover.disks.iter().map(|(w, d)| json!({
            "word": w.to_string(),
            "disk": disk_to_json(d),
        })).collect::<Vec<_>>(),
    })
}

pub fn delta_to_json(x: &ProjPoint, b: &DeltaGammaBound) -> Value {
    json!({
        "point": point_to_json(x),
        "depth": b.depth,
        "lower_exp": format_exponent(&b.lower_exponent),
        "upper_exp": format_exponent(&b.upper_exponent),
    })
}

pub fn radius_decay_to_json(d: &RadiusDecay) -> Value {
    json!({
        "log_b": format_exponent(&d.log_b),
        "log_c": format_exponent(&d.log_c),
        "passed": d.passed(),
        "rows": d.rows.iter().map(|(n, e, ok)| json!({
            "depth": n, "max_radius_exp": format_exponent(e), "within_bound": ok,
        })).collect::<Vec<_>>(),
    })
}

pub fn heights_to_csv(rows: &[HeightRow]) -> String {
    let mut s = String::from(HEIGHTS_CSV_HEADER);
    s.push('\n');
    for r in rows {
        writeln!(s, "{},{},{},{}", r.length, r.word, r.height, r.threshold_bin).expect("string write");
    }
    s
}

pub fn heights_from_csv(text: &str) -> Result<Vec<HeightRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == HEIGHTS_CSV_HEADER => {}
        _ => return Err(Error::parse("line 1", format!("expected header {HEIGHTS_CSV_HEADER:?}"))),
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let at = format!("line {}", i + 1);
            let cols: Vec<&str> = l.split(',').collect();
            if cols.len() != 4 {
                return Err(Error::parse(&at, "expected 4 columns"));
            }
            let bad = |what: &str| Error::parse(&at, format!("bad {what}"));
            Ok(HeightRow {
                length: cols[0].parse().map_err(|_| bad("length"))?,
                word: cols[1].parse().map_err(|_| bad("word"))?,
                height: cols[2].parse().map_err(|_| bad("height"))?,
                threshold_bin: cols[3].parse().map_err(|_| bad("threshold_bin"))?,
            })
        })
        .collect()
}

pub fn scan_summary_to_json(s: &CountingScan) -> Value {
    json!({
        "max_length": s.max_length,
        "generators": s.generators,
        "c": s.c.to_string(),
        "slope": s.slope,
        "min_ratio": s.min_ratio,
        "reference_slope": s.reference_slope,
        "rows": s.rows.iter().map(|r| json!({
            "exponent": r.exponent,
            "threshold": r.threshold.to_string(),
            "count": r.count,
        })).collect::<Vec<_>>(),
    })
}

pub fn proper_to_json(c: &ProperConstants) -> Value {
    json!({
        "depth": c.depth,
        "a": format_rational(&c.a),
        "b": format_rational(&c.b),
        "a_approx": c.a_f64(),
        "b_approx": c.b_f64(),
        "log_base": "p",
        "samples": c.samples.len(),
        "holds": c.holds(),
        "empirical": true,
    })
}

pub fn translates_to_json(r: &TranslateReport) -> Value {
    json!({
        "depth": r.depth,
        "words": r.words.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "clearance": r.clearance.map(|(m, m2)| vec![m, m2]),
        "length_bound": r.length_bound,
        "certified": r.certified,
    })
}

pub fn stabilizer_to_json(s: Option<&Stabilizer>) -> Value {
    match s {
        None => json!({"found": false}),
        Some(s) => json!({
            "found": true,
            "word": s.word.to_string(),
            "element": matrix_to_json(&s.element),
            "multiplier": format_rational(&s.multiplier),
            "multiplier_abs_exp": format_exponent(&s.multiplier_abs_exponent),
            "stabilizing_words": s.stabilizing_words.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        }),
    }
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Stabilized => "stabilized",
        Verdict::GrowingNoEvidence => "growing_no_evidence",
    }
}

pub fn commensurability_to_json(r: &CommensurabilityReport) -> Value {
    json!({
        "depth": r.depth,
        "window": r.window,
        "forward_counts": r.forward,
        "backward_counts": r.backward,
        "verdict": verdict_str(r.verdict),
    })
}

pub fn geodesic_to_json(r: &GeodesicReport) -> Value {
    json!({
        "depth": r.depth,
        "consistent": r.consistent,
        "pairs": r.pairs.iter().map(|p| json!({
            "source": p.source,
            "target": p.target,
            "map": matrix_to_json(&p.map),
            "report": commensurability_to_json(&p.report),
        })).collect::<Vec<_>>(),
    })
}

/// A pair file: two groups (inline objects or references resolved by the
/// caller), the linking matrix and the scan depth.
#[derive(Clone, Debug)]
pub struct PairSpec {
    pub gamma1: SchottkyGroup,
    pub g: Homography,
    pub gamma2: SchottkyGroup,
    pub depth: Option<usize>,
}

pub fn pair_from_json(
    v: &Value,
    precision: u32,
    mut resolve: impl FnMut(&str) -> Result<Value>,
) -> Result<PairSpec> {
    let mut group = |name: &str| -> Result<SchottkyGroup> {
        let g = field(v, name, "pair")?;
        let inline;
        let g = match g {
            Value::String(path) => {
                inline = resolve(path).map_err(|e| Error::parse(format!("pair.{name}"), e.to_string()))?;
                &inline
            }
            other => other,
        };
        group_from_json(g, precision).map_err(|e| Error::parse(format!("pair.{name}"), e.to_string()))
    };
    let gamma1 = group("gamma1")?;
    let gamma2 = group("gamma2")?;
    let g = matrix_from_json(field(v, "g", "pair")?, "pair.g")?;
    let depth = match v.get("depth") {
        None => None,
        Some(d) => Some(
            d.as_u64()
                .ok_or_else(|| Error::parse("pair.depth", "expected a nonnegative integer"))? as usize,
        ),
    };
    Ok(PairSpec { gamma1, g, gamma2, depth })
}

pub fn pair_to_json(p: &PairSpec) -> Value {
    let mut obj = Map::new();
    obj.insert("gamma1".into(), group_to_json(&p.gamma1));
    obj.insert("gamma2".into(), group_to_json(&p.gamma2));
    obj.insert("g".into(), matrix_to_json(&p.g));
    if let Some(d) = p.depth {
        obj.insert("depth".into(), json!(d));
    }
    Value::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;

    #[test]
    fn group_round_trip() {
        let g = SchottkyGroup::worked_example();
        let text = group_to_string(&g);
        assert!(text.contains("\"-24\""));
        let back = group_from_str(&text, DEFAULT_PRECISION).unwrap();
        assert_eq!(back, g);
        assert_eq!(group_to_string(&back), text);
        // keys come out sorted
        let b = text.find("\"B\"").unwrap();
        let c = text.find("\"C\"").unwrap();
        let gens = text.find("\"generators\"").unwrap();
        let p = text.find("\"p\"").unwrap();
        assert!(b < c && c < gens && gens < p);
    }

    #[test]
    fn parse_errors_name_the_field() {
        let err = group_from_str("{\"p\": 5, \"generators\": [[[\"1\",\"x\"],[\"0\",\"1\"]]], \"B\": [], \"C\": []}", 64)
            .unwrap_err();
        assert!(err.to_string().contains("group.generators[0][0][1]"), "{err}");
        let err = group_from_str("{\"p\": 5,\n \"generators\": [}", 64).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(group_from_str("{\"p\": 6, \"generators\": [], \"B\": [], \"C\": []}", 64).is_err());
    }

    #[test]
    fn disk_round_trip() {
        let ctx = PrimeContext::with_default_precision(5).unwrap();
        let d = Disk::closed(&ctx, parse_rational("7/5").unwrap(), parse_exponent("-3/2").unwrap()).complement();
        let v = disk_to_json(&d);
        assert_eq!(v["kind"], "unbounded");
        assert_eq!(disk_from_json(&v, &ctx, "d").unwrap(), d);
    }

    #[test]
    fn cover_csv_round_trip() {
        let g = SchottkyGroup::worked_example();
        let cover = g.limit_cover(2, Execution::Sequential).unwrap();
        let csv = cover_to_csv(&cover);
        assert!(csv.starts_with("word,center,radius_exp\n"));
        assert_eq!(cover_from_csv(&csv, g.context()).unwrap(), cover.disks);
    }

    #[test]
    fn heights_csv_round_trip() {
        let g = SchottkyGroup::worked_example();
        let scan = crate::heights::upsilon_scan(&g, 4, Execution::Sequential).unwrap();
        let csv = heights_to_csv(&scan.heights);
        assert_eq!(heights_from_csv(&csv).unwrap(), scan.heights);
    }

    #[test]
    fn pair_with_references() {
        let g = SchottkyGroup::worked_example();
        let v = json!({"gamma1": "g5.json", "gamma2": group_to_json(&g), "g": [["1","0"],["0","1"]], "depth": 3});
        let pair = pair_from_json(&v, 64, |path| {
            assert_eq!(path, "g5.json");
            Ok(group_to_json(&g))
        })
        .unwrap();
        assert_eq!(pair.gamma1, g);
        assert_eq!(pair.depth, Some(3));
        assert!(pair.g.is_identity());
    }
}
