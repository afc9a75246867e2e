use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::net::SocketAddr;
use std::path::Path;
use std::sync::Arc;

use medtriage_core::analytics::{fit_trend, predict, TimePoint};
use medtriage_core::inference::{EngineConfig, TriageEngine};
use medtriage_core::knowledge::{load_pack, validate_pack};
use medtriage_core::temporal::{ManualClock, SystemClock};
use medtriage_core::{Instant, KnowledgePack, SeverityVector, TemporalStore};
use medtriage_service::wire::ResultItem;
use medtriage_service::{AppState, ServiceConfig};
use serde_json::json;

use crate::error::{CliError, EXIT_DOMAIN};
use crate::table::write_table;

pub fn load(pack: Option<&Path>) -> Result<KnowledgePack, CliError> {
    match pack {
        Some(p) => Ok(load_pack(p)?),
        None => Ok(KnowledgePack::demo()),
    }
}

/// Prints one violation per line and returns the exit status.
pub fn validate(pack: &KnowledgePack, json: bool, out: &mut dyn Write) -> Result<u8, CliError> {
    let report = validate_pack(pack);
    if json {
        let lines: Vec<&str> = report.violations.iter().map(|v| v.0.as_str()).collect();
        writeln!(out, "{}", json!({ "valid": report.is_clean(), "violations": lines }))?;
    } else {
        write!(out, "{report}")?;
    }
    Ok(if report.is_clean() { 0 } else { EXIT_DOMAIN })
}

fn normalize(name: &str) -> String {
    name.trim().to_lowercase().replace([' ', '-'], "_")
}

fn suggest<'a>(name: &str, candidates: impl Iterator<Item = &'a str>) -> String {
    let best = candidates
        .map(|c| (strsim::jaro_winkler(name, c), c))
        .filter(|(score, _)| *score >= 0.7)
        .max_by(|a, b| a.0.total_cmp(&b.0).then_with(|| b.1.cmp(a.1)));
    match best {
        Some((_, c)) => format!(" (did you mean `{c}`?)"),
        None => String::new(),
    }
}

/// Parses `symptom=value` pairs against the pack's symptom ids.
pub fn parse_pairs(pack: &KnowledgePack, pairs: &[String]) -> Result<SeverityVector, CliError> {
    let mut map = BTreeMap::new();
    for pair in pairs {
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| CliError::domain("usage", format!("expected SYMPTOM=SEVERITY, got `{pair}`")))?;
        let id = normalize(name);
        if pack.symptom(&id).is_none() {
            let hint = suggest(&id, pack.symptoms().iter().map(|s| s.id.as_str()));
            return Err(CliError::domain("unknown_symptom", format!("unknown symptom `{}`{hint}", name.trim())));
        }
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::domain("invalid_severity", format!("`{value}` is not a number for `{id}`")))?;
        if map.insert(id.clone(), value).is_some() {
            return Err(CliError::domain("usage", format!("symptom `{id}` given twice")));
        }
    }
    SeverityVector::new(map).map_err(|e| medtriage_service::ApiError::from(e).into())
}

/// Ranks the pack's candidates for one set of reported severities and
/// prints the top three.
pub fn diagnose(
    pack: KnowledgePack,
    subpart: Option<&str>,
    pairs: &[String],
    json: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let pack = Arc::new(pack);
    let severities = parse_pairs(&pack, pairs)?;
    // a fixed clock: nothing time-dependent reaches the output
    let engine = TriageEngine::new(pack.clone(), EngineConfig::default(), Arc::new(ManualClock::new(Instant(0))))?;
    let mut session = engine.start("cli", "cli");
    if let Some(sub) = subpart {
        let id = normalize(sub);
        if pack.subpart(&id).is_none() {
            let hint = suggest(&id, pack.parts().iter().flat_map(|p| p.subparts.iter().map(|s| s.id.as_str())));
            return Err(CliError::domain("unknown_subpart", format!("unknown subpart `{sub}`{hint}")));
        }
        engine.select_subpart(&mut session, &id)?;
    }
    engine.submit_symptoms(&mut session, &severities)?;
    let items: Vec<ResultItem> = session.top().iter().map(|r| ResultItem::new(r, &pack)).collect();
    if json {
        writeln!(out, "{}", json!({ "results": items }))?;
    } else {
        let rows: Vec<Vec<String>> =
            items.iter().map(|r| vec![r.rank.to_string(), r.icd.clone(), r.distance.clone()]).collect();
        write_table(out, &["rank".into(), "icd".into(), "distance".into()], &rows)?;
    }
    Ok(())
}

fn parse_time(text: &str) -> Result<Instant, CliError> {
    let text = text.trim();
    if let Ok(secs) = text.parse::<i64>() {
        return Ok(Instant(secs));
    }
    Instant::parse(text).map_err(|e| CliError::domain("invalid_instant", e.to_string()))
}

/// Reads `t,value` CSV (header required; `t` as ISO-8601 or epoch seconds),
/// fits a least-squares line and writes fitted values, residuals and any
/// requested predictions as CSV.
pub fn trend(input: &mut dyn Read, at: &[String], json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| CliError::domain("invalid_csv", format!("missing `{name}` column")))
    };
    let (ti, vi) = (col("t")?, col("value")?);
    let mut points = Vec::new();
    for (n, record) in reader.records().enumerate() {
        let record = record?;
        let line = n + 2;
        let t = parse_time(&record[ti]).map_err(|e| CliError::domain(e.kind, format!("line {line}: {}", e.message)))?;
        let value: f64 = record[vi]
            .parse()
            .map_err(|_| CliError::domain("invalid_csv", format!("line {line}: `{}` is not a number", &record[vi])))?;
        points.push(TimePoint::new(t, value));
    }
    let model = fit_trend(&points)?;
    let targets = at.iter().map(|s| parse_time(s)).collect::<Result<Vec<_>, _>>()?;

    if json {
        let predictions: Vec<_> = targets
            .iter()
            .map(|&t| {
                let p = predict(&model, t);
                json!({ "t": t.to_string(), "value": p.value, "extrapolated": p.extrapolated })
            })
            .collect();
        let body = json!({
            "slope": model.slope,
            "intercept": model.intercept,
            "t_ref": model.t_ref.to_string(),
            "t_last": model.t_last.to_string(),
            "n": model.n,
            "predictions": predictions,
        });
        writeln!(out, "{body}")?;
        return Ok(());
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "observed", "fitted", "residual", "extrapolated"])?;
    for p in &points {
        let fit = predict(&model, p.t);
        w.write_record([
            p.t.to_string(),
            p.value.to_string(),
            fit.value.to_string(),
            (p.value - fit.value).to_string(),
            fit.extrapolated.to_string(),
        ])?;
    }
    for &t in &targets {
        let fit = predict(&model, t);
        w.write_record([
            t.to_string(),
            String::new(),
            fit.value.to_string(),
            String::new(),
            fit.extrapolated.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn serve(pack: KnowledgePack, data_dir: &Path, listen: SocketAddr) -> Result<(), CliError> {
    let store = TemporalStore::open(data_dir, SystemClock)?;
    let state = AppState::new(Arc::new(pack), store, Arc::new(SystemClock), ServiceConfig::default())?;
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(listen).await?;
        eprintln!("listening on {}", listener.local_addr()?);
        medtriage_service::serve(listener, state).await
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn patient_x_table() {
        let mut out = Vec::new();
        let px = pairs(&["strange_smell=0.1", "sneezing=0.7", "nasal_congestion=0.4", "runny_nose=0.6"]);
        diagnose(KnowledgePack::demo(), Some("nose"), &px, false, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split_whitespace().collect()).collect();
        assert_eq!(rows, [["1", "J00", "0.1901"], ["2", "Z77.1", "0.3909"], ["3", "T17.1", "0.5400"]]);
    }

    #[test]
    fn names_are_normalized_and_misspellings_suggested() {
        let pack = KnowledgePack::demo();
        let v = parse_pairs(&pack, &pairs(&["Runny Nose=0.5"])).unwrap();
        assert_eq!(v.get("runny_nose"), Some(0.5));
        let e = parse_pairs(&pack, &pairs(&["sneezng=0.5"])).unwrap_err();
        assert_eq!(e.kind, "unknown_symptom");
        assert!(e.message.contains("did you mean `sneezing`"), "{}", e.message);
        let e = parse_pairs(&pack, &pairs(&["qqqqqqqqqqqqqqq=0.5"])).unwrap_err();
        assert!(!e.message.contains("did you mean"));
        assert_eq!(parse_pairs(&pack, &pairs(&["sneezing"])).unwrap_err().kind, "usage");
        assert_eq!(parse_pairs(&pack, &pairs(&["sneezing=1.5"])).unwrap_err().kind, "invalid_severity");
    }

    #[test]
    fn trend_csv_round_trip() {
        let input = "t,value\n1970-01-01T00:00:00Z,1\n10,3\n20,5\n";
        let mut out = Vec::new();
        trend(&mut input.as_bytes(), &pairs(&["30"]), false, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,observed,fitted,residual,extrapolated");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[4], "1970-01-01T00:00:30Z,,7,,true");
    }

    #[test]
    fn trend_rejects_bad_rows() {
        let e = trend(&mut "t,value\n0,1\nsoon,2\n".as_bytes(), &[], false, &mut Vec::new()).unwrap_err();
        assert_eq!(e.kind, "invalid_instant");
        assert!(e.message.starts_with("line 3"), "{}", e.message);
        let e = trend(&mut "time,v\n".as_bytes(), &[], false, &mut Vec::new()).unwrap_err();
        assert_eq!(e.kind, "invalid_csv");
        let e = trend(&mut "t,value\n0,1\n".as_bytes(), &[], false, &mut Vec::new()).unwrap_err();
        assert_eq!(e.kind, "analytics");
    }
}
