use super::MetricsRecord;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 8] = [
    "technique",
    "bandwidth_mbps",
    "seed",
    "throughput_mbps",
    "loss_pct",
    "admitted",
    "blocked",
    "terminated",
];

/// One CSV row per record, in the order given.
pub fn records_to_csv(records: &[MetricsRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in records {
        w.write_record([
            r.technique.key().to_string(),
            format!("{}", r.bandwidth_mbps()),
            r.seed.to_string(),
            format!("{:.2}", r.throughput_mbps),
            format!("{:.3}", r.drop_rate_pct),
            r.admitted_sessions.to_string(),
            r.blocked_sessions.to_string(),
            r.terminated_sessions.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// Human-readable summary of a single run.
pub fn describe_record(r: &MetricsRecord) -> String {
    format!(
        "technique={} bandwidth={} Mbps seed={}\n\
         sent={} delivered={} lost={} loss={:.3}%\n\
         throughput={:.2} Mbps\n\
         sessions admitted={} blocked={} terminated={}\n",
        r.technique.label(),
        r.bandwidth_mbps(),
        r.seed,
        r.tsp,
        r.tap,
        r.lp,
        r.drop_rate_pct,
        r.throughput_mbps,
        r.admitted_sessions,
        r.blocked_sessions,
        r.terminated_sessions,
    )
}
