use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::LogError;

/// Field names of one log line, in canonical order.
pub const FIELDS: [&str; 11] = [
    "episode_id",
    "scenario_id",
    "policy_id",
    "seed",
    "termination",
    "duration_s",
    "distance_m",
    "collision_impulse_ns",
    "mean_power_w",
    "max_power_w",
    "energy_wh",
];

/// Relative tolerance of the energy / mean-power cross-check.
pub const ENERGY_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Termination {
    Arrive,
    Collision,
    Timeout,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::Arrive => "Arrive",
            Termination::Collision => "Collision",
            Termination::Timeout => "Timeout",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Termination {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Arrive" => Ok(Termination::Arrive),
            "Collision" => Ok(Termination::Collision),
            "Timeout" => Ok(Termination::Timeout),
            other => Err(format!("unknown termination `{other}`")),
        }
    }
}

/// One navigation episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub episode_id: String,
    pub scenario_id: String,
    pub policy_id: String,
    pub seed: u64,
    pub termination: Termination,
    pub duration_s: f64,
    pub distance_m: f64,
    /// Zero unless the episode ended in a collision.
    pub collision_impulse_ns: f64,
    pub mean_power_w: f64,
    pub max_power_w: f64,
    pub energy_wh: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadOptions {
    /// Reject unknown keys instead of ignoring them with a warning.
    pub strict: bool,
    /// Timeout episodes must last at least this long, seconds.
    pub timeout_s: f64,
}

impl Default for ReadOptions {
    fn default() -> Self {
        ReadOptions {
            strict: true,
            timeout_s: 600.0,
        }
    }
}

impl EpisodeRecord {
    /// Check the record's internal consistency.
    pub fn validate(&self, timeout_s: f64) -> Result<(), String> {
        for (name, value) in [
            ("duration_s", self.duration_s),
            ("distance_m", self.distance_m),
            ("collision_impulse_ns", self.collision_impulse_ns),
            ("mean_power_w", self.mean_power_w),
            ("max_power_w", self.max_power_w),
            ("energy_wh", self.energy_wh),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(format!("{name} must be finite and >= 0, got {value}"));
            }
        }
        if self.collision_impulse_ns > 0.0 && self.termination != Termination::Collision {
            return Err(format!(
                "collision_impulse_ns is {} but termination is {}",
                self.collision_impulse_ns, self.termination
            ));
        }
        if self.max_power_w < self.mean_power_w {
            return Err(format!(
                "max_power_w {} is below mean_power_w {}",
                self.max_power_w, self.mean_power_w
            ));
        }
        let expected_wh = self.mean_power_w * self.duration_s / 3600.0;
        if (self.energy_wh - expected_wh).abs() > ENERGY_TOLERANCE * expected_wh.max(self.energy_wh) + 1e-9 {
            return Err(format!(
                "energy_wh {} disagrees with mean_power_w × duration ({expected_wh} Wh)",
                self.energy_wh
            ));
        }
        if self.termination == Termination::Timeout && self.duration_s < timeout_s - 1e-9 {
            return Err(format!(
                "Timeout episode lasted {} s, shorter than the {timeout_s} s timeout",
                self.duration_s
            ));
        }
        Ok(())
    }

    /// Canonical single-line encoding, fields in [`FIELDS`] order.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("episode records always serialize")
    }

    /// Parse one line. `line_no` is 1-based and only used for error messages.
    pub fn parse_line(line: &str, line_no: usize, opts: &ReadOptions) -> Result<Self, LogError> {
        let value: Value = serde_json::from_str(line).map_err(|e| LogError::Syntax {
            line: line_no,
            message: e.to_string(),
        })?;
        let Value::Object(map) = value else {
            return Err(LogError::Syntax {
                line: line_no,
                message: "expected a JSON object".into(),
            });
        };
        for key in map.keys() {
            if !FIELDS.contains(&key.as_str()) {
                if opts.strict {
                    return Err(LogError::Field {
                        line: line_no,
                        field: key.clone(),
                        reason: "unknown key".into(),
                    });
                }
                log::warn!("line {line_no}: ignoring unknown key `{key}`");
            }
        }
        let fields = Fields { map: &map, line: line_no };
        let record = EpisodeRecord {
            episode_id: fields.string("episode_id")?,
            scenario_id: fields.string("scenario_id")?,
            policy_id: fields.string("policy_id")?,
            seed: fields.unsigned("seed")?,
            termination: fields.termination("termination")?,
            duration_s: fields.number("duration_s")?,
            distance_m: fields.number("distance_m")?,
            collision_impulse_ns: fields.number("collision_impulse_ns")?,
            mean_power_w: fields.number("mean_power_w")?,
            max_power_w: fields.number("max_power_w")?,
            energy_wh: fields.number("energy_wh")?,
        };
        record.validate(opts.timeout_s).map_err(|reason| LogError::Invalid {
            line: line_no,
            episode_id: record.episode_id.clone(),
            reason,
        })?;
        Ok(record)
    }
}

struct Fields<'a> {
    map: &'a Map<String, Value>,
    line: usize,
}

impl Fields<'_> {
    fn get(&self, field: &str) -> Result<&Value, LogError> {
        self.map.get(field).ok_or_else(|| self.err(field, "missing"))
    }

    fn err(&self, field: &str, reason: &str) -> LogError {
        LogError::Field {
            line: self.line,
            field: field.to_string(),
            reason: reason.to_string(),
        }
    }

    fn string(&self, field: &str) -> Result<String, LogError> {
        match self.get(field)? {
            Value::String(s) => Ok(s.clone()),
            _ => Err(self.err(field, "expected a string")),
        }
    }

    fn unsigned(&self, field: &str) -> Result<u64, LogError> {
        self.get(field)?
            .as_u64()
            .ok_or_else(|| self.err(field, "expected an unsigned integer"))
    }

    fn number(&self, field: &str) -> Result<f64, LogError> {
        self.get(field)?
            .as_f64()
            .ok_or_else(|| self.err(field, "expected a number"))
    }

    fn termination(&self, field: &str) -> Result<Termination, LogError> {
        let raw = self.string(field)?;
        raw.parse().map_err(|e: String| self.err(field, &e))
    }
}

/// Parse a whole log from a reader. Blank lines are skipped.
pub fn parse_log<R: BufRead>(reader: R, opts: &ReadOptions) -> Result<Vec<EpisodeRecord>, LogError> {
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        records.push(EpisodeRecord::parse_line(&line, idx + 1, opts)?);
    }
    Ok(records)
}

pub fn parse_log_str(text: &str, opts: &ReadOptions) -> Result<Vec<EpisodeRecord>, LogError> {
    parse_log(text.as_bytes(), opts)
}

pub fn read_log(path: impl AsRef<Path>, opts: &ReadOptions) -> Result<Vec<EpisodeRecord>, LogError> {
    let file = std::fs::File::open(path.as_ref())?;
    parse_log(std::io::BufReader::new(file), opts)
}

pub fn write_log_to<W: Write>(mut writer: W, records: &[EpisodeRecord]) -> std::io::Result<()> {
    for record in records {
        writeln!(writer, "{}", record.to_line())?;
    }
    writer.flush()
}

pub fn encode_log(records: &[EpisodeRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&record.to_line());
        out.push('\n');
    }
    out
}

pub fn write_log(path: impl AsRef<Path>, records: &[EpisodeRecord]) -> std::io::Result<()> {
    let file = std::fs::File::create(path.as_ref())?;
    write_log_to(std::io::BufWriter::new(file), records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(termination: Termination, impulse: f64) -> EpisodeRecord {
        EpisodeRecord {
            episode_id: "ep-000001".into(),
            scenario_id: "l2-crowded".into(),
            policy_id: "straight-line".into(),
            seed: 42,
            termination,
            duration_s: 36.0,
            distance_m: 20.0,
            collision_impulse_ns: impulse,
            mean_power_w: 500.0,
            max_power_w: 650.0,
            energy_wh: 5.0,
        }
    }

    #[test]
    fn canonical_line_has_fixed_field_order() {
        let line = record(Termination::Arrive, 0.0).to_line();
        let mut last = 0;
        for field in FIELDS {
            let at = line.find(&format!("\"{field}\"")).unwrap();
            assert!(at >= last, "{field} out of order in {line}");
            last = at;
        }
        assert!(line.contains("\"termination\":\"Arrive\""));
    }

    #[test]
    fn reads_three_lines() {
        let text = [
            record(Termination::Arrive, 0.0),
            record(Termination::Collision, 50.0),
            EpisodeRecord {
                duration_s: 600.0,
                energy_wh: 500.0 * 600.0 / 3600.0,
                ..record(Termination::Timeout, 0.0)
            },
        ]
        .iter()
        .map(EpisodeRecord::to_line)
        .collect::<Vec<_>>()
        .join("\n");
        let records = parse_log_str(&text, &ReadOptions::default()).unwrap();
        assert_eq!(records.len(), 3);
        assert_eq!(records[1].termination, Termination::Collision);
    }

    #[test]
    fn impulse_without_collision_is_rejected() {
        let line = record(Termination::Arrive, 10.0).to_line();
        match EpisodeRecord::parse_line(&line, 7, &ReadOptions::default()) {
            Err(LogError::Invalid { line, episode_id, .. }) => {
                assert_eq!(line, 7);
                assert_eq!(episode_id, "ep-000001");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_fields_name_line_and_field() {
        let line = record(Termination::Arrive, 0.0)
            .to_line()
            .replace("\"seed\":42", "\"seed\":-3");
        let err = EpisodeRecord::parse_line(&line, 3, &ReadOptions::default()).unwrap_err();
        assert!(matches!(&err, LogError::Field { line: 3, field, .. } if field == "seed"), "{err}");

        let line = record(Termination::Arrive, 0.0)
            .to_line()
            .replace(",\"energy_wh\":5.0", "");
        let err = EpisodeRecord::parse_line(&line, 9, &ReadOptions::default()).unwrap_err();
        assert!(err.to_string().contains("line 9"));
        assert!(err.to_string().contains("energy_wh"));

        let err = parse_log_str("{\"episode_id\":", &ReadOptions::default()).unwrap_err();
        assert!(matches!(err, LogError::Syntax { line: 1, .. }));
    }

    #[test]
    fn unknown_keys_depend_on_strictness() {
        let line = record(Termination::Arrive, 0.0)
            .to_line()
            .replace("}", ",\"weather\":\"rain\"}");
        assert!(EpisodeRecord::parse_line(&line, 1, &ReadOptions::default()).is_err());
        let lenient = ReadOptions {
            strict: false,
            ..ReadOptions::default()
        };
        assert_eq!(
            EpisodeRecord::parse_line(&line, 1, &lenient).unwrap(),
            record(Termination::Arrive, 0.0)
        );
    }

    #[test]
    fn cross_field_checks() {
        let mut r = record(Termination::Arrive, 0.0);
        r.max_power_w = 100.0;
        assert!(r.validate(600.0).is_err());
        let mut r = record(Termination::Arrive, 0.0);
        r.energy_wh = 5.2;
        assert!(r.validate(600.0).is_err());
        r.energy_wh = 5.04;
        assert!(r.validate(600.0).is_ok());
        let r = record(Termination::Timeout, 0.0);
        assert!(r.validate(600.0).is_err());
        assert!(r.validate(30.0).is_ok());
    }
}
