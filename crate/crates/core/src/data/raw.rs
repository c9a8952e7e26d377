//! Raw surveillance records and their CSV form.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;

use super::imputed::ImputedDataset;
use crate::calendar;
use crate::error::{Result, SidurError};

/// Columns that every raw file must carry (values may be empty).
pub const MANDATORY_COLUMNS: [&str; 9] = [
    "date",
    "confirmed",
    "hosp",
    "icu",
    "rec_hosp",
    "dead_hosp",
    "dead_ehpad",
    "tests",
    "pos_tests",
];

/// Optional per-person screening columns that replace `tests`/`pos_tests`
/// wherever they are filled in.
pub const SCREENING_COLUMNS: [&str; 2] = ["tests_sidep", "pos_tests_sidep"];

/// Header of an already imputed file, accepted as input as well.
pub const IMPUTED_COLUMNS: [&str; 8] = ["k", "date", "u", "y1", "y2", "y3", "icu", "deaths"];

/// One day of surveillance data. Absent values are `None`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawRecord {
    pub date: Option<NaiveDate>,
    /// Cumulative confirmed cases.
    pub confirmed: Option<f64>,
    /// Currently hospitalized.
    pub hosp: Option<f64>,
    /// Currently in intensive care.
    pub icu: Option<f64>,
    /// Cumulative recoveries after hospitalization.
    pub rec_hosp: Option<f64>,
    /// Cumulative deaths in hospital.
    pub dead_hosp: Option<f64>,
    /// Cumulative deaths in care homes.
    pub dead_ehpad: Option<f64>,
    /// Laboratory tests performed that day.
    pub tests: Option<f64>,
    /// Positive laboratory tests that day.
    pub pos_tests: Option<f64>,
    /// Per-person screening tests that day.
    pub tests_sidep: Option<f64>,
    /// Per-person positive screening tests that day.
    pub pos_tests_sidep: Option<f64>,
    /// Already imputed removed count, used verbatim when present.
    pub removed: Option<f64>,
    /// Already imputed total deaths, used verbatim when present.
    pub deaths: Option<f64>,
    /// Already imputed tests and detections, used verbatim when present.
    pub u: Option<f64>,
    pub y3: Option<f64>,
}

impl RawRecord {
    pub fn date(&self) -> NaiveDate {
        self.date.expect("validated record has a date")
    }
}

/// Validated daily surveillance records.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawDataset {
    pub records: Vec<RawRecord>,
}

type Field = fn(&RawRecord) -> Option<f64>;

const CUMULATIVE: [(&str, Field); 4] = [
    ("confirmed", |r| r.confirmed),
    ("rec_hosp", |r| r.rec_hosp),
    ("dead_hosp", |r| r.dead_hosp),
    ("dead_ehpad", |r| r.dead_ehpad),
];

impl RawDataset {
    pub fn new(records: Vec<RawRecord>) -> Result<Self> {
        let ds = Self { records };
        ds.validate()?;
        Ok(ds)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn first_date(&self) -> Option<NaiveDate> {
        self.records.first().and_then(|r| r.date)
    }

    fn validate(&self) -> Result<()> {
        for (i, r) in self.records.iter().enumerate() {
            let date = r.date.ok_or_else(|| SidurError::Parse {
                row: i + 1,
                column: "date".into(),
                message: "missing date".into(),
            })?;
            if i > 0 {
                let prev = self.records[i - 1].date();
                if (date - prev).num_days() != 1 {
                    return Err(SidurError::Schema(format!(
                        "dates must advance by one day: {prev} then {date}"
                    )));
                }
            }
        }
        for (name, get) in CUMULATIVE {
            let mut last: Option<f64> = None;
            for (i, r) in self.records.iter().enumerate() {
                if let Some(v) = get(r) {
                    if let Some(prev) = last {
                        if v < prev {
                            return Err(SidurError::Parse {
                                row: i + 1,
                                column: name.into(),
                                message: format!("cumulative series decreases from {prev} to {v}"),
                            });
                        }
                    }
                    last = Some(v);
                }
            }
        }
        Ok(())
    }

    /// Records equivalent to an already imputed dataset. Imputing them
    /// returns the same dataset.
    pub fn from_imputed(data: &ImputedDataset) -> Self {
        let records = (0..data.len())
            .map(|i| RawRecord {
                date: Some(data.dates[i]),
                confirmed: Some(data.y1[i]),
                icu: data.icu[i],
                removed: Some(data.y2[i]),
                deaths: Some(data.deaths[i]),
                u: Some(data.u[i]),
                y3: Some(data.y3[i]),
                ..Default::default()
            })
            .collect();
        Self { records }
    }

    /// Writes the raw schema, including the screening columns.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let header: Vec<&str> = MANDATORY_COLUMNS
            .iter()
            .chain(SCREENING_COLUMNS.iter())
            .copied()
            .collect();
        w.write_record(&header).map_err(io_err)?;
        for r in &self.records {
            let cells = [
                r.confirmed,
                r.hosp,
                r.icu,
                r.rec_hosp,
                r.dead_hosp,
                r.dead_ehpad,
                r.tests,
                r.pos_tests,
                r.tests_sidep,
                r.pos_tests_sidep,
            ];
            let mut row = vec![r.date().to_string()];
            row.extend(cells.iter().map(|c| c.map(fmt_number).unwrap_or_default()));
            w.write_record(&row).map_err(io_err)?;
        }
        w.flush().map_err(|e| SidurError::Io {
            path: "<raw>".into(),
            message: e.to_string(),
        })
    }
}

pub(crate) fn fmt_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

fn io_err(e: csv::Error) -> SidurError {
    SidurError::Io {
        path: "<csv>".into(),
        message: e.to_string(),
    }
}

/// Reads a raw surveillance file. Files with the imputed header are accepted
/// and mapped onto the verbatim fields.
pub fn load_raw(path: &Path) -> Result<RawDataset> {
    let file = std::fs::File::open(path).map_err(|e| SidurError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    read_raw(file)
}

pub fn read_raw<R: Read>(reader: R) -> Result<RawDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| SidurError::Schema(e.to_string()))?
        .clone();
    if headers.is_empty() || headers.iter().all(|h| h.is_empty()) {
        return Err(SidurError::Schema("empty file".into()));
    }
    let index: HashMap<&str, usize> = headers.iter().enumerate().map(|(i, h)| (h, i)).collect();
    let imputed = IMPUTED_COLUMNS.iter().all(|c| index.contains_key(c));
    let required: &[&str] = if imputed {
        &IMPUTED_COLUMNS
    } else {
        &MANDATORY_COLUMNS
    };
    let missing: Vec<&str> = required
        .iter()
        .filter(|c| !index.contains_key(*c))
        .copied()
        .collect();
    if !missing.is_empty() {
        return Err(SidurError::Schema(format!(
            "missing columns: {}",
            missing.join(", ")
        )));
    }

    let mut records = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| SidurError::Parse {
            row: line,
            column: "?".into(),
            message: e.to_string(),
        })?;
        let cell = |name: &str| -> Result<Option<f64>> {
            let Some(&idx) = index.get(name) else {
                return Ok(None);
            };
            let text = row.get(idx).unwrap_or("");
            if text.is_empty() {
                return Ok(None);
            }
            let v: f64 = text.parse().map_err(|_| SidurError::Parse {
                row: line,
                column: name.into(),
                message: format!("not a number: '{text}'"),
            })?;
            if !v.is_finite() || v < 0.0 {
                return Err(SidurError::Parse {
                    row: line,
                    column: name.into(),
                    message: format!("value must be finite and nonnegative: {v}"),
                });
            }
            Ok(Some(v))
        };
        let date_text = row.get(index["date"]).unwrap_or("");
        let date = calendar::parse_date(date_text).map_err(|_| SidurError::Parse {
            row: line,
            column: "date".into(),
            message: format!("not an ISO-8601 date: '{date_text}'"),
        })?;
        let record = if imputed {
            RawRecord {
                date: Some(date),
                confirmed: cell("y1")?,
                icu: cell("icu")?,
                removed: cell("y2")?,
                deaths: cell("deaths")?,
                u: cell("u")?,
                y3: cell("y3")?,
                ..Default::default()
            }
        } else {
            RawRecord {
                date: Some(date),
                confirmed: cell("confirmed")?,
                hosp: cell("hosp")?,
                icu: cell("icu")?,
                rec_hosp: cell("rec_hosp")?,
                dead_hosp: cell("dead_hosp")?,
                dead_ehpad: cell("dead_ehpad")?,
                tests: cell("tests")?,
                pos_tests: cell("pos_tests")?,
                tests_sidep: cell("tests_sidep")?,
                pos_tests_sidep: cell("pos_tests_sidep")?,
                ..Default::default()
            }
        };
        records.push(record);
    }
    RawDataset::new(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "date,confirmed,hosp,icu,rec_hosp,dead_hosp,dead_ehpad,tests,pos_tests";

    #[test]
    fn empty_file_is_a_schema_error() {
        assert!(matches!(
            read_raw("".as_bytes()),
            Err(SidurError::Schema(_))
        ));
    }

    #[test]
    fn missing_column_is_a_schema_error() {
        let text = "date,confirmed\n2020-01-24,3\n";
        assert!(matches!(
            read_raw(text.as_bytes()),
            Err(SidurError::Schema(_))
        ));
    }

    #[test]
    fn single_valid_row() {
        let text = format!("{HEADER}\n2020-01-24,3,,,0,0,,5,3\n");
        let ds = read_raw(text.as_bytes()).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.records[0].confirmed, Some(3.0));
        assert_eq!(ds.records[0].hosp, None);
    }

    #[test]
    fn columns_in_any_order_with_extras() {
        let text = "note,pos_tests,tests,dead_ehpad,dead_hosp,rec_hosp,icu,hosp,confirmed,date\n\
                    x,1,2,,0,0,,,3,2020-01-24\n";
        let ds = read_raw(text.as_bytes()).unwrap();
        assert_eq!(ds.records[0].tests, Some(2.0));
    }

    #[test]
    fn malformed_number_names_row_and_column() {
        let text = format!("{HEADER}\n2020-01-24,3,,,0,0,,5,3\n2020-01-25,abc,,,0,0,,5,3\n");
        match read_raw(text.as_bytes()) {
            Err(SidurError::Parse { row, column, .. }) => {
                assert_eq!(row, 3);
                assert_eq!(column, "confirmed");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn date_gaps_and_decreasing_cumulatives_are_rejected() {
        let gap = format!("{HEADER}\n2020-01-24,3,,,0,0,,5,3\n2020-01-26,4,,,0,0,,5,3\n");
        assert!(read_raw(gap.as_bytes()).is_err());
        let down = format!("{HEADER}\n2020-01-24,5,,,0,0,,5,3\n2020-01-25,4,,,0,0,,5,3\n");
        assert!(read_raw(down.as_bytes()).is_err());
    }

    #[test]
    fn round_trips_through_csv() {
        let text = format!("{HEADER}\n2020-01-24,3,,,0,0,,5,3\n2020-01-25,4,,,0,1,,6,1\n");
        let ds = read_raw(text.as_bytes()).unwrap();
        let mut buf = Vec::new();
        ds.write_csv(&mut buf).unwrap();
        assert_eq!(read_raw(buf.as_slice()).unwrap(), ds);
    }
}
