//! Conversion between calendar dates and the model's day index.
//!
//! Day 0 is 2020-01-24. The dataset index `k` used by the imputed series is
//! one-based, so `k = t + 1`.

use chrono::{Duration, NaiveDate};

use crate::error::{Result, SidurError};

/// First day of the data horizon.
pub fn epoch() -> NaiveDate {
    NaiveDate::from_ymd_opt(2020, 1, 24).expect("valid epoch")
}

/// Days elapsed since the epoch. Negative before it.
pub fn day_index(date: NaiveDate) -> i64 {
    (date - epoch()).num_days()
}

/// Calendar date of an integer day index.
pub fn date_of(day: i64) -> NaiveDate {
    epoch() + Duration::days(day)
}

/// Parses an ISO-8601 date (`YYYY-MM-DD`).
pub fn parse_date(text: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(text.trim(), "%Y-%m-%d")
        .map_err(|e| SidurError::InvalidInput(format!("bad date '{text}': {e}")))
}

/// Day index of an ISO-8601 date string.
pub fn parse_day(text: &str) -> Result<f64> {
    Ok(day_index(parse_date(text)?) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_dates_map_to_expected_indices() {
        let cases = [
            ("2020-01-24", 0),
            ("2020-03-01", 37),
            ("2020-03-09", 45),
            ("2020-03-10", 46),
            ("2020-03-17", 53),
            ("2020-04-01", 68),
            ("2020-05-11", 108),
            ("2020-05-13", 110),
            ("2020-07-01", 159),
        ];
        for (text, day) in cases {
            assert_eq!(parse_day(text).unwrap(), day as f64, "{text}");
            assert_eq!(date_of(day).to_string(), text);
        }
    }

    #[test]
    fn rejects_non_iso_dates() {
        assert!(parse_date("01/03/2020").is_err());
        assert!(parse_date("2020-02-30").is_err());
    }
}
