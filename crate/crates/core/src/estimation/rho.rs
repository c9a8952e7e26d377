use crate::error::{Result, SidurError};

/// Least-squares removal rate from cumulative diagnosed and removed series.
///
/// Regresses `Δȳ2(k) = ȳ2(k+1) − ȳ2(k)` on the active diagnosed
/// `ȳ1(k) − ȳ2(k)` without intercept and clamps the slope to `[0, 1]`.
pub fn estimate_rho(y1: &[f64], y2: &[f64]) -> Result<f64> {
    if y1.len() != y2.len() || y1.len() < 2 {
        return Err(SidurError::InvalidInput(
            "series must have equal length of at least two".into(),
        ));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..y1.len() - 1 {
        let active = y1[k] - y2[k];
        num += (y2[k + 1] - y2[k]) * active;
        den += active * active;
    }
    if den == 0.0 {
        return Err(SidurError::DegenerateData(
            "no active diagnosed cases to regress on".into(),
        ));
    }
    Ok((num / den).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_regression_recovers_rate() {
        let mut y1 = vec![100.0];
        let mut y2 = vec![0.0];
        for k in 0..50 {
            let active: f64 = y1[k] - y2[k];
            y2.push(y2[k] + 0.05 * active);
            y1.push(y1[k] + 20.0 + k as f64);
        }
        assert!((estimate_rho(&y1, &y2).unwrap() - 0.05).abs() < 1e-14);
    }

    #[test]
    fn degenerate_and_invalid_inputs() {
        assert!(matches!(
            estimate_rho(&[1.0, 2.0], &[1.0, 2.0]),
            Err(SidurError::DegenerateData(_))
        ));
        assert!(estimate_rho(&[1.0], &[0.0]).is_err());
        assert!(estimate_rho(&[1.0, 2.0], &[0.0]).is_err());
    }

    #[test]
    fn slope_is_clamped() {
        assert_eq!(estimate_rho(&[10.0, 10.0], &[0.0, 50.0]).unwrap(), 1.0);
        assert_eq!(
            estimate_rho(&[10.0, 10.0, 10.0], &[5.0, 1.0, 0.5]).unwrap(),
            0.0
        );
    }
}
