//! Reported quantities derived from run traces.

use alloc::vec::Vec;

use crate::engine::TickTrace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("no ticks recorded")]
    EmptyTraces,
    #[error("need at least two points for a fit")]
    InsufficientData,
}

/// Served-count statistics of one drone over a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroneStats {
    pub drone_id: u32,
    pub mean_m: f64,
    pub min_m: u32,
    pub max_m: u32,
    pub final_m: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub avg_connectivity: f64,
    pub per_drone: Vec<DroneStats>,
    /// Mean served count over drones, per tick.
    pub mean_m_timeseries: Vec<f64>,
    /// Least-squares slope of `mean_m_timeseries` against tick index; zero
    /// for single-tick runs.
    pub trend_slope: f64,
}

/// Time average of the total number of served nodes:
/// `(1/T) * sum_t sum_i M_i(t)`.
pub fn average_connectivity(traces: &[TickTrace]) -> Result<f64, MetricsError> {
    if traces.is_empty() {
        return Err(MetricsError::EmptyTraces);
    }
    let total: u64 = traces.iter().map(TickTrace::total_m).sum();
    Ok(total as f64 / traces.len() as f64)
}

pub fn drone_stats(traces: &[TickTrace]) -> Result<Vec<DroneStats>, MetricsError> {
    let last = traces.last().ok_or(MetricsError::EmptyTraces)?;
    let n = last.per_drone_m.len();
    let stats = (0..n)
        .map(|i| {
            let series = traces.iter().map(|tr| tr.per_drone_m[i]);
            let sum: u64 = series.clone().map(u64::from).sum();
            DroneStats {
                drone_id: i as u32,
                mean_m: sum as f64 / traces.len() as f64,
                min_m: series.clone().min().unwrap_or(0),
                max_m: series.max().unwrap_or(0),
                final_m: last.per_drone_m[i],
            }
        })
        .collect();
    Ok(stats)
}

/// Ordinary least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination; `1.0` when `y` has no variance.
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit, MetricsError> {
    assert_eq!(xs.len(), ys.len(), "x and y lengths differ");
    let n = xs.len();
    if n < 2 {
        return Err(MetricsError::InsufficientData);
    }
    let x_mean = xs.iter().sum::<f64>() / n as f64;
    let y_mean = ys.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - x_mean, y - y_mean);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(MetricsError::InsufficientData);
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LinearFit {
        slope,
        intercept: y_mean - slope * x_mean,
        r_squared,
    })
}

/// Least-squares slope of `series` against its index.
pub fn trend_slope(series: &[f64]) -> Result<f64, MetricsError> {
    let xs: Vec<f64> = (0..series.len()).map(|i| i as f64).collect();
    linear_fit(&xs, series).map(|f| f.slope)
}

pub fn summarize(traces: &[TickTrace]) -> Result<RunSummary, MetricsError> {
    let avg_connectivity = average_connectivity(traces)?;
    let per_drone = drone_stats(traces)?;
    let mean_m_timeseries: Vec<f64> = traces.iter().map(TickTrace::mean_m).collect();
    let trend_slope = match trend_slope(&mean_m_timeseries) {
        Ok(s) => s,
        Err(MetricsError::InsufficientData) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(RunSummary {
        avg_connectivity,
        per_drone,
        mean_m_timeseries,
        trend_slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn traces(rows: &[&[u32]]) -> Vec<TickTrace> {
        rows.iter()
            .enumerate()
            .map(|(t, m)| TickTrace {
                t: t as u64,
                per_drone_m: m.to_vec(),
                per_drone_pos: Vec::new(),
                reverts: Vec::new(),
                separations: 0,
            })
            .collect()
    }

    #[test]
    fn average_of_constant_integrand() {
        let tr = traces(&[&[4, 4, 4], &[4, 4, 4], &[4, 4, 4], &[4, 4, 4]]);
        assert_eq!(average_connectivity(&tr), Ok(12.0));
    }

    #[test]
    fn average_two_ticks() {
        let tr = traces(&[&[3, 7], &[15, 5]]);
        assert_eq!(average_connectivity(&tr), Ok(15.0));
    }

    #[test]
    fn empty_traces_rejected() {
        assert_eq!(average_connectivity(&[]), Err(MetricsError::EmptyTraces));
        assert_eq!(drone_stats(&[]), Err(MetricsError::EmptyTraces));
        assert_eq!(summarize(&[]), Err(MetricsError::EmptyTraces));
    }

    #[test]
    fn stats_of_ramp() {
        let s = drone_stats(&traces(&[&[1], &[2], &[3]])).unwrap();
        assert_eq!(
            s,
            vec![DroneStats { drone_id: 0, mean_m: 2.0, min_m: 1, max_m: 3, final_m: 3 }]
        );
    }

    #[test]
    fn stats_of_constant_and_single_tick() {
        let s = drone_stats(&traces(&[&[6, 2], &[6, 2]])).unwrap();
        assert_eq!((s[0].mean_m, s[0].min_m, s[0].max_m, s[0].final_m), (6.0, 6, 6, 6));
        let s = drone_stats(&traces(&[&[9]])).unwrap();
        assert_eq!((s[0].mean_m, s[0].min_m, s[0].max_m, s[0].final_m), (9.0, 9, 9, 9));
    }

    #[test]
    fn slope_examples() {
        assert_eq!(trend_slope(&[0.0, 1.0, 2.0, 3.0]), Ok(1.0));
        assert_eq!(trend_slope(&[5.0, 5.0, 5.0]), Ok(0.0));
        // closed form: x mean 1.5, y mean 1.5, sxy = 2.25 - 0.25 - 0.25 + 2.25 = 4,
        // sxx = 5, slope 0.8
        assert!((trend_slope(&[0.0, 2.0, 1.0, 3.0]).unwrap() - 0.8).abs() < 1e-15);
        assert_eq!(trend_slope(&[1.0]), Err(MetricsError::InsufficientData));
        assert_eq!(trend_slope(&[]), Err(MetricsError::InsufficientData));
    }

    #[test]
    fn exact_line_has_unit_r_squared() {
        let f = linear_fit(&[5.0, 10.0, 15.0], &[10.0, 20.0, 30.0]).unwrap();
        assert_eq!((f.slope, f.intercept, f.r_squared), (2.0, 0.0, 1.0));
    }

    #[test]
    fn single_tick_summary_has_zero_slope() {
        let s = summarize(&traces(&[&[2, 4]])).unwrap();
        assert_eq!(s.trend_slope, 0.0);
        assert_eq!(s.mean_m_timeseries, vec![3.0]);
        assert_eq!(s.avg_connectivity, 6.0);
    }
}
