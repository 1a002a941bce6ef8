//! Post-processing of sampled time series: periods, envelopes, collapse and
//! revival.

/// Centered moving average over `window` samples (shrinking at the edges).
pub fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    let w = window.max(1);
    let half = w / 2;
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(0.0);
    for v in values {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + w - half).min(values.len());
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

/// Mean spacing of upward crossings of the midline `(max + min)/2` after
/// smoothing over `smooth` samples. `None` with fewer than two crossings.
pub fn oscillation_period(times: &[f64], values: &[f64], smooth: usize) -> Option<f64> {
    assert_eq!(times.len(), values.len());
    let s = moving_average(values, smooth);
    let (lo, hi) = s.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let mid = 0.5 * (lo + hi);
    let crossings: Vec<f64> = s
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] < mid && w[1] >= mid)
        .map(|(i, w)| {
            // linear interpolation inside the bracketing interval
            let f = (mid - w[0]) / (w[1] - w[0]);
            times[i] + f * (times[i + 1] - times[i])
        })
        .collect();
    if crossings.len() < 2 {
        return None;
    }
    Some((crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64)
}

/// Half peak-to-peak amplitude over a trailing window of `window` samples
/// starting at each index. The result is shorter than `values` by
/// `window - 1`.
pub fn sliding_amplitude(values: &[f64], window: usize) -> Vec<f64> {
    let w = window.max(1).min(values.len());
    values
        .windows(w)
        .map(|win| {
            let (lo, hi) = win.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
            0.5 * (hi - lo)
        })
        .collect()
}

/// Collapse-and-revival features of an oscillation envelope.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CollapseRevival {
    pub initial_amplitude: f64,
    /// First time the envelope falls to half its initial value.
    pub collapse_time: f64,
    /// Smallest envelope inside the collapse.
    pub min_amplitude: f64,
    pub min_time: f64,
    /// Largest envelope after the collapse.
    pub revival_amplitude: f64,
    pub revival_time: f64,
}

impl CollapseRevival {
    /// Envelope features of `values` sampled at uniform `times`, using a
    /// window of `window` samples (about one Rabi period).
    pub fn detect(times: &[f64], values: &[f64], window: usize) -> Option<Self> {
        let env = sliding_amplitude(values, window);
        let a0 = *env.first()?;
        let ic = env.iter().position(|&a| a <= 0.5 * a0)?;
        // collapse region ends where the envelope first climbs back to half
        let end = env[ic..].iter().position(|&a| a > 0.5 * a0).map_or(env.len(), |k| ic + k);
        let (imin, &amin) = env[ic..end].iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1))?;
        let imin = ic + imin;
        let (irev, &arev) = env[imin..].iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1))?;
        let irev = imin + irev;
        Some(Self {
            initial_amplitude: a0,
            collapse_time: times[ic],
            min_amplitude: amin,
            min_time: times[imin],
            revival_amplitude: arev,
            revival_time: times[irev],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_of_noisy_cosine() {
        let times: Vec<f64> = (0..20_000).map(|k| k as f64 * 0.01).collect();
        let values: Vec<f64> = times.iter().map(|t| (0.3 * t).cos() + 0.05 * (40.0 * t).sin()).collect();
        let p = oscillation_period(&times, &values, 50).unwrap();
        assert!((p - std::f64::consts::TAU / 0.3).abs() < 1e-2 * p);
        assert!(oscillation_period(&times[..100], &values[..100], 50).is_none());
    }

    #[test]
    fn moving_average_constant() {
        assert_eq!(moving_average(&[2.0; 7], 3), vec![2.0; 7]);
    }

    #[test]
    fn detects_beat_collapse() {
        // cos(a t) + cos(b t) beats: envelope |cos((a-b)t/2)|
        let times: Vec<f64> = (0..40_000).map(|k| k as f64 * 0.01).collect();
        let values: Vec<f64> = times.iter().map(|t| 0.5 * ((1.0 * t).cos() + (1.05 * t).cos())).collect();
        let cr = CollapseRevival::detect(&times, &values, 650).unwrap();
        assert!(cr.min_amplitude < 0.2 * cr.initial_amplitude);
        assert!(cr.revival_amplitude > 0.8 * cr.initial_amplitude);
        assert!(cr.revival_time > cr.min_time);
    }
}
