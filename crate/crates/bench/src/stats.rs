use serde::{Deserialize, Serialize};

/// Mean, sample standard deviation and sample count. `mean` and `sd` are
/// `None` when there are no samples; `sd` is 0 for a single sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    pub count: usize,
}

impl Summary {
    pub fn of(xs: &[f64]) -> Self {
        let count = xs.len();
        if count == 0 {
            return Self {
                mean: None,
                sd: None,
                count,
            };
        }
        let mean = xs.iter().sum::<f64>() / count as f64;
        let sd = if count == 1 {
            0.0
        } else {
            let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
            (ss / (count - 1) as f64).sqrt()
        };
        Self {
            mean: Some(mean),
            sd: Some(sd),
            count,
        }
    }
}
