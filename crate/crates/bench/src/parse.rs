//! Argument value parsers shared by the CLI and tests.

use serde::{Deserialize, Serialize};

/// `(N, k)` problem type, written `NxK` on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ProblemSize {
    pub n: usize,
    pub k: usize,
}

impl ProblemSize {
    pub const fn new(n: usize, k: usize) -> Self {
        Self { n, k }
    }
}

pub fn parse_size(s: &str) -> Result<ProblemSize, String> {
    let (n, k) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NxK, got {s:?}"))?;
    Ok(ProblemSize::new(positive(n)?, positive(k)?))
}

pub fn positive(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(0) => Err("value must be positive".to_owned()),
        Ok(v) => Ok(v),
        Err(e) => Err(format!("{s:?}: {e}")),
    }
}

/// Synthetic dataset shape, written `N=8,k=4,d=2` (`d` defaults to 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticShape {
    pub n: usize,
    pub k: usize,
    pub d: usize,
}

pub fn parse_synthetic(s: &str) -> Result<SyntheticShape, String> {
    let (mut n, mut k, mut d) = (None, None, 2);
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
        let value = positive(value)?;
        match key.trim() {
            "N" | "n" => n = Some(value),
            "k" | "K" => k = Some(value),
            "d" | "D" => d = value,
            other => return Err(format!("unknown key {other:?}; expected N, k or d")),
        }
    }
    match (n, k) {
        (Some(n), Some(k)) => Ok(SyntheticShape { n, k, d }),
        _ => Err("synthetic spec needs both N and k".to_owned()),
    }
}
