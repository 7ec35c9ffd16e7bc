use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::field::{block_increment, floor_index, map_replicas};
use super::stats::mean_se;
use crate::cumulants::fourth_central_moment;
use crate::error::{Error, Result};
use crate::Group;

/// One dyadic block `]s, s'] × ]t, t']` and its increment fourth moment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockMoment {
    pub level: u32,
    pub s: (f64, f64),
    pub t: (f64, f64),
    pub dp: usize,
    pub dq: usize,
    /// Monte Carlo `E[Δ⁴]` and its standard error.
    pub fourth_moment: f64,
    pub fourth_moment_se: f64,
    /// Exact `E[Δ⁴]` (unitary only).
    pub exact_fourth_moment: Option<f64>,
    /// `E[Δ⁴] n⁴ / (Δp² Δq²)`.
    pub ratio: f64,
}

/// Fit of `E[Δ⁴] ≤ C (Δp)² (Δq)² / n⁴` over dyadic blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TightnessReport {
    pub group: Group,
    pub n: usize,
    pub replicas: usize,
    pub levels: u32,
    pub blocks: Vec<BlockMoment>,
    /// Largest Monte Carlo ratio.
    pub constant: f64,
    /// Largest exact ratio, when available.
    pub exact_constant: Option<f64>,
}

/// All dyadic blocks at levels `1..=levels`.
pub fn dyadic_blocks(levels: u32) -> Vec<(u32, (f64, f64), (f64, f64))> {
    let mut out = Vec::new();
    for level in 1..=levels {
        let m = 1usize << level;
        let h = 1.0 / m as f64;
        for i in 0..m {
            for j in 0..m {
                out.push((level, (i as f64 * h, (i + 1) as f64 * h), (j as f64 * h, (j + 1) as f64 * h)));
            }
        }
    }
    out
}

pub fn tightness_fit(group: Group, n: usize, replicas: usize, master_seed: u64, levels: u32) -> Result<TightnessReport> {
    if levels == 0 || n < 1 << levels {
        return Err(Error::Argument(format!("n = {n} too small for {levels} dyadic levels")));
    }
    let blocks = dyadic_blocks(levels);
    let increments: Vec<Vec<f64>> = map_replicas(group, n, replicas, master_seed, |f| {
        blocks
            .iter()
            .map(|&(_, (s, s2), (t, t2))| block_increment(f, s, s2, t, t2))
            .collect()
    })?;

    let n4 = (n as f64).powi(4);
    let mut out = Vec::with_capacity(blocks.len());
    for (b, &(level, s, t)) in blocks.iter().enumerate() {
        let fourth: Vec<f64> = increments.iter().map(|row| row[b].powi(4)).collect();
        let (m, se) = mean_se(&fourth)?;
        let dp = floor_index(n, s.1) - floor_index(n, s.0);
        let dq = floor_index(n, t.1) - floor_index(n, t.0);
        let scale = n4 / ((dp * dp * dq * dq) as f64);
        let exact = match group {
            Group::Unitary => Some(
                fourth_central_moment(dp, dq, n, group)?
                    .to_f64()
                    .unwrap_or(f64::NAN),
            ),
            Group::Orthogonal => None,
        };
        out.push(BlockMoment {
            level,
            s,
            t,
            dp,
            dq,
            fourth_moment: m,
            fourth_moment_se: se,
            exact_fourth_moment: exact,
            ratio: m * scale,
        });
    }
    let constant = out.iter().map(|b| b.ratio).fold(0.0, f64::max);
    let exact_constant = out
        .iter()
        .map(|b| b.exact_fourth_moment.map(|e| e * n4 / ((b.dp * b.dp * b.dq * b.dq) as f64)))
        .collect::<Option<Vec<f64>>>()
        .map(|v| v.into_iter().fold(0.0, f64::max));
    Ok(TightnessReport {
        group,
        n,
        replicas,
        levels,
        blocks: out,
        constant,
        exact_constant,
    })
}
