//! Search for the smallest pool capacities a workload runs in.

use thiserror::Error;

use super::{Pool, PoolUsage, RuntimeConfig, RuntimeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("baseline configuration failed: {0}")]
    Baseline(RuntimeError),
    #[error("trial failed for a reason other than {pool} capacity: {error}")]
    Trial { pool: Pool, error: RuntimeError },
    #[error("combined minimal configuration failed: {0}")]
    Combined(RuntimeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepReport {
    pub config: RuntimeConfig,
    /// Peak occupancy observed under the baseline configuration.
    pub high_water: PoolUsage,
    /// Number of times the workload was run.
    pub trials: usize,
}

/// Finds, pool by pool, the smallest capacity under which `trial` completes
/// without overflowing, holding the other pools at their `baseline` values.
///
/// `trial` runs the whole workload under a configuration and reports the
/// peak pool usage. Capacities only decide whether a run aborts, never what
/// it does, so the per-pool minima combine into a working configuration.
pub fn minimal_config<F>(baseline: RuntimeConfig, mut trial: F) -> Result<SweepReport, SweepError>
where
    F: FnMut(&RuntimeConfig) -> Result<PoolUsage, RuntimeError>,
{
    let high_water = trial(&baseline).map_err(SweepError::Baseline)?;
    let mut trials = 1;
    let mut config = baseline;

    for pool in [Pool::Beliefs, Pool::Events, Pool::Intentions, Pool::Frames] {
        let limit = *slot(&mut config, pool);
        for capacity in 1..=limit {
            let mut candidate = baseline;
            *slot(&mut candidate, pool) = capacity;
            trials += 1;
            match trial(&candidate) {
                Ok(_) => {
                    *slot(&mut config, pool) = capacity;
                    break;
                }
                Err(RuntimeError::Capacity { pool: p, .. }) if p == pool => {}
                Err(error) => return Err(SweepError::Trial { pool, error }),
            }
        }
    }

    trials += 1;
    trial(&config).map_err(SweepError::Combined)?;
    Ok(SweepReport {
        config,
        high_water,
        trials,
    })
}

fn slot(config: &mut RuntimeConfig, pool: Pool) -> &mut usize {
    match pool {
        Pool::Beliefs => &mut config.belief_capacity,
        Pool::Events => &mut config.event_capacity,
        Pool::Intentions => &mut config.intention_capacity,
        Pool::Frames => &mut config.frame_depth,
    }
}
