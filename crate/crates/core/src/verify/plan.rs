use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_SEED: u64 = 0xBF;
pub const DEFAULT_CLASS_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanMode {
    Exhaustive,
    Sample,
}

/// How a scan walks its search space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScanPlan {
    pub mode: PlanMode,
    pub samples: usize,
    pub seed: u64,
    /// Largest class listed in full by an exhaustive plan.
    pub class_cap: usize,
}

impl Default for ScanPlan {
    fn default() -> Self {
        ScanPlan { mode: PlanMode::Sample, samples: DEFAULT_SAMPLES, seed: DEFAULT_SEED, class_cap: DEFAULT_CLASS_CAP }
    }
}

impl ScanPlan {
    pub fn exhaustive() -> Self {
        ScanPlan { mode: PlanMode::Exhaustive, ..Default::default() }
    }

    pub fn sampled(samples: usize, seed: u64) -> Self {
        ScanPlan { mode: PlanMode::Sample, samples, seed, ..Default::default() }
    }

    pub fn is_sampled(&self) -> bool {
        self.mode == PlanMode::Sample
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}
