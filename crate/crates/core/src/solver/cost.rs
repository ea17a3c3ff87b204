use std::ops::AddAssign;

/// Costs attributed to one recursion level.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LevelCost {
    /// Model cost: classical subroutine calls plus charged mean-estimation queries.
    pub charged_queries: u64,
    /// Work actually performed (right-hand side or sample evaluations).
    pub actual_evaluations: u64,
    /// Classical evaluations of f or its derivatives, as charged.
    pub classical_derivative_evals: u64,
}

impl AddAssign for LevelCost {
    fn add_assign(&mut self, rhs: Self) {
        self.charged_queries += rhs.charged_queries;
        self.actual_evaluations += rhs.actual_evaluations;
        self.classical_derivative_evals += rhs.classical_derivative_evals;
    }
}

/// Per-level cost breakdown; level `s` is stored at index `s - 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CostLedger {
    levels: Vec<LevelCost>,
}

impl CostLedger {
    pub fn new(levels: usize) -> Self {
        Self { levels: vec![LevelCost::default(); levels] }
    }

    pub fn level(&self, s: usize) -> LevelCost {
        self.levels.get(s.wrapping_sub(1)).copied().unwrap_or_default()
    }

    pub fn levels(&self) -> &[LevelCost] {
        &self.levels
    }

    pub fn charge(&mut self, s: usize, cost: LevelCost) {
        if self.levels.len() < s {
            self.levels.resize(s, LevelCost::default());
        }
        self.levels[s - 1] += cost;
    }

    pub fn total(&self) -> LevelCost {
        let mut t = LevelCost::default();
        for l in &self.levels {
            t += *l;
        }
        t
    }

    pub fn charged_queries(&self) -> u64 {
        self.total().charged_queries
    }

    pub fn actual_evaluations(&self) -> u64 {
        self.total().actual_evaluations
    }

    pub fn classical_derivative_evals(&self) -> u64 {
        self.total().classical_derivative_evals
    }

    pub fn merge(&mut self, other: &CostLedger) {
        for (i, l) in other.levels.iter().enumerate() {
            self.charge(i + 1, *l);
        }
    }
}
