/// Guards for exhaustive enumerations and bounded searches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest dimension of a component that may be enumerated.
    pub max_dim: usize,
    /// Largest number of candidate evaluations in one enumeration.
    pub max_work: u128,
    /// Integer range `-B..=B` tried for kernel parameters over infinite rings,
    /// and the budget for bounded searches.
    pub search_bound: u64,
    /// Worker threads for the parallel enumerations.
    pub jobs: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_dim: 8, max_work: 1_000_000, search_bound: 1000, jobs: 1 }
    }
}

impl Limits {
    pub(crate) fn check_dim(&self, what: &str, dim: usize) -> Result<(), crate::Error> {
        if dim > self.max_dim {
            return Err(crate::Error::ResourceBound(format!("{what} has dimension {dim} > {}", self.max_dim)));
        }
        Ok(())
    }

    pub(crate) fn check_work(&self, what: &str, work: Option<u128>) -> Result<u128, crate::Error> {
        match work {
            Some(w) if w <= self.max_work => Ok(w),
            _ => Err(crate::Error::ResourceBound(format!("{what} exceeds {} evaluations", self.max_work))),
        }
    }
}
