use crate::error::{Error, Result};
use crate::Group;

/// `r` pairs of coordinate projectors `(I_{p_a}, I_{q_a})` in dimension `n`,
/// describing the statistics `T_{p_a, q_a}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectorFamily {
    n: usize,
    dims: Vec<(usize, usize)>,
}

impl ProjectorFamily {
    pub fn new(n: usize, dims: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("n must be positive".into()));
        }
        if dims.is_empty() {
            return Err(Error::Argument("projector family needs at least one slot".into()));
        }
        if let Some(&(p, q)) = dims.iter().find(|&&(p, q)| p > n || q > n) {
            return Err(Error::Dimension(format!("dims ({p}, {q}) exceed n = {n}")));
        }
        Ok(ProjectorFamily { n, dims })
    }

    /// `r` copies of `(p, q)`.
    pub fn uniform(n: usize, r: usize, p: usize, q: usize) -> Result<Self> {
        Self::new(n, vec![(p, q); r])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[(usize, usize)] {
        &self.dims
    }

    pub fn row_dims(&self) -> Vec<usize> {
        self.dims.iter().map(|d| d.0).collect()
    }

    pub fn col_dims(&self) -> Vec<usize> {
        self.dims.iter().map(|d| d.1).collect()
    }

    /// The sub-family on the given slots, in the given order.
    pub fn restrict(&self, slots: &[usize]) -> Self {
        ProjectorFamily {
            n: self.n,
            dims: slots.iter().map(|&a| self.dims[a]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CumulantRequest {
    pub group: Group,
    pub family: ProjectorFamily,
}

impl CumulantRequest {
    pub fn new(group: Group, family: ProjectorFamily) -> Self {
        CumulantRequest { group, family }
    }

    pub fn order(&self) -> usize {
        self.family.order()
    }
}
