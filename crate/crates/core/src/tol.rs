/// Numerical tolerances used across certification, rank decisions and inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// PSD cutoff: min eigenvalue must be at least `-psd * max(1, ||M||)`.
    pub psd: f64,
    /// Eigenvalues at most `rank * lambda_max` count as zero.
    pub rank: f64,
    /// Relative pole separation used for merging and proximity checks.
    pub pole: f64,
    /// Allowed relative drift of a computed pole off the admissible axis.
    pub imag: f64,
    /// Relative distance below which computed poles are clustered.
    pub cluster: f64,
    /// Hermitian defect allowed relative to the matrix norm.
    pub herm: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances =
        Tolerances { psd: 1e-9, rank: 1e-10, pole: 1e-9, imag: 1e-8, cluster: 1e-7, herm: 1e-9 };

    pub fn with_psd(mut self, psd: f64) -> Self {
        self.psd = psd;
        self
    }

    pub fn with_rank(mut self, rank: f64) -> Self {
        self.rank = rank;
        self
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
