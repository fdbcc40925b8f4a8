use crate::{ComplexMatrix, Error, Result};

/// Singular values below `RANK_TOLERANCE · λ₁` count as zero.
pub const RANK_TOLERANCE: f64 = 1e-12;

/// SVD precoder/combiner pair for `N_s` streams.
#[derive(Debug, Clone, PartialEq)]
pub struct Transceiver {
    /// `W_t`, `N_t × N_s`, the leading right singular vectors.
    pub precoder: ComplexMatrix,
    /// `W_r`, `N_r × N_s`, the leading left singular vectors.
    pub combiner: ComplexMatrix,
    /// `λ_1 ≥ … ≥ λ_{N_s}`
    pub singular_values: Vec<f64>,
    /// Numerical rank of the full channel.
    pub rank: usize,
}

impl Transceiver {
    pub fn streams(&self) -> usize {
        self.singular_values.len()
    }

    /// `λ_l²`
    pub fn power_gains(&self) -> Vec<f64> {
        self.singular_values.iter().map(|s| s * s).collect()
    }
}

/// Number of singular values above `RANK_TOLERANCE · λ₁` (input sorted descending).
pub fn effective_rank(singular_values: &[f64]) -> usize {
    match singular_values.first() {
        Some(&top) if top > 0.0 => singular_values
            .iter()
            .take_while(|&&s| s > RANK_TOLERANCE * top)
            .count(),
        _ => 0,
    }
}

pub fn svd_transceiver(channel: &ComplexMatrix, streams: usize) -> Result<Transceiver> {
    let max = channel.nrows().min(channel.ncols());
    if streams == 0 || streams > max {
        return Err(Error::param(
            "streams",
            format!("{streams} not in 1..={max} for a {}x{} channel", channel.nrows(), channel.ncols()),
        ));
    }
    let svd = channel.clone().svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested Vᴴ");
    let all: Vec<f64> = svd.singular_values.iter().copied().collect();
    Ok(Transceiver {
        precoder: v_t.rows(0, streams).adjoint(),
        combiner: u.columns(0, streams).into_owned(),
        singular_values: all[..streams].to_vec(),
        rank: effective_rank(&all),
    })
}
