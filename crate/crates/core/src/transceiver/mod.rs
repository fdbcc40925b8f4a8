//! Precoding, power allocation and achievable-rate evaluation.

mod minpower;
mod power;
mod rate;
mod svd;

pub use minpower::{
    apa_average_power, apa_instantaneous_powers, epa_rate, gbar_i, gbar_i_db, instantaneous_power_for_rate,
    min_power_epa, optimal_k_equation, optimal_subsurface_count, rate_lower_bound, shadowing_mean_db,
    ArraySizes, ShadowingMeanMode, SubsurfaceCount,
};
pub use power::{equal_allocation, waterfilling, PowerAllocation};
pub use rate::{asymptotic_rate, mutual_info_rate, rate_from_gains, transmit};
pub use svd::{effective_rank, svd_transceiver, Transceiver, RANK_TOLERANCE};
