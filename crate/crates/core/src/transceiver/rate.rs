use rand::Rng;

use super::power::PowerAllocation;
use crate::channel::{complex_gaussian, PathDecomposition};
use crate::linalg::log2_abs_det;
use crate::{c64, ComplexMatrix, ComplexVector, Error, Result};

/// `Σ_l log₂(1 + p_l·g_l/σ²)` over parallel channels with power gains `g_l`.
pub fn rate_from_gains(gains: &[f64], powers: &[f64], noise: f64) -> f64 {
    gains
        .iter()
        .zip(powers)
        .map(|(g, p)| (p * g / noise).ln_1p())
        .sum::<f64>()
        / std::f64::consts::LN_2
}

/// `log₂ det(I + B⁻¹/σ² · W_rᴴ ℍ W_t P_t W_tᴴ ℍᴴ W_r)` with `B = W_rᴴ W_r`.
pub fn mutual_info_rate(
    channel: &ComplexMatrix,
    precoder: &ComplexMatrix,
    combiner: &ComplexMatrix,
    allocation: &PowerAllocation,
) -> Result<f64> {
    let ns = allocation.len();
    if precoder.shape() != (channel.ncols(), ns) {
        return Err(Error::InvalidDimension(format!(
            "precoder is {:?}, expected {:?}",
            precoder.shape(),
            (channel.ncols(), ns)
        )));
    }
    if combiner.shape() != (channel.nrows(), ns) {
        return Err(Error::InvalidDimension(format!(
            "combiner is {:?}, expected {:?}",
            combiner.shape(),
            (channel.nrows(), ns)
        )));
    }
    if !(allocation.noise > 0.0) {
        return Err(Error::param("noise", "must be > 0"));
    }
    let b = combiner.adjoint() * combiner;
    let b_inv = b.try_inverse().ok_or(Error::SingularMatrix("combiner Gram matrix"))?;

    let mut effective = combiner.adjoint() * channel * precoder;
    let amp: Vec<c64> = allocation.powers.iter().map(|p| c64::from(p.sqrt())).collect();
    crate::linalg::scale_columns(&mut effective, &amp);
    let cov = &effective * effective.adjoint();
    let m = ComplexMatrix::identity(ns, ns) + b_inv * cov * c64::from(1.0 / allocation.noise);
    log2_abs_det(&m).ok_or(Error::SingularMatrix("rate determinant"))
}

/// `z = W_rᴴ ℍ W_t P_t^{1/2} s + W_rᴴ n` with `n ~ CN(0, σ_n² I)`.
pub fn transmit<R: Rng + ?Sized>(
    symbols: &ComplexVector,
    channel: &ComplexMatrix,
    precoder: &ComplexMatrix,
    combiner: &ComplexMatrix,
    allocation: &PowerAllocation,
    rng: &mut R,
) -> Result<ComplexVector> {
    let ns = allocation.len();
    if symbols.len() != ns {
        return Err(Error::LengthMismatch {
            what: "symbols",
            expected: ns,
            actual: symbols.len(),
        });
    }
    if precoder.shape() != (channel.ncols(), ns) || combiner.shape() != (channel.nrows(), ns) {
        return Err(Error::InvalidDimension("precoder/combiner do not match the channel".into()));
    }
    let scaled = ComplexVector::from_iterator(
        ns,
        symbols.iter().zip(&allocation.powers).map(|(s, p)| s * p.sqrt()),
    );
    let sigma = allocation.noise.sqrt();
    let noise = ComplexVector::from_fn(channel.nrows(), |_, _| complex_gaussian(rng) * sigma);
    Ok(combiner.adjoint() * (channel * (precoder * scaled) + noise))
}

/// Large-array rate `Σ_{l=1}^{L_K} log₂(1 + p_l|ν̃_l|²/σ²)`.
pub fn asymptotic_rate(decomposition: &PathDecomposition, allocation: &PowerAllocation, noise: f64) -> Result<f64> {
    if allocation.len() != decomposition.len() {
        return Err(Error::LengthMismatch {
            what: "path powers",
            expected: decomposition.len(),
            actual: allocation.len(),
        });
    }
    Ok(rate_from_gains(&decomposition.power_gains(), &allocation.powers, noise))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transceiver::{equal_allocation, svd_transceiver, waterfilling};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_channel(rng: &mut ChaCha8Rng, r: usize, c: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(r, c, |_, _| complex_gaussian(rng))
    }

    #[test]
    fn zero_power_zero_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = random_channel(&mut rng, 4, 4);
        let t = svd_transceiver(&h, 4).unwrap();
        let a = equal_allocation(4, 0.0, 1.0);
        assert!(mutual_info_rate(&h, &t.precoder, &t.combiner, &a).unwrap().abs() < 1e-15);
    }

    #[test]
    fn scalar_channel() {
        let h = ComplexMatrix::from_element(1, 1, c64::new(0.6, -0.8));
        let one = ComplexMatrix::identity(1, 1);
        let a = PowerAllocation {
            powers: vec![3.0],
            total: 3.0,
            noise: 0.5,
            water_level: None,
        };
        let got = mutual_info_rate(&h, &one, &one, &a).unwrap();
        assert!((got - (1.0f64 + 3.0 / 0.5).log2()).abs() < 1e-12);
    }

    #[test]
    fn determinant_form_matches_sum_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let h = random_channel(&mut rng, 8, 8);
            let t = svd_transceiver(&h, 8).unwrap();
            let a = waterfilling(&t.power_gains(), 4.0, 0.3).unwrap();
            let det = mutual_info_rate(&h, &t.precoder, &t.combiner, &a).unwrap();
            let sum = rate_from_gains(&t.power_gains(), &a.powers, 0.3);
            assert!((det - sum).abs() < 1e-9, "{det} vs {sum}");
        }
    }

    #[test]
    fn singular_combiner() {
        let h = ComplexMatrix::identity(2, 2);
        let w = ComplexMatrix::zeros(2, 1);
        let a = equal_allocation(1, 1.0, 1.0);
        assert_eq!(
            mutual_info_rate(&h, &ComplexMatrix::identity(2, 1), &w, &a),
            Err(Error::SingularMatrix("combiner Gram matrix"))
        );
    }

    #[test]
    fn noiseless_transmission_is_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_channel(&mut rng, 6, 5);
        let t = svd_transceiver(&h, 4).unwrap();
        let a = PowerAllocation {
            powers: vec![1.0, 0.5, 2.0, 0.1],
            total: 3.6,
            noise: 0.0,
            water_level: None,
        };
        let s = ComplexVector::from_fn(4, |_, _| complex_gaussian(&mut rng));
        let z = transmit(&s, &h, &t.precoder, &t.combiner, &a, &mut rng).unwrap();
        for l in 0..4 {
            let want = s[l] * t.singular_values[l] * a.powers[l].sqrt();
            assert!((z[l] - want).norm() < 1e-9);
        }
    }

    #[test]
    fn silent_symbols_give_white_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = random_channel(&mut rng, 6, 6);
        let t = svd_transceiver(&h, 3).unwrap();
        let a = equal_allocation(3, 1.0, 0.25);
        let s = ComplexVector::zeros(3);
        let n = 20_000;
        let mut power = [0.0; 3];
        for _ in 0..n {
            let z = transmit(&s, &h, &t.precoder, &t.combiner, &a, &mut rng).unwrap();
            for l in 0..3 {
                power[l] += z[l].norm_sqr() / n as f64;
            }
        }
        // sample mean of an exponential(0.25): std error 0.25/√n
        for p in power {
            assert!((p - 0.25).abs() < 4.0 * 0.25 / (n as f64).sqrt(), "{p}");
        }
    }

    #[test]
    fn empirical_stream_snr() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_channel(&mut rng, 4, 4);
        let t = svd_transceiver(&h, 2).unwrap();
        let a = waterfilling(&t.power_gains(), 1.0, 0.2).unwrap();
        let s = ComplexVector::from_vec(vec![c64::new(1.0, 0.0); 2]);
        let n = 10_000;
        let mut noise_power = [0.0; 2];
        for _ in 0..n {
            let z = transmit(&s, &h, &t.precoder, &t.combiner, &a, &mut rng).unwrap();
            for l in 0..2 {
                let clean = t.singular_values[l] * a.powers[l].sqrt();
                noise_power[l] += (z[l] - clean).norm_sqr() / n as f64;
            }
        }
        for l in 0..2 {
            let snr = a.powers[l] * t.power_gains()[l] / noise_power[l];
            let want = a.powers[l] * t.power_gains()[l] / 0.2;
            assert!((snr / want - 1.0).abs() < 0.05);
        }
    }
}
