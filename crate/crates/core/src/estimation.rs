//! Uplink pilot transmission and per-antenna MMSE channel estimation.

use core::f64::consts::PI;

#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use rand::Rng;

use crate::fading::complex_normal;
use crate::{CMatrix, Complex, Error, RMatrix};

/// Pilot resources shared by all users of a drop.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotConfig {
    /// Pilot length `τ_p` in symbols.
    pub length: usize,
    /// Pilot SNR `ρ_p`.
    pub snr: f64,
    /// `τ_p×K` matrix whose columns are the unit-norm pilots `φ_k`.
    pub pilots: CMatrix,
}

impl PilotConfig {
    /// Orthogonal DFT pilots for `num_ues` users.
    pub fn orthogonal(num_ues: usize, length: usize, snr: f64) -> Result<Self, Error> {
        if !(snr >= 0.0) {
            return Err(Error::InvalidParameter("pilot SNR must be non-negative"));
        }
        Ok(PilotConfig {
            length,
            snr,
            pilots: make_orthogonal_pilots(num_ues, length)?,
        })
    }

    pub fn num_ues(&self) -> usize {
        self.pilots.ncols()
    }

    /// Pilot processing gain `ρ_p·τ_p`.
    pub fn gain(&self) -> f64 {
        self.snr * self.length as f64
    }
}

/// Unit-norm discrete-Fourier pilot columns, pairwise orthogonal.
pub fn make_orthogonal_pilots(num_ues: usize, length: usize) -> Result<CMatrix, Error> {
    if length < num_ues {
        return Err(Error::PilotsTooShort {
            users: num_ues,
            pilots: length,
        });
    }
    let norm = 1.0 / (length as f64).sqrt();
    Ok(CMatrix::from_fn(length, num_ues, |t, k| {
        // Reduce the index product first so large τ keeps full phase accuracy.
        let idx = (t * k) % length;
        crate::polar(norm, -2.0 * PI * idx as f64 / length as f64)
    }))
}

/// True channel, its estimate and the estimation error for one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub h_true: CMatrix,
    pub h_est: CMatrix,
    /// `h_true − h_est`.
    pub h_err: CMatrix,
}

/// `M×τ_p` received pilot block `√(ρ_p τ_p)·Σ_k h_{m,k} φ_kᵀ + Z`.
pub fn received_pilots(h: &CMatrix, pilots: &PilotConfig, noise: &CMatrix) -> CMatrix {
    let amp = Complex::new(pilots.gain().sqrt(), 0.0);
    h * pilots.pilots.transpose() * amp + noise
}

/// Applies the MMSE estimator to received pilots. The denominator keeps the
/// general `Σ_k' β_{m,k'}|φ_kᴴφ_k'|²` form so contaminated pilots work too.
pub fn estimate_from_received(received: &CMatrix, pilots: &PilotConfig, beta: &RMatrix) -> CMatrix {
    let gain = pilots.gain();
    let gram = pilots.pilots.adjoint() * &pilots.pilots;
    let overlap = gram.map(|g| g.norm_sqr());
    // Column k of `despread` holds φ_kᴴ y_m for every antenna m.
    let despread = received * pilots.pilots.map(|p| p.conj());
    let mut est = despread;
    for m in 0..est.nrows() {
        for k in 0..est.ncols() {
            let mut denom = 1.0;
            for kp in 0..beta.ncols() {
                denom += gain * beta[(m, kp)] * overlap[(k, kp)];
            }
            est[(m, k)] *= gain.sqrt() * beta[(m, k)] / denom;
        }
    }
    est
}

/// MMSE estimation with an explicit `M×τ_p` pilot noise block.
pub fn mmse_estimate_with_noise(h: &CMatrix, pilots: &PilotConfig, beta: &RMatrix, noise: &CMatrix) -> ChannelSet {
    let received = received_pilots(h, pilots, noise);
    let h_est = estimate_from_received(&received, pilots, beta);
    let h_err = h - &h_est;
    ChannelSet {
        h_true: h.clone(),
        h_est,
        h_err,
    }
}

/// Simulates pilot transmission with unit-variance complex Gaussian noise and
/// estimates every link.
pub fn mmse_estimate<R: Rng + ?Sized>(h: &CMatrix, pilots: &PilotConfig, beta: &RMatrix, rng: &mut R) -> ChannelSet {
    let noise = CMatrix::from_fn(h.nrows(), pilots.length, |_, _| complex_normal(rng));
    mmse_estimate_with_noise(h, pilots, beta, &noise)
}

/// Closed-form second moments of the estimate and the error.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationStats {
    /// `M×K` mean-square of the estimate.
    pub gamma: RMatrix,
    /// `M×K` error variance `β − γ`.
    pub error_var: RMatrix,
}

/// `γ = ρ_pτ_p β² / (ρ_pτ_p Σ_k' β_k'|φ_kᴴφ_k'|² + 1)`, which under orthogonal
/// pilots is `ρ_pτ_p β²/(ρ_pτ_p β + 1)`.
pub fn estimation_stats(beta: &RMatrix, pilots: &PilotConfig) -> EstimationStats {
    let gain = pilots.gain();
    let gram = pilots.pilots.adjoint() * &pilots.pilots;
    let overlap = gram.map(|g| g.norm_sqr());
    let gamma = RMatrix::from_fn(beta.nrows(), beta.ncols(), |m, k| {
        let denom = 1.0 + (0..beta.ncols()).map(|kp| gain * beta[(m, kp)] * overlap[(k, kp)]).sum::<f64>();
        gain * beta[(m, k)] * beta[(m, k)] / denom
    });
    let error_var = beta - &gamma;
    EstimationStats { gamma, error_var }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pilots_orthonormal() {
        let p = make_orthogonal_pilots(8, 8).unwrap();
        let gram = p.adjoint() * &p;
        for a in 0..8 {
            for b in 0..8 {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((gram[(a, b)] - Complex::new(want, 0.0)).norm_sqr().sqrt() < 1e-12);
            }
        }
        let p = make_orthogonal_pilots(2, 4).unwrap();
        assert_eq!(p.shape(), (4, 2));
        for col in p.column_iter() {
            assert!((col.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn too_short_pilots_rejected() {
        assert_eq!(
            make_orthogonal_pilots(3, 2),
            Err(Error::PilotsTooShort { users: 3, pilots: 2 })
        );
    }

    #[test]
    fn noiseless_estimate_scales_channel() {
        // ρ_p τ_p = 99 with τ_p = 3.
        let pilots = PilotConfig::orthogonal(3, 3, 33.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = CMatrix::from_fn(4, 3, |_, _| complex_normal(&mut rng));
        let beta = RMatrix::from_element(4, 3, 1.0);
        let noise = CMatrix::zeros(4, 3);
        let set = mmse_estimate_with_noise(&h, &pilots, &beta, &noise);
        for (e, t) in set.h_est.iter().zip(h.iter()) {
            assert!((e - t * 0.99).norm_sqr().sqrt() < 1e-12);
        }
    }

    #[test]
    fn zero_pilot_power_gives_zero_estimate() {
        let pilots = PilotConfig::orthogonal(2, 2, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = CMatrix::from_fn(3, 2, |_, _| complex_normal(&mut rng));
        let beta = RMatrix::from_element(3, 2, 0.5);
        let set = mmse_estimate(&h, &pilots, &beta, &mut rng);
        assert!(set.h_est.iter().all(|v| *v == Complex::new(0.0, 0.0)));
        assert_eq!(set.h_err, h);
    }

    #[test]
    fn decomposition_is_exact() {
        let pilots = PilotConfig::orthogonal(3, 4, 10.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = CMatrix::from_fn(6, 3, |_, _| complex_normal(&mut rng));
        let beta = RMatrix::from_element(6, 3, 1.0);
        let set = mmse_estimate(&h, &pilots, &beta, &mut rng);
        let rebuilt = &set.h_est + &set.h_err;
        assert!((rebuilt - &set.h_true).camax() < 1e-15);
    }

    #[test]
    fn stats_closed_form() {
        let pilots = PilotConfig::orthogonal(1, 1, 99.0).unwrap();
        let beta = RMatrix::from_element(1, 1, 1.0);
        let s = estimation_stats(&beta, &pilots);
        assert!((s.gamma[(0, 0)] - 0.99).abs() < 1e-12);
        assert!((s.error_var[(0, 0)] - 0.01).abs() < 1e-12);

        let zero = estimation_stats(&RMatrix::zeros(1, 1), &pilots);
        assert_eq!(zero.gamma[(0, 0)], 0.0);

        let strong = PilotConfig::orthogonal(1, 1, 1e12).unwrap();
        let s = estimation_stats(&RMatrix::from_element(1, 1, 0.7), &strong);
        assert!((s.gamma[(0, 0)] - 0.7).abs() < 1e-9);
    }

    #[test]
    fn gamma_monotone_in_pilot_snr() {
        let beta = RMatrix::from_element(1, 2, 0.3);
        let mut prev = -1.0;
        for i in 0..50 {
            let snr = 0.1 * i as f64;
            let s = estimation_stats(&beta, &PilotConfig::orthogonal(2, 2, snr).unwrap());
            let g = s.gamma[(0, 0)];
            assert!(g >= prev);
            assert!(g <= 0.3);
            prev = g;
        }
    }
}
