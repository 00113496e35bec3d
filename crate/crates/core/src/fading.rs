//! Large-scale fading (path loss, split shadowing, K-factor), local-scattering
//! spatial correlation and correlated Rician small-scale fading.

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DVector;
#[allow(unused_imports)] // shadowed by inherent methods whenever std is linked
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::geometry::{NetworkDrop, SimGeometry};
use crate::{CMatrix, Complex, RMatrix};

/// Large-scale propagation parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct LargeScaleParams {
    /// Median channel gain at the reference distance, dB.
    pub g0_db: f64,
    /// Path-loss exponent.
    pub pathloss_exponent: f64,
    /// Reference distance `d0`, meters.
    pub reference_distance: f64,
    /// Shadowing standard deviation, dB.
    pub shadowing_std_db: f64,
    /// Angular standard deviation of the Gaussian angular power spectrum, radians.
    pub angular_std: f64,
}

impl Default for LargeScaleParams {
    fn default() -> Self {
        LargeScaleParams {
            g0_db: -43.3,
            pathloss_exponent: 2.0,
            reference_distance: 1.0,
            shadowing_std_db: 4.0,
            angular_std: 20.0_f64.to_radians(),
        }
    }
}

/// `g0 − 10·γ·log10(d/d0)`, with `d` clamped below at `d0`.
pub fn pathloss_db(distance: f64, g0_db: f64, exponent: f64, reference_distance: f64) -> f64 {
    let d = distance.max(reference_distance);
    g0_db - 10.0 * exponent * (d / reference_distance).log10()
}

/// Distance-dependent Rician K-factor in dB: `13 − 0.03·d` with `d` in meters.
pub fn kfactor_db(distance: f64) -> f64 {
    13.0 - 0.03 * distance
}

pub fn db_to_linear(db: f64) -> f64 {
    10.0.powf(db / 10.0)
}

/// Shadowing draws for one drop.
#[derive(Debug, Clone, PartialEq)]
pub struct Shadowing {
    /// One standard normal per AP.
    pub ap: Vec<f64>,
    /// One standard normal per UE.
    pub ue: Vec<f64>,
    /// `L×K` link shadowing in dB.
    pub db: RMatrix,
}

/// Split shadowing `(σ/√2)(w_l^AP + w_k^UE)`; each link has variance `σ²`.
pub fn shadowing_db<R: Rng + ?Sized>(drop: &NetworkDrop, sigma_db: f64, rng: &mut R) -> Shadowing {
    let ap: Vec<f64> = (0..drop.num_aps()).map(|_| rng.sample(StandardNormal)).collect();
    let ue: Vec<f64> = (0..drop.num_ues()).map(|_| rng.sample(StandardNormal)).collect();
    let scale = sigma_db / SQRT_2;
    let db = RMatrix::from_fn(ap.len(), ue.len(), |l, k| scale * (ap[l] + ue[k]));
    Shadowing { ap, ue, db }
}

/// Local-scattering correlation of an `N`-element ULA under a Gaussian angular
/// power spectrum around `azimuth` with standard deviation `angular_std`.
///
/// The closed form can be slightly indefinite at machine precision; negative
/// eigenvalues are clipped and the diagonal is renormalized to one.
pub fn correlation_matrix(azimuth: f64, angular_std: f64, n: usize, spacing: f64) -> CMatrix {
    let raw = CMatrix::from_fn(n, n, |a, b| {
        let lag = 2.0 * PI * spacing * (a as f64 - b as f64);
        let phase = crate::polar(1.0, lag * azimuth.sin());
        let spread = lag * azimuth.cos() * angular_std;
        phase * (-0.5 * spread * spread).exp()
    });
    if n == 1 {
        return raw;
    }
    let eig = SymmetricEigen::new(raw.clone());
    if eig.eigenvalues.iter().all(|&v| v >= 0.0) {
        return raw;
    }
    let clipped = eig.eigenvalues.map(|v| v.max(0.0));
    let rebuilt = hermitian_from_eigen(&eig.eigenvectors, &clipped);
    let scale = DVector::from_fn(n, |i, _| 1.0 / rebuilt[(i, i)].re.max(f64::MIN_POSITIVE).sqrt());
    CMatrix::from_fn(n, n, |a, b| rebuilt[(a, b)] * (scale[a] * scale[b]))
}

/// Hermitian PSD square root via eigendecomposition.
pub fn psd_sqrt(matrix: &CMatrix) -> CMatrix {
    if matrix.nrows() == 1 {
        return CMatrix::from_element(1, 1, Complex::new(matrix[(0, 0)].re.max(0.0).sqrt(), 0.0));
    }
    let eig = SymmetricEigen::new(matrix.clone());
    let roots = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    hermitian_from_eigen(&eig.eigenvectors, &roots)
}

fn hermitian_from_eigen(vectors: &CMatrix, values: &DVector<f64>) -> CMatrix {
    let n = vectors.nrows();
    let mut scaled = vectors.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= Complex::new(values[j], 0.0);
    }
    let out = scaled * vectors.adjoint();
    // Symmetrize away rounding.
    CMatrix::from_fn(n, n, |a, b| (out[(a, b)] + out[(b, a)].conj()) * 0.5)
}

/// Per-link statistics of one drop.
#[derive(Debug, Clone, PartialEq)]
pub struct LargeScaleModel {
    pub antennas_per_ap: usize,
    /// `M×K` gains in dB, identical across the antennas of one AP.
    pub beta_db: RMatrix,
    /// `M×K` linear gains, `10^(beta_db/10)`.
    pub beta_linear: RMatrix,
    /// `L×K` linear Rician K-factors.
    pub kfactor_linear: RMatrix,
    /// Per-(AP, UE) spatial correlation, indexed `l·K + k`.
    pub correlation: Vec<CMatrix>,
    /// Hermitian square roots of `correlation`, same indexing.
    pub correlation_sqrt: Vec<CMatrix>,
    pub shadow_ap: Vec<f64>,
    pub shadow_ue: Vec<f64>,
}

impl LargeScaleModel {
    pub fn num_aps(&self) -> usize {
        self.kfactor_linear.nrows()
    }

    pub fn num_ues(&self) -> usize {
        self.kfactor_linear.ncols()
    }

    pub fn link_index(&self, l: usize, k: usize) -> usize {
        l * self.num_ues() + k
    }
}

/// Builds gains, K-factors and correlation matrices for a drop.
pub fn build_large_scale<R: Rng + ?Sized>(
    geometry: &SimGeometry,
    drop: &NetworkDrop,
    params: &LargeScaleParams,
    rng: &mut R,
) -> LargeScaleModel {
    let num_aps = drop.num_aps();
    let num_ues = drop.num_ues();
    let n = geometry.antennas_per_ap;
    let shadow = shadowing_db(drop, params.shadowing_std_db, rng);

    let link_db = RMatrix::from_fn(num_aps, num_ues, |l, k| {
        pathloss_db(
            drop.distances[(l, k)],
            params.g0_db,
            params.pathloss_exponent,
            params.reference_distance,
        ) + shadow.db[(l, k)]
    });
    let beta_db = RMatrix::from_fn(num_aps * n, num_ues, |m, k| link_db[(m / n, k)]);
    let beta_linear = beta_db.map(db_to_linear);
    let kfactor_linear =
        RMatrix::from_fn(num_aps, num_ues, |l, k| db_to_linear(kfactor_db(drop.distances[(l, k)])));

    let mut correlation = Vec::with_capacity(num_aps * num_ues);
    let mut correlation_sqrt = Vec::with_capacity(num_aps * num_ues);
    for l in 0..num_aps {
        for k in 0..num_ues {
            let r = correlation_matrix(
                drop.azimuth(l, k),
                params.angular_std,
                n,
                geometry.antenna_spacing,
            );
            correlation_sqrt.push(psd_sqrt(&r));
            correlation.push(r);
        }
    }

    LargeScaleModel {
        antennas_per_ap: n,
        beta_db,
        beta_linear,
        kfactor_linear,
        correlation,
        correlation_sqrt,
        shadow_ap: shadow.ap,
        shadow_ue: shadow.ue,
    }
}

/// Circularly-symmetric complex Gaussian with unit variance.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex<f64> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re / SQRT_2, im / SQRT_2)
}

/// Unit-modulus plane-wave response of AP `l` toward UE `k`, including the
/// common propagation phase `−2π·d/λ`.
pub fn los_response(geometry: &SimGeometry, drop: &NetworkDrop, l: usize, k: usize) -> Vec<Complex<f64>> {
    let azimuth = drop.azimuth(l, k);
    let common = -2.0 * PI * drop.distances[(l, k)] / geometry.wavelength;
    (0..geometry.antennas_per_ap)
        .map(|i| {
            let element = 2.0 * PI * geometry.antenna_spacing * i as f64 * azimuth.sin();
            crate::polar(1.0, element + common)
        })
        .collect()
}

/// Rician LOS and NLOS amplitude weights, normalized so that power sums to one.
pub fn rician_weights(kfactor: f64) -> (f64, f64) {
    if kfactor.is_infinite() {
        return (1.0, 0.0);
    }
    ((kfactor / (1.0 + kfactor)).sqrt(), (1.0 / (1.0 + kfactor)).sqrt())
}

/// Draws one `M×K` channel realization
/// `h = √β·(√(κ/(1+κ))·a_LOS + √(1/(1+κ))·R^{1/2} z)`.
pub fn realize_channel<R: Rng + ?Sized>(
    geometry: &SimGeometry,
    model: &LargeScaleModel,
    drop: &NetworkDrop,
    rng: &mut R,
) -> CMatrix {
    let n = model.antennas_per_ap;
    let num_ues = model.num_ues();
    let mut h = CMatrix::zeros(model.num_aps() * n, num_ues);
    let mut z = DVectorC::zeros(n);
    for l in 0..model.num_aps() {
        for k in 0..num_ues {
            let (los_w, nlos_w) = rician_weights(model.kfactor_linear[(l, k)]);
            let los = los_response(geometry, drop, l, k);
            for zi in z.iter_mut() {
                *zi = complex_normal(rng);
            }
            let nlos = &model.correlation_sqrt[model.link_index(l, k)] * &z;
            for i in 0..n {
                let m = l * n + i;
                let amp = model.beta_linear[(m, k)].sqrt();
                h[(m, k)] = (los[i] * los_w + nlos[i] * nlos_w) * amp;
            }
        }
    }
    h
}

type DVectorC = DVector<Complex<f64>>;
