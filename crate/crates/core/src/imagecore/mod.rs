//! Pixel-level primitives shared by the corruption kernels.
//!
//! Everything here is a pure function of its arguments. Randomness enters
//! only through an explicit [`DeterministicRng`].

mod buffer;
mod color;
mod kernel;
mod plasma;
mod resize;
mod rng;

pub use buffer::{ImageBuffer, Plane};
pub use color::{hsv_to_rgb, map_hsv, rgb_hsv_roundtrip, rgb_to_hsv};
pub(crate) use kernel::convolve_unchecked;
pub use kernel::{
    convolve, convolve_plane, gaussian_blur, gaussian_blur_plane, gaussian_taps, reflect_index, Kernel2D,
};
pub use plasma::plasma_fractal;
pub use resize::{resize, resize_plane_bilinear, sample_bilinear_reflect, ResizeMode};
pub use rng::{derive_seed, fnv1a64, splitmix64_mix, DeterministicRng, Fnv1a};

/// Peak signal-to-noise ratio in dB for unit-range images.
pub fn psnr(a: &ImageBuffer, b: &ImageBuffer) -> f64 {
    assert_eq!(a.dims(), b.dims(), "psnr needs equal dimensions");
    let mse = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| (f64::from(x) - f64::from(y)).powi(2))
        .sum::<f64>()
        / a.data().len() as f64;
    if mse == 0.0 {
        f64::INFINITY
    } else {
        -10.0 * mse.log10()
    }
}
