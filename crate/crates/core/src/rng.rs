//! Deterministic random-number streams.
//!
//! Every stream is a PCG64 generator (`pcg_setseq_128` with the XSL-RR
//! 128/64 output function, as in the reference PCG library) created with
//! `pcg64(state = seed, stream = id)`, where `seed` is the 64-bit run seed
//! zero-extended to 128 bits and `id` selects one of the fixed streams
//! below. A run owns two streams:
//!
//! * [`RngStream::WORLD`] (id 0): initial node positions, initial drone
//!   positions, then every ground-node step.
//! * [`RngStream::DRONES`] (id 1): every draw made on behalf of drones
//!   (separation jitter, destination coin flips, headings).
//!
//! Derived values:
//!
//! * `uniform01 = (next_u64 >> 11) * 2^-53`, in `[0, 1)`.
//! * `uniform(a, b) = a + (b - a) * uniform01`.
//! * `heading = 2*pi * uniform01`.
//! * `coin = next_u64 >> 63`.

use rand_core::Rng;
use rand_pcg::Pcg64;

/// Single-owner deterministic generator.
#[derive(Debug, Clone)]
pub struct RngStream {
    inner: Pcg64,
}

impl RngStream {
    pub const WORLD: u64 = 0;
    pub const DRONES: u64 = 1;

    pub fn new(seed: u64, stream: u64) -> Self {
        Self {
            inner: Pcg64::new(u128::from(seed), u128::from(stream)),
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn uniform01(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in `[lo, hi)`.
    #[inline]
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform01()
    }

    /// Uniform heading in `[0, 2*pi)`.
    #[inline]
    pub fn heading(&mut self) -> f64 {
        core::f64::consts::TAU * self.uniform01()
    }

    /// Fair coin: `0` or `1`.
    #[inline]
    pub fn coin(&mut self) -> u8 {
        (self.next_u64() >> 63) as u8
    }
}
