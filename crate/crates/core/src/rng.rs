//! Seeded pseudo-random number generation.
//!
//! Every stochastic component in this crate draws from [`SplitMix64`], a
//! small-state counter-based generator (Vigna's SplitMix64). The algorithm is
//! fixed so that results are bit-identical across runs, platforms, and thread
//! counts:
//!
//! ```text
//! state += 0x9E3779B97F4A7C15
//! z = state
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! output = z ^ (z >> 31)
//! ```
//!
//! Independent streams are derived from `(seed, index)` with [`stream`]:
//! the initial state is `mix(mix(seed) ^ mix(index ^ STREAM_SALT))`, where
//! `mix` is the SplitMix64 finalizer above. Streams never share state, so
//! work items may run in any order (or in parallel) without changing any
//! drawn value.

/// Salt folded into the stream index so that `stream(s, 0)` differs from
/// `SplitMix64::new(s)`.
const STREAM_SALT: u64 = 0x5851_F42D_4C95_7F2D;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer: a bijective avalanche mix on 64 bits.
#[inline]
pub fn mix(value: u64) -> u64 {
    let mut z = value;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based 64-bit generator with one word of state.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix(self.state)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        const DEN: f64 = (1u64 << 53) as f64;
        ((self.next_u64() >> 11) as f64) / DEN
    }

    /// Uniform in `[lo, hi)`.
    #[inline]
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `[0, bound)` by rejection, unbiased.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let r = self.next_u64();
            if r >= threshold {
                return r % bound;
            }
        }
    }

    /// Standard normal draw via the Marsaglia polar method; the spare
    /// value is discarded.
    pub fn normal(&mut self) -> f64 {
        loop {
            let u = 2.0 * self.next_f64() - 1.0;
            let v = 2.0 * self.next_f64() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                return u * (-2.0 * s.ln() / s).sqrt();
            }
        }
    }

    /// Gamma(shape, 1) draw via the Marsaglia–Tsang squeeze method.
    ///
    /// For `shape >= 1`: with `d = shape - 1/3` and `c = 1/sqrt(9d)`, draw
    /// `x ~ N(0,1)`, form `v = (1 + c x)^3`, reject `v <= 0`, accept on the
    /// squeeze `u < 1 - 0.0331 x^4` or on `ln u < x^2/2 + d(1 - v + ln v)`.
    /// For `shape < 1` the boost `Gamma(shape+1) * u^(1/shape)` is applied.
    pub fn gamma(&mut self, shape: f64) -> f64 {
        assert!(shape > 0.0, "gamma shape must be positive");
        if shape < 1.0 {
            let boost = self.gamma(shape + 1.0);
            let u = loop {
                let u = self.next_f64();
                if u > 0.0 {
                    break u;
                }
            };
            return boost * u.powf(1.0 / shape);
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let x = self.normal();
            let t = 1.0 + c * x;
            if t <= 0.0 {
                continue;
            }
            let v = t * t * t;
            let u = self.next_f64();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 {
                return d * v;
            }
            if u > 0.0 && u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
                return d * v;
            }
        }
    }
}

/// Derive the `index`-th independent stream of a root seed.
pub fn stream(seed: u64, index: u64) -> SplitMix64 {
    SplitMix64::new(mix(mix(seed) ^ mix(index ^ STREAM_SALT)))
}

/// Two-level split: substream `minor` of stream `major` of `seed`.
/// Used for (simulation, source) stream pairs in the Monte Carlo engine.
pub fn substream(seed: u64, major: u64, minor: u64) -> SplitMix64 {
    let inner = mix(mix(seed) ^ mix(major ^ STREAM_SALT));
    SplitMix64::new(mix(inner ^ mix(minor.wrapping_add(GOLDEN_GAMMA))))
}
