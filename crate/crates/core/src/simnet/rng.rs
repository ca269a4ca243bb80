//! The simulation's random stream: xorshift64*.
//!
//! The generator is pinned by its update equations so any implementation,
//! in any language, reproduces the identical stream for a given seed:
//!
//! ```text
//! state ^= state >> 12
//! state ^= state << 25
//! state ^= state >> 27
//! output = state * 0x2545F4914F6CDD1D   (wrapping 64-bit multiply)
//! ```
//!
//! A zero seed is remapped to `0x9E3779B97F4A7C15` because the xorshift
//! state must be non-zero.

#[derive(Clone, Debug)]
pub struct SimRng {
    state: u64,
}

impl SimRng {
    pub fn new(seed: u64) -> SimRng {
        SimRng {
            state: if seed == 0 { 0x9E3779B97F4A7C15 } else { seed },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state ^= self.state >> 12;
        self.state ^= self.state << 25;
        self.state ^= self.state >> 27;
        self.state.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Uniform draw in `[lo, hi]` by modulo reduction. The slight modulo
    /// bias is irrelevant here; bit-identical streams are what matters.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        lo + self.next_u64() % (hi - lo + 1)
    }

    /// Bernoulli draw: true with probability `p`.
    pub fn chance(&mut self, p: f64) -> bool {
        let draw = self.next_u64();
        if p <= 0.0 {
            return false;
        }
        if p >= 1.0 {
            return true;
        }
        (draw as f64) < p * (u64::MAX as f64)
    }
}
