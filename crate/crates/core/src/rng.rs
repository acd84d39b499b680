//! Counter-based random numbers (Philox4x32-10).
//!
//! Every random draw is a pure function of `(seed, stream, event, block)`, so
//! event `i` of stream `j` sees the same numbers no matter which worker
//! simulates it or in what order.

const MUL0: u32 = 0xD251_1F53;
const MUL1: u32 = 0xCD9E_8D57;
const WEYL0: u32 = 0x9E37_79B9;
const WEYL1: u32 = 0xBB67_AE85;
const ROUNDS: usize = 10;

#[inline(always)]
fn mulhilo(a: u32, b: u32) -> (u32, u32) {
    let p = u64::from(a) * u64::from(b);
    ((p >> 32) as u32, p as u32)
}

/// Keyed Philox4x32-10 bijection on 128-bit counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterRng {
    key: [u32; 2],
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng {
            key: [seed as u32, (seed >> 32) as u32],
        }
    }

    pub fn from_key(key: [u32; 2]) -> Self {
        CounterRng { key }
    }

    #[inline]
    pub fn block(&self, ctr: [u32; 4]) -> [u32; 4] {
        let [mut k0, mut k1] = self.key;
        let mut c = ctr;
        for round in 0..ROUNDS {
            let (hi0, lo0) = mulhilo(MUL0, c[0]);
            let (hi1, lo1) = mulhilo(MUL1, c[2]);
            c = [hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0];
            if round + 1 < ROUNDS {
                k0 = k0.wrapping_add(WEYL0);
                k1 = k1.wrapping_add(WEYL1);
            }
        }
        c
    }

    /// Draw sequence for event `index` of `stream`.
    #[inline]
    pub fn event(&self, stream: u32, index: u64) -> Draws {
        Draws {
            rng: *self,
            ctr: [index as u32, (index >> 32) as u32, stream, 0],
            buf: [0; 4],
            pos: 4,
        }
    }

    /// Derives an independent generator for a named sub-task.
    pub fn split(&self, tag: u64) -> CounterRng {
        let out = self.block([tag as u32, (tag >> 32) as u32, u32::MAX, u32::MAX]);
        CounterRng { key: [out[0], out[1]] }
    }
}

/// Uniforms for one event, produced lazily from consecutive Philox blocks.
#[derive(Debug, Clone)]
pub struct Draws {
    rng: CounterRng,
    ctr: [u32; 4],
    buf: [u32; 4],
    pos: usize,
}

impl Draws {
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        if self.pos >= 4 {
            self.buf = self.rng.block(self.ctr);
            self.ctr[3] = self.ctr[3].wrapping_add(1);
            self.pos = 0;
        }
        let v = (u64::from(self.buf[self.pos + 1]) << 32) | u64::from(self.buf[self.pos]);
        self.pos += 2;
        v
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Known-answer vectors from the Random123 distribution.
    #[test]
    fn philox_known_answers() {
        let zero = CounterRng::from_key([0, 0]).block([0, 0, 0, 0]);
        assert_eq!(zero, [0x6627_e8d5, 0xe169_c58d, 0xbc57_ac4c, 0x9b00_dbd8]);
        let ones = CounterRng::from_key([u32::MAX; 2]).block([u32::MAX; 4]);
        assert_eq!(ones, [0x408f_276d, 0x41c8_3b0e, 0xa20b_c7c6, 0x6d54_51fd]);
        let pi = CounterRng::from_key([0xa409_3822, 0x299f_31d0]).block([
            0x243f_6a88,
            0x85a3_08d3,
            0x1319_8a2e,
            0x0370_7344,
        ]);
        assert_eq!(pi, [0xd16c_fe09, 0x94fd_cceb, 0x5001_e420, 0x2412_6ea1]);
    }

    #[test]
    fn events_are_addressable() {
        let rng = CounterRng::new(42);
        let mut a = rng.event(3, 1_000_000);
        let mut b = rng.event(3, 1_000_000);
        let xs: Vec<f64> = (0..5).map(|_| a.next_f64()).collect();
        let ys: Vec<f64> = (0..5).map(|_| b.next_f64()).collect();
        assert_eq!(xs, ys);
        assert_ne!(rng.event(3, 1).next_u64(), rng.event(4, 1).next_u64());
        assert_ne!(rng.event(3, 1).next_u64(), rng.event(3, 2).next_u64());
        assert_ne!(rng.split(1), rng.split(2));
    }

    #[test]
    fn uniform_moments() {
        let rng = CounterRng::new(7);
        let n = 200_000u64;
        let (mut s, mut s2) = (0.0, 0.0);
        for i in 0..n {
            let u = rng.event(0, i).next_f64();
            assert!((0.0..1.0).contains(&u));
            s += u;
            s2 += u * u;
        }
        let mean = s / n as f64;
        let var = s2 / n as f64 - mean * mean;
        // 5σ on the mean, generous on the variance
        assert!((mean - 0.5).abs() < 5.0 * (1.0 / 12.0 / n as f64).sqrt());
        assert!((var - 1.0 / 12.0).abs() < 2e-3);
    }
}
