//! Random draw sources and seed mixing.
//!
//! Every realization owns two independent streams derived from its seed: one
//! for defector placement and pair selection, one for eviction choices. Keeping
//! them apart means the sequence of selected pairs does not depend on the
//! strategy or the attention capacity.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// A source of uniform integer draws.
///
/// The engine only ever asks for uniform integers, so alternative sources
/// (for example a scripted source that walks every branch) can drive it.
pub trait DrawSource {
    /// Uniform integer in `0..bound`. `bound` must be nonzero.
    fn below(&mut self, bound: u32) -> u32;

    /// Fair coin.
    fn coin(&mut self) -> bool {
        self.below(2) == 1
    }
}

impl<T: DrawSource + ?Sized> DrawSource for &mut T {
    fn below(&mut self, bound: u32) -> u32 {
        (**self).below(bound)
    }

    fn coin(&mut self) -> bool {
        (**self).coin()
    }
}

const SELECTION_STREAM: u64 = 1;
const EVICTION_STREAM: u64 = 2;

/// Xoshiro256++ stream; output is identical on every platform.
#[derive(Debug, Clone)]
pub struct Stream(Xoshiro256PlusPlus);

impl Stream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Stream(Xoshiro256PlusPlus::seed_from_u64(mix_words(seed, &[stream])))
    }

    /// Pair selection (and defector placement) stream for a realization seed.
    pub fn selection(seed: u64) -> Self {
        Stream::new(seed, SELECTION_STREAM)
    }

    /// Eviction stream for a realization seed.
    pub fn eviction(seed: u64) -> Self {
        Stream::new(seed, EVICTION_STREAM)
    }
}

impl DrawSource for Stream {
    /// Lemire's multiply-shift with rejection, on the high 32 bits.
    #[inline]
    fn below(&mut self, bound: u32) -> u32 {
        debug_assert!(bound > 0);
        let bound = bound as u64;
        let mut m = (self.0.next_u64() >> 32) * bound;
        if (m as u32 as u64) < bound {
            let threshold = (bound as u32).wrapping_neg() as u64 % bound;
            while (m as u32 as u64) < threshold {
                m = (self.0.next_u64() >> 32) * bound;
            }
        }
        (m >> 32) as u32
    }

    #[inline]
    fn coin(&mut self) -> bool {
        self.0.next_u64() >> 63 == 1
    }
}


const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut x: u64) -> u64 {
    x ^= x >> 30;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Folds `words` into `master` one SplitMix64 round at a time.
pub fn mix_words(master: u64, words: &[u64]) -> u64 {
    words.iter().fold(mix64(master.wrapping_add(GOLDEN)), |h, &w| {
        mix64(h ^ mix64(w.wrapping_add(GOLDEN)))
    })
}
