//! Reproducible random substreams.
//!
//! Every random quantity is drawn from a ChaCha8 stream keyed by the master
//! seed, a named stage and a group number, then positioned on the stream
//! selected by an index. Results therefore depend only on these four values,
//! not on execution order or thread count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Fbm,
    Noise,
    Masks,
    Source,
}

impl Stage {
    fn tag(self) -> u64 {
        match self {
            Stage::Fbm => 0x6662_6d00,
            Stage::Noise => 0x6e6f_6973,
            Stage::Masks => 0x6d61_736b,
            Stage::Source => 0x7372_6365,
        }
    }
}

pub fn substream(master: u64, stage: Stage, group: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master.to_le_bytes());
    key[8..16].copy_from_slice(&stage.tag().to_le_bytes());
    key[16..24].copy_from_slice(&group.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = substream(7, Stage::Fbm, 0, 3).random();
        let b: u64 = substream(7, Stage::Fbm, 0, 3).random();
        let c: u64 = substream(7, Stage::Fbm, 0, 4).random();
        let d: u64 = substream(7, Stage::Noise, 0, 3).random();
        let e: u64 = substream(8, Stage::Fbm, 0, 3).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
        assert_ne!(a, e);
    }
}
