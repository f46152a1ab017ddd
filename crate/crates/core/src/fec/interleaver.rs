//! Seeded pseudorandom bit interleaver.

use rand::seq::SliceRandom;

use crate::rng::{derive_seed, stream_rng};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaver {
    perm: Vec<u32>,
}

impl Interleaver {
    /// Fisher-Yates permutation of `0..len` from `seed`.
    pub fn new(len: usize, seed: u64) -> Self {
        let mut perm: Vec<u32> = (0..len as u32).collect();
        perm.shuffle(&mut stream_rng(
            derive_seed(seed, "interleaver"),
            len as u64,
        ));
        Self { perm }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn permutation(&self) -> &[u32] {
        &self.perm
    }

    /// `out[i] = input[perm[i]]`.
    pub fn interleave<T: Copy>(&self, input: &[T]) -> Vec<T> {
        assert_eq!(input.len(), self.perm.len());
        self.perm.iter().map(|&p| input[p as usize]).collect()
    }

    pub fn deinterleave<T: Copy + Default>(&self, input: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); input.len()];
        self.deinterleave_into(input, &mut out);
        out
    }

    pub fn deinterleave_into<T: Copy>(&self, input: &[T], out: &mut [T]) {
        assert_eq!(input.len(), self.perm.len());
        for (&p, &x) in self.perm.iter().zip(input) {
            out[p as usize] = x;
        }
    }
}

pub fn interleave(bits: &[u8], seed: u64) -> Vec<u8> {
    Interleaver::new(bits.len(), seed).interleave(bits)
}

pub fn deinterleave(bits: &[u8], seed: u64) -> Vec<u8> {
    Interleaver::new(bits.len(), seed).deinterleave(bits)
}
