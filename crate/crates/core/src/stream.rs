//! Unified streaming keystream source over all six designs.
//!
//! The 2-byte engines cannot half-fire; when a caller consumes an odd
//! number of octets the spare octet of the final pair is buffered here
//! so that chunked consumption still sees one continuous keystream.

use crate::error::Result;
use crate::hwsim::{CycleReport, DesignId, Engine};
use crate::parallel::ParallelStream;
use crate::rc4::SecretKey;

#[allow(clippy::large_enum_variant)] // one generator per stream, never collections of them
pub enum KeystreamGen {
    Single(Engine, Vec<u8>),
    Parallel(ParallelStream),
}

impl KeystreamGen {
    pub fn new(design: DesignId, key: &SecretKey) -> Result<Self> {
        if design.is_parallel() {
            Ok(KeystreamGen::Parallel(ParallelStream::new(design, key)?))
        } else {
            Ok(KeystreamGen::Single(Engine::new(design, key)?, Vec::new()))
        }
    }

    pub fn design(&self) -> DesignId {
        match self {
            KeystreamGen::Single(engine, _) => engine.design(),
            KeystreamGen::Parallel(stream) => stream.design(),
        }
    }

    /// Produces exactly `n` further octets of the continuous stream.
    pub fn take(&mut self, n: usize) -> Vec<u8> {
        match self {
            KeystreamGen::Single(engine, carry) => {
                let mut out = std::mem::take(carry);
                if out.len() < n {
                    let missing = n - out.len();
                    engine.fill(&mut out, missing);
                }
                *carry = out.split_off(n.min(out.len()));
                debug_assert_eq!(out.len(), n);
                out
            }
            KeystreamGen::Parallel(stream) => stream.take(n),
        }
    }

    /// XORs `data` in place against the next `data.len()` stream octets.
    pub fn apply(&mut self, data: &mut [u8]) {
        let ks = self.take(data.len());
        for (d, k) in data.iter_mut().zip(&ks) {
            *d ^= k;
        }
    }

    /// Measured cycle counts for the octets consumed so far.
    pub fn report(&self, bytes: u64) -> CycleReport {
        match self {
            KeystreamGen::Single(engine, _) => {
                let mut r = engine.report();
                r.bytes = bytes;
                r
            }
            KeystreamGen::Parallel(stream) => stream.report(bytes),
        }
    }
}
