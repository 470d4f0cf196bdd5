//! Reference software RC4: the golden oracle every hardware design is
//! checked against.

use crate::error::{Error, Result};

/// A validated secret key, 1 to 256 bytes.
///
/// Key bytes beyond the key length wrap via `i mod l`; the key is never
/// materialized as a 256-byte array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretKey {
    bytes: Vec<u8>,
}

impl SecretKey {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Result<Self> {
        let bytes = bytes.into();
        if bytes.is_empty() || bytes.len() > 256 {
            return Err(Error::KeyLength(bytes.len()));
        }
        Ok(SecretKey { bytes })
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length is always in 1..=256
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Key byte for schedule index `i`, with modular wrap-around.
    pub fn byte(&self, i: u8) -> u8 {
        self.bytes[i as usize % self.bytes.len()]
    }
}

/// The 256-entry byte permutation shared by KSA and PRGA.
#[derive(Clone, PartialEq, Eq)]
pub struct SBox {
    entries: [u8; 256],
}

impl SBox {
    /// The identity permutation, S[i] = i.
    pub fn identity() -> Self {
        let mut entries = [0u8; 256];
        for (i, e) in entries.iter_mut().enumerate() {
            *e = i as u8;
        }
        SBox { entries }
    }

    pub fn from_entries(entries: [u8; 256]) -> Self {
        SBox { entries }
    }

    pub fn get(&self, idx: u8) -> u8 {
        self.entries[idx as usize]
    }

    pub fn set(&mut self, idx: u8, value: u8) {
        self.entries[idx as usize] = value;
    }

    pub fn swap(&mut self, a: u8, b: u8) {
        self.entries.swap(a as usize, b as usize);
    }

    pub fn as_bytes(&self) -> &[u8; 256] {
        &self.entries
    }

    /// True when every value 0..=255 occurs exactly once.
    pub fn is_permutation(&self) -> bool {
        let mut seen = [false; 256];
        for &e in &self.entries {
            if seen[e as usize] {
                return false;
            }
            seen[e as usize] = true;
        }
        true
    }
}

impl std::fmt::Debug for SBox {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SBox({:02x?}...)", &self.entries[..8])
    }
}

/// One PRGA iteration: the indices it used and the byte it produced.
/// `z` is `S[t]` on the post-swap S-box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeystreamStep {
    pub i: u8,
    pub j: u8,
    pub t: u8,
    pub z: u8,
}

/// Key schedule: identity init, then 256 swaps driven by the key.
pub fn ksa_reference(key: &SecretKey) -> SBox {
    let mut sbox = SBox::identity();
    let mut j: u8 = 0;
    for i in 0..=255u8 {
        j = j.wrapping_add(sbox.get(i)).wrapping_add(key.byte(i));
        sbox.swap(i, j);
    }
    sbox
}

/// Generates `n` keystream bytes, evolving `sbox` in place. i and j start
/// at 0; i is incremented before use.
pub fn prga_reference(sbox: &mut SBox, n: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(n);
    let mut i: u8 = 0;
    let mut j: u8 = 0;
    for _ in 0..n {
        i = i.wrapping_add(1);
        j = j.wrapping_add(sbox.get(i));
        sbox.swap(i, j);
        let t = sbox.get(i).wrapping_add(sbox.get(j));
        out.push(sbox.get(t));
    }
    out
}

/// Element-wise XOR of equal-length buffers.
pub fn xor_cipher(data: &[u8], keystream: &[u8]) -> Result<Vec<u8>> {
    if data.len() != keystream.len() {
        return Err(Error::LengthMismatch {
            left: data.len(),
            right: keystream.len(),
        });
    }
    Ok(data.iter().zip(keystream).map(|(d, k)| d ^ k).collect())
}

/// A streaming reference RC4 instance (key schedule already applied).
#[derive(Debug, Clone)]
pub struct Rc4 {
    sbox: SBox,
    i: u8,
    j: u8,
}

impl Rc4 {
    pub fn new(key: &SecretKey) -> Self {
        Rc4 {
            sbox: ksa_reference(key),
            i: 0,
            j: 0,
        }
    }

    pub fn next_step(&mut self) -> KeystreamStep {
        self.i = self.i.wrapping_add(1);
        self.j = self.j.wrapping_add(self.sbox.get(self.i));
        self.sbox.swap(self.i, self.j);
        let t = self.sbox.get(self.i).wrapping_add(self.sbox.get(self.j));
        KeystreamStep {
            i: self.i,
            j: self.j,
            t,
            z: self.sbox.get(t),
        }
    }

    pub fn next_byte(&mut self) -> u8 {
        self.next_step().z
    }

    pub fn keystream(&mut self, n: usize) -> Vec<u8> {
        (0..n).map(|_| self.next_byte()).collect()
    }

    pub fn sbox(&self) -> &SBox {
        &self.sbox
    }
}

/// Convenience: KSA + n bytes of PRGA.
pub fn keystream(key: &SecretKey, n: usize) -> Vec<u8> {
    let mut sbox = ksa_reference(key);
    prga_reference(&mut sbox, n)
}
