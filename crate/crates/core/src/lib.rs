//! Cycle-accurate behavioral models of six RC4 hardware micro-architectures,
//! validated against a plain software RC4 oracle.
//!
//! The six designs:
//!
//! * design 1 — one byte per clock, separate KSA and PRGA units
//! * design 2 — design 1 with the KSA datapath reused in place for PRGA
//! * design 3 — two bytes per clock via two-step loop unrolling
//! * design 4 — design 3 with the dynamic KSA-PRGA reuse
//! * design 5 — four design-2 lanes behind a 32-bit bus, 4 bytes per clock
//! * design 6 — two design-4 lanes behind a 32-bit bus, 4 bytes per clock
//!
//! Designs 1–4 produce the canonical RC4 keystream. Designs 5 and 6 run
//! independent RC4 instances over fragments of the master key and are
//! *not* interoperable with the single-engine designs.

pub mod error;
pub mod hwsim;
pub mod netlink;
pub mod parallel;
pub mod rc4;
pub mod stream;
pub mod unroll;
pub mod verify;

pub use error::{Error, Result};
pub use hwsim::{cycles_formula, simulate, CycleReport, DesignId, Engine};
pub use parallel::{simulate_parallel, split_key, LaneConfig};
pub use rc4::{ksa_reference, prga_reference, xor_cipher, Rc4, SBox, SecretKey};
pub use stream::KeystreamGen;
