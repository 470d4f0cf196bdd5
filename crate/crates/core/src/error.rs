use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("key length {0} out of range, expected 1..=256 bytes")]
    KeyLength(usize),

    #[error("length mismatch: {left} bytes vs {right} bytes")]
    LengthMismatch { left: usize, right: usize },

    #[error("design {0} is lane-parallel; use the parallel engine")]
    ParallelDesign(u8),

    #[error("design {0} is a single engine; use the hwsim engine")]
    SingleEngineDesign(u8),

    #[error("{key_len}-byte key cannot be split across {lanes} lanes")]
    KeyTooShortForLanes { key_len: usize, lanes: usize },

    #[error("mode switch requested before the key schedule completed")]
    KsaIncomplete,

    #[error("unknown design id {0}, expected 1..=6")]
    UnknownDesign(u8),
}

pub type Result<T> = std::result::Result<T, Error>;
