//! Lane-parallel composition: design 5 (four 1-byte-per-clock engines)
//! and design 6 (two 2-byte-per-clock engines) behind a 32-bit bus.
//!
//! The composite keystream is four independent RC4 instances keyed with
//! contiguous fragments of the master key. It is *not* canonical RC4 and
//! does not interoperate with ciphertexts from designs 1-4. The fixed
//! interleave contract: plaintext byte k is covered by lane k mod 4 on
//! design 5, and by lane (k mod 4) div 2, byte (k mod 2) of that lane's
//! pair, on design 6. Both endpoints must share this constant.
//!
//! Fragmenting a secret key produces sub-keys as short as one byte,
//! which is cryptographically weak; this module models the architecture,
//! it does not endorse it.

use crate::error::{Error, Result};
use crate::hwsim::{CycleReport, DesignId, Engine};
use crate::rc4::SecretKey;

/// Configuration for one lane-parallel run.
#[derive(Debug, Clone)]
pub struct LaneConfig {
    pub lanes: usize,
    pub sub_keys: Vec<SecretKey>,
    pub engine_design: DesignId,
    pub bus_width_bits: u32,
}

impl LaneConfig {
    pub fn for_design(design: DesignId, key: &SecretKey) -> Result<Self> {
        let (lanes, engine_design) = match design {
            DesignId::D5 => (4, DesignId::D2),
            DesignId::D6 => (2, DesignId::D4),
            other => return Err(Error::SingleEngineDesign(other.number())),
        };
        Ok(LaneConfig {
            lanes,
            sub_keys: split_key(key, lanes)?,
            engine_design,
            bus_width_bits: 32,
        })
    }
}

/// Contiguous partition of the master key into `lanes` sub-keys; the
/// first `l mod lanes` sub-keys carry one extra byte.
pub fn split_key(key: &SecretKey, lanes: usize) -> Result<Vec<SecretKey>> {
    let l = key.len();
    if l < lanes {
        return Err(Error::KeyTooShortForLanes {
            key_len: l,
            lanes,
        });
    }
    let base = l / lanes;
    let extra = l % lanes;
    let mut out = Vec::with_capacity(lanes);
    let mut offset = 0;
    for lane in 0..lanes {
        let len = base + usize::from(lane < extra);
        let sub = SecretKey::new(key.as_bytes()[offset..offset + len].to_vec())?;
        out.push(sub);
        offset += len;
    }
    Ok(out)
}

/// One 32-bit transfer: four keystream octets and the lane each came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BusWord {
    pub octets: [u8; 4],
    pub source_lanes: [u8; 4],
}

/// Packs four position-ordered lane octets into a bus word. Octet index
/// equals keystream position mod 4.
pub fn pack_bus_word(design: DesignId, octets: [u8; 4]) -> Result<BusWord> {
    let source_lanes = match design {
        DesignId::D5 => [0, 1, 2, 3],
        DesignId::D6 => [0, 0, 1, 1],
        other => return Err(Error::SingleEngineDesign(other.number())),
    };
    Ok(BusWord {
        octets,
        source_lanes,
    })
}

/// Streaming lane-parallel keystream generator. Lanes run in lockstep;
/// every steady-state clock yields one bus word of four octets.
pub struct ParallelStream {
    design: DesignId,
    config: LaneConfig,
    lanes: Vec<Engine>,
    lane_order: Vec<usize>,
    buffer: Vec<u8>,
    buffer_pos: usize,
    words: u64,
    stalls: u64,
}

impl ParallelStream {
    pub fn new(design: DesignId, key: &SecretKey) -> Result<Self> {
        let config = LaneConfig::for_design(design, key)?;
        let order = (0..config.lanes).collect::<Vec<_>>();
        Self::with_lane_order(design, key, &order)
    }

    /// Same stream, lanes evaluated in `lane_order`. Output must not
    /// depend on the order; tests permute it.
    pub fn with_lane_order(design: DesignId, key: &SecretKey, lane_order: &[usize]) -> Result<Self> {
        let config = LaneConfig::for_design(design, key)?;
        assert_eq!(lane_order.len(), config.lanes, "lane order must cover every lane");
        let lanes = config
            .sub_keys
            .iter()
            .map(|sub| Engine::new(config.engine_design, sub))
            .collect::<Result<Vec<_>>>()?;
        Ok(ParallelStream {
            design,
            config,
            lanes,
            lane_order: lane_order.to_vec(),
            buffer: Vec::new(),
            buffer_pos: 0,
            words: 0,
            stalls: 0,
        })
    }

    pub fn config(&self) -> &LaneConfig {
        &self.config
    }

    pub fn design(&self) -> DesignId {
        self.design
    }

    pub fn stalls(&self) -> u64 {
        self.stalls
    }

    /// Advances every lane one clock and packs the resulting word.
    pub fn next_word(&mut self) -> BusWord {
        let per_clock = self.config.engine_design.bytes_per_clock() as usize;
        let mut lane_bytes: Vec<Vec<u8>> = vec![Vec::new(); self.config.lanes];
        for &lane in &self.lane_order.clone() {
            self.lanes[lane].fill(&mut lane_bytes[lane], per_clock);
        }
        if lane_bytes.iter().any(|b| b.len() != per_clock) {
            // lockstep lanes cannot starve; a short lane would stall the bus
            self.stalls += 1;
        }
        let mut octets = [0u8; 4];
        for (pos, octet) in octets.iter_mut().enumerate() {
            let (lane, byte) = match self.design {
                DesignId::D5 => (pos, 0),
                DesignId::D6 => (pos / 2, pos % 2),
                _ => unreachable!(),
            };
            *octet = lane_bytes[lane][byte];
        }
        self.words += 1;
        pack_bus_word(self.design, octets).expect("parallel design")
    }

    /// Takes `n` keystream octets, spanning bus words as needed.
    pub fn take(&mut self, n: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            if self.buffer_pos == self.buffer.len() {
                self.buffer = self.next_word().octets.to_vec();
                self.buffer_pos = 0;
            }
            let want = n - out.len();
            let have = self.buffer.len() - self.buffer_pos;
            let grab = want.min(have);
            out.extend_from_slice(&self.buffer[self.buffer_pos..self.buffer_pos + grab]);
            self.buffer_pos += grab;
        }
        out
    }

    /// Measured counts: lanes are lockstep, so the composite KSA/PRGA
    /// clocks equal any lane's (asserted).
    pub fn report(&self, bytes: u64) -> CycleReport {
        let lane_reports: Vec<CycleReport> = self.lanes.iter().map(|l| l.report()).collect();
        let first = lane_reports[0];
        for r in &lane_reports[1..] {
            assert_eq!(r.ksa_clocks, first.ksa_clocks, "lanes out of lockstep");
            assert_eq!(r.prga_clocks, first.prga_clocks, "lanes out of lockstep");
        }
        CycleReport {
            design: self.design,
            ksa_clocks: first.ksa_clocks,
            prga_clocks: first.prga_clocks,
            bytes,
        }
    }
}

/// Runs a lane-parallel design for `n` keystream octets plus the
/// measured cycle report.
pub fn simulate_parallel(
    design: DesignId,
    key: &SecretKey,
    n: usize,
) -> Result<(Vec<u8>, CycleReport)> {
    let order: Vec<usize> = match design {
        DesignId::D5 => (0..4).collect(),
        DesignId::D6 => (0..2).collect(),
        other => return Err(Error::SingleEngineDesign(other.number())),
    };
    simulate_parallel_with_order(design, key, n, &order)
}

/// As [`simulate_parallel`], with an explicit lane evaluation order.
pub fn simulate_parallel_with_order(
    design: DesignId,
    key: &SecretKey,
    n: usize,
    order: &[usize],
) -> Result<(Vec<u8>, CycleReport)> {
    let mut stream = ParallelStream::with_lane_order(design, key, order)?;
    let out = stream.take(n);
    assert_eq!(stream.stalls(), 0, "lockstep lanes must never stall");
    let report = stream.report(n as u64);
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rc4;

    fn key(bytes: &[u8]) -> SecretKey {
        SecretKey::new(bytes.to_vec()).unwrap()
    }

    #[test]
    fn split_even() {
        let subs = split_key(&key(b"0123456789abcdef"), 4).unwrap();
        let lens: Vec<usize> = subs.iter().map(|s| s.len()).collect();
        assert_eq!(lens, vec![4, 4, 4, 4]);
        assert_eq!(subs[0].as_bytes(), b"0123");
        assert_eq!(subs[3].as_bytes(), b"cdef");
    }

    #[test]
    fn split_remainder_to_front() {
        let subs = split_key(&key(b"abcde"), 4).unwrap();
        let lens: Vec<usize> = subs.iter().map(|s| s.len()).collect();
        assert_eq!(lens, vec![2, 1, 1, 1]);
        assert_eq!(subs[0].as_bytes(), b"ab");
    }

    #[test]
    fn split_minimal() {
        let subs = split_key(&key(b"abcd"), 4).unwrap();
        assert!(subs.iter().all(|s| s.len() == 1));
    }

    #[test]
    fn split_too_short() {
        assert!(matches!(
            split_key(&key(b"abc"), 4),
            Err(Error::KeyTooShortForLanes { key_len: 3, lanes: 4 })
        ));
    }

    #[test]
    fn d5_first_word_one_octet_per_lane() {
        let k = key(b"0123456789abcdef");
        let subs = split_key(&k, 4).unwrap();
        let (ks, _) = simulate_parallel(DesignId::D5, &k, 4).unwrap();
        for (lane, sub) in subs.iter().enumerate() {
            assert_eq!(ks[lane], rc4::keystream(sub, 1)[0]);
        }
        let word = pack_bus_word(DesignId::D5, [ks[0], ks[1], ks[2], ks[3]]).unwrap();
        assert_eq!(word.source_lanes, [0, 1, 2, 3]);
    }

    #[test]
    fn d6_pairs_map_to_lane_pairs() {
        let word = pack_bus_word(DesignId::D6, [1, 2, 3, 4]).unwrap();
        assert_eq!(word.source_lanes, [0, 0, 1, 1]);
    }

    #[test]
    fn deinterleaved_lanes_are_reference_rc4() {
        for design in [DesignId::D5, DesignId::D6] {
            let k = key(b"parallel-lanes-key");
            let n = 512usize;
            let (ks, _) = simulate_parallel(design, &k, n).unwrap();
            let cfg = LaneConfig::for_design(design, &k).unwrap();
            for lane in 0..cfg.lanes {
                let lane_stream: Vec<u8> = (0..n)
                    .filter(|k_pos| match design {
                        DesignId::D5 => k_pos % 4 == lane,
                        DesignId::D6 => (k_pos % 4) / 2 == lane,
                        _ => unreachable!(),
                    })
                    .map(|k_pos| ks[k_pos])
                    .collect();
                let expect = rc4::keystream(&cfg.sub_keys[lane], lane_stream.len());
                assert_eq!(lane_stream, expect, "{design} lane {lane}");
            }
        }
    }

    #[test]
    fn lane_order_does_not_change_output() {
        let k = key(b"ordering");
        let (base, base_report) = simulate_parallel(DesignId::D5, &k, 257).unwrap();
        for order in [[3, 2, 1, 0], [1, 3, 0, 2], [2, 0, 3, 1]] {
            let (ks, report) = simulate_parallel_with_order(DesignId::D5, &k, 257, &order).unwrap();
            assert_eq!(ks, base);
            assert_eq!(report, base_report);
        }
    }

    #[test]
    fn throughput_four_bytes_per_clock() {
        let k = key(b"throughput-check");
        for (design, ksa) in [(DesignId::D5, 257), (DesignId::D6, 129)] {
            let n = 4096u64;
            let (_, report) = simulate_parallel(design, &k, n as usize).unwrap();
            assert_eq!(report.ksa_clocks, ksa);
            assert_eq!(report.prga_clocks, 2 + n / 4);
        }
    }

    #[test]
    fn rejects_single_engine_designs() {
        assert!(matches!(
            simulate_parallel(DesignId::D1, &key(b"abcd"), 4),
            Err(Error::SingleEngineDesign(1))
        ));
    }
}
