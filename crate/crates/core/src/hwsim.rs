//! Edge-scheduled (half-cycle) behavioral simulator of the four
//! single-engine designs.
//!
//! The clock model: each full clock consists of a rising edge followed by
//! a falling edge. Swap operands are latched on falling edges; register
//! writes, swap commits and keystream emission happen on rising edges. A
//! swap latched on the falling edge of clock k commits on the rising edge
//! of clock k+1, which is what lets one full swap retire per clock.
//!
//! Cycle accounting matches the closed forms: designs 1/2 run KSA in
//! 1 + 256 = 257 clocks and PRGA in 2 + n; designs 3/4 run KSA in
//! 1 + 128 = 129 clocks and PRGA in 2 + n/2.

use crate::error::{Error, Result};
use crate::rc4::{SBox, SecretKey};
use crate::unroll::{
    apply_double_swap, classify_swap, compute_j2_ksa, compute_j2_prga, compute_z1,
    select_z2_operands, UnrolledIndices,
};

/// One of the six architectures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DesignId {
    D1,
    D2,
    D3,
    D4,
    D5,
    D6,
}

impl DesignId {
    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(DesignId::D1),
            2 => Ok(DesignId::D2),
            3 => Ok(DesignId::D3),
            4 => Ok(DesignId::D4),
            5 => Ok(DesignId::D5),
            6 => Ok(DesignId::D6),
            other => Err(Error::UnknownDesign(other)),
        }
    }

    pub fn number(&self) -> u8 {
        match self {
            DesignId::D1 => 1,
            DesignId::D2 => 2,
            DesignId::D3 => 3,
            DesignId::D4 => 4,
            DesignId::D5 => 5,
            DesignId::D6 => 6,
        }
    }

    /// Designs 5 and 6 are lane-parallel compositions.
    pub fn is_parallel(&self) -> bool {
        matches!(self, DesignId::D5 | DesignId::D6)
    }

    /// Designs 2 and 4 reuse the KSA datapath for PRGA in place.
    pub fn is_dynamic(&self) -> bool {
        matches!(self, DesignId::D2 | DesignId::D4)
    }

    /// Keystream octets one engine emits per steady-state clock.
    pub fn bytes_per_clock(&self) -> u64 {
        match self {
            DesignId::D1 | DesignId::D2 => 1,
            DesignId::D3 | DesignId::D4 => 2,
            DesignId::D5 | DesignId::D6 => 4,
        }
    }
}

impl std::fmt::Display for DesignId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "design {}", self.number())
    }
}

/// Clock counts of one simulation or one closed-form evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleReport {
    pub design: DesignId,
    pub ksa_clocks: u64,
    pub prga_clocks: u64,
    pub bytes: u64,
}

impl CycleReport {
    pub fn total_clocks(&self) -> u64 {
        self.ksa_clocks + self.prga_clocks
    }

    /// Clocks spent per keystream byte; infinite for zero bytes.
    pub fn per_byte(&self) -> f64 {
        self.total_clocks() as f64 / self.bytes as f64
    }
}

/// Closed-form cycle counts from the design comparison:
/// totals 257+(2+n) for designs 1/2 and 129+(2+n/2) for designs 3/4
/// (odd n rounds the final two-byte clock up). The lane-parallel designs
/// keep their lane's KSA and emit four bytes per steady-state clock.
pub fn cycles_formula(design: DesignId, n: u64) -> CycleReport {
    let (ksa, prga) = match design {
        DesignId::D1 | DesignId::D2 => (257, 2 + n),
        DesignId::D3 | DesignId::D4 => (129, 2 + n.div_ceil(2)),
        DesignId::D5 => (257, 2 + n.div_ceil(4)),
        DesignId::D6 => (129, 2 + n.div_ceil(4)),
    };
    CycleReport {
        design,
        ksa_clocks: ksa,
        prga_clocks: prga,
        bytes: n,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    Rising,
    Falling,
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Edge::Rising => write!(f, "rise"),
            Edge::Falling => write!(f, "fall"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    KsaInit,
    Ksa,
    PrgaInit,
    Prga,
    Done,
}

/// Operands latched on a falling edge, committed on the next rising edge.
#[derive(Debug, Clone, Copy)]
enum Pending {
    Single {
        i: u8,
        j: u8,
        s_i: u8,
        s_j: u8,
        emit: bool,
    },
    Pair {
        idx: UnrolledIndices,
        s0: [u8; 4], // S0 at i1, i2, j1, j2
        emit: bool,
    },
}

pub type TraceFn = Box<dyn FnMut(u64, Edge, &str) + Send>;

/// One hardware engine (designs 1-4), stepped in half-cycles.
pub struct Engine {
    design: DesignId,
    key: SecretKey,
    sbox: SBox,
    i: u8,
    j: u8,
    tmp_j1: u8,
    prga_en: bool,
    phase: Phase,
    half_cycles: u64,
    ksa_iter: u16,
    pending: Option<Pending>,
    ksa_clocks: u64,
    prga_start_clock: u64,
    last_emit_clock: Option<u64>,
    emitted: u64,
    current_edge: Option<Edge>,
    trace: Option<TraceFn>,
    actions: Vec<String>,
}

impl Engine {
    pub fn new(design: DesignId, key: &SecretKey) -> Result<Self> {
        if design.is_parallel() {
            return Err(Error::ParallelDesign(design.number()));
        }
        Ok(Engine {
            design,
            key: key.clone(),
            sbox: SBox::identity(),
            i: 0,
            j: 0,
            tmp_j1: 0,
            prga_en: false,
            phase: Phase::KsaInit,
            half_cycles: 0,
            ksa_iter: 0,
            pending: None,
            ksa_clocks: 0,
            prga_start_clock: 0,
            last_emit_clock: None,
            emitted: 0,
            current_edge: None,
            trace: None,
            actions: Vec::new(),
        })
    }

    pub fn set_trace(&mut self, trace: TraceFn) {
        self.trace = Some(trace);
    }

    pub fn design(&self) -> DesignId {
        self.design
    }
    pub fn phase(&self) -> Phase {
        self.phase
    }
    pub fn prga_en(&self) -> bool {
        self.prga_en
    }
    pub fn sbox(&self) -> &SBox {
        &self.sbox
    }

    /// Full clocks elapsed (half-cycles / 2, rounded up to the edge taken).
    pub fn clock(&self) -> u64 {
        self.half_cycles / 2
    }

    fn note(&mut self, action: impl FnOnce() -> String) {
        if self.trace.is_some() {
            self.actions.push(action());
        }
    }

    fn iterations_per_clock(&self) -> u16 {
        match self.design {
            DesignId::D1 | DesignId::D2 => 1,
            DesignId::D3 | DesignId::D4 => 2,
            DesignId::D5 | DesignId::D6 => unreachable!(),
        }
    }

    fn total_ksa_clocks(&self) -> u16 {
        256 / self.iterations_per_clock()
    }

    fn key_byte(&self, i: u8) -> u8 {
        self.key.byte(i)
    }

    /// Advances one clock edge. Emitted keystream octets are appended to
    /// `out` (only ever on rising edges).
    pub fn step_half_cycle(&mut self, out: &mut Vec<u8>) {
        assert!(self.phase != Phase::Done, "stepping a finished engine");
        let clock = self.half_cycles / 2;
        let edge = if self.half_cycles.is_multiple_of(2) {
            Edge::Rising
        } else {
            Edge::Falling
        };
        self.current_edge = Some(edge);
        match edge {
            Edge::Rising => self.rising(clock, out),
            Edge::Falling => self.falling(),
        }
        if let Some(trace) = self.trace.as_mut() {
            let line = self.actions.join("; ");
            trace(clock, edge, &line);
            self.actions.clear();
        }
        self.current_edge = None;
        self.half_cycles += 1;
    }

    fn rising(&mut self, clock: u64, out: &mut Vec<u8>) {
        match self.phase {
            Phase::KsaInit => {
                // One initial clock: identity fill and register reset.
                self.sbox = SBox::identity();
                self.j = 0;
                self.note(|| "ksa-init".to_string());
            }
            Phase::Ksa => {
                self.commit_pending(out);
                self.compute_j(true);
            }
            Phase::PrgaInit => {
                // The final KSA swap retires on this edge; it overlaps the
                // counter-reset clock, which is counted in the PRGA lead-in.
                self.commit_pending(out);
                self.ksa_clocks = clock;
                self.prga_start_clock = clock;
                if self.design.is_dynamic() {
                    self.dynamic_mode_switch()
                        .expect("KSA complete by construction");
                    self.note(|| "mode-switch".to_string());
                } else {
                    self.prga_unit_init();
                    self.note(|| "prga-init".to_string());
                }
            }
            Phase::Prga => {
                let before = out.len();
                self.commit_pending(out);
                if out.len() > before {
                    self.last_emit_clock = Some(clock);
                }
                self.compute_j(false);
            }
            Phase::Done => unreachable!(),
        }
    }

    fn falling(&mut self) {
        match self.phase {
            Phase::KsaInit => {
                self.i = 0;
                self.ksa_iter = 0;
                self.phase = Phase::Ksa;
                self.note(|| "counter-start i=0".to_string());
            }
            Phase::Ksa => {
                self.latch(false);
                self.i = self.i.wrapping_add(self.iterations_per_clock() as u8);
                self.ksa_iter += 1;
                if self.ksa_iter == self.total_ksa_clocks() {
                    self.phase = Phase::PrgaInit;
                }
            }
            Phase::PrgaInit => {
                self.i = 1;
                self.phase = Phase::Prga;
                self.note(|| "counter-start i=1".to_string());
            }
            Phase::Prga => {
                self.latch(true);
                self.i = self.i.wrapping_add(self.iterations_per_clock() as u8);
            }
            Phase::Done => unreachable!(),
        }
    }

    /// Rising-edge j computation for the iteration(s) indexed by the
    /// current counter value.
    fn compute_j(&mut self, ksa: bool) {
        self.assert_edge(Edge::Rising);
        match self.design {
            DesignId::D1 | DesignId::D2 => {
                let mut j = self.j.wrapping_add(self.sbox.get(self.i));
                if ksa {
                    j = j.wrapping_add(self.key_byte(self.i));
                }
                self.j = j;
                let (i, jv) = (self.i, self.j);
                self.note(|| format!("j-compute i={i:#04x} j={jv:#04x}"));
            }
            DesignId::D3 | DesignId::D4 => {
                let i1 = self.i;
                let i2 = i1.wrapping_add(1);
                let s_i1 = self.sbox.get(i1);
                let s_i2 = self.sbox.get(i2);
                let mut j1 = self.j.wrapping_add(s_i1);
                if ksa {
                    j1 = j1.wrapping_add(self.key_byte(i1));
                }
                let j2 = if ksa {
                    compute_j2_ksa(
                        self.j,
                        s_i1,
                        s_i2,
                        self.key_byte(i1),
                        self.key_byte(i2),
                        i2 == j1,
                    )
                } else {
                    compute_j2_prga(self.j, s_i1, s_i2, i2 == j1)
                };
                self.tmp_j1 = j1;
                self.j = j2;
                self.note(|| format!("j-compute i1={i1:#04x} j1={j1:#04x} j2={j2:#04x}"));
            }
            DesignId::D5 | DesignId::D6 => unreachable!(),
        }
    }

    /// Falling-edge latch of the swap operands for the iteration(s)
    /// whose j was computed on this clock's rising edge.
    fn latch(&mut self, emit: bool) {
        self.assert_edge(Edge::Falling);
        debug_assert!(self.pending.is_none(), "unretired latch overwritten");
        match self.design {
            DesignId::D1 | DesignId::D2 => {
                let (i, j) = (self.i, self.j);
                self.pending = Some(Pending::Single {
                    i,
                    j,
                    s_i: self.sbox.get(i),
                    s_j: self.sbox.get(j),
                    emit,
                });
                self.note(|| format!("latch i={i:#04x} j={j:#04x}"));
            }
            DesignId::D3 | DesignId::D4 => {
                let idx = UnrolledIndices::new(self.i, self.tmp_j1, self.j);
                let s0 = [
                    self.sbox.get(idx.i1()),
                    self.sbox.get(idx.i2()),
                    self.sbox.get(idx.j1()),
                    self.sbox.get(idx.j2()),
                ];
                self.pending = Some(Pending::Pair { idx, s0, emit });
                self.note(|| {
                    format!(
                        "latch i1={:#04x} j1={:#04x} j2={:#04x} case={}",
                        idx.i1(),
                        idx.j1(),
                        idx.j2(),
                        classify_swap(idx).case_id()
                    )
                });
            }
            DesignId::D5 | DesignId::D6 => unreachable!(),
        }
    }

    /// Rising-edge commit of the latched swap, plus keystream emission
    /// when the latch belongs to a PRGA step.
    fn commit_pending(&mut self, out: &mut Vec<u8>) {
        self.assert_edge(Edge::Rising);
        let Some(pending) = self.pending.take() else {
            return;
        };
        match pending {
            Pending::Single { i, j, s_i, s_j, emit } => {
                debug_assert_eq!(self.sbox.get(i), s_i, "S-box changed between edges");
                debug_assert_eq!(self.sbox.get(j), s_j, "S-box changed between edges");
                self.sbox.set(j, s_i);
                self.sbox.set(i, s_j);
                self.note(|| format!("commit swap i={i:#04x} j={j:#04x}"));
                if emit {
                    let t = s_i.wrapping_add(s_j);
                    let z = self.sbox.get(t);
                    out.push(z);
                    self.emitted += 1;
                    self.note(|| format!("emit z={z:#04x}"));
                }
            }
            Pending::Pair { idx, s0, emit } => {
                debug_assert_eq!(self.sbox.get(idx.i1()), s0[0], "S-box changed between edges");
                debug_assert_eq!(self.sbox.get(idx.j2()), s0[3], "S-box changed between edges");
                let case = classify_swap(idx);
                // Z1 reads the box before the second swap lands, so it is
                // computed against S0 with the single-swap correction.
                let z1 = if emit { compute_z1(&self.sbox, idx) } else { 0 };
                let t2 = if emit {
                    let (a, b) = select_z2_operands(case, &self.sbox, idx);
                    a.wrapping_add(b)
                } else {
                    0
                };
                apply_double_swap(&mut self.sbox, idx);
                self.note(|| {
                    format!(
                        "commit dswap i1={:#04x} j1={:#04x} j2={:#04x} case={}",
                        idx.i1(),
                        idx.j1(),
                        idx.j2(),
                        case.case_id()
                    )
                });
                if emit {
                    let z2 = self.sbox.get(t2);
                    out.push(z1);
                    out.push(z2);
                    self.emitted += 2;
                    self.note(|| format!("emit z1={z1:#04x} z2={z2:#04x}"));
                }
            }
        }
    }

    fn assert_edge(&self, want: Edge) {
        assert_eq!(
            self.current_edge,
            Some(want),
            "edge discipline violated: action scheduled on the wrong edge"
        );
    }

    fn prga_unit_init(&mut self) {
        self.i = 0;
        self.j = 0;
        self.prga_en = true;
    }

    /// Reconfigures the KSA datapath into the PRGA datapath: counter and
    /// j reset to 0, the key addend gated off via `prga_en`. Rejected
    /// while the key schedule is still running.
    pub fn dynamic_mode_switch(&mut self) -> Result<()> {
        match self.phase {
            Phase::KsaInit | Phase::Ksa => Err(Error::KsaIncomplete),
            _ => {
                self.prga_unit_init();
                Ok(())
            }
        }
    }

    /// Appends keystream octets to `out` until at least `want` new bytes
    /// exist. The 2-byte designs stop at a pair boundary, so one extra
    /// octet may be appended.
    pub fn fill(&mut self, out: &mut Vec<u8>, want: usize) {
        let target = out.len() + want;
        while out.len() < target {
            self.step_half_cycle(out);
        }
    }

    /// Runs the engine for exactly `n` keystream bytes; any unconsumed
    /// half-pair octet from the 2-byte designs is discarded.
    pub fn run(&mut self, n: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(n + 1);
        self.fill(&mut out, n);
        out.truncate(n);
        out
    }

    /// Steps through the key schedule until the engine is ready to emit.
    pub fn run_lead_in(&mut self) {
        let mut sink = Vec::new();
        while self.phase != Phase::Prga {
            self.step_half_cycle(&mut sink);
        }
        debug_assert!(sink.is_empty());
    }

    pub fn finish(&mut self) {
        self.phase = Phase::Done;
    }

    /// Measured clock counts so far.
    pub fn report(&self) -> CycleReport {
        let prga_clocks = match self.last_emit_clock {
            Some(c) => c - self.prga_start_clock + 1,
            None => 0,
        };
        CycleReport {
            design: self.design,
            ksa_clocks: self.ksa_clocks,
            prga_clocks,
            bytes: self.emitted,
        }
    }
}

/// Runs one engine to completion: `n` keystream bytes plus the measured
/// cycle report. For n = 0 only the key schedule runs and the PRGA clock
/// count is reported as 0.
pub fn simulate(design: DesignId, key: &SecretKey, n: usize) -> Result<(Vec<u8>, CycleReport)> {
    let mut engine = Engine::new(design, key)?;
    let out = if n == 0 {
        engine.run_lead_in();
        Vec::new()
    } else {
        engine.run(n)
    };
    let mut report = engine.report();
    report.bytes = n as u64;
    engine.finish();
    Ok((out, report))
}
