//! Combinational math of the two-step loop unrolling: the fused j₂
//! computation, the 8-case double-swap resolution and the 7-case Z₂
//! operand selection.
//!
//! Everything here is pure mod-256 arithmetic over explicit S-box state;
//! the snapshots taken between the two fused iterations are never
//! materialized as separate arrays.

use crate::rc4::SBox;

/// The four indices of one unrolled step. `i2` is always `i1 + 1 mod 256`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnrolledIndices {
    i1: u8,
    i2: u8,
    j1: u8,
    j2: u8,
}

impl UnrolledIndices {
    pub fn new(i1: u8, j1: u8, j2: u8) -> Self {
        UnrolledIndices {
            i1,
            i2: i1.wrapping_add(1),
            j1,
            j2,
        }
    }

    pub fn i1(&self) -> u8 {
        self.i1
    }
    pub fn i2(&self) -> u8 {
        self.i2
    }
    pub fn j1(&self) -> u8 {
        self.j1
    }
    pub fn j2(&self) -> u8 {
        self.j2
    }
}

/// Truth assignment of the three index-collision predicates
/// (i2 = j1, j2 = i1, j2 = j1), deciding the net data movement of the
/// two fused swaps. Case 8 (all three true) cannot occur when
/// i2 = i1 + 1 mod 256.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SwapCase {
    /// i2 ≠ j1, j2 ≠ i1, j2 ≠ j1 — two independent swaps.
    Case1,
    /// i2 ≠ j1, j2 ≠ i1, j2 = j1.
    Case2,
    /// i2 ≠ j1, j2 = i1, j2 ≠ j1.
    Case3,
    /// i2 ≠ j1, j2 = i1, j2 = j1.
    Case4,
    /// i2 = j1, j2 ≠ i1, j2 ≠ j1.
    Case5,
    /// i2 = j1, j2 ≠ i1, j2 = j1.
    Case6,
    /// i2 = j1, j2 = i1, j2 ≠ j1 — the swaps cancel, no data movement.
    Case7,
}

impl SwapCase {
    pub fn case_id(&self) -> u8 {
        match self {
            SwapCase::Case1 => 1,
            SwapCase::Case2 => 2,
            SwapCase::Case3 => 3,
            SwapCase::Case4 => 4,
            SwapCase::Case5 => 5,
            SwapCase::Case6 => 6,
            SwapCase::Case7 => 7,
        }
    }
}

/// Resolves the unique swap case for one unrolled step.
///
/// Panics if the impossible all-equal pattern shows up; with
/// i2 = i1 + 1 that would mean the simulator corrupted its indices.
pub fn classify_swap(idx: UnrolledIndices) -> SwapCase {
    let a = idx.i2 == idx.j1;
    let b = idx.j2 == idx.i1;
    let c = idx.j2 == idx.j1;
    match (a, b, c) {
        (false, false, false) => SwapCase::Case1,
        (false, false, true) => SwapCase::Case2,
        (false, true, false) => SwapCase::Case3,
        (false, true, true) => SwapCase::Case4,
        (true, false, false) => SwapCase::Case5,
        (true, false, true) => SwapCase::Case6,
        (true, true, false) => SwapCase::Case7,
        (true, true, true) => {
            panic!("swap case 8 reached: i1={} j1={} j2={}", idx.i1, idx.j1, idx.j2)
        }
    }
}

/// Commits the net data movement of the two fused swaps,
/// swap(S[i1],S[j1]) then swap(S[i2],S[j2]), as the single
/// register-transfer pattern of the classified case.
pub fn apply_double_swap(sbox: &mut SBox, idx: UnrolledIndices) {
    let (i1, i2, j1, j2) = (idx.i1, idx.i2, idx.j1, idx.j2);
    // Read everything from S0 before writing anything.
    let s_i1 = sbox.get(i1);
    let s_i2 = sbox.get(i2);
    let s_j1 = sbox.get(j1);
    let s_j2 = sbox.get(j2);
    match classify_swap(idx) {
        SwapCase::Case1 => {
            sbox.set(j1, s_i1);
            sbox.set(i1, s_j1);
            sbox.set(j2, s_i2);
            sbox.set(i2, s_j2);
        }
        SwapCase::Case2 => {
            sbox.set(i2, s_i1);
            sbox.set(j1, s_i2);
            sbox.set(i1, s_j1);
        }
        SwapCase::Case3 => {
            sbox.set(j1, s_i1);
            sbox.set(i1, s_i2);
            sbox.set(i2, s_j1);
        }
        SwapCase::Case4 => {
            sbox.set(i2, s_i1);
            sbox.set(i1, s_i2);
        }
        SwapCase::Case5 => {
            sbox.set(j2, s_i1);
            sbox.set(j1, s_j2);
            sbox.set(i1, s_j1);
        }
        SwapCase::Case6 => {
            sbox.set(j1, s_i1);
            sbox.set(i1, s_j1);
        }
        SwapCase::Case7 => {}
    }
}

/// Fused j₂ for a KSA double-iteration:
/// j0 + S0[i1] + S1[i2] + K[i1] + K[i2], with S1[i2] realized from S0
/// by the i2 = j1 comparison.
pub fn compute_j2_ksa(j0: u8, s0_i1: u8, s0_i2: u8, k_i1: u8, k_i2: u8, i2_eq_j1: bool) -> u8 {
    let third = if i2_eq_j1 { s0_i1 } else { s0_i2 };
    j0.wrapping_add(s0_i1)
        .wrapping_add(third)
        .wrapping_add(k_i1)
        .wrapping_add(k_i2)
}

/// Fused j₂ for a PRGA double-step: the KSA form with zero key addends.
pub fn compute_j2_prga(j0: u8, s0_i1: u8, s0_i2: u8, i2_eq_j1: bool) -> u8 {
    let third = if i2_eq_j1 { s0_i1 } else { s0_i2 };
    j0.wrapping_add(s0_i1).wrapping_add(third)
}

/// First output byte of an unrolled step:
/// Z1 = S1[S0[i1] + S0[j1]], where S1 is S0 after the first swap.
/// The lookup reads S0 with the single-swap correction instead of
/// materializing S1.
pub fn compute_z1(sbox_s0: &SBox, idx: UnrolledIndices) -> u8 {
    let t1 = sbox_s0.get(idx.i1).wrapping_add(sbox_s0.get(idx.j1));
    if t1 == idx.i1 {
        sbox_s0.get(idx.j1)
    } else if t1 == idx.j1 {
        sbox_s0.get(idx.i1)
    } else {
        sbox_s0.get(t1)
    }
}

/// S1[i2] and S1[j2] expressed in S0 entries, per the 7-case selector.
pub fn select_z2_operands(case: SwapCase, sbox_s0: &SBox, idx: UnrolledIndices) -> (u8, u8) {
    let s_i1 = sbox_s0.get(idx.i1);
    let s_i2 = sbox_s0.get(idx.i2);
    let s_j1 = sbox_s0.get(idx.j1);
    let s_j2 = sbox_s0.get(idx.j2);
    match case {
        SwapCase::Case1 => (s_i2, s_j2),
        SwapCase::Case2 => (s_i2, s_i1),
        SwapCase::Case3 => (s_i2, s_j1),
        SwapCase::Case4 => (s_i2, s_j1),
        SwapCase::Case5 => (s_i1, s_j2),
        SwapCase::Case6 => (s_i1, s_i1),
        SwapCase::Case7 => (s_i1, s_j1),
    }
}

/// Second output byte: Z2 = S2[S1[i2] + S1[j2]], with the S1 operands
/// selected from the pre-swap snapshot and the final lookup reading the
/// post-both-swaps box.
pub fn compute_z2(sbox_s0: &SBox, sbox_s2: &SBox, idx: UnrolledIndices) -> u8 {
    let case = classify_swap(idx);
    let (a, b) = select_z2_operands(case, sbox_s0, idx);
    sbox_s2.get(a.wrapping_add(b))
}

/// The per-clock tuple produced by the 2-byte datapath.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnrolledStep {
    pub indices: UnrolledIndices,
    pub swap_case: SwapCase,
    pub z1: u8,
    pub z2: u8,
}

/// Executes one full unrolled PRGA double-step on `sbox`, starting from
/// counter value `i0` and register `j0`. Returns the step record and the
/// new j. Equivalent to two sequential PRGA iterations.
pub fn prga_step_pair(sbox: &mut SBox, i0: u8, j0: u8) -> (UnrolledStep, u8) {
    let i1 = i0.wrapping_add(1);
    let i2 = i0.wrapping_add(2);
    let j1 = j0.wrapping_add(sbox.get(i1));
    let j2 = compute_j2_prga(j0, sbox.get(i1), sbox.get(i2), i2 == j1);
    let idx = UnrolledIndices::new(i1, j1, j2);
    let swap_case = classify_swap(idx);
    let z1 = compute_z1(sbox, idx);
    let s0 = sbox.clone();
    apply_double_swap(sbox, idx);
    let z2 = compute_z2(&s0, sbox, idx);
    (
        UnrolledStep {
            indices: idx,
            swap_case,
            z1,
            z2,
        },
        j2,
    )
}
