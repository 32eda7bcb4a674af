//! Process-wide counters recording which public operations have run. The
//! verification suites report them so a run can show it touched every
//! operation.

use std::sync::atomic::{AtomicU64, Ordering};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    DotAction,
    BruhatLeq,
    DotOrbit,
    Eval,
    Tensor,
    StarDual,
    Add,
    Scale,
    Restrict,
    Kostant,
    VermaChar,
    ParabolicVermaChar,
    SimpleChar,
    ProjectiveFlag,
    Decompose,
    BlockProject,
    CompMult,
    CharOf,
    TruncateLeq,
    TensorWithFree,
    ApplyG,
    ApplyF,
    ApplyH,
    CheckDominance,
}

pub const ALL_OPS: [Op; 24] = [
    Op::DotAction,
    Op::BruhatLeq,
    Op::DotOrbit,
    Op::Eval,
    Op::Tensor,
    Op::StarDual,
    Op::Add,
    Op::Scale,
    Op::Restrict,
    Op::Kostant,
    Op::VermaChar,
    Op::ParabolicVermaChar,
    Op::SimpleChar,
    Op::ProjectiveFlag,
    Op::Decompose,
    Op::BlockProject,
    Op::CompMult,
    Op::CharOf,
    Op::TruncateLeq,
    Op::TensorWithFree,
    Op::ApplyG,
    Op::ApplyF,
    Op::ApplyH,
    Op::CheckDominance,
];

static COUNTERS: [AtomicU64; ALL_OPS.len()] = [const { AtomicU64::new(0) }; ALL_OPS.len()];

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::DotAction => "dot_action",
            Op::BruhatLeq => "bruhat_leq",
            Op::DotOrbit => "dot_orbit",
            Op::Eval => "eval",
            Op::Tensor => "tensor",
            Op::StarDual => "star_dual",
            Op::Add => "add",
            Op::Scale => "scale",
            Op::Restrict => "restrict",
            Op::Kostant => "kostant",
            Op::VermaChar => "verma_char",
            Op::ParabolicVermaChar => "parabolic_verma_char",
            Op::SimpleChar => "simple_char",
            Op::ProjectiveFlag => "projective_flag",
            Op::Decompose => "decompose",
            Op::BlockProject => "block_project",
            Op::CompMult => "comp_mult",
            Op::CharOf => "char_of",
            Op::TruncateLeq => "truncate_leq",
            Op::TensorWithFree => "tensor_with_free",
            Op::ApplyG => "apply_g",
            Op::ApplyF => "apply_f",
            Op::ApplyH => "apply_h",
            Op::CheckDominance => "check_dominance",
        }
    }
}

#[inline]
pub(crate) fn hit(op: Op) {
    COUNTERS[op as usize].fetch_add(1, Ordering::Relaxed);
}

pub fn count(op: Op) -> u64 {
    COUNTERS[op as usize].load(Ordering::Relaxed)
}

/// Operations that have not run yet in this process.
pub fn missing() -> Vec<&'static str> {
    ALL_OPS
        .iter()
        .filter(|&&op| count(op) == 0)
        .map(|op| op.name())
        .collect()
}
