//! Emitter `∂_F` on the unstable side and receivers `ω`, `Ω` on the stable
//! side of an isolated invariant set.

mod emitter;
mod receiver;

pub use emitter::{component_classes, emitter, emitter_from_index, emitter_naturality_check, EmitterData};
pub use receiver::{
    check_admissible, omega_of_cycle, omega_se_check, omega_source, receiver_omega, stable_complement, AdmissibleWitness,
    OmegaMap, ReceiverData,
};
pub use receiver::{receiver_Omega, Omega_independence_check, Omega_restriction_check};

/// Outcome of a commutativity or identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub holds: bool,
    pub violation: Option<String>,
}

impl CheckReport {
    pub fn pass() -> CheckReport {
        CheckReport { holds: true, violation: None }
    }

    pub fn fail(msg: String) -> CheckReport {
        CheckReport { holds: false, violation: Some(msg) }
    }
}
