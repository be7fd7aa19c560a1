//! PSL(2,Z) arithmetic, the congruence subgroups Γ₂ ⊇ Γ₂,₄ ⊇ Γ₂,₈ and the
//! permutation action on their cosets.

pub mod cosets;
pub mod element;
pub mod subgroup;

pub use cosets::{
    coset_monodromy, coset_table, galois_check, gl2_f2, reduce_mod2, schreier_generators,
    CosetMonodromy, CosetTable,
};
pub use element::CongruenceElement;
pub use subgroup::{default_generators, membership, membership_gamma28_quadratic, SubgroupTag};
