use std::collections::VecDeque;

use serde::Serialize;

use super::element::CongruenceElement;
use super::subgroup::{membership, SubgroupTag};
use crate::error::{Error, Result};
use crate::perm::{generate_group, is_abelian, is_transitive, Perm};

pub const COSET_BUDGET: usize = 10_000;
const GROUP_CAP: usize = 200_000;

/// Right cosets `sub·g` of `sub` in `super`, with the permutation action of
/// each supergroup generator by right multiplication.
#[derive(Debug, Clone, Serialize)]
pub struct CosetTable {
    pub subgroup: SubgroupTag,
    pub supergroup: SubgroupTag,
    pub generators: Vec<CongruenceElement>,
    pub representatives: Vec<CongruenceElement>,
    pub action: Vec<Perm>,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.representatives.len()
    }

    /// Index of the coset containing `x`.
    pub fn locate(&self, x: &CongruenceElement) -> Option<usize> {
        find_coset(&self.representatives, x, self.subgroup)
    }
}

fn find_coset(
    reps: &[CongruenceElement],
    x: &CongruenceElement,
    sub: SubgroupTag,
) -> Option<usize> {
    reps.iter()
        .position(|r| membership(&(*x * r.inverse()), sub))
}

pub fn coset_table(
    sub: SubgroupTag,
    sup: SubgroupTag,
    generators: &[CongruenceElement],
) -> Result<CosetTable> {
    coset_table_with_budget(sub, sup, generators, COSET_BUDGET)
}

pub fn coset_table_with_budget(
    sub: SubgroupTag,
    sup: SubgroupTag,
    generators: &[CongruenceElement],
    budget: usize,
) -> Result<CosetTable> {
    if !sub.is_subgroup_of(sup) {
        return Err(Error::InvalidInput(format!(
            "{sub} is not contained in {sup}"
        )));
    }
    if generators.is_empty() {
        return Err(Error::InvalidInput(format!(
            "no generators supplied for {sup}"
        )));
    }
    for g in generators {
        if !membership(g, sup) {
            return Err(Error::InvalidInput(format!(
                "generator {g} does not lie in {sup}"
            )));
        }
    }
    let mut reps = vec![CongruenceElement::identity()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in generators {
            let x = reps[i] * *g;
            if find_coset(&reps, &x, sub).is_none() {
                if reps.len() >= budget {
                    return Err(Error::EnumerationBudgetExceeded(budget));
                }
                reps.push(x);
                queue.push_back(reps.len() - 1);
            }
        }
    }
    let action = generators
        .iter()
        .map(|g| {
            let images = reps
                .iter()
                .map(|r| find_coset(&reps, &(*r * *g), sub).expect("table closed under generators"))
                .collect();
            Perm::from_images(images).expect("right multiplication permutes cosets")
        })
        .collect();
    Ok(CosetTable {
        subgroup: sub,
        supergroup: sup,
        generators: generators.to_vec(),
        representatives: reps,
        action,
    })
}

/// Schreier generators `r·g·rep(r·g)⁻¹` of the subgroup, deduplicated and
/// with the identity removed.
pub fn schreier_generators(t: &CosetTable) -> Vec<CongruenceElement> {
    let mut out: Vec<CongruenceElement> = Vec::new();
    for (gi, g) in t.generators.iter().enumerate() {
        for (i, r) in t.representatives.iter().enumerate() {
            let j = t.action[gi].apply(i);
            let s = *r * *g * t.representatives[j].inverse();
            if !s.is_identity() && !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct CosetMonodromy {
    pub permutations: Vec<Perm>,
    pub image_order: usize,
    pub transitive: bool,
    pub abelian: bool,
}

pub fn coset_monodromy(t: &CosetTable) -> CosetMonodromy {
    let n = t.index();
    let image_order = generate_group(&t.action, n, GROUP_CAP).map_or(0, |g| g.len());
    CosetMonodromy {
        permutations: t.action.clone(),
        image_order,
        transitive: is_transitive(&t.action, n),
        abelian: is_abelian(&t.action),
    }
}

/// Normality of `sub` in `super`, tested by conjugating the Schreier
/// generators of `sub` by every supergroup generator and its inverse.
pub fn galois_check(t: &CosetTable) -> bool {
    let subgens = schreier_generators(t);
    t.generators.iter().all(|g| {
        let gi = g.inverse();
        subgens.iter().all(|h| {
            membership(&(*g * *h * gi), t.subgroup) && membership(&(gi * *h * *g), t.subgroup)
        })
    })
}

/// Reduction of an element modulo 2, entries in `{0, 1}`.
pub fn reduce_mod2(x: &CongruenceElement) -> [[u8; 2]; 2] {
    let (a, b, c, d) = x.entries();
    let r = |v: i64| v.rem_euclid(2) as u8;
    [[r(a), r(b)], [r(c), r(d)]]
}

/// All invertible 2×2 matrices over `Z/2`.
pub fn gl2_f2() -> Vec<[[u8; 2]; 2]> {
    let mut out = Vec::new();
    for bits in 0u8..16 {
        let m = [
            [bits & 1, (bits >> 1) & 1],
            [(bits >> 2) & 1, (bits >> 3) & 1],
        ];
        if (m[0][0] * m[1][1] + m[0][1] * m[1][0]) % 2 == 1 {
            out.push(m);
        }
    }
    out
}
