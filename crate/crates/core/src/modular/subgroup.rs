use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::element::CongruenceElement;
use crate::error::Error;

/// The chain `Full ⊇ Γ₂ ⊇ Γ₂,₄ ⊇ Γ₂,₈` of subgroups of PSL(2,Z).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubgroupTag {
    Full,
    Gamma2,
    Gamma24,
    Gamma28,
}

impl SubgroupTag {
    pub const ALL: [SubgroupTag; 4] = [
        SubgroupTag::Full,
        SubgroupTag::Gamma2,
        SubgroupTag::Gamma24,
        SubgroupTag::Gamma28,
    ];

    fn depth(self) -> u8 {
        match self {
            SubgroupTag::Full => 0,
            SubgroupTag::Gamma2 => 1,
            SubgroupTag::Gamma24 => 2,
            SubgroupTag::Gamma28 => 3,
        }
    }

    /// Whether `self ⊆ other` along the chain.
    pub fn is_subgroup_of(self, other: SubgroupTag) -> bool {
        self.depth() >= other.depth()
    }

    pub fn name(self) -> &'static str {
        match self {
            SubgroupTag::Full => "full",
            SubgroupTag::Gamma2 => "gamma2",
            SubgroupTag::Gamma24 => "gamma24",
            SubgroupTag::Gamma28 => "gamma28",
        }
    }
}

impl fmt::Display for SubgroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SubgroupTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().replace(['_', ',', ' '], "").as_str() {
            "full" | "psl2z" => Ok(SubgroupTag::Full),
            "gamma2" => Ok(SubgroupTag::Gamma2),
            "gamma24" => Ok(SubgroupTag::Gamma24),
            "gamma28" => Ok(SubgroupTag::Gamma28),
            _ => Err(Error::InvalidInput(format!("unknown subgroup '{s}'"))),
        }
    }
}

fn m(x: i64, n: i64) -> i64 {
    x.rem_euclid(n)
}

fn pred(e: (i64, i64, i64, i64), tag: SubgroupTag) -> bool {
    let (a, b, c, d) = e;
    match tag {
        SubgroupTag::Full => true,
        SubgroupTag::Gamma2 => m(a, 2) == 1 && m(b, 2) == 0 && m(c, 2) == 0 && m(d, 2) == 1,
        SubgroupTag::Gamma24 => m(a, 4) == 1 && m(b, 4) == 0 && m(c, 2) == 0 && m(d, 2) == 1,
        SubgroupTag::Gamma28 => m(a, 4) == 1 && m(b, 8) == 0 && m(c, 2) == 0 && m(d, 2) == 1,
    }
}

/// Congruence test, true when either sign representative qualifies.
pub fn membership(x: &CongruenceElement, tag: SubgroupTag) -> bool {
    pred(x.entries(), tag) || pred(x.negated_entries(), tag)
}

/// The alternative description of Γ₂,₈ inside Γ₂: `α² + αβ ≡ 1 (mod 8)`.
pub fn membership_gamma28_quadratic(x: &CongruenceElement) -> bool {
    if !membership(x, SubgroupTag::Gamma2) {
        return false;
    }
    let (a, b, _, _) = x.entries();
    m(a * a + a * b, 8) == 1
}

fn el(a: i64, b: i64, c: i64, d: i64) -> CongruenceElement {
    CongruenceElement::new(a, b, c, d).expect("unimodular literal")
}

/// Default generating sets for the groups used as supergroups.
/// `Γ₂,₈` has no stored list; derive one with `schreier_generators`.
pub fn default_generators(tag: SubgroupTag) -> Vec<CongruenceElement> {
    let a = el(1, 2, 0, 1);
    let b = el(1, 0, 2, 1);
    match tag {
        SubgroupTag::Full => vec![CongruenceElement::s(), CongruenceElement::t()],
        SubgroupTag::Gamma2 => vec![a, b],
        SubgroupTag::Gamma24 => vec![b, a * a, a * b * a.inverse()],
        SubgroupTag::Gamma28 => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_everywhere() {
        for tag in SubgroupTag::ALL {
            assert!(membership(&CongruenceElement::identity(), tag));
        }
    }

    #[test]
    fn powers_of_t() {
        let t = CongruenceElement::t();
        assert!(membership(&t.pow(4), SubgroupTag::Gamma24));
        assert!(!membership(&t.pow(4), SubgroupTag::Gamma28));
        assert!(membership(&t.pow(8), SubgroupTag::Gamma28));
        assert!(membership(&t.pow(2), SubgroupTag::Gamma2));
        assert!(!membership(&t.pow(2), SubgroupTag::Gamma24));
    }

    #[test]
    fn sign_representative_matters_only_up_to_pm() {
        // -I·(3,4;2,3) has α = -3 ≡ 1 mod 4
        let x = CongruenceElement::new(3, 4, 2, 3).unwrap();
        assert!(membership(&x, SubgroupTag::Gamma24));
    }

    #[test]
    fn default_generators_lie_in_their_groups() {
        for tag in [SubgroupTag::Full, SubgroupTag::Gamma2, SubgroupTag::Gamma24] {
            for g in default_generators(tag) {
                assert!(membership(&g, tag), "{g} not in {tag}");
            }
        }
    }

    #[test]
    fn parse_tags() {
        assert_eq!(
            "gamma28".parse::<SubgroupTag>().unwrap(),
            SubgroupTag::Gamma28
        );
        assert_eq!(
            "Gamma2,4".parse::<SubgroupTag>().unwrap(),
            SubgroupTag::Gamma24
        );
        assert!("gamma3".parse::<SubgroupTag>().is_err());
    }
}
