//! The rank measure and its extension by the non-pseudoelementary literal
//! count. Purification and proof search terminate because these descend.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

use crate::analysis::audit;
use crate::cirquent::{Cirquent, ParKind};

pub const DEFAULT_DIGIT_CAP: usize = 5000;
pub const DIGIT_CAP_ENV: &str = "CL18_RANK_DIGIT_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("rank exceeds {cap} decimal digits")]
pub struct RankOverflow {
    pub cap: usize,
}

/// Digit cap from `CL18_RANK_DIGIT_CAP`, falling back to the default when the
/// variable is unset or unparsable.
pub fn digit_cap() -> usize {
    std::env::var(DIGIT_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_DIGIT_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank(BigUint);

impl Rank {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn digits(&self) -> usize {
        self.0.to_string().len()
    }
}

impl From<u64> for Rank {
    fn from(v: u64) -> Rank {
        Rank(BigUint::from(v))
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

const LOG10_5: f64 = 0.698_970_004_336_018_8;

struct Capped {
    cap: usize,
    limit: BigUint,
}

impl Capped {
    fn new(cap: usize) -> Capped {
        Capped {
            cap,
            limit: BigUint::from(10u32).pow(cap as u32),
        }
    }

    fn check(&self, v: BigUint) -> Result<BigUint, RankOverflow> {
        let bits = v.bits() as f64;
        let cap_bits = self.cap as f64 * std::f64::consts::LOG2_10;
        if bits > cap_bits + 2.0 || (bits + 2.0 >= cap_bits && v >= self.limit) {
            return Err(RankOverflow { cap: self.cap });
        }
        Ok(v)
    }

    /// `5^e`, refusing before the allocation when the result cannot fit.
    fn pow5(&self, e: &BigUint) -> Result<BigUint, RankOverflow> {
        let e = match e.to_u32() {
            Some(e) if (e as f64) * LOG10_5 <= self.cap as f64 + 1.0 => e,
            _ => return Err(RankOverflow { cap: self.cap }),
        };
        self.check(BigUint::from(5u32).pow(e))
    }

    /// Tower of `h` fives; a tower of height 0 is 1.
    fn tower5(&self, h: &BigUint) -> Result<BigUint, RankOverflow> {
        let mut t = BigUint::one();
        let mut i = BigUint::ZERO;
        while &i < h {
            t = self.pow5(&t)?;
            i += 1u32;
        }
        Ok(t)
    }

    fn rank(&self, c: &Cirquent) -> Result<BigUint, RankOverflow> {
        Ok(match c {
            Cirquent::Top | Cirquent::Bot | Cirquent::Lit(_) => BigUint::one(),
            Cirquent::Choice(_, _, a, b) => self.check(self.rank(a)? + self.rank(b)?)?,
            Cirquent::Par(kind, a, b) => {
                let sum = self.rank(a)? + self.rank(b)?;
                match kind {
                    ParKind::Pand => self.pow5(&sum)?,
                    ParKind::Por => self.tower5(&sum)?,
                }
            }
        })
    }
}

/// Rank under the cap from the environment.
pub fn rank(c: &Cirquent) -> Result<Rank, RankOverflow> {
    rank_with_cap(c, digit_cap())
}

pub fn rank_with_cap(c: &Cirquent, cap: usize) -> Result<Rank, RankOverflow> {
    Capped::new(cap).rank(c).map(Rank)
}

/// Compared lexicographically: rank first, then the literal count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtendedRank {
    pub rank: Rank,
    pub non_pseudo_count: usize,
}

pub fn extended_rank(c: &Cirquent) -> Result<ExtendedRank, RankOverflow> {
    extended_rank_with_cap(c, digit_cap())
}

pub fn extended_rank_with_cap(c: &Cirquent, cap: usize) -> Result<ExtendedRank, RankOverflow> {
    Ok(ExtendedRank {
        rank: rank_with_cap(c, cap)?,
        non_pseudo_count: audit(c).non_pseudoelementary_literal_count(),
    })
}

pub fn extended_rank_compare(a: &Cirquent, b: &Cirquent) -> Result<Ordering, RankOverflow> {
    Ok(extended_rank(a)?.cmp(&extended_rank(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::cq;

    fn r(text: &str) -> Rank {
        rank_with_cap(&cq(text), DEFAULT_DIGIT_CAP).unwrap()
    }

    #[test]
    fn base_ranks() {
        assert_eq!(r("P@1"), Rank::from(1));
        assert_eq!(r("top"), Rank::from(1));
        assert_eq!(r("(P@1 chand.3 P@2)"), Rank::from(2));
        assert_eq!(r("(P@1 and P@2)"), Rank::from(25));
        assert_eq!(r("(P@1 or P@2)"), Rank::from(3125));
    }

    #[test]
    fn tower_of_three_fits() {
        // P or (Q chand R) has sum 3, so its rank is 5^3125.
        let rk = r("(P@1 or (P@2 chand.0 P@3))");
        assert_eq!(rk.value(), &BigUint::from(5u32).pow(3125));
        assert_eq!(rk.digits(), 2185);
    }

    #[test]
    fn tower_of_four_overflows() {
        let c = cq("(((P@1 or P@2) or P@3) or P@4)");
        assert_eq!(
            rank_with_cap(&c, DEFAULT_DIGIT_CAP),
            Err(RankOverflow { cap: DEFAULT_DIGIT_CAP })
        );
        let small = cq("(P@1 or (P@2 chand.0 P@3))");
        assert!(rank_with_cap(&small, 600).is_err());
    }

    #[test]
    fn cap_boundary_is_exact() {
        // 5^n has floor(n log10 5) + 1 digits; 5^10 = 9765625 has 7.
        let c = cq("(((P@1 chand.0 P@2) chand.0 (P@3 chand.0 P@4)) and ((P@5 chand.0 P@6) chand.0 (P@7 and P@8)))");
        // Sum 4 + 27 = 31, and 5^31 has 22 digits.
        assert!(rank_with_cap(&c, 22).is_ok());
        assert!(rank_with_cap(&c, 21).is_err());
        assert!(rank_with_cap(&cq("(P@1 and (P@2 chand.0 (P@3 chand.0 (P@4 chand.0 (P@5 chand.0 (P@6 chand.0 (P@7 chand.0 (P@8 chand.0 (P@9 chand.0 P@10)))))))))"), 7).is_ok());
        assert!(rank_with_cap(&cq("(P@1 and (P@2 chand.0 (P@3 chand.0 (P@4 chand.0 (P@5 chand.0 (P@6 chand.0 (P@7 chand.0 (P@8 chand.0 (P@9 chand.0 P@10)))))))))"), 6).is_err());
    }

    #[test]
    fn extended_rank_order() {
        assert_eq!(
            extended_rank_compare(&cq("P@1"), &cq("(P@1 chand.2 P@3)")),
            Ok(Ordering::Less)
        );
        let c = cq("((P@0 and P@1) chand.1 ~P@2)");
        assert_eq!(extended_rank_compare(&c, &c), Ok(Ordering::Equal));
        // A disjunction over a conjunction is a tower of height 26.
        assert!(extended_rank(&cq("((P@0 and P@1) or ~P@2)")).is_err());
        let pseudo = cq("(P@0 or ~P@0)");
        let non_pseudo = cq("(Q@0 or Q@1)");
        assert_eq!(
            extended_rank(&pseudo).unwrap().rank,
            extended_rank(&non_pseudo).unwrap().rank
        );
        assert_eq!(extended_rank(&non_pseudo).unwrap().non_pseudo_count, 2);
        assert_eq!(extended_rank_compare(&pseudo, &non_pseudo), Ok(Ordering::Less));
    }
}
