use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::context::Context;
use crate::error::{Error, Result};
use crate::structures::aut_check;

/// Where measure values live.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoefficientDomain {
    /// Integers; every measure of an AUT(1) class takes values in {-1, 0, 1}.
    RestrictedIntegers,
    /// The prime field with `p` elements, values stored as `0..p`.
    PrimeField(u64),
}

impl CoefficientDomain {
    pub fn values(&self) -> Vec<i64> {
        match *self {
            CoefficientDomain::RestrictedIntegers => vec![-1, 0, 1],
            CoefficientDomain::PrimeField(p) => (0..p as i64).collect(),
        }
    }

    pub(crate) fn modulus(&self) -> Option<i64> {
        match *self {
            CoefficientDomain::RestrictedIntegers => None,
            CoefficientDomain::PrimeField(p) => Some(p as i64),
        }
    }

    pub(crate) fn norm(&self, x: i64) -> i64 {
        match self.modulus() {
            None => x,
            Some(p) => x.rem_euclid(p),
        }
    }

    pub(crate) fn norm_wide(&self, x: i128) -> i64 {
        match self.modulus() {
            None => x as i64,
            Some(p) => x.rem_euclid(p as i128) as i64,
        }
    }

    pub fn is_unit(&self, x: i64) -> bool {
        match self {
            CoefficientDomain::RestrictedIntegers => x == 1 || x == -1,
            CoefficientDomain::PrimeField(_) => self.norm(x) != 0,
        }
    }

    /// `-1` in this domain.
    pub fn minus_one(&self) -> i64 {
        self.norm(-1)
    }

    /// The domain is usable for a class whose automorphism orders are
    /// supported on the primes of `m`.
    pub fn check_admissible(&self, m: u64) -> Result<()> {
        match *self {
            CoefficientDomain::RestrictedIntegers if m != 1 => Err(Error::Precondition(format!(
                "integer measures need every automorphism group to be trivial (AUT(1)); class has m = {m}"
            ))),
            CoefficientDomain::RestrictedIntegers => Ok(()),
            CoefficientDomain::PrimeField(p) => {
                if !is_prime(p) {
                    Err(Error::InvalidArgument(format!("{p} is not prime")))
                } else if m % p == 0 {
                    Err(Error::Precondition(format!("{p} divides m = {m}")))
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl fmt::Display for CoefficientDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientDomain::RestrictedIntegers => write!(f, "z"),
            CoefficientDomain::PrimeField(p) => write!(f, "fp:{p}"),
        }
    }
}

impl Serialize for CoefficientDomain {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for CoefficientDomain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "z" {
            return Ok(CoefficientDomain::RestrictedIntegers);
        }
        let p = s
            .strip_prefix("fp:")
            .and_then(|p| p.parse::<u64>().ok())
            .ok_or_else(|| {
                Error::InvalidArgument(format!("domain `{s}`: expected `z` or `fp:<p>`"))
            })?;
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        if p > i32::MAX as u64 {
            return Err(Error::InvalidArgument(format!("prime {p} is too large")));
        }
        Ok(CoefficientDomain::PrimeField(p))
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Smallest prime not dividing `m`.
pub fn smallest_admissible_prime(m: u64) -> u64 {
    (2..).find(|&p| is_prime(p) && m % p != 0).unwrap()
}

/// The `m` used for domain checks: the class's declared base if any,
/// otherwise the product of the primes dividing some automorphism group
/// order among members of size at most `bound`.
pub fn effective_aut_base(ctx: &Context, bound: usize) -> u64 {
    if let Some(m) = ctx.class().aut_base() {
        return m;
    }
    let mut m = 1u64;
    for n in 0..=bound {
        for c in ctx.structures(n).iter() {
            let mut x = c.aut_order;
            let mut d = 2;
            while x > 1 {
                if x % d == 0 {
                    if m % d != 0 {
                        m *= d;
                    }
                    while x % d == 0 {
                        x /= d;
                    }
                }
                d += 1;
            }
        }
    }
    m
}

/// Validate `domain` for the class at `bound`.
pub fn check_domain(ctx: &Context, domain: CoefficientDomain, bound: usize) -> Result<()> {
    if domain == CoefficientDomain::RestrictedIntegers {
        let r = aut_check(ctx, 1, bound);
        if let Some(v) = r.violation {
            return Err(Error::Precondition(format!(
                "integer measures need AUT(1); a structure of size {} has {} automorphisms",
                v.size, v.aut_order
            )));
        }
        return Ok(());
    }
    let m = effective_aut_base(ctx, bound);
    domain.check_admissible(m)
}
