//! Primary decomposition: splitting each cyclic factor into prime-power parts.

use crate::arith::{ext_gcd, factorize};
use crate::error::Result;
use crate::group::{AbelianGroup, GroupElement, Homomorphism};
use crate::subgroup::Subgroup;

/// One cyclic factor `C_{p^e}` of the primary decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimaryFactor {
    pub prime: u64,
    pub exponent: u32,
    pub order: u64,
    /// Index of the factor of the original group this came from.
    pub source: usize,
}

/// `G ≅ ∏ C_{p^e}` with the coordinate change in both directions.
///
/// Factors are listed in the order of the original factors, and within one
/// original factor by ascending prime: `C6 × C4` becomes `C2 × C3 × C4`.
#[derive(Debug, Clone)]
pub struct PrimaryDecomposition {
    factors: Vec<PrimaryFactor>,
    forward: Homomorphism,
    backward: Homomorphism,
}

impl PrimaryDecomposition {
    pub fn new(group: &AbelianGroup) -> Result<Self> {
        let mut factors = Vec::new();
        for (source, &n) in group.orders().iter().enumerate() {
            for (prime, exponent) in factorize(n) {
                factors.push(PrimaryFactor { prime, exponent, order: prime.pow(exponent), source });
            }
        }
        let primary = AbelianGroup::new(factors.iter().map(|f| f.order))?;

        let forward_images = (0..group.rank())
            .map(|i| GroupElement(factors.iter().map(|f| u64::from(f.source == i) % f.order).collect()))
            .collect();
        let forward = Homomorphism::new(group.clone(), primary.clone(), forward_images)?;

        // CRT idempotents: u ≡ 1 mod q, u ≡ 0 mod n/q.
        let backward_images = factors
            .iter()
            .map(|f| {
                let n = group.orders()[f.source];
                let rest = n / f.order;
                let (_, s, _) = ext_gcd(rest as i128, f.order as i128);
                let u = (rest as i128 * s).rem_euclid(n as i128) as u64;
                let mut v = vec![0u64; group.rank()];
                v[f.source] = u;
                GroupElement(v)
            })
            .collect();
        let backward = Homomorphism::new(primary, group.clone(), backward_images)?;
        Ok(PrimaryDecomposition { factors, forward, backward })
    }

    pub fn factors(&self) -> &[PrimaryFactor] {
        &self.factors
    }

    pub fn group(&self) -> &AbelianGroup {
        self.forward.source()
    }

    /// The primary group `∏ C_{p^e}` itself.
    pub fn primary_group(&self) -> &AbelianGroup {
        self.forward.target()
    }

    pub fn to_primary(&self) -> &Homomorphism {
        &self.forward
    }

    pub fn from_primary(&self) -> &Homomorphism {
        &self.backward
    }

    pub fn element_to_primary(&self, x: &GroupElement) -> Result<GroupElement> {
        self.forward.apply(x)
    }

    pub fn element_from_primary(&self, y: &GroupElement) -> Result<GroupElement> {
        self.backward.apply(y)
    }

    pub fn subgroup_to_primary(&self, h: &Subgroup) -> Result<Subgroup> {
        h.image_under(&self.forward)
    }

    pub fn subgroup_from_primary(&self, h: &Subgroup) -> Result<Subgroup> {
        h.image_under(&self.backward)
    }

    /// Indices of the primary factors belonging to `p`.
    pub fn indices_for(&self, p: u64) -> Vec<usize> {
        (0..self.factors.len()).filter(|&i| self.factors[i].prime == p).collect()
    }

    /// Distinct primes, ascending.
    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.factors.iter().map(|f| f.prime).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }
}
