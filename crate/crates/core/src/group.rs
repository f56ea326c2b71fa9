//! Finite abelian groups `C_{n_1} × … × C_{n_k}`, their elements and
//! homomorphisms between them.

use std::fmt;

use crate::arith::{gcd, lcm, product};
use crate::error::{Error, Result};
use crate::subgroup::Subgroup;

/// A finite abelian group given as a product of cyclic factors.
///
/// Factors of order 1 are dropped on construction, so the trivial group is
/// the empty product. The factor list is otherwise kept as given.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroup {
    orders: Vec<u64>,
    size: u64,
}

/// A residue vector, one coordinate per cyclic factor of its group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub Vec<u64>);

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u64>> for GroupElement {
    fn from(v: Vec<u64>) -> Self {
        GroupElement(v)
    }
}

impl AbelianGroup {
    pub fn new(orders: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut kept = Vec::new();
        for n in orders {
            match n {
                0 => return Err(Error::InvalidOrder(0)),
                1 => {}
                _ => kept.push(n),
            }
        }
        let size = product(kept.iter().copied())?;
        if size > i64::MAX as u64 {
            return Err(Error::OrderOverflow);
        }
        Ok(AbelianGroup { orders: kept, size })
    }

    pub fn trivial() -> Self {
        AbelianGroup { orders: Vec::new(), size: 1 }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Number of cyclic factors in the presentation.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> u64 {
        self.size
    }

    /// Least common multiple of the factor orders.
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &n| lcm(acc, n).expect("exponent divides the group order"))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// Standard generator of the `i`-th cyclic factor.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        GroupElement(v)
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.0.len() == self.rank() && x.0.iter().zip(&self.orders).all(|(r, n)| r < n)
    }

    pub fn check(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::NotAnElement { element: x.0.clone(), orders: self.orders.clone() })
        }
    }

    /// Builds an element from arbitrary integers, reducing each coordinate.
    pub fn element(&self, residues: &[i64]) -> Result<GroupElement> {
        if residues.len() != self.rank() {
            return Err(Error::NotAnElement {
                element: residues.iter().map(|&r| r as u64).collect(),
                orders: self.orders.clone(),
            });
        }
        Ok(GroupElement(residues.iter().zip(&self.orders).map(|(&r, &n)| r.rem_euclid(n as i64) as u64).collect()))
    }

    /// `x + y`, checking both operands.
    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_unchecked(x, y))
    }

    pub(crate) fn add_unchecked(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        GroupElement(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.orders)
                .map(|((&a, &b), &n)| ((a as u128 + b as u128) % n as u128) as u64)
                .collect(),
        )
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        GroupElement(x.0.iter().zip(&self.orders).map(|(&a, &n)| if a == 0 { 0 } else { n - a }).collect())
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.add_unchecked(x, &self.neg(y))
    }

    /// `k · x` for an arbitrary integer `k`.
    pub fn scale(&self, k: i128, x: &GroupElement) -> GroupElement {
        GroupElement(
            x.0.iter()
                .zip(&self.orders)
                .map(|(&a, &n)| {
                    let n = n as i128;
                    (k.rem_euclid(n) * a as i128).rem_euclid(n) as u64
                })
                .collect(),
        )
    }

    /// Sum of `coeffs[i] · xs[i]`.
    pub fn combination(&self, coeffs: &[i128], xs: &[GroupElement]) -> GroupElement {
        coeffs.iter().zip(xs).fold(self.identity(), |acc, (&c, x)| self.add_unchecked(&acc, &self.scale(c, x)))
    }

    /// Least `d >= 1` with `d · x = 0`.
    pub fn element_order(&self, x: &GroupElement) -> u64 {
        x.0.iter()
            .zip(&self.orders)
            .fold(1, |acc, (&r, &n)| lcm(acc, n / gcd(n, r)).expect("element order divides the group order"))
    }

    /// Mixed-radix index of an element; lexicographic order on residues.
    pub fn index_of(&self, x: &GroupElement) -> u64 {
        x.0.iter().zip(&self.orders).fold(0, |acc, (&r, &n)| acc * n + r)
    }

    pub fn element_at(&self, mut index: u64) -> GroupElement {
        let mut v = vec![0; self.rank()];
        for i in (0..self.rank()).rev() {
            v[i] = index % self.orders[i];
            index /= self.orders[i];
        }
        GroupElement(v)
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.size).map(move |i| self.element_at(i))
    }

    /// The whole group as a subgroup of itself.
    pub fn full(&self) -> Subgroup {
        Subgroup::full(self)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::trivial(self)
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        crate::arith::log_exact(self.size, p).is_some()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "1");
        }
        for (i, n) in self.orders.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "C{n}")?;
        }
        Ok(())
    }
}

/// A homomorphism determined by the images of the source's standard
/// generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    source: AbelianGroup,
    target: AbelianGroup,
    images: Vec<GroupElement>,
}

impl Homomorphism {
    /// Fails unless every image is an element of `target` whose order divides
    /// the order of the corresponding source generator.
    pub fn new(source: AbelianGroup, target: AbelianGroup, images: Vec<GroupElement>) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::precondition(format!(
                "{} images supplied for {} generators",
                images.len(),
                source.rank()
            )));
        }
        for (img, &n) in images.iter().zip(source.orders()) {
            target.check(img)?;
            if n % target.element_order(img) != 0 {
                return Err(Error::precondition(format!(
                    "image {img} has order {} which does not divide {n}",
                    target.element_order(img)
                )));
            }
        }
        Ok(Homomorphism { source, target, images })
    }

    pub fn identity(group: &AbelianGroup) -> Self {
        let images = (0..group.rank()).map(|i| group.generator(i)).collect();
        Homomorphism { source: group.clone(), target: group.clone(), images }
    }

    pub fn source(&self) -> &AbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &AbelianGroup {
        &self.target
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        self.source.check(x)?;
        let coeffs: Vec<i128> = x.0.iter().map(|&r| r as i128).collect();
        Ok(self.target.combination(&coeffs, &self.images))
    }

    pub fn image(&self) -> Result<Subgroup> {
        Subgroup::from_generators(&self.target, &self.images)
    }

    pub fn kernel(&self) -> Result<Subgroup> {
        let rows: Vec<Vec<i128>> =
            (0..self.target.rank()).map(|r| self.images.iter().map(|img| img.0[r] as i128).collect()).collect();
        let gens = crate::lattice::kernel_mod(self.source.rank(), &rows, self.target.orders())?;
        let gens: Vec<GroupElement> =
            gens.iter().map(|c| GroupElement(crate::lattice::reduce_mod(c, self.source.orders()))).collect();
        Subgroup::from_generators(&self.source, &gens)
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.image()?.order() == self.source.order())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.image()?.order() == self.target.order())
    }

    pub fn is_bijective(&self) -> Result<bool> {
        Ok(self.source.order() == self.target.order() && self.is_injective()?)
    }
}
