//! Subgroups as integer lattices.
//!
//! A subgroup `H ≤ G = Z^k / diag(n)·Z^k` is stored as the lattice
//! `L = π^{-1}(H) ⊆ Z^k`, which always contains `diag(n)·Z^k`. The lattice is
//! kept in canonical Hermite form (see [`crate::lattice`]), so two subgroups
//! are equal exactly when their bases are equal.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::arith::{gcd, p_part};
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement, Homomorphism};
use crate::lattice::{self, Columns};

/// Default cap on explicit element enumeration.
pub const DEFAULT_ENUM_CAP: u64 = 1 << 20;

#[derive(Clone)]
pub struct Subgroup {
    ambient: AbelianGroup,
    cols: Columns,
    order: u64,
    invariant_factors: Vec<u64>,
    smith_gens: Vec<GroupElement>,
    /// Rows of the Smith left transform for the kept (non-unit) factors.
    chart_rows: Vec<Vec<i128>>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.cols == other.cols
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.cols.hash(state);
    }
}

impl Ord for Subgroup {
    /// Ambient first, then the Hermite basis in row-major lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient.cmp(&other.ambient).then_with(|| self.basis().cmp(&other.basis()))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subgroup")
            .field("ambient", &self.ambient.orders())
            .field("basis", &self.basis())
            .field("order", &self.order)
            .field("invariant_factors", &self.invariant_factors)
            .finish()
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, g) in self.smith_gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

impl Subgroup {
    pub fn from_generators(ambient: &AbelianGroup, gens: &[GroupElement]) -> Result<Self> {
        for g in gens {
            ambient.check(g)?;
        }
        let gens: Vec<Vec<i128>> = gens.iter().map(|g| lattice::to_i128(&g.0)).collect();
        let cols = lattice::hnf_with_moduli(ambient.orders(), &gens)?;
        Self::from_hermite(ambient.clone(), cols)
    }

    pub fn full(ambient: &AbelianGroup) -> Self {
        Self::from_hermite(ambient.clone(), lattice::identity(ambient.rank()))
            .expect("the full group is always representable")
    }

    pub fn trivial(ambient: &AbelianGroup) -> Self {
        Self::from_generators(ambient, &[]).expect("the trivial subgroup is always representable")
    }

    fn from_hermite(ambient: AbelianGroup, cols: Columns) -> Result<Self> {
        let k = ambient.rank();
        let moduli = ambient.orders();
        let det: u64 = cols.iter().enumerate().map(|(i, c)| c[i] as u64).product();
        let order = ambient.order() / det;

        // Relations among the Hermite columns: R = B^{-1} diag(n).
        let mut rel_cols = Vec::with_capacity(k);
        for (j, &n) in moduli.iter().enumerate() {
            let mut rhs = vec![0i128; k];
            rhs[j] = n as i128;
            let r = lattice::lower_solve(&cols, &rhs)?.ok_or_else(|| lattice::inexact("subgroup relations"))?;
            rel_cols.push(r);
        }
        let rel_rows: Vec<Vec<i128>> = (0..k).map(|i| (0..k).map(|j| rel_cols[j][i]).collect()).collect();
        let smith = lattice::smith(rel_rows)?;

        let mut invariant_factors = Vec::new();
        let mut smith_gens = Vec::new();
        let mut chart_rows = Vec::new();
        for (j, &d) in smith.diag.iter().enumerate() {
            if d == 1 {
                continue;
            }
            let d_u = u64::try_from(d).map_err(|_| Error::Overflow("invariant factor"))?;
            invariant_factors.push(d_u);
            // generator = B · (column j of P^{-1})
            let coeffs: Vec<i128> = (0..k).map(|i| smith.p_inv[i][j]).collect();
            let mut v = vec![0i128; k];
            for (l, c) in coeffs.iter().enumerate() {
                for (r, entry) in v.iter_mut().enumerate() {
                    *entry = crate::arith::checked_mul_add(*entry, *c, cols[l][r])?;
                }
            }
            smith_gens.push(GroupElement(lattice::reduce_mod(&v, moduli)));
            chart_rows.push(smith.p[j].iter().map(|&x| x.rem_euclid(d)).collect::<Vec<i128>>());
        }
        let sub = Subgroup { ambient, cols, order, invariant_factors, smith_gens, chart_rows };
        debug_assert_eq!(sub.invariant_factors.iter().product::<u64>(), sub.order);
        Ok(sub)
    }

    pub fn ambient(&self) -> &AbelianGroup {
        &self.ambient
    }

    /// The Hermite basis as a row-major matrix; column `j` is a generator.
    pub fn basis(&self) -> Vec<Vec<u64>> {
        let k = self.cols.len();
        (0..k).map(|i| (0..k).map(|j| self.cols[j][i] as u64).collect()).collect()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn index(&self) -> u64 {
        self.ambient.order() / self.order
    }

    /// Invariant factors `d_1 | d_2 | …`, all greater than 1.
    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    /// Generators matching [`Self::invariant_factors`]: the subgroup is the
    /// internal direct sum of the cyclic groups they generate.
    pub fn smith_generators(&self) -> &[GroupElement] {
        &self.smith_gens
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_full(&self) -> bool {
        self.order == self.ambient.order()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }

    /// Direct product of isomorphic cyclic groups (the trivial group counts).
    pub fn is_homocyclic(&self) -> bool {
        self.invariant_factors.windows(2).all(|w| w[0] == w[1])
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn is_isomorphic_to(&self, other: &Subgroup) -> bool {
        self.invariant_factors == other.invariant_factors
    }

    fn same_ambient(&self, other: &Subgroup) -> Result<()> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    /// Canonical representative of the coset `x + H`.
    pub fn coset_label(&self, x: &GroupElement) -> Vec<u64> {
        let mut v = lattice::to_i128(&x.0);
        lattice::hnf_reduce(&self.cols, &mut v).expect("reduction stays within the moduli");
        v.into_iter().map(|c| c as u64).collect()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.ambient.contains(x) && self.coset_label(x).iter().all(|&c| c == 0)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient && self.smith_gens.iter().all(|g| other.contains(g))
    }

    /// Coordinates of `x` with respect to the Smith generators, or `None` if
    /// `x` is not in the subgroup.
    pub fn coordinates(&self, x: &GroupElement) -> Option<Vec<u64>> {
        if !self.ambient.contains(x) {
            return None;
        }
        let z = lattice::lower_solve(&self.cols, &lattice::to_i128(&x.0)).ok()??;
        Some(
            self.chart_rows
                .iter()
                .zip(&self.invariant_factors)
                .map(|(row, &d)| {
                    let dot: i128 =
                        row.iter().zip(&z).map(|(a, b)| (a * b.rem_euclid(d as i128)).rem_euclid(d as i128)).sum();
                    dot.rem_euclid(d as i128) as u64
                })
                .collect(),
        )
    }

    pub fn join(&self, other: &Subgroup) -> Result<Subgroup> {
        self.same_ambient(other)?;
        let mut gens = self.smith_gens.clone();
        gens.extend(other.smith_gens.iter().cloned());
        Subgroup::from_generators(&self.ambient, &gens)
    }

    pub fn join_all<'a>(ambient: &AbelianGroup, subgroups: impl IntoIterator<Item = &'a Subgroup>) -> Result<Subgroup> {
        let mut gens = Vec::new();
        for s in subgroups {
            if s.ambient != *ambient {
                return Err(Error::AmbientMismatch);
            }
            gens.extend(s.smith_gens.iter().cloned());
        }
        Subgroup::from_generators(ambient, &gens)
    }

    /// Intersection, computed as the kernel of `G → G/H1 × G/H2`.
    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup> {
        self.same_ambient(other)?;
        let q1 = self.quotient()?;
        let q2 = other.quotient()?;
        let mut rows = q1.rows.clone();
        rows.extend(q2.rows.iter().cloned());
        let mut moduli = q1.group.orders().to_vec();
        moduli.extend_from_slice(q2.group.orders());
        let gens = lattice::kernel_mod(self.ambient.rank(), &rows, &moduli)?;
        let gens: Vec<GroupElement> =
            gens.iter().map(|c| GroupElement(lattice::reduce_mod(c, self.ambient.orders()))).collect();
        Subgroup::from_generators(&self.ambient, &gens)
    }

    pub fn intersect_all<'a>(first: &Subgroup, rest: impl IntoIterator<Item = &'a Subgroup>) -> Result<Subgroup> {
        rest.into_iter().try_fold(first.clone(), |acc, s| acc.intersect(s))
    }

    /// `m · H`.
    pub fn multiple(&self, m: u64) -> Result<Subgroup> {
        let gens: Vec<GroupElement> = self.smith_gens.iter().map(|g| self.ambient.scale(m as i128, g)).collect();
        Subgroup::from_generators(&self.ambient, &gens)
    }

    /// The Sylow `p`-subgroup of `H`: its elements of `p`-power order.
    pub fn sylow(&self, p: u64) -> Result<Subgroup> {
        if !crate::arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        self.multiple(self.order / p_part(self.order, p))
    }

    /// `Γ_n(H) = ⟨h ∈ H : n·h = 0⟩`.
    pub fn gamma(&self, n: u64) -> Result<Subgroup> {
        if n == 0 {
            return Err(Error::NonPositive("n"));
        }
        let gens: Vec<GroupElement> = self
            .smith_gens
            .iter()
            .zip(&self.invariant_factors)
            .map(|(g, &d)| self.ambient.scale((d / gcd(d, n)) as i128, g))
            .collect();
        Subgroup::from_generators(&self.ambient, &gens)
    }

    /// `Ω(H) = Γ_p(H)`; for a `p`-group this is the subgroup of elements of
    /// order dividing `p`.
    pub fn omega(&self, p: u64) -> Result<Subgroup> {
        if !crate::arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        self.gamma(p)
    }

    /// Elements in lexicographic order of their Smith coordinates.
    pub fn elements(&self) -> Result<Elements<'_>> {
        self.elements_capped(DEFAULT_ENUM_CAP)
    }

    pub fn elements_capped(&self, cap: u64) -> Result<Elements<'_>> {
        if self.order > cap {
            return Err(Error::BudgetExceeded { what: "subgroup enumeration", needed: self.order as u128, cap });
        }
        Ok(Elements { sub: self, coords: vec![0; self.invariant_factors.len()], done: false })
    }

    pub fn element_from_coordinates(&self, coords: &[u64]) -> GroupElement {
        let c: Vec<i128> = coords.iter().map(|&x| x as i128).collect();
        self.ambient.combination(&c, &self.smith_gens)
    }

    /// The quotient `G/H` in invariant-factor form with projection and section.
    pub fn quotient(&self) -> Result<Quotient> {
        let k = self.ambient.rank();
        let rows: Vec<Vec<i128>> = (0..k).map(|i| (0..k).map(|j| self.cols[j][i]).collect()).collect();
        let smith = lattice::smith(rows)?;
        let mut orders = Vec::new();
        let mut proj_rows = Vec::new();
        let mut section_cols = Vec::new();
        for (j, &d) in smith.diag.iter().enumerate() {
            if d == 1 {
                continue;
            }
            orders.push(d as u64);
            proj_rows.push(smith.p[j].iter().map(|&x| x.rem_euclid(d)).collect::<Vec<_>>());
            let col: Vec<i128> = (0..k).map(|i| smith.p_inv[i][j]).collect();
            section_cols.push(GroupElement(lattice::reduce_mod(&col, self.ambient.orders())));
        }
        let group = AbelianGroup::new(orders)?;
        Ok(Quotient { kernel: self.clone(), group, rows: proj_rows, section_gens: section_cols })
    }

    /// A standalone copy of `H` with transport maps to and from the ambient.
    pub fn chart(&self) -> Result<Chart> {
        let group = AbelianGroup::new(self.invariant_factors.iter().copied())?;
        Ok(Chart { sub: self.clone(), group })
    }

    /// Image of this subgroup under `f` (whose source must be the ambient).
    pub fn image_under(&self, f: &Homomorphism) -> Result<Subgroup> {
        if f.source() != &self.ambient {
            return Err(Error::AmbientMismatch);
        }
        let gens = self.smith_gens.iter().map(|g| f.apply(g)).collect::<Result<Vec<_>>>()?;
        Subgroup::from_generators(f.target(), &gens)
    }
}

/// Iterator over the elements of a subgroup.
pub struct Elements<'a> {
    sub: &'a Subgroup,
    coords: Vec<u64>,
    done: bool,
}

impl Iterator for Elements<'_> {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        if self.done {
            return None;
        }
        let out = self.sub.element_from_coordinates(&self.coords);
        let mut i = self.coords.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.coords[i] += 1;
            if self.coords[i] < self.sub.invariant_factors[i] {
                break;
            }
            self.coords[i] = 0;
        }
        Some(out)
    }
}

/// `G/N` with its canonical projection and a section.
#[derive(Debug, Clone)]
pub struct Quotient {
    kernel: Subgroup,
    group: AbelianGroup,
    rows: Vec<Vec<i128>>,
    section_gens: Vec<GroupElement>,
}

impl Quotient {
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn ambient(&self) -> &AbelianGroup {
        self.kernel.ambient()
    }

    pub fn project(&self, x: &GroupElement) -> GroupElement {
        GroupElement(
            self.rows
                .iter()
                .zip(self.group.orders())
                .map(|(row, &d)| {
                    let d = d as i128;
                    row.iter().zip(&x.0).map(|(a, &b)| (a * (b as i128 % d)).rem_euclid(d)).sum::<i128>().rem_euclid(d)
                        as u64
                })
                .collect(),
        )
    }

    /// The chosen preimage of a quotient element.
    pub fn section(&self, y: &GroupElement) -> GroupElement {
        let c: Vec<i128> = y.0.iter().map(|&x| x as i128).collect();
        self.ambient().combination(&c, &self.section_gens)
    }

    pub fn projection(&self) -> Homomorphism {
        let g = self.ambient();
        let images = (0..g.rank()).map(|i| self.project(&g.generator(i))).collect();
        Homomorphism::new(g.clone(), self.group.clone(), images).expect("the canonical projection is well defined")
    }

    pub fn project_subgroup(&self, h: &Subgroup) -> Result<Subgroup> {
        if h.ambient() != self.ambient() {
            return Err(Error::AmbientMismatch);
        }
        let gens: Vec<GroupElement> = h.smith_generators().iter().map(|g| self.project(g)).collect();
        Subgroup::from_generators(&self.group, &gens)
    }

    /// Full preimage of a subgroup of the quotient.
    pub fn preimage(&self, h: &Subgroup) -> Result<Subgroup> {
        if h.ambient() != &self.group {
            return Err(Error::AmbientMismatch);
        }
        let mut gens: Vec<GroupElement> = h.smith_generators().iter().map(|g| self.section(g)).collect();
        gens.extend(self.kernel.smith_generators().iter().cloned());
        Subgroup::from_generators(self.ambient(), &gens)
    }
}

/// A subgroup `H ≤ G` presented as a standalone group `C_{d_1} × … × C_{d_r}`
/// (its invariant factors), with maps in both directions.
#[derive(Debug, Clone)]
pub struct Chart {
    sub: Subgroup,
    group: AbelianGroup,
}

impl Chart {
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.sub
    }

    /// From chart coordinates to the ambient group.
    pub fn embed(&self, x: &GroupElement) -> GroupElement {
        self.sub.element_from_coordinates(&x.0)
    }

    /// From the ambient group into the chart; fails outside `H`.
    pub fn locate(&self, x: &GroupElement) -> Result<GroupElement> {
        self.sub
            .coordinates(x)
            .map(GroupElement)
            .ok_or_else(|| Error::precondition(format!("{x} is not inside the subgroup {}", self.sub)))
    }

    pub fn embedding(&self) -> Homomorphism {
        Homomorphism::new(self.group.clone(), self.sub.ambient().clone(), self.sub.smith_generators().to_vec())
            .expect("Smith generators have the right orders")
    }

    /// Transports a subgroup of the ambient that lies inside `H`.
    pub fn pull(&self, k: &Subgroup) -> Result<Subgroup> {
        if k.ambient() != self.sub.ambient() {
            return Err(Error::AmbientMismatch);
        }
        let gens = k.smith_generators().iter().map(|g| self.locate(g)).collect::<Result<Vec<_>>>()?;
        Subgroup::from_generators(&self.group, &gens)
    }

    /// Transports a subgroup of the chart back into the ambient.
    pub fn push(&self, k: &Subgroup) -> Result<Subgroup> {
        if k.ambient() != &self.group {
            return Err(Error::AmbientMismatch);
        }
        let gens: Vec<GroupElement> = k.smith_generators().iter().map(|g| self.embed(g)).collect();
        Subgroup::from_generators(self.sub.ambient(), &gens)
    }
}

/// `Γ_n(G)`: for each factor `C_m` this contributes the subgroup of order
/// `gcd(m, n)`.
pub fn gamma_subgroup(group: &AbelianGroup, n: u64) -> Result<Subgroup> {
    if n == 0 {
        return Err(Error::NonPositive("n"));
    }
    let gens: Vec<GroupElement> = (0..group.rank())
        .map(|i| {
            let m = group.orders()[i];
            group.scale((m / gcd(m, n)) as i128, &group.generator(i))
        })
        .collect();
    Subgroup::from_generators(group, &gens)
}
