use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{smith_normal_form, FgaError, IntMatrix};

/// `Z^free_rank + Z/f_1 + ... + Z/f_k` with `1 < f_1 | f_2 | ... | f_k`.
///
/// Generators are ordered free first, then the cyclic factors. Two groups are
/// isomorphic iff they compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FgaGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl FgaGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FgaGroup {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    /// Takes factors already in canonical form.
    pub fn new(free_rank: usize, invariant_factors: Vec<BigInt>) -> Result<Self, FgaError> {
        for f in &invariant_factors {
            if *f <= BigInt::one() {
                return Err(FgaError::InvalidGroup(format!(
                    "invariant factor {f} must exceed 1"
                )));
            }
        }
        for w in invariant_factors.windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(FgaError::InvalidGroup(format!(
                    "invariant factor {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(FgaGroup {
            free_rank,
            invariant_factors,
        })
    }

    /// Canonical form of `Z^free_rank + sum Z/orders[i]`. Orders of 0 count as
    /// free factors, orders of +-1 vanish.
    pub fn from_orders(free_rank: usize, orders: &[BigInt]) -> Self {
        let m = IntMatrix::diagonal(orders);
        let mut g = Self::from_relations(orders.len(), &m);
        g.free_rank += free_rank;
        g
    }

    /// Cokernel of `relations: Z^r -> Z^n` (one relation per column).
    pub fn from_relations(generators: usize, relations: &IntMatrix) -> Self {
        assert_eq!(relations.rows(), generators, "relation matrix row count");
        let snf = smith_normal_form(relations);
        let diag = snf.diagonal();
        let rank = snf.rank();
        let invariant_factors = diag[..rank]
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect();
        FgaGroup {
            free_rank: generators - rank,
            invariant_factors,
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn torsion_rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Number of generators in the canonical presentation, which is also the
    /// minimum number of generators of the group.
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.generator_count() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn torsion_subgroup(&self) -> FgaGroup {
        FgaGroup::new(0, self.invariant_factors.clone()).expect("canonical")
    }

    /// Order of generator `i`; zero for free generators.
    pub fn generator_order(&self, i: usize) -> BigInt {
        if i < self.free_rank {
            BigInt::zero()
        } else {
            self.invariant_factors[i - self.free_rank].clone()
        }
    }

    /// Relations among the canonical generators, one column per cyclic
    /// factor.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.generator_count();
        let k = self.torsion_rank();
        IntMatrix::from_fn(n, k, |i, j| {
            if i == self.free_rank + j {
                self.invariant_factors[j].clone()
            } else {
                BigInt::zero()
            }
        })
    }

    /// Reduces an integer coordinate vector into normal form.
    pub fn reduce(&self, coords: &[BigInt]) -> Result<Vec<BigInt>, FgaError> {
        if coords.len() != self.generator_count() {
            return Err(FgaError::DimensionMismatch(format!(
                "{} coordinates for a group with {} generators",
                coords.len(),
                self.generator_count()
            )));
        }
        Ok(coords
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i < self.free_rank {
                    c.clone()
                } else {
                    c.mod_floor(&self.invariant_factors[i - self.free_rank])
                }
            })
            .collect())
    }

    pub fn element(&self, free: &[BigInt], torsion: &[BigInt]) -> Result<FgaElement, FgaError> {
        if free.len() != self.free_rank || torsion.len() != self.torsion_rank() {
            return Err(FgaError::DimensionMismatch(format!(
                "element shape ({}, {}) does not match group {self}",
                free.len(),
                torsion.len()
            )));
        }
        let mut coords = free.to_vec();
        coords.extend_from_slice(torsion);
        self.element_from_coords(&coords)
    }

    pub fn element_from_coords(&self, coords: &[BigInt]) -> Result<FgaElement, FgaError> {
        let coords = self.reduce(coords)?;
        Ok(FgaElement {
            group: self.clone(),
            coords,
        })
    }

    pub fn zero(&self) -> FgaElement {
        FgaElement {
            group: self.clone(),
            coords: vec![BigInt::zero(); self.generator_count()],
        }
    }

    pub fn generator(&self, i: usize) -> FgaElement {
        let mut coords = vec![BigInt::zero(); self.generator_count()];
        coords[i] = BigInt::one();
        self.element_from_coords(&coords).expect("in range")
    }

    /// Direct sum; the free parts are placed first so the result is again in
    /// canonical generator order only after re-normalization.
    pub fn direct_sum(&self, other: &FgaGroup) -> FgaGroup {
        let mut orders: Vec<BigInt> = self.invariant_factors.clone();
        orders.extend(other.invariant_factors.iter().cloned());
        FgaGroup::from_orders(self.free_rank + other.free_rank, &orders)
    }
}

impl fmt::Display for FgaGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Element in normal form: free coordinates unrestricted, torsion
/// coordinates in `[0, f_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgaElement {
    group: FgaGroup,
    coords: Vec<BigInt>,
}

impl FgaElement {
    pub fn group(&self) -> &FgaGroup {
        &self.group
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn free_part(&self) -> &[BigInt] {
        &self.coords[..self.group.free_rank]
    }

    pub fn torsion_part(&self) -> &[BigInt] {
        &self.coords[self.group.free_rank..]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn same_group(&self, other: &FgaElement) -> Result<(), FgaError> {
        if self.group != other.group {
            return Err(FgaError::GroupMismatch(format!(
                "{} vs {}",
                self.group, other.group
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FgaElement) -> Result<FgaElement, FgaError> {
        self.same_group(other)?;
        let sum: Vec<BigInt> = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        self.group.element_from_coords(&sum)
    }

    pub fn neg(&self) -> FgaElement {
        let n: Vec<BigInt> = self.coords.iter().map(|a| -a).collect();
        self.group.element_from_coords(&n).expect("same shape")
    }

    pub fn scale(&self, k: &BigInt) -> FgaElement {
        let n: Vec<BigInt> = self.coords.iter().map(|a| a * k).collect();
        self.group.element_from_coords(&n).expect("same shape")
    }

    /// Order of the element; zero when it has infinite order.
    pub fn order(&self) -> BigInt {
        if self.free_part().iter().any(|x| !x.is_zero()) {
            return BigInt::zero();
        }
        self.torsion_part()
            .iter()
            .zip(self.group.invariant_factors())
            .fold(BigInt::one(), |acc, (c, f)| {
                let o = f / c.gcd(f);
                acc.lcm(&o)
            })
            .abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn canonical_from_orders() {
        let g = FgaGroup::from_orders(1, &b(&[2, 3, 1, 4]));
        assert_eq!(g.free_rank(), 1);
        assert_eq!(g.invariant_factors(), &b(&[2, 12])[..]);
        assert_eq!(g.to_string(), "Z + Z/2 + Z/12");
        assert_eq!(FgaGroup::from_orders(0, &b(&[0, -6])).to_string(), "Z + Z/6");
    }

    #[test]
    fn rejects_bad_factors() {
        assert!(FgaGroup::new(0, b(&[1])).is_err());
        assert!(FgaGroup::new(0, b(&[4, 6])).is_err());
        assert!(FgaGroup::new(0, b(&[2, 6])).is_ok());
    }

    #[test]
    fn elements_are_reduced() {
        let g = FgaGroup::from_orders(1, &b(&[4]));
        let x = g.element(&b(&[5]), &b(&[-1])).unwrap();
        assert_eq!(x.torsion_part(), &b(&[3])[..]);
        let y = x.add(&x).unwrap();
        assert_eq!(y.coords(), &b(&[10, 2])[..]);
        assert_eq!(g.element(&b(&[0]), &b(&[2])).unwrap().order(), BigInt::from(2));
        assert!(x.add(&FgaGroup::free(1).zero()).is_err());
    }
}
