//! Normalized 2-cocycles on a finite group valued in roots of unity.

use super::{FgAbelian, FinGroup};
use crate::scalar::Cyclotomic;
use serde::{Deserialize, Serialize};

/// A normalized 2-cocycle `c: G x G -> mu_N`, stored as exponents:
/// `c(g, h) = zeta_N^{table[g][h]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle2 {
    pub group: FinGroup,
    pub root_order: u64,
    pub table: Vec<Vec<u64>>,
}

/// Outcome of the exhaustive cocycle check: either valid or the first
/// violated normalization/cocycle triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CocycleCheck {
    Valid,
    NotNormalized { g: usize },
    Violated { g: usize, h: usize, k: usize },
}

impl CocycleCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, CocycleCheck::Valid)
    }
}

impl Cocycle2 {
    pub fn new(group: FinGroup, root_order: u64, table: Vec<Vec<u64>>) -> Self {
        let n = group.order();
        assert_eq!(table.len(), n);
        assert!(table.iter().all(|r| r.len() == n));
        let table = table
            .into_iter()
            .map(|r| r.into_iter().map(|e| e % root_order).collect())
            .collect();
        Cocycle2 { group, root_order, table }
    }

    pub fn trivial(group: FinGroup) -> Self {
        let n = group.order();
        Cocycle2 { group, root_order: 1, table: vec![vec![0; n]; n] }
    }

    /// Cocycle `zeta_N^{B(a, b)}` from an integer bilinear form on a finite
    /// abelian group written additively; any bilinear form satisfies the
    /// cocycle identity.
    pub fn from_bilinear(a: &FgAbelian, root_order: u64, form: &[Vec<i64>]) -> (Self, Vec<Vec<i64>>) {
        let (group, elems) = a.to_group();
        let r = a.rank();
        assert_eq!(form.len(), r);
        let n = group.order();
        let mut table = vec![vec![0u64; n]; n];
        for (gi, g) in elems.iter().enumerate() {
            for (hi, h) in elems.iter().enumerate() {
                let mut e: i64 = 0;
                for i in 0..r {
                    for j in 0..r {
                        e += g[i] * form[i][j] * h[j];
                    }
                }
                table[gi][hi] = e.rem_euclid(root_order as i64) as u64;
            }
        }
        (Cocycle2 { group, root_order, table }, elems)
    }

    pub fn value(&self, g: usize, h: usize) -> Cyclotomic {
        Cyclotomic::root_of_unity(self.root_order, self.table[g][h] as i64).unwrap()
    }

    /// Exponent form of the value, useful for exact integer identities.
    pub fn exp(&self, g: usize, h: usize) -> u64 {
        self.table[g][h]
    }

    /// Exhaustive check of normalization and the 2-cocycle identity
    /// `c(g,h) c(gh,k) = c(g,hk) c(h,k)` over all `|G|^3` triples.
    pub fn validate(&self) -> CocycleCheck {
        let n = self.group.order();
        let e = self.group.identity();
        for g in 0..n {
            if self.table[e][g] != 0 || self.table[g][e] != 0 {
                return CocycleCheck::NotNormalized { g };
            }
        }
        let m = self.root_order;
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul(g, h);
                for k in 0..n {
                    let hk = self.group.mul(h, k);
                    let lhs = (self.table[g][h] + self.table[gh][k]) % m;
                    let rhs = (self.table[g][hk] + self.table[h][k]) % m;
                    if lhs != rhs {
                        return CocycleCheck::Violated { g, h, k };
                    }
                }
            }
        }
        CocycleCheck::Valid
    }

    /// Multiply by the coboundary of a 1-cochain `b: G -> mu_N` (given by
    /// exponents, with `b(e) = 0`): `c'(g,h) = c(g,h) * b(g) b(h) / b(gh)`.
    pub fn twist_by_coboundary(&self, b: &[u64]) -> Cocycle2 {
        let n = self.group.order();
        assert_eq!(b.len(), n);
        assert_eq!(b[self.group.identity()] % self.root_order, 0, "coboundary must be normalized");
        let m = self.root_order;
        let table = (0..n)
            .map(|g| {
                (0..n)
                    .map(|h| {
                        let gh = self.group.mul(g, h);
                        (self.table[g][h] + b[g] % m + b[h] % m + (m - b[gh] % m)) % m
                    })
                    .collect()
            })
            .collect();
        Cocycle2 { group: self.group.clone(), root_order: m, table }
    }
}

/// JSON shape for cocycle tables: `{"N": k, "table": [[e]]}` with entries
/// meaning `zeta_N^e`.
#[derive(Serialize, Deserialize)]
pub struct CocycleJson {
    #[serde(rename = "N")]
    pub n: u64,
    pub table: Vec<Vec<u64>>,
}

impl Cocycle2 {
    pub fn from_json(group: FinGroup, json: &CocycleJson) -> Self {
        Cocycle2::new(group, json.n, json.table.clone())
    }

    pub fn to_json(&self) -> CocycleJson {
        CocycleJson { n: self.root_order, table: self.table.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn klein_symplectic() -> Cocycle2 {
        // (-1)^{a1 b2} on (Z/2)^2
        let a = FgAbelian::new(vec![2, 2]);
        let (c, _) = Cocycle2::from_bilinear(&a, 2, &[vec![0, 1], vec![0, 0]]);
        c
    }

    #[test]
    fn trivial_cocycle_is_valid() {
        let c = Cocycle2::trivial(FinGroup::symmetric(3));
        assert!(c.validate().is_valid());
    }

    #[test]
    fn klein_symplectic_is_valid() {
        // oracle: exhaustive check of all 64 triples is what validate() runs
        let c = klein_symplectic();
        assert!(c.validate().is_valid());
        // it is a nontrivial cocycle
        assert!(c.table.iter().flatten().any(|&e| e != 0));
    }

    #[test]
    fn negating_one_entry_breaks_the_identity() {
        let mut c = klein_symplectic();
        // negate a non-identity entry: exponent flip mod 2
        let g = 1;
        let h = 2;
        c.table[g][h] = (c.table[g][h] + 1) % 2;
        match c.validate() {
            CocycleCheck::Violated { .. } | CocycleCheck::NotNormalized { .. } => {}
            CocycleCheck::Valid => panic!("tampered table must fail validation"),
        }
    }

    #[test]
    fn coboundary_twist_stays_valid() {
        let c = klein_symplectic();
        // not a character of (Z/2)^2, so the coboundary is nonzero
        let b = vec![0, 1, 1, 1];
        let c2 = c.twist_by_coboundary(&b);
        assert!(c2.validate().is_valid());
        assert_ne!(c2.table, c.table);
    }
}
