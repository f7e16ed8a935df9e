//! Finitely generated abelian groups in invariant-factor form, their
//! finite-order characters, and integer Smith normal form.

use super::{FinGroup, GroupError};
use crate::scalar::Cyclotomic;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// `Z/d_1 + Z/d_2 + ... + Z/d_k` with `d_i | d_{i+1}` for nonzero entries;
/// `d_i = 0` encodes a free factor `Z`. Elements are exponent vectors reduced
/// mod `d_i` where `d_i > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FgAbelian {
    pub invariant_factors: Vec<u64>,
}

impl FgAbelian {
    pub fn new(invariant_factors: Vec<u64>) -> Self {
        let nonzero: Vec<u64> = invariant_factors.iter().copied().filter(|&d| d != 0).collect();
        for w in nonzero.windows(2) {
            assert!(w[1] % w[0] == 0, "invariant factors must divide in order");
        }
        assert!(nonzero.iter().all(|&d| d > 1), "factors of 1 are dropped");
        FgAbelian { invariant_factors }
    }

    pub fn trivial() -> Self {
        FgAbelian { invariant_factors: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        if n == 1 { Self::trivial() } else { Self::new(vec![n]) }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelian { invariant_factors: vec![0; rank] }
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn is_finite(&self) -> bool {
        self.invariant_factors.iter().all(|&d| d != 0)
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.invariant_factors.iter().product::<u64>().max(1))
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.rank());
        v.iter()
            .zip(&self.invariant_factors)
            .map(|(&x, &d)| if d == 0 { x } else { x.rem_euclid(d as i64) })
            .collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    /// All elements of a finite group, in lexicographic exponent order.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        assert!(self.is_finite(), "cannot enumerate an infinite group");
        let mut out = vec![vec![]];
        for &d in &self.invariant_factors {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d as i64).map(move |x| {
                        let mut v = prefix.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// The same group as a `FinGroup` with elements indexed in
    /// [`FgAbelian::elements`] order.
    pub fn to_group(&self) -> (FinGroup, Vec<Vec<i64>>) {
        let elems = self.elements();
        let index = |v: &[i64]| elems.iter().position(|e| e == v).unwrap();
        let n = elems.len();
        let mul = (0..n)
            .map(|a| (0..n).map(|b| index(&self.add(&elems[a], &elems[b]))).collect())
            .collect();
        (FinGroup::from_mul_table(mul).unwrap(), elems)
    }
}

/// A finite-order character of an [`FgAbelian`], stored as a root-of-unity
/// exponent per cyclic factor: the value on generator `i` is
/// `zeta_{orders[i]}^{exps[i]}`.
///
/// For a torsion factor `Z/d` the order divides `d`; for a free factor any
/// root-of-unity order is allowed (only finite-order characters are exactly
/// representable).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Character {
    pub target: FgAbelian,
    pub orders: Vec<u64>,
    pub exps: Vec<u64>,
}

impl Character {
    pub fn new(target: FgAbelian, orders: Vec<u64>, exps: Vec<u64>) -> Result<Self, GroupError> {
        if orders.len() != target.rank() || exps.len() != target.rank() {
            return Err(GroupError::Encoding("character data must match the rank".into()));
        }
        for (&o, &d) in orders.iter().zip(&target.invariant_factors) {
            if o == 0 {
                return Err(GroupError::Encoding("character order must be positive".into()));
            }
            if d != 0 && d % o != 0 {
                return Err(GroupError::Encoding(format!(
                    "value order {} does not divide the factor order {}",
                    o, d
                )));
            }
        }
        Ok(Character { target, orders, exps })
    }

    pub fn trivial(target: &FgAbelian) -> Self {
        let r = target.rank();
        Character { target: target.clone(), orders: vec![1; r], exps: vec![0; r] }
    }

    pub fn evaluate(&self, v: &[i64]) -> Cyclotomic {
        let v = self.target.reduce(v);
        let mut out = Cyclotomic::one();
        for ((&x, &o), &e) in v.iter().zip(&self.orders).zip(&self.exps) {
            if o == 1 || e == 0 {
                continue;
            }
            let k = (x.rem_euclid(o as i64) as u64 * e) % o;
            out = &out * &Cyclotomic::root_of_unity(o, k as i64).unwrap();
        }
        out
    }

    pub fn pointwise_mul(&self, other: &Character) -> Character {
        assert_eq!(self.target, other.target);
        let mut orders = vec![];
        let mut exps = vec![];
        for i in 0..self.target.rank() {
            let l = num_integer::lcm(self.orders[i], other.orders[i]);
            let e = (self.exps[i] * (l / self.orders[i]) + other.exps[i] * (l / other.orders[i])) % l;
            orders.push(l);
            exps.push(e);
        }
        Character { target: self.target.clone(), orders, exps }
    }
}

/// All `|A|` characters of a finite abelian group, pairwise distinct.
///
/// Errors on infinite groups: only finite-order characters are representable,
/// so free factors need an explicit order choice
/// ([`free_characters`]).
pub fn characters(a: &FgAbelian) -> Result<Vec<Character>, GroupError> {
    if !a.is_finite() {
        return Err(GroupError::InfiniteGroup);
    }
    let mut out = vec![Character::trivial(a)];
    for (i, &d) in a.invariant_factors.iter().enumerate() {
        out = out
            .into_iter()
            .flat_map(|base| {
                (0..d).map(move |k| {
                    let mut c = base.clone();
                    c.orders[i] = d;
                    c.exps[i] = k;
                    c
                })
            })
            .collect();
    }
    Ok(out)
}

/// The generator-indexed family of finite-order characters on a group with
/// free factors: torsion factors run over all characters, free factors over
/// `zeta_n^k` for the chosen root-of-unity order `n`.
pub fn free_characters(a: &FgAbelian, free_order: u64) -> Vec<Character> {
    assert!(free_order >= 1);
    let mut out = vec![Character::trivial(a)];
    for (i, &d) in a.invariant_factors.iter().enumerate() {
        let (ord, count) = if d == 0 { (free_order, free_order) } else { (d, d) };
        out = out
            .into_iter()
            .flat_map(|base| {
                (0..count).map(move |k| {
                    let mut c = base.clone();
                    c.orders[i] = ord;
                    c.exps[i] = k;
                    c
                })
            })
            .collect();
    }
    out
}

/// Smith normal form `P * M * Q = D` over the integers, with the cokernel
/// presentation of `M` (as a map `Z^cols -> Z^rows`, cokernel `Z^rows / im`).
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    /// Diagonal entries of `D` (nonnegative, each dividing the next).
    pub diagonal: Vec<BigInt>,
    pub p: Vec<Vec<BigInt>>,
    pub q: Vec<Vec<BigInt>>,
    /// Cokernel in invariant-factor form (factors of 1 dropped, 0 for free).
    pub cokernel: FgAbelian,
}

impl SmithDecomposition {
    /// Coordinates of `x in Z^rows` in the cokernel presentation.
    pub fn project(&self, x: &[BigInt]) -> Vec<i64> {
        let rows = self.p.len();
        assert_eq!(x.len(), rows);
        let mut coords = vec![];
        for (i, d) in self.diagonal.iter().enumerate() {
            if *d == BigInt::from(1) {
                continue;
            }
            let y: BigInt = (0..rows).map(|j| &self.p[i][j] * &x[j]).sum();
            let v = if d.is_zero() {
                y
            } else {
                ((y % d) + d) % d
            };
            coords.push(i64::try_from(v).expect("cokernel coordinate fits in i64"));
        }
        // rows beyond the diagonal are free factors
        for i in self.diagonal.len()..rows {
            let y: BigInt = (0..rows).map(|j| &self.p[i][j] * &x[j]).sum();
            coords.push(i64::try_from(y).expect("cokernel coordinate fits in i64"));
        }
        coords
    }
}

fn identity_int(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect()
}

/// Smith normal form of an integer matrix by elementary row/column
/// operations, tracking the change-of-basis matrices.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> SmithDecomposition {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut p = identity_int(rows);
    let mut q = identity_int(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // find a nonzero pivot of minimal absolute value in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        p.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in q.iter_mut() {
            row.swap(t, pj);
        }

        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let f = &a[i][t] / &a[t][t];
                    for j in 0..cols {
                        let v = &f * &a[t][j];
                        a[i][j] -= v;
                    }
                    for j in 0..rows {
                        let v = &f * &p[t][j];
                        p[i][j] -= v;
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                        p.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let f = &a[t][j] / &a[t][t];
                    for i in 0..rows {
                        let v = &f * &a[i][t];
                        a[i][j] -= v;
                    }
                    for i in 0..cols {
                        let v = &f * &q[i][t];
                        q[i][j] -= v;
                    }
                    if !a[t][j].is_zero() {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                        for row in q.iter_mut() {
                            row.swap(t, j);
                        }
                        dirty = true;
                    }
                }
            }
        }

        // divisibility: fold any entry not divisible by the pivot into column t
        let mut fixed = false;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if (&a[i][j] % &a[t][t]) != BigInt::zero() {
                    for jj in 0..cols {
                        let v = a[i][jj].clone();
                        a[t][jj] += v;
                    }
                    for jj in 0..rows {
                        let v = p[i][jj].clone();
                        p[t][jj] += v;
                    }
                    fixed = true;
                    break 'scan;
                }
            }
        }
        if fixed {
            continue; // re-run elimination at the same t
        }
        if a[t][t].sign() == num_bigint::Sign::Minus {
            for j in 0..cols {
                a[t][j] = -a[t][j].clone();
            }
            for j in 0..rows {
                p[t][j] = -p[t][j].clone();
            }
        }
        t += 1;
    }

    let diagonal: Vec<BigInt> = (0..rows.min(cols)).map(|i| a[i][i].clone()).collect();
    let mut factors: Vec<u64> = diagonal
        .iter()
        .filter(|d| !d.is_zero())
        .map(|d| u64::try_from(d).expect("invariant factor fits in u64"))
        .filter(|&d| d > 1)
        .collect();
    let free_rank = rows - diagonal.iter().filter(|d| !d.is_zero()).count();
    factors.extend(std::iter::repeat_n(0, free_rank));
    SmithDecomposition { diagonal, p, q, cokernel: FgAbelian::new(factors) }
}

pub fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = a.len();
        let m = b[0].len();
        let k = b.len();
        (0..n)
            .map(|i| (0..m).map(|j| (0..k).map(|l| &a[i][l] * &b[l][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn snf_diag_2_4() {
        let m = int_matrix(&[&[2, 0], &[0, 4]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.cokernel, FgAbelian::new(vec![2, 4]));
        let pm = mat_mul(&s.p, &m);
        let pmq = mat_mul(&pm, &s.q);
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { s.diagonal[i].clone() } else { BigInt::zero() };
                assert_eq!(pmq[i][j], expect);
            }
        }
    }

    #[test]
    fn snf_2_3_gives_z6() {
        let m = int_matrix(&[&[2, 0], &[0, 3]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.cokernel, FgAbelian::cyclic(6));
        // oracle: enumerate cokernel elements of Z^2 / <(2,0),(0,3)>: 6 of them, cyclic
        let mut seen = std::collections::BTreeSet::new();
        for x in 0..2i64 {
            for y in 0..3i64 {
                seen.insert((x, y));
            }
        }
        assert_eq!(seen.len(), 6);
        // projection sends (1,1) to a generator of order 6
        let g = s.project(&[BigInt::from(1), BigInt::from(1)]);
        let a = &s.cokernel;
        let mut acc = a.zero();
        let mut ord = 0;
        loop {
            acc = a.add(&acc, &g);
            ord += 1;
            if acc == a.zero() {
                break;
            }
        }
        assert_eq!(ord, 6);
    }

    #[test]
    fn snf_zero_matrix_gives_free() {
        let m = int_matrix(&[&[0]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.cokernel, FgAbelian::free(1));
    }

    #[test]
    fn snf_divisibility_case() {
        // matrix requiring the divisibility fixup
        let m = int_matrix(&[&[2, 1], &[0, 2]]);
        let s = smith_normal_form(&m);
        // det = 4, coker of order 4; invariant factors must divide in order
        assert_eq!(s.cokernel.order(), Some(4));
        let nz: Vec<u64> = s.cokernel.invariant_factors.clone();
        for w in nz.windows(2) {
            assert!(w[1] % w[0] == 0);
        }
        let pm = mat_mul(&s.p, &m);
        let pmq = mat_mul(&pm, &s.q);
        assert_eq!(pmq[0][1], BigInt::zero());
        assert_eq!(pmq[1][0], BigInt::zero());
    }

    #[test]
    fn characters_of_z3() {
        let a = FgAbelian::cyclic(3);
        let chars = characters(&a).unwrap();
        assert_eq!(chars.len(), 3);
        let values: Vec<Cyclotomic> = chars.iter().map(|c| c.evaluate(&[1])).collect();
        let z3 = Cyclotomic::root_of_unity(3, 1).unwrap();
        assert!(values.contains(&Cyclotomic::one()));
        assert!(values.contains(&z3));
        assert!(values.contains(&z3.pow(2)));
    }

    #[test]
    fn characters_of_klein_four_are_signs() {
        let a = FgAbelian::new(vec![2, 2]);
        let chars = characters(&a).unwrap();
        assert_eq!(chars.len(), 4);
        for c in &chars {
            for v in a.elements() {
                let val = c.evaluate(&v);
                assert!(val == Cyclotomic::one() || val == Cyclotomic::from_integer(-1));
            }
        }
    }

    #[test]
    fn z6_character_table_rank() {
        let a = FgAbelian::cyclic(6);
        let chars = characters(&a).unwrap();
        let elems = a.elements();
        let m = crate::scalar::ExactMatrix::from_fn(6, 6, |i, j| chars[i].evaluate(&elems[j]));
        assert_eq!(m.rank(), 6);
    }

    #[test]
    fn characters_form_a_group_under_pointwise_product() {
        let a = FgAbelian::new(vec![2, 4]);
        let chars = characters(&a).unwrap();
        assert_eq!(chars.len(), 8);
        // closure: product of any two characters evaluates like some third
        let elems = a.elements();
        for x in &chars {
            for y in &chars {
                let p = x.pointwise_mul(y);
                let found = chars.iter().any(|c| elems.iter().all(|e| c.evaluate(e) == p.evaluate(e)));
                assert!(found);
            }
        }
    }

    #[test]
    fn infinite_enumeration_rejected() {
        assert_eq!(characters(&FgAbelian::free(1)), Err(GroupError::InfiniteGroup));
        let fam = free_characters(&FgAbelian::free(1), 4);
        assert_eq!(fam.len(), 4);
    }

    #[test]
    fn character_homomorphism_property() {
        let a = FgAbelian::new(vec![2, 6]);
        for c in characters(&a).unwrap() {
            for x in a.elements() {
                for y in a.elements() {
                    let lhs = c.evaluate(&a.add(&x, &y));
                    let rhs = &c.evaluate(&x) * &c.evaluate(&y);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
