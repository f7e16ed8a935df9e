//! Finite groups given by multiplication tables, finitely generated abelian
//! groups with characters, and 2-cocycles valued in roots of unity.

mod abelian;
mod cocycle;

pub use abelian::{characters, free_characters, int_matrix, smith_normal_form, Character, FgAbelian, SmithDecomposition};
pub use cocycle::{Cocycle2, CocycleCheck, CocycleJson};

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is not {0}")]
    BadTable(&'static str),
    #[error("group axiom violated: {0}")]
    Axiom(String),
    #[error("characters of an infinite group require an order bound")]
    InfiniteGroup,
    #[error("invalid element encoding: {0}")]
    Encoding(String),
}

/// A finite group presented by its full multiplication table.
///
/// Elements are indices `0..order`; `mul[a][b]` is the product `a * b`.
/// Group axioms are verified exhaustively on load (`O(n^3)`).
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct FinGroup {
    order: usize,
    mul: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl std::fmt::Debug for FinGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FinGroup(order {})", self.order)
    }
}

impl FinGroup {
    pub fn from_mul_table(mul: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = mul.len();
        if n == 0 || mul.iter().any(|r| r.len() != n) {
            return Err(GroupError::BadTable("square"));
        }
        if mul.iter().flatten().any(|&x| x >= n) {
            return Err(GroupError::BadTable("closed under multiplication"));
        }
        // identity
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mul[e][g] == g && mul[g][e] == g))
            .ok_or_else(|| GroupError::Axiom("no two-sided identity".into()))?;
        // inverses
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            inverse[g] = (0..n)
                .find(|&h| mul[g][h] == identity && mul[h][g] == identity)
                .ok_or_else(|| GroupError::Axiom(format!("element {} has no inverse", g)))?;
        }
        // associativity, O(n^3)
        for a in 0..n {
            for b in 0..n {
                let ab = mul[a][b];
                for c in 0..n {
                    if mul[ab][c] != mul[a][mul[b][c]] {
                        return Err(GroupError::Axiom(format!(
                            "associativity fails at ({}, {}, {})",
                            a, b, c
                        )));
                    }
                }
            }
        }
        Ok(FinGroup { order: n, mul, identity, inverse })
    }

    /// Subgroup of the symmetric group on `degree` points generated by the
    /// given permutations (images listed per point).
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self, GroupError> {
        Ok(Self::from_permutations_with_elements(degree, generators)?.0)
    }

    /// Like [`FinGroup::from_permutations`], also returning the permutation
    /// realizing each element index.
    pub fn from_permutations_with_elements(
        degree: usize,
        generators: &[Vec<usize>],
    ) -> Result<(Self, Vec<Vec<usize>>), GroupError> {
        for g in generators {
            if g.len() != degree || {
                let mut seen = vec![false; degree];
                g.iter().any(|&i| i >= degree || std::mem::replace(&mut seen[i], true))
            } {
                return Err(GroupError::Encoding(format!("not a permutation of {} points: {:?}", degree, g)));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems: Vec<Vec<usize>> = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut frontier = vec![0usize];
        while let Some(i) = frontier.pop() {
            let base = elems[i].clone();
            for g in generators {
                let prod: Vec<usize> = (0..degree).map(|p| base[g[p]]).collect();
                if !index.contains_key(&prod) {
                    index.insert(prod.clone(), elems.len());
                    frontier.push(elems.len());
                    elems.push(prod);
                }
            }
        }
        let n = elems.len();
        let mut mul = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let prod: Vec<usize> = (0..degree).map(|p| elems[a][elems[b][p]]).collect();
                mul[a][b] = index[&prod];
            }
        }
        Ok((Self::from_mul_table(mul)?, elems))
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_mul_table(mul).unwrap()
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Direct product, with indices `a * |H| + b`.
    pub fn direct_product(&self, other: &FinGroup) -> Self {
        let (n, m) = (self.order, other.order);
        let mul = (0..n * m)
            .map(|x| {
                let (a1, b1) = (x / m, x % m);
                (0..n * m)
                    .map(|y| {
                        let (a2, b2) = (y / m, y % m);
                        self.mul[a1][a2] * m + other.mul[b1][b2]
                    })
                    .collect()
            })
            .collect();
        Self::from_mul_table(mul).unwrap()
    }

    /// Dihedral group of order `2n`: indices `0..n` rotations, `n..2n` reflections.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1);
        let sz = 2 * n;
        let mut mul = vec![vec![0usize; sz]; sz];
        for i in 0..sz {
            for j in 0..sz {
                let (ri, fi) = (i % n, i >= n);
                let (rj, fj) = (j % n, j >= n);
                // r^i f^e * r^j f^d with f r f = r^{-1}
                let rot = if fi { (ri + n - rj % n) % n } else { (ri + rj) % n };
                mul[i][j] = rot + if fi != fj { n } else { 0 };
            }
        }
        Self::from_mul_table(mul).unwrap()
    }

    /// Quaternion group of order 8: {1, -1, i, -i, j, -j, k, -k}.
    pub fn quaternion8() -> Self {
        // encode q = (s, b) with sign s in {0,1} and basis b in {1,i,j,k}
        let units = ["1", "i", "j", "k"];
        let base_mul = |a: usize, b: usize| -> (usize, usize) {
            // returns (sign flip, basis) of unit product
            match (units[a], units[b]) {
                ("1", _) => (0, b),
                (_, "1") => (0, a),
                ("i", "i") | ("j", "j") | ("k", "k") => (1, 0),
                ("i", "j") => (0, 3),
                ("j", "i") => (1, 3),
                ("j", "k") => (0, 1),
                ("k", "j") => (1, 1),
                ("k", "i") => (0, 2),
                ("i", "k") => (1, 2),
                _ => unreachable!(),
            }
        };
        let mut mul = vec![vec![0usize; 8]; 8];
        for x in 0..8 {
            for y in 0..8 {
                let (sx, bx) = (x / 4, x % 4);
                let (sy, by) = (y / 4, y % 4);
                let (flip, b) = base_mul(bx, by);
                mul[x][y] = ((sx + sy + flip) % 2) * 4 + b;
            }
        }
        Self::from_mul_table(mul).unwrap()
    }

    /// Dicyclic group of order `4n`: `<a, b | a^{2n} = 1, b^2 = a^n, b a b^{-1} = a^{-1}>`.
    pub fn dicyclic(n: usize) -> Self {
        assert!(n >= 1);
        let m = 2 * n;
        let sz = 4 * n;
        // elements a^i b^e, e in {0,1}
        let mut mul = vec![vec![0usize; sz]; sz];
        for x in 0..sz {
            for y in 0..sz {
                let (i, e) = (x % m, x / m);
                let (j, d) = (y % m, y / m);
                // a^i b^e a^j b^d; b a^j = a^{-j} b; b^2 = a^n
                let (rot, fe) = if e == 0 {
                    ((i + j) % m, d)
                } else if d == 0 {
                    ((i + m - j % m) % m, 1)
                } else {
                    ((i + m - j % m + n) % m, 0)
                };
                mul[x][y] = fe * m + rot;
            }
        }
        Self::from_mul_table(mul).unwrap()
    }

    pub fn symmetric(n: usize) -> Self {
        assert!((1..=5).contains(&n));
        if n == 1 {
            return Self::trivial();
        }
        let mut gens = vec![];
        // adjacent transposition and n-cycle
        let mut t: Vec<usize> = (0..n).collect();
        t.swap(0, 1);
        gens.push(t);
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        gens.push(cycle);
        Self::from_permutations(n, &gens).unwrap()
    }

    pub fn alternating4() -> Self {
        Self::from_permutations(4, &[vec![1, 0, 3, 2], vec![1, 2, 0, 3]]).unwrap()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order).map(|g| self.element_order(g)).fold(1, num_integer::lcm)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    /// Elements commuting with every element of `s`.
    pub fn centralizer(&self, s: &[usize]) -> Vec<usize> {
        assert!(!s.is_empty(), "centralizer of an empty set is ambiguous; pass the identity");
        (0..self.order)
            .filter(|&g| s.iter().all(|&x| self.mul[g][x] == self.mul[x][g]))
            .collect()
    }

    /// Conjugacy classes, each sorted, ordered by minimal element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = vec![];
        for x in 0..self.order {
            if seen[x] {
                continue;
            }
            let class: BTreeSet<usize> = (0..self.order).map(|g| self.conjugate(g, x)).collect();
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    /// Smallest subgroup containing `seed`, as a sorted element list.
    pub fn subgroup_closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = seed.iter().copied().collect();
        set.insert(self.identity);
        loop {
            let mut grew = false;
            let items: Vec<usize> = set.iter().copied().collect();
            for &a in &items {
                if set.insert(self.inv(a)) {
                    grew = true;
                }
                for &b in &items {
                    if set.insert(self.mul(a, b)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return set.into_iter().collect();
            }
        }
    }

    /// The commutator subgroup `[G, G]`.
    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let comms: Vec<usize> = (0..self.order)
            .flat_map(|a| (0..self.order).map(move |b| (a, b)))
            .map(|(a, b)| self.commutator(a, b))
            .collect();
        self.subgroup_closure(&comms)
    }

    /// Quotient by a normal subgroup, with the projection `G -> G/N`.
    pub fn quotient(&self, normal: &[usize]) -> (FinGroup, Vec<usize>) {
        let nset: BTreeSet<usize> = normal.iter().copied().collect();
        debug_assert!(nset.iter().all(|&n| (0..self.order).all(|g| nset.contains(&self.conjugate(g, n)))));
        let mut coset_of = vec![usize::MAX; self.order];
        let mut reps = vec![];
        for g in 0..self.order {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let k = reps.len();
            for &n in &nset {
                coset_of[self.mul[g][n]] = k;
            }
            reps.push(g);
        }
        let m = reps.len();
        let mut mul = vec![vec![0usize; m]; m];
        for a in 0..m {
            for b in 0..m {
                mul[a][b] = coset_of[self.mul[reps[a]][reps[b]]];
            }
        }
        (FinGroup::from_mul_table(mul).unwrap(), coset_of)
    }

    /// A small generating set, chosen greedily and deterministically.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = vec![];
        let mut span = vec![self.identity];
        while span.len() < self.order {
            let next = (0..self.order).find(|g| !span.contains(g)).unwrap();
            gens.push(next);
            span = self.subgroup_closure(&gens);
        }
        gens
    }

    /// Group isomorphism by backtracking over generator images.
    pub fn is_isomorphic(&self, other: &FinGroup) -> bool {
        if self.order != other.order {
            return false;
        }
        let mut self_orders: Vec<usize> = (0..self.order).map(|g| self.element_order(g)).collect();
        let mut other_orders: Vec<usize> = (0..other.order).map(|g| other.element_order(g)).collect();
        self_orders.sort_unstable();
        other_orders.sort_unstable();
        if self_orders != other_orders {
            return false;
        }
        let gens = self.generating_set();
        let mut images = vec![usize::MAX; gens.len()];
        self.extend_iso(other, &gens, &mut images, 0)
    }

    fn extend_iso(&self, other: &FinGroup, gens: &[usize], images: &mut Vec<usize>, k: usize) -> bool {
        if k == gens.len() {
            return self.check_hom_bijective(other, gens, images);
        }
        let target_order = self.element_order(gens[k]);
        for cand in 0..other.order {
            if other.element_order(cand) != target_order {
                continue;
            }
            images[k] = cand;
            // quick partial check: the map on the partial closure must be consistent
            if self.partial_consistent(other, &gens[..=k], &images[..=k]) && self.extend_iso(other, gens, images, k + 1) {
                return true;
            }
        }
        images[k] = usize::MAX;
        false
    }

    fn partial_consistent(&self, other: &FinGroup, gens: &[usize], images: &[usize]) -> bool {
        self.hom_closure(other, gens, images).is_some()
    }

    fn check_hom_bijective(&self, other: &FinGroup, gens: &[usize], images: &[usize]) -> bool {
        match self.hom_from_generators(other, gens, images) {
            Some(map) => {
                let mut seen = vec![false; other.order];
                map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
            }
            None => false,
        }
    }

    /// Close a partial generator assignment under products; `None` on a
    /// conflict. Unreached elements stay `usize::MAX`.
    fn hom_closure(&self, other: &FinGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.order];
        map[self.identity] = other.identity;
        for (&g, &img) in gens.iter().zip(images) {
            if map[g] == usize::MAX {
                map[g] = img;
            } else if map[g] != img {
                return None;
            }
        }
        let mut known: Vec<usize> = (0..self.order).filter(|&x| map[x] != usize::MAX).collect();
        loop {
            let mut grew = false;
            let snapshot = known.clone();
            for &a in &snapshot {
                for &b in &snapshot {
                    let ab = self.mul[a][b];
                    let img = other.mul[map[a]][map[b]];
                    if map[ab] == usize::MAX {
                        map[ab] = img;
                        known.push(ab);
                        grew = true;
                    } else if map[ab] != img {
                        return None;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        Some(map)
    }

    /// Extend `gens[i] -> images[i]` to a homomorphism defined on every
    /// element; `None` if inconsistent or if the generators do not generate.
    pub fn hom_from_generators(&self, other: &FinGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
        let map = self.hom_closure(other, gens, images)?;
        if map.contains(&usize::MAX) {
            return None;
        }
        Some(map)
    }

    /// All homomorphisms `self -> other`, as full element maps.
    pub fn all_homs(&self, other: &FinGroup) -> Vec<Vec<usize>> {
        let gens = self.generating_set();
        let mut out = vec![];
        let mut images = vec![0usize; gens.len()];
        self.enumerate_homs(other, &gens, &mut images, 0, &mut out);
        out
    }

    fn enumerate_homs(
        &self,
        other: &FinGroup,
        gens: &[usize],
        images: &mut Vec<usize>,
        k: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == gens.len() {
            if let Some(map) = self.hom_from_generators(other, gens, images) {
                out.push(map);
            }
            return;
        }
        let ord = self.element_order(gens[k]);
        for cand in 0..other.order {
            // image order must divide the generator order
            if !ord.is_multiple_of(other.element_order(cand)) {
                continue;
            }
            images[k] = cand;
            self.enumerate_homs(other, gens, images, k + 1, out);
        }
    }

    /// Characters of an abelian `FinGroup`, as exact value vectors indexed by
    /// element. Enumerated by depth-first extension over a generating set.
    pub fn abelian_characters(&self) -> Result<Vec<Vec<crate::scalar::Cyclotomic>>, GroupError> {
        if !self.is_abelian() {
            return Err(GroupError::Axiom("characters require an abelian group".into()));
        }
        let e = self.exponent() as u64;
        let zeta_pows: Vec<crate::scalar::Cyclotomic> = (0..e)
            .map(|k| crate::scalar::Cyclotomic::root_of_unity(e, k as i64).unwrap())
            .collect();
        let gens = self.generating_set();
        let mut out = vec![];
        let mut expo = vec![0u64; gens.len()];
        self.enumerate_characters(&gens, &mut expo, 0, e, &zeta_pows, &mut out);
        out.sort_by(|a, b| {
            // deterministic order: lexicographic on value exponents is lost; sort by string
            format!("{:?}", a).cmp(&format!("{:?}", b))
        });
        Ok(out)
    }

    fn enumerate_characters(
        &self,
        gens: &[usize],
        expo: &mut Vec<u64>,
        k: usize,
        e: u64,
        zeta_pows: &[crate::scalar::Cyclotomic],
        out: &mut Vec<Vec<crate::scalar::Cyclotomic>>,
    ) {
        if k == gens.len() {
            // extend multiplicatively over the whole group using exponents mod e
            let mut expof = vec![u64::MAX; self.order];
            expof[self.identity] = 0;
            let mut known = vec![self.identity];
            let mut idx = 0;
            while idx < known.len() {
                let a = known[idx];
                idx += 1;
                for (i, &g) in gens.iter().enumerate() {
                    let ag = self.mul(a, g);
                    let v = (expof[a] + expo[i]) % e;
                    if expof[ag] == u64::MAX {
                        expof[ag] = v;
                        known.push(ag);
                    } else if expof[ag] != v {
                        return; // inconsistent assignment
                    }
                }
            }
            // consistency on all products
            for a in 0..self.order {
                for b in 0..self.order {
                    if (expof[a] + expof[b]) % e != expof[self.mul(a, b)] {
                        return;
                    }
                }
            }
            out.push(expof.into_iter().map(|x| zeta_pows[x as usize].clone()).collect());
            return;
        }
        let ord = self.element_order(gens[k]) as u64;
        let step = e / ord;
        for j in 0..ord {
            expo[k] = j * step;
            self.enumerate_characters(gens, expo, k + 1, e, zeta_pows, out);
        }
    }
}

/// JSON form per the external interface: either a full table or permutation
/// generators.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupJson {
    Table { order: usize, mul: Vec<Vec<usize>> },
    Permutations { perm_generators: Vec<Vec<usize>>, degree: usize },
}

impl FinGroup {
    pub fn from_json(json: &GroupJson) -> Result<Self, GroupError> {
        match json {
            GroupJson::Table { order, mul } => {
                if mul.len() != *order {
                    return Err(GroupError::BadTable("of the declared order"));
                }
                Self::from_mul_table(mul.clone())
            }
            GroupJson::Permutations { perm_generators, degree } => {
                Self::from_permutations(*degree, perm_generators)
            }
        }
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson::Table { order: self.order, mul: self.mul.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_structure() {
        let s3 = FinGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(s3.conjugacy_classes().len(), 3);
        let mut sizes: Vec<usize> = s3.conjugacy_classes().iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn centralizer_examples() {
        let s3 = FinGroup::symmetric(3);
        assert_eq!(s3.centralizer(&[s3.identity()]).len(), 6);
        // pick a transposition: an element of order 2
        let t = (0..6).find(|&g| s3.element_order(g) == 2).unwrap();
        let cent = s3.centralizer(&[t]);
        assert_eq!(cent.len(), 2);
        // brute scan oracle
        let brute: Vec<usize> = (0..6).filter(|&g| s3.mul(g, t) == s3.mul(t, g)).collect();
        assert_eq!(cent, brute);

        let z4 = FinGroup::cyclic(4);
        assert_eq!(z4.centralizer(&[3]).len(), 4);
    }

    #[test]
    fn quaternion_and_dicyclic() {
        let q8 = FinGroup::quaternion8();
        assert_eq!(q8.order(), 8);
        assert_eq!(q8.conjugacy_classes().len(), 5);
        assert_eq!(q8.commutator_subgroup().len(), 2);
        let dic3 = FinGroup::dicyclic(3);
        assert_eq!(dic3.order(), 12);
        assert!(!dic3.is_isomorphic(&FinGroup::alternating4()));
        assert!(!dic3.is_isomorphic(&FinGroup::dihedral(6)));
    }

    #[test]
    fn iso_classes_of_order_eight() {
        let d4 = FinGroup::dihedral(4);
        let q8 = FinGroup::quaternion8();
        let z8 = FinGroup::cyclic(8);
        let z4xz2 = FinGroup::cyclic(4).direct_product(&FinGroup::cyclic(2));
        assert!(!d4.is_isomorphic(&q8));
        assert!(!z8.is_isomorphic(&z4xz2));
        assert!(d4.is_isomorphic(&FinGroup::dihedral(4)));
        // Z/6 = Z/2 x Z/3
        let z6 = FinGroup::cyclic(6);
        assert!(z6.is_isomorphic(&FinGroup::cyclic(2).direct_product(&FinGroup::cyclic(3))));
    }

    #[test]
    fn hom_counts() {
        let s3 = FinGroup::symmetric(3);
        assert_eq!(s3.all_homs(&s3).len(), 10);
        let z2 = FinGroup::cyclic(2);
        assert_eq!(z2.all_homs(&s3).len(), 4); // identity image + 3 transpositions
        let z4 = FinGroup::cyclic(4);
        assert_eq!(z4.all_homs(&z2).len(), 2);
    }

    #[test]
    fn abelianization_of_s3() {
        let s3 = FinGroup::symmetric(3);
        let comm = s3.commutator_subgroup();
        assert_eq!(comm.len(), 3);
        let (q, _) = s3.quotient(&comm);
        assert_eq!(q.order(), 2);
    }

    #[test]
    fn abelian_characters_of_z6() {
        let z6 = FinGroup::cyclic(6);
        let chars = z6.abelian_characters().unwrap();
        assert_eq!(chars.len(), 6);
        // character table is nonsingular
        let m = crate::scalar::ExactMatrix::from_fn(6, 6, |i, j| chars[i][j].clone());
        assert_eq!(m.rank(), 6);
    }

    #[test]
    fn permutation_group_json_round_trip() {
        let s3 = FinGroup::symmetric(3);
        let json = serde_json::to_string(&s3.to_json()).unwrap();
        let parsed: GroupJson = serde_json::from_str(&json).unwrap();
        let back = FinGroup::from_json(&parsed).unwrap();
        assert!(back.is_isomorphic(&s3));
    }

    #[test]
    fn bad_table_rejected() {
        // break associativity by mangling one entry of Z/4
        let mut mul = FinGroup::cyclic(4).mul.clone();
        mul[1][1] = 3;
        assert!(FinGroup::from_mul_table(mul).is_err());
    }
}
