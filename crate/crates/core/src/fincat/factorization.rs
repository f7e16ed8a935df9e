//! Orthogonal and nested factorization systems on finite categories, and
//! Postnikov-style factorizations of groupoid functors.

use super::{CatError, FinCategory};
use crate::groupoid::{FinGroupoid, GroupoidFunctor};
use std::collections::HashMap;
use std::sync::Arc;

/// A pair of morphism classes `(L, R)`, stored as membership vectors.
#[derive(Clone, Debug)]
pub struct FactorizationSystem {
    pub left: Vec<bool>,
    pub right: Vec<bool>,
}

impl FactorizationSystem {
    pub fn new(left: Vec<bool>, right: Vec<bool>) -> Self {
        FactorizationSystem { left, right }
    }

    /// The trivial system: left class everything, right class the isos.
    pub fn trivial_left(cat: &FinCategory) -> Self {
        FactorizationSystem {
            left: vec![true; cat.morphism_count()],
            right: (0..cat.morphism_count()).map(|m| cat.is_iso(m)).collect(),
        }
    }

    /// The trivial system: left class the isos, right class everything.
    pub fn trivial_right(cat: &FinCategory) -> Self {
        FactorizationSystem {
            left: (0..cat.morphism_count()).map(|m| cat.is_iso(m)).collect(),
            right: vec![true; cat.morphism_count()],
        }
    }

    /// Surjection/injection classes for categories built by
    /// [`FinCategory::finset`], detected order-theoretically: a function is
    /// injective iff it is monic, surjective iff epic. Here we use the
    /// cardinality shortcut: `m -> n` is injective iff it has a left inverse
    /// or `m = 0`, surjective iff it has a right inverse.
    pub fn surj_inj(cat: &FinCategory) -> Self {
        let m = cat.morphism_count();
        let mut left = vec![false; m]; // surjections
        let mut right = vec![false; m]; // injections
        for x in 0..m {
            let has_right_inverse = cat
                .morphisms_from(cat.tgt(x))
                .iter()
                .any(|&s| cat.tgt(s) == cat.src(x) && cat.compose(x, s) == Some(cat.identity_of(cat.tgt(x))));
            let has_left_inverse = cat
                .morphisms_from(cat.tgt(x))
                .iter()
                .any(|&s| cat.tgt(s) == cat.src(x) && cat.compose(s, x) == Some(cat.identity_of(cat.src(x))));
            // the empty set: the unique map 0 -> n is injective; 0 -> 0 is both
            let src_empty_inj = cat.hom(cat.src(x), cat.src(x)).len() == 1 && cat.morphisms_from(cat.src(x)).iter().all(|&y| cat.hom(cat.src(x), cat.tgt(y)).len() <= 1);
            left[x] = has_right_inverse || (cat.tgt(x) == cat.src(x) && cat.is_iso(x));
            right[x] = has_left_inverse || src_empty_inj;
            // surjections onto the empty set: only 0 -> 0
            if cat.is_iso(x) {
                left[x] = true;
                right[x] = true;
            }
        }
        FactorizationSystem { left, right }
    }
}

/// Outcome of the exhaustive factorization-system check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorizationCheck {
    Valid,
    Failure { morphism: Option<usize>, reason: String },
}

impl FactorizationCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, FactorizationCheck::Valid)
    }

    fn fail(morphism: Option<usize>, reason: impl Into<String>) -> Self {
        FactorizationCheck::Failure { morphism, reason: reason.into() }
    }
}

fn subcategory_check(cat: &FinCategory, class: &[bool], name: &str) -> Option<FactorizationCheck> {
    if class.len() != cat.morphism_count() {
        return Some(FactorizationCheck::fail(None, format!("{} does not cover the morphisms", name)));
    }
    for x in 0..cat.morphism_count() {
        if cat.is_iso(x) && !class[x] {
            return Some(FactorizationCheck::fail(
                Some(x),
                format!("{} must contain every isomorphism", name),
            ));
        }
    }
    for f in 0..cat.morphism_count() {
        if !class[f] {
            continue;
        }
        for &g in cat.morphisms_from(cat.tgt(f)) {
            if class[g] {
                let gf = cat.compose(g, f).unwrap();
                if !class[gf] {
                    return Some(FactorizationCheck::fail(
                        Some(gf),
                        format!("{} is not closed under composition", name),
                    ));
                }
            }
        }
    }
    None
}

/// Check that `(L, R)` is an orthogonal factorization system: both classes
/// are subcategories containing the isos, and every morphism has a
/// connected, automorphism-free groupoid of `(L, R)`-factorizations.
pub fn validate_factorization(cat: &FinCategory, fs: &FactorizationSystem) -> FactorizationCheck {
    if let Some(fail) = subcategory_check(cat, &fs.left, "the left class") {
        return fail;
    }
    if let Some(fail) = subcategory_check(cat, &fs.right, "the right class") {
        return fail;
    }
    for f in 0..cat.morphism_count() {
        // factorization pairs (l, r) with r . l = f
        let mut pairs: Vec<(usize, usize)> = vec![];
        for &l in cat.morphisms_from(cat.src(f)) {
            if !fs.left[l] {
                continue;
            }
            for &r in cat.morphisms_from(cat.tgt(l)) {
                if fs.right[r] && cat.tgt(r) == cat.tgt(f) && cat.compose(r, l) == Some(f) {
                    pairs.push((l, r));
                }
            }
        }
        if pairs.is_empty() {
            return FactorizationCheck::fail(Some(f), "no (L, R)-factorization exists");
        }
        let index: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut parent: Vec<usize> = (0..pairs.len()).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        let mut auts = vec![0usize; pairs.len()];
        for (i, &(l, r)) in pairs.iter().enumerate() {
            let mid = cat.tgt(l);
            for &u in cat.morphisms_from(mid) {
                if !cat.is_iso(u) {
                    continue;
                }
                let l2 = cat.compose(u, l).unwrap();
                let r2 = cat.compose(r, cat.inverse_of(u).unwrap()).unwrap();
                if let Some(&j) = index.get(&(l2, r2)) {
                    if j == i {
                        auts[i] += 1;
                    }
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        let root = find(&mut parent, 0);
        if (0..pairs.len()).any(|i| find(&mut parent, i) != root) {
            return FactorizationCheck::fail(Some(f), "factorization groupoid is disconnected");
        }
        if auts.iter().any(|&a| a != 1) {
            return FactorizationCheck::fail(Some(f), "factorization is not unique up to unique isomorphism");
        }
    }
    FactorizationCheck::Valid
}

/// An ordered list of factorization systems `(L^(k), R^(k))`, `k = 1..=n`,
/// with `R^(k-1)` contained in `R^(k)`.
#[derive(Clone, Debug)]
pub struct NestedSystem {
    pub systems: Vec<FactorizationSystem>,
}

impl NestedSystem {
    pub fn new(systems: Vec<FactorizationSystem>) -> Self {
        assert!(!systems.is_empty());
        NestedSystem { systems }
    }

    pub fn single(fs: FactorizationSystem) -> Self {
        NestedSystem { systems: vec![fs] }
    }

    /// The derived classes `T^(0) = R^(1)`, `T^(l) = R^(l+1) n L^(l)`,
    /// `T^(n) = L^(n)`, each verified to be a subcategory.
    pub fn derived_classes(&self, cat: &FinCategory) -> Result<Vec<Vec<bool>>, CatError> {
        let n = self.systems.len();
        let m = cat.morphism_count();
        for s in &self.systems {
            if s.left.len() != m || s.right.len() != m {
                return Err(CatError::Encoding("factorization classes must cover the morphisms".into()));
            }
        }
        for k in 1..n {
            for x in 0..m {
                if self.systems[k - 1].right[x] && !self.systems[k].right[x] {
                    return Err(CatError::NotSubcategory(format!(
                        "nesting fails: R^({}) is not inside R^({}) at morphism {}",
                        k, k + 1, x
                    )));
                }
            }
        }
        let mut classes = Vec::with_capacity(n + 1);
        for level in 0..=n {
            let class: Vec<bool> = (0..m)
                .map(|x| {
                    if level == 0 {
                        self.systems[0].right[x]
                    } else if level == n {
                        self.systems[n - 1].left[x]
                    } else {
                        self.systems[level].right[x] && self.systems[level - 1].left[x]
                    }
                })
                .collect();
            if let Some(FactorizationCheck::Failure { reason, .. }) =
                subcategory_check(cat, &class, &format!("T^({})", level))
            {
                return Err(CatError::NotSubcategory(reason));
            }
            classes.push(class);
        }
        Ok(classes)
    }
}

/// Which stage of the Moore-Postnikov factorization to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PostnikovLevel {
    /// `(-1)`-stage: surjective-on-components followed by an inclusion of
    /// components that is an isomorphism on automorphism groups.
    MinusOne,
    /// `0`-stage: bijective-on-components and surjective on automorphism
    /// groups, followed by a faithful functor.
    Zero,
}

/// A factorization `r . l = f` through a materialized middle groupoid.
pub struct PostnikovFactorization {
    pub left: GroupoidFunctor,
    pub middle: Arc<FinGroupoid>,
    pub right: GroupoidFunctor,
}

/// Factor a groupoid functor through its Moore-Postnikov stage.
pub fn postnikov_factor(f: &GroupoidFunctor, level: PostnikovLevel) -> PostnikovFactorization {
    match level {
        PostnikovLevel::MinusOne => postnikov_minus_one(f),
        PostnikovLevel::Zero => postnikov_zero(f),
    }
}

fn postnikov_minus_one(f: &GroupoidFunctor) -> PostnikovFactorization {
    let y = &f.target;
    let comp_of = y.component_index();
    let hit: Vec<bool> = {
        let mut hit = vec![false; y.components().len()];
        for &obj in &f.obj_map {
            hit[comp_of[obj]] = true;
        }
        hit
    };
    let objects: Vec<usize> = (0..y.object_count()).filter(|&o| hit[comp_of[o]]).collect();
    let obj_index: HashMap<usize, usize> = objects.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let morphisms: Vec<usize> = (0..y.morphism_count())
        .filter(|&m| obj_index.contains_key(&y.src(m)))
        .collect();
    let mor_index: HashMap<usize, usize> = morphisms.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mor_pairs: Vec<(usize, usize)> = morphisms
        .iter()
        .map(|&m| (obj_index[&y.src(m)], obj_index[&y.tgt(m)]))
        .collect();
    let identity: Vec<usize> = objects.iter().map(|&o| mor_index[&y.identity_of(o)]).collect();
    let mut compose = HashMap::new();
    for (j, &g) in morphisms.iter().enumerate() {
        for (i, &h) in morphisms.iter().enumerate() {
            if y.tgt(h) == y.src(g) {
                compose.insert((j, i), mor_index[&y.compose(g, h).unwrap()]);
            }
        }
    }
    let middle = Arc::new(
        FinGroupoid::from_table(objects.len(), mor_pairs, identity, compose)
            .expect("full subgroupoid on components"),
    );
    let left = GroupoidFunctor {
        source: Arc::clone(&f.source),
        target: Arc::clone(&middle),
        obj_map: f.obj_map.iter().map(|&o| obj_index[&o]).collect(),
        mor_map: f.mor_map.iter().map(|&m| mor_index[&m]).collect(),
    };
    let right = GroupoidFunctor {
        source: Arc::clone(&middle),
        target: Arc::clone(&f.target),
        obj_map: objects,
        mor_map: morphisms,
    };
    PostnikovFactorization { left, middle, right }
}

fn postnikov_zero(f: &GroupoidFunctor) -> PostnikovFactorization {
    let x = &f.source;
    let y = &f.target;
    // morphisms of the middle: (src, tgt, image morphism), deduplicated
    let mut keys: Vec<(usize, usize, usize)> = vec![];
    let mut key_index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for u in 0..x.morphism_count() {
        let key = (x.src(u), x.tgt(u), f.mor_map[u]);
        key_index.entry(key).or_insert_with(|| {
            keys.push(key);
            keys.len() - 1
        });
    }
    let mor_pairs: Vec<(usize, usize)> = keys.iter().map(|&(s, t, _)| (s, t)).collect();
    let identity: Vec<usize> = (0..x.object_count())
        .map(|o| key_index[&(o, o, f.mor_map[x.identity_of(o)])])
        .collect();
    let mut compose = HashMap::new();
    for (j, &(s2, _, w)) in keys.iter().enumerate() {
        for (i, &(s1, t1, v)) in keys.iter().enumerate() {
            if t1 == s2 {
                let wv = y.compose(w, v).expect("images compose");
                compose.insert((j, i), key_index[&(s1, keys[j].1, wv)]);
            }
        }
    }
    let middle = Arc::new(
        FinGroupoid::from_table(x.object_count(), mor_pairs, identity, compose)
            .expect("image-homs groupoid"),
    );
    let left = GroupoidFunctor {
        source: Arc::clone(&f.source),
        target: Arc::clone(&middle),
        obj_map: (0..x.object_count()).collect(),
        mor_map: (0..x.morphism_count())
            .map(|u| key_index[&(x.src(u), x.tgt(u), f.mor_map[u])])
            .collect(),
    };
    let right = GroupoidFunctor {
        source: Arc::clone(&middle),
        target: Arc::clone(&f.target),
        obj_map: f.obj_map.clone(),
        mor_map: keys.iter().map(|&(_, _, v)| v).collect(),
    };
    PostnikovFactorization { left, middle, right }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{factorized_invert, cat_linearize, moebius_invert, VecFunctor};
    use crate::fingroup::FinGroup;

    #[test]
    fn surj_inj_is_orthogonal_on_finset3() {
        let cat = FinCategory::finset(3);
        let fs = FactorizationSystem::surj_inj(&cat);
        assert!(validate_factorization(&cat, &fs).is_valid());
    }

    #[test]
    fn trivial_systems_are_orthogonal() {
        let cat = FinCategory::divisor_poset(12);
        assert!(validate_factorization(&cat, &FactorizationSystem::trivial_left(&cat)).is_valid());
        assert!(validate_factorization(&cat, &FactorizationSystem::trivial_right(&cat)).is_valid());
    }

    #[test]
    fn iso_iso_fails_on_a_category_with_a_non_iso() {
        let cat = FinCategory::poset(2, |i, j| i <= j);
        let isos: Vec<bool> = (0..cat.morphism_count()).map(|m| cat.is_iso(m)).collect();
        let fs = FactorizationSystem::new(isos.clone(), isos);
        let check = validate_factorization(&cat, &fs);
        assert!(!check.is_valid());
    }

    #[test]
    fn factorized_inverse_of_finset3() {
        let cat = FinCategory::finset(3);
        let f = VecFunctor::constant(&cat, 1);
        let nested = NestedSystem::single(FactorizationSystem::surj_inj(&cat));
        let inv = factorized_invert(&cat, &nested, &f).unwrap();
        let phi = cat_linearize(&cat, &f);
        assert!(phi.matmul(&inv).is_identity());
        assert!(inv.matmul(&phi).is_identity());
    }

    #[test]
    fn trivial_nested_system_agrees_with_moebius() {
        let cat = FinCategory::divisor_poset(12);
        let f = VecFunctor::constant(&cat, 1);
        let nested = NestedSystem::single(FactorizationSystem::trivial_left(&cat));
        let via_fact = factorized_invert(&cat, &nested, &f).unwrap();
        let via_moebius = moebius_invert(&cat, &f).unwrap();
        assert_eq!(via_fact, via_moebius.inverse);
    }

    #[test]
    fn derived_class_violation_is_reported() {
        // on finset, the trivial-left system has T^(1) = all morphisms,
        // which contains non-invertible endomorphisms
        let cat = FinCategory::finset(2);
        let f = VecFunctor::constant(&cat, 1);
        let nested = NestedSystem::single(FactorizationSystem::trivial_left(&cat));
        match factorized_invert(&cat, &nested, &f) {
            Err(CatError::BadDerivedClass { level, witness }) => {
                assert_eq!(level, 1);
                assert!(!cat.is_iso(witness));
            }
            other => panic!("expected a derived-class error, got {:?}", other.map(|_| ())),
        }
    }

    fn bg(g: &FinGroup) -> Arc<FinGroupoid> {
        Arc::new(FinGroupoid::bg(g))
    }

    #[test]
    fn postnikov_of_identity_is_equivalences() {
        let x = bg(&FinGroup::symmetric(3));
        let id = GroupoidFunctor::identity(Arc::clone(&x));
        for level in [PostnikovLevel::MinusOne, PostnikovLevel::Zero] {
            let fact = postnikov_factor(&id, level);
            assert!(fact.left.pi0_bijective());
            assert!(fact.left.pi1_isomorphism());
            assert!(fact.right.pi0_bijective());
            assert!(fact.right.pi1_isomorphism());
            let rl = fact.right.compose(&fact.left);
            assert_eq!(rl.obj_map, id.obj_map);
            assert_eq!(rl.mor_map, id.mor_map);
        }
    }

    #[test]
    fn postnikov_zero_of_quotient() {
        let z4 = FinGroup::cyclic(4);
        let z2 = FinGroup::cyclic(2);
        let f = GroupoidFunctor::from_group_hom(bg(&z4), bg(&z2), &[0, 1, 0, 1]).unwrap();
        let fact = postnikov_factor(&f, PostnikovLevel::Zero);
        // l is the full quotient: pi0-bijective and pi1-surjective
        assert!(fact.left.pi0_bijective());
        assert!(fact.left.pi1_surjective());
        // r is an equivalence here
        assert!(fact.right.pi1_isomorphism());
        assert!(fact.right.pi0_bijective());
        let rl = fact.right.compose(&fact.left);
        assert_eq!(rl.obj_map, f.obj_map);
        assert_eq!(rl.mor_map, f.mor_map);
    }

    #[test]
    fn postnikov_minus_one_of_component_inclusion() {
        let two = Arc::new(FinGroupoid::discrete(2));
        let one = Arc::new(FinGroupoid::point());
        let f = GroupoidFunctor::new(Arc::clone(&one), Arc::clone(&two), vec![1], vec![1]).unwrap();
        let fact = postnikov_factor(&f, PostnikovLevel::MinusOne);
        assert!(fact.left.pi0_surjective());
        assert!(fact.right.pi0_injective());
        assert!(fact.right.pi1_isomorphism());
        assert_eq!(fact.middle.object_count(), 1);
        let rl = fact.right.compose(&fact.left);
        assert_eq!(rl.obj_map, f.obj_map);
        assert_eq!(rl.mor_map, f.mor_map);
    }
}
