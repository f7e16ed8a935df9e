//! Functors between finite groupoids, homotopy fibers and pullbacks.

use super::{path_integral, Component, FinGroupoid, GroupoidError};
use crate::scalar::ExactMatrix;
use num_rational::BigRational;
use std::collections::HashMap;
use std::sync::Arc;

/// A functor between finite groupoids, stored as full object and morphism
/// maps; preservation of identities, endpoints and composition is checked
/// exhaustively on construction.
#[derive(Clone)]
pub struct GroupoidFunctor {
    pub source: Arc<FinGroupoid>,
    pub target: Arc<FinGroupoid>,
    pub obj_map: Vec<usize>,
    pub mor_map: Vec<usize>,
}

impl std::fmt::Debug for GroupoidFunctor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GroupoidFunctor({} -> {} objects)",
            self.source.object_count(),
            self.target.object_count()
        )
    }
}

impl GroupoidFunctor {
    pub fn new(
        source: Arc<FinGroupoid>,
        target: Arc<FinGroupoid>,
        obj_map: Vec<usize>,
        mor_map: Vec<usize>,
    ) -> Result<Self, GroupoidError> {
        if obj_map.len() != source.object_count() || mor_map.len() != source.morphism_count() {
            return Err(GroupoidError::Encoding("functor maps must cover the source".into()));
        }
        if obj_map.iter().any(|&x| x >= target.object_count())
            || mor_map.iter().any(|&m| m >= target.morphism_count())
        {
            return Err(GroupoidError::Encoding("functor map out of range".into()));
        }
        for m in 0..source.morphism_count() {
            if target.src(mor_map[m]) != obj_map[source.src(m)]
                || target.tgt(mor_map[m]) != obj_map[source.tgt(m)]
            {
                return Err(GroupoidError::Axiom(format!("functor breaks endpoints at morphism {}", m)));
            }
        }
        for x in 0..source.object_count() {
            if mor_map[source.identity_of(x)] != target.identity_of(obj_map[x]) {
                return Err(GroupoidError::Axiom(format!("functor breaks the identity at object {}", x)));
            }
        }
        // composition: enumerate composable pairs through shared objects
        for f in 0..source.morphism_count() {
            for &g in source.morphisms_from(source.tgt(f)) {
                let gf = source.compose(g, f).expect("composable by construction");
                let img = target
                    .compose(mor_map[g], mor_map[f])
                    .ok_or_else(|| GroupoidError::Axiom("image pair not composable".into()))?;
                if mor_map[gf] != img {
                    return Err(GroupoidError::Axiom(format!(
                        "functor breaks composition at ({}, {})",
                        g, f
                    )));
                }
            }
        }
        Ok(GroupoidFunctor { source, target, obj_map, mor_map })
    }

    pub fn identity(groupoid: Arc<FinGroupoid>) -> Self {
        let obj_map = (0..groupoid.object_count()).collect();
        let mor_map = (0..groupoid.morphism_count()).collect();
        GroupoidFunctor { source: Arc::clone(&groupoid), target: groupoid, obj_map, mor_map }
    }

    /// The unique functor to the point.
    pub fn to_point(source: Arc<FinGroupoid>) -> Self {
        let target = Arc::new(FinGroupoid::point());
        GroupoidFunctor {
            obj_map: vec![0; source.object_count()],
            mor_map: vec![0; source.morphism_count()],
            source,
            target,
        }
    }

    /// `BG -> BH` induced by a group homomorphism given as an element map.
    pub fn from_group_hom(
        source: Arc<FinGroupoid>,
        target: Arc<FinGroupoid>,
        hom: &[usize],
    ) -> Result<Self, GroupoidError> {
        GroupoidFunctor::new(source, target, vec![0], hom.to_vec())
    }

    pub fn apply_obj(&self, x: usize) -> usize {
        self.obj_map[x]
    }

    pub fn apply_mor(&self, m: usize) -> usize {
        self.mor_map[m]
    }

    /// Composite `self` after `first`.
    pub fn compose(&self, first: &GroupoidFunctor) -> GroupoidFunctor {
        assert!(Arc::ptr_eq(&first.target, &self.source) || first.target.object_count() == self.source.object_count());
        GroupoidFunctor {
            source: Arc::clone(&first.source),
            target: Arc::clone(&self.target),
            obj_map: first.obj_map.iter().map(|&x| self.obj_map[x]).collect(),
            mor_map: first.mor_map.iter().map(|&m| self.mor_map[m]).collect(),
        }
    }

    /// Is the induced map on components surjective?
    pub fn pi0_surjective(&self) -> bool {
        let tgt_comp = self.target.component_index();
        let mut hit = vec![false; self.target.components().len()];
        for &y in &self.obj_map {
            hit[tgt_comp[y]] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Is the induced map on components injective?
    pub fn pi0_injective(&self) -> bool {
        let src_comps = self.source.components();
        let tgt_comp = self.target.component_index();
        let images: Vec<usize> = src_comps.iter().map(|c| tgt_comp[self.obj_map[c.basepoint]]).collect();
        let mut sorted = images.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == images.len()
    }

    pub fn pi0_bijective(&self) -> bool {
        self.pi0_surjective()
            && self.pi0_injective()
            && self.source.components().len() == self.target.components().len()
    }

    /// Image of `Aut(x)` inside `Aut(F x)`, as morphism indices of the target.
    fn pi1_image(&self, x: usize) -> Vec<usize> {
        let mut img: Vec<usize> =
            self.source.morphisms_between(x, x).iter().map(|&m| self.mor_map[m]).collect();
        img.sort_unstable();
        img.dedup();
        img
    }

    /// Is `pi_1(F; x)` surjective at every basepoint of the source?
    pub fn pi1_surjective(&self) -> bool {
        (0..self.source.object_count()).all(|x| {
            let y = self.obj_map[x];
            self.pi1_image(x).len() == self.target.morphisms_between(y, y).len()
        })
    }

    /// Is `pi_1(F; x)` injective at every basepoint of the source?
    pub fn pi1_injective(&self) -> bool {
        (0..self.source.object_count()).all(|x| {
            self.pi1_image(x).len() == self.source.morphisms_between(x, x).len()
        })
    }

    pub fn pi1_isomorphism(&self) -> bool {
        self.pi1_injective() && self.pi1_surjective()
    }
}

/// One component of a homotopy fiber, with just enough data to integrate:
/// the basepoint pair `(x, path)` and the automorphism count.
#[derive(Clone, Debug)]
pub struct FiberComponent {
    /// Basepoint object of the fiber: an object `x` of the total groupoid...
    pub x: usize,
    /// ...and a morphism `path: a -> F(x)` in the base.
    pub path: usize,
    pub aut_order: usize,
    pub size: usize,
}

impl FiberComponent {
    pub fn cardinality(&self) -> BigRational {
        BigRational::new(1.into(), (self.aut_order as i64).into())
    }
}

/// Components of the homotopy fiber of `f` at the object `a` of the target,
/// computed without materializing the fiber groupoid.
///
/// Objects of the fiber are pairs `(x, path: a -> f(x))`; arrows are
/// `u: x -> x'` with `f(u) . path = path'`.
pub fn fiber_components(f: &GroupoidFunctor, a: usize) -> Vec<FiberComponent> {
    let base = &f.target;
    let total = &f.source;
    // enumerate fiber objects
    let mut fiber_objects: Vec<(usize, usize)> = vec![];
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    for x in 0..total.object_count() {
        for &gamma in base.morphisms_from(a) {
            if base.tgt(gamma) == f.obj_map[x] {
                index.insert((x, gamma), fiber_objects.len());
                fiber_objects.push((x, gamma));
            }
        }
    }
    // union-find over fiber edges
    let mut parent: Vec<usize> = (0..fiber_objects.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut aut_count: HashMap<usize, usize> = HashMap::new(); // per fiber object: loops
    for (k, &(x, gamma)) in fiber_objects.iter().enumerate() {
        for &u in total.morphisms_from(x) {
            let gamma2 = base
                .compose(f.mor_map[u], gamma)
                .expect("f(u) composes with gamma by typing");
            let k2 = index[&(total.tgt(u), gamma2)];
            if k2 == k {
                *aut_count.entry(k).or_insert(0) += 1;
            }
            let (r1, r2) = (find(&mut parent, k), find(&mut parent, k2));
            if r1 != r2 {
                parent[r1] = r2;
            }
        }
    }
    // group into components, pick the smallest index as basepoint
    let mut comp_members: HashMap<usize, Vec<usize>> = HashMap::new();
    for k in 0..fiber_objects.len() {
        let r = find(&mut parent, k);
        comp_members.entry(r).or_default().push(k);
    }
    let mut comps: Vec<FiberComponent> = comp_members
        .into_values()
        .map(|mut members| {
            members.sort_unstable();
            let bp = members[0];
            let (x, path) = fiber_objects[bp];
            FiberComponent { x, path, aut_order: aut_count.get(&bp).copied().unwrap_or(0).max(1), size: members.len() }
        })
        .collect();
    comps.sort_by_key(|c| (c.x, c.path));
    comps
}

/// Fully materialized homotopy fiber together with its inclusion into the
/// total groupoid.
pub struct FiberData {
    pub fiber: FinGroupoid,
    /// Fiber object index -> `(x, path: a -> f(x))`.
    pub objects: Vec<(usize, usize)>,
    /// Fiber morphism index -> morphism of the total groupoid.
    pub morphism_to_total: Vec<usize>,
}

/// The homotopy fiber of `f: X -> A` at the object `a` of `A`, materialized
/// as an explicit groupoid.
pub fn homotopy_fiber(f: &GroupoidFunctor, a: usize) -> FiberData {
    let base = &f.target;
    let total = &f.source;
    let mut objects: Vec<(usize, usize)> = vec![];
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    for x in 0..total.object_count() {
        for &gamma in base.morphisms_from(a) {
            if base.tgt(gamma) == f.obj_map[x] {
                index.insert((x, gamma), objects.len());
                objects.push((x, gamma));
            }
        }
    }
    // morphisms: (u: x -> x', source fiber object)
    let mut morphisms: Vec<(usize, usize)> = vec![]; // (fiber src, fiber tgt)
    let mut mor_data: Vec<(usize, usize)> = vec![]; // (u, fiber src)
    let mut mor_index: HashMap<(usize, usize), usize> = HashMap::new();
    for (k, &(x, gamma)) in objects.iter().enumerate() {
        for &u in total.morphisms_from(x) {
            let gamma2 = base.compose(f.mor_map[u], gamma).unwrap();
            let k2 = index[&(total.tgt(u), gamma2)];
            mor_index.insert((u, k), mor_data.len());
            mor_data.push((u, k));
            morphisms.push((k, k2));
        }
    }
    let identity: Vec<usize> = objects
        .iter()
        .enumerate()
        .map(|(k, &(x, _))| mor_index[&(total.identity_of(x), k)])
        .collect();
    let mut compose = HashMap::new();
    for (j, &(u2, k_mid)) in mor_data.iter().enumerate() {
        // j: mid -> tgt; find all i: src -> mid
        let _ = k_mid;
        for (i, &(u1, k_src)) in mor_data.iter().enumerate() {
            if morphisms[i].1 == morphisms[j].0 {
                let u21 = total.compose(u2, u1).expect("composable in the total groupoid");
                let c = mor_index[&(u21, k_src)];
                compose.insert((j, i), c);
            }
        }
    }
    let fiber = FinGroupoid::from_table(objects.len(), morphisms, identity, compose)
        .expect("homotopy fiber is a groupoid");
    FiberData { fiber, objects, morphism_to_total: mor_data.iter().map(|&(u, _)| u).collect() }
}

/// Materialized homotopy pullback of `f: X -> A` and `g: Y -> A`, with its
/// projection functors.
pub struct PullbackData {
    pub pullback: Arc<FinGroupoid>,
    /// Pullback object index -> `(x, y, path: f(x) -> g(y))`.
    pub objects: Vec<(usize, usize, usize)>,
    pub proj_left: GroupoidFunctor,
    pub proj_right: GroupoidFunctor,
}

/// Objects are triples `(x, y, path: f(x) -> g(y))`; arrows are pairs
/// `(u, v)` with `g(v) . path = path' . f(u)`.
pub fn homotopy_pullback(f: &GroupoidFunctor, g: &GroupoidFunctor) -> PullbackData {
    assert_eq!(
        f.target.object_count(),
        g.target.object_count(),
        "pullback needs a common base"
    );
    let base = &f.target;
    let x_g = &f.source;
    let y_g = &g.source;
    let mut objects: Vec<(usize, usize, usize)> = vec![];
    let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for x in 0..x_g.object_count() {
        for y in 0..y_g.object_count() {
            for &gamma in base.morphisms_from(f.obj_map[x]) {
                if base.tgt(gamma) == g.obj_map[y] {
                    index.insert((x, y, gamma), objects.len());
                    objects.push((x, y, gamma));
                }
            }
        }
    }
    let mut morphisms: Vec<(usize, usize)> = vec![];
    let mut mor_data: Vec<(usize, usize, usize)> = vec![]; // (u, v, src object index)
    let mut mor_index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    for (k, &(x, y, gamma)) in objects.iter().enumerate() {
        for &u in x_g.morphisms_from(x) {
            for &v in y_g.morphisms_from(y) {
                // path' = g(v) . gamma . f(u)^{-1}
                let t = base.compose(g.mor_map[v], gamma).unwrap();
                let gamma2 = base
                    .compose(t, base.inverse_of(f.mor_map[u]))
                    .expect("composable by typing");
                let k2 = index[&(x_g.tgt(u), y_g.tgt(v), gamma2)];
                mor_index.insert((u, v, k), mor_data.len());
                mor_data.push((u, v, k));
                morphisms.push((k, k2));
            }
        }
    }
    let identity: Vec<usize> = objects
        .iter()
        .enumerate()
        .map(|(k, &(x, y, _))| mor_index[&(x_g.identity_of(x), y_g.identity_of(y), k)])
        .collect();
    let mut compose = HashMap::new();
    for (j, &(u2, v2, _)) in mor_data.iter().enumerate() {
        for (i, &(u1, v1, k_src)) in mor_data.iter().enumerate() {
            if morphisms[i].1 == morphisms[j].0 {
                let u = x_g.compose(u2, u1).unwrap();
                let v = y_g.compose(v2, v1).unwrap();
                compose.insert((j, i), mor_index[&(u, v, k_src)]);
            }
        }
    }
    let pullback = Arc::new(
        FinGroupoid::from_table(objects.len(), morphisms, identity, compose)
            .expect("homotopy pullback is a groupoid"),
    );
    let proj_left = GroupoidFunctor {
        source: Arc::clone(&pullback),
        target: Arc::clone(&f.source),
        obj_map: objects.iter().map(|&(x, _, _)| x).collect(),
        mor_map: mor_data.iter().map(|&(u, _, _)| u).collect(),
    };
    let proj_right = GroupoidFunctor {
        source: Arc::clone(&pullback),
        target: Arc::clone(&g.source),
        obj_map: objects.iter().map(|&(_, y, _)| y).collect(),
        mor_map: mor_data.iter().map(|&(_, v, _)| v).collect(),
    };
    PullbackData { pullback, objects, proj_left, proj_right }
}

/// Verify the iterated-integral identity
/// `int_X alpha = int_{a in A} int_{X_a} alpha(iota_a -)` exactly.
pub fn fubini_check(
    s: &GroupoidFunctor,
    alpha: &[ExactMatrix],
) -> Result<bool, GroupoidError> {
    let lhs = path_integral(&s.source, alpha)?;
    let x_comp_index = s.source.component_index();
    let base_components: Vec<Component> = s.target.components();
    let mut rhs = ExactMatrix::zeros(lhs.nrows(), lhs.ncols());
    for comp in &base_components {
        let fiber = homotopy_fiber(s, comp.basepoint);
        let fiber_comps = fiber.fiber.components();
        if fiber_comps.is_empty() {
            continue;
        }
        let pulled: Vec<ExactMatrix> = fiber_comps
            .iter()
            .map(|fc| {
                let (x, _) = fiber.objects[fc.basepoint];
                alpha[x_comp_index[x]].clone()
            })
            .collect();
        let inner = path_integral(&fiber.fiber, &pulled)?;
        let w = crate::scalar::Cyclotomic::from_rational(FinGroupoid::homotopy_cardinality(comp));
        rhs = rhs.add(&inner.scale(&w));
    }
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::FinGroup;
    use crate::scalar::{rational, Cyclotomic};

    fn bg(g: &FinGroup) -> Arc<FinGroupoid> {
        Arc::new(FinGroupoid::bg(g))
    }

    fn subgroup_inclusion_s3() -> GroupoidFunctor {
        // H = <transposition> inside S3
        let s3 = FinGroup::symmetric(3);
        let t = (0..6).find(|&g| s3.element_order(g) == 2).unwrap();
        let z2 = FinGroup::cyclic(2);
        let hom = vec![s3.identity(), t];
        GroupoidFunctor::from_group_hom(bg(&z2), bg(&s3), &hom).unwrap()
    }

    #[test]
    fn fiber_of_subgroup_inclusion_is_coset_space() {
        let f = subgroup_inclusion_s3();
        let fiber = homotopy_fiber(&f, 0);
        let comps = fiber.fiber.components();
        // oracle: coset enumeration for H of index 3
        assert_eq!(comps.len(), 3);
        assert!(comps.iter().all(|c| c.aut.order() == 1));
        // light version agrees
        let light = fiber_components(&f, 0);
        assert_eq!(light.len(), 3);
        assert!(light.iter().all(|c| c.aut_order == 1));
    }

    #[test]
    fn fiber_of_identity_is_contractible() {
        let x = bg(&FinGroup::symmetric(3));
        let f = GroupoidFunctor::identity(Arc::clone(&x));
        let fiber = homotopy_fiber(&f, 0);
        let comps = fiber.fiber.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].aut.order(), 1);
    }

    #[test]
    fn fiber_over_point_is_the_total_space() {
        let x = bg(&FinGroup::cyclic(4));
        let f = GroupoidFunctor::to_point(Arc::clone(&x));
        let fiber = homotopy_fiber(&f, 0);
        assert!(fiber.fiber.equivalent_to(&x));
    }

    #[test]
    fn pullback_over_point_is_product() {
        let x = bg(&FinGroup::cyclic(2));
        let y = bg(&FinGroup::cyclic(3));
        let p = homotopy_pullback(&GroupoidFunctor::to_point(x), &GroupoidFunctor::to_point(y));
        let comps = p.pullback.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].aut.order(), 6);
    }

    #[test]
    fn pullback_of_subgroup_against_point_is_cosets() {
        let f = subgroup_inclusion_s3();
        let pt = GroupoidFunctor::from_group_hom(
            Arc::new(FinGroupoid::point()),
            Arc::clone(&f.target),
            &[FinGroup::symmetric(3).identity()],
        )
        .unwrap();
        let p = homotopy_pullback(&f, &pt);
        let comps = p.pullback.components();
        assert_eq!(comps.len(), 3);
        assert!(comps.iter().all(|c| c.aut.order() == 1));
    }

    #[test]
    fn pullback_along_identity_is_equivalent_to_source() {
        let x = bg(&FinGroup::symmetric(3));
        let id = GroupoidFunctor::identity(Arc::clone(&x));
        let f = subgroup_inclusion_s3();
        let p = homotopy_pullback(&f, &id);
        assert!(p.pullback.equivalent_to(&f.source));
        // symmetry: swapping the legs preserves the skeleton
        let q = homotopy_pullback(&id, &f);
        assert!(q.pullback.equivalent_to(&p.pullback));
    }

    #[test]
    fn fubini_to_point_and_disjoint_union() {
        let x = bg(&FinGroup::cyclic(3));
        let f = GroupoidFunctor::to_point(Arc::clone(&x));
        let alpha = vec![ExactMatrix::column(vec![Cyclotomic::from_integer(7)])];
        assert!(fubini_check(&f, &alpha).unwrap());

        // X1 u X2 -> 2 points: additivity
        let x1 = bg(&FinGroup::cyclic(2));
        let x2 = bg(&FinGroup::cyclic(5));
        let xu = Arc::new(FinGroupoid::disjoint_union(vec![x1, x2]));
        let two = Arc::new(FinGroupoid::discrete(2));
        let f = GroupoidFunctor::new(
            Arc::clone(&xu),
            Arc::clone(&two),
            vec![0, 1],
            vec![0, 0, 1, 1, 1, 1, 1],
        )
        .unwrap();
        let alpha = vec![
            ExactMatrix::column(vec![Cyclotomic::from_integer(2)]),
            ExactMatrix::column(vec![Cyclotomic::from_integer(10)]),
        ];
        assert!(fubini_check(&f, &alpha).unwrap());
    }

    #[test]
    fn fubini_for_quotient_map() {
        // B(Z/4) -> B(Z/2) via the quotient
        let z4 = FinGroup::cyclic(4);
        let z2 = FinGroup::cyclic(2);
        let f = GroupoidFunctor::from_group_hom(bg(&z4), bg(&z2), &[0, 1, 0, 1]).unwrap();
        let alpha = vec![ExactMatrix::column(vec![
            Cyclotomic::from_ratio(3, 7),
            Cyclotomic::from_integer(2),
        ])];
        assert!(fubini_check(&f, &alpha).unwrap());
        // direct evaluation oracle of both sides: LHS = (1/4) alpha; the
        // fiber is B(ker) = B(Z/2), connected, so RHS = (1/2)(1/2) alpha
        let fiber = homotopy_fiber(&f, 0);
        let comps = fiber.fiber.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].aut.order(), 2);
        assert_eq!(fiber.fiber.total_cardinality(), rational(1, 2));
    }

    #[test]
    fn pi_conditions_of_group_homs() {
        let z4 = FinGroup::cyclic(4);
        let z2 = FinGroup::cyclic(2);
        let quo = GroupoidFunctor::from_group_hom(bg(&z4), bg(&z2), &[0, 1, 0, 1]).unwrap();
        assert!(quo.pi0_bijective());
        assert!(quo.pi1_surjective());
        assert!(!quo.pi1_injective());
        let incl = subgroup_inclusion_s3();
        assert!(incl.pi1_injective());
        assert!(!incl.pi1_surjective());
    }

    #[test]
    fn bad_functor_rejected() {
        let z2 = FinGroup::cyclic(2);
        let z3 = FinGroup::cyclic(3);
        // no nontrivial hom Z/2 -> Z/3: sending the generator to 1 breaks composition
        let res = GroupoidFunctor::from_group_hom(bg(&z2), bg(&z3), &[0, 1]);
        assert!(res.is_err());
    }
}
