//! Finite groupoids as 1-type models of pi-finite spaces.
//!
//! A [`FinGroupoid`] stores its morphism list densely (source, target,
//! identity, inverse) but dispatches composition through a [`ComposeRule`],
//! so that large action groupoids and cartesian products never materialize a
//! full composition table. User-supplied groupoids always come in as explicit
//! tables and are validated exhaustively.

mod functor;

pub use functor::{fiber_components, fubini_check, homotopy_fiber, homotopy_pullback, FiberComponent, FiberData, GroupoidFunctor, PullbackData};

use crate::fingroup::FinGroup;
use crate::scalar::{Cyclotomic, ExactMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("not a groupoid: {0}")]
    Axiom(String),
    #[error("morphism data out of range: {0}")]
    Encoding(String),
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("enumeration bound exceeded: {0}")]
    Bound(String),
}

#[derive(Clone, Debug)]
enum ComposeRule {
    /// Explicit table keyed by `(second, first)`, meaning `second . first`.
    Table(HashMap<(usize, usize), usize>),
    /// Action groupoid of `group` on `points` points: morphism `g * points + x`
    /// is the arrow `x -> g.x`.
    Action { group: FinGroup, points: usize },
    /// Cartesian product: morphism `u * right_mors + v`.
    Product { left: Arc<FinGroupoid>, right: Arc<FinGroupoid> },
    /// Disjoint union with object/morphism offsets.
    Union { parts: Vec<Arc<FinGroupoid>>, mor_offset: Vec<usize> },
}

/// A finite groupoid: finitely many objects and invertible morphisms.
#[derive(Clone)]
pub struct FinGroupoid {
    objects: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    identity: Vec<usize>,
    inverse: Vec<usize>,
    out_morphisms: Vec<Vec<usize>>,
    rule: ComposeRule,
}

impl std::fmt::Debug for FinGroupoid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FinGroupoid({} objects, {} morphisms)", self.objects, self.src.len())
    }
}

impl FinGroupoid {
    fn finish(
        objects: usize,
        src: Vec<usize>,
        tgt: Vec<usize>,
        identity: Vec<usize>,
        inverse: Vec<usize>,
        rule: ComposeRule,
    ) -> Self {
        let mut out_morphisms = vec![vec![]; objects];
        for (m, &s) in src.iter().enumerate() {
            out_morphisms[s].push(m);
        }
        FinGroupoid { objects, src, tgt, identity, inverse, out_morphisms, rule }
    }

    /// Build from an explicit composition table; checks all groupoid axioms.
    pub fn from_table(
        objects: usize,
        morphisms: Vec<(usize, usize)>,
        identity: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Result<Self, GroupoidError> {
        let m = morphisms.len();
        if identity.len() != objects {
            return Err(GroupoidError::Encoding("one identity per object required".into()));
        }
        for &(s, t) in &morphisms {
            if s >= objects || t >= objects {
                return Err(GroupoidError::Encoding("morphism endpoint out of range".into()));
            }
        }
        for (x, &e) in identity.iter().enumerate() {
            if e >= m || morphisms[e] != (x, x) {
                return Err(GroupoidError::Encoding(format!("identity of object {} is not an endomorphism", x)));
            }
        }
        let src: Vec<usize> = morphisms.iter().map(|&(s, _)| s).collect();
        let tgt: Vec<usize> = morphisms.iter().map(|&(_, t)| t).collect();
        // composition must be defined exactly on composable pairs
        for g in 0..m {
            for f in 0..m {
                let comp = compose.get(&(g, f));
                if tgt[f] == src[g] {
                    let Some(&gf) = comp else {
                        return Err(GroupoidError::Axiom(format!("composite {} after {} missing", g, f)));
                    };
                    if gf >= m || src[gf] != src[f] || tgt[gf] != tgt[g] {
                        return Err(GroupoidError::Axiom(format!("composite {} after {} ill-typed", g, f)));
                    }
                } else if comp.is_some() {
                    return Err(GroupoidError::Axiom(format!("{} after {} is not composable", g, f)));
                }
            }
        }
        // unit laws
        for f in 0..m {
            if compose[&(f, identity[src[f]])] != f || compose[&(identity[tgt[f]], f)] != f {
                return Err(GroupoidError::Axiom(format!("unit law fails at morphism {}", f)));
            }
        }
        // associativity on composable triples
        for f in 0..m {
            for g in self_composables(&src, &tgt, f) {
                let gf = compose[&(g, f)];
                for h in self_composables(&src, &tgt, g) {
                    let hg = compose[&(h, g)];
                    if compose[&(h, gf)] != compose[&(hg, f)] {
                        return Err(GroupoidError::Axiom(format!(
                            "associativity fails at ({}, {}, {})",
                            h, g, f
                        )));
                    }
                }
            }
        }
        // two-sided inverses
        let mut inverse = vec![usize::MAX; m];
        for f in 0..m {
            let inv = (0..m).find(|&g| {
                src[g] == tgt[f]
                    && tgt[g] == src[f]
                    && compose.get(&(g, f)) == Some(&identity[src[f]])
                    && compose.get(&(f, g)) == Some(&identity[tgt[f]])
            });
            inverse[f] = inv.ok_or_else(|| GroupoidError::Axiom(format!("morphism {} has no inverse", f)))?;
        }
        Ok(Self::finish(objects, src, tgt, identity, inverse, ComposeRule::Table(compose)))
    }

    /// One object whose endomorphisms are the group `G`.
    pub fn bg(group: &FinGroup) -> Self {
        let n = group.order();
        let mut compose = HashMap::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                compose.insert((g, h), group.mul(g, h));
            }
        }
        let inverse = (0..n).map(|g| group.inv(g)).collect();
        Self::finish(1, vec![0; n], vec![0; n], vec![group.identity()], inverse, ComposeRule::Table(compose))
    }

    /// The discrete groupoid on `n` objects.
    pub fn discrete(n: usize) -> Self {
        Self::finish(
            n,
            (0..n).collect(),
            (0..n).collect(),
            (0..n).collect(),
            (0..n).collect(),
            ComposeRule::Table((0..n).map(|i| ((i, i), i)).collect()),
        )
    }

    /// The one-object, one-morphism groupoid.
    pub fn point() -> Self {
        Self::discrete(1)
    }

    /// Action groupoid `S // G` for `action[g][x] = g.x`.
    pub fn action_groupoid(group: &FinGroup, action: &[Vec<usize>]) -> Result<Self, GroupoidError> {
        let n = group.order();
        let points = action.first().map_or(0, |r| r.len());
        if action.len() != n || action.iter().any(|r| r.len() != points) {
            return Err(GroupoidError::Encoding("action table must be |G| x |S|".into()));
        }
        if points == 0 {
            return Err(GroupoidError::Encoding("action on an empty set".into()));
        }
        for x in 0..points {
            if action[group.identity()][x] != x {
                return Err(GroupoidError::Axiom("identity must act trivially".into()));
            }
        }
        for g in 0..n {
            for h in 0..n {
                for x in 0..points {
                    if action[group.mul(g, h)][x] != action[g][action[h][x]] {
                        return Err(GroupoidError::Axiom("action is not a homomorphism".into()));
                    }
                }
            }
        }
        let m = n * points;
        let mut src = Vec::with_capacity(m);
        let mut tgt = Vec::with_capacity(m);
        let mut inverse = Vec::with_capacity(m);
        for g in 0..n {
            for x in 0..points {
                src.push(x);
                tgt.push(action[g][x]);
                inverse.push(group.inv(g) * points + action[g][x]);
            }
        }
        let identity = (0..points).map(|x| group.identity() * points + x).collect();
        Ok(Self::finish(
            points,
            src,
            tgt,
            identity,
            inverse,
            ComposeRule::Action { group: group.clone(), points },
        ))
    }

    /// The loop groupoid `G // G` of `G` acting on itself by conjugation;
    /// models `Map(S^1, BG)`.
    pub fn conjugation_groupoid(group: &FinGroup) -> Self {
        let n = group.order();
        let action: Vec<Vec<usize>> = (0..n).map(|g| (0..n).map(|x| group.conjugate(g, x)).collect()).collect();
        Self::action_groupoid(group, &action).unwrap()
    }

    /// Cartesian product groupoid.
    pub fn product(left: Arc<FinGroupoid>, right: Arc<FinGroupoid>) -> Self {
        let (no, mo) = (left.objects, right.objects);
        let (nm, mm) = (left.morphism_count(), right.morphism_count());
        let mut src = Vec::with_capacity(nm * mm);
        let mut tgt = Vec::with_capacity(nm * mm);
        let mut inverse = Vec::with_capacity(nm * mm);
        for u in 0..nm {
            for v in 0..mm {
                src.push(left.src[u] * mo + right.src[v]);
                tgt.push(left.tgt[u] * mo + right.tgt[v]);
                inverse.push(left.inverse[u] * mm + right.inverse[v]);
            }
        }
        let identity = (0..no * mo)
            .map(|x| left.identity[x / mo] * mm + right.identity[x % mo])
            .collect();
        Self::finish(no * mo, src, tgt, identity, inverse, ComposeRule::Product { left, right })
    }

    /// Disjoint union of groupoids.
    pub fn disjoint_union(parts: Vec<Arc<FinGroupoid>>) -> Self {
        assert!(!parts.is_empty());
        let mut obj_offset = vec![0usize];
        let mut mor_offset = vec![0usize];
        for p in &parts {
            obj_offset.push(obj_offset.last().unwrap() + p.objects);
            mor_offset.push(mor_offset.last().unwrap() + p.morphism_count());
        }
        let mut src = vec![];
        let mut tgt = vec![];
        let mut identity = vec![];
        let mut inverse = vec![];
        for (k, p) in parts.iter().enumerate() {
            src.extend(p.src.iter().map(|&s| s + obj_offset[k]));
            tgt.extend(p.tgt.iter().map(|&t| t + obj_offset[k]));
            identity.extend(p.identity.iter().map(|&e| e + mor_offset[k]));
            inverse.extend(p.inverse.iter().map(|&i| i + mor_offset[k]));
        }
        let objects = *obj_offset.last().unwrap();
        Self::finish(objects, src, tgt, identity, inverse, ComposeRule::Union { parts, mor_offset })
    }

    pub fn object_count(&self) -> usize {
        self.objects
    }

    pub fn morphism_count(&self) -> usize {
        self.src.len()
    }

    pub fn src(&self, m: usize) -> usize {
        self.src[m]
    }

    pub fn tgt(&self, m: usize) -> usize {
        self.tgt[m]
    }

    pub fn identity_of(&self, x: usize) -> usize {
        self.identity[x]
    }

    pub fn inverse_of(&self, m: usize) -> usize {
        self.inverse[m]
    }

    pub fn morphisms_from(&self, x: usize) -> &[usize] {
        &self.out_morphisms[x]
    }

    pub fn morphisms_between(&self, a: usize, b: usize) -> Vec<usize> {
        self.out_morphisms[a].iter().copied().filter(|&m| self.tgt[m] == b).collect()
    }

    /// `second . first` (apply `first`, then `second`); `None` if not composable.
    pub fn compose(&self, second: usize, first: usize) -> Option<usize> {
        if self.tgt[first] != self.src[second] {
            return None;
        }
        Some(match &self.rule {
            ComposeRule::Table(t) => *t.get(&(second, first))?,
            ComposeRule::Action { group, points, .. } => {
                let (g, _x) = (second / points, second % points);
                let (h, y) = (first / points, first % points);
                group.mul(g, h) * points + y
            }
            ComposeRule::Product { left, right } => {
                let mm = right.morphism_count();
                let (u2, v2) = (second / mm, second % mm);
                let (u1, v1) = (first / mm, first % mm);
                left.compose(u2, u1)? * mm + right.compose(v2, v1)?
            }
            ComposeRule::Union { parts, mor_offset } => {
                let k = mor_offset.partition_point(|&o| o <= first) - 1;
                if second < mor_offset[k] || second >= mor_offset[k + 1] {
                    return None;
                }
                parts[k].compose(second - mor_offset[k], first - mor_offset[k])? + mor_offset[k]
            }
        })
    }

    /// Compose a path of morphisms listed first-to-last.
    pub fn compose_path(&self, path: &[usize]) -> Option<usize> {
        let (&first, rest) = path.split_first()?;
        rest.iter().try_fold(first, |acc, &m| self.compose(m, acc))
    }

    /// Connected components with a chosen basepoint and its automorphism
    /// group, materialized as a [`FinGroup`].
    pub fn components(&self) -> Vec<Component> {
        let mut comp_of = vec![usize::MAX; self.objects];
        let mut comps: Vec<Vec<usize>> = vec![];
        for start in 0..self.objects {
            if comp_of[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut stack = vec![start];
            let mut members = vec![];
            comp_of[start] = id;
            while let Some(x) = stack.pop() {
                members.push(x);
                for &m in &self.out_morphisms[x] {
                    let y = self.tgt[m];
                    if comp_of[y] == usize::MAX {
                        comp_of[y] = id;
                        stack.push(y);
                    }
                }
                // follow arrows backwards through inverses: morphisms out of x
                // cover both directions in a groupoid, so nothing more to do
            }
            members.sort_unstable();
            comps.push(members);
        }
        comps
            .into_iter()
            .map(|objects| {
                let basepoint = objects[0];
                let aut_morphisms: Vec<usize> = self.morphisms_between(basepoint, basepoint);
                let lookup: HashMap<usize, usize> =
                    aut_morphisms.iter().enumerate().map(|(i, &m)| (m, i)).collect();
                let table: Vec<Vec<usize>> = aut_morphisms
                    .iter()
                    .map(|&g| {
                        aut_morphisms
                            .iter()
                            .map(|&h| lookup[&self.compose(g, h).expect("loops compose")])
                            .collect()
                    })
                    .collect();
                let aut = FinGroup::from_mul_table(table).expect("automorphisms form a group");
                Component { objects, basepoint, aut_morphisms, aut }
            })
            .collect()
    }

    /// Component index per object.
    pub fn component_index(&self) -> Vec<usize> {
        let comps = self.components();
        let mut idx = vec![usize::MAX; self.objects];
        for (k, c) in comps.iter().enumerate() {
            for &x in &c.objects {
                idx[x] = k;
            }
        }
        idx
    }

    /// `#(X, x) = 1 / |Aut(x)|` for a 1-type, per component.
    pub fn homotopy_cardinality(component: &Component) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(component.aut.order()))
    }

    /// Total homotopy cardinality: the sum over components.
    pub fn total_cardinality(&self) -> BigRational {
        self.components()
            .iter()
            .map(Self::homotopy_cardinality)
            .fold(BigRational::new(BigInt::from(0), BigInt::one()), |a, b| a + b)
    }

    /// For each object of a component, a morphism path to the basepoint
    /// (first-to-last order).
    pub fn paths_to_basepoint(&self, component: &Component) -> HashMap<usize, Vec<usize>> {
        let mut paths: HashMap<usize, Vec<usize>> = HashMap::new();
        paths.insert(component.basepoint, vec![]);
        let mut queue = std::collections::VecDeque::from([component.basepoint]);
        while let Some(x) = queue.pop_front() {
            // arrows out of x lead to neighbors y; the path y -> basepoint
            // starts with the inverse arrow y -> x
            for &m in &self.out_morphisms[x] {
                let y = self.tgt[m];
                if !paths.contains_key(&y) {
                    let mut p = vec![self.inverse[m]];
                    p.extend(paths[&x].iter().copied());
                    paths.insert(y, p);
                    queue.push_back(y);
                }
            }
        }
        paths
    }

    /// Groupoid equivalence decided skeletally: the same multiset of
    /// automorphism-group isomorphism classes across components.
    pub fn equivalent_to(&self, other: &FinGroupoid) -> bool {
        let mut mine = self.components();
        let mut theirs = other.components();
        if mine.len() != theirs.len() {
            return false;
        }
        // match greedily; group isomorphism is an equivalence relation
        while let Some(c) = mine.pop() {
            let Some(pos) = theirs.iter().position(|d| {
                d.aut.order() == c.aut.order() && c.aut.is_isomorphic(&d.aut)
            }) else {
                return false;
            };
            theirs.swap_remove(pos);
        }
        true
    }
}

fn self_composables(src: &[usize], tgt: &[usize], f: usize) -> Vec<usize> {
    (0..src.len()).filter(|&g| src[g] == tgt[f]).collect()
}

/// A connected component with basepoint data.
#[derive(Clone, Debug)]
pub struct Component {
    pub objects: Vec<usize>,
    pub basepoint: usize,
    /// Loop morphisms at the basepoint, indexing the elements of `aut`.
    pub aut_morphisms: Vec<usize>,
    pub aut: FinGroup,
}

/// Abstract homotopy-group cardinality data `|pi_1|, |pi_2|, ...` of a
/// pi-finite space that need not be a 1-type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiData {
    pub orders: Vec<u64>,
}

impl PiData {
    pub fn new(orders: Vec<u64>) -> Self {
        assert!(orders.iter().all(|&n| n > 0), "homotopy group orders must be positive");
        PiData { orders }
    }

    /// `prod_i |pi_i|^{(-1)^i}`.
    pub fn homotopy_cardinality(&self) -> BigRational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (k, &n) in self.orders.iter().enumerate() {
            // k = 0 holds |pi_1|, contributing exponent -1
            if k % 2 == 0 {
                den *= BigInt::from(n);
            } else {
                num *= BigInt::from(n);
            }
        }
        BigRational::new(num, den)
    }
}

/// `int_X alpha = sum_{[x]} #(X, x) alpha(x)` for a vector (or matrix) valued
/// function on components, given in component order.
pub fn path_integral(groupoid: &FinGroupoid, alpha: &[ExactMatrix]) -> Result<ExactMatrix, GroupoidError> {
    let comps = groupoid.components();
    if alpha.len() != comps.len() {
        return Err(GroupoidError::Shape(format!(
            "alpha has {} values for {} components",
            alpha.len(),
            comps.len()
        )));
    }
    let shape = (alpha[0].nrows(), alpha[0].ncols());
    if alpha.iter().any(|a| (a.nrows(), a.ncols()) != shape) {
        return Err(GroupoidError::Shape("alpha values must share a shape".into()));
    }
    let mut acc = ExactMatrix::zeros(shape.0, shape.1);
    for (c, a) in comps.iter().zip(alpha) {
        let w = Cyclotomic::from_rational(FinGroupoid::homotopy_cardinality(c));
        acc = acc.add(&a.scale(&w));
    }
    Ok(acc)
}

/// JSON form of an explicit groupoid table.
#[derive(Serialize, Deserialize)]
pub struct GroupoidJson {
    pub objects: usize,
    pub morphisms: Vec<MorphismJson>,
    pub identity: Vec<usize>,
    pub compose: Vec<Vec<Option<usize>>>,
}

#[derive(Serialize, Deserialize)]
pub struct MorphismJson {
    pub src: usize,
    pub tgt: usize,
}

impl FinGroupoid {
    pub fn from_json(json: &GroupoidJson) -> Result<Self, GroupoidError> {
        let m = json.morphisms.len();
        if json.compose.len() != m || json.compose.iter().any(|r| r.len() != m) {
            return Err(GroupoidError::Encoding("compose table must be m x m".into()));
        }
        let mut compose = HashMap::new();
        for g in 0..m {
            for f in 0..m {
                if let Some(gf) = json.compose[g][f] {
                    compose.insert((g, f), gf);
                }
            }
        }
        Self::from_table(
            json.objects,
            json.morphisms.iter().map(|mj| (mj.src, mj.tgt)).collect(),
            json.identity.clone(),
            compose,
        )
    }

    /// Dense JSON table; intended for small groupoids.
    pub fn to_json(&self) -> GroupoidJson {
        let m = self.morphism_count();
        let compose = (0..m)
            .map(|g| (0..m).map(|f| self.compose(g, f)).collect())
            .collect();
        GroupoidJson {
            objects: self.objects,
            morphisms: (0..m).map(|i| MorphismJson { src: self.src[i], tgt: self.tgt[i] }).collect(),
            identity: self.identity.clone(),
            compose,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    #[test]
    fn bg_of_group_has_one_component_with_aut_g() {
        let s3 = FinGroup::symmetric(3);
        let b = FinGroupoid::bg(&s3);
        let comps = b.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].aut.order(), 6);
        assert!(comps[0].aut.is_isomorphic(&s3));
    }

    #[test]
    fn discrete_components() {
        let d = FinGroupoid::discrete(3);
        let comps = d.components();
        assert_eq!(comps.len(), 3);
        assert!(comps.iter().all(|c| c.aut.order() == 1));
    }

    #[test]
    fn sign_action_groupoid_is_connected_with_trivial_aut() {
        // {+1, -1} with Z/2 acting by negation
        let z2 = FinGroup::cyclic(2);
        let x = FinGroupoid::action_groupoid(&z2, &[vec![0, 1], vec![1, 0]]).unwrap();
        let comps = x.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].aut.order(), 1);
        // oracle: orbit-stabilizer, |orbit| = 2, |stab| = 1, total = 1
        assert_eq!(x.total_cardinality(), rational(1, 1));
    }

    #[test]
    fn cardinality_of_bz6_and_pidata() {
        let b = FinGroupoid::bg(&FinGroup::cyclic(6));
        assert_eq!(b.total_cardinality(), rational(1, 6));
        let pi = PiData::new(vec![2, 3]);
        assert_eq!(pi.homotopy_cardinality(), rational(3, 2));
    }

    #[test]
    fn path_integral_examples() {
        // X = BZ/2, alpha = v: integral = v / 2
        let b = FinGroupoid::bg(&FinGroup::cyclic(2));
        let v = ExactMatrix::column(vec![Cyclotomic::from_integer(6)]);
        let out = path_integral(&b, &[v]).unwrap();
        assert_eq!(out[(0, 0)], Cyclotomic::from_integer(3));

        // X = two points, alpha = (v, w): integral = v + w
        let d = FinGroupoid::discrete(2);
        let v = ExactMatrix::column(vec![Cyclotomic::from_integer(4)]);
        let w = ExactMatrix::column(vec![Cyclotomic::from_integer(5)]);
        let out = path_integral(&d, &[v, w]).unwrap();
        assert_eq!(out[(0, 0)], Cyclotomic::from_integer(9));
    }

    #[test]
    fn path_integral_free_orbits_plus_point() {
        // Z/2 acting freely on 4 elements, disjoint union with a bare point:
        // sum of 1/|stab| = 1 + 1 + 1 = 3
        let z2 = FinGroup::cyclic(2);
        let free = FinGroupoid::action_groupoid(&z2, &[vec![0, 1, 2, 3], vec![1, 0, 3, 2]]).unwrap();
        let x = FinGroupoid::disjoint_union(vec![Arc::new(free), Arc::new(FinGroupoid::point())]);
        let comps = x.components();
        assert_eq!(comps.len(), 3);
        let ones: Vec<ExactMatrix> =
            comps.iter().map(|_| ExactMatrix::column(vec![Cyclotomic::one()])).collect();
        let out = path_integral(&x, &ones).unwrap();
        assert_eq!(out[(0, 0)], Cyclotomic::from_integer(3));
        // orbit-stabilizer oracle
        let direct: BigRational = comps
            .iter()
            .map(|c| BigRational::new(BigInt::one(), BigInt::from(c.aut.order())))
            .fold(rational(0, 1), |a, b| a + b);
        assert_eq!(direct, rational(3, 1));
    }

    #[test]
    fn path_integral_shape_mismatch_errors() {
        let d = FinGroupoid::discrete(2);
        let v = ExactMatrix::column(vec![Cyclotomic::one()]);
        let w = ExactMatrix::column(vec![Cyclotomic::one(), Cyclotomic::one()]);
        assert!(matches!(path_integral(&d, &[v, w]), Err(GroupoidError::Shape(_))));
    }

    #[test]
    fn product_of_bg_groupoids() {
        let bz2 = Arc::new(FinGroupoid::bg(&FinGroup::cyclic(2)));
        let bz3 = Arc::new(FinGroupoid::bg(&FinGroup::cyclic(3)));
        let p = FinGroupoid::product(bz2, bz3);
        let comps = p.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].aut.order(), 6);
        assert_eq!(p.total_cardinality(), rational(1, 6));
    }

    #[test]
    fn conjugation_groupoid_components_are_classes() {
        let s3 = FinGroup::symmetric(3);
        let loops = FinGroupoid::conjugation_groupoid(&s3);
        let comps = loops.components();
        assert_eq!(comps.len(), 3);
        // total cardinality of G//G is the number of conjugacy classes over...
        // each component [c] has cardinality |class| / |G| summing to 1 per
        // class-orbit counting; the total equals #classes * (1/|Z|) summed:
        let total = loops.total_cardinality();
        // sum over classes of 1/|Z(c)| = sum |class|/|G| = 1
        assert_eq!(total, rational(1, 1));
    }

    #[test]
    fn json_round_trip_small() {
        let b = FinGroupoid::bg(&FinGroup::cyclic(3));
        let json = b.to_json();
        let text = serde_json::to_string(&json).unwrap();
        let parsed: GroupoidJson = serde_json::from_str(&text).unwrap();
        let back = FinGroupoid::from_json(&parsed).unwrap();
        assert!(back.equivalent_to(&b));
    }

    #[test]
    fn invalid_table_rejected() {
        // two objects, a morphism between them with no inverse
        let res = FinGroupoid::from_table(
            2,
            vec![(0, 0), (1, 1), (0, 1)],
            vec![0, 1],
            HashMap::from([((0, 0), 0), ((1, 1), 1), ((2, 0), 2), ((1, 2), 2)]),
        );
        assert!(matches!(res, Err(GroupoidError::Axiom(_))));
    }

    #[test]
    fn equivalence_by_skeleton() {
        let z4 = FinGroup::cyclic(4);
        let z2xz2 = FinGroup::cyclic(2).direct_product(&FinGroup::cyclic(2));
        let bz4 = FinGroupoid::bg(&z4);
        let bv4 = FinGroupoid::bg(&z2xz2);
        assert!(!bz4.equivalent_to(&bv4));
        // G acting on itself by translation is equivalent to a point
        let translation: Vec<Vec<usize>> = (0..4).map(|g| (0..4).map(|x| z4.mul(g, x)).collect()).collect();
        let torsor = FinGroupoid::action_groupoid(&z4, &translation).unwrap();
        assert!(torsor.equivalent_to(&FinGroupoid::point()));
    }
}
