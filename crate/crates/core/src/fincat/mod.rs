//! Finite 1-categories: linearization over the core groupoid, chain-sum
//! Moebius inversion, and inversion through nested factorization systems.
//!
//! The linearization of `(C, F)` is the span linearization of
//! `C0 <- C1 -> C0` where `C0` is the core groupoid and `C1` the groupoid of
//! morphisms and commuting squares with invertible verticals. The fiber of
//! the source leg at an object `m` is equivalent to the groupoid of
//! morphisms out of `m` with postcomposition squares, which is what the code
//! enumerates; the full apex groupoid is only materialized on demand
//! ([`FinCategory::square_groupoid_span`]) for cross-checks.

mod factorization;

pub use factorization::{
    postnikov_factor, validate_factorization, FactorizationCheck, FactorizationSystem,
    NestedSystem, PostnikovLevel,
};

use crate::groupoid::{FinGroupoid, GroupoidFunctor};
use crate::scalar::{Cyclotomic, ExactMatrix, QuotientBasis};
use crate::span::{DecoratedSpan, LocalSystem};
use num_rational::BigRational;
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatError {
    #[error("not a category: {0}")]
    Axiom(String),
    #[error("data out of range: {0}")]
    Encoding(String),
    #[error("functor is not functorial: {0}")]
    Functor(String),
    #[error("object {object} carries the non-invertible endomorphism {morphism}; use factorized inversion")]
    NonInvertibleEndo { object: usize, morphism: usize },
    #[error("derived class T^({level}) has a non-invertible endomorphism (witness morphism {witness})")]
    BadDerivedClass { level: usize, witness: usize },
    #[error("morphism class is not a subcategory: {0}")]
    NotSubcategory(String),
}

/// A finite category presented by a composition table.
#[derive(Clone)]
pub struct FinCategory {
    objects: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    identity: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    /// Two-sided inverse per morphism, when one exists.
    inverse: Vec<Option<usize>>,
    out_morphisms: Vec<Vec<usize>>,
}

impl std::fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FinCategory({} objects, {} morphisms)", self.objects, self.src.len())
    }
}

impl FinCategory {
    pub fn from_table(
        objects: usize,
        morphisms: Vec<(usize, usize)>,
        identity: Vec<usize>,
        compose: HashMap<(usize, usize), usize>,
    ) -> Result<Self, CatError> {
        let m = morphisms.len();
        if identity.len() != objects {
            return Err(CatError::Encoding("one identity per object required".into()));
        }
        for &(s, t) in &morphisms {
            if s >= objects || t >= objects {
                return Err(CatError::Encoding("morphism endpoint out of range".into()));
            }
        }
        for (x, &e) in identity.iter().enumerate() {
            if e >= m || morphisms[e] != (x, x) {
                return Err(CatError::Encoding(format!("identity of object {} ill-typed", x)));
            }
        }
        let src: Vec<usize> = morphisms.iter().map(|&(s, _)| s).collect();
        let tgt: Vec<usize> = morphisms.iter().map(|&(_, t)| t).collect();
        let mut out_morphisms = vec![vec![]; objects];
        for (k, &s) in src.iter().enumerate() {
            out_morphisms[s].push(k);
        }
        // composition defined exactly on composable pairs, well-typed
        for g in 0..m {
            for f in 0..m {
                match compose.get(&(g, f)) {
                    Some(&gf) if tgt[f] == src[g] => {
                        if gf >= m || src[gf] != src[f] || tgt[gf] != tgt[g] {
                            return Err(CatError::Axiom(format!("composite {} after {} ill-typed", g, f)));
                        }
                    }
                    None if tgt[f] == src[g] => {
                        return Err(CatError::Axiom(format!("composite {} after {} missing", g, f)));
                    }
                    Some(_) => {
                        return Err(CatError::Axiom(format!("{} after {} is not composable", g, f)));
                    }
                    None => {}
                }
            }
        }
        for f in 0..m {
            if compose[&(f, identity[src[f]])] != f || compose[&(identity[tgt[f]], f)] != f {
                return Err(CatError::Axiom(format!("unit law fails at morphism {}", f)));
            }
        }
        for f in 0..m {
            for &g in &out_morphisms[tgt[f]] {
                let gf = compose[&(g, f)];
                for &h in &out_morphisms[tgt[g]] {
                    if compose[&(h, gf)] != compose[&(compose[&(h, g)], f)] {
                        return Err(CatError::Axiom(format!("associativity fails at ({}, {}, {})", h, g, f)));
                    }
                }
            }
        }
        let mut inverse = vec![None; m];
        for f in 0..m {
            inverse[f] = out_morphisms[tgt[f]].iter().copied().find(|&g| {
                tgt[g] == src[f]
                    && compose[&(g, f)] == identity[src[f]]
                    && compose[&(f, g)] == identity[tgt[f]]
            });
        }
        Ok(FinCategory { objects, src, tgt, identity, compose, inverse, out_morphisms })
    }

    /// The poset of divisors of `n` under divisibility.
    pub fn divisor_poset(n: u64) -> Self {
        let divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
        Self::poset(divisors.len(), |i, j| divisors[j].is_multiple_of(divisors[i]))
    }

    /// A poset category: one morphism `i -> j` whenever `leq(i, j)`.
    pub fn poset(objects: usize, leq: impl Fn(usize, usize) -> bool) -> Self {
        let mut morphisms = vec![];
        let mut index = HashMap::new();
        for i in 0..objects {
            for j in 0..objects {
                if leq(i, j) {
                    index.insert((i, j), morphisms.len());
                    morphisms.push((i, j));
                }
            }
        }
        let identity = (0..objects).map(|i| index[&(i, i)]).collect();
        let mut compose = HashMap::new();
        for (k2, &(b, c)) in morphisms.iter().enumerate() {
            for (k1, &(a, b2)) in morphisms.iter().enumerate() {
                if b2 == b {
                    compose.insert((k2, k1), index[&(a, c)]);
                }
            }
        }
        Self::from_table(objects, morphisms, identity, compose).expect("posets are categories")
    }

    /// The category of finite sets of cardinality `<= max` (objects
    /// `0..=max`), with all functions as morphisms.
    pub fn finset(max: usize) -> Self {
        assert!(max <= 7, "finset tables beyond 7 are disproportionate at desk scale");
        let objects = max + 1;
        let mut morphisms: Vec<(usize, usize)> = vec![];
        let mut tables: Vec<Vec<usize>> = vec![];
        let mut index: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
        for m in 0..objects {
            for n in 0..objects {
                // all functions m -> n, lexicographic
                let count = n.pow(m as u32);
                if m == 0 {
                    index.insert((m, n, vec![]), morphisms.len());
                    morphisms.push((m, n));
                    tables.push(vec![]);
                    continue;
                }
                for code in 0..count {
                    let mut t = vec![0usize; m];
                    let mut c = code;
                    for slot in t.iter_mut() {
                        *slot = c % n;
                        c /= n;
                    }
                    index.insert((m, n, t.clone()), morphisms.len());
                    morphisms.push((m, n));
                    tables.push(t);
                }
            }
        }
        let identity = (0..objects)
            .map(|x| index[&(x, x, (0..x).collect::<Vec<_>>())])
            .collect();
        let mut compose = HashMap::new();
        for (k2, &(b2, c)) in morphisms.iter().enumerate() {
            for (k1, &(a, b)) in morphisms.iter().enumerate() {
                if b == b2 {
                    let composed: Vec<usize> = tables[k1].iter().map(|&x| tables[k2][x]).collect();
                    compose.insert((k2, k1), index[&(a, c, composed)]);
                }
            }
        }
        Self::from_table(objects, morphisms, identity, compose).expect("finset is a category")
    }

    /// Function table of a finset morphism (meaningful only for categories
    /// built by [`FinCategory::finset`]); recomputed from indices on demand.
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

    pub fn compose(&self, second: usize, first: usize) -> Option<usize> {
        self.compose.get(&(second, first)).copied()
    }

    pub fn is_iso(&self, m: usize) -> bool {
        self.inverse[m].is_some()
    }

    pub fn inverse_of(&self, m: usize) -> Option<usize> {
        self.inverse[m]
    }

    pub fn morphisms_from(&self, x: usize) -> &[usize] {
        &self.out_morphisms[x]
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        self.out_morphisms[a].iter().copied().filter(|&m| self.tgt[m] == b).collect()
    }

    /// The core groupoid `C0`: all objects, invertible morphisms only.
    /// Returns the groupoid and the morphism index translation
    /// (category index -> groupoid index).
    pub fn core_groupoid(&self) -> (Arc<FinGroupoid>, HashMap<usize, usize>) {
        let isos: Vec<usize> = (0..self.morphism_count()).filter(|&m| self.is_iso(m)).collect();
        let to_core: HashMap<usize, usize> = isos.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        let morphisms: Vec<(usize, usize)> = isos.iter().map(|&m| (self.src[m], self.tgt[m])).collect();
        let identity: Vec<usize> = self.identity.iter().map(|&e| to_core[&e]).collect();
        let mut compose = HashMap::new();
        for (k2, &g) in isos.iter().enumerate() {
            for (k1, &f) in isos.iter().enumerate() {
                if self.tgt[f] == self.src[g] {
                    compose.insert((k2, k1), to_core[&self.compose[&(g, f)]]);
                }
            }
        }
        let core = FinGroupoid::from_table(self.objects, morphisms, identity, compose)
            .expect("the core of a category is a groupoid");
        (Arc::new(core), to_core)
    }

    /// Materialize the span `C0 <- C1 -> C0` with the decoration induced by
    /// `F`, for cross-checking the fiberwise linearization; quadratic in the
    /// morphism count, intended for small categories.
    pub fn square_groupoid_span(&self, f: &VecFunctor) -> DecoratedSpan {
        let (core, to_core) = self.core_groupoid();
        let core_backs: Vec<usize> = {
            let mut v = vec![0; to_core.len()];
            for (&cat, &g) in &to_core {
                v[g] = cat;
            }
            v
        };
        let _ = core_backs;
        // objects of C1: all morphisms of C; morphisms of C1: squares (u, v)
        let m = self.morphism_count();
        let mut sq_morphisms: Vec<(usize, usize)> = vec![];
        let mut sq_data: Vec<(usize, usize, usize)> = vec![]; // (u, v, source object of C1)
        let mut sq_index: HashMap<(usize, usize, usize), usize> = HashMap::new();
        for x in 0..m {
            for &u in &self.out_morphisms[self.src[x]] {
                if !self.is_iso(u) {
                    continue;
                }
                for &v in &self.out_morphisms[self.tgt[x]] {
                    if !self.is_iso(v) {
                        continue;
                    }
                    // square from x to x' = v . x . u^{-1}
                    let vu = self.compose[&(v, x)];
                    let x2 = self.compose[&(vu, self.inverse[u].unwrap())];
                    sq_index.insert((u, v, x), sq_data.len());
                    sq_data.push((u, v, x));
                    sq_morphisms.push((x, x2));
                }
            }
        }
        let identity: Vec<usize> = (0..m)
            .map(|x| sq_index[&(self.identity[self.src[x]], self.identity[self.tgt[x]], x)])
            .collect();
        let mut compose = HashMap::new();
        for (j, &(u2, v2, _)) in sq_data.iter().enumerate() {
            for (i, &(u1, v1, x_src)) in sq_data.iter().enumerate() {
                if sq_morphisms[i].1 == sq_morphisms[j].0 {
                    let u = self.compose[&(u2, u1)];
                    let v = self.compose[&(v2, v1)];
                    compose.insert((j, i), sq_index[&(u, v, x_src)]);
                }
            }
        }
        let apex = Arc::new(
            FinGroupoid::from_table(m, sq_morphisms, identity, compose)
                .expect("squares with invertible verticals form a groupoid"),
        );
        let sys = Arc::new(
            LocalSystem::new(
                Arc::clone(&core),
                f.dims.clone(),
                (0..core.morphism_count())
                    .map(|g| {
                        let cat = (0..self.morphism_count())
                            .find(|&c| to_core.get(&c) == Some(&g))
                            .unwrap();
                        f.matrices[cat].clone()
                    })
                    .collect(),
            )
            .expect("restriction of a functor to the core is a local system"),
        );
        let right = GroupoidFunctor {
            source: Arc::clone(&apex),
            target: Arc::clone(&core),
            obj_map: (0..m).map(|x| self.src[x]).collect(),
            mor_map: sq_data.iter().map(|&(u, _, _)| to_core[&u]).collect(),
        };
        let left = GroupoidFunctor {
            source: Arc::clone(&apex),
            target: core,
            obj_map: (0..m).map(|x| self.tgt[x]).collect(),
            mor_map: sq_data.iter().map(|&(_, v, _)| to_core[&v]).collect(),
        };
        let decoration = (0..m).map(|x| f.matrices[x].clone()).collect();
        DecoratedSpan::new(left, right, Arc::clone(&sys), sys, decoration)
            .expect("functor decorations are natural")
    }
}

/// JSON form of a finite category: the groupoid table format extended by
/// non-invertible morphisms.
#[derive(serde::Serialize, serde::Deserialize)]
pub struct CategoryJson {
    pub objects: usize,
    pub morphisms: Vec<crate::groupoid::MorphismJson>,
    pub identity: Vec<usize>,
    pub compose: Vec<Vec<Option<usize>>>,
}

impl FinCategory {
    pub fn from_json(json: &CategoryJson) -> Result<Self, CatError> {
        let m = json.morphisms.len();
        if json.compose.len() != m || json.compose.iter().any(|r| r.len() != m) {
            return Err(CatError::Encoding("compose table must be m x m".into()));
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

    pub fn to_json(&self) -> CategoryJson {
        let m = self.morphism_count();
        CategoryJson {
            objects: self.objects,
            morphisms: (0..m)
                .map(|i| crate::groupoid::MorphismJson { src: self.src[i], tgt: self.tgt[i] })
                .collect(),
            identity: self.identity.clone(),
            compose: (0..m).map(|g| (0..m).map(|f| self.compose(g, f)).collect()).collect(),
        }
    }
}

/// A functor `C -> Vec_k`: dimensions per object, a matrix per morphism.
#[derive(Clone, Debug)]
pub struct VecFunctor {
    pub dims: Vec<usize>,
    pub matrices: Vec<ExactMatrix>,
}

impl VecFunctor {
    pub fn new(cat: &FinCategory, dims: Vec<usize>, matrices: Vec<ExactMatrix>) -> Result<Self, CatError> {
        if dims.len() != cat.object_count() || matrices.len() != cat.morphism_count() {
            return Err(CatError::Functor("functor data must cover the category".into()));
        }
        for m in 0..cat.morphism_count() {
            if matrices[m].nrows() != dims[cat.tgt(m)] || matrices[m].ncols() != dims[cat.src(m)] {
                return Err(CatError::Functor(format!("matrix at morphism {} has the wrong shape", m)));
            }
        }
        for x in 0..cat.object_count() {
            if !matrices[cat.identity_of(x)].is_identity() {
                return Err(CatError::Functor(format!("identity at object {} not sent to the identity", x)));
            }
        }
        for f in 0..cat.morphism_count() {
            for &g in cat.morphisms_from(cat.tgt(f)) {
                let gf = cat.compose(g, f).unwrap();
                if matrices[g].matmul(&matrices[f]) != matrices[gf] {
                    return Err(CatError::Functor(format!("composition fails at ({}, {})", g, f)));
                }
            }
        }
        Ok(VecFunctor { dims, matrices })
    }

    pub fn constant(cat: &FinCategory, dim: usize) -> Self {
        VecFunctor {
            dims: vec![dim; cat.object_count()],
            matrices: (0..cat.morphism_count()).map(|_| ExactMatrix::identity(dim)).collect(),
        }
    }
}

/// Coinvariant blocks of `F` over the iso classes of `C`, with the data
/// needed to read vectors in and out.
#[derive(Clone, Debug)]
pub struct CatColim {
    /// One block per iso class, in core-component order.
    pub blocks: Vec<QuotientBasis>,
    pub offsets: Vec<usize>,
    pub total_dim: usize,
    /// `iota_a : F(a) -> colim` per object.
    pub iota: Vec<ExactMatrix>,
    /// Component (iso class) index per object.
    pub class_of: Vec<usize>,
    /// Basepoint object per class.
    pub basepoints: Vec<usize>,
}

/// Coinvariants of `F` over the core groupoid.
pub fn cat_colim(cat: &FinCategory, f: &VecFunctor) -> CatColim {
    let (core, to_core) = cat.core_groupoid();
    let mut core_to_cat = vec![0usize; core.morphism_count()];
    for (&c, &g) in &to_core {
        core_to_cat[g] = c;
    }
    let sys = LocalSystem::new(
        Arc::clone(&core),
        f.dims.clone(),
        (0..core.morphism_count()).map(|g| f.matrices[core_to_cat[g]].clone()).collect(),
    )
    .expect("core restriction is a local system");
    let co = crate::span::colim(&sys);
    let comps = core.components();
    let mut class_of = vec![usize::MAX; cat.object_count()];
    let mut basepoints = vec![];
    for (k, c) in comps.iter().enumerate() {
        for &x in &c.objects {
            class_of[x] = k;
        }
        basepoints.push(c.basepoint);
    }
    CatColim {
        blocks: co.blocks,
        offsets: co.offsets,
        total_dim: co.total_dim,
        iota: co.iota,
        class_of,
        basepoints,
    }
}

/// The linearization `Phi_{C, F} : colim F -> colim F`.
///
/// For the constant one-dimensional functor the block entry from class `[a]`
/// to class `[b]` is `|C(a, b)| / |Aut(b)|`.
pub fn cat_linearize(cat: &FinCategory, f: &VecFunctor) -> ExactMatrix {
    cat_linearize_sub(cat, f, None)
}

/// Linearization of a subcategory sharing the objects and all isomorphisms
/// of `C` (morphism membership given by `allowed`).
pub fn cat_linearize_sub(cat: &FinCategory, f: &VecFunctor, allowed: Option<&[bool]>) -> ExactMatrix {
    let co = cat_colim(cat, f);
    let mut out = ExactMatrix::zeros(co.total_dim, co.total_dim);
    for (k, &m) in co.basepoints.iter().enumerate() {
        let phi = linearize_out_of(cat, f, &co, m, allowed);
        let block = phi.matmul(&co.blocks[k].lift);
        for i in 0..block.nrows() {
            for j in 0..block.ncols() {
                out[(i, co.offsets[k] + j)] = block[(i, j)].clone();
            }
        }
    }
    out
}

/// `Phi` restricted to one source basepoint: the integral over the fiber of
/// the source leg, using the equivalence of that fiber with the groupoid of
/// morphisms out of `m` and postcomposition squares.
fn linearize_out_of(
    cat: &FinCategory,
    f: &VecFunctor,
    co: &CatColim,
    m: usize,
    allowed: Option<&[bool]>,
) -> ExactMatrix {
    let ok = |x: usize| allowed.is_none_or(|a| a[x]);
    let fiber: Vec<usize> = cat.morphisms_from(m).iter().copied().filter(|&x| ok(x)).collect();
    let pos: HashMap<usize, usize> = fiber.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    // union-find over postcomposition edges x -> v . x
    let mut parent: Vec<usize> = (0..fiber.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    let mut stab = vec![0usize; fiber.len()];
    for (i, &x) in fiber.iter().enumerate() {
        for &v in cat.morphisms_from(cat.tgt(x)) {
            if !cat.is_iso(v) {
                continue;
            }
            let vx = cat.compose(v, x).unwrap();
            let j = pos[&vx];
            if j == i {
                stab[i] += 1;
            }
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut reps: Vec<usize> = vec![];
    let mut seen = vec![false; fiber.len()];
    for i in 0..fiber.len() {
        let r = find(&mut parent, i);
        if !seen[r] {
            seen[r] = true;
            reps.push(r);
        }
    }
    let d_m = f.dims[m];
    let mut phi = ExactMatrix::zeros(co.total_dim, d_m);
    for r in reps {
        let x = fiber[r];
        let w = Cyclotomic::from_rational(BigRational::new(1.into(), (stab[r] as i64).into()));
        let term = co.iota[cat.tgt(x)].matmul(&f.matrices[x]).scale(&w);
        phi = phi.add(&term);
    }
    phi
}

/// Report from the chain-sum inversion: the inverse together with the chain
/// lengths that contributed.
pub struct MoebiusInverse {
    pub inverse: ExactMatrix,
    pub max_chain_length: usize,
}

/// Moebius inversion: `Phi^{-1} = sum_n (-1)^n Phi_{C_n^<}` over chains of
/// non-invertible morphisms. Requires all endomorphisms invertible; verified
/// internally to invert [`cat_linearize`] on both sides.
pub fn moebius_invert(cat: &FinCategory, f: &VecFunctor) -> Result<MoebiusInverse, CatError> {
    moebius_invert_sub(cat, f, None)
}

/// Chain-sum inversion of a subcategory (all objects, all isos, membership
/// by `allowed`).
pub fn moebius_invert_sub(
    cat: &FinCategory,
    f: &VecFunctor,
    allowed: Option<&[bool]>,
) -> Result<MoebiusInverse, CatError> {
    let ok = |x: usize| allowed.is_none_or(|a| a[x]);
    for x in 0..cat.morphism_count() {
        if ok(x) && cat.src(x) == cat.tgt(x) && !cat.is_iso(x) {
            return Err(CatError::NonInvertibleEndo { object: cat.src(x), morphism: x });
        }
    }
    let co = cat_colim(cat, f);
    let classes = co.basepoints.len();
    let mut total = ExactMatrix::identity(co.total_dim);
    let mut sign = true; // next term is negative
    let mut chains: Vec<Vec<usize>> = vec![vec![]];
    let mut length = 0usize;
    loop {
        // extend every chain by one non-invertible allowed morphism between
        // skeleton basepoints
        let mut next: Vec<Vec<usize>> = vec![];
        for chain in &chains {
            let from = if let Some(&last) = chain.last() {
                co.basepoints[co.class_of[cat.tgt(last)]]
            } else {
                usize::MAX // placeholder: chains of length 1 start anywhere
            };
            let starts: Vec<usize> = if chain.is_empty() {
                co.basepoints.clone()
            } else {
                vec![from]
            };
            for s in starts {
                for &x in cat.morphisms_from(s) {
                    if ok(x) && !cat.is_iso(x) && co.basepoints[co.class_of[cat.tgt(x)]] == cat.tgt(x) {
                        let mut c = chain.clone();
                        c.push(x);
                        next.push(c);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        length += 1;
        // the termination bound from the poset structure on iso classes
        assert!(
            length <= classes,
            "chains of non-invertible morphisms must die out within the class count"
        );
        let phi_n = linearize_chain_span(cat, f, &co, &next);
        total = if sign { total.sub(&phi_n) } else { total.add(&phi_n) };
        sign = !sign;
        chains = next;
    }
    // exactness check against the linearization
    let phi = cat_linearize_sub(cat, f, allowed);
    if !phi.matmul(&total).is_identity() || !total.matmul(&phi).is_identity() {
        return Err(CatError::Axiom("chain sum failed to invert the linearization".into()));
    }
    Ok(MoebiusInverse { inverse: total, max_chain_length: length })
}

/// Linearize the span of composable chains (all with skeletal intermediate
/// objects and source normalized to a basepoint).
fn linearize_chain_span(
    cat: &FinCategory,
    f: &VecFunctor,
    co: &CatColim,
    chains: &[Vec<usize>],
) -> ExactMatrix {
    let mut out = ExactMatrix::zeros(co.total_dim, co.total_dim);
    // group chains by их starting basepoint
    let mut by_start: HashMap<usize, Vec<&Vec<usize>>> = HashMap::new();
    for c in chains {
        by_start.entry(cat.src(c[0])).or_default().push(c);
    }
    for (k, &m) in co.basepoints.iter().enumerate() {
        let Some(bucket) = by_start.get(&m) else { continue };
        // union-find over single-level postcomposition moves
        let index: HashMap<&Vec<usize>, usize> =
            bucket.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut parent: Vec<usize> = (0..bucket.len()).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for (i, chain) in bucket.iter().enumerate() {
            for level in 0..chain.len() {
                let a_i = cat.tgt(chain[level]);
                for &g in cat.morphisms_from(a_i) {
                    if !cat.is_iso(g) || cat.tgt(g) != a_i {
                        continue;
                    }
                    let mut moved: Vec<usize> = (*chain).clone();
                    moved[level] = cat.compose(g, chain[level]).unwrap();
                    if level + 1 < chain.len() {
                        moved[level + 1] = cat
                            .compose(chain[level + 1], cat.inverse_of(g).unwrap())
                            .unwrap();
                    }
                    if let Some(&j) = index.get(&moved) {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        if a != b {
                            parent[a] = b;
                        }
                    }
                }
            }
        }
        let mut reps: Vec<usize> = vec![];
        let mut seen = vec![false; bucket.len()];
        for i in 0..bucket.len() {
            let r = find(&mut parent, i);
            if !seen[r] {
                seen[r] = true;
                reps.push(i);
            }
        }
        // one term per orbit... compute stabilizer sizes by direct search
        let mut phi = ExactMatrix::zeros(co.total_dim, f.dims[m]);
        let mut seen_rep = vec![false; bucket.len()];
        for i in reps {
            let r = find(&mut parent, i);
            if seen_rep[r] {
                continue;
            }
            seen_rep[r] = true;
            let chain = bucket[i];
            let stab = chain_stabilizer_order(cat, chain);
            let composite = chain
                .iter()
                .copied()
                .reduce(|acc, step| cat.compose(step, acc).unwrap())
                .unwrap();
            let w = Cyclotomic::from_rational(BigRational::new(1.into(), (stab as i64).into()));
            let term = co.iota[cat.tgt(composite)].matmul(&f.matrices[composite]).scale(&w);
            phi = phi.add(&term);
        }
        let block = phi.matmul(&co.blocks[k].lift);
        for i in 0..block.nrows() {
            for j in 0..block.ncols() {
                out[(i, co.offsets[k] + j)] = block[(i, j)].clone();
            }
        }
    }
    out
}

/// Number of ladder automorphisms of a chain with the first vertical fixed
/// to the identity.
fn chain_stabilizer_order(cat: &FinCategory, chain: &[usize]) -> usize {
    fn recurse(cat: &FinCategory, chain: &[usize], level: usize, g_prev: usize) -> usize {
        if level == chain.len() {
            return 1;
        }
        let step = chain[level];
        let a_next = cat.tgt(step);
        // need iso g at a_next with g . step = step . g_prev
        let rhs = cat.compose(step, g_prev).unwrap();
        let mut count = 0;
        for &g in cat.morphisms_from(a_next) {
            if cat.tgt(g) == a_next && cat.is_iso(g) && cat.compose(g, step) == Some(rhs) {
                count += recurse(cat, chain, level + 1, g);
            }
        }
        count
    }
    recurse(cat, chain, 0, cat.identity_of(cat.src(chain[0])))
}

/// Inversion through a nested factorization system: the factor subcategories
/// `T^(l)` each satisfy the invertible-endomorphism condition, so each has a
/// chain-sum inverse, and the product of those inverses (innermost last)
/// inverts `Phi_{C, F}`.
pub fn factorized_invert(
    cat: &FinCategory,
    nested: &NestedSystem,
    f: &VecFunctor,
) -> Result<ExactMatrix, CatError> {
    let derived = nested.derived_classes(cat)?;
    // endomorphism condition per derived class
    for (level, class) in derived.iter().enumerate() {
        for x in 0..cat.morphism_count() {
            if class[x] && cat.src(x) == cat.tgt(x) && !cat.is_iso(x) {
                return Err(CatError::BadDerivedClass { level, witness: x });
            }
        }
    }
    // Phi_C = Phi_{T^(0)} * Phi_{T^(1)} * ... * Phi_{T^(n)}
    let phis: Vec<ExactMatrix> = derived
        .iter()
        .map(|class| cat_linearize_sub(cat, f, Some(class)))
        .collect();
    let phi_c = cat_linearize(cat, f);
    let product = phis
        .iter()
        .fold(None::<ExactMatrix>, |acc, m| Some(match acc {
            None => m.clone(),
            Some(a) => a.matmul(m),
        }))
        .expect("at least one factorization system");
    if product != phi_c {
        return Err(CatError::Axiom("derived classes do not factor the linearization".into()));
    }
    let mut inverse: Option<ExactMatrix> = None;
    for (level, class) in derived.iter().enumerate().rev() {
        let inv = moebius_invert_sub(cat, f, Some(class)).map_err(|e| match e {
            CatError::NonInvertibleEndo { morphism, .. } => {
                CatError::BadDerivedClass { level, witness: morphism }
            }
            other => other,
        })?;
        inverse = Some(match inverse {
            None => inv.inverse,
            Some(acc) => acc.matmul(&inv.inverse),
        });
    }
    let inverse = inverse.unwrap();
    if !phi_c.matmul(&inverse).is_identity() || !inverse.matmul(&phi_c).is_identity() {
        return Err(CatError::Axiom("factorized inverse failed the exactness check".into()));
    }
    Ok(inverse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_integer(n)
    }

    fn rat(n: i64, d: i64) -> Cyclotomic {
        Cyclotomic::from_rational(rational(n, d))
    }

    #[test]
    fn divisor_poset_zeta_matrix() {
        let cat = FinCategory::divisor_poset(12);
        let f = VecFunctor::constant(&cat, 1);
        let phi = cat_linearize(&cat, &f);
        // divisors 1,2,3,4,6,12: entry [b][a] = 1 iff a | b
        let divisors = [1u64, 2, 3, 4, 6, 12];
        for (i, &b) in divisors.iter().enumerate() {
            for (j, &a) in divisors.iter().enumerate() {
                let expect = if b % a == 0 { c(1) } else { c(0) };
                assert_eq!(phi[(i, j)], expect, "zeta entry ({}, {})", b, a);
            }
        }
    }

    #[test]
    fn finset2_linearization_matches_formula() {
        let cat = FinCategory::finset(2);
        let f = VecFunctor::constant(&cat, 1);
        let phi = cat_linearize(&cat, &f);
        // oracle: brute-force function counts n^m / n!
        let expected = ExactMatrix::from_rows(vec![
            vec![c(1), c(0), c(0)],
            vec![c(1), c(1), c(1)],
            vec![rat(1, 2), c(1), c(2)],
        ]);
        assert_eq!(phi, expected);
    }

    #[test]
    fn one_object_group_category_linearizes_to_identity() {
        // the category BZ/3: averaging on coinvariants of any rep is the identity
        let z3 = crate::fingroup::FinGroup::cyclic(3);
        let n = z3.order();
        let mut compose = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                compose.insert((a, b), z3.mul(a, b));
            }
        }
        let cat = FinCategory::from_table(1, vec![(0, 0); n], vec![z3.identity()], compose).unwrap();
        // regular representation
        let mats: Vec<ExactMatrix> = (0..n)
            .map(|x| ExactMatrix::from_fn(n, n, |i, j| if z3.mul(x, j) == i { c(1) } else { c(0) }))
            .collect();
        let f = VecFunctor::new(&cat, vec![n], mats).unwrap();
        let phi = cat_linearize(&cat, &f);
        assert!(phi.is_identity());
    }

    #[test]
    fn moebius_on_divisor_poset_of_12() {
        let cat = FinCategory::divisor_poset(12);
        let f = VecFunctor::constant(&cat, 1);
        let inv = moebius_invert(&cat, &f).unwrap();
        let divisors = [1u64, 2, 3, 4, 6, 12];
        // classical Moebius recursion oracle
        let mut mu = HashMap::new();
        for (j, &a) in divisors.iter().enumerate() {
            for (i, &b) in divisors.iter().enumerate() {
                if b % a != 0 {
                    mu.insert((j, i), 0i64);
                    continue;
                }
                if a == b {
                    mu.insert((j, i), 1);
                    continue;
                }
                let mut s = 0;
                for (k, &m) in divisors.iter().enumerate() {
                    if m % a == 0 && b % m == 0 && m != b {
                        s += mu[&(j, k)];
                    }
                }
                mu.insert((j, i), -s);
            }
        }
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(inv.inverse[(i, j)], c(mu[&(j, i)]), "mu({}, {})", divisors[j], divisors[i]);
            }
        }
        // spec spot values: mu(1, 6) = 1, mu(1, 12) = 0
        assert_eq!(inv.inverse[(4, 0)], c(1));
        assert_eq!(inv.inverse[(5, 0)], c(0));
        assert!(inv.max_chain_length <= 6);
    }

    #[test]
    fn moebius_on_discrete_category_is_identity() {
        let cat = FinCategory::poset(3, |i, j| i == j);
        let f = VecFunctor::constant(&cat, 1);
        let inv = moebius_invert(&cat, &f).unwrap();
        assert!(inv.inverse.is_identity());
        assert_eq!(inv.max_chain_length, 0);
    }

    #[test]
    fn moebius_on_chain_poset() {
        let cat = FinCategory::poset(3, |i, j| i <= j);
        let f = VecFunctor::constant(&cat, 1);
        let inv = moebius_invert(&cat, &f).unwrap();
        let phi = cat_linearize(&cat, &f);
        assert!(phi.matmul(&inv.inverse).is_identity());
        // adjacent covers carry -1, the long edge 0
        assert_eq!(inv.inverse[(1, 0)], c(-1));
        assert_eq!(inv.inverse[(2, 1)], c(-1));
        assert_eq!(inv.inverse[(2, 0)], c(0));
    }

    #[test]
    fn moebius_rejects_non_invertible_endos() {
        let cat = FinCategory::finset(2);
        let f = VecFunctor::constant(&cat, 1);
        match moebius_invert(&cat, &f) {
            Err(CatError::NonInvertibleEndo { .. }) => {}
            other => panic!("expected endomorphism rejection, got {:?}", other.map(|i| i.inverse)),
        }
    }

    #[test]
    fn cat_linearize_agrees_with_span_route() {
        for cat in [FinCategory::finset(2), FinCategory::divisor_poset(6)] {
            let f = VecFunctor::constant(&cat, 1);
            let via_fiber = cat_linearize(&cat, &f);
            let span = cat.square_groupoid_span(&f);
            let via_span = crate::span::linearize(&span);
            assert_eq!(via_fiber, via_span);
        }
    }

    #[test]
    fn cat_linearize_agrees_with_span_route_nonconstant() {
        // divisor poset of 4 with a rank-climbing functor
        let cat = FinCategory::poset(2, |i, j| i <= j);
        let dims = vec![2, 1];
        let mut mats = vec![ExactMatrix::zeros(0, 0); cat.morphism_count()];
        for x in 0..cat.morphism_count() {
            let (s, t) = (cat.src(x), cat.tgt(x));
            mats[x] = if s == t {
                ExactMatrix::identity(dims[s])
            } else {
                ExactMatrix::from_rows(vec![vec![c(1), c(2)]])
            };
        }
        let f = VecFunctor::new(&cat, dims, mats).unwrap();
        let via_fiber = cat_linearize(&cat, &f);
        let via_span = crate::span::linearize(&cat.square_groupoid_span(&f));
        assert_eq!(via_fiber, via_span);
        let inv = moebius_invert(&cat, &f).unwrap();
        assert!(via_fiber.matmul(&inv.inverse).is_identity());
    }
}
