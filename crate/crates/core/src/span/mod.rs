//! Local systems on finite groupoids, their (co)limits and norm maps, and
//! decorated spans with their linearization.
//!
//! The linearization of a decorated span `(B, L_B) <- (X, alpha) -> (A, L_A)`
//! is assembled per component of `A`: the component map at a basepoint `a` is
//! the finite path integral over the homotopy fiber of the right leg,
//! `sum (1/|Aut|) iota_{t(x)} . alpha_x . L_A(path)`, descended to the
//! coinvariant block. Composition of spans multiplies linearizations; this is
//! the computational spine everything downstream leans on.

use crate::groupoid::{fiber_components, FinGroupoid, GroupoidError, GroupoidFunctor};
use crate::scalar::{quotient_by_columns, Cyclotomic, ExactMatrix, QuotientBasis};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpanError {
    #[error("not functorial: {0}")]
    Functoriality(String),
    #[error("decoration is not natural at morphism {morphism}")]
    Naturality { morphism: usize },
    #[error("mismatched span data: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

/// A functor from a finite groupoid to finite-dimensional vector spaces:
/// a dimension per object and an invertible matrix per morphism.
///
/// The optional grading records an (even, odd) dimension split per object,
/// with bases ordered even-then-odd; morphism matrices must then be block
/// diagonal. No Koszul signs appear at this level.
#[derive(Clone, Debug)]
pub struct LocalSystem {
    pub base: Arc<FinGroupoid>,
    pub dims: Vec<usize>,
    pub grading: Option<Vec<(usize, usize)>>,
    pub matrices: Vec<ExactMatrix>,
}

impl LocalSystem {
    pub fn new(
        base: Arc<FinGroupoid>,
        dims: Vec<usize>,
        matrices: Vec<ExactMatrix>,
    ) -> Result<Self, SpanError> {
        Self::graded(base, dims, None, matrices)
    }

    pub fn graded(
        base: Arc<FinGroupoid>,
        dims: Vec<usize>,
        grading: Option<Vec<(usize, usize)>>,
        matrices: Vec<ExactMatrix>,
    ) -> Result<Self, SpanError> {
        if dims.len() != base.object_count() || matrices.len() != base.morphism_count() {
            return Err(SpanError::Functoriality("system data must cover the base".into()));
        }
        if let Some(g) = &grading {
            if g.len() != dims.len() || g.iter().zip(&dims).any(|(&(e, o), &d)| e + o != d) {
                return Err(SpanError::Functoriality("grading must refine the dimensions".into()));
            }
        }
        for m in 0..base.morphism_count() {
            let (s, t) = (base.src(m), base.tgt(m));
            if matrices[m].nrows() != dims[t] || matrices[m].ncols() != dims[s] {
                return Err(SpanError::Functoriality(format!("matrix at morphism {} has the wrong shape", m)));
            }
        }
        let sys = LocalSystem { base, dims, grading, matrices };
        sys.validate()?;
        Ok(sys)
    }

    fn validate(&self) -> Result<(), SpanError> {
        let base = &self.base;
        for x in 0..base.object_count() {
            if !self.matrices[base.identity_of(x)].is_identity() {
                return Err(SpanError::Functoriality(format!("identity of object {} is not the identity matrix", x)));
            }
        }
        for f in 0..base.morphism_count() {
            for &g in base.morphisms_from(base.tgt(f)) {
                let gf = base.compose(g, f).unwrap();
                if self.matrices[g].matmul(&self.matrices[f]) != self.matrices[gf] {
                    return Err(SpanError::Functoriality(format!("composition fails at ({}, {})", g, f)));
                }
            }
        }
        // invertibility follows from functoriality: L(f^{-1}) L(f) = id
        for f in 0..base.morphism_count() {
            let inv = base.inverse_of(f);
            if !self.matrices[inv].matmul(&self.matrices[f]).is_identity() {
                return Err(SpanError::Functoriality(format!("morphism {} does not act invertibly", f)));
            }
        }
        if let Some(grading) = &self.grading {
            for f in 0..base.morphism_count() {
                let (es, _) = grading[self.base.src(f)];
                let (et, _) = grading[self.base.tgt(f)];
                let m = &self.matrices[f];
                for i in 0..m.nrows() {
                    for j in 0..m.ncols() {
                        let odd_row = i >= et;
                        let odd_col = j >= es;
                        if odd_row != odd_col && !m[(i, j)].is_zero() {
                            return Err(SpanError::Functoriality(format!(
                                "morphism {} does not preserve the grading",
                                f
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The constant system of a given dimension.
    pub fn trivial(base: Arc<FinGroupoid>, dim: usize) -> Self {
        let dims = vec![dim; base.object_count()];
        let matrices = (0..base.morphism_count()).map(|_| ExactMatrix::identity(dim)).collect();
        LocalSystem { base, dims, grading: None, matrices }
    }

    /// A representation of `G` as a system on `BG`: one matrix per group
    /// element, indexed like the morphisms of [`FinGroupoid::bg`].
    pub fn from_representation(
        bg: Arc<FinGroupoid>,
        matrices: Vec<ExactMatrix>,
    ) -> Result<Self, SpanError> {
        let dim = matrices.first().map_or(0, |m| m.ncols());
        LocalSystem::new(bg, vec![dim], matrices)
    }

    /// The dual system `L^{v}(u) = L(u^{-1})^T`.
    pub fn dual(&self) -> LocalSystem {
        let matrices = (0..self.base.morphism_count())
            .map(|m| self.matrices[self.base.inverse_of(m)].transpose())
            .collect();
        LocalSystem {
            base: Arc::clone(&self.base),
            dims: self.dims.clone(),
            grading: self.grading.clone(),
            matrices,
        }
    }

    /// Tensor product on the cartesian product groupoid (index conventions of
    /// [`FinGroupoid::product`]).
    pub fn tensor(l1: &LocalSystem, l2: &LocalSystem, product_base: Arc<FinGroupoid>) -> LocalSystem {
        let o2 = l2.base.object_count();
        let m2 = l2.base.morphism_count();
        let dims: Vec<usize> = (0..product_base.object_count())
            .map(|x| l1.dims[x / o2] * l2.dims[x % o2])
            .collect();
        let matrices: Vec<ExactMatrix> = (0..product_base.morphism_count())
            .map(|m| l1.matrices[m / m2].kronecker(&l2.matrices[m % m2]))
            .collect();
        let grading = match (&l1.grading, &l2.grading) {
            (None, None) => None,
            (a, b) => {
                let even1 = a.as_ref().is_none_or(|g| g.iter().all(|&(_, o)| o == 0));
                let even2 = b.as_ref().is_none_or(|g| g.iter().all(|&(_, o)| o == 0));
                assert!(even1 && even2, "graded tensor with odd parts is out of scope here");
                Some(dims.iter().map(|&d| (d, 0)).collect())
            }
        };
        LocalSystem { base: product_base, dims, grading, matrices }
    }
}

/// The object of co-sections: one coinvariant block per component.
#[derive(Clone, Debug)]
pub struct Colimit {
    /// Quotient data per component, in `components()` order.
    pub blocks: Vec<QuotientBasis>,
    pub offsets: Vec<usize>,
    pub total_dim: usize,
    /// Canonical map `iota_a : L(a) -> colim` per object.
    pub iota: Vec<ExactMatrix>,
}

/// The object of sections: one invariant block per component.
#[derive(Clone, Debug)]
pub struct Limit {
    /// Invariant basis (columns) per component, at the basepoint.
    pub blocks: Vec<ExactMatrix>,
    pub offsets: Vec<usize>,
    pub total_dim: usize,
    /// Canonical map `p_a : lim -> L(a)` per object.
    pub proj: Vec<ExactMatrix>,
}

/// Coinvariants `L(a)_{Aut(a)}` per component, with canonical maps from every
/// object. The block basis is chosen by exact column reduction in a fixed
/// enumeration order, so repeated runs agree entry for entry.
pub fn colim(sys: &LocalSystem) -> Colimit {
    let base = &sys.base;
    let comps = base.components();
    let mut blocks = Vec::with_capacity(comps.len());
    let mut offsets = Vec::with_capacity(comps.len());
    let mut total = 0;
    for comp in &comps {
        let d = sys.dims[comp.basepoint];
        let mut rel_cols: Vec<ExactMatrix> = vec![];
        for &g in &comp.aut_morphisms {
            rel_cols.push(ExactMatrix::identity(d).sub(&sys.matrices[g]));
        }
        let relations = rel_cols
            .into_iter()
            .fold(ExactMatrix::zeros(d, 0), |acc, m| acc.hstack(&m));
        let q = quotient_by_columns(d, &relations);
        offsets.push(total);
        total += q.dim();
        blocks.push(q);
    }
    // canonical maps per object
    let mut iota = vec![ExactMatrix::zeros(0, 0); base.object_count()];
    for (k, comp) in comps.iter().enumerate() {
        let paths = base.paths_to_basepoint(comp);
        for &a in &comp.objects {
            let mut m = blocks[k].proj.clone();
            // descend along the path a -> basepoint
            let path = &paths[&a];
            let mut transport = ExactMatrix::identity(sys.dims[a]);
            for &step in path {
                transport = sys.matrices[step].matmul(&transport);
            }
            m = m.matmul(&transport);
            // embed into the total space
            let mut embedded = ExactMatrix::zeros(total, sys.dims[a]);
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    embedded[(offsets[k] + i, j)] = m[(i, j)].clone();
                }
            }
            iota[a] = embedded;
        }
    }
    Colimit { blocks, offsets, total_dim: total, iota }
}

/// Invariants `L(a)^{Aut(a)}` per component, with canonical projections.
pub fn lim(sys: &LocalSystem) -> Limit {
    let base = &sys.base;
    let comps = base.components();
    let mut blocks = Vec::with_capacity(comps.len());
    let mut offsets = Vec::with_capacity(comps.len());
    let mut total = 0;
    for comp in &comps {
        let d = sys.dims[comp.basepoint];
        let stacked = comp
            .aut_morphisms
            .iter()
            .map(|&g| sys.matrices[g].sub(&ExactMatrix::identity(d)))
            .fold(ExactMatrix::zeros(0, d), |acc, m| acc.vstack(&m));
        let basis = stacked.kernel();
        offsets.push(total);
        total += basis.ncols();
        blocks.push(basis);
    }
    let mut proj = vec![ExactMatrix::zeros(0, 0); base.object_count()];
    for (k, comp) in comps.iter().enumerate() {
        let paths = base.paths_to_basepoint(comp);
        let q = blocks[k].ncols();
        for &a in &comp.objects {
            // extract block coordinates, then include invariants at the
            // basepoint, then transport basepoint -> a
            let mut extract = ExactMatrix::zeros(q, total);
            for i in 0..q {
                extract[(i, offsets[k] + i)] = Cyclotomic::one();
            }
            let at_bp = blocks[k].matmul(&extract);
            let path = &paths[&a];
            let mut transport = ExactMatrix::identity(sys.dims[comp.basepoint]);
            for &step in path {
                // path runs a -> bp; invert to go bp -> a
                transport = transport.matmul(&sys.matrices[base.inverse_of(step)]);
            }
            // note reversed order: inv(last) ... applied after
            proj[a] = transport.matmul(&at_bp);
        }
    }
    Limit { blocks, offsets, total_dim: total, proj }
}

/// The norm map `colim -> lim` per component: `[v] -> sum_{g in Aut} L(g) v`,
/// expressed in the chosen bases. Invertible in characteristic zero.
pub fn norm_map(sys: &LocalSystem) -> Vec<ExactMatrix> {
    let base = &sys.base;
    let comps = base.components();
    let co = colim(sys);
    let li = lim(sys);
    comps
        .iter()
        .enumerate()
        .map(|(k, comp)| {
            let d = sys.dims[comp.basepoint];
            let mut s = ExactMatrix::zeros(d, d);
            for &g in &comp.aut_morphisms {
                s = s.add(&sys.matrices[g]);
            }
            let image = s.matmul(&co.blocks[k].lift);
            li.blocks[k]
                .solve(&image)
                .expect("norm image lies in the invariants")
        })
        .collect()
}

/// Block-diagonal total norm map `colim -> lim`.
pub fn total_norm(sys: &LocalSystem) -> ExactMatrix {
    norm_map(sys)
        .into_iter()
        .fold(ExactMatrix::zeros(0, 0), |acc, m| acc.direct_sum(&m))
}

/// A span of groupoids `B <- X -> A` carrying local systems on the feet and
/// a fiberwise map `alpha_x : L_A(s x) -> L_B(t x)`.
#[derive(Clone)]
pub struct DecoratedSpan {
    /// Left leg `t : X -> B`.
    pub left: GroupoidFunctor,
    /// Right leg `s : X -> A`.
    pub right: GroupoidFunctor,
    pub sys_a: Arc<LocalSystem>,
    pub sys_b: Arc<LocalSystem>,
    /// One matrix per object of `X`.
    pub decoration: Vec<ExactMatrix>,
}

impl std::fmt::Debug for DecoratedSpan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "DecoratedSpan(apex {} objects, {} <- . -> {})",
            self.left.source.object_count(),
            self.left.target.object_count(),
            self.right.target.object_count()
        )
    }
}

impl DecoratedSpan {
    pub fn new(
        left: GroupoidFunctor,
        right: GroupoidFunctor,
        sys_a: Arc<LocalSystem>,
        sys_b: Arc<LocalSystem>,
        decoration: Vec<ExactMatrix>,
    ) -> Result<Self, SpanError> {
        if !Arc::ptr_eq(&left.source, &right.source) {
            return Err(SpanError::Mismatch("span legs must share their apex".into()));
        }
        if !Arc::ptr_eq(&sys_a.base, &right.target) || !Arc::ptr_eq(&sys_b.base, &left.target) {
            return Err(SpanError::Mismatch("local systems must live on the feet".into()));
        }
        let apex = &left.source;
        if decoration.len() != apex.object_count() {
            return Err(SpanError::Mismatch("one decoration matrix per apex object".into()));
        }
        for x in 0..apex.object_count() {
            let m = &decoration[x];
            if m.nrows() != sys_b.dims[left.obj_map[x]] || m.ncols() != sys_a.dims[right.obj_map[x]] {
                return Err(SpanError::Mismatch(format!("decoration at object {} has the wrong shape", x)));
            }
        }
        for u in 0..apex.morphism_count() {
            let (x, x2) = (apex.src(u), apex.tgt(u));
            let lhs = decoration[x2].matmul(&sys_a.matrices[right.mor_map[u]]);
            let rhs = sys_b.matrices[left.mor_map[u]].matmul(&decoration[x]);
            if lhs != rhs {
                return Err(SpanError::Naturality { morphism: u });
            }
        }
        Ok(DecoratedSpan { left, right, sys_a, sys_b, decoration })
    }

    /// The identity span on `(A, L_A)`.
    pub fn identity(sys: Arc<LocalSystem>) -> Self {
        let base = Arc::clone(&sys.base);
        let id = GroupoidFunctor::identity(base);
        let decoration = sys.dims.iter().map(|&d| ExactMatrix::identity(d)).collect();
        DecoratedSpan {
            left: id.clone(),
            right: id,
            sys_a: Arc::clone(&sys),
            sys_b: sys,
            decoration,
        }
    }

    /// Source and target feet as `(A, B)` object counts, for diagnostics.
    pub fn feet(&self) -> (usize, usize) {
        (self.right.target.object_count(), self.left.target.object_count())
    }
}

/// Linearize a decorated span to a matrix `colim L_A -> colim L_B`.
pub fn linearize(span: &DecoratedSpan) -> ExactMatrix {
    let co_a = colim(&span.sys_a);
    let co_b = colim(&span.sys_b);
    linearize_with(span, &co_a, &co_b)
}

/// Linearization against precomputed colimits (they must belong to the
/// span's feet systems).
pub fn linearize_with(span: &DecoratedSpan, co_a: &Colimit, co_b: &Colimit) -> ExactMatrix {
    let comps_a = span.sys_a.base.components();
    let mut out = ExactMatrix::zeros(co_b.total_dim, co_a.total_dim);
    for (k, comp) in comps_a.iter().enumerate() {
        let a = comp.basepoint;
        let d_a = span.sys_a.dims[a];
        let mut phi = ExactMatrix::zeros(co_b.total_dim, d_a);
        for fc in fiber_components(&span.right, a) {
            let term = co_b.iota[span.left.obj_map[fc.x]]
                .matmul(&span.decoration[fc.x])
                .matmul(&span.sys_a.matrices[fc.path]);
            let w = Cyclotomic::from_rational(fc.cardinality());
            phi = phi.add(&term.scale(&w));
        }
        let block = phi.matmul(&co_a.blocks[k].lift);
        for i in 0..block.nrows() {
            for j in 0..block.ncols() {
                out[(i, co_a.offsets[k] + j)] = block[(i, j)].clone();
            }
        }
    }
    out
}

/// The limit-version linearization `lim L_A -> lim L_B` (fiber of the left
/// leg.)
pub fn linearize_lim(span: &DecoratedSpan) -> ExactMatrix {
    let li_a = lim(&span.sys_a);
    let li_b = lim(&span.sys_b);
    let comps_b = span.sys_b.base.components();
    let mut out = ExactMatrix::zeros(li_b.total_dim, li_a.total_dim);
    for (k, comp) in comps_b.iter().enumerate() {
        let b = comp.basepoint;
        let d_b = span.sys_b.dims[b];
        let mut phi = ExactMatrix::zeros(d_b, li_a.total_dim);
        for fc in fiber_components(&span.left, b) {
            // fc.path : b -> t(x); the formula wants L_B along t(x) -> b
            let back = span.sys_b.base.inverse_of(fc.path);
            let term = span.sys_b.matrices[back]
                .matmul(&span.decoration[fc.x])
                .matmul(&li_a.proj[span.right.obj_map[fc.x]]);
            let w = Cyclotomic::from_rational(fc.cardinality());
            phi = phi.add(&term.scale(&w));
        }
        // express the invariant-valued map in block coordinates
        let coords = li_b.blocks[k]
            .solve(&phi)
            .expect("limit linearization lands in the invariants");
        for i in 0..coords.nrows() {
            for j in 0..coords.ncols() {
                out[(li_b.offsets[k] + i, j)] = coords[(i, j)].clone();
            }
        }
    }
    out
}

/// Pullback composite of decorated spans: `second` after `first`
/// (`first: A -> B`, `second: B -> C`).
pub fn compose(second: &DecoratedSpan, first: &DecoratedSpan) -> Result<DecoratedSpan, SpanError> {
    if !Arc::ptr_eq(&first.left.target, &second.right.target) {
        return Err(SpanError::Mismatch("middle groupoids differ".into()));
    }
    if !Arc::ptr_eq(&first.sys_b, &second.sys_a)
        && (first.sys_b.dims != second.sys_a.dims || first.sys_b.matrices != second.sys_a.matrices)
    {
        return Err(SpanError::Mismatch("middle local systems differ".into()));
    }
    let pb = crate::groupoid::homotopy_pullback(&first.left, &second.right);
    let sys_mid = &first.sys_b;
    let decoration: Vec<ExactMatrix> = pb
        .objects
        .iter()
        .map(|&(x, y, gamma)| {
            second.decoration[y]
                .matmul(&sys_mid.matrices[gamma])
                .matmul(&first.decoration[x])
        })
        .collect();
    let left = second.left.compose(&pb.proj_right);
    let right = first.right.compose(&pb.proj_left);
    DecoratedSpan::new(left, right, Arc::clone(&first.sys_a), Arc::clone(&second.sys_b), decoration)
}

/// Tensor (external product) of decorated spans on cartesian products.
pub fn tensor(s1: &DecoratedSpan, s2: &DecoratedSpan) -> DecoratedSpan {
    let apex = Arc::new(FinGroupoid::product(
        Arc::clone(&s1.left.source),
        Arc::clone(&s2.left.source),
    ));
    let a = Arc::new(FinGroupoid::product(
        Arc::clone(&s1.right.target),
        Arc::clone(&s2.right.target),
    ));
    let b = Arc::new(FinGroupoid::product(
        Arc::clone(&s1.left.target),
        Arc::clone(&s2.left.target),
    ));
    let sys_a = Arc::new(LocalSystem::tensor(&s1.sys_a, &s2.sys_a, Arc::clone(&a)));
    let sys_b = Arc::new(LocalSystem::tensor(&s1.sys_b, &s2.sys_b, Arc::clone(&b)));
    let left = product_functor(&s1.left, &s2.left, Arc::clone(&apex), b);
    let right = product_functor(&s1.right, &s2.right, apex, a);
    let o2 = s2.left.source.object_count();
    let decoration = (0..left.source.object_count())
        .map(|x| s1.decoration[x / o2].kronecker(&s2.decoration[x % o2]))
        .collect();
    DecoratedSpan { left, right, sys_a, sys_b, decoration }
}

/// Product of functors on cartesian product groupoids built with matching
/// index conventions.
pub fn product_functor(
    f1: &GroupoidFunctor,
    f2: &GroupoidFunctor,
    source: Arc<FinGroupoid>,
    target: Arc<FinGroupoid>,
) -> GroupoidFunctor {
    let so2 = f2.source.object_count();
    let sm2 = f2.source.morphism_count();
    let to2 = f2.target.object_count();
    let tm2 = f2.target.morphism_count();
    let obj_map = (0..source.object_count())
        .map(|x| f1.obj_map[x / so2] * to2 + f2.obj_map[x % so2])
        .collect();
    let mor_map = (0..source.morphism_count())
        .map(|m| f1.mor_map[m / sm2] * tm2 + f2.mor_map[m % sm2])
        .collect();
    GroupoidFunctor { source, target, obj_map, mor_map }
}

/// A span `pt <- X -> pt` with trivial one-dimensional systems; linearizes to
/// the total homotopy cardinality.
pub fn point_span(x: Arc<FinGroupoid>) -> DecoratedSpan {
    let to_pt_l = GroupoidFunctor::to_point(Arc::clone(&x));
    let pt_l = Arc::clone(&to_pt_l.target);
    let to_pt_r = GroupoidFunctor::to_point(x);
    // share one point groupoid on both feet
    let right = GroupoidFunctor {
        source: Arc::clone(&to_pt_r.source),
        target: Arc::clone(&pt_l),
        obj_map: to_pt_r.obj_map.clone(),
        mor_map: to_pt_r.mor_map.clone(),
    };
    let sys = Arc::new(LocalSystem::trivial(pt_l, 1));
    let decoration = (0..right.source.object_count()).map(|_| ExactMatrix::identity(1)).collect();
    DecoratedSpan {
        left: to_pt_l,
        right,
        sys_a: Arc::clone(&sys),
        sys_b: sys,
        decoration,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::FinGroup;
    use crate::scalar::rational;

    fn bg(g: &FinGroup) -> Arc<FinGroupoid> {
        Arc::new(FinGroupoid::bg(g))
    }

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_integer(n)
    }

    fn sign_rep_z2() -> Arc<LocalSystem> {
        let b = bg(&FinGroup::cyclic(2));
        Arc::new(
            LocalSystem::from_representation(
                Arc::clone(&b),
                vec![ExactMatrix::identity(1), ExactMatrix::from_rows(vec![vec![c(-1)]])],
            )
            .unwrap(),
        )
    }

    fn regular_rep(g: &FinGroup) -> Arc<LocalSystem> {
        let b = bg(g);
        let n = g.order();
        let mats = (0..n)
            .map(|x| {
                ExactMatrix::from_fn(n, n, |i, j| if g.mul(x, j) == i { c(1) } else { c(0) })
            })
            .collect();
        Arc::new(LocalSystem::from_representation(b, mats).unwrap())
    }

    #[test]
    fn colim_of_trivial_system_on_bg() {
        let sys = LocalSystem::trivial(bg(&FinGroup::symmetric(3)), 1);
        let co = colim(&sys);
        assert_eq!(co.total_dim, 1);
    }

    #[test]
    fn colim_of_sign_rep_vanishes() {
        let co = colim(&sign_rep_z2());
        assert_eq!(co.total_dim, 0);
        let li = lim(&sign_rep_z2());
        assert_eq!(li.total_dim, 0);
        // norm map on empty blocks is the empty matrix
        let n = norm_map(&sign_rep_z2());
        assert_eq!(n[0].nrows(), 0);
    }

    #[test]
    fn colim_of_regular_rep_is_one_dimensional() {
        let s3 = FinGroup::symmetric(3);
        let sys = regular_rep(&s3);
        let co = colim(&sys);
        assert_eq!(co.total_dim, 1);
        // oracle: rank of the averaging projector is 1
        let mut avg = ExactMatrix::zeros(6, 6);
        for m in &sys.matrices {
            avg = avg.add(m);
        }
        assert_eq!(avg.rank(), 1);
    }

    #[test]
    fn norm_on_trivial_system_is_group_order() {
        for n in [2u64, 3, 5] {
            let sys = LocalSystem::trivial(bg(&FinGroup::cyclic(n as usize)), 1);
            let norms = norm_map(&sys);
            assert_eq!(norms.len(), 1);
            assert_eq!(norms[0][(0, 0)], Cyclotomic::from_integer(n as i64));
        }
    }

    #[test]
    fn norm_on_regular_rep_of_z3() {
        // the norm sends the class of an invariant vector v to 3v;
        // checked basis-independently through the canonical maps
        let sys = regular_rep(&FinGroup::cyclic(3));
        let norms = norm_map(&sys);
        assert_eq!((norms[0].nrows(), norms[0].ncols()), (1, 1));
        let co = colim(&sys);
        let li = lim(&sys);
        let v = ExactMatrix::column(vec![c(1), c(1), c(1)]);
        let class_v = co.iota[0].matmul(&v);
        let image = norms[0].matmul(&class_v);
        let expected = li.blocks[0].solve(&v.scale(&c(3))).unwrap();
        assert_eq!(image, expected);
        assert_eq!(norms[0].rank(), 1);
    }

    #[test]
    fn identity_span_linearizes_to_identity() {
        let sys = regular_rep(&FinGroup::symmetric(3));
        let span = DecoratedSpan::identity(Arc::clone(&sys));
        assert!(linearize(&span).is_identity());
    }

    #[test]
    fn point_span_gives_total_cardinality() {
        let g = FinGroup::cyclic(4);
        let span = point_span(bg(&g));
        let m = linearize(&span);
        assert_eq!(m[(0, 0)], Cyclotomic::from_rational(rational(1, 4)));

        let two = Arc::new(FinGroupoid::discrete(2));
        let m = linearize(&point_span(two));
        assert_eq!(m[(0, 0)], c(2));
    }

    #[test]
    fn composition_theorem_through_bg() {
        // (pt <- pt -> BG) then (BG <- pt -> pt): composite pt <- G -> pt
        let g = FinGroup::symmetric(3);
        let bgg = bg(&g);
        let pt = Arc::new(FinGroupoid::point());
        let triv_pt = Arc::new(LocalSystem::trivial(Arc::clone(&pt), 1));
        let triv_bg = Arc::new(LocalSystem::trivial(Arc::clone(&bgg), 1));
        let incl = GroupoidFunctor::from_group_hom(Arc::clone(&pt), Arc::clone(&bgg), &[g.identity()]).unwrap();
        // s1 : pt -> BG with apex pt: t = incl... feet: A = pt, B = BG
        let s1 = DecoratedSpan::new(
            incl.clone(),
            GroupoidFunctor::identity(Arc::clone(&pt)),
            Arc::clone(&triv_pt),
            Arc::clone(&triv_bg),
            vec![ExactMatrix::identity(1)],
        )
        .unwrap();
        // s2 : BG -> pt with apex pt
        let s2 = DecoratedSpan::new(
            GroupoidFunctor::identity(Arc::clone(&pt)),
            incl,
            Arc::clone(&triv_bg),
            Arc::clone(&triv_pt),
            vec![ExactMatrix::identity(1)],
        )
        .unwrap();
        let comp = compose(&s2, &s1).unwrap();
        // composite apex is the discrete set G
        assert_eq!(comp.left.source.object_count(), 6);
        let phi = linearize(&comp);
        assert_eq!(phi[(0, 0)], c(6));
        let lhs = linearize(&s2).matmul(&linearize(&s1));
        assert_eq!(phi, lhs);
    }

    #[test]
    fn compose_with_identity_preserves_linearization() {
        let sys = regular_rep(&FinGroup::cyclic(3));
        let id_span = DecoratedSpan::identity(Arc::clone(&sys));
        let span = DecoratedSpan::identity(Arc::clone(&sys));
        let comp = compose(&id_span, &span).unwrap();
        assert_eq!(linearize(&comp), linearize(&span));
    }

    #[test]
    fn tensor_of_point_spans_multiplies_cardinalities() {
        let s1 = point_span(bg(&FinGroup::cyclic(2)));
        let s2 = point_span(bg(&FinGroup::cyclic(3)));
        let t = tensor(&s1, &s2);
        let m = linearize(&t);
        assert_eq!(m[(0, 0)], Cyclotomic::from_rational(rational(1, 6)));
    }

    #[test]
    fn tensor_linearization_is_kronecker() {
        // two independent identity spans on small systems with nontrivial colim
        let sys1 = Arc::new(LocalSystem::trivial(Arc::new(FinGroupoid::discrete(2)), 1));
        let sys2 = Arc::new(LocalSystem::trivial(Arc::new(FinGroupoid::discrete(3)), 1));
        let s1 = DecoratedSpan::identity(sys1);
        let s2 = DecoratedSpan::identity(sys2);
        let t = tensor(&s1, &s2);
        let m = linearize(&t);
        assert_eq!((m.nrows(), m.ncols()), (6, 6));
        assert_eq!(m, linearize(&s1).kronecker(&linearize(&s2)));
    }

    #[test]
    fn norm_conjugates_colim_and_lim_linearizations() {
        // span BZ3 <- BZ3 -> BZ3 (identity legs) with the regular rep
        let sys = regular_rep(&FinGroup::cyclic(3));
        let span = DecoratedSpan::identity(Arc::clone(&sys));
        let phi_co = linearize(&span);
        let phi_li = linearize_lim(&span);
        let n = total_norm(&sys);
        assert_eq!(n.matmul(&phi_co), phi_li.matmul(&n));

        // a non-identity span: quotient hom B Z4 -> B Z2 as both legs
        let z4 = FinGroup::cyclic(4);
        let z2 = FinGroup::cyclic(2);
        let b4 = bg(&z4);
        let b2 = bg(&z2);
        let f = GroupoidFunctor::from_group_hom(Arc::clone(&b4), Arc::clone(&b2), &[0, 1, 0, 1]).unwrap();
        let sys2 = Arc::new(LocalSystem::trivial(Arc::clone(&b2), 1));
        let span = DecoratedSpan::new(
            f.clone(),
            f,
            Arc::clone(&sys2),
            sys2.clone(),
            vec![ExactMatrix::identity(1)],
        )
        .unwrap();
        let n2 = total_norm(&sys2);
        assert_eq!(n2.matmul(&linearize(&span)), linearize_lim(&span).matmul(&n2));
    }

    #[test]
    fn naturality_validation_rejects_bad_decorations() {
        let sys = sign_rep_z2();
        let base = Arc::clone(&sys.base);
        let id = GroupoidFunctor::identity(Arc::clone(&base));
        let triv = Arc::new(LocalSystem::trivial(base, 1));
        // a map sign -> trivial must vanish; the identity matrix is not natural
        let res = DecoratedSpan::new(
            id.clone(),
            id,
            Arc::clone(&sys),
            triv,
            vec![ExactMatrix::identity(1)],
        );
        assert!(matches!(res, Err(SpanError::Naturality { .. })));
    }

    #[test]
    fn linearization_invariant_under_span_isomorphism() {
        // precompose the legs of a point span with an equivalence
        let z2 = FinGroup::cyclic(2);
        let b = bg(&z2);
        let span = point_span(Arc::clone(&b));
        // X' = B Z2 again, but mapped through the nontrivial automorphism
        let auto = GroupoidFunctor::from_group_hom(Arc::clone(&b), Arc::clone(&b), &[0, 1]).unwrap();
        let left = span.left.compose(&auto);
        let right = GroupoidFunctor {
            source: Arc::clone(&auto.source),
            target: Arc::clone(&span.right.target),
            obj_map: span.right.obj_map.clone(),
            mor_map: vec![0, 0],
        };
        let iso_span = DecoratedSpan {
            left,
            right,
            sys_a: Arc::clone(&span.sys_a),
            sys_b: Arc::clone(&span.sys_b),
            decoration: span.decoration.clone(),
        };
        assert_eq!(linearize(&span), linearize(&iso_span));
    }
}
