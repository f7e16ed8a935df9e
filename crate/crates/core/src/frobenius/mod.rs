//! Finite-dimensional (super)algebras over the cyclotomic scalars:
//! semisimplicity via the regular trace form, Frobenius structures with
//! handle and window elements, central idempotents, and twisted group
//! algebras.

use crate::fingroup::{Cocycle2, FinGroup};
use crate::scalar::{Cyclotomic, ExactMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("not an algebra: {0}")]
    Axiom(String),
    #[error("Frobenius form is degenerate (rank {rank} of {dim})")]
    DegenerateForm { rank: usize, dim: usize },
    #[error("operation requires a semisimple algebra (radical dimension {radical})")]
    NotSemisimple { radical: usize },
    #[error("invalid cocycle: {0}")]
    Cocycle(String),
    #[error("data out of range: {0}")]
    Encoding(String),
}

/// A finite-dimensional associative unital algebra with a `Z/2` grading on
/// its basis, given by structure constants `e_i e_j = sum_k c_{ij}^k e_k`.
#[derive(Clone)]
pub struct FdAlgebra {
    pub dim: usize,
    /// Odd flag per basis vector.
    pub odd: Vec<bool>,
    /// `structure[i][j]` is the coefficient vector of `e_i e_j`.
    pub structure: Vec<Vec<Vec<Cyclotomic>>>,
    pub unit: Vec<Cyclotomic>,
}

impl std::fmt::Debug for FdAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FdAlgebra(dim {})", self.dim)
    }
}

impl FdAlgebra {
    pub fn new(
        odd: Vec<bool>,
        structure: Vec<Vec<Vec<Cyclotomic>>>,
        unit: Vec<Cyclotomic>,
    ) -> Result<Self, AlgebraError> {
        let dim = odd.len();
        if structure.len() != dim
            || structure.iter().any(|row| row.len() != dim || row.iter().any(|v| v.len() != dim))
            || unit.len() != dim
        {
            return Err(AlgebraError::Encoding("structure constants must be dim^3".into()));
        }
        let alg = FdAlgebra { dim, odd, structure, unit };
        // grading respected
        for i in 0..dim {
            for j in 0..dim {
                let parity = alg.odd[i] ^ alg.odd[j];
                for (k, coeff) in alg.structure[i][j].iter().enumerate() {
                    if alg.odd[k] != parity && !coeff.is_zero() {
                        return Err(AlgebraError::Axiom(format!(
                            "product e_{} e_{} violates the grading at e_{}",
                            i, j, k
                        )));
                    }
                }
            }
        }
        // unit laws
        for i in 0..dim {
            let e_i = alg.basis_vec(i);
            if alg.mul_vec(&alg.unit, &e_i) != e_i || alg.mul_vec(&e_i, &alg.unit) != e_i {
                return Err(AlgebraError::Axiom(format!("unit law fails at basis vector {}", i)));
            }
        }
        // associativity on basis triples
        for i in 0..dim {
            for j in 0..dim {
                let ij = alg.structure[i][j].clone();
                for k in 0..dim {
                    let jk = &alg.structure[j][k];
                    let lhs = alg.mul_vec(&ij, &alg.basis_vec(k));
                    let rhs = alg.mul_vec(&alg.basis_vec(i), jk);
                    if lhs != rhs {
                        return Err(AlgebraError::Axiom(format!(
                            "associativity fails at ({}, {}, {})",
                            i, j, k
                        )));
                    }
                }
            }
        }
        Ok(alg)
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Cyclotomic> {
        let mut v = vec![Cyclotomic::zero(); self.dim];
        v[i] = Cyclotomic::one();
        v
    }

    /// Product of two coefficient vectors.
    pub fn mul_vec(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let mut out = vec![Cyclotomic::zero(); self.dim];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.structure[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = &out[k] + &(&xy * c);
                    }
                }
            }
        }
        out
    }

    pub fn left_mul_matrix(&self, a: &[Cyclotomic]) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul_vec(a, &self.basis_vec(j));
            for i in 0..self.dim {
                m[(i, j)] = col[i].clone();
            }
        }
        m
    }

    pub fn right_mul_matrix(&self, a: &[Cyclotomic]) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul_vec(&self.basis_vec(j), a);
            for i in 0..self.dim {
                m[(i, j)] = col[i].clone();
            }
        }
        m
    }

    /// Trace form `T_{ij} = tr(L_{e_i} L_{e_j})` of the left regular
    /// representation.
    pub fn trace_form(&self) -> ExactMatrix {
        let mats: Vec<ExactMatrix> = (0..self.dim).map(|i| self.left_mul_matrix(&self.basis_vec(i))).collect();
        ExactMatrix::from_fn(self.dim, self.dim, |i, j| {
            let mut t = Cyclotomic::zero();
            for k in 0..self.dim {
                for l in 0..self.dim {
                    let a = &mats[i][(k, l)];
                    if a.is_zero() {
                        continue;
                    }
                    let b = &mats[j][(l, k)];
                    if !b.is_zero() {
                        t = &t + &(a * b);
                    }
                }
            }
            t
        })
    }

    /// Semisimplicity over characteristic zero: the trace form of the
    /// regular representation is non-degenerate. Returns the verdict and the
    /// radical dimension (the kernel of the form).
    pub fn is_semisimple(&self) -> (bool, usize) {
        let t = self.trace_form();
        let radical = t.kernel().ncols();
        (radical == 0, radical)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (i..self.dim).all(|j| self.structure[i][j] == self.structure[j][i]))
    }

    /// Super-commutativity on the graded basis:
    /// `e_i e_j = (-1)^{|i||j|} e_j e_i`.
    pub fn is_super_commutative(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let sign = self.odd[i] && self.odd[j];
                let rhs: Vec<Cyclotomic> = self.structure[j][i]
                    .iter()
                    .map(|c| if sign { -c.clone() } else { c.clone() })
                    .collect();
                self.structure[i][j] == rhs
            })
        })
    }

    /// The (untwisted) group algebra `k[G]`.
    pub fn group_algebra(g: &FinGroup) -> Self {
        Self::twisted_group_algebra(&Cocycle2::trivial(g.clone())).expect("trivial cocycle is valid")
    }

    /// The twisted group algebra `u_g u_h = c(g, h) u_{gh}`; associativity is
    /// equivalent to the cocycle identity, which is validated first.
    pub fn twisted_group_algebra(c: &Cocycle2) -> Result<Self, AlgebraError> {
        let check = c.validate();
        if !check.is_valid() {
            return Err(AlgebraError::Cocycle(format!("{:?}", check)));
        }
        let g = &c.group;
        let n = g.order();
        let mut structure = vec![vec![vec![Cyclotomic::zero(); n]; n]; n];
        for a in 0..n {
            for b in 0..n {
                structure[a][b][g.mul(a, b)] = c.value(a, b);
            }
        }
        let mut unit = vec![Cyclotomic::zero(); n];
        unit[g.identity()] = Cyclotomic::one();
        FdAlgebra::new(vec![false; n], structure, unit)
    }

    /// The center, with the inclusion matrix of the chosen basis
    /// (columns are central elements in the parent basis). The parent must be
    /// purely even.
    pub fn center(&self) -> (FdAlgebra, ExactMatrix) {
        assert!(self.odd.iter().all(|&o| !o), "center extraction expects an even algebra");
        let mut stacked = ExactMatrix::zeros(0, self.dim);
        for i in 0..self.dim {
            let l = self.left_mul_matrix(&self.basis_vec(i));
            let r = self.right_mul_matrix(&self.basis_vec(i));
            stacked = stacked.vstack(&l.sub(&r));
        }
        let basis = stacked.kernel();
        self.subalgebra_on(basis)
    }

    /// Restrict the product to the span of the given basis columns (which
    /// must be closed under multiplication and contain the unit).
    pub fn subalgebra_on(&self, basis: ExactMatrix) -> (FdAlgebra, ExactMatrix) {
        self.unital_span_on(basis, self.unit.clone())
    }

    /// A corner/ideal algebra `eAe`: the span of the basis columns with the
    /// stated unit (e.g. the idempotent cutting the corner).
    pub fn unital_span_on(&self, basis: ExactMatrix, unit_elem: Vec<Cyclotomic>) -> (FdAlgebra, ExactMatrix) {
        let m = basis.ncols();
        let mut structure = vec![vec![vec![Cyclotomic::zero(); m]; m]; m];
        for a in 0..m {
            let va = basis.col_vec(a);
            for b in 0..m {
                let vb = basis.col_vec(b);
                let prod = self.mul_vec(&va, &vb);
                let coords = basis
                    .solve(&ExactMatrix::column(prod))
                    .expect("span closed under multiplication");
                for k in 0..m {
                    structure[a][b][k] = coords[(k, 0)].clone();
                }
            }
        }
        let unit_coords = basis
            .solve(&ExactMatrix::column(unit_elem))
            .expect("the unit element lies in the span");
        let unit = (0..m).map(|k| unit_coords[(k, 0)].clone()).collect();
        let alg = FdAlgebra::new(vec![false; m], structure, unit)
            .expect("restriction of an associative product");
        (alg, basis)
    }

    /// Complete list of orthogonal central idempotents summing to 1, for a
    /// semisimple commutative algebra.
    ///
    /// Invariant subspaces are split by exact eigenspace extraction of the
    /// commuting left-multiplication operators, with deterministic pivoting.
    /// Eigenvalue search is complete for rational eigenvalues and for
    /// rational multiples of roots of unity at the conductors present in the
    /// operator entries; blocks that resist splitting are simple summands
    /// over the coefficient field as given. The returned idempotents are
    /// verified exactly: `e_i e_j = delta e_i` and `sum e_i = 1`.
    pub fn central_idempotents(&self) -> Result<Vec<Vec<Cyclotomic>>, AlgebraError> {
        let (ss, radical) = self.is_semisimple();
        if !ss {
            return Err(AlgebraError::NotSemisimple { radical });
        }
        assert!(self.is_commutative(), "central idempotents of the full algebra need commutativity");
        // blocks are bases (columns) of invariant subspaces
        let mut blocks: Vec<ExactMatrix> = vec![ExactMatrix::identity(self.dim)];
        loop {
            let mut refined = false;
            'outer: for op_idx in 0..self.dim {
                let l = self.left_mul_matrix(&self.basis_vec(op_idx));
                let mut next: Vec<ExactMatrix> = vec![];
                let mut split_here = false;
                for block in &blocks {
                    if block.ncols() <= 1 {
                        next.push(block.clone());
                        continue;
                    }
                    // restriction R of L to the block: L * B = B * R
                    let lb = l.matmul(block);
                    let r = block.solve(&lb).expect("blocks are invariant");
                    match split_block(block, &r) {
                        Some(parts) => {
                            split_here = true;
                            next.extend(parts);
                        }
                        None => next.push(block.clone()),
                    }
                }
                if split_here {
                    blocks = next;
                    refined = true;
                    break 'outer;
                }
            }
            if !refined {
                break;
            }
        }
        // idempotents: coordinates of 1 in the direct sum of blocks
        let combined = blocks
            .iter()
            .fold(ExactMatrix::zeros(self.dim, 0), |acc, b| acc.hstack(b));
        let coords = combined
            .solve(&ExactMatrix::column(self.unit.clone()))
            .expect("blocks span the algebra");
        let mut idempotents = vec![];
        let mut offset = 0;
        for b in &blocks {
            let q = b.ncols();
            let mut e = vec![Cyclotomic::zero(); self.dim];
            for j in 0..q {
                let col = b.col_vec(j);
                for i in 0..self.dim {
                    e[i] = &e[i] + &(&coords[(offset + j, 0)] * &col[i]);
                }
            }
            offset += q;
            idempotents.push(e);
        }
        // exact verification
        let mut total = vec![Cyclotomic::zero(); self.dim];
        for e in &idempotents {
            for i in 0..self.dim {
                total[i] = &total[i] + &e[i];
            }
        }
        assert_eq!(total, self.unit, "idempotents must sum to the unit");
        for (i, a) in idempotents.iter().enumerate() {
            for (j, b) in idempotents.iter().enumerate() {
                let prod = self.mul_vec(a, b);
                let expect = if i == j { a.clone() } else { vec![Cyclotomic::zero(); self.dim] };
                assert_eq!(prod, expect, "idempotents must be orthogonal");
            }
        }
        Ok(idempotents)
    }

    /// For a super-commutative algebra: either the complete list of even
    /// one-dimensional summands (as orthogonal idempotents), or a witness of
    /// failure.
    pub fn even_trivial_decomposition(&self) -> Result<Vec<Vec<Cyclotomic>>, OddWitness> {
        assert!(self.is_super_commutative(), "decomposition expects a super-commutative algebra");
        if let Some(i) = self.odd.iter().position(|&o| o) {
            // any odd element squares to zero by super-commutativity
            let e = self.basis_vec(i);
            let sq = self.mul_vec(&e, &e);
            debug_assert!(sq.iter().all(|c| c.is_zero()));
            return Err(OddWitness { element: e });
        }
        let idems = self
            .central_idempotents()
            .map_err(|_| OddWitness { element: vec![Cyclotomic::zero(); self.dim] })?;
        if idems.len() != self.dim {
            return Err(OddWitness { element: vec![Cyclotomic::zero(); self.dim] });
        }
        Ok(idems)
    }

    /// Rebuild the algebra from a complete orthogonal idempotent splitting:
    /// the direct sum of the corner algebras `e_i A e_i`. Structure constants
    /// must reproduce the original exactly when the splitting is central.
    pub fn direct_sum_of(parts: &[FdAlgebra]) -> FdAlgebra {
        let dim: usize = parts.iter().map(|p| p.dim).sum();
        let mut structure = vec![vec![vec![Cyclotomic::zero(); dim]; dim]; dim];
        let mut unit = vec![Cyclotomic::zero(); dim];
        let mut odd = vec![];
        let mut offset = 0;
        for p in parts {
            for i in 0..p.dim {
                unit[offset + i] = p.unit[i].clone();
                for j in 0..p.dim {
                    for k in 0..p.dim {
                        structure[offset + i][offset + j][offset + k] = p.structure[i][j][k].clone();
                    }
                }
            }
            odd.extend(p.odd.iter().copied());
            offset += p.dim;
        }
        FdAlgebra::new(odd, structure, unit).expect("direct sums of algebras are algebras")
    }
}

/// A nonzero odd nilpotent produced when an even decomposition fails.
#[derive(Clone, Debug)]
pub struct OddWitness {
    pub element: Vec<Cyclotomic>,
}

/// Split an invariant block by an eigenvalue of the restricted operator `r`;
/// `None` if no eigenvalue from the candidate set properly splits it.
fn split_block(block: &ExactMatrix, r: &ExactMatrix) -> Option<Vec<ExactMatrix>> {
    let q = r.ncols();
    for lambda in eigenvalue_candidates(r) {
        let shifted = r.sub(&ExactMatrix::identity(q).scale(&lambda));
        let kernel = shifted.kernel();
        let k = kernel.ncols();
        if k == 0 || k == q {
            continue;
        }
        // complement: image of the shifted operator (semisimple restriction
        // means kernel and image split the block)
        let (reduced, pivots) = shifted.rref();
        let _ = reduced;
        let mut image_cols = ExactMatrix::zeros(q, pivots.len());
        for (idx, &p) in pivots.iter().enumerate() {
            for i in 0..q {
                image_cols[(i, idx)] = shifted[(i, p)].clone();
            }
        }
        if image_cols.ncols() + k != q {
            continue;
        }
        let eigen = block.matmul(&kernel);
        let complement = block.matmul(&image_cols);
        return Some(vec![eigen, complement]);
    }
    None
}

/// Candidate eigenvalues of an exact matrix: rational roots of the
/// characteristic polynomial (complete, by the rational root theorem) and
/// root-of-unity multiples at the conductors present in the entries.
fn eigenvalue_candidates(r: &ExactMatrix) -> Vec<Cyclotomic> {
    let poly = char_poly(r);
    let mut out: Vec<Cyclotomic> = vec![];
    let mut conductors: Vec<u64> = vec![1];
    for i in 0..r.nrows() {
        for j in 0..r.ncols() {
            let c = r[(i, j)].conductor();
            if !conductors.contains(&c) {
                conductors.push(c);
            }
        }
    }
    for root in rational_root_candidates(&poly) {
        for &n in &conductors {
            for k in 0..n {
                let cand = Cyclotomic::root_of_unity(n, k as i64)
                    .unwrap()
                    .scale(&root);
                if poly_eval_is_zero(&poly, &cand) && !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
    }
    out
}

/// Characteristic polynomial by the Faddeev-LeVerrier recurrence
/// (coefficients ascending).
fn char_poly(r: &ExactMatrix) -> Vec<Cyclotomic> {
    let n = r.ncols();
    let mut coeffs = vec![Cyclotomic::zero(); n + 1];
    coeffs[n] = Cyclotomic::one();
    let mut m = ExactMatrix::zeros(n, n);
    let mut c = Cyclotomic::one();
    for k in 1..=n {
        // M_k = R (M_{k-1} + c_{k-1} I)
        let shifted = m.add(&ExactMatrix::identity(n).scale(&c));
        m = r.matmul(&shifted);
        let mut tr = Cyclotomic::zero();
        for i in 0..n {
            tr = &tr + &m[(i, i)];
        }
        let factor = Cyclotomic::from_rational(BigRational::new(BigInt::from(-1), BigInt::from(k as i64)));
        c = &tr * &factor;
        coeffs[n - k] = c.clone();
    }
    coeffs
}

fn poly_eval_is_zero(poly: &[Cyclotomic], x: &Cyclotomic) -> bool {
    let mut acc = Cyclotomic::zero();
    for c in poly.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc.is_zero()
}

/// Rational root candidates `p/q` of a polynomial with rational
/// coefficients, scaled to an integer polynomial: `p` divides the constant
/// term, `q` the leading coefficient. Division is by trial up to a cap; the
/// cap only ever under-splits, never mis-splits.
fn rational_root_candidates(poly: &[Cyclotomic]) -> Vec<BigRational> {
    let rats: Option<Vec<BigRational>> = poly.iter().map(|c| c.as_rational()).collect();
    let Some(rats) = rats else {
        // non-rational coefficients: fall back to small integer candidates
        return (-12..=12).map(|k| BigRational::from(BigInt::from(k))).collect();
    };
    // clear denominators
    let denom_lcm = rats
        .iter()
        .fold(BigInt::one(), |acc, q| num_integer::lcm(acc, q.denom().clone()));
    let ints: Vec<BigInt> = rats.iter().map(|q| q.numer() * (&denom_lcm / q.denom())).collect();
    let lead = ints.iter().rev().find(|c| !c.is_zero()).cloned().unwrap_or_else(BigInt::one);
    let constant = ints.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(BigInt::zero);
    let mut out = vec![BigRational::zero()];
    for p in divisors_capped(&constant.abs(), 1_000_000) {
        for q in divisors_capped(&lead.abs(), 1_000) {
            for sign in [1i64, -1] {
                out.push(BigRational::new(&p * BigInt::from(sign), q.clone()));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn divisors_capped(n: &BigInt, cap: u64) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut out = vec![];
    let mut d = BigInt::one();
    let cap = BigInt::from(cap);
    while &d * &d <= *n && d <= cap {
        if (n % &d).is_zero() {
            out.push(d.clone());
            out.push(n / &d);
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

/// An algebra with a Frobenius form `(a, b) -> eps(a b)` certified
/// non-degenerate.
#[derive(Clone, Debug)]
pub struct FrobeniusAlgebra {
    pub algebra: FdAlgebra,
    pub counit: Vec<Cyclotomic>,
    /// Gram matrix `B_{ij} = eps(e_i e_j)` and its inverse.
    pub form: ExactMatrix,
    form_inv: ExactMatrix,
}

impl FrobeniusAlgebra {
    pub fn new(algebra: FdAlgebra, counit: Vec<Cyclotomic>) -> Result<Self, AlgebraError> {
        if counit.len() != algebra.dim {
            return Err(AlgebraError::Encoding("counit must be a dual vector".into()));
        }
        let form = ExactMatrix::from_fn(algebra.dim, algebra.dim, |i, j| {
            eval_dual(&counit, &algebra.structure[i][j])
        });
        let form_inv = form.inverse().map_err(|_| AlgebraError::DegenerateForm {
            rank: form.rank(),
            dim: algebra.dim,
        })?;
        Ok(FrobeniusAlgebra { algebra, counit, form, form_inv })
    }

    pub fn counit_of(&self, a: &[Cyclotomic]) -> Cyclotomic {
        eval_dual(&self.counit, a)
    }

    /// The handle element `h = m(Delta(1)) = sum_i e_i f_i` with `{f_i}` the
    /// right dual basis of the form.
    pub fn handle_element(&self) -> Vec<Cyclotomic> {
        let dim = self.algebra.dim;
        let mut h = vec![Cyclotomic::zero(); dim];
        for i in 0..dim {
            // f_i = sum_k (B^{-1})_{k i} e_k
            let f_i: Vec<Cyclotomic> = (0..dim).map(|k| self.form_inv[(k, i)].clone()).collect();
            let prod = self.algebra.mul_vec(&self.algebra.basis_vec(i), &f_i);
            for k in 0..dim {
                h[k] = &h[k] + &prod[k];
            }
        }
        h
    }

    /// The window map `m . Delta`, which is left multiplication by the
    /// handle element; invertible exactly when the algebra is semisimple.
    pub fn window_map(&self) -> ExactMatrix {
        self.algebra.left_mul_matrix(&self.handle_element())
    }

    pub fn window_invertible(&self) -> bool {
        self.window_map().rank() == self.algebra.dim
    }

    /// The closed-surface evaluator `genus -> eps(h^genus)`.
    pub fn genus_value(&self, genus: usize) -> Cyclotomic {
        let h = self.handle_element();
        let mut acc = self.algebra.unit.clone();
        for _ in 0..genus {
            acc = self.algebra.mul_vec(&acc, &h);
        }
        self.counit_of(&acc)
    }
}

fn eval_dual(dual: &[Cyclotomic], v: &[Cyclotomic]) -> Cyclotomic {
    let mut acc = Cyclotomic::zero();
    for (d, x) in dual.iter().zip(v) {
        if !d.is_zero() && !x.is_zero() {
            acc = &acc + &(d * x);
        }
    }
    acc
}

/// The Frobenius algebra `(Z(k[G]_c), eps(u_g) = delta_{g,e} / |G|)` used by
/// the surface partition functions: the center of the (possibly twisted)
/// group algebra with the gauge-theory normalization.
pub fn dw_center_frobenius(cocycle: &Cocycle2) -> Result<(FrobeniusAlgebra, ExactMatrix), AlgebraError> {
    let parent = FdAlgebra::twisted_group_algebra(cocycle)?;
    let (center, basis) = parent.center();
    let order = cocycle.group.order();
    let e = cocycle.group.identity();
    let inv_order = Cyclotomic::from_rational(BigRational::new(BigInt::one(), BigInt::from(order as i64)));
    let counit: Vec<Cyclotomic> = (0..center.dim)
        .map(|j| {
            let col = basis.col_vec(j);
            &col[e] * &inv_order
        })
        .collect();
    let frob = FrobeniusAlgebra::new(center, counit)?;
    Ok((frob, basis))
}

/// JSON form of an algebra per the external interface.
#[derive(Serialize, Deserialize)]
pub struct AlgebraJson {
    pub dim: usize,
    pub grading: Vec<u8>,
    pub structure: Vec<Vec<Vec<Cyclotomic>>>,
    pub unit: Vec<Cyclotomic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counit: Option<Vec<Cyclotomic>>,
}

impl FdAlgebra {
    pub fn from_json(json: &AlgebraJson) -> Result<Self, AlgebraError> {
        if json.grading.len() != json.dim {
            return Err(AlgebraError::Encoding("grading must cover the basis".into()));
        }
        FdAlgebra::new(
            json.grading.iter().map(|&g| g == 1).collect(),
            json.structure.clone(),
            json.unit.clone(),
        )
    }

    pub fn to_json(&self, counit: Option<Vec<Cyclotomic>>) -> AlgebraJson {
        AlgebraJson {
            dim: self.dim,
            grading: self.odd.iter().map(|&o| o as u8).collect(),
            structure: self.structure.clone(),
            unit: self.unit.clone(),
            counit,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::FgAbelian;
    use crate::scalar::rational;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_integer(n)
    }

    fn dual_numbers() -> FdAlgebra {
        // k[x]/x^2, basis {1, x}
        let z = || Cyclotomic::zero();
        let structure = vec![
            vec![vec![c(1), z()], vec![z(), c(1)]],
            vec![vec![z(), c(1)], vec![z(), z()]],
        ];
        FdAlgebra::new(vec![false, false], structure, vec![c(1), z()]).unwrap()
    }

    #[test]
    fn group_algebra_of_z3_is_semisimple() {
        let a = FdAlgebra::group_algebra(&FinGroup::cyclic(3));
        let (ss, rad) = a.is_semisimple();
        assert!(ss);
        assert_eq!(rad, 0);
    }

    #[test]
    fn dual_numbers_have_radical_dimension_one() {
        let a = dual_numbers();
        let (ss, rad) = a.is_semisimple();
        assert!(!ss);
        assert_eq!(rad, 1);
    }

    #[test]
    fn twisted_klein_algebra_is_semisimple_with_trivial_center() {
        let klein = FgAbelian::new(vec![2, 2]);
        let (coc, _) = Cocycle2::from_bilinear(&klein, 2, &[vec![0, 1], vec![0, 0]]);
        let a = FdAlgebra::twisted_group_algebra(&coc).unwrap();
        let (ss, _) = a.is_semisimple();
        assert!(ss); // oracle: exact rank of the 4x4 trace form
        let (center, _) = a.center();
        assert_eq!(center.dim, 1); // the algebra is 2x2 matrices
    }

    #[test]
    fn center_of_group_algebra_is_class_sums() {
        let s3 = FinGroup::symmetric(3);
        let a = FdAlgebra::group_algebra(&s3);
        let (center, _) = a.center();
        assert_eq!(center.dim, 3); // conjugacy class count oracle
        let zn = FdAlgebra::group_algebra(&FinGroup::cyclic(5));
        let (center, _) = zn.center();
        assert_eq!(center.dim, 5);
    }

    #[test]
    fn central_idempotents_of_kz2() {
        let a = FdAlgebra::group_algebra(&FinGroup::cyclic(2));
        let idems = a.central_idempotents().unwrap();
        assert_eq!(idems.len(), 2);
        // (1 +/- g)/2
        let half = rational(1, 2);
        let expected1 = vec![Cyclotomic::from_rational(half.clone()), Cyclotomic::from_rational(half.clone())];
        let expected2 = vec![Cyclotomic::from_rational(half.clone()), Cyclotomic::from_rational(-half)];
        assert!(idems.contains(&expected1));
        assert!(idems.contains(&expected2));
    }

    #[test]
    fn central_idempotents_of_center_of_s3() {
        let a = FdAlgebra::group_algebra(&FinGroup::symmetric(3));
        let (center, _) = a.center();
        let idems = center.central_idempotents().unwrap();
        assert_eq!(idems.len(), 3); // class-sum/character oracle
    }

    #[test]
    fn central_idempotents_of_diagonal_algebra() {
        let n = 4;
        let mut structure = vec![vec![vec![Cyclotomic::zero(); n]; n]; n];
        for i in 0..n {
            structure[i][i][i] = Cyclotomic::one();
        }
        let a = FdAlgebra::new(vec![false; n], structure, vec![Cyclotomic::one(); n]).unwrap();
        let idems = a.central_idempotents().unwrap();
        assert_eq!(idems.len(), 4);
        for e in &idems {
            assert_eq!(e.iter().filter(|x| !x.is_zero()).count(), 1);
        }
    }

    #[test]
    fn central_idempotents_reject_nilpotents() {
        match dual_numbers().central_idempotents() {
            Err(AlgebraError::NotSemisimple { radical: 1 }) => {}
            other => panic!("expected a semisimplicity error, got {:?}", other.map(|v| v.len())),
        }
    }

    #[test]
    fn idempotents_of_abelian_group_algebra_at_its_conductor() {
        // k[Z/3] with structure constants at conductor 1 splits over Q into
        // 2 summands; the root-of-unity candidates recover both eigenlines of
        // the shift operator once the coefficients live at conductor 3
        let a = FdAlgebra::group_algebra(&FinGroup::cyclic(3));
        let idems = a.central_idempotents().unwrap();
        assert_eq!(idems.len(), 2);
    }

    #[test]
    fn direct_sum_reconstruction() {
        let s3 = FinGroup::symmetric(3);
        let (center, _) = FdAlgebra::group_algebra(&s3).center();
        let idems = center.central_idempotents().unwrap();
        // split into corner algebras e_i A, then re-sum
        let parts: Vec<FdAlgebra> = idems
            .iter()
            .map(|e| {
                let le = center.left_mul_matrix(e);
                let (red, pivots) = le.rref();
                let _ = red;
                let mut basis = ExactMatrix::zeros(center.dim, pivots.len());
                for (k, &p) in pivots.iter().enumerate() {
                    let col = le.col_vec(p);
                    for i in 0..center.dim {
                        basis[(i, k)] = col[i].clone();
                    }
                }
                center.unital_span_on(basis, e.clone()).0
            })
            .collect();
        let summed = FdAlgebra::direct_sum_of(&parts);
        assert_eq!(summed.dim, center.dim);
        let (ss, _) = summed.is_semisimple();
        assert!(ss);
        // each part is one-dimensional here (commutative semisimple split)
        assert!(parts.iter().all(|p| p.dim == 1));
    }

    #[test]
    fn super_commutative_checks() {
        // k + k even is super-commutative; exterior algebra on one odd
        // generator is super-commutative with an odd nilpotent
        let two = {
            let mut structure = vec![vec![vec![Cyclotomic::zero(); 2]; 2]; 2];
            structure[0][0][0] = c(1);
            structure[1][1][1] = c(1);
            FdAlgebra::new(vec![false, false], structure, vec![c(1), c(1)]).unwrap()
        };
        assert!(two.is_super_commutative());
        assert_eq!(two.even_trivial_decomposition().unwrap().len(), 2);

        let exterior = {
            // basis {1, theta}, theta odd, theta^2 = 0
            let z = || Cyclotomic::zero();
            let structure = vec![
                vec![vec![c(1), z()], vec![z(), c(1)]],
                vec![vec![z(), c(1)], vec![z(), z()]],
            ];
            FdAlgebra::new(vec![false, true], structure, vec![c(1), z()]).unwrap()
        };
        assert!(exterior.is_super_commutative());
        let witness = exterior.even_trivial_decomposition().unwrap_err();
        let sq = exterior.mul_vec(&witness.element, &witness.element);
        assert!(sq.iter().all(|x| x.is_zero()));
        assert!(witness.element.iter().any(|x| !x.is_zero()));
    }

    #[test]
    fn frobenius_on_one_dimensional_algebra() {
        // A = k with eps(1) = lambda: h = 1/lambda, genus g value lambda^{1-g}
        let lambda = rational(3, 7);
        let a = FdAlgebra::new(
            vec![false],
            vec![vec![vec![c(1)]]],
            vec![c(1)],
        )
        .unwrap();
        let frob = FrobeniusAlgebra::new(a, vec![Cyclotomic::from_rational(lambda.clone())]).unwrap();
        let h = frob.handle_element();
        assert_eq!(h[0], Cyclotomic::from_rational(lambda.recip()));
        for g in 0..4usize {
            let expect = if g == 0 {
                Cyclotomic::from_rational(lambda.clone())
            } else {
                let mut acc = Cyclotomic::from_rational(lambda.clone());
                for _ in 0..g {
                    acc = &acc * &Cyclotomic::from_rational(lambda.recip());
                }
                acc
            };
            assert_eq!(frob.genus_value(g), expect, "genus {}", g);
        }
    }

    #[test]
    fn dw_frobenius_on_z2_counts_irreps() {
        let coc = Cocycle2::trivial(FinGroup::cyclic(2));
        let (frob, _) = dw_center_frobenius(&coc).unwrap();
        // eps(h) = number of irreducible representations = 2
        assert_eq!(frob.genus_value(1), c(2));
        // genus 0: eps(1) = 1/|G|
        assert_eq!(frob.genus_value(0), Cyclotomic::from_rational(rational(1, 2)));
        // oracle: Mednykh count |Hom(Z^2, Z/2)| / 2 = 2
    }

    #[test]
    fn window_invertibility_matches_semisimplicity() {
        // semisimple: k[Z/2] with the gauge normalization
        let (frob, _) = dw_center_frobenius(&Cocycle2::trivial(FinGroup::cyclic(2))).unwrap();
        assert!(frob.window_invertible());
        // non-semisimple: dual numbers with eps(a + bx) = b is Frobenius but
        // its window map is nilpotent
        let frob = FrobeniusAlgebra::new(dual_numbers(), vec![c(0), c(1)]).unwrap();
        assert!(!frob.window_invertible());
        let (ss, _) = frob.algebra.is_semisimple();
        assert!(!ss);
    }

    #[test]
    fn degenerate_form_is_rejected() {
        let res = FrobeniusAlgebra::new(dual_numbers(), vec![c(1), c(0)]);
        assert!(matches!(res, Err(AlgebraError::DegenerateForm { rank: 1, dim: 2 })));
    }

    #[test]
    fn trivial_cocycle_on_s3_center_dim() {
        let coc = Cocycle2::trivial(FinGroup::symmetric(3));
        let a = FdAlgebra::twisted_group_algebra(&coc).unwrap();
        let (center, _) = a.center();
        assert_eq!(center.dim, 3);
        let (ss, _) = center.is_semisimple();
        assert!(ss);
    }
}
