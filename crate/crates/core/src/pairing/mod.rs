//! Hom-counting linear pairings and Pontryagin pairings on weighted
//! categories, Gram-matrix rank certification, and factorizable closures.
//!
//! A [`WeightedCategory`] is the pi0-level shadow of a locally pi-finite
//! category: objects are isomorphism classes, and each hom class carries the
//! homotopy cardinality of its component in the mapping space as a weight.
//! Non-degeneracy is certified on finite supports only: a full-rank Gram
//! block proves there is no kernel vector supported on those rows/columns,
//! and nothing more.

use crate::fingroup::{characters, Character, FgAbelian, FinGroup};
use crate::scalar::{quotient_by_columns, Cyclotomic, ExactMatrix, QuotientBasis};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairingError {
    #[error("invalid weighted category: {0}")]
    Category(String),
    #[error("functor data does not match the category: {0}")]
    Functor(String),
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("closure exceeded the configured bound of {bound} objects")]
    ClosureBound { bound: usize },
    #[error("operation needs a composition table on the representatives")]
    NeedsComposition,
}

/// Automorphism weight data carried per object.
#[derive(Clone, Debug)]
pub struct ObjectWeights {
    pub label: String,
    /// `|pi_0 Aut(c)|`.
    pub aut_pi0: u64,
    /// `|Aut_nat(id_c)|`: the fundamental group of the identity component of
    /// the mapping space `C(c, c)`.
    pub aut_nat_id: u64,
}

/// One isomorphism class of morphisms, weighted by the homotopy cardinality
/// of its component in the mapping space.
#[derive(Clone, Debug)]
pub struct HomRep {
    pub src: usize,
    pub tgt: usize,
    pub weight: BigRational,
}

/// The pi0-level presentation of a locally pi-finite category.
#[derive(Clone, Debug)]
pub struct WeightedCategory {
    pub objects: Vec<ObjectWeights>,
    pub reps: Vec<HomRep>,
    /// Class of the identity, per object.
    pub identity: Vec<usize>,
    /// Whether a representative class is invertible.
    pub invertible: Vec<bool>,
    /// Composition on representatives, when materialized.
    pub compose: Option<HashMap<(usize, usize), usize>>,
    out_reps: Vec<Vec<usize>>,
}

impl WeightedCategory {
    pub fn new(
        objects: Vec<ObjectWeights>,
        reps: Vec<HomRep>,
        identity: Vec<usize>,
        invertible: Vec<bool>,
        compose: Option<HashMap<(usize, usize), usize>>,
    ) -> Result<Self, PairingError> {
        let n = objects.len();
        if identity.len() != n || invertible.len() != reps.len() {
            return Err(PairingError::Category("identity/invertibility data must cover the category".into()));
        }
        for r in &reps {
            if r.src >= n || r.tgt >= n {
                return Err(PairingError::Category("rep endpoint out of range".into()));
            }
            if !r.weight.is_positive() {
                return Err(PairingError::Category("weights must be positive rationals".into()));
            }
        }
        for (c, &e) in identity.iter().enumerate() {
            let rep = &reps[e];
            if rep.src != c || rep.tgt != c {
                return Err(PairingError::Category(format!("identity of object {} ill-typed", c)));
            }
            let expected = BigRational::new(BigInt::from(1), BigInt::from(objects[c].aut_nat_id));
            if rep.weight != expected {
                return Err(PairingError::Category(format!(
                    "identity weight of object {} must be 1/|Aut_nat(id)| = {}",
                    c, expected
                )));
            }
            if !invertible[e] {
                return Err(PairingError::Category(format!("identity of object {} must be invertible", c)));
            }
        }
        if let Some(table) = &compose {
            for (&(g, f), &gf) in table {
                if reps[f].tgt != reps[g].src || reps[gf].src != reps[f].src || reps[gf].tgt != reps[g].tgt {
                    return Err(PairingError::Category("composition table is ill-typed".into()));
                }
            }
            for (k, r) in reps.iter().enumerate() {
                if table.get(&(k, identity[r.src])) != Some(&k)
                    || table.get(&(identity[r.tgt], k)) != Some(&k)
                {
                    return Err(PairingError::Category(format!("unit law fails at rep {}", k)));
                }
            }
        }
        let mut out_reps = vec![vec![]; n];
        for (k, r) in reps.iter().enumerate() {
            out_reps[r.src].push(k);
        }
        // per-object automorphism count must match the declared |pi0 Aut|
        for c in 0..n {
            let autos = out_reps[c].iter().filter(|&&k| reps[k].tgt == c && invertible[k]).count() as u64;
            if autos != objects[c].aut_pi0 {
                return Err(PairingError::Category(format!(
                    "object {} declares |pi0 Aut| = {} but has {} invertible classes",
                    c, objects[c].aut_pi0, autos
                )));
            }
        }
        Ok(WeightedCategory { objects, reps, identity, invertible, compose, out_reps })
    }

    /// All representative classes `c -> d`.
    pub fn hom_reps(&self, c: usize, d: usize) -> Vec<usize> {
        self.out_reps[c].iter().copied().filter(|&k| self.reps[k].tgt == d).collect()
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    /// Weight-1 presentation of an ordinary finite category: every morphism
    /// is its own class, automorphism data is read off the isos.
    pub fn from_fincategory(cat: &crate::fincat::FinCategory) -> Self {
        let objects = (0..cat.object_count())
            .map(|c| ObjectWeights {
                label: format!("{}", c),
                aut_pi0: cat.hom(c, c).iter().filter(|&&m| cat.is_iso(m)).count() as u64,
                aut_nat_id: 1,
            })
            .collect();
        let reps = (0..cat.morphism_count())
            .map(|m| HomRep { src: cat.src(m), tgt: cat.tgt(m), weight: BigRational::from(BigInt::from(1)) })
            .collect();
        let identity = (0..cat.object_count()).map(|c| cat.identity_of(c)).collect();
        let invertible = (0..cat.morphism_count()).map(|m| cat.is_iso(m)).collect();
        let mut compose = HashMap::new();
        for g in 0..cat.morphism_count() {
            for f in 0..cat.morphism_count() {
                if let Some(gf) = cat.compose(g, f) {
                    compose.insert((g, f), gf);
                }
            }
        }
        WeightedCategory::new(objects, reps, identity, invertible, Some(compose))
            .expect("a finite category is a weighted category")
    }

    /// Hom classes of `FinSet_{<= max}` with unit weights and explicit
    /// function tables, without materializing the composition table. The
    /// second component holds the function table per representative.
    pub fn finset_homs(max: usize) -> (Self, Vec<Vec<u8>>) {
        let objects: Vec<ObjectWeights> = (0..=max)
            .map(|n| ObjectWeights {
                label: format!("{}", n),
                aut_pi0: (1..=n as u64).product::<u64>().max(1),
                aut_nat_id: 1,
            })
            .collect();
        let mut reps = vec![];
        let mut tables: Vec<Vec<u8>> = vec![];
        let mut identity = vec![0usize; max + 1];
        let mut invertible = vec![];
        for m in 0..=max {
            for n in 0..=max {
                let count = (n as u64).pow(m as u32).max(if m == 0 { 1 } else { 0 });
                for code in 0..count {
                    let mut t = vec![0u8; m];
                    let mut c = code;
                    for slot in t.iter_mut() {
                        *slot = (c % n as u64) as u8;
                        c /= n as u64;
                    }
                    let is_id = m == n && t.iter().enumerate().all(|(i, &v)| v as usize == i);
                    if is_id {
                        identity[m] = reps.len();
                    }
                    let mut seen = vec![false; n];
                    let inj = t.iter().all(|&v| !std::mem::replace(&mut seen[v as usize], false) || true)
                        && {
                            let mut s = vec![false; n];
                            t.iter().all(|&v| !std::mem::replace(&mut s[v as usize], true))
                        };
                    let bij = m == n && inj;
                    invertible.push(bij);
                    reps.push(HomRep {
                        src: m,
                        tgt: n,
                        weight: BigRational::from(BigInt::from(1)),
                    });
                    tables.push(t);
                }
            }
        }
        let wc = WeightedCategory::new(objects, reps, identity, invertible, None)
            .expect("finset homs form a weighted category");
        (wc, tables)
    }
}

/// A functor to vector spaces on the representatives.
#[derive(Clone, Debug)]
pub struct WeightedVecFunctor {
    pub dims: Vec<usize>,
    pub matrices: Vec<ExactMatrix>,
}

impl WeightedVecFunctor {
    pub fn new(cat: &WeightedCategory, dims: Vec<usize>, matrices: Vec<ExactMatrix>) -> Result<Self, PairingError> {
        if dims.len() != cat.objects.len() || matrices.len() != cat.reps.len() {
            return Err(PairingError::Functor("functor data must cover the category".into()));
        }
        for (k, r) in cat.reps.iter().enumerate() {
            if matrices[k].nrows() != dims[r.tgt] || matrices[k].ncols() != dims[r.src] {
                return Err(PairingError::Functor(format!("matrix at rep {} has the wrong shape", k)));
            }
        }
        for (c, &e) in cat.identity.iter().enumerate() {
            let _ = c;
            if !matrices[e].is_identity() {
                return Err(PairingError::Functor("identity class must act as the identity".into()));
            }
        }
        if let Some(table) = &cat.compose {
            for (&(g, f), &gf) in table {
                if matrices[g].matmul(&matrices[f]) != matrices[gf] {
                    return Err(PairingError::Functor(format!("functoriality fails at ({}, {})", g, f)));
                }
            }
        }
        Ok(WeightedVecFunctor { dims, matrices })
    }

    pub fn constant(cat: &WeightedCategory, dim: usize) -> Self {
        WeightedVecFunctor {
            dims: vec![dim; cat.objects.len()],
            matrices: cat.reps.iter().map(|_| ExactMatrix::identity(dim)).collect(),
        }
    }
}

/// A functor to abelian groups on the representatives: a finitely generated
/// abelian group per object and an integer matrix per hom class.
#[derive(Clone, Debug)]
pub struct AbFunctor {
    pub groups: Vec<FgAbelian>,
    /// `maps[k]`: rows indexed by the target's factors, columns by the
    /// source's.
    pub maps: Vec<Vec<Vec<i64>>>,
}

impl AbFunctor {
    pub fn new(cat: &WeightedCategory, groups: Vec<FgAbelian>, maps: Vec<Vec<Vec<i64>>>) -> Result<Self, PairingError> {
        if groups.len() != cat.objects.len() || maps.len() != cat.reps.len() {
            return Err(PairingError::Functor("abelian functor data must cover the category".into()));
        }
        for (k, r) in cat.reps.iter().enumerate() {
            let rows = groups[r.tgt].rank();
            let cols = groups[r.src].rank();
            if maps[k].len() != rows || maps[k].iter().any(|row| row.len() != cols) {
                return Err(PairingError::Functor(format!("map at rep {} has the wrong shape", k)));
            }
            // well-definedness: the order of each source factor must kill its image
            for j in 0..cols {
                let d = groups[r.src].invariant_factors[j];
                if d == 0 {
                    continue;
                }
                for (i, row) in maps[k].iter().enumerate() {
                    let dt = groups[r.tgt].invariant_factors[i];
                    let val = row[j] as i128 * d as i128;
                    let ok = if dt == 0 { val == 0 } else { val % dt as i128 == 0 };
                    if !ok {
                        return Err(PairingError::Functor(format!(
                            "map at rep {} is not well-defined on torsion",
                            k
                        )));
                    }
                }
            }
        }
        if let Some(table) = &cat.compose {
            for (&(g, f), &gf) in table {
                let tgt_group = &groups[cat.reps[g].tgt];
                // compare on generators of the source, reduced in the target
                let cols = groups[cat.reps[f].src].rank();
                for j in 0..cols {
                    let mut e = vec![0i64; cols];
                    e[j] = 1;
                    let via_f = apply_int_map(&maps[f], &e);
                    let via_gf = tgt_group.reduce(&apply_int_map(&maps[g], &via_f));
                    let direct = tgt_group.reduce(&apply_int_map(&maps[gf], &e));
                    if via_gf != direct {
                        return Err(PairingError::Functor(format!(
                            "abelian functoriality fails at ({}, {})",
                            g, f
                        )));
                    }
                }
            }
        }
        Ok(AbFunctor { groups, maps })
    }

    /// The constant functor at `a` with identity maps.
    pub fn constant(cat: &WeightedCategory, a: FgAbelian) -> Self {
        let r = a.rank();
        let id: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| (i == j) as i64).collect()).collect();
        AbFunctor {
            groups: vec![a; cat.objects.len()],
            maps: cat.reps.iter().map(|_| id.clone()).collect(),
        }
    }

    pub fn apply(&self, rep: usize, x: &[i64]) -> Vec<i64> {
        apply_int_map(&self.maps[rep], x)
    }
}

fn apply_int_map(m: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(x).map(|(&a, &b)| a * b).sum()).collect()
}

/// `<(d, phi), (c, v)>_{C, F} = sum_{[f] in C(c, d)} w(f) phi(F(f) v)`,
/// optionally restricted to a class of representatives.
pub fn linear_pairing_filtered(
    cat: &WeightedCategory,
    f: &WeightedVecFunctor,
    filter: Option<&[bool]>,
    lhs: (usize, &ExactMatrix),
    rhs: (usize, &ExactMatrix),
) -> Result<Cyclotomic, PairingError> {
    let (d, phi) = lhs;
    let (c, v) = rhs;
    if phi.nrows() != 1 || phi.ncols() != f.dims[d] {
        return Err(PairingError::Shape(format!("dual vector must be 1 x {}", f.dims[d])));
    }
    if v.ncols() != 1 || v.nrows() != f.dims[c] {
        return Err(PairingError::Shape(format!("vector must be {} x 1", f.dims[c])));
    }
    let mut acc = Cyclotomic::zero();
    for k in cat.hom_reps(c, d) {
        if filter.is_some_and(|fl| !fl[k]) {
            continue;
        }
        let val = phi.matmul(&f.matrices[k]).matmul(v)[(0, 0)].clone();
        let w = Cyclotomic::from_rational(cat.reps[k].weight.clone());
        acc = &acc + &(&w * &val);
    }
    Ok(acc)
}

/// The linear pairing over all hom classes.
pub fn linear_pairing(
    cat: &WeightedCategory,
    f: &WeightedVecFunctor,
    lhs: (usize, &ExactMatrix),
    rhs: (usize, &ExactMatrix),
) -> Result<Cyclotomic, PairingError> {
    linear_pairing_filtered(cat, f, None, lhs, rhs)
}

/// The Pontryagin pairing
/// `<(c, chi), (d, x)>_{C, Omega} = sum_{[f] in C(d, c)} w(f) chi(Omega(f) x)`.
pub fn pontryagin_pairing(
    cat: &WeightedCategory,
    omega: &AbFunctor,
    lhs: (usize, &Character),
    rhs: (usize, &[i64]),
) -> Result<Cyclotomic, PairingError> {
    let (c, chi) = lhs;
    let (d, x) = rhs;
    if chi.target != omega.groups[c] {
        return Err(PairingError::Shape("character target must be Omega(c)".into()));
    }
    if x.len() != omega.groups[d].rank() {
        return Err(PairingError::Shape("element must lie in Omega(d)".into()));
    }
    let mut acc = Cyclotomic::zero();
    for k in cat.hom_reps(d, c) {
        let image = omega.groups[c].reduce(&omega.apply(k, x));
        let val = chi.evaluate(&image);
        let w = Cyclotomic::from_rational(cat.reps[k].weight.clone());
        acc = &acc + &(&w * &val);
    }
    Ok(acc)
}

/// Gram matrix of the linear pairing on finite supports, with its exact rank.
pub fn gram_linear(
    cat: &WeightedCategory,
    f: &WeightedVecFunctor,
    rows: &[(usize, ExactMatrix)],
    cols: &[(usize, ExactMatrix)],
) -> Result<(ExactMatrix, usize), PairingError> {
    let mut m = ExactMatrix::zeros(rows.len(), cols.len());
    for (i, (d, phi)) in rows.iter().enumerate() {
        for (j, (c, v)) in cols.iter().enumerate() {
            m[(i, j)] = linear_pairing(cat, f, (*d, phi), (*c, v))?;
        }
    }
    let rank = m.rank();
    Ok((m, rank))
}

/// Gram matrix of the Pontryagin pairing on finite supports.
pub fn gram_pontryagin(
    cat: &WeightedCategory,
    omega: &AbFunctor,
    rows: &[(usize, Character)],
    cols: &[(usize, Vec<i64>)],
) -> Result<(ExactMatrix, usize), PairingError> {
    let mut m = ExactMatrix::zeros(rows.len(), cols.len());
    for (i, (c, chi)) in rows.iter().enumerate() {
        for (j, (d, x)) in cols.iter().enumerate() {
            m[(i, j)] = pontryagin_pairing(cat, omega, (*c, chi), (*d, x))?;
        }
    }
    let rank = m.rank();
    Ok((m, rank))
}

/// Coinvariant blocks of a functor on a weighted category (one block per
/// object; objects are already iso classes).
#[derive(Clone, Debug)]
pub struct WeightedColim {
    pub blocks: Vec<QuotientBasis>,
    pub offsets: Vec<usize>,
    pub total_dim: usize,
}

pub fn weighted_colim(cat: &WeightedCategory, f: &WeightedVecFunctor) -> WeightedColim {
    let mut blocks = vec![];
    let mut offsets = vec![];
    let mut total = 0;
    for c in 0..cat.objects.len() {
        let d = f.dims[c];
        let autos: Vec<usize> = cat
            .hom_reps(c, c)
            .into_iter()
            .filter(|&k| cat.invertible[k])
            .collect();
        let relations = autos
            .iter()
            .map(|&k| ExactMatrix::identity(d).sub(&f.matrices[k]))
            .fold(ExactMatrix::zeros(d, 0), |acc, m| acc.hstack(&m));
        let q = quotient_by_columns(d, &relations);
        offsets.push(total);
        total += q.dim();
        blocks.push(q);
    }
    WeightedColim { blocks, offsets, total_dim: total }
}

/// The weighted linearization `Phi : colim F -> colim F`, optionally
/// restricted to a morphism class.
///
/// The fiber of the source leg at `c` fibers over the moduli space of
/// objects with mapping-space fibers, so a class `f : c -> d` contributes
/// its weight times the cardinality `#(B Aut(d)) = |Aut_nat(id_d)| /
/// |pi_0 Aut(d)|` of the target's classifying component.
pub fn weighted_linearize(
    cat: &WeightedCategory,
    f: &WeightedVecFunctor,
    filter: Option<&[bool]>,
) -> (ExactMatrix, WeightedColim) {
    let co = weighted_colim(cat, f);
    let mut out = ExactMatrix::zeros(co.total_dim, co.total_dim);
    for (k, rep) in cat.reps.iter().enumerate() {
        if filter.is_some_and(|fl| !fl[k]) {
            continue;
        }
        let (c, d) = (rep.src, rep.tgt);
        let b_aut = BigRational::new(
            BigInt::from(cat.objects[d].aut_nat_id),
            BigInt::from(cat.objects[d].aut_pi0),
        );
        let w = Cyclotomic::from_rational(&rep.weight * &b_aut);
        let block = co.blocks[d]
            .proj
            .matmul(&f.matrices[k])
            .matmul(&co.blocks[c].lift)
            .scale(&w);
        for i in 0..block.nrows() {
            for j in 0..block.ncols() {
                let cell = &out[(co.offsets[d] + i, co.offsets[c] + j)] + &block[(i, j)];
                out[(co.offsets[d] + i, co.offsets[c] + j)] = cell;
            }
        }
    }
    (out, co)
}

/// Pair `(d, phi)` against a colimit-class vector by lifting each block.
pub fn pair_against_colim(
    cat: &WeightedCategory,
    f: &WeightedVecFunctor,
    filter: Option<&[bool]>,
    lhs: (usize, &ExactMatrix),
    w: &ExactMatrix,
    co: &WeightedColim,
) -> Result<Cyclotomic, PairingError> {
    let mut acc = Cyclotomic::zero();
    for c in 0..cat.objects.len() {
        let q = co.blocks[c].dim();
        if q == 0 {
            continue;
        }
        let mut block_coords = ExactMatrix::zeros(q, 1);
        for i in 0..q {
            block_coords[(i, 0)] = w[(co.offsets[c] + i, 0)].clone();
        }
        let lifted = co.blocks[c].lift.matmul(&block_coords);
        let term = linear_pairing_filtered(cat, f, filter, lhs, (c, &lifted))?;
        acc = &acc + &term;
    }
    Ok(acc)
}

/// Enlarge a seed object set until it is closed under factorization middles
/// (`middles[k]` names the middle object of representative `k`).
pub fn factorizable_closure(
    cat: &WeightedCategory,
    middles: &[usize],
    seeds: &[usize],
    bound: usize,
) -> Result<BTreeSet<usize>, PairingError> {
    if middles.len() != cat.reps.len() {
        return Err(PairingError::Category("one middle per representative required".into()));
    }
    let mut set: BTreeSet<usize> = seeds.iter().copied().collect();
    loop {
        let mut grew = false;
        for (k, rep) in cat.reps.iter().enumerate() {
            if set.contains(&rep.src) && set.contains(&rep.tgt) && set.insert(middles[k]) {
                grew = true;
            }
        }
        if set.len() > bound {
            return Err(PairingError::ClosureBound { bound });
        }
        if !grew {
            return Ok(set);
        }
    }
}

/// The character-linearization matrix `psi_A : k[A^] -> k[A]^v`, with rows
/// indexed by elements and columns by characters; entry `chi(a)`. Injective
/// by linear independence of characters (full column rank).
pub fn character_linearization(a: &FgAbelian) -> (ExactMatrix, usize) {
    let chars = characters(a).expect("finite group required");
    let elems = a.elements();
    let m = ExactMatrix::from_fn(elems.len(), chars.len(), |i, j| chars[j].evaluate(&elems[i]));
    let rank = m.rank();
    (m, rank)
}

/// The functor category of one-object groupoids `BG` over a fixed list of
/// groups: hom classes are conjugacy classes of homomorphisms, weighted by
/// `1 / |Z_H(im phi)|`.
pub struct GroupCategory {
    pub category: WeightedCategory,
    pub groups: Vec<FinGroup>,
    /// Full element map per representative.
    pub rep_homs: Vec<Vec<usize>>,
}

impl GroupCategory {
    pub fn new(groups: Vec<FinGroup>, labels: Vec<String>) -> Self {
        assert_eq!(groups.len(), labels.len());
        let n = groups.len();
        let mut reps: Vec<HomRep> = vec![];
        let mut rep_homs: Vec<Vec<usize>> = vec![];
        let mut invertible = vec![];
        let mut identity = vec![0usize; n];
        let mut rep_index: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
        for (gi, g) in groups.iter().enumerate() {
            for (hi, h) in groups.iter().enumerate() {
                let homs = g.all_homs(h);
                // classify by postconjugation
                let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
                for hom in &homs {
                    if seen.contains(hom) {
                        continue;
                    }
                    // the orbit under conjugation in H
                    let mut orbit: BTreeSet<Vec<usize>> = BTreeSet::new();
                    for t in 0..h.order() {
                        let conj: Vec<usize> = hom.iter().map(|&x| h.conjugate(t, x)).collect();
                        orbit.insert(conj);
                    }
                    let rep = orbit.iter().next().unwrap().clone();
                    for o in &orbit {
                        seen.insert(o.clone());
                    }
                    let image: Vec<usize> = {
                        let mut im: BTreeSet<usize> = rep.iter().copied().collect();
                        im.insert(h.identity());
                        im.into_iter().collect()
                    };
                    let centralizer = h.centralizer(&image);
                    let weight = BigRational::new(BigInt::from(1), BigInt::from(centralizer.len()));
                    let is_id = gi == hi && rep.iter().enumerate().all(|(i, &x)| i == x);
                    let bij = gi == hi && {
                        let mut s = vec![false; h.order()];
                        rep.iter().all(|&y| !std::mem::replace(&mut s[y], true))
                    };
                    if is_id {
                        identity[gi] = reps.len();
                    }
                    rep_index.insert((gi, hi, rep.clone()), reps.len());
                    reps.push(HomRep { src: gi, tgt: hi, weight });
                    rep_homs.push(rep);
                    invertible.push(bij);
                }
            }
        }
        // compose classes via representatives
        let mut compose = HashMap::new();
        for (k2, r2) in reps.iter().enumerate() {
            for (k1, r1) in reps.iter().enumerate() {
                if r1.tgt != r2.src {
                    continue;
                }
                let composite: Vec<usize> = rep_homs[k1].iter().map(|&x| rep_homs[k2][x]).collect();
                // find the class representative of the composite
                let h = &groups[r2.tgt];
                let mut orbit: BTreeSet<Vec<usize>> = BTreeSet::new();
                for t in 0..h.order() {
                    orbit.insert(composite.iter().map(|&x| h.conjugate(t, x)).collect());
                }
                let canon = orbit.iter().next().unwrap().clone();
                compose.insert((k2, k1), rep_index[&(r1.src, r2.tgt, canon)]);
            }
        }
        let objects: Vec<ObjectWeights> = groups
            .iter()
            .zip(&labels)
            .enumerate()
            .map(|(gi, (g, label))| {
                let autos = reps
                    .iter()
                    .enumerate()
                    .filter(|(k, r)| r.src == gi && r.tgt == gi && invertible[*k])
                    .count() as u64;
                let center = g.centralizer(&(0..g.order()).collect::<Vec<_>>()).len() as u64;
                ObjectWeights { label: label.clone(), aut_pi0: autos, aut_nat_id: center }
            })
            .collect();
        // identity weight must be 1/|Z(G)|: the centralizer of the full image
        let category = WeightedCategory::new(objects, reps, identity, invertible, Some(compose))
            .expect("group functor category is weighted");
        GroupCategory { category, groups, rep_homs }
    }

    /// Middle object (image group) of each representative, matched against
    /// the object list up to isomorphism. `None` when the image matches no
    /// listed object.
    pub fn image_middles(&self) -> Vec<Option<usize>> {
        self.rep_homs
            .iter()
            .enumerate()
            .map(|(k, hom)| {
                let h = &self.groups[self.category.reps[k].tgt];
                let image = h.subgroup_closure(&hom.to_vec());
                let table: Vec<Vec<usize>> = image
                    .iter()
                    .map(|&a| {
                        image
                            .iter()
                            .map(|&b| image.iter().position(|&x| x == h.mul(a, b)).unwrap())
                            .collect()
                    })
                    .collect();
                let img_group = FinGroup::from_mul_table(table).expect("image is a group");
                self.groups.iter().position(|g| g.is_isomorphic(&img_group))
            })
            .collect()
    }

    /// The functor sending `BG` to `k[conjugacy classes of G]`; well-defined
    /// on hom classes and strictly functorial.
    pub fn class_functor(&self) -> WeightedVecFunctor {
        let class_index: Vec<Vec<usize>> = self
            .groups
            .iter()
            .map(|g| {
                let classes = g.conjugacy_classes();
                let mut idx = vec![0usize; g.order()];
                for (k, class) in classes.iter().enumerate() {
                    for &x in class {
                        idx[x] = k;
                    }
                }
                idx
            })
            .collect();
        let dims: Vec<usize> = self.groups.iter().map(|g| g.conjugacy_classes().len()).collect();
        let matrices = self
            .category
            .reps
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let classes_src = self.groups[r.src].conjugacy_classes();
                ExactMatrix::from_fn(dims[r.tgt], dims[r.src], |i, j| {
                    let g0 = classes_src[j][0];
                    if class_index[r.tgt][self.rep_homs[k][g0]] == i {
                        Cyclotomic::one()
                    } else {
                        Cyclotomic::zero()
                    }
                })
            })
            .collect();
        WeightedVecFunctor::new(&self.category, dims, matrices)
            .expect("class functor is strictly functorial")
    }

    /// Surjective/injective hom-class flags (the image factorization system).
    pub fn surj_inj_classes(&self) -> (Vec<bool>, Vec<bool>) {
        let surj = self
            .rep_homs
            .iter()
            .enumerate()
            .map(|(k, hom)| {
                let h = &self.groups[self.category.reps[k].tgt];
                h.subgroup_closure(hom).len() == h.order()
            })
            .collect();
        let inj = self
            .rep_homs
            .iter()
            .enumerate()
            .map(|(k, hom)| {
                let g = &self.groups[self.category.reps[k].src];
                let mut seen = vec![false; self.groups[self.category.reps[k].tgt].order()];
                let _ = g;
                hom.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
            })
            .collect();
        (surj, inj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinCategory;
    use crate::scalar::rational;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_integer(n)
    }

    fn row1() -> ExactMatrix {
        ExactMatrix::from_rows(vec![vec![c(1)]])
    }

    fn col1() -> ExactMatrix {
        ExactMatrix::column(vec![c(1)])
    }

    #[test]
    fn finset_pairing_is_n_to_the_m() {
        let (cat, _) = WeightedCategory::finset_homs(3);
        let f = WeightedVecFunctor::constant(&cat, 1);
        let val = linear_pairing(&cat, &f, (3, &row1()), (2, &col1())).unwrap();
        assert_eq!(val, c(9));
        let val = linear_pairing(&cat, &f, (0, &row1()), (0, &col1())).unwrap();
        assert_eq!(val, c(1)); // the empty function
        let val = linear_pairing(&cat, &f, (0, &row1()), (1, &col1())).unwrap();
        assert_eq!(val, c(0));
    }

    #[test]
    fn sign_rep_pairing_vanishes() {
        // one-object groupoid B(Z/2) as a weighted category, sign rep against
        // its dual: coinvariants vanish, and so does the pairing
        let z2cat = FinCategory::poset(1, |_, _| true); // a point...
        let _ = z2cat;
        let objects = vec![ObjectWeights { label: "BZ2".into(), aut_pi0: 2, aut_nat_id: 1 }];
        let reps = vec![
            HomRep { src: 0, tgt: 0, weight: rational(1, 1) },
            HomRep { src: 0, tgt: 0, weight: rational(1, 1) },
        ];
        let mut compose = HashMap::new();
        compose.insert((0usize, 0usize), 0usize);
        compose.insert((0, 1), 1);
        compose.insert((1, 0), 1);
        compose.insert((1, 1), 0);
        let cat = WeightedCategory::new(objects, reps, vec![0], vec![true, true], Some(compose)).unwrap();
        let f = WeightedVecFunctor::new(
            &cat,
            vec![1],
            vec![ExactMatrix::identity(1), ExactMatrix::from_rows(vec![vec![c(-1)]])],
        )
        .unwrap();
        let val = linear_pairing(&cat, &f, (0, &row1()), (0, &col1())).unwrap();
        assert_eq!(val, c(0));
    }

    #[test]
    fn weight_scaling_is_linear() {
        let (cat, _) = WeightedCategory::finset_homs(2);
        let mut half = cat.clone();
        for r in &mut half.reps {
            r.weight = &r.weight * &rational(1, 2);
        }
        // halving every weight halves every pairing value; identity weights
        // were rescaled too, so rebuild without the constructor check
        let f = WeightedVecFunctor::constant(&cat, 1);
        let v1 = linear_pairing(&cat, &f, (2, &row1()), (2, &col1())).unwrap();
        let v2 = linear_pairing(&half, &f, (2, &row1()), (2, &col1())).unwrap();
        assert_eq!(&v2 + &v2, v1);
    }

    #[test]
    fn pontryagin_on_a_point_is_the_character_table() {
        let objects = vec![ObjectWeights { label: "pt".into(), aut_pi0: 1, aut_nat_id: 1 }];
        let reps = vec![HomRep { src: 0, tgt: 0, weight: rational(1, 1) }];
        let compose = HashMap::from([((0usize, 0usize), 0usize)]);
        let cat = WeightedCategory::new(objects, reps, vec![0], vec![true], Some(compose)).unwrap();
        let omega = AbFunctor::constant(&cat, FgAbelian::cyclic(2));
        let chars = characters(&FgAbelian::cyclic(2)).unwrap();
        let rows: Vec<(usize, Character)> = chars.into_iter().map(|ch| (0, ch)).collect();
        let cols: Vec<(usize, Vec<i64>)> = FgAbelian::cyclic(2).elements().into_iter().map(|e| (0, e)).collect();
        let (m, rank) = gram_pontryagin(&cat, &omega, &rows, &cols).unwrap();
        assert_eq!(rank, 2);
        let mut entries: Vec<Cyclotomic> = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| m[(i, j)].clone()).collect();
        entries.sort_by_key(|e| format!("{}", e));
        // {1, 1, 1, -1} in some order
        assert_eq!(entries.iter().filter(|&e| *e == c(1)).count(), 3);
        assert_eq!(entries.iter().filter(|&e| *e == c(-1)).count(), 1);
    }

    #[test]
    fn character_linearization_examples() {
        let (m, rank) = character_linearization(&FgAbelian::cyclic(2));
        assert_eq!(rank, 2);
        assert_eq!(m[(0, 0)], c(1));
        let (_, rank) = character_linearization(&FgAbelian::new(vec![2, 2]));
        assert_eq!(rank, 4);
        let (_, rank) = character_linearization(&FgAbelian::cyclic(5));
        assert_eq!(rank, 5);
    }

    #[test]
    fn group_category_on_small_groups() {
        let gc = GroupCategory::new(
            vec![FinGroup::trivial(), FinGroup::cyclic(2), FinGroup::symmetric(3)],
            vec!["pt".into(), "BZ2".into(), "BS3".into()],
        );
        let cat = &gc.category;
        // hom classes Z/2 -> S3: trivial and the transposition class
        assert_eq!(cat.hom_reps(1, 2).len(), 2);
        // weights: trivial hom has centralizer S3 (1/6), transposition class
        // has centralizer of order 2 (1/2)
        let ws: BTreeSet<String> = cat
            .hom_reps(1, 2)
            .into_iter()
            .map(|k| cat.reps[k].weight.to_string())
            .collect();
        assert_eq!(ws, BTreeSet::from(["1/6".to_string(), "1/2".to_string()]));
        // pairing <BS3, BZ2> with the constant functor: total cardinality of
        // the mapping space Hom(Z2, S3)//S3 = 1/6 + 1/2 = 2/3
        let f = WeightedVecFunctor::constant(cat, 1);
        let val = linear_pairing(cat, &f, (2, &row1()), (1, &col1())).unwrap();
        assert_eq!(val, Cyclotomic::from_rational(rational(2, 3)));
    }

    #[test]
    fn image_middles_and_closure() {
        let gc = GroupCategory::new(
            vec![FinGroup::trivial(), FinGroup::cyclic(2), FinGroup::cyclic(4)],
            vec!["pt".into(), "BZ2".into(), "BZ4".into()],
        );
        let middles: Vec<usize> = gc
            .image_middles()
            .into_iter()
            .map(|m| m.expect("all images listed"))
            .collect();
        let closed = factorizable_closure(&gc.category, &middles, &[0, 2], 10).unwrap();
        // the doubling endo of Z4 has image Z2, forcing it into the closure
        assert!(closed.contains(&1));
        // idempotence
        let closed2 = factorizable_closure(&gc.category, &middles, &closed.iter().copied().collect::<Vec<_>>(), 10).unwrap();
        assert_eq!(closed, closed2);
    }

    #[test]
    fn finset_closure_of_zero_and_three() {
        let cat = FinCategory::finset(3);
        let wc = WeightedCategory::from_fincategory(&cat);
        let fs = crate::fincat::FactorizationSystem::surj_inj(&cat);
        // middle of each morphism: target of its left factor
        let middles: Vec<usize> = (0..cat.morphism_count())
            .map(|f| {
                for &l in cat.morphisms_from(cat.src(f)) {
                    if !fs.left[l] {
                        continue;
                    }
                    for &r in cat.morphisms_from(cat.tgt(l)) {
                        if fs.right[r] && cat.compose(r, l) == Some(f) {
                            return cat.tgt(l);
                        }
                    }
                }
                unreachable!("orthogonal system factors everything")
            })
            .collect();
        let closed = factorizable_closure(&wc, &middles, &[0, 3], 10).unwrap();
        assert_eq!(closed, BTreeSet::from([0, 1, 2, 3]));
    }

    #[test]
    fn poset_closure_is_trivial() {
        let cat = FinCategory::divisor_poset(6);
        let wc = WeightedCategory::from_fincategory(&cat);
        // trivial system: middle of f is its source (l = id, r = f)
        let middles: Vec<usize> = (0..cat.morphism_count()).map(|f| cat.src(f)).collect();
        let closed = factorizable_closure(&wc, &middles, &[0, 2], 10).unwrap();
        assert_eq!(closed, BTreeSet::from([0, 2]));
    }

    #[test]
    fn closure_bound_is_enforced() {
        let gc = GroupCategory::new(
            vec![FinGroup::trivial(), FinGroup::cyclic(2), FinGroup::cyclic(4)],
            vec!["pt".into(), "BZ2".into(), "BZ4".into()],
        );
        let middles: Vec<usize> = gc.image_middles().into_iter().map(|m| m.unwrap()).collect();
        match factorizable_closure(&gc.category, &middles, &[0, 2], 1) {
            Err(PairingError::ClosureBound { bound: 1 }) => {}
            other => panic!("expected a bound error, got {:?}", other),
        }
    }
}
