//! The generalized Dijkgraaf-Witten engine at desk scale: mapping groupoids
//! into `BG`, partition functions of closed manifolds (untwisted in any
//! dimension, 2-cocycle-twisted for surfaces), the circle algebra of a
//! two-dimensional theory, and separation of manifolds by invariant vectors.

use crate::fingroup::{Cocycle2, Character, FinGroup};
use crate::frobenius::{dw_center_frobenius, FdAlgebra, FrobeniusAlgebra};
use crate::groupoid::{FinGroupoid, GroupoidFunctor};
use crate::pairing::{
    pontryagin_pairing, AbFunctor, HomRep, ObjectWeights, PairingError, WeightedCategory,
};
use crate::scalar::{Cyclotomic, ExactMatrix};
use crate::span::{colim, linearize, DecoratedSpan, LocalSystem};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DwError {
    #[error("homomorphism enumeration needs |G|^n = {required} states, over the bound {bound}")]
    EnumerationBound { required: u128, bound: u128 },
    #[error("cocycle twists are only implemented for surfaces (dimension 2)")]
    TwistOutOfScope,
    #[error("invalid theory data: {0}")]
    Theory(String),
    #[error("object {0} is missing from the supplied weighted category")]
    MissingObject(String),
    #[error("transgressed local system failed functoriality: {0}")]
    Transgression(String),
    #[error(transparent)]
    Pairing(#[from] PairingError),
}

/// Default cap on the homomorphism search space `|G|^generators`.
pub const DEFAULT_HOM_BOUND: u128 = 50_000_000;

/// A closed manifold, described either as an orientable surface by genus or
/// by a presentation of its fundamental group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ManifoldDescription {
    Surface { genus: usize },
    Presentation { generators: usize, relators: Vec<Vec<i64>> },
}

impl ManifoldDescription {
    pub fn surface(genus: usize) -> Self {
        ManifoldDescription::Surface { genus }
    }

    /// Generator count and relator words of the fundamental group; a genus-g
    /// surface contributes `2g` generators and the single product of
    /// commutators.
    pub fn presentation(&self) -> (usize, Vec<Vec<i64>>) {
        match self {
            ManifoldDescription::Surface { genus } => {
                let g = *genus;
                let mut relator = vec![];
                for i in 0..g {
                    let a = (2 * i + 1) as i64;
                    let b = (2 * i + 2) as i64;
                    relator.extend_from_slice(&[a, b, -a, -b]);
                }
                (2 * g, if g == 0 { vec![] } else { vec![relator] })
            }
            ManifoldDescription::Presentation { generators, relators } => {
                (*generators, relators.clone())
            }
        }
    }

    pub fn validate(&self) -> Result<(), DwError> {
        let (n, relators) = self.presentation();
        for word in &relators {
            for &letter in word {
                if letter == 0 || letter.unsigned_abs() as usize > n {
                    return Err(DwError::Theory(format!(
                        "relator letter {} outside the {} generators",
                        letter, n
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        match self {
            ManifoldDescription::Surface { genus } => format!("surface genus {}", genus),
            ManifoldDescription::Presentation { generators, relators } => {
                format!("presented ({} generators, {} relators)", generators, relators.len())
            }
        }
    }
}

/// A gauge theory: a finite group with an optional 2-cocycle twist
/// (dimension 2 only).
#[derive(Clone, Debug)]
pub struct DwTheory {
    pub group: FinGroup,
    pub twist: Option<Cocycle2>,
}

impl DwTheory {
    pub fn untwisted(group: FinGroup) -> Self {
        DwTheory { group, twist: None }
    }

    pub fn twisted(cocycle: Cocycle2) -> Result<Self, DwError> {
        if !cocycle.validate().is_valid() {
            return Err(DwError::Theory("cocycle fails the 2-cocycle identity".into()));
        }
        Ok(DwTheory { group: cocycle.group.clone(), twist: Some(cocycle) })
    }

    fn cocycle(&self) -> Cocycle2 {
        self.twist.clone().unwrap_or_else(|| Cocycle2::trivial(self.group.clone()))
    }
}

/// Evaluate a word in generator images.
fn eval_word(g: &FinGroup, images: &[usize], word: &[i64]) -> usize {
    let mut acc = g.identity();
    for &letter in word {
        let idx = (letter.unsigned_abs() - 1) as usize;
        let x = if letter > 0 { images[idx] } else { g.inv(images[idx]) };
        acc = g.mul(acc, x);
    }
    acc
}

/// All homomorphisms `pi_1(M) -> G` as generator-image tuples, enumerated by
/// depth-first search with relator pruning at the leaves.
pub fn enumerate_homs(
    manifold: &ManifoldDescription,
    g: &FinGroup,
    bound: u128,
) -> Result<Vec<Vec<usize>>, DwError> {
    manifold.validate()?;
    let (n, relators) = manifold.presentation();
    let states = (g.order() as u128).pow(n as u32);
    if states > bound {
        return Err(DwError::EnumerationBound { required: states, bound });
    }
    let mut out = vec![];
    let mut images = vec![0usize; n];
    enumerate_rec(g, &relators, &mut images, 0, &mut out);
    Ok(out)
}

fn enumerate_rec(
    g: &FinGroup,
    relators: &[Vec<i64>],
    images: &mut Vec<usize>,
    k: usize,
    out: &mut Vec<Vec<usize>>,
) {
    if k == images.len() {
        if relators.iter().all(|w| eval_word(g, images, w) == g.identity()) {
            out.push(images.clone());
        }
        return;
    }
    for x in 0..g.order() {
        images[k] = x;
        enumerate_rec(g, relators, images, k + 1, out);
    }
}

/// The mapping groupoid `Map(M, BG) = Hom(pi_1 M, G) // G`: objects are
/// homomorphisms, morphisms simultaneous conjugations.
pub struct MappingGroupoidData {
    pub groupoid: FinGroupoid,
    pub homs: Vec<Vec<usize>>,
}

pub fn mapping_groupoid(
    manifold: &ManifoldDescription,
    g: &FinGroup,
    bound: u128,
) -> Result<MappingGroupoidData, DwError> {
    let homs = enumerate_homs(manifold, g, bound)?;
    let index: HashMap<Vec<usize>, usize> = homs.iter().cloned().zip(0..).collect();
    let action: Vec<Vec<usize>> = (0..g.order())
        .map(|t| {
            homs.iter()
                .map(|hom| {
                    let conj: Vec<usize> = hom.iter().map(|&x| g.conjugate(t, x)).collect();
                    index[&conj]
                })
                .collect()
        })
        .collect();
    let groupoid = FinGroupoid::action_groupoid(g, &action)
        .expect("conjugation action on homomorphisms");
    Ok(MappingGroupoidData { groupoid, homs })
}

/// `sum over conjugation orbits of 1 / |Z_G(image)|`, the finite path
/// integral of the constant 1 over the mapping groupoid, computed without
/// materializing the groupoid. The Burnside identity `|Hom| / |G|` is
/// asserted on every call.
fn groupoid_sum(manifold: &ManifoldDescription, g: &FinGroup, bound: u128) -> Result<BigRational, DwError> {
    let homs = enumerate_homs(manifold, g, bound)?;
    let index: HashMap<&[usize], usize> = homs.iter().map(|h| h.as_slice()).zip(0..).collect();
    let mut seen = vec![false; homs.len()];
    let mut total = BigRational::new(BigInt::from(0), BigInt::from(1));
    for start in 0..homs.len() {
        if seen[start] {
            continue;
        }
        for t in 0..g.order() {
            let conj: Vec<usize> = homs[start].iter().map(|&x| g.conjugate(t, x)).collect();
            seen[index[conj.as_slice()]] = true;
        }
        let mut image = homs[start].clone();
        image.push(g.identity());
        let stab = g.centralizer(&image).len();
        total += BigRational::new(BigInt::from(1), BigInt::from(stab));
    }
    let burnside = BigRational::new(BigInt::from(homs.len()), BigInt::from(g.order()));
    assert_eq!(total, burnside, "orbit-stabilizer must reproduce |Hom| / |G|");
    Ok(total)
}

/// The computed value together with the route that produced it.
#[derive(Clone, Debug)]
pub struct PartitionFunction {
    pub value: Cyclotomic,
    pub route: &'static str,
}

/// The Dijkgraaf-Witten partition function of a closed manifold.
///
/// Untwisted: the groupoid sum `sum_{[f]} #(Map(M, BG), f)`, which equals
/// `|Hom(pi_1 M, G)| / |G|`. Twisted (surfaces only): the genus evaluator
/// `eps(h^g)` of the center of the twisted group algebra; at genus 1 the
/// commuting-pair weight sum `(1/|G|) sum c(a,b)/c(b,a)` is asserted against
/// it.
pub fn partition_function(
    theory: &DwTheory,
    manifold: &ManifoldDescription,
    bound: u128,
) -> Result<PartitionFunction, DwError> {
    match &theory.twist {
        None => {
            let value = groupoid_sum(manifold, &theory.group, bound)?;
            Ok(PartitionFunction { value: Cyclotomic::from_rational(value), route: "groupoid_sum" })
        }
        Some(cocycle) => {
            let ManifoldDescription::Surface { genus } = manifold else {
                return Err(DwError::TwistOutOfScope);
            };
            let (frob, _) = dw_center_frobenius(cocycle)
                .map_err(|e| DwError::Theory(format!("twisted group algebra failed: {}", e)))?;
            let value = frob.genus_value(*genus);
            if *genus == 1 {
                let direct = twisted_torus_weight_sum(cocycle);
                assert_eq!(value, direct, "Frobenius route must match the commuting-pair sum");
            }
            Ok(PartitionFunction { value, route: "frobenius_genus" })
        }
    }
}

/// `(1/|G|) sum over commuting pairs of c(a, b) / c(b, a)`: the direct
/// weight formula for the twisted torus.
pub fn twisted_torus_weight_sum(cocycle: &Cocycle2) -> Cyclotomic {
    let g = &cocycle.group;
    let n = g.order();
    let mut acc = Cyclotomic::zero();
    for a in 0..n {
        for b in 0..n {
            if g.mul(a, b) != g.mul(b, a) {
                continue;
            }
            let num = cocycle.value(a, b);
            let den = cocycle.value(b, a).inv().expect("roots of unity are invertible");
            acc = &acc + &(&num * &den);
        }
    }
    let inv_order = Cyclotomic::from_rational(BigRational::new(BigInt::from(1), BigInt::from(n as i64)));
    &acc * &inv_order
}

/// The transgressed local system on the loop groupoid `G // G`: the
/// morphism `(h, g) : g -> h g h^{-1}` acts by
/// `tau(h, g) = c(h, g) c(h g h^{-1}, h)^{-1}`. Functoriality of the result
/// is machine-checked; a failure indicates a cocycle-convention bug.
pub fn transgressed_system(
    cocycle: &Cocycle2,
    loops: Arc<FinGroupoid>,
) -> Result<LocalSystem, DwError> {
    let g = &cocycle.group;
    let n = g.order();
    let matrices: Vec<ExactMatrix> = (0..loops.morphism_count())
        .map(|m| {
            let (h, x) = (m / n, m % n);
            let hxh = g.conjugate(h, x);
            let tau = &cocycle.value(h, x)
                * &cocycle.value(hxh, h).inv().expect("roots of unity are invertible");
            ExactMatrix::from_rows(vec![vec![tau]])
        })
        .collect();
    LocalSystem::new(loops, vec![1; n], matrices)
        .map_err(|e| DwError::Transgression(e.to_string()))
}

/// The circle algebra `DW(S^1)` of the two-dimensional theory, reported in
/// the transported class-sum basis of the center of the twisted group
/// algebra. The pair-of-pants span route is computed alongside and must
/// agree exactly with the center route.
pub struct SphereAlgebraReport {
    pub frobenius: FrobeniusAlgebra,
    /// Group elements representing the regular classes, in basis order.
    pub class_reps: Vec<usize>,
    pub dim: usize,
    pub semisimple: bool,
    pub radical: usize,
    pub window_invertible: bool,
}

pub fn sphere_algebra(theory: &DwTheory, dimension: usize) -> Result<SphereAlgebraReport, DwError> {
    if dimension != 2 {
        return Err(DwError::Theory("the loop-groupoid model covers dimension 2 only".into()));
    }
    let cocycle = theory.cocycle();
    let g = &theory.group;
    let n = g.order();
    let classes = g.conjugacy_classes();

    // --- center route, in the tau-transported class-sum basis ---
    let parent = FdAlgebra::twisted_group_algebra(&cocycle)
        .map_err(|e| DwError::Theory(e.to_string()))?;
    let tau = |h: usize, x: usize| -> Cyclotomic {
        &cocycle.value(h, x) * &cocycle.value(g.conjugate(h, x), h).inv().unwrap()
    };
    let mut class_reps = vec![];
    let mut basis_cols: Vec<Vec<Cyclotomic>> = vec![];
    for class in &classes {
        let rep = class[0];
        let centralizer = g.centralizer(&[rep]);
        // regularity: tau(., rep) restricted to the centralizer is trivial
        if !centralizer.iter().all(|&z| tau(z, rep) == Cyclotomic::one()) {
            continue;
        }
        let mut z = vec![Cyclotomic::zero(); n];
        let mut covered = vec![false; n];
        for h in 0..n {
            let w = g.conjugate(h, rep);
            if covered[w] {
                continue;
            }
            covered[w] = true;
            z[w] = tau(h, rep);
        }
        // machine check: z is central in the twisted algebra
        for t in 0..n {
            let u_t = parent.basis_vec(t);
            if parent.mul_vec(&u_t, &z) != parent.mul_vec(&z, &u_t) {
                return Err(DwError::Transgression(format!(
                    "transported class sum of {} is not central (conjugator {})",
                    rep, t
                )));
            }
        }
        class_reps.push(rep);
        basis_cols.push(z);
    }
    let basis = ExactMatrix::from_fn(n, basis_cols.len(), |i, j| basis_cols[j][i].clone());
    // dimension cross-check against the kernel-based center
    let (kernel_center, _) = parent.center();
    assert_eq!(
        kernel_center.dim,
        basis_cols.len(),
        "regular classes must span the center"
    );
    let (center, _) = parent.unital_span_on(basis, parent.unit.clone());

    // --- span route: pair of pants on the loop groupoid ---
    let loops = Arc::new(FinGroupoid::conjugation_groupoid(g));
    let tau_sys = Arc::new(transgressed_system(&cocycle, Arc::clone(&loops))?);
    let loops2 = Arc::new(FinGroupoid::product(Arc::clone(&loops), Arc::clone(&loops)));
    let tau2 = Arc::new(LocalSystem::tensor(&tau_sys, &tau_sys, Arc::clone(&loops2)));
    // apex: G acting on G x G by simultaneous conjugation
    let action: Vec<Vec<usize>> = (0..n)
        .map(|t| {
            (0..n * n)
                .map(|p| {
                    let (a, b) = (p / n, p % n);
                    g.conjugate(t, a) * n + g.conjugate(t, b)
                })
                .collect()
        })
        .collect();
    let apex = Arc::new(FinGroupoid::action_groupoid(g, &action).expect("conjugation action"));
    // legs: restriction to the two circles, and loop multiplication
    let right = GroupoidFunctor::new(
        Arc::clone(&apex),
        Arc::clone(&loops2),
        (0..n * n).collect(),
        (0..n * n * n)
            .map(|m| {
                let (t, p) = (m / (n * n), m % (n * n));
                let (a, b) = (p / n, p % n);
                (t * n + a) * (n * n) + (t * n + b)
            })
            .collect(),
    )
    .expect("restriction to the two boundary circles");
    let left = GroupoidFunctor::new(
        Arc::clone(&apex),
        Arc::clone(&loops),
        (0..n * n).map(|p| g.mul(p / n, p % n)).collect(),
        (0..n * n * n)
            .map(|m| {
                let (t, p) = (m / (n * n), m % (n * n));
                t * n + g.mul(p / n, p % n)
            })
            .collect(),
    )
    .expect("loop multiplication leg");
    let decoration: Vec<ExactMatrix> = (0..n * n)
        .map(|p| ExactMatrix::from_rows(vec![vec![cocycle.value(p / n, p % n)]]))
        .collect();
    let span = DecoratedSpan::new(left, right, Arc::clone(&tau2), Arc::clone(&tau_sys), decoration)
        .map_err(|e| DwError::Transgression(e.to_string()))?;
    let phi = linearize(&span);

    // --- compare the two routes ---
    // colim blocks of tau are indexed by regular classes in class order;
    // the span basis delta_C corresponds to |Z(C)| * z_C
    let co1 = colim(&tau_sys);
    let co2 = colim(&tau2);
    assert_eq!(co1.total_dim, center.dim);
    assert_eq!(co2.total_dim, center.dim * center.dim);
    let comps1 = loops.components();
    let comps2 = loops2.components();
    // map colim block index -> regular class position (or skip when empty)
    let mut block_to_class = vec![];
    for (k, comp) in comps1.iter().enumerate() {
        if co1.blocks[k].dim() == 1 {
            let pos = class_reps
                .iter()
                .position(|&r| comp.objects.contains(&r))
                .expect("nonzero blocks sit on regular classes");
            block_to_class.push(pos);
        }
    }
    let mut pair_to_classes = vec![];
    for (k, comp) in comps2.iter().enumerate() {
        if co2.blocks[k].dim() == 1 {
            let bp = comp.objects[0];
            let (a, b) = (bp / n, bp % n);
            let pa = class_reps.iter().position(|&r| classes.iter().find(|c| c.contains(&r)).unwrap().contains(&a));
            let pb = class_reps.iter().position(|&r| classes.iter().find(|c| c.contains(&r)).unwrap().contains(&b));
            pair_to_classes.push((
                pa.expect("pair block on regular class"),
                pb.expect("pair block on regular class"),
            ));
        }
    }
    let zc_order: Vec<usize> = class_reps.iter().map(|&r| g.centralizer(&[r]).len()).collect();
    for (col, &(ca, cb)) in pair_to_classes.iter().enumerate() {
        for (row, &cc) in block_to_class.iter().enumerate() {
            // span coefficient s and center structure constant t satisfy
            // t = s |Z_C| / (|Z_A| |Z_B|)
            let s = phi[(row, col)].clone();
            let t = center.structure[ca][cb][cc].clone();
            let scale = BigRational::new(
                BigInt::from(zc_order[cc] as i64),
                BigInt::from((zc_order[ca] * zc_order[cb]) as i64),
            );
            let expected = s.scale(&scale);
            if t != expected {
                return Err(DwError::Transgression(format!(
                    "span and center routes disagree at classes ({}, {}) -> {}",
                    ca, cb, cc
                )));
            }
        }
    }

    // --- package with the gauge-normalized Frobenius form ---
    let e = g.identity();
    let inv_order = Cyclotomic::from_rational(BigRational::new(BigInt::from(1), BigInt::from(n as i64)));
    let counit: Vec<Cyclotomic> = basis_cols.iter().map(|z| &z[e] * &inv_order).collect();
    let frobenius = FrobeniusAlgebra::new(center, counit)
        .map_err(|err| DwError::Theory(err.to_string()))?;
    let (semisimple, radical) = frobenius.algebra.is_semisimple();
    let window_invertible = frobenius.window_invertible();
    let dim = frobenius.algebra.dim;
    Ok(SphereAlgebraReport { frobenius, class_reps, dim, semisimple, radical, window_invertible })
}

/// User-supplied data for evaluating a Dijkgraaf-Witten invariant as a
/// Pontryagin pairing.
pub struct DwPairingInput {
    pub category: WeightedCategory,
    pub omega: AbFunctor,
    /// Object representing the 1-type of the manifold.
    pub m_object: usize,
    /// Object representing `BG`.
    pub bg_object: usize,
    /// The weight character on `Omega(bg_object)`.
    pub weight: Character,
    /// The fundamental class `[M]` in `Omega(m_object)`.
    pub fundamental_class: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct DwPairingReport {
    pub value: Cyclotomic,
    pub partition: Cyclotomic,
    /// Whether the pairing reproduced the partition function; meaningful
    /// when the weight data encodes the trivial character.
    pub matches_partition: bool,
}

/// Evaluate `<(BG, omega), (tau_{<=1} M, [M])>` over the supplied weighted
/// category; with trivial weight data this must equal the untwisted
/// partition function exactly.
pub fn dw_as_pairing(
    theory: &DwTheory,
    manifold: &ManifoldDescription,
    input: &DwPairingInput,
    bound: u128,
) -> Result<DwPairingReport, DwError> {
    if theory.twist.is_some() {
        return Err(DwError::Theory("the pairing route covers untwisted theories".into()));
    }
    let n_obj = input.category.object_count();
    if input.m_object >= n_obj {
        return Err(DwError::MissingObject(format!("manifold 1-type (index {})", input.m_object)));
    }
    if input.bg_object >= n_obj {
        return Err(DwError::MissingObject(format!("BG (index {})", input.bg_object)));
    }
    let value = pontryagin_pairing(
        &input.category,
        &input.omega,
        (input.bg_object, &input.weight),
        (input.m_object, input.fundamental_class.as_slice()),
    )?;
    let partition = partition_function(theory, manifold, bound)?.value;
    Ok(DwPairingReport { matches_partition: value == partition, value, partition })
}

/// Build the two-object weighted category `{tau_{<=1} M, BG}` whose hom
/// classes `M -> BG` come from the mapping groupoid: one class per
/// conjugation orbit of homomorphisms, weighted by the centralizer of the
/// image. Maps out of `BG` other than its identity are omitted (their
/// mapping spaces are not pi-finite for aspherical targets).
pub fn mapping_pairing_category(
    theory: &DwTheory,
    manifold: &ManifoldDescription,
    bound: u128,
) -> Result<(WeightedCategory, usize, usize), DwError> {
    let g = &theory.group;
    let homs = enumerate_homs(manifold, g, bound)?;
    let index: HashMap<&[usize], usize> = homs.iter().map(|h| h.as_slice()).zip(0..).collect();
    let mut seen = vec![false; homs.len()];
    let mut reps: Vec<HomRep> = vec![];
    // object 0: the manifold 1-type; object 1: BG
    let m_obj = 0usize;
    let bg_obj = 1usize;
    // identity classes first
    reps.push(HomRep { src: m_obj, tgt: m_obj, weight: BigRational::new(1.into(), 1.into()) });
    let center_order = g.centralizer(&(0..g.order()).collect::<Vec<_>>()).len();
    reps.push(HomRep {
        src: bg_obj,
        tgt: bg_obj,
        weight: BigRational::new(1.into(), BigInt::from(center_order)),
    });
    let mut invertible = vec![true, true];
    for start in 0..homs.len() {
        if seen[start] {
            continue;
        }
        for t in 0..g.order() {
            let conj: Vec<usize> = homs[start].iter().map(|&x| g.conjugate(t, x)).collect();
            seen[index[conj.as_slice()]] = true;
        }
        let mut image = homs[start].clone();
        image.push(g.identity());
        let stab = g.centralizer(&image).len();
        reps.push(HomRep {
            src: m_obj,
            tgt: bg_obj,
            weight: BigRational::new(1.into(), BigInt::from(stab)),
        });
        invertible.push(false);
    }
    let mut compose = HashMap::new();
    for (k, rep) in reps.iter().enumerate() {
        compose.insert((k, if rep.src == m_obj { 0 } else { 1 }), k);
        compose.insert((if rep.tgt == bg_obj { 1 } else { 0 }, k), k);
    }
    let objects = vec![
        ObjectWeights { label: manifold.label(), aut_pi0: 1, aut_nat_id: 1 },
        ObjectWeights { label: "BG".into(), aut_pi0: 1, aut_nat_id: center_order as u64 },
    ];
    let category = WeightedCategory::new(objects, reps, vec![0, 1], invertible, Some(compose))?;
    Ok((category, m_obj, bg_obj))
}

/// Partition a family of manifolds by their joint invariant vector across a
/// family of theories.
#[derive(Clone, Debug)]
pub struct DistinguishReport {
    /// Blocks of manifold indices with identical invariant vectors.
    pub blocks: Vec<Vec<usize>>,
    /// `values[m][t]`: the partition function of manifold `m` in theory `t`.
    pub values: Vec<Vec<Cyclotomic>>,
    /// For each pair of distinct blocks (by representative index), the index
    /// of a theory separating them.
    pub separations: Vec<(usize, usize, usize)>,
}

pub fn distinguish(
    manifolds: &[ManifoldDescription],
    theories: &[DwTheory],
    bound: u128,
) -> Result<DistinguishReport, DwError> {
    let mut values = vec![];
    for m in manifolds {
        let mut row = vec![];
        for t in theories {
            row.push(partition_function(t, m, bound)?.value);
        }
        values.push(row);
    }
    let mut blocks: Vec<Vec<usize>> = vec![];
    for i in 0..manifolds.len() {
        match blocks.iter_mut().find(|b| values[b[0]] == values[i]) {
            Some(b) => b.push(i),
            None => blocks.push(vec![i]),
        }
    }
    let mut separations = vec![];
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let (a, b) = (blocks[i][0], blocks[j][0]);
            let t = (0..theories.len())
                .find(|&t| values[a][t] != values[b][t])
                .expect("distinct blocks differ somewhere");
            separations.push((i, j, t));
        }
    }
    Ok(DistinguishReport { blocks, values, separations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fingroup::FgAbelian;
    use crate::scalar::rational;

    fn c(x: i64) -> Cyclotomic {
        Cyclotomic::from_integer(x)
    }

    fn rat(n: i64, d: i64) -> Cyclotomic {
        Cyclotomic::from_rational(rational(n, d))
    }

    #[test]
    fn torus_mapping_groupoid_for_s3() {
        let s3 = FinGroup::symmetric(3);
        let data = mapping_groupoid(&ManifoldDescription::surface(1), &s3, DEFAULT_HOM_BOUND).unwrap();
        // oracle: brute enumeration of commuting pairs in S3
        let mut count = 0;
        for a in 0..6 {
            for b in 0..6 {
                if s3.mul(a, b) == s3.mul(b, a) {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 18);
        assert_eq!(data.homs.len(), 18);
        assert_eq!(data.groupoid.total_cardinality(), rational(3, 1));
    }

    #[test]
    fn sphere_has_one_flat_connection() {
        let s3 = FinGroup::symmetric(3);
        let data = mapping_groupoid(&ManifoldDescription::surface(0), &s3, DEFAULT_HOM_BOUND).unwrap();
        assert_eq!(data.homs.len(), 1);
        let comps = data.groupoid.components();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].aut.order(), 6);
    }

    #[test]
    fn genus_two_z2_counts() {
        let z2 = FinGroup::cyclic(2);
        let data = mapping_groupoid(&ManifoldDescription::surface(2), &z2, DEFAULT_HOM_BOUND).unwrap();
        assert_eq!(data.homs.len(), 16); // |Hom(F_4/relator, Z2)| = 2^4
        let z = partition_function(&DwTheory::untwisted(z2), &ManifoldDescription::surface(2), DEFAULT_HOM_BOUND)
            .unwrap();
        assert_eq!(z.value, c(8));
    }

    #[test]
    fn torus_partition_function_of_s3() {
        let s3 = FinGroup::symmetric(3);
        let z = partition_function(&DwTheory::untwisted(s3), &ManifoldDescription::surface(1), DEFAULT_HOM_BOUND)
            .unwrap();
        assert_eq!(z.value, c(3)); // 18 commuting pairs / 6
        assert_eq!(z.route, "groupoid_sum");
    }

    #[test]
    fn enumeration_bound_is_enforced() {
        let s3 = FinGroup::symmetric(3);
        match enumerate_homs(&ManifoldDescription::surface(3), &s3, 100) {
            Err(DwError::EnumerationBound { required, bound }) => {
                assert_eq!(required, 6u128.pow(6));
                assert_eq!(bound, 100);
            }
            other => panic!("expected a bound error, got {:?}", other.map(|v| v.len())),
        }
    }

    #[test]
    fn twisted_klein_torus_is_one() {
        let klein = FgAbelian::new(vec![2, 2]);
        let (cocycle, _) = Cocycle2::from_bilinear(&klein, 2, &[vec![0, 1], vec![0, 0]]);
        let theory = DwTheory::twisted(cocycle.clone()).unwrap();
        let z = partition_function(&theory, &ManifoldDescription::surface(1), DEFAULT_HOM_BOUND).unwrap();
        assert_eq!(z.value, c(1));
        // independent oracle: the commuting-pair weight sum
        assert_eq!(twisted_torus_weight_sum(&cocycle), c(1));
    }

    #[test]
    fn twist_on_non_surface_is_rejected() {
        let klein = FgAbelian::new(vec![2, 2]);
        let (cocycle, _) = Cocycle2::from_bilinear(&klein, 2, &[vec![0, 1], vec![0, 0]]);
        let theory = DwTheory::twisted(cocycle).unwrap();
        let m = ManifoldDescription::Presentation { generators: 1, relators: vec![vec![1, 1]] };
        assert!(matches!(
            partition_function(&theory, &m, DEFAULT_HOM_BOUND),
            Err(DwError::TwistOutOfScope)
        ));
    }

    #[test]
    fn sphere_algebra_of_z2_is_the_group_algebra_center() {
        let theory = DwTheory::untwisted(FinGroup::cyclic(2));
        let report = sphere_algebra(&theory, 2).unwrap();
        assert_eq!(report.dim, 2);
        assert!(report.semisimple);
        assert!(report.window_invertible);
    }

    #[test]
    fn sphere_algebra_of_s3_has_class_dimension() {
        let theory = DwTheory::untwisted(FinGroup::symmetric(3));
        let report = sphere_algebra(&theory, 2).unwrap();
        assert_eq!(report.dim, 3); // conjugacy class count oracle
        assert!(report.semisimple);
    }

    #[test]
    fn sphere_algebra_of_twisted_klein_is_one_dimensional() {
        let klein = FgAbelian::new(vec![2, 2]);
        let (cocycle, _) = Cocycle2::from_bilinear(&klein, 2, &[vec![0, 1], vec![0, 0]]);
        let theory = DwTheory::twisted(cocycle).unwrap();
        let report = sphere_algebra(&theory, 2).unwrap();
        assert_eq!(report.dim, 1); // central-solve oracle
        assert!(report.semisimple);
    }

    #[test]
    fn dw_as_pairing_matches_partition_function() {
        let s3 = FinGroup::symmetric(3);
        let theory = DwTheory::untwisted(s3);
        let m = ManifoldDescription::surface(1);
        let (category, m_obj, bg_obj) = mapping_pairing_category(&theory, &m, DEFAULT_HOM_BOUND).unwrap();
        let omega = AbFunctor::constant(&category, FgAbelian::trivial());
        let input = DwPairingInput {
            category,
            omega,
            m_object: m_obj,
            bg_object: bg_obj,
            weight: Character::trivial(&FgAbelian::trivial()),
            fundamental_class: vec![],
        };
        let report = dw_as_pairing(&theory, &m, &input, DEFAULT_HOM_BOUND).unwrap();
        assert_eq!(report.value, c(3));
        assert!(report.matches_partition);
    }

    #[test]
    fn dw_as_pairing_missing_object_errors() {
        let z2 = FinGroup::cyclic(2);
        let theory = DwTheory::untwisted(z2);
        let m = ManifoldDescription::surface(1);
        let (category, m_obj, _) = mapping_pairing_category(&theory, &m, DEFAULT_HOM_BOUND).unwrap();
        let omega = AbFunctor::constant(&category, FgAbelian::trivial());
        let input = DwPairingInput {
            category,
            omega,
            m_object: m_obj,
            bg_object: 7,
            weight: Character::trivial(&FgAbelian::trivial()),
            fundamental_class: vec![],
        };
        assert!(matches!(
            dw_as_pairing(&theory, &m, &input, DEFAULT_HOM_BOUND),
            Err(DwError::MissingObject(_))
        ));
    }

    #[test]
    fn distinguish_surfaces_by_z2() {
        let z2 = FinGroup::cyclic(2);
        let manifolds = vec![
            ManifoldDescription::surface(1),
            ManifoldDescription::surface(2),
            ManifoldDescription::surface(1),
        ];
        let theories = vec![DwTheory::untwisted(z2)];
        let report = distinguish(&manifolds, &theories, DEFAULT_HOM_BOUND).unwrap();
        assert_eq!(report.blocks.len(), 2);
        assert!(report.blocks.contains(&vec![0, 2]));
        assert_eq!(report.values[0][0], c(2));
        assert_eq!(report.values[1][0], c(8));
        assert_eq!(report.separations, vec![(0, 1, 0)]);
    }

    #[test]
    fn tietze_equivalent_presentations_agree() {
        // genus-2 relator written with the generator pairs swapped
        let standard = ManifoldDescription::surface(2);
        let relabeled = ManifoldDescription::Presentation {
            generators: 4,
            relators: vec![vec![3, 4, -3, -4, 1, 2, -1, -2]],
        };
        let s3 = FinGroup::symmetric(3);
        let theory = DwTheory::untwisted(s3);
        let z1 = partition_function(&theory, &standard, DEFAULT_HOM_BOUND).unwrap();
        let z2 = partition_function(&theory, &relabeled, DEFAULT_HOM_BOUND).unwrap();
        assert_eq!(z1.value, z2.value);
        let report = distinguish(&[standard, relabeled], &[theory], DEFAULT_HOM_BOUND).unwrap();
        assert_eq!(report.blocks.len(), 1);
    }

    #[test]
    fn genus_zero_partition_function() {
        let q8 = FinGroup::quaternion8();
        let z = partition_function(&DwTheory::untwisted(q8), &ManifoldDescription::surface(0), DEFAULT_HOM_BOUND)
            .unwrap();
        assert_eq!(z.value, rat(1, 8));
    }
}
