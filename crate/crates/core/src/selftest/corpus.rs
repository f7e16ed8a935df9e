//! The embedded verification corpus: every group of order at most 12, two
//! order-24 companions, machine-verified irreducible representations with
//! complete character degree sets, and a family of 2-cocycles.

use crate::fingroup::{Cocycle2, FgAbelian, FinGroup};
use crate::scalar::{Cyclotomic, ExactMatrix};

/// The complete isomorphism list of groups of order `<= 12`, labeled.
pub fn groups_up_to_12() -> Vec<(String, FinGroup)> {
    let z = |n: usize| FinGroup::cyclic(n);
    let mut out: Vec<(String, FinGroup)> = vec![
        ("1".into(), z(1)),
        ("Z2".into(), z(2)),
        ("Z3".into(), z(3)),
        ("Z4".into(), z(4)),
        ("Z2xZ2".into(), z(2).direct_product(&z(2))),
        ("Z5".into(), z(5)),
        ("Z6".into(), z(6)),
        ("S3".into(), FinGroup::symmetric(3)),
        ("Z7".into(), z(7)),
        ("Z8".into(), z(8)),
        ("Z4xZ2".into(), z(4).direct_product(&z(2))),
        ("Z2xZ2xZ2".into(), z(2).direct_product(&z(2)).direct_product(&z(2))),
        ("D4".into(), FinGroup::dihedral(4)),
        ("Q8".into(), FinGroup::quaternion8()),
        ("Z9".into(), z(9)),
        ("Z3xZ3".into(), z(3).direct_product(&z(3))),
        ("Z10".into(), z(10)),
        ("D5".into(), FinGroup::dihedral(5)),
        ("Z11".into(), z(11)),
        ("Z12".into(), z(12)),
        ("Z6xZ2".into(), z(6).direct_product(&z(2))),
        ("D6".into(), FinGroup::dihedral(6)),
        ("A4".into(), FinGroup::alternating4()),
        ("Dic3".into(), FinGroup::dicyclic(3)),
    ];
    out.sort_by_key(|(_, g)| g.order());
    out
}

/// Order-24 companions for the semisimplicity corpus.
pub fn order_24_groups() -> Vec<(String, FinGroup)> {
    vec![
        ("S4".into(), FinGroup::symmetric(4)),
        ("Dic6".into(), FinGroup::dicyclic(6)),
    ]
}

/// Character degrees by the independent route: class count, abelianization
/// order, and the unique multiset of degrees `>= 2` whose squares absorb the
/// rest. `None` when the multiset is not unique.
pub fn irrep_dims_oracle(g: &FinGroup) -> Option<Vec<usize>> {
    let classes = g.conjugacy_classes().len();
    let ab = g.order() / g.commutator_subgroup().len();
    let remaining = g.order() - ab;
    let slots = classes - ab;
    let mut solutions = vec![];
    fn search(remaining: usize, slots: usize, min_d: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(acc.clone());
            }
            return;
        }
        let mut d = min_d;
        while d * d <= remaining {
            acc.push(d);
            search(remaining - d * d, slots - 1, d, acc, out);
            acc.pop();
            d += 1;
        }
    }
    search(remaining, slots, 2, &mut vec![], &mut solutions);
    if solutions.len() == 1 {
        let mut dims = vec![1; ab];
        dims.extend(&solutions[0]);
        Some(dims)
    } else {
        None
    }
}

fn c(x: i64) -> Cyclotomic {
    Cyclotomic::from_integer(x)
}

fn zeta(n: u64, k: i64) -> Cyclotomic {
    Cyclotomic::root_of_unity(n, k).unwrap()
}

/// Extend matrices on a generating set to the whole group; `None` on a
/// conflict (the assignment was not a homomorphism).
pub fn rep_from_generators(
    g: &FinGroup,
    gens: &[usize],
    images: &[ExactMatrix],
) -> Option<Vec<ExactMatrix>> {
    let d = images.first().map_or(1, |m| m.ncols());
    let mut rep: Vec<Option<ExactMatrix>> = vec![None; g.order()];
    rep[g.identity()] = Some(ExactMatrix::identity(d));
    for (&x, m) in gens.iter().zip(images) {
        match &rep[x] {
            None => rep[x] = Some(m.clone()),
            Some(existing) if existing == m => {}
            _ => return None,
        }
    }
    loop {
        let known: Vec<usize> = (0..g.order()).filter(|&x| rep[x].is_some()).collect();
        let mut grew = false;
        for &a in &known {
            for &b in &known {
                let ab = g.mul(a, b);
                let prod = rep[a].as_ref().unwrap().matmul(rep[b].as_ref().unwrap());
                match &rep[ab] {
                    None => {
                        rep[ab] = Some(prod);
                        grew = true;
                    }
                    Some(existing) => {
                        if *existing != prod {
                            return None;
                        }
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    rep.into_iter().collect()
}

/// One-dimensional representations by pulling back the characters of the
/// abelianization.
pub fn one_dim_reps(g: &FinGroup) -> Vec<Vec<ExactMatrix>> {
    let comm = g.commutator_subgroup();
    let (quotient, coset_of) = g.quotient(&comm);
    let chars = quotient.abelian_characters().expect("abelianization is abelian");
    chars
        .into_iter()
        .map(|chi| {
            (0..g.order())
                .map(|x| ExactMatrix::from_rows(vec![vec![chi[coset_of[x]].clone()]]))
                .collect()
        })
        .collect()
}

/// Permutation representation minus the trivial summand, in the difference
/// basis `e_i - e_{i+1}`; integer matrices.
pub fn standard_rep_from_permutations(perms: &[Vec<usize>]) -> Vec<ExactMatrix> {
    let degree = perms[0].len();
    let d = degree - 1;
    // change of basis: columns b_i = e_i - e_{i+1}; solve P * B = B * M
    let basis = ExactMatrix::from_fn(degree, d, |i, j| {
        if i == j {
            c(1)
        } else if i == j + 1 {
            c(-1)
        } else {
            c(0)
        }
    });
    perms
        .iter()
        .map(|p| {
            let perm_matrix = ExactMatrix::from_fn(degree, degree, |i, j| {
                if p[j] == i {
                    c(1)
                } else {
                    c(0)
                }
            });
            let pb = perm_matrix.matmul(&basis);
            basis.solve(&pb).expect("difference subspace is invariant")
        })
        .collect()
}

/// The complete set of irreducible representations of a corpus group (one
/// matrix per element). Each family is validated downstream: homomorphism
/// property, irreducibility via the commutant, and the degree sum.
pub fn irreps(name: &str, g: &FinGroup) -> Vec<Vec<ExactMatrix>> {
    if g.is_abelian() {
        return g
            .abelian_characters()
            .unwrap()
            .into_iter()
            .map(|chi| {
                chi.into_iter()
                    .map(|v| ExactMatrix::from_rows(vec![vec![v]]))
                    .collect()
            })
            .collect();
    }
    let mut out = one_dim_reps(g);
    match name {
        "S3" => {
            let (_, elems) = FinGroup::from_permutations_with_elements(
                3,
                &[vec![1, 0, 2], vec![1, 2, 0]],
            )
            .unwrap();
            out.push(standard_rep_from_permutations(&elems));
        }
        "A4" => {
            let (_, elems) = FinGroup::from_permutations_with_elements(
                4,
                &[vec![1, 0, 3, 2], vec![1, 2, 0, 3]],
            )
            .unwrap();
            out.push(standard_rep_from_permutations(&elems));
        }
        "S4" => {
            let (_, elems) = FinGroup::from_permutations_with_elements(
                4,
                &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]],
            )
            .unwrap();
            out.push(standard_rep_from_permutations(&elems));
            // 2-dim through the S3 quotient and the sign twist of the standard
            // rep are omitted: criterion 7 only draws on groups of order <= 12
        }
        "D4" | "D5" | "D6" => {
            let n = g.order() / 2;
            for k in 1..n {
                if 2 * k == n {
                    continue; // reducible: diag(-1, -1) has a 2-dim commutant
                }
                if k > n - k {
                    break;
                }
                let rot = ExactMatrix::from_rows(vec![
                    vec![zeta(n as u64, k as i64), c(0)],
                    vec![c(0), zeta(n as u64, -(k as i64))],
                ]);
                let flip = ExactMatrix::from_rows(vec![vec![c(0), c(1)], vec![c(1), c(0)]]);
                let rep = rep_from_generators(g, &[1, n], &[rot, flip])
                    .expect("dihedral generator images satisfy the relations");
                out.push(rep);
            }
        }
        "Q8" => {
            let i_mat = ExactMatrix::from_rows(vec![
                vec![zeta(4, 1), c(0)],
                vec![c(0), zeta(4, -1)],
            ]);
            let j_mat = ExactMatrix::from_rows(vec![vec![c(0), c(1)], vec![c(-1), c(0)]]);
            let rep = rep_from_generators(g, &[1, 2], &[i_mat, j_mat])
                .expect("quaternion generator images satisfy the relations");
            out.push(rep);
        }
        "Dic3" => {
            // generators a = index 1 (order 6), b = index 6
            let a1 = ExactMatrix::from_rows(vec![
                vec![zeta(6, 1), c(0)],
                vec![c(0), zeta(6, -1)],
            ]);
            let b1 = ExactMatrix::from_rows(vec![vec![c(0), c(1)], vec![c(-1), c(0)]]);
            out.push(rep_from_generators(g, &[1, 6], &[a1, b1]).expect("dicyclic relations"));
            let a2 = ExactMatrix::from_rows(vec![
                vec![zeta(3, 1), c(0)],
                vec![c(0), zeta(3, -1)],
            ]);
            let b2 = ExactMatrix::from_rows(vec![vec![c(0), c(1)], vec![c(1), c(0)]]);
            out.push(rep_from_generators(g, &[1, 6], &[a2, b2]).expect("dicyclic relations"));
        }
        other => panic!("no irreducible family on record for {}", other),
    }
    out
}

/// The cocycle corpus: trivial classes on assorted groups plus bilinear-form
/// twists on abelian groups, at least six of them nontrivial.
pub fn cocycle_corpus() -> Vec<(String, Cocycle2)> {
    let mut out: Vec<(String, Cocycle2)> = vec![
        ("Z2 trivial".into(), Cocycle2::trivial(FinGroup::cyclic(2))),
        ("Z6 trivial".into(), Cocycle2::trivial(FinGroup::cyclic(6))),
        ("S3 trivial".into(), Cocycle2::trivial(FinGroup::symmetric(3))),
        ("D4 trivial".into(), Cocycle2::trivial(FinGroup::dihedral(4))),
        ("Q8 trivial".into(), Cocycle2::trivial(FinGroup::quaternion8())),
        ("A4 trivial".into(), Cocycle2::trivial(FinGroup::alternating4())),
        ("Dic3 trivial".into(), Cocycle2::trivial(FinGroup::dicyclic(3))),
        ("S4 trivial".into(), Cocycle2::trivial(FinGroup::symmetric(4))),
        ("Dic6 trivial".into(), Cocycle2::trivial(FinGroup::dicyclic(6))),
    ];
    let bilinear = |label: &str, factors: Vec<u64>, order: u64, form: Vec<Vec<i64>>| {
        let a = FgAbelian::new(factors);
        let (coc, _) = Cocycle2::from_bilinear(&a, order, &form);
        (label.to_string(), coc)
    };
    out.push(bilinear("Z2xZ2 symplectic", vec![2, 2], 2, vec![vec![0, 1], vec![0, 0]]));
    out.push(bilinear(
        "Z2xZ2xZ2 partial symplectic",
        vec![2, 2, 2],
        2,
        vec![vec![0, 1, 0], vec![0, 0, 0], vec![0, 0, 0]],
    ));
    out.push(bilinear("Z3xZ3 symplectic", vec![3, 3], 3, vec![vec![0, 1], vec![0, 0]]));
    out.push(bilinear("Z4xZ4 symplectic", vec![4, 4], 4, vec![vec![0, 1], vec![0, 0]]));
    out.push(bilinear("Z2xZ4 mixed", vec![2, 4], 2, vec![vec![0, 1], vec![0, 0]]));
    out.push(bilinear(
        "Z2^4 double symplectic",
        vec![2, 2, 2, 2],
        2,
        vec![
            vec![0, 1, 0, 0],
            vec![0, 0, 0, 0],
            vec![0, 0, 0, 1],
            vec![0, 0, 0, 0],
        ],
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_the_complete_list_up_to_12() {
        let groups = groups_up_to_12();
        assert_eq!(groups.len(), 24);
        // pairwise non-isomorphic
        for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                assert!(
                    !groups[i].1.is_isomorphic(&groups[j].1),
                    "{} and {} are isomorphic",
                    groups[i].0,
                    groups[j].0
                );
            }
        }
    }

    #[test]
    fn irrep_dims_oracle_on_known_groups() {
        assert_eq!(irrep_dims_oracle(&FinGroup::symmetric(3)), Some(vec![1, 1, 2]));
        assert_eq!(irrep_dims_oracle(&FinGroup::dihedral(4)), Some(vec![1, 1, 1, 1, 2]));
        assert_eq!(irrep_dims_oracle(&FinGroup::quaternion8()), Some(vec![1, 1, 1, 1, 2]));
        assert_eq!(irrep_dims_oracle(&FinGroup::cyclic(6)), Some(vec![1; 6]));
        assert_eq!(irrep_dims_oracle(&FinGroup::alternating4()), Some(vec![1, 1, 1, 3]));
    }

    #[test]
    fn irrep_families_are_complete_for_small_groups() {
        for (name, g) in groups_up_to_12() {
            let family = irreps(&name, &g);
            let total: usize = family.iter().map(|rep| {
                let d = rep[0].ncols();
                d * d
            }).sum();
            assert_eq!(total, g.order(), "degree sum fails for {}", name);
        }
    }

    #[test]
    fn cocycle_corpus_is_valid_and_rich() {
        let corpus = cocycle_corpus();
        let nontrivial = corpus
            .iter()
            .filter(|(_, c)| c.table.iter().flatten().any(|&e| e != 0))
            .count();
        assert!(nontrivial >= 6);
        for (name, c) in &corpus {
            assert!(c.validate().is_valid(), "{} fails the cocycle identity", name);
        }
    }
}
