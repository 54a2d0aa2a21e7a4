//! Property tests for the structural invariants of every layer.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use zigzag::burau::{braid_inverse, braid_matrix, LaurentMatrix};
use zigzag::dgalg::{an_shriek_dg, build_resolution, expand, Side};
use zigzag::gf2lin::{BitMatrix, BitVec, Solution};
use zigzag::hochschild::{hochschild_differential, random_cochain};
use zigzag::quiver::{build_named_algebra, NamedAlgebra, QuotientAlgebra};
use zigzag::transfer::{
    build_contraction, enumerate_trees, recursive_operation, stasheff_sum, transferred_table, tree_operation,
    AInfinityTable, Contraction,
};

fn contraction(n: usize) -> &'static Contraction {
    static CACHE: OnceLock<Vec<Contraction>> = OnceLock::new();
    &CACHE.get_or_init(|| (2..=5).map(|n| build_contraction(n).unwrap()).collect())[n - 2]
}

fn table(n: usize) -> &'static AInfinityTable {
    static CACHE: OnceLock<Vec<AInfinityTable>> = OnceLock::new();
    &CACHE.get_or_init(|| (2..=5).map(|n| transferred_table(contraction(n), 6).unwrap()).collect())[n - 2]
}

/// A composable tuple of basis indices chosen by `picks`.
fn composable(alg: &QuotientAlgebra, picks: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for &p in picks {
        let choices: Vec<usize> = match out.last() {
            None => (0..alg.dim()).collect(),
            Some(&prev) => {
                let t = alg.basis()[prev].target;
                (0..alg.dim()).filter(|&k| alg.basis()[k].source == t).collect()
            }
        };
        out.push(choices[p % choices.len()]);
    }
    out
}

fn matrix(rows: usize, cols: usize, bits: &[bool]) -> BitMatrix {
    let rs: Vec<BitVec> = (0..rows)
        .map(|r| BitVec::from_bools(&bits[r * cols..(r + 1) * cols]))
        .collect();
    BitMatrix::from_rows(cols, rs)
}

fn named(k: usize) -> NamedAlgebra {
    [NamedAlgebra::AnShriek, NamedAlgebra::An, NamedAlgebra::Zigzag][k % 3]
}

fn lower_bound(name: NamedAlgebra) -> usize {
    if name == NamedAlgebra::Zigzag {
        2
    } else {
        1
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_nullity_and_transpose(rows in 1usize..10, cols in 1usize..10, bits in proptest::collection::vec(any::<bool>(), 100)) {
        let m = matrix(rows, cols, &bits);
        let kernel = m.kernel();
        prop_assert_eq!(m.rank() + kernel.len(), cols);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).unwrap().is_zero());
        }
    }

    #[test]
    fn solve_round_trips(rows in 1usize..10, cols in 1usize..10, bits in proptest::collection::vec(any::<bool>(), 100),
                         xs in proptest::collection::vec(any::<bool>(), 10), bs in proptest::collection::vec(any::<bool>(), 10)) {
        let m = matrix(rows, cols, &bits);
        let b = m.mul_vec(&BitVec::from_bools(&xs[..cols])).unwrap();
        match m.solve(&b).unwrap() {
            Solution::Consistent(y) => prop_assert_eq!(m.mul_vec(&y).unwrap(), b),
            Solution::Inconsistent { .. } => prop_assert!(false, "consistent system reported inconsistent"),
        }
        let b = BitVec::from_bools(&bs[..rows]);
        match m.solve(&b).unwrap() {
            Solution::Consistent(y) => prop_assert_eq!(m.mul_vec(&y).unwrap(), b),
            Solution::Inconsistent { certificate } => {
                prop_assert!(m.transpose().mul_vec(&certificate).unwrap().is_zero());
                prop_assert!(certificate.dot(&b));
            }
        }
    }

    #[test]
    fn algebra_axioms_on_random_triples(k in 0usize..3, n in 2usize..=7, a in any::<usize>(), b in any::<usize>(), c in any::<usize>()) {
        let name = named(k);
        prop_assume!(n >= lower_bound(name));
        let alg = build_named_algebra(name, n).unwrap();
        let e = |i: usize| alg.basis_element(i % alg.dim());
        let (x, y, z) = (e(a), e(b), e(c));
        let xy_z = alg.multiply(&alg.multiply(&x, &y).unwrap(), &z).unwrap();
        let x_yz = alg.multiply(&x, &alg.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(xy_z.coeffs(), x_yz.coeffs());
        let one = alg.unit();
        prop_assert_eq!(alg.multiply(&one, &x).unwrap().coeffs().clone(), x.coeffs().clone());
        prop_assert_eq!(alg.multiply(&x, &one).unwrap().coeffs().clone(), x.coeffs().clone());
        let xy = alg.multiply(&x, &y).unwrap();
        let deg = |i: usize| alg.basis()[i % alg.dim()].degree;
        for out in xy.coeffs().ones() {
            prop_assert_eq!(alg.basis()[out].degree, deg(a) + deg(b));
        }
    }

    #[test]
    fn shift_coherence(n in 2usize..=6, i in 1usize..=6, left in any::<bool>(), s in -3i32..=3) {
        prop_assume!(i <= n);
        let dg = an_shriek_dg(n).unwrap();
        let side = if left { Side::Left } else { Side::Right };
        let m = build_resolution(&dg, i, side).unwrap();
        let h0 = expand(&dg, &m).unwrap().complex.homology().dims();
        let hs = expand(&dg, &m.shifted(s)).unwrap().complex.homology().dims();
        let moved: BTreeMap<i32, usize> = h0.iter().map(|(&t, &d)| (t - s, d)).collect();
        prop_assert_eq!(hs, moved);
    }

    #[test]
    fn contraction_identities_on_random_vectors(n in 2usize..=5, bits in proptest::collection::vec(any::<bool>(), 64)) {
        let ct = contraction(n);
        let s = ct.s();
        let x = BitVec::from_bools(&bits[..s.dim()]);
        let mut lhs = s.d(&ct.h(&x));
        lhs.xor_assign(&ct.h(&s.d(&x)));
        let mut rhs = x.clone();
        rhs.xor_assign(&ct.j(&ct.p(&x)));
        prop_assert_eq!(lhs, rhs);
        let y = BitVec::from_bools(&bits[..ct.c().dim()]);
        prop_assert_eq!(ct.p(&ct.j(&y)), y);
    }

    #[test]
    fn tree_sum_is_order_independent(n in 3usize..=5, picks in proptest::collection::vec(any::<usize>(), 3..=5),
                                     trees in Just(enumerate_trees(5)).prop_shuffle()) {
        let ct = contraction(n);
        let t = composable(ct.c(), &picks);
        let k = t.len();
        let mut ts = enumerate_trees(k);
        let forward = ts.iter().fold(BitVec::zeros(ct.c().dim()), |mut acc, tr| { acc.xor_assign(&tree_operation(ct, tr, &t)); acc });
        ts.reverse();
        let backward = ts.iter().fold(BitVec::zeros(ct.c().dim()), |mut acc, tr| { acc.xor_assign(&tree_operation(ct, tr, &t)); acc });
        prop_assert_eq!(&forward, &backward);
        prop_assert_eq!(&forward, &recursive_operation(ct, &t));
        if k == 5 {
            let shuffled = trees.iter().fold(BitVec::zeros(ct.c().dim()), |mut acc, tr| { acc.xor_assign(&tree_operation(ct, tr, &t)); acc });
            prop_assert_eq!(&forward, &shuffled);
        }
    }

    #[test]
    fn stasheff_identities_at_random_tuples(n in 2usize..=5, picks in proptest::collection::vec(any::<usize>(), 1..=6)) {
        let tb = table(n);
        let t = composable(tb.algebra(), &picks);
        prop_assert!(stasheff_sum(tb, &t).is_zero(), "{:?}", t);
    }

    #[test]
    fn delta_squared_and_degree(n in 2usize..=5, arity in 1usize..=3, degree in -2i32..=0, seed in any::<u64>()) {
        let c = contraction(n).c();
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_cochain(c, arity, degree, &mut rng);
        let dm = hochschild_differential(c, &m);
        prop_assert_eq!(dm.degree, degree);
        prop_assert_eq!(dm.arity, arity + 1);
        prop_assert!(dm.is_homogeneous(c));
        prop_assert!(hochschild_differential(c, &dm).is_zero());
    }

    #[test]
    fn braid_words_specialize_multiplicatively(n in 2usize..=6, word in proptest::collection::vec((1usize..=5, any::<bool>()), 1..6)) {
        let mut acc = LaurentMatrix::identity(n - 1);
        let mut acc_spec = to_int(&LaurentMatrix::identity(n - 1));
        for (i, inv) in word {
            let i = 1 + (i - 1) % (n - 1);
            let g = if inv { braid_inverse(n, i).unwrap() } else { braid_matrix(n, i).unwrap() };
            let g_inv = if inv { braid_matrix(n, i).unwrap() } else { braid_inverse(n, i).unwrap() };
            prop_assert_eq!(&g * &g_inv, LaurentMatrix::identity(n - 1));
            acc_spec = int_mul(&acc_spec, &g.at_minus_one());
            acc = &acc * &g;
        }
        prop_assert_eq!(acc.at_minus_one(), acc_spec);
    }
}

fn to_int(m: &LaurentMatrix) -> Vec<Vec<BigInt>> {
    m.at_minus_one()
}

fn int_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|r| (0..n).map(|c| (0..n).map(|k| &a[r][k] * &b[k][c]).sum()).collect())
        .collect()
}
