//! Hochschild cochains of a quotient algebra in fixed internal degree, the
//! coboundary `δ`, and the test of whether the transferred `m_3` is a
//! coboundary.
//!
//! Cochains are relative to the idempotents: a value on a composable tuple
//! `x_1, …, x_k` lies in `(source x_1) A (target x_k)`, and non-composable
//! tuples go to zero. Averaging over idempotents is a retraction of the full
//! cochain complex onto this one that commutes with `δ`, so a primitive
//! exists in the full space iff it exists here.

use std::collections::{BTreeMap, HashMap};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::gf2lin::{BitMatrix, BitVec, Solution};
use crate::quiver::{path, PathWord, QuotientAlgebra, Vertex};
use crate::report::Check;
use crate::transfer::{composable_tuples, AInfinityTable};

/// A `k`-cochain of internal degree `t`: `deg m(x_1, …, x_k) = Σ deg x_i + t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub arity: usize,
    pub degree: i32,
    /// Nonzero values on composable basis tuples.
    pub values: BTreeMap<Vec<usize>, BitVec>,
}

impl Cochain {
    pub fn zero(arity: usize, degree: i32) -> Self {
        Cochain {
            arity,
            degree,
            values: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, t: &[usize], dim: usize) -> BitVec {
        self.values.get(t).cloned().unwrap_or_else(|| BitVec::zeros(dim))
    }

    /// The arity-`k` layer of an A∞ table as a cochain of degree `2 - k`.
    pub fn from_table(table: &AInfinityTable, k: usize) -> Self {
        Cochain {
            arity: k,
            degree: 2 - k as i32,
            values: table.layer(k).cloned().unwrap_or_default(),
        }
    }

    fn add_value(&mut self, t: Vec<usize>, v: &BitVec) {
        let e = self.values.entry(t.clone()).or_insert_with(|| BitVec::zeros(v.len()));
        e.xor_assign(v);
        if e.is_zero() {
            self.values.remove(&t);
        }
    }

    /// Internal degree and block compatibility of every value.
    pub fn is_homogeneous(&self, alg: &QuotientAlgebra) -> bool {
        self.values.iter().all(|(t, v)| {
            let din: i32 = t.iter().map(|&x| alg.basis()[x].degree).sum();
            let (s, e) = (alg.basis()[t[0]].source, alg.basis()[*t.last().unwrap()].target);
            v.ones().all(|o| {
                let b = &alg.basis()[o];
                b.degree == din + self.degree && b.source == s && b.target == e
            })
        })
    }
}

fn product(alg: &QuotientAlgebra, u: usize, v: usize) -> impl Iterator<Item = usize> + '_ {
    alg.product_of_basis(u, v).iter().map(|&k| k as usize)
}

fn left_mul(alg: &QuotientAlgebra, x: usize, v: &BitVec) -> BitVec {
    let mut out = BitVec::zeros(alg.dim());
    for o in v.ones() {
        for k in product(alg, x, o) {
            out.flip(k);
        }
    }
    out
}

fn right_mul(alg: &QuotientAlgebra, v: &BitVec, y: usize) -> BitVec {
    let mut out = BitVec::zeros(alg.dim());
    for o in v.ones() {
        for k in product(alg, o, y) {
            out.flip(k);
        }
    }
    out
}

/// `δm` on one `(k+1)`-tuple:
/// `x_1 m(x_2, …) + Σ m(…, x_i x_{i+1}, …) + m(…, x_k) x_{k+1}`.
fn delta_at(alg: &QuotientAlgebra, m: &Cochain, t: &[usize]) -> BitVec {
    let dim = alg.dim();
    let k = m.arity;
    let mut acc = left_mul(alg, t[0], &m.get(&t[1..], dim));
    acc.xor_assign(&right_mul(alg, &m.get(&t[..k], dim), t[k]));
    let mut buf = Vec::with_capacity(k);
    for i in 0..k {
        for p in product(alg, t[i], t[i + 1]) {
            buf.clear();
            buf.extend_from_slice(&t[..i]);
            buf.push(p);
            buf.extend_from_slice(&t[i + 2..]);
            acc.xor_assign(&m.get(&buf, dim));
        }
    }
    acc
}

/// The Hochschild coboundary, of arity `k + 1` and the same internal degree.
pub fn hochschild_differential(alg: &QuotientAlgebra, m: &Cochain) -> Cochain {
    let mut out = Cochain::zero(m.arity + 1, m.degree);
    for t in composable_tuples(alg, m.arity + 1) {
        let v = delta_at(alg, m, &t);
        if !v.is_zero() {
            out.values.insert(t, v);
        }
    }
    out
}

/// Coordinates of the degree-`t` cochains of one arity: pairs of a
/// composable tuple and an output basis element of the right block and
/// degree.
#[derive(Clone, Debug)]
pub struct CochainSpace {
    pub arity: usize,
    pub degree: i32,
    pub coords: Vec<(Vec<usize>, usize)>,
    index: HashMap<(Vec<usize>, usize), usize>,
}

impl CochainSpace {
    pub fn new(alg: &QuotientAlgebra, arity: usize, degree: i32) -> Self {
        let mut coords = Vec::new();
        for t in composable_tuples(alg, arity) {
            let din: i32 = t.iter().map(|&x| alg.basis()[x].degree).sum();
            let (s, e) = (alg.basis()[t[0]].source, alg.basis()[*t.last().unwrap()].target);
            for (o, b) in alg.basis().iter().enumerate() {
                if b.source == s && b.target == e && b.degree == din + degree {
                    coords.push((t.clone(), o));
                }
            }
        }
        let index = coords.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        CochainSpace {
            arity,
            degree,
            coords,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coordinate(&self, t: &[usize], o: usize) -> Option<usize> {
        self.index.get(&(t.to_vec(), o)).copied()
    }

    /// `None` if some value lies outside the space.
    pub fn to_vector(&self, m: &Cochain) -> Option<BitVec> {
        let mut v = BitVec::zeros(self.dim());
        for (t, out) in &m.values {
            for o in out.ones() {
                v.set(self.coordinate(t, o)?, true);
            }
        }
        Some(v)
    }

    pub fn from_vector(&self, alg: &QuotientAlgebra, v: &BitVec) -> Cochain {
        let mut m = Cochain::zero(self.arity, self.degree);
        for k in v.ones() {
            let (t, o) = &self.coords[k];
            m.add_value(t.clone(), &BitVec::unit(alg.dim(), *o));
        }
        m
    }

    pub fn basis_cochain(&self, alg: &QuotientAlgebra, k: usize) -> Cochain {
        self.from_vector(alg, &BitVec::unit(self.dim(), k))
    }
}

/// A random cochain of the given arity and degree.
pub fn random_cochain(alg: &QuotientAlgebra, arity: usize, degree: i32, rng: &mut impl Rng) -> Cochain {
    let space = CochainSpace::new(alg, arity, degree);
    let v = BitVec::from_indices(space.dim(), (0..space.dim()).filter(|_| rng.gen_bool(0.5)));
    space.from_vector(alg, &v)
}

/// `δδ = 0` on random cochains of each arity in `arities`.
pub fn delta_squared_sample(
    alg: &QuotientAlgebra,
    arities: &[usize],
    degree: i32,
    samples: usize,
    seed: u64,
) -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(seed);
    arities
        .iter()
        .map(|&k| {
            let bad = (0..samples).find(|_| {
                let m = random_cochain(alg, k, degree, &mut rng);
                !hochschild_differential(alg, &hochschild_differential(alg, &m)).is_zero()
            });
            Check::expect(
                format!("δδ = 0 on {samples} random {k}-cochains of degree {degree}"),
                bad.is_none(),
                || format!("sample {}", bad.unwrap()),
            )
        })
        .collect()
}

/// One equation `Σ coefficients = rhs` of an inconsistency certificate.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateRow {
    pub inputs: Vec<PathWord>,
    pub output: PathWord,
    pub rhs: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoboundaryResult {
    pub coboundary: bool,
    /// Nonzero values of a primitive `m` with `δm = m_3`, if one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<(Vec<PathWord>, Vec<PathWord>)>>,
    /// Coordinates of `δm = m_3` whose sum reads `0 = 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<CertificateRow>>,
    pub unknowns: usize,
    pub equations: usize,
    pub checks: Vec<Check>,
}

/// Matrix of `δ` from `src` coordinates to `dst` coordinates.
fn delta_matrix(alg: &QuotientAlgebra, src: &CochainSpace, columns: &[usize], dst: &CochainSpace) -> BitMatrix {
    let cols: Vec<BitVec> = columns
        .iter()
        .map(|&k| {
            let dm = hochschild_differential(alg, &src.basis_cochain(alg, k));
            dst.to_vector(&dm).expect("δ preserves degree and blocks")
        })
        .collect();
    BitMatrix::from_columns(dst.dim(), &cols)
}

fn solve_on(alg: &QuotientAlgebra, m3: &Cochain, src: &CochainSpace, columns: &[usize]) -> CoboundaryResult {
    let dst = CochainSpace::new(alg, m3.arity, m3.degree);
    let mut checks = Vec::new();
    let b = match dst.to_vector(m3) {
        Some(b) => b,
        None => {
            checks.push(Check::fail("target is homogeneous", "value outside the cochain space"));
            return CoboundaryResult {
                coboundary: false,
                witness: None,
                certificate: None,
                unknowns: columns.len(),
                equations: dst.dim(),
                checks,
            };
        }
    };
    let mat = delta_matrix(alg, src, columns, &dst);
    let word = |k: usize| alg.basis()[k].word.clone();
    let words = |t: &[usize]| t.iter().map(|&k| word(k)).collect::<Vec<_>>();
    let sol = mat.solve(&b).expect("dimensions agree");
    match sol {
        Solution::Consistent(x) => {
            let mut full = BitVec::zeros(src.dim());
            for k in x.ones() {
                full.set(columns[k], true);
            }
            let m = src.from_vector(alg, &full);
            let ok = hochschild_differential(alg, &m) == *m3;
            checks.push(Check::expect("δ(witness) = target", ok, || "mismatch".into()));
            CoboundaryResult {
                coboundary: true,
                witness: Some(
                    m.values
                        .iter()
                        .map(|(t, v)| (words(t), v.ones().map(word).collect()))
                        .collect(),
                ),
                certificate: None,
                unknowns: columns.len(),
                equations: dst.dim(),
                checks,
            }
        }
        Solution::Inconsistent { certificate } => {
            let mut combo = BitVec::zeros(mat.cols());
            for r in certificate.ones() {
                combo.xor_assign(mat.row(r));
            }
            let rhs = certificate.ones().filter(|&r| b.get(r)).count() % 2 == 1;
            checks.push(Check::expect(
                "certificate: the listed equations sum to 0 = 1",
                combo.is_zero() && rhs,
                || "certificate does not annihilate the system".into(),
            ));
            let rows = certificate
                .ones()
                .map(|r| {
                    let (t, o) = &dst.coords[r];
                    CertificateRow {
                        inputs: words(t),
                        output: word(*o),
                        rhs: b.get(r),
                    }
                })
                .collect();
            CoboundaryResult {
                coboundary: false,
                witness: None,
                certificate: Some(rows),
                unknowns: columns.len(),
                equations: dst.dim(),
                checks,
            }
        }
    }
}

/// Solve `δm = m_3` over every 2-cochain of degree `m_3.degree`.
pub fn coboundary_membership(alg: &QuotientAlgebra, m3: &Cochain) -> CoboundaryResult {
    let src = CochainSpace::new(alg, m3.arity - 1, m3.degree);
    let all: Vec<usize> = (0..src.dim()).collect();
    let mut r = solve_on(alg, m3, &src, &all);
    let cocycle = hochschild_differential(alg, m3).is_zero();
    r.checks
        .insert(0, Check::expect("δm_3 = 0", cocycle, || "δm_3 ≠ 0".into()));
    r
}

/// The five coefficient families `α_i, b_i, c_i, d_i, η_i` of degree -1
/// bilinear cochains, as named coordinates.
pub fn slice_coordinates(alg: &QuotientAlgebra, n: usize) -> Vec<(String, (Vec<usize>, usize))> {
    let idx = |w: &[Vertex]| -> Option<usize> {
        let v = alg.word(&path(w)).ok()?;
        let ones: Vec<usize> = v.coeffs().ones().collect();
        (ones.len() == 1).then(|| ones[0])
    };
    let mut out = Vec::new();
    let mut push = |name: String, ins: [Option<usize>; 2], o: Option<usize>| {
        if let ([Some(a), Some(b)], Some(o)) = (ins, o) {
            out.push((name, (vec![a, b], o)));
        }
    };
    let top = n - 1;
    for i in 1..=top {
        let lp = idx(&[i, i + 1, i]);
        if i < top {
            push(format!("α_{i}"), [idx(&[i, i + 1]), idx(&[i + 1, i])], idx(&[i]));
            push(format!("b_{i}"), [lp, idx(&[i, i + 1])], idx(&[i, i + 1]));
        }
        if i > 1 {
            push(format!("c_{i}"), [lp, idx(&[i, i - 1])], idx(&[i, i - 1]));
            push(
                format!("η_{i}"),
                [idx(&[i, i - 1]), idx(&[i - 1, i, i - 1])],
                idx(&[i, i - 1]),
            );
        }
        push(format!("d_{i}"), [lp, lp], lp);
    }
    out
}

/// Equations `(terms, rhs)` of the slice system at one middle vertex.
pub type SliceEquations = Vec<(Vec<String>, bool)>;

/// The coboundary solve restricted to the five families.
#[derive(Clone, Debug, Serialize)]
pub struct SliceResult {
    pub unknowns: Vec<String>,
    pub solve: CoboundaryResult,
    /// For each middle vertex, the four obstruction equations as computed.
    pub equations: Vec<(Vertex, SliceEquations)>,
    pub checks: Vec<Check>,
}

pub fn slice_obstruction(alg: &QuotientAlgebra, n: usize, m3: &Cochain) -> SliceResult {
    let src = CochainSpace::new(alg, 2, m3.degree);
    let named = slice_coordinates(alg, n);
    let mut cols = Vec::new();
    let mut unknowns = Vec::new();
    for (name, (t, o)) in &named {
        if let Some(k) = src.coordinate(t, *o) {
            cols.push(k);
            unknowns.push(name.clone());
        }
    }
    let mut checks = Vec::new();
    checks.push(Check::expect(
        "slice coordinates are homogeneous cochains",
        cols.len() == named.len(),
        || format!("{} of {}", cols.len(), named.len()),
    ));
    let solve = solve_on(alg, m3, &src, &cols);
    let dim = alg.dim();
    let idx = |w: &[Vertex]| alg.word(&path(w)).ok().and_then(|v| v.coeffs().first_one());
    let mut equations = Vec::new();
    for i in 2..=n.saturating_sub(2) {
        let lp = |v: Vertex| idx(&[v, v + 1, v]).unwrap();
        let (up, down, back) = (
            idx(&[i, i + 1]).unwrap(),
            idx(&[i + 1, i]).unwrap(),
            idx(&[i, i - 1]).unwrap(),
        );
        let forward_prev = idx(&[i - 1, i]).unwrap();
        let expected: [(Vec<usize>, usize, Vec<String>, bool); 4] = [
            (
                vec![up, down, back],
                back,
                vec![format!("c_{i}"), format!("α_{i}")],
                false,
            ),
            (
                vec![back, lp(i - 1), forward_prev],
                lp(i),
                vec![format!("b_{}", i - 1), format!("η_{i}")],
                false,
            ),
            (
                vec![up, down, lp(i)],
                lp(i),
                vec![format!("η_{}", i + 1), format!("d_{i}"), format!("α_{i}")],
                true,
            ),
            (
                vec![lp(i), up, down],
                lp(i),
                vec![format!("α_{i}"), format!("d_{i}"), format!("b_{i}")],
                false,
            ),
        ];
        let mut found = Vec::new();
        for (t, o, want, want_rhs) in expected {
            let mut got = Vec::new();
            for (name, &k) in unknowns.iter().zip(&cols) {
                let dm = hochschild_differential(alg, &src.basis_cochain(alg, k));
                if dm.get(&t, dim).get(o) {
                    got.push(name.clone());
                }
            }
            let rhs = m3.get(&t, dim).get(o);
            let mut a = got.clone();
            let mut b = want.clone();
            a.sort();
            b.sort();
            checks.push(Check::expect(
                format!("equation {} = {} at i = {i}", want.join(" + "), u8::from(want_rhs)),
                a == b && rhs == want_rhs,
                || format!("computed {} = {}", got.join(" + "), u8::from(rhs)),
            ));
            found.push((got, rhs));
        }
        equations.push((i, found));
    }
    SliceResult {
        unknowns,
        solve,
        equations,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::{build_contraction, transferred_table, zigzag};

    fn m3(n: usize) -> (QuotientAlgebra, Cochain) {
        let ct = build_contraction(n).unwrap();
        let t = transferred_table(&ct, 3).unwrap();
        (ct.c().clone(), Cochain::from_table(&t, 3))
    }

    #[test]
    fn delta_of_zero_is_zero() {
        let c = zigzag(4).unwrap();
        assert!(hochschild_differential(&c, &Cochain::zero(2, -1)).is_zero());
    }

    #[test]
    fn arity_one_formula() {
        let c = zigzag(4).unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        let f = random_cochain(&c, 1, 0, &mut rng);
        let df = hochschild_differential(&c, &f);
        for t in composable_tuples(&c, 2) {
            let mut want = left_mul(&c, t[0], &f.get(&t[1..], c.dim()));
            for p in product(&c, t[0], t[1]) {
                want.xor_assign(&f.get(&[p], c.dim()));
            }
            want.xor_assign(&right_mul(&c, &f.get(&t[..1], c.dim()), t[1]));
            assert_eq!(df.get(&t, c.dim()), want);
        }
    }

    #[test]
    fn delta_squared_vanishes() {
        let c = zigzag(4).unwrap();
        let checks = delta_squared_sample(&c, &[1, 2, 3], -1, 10, 1);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn m3_is_not_a_coboundary() {
        for n in 4..=6 {
            let (c, m) = m3(n);
            assert!(m.is_homogeneous(&c));
            let r = coboundary_membership(&c, &m);
            assert!(!r.coboundary, "n={n}");
            assert!(r.checks.iter().all(|c| c.passed), "{:?}", r.checks);
        }
    }

    #[test]
    fn slice_reproduces_hand_equations() {
        for n in 4..=6 {
            let (c, m) = m3(n);
            let r = slice_obstruction(&c, n, &m);
            assert!(!r.solve.coboundary);
            assert!(r.checks.iter().all(|c| c.passed), "n={n}: {:?}", r.checks);
        }
    }

    #[test]
    fn coboundaries_are_found() {
        let c = zigzag(4).unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        let m = random_cochain(&c, 2, -1, &mut rng);
        let target = hochschild_differential(&c, &m);
        let r = coboundary_membership(&c, &target);
        assert!(r.coboundary && r.checks.iter().all(|c| c.passed));
    }
}
