//! A∞-bimodules over the transferred structure on `C = C_{n-1}`: the free
//! bimodules `B_k = C(k) ⊗ (k)C`, the diagonal bimodule `C`, and the
//! morphism `f: B_k → C` built from `m_3`.
//!
//! In characteristic 2 the bimodule identities are the Stasheff identities
//! of the square-zero extension `C ⊕ M` on sequences with exactly one module
//! input: for `a_1, …, a_p, x, b_1, …, b_q`, the sum over every consecutive
//! block of an inner operation followed by the outer operation vanishes.
//! For a morphism `f: M → N` the identity is
//! `Σ f(… inner M-operation or m_s …) + Σ m^N(…, f(…), …) = 0`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::gf2lin::BitVec;
use crate::quiver::{PathWord, QuotientAlgebra, Vertex};
use crate::report::Check;
use crate::transfer::{composable_tuples, AInfinityTable};

/// One basis element of a bimodule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuleBasis {
    pub label: String,
    pub source: Vertex,
    pub target: Vertex,
    pub degree: i32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BimoduleKind {
    /// `B_k` with basis `a ⊗ b`, `target a = k = source b`.
    Free {
        k: Vertex,
        pairs: Vec<(usize, usize)>,
    },
    Diagonal,
}

type OpKey = (Vec<usize>, usize, Vec<usize>);

/// An A∞-bimodule `m_{i,j}: C^{⊗ i-1} ⊗ M ⊗ C^{⊗ j-1} → M`, evaluated from
/// the algebra table.
#[derive(Clone, Debug)]
pub struct AInfBimodule {
    pub table: Arc<AInfinityTable>,
    pub kind: BimoduleKind,
    pub basis: Vec<ModuleBasis>,
    pair_index: HashMap<(usize, usize), usize>,
    overrides: HashMap<OpKey, BitVec>,
}

fn word(alg: &QuotientAlgebra, k: usize) -> &PathWord {
    &alg.basis()[k].word
}

/// `B_k` with `m_{i,1} = m_i ⊗ Id`, `m_{1,j} = Id ⊗ m_j` and all other
/// operations zero.
pub fn build_bk(table: Arc<AInfinityTable>, k: Vertex) -> AInfBimodule {
    let alg = table.algebra();
    let mut pairs = Vec::new();
    let mut basis = Vec::new();
    for (a, ba) in alg.basis().iter().enumerate() {
        if ba.target != k {
            continue;
        }
        for (b, bb) in alg.basis().iter().enumerate() {
            if bb.source == k {
                pairs.push((a, b));
                basis.push(ModuleBasis {
                    label: format!("{}⊗{}", ba.word, bb.word),
                    source: ba.source,
                    target: bb.target,
                    degree: ba.degree + bb.degree,
                });
            }
        }
    }
    let pair_index = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    AInfBimodule {
        table,
        kind: BimoduleKind::Free { k, pairs },
        basis,
        pair_index,
        overrides: HashMap::new(),
    }
}

/// `C` over itself with `m_{i,j} = m_{i+j-1}`.
pub fn build_diagonal_bimodule(table: Arc<AInfinityTable>) -> AInfBimodule {
    let alg = table.algebra();
    let basis = alg
        .basis()
        .iter()
        .map(|b| ModuleBasis {
            label: b.word.to_string(),
            source: b.source,
            target: b.target,
            degree: b.degree,
        })
        .collect();
    AInfBimodule {
        table,
        kind: BimoduleKind::Diagonal,
        basis,
        pair_index: HashMap::new(),
        overrides: HashMap::new(),
    }
}

impl AInfBimodule {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn algebra(&self) -> &QuotientAlgebra {
        self.table.algebra()
    }

    /// Index of `a ⊗ b` in `B_k`.
    pub fn pair(&self, a: usize, b: usize) -> Option<usize> {
        self.pair_index.get(&(a, b)).copied()
    }

    /// Overwrite one operation value, for negative controls.
    pub fn set(&mut self, left: Vec<usize>, x: usize, right: Vec<usize>, value: BitVec) {
        self.overrides.insert((left, x, right), value);
    }

    /// `m_{|left|+1, |right|+1}(left, x, right)`.
    pub fn op(&self, left: &[usize], x: usize, right: &[usize]) -> BitVec {
        if !self.overrides.is_empty() {
            if let Some(v) = self.overrides.get(&(left.to_vec(), x, right.to_vec())) {
                return v.clone();
            }
        }
        match &self.kind {
            BimoduleKind::Diagonal => {
                let mut t = Vec::with_capacity(left.len() + right.len() + 1);
                t.extend_from_slice(left);
                t.push(x);
                t.extend_from_slice(right);
                self.table.eval(&t)
            }
            BimoduleKind::Free { pairs, .. } => {
                let (a, b) = pairs[x];
                let mut out = BitVec::zeros(self.dim());
                match (left.is_empty(), right.is_empty()) {
                    (false, true) => {
                        let mut t = left.to_vec();
                        t.push(a);
                        for o in self.table.eval(&t).ones() {
                            out.flip(self.pair_index[&(o, b)]);
                        }
                    }
                    (true, false) => {
                        let mut t = vec![b];
                        t.extend_from_slice(right);
                        for o in self.table.eval(&t).ones() {
                            out.flip(self.pair_index[&(a, o)]);
                        }
                    }
                    _ => {}
                }
                out
            }
        }
    }

    /// All nonzero operation values with at most `max_total` inputs.
    pub fn table(&self, max_total: usize) -> BTreeMap<(Vec<usize>, usize, Vec<usize>), BitVec> {
        let seqs = Sequences::new(self.algebra(), max_total.saturating_sub(1));
        let mut out = BTreeMap::new();
        for (x, b) in self.basis.iter().enumerate() {
            seqs.for_each(b.source, b.target, max_total - 1, |l, r| {
                let v = self.op(l, x, r);
                if !v.is_zero() {
                    out.insert((l.to_vec(), x, r.to_vec()), v);
                }
            });
        }
        out
    }

    pub fn display(&self, v: &BitVec) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.ones()
            .map(|k| self.basis[k].label.clone())
            .collect::<Vec<_>>()
            .join(" + ")
    }

    fn show(&self, left: &[usize], x: usize, right: &[usize]) -> String {
        let alg = self.algebra();
        let mut parts: Vec<String> = left.iter().map(|&k| word(alg, k).to_string()).collect();
        parts.push(format!("[{}]", self.basis[x].label));
        parts.extend(right.iter().map(|&k| word(alg, k).to_string()));
        format!("({})", parts.join(", "))
    }
}

/// Composable tuples of `C` grouped by length and end vertices.
struct Sequences {
    /// `(len, target)` → tuples ending at `target`
    ending: HashMap<(usize, Vertex), Vec<Vec<usize>>>,
    /// `(len, source)` → tuples starting at `source`
    starting: HashMap<(usize, Vertex), Vec<Vec<usize>>>,
}

impl Sequences {
    fn new(alg: &QuotientAlgebra, max_len: usize) -> Self {
        let mut ending: HashMap<(usize, Vertex), Vec<Vec<usize>>> = HashMap::new();
        let mut starting: HashMap<(usize, Vertex), Vec<Vec<usize>>> = HashMap::new();
        for len in 1..=max_len {
            for t in composable_tuples(alg, len) {
                let (s, e) = (alg.basis()[t[0]].source, alg.basis()[*t.last().unwrap()].target);
                ending.entry((len, e)).or_default().push(t.clone());
                starting.entry((len, s)).or_default().push(t);
            }
        }
        Sequences { ending, starting }
    }

    fn ending(&self, len: usize, v: Vertex) -> &[Vec<usize>] {
        self.ending.get(&(len, v)).map(Vec::as_slice).unwrap_or(&[])
    }

    fn starting(&self, len: usize, v: Vertex) -> &[Vec<usize>] {
        self.starting.get(&(len, v)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Every `(left, right)` around a module element from `s` to `t` with
    /// `|left| + |right| ≤ max_outer`.
    fn for_each(&self, s: Vertex, t: Vertex, max_outer: usize, mut f: impl FnMut(&[usize], &[usize])) {
        let empty: Vec<usize> = Vec::new();
        for p in 0..=max_outer {
            for q in 0..=max_outer - p {
                let lefts: Vec<&Vec<usize>> = if p == 0 {
                    vec![&empty]
                } else {
                    self.ending(p, s).iter().collect()
                };
                let rights: Vec<&Vec<usize>> = if q == 0 {
                    vec![&empty]
                } else {
                    self.starting(q, t).iter().collect()
                };
                for l in &lefts {
                    for r in &rights {
                        f(l, r);
                    }
                }
            }
        }
    }
}

/// The inner-operation part shared by module and morphism identities: every
/// way to apply `m_s` inside `left` or `right`, or a module operation around
/// `x`, followed by `outer`.
fn inner_sum(
    m: &AInfBimodule,
    left: &[usize],
    x: usize,
    right: &[usize],
    out_dim: usize,
    outer: impl Fn(&[usize], usize, &[usize]) -> BitVec,
) -> BitVec {
    let table = &m.table;
    let mut acc = BitVec::zeros(out_dim);
    let mut buf = Vec::new();
    let (p, q) = (left.len(), right.len());
    for s in 2..=p {
        for r in 0..=p - s {
            for o in table.eval(&left[r..r + s]).ones() {
                buf.clear();
                buf.extend_from_slice(&left[..r]);
                buf.push(o);
                buf.extend_from_slice(&left[r + s..]);
                acc.xor_assign(&outer(&buf, x, right));
            }
        }
    }
    for s in 2..=q {
        for r in 0..=q - s {
            for o in table.eval(&right[r..r + s]).ones() {
                buf.clear();
                buf.extend_from_slice(&right[..r]);
                buf.push(o);
                buf.extend_from_slice(&right[r + s..]);
                acc.xor_assign(&outer(left, x, &buf));
            }
        }
    }
    for i in 0..=p {
        for j in 0..=q {
            if i + j == 0 {
                continue;
            }
            for o in m.op(&left[p - i..], x, &right[..j]).ones() {
                acc.xor_assign(&outer(&left[..p - i], o, &right[j..]));
            }
        }
    }
    acc
}

/// Bimodule identities on every sequence of total arity at most `max_total`,
/// plus the degree audit `deg m_{i,j} = 3 - i - j`.
pub fn bimodule_relation_check(m: &AInfBimodule, max_total: usize) -> Vec<Check> {
    let seqs = Sequences::new(m.algebra(), max_total.saturating_sub(1));
    let alg = m.algebra();
    let mut bad = None;
    let mut bad_deg = None;
    for (x, b) in m.basis.iter().enumerate() {
        seqs.for_each(b.source, b.target, max_total - 1, |l, r| {
            if bad.is_none() {
                let v = inner_sum(m, l, x, r, m.dim(), |l2, x2, r2| m.op(l2, x2, r2));
                if !v.is_zero() {
                    bad = Some(format!("{} ↦ {}", m.show(l, x, r), m.display(&v)));
                }
            }
            if bad_deg.is_none() {
                let v = m.op(l, x, r);
                let din: i32 = l.iter().chain(r).map(|&k| alg.basis()[k].degree).sum::<i32>() + b.degree;
                let shift = 3 - (l.len() as i32 + 1) - (r.len() as i32 + 1);
                if v.ones().any(|o| m.basis[o].degree != din + shift) {
                    bad_deg = Some(m.show(l, x, r));
                }
            }
        });
    }
    vec![
        Check::expect(
            format!("A∞-bimodule identities through total arity {max_total}"),
            bad.is_none(),
            || bad.clone().unwrap(),
        ),
        Check::expect("each m_{i,j} has degree 3-i-j", bad_deg.is_none(), || {
            bad_deg.clone().unwrap()
        }),
    ]
}

/// Which linear part the map `f: B_k → C` carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearPart {
    /// `f_{1,1} = 0`: only `f_{2,1}` and `f_{1,2}` are nonzero.
    Zero,
    /// `f_{1,1}(β⊗γ) = βγ`, the multiplication map.
    Multiplication,
}

/// An A∞-bimodule map `f_{i,j}: C^{⊗ i-1} ⊗ B_k ⊗ C^{⊗ j-1} → C` with
/// `f_{2,1}(a, β⊗γ) = m_3(a, β, γ)`, `f_{1,2}(β⊗γ, c) = m_3(β, γ, c)`, the
/// chosen `f_{1,1}` and all other components zero.
#[derive(Clone, Debug)]
pub struct AInfBimoduleMap {
    pub source: AInfBimodule,
    pub target: AInfBimodule,
    pub linear: LinearPart,
    overrides: HashMap<OpKey, BitVec>,
}

pub fn build_f(table: Arc<AInfinityTable>, k: Vertex, linear: LinearPart) -> AInfBimoduleMap {
    AInfBimoduleMap {
        source: build_bk(table.clone(), k),
        target: build_diagonal_bimodule(table),
        linear,
        overrides: HashMap::new(),
    }
}

impl AInfBimoduleMap {
    pub fn set(&mut self, left: Vec<usize>, x: usize, right: Vec<usize>, value: BitVec) {
        self.overrides.insert((left, x, right), value);
    }

    pub fn apply(&self, left: &[usize], x: usize, right: &[usize]) -> BitVec {
        if let Some(v) = self.overrides.get(&(left.to_vec(), x, right.to_vec())) {
            return v.clone();
        }
        let BimoduleKind::Free { pairs, .. } = &self.source.kind else {
            unreachable!("source is a free bimodule")
        };
        let (b, g) = pairs[x];
        let table = &self.source.table;
        match (left, right) {
            ([a], []) => table.eval(&[*a, b, g]),
            ([], [c]) => table.eval(&[b, g, *c]),
            ([], []) if self.linear == LinearPart::Multiplication => table.eval(&[b, g]),
            _ => BitVec::zeros(self.target.dim()),
        }
    }
}

/// Morphism identities through total arity `max_total`, plus the degree
/// audit `deg f_{i,j} = 2 - i - j`.
pub fn morphism_relation_check(f: &AInfBimoduleMap, max_total: usize) -> Vec<Check> {
    let (m, n) = (&f.source, &f.target);
    let seqs = Sequences::new(m.algebra(), max_total.saturating_sub(1));
    let alg = m.algebra();
    let mut bad = None;
    let mut bad_deg = None;
    for (x, b) in m.basis.iter().enumerate() {
        seqs.for_each(b.source, b.target, max_total - 1, |l, r| {
            if bad.is_none() {
                let mut v = inner_sum(m, l, x, r, n.dim(), |l2, x2, r2| f.apply(l2, x2, r2));
                let (p, q) = (l.len(), r.len());
                for i in 0..=p {
                    for j in 0..=q {
                        for o in f.apply(&l[p - i..], x, &r[..j]).ones() {
                            v.xor_assign(&n.op(&l[..p - i], o, &r[j..]));
                        }
                    }
                }
                if !v.is_zero() {
                    bad = Some(format!("{} ↦ {}", m.show(l, x, r), n.display(&v)));
                }
            }
            if bad_deg.is_none() {
                let v = f.apply(l, x, r);
                let din: i32 = l.iter().chain(r).map(|&k| alg.basis()[k].degree).sum::<i32>() + b.degree;
                let shift = 2 - (l.len() as i32 + 1) - (r.len() as i32 + 1);
                if v.ones().any(|o| n.basis[o].degree != din + shift) {
                    bad_deg = Some(m.show(l, x, r));
                }
            }
        });
    }
    vec![
        Check::expect(
            format!("A∞-bimodule map identities through total arity {max_total}"),
            bad.is_none(),
            || bad.clone().unwrap(),
        ),
        Check::expect("each f_{i,j} has degree 2-i-j", bad_deg.is_none(), || {
            bad_deg.clone().unwrap()
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::path;
    use crate::report::all_passed;
    use crate::transfer::{build_contraction, transferred_table};

    fn table(n: usize, k: usize) -> Arc<AInfinityTable> {
        let ct = build_contraction(n).unwrap();
        Arc::new(transferred_table(&ct, k).unwrap())
    }

    fn idx(alg: &QuotientAlgebra, w: &[usize]) -> usize {
        alg.word(&path(w)).unwrap().coeffs().first_one().unwrap()
    }

    #[test]
    fn bk_examples() {
        let t = table(4, 4);
        let c = t.algebra().clone();
        let b = build_bk(t.clone(), 1);
        let (x, a) = (idx(&c, &[2, 1]), idx(&c, &[1]));
        let y = idx(&c, &[1, 2]);
        let e = b.pair(a, y).unwrap();
        let got = b.op(&[x], e, &[]);
        assert_eq!(b.display(&got), "(2|1)⊗(1|2)");
        // m_{3,1} through the first m_3 family
        let lp = idx(&c, &[1, 2, 1]);
        let e = b.pair(lp, y).unwrap();
        let got = b.op(&[idx(&c, &[1, 2]), idx(&c, &[2, 1])], e, &[]);
        assert_eq!(got, BitVec::unit(b.dim(), b.pair(lp, y).unwrap()));
        assert!(b.op(&[x], e, &[idx(&c, &[2, 1])]).is_zero());
    }

    #[test]
    fn diagonal_examples() {
        let t = table(4, 4);
        let c = t.algebra().clone();
        let d = build_diagonal_bimodule(t.clone());
        let (u, v, lp) = (idx(&c, &[1, 2]), idx(&c, &[2, 1]), idx(&c, &[1, 2, 1]));
        assert_eq!(d.op(&[u], v, &[lp]), t.eval(&[u, v, lp]));
        assert!(!d.op(&[u], v, &[lp]).is_zero());
        assert!(d.op(&[], u, &[]).is_zero());
        assert_eq!(d.op(&[], u, &[v]), BitVec::unit(c.dim(), lp));
    }

    #[test]
    fn relations_hold_n4() {
        let t = table(4, 5);
        for k in 1..4 {
            assert!(all_passed(&bimodule_relation_check(&build_bk(t.clone(), k), 5)));
            let f = build_f(t.clone(), k, LinearPart::Multiplication);
            let r = morphism_relation_check(&f, 5);
            assert!(all_passed(&r), "k={k}: {r:?}");
            let literal = morphism_relation_check(&build_f(t.clone(), k, LinearPart::Zero), 5);
            assert!(!literal[0].passed, "k={k}");
        }
        assert!(all_passed(&bimodule_relation_check(&build_diagonal_bimodule(t), 5)));
    }

    #[test]
    fn f_vanishes_off_the_two_components() {
        let t = table(4, 4);
        let c = t.algebra().clone();
        let f = build_f(t.clone(), 2, LinearPart::Zero);
        let e = f.source.pair(idx(&c, &[2]), idx(&c, &[2])).unwrap();
        assert!(f.apply(&[], e, &[]).is_zero());
        let (u, v) = (idx(&c, &[1, 2]), idx(&c, &[2, 1]));
        // f_{2,1}((1|2) ⊗ [(2|1) ⊗ (1|2|1)]) needs k = 1 in B_k
        let f1 = build_f(t.clone(), 1, LinearPart::Zero);
        let e = f1.source.pair(v, idx(&c, &[1, 2, 1])).unwrap();
        assert_eq!(f1.apply(&[u], e, &[]), BitVec::unit(c.dim(), idx(&c, &[1, 2, 1])));
    }

    #[test]
    fn broken_bk_value_is_caught() {
        let t = table(4, 4);
        let c = t.algebra().clone();
        let mut b = build_bk(t, 1);
        let (x, a, y) = (idx(&c, &[2, 1]), idx(&c, &[1]), idx(&c, &[1, 2]));
        let e = b.pair(a, y).unwrap();
        let dim = b.dim();
        b.set(vec![x], e, vec![], BitVec::zeros(dim));
        assert!(!bimodule_relation_check(&b, 4)[0].passed);
    }
}
