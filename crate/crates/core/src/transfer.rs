//! Homotopy transfer from `S_{n-1}` to its homology `C_{n-1}`: contraction
//! data `(p, j, H)`, planar binary trees, the transferred minimal
//! A∞-structure and the Stasheff relations.
//!
//! All signs vanish in characteristic 2, so the tree formula and the
//! A∞ relations are plain sums.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::endo::{build_s, EName, EndoError, FiniteDgAlgebra};
use crate::gf2lin::BitVec;
use crate::quiver::{build_named_algebra, path, AlgebraError, NamedAlgebra, PathWord, QuotientAlgebra, Vertex};
use crate::report::{all_passed, Check};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransferError {
    #[error(transparent)]
    Endo(#[from] EndoError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("basis word {0} of the zigzag algebra has no lift")]
    NoLift(PathWord),
    #[error("contraction fails: {0}")]
    ContractionFailed(String),
    #[error("arity {0} is below 2")]
    BadArity(usize),
}

/// Contraction of `S_{n-1}` onto `C_{n-1}`, stored column by column.
#[derive(Clone, Debug)]
pub struct Contraction {
    n: usize,
    s: FiniteDgAlgebra,
    c: QuotientAlgebra,
    /// `p` on each basis element of `S`, as a vector over `C`.
    p: Vec<BitVec>,
    /// `j` on each basis element of `C`, as a vector over `S`.
    j: Vec<BitVec>,
    /// `H` on each basis element of `S`.
    h: Vec<BitVec>,
}

/// The zigzag algebra `C_{n-1}`.
pub fn zigzag(n: usize) -> Result<QuotientAlgebra, AlgebraError> {
    build_named_algebra(NamedAlgebra::Zigzag, n)
}

/// The loop class `(i|i+1|i)` of `C_{n-1}` (equal to `(i|i-1|i)` for `i ≥ 2`).
fn loop_class(c: &QuotientAlgebra, i: Vertex) -> Result<BitVec, AlgebraError> {
    Ok(c.word(&path(&[i, i + 1, i]))?.coeffs().clone())
}

pub fn build_contraction(n: usize) -> Result<Contraction, TransferError> {
    let s = build_s(n)?;
    let c = zigzag(n)?;
    let sv = |e: EName| -> BitVec {
        let k = s.index(e).expect("named element of S");
        BitVec::unit(s.dim(), k)
    };
    let mut j = Vec::with_capacity(c.dim());
    for b in c.basis() {
        let v = b.word.vertices();
        let e = match *v {
            [i] => EName::One(i),
            [a, b] if b == a + 1 => EName::Up(a),
            [a, b] if a == b + 1 => EName::Down(b),
            [a, _, c2] if a == c2 => EName::Right(a),
            _ => return Err(TransferError::NoLift(b.word.clone())),
        };
        if s.index(e).is_none() {
            return Err(TransferError::NoLift(b.word.clone()));
        }
        j.push(sv(e));
    }
    let mut p = Vec::with_capacity(s.dim());
    let mut h = Vec::with_capacity(s.dim());
    for &e in &s.names {
        let image = match e {
            EName::One(i) => c.word(&path(&[i]))?.coeffs().clone(),
            EName::Up(i) => c.word(&path(&[i, i + 1]))?.coeffs().clone(),
            EName::Down(i) => c.word(&path(&[i + 1, i]))?.coeffs().clone(),
            EName::Right(i) | EName::Left(i) => loop_class(&c, i)?,
            _ => BitVec::zeros(c.dim()),
        };
        p.push(image);
        // zero extension off the listed families
        h.push(match e {
            EName::Left(i) => sv(EName::H(i)),
            EName::DownRight(i) => sv(EName::DownH(i)),
            _ => BitVec::zeros(s.dim()),
        });
    }
    Ok(Contraction { n, s, c, p, j, h })
}

fn apply(cols: &[BitVec], len: usize, x: &BitVec) -> BitVec {
    let mut out = BitVec::zeros(len);
    for k in x.ones() {
        out.xor_assign(&cols[k]);
    }
    out
}

impl Contraction {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> &FiniteDgAlgebra {
        &self.s
    }

    pub fn c(&self) -> &QuotientAlgebra {
        &self.c
    }

    pub fn p(&self, x: &BitVec) -> BitVec {
        apply(&self.p, self.c.dim(), x)
    }

    pub fn j(&self, x: &BitVec) -> BitVec {
        apply(&self.j, self.s.dim(), x)
    }

    pub fn h(&self, x: &BitVec) -> BitVec {
        apply(&self.h, self.s.dim(), x)
    }

    pub fn j_basis(&self, k: usize) -> &BitVec {
        &self.j[k]
    }

    /// Replace `H` on one basis element of `S`, for negative controls.
    pub fn with_h(mut self, e: EName, value: BitVec) -> Self {
        let k = self.s.index(e).expect("named element of S");
        self.h[k] = value;
        self
    }
}

/// Status of the contraction identities plus the side conditions.
#[derive(Clone, Debug, Serialize)]
pub struct ContractionReport {
    pub checks: Vec<Check>,
    /// `H² = 0`, `Hj = 0`, `pH = 0`; reported, not required.
    pub side_conditions: Vec<Check>,
}

impl ContractionReport {
    pub fn passed(&self) -> bool {
        all_passed(&self.checks)
    }
}

pub fn verify_contraction(ct: &Contraction) -> ContractionReport {
    let (s, c) = (&ct.s, &ct.c);
    let sdim = s.dim();
    let name = |k: usize| s.names[k].to_string();
    let first = |f: &dyn Fn(usize) -> bool, len: usize| (0..len).find(|&k| !f(k));
    let mut checks = Vec::new();

    let pj = first(&|k| ct.p(&ct.j[k]) == BitVec::unit(c.dim(), k), c.dim());
    checks.push(Check::expect("p∘j = id", pj.is_none(), || {
        c.basis()[pj.unwrap()].word.to_string()
    }));
    let dj = first(&|k| s.d(&ct.j[k]).is_zero(), c.dim());
    checks.push(Check::expect("d∘j = 0", dj.is_none(), || {
        c.basis()[dj.unwrap()].word.to_string()
    }));
    let pd = first(&|k| ct.p(s.d_basis(k)).is_zero(), sdim);
    checks.push(Check::expect("p∘d = 0", pd.is_none(), || name(pd.unwrap())));
    let deg_ok = |k: usize| {
        let dp = ct.p[k].ones().all(|t| c.basis()[t].degree == s.degrees[k]);
        let dh = ct.h[k].ones().all(|t| s.degrees[t] == s.degrees[k] - 1);
        dp && dh
    };
    let dg = first(&deg_ok, sdim);
    checks.push(Check::expect("p has degree 0 and H degree -1", dg.is_none(), || {
        name(dg.unwrap())
    }));
    let jdeg = first(
        &|k| ct.j[k].ones().all(|t| s.degrees[t] == c.basis()[k].degree),
        c.dim(),
    );
    checks.push(Check::expect("j has degree 0", jdeg.is_none(), || {
        c.basis()[jdeg.unwrap()].word.to_string()
    }));
    let homotopy = |k: usize| {
        let x = BitVec::unit(sdim, k);
        let mut lhs = s.d(&ct.h(&x));
        lhs.xor_assign(&ct.h(&s.d(&x)));
        let mut rhs = x;
        rhs.xor_assign(&ct.j(&ct.p[k]));
        lhs == rhs
    };
    let ho = first(&homotopy, sdim);
    checks.push(Check::expect("dH + Hd = id + jp", ho.is_none(), || name(ho.unwrap())));
    checks.push(Check::note(
        "H on h_i",
        "the undefined symbol in the H table is read as h_i, so H(h_i) = 0",
    ));

    let hh = first(&|k| ct.h(&ct.h[k]).is_zero(), sdim);
    let hj = first(&|k| ct.h(&ct.j[k]).is_zero(), c.dim());
    let ph = first(&|k| ct.p(&ct.h[k]).is_zero(), sdim);
    let side_conditions = vec![
        Check::expect("H∘H = 0", hh.is_none(), || name(hh.unwrap())),
        Check::expect("H∘j = 0", hj.is_none(), || c.basis()[hj.unwrap()].word.to_string()),
        Check::expect("p∘H = 0", ph.is_none(), || name(ph.unwrap())),
    ];
    ContractionReport {
        checks,
        side_conditions,
    }
}

/// A planar rooted binary tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PlanarTree {
    Leaf,
    Node(Box<PlanarTree>, Box<PlanarTree>),
}

impl PlanarTree {
    pub fn leaves(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarTree::Leaf => write!(f, "•"),
            PlanarTree::Node(l, r) => write!(f, "({l} {r})"),
        }
    }
}

/// All planar rooted binary trees with `k ≥ 1` leaves, ordered by the size
/// of the left subtree and then recursively.
pub fn enumerate_trees(k: usize) -> Vec<PlanarTree> {
    let mut memo: Vec<Vec<PlanarTree>> = vec![Vec::new(), vec![PlanarTree::Leaf]];
    for size in 2..=k {
        let mut level = Vec::new();
        for left in 1..size {
            for l in &memo[left] {
                for r in &memo[size - left] {
                    level.push(PlanarTree::Node(Box::new(l.clone()), Box::new(r.clone())));
                }
            }
        }
        memo.push(level);
    }
    memo.pop().unwrap_or_default()
}

/// `m_k^T` on basis inputs: leaves `j`, branch points multiplication in
/// `S`, internal edges `H`, root `p`.
pub fn tree_operation(ct: &Contraction, tree: &PlanarTree, inputs: &[usize]) -> BitVec {
    fn eval(ct: &Contraction, t: &PlanarTree, inputs: &[usize]) -> BitVec {
        match t {
            PlanarTree::Leaf => ct.j[inputs[0]].clone(),
            PlanarTree::Node(l, r) => {
                let (a, b) = inputs.split_at(l.leaves());
                let edge = |sub: &PlanarTree, xs: &[usize]| {
                    let v = eval(ct, sub, xs);
                    if matches!(sub, PlanarTree::Leaf) {
                        v
                    } else {
                        ct.h(&v)
                    }
                };
                let x = edge(l, a);
                if x.is_zero() {
                    return x;
                }
                ct.s.mul(&x, &edge(r, b))
            }
        }
    }
    ct.p(&eval(ct, tree, inputs))
}

/// `m_k` by the recursion `λ_1 = j`, `λ_k = Σ μ(Ĥλ_a, Ĥλ_b)` with `Ĥ = H`
/// on arities above one, `m_k = pλ_k`; equal to the tree sum.
pub fn recursive_operation(ct: &Contraction, inputs: &[usize]) -> BitVec {
    let k = inputs.len();
    // lam[a][len] on the interval starting at a
    let mut lam: Vec<Vec<BitVec>> = vec![vec![BitVec::zeros(0); k + 1]; k];
    for a in 0..k {
        lam[a][1] = ct.j[inputs[a]].clone();
    }
    for len in 2..=k {
        for a in 0..=k - len {
            let mut acc = BitVec::zeros(ct.s.dim());
            for split in 1..len {
                let hat = |v: &BitVec, l: usize| if l > 1 { ct.h(v) } else { v.clone() };
                let x = hat(&lam[a][split], split);
                if x.is_zero() {
                    continue;
                }
                let y = hat(&lam[a + split][len - split], len - split);
                acc.xor_assign(&ct.s.mul(&x, &y));
            }
            lam[a][len] = acc;
        }
    }
    ct.p(&lam[0][k])
}

/// Composable `k`-tuples of basis indices: each target equals the next source.
pub fn composable_tuples(alg: &QuotientAlgebra, k: usize) -> Vec<Vec<usize>> {
    let mut by_source: HashMap<Vertex, Vec<usize>> = HashMap::new();
    for (idx, b) in alg.basis().iter().enumerate() {
        by_source.entry(b.source).or_default().push(idx);
    }
    let mut out: Vec<Vec<usize>> = if k == 0 {
        vec![vec![]]
    } else {
        (0..alg.dim()).map(|i| vec![i]).collect()
    };
    for _ in 1..k {
        let mut next = Vec::new();
        for t in &out {
            let tgt = alg.basis()[*t.last().unwrap()].target;
            for &x in by_source.get(&tgt).map(Vec::as_slice).unwrap_or(&[]) {
                let mut u = t.clone();
                u.push(x);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// Sparse multilinear operations `m_k` on the basis of an algebra.
#[derive(Clone, Debug)]
pub struct AInfinityTable {
    alg: QuotientAlgebra,
    max_arity: usize,
    /// `layers[k]` maps basis tuples to nonzero outputs.
    layers: BTreeMap<usize, BTreeMap<Vec<usize>, BitVec>>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum OutputJson {
    Word(PathWord),
    Sum(Vec<PathWord>),
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryJson {
    pub arity: usize,
    pub inputs: Vec<PathWord>,
    pub output: OutputJson,
}

impl AInfinityTable {
    /// The strict algebra itself: `m_2` the multiplication and nothing else.
    pub fn strict(alg: &QuotientAlgebra, max_arity: usize) -> Self {
        let mut m2 = BTreeMap::new();
        for t in composable_tuples(alg, 2) {
            let v = BitVec::from_indices(alg.dim(), alg.product_of_basis(t[0], t[1]).iter().map(|&k| k as usize));
            if !v.is_zero() {
                m2.insert(t, v);
            }
        }
        let mut layers = BTreeMap::new();
        layers.insert(2, m2);
        for k in 3..=max_arity {
            layers.insert(k, BTreeMap::new());
        }
        AInfinityTable {
            alg: alg.clone(),
            max_arity,
            layers,
        }
    }

    pub fn algebra(&self) -> &QuotientAlgebra {
        &self.alg
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn layer(&self, k: usize) -> Option<&BTreeMap<Vec<usize>, BitVec>> {
        self.layers.get(&k)
    }

    /// `m_k` on basis inputs; zero outside the table (in particular `m_1`).
    pub fn eval(&self, inputs: &[usize]) -> BitVec {
        self.layers
            .get(&inputs.len())
            .and_then(|l| l.get(inputs))
            .cloned()
            .unwrap_or_else(|| BitVec::zeros(self.alg.dim()))
    }

    /// Overwrite one value, for negative controls.
    pub fn set(&mut self, inputs: Vec<usize>, value: BitVec) {
        let layer = self.layers.entry(inputs.len()).or_default();
        if value.is_zero() {
            layer.remove(&inputs);
        } else {
            layer.insert(inputs, value);
        }
    }

    pub fn to_json(&self) -> Vec<EntryJson> {
        let word = |k: usize| self.alg.basis()[k].word.clone();
        let mut out = Vec::new();
        for (&arity, layer) in &self.layers {
            for (inputs, v) in layer {
                let words: Vec<PathWord> = v.ones().map(word).collect();
                out.push(EntryJson {
                    arity,
                    inputs: inputs.iter().map(|&k| word(k)).collect(),
                    output: if words.len() == 1 {
                        OutputJson::Word(words[0].clone())
                    } else {
                        OutputJson::Sum(words)
                    },
                });
            }
        }
        out
    }

    /// Render a tuple of basis indices.
    pub fn show(&self, inputs: &[usize]) -> String {
        let ws: Vec<String> = inputs.iter().map(|&k| self.alg.basis()[k].word.to_string()).collect();
        format!("({})", ws.join(", "))
    }
}

/// The transferred structure `m_2, …, m_K` by the tree sum.
///
/// Refuses to run unless the contraction identities hold.
pub fn transferred_table(ct: &Contraction, max_arity: usize) -> Result<AInfinityTable, TransferError> {
    if max_arity < 2 {
        return Err(TransferError::BadArity(max_arity));
    }
    let report = verify_contraction(ct);
    if let Some(c) = report.checks.iter().find(|c| !c.passed) {
        return Err(TransferError::ContractionFailed(format!(
            "{} at {}",
            c.name,
            c.witness.clone().unwrap_or_default()
        )));
    }
    let mut layers = BTreeMap::new();
    for k in 2..=max_arity {
        layers.insert(k, transferred_mk(ct, k)?);
    }
    Ok(AInfinityTable {
        alg: ct.c.clone(),
        max_arity,
        layers,
    })
}

/// The arity-`k` layer of the transferred structure, as a tree sum.
pub fn transferred_mk(ct: &Contraction, k: usize) -> Result<BTreeMap<Vec<usize>, BitVec>, TransferError> {
    if k < 2 {
        return Err(TransferError::BadArity(k));
    }
    let trees = enumerate_trees(k);
    let mut out = BTreeMap::new();
    for t in composable_tuples(&ct.c, k) {
        let mut acc = BitVec::zeros(ct.c.dim());
        for tree in &trees {
            acc.xor_assign(&tree_operation(ct, tree, &t));
        }
        if !acc.is_zero() {
            out.insert(t, acc);
        }
    }
    Ok(out)
}

/// The three `m_3` families expected on `C_{n-1}`, keyed by input tuple.
pub fn expected_m3(c: &QuotientAlgebra, n: usize) -> Result<BTreeMap<Vec<usize>, BitVec>, TransferError> {
    let single = |w: &[Vertex]| -> Result<usize, TransferError> {
        let v = c.word(&path(w))?;
        let ones: Vec<usize> = v.coeffs().ones().collect();
        match ones[..] {
            [k] => Ok(k),
            _ => Err(TransferError::NoLift(path(w))),
        }
    };
    let mut out = BTreeMap::new();
    for i in 1..=n.saturating_sub(2) {
        let t = vec![single(&[i, i + 1])?, single(&[i + 1, i])?, single(&[i, i + 1, i])?];
        out.insert(t, BitVec::unit(c.dim(), single(&[i, i + 1, i])?));
    }
    for i in 2..n {
        let t = vec![single(&[i - 1, i])?, single(&[i, i - 1])?, single(&[i - 1, i])?];
        out.insert(t, BitVec::unit(c.dim(), single(&[i - 1, i])?));
        let t = vec![single(&[i, i + 1, i])?, single(&[i, i - 1])?, single(&[i - 1, i])?];
        out.insert(t, BitVec::unit(c.dim(), single(&[i, i + 1, i])?));
    }
    Ok(out)
}

/// Minimality, `m_2` = multiplication, the exact `m_3` support, vanishing of
/// `m_4..m_K`, the degree audit and the tree/recursion cross-check.
pub fn verify_minimal_model(ct: &Contraction, table: &AInfinityTable) -> Result<Vec<Check>, TransferError> {
    let c = &ct.c;
    let n = ct.n;
    let mut checks = Vec::new();
    let m1 = (0..c.dim()).find(|&k| !ct.p(&ct.s.d(&ct.j[k])).is_zero());
    checks.push(Check::expect("m_1 = pdj = 0", m1.is_none(), || {
        c.basis()[m1.unwrap()].word.to_string()
    }));

    let strict = AInfinityTable::strict(c, 2);
    let m2_bad = composable_tuples(c, 2)
        .into_iter()
        .find(|t| table.eval(t) != strict.eval(t));
    checks.push(Check::expect(
        "m_2 is the multiplication of C",
        m2_bad.is_none(),
        || table.show(m2_bad.as_ref().unwrap()),
    ));

    let expected = expected_m3(c, n)?;
    let empty = BTreeMap::new();
    let m3 = table.layer(3).unwrap_or(&empty);
    let mut diff = Vec::new();
    for (t, v) in m3 {
        if expected.get(t) != Some(v) {
            diff.push(format!("m_3{} = {}", table.show(t), c.display(v)));
        }
    }
    for (t, v) in &expected {
        if m3.get(t) != Some(v) {
            diff.push(format!("m_3{} should be {}", table.show(t), c.display(v)));
        }
    }
    checks.push(Check::expect(
        "m_3 is supported exactly on the three families with the expected outputs",
        diff.is_empty(),
        || diff.join("; "),
    ));
    checks.push(Check::note("number of nonzero m_3 values", m3.len().to_string()));
    for k in 4..=table.max_arity {
        let layer = table.layer(k).unwrap_or(&empty);
        checks.push(Check::expect(format!("m_{k} = 0"), layer.is_empty(), || {
            let (t, v) = layer.iter().next().unwrap();
            format!("m_{k}{} = {}", table.show(t), c.display(v))
        }));
    }
    let mut bad_deg = None;
    for (&k, layer) in &table.layers {
        for (t, v) in layer {
            let din: i32 = t.iter().map(|&x| c.basis()[x].degree).sum();
            if v.ones().any(|o| c.basis()[o].degree != din + 2 - k as i32) {
                bad_deg = Some(format!("m_{k}{}", table.show(t)));
            }
        }
    }
    checks.push(Check::expect("each m_k has degree 2-k", bad_deg.is_none(), || {
        bad_deg.clone().unwrap()
    }));
    let mut mismatch = None;
    'outer: for k in 2..=table.max_arity.min(5) {
        for t in composable_tuples(c, k) {
            if recursive_operation(ct, &t) != table.eval(&t) {
                mismatch = Some(table.show(&t));
                break 'outer;
            }
        }
    }
    checks.push(Check::expect(
        "tree sum equals the recursive formula",
        mismatch.is_none(),
        || mismatch.clone().unwrap(),
    ));
    Ok(checks)
}

/// Stasheff identities `Σ m_u(1^r ⊗ m_s ⊗ 1^t) = 0` for every arity up
/// to `max` on composable basis tuples.
pub fn a_infinity_relation_check(table: &AInfinityTable, max: usize) -> Vec<Check> {
    let c = &table.alg;
    let mut checks = Vec::new();
    for arity in 3..=max {
        let mut bad = None;
        for t in composable_tuples(c, arity) {
            let v = stasheff_sum(table, &t);
            if !v.is_zero() {
                bad = Some(format!("{} ↦ {}", table.show(&t), c.display(&v)));
                break;
            }
        }
        checks.push(Check::expect(
            format!("A∞ relation in arity {arity}"),
            bad.is_none(),
            || bad.clone().unwrap(),
        ));
    }
    checks
}

/// The Stasheff sum on one tuple, with `m_1 = 0` dropped.
pub fn stasheff_sum(table: &AInfinityTable, t: &[usize]) -> BitVec {
    let arity = t.len();
    let mut acc = BitVec::zeros(table.alg.dim());
    let mut buf = Vec::with_capacity(arity);
    for s in 2..arity {
        for r in 0..=arity - s {
            let inner = table.eval(&t[r..r + s]);
            for o in inner.ones() {
                buf.clear();
                buf.extend_from_slice(&t[..r]);
                buf.push(o);
                buf.extend_from_slice(&t[r + s..]);
                acc.xor_assign(&table.eval(&buf));
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_counts() {
        let counts: Vec<usize> = (1..=7).map(|k| enumerate_trees(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42, 132]);
        assert!(enumerate_trees(5).iter().all(|t| t.leaves() == 5));
    }

    #[test]
    fn contraction_holds() {
        for n in 2..=6 {
            let ct = build_contraction(n).unwrap();
            let r = verify_contraction(&ct);
            assert!(r.passed(), "n={n}: {:?}", r.checks);
            assert_eq!(ct.c().dim(), 4 * n - 6);
        }
    }

    #[test]
    fn h_on_left_loop_is_h() {
        let ct = build_contraction(4).unwrap();
        let s = ct.s();
        for i in 1..4 {
            let x = BitVec::unit(s.dim(), s.index(EName::Left(i)).unwrap());
            assert_eq!(ct.h(&x), BitVec::unit(s.dim(), s.index(EName::H(i)).unwrap()));
            let one = BitVec::unit(s.dim(), s.index(EName::One(i)).unwrap());
            assert!(ct.h(&one).is_zero());
        }
    }

    #[test]
    fn transferred_structure_n4() {
        let ct = build_contraction(4).unwrap();
        let table = transferred_table(&ct, 6).unwrap();
        let checks = verify_minimal_model(&ct, &table).unwrap();
        assert!(all_passed(&checks), "{checks:#?}");
        let rel = a_infinity_relation_check(&table, 6);
        assert!(all_passed(&rel), "{rel:#?}");
    }

    #[test]
    fn dropping_an_m3_value_breaks_arity_four() {
        let ct = build_contraction(4).unwrap();
        let mut table = transferred_table(&ct, 4).unwrap();
        let (t, _) = table
            .layer(3)
            .unwrap()
            .iter()
            .next()
            .map(|(t, v)| (t.clone(), v.clone()))
            .unwrap();
        table.set(t, BitVec::zeros(ct.c().dim()));
        let rel = a_infinity_relation_check(&table, 4);
        assert!(!rel[1].passed);
    }

    #[test]
    fn strict_table_is_an_a_infinity_algebra() {
        let c = zigzag(4).unwrap();
        assert!(all_passed(&a_infinity_relation_check(
            &AInfinityTable::strict(&c, 5),
            5
        )));
    }

    #[test]
    fn broken_homotopy_aborts_transfer() {
        let ct = build_contraction(3).unwrap();
        let dim = ct.s().dim();
        let ct = ct.with_h(EName::Left(1), BitVec::zeros(dim));
        assert!(matches!(
            transferred_table(&ct, 3),
            Err(TransferError::ContractionFailed(_))
        ));
    }
}
