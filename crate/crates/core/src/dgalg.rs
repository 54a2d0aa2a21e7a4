//! Differentials on quotient algebras, cell modules over them, and homology
//! of finite complexes.
//!
//! Degrees follow `M[s]^j = M^{s+j}`: the generator of `P[s]` sits in
//! degree `-s`. A left cell module with generators `g_k = P_{p_k}[s_k]` has
//! differential `d(g_k) = Σ_l x_kl g_l`, so `x_kl ∈ (p_k)A(p_l)` has degree
//! `s_l - s_k + 1`. In a right cell module `d(g_k) = Σ_l g_l x_kl` with
//! `x_kl ∈ (p_l)A(p_k)` and the same degree rule.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::gf2lin::{BitMatrix, BitVec, Echelon};
use crate::quiver::{build_named_algebra, path, AlgebraError, NamedAlgebra, PathWord, QuotientAlgebra, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DgError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{0} is not an arrow")]
    NotAnArrow(PathWord),
    #[error("d{arrow} must lie in the same block in degree {degree}")]
    BadDerivationValue { arrow: PathWord, degree: i32 },
    #[error("derivations are only supported on untruncated algebras")]
    Truncated,
    #[error("d does not preserve relation {relation}: d of it is {residue}")]
    NotWellDefined { relation: usize, residue: String },
    #[error("d² is nonzero on {0}")]
    DSquared(PathWord),
    #[error("Leibniz rule fails on ({0}, {1})")]
    Leibniz(PathWord, PathWord),
    #[error("generator {0} is out of range")]
    BadGenerator(usize),
    #[error("label on arrow {from} -> {to} is not in block {block:?} of degree {degree}")]
    BadLabel {
        from: usize,
        to: usize,
        block: (Vertex, Vertex),
        degree: i32,
    },
    #[error("arrows of a cell module must not form a cycle")]
    CyclicArrows,
    #[error("index {index} out of range 1..={max}")]
    OutOfRange { index: usize, max: usize },
    #[error("complex differential has wrong degree on basis element {0}")]
    ComplexDegree(usize),
    #[error("complex differential does not square to zero on basis element {0}")]
    ComplexDSquared(usize),
    #[error("d leaves the cell module at generator {generator}, algebra element {element}")]
    LeavesModule { generator: usize, element: PathWord },
}

/// A quotient algebra with a degree +1 square-zero derivation, tabulated on
/// the basis.
#[derive(Clone, Debug)]
pub struct DgAlgebra {
    alg: QuotientAlgebra,
    d: Vec<BitVec>,
}

impl DgAlgebra {
    /// The algebra with zero differential.
    pub fn formal(alg: QuotientAlgebra) -> Self {
        let d = vec![BitVec::zeros(alg.dim()); alg.dim()];
        DgAlgebra { alg, d }
    }

    pub fn algebra(&self) -> &QuotientAlgebra {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn d_basis(&self, k: usize) -> &BitVec {
        &self.d[k]
    }

    pub fn d(&self, x: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.dim());
        for k in x.ones() {
            out.xor_assign(&self.d[k]);
        }
        out
    }

    pub fn mul(&self, x: &BitVec, y: &BitVec) -> BitVec {
        self.alg.mul_coeffs(x, y)
    }

    /// First basis element with `d² ≠ 0`.
    pub fn check_d_squared(&self) -> Option<usize> {
        (0..self.dim()).find(|&k| !self.d(&self.d[k]).is_zero())
    }

    /// First basis pair violating `d(xy) = d(x)y + x d(y)`.
    pub fn check_leibniz(&self) -> Option<(usize, usize)> {
        let dim = self.dim();
        let basis = self.alg.basis();
        for u in 0..dim {
            let eu = BitVec::unit(dim, u);
            for v in 0..dim {
                if basis[u].target != basis[v].source {
                    continue;
                }
                let ev = BitVec::unit(dim, v);
                let lhs = self.d(&self.mul(&eu, &ev));
                let mut rhs = self.mul(&self.d[u], &ev);
                rhs.xor_assign(&self.mul(&eu, &self.d[v]));
                if lhs != rhs {
                    return Some((u, v));
                }
            }
        }
        None
    }

    /// Replace `d` on one basis element. Used to build negative controls.
    pub fn perturb_differential(&mut self, k: usize, value: BitVec) {
        self.d[k] = value;
    }
}

/// Leibniz expansion of `d` on an arbitrary path, given `d` on arrows.
fn leibniz_on_word(
    alg: &QuotientAlgebra,
    arrow_values: &HashMap<(Vertex, Vertex), BitVec>,
    word: &PathWord,
) -> Result<BitVec, AlgebraError> {
    let vs = word.vertices();
    let mut out = BitVec::zeros(alg.dim());
    for k in 1..vs.len() {
        let Some(val) = arrow_values.get(&(vs[k - 1], vs[k])) else {
            continue;
        };
        let prefix = alg.word(&PathWord::new(vs[..k].to_vec()))?;
        let suffix = alg.word(&PathWord::new(vs[k..].to_vec()))?;
        let t = alg.mul_coeffs(&alg.mul_coeffs(prefix.coeffs(), val), suffix.coeffs());
        out.xor_assign(&t);
    }
    Ok(out)
}

/// Extend `values` (d on arrows, unlisted arrows map to zero) to a
/// derivation, checking that it is well defined on the quotient, squares to
/// zero and satisfies Leibniz.
pub fn make_derivation(alg: QuotientAlgebra, values: &[(PathWord, BitVec)]) -> Result<DgAlgebra, DgError> {
    let nonzero = values.iter().any(|(_, v)| !v.is_zero());
    if nonzero && alg.vertex_set().len() != alg.quiver().vertices() {
        return Err(DgError::Truncated);
    }
    let mut arrow_values = HashMap::new();
    for (a, v) in values {
        if a.length() != 1 {
            return Err(DgError::NotAnArrow(a.clone()));
        }
        let arrow = alg
            .quiver()
            .arrow_between(a.source(), a.target())
            .ok_or_else(|| DgError::NotAnArrow(a.clone()))?;
        let ok = v.ones().all(|k| {
            let b = &alg.basis()[k];
            b.source == a.source() && b.target == a.target() && b.degree == arrow.degree + 1
        });
        if !ok {
            return Err(DgError::BadDerivationValue {
                arrow: a.clone(),
                degree: arrow.degree + 1,
            });
        }
        arrow_values.insert((a.source(), a.target()), v.clone());
    }
    for (r, rel) in alg.relations().iter().enumerate() {
        let mut total = BitVec::zeros(alg.dim());
        for t in &rel.terms {
            total.xor_assign(&leibniz_on_word(&alg, &arrow_values, t)?);
        }
        if !total.is_zero() {
            return Err(DgError::NotWellDefined {
                relation: r,
                residue: alg.display(&total),
            });
        }
    }
    let d = alg
        .basis()
        .iter()
        .map(|b| leibniz_on_word(&alg, &arrow_values, &b.word))
        .collect::<Result<Vec<_>, _>>()?;
    let dg = DgAlgebra { alg, d };
    if let Some(k) = dg.check_d_squared() {
        return Err(DgError::DSquared(dg.alg.basis()[k].word.clone()));
    }
    if let Some((u, v)) = dg.check_leibniz() {
        let b = dg.alg.basis();
        return Err(DgError::Leibniz(b[u].word.clone(), b[v].word.clone()));
    }
    Ok(dg)
}

/// `Aₙ^!` with `d(i|i+1) = (i|i+1|i|i+1)` and `d(i+1|i) = 0`.
pub fn an_shriek_dg(n: usize) -> Result<DgAlgebra, DgError> {
    let alg = build_named_algebra(NamedAlgebra::AnShriek, n)?;
    let mut values = Vec::new();
    for i in 1..n {
        let v = alg.word(&path(&[i, i + 1, i, i + 1]))?;
        values.push((path(&[i, i + 1]), v.coeffs().clone()));
    }
    make_derivation(alg, &values)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// A shifted indecomposable projective `P_proj[shift]` (or `_projP[shift]`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CellGenerator {
    pub proj: Vertex,
    pub shift: i32,
}

pub fn gen(proj: Vertex, shift: i32) -> CellGenerator {
    CellGenerator { proj, shift }
}

/// A one-sided twisted complex of shifted projectives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellModule {
    side: Side,
    generators: Vec<CellGenerator>,
    arrows: BTreeMap<(usize, usize), BitVec>,
}

impl CellModule {
    /// Validate blocks, degrees and acyclicity of the arrows. The d² check
    /// is separate, see [`cell_d_squared_check`].
    pub fn new(
        dg: &DgAlgebra,
        side: Side,
        generators: Vec<CellGenerator>,
        arrows: BTreeMap<(usize, usize), BitVec>,
    ) -> Result<Self, DgError> {
        let alg = dg.algebra();
        for g in &generators {
            if !alg.vertex_set().contains(&g.proj) {
                return Err(DgError::Algebra(AlgebraError::InvalidVertex(g.proj)));
            }
        }
        for (&(k, l), x) in &arrows {
            for idx in [k, l] {
                if idx >= generators.len() {
                    return Err(DgError::BadGenerator(idx));
                }
            }
            let (source, target) = label_block(side, generators[k], generators[l]);
            let degree = generators[l].shift - generators[k].shift + 1;
            let ok = k != l
                && x.ones().all(|b| {
                    let e = &alg.basis()[b];
                    e.source == source && e.target == target && e.degree == degree
                });
            if !ok {
                return Err(DgError::BadLabel {
                    from: k,
                    to: l,
                    block: (source, target),
                    degree,
                });
            }
        }
        let m = CellModule {
            side,
            generators,
            arrows: arrows.into_iter().filter(|(_, x)| !x.is_zero()).collect(),
        };
        if !m.is_acyclic() {
            return Err(DgError::CyclicArrows);
        }
        Ok(m)
    }

    fn is_acyclic(&self) -> bool {
        let n = self.generators.len();
        let mut indeg = vec![0usize; n];
        for &(_, l) in self.arrows.keys() {
            indeg[l] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&k| indeg[k] == 0).collect();
        let mut seen = 0;
        while let Some(k) = stack.pop() {
            seen += 1;
            for (&(a, l), _) in self.arrows.range((k, 0)..(k + 1, 0)) {
                debug_assert_eq!(a, k);
                indeg[l] -= 1;
                if indeg[l] == 0 {
                    stack.push(l);
                }
            }
        }
        seen == n
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn generators(&self) -> &[CellGenerator] {
        &self.generators
    }

    pub fn arrows(&self) -> &BTreeMap<(usize, usize), BitVec> {
        &self.arrows
    }

    pub fn label(&self, k: usize, l: usize) -> Option<&BitVec> {
        self.arrows.get(&(k, l))
    }

    /// Index of the generator `P_proj[shift]`.
    pub fn find(&self, proj: Vertex, shift: i32) -> Option<usize> {
        self.generators.iter().position(|g| g.proj == proj && g.shift == shift)
    }

    /// The same module with one arrow removed (for negative controls).
    pub fn without_arrow(&self, k: usize, l: usize) -> CellModule {
        let mut m = self.clone();
        m.arrows.remove(&(k, l));
        m
    }

    /// `M[s]`: every generator shift increased by `s`.
    pub fn shifted(&self, s: i32) -> CellModule {
        let mut m = self.clone();
        for g in &mut m.generators {
            g.shift += s;
        }
        m
    }

    /// The generator whose unshifted copy of the projective at `v` is the
    /// last stage of the resolution.
    pub fn final_generator(&self, v: Vertex) -> Option<usize> {
        self.find(v, 0)
    }
}

/// Algebra block in which the label of an arrow `g → h` lives.
fn label_block(side: Side, g: CellGenerator, h: CellGenerator) -> (Vertex, Vertex) {
    match side {
        Side::Left => (g.proj, h.proj),
        Side::Right => (h.proj, g.proj),
    }
}

/// A failing component of `d²` on a cell module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DSquaredFailure {
    pub from: usize,
    pub to: usize,
    pub value: String,
}

/// For every pair `(k, m)`: `d(x_km) + Σ_l x_kl x_lm` (left) or
/// `d(x_km) + Σ_l x_lm x_kl` (right) must vanish.
pub fn cell_d_squared_check(dg: &DgAlgebra, m: &CellModule) -> Vec<DSquaredFailure> {
    let n = m.generators.len();
    let mut failures = Vec::new();
    for k in 0..n {
        for t in 0..n {
            let mut total = match m.label(k, t) {
                Some(x) => dg.d(x),
                None => BitVec::zeros(dg.dim()),
            };
            for l in 0..n {
                if let (Some(a), Some(b)) = (m.label(k, l), m.label(l, t)) {
                    let p = match m.side {
                        Side::Left => dg.mul(a, b),
                        Side::Right => dg.mul(b, a),
                    };
                    total.xor_assign(&p);
                }
            }
            if !total.is_zero() {
                failures.push(DSquaredFailure {
                    from: k,
                    to: t,
                    value: dg.algebra().display(&total),
                });
            }
        }
    }
    failures
}

/// A finite cochain complex over GF(2) on an explicit graded basis.
#[derive(Clone, Debug)]
pub struct FiniteComplex {
    degrees: Vec<i32>,
    d: Vec<BitVec>,
}

impl FiniteComplex {
    /// `d[v]` is the image of basis vector `v`; it must have degree +1 and
    /// square to zero.
    pub fn new(degrees: Vec<i32>, d: Vec<BitVec>) -> Result<Self, DgError> {
        assert_eq!(degrees.len(), d.len());
        for (v, img) in d.iter().enumerate() {
            assert_eq!(img.len(), degrees.len());
            if img.ones().any(|w| degrees[w] != degrees[v] + 1) {
                return Err(DgError::ComplexDegree(v));
            }
        }
        let c = FiniteComplex { degrees, d };
        for v in 0..c.dim() {
            if !c.apply(&c.d[v]).is_zero() {
                return Err(DgError::ComplexDSquared(v));
            }
        }
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn differential(&self, v: usize) -> &BitVec {
        &self.d[v]
    }

    pub fn apply(&self, x: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.dim());
        for v in x.ones() {
            out.xor_assign(&self.d[v]);
        }
        out
    }

    fn indices_in_degree(&self, t: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&v| self.degrees[v] == t).collect()
    }

    pub fn homology(&self) -> Homology {
        let mut degrees: Vec<i32> = self.degrees.clone();
        degrees.sort_unstable();
        degrees.dedup();
        let mut by_degree = BTreeMap::new();
        for &t in &degrees {
            let here = self.indices_in_degree(t);
            let above = self.indices_in_degree(t + 1);
            let below = self.indices_in_degree(t - 1);
            let pos: HashMap<usize, usize> = above.iter().enumerate().map(|(a, &v)| (v, a)).collect();
            // matrix of d: C_t -> C_{t+1}, columns indexed by `here`
            let cols: Vec<BitVec> = here
                .iter()
                .map(|&v| BitVec::from_indices(above.len(), self.d[v].ones().map(|w| pos[&w])))
                .collect();
            let mat = BitMatrix::from_columns(above.len(), &cols);
            let kernel = mat.kernel();
            let mut ech = Echelon::tracked(self.dim());
            for &v in &below {
                ech.insert(&self.d[v]);
            }
            let boundary_count = ech.inserted();
            let mut reps = Vec::new();
            let mut rep_slots = Vec::new();
            for kv in kernel {
                let global = BitVec::from_indices(self.dim(), kv.ones().map(|a| here[a]));
                if !ech.contains(&global) {
                    rep_slots.push(ech.inserted());
                    ech.insert(&global);
                    reps.push(global);
                }
            }
            let _ = boundary_count;
            by_degree.insert(
                t,
                DegreeHomology {
                    representatives: reps,
                    slots: rep_slots,
                    echelon: ech,
                },
            );
        }
        Homology { by_degree }
    }
}

#[derive(Clone, Debug)]
struct DegreeHomology {
    representatives: Vec<BitVec>,
    slots: Vec<usize>,
    echelon: Echelon,
}

/// Homology of a [`FiniteComplex`], with representative cycles chosen by
/// deterministic pivoting and the ability to locate classes.
#[derive(Clone, Debug)]
pub struct Homology {
    by_degree: BTreeMap<i32, DegreeHomology>,
}

impl Homology {
    /// Nonzero homology dimensions by degree.
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.by_degree
            .iter()
            .filter(|(_, h)| !h.representatives.is_empty())
            .map(|(&t, h)| (t, h.representatives.len()))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.by_degree.values().map(|h| h.representatives.len()).sum()
    }

    pub fn representatives(&self, t: i32) -> &[BitVec] {
        self.by_degree
            .get(&t)
            .map(|h| h.representatives.as_slice())
            .unwrap_or(&[])
    }

    /// Coordinates of the class of `z` (a cycle of degree `t`) on the chosen
    /// representatives; `None` if `z` is not a cycle modulo boundaries of
    /// this degree.
    pub fn class_of(&self, t: i32, z: &BitVec) -> Option<BitVec> {
        let Some(h) = self.by_degree.get(&t) else {
            // no cells in this degree
            return z.is_zero().then(|| BitVec::zeros(0));
        };
        let c = h.echelon.coordinates(z)?;
        Some(BitVec::from_indices(
            h.slots.len(),
            h.slots.iter().enumerate().filter(|(_, &s)| c.get(s)).map(|(k, _)| k),
        ))
    }

    pub fn is_boundary(&self, t: i32, z: &BitVec) -> bool {
        self.class_of(t, z).is_some_and(|c| c.is_zero())
    }
}

/// A cell module unfolded over the algebra basis into a [`FiniteComplex`].
#[derive(Clone, Debug)]
pub struct Expansion {
    pub complex: FiniteComplex,
    /// `(generator, algebra basis index)` for each complex basis vector.
    pub cells: Vec<(usize, usize)>,
}

pub fn expand(dg: &DgAlgebra, m: &CellModule) -> Result<Expansion, DgError> {
    let alg = dg.algebra();
    let mut cells = Vec::new();
    let mut degrees = Vec::new();
    for (k, g) in m.generators.iter().enumerate() {
        for (b, e) in alg.basis().iter().enumerate() {
            let fits = match m.side {
                Side::Left => e.target == g.proj,
                Side::Right => e.source == g.proj,
            };
            if fits {
                cells.push((k, b));
                degrees.push(e.degree - g.shift);
            }
        }
    }
    let index: HashMap<(usize, usize), usize> = cells.iter().enumerate().map(|(c, &kb)| (kb, c)).collect();
    let dim = cells.len();
    let mut d = Vec::with_capacity(dim);
    for &(k, b) in &cells {
        let mut img = BitVec::zeros(dim);
        let eb = BitVec::unit(alg.dim(), b);
        let cell = |l: usize, x: usize| {
            index.get(&(l, x)).copied().ok_or_else(|| DgError::LeavesModule {
                generator: l,
                element: alg.basis()[x].word.clone(),
            })
        };
        for x in dg.d_basis(b).ones() {
            img.flip(cell(k, x)?);
        }
        for (&(_, l), label) in m.arrows.range((k, 0)..(k + 1, 0)) {
            let prod = match m.side {
                Side::Left => dg.mul(&eb, label),
                Side::Right => dg.mul(label, &eb),
            };
            for x in prod.ones() {
                img.flip(cell(l, x)?);
            }
        }
        d.push(img);
    }
    Ok(Expansion {
        complex: FiniteComplex::new(degrees, d)?,
        cells,
    })
}

fn word_coeffs(alg: &QuotientAlgebra, vs: &[Vertex]) -> Result<BitVec, DgError> {
    Ok(alg.word(&path(vs))?.coeffs().clone())
}

/// The explicit finite resolutions of the simple modules over `Aₙ^!`.
///
/// Left, `i < n`: `P_{i-1} → P_i[1]`-diamond with generators `P_{i-1}`,
/// `P_i[1]`, `P_{i+1}[1]`, `P_i`. Left, `i = n`: the ladder with `P_1..P_n`
/// and `P_1[-1]..P_{n-2}[-1]`. Right, `i < n`: generators `_iP[1]`,
/// `_{i-1}P[1]`, `_{i+1}P`, `_iP`. Right, `i = n`: `_{n-1}P[1] → _nP`.
pub fn build_resolution(dg: &DgAlgebra, i: usize, side: Side) -> Result<CellModule, DgError> {
    let alg = dg.algebra();
    let n = alg.quiver().vertices();
    if i == 0 || i > n {
        return Err(DgError::OutOfRange { index: i, max: n });
    }
    let mut gens = Vec::new();
    let mut arrows = BTreeMap::new();
    let add = |gens: &mut Vec<CellGenerator>, g: CellGenerator| -> usize {
        gens.push(g);
        gens.len() - 1
    };
    match (side, i < n) {
        (Side::Left, true) => {
            let prev = (i > 1).then(|| add(&mut gens, gen(i - 1, 0)));
            let mid = add(&mut gens, gen(i, 1));
            let next = add(&mut gens, gen(i + 1, 1));
            let last = add(&mut gens, gen(i, 0));
            arrows.insert((mid, next), word_coeffs(alg, &[i, i + 1])?);
            arrows.insert((next, last), word_coeffs(alg, &[i + 1, i])?);
            if let Some(p) = prev {
                arrows.insert((mid, p), word_coeffs(alg, &[i, i - 1])?);
                arrows.insert((p, last), word_coeffs(alg, &[i - 1, i])?);
                arrows.insert((p, next), word_coeffs(alg, &[i - 1, i, i + 1])?);
            }
        }
        (Side::Left, false) => {
            let top: Vec<usize> = (1..=n).map(|j| add(&mut gens, gen(j, 0))).collect();
            let low: Vec<usize> = (1..=n.saturating_sub(2)).map(|j| add(&mut gens, gen(j, -1))).collect();
            for j in 1..n {
                arrows.insert((top[j - 1], top[j]), word_coeffs(alg, &[j, j + 1])?);
            }
            for j in 2..n {
                arrows.insert((top[j - 1], low[j - 2]), word_coeffs(alg, &[j, j - 1])?);
            }
            for j in 1..=n.saturating_sub(2) {
                arrows.insert((top[j - 1], low[j - 1]), word_coeffs(alg, &[j])?);
                arrows.insert((low[j - 1], top[j + 1]), word_coeffs(alg, &[j, j + 1, j + 2])?);
            }
            for j in 1..n.saturating_sub(2) {
                arrows.insert((low[j - 1], low[j]), word_coeffs(alg, &[j, j + 1])?);
            }
        }
        (Side::Right, true) => {
            let first = add(&mut gens, gen(i, 1));
            let prev = (i > 1).then(|| add(&mut gens, gen(i - 1, 1)));
            let next = add(&mut gens, gen(i + 1, 0));
            let last = add(&mut gens, gen(i, 0));
            arrows.insert((first, next), word_coeffs(alg, &[i + 1, i])?);
            arrows.insert((next, last), word_coeffs(alg, &[i, i + 1])?);
            if let Some(p) = prev {
                arrows.insert((first, p), word_coeffs(alg, &[i - 1, i])?);
                arrows.insert((p, last), word_coeffs(alg, &[i, i - 1])?);
                arrows.insert((next, p), word_coeffs(alg, &[i - 1, i, i + 1])?);
            }
        }
        (Side::Right, false) => {
            let a = add(&mut gens, gen(n - 1, 1));
            let b = add(&mut gens, gen(n, 0));
            arrows.insert((a, b), word_coeffs(alg, &[n, n - 1])?);
        }
    }
    CellModule::new(dg, side, gens, arrows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionReport {
    pub vertex: Vertex,
    pub side: Side,
    pub generators: usize,
    pub d_squared_failures: Vec<DSquaredFailure>,
    pub homology: BTreeMap<i32, usize>,
    /// The homology class pairs nontrivially with the augmentation at the
    /// final unshifted projective.
    pub augmentation_ok: bool,
    /// Idempotents act on the homology as on the simple at `vertex`.
    pub support_ok: bool,
}

impl ResolutionReport {
    pub fn passed(&self) -> bool {
        self.d_squared_failures.is_empty()
            && self.homology == BTreeMap::from([(0, 1)])
            && self.augmentation_ok
            && self.support_ok
    }
}

/// Check that `m` is a DG module quasi-isomorphic to the simple at `vertex`.
pub fn verify_cell_resolution(dg: &DgAlgebra, m: &CellModule, vertex: Vertex) -> ResolutionReport {
    let failures = cell_d_squared_check(dg, m);
    let mut report = ResolutionReport {
        vertex,
        side: m.side,
        generators: m.generators.len(),
        d_squared_failures: failures,
        homology: BTreeMap::new(),
        augmentation_ok: false,
        support_ok: false,
    };
    if !report.d_squared_failures.is_empty() {
        return report;
    }
    let Ok(ex) = expand(dg, m) else {
        return report;
    };
    let alg = dg.algebra();
    let h = ex.complex.homology();
    report.homology = h.dims();
    let (Some(fin), Ok(unit)) = (m.final_generator(vertex), alg.idempotent(vertex)) else {
        return report;
    };
    let unit_b = unit.coeffs().first_one().unwrap();
    let Some(target_cell) = ex.cells.iter().position(|&c| c == (fin, unit_b)) else {
        return report;
    };
    // the augmentation functional must vanish on boundaries of degree 0
    let kills_boundaries = (0..ex.complex.dim())
        .filter(|&v| ex.complex.degrees()[v] == -1)
        .all(|v| !ex.complex.differential(v).get(target_cell));
    let reps = h.representatives(0);
    report.augmentation_ok = kills_boundaries && reps.len() == 1 && reps[0].get(target_cell);
    if reps.len() == 1 {
        report.support_ok = alg.vertex_set().iter().all(|&j| {
            let acted = BitVec::from_indices(
                ex.complex.dim(),
                reps[0].ones().filter(|&c| {
                    let b = &alg.basis()[ex.cells[c].1];
                    match m.side {
                        Side::Left => b.source == j,
                        Side::Right => b.target == j,
                    }
                }),
            );
            // (j)·[z] equals [z] at the vertex and vanishes elsewhere
            let mut diff = acted.clone();
            if j == vertex {
                diff.xor_assign(&reps[0]);
            }
            h.is_boundary(0, &diff)
        });
    }
    report
}

pub fn verify_resolution(dg: &DgAlgebra, i: usize, side: Side) -> Result<ResolutionReport, DgError> {
    let m = build_resolution(dg, i, side)?;
    Ok(verify_cell_resolution(dg, &m, i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complex(degrees: Vec<i32>, edges: &[(usize, usize)]) -> FiniteComplex {
        let dim = degrees.len();
        let mut d = vec![BitVec::zeros(dim); dim];
        for &(a, b) in edges {
            d[a].flip(b);
        }
        FiniteComplex::new(degrees, d).unwrap()
    }

    #[test]
    fn identity_complex_is_acyclic() {
        let c = complex(vec![0, 1], &[(0, 1)]);
        assert_eq!(c.homology().total_dim(), 0);
    }

    #[test]
    fn zero_differential_keeps_everything() {
        let c = complex(vec![0, 0, 1, 3], &[]);
        assert_eq!(c.homology().dims(), BTreeMap::from([(0, 2), (1, 1), (3, 1)]));
    }

    #[test]
    fn bad_complexes_rejected() {
        let mut d = vec![BitVec::zeros(2); 2];
        d[0].flip(1);
        assert!(matches!(
            FiniteComplex::new(vec![0, 0], d),
            Err(DgError::ComplexDegree(0))
        ));
        let mut d = vec![BitVec::zeros(3); 3];
        d[0].flip(1);
        d[1].flip(2);
        assert!(matches!(
            FiniteComplex::new(vec![0, 1, 2], d),
            Err(DgError::ComplexDSquared(0))
        ));
    }

    #[test]
    fn class_of_locates_cycles() {
        // a -> b, c isolated: H = <c> in degree 0
        let c = complex(vec![-1, 0, 0], &[(0, 1)]);
        let h = c.homology();
        assert_eq!(h.dims(), BTreeMap::from([(0, 1)]));
        assert!(h.is_boundary(0, &BitVec::unit(3, 1)));
        let mut z = BitVec::unit(3, 1);
        z.flip(2);
        assert_eq!(h.class_of(0, &z).unwrap(), BitVec::unit(1, 0));
    }

    #[test]
    fn shriek_derivation_formulas() {
        for n in 2..=6 {
            let dg = an_shriek_dg(n).unwrap();
            let alg = dg.algebra();
            for i in 1..n {
                let up = alg.word(&path(&[i, i + 1])).unwrap();
                let lhs = dg.d(up.coeffs());
                let ci = if i == 1 { path(&[1, 2, 1]) } else { path(&[i, i - 1, i]) };
                let c = alg.word(&ci).unwrap();
                assert_eq!(&lhs, alg.multiply(&c, &up).unwrap().coeffs());
                let c_next = alg.word(&path(&[i + 1, i, i + 1])).unwrap();
                assert_eq!(&lhs, alg.multiply(&up, &c_next).unwrap().coeffs());
                // d(c) = c·c for the loop c = (i|i+1|i)
                let loop_up = alg.word(&path(&[i, i + 1, i])).unwrap();
                let sq = alg.multiply(&loop_up, &loop_up).unwrap();
                assert_eq!(&dg.d(loop_up.coeffs()), sq.coeffs());
                if i == 1 {
                    assert!(sq.is_zero());
                }
            }
        }
    }

    #[test]
    fn zero_derivation_is_valid() {
        let alg = build_named_algebra(NamedAlgebra::An, 4).unwrap();
        let dg = make_derivation(alg, &[]).unwrap();
        assert!(dg.check_d_squared().is_none());
    }

    #[test]
    fn wrong_degree_value_rejected() {
        let alg = build_named_algebra(NamedAlgebra::AnShriek, 3).unwrap();
        let v = alg.word(&path(&[1, 2])).unwrap().coeffs().clone();
        assert!(matches!(
            make_derivation(alg, &[(path(&[1, 2]), v)]),
            Err(DgError::BadDerivationValue { .. })
        ));
    }

    #[test]
    fn inconsistent_derivation_rejected() {
        use crate::quiver::{enumerate_basis, Arrow, Quiver, Relation};
        let arrow = |source, target, degree| Arrow { source, target, degree };
        let q = Quiver::new(4, vec![arrow(1, 2, 0), arrow(2, 4, 0), arrow(1, 3, 1), arrow(3, 2, 0)]).unwrap();
        let alg = enumerate_basis(&q, &[Relation::zero(path(&[1, 2, 4]))], None).unwrap();
        // d(1|2) = (1|3|2) sends the relation to (1|3|2|4), which survives
        let v = alg.word(&path(&[1, 3, 2])).unwrap().coeffs().clone();
        assert!(matches!(
            make_derivation(alg, &[(path(&[1, 2]), v)]),
            Err(DgError::NotWellDefined { relation: 0, .. })
        ));
    }

    #[test]
    fn resolution_shapes() {
        let dg = an_shriek_dg(5).unwrap();
        let m = build_resolution(&dg, 3, Side::Left).unwrap();
        assert_eq!((m.generators().len(), m.arrows().len()), (4, 5));
        let m = build_resolution(&dg, 5, Side::Right).unwrap();
        assert_eq!(m.generators().len(), 2);
        let label = m.arrows().values().next().unwrap();
        assert_eq!(dg.algebra().display(label), "(5|4)");
        let m = build_resolution(&dg, 5, Side::Left).unwrap();
        assert_eq!(m.generators().len(), 8);
        assert!(build_resolution(&dg, 6, Side::Left).is_err());
        assert!(build_resolution(&dg, 0, Side::Right).is_err());
    }

    #[test]
    fn all_resolutions_verify() {
        for n in 2..=5 {
            let dg = an_shriek_dg(n).unwrap();
            for i in 1..=n {
                for side in [Side::Left, Side::Right] {
                    let r = verify_resolution(&dg, i, side).unwrap();
                    assert!(r.passed(), "n={n} i={i} {side:?}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn dropping_long_arrow_breaks_resolution() {
        let dg = an_shriek_dg(4).unwrap();
        let m = build_resolution(&dg, 2, Side::Left).unwrap();
        let p = m.find(1, 0).unwrap();
        let q = m.find(3, 1).unwrap();
        let broken = m.without_arrow(p, q);
        assert!(!verify_cell_resolution(&dg, &broken, 2).passed());
        assert!(!cell_d_squared_check(&dg, &broken).is_empty());
    }

    #[test]
    fn single_generator_with_nonclosed_label_fails() {
        // P_2 -> P_3 labelled by (2|3), which is not closed
        let dg = an_shriek_dg(3).unwrap();
        let alg = dg.algebra();
        let label = alg.word(&path(&[2, 3])).unwrap().coeffs().clone();
        assert!(!dg.d(&label).is_zero());
        let m = CellModule::new(
            &dg,
            Side::Left,
            vec![gen(2, 0), gen(3, 0)],
            BTreeMap::from([((0, 1), label)]),
        )
        .unwrap();
        let f = cell_d_squared_check(&dg, &m);
        assert_eq!(f.len(), 1);
        assert_eq!((f[0].from, f[0].to), (0, 1));
    }

    #[test]
    fn closed_label_module_passes() {
        let dg = an_shriek_dg(3).unwrap();
        let label = dg.algebra().word(&path(&[2, 1])).unwrap().coeffs().clone();
        assert!(dg.d(&label).is_zero());
        let m = CellModule::new(
            &dg,
            Side::Left,
            vec![gen(2, 1), gen(1, 0)],
            BTreeMap::from([((0, 1), label)]),
        )
        .unwrap();
        assert!(cell_d_squared_check(&dg, &m).is_empty());
    }

    #[test]
    fn shift_moves_homology_down() {
        let dg = an_shriek_dg(4).unwrap();
        let m = build_resolution(&dg, 2, Side::Left).unwrap();
        let h0 = expand(&dg, &m).unwrap().complex.homology().dims();
        let h1 = expand(&dg, &m.shifted(1)).unwrap().complex.homology().dims();
        let moved: BTreeMap<i32, usize> = h0.iter().map(|(&t, &d)| (t - 1, d)).collect();
        assert_eq!(h1, moved);
    }

    #[test]
    fn label_degree_validated() {
        let dg = an_shriek_dg(3).unwrap();
        let label = dg.algebra().word(&path(&[2, 1])).unwrap().coeffs().clone();
        assert!(matches!(
            CellModule::new(
                &dg,
                Side::Left,
                vec![gen(2, 0), gen(1, 0)],
                BTreeMap::from([((0, 1), label)])
            ),
            Err(DgError::BadLabel { .. })
        ));
    }
}
