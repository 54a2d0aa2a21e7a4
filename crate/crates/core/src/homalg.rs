//! Morphism complexes between cell modules, composition of DG maps, Ext
//! tables and the evaluation of cup/cap functors on simple modules.
//!
//! A map `f: M → N` of degree `D` between left cell modules is a matrix of
//! labels: `f(g_k) = Σ_l y_kl h_l` with `y_kl ∈ (p_k)A(q_l)` of degree
//! `D + t_l - s_k`, where `s`, `t` are the generator shifts of `M`, `N`.
//! For right modules `f(g_k) = Σ_l h_l y_kl` with `y_kl ∈ (q_l)A(p_k)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::dgalg::{build_resolution, CellModule, DgAlgebra, DgError, FiniteComplex, Homology, Side};
use crate::gf2lin::BitVec;
use crate::quiver::Vertex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomError {
    #[error(transparent)]
    Dg(#[from] DgError),
    #[error("modules have different sides")]
    SideMismatch,
    #[error("the maps are not composable")]
    NotComposable,
    #[error("maps have different source, target or degree")]
    Incompatible,
    #[error("component ({from}, {to}) does not lie in the right block and degree")]
    BadComponent { from: usize, to: usize },
}

/// A homogeneous map between two cell modules over the same DG algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgMap {
    source: Arc<CellModule>,
    target: Arc<CellModule>,
    degree: i32,
    comps: BTreeMap<(usize, usize), BitVec>,
}

fn component_block(side: Side, m: &CellModule, n: &CellModule, k: usize, l: usize) -> (Vertex, Vertex) {
    let (p, q) = (m.generators()[k].proj, n.generators()[l].proj);
    match side {
        Side::Left => (p, q),
        Side::Right => (q, p),
    }
}

fn component_degree(m: &CellModule, n: &CellModule, degree: i32, k: usize, l: usize) -> i32 {
    degree + n.generators()[l].shift - m.generators()[k].shift
}

impl DgMap {
    pub fn new(
        dg: &DgAlgebra,
        source: Arc<CellModule>,
        target: Arc<CellModule>,
        degree: i32,
        comps: BTreeMap<(usize, usize), BitVec>,
    ) -> Result<Self, HomError> {
        if source.side() != target.side() {
            return Err(HomError::SideMismatch);
        }
        let alg = dg.algebra();
        for (&(k, l), y) in &comps {
            if k >= source.generators().len() || l >= target.generators().len() {
                return Err(HomError::BadComponent { from: k, to: l });
            }
            let (s, t) = component_block(source.side(), &source, &target, k, l);
            let deg = component_degree(&source, &target, degree, k, l);
            let ok = y.ones().all(|b| {
                let e = &alg.basis()[b];
                e.source == s && e.target == t && e.degree == deg
            });
            if !ok {
                return Err(HomError::BadComponent { from: k, to: l });
            }
        }
        Ok(DgMap {
            source,
            target,
            degree,
            comps: comps.into_iter().filter(|(_, y)| !y.is_zero()).collect(),
        })
    }

    pub fn zero(source: Arc<CellModule>, target: Arc<CellModule>, degree: i32) -> Self {
        DgMap {
            source,
            target,
            degree,
            comps: BTreeMap::new(),
        }
    }

    pub fn identity(dg: &DgAlgebra, m: Arc<CellModule>) -> Self {
        let alg = dg.algebra();
        let comps = m
            .generators()
            .iter()
            .enumerate()
            .map(|(k, g)| ((k, k), alg.idempotent(g.proj).expect("valid vertex").coeffs().clone()))
            .collect();
        DgMap {
            source: m.clone(),
            target: m,
            degree: 0,
            comps,
        }
    }

    pub fn source(&self) -> &Arc<CellModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CellModule> {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn components(&self) -> &BTreeMap<(usize, usize), BitVec> {
        &self.comps
    }

    pub fn component(&self, k: usize, l: usize) -> Option<&BitVec> {
        self.comps.get(&(k, l))
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add(&self, other: &DgMap) -> Result<DgMap, HomError> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree {
            return Err(HomError::Incompatible);
        }
        let mut comps = self.comps.clone();
        for (key, y) in &other.comps {
            let e = comps.entry(*key).or_insert_with(|| BitVec::zeros(y.len()));
            e.xor_assign(y);
        }
        comps.retain(|_, y| !y.is_zero());
        Ok(DgMap { comps, ..self.clone() })
    }

    /// Replace one component. Used to build negative controls.
    pub fn with_component(&self, k: usize, l: usize, value: BitVec) -> DgMap {
        let mut m = self.clone();
        if value.is_zero() {
            m.comps.remove(&(k, l));
        } else {
            m.comps.insert((k, l), value);
        }
        m
    }
}

/// Human-readable component list, e.g. `P2[1]->P3[1]: (2|3)`.
pub fn describe_map(dg: &DgAlgebra, f: &DgMap) -> String {
    if f.is_zero() {
        return "0".into();
    }
    f.comps
        .iter()
        .map(|(&(k, l), y)| {
            let a = f.source.generators()[k];
            let b = f.target.generators()[l];
            format!(
                "P{}[{}]->P{}[{}]: {}",
                a.proj,
                a.shift,
                b.proj,
                b.shift,
                dg.algebra().display(y)
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// `d(f) = d_N ∘ f + f ∘ d_M`.
pub fn map_differential(dg: &DgAlgebra, f: &DgMap) -> DgMap {
    let (m, n) = (&f.source, &f.target);
    let side = m.side();
    let mut comps: BTreeMap<(usize, usize), BitVec> = BTreeMap::new();
    let mut add = |key: (usize, usize), v: BitVec| {
        let e = comps.entry(key).or_insert_with(|| BitVec::zeros(v.len()));
        e.xor_assign(&v);
    };
    for (&(k, l), y) in &f.comps {
        add((k, l), dg.d(y));
        for (&(_, t), z) in n.arrows().range((l, 0)..(l + 1, 0)) {
            let p = match side {
                Side::Left => dg.mul(y, z),
                Side::Right => dg.mul(z, y),
            };
            add((k, t), p);
        }
    }
    for (&(k, l), x) in m.arrows() {
        for (&(_, t), y) in f.comps.range((l, 0)..(l + 1, 0)) {
            let p = match side {
                Side::Left => dg.mul(x, y),
                Side::Right => dg.mul(y, x),
            };
            add((k, t), p);
        }
    }
    comps.retain(|_, y| !y.is_zero());
    DgMap {
        source: f.source.clone(),
        target: f.target.clone(),
        degree: f.degree + 1,
        comps,
    }
}

/// `f ∘ g`, with `g` applied first.
pub fn compose(dg: &DgAlgebra, f: &DgMap, g: &DgMap) -> Result<DgMap, HomError> {
    if g.target != f.source {
        return Err(HomError::NotComposable);
    }
    let side = g.source.side();
    let mut comps: BTreeMap<(usize, usize), BitVec> = BTreeMap::new();
    for (&(k, l), yg) in &g.comps {
        for (&(_, m), yf) in f.comps.range((l, 0)..(l + 1, 0)) {
            let p = match side {
                Side::Left => dg.mul(yg, yf),
                Side::Right => dg.mul(yf, yg),
            };
            let e = comps.entry((k, m)).or_insert_with(|| BitVec::zeros(p.len()));
            e.xor_assign(&p);
        }
    }
    comps.retain(|_, y| !y.is_zero());
    Ok(DgMap {
        source: g.source.clone(),
        target: f.target.clone(),
        degree: f.degree + g.degree,
        comps,
    })
}

/// An elementary map `b·E_kl`: one component, a single basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Elementary {
    pub from: usize,
    pub to: usize,
    pub basis: usize,
}

/// The graded space of all maps `M → N` with `d(f) = d∘f + f∘d`.
#[derive(Clone, Debug)]
pub struct HomComplex {
    source: Arc<CellModule>,
    target: Arc<CellModule>,
    basis: Vec<Elementary>,
    index: HashMap<(usize, usize, usize), usize>,
    complex: FiniteComplex,
}

pub fn hom_complex(dg: &DgAlgebra, source: Arc<CellModule>, target: Arc<CellModule>) -> Result<HomComplex, HomError> {
    if source.side() != target.side() {
        return Err(HomError::SideMismatch);
    }
    let alg = dg.algebra();
    let side = source.side();
    let mut basis = Vec::new();
    let mut degrees = Vec::new();
    for k in 0..source.generators().len() {
        for l in 0..target.generators().len() {
            let (s, t) = component_block(side, &source, &target, k, l);
            for b in alg.block_indices(s, t) {
                basis.push(Elementary {
                    from: k,
                    to: l,
                    basis: b,
                });
                degrees.push(alg.basis()[b].degree - target.generators()[l].shift + source.generators()[k].shift);
            }
        }
    }
    let index: HashMap<(usize, usize, usize), usize> = basis
        .iter()
        .enumerate()
        .map(|(i, e)| ((e.from, e.to, e.basis), i))
        .collect();
    let dim = basis.len();
    let mut d = Vec::with_capacity(dim);
    for (e, &deg) in basis.iter().zip(&degrees) {
        let f = DgMap {
            source: source.clone(),
            target: target.clone(),
            degree: deg,
            comps: BTreeMap::from([((e.from, e.to), BitVec::unit(alg.dim(), e.basis))]),
        };
        let df = map_differential(dg, &f);
        let mut img = BitVec::zeros(dim);
        for (&(k, l), y) in &df.comps {
            for b in y.ones() {
                img.flip(index[&(k, l, b)]);
            }
        }
        d.push(img);
    }
    let complex = FiniteComplex::new(degrees, d)?;
    Ok(HomComplex {
        source,
        target,
        basis,
        index,
        complex,
    })
}

impl HomComplex {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn complex(&self) -> &FiniteComplex {
        &self.complex
    }

    pub fn basis(&self) -> &[Elementary] {
        &self.basis
    }

    pub fn source(&self) -> &Arc<CellModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CellModule> {
        &self.target
    }

    pub fn to_vector(&self, f: &DgMap) -> Result<BitVec, HomError> {
        if f.source != self.source || f.target != self.target {
            return Err(HomError::Incompatible);
        }
        let mut v = BitVec::zeros(self.dim());
        for (&(k, l), y) in &f.comps {
            for b in y.ones() {
                v.flip(self.index[&(k, l, b)]);
            }
        }
        Ok(v)
    }

    /// The map with coordinates `v`; all its elementary terms must share
    /// `degree`.
    pub fn from_vector(&self, dg: &DgAlgebra, v: &BitVec, degree: i32) -> DgMap {
        let mut comps: BTreeMap<(usize, usize), BitVec> = BTreeMap::new();
        for i in v.ones() {
            let e = self.basis[i];
            debug_assert_eq!(self.complex.degrees()[i], degree);
            comps
                .entry((e.from, e.to))
                .or_insert_with(|| BitVec::zeros(dg.dim()))
                .flip(e.basis);
        }
        DgMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree,
            comps,
        }
    }

    pub fn homology(&self) -> Homology {
        self.complex.homology()
    }
}

/// Cached resolutions `ℙ(L_i)` (left) or `ℙ(_iL)` (right) for `1 ≤ i ≤ n`.
#[derive(Clone, Debug)]
pub struct Resolutions {
    pub side: Side,
    modules: Vec<Arc<CellModule>>,
}

impl Resolutions {
    pub fn new(dg: &DgAlgebra, side: Side) -> Result<Self, HomError> {
        let n = dg.algebra().quiver().vertices();
        let modules = (1..=n)
            .map(|i| build_resolution(dg, i, side).map(Arc::new))
            .collect::<Result<_, _>>()?;
        Ok(Resolutions { side, modules })
    }

    /// The resolution of the simple at `i` (1-based).
    pub fn get(&self, i: Vertex) -> &Arc<CellModule> {
        &self.modules[i - 1]
    }

    pub fn n(&self) -> usize {
        self.modules.len()
    }
}

/// Homology dimensions of `HOM(ℙ(L_j), ℙ(L_i))`, i.e. of the block
/// `1_i E 1_j`.
pub fn ext_table(dg: &DgAlgebra, res: &Resolutions, i: Vertex, j: Vertex) -> Result<BTreeMap<i32, usize>, HomError> {
    let h = hom_complex(dg, res.get(j).clone(), res.get(i).clone())?;
    Ok(h.homology().dims())
}

/// Both ways of evaluating `𝔘_i^!` on a simple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CupCap {
    /// Homology of `ℙ(_iL) ⊗ L_j` by complex degree.
    pub tensor_degrees: BTreeMap<i32, usize>,
    /// Homology of `HOM(ℙ(L_i), L_j)` by degree `l`; the copy of `L_i`
    /// contributed by `Ext^l` is `L_i[l]`.
    pub shifts: BTreeMap<i32, usize>,
}

/// The complex spanned by the generators of `m` with projective index `j`,
/// with differential the idempotent part of the arrow labels. `transpose`
/// reverses the arrows (maps into a simple are dual to generators).
fn reduce_mod_augmentation(
    dg: &DgAlgebra,
    m: &CellModule,
    j: Vertex,
    degree_of_shift: impl Fn(i32) -> i32,
    transpose: bool,
) -> Result<BTreeMap<i32, usize>, HomError> {
    let alg = dg.algebra();
    let unit = alg.idempotent(j).map_err(DgError::from)?.coeffs().first_one().unwrap();
    let cells: Vec<usize> = (0..m.generators().len())
        .filter(|&k| m.generators()[k].proj == j)
        .collect();
    let pos: HashMap<usize, usize> = cells.iter().enumerate().map(|(a, &k)| (k, a)).collect();
    let degrees: Vec<i32> = cells
        .iter()
        .map(|&k| degree_of_shift(m.generators()[k].shift))
        .collect();
    let mut d = vec![BitVec::zeros(cells.len()); cells.len()];
    for (&(k, l), x) in m.arrows() {
        if let (Some(&a), Some(&b)) = (pos.get(&k), pos.get(&l)) {
            if x.get(unit) {
                if transpose {
                    d[b].flip(a);
                } else {
                    d[a].flip(b);
                }
            }
        }
    }
    Ok(FiniteComplex::new(degrees, d)?.homology().dims())
}

/// Multiplicities of the shifted copies of `L_i` in `𝔘_i^!(L_j)`.
pub fn cupcap_on_simple(
    dg: &DgAlgebra,
    left: &Resolutions,
    right: &Resolutions,
    i: Vertex,
    j: Vertex,
) -> Result<CupCap, HomError> {
    let n = right.n();
    if i == 0 || i >= n || j == 0 || j > n {
        return Err(HomError::Dg(DgError::OutOfRange {
            index: i.max(j),
            max: n,
        }));
    }
    // generator of _jP[s] in ℙ(_iL) ⊗ L_j sits in degree -s
    let tensor_degrees = reduce_mod_augmentation(dg, right.get(i), j, |s| -s, false)?;
    // a generator P_j[s] of ℙ(L_i) contributes a map of degree s into L_j
    let shifts = reduce_mod_augmentation(dg, left.get(i), j, |s| s, true)?;
    Ok(CupCap { tensor_degrees, shifts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgalg::an_shriek_dg;
    use crate::quiver::{build_named_algebra, NamedAlgebra};

    fn setup(n: usize) -> (DgAlgebra, Resolutions) {
        let dg = an_shriek_dg(n).unwrap();
        let res = Resolutions::new(&dg, Side::Left).unwrap();
        (dg, res)
    }

    #[test]
    fn identity_is_a_cycle_and_not_a_boundary() {
        let (dg, res) = setup(4);
        for i in 1..=4 {
            let m = res.get(i).clone();
            let h = hom_complex(&dg, m.clone(), m.clone()).unwrap();
            let id = DgMap::identity(&dg, m);
            assert!(map_differential(&dg, &id).is_zero());
            let v = h.to_vector(&id).unwrap();
            assert!(!h.homology().is_boundary(0, &v));
        }
    }

    #[test]
    fn hom_d_squared_and_leibniz() {
        let (dg, res) = setup(4);
        for i in 1..=4 {
            for j in 1..=4 {
                let h = hom_complex(&dg, res.get(j).clone(), res.get(i).clone()).unwrap();
                let _ = h.complex();
            }
        }
        // Leibniz for composition on all elementary pairs of two blocks
        let a = hom_complex(&dg, res.get(2).clone(), res.get(3).clone()).unwrap();
        let b = hom_complex(&dg, res.get(3).clone(), res.get(2).clone()).unwrap();
        for (ia, _) in a.basis().iter().enumerate() {
            let f = a.from_vector(&dg, &BitVec::unit(a.dim(), ia), a.complex().degrees()[ia]);
            for (ib, _) in b.basis().iter().enumerate() {
                let g = b.from_vector(&dg, &BitVec::unit(b.dim(), ib), b.complex().degrees()[ib]);
                let fg = compose(&dg, &g, &f).unwrap();
                let lhs = map_differential(&dg, &fg);
                let r1 = compose(&dg, &map_differential(&dg, &g), &f).unwrap();
                let r2 = compose(&dg, &g, &map_differential(&dg, &f)).unwrap();
                assert_eq!(lhs, r1.add(&r2).unwrap());
            }
        }
    }

    #[test]
    fn far_blocks_have_no_homology() {
        let (dg, res) = setup(6);
        for i in 1..=5usize {
            for j in 1..=5 {
                if i.abs_diff(j) > 1 {
                    assert!(ext_table(&dg, &res, i, j).unwrap().is_empty(), "({i},{j})");
                }
            }
        }
    }

    #[test]
    fn ext_examples() {
        let (dg, res) = setup(5);
        for i in 1..5 {
            assert_eq!(ext_table(&dg, &res, i, i).unwrap().values().sum::<usize>(), 2);
        }
        for i in 1..=3 {
            assert!(ext_table(&dg, &res, 5, i).unwrap().is_empty());
        }
        assert_eq!(ext_table(&dg, &res, 5, 5).unwrap(), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn ext_matches_an_blocks() {
        for n in 2..=5 {
            let (dg, res) = setup(n);
            let an = build_named_algebra(NamedAlgebra::An, n).unwrap();
            for i in 1..=n {
                for j in 1..=n {
                    let expect: BTreeMap<i32, usize> = an
                        .idempotent_block(i, j)
                        .unwrap()
                        .into_iter()
                        .map(|(d, v)| (d, v.len()))
                        .collect();
                    assert_eq!(ext_table(&dg, &res, i, j).unwrap(), expect, "n={n} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn composition_with_identity() {
        let (dg, res) = setup(4);
        let a = hom_complex(&dg, res.get(2).clone(), res.get(3).clone()).unwrap();
        let id2 = DgMap::identity(&dg, res.get(2).clone());
        let id3 = DgMap::identity(&dg, res.get(3).clone());
        for k in 0..a.dim() {
            let f = a.from_vector(&dg, &BitVec::unit(a.dim(), k), a.complex().degrees()[k]);
            assert_eq!(compose(&dg, &id3, &f).unwrap(), f);
            assert_eq!(compose(&dg, &f, &id2).unwrap(), f);
        }
        assert_eq!(compose(&dg, &id2, &f_dummy(&a, &dg)), Err(HomError::NotComposable));
    }

    fn f_dummy(a: &HomComplex, dg: &DgAlgebra) -> DgMap {
        a.from_vector(dg, &BitVec::zeros(a.dim()), 0)
    }

    #[test]
    fn cupcap_table() {
        for n in 3..=6 {
            let dg = an_shriek_dg(n).unwrap();
            let left = Resolutions::new(&dg, Side::Left).unwrap();
            let right = Resolutions::new(&dg, Side::Right).unwrap();
            for i in 1..n {
                for j in 1..=n {
                    let c = cupcap_on_simple(&dg, &left, &right, i, j).unwrap();
                    let (tensor, shifts): (Vec<(i32, usize)>, Vec<_>) = if i == j {
                        (vec![(-1, 1), (0, 1)], vec![(0, 1), (1, 1)])
                    } else if j + 1 == i {
                        (vec![(-1, 1)], vec![(0, 1)])
                    } else if j == i + 1 {
                        (vec![(0, 1)], vec![(1, 1)])
                    } else {
                        (vec![], vec![])
                    };
                    assert_eq!(c.tensor_degrees, tensor.into_iter().collect(), "n={n} {i} {j}");
                    assert_eq!(c.shifts, shifts.into_iter().collect(), "n={n} {i} {j}");
                    // the tensor route is the Hom route shifted by one
                    let moved: BTreeMap<i32, usize> = c.tensor_degrees.iter().map(|(&t, &m)| (t + 1, m)).collect();
                    assert_eq!(moved, c.shifts);
                }
            }
        }
    }
}
