//! Quiver path algebras and their graded quotients over GF(2).
//!
//! Paths are written as vertex sequences `(i₁|i₂|…|i_r)` and multiply by
//! concatenation: `(…|a)·(a|…)` glues, anything else is zero. A quotient by a
//! length-homogeneous ideal is built one path length at a time: the quotient
//! in length `ℓ+1` is spanned by (normal words of length `ℓ`)·(arrow), modulo
//! the images of the relations. Normal words are the non-pivot columns of a
//! Gaussian elimination in which candidate words are ordered
//! lexicographically, so the smaller word of a binomial relation is the one
//! rewritten.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2lin::{BitVec, Echelon};

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("vertex {0} is out of range")]
    InvalidVertex(Vertex),
    #[error("{0} is not a path in the quiver")]
    NotAPath(PathWord),
    #[error("quiver has two arrows {0} -> {1}; paths must be determined by their vertices")]
    ParallelArrows(Vertex, Vertex),
    #[error("relation {0} is not homogeneous in length, degree and endpoints")]
    InhomogeneousRelation(usize),
    #[error("quotient did not terminate below path length {ceiling}")]
    CeilingExceeded { ceiling: usize },
    #[error("elements belong to different algebras")]
    MixedAlgebras,
    #[error("n must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("unknown algebra name {0:?}")]
    UnknownName(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub source: Vertex,
    pub target: Vertex,
    pub degree: i32,
}

/// A finite quiver on vertices `1..=vertices` with at most one arrow between
/// any ordered pair of vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: usize,
    arrows: Vec<Arrow>,
    lookup: HashMap<(Vertex, Vertex), usize>,
}

impl Quiver {
    pub fn new(vertices: usize, arrows: Vec<Arrow>) -> Result<Self, AlgebraError> {
        let mut lookup = HashMap::new();
        for (k, a) in arrows.iter().enumerate() {
            for v in [a.source, a.target] {
                if v == 0 || v > vertices {
                    return Err(AlgebraError::InvalidVertex(v));
                }
            }
            if lookup.insert((a.source, a.target), k).is_some() {
                return Err(AlgebraError::ParallelArrows(a.source, a.target));
            }
        }
        Ok(Quiver {
            vertices,
            arrows,
            lookup,
        })
    }

    /// The doubled line quiver `1 ⇄ 2 ⇄ … ⇄ n`, with `(i|i+1)` in degree
    /// `up` and `(i+1|i)` in degree `down`.
    pub fn doubled_line(n: usize, up: i32, down: i32) -> Self {
        let mut arrows = Vec::new();
        for i in 1..n {
            arrows.push(Arrow {
                source: i,
                target: i + 1,
                degree: up,
            });
            arrows.push(Arrow {
                source: i + 1,
                target: i,
                degree: down,
            });
        }
        Quiver::new(n, arrows).expect("line quiver is valid")
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_between(&self, s: Vertex, t: Vertex) -> Option<&Arrow> {
        self.lookup.get(&(s, t)).map(|&k| &self.arrows[k])
    }

    pub fn arrows_from(&self, s: Vertex) -> impl Iterator<Item = (usize, &Arrow)> {
        self.arrows.iter().enumerate().filter(move |(_, a)| a.source == s)
    }

    /// Internal degree of `word`, or an error if it is not a path.
    pub fn degree(&self, word: &PathWord) -> Result<i32, AlgebraError> {
        let v = word.vertices();
        if v.is_empty() {
            return Err(AlgebraError::NotAPath(word.clone()));
        }
        for &x in v {
            if x == 0 || x > self.vertices {
                return Err(AlgebraError::InvalidVertex(x));
            }
        }
        v.windows(2)
            .map(|w| {
                self.arrow_between(w[0], w[1])
                    .map(|a| a.degree)
                    .ok_or_else(|| AlgebraError::NotAPath(word.clone()))
            })
            .sum()
    }
}

/// A path `(i₁|i₂|…|i_r)`; a single vertex `(i)` is the idempotent at `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PathWord(Vec<Vertex>);

impl PathWord {
    pub fn new(vertices: Vec<Vertex>) -> Self {
        assert!(!vertices.is_empty(), "a path visits at least one vertex");
        PathWord(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn source(&self) -> Vertex {
        self.0[0]
    }

    pub fn target(&self) -> Vertex {
        *self.0.last().unwrap()
    }

    pub fn length(&self) -> usize {
        self.0.len() - 1
    }

    /// Concatenation, or `None` if the endpoints do not match.
    pub fn concat(&self, other: &PathWord) -> Option<PathWord> {
        (self.target() == other.source()).then(|| {
            let mut v = self.0.clone();
            v.extend_from_slice(&other.0[1..]);
            PathWord(v)
        })
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "|")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shorthand for building a [`PathWord`] from a vertex list.
pub fn path(vertices: &[Vertex]) -> PathWord {
    PathWord::new(vertices.to_vec())
}

/// A GF(2) sum of parallel paths that is set to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<PathWord>,
}

impl Relation {
    pub fn zero(word: PathWord) -> Self {
        Relation { terms: vec![word] }
    }

    pub fn equal(a: PathWord, b: PathWord) -> Self {
        Relation { terms: vec![a, b] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub word: PathWord,
    pub source: Vertex,
    pub target: Vertex,
    pub degree: i32,
}

/// An element of a [`QuotientAlgebra`]: a coefficient vector over its basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    algebra: u64,
    coeffs: BitVec,
}

impl Element {
    pub fn coeffs(&self) -> &BitVec {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn add(&self, other: &Element) -> Result<Element, AlgebraError> {
        if self.algebra != other.algebra {
            return Err(AlgebraError::MixedAlgebras);
        }
        let mut c = self.coeffs.clone();
        c.xor_assign(&other.coeffs);
        Ok(Element {
            algebra: self.algebra,
            coeffs: c,
        })
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element{:?}", self.coeffs.ones().collect::<Vec<_>>())
    }
}

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

/// A finite-dimensional graded quotient of a path algebra, with an explicit
/// normal-word basis and a full table of structure constants.
#[derive(Clone)]
pub struct QuotientAlgebra {
    id: u64,
    name: String,
    quiver: Quiver,
    relations: Vec<Relation>,
    /// Vertices whose idempotents belong to the algebra (all of them unless
    /// the algebra is an idempotent truncation).
    vertex_set: Vec<Vertex>,
    basis: Vec<BasisElement>,
    index: HashMap<PathWord, usize>,
    /// `products[u * dim + v]` lists the basis indices of `b_u · b_v`.
    products: Vec<Vec<u32>>,
    /// First path length at which the quotient vanishes.
    terminal_length: usize,
    /// The algebra this one was truncated from, if any.
    ambient: Option<Arc<QuotientAlgebra>>,
}

impl fmt::Debug for QuotientAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuotientAlgebra")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .finish()
    }
}

/// Default ceiling on path length for [`enumerate_basis`], per vertex.
pub const CEILING_PER_VERTEX: usize = 4;

/// Build the quotient of the path algebra of `quiver` by `relations`.
///
/// Fails if some length up to `ceiling` (default `4·vertices`) still has a
/// nonzero quotient.
pub fn enumerate_basis(
    quiver: &Quiver,
    relations: &[Relation],
    ceiling: Option<usize>,
) -> Result<QuotientAlgebra, AlgebraError> {
    let ceiling = ceiling.unwrap_or(CEILING_PER_VERTEX * quiver.vertices().max(1));

    // (length, source, target, degree) per relation.
    let mut rel_shape = Vec::new();
    for (k, r) in relations.iter().enumerate() {
        let Some(first) = r.terms.first() else {
            return Err(AlgebraError::InhomogeneousRelation(k));
        };
        let shape = (first.length(), first.source(), first.target(), quiver.degree(first)?);
        for t in &r.terms {
            let s = (t.length(), t.source(), t.target(), quiver.degree(t)?);
            if s != shape {
                return Err(AlgebraError::InhomogeneousRelation(k));
            }
        }
        rel_shape.push(shape);
    }

    // levels[ℓ] = normal words of length ℓ
    let mut levels: Vec<Vec<PathWord>> = vec![(1..=quiver.vertices()).map(|v| PathWord(vec![v])).collect()];
    // right[ℓ][b] maps arrow index -> class of (word b)·(arrow) in level ℓ+1
    let mut right: Vec<Vec<HashMap<usize, BitVec>>> = Vec::new();

    loop {
        let l = levels.len() - 1;
        if l >= ceiling {
            return Err(AlgebraError::CeilingExceeded { ceiling });
        }
        let current = &levels[l];
        let mut candidates: Vec<(PathWord, usize, usize)> = Vec::new();
        for (b, w) in current.iter().enumerate() {
            for (ai, a) in quiver.arrows_from(w.target()) {
                let mut v = w.0.clone();
                v.push(a.target);
                candidates.push((PathWord(v), b, ai));
            }
        }
        candidates.sort();
        let col_of: HashMap<(usize, usize), usize> = candidates
            .iter()
            .enumerate()
            .map(|(c, (_, b, ai))| ((*b, *ai), c))
            .collect();
        let ncols = candidates.len();

        // Push a level-l vector x through "⊗ arrow ai" into candidate columns.
        let tensor_arrow = |x: &BitVec, ai: usize| -> BitVec {
            let mut out = BitVec::zeros(ncols);
            for b in x.ones() {
                if let Some(&c) = col_of.get(&(b, ai)) {
                    out.flip(c);
                }
            }
            out
        };

        let mut ideal = Echelon::new(ncols);
        for (r, &(len, src, _, _)) in relations.iter().zip(&rel_shape) {
            if len == 0 || len > l + 1 {
                continue;
            }
            let base = l + 1 - len;
            for (p, pw) in levels[base].iter().enumerate() {
                if pw.target() != src {
                    continue;
                }
                let mut total = BitVec::zeros(ncols);
                for term in &r.terms {
                    let tv = term.vertices();
                    let mut x = BitVec::unit(levels[base].len(), p);
                    for (step, pair) in tv[..tv.len() - 1].windows(2).enumerate() {
                        let ai = quiver.lookup[&(pair[0], pair[1])];
                        x = apply_right(&right[base + step], &x, ai, levels[base + step + 1].len());
                    }
                    let last = quiver.lookup[&(tv[tv.len() - 2], tv[tv.len() - 1])];
                    total.xor_assign(&tensor_arrow(&x, last));
                }
                ideal.insert(&total);
            }
        }

        let mut is_pivot = vec![false; ncols];
        for &p in ideal.pivots() {
            is_pivot[p] = true;
        }
        let mut new_index = vec![usize::MAX; ncols];
        let mut next_level = Vec::new();
        for c in 0..ncols {
            if !is_pivot[c] {
                new_index[c] = next_level.len();
                next_level.push(candidates[c].0.clone());
            }
        }
        let next_dim = next_level.len();
        let mut table: Vec<HashMap<usize, BitVec>> = vec![HashMap::new(); current.len()];
        for (c, (_, b, ai)) in candidates.iter().enumerate() {
            let class = if is_pivot[c] {
                let res = ideal.reduce(&BitVec::unit(ncols, c));
                BitVec::from_indices(next_dim, res.ones().map(|k| new_index[k]))
            } else {
                BitVec::unit(next_dim, new_index[c])
            };
            table[*b].insert(*ai, class);
        }
        right.push(table);
        if next_level.is_empty() {
            break;
        }
        levels.push(next_level);
    }

    let terminal_length = levels.len();
    let mut basis = Vec::new();
    let mut offsets = Vec::new();
    for level in &levels {
        offsets.push(basis.len());
        for w in level {
            basis.push(BasisElement {
                source: w.source(),
                target: w.target(),
                degree: quiver.degree(w)?,
                word: w.clone(),
            });
        }
    }
    let dim = basis.len();
    let index: HashMap<PathWord, usize> = basis.iter().enumerate().map(|(k, b)| (b.word.clone(), k)).collect();

    let mut products = vec![Vec::new(); dim * dim];
    for u in 0..dim {
        let lu = basis[u].word.length();
        let local_u = u - offsets[lu];
        for v in 0..dim {
            if basis[u].target != basis[v].source {
                continue;
            }
            let lv = basis[v].word.length();
            if lu + lv >= terminal_length {
                continue;
            }
            let mut x = BitVec::unit(levels[lu].len(), local_u);
            for (step, pair) in basis[v].word.vertices().windows(2).enumerate() {
                let ai = quiver.lookup[&(pair[0], pair[1])];
                x = apply_right(&right[lu + step], &x, ai, levels[lu + step + 1].len());
            }
            let off = offsets[lu + lv];
            products[u * dim + v] = x.ones().map(|k| (k + off) as u32).collect();
        }
    }

    Ok(QuotientAlgebra {
        id: NEXT_ALGEBRA_ID.fetch_add(1, Ordering::Relaxed),
        name: String::from("quotient"),
        quiver: quiver.clone(),
        relations: relations.to_vec(),
        vertex_set: (1..=quiver.vertices()).collect(),
        basis,
        index,
        products,
        terminal_length,
        ambient: None,
    })
}

fn apply_right(table: &[HashMap<usize, BitVec>], x: &BitVec, arrow: usize, dim: usize) -> BitVec {
    let mut out = BitVec::zeros(dim);
    for b in x.ones() {
        if let Some(v) = table[b].get(&arrow) {
            out.xor_assign(v);
        }
    }
    out
}

/// The algebras that appear in the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedAlgebra {
    /// `Aₙ^!`: `(i|i-1|i) = (i|i+1|i)`, `(1|2|1) = 0`, `(i|i+1)` in degree 1.
    AnShriek,
    /// `Aₙ`: straight paths vanish, loops agree, `(n|n-1|n) = 0`,
    /// `(i+1|i)` in degree 1.
    An,
    /// `C_{n-1} = e Aₙ e` with `e = (1)+…+(n-1)`.
    Zigzag,
}

impl std::str::FromStr for NamedAlgebra {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "an_shriek" => Ok(NamedAlgebra::AnShriek),
            "an" => Ok(NamedAlgebra::An),
            "zigzag" => Ok(NamedAlgebra::Zigzag),
            other => Err(AlgebraError::UnknownName(other.to_string())),
        }
    }
}

pub fn an_shriek_relations(n: usize) -> Vec<Relation> {
    let mut rels = vec![Relation::zero(path(&[1, 2, 1]))];
    for i in 2..n {
        rels.push(Relation::equal(path(&[i, i - 1, i]), path(&[i, i + 1, i])));
    }
    rels
}

pub fn an_relations(n: usize) -> Vec<Relation> {
    let mut rels = Vec::new();
    for i in 1..n.saturating_sub(1) {
        rels.push(Relation::zero(path(&[i, i + 1, i + 2])));
        rels.push(Relation::zero(path(&[i + 2, i + 1, i])));
    }
    for i in 2..n {
        rels.push(Relation::equal(path(&[i, i + 1, i]), path(&[i, i - 1, i])));
    }
    rels.push(Relation::zero(path(&[n, n - 1, n])));
    rels
}

pub fn build_named_algebra(name: NamedAlgebra, n: usize) -> Result<QuotientAlgebra, AlgebraError> {
    if n < 2 {
        return Err(AlgebraError::TooSmall(n));
    }
    let mut alg = match name {
        NamedAlgebra::AnShriek => enumerate_basis(&Quiver::doubled_line(n, 1, 0), &an_shriek_relations(n), None)?,
        NamedAlgebra::An | NamedAlgebra::Zigzag => {
            enumerate_basis(&Quiver::doubled_line(n, 0, 1), &an_relations(n), None)?
        }
    };
    alg.name = match name {
        NamedAlgebra::AnShriek => format!("A{n}!"),
        NamedAlgebra::An => format!("A{n}"),
        NamedAlgebra::Zigzag => format!("C{}", n - 1),
    };
    if name == NamedAlgebra::Zigzag {
        alg = alg.truncate(&(1..n).collect::<Vec<_>>())?;
    }
    Ok(alg)
}

impl QuotientAlgebra {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    /// Vertices whose idempotents lie in the algebra.
    pub fn vertex_set(&self) -> &[Vertex] {
        &self.vertex_set
    }

    /// The first path length at which the quotient is zero.
    pub fn terminal_length(&self) -> usize {
        self.terminal_length
    }

    pub fn index_of(&self, word: &PathWord) -> Option<usize> {
        self.index.get(word).copied()
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), AlgebraError> {
        if self.vertex_set.contains(&v) {
            Ok(())
        } else {
            Err(AlgebraError::InvalidVertex(v))
        }
    }

    pub fn zero(&self) -> Element {
        Element {
            algebra: self.id,
            coeffs: BitVec::zeros(self.dim()),
        }
    }

    pub fn from_coeffs(&self, coeffs: BitVec) -> Element {
        assert_eq!(coeffs.len(), self.dim());
        Element {
            algebra: self.id,
            coeffs,
        }
    }

    pub fn basis_element(&self, k: usize) -> Element {
        self.from_coeffs(BitVec::unit(self.dim(), k))
    }

    pub fn idempotent(&self, v: Vertex) -> Result<Element, AlgebraError> {
        self.check_vertex(v)?;
        Ok(self.basis_element(self.index[&PathWord(vec![v])]))
    }

    /// The unit `Σ (i)` over the vertex set.
    pub fn unit(&self) -> Element {
        let c = BitVec::from_indices(
            self.dim(),
            self.vertex_set.iter().map(|&v| self.index[&PathWord(vec![v])]),
        );
        self.from_coeffs(c)
    }

    /// The class of an arbitrary path of the quiver.
    pub fn word(&self, word: &PathWord) -> Result<Element, AlgebraError> {
        self.quiver.degree(word)?;
        for v in [word.source(), word.target()] {
            self.check_vertex(v)?;
        }
        if let Some(k) = self.index_of(word) {
            return Ok(self.basis_element(k));
        }
        if let Some(amb) = &self.ambient {
            // Interior vertices may leave the vertex set; evaluate upstairs.
            let up = amb.word(word)?;
            let c = BitVec::from_indices(self.dim(), up.coeffs.ones().map(|k| self.index[&amb.basis[k].word]));
            return Ok(self.from_coeffs(c));
        }
        let vs = word.vertices();
        let mut acc = BitVec::unit(self.dim(), self.index[&PathWord(vec![vs[0]])]);
        for pair in vs.windows(2) {
            match self.index_of(&PathWord(pair.to_vec())) {
                Some(k) => acc = self.mul_coeffs(&acc, &BitVec::unit(self.dim(), k)),
                None => return Ok(self.zero()),
            }
        }
        Ok(self.from_coeffs(acc))
    }

    /// Structure constants of `b_u · b_v`.
    pub fn product_of_basis(&self, u: usize, v: usize) -> &[u32] {
        &self.products[u * self.dim() + v]
    }

    pub(crate) fn mul_coeffs(&self, x: &BitVec, y: &BitVec) -> BitVec {
        let dim = self.dim();
        let mut out = BitVec::zeros(dim);
        let ys: Vec<usize> = y.ones().collect();
        for u in x.ones() {
            for &v in &ys {
                for &k in &self.products[u * dim + v] {
                    out.flip(k as usize);
                }
            }
        }
        out
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        if x.algebra != self.id || y.algebra != self.id {
            return Err(AlgebraError::MixedAlgebras);
        }
        Ok(self.from_coeffs(self.mul_coeffs(&x.coeffs, &y.coeffs)))
    }

    /// Basis indices of `(i)·A·(j)` grouped by internal degree.
    pub fn idempotent_block(&self, i: Vertex, j: Vertex) -> Result<BTreeMap<i32, Vec<usize>>, AlgebraError> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        let mut out: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (k, b) in self.basis.iter().enumerate() {
            if b.source == i && b.target == j {
                out.entry(b.degree).or_default().push(k);
            }
        }
        Ok(out)
    }

    /// Basis indices of `(i)·A·(j)` in basis order.
    pub fn block_indices(&self, i: Vertex, j: Vertex) -> Vec<usize> {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, b)| b.source == i && b.target == j)
            .map(|(k, _)| k)
            .collect()
    }

    /// `e A e` for `e` the sum of the idempotents at `vertices`.
    pub fn truncate(&self, vertices: &[Vertex]) -> Result<QuotientAlgebra, AlgebraError> {
        for &v in vertices {
            self.check_vertex(v)?;
        }
        let keep: Vec<usize> = (0..self.dim())
            .filter(|&k| vertices.contains(&self.basis[k].source) && vertices.contains(&self.basis[k].target))
            .collect();
        let mut new_of_old = vec![usize::MAX; self.dim()];
        for (new, &old) in keep.iter().enumerate() {
            new_of_old[old] = new;
        }
        let dim = keep.len();
        let mut products = vec![Vec::new(); dim * dim];
        for (nu, &u) in keep.iter().enumerate() {
            for (nv, &v) in keep.iter().enumerate() {
                products[nu * dim + nv] = self.products[u * self.dim() + v]
                    .iter()
                    .map(|&k| new_of_old[k as usize] as u32)
                    .collect();
            }
        }
        let basis: Vec<BasisElement> = keep.iter().map(|&k| self.basis[k].clone()).collect();
        let index = basis.iter().enumerate().map(|(k, b)| (b.word.clone(), k)).collect();
        Ok(QuotientAlgebra {
            id: NEXT_ALGEBRA_ID.fetch_add(1, Ordering::Relaxed),
            name: self.name.clone(),
            quiver: self.quiver.clone(),
            relations: self.relations.clone(),
            vertex_set: vertices.to_vec(),
            basis,
            index,
            products,
            terminal_length: self.terminal_length,
            ambient: Some(Arc::new(self.clone())),
        })
    }

    /// Check `(xy)z = x(yz)` on all basis triples; returns the first failing
    /// triple.
    pub fn check_associativity(&self) -> Option<(usize, usize, usize)> {
        let dim = self.dim();
        for x in 0..dim {
            for y in 0..dim {
                if self.basis[x].target != self.basis[y].source {
                    continue;
                }
                let xy = BitVec::from_indices(dim, self.products[x * dim + y].iter().map(|&k| k as usize));
                for z in 0..dim {
                    if self.basis[y].target != self.basis[z].source {
                        continue;
                    }
                    let left = self.mul_coeffs(&xy, &BitVec::unit(dim, z));
                    let yz = BitVec::from_indices(dim, self.products[y * dim + z].iter().map(|&k| k as usize));
                    let right = self.mul_coeffs(&BitVec::unit(dim, x), &yz);
                    if left != right {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// Check that the unit acts as a two-sided identity; returns a failing
    /// basis index.
    pub fn check_unit(&self) -> Option<usize> {
        let one = self.unit().coeffs;
        (0..self.dim()).find(|&k| {
            let e = BitVec::unit(self.dim(), k);
            self.mul_coeffs(&one, &e) != e || self.mul_coeffs(&e, &one) != e
        })
    }

    /// Check `deg(xy) = deg x + deg y` on every nonzero basis product.
    pub fn check_grading(&self) -> Option<(usize, usize)> {
        let dim = self.dim();
        for u in 0..dim {
            for v in 0..dim {
                let d = self.basis[u].degree + self.basis[v].degree;
                if self.products[u * dim + v]
                    .iter()
                    .any(|&k| self.basis[k as usize].degree != d)
                {
                    return Some((u, v));
                }
            }
        }
        None
    }

    /// Overwrite one structure constant. Used to build negative controls.
    pub fn perturb_product(&mut self, u: usize, v: usize, k: usize) {
        let dim = self.dim();
        let entry = &mut self.products[u * dim + v];
        if let Some(pos) = entry.iter().position(|&x| x as usize == k) {
            entry.remove(pos);
        } else {
            entry.push(k as u32);
            entry.sort_unstable();
        }
    }

    /// Render an element as a sum of normal words.
    pub fn display(&self, x: &BitVec) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.ones()
            .map(|k| self.basis[k].word.to_string())
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_no_arrows() {
        let q = Quiver::new(1, vec![]).unwrap();
        let a = enumerate_basis(&q, &[], None).unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.basis()[0].word, path(&[1]));
        assert_eq!(a.terminal_length(), 1);
    }

    #[test]
    fn loop_at_one_vanishes_in_an_shriek() {
        for n in 2..=6 {
            let a = build_named_algebra(NamedAlgebra::AnShriek, n).unwrap();
            assert!(a.word(&path(&[1, 2, 1])).unwrap().is_zero(), "n={n}");
            let block = a.idempotent_block(1, 1).unwrap();
            assert_eq!(block.values().map(Vec::len).sum::<usize>(), 1);
        }
    }

    #[test]
    fn zigzag_dimension_and_blocks() {
        for n in 2..=8 {
            let c = build_named_algebra(NamedAlgebra::Zigzag, n).unwrap();
            assert_eq!(c.dim(), 4 * n - 6, "n={n}");
            for i in 1..n {
                let words: Vec<_> = c
                    .block_indices(i, i)
                    .iter()
                    .map(|&k| c.basis()[k].word.clone())
                    .collect();
                assert_eq!(words, vec![path(&[i]), path(&[i, i + 1, i])]);
                for j in 1..n {
                    let len = c.block_indices(i, j).len();
                    match i.abs_diff(j) {
                        0 => assert_eq!(len, 2),
                        1 => assert_eq!(len, 1),
                        _ => assert_eq!(len, 0),
                    }
                }
            }
        }
    }

    #[test]
    fn straight_paths_vanish_in_an() {
        for n in 3..=6 {
            let a = build_named_algebra(NamedAlgebra::An, n).unwrap();
            for i in 1..=n - 2 {
                assert!(a.word(&path(&[i, i + 1, i + 2])).unwrap().is_zero());
                assert!(a.word(&path(&[i + 2, i + 1, i])).unwrap().is_zero());
            }
            assert!(a.word(&path(&[n, n - 1, n])).unwrap().is_zero());
        }
    }

    #[test]
    fn an_shriek_loops_nilpotent() {
        for n in 2..=6 {
            let a = build_named_algebra(NamedAlgebra::AnShriek, n).unwrap();
            for i in 1..=n {
                let c = if i == 1 { path(&[1, 2, 1]) } else { path(&[i, i - 1, i]) };
                let c = a.word(&c).unwrap();
                let mut pow = a.idempotent(i).unwrap();
                for _ in 0..i {
                    pow = a.multiply(&pow, &c).unwrap();
                }
                assert!(pow.is_zero(), "c_{i}^{i} != 0 for n={n}");
            }
        }
    }

    #[test]
    fn products_in_zigzag() {
        let c = build_named_algebra(NamedAlgebra::Zigzag, 5).unwrap();
        let up = c.word(&path(&[2, 3])).unwrap();
        let down = c.word(&path(&[3, 2])).unwrap();
        let lp = c.multiply(&up, &down).unwrap();
        assert_eq!(lp, c.word(&path(&[2, 3, 2])).unwrap());
        assert!(c.multiply(&lp, &lp).unwrap().is_zero());
        let e1 = c.idempotent(1).unwrap();
        let e2 = c.idempotent(2).unwrap();
        assert!(c.multiply(&e1, &e2).unwrap().is_zero());
    }

    #[test]
    fn mixed_algebras_rejected() {
        let a = build_named_algebra(NamedAlgebra::Zigzag, 3).unwrap();
        let b = build_named_algebra(NamedAlgebra::Zigzag, 3).unwrap();
        assert_eq!(a.multiply(&a.unit(), &b.unit()), Err(AlgebraError::MixedAlgebras));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(
            build_named_algebra(NamedAlgebra::An, 1).unwrap_err(),
            AlgebraError::TooSmall(1)
        );
        let c = build_named_algebra(NamedAlgebra::Zigzag, 4).unwrap();
        assert!(c.idempotent_block(4, 1).is_err());
        assert!(c.idempotent_block(0, 1).is_err());
    }

    #[test]
    fn free_algebra_on_a_loop_hits_ceiling() {
        let q = Quiver::new(
            1,
            vec![Arrow {
                source: 1,
                target: 1,
                degree: 0,
            }],
        )
        .unwrap();
        assert_eq!(
            enumerate_basis(&q, &[], Some(5)).unwrap_err(),
            AlgebraError::CeilingExceeded { ceiling: 5 }
        );
    }

    #[test]
    fn inhomogeneous_relation_rejected() {
        let q = Quiver::doubled_line(3, 1, 0);
        let bad = Relation::equal(path(&[1, 2, 1]), path(&[1]));
        assert!(matches!(
            enumerate_basis(&q, &[bad], None),
            Err(AlgebraError::InhomogeneousRelation(0))
        ));
    }
}
