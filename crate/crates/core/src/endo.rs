//! The DG endomorphism algebra `Eₙ = ⊕ HOM(ℙ(L_j), ℙ(L_i))` of the left
//! resolutions, its explicit subalgebra `E′ₙ` generated by named maps, and
//! the truncation `S_{n-1}` to the first `n-1` vertices.
//!
//! The block `1_i E 1_j` is `HOM(ℙ(L_j), ℙ(L_i))`, and a product `xy` of
//! blocks means `x ∘ y`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::dgalg::{an_shriek_dg, CellModule, DgAlgebra, DgError, FiniteComplex, Side};
use crate::gf2lin::{BitVec, Echelon};
use crate::homalg::{compose, describe_map, hom_complex, map_differential, DgMap, HomComplex, HomError, Resolutions};
use crate::quiver::{build_named_algebra, NamedAlgebra, PathWord, QuotientAlgebra, Vertex};
use crate::report::Check;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EndoError {
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Dg(#[from] DgError),
    #[error("map {map}: no generator P{proj}[{shift}]")]
    MissingGenerator { map: String, proj: Vertex, shift: i32 },
    #[error("map {map}: component label {word} is zero in the algebra")]
    ZeroComponent { map: String, word: PathWord },
    #[error("{0} is not defined for this n")]
    Undefined(String),
    #[error("product {product} leaves the span of the named basis of block {block:?}")]
    NotClosed { product: String, block: (Vertex, Vertex) },
}

/// Generators of `E′ₙ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    /// `1_i`
    One(Vertex),
    /// `α_{i,j}` for `|i-j| = 1`, a map `ℙ(L_j) → ℙ(L_i)`
    Alpha(Vertex, Vertex),
    /// `h_i`, `1 ≤ i ≤ n`
    H(Vertex),
    /// `h_{n,i}`; `h_{n,n-1}` is `α_{n,n-1}`
    HN(Vertex),
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::One(i) => write!(f, "1_{i}"),
            Gen::Alpha(i, j) => write!(f, "α_{{{i},{j}}}"),
            Gen::H(i) => write!(f, "h_{i}"),
            Gen::HN(i) => write!(f, "h_{{n,{i}}}"),
        }
    }
}

/// The named DG maps between the resolutions `ℙ(L_1), …, ℙ(L_n)`.
#[derive(Clone, Debug)]
pub struct NamedMaps {
    n: usize,
    dg: DgAlgebra,
    res: Resolutions,
    maps: BTreeMap<Gen, DgMap>,
    /// `←α_1`, the `P_1[1] → P_1` component; `α_{1,0}α_{0,1}` in the
    /// notation with an auxiliary vertex 0.
    back_one: DgMap,
}

type Comp = ((Vertex, i32), (Vertex, i32), Vec<Vertex>);

fn build_map(
    dg: &DgAlgebra,
    res: &Resolutions,
    name: &str,
    src: Vertex,
    tgt: Vertex,
    degree: i32,
    comps: Vec<Comp>,
) -> Result<DgMap, EndoError> {
    let (m, n): (&Arc<CellModule>, &Arc<CellModule>) = (res.get(src), res.get(tgt));
    let mut table = BTreeMap::new();
    for ((p, s), (q, t), word) in comps {
        let k = m.find(p, s).ok_or_else(|| EndoError::MissingGenerator {
            map: name.into(),
            proj: p,
            shift: s,
        })?;
        let l = n.find(q, t).ok_or_else(|| EndoError::MissingGenerator {
            map: name.into(),
            proj: q,
            shift: t,
        })?;
        let w = PathWord::new(word);
        let y = dg.algebra().word(&w).map_err(DgError::from)?;
        if y.is_zero() {
            return Err(EndoError::ZeroComponent {
                map: name.into(),
                word: w,
            });
        }
        table.insert((k, l), y.coeffs().clone());
    }
    Ok(DgMap::new(dg, m.clone(), n.clone(), degree, table)?)
}

/// Construct every named map from its components.
pub fn build_named_maps(n: usize) -> Result<NamedMaps, EndoError> {
    let dg = an_shriek_dg(n)?;
    let res = Resolutions::new(&dg, Side::Left)?;
    let mut maps = BTreeMap::new();
    let mk = |name: &str, src, tgt, degree, comps| build_map(&dg, &res, name, src, tgt, degree, comps);
    for i in 1..=n {
        maps.insert(Gen::One(i), DgMap::identity(&dg, res.get(i).clone()));
    }
    for i in 1..n.saturating_sub(1) {
        let up = vec![((i, 0), (i, 0), vec![i]), ((i + 1, 1), (i + 1, 1), vec![i + 1])];
        maps.insert(Gen::Alpha(i, i + 1), mk("α_{i,i+1}", i + 1, i, 0, up)?);
        let mut down = vec![
            ((i, 1), (i + 1, 1), vec![i, i + 1]),
            ((i, 1), (i, 0), vec![i]),
            ((i + 1, 1), (i + 1, 0), vec![i + 1]),
        ];
        if i > 1 {
            down.push(((i - 1, 0), (i, 0), vec![i - 1, i]));
            down.push(((i - 1, 0), (i + 1, 1), vec![i - 1, i, i + 1]));
        }
        maps.insert(Gen::Alpha(i + 1, i), mk("α_{i+1,i}", i, i + 1, 1, down)?);
    }
    let mut up = vec![
        ((n - 1, 0), (n - 1, 0), vec![n - 1]),
        ((n - 1, 0), (n, 1), vec![n - 1, n]),
    ];
    let mut down = vec![((n - 1, 1), (n - 1, 0), vec![n - 1]), ((n, 1), (n, 0), vec![n])];
    if n >= 3 {
        up.push(((n - 2, -1), (n - 1, 0), vec![n - 2, n - 1]));
        up.push(((n - 2, -1), (n, 1), vec![n - 2, n - 1, n]));
        down.push(((n - 2, 0), (n - 2, -1), vec![n - 2]));
    }
    maps.insert(Gen::Alpha(n - 1, n), mk("α_{n-1,n}", n, n - 1, 0, up)?);
    maps.insert(Gen::Alpha(n, n - 1), mk("α_{n,n-1}", n - 1, n, 1, down)?);
    for i in 1..n {
        let mut c = vec![((i, 1), (i, 1), vec![i])];
        if i > 1 {
            c.push(((i - 1, 0), (i - 1, 0), vec![i - 1]));
        }
        maps.insert(Gen::H(i), mk("h_i", i, i, 0, c)?);
    }
    maps.insert(Gen::H(n), mk("h_n", n, n, 0, vec![((n, 0), (n, 0), vec![n])])?);
    for i in 1..n.saturating_sub(1) {
        let mut c = vec![((i, 1), (i, 0), vec![i])];
        if i > 1 {
            c.push(((i - 1, 0), (i - 1, -1), vec![i - 1]));
        }
        maps.insert(Gen::HN(i), mk("h_{n,i}", i, n, 1, c)?);
    }
    let back_one = mk("←α_1", 1, 1, 1, vec![((1, 1), (1, 0), vec![1])])?;
    Ok(NamedMaps {
        n,
        dg,
        res,
        maps,
        back_one,
    })
}

impl NamedMaps {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dg(&self) -> &DgAlgebra {
        &self.dg
    }

    pub fn resolutions(&self) -> &Resolutions {
        &self.res
    }

    pub fn generators(&self) -> impl Iterator<Item = (&Gen, &DgMap)> {
        self.maps.iter()
    }

    pub fn get(&self, g: Gen) -> Result<&DgMap, EndoError> {
        let g = match g {
            Gen::HN(i) if i + 1 == self.n => Gen::Alpha(self.n, self.n - 1),
            other => other,
        };
        self.maps.get(&g).ok_or_else(|| EndoError::Undefined(g.to_string()))
    }

    /// `←α_1`.
    pub fn back_one(&self) -> &DgMap {
        &self.back_one
    }

    /// Replace a generator by a perturbed map (negative controls).
    pub fn replace(&mut self, g: Gen, f: DgMap) {
        self.maps.insert(g, f);
    }

    pub fn compose(&self, f: &DgMap, g: &DgMap) -> DgMap {
        compose(&self.dg, f, g).expect("composable by construction")
    }

    /// The product `g_1 g_2 ⋯ g_r`, i.e. `g_1 ∘ ⋯ ∘ g_r`.
    pub fn prod(&self, gens: &[Gen]) -> Result<DgMap, EndoError> {
        let (last, rest) = gens.split_last().expect("nonempty product");
        let mut acc = self.get(*last)?.clone();
        for g in rest.iter().rev() {
            let f = self.get(*g)?;
            acc = compose(&self.dg, f, &acc).map_err(|_| EndoError::Undefined(format!("{g}·…")))?;
        }
        Ok(acc)
    }

    pub fn d(&self, f: &DgMap) -> DgMap {
        map_differential(&self.dg, f)
    }

    pub fn add(&self, f: &DgMap, g: &DgMap) -> DgMap {
        f.add(g).expect("same block and degree")
    }

    pub fn describe(&self, f: &DgMap) -> String {
        describe_map(&self.dg, f)
    }

    /// The image of a path of `Aₙ` as a composite of `α`s.
    pub fn word_map(&self, w: &PathWord) -> Result<DgMap, EndoError> {
        let v = w.vertices();
        if v.len() == 1 {
            return self.get(Gen::One(v[0])).cloned();
        }
        let gens: Vec<Gen> = v.windows(2).map(|p| Gen::Alpha(p[0], p[1])).collect();
        self.prod(&gens)
    }
}

/// Named basis elements of `E′ₙ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EName {
    One(Vertex),
    H(Vertex),
    /// `→α_i = α_{i,i+1}α_{i+1,i}`
    Right(Vertex),
    /// `←α_i = α_{i,i-1}α_{i-1,i}`
    Left(Vertex),
    /// `α_{i,i+1}`
    Up(Vertex),
    /// `α_{i+1,i}`
    Down(Vertex),
    /// `α_{i+1,i}→α_i`
    DownRight(Vertex),
    /// `α_{i+1,i}h_i`
    DownH(Vertex),
    /// `h_nα_{n,n-1}`
    HnDown,
    /// `h_{n,i}`
    HN(Vertex),
    /// `h_{n,i+1}α_{i+1,i}`
    HNDown(Vertex),
}

impl fmt::Display for EName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            EName::One(i) => write!(f, "1_{i}"),
            EName::H(i) => write!(f, "h_{i}"),
            EName::Right(i) => write!(f, "→α_{i}"),
            EName::Left(i) => write!(f, "←α_{i}"),
            EName::Up(i) => write!(f, "α_{{{},{}}}", i, i + 1),
            EName::Down(i) => write!(f, "α_{{{},{}}}", i + 1, i),
            EName::DownRight(i) => write!(f, "α_{{{},{}}}→α_{}", i + 1, i, i),
            EName::DownH(i) => write!(f, "α_{{{},{}}}h_{}", i + 1, i, i),
            EName::HnDown => write!(f, "h_nα_{{n,n-1}}"),
            EName::HN(i) => write!(f, "h_{{n,{i}}}"),
            EName::HNDown(i) => write!(f, "h_{{n,{}}}α_{{{},{}}}", i + 1, i + 1, i),
        }
    }
}

impl EName {
    /// The block `(i, j)` with the element in `1_i E′ 1_j`.
    pub fn block(&self, n: usize) -> (Vertex, Vertex) {
        match *self {
            EName::One(i) | EName::H(i) | EName::Right(i) | EName::Left(i) => (i, i),
            EName::Up(i) => (i, i + 1),
            EName::Down(i) | EName::DownRight(i) | EName::DownH(i) => (i + 1, i),
            EName::HnDown => (n, n - 1),
            EName::HN(i) | EName::HNDown(i) => (n, i),
        }
    }
}

impl NamedMaps {
    pub fn named(&self, e: EName) -> Result<DgMap, EndoError> {
        let n = self.n;
        use Gen::*;
        match e {
            EName::One(i) => self.prod(&[One(i)]),
            EName::H(i) => self.prod(&[H(i)]),
            EName::Right(i) => self.prod(&[Alpha(i, i + 1), Alpha(i + 1, i)]),
            EName::Left(1) => Ok(self.back_one.clone()),
            EName::Left(i) => self.prod(&[Alpha(i, i - 1), Alpha(i - 1, i)]),
            EName::Up(i) => self.prod(&[Alpha(i, i + 1)]),
            EName::Down(i) => self.prod(&[Alpha(i + 1, i)]),
            EName::DownRight(i) => self.prod(&[Alpha(i + 1, i), Alpha(i, i + 1), Alpha(i + 1, i)]),
            EName::DownH(i) => self.prod(&[Alpha(i + 1, i), H(i)]),
            EName::HnDown => self.prod(&[H(n), Alpha(n, n - 1)]),
            EName::HN(i) => self.prod(&[HN(i)]),
            EName::HNDown(i) => self.prod(&[HN(i + 1), Alpha(i + 1, i)]),
        }
    }

    /// The claimed named basis of each nonzero block of `E′ₙ`.
    pub fn claimed_blocks(&self) -> BTreeMap<(Vertex, Vertex), Vec<EName>> {
        let n = self.n;
        let mut out = BTreeMap::new();
        for i in 1..n {
            out.insert(
                (i, i),
                vec![EName::One(i), EName::H(i), EName::Right(i), EName::Left(i)],
            );
            out.insert((i, i + 1), vec![EName::Up(i)]);
            let third = if i + 1 < n { EName::DownH(i) } else { EName::HnDown };
            out.insert((i + 1, i), vec![EName::Down(i), EName::DownRight(i), third]);
        }
        out.insert((n, n), vec![EName::One(n), EName::H(n), EName::Left(n)]);
        for i in 1..n.saturating_sub(1) {
            out.insert((n, i), vec![EName::HN(i), EName::HNDown(i)]);
        }
        out
    }
}

fn eq_check(maps: &NamedMaps, name: String, lhs: Result<DgMap, EndoError>, rhs: Result<DgMap, EndoError>) -> Check {
    match (lhs, rhs) {
        (Ok(a), Ok(b)) => Check::expect(name, a == b, || {
            format!("lhs = {}; rhs = {}", maps.describe(&a), maps.describe(&b))
        }),
        (Err(e), _) | (_, Err(e)) => Check::fail(name, e.to_string()),
    }
}

fn zero_check(maps: &NamedMaps, name: String, lhs: Result<DgMap, EndoError>) -> Check {
    match lhs {
        Ok(a) => Check::expect(name, a.is_zero(), || maps.describe(&a)),
        Err(e) => Check::fail(name, e.to_string()),
    }
}

/// Every generator relation and differential formula, as strict equalities
/// of maps.
pub fn verify_generator_relations(maps: &NamedMaps) -> Vec<Check> {
    use Gen::*;
    let n = maps.n;
    let p = |g: &[Gen]| maps.prod(g);
    let mut out = Vec::new();
    for (g, f) in maps.generators() {
        let declared = match g {
            Alpha(i, j) if i > j => 1,
            HN(_) => 1,
            _ => 0,
        };
        out.push(Check::expect(
            format!("{g} has degree {declared}"),
            f.degree() == declared,
            || format!("degree {}", f.degree()),
        ));
    }
    for i in 1..=n {
        out.push(eq_check(
            maps,
            format!("1_{i}1_{i} = 1_{i}"),
            p(&[One(i), One(i)]),
            p(&[One(i)]),
        ));
        out.push(eq_check(maps, format!("h_{i}^2 = h_{i}"), p(&[H(i), H(i)]), p(&[H(i)])));
    }
    for i in 1..=n.saturating_sub(2) {
        out.push(zero_check(
            maps,
            format!("α_{{{},{}}}α_{{{},{}}} = 0", i, i + 1, i + 1, i + 2),
            p(&[Alpha(i, i + 1), Alpha(i + 1, i + 2)]),
        ));
        out.push(eq_check(
            maps,
            format!("α_{{{},{}}}h_{} = α_{{{},{}}}", i, i + 1, i + 1, i, i + 1),
            p(&[Alpha(i, i + 1), H(i + 1)]),
            p(&[Alpha(i, i + 1)]),
        ));
        out.push(eq_check(
            maps,
            format!("α_{{{},{}}}h_{} = h_{}α_{{{},{}}}", i + 1, i, i, i + 1, i + 1, i),
            p(&[Alpha(i + 1, i), H(i)]),
            p(&[H(i + 1), Alpha(i + 1, i)]),
        ));
        out.push(eq_check(
            maps,
            format!("h_{{n,{i}}}h_{i} = h_{{n,{i}}}"),
            p(&[HN(i), H(i)]),
            p(&[HN(i)]),
        ));
        out.push(zero_check(maps, format!("h_nh_{{n,{i}}} = 0"), p(&[H(n), HN(i)])));
        out.push(zero_check(
            maps,
            format!("h_{{n,{}}}α_{{{},{}}} = 0", i, i, i + 1),
            p(&[HN(i), Alpha(i, i + 1)]),
        ));
    }
    for i in 1..=n.saturating_sub(3) {
        out.push(zero_check(
            maps,
            format!("α_{{{},{}}}α_{{{},{}}} = 0", i + 2, i + 1, i + 1, i),
            p(&[Alpha(i + 2, i + 1), Alpha(i + 1, i)]),
        ));
    }
    for i in 1..n {
        out.push(zero_check(
            maps,
            format!("h_{}α_{{{},{}}} = 0", i, i, i + 1),
            p(&[H(i), Alpha(i, i + 1)]),
        ));
        out.push(zero_check(
            maps,
            format!("α_{{{0},{1}}}α_{{{1},{0}}}α_{{{0},{1}}} = 0", i, i + 1),
            p(&[Alpha(i, i + 1), Alpha(i + 1, i), Alpha(i, i + 1)]),
        ));
    }
    out.push(zero_check(maps, "α_{n-1,n}h_n = 0".into(), p(&[Alpha(n - 1, n), H(n)])));
    let lhs = p(&[Alpha(n, n - 1), H(n - 1)]).and_then(|a| Ok(maps.add(&a, &p(&[H(n), Alpha(n, n - 1)])?)));
    out.push(eq_check(
        maps,
        "α_{n,n-1}h_{n-1} + h_nα_{n,n-1} = α_{n,n-1}".into(),
        lhs,
        p(&[Alpha(n, n - 1)]),
    ));

    // differentials
    for i in 1..n {
        for g in [Alpha(i, i + 1), Alpha(i + 1, i)] {
            out.push(zero_check(maps, format!("d({g}) = 0"), p(&[g]).map(|f| maps.d(&f))));
        }
    }
    for i in 1..n {
        let lhs = p(&[H(i)]).map(|f| maps.d(&f));
        let rhs = maps
            .named(EName::Right(i))
            .and_then(|r| Ok(maps.add(&r, &maps.named(EName::Left(i))?)));
        out.push(eq_check(maps, format!("d(h_{i}) = ←α_{i} + →α_{i}"), lhs, rhs));
    }
    out.push(eq_check(
        maps,
        "d(h_n) = α_{n,n-1}α_{n-1,n}".into(),
        p(&[H(n)]).map(|f| maps.d(&f)),
        p(&[Alpha(n, n - 1), Alpha(n - 1, n)]),
    ));
    for i in 1..n {
        let lhs = p(&[Alpha(i + 1, i), H(i)]).map(|f| maps.d(&f));
        let rhs = p(&[Alpha(i + 1, i), Alpha(i, i + 1), Alpha(i + 1, i)]);
        if i + 1 < n {
            out.push(eq_check(
                maps,
                format!(
                    "d(α_{{{0},{1}}}h_{1}) = α_{{{0},{1}}}α_{{{1},{0}}}α_{{{0},{1}}}",
                    i + 1,
                    i
                ),
                lhs,
                rhs,
            ));
        } else {
            let lhs = p(&[H(n), Alpha(n, n - 1)]).map(|f| maps.d(&f));
            out.push(eq_check(
                maps,
                "d(h_nα_{n,n-1}) = α_{n,n-1}α_{n-1,n}α_{n,n-1}".into(),
                lhs,
                rhs,
            ));
        }
    }
    for i in 1..=n.saturating_sub(2) {
        out.push(eq_check(
            maps,
            format!("d(h_{{n,{}}}) = h_{{n,{}}}α_{{{},{}}}", i, i + 1, i + 1, i),
            p(&[HN(i)]).map(|f| maps.d(&f)),
            p(&[HN(i + 1), Alpha(i + 1, i)]),
        ));
    }
    out
}

/// One block `1_i E′ 1_j` inside `HOM(ℙ(L_j), ℙ(L_i))`.
#[derive(Clone, Debug)]
pub struct EBlock {
    pub hom: HomComplex,
    pub names: Vec<EName>,
    pub maps: Vec<DgMap>,
    vectors: Vec<BitVec>,
    echelon: Echelon,
}

impl EBlock {
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// Coordinates of `f` on the named basis, if it lies in the span.
    pub fn coordinates(&self, f: &DgMap) -> Option<BitVec> {
        let v = self.hom.to_vector(f).ok()?;
        self.echelon.coordinates(&v)
    }

    pub fn vectors(&self) -> &[BitVec] {
        &self.vectors
    }
}

/// `E′ₙ` with its named block bases.
#[derive(Clone, Debug)]
pub struct EPrime {
    pub maps: NamedMaps,
    blocks: BTreeMap<(Vertex, Vertex), EBlock>,
}

/// Build `E′ₙ`: close the generators under composition, compare with the
/// claimed named bases, and check closure under `d`.
pub fn build_eprime(maps: NamedMaps) -> Result<(EPrime, Vec<Check>), EndoError> {
    let n = maps.n;
    let dg = maps.dg.clone();
    let mut checks = Vec::new();
    let mut homs: BTreeMap<(Vertex, Vertex), HomComplex> = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            let h = hom_complex(&dg, maps.res.get(j).clone(), maps.res.get(i).clone())?;
            homs.insert((i, j), h);
        }
    }

    // closure of the generators under composition
    let mut span: BTreeMap<(Vertex, Vertex), (Echelon, Vec<DgMap>)> = homs
        .iter()
        .map(|(&b, h)| (b, (Echelon::new(h.dim()), Vec::new())))
        .collect();
    let block_of = |f: &DgMap| -> (Vertex, Vertex) {
        let find = |m: &Arc<CellModule>| (1..=n).find(|&i| maps.res.get(i) == m).unwrap();
        (find(f.target()), find(f.source()))
    };
    let mut frontier: Vec<DgMap> = maps.maps.values().cloned().chain([maps.back_one.clone()]).collect();
    while let Some(f) = frontier.pop() {
        let b = block_of(&f);
        let v = homs[&b].to_vector(&f)?;
        let (ech, elems) = span.get_mut(&b).unwrap();
        if !ech.insert(&v) {
            continue;
        }
        elems.push(f.clone());
        // multiply the new element with everything already present
        let snapshot: Vec<((Vertex, Vertex), Vec<DgMap>)> = span.iter().map(|(&k, (_, e))| (k, e.clone())).collect();
        for ((i, j), elems) in &snapshot {
            for g in elems {
                if *j == b.0 {
                    frontier.push(maps.compose(g, &f));
                }
                if *i == b.1 {
                    frontier.push(maps.compose(&f, g));
                }
            }
        }
    }

    let mut blocks = BTreeMap::new();
    let claimed = maps.claimed_blocks();
    for (&b, h) in &homs {
        let names = claimed.get(&b).cloned().unwrap_or_default();
        let mut ech = Echelon::tracked(h.dim());
        let mut vectors = Vec::new();
        let mut named_maps = Vec::new();
        let mut independent = true;
        for &e in &names {
            let f = maps.named(e)?;
            let v = h.to_vector(&f)?;
            independent &= ech.insert(&v);
            vectors.push(v);
            named_maps.push(f);
        }
        let closure_rank = span[&b].0.rank();
        let spans = closure_rank == ech.rank() && span[&b].1.iter().all(|f| ech.contains(&h.to_vector(f).unwrap()));
        let label = format!(
            "block ({},{}) = ⟨{}⟩",
            b.0,
            b.1,
            names.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")
        );
        checks.push(Check::expect(label, independent && spans, || {
            format!(
                "named basis independent: {independent}; closure dimension {closure_rank}, named span {}",
                ech.rank()
            )
        }));
        blocks.insert(
            b,
            EBlock {
                hom: h.clone(),
                names,
                maps: named_maps,
                vectors,
                echelon: ech,
            },
        );
    }
    let ep = EPrime { maps, blocks };
    for (&b, blk) in &ep.blocks {
        for (e, f) in blk.names.iter().zip(&blk.maps) {
            let df = ep.maps.d(f);
            checks.push(Check::expect(
                format!("d({e}) ∈ 1_{}E′1_{}", b.0, b.1),
                blk.coordinates(&df).is_some(),
                || ep.maps.describe(&df),
            ));
        }
    }
    Ok((ep, checks))
}

impl EPrime {
    pub fn n(&self) -> usize {
        self.maps.n
    }

    pub fn block(&self, i: Vertex, j: Vertex) -> &EBlock {
        &self.blocks[&(i, j)]
    }

    pub fn blocks(&self) -> &BTreeMap<(Vertex, Vertex), EBlock> {
        &self.blocks
    }

    /// The named block as a complex in named coordinates.
    fn block_complex(&self, b: (Vertex, Vertex)) -> FiniteComplex {
        let blk = &self.blocks[&b];
        let degrees: Vec<i32> = blk.maps.iter().map(|f| f.degree()).collect();
        let d: Vec<BitVec> = blk
            .maps
            .iter()
            .map(|f| blk.coordinates(&self.maps.d(f)).expect("closed under d"))
            .collect();
        FiniteComplex::new(degrees, d).expect("subcomplex")
    }

    /// Restrict to blocks with both indices in `vertices`, giving a finite
    /// DG algebra on the named basis.
    pub fn truncate(&self, vertices: &[Vertex]) -> FiniteDgAlgebra {
        let mut names = Vec::new();
        let mut maps = Vec::new();
        let mut blocks = Vec::new();
        let mut offsets = HashMap::new();
        for (&b, blk) in &self.blocks {
            if !(vertices.contains(&b.0) && vertices.contains(&b.1)) {
                continue;
            }
            offsets.insert(b, names.len());
            for (e, f) in blk.names.iter().zip(&blk.maps) {
                names.push(*e);
                maps.push(f.clone());
                blocks.push(b);
            }
        }
        let dim = names.len();
        let lift = |b: (Vertex, Vertex), local: &BitVec| -> BitVec {
            BitVec::from_indices(dim, local.ones().map(|k| offsets[&b] + k))
        };
        let mut mult = vec![BitVec::zeros(0); dim * dim];
        for u in 0..dim {
            for v in 0..dim {
                let (bu, bv) = (blocks[u], blocks[v]);
                mult[u * dim + v] = if bu.1 == bv.0 {
                    let prod = self.maps.compose(&maps[u], &maps[v]);
                    let b = (bu.0, bv.1);
                    let c = self.blocks[&b].coordinates(&prod).expect("closed under products");
                    lift(b, &c)
                } else {
                    BitVec::zeros(dim)
                };
            }
        }
        let d = (0..dim)
            .map(|u| {
                let b = blocks[u];
                lift(
                    b,
                    &self.blocks[&b]
                        .coordinates(&self.maps.d(&maps[u]))
                        .expect("closed under d"),
                )
            })
            .collect();
        FiniteDgAlgebra {
            degrees: maps.iter().map(|f| f.degree()).collect(),
            names,
            blocks,
            mult,
            d,
            vertices: vertices.to_vec(),
        }
    }
}

/// A finite-dimensional DG algebra on an explicit named basis, each basis
/// element lying in one idempotent block.
#[derive(Clone, Debug)]
pub struct FiniteDgAlgebra {
    pub names: Vec<EName>,
    pub blocks: Vec<(Vertex, Vertex)>,
    pub degrees: Vec<i32>,
    mult: Vec<BitVec>,
    d: Vec<BitVec>,
    pub vertices: Vec<Vertex>,
}

impl FiniteDgAlgebra {
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn index(&self, e: EName) -> Option<usize> {
        self.names.iter().position(|&x| x == e)
    }

    pub fn mul_basis(&self, u: usize, v: usize) -> &BitVec {
        &self.mult[u * self.dim() + v]
    }

    pub fn mul(&self, x: &BitVec, y: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.dim());
        let ys: Vec<usize> = y.ones().collect();
        for u in x.ones() {
            for &v in &ys {
                out.xor_assign(&self.mult[u * self.dim() + v]);
            }
        }
        out
    }

    pub fn d_basis(&self, u: usize) -> &BitVec {
        &self.d[u]
    }

    pub fn d(&self, x: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.dim());
        for u in x.ones() {
            out.xor_assign(&self.d[u]);
        }
        out
    }

    pub fn unit(&self) -> BitVec {
        BitVec::from_indices(
            self.dim(),
            self.vertices.iter().filter_map(|&i| self.index(EName::One(i))),
        )
    }

    pub fn display(&self, x: &BitVec) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.ones()
            .map(|k| self.names[k].to_string())
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Associativity, unit, Leibniz and `d² = 0` on all basis elements.
    pub fn check_axioms(&self) -> Vec<Check> {
        let dim = self.dim();
        let e = |k| BitVec::unit(dim, k);
        let mut assoc = None;
        let mut leibniz = None;
        for x in 0..dim {
            for y in 0..dim {
                let xy = self.mul(&e(x), &e(y));
                let mut rhs = self.mul(&self.d[x], &e(y));
                rhs.xor_assign(&self.mul(&e(x), &self.d[y]));
                if leibniz.is_none() && self.d(&xy) != rhs {
                    leibniz = Some((x, y));
                }
                for z in 0..dim {
                    if assoc.is_none() && self.mul(&xy, &e(z)) != self.mul(&e(x), &self.mul(&e(y), &e(z))) {
                        assoc = Some((x, y, z));
                    }
                }
            }
        }
        let one = self.unit();
        let unit_fail = (0..dim).find(|&k| self.mul(&one, &e(k)) != e(k) || self.mul(&e(k), &one) != e(k));
        let dd = (0..dim).find(|&k| !self.d(&self.d[k]).is_zero());
        let n = |k: usize| self.names[k].to_string();
        vec![
            Check::expect("associative", assoc.is_none(), || {
                let (x, y, z) = assoc.unwrap();
                format!("({}, {}, {})", n(x), n(y), n(z))
            }),
            Check::expect("unital", unit_fail.is_none(), || n(unit_fail.unwrap())),
            Check::expect("Leibniz", leibniz.is_none(), || {
                let (x, y) = leibniz.unwrap();
                format!("({}, {})", n(x), n(y))
            }),
            Check::expect("d² = 0", dd.is_none(), || n(dd.unwrap())),
        ]
    }
}

/// `S_{n-1} = e E′ₙ e` for `e = 1_1 + … + 1_{n-1}`.
pub fn build_s(n: usize) -> Result<FiniteDgAlgebra, EndoError> {
    let (ep, checks) = build_eprime(build_named_maps(n)?)?;
    if let Some(c) = checks.iter().find(|c| !c.passed) {
        return Err(EndoError::NotClosed {
            product: format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()),
            block: (0, 0),
        });
    }
    Ok(ep.truncate(&(1..n).collect::<Vec<_>>()))
}

/// Homology of each block of `E′ₙ` by degree.
pub fn eprime_homology(ep: &EPrime) -> BTreeMap<(Vertex, Vertex), BTreeMap<i32, usize>> {
    ep.blocks
        .keys()
        .map(|&b| (b, ep.block_complex(b).homology().dims()))
        .collect()
}

/// The expected homology of each block: `⟨1_i, c_i⟩` on the diagonal below
/// `n`, `⟨1_n⟩` at `n`, one class `α` in each adjacent block, zero
/// elsewhere.
pub fn verify_homology_table(ep: &EPrime) -> Vec<Check> {
    let n = ep.n();
    let homology = eprime_homology(ep);
    let mut checks = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let want: BTreeMap<i32, usize> = match () {
                _ if i == j && i < n => [(0, 1), (1, 1)].into(),
                _ if i == j => [(0, 1)].into(),
                _ if j == i + 1 => [(0, 1)].into(),
                _ if i == j + 1 => [(1, 1)].into(),
                _ => BTreeMap::new(),
            };
            let got: BTreeMap<i32, usize> = homology
                .get(&(i, j))
                .map(|h| h.iter().filter(|(_, &d)| d > 0).map(|(&t, &d)| (t, d)).collect())
                .unwrap_or_default();
            checks.push(Check::expect(
                format!("H(1_{i}E′1_{j}) by degree is {want:?}"),
                got == want,
                || format!("{got:?}"),
            ));
        }
    }
    checks
}

/// Check that `(i) ↦ [1_i]`, `(i|j) ↦ [α_{i,j}]` extends to an algebra
/// isomorphism `Aₙ → H(E′ₙ)`.
pub fn verify_iso_an(ep: &EPrime) -> Result<Vec<Check>, EndoError> {
    let n = ep.n();
    let an: QuotientAlgebra = build_named_algebra(NamedAlgebra::An, n).map_err(DgError::from)?;
    let mut checks = Vec::new();
    let mut homs = BTreeMap::new();
    for &b in ep.blocks.keys() {
        homs.insert(b, ep.block_complex(b).homology());
    }
    // class of the image of every basis word
    let mut class: Vec<Option<BitVec>> = Vec::new();
    for bw in an.basis() {
        let b = (bw.source, bw.target);
        let f = ep.maps.word_map(&bw.word)?;
        let c = ep.blocks[&b]
            .coordinates(&f)
            .and_then(|v| homs[&b].class_of(bw.degree, &v));
        checks.push(Check::expect(
            format!("image of {} is a cycle of E′", bw.word),
            c.is_some(),
            || ep.maps.describe(&f),
        ));
        class.push(c);
    }
    for (&b, h) in &homs {
        let words = an.block_indices(b.0, b.1);
        let expected: BTreeMap<i32, usize> = an
            .idempotent_block(b.0, b.1)
            .map_err(DgError::from)?
            .into_iter()
            .map(|(d, v)| (d, v.len()))
            .collect();
        let mut bases_ok = h.dims() == expected;
        for (&t, &dim) in &expected {
            let mut ech = Echelon::new(dim);
            for &w in &words {
                if an.basis()[w].degree == t {
                    if let Some(c) = &class[w] {
                        bases_ok &= c.len() == dim && ech.insert(c);
                    } else {
                        bases_ok = false;
                    }
                }
            }
            bases_ok &= ech.rank() == dim;
        }
        checks.push(Check::expect(
            format!(
                "H(1_{}E′1_{}) has the classes of (({})Aₙ({})) as a basis",
                b.0, b.1, b.0, b.1
            ),
            bases_ok,
            || format!("H dims {:?}, Aₙ dims {:?}", h.dims(), expected),
        ));
    }
    // structure constants
    let mut bad = None;
    'outer: for u in 0..an.dim() {
        for v in 0..an.dim() {
            let (bu, bv) = (&an.basis()[u], &an.basis()[v]);
            if bu.target != bv.source {
                continue;
            }
            let b = (bu.source, bv.target);
            let t = bu.degree + bv.degree;
            let f = ep
                .maps
                .compose(&ep.maps.word_map(&bu.word)?, &ep.maps.word_map(&bv.word)?);
            let lhs = ep.blocks[&b].coordinates(&f).and_then(|x| homs[&b].class_of(t, &x));
            let mut rhs = homs[&b].class_of(t, &BitVec::zeros(ep.blocks[&b].dim()));
            for k in an.product_of_basis(u, v) {
                match (&mut rhs, &class[*k as usize]) {
                    (Some(r), Some(c)) => r.xor_assign(c),
                    _ => rhs = None,
                }
            }
            if lhs.is_none() || lhs != rhs {
                bad = Some(format!("{} · {}", bu.word, bv.word));
                break 'outer;
            }
        }
    }
    checks.push(Check::expect(
        "structure constants of Aₙ and H(E′ₙ) agree",
        bad.is_none(),
        || bad.clone().unwrap(),
    ));
    Ok(checks)
}

/// Blockwise comparison of `H(E′ₙ)` with `H(Eₙ)` through the inclusion.
pub fn verify_quasi_iso_inclusion(ep: &EPrime) -> Vec<Check> {
    let mut checks = Vec::new();
    for (&b, blk) in &ep.blocks {
        let full = blk.hom.homology();
        let local = ep.block_complex(b);
        let lh = local.homology();
        let mut ok = full.dims() == lh.dims();
        let mut degrees: Vec<i32> = lh.dims().keys().copied().collect();
        degrees.extend(full.dims().keys().copied());
        degrees.sort_unstable();
        degrees.dedup();
        for t in degrees {
            let reps = lh.representatives(t);
            if reps.is_empty() {
                continue;
            }
            let dim_full = full.representatives(t).len();
            let mut ech = Echelon::new(dim_full);
            for r in reps {
                // named coordinates to Hom coordinates
                let mut v = BitVec::zeros(blk.hom.dim());
                for k in r.ones() {
                    v.xor_assign(&blk.vectors[k]);
                }
                match full.class_of(t, &v) {
                    Some(c) => {
                        ech.insert(&c);
                    }
                    None => ok = false,
                }
            }
            ok &= ech.rank() == reps.len() && ech.rank() == dim_full;
        }
        checks.push(Check::expect(
            format!("H(1_{}E′1_{}) → H(1_{}E1_{}) is an isomorphism", b.0, b.1, b.0, b.1),
            ok,
            || format!("E′ {:?}, E {:?}", lh.dims(), full.dims()),
        ));
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::failures;

    #[test]
    fn relations_hold() {
        for n in 2..=6 {
            let maps = build_named_maps(n).unwrap();
            let c = verify_generator_relations(&maps);
            assert!(failures(&c).is_empty(), "n={n}: {:#?}", failures(&c));
        }
    }

    #[test]
    fn eprime_blocks() {
        for n in 2..=5 {
            let (ep, c) = build_eprime(build_named_maps(n).unwrap()).unwrap();
            assert!(failures(&c).is_empty(), "n={n}: {:#?}", failures(&c));
            for i in 1..n {
                assert_eq!(ep.block(i, i).dim(), 4);
            }
            for i in 1..n.saturating_sub(1) {
                assert_eq!(ep.block(i, n).dim(), 0);
                assert_eq!(ep.block(n, i).dim(), 2);
            }
        }
    }

    #[test]
    fn homology_is_an() {
        for n in 2..=5 {
            let (ep, _) = build_eprime(build_named_maps(n).unwrap()).unwrap();
            let c = verify_iso_an(&ep).unwrap();
            assert!(failures(&c).is_empty(), "n={n}: {:#?}", failures(&c));
            let c = verify_homology_table(&ep);
            assert!(failures(&c).is_empty(), "n={n}: {:#?}", failures(&c));
            let c = verify_quasi_iso_inclusion(&ep);
            assert!(failures(&c).is_empty(), "n={n}: {:#?}", failures(&c));
        }
    }

    #[test]
    fn s_algebra() {
        for n in 2..=6 {
            let s = build_s(n).unwrap();
            assert_eq!(s.dim(), 8 * n - 12);
            let c = s.check_axioms();
            assert!(failures(&c).is_empty(), "n={n}: {:#?}", failures(&c));
        }
    }

    #[test]
    fn perturbed_h2_breaks_a_relation() {
        let mut maps = build_named_maps(4).unwrap();
        let h2 = maps.get(Gen::H(2)).unwrap().clone();
        let (&(k, l), y) = h2.components().iter().next().unwrap();
        // drop one identity component
        let mut y = y.clone();
        y.flip(y.first_one().unwrap());
        let broken = h2.with_component(k, l, y);
        maps.replace(Gen::H(2), broken);
        let c = verify_generator_relations(&maps);
        assert!(!failures(&c).is_empty());
    }
}
