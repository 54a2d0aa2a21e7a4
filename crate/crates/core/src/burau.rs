//! Temperley-Lieb and braid matrices on `V_{n-1}` over `ℤ[q, q⁻¹]`, their
//! relations, and the comparison of `u_i` at `q = -1` with the classes of
//! the cup-cap functors on simples.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::dgalg::{an_shriek_dg, Side};
use crate::homalg::{cupcap_on_simple, HomError, Resolutions};
use crate::report::Check;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BurauError {
    #[error("generator index {index} outside 1..={max}")]
    OutOfRange { index: usize, max: usize },
    #[error("n = {0} is below 2")]
    TooSmall(usize),
    #[error(transparent)]
    Hom(#[from] HomError),
}

/// `Σ c_e q^e` with exact integer coefficients, no zero entries stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    pub fn monomial(c: i64, e: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, BigInt::from(c));
        p
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    /// Lowest and highest exponent, `None` for zero.
    pub fn exponent_range(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    /// Value at `q = ±1`, where negative powers are defined over `ℤ`.
    pub fn at_unit(&self, q_is_minus_one: bool) -> BigInt {
        self.terms
            .iter()
            .map(|(&e, c)| {
                if q_is_minus_one && e.rem_euclid(2) == 1 {
                    -c
                } else {
                    c.clone()
                }
            })
            .sum()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, c) in &self.terms {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let unit = mag.is_one();
            match e {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "q")?,
                1 => write!(f, "{mag}q")?,
                _ if unit => write!(f, "q^{e}")?,
                _ => write!(f, "{mag}q^{e}")?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&a, x) in &self.terms {
            for (&b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

/// A square matrix over `ℤ[q, q⁻¹]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    dim: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zero(dim: usize) -> Self {
        LaurentMatrix {
            dim,
            entries: vec![LaurentPoly::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = LaurentPoly::constant(1);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.entries[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: LaurentPoly) {
        self.entries[r * self.dim + c] = p;
    }

    pub fn scale(&self, p: &LaurentPoly) -> Self {
        LaurentMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| p * e).collect(),
        }
    }

    /// Entrywise value at `q = -1`.
    pub fn at_minus_one(&self) -> Vec<Vec<BigInt>> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c).at_unit(true)).collect())
            .collect()
    }
}

impl Add for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn add(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        LaurentMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn sub(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        LaurentMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn mul(self, rhs: &LaurentMatrix) -> LaurentMatrix {
        let d = self.dim;
        let mut out = LaurentMatrix::zero(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..d {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        out.entries[r * d + c] = &out.entries[r * d + c] + &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.dim)
            .map(|r| {
                let cells: Vec<String> = (0..self.dim).map(|c| self.get(r, c).to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

fn check_index(n: usize, i: usize) -> Result<(), BurauError> {
    if n < 2 {
        return Err(BurauError::TooSmall(n));
    }
    if i == 0 || i >= n {
        return Err(BurauError::OutOfRange { index: i, max: n - 1 });
    }
    Ok(())
}

/// `u_i` on `V_{n-1}`: only row `i` is nonzero, with `1` in column `i-1`,
/// `1+q` in column `i` and `q` in column `i+1`.
pub fn tl_matrix(n: usize, i: usize) -> Result<LaurentMatrix, BurauError> {
    check_index(n, i)?;
    let d = n - 1;
    let mut m = LaurentMatrix::zero(d);
    let r = i - 1;
    m.set(r, r, &LaurentPoly::constant(1) + &LaurentPoly::q());
    if i >= 2 {
        m.set(r, r - 1, LaurentPoly::constant(1));
    }
    if i < d {
        m.set(r, r + 1, LaurentPoly::q());
    }
    Ok(m)
}

/// `t_i = Id - u_i`.
pub fn braid_matrix(n: usize, i: usize) -> Result<LaurentMatrix, BurauError> {
    Ok(&LaurentMatrix::identity(n - 1) - &tl_matrix(n, i)?)
}

/// `t_i⁻¹ = q⁻¹(t_i + (q-1) Id)`.
pub fn braid_inverse(n: usize, i: usize) -> Result<LaurentMatrix, BurauError> {
    let t = braid_matrix(n, i)?;
    let shift = LaurentMatrix::identity(n - 1).scale(&(&LaurentPoly::q() - &LaurentPoly::constant(1)));
    Ok((&t + &shift).scale(&LaurentPoly::monomial(1, -1)))
}

/// All Temperley-Lieb and braid relations among the given matrices, with
/// `us[i-1] = u_i`.
pub fn verify_relations(us: &[LaurentMatrix]) -> Vec<Check> {
    let count = us.len();
    let d = us.first().map_or(0, |u| u.dim());
    let id = LaurentMatrix::identity(d);
    let q = LaurentPoly::q();
    let one_q = &LaurentPoly::constant(1) + &q;
    let ts: Vec<LaurentMatrix> = us.iter().map(|u| &id - u).collect();
    let shift = id.scale(&(&q - &LaurentPoly::constant(1)));
    let mut checks = Vec::new();
    let mut push = |name: String, ok: bool, witness: &dyn Fn() -> String| {
        checks.push(Check::expect(name, ok, witness));
    };
    for i in 0..count {
        let u = &us[i];
        let sq = u * u;
        push(
            format!("u_{}² = (1+q)u_{}", i + 1, i + 1),
            sq == u.scale(&one_q),
            &|| sq.to_string(),
        );
        if i + 1 < count {
            let v = &us[i + 1];
            let l = &(u * v) * u;
            push(
                format!("u_{0}u_{1}u_{0} = q u_{0}", i + 1, i + 2),
                l == u.scale(&q),
                &|| l.to_string(),
            );
            let r = &(v * u) * v;
            push(
                format!("u_{1}u_{0}u_{1} = q u_{1}", i + 1, i + 2),
                r == v.scale(&q),
                &|| r.to_string(),
            );
            let (t, s) = (&ts[i], &ts[i + 1]);
            let a = &(t * s) * t;
            let b = &(s * t) * s;
            push(
                format!("t_{0}t_{1}t_{0} = t_{1}t_{0}t_{1}", i + 1, i + 2),
                a == b,
                &|| format!("{a} vs {b}"),
            );
        }
        for j in i + 2..count {
            let (a, b) = (u * &us[j], &us[j] * u);
            push(
                format!("u_{}u_{} = u_{}u_{}", i + 1, j + 1, j + 1, i + 1),
                a == b,
                &|| format!("{a} vs {b}"),
            );
            let (a, b) = (&ts[i] * &ts[j], &ts[j] * &ts[i]);
            push(
                format!("t_{}t_{} = t_{}t_{}", i + 1, j + 1, j + 1, i + 1),
                a == b,
                &|| format!("{a} vs {b}"),
            );
        }
        let inv = (&ts[i] + &shift).scale(&LaurentPoly::monomial(1, -1));
        let prod = &ts[i] * &inv;
        push(format!("t_{0} q⁻¹(t_{0} + (q-1)) = Id", i + 1), prod == id, &|| {
            prod.to_string()
        });
    }
    checks
}

pub fn verify_tl_braid(n: usize) -> Result<Vec<Check>, BurauError> {
    let us = (1..n).map(|i| tl_matrix(n, i)).collect::<Result<Vec<_>, _>>()?;
    Ok(verify_relations(&us))
}

/// The matrix of `[𝔘_i]` on `[L_1], …, [L_{n-1}]` and the comparison with
/// `u_i` and `t_i` at `q = -1`.
#[derive(Clone, Debug, Serialize)]
pub struct Decategorification {
    pub i: usize,
    /// `cupcap[j-1]` maps shift `s` to the multiplicity of `L_i[s]` in `𝔘_i(L_j)`.
    pub cupcap: Vec<BTreeMap<i32, usize>>,
    /// Row `i` of `[𝔘_i]`.
    pub row: Vec<i64>,
    /// Row `i` of `u_i` at `q = -1`.
    pub expected: Vec<i64>,
}

/// `[L_i[s]] = (-1)^s [L_i]`.
pub fn decategorification_check(n: usize) -> Result<(Vec<Check>, Vec<Decategorification>), BurauError> {
    if n < 2 {
        return Err(BurauError::TooSmall(n));
    }
    let dg = an_shriek_dg(n).map_err(HomError::from)?;
    let left = Resolutions::new(&dg, Side::Left)?;
    let right = Resolutions::new(&dg, Side::Right)?;
    let d = n - 1;
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for i in 1..n {
        let mut class = LaurentMatrix::zero(d);
        let mut cupcap = Vec::new();
        for j in 1..n {
            let cc = cupcap_on_simple(&dg, &left, &right, i, j)?;
            let entry: i64 = cc
                .shifts
                .iter()
                .map(|(&s, &m)| if s.rem_euclid(2) == 1 { -(m as i64) } else { m as i64 })
                .sum();
            class.set(i - 1, j - 1, LaurentPoly::constant(entry));
            cupcap.push(cc.shifts);
        }
        let u = tl_matrix(n, i)?.at_minus_one();
        let got = class.at_minus_one();
        checks.push(Check::expect(format!("[𝔘_{i}] = u_{i} at q = -1"), got == u, || {
            format!("{:?} vs {:?}", got[i - 1], u[i - 1])
        }));
        let t = braid_matrix(n, i)?.at_minus_one();
        let tc = (&LaurentMatrix::identity(d) - &class).at_minus_one();
        checks.push(Check::expect(format!("[𝔗_{i}] = t_{i} at q = -1"), tc == t, || {
            format!("{tc:?} vs {t:?}")
        }));
        let to_i64 = |v: &[BigInt]| v.iter().map(|x| i64::try_from(x).unwrap_or(i64::MAX)).collect();
        rows.push(Decategorification {
            i,
            cupcap,
            row: to_i64(&got[i - 1]),
            expected: to_i64(&u[i - 1]),
        });
    }
    Ok((checks, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::all_passed;

    #[test]
    fn u1_for_n3() {
        let u = tl_matrix(3, 1).unwrap();
        assert_eq!(u.to_string(), "[[1 + q, q], [0, 0]]");
    }

    #[test]
    fn relations_for_small_n() {
        for n in 2..=8 {
            let c = verify_tl_braid(n).unwrap();
            assert!(all_passed(&c), "{c:?}");
        }
    }

    #[test]
    fn corrupted_u2_fails() {
        let mut us: Vec<_> = (1..5).map(|i| tl_matrix(5, i).unwrap()).collect();
        us[1].set(1, 2, LaurentPoly::constant(1));
        assert!(!all_passed(&verify_relations(&us)));
    }

    #[test]
    fn inverse_formula() {
        let n = 4;
        for i in 1..n {
            let p = &braid_matrix(n, i).unwrap() * &braid_inverse(n, i).unwrap();
            assert_eq!(p, LaurentMatrix::identity(n - 1));
        }
    }

    #[test]
    fn specialization_is_multiplicative() {
        let a = &LaurentPoly::monomial(3, -2) + &LaurentPoly::q();
        let b = &LaurentPoly::constant(1) - &LaurentPoly::monomial(2, 3);
        for sign in [false, true] {
            assert_eq!((&a * &b).at_unit(sign), a.at_unit(sign) * b.at_unit(sign));
        }
    }

    #[test]
    fn decategorification_commutes() {
        for n in 2..=6 {
            let (c, rows) = decategorification_check(n).unwrap();
            assert!(all_passed(&c), "n={n}: {c:?}");
            assert_eq!(rows.len(), n - 1);
        }
    }

    #[test]
    fn out_of_range_index() {
        assert!(matches!(tl_matrix(3, 3), Err(BurauError::OutOfRange { .. })));
        assert!(matches!(tl_matrix(3, 0), Err(BurauError::OutOfRange { .. })));
    }
}
