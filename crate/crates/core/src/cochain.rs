//! Additive cochains of a semigroup with zero.
//!
//! An `n`-cochain (`n >= 1`) is a function on the composable `n`-tuples, the
//! tuples of nonzero elements whose product is nonzero. Degree-0 cochains
//! are functions on the objects, with `δg(a) = g(end a) - g(start a)`.
//! Values live either in the rationals or in the rationals modulo a positive
//! rational `τ`, stored as canonical residues in `[0, τ)`.
//!
//! Only nonzero values are stored; a missing entry on a composable tuple is 0.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::rem_euclid;
use crate::linalg::Matrix;
use crate::semigroup::{Elem, SemigroupTable};
use crate::Rational;

/// Largest number of unknowns a dense rank computation accepts.
pub const MAX_UNKNOWNS: usize = 20_000;
/// Largest number of dense matrix entries a rank computation accepts.
pub const MAX_ENTRIES: usize = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CochainError {
    #[error("degree-0 coboundary needs an object structure on the semigroup")]
    Degree0WithoutObjects,
    #[error("coefficient mismatch: {0}")]
    CoefficientMismatch(String),
    #[error("composition index {index} out of range for degrees ({m}, {n})")]
    IndexOutOfRange { index: usize, m: usize, n: usize },
    #[error("tuple ({0}) is not composable")]
    NotInDomain(String),
    #[error("cochains live on different semigroups")]
    SemigroupMismatch,
    #[error("cochains have different degrees ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("problem too large for dense exact elimination ({rows} x {cols})")]
    TooLarge { rows: usize, cols: usize },
    #[error("modulus must be positive")]
    NonpositiveTau,
}

impl CochainError {
    pub fn variant(&self) -> &'static str {
        match self {
            CochainError::Degree0WithoutObjects => "Degree0WithoutObjects",
            CochainError::CoefficientMismatch(_) => "CoefficientMismatch",
            CochainError::IndexOutOfRange { .. } => "IndexOutOfRange",
            CochainError::NotInDomain(_) => "NotInDomain",
            CochainError::SemigroupMismatch => "SemigroupMismatch",
            CochainError::DegreeMismatch(..) => "DegreeMismatch",
            CochainError::TooLarge { .. } => "TooLarge",
            CochainError::NonpositiveTau => "NonpositiveTau",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coefficients {
    Rationals,
    ModTau(Rational),
}

impl Coefficients {
    pub fn mod_tau(tau: Rational) -> Result<Self, CochainError> {
        if tau.is_positive() {
            Ok(Coefficients::ModTau(tau))
        } else {
            Err(CochainError::NonpositiveTau)
        }
    }

    pub fn tau(&self) -> Option<&Rational> {
        match self {
            Coefficients::Rationals => None,
            Coefficients::ModTau(t) => Some(t),
        }
    }

    pub fn canonical(&self, x: Rational) -> Rational {
        match self {
            Coefficients::Rationals => x,
            Coefficients::ModTau(t) => rem_euclid(&x, t),
        }
    }
}

/// How degree-0 cochains are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DegreeZero {
    /// Functions on objects, `δg(a) = g(end a) - g(start a)`.
    #[default]
    Objects,
    /// `C^0 = 0`.
    Zero,
}

/// The tuples a degree-`n` cochain is defined on.
pub fn domain(s: &SemigroupTable, degree: usize) -> Vec<Vec<Elem>> {
    if degree == 0 {
        s.objects()
            .map(|o| o.iter().map(|&e| vec![e]).collect())
            .unwrap_or_default()
    } else {
        s.composable_tuples(degree)
    }
}

/// Signed faces of a composable tuple of length `n + 1 >= 2` under the
/// coboundary `C^n -> C^{n+1}`; faces that coincide are not merged.
pub fn coboundary_faces(s: &SemigroupTable, tuple: &[Elem]) -> Vec<(Vec<Elem>, i64)> {
    let len = tuple.len();
    debug_assert!(len >= 2);
    let n = len - 1;
    let mut faces = Vec::with_capacity(len + 1);
    faces.push((tuple[1..].to_vec(), 1));
    for i in 1..=n {
        let mut t = Vec::with_capacity(n);
        t.extend_from_slice(&tuple[..i - 1]);
        t.push(s.mul(tuple[i - 1], tuple[i]));
        t.extend_from_slice(&tuple[i + 1..]);
        faces.push((t, if i % 2 == 0 { 1 } else { -1 }));
    }
    faces.push((
        tuple[..n].to_vec(),
        if (n + 1).is_multiple_of(2) { 1 } else { -1 },
    ));
    faces
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    semigroup: Arc<SemigroupTable>,
    degree: usize,
    coeffs: Coefficients,
    values: BTreeMap<Vec<Elem>, Rational>,
}

impl Cochain {
    pub fn zero(semigroup: Arc<SemigroupTable>, degree: usize, coeffs: Coefficients) -> Self {
        Cochain {
            semigroup,
            degree,
            coeffs,
            values: BTreeMap::new(),
        }
    }

    /// Evaluates `f` on every tuple of the domain.
    pub fn from_fn(
        semigroup: Arc<SemigroupTable>,
        degree: usize,
        coeffs: Coefficients,
        mut f: impl FnMut(&[Elem]) -> Rational,
    ) -> Self {
        let mut c = Cochain::zero(semigroup, degree, coeffs);
        for t in domain(&c.semigroup, degree) {
            let v = c.coeffs.canonical(f(&t));
            if !v.is_zero() {
                c.values.insert(t, v);
            }
        }
        c
    }

    pub fn semigroup(&self) -> &Arc<SemigroupTable> {
        &self.semigroup
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &Coefficients {
        &self.coeffs
    }

    fn in_domain(&self, tuple: &[Elem]) -> bool {
        if self.degree == 0 {
            tuple.len() == 1
                && self
                    .semigroup
                    .objects()
                    .is_some_and(|o| o.contains(&tuple[0]))
        } else {
            tuple.len() == self.degree && self.semigroup.is_composable(tuple)
        }
    }

    fn describe(&self, tuple: &[Elem]) -> String {
        tuple
            .iter()
            .map(|&e| {
                if e.index() < self.semigroup.len() {
                    self.semigroup.name(e).to_string()
                } else {
                    "?".into()
                }
            })
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn set(&mut self, tuple: &[Elem], value: Rational) -> Result<(), CochainError> {
        if !self.in_domain(tuple) {
            return Err(CochainError::NotInDomain(self.describe(tuple)));
        }
        let v = self.coeffs.canonical(value);
        if v.is_zero() {
            self.values.remove(tuple);
        } else {
            self.values.insert(tuple.to_vec(), v);
        }
        Ok(())
    }

    /// Value on `tuple`; zero for tuples without a stored value.
    pub fn get(&self, tuple: &[Elem]) -> Rational {
        self.values
            .get(tuple)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Stored nonzero values in tuple order.
    pub fn nonzero_values(&self) -> impl Iterator<Item = (&Vec<Elem>, &Rational)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    fn same_semigroup(&self, other: &Cochain) -> Result<(), CochainError> {
        if Arc::ptr_eq(&self.semigroup, &other.semigroup) || *self.semigroup == *other.semigroup {
            Ok(())
        } else {
            Err(CochainError::SemigroupMismatch)
        }
    }

    fn require_rationals(&self) -> Result<(), CochainError> {
        match self.coeffs {
            Coefficients::Rationals => Ok(()),
            Coefficients::ModTau(_) => Err(CochainError::CoefficientMismatch(
                "products need rational coefficients, not R/τ".into(),
            )),
        }
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain, CochainError> {
        self.same_semigroup(other)?;
        if self.degree != other.degree {
            return Err(CochainError::DegreeMismatch(self.degree, other.degree));
        }
        if self.coeffs != other.coeffs {
            return Err(CochainError::CoefficientMismatch(
                "different coefficient groups".into(),
            ));
        }
        let mut out = self.clone();
        for (t, v) in &other.values {
            let sum = out.coeffs.canonical(out.get(t) + v);
            if sum.is_zero() {
                out.values.remove(t);
            } else {
                out.values.insert(t.clone(), sum);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Cochain {
        let mut out = Cochain::zero(self.semigroup.clone(), self.degree, self.coeffs.clone());
        for (t, v) in &self.values {
            let w = out.coeffs.canonical(v * c);
            if !w.is_zero() {
                out.values.insert(t.clone(), w);
            }
        }
        out
    }

    pub fn neg(&self) -> Cochain {
        self.scale(&-Rational::one())
    }

    /// The coboundary `δF` of degree `n + 1`.
    pub fn coboundary(&self) -> Result<Cochain, CochainError> {
        let s = self.semigroup.clone();
        if self.degree == 0 {
            if !s.has_objects() {
                return Err(CochainError::Degree0WithoutObjects);
            }
            return Ok(Cochain::from_fn(s.clone(), 1, self.coeffs.clone(), |t| {
                let a = t[0];
                self.get(&[s.end(a).unwrap()]) - self.get(&[s.start(a).unwrap()])
            }));
        }
        Ok(Cochain::from_fn(
            s.clone(),
            self.degree + 1,
            self.coeffs.clone(),
            |t| {
                coboundary_faces(&s, t)
                    .into_iter()
                    .fold(Rational::zero(), |acc, (face, sign)| {
                        let v = self.get(&face);
                        if sign > 0 {
                            acc + v
                        } else {
                            acc - v
                        }
                    })
            },
        ))
    }

    pub fn is_cocycle(&self) -> Result<bool, CochainError> {
        Ok(self.coboundary()?.is_zero())
    }

    /// Cup product `(F ⌣ G)(a_1..a_{m+n}) = F(a_1..a_m) G(a_{m+1}..a_{m+n})`.
    ///
    /// A degree-0 factor is read at the adjacent object: `g(start a_1)` on the
    /// left, `g(end a_m)` on the right.
    pub fn cup(&self, other: &Cochain) -> Result<Cochain, CochainError> {
        self.same_semigroup(other)?;
        self.require_rationals()?;
        other.require_rationals()?;
        let (m, n) = (self.degree, other.degree);
        let s = self.semigroup.clone();
        if (m == 0 || n == 0) && !s.has_objects() {
            return Err(CochainError::Degree0WithoutObjects);
        }
        Ok(Cochain::from_fn(
            s.clone(),
            m + n,
            Coefficients::Rationals,
            |t| match (m, n) {
                (0, 0) => self.get(t) * other.get(t),
                (0, _) => self.get(&[s.start(t[0]).unwrap()]) * other.get(t),
                (_, 0) => self.get(t) * other.get(&[s.end(t[m - 1]).unwrap()]),
                _ => self.get(&t[..m]) * other.get(&t[m..]),
            },
        ))
    }

    /// `(F ∘_i G)(a_1..a_{m+n-1}) = F(a_1..a_{i-1}, a_i⋯a_{i+n-1}, ..) G(a_i..a_{i+n-1})`,
    /// with `1 <= i <= m` and `n >= 1`.
    pub fn comp(&self, other: &Cochain, i: usize) -> Result<Cochain, CochainError> {
        self.same_semigroup(other)?;
        self.require_rationals()?;
        other.require_rationals()?;
        let (m, n) = (self.degree, other.degree);
        if i == 0 || i > m || n == 0 {
            return Err(CochainError::IndexOutOfRange { index: i, m, n });
        }
        let s = self.semigroup.clone();
        Ok(Cochain::from_fn(
            s.clone(),
            m + n - 1,
            Coefficients::Rationals,
            |t| {
                let inner = &t[i - 1..i - 1 + n];
                let g = other.get(inner);
                if g.is_zero() {
                    return g;
                }
                let mut contracted = Vec::with_capacity(m);
                contracted.extend_from_slice(&t[..i - 1]);
                contracted.push(s.product_of(inner));
                contracted.extend_from_slice(&t[i - 1 + n..]);
                self.get(&contracted) * g
            },
        ))
    }

    /// The signed sum `F ∘ G = Σ_i (-1)^{(i-1)(n-1)} F ∘_i G`.
    pub fn pre_lie(&self, other: &Cochain) -> Result<Cochain, CochainError> {
        let (m, n) = (self.degree, other.degree);
        let mut acc = Cochain::zero(
            self.semigroup.clone(),
            (m + n).saturating_sub(1),
            Coefficients::Rationals,
        );
        for i in 1..=m {
            let term = self.comp(other, i)?;
            let signed = if ((i - 1) * (n.saturating_sub(1))) % 2 == 0 {
                term
            } else {
                term.neg()
            };
            acc = acc.add(&signed)?;
        }
        if m == 0 {
            // No slots to compose into; surface the same error as `comp`.
            return Err(CochainError::IndexOutOfRange { index: 1, m, n });
        }
        Ok(acc)
    }

    /// Graded commutator `[F, G] = F ∘ G - (-1)^{(m-1)(n-1)} G ∘ F`.
    pub fn bracket(&self, other: &Cochain) -> Result<Cochain, CochainError> {
        let (m, n) = (self.degree, other.degree);
        let fg = self.pre_lie(other)?;
        let gf = other.pre_lie(self)?;
        let sign_even = ((m.saturating_sub(1)) * (n.saturating_sub(1))) % 2 == 0;
        fg.add(&if sign_even { gf.neg() } else { gf })
    }

    /// Reduces every value modulo `tau`.
    pub fn reduce_mod(&self, tau: &Rational) -> Result<Cochain, CochainError> {
        self.require_rationals()?;
        let coeffs = Coefficients::mod_tau(tau.clone())?;
        let mut out = Cochain::zero(self.semigroup.clone(), self.degree, coeffs);
        for (t, v) in &self.values {
            let w = out.coeffs.canonical(v.clone());
            if !w.is_zero() {
                out.values.insert(t.clone(), w);
            }
        }
        Ok(out)
    }

    /// Same values viewed in another coefficient group (re-canonicalized).
    pub fn with_coeffs(&self, coeffs: Coefficients) -> Cochain {
        let mut out = Cochain::zero(self.semigroup.clone(), self.degree, coeffs);
        for (t, v) in &self.values {
            let w = out.coeffs.canonical(v.clone());
            if !w.is_zero() {
                out.values.insert(t.clone(), w);
            }
        }
        out
    }
}

/// Matrix of `δ: C^n -> C^{n+1}` with rows indexed by the domain of degree
/// `n + 1` and columns by the domain of degree `n`.
#[derive(Debug, Clone)]
pub struct CoboundaryMatrix {
    pub rows: Vec<Vec<Elem>>,
    pub cols: Vec<Vec<Elem>>,
    pub matrix: Matrix<Rational>,
}

pub fn coboundary_matrix(
    s: &SemigroupTable,
    n: usize,
    convention: DegreeZero,
) -> Result<CoboundaryMatrix, CochainError> {
    let rows = domain(s, n + 1);
    let cols = match (n, convention) {
        (0, DegreeZero::Zero) => Vec::new(),
        _ => domain(s, n),
    };
    if cols.len() > MAX_UNKNOWNS || rows.len().saturating_mul(cols.len()) > MAX_ENTRIES {
        return Err(CochainError::TooLarge {
            rows: rows.len(),
            cols: cols.len(),
        });
    }
    let col_of: HashMap<&[Elem], usize> = cols
        .iter()
        .enumerate()
        .map(|(j, t)| (t.as_slice(), j))
        .collect();
    let mut matrix = Matrix::zeros(rows.len(), cols.len());
    if cols.is_empty() {
        return Ok(CoboundaryMatrix { rows, cols, matrix });
    }
    for (i, t) in rows.iter().enumerate() {
        let faces = if n == 0 {
            vec![
                (vec![s.end(t[0]).unwrap()], 1),
                (vec![s.start(t[0]).unwrap()], -1),
            ]
        } else {
            coboundary_faces(s, t)
        };
        for (face, sign) in faces {
            let j = col_of[face.as_slice()];
            matrix.add_to(i, j, Rational::from_integer(sign.into()));
        }
    }
    Ok(CoboundaryMatrix { rows, cols, matrix })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CohomologyRank {
    pub cocycles: usize,
    pub coboundaries: usize,
    pub cohomology: usize,
}

/// Dimensions of `Z^n`, `B^n`, `H^n` over the rationals. Without objects
/// `C^0` is empty under either convention.
pub fn cohomology_rank(
    s: &SemigroupTable,
    n: usize,
    convention: DegreeZero,
) -> Result<CohomologyRank, CochainError> {
    let cocycles = if n == 0 && convention == DegreeZero::Zero {
        0
    } else {
        coboundary_matrix(s, n, convention)?.matrix.nullity()
    };
    let coboundaries = if n == 0 {
        0
    } else {
        coboundary_matrix(s, n - 1, convention)?.matrix.rank()
    };
    Ok(CohomologyRank {
        cocycles,
        coboundaries,
        cohomology: cocycles - coboundaries,
    })
}
