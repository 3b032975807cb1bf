//! Twists (multiplicative 2-cocycles) and the star products they define.
//!
//! A twist is stored through its additive exponent `F`, an additive
//! 2-cocycle. In real mode `f(a, b) = exp(ħ F(a, b))`; in circle mode
//! `f(a, b) = exp(2πi F(a, b) / τ)` with `F` taken modulo `τ`. Values stay
//! exact ([`Multiplier::Exp`] / [`Multiplier::Turn`]) until a star product is
//! evaluated in floating point.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_traits::{Float, One, Zero};
use thiserror::Error;

use crate::cochain::{coboundary_matrix, Cochain, CochainError, Coefficients, DegreeZero};
use crate::exact::{rem_euclid, to_f64};
use crate::semigroup::{
    monomial_exponents, monomial_semigroup, Elem, SemigroupError, SemigroupTable,
};
use crate::smith::{smith_normal_form, Cancelled};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TwistError {
    #[error("exponent is not an additive 2-cocycle")]
    NotACocycle,
    #[error("exponent must have degree 2, got {0}")]
    WrongDegree(usize),
    #[error("coefficient mismatch: {0}")]
    CoefficientMismatch(String),
    #[error("operands live on different semigroups")]
    SemigroupMismatch,
    #[error("no twist value on composable pair ({0}, {1})")]
    MissingValue(String, String),
    #[error("triviality check cancelled")]
    Cancelled,
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

impl TwistError {
    pub fn variant(&self) -> &'static str {
        match self {
            TwistError::NotACocycle => "NotACocycle",
            TwistError::WrongDegree(_) => "WrongDegree",
            TwistError::CoefficientMismatch(_) => "CoefficientMismatch",
            TwistError::SemigroupMismatch => "SemigroupMismatch",
            TwistError::MissingValue(..) => "MissingValue",
            TwistError::Cancelled => "Cancelled",
            TwistError::Semigroup(e) => e.variant(),
            TwistError::Cochain(e) => e.variant(),
        }
    }
}

impl From<Cancelled> for TwistError {
    fn from(_: Cancelled) -> Self {
        TwistError::Cancelled
    }
}

/// A nonzero scalar value of a twist.
#[derive(Debug, Clone, PartialEq)]
pub enum Multiplier {
    /// `e^x`.
    Exp(Rational),
    /// `e^{2πi x}`, with `x` kept in `[0, 1)`.
    Turn(Rational),
    Complex(Complex64),
}

impl Multiplier {
    pub fn one() -> Self {
        Multiplier::Exp(Rational::zero())
    }

    pub fn turn(x: Rational) -> Self {
        Multiplier::Turn(rem_euclid(&x, &Rational::one()))
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Multiplier::Exp(x) => Complex64::new(to_f64(x).exp(), 0.0),
            Multiplier::Turn(x) => Complex64::from_polar(1.0, std::f64::consts::TAU * to_f64(x)),
            Multiplier::Complex(z) => *z,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Multiplier::Complex(_))
    }

    /// Product, exact when both factors are of the same exact kind.
    pub fn mul(&self, other: &Multiplier) -> Multiplier {
        match (self, other) {
            (Multiplier::Exp(a), Multiplier::Exp(b)) => Multiplier::Exp(a + b),
            (Multiplier::Turn(a), Multiplier::Turn(b)) => Multiplier::turn(a + b),
            _ => Multiplier::Complex(self.to_complex() * other.to_complex()),
        }
    }

    /// Exact equality for same-kind exact values, otherwise
    /// `|z - w| <= tol * max(1, |z|, |w|)`.
    pub fn approx_eq(&self, other: &Multiplier, tol: f64) -> bool {
        match (self, other) {
            (Multiplier::Exp(a), Multiplier::Exp(b))
            | (Multiplier::Turn(a), Multiplier::Turn(b)) => a == b,
            _ => {
                let (z, w) = (self.to_complex(), other.to_complex());
                (z - w).norm() <= tol * 1f64.max(z.norm()).max(w.norm())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwistMode {
    /// `f = exp(ħ F)`.
    RealExponential(Rational),
    /// `f = exp(2πi F / τ)`.
    Circle(Rational),
}

/// Raw multiplicative 2-cochain: one value per composable pair.
pub type RawTwist = BTreeMap<(Elem, Elem), Multiplier>;

#[derive(Debug, Clone, PartialEq)]
pub struct Twist {
    mode: TwistMode,
    exponent: Cochain,
}

fn check_exponent(f: &Cochain) -> Result<(), TwistError> {
    if f.degree() != 2 {
        return Err(TwistError::WrongDegree(f.degree()));
    }
    if !f.is_cocycle()? {
        return Err(TwistError::NotACocycle);
    }
    Ok(())
}

/// `f_ħ = exp(ħ F)` for a rational additive 2-cocycle `F`.
pub fn exp_twist(f: &Cochain, hbar: Rational) -> Result<Twist, TwistError> {
    if f.coeffs() != &Coefficients::Rationals {
        return Err(TwistError::CoefficientMismatch(
            "real twists need rational exponents".into(),
        ));
    }
    check_exponent(f)?;
    Ok(Twist {
        mode: TwistMode::RealExponential(hbar),
        exponent: f.clone(),
    })
}

/// `f = exp(2πi F / τ)` for an additive 2-cocycle `F` with values mod `τ`.
pub fn circle_twist(f: &Cochain) -> Result<Twist, TwistError> {
    let Coefficients::ModTau(tau) = f.coeffs() else {
        return Err(TwistError::CoefficientMismatch(
            "circle twists need exponents mod τ".into(),
        ));
    };
    check_exponent(f)?;
    Ok(Twist {
        mode: TwistMode::Circle(tau.clone()),
        exponent: f.clone(),
    })
}

impl Twist {
    /// The twist with every value 1.
    pub fn identity(s: Arc<SemigroupTable>, mode: TwistMode) -> Result<Twist, TwistError> {
        let coeffs = match &mode {
            TwistMode::RealExponential(_) => Coefficients::Rationals,
            TwistMode::Circle(tau) => Coefficients::mod_tau(tau.clone())?,
        };
        Ok(Twist {
            mode,
            exponent: Cochain::zero(s, 2, coeffs),
        })
    }

    pub fn mode(&self) -> &TwistMode {
        &self.mode
    }

    pub fn exponent(&self) -> &Cochain {
        &self.exponent
    }

    pub fn semigroup(&self) -> &Arc<SemigroupTable> {
        self.exponent.semigroup()
    }

    /// `f(a, b)`, or `None` when `ab = 0`.
    pub fn value(&self, a: Elem, b: Elem) -> Option<Multiplier> {
        if !self.semigroup().is_composable(&[a, b]) {
            return None;
        }
        let x = self.exponent.get(&[a, b]);
        Some(match &self.mode {
            TwistMode::RealExponential(hbar) => Multiplier::Exp(hbar * x),
            TwistMode::Circle(tau) => Multiplier::turn(x / tau),
        })
    }

    /// Values on all composable pairs.
    pub fn values(&self) -> RawTwist {
        self.semigroup()
            .composable_tuples(2)
            .into_iter()
            .map(|t| ((t[0], t[1]), self.value(t[0], t[1]).unwrap()))
            .collect()
    }
}

/// Checks `f(a,b) f(ab,c) = f(b,c) f(a,bc)` on every composable triple.
pub fn verify_twist(s: &SemigroupTable, values: &RawTwist, tol: f64) -> Result<bool, TwistError> {
    let get = |a: Elem, b: Elem| {
        values
            .get(&(a, b))
            .ok_or_else(|| TwistError::MissingValue(s.name(a).to_string(), s.name(b).to_string()))
    };
    for t in s.composable_tuples(2) {
        get(t[0], t[1])?;
    }
    for t in s.composable_tuples(3) {
        let (a, b, c) = (t[0], t[1], t[2]);
        let lhs = get(a, b)?.mul(get(s.mul(a, b), c)?);
        let rhs = get(b, c)?.mul(get(a, s.mul(b, c))?);
        if !lhs.approx_eq(&rhs, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Scalars a star product can be evaluated in.
pub trait StarCoefficient: Clone + Zero + One + Add<Output = Self> + Mul<Output = Self> {
    fn from_multiplier(m: &Multiplier) -> Self;
}

impl<F: Float> StarCoefficient for Complex<F> {
    fn from_multiplier(m: &Multiplier) -> Self {
        let z = m.to_complex();
        Complex::new(F::from(z.re).unwrap(), F::from(z.im).unwrap())
    }
}

/// Finite linear combination of nonzero semigroup elements.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<T> {
    semigroup: Arc<SemigroupTable>,
    terms: BTreeMap<Elem, T>,
}

impl<T: StarCoefficient> AlgebraElement<T> {
    pub fn zero(semigroup: Arc<SemigroupTable>) -> Self {
        AlgebraElement {
            semigroup,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(semigroup: Arc<SemigroupTable>, a: Elem) -> Self {
        let mut u = Self::zero(semigroup);
        u.add_term(a, T::one());
        u
    }

    pub fn from_terms(
        semigroup: Arc<SemigroupTable>,
        terms: impl IntoIterator<Item = (Elem, T)>,
    ) -> Self {
        let mut u = Self::zero(semigroup);
        for (a, c) in terms {
            u.add_term(a, c);
        }
        u
    }

    /// Adds `c · a`; the zero element of the semigroup is the zero vector.
    pub fn add_term(&mut self, a: Elem, c: T) {
        if self.semigroup.is_zero(a) {
            return;
        }
        let sum = self.terms.remove(&a).map_or(c.clone(), |old| old + c);
        if !sum.is_zero() {
            self.terms.insert(a, sum);
        }
    }

    pub fn semigroup(&self) -> &Arc<SemigroupTable> {
        &self.semigroup
    }

    pub fn coeff(&self, a: Elem) -> T {
        self.terms.get(&a).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Elem, &T)> {
        self.terms.iter().map(|(&a, c)| (a, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: T) -> Self {
        Self::from_terms(
            self.semigroup.clone(),
            self.terms.iter().map(|(&a, x)| (a, x.clone() * c.clone())),
        )
    }
}

impl<F: Float> AlgebraElement<Complex<F>> {
    /// Largest coefficient difference in modulus.
    pub fn max_abs_diff(&self, other: &Self) -> F {
        self.terms
            .keys()
            .chain(other.terms.keys())
            .map(|&a| (self.coeff(a) - other.coeff(a)).norm())
            .fold(F::zero(), F::max)
    }
}

fn same_table(a: &Arc<SemigroupTable>, b: &Arc<SemigroupTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Bilinear extension of `a ∗ b = f(a, b) ab` (and `a ∗ b = 0` when `ab = 0`).
pub fn star<T: StarCoefficient>(
    t: &Twist,
    u: &AlgebraElement<T>,
    v: &AlgebraElement<T>,
) -> Result<AlgebraElement<T>, TwistError> {
    let s = t.semigroup();
    if !same_table(s, &u.semigroup) || !same_table(s, &v.semigroup) {
        return Err(TwistError::SemigroupMismatch);
    }
    let mut out = AlgebraElement::zero(s.clone());
    for (&a, x) in &u.terms {
        for (&b, y) in &v.terms {
            if let Some(m) = t.value(a, b) {
                out.add_term(s.mul(a, b), T::from_multiplier(&m) * x.clone() * y.clone());
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Triviality {
    /// The exponent is `δg` in its coefficient group; `g` is a 1-cochain.
    TrivialWith(Cochain),
    Nontrivial,
}

/// Decides whether the twist is a multiplicative coboundary
/// `f(a, b) = g(a) g(b) / g(ab)`, i.e. whether its exponent is `δg`.
///
/// Real mode solves `δg = F` over the rationals. Circle mode looks for
/// rational `g` and integer `k` with `δg = F + τk`, using the Smith form
/// `U D V = S` of the integer matrix `D` of `δ_1`: a solution exists iff
/// `(U F)_i / τ` is an integer for every row `i` past the rank.
/// `should_stop` is polled during the Smith reduction.
pub fn triviality_check(
    t: &Twist,
    mut should_stop: impl FnMut() -> bool,
) -> Result<Triviality, TwistError> {
    let s = t.semigroup().clone();
    let cm = coboundary_matrix(&s, 1, DegreeZero::Objects)?;
    let rhs: Vec<Rational> = cm.rows.iter().map(|r| t.exponent.get(r)).collect();
    let to_cochain = |g: Vec<Rational>, coeffs: Coefficients| {
        let mut c = Cochain::zero(s.clone(), 1, coeffs);
        for (col, v) in cm.cols.iter().zip(g) {
            c.set(col, v).expect("column tuples are composable");
        }
        c
    };
    match &t.mode {
        TwistMode::RealExponential(_) => Ok(match cm.matrix.solve(&rhs) {
            Some(g) => Triviality::TrivialWith(to_cochain(g, Coefficients::Rationals)),
            None => Triviality::Nontrivial,
        }),
        TwistMode::Circle(tau) => {
            if should_stop() {
                return Err(TwistError::Cancelled);
            }
            let d: Vec<Vec<BigInt>> = (0..cm.matrix.nrows())
                .map(|i| cm.matrix.row(i).iter().map(|x| x.to_integer()).collect())
                .collect();
            let snf = smith_normal_form(&d, cm.cols.len(), &mut should_stop)?;
            let rank = snf.rank();
            let mut h = vec![Rational::zero(); cm.cols.len()];
            for (i, urow) in snf.left.iter().enumerate() {
                let ci = urow
                    .iter()
                    .zip(&rhs)
                    .filter(|(u, _)| !u.is_zero())
                    .fold(Rational::zero(), |acc, (u, x)| {
                        acc + Rational::from_integer(u.clone()) * x
                    });
                if i < rank {
                    h[i] = ci / Rational::from_integer(snf.diagonal[i].clone());
                } else if !(ci / tau).is_integer() {
                    return Ok(Triviality::Nontrivial);
                }
            }
            let g: Vec<Rational> = snf
                .right
                .iter()
                .map(|vrow| {
                    vrow.iter()
                        .zip(&h)
                        .filter(|(v, _)| !v.is_zero())
                        .fold(Rational::zero(), |acc, (v, x)| {
                            acc + Rational::from_integer(v.clone()) * x
                        })
                })
                .collect();
            Ok(Triviality::TrivialWith(to_cochain(
                g,
                Coefficients::ModTau(tau.clone()),
            )))
        }
    }
}

/// [`triviality_check`] driven by a shared cancellation flag.
pub fn triviality_check_with_flag(
    t: &Twist,
    cancel: &AtomicBool,
) -> Result<Triviality, TwistError> {
    triviality_check(t, || cancel.load(Ordering::Relaxed))
}

/// The twist restricted to the subsemigroup on `subset` (plus zero). Returns
/// the restricted twist and, for each element of the subsemigroup, the
/// corresponding element of the original one.
pub fn restrict_twist(t: &Twist, subset: &[Elem]) -> Result<(Twist, Vec<Elem>), TwistError> {
    let (sub, embed) = t.semigroup().restrict(subset)?;
    let exponent = Cochain::from_fn(Arc::new(sub), 2, t.exponent.coeffs().clone(), |p| {
        t.exponent.get(&[embed[p[0].index()], embed[p[1].index()]])
    });
    Ok((
        Twist {
            mode: t.mode.clone(),
            exponent,
        },
        embed,
    ))
}

/// Truncated monomials in `x, y` with the antisymmetric exponent
/// `F(x^{a1} y^{b1}, x^{a2} y^{b2}) = (a1 b2 - b1 a2) / 2`.
pub fn quantum_plane_exponent(max_degree: u32) -> Result<Cochain, TwistError> {
    let s = Arc::new(monomial_semigroup(2, max_degree)?);
    let exps: Vec<Vec<u32>> = s
        .elements()
        .map(|e| monomial_exponents(s.name(e), 2).unwrap_or_default())
        .collect();
    Ok(Cochain::from_fn(s, 2, Coefficients::Rationals, |t| {
        let (m, n) = (&exps[t[0].index()], &exps[t[1].index()]);
        let det = i64::from(m[0]) * i64::from(n[1]) - i64::from(m[1]) * i64::from(n[0]);
        Rational::new(det.into(), 2.into())
    }))
}

/// Round trip of a triviality witness: re-exponentiating `δg` must give the
/// twist's values exactly.
pub fn witness_reproduces(t: &Twist, g: &Cochain) -> Result<bool, TwistError> {
    let dg = g.coboundary()?;
    let mine = t.exponent();
    Ok(t.semigroup().composable_tuples(2).iter().all(|p| {
        let d = dg.get(p) - mine.get(p);
        match mine.coeffs() {
            Coefficients::Rationals => d.is_zero(),
            Coefficients::ModTau(tau) => (d / tau).is_integer(),
        }
    }))
}
