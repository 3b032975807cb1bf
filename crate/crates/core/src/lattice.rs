//! Lattice model of packet spreading on a two-sheet tiled phase space.
//!
//! A walker moves one cell right with probability `℘` and one cell left
//! otherwise, one step per tick, so after `T` ticks it lies in `[-T, T]`.
//! A packet of `N` cells is the mean of `N` independent walkers. All
//! distributions are exact rationals; only the Gaussian comparison uses
//! floating point.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::exact::to_f64;
use crate::Rational;

/// Largest `N · T` accepted by [`n_cell_mean_pmf`].
pub const MAX_CELL_STEPS: u64 = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("drift must lie in [-1, 1]")]
    DriftOutOfRange,
    #[error("probability must lie in [0, 1]")]
    ProbabilityOutOfRange,
    #[error("parameter `{0}` must be positive")]
    NonpositiveParameter(&'static str),
    #[error("N * T = {0} exceeds the convolution guard")]
    TooLarge(u64),
    #[error("variance is zero for a deterministic walk")]
    DegenerateVariance,
}

impl LatticeError {
    pub fn variant(&self) -> &'static str {
        match self {
            LatticeError::DriftOutOfRange => "DriftOutOfRange",
            LatticeError::ProbabilityOutOfRange => "ProbabilityOutOfRange",
            LatticeError::NonpositiveParameter(_) => "NonpositiveParameter",
            LatticeError::TooLarge(_) => "TooLarge",
            LatticeError::DegenerateVariance => "DegenerateVariance",
        }
    }
}

/// Rectangular tiling with tiles of area `h/2`; a tile and its copy on the
/// other sheet make up area `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct TilingModel<T> {
    h: T,
    tile_width: T,
}

impl<T: Num + Clone + PartialOrd> TilingModel<T> {
    pub fn new(h: T, tile_width: T) -> Result<Self, LatticeError> {
        if h <= T::zero() {
            return Err(LatticeError::NonpositiveParameter("h"));
        }
        if tile_width <= T::zero() {
            return Err(LatticeError::NonpositiveParameter("tile_width"));
        }
        Ok(TilingModel { h, tile_width })
    }

    pub fn h(&self) -> T {
        self.h.clone()
    }

    pub fn tile_width(&self) -> T {
        self.tile_width.clone()
    }

    pub fn tile_height(&self) -> T {
        self.tile_area() / self.tile_width.clone()
    }

    pub fn tile_area(&self) -> T {
        self.h.clone() / (T::one() + T::one())
    }

    /// Area of a tile together with its copy on the other sheet.
    pub fn doubled_area(&self) -> T {
        self.tile_area() + self.tile_area()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sheet {
    Top,
    Bottom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkerState {
    pub cell: i64,
    pub sheet: Sheet,
    pub on_edge: bool,
}

impl WalkerState {
    pub fn new(cell: i64, sheet: Sheet) -> Self {
        WalkerState {
            cell,
            sheet,
            on_edge: false,
        }
    }

    /// One tick: a move to the neighboring cell, keeping the sheet.
    pub fn step(self, right: bool) -> Self {
        WalkerState {
            cell: if right { self.cell + 1 } else { self.cell - 1 },
            sheet: self.sheet,
            on_edge: false,
        }
    }
}

/// A projected state: a point of the `(q, p)` plane and how many sheet
/// points lie over it.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection<T> {
    pub q: T,
    pub p: T,
    pub multiplicity: u8,
}

/// Tile center for interior states (two sheets over it), left tile edge
/// for edge states (sheets identified there).
pub fn project_to_plane<T: Num + Clone + PartialOrd + FromPrimitive>(
    w: &WalkerState,
    m: &TilingModel<T>,
) -> Projection<T> {
    let two = T::one() + T::one();
    let cell = T::from_i64(w.cell).expect("cell index is representable");
    let p = m.tile_height() / two.clone();
    if w.on_edge {
        Projection {
            q: cell * m.tile_width(),
            p,
            multiplicity: 1,
        }
    } else {
        Projection {
            q: (cell * two.clone() + T::one()) * m.tile_width() / two,
            p,
            multiplicity: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkParams {
    pub prob: Rational,
    pub steps: u32,
    pub cells: u32,
    pub seed: u64,
}

impl WalkParams {
    pub fn new(prob: Rational, steps: u32, cells: u32, seed: u64) -> Result<Self, LatticeError> {
        check_prob(&prob)?;
        if cells == 0 {
            return Err(LatticeError::NonpositiveParameter("cells"));
        }
        Ok(WalkParams {
            prob,
            steps,
            cells,
            seed,
        })
    }
}

/// Probability mass on positions `k / denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeDistribution {
    denominator: u32,
    pmf: BTreeMap<i64, Rational>,
}

impl LatticeDistribution {
    pub fn denominator(&self) -> u32 {
        self.denominator
    }

    /// `(numerator, probability)` pairs in increasing position.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.pmf.iter().map(|(&k, p)| (k, p))
    }

    pub fn position(&self, numerator: i64) -> Rational {
        Rational::new(numerator.into(), self.denominator.into())
    }

    pub fn probability(&self, numerator: i64) -> Rational {
        self.pmf
            .get(&numerator)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn total(&self) -> Rational {
        self.pmf.values().fold(Rational::zero(), |a, p| a + p)
    }

    pub fn mean(&self) -> Rational {
        self.pmf
            .iter()
            .fold(Rational::zero(), |a, (&k, p)| a + self.position(k) * p)
    }

    pub fn variance(&self) -> Rational {
        let m = self.mean();
        self.pmf.iter().fold(Rational::zero(), |a, (&k, p)| {
            let d = self.position(k) - &m;
            a + &d * &d * p
        })
    }

    /// Whether every position with positive mass lies in `[-t, t]`.
    pub fn within_light_cone(&self, t: u32) -> bool {
        let bound = i64::from(t) * i64::from(self.denominator);
        self.pmf.keys().all(|&k| k.abs() <= bound)
    }

    /// Mass outside `[-t, t]`.
    pub fn mass_outside(&self, t: u32) -> Rational {
        let bound = i64::from(t) * i64::from(self.denominator);
        self.pmf
            .iter()
            .filter(|(&k, _)| k.abs() > bound)
            .fold(Rational::zero(), |a, (_, p)| a + p)
    }
}

fn check_prob(p: &Rational) -> Result<(), LatticeError> {
    if p.is_negative() || *p > Rational::one() {
        Err(LatticeError::ProbabilityOutOfRange)
    } else {
        Ok(())
    }
}

/// `℘ = (v̄ + 1) / 2`.
pub fn probability_from_drift(vbar: &Rational) -> Result<Rational, LatticeError> {
    if vbar.abs() > Rational::one() {
        return Err(LatticeError::DriftOutOfRange);
    }
    Ok((vbar + Rational::one()) / Rational::from_integer(2.into()))
}

/// `2℘ - 1`.
pub fn drift(prob: &Rational) -> Result<Rational, LatticeError> {
    check_prob(prob)?;
    Ok(prob * Rational::from_integer(2.into()) - Rational::one())
}

fn binomial_weights(t: u32, prob: &Rational) -> Vec<Rational> {
    let q = Rational::one() - prob;
    let mut c = BigInt::one();
    let mut out = Vec::with_capacity(t as usize + 1);
    for k in 0..=t {
        if k > 0 {
            c = c * BigInt::from(t - k + 1) / BigInt::from(k);
        }
        out.push(Rational::from_integer(c.clone()) * pow(prob, k) * pow(&q, t - k));
    }
    out
}

fn pow(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

/// Position `2k - T` with probability `C(T,k) ℘^k (1-℘)^{T-k}`.
pub fn exact_walk_pmf(steps: u32, prob: &Rational) -> Result<LatticeDistribution, LatticeError> {
    check_prob(prob)?;
    let mut pmf = BTreeMap::new();
    for (k, w) in binomial_weights(steps, prob).into_iter().enumerate() {
        if !w.is_zero() {
            pmf.insert(2 * k as i64 - i64::from(steps), w);
        }
    }
    Ok(LatticeDistribution {
        denominator: 1,
        pmf,
    })
}

/// Distribution of the mean of `cells` independent walks, by exact
/// convolution; positions live on `(1/cells) Z`.
pub fn n_cell_mean_pmf(
    steps: u32,
    prob: &Rational,
    cells: u32,
) -> Result<LatticeDistribution, LatticeError> {
    if cells == 0 {
        return Err(LatticeError::NonpositiveParameter("cells"));
    }
    let load = u64::from(steps) * u64::from(cells);
    if load > MAX_CELL_STEPS {
        return Err(LatticeError::TooLarge(load));
    }
    let single = exact_walk_pmf(steps, prob)?;
    let mut acc: BTreeMap<i64, Rational> = BTreeMap::from([(0, Rational::one())]);
    for _ in 0..cells {
        let mut next: BTreeMap<i64, Rational> = BTreeMap::new();
        for (&s, ps) in &acc {
            for (x, px) in single.iter() {
                let e = next.entry(s + x).or_insert_with(Rational::zero);
                *e += ps * px;
            }
        }
        acc = next;
    }
    Ok(LatticeDistribution {
        denominator: cells,
        pmf: acc,
    })
}

/// Empirical distribution of the packet mean over `trials` runs. Trial `i`
/// draws from ChaCha8 seeded with `seed ^ i`; each step goes right when a
/// uniform integer below the denominator of `℘` falls below its numerator.
pub fn monte_carlo_walk(
    params: &WalkParams,
    trials: u64,
) -> Result<LatticeDistribution, LatticeError> {
    if trials == 0 {
        return Err(LatticeError::NonpositiveParameter("trials"));
    }
    let num = params
        .prob
        .numer()
        .to_u64()
        .ok_or(LatticeError::ProbabilityOutOfRange)?;
    let den = params
        .prob
        .denom()
        .to_u64()
        .ok_or(LatticeError::ProbabilityOutOfRange)?;
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for i in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ i);
        let mut sum = 0i64;
        for _ in 0..params.cells {
            let mut w = WalkerState::new(0, Sheet::Top);
            for _ in 0..params.steps {
                w = w.step(rng.random_range(0..den) < num);
            }
            sum += w.cell;
        }
        *counts.entry(sum).or_insert(0) += 1;
    }
    let pmf = counts
        .into_iter()
        .map(|(k, c)| (k, Rational::new(BigInt::from(c), BigInt::from(trials))))
        .collect();
    Ok(LatticeDistribution {
        denominator: params.cells,
        pmf,
    })
}

/// Exact binomial walk against its Gaussian approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianReport {
    pub steps: u32,
    pub prob: Rational,
    pub mean: f64,
    pub sigma: f64,
    /// `sup_x |F_binomial(x) - Φ(x)|`, checked on both sides of every jump.
    pub max_cdf_gap: f64,
    /// The same supremum over support points with `|x - mean| <= 2σ`.
    pub max_cdf_gap_within_2sigma: f64,
    /// `0.4748 (℘² + (1-℘)²) / sqrt(℘(1-℘)) / sqrt(T)`.
    pub berry_esseen_bound: f64,
    pub gaussian_mass_outside_light_cone: f64,
    pub binomial_mass_outside_light_cone: Rational,
}

/// Berry–Esseen constant used in [`GaussianReport::berry_esseen_bound`].
pub const BERRY_ESSEEN_C: f64 = 0.4748;

pub fn gaussian_compare(steps: u32, prob: &Rational) -> Result<GaussianReport, LatticeError> {
    check_prob(prob)?;
    if steps == 0 {
        return Err(LatticeError::NonpositiveParameter("steps"));
    }
    if prob.is_zero() || prob.is_one() {
        return Err(LatticeError::DegenerateVariance);
    }
    let pmf = exact_walk_pmf(steps, prob)?;
    let p = to_f64(prob);
    let t = f64::from(steps);
    let mean = t * (2.0 * p - 1.0);
    let sigma = (4.0 * t * p * (1.0 - p)).sqrt();
    let normal = Normal::new(mean, sigma).expect("positive sigma");
    let (mut gap, mut gap2) = (0.0f64, 0.0f64);
    let mut below = Rational::zero();
    for (k, w) in pmf.iter() {
        let x = k as f64;
        let phi = normal.cdf(x);
        let left = to_f64(&below);
        below += w;
        let right = to_f64(&below);
        let g = (left - phi).abs().max((right - phi).abs());
        gap = gap.max(g);
        if (x - mean).abs() <= 2.0 * sigma {
            gap2 = gap2.max(g);
        }
    }
    let q = 1.0 - p;
    let berry_esseen_bound = BERRY_ESSEEN_C * (p * p + q * q) / (p * q).sqrt() / t.sqrt();
    let gaussian_mass_outside_light_cone = normal.cdf(-t) + normal.sf(t);
    Ok(GaussianReport {
        steps,
        prob: prob.clone(),
        mean,
        sigma,
        max_cdf_gap: gap,
        max_cdf_gap_within_2sigma: gap2,
        berry_esseen_bound,
        gaussian_mass_outside_light_cone,
        binomial_mass_outside_light_cone: pmf.mass_outside(steps),
    })
}
