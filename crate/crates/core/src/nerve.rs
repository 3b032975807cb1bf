//! Simplicial side of the poset comparison: nerves, barycentric
//! subdivision and rational Betti numbers.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::cochain::{cohomology_rank, CochainError, DegreeZero, MAX_ENTRIES, MAX_UNKNOWNS};
use crate::linalg::Matrix;
use crate::semigroup::{poset_semigroup, Poset, SemigroupError};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NerveError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("empty simplex")]
    EmptySimplex,
    #[error("problem too large for dense exact elimination ({rows} x {cols})")]
    TooLarge { rows: usize, cols: usize },
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
}

impl NerveError {
    pub fn variant(&self) -> &'static str {
        match self {
            NerveError::UnknownVertex(_) => "UnknownVertex",
            NerveError::DuplicateVertex(_) => "DuplicateVertex",
            NerveError::EmptySimplex => "EmptySimplex",
            NerveError::TooLarge { .. } => "TooLarge",
            NerveError::Semigroup(e) => e.variant(),
            NerveError::Cochain(e) => e.variant(),
        }
    }
}

/// Finite abstract simplicial complex. Simplices are sorted vertex-index
/// lists; the global vertex order fixes the coboundary signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    simplices: BTreeSet<Vec<usize>>,
}

impl SimplicialComplex {
    /// Face closure of `maximal`; every listed vertex becomes a 0-simplex.
    pub fn from_maximal<S: AsRef<str>>(
        vertices: &[S],
        maximal: &[Vec<S>],
    ) -> Result<Self, NerveError> {
        let vertices: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(NerveError::DuplicateVertex(v.clone()));
            }
        }
        let mut k = SimplicialComplex {
            vertices,
            simplices: BTreeSet::new(),
        };
        for i in 0..k.vertices.len() {
            k.simplices.insert(vec![i]);
        }
        for m in maximal {
            if m.is_empty() {
                return Err(NerveError::EmptySimplex);
            }
            let mut idx = m
                .iter()
                .map(|v| {
                    k.vertices
                        .iter()
                        .position(|w| w == v.as_ref())
                        .ok_or_else(|| NerveError::UnknownVertex(v.as_ref().into()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            idx.sort_unstable();
            idx.dedup();
            k.insert_with_faces(&idx);
        }
        Ok(k)
    }

    fn insert_with_faces(&mut self, simplex: &[usize]) {
        if !self.simplices.insert(simplex.to_vec()) || simplex.len() == 1 {
            return;
        }
        for skip in 0..simplex.len() {
            let face: Vec<usize> = simplex
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != skip)
                .map(|(_, &v)| v)
                .collect();
            self.insert_with_faces(&face);
        }
    }

    /// Boundary of the `n`-simplex on vertices `0..=n` (a triangulated `(n-1)`-sphere).
    pub fn simplex_boundary(n: usize) -> Self {
        let names: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
        let maximal: Vec<Vec<String>> = (0..=n)
            .map(|skip| {
                names
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != skip)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        Self::from_maximal(&names, &maximal).expect("well-formed")
    }

    /// The full `n`-simplex.
    pub fn simplex(n: usize) -> Self {
        let names: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
        Self::from_maximal(&names, std::slice::from_ref(&names)).expect("well-formed")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.simplices.iter()
    }

    /// Simplices of dimension `k`, in lexicographic order.
    pub fn simplices_of_dim(&self, k: usize) -> Vec<&Vec<usize>> {
        self.simplices.iter().filter(|s| s.len() == k + 1).collect()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }

    /// Number of simplices in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let dim = self.dimension().map_or(0, |d| d + 1);
        (0..dim).map(|k| self.simplices_of_dim(k).len()).collect()
    }

    pub fn simplex_name(&self, s: &[usize]) -> String {
        s.iter()
            .map(|&i| self.vertices[i].as_str())
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// Order complex of a poset: simplices are the chains `i0 < i1 < ... < in`.
pub fn nerve(p: &Poset) -> SimplicialComplex {
    let n = p.len();
    let mut simplices = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    while let Some(chain) = stack.pop() {
        let top = *chain.last().unwrap();
        for j in 0..n {
            if p.lt(top, j) {
                let mut c = chain.clone();
                c.push(j);
                stack.push(c);
            }
        }
        let mut sorted = chain;
        sorted.sort_unstable();
        simplices.insert(sorted);
    }
    SimplicialComplex {
        vertices: p.elements().to_vec(),
        simplices,
    }
}

/// Face poset of `k`: nonempty simplices ordered by inclusion. Its nerve is
/// the barycentric subdivision of `k`.
pub fn barycentric_subdivision(k: &SimplicialComplex) -> Poset {
    let faces: Vec<&Vec<usize>> = k.simplices.iter().collect();
    let names: Vec<String> = faces.iter().map(|s| k.simplex_name(s)).collect();
    let mut relations = Vec::new();
    for (i, a) in faces.iter().enumerate() {
        for (j, b) in faces.iter().enumerate() {
            if i != j && a.len() < b.len() && a.iter().all(|v| b.contains(v)) {
                relations.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    Poset::from_order(&names, &relations).expect("face inclusion is a partial order")
}

/// Matrix of the simplicial coboundary `C^i -> C^{i+1}`, rows indexed by
/// `(i+1)`-simplices and columns by `i`-simplices; removing the vertex in
/// position `j` contributes `(-1)^j`.
pub fn simplicial_coboundary(
    k: &SimplicialComplex,
    i: usize,
) -> Result<Matrix<Rational>, NerveError> {
    let cols = k.simplices_of_dim(i);
    let rows = k.simplices_of_dim(i + 1);
    if cols.len() > MAX_UNKNOWNS || rows.len().saturating_mul(cols.len()) > MAX_ENTRIES {
        return Err(NerveError::TooLarge {
            rows: rows.len(),
            cols: cols.len(),
        });
    }
    let col_of: std::collections::HashMap<&Vec<usize>, usize> =
        cols.iter().enumerate().map(|(c, s)| (*s, c)).collect();
    let mut m = Matrix::zeros(rows.len(), cols.len());
    for (r, s) in rows.iter().enumerate() {
        for j in 0..s.len() {
            let face: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|&(x, _)| x != j)
                .map(|(_, &v)| v)
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            m.set(r, col_of[&face], Rational::from_integer(sign.into()));
        }
    }
    Ok(m)
}

/// Rational Betti numbers `b_0..=b_max_degree`.
pub fn simplicial_cohomology_ranks(
    k: &SimplicialComplex,
    max_degree: usize,
) -> Result<Vec<usize>, NerveError> {
    let mut ranks = Vec::with_capacity(max_degree + 2);
    for i in 0..=max_degree {
        ranks.push(simplicial_coboundary(k, i)?.rank());
    }
    Ok((0..=max_degree)
        .map(|i| {
            let cochains = k.simplices_of_dim(i).len();
            let prev = if i == 0 { 0 } else { ranks[i - 1] };
            cochains - ranks[i] - prev
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComparisonRow {
    pub degree: usize,
    pub semigroup_rank: usize,
    pub simplicial_rank: usize,
}

impl ComparisonRow {
    pub fn matches(&self) -> bool {
        self.semigroup_rank == self.simplicial_rank
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonReport {
    pub convention: DegreeZero,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(ComparisonRow::matches)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,semigroup_rank,simplicial_rank,match\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.degree,
                r.semigroup_rank,
                r.simplicial_rank,
                r.matches()
            );
        }
        out
    }
}

/// Semigroup-cochain cohomology of the poset semigroup of `p` next to the
/// Betti numbers of its nerve, degrees `0..=max_degree`.
pub fn compare_poset_cohomology(
    p: &Poset,
    max_degree: usize,
    convention: DegreeZero,
) -> Result<ComparisonReport, NerveError> {
    let s = poset_semigroup(p)?;
    let betti = simplicial_cohomology_ranks(&nerve(p), max_degree)?;
    let mut rows = Vec::with_capacity(max_degree + 1);
    for (degree, &simplicial_rank) in betti.iter().enumerate() {
        let semigroup_rank = cohomology_rank(&s, degree, convention)?.cohomology;
        rows.push(ComparisonRow {
            degree,
            semigroup_rank,
            simplicial_rank,
        });
    }
    Ok(ComparisonReport { convention, rows })
}

/// `δ_{i+1} δ_i = 0` as matrices.
pub fn coboundary_squares_to_zero(k: &SimplicialComplex, i: usize) -> Result<bool, NerveError> {
    let a = simplicial_coboundary(k, i)?;
    let b = simplicial_coboundary(k, i + 1)?;
    Ok(b.mul(&a).is_zero())
}
