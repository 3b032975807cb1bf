use std::collections::HashMap;

use super::{RawObjects, SemigroupError, SemigroupTable};

/// A finite partial order stored as a dense `leq` relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    elements: Vec<String>,
    leq: Vec<bool>,
}

impl Poset {
    /// Builds the poset generated by `relations` (pairs `(i, j)` meaning
    /// `i <= j`): the reflexive-transitive closure is taken, then
    /// antisymmetry is checked.
    pub fn new<S: AsRef<str>>(
        elements: &[S],
        relations: &[(S, S)],
    ) -> Result<Self, SemigroupError> {
        let mut p = Self::raw(elements, relations)?;
        let n = p.elements.len();
        for i in 0..n {
            p.leq[i * n + i] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if p.leq[i * n + k] {
                    for j in 0..n {
                        if p.leq[k * n + j] {
                            p.leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        p.check_antisymmetric()?;
        Ok(p)
    }

    /// Builds a poset from a relation that must already be a partial order
    /// (reflexive pairs are added, transitivity is checked, not computed).
    pub fn from_order<S: AsRef<str>>(
        elements: &[S],
        relations: &[(S, S)],
    ) -> Result<Self, SemigroupError> {
        let mut p = Self::raw(elements, relations)?;
        let n = p.elements.len();
        for i in 0..n {
            p.leq[i * n + i] = true;
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if p.leq[i * n + j] && p.leq[j * n + k] && !p.leq[i * n + k] {
                        return Err(SemigroupError::InvalidPoset(format!(
                            "not transitive: {} <= {} <= {}",
                            p.elements[i], p.elements[j], p.elements[k]
                        )));
                    }
                }
            }
        }
        p.check_antisymmetric()?;
        Ok(p)
    }

    fn raw<S: AsRef<str>>(elements: &[S], relations: &[(S, S)]) -> Result<Self, SemigroupError> {
        let elements: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut pos = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if pos.insert(e.as_str(), i).is_some() {
                return Err(SemigroupError::InvalidPoset(format!(
                    "duplicate element `{e}`"
                )));
            }
        }
        let n = elements.len();
        let mut leq = vec![false; n * n];
        for (a, b) in relations {
            let find = |s: &str| {
                pos.get(s)
                    .copied()
                    .ok_or_else(|| SemigroupError::InvalidPoset(format!("unknown element `{s}`")))
            };
            let (i, j) = (find(a.as_ref())?, find(b.as_ref())?);
            leq[i * n + j] = true;
        }
        Ok(Poset { elements, leq })
    }

    fn check_antisymmetric(&self) -> Result<(), SemigroupError> {
        let n = self.len();
        for i in 0..n {
            for j in i + 1..n {
                if self.leq(i, j) && self.leq(j, i) {
                    return Err(SemigroupError::InvalidPoset(format!(
                        "not antisymmetric: {} and {}",
                        self.elements[i], self.elements[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.len() + j]
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    /// All pairs `(i, j)` with `i <= j`, in index order.
    pub fn comparable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.leq(i, j))
            .collect()
    }

    /// Name of the basis element `e_ij` of the poset algebra.
    pub fn unit_name(&self, i: usize, j: usize) -> String {
        if self.elements.iter().all(|e| e.chars().count() == 1) {
            format!("e{}{}", self.elements[i], self.elements[j])
        } else {
            format!("e{}.{}", self.elements[i], self.elements[j])
        }
    }
}

/// `{ e_ij : i <= j } ∪ {0}` with `e_ij e_kl = δ_jk e_il`; the `e_ii` are the objects.
pub fn poset_semigroup(poset: &Poset) -> Result<SemigroupTable, SemigroupError> {
    let pairs = poset.comparable_pairs();
    let mut names: Vec<String> = pairs.iter().map(|&(i, j)| poset.unit_name(i, j)).collect();
    names.push("0".to_string());
    let zero = pairs.len();
    let idx: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mul = |a: usize, b: usize| {
        if a == zero || b == zero {
            return zero;
        }
        let (i, j) = pairs[a];
        let (k, l) = pairs[b];
        if j == k {
            idx[&(i, l)]
        } else {
            zero
        }
    };
    let mut start = vec![None; zero + 1];
    let mut end = vec![None; zero + 1];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        start[k] = Some(idx[&(i, i)]);
        end[k] = Some(idx[&(j, j)]);
    }
    let ids = (0..poset.len()).map(|i| idx[&(i, i)]).collect();
    SemigroupTable::assemble(names, zero, mul, Some(RawObjects { ids, start, end }))
}

/// Full `n x n` matrix units `e_ij` with zero, objects `e_ii`.
pub fn matrix_unit_semigroup(n: usize) -> Result<SemigroupTable, SemigroupError> {
    if n == 0 {
        return Err(SemigroupError::InvalidParameter(
            "matrix size must be positive".into(),
        ));
    }
    let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let all: Vec<(String, String)> = labels
        .iter()
        .flat_map(|a| labels.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    // A full relation is not a partial order, so build directly.
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let sep = if n < 10 { "" } else { "." };
    let mut names: Vec<String> = all.iter().map(|(a, b)| format!("e{a}{sep}{b}")).collect();
    names.push("0".into());
    let zero = pairs.len();
    let mul = |a: usize, b: usize| {
        if a == zero || b == zero {
            return zero;
        }
        let (i, j) = pairs[a];
        let (k, l) = pairs[b];
        if j == k {
            i * n + l
        } else {
            zero
        }
    };
    let mut start = vec![None; zero + 1];
    let mut end = vec![None; zero + 1];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        start[k] = Some(i * n + i);
        end[k] = Some(j * n + j);
    }
    let ids = (0..n).map(|i| i * n + i).collect();
    SemigroupTable::assemble(names, zero, mul, Some(RawObjects { ids, start, end }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    nodes: Vec<String>,
    arrows: Vec<Arrow>,
    max_len: Option<usize>,
}

impl Quiver {
    pub fn new(
        nodes: Vec<String>,
        arrows: Vec<Arrow>,
        max_len: Option<usize>,
    ) -> Result<Self, SemigroupError> {
        let bad = |m: String| Err(SemigroupError::InvalidQuiver(m));
        let mut seen = std::collections::HashSet::new();
        for n in &nodes {
            if !seen.insert(n.as_str()) {
                return bad(format!("duplicate node `{n}`"));
            }
        }
        let mut labels = std::collections::HashSet::new();
        for a in &arrows {
            if !labels.insert(a.label.as_str()) {
                return bad(format!("duplicate arrow label `{}`", a.label));
            }
            if a.label.is_empty() || a.label.contains('.') {
                return bad(format!(
                    "arrow label `{}` must be nonempty and free of '.'",
                    a.label
                ));
            }
            if !seen.contains(a.from.as_str()) || !seen.contains(a.to.as_str()) {
                return bad(format!("arrow `{}` references an unknown node", a.label));
            }
        }
        if max_len == Some(0) {
            return bad("max_len must be positive".into());
        }
        Ok(Quiver {
            nodes,
            arrows,
            max_len,
        })
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn max_len(&self) -> Option<usize> {
        self.max_len
    }

    fn node_index(&self, name: &str) -> usize {
        self.nodes
            .iter()
            .position(|n| n == name)
            .expect("validated node")
    }

    pub fn has_cycle(&self) -> bool {
        // Kahn's algorithm on the node graph.
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for a in &self.arrows {
            let (f, t) = (self.node_index(&a.from), self.node_index(&a.to));
            out[f].push(t);
            indeg[t] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut removed = 0;
        while let Some(v) = stack.pop() {
            removed += 1;
            for &w in &out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        removed != n
    }
}

/// Paths of length at most `max_len` (length-0 paths `e<node>` are the
/// objects) with concatenation; overlong or non-composable products are 0.
pub fn quiver_path_semigroup(q: &Quiver) -> Result<SemigroupTable, SemigroupError> {
    let bound = match q.max_len {
        Some(b) => b,
        None if q.has_cycle() => return Err(SemigroupError::Infinite),
        None => q.arrows.len(),
    };
    let n_nodes = q.nodes.len();
    // (start node, end node, arrow sequence)
    let mut paths: Vec<(usize, usize, Vec<usize>)> =
        (0..n_nodes).map(|v| (v, v, Vec::new())).collect();
    let mut frontier: Vec<usize> = (0..n_nodes).collect();
    for _ in 0..bound {
        let mut next = Vec::new();
        for &p in &frontier {
            let (s, e, seq) = paths[p].clone();
            for (ai, a) in q.arrows.iter().enumerate() {
                if q.node_index(&a.from) == e {
                    let mut s2 = seq.clone();
                    s2.push(ai);
                    paths.push((s, q.node_index(&a.to), s2));
                    next.push(paths.len() - 1);
                }
            }
        }
        frontier = next;
    }
    let key: HashMap<(usize, Vec<usize>), usize> = paths
        .iter()
        .enumerate()
        .map(|(i, (s, _, seq))| ((*s, seq.clone()), i))
        .collect();
    let mut names: Vec<String> = paths
        .iter()
        .map(|(s, _, seq)| {
            if seq.is_empty() {
                format!("e{}", q.nodes[*s])
            } else {
                seq.iter()
                    .map(|&a| q.arrows[a].label.as_str())
                    .collect::<Vec<_>>()
                    .join(".")
            }
        })
        .collect();
    names.push("0".to_string());
    let zero = paths.len();
    let mul = |a: usize, b: usize| {
        if a == zero || b == zero {
            return zero;
        }
        let (s1, e1, seq1) = &paths[a];
        let (s2, _, seq2) = &paths[b];
        if e1 != s2 || seq1.len() + seq2.len() > bound {
            return zero;
        }
        let mut seq = seq1.clone();
        seq.extend_from_slice(seq2);
        key[&(*s1, seq)]
    };
    let mut start = vec![None; zero + 1];
    let mut end = vec![None; zero + 1];
    for (i, (s, e, _)) in paths.iter().enumerate() {
        start[i] = Some(*s);
        end[i] = Some(*e);
    }
    let ids = (0..n_nodes).collect();
    SemigroupTable::assemble(names, zero, mul, Some(RawObjects { ids, start, end }))
}

fn variable_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

pub(crate) fn monomial_name(vars: &[String], exps: &[u32]) -> String {
    let mut s = String::new();
    for (v, &e) in vars.iter().zip(exps) {
        match e {
            0 => {}
            1 => s.push_str(v),
            _ => s.push_str(&format!("{v}^{e}")),
        }
    }
    if s.is_empty() {
        "1".to_string()
    } else {
        s
    }
}

/// Commutative monomials in `num_vars` variables of total degree at most
/// `max_degree`, plus 0; products of higher degree are 0. The unit monomial
/// is the single object.
pub fn monomial_semigroup(
    num_vars: usize,
    max_degree: u32,
) -> Result<SemigroupTable, SemigroupError> {
    if num_vars == 0 || max_degree == 0 {
        return Err(SemigroupError::InvalidParameter(
            "num_vars and max_degree must be at least 1".into(),
        ));
    }
    let mut exps: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..num_vars {
        exps = exps
            .into_iter()
            .flat_map(|e| {
                let used: u32 = e.iter().sum();
                (0..=max_degree - used).map(move |k| {
                    let mut e2 = e.clone();
                    e2.push(k);
                    e2
                })
            })
            .collect();
    }
    let vars = variable_names(num_vars);
    let idx: HashMap<Vec<u32>, usize> = exps
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    let mut names: Vec<String> = exps.iter().map(|e| monomial_name(&vars, e)).collect();
    names.push("0".into());
    let zero = exps.len();
    let unit = idx[&vec![0; num_vars]];
    let mul = |a: usize, b: usize| {
        if a == zero || b == zero {
            return zero;
        }
        let sum: Vec<u32> = exps[a].iter().zip(&exps[b]).map(|(x, y)| x + y).collect();
        idx.get(&sum).copied().unwrap_or(zero)
    };
    let mut start = vec![Some(unit); zero + 1];
    let mut end = vec![Some(unit); zero + 1];
    start[zero] = None;
    end[zero] = None;
    SemigroupTable::assemble(
        names,
        zero,
        mul,
        Some(RawObjects {
            ids: vec![unit],
            start,
            end,
        }),
    )
}

/// Exponent vector of a monomial element name produced by [`monomial_semigroup`].
pub fn monomial_exponents(name: &str, num_vars: usize) -> Option<Vec<u32>> {
    let vars = variable_names(num_vars);
    let mut out = vec![0u32; num_vars];
    if name == "1" {
        return Some(out);
    }
    let mut rest = name;
    while !rest.is_empty() {
        // Longest variable name that prefixes the remainder.
        let (vi, v) = vars
            .iter()
            .enumerate()
            .filter(|(_, v)| rest.starts_with(v.as_str()))
            .max_by_key(|(_, v)| v.len())?;
        rest = &rest[v.len()..];
        let mut e = 1u32;
        if let Some(r) = rest.strip_prefix('^') {
            let digits: String = r.chars().take_while(|c| c.is_ascii_digit()).collect();
            e = digits.parse().ok()?;
            rest = &r[digits.len()..];
        }
        out[vi] += e;
    }
    Some(out)
}
