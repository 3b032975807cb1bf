//! Finite semigroups with zero, stored as full multiplication tables.
//!
//! Elements are identified by strings and kept in lexicographic order, so
//! every enumeration over a table (composable tuples, cochain values, matrix
//! rows) is deterministic. A table may carry an *object* structure: a set of
//! idempotents together with start/end maps on the nonzero elements, as for
//! the semigroup of a small category.

mod builders;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use builders::{
    matrix_unit_semigroup, monomial_exponents, monomial_semigroup, poset_semigroup,
    quiver_path_semigroup,
};
pub use builders::{Arrow, Poset, Quiver};

/// Index of an element inside its [`SemigroupTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub(crate) usize);

impl Elem {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("product is not associative on ({a}, {b}, {c})")]
    AssociativityViolation { a: String, b: String, c: String },
    #[error("zero does not absorb `{0}`")]
    ZeroNotAbsorbing(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("missing product for ({0}, {1})")]
    MissingProduct(String, String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),
    #[error("quiver has a directed cycle and no length bound; its path semigroup is infinite")]
    Infinite,
    #[error("invalid object structure: {0}")]
    InvalidObjects(String),
    #[error("subset is not closed under the product: {0} * {1} = {2}")]
    NotClosed(String, String, String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl SemigroupError {
    pub fn variant(&self) -> &'static str {
        match self {
            SemigroupError::AssociativityViolation { .. } => "AssociativityViolation",
            SemigroupError::ZeroNotAbsorbing(_) => "ZeroNotAbsorbing",
            SemigroupError::UnknownElement(_) => "UnknownElement",
            SemigroupError::DuplicateElement(_) => "DuplicateElement",
            SemigroupError::MissingProduct(..) => "MissingProduct",
            SemigroupError::InvalidPoset(_) => "InvalidPoset",
            SemigroupError::InvalidQuiver(_) => "InvalidQuiver",
            SemigroupError::Infinite => "Infinite",
            SemigroupError::InvalidObjects(_) => "InvalidObjects",
            SemigroupError::NotClosed(..) => "NotClosed",
            SemigroupError::InvalidParameter(_) => "InvalidParameter",
        }
    }
}

/// Idempotent objects with source and target maps. `start`/`end` are indexed
/// by element and are `None` exactly at zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Objects {
    ids: Vec<Elem>,
    start: Vec<Option<Elem>>,
    end: Vec<Option<Elem>>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct SemigroupTable {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    zero: Elem,
    table: Vec<Elem>,
    objects: Option<Objects>,
}

impl fmt::Debug for SemigroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SemigroupTable")
            .field("elements", &self.names)
            .field("zero", &self.names[self.zero.0])
            .field("has_objects", &self.objects.is_some())
            .finish()
    }
}

/// Raw object data in terms of pre-sorting indices, used by the builders.
pub(crate) struct RawObjects {
    pub ids: Vec<usize>,
    pub start: Vec<Option<usize>>,
    pub end: Vec<Option<usize>>,
}

impl SemigroupTable {
    /// Validates and builds a table from element names and a total product map.
    pub fn build_from_table<S: AsRef<str>>(
        elements: &[S],
        zero: &str,
        product: &HashMap<(String, String), String>,
    ) -> Result<Self, SemigroupError> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let lookup: HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let zero_idx = *lookup
            .get(zero)
            .ok_or_else(|| SemigroupError::UnknownElement(zero.to_string()))?;
        let n = names.len();
        let mut raw = vec![0usize; n * n];
        for (i, a) in names.iter().enumerate() {
            for (j, b) in names.iter().enumerate() {
                let c = product
                    .get(&(a.clone(), b.clone()))
                    .ok_or_else(|| SemigroupError::MissingProduct(a.clone(), b.clone()))?;
                raw[i * n + j] = *lookup
                    .get(c.as_str())
                    .ok_or_else(|| SemigroupError::UnknownElement(c.clone()))?;
            }
        }
        Self::assemble(names, zero_idx, |i, j| raw[i * n + j], None)
    }

    /// Sorts names lexicographically, remaps the product, and validates.
    pub(crate) fn assemble(
        names: Vec<String>,
        zero: usize,
        mul: impl Fn(usize, usize) -> usize,
        objects: Option<RawObjects>,
    ) -> Result<Self, SemigroupError> {
        let n = names.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| names[a].cmp(&names[b]));
        let mut new_of_old = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            new_of_old[old] = new;
        }
        let sorted: Vec<String> = order.iter().map(|&i| names[i].clone()).collect();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in sorted.iter().enumerate() {
            if index.insert(name.clone(), Elem(i)).is_some() {
                return Err(SemigroupError::DuplicateElement(name.clone()));
            }
        }
        let mut table = vec![Elem(0); n * n];
        for (new_a, &old_a) in order.iter().enumerate() {
            for (new_b, &old_b) in order.iter().enumerate() {
                table[new_a * n + new_b] = Elem(new_of_old[mul(old_a, old_b)]);
            }
        }
        let objects = objects.map(|raw| {
            let mut start = vec![None; n];
            let mut end = vec![None; n];
            for old in 0..n {
                start[new_of_old[old]] = raw.start[old].map(|s| Elem(new_of_old[s]));
                end[new_of_old[old]] = raw.end[old].map(|s| Elem(new_of_old[s]));
            }
            let mut ids: Vec<Elem> = raw.ids.iter().map(|&o| Elem(new_of_old[o])).collect();
            ids.sort();
            Objects { ids, start, end }
        });
        let s = SemigroupTable {
            names: sorted,
            index,
            zero: Elem(new_of_old[zero]),
            table,
            objects,
        };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<(), SemigroupError> {
        let z = self.zero;
        for a in self.elements() {
            if self.mul(z, a) != z || self.mul(a, z) != z {
                return Err(SemigroupError::ZeroNotAbsorbing(self.name(a).to_string()));
            }
        }
        for a in self.elements() {
            for b in self.elements() {
                let ab = self.mul(a, b);
                for c in self.elements() {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(SemigroupError::AssociativityViolation {
                            a: self.name(a).to_string(),
                            b: self.name(b).to_string(),
                            c: self.name(c).to_string(),
                        });
                    }
                }
            }
        }
        if let Some(obj) = &self.objects {
            self.validate_objects(obj)?;
        }
        Ok(())
    }

    fn validate_objects(&self, obj: &Objects) -> Result<(), SemigroupError> {
        let bad = |msg: String| Err(SemigroupError::InvalidObjects(msg));
        for &e in &obj.ids {
            if e == self.zero {
                return bad("zero cannot be an object".into());
            }
            if self.mul(e, e) != e {
                return bad(format!("object `{}` is not idempotent", self.name(e)));
            }
            if obj.start[e.0] != Some(e) || obj.end[e.0] != Some(e) {
                return bad(format!(
                    "object `{}` must start and end at itself",
                    self.name(e)
                ));
            }
        }
        for a in self.nonzero() {
            let (Some(s), Some(t)) = (obj.start[a.0], obj.end[a.0]) else {
                return bad(format!("`{}` has no start or end object", self.name(a)));
            };
            if obj.ids.binary_search(&s).is_err() || obj.ids.binary_search(&t).is_err() {
                return bad(format!(
                    "`{}` has a start or end that is not an object",
                    self.name(a)
                ));
            }
            for b in self.nonzero() {
                let ab = self.mul(a, b);
                if obj.end[a.0] != obj.start[b.0] && ab != self.zero {
                    return bad(format!(
                        "`{}` * `{}` is nonzero although they are not composable",
                        self.name(a),
                        self.name(b)
                    ));
                }
                if ab != self.zero && (obj.start[ab.0] != Some(s) || obj.end[ab.0] != obj.end[b.0])
                {
                    return bad(format!(
                        "start/end not compatible with `{}` * `{}`",
                        self.name(a),
                        self.name(b)
                    ));
                }
            }
        }
        Ok(())
    }

    /// Attaches an object structure given by names; validates it.
    pub fn with_objects(
        self,
        objects: &[String],
        start: &HashMap<String, String>,
        end: &HashMap<String, String>,
    ) -> Result<Self, SemigroupError> {
        let find = |name: &str| {
            self.element(name)
                .ok_or_else(|| SemigroupError::UnknownElement(name.to_string()))
        };
        let mut ids = objects
            .iter()
            .map(|o| find(o))
            .collect::<Result<Vec<_>, _>>()?;
        ids.sort();
        let n = self.len();
        let mut st = vec![None; n];
        let mut en = vec![None; n];
        for (map, out) in [(start, &mut st), (end, &mut en)] {
            for (k, v) in map {
                out[find(k)?.0] = Some(find(v)?);
            }
        }
        for &o in &ids {
            st[o.0] = Some(o);
            en[o.0] = Some(o);
        }
        let obj = Objects {
            ids,
            start: st,
            end: en,
        };
        self.validate_objects(&obj)?;
        Ok(SemigroupTable {
            objects: Some(obj),
            ..self
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn zero(&self) -> Elem {
        self.zero
    }

    pub fn is_zero(&self, a: Elem) -> bool {
        a == self.zero
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.names.len()).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + '_ {
        self.elements().filter(move |&e| e != self.zero)
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a.0 * self.names.len() + b.0]
    }

    /// Product of a nonempty tuple, left to right.
    pub fn product_of(&self, tuple: &[Elem]) -> Elem {
        let (first, rest) = tuple.split_first().expect("empty product");
        rest.iter().fold(*first, |acc, &b| self.mul(acc, b))
    }

    pub fn has_objects(&self) -> bool {
        self.objects.is_some()
    }

    pub fn objects(&self) -> Option<&[Elem]> {
        self.objects.as_ref().map(|o| o.ids.as_slice())
    }

    pub fn start(&self, a: Elem) -> Option<Elem> {
        self.objects.as_ref().and_then(|o| o.start[a.0])
    }

    pub fn end(&self, a: Elem) -> Option<Elem> {
        self.objects.as_ref().and_then(|o| o.end[a.0])
    }

    /// All `n`-tuples of nonzero elements with nonzero product, in
    /// lexicographic order of element indices.
    pub fn composable_tuples(&self, n: usize) -> Vec<Vec<Elem>> {
        assert!(n >= 1, "composable tuples have length at least 1");
        let mut layer: Vec<(Vec<Elem>, Elem)> = self.nonzero().map(|a| (vec![a], a)).collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for (tuple, prod) in &layer {
                for b in self.nonzero() {
                    let p = self.mul(*prod, b);
                    if p != self.zero {
                        let mut t = tuple.clone();
                        t.push(b);
                        next.push((t, p));
                    }
                }
            }
            layer = next;
        }
        layer.into_iter().map(|(t, _)| t).collect()
    }

    pub fn is_composable(&self, tuple: &[Elem]) -> bool {
        !tuple.is_empty()
            && tuple.iter().all(|&a| a.0 < self.len() && a != self.zero)
            && self.product_of(tuple) != self.zero
    }

    /// The subsemigroup on `subset` plus zero. Objects are kept only if every
    /// start and end of the subset lies in the subset.
    pub fn restrict(&self, subset: &[Elem]) -> Result<(SemigroupTable, Vec<Elem>), SemigroupError> {
        let mut keep: Vec<Elem> = subset.iter().copied().filter(|&e| e != self.zero).collect();
        keep.sort();
        keep.dedup();
        keep.push(self.zero);
        let pos: HashMap<Elem, usize> = keep.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        for &a in &keep {
            for &b in &keep {
                let ab = self.mul(a, b);
                if !pos.contains_key(&ab) {
                    return Err(SemigroupError::NotClosed(
                        self.name(a).to_string(),
                        self.name(b).to_string(),
                        self.name(ab).to_string(),
                    ));
                }
            }
        }
        let names: Vec<String> = keep.iter().map(|&e| self.name(e).to_string()).collect();
        let objects = self.objects.as_ref().and_then(|_| {
            let ids: Vec<usize> = keep
                .iter()
                .filter(|e| self.objects().unwrap().contains(e))
                .map(|e| pos[e])
                .collect();
            let mut start = Vec::with_capacity(keep.len());
            let mut end = Vec::with_capacity(keep.len());
            for &e in &keep {
                if e == self.zero {
                    start.push(None);
                    end.push(None);
                    continue;
                }
                start.push(Some(*pos.get(&self.start(e)?)?));
                end.push(Some(*pos.get(&self.end(e)?)?));
            }
            Some(RawObjects { ids, start, end })
        });
        let zero_pos = keep.len() - 1;
        let sub = SemigroupTable::assemble(
            names,
            zero_pos,
            |i, j| pos[&self.mul(keep[i], keep[j])],
            objects,
        )?;
        // Map each sub element back to the parent element.
        let embed = sub
            .elements()
            .map(|e| self.element(sub.name(e)).unwrap())
            .collect();
        Ok((sub, embed))
    }
}
