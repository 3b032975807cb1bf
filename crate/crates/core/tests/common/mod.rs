//! Shared generators and an independent rank oracle for the integration
//! tests. The oracle rebuilds coboundary matrices straight from the
//! multiplication table and ranks them over the prime field `F_p`,
//! `p = 2^31 - 1`, so it shares no code with the exact elimination.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;
use taille::cochain::Cochain;
use taille::nerve::SimplicialComplex;
use taille::semigroup::{poset_semigroup, quiver_path_semigroup, Arrow};
use taille::{Coefficients, Elem, Poset, Quiver, Rational, SemigroupTable};

pub const P: u64 = 2_147_483_647;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn inv_mod(a: u64) -> u64 {
    let (mut r, mut base, mut e) = (1u64, a % P, P - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % P;
        }
        base = base * base % P;
        e >>= 1;
    }
    r
}

/// Rank over `F_p` of a matrix given by signed integer entries.
pub fn rank_mod_p(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> usize {
    let mut m = vec![vec![0u64; cols]; rows];
    for &(r, c, v) in entries {
        m[r][c] = (m[r][c] + v.rem_euclid(P as i64) as u64) % P;
    }
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = inv_mod(m[rank][c]);
        for x in m[rank].iter_mut() {
            *x = *x * inv % P;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + P - f * y % P) % P;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Composable `n`-tuples enumerated directly from the table.
pub fn tuples(s: &SemigroupTable, n: usize) -> Vec<Vec<Elem>> {
    let nz: Vec<Elem> = s.elements().filter(|&a| !s.is_zero(a)).collect();
    let mut out: Vec<(Vec<Elem>, Elem)> = nz.iter().map(|&a| (vec![a], a)).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for (t, prod) in &out {
            for &b in &nz {
                let p = s.mul(*prod, b);
                if !s.is_zero(p) {
                    let mut u = t.clone();
                    u.push(b);
                    next.push((u, p));
                }
            }
        }
        out = next;
    }
    out.into_iter().map(|(t, _)| t).collect()
}

/// `(cocycles, coboundaries, cohomology)` in degree `n`, with degree-0
/// cochains on objects when `objects_in_degree_zero`, else `C^0 = 0`.
pub fn oracle_ranks(
    s: &SemigroupTable,
    n: usize,
    objects_in_degree_zero: bool,
) -> (usize, usize, usize) {
    let dim = |k: usize| -> Vec<Vec<Elem>> {
        if k == 0 {
            if objects_in_degree_zero {
                s.objects()
                    .map(|o| o.iter().map(|&e| vec![e]).collect())
                    .unwrap_or_default()
            } else {
                Vec::new()
            }
        } else {
            tuples(s, k)
        }
    };
    let delta_rank = |k: usize| -> usize {
        let cols = dim(k);
        if cols.is_empty() {
            return 0;
        }
        let rows = tuples(s, k + 1);
        let index: HashMap<&Vec<Elem>, usize> =
            cols.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut entries = Vec::new();
        for (r, t) in rows.iter().enumerate() {
            let mut push = |face: Vec<Elem>, sign: i64| {
                if let Some(&c) = index.get(&face) {
                    entries.push((r, c, sign));
                }
            };
            if k == 0 {
                push(vec![s.end(t[0]).unwrap()], 1);
                push(vec![s.start(t[0]).unwrap()], -1);
                continue;
            }
            push(t[1..].to_vec(), 1);
            for i in 0..k {
                let mut f = t[..i].to_vec();
                f.push(s.mul(t[i], t[i + 1]));
                f.extend_from_slice(&t[i + 2..]);
                push(f, if (i + 1).is_multiple_of(2) { 1 } else { -1 });
            }
            push(
                t[..k].to_vec(),
                if (k + 1).is_multiple_of(2) { 1 } else { -1 },
            );
        }
        rank_mod_p(rows.len(), cols.len(), &entries)
    };
    let cochains = dim(n).len();
    let z = cochains - delta_rank(n);
    let b = if n == 0 { 0 } else { delta_rank(n - 1) };
    (z, b, z - b)
}

/// Betti numbers of `k` from boundary matrices over `F_p`.
pub fn oracle_betti(k: &SimplicialComplex, max_degree: usize) -> Vec<usize> {
    let faces = |d: usize| -> Vec<Vec<usize>> {
        k.simplices()
            .filter(|s| s.len() == d + 1)
            .cloned()
            .collect()
    };
    let rank = |d: usize| -> usize {
        let lower = faces(d);
        let upper = faces(d + 1);
        let index: HashMap<&Vec<usize>, usize> =
            lower.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut entries = Vec::new();
        for (r, s) in upper.iter().enumerate() {
            for j in 0..s.len() {
                let mut f = s.clone();
                f.remove(j);
                entries.push((r, index[&f], if j % 2 == 0 { 1 } else { -1 }));
            }
        }
        rank_mod_p(upper.len(), lower.len(), &entries)
    };
    (0..=max_degree)
        .map(|d| faces(d).len() - rank(d) - if d == 0 { 0 } else { rank(d - 1) })
        .collect()
}

/// Closure of a few random partial maps on `points` points under
/// composition (apply left factor first), with the empty map as zero.
/// `None` when the closure has more than `max_nonzero` elements.
pub fn random_transformation_semigroup<R: Rng>(
    rng: &mut R,
    points: usize,
    max_nonzero: usize,
) -> Option<SemigroupTable> {
    type Map = Vec<Option<usize>>;
    let gens = rng.random_range(1..=3);
    let mut elems: BTreeSet<Map> = BTreeSet::new();
    let zero: Map = vec![None; points];
    for _ in 0..gens {
        let m: Map = (0..points)
            .map(|_| {
                if rng.random_bool(0.3) {
                    None
                } else {
                    Some(rng.random_range(0..points))
                }
            })
            .collect();
        if m != zero {
            elems.insert(m);
        }
    }
    let compose = |a: &Map, b: &Map| -> Map { a.iter().map(|x| x.and_then(|y| b[y])).collect() };
    let gens: Vec<Map> = elems.iter().cloned().collect();
    loop {
        let mut added = false;
        let current: Vec<Map> = elems.iter().cloned().collect();
        for a in &current {
            for g in &gens {
                let c = compose(a, g);
                if c != zero && elems.insert(c) {
                    added = true;
                }
            }
        }
        if elems.len() > max_nonzero {
            return None;
        }
        if !added {
            break;
        }
    }
    let name = |m: &Map| -> String {
        let body: String = m
            .iter()
            .map(|x| x.map_or('-', |y| char::from(b'0' + y as u8)))
            .collect();
        format!("t{body}")
    };
    let mut all: Vec<Map> = elems.into_iter().collect();
    all.push(zero.clone());
    let names: Vec<String> = all.iter().map(name).collect();
    let mut product = HashMap::new();
    for a in &all {
        for b in &all {
            product.insert((name(a), name(b)), name(&compose(a, b)));
        }
    }
    Some(
        SemigroupTable::build_from_table(&names, &name(&zero), &product)
            .expect("composition is associative"),
    )
}

/// Random poset on up to four points with at most nine comparable pairs.
pub fn random_poset<R: Rng>(rng: &mut R) -> Poset {
    loop {
        let n = rng.random_range(1..=4);
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut rel = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(0.5) {
                    rel.push((names[i].clone(), names[j].clone()));
                }
            }
        }
        let p = Poset::new(&names, &rel).expect("upper-triangular relations form a poset");
        if p.comparable_pairs().len() <= 9 {
            return p;
        }
    }
}

/// Random quiver on up to three nodes with a length bound, kept to at
/// most nine nonzero paths.
pub fn random_quiver_semigroup<R: Rng>(rng: &mut R) -> SemigroupTable {
    loop {
        let n = rng.random_range(1..=3);
        let nodes: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
        let arrows: Vec<Arrow> = (0..rng.random_range(1..=3))
            .map(|k| Arrow {
                label: format!("a{k}"),
                from: nodes.choose(rng).unwrap().clone(),
                to: nodes.choose(rng).unwrap().clone(),
            })
            .collect();
        let q = Quiver::new(nodes, arrows, Some(rng.random_range(1..=3))).unwrap();
        let s = quiver_path_semigroup(&q).unwrap();
        if s.len() <= 10 {
            return s;
        }
    }
}

/// A random finite semigroup with zero, `|S| <= 10`, from one of three
/// families (partial maps, posets, truncated quivers).
pub fn random_semigroup<R: Rng>(rng: &mut R) -> SemigroupTable {
    loop {
        match rng.random_range(0..3) {
            0 => {
                if let Some(s) = random_transformation_semigroup(rng, 3, 9) {
                    return s;
                }
            }
            1 => return poset_semigroup(&random_poset(rng)).unwrap(),
            _ => return random_quiver_semigroup(rng),
        }
    }
}

/// Random cochain with small rational values on every tuple of its domain.
pub fn random_cochain<R: Rng>(
    rng: &mut R,
    s: &Arc<SemigroupTable>,
    degree: usize,
    coeffs: Coefficients,
) -> Cochain {
    Cochain::from_fn(s.clone(), degree, coeffs, |_| {
        q(rng.random_range(-6..=6), rng.random_range(1..=4))
    })
}

/// Table of `s` as a map of names, for comparisons independent of `Elem`.
pub fn named_table(s: &SemigroupTable) -> BTreeMap<(String, String), String> {
    let mut m = BTreeMap::new();
    for a in s.elements() {
        for b in s.elements() {
            m.insert(
                (s.name(a).to_string(), s.name(b).to_string()),
                s.name(s.mul(a, b)).to_string(),
            );
        }
    }
    m
}
