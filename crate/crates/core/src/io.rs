//! JSON models for semigroups, complexes, cochains, twists, algebra
//! elements and paths.
//!
//! Exact values travel as rational strings (`"p/q"`, `"p"` or a finite
//! decimal). Cochain and twist documents may embed their semigroup under a
//! `"semigroup"` key; otherwise the caller supplies it.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cochain::{Cochain, CochainError, Coefficients};
use crate::exact::{format_rational, parse_rational};
use crate::geometry::{GeometryError, PhasePoint, PlanePolyline, SphereGeodesicPath, Vec3};
use crate::nerve::{NerveError, SimplicialComplex};
use crate::semigroup::{
    matrix_unit_semigroup, monomial_semigroup, poset_semigroup, quiver_path_semigroup, Arrow, Elem,
    Poset, Quiver, SemigroupError, SemigroupTable,
};
use crate::twist::{circle_twist, exp_twist, AlgebraElement, Twist, TwistError, TwistMode};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Schema(String),
    #[error("cannot parse `{0}` as an exact rational")]
    Rational(String),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Nerve(#[from] NerveError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl IoError {
    pub fn variant(&self) -> &'static str {
        match self {
            IoError::Json(_) => "Json",
            IoError::Schema(_) => "Schema",
            IoError::Rational(_) => "Rational",
            IoError::Semigroup(e) => e.variant(),
            IoError::Cochain(e) => e.variant(),
            IoError::Twist(e) => e.variant(),
            IoError::Nerve(e) => e.variant(),
            IoError::Geometry(e) => e.variant(),
        }
    }

    /// Name of the module whose error this wraps.
    pub fn module(&self) -> &'static str {
        match self {
            IoError::Json(_) | IoError::Schema(_) | IoError::Rational(_) => "io",
            IoError::Semigroup(_) => "semigroup",
            IoError::Cochain(_) => "cochain",
            IoError::Twist(_) => "twist",
            IoError::Nerve(_) => "nerve",
            IoError::Geometry(_) => "geometry",
        }
    }
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("models serialize")
}

fn rational(s: &str) -> Result<Rational, IoError> {
    parse_rational(s).map_err(|_| IoError::Rational(s.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub relations: Vec<(String, String)>,
}

impl PosetJson {
    /// Poset with the transitive closure of the listed relations.
    pub fn to_poset(&self) -> Result<Poset, IoError> {
        Ok(Poset::new(&self.elements, &self.relations)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowJson {
    pub label: String,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverJson {
    pub nodes: Vec<String>,
    pub arrows: Vec<ArrowJson>,
    #[serde(default)]
    pub max_len: Option<usize>,
}

impl QuiverJson {
    pub fn to_quiver(&self) -> Result<Quiver, IoError> {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                label: a.label.clone(),
                from: a.from.clone(),
                to: a.to.clone(),
            })
            .collect();
        Ok(Quiver::new(self.nodes.clone(), arrows, self.max_len)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectsJson {
    pub ids: Vec<String>,
    pub start: BTreeMap<String, String>,
    pub end: BTreeMap<String, String>,
}

/// Explicit table; keys of `table` are `"a,b"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableJson {
    pub elements: Vec<String>,
    pub zero: String,
    pub table: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects: Option<ObjectsJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialParams {
    pub vars: usize,
    pub max_degree: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialJson {
    pub monomial: MonomialParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixUnitsJson {
    pub matrix_units: usize,
}

/// Any of the accepted semigroup descriptions, told apart by their keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SemigroupJson {
    Table(TableJson),
    Poset(PosetJson),
    Quiver(QuiverJson),
    Monomial(MonomialJson),
    MatrixUnits(MatrixUnitsJson),
}

impl SemigroupJson {
    pub fn to_table(&self) -> Result<SemigroupTable, IoError> {
        Ok(match self {
            SemigroupJson::Table(t) => table_from_json(t)?,
            SemigroupJson::Poset(p) => poset_semigroup(&p.to_poset()?)?,
            SemigroupJson::Quiver(q) => quiver_path_semigroup(&q.to_quiver()?)?,
            SemigroupJson::Monomial(m) => {
                monomial_semigroup(m.monomial.vars, m.monomial.max_degree)?
            }
            SemigroupJson::MatrixUnits(m) => matrix_unit_semigroup(m.matrix_units)?,
        })
    }
}

fn table_from_json(t: &TableJson) -> Result<SemigroupTable, IoError> {
    let mut product = HashMap::new();
    for (key, c) in &t.table {
        let mut parts = key.split(',');
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(IoError::Schema(format!(
                "table key `{key}` must have the form \"a,b\""
            )));
        };
        product.insert((a.trim().to_string(), b.trim().to_string()), c.clone());
    }
    let s = SemigroupTable::build_from_table(&t.elements, &t.zero, &product)?;
    match &t.objects {
        None => Ok(s),
        Some(o) => {
            let start: HashMap<String, String> = o.start.clone().into_iter().collect();
            let end: HashMap<String, String> = o.end.clone().into_iter().collect();
            Ok(s.with_objects(&o.ids, &start, &end)?)
        }
    }
}

/// Full table of `s`, including its object structure when present.
pub fn table_to_json(s: &SemigroupTable) -> TableJson {
    let mut table = BTreeMap::new();
    for a in s.elements() {
        for b in s.elements() {
            table.insert(
                format!("{},{}", s.name(a), s.name(b)),
                s.name(s.mul(a, b)).to_string(),
            );
        }
    }
    let objects = s.objects().map(|ids| {
        let (mut start, mut end) = (BTreeMap::new(), BTreeMap::new());
        for a in s.nonzero() {
            if let (Some(x), Some(y)) = (s.start(a), s.end(a)) {
                start.insert(s.name(a).to_string(), s.name(x).to_string());
                end.insert(s.name(a).to_string(), s.name(y).to_string());
            }
        }
        ObjectsJson {
            ids: ids.iter().map(|&o| s.name(o).to_string()).collect(),
            start,
            end,
        }
    });
    TableJson {
        elements: s.names().to_vec(),
        zero: s.name(s.zero()).to_string(),
        table,
        objects,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub vertices: Vec<String>,
    pub maximal_simplices: Vec<Vec<String>>,
}

impl ComplexJson {
    pub fn to_complex(&self) -> Result<SimplicialComplex, IoError> {
        Ok(SimplicialComplex::from_maximal(
            &self.vertices,
            &self.maximal_simplices,
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CoeffsJson {
    Rationals,
    Mod { tau: String },
}

impl CoeffsJson {
    pub fn to_coeffs(&self) -> Result<Coefficients, IoError> {
        match self {
            CoeffsJson::Rationals => Ok(Coefficients::Rationals),
            CoeffsJson::Mod { tau } => Ok(Coefficients::mod_tau(rational(tau)?)?),
        }
    }

    pub fn from_coeffs(c: &Coefficients) -> Self {
        match c {
            Coefficients::Rationals => CoeffsJson::Rationals,
            Coefficients::ModTau(t) => CoeffsJson::Mod {
                tau: format_rational(t),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueJson {
    pub args: Vec<String>,
    pub value: String,
}

/// Values not listed are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainJson {
    pub degree: usize,
    pub coeffs: CoeffsJson,
    pub values: Vec<ValueJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semigroup: Option<SemigroupJson>,
}

fn lookup(s: &SemigroupTable, names: &[String]) -> Result<Vec<Elem>, IoError> {
    names
        .iter()
        .map(|n| {
            s.element(n)
                .ok_or_else(|| IoError::Semigroup(SemigroupError::UnknownElement(n.clone())))
        })
        .collect()
}

fn fill(c: &mut Cochain, values: &[ValueJson]) -> Result<(), IoError> {
    for v in values {
        let tuple = lookup(c.semigroup(), &v.args)?;
        c.set(&tuple, rational(&v.value)?)?;
    }
    Ok(())
}

fn values_to_json(c: &Cochain) -> Vec<ValueJson> {
    let s = c.semigroup();
    c.nonzero_values()
        .map(|(t, v)| ValueJson {
            args: t.iter().map(|&e| s.name(e).to_string()).collect(),
            value: format_rational(v),
        })
        .collect()
}

fn resolve(
    embedded: &Option<SemigroupJson>,
    given: Option<Arc<SemigroupTable>>,
) -> Result<Arc<SemigroupTable>, IoError> {
    match (given, embedded) {
        (Some(s), _) => Ok(s),
        (None, Some(j)) => Ok(Arc::new(j.to_table()?)),
        (None, None) => Err(IoError::Schema(
            "no semigroup given and none embedded in the document".into(),
        )),
    }
}

impl CochainJson {
    /// Builds the cochain on `semigroup`, or on the embedded one if `None`.
    pub fn to_cochain(&self, semigroup: Option<Arc<SemigroupTable>>) -> Result<Cochain, IoError> {
        let s = resolve(&self.semigroup, semigroup)?;
        let mut c = Cochain::zero(s, self.degree, self.coeffs.to_coeffs()?);
        fill(&mut c, &self.values)?;
        Ok(c)
    }

    pub fn from_cochain(c: &Cochain) -> Self {
        CochainJson {
            degree: c.degree(),
            coeffs: CoeffsJson::from_coeffs(c.coeffs()),
            values: values_to_json(c),
            semigroup: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Real,
    Circle,
}

/// A twist given by its additive exponent. Real mode needs `hbar`, circle
/// mode needs `tau`; the exponent's coefficients follow from the mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistJson {
    pub mode: ModeName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<String>,
    #[serde(default = "two")]
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<CoeffsJson>,
    pub values: Vec<ValueJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semigroup: Option<SemigroupJson>,
}

fn two() -> usize {
    2
}

impl TwistJson {
    /// Exponent cochain and mode, without checking the cocycle condition.
    pub fn exponent(
        &self,
        semigroup: Option<Arc<SemigroupTable>>,
    ) -> Result<(Cochain, TwistMode), IoError> {
        let s = resolve(&self.semigroup, semigroup)?;
        let need = |field: &Option<String>, name: &str| {
            field
                .as_deref()
                .ok_or_else(|| IoError::Schema(format!("{name} is required for this mode")))
                .and_then(rational)
        };
        let (mode, coeffs) = match self.mode {
            ModeName::Real => (
                TwistMode::RealExponential(need(&self.hbar, "hbar")?),
                Coefficients::Rationals,
            ),
            ModeName::Circle => {
                let tau = need(&self.tau, "tau")?;
                (TwistMode::Circle(tau.clone()), Coefficients::mod_tau(tau)?)
            }
        };
        if let Some(c) = &self.coeffs {
            if c.to_coeffs()? != coeffs {
                return Err(IoError::Schema(
                    "coeffs disagree with the twist mode".into(),
                ));
            }
        }
        if self.degree != 2 {
            return Err(IoError::Twist(TwistError::WrongDegree(self.degree)));
        }
        let mut c = Cochain::zero(s, 2, coeffs);
        fill(&mut c, &self.values)?;
        Ok((c, mode))
    }

    pub fn to_twist(&self, semigroup: Option<Arc<SemigroupTable>>) -> Result<Twist, IoError> {
        let (f, mode) = self.exponent(semigroup)?;
        Ok(match mode {
            TwistMode::RealExponential(hbar) => exp_twist(&f, hbar)?,
            TwistMode::Circle(_) => circle_twist(&f)?,
        })
    }

    pub fn from_twist(t: &Twist) -> Self {
        let (mode, hbar, tau) = match t.mode() {
            TwistMode::RealExponential(h) => (ModeName::Real, Some(format_rational(h)), None),
            TwistMode::Circle(tau) => (ModeName::Circle, None, Some(format_rational(tau))),
        };
        TwistJson {
            mode,
            hbar,
            tau,
            degree: 2,
            coeffs: Some(CoeffsJson::from_coeffs(t.exponent().coeffs())),
            values: values_to_json(t.exponent()),
            semigroup: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexNumberJson {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl From<Complex64> for ComplexNumberJson {
    fn from(z: Complex64) -> Self {
        ComplexNumberJson { re: z.re, im: z.im }
    }
}

impl From<ComplexNumberJson> for Complex64 {
    fn from(z: ComplexNumberJson) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Element of the semigroup algebra: coefficients by element name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub terms: BTreeMap<String, ComplexNumberJson>,
}

impl AlgebraJson {
    pub fn to_element(&self, s: Arc<SemigroupTable>) -> Result<AlgebraElement<Complex64>, IoError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (name, c) in &self.terms {
            let e = lookup(&s, std::slice::from_ref(name))?[0];
            terms.push((e, Complex64::from(*c)));
        }
        Ok(AlgebraElement::from_terms(s, terms))
    }

    pub fn from_element(x: &AlgebraElement<Complex64>) -> Self {
        let s = x.semigroup();
        AlgebraJson {
            terms: x
                .terms()
                .map(|(e, c)| (s.name(e).to_string(), (*c).into()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceName {
    Plane,
    Sphere,
}

/// Piecewise-geodesic path: `(q, p)` pairs on the plane, unit vectors on a
/// sphere of the given radius (default 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathJson {
    pub space: SpaceName,
    pub vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PathValue {
    Plane(PlanePolyline<f64>),
    Sphere(SphereGeodesicPath<f64>),
}

impl PathJson {
    pub fn to_path(&self) -> Result<PathValue, IoError> {
        let dim = match self.space {
            SpaceName::Plane => 2,
            SpaceName::Sphere => 3,
        };
        if let Some(v) = self.vertices.iter().find(|v| v.len() != dim) {
            return Err(IoError::Schema(format!(
                "vertex of length {} in a {dim}-coordinate path",
                v.len()
            )));
        }
        Ok(match self.space {
            SpaceName::Plane => {
                if self.radius.is_some() {
                    return Err(IoError::Schema("plane paths take no radius".into()));
                }
                PathValue::Plane(PlanePolyline::new(
                    self.vertices
                        .iter()
                        .map(|v| PhasePoint::new(v[0], v[1]))
                        .collect(),
                )?)
            }
            SpaceName::Sphere => PathValue::Sphere(SphereGeodesicPath::new(
                self.radius.unwrap_or(1.0),
                self.vertices
                    .iter()
                    .map(|v| Vec3::new(v[0], v[1], v[2]))
                    .collect(),
            )?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twist::Multiplier;

    const CHAIN: &str = r#"{"elements":["0","1","2"],"relations":[["0","1"],["1","2"]]}"#;

    #[test]
    fn poset_closure_on_load() {
        let p: SemigroupJson = from_json(CHAIN).unwrap();
        assert!(matches!(p, SemigroupJson::Poset(_)));
        let s = p.to_table().unwrap();
        // 3 objects, 3 strict relations after closure, plus zero.
        assert_eq!(s.len(), 7);
    }

    #[test]
    fn table_round_trip() {
        let s = matrix_unit_semigroup(2).unwrap();
        let j = table_to_json(&s);
        let back: SemigroupJson = from_json(&to_json(&j)).unwrap();
        assert_eq!(back.to_table().unwrap(), s);
        let bad = r#"{"elements":["0"],"zero":"0","table":{"0;0":"0"}}"#;
        assert_eq!(
            from_json::<SemigroupJson>(bad)
                .unwrap()
                .to_table()
                .unwrap_err()
                .variant(),
            "Schema"
        );
    }

    #[test]
    fn other_semigroup_forms() {
        let q =
            r#"{"nodes":["u","v"],"arrows":[{"label":"a","from":"u","to":"v"}],"max_len":null}"#;
        assert!(matches!(
            from_json::<SemigroupJson>(q).unwrap(),
            SemigroupJson::Quiver(_)
        ));
        let m: SemigroupJson = from_json(r#"{"monomial":{"vars":2,"max_degree":2}}"#).unwrap();
        assert_eq!(m.to_table().unwrap().len(), 7);
        let e: SemigroupJson = from_json(r#"{"matrix_units":2}"#).unwrap();
        assert_eq!(e.to_table().unwrap().len(), 5);
    }

    #[test]
    fn cochain_round_trip() {
        let text = format!(
            r#"{{"degree":1,"coeffs":{{"kind":"rationals"}},"values":[{{"args":["e01"],"value":"3/2"}}],"semigroup":{CHAIN}}}"#
        );
        let j: CochainJson = from_json(&text).unwrap();
        let c = j.to_cochain(None).unwrap();
        let s = c.semigroup().clone();
        assert_eq!(
            c.get(&[s.element("e01").unwrap()]),
            Rational::new(3.into(), 2.into())
        );
        let back = CochainJson::from_cochain(&c).to_cochain(Some(s)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn twist_modes() {
        let text = format!(r#"{{"mode":"circle","tau":"1","values":[],"semigroup":{CHAIN}}}"#);
        let t = from_json::<TwistJson>(&text)
            .unwrap()
            .to_twist(None)
            .unwrap();
        let s = t.semigroup().clone();
        let e = s.element("e01").unwrap();
        assert_eq!(
            t.value(e, s.element("e12").unwrap()),
            Some(Multiplier::turn(Rational::from_integer(0.into())))
        );
        let missing = format!(r#"{{"mode":"real","values":[],"semigroup":{CHAIN}}}"#);
        assert_eq!(
            from_json::<TwistJson>(&missing)
                .unwrap()
                .to_twist(None)
                .unwrap_err()
                .variant(),
            "Schema"
        );
        let j = TwistJson::from_twist(&t);
        assert_eq!(j.to_twist(Some(s)).unwrap(), t);
    }

    #[test]
    fn paths() {
        let p: PathJson = from_json(r#"{"space":"plane","vertices":[[0,0],[1,0],[1,1]]}"#).unwrap();
        assert!(matches!(p.to_path().unwrap(), PathValue::Plane(_)));
        let bad: PathJson =
            from_json(r#"{"space":"sphere","vertices":[[2,0,0],[0,1,0]]}"#).unwrap();
        assert_eq!(bad.to_path().unwrap_err().variant(), "NotUnit");
    }
}
